use crate::quadrature::gauss_legendre;

/// Gauss–Legendre rapidity nodes on `[-Θ, Θ]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RapidityGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    theta_max: f64,
}

impl RapidityGrid {
    pub fn gauss_legendre(n: usize, theta_max: f64) -> Self {
        assert!(n > 0 && n <= 64, "grid size must lie in 1..=64");
        assert!(theta_max > 0.0, "rapidity cutoff must be positive");
        let (nodes, weights) = gauss_legendre::<f64>(n).mapped(-theta_max, theta_max);
        Self { nodes, weights, theta_max }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    pub fn sqrt_weight(&self, i: usize) -> f64 {
        self.weights[i].sqrt()
    }
}
