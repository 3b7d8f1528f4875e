//! Points, wedges and double cones in two-dimensional Minkowski space.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Spacetime point `(t, x)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point2D<T> {
    pub t: T,
    pub x: T,
}

impl<T: Real> Point2D<T> {
    pub fn new(t: T, x: T) -> Self {
        Self { t, x }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn reflected(self) -> Self {
        Self::new(-self.t, -self.x)
    }

    pub fn translated(self, by: Self) -> Self {
        Self::new(self.t + by.t, self.x + by.x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Right wedge `{x1 - e1 > |t - e0|}` or its causal complement, the left wedge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wedge<T> {
    pub edge: Point2D<T>,
    pub side: Side,
}

impl<T: Real> Wedge<T> {
    pub fn right(edge: Point2D<T>) -> Self {
        Self { edge, side: Side::Right }
    }

    pub fn left(edge: Point2D<T>) -> Self {
        Self { edge, side: Side::Left }
    }

    /// Signed Euclidean distance from `p` to the wedge boundary, positive inside.
    pub fn depth(&self, p: Point2D<T>) -> T {
        let dx = p.x - self.edge.x;
        let dt = (p.t - self.edge.t).abs();
        let s = match self.side {
            Side::Right => dx - dt,
            Side::Left => -dx - dt,
        };
        s / T::SQRT_2()
    }

    pub fn contains(&self, p: Point2D<T>) -> bool {
        self.depth(p) > T::zero()
    }
}

/// Double cone `W_x ∩ W'_y` between a left tip `x` and a right tip `y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleCone<T> {
    left_tip: Point2D<T>,
    right_tip: Point2D<T>,
}

impl<T: Real> DoubleCone<T> {
    pub fn new(left_tip: Point2D<T>, right_tip: Point2D<T>) -> Result<Self> {
        let dx = right_tip.x - left_tip.x;
        let dt = (right_tip.t - left_tip.t).abs();
        if !(dx > dt) {
            return Err(Error::MalformedDoubleCone(format!(
                "tips ({:?}, {:?}) are not spacelike with the left tip on the left",
                (left_tip.t, left_tip.x),
                (right_tip.t, right_tip.x)
            )));
        }
        Ok(Self { left_tip, right_tip })
    }

    /// `O_r`, the double cone with tips `(0, -r)` and `(0, r)`.
    pub fn standard(radius: T) -> Result<Self> {
        Self::new(Point2D::new(T::zero(), -radius), Point2D::new(T::zero(), radius))
    }

    pub fn left_tip(&self) -> Point2D<T> {
        self.left_tip
    }

    pub fn right_tip(&self) -> Point2D<T> {
        self.right_tip
    }

    pub fn wedges(&self) -> (Wedge<T>, Wedge<T>) {
        (Wedge::right(self.left_tip), Wedge::left(self.right_tip))
    }

    /// Wedge to the left of the cone, spacelike to all of it.
    pub fn left_complement(&self) -> Wedge<T> {
        Wedge::left(self.left_tip)
    }

    /// Wedge to the right of the cone, spacelike to all of it.
    pub fn right_complement(&self) -> Wedge<T> {
        Wedge::right(self.right_tip)
    }

    pub fn depth(&self, p: Point2D<T>) -> T {
        let (a, b) = self.wedges();
        a.depth(p).min(b.depth(p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region<T> {
    Wedge(Wedge<T>),
    DoubleCone(DoubleCone<T>),
}

impl<T: Real> Region<T> {
    pub fn depth(&self, p: Point2D<T>) -> T {
        match self {
            Region::Wedge(w) => w.depth(p),
            Region::DoubleCone(d) => d.depth(p),
        }
    }

    /// Whether the closed disc of `radius` around `center` lies in the region
    /// with at least `margin` to spare.
    pub fn contains_ball(&self, center: Point2D<T>, radius: T, margin: T) -> bool {
        self.depth(center) >= radius + margin
    }
}

impl<T: Real> From<Wedge<T>> for Region<T> {
    fn from(w: Wedge<T>) -> Self {
        Region::Wedge(w)
    }
}

impl<T: Real> From<DoubleCone<T>> for Region<T> {
    fn from(d: DoubleCone<T>) -> Self {
        Region::DoubleCone(d)
    }
}

/// Open-region membership test.
pub fn region_contains<T: Real>(region: &Region<T>, p: Point2D<T>) -> bool {
    region.depth(p) > T::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_cone_membership() {
        let o = DoubleCone::standard(1.0_f64).unwrap();
        let r = Region::from(o);
        assert!(region_contains(&r, Point2D::new(0.0, 0.0)));
        assert!(!region_contains(&r, Point2D::new(0.0, 1.0)));
        assert!(!region_contains(&r, Point2D::new(0.9, 0.5)));
        assert!(region_contains(&r, Point2D::new(0.4, 0.5)));
    }

    #[test]
    fn malformed_cone_rejected() {
        let e = DoubleCone::new(Point2D::new(0.0, 1.0), Point2D::new(0.0, -1.0));
        assert!(matches!(e, Err(Error::MalformedDoubleCone(_))));
        let e = DoubleCone::new(Point2D::new(0.0, 0.0), Point2D::new(2.0, 1.0));
        assert!(e.is_err());
    }

    #[test]
    fn complements_are_spacelike_to_cone() {
        let o = DoubleCone::standard(0.5_f64).unwrap();
        let l = o.left_complement();
        let r = o.right_complement();
        assert!(l.contains(Point2D::new(0.0, -1.5)));
        assert!(!l.contains(Point2D::new(0.0, -0.4)));
        assert!(r.contains(Point2D::new(0.3, 1.5)));
        assert!(!r.contains(Point2D::new(0.0, 0.2)));
    }

    #[test]
    fn ball_inclusion_agrees_with_extreme_points() {
        let w: Region<f64> = Wedge::right(Point2D::new(0.0, 0.5)).into();
        let c = Point2D::new(0.2, 1.6);
        let rho = 0.4;
        let inside = w.contains_ball(c, rho, 0.0);
        let extremes_inside = (0..360).all(|k| {
            let a = (k as f64).to_radians();
            region_contains(&w, Point2D::new(c.t + rho * a.sin(), c.x + rho * a.cos()))
        });
        assert_eq!(inside, extremes_inside);
        assert!(!w.contains_ball(Point2D::new(0.0, 0.9), 0.4, 0.0));
    }
}
