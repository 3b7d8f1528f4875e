//! Run configuration, read from TOML.

use std::path::{Path, PathBuf};

use ising_core::formfactors::{BoundaryConvention, NormDamping, PrefactorConvention};
use ising_core::kinematics::MetricSign;
use ising_core::laurent::{PowerSumTower, SymmetricLaurentPolynomial};
use ising_core::testfunctions::{FourierConvention, FourierSign};
use ising_core::{BumpFunction, OmegaIndicatrix, Point2D, C64};
use serde::{Deserialize, Serialize};

/// Directory searched for configs given by bare file name.
pub const CONFIG_DIR_VAR: &str = "ISINGFF_CONFIG_DIR";
pub const DEFAULT_SEED: u64 = 0x15151;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Suites run when none are named on the command line.
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default)]
    pub conventions: ConventionSpec,
    #[serde(default)]
    pub car: CarConfig,
    #[serde(default)]
    pub pfaffian: PfaffianConfig,
    #[serde(default)]
    pub symmetry: IdentityConfig,
    #[serde(default)]
    pub periodicity: IdentityConfig,
    #[serde(default)]
    pub recursion: RecursionConfig,
    #[serde(default)]
    pub closability: ClosabilityConfig,
    #[serde(default)]
    pub qomega: QOmegaConfig,
    #[serde(default)]
    pub locality: LocalitySuiteConfig,
    #[serde(default, rename = "reeh-schlieder")]
    pub reeh_schlieder: ReehSchliederConfig,
    #[serde(default)]
    pub assembly: AssemblyConfig,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config is valid")
    }
}

pub const SUITES: [&str; 10] =
    ["car", "pfaffian", "symmetry", "periodicity", "recursion", "closability", "qomega", "locality", "reeh-schlieder", "assembly"];

impl RunConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Schema { path: path.to_path_buf(), message: e.to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text, path)
    }

    /// Resolves `name` directly, then inside `$ISINGFF_CONFIG_DIR`.
    pub fn resolve(name: &Path) -> PathBuf {
        if name.exists() || name.is_absolute() {
            return name.to_path_buf();
        }
        match std::env::var_os(CONFIG_DIR_VAR) {
            Some(dir) => Path::new(&dir).join(name),
            None => name.to_path_buf(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for s in &self.suites {
            check_suite(s)?;
        }
        let tolerances = [
            ("car.tolerance", self.car.tolerance),
            ("pfaffian.tolerance", self.pfaffian.tolerance),
            ("symmetry.tolerance", self.symmetry.tolerance),
            ("periodicity.tolerance", self.periodicity.tolerance),
            ("recursion.even_tolerance", self.recursion.even_tolerance),
            ("recursion.stability", self.recursion.stability),
            ("closability.refinement_tolerance", self.closability.refinement_tolerance),
            ("qomega.variation", self.qomega.variation),
            ("locality.tolerance", self.locality.tolerance),
            ("locality.min_contrast", self.locality.min_contrast),
            ("reeh-schlieder.threshold", self.reeh_schlieder.threshold),
            ("assembly.tolerance", self.assembly.tolerance),
        ];
        for (name, v) in tolerances.iter().copied().chain(self.recursion.odd.iter().map(|c| ("recursion.odd.tolerance", c.tolerance))) {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::Invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        self.locality.observable.family()?;
        for b in self.locality.left.iter().chain(&self.locality.right).chain(&self.locality.controls) {
            b.bump()?;
        }
        Ok(())
    }
}

pub fn check_suite(name: &str) -> Result<(), ConfigError> {
    if SUITES.contains(&name) {
        Ok(())
    } else {
        Err(ConfigError::Invalid(format!("unknown suite `{name}`; known suites: {}", SUITES.join(", "))))
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct ConventionSpec {
    #[serde(default)]
    pub metric: MetricSpec,
    #[serde(default)]
    pub fourier_sign: SignSpec,
    #[serde(default)]
    pub boundary: BoundarySpec,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum MetricSpec {
    #[default]
    Standard,
    Flipped,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum SignSpec {
    #[default]
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySpec {
    ReversedUpper,
    #[default]
    NaturalUpper,
    ReversedLower,
    NaturalLower,
}

impl ConventionSpec {
    pub fn fourier(&self) -> FourierConvention {
        FourierConvention {
            metric: match self.metric {
                MetricSpec::Standard => MetricSign::Standard,
                MetricSpec::Flipped => MetricSign::Flipped,
            },
            sign: match self.fourier_sign {
                SignSpec::Plus => FourierSign::Plus,
                SignSpec::Minus => FourierSign::Minus,
            },
        }
    }

    pub fn boundary(&self) -> BoundaryConvention {
        match self.boundary {
            BoundarySpec::ReversedUpper => BoundaryConvention::ReversedUpper,
            BoundarySpec::NaturalUpper => BoundaryConvention::NaturalUpper,
            BoundarySpec::ReversedLower => BoundaryConvention::ReversedLower,
            BoundarySpec::NaturalLower => BoundaryConvention::NaturalLower,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BumpSpec {
    pub center: [f64; 2],
    pub radius: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

impl BumpSpec {
    pub const fn new(t: f64, x: f64, radius: f64) -> Self {
        Self { center: [t, x], radius, amplitude: 1.0 }
    }

    pub fn bump(&self) -> Result<BumpFunction, ConfigError> {
        BumpFunction::new(Point2D::new(self.center[0], self.center[1]), self.radius, self.amplitude).map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OmegaSpec {
    LogPower { ell: f64 },
    StretchedPower { alpha: f64 },
}

impl OmegaSpec {
    pub fn omega(&self) -> Result<OmegaIndicatrix, ConfigError> {
        match *self {
            OmegaSpec::LogPower { ell } => OmegaIndicatrix::log_power(ell),
            OmegaSpec::StretchedPower { alpha } => OmegaIndicatrix::stretched_power(alpha),
        }
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

/// One monomial `coefficient · Π x_i^{exponents_i}` before symmetrization.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MonomialSpec {
    pub exponents: Vec<i32>,
    pub coefficient: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Even { half_length: usize, terms: Vec<MonomialSpec>, bump: BumpSpec, region_radius: f64 },
    Odd { s: i32, bump: BumpSpec, region_radius: f64, omega: OmegaSpec },
}

impl FamilySpec {
    pub fn family_with(&self, fourier: FourierConvention) -> Result<ising_core::formfactors::FormFactorFamily<f64>, ConfigError> {
        use std::sync::Arc;
        let err = |e: ising_core::Error| ConfigError::Invalid(e.to_string());
        match self {
            FamilySpec::Even { half_length, terms, bump, region_radius } => {
                let t: Vec<(Vec<i32>, C64)> = terms.iter().map(|m| (m.exponents.clone(), C64::new(m.coefficient[0], m.coefficient[1]))).collect();
                let p = SymmetricLaurentPolynomial::new(2 * half_length, &t).map_err(err)?;
                let cache = Arc::new(ising_core::FourierCache::new(bump.bump()?, fourier));
                ising_core::formfactors::FormFactorFamily::even(*half_length, p, cache, *region_radius, 1.0).map_err(err)
            }
            FamilySpec::Odd { s, bump, region_radius, omega } => {
                let cache = Arc::new(ising_core::FourierCache::new(bump.bump()?, fourier));
                ising_core::formfactors::FormFactorFamily::odd(
                    PowerSumTower::odd(*s),
                    PrefactorConvention::PerLevel,
                    cache,
                    *region_radius,
                    1.0,
                    omega.omega()?,
                )
                .map_err(err)
            }
        }
    }

    pub fn family(&self) -> Result<ising_core::formfactors::FormFactorFamily<f64>, ConfigError> {
        self.family_with(FourierConvention::default())
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct CarConfig {
    pub nodes: usize,
    pub theta_max: f64,
    pub cap: usize,
    pub tolerance: f64,
}

impl Default for CarConfig {
    fn default() -> Self {
        Self { nodes: 32, theta_max: 4.0, cap: 4, tolerance: 1e-12 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct PfaffianConfig {
    pub sizes: Vec<usize>,
    pub samples: usize,
    pub re_max: f64,
    pub tolerance: f64,
}

impl Default for PfaffianConfig {
    fn default() -> Self {
        Self { sizes: vec![2, 4, 6], samples: 20, re_max: 2.0, tolerance: 1e-10 }
    }
}

/// Shared by the symmetry and periodicity suites.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct IdentityConfig {
    pub even_half_lengths: Vec<usize>,
    /// Odd members `2j+1` for `j` in this list.
    pub odd_levels: Vec<usize>,
    /// Odd tower `P_{2j+1} = Σ x_i^{2s+1}`.
    pub odd_s: i32,
    pub samples: usize,
    pub re_max: f64,
    pub bump: BumpSpec,
    pub tolerance: f64,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        Self {
            even_half_lengths: (1..=6).collect(),
            odd_levels: (0..=5).collect(),
            odd_s: 1,
            samples: 100,
            re_max: 2.0,
            bump: BumpSpec::new(0.02, -0.03, 0.22),
            tolerance: 1e-10,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OddRecursionCase {
    pub length: usize,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RecursionConfig {
    pub odd: Vec<OddRecursionCase>,
    /// Odd tower `P_{2j+1} = Σ x_i^{2s+1}`.
    pub odd_s: i32,
    pub even_half_lengths: Vec<usize>,
    pub samples: usize,
    pub radius: f64,
    pub points: usize,
    /// Allowed relative change of the residue under radius halving with doubled points.
    pub stability: f64,
    pub even_tolerance: f64,
    pub bump: BumpSpec,
}

impl Default for RecursionConfig {
    fn default() -> Self {
        Self {
            odd: vec![OddRecursionCase { length: 3, tolerance: 1e-6 }, OddRecursionCase { length: 5, tolerance: 1e-5 }],
            odd_s: 1,
            even_half_lengths: vec![1, 2, 3],
            samples: 10,
            radius: 0.1,
            points: 64,
            stability: 1e-8,
            even_tolerance: 1e-12,
            bump: BumpSpec::new(0.02, -0.03, 0.22),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ClosabilityConfig {
    pub bump: BumpSpec,
    pub even_omega: OmegaSpec,
    pub even_nodes: Vec<usize>,
    pub even_theta_max: f64,
    pub refinement_tolerance: f64,
    /// Odd tower `P_{2j+1} = Σ x_i^{2s+1}`.
    pub odd_s: i32,
    pub odd_omega: OmegaSpec,
    pub control_omega: OmegaSpec,
    pub m_max: usize,
    pub odd_nodes: usize,
    pub odd_theta_max: f64,
    pub norm_damping: NormDamping,
}

impl Default for ClosabilityConfig {
    fn default() -> Self {
        Self {
            bump: BumpSpec::new(0.0, 0.0, 0.3),
            even_omega: OmegaSpec::LogPower { ell: 4.0 },
            even_nodes: vec![48, 96],
            even_theta_max: 6.0,
            refinement_tolerance: 0.02,
            odd_s: 0,
            odd_omega: OmegaSpec::StretchedPower { alpha: 0.4 },
            control_omega: OmegaSpec::LogPower { ell: 1.0 },
            m_max: 7,
            odd_nodes: 20,
            odd_theta_max: 6.5,
            norm_damping: NormDamping::TotalEnergy,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct QOmegaConfig {
    pub nodes: Vec<usize>,
    pub theta_max: f64,
    pub cap: usize,
    pub k: usize,
    pub omega: OmegaSpec,
    pub bump: BumpSpec,
    pub variation: f64,
}

impl Default for QOmegaConfig {
    fn default() -> Self {
        Self {
            nodes: vec![16, 32, 64],
            theta_max: 4.0,
            cap: 2,
            k: 2,
            omega: OmegaSpec::LogPower { ell: 6.0 },
            bump: BumpSpec::new(0.0, 0.0, 0.3),
            variation: 0.1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct LocalitySuiteConfig {
    pub nodes: usize,
    pub theta_max: f64,
    pub cap: usize,
    pub k_cap: usize,
    pub region_radius: f64,
    pub observable: FamilySpec,
    pub left: Vec<BumpSpec>,
    pub right: Vec<BumpSpec>,
    pub controls: Vec<BumpSpec>,
    pub tolerance: f64,
    pub min_contrast: f64,
    pub margin: f64,
    pub scan_omega: OmegaSpec,
    /// Run every boundary convention and require a unique passing one.
    pub arbitrate: bool,
}

impl Default for LocalitySuiteConfig {
    fn default() -> Self {
        Self {
            nodes: 24,
            theta_max: 3.0,
            cap: 3,
            k_cap: 2,
            region_radius: 0.5,
            observable: FamilySpec::Even {
                half_length: 1,
                terms: vec![MonomialSpec { exponents: vec![0, 0], coefficient: [1.0, 0.0] }],
                bump: BumpSpec::new(0.0, 0.0, 0.3),
                region_radius: 0.5,
            },
            left: vec![BumpSpec::new(0.0, -1.5, 0.4), BumpSpec::new(0.3, -2.0, 0.4), BumpSpec::new(0.0, -2.5, 0.5)],
            right: vec![BumpSpec::new(0.0, 1.5, 0.4), BumpSpec::new(-0.3, 2.0, 0.4), BumpSpec::new(0.0, 2.5, 0.5)],
            controls: vec![BumpSpec::new(0.0, 0.0, 0.4), BumpSpec::new(0.2, 0.3, 0.3), BumpSpec::new(-0.1, -0.4, 0.3)],
            tolerance: 1e-3,
            min_contrast: 10.0,
            margin: 0.1,
            scan_omega: OmegaSpec::LogPower { ell: 3.0 },
            arbitrate: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ReehSchliederConfig {
    pub nodes: usize,
    pub theta_max: f64,
    pub cap: usize,
    pub even_members: usize,
    pub odd_members: usize,
    pub threshold: f64,
    pub region_radius: f64,
}

impl Default for ReehSchliederConfig {
    fn default() -> Self {
        Self { nodes: 6, theta_max: 3.0, cap: 2, even_members: 50, odd_members: 20, threshold: 1e-10, region_radius: 0.5 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct AssemblyConfig {
    /// `(nodes, cap)` pairs.
    pub grids: Vec<[usize; 2]>,
    pub theta_max: f64,
    pub tolerance: f64,
    pub bump: BumpSpec,
}

impl Default for AssemblyConfig {
    fn default() -> Self {
        Self { grids: vec![[3, 2], [4, 2], [4, 3]], theta_max: 2.5, tolerance: 1e-12, bump: BumpSpec::new(0.05, -0.1, 0.2) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_takes_defaults() {
        let c = RunConfig::parse("", Path::new("x")).unwrap();
        assert_eq!(c.seed, DEFAULT_SEED);
        assert!(c.suites.is_empty());
    }

    #[test]
    fn unknown_field_is_a_schema_error() {
        let e = RunConfig::parse("[car]\nnodez = 3\n", Path::new("x")).unwrap_err();
        assert!(matches!(e, ConfigError::Schema { .. }));
        assert!(e.to_string().contains("nodez"));
    }

    #[test]
    fn nonpositive_tolerance_rejected() {
        assert!(matches!(RunConfig::parse("[car]\ntolerance = 0.0\n", Path::new("x")), Err(ConfigError::Invalid(_))));
        assert!(matches!(RunConfig::parse("suites = [\"nope\"]\n", Path::new("x")), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn hex_seed() {
        assert_eq!(RunConfig::parse("seed = 0x10\n", Path::new("x")).unwrap().seed, 16);
    }
}
