use std::path::{Path, PathBuf};

use anosov_core::acceptance::default_perturbation;
use anosov_core::torus::{Mat2, TorusPoint, TrigPoly, FIBONACCI};
use anosov_core::trees::{RestrictMode, MAX_NODES};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const MAX_PMAX: u32 = 1000;
pub const MAX_POINTS: usize = 1_000_000;

/// One `eps` or a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsSpec {
    One(f64),
    Sweep(Vec<f64>),
}

impl EpsSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            EpsSpec::One(e) => vec![*e],
            EpsSpec::Sweep(v) => v.clone(),
        }
    }
}

/// A single point, a uniform `n1 x n2` grid, or `n` seeded random points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PsiSpec {
    Point([f64; 2]),
    Grid { grid: [usize; 2] },
    Random { random: usize },
}

impl PsiSpec {
    pub fn count(&self) -> usize {
        match self {
            PsiSpec::Point(_) => 1,
            PsiSpec::Grid { grid } => grid[0].saturating_mul(grid[1]),
            PsiSpec::Random { random } => *random,
        }
    }

    /// Grid points run over `theta1` first, then `theta2`.
    pub fn points(&self, seed: u64) -> Vec<TorusPoint> {
        use std::f64::consts::TAU;
        match self {
            PsiSpec::Point(p) => vec![TorusPoint::new(p[0], p[1])],
            PsiSpec::Grid { grid: [n1, n2] } => (0..*n2)
                .flat_map(|j| {
                    (0..*n1).map(move |i| {
                        TorusPoint::new(TAU * i as f64 / *n1 as f64, TAU * j as f64 / *n2 as f64)
                    })
                })
                .collect(),
            PsiSpec::Random { random } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..*random).map(|_| TorusPoint::random(&mut rng)).collect()
            }
        }
    }
}

fn default_matrix() -> Mat2 {
    FIBONACCI
}
fn default_eps() -> EpsSpec {
    EpsSpec::One(0.01)
}
fn default_psi() -> PsiSpec {
    PsiSpec::Point([0.0, 0.0])
}
fn default_k() -> usize {
    3
}
fn default_pmax() -> u32 {
    40
}
fn default_t_list() -> Vec<f64> {
    vec![1e-2, 5e-3, 2.5e-3]
}
fn default_mode() -> RestrictMode {
    RestrictMode::StemMinusOnly
}
fn default_seed() -> u64 {
    anosov_core::acceptance::AcceptanceConfig::default().seed
}
fn default_iters() -> usize {
    anosov_core::oracle::DEFAULT_ITERS
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_matrix")]
    pub matrix: Mat2,
    #[serde(default = "default_perturbation")]
    pub coeffs: TrigPoly,
    #[serde(default = "default_eps")]
    pub eps: EpsSpec,
    #[serde(default = "default_psi")]
    pub psi: PsiSpec,
    #[serde(rename = "K", default = "default_k")]
    pub k: usize,
    #[serde(default = "default_pmax")]
    pub pmax: u32,
    #[serde(default = "default_t_list")]
    pub t_list: Vec<f64>,
    #[serde(default = "default_mode")]
    pub restrict_mode: RestrictMode,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub force: bool,
    #[serde(default = "default_iters")]
    pub n_iters: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults deserialize")
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.k == 0 || self.k > MAX_NODES {
            return Err(format!("K must be in 1..={MAX_NODES}, got {}", self.k));
        }
        if self.pmax == 0 || self.pmax > MAX_PMAX {
            return Err(format!("pmax must be in 1..={MAX_PMAX}, got {}", self.pmax));
        }
        let eps = self.eps.values();
        if eps.is_empty() || eps.iter().any(|e| !e.is_finite()) {
            return Err("eps must be one or more finite numbers".into());
        }
        if self.t_list.len() < 3
            || self.t_list.iter().any(|t| !(*t > 0.0) || !t.is_finite())
            || self.t_list.windows(2).any(|w| !(w[1] < w[0]))
        {
            return Err("t_list needs at least 3 positive, strictly decreasing values".into());
        }
        let n = self.psi.count();
        if n == 0 || n > MAX_POINTS {
            return Err(format!("psi must give between 1 and {MAX_POINTS} points, got {n}"));
        }
        if let PsiSpec::Point(p) = &self.psi {
            if !p.iter().all(|x| x.is_finite()) {
                return Err("psi must be finite".into());
            }
        }
        if self.n_iters < 10 {
            return Err(format!("n_iters must be at least 10, got {}", self.n_iters));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!(c.matrix, FIBONACCI);
        assert_eq!(c.k, 3);
        assert_eq!(c.pmax, 40);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn parses_specs() {
        let c: RunConfig =
            serde_json::from_str(r#"{"eps": [0.01, 0.02], "psi": {"grid": [4, 3]}, "K": 2}"#).unwrap();
        assert_eq!(c.eps.values(), [0.01, 0.02]);
        assert_eq!(c.psi.points(0).len(), 12);
        let r: RunConfig = serde_json::from_str(r#"{"psi": {"random": 5}, "seed": 9}"#).unwrap();
        assert_eq!(r.psi.points(9), r.psi.points(9));
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
        let bad: RunConfig = serde_json::from_str(r#"{"t_list": [0.1, 0.2, 0.05]}"#).unwrap();
        assert!(bad.validate().is_err());
    }
}
