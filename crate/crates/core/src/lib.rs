//! Tangent slopes of the stable manifold of an analytically perturbed
//! hyperbolic toral automorphism, computed from tree-indexed perturbation
//! series.
//!
//! The pipeline, bottom up:
//!
//! * [`torus`]: the torus, the linear automorphism `S0` with its eigen data,
//!   trigonometric perturbations `f` and the perturbed map `S0 - eps f`.
//! * [`trees`]: ordered trees, labeled and derivative trees, product trees,
//!   cuts and breakings, half-labeled keys and reduced labelings.
//! * [`conjugacy`]: node and tree values, the order-`k` conjugacy terms
//!   `h^(k)` and the truncated conjugacy `H_eps`.
//! * [`series`]: power-series inversion and the finite-`t` quotient `q_n(t)`.
//! * [`slope`]: the canceled per-order values `Val[q_n(0)]` and the slope
//!   `v_eps(psi)`.
//! * [`bounds`]: Eulerian numbers, majorants and a radius estimate.
//! * [`oracle`]: Jacobian-based numerical ground truth.
//! * [`acceptance`]: the acceptance criteria as runnable checks.

pub mod acceptance;
pub mod bounds;
pub mod conjugacy;
mod engine;
pub mod error;
pub mod oracle;
pub mod series;
pub mod sign;
pub mod slope;
pub mod sum;
pub mod torus;
pub mod trees;

pub use error::{Error, Result};
pub use sign::Sign;

/// Worker threads for parallel sweeps: `ANOSOV_THREADS` (0 or unset = auto).
pub fn configured_threads() -> usize {
    std::env::var("ANOSOV_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0)
}

/// Map `f` over `items` in parallel when the `parallel` feature is on,
/// preserving input order in the output.
pub fn ordered_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Size the global worker pool from [`configured_threads`]. Only the first
/// call has an effect; without the `parallel` feature this does nothing.
pub fn init_threads() {
    #[cfg(feature = "parallel")]
    {
        let n = configured_threads();
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
