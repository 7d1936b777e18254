//! The torus `T^2 = R^2 / 2 pi Z^2`, the linear automorphism and its
//! perturbation.

mod automorphism;
mod perturbed;
mod point;
mod trig;

pub use automorphism::{eigen_decompose, s0_pow_apply, HyperbolicAuto, Mat2, MAX_EXACT_POWER};
pub use perturbed::{apply_perturbed, jacobian_perturbed, PerturbedMap};
pub use point::{wrap_angle, wrap_signed, TorusPoint};
pub use trig::{trig_eval, ProjectedTrig, TrigPoly, TrigTerm};

/// The cat map `[[1,1],[1,0]]`.
pub const FIBONACCI: Mat2 = [[1, 1], [1, 0]];
