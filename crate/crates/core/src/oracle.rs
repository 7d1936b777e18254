//! Direct numerical ground truth for the stable direction of `S_eps`.
//!
//! Nothing here uses tree sums except `fd_manifold_slope`, which only needs
//! `H_eps` itself.

use serde::Serialize;

use crate::conjugacy::SeriesContext;
use crate::torus::{PerturbedMap, TorusPoint};
use crate::{Error, Result};

pub const DEFAULT_ITERS: usize = 40;
/// Sine of the angle allowed between runs with `n` and `n + 10` steps.
pub const CONVERGENCE_TOL: f64 = 1e-8;
const SINGULAR_DET: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    /// Unit vector spanning `E^s(psi)`, oriented so its `v-` component is positive.
    pub direction: [f64; 2],
    /// `v+` component over `v-` component.
    pub slope: f64,
    pub iterations: usize,
    /// `|dS(psi) dir - mu dir'|` with `dir'` the direction at `S_eps psi`.
    pub residual: f64,
    /// `mu`, the contraction factor along `E^s` at `psi`.
    pub multiplier: f64,
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn normalize(u: [f64; 2]) -> [f64; 2] {
    let n = u[0].hypot(u[1]);
    [u[0] / n, u[1] / n]
}

fn mat_vec(m: [[f64; 2]; 2], u: [f64; 2]) -> [f64; 2] {
    [m[0][0] * u[0] + m[0][1] * u[1], m[1][0] * u[0] + m[1][1] * u[1]]
}

fn pull_back(map: &PerturbedMap, psi: TorusPoint, n: usize) -> Result<[f64; 2]> {
    let mut orbit = Vec::with_capacity(n);
    let mut x = psi;
    for _ in 0..n {
        orbit.push(x);
        x = map.apply(x);
    }
    let vp = map.base.v_plus;
    let mut u = normalize([1.0, 1.0]);
    if cross(u, vp).abs() < 0.1 {
        u = normalize([1.0, -1.0]);
    }
    for y in orbit.iter().rev() {
        let j = map.jacobian(*y);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < SINGULAR_DET {
            return Err(Error::SingularJacobian(y.theta1(), y.theta2()));
        }
        u = normalize([(j[1][1] * u[0] - j[0][1] * u[1]) / det, (-j[1][0] * u[0] + j[0][0] * u[1]) / det]);
    }
    if dot(u, map.base.v_minus) < 0.0 {
        u = [-u[0], -u[1]];
    }
    Ok(u)
}

/// Stable direction at `psi` by pulling a generic vector back along the
/// forward orbit with inverse Jacobians.
pub fn stable_direction(map: &PerturbedMap, psi: TorusPoint, n_iters: usize) -> Result<OracleResult> {
    if n_iters < 10 {
        return Err(Error::InvalidParameter(format!("n_iters must be at least 10, got {n_iters}")));
    }
    let dir = pull_back(map, psi, n_iters)?;
    let check = pull_back(map, psi, n_iters + 10)?;
    let change = cross(dir, check).abs();
    if !(change <= CONVERGENCE_TOL) {
        return Err(Error::NoConvergence(format!(
            "direction moved by {change:e} between {n_iters} and {} steps",
            n_iters + 10
        )));
    }
    let image = pull_back(map, map.apply(psi), n_iters)?;
    let mapped = mat_vec(map.jacobian(psi), dir);
    let mu = dot(mapped, image);
    let residual = (mapped[0] - mu * image[0]).hypot(mapped[1] - mu * image[1]);
    let c = map.base.to_eigen(dir);
    Ok(OracleResult {
        direction: dir,
        slope: c[0] / c[1],
        iterations: n_iters,
        residual,
        multiplier: mu,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FdSample {
    pub t: f64,
    pub v_plus: f64,
    pub v_minus: f64,
    pub slope: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FdSlope {
    /// Linear extrapolation through the two smallest `t`.
    pub slope: f64,
    /// Distance to the quadratic extrapolant through the three smallest `t`.
    pub error_estimate: f64,
    pub samples: Vec<FdSample>,
}

/// `V+/V-` of `H(psi + t v-) - H(psi)` for each `t`, extrapolated to `t = 0`.
pub fn fd_manifold_slope(
    ctx: &SeriesContext,
    map: &PerturbedMap,
    psi: TorusPoint,
    t_list: &[f64],
    order: usize,
) -> Result<FdSlope> {
    if t_list.len() < 3 {
        return Err(Error::InvalidParameter("t_list needs at least 3 values".into()));
    }
    if t_list.windows(2).any(|w| !(w[1] < w[0])) || t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidParameter("t_list must be positive and strictly decreasing".into()));
    }
    let eps = map.eps;
    let base = ctx.h_eps(psi, eps, order)?;
    let vm = ctx.auto().v_minus;
    let mut samples = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let shifted = ctx.h_eps(psi.translate([t * vm[0], t * vm[1]]), eps, order)?;
        let v_plus = (shifted[0] - base[0]) / t;
        let v_minus = 1.0 + (shifted[1] - base[1]) / t;
        if v_minus == 0.0 || !v_minus.is_finite() {
            return Err(Error::ZeroDenominator(t));
        }
        samples.push(FdSample {
            t,
            v_plus,
            v_minus,
            slope: v_plus / v_minus,
        });
    }
    let n = samples.len();
    let [a, b, c] = [&samples[n - 3], &samples[n - 2], &samples[n - 1]];
    let linear = (b.t * c.slope - c.t * b.slope) / (b.t - c.t);
    let pts = [(a.t, a.slope), (b.t, b.slope), (c.t, c.slope)];
    let quadratic: f64 = (0..3)
        .map(|i| {
            let w: f64 = (0..3)
                .filter(|&j| j != i)
                .map(|j| -pts[j].0 / (pts[i].0 - pts[j].0))
                .product();
            w * pts[i].1
        })
        .sum();
    Ok(FdSlope {
        slope: linear,
        error_estimate: (linear - quadratic).abs(),
        samples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub t: f64,
    /// Toroidal distance after `n` steps, `n = 0..=n_steps`.
    pub distances: Vec<f64>,
    /// `exp` of the least-squares slope of `ln distance` against `n`.
    pub rate: f64,
}

/// Iterate `H(psi + t v-)` and `H(psi)` under `S_eps` and fit the decay of
/// their distance.
pub fn manifold_membership_check(
    ctx: &SeriesContext,
    map: &PerturbedMap,
    psi: TorusPoint,
    t: f64,
    n_steps: usize,
    order: usize,
) -> Result<MembershipReport> {
    if n_steps > 60 {
        return Err(Error::TooLarge {
            what: "n_steps",
            value: n_steps,
            limit: 60,
        });
    }
    let vm = ctx.auto().v_minus;
    let mut y = ctx.conjugate(psi.translate([t * vm[0], t * vm[1]]), map.eps, order)?;
    let mut z = ctx.conjugate(psi, map.eps, order)?;
    if t == 0.0 {
        z = y;
    }
    let mut distances = vec![y.distance(&z)];
    for _ in 0..n_steps {
        y = map.apply(y);
        z = map.apply(z);
        distances.push(y.distance(&z));
    }
    let pts: Vec<(f64, f64)> = distances
        .iter()
        .enumerate()
        .filter(|(_, d)| **d > 0.0)
        .map(|(i, d)| (i as f64, d.ln()))
        .collect();
    let rate = if pts.len() < 2 { 0.0 } else { least_squares_slope(&pts).exp() };
    Ok(MembershipReport { t, distances, rate })
}

/// Slope of the least-squares line through `pts`.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{HyperbolicAuto, TrigPoly};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_harmonic() -> TrigPoly {
        TrigPoly::cosine([1, 0], [0.7, 0.3]).plus(&TrigPoly::sine([0, 1], [-0.2, 0.6]))
    }

    fn map(eps: f64) -> PerturbedMap {
        PerturbedMap::new(HyperbolicAuto::fibonacci(), two_harmonic(), eps)
    }

    #[test]
    fn unperturbed_direction_is_v_minus() {
        let m = map(0.0);
        let r = stable_direction(&m, TorusPoint::new(0.3, 1.1), DEFAULT_ITERS).unwrap();
        assert!(r.slope.abs() < 1e-14);
        assert!((r.direction[0] - m.base.v_minus[0]).abs() < 1e-14);
        assert!((r.multiplier - m.base.lambda_minus).abs() < 1e-14);
        let z = PerturbedMap::new(HyperbolicAuto::fibonacci(), TrigPoly::zero(), 0.3);
        assert!(stable_direction(&z, TorusPoint::new(2.0, 0.5), DEFAULT_ITERS).unwrap().slope.abs() < 1e-14);
    }

    #[test]
    fn too_few_iterations_rejected() {
        assert!(matches!(
            stable_direction(&map(0.01), TorusPoint::origin(), 5),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn invariance_and_contraction() {
        let m = map(0.02);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let psi = TorusPoint::random(&mut rng);
            let r = stable_direction(&m, psi, DEFAULT_ITERS).unwrap();
            assert!(r.residual < 1e-8, "{r:?}");
            assert!(r.multiplier.abs() < 1.0);
            let d = stable_direction(&m, psi, 2 * DEFAULT_ITERS).unwrap();
            assert!(cross(r.direction, d.direction).abs() < 1e-10);
        }
    }

    #[test]
    fn fd_slope_matches_stable_direction() {
        let ctx = SeriesContext::new(HyperbolicAuto::fibonacci(), two_harmonic(), 40).unwrap();
        let m = map(0.02);
        let psi = TorusPoint::new(1.0, 2.5);
        let fd = fd_manifold_slope(&ctx, &m, psi, &[1e-2, 5e-3, 2.5e-3], 4).unwrap();
        let at = ctx.conjugate(psi, m.eps, 4).unwrap();
        let sd = stable_direction(&m, at, DEFAULT_ITERS).unwrap();
        assert!((fd.slope - sd.slope).abs() < 1e-6, "{} vs {}", fd.slope, sd.slope);
        let zero = fd_manifold_slope(&ctx, &m.with_eps(0.0), psi, &[1e-2, 5e-3, 2.5e-3], 4).unwrap();
        assert_eq!(zero.slope, 0.0);
        assert!(fd_manifold_slope(&ctx, &m, psi, &[1e-2, 5e-3], 4).is_err());
    }

    #[test]
    fn membership_decay() {
        let ctx = SeriesContext::new(HyperbolicAuto::fibonacci(), two_harmonic(), 40).unwrap();
        let lm = ctx.auto().lambda_minus.abs();
        let psi = TorusPoint::new(0.4, 4.0);
        let lin = manifold_membership_check(&ctx, &map(0.0), psi, 1e-3, 20, 4).unwrap();
        for (n, d) in lin.distances.iter().enumerate() {
            assert!((d - 1e-3 * lm.powi(n as i32)).abs() < 1e-13);
        }
        let r = manifold_membership_check(&ctx, &map(0.02), psi, 1e-2, 12, 4).unwrap();
        assert!((r.rate - lm).abs() < 0.05, "{}", r.rate);
        let z = manifold_membership_check(&ctx, &map(0.02), psi, 0.0, 12, 4).unwrap();
        assert!(z.distances.iter().all(|d| *d == 0.0));
    }
}
