//! Eulerian numbers, the stem-label majorant, per-order coefficient bounds
//! and the radius estimate derived from them.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::torus::{HyperbolicAuto, TorusPoint, TrigPoly};
use crate::{Error, Result};

pub const MAX_EULERIAN_ROW: u32 = 20;
const GRID: usize = 256;

/// Row `r` of the Eulerian triangle: `A(r, k)` permutations of `r` elements
/// with `k` descents, `k = 0..=r` (row 0 is `[1]`).
pub fn eulerian_row(r: u32) -> Result<Vec<u64>> {
    if r > MAX_EULERIAN_ROW {
        return Err(Error::TooLarge {
            what: "Eulerian row",
            value: r as usize,
            limit: MAX_EULERIAN_ROW as usize,
        });
    }
    let mut row = vec![1u64];
    for n in 1..=r as u64 {
        let mut next = vec![0u64; n as usize + 1];
        for k in 0..=n {
            let keep = if k < n { (k + 1) * row[k as usize] } else { 0 };
            let shift = if k > 0 { (n - k) * row[k as usize - 1] } else { 0 };
            next[k as usize] = keep + shift;
        }
        row = next;
    }
    Ok(row)
}

pub fn eulerian(r: u32, k: u32) -> Result<u64> {
    let row = eulerian_row(r)?;
    Ok(row.get(k as usize).copied().unwrap_or(0))
}

/// `A_r(x) = sum_k A(r, k) x^k`.
pub fn eulerian_poly(r: u32, x: f64) -> Result<f64> {
    Ok(eulerian_row(r)?
        .iter()
        .rev()
        .fold(0.0, |acc, &a| acc * x + a as f64))
}

fn ln_sc_majorant(r: u32, lambda_plus: f64) -> Result<f64> {
    let x = lambda_plus.powi(-2);
    let a = eulerian_poly(r, x)?;
    let r = r as f64;
    Ok(r * a.ln() - r * (r + 1.0) * (1.0 - x).ln())
}

/// `M [A_r(x)]^r / (1 - x)^{r(r+1)}` with `x = lambda_plus^{-2}`: the closed
/// form of `M sum_{n_1..n_r >= 0} prod_i (n_i + 1)^r x^{n_i}`.
pub fn sc_majorant(r: u32, lambda_plus: f64, m: f64) -> Result<f64> {
    if !(lambda_plus > 1.0) || m < 0.0 {
        return Err(Error::InvalidParameter(
            "majorant needs lambda_plus > 1 and M >= 0".into(),
        ));
    }
    if m == 0.0 {
        return Ok(0.0);
    }
    Ok(m * ln_sc_majorant(r, lambda_plus)?.exp())
}

/// `ln` of [`order_bound`]; finite even where the bound itself overflows.
pub fn ln_order_bound(k: u32, n: u32, f_sup: f64, lambda_plus: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("orders start at 1".into()));
    }
    let kf = k as f64;
    let n = n as f64;
    Ok(kf * (2.0 * n).ln()
        + kf * f_sup.ln()
        + kf * (2.0 * n + 1.0).ln()
        + kf * 2f64.ln()
        + 2.0 * kf * 2f64.ln()
        + kf.ln()
        + ln_sc_majorant(k, lambda_plus)?)
}

/// `(2N)^k F^k (2N+1)^k 2^k 2^{2k} k sc_majorant(k, lambda_plus, 1)`.
pub fn order_bound(k: u32, n: u32, f_sup: f64, lambda_plus: f64) -> Result<f64> {
    if f_sup == 0.0 {
        ln_order_bound(k, n, 1.0, lambda_plus)?;
        return Ok(0.0);
    }
    Ok(ln_order_bound(k, n, f_sup, lambda_plus)?.exp())
}

/// `max_alpha sup |f_alpha|` sampled on a 256 x 256 grid.
pub fn sup_norm_grid(f: &TrigPoly, auto: &HyperbolicAuto) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    let h = TAU / GRID as f64;
    let mut best = 0.0f64;
    for i in 0..GRID {
        for j in 0..GRID {
            let v = f.eval(TorusPoint::new(i as f64 * h, j as f64 * h));
            let c = auto.to_eigen(v);
            best = best.max(c[0].abs()).max(c[1].abs());
        }
    }
    best
}

/// Per-order bounds `B_k` and `D = min_k B_k^{-1/k}`.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusEstimate {
    pub per_order_bound: Vec<f64>,
    /// `+inf` when `F = 0`.
    pub radius: f64,
    pub degree_bound: u32,
    pub f_sup: f64,
    pub lambda_plus: f64,
}

impl RadiusEstimate {
    pub fn is_unbounded(&self) -> bool {
        self.radius.is_infinite()
    }
}

pub fn radius_estimate(n: u32, f_sup: f64, lambda_plus: f64, k_max: u32) -> RadiusEstimate {
    let k_max = k_max.clamp(1, MAX_EULERIAN_ROW);
    let mut per_order = Vec::with_capacity(k_max as usize);
    let mut radius = f64::INFINITY;
    for k in 1..=k_max {
        let b = order_bound(k, n, f_sup, lambda_plus).unwrap_or(f64::INFINITY);
        per_order.push(b);
        if f_sup > 0.0 {
            let ln_b = ln_order_bound(k, n, f_sup, lambda_plus).unwrap_or(f64::INFINITY);
            radius = radius.min((-ln_b / k as f64).exp());
        }
    }
    RadiusEstimate {
        per_order_bound: per_order,
        radius,
        degree_bound: n,
        f_sup,
        lambda_plus,
    }
}

/// Radius estimate for `f` under `auto`, with `F` from [`sup_norm_grid`].
pub fn radius_for(f: &TrigPoly, auto: &HyperbolicAuto, k_max: u32) -> RadiusEstimate {
    radius_estimate(f.degree_bound(), sup_norm_grid(f, auto), auto.lambda_plus, k_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    fn descents_brute(r: usize) -> Vec<u64> {
        fn perms(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            if k == v.len() {
                out.push(v.clone());
                return;
            }
            for i in k..v.len() {
                v.swap(k, i);
                perms(v, k + 1, out);
                v.swap(k, i);
            }
        }
        let mut all = Vec::new();
        perms(&mut (0..r).collect(), 0, &mut all);
        let mut counts = vec![0u64; r.max(1)];
        for p in all {
            let d = p.windows(2).filter(|w| w[0] > w[1]).count();
            counts[d] += 1;
        }
        counts
    }

    #[test]
    fn eulerian_values() {
        assert_eq!(eulerian(0, 0).unwrap(), 1);
        assert_eq!(eulerian(3, 1).unwrap(), 4);
        assert_eq!(eulerian(3, 5).unwrap(), 0);
        for r in 0..=12 {
            assert_eq!(eulerian(r, 0).unwrap(), 1);
        }
        for r in 1..=6 {
            let row = eulerian_row(r as u32).unwrap();
            assert_eq!(&row[..r], descents_brute(r).as_slice());
        }
        for r in 0..=MAX_EULERIAN_ROW {
            let sum: u64 = eulerian_row(r).unwrap().iter().sum();
            assert_eq!(sum, (1..=r as u64).product::<u64>());
        }
        assert!(eulerian(21, 0).is_err());
    }

    #[test]
    fn majorant_small_cases() {
        assert_eq!(sc_majorant(3, GOLDEN, 0.0).unwrap(), 0.0);
        assert!((sc_majorant(0, GOLDEN, 2.5).unwrap() - 2.5).abs() < 1e-15);
        let x = GOLDEN.powi(-2);
        let direct: f64 = (0..200).map(|n| (n as f64 + 1.0) * x.powi(n)).sum();
        let closed = sc_majorant(1, GOLDEN, 1.0).unwrap();
        assert!(((closed - direct) / direct).abs() < 1e-10);
    }

    #[test]
    fn majorant_dominates_partial_sums() {
        let x = GOLDEN.powi(-2);
        for r in 1..=3u32 {
            let one: f64 = (0..=50).map(|n| (n as f64 + 1.0).powi(r as i32) * x.powi(n)).sum();
            let partial = one.powi(r as i32);
            let closed = sc_majorant(r, GOLDEN, 1.0).unwrap();
            assert!(closed >= partial * (1.0 - 1e-14));
            assert!((closed - partial) / closed < 1e-6);
        }
    }

    #[test]
    fn order_bound_factors() {
        let b1 = order_bound(1, 2, 1.0, GOLDEN).unwrap();
        let want = 4.0 * 5.0 * 2.0 * 4.0 * sc_majorant(1, GOLDEN, 1.0).unwrap();
        assert!((b1 - want).abs() / want < 1e-12);
        assert_eq!(order_bound(2, 2, 0.0, GOLDEN).unwrap(), 0.0);
        for k in 1..=8 {
            let r = order_bound(k + 1, 2, 1.0, GOLDEN).unwrap() / order_bound(k, 2, 1.0, GOLDEN).unwrap();
            assert!(r.is_finite() && r > 0.0);
        }
    }

    #[test]
    fn radius_behaviour() {
        let r0 = radius_estimate(2, 0.0, GOLDEN, 10);
        assert!(r0.is_unbounded());
        let r1 = radius_estimate(2, 1.0, GOLDEN, 10);
        let r2 = radius_estimate(2, 2.0, GOLDEN, 10);
        assert!(r1.radius > 0.0 && r1.radius.is_finite());
        assert!(r2.radius <= 0.5 * r1.radius * (1.0 + 1e-12));
        let deep = radius_estimate(2, 1.0, GOLDEN, 20);
        assert!(deep.radius > 0.0 && deep.radius <= r1.radius);
    }

    #[test]
    fn grid_sup_of_cosine() {
        let a = HyperbolicAuto::fibonacci();
        let f = TrigPoly::cosine([1, 0], [0.6, 0.8]);
        let want = (0.6 * a.v_plus[0] + 0.8 * a.v_plus[1])
            .abs()
            .max((0.6 * a.v_minus[0] + 0.8 * a.v_minus[1]).abs());
        assert!((sup_norm_grid(&f, &a) - want).abs() < 1e-12);
    }
}
