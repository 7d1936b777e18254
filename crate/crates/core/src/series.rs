//! Truncated power series in `eps`, their quotient by Cauchy-product
//! inversion, and the finite-`t` quotients `q_n(t)`.

use serde::Serialize;

use crate::conjugacy::SeriesContext;
use crate::sum::CompensatedSum;
use crate::torus::TorusPoint;
use crate::{Error, Result};

/// Coefficients `c_0, c_1, ..., c_N` of `sum_k c_k eps^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerSeries {
    pub coeffs: Vec<f64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn zeros(len: usize) -> Self {
        PowerSeries {
            coeffs: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient `k`, zero past the truncation.
    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Cauchy product truncated to `self.len()` terms.
    pub fn mul_truncated(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.len();
        PowerSeries {
            coeffs: (0..n)
                .map(|k| {
                    (0..=k)
                        .map(|j| self.get(j) * other.get(k - j))
                        .collect::<CompensatedSum>()
                        .value()
                })
                .collect(),
        }
    }

    pub fn eval(&self, eps: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * eps + c)
    }
}

fn check_normalized(b: &PowerSeries) -> Result<()> {
    if b.get(0) != 1.0 {
        return Err(Error::BadNormalization(b.get(0)));
    }
    Ok(())
}

/// `q = a / b` with `b_0 = 1`, by `q_n = a_n - sum_{d=1}^{n-1} q_d b_{n-d}`.
/// Slot 0 of `a` is ignored and `q_0 = 0`.
pub fn cauchy_invert_recursive(a: &PowerSeries, b: &PowerSeries) -> Result<PowerSeries> {
    check_normalized(b)?;
    let n = a.len();
    let mut q = vec![0.0; n];
    for k in 1..n {
        let mut acc = CompensatedSum::new();
        acc.add(a.get(k));
        for d in 1..k {
            acc.add(-q[d] * b.get(k - d));
        }
        q[k] = acc.value();
    }
    Ok(PowerSeries { coeffs: q })
}

/// Ordered partitions (compositions) of `m` into positive parts, by first
/// part then recursively.
pub fn ordered_partitions(m: usize) -> Vec<Vec<usize>> {
    let mut memo: Vec<Vec<Vec<usize>>> = vec![vec![vec![]]];
    for n in 1..=m {
        let mut out = Vec::new();
        for first in 1..=n {
            for rest in &memo[n - first] {
                let mut p = Vec::with_capacity(rest.len() + 1);
                p.push(first);
                p.extend_from_slice(rest);
                out.push(p);
            }
        }
        memo.push(out);
    }
    memo.swap_remove(m)
}

/// `q = a / b` by the closed form
/// `q_n = a_n + sum_{k=1}^{n-1} a_k sum_{m_1+..+m_s = n-k} (-1)^s b_{m_1}..b_{m_s}`.
pub fn cauchy_invert_explicit(a: &PowerSeries, b: &PowerSeries) -> Result<PowerSeries> {
    check_normalized(b)?;
    let n = a.len();
    // w[m] = sum over ordered partitions of m of (-1)^s prod b
    let mut w = vec![0.0; n];
    for (m, wm) in w.iter_mut().enumerate().skip(1) {
        let mut acc = CompensatedSum::new();
        for part in ordered_partitions(m) {
            let sign = if part.len() % 2 == 0 { 1.0 } else { -1.0 };
            acc.add(sign * part.iter().map(|&i| b.get(i)).product::<f64>());
        }
        *wm = acc.value();
    }
    let mut q = vec![0.0; n];
    for k in 1..n {
        let mut acc = CompensatedSum::new();
        acc.add(a.get(k));
        for j in 1..k {
            acc.add(a.get(j) * w[k - j]);
        }
        q[k] = acc.value();
    }
    Ok(PowerSeries { coeffs: q })
}

/// `V_+` and `V_-` as series in `eps`, from the difference quotients
/// `(h^(k)_alpha(psi + t v_-) - h^(k)_alpha(psi)) / t`, `k = 1..=order`,
/// with `V_+^(0) = 0` and `V_-^(0) = 1`.
pub fn v_components(
    ctx: &SeriesContext,
    psi: TorusPoint,
    t: f64,
    order: usize,
) -> Result<(PowerSeries, PowerSeries)> {
    if t == 0.0 {
        return Err(Error::ZeroStep);
    }
    let vm = ctx.auto().v_minus;
    let shifted = psi.translate([t * vm[0], t * vm[1]]);
    let h0 = ctx.h_series(psi, order)?;
    let h1 = ctx.h_series(shifted, order)?;
    let mut vp = vec![0.0; order + 1];
    let mut vmm = vec![0.0; order + 1];
    vmm[0] = 1.0;
    for k in 1..=order {
        vp[k] = (h1[k - 1][0].value - h0[k - 1][0].value) / t;
        vmm[k] = (h1[k - 1][1].value - h0[k - 1][1].value) / t;
    }
    Ok((PowerSeries::new(vp), PowerSeries::new(vmm)))
}

/// `q_n(t)`: coefficient `n` of `V_+ / V_-`.
pub fn q_n_t(ctx: &SeriesContext, psi: TorusPoint, n: usize, t: f64) -> Result<f64> {
    let (a, b) = v_components(ctx, psi, t, n)?;
    Ok(cauchy_invert_recursive(&a, &b)?.get(n))
}

/// `q_1(t), ..., q_order(t)`.
pub fn q_series_t(ctx: &SeriesContext, psi: TorusPoint, order: usize, t: f64) -> Result<PowerSeries> {
    let (a, b) = v_components(ctx, psi, t, order)?;
    cauchy_invert_recursive(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{HyperbolicAuto, TrigPoly};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (PowerSeries, PowerSeries) {
        let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        a[0] = 0.0;
        let mut b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        b[0] = 1.0;
        (PowerSeries::new(a), PowerSeries::new(b))
    }

    #[test]
    fn trivial_denominator() {
        let a = PowerSeries::new(vec![0.0, 0.3, -1.2, 4.0]);
        let b = PowerSeries::new(vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(cauchy_invert_recursive(&a, &b).unwrap(), a);
        assert_eq!(cauchy_invert_explicit(&a, &b).unwrap(), a);
    }

    #[test]
    fn low_order_formulas() {
        let a = PowerSeries::new(vec![0.0, 0.7, -0.4, 1.3]);
        let b = PowerSeries::new(vec![1.0, 0.2, 0.9, -0.5]);
        for q in [cauchy_invert_recursive(&a, &b).unwrap(), cauchy_invert_explicit(&a, &b).unwrap()] {
            assert_eq!(q.get(0), 0.0);
            assert_eq!(q.get(1), 0.7);
            assert!((q.get(2) - (-0.4 - 0.7 * 0.2)).abs() < 1e-15);
            let q3 = 1.3 - (-0.4) * 0.2 - 0.7 * 0.9 + 0.7 * 0.2 * 0.2;
            assert!((q.get(3) - q3).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_normalization() {
        let a = PowerSeries::new(vec![0.0, 1.0]);
        let b = PowerSeries::new(vec![2.0, 1.0]);
        assert!(matches!(cauchy_invert_recursive(&a, &b), Err(Error::BadNormalization(_))));
        assert!(matches!(cauchy_invert_explicit(&a, &b), Err(Error::BadNormalization(_))));
    }

    #[test]
    fn partition_counts() {
        for m in 1..=10 {
            let parts = ordered_partitions(m);
            assert_eq!(parts.len(), 1 << (m - 1));
            assert!(parts.iter().all(|p| p.iter().sum::<usize>() == m));
        }
        assert_eq!(ordered_partitions(3), vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]);
    }

    #[test]
    fn explicit_equals_recursive_and_reconvolves() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let (a, b) = random_pair(&mut rng, 8);
            let r = cauchy_invert_recursive(&a, &b).unwrap();
            let e = cauchy_invert_explicit(&a, &b).unwrap();
            for k in 0..8 {
                assert!((r.get(k) - e.get(k)).abs() < 1e-12);
            }
            let back = b.mul_truncated(&r);
            for k in 1..8 {
                assert!((back.get(k) - a.get(k)).abs() < 1e-13);
            }
        }
    }

    proptest! {
        #[test]
        fn inversions_agree(seed in any::<u64>(), n in 2usize..=10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b) = random_pair(&mut rng, n);
            let r = cauchy_invert_recursive(&a, &b).unwrap();
            let e = cauchy_invert_explicit(&a, &b).unwrap();
            let scale = r.coeffs.iter().fold(1.0f64, |m, x| m.max(x.abs()));
            for k in 0..n {
                prop_assert!((r.get(k) - e.get(k)).abs() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn zero_perturbation_series() {
        let c = SeriesContext::new(HyperbolicAuto::fibonacci(), TrigPoly::zero(), 10).unwrap();
        let (vp, vm) = v_components(&c, TorusPoint::new(1.0, 2.0), 1e-3, 3).unwrap();
        assert_eq!(vp.coeffs, vec![0.0; 4]);
        assert_eq!(vm.coeffs, vec![1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(v_components(&c, TorusPoint::origin(), 0.0, 2), Err(Error::ZeroStep)));
    }

    #[test]
    fn low_order_q_match_definitions() {
        let f = TrigPoly::cosine([1, 0], [0.7, 0.3]);
        let c = SeriesContext::new(HyperbolicAuto::fibonacci(), f, 30).unwrap();
        let psi = TorusPoint::new(0.3, 1.9);
        let t = 5e-3;
        let (vp, vm) = v_components(&c, psi, t, 2).unwrap();
        assert_eq!(q_n_t(&c, psi, 1, t).unwrap(), vp.get(1));
        let q2 = q_n_t(&c, psi, 2, t).unwrap();
        assert!((q2 - (vp.get(2) - vp.get(1) * vm.get(1))).abs() < 1e-14);
        let h = |x: TorusPoint| c.h_k(x, 1, crate::Sign::Plus).unwrap().value;
        let v = c.auto().v_minus;
        let fd = (h(psi.translate([t * v[0], t * v[1]])) - h(psi)) / t;
        assert_eq!(fd, vp.get(1));
    }
}
