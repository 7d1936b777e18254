use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::automorphism::HyperbolicAuto;
use super::point::TorusPoint;
use crate::{Error, Result, Sign};

const REALITY_TOL: f64 = 1e-12;
const MAX_DERIVS: usize = 32;

/// One Fourier mode `c_n e^{i n . theta}` of the vector field `f`; `c[j]` is
/// the coefficient of output component `j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigTerm {
    pub n: [i32; 2],
    pub c: [Complex64; 2],
}

/// Wire format of a [`TrigTerm`]: `{n: [n1, n2], re: [..], im: [..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigRecord {
    pub n: [i32; 2],
    pub re: [f64; 2],
    #[serde(default)]
    pub im: [f64; 2],
}

/// A real trigonometric polynomial `f: T^2 -> R^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TrigRecord>", into = "Vec<TrigRecord>")]
pub struct TrigPoly {
    terms: Vec<TrigTerm>,
    degree_bound: u32,
}

impl TrigPoly {
    /// Build from modes, merging repeated frequencies. Every `n` must be
    /// accompanied by `-n` with the conjugate coefficient.
    pub fn new(terms: impl IntoIterator<Item = TrigTerm>) -> Result<Self> {
        let mut map: BTreeMap<[i32; 2], [Complex64; 2]> = BTreeMap::new();
        for t in terms {
            if t.c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidTrigPoly(format!(
                    "non-finite coefficient at n = {:?}",
                    t.n
                )));
            }
            let e = map.entry(t.n).or_insert([Complex64::new(0.0, 0.0); 2]);
            e[0] += t.c[0];
            e[1] += t.c[1];
        }
        let zero = [Complex64::new(0.0, 0.0); 2];
        for (n, c) in &map {
            let m = [-n[0], -n[1]];
            let cm = map.get(&m).unwrap_or(&zero);
            for j in 0..2 {
                let scale = c[j].norm().max(1.0);
                if (cm[j] - c[j].conj()).norm() > REALITY_TOL * scale {
                    return Err(Error::InvalidTrigPoly(format!(
                        "c at {m:?} is not the conjugate of c at {n:?} (component {j})"
                    )));
                }
            }
        }
        let terms: Vec<TrigTerm> = map.into_iter().map(|(n, c)| TrigTerm { n, c }).collect();
        let max_norm = terms
            .iter()
            .map(|t| (t.n[0] as f64).hypot(t.n[1] as f64))
            .fold(0.0, f64::max);
        Ok(TrigPoly {
            degree_bound: max_norm.floor() as u32 + 1,
            terms,
        })
    }

    pub fn zero() -> Self {
        TrigPoly {
            terms: Vec::new(),
            degree_bound: 1,
        }
    }

    /// `amp * cos(n . theta)`.
    pub fn cosine(n: [i32; 2], amp: [f64; 2]) -> Self {
        let half = amp.map(|a| Complex64::new(a / 2.0, 0.0));
        Self::pair(n, half)
    }

    /// `amp * sin(n . theta)`.
    pub fn sine(n: [i32; 2], amp: [f64; 2]) -> Self {
        let half = amp.map(|a| Complex64::new(0.0, -a / 2.0));
        Self::pair(n, half)
    }

    fn pair(n: [i32; 2], c: [Complex64; 2]) -> Self {
        if n == [0, 0] {
            let re = c.map(|z| Complex64::new(2.0 * z.re, 0.0));
            return TrigPoly::new([TrigTerm { n, c: re }]).expect("real constant");
        }
        TrigPoly::new([
            TrigTerm { n, c },
            TrigTerm {
                n: [-n[0], -n[1]],
                c: c.map(|z| z.conj()),
            },
        ])
        .expect("conjugate pair is real")
    }

    pub fn plus(&self, other: &TrigPoly) -> TrigPoly {
        TrigPoly::new(self.terms.iter().chain(other.terms.iter()).copied())
            .expect("sum of real polynomials is real")
    }

    pub fn scaled(&self, s: f64) -> TrigPoly {
        TrigPoly::new(self.terms.iter().map(|t| TrigTerm {
            n: t.n,
            c: t.c.map(|z| z * s),
        }))
        .expect("scaling preserves reality")
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    /// Smallest integer `N` with `|n| < N` for every stored frequency.
    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.c[0] == Complex64::new(0.0, 0.0) && t.c[1] == Complex64::new(0.0, 0.0))
    }

    /// `f(psi)` in the standard basis, by direct summation.
    pub fn eval(&self, psi: TorusPoint) -> [f64; 2] {
        let [x, y] = psi.to_array();
        let mut out = [0.0; 2];
        for t in &self.terms {
            let e = Complex64::from_polar(1.0, t.n[0] as f64 * x + t.n[1] as f64 * y);
            out[0] += (t.c[0] * e).re;
            out[1] += (t.c[1] * e).re;
        }
        out
    }

    /// `Df(psi)`, entry `[i][j] = d f_i / d theta_j`.
    pub fn jacobian(&self, psi: TorusPoint) -> [[f64; 2]; 2] {
        let [x, y] = psi.to_array();
        let mut out = [[0.0; 2]; 2];
        for t in &self.terms {
            let e = Complex64::from_polar(1.0, t.n[0] as f64 * x + t.n[1] as f64 * y);
            for i in 0..2 {
                let z = t.c[i] * e * Complex64::i();
                out[i][0] += z.re * t.n[0] as f64;
                out[i][1] += z.re * t.n[1] as f64;
            }
        }
        out
    }

    pub fn to_records(&self) -> Vec<TrigRecord> {
        self.terms
            .iter()
            .map(|t| TrigRecord {
                n: t.n,
                re: [t.c[0].re, t.c[1].re],
                im: [t.c[0].im, t.c[1].im],
            })
            .collect()
    }
}

impl TryFrom<Vec<TrigRecord>> for TrigPoly {
    type Error = Error;

    fn try_from(records: Vec<TrigRecord>) -> Result<Self> {
        TrigPoly::new(records.into_iter().map(|r| TrigTerm {
            n: r.n,
            c: [
                Complex64::new(r.re[0], r.im[0]),
                Complex64::new(r.re[1], r.im[1]),
            ],
        }))
    }
}

impl From<TrigPoly> for Vec<TrigRecord> {
    fn from(f: TrigPoly) -> Self {
        f.to_records()
    }
}

/// `(prod_j d_{derivs[j]}) f_alpha (psi)`, summed over the full Fourier table.
pub fn trig_eval(
    f: &TrigPoly,
    auto: &HyperbolicAuto,
    alpha: Sign,
    derivs: &[Sign],
    psi: TorusPoint,
) -> f64 {
    assert!(derivs.len() <= MAX_DERIVS, "at most {MAX_DERIVS} derivatives");
    let va = auto.v(alpha);
    let [x, y] = psi.to_array();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    for t in f.terms() {
        let mut z = t.c[0] * va[0] + t.c[1] * va[1];
        for &b in derivs {
            let vb = auto.v(b);
            z *= Complex64::new(0.0, t.n[0] as f64 * vb[0] + t.n[1] as f64 * vb[1]);
        }
        let term = z * Complex64::from_polar(1.0, t.n[0] as f64 * x + t.n[1] as f64 * y);
        scale += term.norm();
        acc += term;
    }
    debug_assert!(
        acc.im.abs() <= 1e-10 * scale.max(1.0),
        "imaginary residue {} too large",
        acc.im
    );
    acc.re
}

/// `f` projected onto the eigenbasis and folded into conjugate pairs, for
/// repeated evaluation of `(d+)^a (d-)^b f_alpha`.
#[derive(Clone, Debug)]
pub struct ProjectedTrig {
    freqs: Vec<[i32; 2]>,
    /// `(n . v+, n . v-)` per folded frequency.
    nv: Vec<[f64; 2]>,
    /// `c_n . v_alpha` per folded frequency, indexed by `[plus, minus]`.
    amp: [Vec<Complex64>; 2],
    constant: [f64; 2],
}

fn idx(alpha: Sign) -> usize {
    match alpha {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

impl ProjectedTrig {
    pub fn new(f: &TrigPoly, auto: &HyperbolicAuto) -> Self {
        let mut freqs = Vec::new();
        let mut nv = Vec::new();
        let mut amp = [Vec::new(), Vec::new()];
        let mut constant = [0.0; 2];
        for t in f.terms() {
            let n = t.n;
            let proj = |a: Sign| {
                let v = auto.v(a);
                t.c[0] * v[0] + t.c[1] * v[1]
            };
            if n == [0, 0] {
                constant = [proj(Sign::Plus).re, proj(Sign::Minus).re];
            } else if n[0] > 0 || (n[0] == 0 && n[1] > 0) {
                freqs.push(n);
                let dot = |v: [f64; 2]| n[0] as f64 * v[0] + n[1] as f64 * v[1];
                nv.push([dot(auto.v_plus), dot(auto.v_minus)]);
                amp[0].push(proj(Sign::Plus));
                amp[1].push(proj(Sign::Minus));
            }
        }
        ProjectedTrig {
            freqs,
            nv,
            amp,
            constant,
        }
    }

    pub fn num_modes(&self) -> usize {
        self.freqs.len()
    }

    /// `(cos, sin)` of `n . psi` for every folded frequency.
    pub fn phases(&self, psi: TorusPoint) -> Vec<(f64, f64)> {
        let [x, y] = psi.to_array();
        self.freqs
            .iter()
            .map(|n| {
                let (s, c) = (n[0] as f64 * x + n[1] as f64 * y).sin_cos();
                (c, s)
            })
            .collect()
    }

    /// Folded coefficients `d_n` such that
    /// `(d+)^np (d-)^nm f_alpha = const + sum Re(d_n e^{i n . psi})`.
    pub fn coefficients(&self, alpha: Sign, np: usize, nm: usize) -> Vec<Complex64> {
        let k = np + nm;
        let ik = Complex64::i().powu(k as u32);
        self.amp[idx(alpha)]
            .iter()
            .zip(&self.nv)
            .map(|(a, nv)| a * ik * 2.0 * nv[0].powi(np as i32) * nv[1].powi(nm as i32))
            .collect()
    }

    pub fn constant(&self, alpha: Sign, np: usize, nm: usize) -> f64 {
        if np + nm == 0 {
            self.constant[idx(alpha)]
        } else {
            0.0
        }
    }

    #[inline]
    pub fn eval_with(coeffs: &[Complex64], constant: f64, phases: &[(f64, f64)]) -> f64 {
        let mut s = constant;
        for (d, &(c, sn)) in coeffs.iter().zip(phases) {
            s += d.re * c - d.im * sn;
        }
        s
    }

    pub fn eval(&self, alpha: Sign, np: usize, nm: usize, psi: TorusPoint) -> f64 {
        Self::eval_with(
            &self.coefficients(alpha, np, nm),
            self.constant(alpha, np, nm),
            &self.phases(psi),
        )
    }

    /// Upper bound on `sup |(d+)^np (d-)^nm f_alpha|`: the l1 norm of the
    /// Fourier coefficients.
    pub fn sup_bound(&self, alpha: Sign, np: usize, nm: usize) -> f64 {
        self.coefficients(alpha, np, nm)
            .iter()
            .map(|d| d.norm())
            .sum::<f64>()
            + self.constant(alpha, np, nm).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_harmonic() -> TrigPoly {
        TrigPoly::cosine([1, 0], [0.7, 0.3]).plus(&TrigPoly::sine([0, 1], [-0.2, 0.6]))
    }

    #[test]
    fn reality_is_enforced() {
        let bad = TrigPoly::new([TrigTerm {
            n: [1, 0],
            c: [Complex64::new(0.5, 0.0); 2],
        }]);
        assert!(matches!(bad, Err(Error::InvalidTrigPoly(_))));
        let f = two_harmonic();
        assert_eq!(f.terms().len(), 4);
        assert_eq!(f.degree_bound(), 2);
    }

    #[test]
    fn json_round_trip() {
        let f = two_harmonic();
        let s = serde_json::to_string(&f).unwrap();
        let g: TrigPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        let bad = r#"[{"n":[1,0],"re":[1.0,0.0],"im":[0.0,0.0]}]"#;
        assert!(serde_json::from_str::<TrigPoly>(bad).is_err());
    }

    #[test]
    fn zero_polynomial() {
        let a = HyperbolicAuto::fibonacci();
        let z = TrigPoly::zero();
        let psi = TorusPoint::new(1.0, 2.0);
        assert_eq!(trig_eval(&z, &a, Sign::Minus, &[Sign::Plus, Sign::Minus], psi), 0.0);
        assert!(z.is_zero());
    }

    #[test]
    fn single_cosine_projection() {
        let a = HyperbolicAuto::fibonacci();
        let e = [0.6, 0.8];
        let f = TrigPoly::cosine([1, 0], e);
        let psi = TorusPoint::new(0.4, 1.3);
        for alpha in Sign::BOTH {
            let v = a.v(alpha);
            let want = (e[0] * v[0] + e[1] * v[1]) * 0.4f64.cos();
            assert!((trig_eval(&f, &a, alpha, &[], psi) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let a = HyperbolicAuto::fibonacci();
        let f = TrigPoly::cosine([1, 0], [0.6, 0.8]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = 1e-6;
        for _ in 0..20 {
            let psi = TorusPoint::random(&mut rng);
            for alpha in Sign::BOTH {
                let vm = a.v_minus;
                let fp = trig_eval(&f, &a, alpha, &[], psi.translate([h * vm[0], h * vm[1]]));
                let fm = trig_eval(&f, &a, alpha, &[], psi.translate([-h * vm[0], -h * vm[1]]));
                let fd = (fp - fm) / (2.0 * h);
                let exact = trig_eval(&f, &a, alpha, &[Sign::Minus], psi);
                assert!((fd - exact).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn projection_matches_direct_evaluation() {
        let a = HyperbolicAuto::fibonacci();
        let f = two_harmonic().plus(&TrigPoly::cosine([0, 0], [0.1, -0.3]));
        let p = ProjectedTrig::new(&f, &a);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let psi = TorusPoint::random(&mut rng);
            let direct = f.eval(psi);
            for alpha in Sign::BOTH {
                let v = a.v(alpha);
                let want = direct[0] * v[0] + direct[1] * v[1];
                assert!((trig_eval(&f, &a, alpha, &[], psi) - want).abs() < 1e-12);
                for (np, nm) in [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3)] {
                    let mut d = vec![Sign::Plus; np];
                    d.extend(std::iter::repeat(Sign::Minus).take(nm));
                    let full = trig_eval(&f, &a, alpha, &d, psi);
                    let fast = p.eval(alpha, np, nm, psi);
                    assert!((full - fast).abs() < 1e-12);
                    assert!(fast.abs() <= p.sup_bound(alpha, np, nm) + 1e-15);
                }
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_difference() {
        let f = two_harmonic();
        let psi = TorusPoint::new(2.2, 0.9);
        let j = f.jacobian(psi);
        let h = 1e-6;
        for col in 0..2 {
            let mut d = [0.0; 2];
            d[col] = h;
            let fp = f.eval(psi.translate(d));
            let fm = f.eval(psi.translate([-d[0], -d[1]]));
            for row in 0..2 {
                assert!((j[row][col] - (fp[row] - fm[row]) / (2.0 * h)).abs() < 1e-8);
            }
        }
    }
}
