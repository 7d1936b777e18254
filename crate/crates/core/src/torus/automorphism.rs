use serde::{Deserialize, Serialize};

use super::point::TorusPoint;
use crate::{Error, Result, Sign};

pub type Mat2 = [[i64; 2]; 2];

/// Largest `|p|` accepted by [`s0_pow_apply`].
pub const MAX_EXACT_POWER: i64 = 64;

const EIGEN_TOL: f64 = 1e-12;

/// An integer unimodular 2x2 matrix together with its real eigen data.
///
/// `lambda_minus` keeps its sign: for the cat map it is about `-0.618`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicAuto {
    pub m: Mat2,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub v_plus: [f64; 2],
    pub v_minus: [f64; 2],
    pub det: i64,
}

pub fn eigen_decompose(m: Mat2) -> Result<HyperbolicAuto> {
    HyperbolicAuto::new(m)
}

pub fn s0_pow_apply(auto: &HyperbolicAuto, p: i64, psi: TorusPoint) -> Result<TorusPoint> {
    auto.pow_apply(p, psi)
}

fn eigenvector(m: &Mat2, lambda: f64) -> [f64; 2] {
    let [[a, b], [c, d]] = *m;
    let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
    // (m - lambda) v = 0; pick the better-conditioned row
    let r1 = [b, lambda - a];
    let r2 = [lambda - d, c];
    let v = if r1[0].hypot(r1[1]) >= r2[0].hypot(r2[1]) { r1 } else { r2 };
    let norm = v[0].hypot(v[1]);
    let mut v = [v[0] / norm, v[1] / norm];
    if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) {
        v = [-v[0], -v[1]];
    }
    v
}

impl HyperbolicAuto {
    pub fn new(m: Mat2) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() != 1 {
            return Err(Error::NotUnimodular(det));
        }
        let tr = (m[0][0] + m[1][1]) as f64;
        let disc = tr * tr - 4.0 * det as f64;
        if disc <= 0.0 {
            return Err(Error::NotHyperbolic(format!(
                "discriminant {disc} gives no pair of distinct real eigenvalues"
            )));
        }
        // stable root pair: the large one directly, the small one via the determinant
        let big = (tr + tr.signum() * disc.sqrt()) / 2.0;
        let small = det as f64 / big;
        if !(big.abs() > 1.0 + EIGEN_TOL && small.abs() < 1.0 - EIGEN_TOL) {
            return Err(Error::NotHyperbolic(format!(
                "eigenvalues {big} and {small} are not separated by the unit circle"
            )));
        }
        let v_plus = eigenvector(&m, big);
        let v_minus = eigenvector(&m, small);
        let dot = v_plus[0] * v_minus[0] + v_plus[1] * v_minus[1];
        if dot.abs() > EIGEN_TOL {
            return Err(Error::NonOrthogonalEigenbasis(dot));
        }
        Ok(HyperbolicAuto {
            m,
            lambda_plus: big,
            lambda_minus: small,
            v_plus,
            v_minus,
            det,
        })
    }

    pub fn fibonacci() -> Self {
        HyperbolicAuto::new(super::FIBONACCI).expect("the cat map is hyperbolic")
    }

    #[inline]
    pub fn lambda(&self, alpha: Sign) -> f64 {
        match alpha {
            Sign::Plus => self.lambda_plus,
            Sign::Minus => self.lambda_minus,
        }
    }

    #[inline]
    pub fn v(&self, alpha: Sign) -> [f64; 2] {
        match alpha {
            Sign::Plus => self.v_plus,
            Sign::Minus => self.v_minus,
        }
    }

    /// Coordinates of a standard-basis vector in the `(v+, v-)` basis.
    #[inline]
    pub fn to_eigen(&self, x: [f64; 2]) -> [f64; 2] {
        [
            x[0] * self.v_plus[0] + x[1] * self.v_plus[1],
            x[0] * self.v_minus[0] + x[1] * self.v_minus[1],
        ]
    }

    /// Standard-basis vector with eigen-coordinates `(c+, c-)`.
    #[inline]
    pub fn from_eigen(&self, c: [f64; 2]) -> [f64; 2] {
        [
            c[0] * self.v_plus[0] + c[1] * self.v_minus[0],
            c[0] * self.v_plus[1] + c[1] * self.v_minus[1],
        ]
    }

    pub fn matrix_f64(&self) -> [[f64; 2]; 2] {
        let m = self.m;
        [
            [m[0][0] as f64, m[0][1] as f64],
            [m[1][0] as f64, m[1][1] as f64],
        ]
    }

    pub fn inverse_matrix(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        let s = self.det;
        [[s * d, -s * b], [-s * c, s * a]]
    }

    /// `S0 psi` in floating point.
    #[inline]
    pub fn apply(&self, psi: TorusPoint) -> TorusPoint {
        mat_apply(&self.m, psi)
    }

    #[inline]
    pub fn apply_inverse(&self, psi: TorusPoint) -> TorusPoint {
        mat_apply(&self.inverse_matrix(), psi)
    }

    /// Exact integer matrix `S0^p`.
    pub fn int_pow(&self, p: i64) -> Result<[[i128; 2]; 2]> {
        let base = if p >= 0 { self.m } else { self.inverse_matrix() };
        let mut b = base.map(|r| r.map(|x| x as i128));
        let mut acc: [[i128; 2]; 2] = [[1, 0], [0, 1]];
        let mut e = p.unsigned_abs();
        let overflow = || Error::ExponentOverflow(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mat_mul_checked(&acc, &b).ok_or_else(overflow)?;
            }
            e >>= 1;
            if e > 0 {
                b = mat_mul_checked(&b, &b).ok_or_else(overflow)?;
            }
        }
        Ok(acc)
    }

    pub fn pow_apply(&self, p: i64, psi: TorusPoint) -> Result<TorusPoint> {
        if p.abs() > MAX_EXACT_POWER {
            return Err(Error::ExponentOverflow(p));
        }
        if p == 0 {
            return Ok(psi);
        }
        let m = self.int_pow(p)?;
        let [x, y] = psi.to_array();
        let f = |r: [i128; 2]| r[0] as f64 * x + r[1] as f64 * y;
        Ok(TorusPoint::new(f(m[0]), f(m[1])))
    }

    /// `S0^q psi` for every `q` in `[-radius, radius]`, indexed by `q + radius`.
    ///
    /// Exact powers are used up to [`MAX_EXACT_POWER`]; beyond that the table
    /// continues by iterating the map on wrapped representatives.
    pub fn orbit(&self, psi: TorusPoint, radius: usize) -> Vec<TorusPoint> {
        let r = radius as i64;
        let mut pts = vec![psi; 2 * radius + 1];
        let exact = r.min(MAX_EXACT_POWER);
        for q in -exact..=exact {
            pts[(q + r) as usize] = self.pow_apply(q, psi).unwrap_or_else(|_| {
                // entries too large for i128: fall back to iteration
                let mut x = psi;
                for _ in 0..q.unsigned_abs() {
                    x = if q > 0 { self.apply(x) } else { self.apply_inverse(x) };
                }
                x
            });
        }
        for q in exact + 1..=r {
            pts[(q + r) as usize] = self.apply(pts[(q - 1 + r) as usize]);
            pts[(-q + r) as usize] = self.apply_inverse(pts[(-q + 1 + r) as usize]);
        }
        pts
    }
}

fn mat_apply(m: &Mat2, psi: TorusPoint) -> TorusPoint {
    let [x, y] = psi.to_array();
    TorusPoint::new(
        m[0][0] as f64 * x + m[0][1] as f64 * y,
        m[1][0] as f64 * x + m[1][1] as f64 * y,
    )
}

fn mat_mul_checked(a: &[[i128; 2]; 2], b: &[[i128; 2]; 2]) -> Option<[[i128; 2]; 2]> {
    let mut out = [[0i128; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let x = a[i][0].checked_mul(b[0][j])?;
            let y = a[i][1].checked_mul(b[1][j])?;
            out[i][j] = x.checked_add(y)?;
        }
    }
    Some(out)
}
