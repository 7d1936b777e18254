use serde::Serialize;

use super::automorphism::HyperbolicAuto;
use super::point::TorusPoint;
use super::trig::TrigPoly;
use crate::bounds;

/// `S_eps(psi) = S0 psi - eps f(psi)`.
#[derive(Clone, Debug, Serialize)]
pub struct PerturbedMap {
    pub base: HyperbolicAuto,
    pub f: TrigPoly,
    pub eps: f64,
    /// Estimated convergence radius of the series for this `(S0, f)`.
    pub radius: f64,
    /// Set when `|eps|` is not below `radius`.
    pub beyond_radius: bool,
}

impl PerturbedMap {
    pub fn new(base: HyperbolicAuto, f: TrigPoly, eps: f64) -> Self {
        let radius = bounds::radius_for(&f, &base, crate::conjugacy::RADIUS_ORDERS).radius;
        PerturbedMap {
            beyond_radius: eps.abs() >= radius,
            base,
            f,
            eps,
            radius,
        }
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        PerturbedMap {
            eps,
            beyond_radius: eps.abs() >= self.radius,
            ..self.clone()
        }
    }

    pub fn apply(&self, psi: TorusPoint) -> TorusPoint {
        let [x, y] = psi.to_array();
        let m = self.base.matrix_f64();
        let f = self.f.eval(psi);
        TorusPoint::new(
            m[0][0] * x + m[0][1] * y - self.eps * f[0],
            m[1][0] * x + m[1][1] * y - self.eps * f[1],
        )
    }

    /// `dS_eps(psi) = S0 - eps Df(psi)`.
    pub fn jacobian(&self, psi: TorusPoint) -> [[f64; 2]; 2] {
        let m = self.base.matrix_f64();
        if self.eps == 0.0 {
            return m;
        }
        let df = self.f.jacobian(psi);
        let mut out = m;
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] -= self.eps * df[i][j];
            }
        }
        out
    }
}

pub fn apply_perturbed(map: &PerturbedMap, psi: TorusPoint) -> TorusPoint {
    map.apply(psi)
}

pub fn jacobian_perturbed(map: &PerturbedMap, psi: TorusPoint) -> [[f64; 2]; 2] {
    map.jacobian(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_harmonic() -> TrigPoly {
        TrigPoly::cosine([1, 0], [0.6, 0.8])
    }

    #[test]
    fn unperturbed_cases_reduce_to_s0() {
        let a = HyperbolicAuto::fibonacci();
        let psi = TorusPoint::new(1.0, 2.0);
        let s = a.pow_apply(1, psi).unwrap();
        let m0 = PerturbedMap::new(a.clone(), one_harmonic(), 0.0);
        assert!(m0.apply(psi).distance(&s) < 1e-15);
        assert_eq!(m0.jacobian(psi), [[1.0, 1.0], [1.0, 0.0]]);
        let mz = PerturbedMap::new(a, TrigPoly::zero(), 0.3);
        assert!(mz.apply(psi).distance(&s) < 1e-15);
        assert_eq!(mz.jacobian(psi), [[1.0, 1.0], [1.0, 0.0]]);
        assert!(!mz.beyond_radius);
    }

    #[test]
    fn small_eps_at_origin() {
        let a = HyperbolicAuto::fibonacci();
        let map = PerturbedMap::new(a, one_harmonic(), 0.01);
        let out = map.apply(TorusPoint::origin());
        assert!((out.theta1() - (std::f64::consts::TAU - 0.006)).abs() < 1e-14);
        assert!((out.theta2() - (std::f64::consts::TAU - 0.008)).abs() < 1e-14);
        assert!(map.beyond_radius);
    }

    #[test]
    fn jacobian_matches_finite_difference() {
        let a = HyperbolicAuto::fibonacci();
        let f = one_harmonic().plus(&TrigPoly::sine([1, 1], [0.2, -0.4]));
        let map = PerturbedMap::new(a, f, 0.05);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = 1e-6;
        for _ in 0..20 {
            let psi = TorusPoint::random(&mut rng);
            let j = map.jacobian(psi);
            for col in 0..2 {
                let mut d = [0.0; 2];
                d[col] = h;
                let p = map.apply(psi.translate(d));
                let m = map.apply(psi.translate([-d[0], -d[1]]));
                let diff = m.displacement_to(&p);
                for row in 0..2 {
                    assert!((j[row][col] - diff[row] / (2.0 * h)).abs() < 1e-6);
                }
            }
        }
    }
}
