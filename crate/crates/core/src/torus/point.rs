use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Reduce an angle into `[0, 2 pi)`.
#[inline]
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if y >= TAU {
        0.0
    } else {
        y
    }
}

/// Reduce an angle difference into `(-pi, pi]`.
#[inline]
pub fn wrap_signed(x: f64) -> f64 {
    let y = wrap_angle(x);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// A point of the torus, both angles kept in `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct TorusPoint {
    theta1: f64,
    theta2: f64,
}

impl TorusPoint {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        TorusPoint {
            theta1: wrap_angle(theta1),
            theta2: wrap_angle(theta2),
        }
    }

    pub fn origin() -> Self {
        TorusPoint::new(0.0, 0.0)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        TorusPoint::new(rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))
    }

    #[inline]
    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    #[inline]
    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    #[inline]
    pub fn to_array(self) -> [f64; 2] {
        [self.theta1, self.theta2]
    }

    /// `self + d` on the torus.
    #[inline]
    pub fn translate(&self, d: [f64; 2]) -> Self {
        TorusPoint::new(self.theta1 + d[0], self.theta2 + d[1])
    }

    /// Shortest representative of `other - self`, each coordinate in `(-pi, pi]`.
    pub fn displacement_to(&self, other: &TorusPoint) -> [f64; 2] {
        [
            wrap_signed(other.theta1 - self.theta1),
            wrap_signed(other.theta2 - self.theta2),
        ]
    }

    /// Toroidal (flat) distance.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        let d = self.displacement_to(other);
        d[0].hypot(d[1])
    }
}

impl From<[f64; 2]> for TorusPoint {
    fn from(a: [f64; 2]) -> Self {
        TorusPoint::new(a[0], a[1])
    }
}

impl From<TorusPoint> for [f64; 2] {
    fn from(p: TorusPoint) -> Self {
        p.to_array()
    }
}
