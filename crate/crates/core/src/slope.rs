//! The canceled coefficients `Val[q_n(0)]` and the stable slope
//! `v_eps(psi) = sum_k eps^k Val[q_k(0)]`.

use serde::Serialize;

use crate::conjugacy::SeriesContext;
use crate::engine::{FlatTree, Orbit, Powers};
use crate::sum::CompensatedSum;
use crate::torus::TorusPoint;
use crate::trees::{canonical_key, enumerate_sign_derivative, HalfLabeledKey, RestrictMode};
use crate::{ordered_map, Error, Result, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ValE {
    pub value: f64,
    pub tail_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassValue {
    /// The key in tree notation, `*` marking the derivative node.
    pub key: String,
    /// Its class up to reordering children.
    pub perm_class: String,
    pub value: f64,
    pub tail_bound: f64,
}

/// `Val[q_n(0)]` with its per-key breakdown.
#[derive(Clone, Debug, Serialize)]
pub struct OrderValue {
    pub k: usize,
    pub value: f64,
    pub tail_bound: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub per_class: Vec<ClassValue>,
}

fn val_e_in(
    ctx: &SeriesContext,
    orbit: &Orbit,
    lam: &Powers,
    key: &HalfLabeledKey,
    mode: RestrictMode,
) -> ValE {
    let flat = FlatTree::new(&key.tree, Some(&key.deriv), Some(mode));
    ValE {
        value: flat.sum(orbit, lam, ctx.pmax()),
        tail_bound: flat.tail_bound(ctx.projected(), ctx.auto(), ctx.pmax()),
    }
}

/// `Val(E)`: the sum of derivative-tree values over the reduced labelings of
/// `key`.
pub fn val_e(ctx: &SeriesContext, psi: TorusPoint, key: &HalfLabeledKey, mode: RestrictMode) -> Result<ValE> {
    if key.tree.sign != Sign::Plus {
        return Err(Error::InvalidParameter("Val(E) needs a key with top sign +".into()));
    }
    let k = key.tree.node_count();
    let orbit = ctx.orbit(psi, k);
    let lam = ctx.powers(k);
    Ok(val_e_in(ctx, &orbit, &lam, key, mode))
}

fn order_in(ctx: &SeriesContext, orbit: &Orbit, lam: &Powers, n: usize, mode: RestrictMode) -> Result<OrderValue> {
    let keys = enumerate_sign_derivative(n, Sign::Plus)?;
    let vals = ordered_map(&keys, |k| val_e_in(ctx, orbit, lam, k, mode));
    let mut total = CompensatedSum::new();
    let mut tail = 0.0;
    let mut per_class = Vec::with_capacity(keys.len());
    for (k, v) in keys.iter().zip(vals) {
        total.add(v.value);
        tail += v.tail_bound;
        per_class.push(ClassValue {
            key: k.to_string(),
            perm_class: canonical_key(k),
            value: v.value,
            tail_bound: v.tail_bound,
        });
    }
    Ok(OrderValue {
        k: n,
        value: total.value(),
        tail_bound: tail,
        per_class,
    })
}

/// `Val[q_n(0)] = sum_E Val(E)` over the half-labeled keys on `n` nodes.
pub fn val_qn0(ctx: &SeriesContext, psi: TorusPoint, n: usize, mode: RestrictMode) -> Result<OrderValue> {
    ctx.check_order(n)?;
    let orbit = ctx.orbit(psi, n);
    let lam = ctx.powers(n);
    order_in(ctx, &orbit, &lam, n, mode)
}

/// `Val[q_k(0)]` for `k = 1..=order`, sharing one orbit table.
pub fn val_q_series(ctx: &SeriesContext, psi: TorusPoint, order: usize, mode: RestrictMode) -> Result<Vec<OrderValue>> {
    ctx.check_order(order)?;
    let orbit = ctx.orbit(psi, order);
    let lam = ctx.powers(order);
    (1..=order).map(|n| order_in(ctx, &orbit, &lam, n, mode)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Order2Report {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
}

/// The product series `(d- h+^(1)) (d- h-^(1))` against the re-indexed
/// divergent part of `d- h+^(2)`, both cut to `a in [0, pmax]`,
/// `a + b in [-pmax, -1]`.
pub fn order2_cancellation_check(ctx: &SeriesContext, psi: TorusPoint) -> Order2Report {
    let p = ctx.pmax() as i64;
    let orbit = ctx.orbit(psi, 1);
    let lp = ctx.auto().lambda_plus;
    let lm = ctx.auto().lambda_minus;
    let dfp = |q: i64| orbit.g(Sign::Plus, 0, 1, q);
    let dfm = |q: i64| orbit.g(Sign::Minus, 0, 1, q);
    let mut lhs = CompensatedSum::new();
    for a in 0..=p {
        let w = -lp.powi(-(a as i32 + 1)) * lm.powi(a as i32 - 1) * dfp(a);
        for b in -p..=-1 {
            lhs.add(w * dfm(b));
        }
    }
    let mut rhs = CompensatedSum::new();
    for a in 0..=p {
        let w = -lp.powi(-(a as i32 + 1)) * dfp(a);
        let mut b = -a - 1;
        while a + b >= -p {
            let lam = lm.powi((b + 1).unsigned_abs() as i32) * lm.powi((a + b) as i32);
            rhs.add(w * lam * dfm(a + b));
            b -= 1;
        }
    }
    let (lhs, rhs) = (lhs.value(), rhs.value());
    Order2Report {
        lhs,
        rhs,
        abs_diff: (lhs - rhs).abs(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SlopeReport {
    pub psi: TorusPoint,
    pub eps: f64,
    #[serde(rename = "K")]
    pub order: usize,
    pub pmax: u32,
    pub restrict_mode: RestrictMode,
    pub per_order: Vec<OrderValue>,
    /// `v_eps(psi)`.
    pub slope: f64,
    /// `v_eps v+ + v-`, normalized, in the standard basis.
    pub tangent: [f64; 2],
    pub radius: f64,
    pub forced: bool,
}

/// Sum `eps^k Val[q_k(0)]` for `k = 1..=order`.
pub fn slope(
    ctx: &SeriesContext,
    psi: TorusPoint,
    eps: f64,
    order: usize,
    mode: RestrictMode,
    force: bool,
) -> Result<SlopeReport> {
    let radius = ctx.radius();
    let beyond = eps.abs() >= radius;
    if beyond && !force {
        return Err(Error::RadiusExceeded { eps, radius });
    }
    let per_order = val_q_series(ctx, psi, order, mode)?;
    let s = slope_from(&per_order, eps);
    let a = ctx.auto();
    let t = a.from_eigen([s, 1.0]);
    let norm = t[0].hypot(t[1]);
    Ok(SlopeReport {
        psi,
        eps,
        order,
        pmax: ctx.pmax(),
        restrict_mode: mode,
        per_order,
        slope: s,
        tangent: [t[0] / norm, t[1] / norm],
        radius,
        forced: beyond,
    })
}

/// `sum_k eps^k value_k`, Horner form.
pub fn slope_from(per_order: &[OrderValue], eps: f64) -> f64 {
    per_order.iter().rev().fold(0.0, |acc, o| (acc + o.value) * eps)
}
