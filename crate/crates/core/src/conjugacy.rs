//! Node and tree values, the conjugacy coefficients `h^(k)_alpha` and the
//! truncated conjugacy `H_eps`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::bounds;
use crate::engine::{FlatTree, Orbit, Powers};
use crate::sum::CompensatedSum;
use crate::torus::{trig_eval, HyperbolicAuto, ProjectedTrig, TorusPoint, TrigPoly};
use crate::trees::{enumerate_shapes, sign_assignments, LabeledTree, SignTree, MAX_NODES};
use crate::{ordered_map, Error, Result, Sign};

pub const DEFAULT_K_MAX: usize = 5;
/// Orders used by the radius estimate.
pub const RADIUS_ORDERS: u32 = 10;

/// One coefficient `h^(k)_alpha(psi)` with its truncation error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesTerm {
    pub order: usize,
    pub alpha: Sign,
    pub value: f64,
    pub tail_bound: f64,
}

type CacheKey = (u64, u64, usize, Sign);

/// The data shared by every series evaluation: `S0`, `f` and the label
/// cutoff. Computed `h^(k)` values are cached by the exact bits of `psi`.
pub struct SeriesContext {
    auto: HyperbolicAuto,
    f: TrigPoly,
    proj: ProjectedTrig,
    pmax: u32,
    k_max: usize,
    cache: Mutex<HashMap<CacheKey, SeriesTerm>>,
    radius: OnceLock<f64>,
}

impl Clone for SeriesContext {
    fn clone(&self) -> Self {
        SeriesContext {
            auto: self.auto.clone(),
            f: self.f.clone(),
            proj: self.proj.clone(),
            pmax: self.pmax,
            k_max: self.k_max,
            cache: Mutex::new(HashMap::new()),
            radius: self.radius.clone(),
        }
    }
}

impl std::fmt::Debug for SeriesContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SeriesContext")
            .field("auto", &self.auto)
            .field("f", &self.f)
            .field("pmax", &self.pmax)
            .field("k_max", &self.k_max)
            .finish()
    }
}

impl SeriesContext {
    pub fn new(auto: HyperbolicAuto, f: TrigPoly, pmax: u32) -> Result<Self> {
        if pmax < 1 {
            return Err(Error::InvalidParameter("pmax must be at least 1".into()));
        }
        let proj = ProjectedTrig::new(&f, &auto);
        Ok(SeriesContext {
            auto,
            f,
            proj,
            pmax,
            k_max: DEFAULT_K_MAX,
            cache: Mutex::new(HashMap::new()),
            radius: OnceLock::new(),
        })
    }

    pub fn with_k_max(mut self, k_max: usize) -> Result<Self> {
        if k_max == 0 || k_max > MAX_NODES {
            return Err(Error::TooLarge {
                what: "k_max",
                value: k_max,
                limit: MAX_NODES,
            });
        }
        self.k_max = k_max;
        Ok(self)
    }

    /// Same `S0` and `f`, different cutoff, fresh cache.
    pub fn with_pmax(&self, pmax: u32) -> Result<Self> {
        SeriesContext::new(self.auto.clone(), self.f.clone(), pmax)?.with_k_max(self.k_max)
    }

    pub fn auto(&self) -> &HyperbolicAuto {
        &self.auto
    }

    pub fn f(&self) -> &TrigPoly {
        &self.f
    }

    pub fn projected(&self) -> &ProjectedTrig {
        &self.proj
    }

    pub fn pmax(&self) -> u32 {
        self.pmax
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Estimated convergence radius in `eps` (see [`crate::bounds`]).
    pub fn radius(&self) -> f64 {
        *self
            .radius
            .get_or_init(|| bounds::radius_for(&self.f, &self.auto, RADIUS_ORDERS).radius)
    }

    pub(crate) fn check_order(&self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidParameter("orders start at 1".into()));
        }
        if k > self.k_max {
            return Err(Error::TooLarge {
                what: "order",
                value: k,
                limit: self.k_max,
            });
        }
        Ok(())
    }

    /// Orbit table deep enough for trees on up to `order` nodes.
    pub(crate) fn orbit(&self, psi: TorusPoint, order: usize) -> Orbit {
        Orbit::new(&self.auto, &self.proj, psi, order * self.pmax as usize, order)
    }

    pub(crate) fn powers(&self, order: usize) -> Powers {
        Powers::new(&self.auto, self.pmax, order * self.pmax as usize)
    }

    /// Node and tree values at a fixed `psi`, evaluated term by term.
    pub fn at(&self, psi: TorusPoint) -> NodeValueContext<'_> {
        NodeValueContext { series: self, psi }
    }

    /// `h^(k)_alpha(psi)`.
    pub fn h_k(&self, psi: TorusPoint, k: usize, alpha: Sign) -> Result<SeriesTerm> {
        let all = self.h_series(psi, k)?;
        Ok(all[k - 1][match alpha {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }])
    }

    /// `[h^(k)_+, h^(k)_-]` for `k = 1..=order`.
    pub fn h_series(&self, psi: TorusPoint, order: usize) -> Result<Vec<[SeriesTerm; 2]>> {
        self.check_order(order)?;
        let bits = (psi.theta1().to_bits(), psi.theta2().to_bits());
        {
            let cache = self.cache.lock().expect("cache lock");
            let hit: Option<Vec<[SeriesTerm; 2]>> = (1..=order)
                .map(|k| {
                    Some([
                        *cache.get(&(bits.0, bits.1, k, Sign::Plus))?,
                        *cache.get(&(bits.0, bits.1, k, Sign::Minus))?,
                    ])
                })
                .collect();
            if let Some(h) = hit {
                return Ok(h);
            }
        }
        let orbit = self.orbit(psi, order);
        let lam = self.powers(order);
        let mut out = Vec::with_capacity(order);
        for k in 1..=order {
            let plus = self.sum_order(&orbit, &lam, k, Sign::Plus)?;
            let minus = self.sum_order(&orbit, &lam, k, Sign::Minus)?;
            out.push([plus, minus]);
        }
        let mut cache = self.cache.lock().expect("cache lock");
        for (k, pair) in out.iter().enumerate() {
            for t in pair {
                cache.insert((bits.0, bits.1, k + 1, t.alpha), *t);
            }
        }
        Ok(out)
    }

    fn sum_order(&self, orbit: &Orbit, lam: &Powers, k: usize, alpha: Sign) -> Result<SeriesTerm> {
        let trees: Vec<SignTree> = enumerate_shapes(k)?
            .iter()
            .flat_map(|s| sign_assignments(s, alpha))
            .collect();
        let parts = ordered_map(&trees, |t| {
            let flat = FlatTree::new(t, None, None);
            (flat.sum(orbit, lam, self.pmax), flat.tail_bound(&self.proj, &self.auto, self.pmax))
        });
        let mut value = CompensatedSum::new();
        let mut tail = 0.0;
        for (v, b) in parts {
            value.add(v);
            tail += b;
        }
        Ok(SeriesTerm {
            order: k,
            alpha,
            value: value.value(),
            tail_bound: tail,
        })
    }

    /// `sum_{k=1}^{order} eps^k (h^(k)_+, h^(k)_-)`: the displacement
    /// `H_eps(psi) - psi` in the `(v+, v-)` basis.
    pub fn h_eps(&self, psi: TorusPoint, eps: f64, order: usize) -> Result<[f64; 2]> {
        if eps == 0.0 {
            return Ok([0.0, 0.0]);
        }
        let h = self.h_series(psi, order)?;
        let mut out = [0.0; 2];
        let mut e = 1.0;
        for pair in &h {
            e *= eps;
            out[0] += e * pair[0].value;
            out[1] += e * pair[1].value;
        }
        Ok(out)
    }

    /// `H_eps(psi)`.
    pub fn conjugate(&self, psi: TorusPoint, eps: f64, order: usize) -> Result<TorusPoint> {
        let d = self.h_eps(psi, eps, order)?;
        Ok(psi.translate(self.auto.from_eigen(d)))
    }
}

/// Term-by-term evaluation of node and tree values at one point. Slow but
/// direct; it serves as the reference for the factorized sums.
pub struct NodeValueContext<'a> {
    series: &'a SeriesContext,
    pub psi: TorusPoint,
}

impl NodeValueContext<'_> {
    /// `Val(v, psi)` for node `v` of `t`; `deriv` marks the derivative node.
    pub fn node_val(&self, t: &LabeledTree, v: &[usize], deriv: Option<&[usize]>) -> Result<f64> {
        let node = t
            .node(v)
            .ok_or_else(|| Error::InvalidParameter(format!("no node at {v:?}")))?;
        let q = t.q(v).expect("node exists");
        let auto = &self.series.auto;
        let mut derivs = node.child_signs();
        let is_deriv = deriv == Some(v);
        if is_deriv {
            derivs.push(Sign::Minus);
        }
        let x = auto.pow_apply(q, self.psi)?;
        let g = trig_eval(&self.series.f, auto, node.sign, &derivs, x);
        let p = node.label as i32;
        let mut lambda = match node.sign {
            Sign::Plus => auto.lambda_plus.powi(-(p + 1)),
            Sign::Minus => auto.lambda_minus.powi(-p - 1),
        };
        if is_deriv {
            lambda *= auto.lambda_minus.powi(q as i32);
        }
        let fact: f64 = (1..=node.children.len()).map(|i| i as f64).product();
        Ok(node.sign.factor() / fact * lambda * g)
    }

    /// `Val(t, psi)`: the product of all node values.
    pub fn tree_val(&self, t: &LabeledTree, deriv: Option<&[usize]>) -> Result<f64> {
        t.paths()
            .iter()
            .try_fold(1.0, |acc, p| Ok(acc * self.node_val(t, p, deriv)?))
    }
}
