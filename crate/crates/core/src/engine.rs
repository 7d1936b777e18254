//! Fast evaluation of label sums over a fixed sign tree.
//!
//! For a tree with nodes `v`, the labeled sum `sum_p prod_v Val(v)` factors
//! by distributivity: with `W_v(Q)` the sum over labelings of the subtree at
//! `v` given `q(parent(v)) = Q`,
//!
//! ```text
//! W_v(Q) = C_v sum_{p in range_v(Q)} Lambda_v(p) D_v(Q + p) g_v(S^{Q+p} psi) prod_c W_c(Q + p)
//! ```
//!
//! where `D_v(q) = lambda_-^q` on the derivative node and 1 elsewhere. The
//! full sum is `W_top(0)`. Every `W_v` is tabulated over the finite range of
//! reachable `Q`, so the cost is polynomial in `pmax` instead of `pmax^k`.

use crate::sum::CompensatedSum;
use crate::torus::{HyperbolicAuto, ProjectedTrig, TorusPoint};
use crate::trees::{RestrictMode, Tree};
use crate::Sign;

fn sign_index(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

fn tri(d: usize) -> usize {
    d * (d + 1) / 2
}

/// `S0^q psi` for `|q| <= radius` and every `(d+)^a (d-)^b f_alpha` with
/// `a + b <= max_deg` evaluated along it.
pub(crate) struct Orbit {
    radius: i64,
    points: Vec<TorusPoint>,
    max_deg: usize,
    rows: Vec<Vec<f64>>,
}

impl Orbit {
    pub fn new(
        auto: &HyperbolicAuto,
        proj: &ProjectedTrig,
        psi: TorusPoint,
        radius: usize,
        max_deg: usize,
    ) -> Self {
        let points = auto.orbit(psi, radius);
        let per_sign = tri(max_deg + 1);
        let mut combos = Vec::with_capacity(2 * per_sign);
        for alpha in Sign::BOTH {
            for d in 0..=max_deg {
                for np in 0..=d {
                    let nm = d - np;
                    combos.push((proj.coefficients(alpha, np, nm), proj.constant(alpha, np, nm)));
                }
            }
        }
        let mut rows = vec![vec![0.0; points.len()]; combos.len()];
        for (i, x) in points.iter().enumerate() {
            let ph = proj.phases(*x);
            for (row, (coef, c0)) in rows.iter_mut().zip(&combos) {
                row[i] = ProjectedTrig::eval_with(coef, *c0, &ph);
            }
        }
        Orbit {
            radius: radius as i64,
            points,
            max_deg,
            rows,
        }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    #[allow(dead_code)]
    pub fn point(&self, q: i64) -> TorusPoint {
        self.points[(q + self.radius) as usize]
    }

    /// `(d+)^np (d-)^nm f_alpha (S0^q psi)`.
    #[inline]
    pub fn g(&self, alpha: Sign, np: usize, nm: usize, q: i64) -> f64 {
        self.row(alpha, np, nm)[(q + self.radius) as usize]
    }

    #[inline]
    pub fn row(&self, alpha: Sign, np: usize, nm: usize) -> &[f64] {
        let d = np + nm;
        assert!(d <= self.max_deg, "derivative order {d} not tabulated");
        &self.rows[sign_index(alpha) * tri(self.max_deg + 1) + tri(d) + np]
    }
}

#[derive(Clone, Debug)]
struct FlatNode {
    sign: Sign,
    parent: Option<usize>,
    children: Vec<usize>,
    deriv: bool,
    restricted: bool,
    np: usize,
    nm: usize,
    coef: f64,
}

/// A sign tree flattened in preorder, with the derivative mark and label
/// rules resolved per node.
#[derive(Clone, Debug)]
pub(crate) struct FlatTree {
    nodes: Vec<FlatNode>,
}

impl FlatTree {
    /// `deriv`: path of the derivative node, if any. `mode`: reduced minus
    /// ranges, or `None` for the symmetric cutoff everywhere.
    pub fn new<L>(tree: &Tree<L>, deriv: Option<&[usize]>, mode: Option<RestrictMode>) -> Self {
        let mut nodes = Vec::new();
        fn walk<L>(
            t: &Tree<L>,
            parent: Option<usize>,
            path: &mut Vec<usize>,
            deriv: Option<&[usize]>,
            mode: Option<RestrictMode>,
            out: &mut Vec<FlatNode>,
        ) {
            let me = out.len();
            let is_deriv = deriv == Some(path.as_slice());
            let on_stem = deriv.is_some_and(|d| d.starts_with(path));
            let restricted = t.sign == Sign::Minus
                && match mode {
                    None => false,
                    Some(RestrictMode::AllMinus) => true,
                    Some(RestrictMode::StemMinusOnly) => on_stem,
                };
            let np = t.children.iter().filter(|c| c.sign == Sign::Plus).count();
            let nm = t.children.len() - np + usize::from(is_deriv);
            let fact: f64 = (1..=t.children.len()).map(|i| i as f64).product();
            out.push(FlatNode {
                sign: t.sign,
                parent,
                children: Vec::new(),
                deriv: is_deriv,
                restricted,
                np,
                nm,
                coef: t.sign.factor() / fact,
            });
            for (i, c) in t.children.iter().enumerate() {
                path.push(i);
                let idx = out.len();
                out[me].children.push(idx);
                walk(c, Some(me), path, deriv, mode, out);
                path.pop();
            }
        }
        walk(tree, None, &mut Vec::new(), deriv, mode, &mut nodes);
        FlatTree { nodes }
    }

    /// Labeled sum with cutoff `pmax`, via the `W_v(Q)` recursion.
    pub fn sum(&self, orbit: &Orbit, lam: &Powers, pmax: u32) -> f64 {
        let p = pmax as i64;
        let n = self.nodes.len();
        // reachable q(parent) ranges, top down
        let mut qr: Vec<(i64, i64)> = vec![(0, 0); n];
        let mut own: Vec<(i64, i64)> = vec![(0, 0); n];
        for v in 0..n {
            let node = &self.nodes[v];
            if let Some(par) = node.parent {
                qr[v] = own[par];
            }
            let (lo, hi) = qr[v];
            own[v] = match (node.sign, node.restricted) {
                (Sign::Plus, _) => (lo, hi + p),
                (Sign::Minus, false) => (lo - p, hi - 1),
                (Sign::Minus, true) => {
                    if hi < 1 {
                        return 0.0;
                    }
                    (0, hi - 1)
                }
            };
            assert!(
                own[v].0 >= -orbit.radius() && own[v].1 <= orbit.radius(),
                "orbit table too short"
            );
        }
        let mut w: Vec<Vec<f64>> = vec![Vec::new(); n];
        for v in (0..n).rev() {
            let node = &self.nodes[v];
            let (qlo, qhi) = own[v];
            let g = orbit.row(node.sign, node.np, node.nm);
            let inner: Vec<f64> = (qlo..=qhi)
                .map(|q| {
                    let mut x = g[(q + orbit.radius()) as usize];
                    if node.deriv {
                        x *= lam.minus_pow(q);
                    }
                    for &c in &node.children {
                        x *= w[c][(q - qlo) as usize];
                    }
                    x
                })
                .collect();
            let (lo, hi) = qr[v];
            let mut out = Vec::with_capacity((hi - lo + 1) as usize);
            for big_q in lo..=hi {
                let (plo, phi) = match (node.sign, node.restricted) {
                    (Sign::Plus, _) => (0, p),
                    (Sign::Minus, false) => (-p, -1),
                    (Sign::Minus, true) => (-big_q, -1),
                };
                let mut acc = CompensatedSum::new();
                for lbl in plo..=phi {
                    let weight = match node.sign {
                        Sign::Plus => lam.plus_weight(lbl),
                        Sign::Minus => lam.minus_weight(lbl),
                    };
                    acc.add(weight * inner[(big_q + lbl - qlo) as usize]);
                }
                out.push(node.coef * acc.value());
            }
            for &c in &node.children {
                w[c] = Vec::new();
            }
            w[v] = out;
        }
        w[0][0]
    }

    /// Bound on `|infinite sum - truncated sum|`, by a union bound over the
    /// node whose label leaves the cutoff.
    pub fn tail_bound(&self, proj: &ProjectedTrig, auto: &HyperbolicAuto, pmax: u32) -> f64 {
        let lp = auto.lambda_plus.abs();
        let lm = auto.lambda_minus.abs();
        let mut sup = 1.0;
        let mut full = Vec::with_capacity(self.nodes.len());
        let mut tail = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            sup *= node.coef.abs() * proj.sup_bound(node.sign, node.np, node.nm);
            match (node.sign, node.restricted) {
                (Sign::Plus, _) => {
                    full.push(1.0 / (lp - 1.0));
                    tail.push(lp.powi(-(pmax as i32 + 1)) / (lp - 1.0));
                }
                (Sign::Minus, false) => {
                    full.push(1.0 / (1.0 - lm));
                    tail.push(lm.powi(pmax as i32) / (1.0 - lm));
                }
                (Sign::Minus, true) => {
                    full.push(1.0 / (1.0 - lm));
                    tail.push(0.0);
                }
            }
        }
        if sup == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for v in 0..full.len() {
            let others: f64 = full
                .iter()
                .enumerate()
                .filter(|&(w, _)| w != v)
                .map(|(_, f)| *f)
                .product();
            acc += tail[v] * others;
        }
        sup * acc
    }
}

/// Tabulated powers of the eigenvalues.
pub(crate) struct Powers {
    lambda_minus: f64,
    /// `lambda_+^{-(p+1)}`, `p = 0..=pmax`.
    plus: Vec<f64>,
    /// `lambda_-^m`, `m = 0..=mmax`.
    minus: Vec<f64>,
}

impl Powers {
    pub fn new(auto: &HyperbolicAuto, pmax: u32, qmax: usize) -> Self {
        let lp = auto.lambda_plus;
        let lm = auto.lambda_minus;
        let mmax = qmax.max(pmax as usize);
        Powers {
            lambda_minus: lm,
            plus: (0..=pmax as i32).map(|p| lp.powi(-(p + 1))).collect(),
            minus: (0..=mmax as i32).map(|m| lm.powi(m)).collect(),
        }
    }

    /// `Lambda` for a `+` node with label `p >= 0`.
    #[inline]
    pub fn plus_weight(&self, p: i64) -> f64 {
        self.plus[p as usize]
    }

    /// `Lambda` for a `-` node with label `p <= -1`: `lambda_-^{-p-1}`.
    #[inline]
    pub fn minus_weight(&self, p: i64) -> f64 {
        self.minus_pow(-p - 1)
    }

    #[inline]
    pub fn minus_pow(&self, m: i64) -> f64 {
        if m >= 0 && (m as usize) < self.minus.len() {
            self.minus[m as usize]
        } else {
            self.lambda_minus.powi(m as i32)
        }
    }
}
