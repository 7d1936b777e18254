//! The acceptance criteria as runnable checks, one [`CriterionResult`] each.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{eulerian_row, order_bound, sc_majorant, sup_norm_grid};
use crate::conjugacy::SeriesContext;
use crate::oracle::{
    fd_manifold_slope, least_squares_slope, manifold_membership_check, stable_direction, DEFAULT_ITERS,
};
use crate::series::{cauchy_invert_explicit, cauchy_invert_recursive, q_n_t, PowerSeries};
use crate::slope::{order2_cancellation_check, slope_from, val_q_series, val_qn0};
use crate::torus::{trig_eval, HyperbolicAuto, Mat2, PerturbedMap, TorusPoint, TrigPoly, FIBONACCI};
use crate::trees::{
    breaking_partition_check, catalan, cuts_of, enumerate_shapes, enumerate_sign_derivative, main_stem,
    perm_class_size, LabeledTree, RestrictMode, Tree,
};
use crate::{ordered_map, Result, Sign};

/// Errors below this are treated as exact zeros when fitting rates.
const EXACT_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug, Serialize)]
pub struct AcceptanceConfig {
    pub matrix: Mat2,
    pub f: TrigPoly,
    pub pmax: u32,
    pub seed: u64,
    /// Sample size for the cheap pointwise checks.
    pub points: usize,
    /// Sample size for the slope and finite-`t` checks.
    pub slope_points: usize,
    pub restrict_mode: RestrictMode,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            matrix: FIBONACCI,
            f: default_perturbation(),
            pmax: 40,
            seed: 2024,
            points: 100,
            slope_points: 20,
            restrict_mode: RestrictMode::StemMinusOnly,
        }
    }
}

impl AcceptanceConfig {
    pub fn zero_f() -> Self {
        AcceptanceConfig {
            f: TrigPoly::zero(),
            ..Default::default()
        }
    }
}

/// `f = (0.7, 0.3) cos(theta1) + (-0.2, 0.6) sin(theta2)`.
pub fn default_perturbation() -> TrigPoly {
    TrigPoly::cosine([1, 0], [0.7, 0.3]).plus(&TrigPoly::sine([0, 1], [-0.2, 0.6]))
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
}

impl CriterionResult {
    fn new(id: u32, name: &str) -> Self {
        CriterionResult {
            id,
            name: name.into(),
            passed: true,
            detail: String::new(),
            metrics: BTreeMap::new(),
        }
    }

    fn metric(&mut self, k: &str, v: f64) {
        self.metrics.insert(k.into(), v);
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.into());
        }
    }

    /// One line: `[PASS] 3 name: detail`.
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        let detail = if self.detail.is_empty() { "ok" } else { &self.detail };
        format!("[{tag}] {:>2} {}: {detail}", self.id, self.name)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AcceptanceReport {
    pub passed: bool,
    /// Modes that passed the slope check against the oracle.
    pub passing_restrict_modes: Vec<RestrictMode>,
    pub criteria: Vec<CriterionResult>,
}

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "eigen-structure"),
    (2, "combinatorics"),
    (3, "series inversion"),
    (4, "order-1 conjugacy identity"),
    (5, "conjugacy residual order"),
    (6, "order-2 cancellation"),
    (7, "finite-t limit"),
    (8, "slope vs oracle"),
    (9, "bound majorant"),
    (10, "oracle self-consistency"),
];

struct Setup {
    cfg: AcceptanceConfig,
    ctx: SeriesContext,
}

impl Setup {
    fn points(&self, n: usize, stream: u64) -> Vec<TorusPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(stream);
        (0..n).map(|_| TorusPoint::random(&mut rng)).collect()
    }

    fn map(&self, eps: f64) -> PerturbedMap {
        PerturbedMap::new(self.ctx.auto().clone(), self.ctx.f().clone(), eps)
    }
}

/// Run one criterion by id.
pub fn run_criterion(id: u32, cfg: &AcceptanceConfig) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .unwrap_or("unknown");
    let setup = HyperbolicAuto::new(cfg.matrix)
        .and_then(|a| SeriesContext::new(a, cfg.f.clone(), cfg.pmax))
        .map(|ctx| Setup { cfg: cfg.clone(), ctx });
    let outcome = setup.and_then(|s| match id {
        1 => eigen_structure(&s),
        2 => combinatorics(&s),
        3 => inversion(&s),
        4 => order_one(&s),
        5 => residual_order(&s),
        6 => order_two(&s),
        7 => finite_t(&s),
        8 => slope_vs_oracle(&s),
        9 => bound_majorant(&s),
        10 => oracle_consistency(&s),
        _ => Err(crate::Error::InvalidParameter(format!("no criterion {id}"))),
    });
    match outcome {
        Ok(r) => r,
        Err(e) => {
            let mut r = CriterionResult::new(id, name);
            r.require(false, format!("error: {e}"));
            r
        }
    }
}

pub fn run_all(cfg: &AcceptanceConfig) -> AcceptanceReport {
    let criteria: Vec<CriterionResult> = CRITERIA.iter().map(|(id, _)| run_criterion(*id, cfg)).collect();
    let passing_restrict_modes = criteria
        .iter()
        .find(|c| c.id == 8)
        .map(|c| {
            RestrictMode::BOTH
                .into_iter()
                .filter(|m| c.metrics.get(&format!("{m}.passed")) == Some(&1.0))
                .collect()
        })
        .unwrap_or_default();
    AcceptanceReport {
        passed: criteria.iter().all(|c| c.passed),
        passing_restrict_modes,
        criteria,
    }
}

fn eigen_structure(s: &Setup) -> Result<CriterionResult> {
    let mut r = CriterionResult::new(1, "eigen-structure");
    let a = s.ctx.auto();
    let m = a.matrix_f64();
    let mut worst: f64 = 0.0;
    for alpha in Sign::BOTH {
        let v = a.v(alpha);
        let l = a.lambda(alpha);
        for i in 0..2 {
            worst = worst.max((m[i][0] * v[0] + m[i][1] * v[1] - l * v[i]).abs());
        }
    }
    r.metric("eigen_residual", worst);
    r.require(worst < 1e-12, format!("eigen residual {worst:e}"));
    if s.cfg.matrix == FIBONACCI {
        let root5 = 5f64.sqrt();
        let dp = (a.lambda_plus - (1.0 + root5) / 2.0).abs();
        let dm = (a.lambda_minus - (1.0 - root5) / 2.0).abs();
        r.metric("lambda_plus_err", dp);
        r.metric("lambda_minus_err", dm);
        r.require(dp < 1e-12 && dm < 1e-12, format!("eigenvalue errors {dp:e}, {dm:e}"));
    } else {
        let tr = m[0][0] + m[1][1];
        let det = a.det as f64;
        for l in [a.lambda_plus, a.lambda_minus] {
            let res = (l * l - tr * l + det).abs();
            r.require(res < 1e-12 * l.abs().max(1.0), format!("characteristic residual {res:e}"));
        }
    }
    Ok(r)
}

/// All orderings of the children at every node, as distinct trees.
fn reorderings(t: &LabeledTree) -> Vec<LabeledTree> {
    let child_variants: Vec<Vec<LabeledTree>> = t.children.iter().map(reorderings).collect();
    let mut combos: Vec<Vec<LabeledTree>> = vec![Vec::new()];
    for vs in &child_variants {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                vs.iter().map(move |v| {
                    let mut c = c.clone();
                    c.push(v.clone());
                    c
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for c in combos {
        for perm in permutations(c.len()) {
            out.push(Tree {
                sign: t.sign,
                label: t.label,
                children: perm.iter().map(|&i| c[i].clone()).collect(),
            });
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn combinatorics(_s: &Setup) -> Result<CriterionResult> {
    let mut r = CriterionResult::new(2, "combinatorics");
    // Catalan numbers by their convolution recurrence.
    let mut cat = vec![1u128];
    for n in 1..7 {
        cat.push((0..n).map(|i| cat[i] * cat[n - 1 - i]).sum());
    }
    for k in 1..=7 {
        let got = enumerate_shapes(k)?.len() as u128;
        r.require(got == cat[k - 1] && got == catalan(k - 1), format!("k={k}: {got} shapes"));
    }
    let four = enumerate_shapes(4)?.len();
    r.metric("shapes_k4", four as f64);
    r.require(four == 5, format!("{four} shapes with 4 nodes"));

    let mut cut_failures = 0;
    let mut perm_failures = 0;
    for k in 1..=5 {
        for alpha in Sign::BOTH {
            for key in enumerate_sign_derivative(k, alpha)? {
                let s = main_stem(&key)
                    .iter()
                    .skip(1)
                    .filter(|p| key.tree.node(p).unwrap().sign == Sign::Minus)
                    .count();
                let cuts = cuts_of(&key);
                let distinct: HashSet<_> = cuts.iter().map(|c| c.string_rep.clone()).collect();
                if cuts.len() != 1 << s || distinct.len() != cuts.len() {
                    cut_failures += 1;
                }
                let mut next = 0i64;
                let labeled = key.tree.map_labels(&mut |_| {
                    next += 1;
                    next
                });
                let orbit: HashSet<String> = reorderings(&labeled).iter().map(|t| t.to_string()).collect();
                let expected: u128 = labeled
                    .nodes()
                    .iter()
                    .map(|n| (1..=n.children.len() as u128).product::<u128>())
                    .product();
                if orbit.len() as u128 != perm_class_size(&key) || expected != perm_class_size(&key) {
                    perm_failures += 1;
                }
            }
        }
    }
    r.metric("cut_failures", cut_failures as f64);
    r.metric("perm_failures", perm_failures as f64);
    r.require(cut_failures == 0, format!("{cut_failures} keys with wrong cut count"));
    r.require(perm_failures == 0, format!("{perm_failures} keys with wrong Perm size"));

    for n in 1..=4 {
        let p = breaking_partition_check(n, 3)?;
        r.metric(&format!("product_trees_n{n}"), p.product_trees as f64);
        r.require(p.ok(), format!("partition fails at n={n}: {p:?}"));
    }
    Ok(r)
}

fn inversion(s: &Setup) -> Result<CriterionResult> {
    let mut r = CriterionResult::new(3, "series inversion");
    let mut rng = ChaCha8Rng::seed_from_u64(s.cfg.seed);
    rng.set_stream(3);
    let (mut agree, mut reconv): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let mut a: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        a[0] = 0.0;
        let a = PowerSeries::new(a);
        let mut b: Vec<f64> = (0..8).map(|_| rng.gen_range(-0.5..0.5)).collect();
        b[0] = 1.0;
        let b = PowerSeries::new(b);
        let q1 = cauchy_invert_recursive(&a, &b)?;
        let q2 = cauchy_invert_explicit(&a, &b)?;
        let back = b.mul_truncated(&q1);
        for k in 0..8 {
            agree = agree.max((q1.get(k) - q2.get(k)).abs());
            reconv = reconv.max((back.get(k) - a.get(k)).abs());
        }
    }
    r.metric("max_explicit_vs_recursive", agree);
    r.metric("max_reconvolution", reconv);
    r.require(agree < 1e-12, format!("explicit vs recursive {agree:e}"));
    r.require(reconv < 1e-13, format!("reconvolution {reconv:e}"));
    Ok(r)
}

fn order_one(s: &Setup) -> Result<CriterionResult> {
    let mut r = CriterionResult::new(4, "order-1 conjugacy identity");
    let a = s.ctx.auto();
    let pts = s.points(s.cfg.points, 4);
    let res = ordered_map(&pts, |&psi| -> Result<(f64, f64)> {
        let mut worst = 0.0f64;
        let mut worst_ratio = 0.0f64;
        for alpha in Sign::BOTH {
            let h0 = s.ctx.h_k(psi, 1, alpha)?;
            let h1 = s.ctx.h_k(a.apply(psi), 1, alpha)?;
            let fa = trig_eval(s.ctx.f(), a, alpha, &[], psi);
            let defect = (h1.value - a.lambda(alpha) * h0.value + fa).abs();
            let allowed = 2.0 * h0.tail_bound.max(h1.tail_bound);
            worst = worst.max(defect);
            if defect > 0.0 {
                worst_ratio = worst_ratio.max(defect / allowed);
            }
        }
        Ok((worst, worst_ratio))
    });
    let mut max_defect: f64 = 0.0;
    let mut max_ratio: f64 = 0.0;
    for x in res {
        let (d, q) = x?;
        max_defect = max_defect.max(d);
        max_ratio = max_ratio.max(q);
    }
    r.metric("max_defect", max_defect);
    r.metric("max_defect_over_allowed", max_ratio);
    r.require(max_ratio <= 1.0, format!("defect exceeds 2x tail (ratio {max_ratio:.3})"));
    Ok(r)
}

/// Least-squares slope of `ln y` against `ln x`, `None` if every `y` is at
/// the exact floor.
fn loglog(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if ys.iter().all(|y| *y < EXACT_FLOOR) {
        return None;
    }
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x.ln(), y.max(f64::MIN_POSITIVE).ln()))
        .collect();
    Some(least_squares_slope(&pts))
}

fn residual_order(s: &Setup) -> Result<CriterionResult> {
    const K: usize = 3;
    let mut r = CriterionResult::new(5, "conjugacy residual order");
    let ctx = s.ctx.with_pmax(80)?;
    let eps_list = [0.005, 0.01, 0.02, 0.04];
    let a = ctx.auto().clone();
    let pts = s.points(s.cfg.slope_points, 5);
    let map = s.map(0.0);
    let fits = ordered_map(&pts, |&psi| -> Result<Option<f64>> {
        let mut res = Vec::new();
        for &eps in &eps_list {
            let lhs = map.with_eps(eps).apply(ctx.conjugate(psi, eps, K)?);
            let rhs = ctx.conjugate(a.apply(psi), eps, K)?;
            res.push(lhs.distance(&rhs));
        }
        Ok(loglog(&eps_list, &res))
    });
    let mut min_slope = f64::INFINITY;
    for f in fits {
        if let Some(v) = f? {
            min_slope = min_slope.min(v);
        }
    }
    r.metric("min_fit_slope", min_slope);
    r.require(
        min_slope >= K as f64 + 0.7,
        format!("fit slope {min_slope:.3} < {}", K as f64 + 0.7),
    );
    if min_slope.is_infinite() {
        r.detail = "residual identically zero".into();
    }
    Ok(r)
}

fn order_two(s: &Setup) -> Result<CriterionResult> {
    let mut r = CriterionResult::new(6, "order-2 cancellation");
    let ctx = s.ctx.with_pmax(30)?;
    let mut pts = vec![TorusPoint::origin()];
    pts.extend(s.points(s.cfg.slope_points, 6));
    let worst = pts
        .iter()
        .map(|&psi| order2_cancellation_check(&ctx, psi).abs_diff)
        .fold(0.0, f64::max);
    r.metric("max_abs_diff", worst);
    r.require(worst < 1e-12, format!("abs_diff {worst:e}"));
    Ok(r)
}

fn finite_t(s: &Setup) -> Result<CriterionResult> {
    let mut r = CriterionResult::new(7, "finite-t limit");
    let pts = s.points(s.cfg.slope_points, 7);
    let mode = s.cfg.restrict_mode;
    let rows = ordered_map(&pts, |&psi| -> Result<Vec<Option<f64>>> {
        let mut out = Vec::new();
        for n in 1..=2 {
            let v = val_qn0(&s.ctx, psi, n, mode)?.value;
            let g1 = (q_n_t(&s.ctx, psi, n, 1e-2)? - v).abs();
            let g2 = (q_n_t(&s.ctx, psi, n, 5e-3)? - v).abs();
            out.push(if g1 < EXACT_FLOOR && g2 < EXACT_FLOOR {
                None
            } else {
                Some(g1 / g2)
            });
        }
        Ok(out)
    });
    for n in 1..=2 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut bad = 0;
        for row in &rows {
            let row = row.as_ref().map_err(Clone::clone)?;
            if let Some(q) = row[n - 1] {
                lo = lo.min(q);
                hi = hi.max(q);
                if !(1.6..=2.4).contains(&q) {
                    bad += 1;
                }
            }
        }
        r.metric(&format!("n{n}.min_ratio"), lo);
        r.metric(&format!("n{n}.max_ratio"), hi);
        r.metric(&format!("n{n}.outside"), bad as f64);
        r.require(
            bad == 0,
            format!("n={n}: {bad}/{} ratios outside [1.6, 2.4] (range {lo:.2}..{hi:.2})", pts.len()),
        );
    }
    Ok(r)
}

fn slope_vs_oracle(s: &Setup) -> Result<CriterionResult> {
    const K: usize = 2;
    let mut r = CriterionResult::new(8, "slope vs oracle");
    let eps_list = [0.005, 0.01, 0.02];
    let pts = s.points(s.cfg.slope_points, 8);
    let oracle = ordered_map(&pts, |&psi| -> Result<Vec<f64>> {
        eps_list
            .iter()
            .map(|&eps| {
                let at = s.ctx.conjugate(psi, eps, K + 2)?;
                Ok(stable_direction(&s.map(eps), at, DEFAULT_ITERS)?.slope)
            })
            .collect()
    });
    let oracle: Vec<Vec<f64>> = oracle.into_iter().collect::<Result<_>>()?;
    let threshold = K as f64 + 0.6;
    let mut passing = Vec::new();
    for mode in RestrictMode::BOTH {
        let errors = ordered_map(&pts, |&psi| -> Result<Vec<f64>> {
            let per = val_q_series(&s.ctx, psi, K, mode)?;
            Ok(eps_list.iter().map(|&e| slope_from(&per, e)).collect())
        });
        let mut min_fit = f64::INFINITY;
        let mut below = 0;
        for (row, want) in errors.into_iter().zip(&oracle) {
            let errs: Vec<f64> = row?.iter().zip(want).map(|(a, b)| (a - b).abs()).collect();
            if let Some(fit) = loglog(&eps_list, &errs) {
                min_fit = min_fit.min(fit);
                if fit < threshold {
                    below += 1;
                }
            }
        }
        let ok = below == 0;
        r.metric(&format!("{mode}.min_fit_slope"), min_fit);
        r.metric(&format!("{mode}.points_below"), below as f64);
        r.metric(&format!("{mode}.passed"), if ok { 1.0 } else { 0.0 });
        if ok {
            passing.push(mode);
        }
    }
    if passing.is_empty() {
        r.require(false, format!("no restrict mode reaches fit slope {threshold}"));
    } else {
        let names: Vec<&str> = passing.iter().map(|m| m.as_str()).collect();
        r.detail = format!("passing restrict modes: {}", names.join(", "));
    }
    Ok(r)
}

fn bound_majorant(s: &Setup) -> Result<CriterionResult> {
    let mut r = CriterionResult::new(9, "bound majorant");
    let a = s.ctx.auto();
    let lp = a.lambda_plus;
    let n = s.ctx.f().degree_bound();
    let f_sup = sup_norm_grid(s.ctx.f(), a);
    let bounds: Vec<f64> = (1..=4).map(|k| order_bound(k, n, f_sup, lp)).collect::<Result<_>>()?;
    let pts = s.points(s.cfg.slope_points, 9);
    let vals = ordered_map(&pts, |&psi| val_q_series(&s.ctx, psi, 4, s.cfg.restrict_mode));
    let mut worst: f64 = 0.0;
    for row in vals {
        for (o, b) in row?.iter().zip(&bounds) {
            if o.value != 0.0 {
                worst = worst.max(o.value.abs() / b);
            }
        }
    }
    r.metric("max_value_over_bound", worst);
    r.require(worst <= 1.0, format!("|Val[q_k(0)]| exceeds the bound (ratio {worst:.3})"));

    for row in 0..=8u32 {
        let sum: u64 = eulerian_row(row)?.iter().sum();
        let fact: u64 = (1..=row as u64).product();
        r.require(sum == fact, format!("Eulerian row {row} sums to {sum}"));
    }

    let x = lp.powi(-2);
    let direct: f64 = (0..200).map(|k| (k as f64 + 1.0) * x.powi(k)).sum();
    let closed = sc_majorant(1, lp, 1.0)?;
    let rel = (closed - direct) / closed;
    r.metric("sc_majorant_rel_gap", rel);
    r.require(
        closed >= direct * (1.0 - 1e-10) && rel.abs() < 1e-10,
        format!("sc_majorant {closed} vs direct {direct}"),
    );
    Ok(r)
}

fn oracle_consistency(s: &Setup) -> Result<CriterionResult> {
    const ORDER: usize = 4;
    let mut r = CriterionResult::new(10, "oracle self-consistency");
    let eps = 0.02;
    let map = s.map(eps);
    let lm = s.ctx.auto().lambda_minus.abs();

    let pts = s.points(50, 10);
    let mut worst_res: f64 = 0.0;
    let mut worst_mu: f64 = 0.0;
    for psi in &pts {
        let o = stable_direction(&map, *psi, DEFAULT_ITERS)?;
        worst_res = worst_res.max(o.residual);
        worst_mu = worst_mu.max(o.multiplier.abs());
    }
    r.metric("max_invariance_residual", worst_res);
    r.metric("max_abs_multiplier", worst_mu);
    r.require(worst_res < 1e-8, format!("invariance residual {worst_res:e}"));
    r.require(worst_mu < 1.0, format!("multiplier {worst_mu}"));

    let tol = 1e-6f64.max(eps.powi(ORDER as i32 + 1));
    let few = &pts[..10.min(pts.len())];
    let rows = ordered_map(few, |&psi| -> Result<(f64, f64)> {
        let fd = fd_manifold_slope(&s.ctx, &map, psi, &[1e-2, 5e-3, 2.5e-3], ORDER)?;
        let sd = stable_direction(&map, s.ctx.conjugate(psi, eps, ORDER)?, DEFAULT_ITERS)?;
        let m = manifold_membership_check(&s.ctx, &map, psi, 1e-2, 12, ORDER)?;
        Ok(((fd.slope - sd.slope).abs(), (m.rate - lm).abs()))
    });
    let mut worst_fd: f64 = 0.0;
    let mut worst_rate: f64 = 0.0;
    for row in rows {
        let (d, q) = row?;
        worst_fd = worst_fd.max(d);
        worst_rate = worst_rate.max(q);
    }
    r.metric("max_fd_vs_stable", worst_fd);
    r.metric("max_rate_deviation", worst_rate);
    r.require(worst_fd <= tol, format!("fd vs stable {worst_fd:e} > {tol:e}"));
    r.require(worst_rate <= 0.05, format!("decay rate off |lambda-| by {worst_rate:.3}"));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        let cfg = AcceptanceConfig::default();
        for id in [1, 3, 6, 9] {
            let r = run_criterion(id, &cfg);
            assert!(r.passed, "{}", r.line());
        }
    }

    #[test]
    fn reorderings_count_distinct_trees() {
        let t: LabeledTree = Tree {
            sign: Sign::Plus,
            label: 0,
            children: vec![Tree::leaf(Sign::Minus, -1), Tree::leaf(Sign::Plus, 2), Tree::leaf(Sign::Plus, 3)],
        };
        assert_eq!(reorderings(&t).len(), 6);
    }
}
