//! Exhaustive check that breaking classes partition the product trees.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{
    breaking, canonical_key, cuts_of, enumerate_free_labelings, enumerate_sign_derivative,
    reassemble, DerivativeTree, LabeledDerivativeTree, ProductTree,
};
use crate::{Result, Sign};

#[derive(Clone, Debug, Default, Serialize)]
pub struct PartitionReport {
    pub n: usize,
    pub pmax: u32,
    /// Half-labeled classes up to reordering children.
    pub classes: usize,
    /// Product trees in `P_{n,+}` with labels inside the cutoff.
    pub product_trees: usize,
    /// Distinct product trees produced by breaking.
    pub produced: usize,
    /// Product trees reached from two different classes.
    pub overlaps: usize,
    /// Members of `P_{n,+}` that no breaking produced.
    pub uncovered: usize,
    /// Breakings that left `P_{n,+}` or failed to reassemble.
    pub roundtrip_failures: usize,
    /// Trees whose breakings were not `2^s` distinct product trees.
    pub count_failures: usize,
}

impl PartitionReport {
    pub fn ok(&self) -> bool {
        self.overlaps == 0
            && self.uncovered == 0
            && self.roundtrip_failures == 0
            && self.count_failures == 0
            && self.produced == self.product_trees
    }
}

/// Every labeled derivative tree on `k` nodes with top sign `alpha` and
/// labels in `[0, pmax]` / `[-pmax, -1]`.
pub fn labeled_derivative_trees(k: usize, alpha: Sign, pmax: u32) -> Result<Vec<LabeledDerivativeTree>> {
    let mut out = Vec::new();
    for key in enumerate_sign_derivative(k, alpha)? {
        for t in enumerate_free_labelings(&key.tree, pmax) {
            out.push(DerivativeTree {
                tree: t,
                deriv: key.deriv.clone(),
            });
        }
    }
    Ok(out)
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    crate::series::ordered_partitions(n)
}

/// `P_{n,+}` with bounded labels, by direct Cartesian products.
pub fn product_trees(n: usize, pmax: u32) -> Result<Vec<ProductTree<i64>>> {
    let mut by_size: HashMap<(usize, Sign), Vec<LabeledDerivativeTree>> = HashMap::new();
    for m in 1..=n {
        for a in Sign::BOTH {
            by_size.insert((m, a), labeled_derivative_trees(m, a, pmax)?);
        }
    }
    let mut out = Vec::new();
    for comp in compositions(n) {
        let mut acc: Vec<Vec<LabeledDerivativeTree>> = vec![Vec::new()];
        for (i, &m) in comp.iter().enumerate() {
            let sign = if i == 0 { Sign::Plus } else { Sign::Minus };
            let choices = &by_size[&(m, sign)];
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c.clone());
                        p
                    })
                })
                .collect();
        }
        out.extend(acc.into_iter().map(|factors| ProductTree { factors }));
    }
    Ok(out)
}

/// Break every labeled derivative tree in `d(Theta_{n,+})` at every cut and
/// compare the result with `P_{n,+}`.
pub fn breaking_partition_check(n: usize, pmax: u32) -> Result<PartitionReport> {
    let mut report = PartitionReport {
        n,
        pmax,
        ..Default::default()
    };
    let targets: HashSet<ProductTree<i64>> = product_trees(n, pmax)?.into_iter().collect();
    report.product_trees = targets.len();
    let mut owner: HashMap<ProductTree<i64>, String> = HashMap::new();
    let mut classes = HashSet::new();
    for t in labeled_derivative_trees(n, Sign::Plus, pmax)? {
        let class = canonical_key(&t);
        classes.insert(class.clone());
        let cuts = cuts_of(&t);
        let mut mine = HashSet::new();
        for c in &cuts {
            let p = breaking(&t, c)?;
            let back_ok = p.in_p_plus()
                && reassemble(&p).is_ok_and(|(b, _)| b.canonical(true) == t.canonical(true));
            if !back_ok {
                report.roundtrip_failures += 1;
            }
            mine.insert(p.clone());
            match owner.get(&p) {
                Some(o) if *o != class => report.overlaps += 1,
                Some(_) => {}
                None => {
                    owner.insert(p, class.clone());
                }
            }
        }
        if mine.len() != cuts.len() {
            report.count_failures += 1;
        }
    }
    report.classes = classes.len();
    report.produced = owner.len();
    report.uncovered = targets.iter().filter(|p| !owner.contains_key(*p)).count();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_partitions_hold() {
        for n in 1..=3 {
            let r = breaking_partition_check(n, 2).unwrap();
            assert!(r.ok(), "{r:?}");
        }
        assert_eq!(product_trees(1, 3).unwrap().len(), 4);
        // (2): 1 shape x 2 child signs x 2 derivative spots x 4 x (4 + 3) labels
        // (1,1): 4 x 3
        assert_eq!(product_trees(2, 3).unwrap().len(), 2 * 4 * 7 + 12);
    }
}
