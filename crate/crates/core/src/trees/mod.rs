//! Ordered trees and the objects built on them: sign-labeled and integer
//! labeled trees, derivative trees, product trees, main stems, cuts and
//! breakings.
//!
//! Nodes are addressed by [`NodePath`]: the sequence of child indices from
//! the top node. The top node has the empty path.

mod derivative;
mod labelings;
mod partition;
mod product;
mod shape;

pub use derivative::{
    canonical_key, cuts_of, enumerate_sign_derivative, main_stem, perm_class_size,
    sign_derivative_keys, Cut, DerivativeTree, HalfLabeledKey, LabeledDerivativeTree,
};
pub use labelings::{
    enumerate_free_labelings, enumerate_reduced_labelings, Labelings, RestrictMode,
};
pub use partition::{
    breaking_partition_check, labeled_derivative_trees, product_trees, PartitionReport,
};
pub use product::{breaking, equivalence_key, reassemble, ProductTree};
pub use shape::{catalan, enumerate_shapes, TreeShape, MAX_NODES};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Sign;

pub type NodePath = Vec<usize>;

/// Node labels that can be printed: `()` prints nothing, integers print
/// their value.
pub trait Label: Clone {
    fn text(&self) -> String;
}

impl Label for () {
    fn text(&self) -> String {
        String::new()
    }
}

impl Label for i64 {
    fn text(&self) -> String {
        self.to_string()
    }
}

/// An ordered tree with a sign and a label `L` on every node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tree<L> {
    pub sign: Sign,
    pub label: L,
    pub children: Vec<Tree<L>>,
}

/// Tree with integer labels `p_v`.
pub type LabeledTree = Tree<i64>;
/// Tree with signs only.
pub type SignTree = Tree<()>;

impl<L> Tree<L> {
    pub fn leaf(sign: Sign, label: L) -> Self {
        Tree {
            sign,
            label,
            children: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Tree::node_count).sum::<usize>()
    }

    pub fn shape(&self) -> TreeShape {
        TreeShape {
            children: self.children.iter().map(Tree::shape).collect(),
        }
    }

    pub fn node(&self, path: &[usize]) -> Option<&Tree<L>> {
        let mut t = self;
        for &i in path {
            t = t.children.get(i)?;
        }
        Some(t)
    }

    pub fn node_mut(&mut self, path: &[usize]) -> Option<&mut Tree<L>> {
        let mut t = self;
        for &i in path {
            t = t.children.get_mut(i)?;
        }
        Some(t)
    }

    /// All node paths in preorder.
    pub fn paths(&self) -> Vec<NodePath> {
        fn walk<L>(t: &Tree<L>, cur: &mut NodePath, out: &mut Vec<NodePath>) {
            out.push(cur.clone());
            for (i, c) in t.children.iter().enumerate() {
                cur.push(i);
                walk(c, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Nodes in preorder.
    pub fn nodes(&self) -> Vec<&Tree<L>> {
        fn walk<'a, L>(t: &'a Tree<L>, out: &mut Vec<&'a Tree<L>>) {
            out.push(t);
            for c in &t.children {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn map_labels<M>(&self, f: &mut impl FnMut(&L) -> M) -> Tree<M> {
        Tree {
            sign: self.sign,
            label: f(&self.label),
            children: self.children.iter().map(|c| c.map_labels(f)).collect(),
        }
    }

    pub fn strip_labels(&self) -> SignTree {
        self.map_labels(&mut |_| ())
    }

    /// The signs of the children, in order.
    pub fn child_signs(&self) -> Vec<Sign> {
        self.children.iter().map(|c| c.sign).collect()
    }
}

impl LabeledTree {
    /// `q(v)`: the sum of the labels of `v` and all its ancestors.
    pub fn q(&self, path: &[usize]) -> Option<i64> {
        let mut t = self;
        let mut q = t.label;
        for &i in path {
            t = t.children.get(i)?;
            q += t.label;
        }
        Some(q)
    }

    /// Whether every label lies in its sign's domain
    /// (`p >= 0` for `+`, `p <= -1` for `-`).
    pub fn labels_valid(&self) -> bool {
        let ok = match self.sign {
            Sign::Plus => self.label >= 0,
            Sign::Minus => self.label <= -1,
        };
        ok && self.children.iter().all(LabeledTree::labels_valid)
    }
}

/// Compact text form: `+3(-1,+0)` for a labeled tree, `+(-,+)` for signs only.
impl<L: Label> fmt::Display for Tree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign, self.label.text())?;
        if !self.children.is_empty() {
            write!(f, "(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Every way of putting signs on the non-top nodes of `shape`, top sign fixed,
/// in binary counting order over the preorder (`+` before `-`).
pub fn sign_assignments(shape: &TreeShape, top: Sign) -> Vec<SignTree> {
    let k = shape.node_count();
    let mut out = Vec::with_capacity(1 << (k - 1));
    for mask in 0u32..(1u32 << (k - 1)) {
        let mut signs = Vec::with_capacity(k);
        signs.push(top);
        for j in 0..k - 1 {
            signs.push(if mask >> (k - 2 - j) & 1 == 1 {
                Sign::Minus
            } else {
                Sign::Plus
            });
        }
        let mut it = signs.into_iter();
        out.push(shape.to_tree(&mut || (it.next().expect("one sign per node"), ())));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_sums_ancestor_labels() {
        let t = Tree {
            sign: Sign::Plus,
            label: 3,
            children: vec![
                Tree::leaf(Sign::Minus, -1),
                Tree {
                    sign: Sign::Plus,
                    label: 2,
                    children: vec![Tree::leaf(Sign::Minus, -4)],
                },
            ],
        };
        assert_eq!(t.q(&[]), Some(3));
        assert_eq!(t.q(&[0]), Some(2));
        assert_eq!(t.q(&[1, 0]), Some(1));
        assert_eq!(t.q(&[2]), None);
        assert_eq!(t.paths(), vec![vec![], vec![0], vec![1], vec![1, 0]]);
        assert_eq!(t.to_string(), "+3(--1,+2(--4))");
        assert!(t.labels_valid());
    }

    #[test]
    fn sign_assignment_count() {
        for k in 1..=5 {
            for s in enumerate_shapes(k).unwrap() {
                let all = sign_assignments(&s, Sign::Plus);
                assert_eq!(all.len(), 1 << (k - 1));
                assert!(all.iter().all(|t| t.sign == Sign::Plus));
            }
        }
    }
}
