use std::fmt;

use serde::{Deserialize, Serialize};

use super::{enumerate_shapes, sign_assignments, Label, NodePath, Tree};
use crate::{Result, Sign};

/// A tree with a `d-` mark on exactly one node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DerivativeTree<L> {
    pub tree: Tree<L>,
    pub deriv: NodePath,
}

/// Signs and derivative node, no integer labels.
pub type HalfLabeledKey = DerivativeTree<()>;
pub type LabeledDerivativeTree = DerivativeTree<i64>;

impl<L: Clone> DerivativeTree<L> {
    pub fn new(tree: Tree<L>, deriv: NodePath) -> Self {
        debug_assert!(tree.node(&deriv).is_some(), "derivative node must exist");
        DerivativeTree { tree, deriv }
    }

    pub fn node_count(&self) -> usize {
        self.tree.node_count()
    }

    pub fn top_sign(&self) -> Sign {
        self.tree.sign
    }

    pub fn key(&self) -> HalfLabeledKey {
        DerivativeTree {
            tree: self.tree.strip_labels(),
            deriv: self.deriv.clone(),
        }
    }

    pub fn is_on_stem(&self, path: &[usize]) -> bool {
        self.deriv.starts_with(path)
    }
}

impl<L: Label> DerivativeTree<L> {
    /// A string identifying the tree up to reordering children at every node
    /// (the `Perm` orbit). Integer labels are included when `with_labels`.
    pub fn canonical(&self, with_labels: bool) -> String {
        fn enc<L: Label>(t: &Tree<L>, path: &mut NodePath, d: &[usize], lab: bool) -> String {
            let mut s = t.sign.to_string();
            if lab {
                s.push_str(&t.label.text());
            }
            if path.as_slice() == d {
                s.push('*');
            }
            let mut kids: Vec<String> = t
                .children
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    path.push(i);
                    let e = enc(c, path, d, lab);
                    path.pop();
                    e
                })
                .collect();
            kids.sort();
            if !kids.is_empty() {
                s.push('(');
                s.push_str(&kids.join(","));
                s.push(')');
            }
            s
        }
        enc(&self.tree, &mut Vec::new(), &self.deriv, with_labels)
    }
}

/// The half-labeled `Perm` class of `t`.
pub fn canonical_key<L: Label>(t: &DerivativeTree<L>) -> String {
    t.canonical(false)
}

/// Like the plain tree form, with `*` after the derivative node.
impl<L: Label> fmt::Display for DerivativeTree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go<L: Label>(
            t: &Tree<L>,
            path: &mut NodePath,
            d: &[usize],
            f: &mut fmt::Formatter<'_>,
        ) -> fmt::Result {
            write!(f, "{}{}", t.sign, t.label.text())?;
            if path.as_slice() == d {
                write!(f, "*")?;
            }
            if !t.children.is_empty() {
                write!(f, "(")?;
                for (i, c) in t.children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    path.push(i);
                    go(c, path, d, f)?;
                    path.pop();
                }
                write!(f, ")")?;
            }
            Ok(())
        }
        go(&self.tree, &mut Vec::new(), &self.deriv, f)
    }
}

/// Path from the top node down to the derivative node, inclusive.
pub fn main_stem<L>(t: &DerivativeTree<L>) -> Vec<NodePath> {
    (0..=t.deriv.len()).map(|i| t.deriv[..i].to_vec()).collect()
}

/// A set of minus-signed, non-top nodes of the main stem at which a
/// derivative tree is broken.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    /// Cut nodes from the top down (each an ancestor of the next).
    pub nodes: Vec<NodePath>,
    /// One bit per eligible stem node, top down; `true` = cut there.
    pub string_rep: Vec<bool>,
}

impl Cut {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Stem nodes where a cut may be placed: sign `-`, not the top node. The
/// derivative node itself is eligible.
pub fn eligible_cut_nodes<L>(t: &DerivativeTree<L>) -> Vec<NodePath> {
    main_stem(t)
        .into_iter()
        .skip(1)
        .filter(|p| t.tree.node(p).map(|n| n.sign) == Some(Sign::Minus))
        .collect()
}

/// All `2^s` cuts, in binary counting order of their string representation
/// (first eligible node most significant), starting from the empty cut.
pub fn cuts_of<L>(t: &DerivativeTree<L>) -> Vec<Cut> {
    let elig = eligible_cut_nodes(t);
    let s = elig.len();
    (0u64..1 << s)
        .map(|mask| {
            let bits: Vec<bool> = (0..s).map(|i| mask >> (s - 1 - i) & 1 == 1).collect();
            let nodes = elig
                .iter()
                .zip(&bits)
                .filter(|(_, &b)| b)
                .map(|(p, _)| p.clone())
                .collect();
            Cut {
                nodes,
                string_rep: bits,
            }
        })
        .collect()
}

/// `|Perm(t)| = prod_v s_v!`.
pub fn perm_class_size<L>(t: &DerivativeTree<L>) -> u128 {
    fn go<L>(t: &Tree<L>) -> u128 {
        let s = t.children.len() as u128;
        let fact: u128 = (1..=s).product();
        fact * t.children.iter().map(go).product::<u128>()
    }
    go(&t.tree)
}

/// Lazily list every half-labeled derivative tree on `k` nodes with top sign
/// `alpha`: by shape, then sign assignment, then derivative node in preorder.
pub fn sign_derivative_keys(k: usize, alpha: Sign) -> Result<impl Iterator<Item = HalfLabeledKey>> {
    let shapes = enumerate_shapes(k)?;
    Ok(shapes.into_iter().flat_map(move |shape| {
        sign_assignments(&shape, alpha).into_iter().flat_map(|tree| {
            tree.paths()
                .into_iter()
                .map(move |d| DerivativeTree {
                    tree: tree.clone(),
                    deriv: d,
                })
                .collect::<Vec<_>>()
        })
    }))
}

pub fn enumerate_sign_derivative(k: usize, alpha: Sign) -> Result<Vec<HalfLabeledKey>> {
    Ok(sign_derivative_keys(k, alpha)?.collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{catalan, TreeShape};

    fn chain(signs: &[Sign]) -> Tree<()> {
        let mut t = Tree::leaf(*signs.last().unwrap(), ());
        for &s in signs.iter().rev().skip(1) {
            t = Tree {
                sign: s,
                label: (),
                children: vec![t],
            };
        }
        t
    }

    use Sign::{Minus as M, Plus as P};

    #[test]
    fn key_counts() {
        assert_eq!(enumerate_sign_derivative(1, P).unwrap().len(), 1);
        assert_eq!(enumerate_sign_derivative(2, P).unwrap().len(), 4);
        assert_eq!(enumerate_sign_derivative(4, P).unwrap().len(), 160);
        for k in 1..=6 {
            let keys = enumerate_sign_derivative(k, M).unwrap();
            assert_eq!(keys.len() as u128, catalan(k - 1) * (1 << (k - 1)) * k as u128);
            assert!(keys.iter().all(|t| t.top_sign() == M));
        }
    }

    #[test]
    fn stems() {
        let t = DerivativeTree::new(chain(&[P, M, P, M]), vec![]);
        assert_eq!(main_stem(&t), vec![Vec::<usize>::new()]);
        let t = DerivativeTree::new(chain(&[P, M, P, M]), vec![0, 0, 0]);
        assert_eq!(main_stem(&t).len(), 4);
        let shape: TreeShape = "((),(()))".parse().unwrap();
        let mut it = std::iter::repeat((P, ()));
        let tree = shape.to_tree(&mut || it.next().unwrap());
        let t = DerivativeTree::new(tree, vec![1, 0]);
        assert_eq!(main_stem(&t), vec![vec![], vec![1], vec![1, 0]]);
    }

    #[test]
    fn cut_counts() {
        let t = DerivativeTree::new(chain(&[P, P, P]), vec![0, 0]);
        assert_eq!(cuts_of(&t).len(), 1);
        assert!(cuts_of(&t)[0].is_empty());
        let t = DerivativeTree::new(chain(&[P, M, M]), vec![0, 0]);
        let cuts = cuts_of(&t);
        assert_eq!(cuts.len(), 4);
        assert_eq!(cuts[1].nodes, vec![vec![0, 0]]);
        assert_eq!(cuts[2].nodes, vec![vec![0]]);
        assert_eq!(cuts[3].nodes, vec![vec![0], vec![0, 0]]);
        assert_eq!(cuts[3].string_rep, vec![true, true]);
        let t = DerivativeTree::new(chain(&[M, M, M]), vec![0, 0]);
        assert_eq!(cuts_of(&t).len(), 4);
        // off-stem minus nodes are not eligible
        let shape: TreeShape = "((),())".parse().unwrap();
        let mut it = [P, M, M].into_iter();
        let tree = shape.to_tree(&mut || (it.next().unwrap(), ()));
        assert_eq!(cuts_of(&DerivativeTree::new(tree, vec![1])).len(), 2);
    }

    #[test]
    fn perm_sizes() {
        let star: TreeShape = "((),(),())".parse().unwrap();
        let mut it = std::iter::repeat((P, ()));
        let t = DerivativeTree::new(star.to_tree(&mut || it.next().unwrap()), vec![]);
        assert_eq!(perm_class_size(&t), 6);
        let s: TreeShape = "((),(()))".parse().unwrap();
        let t = DerivativeTree::new(s.to_tree(&mut || it.next().unwrap()), vec![]);
        assert_eq!(perm_class_size(&t), 2);
        let t = DerivativeTree::new(chain(&[P, M, P, M]), vec![0]);
        assert_eq!(perm_class_size(&t), 1);
    }

    #[test]
    fn canonical_ignores_child_order() {
        let a = Tree {
            sign: P,
            label: 0i64,
            children: vec![Tree::leaf(M, -1), Tree::leaf(P, 2)],
        };
        let b = Tree {
            sign: P,
            label: 0i64,
            children: vec![Tree::leaf(P, 2), Tree::leaf(M, -1)],
        };
        let da = DerivativeTree::new(a, vec![0]);
        let db = DerivativeTree::new(b.clone(), vec![1]);
        assert_eq!(da.canonical(true), db.canonical(true));
        assert_ne!(da, db);
        let dc = DerivativeTree::new(b, vec![0]);
        assert_ne!(canonical_key(&da), canonical_key(&dc));
        assert_eq!(da.to_string(), "+0(--1*,+2)");
    }
}
