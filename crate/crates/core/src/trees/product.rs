use serde::{Deserialize, Serialize};

use super::derivative::eligible_cut_nodes;
use super::{Cut, DerivativeTree, HalfLabeledKey, NodePath};
use crate::{Error, Result, Sign};

/// An ordered tuple of derivative trees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductTree<L> {
    pub factors: Vec<DerivativeTree<L>>,
}

impl<L: Clone> ProductTree<L> {
    /// `s(p)`: number of factors minus one.
    pub fn s(&self) -> usize {
        self.factors.len() - 1
    }

    /// `n(p)`: total node count.
    pub fn n(&self) -> usize {
        self.factors.iter().map(DerivativeTree::node_count).sum()
    }

    /// Top sign `+` on the first factor and `-` on every later one.
    pub fn in_p_plus(&self) -> bool {
        self.factors.iter().enumerate().all(|(i, f)| {
            f.top_sign()
                == if i == 0 {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
        })
    }
}

pub fn equivalence_key<L: Clone>(p: &ProductTree<L>) -> Vec<HalfLabeledKey> {
    p.factors.iter().map(DerivativeTree::key).collect()
}

fn check_cut<L>(t: &DerivativeTree<L>, c: &Cut) -> Result<()> {
    let elig = eligible_cut_nodes(t);
    for (i, w) in c.nodes.iter().enumerate() {
        if !elig.contains(w) {
            return Err(Error::InvalidCut(format!(
                "node {w:?} is not a minus-signed, non-top stem node"
            )));
        }
        if i > 0 && !(w.len() > c.nodes[i - 1].len() && w.starts_with(&c.nodes[i - 1])) {
            return Err(Error::InvalidCut("cut nodes must descend the stem".into()));
        }
    }
    let bits: Vec<bool> = elig.iter().map(|p| c.nodes.contains(p)).collect();
    if bits != c.string_rep {
        return Err(Error::InvalidCut("string representation does not match nodes".into()));
    }
    Ok(())
}

/// Break `t` at the nodes of `c`: each cut node is detached with its
/// subtree, and the node that lost it receives the `d-` mark. Labels are
/// kept. The empty cut gives `t` itself as a one-factor product.
pub fn breaking<L: Clone>(t: &DerivativeTree<L>, c: &Cut) -> Result<ProductTree<L>> {
    check_cut(t, c)?;
    let mut factors = Vec::with_capacity(c.len() + 1);
    let mut root: NodePath = Vec::new();
    let mut cur = t.tree.clone();
    for w in &c.nodes {
        let rel = &w[root.len()..];
        let (last, parent) = rel.split_last().expect("cut nodes are below the top");
        let detached = cur
            .node_mut(parent)
            .expect("cut node exists")
            .children
            .remove(*last);
        factors.push(DerivativeTree {
            tree: std::mem::replace(&mut cur, detached),
            deriv: parent.to_vec(),
        });
        root = w.clone();
    }
    factors.push(DerivativeTree {
        tree: cur,
        deriv: t.deriv[root.len()..].to_vec(),
    });
    Ok(ProductTree { factors })
}

/// Inverse of [`breaking`]: attach every factor as the last child of the
/// previous factor's derivative node. Returns the tree and the cut that
/// breaks it back into `p`.
pub fn reassemble<L: Clone>(p: &ProductTree<L>) -> Result<(DerivativeTree<L>, Cut)> {
    let (first, rest) = p.factors.split_first().ok_or_else(|| {
        Error::InvalidParameter("a product tree has at least one factor".into())
    })?;
    let mut tree = first.tree.clone();
    let mut deriv = first.deriv.clone();
    let mut nodes = Vec::with_capacity(rest.len());
    for f in rest {
        let host = tree.node_mut(&deriv).ok_or_else(|| {
            Error::InvalidParameter("derivative node missing from factor".into())
        })?;
        host.children.push(f.tree.clone());
        deriv.push(host.children.len() - 1);
        nodes.push(deriv.clone());
        deriv.extend_from_slice(&f.deriv);
    }
    let t = DerivativeTree { tree, deriv };
    let elig = eligible_cut_nodes(&t);
    let string_rep = elig.iter().map(|e| nodes.contains(e)).collect();
    let cut = Cut { nodes, string_rep };
    check_cut(&t, &cut)?;
    Ok((t, cut))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{cuts_of, Tree};
    use Sign::{Minus as M, Plus as P};

    fn chain(signs: &[(Sign, i64)]) -> Tree<i64> {
        let (s, l) = *signs.last().unwrap();
        let mut t = Tree::leaf(s, l);
        for &(s, l) in signs.iter().rev().skip(1) {
            t = Tree {
                sign: s,
                label: l,
                children: vec![t],
            };
        }
        t
    }

    #[test]
    fn figure_three_breakings() {
        // + - - chain with d- on the leaf
        let t = DerivativeTree::new(chain(&[(P, 3), (M, -1), (M, -2)]), vec![0, 0]);
        let cuts = cuts_of(&t);
        let empty = breaking(&t, &cuts[0]).unwrap();
        assert_eq!(empty.factors, vec![t.clone()]);

        // cut at the second stem node
        let at_v2 = cuts.iter().find(|c| c.nodes == vec![vec![0]]).unwrap();
        let p = breaking(&t, at_v2).unwrap();
        assert_eq!(p.s(), 1);
        assert_eq!(p.factors[0].to_string(), "+3*");
        assert_eq!(p.factors[1].to_string(), "--1(--2*)");
        assert!(p.in_p_plus());

        // cut at both minus nodes
        let p = breaking(&t, &cuts[3]).unwrap();
        let text: Vec<String> = p.factors.iter().map(|f| f.to_string()).collect();
        assert_eq!(text, vec!["+3*", "--1*", "--2*"]);
        assert_eq!(p.n(), 3);
        assert_ne!(
            equivalence_key(&breaking(&t, at_v2).unwrap()),
            equivalence_key(&p)
        );
    }

    #[test]
    fn break_then_reassemble_is_identity() {
        let t = DerivativeTree::new(
            Tree {
                sign: P,
                label: 1,
                children: vec![
                    Tree::leaf(P, 0),
                    chain(&[(M, -1), (P, 2), (M, -3)]),
                ],
            },
            vec![1, 0, 0],
        );
        for c in cuts_of(&t) {
            let p = breaking(&t, &c).unwrap();
            assert_eq!(p.s(), c.len());
            let (back, cut) = reassemble(&p).unwrap();
            assert_eq!(back.canonical(true), t.canonical(true));
            assert_eq!(breaking(&back, &cut).unwrap(), p);
        }
    }

    #[test]
    fn invalid_cuts_are_rejected() {
        let t = DerivativeTree::new(chain(&[(P, 3), (M, -1), (P, 0)]), vec![0, 0]);
        let bad = Cut {
            nodes: vec![vec![0, 0]],
            string_rep: vec![true],
        };
        assert!(matches!(breaking(&t, &bad), Err(Error::InvalidCut(_))));
        let top = Cut {
            nodes: vec![vec![]],
            string_rep: vec![true],
        };
        assert!(matches!(breaking(&t, &top), Err(Error::InvalidCut(_))));
    }
}
