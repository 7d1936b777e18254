use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Tree;
use crate::{Error, Result, Sign};

/// Largest node count accepted by the enumerators.
pub const MAX_NODES: usize = 10;

/// An unlabeled ordered tree.
///
/// Written with nested parentheses: `()` is a single node, `(())` a chain of
/// two, `((),(()))` a top node whose children are a leaf and a 2-chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeShape {
    pub children: Vec<TreeShape>,
}

pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

impl TreeShape {
    pub fn leaf() -> Self {
        TreeShape { children: vec![] }
    }

    pub fn chain(k: usize) -> Self {
        let mut t = TreeShape::leaf();
        for _ in 1..k {
            t = TreeShape { children: vec![t] };
        }
        t
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(TreeShape::node_count).sum::<usize>()
    }

    /// Fill the shape in preorder with `(sign, label)` pairs from `next`.
    pub fn to_tree<L>(&self, next: &mut impl FnMut() -> (Sign, L)) -> Tree<L> {
        let (sign, label) = next();
        Tree {
            sign,
            label,
            children: self.children.iter().map(|c| c.to_tree(next)).collect(),
        }
    }
}

/// All ordered trees with `k` nodes.
///
/// Order: the children of the top node form an ordered forest on `k - 1`
/// nodes; forests are listed by the size of their first tree (smallest
/// first), then recursively by that tree, then by the rest of the forest.
pub fn enumerate_shapes(k: usize) -> Result<Vec<TreeShape>> {
    if k == 0 {
        return Err(Error::InvalidParameter("trees have at least one node".into()));
    }
    if k > MAX_NODES {
        return Err(Error::TooLarge {
            what: "node count",
            value: k,
            limit: MAX_NODES,
        });
    }
    let mut memo: Vec<Option<Vec<Vec<TreeShape>>>> = vec![None; k];
    Ok(forests(k - 1, &mut memo)
        .into_iter()
        .map(|children| TreeShape { children })
        .collect())
}

fn forests(m: usize, memo: &mut Vec<Option<Vec<Vec<TreeShape>>>>) -> Vec<Vec<TreeShape>> {
    if let Some(f) = &memo[m] {
        return f.clone();
    }
    let mut out = Vec::new();
    if m == 0 {
        out.push(Vec::new());
    } else {
        for first in 1..=m {
            let heads: Vec<TreeShape> = forests(first - 1, memo)
                .into_iter()
                .map(|children| TreeShape { children })
                .collect();
            let tails = forests(m - first, memo);
            for h in &heads {
                for t in &tails {
                    let mut f = Vec::with_capacity(t.len() + 1);
                    f.push(h.clone());
                    f.extend(t.iter().cloned());
                    out.push(f);
                }
            }
        }
    }
    memo[m] = Some(out.clone());
    out
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for TreeShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let t = parse(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::InvalidParameter(format!("trailing input in tree {s:?}")));
        }
        Ok(t)
    }
}

fn parse(b: &[u8], pos: &mut usize) -> Result<TreeShape> {
    let err = || Error::InvalidParameter("malformed tree shape".into());
    if b.get(*pos) != Some(&b'(') {
        return Err(err());
    }
    *pos += 1;
    let mut children = Vec::new();
    loop {
        match b.get(*pos) {
            Some(b')') => {
                *pos += 1;
                return Ok(TreeShape { children });
            }
            Some(b'(') => {
                children.push(parse(b, pos)?);
                if b.get(*pos) == Some(&b',') {
                    *pos += 1;
                    if b.get(*pos) != Some(&b'(') {
                        return Err(err());
                    }
                }
            }
            _ => return Err(err()),
        }
    }
}
