use serde::{Deserialize, Serialize};

use super::{DerivativeTree, HalfLabeledKey, LabeledDerivativeTree, LabeledTree, NodePath, SignTree};
use crate::{Error, Sign};

/// Which minus-signed nodes get the reduced range `[-q(parent), -1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RestrictMode {
    /// Every minus node.
    AllMinus,
    /// Only minus nodes on the main stem; the others keep `[-pmax, -1]`.
    StemMinusOnly,
}

impl RestrictMode {
    pub const BOTH: [RestrictMode; 2] = [RestrictMode::AllMinus, RestrictMode::StemMinusOnly];

    pub fn as_str(self) -> &'static str {
        match self {
            RestrictMode::AllMinus => "all-minus",
            RestrictMode::StemMinusOnly => "stem-minus-only",
        }
    }
}

impl std::str::FromStr for RestrictMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "all-minus" => Ok(RestrictMode::AllMinus),
            "stem-minus-only" => Ok(RestrictMode::StemMinusOnly),
            _ => Err(Error::InvalidParameter(format!(
                "restrict mode must be all-minus or stem-minus-only, got {s:?}"
            ))),
        }
    }
}

impl std::fmt::Display for RestrictMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

struct Slot {
    sign: Sign,
    parent: Option<usize>,
    restricted: bool,
}

/// Depth-first (preorder, lexicographic) enumeration of integer labelings
/// of a sign tree. Plus nodes range over `[0, pmax]`; free minus nodes over
/// `[-pmax, -1]`; restricted minus nodes over `[-q(parent), -1]`, which is
/// empty when `q(parent) <= 0`.
pub struct Labelings {
    tree: SignTree,
    deriv: Option<NodePath>,
    slots: Vec<Slot>,
    labels: Vec<i64>,
    q: Vec<i64>,
    pmax: i64,
    state: State,
}

#[derive(PartialEq)]
enum State {
    Fresh,
    Running,
    Done,
}

impl Labelings {
    fn new(tree: SignTree, deriv: Option<NodePath>, pmax: u32, mode: Option<RestrictMode>) -> Self {
        let mut slots = Vec::new();
        fn walk(
            t: &SignTree,
            parent: Option<usize>,
            path: &mut NodePath,
            deriv: Option<&NodePath>,
            mode: Option<RestrictMode>,
            out: &mut Vec<Slot>,
        ) {
            let on_stem = deriv.is_some_and(|d| d.starts_with(path));
            let restricted = t.sign == Sign::Minus
                && match mode {
                    None => false,
                    Some(RestrictMode::AllMinus) => true,
                    Some(RestrictMode::StemMinusOnly) => on_stem,
                };
            let me = out.len();
            out.push(Slot {
                sign: t.sign,
                parent,
                restricted,
            });
            for (i, c) in t.children.iter().enumerate() {
                path.push(i);
                walk(c, Some(me), path, deriv, mode, out);
                path.pop();
            }
        }
        walk(&tree, None, &mut Vec::new(), deriv.as_ref(), mode, &mut slots);
        let n = slots.len();
        Labelings {
            tree,
            deriv,
            slots,
            labels: vec![0; n],
            q: vec![0; n],
            pmax: pmax as i64,
            state: State::Fresh,
        }
    }

    fn range(&self, j: usize) -> (i64, i64) {
        let s = &self.slots[j];
        match (s.sign, s.restricted) {
            (Sign::Plus, _) => (0, self.pmax),
            (Sign::Minus, false) => (-self.pmax, -1),
            (Sign::Minus, true) => {
                let qp = s.parent.map_or(0, |p| self.q[p]);
                (-qp, -1)
            }
        }
    }

    fn set(&mut self, j: usize, p: i64) {
        self.labels[j] = p;
        self.q[j] = p + self.slots[j].parent.map_or(0, |i| self.q[i]);
    }

    /// Assign nodes `j..` their smallest labels, backtracking over empty ranges.
    fn settle(&mut self, mut j: usize) -> bool {
        let n = self.slots.len();
        while j < n {
            let (lo, hi) = self.range(j);
            if lo <= hi {
                self.set(j, lo);
                j += 1;
            } else if !self.bump_before(&mut j) {
                return false;
            }
        }
        true
    }

    /// Increment the last node before `*j` that still has room; `*j` becomes
    /// the node after it.
    fn bump_before(&mut self, j: &mut usize) -> bool {
        while *j > 0 {
            *j -= 1;
            let (_, hi) = self.range(*j);
            if self.labels[*j] < hi {
                let p = self.labels[*j] + 1;
                self.set(*j, p);
                *j += 1;
                return true;
            }
        }
        false
    }

    fn current(&self) -> LabeledTree {
        let mut it = self.labels.iter();
        self.tree.map_labels(&mut |_| *it.next().expect("one label per node"))
    }
}

impl Iterator for Labelings {
    type Item = LabeledDerivativeTree;

    fn next(&mut self) -> Option<Self::Item> {
        let ok = match self.state {
            State::Done => return None,
            State::Fresh => {
                self.state = State::Running;
                self.settle(0)
            }
            State::Running => {
                let mut j = self.slots.len();
                self.bump_before(&mut j) && self.settle(j)
            }
        };
        if !ok {
            self.state = State::Done;
            return None;
        }
        Some(DerivativeTree {
            tree: self.current(),
            deriv: self.deriv.clone().unwrap_or_default(),
        })
    }
}

/// Labelings of a half-labeled key with the reduced minus ranges. Every
/// emitted tree has `q(v) >= 0` at each restricted node.
pub fn enumerate_reduced_labelings(key: &HalfLabeledKey, pmax: u32, mode: RestrictMode) -> Labelings {
    Labelings::new(key.tree.clone(), Some(key.deriv.clone()), pmax, Some(mode))
}

/// Labelings with the symmetric cutoff on both signs. The yielded trees carry
/// an empty derivative path that callers should ignore.
pub fn enumerate_free_labelings(tree: &SignTree, pmax: u32) -> impl Iterator<Item = LabeledTree> {
    Labelings::new(tree.clone(), None, pmax, None).map(|d| d.tree)
}
