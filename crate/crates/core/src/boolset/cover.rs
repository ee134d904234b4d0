use super::{BoolComb, BscInstance};
use crate::bits::Bits;

/// Outcome of the existence test for a solution over the base sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Existence {
    AllCovered,
    /// Every base set containing positive `pos` also contains negative `neg`.
    /// Both are indices within their class.
    Witness {
        pos: usize,
        neg: usize,
    },
    /// No base set contains positive `pos` and there are no negatives.
    Uncovered {
        pos: usize,
    },
}

impl Existence {
    pub fn is_covered(&self) -> bool {
        matches!(self, Existence::AllCovered)
    }
}

/// `⋂ {F ∈ 𝓕 | e ∈ F}`, or `None` if no set contains `e`.
fn meet_of(inst: &BscInstance, e: usize) -> Option<Bits> {
    let mut acc: Option<Bits> = None;
    for s in inst.sets().iter().filter(|s| s.members.get(e)) {
        acc = Some(match acc {
            None => s.members.clone(),
            Some(a) => a.and(&s.members),
        });
    }
    acc
}

/// A solution exists iff each positive `p` has, for every negative `n`, a
/// base set containing `p` but not `n`, and is contained in some base set.
pub fn existence_check(inst: &BscInstance) -> Existence {
    let n_pos = inst.n_pos();
    for p in 0..n_pos {
        match meet_of(inst, p) {
            None if inst.n_neg() == 0 => return Existence::Uncovered { pos: p },
            None => return Existence::Witness { pos: p, neg: 0 },
            Some(m) => {
                if let Some(n) = m.iter_ones().find(|&e| e >= n_pos) {
                    return Existence::Witness {
                        pos: p,
                        neg: n - n_pos,
                    };
                }
            }
        }
    }
    Existence::AllCovered
}

/// `⋃_p ⋂_{F ∋ p} F`, skipping positives already covered by earlier terms.
///
/// Returns `None` when the instance has no solution.
pub fn witness_solution(inst: &BscInstance) -> Option<BoolComb> {
    if !existence_check(inst).is_covered() {
        return None;
    }
    let mut covered = Bits::zeros(inst.universe());
    let mut theta: Option<BoolComb> = None;
    for p in 0..inst.n_pos() {
        if covered.get(p) {
            continue;
        }
        let mut term: Option<BoolComb> = None;
        for (i, s) in inst.sets().iter().enumerate() {
            if s.members.get(p) {
                let leaf = inst.leaf(i);
                term = Some(match term {
                    None => leaf,
                    Some(t) => BoolComb::inter(t, leaf),
                });
            }
        }
        let term = term.expect("covered positive");
        covered = covered.or(&inst.eval(&term));
        theta = Some(match theta {
            None => term,
            Some(t) => BoolComb::union(t, term),
        });
    }
    Some(theta.unwrap_or_else(BoolComb::empty))
}
