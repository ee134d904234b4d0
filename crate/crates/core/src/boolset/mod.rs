//! Boolean Set Cover over the characteristic vectors of enumerated formulas.
//!
//! The universe of an instance is `P ∪ N`, laid out as the positives
//! `0..n_pos` followed by the negatives `n_pos..n_pos + n_neg`. A base set
//! holds the elements whose trace satisfies its formula. A solution is a
//! positive Boolean combination (∪, ∩) of base sets that evaluates to `P`.

mod beam;
mod collapse;
mod cover;
mod divconq;
mod domination;
mod reconstruct;

use std::fmt;
use std::sync::Arc;

use crate::bits::Bits;
use crate::enumerator::FormulaDag;
use crate::ltl::LtlFormula;

pub use beam::{beam_search, BeamConfig, BeamOutcome, BeamResult};
pub use collapse::{collapse, restrict};
pub use cover::{existence_check, witness_solution, Existence};
pub use divconq::{div_conq, DivConqConfig, DivConqError, DivConqStats};
pub use domination::{fast_non_dominated, reduce_antichain_exact};
pub use reconstruct::{reconstruct, ReconstructError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSet {
    pub members: Bits,
    pub weight: usize,
    /// Formula node in the instance's DAG, or a caller-chosen label.
    pub source: usize,
}

#[derive(Clone, Debug)]
pub struct BscInstance {
    n_pos: usize,
    n_neg: usize,
    sets: Vec<BaseSet>,
    formulas: Option<Arc<FormulaDag>>,
}

impl BscInstance {
    /// Hand-built instance; `source` of each set is its index.
    ///
    /// Panics if a member vector has the wrong length or a weight is zero.
    pub fn new(n_pos: usize, n_neg: usize, sets: Vec<(Bits, usize)>) -> Self {
        let sets = sets
            .into_iter()
            .enumerate()
            .map(|(i, (members, weight))| BaseSet {
                members,
                weight,
                source: i,
            })
            .collect();
        Self::from_sets(n_pos, n_neg, sets, None)
    }

    pub(crate) fn from_sets(
        n_pos: usize,
        n_neg: usize,
        sets: Vec<BaseSet>,
        formulas: Option<Arc<FormulaDag>>,
    ) -> Self {
        for s in &sets {
            assert_eq!(
                s.members.len(),
                n_pos + n_neg,
                "base set over wrong universe"
            );
            assert!(s.weight >= 1, "base set weight must be at least 1");
        }
        Self {
            n_pos,
            n_neg,
            sets,
            formulas,
        }
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    pub fn n_neg(&self) -> usize {
        self.n_neg
    }

    pub fn universe(&self) -> usize {
        self.n_pos + self.n_neg
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[BaseSet] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &BaseSet {
        &self.sets[i]
    }

    pub fn formulas(&self) -> Option<&Arc<FormulaDag>> {
        self.formulas.as_ref()
    }

    /// Formula behind base set `i`, when the instance came from a bank.
    pub fn provenance(&self, i: usize) -> Option<LtlFormula> {
        self.formulas
            .as_ref()
            .map(|dag| dag.formula(self.sets[i].source))
    }

    /// The target set `P` as a vector over the universe.
    pub fn pos_mask(&self) -> Bits {
        Bits::from_fn(self.universe(), |e| e < self.n_pos)
    }

    pub fn leaf(&self, i: usize) -> BoolComb {
        BoolComb::leaf(i, self.sets[i].weight)
    }

    /// `⟦θ⟧`.
    pub fn eval(&self, theta: &BoolComb) -> Bits {
        match theta.node() {
            BoolNode::Empty => Bits::zeros(self.universe()),
            BoolNode::Leaf(i) => self.sets[*i].members.clone(),
            BoolNode::Union(a, b) => self.eval(a).or(&self.eval(b)),
            BoolNode::Inter(a, b) => self.eval(a).and(&self.eval(b)),
        }
    }

    pub fn state(&self, theta: &BoolComb) -> EvalState {
        EvalState::new(self.eval(theta), &self.pos_mask())
    }

    pub fn is_solution(&self, theta: &BoolComb) -> bool {
        self.eval(theta) == self.pos_mask()
    }

    /// Evaluation state and weight of every base set, in order.
    pub fn states(&self) -> Vec<(EvalState, usize)> {
        let pos = self.pos_mask();
        self.sets
            .iter()
            .map(|s| (EvalState::new(s.members.clone(), &pos), s.weight))
            .collect()
    }

    /// Keeps only the base sets at `keep` (ascending indices).
    pub fn retain_indices(&mut self, keep: &[usize]) {
        let mut it = keep.iter().peekable();
        let mut i = 0;
        self.sets.retain(|_| {
            let k = it.peek() == Some(&&i);
            if k {
                it.next();
            }
            i += 1;
            k
        });
    }
}

/// A positive Boolean combination of base sets with its cached weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolComb {
    node: BoolNode,
    weight: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolNode {
    Empty,
    Leaf(usize),
    Union(Box<BoolComb>, Box<BoolComb>),
    Inter(Box<BoolComb>, Box<BoolComb>),
}

impl BoolComb {
    pub fn empty() -> Self {
        Self {
            node: BoolNode::Empty,
            weight: 0,
        }
    }

    pub fn leaf(set: usize, weight: usize) -> Self {
        Self {
            node: BoolNode::Leaf(set),
            weight,
        }
    }

    pub fn union(a: BoolComb, b: BoolComb) -> Self {
        let weight = 1 + a.weight + b.weight;
        Self {
            node: BoolNode::Union(Box::new(a), Box::new(b)),
            weight,
        }
    }

    pub fn inter(a: BoolComb, b: BoolComb) -> Self {
        let weight = 1 + a.weight + b.weight;
        Self {
            node: BoolNode::Inter(Box::new(a), Box::new(b)),
            weight,
        }
    }

    pub fn node(&self) -> &BoolNode {
        &self.node
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.node, BoolNode::Empty)
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match &self.node {
            BoolNode::Empty => {}
            BoolNode::Leaf(i) => out.push(*i),
            BoolNode::Union(a, b) | BoolNode::Inter(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// Renames leaves, keeping their weights.
    pub fn map_leaves(&self, f: &impl Fn(usize) -> usize) -> BoolComb {
        match &self.node {
            BoolNode::Empty => BoolComb::empty(),
            BoolNode::Leaf(i) => BoolComb::leaf(f(*i), self.weight),
            BoolNode::Union(a, b) => BoolComb::union(a.map_leaves(f), b.map_leaves(f)),
            BoolNode::Inter(a, b) => BoolComb::inter(a.map_leaves(f), b.map_leaves(f)),
        }
    }

    /// Replaces every occurrence of the subterm `target` by `with`.
    pub fn substitute(&self, target: &BoolComb, with: &BoolComb) -> BoolComb {
        if self == target {
            return with.clone();
        }
        match &self.node {
            BoolNode::Empty | BoolNode::Leaf(_) => self.clone(),
            BoolNode::Union(a, b) => {
                BoolComb::union(a.substitute(target, with), b.substitute(target, with))
            }
            BoolNode::Inter(a, b) => {
                BoolComb::inter(a.substitute(target, with), b.substitute(target, with))
            }
        }
    }
}

impl fmt::Display for BoolComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(c: &BoolComb, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match c.node {
                BoolNode::Union(..) | BoolNode::Inter(..) => write!(f, "({c})"),
                _ => write!(f, "{c}"),
            }
        }
        match &self.node {
            BoolNode::Empty => f.write_str("∅"),
            BoolNode::Leaf(i) => write!(f, "S{i}"),
            BoolNode::Union(a, b) => {
                side(a, f)?;
                f.write_str(" ∪ ")?;
                side(b, f)
            }
            BoolNode::Inter(a, b) => {
                side(a, f)?;
                f.write_str(" ∩ ")?;
                side(b, f)
            }
        }
    }
}

/// `⟦θ⟧`, the elements `θ` classifies correctly, and their count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalState {
    pub eval: Bits,
    pub sat: Bits,
    pub score: usize,
}

impl EvalState {
    pub fn new(eval: Bits, pos_mask: &Bits) -> Self {
        let sat = eval.xor(pos_mask).not();
        let score = sat.count_ones();
        Self { eval, sat, score }
    }

    pub fn is_solution(&self) -> bool {
        self.sat.is_all_ones()
    }
}

/// Whether `(a, wa)` dominates `(b, wb)`: no heavier and correct on a superset.
pub fn dominates(a: &EvalState, wa: usize, b: &EvalState, wb: usize) -> bool {
    wa <= wb && b.sat.is_subset(&a.sat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Bits {
        Bits::from_fn(s.len(), |i| s.as_bytes()[i] == b'1')
    }

    #[test]
    fn weights_follow_recurrence() {
        let a = BoolComb::leaf(0, 3);
        let b = BoolComb::leaf(1, 2);
        let u = BoolComb::union(a.clone(), BoolComb::inter(b.clone(), a.clone()));
        assert_eq!(u.weight(), 3 + 1 + 2 + 1 + 3);
        assert_eq!(BoolComb::empty().weight(), 0);
        assert_eq!(u.leaves(), vec![0, 1, 0]);
    }

    #[test]
    fn sat_flips_negatives() {
        // P = {0, 1}, N = {2, 3}
        let pos = bits("1100");
        let s = EvalState::new(bits("1010"), &pos);
        assert_eq!(s.sat.to_string(), "1001");
        assert_eq!(s.score, 2);
        assert!(EvalState::new(pos.clone(), &pos).is_solution());
    }

    #[test]
    fn domination_basics() {
        let pos = bits("1100");
        let s = EvalState::new(bits("1010"), &pos);
        assert!(dominates(&s, 2, &s, 2));
        let all = EvalState::new(pos.clone(), &pos);
        assert!(dominates(&all, 1, &s, 1));
        assert!(!dominates(&s, 1, &all, 1));
        assert!(!dominates(&all, 3, &s, 2));
    }

    #[test]
    fn eval_and_substitute() {
        let inst = BscInstance::new(
            2,
            1,
            vec![(bits("100"), 1), (bits("011"), 1), (bits("111"), 1)],
        );
        let t = BoolComb::union(inst.leaf(0), BoolComb::inter(inst.leaf(1), inst.leaf(2)));
        assert_eq!(inst.eval(&t).to_string(), "111");
        let r = t.substitute(&inst.leaf(2), &inst.leaf(0));
        assert_eq!(inst.eval(&r).to_string(), "100");
        assert!(!inst.is_solution(&r));
        assert_eq!(t.to_string(), "S0 ∪ (S1 ∩ S2)");
    }

    #[test]
    fn retain_keeps_order() {
        let mut inst = BscInstance::new(1, 1, (0..5).map(|i| (bits("10"), i + 1)).collect());
        inst.retain_indices(&[1, 3, 4]);
        let w: Vec<_> = inst.sets().iter().map(|s| s.weight).collect();
        assert_eq!(w, vec![2, 4, 5]);
    }
}
