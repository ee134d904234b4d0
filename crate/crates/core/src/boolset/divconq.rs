use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{restrict, BoolComb, BscInstance};
use crate::bits::Bits;

#[derive(Clone, Debug)]
pub struct DivConqConfig {
    pub seed: u64,
    /// Domination pruning applied to each restricted instance.
    pub domination_k: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Default for DivConqConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            domination_k: Some(10),
            deadline: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivConqStats {
    pub max_depth: usize,
    pub solver_calls: usize,
    pub base_cases: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DivConqError {
    /// Positive `pos` cannot be separated from negative `neg` (indices within
    /// their class); `neg` is `None` when `pos` lies in no base set at all.
    #[error("no base set separates positive {pos} from negative {neg:?}")]
    NoSolution { pos: usize, neg: Option<usize> },
    #[error("deadline reached")]
    Timeout,
}

struct Run<'a, S> {
    root: &'a BscInstance,
    solver: S,
    cfg: &'a DivConqConfig,
    rng: ChaCha8Rng,
    stats: DivConqStats,
}

impl<S: FnMut(&BscInstance) -> Option<BoolComb>> Run<'_, S> {
    fn timed_out(&self) -> bool {
        self.cfg.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Solves for the root elements `pos` (positives) and `neg` (negatives,
    /// as universe ids). The result refers to root base sets.
    fn solve(
        &mut self,
        pos: &[usize],
        neg: &[usize],
        depth: usize,
    ) -> Result<BoolComb, DivConqError> {
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.timed_out() {
            return Err(DivConqError::Timeout);
        }
        if pos.is_empty() {
            return Ok(BoolComb::empty());
        }
        if pos.len() <= 1 && neg.len() <= 1 {
            return self.base_case(pos[0], neg.first().copied());
        }

        self.stats.solver_calls += 1;
        let found = if depth == 0 {
            (self.solver)(self.root).filter(|t| self.root.is_solution(t))
        } else {
            let (sub, origin) = restrict(self.root, pos, neg, self.cfg.domination_k);
            (self.solver)(&sub)
                .filter(|t| sub.is_solution(t))
                .map(|t| t.map_leaves(&|i| origin[i]))
        };
        if let Some(t) = found {
            return Ok(t);
        }

        if pos.len() >= neg.len() {
            let (p1, p2) = self.split(pos);
            let t1 = self.solve(&p1, neg, depth + 1)?;
            let covered = self.root.eval(&t1);
            let rest: Vec<usize> = p2.into_iter().filter(|&p| !covered.get(p)).collect();
            if rest.is_empty() {
                return Ok(t1);
            }
            let t2 = self.solve(&rest, neg, depth + 1)?;
            Ok(BoolComb::union(t1, t2))
        } else {
            let (n1, n2) = self.split(neg);
            let t1 = self.solve(pos, &n1, depth + 1)?;
            let accepted = self.root.eval(&t1);
            let rest: Vec<usize> = n2.into_iter().filter(|&n| accepted.get(n)).collect();
            if rest.is_empty() {
                return Ok(t1);
            }
            let t2 = self.solve(pos, &rest, depth + 1)?;
            Ok(BoolComb::inter(t1, t2))
        }
    }

    /// Lightest base set containing `p` and, if given, excluding `n`.
    fn base_case(&mut self, p: usize, n: Option<usize>) -> Result<BoolComb, DivConqError> {
        self.stats.base_cases += 1;
        let sets = self.root.sets();
        let ok = |m: &Bits| m.get(p) && n.is_none_or(|n| !m.get(n));
        (0..sets.len())
            .filter(|&i| ok(&sets[i].members))
            .min_by_key(|&i| (sets[i].weight, i))
            .map(|i| self.root.leaf(i))
            .ok_or(DivConqError::NoSolution {
                pos: p,
                neg: n.map(|n| n - self.root.n_pos()),
            })
    }

    fn split(&mut self, elems: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut v = elems.to_vec();
        v.shuffle(&mut self.rng);
        let second = v.split_off(v.len().div_ceil(2));
        (v, second)
    }
}

/// Calls `solver` and, while it fails, splits the larger of `P` and `N` in two
/// and combines the sub-solutions with ∪ (split of `P`) or ∩ (split of `N`).
///
/// The solver may return any combination; only valid ones are used. Finds a
/// solution whenever one exists.
pub fn div_conq(
    inst: &BscInstance,
    solver: impl FnMut(&BscInstance) -> Option<BoolComb>,
    cfg: &DivConqConfig,
) -> (Result<BoolComb, DivConqError>, DivConqStats) {
    let mut run = Run {
        root: inst,
        solver,
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        stats: DivConqStats::default(),
    };
    let pos: Vec<usize> = (0..inst.n_pos()).collect();
    let neg: Vec<usize> = (inst.n_pos()..inst.universe()).collect();
    let r = run.solve(&pos, &neg, 0);
    (r, run.stats)
}
