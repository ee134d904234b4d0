use std::collections::BTreeMap;

use super::{dominates, EvalState};

/// `j` removes `i` when it dominates `i` strictly, or both dominate each
/// other and `j` comes first.
#[inline]
fn removes(items: &[(EvalState, usize)], j: usize, i: usize) -> bool {
    let (sj, wj) = (&items[j].0, items[j].1);
    let (si, wi) = (&items[i].0, items[i].1);
    j != i && dominates(sj, wj, si, wi) && (j < i || !dominates(si, wi, sj, wj))
}

/// Indices of the elements not removed by any other element. Quadratic.
pub fn reduce_antichain_exact(items: &[(EvalState, usize)]) -> Vec<usize> {
    (0..items.len())
        .filter(|&i| !(0..items.len()).any(|j| removes(items, j, i)))
        .collect()
}

/// Like [`reduce_antichain_exact`], but dominators are only looked for among
/// the `k` best-scoring elements of each weight up to the candidate's.
pub fn fast_non_dominated(items: &[(EvalState, usize)], k: usize) -> Vec<usize> {
    assert!(k >= 1, "k must be at least 1");
    let mut by_weight: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, (_, w)) in items.iter().enumerate() {
        by_weight.entry(*w).or_default().push(i);
    }
    // Pool members of weight <= w, by decreasing score, for each weight.
    let mut pool: Vec<usize> = Vec::new();
    let mut pools: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&w, idx) in &by_weight {
        let mut top = idx.clone();
        top.sort_by_key(|&i| (std::cmp::Reverse(items[i].0.score), i));
        top.truncate(k);
        pool.extend(top);
        pool.sort_by_key(|&i| (std::cmp::Reverse(items[i].0.score), i));
        pools.insert(w, pool.clone());
    }
    (0..items.len())
        .filter(|&i| {
            let cands = &pools[&items[i].1];
            let score = items[i].0.score;
            !cands
                .iter()
                .take_while(|&&j| items[j].0.score >= score)
                .any(|&j| removes(items, j, i))
        })
        .collect()
}
