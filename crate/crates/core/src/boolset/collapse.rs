use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{fast_non_dominated, BaseSet, BscInstance};
use crate::bits::Bits;
use crate::enumerator::FormulaBank;

/// One base set per distinct characteristic vector of the bank.
///
/// The bank lists formulas by non-decreasing size, so the first formula met
/// for a vector is a smallest one and becomes its representative.
pub fn collapse(bank: &FormulaBank) -> BscInstance {
    let layout = bank.layout();
    let n_pos = layout.n_pos();
    let n_neg = layout.n_rows() - n_pos;
    let mut seen: FxHashMap<Bits, ()> = FxHashMap::default();
    let mut sets = Vec::new();
    for i in 0..bank.len() {
        let v = bank.vector(i).0;
        if seen.contains_key(&v) {
            continue;
        }
        seen.insert(v.clone(), ());
        sets.push(BaseSet {
            members: v,
            weight: bank.size_of(i),
            source: i,
        });
    }
    BscInstance::from_sets(n_pos, n_neg, sets, Some(Arc::new(bank.dag().clone())))
}

/// The instance `𝓕↾(P′ ∪ N′)` over the universe `pos ++ neg`, where both lists
/// hold element ids of `root`.
///
/// Sets that become equal keep the lightest (then first) one. With
/// `domination_k`, dominated sets are pruned as well. Also returns, for each
/// surviving set, its index in `root`.
pub fn restrict(
    root: &BscInstance,
    pos: &[usize],
    neg: &[usize],
    domination_k: Option<usize>,
) -> (BscInstance, Vec<usize>) {
    let elems: Vec<usize> = pos.iter().chain(neg).copied().collect();
    let mut by_members: FxHashMap<Bits, usize> = FxHashMap::default();
    let mut sets: Vec<BaseSet> = Vec::new();
    let mut origin: Vec<usize> = Vec::new();
    for (r, s) in root.sets().iter().enumerate() {
        let members = Bits::from_fn(elems.len(), |i| s.members.get(elems[i]));
        match by_members.get(&members) {
            Some(&k) => {
                if s.weight < sets[k].weight {
                    sets[k].weight = s.weight;
                    sets[k].source = s.source;
                    origin[k] = r;
                }
            }
            None => {
                by_members.insert(members.clone(), sets.len());
                sets.push(BaseSet {
                    members,
                    weight: s.weight,
                    source: s.source,
                });
                origin.push(r);
            }
        }
    }
    let mut inst = BscInstance::from_sets(pos.len(), neg.len(), sets, root.formulas().cloned());
    if let Some(k) = domination_k {
        let keep = fast_non_dominated(&inst.states(), k);
        inst.retain_indices(&keep);
        origin = keep.iter().map(|&i| origin[i]).collect();
    }
    (inst, origin)
}
