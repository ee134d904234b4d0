#![allow(dead_code)]

use ltlf_learn::bits::Bits;
use ltlf_learn::boolset::{BoolComb, BoolNode, BscInstance};
use ltlf_learn::ltl::{satisfies, BinaryOp, LtlFormula, UnaryOp};
use ltlf_learn::trace::{Alphabet, Sample, Trace};
use rand::Rng;

pub const UNARY: [UnaryOp; 5] = [
    UnaryOp::Not,
    UnaryOp::StrongNext,
    UnaryOp::WeakNext,
    UnaryOp::Finally,
    UnaryOp::Globally,
];
pub const BINARY: [BinaryOp; 4] = [
    BinaryOp::And,
    BinaryOp::Or,
    BinaryOp::Until,
    BinaryOp::Release,
];
pub const DEFAULT_BINARY: [BinaryOp; 3] = [BinaryOp::And, BinaryOp::Or, BinaryOp::Until];

pub fn random_trace(rng: &mut impl Rng, n_props: usize, len: usize) -> Trace {
    let mask = (1u64 << n_props) - 1;
    Trace::new((0..len).map(|_| rng.gen::<u64>() & mask).collect()).unwrap()
}

/// Random formula of exactly `size` nodes over every operator and the constants.
pub fn random_formula(rng: &mut impl Rng, n_props: usize, size: usize) -> LtlFormula {
    assert!(size >= 1);
    if size == 1 {
        return match rng.gen_range(0..10) {
            0 => LtlFormula::top(),
            1 => LtlFormula::bottom(),
            _ => LtlFormula::atom(rng.gen_range(0..n_props)),
        };
    }
    if size == 2 || rng.gen_bool(0.4) {
        let op = UNARY[rng.gen_range(0..UNARY.len())];
        return LtlFormula::unary(op, random_formula(rng, n_props, size - 1));
    }
    let op = BINARY[rng.gen_range(0..BINARY.len())];
    let left = rng.gen_range(1..size - 1);
    LtlFormula::binary(
        op,
        random_formula(rng, n_props, left),
        random_formula(rng, n_props, size - 1 - left),
    )
}

/// Every formula over `n_props` atoms, the given operators and sizes `1..=max`,
/// grouped by size. No equivalence pruning, both argument orders kept.
pub fn all_formulas(
    n_props: usize,
    unary: &[UnaryOp],
    binary: &[BinaryOp],
    max: usize,
) -> Vec<Vec<LtlFormula>> {
    let mut by_size: Vec<Vec<LtlFormula>> = vec![Vec::new(); max + 1];
    for s in 1..=max {
        let mut out = Vec::new();
        if s == 1 {
            out.extend((0..n_props).map(LtlFormula::atom));
        } else {
            for &op in unary {
                for f in &by_size[s - 1] {
                    out.push(LtlFormula::unary(op, f.clone()));
                }
            }
            for &op in binary {
                for l in 1..s - 1 {
                    for a in &by_size[l] {
                        for b in &by_size[s - 1 - l] {
                            out.push(LtlFormula::binary(op, a.clone(), b.clone()));
                        }
                    }
                }
            }
        }
        by_size[s] = out;
    }
    by_size
}

pub fn separates(f: &LtlFormula, s: &Sample) -> bool {
    s.positives().iter().all(|w| satisfies(f, w)) && s.negatives().iter().all(|w| !satisfies(f, w))
}

/// Size of the smallest separator in `bank`, found by trying every formula.
pub fn brute_min_size(bank: &[Vec<LtlFormula>], s: &Sample) -> Option<usize> {
    (1..bank.len()).find(|&k| bank[k].iter().any(|f| separates(f, s)))
}

pub fn random_sample(
    rng: &mut impl Rng,
    n_props: usize,
    n_pos: usize,
    n_neg: usize,
    max_len: usize,
) -> Sample {
    loop {
        let mut draw = |k: usize| -> Vec<Trace> {
            (0..k)
                .map(|_| {
                    let len = rng.gen_range(1..=max_len);
                    random_trace(rng, n_props, len)
                })
                .collect()
        };
        let (pos, neg) = (draw(n_pos), draw(n_neg));
        if let Ok(s) = Sample::new(Alphabet::with_default_names(n_props).unwrap(), pos, neg) {
            return s;
        }
    }
}

pub fn random_bits(rng: &mut impl Rng, len: usize, density: f64) -> Bits {
    Bits::from_fn(len, |_| rng.gen_bool(density))
}

pub fn random_instance(
    rng: &mut impl Rng,
    n_pos: usize,
    n_neg: usize,
    n_sets: usize,
    max_weight: usize,
) -> BscInstance {
    let sets = (0..n_sets)
        .map(|_| {
            let d = rng.gen_range(0.2..0.8);
            (
                random_bits(rng, n_pos + n_neg, d),
                rng.gen_range(1..=max_weight),
            )
        })
        .collect();
    BscInstance::new(n_pos, n_neg, sets)
}

/// Random combination over the instance's sets with about `leaves` leaves.
pub fn random_comb(rng: &mut impl Rng, inst: &BscInstance, leaves: usize) -> BoolComb {
    if leaves <= 1 {
        return inst.leaf(rng.gen_range(0..inst.len()));
    }
    let l = rng.gen_range(1..leaves);
    let a = random_comb(rng, inst, l);
    let b = random_comb(rng, inst, leaves - l);
    if rng.gen_bool(0.5) {
        BoolComb::union(a, b)
    } else {
        BoolComb::inter(a, b)
    }
}

/// Every combination of unit-weight-or-heavier leaves up to `max` weight,
/// indexed by weight.
pub fn all_combs(inst: &BscInstance, max: usize) -> Vec<Vec<BoolComb>> {
    let mut by_w: Vec<Vec<BoolComb>> = vec![Vec::new(); max + 1];
    for i in 0..inst.len() {
        let w = inst.set(i).weight;
        if w <= max {
            by_w[w].push(inst.leaf(i));
        }
    }
    for w in 1..=max {
        for l in 1..w {
            let r = w - 1 - l;
            if r == 0 {
                continue;
            }
            let mut add = Vec::new();
            for a in &by_w[l] {
                for b in &by_w[r] {
                    add.push(BoolComb::union(a.clone(), b.clone()));
                    add.push(BoolComb::inter(a.clone(), b.clone()));
                }
            }
            by_w[w].extend(add);
        }
    }
    by_w
}

/// Order-independent rendering: children of ∪ and ∩ sorted.
pub fn canonical(c: &BoolComb) -> String {
    match c.node() {
        BoolNode::Empty => "0".into(),
        BoolNode::Leaf(i) => format!("S{i}"),
        BoolNode::Union(a, b) | BoolNode::Inter(a, b) => {
            let mut kids = [canonical(a), canonical(b)];
            kids.sort();
            let op = if matches!(c.node(), BoolNode::Union(..)) {
                "|"
            } else {
                "&"
            };
            format!("({} {op} {})", kids[0], kids[1])
        }
    }
}
