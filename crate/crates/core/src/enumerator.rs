//! Bottom-up enumeration of LTLf formulas by size, keeping one formula per
//! characteristic table.
//!
//! Formulas are stored as a DAG: each retained formula is an operator applied
//! to indices of earlier retained formulas. Tables live in one flat buffer,
//! `stride` words per formula, and are indexed by a hash table whose hits are
//! confirmed by a full comparison.

use std::hash::{BuildHasher, Hasher};
use std::ops::Range;
use std::sync::Arc;
use std::time::Instant;

use hashbrown::HashTable;
use rustc_hash::FxBuildHasher;

use crate::bitwise::{CharTable, CharVector, TableLayout};
use crate::ltl::{BinaryOp, LtlFormula, OperatorSet, UnaryOp};
use crate::trace::Sample;

/// How a retained formula is built from earlier ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DagOp {
    Atom(u32),
    True,
    False,
    Unary(UnaryOp, u32),
    Binary(BinaryOp, u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct DagNode {
    op: DagOp,
    size: u32,
}

/// Formula structure of a bank without its tables.
#[derive(Clone, Debug, Default)]
pub struct FormulaDag {
    nodes: Vec<DagNode>,
}

impl FormulaDag {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn size_of(&self, i: usize) -> usize {
        self.nodes[i].size as usize
    }

    pub fn op(&self, i: usize) -> DagOp {
        self.nodes[i].op
    }

    /// Rebuilds the syntax tree of node `i`.
    pub fn formula(&self, i: usize) -> LtlFormula {
        match self.nodes[i].op {
            DagOp::Atom(p) => LtlFormula::atom(p as usize),
            DagOp::True => LtlFormula::top(),
            DagOp::False => LtlFormula::bottom(),
            DagOp::Unary(op, a) => LtlFormula::unary(op, self.formula(a as usize)),
            DagOp::Binary(op, a, b) => {
                LtlFormula::binary(op, self.formula(a as usize), self.formula(b as usize))
            }
        }
    }

    fn formula_of(&self, op: DagOp) -> LtlFormula {
        match op {
            DagOp::Atom(p) => LtlFormula::atom(p as usize),
            DagOp::True => LtlFormula::top(),
            DagOp::False => LtlFormula::bottom(),
            DagOp::Unary(op, a) => LtlFormula::unary(op, self.formula(a as usize)),
            DagOp::Binary(op, a, b) => {
                LtlFormula::binary(op, self.formula(a as usize), self.formula(b as usize))
            }
        }
    }
}

/// Retained formulas up to some size, one per observational-equivalence class.
pub struct FormulaBank {
    layout: Arc<TableLayout>,
    dag: FormulaDag,
    tables: Vec<u64>,
    by_size: Vec<Range<usize>>,
    index: HashTable<u32>,
    hasher: FxBuildHasher,
}

/// Digest of a characteristic table. Equal tables give equal digests;
/// the converse does not hold, so a digest match must be confirmed.
pub fn fingerprint(t: &CharTable) -> u64 {
    hash_words(&FxBuildHasher, t.words())
}

fn hash_words(h: &FxBuildHasher, words: &[u64]) -> u64 {
    let mut s = h.build_hasher();
    for &w in words {
        s.write_u64(w);
    }
    s.finish()
}

impl FormulaBank {
    fn new(layout: Arc<TableLayout>) -> Self {
        Self {
            layout,
            dag: FormulaDag::default(),
            tables: Vec::new(),
            // Size 0 holds nothing.
            by_size: std::iter::once(0..0).collect(),
            index: HashTable::new(),
            hasher: FxBuildHasher,
        }
    }

    pub fn len(&self) -> usize {
        self.dag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dag.is_empty()
    }

    pub fn layout(&self) -> &TableLayout {
        &self.layout
    }

    pub fn dag(&self) -> &FormulaDag {
        &self.dag
    }

    /// Largest size whose enumeration finished.
    pub fn max_size(&self) -> usize {
        self.by_size.len() - 1
    }

    /// Node indices of the retained formulas of `size`, in enumeration order.
    pub fn by_size(&self, size: usize) -> Range<usize> {
        self.by_size.get(size).cloned().unwrap_or(0..0)
    }

    pub fn formula(&self, i: usize) -> LtlFormula {
        self.dag.formula(i)
    }

    pub fn size_of(&self, i: usize) -> usize {
        self.dag.size_of(i)
    }

    pub fn table_words(&self, i: usize) -> &[u64] {
        let s = self.layout.stride();
        &self.tables[i * s..(i + 1) * s]
    }

    pub fn table(&self, i: usize) -> CharTable {
        CharTable::from_raw(Arc::clone(&self.layout), self.table_words(i).to_vec())
    }

    pub fn vector(&self, i: usize) -> CharVector {
        CharVector(self.layout.first_bits(self.table_words(i)))
    }

    /// Index of the retained formula whose table equals `words`, if any.
    pub fn find(&self, words: &[u64]) -> Option<usize> {
        let h = hash_words(&self.hasher, words);
        let stride = self.layout.stride();
        let tables = &self.tables;
        self.index
            .find(h, |&k| {
                &tables[k as usize * stride..(k as usize + 1) * stride] == words
            })
            .map(|&k| k as usize)
    }

    /// Inserts a candidate unless an equal table is already present.
    fn insert(&mut self, op: DagOp, size: u32, words: &[u64]) -> bool {
        let h = hash_words(&self.hasher, words);
        let stride = self.layout.stride();
        let Self {
            index,
            tables,
            hasher,
            dag,
            ..
        } = self;
        let tables_ro: &Vec<u64> = tables;
        if index
            .find(h, |&k| {
                &tables_ro[k as usize * stride..(k as usize + 1) * stride] == words
            })
            .is_some()
        {
            return false;
        }
        let id = u32::try_from(dag.nodes.len()).expect("formula bank exceeds u32 indices");
        index.insert_unique(h, id, |&k| {
            hash_words(
                hasher,
                &tables_ro[k as usize * stride..(k as usize + 1) * stride],
            )
        });
        tables.extend_from_slice(words);
        dag.nodes.push(DagNode { op, size });
        true
    }
}

#[derive(Clone, Debug)]
pub struct EnumConfig {
    /// Largest formula size to enumerate.
    pub max_size: usize,
    /// Also enumerate `true` and `false` at size 1.
    pub with_constants: bool,
    pub deadline: Option<Instant>,
}

impl EnumConfig {
    pub fn bounded(max_size: usize) -> Self {
        Self {
            max_size,
            with_constants: false,
            deadline: None,
        }
    }
}

pub struct EnumOutcome {
    /// First separating formula found; size-minimal within the operator set.
    pub solution: Option<LtlFormula>,
    pub bank: FormulaBank,
    pub timed_out: bool,
    /// Number of candidate formulas evaluated.
    pub candidates: u64,
}

struct Search<'a> {
    sample: &'a Sample,
    bank: FormulaBank,
    scratch: Vec<u64>,
    deadline: Option<Instant>,
    candidates: u64,
}

enum Step {
    Continue,
    Solved(LtlFormula),
    TimedOut,
}

impl Search<'_> {
    /// Checks the candidate in `scratch`: solution first, then equivalence.
    fn offer(&mut self, op: DagOp, size: u32) -> Step {
        self.candidates += 1;
        if self.bank.layout.separates(&self.scratch) {
            return Step::Solved(self.bank.dag.formula_of(op));
        }
        let scratch = std::mem::take(&mut self.scratch);
        self.bank.insert(op, size, &scratch);
        self.scratch = scratch;
        if self.candidates.is_multiple_of(4096)
            && self.deadline.is_some_and(|d| Instant::now() >= d)
        {
            return Step::TimedOut;
        }
        Step::Continue
    }

    fn size_one(&mut self, with_constants: bool) -> Step {
        let layout = Arc::clone(&self.bank.layout);
        for p in 0..self.sample.alphabet().len() {
            layout.atom(self.sample, p, &mut self.scratch);
            match self.offer(DagOp::Atom(p as u32), 1) {
                Step::Continue => {}
                other => return other,
            }
        }
        if with_constants {
            for (value, op) in [(true, DagOp::True), (false, DagOp::False)] {
                layout.constant(value, &mut self.scratch);
                match self.offer(op, 1) {
                    Step::Continue => {}
                    other => return other,
                }
            }
        }
        Step::Continue
    }

    fn size(&mut self, n: usize, ops: &OperatorSet) -> Step {
        let layout = Arc::clone(&self.bank.layout);
        let stride = layout.stride();
        let size = n as u32;
        for &op in &ops.unary {
            for a in self.bank.by_size(n - 1) {
                let src = &self.bank.tables[a * stride..(a + 1) * stride];
                layout.unary(op, src, &mut self.scratch);
                match self.offer(DagOp::Unary(op, a as u32), size) {
                    Step::Continue => {}
                    other => return other,
                }
            }
        }
        for &op in &ops.binary {
            let symmetric = op.is_commutative();
            for i in 1..n - 1 {
                let j = n - 1 - i;
                // (j, i) pairs of a commutative operator repeat (i, j) tables.
                if symmetric && i > j {
                    continue;
                }
                for a in self.bank.by_size(i) {
                    for b in self.bank.by_size(j) {
                        if symmetric && i == j && b <= a {
                            continue;
                        }
                        let lhs = &self.bank.tables[a * stride..(a + 1) * stride];
                        let rhs = &self.bank.tables[b * stride..(b + 1) * stride];
                        layout.binary(op, lhs, rhs, &mut self.scratch);
                        match self.offer(DagOp::Binary(op, a as u32, b as u32), size) {
                            Step::Continue => {}
                            other => return other,
                        }
                    }
                }
            }
        }
        Step::Continue
    }
}

/// Enumerates formulas of size `1..=cfg.max_size` over `ops`, returning as
/// soon as a candidate's characteristic vector separates the sample.
pub fn vfb_bounded(sample: &Sample, ops: &OperatorSet, cfg: &EnumConfig) -> EnumOutcome {
    let layout = Arc::new(TableLayout::for_sample(sample));
    let stride = layout.stride();
    let mut search = Search {
        sample,
        bank: FormulaBank::new(layout),
        scratch: vec![0; stride],
        deadline: cfg.deadline,
        candidates: 0,
    };
    let finish = |search: Search, solution, timed_out| EnumOutcome {
        solution,
        bank: search.bank,
        timed_out,
        candidates: search.candidates,
    };
    if cfg.max_size == 0 {
        return finish(search, None, false);
    }
    let start = search.bank.len();
    match search.size_one(cfg.with_constants) {
        Step::Continue => {}
        Step::Solved(f) => return finish(search, Some(f), false),
        Step::TimedOut => return finish(search, None, true),
    }
    let end = search.bank.len();
    search.bank.by_size.push(start..end);

    for n in 2..=cfg.max_size {
        if cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            return finish(search, None, true);
        }
        let start = search.bank.len();
        match search.size(n, ops) {
            Step::Continue => {}
            Step::Solved(f) => return finish(search, Some(f), false),
            Step::TimedOut => return finish(search, None, true),
        }
        let end = search.bank.len();
        search.bank.by_size.push(start..end);
        log::debug!("size {n}: {} new formulas, {} total", end - start, end);
        // Nothing new at this size and the one before: no larger formula can
        // produce a new table either.
        if n >= 3 && start == end && search.bank.by_size[n - 1].is_empty() {
            break;
        }
    }
    finish(search, None, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitwise::{table_of, TableCache};
    use crate::ltl::parse_formula;
    use crate::trace::{Alphabet, Trace};

    fn four_traces() -> Sample {
        let ab = Alphabet::new(vec!["a".into(), "b".into()]).unwrap();
        let w = |s| Trace::from_word(s, &ab).unwrap();
        Sample::new(
            ab.clone(),
            vec![w("aabaa"), w("baaa")],
            vec![w("abab"), w("aab")],
        )
        .unwrap()
    }

    #[test]
    fn four_traces_minimal_separator() {
        let s = four_traces();
        let ops = OperatorSet::parse_list("!,X!,F,G,&,|,U").unwrap();
        let out = vfb_bounded(&s, &ops, &EnumConfig::bounded(8));
        let f = out.solution.expect("solution");
        assert_eq!(f.size(), 3);
        // F G a and G F a agree on finite traces; F comes first in operator order.
        assert_eq!(f.display(s.alphabet()).to_string(), "F(G(a))");
        assert!(s.positives().iter().all(|w| crate::ltl::satisfies(&f, w)));
        assert!(s.negatives().iter().all(|w| !crate::ltl::satisfies(&f, w)));
    }

    #[test]
    fn bank_has_unique_tables() {
        let s = four_traces();
        let out = vfb_bounded(&s, &OperatorSet::default(), &EnumConfig::bounded(2));
        let bank = &out.bank;
        let mut seen = std::collections::HashSet::new();
        for i in 0..bank.len() {
            assert!(seen.insert(bank.table_words(i).to_vec()));
            assert_eq!(bank.find(bank.table_words(i)), Some(i));
        }
        let mut cache = TableCache::new(&s);
        for i in 0..bank.len() {
            let f = bank.formula(i);
            assert_eq!(f.size(), bank.size_of(i));
            assert_eq!(*table_of(&f, &mut cache), bank.table(i));
        }
    }

    #[test]
    fn one_prop_not_and_next() {
        let alpha = Alphabet::new(vec!["a".into()]).unwrap();
        // a at positions 1 and 3 of a length-3 trace; the negative only
        // differs at position 2, which no size-2 formula can tell apart.
        let s = Sample::new(
            alpha,
            vec![Trace::new(vec![1, 0, 1]).unwrap()],
            vec![Trace::new(vec![1, 1, 1]).unwrap()],
        )
        .unwrap();
        let ops = OperatorSet::parse_list("!,X!").unwrap();
        let out = vfb_bounded(&s, &ops, &EnumConfig::bounded(2));
        assert!(out.solution.is_none());
        // a, !a, X!a are pairwise distinct on these traces.
        assert_eq!(out.bank.len(), 3);
        assert_eq!(out.bank.by_size(2), 1..3);
    }

    #[test]
    fn equal_tables_share_fingerprint() {
        let s = four_traces();
        let mut cache = TableCache::new(&s);
        let a = parse_formula("a", s.alphabet()).unwrap();
        let nna = parse_formula("!!a", s.alphabet()).unwrap();
        let xa = parse_formula("X! a", s.alphabet()).unwrap();
        assert_eq!(
            fingerprint(&table_of(&a, &mut cache)),
            fingerprint(&table_of(&nna, &mut cache))
        );
        assert_ne!(
            fingerprint(&table_of(&a, &mut cache)),
            fingerprint(&table_of(&xa, &mut cache))
        );
    }

    #[test]
    fn deterministic_banks() {
        let s = four_traces();
        let ops = OperatorSet::full();
        let mut cfg = EnumConfig::bounded(4);
        cfg.with_constants = true;
        let a = vfb_bounded(&s, &ops, &cfg);
        let b = vfb_bounded(&s, &ops, &cfg);
        assert_eq!(a.bank.len(), b.bank.len());
        assert_eq!(a.bank.dag().nodes, b.bank.dag().nodes);
        assert_eq!(a.bank.tables, b.bank.tables);
    }
}
