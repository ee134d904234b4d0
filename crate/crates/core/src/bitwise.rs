//! Characteristic sequences and tables computed with word-level operations.
//!
//! Position `p` (1-based) of a trace of length `ℓ` is stored at bit `p - 1`,
//! i.e. word `(p - 1) / 64`, offset `(p - 1) % 64`. Bits at indices `>= ℓ`
//! are kept zero after every operation. Moving "toward the start" of a
//! trace is a right shift of the words, with carries between words of the
//! same row; rows never exchange bits.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::bits::{tail_mask, word_count, Bits};
use crate::ltl::{BinaryOp, LtlFormula, Node, UnaryOp};
use crate::trace::{Sample, Trace};

/// Per-position satisfaction bits of one formula on one trace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CharSequence {
    len: usize,
    words: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("characteristic sequences of lengths {0} and {1} cannot be combined")]
pub struct LengthMismatch(pub usize, pub usize);

impl CharSequence {
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "traces are non-empty");
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self::zeros(len);
        s.words.fill(u64::MAX);
        *s.words.last_mut().unwrap() &= tail_mask(len);
        s
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.words[i / 64] |= 1 << (i % 64);
            }
        }
        s
    }

    /// Parses a `0`/`1` string written position 1 first, e.g. `"10110"`.
    pub fn parse(text: &str) -> Option<Self> {
        let bits: Option<Vec<bool>> = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        let bits = bits?;
        (!bits.is_empty()).then(|| Self::from_bools(&bits))
    }

    /// Wraps raw words; returns `None` unless they are canonical.
    pub fn from_words(len: usize, words: Vec<u64>) -> Option<Self> {
        let s = Self { len, words };
        (len > 0 && s.words.len() == word_count(len) && s.is_canonical()).then_some(s)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Bit for 1-based `position`.
    pub fn get(&self, position: usize) -> bool {
        assert!(position >= 1 && position <= self.len);
        let i = position - 1;
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn is_canonical(&self) -> bool {
        self.words
            .last()
            .is_some_and(|&w| w & !tail_mask(self.len) == 0)
    }
}

impl fmt::Display for CharSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 1..=self.len {
            f.write_str(if self.get(p) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for CharSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharSequence({self})")
    }
}

pub fn cs_atom(w: &Trace, prop: usize) -> CharSequence {
    let mut s = CharSequence::zeros(w.len());
    atom_row(w, prop, &mut s.words);
    s
}

pub fn cs_apply_unary(op: UnaryOp, s: &CharSequence) -> CharSequence {
    let mut out = CharSequence::zeros(s.len);
    unary_row(op, s.len, &s.words, &mut out.words);
    out
}

pub fn cs_apply_binary(
    op: BinaryOp,
    lhs: &CharSequence,
    rhs: &CharSequence,
) -> Result<CharSequence, LengthMismatch> {
    if lhs.len != rhs.len {
        return Err(LengthMismatch(lhs.len, rhs.len));
    }
    let mut out = CharSequence::zeros(lhs.len);
    binary_row(op, lhs.len, &lhs.words, &rhs.words, &mut out.words);
    Ok(out)
}

/// Runs the `F` doubling loop and returns the sequence after each
/// or-shift round, together with the shift used in that round.
pub fn finally_rounds(s: &CharSequence) -> Vec<(usize, CharSequence)> {
    let mut rounds = Vec::new();
    let mut out = s.words.clone();
    let mut tmp = vec![0; out.len()];
    let mut shift = 1;
    while shift < s.len {
        shift_toward_start(&out, shift, &mut tmp);
        for (o, t) in out.iter_mut().zip(&tmp) {
            *o |= t;
        }
        rounds.push((
            shift,
            CharSequence {
                len: s.len,
                words: out.clone(),
            },
        ));
        shift <<= 1;
    }
    rounds
}

// ---------------------------------------------------------------------------
// Row kernels. `len` is the trace length; slices hold word_count(len) words.

fn atom_row(w: &Trace, prop: usize, dst: &mut [u64]) {
    dst.fill(0);
    for (i, &letter) in w.letters().iter().enumerate() {
        if (letter >> prop) & 1 == 1 {
            dst[i / 64] |= 1 << (i % 64);
        }
    }
}

/// `dst[i] = src[i + shift]`, zero past the end.
fn shift_toward_start(src: &[u64], shift: usize, dst: &mut [u64]) {
    let q = shift / 64;
    let r = shift % 64;
    let n = src.len();
    for w in 0..n {
        let lo = if w + q < n { src[w + q] } else { 0 };
        dst[w] = if r == 0 {
            lo
        } else {
            let hi = if w + q + 1 < n { src[w + q + 1] } else { 0 };
            (lo >> r) | (hi << (64 - r))
        };
    }
}

#[inline]
fn finally_word(x: u64, len: usize) -> u64 {
    let mut out = x;
    let mut shift = 1;
    while shift < len {
        out |= out >> shift;
        shift <<= 1;
    }
    out
}

#[inline]
fn until_word(lhs: u64, rhs: u64, len: usize) -> u64 {
    let mut out = rhs;
    let mut acc = lhs;
    let mut shift = 1;
    while shift < len {
        out |= (out >> shift) & acc;
        acc &= acc >> shift;
        shift <<= 1;
    }
    out
}

#[inline]
fn unary_word(op: UnaryOp, x: u64, len: usize) -> u64 {
    let mask = tail_mask(len);
    match op {
        UnaryOp::Not => !x & mask,
        UnaryOp::StrongNext => x >> 1,
        UnaryOp::WeakNext => (x >> 1) | (1 << (len - 1)),
        UnaryOp::Finally => finally_word(x, len),
        UnaryOp::Globally => !finally_word(!x & mask, len) & mask,
    }
}

#[inline]
fn binary_word(op: BinaryOp, a: u64, b: u64, len: usize) -> u64 {
    let mask = tail_mask(len);
    match op {
        BinaryOp::And => a & b,
        BinaryOp::Or => a | b,
        BinaryOp::Until => until_word(a, b, len),
        BinaryOp::Release => !until_word(!a & mask, !b & mask, len) & mask,
    }
}

fn not_in_place(words: &mut [u64], len: usize) {
    for w in words.iter_mut() {
        *w = !*w;
    }
    *words.last_mut().unwrap() &= tail_mask(len);
}

fn finally_multi(src: &[u64], len: usize, dst: &mut [u64]) {
    dst.copy_from_slice(src);
    let mut tmp = vec![0; src.len()];
    let mut shift = 1;
    while shift < len {
        shift_toward_start(dst, shift, &mut tmp);
        for (o, t) in dst.iter_mut().zip(&tmp) {
            *o |= t;
        }
        shift <<= 1;
    }
}

fn until_multi(lhs: &[u64], rhs: &[u64], len: usize, dst: &mut [u64]) {
    dst.copy_from_slice(rhs);
    let mut acc = lhs.to_vec();
    let mut tmp = vec![0; lhs.len()];
    let mut shift = 1;
    while shift < len {
        shift_toward_start(dst, shift, &mut tmp);
        for ((o, t), a) in dst.iter_mut().zip(&tmp).zip(&acc) {
            *o |= t & a;
        }
        shift_toward_start(&acc, shift, &mut tmp);
        for (a, t) in acc.iter_mut().zip(&tmp) {
            *a &= t;
        }
        shift <<= 1;
    }
}

pub(crate) fn unary_row(op: UnaryOp, len: usize, src: &[u64], dst: &mut [u64]) {
    if len <= 64 {
        dst[0] = unary_word(op, src[0], len);
        return;
    }
    match op {
        UnaryOp::Not => {
            dst.copy_from_slice(src);
            not_in_place(dst, len);
        }
        UnaryOp::StrongNext => shift_toward_start(src, 1, dst),
        UnaryOp::WeakNext => {
            shift_toward_start(src, 1, dst);
            dst[(len - 1) / 64] |= 1 << ((len - 1) % 64);
        }
        UnaryOp::Finally => finally_multi(src, len, dst),
        UnaryOp::Globally => {
            let mut neg = src.to_vec();
            not_in_place(&mut neg, len);
            finally_multi(&neg, len, dst);
            not_in_place(dst, len);
        }
    }
}

pub(crate) fn binary_row(op: BinaryOp, len: usize, lhs: &[u64], rhs: &[u64], dst: &mut [u64]) {
    if len <= 64 {
        dst[0] = binary_word(op, lhs[0], rhs[0], len);
        return;
    }
    match op {
        BinaryOp::And => {
            for ((d, a), b) in dst.iter_mut().zip(lhs).zip(rhs) {
                *d = a & b;
            }
        }
        BinaryOp::Or => {
            for ((d, a), b) in dst.iter_mut().zip(lhs).zip(rhs) {
                *d = a | b;
            }
        }
        BinaryOp::Until => until_multi(lhs, rhs, len, dst),
        BinaryOp::Release => {
            let mut na = lhs.to_vec();
            let mut nb = rhs.to_vec();
            not_in_place(&mut na, len);
            not_in_place(&mut nb, len);
            until_multi(&na, &nb, len, dst);
            not_in_place(dst, len);
        }
    }
}

// ---------------------------------------------------------------------------
// Tables

/// Where each trace's row lives inside a flat table buffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableLayout {
    lens: Vec<usize>,
    offsets: Vec<usize>,
    stride: usize,
    n_pos: usize,
    single_word: bool,
}

impl TableLayout {
    pub fn for_sample(sample: &Sample) -> Self {
        Self::from_lengths(sample.traces().map(Trace::len).collect(), sample.n_pos())
    }

    pub fn from_lengths(lens: Vec<usize>, n_pos: usize) -> Self {
        let mut offsets = Vec::with_capacity(lens.len());
        let mut stride = 0;
        for &l in &lens {
            assert!(l > 0, "traces are non-empty");
            offsets.push(stride);
            stride += word_count(l);
        }
        let single_word = lens.iter().all(|&l| l <= 64);
        Self {
            lens,
            offsets,
            stride,
            n_pos,
            single_word,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.lens.len()
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    /// Words per table.
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn row_len(&self, row: usize) -> usize {
        self.lens[row]
    }

    fn row_words(&self, row: usize) -> std::ops::Range<usize> {
        self.offsets[row]..self.offsets[row] + word_count(self.lens[row])
    }

    pub(crate) fn atom(&self, sample: &Sample, prop: usize, dst: &mut [u64]) {
        for (row, w) in sample.traces().enumerate() {
            atom_row(w, prop, &mut dst[self.row_words(row)]);
        }
    }

    pub(crate) fn constant(&self, value: bool, dst: &mut [u64]) {
        for row in 0..self.n_rows() {
            let r = self.row_words(row);
            let len = self.lens[row];
            let words = &mut dst[r];
            words.fill(if value { u64::MAX } else { 0 });
            *words.last_mut().unwrap() &= tail_mask(len);
        }
    }

    pub(crate) fn unary(&self, op: UnaryOp, src: &[u64], dst: &mut [u64]) {
        if self.single_word {
            for ((d, &s), &len) in dst.iter_mut().zip(src).zip(&self.lens) {
                *d = unary_word(op, s, len);
            }
        } else {
            for row in 0..self.n_rows() {
                let r = self.row_words(row);
                unary_row(op, self.lens[row], &src[r.clone()], &mut dst[r]);
            }
        }
    }

    pub(crate) fn binary(&self, op: BinaryOp, lhs: &[u64], rhs: &[u64], dst: &mut [u64]) {
        if self.single_word {
            for (((d, &a), &b), &len) in dst.iter_mut().zip(lhs).zip(rhs).zip(&self.lens) {
                *d = binary_word(op, a, b, len);
            }
        } else {
            for row in 0..self.n_rows() {
                let r = self.row_words(row);
                binary_row(
                    op,
                    self.lens[row],
                    &lhs[r.clone()],
                    &rhs[r.clone()],
                    &mut dst[r],
                );
            }
        }
    }

    /// First bit of every row.
    pub(crate) fn first_bits(&self, table: &[u64]) -> Bits {
        let mut v = Bits::zeros(self.n_rows());
        for (row, &off) in self.offsets.iter().enumerate() {
            if table[off] & 1 == 1 {
                v.set(row, true);
            }
        }
        v
    }

    /// Whether the first bits are 1 on positive rows and 0 on negative rows.
    #[inline]
    pub(crate) fn separates(&self, table: &[u64]) -> bool {
        self.offsets
            .iter()
            .enumerate()
            .all(|(row, &off)| (table[off] & 1 == 1) == (row < self.n_pos))
    }
}

/// Characteristic sequences of one formula on every trace of a sample,
/// positives first.
#[derive(Clone, PartialEq, Eq)]
pub struct CharTable {
    layout: Arc<TableLayout>,
    words: Vec<u64>,
}

impl CharTable {
    pub(crate) fn from_raw(layout: Arc<TableLayout>, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), layout.stride);
        Self { layout, words }
    }

    pub fn layout(&self) -> &TableLayout {
        &self.layout
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn n_rows(&self) -> usize {
        self.layout.n_rows()
    }

    pub fn row(&self, i: usize) -> CharSequence {
        CharSequence {
            len: self.layout.lens[i],
            words: self.words[self.layout.row_words(i)].to_vec(),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = CharSequence> + '_ {
        (0..self.n_rows()).map(|i| self.row(i))
    }
}

impl fmt::Debug for CharTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.rows().map(|r| r.to_string()))
            .finish()
    }
}

/// First bit of every row of a characteristic table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharVector(pub Bits);

impl CharVector {
    pub fn bits(&self) -> &Bits {
        &self.0
    }

    /// 1 on the first `n_pos` rows and 0 on the rest.
    pub fn is_solution(&self, n_pos: usize) -> bool {
        (0..self.0.len()).all(|i| self.0.get(i) == (i < n_pos))
    }
}

pub fn first_bits(t: &CharTable) -> CharVector {
    CharVector(t.layout.first_bits(&t.words))
}

pub fn is_solution(v: &CharVector, sample: &Sample) -> bool {
    v.0.len() == sample.n_traces() && v.is_solution(sample.n_pos())
}

/// Memoised tables for formulas over one sample.
pub struct TableCache<'s> {
    sample: &'s Sample,
    layout: Arc<TableLayout>,
    tables: HashMap<LtlFormula, Arc<CharTable>>,
}

impl<'s> TableCache<'s> {
    pub fn new(sample: &'s Sample) -> Self {
        Self {
            sample,
            layout: Arc::new(TableLayout::for_sample(sample)),
            tables: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }
}

/// Characteristic table of `phi`, built bottom-up from cached subformulas.
pub fn table_of(phi: &LtlFormula, cache: &mut TableCache<'_>) -> Arc<CharTable> {
    if let Some(t) = cache.tables.get(phi) {
        return Arc::clone(t);
    }
    let layout = Arc::clone(&cache.layout);
    let mut words = vec![0; layout.stride];
    match phi.node() {
        Node::Atom(p) => layout.atom(cache.sample, *p, &mut words),
        Node::True => layout.constant(true, &mut words),
        Node::False => layout.constant(false, &mut words),
        Node::Unary(op, inner) => {
            let t = table_of(inner, cache);
            layout.unary(*op, &t.words, &mut words);
        }
        Node::Binary(op, a, b) => {
            let ta = table_of(a, cache);
            let tb = table_of(b, cache);
            layout.binary(*op, &ta.words, &tb.words, &mut words);
        }
    }
    let table = Arc::new(CharTable::from_raw(layout, words));
    cache.tables.insert(phi.clone(), Arc::clone(&table));
    table
}
