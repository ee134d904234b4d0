//! Seeded generation of benchmark tasks.
//!
//! Formula families label uniformly random traces with the reference
//! evaluator and keep drawing until both classes are full. The Hamming family
//! has no formula: its negatives are small bit-flip perturbations of a single
//! positive trace.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ltl::{satisfies, LtlFormula};
use crate::trace::{Alphabet, Sample, Trace};

pub const DEFAULT_MAX_TRIES: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `a0 U (a1 U (… U a_{n-1}))`.
    OrderedSequence {
        n: usize,
    },
    /// `F(w0 ∧ X! F(w1 ∧ …))`.
    Subword {
        word: Vec<usize>,
    },
    /// `F s0 ∧ F s1 ∧ …`.
    Subset {
        props: Vec<usize>,
    },
    Hamming,
    /// Conjunction of `m` distinct basis formulas, each under a random
    /// renaming of the propositions.
    RandomConjuncts {
        m: usize,
    },
    /// Random ∧/∨ tree over `factors` patterns of `pattern_len` atoms each.
    RandomBoolComb {
        factors: usize,
        pattern_len: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("the hamming family has no target formula")]
    NoFormula,
    #[error("gave up after {tries} draws with {pos} positives and {neg} negatives")]
    Budget { tries: u64, pos: usize, neg: usize },
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
}

impl Family {
    pub const NAMES: [&'static str; 6] = [
        "ordered-sequence",
        "subword",
        "subset",
        "hamming",
        "random-conjuncts",
        "random-bool-comb",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::OrderedSequence { .. } => "ordered-sequence",
            Family::Subword { .. } => "subword",
            Family::Subset { .. } => "subset",
            Family::Hamming => "hamming",
            Family::RandomConjuncts { .. } => "random-conjuncts",
            Family::RandomBoolComb { .. } => "random-bool-comb",
        }
    }

    /// `key=value;…` with list values joined by `+`.
    pub fn params(&self) -> String {
        let list = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join("+")
        };
        match self {
            Family::OrderedSequence { n } => format!("n={n}"),
            Family::Subword { word } => format!("word={}", list(word)),
            Family::Subset { props } => format!("props={}", list(props)),
            Family::Hamming => String::new(),
            Family::RandomConjuncts { m } => format!("m={m}"),
            Family::RandomBoolComb {
                factors,
                pattern_len,
            } => format!("factors={factors};pattern_len={pattern_len}"),
        }
    }

    /// Inverse of [`Family::name`] and [`Family::params`].
    pub fn parse(name: &str, params: &str) -> Result<Family, GenError> {
        let mut kv = std::collections::HashMap::new();
        for part in params.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| GenError::Params(format!("expected key=value, got '{part}'")))?;
            kv.insert(k.trim(), v.trim());
        }
        let num = |k: &str| -> Result<usize, GenError> {
            let v = kv
                .get(k)
                .ok_or_else(|| GenError::Params(format!("missing parameter '{k}'")))?;
            v.parse()
                .map_err(|_| GenError::Params(format!("'{k}' must be a number, got '{v}'")))
        };
        let list = |k: &str| -> Result<Vec<usize>, GenError> {
            let v = kv
                .get(k)
                .ok_or_else(|| GenError::Params(format!("missing parameter '{k}'")))?;
            v.split('+')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| GenError::Params(format!("bad entry '{x}' in '{k}'")))
                })
                .collect()
        };
        Ok(match name {
            "ordered-sequence" => Family::OrderedSequence { n: num("n")? },
            "subword" => Family::Subword {
                word: list("word")?,
            },
            "subset" => Family::Subset {
                props: list("props")?,
            },
            "hamming" => Family::Hamming,
            "random-conjuncts" => Family::RandomConjuncts { m: num("m")? },
            "random-bool-comb" => Family::RandomBoolComb {
                factors: num("factors")?,
                pattern_len: num("pattern_len")?,
            },
            other => return Err(GenError::UnknownFamily(other.to_string())),
        })
    }

    /// Fewest propositions the family's formula mentions.
    pub fn min_props(&self) -> usize {
        match self {
            Family::OrderedSequence { n } => *n,
            Family::Subword { word } => word.iter().max().map_or(1, |m| m + 1),
            Family::Subset { props } => props.iter().max().map_or(1, |m| m + 1),
            Family::Hamming => 1,
            Family::RandomConjuncts { .. } => 2,
            Family::RandomBoolComb { .. } => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params();
        if p.is_empty() {
            f.write_str(self.name())
        } else {
            write!(f, "{}({p})", self.name())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskSpec {
    pub family: Family,
    pub trace_len: usize,
    pub n_props: usize,
    pub n_pos: usize,
    pub n_neg: usize,
    pub seed: u64,
    pub max_tries: u64,
}

impl TaskSpec {
    pub fn new(family: Family, trace_len: usize, n_pos: usize, n_neg: usize, seed: u64) -> Self {
        let n_props = family.min_props();
        Self {
            family,
            trace_len,
            n_props,
            n_pos,
            n_neg,
            seed,
            max_tries: DEFAULT_MAX_TRIES,
        }
    }

    fn check(&self) -> Result<(), GenError> {
        let bad = |m: String| Err(GenError::Params(m));
        if self.trace_len == 0 {
            return bad("trace length must be positive".into());
        }
        if self.n_props == 0 || self.n_props > 64 {
            return bad(format!("need 1..=64 propositions, got {}", self.n_props));
        }
        if self.n_props < self.family.min_props() {
            return bad(format!(
                "{} needs at least {} propositions",
                self.family.name(),
                self.family.min_props()
            ));
        }
        if self.n_neg == 0 || (self.n_pos == 0 && self.family != Family::Hamming) {
            return bad("need at least one positive and one negative trace".into());
        }
        match &self.family {
            Family::OrderedSequence { n } if *n == 0 => bad("n must be positive".into()),
            Family::Subword { word } if word.is_empty() => bad("empty word".into()),
            Family::Subset { props } if props.is_empty() => bad("empty subset".into()),
            Family::RandomConjuncts { m } if *m == 0 || *m > BASIS_LEN => {
                bad(format!("m must be in 1..={BASIS_LEN}"))
            }
            Family::RandomBoolComb {
                factors,
                pattern_len,
            } if *factors == 0 || *pattern_len == 0 => {
                bad("factors and pattern_len must be positive".into())
            }
            _ => Ok(()),
        }
    }

    fn formula_rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn trace_rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(1);
        r
    }
}

const BASIS_LEN: usize = 3;

/// The default conjunct basis over propositions 0 and 1.
fn basis() -> [LtlFormula; BASIS_LEN] {
    let (a, b) = (LtlFormula::atom(0), LtlFormula::atom(1));
    [
        LtlFormula::until(a.clone(), b.clone()),
        LtlFormula::finally(LtlFormula::and(
            a.clone(),
            LtlFormula::next(LtlFormula::finally(b.clone())),
        )),
        LtlFormula::and(LtlFormula::finally(a), LtlFormula::finally(b)),
    ]
}

/// `F(l0 ∧ X!(l1 ∧ …))`, each link being `X!` or `X! F` at random.
fn pattern(rng: &mut ChaCha8Rng, n_props: usize, len: usize) -> LtlFormula {
    let atoms: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n_props)).collect();
    let links: Vec<bool> = (1..len).map(|_| rng.gen_bool(0.5)).collect();
    let mut f = LtlFormula::atom(atoms[len - 1]);
    for i in (0..len - 1).rev() {
        let step = if links[i] {
            LtlFormula::next(LtlFormula::finally(f))
        } else {
            LtlFormula::next(f)
        };
        f = LtlFormula::and(LtlFormula::atom(atoms[i]), step);
    }
    LtlFormula::finally(f)
}

fn random_tree(rng: &mut ChaCha8Rng, mut leaves: Vec<LtlFormula>) -> LtlFormula {
    if leaves.len() == 1 {
        return leaves.pop().unwrap();
    }
    let cut = rng.gen_range(1..leaves.len());
    let right = leaves.split_off(cut);
    let and = rng.gen_bool(0.5);
    let (l, r) = (random_tree(rng, leaves), random_tree(rng, right));
    if and {
        LtlFormula::and(l, r)
    } else {
        LtlFormula::or(l, r)
    }
}

fn and_all(fs: impl IntoIterator<Item = LtlFormula>) -> LtlFormula {
    fs.into_iter()
        .reduce(LtlFormula::and)
        .expect("non-empty conjunction")
}

/// The target formula of a task.
pub fn gen_formula(spec: &TaskSpec) -> Result<LtlFormula, GenError> {
    spec.check()?;
    let mut rng = spec.formula_rng();
    Ok(match &spec.family {
        Family::Hamming => return Err(GenError::NoFormula),
        Family::OrderedSequence { n } => {
            (0..*n - 1).rev().fold(LtlFormula::atom(n - 1), |acc, i| {
                LtlFormula::until(LtlFormula::atom(i), acc)
            })
        }
        Family::Subword { word } => {
            let last = LtlFormula::finally(LtlFormula::atom(word[word.len() - 1]));
            word[..word.len() - 1].iter().rev().fold(last, |acc, &a| {
                LtlFormula::finally(LtlFormula::and(LtlFormula::atom(a), LtlFormula::next(acc)))
            })
        }
        Family::Subset { props } => and_all(
            props
                .iter()
                .map(|&p| LtlFormula::finally(LtlFormula::atom(p))),
        ),
        Family::RandomConjuncts { m } => {
            let mut chosen: Vec<LtlFormula> = basis().into();
            chosen.shuffle(&mut rng);
            chosen.truncate(*m);
            and_all(chosen.into_iter().map(|f| {
                let mut perm: Vec<usize> = (0..spec.n_props).collect();
                perm.shuffle(&mut rng);
                f.map_props(&|p| perm[p])
            }))
        }
        Family::RandomBoolComb {
            factors,
            pattern_len,
        } => {
            let leaves = (0..*factors)
                .map(|_| pattern(&mut rng, spec.n_props, *pattern_len))
                .collect();
            random_tree(&mut rng, leaves)
        }
    })
}

fn random_trace(rng: &mut ChaCha8Rng, len: usize, mask: u64) -> Trace {
    Trace::new((0..len).map(|_| rng.gen::<u64>() & mask).collect()).expect("non-empty")
}

/// Labels uniformly random traces with `phi` until both classes are full.
/// Traces are distinct within each class.
pub fn sample_for_formula(
    phi: &LtlFormula,
    alphabet: Alphabet,
    trace_len: usize,
    n_pos: usize,
    n_neg: usize,
    rng: &mut ChaCha8Rng,
    max_tries: u64,
) -> Result<Sample, GenError> {
    let mask = alphabet.letter_mask();
    let mut pos: Vec<Trace> = Vec::new();
    let mut neg: Vec<Trace> = Vec::new();
    let mut seen: HashSet<Trace> = HashSet::new();
    let mut tries = 0;
    while pos.len() < n_pos || neg.len() < n_neg {
        if tries == max_tries {
            return Err(GenError::Budget {
                tries,
                pos: pos.len(),
                neg: neg.len(),
            });
        }
        tries += 1;
        let w = random_trace(rng, trace_len, mask);
        if seen.contains(&w) {
            continue;
        }
        let (class, cap) = if satisfies(phi, &w) {
            (&mut pos, n_pos)
        } else {
            (&mut neg, n_neg)
        };
        if class.len() < cap {
            seen.insert(w.clone());
            class.push(w);
        }
    }
    Ok(Sample::new(alphabet, pos, neg).expect("labels are disjoint"))
}

fn hamming(spec: &TaskSpec, alphabet: Alphabet) -> Result<Sample, GenError> {
    let mut rng = spec.trace_rng();
    let positive = random_trace(&mut rng, spec.trace_len, alphabet.letter_mask());
    let n_bits = spec.trace_len * spec.n_props;
    let mut seen: HashSet<Trace> = HashSet::from([positive.clone()]);
    let mut neg = Vec::new();
    let mut tries = 0;
    while neg.len() < spec.n_neg {
        if tries == spec.max_tries {
            return Err(GenError::Budget {
                tries,
                pos: 1,
                neg: neg.len(),
            });
        }
        tries += 1;
        let d = rng.gen_range(1..=3).min(n_bits);
        let mut letters = positive.letters().to_vec();
        for bit in rand::seq::index::sample(&mut rng, n_bits, d) {
            letters[bit / spec.n_props] ^= 1 << (bit % spec.n_props);
        }
        let w = Trace::new(letters).expect("non-empty");
        if seen.insert(w.clone()) {
            neg.push(w);
        }
    }
    Ok(Sample::new(alphabet, vec![positive], neg).expect("distinct traces"))
}

/// Generates the task described by `spec`. Hamming tasks always have a
/// single positive trace.
pub fn gen_task(spec: &TaskSpec) -> Result<Sample, GenError> {
    spec.check()?;
    let alphabet =
        Alphabet::with_default_names(spec.n_props).map_err(|e| GenError::Params(e.to_string()))?;
    if spec.family == Family::Hamming {
        return hamming(spec, alphabet);
    }
    let phi = gen_formula(spec)?;
    sample_for_formula(
        &phi,
        alphabet,
        spec.trace_len,
        spec.n_pos,
        spec.n_neg,
        &mut spec.trace_rng(),
        spec.max_tries,
    )
}

/// One line of a suite manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub family: String,
    pub params: String,
    pub trace_len: usize,
    pub n_props: usize,
    pub n_pos: usize,
    pub n_neg: usize,
    pub seed: u64,
    pub path: String,
}

impl ManifestRecord {
    pub fn new(spec: &TaskSpec, path: String) -> Self {
        Self {
            family: spec.family.name().to_string(),
            params: spec.family.params(),
            trace_len: spec.trace_len,
            n_props: spec.n_props,
            n_pos: spec.n_pos,
            n_neg: spec.n_neg,
            seed: spec.seed,
            path,
        }
    }

    pub fn spec(&self) -> Result<TaskSpec, GenError> {
        Ok(TaskSpec {
            family: Family::parse(&self.family, &self.params)?,
            trace_len: self.trace_len,
            n_props: self.n_props,
            n_pos: self.n_pos,
            n_neg: self.n_neg,
            seed: self.seed,
            max_tries: DEFAULT_MAX_TRIES,
        })
    }
}

pub fn write_manifest(path: &Path, records: &[ManifestRecord]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRecord>, csv::Error> {
    csv::Reader::from_path(path)?.deserialize().collect()
}
