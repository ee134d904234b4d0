//! Traces, samples and the plain-text task format.
//!
//! A task file holds the positive block, a `---` line, the negative block
//! and then up to two optional one-line sections: an operator restriction
//! (`F,G,X!,U,&,|,!`) and proposition names (`a,b,c`). Each trace line is a
//! `;`-separated list of letters, each letter a `,`-separated list of `0`/`1`
//! bits, one per proposition:
//!
//! ```text
//! 1,0;1,0;0,1
//! ---
//! 0,1;1,0
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::ltl::{OperatorSet, OperatorSetError};

pub const MAX_PROPS: usize = 64;

const RESERVED: [&str; 7] = ["X", "F", "G", "U", "R", "true", "false"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphabetError {
    #[error("alphabet is empty")]
    Empty,
    #[error("at most {MAX_PROPS} propositions are supported, got {0}")]
    TooMany(usize),
    #[error("duplicate proposition name `{0}`")]
    Duplicate(String),
    #[error("`{0}` is not a valid proposition name")]
    Invalid(String),
}

/// Ordered proposition names; a proposition's index is its position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new(names: Vec<String>) -> Result<Self, AlphabetError> {
        if names.is_empty() {
            return Err(AlphabetError::Empty);
        }
        if names.len() > MAX_PROPS {
            return Err(AlphabetError::TooMany(names.len()));
        }
        let mut seen = HashMap::new();
        for n in &names {
            if !is_identifier(n) || RESERVED.contains(&n.as_str()) {
                return Err(AlphabetError::Invalid(n.clone()));
            }
            if seen.insert(n.as_str(), ()).is_some() {
                return Err(AlphabetError::Duplicate(n.clone()));
            }
        }
        Ok(Self { names })
    }

    /// `p0, p1, …, p{n-1}`.
    pub fn with_default_names(n: usize) -> Result<Self, AlphabetError> {
        Self::new((0..n).map(|i| format!("p{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, prop: usize) -> Option<&str> {
        self.names.get(prop).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn has_default_names(&self) -> bool {
        self.names
            .iter()
            .enumerate()
            .all(|(i, n)| *n == format!("p{i}"))
    }

    /// Bits that may be set in a letter.
    pub fn letter_mask(&self) -> u64 {
        if self.names.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.names.len()) - 1
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A non-empty finite trace; letter `i` is a bitmask of the propositions
/// holding at position `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace {
    letters: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("empty trace")]
    Empty,
    #[error("unknown proposition `{0}` in word")]
    UnknownLetter(char),
}

impl Trace {
    pub fn new(letters: Vec<u64>) -> Result<Self, TraceError> {
        if letters.is_empty() {
            return Err(TraceError::Empty);
        }
        Ok(Self { letters })
    }

    /// Builds a trace from a word over single-character proposition names,
    /// one proposition per position (e.g. `"aabaa"`).
    pub fn from_word(word: &str, alphabet: &Alphabet) -> Result<Self, TraceError> {
        let letters = word
            .chars()
            .map(|c| {
                alphabet
                    .index_of(&c.to_string())
                    .map(|p| 1u64 << p)
                    .ok_or(TraceError::UnknownLetter(c))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(letters)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Always false; traces are non-empty.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    #[inline]
    pub fn letters(&self) -> &[u64] {
        &self.letters
    }

    /// Whether `prop` holds at 0-based position `pos`.
    #[inline]
    pub fn holds_at(&self, pos: usize, prop: usize) -> bool {
        (self.letters[pos] >> prop) & 1 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SampleError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("inconsistent letter width at line {line}: expected {expected} bits, found {found}")]
    Width {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("empty trace at line {line}")]
    EmptyTrace { line: usize },
    #[error("negative trace at line {negative_line} is identical to positive trace at line {positive_line}")]
    OverlapAt {
        positive_line: usize,
        negative_line: usize,
    },
    #[error("positive trace #{positive} and negative trace #{negative} are identical")]
    Overlap { positive: usize, negative: usize },
    #[error("letter {letter:#x} uses propositions beyond the alphabet of size {props}")]
    LetterOutOfRange { letter: u64, props: usize },
    #[error("no positive traces")]
    NoPositives,
    #[error("no negative traces")]
    NoNegatives,
    #[error("line {line}: {source}")]
    Alphabet {
        line: usize,
        #[source]
        source: AlphabetError,
    },
    #[error("line {line}: proposition names give {found} names for {expected} propositions")]
    NameCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {source}")]
    Operators {
        line: usize,
        #[source]
        source: OperatorSetError,
    },
}

/// Positive and negative traces over a shared alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    alphabet: Alphabet,
    positives: Vec<Trace>,
    negatives: Vec<Trace>,
    operators: Option<OperatorSet>,
}

impl Sample {
    /// Validates letters against the alphabet, non-emptiness of both
    /// classes and disjointness of P and N.
    pub fn new(
        alphabet: Alphabet,
        positives: Vec<Trace>,
        negatives: Vec<Trace>,
    ) -> Result<Self, SampleError> {
        if positives.is_empty() {
            return Err(SampleError::NoPositives);
        }
        if negatives.is_empty() {
            return Err(SampleError::NoNegatives);
        }
        let mask = alphabet.letter_mask();
        for t in positives.iter().chain(&negatives) {
            if let Some(&bad) = t.letters().iter().find(|&&l| l & !mask != 0) {
                return Err(SampleError::LetterOutOfRange {
                    letter: bad,
                    props: alphabet.len(),
                });
            }
        }
        let index: HashMap<&Trace, usize> = positives
            .iter()
            .enumerate()
            .rev()
            .map(|(i, t)| (t, i))
            .collect();
        for (j, t) in negatives.iter().enumerate() {
            if let Some(&i) = index.get(t) {
                return Err(SampleError::Overlap {
                    positive: i,
                    negative: j,
                });
            }
        }
        Ok(Self {
            alphabet,
            positives,
            negatives,
            operators: None,
        })
    }

    pub fn with_operators(mut self, ops: Option<OperatorSet>) -> Self {
        self.operators = ops;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn positives(&self) -> &[Trace] {
        &self.positives
    }

    pub fn negatives(&self) -> &[Trace] {
        &self.negatives
    }

    /// Operator restriction declared in the task file, if any.
    pub fn operators(&self) -> Option<&OperatorSet> {
        self.operators.as_ref()
    }

    pub fn n_pos(&self) -> usize {
        self.positives.len()
    }

    pub fn n_neg(&self) -> usize {
        self.negatives.len()
    }

    pub fn n_traces(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    /// Positives first, then negatives, each in file order.
    pub fn traces(&self) -> impl Iterator<Item = &Trace> + '_ {
        self.positives.iter().chain(&self.negatives)
    }

    pub fn trace(&self, i: usize) -> &Trace {
        if i < self.positives.len() {
            &self.positives[i]
        } else {
            &self.negatives[i - self.positives.len()]
        }
    }

    pub fn max_len(&self) -> usize {
        self.traces().map(Trace::len).max().unwrap_or(0)
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

/// Parses a task file.
pub fn parse_sample(text: &str) -> Result<Sample, SampleError> {
    let mut sections: Vec<(usize, Vec<Line>)> = vec![(1, Vec::new())];
    for (i, raw) in text.split('\n').enumerate() {
        let number = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "---" {
            sections.push((number + 1, Vec::new()));
            continue;
        }
        sections
            .last_mut()
            .unwrap()
            .1
            .push(Line { number, text: line });
    }
    if sections.len() > 4 {
        let (start, _) = &sections[4];
        return Err(SampleError::Syntax {
            line: start - 1,
            column: 1,
            message: "too many `---` separated sections".into(),
        });
    }
    let pos_start = sections[0].0;
    let neg_start = sections
        .get(1)
        .map_or(text.split('\n').count() + 1, |s| s.0);

    let mut width = None;
    let positives = parse_block(
        sections.first().map(|s| &s.1[..]).unwrap_or(&[]),
        pos_start,
        &mut width,
    )?;
    let negatives = parse_block(
        sections.get(1).map(|s| &s.1[..]).unwrap_or(&[]),
        neg_start,
        &mut width,
    )?;
    let width = width.expect("both blocks are non-empty");

    let mut operators = None;
    let mut names = None;
    let optional: Vec<&(usize, Vec<Line>)> = sections.iter().skip(2).collect();
    for (k, (start, lines)) in optional.iter().enumerate() {
        let line = match lines.as_slice() {
            [one] => one,
            [] => {
                return Err(SampleError::Syntax {
                    line: *start,
                    column: 1,
                    message: "empty section after `---`".into(),
                })
            }
            [_, second, ..] => {
                return Err(SampleError::Syntax {
                    line: second.number,
                    column: 1,
                    message: "optional sections hold a single line".into(),
                })
            }
        };
        let tokens: Vec<&str> = line.text.split(',').map(str::trim).collect();
        let is_ops = tokens.iter().all(|t| OperatorSet::is_operator_token(t));
        if is_ops && k == 0 && operators.is_none() {
            operators = Some(OperatorSet::parse_list(line.text).map_err(|source| {
                SampleError::Operators {
                    line: line.number,
                    source,
                }
            })?);
        } else if names.is_none() && (k == 1 || !is_ops) {
            if tokens.len() != width {
                return Err(SampleError::NameCount {
                    line: line.number,
                    expected: width,
                    found: tokens.len(),
                });
            }
            let alphabet = Alphabet::new(tokens.iter().map(|s| s.to_string()).collect()).map_err(
                |source| SampleError::Alphabet {
                    line: line.number,
                    source,
                },
            )?;
            names = Some(alphabet);
        } else {
            return Err(SampleError::Syntax {
                line: line.number,
                column: 1,
                message: "expected proposition names".into(),
            });
        }
    }

    let alphabet = match names {
        Some(a) => a,
        None => Alphabet::with_default_names(width).map_err(|source| SampleError::Alphabet {
            line: pos_start,
            source,
        })?,
    };

    let pos_lines: Vec<usize> = sections[0].1.iter().map(|l| l.number).collect();
    let neg_lines: Vec<usize> = sections[1].1.iter().map(|l| l.number).collect();
    let sample = Sample::new(alphabet, positives, negatives).map_err(|e| match e {
        SampleError::Overlap { positive, negative } => SampleError::OverlapAt {
            positive_line: pos_lines[positive],
            negative_line: neg_lines[negative],
        },
        other => other,
    })?;
    Ok(sample.with_operators(operators))
}

fn parse_block(
    lines: &[Line],
    start: usize,
    width: &mut Option<usize>,
) -> Result<Vec<Trace>, SampleError> {
    if lines.is_empty() {
        return Err(SampleError::EmptyTrace { line: start });
    }
    lines.iter().map(|l| parse_trace_line(l, width)).collect()
}

fn parse_trace_line(line: &Line, width: &mut Option<usize>) -> Result<Trace, SampleError> {
    let indent = line.text.len() - line.text.trim_start().len();
    let body = line.text.trim();
    let syntax = |column: usize, message: &str| SampleError::Syntax {
        line: line.number,
        column: indent + column,
        message: message.to_string(),
    };
    let mut letters = Vec::new();
    let mut bits = 0usize;
    let mut letter = 0u64;
    let mut expect_bit = true;
    for (i, c) in body.chars().enumerate() {
        let column = i + 1;
        match c {
            '0' | '1' if expect_bit => {
                if bits == MAX_PROPS {
                    return Err(syntax(column, "more than 64 propositions"));
                }
                if c == '1' {
                    letter |= 1 << bits;
                }
                bits += 1;
                expect_bit = false;
            }
            ',' if !expect_bit => expect_bit = true,
            ';' if !expect_bit => {
                check_width(line.number, width, bits)?;
                letters.push(letter);
                letter = 0;
                bits = 0;
                expect_bit = true;
            }
            _ if expect_bit => return Err(syntax(column, "expected `0` or `1`")),
            _ => return Err(syntax(column, "expected `,` or `;`")),
        }
    }
    if expect_bit {
        return Err(syntax(body.chars().count() + 1, "expected `0` or `1`"));
    }
    check_width(line.number, width, bits)?;
    letters.push(letter);
    Trace::new(letters).map_err(|_| SampleError::EmptyTrace { line: line.number })
}

fn check_width(line: usize, width: &mut Option<usize>, found: usize) -> Result<(), SampleError> {
    match *width {
        None => {
            *width = Some(found);
            Ok(())
        }
        Some(expected) if expected == found => Ok(()),
        Some(expected) => Err(SampleError::Width {
            line,
            expected,
            found,
        }),
    }
}

/// Writes a sample in the task format accepted by [`parse_sample`].
pub fn serialize_sample(s: &Sample) -> String {
    let width = s.alphabet.len();
    let mut out = String::new();
    let write_block = |out: &mut String, traces: &[Trace]| {
        for t in traces {
            let letters: Vec<String> = t
                .letters()
                .iter()
                .map(|&l| {
                    (0..width)
                        .map(|p| if (l >> p) & 1 == 1 { "1" } else { "0" })
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            out.push_str(&letters.join(";"));
            out.push('\n');
        }
    };
    write_block(&mut out, &s.positives);
    out.push_str("---\n");
    write_block(&mut out, &s.negatives);
    if let Some(ops) = &s.operators {
        let _ = writeln!(out, "---\n{ops}");
    }
    if !s.alphabet.has_default_names() {
        let _ = writeln!(out, "---\n{}", s.alphabet.names.join(","));
    }
    out
}
