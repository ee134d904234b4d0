//! LTLf syntax trees, operator sets, the textual grammar and the
//! reference evaluator.

mod eval;
mod parse;

use std::fmt;
use std::str::FromStr;

use crate::trace::Alphabet;

pub use eval::{eval_reference, satisfies, EvalError};
pub use parse::{parse_formula, ParseFormulaError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnaryOp {
    Not,
    StrongNext,
    WeakNext,
    Finally,
    Globally,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinaryOp {
    And,
    Or,
    Until,
    Release,
}

impl UnaryOp {
    pub const ALL: [UnaryOp; 5] = [
        UnaryOp::Not,
        UnaryOp::StrongNext,
        UnaryOp::WeakNext,
        UnaryOp::Finally,
        UnaryOp::Globally,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Not => "!",
            UnaryOp::StrongNext => "X!",
            UnaryOp::WeakNext => "X",
            UnaryOp::Finally => "F",
            UnaryOp::Globally => "G",
        }
    }
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 4] = [
        BinaryOp::And,
        BinaryOp::Or,
        BinaryOp::Until,
        BinaryOp::Release,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::And => "&",
            BinaryOp::Or => "|",
            BinaryOp::Until => "U",
            BinaryOp::Release => "R",
        }
    }

    pub fn is_commutative(self) -> bool {
        matches!(self, BinaryOp::And | BinaryOp::Or)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Atom(usize),
    True,
    False,
    Unary(UnaryOp, Box<LtlFormula>),
    Binary(BinaryOp, Box<LtlFormula>, Box<LtlFormula>),
}

/// An LTLf formula with its node count cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LtlFormula {
    node: Node,
    size: usize,
}

impl LtlFormula {
    pub fn atom(prop: usize) -> Self {
        Self {
            node: Node::Atom(prop),
            size: 1,
        }
    }

    pub fn top() -> Self {
        Self {
            node: Node::True,
            size: 1,
        }
    }

    pub fn bottom() -> Self {
        Self {
            node: Node::False,
            size: 1,
        }
    }

    pub fn unary(op: UnaryOp, inner: LtlFormula) -> Self {
        Self {
            size: 1 + inner.size,
            node: Node::Unary(op, Box::new(inner)),
        }
    }

    pub fn binary(op: BinaryOp, lhs: LtlFormula, rhs: LtlFormula) -> Self {
        Self {
            size: 1 + lhs.size + rhs.size,
            node: Node::Binary(op, Box::new(lhs), Box::new(rhs)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: LtlFormula) -> Self {
        Self::unary(UnaryOp::Not, f)
    }

    pub fn next(f: LtlFormula) -> Self {
        Self::unary(UnaryOp::StrongNext, f)
    }

    pub fn weak_next(f: LtlFormula) -> Self {
        Self::unary(UnaryOp::WeakNext, f)
    }

    pub fn finally(f: LtlFormula) -> Self {
        Self::unary(UnaryOp::Finally, f)
    }

    pub fn globally(f: LtlFormula) -> Self {
        Self::unary(UnaryOp::Globally, f)
    }

    pub fn and(a: LtlFormula, b: LtlFormula) -> Self {
        Self::binary(BinaryOp::And, a, b)
    }

    pub fn or(a: LtlFormula, b: LtlFormula) -> Self {
        Self::binary(BinaryOp::Or, a, b)
    }

    pub fn until(a: LtlFormula, b: LtlFormula) -> Self {
        Self::binary(BinaryOp::Until, a, b)
    }

    pub fn release(a: LtlFormula, b: LtlFormula) -> Self {
        Self::binary(BinaryOp::Release, a, b)
    }

    #[inline]
    pub fn node(&self) -> &Node {
        &self.node
    }

    /// Number of nodes in the syntax tree.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Largest proposition index used, if any.
    pub fn max_prop(&self) -> Option<usize> {
        match &self.node {
            Node::Atom(p) => Some(*p),
            Node::True | Node::False => None,
            Node::Unary(_, f) => f.max_prop(),
            Node::Binary(_, a, b) => a.max_prop().max(b.max_prop()),
        }
    }

    /// Whether every operator in the tree belongs to `ops`.
    pub fn uses_only(&self, ops: &OperatorSet) -> bool {
        match &self.node {
            Node::Atom(_) | Node::True | Node::False => true,
            Node::Unary(op, f) => ops.unary.contains(op) && f.uses_only(ops),
            Node::Binary(op, a, b) => {
                ops.binary.contains(op) && a.uses_only(ops) && b.uses_only(ops)
            }
        }
    }

    /// Applies `f` to every proposition index.
    pub fn map_props(&self, f: &impl Fn(usize) -> usize) -> LtlFormula {
        match &self.node {
            Node::Atom(p) => LtlFormula::atom(f(*p)),
            Node::True => LtlFormula::top(),
            Node::False => LtlFormula::bottom(),
            Node::Unary(op, g) => LtlFormula::unary(*op, g.map_props(f)),
            Node::Binary(op, a, b) => LtlFormula::binary(*op, a.map_props(f), b.map_props(f)),
        }
    }

    /// Renders the formula with proposition names from `alphabet`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> Display<'a> {
        Display {
            formula: self,
            alphabet,
        }
    }
}

pub struct Display<'a> {
    formula: &'a LtlFormula,
    alphabet: &'a Alphabet,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render(self.formula, self.alphabet, f)
    }
}

fn render(phi: &LtlFormula, alphabet: &Alphabet, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match &phi.node {
        Node::Atom(p) => match alphabet.name(*p) {
            Some(name) => f.write_str(name),
            None => write!(f, "p{p}"),
        },
        Node::True => f.write_str("true"),
        Node::False => f.write_str("false"),
        Node::Unary(op, inner) => {
            write!(f, "{}(", op.symbol())?;
            render(inner, alphabet, f)?;
            f.write_str(")")
        }
        Node::Binary(op, a, b) => {
            render_operand(a, alphabet, f)?;
            write!(f, " {} ", op.symbol())?;
            render_operand(b, alphabet, f)
        }
    }
}

fn render_operand(
    phi: &LtlFormula,
    alphabet: &Alphabet,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    if matches!(phi.node, Node::Binary(..)) {
        f.write_str("(")?;
        render(phi, alphabet, f)?;
        f.write_str(")")
    } else {
        render(phi, alphabet, f)
    }
}

/// Unary and binary operators available to the enumerator.
///
/// Operators are kept in a fixed canonical order (`! X! X F G` then
/// `& | U R`) regardless of how the set was written down.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorSet {
    pub unary: Vec<UnaryOp>,
    pub binary: Vec<BinaryOp>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperatorSetError {
    #[error("unknown operator `{0}`")]
    Unknown(String),
    #[error("operator set is empty")]
    Empty,
}

impl OperatorSet {
    pub fn new(
        unary: impl IntoIterator<Item = UnaryOp>,
        binary: impl IntoIterator<Item = BinaryOp>,
    ) -> Result<Self, OperatorSetError> {
        let mut unary: Vec<_> = unary.into_iter().collect();
        let mut binary: Vec<_> = binary.into_iter().collect();
        unary.sort();
        unary.dedup();
        binary.sort();
        binary.dedup();
        if unary.is_empty() && binary.is_empty() {
            return Err(OperatorSetError::Empty);
        }
        Ok(Self { unary, binary })
    }

    /// Every operator, including release.
    pub fn full() -> Self {
        Self {
            unary: UnaryOp::ALL.to_vec(),
            binary: BinaryOp::ALL.to_vec(),
        }
    }

    pub fn contains_unary(&self, op: UnaryOp) -> bool {
        self.unary.contains(&op)
    }

    pub fn contains_binary(&self, op: BinaryOp) -> bool {
        self.binary.contains(&op)
    }

    /// Parses a comma-separated list such as `F,G,X!,U,&,|,!`.
    pub fn parse_list(text: &str) -> Result<Self, OperatorSetError> {
        let mut unary = Vec::new();
        let mut binary = Vec::new();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok {
                "!" | "~" | "¬" => unary.push(UnaryOp::Not),
                "X!" => unary.push(UnaryOp::StrongNext),
                "X" => unary.push(UnaryOp::WeakNext),
                "F" => unary.push(UnaryOp::Finally),
                "G" => unary.push(UnaryOp::Globally),
                "&" | "∧" => binary.push(BinaryOp::And),
                "|" | "∨" => binary.push(BinaryOp::Or),
                "U" => binary.push(BinaryOp::Until),
                "R" => binary.push(BinaryOp::Release),
                other => return Err(OperatorSetError::Unknown(other.to_string())),
            }
        }
        Self::new(unary, binary)
    }

    pub fn is_operator_token(tok: &str) -> bool {
        matches!(
            tok,
            "!" | "~" | "¬" | "X!" | "X" | "F" | "G" | "&" | "∧" | "|" | "∨" | "U" | "R"
        )
    }
}

impl Default for OperatorSet {
    /// `! X! X F G` and `& | U`; release is off by default.
    fn default() -> Self {
        Self {
            unary: UnaryOp::ALL.to_vec(),
            binary: vec![BinaryOp::And, BinaryOp::Or, BinaryOp::Until],
        }
    }
}

impl fmt::Display for OperatorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syms: Vec<&str> = self
            .unary
            .iter()
            .map(|o| o.symbol())
            .chain(self.binary.iter().map(|o| o.symbol()))
            .collect();
        f.write_str(&syms.join(","))
    }
}

impl FromStr for OperatorSet {
    type Err = OperatorSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_list(s)
    }
}
