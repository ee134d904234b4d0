//! Naive evaluator following the LTLf satisfaction relation clause by clause.
//!
//! Used as the correctness oracle for the bitwise engine and for labelling
//! generated traces. Derived operators are expanded to their definitions:
//! `X φ = !X! !φ`, `F φ = true U φ`, `G φ = !F !φ`, `φ R ψ = !(!φ U !ψ)`.

use super::{BinaryOp, LtlFormula, Node, UnaryOp};
use crate::trace::Trace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("position {position} is outside trace of length {len}")]
pub struct EvalError {
    pub position: usize,
    pub len: usize,
}

/// Whether the suffix of `w` starting at 1-based `position` satisfies `phi`.
pub fn eval_reference(phi: &LtlFormula, w: &Trace, position: usize) -> Result<bool, EvalError> {
    if position == 0 || position > w.len() {
        return Err(EvalError {
            position,
            len: w.len(),
        });
    }
    Ok(holds(phi, w, position))
}

/// `w ⊨ phi`, i.e. satisfaction at position 1.
pub fn satisfies(phi: &LtlFormula, w: &Trace) -> bool {
    holds(phi, w, 1)
}

fn holds(phi: &LtlFormula, w: &Trace, k: usize) -> bool {
    match phi.node() {
        Node::True => true,
        Node::False => false,
        Node::Atom(c) => w.holds_at(k - 1, *c),
        Node::Unary(op, f) => match op {
            UnaryOp::Not => !holds(f, w, k),
            UnaryOp::StrongNext => strong_next(w, k, |j| holds(f, w, j)),
            UnaryOp::WeakNext => !strong_next(w, k, |j| !holds(f, w, j)),
            UnaryOp::Finally => until(w, k, |_| true, |j| holds(f, w, j)),
            UnaryOp::Globally => !until(w, k, |_| true, |j| !holds(f, w, j)),
        },
        Node::Binary(op, a, b) => match op {
            BinaryOp::And => holds(a, w, k) && holds(b, w, k),
            BinaryOp::Or => holds(a, w, k) || holds(b, w, k),
            BinaryOp::Until => until(w, k, |j| holds(a, w, j), |j| holds(b, w, j)),
            BinaryOp::Release => !until(w, k, |j| !holds(a, w, j), |j| !holds(b, w, j)),
        },
    }
}

/// `w[k..] ⊨ X! φ` iff the suffix has length > 1 and `w[k+1..] ⊨ φ`.
fn strong_next(w: &Trace, k: usize, phi: impl Fn(usize) -> bool) -> bool {
    k < w.len() && phi(k + 1)
}

/// `w[k..] ⊨ φ U ψ` iff some `i ∈ [k, ℓ]` has `ψ` at `i` and `φ` on `[k, i-1]`.
fn until(w: &Trace, k: usize, phi: impl Fn(usize) -> bool, psi: impl Fn(usize) -> bool) -> bool {
    for i in k..=w.len() {
        if psi(i) {
            return true;
        }
        if !phi(i) {
            return false;
        }
    }
    false
}
