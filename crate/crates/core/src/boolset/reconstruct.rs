use super::{BoolComb, BoolNode, BscInstance};
use crate::ltl::{satisfies, LtlFormula};
use crate::trace::Sample;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReconstructError {
    #[error("cannot build a formula from the empty combination")]
    Empty,
    #[error("instance carries no formulas")]
    NoFormulas,
    #[error("instance universe ({universe}) does not match the sample ({traces} traces)")]
    Universe { universe: usize, traces: usize },
    #[error("reconstructed formula disagrees with the combination on trace {trace}")]
    Mismatch { trace: usize },
}

fn build(theta: &BoolComb, inst: &BscInstance) -> Result<LtlFormula, ReconstructError> {
    Ok(match theta.node() {
        BoolNode::Empty => return Err(ReconstructError::Empty),
        BoolNode::Leaf(i) => inst.provenance(*i).ok_or(ReconstructError::NoFormulas)?,
        BoolNode::Union(a, b) => LtlFormula::or(build(a, inst)?, build(b, inst)?),
        BoolNode::Inter(a, b) => LtlFormula::and(build(a, inst)?, build(b, inst)?),
    })
}

/// Turns ∪ into ∨, ∩ into ∧ and leaves into their formulas, then checks the
/// result against `⟦θ⟧` trace by trace with the reference evaluator.
pub fn reconstruct(
    theta: &BoolComb,
    inst: &BscInstance,
    sample: &Sample,
) -> Result<LtlFormula, ReconstructError> {
    if inst.universe() != sample.n_traces() || inst.n_pos() != sample.n_pos() {
        return Err(ReconstructError::Universe {
            universe: inst.universe(),
            traces: sample.n_traces(),
        });
    }
    let f = build(theta, inst)?;
    let expected = inst.eval(theta);
    for (i, w) in sample.traces().enumerate() {
        if satisfies(&f, w) != expected.get(i) {
            return Err(ReconstructError::Mismatch { trace: i });
        }
    }
    debug_assert_eq!(f.size(), theta.weight());
    Ok(f)
}
