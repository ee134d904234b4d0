//! End-to-end learning: bounded enumeration, then Boolean Set Cover over the
//! enumerated formulas when enumeration alone finds no separator.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::boolset::{
    beam_search, collapse, div_conq, existence_check, fast_non_dominated, reconstruct, BeamConfig,
    DivConqConfig, DivConqError, Existence, ReconstructError,
};
use crate::enumerator::{vfb_bounded, EnumConfig};
use crate::ltl::{satisfies, LtlFormula, OperatorSet};
use crate::trace::Sample;

#[derive(Clone, Debug)]
pub struct LearnerConfig {
    /// Largest formula size enumerated before switching to set cover.
    pub ltl2bs_switch: usize,
    pub beam_width: usize,
    /// Heaviest combination beam search builds before splitting the problem.
    pub dc_switch: usize,
    pub domination_k: usize,
    /// Overrides the sample's operator set when given.
    pub operators: Option<OperatorSet>,
    pub timeout: Option<Duration>,
    pub seed: u64,
    /// Enumerate `true` and `false` as atoms.
    pub with_constants: bool,
    /// Enumerate without a size bound and never switch to set cover.
    pub raw_vfb: bool,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        Self {
            ltl2bs_switch: 8,
            beam_width: 100,
            dc_switch: 70,
            domination_k: 10,
            operators: None,
            timeout: Some(Duration::from_secs(60)),
            seed: 0,
            with_constants: false,
            raw_vfb: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Solved,
    NoSolution,
    Timeout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    EnumOnly,
    #[serde(rename = "BSC")]
    Bsc,
    #[serde(rename = "BSC+DivConq")]
    BscDivConq,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::EnumOnly => "EnumOnly",
            Method::Bsc => "BSC",
            Method::BscDivConq => "BSC+DivConq",
        }
    }
}

/// A positive and a negative trace (indices within their class) that no
/// enumerated formula tells apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessPair {
    pub pos: usize,
    pub neg: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LearnStats {
    /// Candidate formulas evaluated by the enumerator.
    pub enumerated: u64,
    /// Formulas kept after table-level deduplication.
    pub bank_size: usize,
    /// Base sets after collapsing to characteristic vectors.
    pub collapsed: usize,
    /// Base sets after domination pruning.
    pub reduced: usize,
    pub collapse_ratio: Option<f64>,
    pub domination_ratio: Option<f64>,
    pub beam_calls: usize,
    pub beam_levels: usize,
    pub dc_depth: usize,
    pub final_weight: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct LearnResult {
    pub status: Status,
    pub formula: Option<LtlFormula>,
    pub method: Option<Method>,
    pub witness: Option<WitnessPair>,
    pub elapsed: Duration,
    pub stats: LearnStats,
}

impl LearnResult {
    pub fn size(&self) -> Option<usize> {
        self.formula.as_ref().map(LtlFormula::size)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LearnError {
    #[error("internal error: learned formula fails verification on trace {0}")]
    Verification(usize),
    #[error("internal error: {0}")]
    Reconstruct(#[from] ReconstructError),
}

/// Index of the first trace `phi` misclassifies.
fn misclassified(phi: &LtlFormula, sample: &Sample) -> Option<usize> {
    let n_pos = sample.n_pos();
    sample
        .traces()
        .enumerate()
        .find(|(i, w)| satisfies(phi, w) != (*i < n_pos))
        .map(|(i, _)| i)
}

fn verified(phi: LtlFormula, sample: &Sample) -> Result<LtlFormula, LearnError> {
    match misclassified(&phi, sample) {
        Some(i) => Err(LearnError::Verification(i)),
        None => Ok(phi),
    }
}

/// Learns a formula separating the sample's positives from its negatives.
/// Any returned formula has been re-checked with the reference evaluator.
pub fn learn(sample: &Sample, cfg: &LearnerConfig) -> Result<LearnResult, LearnError> {
    let start = Instant::now();
    let deadline = cfg.timeout.map(|t| start + t);
    let ops = cfg
        .operators
        .clone()
        .or_else(|| sample.operators().cloned())
        .unwrap_or_default();
    let mut stats = LearnStats::default();
    let finish = |status, formula, method, witness, stats| LearnResult {
        status,
        formula,
        method,
        witness,
        elapsed: start.elapsed(),
        stats,
    };

    let enum_cfg = EnumConfig {
        max_size: if cfg.raw_vfb {
            usize::MAX
        } else {
            cfg.ltl2bs_switch
        },
        with_constants: cfg.with_constants,
        deadline,
    };
    let out = vfb_bounded(sample, &ops, &enum_cfg);
    stats.enumerated = out.candidates;
    stats.bank_size = out.bank.len();
    if let Some(f) = out.solution {
        let f = verified(f, sample)?;
        stats.final_weight = Some(f.size());
        return Ok(finish(
            Status::Solved,
            Some(f),
            Some(Method::EnumOnly),
            None,
            stats,
        ));
    }
    if out.timed_out {
        return Ok(finish(Status::Timeout, None, None, None, stats));
    }
    log::debug!(
        "no separator up to size {}; switching to set cover",
        out.bank.max_size()
    );

    let mut inst = collapse(&out.bank);
    drop(out);
    stats.collapsed = inst.len();
    stats.collapse_ratio = ratio(stats.bank_size, inst.len());
    if let Existence::Witness { pos, neg } = existence_check(&inst) {
        stats.reduced = inst.len();
        let w = WitnessPair { pos, neg };
        return Ok(finish(Status::NoSolution, None, None, Some(w), stats));
    }
    if cfg.raw_vfb {
        // Only reachable when the bank stopped growing before the deadline.
        stats.reduced = inst.len();
        return Ok(finish(Status::NoSolution, None, None, None, stats));
    }

    let keep = fast_non_dominated(&inst.states(), cfg.domination_k.max(1));
    inst.retain_indices(&keep);
    stats.reduced = inst.len();
    stats.domination_ratio = ratio(stats.collapsed, inst.len());
    log::debug!(
        "set cover: {} formulas, {} vectors, {} after domination",
        stats.bank_size,
        stats.collapsed,
        stats.reduced
    );

    let beam_cfg = BeamConfig {
        beam_width: cfg.beam_width,
        max_weight: cfg.dc_switch,
        domination_k: cfg.domination_k.max(1),
        deadline,
    };
    let dc_cfg = DivConqConfig {
        seed: cfg.seed,
        domination_k: Some(cfg.domination_k.max(1)),
        deadline,
    };
    let (mut calls, mut levels) = (0, 0);
    let (result, dc_stats) = div_conq(
        &inst,
        |sub| {
            let o = beam_search(sub, &beam_cfg);
            calls += 1;
            levels += o.levels;
            Some(o.result.into_comb())
        },
        &dc_cfg,
    );
    stats.beam_calls = calls;
    stats.beam_levels = levels;
    stats.dc_depth = dc_stats.max_depth;
    match result {
        Ok(theta) => {
            let f = verified(reconstruct(&theta, &inst, sample)?, sample)?;
            stats.final_weight = Some(theta.weight());
            let method = if dc_stats.max_depth == 0 {
                Method::Bsc
            } else {
                Method::BscDivConq
            };
            Ok(finish(Status::Solved, Some(f), Some(method), None, stats))
        }
        Err(DivConqError::Timeout) => Ok(finish(Status::Timeout, None, None, None, stats)),
        Err(DivConqError::NoSolution { pos, neg }) => {
            let w = neg.map(|neg| WitnessPair { pos, neg });
            Ok(finish(Status::NoSolution, None, None, w, stats))
        }
    }
}

fn ratio(a: usize, b: usize) -> Option<f64> {
    (b > 0).then(|| a as f64 / b as f64)
}
