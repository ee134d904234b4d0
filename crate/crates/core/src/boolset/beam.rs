use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::Instant;

use rustc_hash::FxHashSet;

use super::{BoolComb, BscInstance};
use crate::bits::{tail_mask, word_count};

#[derive(Clone, Debug)]
pub struct BeamConfig {
    /// Combinations kept per weight.
    pub beam_width: usize,
    /// Heaviest combination to build before giving up.
    pub max_weight: usize,
    /// Dominators are searched among this many best members of each weight.
    pub domination_k: usize,
    pub deadline: Option<Instant>,
}

impl Default for BeamConfig {
    fn default() -> Self {
        Self {
            beam_width: 100,
            max_weight: 70,
            domination_k: 10,
            deadline: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BeamResult {
    Solution(BoolComb),
    /// Highest score seen, then lowest weight, then earliest found.
    Best(BoolComb),
}

impl BeamResult {
    pub fn comb(&self) -> &BoolComb {
        match self {
            BeamResult::Solution(c) | BeamResult::Best(c) => c,
        }
    }

    pub fn into_comb(self) -> BoolComb {
        match self {
            BeamResult::Solution(c) | BeamResult::Best(c) => c,
        }
    }

    pub fn is_solution(&self) -> bool {
        matches!(self, BeamResult::Solution(_))
    }
}

#[derive(Clone, Debug)]
pub struct BeamOutcome {
    pub result: BeamResult,
    /// Weights expanded.
    pub levels: usize,
    pub candidates: u64,
    pub timed_out: bool,
}

#[derive(Clone, Copy)]
enum Term {
    Leaf(u32),
    Union(u32, u32),
    Inter(u32, u32),
}

/// Combinations kept in some queue, with flat eval and sat words.
struct Arena {
    words: usize,
    terms: Vec<Term>,
    weights: Vec<u32>,
    scores: Vec<u32>,
    evals: Vec<u64>,
    sats: Vec<u64>,
}

impl Arena {
    fn eval(&self, i: u32) -> &[u64] {
        let i = i as usize;
        &self.evals[i * self.words..(i + 1) * self.words]
    }

    fn sat(&self, i: u32) -> &[u64] {
        let i = i as usize;
        &self.sats[i * self.words..(i + 1) * self.words]
    }

    fn push(&mut self, term: Term, weight: u32, score: u32, eval: &[u64], sat: &[u64]) -> u32 {
        let id = self.terms.len() as u32;
        self.terms.push(term);
        self.weights.push(weight);
        self.scores.push(score);
        self.evals.extend_from_slice(eval);
        self.sats.extend_from_slice(sat);
        id
    }

    fn build(&self, i: u32, inst: &BscInstance) -> BoolComb {
        match self.terms[i as usize] {
            Term::Leaf(s) => inst.leaf(s as usize),
            Term::Union(a, b) => BoolComb::union(self.build(a, inst), self.build(b, inst)),
            Term::Inter(a, b) => BoolComb::inter(self.build(a, inst), self.build(b, inst)),
        }
    }
}

type Queue = BinaryHeap<Reverse<(u32, Reverse<u32>)>>;

struct Beam<'a> {
    cfg: &'a BeamConfig,
    arena: Arena,
    pos: Vec<u64>,
    full: Vec<u64>,
    queues: Vec<Queue>,
    /// Evaluations inserted into each still-open queue.
    level_seen: Vec<FxHashSet<Box<[u64]>>>,
    /// Evaluations of every member of a closed queue.
    closed_evals: FxHashSet<Box<[u64]>>,
    /// Best members of closed queues, by decreasing score.
    pool: Vec<u32>,
    /// Closed queues, best first.
    frozen: Vec<Vec<u32>>,
    best: Option<u32>,
    candidates: u64,
}

impl Beam<'_> {
    fn sat_into(&self, eval: &[u64], sat: &mut [u64]) -> u32 {
        let mut score = 0;
        for w in 0..eval.len() {
            sat[w] = !(eval[w] ^ self.pos[w]) & self.full[w];
            score += sat[w].count_ones();
        }
        score
    }

    /// Inserts into queue `level` if there is room or it beats the minimum.
    fn add_bounded(&mut self, level: usize, term: Term, eval: &[u64], sat: &[u64], score: u32) {
        let b = self.cfg.beam_width;
        let q = &self.queues[level];
        if q.len() >= b && q.peek().is_some_and(|Reverse((s, _))| score <= *s) {
            return;
        }
        let id = self.arena.push(term, level as u32, score, eval, sat);
        self.queues[level].push(Reverse((score, Reverse(id))));
        if self.queues[level].len() > b {
            self.queues[level].pop();
        }
        self.level_seen[level].insert(eval.into());
        let better = match self.best {
            None => true,
            Some(o) => {
                let (so, wo) = (
                    self.arena.scores[o as usize],
                    self.arena.weights[o as usize],
                );
                score > so || (score == so && (level as u32) < wo)
            }
        };
        if better {
            self.best = Some(id);
        }
    }

    fn freeze(&mut self, level: usize) {
        let q = std::mem::take(&mut self.queues[level]);
        let mut members: Vec<u32> = q.into_iter().map(|Reverse((_, Reverse(id)))| id).collect();
        members.sort_by_key(|&id| (Reverse(self.arena.scores[id as usize]), id));
        for &id in &members {
            self.closed_evals.insert(self.arena.eval(id).into());
        }
        self.pool
            .extend(members.iter().take(self.cfg.domination_k).copied());
        let scores = &self.arena.scores;
        self.pool
            .sort_by_key(|&id| (Reverse(scores[id as usize]), id));
        self.level_seen[level] = FxHashSet::default();
        // Combine in the order the members were found.
        members.sort_unstable();
        self.frozen[level] = members;
    }

    fn dominated(&self, sat: &[u64], score: u32) -> bool {
        self.pool
            .iter()
            .take_while(|&&m| self.arena.scores[m as usize] >= score)
            .any(|&m| {
                let ms = self.arena.sat(m);
                sat.iter().zip(ms).all(|(a, b)| a & !b == 0)
            })
    }
}

/// Weight-ordered search keeping the `beam_width` best combinations per weight.
pub fn beam_search(inst: &BscInstance, cfg: &BeamConfig) -> BeamOutcome {
    assert!(cfg.beam_width >= 1, "beam width must be at least 1");
    let universe = inst.universe();
    let words = word_count(universe);
    let pos_bits = inst.pos_mask();
    let mut full = vec![u64::MAX; words];
    if let Some(last) = full.last_mut() {
        *last = tail_mask(universe);
    }
    let done = |result, levels, candidates, timed_out| BeamOutcome {
        result,
        levels,
        candidates,
        timed_out,
    };

    if inst.n_pos() == 0 {
        return done(BeamResult::Solution(BoolComb::empty()), 0, 0, false);
    }
    if let Some(i) = (0..inst.len())
        .filter(|&i| inst.set(i).members == pos_bits)
        .min_by_key(|&i| (inst.set(i).weight, i))
    {
        return done(BeamResult::Solution(inst.leaf(i)), 0, 0, false);
    }

    let max_base = inst.sets().iter().map(|s| s.weight).max().unwrap_or(0);
    let top_level = cfg.max_weight.max(max_base).max(2) + 1;
    let mut beam = Beam {
        cfg,
        arena: Arena {
            words,
            terms: Vec::new(),
            weights: Vec::new(),
            scores: Vec::new(),
            evals: Vec::new(),
            sats: Vec::new(),
        },
        pos: pos_bits.words().to_vec(),
        full,
        queues: vec![Queue::new(); top_level + 1],
        level_seen: vec![FxHashSet::default(); top_level + 1],
        closed_evals: FxHashSet::default(),
        pool: Vec::new(),
        frozen: vec![Vec::new(); top_level + 1],
        best: None,
        candidates: 0,
    };

    let mut sat = vec![0u64; words];
    for (i, s) in inst.sets().iter().enumerate() {
        let eval = s.members.words();
        let score = beam.sat_into(eval, &mut sat);
        beam.add_bounded(s.weight, Term::Leaf(i as u32), eval, &sat, score);
    }

    let best = |beam: &Beam| match beam.best {
        Some(id) => beam.arena.build(id, inst),
        None => BoolComb::empty(),
    };

    beam.freeze(1);
    beam.freeze(2);
    let mut eval = vec![0u64; words];
    let mut k = 2;
    let mut levels = 0;
    loop {
        let weight = k + 1;
        let highest = (1..=k)
            .rev()
            .find(|&w| !beam.frozen[w].is_empty())
            .unwrap_or(0);
        if weight > cfg.max_weight || (weight > 2 * highest + 1 && weight > max_base) {
            break;
        }
        if cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            let c = beam.candidates;
            return done(BeamResult::Best(best(&beam)), levels, c, true);
        }
        levels += 1;
        for i in 1..=k / 2 {
            let j = k - i;
            let (left, right) = (beam.frozen[i].clone(), beam.frozen[j].clone());
            for (ai, &a) in left.iter().enumerate() {
                let skip = if i == j { ai + 1 } else { 0 };
                for &b in &right[skip..] {
                    for union in [true, false] {
                        beam.candidates += 1;
                        if beam.candidates.is_multiple_of(4096)
                            && cfg.deadline.is_some_and(|d| Instant::now() >= d)
                        {
                            let c = beam.candidates;
                            return done(BeamResult::Best(best(&beam)), levels, c, true);
                        }
                        {
                            let (ea, eb) = (beam.arena.eval(a), beam.arena.eval(b));
                            for w in 0..words {
                                eval[w] = if union { ea[w] | eb[w] } else { ea[w] & eb[w] };
                            }
                        }
                        if beam.closed_evals.contains(eval.as_slice())
                            || beam.level_seen[weight].contains(eval.as_slice())
                        {
                            continue;
                        }
                        let score = beam.sat_into(&eval, &mut sat);
                        if beam.dominated(&sat, score) {
                            continue;
                        }
                        let term = if union {
                            Term::Union(a, b)
                        } else {
                            Term::Inter(a, b)
                        };
                        if score as usize == universe {
                            let id = beam.arena.push(term, weight as u32, score, &eval, &sat);
                            let c = beam.candidates;
                            return done(
                                BeamResult::Solution(beam.arena.build(id, inst)),
                                levels,
                                c,
                                false,
                            );
                        }
                        beam.add_bounded(weight, term, &eval, &sat, score);
                    }
                }
            }
        }
        beam.freeze(weight);
        k += 1;
    }
    let c = beam.candidates;
    done(BeamResult::Best(best(&beam)), levels, c, false)
}
