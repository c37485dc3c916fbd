//! Trivializing descending codes, and a bounded search for everything else.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{Certificate, CertificateBuilder};
use crate::gauss::{ChordId, GaussCode, Role};
use crate::moves::{End, EndChord, InsertionPolicy, Kink, Move, MoveKind, MoveRules};
use crate::warping::{self, WarpingError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SimplifyError {
    #[error("chord {0} does not occur")]
    UnknownChord(ChordId),
    #[error("chord {0} has an under passage on both sides")]
    PreconditionFailed(ChordId),
    #[error("base class {base} has positive warping degree")]
    NotDescending { base: usize },
    #[error(transparent)]
    Warping(#[from] WarpingError),
}

/// Removes chord `x` by contracting its over passage with over-passage swaps.
///
/// The interval between the two passages of `x` is tried first; if it holds
/// only over passages, the over passage slides to the under passage and a
/// kink removal finishes. Otherwise the over passage slides through over
/// passages to the nearer endpoint and an endpoint removal finishes. `b` is
/// checked for range only: which path works is a property of the code.
pub fn lemma32_eliminate(code: &GaussCode, x: ChordId, b: usize) -> Result<Certificate, SimplifyError> {
    warping::traversal(code, b)?;
    let mut builder = CertificateBuilder::new(code.clone());
    eliminate_into(&mut builder, x)?;
    Ok(builder.finish())
}

fn eliminate_into(builder: &mut CertificateBuilder, x: ChordId) -> Result<(), SimplifyError> {
    let code = builder.current();
    let (o, u, sign) = code.chord_info(x).ok_or(SimplifyError::UnknownChord(x))?;
    let ps = code.passages();
    let len = code.len();
    let all_over = |range: std::ops::Range<usize>| ps[range].iter().all(|p| p.is_over());
    let swaps = |ats: Vec<usize>| ats.into_iter().map(|at| Move::FOverSwap { at });
    let plan: Vec<Move> = if o < u && all_over(o..u - 1) {
        let last = Move::R1Remove(Kink { at: u - 1, chord: x, first: Role::Over, sign });
        swaps((o..u - 1).collect()).chain([last]).collect()
    } else if u < o && all_over(u..o - 1) {
        let last = Move::R1Remove(Kink { at: u, chord: x, first: Role::Under, sign });
        swaps((u + 1..o).rev().collect()).chain([last]).collect()
    } else if o < u && all_over(0..o - 1) {
        let last = Move::FPlusRemove(EndChord { end: End::Tail, over_at: 1, under_at: u, chord: x, sign });
        swaps((1..o).rev().collect()).chain([last]).collect()
    } else if u < o && all_over(o..len) {
        let last = Move::FPlusRemove(EndChord { end: End::Head, over_at: len, under_at: u, chord: x, sign });
        swaps((o..len).collect()).chain([last]).collect()
    } else {
        return Err(SimplifyError::PreconditionFailed(x));
    };
    for mv in plan {
        builder.push(mv).expect("contraction steps are legal");
    }
    Ok(())
}

/// Certificate reducing a code with `warping_degree_at(code, b) = 0` to the
/// empty code, eliminating the chord of the first under passage after the
/// base point each round.
pub fn descending_certificate(code: &GaussCode, b: usize) -> Result<Certificate, SimplifyError> {
    if warping::warping_degree_at(code, b)? != 0 {
        return Err(SimplifyError::NotDescending { base: b });
    }
    let mut builder = CertificateBuilder::new(code.clone());
    let mut b = b;
    while !builder.current().is_empty() {
        let current = builder.current().clone();
        let t = warping::traversal(&current, b)?;
        let x = t.passages(&current).find(|p| p.is_under()).expect("nonempty code has an under passage").chord;
        let (o, u, _) = current.chord_info(x).expect("chord present");
        eliminate_into(&mut builder, x)?;
        b -= [o, u].iter().filter(|&&p| p <= b).count();
        if b == builder.current().len() {
            b = 0;
        }
    }
    Ok(builder.finish())
}

/// Largest number of steps `descending_certificate` may take on `n` chords.
pub fn descending_step_bound(n: usize) -> usize {
    n * (2 * n + 1)
}

/// A certificate to the empty code when `code` or its reverse is descending.
///
/// Every class of degree zero in either orientation is tried; the shortest
/// certificate wins, and among equals the one found last.
pub fn direct_certificate(code: &GaussCode) -> Option<Certificate> {
    if !directly_trivial(code) {
        return None;
    }
    let mut best: Option<Certificate> = None;
    let mut consider = |cert: Certificate| {
        if best.as_ref().map_or(true, |b| cert.len() <= b.len()) {
            best = Some(cert);
        }
    };
    let rev = code.reverse();
    for (b, d) in warping::degree_profile(&rev).into_iter().enumerate() {
        if d == 0 {
            let cert = descending_certificate(&rev, b).expect("class of degree zero");
            consider(cert.reversed().expect("move set is closed under reversal"));
        }
    }
    for (b, d) in warping::degree_profile(code).into_iter().enumerate() {
        if d == 0 {
            consider(descending_certificate(code, b).expect("class of degree zero"));
        }
    }
    best
}

fn directly_trivial(code: &GaussCode) -> bool {
    let (lo, hi) = warping::degree_extremes(code);
    lo == 0 || hi == code.crossing_count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: usize,
    pub max_depth: usize,
    pub max_chords: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum BudgetError {
    #[error("budget field {0} must be positive")]
    NotPositive(&'static str),
}

impl SearchBudget {
    pub const DEFAULT_MAX_NODES: usize = 100_000;
    pub const DEFAULT_MAX_DEPTH: usize = 12;

    /// Default budget for a code with `n` chords.
    pub fn for_chords(n: usize) -> SearchBudget {
        SearchBudget { max_nodes: Self::DEFAULT_MAX_NODES, max_depth: Self::DEFAULT_MAX_DEPTH, max_chords: n + 2 }
    }

    pub fn validate(&self) -> Result<(), BudgetError> {
        if self.max_nodes == 0 {
            return Err(BudgetError::NotPositive("max_nodes"));
        }
        if self.max_depth == 0 {
            return Err(BudgetError::NotPositive("max_depth"));
        }
        if self.max_chords == 0 {
            return Err(BudgetError::NotPositive("max_chords"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum TrivialityVerdict {
    Trivial { certificate: Certificate },
    Unknown,
}

impl TrivialityVerdict {
    pub fn is_trivial(&self) -> bool {
        matches!(self, TrivialityVerdict::Trivial { .. })
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            TrivialityVerdict::Trivial { certificate } => Some(certificate),
            TrivialityVerdict::Unknown => None,
        }
    }
}

struct Node {
    code: GaussCode,
    key: Vec<u16>,
    parent: Option<(usize, Move)>,
}

/// Breadth-first search over equivalence moves for a code that is
/// descending in either orientation.
///
/// Each layer is expanded in parallel and merged in frontier order, so the
/// result does not depend on the thread count. `max_nodes` caps the number of
/// distinct codes (up to relabeling) ever recorded.
pub fn bounded_trivialize(code: &GaussCode, budget: &SearchBudget) -> Result<TrivialityVerdict, BudgetError> {
    bounded_trivialize_with(code, budget, MoveRules::default())
}

/// [`bounded_trivialize`] under explicit move rules.
pub fn bounded_trivialize_with(
    code: &GaussCode,
    budget: &SearchBudget,
    rules: MoveRules,
) -> Result<TrivialityVerdict, BudgetError> {
    budget.validate()?;
    if let Some(certificate) = direct_certificate(code) {
        return Ok(TrivialityVerdict::Trivial { certificate });
    }
    let policy = InsertionPolicy { max_chords: budget.max_chords, rules };
    let mut nodes = vec![Node { code: code.clone(), key: code.compact_key(), parent: None }];
    let mut memo: HashMap<Vec<u16>, usize> = HashMap::new();
    memo.insert(nodes[0].key.clone(), 0);
    let mut frontier = vec![0usize];
    for _ in 0..budget.max_depth {
        if frontier.is_empty() {
            break;
        }
        let expansions: Vec<Vec<(Move, GaussCode, Vec<u16>, bool)>> = frontier
            .par_iter()
            .map(|&i| successors(&nodes[i].code, &policy))
            .collect();
        let mut next = Vec::new();
        for (&parent, succs) in frontier.iter().zip(expansions) {
            for (mv, child, key, done) in succs {
                if memo.contains_key(&key) {
                    continue;
                }
                if memo.len() >= budget.max_nodes {
                    return Ok(TrivialityVerdict::Unknown);
                }
                let idx = nodes.len();
                memo.insert(key.clone(), idx);
                nodes.push(Node { code: child, key, parent: Some((parent, mv)) });
                if done {
                    return Ok(TrivialityVerdict::Trivial { certificate: path_certificate(&nodes, idx, rules) });
                }
                next.push(idx);
            }
        }
        next.sort_by(|&a, &b| nodes[a].key.cmp(&nodes[b].key));
        frontier = next;
    }
    Ok(TrivialityVerdict::Unknown)
}

fn successors(code: &GaussCode, policy: &InsertionPolicy) -> Vec<(Move, GaussCode, Vec<u16>, bool)> {
    crate::moves::legal_moves(code, &MoveKind::EQUIVALENCE, policy)
        .into_iter()
        .map(|mv| {
            let child = crate::moves::apply_move_with(code, &mv, policy.rules).expect("generated moves are legal");
            let key = child.compact_key();
            let done = directly_trivial(&child);
            (mv, child, key, done)
        })
        .collect()
}

fn path_certificate(nodes: &[Node], mut idx: usize, rules: MoveRules) -> Certificate {
    let end = idx;
    let mut moves = Vec::new();
    while let Some((parent, mv)) = nodes[idx].parent {
        moves.push(mv);
        idx = parent;
    }
    let mut builder = CertificateBuilder::with_rules(nodes[idx].code.clone(), rules);
    for mv in moves.into_iter().rev() {
        builder.push(mv).expect("recorded path replays");
    }
    debug_assert_eq!(builder.current(), &nodes[end].code);
    let tail = direct_certificate(&nodes[end].code).expect("search stops at directly trivial codes");
    builder.extend(&tail).expect("tail certificate replays");
    builder.finish()
}
