//! Upper bounds for unknotting by crossing changes or virtualizations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, CertificateBuilder};
use crate::gauss::{ChordId, GaussCode};
use crate::moves::Move;
use crate::simplify::{bounded_trivialize, descending_certificate, BudgetError, SearchBudget};
use crate::warping;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Change,
    Virtualize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub chords: Vec<ChordId>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknotResult {
    pub op_kind: OpKind,
    pub upper_bound: usize,
    /// True only for `upper_bound = 0`, where triviality is witnessed.
    pub exact: bool,
    pub witness: Witness,
    /// Every modification set smaller than this was searched without success.
    pub exhaustive_below: usize,
    pub budget_used: Option<SearchBudget>,
}

fn modification(code: &GaussCode, op: OpKind, chord: ChordId) -> Move {
    match op {
        OpKind::Change => Move::CrossingChange { chord },
        OpKind::Virtualize => {
            let (over_at, under_at, _) = code.chord_info(chord).expect("chord present");
            Move::Virtualize { chord, over_at, under_at }
        }
    }
}

fn modify(code: &GaussCode, op: OpKind, chords: &[ChordId]) -> CertificateBuilder {
    let mut builder = CertificateBuilder::new(code.clone());
    for &chord in chords {
        let mv = modification(builder.current(), op, chord);
        builder.push(mv).expect("chord present");
    }
    builder
}

/// Modifies the warping crossings at a minimizing class of `code` or of its
/// reverse, whichever is smaller, then reduces the resulting monotone code.
pub fn warping_unknot_certificate(code: &GaussCode, op: OpKind) -> UnknotResult {
    let rev = code.reverse();
    let (d, d_rev) = (warping::warping_degree(code), warping::warping_degree(&rev));
    let use_reverse = d_rev < d;
    let oriented = if use_reverse { &rev } else { code };
    let b = warping::minimizing_class(oriented);
    let chords: Vec<ChordId> = warping::warping_crossings(oriented, b).expect("class in range").into_iter().collect();
    let mut builder = modify(code, op, &chords);
    let modified = builder.current().clone();
    let tail = if use_reverse {
        let modified_rev = modified.reverse();
        let b_rev = warping::minimizing_class(&modified_rev);
        descending_certificate(&modified_rev, b_rev)
            .expect("warping crossings were modified")
            .reversed()
            .expect("move set is closed under reversal")
    } else {
        descending_certificate(&modified, warping::minimizing_class(&modified)).expect("warping crossings were modified")
    };
    builder.extend(&tail).expect("tail starts at the modified code");
    let upper_bound = chords.len();
    UnknotResult {
        op_kind: op,
        upper_bound,
        exact: upper_bound == 0,
        witness: Witness { chords, certificate: builder.finish() },
        exhaustive_below: 0,
        budget_used: None,
    }
}

/// Tries every `k`-subset of chords for `k = 0, 1, …, max_k` in
/// lexicographic order and keeps the first whose modified code the bounded
/// search trivializes. Subsets of one size are searched in parallel; the
/// reported witness is the first success in order. The warping subset makes
/// the code descending in one orientation, so the loop stops by size
/// `d(D)`. If `max_k` is smaller and nothing succeeds, the warping witness is
/// returned with `exhaustive_below = max_k + 1`.
pub fn unknot_search(
    code: &GaussCode,
    op: OpKind,
    max_k: usize,
    budget: &SearchBudget,
) -> Result<UnknotResult, BudgetError> {
    budget.validate()?;
    let seed = warping_unknot_certificate(code, op);
    let chords = code.chords();
    for k in 0..=max_k.min(chords.len()) {
        if let Some(found) = first_success(code, op, &chords, k, budget)? {
            return Ok(finish(op, k, found, budget));
        }
    }
    Ok(UnknotResult { exhaustive_below: max_k.min(chords.len()) + 1, budget_used: Some(*budget), ..seed })
}

fn finish(op: OpKind, k: usize, witness: Witness, budget: &SearchBudget) -> UnknotResult {
    UnknotResult {
        op_kind: op,
        upper_bound: k,
        exact: k == 0,
        witness,
        exhaustive_below: k,
        budget_used: Some(*budget),
    }
}

fn first_success(
    code: &GaussCode,
    op: OpKind,
    chords: &[ChordId],
    k: usize,
    budget: &SearchBudget,
) -> Result<Option<Witness>, BudgetError> {
    let subsets = k_subsets(chords, k);
    let found = subsets.par_iter().find_map_first(|subset| {
        let mut builder = modify(code, op, subset);
        let verdict = bounded_trivialize(builder.current(), budget).expect("budget validated");
        verdict.certificate().map(|tail| {
            builder.extend(tail).expect("tail starts at the modified code");
            Witness { chords: subset.clone(), certificate: builder.finish() }
        })
    });
    Ok(found)
}

/// All `k`-subsets of `items` in lexicographic order.
pub fn k_subsets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let n = items.len();
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureData {
    pub cyclic_d: usize,
    /// A monotone closure has unknotting number and welded unknotting
    /// number zero.
    pub monotone_closure: bool,
}

pub fn closure_unknot_data(code: &GaussCode) -> ClosureData {
    let cyclic_d = warping::cyclic_warping_degree(&code.virtual_closure());
    ClosureData { cyclic_d, monotone_closure: cyclic_d == 0 }
}
