//! Base points, warping crossings and warping degrees.
//!
//! A base point sits in one of the gaps between consecutive passages. Gap `b`
//! lies immediately before passage `b + 1`; the gap after the last passage is
//! identified with gap 0 because the traversal from either one visits the
//! passages in the same order. A code with `n >= 1` chords therefore has `2n`
//! base classes, and the empty code has one.
//!
//! The traversal from a base point runs to the head, jumps back to the tail,
//! and continues up to the base point.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauss::{ChordId, CyclicGaussCode, GaussCode, Passage, Role};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WarpingError {
    #[error("base class {base} out of range (code has {count} classes)")]
    BaseOutOfRange { base: usize, count: usize },
    #[error("chord {0} does not occur in the code")]
    UnknownChord(ChordId),
}

/// How the alternation test treats the tail/head boundary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alternation {
    /// Roles must alternate around the cycle, including last→first.
    #[default]
    Cyclic,
    /// Only consecutive positions 1..2n are compared.
    Linear,
}

pub fn base_class_count(code: &GaussCode) -> usize {
    code.len().max(1)
}

/// Image of base class `b` of `D` as a class of `-D` (same physical gap).
pub fn reversed_class(code: &GaussCode, b: usize) -> usize {
    let len = code.len();
    if len == 0 {
        0
    } else {
        (len - b) % len
    }
}

fn check_base(code: &GaussCode, b: usize) -> Result<(), WarpingError> {
    let count = base_class_count(code);
    if b >= count {
        Err(WarpingError::BaseOutOfRange { base: b, count })
    } else {
        Ok(())
    }
}

/// Passage order seen from a base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Traversal {
    pub base: usize,
    /// 1-based positions in visiting order.
    pub order: Vec<usize>,
    /// Number of passages visited before the head→tail jump.
    pub before_break: usize,
}

impl Traversal {
    pub fn passages<'a>(&'a self, code: &'a GaussCode) -> impl Iterator<Item = &'a Passage> + 'a {
        self.order.iter().map(move |&p| &code.passages()[p - 1])
    }
}

pub fn traversal(code: &GaussCode, b: usize) -> Result<Traversal, WarpingError> {
    check_base(code, b)?;
    let len = code.len();
    let order = (b + 1..=len).chain(1..=b).collect();
    Ok(Traversal { base: b, order, before_break: len - b })
}

/// Chords first met at their under passage when walking from base class `b`.
pub fn warping_crossings(code: &GaussCode, b: usize) -> Result<BTreeSet<ChordId>, WarpingError> {
    let t = traversal(code, b)?;
    let mut met: BTreeSet<ChordId> = BTreeSet::new();
    let mut warping = BTreeSet::new();
    for p in t.passages(code) {
        if met.insert(p.chord) && p.role == Role::Under {
            warping.insert(p.chord);
        }
    }
    Ok(warping)
}

pub fn warping_degree_at(code: &GaussCode, b: usize) -> Result<usize, WarpingError> {
    Ok(warping_crossings(code, b)?.len())
}

/// `d(D_b)` for every base class, in class order.
pub fn degree_profile(code: &GaussCode) -> Vec<usize> {
    (0..base_class_count(code))
        .map(|b| warping_degree_at(code, b).expect("class in range"))
        .collect()
}

/// `d(D)`: minimum over base classes.
pub fn warping_degree(code: &GaussCode) -> usize {
    degree_profile(code).into_iter().min().unwrap_or(0)
}

/// Some base class of minimal degree (the smallest index).
pub fn minimizing_class(code: &GaussCode) -> usize {
    let profile = degree_profile(code);
    let min = profile.iter().copied().min().unwrap_or(0);
    profile.iter().position(|&d| d == min).unwrap_or(0)
}

/// Arc numbers along the traversal from a base point.
///
/// Cutting at the base point, at every under passage and at the head→tail
/// jump splits the diagram into `n + 2` arcs, numbered from 1 starting at the
/// base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcLabeling {
    /// Per 1-based position (index `pos - 1`): the arc an over passage lies
    /// on, or the arc that an under passage ends.
    pub label: Vec<usize>,
    pub arc_count: usize,
}

pub fn arc_labels(code: &GaussCode, b: usize) -> Result<ArcLabeling, WarpingError> {
    let t = traversal(code, b)?;
    let mut label = vec![0; code.len()];
    let mut arc = 1;
    for (step, &pos) in t.order.iter().enumerate() {
        if step == t.before_break {
            arc += 1;
        }
        label[pos - 1] = arc;
        if code.passages()[pos - 1].role == Role::Under {
            arc += 1;
        }
    }
    if t.before_break == t.order.len() {
        // jump after the last visited passage
        arc += 1;
    }
    Ok(ArcLabeling { label, arc_count: arc })
}

/// `2α − β − γ` for a chord: α is the arc of its over passage, and its under
/// passage separates arcs β and γ = β + 1. Always odd.
pub fn cutting_number(code: &GaussCode, b: usize, chord: ChordId) -> Result<i64, WarpingError> {
    check_base(code, b)?;
    let (over, under, _) = code.chord_info(chord).ok_or(WarpingError::UnknownChord(chord))?;
    let arcs = arc_labels(code, b)?;
    let alpha = arcs.label[over - 1] as i64;
    let beta = arcs.label[under - 1] as i64;
    Ok(2 * alpha - beta - (beta + 1))
}

pub fn is_alternating(code: &GaussCode, convention: Alternation) -> bool {
    let ps = code.passages();
    if ps.is_empty() {
        return true;
    }
    let linear_ok = ps.windows(2).all(|w| w[0].role != w[1].role);
    match convention {
        Alternation::Linear => linear_ok,
        Alternation::Cyclic => linear_ok && ps[0].role != ps[ps.len() - 1].role,
    }
}

/// Descending (equivalently, monotone): some base class has degree 0.
pub fn is_descending(code: &GaussCode) -> bool {
    warping_degree(code) == 0
}

/// Quick `(min, max)` of the degree profile using the ±1 steps between
/// adjacent classes. Used on the search hot path; the profile-based
/// functions above are the reference.
pub(crate) fn degree_extremes(code: &GaussCode) -> (usize, usize) {
    let ps = code.passages();
    if ps.is_empty() {
        return (0, 0);
    }
    // d at class 0: chords whose under passage comes first in linear order
    let mut over_seen = HashSet::with_capacity(ps.len() / 2);
    let mut d0: i64 = 0;
    for p in ps {
        match p.role {
            Role::Over => {
                over_seen.insert(p.chord);
            }
            Role::Under => {
                if !over_seen.contains(&p.chord) {
                    d0 += 1;
                }
            }
        }
    }
    let (mut lo, mut hi, mut d) = (d0, d0, d0);
    for p in &ps[..ps.len() - 1] {
        d += if p.role == Role::Over { 1 } else { -1 };
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (lo as usize, hi as usize)
}

/// Half of `cr(D) − 1`, kept exact as a numerator over 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfBound {
    pub twice: usize,
}

impl HalfBound {
    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

/// Diagram-level upper bounds on both unknotting numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknottingBounds {
    /// `min(d(D), d(−D))`.
    pub warping_bound: usize,
    /// `(cr − 1)/2`; `None` for the crossingless diagram.
    pub half_crossing_bound: Option<HalfBound>,
}

pub fn unknotting_upper_bounds(code: &GaussCode) -> UnknottingBounds {
    let cr = code.crossing_count();
    UnknottingBounds {
        warping_bound: warping_degree(code).min(warping_degree(&code.reverse())),
        half_crossing_bound: cr.checked_sub(1).map(|twice| HalfBound { twice }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub cr: usize,
    pub d_at: Vec<usize>,
    pub d: usize,
    pub d_rev: usize,
    pub alternating: bool,
    pub descending: bool,
    pub bound_warping: usize,
    pub bound_half_cr: Option<f64>,
}

pub fn report(code: &GaussCode, convention: Alternation) -> InvariantReport {
    let d_at = degree_profile(code);
    let d = d_at.iter().copied().min().unwrap_or(0);
    let d_rev = warping_degree(&code.reverse());
    let bounds = unknotting_upper_bounds(code);
    InvariantReport {
        cr: code.crossing_count(),
        d,
        d_rev,
        alternating: is_alternating(code, convention),
        descending: d == 0,
        bound_warping: bounds.warping_bound,
        bound_half_cr: bounds.half_crossing_bound.map(HalfBound::value),
        d_at,
    }
}

/// Warping degree of a welded knot diagram: minimum over the `2n` gaps of the
/// number of chords first met at their under passage, walking once around.
pub fn cyclic_warping_degree(code: &CyclicGaussCode) -> usize {
    let ps = code.passages();
    let len = ps.len();
    (0..len.max(1))
        .map(|gap| {
            let mut met = BTreeSet::new();
            (0..len)
                .map(|k| &ps[(gap + k) % len])
                .filter(|p| met.insert(p.chord) && p.role == Role::Under)
                .count()
        })
        .min()
        .unwrap_or(0)
}
