//! Diagram moves realized as Gauss-code rewrites.
//!
//! Positions are 1-based. Every descriptor of an addition/removal pair refers
//! to positions in the *larger* of the two codes, so a removal and the
//! addition that undoes it carry the same descriptor. Pairs of adjacent
//! positions never wrap from the head back to the tail.
//!
//! | kind | effect on the Gauss code |
//! |------|--------------------------|
//! | `R1Add`/`R1Remove` | a chord whose two passages are adjacent |
//! | `R2Add`/`R2Remove` | two opposite-sign chords, over passages adjacent at one site and under passages adjacent at another |
//! | `R3` | three adjacent pairs forming an oriented triangle, each pair transposed |
//! | `FOverSwap` | transposes two adjacent over passages |
//! | `FPlusAdd`/`FPlusRemove` | a chord whose over passage is next to the tail or the head |
//! | `CrossingChange` | swaps the roles of one chord and negates its sign |
//! | `Virtualize` | deletes one chord |

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauss::{ChordId, GaussCode, Passage, Role, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Tail,
    Head,
}

impl End {
    pub fn flip(self) -> End {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }
}

/// A trivial chord: passages at `at` and `at + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Kink {
    pub at: usize,
    pub chord: ChordId,
    /// Role of the passage at `at`.
    pub first: Role,
    pub sign: Sign,
}

/// Two chords of a second Reidemeister move.
///
/// Over passages `O_first O_second` sit at `over_at, over_at + 1`. The under
/// passages sit at `under_at, under_at + 1`, in the order `U_first U_second`
/// when `parallel` and `U_second U_first` otherwise. `second` has sign
/// `-first_sign`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bigon {
    pub over_at: usize,
    pub under_at: usize,
    pub first: ChordId,
    pub second: ChordId,
    pub first_sign: Sign,
    pub parallel: bool,
}

/// Three chords of a third Reidemeister move.
///
/// `a` crosses the top strand over the middle one, `b` the top over the
/// bottom, `c` the middle over the bottom. The top strand holds `{O_a, O_b}`
/// at `top_at, top_at + 1`, the middle strand `{U_a, O_c}` at `mid_at`, the
/// bottom strand `{U_b, U_c}` at `bot_at`. The order inside each pair is read
/// from the code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triangle {
    pub top_at: usize,
    pub mid_at: usize,
    pub bot_at: usize,
    pub a: ChordId,
    pub b: ChordId,
    pub c: ChordId,
}

/// A chord whose over passage abuts an endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EndChord {
    pub end: End,
    pub over_at: usize,
    pub under_at: usize,
    pub chord: ChordId,
    pub sign: Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Move {
    R1Add(Kink),
    R1Remove(Kink),
    R2Add(Bigon),
    R2Remove(Bigon),
    R3(Triangle),
    FOverSwap { at: usize },
    FPlusAdd(EndChord),
    FPlusRemove(EndChord),
    CrossingChange { chord: ChordId },
    Virtualize { chord: ChordId, over_at: usize, under_at: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    R1Add,
    R1Remove,
    R2Add,
    R2Remove,
    R3,
    FOverSwap,
    FPlusAdd,
    FPlusRemove,
    CrossingChange,
    Virtualize,
}

impl MoveKind {
    /// Moves that preserve the plus-welded knotoid.
    pub const EQUIVALENCE: [MoveKind; 8] = [
        MoveKind::R1Remove,
        MoveKind::FPlusRemove,
        MoveKind::R2Remove,
        MoveKind::FOverSwap,
        MoveKind::R3,
        MoveKind::R1Add,
        MoveKind::FPlusAdd,
        MoveKind::R2Add,
    ];

    pub fn is_equivalence(self) -> bool {
        !matches!(self, MoveKind::CrossingChange | MoveKind::Virtualize)
    }
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::R1Add(_) => MoveKind::R1Add,
            Move::R1Remove(_) => MoveKind::R1Remove,
            Move::R2Add(_) => MoveKind::R2Add,
            Move::R2Remove(_) => MoveKind::R2Remove,
            Move::R3(_) => MoveKind::R3,
            Move::FOverSwap { .. } => MoveKind::FOverSwap,
            Move::FPlusAdd(_) => MoveKind::FPlusAdd,
            Move::FPlusRemove(_) => MoveKind::FPlusRemove,
            Move::CrossingChange { .. } => MoveKind::CrossingChange,
            Move::Virtualize { .. } => MoveKind::Virtualize,
        }
    }

    /// Change in the number of chords.
    pub fn chord_delta(&self) -> i32 {
        match self {
            Move::R1Add(_) | Move::FPlusAdd(_) => 1,
            Move::R2Add(_) => 2,
            Move::R1Remove(_) | Move::FPlusRemove(_) | Move::Virtualize { .. } => -1,
            Move::R2Remove(_) => -2,
            Move::R3(_) | Move::FOverSwap { .. } | Move::CrossingChange { .. } => 0,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::R1Add(k) => write!(f, "R1Add(chord {} at {})", k.chord, k.at),
            Move::R1Remove(k) => write!(f, "R1Remove(chord {} at {})", k.chord, k.at),
            Move::R2Add(g) => write!(f, "R2Add(chords {},{} at {}/{})", g.first, g.second, g.over_at, g.under_at),
            Move::R2Remove(g) => write!(f, "R2Remove(chords {},{} at {}/{})", g.first, g.second, g.over_at, g.under_at),
            Move::R3(t) => write!(f, "R3(chords {},{},{})", t.a, t.b, t.c),
            Move::FOverSwap { at } => write!(f, "FOverSwap({},{})", at, at + 1),
            Move::FPlusAdd(e) => write!(f, "FPlusAdd(chord {} at {:?})", e.chord, e.end),
            Move::FPlusRemove(e) => write!(f, "FPlusRemove(chord {} at {:?})", e.chord, e.end),
            Move::CrossingChange { chord } => write!(f, "CrossingChange(chord {chord})"),
            Move::Virtualize { chord, .. } => write!(f, "Virtualize(chord {chord})"),
        }
    }
}

/// Why a move does not apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IllegalReason {
    PositionOutOfRange,
    SitesOverlap,
    PassageMismatch,
    NotOverPair,
    UnknownChord,
    LabelInUse,
    ChordsNotDistinct,
    NotATile,
    NotAtEndpoint,
    UndeclaredModification,
}

impl fmt::Display for IllegalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            IllegalReason::PositionOutOfRange => "position out of range",
            IllegalReason::SitesOverlap => "sites overlap",
            IllegalReason::PassageMismatch => "passage does not match the move",
            IllegalReason::NotOverPair => "positions are not two over passages",
            IllegalReason::UnknownChord => "chord does not occur",
            IllegalReason::LabelInUse => "new chord label is already used or zero",
            IllegalReason::ChordsNotDistinct => "chords must be distinct",
            IllegalReason::NotATile => "orders and signs do not form an oriented triangle",
            IllegalReason::NotAtEndpoint => "over passage does not abut the endpoint",
            IllegalReason::UndeclaredModification => "modification step not declared in flags",
        };
        f.write_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("illegal move {mv}: {reason}")]
    IllegalMove { mv: Move, reason: IllegalReason },
    #[error("{0} has no inverse")]
    NotInvertible(Move),
}

/// Which reading of the endpoint move is accepted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FPlusMode {
    /// The over passage sits literally at position 1 or `2n`.
    #[default]
    Strict,
    /// Only under passages lie between the endpoint and the over passage.
    Permissive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveRules {
    pub fplus: FPlusMode,
}

/// One row of the oriented third-move table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct R3Tile {
    pub top_a_first: bool,
    pub mid_a_first: bool,
    pub bot_b_first: bool,
    /// Signs of `a`, `b`, `c`.
    pub signs: [i8; 3],
}

/// Every oriented triangle of three strands. Transposing all three pairs
/// maps a row to the row with all three orders flipped and the same signs.
pub const R3_TILES: [R3Tile; 16] = [
    R3Tile { top_a_first: true, mid_a_first: true, bot_b_first: true, signs: [-1, -1, -1] },
    R3Tile { top_a_first: true, mid_a_first: true, bot_b_first: true, signs: [1, 1, 1] },
    R3Tile { top_a_first: true, mid_a_first: true, bot_b_first: false, signs: [-1, 1, 1] },
    R3Tile { top_a_first: true, mid_a_first: true, bot_b_first: false, signs: [1, -1, -1] },
    R3Tile { top_a_first: true, mid_a_first: false, bot_b_first: true, signs: [-1, 1, -1] },
    R3Tile { top_a_first: true, mid_a_first: false, bot_b_first: true, signs: [1, -1, 1] },
    R3Tile { top_a_first: true, mid_a_first: false, bot_b_first: false, signs: [-1, -1, 1] },
    R3Tile { top_a_first: true, mid_a_first: false, bot_b_first: false, signs: [1, 1, -1] },
    R3Tile { top_a_first: false, mid_a_first: true, bot_b_first: true, signs: [-1, -1, 1] },
    R3Tile { top_a_first: false, mid_a_first: true, bot_b_first: true, signs: [1, 1, -1] },
    R3Tile { top_a_first: false, mid_a_first: true, bot_b_first: false, signs: [-1, 1, -1] },
    R3Tile { top_a_first: false, mid_a_first: true, bot_b_first: false, signs: [1, -1, 1] },
    R3Tile { top_a_first: false, mid_a_first: false, bot_b_first: true, signs: [-1, 1, 1] },
    R3Tile { top_a_first: false, mid_a_first: false, bot_b_first: true, signs: [1, -1, -1] },
    R3Tile { top_a_first: false, mid_a_first: false, bot_b_first: false, signs: [-1, -1, -1] },
    R3Tile { top_a_first: false, mid_a_first: false, bot_b_first: false, signs: [1, 1, 1] },
];

pub fn is_r3_tile(top_a_first: bool, mid_a_first: bool, bot_b_first: bool, signs: [Sign; 3]) -> bool {
    let signs = signs.map(Sign::value);
    R3_TILES.iter().any(|t| {
        t.top_a_first == top_a_first
            && t.mid_a_first == mid_a_first
            && t.bot_b_first == bot_b_first
            && t.signs == signs
    })
}

pub fn apply_move(code: &GaussCode, mv: &Move) -> Result<GaussCode, MoveError> {
    apply_move_with(code, mv, MoveRules::default())
}

pub fn apply_move_with(code: &GaussCode, mv: &Move, rules: MoveRules) -> Result<GaussCode, MoveError> {
    rewrite(code, mv, rules)
        .map(GaussCode::from_valid)
        .map_err(|reason| MoveError::IllegalMove { mv: *mv, reason })
}

type Rewrite = Result<Vec<Passage>, IllegalReason>;

fn rewrite(code: &GaussCode, mv: &Move, rules: MoveRules) -> Rewrite {
    match mv {
        Move::R1Remove(k) => {
            let items = kink_items(k);
            expect_all(code, &items)?;
            Ok(remove_positions(code, &items))
        }
        Move::R1Add(k) => {
            fresh(code, &[k.chord])?;
            insert_positions(code, &kink_items(k))
        }
        Move::R2Remove(g) => {
            let items = bigon_items(g)?;
            expect_all(code, &items)?;
            Ok(remove_positions(code, &items))
        }
        Move::R2Add(g) => {
            fresh(code, &[g.first, g.second])?;
            insert_positions(code, &bigon_items(g)?)
        }
        Move::R3(t) => apply_triangle(code, t),
        Move::FOverSwap { at } => {
            let len = code.len();
            if *at == 0 || at + 1 > len {
                return Err(IllegalReason::PositionOutOfRange);
            }
            let mut ps = code.passages().to_vec();
            if !(ps[at - 1].is_over() && ps[*at].is_over()) {
                return Err(IllegalReason::NotOverPair);
            }
            ps.swap(at - 1, *at);
            Ok(ps)
        }
        Move::FPlusRemove(e) => {
            let items = end_items(e);
            expect_all(code, &items)?;
            check_endpoint(code.passages(), e, rules)?;
            Ok(remove_positions(code, &items))
        }
        Move::FPlusAdd(e) => {
            fresh(code, &[e.chord])?;
            let ps = insert_positions(code, &end_items(e))?;
            check_endpoint(&ps, e, rules)?;
            Ok(ps)
        }
        Move::CrossingChange { chord } => {
            if !code.contains_chord(*chord) {
                return Err(IllegalReason::UnknownChord);
            }
            Ok(code
                .passages()
                .iter()
                .map(|p| {
                    if p.chord == *chord {
                        Passage { chord: p.chord, role: p.role.flip(), sign: p.sign.negate() }
                    } else {
                        *p
                    }
                })
                .collect())
        }
        Move::Virtualize { chord, over_at, under_at } => {
            let (over, under, sign) = code.chord_info(*chord).ok_or(IllegalReason::UnknownChord)?;
            let items = [
                (*over_at, Passage { chord: *chord, role: Role::Over, sign }),
                (*under_at, Passage { chord: *chord, role: Role::Under, sign }),
            ];
            expect_all(code, &items)?;
            debug_assert_eq!((over, under), (*over_at, *under_at));
            Ok(remove_positions(code, &items))
        }
    }
}

fn kink_items(k: &Kink) -> [(usize, Passage); 2] {
    [
        (k.at, Passage { chord: k.chord, role: k.first, sign: k.sign }),
        (k.at + 1, Passage { chord: k.chord, role: k.first.flip(), sign: k.sign }),
    ]
}

fn bigon_items(g: &Bigon) -> Result<[(usize, Passage); 4], IllegalReason> {
    if g.first == g.second {
        return Err(IllegalReason::ChordsNotDistinct);
    }
    if g.over_at.abs_diff(g.under_at) < 2 {
        return Err(IllegalReason::SitesOverlap);
    }
    let s1 = g.first_sign;
    let s2 = s1.negate();
    let (u1, u2) = if g.parallel { (g.first, g.second) } else { (g.second, g.first) };
    let sign_of = |c: ChordId| if c == g.first { s1 } else { s2 };
    Ok([
        (g.over_at, Passage { chord: g.first, role: Role::Over, sign: s1 }),
        (g.over_at + 1, Passage { chord: g.second, role: Role::Over, sign: s2 }),
        (g.under_at, Passage { chord: u1, role: Role::Under, sign: sign_of(u1) }),
        (g.under_at + 1, Passage { chord: u2, role: Role::Under, sign: sign_of(u2) }),
    ])
}

fn end_items(e: &EndChord) -> [(usize, Passage); 2] {
    [
        (e.over_at, Passage { chord: e.chord, role: Role::Over, sign: e.sign }),
        (e.under_at, Passage { chord: e.chord, role: Role::Under, sign: e.sign }),
    ]
}

/// `ps` is the larger code (the one containing the chord).
fn check_endpoint(ps: &[Passage], e: &EndChord, rules: MoveRules) -> Result<(), IllegalReason> {
    let len = ps.len();
    let ok = match (rules.fplus, e.end) {
        (FPlusMode::Strict, End::Tail) => e.over_at == 1,
        (FPlusMode::Strict, End::Head) => e.over_at == len,
        (FPlusMode::Permissive, End::Tail) => ps[..e.over_at - 1].iter().all(Passage::is_under),
        (FPlusMode::Permissive, End::Head) => ps[e.over_at..].iter().all(Passage::is_under),
    };
    if ok {
        Ok(())
    } else {
        Err(IllegalReason::NotAtEndpoint)
    }
}

fn expect_all(code: &GaussCode, items: &[(usize, Passage)]) -> Result<(), IllegalReason> {
    if items.iter().any(|(pos, _)| code.at(*pos).is_none()) {
        return Err(IllegalReason::PositionOutOfRange);
    }
    if items.iter().any(|(pos, want)| code.at(*pos) != Some(want)) {
        return Err(IllegalReason::PassageMismatch);
    }
    Ok(())
}

fn fresh(code: &GaussCode, labels: &[ChordId]) -> Result<(), IllegalReason> {
    if labels.iter().any(|c| c.0 == 0 || code.contains_chord(*c)) {
        Err(IllegalReason::LabelInUse)
    } else {
        Ok(())
    }
}

fn remove_positions(code: &GaussCode, items: &[(usize, Passage)]) -> Vec<Passage> {
    code.passages()
        .iter()
        .enumerate()
        .filter(|(i, _)| !items.iter().any(|(pos, _)| *pos == i + 1))
        .map(|(_, p)| *p)
        .collect()
}

/// Places `items` at their positions in a result of length `len + items`,
/// filling the remaining slots with the old passages in order.
fn insert_positions(code: &GaussCode, items: &[(usize, Passage)]) -> Rewrite {
    let total = code.len() + items.len();
    let mut slots: Vec<Option<Passage>> = vec![None; total];
    for (pos, p) in items {
        if *pos == 0 || *pos > total {
            return Err(IllegalReason::PositionOutOfRange);
        }
        if slots[pos - 1].replace(*p).is_some() {
            return Err(IllegalReason::SitesOverlap);
        }
    }
    let mut old = code.passages().iter();
    Ok(slots
        .into_iter()
        .map(|s| s.unwrap_or_else(|| *old.next().expect("slot count matches")))
        .collect())
}

fn apply_triangle(code: &GaussCode, t: &Triangle) -> Rewrite {
    if t.a == t.b || t.a == t.c || t.b == t.c {
        return Err(IllegalReason::ChordsNotDistinct);
    }
    let len = code.len();
    let sites = [t.top_at, t.mid_at, t.bot_at];
    if sites.iter().any(|&s| s == 0 || s + 1 > len) {
        return Err(IllegalReason::PositionOutOfRange);
    }
    if t.top_at.abs_diff(t.mid_at) < 2 || t.top_at.abs_diff(t.bot_at) < 2 || t.mid_at.abs_diff(t.bot_at) < 2 {
        return Err(IllegalReason::SitesOverlap);
    }
    let ps = code.passages();
    // returns whether `x` comes first in the pair at `at`
    let pair = |at: usize, x: (ChordId, Role), y: (ChordId, Role)| -> Result<bool, IllegalReason> {
        let (p, q) = (&ps[at - 1], &ps[at]);
        let key = |p: &Passage| (p.chord, p.role);
        if key(p) == x && key(q) == y {
            Ok(true)
        } else if key(p) == y && key(q) == x {
            Ok(false)
        } else {
            Err(IllegalReason::PassageMismatch)
        }
    };
    let top_a_first = pair(t.top_at, (t.a, Role::Over), (t.b, Role::Over))?;
    let mid_a_first = pair(t.mid_at, (t.a, Role::Under), (t.c, Role::Over))?;
    let bot_b_first = pair(t.bot_at, (t.b, Role::Under), (t.c, Role::Under))?;
    let sign = |c: ChordId| code.chord_info(c).map(|(_, _, s)| s).expect("chord present");
    if !is_r3_tile(top_a_first, mid_a_first, bot_b_first, [sign(t.a), sign(t.b), sign(t.c)]) {
        return Err(IllegalReason::NotATile);
    }
    let mut out = ps.to_vec();
    for at in sites {
        out.swap(at - 1, at);
    }
    Ok(out)
}

/// The move undoing `mv`.
pub fn invert_move(mv: &Move) -> Result<Move, MoveError> {
    Ok(match *mv {
        Move::R1Add(k) => Move::R1Remove(k),
        Move::R1Remove(k) => Move::R1Add(k),
        Move::R2Add(g) => Move::R2Remove(g),
        Move::R2Remove(g) => Move::R2Add(g),
        Move::FPlusAdd(e) => Move::FPlusRemove(e),
        Move::FPlusRemove(e) => Move::FPlusAdd(e),
        Move::R3(_) | Move::FOverSwap { .. } | Move::CrossingChange { .. } => *mv,
        Move::Virtualize { .. } => return Err(MoveError::NotInvertible(*mv)),
    })
}

/// The same move seen on the reversed code `-D`, where `len` is the length
/// of the code the move is applied to.
///
/// The move set is closed under reversal, so a rewrite sequence for `D`
/// transports to one for `-D`.
pub fn reverse_move(mv: &Move, len: usize) -> Move {
    let big = (len as i64 + 2 * mv.chord_delta().max(0) as i64) as usize;
    let pair = |at: usize| big - at;
    let point = |p: usize| big + 1 - p;
    match *mv {
        Move::R1Add(k) | Move::R1Remove(k) => {
            let k2 = Kink { at: pair(k.at), first: k.first.flip(), ..k };
            if matches!(mv, Move::R1Add(_)) {
                Move::R1Add(k2)
            } else {
                Move::R1Remove(k2)
            }
        }
        Move::R2Add(g) | Move::R2Remove(g) => {
            let g2 = Bigon {
                over_at: pair(g.over_at),
                under_at: pair(g.under_at),
                first: g.second,
                second: g.first,
                first_sign: g.first_sign.negate(),
                parallel: g.parallel,
            };
            if matches!(mv, Move::R2Add(_)) {
                Move::R2Add(g2)
            } else {
                Move::R2Remove(g2)
            }
        }
        Move::R3(t) => Move::R3(Triangle { top_at: pair(t.top_at), mid_at: pair(t.mid_at), bot_at: pair(t.bot_at), ..t }),
        Move::FOverSwap { at } => Move::FOverSwap { at: pair(at) },
        Move::FPlusAdd(e) | Move::FPlusRemove(e) => {
            let e2 = EndChord { end: e.end.flip(), over_at: point(e.over_at), under_at: point(e.under_at), ..e };
            if matches!(mv, Move::FPlusAdd(_)) {
                Move::FPlusAdd(e2)
            } else {
                Move::FPlusRemove(e2)
            }
        }
        Move::CrossingChange { chord } => Move::CrossingChange { chord },
        Move::Virtualize { chord, over_at, under_at } => {
            Move::Virtualize { chord, over_at: point(over_at), under_at: point(under_at) }
        }
    }
}

/// Bounds and rules for generating move instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InsertionPolicy {
    /// Addition moves are generated only while the result has at most this
    /// many chords.
    pub max_chords: usize,
    pub rules: MoveRules,
}

impl InsertionPolicy {
    pub fn new(max_chords: usize) -> InsertionPolicy {
        InsertionPolicy { max_chords, rules: MoveRules::default() }
    }
}

/// Every legal instance of the requested kinds, in a fixed order: kinds in
/// the order given, then by position. New chords get labels above the
/// current maximum.
pub fn legal_moves(code: &GaussCode, kinds: &[MoveKind], policy: &InsertionPolicy) -> Vec<Move> {
    let mut out = Vec::new();
    for &kind in kinds {
        generate(code, kind, policy, &mut out);
    }
    out
}

const SIGNS: [Sign; 2] = [Sign::Pos, Sign::Neg];

fn generate(code: &GaussCode, kind: MoveKind, policy: &InsertionPolicy, out: &mut Vec<Move>) {
    let ps = code.passages();
    let len = ps.len();
    let n = code.crossing_count();
    let next = ChordId(code.max_label() + 1);
    match kind {
        MoveKind::R1Remove => {
            for at in 1..len {
                let (p, q) = (ps[at - 1], ps[at]);
                if p.chord == q.chord {
                    out.push(Move::R1Remove(Kink { at, chord: p.chord, first: p.role, sign: p.sign }));
                }
            }
        }
        MoveKind::R1Add => {
            if n + 1 > policy.max_chords {
                return;
            }
            for at in 1..=len + 1 {
                for first in [Role::Over, Role::Under] {
                    for sign in SIGNS {
                        out.push(Move::R1Add(Kink { at, chord: next, first, sign }));
                    }
                }
            }
        }
        MoveKind::R2Remove => {
            for over_at in 1..len {
                let (p, q) = (ps[over_at - 1], ps[over_at]);
                if !(p.is_over() && q.is_over()) || p.sign == q.sign {
                    continue;
                }
                let (_, u1, _) = code.chord_info(p.chord).expect("chord present");
                let (_, u2, _) = code.chord_info(q.chord).expect("chord present");
                if u1.abs_diff(u2) == 1 {
                    out.push(Move::R2Remove(Bigon {
                        over_at,
                        under_at: u1.min(u2),
                        first: p.chord,
                        second: q.chord,
                        first_sign: p.sign,
                        parallel: u1 < u2,
                    }));
                }
            }
        }
        MoveKind::R2Add => {
            if n + 2 > policy.max_chords {
                return;
            }
            let second = ChordId(next.0 + 1);
            let big = len + 4;
            for over_at in 1..big {
                for under_at in 1..big {
                    if over_at.abs_diff(under_at) < 2 {
                        continue;
                    }
                    for first_sign in SIGNS {
                        for parallel in [true, false] {
                            out.push(Move::R2Add(Bigon { over_at, under_at, first: next, second, first_sign, parallel }));
                        }
                    }
                }
            }
        }
        MoveKind::R3 => {
            for top_at in 1..len {
                let (p, q) = (ps[top_at - 1], ps[top_at]);
                if !(p.is_over() && q.is_over()) {
                    continue;
                }
                for (a, b) in [(p.chord, q.chord), (q.chord, p.chord)] {
                    triangles_with_top(code, top_at, a, b, out);
                }
            }
        }
        MoveKind::FOverSwap => {
            for at in 1..len {
                if ps[at - 1].is_over() && ps[at].is_over() {
                    out.push(Move::FOverSwap { at });
                }
            }
        }
        MoveKind::FPlusRemove => {
            for end in [End::Tail, End::Head] {
                let over_at = match (policy.rules.fplus, end) {
                    (FPlusMode::Strict, End::Tail) => ps.first().filter(|p| p.is_over()).map(|_| 1),
                    (FPlusMode::Strict, End::Head) => ps.last().filter(|p| p.is_over()).map(|_| len),
                    (FPlusMode::Permissive, End::Tail) => ps.iter().position(Passage::is_over).map(|i| i + 1),
                    (FPlusMode::Permissive, End::Head) => ps.iter().rposition(Passage::is_over).map(|i| i + 1),
                };
                if let Some(over_at) = over_at {
                    let p = ps[over_at - 1];
                    let (_, under_at, _) = code.chord_info(p.chord).expect("chord present");
                    out.push(Move::FPlusRemove(EndChord { end, over_at, under_at, chord: p.chord, sign: p.sign }));
                }
            }
        }
        MoveKind::FPlusAdd => {
            if n + 1 > policy.max_chords {
                return;
            }
            let big = len + 2;
            for end in [End::Tail, End::Head] {
                let over_at = if end == End::Tail { 1 } else { big };
                for under_at in (1..=big).filter(|&u| u != over_at) {
                    for sign in SIGNS {
                        out.push(Move::FPlusAdd(EndChord { end, over_at, under_at, chord: next, sign }));
                    }
                }
            }
        }
        MoveKind::CrossingChange => {
            for chord in code.chords() {
                out.push(Move::CrossingChange { chord });
            }
        }
        MoveKind::Virtualize => {
            for chord in code.chords() {
                let (over_at, under_at, _) = code.chord_info(chord).expect("chord present");
                out.push(Move::Virtualize { chord, over_at, under_at });
            }
        }
    }
}

fn triangles_with_top(code: &GaussCode, top_at: usize, a: ChordId, b: ChordId, out: &mut Vec<Move>) {
    let ps = code.passages();
    let len = ps.len();
    let (_, ua, _) = code.chord_info(a).expect("chord present");
    let (_, ub, _) = code.chord_info(b).expect("chord present");
    // middle strand: U_a next to some O_c
    for mid_at in [ua.wrapping_sub(1), ua] {
        if mid_at == 0 || mid_at + 1 > len {
            continue;
        }
        let other = if mid_at == ua { ps[ua] } else { ps[ua - 2] };
        if !other.is_over() || other.chord == a || other.chord == b {
            continue;
        }
        let c = other.chord;
        let (_, uc, _) = code.chord_info(c).expect("chord present");
        if ub.abs_diff(uc) != 1 {
            continue;
        }
        let t = Triangle { top_at, mid_at, bot_at: ub.min(uc), a, b, c };
        if apply_triangle(code, &t).is_ok() {
            out.push(Move::R3(t));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E3: &str = "O1+U2+O3+U1+O2+U3+";

    fn code(s: &str) -> GaussCode {
        s.parse().unwrap()
    }

    fn apply(s: &str, m: Move) -> String {
        apply_move(&code(s), &m).unwrap().to_string()
    }

    fn reason(s: &str, m: Move) -> IllegalReason {
        match apply_move(&code(s), &m) {
            Err(MoveError::IllegalMove { reason, .. }) => reason,
            other => panic!("expected illegal move, got {other:?}"),
        }
    }

    fn kink(at: usize, chord: u32, first: Role, sign: Sign) -> Kink {
        Kink { at, chord: ChordId(chord), first, sign }
    }

    #[test]
    fn figure_moves() {
        assert_eq!(apply("O1+U1+", Move::R1Remove(kink(1, 1, Role::Over, Sign::Pos))), "");
        assert_eq!(apply("O1+O2+U1+U2+", Move::FOverSwap { at: 1 }), "O2+O1+U1+U2+");
        let e = EndChord { end: End::Tail, over_at: 1, under_at: 4, chord: ChordId(1), sign: Sign::Pos };
        assert_eq!(apply("O1+U2+O2+U1+", Move::FPlusRemove(e)), "U2+O2+");
        assert_eq!(apply(E3, Move::CrossingChange { chord: ChordId(2) }), "O1+O2-O3+U1+U2-U3+");
        assert_eq!(
            apply(E3, Move::Virtualize { chord: ChordId(2), over_at: 5, under_at: 2 }),
            "O1+O3+U1+U3+"
        );
    }

    #[test]
    fn illegal_moves_carry_reasons() {
        assert_eq!(reason("O1+U1+", Move::R1Remove(kink(1, 1, Role::Under, Sign::Pos))), IllegalReason::PassageMismatch);
        assert_eq!(reason("O1+U1+", Move::R1Remove(kink(2, 1, Role::Over, Sign::Pos))), IllegalReason::PositionOutOfRange);
        assert_eq!(reason("O1+U1+", Move::R1Add(kink(1, 1, Role::Over, Sign::Pos))), IllegalReason::LabelInUse);
        assert_eq!(reason("O1+U1+", Move::R1Add(kink(4, 2, Role::Over, Sign::Pos))), IllegalReason::PositionOutOfRange);
        assert_eq!(reason(E3, Move::FOverSwap { at: 1 }), IllegalReason::NotOverPair);
        assert_eq!(reason(E3, Move::FOverSwap { at: 6 }), IllegalReason::PositionOutOfRange);
        let e = EndChord { end: End::Tail, over_at: 3, under_at: 2, chord: ChordId(2), sign: Sign::Pos };
        assert_eq!(reason("O1+U2+O2+U1+", Move::FPlusRemove(e)), IllegalReason::NotAtEndpoint);
        assert_eq!(reason(E3, Move::CrossingChange { chord: ChordId(9) }), IllegalReason::UnknownChord);
        assert_eq!(
            reason(E3, Move::Virtualize { chord: ChordId(2), over_at: 2, under_at: 5 }),
            IllegalReason::PassageMismatch
        );
    }

    #[test]
    fn permissive_endpoint_rule() {
        let c = code("U2+O1+O2+U1+");
        let e = EndChord { end: End::Tail, over_at: 2, under_at: 4, chord: ChordId(1), sign: Sign::Pos };
        assert!(apply_move(&c, &Move::FPlusRemove(e)).is_err());
        let permissive = MoveRules { fplus: FPlusMode::Permissive };
        assert_eq!(apply_move_with(&c, &Move::FPlusRemove(e), permissive).unwrap().to_string(), "U2+O2+");
        let policy = InsertionPolicy { max_chords: 2, rules: permissive };
        let found = legal_moves(&c, &[MoveKind::FPlusRemove], &policy);
        assert!(found.contains(&Move::FPlusRemove(e)));
    }

    #[test]
    fn second_move_both_orientations() {
        // O1 O2 ... U1 U2 with opposite signs: parallel
        let par = code("O1+O2-U1+U2-");
        let found = legal_moves(&par, &[MoveKind::R2Remove], &InsertionPolicy::new(2));
        assert_eq!(found.len(), 1);
        assert_eq!(apply_move(&par, &found[0]).unwrap(), GaussCode::empty());
        let anti = code("O1+O2-O3+U2-U1+U3+");
        let found = legal_moves(&anti, &[MoveKind::R2Remove], &InsertionPolicy::new(3));
        assert_eq!(found.len(), 1);
        assert_eq!(apply_move(&anti, &found[0]).unwrap().to_string(), "O3+U3+");
        // same signs are not a bigon
        let same = code("O1+O2+U1+U2+");
        assert!(legal_moves(&same, &[MoveKind::R2Remove], &InsertionPolicy::new(2)).is_empty());
    }

    #[test]
    fn second_move_addition_roundtrip() {
        let start = code("O1+U1+");
        let g = Bigon { over_at: 1, under_at: 4, first: ChordId(2), second: ChordId(3), first_sign: Sign::Neg, parallel: false };
        let grown = apply_move(&start, &Move::R2Add(g)).unwrap();
        assert_eq!(grown.to_string(), "O2-O3+O1+U3+U2-U1+");
        assert_eq!(apply_move(&grown, &Move::R2Remove(g)).unwrap(), start);
        let bad = Bigon { under_at: 2, ..g };
        assert_eq!(reason("O1+U1+", Move::R2Add(bad)), IllegalReason::SitesOverlap);
    }

    #[test]
    fn third_move_fixture() {
        // top O1 O2, middle U1 O3, bottom U2 U3, all positive: row 2 of the table
        let c = code("O1+O2+U1+O3+U2+U3+");
        let found = legal_moves(&c, &[MoveKind::R3], &InsertionPolicy::new(3));
        let t = Triangle { top_at: 1, mid_at: 3, bot_at: 5, a: ChordId(1), b: ChordId(2), c: ChordId(3) };
        assert_eq!(found, vec![Move::R3(t)]);
        let moved = apply_move(&c, &Move::R3(t)).unwrap();
        assert_eq!(moved.to_string(), "O2+O1+O3+U1+U3+U2+");
        assert_eq!(apply_move(&moved, &Move::R3(t)).unwrap(), c);
        // flipping one sign breaks the tile
        let wrong = code("O1+O2+U1+O3-U2+U3-");
        assert_eq!(reason(&wrong.to_string(), Move::R3(t)), IllegalReason::NotATile);
    }

    /// Oriented triangle of three straight strands: the sign of each crossing
    /// is the orientation of (over direction, under direction).
    #[test]
    fn tile_table_matches_planar_geometry() {
        let cross = |u: (f64, f64), v: (f64, f64)| u.0 * v.1 - u.1 * v.0;
        let sub = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0, p.1 - q.1);
        let mut derived = Vec::new();
        let triangles = [
            [(0.0, 0.0), (2.0, 0.0), (0.3, 1.7)],
            [(0.0, 0.0), (-1.0, 0.4), (0.5, 2.0)],
            [(1.0, 1.0), (-2.0, 3.0), (4.0, -1.5)],
            [(0.0, 0.0), (0.5, 2.0), (-1.0, 0.4)],
        ];
        for [a, b, c] in triangles {
            for mask in 0..8u8 {
                let (ta, ma, bb) = (mask & 1 == 0, mask & 2 == 0, mask & 4 == 0);
                let dir = |from, to, forward: bool| {
                    let d = sub(to, from);
                    if forward { d } else { (-d.0, -d.1) }
                };
                let top = dir(a, b, ta); // top meets a first iff it runs a→b
                let mid = dir(a, c, ma);
                let bot = dir(b, c, bb);
                let s = |x: f64| if x > 0.0 { 1i8 } else { -1 };
                let row = R3Tile {
                    top_a_first: ta,
                    mid_a_first: ma,
                    bot_b_first: bb,
                    signs: [s(cross(top, mid)), s(cross(top, bot)), s(cross(mid, bot))],
                };
                if !derived.contains(&row) {
                    derived.push(row);
                }
            }
        }
        assert_eq!(derived.len(), 16);
        for row in &derived {
            assert!(R3_TILES.contains(row), "{row:?}");
        }
        for row in R3_TILES {
            let flipped = R3Tile {
                top_a_first: !row.top_a_first,
                mid_a_first: !row.mid_a_first,
                bot_b_first: !row.bot_b_first,
                ..row
            };
            assert!(R3_TILES.contains(&flipped));
        }
    }

    #[test]
    fn legal_move_listing() {
        let found = legal_moves(&code("O1+U1+"), &[MoveKind::R1Remove], &InsertionPolicy::new(1));
        assert_eq!(found, vec![Move::R1Remove(kink(1, 1, Role::Over, Sign::Pos))]);
        assert!(legal_moves(&code(E3), &[MoveKind::FOverSwap], &InsertionPolicy::new(3)).is_empty());
        let found = legal_moves(&code("O1+O2+U1+U2+"), &[MoveKind::FPlusRemove], &InsertionPolicy::new(2));
        assert_eq!(found.len(), 1);
        assert!(matches!(found[0], Move::FPlusRemove(EndChord { chord: ChordId(1), end: End::Tail, .. })));
        // additions respect the chord cap
        assert!(legal_moves(&code("O1+U1+"), &[MoveKind::R1Add], &InsertionPolicy::new(1)).is_empty());
        assert_eq!(legal_moves(&code("O1+U1+"), &[MoveKind::R1Add], &InsertionPolicy::new(2)).len(), 12);
    }

    #[test]
    fn inverses() {
        let k = kink(1, 1, Role::Over, Sign::Pos);
        assert_eq!(invert_move(&Move::R1Remove(k)), Ok(Move::R1Add(k)));
        assert_eq!(invert_move(&Move::FOverSwap { at: 1 }), Ok(Move::FOverSwap { at: 1 }));
        let cc = Move::CrossingChange { chord: ChordId(3) };
        assert_eq!(invert_move(&cc), Ok(cc));
        let v = Move::Virtualize { chord: ChordId(1), over_at: 1, under_at: 2 };
        assert_eq!(invert_move(&v), Err(MoveError::NotInvertible(v)));
        let e3 = code(E3);
        let cc2 = Move::CrossingChange { chord: ChordId(2) };
        let back = apply_move(&apply_move(&e3, &cc2).unwrap(), &cc2).unwrap();
        assert_eq!(back, e3);
    }

    #[test]
    fn move_json_shape() {
        let m = Move::FOverSwap { at: 1 };
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"kind":"FOverSwap","at":1}"#);
        let k = Move::R1Remove(kink(1, 1, Role::Over, Sign::Pos));
        let json = serde_json::to_string(&k).unwrap();
        assert_eq!(json, r#"{"kind":"R1Remove","at":1,"chord":1,"first":"O","sign":1}"#);
        assert_eq!(serde_json::from_str::<Move>(&json).unwrap(), k);
    }
}
