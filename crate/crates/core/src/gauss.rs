//! Gauss codes of plus-welded knotoid diagrams.
//!
//! A diagram is stored as the ordered list of its classical crossing
//! passages, read from the tail to the head. Welded (virtual) crossings leave
//! no trace in a Gauss code, so every virtual Reidemeister move and every
//! endpoint slide through virtual crossings is the identity on this type.
//!
//! Text format: concatenated tokens `(O|U)<label>(+|-)`, tail first. The
//! empty string is the trivial diagram.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Label of a classical crossing (a chord of the Gauss diagram).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChordId(pub u32);

impl fmt::Display for ChordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Crossing sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).ok_or_else(|| serde::de::Error::custom(format!("sign must be 1 or -1, got {v}")))
    }
}

/// Whether a passage runs over or under the other strand of its crossing.
/// The over passage is the starting point of the oriented chord.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "O")]
    Over,
    #[serde(rename = "U")]
    Under,
}

impl Role {
    pub fn flip(self) -> Role {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }

    fn symbol(self) -> char {
        match self {
            Role::Over => 'O',
            Role::Under => 'U',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Passage {
    pub chord: ChordId,
    pub role: Role,
    pub sign: Sign,
}

impl Passage {
    pub fn new(chord: u32, role: Role, sign: Sign) -> Passage {
        Passage { chord: ChordId(chord), role, sign }
    }

    pub fn is_over(&self) -> bool {
        self.role == Role::Over
    }

    pub fn is_under(&self) -> bool {
        self.role == Role::Under
    }
}

impl fmt::Display for Passage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.role.symbol(), self.chord.0, self.sign.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("malformed token at byte {offset}: {found:?}")]
    MalformedToken { offset: usize, found: String },
    #[error("chord {chord} must appear exactly once over and once under")]
    ChordArity { chord: ChordId },
    #[error("chord {chord} carries two different signs")]
    SignMismatch { chord: ChordId },
}

impl CodeError {
    /// Variant name, stable for machine consumers.
    pub fn kind(&self) -> &'static str {
        match self {
            CodeError::MalformedToken { .. } => "MalformedToken",
            CodeError::ChordArity { .. } => "ChordArity",
            CodeError::SignMismatch { .. } => "SignMismatch",
        }
    }
}

/// A validated linear Gauss code, position 1 adjacent to the tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussCode {
    passages: Vec<Passage>,
}

impl GaussCode {
    pub fn empty() -> GaussCode {
        GaussCode::default()
    }

    pub fn new(passages: Vec<Passage>) -> Result<GaussCode, CodeError> {
        validate_passages(&passages)?;
        Ok(GaussCode { passages })
    }

    /// Callers guarantee the invariants; checked in debug builds.
    pub(crate) fn from_valid(passages: Vec<Passage>) -> GaussCode {
        debug_assert_eq!(validate_passages(&passages), Ok(()));
        GaussCode { passages }
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn into_passages(self) -> Vec<Passage> {
        self.passages
    }

    /// Number of passages, `2n`.
    pub fn len(&self) -> usize {
        self.passages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passages.is_empty()
    }

    /// Number of classical crossings, `cr(D)`.
    pub fn crossing_count(&self) -> usize {
        self.passages.len() / 2
    }

    /// Passage at a 1-based position.
    pub fn at(&self, pos: usize) -> Option<&Passage> {
        pos.checked_sub(1).and_then(|i| self.passages.get(i))
    }

    /// Chord labels in increasing order.
    pub fn chords(&self) -> Vec<ChordId> {
        let mut out: Vec<ChordId> =
            self.passages.iter().filter(|p| p.is_over()).map(|p| p.chord).collect();
        out.sort_unstable();
        out
    }

    pub fn contains_chord(&self, chord: ChordId) -> bool {
        self.passages.iter().any(|p| p.chord == chord)
    }

    pub fn max_label(&self) -> u32 {
        self.passages.iter().map(|p| p.chord.0).max().unwrap_or(0)
    }

    /// 1-based position of the given passage of a chord.
    pub fn position(&self, chord: ChordId, role: Role) -> Option<usize> {
        self.passages
            .iter()
            .position(|p| p.chord == chord && p.role == role)
            .map(|i| i + 1)
    }

    /// `(over position, under position, sign)` of a chord.
    pub fn chord_info(&self, chord: ChordId) -> Option<(usize, usize, Sign)> {
        let over = self.position(chord, Role::Over)?;
        let under = self.position(chord, Role::Under)?;
        Some((over, under, self.passages[over - 1].sign))
    }

    /// `-D`: the same diagram traversed from head to tail.
    ///
    /// Reversing both strands of a crossing keeps its over/under data and its
    /// sign, so only the order changes.
    pub fn reverse(&self) -> GaussCode {
        let mut passages = self.passages.clone();
        passages.reverse();
        GaussCode { passages }
    }

    /// `D*`: every crossing flipped, which also negates every sign.
    pub fn mirror(&self) -> GaussCode {
        let passages = self
            .passages
            .iter()
            .map(|p| Passage { chord: p.chord, role: p.role.flip(), sign: p.sign.negate() })
            .collect();
        GaussCode { passages }
    }

    /// Joins head to tail through virtual crossings only. The shortcut adds no
    /// classical crossing, so the passage data is unchanged.
    pub fn virtual_closure(&self) -> CyclicGaussCode {
        CyclicGaussCode { passages: self.passages.clone() }
    }

    /// Relabels chords by order of first appearance and serializes.
    pub fn canonical_key(&self) -> String {
        let mut relabel: BTreeMap<ChordId, u32> = BTreeMap::new();
        let mut out = String::with_capacity(self.passages.len() * 3);
        for p in &self.passages {
            let next = relabel.len() as u32 + 1;
            let label = *relabel.entry(p.chord).or_insert(next);
            out.push(p.role.symbol());
            out.push_str(&label.to_string());
            out.push(p.sign.symbol());
        }
        out
    }

    /// Compact relabel-invariant key used for search memoization. Equal iff
    /// the canonical text keys are equal.
    pub fn compact_key(&self) -> Vec<u16> {
        let mut seen: Vec<(u32, u16)> = Vec::with_capacity(self.passages.len() / 2);
        self.passages
            .iter()
            .map(|p| {
                let label = match seen.iter().find(|(c, _)| *c == p.chord.0) {
                    Some(&(_, l)) => l,
                    None => {
                        let l = seen.len() as u16 + 1;
                        seen.push((p.chord.0, l));
                        l
                    }
                };
                (label << 2) | ((p.role == Role::Under) as u16) << 1 | (p.sign == Sign::Neg) as u16
            })
            .collect()
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.passages {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for GaussCode {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<GaussCode, CodeError> {
        parse_code(s)
    }
}

/// The same passages read as a cycle: a welded knot diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CyclicGaussCode {
    passages: Vec<Passage>,
}

impl CyclicGaussCode {
    pub fn new(passages: Vec<Passage>) -> Result<CyclicGaussCode, CodeError> {
        validate_passages(&passages)?;
        Ok(CyclicGaussCode { passages })
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn crossing_count(&self) -> usize {
        self.passages.len() / 2
    }
}

impl fmt::Display for CyclicGaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for p in &self.passages {
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// Parses the text format. Tokens may be concatenated or separated by
/// whitespace.
pub fn parse_code(text: &str) -> Result<GaussCode, CodeError> {
    let bytes = text.as_bytes();
    let mut passages = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let malformed = |end: usize| CodeError::MalformedToken {
            offset: start,
            found: text[start..end.min(text.len())].to_string(),
        };
        let role = match bytes[i] {
            b'O' => Role::Over,
            b'U' => Role::Under,
            _ => return Err(malformed(next_boundary(text, i + 1))),
        };
        i += 1;
        let digits = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let label: u32 = match text[digits..i].parse() {
            Ok(v) if v > 0 => v,
            _ => return Err(malformed(next_boundary(text, i + 1))),
        };
        let sign = match bytes.get(i) {
            Some(b'+') => Sign::Pos,
            Some(b'-') => Sign::Neg,
            _ => return Err(malformed(next_boundary(text, i + 1))),
        };
        i += 1;
        passages.push(Passage::new(label, role, sign));
    }
    GaussCode::new(passages)
}

fn next_boundary(text: &str, from: usize) -> usize {
    let mut end = from.min(text.len());
    while !text.is_char_boundary(end) {
        end += 1;
    }
    end
}

pub fn serialize_code(code: &GaussCode) -> String {
    code.to_string()
}

/// Checks the two-passage and sign rules.
pub fn validate(code: &GaussCode) -> Result<(), CodeError> {
    validate_passages(&code.passages)
}

fn validate_passages(passages: &[Passage]) -> Result<(), CodeError> {
    // (over seen, under seen, sign) per label, in label order for stable errors
    let mut seen: BTreeMap<ChordId, (u8, u8, Sign)> = BTreeMap::new();
    for p in passages {
        let entry = seen.entry(p.chord).or_insert((0, 0, p.sign));
        match p.role {
            Role::Over => entry.0 += 1,
            Role::Under => entry.1 += 1,
        }
        if entry.0 > 1 || entry.1 > 1 {
            return Err(CodeError::ChordArity { chord: p.chord });
        }
        if entry.2 != p.sign {
            return Err(CodeError::SignMismatch { chord: p.chord });
        }
    }
    for (chord, (o, u, _)) in seen {
        if chord.0 == 0 || o != 1 || u != 1 {
            return Err(CodeError::ChordArity { chord });
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct CodeRepr {
    passages: Vec<Passage>,
}

impl Serialize for GaussCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CodeRepr { passages: self.passages.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CodeRepr::deserialize(d)?;
        GaussCode::new(repr.passages).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter storing a code as its text form.
pub mod as_text {
    use super::*;

    pub fn serialize<S: Serializer>(code: &GaussCode, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&code.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GaussCode, D::Error> {
        let text = String::deserialize(d)?;
        parse_code(text.trim()).map_err(serde::de::Error::custom)
    }
}
