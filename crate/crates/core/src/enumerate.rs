//! Exhaustive and seeded random Gauss-code generation.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauss::{ChordId, GaussCode, Passage, Role, Sign};

pub const DEFAULT_CEILING: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("{n} chords exceeds the enumeration ceiling {ceiling}")]
    CeilingExceeded { n: usize, ceiling: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CorpusMode {
    Exhaustive { n: usize },
    Random { n: usize, count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    #[serde(flatten)]
    pub mode: CorpusMode,
    pub dedupe: bool,
}

/// `(2n − 1)!! · 4^n`, the number of codes `all_codes(n)` yields.
pub fn exhaustive_count(n: usize) -> usize {
    (1..=n).map(|k| 2 * k - 1).product::<usize>() * 4usize.pow(n as u32)
}

pub fn all_codes(n: usize) -> Result<Vec<GaussCode>, EnumerateError> {
    all_codes_with_ceiling(n, DEFAULT_CEILING)
}

/// Every code on `n` chords labeled `1..=n` by first appearance.
///
/// Order: pairings (the lowest free slot is matched with each later free
/// slot in turn), then role masks, then sign masks. Bit `i` of the role mask
/// puts the under passage of chord `i + 1` first; bit `i` of the sign mask
/// makes it negative.
pub fn all_codes_with_ceiling(n: usize, ceiling: usize) -> Result<Vec<GaussCode>, EnumerateError> {
    if n > ceiling {
        return Err(EnumerateError::CeilingExceeded { n, ceiling });
    }
    let mut pairings = Vec::new();
    let mut slots = vec![0usize; 2 * n];
    pair_slots(&mut slots, 1, &mut pairings);
    let mut out = Vec::with_capacity(exhaustive_count(n));
    for pairing in &pairings {
        for roles in 0..1u32 << n {
            for signs in 0..1u32 << n {
                out.push(build(pairing, |c| roles >> (c - 1) & 1 == 1, |c| signs >> (c - 1) & 1 == 1));
            }
        }
    }
    Ok(out)
}

/// `slots[i]` is the chord at position `i + 1`; 0 marks a free slot.
fn pair_slots(slots: &mut [usize], next: usize, out: &mut Vec<Vec<usize>>) {
    let Some(first) = slots.iter().position(|&c| c == 0) else {
        out.push(slots.to_vec());
        return;
    };
    slots[first] = next;
    for j in first + 1..slots.len() {
        if slots[j] == 0 {
            slots[j] = next;
            pair_slots(slots, next + 1, out);
            slots[j] = 0;
        }
    }
    slots[first] = 0;
}

fn build(pairing: &[usize], under_first: impl Fn(u32) -> bool, negative: impl Fn(u32) -> bool) -> GaussCode {
    let mut seen = HashSet::new();
    let passages = pairing
        .iter()
        .map(|&c| {
            let c = c as u32;
            let first = seen.insert(c);
            let role = if first == under_first(c) { Role::Under } else { Role::Over };
            let sign = if negative(c) { Sign::Neg } else { Sign::Pos };
            Passage { chord: ChordId(c), role, sign }
        })
        .collect();
    GaussCode::from_valid(passages)
}

/// A uniformly random code on `n` chords, reproducible from `seed`.
///
/// Generator: ChaCha8 seeded with `seed` as a `u64`. The slots `0..2n` are
/// shuffled by Fisher–Yates (for `i` from `2n − 1` down to 1, swap `i` with
/// a uniform `j ≤ i`), then slots `2k` and `2k + 1` of the shuffled list form
/// pair `k`. Each pair then draws one bool (true: the lower slot holds the
/// over passage) and one bool (true: positive sign). Chords are finally
/// labeled by first appearance.
pub fn random_code(n: usize, seed: u64) -> GaussCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slots: Vec<usize> = (0..2 * n).collect();
    for i in (1..slots.len()).rev() {
        let j = rng.gen_range(0..=i);
        slots.swap(i, j);
    }
    let mut cells: Vec<Option<(usize, Role, Sign)>> = vec![None; 2 * n];
    for (k, pair) in slots.chunks(2).enumerate() {
        let (lo, hi) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        let over_low: bool = rng.gen();
        let sign = if rng.gen::<bool>() { Sign::Pos } else { Sign::Neg };
        let (lo_role, hi_role) = if over_low { (Role::Over, Role::Under) } else { (Role::Under, Role::Over) };
        cells[lo] = Some((k, lo_role, sign));
        cells[hi] = Some((k, hi_role, sign));
    }
    let mut labels = vec![0u32; n];
    let mut next = 0;
    let passages = cells
        .into_iter()
        .map(|cell| {
            let (k, role, sign) = cell.expect("every slot is paired");
            if labels[k] == 0 {
                next += 1;
                labels[k] = next;
            }
            Passage { chord: ChordId(labels[k]), role, sign }
        })
        .collect();
    GaussCode::from_valid(passages)
}

/// `count` random codes; code `i` uses seed `seed + i` and a chord count
/// drawn from `chords` with the same seed.
pub fn random_codes(chords: RangeInclusive<usize>, count: usize, seed: u64) -> Vec<GaussCode> {
    (0..count as u64)
        .map(|i| {
            let s = seed.wrapping_add(i);
            let n = ChaCha8Rng::seed_from_u64(s ^ 0x9e37_79b9_7f4a_7c15).gen_range(chords.clone());
            random_code(n, s)
        })
        .collect()
}

pub fn corpus(spec: &CorpusSpec) -> Result<Vec<GaussCode>, EnumerateError> {
    let codes = match spec.mode {
        CorpusMode::Exhaustive { n } => all_codes(n)?,
        CorpusMode::Random { n, count, seed } => random_codes(n..=n, count, seed),
    };
    Ok(if spec.dedupe { dedupe(codes) } else { codes })
}

/// Keeps the first code of each canonical key.
pub fn dedupe(codes: Vec<GaussCode>) -> Vec<GaussCode> {
    let mut seen = HashSet::new();
    codes.into_iter().filter(|c| seen.insert(c.canonical_key())).collect()
}

/// Exhaustive codes with 1 to 3 chords followed by 1000 random codes with 1
/// to 8 chords (seed 2024).
pub fn standard_corpus() -> Vec<GaussCode> {
    let mut out = Vec::with_capacity(2012);
    for n in 1..=3 {
        out.extend(all_codes(n).expect("within the default ceiling"));
    }
    out.extend(random_codes(1..=8, 1000, 2024));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::validate;

    #[test]
    fn counts() {
        assert_eq!(all_codes(0).unwrap(), vec![GaussCode::empty()]);
        for (n, want) in [(1, 4), (2, 48), (3, 960)] {
            let codes = all_codes(n).unwrap();
            assert_eq!(codes.len(), want);
            assert_eq!(exhaustive_count(n), want);
            assert_eq!(dedupe(codes).len(), want);
        }
        assert_eq!(all_codes(4), Err(EnumerateError::CeilingExceeded { n: 4, ceiling: 3 }));
        assert_eq!(all_codes_with_ceiling(4, 4).unwrap().len(), 105 * 256);
    }

    #[test]
    fn one_chord_listing() {
        let texts: Vec<String> = all_codes(1).unwrap().iter().map(|c| c.to_string()).collect();
        assert_eq!(texts, ["O1+U1+", "O1-U1-", "U1+O1+", "U1-O1-"]);
    }

    #[test]
    fn random_is_reproducible_and_valid() {
        assert_eq!(random_code(0, 7), GaussCode::empty());
        assert_eq!(random_code(5, 11), random_code(5, 11));
        for seed in 0..1000 {
            let c = random_code(8, seed);
            assert_eq!(c.crossing_count(), 8);
            assert!(validate(&c).is_ok());
            assert_eq!(c.canonical_key(), c.to_string());
        }
        let corpus = standard_corpus();
        assert_eq!(corpus.len(), 2012);
        assert!(corpus[1012..].iter().all(|c| (1..=8).contains(&c.crossing_count())));
    }

    #[test]
    fn random_covers_all_one_chord_codes() {
        let seen: HashSet<String> = (0..200).map(|s| random_code(1, s).to_string()).collect();
        assert_eq!(seen.len(), 4);
    }
}
