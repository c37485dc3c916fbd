use std::collections::BTreeSet;

use proptest::prelude::*;

use knotoid_core::certificate::CertificateBuilder;
use knotoid_core::enumerate::random_code;
use knotoid_core::moves::{apply_move, invert_move, legal_moves, reverse_move, InsertionPolicy, Move, MoveKind};
use knotoid_core::simplify::{bounded_trivialize, descending_certificate, direct_certificate, SearchBudget};
use knotoid_core::warping::{self, reversed_class, warping_crossings, warping_degree_at};
use knotoid_core::{verify_certificate, Certificate, GaussCode, Role};

fn code_strategy(max_n: usize) -> impl Strategy<Value = GaussCode> {
    (0..=max_n, any::<u64>()).prop_map(|(n, seed)| random_code(n, seed))
}

/// Warping set from the definition: rotate to the base class and record
/// chords first met at their under passage.
fn oracle_warping(code: &GaussCode, b: usize) -> BTreeSet<u32> {
    let ps = code.passages();
    let mut seen = BTreeSet::new();
    let mut warping = BTreeSet::new();
    for i in 0..ps.len() {
        let p = ps[(b + i) % ps.len()];
        if seen.insert(p.chord.0) && p.role == Role::Under {
            warping.insert(p.chord.0);
        }
    }
    warping
}

fn all_kinds() -> Vec<MoveKind> {
    let mut kinds = MoveKind::EQUIVALENCE.to_vec();
    kinds.extend([MoveKind::CrossingChange, MoveKind::Virtualize]);
    kinds
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_roundtrip(code in code_strategy(8)) {
        let text = code.to_string();
        prop_assert_eq!(text.parse::<GaussCode>().unwrap(), code.clone());
        let json = serde_json::to_string(&code).unwrap();
        prop_assert_eq!(serde_json::from_str::<GaussCode>(&json).unwrap(), code);
    }

    #[test]
    fn keys_ignore_labels(code in code_strategy(6), shift in 1u32..50) {
        let relabeled: GaussCode = code
            .to_string()
            .split_inclusive(['+', '-'])
            .map(|t| {
                let (head, sign) = t.split_at(t.len() - 1);
                let n: u32 = head[1..].parse().unwrap();
                format!("{}{}{}", &head[..1], n * 3 + shift, sign)
            })
            .collect::<String>()
            .parse()
            .unwrap();
        prop_assert_eq!(relabeled.canonical_key(), code.canonical_key());
        prop_assert_eq!(relabeled.compact_key(), code.compact_key());
    }

    #[test]
    fn warping_matches_definition(code in code_strategy(8)) {
        for b in 0..warping::base_class_count(&code) {
            let got: BTreeSet<u32> = warping_crossings(&code, b).unwrap().into_iter().map(|c| c.0).collect();
            prop_assert_eq!(got, oracle_warping(&code, b));
        }
    }

    #[test]
    fn reversal_pairs_classes(code in code_strategy(8)) {
        let rev = code.reverse();
        let n = code.crossing_count();
        for b in 0..warping::base_class_count(&code) {
            let br = reversed_class(&code, b);
            prop_assert_eq!(warping_degree_at(&code, b).unwrap() + warping_degree_at(&rev, br).unwrap(), n);
            prop_assert_eq!(reversed_class(&rev, br), b);
        }
    }

    #[test]
    fn generated_moves_are_sound(code in code_strategy(4)) {
        let n = code.crossing_count();
        let policy = InsertionPolicy::new(n + 2);
        for m in legal_moves(&code, &all_kinds(), &policy) {
            let next = apply_move(&code, &m).unwrap();
            prop_assert!(knotoid_core::validate(&next).is_ok());
            prop_assert_eq!(next.crossing_count() as i64, n as i64 + m.chord_delta() as i64);
            prop_assert!(next.crossing_count() <= n + 2);
        }
    }

    #[test]
    fn involutions(code in code_strategy(6)) {
        for m in legal_moves(&code, &[MoveKind::CrossingChange, MoveKind::FOverSwap, MoveKind::R3], &InsertionPolicy::new(0)) {
            let once = apply_move(&code, &m).unwrap();
            prop_assert_eq!(apply_move(&once, &m).unwrap(), code.clone());
        }
    }

    #[test]
    fn inverse_replay(code in code_strategy(5), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..8)) {
        let policy = InsertionPolicy::new(code.crossing_count() + 2);
        let mut path = vec![code.clone()];
        let mut moves = Vec::new();
        for pick in picks {
            let here = path.last().unwrap();
            let options = legal_moves(here, &MoveKind::EQUIVALENCE, &policy);
            if options.is_empty() {
                break;
            }
            let m = options[pick.index(options.len())];
            path.push(apply_move(here, &m).unwrap());
            moves.push(m);
        }
        let mut current = path.pop().unwrap();
        for m in moves.iter().rev() {
            current = apply_move(&current, &invert_move(m).unwrap()).unwrap();
            prop_assert_eq!(current.canonical_key(), path.pop().unwrap().canonical_key());
        }
    }

    #[test]
    fn reversal_commutes_with_moves(code in code_strategy(4)) {
        let policy = InsertionPolicy::new(code.crossing_count() + 2);
        let rev = code.reverse();
        for m in legal_moves(&code, &all_kinds(), &policy) {
            let forward = apply_move(&code, &m).unwrap().reverse();
            let mirrored = apply_move(&rev, &reverse_move(&m, code.len())).unwrap();
            prop_assert_eq!(forward, mirrored);
        }
    }

    #[test]
    fn virtualization_never_adds_warping(code in code_strategy(7)) {
        for m in legal_moves(&code, &[MoveKind::Virtualize], &InsertionPolicy::new(0)) {
            let Move::Virtualize { chord, over_at, under_at } = m else { unreachable!() };
            let smaller = apply_move(&code, &m).unwrap();
            for b in 0..warping::base_class_count(&code) {
                let removed_before = [over_at, under_at].iter().filter(|&&p| p <= b).count();
                let mut b2 = b - removed_before;
                if b2 == smaller.len() {
                    b2 = 0;
                }
                let before = warping_crossings(&code, b).unwrap();
                let after = warping_crossings(&smaller, b2).unwrap();
                prop_assert!(!after.contains(&chord));
                prop_assert!(after.is_subset(&before));
                prop_assert!(after.len() <= before.len());
            }
        }
    }

    #[test]
    fn descending_certificates_replay(code in code_strategy(8)) {
        for (b, d) in warping::degree_profile(&code).into_iter().enumerate() {
            if d != 0 {
                continue;
            }
            let cert = descending_certificate(&code, b).unwrap();
            let n = code.crossing_count();
            prop_assert!(cert.len() <= n * (2 * n + 1));
            let v = verify_certificate(&cert).unwrap();
            prop_assert!(v.final_code.is_empty());
            prop_assert!(cert.moves().all(|m| m.chord_delta() <= 0));
        }
    }

    #[test]
    fn reversed_certificates_replay(code in code_strategy(6)) {
        if let Some(cert) = direct_certificate(&code) {
            let rev = cert.reversed().unwrap();
            prop_assert_eq!(&rev.start, &code.reverse());
            prop_assert!(verify_certificate(&rev).unwrap().final_code.is_empty());
            prop_assert_eq!(rev.reversed().unwrap(), cert);
        }
    }

    #[test]
    fn certificate_json_roundtrip(code in code_strategy(5)) {
        if let Some(cert) = direct_certificate(&code) {
            let json = serde_json::to_string(&cert).unwrap();
            let back: Certificate = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, cert);
        }
    }
}

#[test]
fn moves_never_pair_head_and_tail() {
    let code: GaussCode = "O1+U2+O2+U1+".parse().unwrap();
    let rotated_pair = Move::FOverSwap { at: code.len() };
    assert!(apply_move(&code, &rotated_pair).is_err());
    for seed in 0..50 {
        let code = random_code(4, seed);
        let len = code.len();
        for m in legal_moves(&code, &all_kinds(), &InsertionPolicy::new(5)) {
            let ok = match m {
                Move::FOverSwap { at } => at < len,
                Move::R1Remove(k) => k.at < len,
                Move::R2Remove(g) => g.over_at < len && g.under_at < len,
                Move::R3(t) => [t.top_at, t.mid_at, t.bot_at].iter().all(|&a| a < len),
                _ => true,
            };
            assert!(ok, "{m:?} on {code}");
        }
    }
}

#[test]
fn search_is_thread_count_independent() {
    let budget = SearchBudget { max_nodes: 3_000, max_depth: 4, max_chords: 7 };
    let codes: Vec<GaussCode> = (0..12).map(|s| random_code(6, s)).collect();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            codes
                .iter()
                .map(|c| serde_json::to_string(&bounded_trivialize(c, &budget).unwrap()).unwrap())
                .collect::<Vec<_>>()
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn builder_tracks_flags() {
    let code: GaussCode = "O1+U2+O3+U1+O2+U3+".parse().unwrap();
    let mut b = CertificateBuilder::new(code);
    b.push(Move::CrossingChange { chord: knotoid_core::ChordId(2) }).unwrap();
    let cert = b.finish();
    assert!(cert.flags.uses_crossing_change);
    assert!(!cert.flags.uses_virtualization);
}
