//! Named property suites over a corpus of codes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::certificate::verify_certificate;
use crate::gauss::GaussCode;
use crate::simplify::{bounded_trivialize, descending_certificate, descending_step_bound, SearchBudget};
use crate::unknot::{closure_unknot_data, warping_unknot_certificate, OpKind};
use crate::warping::{self, Alternation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma41,
    Lemma42,
    Cor42,
    Lemma43,
    Lemma44,
    Thm41,
    Prop41,
    Thm31,
    Thm51,
    Cor52,
    Cor55,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Lemma41,
        Suite::Lemma42,
        Suite::Cor42,
        Suite::Lemma43,
        Suite::Lemma44,
        Suite::Thm41,
        Suite::Prop41,
        Suite::Thm31,
        Suite::Thm51,
        Suite::Cor52,
        Suite::Cor55,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma41 => "lemma41",
            Suite::Lemma42 => "lemma42",
            Suite::Cor42 => "cor42",
            Suite::Lemma43 => "lemma43",
            Suite::Lemma44 => "lemma44",
            Suite::Thm41 => "thm41",
            Suite::Prop41 => "prop41",
            Suite::Thm31 => "thm31",
            Suite::Thm51 => "thm51",
            Suite::Cor52 => "cor52",
            Suite::Cor55 => "cor55",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::Lemma41 => "d(D_b) + d(-D_b') = cr(D) at every class",
            Suite::Lemma42 => "warping iff cutting number positive; cutting numbers odd",
            Suite::Cor42 => "d(mirror D) = d(-D)",
            Suite::Lemma43 => "degree steps +1 across over passages, -1 across under passages",
            Suite::Lemma44 => "alternating codes attain d(D) before every over passage",
            Suite::Thm41 => "d(D) + d(-D) + 1 <= cr(D), equality iff alternating (cr >= 3)",
            Suite::Prop41 => "codes with at most two chords trivialize without search",
            Suite::Thm31 => "descending codes reduce to the empty code within n(2n+1) steps",
            Suite::Thm51 => "warping witnesses use min(d(D), d(-D)) modifications and verify",
            Suite::Cor52 => "2 min(d(D), d(-D)) <= cr(D) - 1 (cr >= 3)",
            Suite::Cor55 => "d(D) = 0 implies a monotone closure",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub alternation: Alternation,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { alternation: Alternation::Cyclic }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub codes: usize,
    /// Codes the suite's hypothesis applies to.
    pub applicable: usize,
    pub violations: usize,
    /// The first few violations.
    pub examples: Vec<Violation>,
    pub passed: bool,
}

const EXAMPLE_LIMIT: usize = 5;

pub fn run_suite(suite: Suite, codes: &[GaussCode], options: &SuiteOptions) -> SuiteReport {
    use rayon::prelude::*;
    let results: Vec<Option<Result<(), String>>> = codes.par_iter().map(|c| check(suite, c, options)).collect();
    let mut report = SuiteReport {
        suite,
        codes: codes.len(),
        applicable: 0,
        violations: 0,
        examples: Vec::new(),
        passed: true,
    };
    for (code, result) in codes.iter().zip(results) {
        let Some(result) = result else { continue };
        report.applicable += 1;
        if let Err(detail) = result {
            report.violations += 1;
            report.passed = false;
            if report.examples.len() < EXAMPLE_LIMIT {
                report.examples.push(Violation { code: code.to_string(), detail });
            }
        }
    }
    report
}

/// `None` when the suite's hypothesis does not apply to `code`.
pub fn check(suite: Suite, code: &GaussCode, options: &SuiteOptions) -> Option<Result<(), String>> {
    let n = code.crossing_count();
    let rev = code.reverse();
    let profile = warping::degree_profile(code);
    let d = warping::warping_degree(code);
    let d_rev = warping::warping_degree(&rev);
    let fail = |detail: String| Some(Err(detail));
    match suite {
        Suite::Lemma41 => {
            for (b, &db) in profile.iter().enumerate() {
                let br = warping::reversed_class(code, b);
                let dr = warping::warping_degree_at(&rev, br).expect("class in range");
                if db + dr != n {
                    return fail(format!("class {b}: {db} + {dr} != {n}"));
                }
            }
        }
        Suite::Lemma42 => {
            for b in 0..profile.len() {
                let warping = warping::warping_crossings(code, b).expect("class in range");
                for chord in code.chords() {
                    let cut = warping::cutting_number(code, b, chord).expect("chord present");
                    if cut % 2 == 0 || (cut > 0) != warping.contains(&chord) {
                        return fail(format!("class {b}, chord {chord}: cutting number {cut}"));
                    }
                }
            }
        }
        Suite::Cor42 => {
            let dm = warping::warping_degree(&code.mirror());
            if dm != d_rev {
                return fail(format!("d(mirror) = {dm}, d(-D) = {d_rev}"));
            }
        }
        Suite::Lemma43 => {
            let len = profile.len();
            if n == 0 {
                return Some(Ok(()));
            }
            for b in 0..len {
                let next = profile[(b + 1) % len] as i64;
                let step = if code.passages()[b].is_over() { 1 } else { -1 };
                if next - profile[b] as i64 != step {
                    return fail(format!("class {b} to {}: expected step {step}", (b + 1) % len));
                }
            }
        }
        Suite::Lemma44 => {
            if !warping::is_alternating(code, options.alternation) {
                return None;
            }
            for (b, p) in code.passages().iter().enumerate() {
                if p.is_over() && profile[b] != d {
                    return fail(format!("class {b} precedes an over passage but has degree {}", profile[b]));
                }
            }
        }
        Suite::Thm41 => {
            if n < 3 {
                return None;
            }
            let alternating = warping::is_alternating(code, options.alternation);
            let spread = profile.iter().max().unwrap() - profile.iter().min().unwrap();
            if d + d_rev + 1 > n {
                return fail(format!("{d} + {d_rev} + 1 > {n}"));
            }
            if (d + d_rev + 1 == n) != alternating {
                return fail(format!("equality {} but alternating {alternating}", d + d_rev + 1 == n));
            }
            if spread < 1 || (spread == 1) != alternating {
                return fail(format!("profile spread {spread}, alternating {alternating}"));
            }
        }
        Suite::Prop41 => {
            if n > 2 {
                return None;
            }
            if d != 0 && d_rev != 0 {
                return fail("no class of degree zero in either orientation".into());
            }
            let budget = SearchBudget { max_nodes: 1, max_depth: 1, max_chords: n.max(1) };
            let verdict = bounded_trivialize(code, &budget).expect("valid budget");
            match verdict.certificate().map(verify_certificate) {
                Some(Ok(v)) if v.final_code.is_empty() => {}
                _ => return fail("not trivialized without search".into()),
            }
        }
        Suite::Thm31 => {
            if d != 0 {
                return None;
            }
            for (b, &db) in profile.iter().enumerate() {
                if db != 0 {
                    continue;
                }
                let cert = match descending_certificate(code, b) {
                    Ok(c) => c,
                    Err(e) => return fail(format!("class {b}: {e}")),
                };
                if cert.len() > descending_step_bound(n) {
                    return fail(format!("class {b}: {} steps", cert.len()));
                }
                match verify_certificate(&cert) {
                    Ok(v) if v.final_code.is_empty() => {}
                    other => return fail(format!("class {b}: replay gave {other:?}")),
                }
            }
        }
        Suite::Thm51 => {
            for op in [OpKind::Change, OpKind::Virtualize] {
                let r = warping_unknot_certificate(code, op);
                if r.upper_bound != d.min(d_rev) {
                    return fail(format!("{op:?}: bound {} != {}", r.upper_bound, d.min(d_rev)));
                }
                match verify_certificate(&r.witness.certificate) {
                    Ok(v) if v.final_code.is_empty() && v.relation.modification_count() == r.upper_bound => {}
                    other => return fail(format!("{op:?}: replay gave {other:?}")),
                }
            }
        }
        Suite::Cor52 => {
            if n < 3 {
                return None;
            }
            if 2 * d.min(d_rev) > n - 1 {
                return fail(format!("2 * {} > {}", d.min(d_rev), n - 1));
            }
        }
        Suite::Cor55 => {
            if d != 0 {
                return None;
            }
            let closure = closure_unknot_data(code);
            if !closure.monotone_closure {
                return fail(format!("cyclic degree {}", closure.cyclic_d));
            }
        }
    }
    Some(Ok(()))
}
