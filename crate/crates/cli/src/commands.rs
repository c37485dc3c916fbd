use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use knotoid_core::enumerate::{self, CorpusMode, CorpusSpec};
use knotoid_core::moves::{FPlusMode, MoveRules};
use knotoid_core::simplify::bounded_trivialize_with;
use knotoid_core::suites::{self, Suite, SuiteOptions, SuiteReport};
use knotoid_core::unknot::{closure_unknot_data, unknot_search, OpKind};
use knotoid_core::warping::{report, Alternation};
use knotoid_core::{verify_certificate, Certificate, GaussCode, TrivialityVerdict};

use crate::budget::{BudgetArgs, ConfigFile, ResolvedBudget};
use crate::input::{read_records, InputError, Record};
use crate::{AlternationArg, Cli, Command, FPlusArg, InputArgs, OpArg};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    Inconclusive = 2,
    Invalid = 1,
    Misconfigured = 3,
}

impl Status {
    /// The more severe of two statuses: misconfiguration, then invalid
    /// input, then an inconclusive result.
    fn worst(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::Inconclusive => 1,
            Status::Invalid => 2,
            Status::Misconfigured => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    match &cli.command {
        Command::Validate { input } => validate(input, out),
        Command::Invariants { input, check, alternation } => invariants(input, *check, *alternation, cli.pretty, out),
        Command::Simplify { input, budget, cert_out, fplus } => {
            let Some(budget) = resolve_budget(cli, budget)? else { return Ok(Status::Misconfigured) };
            simplify(input, &budget, cert_out.as_deref(), *fplus, cli.pretty, out)
        }
        Command::Unknot { input, op, max_k, budget, cert_out } => {
            let Some(budget) = resolve_budget(cli, budget)? else { return Ok(Status::Misconfigured) };
            unknot(input, *op, *max_k, &budget, cert_out.as_deref(), cli.pretty, out)
        }
        Command::Closure { input } => closure(input, cli.pretty, out),
        Command::Enumerate { chords, random, seed, dedupe, ceiling } => {
            enumerate_codes(*chords, *random, *seed, *dedupe, *ceiling, out)
        }
        Command::VerifyCert { path } => verify_cert(path, cli.pretty, out),
        Command::Check { suite, chords, random, seed, alternation, input } => {
            check(suite, *chords, *random, *seed, *alternation, input, cli.pretty, out)
        }
    }
}

fn resolve_budget(cli: &Cli, args: &BudgetArgs) -> Result<Option<ResolvedBudget>> {
    let config = match &cli.config {
        Some(path) => match ConfigFile::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return Ok(None);
            }
        },
        None => ConfigFile::default(),
    };
    match ResolvedBudget::resolve(args, &config) {
        Ok(b) => Ok(Some(b)),
        Err(e) => {
            eprintln!("error: {e}");
            Ok(None)
        }
    }
}

fn alternation(arg: AlternationArg) -> Alternation {
    match arg {
        AlternationArg::Cyclic => Alternation::Cyclic,
        AlternationArg::Linear => Alternation::Linear,
    }
}

fn records(input: &InputArgs) -> Result<Vec<Record>> {
    read_records(input.path.as_deref(), &input.codes)
}

fn emit(out: &mut dyn Write, value: &impl Serialize, pretty: bool) -> Result<()> {
    if pretty {
        writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    } else {
        writeln!(out, "{}", serde_json::to_string(value)?)?;
    }
    Ok(())
}

fn error_line(index: usize, err: &InputError) -> Value {
    json!({ "record": index + 1, "ok": false, "error": err })
}

/// Runs `f` on every valid record in parallel and prints results in order.
fn per_record<T, F>(records: &[Record], pretty: bool, out: &mut dyn Write, f: F) -> Result<(Status, Vec<T>)>
where
    T: Send,
    F: Fn(usize, &GaussCode) -> (Value, Status, T) + Sync,
{
    let results: Vec<Option<(Value, Status, T)>> = records
        .par_iter()
        .enumerate()
        .map(|(i, r)| r.as_ref().ok().map(|code| f(i, code)))
        .collect();
    let mut status = Status::Ok;
    let mut extras = Vec::new();
    for (i, (record, result)) in records.iter().zip(results).enumerate() {
        match (record, result) {
            (Err(e), _) => {
                emit(out, &error_line(i, e), pretty)?;
                status = status.worst(Status::Invalid);
            }
            (Ok(_), Some((value, s, extra))) => {
                emit(out, &value, pretty)?;
                status = status.worst(s);
                extras.push(extra);
            }
            (Ok(_), None) => unreachable!(),
        }
    }
    Ok((status, extras))
}

fn with_record(index: usize, code: &GaussCode, body: impl Serialize) -> Value {
    let mut value = json!({ "record": index + 1, "code": code.to_string() });
    if let (Value::Object(map), Value::Object(extra)) = (&mut value, serde_json::to_value(body).expect("serializable")) {
        map.extend(extra);
    }
    value
}

fn validate(input: &InputArgs, out: &mut dyn Write) -> Result<Status> {
    let records = records(input)?;
    let (status, _) = per_record(&records, false, out, |i, code| {
        (with_record(i, code, json!({ "ok": true })), Status::Ok, ())
    })?;
    Ok(status)
}

fn invariants(input: &InputArgs, check: bool, alt: AlternationArg, pretty: bool, out: &mut dyn Write) -> Result<Status> {
    let records = records(input)?;
    let convention = alternation(alt);
    let options = SuiteOptions { alternation: convention };
    let suites_to_check = [Suite::Lemma41, Suite::Lemma42, Suite::Cor42, Suite::Lemma43, Suite::Lemma44, Suite::Thm41];
    let mut sink = Vec::new();
    let (status, rows) = per_record(&records, false, &mut sink, |i, code| {
        let rep = report(code, convention);
        let mut value = with_record(i, code, &rep);
        let mut status = Status::Ok;
        if check {
            let violations: Vec<Value> = suites_to_check
                .iter()
                .filter_map(|&s| match suites::check(s, code, &options) {
                    Some(Err(detail)) => Some(json!({ "suite": s, "detail": detail })),
                    _ => None,
                })
                .collect();
            if !violations.is_empty() {
                status = Status::Inconclusive;
            }
            value["check"] = json!({ "passed": violations.is_empty(), "violations": violations });
        }
        (value, status, (code.to_string(), rep))
    })?;
    if pretty {
        writeln!(out, "{:<28} {:>3} {:>3} {:>5} {:>5} {:>5} {:>6}", "code", "cr", "d", "d_rev", "alt", "desc", "bound")?;
        for (code, rep) in rows {
            writeln!(
                out,
                "{:<28} {:>3} {:>3} {:>5} {:>5} {:>5} {:>6}",
                if code.is_empty() { "(empty)" } else { &code },
                rep.cr,
                rep.d,
                rep.d_rev,
                rep.alternating,
                rep.descending,
                rep.bound_warping
            )?;
        }
        for line in String::from_utf8(sink)?.lines().filter(|l| l.contains("\"ok\":false") || l.contains("\"passed\":false")) {
            writeln!(out, "{line}")?;
        }
    } else {
        out.write_all(&sink)?;
    }
    Ok(status)
}

fn write_certificates(path: &Path, certs: Vec<Certificate>, single_record: bool) -> Result<()> {
    let text = if single_record && certs.len() == 1 {
        serde_json::to_string_pretty(&certs[0])?
    } else {
        serde_json::to_string_pretty(&certs)?
    };
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn simplify(
    input: &InputArgs,
    budget: &ResolvedBudget,
    cert_out: Option<&Path>,
    fplus: FPlusArg,
    pretty: bool,
    out: &mut dyn Write,
) -> Result<Status> {
    let records = records(input)?;
    let rules = MoveRules {
        fplus: match fplus {
            FPlusArg::Strict => FPlusMode::Strict,
            FPlusArg::Permissive => FPlusMode::Permissive,
        },
    };
    let (status, certs) = per_record(&records, pretty, out, |i, code| {
        let b = budget.for_chords(code.crossing_count());
        let verdict = bounded_trivialize_with(code, &b, rules).expect("budget validated");
        let status = if verdict.is_trivial() { Status::Ok } else { Status::Inconclusive };
        let cert = verdict.certificate().cloned();
        let mut value = with_record(i, code, &verdict);
        if let TrivialityVerdict::Trivial { .. } = verdict {
            value["steps"] = json!(cert.as_ref().map_or(0, |c| c.len()));
        }
        (value, status, cert)
    })?;
    if let Some(path) = cert_out {
        write_certificates(path, certs.into_iter().flatten().collect(), records.len() == 1)?;
    }
    Ok(status)
}

fn unknot(
    input: &InputArgs,
    op: OpArg,
    max_k: Option<usize>,
    budget: &ResolvedBudget,
    cert_out: Option<&Path>,
    pretty: bool,
    out: &mut dyn Write,
) -> Result<Status> {
    let records = records(input)?;
    let op = match op {
        OpArg::Change => OpKind::Change,
        OpArg::Virtualize => OpKind::Virtualize,
    };
    let (status, certs) = per_record(&records, pretty, out, |i, code| {
        let b = budget.for_chords(code.crossing_count());
        let k = max_k.unwrap_or(code.crossing_count());
        let result = unknot_search(code, op, k, &b).expect("budget validated");
        let cert = result.witness.certificate.clone();
        (with_record(i, code, &result), Status::Ok, cert)
    })?;
    if let Some(path) = cert_out {
        write_certificates(path, certs, records.len() == 1)?;
    }
    Ok(status)
}

fn closure(input: &InputArgs, pretty: bool, out: &mut dyn Write) -> Result<Status> {
    let records = records(input)?;
    let (status, _) = per_record(&records, pretty, out, |i, code| {
        (with_record(i, code, closure_unknot_data(code)), Status::Ok, ())
    })?;
    Ok(status)
}

fn enumerate_codes(
    chords: usize,
    random: Option<usize>,
    seed: u64,
    dedupe: bool,
    ceiling: usize,
    out: &mut dyn Write,
) -> Result<Status> {
    let codes = match random {
        Some(count) => enumerate::corpus(&CorpusSpec { mode: CorpusMode::Random { n: chords, count, seed }, dedupe })?,
        None => match enumerate::all_codes_with_ceiling(chords, ceiling) {
            Ok(codes) if dedupe => enumerate::dedupe(codes),
            Ok(codes) => codes,
            Err(e) => {
                eprintln!("error: {e}");
                return Ok(Status::Invalid);
            }
        },
    };
    for code in codes {
        writeln!(out, "{code}")?;
    }
    Ok(Status::Ok)
}

fn verify_cert(path: &Path, pretty: bool, out: &mut dyn Write) -> Result<Status> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            emit(out, &json!({ "ok": false, "error": { "kind": "InvalidJson", "message": e.to_string() } }), pretty)?;
            return Ok(Status::Invalid);
        }
    };
    let items = match value {
        Value::Array(items) => items,
        single => vec![single],
    };
    let mut status = Status::Ok;
    for (i, item) in items.into_iter().enumerate() {
        let line = match serde_json::from_value::<Certificate>(item) {
            Err(e) => json!({ "certificate": i + 1, "ok": false, "error": { "kind": "InvalidJson", "message": e.to_string() } }),
            Ok(cert) => match verify_certificate(&cert) {
                Ok(v) => json!({
                    "certificate": i + 1,
                    "ok": true,
                    "steps": cert.len(),
                    "final": v.final_code.to_string(),
                    "relation": v.relation,
                }),
                Err(e) => json!({ "certificate": i + 1, "ok": false, "error": e, "message": e.to_string() }),
            },
        };
        if line["ok"] == false {
            status = Status::Invalid;
        }
        emit(out, &line, pretty)?;
    }
    Ok(status)
}

#[allow(clippy::too_many_arguments)]
fn check(
    suite: &str,
    chords: usize,
    random: Option<usize>,
    seed: u64,
    alt: AlternationArg,
    input: &InputArgs,
    pretty: bool,
    out: &mut dyn Write,
) -> Result<Status> {
    let selected: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        match suite.parse::<Suite>() {
            Ok(s) => vec![s],
            Err(e) => {
                eprintln!("error: {e}");
                return Ok(Status::Invalid);
            }
        }
    };
    let codes: Vec<GaussCode> = if input.path.is_some() || !input.codes.is_empty() {
        let mut codes = Vec::new();
        for (i, r) in records(input)?.into_iter().enumerate() {
            match r {
                Ok(c) => codes.push(c),
                Err(e) => {
                    emit(out, &error_line(i, &e), false)?;
                    return Ok(Status::Invalid);
                }
            }
        }
        codes
    } else if let Some(count) = random {
        enumerate::random_codes(1.min(chords)..=chords, count, seed)
    } else {
        let mut codes = Vec::new();
        for n in 0..=chords {
            match enumerate::all_codes(n) {
                Ok(c) => codes.extend(c),
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(Status::Invalid);
                }
            }
        }
        codes
    };
    let options = SuiteOptions { alternation: alternation(alt) };
    let reports: Vec<SuiteReport> = selected.iter().map(|&s| suites::run_suite(s, &codes, &options)).collect();
    if pretty {
        writeln!(out, "{:<8} {:>7} {:>10} {:>10}  {:<4}  property", "suite", "codes", "applicable", "violations", "")?;
        for r in &reports {
            writeln!(
                out,
                "{:<8} {:>7} {:>10} {:>10}  {:<4}  {}",
                r.suite.name(),
                r.codes,
                r.applicable,
                r.violations,
                if r.passed { "pass" } else { "FAIL" },
                r.suite.description()
            )?;
        }
    } else {
        for r in &reports {
            emit(out, r, false)?;
        }
    }
    Ok(if reports.iter().all(|r| r.passed) { Status::Ok } else { Status::Inconclusive })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_severity() {
        assert_eq!(Status::Ok.worst(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Invalid.worst(Status::Inconclusive), Status::Invalid);
        assert_eq!(Status::Invalid.worst(Status::Misconfigured), Status::Misconfigured);
    }
}
