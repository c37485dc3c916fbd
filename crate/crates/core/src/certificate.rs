//! Replayable move sequences and their independent verifier.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauss::{self, GaussCode};
use crate::moves::{apply_move_with, reverse_move, FPlusMode, IllegalReason, Move, MoveError, MoveKind, MoveRules};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    #[serde(rename = "move")]
    pub mv: Move,
    /// Canonical key of the code after this step.
    pub key: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertFlags {
    pub uses_crossing_change: bool,
    pub uses_virtualization: bool,
    #[serde(default)]
    pub fplus_permissive: bool,
}

impl CertFlags {
    pub fn rules(&self) -> MoveRules {
        MoveRules { fplus: if self.fplus_permissive { FPlusMode::Permissive } else { FPlusMode::Strict } }
    }

    fn allows(&self, kind: MoveKind) -> bool {
        match kind {
            MoveKind::CrossingChange => self.uses_crossing_change,
            MoveKind::Virtualize => self.uses_virtualization,
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(with = "gauss::as_text")]
    pub start: GaussCode,
    pub steps: Vec<Step>,
    pub flags: CertFlags,
}

/// The equivalence a verified certificate witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum Relation {
    PlusWelded,
    AfterModifications { crossing_changes: usize, virtualizations: usize },
}

impl Relation {
    pub fn modification_count(&self) -> usize {
        match self {
            Relation::PlusWelded => 0,
            Relation::AfterModifications { crossing_changes, virtualizations } => crossing_changes + virtualizations,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::PlusWelded => f.write_str("plus-welded equivalence"),
            Relation::AfterModifications { crossing_changes, virtualizations } => write!(
                f,
                "equivalence after {crossing_changes} crossing changes and {virtualizations} virtualizations"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verified {
    pub final_code: GaussCode,
    pub relation: Relation,
}

/// Step indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum VerifyError {
    #[error("step {index} is illegal: {reason}")]
    StepIllegal { index: usize, reason: IllegalReason },
    #[error("key mismatch after step {index}")]
    KeyMismatch { index: usize },
}

impl VerifyError {
    pub fn index(&self) -> usize {
        match self {
            VerifyError::StepIllegal { index, .. } | VerifyError::KeyMismatch { index } => *index,
        }
    }
}

/// Replays every step from `start` with full legality checking.
pub fn verify_certificate(cert: &Certificate) -> Result<Verified, VerifyError> {
    let rules = cert.flags.rules();
    let mut code = cert.start.clone();
    let (mut changes, mut virtualizations) = (0, 0);
    for (index, step) in cert.steps.iter().enumerate() {
        let kind = step.mv.kind();
        if !cert.flags.allows(kind) {
            return Err(VerifyError::StepIllegal { index, reason: IllegalReason::UndeclaredModification });
        }
        code = match apply_move_with(&code, &step.mv, rules) {
            Ok(next) => next,
            Err(MoveError::IllegalMove { reason, .. }) => return Err(VerifyError::StepIllegal { index, reason }),
            Err(MoveError::NotInvertible(_)) => unreachable!("application never inverts"),
        };
        if code.canonical_key() != step.key {
            return Err(VerifyError::KeyMismatch { index });
        }
        match kind {
            MoveKind::CrossingChange => changes += 1,
            MoveKind::Virtualize => virtualizations += 1,
            _ => {}
        }
    }
    let relation = if changes + virtualizations == 0 {
        Relation::PlusWelded
    } else {
        Relation::AfterModifications { crossing_changes: changes, virtualizations }
    };
    Ok(Verified { final_code: code, relation })
}

impl Certificate {
    pub fn empty(start: GaussCode) -> Certificate {
        Certificate { start, steps: Vec::new(), flags: CertFlags::default() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn moves(&self) -> impl Iterator<Item = &Move> {
        self.steps.iter().map(|s| &s.mv)
    }

    pub fn modification_count(&self) -> usize {
        self.moves().filter(|m| !m.kind().is_equivalence()).count()
    }

    /// The same sequence transported to `reverse(start)`.
    pub fn reversed(&self) -> Result<Certificate, VerifyError> {
        let mut builder = CertificateBuilder::with_rules(self.start.reverse(), self.flags.rules());
        for (index, step) in self.steps.iter().enumerate() {
            let mv = reverse_move(&step.mv, builder.current().len());
            builder.push(mv).map_err(|e| match e {
                MoveError::IllegalMove { reason, .. } => VerifyError::StepIllegal { index, reason },
                MoveError::NotInvertible(_) => unreachable!(),
            })?;
        }
        Ok(builder.finish())
    }
}

/// Builds a certificate by applying moves one at a time.
#[derive(Clone, Debug)]
pub struct CertificateBuilder {
    cert: Certificate,
    current: GaussCode,
}

impl CertificateBuilder {
    pub fn new(start: GaussCode) -> CertificateBuilder {
        CertificateBuilder::with_rules(start, MoveRules::default())
    }

    pub fn with_rules(start: GaussCode, rules: MoveRules) -> CertificateBuilder {
        let mut cert = Certificate::empty(start.clone());
        cert.flags.fplus_permissive = rules.fplus == FPlusMode::Permissive;
        CertificateBuilder { cert, current: start }
    }

    pub fn current(&self) -> &GaussCode {
        &self.current
    }

    pub fn push(&mut self, mv: Move) -> Result<&GaussCode, MoveError> {
        self.current = apply_move_with(&self.current, &mv, self.cert.flags.rules())?;
        match mv.kind() {
            MoveKind::CrossingChange => self.cert.flags.uses_crossing_change = true,
            MoveKind::Virtualize => self.cert.flags.uses_virtualization = true,
            _ => {}
        }
        self.cert.steps.push(Step { mv, key: self.current.canonical_key() });
        Ok(&self.current)
    }

    /// Appends every step of `cert`, which must start at the current code.
    pub fn extend(&mut self, cert: &Certificate) -> Result<&GaussCode, MoveError> {
        debug_assert_eq!(cert.start, self.current);
        if cert.flags.fplus_permissive {
            self.cert.flags.fplus_permissive = true;
        }
        for step in &cert.steps {
            self.push(step.mv)?;
        }
        Ok(&self.current)
    }

    pub fn finish(self) -> Certificate {
        self.cert
    }
}
