//! Gauss codes of plus-welded knotoids.
//!
//! A code lists the classical crossings met from tail to head as signed
//! over/under passages; welded crossings leave no trace. On top of the
//! representation sit the warping-degree invariants ([`warping`]), the move
//! set with replayable certificates ([`moves`], [`certificate`]), reduction of
//! descending codes and a bounded search ([`simplify`]), unknotting bounds
//! ([`unknot`]), code generation ([`enumerate`]) and named property suites
//! ([`suites`]).
//!
//! ```
//! use knotoid_core::{warping_degree, GaussCode};
//!
//! let code: GaussCode = "O1+U2+O3+U1+O2+U3+".parse().unwrap();
//! assert_eq!(code.crossing_count(), 3);
//! assert_eq!(warping_degree(&code), 1);
//! ```

pub mod certificate;
pub mod enumerate;
pub mod gauss;
pub mod moves;
pub mod simplify;
pub mod suites;
pub mod unknot;
pub mod warping;

pub use certificate::{verify_certificate, CertFlags, Certificate, Relation, Step, Verified, VerifyError};
pub use enumerate::{all_codes, random_code};
pub use gauss::{parse_code, serialize_code, validate, ChordId, CodeError, CyclicGaussCode, GaussCode, Passage, Role, Sign};
pub use moves::{apply_move, invert_move, legal_moves, IllegalReason, InsertionPolicy, Move, MoveError, MoveKind};
pub use simplify::{bounded_trivialize, descending_certificate, lemma32_eliminate, SearchBudget, TrivialityVerdict};
pub use unknot::{closure_unknot_data, unknot_search, warping_unknot_certificate, OpKind, UnknotResult};
pub use warping::{report, warping_degree, warping_degree_at, Alternation, InvariantReport};
