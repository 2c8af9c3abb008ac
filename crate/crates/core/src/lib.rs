//! Numerical verification of the Nunokawa-type boundary lemma for analytic
//! functions on the unit disk.
//!
//! Given `p` analytic in the disk with `p(0) = 1` and a level `0 <= alpha < 1`,
//! the crate locates the first points `z0` where `Re p` reaches `alpha`,
//! computes the Jack quantity `m` and the quantity `k` with
//! `z0 p'(z0) / (p(z0) - alpha) = i k`, and checks the decomposition of
//! `z0 p'(z0) / p(z0)` and the bounds on `k`.
//!
//! ```
//! use nunokawa::{corpus, contact, lemma, LevelParameter, SearchConfig, Tolerances};
//!
//! let alpha = LevelParameter::new(0.5).unwrap();
//! let p = corpus::paper_special();
//! let outcome = contact::first_contact(&p, alpha, &SearchConfig::default()).unwrap();
//! for c in outcome.contacts() {
//!     let report = lemma::verify_theorem(&p, alpha, c, &Tolerances::default()).unwrap();
//!     assert!(report.passed());
//!     assert!((report.k.abs() - 2.0).abs() < 1e-8);
//! }
//! ```

pub mod analytic;
pub mod cli;
pub mod contact;
pub mod corpus;
pub mod error;
pub mod lemma;
pub mod plot;
pub mod poly;
pub mod tolerances;
pub mod transforms;

pub use analytic::{AnalyticMap, HerglotzForm, HerglotzMixture};
pub use contact::{BoundaryContact, ContactOutcome, SearchConfig};
pub use error::{LemmaError, Result};
pub use lemma::NunokawaReport;
pub use num_complex::Complex64;
pub use poly::Polynomial;
pub use tolerances::Tolerances;
pub use transforms::{ContactValue, LevelParameter};
