//! Simplicity analysis for the universal Cuntz–Pimsner algebra `O_G` of a
//! multispinal self-similar group `G(A, B, Ψ)`.
//!
//! The pipeline is:
//!
//! 1. [`group`]: finite groups given by Cayley tables, verified
//!    homomorphisms and free actions.
//! 2. [`model`]: the validated multispinal instance, with the derived sets
//!    `Y`, `ℬ·𝒜` and the nucleus.
//! 3. [`action`]: the self-similar action as a transducer over agents.
//! 4. [`measure`]: exact fixed-point measures `ψ(a) = μ(Fix a)`.
//! 5. [`simplicity`]: the Gram matrix `[ψ(a⁻¹b)]`, its determinant, the
//!    kernel-intersection cross-check, and the final verdict.
//!
//! All verdict paths use exact rational arithmetic from [`linalg`].
//!
//! ```
//! use multispinal::fixtures;
//! use multispinal::simplicity::{analyze, AnalysisOptions, Verdict};
//!
//! let instance = fixtures::grigorchuk();
//! let report = analyze(&instance, &AnalysisOptions::default()).unwrap();
//! assert_eq!(report.verdict, Verdict::Simple);
//! assert_eq!(report.scaled_determinant.to_string(), "896");
//! ```

pub mod action;
pub mod document;
pub mod fixtures;
pub mod group;
pub mod linalg;
pub mod measure;
pub mod model;
pub mod random;
pub mod report;
pub mod simplicity;

pub use action::{Agent, EventuallyPeriodicWord, GermVerdict, Word};
pub use group::{FiniteAction, FiniteGroup, Homomorphism};
pub use linalg::{Rational, RationalMatrix};
pub use model::{LetterMap, MultispinalInstance};
