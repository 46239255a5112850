//! Symbolic machinery for reducing word-problem instances to manifold
//! recognition instances.
//!
//! The crate is organized around a pipeline:
//!
//! 1. [`words`] and [`presentations`] give the basic objects: freely reduced
//!    words and finite presentations, with a line-oriented text format.
//! 2. [`abelian`] computes exact Smith normal forms and abelianized
//!    generator orders; [`adjan_rabin::check_condition_21`] uses them to
//!    certify that a seed presentation is eligible for the two-generator
//!    construction.
//! 3. [`adjan_rabin`] builds, for a seed presentation G and a word w, the
//!    enlarged presentation Q_w and its two-generator Tietze reduction P_w.
//!    The group presented by P_w is trivial exactly when w is trivial in G.
//! 4. [`freebasis`], [`enumerate`], and [`quotients`] are the verification
//!    oracles: Nielsen reduction, Todd-Coxeter coset enumeration, finite
//!    quotient counting, and the syllable normal form for free products of
//!    cyclic groups.
//! 5. [`handles`] does the bookkeeping for the associated 5-dimensional
//!    handle complexes and the handle-slide reduction of attaching classes.
//!
//! The `wp4m` binary exposes each stage as a subcommand; [`pipeline`] wires
//! them together into one deterministic report.

pub mod abelian;
pub mod adjan_rabin;
pub mod enumerate;
pub mod freebasis;
pub mod handles;
pub mod pipeline;
pub mod presentations;
pub mod quotients;
pub mod report;
pub mod word_problem;
pub mod words;

pub use presentations::Presentation;
pub use words::Word;
