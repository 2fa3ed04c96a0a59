//! Opaque cubical type theory, parameterized by an interval theory.
//!
//! The crate is organized bottom-up:
//!
//! * [`interval`]: algebraic theories of the interval (`cart`, `cart-rev`,
//!   `dl`, `dm`), their word problems, duality, and extension by reversal.
//! * [`cofsolve`]: cofibration entailment over a chosen interval theory.
//! * [`syntax`]: raw terms, telescopes, substitution, parsing, printing.
//! * [`kernel`]: weak head normalization, conversion, bidirectional checking.
//! * [`derived`]: reusable term builders (path composition, filling
//!   combinators, contractibility gadgets) shared by tests and translators.
//! * [`twist`]: the source-to-target translation that eliminates interval
//!   reversal, plus its derived-term library.
//! * [`span`]: a span-model fragment built over a pair of translators.

pub mod cofsolve;
pub mod derived;
pub mod interval;
pub mod kernel;
pub mod span;
pub mod syntax;
pub mod testgen;
pub mod twist;
