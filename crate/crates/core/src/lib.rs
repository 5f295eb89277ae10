//! Synthesis of lexical transfer rules from word equivalences.
//!
//! A lexical transfer rule pairs word:category items on a source and a target
//! side, linked by shared index variables:
//!
//! ```text
//! wonderland:n(A) <-> país:n(A) & de:p(A,B) & las:d(B) & maravillas:n(B)
//! ```
//!
//! Given only the word pair `wonderland <-> país de las maravillas`, the
//! library proposes complete rules either by matching an inventory of
//! templates (rules with the words removed) or by parsing the target words
//! with an indexed grammar under a phrasal template such as
//! `n(A) <-> NBAR(A)`.

pub mod cli;
pub mod diagnostics;
pub mod extraction;
pub mod generation;
pub mod grammar;
pub mod lexicon;
pub mod model;

pub use diagnostics::{Diagnostic, DiagnosticKind};
pub use extraction::{CoverageRow, InventoryEntry};
pub use generation::{
    Candidate, EquivalenceOutcome, Generator, Placeholders, Provenance, WordEquivalence,
};
pub use grammar::{Grammar, GrammarRule, ParseResult, ParseTree};
pub use lexicon::{Lexicon, UnknownPolicy};
pub use model::{
    CatSig, IndexVar, LexCat, LexicalItem, Ltr, PhrasalCat, PhrasalTemplate, Side, SyntaxError,
    Template,
};
