//! Candidate rule generation from word equivalences.
//!
//! Two routes produce candidates:
//!
//! * enumerative: a ranked inventory of lexical templates is matched
//!   position by position against the lexicon categories of the words;
//! * generative: a phrasal template whose lexical side matches the source
//!   words is selected, the target words are parsed with each of its phrasal
//!   categories as start symbol, and the preterminals of every parse become
//!   the target side of a new rule.
//!
//! Abstraction and derivation move between the two: a lexical template whose
//! side is a self-contained projection of a phrasal category abstracts to a
//! phrasal template, and a phrasal template expands back into lexical ones.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::diagnostics::{Diagnostic, DiagnosticKind};
use crate::extraction::InventoryEntry;
use crate::grammar::{Grammar, ParseOptions, Terminal};
use crate::lexicon::{Lexicon, LexiconError, UnknownPolicy};
use crate::model::{
    content_lines, CatSig, IndexVar, LexCat, LexicalItem, Ltr, PhrasalTemplate, Side, SyntaxError,
    Template,
};

/// Placeholder tokens (`sth`, `algo`, ...) and the phrasal category they stand for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placeholders {
    map: BTreeMap<String, String>,
}

impl Default for Placeholders {
    fn default() -> Self {
        let map = [("sth", "NP"), ("sb", "NP"), ("algo", "NP"), ("algn", "NP")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Placeholders { map }
    }
}

impl Placeholders {
    pub fn empty() -> Self {
        Placeholders { map: BTreeMap::new() }
    }

    /// `token CATEGORY` lines.
    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        let mut map = BTreeMap::new();
        for (n, line) in content_lines(text) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                [tok, cat] if cat.starts_with(|c: char| c.is_ascii_uppercase()) => {
                    map.insert(tok.to_string(), cat.to_string());
                }
                _ => {
                    return Err(SyntaxError::new(1, "expected `token CATEGORY`").at_line(n));
                }
            }
        }
        Ok(Placeholders { map })
    }

    pub fn category(&self, token: &str) -> Option<&str> {
        self.map.get(token).map(String::as_str)
    }
}

impl fmt::Display for Placeholders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (tok, cat) in &self.map {
            writeln!(f, "{tok} {cat}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GapMarker {
    pub side: Side,
    /// Position of the placeholder among the original tokens of its side.
    pub position: usize,
    pub category: String,
}

/// A plain translation pair, with placeholder tokens split off as gap markers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordEquivalence {
    pub source_words: Vec<String>,
    pub target_words: Vec<String>,
    pub gap_markers: Vec<GapMarker>,
    text: String,
}

impl WordEquivalence {
    /// Parses `tokens <-> tokens`.
    pub fn parse(line: &str, placeholders: &Placeholders, fold_case: bool) -> Result<Self, SyntaxError> {
        let line = line.trim();
        let (src, tgt) = line
            .split_once("<->")
            .or_else(|| line.split_once('↔'))
            .ok_or_else(|| SyntaxError::new(1, "expected `<->` between the two sides"))?;
        let fold = |s: &str| if fold_case { s.to_lowercase() } else { s.to_string() };
        let mut gap_markers = Vec::new();
        let mut side_words = |text: &str, side: Side, col: usize| -> Result<Vec<String>, SyntaxError> {
            let tokens: Vec<String> = text.split_whitespace().map(fold).collect();
            if tokens.is_empty() {
                return Err(SyntaxError::new(col, format!("{side} side is empty")));
            }
            let mut words = Vec::new();
            for (position, tok) in tokens.into_iter().enumerate() {
                match placeholders.category(&tok) {
                    Some(cat) => gap_markers.push(GapMarker { side, position, category: cat.to_string() }),
                    None => words.push(tok),
                }
            }
            if words.is_empty() {
                return Err(SyntaxError::new(col, format!("{side} side has only placeholders")));
            }
            Ok(words)
        };
        let source_words = side_words(src, Side::Source, 1)?;
        let target_words = side_words(tgt, Side::Target, src.chars().count() + 4)?;
        let text = format!(
            "{} <-> {}",
            src.split_whitespace().map(fold).collect::<Vec<_>>().join(" "),
            tgt.split_whitespace().map(fold).collect::<Vec<_>>().join(" ")
        );
        Ok(WordEquivalence { source_words, target_words, gap_markers, text })
    }

    pub fn words(&self, side: Side) -> &[String] {
        match side {
            Side::Source => &self.source_words,
            Side::Target => &self.target_words,
        }
    }

    /// Sorted gap categories that a phrasal category must carry: the target
    /// side's placeholders, or the source side's when the target has none.
    pub fn gap_signature(&self) -> Vec<String> {
        let of = |side| {
            let mut v: Vec<String> = self
                .gap_markers
                .iter()
                .filter(|g| g.side == side)
                .map(|g| g.category.clone())
                .collect();
            v.sort();
            v
        };
        let target = of(Side::Target);
        if target.is_empty() {
            of(Side::Source)
        } else {
            target
        }
    }
}

impl fmt::Display for WordEquivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Reads a word-equivalence file.
pub fn read_equivalences(
    text: &str,
    placeholders: &Placeholders,
    fold_case: bool,
) -> Result<Vec<WordEquivalence>, SyntaxError> {
    content_lines(text)
        .map(|(n, line)| WordEquivalence::parse(line, placeholders, fold_case).map_err(|e| e.at_line(n)))
        .collect()
}

/// Where a candidate came from. Ids are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Template { rank: usize },
    Phrasal { template: usize, alternative: usize, parse: usize },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Template { rank } => write!(f, "template:{rank}"),
            Provenance::Phrasal { template, alternative, parse } => {
                write!(f, "phrasal:{template}/alt:{alternative}/parse:{parse}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub ltr: Ltr,
    pub provenance: Provenance,
    pub diagnostics: Vec<Diagnostic>,
}

/// Candidates plus equivalence-level diagnostics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Generated {
    pub candidates: Vec<Candidate>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerationError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("{words} words but {cats} categories")]
    LengthMismatch { words: usize, cats: usize },
}

fn source_categories(we: &WordEquivalence, src_lex: &Lexicon) -> Result<Vec<BTreeSet<CatSig>>, GenerationError> {
    let empty = BTreeSet::new();
    we.source_words
        .iter()
        .map(|w| Ok(src_lex.lookup_in(w, UnknownPolicy::Block, &empty)?))
        .collect()
}

fn unknown_target_words(we: &WordEquivalence, tgt_lex: &Lexicon) -> Vec<Diagnostic> {
    we.target_words
        .iter()
        .filter(|w| !tgt_lex.contains(w))
        .map(|w| Diagnostic::new(DiagnosticKind::UnknownWord, format!("target word `{w}` is not in the lexicon; any category accepted")))
        .collect()
}

/// Notes, per candidate, which categories unknown target words were given.
fn guessed_categories(items: &[LexicalItem], tgt_lex: &Lexicon) -> Vec<Diagnostic> {
    items
        .iter()
        .filter(|i| !tgt_lex.contains(&i.word))
        .map(|i| Diagnostic::new(DiagnosticKind::UnknownWord, format!("`{}` taken as {}", i.word, i.cat.sig())))
        .collect()
}

fn push_unique(seen: &mut BTreeSet<String>, out: &mut Vec<Candidate>, c: Candidate) {
    if seen.insert(c.ltr.canonicalize().to_string()) {
        out.push(c);
    }
}

/// Instantiates every inventory template whose categories the words admit.
pub fn generate_enumerative(
    we: &WordEquivalence,
    inv: &[InventoryEntry],
    src_lex: &Lexicon,
    tgt_lex: &Lexicon,
) -> Result<Generated, GenerationError> {
    let src_cats = source_categories(we, src_lex)?;
    let tgt_cats: Vec<Option<&BTreeSet<CatSig>>> = we.target_words.iter().map(|w| tgt_lex.get(w)).collect();
    let mut out = Generated::default();
    let mut seen = BTreeSet::new();
    for entry in inv {
        let t = &entry.template;
        if t.source().len() != src_cats.len() || t.target().len() != tgt_cats.len() {
            continue;
        }
        let src_ok = t.source().iter().zip(&src_cats).all(|(c, cats)| cats.contains(&c.sig()));
        // unknown target words match any category
        let tgt_ok = t
            .target()
            .iter()
            .zip(&tgt_cats)
            .all(|(c, cats)| cats.map_or(true, |cats| cats.contains(&c.sig())));
        if !(src_ok && tgt_ok) {
            continue;
        }
        let ltr = t
            .instantiate(&we.source_words, &we.target_words)
            .expect("lengths checked");
        let diagnostics = guessed_categories(ltr.target(), tgt_lex);
        push_unique(
            &mut seen,
            &mut out.candidates,
            Candidate { ltr, provenance: Provenance::Template { rank: entry.rank }, diagnostics },
        );
    }
    if out.candidates.is_empty() {
        out.diagnostics.push(Diagnostic::new(DiagnosticKind::NoTemplate, "no inventory template matches"));
    }
    Ok(out)
}

/// Phrasal templates (with their 0-based positions) whose lexical side matches
/// the source words and which have an alternative with the right gaps.
pub fn select_phrasal_templates<'a>(
    we: &WordEquivalence,
    pts: &'a [PhrasalTemplate],
    src_lex: &Lexicon,
) -> Result<Vec<(usize, &'a PhrasalTemplate)>, GenerationError> {
    let src_cats = source_categories(we, src_lex)?;
    let gaps = we.gap_signature();
    Ok(pts
        .iter()
        .enumerate()
        .filter(|(_, pt)| {
            pt.phrasal_side() == Side::Target
                && pt.lexical().len() == src_cats.len()
                && pt.lexical().iter().zip(&src_cats).all(|(c, cats)| cats.contains(&c.sig()))
                && pt.alternatives().iter().any(|a| a.gap_signature() == gaps)
        })
        .collect())
}

/// Positional zip of words and instantiated preterminals.
pub fn assemble_rhs(words: &[String], pre: &[LexCat]) -> Result<Vec<LexicalItem>, GenerationError> {
    if words.len() != pre.len() {
        return Err(GenerationError::LengthMismatch { words: words.len(), cats: pre.len() });
    }
    Ok(words.iter().zip(pre).map(|(w, c)| LexicalItem::new(w.clone(), c.clone())).collect())
}

/// Parses the target words under each selected phrasal template.
pub fn generate_generative(
    we: &WordEquivalence,
    pts: &[PhrasalTemplate],
    src_lex: &Lexicon,
    tgt_lex: &Lexicon,
    g: &Grammar,
) -> Result<Generated, GenerationError> {
    let selected = select_phrasal_templates(we, pts, src_lex)?;
    let mut out = Generated::default();
    if selected.is_empty() {
        out.diagnostics.push(Diagnostic::new(DiagnosticKind::NoTemplate, "no phrasal template matches the source words"));
        return Ok(out);
    }
    let terms: Vec<Terminal> = we
        .target_words
        .iter()
        .map(|w| {
            tgt_lex
                .lookup(w, UnknownPolicy::Wildcard, g)
                .map(Terminal::Sigs)
        })
        .collect::<Result<_, _>>()?;
    let gaps = we.gap_signature();
    let mut seen = BTreeSet::new();
    for (pi, pt) in selected {
        let source: Vec<LexicalItem> = we
            .source_words
            .iter()
            .zip(pt.lexical())
            .map(|(w, c)| LexicalItem::new(w.clone(), c.clone()))
            .collect();
        let opts = ParseOptions {
            rigid_start: true,
            avoid: pt.vars().iter().map(|v| v.as_str().to_string()).collect(),
            limit: None,
        };
        let mut produced = 0;
        for (ai, alt) in pt.alternatives().iter().enumerate() {
            if alt.gap_signature() != gaps {
                continue;
            }
            for (pj, parse) in g.parse_terminals(alt, &terms, &opts).into_iter().enumerate() {
                produced += 1;
                let target = assemble_rhs(&we.target_words, &parse.preterminals)?;
                let diagnostics = guessed_categories(&target, tgt_lex);
                let ltr = Ltr::new(source.clone(), target).expect("both sides nonempty");
                push_unique(
                    &mut seen,
                    &mut out.candidates,
                    Candidate {
                        ltr,
                        provenance: Provenance::Phrasal { template: pi + 1, alternative: ai + 1, parse: pj + 1 },
                        diagnostics,
                    },
                );
            }
        }
        if produced == 0 {
            out.diagnostics.push(Diagnostic::new(
                DiagnosticKind::NoParse,
                format!("phrasal template {} ({pt}) does not derive the target words", pi + 1),
            ));
        }
    }
    Ok(out)
}

/// A phrasal template together with the input templates it abstracts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractionClass {
    pub phrasal: PhrasalTemplate,
    /// 0-based positions in the input template list.
    pub members: Vec<usize>,
}

/// Abstracts the chosen side of each template into a phrasal category.
///
/// A side abstracts to a start category when the grammar derives it from that
/// category and the variables it shares with the other side are exactly the
/// category's own indices.
pub fn abstraction_classes(ts: &[Template], g: &Grammar, side: Side) -> Vec<AbstractionClass> {
    let starts = g.start_categories();
    let mut classes: Vec<AbstractionClass> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for (ti, t) in ts.iter().enumerate() {
        let (span, rest) = match side {
            Side::Source => (t.source(), t.target()),
            Side::Target => (t.target(), t.source()),
        };
        let inside: BTreeSet<&IndexVar> = span.iter().flat_map(|c| c.indices.iter()).collect();
        let outside: BTreeSet<&IndexVar> = rest.iter().flat_map(|c| c.indices.iter()).collect();
        let shared: BTreeSet<&IndexVar> = inside.intersection(&outside).copied().collect();
        let terms: Vec<Terminal> = span.iter().cloned().map(Terminal::Cat).collect();
        let opts = ParseOptions {
            rigid_start: false,
            avoid: t.vars().iter().map(|v| v.as_str().to_string()).collect(),
            limit: None,
        };
        for start in &starts {
            for parse in g.parse_terminals(start, &terms, &opts) {
                let root = parse.root().clone();
                let root_vars: BTreeSet<&IndexVar> = root.all_vars().collect();
                if root_vars != shared {
                    continue;
                }
                let pt = PhrasalTemplate::new(rest.to_vec(), vec![root], side)
                    .expect("nonempty sides")
                    .canonicalize();
                let key = pt.to_string();
                match index.get(&key) {
                    Some(&k) => {
                        if classes[k].members.last() != Some(&ti) {
                            classes[k].members.push(ti);
                        }
                    }
                    None => {
                        index.insert(key, classes.len());
                        classes.push(AbstractionClass { phrasal: pt, members: vec![ti] });
                    }
                }
            }
        }
    }
    classes
}

pub fn abstract_templates(ts: &[Template], g: &Grammar, side: Side) -> Vec<PhrasalTemplate> {
    abstraction_classes(ts, g, side).into_iter().map(|c| c.phrasal).collect()
}

/// Lexical templates obtained by expanding each phrasal alternative.
pub fn derive_lexical_templates(pt: &PhrasalTemplate, g: &Grammar, max_len: usize) -> Vec<Template> {
    let avoid: BTreeSet<String> = pt.vars().iter().map(|v| v.as_str().to_string()).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for alt in pt.alternatives() {
        for seq in g.expansions_avoiding(alt, max_len, &avoid) {
            let t = pt.substitute(seq).expect("expansions are nonempty").canonicalize();
            if seen.insert(t.to_string()) {
                out.push(t);
            }
        }
    }
    out
}

/// Output of the full pipeline for one equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceOutcome {
    pub equivalence: WordEquivalence,
    pub candidates: Vec<Candidate>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Both generation routes over shared, read-only resources.
#[derive(Debug, Clone, Default)]
pub struct Generator {
    pub src_lexicon: Lexicon,
    pub tgt_lexicon: Lexicon,
    pub inventory: Vec<InventoryEntry>,
    pub phrasal: Vec<PhrasalTemplate>,
    pub grammar: Option<Grammar>,
    pub first_per_equivalence: bool,
}

impl Generator {
    pub fn generate(&self, we: &WordEquivalence) -> EquivalenceOutcome {
        let mut outcome = EquivalenceOutcome {
            equivalence: we.clone(),
            candidates: Vec::new(),
            diagnostics: Vec::new(),
        };
        let unknown: Vec<&String> = we.source_words.iter().filter(|w| !self.src_lexicon.contains(w)).collect();
        if !unknown.is_empty() {
            outcome.diagnostics.extend(unknown.into_iter().map(|w| {
                Diagnostic::new(DiagnosticKind::UnknownWord, format!("source word `{w}` is not in the lexicon; generation blocked"))
            }));
            return outcome;
        }
        for w in &we.source_words {
            outcome.diagnostics.extend(self.src_lexicon.ambiguity_flags(w));
        }
        outcome.diagnostics.extend(unknown_target_words(we, &self.tgt_lexicon));

        let mut seen = BTreeSet::new();
        let mut runs = Vec::new();
        if !self.inventory.is_empty() {
            runs.push(generate_enumerative(we, &self.inventory, &self.src_lexicon, &self.tgt_lexicon));
        }
        if let (false, Some(g)) = (self.phrasal.is_empty(), &self.grammar) {
            runs.push(generate_generative(we, &self.phrasal, &self.src_lexicon, &self.tgt_lexicon, g));
        }
        let mut notes = Vec::new();
        for run in runs {
            // source words were checked above, so lookups cannot fail
            let run = run.expect("source words are known");
            for c in run.candidates {
                push_unique(&mut seen, &mut outcome.candidates, c);
            }
            notes.extend(run.diagnostics);
        }
        if outcome.candidates.is_empty() && !notes.iter().any(|d| d.kind == DiagnosticKind::NoTemplate) {
            if notes.is_empty() {
                notes.push(Diagnostic::new(DiagnosticKind::NoTemplate, "no templates available"));
            }
        } else if !outcome.candidates.is_empty() {
            notes.retain(|d| d.kind != DiagnosticKind::NoTemplate);
        }
        outcome.diagnostics.extend(notes);
        if self.first_per_equivalence {
            outcome.candidates.truncate(1);
        }
        let n = outcome.candidates.len();
        if n > 1 {
            for c in &mut outcome.candidates {
                c.diagnostics.push(Diagnostic::new(
                    DiagnosticKind::MultipleParses,
                    format!("{n} candidates for this equivalence"),
                ));
            }
        }
        outcome
    }

    /// Generates for every equivalence, in parallel, preserving input order.
    pub fn generate_all(&self, wes: &[WordEquivalence]) -> Vec<EquivalenceOutcome> {
        wes.par_iter().map(|we| self.generate(we)).collect()
    }
}
