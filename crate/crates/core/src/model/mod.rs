//! Term algebra for transfer rules: index variables, lexical and phrasal
//! categories, lexical items, rules and templates.
//!
//! Index variables are opaque logic variables. Their scope is the whole rule
//! (or template): the same name on both sides denotes the same variable.
//! Two templates that differ only by a consistent renaming of variables are
//! alpha-equivalent; [`Template::canonicalize`] picks one representative per
//! class by naming variables in order of first occurrence.

pub(crate) mod syntax;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub use syntax::{
    content_lines, parse_lexcat, parse_ltr_line, parse_phrasal_cat, parse_phrasal_template_line,
    parse_template_line, read_ltr_file, read_phrasal_template_file, read_template_file,
    SyntaxError,
};

/// Name of a logic variable, e.g. `A`, `B2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexVar(String);

impl IndexVar {
    pub fn new(name: impl Into<String>) -> Result<Self, SyntaxError> {
        let name = name.into();
        if is_var_name(&name) {
            Ok(IndexVar(name))
        } else {
            Err(SyntaxError::new(1, format!("invalid index variable `{name}`")))
        }
    }

    /// The `n`-th name of the canonical alphabet: `A`..`Z`, `AA`, `AB`, ...
    pub fn nth(n: usize) -> Self {
        IndexVar(alpha_name(n))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for IndexVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

/// Bijective base-26 naming: 0 -> A, 25 -> Z, 26 -> AA, 27 -> AB, ...
pub(crate) fn alpha_name(mut n: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Hands out canonical variable names that are not in a reserved set.
#[derive(Debug, Clone, Default)]
pub(crate) struct FreshNames {
    reserved: BTreeSet<String>,
    next: usize,
}

impl FreshNames {
    pub(crate) fn avoiding<I, S>(reserved: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FreshNames {
            reserved: reserved.into_iter().map(Into::into).collect(),
            next: 0,
        }
    }

    pub(crate) fn fresh(&mut self) -> IndexVar {
        loop {
            let name = alpha_name(self.next);
            self.next += 1;
            if !self.reserved.contains(&name) {
                return IndexVar(name);
            }
        }
    }
}

/// Category identity: name plus arity. `iv/3` and `iv/2` are distinct.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CatSig {
    pub name: String,
    pub arity: usize,
}

impl CatSig {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        CatSig { name: name.into(), arity }
    }
}

impl fmt::Display for CatSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A lexical category such as `p(A,D)`. Names are lowercase-initial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexCat {
    pub name: String,
    pub indices: Vec<IndexVar>,
}

impl LexCat {
    pub fn new(name: impl Into<String>, indices: Vec<IndexVar>) -> Self {
        LexCat { name: name.into(), indices }
    }

    pub fn sig(&self) -> CatSig {
        CatSig::new(self.name.clone(), self.indices.len())
    }

    fn rename(&self, map: &HashMap<IndexVar, IndexVar>) -> LexCat {
        LexCat {
            name: self.name.clone(),
            indices: self.indices.iter().map(|v| map[v].clone()).collect(),
        }
    }
}

impl fmt::Display for LexCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        write_indices(f, &self.indices)
    }
}

/// A phrasal category, optionally slashed with gap categories: `VP(A,B)/NP(D)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhrasalCat {
    pub name: String,
    pub indices: Vec<IndexVar>,
    pub gaps: Vec<PhrasalCat>,
}

impl PhrasalCat {
    pub fn new(name: impl Into<String>, indices: Vec<IndexVar>) -> Self {
        PhrasalCat { name: name.into(), indices, gaps: Vec::new() }
    }

    pub fn with_gap(mut self, gap: PhrasalCat) -> Self {
        self.gaps.push(gap);
        self
    }

    /// Indices of the category followed by the indices of each gap.
    pub fn all_vars(&self) -> impl Iterator<Item = &IndexVar> {
        self.indices
            .iter()
            .chain(self.gaps.iter().flat_map(|g| g.indices.iter()))
    }

    /// Gap category names, sorted (the multiset signature of the gaps).
    pub fn gap_signature(&self) -> Vec<String> {
        let mut names: Vec<String> = self.gaps.iter().map(|g| g.name.clone()).collect();
        names.sort();
        names
    }

    fn rename(&self, map: &HashMap<IndexVar, IndexVar>) -> PhrasalCat {
        PhrasalCat {
            name: self.name.clone(),
            indices: self.indices.iter().map(|v| map[v].clone()).collect(),
            gaps: self.gaps.iter().map(|g| g.rename(map)).collect(),
        }
    }
}

impl fmt::Display for PhrasalCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        write_indices(f, &self.indices)?;
        for gap in &self.gaps {
            write!(f, "/{gap}")?;
        }
        Ok(())
    }
}

fn write_indices(f: &mut fmt::Formatter<'_>, indices: &[IndexVar]) -> fmt::Result {
    if indices.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, v) in indices.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        f.write_str(v.as_str())?;
    }
    f.write_str(")")
}

/// A word paired with its lexical category, `sit:iv(A,B,C)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexicalItem {
    pub word: String,
    pub cat: LexCat,
}

impl LexicalItem {
    pub fn new(word: impl Into<String>, cat: LexCat) -> Self {
        LexicalItem { word: word.into(), cat }
    }
}

impl fmt::Display for LexicalItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.word, self.cat)
    }
}

/// Which side of a bilingual rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

/// A lexical transfer rule: word-bearing items on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ltr {
    source: Vec<LexicalItem>,
    target: Vec<LexicalItem>,
}

impl Ltr {
    pub fn new(source: Vec<LexicalItem>, target: Vec<LexicalItem>) -> Result<Self, SyntaxError> {
        if source.is_empty() || target.is_empty() {
            return Err(SyntaxError::new(1, "both sides of a rule must be nonempty"));
        }
        Ok(Ltr { source, target })
    }

    pub fn source(&self) -> &[LexicalItem] {
        &self.source
    }

    pub fn target(&self) -> &[LexicalItem] {
        &self.target
    }

    pub fn side(&self, side: Side) -> &[LexicalItem] {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }

    /// Drops every word and canonicalizes the remaining category pattern.
    pub fn strip_words(&self) -> Template {
        Template {
            source: self.source.iter().map(|i| i.cat.clone()).collect(),
            target: self.target.iter().map(|i| i.cat.clone()).collect(),
        }
        .canonicalize()
    }

    /// Alpha-equivalent rule with variables named by first occurrence.
    pub fn canonicalize(&self) -> Ltr {
        let order = first_occurrence(
            self.source
                .iter()
                .chain(&self.target)
                .flat_map(|i| i.cat.indices.iter()),
        );
        let map = canonical_map(&order);
        let rename = |items: &[LexicalItem]| {
            items
                .iter()
                .map(|i| LexicalItem::new(i.word.clone(), i.cat.rename(&map)))
                .collect()
        };
        Ltr { source: rename(&self.source), target: rename(&self.target) }
    }

    pub fn is_alpha_equivalent(&self, other: &Ltr) -> bool {
        self.canonicalize() == other.canonicalize()
    }
}

impl fmt::Display for Ltr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.source, " & ")?;
        f.write_str(" <-> ")?;
        write_joined(f, &self.target, " & ")
    }
}

fn write_joined<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

/// A transfer rule with its words removed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Template {
    source: Vec<LexCat>,
    target: Vec<LexCat>,
}

impl Template {
    pub fn new(source: Vec<LexCat>, target: Vec<LexCat>) -> Result<Self, SyntaxError> {
        if source.is_empty() || target.is_empty() {
            return Err(SyntaxError::new(1, "both sides of a template must be nonempty"));
        }
        Ok(Template { source, target })
    }

    pub fn source(&self) -> &[LexCat] {
        &self.source
    }

    pub fn target(&self) -> &[LexCat] {
        &self.target
    }

    pub fn side(&self, side: Side) -> &[LexCat] {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }

    pub fn vars(&self) -> BTreeSet<IndexVar> {
        self.source
            .iter()
            .chain(&self.target)
            .flat_map(|c| c.indices.iter().cloned())
            .collect()
    }

    /// Renames variables to `A`, `B`, ... by first occurrence, scanning the
    /// source side then the target side left to right.
    pub fn canonicalize(&self) -> Template {
        let order = first_occurrence(self.source.iter().chain(&self.target).flat_map(|c| c.indices.iter()));
        let map = canonical_map(&order);
        Template {
            source: self.source.iter().map(|c| c.rename(&map)).collect(),
            target: self.target.iter().map(|c| c.rename(&map)).collect(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    /// Applies a variable renaming. Variables missing from `map` are kept.
    pub fn rename_with(&self, map: &HashMap<IndexVar, IndexVar>) -> Template {
        let total: HashMap<IndexVar, IndexVar> = self
            .vars()
            .into_iter()
            .map(|v| {
                let to = map.get(&v).cloned().unwrap_or_else(|| v.clone());
                (v, to)
            })
            .collect();
        Template {
            source: self.source.iter().map(|c| c.rename(&total)).collect(),
            target: self.target.iter().map(|c| c.rename(&total)).collect(),
        }
    }

    /// Pairs each side with words, in order. Lengths must agree.
    pub fn instantiate(&self, source_words: &[String], target_words: &[String]) -> Option<Ltr> {
        if source_words.len() != self.source.len() || target_words.len() != self.target.len() {
            return None;
        }
        let zip = |words: &[String], cats: &[LexCat]| {
            words
                .iter()
                .zip(cats)
                .map(|(w, c)| LexicalItem::new(w.clone(), c.clone()))
                .collect()
        };
        Some(Ltr {
            source: zip(source_words, &self.source),
            target: zip(target_words, &self.target),
        })
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.source, " & ")?;
        f.write_str(" <-> ")?;
        write_joined(f, &self.target, " & ")
    }
}

/// A template whose phrasal side is a disjunction of phrasal categories and
/// whose other side is a sequence of lexical categories.
///
/// The phrasal side is normally the target (`iv(A,B,C) & adv(C) & p(A,D) <->
/// VP(A,B)/NP(D)`); abstraction over source sides yields the mirror form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhrasalTemplate {
    lexical: Vec<LexCat>,
    alternatives: Vec<PhrasalCat>,
    phrasal_side: Side,
}

impl PhrasalTemplate {
    pub fn new(
        lexical: Vec<LexCat>,
        alternatives: Vec<PhrasalCat>,
        phrasal_side: Side,
    ) -> Result<Self, SyntaxError> {
        if lexical.is_empty() || alternatives.is_empty() {
            return Err(SyntaxError::new(1, "phrasal template sides must be nonempty"));
        }
        let mut pt = PhrasalTemplate { lexical, alternatives, phrasal_side };
        pt.dedup_alternatives();
        Ok(pt)
    }

    /// Convenience for the usual lexical-source / phrasal-target form.
    pub fn with_phrasal_target(
        source: Vec<LexCat>,
        alternatives: Vec<PhrasalCat>,
    ) -> Result<Self, SyntaxError> {
        Self::new(source, alternatives, Side::Target)
    }

    pub fn lexical(&self) -> &[LexCat] {
        &self.lexical
    }

    pub fn alternatives(&self) -> &[PhrasalCat] {
        &self.alternatives
    }

    pub fn phrasal_side(&self) -> Side {
        self.phrasal_side
    }

    pub fn lexical_side(&self) -> Side {
        match self.phrasal_side {
            Side::Source => Side::Target,
            Side::Target => Side::Source,
        }
    }

    pub fn vars(&self) -> BTreeSet<IndexVar> {
        self.lexical
            .iter()
            .flat_map(|c| c.indices.iter())
            .chain(self.alternatives.iter().flat_map(|a| a.all_vars()))
            .cloned()
            .collect()
    }

    fn dedup_alternatives(&mut self) {
        let mut seen = BTreeSet::new();
        let lexical = self.lexical.clone();
        let side = self.phrasal_side;
        self.alternatives.retain(|alt| {
            let single = PhrasalTemplate {
                lexical: lexical.clone(),
                alternatives: vec![alt.clone()],
                phrasal_side: side,
            }
            .canonicalize();
            seen.insert(single.to_string())
        });
    }

    /// Variables named by first occurrence in textual order (left side first).
    pub fn canonicalize(&self) -> PhrasalTemplate {
        let lex_vars = self.lexical.iter().flat_map(|c| c.indices.iter());
        let alt_vars = self.alternatives.iter().flat_map(|a| a.all_vars());
        let order = match self.phrasal_side {
            Side::Target => first_occurrence(lex_vars.chain(alt_vars)),
            Side::Source => first_occurrence(alt_vars.chain(lex_vars)),
        };
        let map = canonical_map(&order);
        PhrasalTemplate {
            lexical: self.lexical.iter().map(|c| c.rename(&map)).collect(),
            alternatives: self.alternatives.iter().map(|a| a.rename(&map)).collect(),
            phrasal_side: self.phrasal_side,
        }
    }

    /// The lexical template obtained by replacing the phrasal side with `cats`.
    pub fn substitute(&self, cats: Vec<LexCat>) -> Result<Template, SyntaxError> {
        match self.phrasal_side {
            Side::Target => Template::new(self.lexical.clone(), cats),
            Side::Source => Template::new(cats, self.lexical.clone()),
        }
    }
}

impl fmt::Display for PhrasalTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phrasal_side {
            Side::Target => {
                write_joined(f, &self.lexical, " & ")?;
                f.write_str(" <-> ")?;
                write_joined(f, &self.alternatives, " | ")
            }
            Side::Source => {
                write_joined(f, &self.alternatives, " | ")?;
                f.write_str(" <-> ")?;
                write_joined(f, &self.lexical, " & ")
            }
        }
    }
}

fn first_occurrence<'a>(vars: impl Iterator<Item = &'a IndexVar>) -> Vec<IndexVar> {
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    for v in vars {
        if seen.insert(v) {
            order.push(v.clone());
        }
    }
    order
}

fn canonical_map(order: &[IndexVar]) -> HashMap<IndexVar, IndexVar> {
    order
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), IndexVar::nth(i)))
        .collect()
}
