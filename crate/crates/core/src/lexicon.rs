//! Monolingual word -> category lookup with an unknown-word policy.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diagnostics::Diagnostic;
use crate::grammar::Grammar;
use crate::model::{content_lines, CatSig, SyntaxError};

/// What to do with a word that is not in the lexicon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownPolicy {
    /// Refuse: lookup fails with [`LexiconError::UnknownWord`].
    Block,
    /// The word may be any category of the active category universe
    /// (for grammar-driven lookup, every preterminal of the grammar).
    Wildcard,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, BTreeSet<CatSig>>,
    fold_case: bool,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `word cat/arity [cat/arity ...]` lines. Repeated words merge.
    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        let mut lex = Lexicon::new();
        for (n, line) in content_lines(text) {
            let mut fields = line.split_whitespace();
            let word = fields.next().expect("content lines are nonblank");
            let mut cats = Vec::new();
            for field in fields {
                cats.push(parse_sig(field).map_err(|m| {
                    let col = line.find(field).map(|b| line[..b].chars().count() + 1).unwrap_or(1);
                    SyntaxError::new(col, m).at_line(n)
                })?);
            }
            if cats.is_empty() {
                return Err(SyntaxError::new(1, format!("word `{word}` has no categories")).at_line(n));
            }
            for c in cats {
                lex.insert(word, c);
            }
        }
        Ok(lex)
    }

    pub fn insert(&mut self, word: &str, cat: CatSig) {
        let key = self.key(word);
        self.entries.entry(key).or_default().insert(cat);
    }

    /// Lowercases stored words and all later lookups.
    pub fn fold_case(mut self) -> Self {
        let entries = std::mem::take(&mut self.entries);
        for (w, cats) in entries {
            self.entries.entry(w.to_lowercase()).or_default().extend(cats);
        }
        self.fold_case = true;
        self
    }

    fn key(&self, word: &str) -> String {
        if self.fold_case {
            word.to_lowercase()
        } else {
            word.to_string()
        }
    }

    pub fn get(&self, word: &str) -> Option<&BTreeSet<CatSig>> {
        self.entries.get(&self.key(word))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.get(word).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Categories of `word`; unknown words resolve against `universe` under
    /// [`UnknownPolicy::Wildcard`].
    pub fn lookup_in(
        &self,
        word: &str,
        policy: UnknownPolicy,
        universe: &BTreeSet<CatSig>,
    ) -> Result<BTreeSet<CatSig>, LexiconError> {
        match (self.get(word), policy) {
            (Some(cats), _) => Ok(cats.clone()),
            (None, UnknownPolicy::Block) => Err(LexiconError::UnknownWord(word.to_string())),
            (None, UnknownPolicy::Wildcard) => Ok(universe.clone()),
        }
    }

    /// Grammar-driven lookup: wildcards expand to the grammar's preterminals.
    pub fn lookup(
        &self,
        word: &str,
        policy: UnknownPolicy,
        grammar: &Grammar,
    ) -> Result<BTreeSet<CatSig>, LexiconError> {
        self.lookup_in(word, policy, grammar.preterminals())
    }

    /// Review hints for one word: an ambiguity note when the word has more
    /// than one category, or an unknown-word note when it is absent.
    pub fn ambiguity_flags(&self, word: &str) -> Vec<Diagnostic> {
        match self.get(word) {
            None => vec![Diagnostic::unknown_word(word)],
            Some(cats) if cats.len() >= 2 => {
                let list: Vec<String> = cats.iter().map(ToString::to_string).collect();
                let same_name = cats
                    .iter()
                    .zip(cats.iter().skip(1))
                    .any(|(a, b)| a.name == b.name);
                let note = if same_name { " (same category, different arity)" } else { "" };
                vec![Diagnostic::ambiguity(format!("`{word}` is {}{note}", list.join(" or ")))]
            }
            Some(_) => Vec::new(),
        }
    }
}

/// One `word cat/arity ...` line per word, in word order.
impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (word, cats) in &self.entries {
            f.write_str(word)?;
            for c in cats {
                write!(f, " {c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub(crate) fn parse_sig(field: &str) -> Result<CatSig, String> {
    let (name, arity) = field
        .split_once('/')
        .ok_or_else(|| format!("expected `name/arity`, found `{field}`"))?;
    let valid_name = name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !valid_name {
        return Err(format!("invalid lexical category name `{name}`"));
    }
    let arity = arity
        .parse::<usize>()
        .map_err(|_| format!("invalid arity in `{field}`"))?;
    Ok(CatSig::new(name, arity))
}
