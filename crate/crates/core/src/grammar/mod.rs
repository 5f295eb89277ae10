//! Indexed context-free grammars with slash (gap) categories.
//!
//! Rules rewrite a phrasal category into a sequence of phrasal and lexical
//! categories, or into `eps`. Index variables are scoped to a rule; every
//! application of a rule gets fresh copies. Gap threading is written out by
//! the grammar author:
//!
//! ```text
//! VP(A,B)/NP(D) -> VP(A,B,E) PP(A,D)/NP(D)
//! PP(A,B)/NP(C) -> p(A,B) NP(B)/NP(C)
//! NP(D)/NP(D) -> eps
//! ```

mod expand;
mod parser;
mod unify;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::model::{content_lines, CatSig, LexCat, PhrasalCat, SyntaxError};

pub use parser::{ParseOptions, ParseResult, ParseTree, Terminal, Token};

/// One right-hand-side symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Phrasal(PhrasalCat),
    Lexical(LexCat),
    Epsilon,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Phrasal(c) => c.fmt(f),
            Symbol::Lexical(c) => c.fmt(f),
            Symbol::Epsilon => f.write_str("eps"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrammarRule {
    pub lhs: PhrasalCat,
    pub rhs: Vec<Symbol>,
}

impl GrammarRule {
    pub fn is_epsilon(&self) -> bool {
        matches!(self.rhs.as_slice(), [Symbol::Epsilon])
    }
}

impl fmt::Display for GrammarRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for s in &self.rhs {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

/// Category shape: everything about a category except its variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Shape {
    Phrasal { name: String, arity: usize, gaps: Vec<(String, usize)> },
    Lexical(CatSig),
}

impl Shape {
    pub(crate) fn of_phrasal(c: &PhrasalCat) -> Shape {
        Shape::Phrasal {
            name: c.name.clone(),
            arity: c.indices.len(),
            gaps: c.gaps.iter().map(|g| (g.name.clone(), g.indices.len())).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Grammar {
    rules: Vec<GrammarRule>,
    preterminals: BTreeSet<CatSig>,
    shapes: Vec<Shape>,
    shape_ids: HashMap<Shape, usize>,
    compiled: Vec<CompiledRule>,
    by_lhs: Vec<Vec<usize>>,
}

/// A category occurrence inside a compiled rule: shape plus rule-local slots.
#[derive(Debug, Clone)]
pub(crate) struct Slot {
    pub(crate) shape: usize,
    pub(crate) args: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledRule {
    pub(crate) lhs: Slot,
    pub(crate) rhs: Vec<Slot>,
    pub(crate) epsilon: bool,
    pub(crate) locals: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("line {line}: `eps` must be the only symbol on the right-hand side")]
    MisplacedEpsilon { line: usize },
    #[error("line {line}: empty right-hand side (write `eps`)")]
    EmptyRhs { line: usize },
}

impl Grammar {
    /// Parses a grammar file: one `LHS -> SYM SYM ...` rule per line.
    pub fn parse(text: &str) -> Result<Self, GrammarError> {
        let mut rules = Vec::new();
        for (n, line) in content_lines(text) {
            rules.push(parse_rule(line).map_err(|e| match e {
                GrammarError::Syntax(s) => GrammarError::Syntax(s.at_line(n)),
                GrammarError::MisplacedEpsilon { .. } => GrammarError::MisplacedEpsilon { line: n },
                GrammarError::EmptyRhs { .. } => GrammarError::EmptyRhs { line: n },
            })?);
        }
        Self::from_rules(rules)
    }

    pub fn from_rules(rules: Vec<GrammarRule>) -> Result<Self, GrammarError> {
        for (i, r) in rules.iter().enumerate() {
            if r.rhs.is_empty() {
                return Err(GrammarError::EmptyRhs { line: i + 1 });
            }
            if r.rhs.len() > 1 && r.rhs.contains(&Symbol::Epsilon) {
                return Err(GrammarError::MisplacedEpsilon { line: i + 1 });
            }
        }
        let mut g = Grammar {
            rules: Vec::new(),
            preterminals: BTreeSet::new(),
            shapes: Vec::new(),
            shape_ids: HashMap::new(),
            compiled: Vec::new(),
            by_lhs: Vec::new(),
        };
        for r in &rules {
            let mut locals: HashMap<String, usize> = HashMap::new();
            let mut slot_of = |vars: &mut dyn Iterator<Item = &str>| -> Vec<usize> {
                vars.map(|v| {
                    let next = locals.len();
                    *locals.entry(v.to_string()).or_insert(next)
                })
                .collect()
            };
            let lhs_args = slot_of(&mut r.lhs.all_vars().map(|v| v.as_str()));
            let lhs = Slot { shape: g.intern(Shape::of_phrasal(&r.lhs)), args: lhs_args };
            let mut rhs = Vec::new();
            for s in &r.rhs {
                match s {
                    Symbol::Phrasal(c) => {
                        let args = slot_of(&mut c.all_vars().map(|v| v.as_str()));
                        rhs.push(Slot { shape: g.intern(Shape::of_phrasal(c)), args });
                    }
                    Symbol::Lexical(c) => {
                        g.preterminals.insert(c.sig());
                        let args = slot_of(&mut c.indices.iter().map(|v| v.as_str()));
                        rhs.push(Slot { shape: g.intern(Shape::Lexical(c.sig())), args });
                    }
                    Symbol::Epsilon => {}
                }
            }
            g.compiled.push(CompiledRule { lhs, rhs, epsilon: r.is_epsilon(), locals: locals.len() });
        }
        g.by_lhs = vec![Vec::new(); g.shapes.len()];
        for (i, c) in g.compiled.iter().enumerate() {
            g.by_lhs[c.lhs.shape].push(i);
        }
        g.rules = rules;
        Ok(g)
    }

    fn intern(&mut self, shape: Shape) -> usize {
        if let Some(&id) = self.shape_ids.get(&shape) {
            return id;
        }
        let id = self.shapes.len();
        self.shapes.push(shape.clone());
        self.shape_ids.insert(shape, id);
        id
    }

    pub(crate) fn shape_id(&self, shape: &Shape) -> Option<usize> {
        self.shape_ids.get(shape).copied()
    }

    pub fn rules(&self) -> &[GrammarRule] {
        &self.rules
    }

    /// Every lexical category (name, arity) used on a right-hand side.
    pub fn preterminals(&self) -> &BTreeSet<CatSig> {
        &self.preterminals
    }

    /// Distinct left-hand-side categories, with rule-local variable names,
    /// in order of first appearance. These are the possible start symbols.
    pub fn start_categories(&self) -> Vec<PhrasalCat> {
        let mut seen = BTreeSet::new();
        self.rules
            .iter()
            .filter(|r| seen.insert(Shape::of_phrasal(&r.lhs)))
            .map(|r| r.lhs.clone())
            .collect()
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

pub(crate) fn parse_rule(line: &str) -> Result<GrammarRule, GrammarError> {
    use crate::model::syntax::Cursor;
    let mut cur = Cursor::new(line);
    let lhs = cur.phrasal()?;
    if !cur.eat("->") {
        return Err(cur.err(format!("expected `->`, found {}", cur.describe_here())).into());
    }
    let mut rhs = Vec::new();
    while !cur.at_end() {
        if cur.keyword("eps") {
            rhs.push(Symbol::Epsilon);
        } else if cur.starts_phrasal() {
            rhs.push(Symbol::Phrasal(cur.phrasal()?));
        } else {
            rhs.push(Symbol::Lexical(cur.lexcat()?));
        }
    }
    if rhs.is_empty() {
        return Err(GrammarError::EmptyRhs { line: 0 });
    }
    if rhs.len() > 1 && rhs.contains(&Symbol::Epsilon) {
        return Err(GrammarError::MisplacedEpsilon { line: 0 });
    }
    Ok(GrammarRule { lhs, rhs })
}
