//! All-parses parser for indexed grammars.
//!
//! A context-free recognition chart over category shapes (indices ignored)
//! prunes a top-down, leftmost search that carries the index substitution.
//! Results come out in leftmost-derivation order: trees are compared by the
//! preorder sequence of (rule, split points) choices.
//!
//! Cycles through unary and epsilon rules are cut by refusing to expand a
//! node whose (category shape, span) already occurs on the path from the
//! root, so every input has finitely many parses.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use super::unify::{Bindings, VarId};
use super::{Grammar, Shape};
use crate::model::{CatSig, FreshNames, IndexVar, LexCat, PhrasalCat};

/// A word together with the preterminal categories it may realize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub word: String,
    pub cats: BTreeSet<CatSig>,
}

impl Token {
    pub fn new(word: impl Into<String>, cats: impl IntoIterator<Item = CatSig>) -> Self {
        Token { word: word.into(), cats: cats.into_iter().collect() }
    }
}

/// What a single input position can match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terminal {
    /// Any preterminal whose (name, arity) is in the set; indices are free.
    Sigs(BTreeSet<CatSig>),
    /// A preterminal with the same name and arity whose indices unify with
    /// these. The variables are constants shared across the whole input.
    Cat(LexCat),
}

#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Treat the start category's variables as distinct constants (the
    /// default). When false they are ordinary variables and come back bound.
    pub rigid_start: bool,
    /// Names that fresh variables in the output must not take.
    pub avoid: BTreeSet<String>,
    /// Stop after this many distinct parses.
    pub limit: Option<usize>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { rigid_start: true, avoid: BTreeSet::new(), limit: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ParseTree {
    Node { cat: PhrasalCat, rule: usize, children: Vec<ParseTree> },
    Leaf { cat: LexCat, token: usize },
    Epsilon,
}

impl ParseTree {
    /// Category of a node or leaf; `None` for epsilon.
    pub fn label(&self) -> Option<String> {
        match self {
            ParseTree::Node { cat, .. } => Some(cat.to_string()),
            ParseTree::Leaf { cat, .. } => Some(cat.to_string()),
            ParseTree::Epsilon => None,
        }
    }

    /// Bracketed rendering with the input words at the leaves.
    pub fn render(&self, words: &[&str]) -> String {
        let mut s = String::new();
        self.write(&mut s, Some(words));
        s
    }

    fn write(&self, s: &mut String, words: Option<&[&str]>) {
        match self {
            ParseTree::Node { cat, children, .. } => {
                s.push('(');
                s.push_str(&cat.to_string());
                for c in children {
                    s.push(' ');
                    c.write(s, words);
                }
                s.push(')');
            }
            ParseTree::Leaf { cat, token } => {
                s.push('(');
                s.push_str(&cat.to_string());
                s.push(' ');
                match words.and_then(|w| w.get(*token)) {
                    Some(w) => s.push_str(w),
                    None => s.push_str(&format!("@{token}")),
                }
                s.push(')');
            }
            ParseTree::Epsilon => s.push_str("eps"),
        }
    }

    /// Number of epsilon leaves.
    pub fn epsilon_count(&self) -> usize {
        match self {
            ParseTree::Node { children, .. } => children.iter().map(ParseTree::epsilon_count).sum(),
            ParseTree::Leaf { .. } => 0,
            ParseTree::Epsilon => 1,
        }
    }

    /// Nodes (preorder) whose only child is an epsilon leaf.
    pub fn gap_fillers(&self) -> Vec<&PhrasalCat> {
        let mut out = Vec::new();
        self.collect_fillers(&mut out);
        out
    }

    fn collect_fillers<'a>(&'a self, out: &mut Vec<&'a PhrasalCat>) {
        if let ParseTree::Node { cat, children, .. } = self {
            if matches!(children.as_slice(), [ParseTree::Epsilon]) {
                out.push(cat);
            }
            for c in children {
                c.collect_fillers(out);
            }
        }
    }
}

/// Renders with token positions (`@0`, `@1`, ...) at the leaves.
impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, None);
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParseResult {
    pub tree: ParseTree,
    /// Instantiated preterminals, one per input position.
    pub preterminals: Vec<LexCat>,
}

impl ParseResult {
    /// The instantiated start category.
    pub fn root(&self) -> &PhrasalCat {
        match &self.tree {
            ParseTree::Node { cat, .. } => cat,
            _ => unreachable!("parse trees are rooted at a phrasal node"),
        }
    }
}

impl Grammar {
    /// Every parse of `tokens` from `start`, whose variables act as constants.
    pub fn parse_all(&self, start: &PhrasalCat, tokens: &[Token]) -> Vec<ParseResult> {
        let terms: Vec<Terminal> = tokens.iter().map(|t| Terminal::Sigs(t.cats.clone())).collect();
        self.parse_terminals(start, &terms, &ParseOptions::default())
    }

    /// Parses a sequence of categories; a category matches a preterminal with
    /// the same name and arity whose indices unify with its own.
    pub fn parse_cats(&self, start: &PhrasalCat, cats: &[LexCat]) -> Vec<ParseResult> {
        let terms: Vec<Terminal> = cats.iter().cloned().map(Terminal::Cat).collect();
        self.parse_terminals(start, &terms, &ParseOptions::default())
    }

    pub fn parse_terminals(
        &self,
        start: &PhrasalCat,
        terminals: &[Terminal],
        opts: &ParseOptions,
    ) -> Vec<ParseResult> {
        let Some(start_shape) = self.shape_id(&Shape::of_phrasal(start)) else {
            return Vec::new();
        };
        let mut bind = Bindings::default();
        let mut rigid_names: Vec<String> = Vec::new();
        let mut rigid_ids: HashMap<String, VarId> = HashMap::new();
        let mut rigid_var = |bind: &mut Bindings, name: &str| -> VarId {
            if let Some(&v) = rigid_ids.get(name) {
                return v;
            }
            let v = bind.rigid(rigid_names.len());
            rigid_names.push(name.to_string());
            rigid_ids.insert(name.to_string(), v);
            v
        };

        let start_args: Vec<VarId> = if opts.rigid_start {
            start.all_vars().map(|v| rigid_var(&mut bind, v.as_str())).collect()
        } else {
            let mut local: HashMap<&str, VarId> = HashMap::new();
            start
                .all_vars()
                .map(|v| *local.entry(v.as_str()).or_insert_with(|| bind.fresh()))
                .collect()
        };

        let terms: Vec<TermInst> = terminals
            .iter()
            .map(|t| match t {
                Terminal::Sigs(s) => TermInst::Sigs(s.clone()),
                Terminal::Cat(c) => TermInst::Cat(
                    c.sig(),
                    c.indices.iter().map(|v| rigid_var(&mut bind, v.as_str())).collect(),
                ),
            })
            .collect();

        let chart = Chart::build(self, &terms);
        let mut reserved: BTreeSet<String> = rigid_names.iter().cloned().collect();
        reserved.extend(opts.avoid.iter().cloned());

        let mut search = Search {
            g: self,
            terms: &terms,
            chart,
            rigid_names: &rigid_names,
            reserved,
            seen: HashSet::new(),
            out: Vec::new(),
            limit: opts.limit,
        };
        let n = terms.len();
        let state = State {
            bind,
            nodes: vec![Node::Pending],
            goals: vec![Goal { node: 0, shape: start_shape, args: start_args, i: 0, j: n, path: None }],
        };
        search.step(state);
        search.out
    }
}

enum TermInst {
    Sigs(BTreeSet<CatSig>),
    Cat(CatSig, Vec<VarId>),
}

impl TermInst {
    fn admits(&self, sig: &CatSig) -> bool {
        match self {
            TermInst::Sigs(s) => s.contains(sig),
            TermInst::Cat(c, _) => c == sig,
        }
    }
}

/// Context-free recognition over shapes: `derivable(shape, i, j)`.
struct Chart {
    width: usize,
    cells: Vec<bool>,
}

impl Chart {
    fn idx(&self, shape: usize, i: usize, j: usize) -> usize {
        (shape * self.width + i) * self.width + j
    }

    fn get(&self, shape: usize, i: usize, j: usize) -> bool {
        self.cells[self.idx(shape, i, j)]
    }

    fn build(g: &Grammar, terms: &[TermInst]) -> Chart {
        let n = terms.len();
        let width = n + 1;
        let mut chart = Chart { width, cells: vec![false; g.shapes.len() * width * width] };
        for (s, shape) in g.shapes.iter().enumerate() {
            if let Shape::Lexical(sig) = shape {
                for (i, t) in terms.iter().enumerate() {
                    if t.admits(sig) {
                        let k = chart.idx(s, i, i + 1);
                        chart.cells[k] = true;
                    }
                }
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for rule in &g.compiled {
                for i in 0..=n {
                    for j in i..=n {
                        let k = chart.idx(rule.lhs.shape, i, j);
                        if chart.cells[k] {
                            continue;
                        }
                        let ok = if rule.epsilon {
                            i == j
                        } else {
                            let mut reach = vec![false; width];
                            reach[i] = true;
                            for slot in &rule.rhs {
                                let mut next = vec![false; width];
                                for p in i..=j {
                                    if reach[p] {
                                        for q in p..=j {
                                            if chart.get(slot.shape, p, q) {
                                                next[q] = true;
                                            }
                                        }
                                    }
                                }
                                reach = next;
                            }
                            reach[j]
                        };
                        if ok {
                            chart.cells[k] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        chart
    }
}

#[derive(Clone)]
enum Node {
    Pending,
    Inner { rule: usize, shape: usize, args: Vec<VarId>, children: Vec<usize> },
    Leaf { shape: usize, args: Vec<VarId>, token: usize },
    Eps,
}

struct PathLink {
    shape: usize,
    i: usize,
    j: usize,
    up: Option<Rc<PathLink>>,
}

fn on_path(mut link: Option<&Rc<PathLink>>, shape: usize, i: usize, j: usize) -> bool {
    while let Some(l) = link {
        if l.shape == shape && l.i == i && l.j == j {
            return true;
        }
        link = l.up.as_ref();
    }
    false
}

#[derive(Clone)]
struct Goal {
    node: usize,
    shape: usize,
    args: Vec<VarId>,
    i: usize,
    j: usize,
    path: Option<Rc<PathLink>>,
}

#[derive(Clone)]
struct State {
    bind: Bindings,
    nodes: Vec<Node>,
    /// Pending goals; the last one is expanded next.
    goals: Vec<Goal>,
}

struct Search<'a> {
    g: &'a Grammar,
    terms: &'a [TermInst],
    chart: Chart,
    rigid_names: &'a [String],
    reserved: BTreeSet<String>,
    seen: HashSet<String>,
    out: Vec<ParseResult>,
    limit: Option<usize>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.out.len() >= l)
    }

    fn step(&mut self, mut st: State) {
        if self.done() {
            return;
        }
        let Some(goal) = st.goals.pop() else {
            self.emit(&st);
            return;
        };
        match &self.g.shapes[goal.shape] {
            Shape::Lexical(sig) => {
                if goal.j != goal.i + 1 {
                    return;
                }
                match &self.terms[goal.i] {
                    TermInst::Sigs(s) if s.contains(sig) => {}
                    TermInst::Cat(c, vars) if c == sig => {
                        if !st.bind.unify_all(&goal.args, vars) {
                            return;
                        }
                    }
                    _ => return,
                }
                st.nodes[goal.node] = Node::Leaf { shape: goal.shape, args: goal.args, token: goal.i };
                self.step(st);
            }
            Shape::Phrasal { .. } => {
                if !self.chart.get(goal.shape, goal.i, goal.j)
                    || on_path(goal.path.as_ref(), goal.shape, goal.i, goal.j)
                {
                    return;
                }
                let link = Rc::new(PathLink { shape: goal.shape, i: goal.i, j: goal.j, up: goal.path.clone() });
                for &ri in &self.g.by_lhs[goal.shape] {
                    let rule = &self.g.compiled[ri];
                    if rule.epsilon && goal.i != goal.j {
                        continue;
                    }
                    let mut base = st.clone();
                    let locals: Vec<VarId> = (0..rule.locals).map(|_| base.bind.fresh()).collect();
                    let lhs_args: Vec<VarId> = rule.lhs.args.iter().map(|&s| locals[s]).collect();
                    if !base.bind.unify_all(&goal.args, &lhs_args) {
                        continue;
                    }
                    if rule.epsilon {
                        let eps = base.nodes.len();
                        base.nodes.push(Node::Eps);
                        base.nodes[goal.node] =
                            Node::Inner { rule: ri, shape: goal.shape, args: goal.args.clone(), children: vec![eps] };
                        self.step(base);
                        continue;
                    }
                    for bounds in self.splits(ri, goal.i, goal.j) {
                        let mut next = base.clone();
                        let mut children = Vec::with_capacity(rule.rhs.len());
                        let mut goals = Vec::with_capacity(rule.rhs.len());
                        for (k, slot) in rule.rhs.iter().enumerate() {
                            let idx = next.nodes.len();
                            next.nodes.push(Node::Pending);
                            children.push(idx);
                            goals.push(Goal {
                                node: idx,
                                shape: slot.shape,
                                args: slot.args.iter().map(|&s| locals[s]).collect(),
                                i: bounds[k],
                                j: bounds[k + 1],
                                path: Some(link.clone()),
                            });
                        }
                        next.nodes[goal.node] =
                            Node::Inner { rule: ri, shape: goal.shape, args: goal.args.clone(), children };
                        next.goals.extend(goals.into_iter().rev());
                        self.step(next);
                        if self.done() {
                            return;
                        }
                    }
                }
            }
        }
    }

    /// Boundary vectors `[i, p1, ..., j]` splitting the span over the rule's
    /// right-hand side, in lexicographic order, pruned by the chart.
    fn splits(&self, rule: usize, i: usize, j: usize) -> Vec<Vec<usize>> {
        let rhs = &self.g.compiled[rule].rhs;
        let mut out = Vec::new();
        let mut bounds = vec![i];
        self.split_rec(rhs, 0, j, &mut bounds, &mut out);
        out
    }

    fn split_rec(
        &self,
        rhs: &[super::Slot],
        k: usize,
        j: usize,
        bounds: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let p = *bounds.last().expect("nonempty");
        if k == rhs.len() {
            if p == j {
                out.push(bounds.clone());
            }
            return;
        }
        let range = if k + 1 == rhs.len() { j..=j } else { p..=j };
        for q in range {
            if q >= p && self.chart.get(rhs[k].shape, p, q) {
                bounds.push(q);
                self.split_rec(rhs, k + 1, j, bounds, out);
                bounds.pop();
            }
        }
    }

    fn emit(&mut self, st: &State) {
        let mut namer = Namer {
            bind: &st.bind,
            rigid_names: self.rigid_names,
            fresh: FreshNames::avoiding(self.reserved.iter().cloned()),
            names: HashMap::new(),
        };
        let mut preterminals = Vec::new();
        let tree = self.build(st, 0, &mut namer, &mut preterminals);
        let key = tree.to_string();
        if self.seen.insert(key) {
            self.out.push(ParseResult { tree, preterminals });
        }
    }

    fn build(&self, st: &State, idx: usize, namer: &mut Namer<'_>, pre: &mut Vec<LexCat>) -> ParseTree {
        match &st.nodes[idx] {
            Node::Inner { rule, shape, args, children } => {
                let cat = match &self.g.shapes[*shape] {
                    Shape::Phrasal { name, arity, gaps } => {
                        let vars: Vec<IndexVar> = args.iter().map(|&v| namer.name(v)).collect();
                        let mut rest = vars[*arity..].iter();
                        PhrasalCat {
                            name: name.clone(),
                            indices: vars[..*arity].to_vec(),
                            gaps: gaps
                                .iter()
                                .map(|(gname, garity)| {
                                    PhrasalCat::new(gname.clone(), rest.by_ref().take(*garity).cloned().collect())
                                })
                                .collect(),
                        }
                    }
                    Shape::Lexical(_) => unreachable!("inner nodes are phrasal"),
                };
                let children = children.iter().map(|&c| self.build(st, c, namer, pre)).collect();
                ParseTree::Node { cat, rule: *rule, children }
            }
            Node::Leaf { shape, args, token } => {
                let Shape::Lexical(sig) = &self.g.shapes[*shape] else {
                    unreachable!("leaves are lexical")
                };
                let cat = LexCat::new(sig.name.clone(), args.iter().map(|&v| namer.name(v)).collect());
                pre.push(cat.clone());
                ParseTree::Leaf { cat, token: *token }
            }
            Node::Eps => ParseTree::Epsilon,
            Node::Pending => unreachable!("complete states have no pending nodes"),
        }
    }
}

struct Namer<'a> {
    bind: &'a Bindings,
    rigid_names: &'a [String],
    fresh: FreshNames,
    names: HashMap<VarId, IndexVar>,
}

impl Namer<'_> {
    fn name(&mut self, v: VarId) -> IndexVar {
        if let Some(r) = self.bind.rigid_name(v) {
            return IndexVar::new(self.rigid_names[r].clone()).expect("parsed names are valid");
        }
        let root = self.bind.find(v);
        let fresh = &mut self.fresh;
        self.names.entry(root).or_insert_with(|| fresh.fresh()).clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_lexcat, parse_phrasal_cat};

    const NBAR: &str = "NBAR(A) -> n(A)\nNBAR(A) -> n(A) PP(A,B)\nPP(A,B) -> p(A,B) NP(B)\nNP(A) -> d(A) NBAR(A)\n";

    fn cats(s: &str) -> Vec<LexCat> {
        s.split_whitespace().map(|c| parse_lexcat(c).unwrap()).collect()
    }

    #[test]
    fn nbar_projection_parses_once() {
        let g = Grammar::parse(NBAR).unwrap();
        let start = parse_phrasal_cat("NBAR(A)").unwrap();
        let r = g.parse_cats(&start, &cats("n(A) p(A,B) d(B) n(B)"));
        assert_eq!(r.len(), 1);
        assert_eq!(
            r[0].tree.to_string(),
            "(NBAR(A) (n(A) @0) (PP(A,B) (p(A,B) @1) (NP(B) (d(B) @2) (NBAR(B) (n(B) @3)))))"
        );
        assert_eq!(g.parse_cats(&start, &cats("n(A)")).len(), 1);
        assert!(g.parse_cats(&start, &cats("p(A,B)")).is_empty());
    }

    #[test]
    fn rigid_input_variables_must_match_the_grammar_pattern() {
        let g = Grammar::parse(NBAR).unwrap();
        let start = parse_phrasal_cat("NBAR(A)").unwrap();
        // d(C) breaks the p/d coindexing required by the grammar
        assert!(g.parse_cats(&start, &cats("n(A) p(A,B) d(C) n(C)")).is_empty());
        // the start index must be the head noun's
        assert!(g.parse_cats(&start, &cats("n(B)")).is_empty());
    }

    #[test]
    fn flexible_start_comes_back_bound() {
        let g = Grammar::parse(NBAR).unwrap();
        let start = parse_phrasal_cat("NBAR(X)").unwrap();
        let opts = ParseOptions { rigid_start: false, ..Default::default() };
        let r = g.parse_terminals(&start, &[Terminal::Cat(parse_lexcat("n(Q)").unwrap())], &opts);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].root().to_string(), "NBAR(Q)");
    }

    #[test]
    fn unary_cycles_terminate() {
        let g = Grammar::parse("X(A) -> Y(A)\nY(A) -> X(A)\nX(A) -> a(A)\nY(A) -> eps\nX(A) -> X(A) Y(A)\n").unwrap();
        let start = parse_phrasal_cat("X(P)").unwrap();
        let toks = [Token::new("w", [CatSig::new("a", 1)])];
        let r = g.parse_all(&start, &toks);
        assert!(!r.is_empty());
        let distinct: HashSet<_> = r.iter().map(|p| p.tree.to_string()).collect();
        assert_eq!(distinct.len(), r.len());
    }

    #[test]
    fn limit_stops_early() {
        let g = Grammar::parse("X(A) -> a(A)\nX(A) -> X(A) X(A)\n").unwrap();
        let start = parse_phrasal_cat("X(P)").unwrap();
        let toks: Vec<Token> = (0..5).map(|_| Token::new("w", [CatSig::new("a", 1)])).collect();
        let all = g.parse_all(&start, &toks);
        assert_eq!(all.len(), 14); // Catalan(4)
        let opts = ParseOptions { limit: Some(3), ..Default::default() };
        let terms: Vec<Terminal> = toks.iter().map(|t| Terminal::Sigs(t.cats.clone())).collect();
        let some = g.parse_terminals(&start, &terms, &opts);
        assert_eq!(some, all[..3].to_vec());
    }

    #[test]
    fn unknown_start_shape_yields_nothing() {
        let g = Grammar::parse(NBAR).unwrap();
        let start = parse_phrasal_cat("NBAR(A,B)").unwrap();
        assert!(g.parse_cats(&start, &cats("n(A)")).is_empty());
    }
}
