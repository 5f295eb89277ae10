//! Brute-force derivation enumerator used as a reference for the chart parser.
//!
//! It shares no code with the library: grammars are its own structs, shape
//! trees are enumerated exhaustively, and index variables are unified
//! afterwards with a plain substitution map.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use ltrgen::grammar::ParseTree;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OCat {
    pub name: String,
    pub args: Vec<String>,
    pub gaps: Vec<(String, Vec<String>)>,
}

impl OCat {
    pub fn lexical(&self) -> bool {
        self.name.starts_with(|c: char| c.is_ascii_lowercase())
    }

    fn shape(&self) -> (String, usize, Vec<(String, usize)>) {
        (
            self.name.clone(),
            self.args.len(),
            self.gaps.iter().map(|(n, a)| (n.clone(), a.len())).collect(),
        )
    }

    fn vars(&self) -> Vec<&String> {
        self.args.iter().chain(self.gaps.iter().flat_map(|(_, a)| a)).collect()
    }
}

fn label(name: &str, args: &[String]) -> String {
    if args.is_empty() {
        name.to_string()
    } else {
        format!("{name}({})", args.join(","))
    }
}

impl fmt::Display for OCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&label(&self.name, &self.args))?;
        for (n, a) in &self.gaps {
            write!(f, "/{}", label(n, a))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OSym {
    Cat(OCat),
    Eps,
}

#[derive(Debug, Clone)]
pub struct ORule {
    pub lhs: OCat,
    pub rhs: Vec<OSym>,
}

#[derive(Debug, Clone)]
pub struct OGrammar {
    pub rules: Vec<ORule>,
}

impl fmt::Display for OGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            write!(f, "{} ->", r.lhs)?;
            for s in &r.rhs {
                match s {
                    OSym::Cat(c) => write!(f, " {c}")?,
                    OSym::Eps => f.write_str(" eps")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A token: the (name, arity) pairs it may take.
pub type OToken = BTreeSet<(String, usize)>;

#[derive(Debug, Clone)]
enum STree {
    Node { rule: usize, bounds: Vec<usize>, children: Vec<STree> },
    Leaf(usize),
    Eps,
}

type Shape = (String, usize, Vec<(String, usize)>);

struct Enumerator<'a> {
    g: &'a OGrammar,
    tokens: &'a [OToken],
    path: Vec<(Shape, usize, usize)>,
}

impl Enumerator<'_> {
    fn derive(&mut self, cat: &OCat, i: usize, j: usize) -> Vec<STree> {
        if cat.lexical() {
            let ok = j == i + 1 && self.tokens[i].contains(&(cat.name.clone(), cat.args.len()));
            return if ok { vec![STree::Leaf(i)] } else { Vec::new() };
        }
        let key = (cat.shape(), i, j);
        if self.path.contains(&key) {
            return Vec::new();
        }
        self.path.push(key);
        let mut out = Vec::new();
        for (ri, rule) in self.g.rules.iter().enumerate() {
            if rule.lhs.shape() != cat.shape() {
                continue;
            }
            if rule.rhs == [OSym::Eps] {
                if i == j {
                    out.push(STree::Node { rule: ri, bounds: vec![i, j], children: vec![STree::Eps] });
                }
                continue;
            }
            let syms: Vec<&OCat> = rule
                .rhs
                .iter()
                .map(|s| match s {
                    OSym::Cat(c) => c,
                    OSym::Eps => unreachable!(),
                })
                .collect();
            for bounds in compositions(i, j, syms.len()) {
                let mut combos: Vec<Vec<STree>> = vec![Vec::new()];
                for (k, sym) in syms.iter().enumerate() {
                    let options = self.derive(sym, bounds[k], bounds[k + 1]);
                    let mut next = Vec::new();
                    for prefix in &combos {
                        for o in &options {
                            let mut v = prefix.clone();
                            v.push(o.clone());
                            next.push(v);
                        }
                    }
                    combos = next;
                    if combos.is_empty() {
                        break;
                    }
                }
                for children in combos {
                    out.push(STree::Node { rule: ri, bounds: bounds.clone(), children });
                }
            }
        }
        self.path.pop();
        out
    }
}

/// All boundary vectors `i = b0 <= b1 <= ... <= bk = j`.
fn compositions(i: usize, j: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![i, j]];
    }
    let mut out = Vec::new();
    for mid in i..=j {
        for mut rest in compositions(mid, j, k - 1) {
            let mut v = vec![i];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

fn preorder_key(t: &STree, out: &mut Vec<(usize, Vec<usize>)>) {
    if let STree::Node { rule, bounds, children } = t {
        out.push((*rule, bounds.clone()));
        for c in children {
            preorder_key(c, out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Term {
    Rigid(String),
    Var(usize),
}

#[derive(Default)]
struct Subst {
    next: usize,
    map: HashMap<usize, Term>,
}

impl Subst {
    fn fresh(&mut self) -> Term {
        self.next += 1;
        Term::Var(self.next - 1)
    }

    fn walk(&self, t: &Term) -> Term {
        let mut t = t.clone();
        while let Term::Var(v) = t {
            match self.map.get(&v) {
                Some(next) => t = next.clone(),
                None => break,
            }
        }
        t
    }

    fn unify(&mut self, a: &Term, b: &Term) -> bool {
        match (self.walk(a), self.walk(b)) {
            (Term::Rigid(x), Term::Rigid(y)) => x == y,
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                self.map.insert(x, other);
                true
            }
        }
    }
}

/// A tree whose labels hold unresolved terms.
enum LTree {
    Node { name: String, args: Vec<Term>, gaps: Vec<(String, Vec<Term>)>, children: Vec<LTree> },
    Leaf { name: String, args: Vec<Term>, pos: usize },
    Eps,
}

fn split_terms(cat: &OCat, terms: &[Term]) -> (Vec<Term>, Vec<(String, Vec<Term>)>) {
    let n = cat.args.len();
    let mut gaps = Vec::new();
    let mut k = n;
    for (g, a) in &cat.gaps {
        gaps.push((g.clone(), terms[k..k + a.len()].to_vec()));
        k += a.len();
    }
    (terms[..n].to_vec(), gaps)
}

fn label_tree(g: &OGrammar, t: &STree, cat: &OCat, terms: Vec<Term>, s: &mut Subst) -> Option<LTree> {
    match t {
        STree::Node { rule, children, .. } => {
            let rule = &g.rules[*rule];
            let mut local: HashMap<String, Term> = HashMap::new();
            let mut inst = |c: &OCat, s: &mut Subst| -> Vec<Term> {
                c.vars().iter().map(|v| local.entry(v.to_string()).or_insert_with(|| s.fresh()).clone()).collect()
            };
            let lhs = inst(&rule.lhs, s);
            for (a, b) in lhs.iter().zip(&terms) {
                if !s.unify(a, b) {
                    return None;
                }
            }
            let mut kids = Vec::new();
            for (sym, child) in rule.rhs.iter().zip(children) {
                match (sym, child) {
                    (OSym::Eps, _) => kids.push(LTree::Eps),
                    (OSym::Cat(c), STree::Leaf(pos)) => {
                        let args = inst(c, s);
                        kids.push(LTree::Leaf { name: c.name.clone(), args, pos: *pos });
                    }
                    (OSym::Cat(c), sub) => {
                        let args = inst(c, s);
                        kids.push(label_tree(g, sub, c, args, s)?);
                    }
                }
            }
            let (args, gaps) = split_terms(cat, &terms);
            Some(LTree::Node { name: cat.name.clone(), args, gaps, children: kids })
        }
        _ => unreachable!("subtrees of phrasal symbols are nodes"),
    }
}

struct Renderer<'a> {
    s: &'a Subst,
    names: HashMap<usize, String>,
}

impl Renderer<'_> {
    fn term(&mut self, t: &Term) -> String {
        match self.s.walk(t) {
            Term::Rigid(n) => n,
            Term::Var(v) => {
                let k = self.names.len();
                self.names.entry(v).or_insert_with(|| format!("_{k}")).clone()
            }
        }
    }

    fn label(&mut self, name: &str, args: &[Term]) -> String {
        let a: Vec<String> = args.iter().map(|t| self.term(t)).collect();
        label(name, &a)
    }

    fn render(&mut self, t: &LTree, out: &mut String) {
        match t {
            LTree::Node { name, args, gaps, children } => {
                out.push('(');
                let l = self.label(name, args);
                out.push_str(&l);
                for (g, a) in gaps {
                    let l = self.label(g, a);
                    out.push('/');
                    out.push_str(&l);
                }
                for c in children {
                    out.push(' ');
                    self.render(c, out);
                }
                out.push(')');
            }
            LTree::Leaf { name, args, pos } => {
                let l = self.label(name, args);
                out.push_str(&format!("({l} @{pos})"));
            }
            LTree::Eps => out.push_str("eps"),
        }
    }
}

/// Every parse of `tokens` from `start` (whose variables are constants), as
/// canonical renderings in derivation order, without duplicates.
pub fn oracle_parses(g: &OGrammar, start: &OCat, tokens: &[OToken]) -> Vec<String> {
    let mut e = Enumerator { g, tokens, path: Vec::new() };
    let mut trees: Vec<(Vec<(usize, Vec<usize>)>, STree)> = e
        .derive(start, 0, tokens.len())
        .into_iter()
        .map(|t| {
            let mut k = Vec::new();
            preorder_key(&t, &mut k);
            (k, t)
        })
        .collect();
    trees.sort_by(|a, b| a.0.cmp(&b.0));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (_, t) in trees {
        let mut s = Subst::default();
        let rigid: Vec<Term> = start.vars().iter().map(|v| Term::Rigid(v.to_string())).collect();
        let Some(lt) = label_tree(g, &t, start, rigid, &mut s) else { continue };
        let mut r = Renderer { s: &s, names: HashMap::new() };
        let mut text = String::new();
        r.render(&lt, &mut text);
        if seen.insert(text.clone()) {
            out.push(text);
        }
    }
    out
}

/// Renders a library parse tree with every non-rigid variable renamed to
/// `_0`, `_1`, ... in order of first appearance.
pub fn canonical_render(tree: &ParseTree, rigid: &BTreeSet<String>) -> String {
    let mut names: HashMap<String, String> = HashMap::new();
    let mut rename = |v: &str| -> String {
        if rigid.contains(v) {
            return v.to_string();
        }
        let k = names.len();
        names.entry(v.to_string()).or_insert_with(|| format!("_{k}")).clone()
    };
    fn go(t: &ParseTree, rename: &mut dyn FnMut(&str) -> String, out: &mut String) {
        match t {
            ParseTree::Node { cat, children, .. } => {
                out.push('(');
                let args: Vec<String> = cat.indices.iter().map(|v| rename(v.as_str())).collect();
                out.push_str(&label(&cat.name, &args));
                for gap in &cat.gaps {
                    let args: Vec<String> = gap.indices.iter().map(|v| rename(v.as_str())).collect();
                    out.push('/');
                    out.push_str(&label(&gap.name, &args));
                }
                for c in children {
                    out.push(' ');
                    go(c, rename, out);
                }
                out.push(')');
            }
            ParseTree::Leaf { cat, token } => {
                let args: Vec<String> = cat.indices.iter().map(|v| rename(v.as_str())).collect();
                out.push_str(&format!("({} @{token})", label(&cat.name, &args)));
            }
            ParseTree::Epsilon => out.push_str("eps"),
        }
    }
    let mut out = String::new();
    go(tree, &mut rename, &mut out);
    out
}

/// A random case: grammar, start category and tokens.
#[derive(Debug, Clone)]
pub struct Case {
    pub grammar: OGrammar,
    pub start: OCat,
    pub tokens: Vec<OToken>,
}

const VARS: [&str; 3] = ["A", "B", "C"];

fn random_args(rng: &mut StdRng, n: usize) -> Vec<String> {
    (0..n).map(|_| VARS.choose(rng).unwrap().to_string()).collect()
}

/// Grammars of at most 6 rules over phrasal `S`, `X`, `Y` and lexical `a`,
/// `b`, `c`, with random arities, occasional gaps and epsilon rules; inputs
/// of at most 5 tokens with at most 3 categories each.
pub fn random_case(rng: &mut StdRng) -> Case {
    let phrasal: Vec<(&str, usize)> = ["S", "X", "Y"].iter().map(|n| (*n, rng.gen_range(0..=2))).collect();
    let lexical: Vec<(&str, usize)> = ["a", "b", "c"].iter().map(|n| (*n, rng.gen_range(0..=2))).collect();
    let gap_of = |rng: &mut StdRng| -> Vec<(String, Vec<String>)> {
        if rng.gen_bool(0.15) {
            vec![("Y".to_string(), random_args(rng, 1))]
        } else {
            Vec::new()
        }
    };
    let n_rules = rng.gen_range(1..=6);
    let mut rules = Vec::new();
    for r in 0..n_rules {
        let (name, arity) = if r == 0 || rng.gen_bool(0.3) { phrasal[0] } else { *phrasal.choose(rng).unwrap() };
        let gaps = if r == 0 { Vec::new() } else { gap_of(rng) };
        let lhs = OCat { name: name.to_string(), args: random_args(rng, arity), gaps };
        let rhs = if rng.gen_bool(0.15) {
            vec![OSym::Eps]
        } else {
            (0..rng.gen_range(1..=3))
                .map(|_| {
                    let p_lex = if r == 0 { 0.8 } else { 0.5 };
                    if rng.gen_bool(p_lex) {
                        let (n, a) = *lexical.choose(rng).unwrap();
                        OSym::Cat(OCat { name: n.to_string(), args: random_args(rng, a), gaps: Vec::new() })
                    } else {
                        let (n, a) = *phrasal.choose(rng).unwrap();
                        OSym::Cat(OCat { name: n.to_string(), args: random_args(rng, a), gaps: gap_of(rng) })
                    }
                })
                .collect()
        };
        rules.push(ORule { lhs, rhs });
    }
    let start = OCat {
        name: "S".to_string(),
        args: (0..phrasal[0].1).map(|_| ["A", "B"].choose(rng).unwrap().to_string()).collect(),
        gaps: Vec::new(),
    };
    let tokens = (0..rng.gen_range(1..=5))
        .map(|_| {
            let k = rng.gen_range(2..=3);
            lexical
                .choose_multiple(rng, k)
                .map(|(n, a)| (n.to_string(), *a))
                .collect()
        })
        .collect();
    Case { grammar: OGrammar { rules }, start, tokens }
}
