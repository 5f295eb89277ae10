//! Text-level implementations of the command-line subcommands.
//!
//! Every command takes file contents and returns file contents, so the binary
//! only does I/O and the commands can be exercised without touching disk.
//!
//! Candidate files hold one block per word equivalence:
//!
//! ```text
//! # eq 1: sit in on sth <-> participar como observador en algo
//! # diag: Ambiguity: `sit` is iv/3 or tv/3
//! c1	sit:iv(A,B,C) & ... <-> ...	# eq=1; src=phrasal:1/alt:1/parse:1; diag=MultipleParses: 3 candidates for this equivalence
//! ```
//!
//! Decision files hold `id accept|reject` lines. Filtered output holds plain
//! rule lines, each followed by a `# id eq=N` comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::diagnostics::DiagnosticKind;
use crate::extraction::{
    apply_cutoff, build_inventory, coverage_table, format_coverage, format_inventory, read_inventory,
    CoverageRow, ExtractError, TableFormat,
};
use crate::generation::{
    abstraction_classes, derive_lexical_templates, read_equivalences, EquivalenceOutcome, Generator,
    Placeholders,
};
use crate::grammar::{Grammar, GrammarError};
use crate::lexicon::Lexicon;
use crate::model::{
    parse_ltr_line, read_ltr_file, read_phrasal_template_file, read_template_file, Ltr, Side,
    SyntaxError,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{file}: {source}")]
    Syntax { file: String, source: SyntaxError },
    #[error("{file}: {source}")]
    Grammar { file: String, source: GrammarError },
    #[error("{file}: {source}")]
    Extract { file: String, source: ExtractError },
    #[error("{0}")]
    Usage(String),
    #[error("decisions line {line}: unknown candidate id `{id}`")]
    UnknownId { line: usize, id: String },
    #[error("decisions line {line}: expected `id accept` or `id reject`")]
    BadDecision { line: usize },
    #[error("{file} line {line}: missing equivalence provenance (`eq=N`)")]
    MissingProvenance { file: String, line: usize },
}

fn syntax(file: &str) -> impl FnOnce(SyntaxError) -> CliError + '_ {
    move |source| CliError::Syntax { file: file.to_string(), source }
}

/// Output of `extract`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractOutput {
    pub inventory: String,
    pub coverage: Vec<CoverageRow>,
}

impl ExtractOutput {
    pub fn coverage_text(&self, format: TableFormat) -> String {
        format_coverage(&self.coverage, format)
    }
}

/// Builds the template inventory of a rule corpus. The coverage table is
/// computed before the cutoff is applied.
pub fn cmd_extract(ltr_text: &str, cutoff: Option<u64>) -> Result<ExtractOutput, CliError> {
    let corpus = read_ltr_file(ltr_text).map_err(syntax("rule corpus"))?;
    let inv = build_inventory(&corpus).map_err(|source| CliError::Extract { file: "rule corpus".into(), source })?;
    let coverage = coverage_table(&inv).map_err(|source| CliError::Extract { file: "rule corpus".into(), source })?;
    let kept = match cutoff {
        Some(n) => apply_cutoff(&inv, n),
        None => inv,
    };
    Ok(ExtractOutput { inventory: format_inventory(&kept), coverage })
}

/// File contents for `generate`. Absent optional files disable their route.
#[derive(Debug, Clone, Copy, Default)]
pub struct GenerateInput<'a> {
    pub equivalences: &'a str,
    pub src_lexicon: &'a str,
    pub tgt_lexicon: &'a str,
    pub templates: Option<&'a str>,
    pub phrasal_templates: Option<&'a str>,
    pub grammar: Option<&'a str>,
    pub placeholders: Option<&'a str>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GenerateFlags {
    pub cutoff: Option<u64>,
    pub first_per_equivalence: bool,
    pub fold_case: bool,
}

#[derive(Debug, Clone)]
pub struct GenerateOutput {
    pub outcomes: Vec<EquivalenceOutcome>,
    pub candidates: String,
    pub log: String,
}

/// Builds a [`Generator`] from file contents.
pub fn load_generator(input: &GenerateInput<'_>, flags: &GenerateFlags) -> Result<Generator, CliError> {
    let mut src = Lexicon::parse(input.src_lexicon).map_err(syntax("source lexicon"))?;
    let mut tgt = Lexicon::parse(input.tgt_lexicon).map_err(syntax("target lexicon"))?;
    if flags.fold_case {
        src = src.fold_case();
        tgt = tgt.fold_case();
    }
    let inventory = match input.templates {
        Some(text) => {
            let inv = read_inventory(text).map_err(|e| match e {
                ExtractError::Syntax(source) => CliError::Syntax { file: "templates".into(), source },
                source => CliError::Extract { file: "templates".into(), source },
            })?;
            match flags.cutoff {
                Some(n) => apply_cutoff(&inv, n),
                None => inv,
            }
        }
        None => Vec::new(),
    };
    let phrasal = match input.phrasal_templates {
        Some(text) => read_phrasal_template_file(text).map_err(syntax("phrasal templates"))?,
        None => Vec::new(),
    };
    let grammar = match input.grammar {
        Some(text) => Some(Grammar::parse(text).map_err(|source| CliError::Grammar { file: "grammar".into(), source })?),
        None => None,
    };
    if !phrasal.is_empty() && grammar.is_none() {
        return Err(CliError::Usage("phrasal templates need a grammar".into()));
    }
    Ok(Generator {
        src_lexicon: src,
        tgt_lexicon: tgt,
        inventory,
        phrasal,
        grammar,
        first_per_equivalence: flags.first_per_equivalence,
    })
}

pub fn load_placeholders(text: Option<&str>) -> Result<Placeholders, CliError> {
    match text {
        Some(t) => Placeholders::parse(t).map_err(syntax("placeholders")),
        None => Ok(Placeholders::default()),
    }
}

pub fn cmd_generate(input: &GenerateInput<'_>, flags: &GenerateFlags) -> Result<GenerateOutput, CliError> {
    let generator = load_generator(input, flags)?;
    let placeholders = load_placeholders(input.placeholders)?;
    let wes = read_equivalences(input.equivalences, &placeholders, flags.fold_case)
        .map_err(syntax("equivalences"))?;
    let outcomes = generator.generate_all(&wes);
    let candidates = format_candidates(&outcomes);
    let log = format_run_log(&outcomes);
    Ok(GenerateOutput { outcomes, candidates, log })
}

/// Renders outcomes as a candidate file with ids `c1`, `c2`, ... across the run.
pub fn format_candidates(outcomes: &[EquivalenceOutcome]) -> String {
    let mut s = String::new();
    let mut next = 1;
    for (i, o) in outcomes.iter().enumerate() {
        let eq = i + 1;
        let _ = writeln!(s, "# eq {eq}: {}", o.equivalence);
        for d in &o.diagnostics {
            let _ = writeln!(s, "# diag: {d}");
        }
        for c in &o.candidates {
            let _ = write!(s, "c{next}\t{}\t# eq={eq}; src={}", c.ltr, c.provenance);
            if !c.diagnostics.is_empty() {
                let diags: Vec<String> = c.diagnostics.iter().map(ToString::to_string).collect();
                let _ = write!(s, "; diag={}", diags.join(" | "));
            }
            s.push('\n');
            next += 1;
        }
    }
    s
}

/// `key=value` lines: one per equivalence, then run totals.
pub fn format_run_log(outcomes: &[EquivalenceOutcome]) -> String {
    let mut s = String::new();
    let mut kinds: BTreeMap<&'static str, usize> = BTreeMap::new();
    for (i, o) in outcomes.iter().enumerate() {
        let mut line = format!("eq={} candidates={}", i + 1, o.candidates.len());
        let mut seen = BTreeSet::new();
        let per_candidate = o.candidates.iter().flat_map(|c| &c.diagnostics);
        for d in o.diagnostics.iter().chain(per_candidate) {
            if seen.insert(d.kind) {
                *kinds.entry(d.kind.as_str()).or_default() += 1;
                let _ = write!(line, " {}=1", d.kind.as_str());
            }
        }
        let _ = writeln!(s, "{line}");
    }
    let out: usize = outcomes.iter().map(|o| o.candidates.len()).sum();
    let in_out = outcomes.iter().filter(|o| !o.candidates.is_empty()).count();
    let _ = writeln!(s, "in={}", outcomes.len());
    let _ = writeln!(s, "out={out}");
    let _ = writeln!(s, "inout={in_out}");
    for kind in [
        DiagnosticKind::UnknownWord,
        DiagnosticKind::Ambiguity,
        DiagnosticKind::MultipleParses,
        DiagnosticKind::NoTemplate,
        DiagnosticKind::NoParse,
    ] {
        let _ = writeln!(s, "{}={}", kind.as_str(), kinds.get(kind.as_str()).copied().unwrap_or(0));
    }
    s
}

/// One line of a candidate file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateRecord {
    pub id: String,
    pub ltr: Ltr,
    /// 1-based equivalence number.
    pub equivalence: usize,
    /// The raw comment text after `#`.
    pub comment: String,
}

fn eq_field(comment: &str) -> Option<usize> {
    comment
        .split(|c: char| c == ';' || c.is_whitespace())
        .find_map(|f| f.trim().strip_prefix("eq="))
        .and_then(|n| n.parse().ok())
}

pub fn read_candidates(text: &str) -> Result<Vec<CandidateRecord>, CliError> {
    let mut out = Vec::new();
    let mut ids = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (body, comment) = match line.split_once('#') {
            Some((b, c)) => (b, c.trim()),
            None => (line, ""),
        };
        let body = body.trim();
        let (id, rule) = body
            .split_once(char::is_whitespace)
            .ok_or_else(|| CliError::Syntax {
                file: "candidates".into(),
                source: SyntaxError::new(1, "expected `id<TAB>rule`").at_line(line_no),
            })?;
        let ltr = parse_ltr_line(rule.trim()).map_err(|e| CliError::Syntax {
            file: "candidates".into(),
            source: SyntaxError::new(e.column + id.chars().count() + 1, e.message).at_line(line_no),
        })?;
        let equivalence = eq_field(comment)
            .ok_or_else(|| CliError::MissingProvenance { file: "candidates".into(), line: line_no })?;
        if !ids.insert(id.to_string()) {
            return Err(CliError::Syntax {
                file: "candidates".into(),
                source: SyntaxError::new(1, format!("duplicate candidate id `{id}`")).at_line(line_no),
            });
        }
        out.push(CandidateRecord { id: id.to_string(), ltr, equivalence, comment: comment.to_string() });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

/// Explicit decisions; ids that are not listed count as rejected.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecisionFile {
    pub decisions: BTreeMap<String, Decision>,
}

impl DecisionFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut decisions = BTreeMap::new();
        for (n, line) in crate::model::content_lines(text) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let d = match fields.as_slice() {
                [_, "accept"] => Decision::Accept,
                [_, "reject"] => Decision::Reject,
                _ => return Err(CliError::BadDecision { line: n }),
            };
            decisions.insert(fields[0].to_string(), d);
        }
        Ok(DecisionFile { decisions })
    }

    pub fn decision(&self, id: &str) -> Decision {
        self.decisions.get(id).copied().unwrap_or(Decision::Reject)
    }
}

/// Keeps accepted candidates, in candidate-file order.
pub fn cmd_filter(candidates_text: &str, decisions_text: &str) -> Result<String, CliError> {
    let cands = read_candidates(candidates_text)?;
    let decisions = DecisionFile::parse(decisions_text)?;
    let known: BTreeSet<&str> = cands.iter().map(|c| c.id.as_str()).collect();
    for (n, line) in crate::model::content_lines(decisions_text) {
        let id = line.split_whitespace().next().unwrap_or_default();
        if decisions.decision(id) == Decision::Accept && !known.contains(id) {
            return Err(CliError::UnknownId { line: n, id: id.to_string() });
        }
    }
    let mut s = String::new();
    for c in cands.iter().filter(|c| decisions.decision(&c.id) == Decision::Accept) {
        let _ = writeln!(s, "{}\t# {} eq={}", c.ltr, c.id, c.equivalence);
    }
    Ok(s)
}

/// Generation-run counters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// Word equivalences given as input.
    pub in_count: u64,
    /// Candidates emitted.
    pub out_count: u64,
    /// Candidates accepted.
    pub val_count: u64,
    /// Equivalences with at least one candidate.
    pub in_out_count: u64,
    /// Equivalences with at least one accepted candidate.
    pub in_val_count: u64,
    /// `100 * in_val / in`, one decimal, halves up; 0.0 when there is no input.
    pub success_pct: f64,
}

impl Metrics {
    /// `candidates` are (id, equivalence) pairs; `accepted` must be a subset of their ids.
    pub fn compute(in_count: u64, candidates: &[(String, usize)], accepted: &BTreeSet<String>) -> Metrics {
        let out_count = candidates.len() as u64;
        let in_out: BTreeSet<usize> = candidates.iter().map(|(_, e)| *e).collect();
        let kept: Vec<&(String, usize)> = candidates.iter().filter(|(id, _)| accepted.contains(id)).collect();
        let in_val: BTreeSet<usize> = kept.iter().map(|(_, e)| *e).collect();
        let in_val_count = in_val.len() as u64;
        Metrics {
            in_count,
            out_count,
            val_count: kept.len() as u64,
            in_out_count: in_out.len() as u64,
            in_val_count,
            success_pct: crate::extraction::percent_1dp(in_val_count, in_count),
        }
    }

    /// The ordering constraints between the counters.
    pub fn holds_invariants(&self) -> bool {
        self.in_out_count <= self.in_count
            && self.in_out_count <= self.out_count
            && self.in_val_count <= self.in_out_count
            && self.val_count <= self.out_count
            && self.in_val_count <= self.val_count
            && self.success_pct == crate::extraction::percent_1dp(self.in_val_count, self.in_count)
    }

    pub fn format(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Text => self.to_string(),
            TableFormat::Csv => format!(
                "in,out,val,inout,inval,pct\n{},{},{},{},{},{:.1}\n",
                self.in_count, self.out_count, self.val_count, self.in_out_count, self.in_val_count, self.success_pct
            ),
        }
    }
}

impl fmt::Display for Metrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "in={}", self.in_count)?;
        writeln!(f, "out={}", self.out_count)?;
        writeln!(f, "val={}", self.val_count)?;
        writeln!(f, "inout={}", self.in_out_count)?;
        writeln!(f, "inval={}", self.in_val_count)?;
        writeln!(f, "pct={:.1}", self.success_pct)
    }
}

/// Computes run metrics. Validated lines are matched to candidates through
/// the id in their trailing comment.
pub fn cmd_report(
    equivalences_text: &str,
    placeholders: &Placeholders,
    candidates_text: &str,
    validated_text: &str,
) -> Result<Metrics, CliError> {
    let wes = read_equivalences(equivalences_text, placeholders, false).map_err(syntax("equivalences"))?;
    let cands = read_candidates(candidates_text)?;
    let by_id: BTreeMap<&str, &CandidateRecord> = cands.iter().map(|c| (c.id.as_str(), c)).collect();
    let mut accepted = BTreeSet::new();
    for (i, raw) in validated_text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let missing = || CliError::MissingProvenance { file: "validated".into(), line: i + 1 };
        let (body, comment) = line.split_once('#').ok_or_else(missing)?;
        parse_ltr_line(body.trim()).map_err(|e| CliError::Syntax { file: "validated".into(), source: e.at_line(i + 1) })?;
        let id = comment.split_whitespace().next().ok_or_else(missing)?;
        if !by_id.contains_key(id) {
            return Err(CliError::UnknownId { line: i + 1, id: id.to_string() });
        }
        accepted.insert(id.to_string());
    }
    for c in &cands {
        if c.equivalence == 0 || c.equivalence > wes.len() {
            return Err(CliError::Usage(format!(
                "candidate {} refers to equivalence {} but there are {}",
                c.id,
                c.equivalence,
                wes.len()
            )));
        }
    }
    let pairs: Vec<(String, usize)> = cands.iter().map(|c| (c.id.clone(), c.equivalence)).collect();
    Ok(Metrics::compute(wes.len() as u64, &pairs, &accepted))
}

/// Abstracts each template of a template file; one phrasal template per line,
/// followed by the 1-based numbers of the templates it classes together.
pub fn cmd_abstract(templates_text: &str, grammar_text: &str, side: Side) -> Result<String, CliError> {
    let ts = read_template_file(templates_text).map_err(syntax("templates"))?;
    let g = Grammar::parse(grammar_text).map_err(|source| CliError::Grammar { file: "grammar".into(), source })?;
    let mut s = String::new();
    for class in abstraction_classes(&ts, &g, side) {
        let members: Vec<String> = class.members.iter().map(|m| (m + 1).to_string()).collect();
        let _ = writeln!(s, "{}\t# templates {}", class.phrasal, members.join(","));
    }
    Ok(s)
}

/// Derives lexical templates from every phrasal template of a file.
pub fn cmd_expand(phrasal_text: &str, grammar_text: &str, max_len: usize) -> Result<String, CliError> {
    if max_len == 0 {
        return Err(CliError::Usage("--max-len must be at least 1".into()));
    }
    let pts = read_phrasal_template_file(phrasal_text).map_err(syntax("phrasal templates"))?;
    let g = Grammar::parse(grammar_text).map_err(|source| CliError::Grammar { file: "grammar".into(), source })?;
    let mut s = String::new();
    for (i, pt) in pts.iter().enumerate() {
        let _ = writeln!(s, "# from {}: {pt}", i + 1);
        for t in derive_lexical_templates(pt, &g, max_len) {
            let _ = writeln!(s, "{t}");
        }
    }
    Ok(s)
}
