//! Template inventories: extraction from a rule corpus, frequency ranking,
//! cutoffs and incremental coverage.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::{content_lines, parse_template_line, Ltr, SyntaxError, Template};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InventoryEntry {
    /// Canonical template.
    pub template: Template,
    pub count: u64,
    /// 1-based rank by descending count, ties by ascending template text.
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageRow {
    pub templates_used: usize,
    pub ltrs_covered: u64,
    pub coverage_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("the rule corpus is empty")]
    EmptyCorpus,
    #[error("the inventory is empty")]
    EmptyInventory,
    #[error("inventory is not rank-sorted at position {0}")]
    Unsorted(usize),
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
}

/// Counts rules per canonical template and ranks the templates.
pub fn build_inventory(corpus: &[Ltr]) -> Result<Vec<InventoryEntry>, ExtractError> {
    if corpus.is_empty() {
        return Err(ExtractError::EmptyCorpus);
    }
    let mut counts: BTreeMap<String, (Template, u64)> = BTreeMap::new();
    for ltr in corpus {
        let t = ltr.strip_words();
        counts.entry(t.to_string()).or_insert_with(|| (t, 0)).1 += 1;
    }
    Ok(rank(counts.into_values().collect()))
}

/// Merges duplicate templates (up to renaming) and ranks them.
pub fn rank(entries: Vec<(Template, u64)>) -> Vec<InventoryEntry> {
    let mut merged: BTreeMap<String, (Template, u64)> = BTreeMap::new();
    for (t, c) in entries {
        let t = t.canonicalize();
        merged.entry(t.to_string()).or_insert_with(|| (t, 0)).1 += c;
    }
    // BTreeMap iteration is text-ascending; the stable sort keeps that for ties.
    let mut list: Vec<(Template, u64)> = merged.into_values().collect();
    list.sort_by(|a, b| b.1.cmp(&a.1));
    list.into_iter()
        .enumerate()
        .map(|(i, (template, count))| InventoryEntry { template, count, rank: i + 1 })
        .collect()
}

/// `round(100 * part / whole, 1)` with halves rounded up, in exact integers.
pub fn percent_1dp(part: u64, whole: u64) -> f64 {
    if whole == 0 {
        return 0.0;
    }
    let tenths = (2000 * part as u128 + whole as u128) / (2 * whole as u128);
    tenths as f64 / 10.0
}

fn check_sorted(inv: &[InventoryEntry]) -> Result<(), ExtractError> {
    for (i, e) in inv.iter().enumerate() {
        if e.rank != i + 1 {
            return Err(ExtractError::Unsorted(i + 1));
        }
        if i > 0 && inv[i - 1].count < e.count {
            return Err(ExtractError::Unsorted(i + 1));
        }
    }
    Ok(())
}

/// Cumulative coverage of the top-k templates, for every k.
pub fn coverage_table(inv: &[InventoryEntry]) -> Result<Vec<CoverageRow>, ExtractError> {
    if inv.is_empty() {
        return Err(ExtractError::EmptyInventory);
    }
    check_sorted(inv)?;
    let total: u64 = inv.iter().map(|e| e.count).sum();
    let mut cum = 0;
    Ok(inv
        .iter()
        .enumerate()
        .map(|(i, e)| {
            cum += e.count;
            CoverageRow { templates_used: i + 1, ltrs_covered: cum, coverage_pct: percent_1dp(cum, total) }
        })
        .collect())
}

/// Keeps entries with `count >= min_count`.
pub fn apply_cutoff(inv: &[InventoryEntry], min_count: u64) -> Vec<InventoryEntry> {
    inv.iter().filter(|e| e.count >= min_count).cloned().collect()
}

/// `count<TAB>template` lines.
pub fn format_inventory(inv: &[InventoryEntry]) -> String {
    let mut s = String::new();
    for e in inv {
        let _ = writeln!(s, "{}\t{}", e.count, e.template);
    }
    s
}

/// Reads an inventory file. Lines without a count get count 1.
pub fn read_inventory(text: &str) -> Result<Vec<InventoryEntry>, ExtractError> {
    let mut entries = Vec::new();
    for (n, line) in content_lines(text) {
        let (count, body) = match line.split_once('\t') {
            Some((c, rest)) if c.trim().parse::<u64>().is_ok() => (c.trim().parse().unwrap(), rest),
            _ => (1, line),
        };
        let t = parse_template_line(body).map_err(|e| e.at_line(n))?;
        entries.push((t, count));
    }
    Ok(rank(entries))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
}

pub fn format_coverage(rows: &[CoverageRow], format: TableFormat) -> String {
    let mut s = String::new();
    match format {
        TableFormat::Csv => {
            s.push_str("templates,ltrs,coverage\n");
            for r in rows {
                let _ = writeln!(s, "{},{},{:.1}", r.templates_used, r.ltrs_covered, r.coverage_pct);
            }
        }
        TableFormat::Text => {
            let _ = writeln!(s, "{:>9}  {:>8}  {:>8}", "Templates", "LTRs", "Coverage");
            for r in rows {
                let _ = writeln!(s, "{:>9}  {:>8}  {:>6.1} %", r.templates_used, r.ltrs_covered, r.coverage_pct);
            }
        }
    }
    s
}
