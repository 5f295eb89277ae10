//! Bounded enumeration of the lexical projections of a phrasal category.

use std::collections::{BTreeSet, HashMap};

use super::parser::{ParseOptions, Terminal};
use super::{Grammar, Shape};
use crate::model::{FreshNames, IndexVar, LexCat, PhrasalCat};

impl Grammar {
    /// All distinct preterminal sequences of length `1..=max_len` derivable
    /// from `start`. Variables of `start` keep their names; the others are
    /// named in order of first occurrence along the sequence.
    pub fn enumerate_expansions(&self, start: &PhrasalCat, max_len: usize) -> Vec<Vec<LexCat>> {
        self.expansions_avoiding(start, max_len, &BTreeSet::new())
    }

    pub(crate) fn expansions_avoiding(
        &self,
        start: &PhrasalCat,
        max_len: usize,
        avoid: &BTreeSet<String>,
    ) -> Vec<Vec<LexCat>> {
        let Some(start_shape) = self.shape_id(&Shape::of_phrasal(start)) else {
            return Vec::new();
        };
        let mut strings: Vec<Vec<usize>> = self.shape_strings(max_len)[start_shape]
            .iter()
            .filter(|s| !s.is_empty())
            .cloned()
            .collect();
        let sig_text = |s: &Vec<usize>| -> Vec<String> {
            s.iter()
                .map(|&id| match &self.shapes[id] {
                    Shape::Lexical(sig) => sig.to_string(),
                    Shape::Phrasal { .. } => unreachable!(),
                })
                .collect()
        };
        strings.sort_by_key(|s| (s.len(), sig_text(s)));

        let start_vars: BTreeSet<String> = start.all_vars().map(|v| v.as_str().to_string()).collect();
        let mut reserved = start_vars.clone();
        reserved.extend(avoid.iter().cloned());
        let opts = ParseOptions { rigid_start: true, avoid: reserved.clone(), limit: None };

        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in strings {
            let terms: Vec<Terminal> = s
                .iter()
                .map(|&id| match &self.shapes[id] {
                    Shape::Lexical(sig) => Terminal::Sigs([sig.clone()].into()),
                    Shape::Phrasal { .. } => unreachable!(),
                })
                .collect();
            for parse in self.parse_terminals(start, &terms, &opts) {
                let seq = rename_along(&parse.preterminals, &start_vars, &reserved);
                let key: Vec<String> = seq.iter().map(ToString::to_string).collect();
                if seen.insert(key) {
                    out.push(seq);
                }
            }
        }
        out
    }

    /// For every shape, the preterminal-shape strings of length <= max_len it
    /// derives, ignoring indices.
    fn shape_strings(&self, max_len: usize) -> Vec<BTreeSet<Vec<usize>>> {
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); self.shapes.len()];
        for (id, shape) in self.shapes.iter().enumerate() {
            if let Shape::Lexical(_) = shape {
                sets[id].insert(vec![id]);
            }
        }
        loop {
            let mut changed = false;
            for rule in &self.compiled {
                let mut combos: BTreeSet<Vec<usize>> = [Vec::new()].into();
                if !rule.epsilon {
                    for slot in &rule.rhs {
                        let mut next = BTreeSet::new();
                        for a in &combos {
                            for b in &sets[slot.shape] {
                                if a.len() + b.len() <= max_len {
                                    let mut c = a.clone();
                                    c.extend_from_slice(b);
                                    next.insert(c);
                                }
                            }
                        }
                        combos = next;
                    }
                }
                for c in combos {
                    changed |= sets[rule.lhs.shape].insert(c);
                }
            }
            if !changed {
                return sets;
            }
        }
    }
}

fn rename_along(cats: &[LexCat], keep: &BTreeSet<String>, reserved: &BTreeSet<String>) -> Vec<LexCat> {
    let mut fresh = FreshNames::avoiding(reserved.iter().cloned());
    let mut map: HashMap<IndexVar, IndexVar> = HashMap::new();
    cats.iter()
        .map(|c| {
            let indices = c
                .indices
                .iter()
                .map(|v| {
                    if keep.contains(v.as_str()) {
                        v.clone()
                    } else {
                        map.entry(v.clone()).or_insert_with(|| fresh.fresh()).clone()
                    }
                })
                .collect();
            LexCat::new(c.name.clone(), indices)
        })
        .collect()
}
