mod support;

use ltrgen::cli::{cmd_expand, cmd_filter, cmd_generate, GenerateFlags, GenerateInput};
use ltrgen::generation::abstract_templates;
use ltrgen::model::{read_ltr_file, read_phrasal_template_file, read_template_file};
use ltrgen::{Grammar, Side};

use support::{fixture, fixture_path};

#[test]
fn every_fixture_round_trips() {
    let mut seen = 0;
    for entry in std::fs::read_dir(fixture_path("")).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        support::check_round_trip(&name, &std::fs::read_to_string(&path).unwrap());
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn filter_output_reparses() {
    let (equiv, en, es, grammar, phrasal) =
        (fixture("sit.equiv"), fixture("en.lex"), fixture("es.lex"), fixture("es.grammar"), fixture("sit.phrasal"));
    let input = GenerateInput {
        equivalences: &equiv,
        src_lexicon: &en,
        tgt_lexicon: &es,
        phrasal_templates: Some(&phrasal),
        grammar: Some(&grammar),
        ..Default::default()
    };
    let out = cmd_generate(&input, &GenerateFlags::default()).unwrap();
    let n = out.outcomes[0].candidates.len();
    for mask in 0u32..(1 << n.min(8)) {
        let decisions: String = (0..n)
            .map(|i| format!("c{} {}\n", i + 1, if mask >> i & 1 == 1 { "accept" } else { "reject" }))
            .collect();
        let filtered = cmd_filter(&out.candidates, &decisions).unwrap();
        let rules = read_ltr_file(&filtered).unwrap();
        assert_eq!(rules.len(), mask.count_ones() as usize);
    }
}

#[test]
fn expand_output_reabstracts() {
    for (phrasal, grammar, max_len) in [("nbar.phrasal", "nbar.grammar", 10), ("sit.phrasal", "es.grammar", 5)] {
        let g = Grammar::parse(&fixture(grammar)).unwrap();
        let pts = read_phrasal_template_file(&fixture(phrasal)).unwrap();
        let text = cmd_expand(&fixture(phrasal), &fixture(grammar), max_len).unwrap();
        let mut current = None;
        let mut checked = 0;
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("# from ") {
                let k: usize = rest.split(':').next().unwrap().parse().unwrap();
                current = Some(pts[k - 1].canonicalize());
                continue;
            }
            let t = read_template_file(line).unwrap().remove(0);
            let back = abstract_templates(&[t], &g, Side::Target);
            assert!(back.contains(current.as_ref().unwrap()), "{line}");
            checked += 1;
        }
        assert!(checked >= 3, "{phrasal}: {checked}");
    }
}
