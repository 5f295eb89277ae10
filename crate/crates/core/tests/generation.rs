mod support;

use std::collections::BTreeSet;
use std::time::Instant;

use ltrgen::cli::{cmd_generate, GenerateFlags, GenerateInput};
use ltrgen::generation::{generate_generative, read_equivalences};
use ltrgen::grammar::{ParseOptions, Terminal};
use ltrgen::model::{parse_ltr_line, parse_phrasal_cat, read_phrasal_template_file};
use ltrgen::{DiagnosticKind, EquivalenceOutcome, Grammar, Lexicon, Placeholders, Provenance};

use support::fixture;
use support::oracle::canonical_render;

const OBSERVER_ADJUNCT: &str = "sit:iv(A,B,C) & in:adv(C) & on:p(A,D) <-> participar:iv(A,B,E) & como:p(E,F) & observador:n(F) & en:p(A,D)";
const OBSERVER_SUBJECT: &str = "sit:iv(A,B,C) & in:adv(C) & on:p(A,D) <-> participar:iv(A,B) & como:p(A,E) & observador:n(E) & en:p(A,D)";
const OBSERVER_NESTED: &str = "sit:iv(A,B,C) & in:adv(C) & on:p(A,D) <-> participar:iv(A,B,E) & como:p(E,F) & observador:n(F) & en:p(F,D)";

fn run_sit(tgt_lexicon: &str, flags: GenerateFlags) -> EquivalenceOutcome {
    let (equiv, en, grammar, phrasal) =
        (fixture("sit.equiv"), fixture("en.lex"), fixture("es.grammar"), fixture("sit.phrasal"));
    let input = GenerateInput {
        equivalences: &equiv,
        src_lexicon: &en,
        tgt_lexicon: tgt_lexicon,
        phrasal_templates: Some(&phrasal),
        grammar: Some(&grammar),
        ..Default::default()
    };
    let mut out = cmd_generate(&input, &flags).unwrap();
    assert_eq!(out.outcomes.len(), 1);
    out.outcomes.remove(0)
}

fn has(outcome: &EquivalenceOutcome, ltr: &str) -> bool {
    let want = parse_ltr_line(ltr).unwrap();
    outcome.candidates.iter().any(|c| c.ltr.is_alpha_equivalent(&want))
}

#[test]
fn sit_in_on_yields_the_three_observer_rules() {
    let start = Instant::now();
    let o = run_sit(&fixture("es.lex"), GenerateFlags::default());
    assert!(start.elapsed().as_secs_f64() < 1.0);
    for ltr in [OBSERVER_ADJUNCT, OBSERVER_SUBJECT, OBSERVER_NESTED] {
        assert!(has(&o, ltr), "missing {ltr}");
    }
    // the first template's first parse is the observer-adjunct rule
    assert!(o.candidates[0].ltr.is_alpha_equivalent(&parse_ltr_line(OBSERVER_ADJUNCT).unwrap()));
    assert_eq!(o.candidates[0].provenance, Provenance::Phrasal { template: 1, alternative: 1, parse: 1 });
}

#[test]
fn second_template_is_also_selected() {
    let o = run_sit(&fixture("es.lex"), GenerateFlags::default());
    let templates: BTreeSet<usize> = o
        .candidates
        .iter()
        .map(|c| match c.provenance {
            Provenance::Phrasal { template, .. } => template,
            Provenance::Template { .. } => panic!("no inventory was given"),
        })
        .collect();
    assert_eq!(templates, [1, 2].into());
}

#[test]
fn candidates_are_distinct_and_share_the_source_side_per_template() {
    let o = run_sit(&fixture("es.lex"), GenerateFlags::default());
    for (i, a) in o.candidates.iter().enumerate() {
        for b in &o.candidates[i + 1..] {
            assert!(!a.ltr.is_alpha_equivalent(&b.ltr));
        }
    }
    let mut sources = std::collections::BTreeMap::new();
    for c in &o.candidates {
        let Provenance::Phrasal { template, .. } = c.provenance else { unreachable!() };
        let src: Vec<String> = c.ltr.source().iter().map(ToString::to_string).collect();
        let prev = sources.entry(template).or_insert_with(|| src.clone());
        assert_eq!(*prev, src);
    }
}

#[test]
fn diagnostics_flag_ambiguity_and_multiple_parses() {
    let o = run_sit(&fixture("es.lex"), GenerateFlags::default());
    assert!(o.diagnostics.iter().any(|d| d.kind == DiagnosticKind::Ambiguity && d.detail.contains("iv/3 or tv/3")));
    assert!(o.candidates.iter().all(|c| c.diagnostics.iter().any(|d| d.kind == DiagnosticKind::MultipleParses)));
}

#[test]
fn first_per_equivalence_keeps_the_top_candidate() {
    let flags = GenerateFlags { first_per_equivalence: true, ..Default::default() };
    let o = run_sit(&fixture("es.lex"), flags);
    assert_eq!(o.candidates.len(), 1);
    assert!(has(&o, OBSERVER_ADJUNCT));
}

#[test]
fn generation_is_deterministic() {
    let a = run_sit(&fixture("es.lex"), GenerateFlags::default());
    let b = run_sit(&fixture("es.lex"), GenerateFlags::default());
    assert_eq!(a, b);
}

#[test]
fn unknown_target_word_still_parses() {
    let o = run_sit(&fixture("es-unknown-observador.lex"), GenerateFlags::default());
    assert!(has(&o, OBSERVER_ADJUNCT));
    let c = o.candidates.iter().find(|c| c.ltr.is_alpha_equivalent(&parse_ltr_line(OBSERVER_ADJUNCT).unwrap())).unwrap();
    assert!(c.diagnostics.iter().any(|d| d.kind == DiagnosticKind::UnknownWord && d.detail.contains("observador")));
}

#[test]
fn unknown_source_word_blocks_generation() {
    let (en, es, grammar, phrasal) = (fixture("en.lex"), fixture("es.lex"), fixture("es.grammar"), fixture("sit.phrasal"));
    let input = GenerateInput {
        equivalences: "sat in on sth <-> participar como observador en algo\n",
        src_lexicon: &en,
        tgt_lexicon: &es,
        phrasal_templates: Some(&phrasal),
        grammar: Some(&grammar),
        ..Default::default()
    };
    let out = cmd_generate(&input, &GenerateFlags::default()).unwrap();
    assert!(out.outcomes[0].candidates.is_empty());
    assert_eq!(out.outcomes[0].diagnostics[0].kind, DiagnosticKind::UnknownWord);
    assert!(out.log.contains("inout=0"));
}

#[test]
fn observer_adjunct_tree_matches_the_reference() {
    let g = Grammar::parse(&fixture("es.grammar")).unwrap();
    let start = parse_phrasal_cat("VP(A,B)/NP(D)").unwrap();
    let lex = Lexicon::parse(&fixture("es.lex")).unwrap();
    let words = ["participar", "como", "observador", "en"];
    let tokens: Vec<ltrgen::grammar::Token> =
        words.iter().map(|w| ltrgen::grammar::Token::new(*w, lex.get(w).unwrap().iter().cloned())).collect();
    let rigid: BTreeSet<String> = ["A", "B", "D"].map(String::from).into();
    let rendered: Vec<String> = g.parse_all(&start, &tokens).iter().map(|p| canonical_render(&p.tree, &rigid)).collect();
    // Node for node: categories with their bindings, E and F introduced while parsing.
    let expected = "(VP(A,B)/NP(D) (VP(A,B,_0) (iv(A,B,_0) @0) (PP(_0,_1) (p(_0,_1) @1) (NP(_1) (n(_1) @2)))) (PP(A,D)/NP(D) (p(A,D) @3) (NP(D)/NP(D) eps)))";
    assert_eq!(rendered[0], expected);
    // With the phrasal template's own variables reserved, the fresh ones are E and F.
    let opts = ParseOptions { avoid: ["C".to_string()].into(), ..Default::default() };
    let terms: Vec<Terminal> = tokens.iter().map(|t| Terminal::Sigs(t.cats.clone())).collect();
    let first = &g.parse_terminals(&start, &terms, &opts)[0];
    assert_eq!(
        first.tree.render(&words),
        "(VP(A,B)/NP(D) (VP(A,B,E) (iv(A,B,E) participar) (PP(E,F) (p(E,F) como) (NP(F) (n(F) observador)))) (PP(A,D)/NP(D) (p(A,D) en) (NP(D)/NP(D) eps)))"
    );
}

#[test]
fn generative_soundness() {
    let g = Grammar::parse(&fixture("es.grammar")).unwrap();
    let en = Lexicon::parse(&fixture("en.lex")).unwrap();
    let es = Lexicon::parse(&fixture("es.lex")).unwrap();
    let pts = read_phrasal_template_file(&fixture("sit.phrasal")).unwrap();
    let wes = read_equivalences(&fixture("sit.equiv"), &Placeholders::default(), false).unwrap();
    let out = generate_generative(&wes[0], &pts, &en, &es, &g).unwrap();
    assert!(!out.candidates.is_empty());
    for c in &out.candidates {
        let Provenance::Phrasal { template, alternative, .. } = c.provenance else { unreachable!() };
        let alt = &pts[template - 1].alternatives()[alternative - 1];
        let cats: Vec<_> = c.ltr.target().iter().map(|i| i.cat.clone()).collect();
        assert!(!g.parse_cats(alt, &cats).is_empty(), "{}", c.ltr);
    }
}

#[test]
fn enumerative_route_on_noun_corpus() {
    let corpus = fixture("nouns.ltr");
    let inventory = ltrgen::cli::cmd_extract(&corpus, None).unwrap().inventory;
    let (en, es, equiv) = (fixture("en.lex"), fixture("es.lex"), fixture("nouns.equiv"));
    let input = GenerateInput {
        equivalences: &equiv,
        src_lexicon: &en,
        tgt_lexicon: &es,
        templates: Some(&inventory),
        ..Default::default()
    };
    let out = cmd_generate(&input, &GenerateFlags::default()).unwrap();
    let rules: Vec<Vec<String>> =
        out.outcomes.iter().map(|o| o.candidates.iter().map(|c| c.ltr.to_string()).collect()).collect();
    assert_eq!(
        rules,
        [
            vec!["buddha:n(A) <-> buda:n(A)".to_string()],
            vec!["wonderland:n(A) <-> país:n(A) & de:p(A,B) & las:d(B) & maravillas:n(B)".to_string()],
        ]
    );
}
