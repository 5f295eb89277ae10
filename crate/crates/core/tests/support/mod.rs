#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeSet;
use std::path::PathBuf;

use ltrgen::generation::read_equivalences;
use ltrgen::model::{content_lines, read_ltr_file, read_phrasal_template_file, read_template_file};
use ltrgen::{Grammar, Lexicon, Placeholders};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn lines(text: &str) -> Vec<String> {
    content_lines(text).map(|(_, l)| l.split_whitespace().collect::<Vec<_>>().join(" ")).collect()
}

fn joined<T: ToString>(items: &[T]) -> String {
    items.iter().map(|i| format!("{}\n", i.to_string())).collect()
}

/// Formats the parsed file and checks it against the file's content lines and
/// against a second parse.
pub fn check_round_trip(name: &str, text: &str) {
    let ext = name.rsplit('.').next().unwrap();
    let (formatted, ordered) = match ext {
        "lex" => {
            let lex = Lexicon::parse(text).unwrap();
            let f = lex.to_string();
            assert_eq!(Lexicon::parse(&f).unwrap(), lex);
            (f, false)
        }
        "grammar" => {
            let g = Grammar::parse(text).unwrap();
            let f = g.to_string();
            assert_eq!(Grammar::parse(&f).unwrap().rules(), g.rules());
            (f, true)
        }
        "phrasal" => {
            let pts = read_phrasal_template_file(text).unwrap();
            let f = joined(&pts);
            assert_eq!(read_phrasal_template_file(&f).unwrap(), pts);
            (f, true)
        }
        "templates" => {
            let ts = read_template_file(text).unwrap();
            let f = joined(&ts);
            assert_eq!(read_template_file(&f).unwrap(), ts);
            (f, true)
        }
        "ltr" => {
            let rules = read_ltr_file(text).unwrap();
            let f = joined(&rules);
            assert_eq!(read_ltr_file(&f).unwrap(), rules);
            (f, true)
        }
        "equiv" => {
            let wes = read_equivalences(text, &Placeholders::default(), false).unwrap();
            let f = joined(&wes);
            assert_eq!(read_equivalences(&f, &Placeholders::default(), false).unwrap(), wes);
            (f, true)
        }
        "txt" => {
            let p = Placeholders::parse(text).unwrap();
            let f = p.to_string();
            assert_eq!(Placeholders::parse(&f).unwrap(), p);
            (f, false)
        }
        other => panic!("{name}: no round-trip check for `.{other}` files"),
    };
    if ordered {
        assert_eq!(lines(&formatted), lines(text), "{name}");
    } else {
        let a: BTreeSet<String> = lines(&formatted).into_iter().collect();
        let b: BTreeSet<String> = lines(text).into_iter().collect();
        assert_eq!(a, b, "{name}");
    }
}
