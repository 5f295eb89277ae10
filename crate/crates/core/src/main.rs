use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ltrgen::cli::{self, GenerateFlags, GenerateInput};
use ltrgen::extraction::TableFormat;
use ltrgen::Side;

#[derive(Parser)]
#[command(name = "ltrgen", version, about = "Generate lexical transfer rules from word equivalences")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => TableFormat::Text,
            Format::Csv => TableFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Source,
    Target,
}

#[derive(Subcommand)]
enum Command {
    /// Build a ranked template inventory from a rule corpus.
    Extract {
        /// Rule corpus, one rule per line.
        corpus: PathBuf,
        /// Inventory output (`count<TAB>template`); stdout if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the cumulative coverage table here.
        #[arg(long)]
        coverage: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Drop templates seen fewer than N times.
        #[arg(long, value_name = "N")]
        cutoff: Option<u64>,
    },
    /// Propose candidate rules for word equivalences.
    Generate {
        /// Word equivalences, `tokens <-> tokens` per line.
        equivalences: PathBuf,
        #[arg(long)]
        /// Source-language lexicon (`word cat/arity ...` lines).
        src_lexicon: PathBuf,
        #[arg(long)]
        /// Target-language lexicon.
        tgt_lexicon: PathBuf,
        /// Template inventory for the enumerative route.
        #[arg(long)]
        templates: Option<PathBuf>,
        /// Phrasal templates for the generative route (needs --grammar).
        #[arg(long)]
        phrasal_templates: Option<PathBuf>,
        #[arg(long)]
        /// Grammar used to parse target word sequences.
        grammar: Option<PathBuf>,
        /// `token CATEGORY` lines; defaults to sth/sb/algo/algn as NP.
        #[arg(long)]
        placeholders: Option<PathBuf>,
        /// Ignore inventory templates seen fewer than N times.
        #[arg(long, value_name = "N")]
        cutoff: Option<u64>,
        #[arg(long)]
        /// Keep only the first candidate of each equivalence.
        first_per_equivalence: bool,
        #[arg(long)]
        /// Lowercase equivalence words before lexicon lookup.
        fold_case: bool,
        /// Candidate file; stdout if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Run log (`key=value` lines); stderr if absent.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Abstract lexical templates into phrasal templates.
    Abstract {
        /// Lexical templates, one per line.
        templates: PathBuf,
        #[arg(long)]
        /// Grammar whose phrasal categories may replace one side.
        grammar: PathBuf,
        /// Side to replace by a phrasal category.
        #[arg(long, value_enum, default_value = "target")]
        side: SideArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Derive lexical templates from phrasal templates.
    Expand {
        /// Phrasal templates, one per line.
        phrasal_templates: PathBuf,
        #[arg(long)]
        /// Grammar used to expand phrasal categories.
        grammar: PathBuf,
        #[arg(long, value_name = "N", default_value_t = 5)]
        /// Longest lexical sequence to derive.
        max_len: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Keep only the accepted candidates.
    Filter {
        /// Candidate file written by `generate`.
        candidates: PathBuf,
        /// `id accept|reject` lines; unlisted ids are rejected.
        decisions: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute In/Out/Val/InOut/InVal and the success rate.
    Report {
        /// Word equivalences given to `generate`.
        #[arg(long)]
        equivalences: PathBuf,
        /// Candidate file written by `generate`.
        #[arg(long)]
        candidates: PathBuf,
        /// Output of `filter`.
        #[arg(long)]
        validated: PathBuf,
        /// Placeholder table used when generating.
        #[arg(long)]
        placeholders: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_opt(path: &Option<PathBuf>) -> Result<Option<String>> {
    path.as_deref().map(read).transpose()
}

fn write(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: Args) -> Result<()> {
    match args.command {
        Command::Extract { corpus, output, coverage, format, cutoff } => {
            let out = cli::cmd_extract(&read(&corpus)?, cutoff)?;
            write(&output, &out.inventory)?;
            if let Some(path) = coverage {
                write(&Some(path), &out.coverage_text(format.into()))?;
            }
        }
        Command::Generate {
            equivalences,
            src_lexicon,
            tgt_lexicon,
            templates,
            phrasal_templates,
            grammar,
            placeholders,
            cutoff,
            first_per_equivalence,
            fold_case,
            output,
            log,
        } => {
            let equivalences = read(&equivalences)?;
            let src = read(&src_lexicon)?;
            let tgt = read(&tgt_lexicon)?;
            let templates = read_opt(&templates)?;
            let phrasal = read_opt(&phrasal_templates)?;
            let grammar = read_opt(&grammar)?;
            let placeholders = read_opt(&placeholders)?;
            let input = GenerateInput {
                equivalences: &equivalences,
                src_lexicon: &src,
                tgt_lexicon: &tgt,
                templates: templates.as_deref(),
                phrasal_templates: phrasal.as_deref(),
                grammar: grammar.as_deref(),
                placeholders: placeholders.as_deref(),
            };
            let flags = GenerateFlags { cutoff, first_per_equivalence, fold_case };
            let out = cli::cmd_generate(&input, &flags)?;
            write(&output, &out.candidates)?;
            match log {
                Some(p) => write(&Some(p), &out.log)?,
                None => eprint!("{}", out.log),
            }
        }
        Command::Abstract { templates, grammar, side, output } => {
            let side = match side {
                SideArg::Source => Side::Source,
                SideArg::Target => Side::Target,
            };
            write(&output, &cli::cmd_abstract(&read(&templates)?, &read(&grammar)?, side)?)?;
        }
        Command::Expand { phrasal_templates, grammar, max_len, output } => {
            write(&output, &cli::cmd_expand(&read(&phrasal_templates)?, &read(&grammar)?, max_len)?)?;
        }
        Command::Filter { candidates, decisions, output } => {
            write(&output, &cli::cmd_filter(&read(&candidates)?, &read(&decisions)?)?)?;
        }
        Command::Report { equivalences, candidates, validated, placeholders, format } => {
            let placeholders = cli::load_placeholders(read_opt(&placeholders)?.as_deref())?;
            let metrics =
                cli::cmd_report(&read(&equivalences)?, &placeholders, &read(&candidates)?, &read(&validated)?)?;
            print!("{}", metrics.format(format.into()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
