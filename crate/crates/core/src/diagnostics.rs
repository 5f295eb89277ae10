use std::fmt;
use std::str::FromStr;

/// Machine-readable class of a review message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticKind {
    UnknownWord,
    Ambiguity,
    MultipleParses,
    NoTemplate,
    NoParse,
}

impl DiagnosticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticKind::UnknownWord => "UnknownWord",
            DiagnosticKind::Ambiguity => "Ambiguity",
            DiagnosticKind::MultipleParses => "MultipleParses",
            DiagnosticKind::NoTemplate => "NoTemplate",
            DiagnosticKind::NoParse => "NoParse",
        }
    }
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DiagnosticKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "UnknownWord" => DiagnosticKind::UnknownWord,
            "Ambiguity" => DiagnosticKind::Ambiguity,
            "MultipleParses" => DiagnosticKind::MultipleParses,
            "NoTemplate" => DiagnosticKind::NoTemplate,
            "NoParse" => DiagnosticKind::NoParse,
            other => return Err(format!("unknown diagnostic kind `{other}`")),
        })
    }
}

/// A message attached to a candidate rule or to a whole equivalence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub detail: String,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, detail: impl Into<String>) -> Self {
        Diagnostic { kind, detail: detail.into() }
    }

    pub fn unknown_word(word: &str) -> Self {
        Self::new(DiagnosticKind::UnknownWord, format!("`{word}` is not in the lexicon"))
    }

    pub fn ambiguity(detail: impl Into<String>) -> Self {
        Self::new(DiagnosticKind::Ambiguity, detail)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}
