//! Line syntax for rules, templates and phrasal templates.
//!
//! ```text
//! sit:iv(A,B,C) & in:adv(C) & on:p(A,D) <-> participar:iv(A,B,E) & ...
//! iv(A,B,C) & adv(C) & p(A,D) <-> VP(A,B)/NP(D) | PP(A,B)/NP(D)
//! ```

use std::fmt;

use super::{
    is_var_name, IndexVar, LexCat, LexicalItem, Ltr, PhrasalCat, PhrasalTemplate, Side, Template,
};

/// A syntax error. Columns are 1-based character positions; `line` is 0 when
/// the error comes from a single-line parse.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(column: usize, message: impl Into<String>) -> Self {
        SyntaxError { line: 0, column, message: message.into() }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        } else {
            write!(f, "column {}: {}", self.column, self.message)
        }
    }
}

/// Non-blank lines with `#` comments removed, paired with 1-based line numbers.
pub fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        let body = body.trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

pub(crate) struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, ':' | '&' | '|' | '#' | '(' | ')' | ',' | '<' | '>' | '↔')
}

impl Cursor {
    pub(crate) fn new(s: &str) -> Self {
        Cursor { chars: s.chars().collect(), pos: 0 }
    }

    pub(crate) fn column(&self) -> usize {
        self.pos + 1
    }

    pub(crate) fn err(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.column(), msg)
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    /// Consumes `lit` (after whitespace) if present.
    pub(crate) fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        let n = lit.chars().count();
        if self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n].iter().copied().eq(lit.chars())
        {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn side_separator(&mut self) -> bool {
        self.eat("<->") || self.eat("↔")
    }

    pub(crate) fn describe_here(&self) -> String {
        match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of line".to_string(),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn var_list(&mut self) -> Result<Vec<IndexVar>, SyntaxError> {
        if !self.eat("(") {
            return Ok(Vec::new());
        }
        let open = self.pos; // column of '(' is self.pos (1-based of previous char)
        let mut vars = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some(')') {
                if vars.is_empty() {
                    return Err(self.err("empty index list; write arity-0 categories without parentheses"));
                }
                return Err(self.err("expected an index variable"));
            }
            let col = self.column();
            let name = self.ident();
            if !is_var_name(&name) {
                return Err(SyntaxError::new(
                    col,
                    format!("expected an index variable, found {}", if name.is_empty() { self.describe_here() } else { format!("`{name}`") }),
                ));
            }
            vars.push(IndexVar(name));
            if self.eat(",") {
                continue;
            }
            if self.eat(")") {
                return Ok(vars);
            }
            return Err(SyntaxError::new(open, "unclosed `(`"));
        }
    }

    pub(crate) fn lexcat(&mut self) -> Result<LexCat, SyntaxError> {
        self.skip_ws();
        let col = self.column();
        let name = self.ident();
        if !name.chars().next().is_some_and(|c| c.is_ascii_lowercase()) {
            return Err(SyntaxError::new(col, format!("expected a lowercase lexical category, found {}", found(&name, self))));
        }
        let indices = self.var_list()?;
        Ok(LexCat { name, indices })
    }

    fn plain_phrasal(&mut self) -> Result<PhrasalCat, SyntaxError> {
        self.skip_ws();
        let col = self.column();
        let name = self.ident();
        if !name.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
            return Err(SyntaxError::new(col, format!("expected an uppercase phrasal category, found {}", found(&name, self))));
        }
        let indices = self.var_list()?;
        Ok(PhrasalCat { name, indices, gaps: Vec::new() })
    }

    pub(crate) fn phrasal(&mut self) -> Result<PhrasalCat, SyntaxError> {
        let mut cat = self.plain_phrasal()?;
        while self.peek() == Some('/') {
            self.pos += 1;
            cat.gaps.push(self.plain_phrasal()?);
        }
        Ok(cat)
    }

    fn item(&mut self) -> Result<LexicalItem, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(is_word_char) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(format!("expected a word, found {}", self.describe_here())));
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        if self.peek() != Some(':') {
            return Err(self.err(format!("expected `:` after word `{word}`")));
        }
        self.pos += 1;
        let cat = self.lexcat()?;
        Ok(LexicalItem { word, cat })
    }

    fn sequence<T>(
        &mut self,
        sep: &str,
        mut one: impl FnMut(&mut Self) -> Result<T, SyntaxError>,
    ) -> Result<Vec<T>, SyntaxError> {
        let mut out = vec![one(self)?];
        while self.eat(sep) {
            out.push(one(self)?);
        }
        Ok(out)
    }

    fn expect_separator(&mut self) -> Result<(), SyntaxError> {
        if self.side_separator() {
            Ok(())
        } else {
            Err(self.err(format!("expected `&` or `<->`, found {}", self.describe_here())))
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected {}", self.describe_here())))
        }
    }

    /// Consumes the bare keyword `kw` if it is not followed by more
    /// identifier characters or an index list.
    pub(crate) fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let save = self.pos;
        if self.ident() == kw && self.peek() != Some('(') {
            return true;
        }
        self.pos = save;
        false
    }

    pub(crate) fn starts_phrasal(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_some_and(|c| c.is_ascii_uppercase())
    }
}

fn found(name: &str, cur: &Cursor) -> String {
    if name.is_empty() {
        cur.describe_here()
    } else {
        format!("`{name}`")
    }
}

/// Parses `word:cat(V,…) & … <-> word:cat(V,…) & …`.
pub fn parse_ltr_line(line: &str) -> Result<Ltr, SyntaxError> {
    let mut cur = Cursor::new(line);
    let source = cur.sequence("&", Cursor::item)?;
    cur.expect_separator()?;
    let target = cur.sequence("&", Cursor::item)?;
    cur.expect_end()?;
    Ok(Ltr { source, target })
}

/// Parses `cat(V,…) & … <-> cat(V,…) & …`.
pub fn parse_template_line(line: &str) -> Result<Template, SyntaxError> {
    let mut cur = Cursor::new(line);
    let source = cur.sequence("&", Cursor::lexcat)?;
    cur.expect_separator()?;
    let target = cur.sequence("&", Cursor::lexcat)?;
    cur.expect_end()?;
    Ok(Template { source, target })
}

/// Parses a phrasal template. The phrasal side (uppercase categories joined
/// by `|`) is normally the target; a phrasal source side is also accepted.
pub fn parse_phrasal_template_line(line: &str) -> Result<PhrasalTemplate, SyntaxError> {
    let mut cur = Cursor::new(line);
    let pt = if cur.starts_phrasal() {
        let alts = cur.sequence("|", Cursor::phrasal)?;
        cur.expect_separator()?;
        let lex = cur.sequence("&", Cursor::lexcat)?;
        cur.expect_end()?;
        PhrasalTemplate::new(lex, alts, Side::Source)
    } else {
        let lex = cur.sequence("&", Cursor::lexcat)?;
        cur.expect_separator()?;
        let alts = cur.sequence("|", Cursor::phrasal)?;
        cur.expect_end()?;
        PhrasalTemplate::new(lex, alts, Side::Target)
    };
    pt
}

pub fn parse_lexcat(text: &str) -> Result<LexCat, SyntaxError> {
    let mut cur = Cursor::new(text);
    let c = cur.lexcat()?;
    cur.expect_end()?;
    Ok(c)
}

pub fn parse_phrasal_cat(text: &str) -> Result<PhrasalCat, SyntaxError> {
    let mut cur = Cursor::new(text);
    let c = cur.phrasal()?;
    cur.expect_end()?;
    Ok(c)
}

fn read_lines<T>(
    text: &str,
    parse: impl Fn(&str) -> Result<T, SyntaxError>,
) -> Result<Vec<T>, SyntaxError> {
    content_lines(text)
        .map(|(n, line)| {
            // columns are relative to the trimmed line; shift back to the raw line
            let raw = text.lines().nth(n - 1).unwrap_or(line);
            let offset = raw.find(line).map(|b| raw[..b].chars().count()).unwrap_or(0);
            parse(line).map_err(|mut e| {
                e.column += offset;
                e.at_line(n)
            })
        })
        .collect()
}

pub fn read_ltr_file(text: &str) -> Result<Vec<Ltr>, SyntaxError> {
    read_lines(text, parse_ltr_line)
}

/// Reads plain template lines. Lines of the form `count<TAB>template` (an
/// inventory file) are accepted too; the count is ignored.
pub fn read_template_file(text: &str) -> Result<Vec<Template>, SyntaxError> {
    read_lines(text, |line| parse_template_line(strip_count(line)))
}

pub fn read_phrasal_template_file(text: &str) -> Result<Vec<PhrasalTemplate>, SyntaxError> {
    read_lines(text, parse_phrasal_template_line)
}

pub(crate) fn strip_count(line: &str) -> &str {
    match line.split_once('\t') {
        Some((count, rest)) if count.trim().parse::<u64>().is_ok() => rest.trim(),
        _ => line,
    }
}
