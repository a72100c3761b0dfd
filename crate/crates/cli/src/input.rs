//! The `.grp` input format.
//!
//! ```text
//! # free group of rank 2
//! rank 2
//! letters a b
//! g = ab
//! f = (ab)^3 a
//! subgroup H = a b
//! ```
//!
//! `rank` comes first, `letters` (optional) right after it. `#` starts a
//! comment. Names are identifiers and must be unique across bindings and
//! subgroups. Binding values use power-word syntax; subgroup generators are
//! plain words separated by whitespace.

use std::fmt;

use frattini::words::{GroupDescriptor, PowerWord, Word, MAX_RANK};
use frattini::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, Some(c)) => write!(f, "column {c}: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

impl InputError {
    pub fn at(line: usize, column: usize, message: impl Into<String>) -> InputError {
        InputError { line: Some(line), column: Some(column), message: message.into() }
    }

    /// Re-anchors a word-level parse error whose columns count from
    /// `first_column`.
    pub fn from_parse(line: Option<usize>, first_column: usize, e: Error) -> InputError {
        let (column, message) = match &e {
            Error::UnknownLetter { symbol, column } => (Some(first_column + column - 1), format!("unknown letter `{symbol}`")),
            Error::Syntax { column, message } => (Some(first_column + column - 1), message.clone()),
            other => (None, other.to_string()),
        };
        InputError { line, column, message }
    }
}

#[derive(Debug, Clone)]
pub struct Binding {
    pub name: String,
    pub text: String,
    pub value: PowerWord,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct Subgroup {
    pub name: String,
    pub generators: Vec<Word>,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct InputDocument {
    pub descriptor: GroupDescriptor,
    pub bindings: Vec<Binding>,
    pub subgroups: Vec<Subgroup>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Whitespace-separated tokens with their 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, (byte, c)) in line.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((i, byte)),
            (true, Some((col, b))) => {
                out.push((col + 1, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((col, b)) = start {
        out.push((col + 1, &line[b..]));
    }
    out
}

fn char_column(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<InputDocument, InputError> {
        let mut descriptor: Option<GroupDescriptor> = None;
        let mut letters_allowed = false;
        let mut bindings: Vec<Binding> = Vec::new();
        let mut subgroups: Vec<Subgroup> = Vec::new();

        for (index, raw) in text.lines().enumerate() {
            let n = index + 1;
            let line = raw.split('#').next().unwrap_or("");
            let toks = tokens(line);
            let Some(&(first_col, first)) = toks.first() else { continue };

            let Some(d) = descriptor.as_ref() else {
                if first != "rank" {
                    return Err(InputError::at(n, first_col, "expected `rank k` before anything else"));
                }
                let &(col, value) = toks.get(1).ok_or_else(|| InputError::at(n, first_col, "`rank` needs a value"))?;
                if let Some(&(extra, _)) = toks.get(2) {
                    return Err(InputError::at(n, extra, "unexpected text after the rank"));
                }
                let rank: usize = value
                    .parse()
                    .map_err(|_| InputError::at(n, col, format!("rank must be an integer in 1..={MAX_RANK}")))?;
                descriptor = Some(GroupDescriptor::free(rank).map_err(|e| InputError::at(n, col, e.to_string()))?);
                letters_allowed = true;
                continue;
            };

            if first == "rank" {
                return Err(InputError::at(n, first_col, "`rank` given twice"));
            }
            if first == "letters" {
                if !letters_allowed {
                    return Err(InputError::at(n, first_col, "`letters` must directly follow `rank`"));
                }
                let mut names = Vec::new();
                for &(col, tok) in &toks[1..] {
                    for (i, c) in tok.chars().enumerate() {
                        if !c.is_ascii_lowercase() {
                            return Err(InputError::at(n, col + i, format!("letter name `{c}` is not a lowercase ASCII letter")));
                        }
                        names.push(c);
                    }
                }
                if names.len() != d.rank() {
                    return Err(InputError::at(n, first_col, format!("{} letter names for rank {}", names.len(), d.rank())));
                }
                descriptor =
                    Some(GroupDescriptor::free_with_letters(&names).map_err(|e| InputError::at(n, first_col, e.to_string()))?);
                letters_allowed = false;
                continue;
            }
            letters_allowed = false;

            let is_subgroup = first == "subgroup";
            let (name_col, name) = if is_subgroup {
                *toks.get(1).ok_or_else(|| InputError::at(n, first_col, "`subgroup` needs a name"))?
            } else {
                (first_col, first)
            };
            // the name may be glued to `=`, as in `g=ab`
            let name = name.split('=').next().unwrap_or("");
            if !is_identifier(name) {
                return Err(InputError::at(n, name_col, format!("`{name}` is not a valid name")));
            }
            if bindings.iter().any(|b| b.name == name) || subgroups.iter().any(|s| s.name == name) {
                return Err(InputError::at(n, name_col, format!("name `{name}` is already defined")));
            }
            let name_byte = line.char_indices().nth(name_col - 1).map(|(b, _)| b).unwrap_or(0);
            let after_name = name_byte + name.len();
            let rest = &line[after_name..];
            let eq = rest.find(|c: char| !c.is_whitespace());
            if eq.map(|i| rest.as_bytes()[i]) != Some(b'=') {
                let col = char_column(line, after_name + eq.unwrap_or(0));
                return Err(InputError::at(n, col, "expected `=`"));
            }
            let value_byte = after_name + eq.unwrap() + 1;
            let value = &line[value_byte..];
            let value_col = char_column(line, value_byte);

            if is_subgroup {
                let generators = tokens(value)
                    .into_iter()
                    .map(|(col, tok)| {
                        d.parse_word(tok).map_err(|e| InputError::from_parse(Some(n), value_col + col - 1, e))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                subgroups.push(Subgroup { name: name.to_string(), generators, line: n });
            } else {
                let pw = d.parse_power_word(value).map_err(|e| InputError::from_parse(Some(n), value_col, e))?;
                bindings.push(Binding { name: name.to_string(), text: value.trim().to_string(), value: pw, line: n });
            }
        }
        let descriptor = descriptor.ok_or(InputError { line: None, column: None, message: "missing `rank k` line".into() })?;
        Ok(InputDocument { descriptor, bindings, subgroups })
    }

    pub fn binding(&self, name: &str) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.name == name)
    }

    pub fn subgroup(&self, name: &str) -> Option<&Subgroup> {
        self.subgroups.iter().find(|s| s.name == name)
    }
}
