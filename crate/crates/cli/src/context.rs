//! Turns command-line arguments into words, power words and subgroups.

use std::path::Path;

use frattini::words::{GroupDescriptor, PowerWord, Word, MAX_RANK};

use crate::input::{InputDocument, InputError};
use crate::Failure;

pub struct Context {
    doc: Option<InputDocument>,
    /// Descriptor fixed by the input file or by `--rank`/`--letters`.
    fixed: Option<GroupDescriptor>,
    parser: GroupDescriptor,
    pub expand_limit: usize,
}

fn arg_error(arg: &str, e: InputError) -> Failure {
    Failure::Input(format!("argument `{arg}`: {e}"))
}

impl Context {
    pub fn new(
        doc: Option<InputDocument>,
        rank: Option<usize>,
        letters: Option<&str>,
        expand_limit: usize,
    ) -> Result<Context, Failure> {
        let from_flags = match (rank, letters) {
            (_, Some(names)) => {
                let names: Vec<char> = names.chars().filter(|c| !c.is_whitespace() && *c != ',').collect();
                if rank.is_some_and(|r| r != names.len()) {
                    return Err(Failure::Input(format!("--rank {} disagrees with {} letter names", rank.unwrap(), names.len())));
                }
                Some(GroupDescriptor::free_with_letters(&names).map_err(|e| Failure::Input(e.to_string()))?)
            }
            (Some(r), None) => Some(GroupDescriptor::free(r).map_err(|e| Failure::Input(e.to_string()))?),
            (None, None) => None,
        };
        let fixed = match (&doc, from_flags) {
            (Some(d), Some(f)) if d.descriptor != f => {
                return Err(Failure::Input("--rank/--letters disagree with the input file".into()))
            }
            (Some(d), _) => Some(d.descriptor.clone()),
            (None, f) => f,
        };
        let parser = fixed.clone().unwrap_or_else(|| GroupDescriptor::free(MAX_RANK).expect("valid rank"));
        Ok(Context { doc, fixed, parser, expand_limit })
    }

    pub fn document(&self) -> Option<&InputDocument> {
        self.doc.as_ref()
    }

    /// The ambient group: fixed, or the smallest rank covering `words`.
    pub fn group(&self, words: &[&Word]) -> Result<GroupDescriptor, Failure> {
        if let Some(d) = &self.fixed {
            return Ok(d.clone());
        }
        let rank = words.iter().filter_map(|w| w.max_index()).max().map_or(1, |i| i + 1);
        GroupDescriptor::free(rank).map_err(|e| Failure::Input(e.to_string()))
    }

    pub fn render(&self, w: &Word) -> String {
        self.parser.render(w)
    }

    pub fn render_power(&self, p: &PowerWord) -> String {
        self.parser.render_power(p)
    }

    /// Binding name, then file, then literal text.
    pub fn power_word(&self, arg: &str) -> Result<PowerWord, Failure> {
        if let Some(b) = self.doc.as_ref().and_then(|d| d.binding(arg)) {
            return Ok(b.value.clone());
        }
        let path = Path::new(arg);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
            let mut found = None;
            for (i, line) in text.lines().enumerate() {
                let body = line.split('#').next().unwrap_or("");
                if body.trim().is_empty() {
                    continue;
                }
                if found.is_some() {
                    return Err(Failure::Input(format!("{arg}: line {}: expected a single word", i + 1)));
                }
                let p = self.parser.parse_power_word(body).map_err(|e| {
                    Failure::Input(format!("{arg}: {}", InputError::from_parse(Some(i + 1), 1, e)))
                })?;
                found = Some(p);
            }
            return found.ok_or_else(|| Failure::Input(format!("{arg}: no word found")));
        }
        self.parser.parse_power_word(arg).map_err(|e| arg_error(arg, InputError::from_parse(None, 1, e)))
    }

    pub fn word(&self, arg: &str) -> Result<Word, Failure> {
        let p = self.power_word(arg)?;
        p.expand(self.expand_limit).map_err(Failure::from)
    }

    pub fn words(&self, args: &[String]) -> Result<Vec<Word>, Failure> {
        args.iter().map(|a| self.word(a)).collect()
    }

    /// A subgroup named in the input, or a whitespace-separated generator
    /// list. Without a spec, the first subgroup of the input.
    pub fn subgroup(&self, spec: Option<&str>) -> Result<(String, Vec<Word>), Failure> {
        let Some(spec) = spec else {
            let first = self.doc.as_ref().and_then(|d| d.subgroups.first());
            return first
                .map(|s| (s.name.clone(), s.generators.clone()))
                .ok_or_else(|| Failure::Input("no subgroup given: use --subgroup or a `subgroup` line".into()));
        };
        if let Some(s) = self.doc.as_ref().and_then(|d| d.subgroup(spec)) {
            return Ok((s.name.clone(), s.generators.clone()));
        }
        let gens = spec.split_whitespace().map(|t| self.word(t)).collect::<Result<Vec<_>, _>>()?;
        Ok((spec.to_string(), gens))
    }
}
