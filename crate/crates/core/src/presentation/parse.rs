//! Line-oriented text format for presentations.
//!
//! ```text
//! # comment
//! p 5
//! gens g0 g1 g2 g3 g4
//! rel [g1,g2] [g0,g1]^-1
//! chi g0=1 g1=0
//! map g0 g4
//! ```
//!
//! The `p` line comes first, then `gens`, then any number of `rel`, `chi`
//! and `map` lines. Word syntax: factors separated by whitespace, each a
//! generator name or a bracketed commutator `[u,v]` (nestable), optionally
//! raised to an integer power with `^k`. Undeclared names and non-integer
//! exponents are rejected.

use crate::class2::{GeneratorAction, Word};
use crate::error::{Error, Result};
use crate::fpmod::Prime;

use super::{Character, ProPPresentation};

/// Parsed document: a presentation plus the optional character and action
/// sections.
#[derive(Debug, Clone)]
pub struct Document {
    pub presentation: ProPPresentation,
    pub character: Option<Character>,
    /// Image word per generator, present only if `map` lines appeared.
    pub action_words: Option<Vec<Word>>,
}

impl Document {
    /// Build the validated generator action, when `map` lines were given.
    pub fn action(&self) -> Result<Option<GeneratorAction>> {
        match &self.action_words {
            None => Ok(None),
            Some(words) => {
                let group = crate::class2::ClassTwoGroup::new(
                    self.presentation.p(),
                    self.presentation.num_generators(),
                )?;
                Ok(Some(GeneratorAction::new(&group, words.clone())?))
            }
        }
    }
}

/// Hard cap on bracketed-word powers so `[a,b]^k` cannot blow up memory.
/// Plain generator powers are stored as letter exponents and are unlimited.
const MAX_EXPANDED_POWER: i64 = 1 << 16;

struct WordParser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    names: &'a [String],
    line: usize,
}

impl<'a> WordParser<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn parse_word(&mut self, stop_at: &[char]) -> Result<Word> {
        let mut word = Word::empty();
        loop {
            self.skip_ws();
            match self.chars.peek() {
                None => break,
                Some(&c) if stop_at.contains(&c) => break,
                _ => {}
            }
            let factor = self.parse_factor()?;
            word = word.concat(&factor);
        }
        Ok(word)
    }

    fn parse_factor(&mut self) -> Result<Word> {
        let atom = self.parse_atom()?;
        self.skip_ws();
        if matches!(self.chars.peek(), Some('^')) {
            self.chars.next();
            let exp = self.parse_int()?;
            if atom.letters().len() == 1 {
                let l = atom.letters()[0];
                let combined = l.exponent.checked_mul(exp).ok_or_else(|| {
                    self.err("exponent overflow")
                })?;
                let mut w = Word::empty();
                w.push(l.index, combined);
                return Ok(w);
            }
            if exp.abs() > MAX_EXPANDED_POWER {
                return Err(self.err(format!(
                    "power {exp} on a bracketed word is too large to expand"
                )));
            }
            return Ok(atom.repeat(exp));
        }
        Ok(atom)
    }

    fn parse_atom(&mut self) -> Result<Word> {
        self.skip_ws();
        match self.chars.peek() {
            Some('[') => {
                self.chars.next();
                let left = self.parse_word(&[','])?;
                if self.chars.next() != Some(',') {
                    return Err(self.err("expected `,` inside commutator"));
                }
                let right = self.parse_word(&[']'])?;
                if self.chars.next() != Some(']') {
                    return Err(self.err("expected `]` closing commutator"));
                }
                if left.is_empty() || right.is_empty() {
                    return Err(self.err("empty commutator argument"));
                }
                Ok(Word::commutator(&left, &right))
            }
            Some(&c) if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        name.push(c);
                        self.chars.next();
                    } else {
                        break;
                    }
                }
                let index = self
                    .names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or(Error::UndeclaredGenerator(name))?;
                Ok(Word::generator(index))
            }
            Some(&c) => Err(self.err(format!("unexpected character `{c}` in word"))),
            None => Err(self.err("unexpected end of word")),
        }
    }

    fn parse_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let mut s = String::new();
        if matches!(self.chars.peek(), Some('-')) {
            s.push('-');
            self.chars.next();
        }
        while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit()) {
            s.push(self.chars.next().unwrap());
        }
        if s.is_empty() || s == "-" {
            return Err(self.err("expected an integer exponent after `^`"));
        }
        // trailing garbage like 2.5 shows up as a stray `.` next; catch it here
        if matches!(self.chars.peek(), Some('.')) {
            return Err(self.err("non-integer exponent"));
        }
        s.parse::<i64>()
            .map_err(|_| self.err(format!("invalid integer `{s}`")))
    }
}

/// Parse a single word against a list of declared generator names.
pub fn parse_word(text: &str, names: &[String], line: usize) -> Result<Word> {
    let mut parser = WordParser { chars: text.chars().peekable(), names, line };
    let word = parser.parse_word(&[])?;
    parser.skip_ws();
    if parser.chars.peek().is_some() {
        return Err(parser.err("trailing input after word"));
    }
    Ok(word)
}

/// Parse the full document format.
pub fn parse_document(text: &str) -> Result<Document> {
    let mut p: Option<Prime> = None;
    let mut names: Option<Vec<String>> = None;
    let mut relators: Vec<Word> = Vec::new();
    let mut chi_values: Option<Vec<i64>> = None;
    let mut maps: Vec<Option<Word>> = Vec::new();
    let mut saw_map = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = match content.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (content, ""),
        };
        match keyword {
            "p" => {
                if p.is_some() {
                    return Err(Error::Parse { line, message: "duplicate `p` line".into() });
                }
                let value: u64 = rest.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid prime `{rest}`"),
                })?;
                p = Some(Prime::new(value)?);
            }
            "gens" => {
                if p.is_none() {
                    return Err(Error::Parse {
                        line,
                        message: "`gens` before `p`".into(),
                    });
                }
                if names.is_some() {
                    return Err(Error::Parse { line, message: "duplicate `gens` line".into() });
                }
                let list: Vec<String> =
                    rest.split_whitespace().map(|s| s.to_string()).collect();
                maps = vec![None; list.len()];
                names = Some(list);
            }
            "rel" => {
                let names = names.as_ref().ok_or(Error::Parse {
                    line,
                    message: "`rel` before `gens`".into(),
                })?;
                relators.push(parse_word(rest, names, line)?);
            }
            "chi" => {
                let names = names.as_ref().ok_or(Error::Parse {
                    line,
                    message: "`chi` before `gens`".into(),
                })?;
                let mut values = chi_values.take().unwrap_or_else(|| vec![0; names.len()]);
                for assignment in rest.split_whitespace() {
                    let (name, value) = assignment.split_once('=').ok_or(Error::Parse {
                        line,
                        message: format!("expected name=value, got `{assignment}`"),
                    })?;
                    let index = names
                        .iter()
                        .position(|n| n == name)
                        .ok_or_else(|| Error::UndeclaredGenerator(name.to_string()))?;
                    values[index] = value.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("invalid character value `{value}`"),
                    })?;
                }
                chi_values = Some(values);
            }
            "map" => {
                let names = names.as_ref().ok_or(Error::Parse {
                    line,
                    message: "`map` before `gens`".into(),
                })?;
                let (name, word_text) =
                    rest.split_once(char::is_whitespace).ok_or(Error::Parse {
                        line,
                        message: "expected `map <gen> <word>`".into(),
                    })?;
                let index = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::UndeclaredGenerator(name.to_string()))?;
                if maps[index].is_some() {
                    return Err(Error::Parse {
                        line,
                        message: format!("generator `{name}` mapped twice"),
                    });
                }
                maps[index] = Some(parse_word(word_text, names, line)?);
                saw_map = true;
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown directive `{other}`"),
                });
            }
        }
    }

    let p = p.ok_or(Error::Parse { line: 0, message: "missing `p` line".into() })?;
    let names = names.ok_or(Error::Parse { line: 0, message: "missing `gens` line".into() })?;
    let presentation = ProPPresentation::new(p, names, relators)?;
    let character = match chi_values {
        Some(values) => Some(Character::new(p, values)?),
        None => None,
    };
    let action_words = if saw_map {
        let mut words = Vec::with_capacity(maps.len());
        for (i, m) in maps.into_iter().enumerate() {
            words.push(m.ok_or_else(|| {
                Error::Parse {
                    line: 0,
                    message: format!(
                        "generator `{}` has no `map` line",
                        presentation.generator_names()[i]
                    ),
                }
            })?);
        }
        Some(words)
    } else {
        None
    };
    Ok(Document { presentation, character, action_words })
}
