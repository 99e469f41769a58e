//! Job files: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! p = 7
//! vars = x, y
//! gens = "x^2+y^3"
//! command = bs-roots
//! e_max = 4
//! ```

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    FrobRoot,
    Nu,
    TestIdeal,
    ApproxPoly,
    Fjn,
    StableExp,
    BsRoots,
    Verify,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::FrobRoot,
        Command::Nu,
        Command::TestIdeal,
        Command::ApproxPoly,
        Command::Fjn,
        Command::StableExp,
        Command::BsRoots,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::FrobRoot => "frob-root",
            Command::Nu => "nu",
            Command::TestIdeal => "test-ideal",
            Command::ApproxPoly => "approx-poly",
            Command::Fjn => "fjn",
            Command::StableExp => "stable-exp",
            Command::BsRoots => "bs-roots",
            Command::Verify => "verify",
        }
    }

    /// Parameter keys this command reads.
    fn accepts(self, key: Key) -> bool {
        use Key::{Depth, EMax, Lambda, Precision, RangeTop, E, J, K, N};
        match self {
            Command::FrobRoot => matches!(key, E | N),
            Command::Nu => matches!(key, E | J),
            Command::TestIdeal => matches!(key, Lambda | Depth),
            Command::ApproxPoly => matches!(key, E),
            Command::Fjn => matches!(key, RangeTop | Precision | Depth | E | K),
            Command::StableExp => matches!(key, Depth),
            Command::BsRoots => matches!(key, EMax),
            Command::Verify => matches!(key, EMax | RangeTop | Precision | Depth),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Key {
    P,
    Vars,
    Gens,
    Order,
    Command,
    E,
    N,
    K,
    J,
    Lambda,
    EMax,
    Precision,
    Depth,
    RangeTop,
}

impl Key {
    fn parse(s: &str) -> Option<Key> {
        Some(match s {
            "p" => Key::P,
            "vars" => Key::Vars,
            "gens" => Key::Gens,
            "order" => Key::Order,
            "command" => Key::Command,
            "e" => Key::E,
            "n" => Key::N,
            "k" => Key::K,
            "J" => Key::J,
            "lambda" => Key::Lambda,
            "e_max" => Key::EMax,
            "E" | "precision" => Key::Precision,
            "depth" | "d_check" => Key::Depth,
            "range_top" => Key::RangeTop,
            _ => return None,
        })
    }

    fn is_parameter(self) -> bool {
        !matches!(self, Key::P | Key::Vars | Key::Gens | Key::Order | Key::Command)
    }
}

/// A polynomial string together with where it sits in the job file, so
/// parse errors can point at the offending byte.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Located {
    pub text: String,
    #[serde(skip)]
    pub line: usize,
    #[serde(skip)]
    pub column: usize,
}

/// A parsed job, before any algebra happens.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JobSpec {
    pub p: Option<u64>,
    pub vars: Vec<String>,
    pub gens: Vec<Located>,
    pub lex: bool,
    pub command: Option<Command>,
    pub e: Option<u32>,
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub j: Option<Vec<Located>>,
    pub lambda: Option<String>,
    pub e_max: Option<u32>,
    pub precision: Option<u32>,
    pub depth: Option<u32>,
    pub range_top: Option<u64>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn number<T: FromStr>(value: &str, line: usize, column: usize, key: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| {
        parse_err(
            line,
            column,
            format!("`{key}` expects a non-negative integer, got `{value}`"),
        )
    })
}

/// Split `"a", "b"` into strings with their 1-based columns.
fn quoted_list(value: &str, line: usize, column: usize) -> Result<Vec<Located>, CliError> {
    let bytes = value.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() || bytes[i] != b'"' {
            return Err(parse_err(line, column + i, "expected a double-quoted polynomial"));
        }
        let start = i + 1;
        let end = value[start..]
            .find('"')
            .map(|k| start + k)
            .ok_or_else(|| parse_err(line, column + i, "unterminated string"))?;
        out.push(Located {
            text: value[start..end].to_string(),
            line,
            column: column + start,
        });
        i = end + 1;
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i == bytes.len() {
            return Ok(out);
        }
        if bytes[i] != b',' {
            return Err(parse_err(line, column + i, "expected `,` between polynomials"));
        }
        i += 1;
    }
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, CliError> {
        let mut spec = JobSpec::default();
        let mut seen: Vec<(Key, usize, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                // A `#` inside a quoted polynomial is still a comment start;
                // polynomials never contain it.
                Some(k) => &raw[..k],
                None => raw,
            };
            if content.trim().is_empty() {
                continue;
            }
            let eq = content
                .find('=')
                .ok_or_else(|| parse_err(line, 1, "expected `key = value`"))?;
            let key_text = content[..eq].trim();
            let key_col = content.find(key_text).unwrap_or(0) + 1;
            let key =
                Key::parse(key_text).ok_or_else(|| parse_err(line, key_col, format!("unknown key `{key_text}`")))?;
            if let Some((_, first, _)) = seen.iter().find(|(k, _, _)| *k == key) {
                return Err(parse_err(
                    line,
                    key_col,
                    format!("duplicate key `{key_text}` (first on line {first})"),
                ));
            }
            seen.push((key, line, key_text.to_string()));
            let rest = &content[eq + 1..];
            let lead = rest.len() - rest.trim_start().len();
            let value = rest.trim();
            let col = eq + 2 + lead;
            if value.is_empty() {
                return Err(parse_err(line, col, format!("missing value for `{key_text}`")));
            }
            match key {
                Key::P => spec.p = Some(number(value, line, col, key_text)?),
                Key::Vars => {
                    spec.vars = value.split(',').map(|v| v.trim().to_string()).collect();
                }
                Key::Gens => spec.gens = quoted_list(value, line, col)?,
                Key::Order => {
                    spec.lex = match value {
                        "lex" => true,
                        "grevlex" => false,
                        _ => {
                            return Err(parse_err(
                                line,
                                col,
                                format!("unknown order `{value}`, use lex or grevlex"),
                            ))
                        }
                    }
                }
                Key::Command => {
                    spec.command = Some(value.parse().map_err(|_| {
                        let names: Vec<&str> = Command::ALL.iter().map(|c| c.name()).collect();
                        parse_err(
                            line,
                            col,
                            format!("unknown command `{value}`, expected one of {}", names.join(", ")),
                        )
                    })?)
                }
                Key::E => spec.e = Some(number(value, line, col, key_text)?),
                Key::N => spec.n = Some(number(value, line, col, key_text)?),
                Key::K => spec.k = Some(number(value, line, col, key_text)?),
                Key::J => spec.j = Some(quoted_list(value, line, col)?),
                Key::Lambda => spec.lambda = Some(value.to_string()),
                Key::EMax => spec.e_max = Some(number(value, line, col, key_text)?),
                Key::Precision => spec.precision = Some(number(value, line, col, key_text)?),
                Key::Depth => spec.depth = Some(number(value, line, col, key_text)?),
                Key::RangeTop => spec.range_top = Some(number(value, line, col, key_text)?),
            }
        }
        let missing = |name: &str| parse_err(text.lines().count().max(1), 1, format!("missing required key `{name}`"));
        if spec.p.is_none() {
            return Err(missing("p"));
        }
        if seen.iter().all(|(k, _, _)| *k != Key::Vars) {
            return Err(missing("vars"));
        }
        if seen.iter().all(|(k, _, _)| *k != Key::Gens) {
            return Err(missing("gens"));
        }
        let command = spec.command.ok_or_else(|| missing("command"))?;
        for (key, line, name) in &seen {
            if key.is_parameter() && !command.accepts(*key) {
                return Err(CliError::Precondition(format!(
                    "line {line}: parameter `{name}` does not apply to {command}"
                )));
            }
        }
        Ok(spec)
    }
}
