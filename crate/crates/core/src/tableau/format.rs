//! Line-oriented text format for tableaux.
//!
//! ```text
//! # comment
//! name expRK2s2
//! stages 2
//! c 0 1/2
//! a 3 2 1/2*phi2(1/2)
//! b 2 2*phi2(1)
//! ```
//!
//! Coefficients are written as whitespace-separated terms
//! `alpha*phi<j>(<scale>)` with exact rationals; `0` is the empty combination.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{ExpRkError, Result};
use crate::rational::{self, Rational};

use super::{ExpRkTableau, PhiCombo, PhiTerm};

fn parse_err(line: usize, message: impl Into<String>) -> ExpRkError {
    ExpRkError::Parse { line, message: message.into() }
}

fn parse_rational(tok: &str, line: usize) -> Result<Rational> {
    rational::parse(tok).ok_or_else(|| parse_err(line, format!("bad rational `{tok}`")))
}

fn parse_index(tok: Option<&str>, line: usize) -> Result<usize> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| parse_err(line, "expected a stage index"))
}

fn parse_term(tok: &str, line: usize) -> Result<PhiTerm> {
    let bad = || parse_err(line, format!("bad term `{tok}` (expected alpha*phiJ(scale))"));
    let (alpha, rest) = tok.split_once("*phi").ok_or_else(bad)?;
    let (j, rest) = rest.split_once('(').ok_or_else(bad)?;
    let scale = rest.strip_suffix(')').ok_or_else(bad)?;
    Ok(PhiTerm {
        alpha: parse_rational(alpha, line)?,
        j: j.parse().map_err(|_| bad())?,
        scale: parse_rational(scale, line)?,
    })
}

fn parse_combo<'a>(toks: impl Iterator<Item = &'a str>, line: usize) -> Result<PhiCombo> {
    let toks: Vec<&str> = toks.collect();
    match toks.as_slice() {
        [] => Err(parse_err(line, "missing coefficient")),
        ["0"] => Ok(PhiCombo::zero()),
        _ => Ok(PhiCombo::from_terms(toks.iter().map(|t| parse_term(t, line)).collect::<Result<_>>()?)),
    }
}

impl FromStr for ExpRkTableau {
    type Err = ExpRkError;

    fn from_str(text: &str) -> Result<Self> {
        let mut name = None;
        let mut stages: Option<(usize, usize)> = None;
        let mut c: Option<Vec<Rational>> = None;
        let mut a = BTreeMap::new();
        let mut b = BTreeMap::new();

        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut toks = content.split_whitespace();
            let key = toks.next().unwrap_or_default();
            match key {
                "name" => {
                    name = Some(toks.next().ok_or_else(|| parse_err(line, "missing name"))?.to_string());
                }
                "stages" => stages = Some((parse_index(toks.next(), line)?, line)),
                "c" => c = Some(toks.map(|t| parse_rational(t, line)).collect::<Result<_>>()?),
                "a" => {
                    let i = parse_index(toks.next(), line)?;
                    let j = parse_index(toks.next(), line)?;
                    if a.insert((i, j), parse_combo(toks, line)?).is_some() {
                        return Err(parse_err(line, format!("duplicate a_({i},{j})")));
                    }
                }
                "b" => {
                    let i = parse_index(toks.next(), line)?;
                    if b.insert(i, parse_combo(toks, line)?).is_some() {
                        return Err(parse_err(line, format!("duplicate b_{i}")));
                    }
                }
                other => return Err(parse_err(line, format!("unknown key `{other}`"))),
            }
        }

        let name = name.ok_or_else(|| parse_err(0, "missing `name`"))?;
        let c = c.ok_or_else(|| parse_err(0, "missing `c`"))?;
        if let Some((s, line)) = stages {
            if s != c.len() {
                return Err(parse_err(line, format!("stages = {s} but {} nodes given", c.len())));
            }
        }
        ExpRkTableau::new(name, c, a, b).map_err(|e| match e {
            ExpRkError::Parse { .. } => e,
            other => parse_err(0, other.to_string()),
        })
    }
}

impl fmt::Display for ExpRkTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name {}", self.name())?;
        writeln!(f, "stages {}", self.stages())?;
        let nodes: Vec<String> = self.nodes().iter().map(|c| c.to_string()).collect();
        writeln!(f, "c {}", nodes.join(" "))?;
        for (&(i, j), combo) in self.a_entries() {
            writeln!(f, "a {i} {j} {combo}")?;
        }
        for (&i, combo) in self.b_entries() {
            writeln!(f, "b {i} {combo}")?;
        }
        Ok(())
    }
}

impl ExpRkTableau {
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        text.parse()
    }
}
