//! Parameters `(c, d)` and the sign variant of the defining relation.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which relation defines the group: `a b^c = b^d a` or `a b^c = b^{-d} a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "pos")]
    Positive,
    #[serde(rename = "neg")]
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// Positive relation, `c >= d`.
    BS1,
    /// Positive relation, `d > c`.
    BS2,
    /// Negative relation.
    BS3,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::BS1 => "BS1",
            Case::BS2 => "BS2",
            Case::BS3 => "BS3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BSParams {
    c: u32,
    d: u32,
    variant: Variant,
}

impl BSParams {
    pub fn new(c: u32, d: u32, variant: Variant) -> Result<Self> {
        if c == 0 || d == 0 {
            return Err(Error::InvalidParams(format!(
                "c and d must be positive (got c={c}, d={d})"
            )));
        }
        Ok(BSParams { c, d, variant })
    }

    pub fn positive(c: u32, d: u32) -> Result<Self> {
        Self::new(c, d, Variant::Positive)
    }

    pub fn negative(c: u32, d: u32) -> Result<Self> {
        Self::new(c, d, Variant::Negative)
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn case(&self) -> Case {
        match self.variant {
            Variant::Negative => Case::BS3,
            Variant::Positive if self.c >= self.d => Case::BS1,
            Variant::Positive => Case::BS2,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.variant == Variant::Negative
    }

    /// `+1` for the positive relation, `-1` for the negative one.
    pub fn sign(&self) -> i64 {
        match self.variant {
            Variant::Positive => 1,
            Variant::Negative => -1,
        }
    }

    pub fn e(&self) -> u32 {
        self.c.gcd(&self.d)
    }

    pub fn c_prime(&self) -> u32 {
        self.c / self.e()
    }

    pub fn d_prime(&self) -> u32 {
        self.d / self.e()
    }

    /// The default verification grid: (3,2), (2,2), (1,1), (1,2), (2,3), (1,1n), (2,2n).
    pub fn default_grid() -> Vec<BSParams> {
        parse_grid("3,2;2,2;1,1;1,2;2,3;1,1n;2,2n").expect("default grid parses")
    }
}

impl fmt::Display for BSParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = if self.is_negative() { "n" } else { "" };
        write!(f, "{},{}{}", self.c, self.d, n)
    }
}

impl FromStr for BSParams {
    type Err = Error;

    /// Parses `"C,D"` (positive) or `"C,Dn"` (negative).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (c, d) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidParams(format!("expected C,D but got {s:?}")))?;
        let (d, variant) = match d.trim().strip_suffix('n') {
            Some(d) => (d, Variant::Negative),
            None => (d, Variant::Positive),
        };
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidParams(format!("bad integer {t:?} in {s:?}")))
        };
        BSParams::new(parse(c)?, parse(d)?, variant)
    }
}

/// Parses a semicolon-separated list such as `"3,2;1,2;2,2n"`.
pub fn parse_grid(text: &str) -> Result<Vec<BSParams>> {
    let grid: Vec<BSParams> = text
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if grid.is_empty() {
        return Err(Error::InvalidParams("empty grid".into()));
    }
    Ok(grid)
}
