//! Words over `{a, b}`, the normal forms (L) and (R), composition and height.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{BSParams, Case, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub letter: Letter,
    pub exp: BigInt,
}

/// A finite word `x_1^{n_1} x_2^{n_2} ...` with `x_i` in `{a, b}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GenWord {
    pub tokens: Vec<Token>,
}

impl GenWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn a(mut self) -> Self {
        self.push(Letter::A, BigInt::from(1));
        self
    }

    pub fn b(mut self, n: impl Into<BigInt>) -> Self {
        self.push(Letter::B, n.into());
        self
    }

    /// Appends a token, merging with the previous one when the letters agree.
    pub fn push(&mut self, letter: Letter, exp: BigInt) {
        if exp.is_zero() {
            return;
        }
        if let Some(last) = self.tokens.last_mut() {
            if last.letter == letter {
                last.exp += exp;
                if last.exp.is_zero() {
                    self.tokens.pop();
                }
                return;
            }
        }
        self.tokens.push(Token { letter, exp });
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut w = self.clone();
        for t in &other.tokens {
            w.push(t.letter, t.exp.clone());
        }
        w
    }

    /// Total number of letters, counting `x^n` as `|n|` letters.
    pub fn length(&self) -> BigInt {
        self.tokens.iter().map(|t| t.exp.abs()).sum()
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tokens.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self
            .tokens
            .iter()
            .flat_map(|t| {
                let name = if t.letter == Letter::A { "a" } else { "b" };
                if t.letter == Letter::A && t.exp > BigInt::from(0) {
                    // spell a-powers out so the text re-parses atom by atom
                    let n = t.exp.to_usize().unwrap_or(1);
                    vec![name.to_string(); n]
                } else if t.exp == BigInt::from(1) {
                    vec![name.to_string()]
                } else {
                    vec![format!("{name}^{}", t.exp)]
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Parses whitespace-separated atoms `a`, `b`, `a^N`, `b^N` (and `e` for the identity).
pub fn parse_word(text: &str) -> Result<GenWord> {
    let mut word = GenWord::new();
    let mut offset = 0;
    for atom in text.split_whitespace() {
        let pos = text[offset..].find(atom).map_or(offset, |p| p + offset);
        offset = pos + atom.len();
        if atom == "e" {
            continue;
        }
        let (head, exp) = match atom.split_once('^') {
            Some((h, e)) => {
                let n: BigInt = e.parse().map_err(|_| Error::Syntax {
                    pos: pos + h.len() + 1,
                    msg: format!("bad exponent {e:?}"),
                })?;
                (h, n)
            }
            None => (atom, BigInt::from(1)),
        };
        let letter = match head {
            "a" => Letter::A,
            "b" => Letter::B,
            _ => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("unknown atom {atom:?}"),
                })
            }
        };
        if letter == Letter::A && exp.is_negative() {
            return Err(Error::NegativeAExponent { pos });
        }
        if !exp.is_zero() {
            word.tokens.push(Token { letter, exp });
        }
    }
    Ok(word)
}

/// A positive-`a` group element `b^{i_0} a ... b^{i_{k-1}} a b^p` with letters in
/// `[0,d)` and an unrestricted integer tail.
///
/// Every word without `a^{-1}` has exactly one such form; it lies in the monoid
/// iff [`RawForm::is_valid`] holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawForm {
    params: BSParams,
    pub letters: Vec<u32>,
    pub tail: BigInt,
}

impl RawForm {
    pub fn new(params: BSParams) -> Self {
        RawForm {
            params,
            letters: Vec::new(),
            tail: BigInt::zero(),
        }
    }

    pub fn from_path(p: &PathL) -> Self {
        RawForm {
            params: p.params,
            letters: p.letters.clone(),
            tail: p.tail.clone(),
        }
    }

    pub fn params(&self) -> BSParams {
        self.params
    }

    pub fn push_b(&mut self, n: &BigInt) {
        self.tail += n;
    }

    pub fn push_b_small(&mut self, n: i64) {
        self.tail += n;
    }

    /// Appends `a`: writes `p = i + m d` and uses `b^{md} a = a b^{±mc}`.
    pub fn push_a(&mut self) {
        let (m, i) = self.tail.div_mod_floor(&BigInt::from(self.params.d()));
        self.letters.push(i.to_u32().expect("residue below d"));
        self.tail = m * (self.params.c() as i64 * self.params.sign());
    }

    /// Appends `b^i a` for each entry of `letters`.
    pub fn push_blocks(&mut self, letters: &[u32]) {
        for &l in letters {
            self.push_b_small(l as i64);
            self.push_a();
        }
    }

    pub fn push_path(&mut self, p: &PathL) {
        self.push_blocks(&p.letters);
        self.push_b(&p.tail);
    }

    pub fn push_word(&mut self, w: &GenWord) -> Result<()> {
        for t in &w.tokens {
            match t.letter {
                Letter::B => self.push_b(&t.exp),
                Letter::A => {
                    let n = t.exp.to_usize().ok_or(Error::NegativeAExponent { pos: 0 })?;
                    for _ in 0..n {
                        self.push_a();
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        match self.params.case() {
            Case::BS1 | Case::BS2 => !self.tail.is_negative(),
            Case::BS3 => !self.letters.is_empty() || !self.tail.is_negative(),
        }
    }

    pub fn into_path(self) -> Result<PathL> {
        if !self.is_valid() {
            return Err(Error::NotInMonoid);
        }
        Ok(PathL {
            params: self.params,
            letters: self.letters,
            tail: self.tail,
        })
    }
}

/// An element of the monoid in form (L): `b^{i_0} a ... b^{i_{k-1}} a b^p`, `i_μ ∈ [0,d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathL {
    params: BSParams,
    letters: Vec<u32>,
    tail: BigInt,
}

impl PathL {
    pub fn new(params: BSParams, letters: Vec<u32>, tail: impl Into<BigInt>) -> Result<Self> {
        if let Some(&l) = letters.iter().find(|&&l| l >= params.d()) {
            return Err(Error::InvalidSequence(format!(
                "letter {l} outside [0,{})",
                params.d()
            )));
        }
        RawForm {
            params,
            letters,
            tail: tail.into(),
        }
        .into_path()
    }

    pub fn identity(params: BSParams) -> Self {
        PathL {
            params,
            letters: Vec::new(),
            tail: BigInt::zero(),
        }
    }

    /// `b^{i_0} a ... b^{i_k} a` with tail zero.
    pub fn from_letters(params: BSParams, letters: &[u32]) -> Result<Self> {
        Self::new(params, letters.to_vec(), 0)
    }

    pub fn b_power(params: BSParams, n: impl Into<BigInt>) -> Result<Self> {
        Self::new(params, Vec::new(), n)
    }

    pub fn params(&self) -> BSParams {
        self.params
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn tail(&self) -> &BigInt {
        &self.tail
    }

    pub fn height(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty() && self.tail.is_zero()
    }

    pub fn is_b_power(&self) -> bool {
        self.letters.is_empty()
    }

    /// The same letters with a different tail.
    pub fn with_tail(&self, tail: impl Into<BigInt>) -> Result<Self> {
        Self::new(self.params, self.letters.clone(), tail)
    }

    /// The literal word `b^{i_0} a ... b^{i_{k-1}} a b^p`.
    pub fn word(&self) -> GenWord {
        let mut w = GenWord::new();
        for &l in &self.letters {
            w.push(Letter::B, BigInt::from(l));
            w.push(Letter::A, BigInt::from(1));
        }
        w.push(Letter::B, self.tail.clone());
        w
    }
}

impl fmt::Display for PathL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word().fmt(f)
    }
}

impl Serialize for PathL {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PathL", 5)?;
        st.serialize_field("c", &self.params.c())?;
        st.serialize_field("d", &self.params.d())?;
        st.serialize_field("variant", &self.params.variant())?;
        st.serialize_field("letters", &self.letters)?;
        st.serialize_field("tail", &BigIntJson(&self.tail))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PathL {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            c: u32,
            d: u32,
            variant: Variant,
            letters: Vec<u32>,
            tail: serde_json::Value,
        }
        let raw = Raw::deserialize(de)?;
        let tail = bigint_from_json(&raw.tail).map_err(de::Error::custom)?;
        let params = BSParams::new(raw.c, raw.d, raw.variant).map_err(de::Error::custom)?;
        PathL::new(params, raw.letters, tail).map_err(de::Error::custom)
    }
}

/// Serializes as a JSON number when it fits in 64 bits, else as a decimal string.
pub(crate) struct BigIntJson<'a>(pub &'a BigInt);

impl Serialize for BigIntJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub(crate) fn serialize_bigint<S: Serializer>(
    n: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    BigIntJson(n).serialize(s)
}

/// Serde adapter for sequences of big integers, using the same number-or-string encoding.
pub(crate) mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let items: Vec<BigIntJson<'_>> = v.iter().map(BigIntJson).collect();
        items.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(de)?;
        raw.iter()
            .map(|v| bigint_from_json(v).map_err(de::Error::custom))
            .collect()
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| format!("not an integer: {n}")),
        serde_json::Value::String(s) => s.parse().map_err(|_| format!("not an integer: {s:?}")),
        other => Err(format!("expected integer, got {other}")),
    }
}

/// An element in form (R): `b^q a b^{j_1} ... a b^{j_k}`, `j_μ ∈ [0,c)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathR {
    params: BSParams,
    lead: BigInt,
    letters: Vec<u32>,
}

impl PathR {
    pub fn new(params: BSParams, lead: impl Into<BigInt>, letters: Vec<u32>) -> Result<Self> {
        let lead = lead.into();
        if let Some(&l) = letters.iter().find(|&&l| l >= params.c()) {
            return Err(Error::InvalidSequence(format!(
                "letter {l} outside [0,{})",
                params.c()
            )));
        }
        let ok = match params.case() {
            Case::BS1 | Case::BS2 => !lead.is_negative(),
            Case::BS3 => !letters.is_empty() || !lead.is_negative(),
        };
        if !ok {
            return Err(Error::NotInMonoid);
        }
        Ok(PathR {
            params,
            lead,
            letters,
        })
    }

    pub fn params(&self) -> BSParams {
        self.params
    }

    pub fn lead(&self) -> &BigInt {
        &self.lead
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn word(&self) -> GenWord {
        let mut w = GenWord::new().b(self.lead.clone());
        for &j in &self.letters {
            w = w.a().b(j);
        }
        w
    }
}

impl fmt::Display for PathR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word().fmt(f)
    }
}

/// Form (L) of a word by the left-to-right sweep.
pub fn normalize(w: &GenWord, params: BSParams) -> Result<PathL> {
    let mut raw = RawForm::new(params);
    raw.push_word(w)?;
    raw.into_path()
}

/// Form (R) by the right-to-left sweep: each exponent after an `a` is written
/// `j + n c` and `b^{±n d}` is moved to the left of that `a`.
pub fn to_form_r(alpha: &PathL) -> PathR {
    let p = alpha.params;
    let c = BigInt::from(p.c());
    let shift = p.d() as i64 * p.sign();
    let mut e = alpha.tail.clone();
    let mut js = Vec::with_capacity(alpha.height());
    for &i in alpha.letters.iter().rev() {
        let (n, j) = e.div_mod_floor(&c);
        js.push(j.to_u32().expect("residue below c"));
        e = n * shift + i;
    }
    js.reverse();
    PathR {
        params: p,
        lead: e,
        letters: js,
    }
}

pub fn from_form_r(rho: &PathR) -> PathL {
    let mut raw = RawForm::new(rho.params);
    raw.push_b(&rho.lead);
    for &j in &rho.letters {
        raw.push_a();
        raw.push_b_small(j as i64);
    }
    raw.into_path()
        .expect("a valid form (R) describes a monoid element")
}

pub fn compose(alpha: &PathL, beta: &PathL) -> Result<PathL> {
    if alpha.params != beta.params {
        return Err(Error::ParamsMismatch);
    }
    let mut raw = RawForm::from_path(alpha);
    raw.push_path(beta);
    raw.into_path()
}

pub fn height(alpha: &PathL) -> usize {
    alpha.height()
}
