//! Order structure of the monoid: initial segments, meets, joins, least upper
//! bounds for group elements `α β^{-1}`, exhaustive sets and the presentation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::odometer::{b_action, psi_finite_bs2, PrefixSeq};
use crate::params::{BSParams, Case};
use crate::words::{to_form_r, PathL, RawForm};

fn same_params(a: &PathL, b: &PathL) -> Result<BSParams> {
    if a.params() != b.params() {
        return Err(Error::ParamsMismatch);
    }
    Ok(a.params())
}

/// `γ` with `α γ = β`, if there is one.
pub fn left_quotient(a: &PathL, b: &PathL) -> Result<Option<PathL>> {
    let p = same_params(a, b)?;
    let s = a.height();
    if !b.letters().starts_with(a.letters()) {
        return Ok(None);
    }
    let mut raw = RawForm::new(p);
    raw.push_b(&-a.tail());
    raw.push_blocks(&b.letters()[s..]);
    raw.push_b(b.tail());
    Ok(raw.into_path().ok())
}

/// Whether `β ∈ α Λ`.
pub fn is_initial_segment(a: &PathL, b: &PathL) -> Result<bool> {
    Ok(left_quotient(a, b)?.is_some())
}

/// Whether `α` and `β` have a common extension.
pub fn meets(a: &PathL, b: &PathL) -> Result<bool> {
    same_params(a, b)?;
    Ok(a.letters().iter().zip(b.letters()).all(|(x, y)| x == y))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum JoinResult {
    Disjoint,
    Join(PathL),
}

impl JoinResult {
    pub fn value(&self) -> Option<&PathL> {
        match self {
            JoinResult::Disjoint => None,
            JoinResult::Join(g) => Some(g),
        }
    }
}

/// The unique minimal common extension of `α` and `β`.
pub fn join(a: &PathL, b: &PathL) -> Result<JoinResult> {
    let p = same_params(a, b)?;
    if !meets(a, b)? {
        return Ok(JoinResult::Disjoint);
    }
    let (short, long) = if a.height() <= b.height() { (a, b) } else { (b, a) };
    if short.height() == long.height() {
        let g = if a.tail() >= b.tail() { a } else { b };
        return Ok(JoinResult::Join(g.clone()));
    }
    if p.case() == Case::BS3 {
        // meeting elements are comparable here
        let g = if is_initial_segment(short, long)? { long } else { short };
        return Ok(JoinResult::Join(g.clone()));
    }
    let s = short.height();
    let rest = &long.letters()[s..];
    let e = short.tail();
    let g = match p.case() {
        Case::BS1 => join_bs1(p, short.letters(), e, rest, long.tail()),
        _ => join_bs2(p, short.letters(), e, rest, long.tail()),
    };
    Ok(JoinResult::Join(g.unwrap_or_else(|| long.clone())))
}

/// `α(P) b^e ∨ α(P) α(L') b^q` for `c ≥ d`; `None` means the longer element.
fn join_bs1(p: BSParams, prefix: &[u32], e: &BigInt, rest: &[u32], q: &BigInt) -> Option<PathL> {
    let i0 = BigInt::from(rest[0]);
    if *e <= i0 {
        return None;
    }
    let d = BigInt::from(p.d());
    let h = (e - &i0).div_ceil(&d);
    let shift = &h * &d;
    // b^{hd} α(j) = α(L') b^T with j the letters of b^{-hd} α(L')
    let tail_seq = PrefixSeq::new(p, rest.to_vec()).expect("letters below d");
    let j = b_action(&tail_seq, &-&shift);
    let mut raw = RawForm::new(p);
    raw.push_b(&shift);
    raw.push_blocks(j.entries());
    debug_assert_eq!(raw.letters, rest);
    let t = raw.tail;
    let mut out = RawForm::new(p);
    out.push_blocks(prefix);
    out.push_blocks(rest);
    out.push_b(if t > *q { &t } else { q });
    Some(out.into_path().expect("nonnegative tail"))
}

/// The same for `d > c`, through the form (R) of the longer element.
fn join_bs2(p: BSParams, prefix: &[u32], e: &BigInt, rest: &[u32], q: &BigInt) -> Option<PathL> {
    let rho = to_form_r(&PathL::new(p, rest.to_vec(), q.clone()).expect("valid suffix"));
    let v = rho.lead();
    if e <= v {
        return None;
    }
    let m = e - v;
    let js = rho.letters();
    let mut i = vec![0u32];
    i.extend_from_slice(&js[..js.len() - 1]);
    // α(i) b^{hc} = b^{d(r_1 + ... + r_h)} α(ψ^h(i)); find the least h reaching m
    let d = BigInt::from(p.d());
    let mut acc = BigInt::zero();
    let mut h = 0u64;
    while acc < m {
        let (next, r) = psi_finite_bs2(p, &i).expect("entries below c");
        acc += &d * r;
        i = next;
        h += 1;
    }
    let mut out = RawForm::new(p);
    out.push_blocks(prefix);
    out.push_b(v);
    let mut base = vec![0u32];
    base.extend_from_slice(&js[..js.len() - 1]);
    out.push_blocks(&base);
    out.push_b(&(BigInt::from(h) * p.c()));
    Some(out.into_path().expect("positive word"))
}

/// Minimal common extensions found by direct search over letter sequences of
/// the two largest relevant heights and tails up to `depth`.
pub fn join_oracle(a: &PathL, b: &PathL, depth: u64) -> Result<Vec<PathL>> {
    let p = same_params(a, b)?;
    if !meets(a, b)? {
        return Ok(Vec::new());
    }
    let h = a.height().max(b.height());
    let depth = BigInt::from(depth);
    let mut found: Vec<PathL> = Vec::new();
    for len in h..=h + 1 {
        for g in all_sequences(p.d(), len) {
            let lo = if p.is_negative() && len > 0 {
                -depth.clone()
            } else {
                BigInt::zero()
            };
            let extends = |t: &BigInt| -> bool {
                let x = PathL::new(p, g.clone(), t.clone()).expect("valid tail");
                is_initial_segment(a, &x).unwrap() && is_initial_segment(b, &x).unwrap()
            };
            if !extends(&depth) {
                continue;
            }
            let (mut lo, mut hi) = (lo, depth.clone());
            while lo < hi {
                let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
                if extends(&mid) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            found.push(PathL::new(p, g, lo).expect("valid tail"));
        }
    }
    found.sort_by(|x, y| (x.height(), x.tail()).cmp(&(y.height(), y.tail())));
    let mut minimal: Vec<PathL> = Vec::new();
    for x in found {
        if !minimal
            .iter()
            .any(|m| is_initial_segment(m, &x).unwrap())
        {
            minimal.push(x);
        }
    }
    Ok(minimal)
}

/// A tail bound large enough for [`join_oracle`] to see the join.
pub fn join_oracle_depth(a: &PathL, b: &PathL) -> u64 {
    let p = a.params();
    let h = a.height().max(b.height()) as u32 + 1;
    let t = a.tail().abs() + b.tail().abs();
    let t = t.to_u64().unwrap_or(u64::MAX / 4);
    (t + p.d() as u64 + 1).saturating_mul((p.c() as u64 + 1).saturating_pow(h))
}

fn all_sequences(d: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..d).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// The group element `α β^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElementPair {
    pub alpha: PathL,
    pub beta: PathL,
}

impl GroupElementPair {
    pub fn new(alpha: PathL, beta: PathL) -> Result<Self> {
        same_params(&alpha, &beta)?;
        Ok(GroupElementPair { alpha, beta })
    }

    pub fn params(&self) -> BSParams {
        self.alpha.params()
    }
}

/// `α(i) b^n α(j)^{-1}` with no further cancellation across the middle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedPair {
    pub i: Vec<u32>,
    #[serde(serialize_with = "crate::words::serialize_bigint")]
    pub n: BigInt,
    pub j: Vec<u32>,
}

/// Cancels `a b^{kc} a^{-1} = b^{±kd}` for as long as it applies.
pub fn reduce_group_pair(t: &GroupElementPair) -> ReducedPair {
    let p = t.params();
    let c = BigInt::from(p.c());
    let mut i = t.alpha.letters().to_vec();
    let mut j = t.beta.letters().to_vec();
    let mut n = t.alpha.tail() - t.beta.tail();
    while !i.is_empty() && !j.is_empty() && n.is_multiple_of(&c) {
        let (x, y) = (i.pop().unwrap(), j.pop().unwrap());
        n = (&n / &c) * (p.d() as i64 * p.sign()) + x as i64 - y as i64;
    }
    ReducedPair { i, n, j }
}

/// The `δ` with `t Λ ∩ Λ = δ Λ`.
pub fn quasi_lattice_generator(t: &GroupElementPair) -> Result<Option<PathL>> {
    let p = t.params();
    if p.case() == Case::BS3 {
        if p.c() > 1 {
            return Err(Error::WrongCase {
                op: "quasiLatticeGenerator",
                case: p.case(),
            });
        }
        return Ok(lfe_witness(t)?.into_iter().next());
    }
    let r = reduce_group_pair(t);
    let mut raw = RawForm::new(p);
    raw.push_blocks(&r.i);
    if r.n.is_positive() {
        raw.push_b(&r.n);
    }
    Ok(raw.into_path().ok())
}

/// A finite subset of `t Λ ∩ Λ` meeting every element of it (negative relation).
pub fn lfe_witness(t: &GroupElementPair) -> Result<Vec<PathL>> {
    let p = t.params();
    if p.case() != Case::BS3 {
        return Err(Error::WrongCase {
            op: "lfeWitness",
            case: p.case(),
        });
    }
    let r = reduce_group_pair(t);
    let mut raw = RawForm::new(p);
    raw.push_blocks(&r.i);
    if !r.j.is_empty() {
        return Ok(vec![raw.into_path().expect("height-positive or identity")]);
    }
    if !r.i.is_empty() || !r.n.is_negative() {
        raw.push_b(&r.n);
    }
    Ok(vec![raw.into_path().expect("valid by construction")])
}

/// Whether every element meets some member of `f`.
pub fn exhaustive(f: &[PathL]) -> bool {
    if f.iter().any(PathL::is_b_power) {
        return true;
    }
    let Some(first) = f.first() else {
        return false;
    };
    let d = first.params().d();
    let depth = f.iter().map(PathL::height).max().unwrap_or(0);
    covers(f, &mut Vec::new(), d, depth)
}

fn covers(f: &[PathL], node: &mut Vec<u32>, d: u32, depth: usize) -> bool {
    if f.iter().any(|g| node.starts_with(g.letters())) {
        return true;
    }
    if node.len() == depth {
        return false;
    }
    (0..d).all(|x| {
        node.push(x);
        let ok = covers(f, node, d, depth);
        node.pop();
        ok
    })
}

/// Generators and relations of the boundary algebra, instantiated at `(c, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub label: u8,
    pub text: String,
    pub redundant: bool,
}

pub fn presentation(p: BSParams) -> Presentation {
    let (c, d) = (p.c(), p.d());
    let neg = p.is_negative();
    let rel3 = if neg {
        format!("S_b^{d} S_a S_b^{c} = S_a")
    } else {
        format!("S_a S_b^{c} = S_b^{d} S_a")
    };
    let rel = |label, text: String, redundant| Relation {
        label,
        text,
        redundant,
    };
    Presentation {
        generators: vec!["S_a".into(), "S_b".into()],
        relations: vec![
            rel(1, "S_a and S_b are isometries".into(), false),
            rel(2, "S_b is a unitary".into(), neg),
            rel(3, rel3, false),
            rel(
                4,
                format!("sum_{{i=0}}^{{{}}} S_b^i S_a S_a^* S_b^{{-i}} = 1", d - 1),
                false,
            ),
        ],
    }
}
