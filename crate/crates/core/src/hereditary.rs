//! Directed hereditary subsets of the monoid: descriptors, membership, maximal
//! tails, the carry-sequence inequalities, the `d > c` chain, separation
//! witnesses and composition of boundary triples.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{is_initial_segment, join, left_quotient, meets, JoinResult};
use crate::odometer::{phi, PrefixSeq};
use crate::params::{BSParams, Case};
use crate::seq::EventuallyPeriodicSeq;
use crate::words::{bigint_vec, PathL, RawForm};

/// A directed hereditary set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum Descriptor {
    /// All initial segments of `alpha`.
    Finite { alpha: PathL },
    /// All initial segments of `α(letters) b^p`, `p` arbitrary.
    Coset { letters: Vec<u32> },
    /// All initial segments of the `α_k(i)`.
    C0 { i: EventuallyPeriodicSeq },
    /// All initial segments of the `α_k(i) b^p`.
    #[serde(rename = "cinf")]
    CInf { i: EventuallyPeriodicSeq },
    /// All initial segments of `α_{ℓ-1}(i) b^{n_ℓ d + i_ℓ}`, stored to a finite depth (`c ≥ d`).
    Cn1 {
        i: Vec<u32>,
        #[serde(with = "bigint_vec")]
        n: Vec<BigInt>,
    },
    /// All initial segments of `α_{k-1}(i) b^{nc}` (`d > c`).
    Cn2 { i: EventuallyPeriodicSeq, n: u64 },
}

impl Descriptor {
    pub fn validate(&self, p: BSParams) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDescriptor(m));
        match self {
            Descriptor::Finite { alpha } => {
                if alpha.params() != p {
                    return Err(Error::ParamsMismatch);
                }
            }
            Descriptor::Coset { letters } => {
                if letters.iter().any(|&x| x >= p.d()) {
                    return bad(format!("letters {letters:?} not below d = {}", p.d()));
                }
            }
            Descriptor::C0 { i } | Descriptor::CInf { i } => i.check_bound(p.d())?,
            Descriptor::Cn1 { i, n } => {
                if p.case() != Case::BS1 {
                    return bad(format!("cn1 needs c >= d on the positive relation, not {}", p.case()));
                }
                if i.is_empty() || i.len() != n.len() {
                    return bad("cn1 needs nonempty i and n of equal length".into());
                }
                if n[0].is_negative() {
                    return bad("n_0 must be nonnegative".into());
                }
                if !validate_seq_bs1(p, i, n)? {
                    return bad("n violates the carry inequalities".into());
                }
            }
            Descriptor::Cn2 { i, n } => {
                i.check_bound(p.d())?;
                let (s, m) = chain_bs2(p, i)?;
                if s >= p.c() {
                    return bad(format!("cn2 needs limsup {s} below c = {}", p.c()));
                }
                if *n >= m {
                    return bad(format!("cn2 needs n < {m}, got {n}"));
                }
            }
        }
        Ok(())
    }
}

/// The supremum of the tails at a given height.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailBound {
    /// No element of this height.
    Absent,
    #[serde(serialize_with = "crate::words::serialize_bigint")]
    AtMost(BigInt),
    Unbounded,
}

impl fmt::Display for TailBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailBound::Absent => f.write_str("absent"),
            TailBound::AtMost(t) => write!(f, "{t}"),
            TailBound::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// The form (R) lead of `b^{i_h} a ... b^{i_{K-1}} a b^{nc}`:
/// `e_K = nc`, `e_μ = i_μ + d ⌊e_{μ+1}/c⌋`.
fn stacked_lead(p: BSParams, i: &EventuallyPeriodicSeq, h: usize, big_k: usize, n: u64) -> BigInt {
    let (c, d) = (BigInt::from(p.c()), BigInt::from(p.d()));
    let mut e = BigInt::from(n) * p.c();
    for mu in (h..big_k).rev() {
        e = BigInt::from(i.entry(mu)) + &d * e.div_floor(&c);
    }
    e
}

/// Whether the sets `C_n(i)` of the positive cases have bounded tails, i.e.
/// `C_n(i) ≠ C_∞(i)`.
fn bounded_chain(p: BSParams, i: &EventuallyPeriodicSeq, n: u64) -> bool {
    match p.case() {
        Case::BS1 => n == 0,
        Case::BS2 => {
            let s = i.limsup();
            s < p.c() && n < chain_length(p, s)
        }
        Case::BS3 => false,
    }
}

fn chain_length(p: BSParams, s: u32) -> u64 {
    let (c, d) = (p.c() as u64, p.d() as u64);
    (c - s as u64).div_ceil(d - c)
}

fn sup_lead(p: BSParams, i: &EventuallyPeriodicSeq, h: usize, n: u64) -> TailBound {
    if !bounded_chain(p, i, n) {
        return TailBound::Unbounded;
    }
    let per = i.period().len();
    let k = h.max(i.preperiod().len()) + per + 1;
    let (x, y) = (stacked_lead(p, i, h, k, n), stacked_lead(p, i, h, k + per, n));
    if x == y {
        TailBound::AtMost(x)
    } else {
        TailBound::Unbounded
    }
}

/// Form (R) lead of `b^{l_h} a ... b^{l_{k-1}} a b^t`.
fn suffix_lead(p: BSParams, letters: &[u32], tail: &BigInt) -> BigInt {
    let c = BigInt::from(p.c());
    let shift = p.d() as i64 * p.sign();
    let mut e = tail.clone();
    for &l in letters.iter().rev() {
        e = e.div_floor(&c) * shift + l;
    }
    e
}

/// `sup { q : α_{h-1}(i) b^q ∈ D }`.
pub fn max_tail(d: &Descriptor, p: BSParams, h: usize) -> Result<TailBound> {
    Ok(match d {
        Descriptor::Finite { alpha } => match h.cmp(&alpha.height()) {
            std::cmp::Ordering::Greater => TailBound::Absent,
            std::cmp::Ordering::Equal => TailBound::AtMost(alpha.tail().clone()),
            std::cmp::Ordering::Less => {
                TailBound::AtMost(suffix_lead(p, &alpha.letters()[h..], alpha.tail()))
            }
        },
        Descriptor::Coset { letters } => {
            if h > letters.len() {
                TailBound::Absent
            } else {
                TailBound::Unbounded
            }
        }
        Descriptor::C0 { i } => sup_lead(p, i, h, 0),
        Descriptor::CInf { .. } => TailBound::Unbounded,
        Descriptor::Cn1 { i, n } => {
            if h >= n.len() {
                return Err(Error::DepthExceeded {
                    needed: h + 1,
                    available: n.len(),
                });
            }
            TailBound::AtMost(&n[h] * p.d() + i[h])
        }
        Descriptor::Cn2 { i, n } => sup_lead(p, i, h, *n),
    })
}

fn prefix_of_seq(letters: &[u32], i: &EventuallyPeriodicSeq) -> bool {
    letters.iter().enumerate().all(|(m, &x)| i.entry(m) == x)
}

/// Depth at which `α_{K-1}(i) b^{nc}` already bounds every member of height `h`.
fn stage_bound(i: &EventuallyPeriodicSeq, h: usize) -> usize {
    h.max(i.preperiod().len()) + 2 * i.period().len() + 2
}

/// Exact membership `β ∈ D`.
pub fn member(d: &Descriptor, beta: &PathL) -> Result<bool> {
    let p = beta.params();
    let h = beta.height();
    match d {
        Descriptor::Finite { alpha } => is_initial_segment(beta, alpha),
        Descriptor::Coset { letters } => {
            let a = PathL::from_letters(p, letters)?;
            Ok(match join(beta, &a)? {
                JoinResult::Join(g) => g.letters() == letters.as_slice(),
                JoinResult::Disjoint => false,
            })
        }
        Descriptor::CInf { i } => Ok(prefix_of_seq(beta.letters(), i)),
        Descriptor::C0 { i } => staged_member(beta, i, 0),
        Descriptor::Cn2 { i, n } => staged_member(beta, i, *n),
        Descriptor::Cn1 { i, n } => {
            if h >= n.len() {
                return Err(Error::DepthExceeded {
                    needed: h + 1,
                    available: n.len(),
                });
            }
            Ok(i.starts_with(beta.letters()) && *beta.tail() <= &n[h] * p.d() + i[h])
        }
    }
}

fn staged_member(beta: &PathL, i: &EventuallyPeriodicSeq, n: u64) -> Result<bool> {
    let p = beta.params();
    if !prefix_of_seq(beta.letters(), i) {
        return Ok(false);
    }
    if !bounded_chain(p, i, n) {
        return Ok(true);
    }
    let k = stage_bound(i, beta.height());
    let top = PathL::new(p, i.prefix(k), BigInt::from(n) * p.c())?;
    is_initial_segment(beta, &top)
}

/// The carry inequalities `c n_{ℓ-1} ≤ d n_ℓ + i_ℓ < c (n_{ℓ-1} + 1)` for `ℓ ≥ 1`.
pub fn validate_seq_bs1(p: BSParams, i: &[u32], n: &[BigInt]) -> Result<bool> {
    if p.case() != Case::BS1 {
        return Err(Error::WrongCase {
            op: "validateSeqBS1",
            case: p.case(),
        });
    }
    if i.len() != n.len() {
        return Err(Error::InvalidSequence(format!(
            "lengths differ: {} vs {}",
            i.len(),
            n.len()
        )));
    }
    let (c, d) = (p.c(), p.d());
    Ok((1..i.len()).all(|l| {
        let mid = &n[l] * d + i[l];
        &n[l - 1] * c <= mid && mid < (&n[l - 1] + 1) * c
    }))
}

/// `n' = n + r(i)`, given `n` valid against `φ(i)`.
pub fn sigma_shift_bs1(p: BSParams, i: &[u32], n: &[BigInt]) -> Result<Vec<BigInt>> {
    if p.case() != Case::BS1 {
        return Err(Error::WrongCase {
            op: "sigmaShiftBS1",
            case: p.case(),
        });
    }
    let (f, r) = phi(&PrefixSeq::new(p, i.to_vec())?);
    if !validate_seq_bs1(p, f.entries(), n)? {
        return Err(Error::InvalidSequence(
            "n does not satisfy the carry inequalities for φ(i)".into(),
        ));
    }
    Ok(n.iter().zip(&r.entries).map(|(a, b)| a + b).collect())
}

/// `(s, m)` with `s` the limsup of `i` and `m = ⌈(c-s)/(d-c)⌉` (zero when `s ≥ c`).
pub fn chain_bs2(p: BSParams, i: &EventuallyPeriodicSeq) -> Result<(u32, u64)> {
    if p.case() != Case::BS2 {
        return Err(Error::WrongCase {
            op: "chainBS2",
            case: p.case(),
        });
    }
    let s = i.limsup();
    if s >= p.c() {
        return Ok((s, 0));
    }
    Ok((s, chain_length(p, s)))
}

/// Whether `b^q ∈ D` for every `q ≤ depth`.
pub fn contains_b(d: &Descriptor, p: BSParams, depth: u64) -> Result<bool> {
    Ok(match max_tail(d, p, 0)? {
        TailBound::Unbounded => true,
        TailBound::AtMost(t) => t >= BigInt::from(depth),
        TailBound::Absent => false,
    })
}

/// A `γ` with `αγ ⊥ βγ`; exists for all `α ≠ β` exactly when `d ∤ c`.
pub fn separation_witness(a: &PathL, b: &PathL) -> Result<PathL> {
    let p = a.params();
    if b.params() != p {
        return Err(Error::ParamsMismatch);
    }
    if p.c().is_multiple_of(p.d()) {
        return Err(Error::Periodic);
    }
    if a == b {
        return Err(Error::EqualElements);
    }
    if !meets(a, b)? {
        return Ok(PathL::identity(p));
    }
    let (short, long) = if a.height() <= b.height() { (a, b) } else { (b, a) };
    let s = short.height();
    if s == long.height() {
        // α(P) b^x versus α(P) b^y: separate e from b^{|x-y|}
        let q = (short.tail() - long.tail()).abs();
        let mut k = 0usize;
        let mut x = q;
        let (c, d) = (BigInt::from(p.c()), BigInt::from(p.d()));
        while x.is_multiple_of(&d) {
            x = x / &d * &c;
            k += 1;
        }
        let mut raw = RawForm::new(p);
        for _ in 0..=k {
            raw.push_a();
        }
        return Ok(raw.into_path().expect("positive word"));
    }
    // b^x versus b^i a ...: make the next letters differ
    let x = short.tail();
    let i = long.letters()[s];
    let d = BigInt::from(p.d());
    let j = (0..p.d())
        .find(|&j| (x + j).mod_floor(&d) != BigInt::from(i))
        .expect("d >= 2");
    let mut raw = RawForm::new(p);
    raw.push_blocks(&[j]);
    Ok(raw.into_path().expect("positive word"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralFlags {
    pub minimal: bool,
    pub contractive: bool,
    pub topologically_free: bool,
    pub kirchberg: bool,
}

pub fn structural_flags(p: BSParams) -> StructuralFlags {
    let free = !p.c().is_multiple_of(p.d());
    StructuralFlags {
        minimal: true,
        contractive: p.d() > 1,
        topologically_free: free,
        kirchberg: free,
    }
}

/// For `d | c`: whether `b^d γ` keeps the letters of `γ`.
pub fn periodicity_check(p: BSParams, g: &PathL) -> Result<bool> {
    if !p.c().is_multiple_of(p.d()) {
        return Err(Error::WrongCase {
            op: "periodicityCheck",
            case: p.case(),
        });
    }
    let mut raw = RawForm::new(p);
    raw.push_b_small(p.d() as i64);
    raw.push_path(g);
    Ok(raw.letters == g.letters())
}

/// The boundary point `α(letters) b^shift · x` for an eventually periodic `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryPoint {
    pub letters: Vec<u32>,
    #[serde(serialize_with = "crate::words::serialize_bigint")]
    pub shift: BigInt,
    pub seq: EventuallyPeriodicSeq,
}

impl BoundaryPoint {
    pub fn new(seq: EventuallyPeriodicSeq) -> Self {
        BoundaryPoint {
            letters: Vec::new(),
            shift: BigInt::zero(),
            seq,
        }
    }

    /// The first `depth` letters of the point.
    pub fn truncate(&self, p: BSParams, depth: usize) -> Vec<u32> {
        let mut raw = RawForm::new(p);
        raw.push_blocks(&self.letters);
        raw.push_b(&self.shift);
        let extra = depth.saturating_sub(self.letters.len());
        raw.push_blocks(&self.seq.prefix(extra));
        raw.letters.truncate(depth);
        raw.letters
    }

    /// `γ · x`.
    pub fn act(&self, g: &PathL) -> Self {
        let mut raw = RawForm::from_path(g);
        raw.push_blocks(&self.letters);
        raw.push_b(&self.shift);
        BoundaryPoint {
            letters: raw.letters,
            shift: raw.tail,
            seq: self.seq.clone(),
        }
    }

    /// `b^n · x`.
    pub fn b_act(&self, p: BSParams, n: &BigInt) -> Self {
        let mut raw = RawForm::new(p);
        raw.push_b(n);
        raw.push_blocks(&self.letters);
        raw.push_b(&self.shift);
        BoundaryPoint {
            letters: raw.letters,
            shift: raw.tail,
            seq: self.seq.clone(),
        }
    }

    /// `ξ^{-1} · x`, defined when the letters of `ξ` begin those of `x`.
    pub fn strip(&self, p: BSParams, xi: &PathL) -> Result<Self> {
        let k = xi.height();
        let mut me = self.clone();
        if me.letters.len() < k {
            let m = k - me.letters.len();
            let mut raw = RawForm::new(p);
            raw.push_blocks(&me.letters);
            raw.push_b(&me.shift);
            raw.push_blocks(&me.seq.prefix(m));
            me = BoundaryPoint {
                letters: raw.letters,
                shift: raw.tail,
                seq: me.seq.shift(m),
            };
        }
        if me.letters[..k] != *xi.letters() {
            return Err(Error::NotComposable(format!(
                "{xi} is not an initial segment of the point"
            )));
        }
        let mut raw = RawForm::new(p);
        raw.push_b(&-xi.tail());
        raw.push_blocks(&me.letters[k..]);
        raw.push_b(&me.shift);
        Ok(BoundaryPoint {
            letters: raw.letters,
            shift: raw.tail,
            seq: me.seq,
        })
    }

    /// Truncation depth used to compare two points.
    pub fn comparison_depth(&self, other: &Self) -> usize {
        self.seq.comparison_depth(&other.seq) + self.letters.len().max(other.letters.len()) + 2
    }

    pub fn same_as(&self, p: BSParams, other: &Self) -> bool {
        let n = self.comparison_depth(other);
        self.truncate(p, n) == other.truncate(p, n)
    }
}

/// `[α, β, x]`: the germ sending `βx` to `αx`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryTriple {
    pub alpha: PathL,
    pub beta: PathL,
    pub point: BoundaryPoint,
}

impl BoundaryTriple {
    pub fn new(alpha: PathL, beta: PathL, point: BoundaryPoint) -> Result<Self> {
        if alpha.params() != beta.params() {
            return Err(Error::ParamsMismatch);
        }
        Ok(BoundaryTriple { alpha, beta, point })
    }

    pub fn params(&self) -> BSParams {
        self.alpha.params()
    }

    pub fn inverse(&self) -> Self {
        BoundaryTriple {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            point: self.point.clone(),
        }
    }

    /// `θ(α) - θ(β)`.
    pub fn height_diff(&self) -> i64 {
        self.alpha.height() as i64 - self.beta.height() as i64
    }

    pub fn range(&self) -> BoundaryPoint {
        self.point.act(&self.alpha)
    }

    pub fn source(&self) -> BoundaryPoint {
        self.point.act(&self.beta)
    }

    pub fn is_unit(&self) -> bool {
        self.alpha == self.beta
    }

    /// Equality of germs: same source and same group element `αβ^{-1}`.
    pub fn same_as(&self, other: &Self) -> bool {
        let p = self.params();
        let (s1, s2) = (self.source(), other.source());
        if !s1.same_as(p, &s2) {
            return false;
        }
        let h = self.beta.height().max(other.beta.height());
        let letters = s1.truncate(p, h);
        group_key(self, &letters) == group_key(other, &letters)
    }
}

/// Form (L) of `α β^{-1} α(letters)`, where the letters of `β` begin `letters`.
fn group_key(g: &BoundaryTriple, letters: &[u32]) -> (Vec<u32>, BigInt) {
    let mut raw = RawForm::from_path(&g.alpha);
    raw.push_b(&-g.beta.tail());
    raw.push_blocks(&letters[g.beta.height()..]);
    (raw.letters, raw.tail)
}

/// `[α,β,x][γ,δ,y] = [αξ, δη, z]`, defined when `βx = γy`.
pub fn compose_boundary_triples(g: &BoundaryTriple, h: &BoundaryTriple) -> Result<BoundaryTriple> {
    let p = g.params();
    if h.params() != p {
        return Err(Error::ParamsMismatch);
    }
    let (src, rng) = (g.source(), h.range());
    if !src.same_as(p, &rng) {
        return Err(Error::NotComposable(
            "source of the first differs from range of the second".into(),
        ));
    }
    let (beta, gamma) = (&g.beta, &h.alpha);
    if beta.letters() == gamma.letters() {
        // β = ε b^p, γ = ε b^q, m = min(p, q): the product is [α b^{q-m}, δ b^{p-m}, b^{m-q} x]
        let m = beta.tail().min(gamma.tail());
        let (bp, bq) = (beta.tail() - m, gamma.tail() - m);
        let alpha = g.alpha.with_tail(g.alpha.tail() + &bq)?;
        let delta = h.beta.with_tail(h.beta.tail() + &bp)?;
        let point = g.point.b_act(p, &-bq);
        return BoundaryTriple::new(alpha, delta, point);
    }
    let zeta = match join(beta, gamma)? {
        JoinResult::Join(z) => z,
        JoinResult::Disjoint => {
            return Err(Error::NotComposable("β and γ do not meet".into()));
        }
    };
    let xi = left_quotient(beta, &zeta)?.expect("join extends β");
    let eta = left_quotient(gamma, &zeta)?.expect("join extends γ");
    let z = src.strip(p, &zeta)?;
    let mut a = RawForm::from_path(&g.alpha);
    a.push_path(&xi);
    let mut b = RawForm::from_path(&h.beta);
    b.push_path(&eta);
    BoundaryTriple::new(a.into_path()?, b.into_path()?, z)
}
