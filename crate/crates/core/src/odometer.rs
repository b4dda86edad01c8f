//! The odometer maps on truncations of `[0,d)^ℕ`: `φ`, its inverse, the carries
//! `r`, the `b`-action and the finite `ψ` of the `d > c` case.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{BSParams, Case};
use crate::words::{to_form_r, PathL, RawForm};

/// A truncation `(i_0, ..., i_k)` of a point of `[0,d)^ℕ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrefixSeq {
    #[serde(skip)]
    params: BSParams,
    entries: Vec<u32>,
}

impl PrefixSeq {
    pub fn new(params: BSParams, entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidSequence("prefix must be nonempty".into()));
        }
        if let Some(&x) = entries.iter().find(|&&x| x >= params.d()) {
            return Err(Error::InvalidSequence(format!(
                "entry {x} outside [0,{})",
                params.d()
            )));
        }
        Ok(PrefixSeq {
            params,
            entries,
        })
    }

    /// Parses comma-separated digits.
    pub fn parse(params: BSParams, text: &str) -> Result<Self> {
        let entries = text
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::InvalidSequence(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, entries)
    }

    pub fn params(&self) -> BSParams {
        self.params
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `α_k(i) = b^{i_0} a ... b^{i_k} a`.
    pub fn alpha(&self) -> PathL {
        alpha(self.params(), &self.entries)
    }
}

impl fmt::Display for PrefixSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.entries.iter().map(u32::to_string).collect();
        f.write_str(&s.join(","))
    }
}

/// The carries `r_0, ..., r_k` and the signs `σ_k` of the identity
/// `b^d α_k(φ(i)) = α_k(i) b^{σ_k c r_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CarrySeq {
    pub entries: Vec<BigInt>,
    pub signs: Vec<i8>,
}

impl CarrySeq {
    pub fn new() -> Self {
        CarrySeq {
            entries: Vec::new(),
            signs: Vec::new(),
        }
    }
}

impl Default for CarrySeq {
    fn default() -> Self {
        Self::new()
    }
}

pub fn alpha(params: BSParams, letters: &[u32]) -> PathL {
    PathL::from_letters(params, letters).expect("letters below d form a monoid element")
}

/// `σ_k`: `+1` in the positive cases, `(-1)^{k+1}` in the negative case.
pub fn carry_sign(params: BSParams, k: usize) -> i8 {
    if params.is_negative() && k.is_multiple_of(2) {
        -1
    } else {
        1
    }
}

/// `φ` and `r` by normal-form arithmetic: build `b^d α_k(j)` one block at a
/// time and choose each `j_μ` so that the emitted letter equals `i_μ`.
pub fn phi(i: &PrefixSeq) -> (PrefixSeq, CarrySeq) {
    let p = i.params();
    let c = BigInt::from(p.c());
    let mut raw = RawForm::new(p);
    raw.push_b_small(p.d() as i64);
    let mut out = Vec::with_capacity(i.len());
    let mut carries = CarrySeq::new();
    for (mu, &target) in i.entries.iter().enumerate() {
        let next = (0..p.d())
            .find_map(|j| {
                let mut t = raw.clone();
                t.push_b_small(j as i64);
                t.push_a();
                (t.letters[mu] == target).then_some((j, t))
            })
            .expect("some block reproduces each letter");
        out.push(next.0);
        raw = next.1;
        let sign = carry_sign(p, mu);
        let (r, rem) = (&raw.tail * sign as i64).div_rem(&c);
        debug_assert!(rem.is_zero());
        carries.entries.push(r);
        carries.signs.push(sign);
    }
    (
        PrefixSeq {
            params: p,
            entries: out,
        },
        carries,
    )
}

/// `φ` and `r` by the recursions for each case.
pub fn phi_closed_form(i: &PrefixSeq) -> (PrefixSeq, CarrySeq) {
    let p = i.params();
    let (c, d) = (BigInt::from(p.c()), BigInt::from(p.d()));
    let e = &i.entries;
    let mut phi = vec![e[0]];
    let mut r = vec![BigInt::one()];
    match p.case() {
        Case::BS1 => {
            for k in 1..e.len() {
                let ik = BigInt::from(e[k]);
                let carry = &c * &r[k - 1];
                let f = (&ik - &carry).mod_floor(&d);
                r.push((&f - &ik + carry) / &d);
                phi.push(f.to_u32().expect("below d"));
            }
        }
        Case::BS2 => {
            let ell = (1..e.len()).find(|&m| e[m] >= p.c()).unwrap_or(usize::MAX);
            for (mu, &x) in e.iter().enumerate().skip(1) {
                let (f, rk) = match mu.cmp(&ell) {
                    std::cmp::Ordering::Less => (x + p.d() - p.c(), 1),
                    std::cmp::Ordering::Equal => (x - p.c(), 0),
                    std::cmp::Ordering::Greater => (x, 0),
                };
                phi.push(f);
                r.push(BigInt::from(rk));
            }
        }
        Case::BS3 => {
            for k in 1..e.len() {
                let ik = BigInt::from(e[k]);
                let carry = &c * &r[k - 1];
                let rk = if k % 2 == 1 {
                    (&ik + &carry).div_floor(&d)
                } else {
                    (&carry - &ik).div_ceil(&d)
                };
                // φ_k = i_k + (-1)^{k+1} (c r_{k-1} - d r_k)
                let delta = carry - &d * &rk;
                let f = if k % 2 == 1 { &ik + delta } else { &ik - delta };
                phi.push(f.to_u32().expect("in [0,d)"));
                r.push(rk);
            }
        }
    }
    let signs = (0..e.len()).map(|k| carry_sign(p, k)).collect();
    (
        PrefixSeq {
            params: p,
            entries: phi,
        },
        CarrySeq { entries: r, signs },
    )
}

/// Letters of the form (L) of `b^n α_k(i)`.
pub fn b_action(i: &PrefixSeq, n: &BigInt) -> PrefixSeq {
    let mut raw = RawForm::new(i.params());
    raw.push_b(n);
    raw.push_blocks(&i.entries);
    PrefixSeq {
        params: i.params,
        entries: raw.letters,
    }
}

/// The unique `i` whose `φ`-image is `j`, read off `b^d α_k(j)`.
pub fn phi_inverse(j: &PrefixSeq) -> PrefixSeq {
    b_action(j, &BigInt::from(j.params().d()))
}

/// `ψ` and the carries `s` by the recursions: `ψ_k - d s_k = j_k - c s_{k-1}`
/// in the positive cases, with alternating orientation in the negative case.
pub fn phi_inverse_closed_form(j: &PrefixSeq) -> (PrefixSeq, Vec<BigInt>) {
    let p = j.params();
    let (c, d) = (BigInt::from(p.c()), BigInt::from(p.d()));
    let e = &j.entries;
    let mut psi = vec![e[0]];
    let mut s = vec![BigInt::one()];
    for k in 1..e.len() {
        let jk = BigInt::from(e[k]);
        let carry = &c * &s[k - 1];
        let (f, sk) = if !p.is_negative() {
            let (q, f) = (&jk + carry).div_mod_floor(&d);
            (f, q)
        } else if k % 2 == 0 {
            let sk = (&jk + &carry).div_floor(&d);
            let f = &jk + carry - &d * &sk;
            (f, sk)
        } else {
            let sk = (&carry - &jk).div_ceil(&d);
            let f = &jk - carry + &d * &sk;
            (f, sk)
        };
        psi.push(f.to_u32().expect("in [0,d)"));
        s.push(sk);
    }
    (
        PrefixSeq {
            params: p,
            entries: psi,
        },
        s,
    )
}

/// For `d > c` and `i ∈ [0,c)^{k+1}`: the `ψ(i)` and `r(i) ≥ 1` with
/// `b^{d r(i)} α(ψ(i)) = α(i) b^c`, read off the form (R) of `α(i) b^c`.
pub fn psi_finite_bs2(params: BSParams, i: &[u32]) -> Result<(Vec<u32>, BigInt)> {
    if params.case() != Case::BS2 {
        return Err(Error::WrongCase {
            op: "psiFiniteBS2",
            case: params.case(),
        });
    }
    if i.is_empty() {
        return Err(Error::InvalidSequence("tuple must be nonempty".into()));
    }
    if let Some(&x) = i.iter().find(|&&x| x >= params.c()) {
        return Err(Error::InvalidSequence(format!(
            "entry {x} outside [0,{})",
            params.c()
        )));
    }
    let mut raw = RawForm::new(params);
    raw.push_blocks(i);
    raw.push_b_small(params.c() as i64);
    let rho = to_form_r(&raw.into_path().expect("positive word"));
    let js = rho.letters();
    debug_assert_eq!(js.last(), Some(&0));
    let mut psi = vec![i[0]];
    psi.extend_from_slice(&js[..js.len() - 1]);
    let r = (rho.lead() - i[0]) / params.d();
    debug_assert!(r.is_positive());
    Ok((psi, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(p: BSParams, v: &[u32]) -> PrefixSeq {
        PrefixSeq::new(p, v.to_vec()).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn phi_examples() {
        let p = BSParams::positive(3, 2).unwrap();
        let (f, r) = phi(&seq(p, &[1, 1]));
        assert_eq!(f.entries(), &[1, 0]);
        assert_eq!(r.entries, big(&[1, 1]));

        let p = BSParams::positive(1, 2).unwrap();
        let (f, r) = phi(&seq(p, &[1, 0, 1]));
        assert_eq!(f.entries(), &[1, 1, 0]);
        assert_eq!(r.entries, big(&[1, 1, 0]));

        let p = BSParams::negative(2, 2).unwrap();
        let (f, r) = phi(&seq(p, &[1, 1]));
        assert_eq!(f.entries(), &[1, 1]);
        assert_eq!(r.entries, big(&[1, 1]));
        assert_eq!(r.signs, vec![-1, 1]);
    }

    #[test]
    fn closed_form_matches_on_examples() {
        for (p, v) in [
            (BSParams::positive(3, 2).unwrap(), vec![1, 1, 0, 1]),
            (BSParams::positive(1, 2).unwrap(), vec![0, 0, 0, 0]),
            (BSParams::positive(2, 3).unwrap(), vec![2, 1, 2, 0]),
            (BSParams::negative(2, 2).unwrap(), vec![1, 1, 0, 1, 1]),
            (BSParams::negative(1, 3).unwrap(), vec![2, 0, 1, 2, 2]),
        ] {
            let i = seq(p, &v);
            assert_eq!(phi(&i), phi_closed_form(&i), "{p} {v:?}");
            let (f, _) = phi(&i);
            assert_eq!(phi_inverse(&f), i);
            assert_eq!(phi_inverse_closed_form(&f).0, i);
        }
        // all-zero prefix with c = 1: φ_μ = d - c for μ ≥ 1, carries all 1
        let p = BSParams::positive(1, 2).unwrap();
        let (f, r) = phi_closed_form(&seq(p, &[0, 0, 0]));
        assert_eq!(f.entries(), &[0, 1, 1]);
        assert_eq!(r.entries, big(&[1, 1, 1]));
    }

    #[test]
    fn adding_machine() {
        let p = BSParams::positive(1, 2).unwrap();
        let i = seq(p, &[1, 1, 0]);
        assert_eq!(b_action(&i, &BigInt::from(1)).entries(), &[0, 0, 1]);
        assert_eq!(b_action(&i, &BigInt::zero()), i);
    }

    #[test]
    fn psi_finite_examples() {
        let p = BSParams::positive(1, 2).unwrap();
        assert_eq!(psi_finite_bs2(p, &[0]).unwrap(), (vec![0], BigInt::one()));
        let q = BSParams::positive(3, 2).unwrap();
        assert!(matches!(
            psi_finite_bs2(q, &[0]),
            Err(Error::WrongCase { .. })
        ));
        let p = BSParams::positive(2, 3).unwrap();
        assert!(psi_finite_bs2(p, &[2]).is_err());
    }

    #[test]
    fn prefix_parse() {
        let p = BSParams::positive(3, 2).unwrap();
        assert_eq!(PrefixSeq::parse(p, "1,0,1").unwrap().entries(), &[1, 0, 1]);
        assert!(PrefixSeq::parse(p, "1,2").is_err());
        assert!(PrefixSeq::parse(p, "").is_err());
        assert_eq!(seq(p, &[1, 0]).to_string(), "1,0");
    }
}
