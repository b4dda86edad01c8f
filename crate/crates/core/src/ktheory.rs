//! Cylinder functions on `(Z/e)^k`, the connecting maps `η_0`, `η_1`,
//! integration, localized cokernels and the K-group tables.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::odometer::{b_action, PrefixSeq};
use crate::params::{BSParams, Case};

/// `num / base^exp` in `Z[1/base]`, kept with `exp = 0` or `base ∤ num`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalizedInt {
    num: BigInt,
    base: u32,
    exp: u32,
}

impl LocalizedInt {
    pub fn new(num: impl Into<BigInt>, base: u32, exp: u32) -> Self {
        assert!(base >= 1, "base must be positive");
        let mut num = num.into();
        let mut exp = if base == 1 || num.is_zero() { 0 } else { exp };
        let b = BigInt::from(base);
        while exp > 0 && num.is_multiple_of(&b) {
            num /= &b;
            exp -= 1;
        }
        LocalizedInt { num, base, exp }
    }

    pub fn integer(n: impl Into<BigInt>, base: u32) -> Self {
        Self::new(n, base, 0)
    }

    pub fn zero(base: u32) -> Self {
        Self::integer(0, base)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The same value in `Z[1/target]`; needs `base | target` (or `base = 1`).
    pub fn rebase(&self, target: u32) -> Self {
        if self.base == target {
            return self.clone();
        }
        assert!(
            self.base == 1 || target.is_multiple_of(self.base),
            "cannot move Z[1/{}] into Z[1/{}]",
            self.base,
            target
        );
        if self.base == 1 {
            return Self::integer(self.num.clone(), target);
        }
        let factor = BigInt::from(target / self.base).pow(self.exp);
        Self::new(&self.num * factor, target, self.exp)
    }

    fn align(&self, other: &Self) -> (BigInt, BigInt, u32) {
        assert_eq!(self.base, other.base, "mixed bases");
        let exp = self.exp.max(other.exp);
        let b = BigInt::from(self.base);
        let x = &self.num * b.clone().pow(exp - self.exp);
        let y = &other.num * b.pow(exp - other.exp);
        (x, y, exp)
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        Self::new(&self.num * k.into(), self.base, self.exp)
    }

    /// Division by `base^k`.
    pub fn shift_down(&self, k: u32) -> Self {
        Self::new(self.num.clone(), self.base, self.exp + k)
    }
}

impl Add for &LocalizedInt {
    type Output = LocalizedInt;

    fn add(self, rhs: &LocalizedInt) -> LocalizedInt {
        let (x, y, exp) = self.align(rhs);
        LocalizedInt::new(x + y, self.base, exp)
    }
}

impl Mul for &LocalizedInt {
    type Output = LocalizedInt;

    fn mul(self, rhs: &LocalizedInt) -> LocalizedInt {
        assert_eq!(self.base, rhs.base, "mixed bases");
        LocalizedInt::new(&self.num * &rhs.num, self.base, self.exp + rhs.exp)
    }
}

impl Neg for &LocalizedInt {
    type Output = LocalizedInt;

    fn neg(self) -> LocalizedInt {
        LocalizedInt::new(-&self.num, self.base, self.exp)
    }
}

impl fmt::Display for LocalizedInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}^{}", self.num, self.base, self.exp)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Codomain {
    /// Integer valued.
    Int,
    /// Valued in `Z[1/d']`.
    Loc(u32),
}

impl Codomain {
    fn base(self) -> u32 {
        match self {
            Codomain::Int => 1,
            Codomain::Loc(b) => b,
        }
    }
}

/// A function on `(Z/e)^level`, indexed with `μ_1` most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderFunction {
    level: u32,
    modulus: u32,
    codomain: Codomain,
    values: Vec<LocalizedInt>,
}

impl CylinderFunction {
    pub fn new(level: u32, modulus: u32, codomain: Codomain, values: Vec<LocalizedInt>) -> Result<Self> {
        let len = (modulus as usize).pow(level);
        if values.len() != len {
            return Err(Error::InvalidSequence(format!(
                "expected {len} values, got {}",
                values.len()
            )));
        }
        let base = codomain.base();
        let values = values.into_iter().map(|v| v.rebase(base)).collect();
        Ok(CylinderFunction {
            level,
            modulus,
            codomain,
            values,
        })
    }

    /// The indicator of `Z(μ_1 + eZ, ..., μ_k + eZ)`.
    pub fn indicator(modulus: u32, codomain: Codomain, mu: &[u32]) -> Self {
        let base = codomain.base();
        let len = (modulus as usize).pow(mu.len() as u32);
        let idx = mu.iter().fold(0usize, |acc, &m| acc * modulus as usize + m as usize);
        let values = (0..len)
            .map(|j| LocalizedInt::integer(i32::from(j == idx), base))
            .collect();
        CylinderFunction {
            level: mu.len() as u32,
            modulus,
            codomain,
            values,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    pub fn values(&self) -> &[LocalizedInt] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(LocalizedInt::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.level, self.modulus), (other.level, other.modulus));
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        CylinderFunction {
            values,
            ..self.clone()
        }
    }

    /// The same function viewed one level deeper (constant in the new last coordinate).
    pub fn refine(&self) -> Self {
        let e = self.modulus as usize;
        let values = self
            .values
            .iter()
            .flat_map(|v| std::iter::repeat_n(v.clone(), e))
            .collect();
        CylinderFunction {
            level: self.level + 1,
            values,
            ..self.clone()
        }
    }

    /// Sums over the first coordinate and scales by `factor`.
    fn drop_first(&self, factor: i64) -> Result<Self> {
        if self.level == 0 {
            return Err(Error::LevelZero);
        }
        let e = self.modulus as usize;
        let stride = self.values.len() / e;
        let base = self.codomain.base();
        let values = (0..stride)
            .map(|r| {
                let s = (0..e).fold(LocalizedInt::zero(base), |acc, m| &acc + &self.values[m * stride + r]);
                s.scale(factor)
            })
            .collect();
        Ok(CylinderFunction {
            level: self.level - 1,
            values,
            ..self.clone()
        })
    }
}

/// `χ_{Z(μ_1, ..., μ_k)} ↦ d' χ_{Z(μ_2, ..., μ_k)}`.
pub fn eta0(p: BSParams, f: &CylinderFunction) -> Result<CylinderFunction> {
    f.drop_first(p.d_prime() as i64)
}

/// `χ_{Z(μ_1, ..., μ_k)} ↦ ±c' χ_{Z(μ_2, ..., μ_k)}`, minus for the negative relation.
pub fn eta1(p: BSParams, f: &CylinderFunction) -> Result<CylinderFunction> {
    f.drop_first(p.c_prime() as i64 * p.sign())
}

/// `Σ f(μ) e^{-k}` as an element of `Z[1/d]`.
pub fn integrate(p: BSParams, f: &CylinderFunction) -> LocalizedInt {
    let d = p.d();
    let base = f.codomain.base();
    let total = f
        .values
        .iter()
        .fold(LocalizedInt::zero(base), |acc, v| &acc + v)
        .rebase(d);
    // e^{-k} = d'^k / d^k
    total.scale(BigInt::from(p.d_prime()).pow(f.level)).shift_down(f.level)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connecting {
    Eta0,
    Eta1,
}

/// `∫f = 0` exactly when `η^k f = 0`, `k` the level of `f`.
pub fn kernel_check(p: BSParams, f: &CylinderFunction, which: Connecting) -> Result<bool> {
    let mut g = f.clone();
    for _ in 0..f.level {
        g = match which {
            Connecting::Eta0 => eta0(p, &g)?,
            Connecting::Eta1 => eta1(p, &g)?,
        };
    }
    Ok(integrate(p, f).is_zero() == g.is_zero())
}

/// `U(μ_1, ..., μ_k) = { i : i_ℓ ≡ μ_ℓ mod e }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSet {
    modulus: u32,
    mu: Vec<u32>,
}

pub fn invariant_set_indicator(p: BSParams, mu: &[u32]) -> InvariantSet {
    InvariantSet {
        modulus: p.e(),
        mu: mu.to_vec(),
    }
}

impl InvariantSet {
    pub fn contains(&self, x: &[u32]) -> bool {
        self.mu
            .iter()
            .enumerate()
            .all(|(l, &m)| x.get(l + 1).is_none_or(|&v| v % self.modulus == m % self.modulus))
    }

    /// All points of `[0,d)^depth` in the set.
    pub fn points(&self, d: u32, depth: usize) -> BTreeSet<Vec<u32>> {
        all_points(d, depth).into_iter().filter(|x| self.contains(x)).collect()
    }
}

fn all_points(d: u32, depth: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..depth {
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

/// Whether the `b`-orbit of the truncated cylinder `Z(j_0, μ_1, ..., μ_k)` is
/// the truncated `U(μ_1, ..., μ_k)`.
pub fn orbit_cover_check(p: BSParams, mu: &[u32], j0: u32, depth: usize) -> Result<bool> {
    if depth < mu.len() + 1 {
        return Err(Error::DepthExceeded {
            needed: mu.len() + 1,
            available: depth,
        });
    }
    if j0 >= p.d() || mu.iter().any(|&m| m >= p.e()) {
        return Err(Error::InvalidSequence("cylinder entries out of range".into()));
    }
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut stack: Vec<Vec<u32>> = all_points(p.d(), depth - mu.len() - 1)
        .into_iter()
        .map(|rest| {
            let mut x = vec![j0];
            x.extend_from_slice(mu);
            x.extend(rest);
            x
        })
        .collect();
    let one = BigInt::one();
    while let Some(x) = stack.pop() {
        if !seen.insert(x.clone()) {
            continue;
        }
        let s = PrefixSeq::new(p, x)?;
        for n in [&one, &-&one] {
            let y = b_action(&s, n).entries().to_vec();
            if !seen.contains(&y) {
                stack.push(y);
            }
        }
    }
    Ok(seen == invariant_set_indicator(p, mu).points(p.d(), depth))
}

/// A finitely generated abelian group `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_m`, `t_i | t_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianGroupPresentation {
    pub rank: u32,
    pub torsion: Vec<u64>,
}

impl AbelianGroupPresentation {
    pub fn new(rank: u32, torsion: Vec<u64>) -> Self {
        AbelianGroupPresentation {
            rank,
            torsion: invariant_factors(torsion),
        }
    }

    pub fn trivial() -> Self {
        Self::new(0, Vec::new())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut t = self.torsion.clone();
        t.extend_from_slice(&other.torsion);
        Self::new(self.rank + other.rank, t)
    }
}

impl fmt::Display for AbelianGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        parts.extend((0..self.rank).map(|_| "Z".to_string()));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Diagonal Smith form: replace pairs by `(gcd, lcm)` and drop units.
fn invariant_factors(mut t: Vec<u64>) -> Vec<u64> {
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            let (g, l) = (t[i].gcd(&t[j]), t[i].lcm(&t[j]));
            t[i] = g;
            t[j] = l;
        }
    }
    t.retain(|&x| x != 1);
    t
}

/// `Z[1/base] / m Z[1/base]`.
pub fn localized_cokernel(m: i64, base: u64) -> AbelianGroupPresentation {
    if m == 0 {
        return AbelianGroupPresentation::new(1, Vec::new());
    }
    let mut m0 = m.unsigned_abs();
    loop {
        let g = m0.gcd(&base);
        if g == 1 {
            break;
        }
        m0 /= g;
    }
    AbelianGroupPresentation::new(0, vec![m0])
}

/// The kernel of multiplication by `m` on `Z[1/base]`.
pub fn localized_kernel(m: i64) -> AbelianGroupPresentation {
    if m == 0 {
        AbelianGroupPresentation::new(1, Vec::new())
    } else {
        AbelianGroupPresentation::trivial()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KGroups {
    #[serde(rename = "K0")]
    pub k0: AbelianGroupPresentation,
    #[serde(rename = "K1")]
    pub k1: AbelianGroupPresentation,
    pub identity_class: String,
    /// Which of the four parameter regimes applies (1 to 4).
    pub regime: u8,
}

/// `K_0 = coker(d-1) ⊕ ker(±c-1)` and `K_1 = coker(±c-1) ⊕ ker(d-1)`, with the
/// first map on `Z[1/d]` and the second on `Z[1/c]`.
pub fn k_groups(p: BSParams) -> KGroups {
    let (c, d) = (p.c() as i64, p.d() as i64);
    let mc = p.sign() * c - 1;
    let md = d - 1;
    let (bd, bc) = (d as u64, c as u64);
    let k0 = localized_cokernel(md, bd).direct_sum(&localized_kernel(mc));
    let k1 = localized_cokernel(mc, bc).direct_sum(&localized_kernel(md));
    let regime = match (c > 1 || p.is_negative(), d > 1) {
        (true, true) => 1,
        (true, false) => 2,
        (false, _) if p.case() == Case::BS2 => 3,
        _ => 4,
    };
    let identity_class = if regime <= 2 { "1" } else { "(1,0)" }.to_string();
    KGroups {
        k0,
        k1,
        identity_class,
        regime,
    }
}

/// A generator of `Z[1/n]` at stage `k`, named by the word whose class it is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub stage: u32,
    pub word: String,
    pub class: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointKGroups {
    #[serde(rename = "K0")]
    pub k0: String,
    #[serde(rename = "K1")]
    pub k1: String,
    pub k0_base: u32,
    pub k1_base: u32,
}

fn ring(base: u32) -> String {
    if base == 1 {
        "Z".into()
    } else {
        format!("Z[1/{base}]")
    }
}

/// `K_0` and `K_1` of the gauge-fixed-point algebra: `Z[1/d]` and `Z[1/c]`.
pub fn fixed_point_k_groups(p: BSParams) -> FixedPointKGroups {
    FixedPointKGroups {
        k0: ring(p.d()),
        k1: ring(p.c()),
        k0_base: p.d(),
        k1_base: p.c(),
    }
}

fn block_word(blocks: u32) -> String {
    (0..blocks)
        .map(|m| format!("b^{{j_{m}}} a"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// The stage-`k` generator of `K_0`: `[S_w S_w^*] = d^{-k}` for `w = b^{j_0} a ... b^{j_k} a`.
pub fn k0_generator(p: BSParams, k: u32) -> Generator {
    let w = block_word(k + 1);
    Generator {
        stage: k,
        class: format!("[S_{{{w}}} S_{{{w}}}^*]"),
        word: w,
        value: LocalizedInt::new(1, p.d(), k).to_string(),
    }
}

/// The stage-`k` generator of `K_1`: `[S_w S_b S_w^*] = (±c)^{-k}` for `w = b^{i_1} a ... b^{i_k} a`.
pub fn k1_generator(p: BSParams, k: u32) -> Generator {
    let w = (1..=k)
        .map(|m| format!("b^{{i_{m}}} a"))
        .collect::<Vec<_>>()
        .join(" ");
    let sign = if p.is_negative() && k % 2 == 1 { -1 } else { 1 };
    Generator {
        stage: k,
        class: if k == 0 {
            "[S_b]".into()
        } else {
            format!("[S_{{{w}}} S_b S_{{{w}}}^*]")
        },
        word: w,
        value: LocalizedInt::new(sign, p.c(), k).to_string(),
    }
}
