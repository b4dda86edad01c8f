//! Seeded self-checks over a grid of parameters, one report line per check.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hereditary::{
    chain_bs2, max_tail, member, periodicity_check, separation_witness, sigma_shift_bs1,
    validate_seq_bs1, Descriptor, TailBound,
};
use crate::ktheory::{
    eta0, eta1, integrate, k_groups, kernel_check, orbit_cover_check, Codomain, Connecting,
    CylinderFunction, LocalizedInt,
};
use crate::lattice::{
    is_initial_segment, join, join_oracle, join_oracle_depth, lfe_witness, meets,
    quasi_lattice_generator, GroupElementPair, JoinResult,
};
use crate::odometer::{
    b_action, carry_sign, phi, phi_closed_form, phi_inverse, phi_inverse_closed_form, CarrySeq,
    PrefixSeq,
};
use crate::params::{BSParams, Case};
use crate::seq::EventuallyPeriodicSeq;
use crate::words::{compose, from_form_r, normalize, to_form_r, PathL, RawForm};

pub type PhiImpl = fn(&PrefixSeq) -> (PrefixSeq, CarrySeq);

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random samples per sampled check.
    pub samples: usize,
    /// The recursion-based `φ` under test.
    pub phi_closed: PhiImpl,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            samples: 200,
            phi_closed: phi_closed_form,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub params: String,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            let tag = if l.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} [{}] {}: {}", l.params, l.name, l.detail)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.lines.len(), failed)
    }
}

struct Ctx<'a> {
    p: BSParams,
    rng: ChaCha8Rng,
    opts: &'a VerifyOptions,
    out: &'a mut Report,
}

impl Ctx<'_> {
    fn record(&mut self, name: &'static str, result: std::result::Result<usize, String>) {
        let (passed, detail) = match result {
            Ok(n) => (true, format!("{n} cases")),
            Err(e) => (false, e),
        };
        self.out.lines.push(CheckLine {
            params: self.p.to_string(),
            name,
            passed,
            detail,
        });
    }

    fn letters(&mut self, max_len: usize) -> Vec<u32> {
        let len = self.rng.gen_range(0..=max_len);
        (0..len).map(|_| self.rng.gen_range(0..self.p.d())).collect()
    }

    fn path(&mut self, max_len: usize, max_tail: i64) -> PathL {
        let letters = self.letters(max_len);
        let lo = if self.p.is_negative() && !letters.is_empty() {
            -max_tail
        } else {
            0
        };
        let t = self.rng.gen_range(lo..=max_tail);
        PathL::new(self.p, letters, t).expect("valid by construction")
    }

    fn prefix(&mut self, len: usize) -> PrefixSeq {
        let v = (0..len).map(|_| self.rng.gen_range(0..self.p.d())).collect();
        PrefixSeq::new(self.p, v).expect("valid by construction")
    }
}

/// Runs every check on every grid point.
pub fn verify_suite(grid: &[BSParams], opts: &VerifyOptions) -> Report {
    let mut report = Report::default();
    for (k, &p) in grid.iter().enumerate() {
        let mut ctx = Ctx {
            p,
            rng: ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k as u64)),
            opts,
            out: &mut report,
        };
        words_checks(&mut ctx);
        lattice_checks(&mut ctx);
        odometer_checks(&mut ctx);
        hereditary_checks(&mut ctx);
        ktheory_checks(&mut ctx);
    }
    report
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn words_checks(ctx: &mut Ctx<'_>) {
    let n = ctx.opts.samples;
    let r = (0..n)
        .try_for_each(|_| {
            let a = ctx.path(5, 12);
            let back = normalize(&a.word(), ctx.p).map_err(|e| e.to_string())?;
            ensure(back == a, || format!("{a} renormalized to {back}"))?;
            let r = to_form_r(&a);
            ensure(from_form_r(&r) == a, || format!("form (R) of {a} did not return"))
        })
        .map(|_| n);
    ctx.record("normal forms round trip", r);

    let r = (0..n)
        .try_for_each(|_| {
            let (a, b, c) = (ctx.path(3, 6), ctx.path(3, 6), ctx.path(3, 6));
            let ab = compose(&a, &b).map_err(|e| e.to_string())?;
            let bc = compose(&b, &c).map_err(|e| e.to_string())?;
            let l = compose(&ab, &c).map_err(|e| e.to_string())?;
            let rr = compose(&a, &bc).map_err(|e| e.to_string())?;
            ensure(l == rr, || format!("({a})({b})({c}) not associative"))?;
            ensure(ab.height() == a.height() + b.height(), || {
                format!("height of {a} * {b}")
            })?;
            let ac = compose(&a, &c).map_err(|e| e.to_string())?;
            ensure((ab == ac) == (b == c), || format!("left cancellation at {a}"))
        })
        .map(|_| n);
    ctx.record("composition is associative, cancellative and graded", r);
}

fn lattice_checks(ctx: &mut Ctx<'_>) {
    let p = ctx.p;
    let n = ctx.opts.samples / 4;
    let r = (0..n)
        .try_for_each(|_| {
            let (a, b) = (ctx.path(2, 4), ctx.path(2, 4));
            let j = join(&a, &b).map_err(|e| e.to_string())?;
            let oracle = join_oracle(&a, &b, join_oracle_depth(&a, &b)).map_err(|e| e.to_string())?;
            match &j {
                JoinResult::Disjoint => {
                    ensure(oracle.is_empty(), || format!("{a} v {b}: oracle found {oracle:?}"))
                }
                JoinResult::Join(g) => {
                    ensure(oracle.as_slice() == [g.clone()], || {
                        format!("{a} v {b} = {g}, oracle {oracle:?}")
                    })?;
                    ensure(
                        is_initial_segment(&a, g).unwrap() && is_initial_segment(&b, g).unwrap(),
                        || format!("{g} is not an upper bound of {a}, {b}"),
                    )
                }
            }
        })
        .map(|_| n);
    ctx.record("join equals the searched minimal common extension", r);

    let n = ctx.opts.samples;
    let r = (0..n)
        .try_for_each(|_| {
            let t = GroupElementPair::new(ctx.path(3, 5), ctx.path(3, 5)).unwrap();
            let g = ctx.path(3, 8);
            // t (β γ) = α γ lies in t Λ ∩ Λ
            let tg = compose(&t.alpha, &g).map_err(|e| e.to_string())?;
            if p.case() == Case::BS3 {
                let f = lfe_witness(&t).map_err(|e| e.to_string())?;
                ensure(f.iter().any(|x| meets(x, &tg).unwrap()), || {
                    format!("{tg} meets nothing in {f:?}")
                })
            } else {
                let d = quasi_lattice_generator(&t)
                    .map_err(|e| e.to_string())?
                    .ok_or("no generator")?;
                ensure(is_initial_segment(&d, &tg).unwrap(), || {
                    format!("{d} is not below {tg}")
                })
            }
        })
        .map(|_| n);
    ctx.record("upper bounds of t = αβ^-1 extend the generator", r);
}

fn identity_holds(i: &PrefixSeq, f: &PrefixSeq, r: &CarrySeq) -> bool {
    let p = i.params();
    let k = i.len() - 1;
    if f.len() != i.len() || r.entries.len() != i.len() {
        return false;
    }
    let mut lhs = RawForm::new(p);
    lhs.push_b_small(p.d() as i64);
    lhs.push_blocks(f.entries());
    let mut rhs = RawForm::new(p);
    rhs.push_blocks(i.entries());
    rhs.push_b(&(&r.entries[k] * (carry_sign(p, k) as i64 * p.c() as i64)));
    lhs == rhs
}

fn odometer_checks(ctx: &mut Ctx<'_>) {
    let p = ctx.p;
    let n = ctx.opts.samples;
    let closed = ctx.opts.phi_closed;
    let r = (0..n)
        .try_for_each(|_| {
            let len = ctx.rng.gen_range(1..=6);
            let i = ctx.prefix(len);
            let (f, r) = phi(&i);
            ensure(identity_holds(&i, &f, &r), || format!("identity fails at {i}"))?;
            let (g, s) = closed(&i);
            ensure(identity_holds(&i, &g, &s), || {
                format!("recursion breaks the identity at {i}")
            })?;
            ensure((f.clone(), r.clone()) == (g, s), || format!("recursion differs at {i}"))?;
            ensure(phi_inverse(&f) == i, || format!("inverse fails at {i}"))?;
            ensure(phi_inverse_closed_form(&f).0 == i, || {
                format!("inverse recursion fails at {i}")
            })?;
            ensure(b_action(&i, &BigInt::from(p.d())) == phi_inverse(&i), || {
                format!("b^d action differs from the inverse at {i}")
            })?;
            if p.case() == Case::BS2 {
                let e = i.entries();
                let ell = (1..e.len()).find(|&m| e[m] >= p.c()).unwrap_or(usize::MAX);
                let ok = r.entries.iter().enumerate().all(|(k, x)| {
                    *x == BigInt::from(u8::from(k < ell))
                });
                ensure(ok, || format!("carries {:?} at {i}", r.entries))?;
            }
            Ok(())
        })
        .map(|_| n);
    ctx.record("phi satisfies its defining identity and inverts", r);

    let len = if p.d() <= 2 { 6 } else { 3 };
    let total = (p.d() as usize).pow(len as u32);
    let mut seen = std::collections::HashSet::new();
    for code in 0..total {
        let mut v = Vec::with_capacity(len);
        let mut x = code;
        for _ in 0..len {
            v.push((x % p.d() as usize) as u32);
            x /= p.d() as usize;
        }
        let i = PrefixSeq::new(p, v).unwrap();
        seen.insert(phi(&i).0.entries().to_vec());
    }
    let r = ensure(seen.len() == total, || {
        format!("image has {} of {total} points", seen.len())
    })
    .map(|_| total);
    ctx.record("truncated phi is a bijection", r);
}

fn hereditary_checks(ctx: &mut Ctx<'_>) {
    let p = ctx.p;
    match p.case() {
        Case::BS1 => {
            let n = ctx.opts.samples / 2;
            let r = (0..n)
                .try_for_each(|_| {
                    let len = ctx.rng.gen_range(1..=4);
                    let i: Vec<u32> = (0..len).map(|_| ctx.rng.gen_range(0..p.d())).collect();
                    let nseq = random_carries(ctx, &i);
                    ensure(validate_seq_bs1(p, &i, &nseq).unwrap(), || {
                        format!("generated n {nseq:?} invalid for {i:?}")
                    })?;
                    let d = Descriptor::Cn1 {
                        i: i.clone(),
                        n: nseq.clone(),
                    };
                    for h in 0..len {
                        let top = match max_tail(&d, p, h).map_err(|e| e.to_string())? {
                            TailBound::AtMost(t) => t,
                            other => return Err(format!("max tail {other}")),
                        };
                        let at = PathL::new(p, i[..h].to_vec(), top.clone()).unwrap();
                        let over = PathL::new(p, i[..h].to_vec(), &top + 1).unwrap();
                        ensure(member(&d, &at).unwrap() && !member(&d, &over).unwrap(), || {
                            format!("max tail {top} at height {h} for {i:?}, {nseq:?}")
                        })?;
                        let excl = PathL::new(p, i[..h].to_vec(), (&nseq[h] + 1) * p.d()).unwrap();
                        ensure(!member(&d, &excl).unwrap(), || format!("exclusion at {h}"))?;
                    }
                    // transport along b^d
                    let (f, _) = phi(&PrefixSeq::new(p, i.clone()).unwrap());
                    let base = random_carries(ctx, f.entries());
                    let shifted = sigma_shift_bs1(p, &i, &base).map_err(|e| e.to_string())?;
                    let src = Descriptor::Cn1 {
                        i: f.entries().to_vec(),
                        n: base,
                    };
                    let dst = Descriptor::Cn1 {
                        i: i.clone(),
                        n: shifted,
                    };
                    for _ in 0..5 {
                        let h = ctx.rng.gen_range(0..len);
                        let mut letters = f.entries()[..h].to_vec();
                        if ctx.rng.gen_bool(0.2) && h > 0 {
                            letters[h - 1] = ctx.rng.gen_range(0..p.d());
                        }
                        let t = ctx.rng.gen_range(0..=8 * p.c() as i64);
                        let beta = PathL::new(p, letters, t).unwrap();
                        let mut moved = RawForm::new(p);
                        moved.push_b_small(p.d() as i64);
                        moved.push_path(&beta);
                        let moved = moved.into_path().unwrap();
                        ensure(
                            member(&dst, &moved).unwrap() == member(&src, &beta).unwrap(),
                            || format!("transport of {beta}"),
                        )?;
                    }
                    Ok(())
                })
                .map(|_| n);
            ctx.record("carry sequences bound tails and shift along b^d", r);
        }
        Case::BS2 => {
            let n = ctx.opts.samples / 4;
            let r = (0..n)
                .try_for_each(|_| {
                    let pre = ctx.letters(2);
                    let per_len = ctx.rng.gen_range(1..=2);
                    let period: Vec<u32> = (0..per_len).map(|_| ctx.rng.gen_range(0..p.c())).collect();
                    let i = EventuallyPeriodicSeq::new(pre, period).unwrap();
                    let (_, m) = chain_bs2(p, &i).unwrap();
                    let mut profiles: Vec<Vec<TailBound>> = Vec::new();
                    for k in 0..m + 3 {
                        let d = if k < m {
                            Descriptor::Cn2 { i: i.clone(), n: k }
                        } else {
                            Descriptor::CInf { i: i.clone() }
                        };
                        let prof = (0..4).map(|h| max_tail(&d, p, h).unwrap()).collect();
                        if !profiles.contains(&prof) {
                            profiles.push(prof);
                        }
                    }
                    ensure(profiles.len() as u64 == m + 1, || {
                        format!("{} distinct sets for {i}, expected {}", profiles.len(), m + 1)
                    })
                })
                .map(|_| n);
            ctx.record("the d > c chain has m + 1 members", r);
        }
        Case::BS3 => {}
    }

    let n = ctx.opts.samples;
    if !p.c().is_multiple_of(p.d()) {
        let r = (0..n)
            .try_for_each(|_| {
                let (a, b) = (ctx.path(3, 6), ctx.path(3, 6));
                if a == b {
                    return Ok(());
                }
                let g = separation_witness(&a, &b).map_err(|e| e.to_string())?;
                let (ag, bg) = (compose(&a, &g).unwrap(), compose(&b, &g).unwrap());
                ensure(!meets(&ag, &bg).unwrap(), || format!("{g} does not separate {a}, {b}"))
            })
            .map(|_| n);
        ctx.record("separation witnesses separate", r);
    } else {
        let r = (0..n)
            .try_for_each(|_| {
                let g = ctx.path(6, 6);
                ensure(periodicity_check(p, &g).unwrap(), || format!("letters of b^d {g}"))
            })
            .map(|_| n);
        ctx.record("b^d preserves letters", r);
    }
}

fn random_carries(ctx: &mut Ctx<'_>, i: &[u32]) -> Vec<BigInt> {
    let p = ctx.p;
    let (c, d) = (p.c() as i64, p.d() as i64);
    let mut n = vec![BigInt::from(ctx.rng.gen_range(0..4))];
    for &x in &i[1..] {
        // d n_ℓ + i_ℓ ∈ [c n_{ℓ-1}, c n_{ℓ-1} + c)
        let lo = &n[n.len() - 1] * c - x as i64;
        let lo_n = num_integer::Integer::div_ceil(&lo, &BigInt::from(d));
        let hi = &n[n.len() - 1] * c + c - 1 - x as i64;
        let hi_n = num_integer::Integer::div_floor(&hi, &BigInt::from(d));
        let span = (&hi_n - &lo_n).to_string().parse::<i64>().unwrap_or(0);
        n.push(lo_n + ctx.rng.gen_range(0..=span.max(0)));
    }
    n
}

fn random_function(ctx: &mut Ctx<'_>, level: u32, codomain: Codomain) -> CylinderFunction {
    let e = ctx.p.e();
    let base = match codomain {
        Codomain::Int => 1,
        Codomain::Loc(b) => b,
    };
    let len = (e as usize).pow(level);
    let values = (0..len)
        .map(|_| {
            let exp = if base > 1 { ctx.rng.gen_range(0..3) } else { 0 };
            LocalizedInt::new(ctx.rng.gen_range(-3..=3), base, exp)
        })
        .collect();
    CylinderFunction::new(level, e, codomain, values).unwrap()
}

fn ktheory_checks(ctx: &mut Ctx<'_>) {
    let p = ctx.p;
    let n = ctx.opts.samples;
    let loc = Codomain::Loc(p.d_prime());
    let r = (0..n)
        .try_for_each(|_| {
            let level = ctx.rng.gen_range(1..=3);
            let f = random_function(ctx, level, loc);
            let g = random_function(ctx, level, Codomain::Int);
            let i0 = integrate(p, &eta0(p, &f).unwrap());
            ensure(i0 == integrate(p, &f).scale(p.d()), || format!("eta0 at level {level}"))?;
            let i1 = integrate(p, &eta1(p, &g).unwrap());
            let want = integrate(p, &g).scale(p.c() as i64 * p.sign());
            ensure(i1 == want, || format!("eta1 at level {level}"))?;
            ensure(
                kernel_check(p, &f, Connecting::Eta0).unwrap()
                    && kernel_check(p, &g, Connecting::Eta1).unwrap(),
                || "kernel biconditional".into(),
            )
        })
        .map(|_| n);
    ctx.record("integration intertwines eta0 and eta1", r);

    let r = (|| {
        let mut count = 0;
        for k in 0..=2usize {
            let total = (p.e() as usize).pow(k as u32);
            for code in 0..total {
                let mut mu = Vec::new();
                let mut x = code;
                for _ in 0..k {
                    mu.push((x % p.e() as usize) as u32);
                    x /= p.e() as usize;
                }
                let ok = orbit_cover_check(p, &mu, 0, k + 1).map_err(|e| e.to_string())?;
                ensure(ok, || format!("orbit of Z(0, {mu:?})"))?;
                count += 1;
            }
        }
        Ok(count)
    })();
    ctx.record("b-orbits of cylinders fill the invariant sets", r);

    let kg = k_groups(p);
    let d1 = p.d() as u64 - 1;
    let torsion_ok = match kg.regime {
        1 => kg.k0.rank == 0 && kg.k0.torsion.iter().product::<u64>() == d1.max(1),
        2 => kg.k0.rank == 1 && kg.k0.torsion.is_empty(),
        3 => kg.k0.rank == 1 && kg.k1.rank == 1,
        _ => kg.k0.rank == 2 && kg.k1.rank == 2,
    };
    ctx.record(
        "K-groups follow the four-regime table",
        ensure(torsion_ok, || format!("regime {} gave {} / {}", kg.regime, kg.k0, kg.k1)).map(|_| 1),
    );
}
