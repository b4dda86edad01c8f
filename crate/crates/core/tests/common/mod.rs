//! Oracles that work in the group directly: Britton reduction for the word
//! problem, membership in the positive monoid, and brute-force enumerations.
#![allow(dead_code)]

use std::collections::HashMap;

use bspaths::{BSParams, PathL};
use num_bigint::BigInt;

/// A group word: `(true, ±1)` for `a^{±1}`, `(false, k)` for `b^k`.
pub type GWord = Vec<(bool, i64)>;

pub fn gw_b(k: i64) -> GWord {
    vec![(false, k)]
}

pub fn gw_a() -> GWord {
    vec![(true, 1)]
}

pub fn gw_concat(parts: &[&GWord]) -> GWord {
    parts.iter().flat_map(|w| w.iter().copied()).collect()
}

pub fn gw_inverse(w: &GWord) -> GWord {
    w.iter().rev().map(|&(a, k)| (a, -k)).collect()
}

/// `b^{i_0} a b^{i_1} a ... a b^{tail}`.
pub fn gw_path(x: &PathL) -> GWord {
    let mut w = GWord::new();
    for &l in x.letters() {
        w.push((false, l as i64));
        w.push((true, 1));
    }
    w.push((false, i64::try_from(x.tail()).expect("small tail")));
    w
}

fn push_b(stack: &mut GWord, k: i64) {
    if k == 0 {
        return;
    }
    if let Some((false, e)) = stack.last_mut() {
        *e += k;
        if *e == 0 {
            stack.pop();
        }
    } else {
        stack.push((false, k));
    }
}

/// Pinch-free form: no `a b^{kc} a^{-1}` and no `a^{-1} b^{kd} a` (positive
/// relation; the negative one flips the sign of the exponent produced).
pub fn britton(p: BSParams, w: &GWord) -> GWord {
    let (c, d, s) = (p.c() as i64, p.d() as i64, p.sign());
    let mut st = GWord::new();
    for &(is_a, e) in w {
        if !is_a {
            push_b(&mut st, e);
            continue;
        }
        let step = e.signum();
        for _ in 0..e.abs() {
            // candidate pinch: ... a^ε b^k a^{step}
            let n = st.len();
            let (prev_a, k, used) = match st.as_slice() {
                [.., (true, x), (false, k)] => (Some(*x), *k, 2),
                [.., (true, x)] => (Some(*x), 0, 1),
                _ => (None, 0, 0),
            };
            match prev_a {
                Some(x) if x == -step => {
                    let replaced = if x == 1 && k % c == 0 {
                        Some(s * k / c * d)
                    } else if x == -1 && k % d == 0 {
                        Some(s * k / d * c)
                    } else {
                        None
                    };
                    if let Some(r) = replaced {
                        st.truncate(n - used);
                        push_b(&mut st, r);
                        continue;
                    }
                    st.push((true, step));
                }
                _ => st.push((true, step)),
            }
        }
    }
    st
}

pub fn group_eq(p: BSParams, x: &GWord, y: &GWord) -> bool {
    britton(p, &gw_concat(&[x, &gw_inverse(y)])).is_empty()
}

/// Whether the group element lies in the monoid generated by `a` and `b`.
pub fn in_monoid(p: BSParams, w: &GWord) -> bool {
    let r = britton(p, w);
    if r.iter().any(|&(a, e)| a && e < 0) {
        return false;
    }
    let height = r.iter().filter(|t| t.0).count();
    if height > 0 && p.is_negative() {
        // b^{-d} a = a b^c absorbs any negative lead
        return true;
    }
    // sweep b-exponents leftwards through each a: a b^{qc+r} = b^{qd} a b^r
    let (c, d) = (p.c() as i64, p.d() as i64);
    let mut carry = 0i64;
    for &(is_a, e) in r.iter().rev() {
        if is_a {
            carry = carry.div_euclid(c) * d;
        } else {
            carry += e;
        }
    }
    carry >= 0
}

pub fn path_eq(x: &PathL, w: &GWord) -> bool {
    group_eq(x.params(), &gw_path(x), w)
}

/// `x ≤ y` in the extension order, decided in the group.
pub fn below(x: &PathL, y: &PathL) -> bool {
    in_monoid(x.params(), &gw_concat(&[&gw_inverse(&gw_path(x)), &gw_path(y)]))
}

/// Every element with at most `max_len` letters and tails in `tails`.
pub fn enumerate_paths(p: BSParams, max_len: usize, tails: std::ops::RangeInclusive<i64>) -> Vec<PathL> {
    let mut out = Vec::new();
    let mut letters: Vec<Vec<u32>> = vec![Vec::new()];
    for len in 0..=max_len {
        for l in &letters {
            for t in tails.clone() {
                if let Ok(x) = PathL::new(p, l.clone(), t) {
                    out.push(x);
                }
            }
        }
        if len < max_len {
            letters = letters
                .iter()
                .flat_map(|l| {
                    (0..p.d()).map(move |x| {
                        let mut m = l.clone();
                        m.push(x);
                        m
                    })
                })
                .collect();
        }
    }
    out
}

/// All tuples over `[0, base)` of the given length, first entry varying fastest.
pub fn tuples(base: u32, len: usize) -> Vec<Vec<u32>> {
    let total = (base as usize).pow(len as u32);
    (0..total)
        .map(|mut code| {
            (0..len)
                .map(|_| {
                    let x = (code % base as usize) as u32;
                    code /= base as usize;
                    x
                })
                .collect()
        })
        .collect()
}

/// The `j` with `b^n α(i) = α(j) b^t` for some `t`, found by trying every `j`.
pub fn b_action_oracle(p: BSParams, i: &[u32], n: i64) -> (Vec<u32>, i64) {
    let alpha_i = gw_path(&PathL::new(p, i.to_vec(), 0).unwrap());
    let lhs = gw_concat(&[&gw_b(n), &alpha_i]);
    for j in tuples(p.d(), i.len()) {
        let alpha_j = gw_path(&PathL::new(p, j.clone(), 0).unwrap());
        let r = britton(p, &gw_concat(&[&gw_inverse(&alpha_j), &lhs]));
        match r.as_slice() {
            [] => return (j, 0),
            [(false, t)] => return (j, *t),
            _ => {}
        }
    }
    panic!("no prefix found for b^{n} α({i:?})");
}

/// Order of `Z[1/base] / m Z[1/base]` as the size of the image of `x ↦ base^N x` on `Z/|m|`.
pub fn cokernel_order(m: i64, base: u64) -> u64 {
    let m = m.unsigned_abs();
    let mut image: Vec<u64> = (0..m).collect();
    for _ in 0..64 {
        let mut next: Vec<u64> = image.iter().map(|x| x * base % m).collect();
        next.sort_unstable();
        next.dedup();
        if next.len() == image.len() {
            break;
        }
        image = next;
    }
    image.len() as u64
}

/// Number of elements of each order in `Z/t_1 ⊕ ... ⊕ Z/t_k`.
pub fn order_profile(torsion: &[u64]) -> HashMap<u64, u64> {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut profile = HashMap::from([(1u64, 1u64)]);
    for &t in torsion {
        let mut next = HashMap::new();
        for (&o, &count) in &profile {
            for x in 0..t {
                let ox = t / gcd(x, t);
                let l = o / gcd(o, ox) * ox;
                *next.entry(l).or_insert(0) += count;
            }
        }
        profile = next;
    }
    profile
}

/// All carry sequences of the given length satisfying the inequalities, with `n_0 ≤ top`.
pub fn carry_sequences(p: BSParams, i: &[u32], top: i64) -> Vec<Vec<BigInt>> {
    let (c, d) = (p.c() as i64, p.d() as i64);
    let mut out: Vec<Vec<i64>> = (0..=top).map(|n| vec![n]).collect();
    for &x in &i[1..] {
        out = out
            .into_iter()
            .flat_map(|n| {
                let last = *n.last().unwrap();
                // brute force over a window that contains every solution
                (0..=(last * c + c) / d + 1)
                    .filter(move |&m| last * c <= m * d + x as i64 && m * d + (x as i64) < (last + 1) * c)
                    .map(move |m| {
                        let mut v = n.clone();
                        v.push(m);
                        v
                    })
            })
            .collect();
    }
    out.into_iter()
        .map(|v| v.into_iter().map(BigInt::from).collect())
        .collect()
}

/// The generators `α_{ℓ-1}(i) b^{n_ℓ d + i_ℓ}` of a carry-sequence set.
pub fn cn1_generators(p: BSParams, i: &[u32], n: &[BigInt]) -> Vec<PathL> {
    (0..i.len())
        .map(|l| PathL::new(p, i[..l].to_vec(), &n[l] * p.d() + i[l]).unwrap())
        .collect()
}
