mod common;

use bspaths::{
    compose, from_form_r, normalize, parse_word, to_form_r, BSParams, GenWord, Letter, PathL,
    PathR,
};
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn grid() -> Vec<BSParams> {
    BSParams::default_grid()
}

fn params() -> impl Strategy<Value = BSParams> {
    proptest::sample::select(grid())
}

fn path_in(p: BSParams) -> impl Strategy<Value = PathL> {
    let lo = if p.is_negative() { -6i64 } else { 0 };
    (proptest::collection::vec(0..p.d(), 0..4), lo..=9i64).prop_map(move |(l, t)| {
        let t = if l.is_empty() { t.abs() } else { t };
        PathL::new(p, l, t).unwrap()
    })
}

fn two_paths() -> impl Strategy<Value = (PathL, PathL)> {
    params().prop_flat_map(|p| (path_in(p), path_in(p)))
}

fn three_paths() -> impl Strategy<Value = (PathL, PathL, PathL)> {
    params().prop_flat_map(|p| (path_in(p), path_in(p), path_in(p)))
}

/// Words with positive `a` and signed `b` exponents.
fn signed_word() -> impl Strategy<Value = GenWord> {
    proptest::collection::vec((any::<bool>(), -7i64..=7), 0..7).prop_map(|v| {
        let mut w = GenWord::new();
        for (is_a, k) in v {
            if is_a {
                w.push(Letter::A, BigInt::from(1));
            } else {
                w.push(Letter::B, BigInt::from(k));
            }
        }
        w
    })
}

fn gword(w: &GenWord) -> GWord {
    w.tokens
        .iter()
        .map(|t| {
            let e = i64::try_from(&t.exp).unwrap();
            (t.letter == Letter::A, e)
        })
        .collect()
}

proptest! {
    #[test]
    fn normalize_agrees_with_group(p in params(), w in signed_word()) {
        let g = gword(&w);
        match normalize(&w, p) {
            Ok(x) => {
                prop_assert!(in_monoid(p, &g));
                prop_assert!(path_eq(&x, &g));
            }
            Err(_) => prop_assert!(!in_monoid(p, &g), "{} rejected", w),
        }
    }

    #[test]
    fn reemitted_word_renormalizes((a, _) in two_paths()) {
        let back = normalize(&parse_word(&a.word().to_string()).unwrap(), a.params()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn forms_l_and_r_round_trip((a, _) in two_paths()) {
        let r = to_form_r(&a);
        prop_assert!(r.letters().iter().all(|&j| j < a.params().c()));
        prop_assert!(path_eq(&a, &gw_from_r(&r)));
        prop_assert_eq!(from_form_r(&r), a);
    }

    #[test]
    fn equal_group_elements_have_equal_forms((a, b) in two_paths()) {
        prop_assert_eq!(a == b, group_eq(a.params(), &gw_path(&a), &gw_path(&b)));
    }

    #[test]
    fn composition_is_associative((a, b, c) in three_paths()) {
        let l = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let r = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn composition_is_the_group_product((a, b) in two_paths()) {
        let ab = compose(&a, &b).unwrap();
        prop_assert!(path_eq(&ab, &gw_concat(&[&gw_path(&a), &gw_path(&b)])));
        prop_assert_eq!(ab.height(), a.height() + b.height());
    }

    #[test]
    fn cancellation((a, b, c) in three_paths()) {
        let (ab, ac) = (compose(&a, &b).unwrap(), compose(&a, &c).unwrap());
        prop_assert_eq!(ab == ac, b == c);
        let (ba, ca) = (compose(&b, &a).unwrap(), compose(&c, &a).unwrap());
        prop_assert_eq!(ba == ca, b == c);
    }

    #[test]
    fn no_inverses((a, b) in two_paths()) {
        if compose(&a, &b).unwrap().is_identity() {
            prop_assert!(a.is_identity() && b.is_identity());
        }
    }

    #[test]
    fn json_round_trip((a, _) in two_paths()) {
        let s = serde_json::to_string(&a).unwrap();
        let back: PathL = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }
}

fn gw_from_r(r: &PathR) -> GWord {
    let mut w = gw_b(i64::try_from(r.lead()).unwrap());
    for &j in r.letters() {
        w.push((true, 1));
        w.push((false, j as i64));
    }
    w
}

#[test]
fn all_short_positive_words_round_trip() {
    for p in grid() {
        for len in 0..=8u32 {
            for code in 0..(1u32 << len) {
                let text: Vec<&str> = (0..len)
                    .map(|k| if code >> k & 1 == 1 { "a" } else { "b" })
                    .collect();
                let text = if text.is_empty() { "e".to_string() } else { text.join(" ") };
                let w = parse_word(&text).unwrap();
                let x = normalize(&w, p).unwrap();
                assert!(path_eq(&x, &gword(&w)), "{text} at {p}");
                let again = normalize(&parse_word(&x.word().to_string()).unwrap(), p).unwrap();
                assert_eq!(again, x);
            }
        }
    }
}

#[test]
fn large_exponents_stay_exact() {
    let p = BSParams::positive(3, 2).unwrap();
    let w = parse_word("b^123456789012345678901234567890 a a a").unwrap();
    let x = normalize(&w, p).unwrap();
    let r = to_form_r(&x);
    assert_eq!(from_form_r(&r), x);
    assert_eq!(x.height(), 3);
}

#[test]
fn malformed_words_are_rejected() {
    for bad in ["a^", "c", "b^x", "a^-2", "(a", "b^1^2"] {
        assert!(parse_word(bad).is_err(), "{bad}");
    }
}
