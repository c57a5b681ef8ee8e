mod common;

use common::{exp_partial_sum, log1p_partial_sum, rat_digits, Rat};
use proptest::prelude::*;
use qp_recur::analytic::{exp_term_count, factorial_valuation, log_term_count};
use qp_recur::{exp_p, log_p, Error, PadicNumber, Valuation};

/// `p^v * m` with `m` coprime to `p`, as an integer.
fn scaled(p: u32, v: i64, m: i128) -> i128 {
    (p as i128).pow(v as u32) * m
}

fn legendre_by_division(n: u64, p: u64) -> u64 {
    (1..=n)
        .map(|mut k| {
            let mut v = 0;
            while k % p == 0 {
                k /= p;
                v += 1;
            }
            v
        })
        .sum()
}

#[test]
fn legendre_matches_direct_count() {
    for p in [3u32, 5, 7, 13] {
        for n in 0..300 {
            assert_eq!(factorial_valuation(n, p), legendre_by_division(n, p as u64), "n={n} p={p}");
        }
    }
}

#[test]
fn exp_term_counts_match_scan() {
    for p in [3u32, 5, 7, 11] {
        for vx in 1..=4i64 {
            for prec in 1..=40i64 {
                let n_max = exp_term_count(vx, prec, p);
                // every later term vanishes, checked well past the bound
                for n in (n_max + 1)..=(2 * n_max + 2 * prec as u64) {
                    let v = n as i64 * vx - factorial_valuation(n, p) as i64;
                    assert!(v >= prec, "p={p} vx={vx} N={prec}: term {n} has valuation {v}");
                }
                if n_max > 0 {
                    let v = n_max as i64 * vx - factorial_valuation(n_max, p) as i64;
                    assert!(v < prec, "p={p} vx={vx} N={prec}: last term {n_max} already vanishes");
                }
            }
        }
    }
    // 25 - v(25!) = 19 < 20, 26 - v(26!) = 20
    assert_eq!(exp_term_count(1, 20, 5), 25);
}

#[test]
fn log_term_counts_match_scan() {
    let vp = |n: u64, p: u64| {
        let (mut m, mut v) = (n, 0i64);
        while m % p == 0 {
            m /= p;
            v += 1;
        }
        v
    };
    for p in [3u32, 5, 7] {
        for vy in 1..=3i64 {
            for prec in 1..=40i64 {
                let n_max = log_term_count(vy, prec, p);
                for n in (n_max + 1)..=(3 * n_max + 60) {
                    assert!(n as i64 * vy - vp(n, p as u64) >= prec, "p={p} vy={vy} N={prec} n={n}");
                }
                if n_max > 0 {
                    assert!(n_max as i64 * vy - vp(n_max, p as u64) < prec);
                }
            }
        }
    }
}

#[test]
fn series_match_exact_rational_sums() {
    let mut rng = common::rng(11);
    for p in [3u32, 5, 7] {
        for n in [1u32, 4, 9, 12] {
            let ctx = common::ctx(p, n);
            for _ in 0..20 {
                use rand::Rng;
                let v = rng.gen_range(1..=3i64);
                let m = loop {
                    let m: i128 = rng.gen_range(-500..500);
                    if m % p as i128 != 0 {
                        break m;
                    }
                };
                let x = scaled(p, v, m);
                let xr = Rat::int(x);
                let e = exp_p(&PadicNumber::from_integer(x, ctx)).unwrap();
                let expect = rat_digits(&exp_partial_sum(&xr, v, n as usize, p), p, n as usize);
                assert_eq!(e.residue_digits(n as usize).unwrap(), expect, "exp_{p}({x}) mod {p}^{n}");
                let l = log_p(&PadicNumber::from_integer(1 + x, ctx)).unwrap();
                let expect = rat_digits(&log1p_partial_sum(&xr, v, n as usize, p), p, n as usize);
                assert_eq!(l.residue_digits(n as usize).unwrap(), expect, "log_{p}(1 + {x}) mod {p}^{n}");
            }
        }
    }
}

#[test]
fn domain_errors_never_return_values() {
    let ctx = common::ctx(5, 10);
    for x in ["1", "2/3", "1/5", "-4", "7"] {
        let x = PadicNumber::parse_literal(x, ctx).unwrap();
        assert!(matches!(exp_p(&x), Err(Error::Domain(_))), "exp {x}");
    }
    for x in ["0", "5", "2", "1/5", "-1", "3/2"] {
        let x = PadicNumber::parse_literal(x, ctx).unwrap();
        assert!(matches!(log_p(&x), Err(Error::Domain(_))), "log {x}");
    }
}

#[test]
fn exact_zero_maps_to_one_and_back() {
    let ctx = common::ctx(7, 9);
    assert_eq!(exp_p(&PadicNumber::zero(ctx)).unwrap(), PadicNumber::one(ctx));
    let l = log_p(&PadicNumber::one(ctx)).unwrap();
    assert!(l.is_zero());
    assert_eq!(l.valuation(), Valuation::AtLeast(9));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exp_and_log_norm_identities(
        p in prop::sample::select(vec![3u32, 5, 7, 11]),
        prec in 2u32..=30,
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let ctx = common::ctx(p, prec);
        let mut rng = common::rng(seed);
        let v = rng.gen_range(1..=3.min(prec as i64 - 1));
        let x = common::random_with_valuation(ctx, &mut rng, v);
        let one = PadicNumber::one(ctx);
        let e = exp_p(&x).unwrap();
        prop_assert!(e.is_unit());
        prop_assert_eq!(e.sub(&one).unwrap().valuation(), Valuation::Finite(v));
        let one_plus = one.add(&x).unwrap();
        let l = log_p(&one_plus).unwrap();
        prop_assert_eq!(l.valuation(), Valuation::Finite(v));
        let n = prec as i64;
        prop_assert!(log_p(&e).unwrap().equals_mod(&x, n).unwrap());
        prop_assert!(exp_p(&l).unwrap().equals_mod(&one_plus, n).unwrap());
    }

    #[test]
    fn exp_turns_sums_into_products(
        p in prop::sample::select(vec![3u32, 5, 7]),
        a in 1i64..=3,
        b in 1i64..=3,
        m1 in 1i128..2_000,
        m2 in 1i128..2_000,
    ) {
        let ctx = common::ctx(p, 16);
        let m1 = if m1 % p as i128 == 0 { m1 + 1 } else { m1 };
        let m2 = if m2 % p as i128 == 0 { m2 + 1 } else { m2 };
        let x = PadicNumber::from_integer(scaled(p, a, m1), ctx);
        let y = PadicNumber::from_integer(scaled(p, b, -m2), ctx);
        let lhs = exp_p(&x.add(&y).unwrap()).unwrap();
        let rhs = exp_p(&x).unwrap().mul(&exp_p(&y).unwrap()).unwrap();
        prop_assert!(lhs.equals_mod(&rhs, 16).unwrap());
    }
}

#[test]
fn reduced_input_precision_propagates() {
    let ctx = common::ctx(5, 12);
    let x = PadicNumber::parse("5^1 * [1,3] + O(5^6)", ctx).unwrap();
    let e = exp_p(&x).unwrap();
    assert_eq!(e.absolute_precision(), Some(6));
    let exact = exp_p(&PadicNumber::from_integer(5 + 15 * 5, ctx)).unwrap();
    assert!(e.equals_mod(&exact, 6).unwrap());
}
