use proptest::prelude::*;

use wtelim::arith::{digits_of, multiset_is_generic, multiset_margin, padic_solve, Params};
use wtelim::elimination::{enumerate_types, is_compatible, theta_set_final, theta_set_raw, InertialType};
use wtelim::galois::{frobenius_orbit, is_primitive, rep_margin, s_multiset, SemisimpleInertialData};
use wtelim::oracle;
use wtelim::weights::{
    canonicalize, covering_type, enumerate_weights, is_regular, weight_equivalent, weight_margin,
    RestrictedWeight,
};
use wtelim::Int;

const PRIMES: [Int; 4] = [5, 7, 11, 13];

fn weight_strategy() -> impl Strategy<Value = (Params, Vec<Vec<Int>>)> {
    (prop::sample::select(PRIMES.to_vec()), 1usize..=3, 1usize..=2).prop_flat_map(|(p, n, f)| {
        let params = Params::new(p, n, f).unwrap();
        let row = (-50 as Int..50, prop::collection::vec(0..p, n - 1)).prop_map(move |(base, diffs)| {
            let mut row = vec![base; n];
            for i in (0..n - 1).rev() {
                row[i] = row[i + 1] + diffs[i];
            }
            row
        });
        prop::collection::vec(row, f).prop_map(move |lambda| (params, lambda))
    })
}

/// Adds `(p a_j - a_{j+1})` to every entry of row `j`.
fn shifted(params: Params, lambda: &[Vec<Int>], shift: &[Int]) -> Vec<Vec<Int>> {
    let f = params.f;
    lambda
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let c = params.p * shift[j] - shift[(j + 1) % f];
            row.iter().map(|x| x + c).collect()
        })
        .collect()
}

proptest! {
    #[test]
    fn digits_round_trip(p in prop::sample::select(PRIMES.to_vec()), d in 1usize..=4, m in -100_000i64..100_000) {
        let x = digits_of(m, d, p).unwrap();
        let e = p.pow(d as u32) - 1;
        prop_assert_eq!((x.value(p).unwrap() - m).rem_euclid(e), 0);
        prop_assert!(x.digits().iter().all(|&v| (0..p).contains(&v)));
        prop_assert!(!x.digits().iter().all(|&v| v == p - 1));
    }

    #[test]
    fn digits_agree_across_widths(p in prop::sample::select(PRIMES.to_vec()), d in 1usize..=3, m in -10_000i32..10_000) {
        let narrow = digits_of(m, d, p as i32).unwrap();
        let wide = digits_of(m as i128, d, p as i128).unwrap();
        let narrow: Vec<i128> = narrow.digits().iter().map(|&v| v as i128).collect();
        prop_assert_eq!(narrow, wide.digits().to_vec());
    }

    #[test]
    fn carry_reconstruction(p in prop::sample::select(PRIMES.to_vec()), alpha in prop::collection::vec(-40i64..40, 1..=4)) {
        let d = alpha.len();
        let e = p.pow(d as u32) - 1;
        let total: Int = alpha.iter().enumerate().map(|(j, a)| a * p.pow(j as u32)).sum();
        match padic_solve(&alpha, p).unwrap() {
            Some(sol) => {
                for j in 0..d {
                    prop_assert_eq!(alpha[j], p * sol.carries[j] - sol.carries[(j + d - 1) % d]);
                }
                prop_assert_eq!(total, sol.quotient * e);
                prop_assert_eq!(sol.quotient, sol.carries[d - 1]);
            }
            None => prop_assert_ne!(total.rem_euclid(e), 0),
        }
    }

    #[test]
    fn multiset_margin_matches_predicate(p in prop::sample::select(PRIMES.to_vec()), s in prop::collection::vec(0i64..13, 1..=4)) {
        let s: Vec<Int> = s.into_iter().map(|v| v % p).collect();
        let margin = multiset_margin(&s, p).value();
        for delta in 1..=((p - 1) / 2) as u32 {
            prop_assert_eq!(margin >= delta, multiset_is_generic(&s, p, delta));
        }
    }

    #[test]
    fn multiset_margin_is_translation_invariant(p in prop::sample::select(PRIMES.to_vec()), s in prop::collection::vec(0i64..13, 1..=4), c in -30i64..30) {
        let moved: Vec<Int> = s.iter().map(|v| v + c).collect();
        prop_assert_eq!(multiset_margin(&s, p), multiset_margin(&moved, p));
    }

    #[test]
    fn class_invariants((params, lambda) in weight_strategy(), shift in prop::collection::vec(-8i64..8, 2)) {
        let w = RestrictedWeight::new(params, lambda.clone()).unwrap();
        let moved = RestrictedWeight::new(params, shifted(params, &lambda, &shift[..params.f])).unwrap();
        prop_assert!(weight_equivalent(&w, &moved).unwrap());
        prop_assert_eq!(weight_margin(&w), weight_margin(&moved));
        prop_assert_eq!(is_regular(&w), is_regular(&moved));
        prop_assert_eq!(covering_type(&w), covering_type(&moved));
        prop_assert_eq!(canonicalize(&w), canonicalize(&moved));
        let c = canonicalize(&w);
        prop_assert_eq!(canonicalize(&c), c.clone());
        prop_assert!(weight_equivalent(&w, &c).unwrap());
    }

    #[test]
    fn weight_margin_matches_predicate((params, lambda) in weight_strategy()) {
        let w = RestrictedWeight::new(params, lambda.clone()).unwrap();
        let margin = weight_margin(&w).value();
        for delta in 1..=params.max_delta() {
            prop_assert_eq!(margin >= delta, oracle::weight_is_generic(&lambda, params.p, delta as Int));
        }
        if margin >= 1 {
            prop_assert!(is_regular(&w));
        }
    }

    #[test]
    fn transfer_bound((params, lambda) in weight_strategy()) {
        let w = RestrictedWeight::new(params, lambda).unwrap();
        let xi = covering_type(&w);
        let type_margin = (0..params.f).map(|j| multiset_margin(&xi.column(j), params.p).value()).min().unwrap();
        let margin = weight_margin(&w).value();
        prop_assert!(margin + params.n as u32 - 1 >= type_margin);
        if params.f == 1 {
            prop_assert_eq!(margin, type_margin);
        }
    }

    #[test]
    fn orbit_canonicalization(m in 0i64..14_640, k in 0u32..4) {
        let params = Params::new(11, 2, 2).unwrap();
        let e = params.e(4);
        prop_assume!(is_primitive(m, 2, params));
        let twisted = (m * params.q().pow(k)).rem_euclid(e);
        let a = SemisimpleInertialData::from_pairs(params, &[(2, m)]).unwrap();
        let b = SemisimpleInertialData::from_pairs(params, &[(2, twisted)]).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn canonical_soundness_against_shift_search() {
    for (p, f) in [(5, 1), (5, 2), (7, 1)] {
        let params = Params::new(p, 2, f).unwrap();
        // a spread of non-canonical representatives
        let arrays: Vec<Vec<Vec<Int>>> = enumerate_weights(params)
            .step_by(7)
            .take(40)
            .flat_map(|w| {
                let base = w.lambda().to_vec();
                (-1..=1).map(move |t| base.iter().map(|row| row.iter().map(|x| x + t).collect()).collect())
            })
            .collect();
        for a in &arrays {
            let wa = RestrictedWeight::new(params, a.clone()).unwrap();
            for b in &arrays {
                let wb = RestrictedWeight::new(params, b.clone()).unwrap();
                let fast = weight_equivalent(&wa, &wb).unwrap();
                assert_eq!(fast, oracle::brute_force_equivalent(a, b, p, 2 * p), "{a:?} {b:?}");
                assert_eq!(fast, canonicalize(&wa) == canonicalize(&wb));
            }
        }
    }
}

#[test]
fn enumeration_dedups_brute_force_box() {
    // every restricted array in a box lands on exactly one enumerated class
    let params = Params::new(7, 2, 1).unwrap();
    let classes: Vec<RestrictedWeight> = enumerate_weights(params).collect();
    for bottom in -15..15 {
        for diff in 0..7 {
            let w = RestrictedWeight::new(params, vec![vec![bottom + diff, bottom]]).unwrap();
            let hits = classes.iter().filter(|c| weight_equivalent(&w, c).unwrap()).count();
            assert_eq!(hits, 1);
        }
    }
}

#[test]
fn primitivity_matches_orbit_size() {
    for (p, n, f) in [(5, 2, 1), (3, 3, 1), (3, 2, 2), (2, 4, 1), (7, 2, 1)] {
        let params = Params::new(p, n, f).unwrap();
        for m in 0..params.e(n * f) {
            assert_eq!(
                is_primitive(m, n, params),
                oracle::orbit_size(params, n, m) == n,
                "{params} m={m}"
            );
            assert_eq!(frobenius_orbit(params, n, m).len(), oracle::orbit_size(params, n, m));
        }
    }
}

#[test]
fn generic_reps_have_distinct_digits() {
    let params = Params::new(13, 3, 1).unwrap();
    for rho in wtelim::galois::enumerate_semisimple(params) {
        let s = s_multiset(&rho, 0).unwrap();
        if rep_margin(&rho).value() >= 1 {
            let mut sorted = s.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), s.len());
        }
    }
}

#[test]
fn f1_s_multiset_is_full_digit_multiset() {
    let params = Params::new(7, 3, 1).unwrap();
    for rho in wtelim::galois::enumerate_semisimple(params).step_by(11) {
        let mut s = s_multiset(&rho, 0).unwrap();
        let mut all: Vec<Int> = rho.summands().iter().flat_map(|x| x.digits().digits().to_vec()).collect();
        s.sort();
        all.sort();
        assert_eq!(s, all);
    }
}

#[test]
fn raw_within_final_small_parameters() {
    // n <= 3, ni f <= 4, p <= 13 (sampled across types for the larger cases)
    let cases: [(Int, usize, usize, usize, usize); 6] = [
        (5, 3, 1, 1, 1),
        (5, 3, 1, 2, 1),
        (5, 3, 1, 3, 7),
        (13, 2, 1, 2, 3),
        (5, 2, 2, 2, 17),
        (7, 3, 1, 2, 5),
    ];
    for (p, n, f, ni, stride) in cases {
        let params = Params::new(p, n, f).unwrap();
        for xi in enumerate_types(params).step_by(stride) {
            let raw = theta_set_raw(&xi, ni).unwrap();
            let fin = theta_set_final(&xi, ni).unwrap();
            assert!(raw.is_subset(&fin), "{params} ni={ni} xi={:?}", xi.row_values());
        }
    }
}

#[test]
fn predicate_matches_enumeration_with_three_rows() {
    let params = Params::new(5, 3, 1).unwrap();
    for xi in enumerate_types(params) {
        for ni in 1..=3 {
            let reference = oracle::theta_final_by_enumeration(params, &xi.row_values(), ni);
            let e = params.e(ni);
            for m in 0..e {
                assert_eq!(is_compatible(m, &xi, ni).unwrap(), reference.contains(&m));
            }
        }
    }
}

#[test]
fn predicate_when_p_not_above_n() {
    // p <= n: every residue is in the closed form
    let params = Params::new(3, 3, 1).unwrap();
    let xi = InertialType::from_values(params, &[0, 1, 0]).unwrap();
    for ni in 1..=3 {
        let reference = oracle::theta_final_by_enumeration(params, &xi.row_values(), ni);
        for m in 0..params.e(ni) {
            assert_eq!(is_compatible(m, &xi, ni).unwrap(), reference.contains(&m));
        }
    }
}
