//! Embedded oracle suite run by `wtelim selftest`.

use std::fmt;

use crate::arith::{multiset_margin, padic_solve, Params};
use crate::elimination::{enumerate_types, is_compatible, theta_set_final, theta_set_raw};
use crate::galois::is_primitive;
use crate::oracle;
use crate::weights::{
    canonicalize, covering_type, enumerate_weights, weight_equivalent, weight_margin, RestrictedWeight,
};
use crate::Int;

/// Maps `(m, d, p)` to `d` base-`p` digits of `m` modulo `e_d`.
pub type DigitConvention = fn(Int, usize, Int) -> Vec<Int>;

pub fn library_digits(m: Int, d: usize, p: Int) -> Vec<Int> {
    crate::arith::digits_of(m, d, p).expect("small parameters").digits().to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestFailure {
    pub property: &'static str,
    pub detail: String,
}

impl fmt::Display for SelftestFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.detail)
    }
}

type Check = (&'static str, fn(DigitConvention) -> Result<usize, String>);

pub const CHECKS: &[Check] = &[
    ("digit round trip", check_digits),
    ("carry solver vs brute force", check_carries),
    ("raw theta set within final", check_raw_in_final),
    ("compatibility predicate vs theta set", check_predicate),
    ("transfer bounds", check_transfer),
    ("weight canonicalization", check_canonical),
    ("primitivity vs free orbit", check_primitive),
];

/// Runs every check with the given digit convention; returns the names and
/// case counts of passing checks, or the first failure.
pub fn run_with(digits: DigitConvention) -> Result<Vec<(&'static str, usize)>, SelftestFailure> {
    CHECKS
        .iter()
        .map(|(name, check)| {
            check(digits)
                .map(|cases| (*name, cases))
                .map_err(|detail| SelftestFailure { property: name, detail })
        })
        .collect()
}

pub fn run() -> Result<Vec<(&'static str, usize)>, SelftestFailure> {
    run_with(library_digits)
}

fn check_digits(digits: DigitConvention) -> Result<usize, String> {
    let mut cases = 0;
    for p in [5 as Int, 7] {
        for d in 1..=3usize {
            let e = p.pow(d as u32) - 1;
            for m in -2 * e..=2 * e {
                let x = digits(m, d, p);
                cases += 1;
                if x.len() != d || x.iter().any(|&v| !(0..p).contains(&v)) {
                    return Err(format!("digits of {m} (p={p}, d={d}) out of range: {x:?}"));
                }
                if x.iter().all(|&v| v == p - 1) {
                    return Err(format!("digits of {m} (p={p}, d={d}) are all p-1"));
                }
                let back: Int = x.iter().rev().fold(0, |acc, &v| acc * p + v);
                if (back - m).rem_euclid(e) != 0 {
                    return Err(format!("digits of {m} (p={p}, d={d}) re-sum to {back}"));
                }
            }
        }
    }
    Ok(cases)
}

fn check_carries(_: DigitConvention) -> Result<usize, String> {
    let mut cases = 0;
    let p: Int = 5;
    for d in 1..=2usize {
        let span = 4 * p + 1;
        for code in 0..span.pow(d as u32) {
            let alpha: Vec<Int> = (0..d).map(|j| (code / span.pow(j as u32)) % span - 2 * p).collect();
            let fast = padic_solve(&alpha, p).map_err(|e| e.to_string())?;
            let slow = oracle::brute_force_carries(&alpha, p, 3 * p);
            cases += 1;
            if fast.as_ref().map(|s| s.carries.clone()) != slow {
                return Err(format!("alpha {alpha:?}: solver {fast:?}, brute force {slow:?}"));
            }
        }
    }
    Ok(cases)
}

fn small_types() -> impl Iterator<Item = (Params, usize)> {
    [(7, 2, 1, 1), (7, 2, 1, 2), (5, 2, 2, 1)]
        .into_iter()
        .map(|(p, n, f, ni)| (Params::new(p, n, f).expect("valid"), ni))
}

fn check_raw_in_final(_: DigitConvention) -> Result<usize, String> {
    let mut cases = 0;
    for (params, ni) in small_types() {
        for xi in enumerate_types(params) {
            let raw = theta_set_raw(&xi, ni).map_err(|e| e.to_string())?;
            let fin = theta_set_final(&xi, ni).map_err(|e| e.to_string())?;
            cases += 1;
            if !raw.is_subset(&fin) {
                return Err(format!("{params}, ni={ni}, xi={:?}", xi.row_values()));
            }
        }
    }
    Ok(cases)
}

fn check_predicate(_: DigitConvention) -> Result<usize, String> {
    let mut cases = 0;
    for (params, ni) in small_types() {
        let e = params.e(ni * params.f);
        for xi in enumerate_types(params) {
            let fin = theta_set_final(&xi, ni).map_err(|e| e.to_string())?;
            let reference = oracle::theta_final_by_enumeration(params, &xi.row_values(), ni);
            if fin.thetas != reference {
                return Err(format!("theta set mismatch at {params}, xi={:?}", xi.row_values()));
            }
            for m in 0..e {
                cases += 1;
                if is_compatible(m, &xi, ni).map_err(|e| e.to_string())? != fin.contains(m) {
                    return Err(format!("{params}, ni={ni}, m={m}, xi={:?}", xi.row_values()));
                }
            }
        }
    }
    Ok(cases)
}

fn check_transfer(digits: DigitConvention) -> Result<usize, String> {
    let mut cases = 0;
    for (p, n, f) in [(7, 2, 1), (13, 3, 1), (5, 2, 2)] {
        let params = Params::new(p, n, f).expect("valid");
        for w in enumerate_weights(params) {
            let xi = covering_type(&w);
            // the covering type must agree with the digit convention
            for (s, row) in xi.rows().iter().enumerate() {
                let value: Int = (0..f).map(|j| w.lambda()[(f - j) % f][s] * p.pow(j as u32)).sum();
                if row.digits() != digits(value, f, p).as_slice() {
                    return Err(format!("covering type row {s} of {:?} disagrees with digits", w.lambda()));
                }
            }
            let type_margin = (0..f).map(|j| multiset_margin(&xi.column(j), p).value()).min().unwrap();
            let margin = weight_margin(&w).value();
            cases += 1;
            let ok = if f == 1 {
                margin == type_margin
            } else {
                margin + (n as u32 - 1) >= type_margin
            };
            if !ok {
                return Err(format!(
                    "{params}: weight {:?} margin {margin}, type margin {type_margin}",
                    w.lambda()
                ));
            }
        }
    }
    Ok(cases)
}

fn check_canonical(_: DigitConvention) -> Result<usize, String> {
    let mut cases = 0;
    let params = Params::new(5, 2, 1).expect("valid");
    let p = params.p;
    let arrays: Vec<Vec<Vec<Int>>> = (-6..6)
        .flat_map(|b| (0..p).map(move |diff| vec![vec![b + diff, b]]))
        .collect();
    for a in &arrays {
        let wa = RestrictedWeight::new(params, a.clone()).map_err(|e| e.to_string())?;
        let ca = canonicalize(&wa);
        if canonicalize(&ca) != ca {
            return Err(format!("canonicalize not idempotent at {a:?}"));
        }
        for b in &arrays {
            let wb = RestrictedWeight::new(params, b.clone()).map_err(|e| e.to_string())?;
            let fast = weight_equivalent(&wa, &wb).map_err(|e| e.to_string())?;
            let slow = oracle::brute_force_equivalent(a, b, p, 2 * p);
            cases += 1;
            if fast != slow || fast != (ca == canonicalize(&wb)) {
                return Err(format!("{a:?} vs {b:?}: predicate {fast}, brute force {slow}"));
            }
        }
    }
    Ok(cases)
}

fn check_primitive(_: DigitConvention) -> Result<usize, String> {
    let mut cases = 0;
    for (p, f, ni) in [(5, 1, 2), (3, 1, 4), (3, 2, 2), (2, 1, 6)] {
        let params = Params::new(p, ni, f).expect("valid");
        for m in 0..params.e(ni * f) {
            cases += 1;
            if is_primitive(m, ni, params) != (oracle::orbit_size(params, ni, m) == ni) {
                return Err(format!("{params}, ni={ni}, m={m}"));
            }
        }
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let results = run().unwrap();
        assert_eq!(results.len(), CHECKS.len());
    }

    fn mutated_digits(m: Int, d: usize, p: Int) -> Vec<Int> {
        // residues taken in [0, p^d) instead of [0, e_d): -1 becomes all p-1
        let mut r = m.rem_euclid(p.pow(d as u32));
        (0..d)
            .map(|_| {
                let x = r % p;
                r /= p;
                x
            })
            .collect()
    }

    #[test]
    fn mutated_convention_is_named() {
        let failure = run_with(mutated_digits).unwrap_err();
        assert_eq!(failure.property, "digit round trip");
    }
}
