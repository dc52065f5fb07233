//! Serre weights of `GL_n(k)`, `[k : F_p] = f`, as `p`-restricted characters
//! modulo `(p - π) X⁰(T)`.
//!
//! A weight is stored as an `f × n` array `λ[j][i]`. Two arrays give the same
//! weight iff their difference is `c_j · (1, ..., 1)` in row `j` with
//! `φ(c) = Σ_j c_j p^{f-1-j} ≡ 0 (mod e_f)`; `φ` identifies the cokernel of
//! `p - π` on `X⁰(T) ≅ Z^f` with `Z / e_f`. The class of a weight is thus
//! pinned down by its consecutive row differences together with `φ` of the
//! last column, which is what [`WeightClassKey`] records.

use std::ops::Range;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{difference_margin, margin_cap, GenericityMargin, Params, Radix};
use crate::elimination::InertialType;
use crate::error::{Error, Result};
use crate::Int;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RestrictedWeight {
    params: Params,
    lambda: Vec<Vec<Int>>,
}

/// Canonical identity of a weight class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightClassKey {
    pub diffs: Vec<Vec<Int>>,
    pub det_residue: Int,
}

impl RestrictedWeight {
    pub fn new(params: Params, lambda: Vec<Vec<Int>>) -> Result<Self> {
        if lambda.len() != params.f {
            return Err(Error::InvalidInput(format!(
                "lambda has {} rows, expected f = {}",
                lambda.len(),
                params.f
            )));
        }
        for (j, row) in lambda.iter().enumerate() {
            if row.len() != params.n {
                return Err(Error::InvalidInput(format!(
                    "lambda row {j} has {} entries, expected n = {}",
                    row.len(),
                    params.n
                )));
            }
            for i in 0..params.n.saturating_sub(1) {
                let diff = row[i]
                    .checked_sub(row[i + 1])
                    .ok_or(Error::Overflow("lambda difference"))?;
                if !(0..params.p).contains(&diff) {
                    return Err(Error::InvalidInput(format!(
                        "lambda is not p-restricted: lambda[{j}][{i}] - lambda[{j}][{}] = {diff} \
                         is outside [0, {}]",
                        i + 1,
                        params.p - 1
                    )));
                }
            }
        }
        Ok(RestrictedWeight { params, lambda })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    /// Rows `j = 0..f`, each of length `n`.
    pub fn lambda(&self) -> &[Vec<Int>] {
        &self.lambda
    }

    pub fn class_key(&self) -> WeightClassKey {
        let Params { p, n, f } = self.params;
        let diffs = self
            .lambda
            .iter()
            .map(|row| row.windows(2).map(|w| w[0] - w[1]).collect())
            .collect();
        let e_f = self.params.e(f);
        let mut det = 0;
        for row in &self.lambda {
            det = (det * p + row[n - 1].mod_floor(&e_f)).mod_floor(&e_f);
        }
        WeightClassKey { diffs, det_residue: det }
    }

    /// Rebuilds the canonical representative of a class key.
    pub fn from_key(params: Params, key: &WeightClassKey) -> Result<Self> {
        let Params { p, n, f } = params;
        let radix = Radix::new(p, f)?;
        let bottom = radix.digits(key.det_residue);
        if key.diffs.len() != f || key.diffs.iter().any(|r| r.len() + 1 != n) {
            return Err(Error::InvalidInput("class key has the wrong shape".into()));
        }
        let lambda = (0..f)
            .map(|j| {
                let mut row = vec![0; n];
                row[n - 1] = bottom.digits()[f - 1 - j];
                for i in (0..n - 1).rev() {
                    row[i] = row[i + 1] + key.diffs[j][i];
                }
                row
            })
            .collect();
        RestrictedWeight::new(params, lambda)
    }
}

/// True iff `a - b` lies in `(p - π) X⁰(T)`.
pub fn weight_equivalent(a: &RestrictedWeight, b: &RestrictedWeight) -> Result<bool> {
    a.params.ensure_same(&b.params)?;
    let Params { p, f, .. } = a.params;
    let mut phi: Int = 0;
    let e_f = a.params.e(f);
    for (ra, rb) in a.lambda.iter().zip(&b.lambda) {
        let c = ra[0] - rb[0];
        if ra.iter().zip(rb).any(|(x, y)| x - y != c) {
            return Ok(false);
        }
        phi = (phi * p + c.mod_floor(&e_f)).mod_floor(&e_f);
    }
    Ok(phi == 0)
}

/// Unique representative whose last column is given by the digits of the
/// determinant residue.
pub fn canonicalize(w: &RestrictedWeight) -> RestrictedWeight {
    RestrictedWeight::from_key(w.params, &w.class_key()).expect("valid weight has a valid key")
}

/// Largest `delta` such that `λ_j^i - λ_j^{i+k} mod p-1` lies in
/// `[delta, p-1-delta]` for all `j` and `0 <= i < i+k <= n-1`.
pub fn weight_margin(w: &RestrictedWeight) -> GenericityMargin {
    let p = w.params.p;
    let mut margin = margin_cap(p);
    for row in &w.lambda {
        for (i, &x) in row.iter().enumerate() {
            for &y in &row[i + 1..] {
                margin = margin.min(difference_margin(x - y, p));
            }
        }
    }
    GenericityMargin(margin)
}

/// Consecutive differences at most `p - 2`.
pub fn is_regular(w: &RestrictedWeight) -> bool {
    w.lambda
        .iter()
        .all(|row| row.windows(2).all(|pair| pair[0] - pair[1] <= w.params.p - 2))
}

/// Principal-series type `⊕_s ω_f^{ξ_s}` with `ξ_s ≡ Σ_j λ_{f-j}^s p^j (mod e_f)`.
pub fn covering_type(w: &RestrictedWeight) -> InertialType {
    let Params { p, n, f } = w.params;
    let radix = Radix::new(p, f).expect("e_f within checked width");
    let rows = (0..n)
        .map(|s| {
            let mut acc: Int = 0;
            for j in (0..f).rev() {
                let entry = w.lambda[(f - j) % f][s].mod_floor(&radix.e());
                acc = radix.reduce(acc * p + entry);
            }
            radix.digits(acc)
        })
        .collect();
    InertialType::from_digit_rows(w.params, rows).expect("covering type digits are valid")
}

/// Number of weight classes, `p^{f(n-1)} · e_f`.
pub fn weight_class_count(params: Params) -> u128 {
    let Params { p, n, f } = params;
    (p as u128).pow((f * (n - 1)) as u32) * params.e(f) as u128
}

/// Every canonical weight class exactly once, ordered by determinant residue
/// then by differences.
pub fn enumerate_weights(params: Params) -> impl Iterator<Item = RestrictedWeight> {
    enumerate_weights_in(params, 0..params.e(params.f))
}

/// Canonical classes whose determinant residue lies in `det_range`.
pub fn enumerate_weights_in(
    params: Params,
    det_range: Range<Int>,
) -> impl Iterator<Item = RestrictedWeight> {
    let Params { p, n, f } = params;
    let slots = f * (n - 1);
    let diff_count = (p as u128).pow(slots as u32);
    let det_range = det_range.start.max(0)..det_range.end.min(params.e(f));
    det_range.flat_map(move |det| {
        (0..diff_count).map(move |mut code| {
            let mut diffs = vec![vec![0; n - 1]; f];
            for row in diffs.iter_mut() {
                for slot in row.iter_mut() {
                    *slot = (code % p as u128) as Int;
                    code /= p as u128;
                }
            }
            let key = WeightClassKey { diffs, det_residue: det };
            RestrictedWeight::from_key(params, &key).expect("enumerated key is valid")
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: Int, n: usize, f: usize, lambda: Vec<Vec<Int>>) -> RestrictedWeight {
        RestrictedWeight::new(Params::new(p, n, f).unwrap(), lambda).unwrap()
    }

    #[test]
    fn restriction_is_enforced() {
        let params = Params::new(7, 2, 1).unwrap();
        assert!(RestrictedWeight::new(params, vec![vec![0, 1]]).is_err());
        assert!(RestrictedWeight::new(params, vec![vec![7, 0]]).is_err());
        assert!(RestrictedWeight::new(params, vec![vec![6, 0]]).is_ok());
        assert!(RestrictedWeight::new(params, vec![vec![6, 0], vec![1, 1]]).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let a = w(5, 2, 1, vec![vec![6, 2]]);
        assert!(weight_equivalent(&a, &a).unwrap());
        assert!(weight_equivalent(&a, &w(5, 2, 1, vec![vec![2, -2]])).unwrap());
        assert!(!weight_equivalent(&a, &w(5, 2, 1, vec![vec![5, 1]])).unwrap());
        let other = w(7, 2, 1, vec![vec![6, 2]]);
        assert!(matches!(weight_equivalent(&a, &other), Err(Error::ParamsMismatch(..))));
    }

    #[test]
    fn canonicalize_examples() {
        let c = canonicalize(&w(5, 2, 1, vec![vec![6, 2]]));
        assert_eq!(c.lambda(), &[vec![6, 2]]);
        let c = canonicalize(&w(5, 2, 1, vec![vec![10, 6]]));
        assert_eq!(c.lambda(), &[vec![6, 2]]);
    }

    #[test]
    fn margin_examples() {
        assert_eq!(weight_margin(&w(11, 2, 1, vec![vec![7, 2]])), GenericityMargin(5));
        assert_eq!(weight_margin(&w(13, 3, 1, vec![vec![10, 5, 1]])), GenericityMargin(3));
        assert_eq!(
            weight_margin(&w(13, 2, 2, vec![vec![4, 1], vec![3, 3]])),
            GenericityMargin(0)
        );
    }

    #[test]
    fn regularity() {
        assert!(!is_regular(&w(7, 2, 1, vec![vec![6, 0]])));
        assert!(is_regular(&w(7, 2, 1, vec![vec![5, 0]])));
    }

    #[test]
    fn covering_type_examples() {
        let t = covering_type(&w(11, 2, 1, vec![vec![7, 2]]));
        assert_eq!(t.row_values(), vec![7, 2]);
        let t = covering_type(&w(5, 1, 1, vec![vec![9]]));
        assert_eq!(t.row_values(), vec![1]);
        let t = covering_type(&w(5, 1, 2, vec![vec![3], vec![2]]));
        assert_eq!(t.rows()[0].digits(), &[3, 2]);
        assert_eq!(t.row_values(), vec![13]);
    }

    #[test]
    fn enumeration_counts() {
        for (p, n, f, count) in [(7, 2, 1, 42), (5, 1, 1, 4), (5, 2, 2, 600)] {
            let params = Params::new(p, n, f).unwrap();
            let all: Vec<_> = enumerate_weights(params).collect();
            assert_eq!(all.len(), count);
            assert_eq!(weight_class_count(params), count as u128);
            let keys: std::collections::HashSet<_> = all.iter().map(|w| w.class_key()).collect();
            assert_eq!(keys.len(), count);
            assert!(all.iter().all(|w| canonicalize(w) == *w));
        }
    }
}
