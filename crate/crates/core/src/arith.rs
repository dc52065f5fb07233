//! Exact base-`p` digit arithmetic modulo `e_d = p^d - 1`.
//!
//! Everything here is generic over [`Scalar`], a signed primitive integer.
//! Overflow is always reported through [`Error::Overflow`]; nothing wraps.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, PrimInt, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Signed primitive integer usable by the digit arithmetic.
pub trait Scalar:
    PrimInt + Signed + Integer + FromPrimitive + Hash + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: PrimInt + Signed + Integer + FromPrimitive + Hash + Debug + Display + Send + Sync + 'static
{
}

fn cast<T: Scalar, U: ToPrimitive + Copy + Debug>(v: U) -> Result<T> {
    T::from_i128(v.to_i128().ok_or(Error::Overflow("cast"))?).ok_or(Error::Overflow("cast"))
}

pub(crate) fn checked_pow<T: Scalar>(base: T, exp: usize) -> Result<T> {
    num_traits::checked_pow(base, exp).ok_or(Error::Overflow("power"))
}

/// `p^d - 1`.
pub fn e_value<T: Scalar>(d: usize, p: T) -> Result<T> {
    if d == 0 {
        return Err(Error::InvalidInput("e_d requires d >= 1".into()));
    }
    Ok(checked_pow(p, d)? - T::one())
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Prime, dimension and unramified degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Params {
    pub p: i64,
    pub n: usize,
    pub f: usize,
}

impl Params {
    /// Validates `p` prime, `n, f >= 1`, and that `n * e_{nf}` (with a factor
    /// `p` of headroom for digit recombination) fits in `i64`.
    pub fn new(p: i64, n: usize, f: usize) -> Result<Self> {
        if p < 2 || !is_prime(p as u64) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if f == 0 {
            return Err(Error::InvalidParams("f must be at least 1".into()));
        }
        let nf = n.checked_mul(f).ok_or(Error::Overflow("n*f"))?;
        let e = e_value::<i64>(nf, p).map_err(|_| {
            Error::InvalidParams(format!("e_{{nf}} for p={p}, n={n}, f={f} exceeds the 64-bit range"))
        })?;
        let n64 = i64::try_from(n).map_err(|_| Error::Overflow("n"))?;
        e.checked_mul(n64)
            .and_then(|v| v.checked_mul(p))
            .ok_or_else(|| {
                Error::InvalidParams(format!(
                    "n*e_{{nf}} for p={p}, n={n}, f={f} exceeds the 64-bit range"
                ))
            })?;
        Ok(Params { p, n, f })
    }

    /// `q = p^f`.
    pub fn q(&self) -> i64 {
        self.p.pow(self.f as u32)
    }

    pub fn e(&self, d: usize) -> i64 {
        // in range by construction for d <= n*f
        e_value(d, self.p).expect("e_d within checked width")
    }

    /// `floor((p-1)/2)`, the largest admissible genericity.
    pub fn max_delta(&self) -> u32 {
        ((self.p - 1) / 2) as u32
    }

    pub(crate) fn ensure_same(&self, other: &Params) -> Result<()> {
        if self != other {
            return Err(Error::ParamsMismatch(*self, *other));
        }
        Ok(())
    }
}

impl Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}, n={}, f={}", self.p, self.n, self.f)
    }
}

/// Base-`p` digits `x_0..x_{d-1}` of a residue in `[0, e_d - 1]`.
///
/// Indexing through [`DigitVector::at`] is cyclic modulo `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitVector<T> {
    digits: Vec<T>,
}

impl<T: Scalar> DigitVector<T> {
    /// Checks each digit is in `[0, p-1]` and not all equal `p-1`.
    pub fn new(digits: Vec<T>, p: T) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::InvalidInput("digit vector must be non-empty".into()));
        }
        let top = p - T::one();
        if let Some(bad) = digits.iter().find(|&&x| x < T::zero() || x > top) {
            return Err(Error::InvalidInput(format!("digit {bad} outside [0, {top}]")));
        }
        if digits.iter().all(|&x| x == top) {
            return Err(Error::InvalidInput(format!("digits are all equal to {top}")));
        }
        Ok(DigitVector { digits })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[T] {
        &self.digits
    }

    /// Cyclic index: `at(j) == at(j + d)`.
    pub fn at(&self, j: isize) -> T {
        let d = self.digits.len() as isize;
        self.digits[j.rem_euclid(d) as usize]
    }

    /// `sum_j x_j p^j`.
    pub fn value(&self, p: T) -> Result<T> {
        let mut acc = T::zero();
        for &x in self.digits.iter().rev() {
            acc = acc
                .checked_mul(&p)
                .and_then(|v| v.checked_add(&x))
                .ok_or(Error::Overflow("digit value"))?;
        }
        Ok(acc)
    }
}

/// Cached radix data for length-`d` expansions: `p`, `e_d`, and `p^0..p^d`.
#[derive(Clone, Debug)]
pub struct Radix<T> {
    p: T,
    e: T,
    powers: Vec<T>,
}

impl<T: Scalar> Radix<T> {
    pub fn new(p: T, d: usize) -> Result<Self> {
        let e = e_value(d, p)?;
        let mut powers = Vec::with_capacity(d + 1);
        let mut acc = T::one();
        powers.push(acc);
        for _ in 0..d {
            acc = acc.checked_mul(&p).ok_or(Error::Overflow("power"))?;
            powers.push(acc);
        }
        Ok(Radix { p, e, powers })
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn d(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn e(&self) -> T {
        self.e
    }

    /// `p^j` for `0 <= j <= d`.
    pub fn pow(&self, j: usize) -> T {
        self.powers[j]
    }

    /// Least non-negative residue modulo `e_d`.
    pub fn reduce(&self, m: T) -> T {
        m.mod_floor(&self.e)
    }

    pub fn digits(&self, m: T) -> DigitVector<T> {
        let mut r = self.reduce(m);
        let mut digits = Vec::with_capacity(self.d());
        for _ in 0..self.d() {
            let (quot, rem) = r.div_rem(&self.p);
            digits.push(rem);
            r = quot;
        }
        DigitVector { digits }
    }

    /// True iff every base-`p` digit of `m mod e_d` is at most `bound`.
    pub fn digits_at_most(&self, m: T, bound: T) -> bool {
        let mut r = self.reduce(m);
        while r > T::zero() {
            let (quot, rem) = r.div_rem(&self.p);
            if rem > bound {
                return false;
            }
            r = quot;
        }
        true
    }

    /// `sum_j alpha_j p^j`, exact.
    pub fn weighted_sum(&self, alpha: &[T]) -> Result<T> {
        let mut acc = T::zero();
        for (j, &a) in alpha.iter().enumerate() {
            let term = a.checked_mul(&self.powers[j]).ok_or(Error::Overflow("weighted sum"))?;
            acc = acc.checked_add(&term).ok_or(Error::Overflow("weighted sum"))?;
        }
        Ok(acc)
    }

    pub fn solve(&self, alpha: &[T]) -> Result<Option<CarrySolution<T>>> {
        let d = self.d();
        if alpha.len() != d {
            return Err(Error::InvalidInput(format!(
                "carry problem has {} coefficients, expected {d}",
                alpha.len()
            )));
        }
        let total = self.weighted_sum(alpha)?;
        let (quotient, rem) = total.div_mod_floor(&self.e);
        if !rem.is_zero() {
            return Ok(None);
        }
        let mut carries = vec![T::zero(); d];
        carries[d - 1] = quotient;
        for j in (1..d).rev() {
            carries[j - 1] = self
                .p
                .checked_mul(&carries[j])
                .and_then(|v| v.checked_sub(&alpha[j]))
                .ok_or(Error::Overflow("carry"))?;
        }
        debug_assert!(alpha[0] == self.p * carries[0] - carries[d - 1]);
        Ok(Some(CarrySolution { carries, quotient }))
    }
}

/// Digits of `m mod e_d` in `[0, e_d - 1]`.
pub fn digits_of<T: Scalar>(m: T, d: usize, p: T) -> Result<DigitVector<T>> {
    Ok(Radix::new(p, d)?.digits(m))
}

/// Carries `t_j` with `alpha_j = t_j p - t_{j-1}` (cyclic), and `quotient = t_{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CarrySolution<T> {
    pub carries: Vec<T>,
    pub quotient: T,
}

/// Solves `alpha_j = t_j p - t_{j-1}` for integers `t_j`.
///
/// A solution exists iff `sum_j alpha_j p^j` is divisible by `e_d`, in which
/// case it is unique and `sum_j alpha_j p^j = t_{d-1} e_d`. `Ok(None)` means
/// the congruence fails.
pub fn padic_solve<T: Scalar>(alpha: &[T], p: T) -> Result<Option<CarrySolution<T>>> {
    if alpha.is_empty() {
        return Err(Error::InvalidInput("carry problem needs d >= 1".into()));
    }
    Radix::new(p, alpha.len())?.solve(alpha)
}

/// Largest `delta` for which a genericity condition holds; `0` means not even
/// 1-generic.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct GenericityMargin(pub u32);

impl GenericityMargin {
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn at_least(self, delta: u32) -> bool {
        self.0 >= delta
    }
}

impl Display for GenericityMargin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(&self.0, f)
    }
}

/// Margin contributed by a single difference: the largest `delta` with
/// `diff mod (p-1)` in `[delta, p-1-delta]`.
pub(crate) fn difference_margin<T: Scalar>(diff: T, p: T) -> u32 {
    let pm1 = p - T::one();
    let r = diff.mod_floor(&pm1);
    let m = r.min(pm1 - r);
    m.to_u32().unwrap_or(u32::MAX)
}

pub(crate) fn margin_cap<T: Scalar>(p: T) -> u32 {
    ((p - T::one()) / (T::one() + T::one())).to_u32().unwrap_or(u32::MAX)
}

/// Genericity margin of a multiset of integers: the largest `delta` in
/// `[0, floor((p-1)/2)]` such that `s_a - s_b mod p-1` lies in
/// `[delta, p-1-delta]` for all `a != b`.
pub fn multiset_margin<T: Scalar>(s: &[T], p: T) -> GenericityMargin {
    let mut margin = margin_cap(p);
    for (a, &x) in s.iter().enumerate() {
        for &y in &s[a + 1..] {
            margin = margin.min(difference_margin(x - y, p));
        }
    }
    GenericityMargin(margin)
}

/// The δ-genericity predicate for a multiset, evaluated directly.
pub fn multiset_is_generic<T: Scalar>(s: &[T], p: T, delta: u32) -> bool {
    let pm1 = p - T::one();
    let Ok(lo) = cast::<T, u32>(delta) else {
        return false;
    };
    let hi = pm1 - lo;
    s.iter().enumerate().all(|(a, &x)| {
        s.iter().enumerate().all(|(b, &y)| {
            if a == b {
                return true;
            }
            let r = (x - y).mod_floor(&pm1);
            r >= lo && r <= hi
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_values() {
        assert_eq!(e_value(1, 7i64).unwrap(), 6);
        assert_eq!(e_value(2, 5i64).unwrap(), 24);
        assert_eq!(e_value(3, 13i64).unwrap(), 2196);
        assert_eq!(e_value(3, 13i32).unwrap(), 2196);
        assert_eq!(e_value(3, 13i128).unwrap(), 2196);
    }

    #[test]
    fn e_value_overflow_is_an_error() {
        assert!(matches!(e_value(40, 7i32), Err(Error::Overflow(_))));
        assert!(e_value(22, 7i64).is_ok());
        assert!(e_value(23, 7i64).is_err());
        assert!(matches!(e_value(0, 7i64), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn digits_examples() {
        assert_eq!(digits_of(48i64, 2, 7).unwrap().digits(), &[0, 0]);
        assert_eq!(digits_of(-1i64, 2, 7).unwrap().digits(), &[5, 6]);
        assert_eq!(digits_of(37i64, 2, 7).unwrap().digits(), &[2, 5]);
    }

    #[test]
    fn digit_vector_rejects_all_top() {
        assert!(DigitVector::new(vec![6i64, 6], 7).is_err());
        assert!(DigitVector::new(vec![7i64, 0], 7).is_err());
        assert!(DigitVector::new(vec![6i64, 5], 7).is_ok());
        let v = DigitVector::new(vec![1i64, 2, 3], 7).unwrap();
        assert_eq!(v.at(3), 1);
        assert_eq!(v.at(-1), 3);
    }

    #[test]
    fn solve_examples() {
        let s = padic_solve(&[0i64, 0, 0], 5).unwrap().unwrap();
        assert_eq!(s.carries, vec![0, 0, 0]);
        assert_eq!(s.quotient, 0);
        let s = padic_solve(&[4i64, 4, 4], 5).unwrap().unwrap();
        assert_eq!(s.carries, vec![1, 1, 1]);
        assert_eq!(s.quotient, 1);
        let s = padic_solve(&[3i64, 9], 5).unwrap().unwrap();
        assert_eq!(s.carries, vec![1, 2]);
        assert_eq!(s.quotient, 2);
        assert_eq!(padic_solve(&[1i64, 0], 5).unwrap(), None);
        assert!(padic_solve::<i64>(&[], 5).is_err());
    }

    #[test]
    fn margin_examples() {
        assert_eq!(multiset_margin(&[3i64, 3], 11), GenericityMargin(0));
        assert_eq!(multiset_margin(&[2i64, 5], 7), GenericityMargin(3));
        assert_eq!(multiset_margin(&[2i64, 9], 13), GenericityMargin(5));
        assert_eq!(multiset_margin(&[4i64], 13), GenericityMargin(6));
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(4, 2, 1).is_err());
        assert!(Params::new(5, 0, 1).is_err());
        assert!(Params::new(5, 2, 0).is_err());
        assert!(Params::new(29, 3, 1).is_ok());
        assert!(Params::new(29, 20, 20).is_err());
        assert_eq!(Params::new(11, 2, 2).unwrap().q(), 121);
    }
}
