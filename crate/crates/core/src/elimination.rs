//! Reduction exponents of potentially semistable lifts and the weight
//! eliminator built on them.
//!
//! For an inertial type `⊕_s ω_f^{ξ_s}` and an irreducible summand of
//! dimension `ni` (so niveau `d = ni f`), the possible reduction exponents
//! are the θ-set
//!
//! ```text
//! { Σ_{j<d} (ξ_{j mod f}^{s(j)} + a_j) p^j mod e_d : s(j), a_j ∈ [0, n-1] }.
//! ```
//!
//! [`theta_set_raw`] rebuilds exponents from rank-1 descent data
//! `(κ_j, r_j)` instead; it is always contained in the closed form and is
//! kept as an independent route.
//!
//! Membership in the closed form is decided without materializing it: for a
//! fixed `s`, `R = m - Σ ξ^{s(j)} p^j mod e_d` must equal `Σ a_j p^j`. When
//! `n - 1 < p - 1` that sum is below `e_d`, so it is the base-`p` expansion of
//! `R` and membership holds iff every digit of `R` is at most `n - 1`.

use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;

use crate::arith::{checked_pow, CarrySolution, DigitVector, GenericityMargin, Params, Radix};
use crate::error::{Error, Result};
use crate::galois::{IrreducibleSummand, SemisimpleInertialData};
use crate::weights::{covering_type, enumerate_weights, weight_margin, RestrictedWeight, WeightClassKey};
use crate::{Int, WideInt};

/// `⊕_{s<n} ω_f^{ξ_s}`, row `s` holding the `f` digits of `ξ_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InertialType {
    params: Params,
    xi: Vec<DigitVector<Int>>,
}

impl InertialType {
    pub fn from_digit_rows(params: Params, xi: Vec<DigitVector<Int>>) -> Result<Self> {
        if xi.len() != params.n {
            return Err(Error::InvalidInput(format!(
                "type has {} rows, expected n = {}",
                xi.len(),
                params.n
            )));
        }
        for (s, row) in xi.iter().enumerate() {
            if row.len() != params.f {
                return Err(Error::InvalidInput(format!(
                    "type row {s} has {} digits, expected f = {}",
                    row.len(),
                    params.f
                )));
            }
            // re-validate digit range against this p
            DigitVector::new(row.digits().to_vec(), params.p)?;
        }
        Ok(InertialType { params, xi })
    }

    /// Rows from exponents `ξ_s`, reduced modulo `e_f`.
    pub fn from_values(params: Params, values: &[Int]) -> Result<Self> {
        let radix = Radix::new(params.p, params.f)?;
        Self::from_digit_rows(params, values.iter().map(|&v| radix.digits(v)).collect())
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn rows(&self) -> &[DigitVector<Int>] {
        &self.xi
    }

    /// `ξ_s = Σ_j ξ_j^s p^j`.
    pub fn row_values(&self) -> Vec<Int> {
        self.xi
            .iter()
            .map(|row| row.value(self.params.p).expect("row value below e_f"))
            .collect()
    }

    /// Column `j`: the multiset `{ξ_j^s}_s`.
    pub fn column(&self, j: usize) -> Vec<Int> {
        self.xi.iter().map(|row| row.digits()[j]).collect()
    }

    /// Digit `ξ_{j mod f}^s`.
    fn digit(&self, s: usize, j: usize) -> Int {
        self.xi[s].digits()[j % self.params.f]
    }
}

/// Every inertial type for `params`, i.e. all `n`-tuples of exponents in
/// `[0, e_f)`.
pub fn enumerate_types(params: Params) -> impl Iterator<Item = InertialType> {
    let e_f = params.e(params.f);
    let total = (e_f as u128).pow(params.n as u32);
    (0..total).map(move |mut code| {
        let values: Vec<Int> = (0..params.n)
            .map(|_| {
                let v = (code % e_f as u128) as Int;
                code /= e_f as u128;
                v
            })
            .collect();
        InertialType::from_values(params, &values).expect("values below e_f")
    })
}

/// Set of exponents modulo `e_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSet {
    pub d: usize,
    pub thetas: BTreeSet<Int>,
}

impl ThetaSet {
    pub fn contains(&self, m: Int) -> bool {
        self.thetas.contains(&m)
    }

    pub fn is_subset(&self, other: &ThetaSet) -> bool {
        self.d == other.d && self.thetas.is_subset(&other.thetas)
    }
}

/// Rank-1 descent data: `κ_j` and `r_j ∈ [0, (n-1) e_d]` with
/// `r_j ≡ p^{d-1} κ_{j+1} - κ_j (mod e_d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1Descent {
    pub kappa: Vec<Int>,
    pub r: Vec<Int>,
}

impl Rank1Descent {
    pub fn validate(&self, p: Int, n: usize) -> Result<()> {
        let d = self.kappa.len();
        if d == 0 || self.r.len() != d {
            return Err(Error::InconsistentDescent("kappa and r must have equal length d >= 1".into()));
        }
        let radix = Radix::new(p, d)?;
        let e = radix.e();
        let top = (n as Int - 1) * e;
        for j in 0..d {
            if !(0..=top).contains(&self.r[j]) {
                return Err(Error::InconsistentDescent(format!("r_{j} = {} outside [0, {top}]", self.r[j])));
            }
            let want = (radix.pow(d - 1) as WideInt * self.kappa[(j + 1) % d] as WideInt
                - self.kappa[j] as WideInt)
                .mod_floor(&(e as WideInt));
            if radix.reduce(self.r[j]) as WideInt != want {
                return Err(Error::InconsistentDescent(format!("r_{j} is in the wrong residue class")));
            }
        }
        Ok(())
    }

    pub fn exponent(&self, p: Int) -> Result<Int> {
        breuil_exponent(self.kappa[0], &self.r, p)
    }
}

/// `κ_0 + (Σ_j r_j p^{d-j}) / e_d mod e_d`, with the division exact.
pub fn breuil_exponent(kappa0: Int, r: &[Int], p: Int) -> Result<Int> {
    let d = r.len();
    if d == 0 {
        return Err(Error::InconsistentDescent("empty r".into()));
    }
    let p_wide = p as WideInt;
    let e = checked_pow(p_wide, d)? - 1;
    let mut numerator: WideInt = 0;
    for (j, &rj) in r.iter().enumerate() {
        let term = (rj as WideInt)
            .checked_mul(checked_pow(p_wide, d - j)?)
            .ok_or(Error::Overflow("breuil exponent"))?;
        numerator = numerator.checked_add(term).ok_or(Error::Overflow("breuil exponent"))?;
    }
    let (quot, rem) = numerator.div_mod_floor(&e);
    if rem != 0 {
        return Err(Error::InconsistentDescent(format!(
            "numerator {numerator} is not divisible by e_{d} = {e}"
        )));
    }
    Ok((kappa0 as WideInt + quot).mod_floor(&e) as Int)
}

/// Calls `visit` with every map `[0, d) -> [0, n)`.
fn for_each_map(d: usize, n: usize, mut visit: impl FnMut(&[usize])) {
    let mut s = vec![0usize; d];
    loop {
        visit(&s);
        let mut j = 0;
        loop {
            if j == d {
                return;
            }
            s[j] += 1;
            if s[j] < n {
                break;
            }
            s[j] = 0;
            j += 1;
        }
    }
}

fn check_niveau(params: Params, ni: usize) -> Result<usize> {
    if ni == 0 {
        return Err(Error::InvalidInput("ni must be at least 1".into()));
    }
    Ok(ni * params.f)
}

/// Exponents of rank-1 descent data compatible with the type, for a summand
/// of dimension `ni`.
pub fn theta_set_raw(xi: &InertialType, ni: usize) -> Result<ThetaSet> {
    let params = xi.params;
    let Params { p, n, .. } = params;
    let d = check_niveau(params, ni)?;
    let radix = Radix::new(p, d)?;
    let e = radix.e();
    let q = params.q();
    let geometric = radix.reduce((0..ni).map(|k| q.pow(k as u32)).sum::<Int>());
    let values = xi.row_values();
    let top = (n as Int - 1) * e;
    let mut thetas = BTreeSet::new();
    let mut failure = None;
    for_each_map(d, n, |s| {
        if failure.is_some() {
            return;
        }
        let kappa: Vec<Int> = (0..d)
            .map(|j| {
                let base = (geometric as WideInt * values[s[j]] as WideInt).mod_floor(&(e as WideInt));
                (base * radix.pow(j) as WideInt).mod_floor(&(e as WideInt)) as Int
            })
            .collect();
        let choices: Vec<Vec<Int>> = (0..d)
            .map(|j| {
                let class = ((radix.pow(d - 1) as WideInt * kappa[(j + 1) % d] as WideInt
                    - kappa[j] as WideInt)
                    .mod_floor(&(e as WideInt))) as Int;
                (0..n as Int).map(|k| class + k * e).filter(|&r| r <= top).collect()
            })
            .collect();
        let mut pick = vec![0usize; d];
        loop {
            let r: Vec<Int> = (0..d).map(|j| choices[j][pick[j]]).collect();
            match breuil_exponent(kappa[0], &r, p) {
                Ok(theta) => {
                    thetas.insert(theta);
                }
                Err(err) => {
                    failure = Some(err);
                    return;
                }
            }
            let mut j = 0;
            loop {
                if j == d {
                    return;
                }
                pick[j] += 1;
                if pick[j] < choices[j].len() {
                    break;
                }
                pick[j] = 0;
                j += 1;
            }
        }
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(ThetaSet { d, thetas }),
    }
}

/// Closed-form θ-set for a summand of dimension `ni`.
pub fn theta_set_final(xi: &InertialType, ni: usize) -> Result<ThetaSet> {
    let params = xi.params;
    let n = params.n;
    let d = check_niveau(params, ni)?;
    let radix = Radix::new(params.p, d)?;
    let mut thetas = BTreeSet::new();
    for_each_map(d, n, |s| {
        let base: Int = (0..d).map(|j| xi.digit(s[j], j) * radix.pow(j)).sum();
        for_each_map(d, n, |a| {
            let shift: Int = (0..d).map(|j| a[j] as Int * radix.pow(j)).sum();
            thetas.insert(radix.reduce(base + shift));
        });
    });
    Ok(ThetaSet { d, thetas })
}

/// Depth-first search over `s`-maps; calls `accept(s, residue)` for every map
/// whose residue `m - Σ ξ^{s(j)} p^j mod e_d` has all digits `<= n - 1`.
/// Stops early when `accept` returns `true`.
fn search_maps(
    radix: &Radix<Int>,
    xi: &InertialType,
    m: Int,
    accept: &mut impl FnMut(&[usize], Int) -> bool,
) -> bool {
    fn go(
        j: usize,
        partial: Int,
        s: &mut Vec<usize>,
        radix: &Radix<Int>,
        xi: &InertialType,
        m: Int,
        accept: &mut impl FnMut(&[usize], Int) -> bool,
    ) -> bool {
        let d = radix.d();
        let n = xi.params.n;
        if j == d {
            let residue = radix.reduce(m - partial);
            if digits_bounded(radix, residue, n) {
                return accept(s, residue);
            }
            return false;
        }
        for choice in 0..n {
            s.push(choice);
            let next = partial + xi.digit(choice, j) * radix.pow(j);
            let stop = go(j + 1, next, s, radix, xi, m, accept);
            s.pop();
            if stop {
                return true;
            }
        }
        false
    }
    let mut s = Vec::with_capacity(radix.d());
    go(0, 0, &mut s, radix, xi, m, accept)
}

/// `residue ≡ Σ a_j p^j` with all `a_j ∈ [0, n-1]`.
fn digits_bounded(radix: &Radix<Int>, residue: Int, n: usize) -> bool {
    let bound = n as Int - 1;
    if bound < radix.p() - 1 {
        return radix.digits_at_most(residue, bound);
    }
    // every digit vector is admissible except possibly all p-1, and that sum
    // is e_d ≡ 0
    true
}

fn compatible_in(radix: &Radix<Int>, m: Int, xi: &InertialType) -> bool {
    search_maps(radix, xi, m, &mut |_, _| true)
}

/// `m ∈ theta_set_final(xi, ni)`, decided by the digit test.
pub fn is_compatible(m: Int, xi: &InertialType, ni: usize) -> Result<bool> {
    let d = check_niveau(xi.params, ni)?;
    let radix = Radix::new(xi.params.p, d)?;
    Ok(compatible_in(&radix, radix.reduce(m), xi))
}

/// Every summand's exponent is compatible with the type.
pub fn rep_compatible(rho: &SemisimpleInertialData, xi: &InertialType) -> Result<bool> {
    rho.params().ensure_same(&xi.params)?;
    for summand in rho.summands() {
        if !is_compatible(summand.m(), xi, summand.ni())? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A choice of `s` and `a` realizing `m` in the closed form, together with the
/// carries `t_j` of `α_j = ξ_j^{s(j)} + a_j - x_j = t_j p - t_{j-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityWitness {
    pub s: Vec<usize>,
    pub a: Vec<Int>,
    pub carries: CarrySolution<Int>,
}

/// All witnesses for one summand.
pub fn compatibility_witnesses(
    summand: &IrreducibleSummand,
    xi: &InertialType,
) -> Result<Vec<CompatibilityWitness>> {
    let d = check_niveau(xi.params, summand.ni())?;
    let radix = Radix::new(xi.params.p, d)?;
    let x = summand.digits();
    let mut found = Vec::new();
    let mut failure = None;
    search_maps(&radix, xi, summand.m(), &mut |s, residue| {
        let a = radix.digits(residue).digits().to_vec();
        let alpha: Vec<Int> = (0..d).map(|j| xi.digit(s[j], j) + a[j] - x.digits()[j]).collect();
        match radix.solve(&alpha) {
            Ok(Some(carries)) => found.push(CompatibilityWitness { s: s.to_vec(), a, carries }),
            Ok(None) => {
                failure = Some(Error::InconsistentDescent(format!(
                    "witness s = {s:?} has no carry solution"
                )))
            }
            Err(err) => failure = Some(err),
        }
        failure.is_some()
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(found),
    }
}

/// A canonical weight together with its covering type and margin.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub weight: RestrictedWeight,
    pub key: WeightClassKey,
    pub covering: InertialType,
    pub margin: GenericityMargin,
}

/// All weight classes for `params` with precomputed covering types.
#[derive(Clone, Debug)]
pub struct WeightCatalog {
    params: Params,
    entries: Vec<CatalogEntry>,
}

impl WeightCatalog {
    pub fn new(params: Params) -> Self {
        let weights: Vec<RestrictedWeight> = enumerate_weights(params).collect();
        let entries = weights
            .into_par_iter()
            .map(|weight| CatalogEntry {
                key: weight.class_key(),
                covering: covering_type(&weight),
                margin: weight_margin(&weight),
                weight,
            })
            .collect();
        WeightCatalog { params, entries }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Indices of entries whose covering type is compatible with `rho`.
    pub fn survivors(&self, rho: &SemisimpleInertialData) -> Result<Vec<usize>> {
        self.params.ensure_same(&rho.params())?;
        let summands: Vec<(Radix<Int>, Int)> = rho
            .summands()
            .iter()
            .map(|s| Ok((Radix::new(self.params.p, s.ni() * self.params.f)?, s.m())))
            .collect::<Result<_>>()?;
        Ok(self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, entry)| {
                summands.iter().all(|(radix, m)| compatible_in(radix, *m, &entry.covering))
            })
            .map(|(idx, _)| idx)
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survivor {
    pub weight: RestrictedWeight,
    pub key: WeightClassKey,
    pub margin: GenericityMargin,
}

/// Weights not ruled out for a representation.
#[derive(Clone, Debug)]
pub struct EliminationReport {
    pub rep: SemisimpleInertialData,
    pub weight_classes: usize,
    /// Sorted by `(margin, class key)`.
    pub survivors: Vec<Survivor>,
}

impl EliminationReport {
    pub fn min_margin(&self) -> Option<GenericityMargin> {
        self.survivors.first().map(|s| s.margin)
    }
}

/// Every canonical weight whose covering type is compatible with `rho`.
pub fn eliminate(rho: &SemisimpleInertialData) -> Result<EliminationReport> {
    eliminate_with(&WeightCatalog::new(rho.params()), rho)
}

pub fn eliminate_with(catalog: &WeightCatalog, rho: &SemisimpleInertialData) -> Result<EliminationReport> {
    let mut survivors: Vec<Survivor> = catalog
        .survivors(rho)?
        .into_iter()
        .map(|idx| {
            let entry = &catalog.entries[idx];
            Survivor { weight: entry.weight.clone(), key: entry.key.clone(), margin: entry.margin }
        })
        .collect();
    survivors.sort_by(|a, b| (a.margin, &a.key).cmp(&(b.margin, &b.key)));
    Ok(EliminationReport { rep: rho.clone(), weight_classes: catalog.len(), survivors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::SemisimpleInertialData;

    fn ty(p: Int, n: usize, f: usize, values: &[Int]) -> InertialType {
        InertialType::from_values(Params::new(p, n, f).unwrap(), values).unwrap()
    }

    #[test]
    fn breuil_exponent_examples() {
        assert_eq!(breuil_exponent(4, &[0, 0, 0], 5).unwrap(), 4);
        assert_eq!(breuil_exponent(3, &[12], 7).unwrap(), 5);
        assert_eq!(breuil_exponent(0, &[24, 24], 5).unwrap(), 6);
        assert!(matches!(breuil_exponent(0, &[1], 7), Err(Error::InconsistentDescent(_))));
    }

    #[test]
    fn theta_sets_small() {
        let t = ty(7, 2, 1, &[2, 5]);
        let raw = theta_set_raw(&t, 1).unwrap();
        let fin = theta_set_final(&t, 1).unwrap();
        assert_eq!(raw.thetas, BTreeSet::from([0, 2, 3, 5]));
        assert_eq!(fin.thetas, BTreeSet::from([0, 2, 3, 5]));
        // the r_j range forces b = (0, 1) for s = (0, 1), so 37 is reached
        // only by the closed form
        let raw2 = theta_set_raw(&t, 2).unwrap();
        assert_eq!(raw2.thetas, BTreeSet::from([0, 16, 17, 20, 23, 24, 40, 41, 44, 47]));
        assert!(!raw2.contains(37));
        let fin2 = theta_set_final(&t, 2).unwrap();
        assert!(fin2.contains(37));
        assert!(raw2.is_subset(&fin2));
    }

    #[test]
    fn theta_sets_rank_one() {
        for f in 1..=2 {
            let t = ty(5, 1, f, &[7]);
            for ni in 1..=2 {
                let raw = theta_set_raw(&t, ni).unwrap();
                let fin = theta_set_final(&t, ni).unwrap();
                assert_eq!(raw, fin);
                assert_eq!(raw.thetas.len(), 1);
            }
        }
    }

    #[test]
    fn compatibility_examples() {
        assert!(is_compatible(37, &ty(7, 2, 1, &[2, 5]), 2).unwrap());
        assert!(!is_compatible(3, &ty(7, 2, 1, &[0, 5]), 1).unwrap());
        assert!(is_compatible(9, &ty(11, 1, 2, &[9]), 1).unwrap());
        assert!(!is_compatible(10, &ty(11, 1, 2, &[9]), 1).unwrap());
    }

    #[test]
    fn rep_compatibility_examples() {
        let p7 = Params::new(7, 2, 1).unwrap();
        let irr = SemisimpleInertialData::from_pairs(p7, &[(2, 37)]).unwrap();
        assert!(rep_compatible(&irr, &ty(7, 2, 1, &[2, 5])).unwrap());
        let split = SemisimpleInertialData::from_pairs(p7, &[(1, 3), (1, 0)]).unwrap();
        assert!(!rep_compatible(&split, &ty(7, 2, 1, &[0, 5])).unwrap());
        assert!(matches!(
            rep_compatible(&split, &ty(11, 2, 1, &[0, 5])),
            Err(Error::ParamsMismatch(..))
        ));
    }

    #[test]
    fn descent_validation() {
        let good = Rank1Descent { kappa: vec![3], r: vec![6] };
        good.validate(7, 2).unwrap();
        assert_eq!(good.exponent(7).unwrap(), 4);
        let bad = Rank1Descent { kappa: vec![3], r: vec![5] };
        assert!(bad.validate(7, 2).is_err());
        let big = Rank1Descent { kappa: vec![3], r: vec![12] };
        assert!(big.validate(7, 2).is_err());
    }

    #[test]
    fn rank_one_elimination() {
        let params = Params::new(7, 1, 1).unwrap();
        for m in 0..6 {
            let rho = SemisimpleInertialData::from_pairs(params, &[(1, m)]).unwrap();
            let report = eliminate(&rho).unwrap();
            assert_eq!(report.survivors.len(), 1);
            assert_eq!(report.survivors[0].weight.lambda()[0][0].rem_euclid(6), m);
        }
    }

    #[test]
    fn witnesses_carry_the_congruence() {
        let params = Params::new(13, 2, 1).unwrap();
        let rho = SemisimpleInertialData::from_pairs(params, &[(2, 2 + 9 * 13)]).unwrap();
        let t = InertialType::from_values(params, &[2, 9]).unwrap();
        let witnesses = compatibility_witnesses(&rho.summands()[0], &t).unwrap();
        assert!(!witnesses.is_empty());
        for w in witnesses {
            assert_eq!(w.carries.carries.len(), 2);
        }
    }
}
