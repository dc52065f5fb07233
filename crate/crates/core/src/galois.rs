//! Inertial data of semisimple mod `p` representations of `G_{K_0}`.
//!
//! An irreducible summand of dimension `n_i` restricts to inertia as
//! `ω^m ⊕ ω^{qm} ⊕ ... ⊕ ω^{q^{n_i-1} m}` with `ω` of niveau `n_i f`; it is
//! identified by the orbit-minimal exponent `m`.

use num_integer::Integer;

use crate::arith::{multiset_margin, DigitVector, GenericityMargin, Params, Radix};
use crate::error::{Error, Result};
use crate::Int;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrreducibleSummand {
    ni: usize,
    m: Int,
    x: DigitVector<Int>,
}

impl IrreducibleSummand {
    /// Reduces `m` modulo `e_{ni f}`, replaces it by the minimum of its
    /// `q`-orbit and checks primitivity.
    pub fn new(params: Params, ni: usize, m: Int) -> Result<Self> {
        if ni == 0 || ni > params.n {
            return Err(Error::InvalidInput(format!(
                "summand dimension ni = {ni} outside [1, {}]",
                params.n
            )));
        }
        let radix = Radix::new(params.p, ni * params.f)?;
        let m = orbit_min(params, ni, radix.reduce(m));
        if !is_primitive(m, ni, params) {
            return Err(Error::InvalidInput(format!(
                "exponent m = {m} is not primitive for ni = {ni} (summand would be reducible)"
            )));
        }
        Ok(IrreducibleSummand { ni, m, x: radix.digits(m) })
    }

    pub fn ni(&self) -> usize {
        self.ni
    }

    pub fn m(&self) -> Int {
        self.m
    }

    /// Digits `x_j`, `j = 0..ni f`.
    pub fn digits(&self) -> &DigitVector<Int> {
        &self.x
    }
}

/// Minimum of `{m, qm, q^2 m, ...} mod e_{ni f}`.
pub fn orbit_min(params: Params, ni: usize, m: Int) -> Int {
    frobenius_orbit(params, ni, m).into_iter().min().expect("orbit is non-empty")
}

/// The distinct elements of the `q`-orbit of `m mod e_{ni f}`.
pub fn frobenius_orbit(params: Params, ni: usize, m: Int) -> Vec<Int> {
    let e = params.e(ni * params.f);
    let q = params.q();
    let start = m.mod_floor(&e);
    let mut orbit = vec![start];
    let mut cur = start;
    loop {
        // q*cur < q*e fits: e_{ni f} * p^f <= e_{nf} * p by Params' width check
        cur = (cur as i128 * q as i128 % e as i128) as Int;
        if cur == start {
            break;
        }
        orbit.push(cur);
    }
    orbit
}

/// True iff `(q^ni - 1)/(q^a - 1)` does not divide `m` for every proper
/// divisor `a` of `ni`.
pub fn is_primitive(m: Int, ni: usize, params: Params) -> bool {
    let f = params.f;
    let big = params.e(ni * f);
    (1..ni)
        .filter(|a| ni.is_multiple_of(*a))
        .all(|a| !m.is_multiple_of(&(big / params.e(a * f))))
}

/// A multiset of irreducible summands with dimensions summing to `n`, stored
/// sorted by `(ni, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemisimpleInertialData {
    params: Params,
    summands: Vec<IrreducibleSummand>,
}

impl SemisimpleInertialData {
    pub fn new(params: Params, mut summands: Vec<IrreducibleSummand>) -> Result<Self> {
        let total: usize = summands.iter().map(|s| s.ni).sum();
        if total != params.n {
            return Err(Error::InvalidInput(format!(
                "summand dimensions sum to {total}, expected n = {}",
                params.n
            )));
        }
        summands.sort();
        Ok(SemisimpleInertialData { params, summands })
    }

    /// From `(ni, m)` pairs; each `m` may be non-canonical.
    pub fn from_pairs(params: Params, pairs: &[(usize, Int)]) -> Result<Self> {
        let summands = pairs
            .iter()
            .map(|&(ni, m)| IrreducibleSummand::new(params, ni, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, summands)
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn summands(&self) -> &[IrreducibleSummand] {
        &self.summands
    }

    pub fn pairs(&self) -> Vec<(usize, Int)> {
        self.summands.iter().map(|s| (s.ni, s.m)).collect()
    }
}

/// `S_j = ⋃_i {x_j^i, x_{j+f}^i, ..., x_{j+(ni-1)f}^i}`.
pub fn s_multiset(rho: &SemisimpleInertialData, j: usize) -> Result<Vec<Int>> {
    let f = rho.params.f;
    if j >= f {
        return Err(Error::InvalidInput(format!("embedding index {j} outside [0, {})", f)));
    }
    Ok(rho
        .summands
        .iter()
        .flat_map(|s| (0..s.ni).map(move |k| s.x.at((j + k * f) as isize)))
        .collect())
}

/// Minimum over `j` of the multiset margin of `S_j`.
pub fn rep_margin(rho: &SemisimpleInertialData) -> GenericityMargin {
    (0..rho.params.f)
        .map(|j| multiset_margin(&s_multiset(rho, j).expect("j in range"), rho.params.p))
        .min()
        .expect("f >= 1")
}

/// Partitions of `n` into non-increasing parts.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Orbit-minimal primitive exponents for summands of dimension `ni`.
pub fn primitive_orbit_reps(params: Params, ni: usize) -> Vec<Int> {
    let e = params.e(ni * params.f);
    (0..e)
        .filter(|&m| is_primitive(m, ni, params) && orbit_min(params, ni, m) == m)
        .collect()
}

/// Multisets of size `k` drawn from `0..len`, as non-decreasing index tuples.
fn multisets(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(len: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            go(len, k, i, cur, out);
            cur.pop();
        }
    }
    go(len, k, 0, &mut cur, &mut out);
    out
}

/// Isomorphism classes of semisimple inertial data for one partition of `n`.
pub fn enumerate_partition(params: Params, partition: &[usize]) -> Vec<SemisimpleInertialData> {
    let mut sizes: Vec<(usize, usize)> = Vec::new();
    for &part in partition {
        match sizes.iter_mut().find(|(size, _)| *size == part) {
            Some((_, mult)) => *mult += 1,
            None => sizes.push((part, 1)),
        }
    }
    let mut acc: Vec<Vec<IrreducibleSummand>> = vec![Vec::new()];
    for (size, mult) in sizes {
        let reps: Vec<IrreducibleSummand> = primitive_orbit_reps(params, size)
            .into_iter()
            .map(|m| IrreducibleSummand::new(params, size, m).expect("primitive orbit rep"))
            .collect();
        let choices = multisets(reps.len(), mult);
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                let reps = &reps;
                choices.iter().map(move |choice| {
                    let mut next = prefix.clone();
                    next.extend(choice.iter().map(|&i| reps[i].clone()));
                    next
                })
            })
            .collect();
    }
    acc.into_iter()
        .map(|summands| SemisimpleInertialData::new(params, summands).expect("dimensions sum to n"))
        .collect()
}

/// Every isomorphism class of `n`-dimensional semisimple inertial data,
/// partition-major.
pub fn enumerate_semisimple(params: Params) -> impl Iterator<Item = SemisimpleInertialData> {
    partitions(params.n)
        .into_iter()
        .flat_map(move |part| enumerate_partition(params, &part))
}

/// Data with `rep_margin >= delta`; `delta` must lie in `[1, floor((p-1)/2)]`.
pub fn filter_generic<I>(
    stream: I,
    params: Params,
    delta: u32,
) -> Result<impl Iterator<Item = SemisimpleInertialData>>
where
    I: IntoIterator<Item = SemisimpleInertialData>,
{
    check_delta(params, delta)?;
    Ok(stream.into_iter().filter(move |rho| rep_margin(rho).at_least(delta)))
}

pub(crate) fn check_delta(params: Params, delta: u32) -> Result<()> {
    if delta == 0 || delta > params.max_delta() {
        return Err(Error::InvalidInput(format!(
            "delta = {delta} outside [1, {}] for p = {}",
            params.max_delta(),
            params.p
        )));
    }
    Ok(())
}
