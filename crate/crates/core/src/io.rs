//! JSON records for weights, representations and inertial types.
//!
//! Field names are fixed: weight `{p, n, f, lambda}`, rep
//! `{p, n, f, summands: [{ni, m}]}`, type `{p, n, f, xi}`.

use serde::{Deserialize, Serialize};

use crate::arith::{DigitVector, Params};
use crate::elimination::InertialType;
use crate::error::Result;
use crate::galois::SemisimpleInertialData;
use crate::weights::{canonicalize, RestrictedWeight};
use crate::Int;

pub const SCHEMA_VERSION: &str = "wtelim/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRecord {
    pub p: Int,
    pub n: usize,
    pub f: usize,
    pub lambda: Vec<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<bool>,
}

impl WeightRecord {
    pub fn to_weight(&self) -> Result<RestrictedWeight> {
        RestrictedWeight::new(Params::new(self.p, self.n, self.f)?, self.lambda.clone())
    }
}

impl From<&RestrictedWeight> for WeightRecord {
    /// Always emits the canonical representative.
    fn from(w: &RestrictedWeight) -> Self {
        let c = canonicalize(w);
        let Params { p, n, f } = c.params();
        WeightRecord { p, n, f, lambda: c.lambda().to_vec(), canonical: Some(true) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandRecord {
    pub ni: usize,
    pub m: Int,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepRecord {
    pub p: Int,
    pub n: usize,
    pub f: usize,
    pub summands: Vec<SummandRecord>,
}

impl RepRecord {
    /// Reduces and orbit-minimizes every `m`.
    pub fn to_rep(&self) -> Result<SemisimpleInertialData> {
        let params = Params::new(self.p, self.n, self.f)?;
        let pairs: Vec<(usize, Int)> = self.summands.iter().map(|s| (s.ni, s.m)).collect();
        SemisimpleInertialData::from_pairs(params, &pairs)
    }
}

impl From<&SemisimpleInertialData> for RepRecord {
    fn from(rho: &SemisimpleInertialData) -> Self {
        let Params { p, n, f } = rho.params();
        RepRecord {
            p,
            n,
            f,
            summands: rho.pairs().into_iter().map(|(ni, m)| SummandRecord { ni, m }).collect(),
        }
    }
}

/// `xi` holds `n` rows of `f` digits each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRecord {
    pub p: Int,
    pub n: usize,
    pub f: usize,
    pub xi: Vec<Vec<Int>>,
}

impl TypeRecord {
    pub fn to_type(&self) -> Result<InertialType> {
        let params = Params::new(self.p, self.n, self.f)?;
        let rows = self
            .xi
            .iter()
            .map(|row| DigitVector::new(row.clone(), self.p))
            .collect::<Result<Vec<_>>>()?;
        InertialType::from_digit_rows(params, rows)
    }
}

impl From<&InertialType> for TypeRecord {
    fn from(t: &InertialType) -> Self {
        let Params { p, n, f } = t.params();
        TypeRecord { p, n, f, xi: t.rows().iter().map(|r| r.digits().to_vec()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_record_is_canonical_on_output() {
        let rec: WeightRecord =
            serde_json::from_str(r#"{"p":5,"n":2,"f":1,"lambda":[[10,6]]}"#).unwrap();
        let w = rec.to_weight().unwrap();
        let out = WeightRecord::from(&w);
        assert_eq!(out.lambda, vec![vec![6, 2]]);
        assert_eq!(
            serde_json::to_string(&out).unwrap(),
            r#"{"p":5,"n":2,"f":1,"lambda":[[6,2]],"canonical":true}"#
        );
    }

    #[test]
    fn rep_record_minimizes_orbits() {
        let rec: RepRecord =
            serde_json::from_str(r#"{"p":7,"n":2,"f":1,"summands":[{"ni":2,"m":37}]}"#).unwrap();
        let rho = rec.to_rep().unwrap();
        assert_eq!(RepRecord::from(&rho).summands, vec![SummandRecord { ni: 2, m: 19 }]);
    }

    #[test]
    fn type_record_validates_digits() {
        let bad = TypeRecord { p: 7, n: 2, f: 1, xi: vec![vec![6], vec![2]] };
        assert!(bad.to_type().is_err());
        let good = TypeRecord { p: 7, n: 2, f: 1, xi: vec![vec![5], vec![2]] };
        assert_eq!(TypeRecord::from(&good.to_type().unwrap()), good);
    }
}
