//! Weight-elimination combinatorics for mod `p` Galois representations of
//! unramified `p`-adic fields.
//!
//! * [`arith`]: base-`p` digits modulo `p^d - 1`, carry solving, genericity
//!   margins; generic over the signed integer type.
//! * [`weights`]: Serre weights, canonical classes, covering types.
//! * [`galois`]: semisimple inertial data and its digit multisets.
//! * [`elimination`]: θ-sets, compatibility, the eliminator.
//! * [`verify`]: exhaustive/sampled checks of the genericity bound and the
//!   survivor-margin survey.

pub mod arith;
pub mod elimination;
pub mod error;
pub mod galois;
pub mod io;
pub mod oracle;
pub mod selftest;
pub mod verify;
pub mod weights;

/// Integer type of the domain layer.
pub type Int = i64;
/// Width used for intermediate products that can exceed [`Int`].
pub type WideInt = i128;

pub type Digits = arith::DigitVector<Int>;
pub type Carries = arith::CarrySolution<Int>;

pub use arith::{digits_of, e_value, multiset_margin, padic_solve, GenericityMargin, Params};
pub use elimination::{
    breuil_exponent, eliminate, is_compatible, rep_compatible, theta_set_final, theta_set_raw,
    EliminationReport, InertialType, ThetaSet, WeightCatalog,
};
pub use error::{Error, Result};
pub use galois::{
    enumerate_semisimple, filter_generic, is_primitive, rep_margin, s_multiset,
    SemisimpleInertialData,
};
pub use verify::{survey, verify_theorem, Mode, Sampling, VerdictReport, VerifyConfig};
pub use weights::{
    canonicalize, covering_type, enumerate_weights, is_regular, weight_equivalent, weight_margin,
    RestrictedWeight, WeightClassKey,
};
