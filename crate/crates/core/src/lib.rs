//! Multiple zeta functions, multiple additive L-functions and multiple
//! Dirichlet L-functions on all of `ℂ^r`.
//!
//! Inside the convergence domain `U_r` values come from certified direct
//! summation; elsewhere from the translation-formula continuation built on
//! truncated upper-triangular operators. The [`poles`] module lists polar
//! hyperplanes and computes residues in closed form.
//!
//! The numeric code is generic over [`Real`]; the aliases below fix `f64`.
//!
//! ```
//! use multizeta::{evaluate, AdditiveTuple64, ContinuationConfig, EvalPoint64};
//!
//! let zeta2 = AdditiveTuple64::trivial(2);
//! let p = EvalPoint64::from_reals(&[-1.0, 4.0]).unwrap();
//! let v = evaluate(&zeta2, &p, &ContinuationConfig::default()).unwrap();
//! assert!(v.abs_error_bound < 1e-9);
//! ```

pub mod characters;
pub mod continuation;
pub mod error;
pub mod numbers;
pub mod operator;
pub mod poles;
pub mod scalar;
pub mod series;
pub mod verify;

pub use characters::{
    dirichlet_decomposition, phi_to_psi, psi_to_phi, AdditiveCharacter, AdditiveTuple, DecompositionTerm,
    DirichletCharacter, DirichletTuple,
};
pub use continuation::{
    continue_eval, dirichlet_via_decomposition, evaluate, evaluate_dirichlet, translation_check, ContinuationConfig,
    TranslationCheck,
};
pub use error::{Error, Result};
pub use numbers::{bernoulli, eulerian_poly, eulerian_zeros, poch, IntPolynomial};
pub use operator::{build_a1, build_a2, build_b1, build_b2, TruncatedOperator};
pub use poles::{
    dirichlet_possible_poles, dirichlet_residue, exact_poles, possible_poles, residue, residue_numeric_check,
    Hyperplane, PolarReport, PoleStatus,
};
pub use scalar::Real;
pub use series::{
    eval_additive_direct, eval_dirichlet_direct, eval_phi_direct, eval_psi_direct, in_u_r, EvalPoint, EvalResult,
};

pub use num_complex::Complex64;

pub type AdditiveCharacter64 = AdditiveCharacter<f64>;
pub type AdditiveTuple64 = AdditiveTuple<f64>;
pub type DirichletCharacter64 = DirichletCharacter<f64>;
pub type DirichletTuple64 = DirichletTuple<f64>;
pub type EvalPoint64 = EvalPoint<f64>;
pub type EvalResult64 = EvalResult<f64>;
pub type TruncatedOperator64 = TruncatedOperator<f64>;
