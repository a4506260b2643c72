//! Numerical engine for exponential factorization of holomorphic
//! `SL(2, C)` matrix functions on circular planar domains.
//!
//! Given a matrix function `A` with entries holomorphic on a closed disk or a
//! disk with circular holes, `det A = 1`, the engine produces trace-zero
//! holomorphic matrix functions `E`, `F` with
//!
//! ```text
//!     A = exp(E) · exp(F)
//! ```
//!
//! together with machine-checkable certificates: a pointwise residual for the
//! product, holomorphy certificates for every computed entry (boundary Cauchy
//! reproduction), and trace bounds.
//!
//! The pipeline mirrors the constructive argument it implements:
//!
//! 1. reduce `A` to a form whose lower-left entry is not identically zero
//!    (`factorize::classify_and_reduce`),
//! 2. solve the stable-rank-one problem `a + g·c = e^h` (`bass`), splitting
//!    principal parts across interior zeros of `c` either exactly
//!    (Mittag-Leffler, `funcrep::contour_coeffs`) or via a dbar correction
//!    (`dbar::cousin_split`),
//! 3. shift by a scalar `delta` so the remaining factor `B` admits a
//!    single-valued eigenvalue branch (`factorize::choose_delta`),
//! 4. take the spectral-projection logarithm of `B` (`logm`),
//! 5. undo the conjugations.
//!
//! A GL(2) front end (`factorize::factorize_gl2`) normalizes nonvanishing,
//! null-homotopic determinants through a global logarithm.

pub mod bass;
pub mod consts;
pub mod dbar;
pub mod domain;
pub mod error;
pub mod factorize;
pub mod funcrep;
pub mod io;
pub mod logm;
pub mod mat2;

pub use domain::{Circle, Domain};
pub use error::{Error, Result};
pub use factorize::{
    classify_and_reduce, factorize_gl2, factorize_sl2, random_instance, verify, CaseReduction,
    CaseTag, FactorizationResult, FactorizeOptions, Gl2Result, VerifyReport, ZeroPlan,
};
pub use funcrep::{GridFn, Polynomial, RationalFn, ZeroSet};
pub use mat2::{Mat2, MatFn};

/// Scalar type used throughout: double-precision complex numbers.
pub type C = num_complex::Complex64;
