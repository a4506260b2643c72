//! Error taxonomy shared by every module.
//!
//! Variants split into two classes: rejections of the *input* (malformed
//! domains, poles or zeros where the construction forbids them, topological
//! obstructions) and failures of a *mathematical gate* (an algorithm ran but
//! could not certify its output). The CLI maps the classes to exit codes 1
//! and 2 respectively.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    // ---- domain construction ----
    #[error("hole {index} is not strictly inside the outer circle")]
    HoleOutsideOuter { index: usize },
    #[error("holes {first} and {second} overlap or touch")]
    OverlappingHoles { first: usize, second: usize },
    #[error("circle {index} has non-positive or degenerate radius {radius}")]
    DegenerateRadius { index: usize, radius: f64 },

    // ---- function representations ----
    #[error("denominator vanishes at or near {location} inside the closed domain")]
    PoleInDomain { location: Complex64 },
    #[error("root finder failed to converge after {iters} iterations (update {update:.3e})")]
    NoConvergence { iters: usize, update: f64 },
    #[error("zero at {location} lies within the boundary zone (|membership| = {distance:.3e})")]
    BoundaryZero { location: Complex64, distance: f64 },
    #[error("function is identically zero")]
    IdenticallyZero,
    #[error("evaluation point {location} is within {margin:.3e} of the boundary")]
    TooCloseToBoundary { location: Complex64, margin: f64 },
    #[error("boundary modulus ratio {ratio:.3e} too small: function effectively vanishes on the boundary")]
    VanishesOnBoundary { ratio: f64 },
    #[error("argument increment {step:.3} rad between adjacent boundary samples exceeds pi/2")]
    Undersampled { step: f64 },
    #[error("winding number {winding} on boundary component {component} obstructs a global logarithm")]
    NonzeroWinding { component: usize, winding: i64 },
    #[error("logarithm continuation failed to close up (defect {defect:.3e})")]
    LoopClosureFailure { defect: f64 },
    #[error("function vanishes (|f| = {modulus:.3e}) at grid point {location}; no logarithm")]
    VanishingValue { location: Complex64, modulus: f64 },

    // ---- matrices ----
    #[error("matrix is not trace-zero: |tr| = {trace:.3e} exceeds {tol:.3e}")]
    NotTraceZero { trace: f64, tol: f64 },
    #[error("conjugator is numerically singular: |det| = {det:.3e}")]
    SingularConjugator { det: f64 },

    // ---- dbar ----
    #[error("cutoff radii ({r_inner}, {r_outer}) are not 0 < r_inner < r_outer")]
    BadRadii { r_inner: f64, r_outer: f64 },
    #[error("dbar support annulus at {center} touches the domain boundary")]
    SupportTouchesBoundary { center: Complex64 },
    #[error("Cousin halves disagree on the overlap: mismatch {mismatch:.3e} > {tol:.3e}")]
    OverlapMismatch { mismatch: f64, tol: f64 },

    // ---- bass ----
    #[error("|a| + |b| drops to {value:.3e} of scale on the grid: common zero")]
    CommonZero { value: f64 },
    #[error("working radius around zero {location} collapsed after {halvings} halvings")]
    RadiusCollapse { location: Complex64, halvings: usize },
    #[error("{what} residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ResidualTooLarge { what: &'static str, residual: f64, tol: f64 },

    // ---- logm ----
    #[error("eigenvalue gap |e^l - e^-l| = {gap:.3e} below {min:.3e}: projection undefined")]
    DegenerateEigenvalues { gap: f64, min: f64 },
    #[error("e^lambda is not an eigenvalue: |det(e^l I - B)| = {residual:.3e} > {tol:.3e}")]
    NotAnEigenvalue { residual: f64, tol: f64 },

    // ---- factorize ----
    #[error("det A is not identically 1 (coefficient defect {defect:.3e})")]
    NotUnimodular { defect: f64 },
    #[error("no delta in 1..=64 satisfies both margin conditions on all grid points")]
    DeltaExhausted,
    #[error("Re(theta_plus) dips to {min_re:.3e}: no global branch for the eigenvalue log")]
    ThetaBranchInvalid { min_re: f64 },
    #[error("determinant winds {winding} times around 0 on component {component}: not null-homotopic")]
    NotNullHomotopic { component: usize, winding: i64 },
    #[error("determinant vanishes or nearly vanishes (min modulus {min:.3e})")]
    VanishingDeterminant { min: f64 },
    #[error("lower-left entry has interior zeros but only grid values are available")]
    GridOnlyBassUnsupported,

    // ---- generic ----
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// CLI exit-code classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input itself is rejected (exit code 1).
    Input,
    /// The computation ran but failed a mathematical gate (exit code 2).
    MathGate,
}

impl Error {
    /// Stable machine-readable tag (used in manifests).
    pub fn tag(&self) -> &'static str {
        use Error::*;
        match self {
            HoleOutsideOuter { .. } => "HoleOutsideOuter",
            OverlappingHoles { .. } => "OverlappingHoles",
            DegenerateRadius { .. } => "DegenerateRadius",
            PoleInDomain { .. } => "PoleInDomain",
            NoConvergence { .. } => "NoConvergence",
            BoundaryZero { .. } => "BoundaryZero",
            IdenticallyZero => "IdenticallyZero",
            TooCloseToBoundary { .. } => "TooCloseToBoundary",
            VanishesOnBoundary { .. } => "VanishesOnBoundary",
            Undersampled { .. } => "Undersampled",
            NonzeroWinding { .. } => "NonzeroWinding",
            LoopClosureFailure { .. } => "LoopClosureFailure",
            VanishingValue { .. } => "VanishingValue",
            NotTraceZero { .. } => "NotTraceZero",
            SingularConjugator { .. } => "SingularConjugator",
            BadRadii { .. } => "BadRadii",
            SupportTouchesBoundary { .. } => "SupportTouchesBoundary",
            OverlapMismatch { .. } => "OverlapMismatch",
            CommonZero { .. } => "CommonZero",
            RadiusCollapse { .. } => "RadiusCollapse",
            ResidualTooLarge { .. } => "ResidualTooLarge",
            DegenerateEigenvalues { .. } => "DegenerateEigenvalues",
            NotAnEigenvalue { .. } => "NotAnEigenvalue",
            NotUnimodular { .. } => "NotUnimodular",
            DeltaExhausted => "DeltaExhausted",
            ThetaBranchInvalid { .. } => "ThetaBranchInvalid",
            NotNullHomotopic { .. } => "NotNullHomotopic",
            VanishingDeterminant { .. } => "VanishingDeterminant",
            GridOnlyBassUnsupported => "GridOnlyBassUnsupported",
            InvalidInput(..) => "InvalidInput",
        }
    }

    /// Which exit-code class the variant belongs to.
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            // Properties of the input: reject before or during validation.
            HoleOutsideOuter { .. }
            | OverlappingHoles { .. }
            | DegenerateRadius { .. }
            | PoleInDomain { .. }
            | BoundaryZero { .. }
            | IdenticallyZero
            | TooCloseToBoundary { .. }
            | VanishesOnBoundary { .. }
            | NonzeroWinding { .. }
            | VanishingValue { .. }
            | NotTraceZero { .. }
            | SingularConjugator { .. }
            | BadRadii { .. }
            | SupportTouchesBoundary { .. }
            | CommonZero { .. }
            | NotUnimodular { .. }
            | NotNullHomotopic { .. }
            | VanishingDeterminant { .. }
            | GridOnlyBassUnsupported
            | InvalidInput(..) => ErrorClass::Input,
            // The algorithm ran and could not certify its result.
            NoConvergence { .. }
            | Undersampled { .. }
            | LoopClosureFailure { .. }
            | OverlapMismatch { .. }
            | RadiusCollapse { .. }
            | ResidualTooLarge { .. }
            | DegenerateEigenvalues { .. }
            | NotAnEigenvalue { .. }
            | DeltaExhausted
            | ThetaBranchInvalid { .. } => ErrorClass::MathGate,
        }
    }
}
