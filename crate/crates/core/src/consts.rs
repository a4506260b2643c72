//! Pinned numerical tolerances and scheme parameters.
//!
//! Every tolerance that participates in an accept/reject decision lives here
//! under a role-describing name, so tests and the CLI gate against the same
//! numbers the library enforces. Values are calibrated for the default grids
//! (512 boundary samples per component, interior spacing = outer radius / 64)
//! in double precision.

/// Relative distance from a boundary circle under which a zero is rejected as
/// sitting "on" the boundary (scaled by the outer radius).
pub const BOUNDARY_ZONE_FACTOR: f64 = 1e-6;

/// Minimum clearance between boundary circles, relative to the outer radius.
pub const HOLE_CLEARANCE_FACTOR: f64 = 1e-6;

/// Closed-component quadrature sanity: |sum of d-zeta| <= this x radius x n.
pub const BOUNDARY_CLOSURE_TOL: f64 = 1e-12;

/// Trapezoid winding integral of 1/z on its own circle must equal 2*pi*i to
/// this relative tolerance for n >= 16.
pub const UNIT_WINDING_TOL: f64 = 1e-12;

/// Polynomial trailing coefficients at or below this fraction of the largest
/// coefficient magnitude are trimmed during normalization.
pub const POLY_TRIM_FACTOR: f64 = 1e-14;

/// Identically-zero decisions on rational data: all numerator coefficients
/// below this fraction of the coefficient scale.
pub const RATIONAL_ZERO_FACTOR: f64 = 1e-14;

/// Aberth-Ehrlich update convergence threshold, relative to the root scale.
pub const ABERTH_TOL: f64 = 1e-13;

/// Aberth-Ehrlich iteration cap before reporting no convergence.
pub const ABERTH_MAX_ITER: usize = 500;

/// Roots closer than this are merged into one cluster (centroid, summed
/// multiplicity).
pub const ROOT_CLUSTER_RADIUS: f64 = 1e-6;

/// Pole proximity rejection for rational evaluation: Newton estimate of the
/// distance from the evaluation point to a denominator zero.
pub const POLE_PROXIMITY: f64 = 1e-12;

/// Interior evaluation margin for the boundary Cauchy integral, in units of
/// the interior grid spacing.
pub const CAUCHY_MARGIN_CELLS: f64 = 2.0;

/// Winding numbers: a boundary function whose minimum modulus is below this
/// fraction of its maximum modulus is treated as vanishing on the boundary.
pub const WINDING_MIN_MODULUS_FACTOR: f64 = 1e-8;

/// Winding numbers: adjacent-sample argument increments above pi/2 mean the
/// boundary sampling cannot resolve the phase and the count is unreliable.
pub const WINDING_MAX_STEP: f64 = std::f64::consts::FRAC_PI_2;

/// Loop-closure defect allowed when continuing a logarithm over the grid
/// graph (should vanish identically for a true single-valued branch).
pub const LOG_LOOP_TOL: f64 = 1e-8;

/// `exp_sl2` requires |tr M| <= this fraction of the matrix norm.
pub const TRACE_ZERO_FACTOR: f64 = 1e-10;

/// Below this eigenvalue magnitude, sinh(mu)/mu switches to its even power
/// series to avoid 0/0.
pub const SINHC_SERIES_CUTOFF: f64 = 1e-4;

/// Conjugating matrices must have |det| at least this large.
pub const CONJUGATOR_MIN_DET: f64 = 1e-8;

/// Default dbar quadrature mesh (radial x angular cells per support annulus)
/// for the convergence self-test.
pub const DBAR_SELFTEST_NR: usize = 64;
pub const DBAR_SELFTEST_NT: usize = 256;

/// Default dbar quadrature mesh for production Cousin splittings. Accuracy
/// away from the transition band is governed by the radial midpoint error
/// (second order in 1/n_r, since the angular trapezoid sum on a full period is
/// spectrally accurate), so the radial direction gets the resolution.
pub const DBAR_COUSIN_NR: usize = 384;
pub const DBAR_COUSIN_NT: usize = 256;

/// Far-field evaluation of the Cauchy-Green transform by Laurent moments:
/// activation thresholds (relative to the support radii) and series lengths.
/// At these thresholds the truncated tails sit below 1e-18 of the sum, so the
/// moment route reproduces the direct cell sum to machine precision.
pub const DBAR_FF_OUTER_FACTOR: f64 = 1.25;
pub const DBAR_FF_INNER_FACTOR: f64 = 0.75;
pub const DBAR_FF_OUTER_TERMS: usize = 192;
pub const DBAR_FF_INNER_TERMS: usize = 160;

/// Overlap identity tolerance for Cousin splittings, per method.
pub const COUSIN_TOL_EXACT: f64 = 1e-10;
pub const COUSIN_TOL_DBAR: f64 = 1e-6;

/// Safety factor applied to the grid minimum of |a| + |b| when sizing the
/// target disks D_j for the local logarithm of b.
pub const THETA_SAFETY: f64 = 0.5;

/// Fraction of the available clearance used for the working radius around
/// each interior zero.
pub const COVER_RADIUS_FACTOR: f64 = 0.45;

/// b must map each working circle into D_j with this margin.
pub const COVER_IMAGE_MARGIN: f64 = 0.9;

/// Samples used to verify the image condition on each working circle.
pub const COVER_IMAGE_SAMPLES: usize = 128;

/// Working radii halve at most this many times before giving up.
pub const COVER_MAX_HALVINGS: usize = 8;

/// Samples per contour circle for Laurent coefficient extraction.
pub const CONTOUR_SAMPLES: usize = 256;

/// Laurent/Taylor data is extracted on a circle at this fraction of the
/// working radius (keeps the contour strictly inside the guaranteed
/// analyticity disk).
pub const CONTOUR_RADIUS_FACTOR: f64 = 0.8;

/// Inside this fraction of the working radius, the regular part of f/a is
/// evaluated from its Taylor coefficients instead of by direct subtraction.
pub const TAYLOR_CORE_FACTOR: f64 = 0.4;

/// Number of Taylor coefficients retained for the regular part.
pub const TAYLOR_TERMS: usize = 48;

/// Agreement required between the two assembly formulas for h on the seam
/// circle around each zero.
pub const BASS_OVERLAP_TOL: f64 = 1e-8;

/// Seam circle for overlap-defect checks: fraction of the working radius
/// (inside the Taylor core, so the check exercises the series branch) and
/// number of samples taken on it.
pub const COUSIN_SEAM_FACTOR: f64 = 0.35;
pub const COUSIN_SEAM_SAMPLES: usize = 64;

/// Residual gates for b + g a = e^h.
pub const BASS_RESIDUAL_TOL_EXACT: f64 = 1e-8;
pub const BASS_RESIDUAL_TOL_DBAR: f64 = 1e-4;

/// Zero-free branch: C doubles until min Re(1 + b/C) clears this margin,
/// keeping the principal log of 1 + b/C single-valued with room to spare.
pub const BASS_C_RE_MARGIN: f64 = 0.1;

/// Common-zero rejection: |a| + |b| must stay above this fraction of scale on
/// every grid point.
pub const COMMON_ZERO_FACTOR: f64 = 1e-10;

/// The series for g inside the working disks truncates once a term drops
/// below this fraction of the partial sum.
pub const BASS_SERIES_EPS: f64 = 1e-16;

/// Spectral-log branch: minimum |e^lambda - e^{-lambda}|.
pub const EIGENVALUE_GAP_MIN: f64 = 1e-8;

/// Spectral-log branch: |det(e^lambda I - B)| <= this x ||B||^2.
pub const EIGENVALUE_RESIDUAL_FACTOR: f64 = 1e-8;

/// delta search: Re(e^delta + e^{h - delta} d) must clear this margin.
pub const DELTA_RE_MARGIN: f64 = 0.1;

/// delta search: |(1 + e^{h-2 delta} d)^2 - 4 e^{-2 delta} - 1| stays within
/// this distance of zero (keeps the square root single-valued).
pub const DELTA_MOD_MARGIN: f64 = 0.4;

/// delta candidates: powers of two from 1 through this bound.
pub const DELTA_MAX: f64 = 64.0;

/// exp_sl2(E) B must reproduce the working matrix within this relative
/// pointwise tolerance after the delta shift.
pub const DELTA_SPLIT_TOL: f64 = 1e-9;

/// Default residual tolerance for a full factorization.
pub const FACTORIZE_TOL_DEFAULT: f64 = 1e-6;

/// Residual tolerance achieved on zero-free instances (exact Bass branch).
pub const FACTORIZE_TOL_ZERO_FREE: f64 = 1e-8;

/// Holomorphy certificate gate for the entries of E and F.
pub const CERT_TOL: f64 = 1e-5;

/// Trace gate for E and F.
pub const TRACE_TOL: f64 = 1e-10;

/// Trail replay must reconstruct the input within this relative tolerance.
pub const TRAIL_REPLAY_TOL: f64 = 1e-10;

/// Coefficient tolerance for det A = 1 as a rational identity.
pub const UNIMODULAR_TOL: f64 = 1e-10;

/// GL(2) path: the determinant's grid minimum must exceed this fraction of
/// its grid maximum.
pub const DET_MIN_FACTOR: f64 = 1e-10;

/// Identically-zero test for grid-phase entries (relative to the matrix
/// scale), used where no rational representation survives.
pub const GRID_ZERO_FACTOR: f64 = 1e-12;

/// Default boundary samples per component.
pub const DEFAULT_BOUNDARY_N: usize = 512;

/// Default interior spacing as a fraction of the outer radius.
pub const DEFAULT_SPACING_FACTOR: f64 = 1.0 / 64.0;
