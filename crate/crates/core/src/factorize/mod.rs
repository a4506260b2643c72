//! The factorization pipeline: A = e^E e^F with E, F trace-zero and
//! holomorphic on the closed domain.
//!
//! A unimodular A with rational entries is first reduced to one of three
//! cases by constant conjugations chosen so the lower-left entry c is not
//! identically zero (c carries the stable-rank data). The Bass step produces
//! g, h with a + g c = e^h, so conjugating by the grid-phase
//! Gamma = ((1, g), (0, 1)) puts e^h in the top-left corner. The delta shift
//! then factors the working matrix as e^E_w B with E_w = diag(h - d, d - h),
//! where d is the smallest power of two pushing both margin conditions
//! through: tr B stays in the right half plane and
//! theta_plus = tr B / 2 + sqrt((tr B)^2 / 4 - 1) admits a global principal
//! logarithm lambda. The spectral-projection logarithm of B with branch
//! lambda supplies F, and everything is conjugated back through the trail.
//!
//! Every step closes with a checked identity — the Bass residual, the
//! delta-split reproduction, positivity of Re theta_plus, the eigenvalue-
//! membership residual, and the final relative residual of e^E e^F against
//! the input — so a returned factorization is certified, not assumed.

use std::sync::Arc;

use num_complex::Complex64 as C;

use crate::bass::{self, BassMethod, BassResult};
use crate::consts;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::funcrep::GridFn;
use crate::logm::{log_with_eigenvalue_grid, LogBranchData};
use crate::mat2::{exp_sl2, Mat2, MatFn};

mod gen;
mod gl2;
mod verify;

pub use gen::{random_instance, ZeroPlan};
pub use gl2::{factorize_gl2, Gl2Result};
pub use verify::{verify, VerifyReport};

pub(crate) use verify::assess;

/// Which reduction the input fell into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// A = I: E = F = 0.
    PlusIdentity,
    /// A = -I: E = 0, F = i pi diag(1, -1).
    MinusIdentity,
    /// Lower-left entry not identically zero; no conjugation needed.
    CaseI,
    /// Lower-left zero, upper-right not: swap by ((0, 1), (1, 0)).
    CaseII,
    /// Diagonal, not +-I: unipotent ((1, 0), (1, 1)) makes the lower-left
    /// a - a^{-1}.
    CaseIII,
}

impl CaseTag {
    pub fn label(&self) -> &'static str {
        match self {
            CaseTag::PlusIdentity => "+I",
            CaseTag::MinusIdentity => "-I",
            CaseTag::CaseI => "I",
            CaseTag::CaseII => "II",
            CaseTag::CaseIII => "III",
        }
    }
}

/// Outcome of the case reduction: the working matrix and the constant
/// conjugators that produced it, applied left to right:
/// reduced = T_k ... T_1 A T_1^{-1} ... T_k^{-1}.
#[derive(Debug, Clone)]
pub struct CaseReduction {
    pub tag: CaseTag,
    pub trail: Vec<Mat2>,
    pub reduced: MatFn,
}

impl CaseReduction {
    /// Reconstruct A from the reduced matrix by unwinding the trail,
    /// pointwise on the sample grids. Unwinding symbolically would re-expand
    /// the rational coefficients, and an ill-conditioned conjugator can cost
    /// the expanded form many digits to cancellation; the pointwise product
    /// is backward stable.
    pub fn replay(&self) -> Result<MatFn> {
        let mut m = self.reduced.to_grid()?;
        for theta in self.trail.iter().rev() {
            m = m.conjugate_const(&theta.inverse()?)?;
        }
        Ok(m)
    }
}

/// Classify a rational unimodular matrix and conjugate it so the lower-left
/// entry is not identically zero (unless A = +-I, which short-circuits).
///
/// All identity decisions are exact coefficient tests on the rational
/// entries; grid-phase inputs must go through [`factorize_gl2`].
pub fn classify_and_reduce(a: &MatFn) -> Result<CaseReduction> {
    let ent = a
        .rational_entries()
        .ok_or_else(|| Error::InvalidInput("case classification needs rational entries".into()))?;
    let defect = a.unimodular_defect().expect("rational entries");
    if defect > consts::UNIMODULAR_TOL {
        return Err(Error::NotUnimodular { defect });
    }

    let one = C::new(1.0, 0.0);
    let diag_const =
        |k: C| ent[0][0].is_constant(k) && ent[1][1].is_constant(k) && ent[0][1].is_zero() && ent[1][0].is_zero();
    if diag_const(one) {
        return Ok(CaseReduction { tag: CaseTag::PlusIdentity, trail: vec![], reduced: a.clone() });
    }
    if diag_const(-one) {
        return Ok(CaseReduction { tag: CaseTag::MinusIdentity, trail: vec![], reduced: a.clone() });
    }

    if !ent[1][0].is_zero() {
        return Ok(CaseReduction { tag: CaseTag::CaseI, trail: vec![], reduced: a.clone() });
    }
    let zero = C::new(0.0, 0.0);
    if !ent[0][1].is_zero() {
        let s = Mat2::new(zero, one, one, zero);
        let reduced = a.conjugate_const(&s)?;
        return Ok(CaseReduction { tag: CaseTag::CaseII, trail: vec![s], reduced });
    }
    // Diagonal: the unipotent conjugation gives lower-left a - d = a - a^{-1},
    // which vanishes identically only for a = +-1, already handled.
    if ent[0][0].sub(&ent[1][1]).is_zero() {
        return Err(Error::InvalidInput(
            "diagonal matrix with a = a^{-1} identically but not +-I".into(),
        ));
    }
    let u = Mat2::new(one, zero, one, one);
    let reduced = a.conjugate_const(&u)?;
    Ok(CaseReduction { tag: CaseTag::CaseIII, trail: vec![u], reduced })
}

/// Margins of the two delta conditions over the grids:
/// (min Re(e^d + e^{h-d} dd), max |(1 + e^{h-2d} dd)^2 - 4 e^{-2d} - 1|).
pub fn delta_margins(h: &GridFn, dd: &GridFn, delta: f64) -> (f64, f64) {
    let e_d = delta.exp();
    let e2 = (-2.0 * delta).exp();
    let mut re_min = f64::INFINITY;
    let mut mod_max = 0.0f64;
    for (hv, dv) in h.values().zip(dd.values()) {
        let re = (C::new(e_d, 0.0) + (hv - delta).exp() * dv).re;
        re_min = re_min.min(re);
        let s = C::new(1.0, 0.0) + (hv - 2.0 * delta).exp() * dv;
        mod_max = mod_max.max((s * s - 4.0 * e2 - 1.0).norm());
    }
    (re_min, mod_max)
}

/// Smallest delta in {1, 2, 4, ..., 64} for which, at every grid point,
/// Re(e^d + e^{h-d} dd) >= 0.1 and |(1 + e^{h-2d} dd)^2 - 4e^{-2d} - 1| <= 0.4.
pub fn choose_delta(h: &GridFn, dd: &GridFn) -> Result<f64> {
    let mut delta = 1.0f64;
    while delta <= consts::DELTA_MAX {
        let (re_min, mod_max) = delta_margins(h, dd, delta);
        if re_min >= consts::DELTA_RE_MARGIN && mod_max <= consts::DELTA_MOD_MARGIN {
            return Ok(delta);
        }
        delta *= 2.0;
    }
    Err(Error::DeltaExhausted)
}

#[derive(Debug, Clone, Copy)]
pub struct FactorizeOptions {
    /// Final residual gate; None selects 1e-6, tightened to 1e-8 when the
    /// Bass step took the zero-free branch.
    pub tol: Option<f64>,
    /// How the Cousin data is split when the lower-left entry has zeros.
    pub method: crate::dbar::SplitMethod,
}

impl Default for FactorizeOptions {
    fn default() -> Self {
        FactorizeOptions { tol: None, method: crate::dbar::SplitMethod::Exact }
    }
}

#[derive(Debug, Clone)]
pub struct FactorizationResult {
    pub case: CaseTag,
    pub e: MatFn,
    pub f: MatFn,
    /// Constant conjugators from the case reduction (empty for case I).
    pub trail: Vec<Mat2>,
    /// Stable-rank data for the reduced matrix; None for the +-I cases.
    pub bass: Option<BassResult>,
    pub delta: Option<f64>,
    /// Margins of the two delta conditions at the accepted delta.
    pub delta_margins: Option<(f64, f64)>,
    /// Branch of the eigenvalue logarithm, lambda = Log theta_plus.
    pub lambda: Option<GridFn>,
    /// Grid minimum of Re theta_plus (positive on every accepted run).
    pub theta_re_min: Option<f64>,
    /// Eigenvalue gap / membership diagnostics from the logm stage.
    pub branch: Option<LogBranchData>,
    /// max over grid points of ||e^E e^F - A|| / (1 + ||A||).
    pub residual: f64,
    pub trace_e: f64,
    pub trace_f: f64,
    pub cert_e: f64,
    pub cert_f: f64,
}

pub(crate) fn default_tol(bass: Option<&BassResult>) -> f64 {
    match bass {
        Some(b) if b.method == BassMethod::ZeroFree => consts::FACTORIZE_TOL_ZERO_FREE,
        _ => consts::FACTORIZE_TOL_DEFAULT,
    }
}

/// Gamma^{-1} M Gamma for Gamma = ((1, g), (0, 1)), pointwise on the grids.
pub(crate) fn gamma_unconjugate(m: &MatFn, g: &GridFn) -> MatFn {
    let e = m.grid_entries().expect("grid repr");
    let t = g.mul(&e[1][0]);
    let n00 = e[0][0].sub(&t);
    let n11 = e[1][1].add(&t);
    let n01 = g.mul(&e[0][0].sub(&e[1][1])).add(&e[0][1]).sub(&g.mul(&t));
    let n10 = e[1][0].clone();
    MatFn::from_grid(m.domain.clone(), [[n00, n01], [n10, n11]])
}

pub(crate) struct CoreOutput {
    pub e_mid: MatFn,
    pub f_mid: MatFn,
    pub delta: f64,
    pub margins: (f64, f64),
    pub lambda: GridFn,
    pub theta_re_min: f64,
    pub branch: LogBranchData,
}

/// Steps 2-6 on a working matrix already in grid phase: conjugate by Gamma,
/// pick delta, split off E_w, take the eigenvalue logarithm of B, and undo
/// Gamma. The result is still in the reduced frame.
pub(crate) fn exp_split_core(
    d: &Arc<Domain>,
    ag: &GridFn,
    bg: &GridFn,
    cg: &GridFn,
    dg: &GridFn,
    bass: &BassResult,
) -> Result<CoreOutput> {
    let g = &bass.g;
    let h = &bass.h;

    // Working matrix Gamma A' Gamma^{-1}. Its top-left a + g c equals e^h up
    // to the Bass residual; the honest product is kept (det stays 1 to
    // rounding) and the agreement is rechecked here.
    let top = ag.add(&g.mul(cg));
    let top_defect = top.zip(h, |tv, hv| tv - hv.exp()).max_abs();
    let gate = if bass.method == BassMethod::Dbar {
        consts::BASS_RESIDUAL_TOL_DBAR
    } else {
        consts::BASS_RESIDUAL_TOL_EXACT
    };
    if top_defect > gate {
        return Err(Error::ResidualTooLarge {
            what: "conjugated top-left against e^h",
            residual: top_defect,
            tol: gate,
        });
    }
    let bpp = bg.add(&g.mul(dg)).sub(&g.mul(&top));
    let dpp = dg.sub(&g.mul(cg));

    let delta = choose_delta(h, &dpp)?;
    let margins = delta_margins(h, &dpp, delta);

    // E_w = diag(h - delta, delta - h), B = e^{-E_w} x working matrix.
    let p = h.map(|v| v - delta);
    let zero = || GridFn::zero(d);
    let e_w = MatFn::from_grid(
        d.clone(),
        [[p.clone(), zero()], [zero(), p.scalar_mul(C::new(-1.0, 0.0))]],
    );
    let em = p.map(|v| (-v).exp()); // e^{delta - h}
    let ep = p.map(|v| v.exp()); // e^{h - delta}
    let b00 = em.mul(&top);
    let b01 = em.mul(&bpp);
    let b10 = ep.mul(cg);
    let b11 = ep.mul(&dpp);
    let trb = b00.add(&b11);
    let b_mat = MatFn::from_grid(d.clone(), [[b00, b01], [b10, b11]]);
    let w_mat = MatFn::from_grid(d.clone(), [[top.clone(), bpp], [cg.clone(), dpp.clone()]]);

    // e^{E_w} B must reproduce the working matrix — a tripwire on the
    // closed-form diagonal exponential.
    let mut split_defect = 0.0f64;
    {
        let mut at = |ew: Mat2, bp: Mat2, wp: Mat2| -> Result<()> {
            let lhs = exp_sl2(&ew)?.mul(&bp);
            split_defect = split_defect.max(lhs.sub(&wp).norm() / (1.0 + wp.norm()));
            Ok(())
        };
        for i in 0..d.num_boundary_points() {
            at(e_w.at_boundary(i), b_mat.at_boundary(i), w_mat.at_boundary(i))?;
        }
        for i in 0..d.interior.len() {
            at(e_w.at_interior(i), b_mat.at_interior(i), w_mat.at_interior(i))?;
        }
    }
    if split_defect > consts::DELTA_SPLIT_TOL {
        return Err(Error::ResidualTooLarge {
            what: "delta split",
            residual: split_defect,
            tol: consts::DELTA_SPLIT_TOL,
        });
    }

    // theta_plus = tr B / 2 + e^{delta - ln 2} sqrt(inner), the eigenvalue of
    // B pushed into the right half plane. The decomposed inner form never
    // squares tr B itself, and the top-left stays honest through
    // t = e^{-h}(a + g c).
    let e2 = (-2.0 * delta).exp();
    let t = top.zip(h, |tv, hv| tv * (-hv).exp());
    let u = h.zip(&dpp, |hv, dv| (hv - 2.0 * delta).exp() * dv);
    let inner = t.zip(&u, |tv, uv| {
        let s = tv + uv;
        s * s - 4.0 * e2
    });
    let half_exp = 0.5 * delta.exp();
    let phi = inner.map(|iv| half_exp * (0.5 * iv.ln()).exp());
    let theta = trb.zip(&phi, |trv, pv| 0.5 * trv + pv);
    let theta_re_min = theta.values().map(|v| v.re).fold(f64::INFINITY, f64::min);
    if theta_re_min <= 0.0 {
        return Err(Error::ThetaBranchInvalid { min_re: theta_re_min });
    }
    let lambda = theta.map(|v| v.ln());

    let (f_b, branch) = log_with_eigenvalue_grid(&b_mat, &lambda)?;
    let e_mid = gamma_unconjugate(&e_w, g);
    let f_mid = gamma_unconjugate(&f_b, g);
    Ok(CoreOutput { e_mid, f_mid, delta, margins, lambda, theta_re_min, branch })
}

fn trivial_result(a: &MatFn, red: CaseReduction, f_const: Mat2) -> Result<FactorizationResult> {
    let d = &a.domain;
    let zg = || GridFn::zero(d);
    let cg = |v: C| GridFn::constant(d, v);
    let e_m = MatFn::from_grid(d.clone(), [[zg(), zg()], [zg(), zg()]]);
    let f_m = MatFn::from_grid(
        d.clone(),
        [
            [cg(f_const.e[0][0]), cg(f_const.e[0][1])],
            [cg(f_const.e[1][0]), cg(f_const.e[1][1])],
        ],
    );
    let s = assess(a, &e_m, &f_m)?;
    let tol = consts::FACTORIZE_TOL_DEFAULT;
    if s.residual > tol {
        return Err(Error::ResidualTooLarge { what: "factorization", residual: s.residual, tol });
    }
    Ok(FactorizationResult {
        case: red.tag,
        e: e_m,
        f: f_m,
        trail: red.trail,
        bass: None,
        delta: None,
        delta_margins: None,
        lambda: None,
        theta_re_min: None,
        branch: None,
        residual: s.residual,
        trace_e: s.trace_e,
        trace_f: s.trace_f,
        cert_e: s.cert_e,
        cert_f: s.cert_f,
    })
}

/// Factor a unimodular rational matrix as e^E e^F on its domain.
pub fn factorize_sl2(a: &MatFn, opts: &FactorizeOptions) -> Result<FactorizationResult> {
    let red = classify_and_reduce(a)?;
    match red.tag {
        CaseTag::PlusIdentity => return trivial_result(a, red, Mat2::zero()),
        CaseTag::MinusIdentity => {
            let pi = std::f64::consts::PI;
            let f = Mat2::diag(C::new(0.0, pi), C::new(0.0, -pi));
            return trivial_result(a, red, f);
        }
        _ => {}
    }

    let d = a.domain.clone();
    let [[ra, rb], [rc, rd]] = red.reduced.rational_entries().expect("rational reduction").clone();
    // Bass step on (a := lower-left, b := top-left): a_entry + g c = e^h.
    let bass_res = bass::bass_solve(&rc, &ra, &d, opts.method)?;

    let ag = ra.sample(&d)?;
    let bg = rb.sample(&d)?;
    let cg = rc.sample(&d)?;
    let dg = rd.sample(&d)?;
    let core = exp_split_core(&d, &ag, &bg, &cg, &dg, &bass_res)?;

    let mut e_m = core.e_mid;
    let mut f_m = core.f_mid;
    for theta in red.trail.iter().rev() {
        let inv = theta.inverse()?;
        e_m = e_m.conjugate_const(&inv)?;
        f_m = f_m.conjugate_const(&inv)?;
    }

    let tol = opts.tol.unwrap_or_else(|| default_tol(Some(&bass_res)));
    let s = assess(a, &e_m, &f_m)?;
    if s.residual > tol {
        return Err(Error::ResidualTooLarge { what: "factorization", residual: s.residual, tol });
    }
    Ok(FactorizationResult {
        case: red.tag,
        e: e_m,
        f: f_m,
        trail: red.trail,
        bass: Some(bass_res),
        delta: Some(core.delta),
        delta_margins: Some(core.margins),
        lambda: Some(core.lambda),
        theta_re_min: Some(core.theta_re_min),
        branch: Some(core.branch),
        residual: s.residual,
        trace_e: s.trace_e,
        trace_f: s.trace_f,
        cert_e: s.cert_e,
        cert_f: s.cert_f,
    })
}
