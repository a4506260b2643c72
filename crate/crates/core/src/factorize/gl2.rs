//! Invertible (not necessarily unimodular) input: when det A is zero-free
//! and null-homotopic in C \ {0}, a global logarithm eta of the determinant
//! exists, A0 = e^{-eta/2} A is unimodular, and A = e^{E0 + (eta/2) I} e^F
//! follows from the unimodular factorization of A0.

use num_complex::Complex64 as C;

use crate::bass;
use crate::consts;
use crate::error::{Error, Result};
use crate::funcrep::{zeros_in_domain, GridFn};
use crate::mat2::{Mat2, MatFn};

use super::{
    assess, default_tol, exp_split_core, factorize_sl2, CaseTag, FactorizationResult,
    FactorizeOptions,
};

#[derive(Debug, Clone)]
pub struct Gl2Result {
    /// Winding numbers of det A on each boundary component (all zero).
    pub windings: Vec<i64>,
    /// Global logarithm of det A over the grids.
    pub eta: GridFn,
    /// Factorization with the (eta/2) I shift already folded into E. The
    /// trace_e field reports max |eta| rather than a near-zero.
    pub result: FactorizationResult,
}

fn add_half_eta(e: &MatFn, eta: &GridFn) -> Result<MatFn> {
    let g = e.to_grid()?;
    let ent = g.grid_entries().expect("grid repr");
    let half = eta.scalar_mul(C::new(0.5, 0.0));
    Ok(MatFn::from_grid(
        e.domain.clone(),
        [
            [ent[0][0].add(&half), ent[0][1].clone()],
            [ent[1][0].clone(), ent[1][1].add(&half)],
        ],
    ))
}

/// Factor an invertible matrix with null-homotopic determinant as e^E e^F.
pub fn factorize_gl2(a: &MatFn, opts: &FactorizeOptions) -> Result<Gl2Result> {
    let d = a.domain.clone();
    let det_g = a.det_grid()?;
    let det_min = det_g.min_abs();
    if det_min < consts::DET_MIN_FACTOR * det_g.max_abs() {
        return Err(Error::VanishingDeterminant { min: det_min });
    }
    if let Some(det_r) = a.det_rational() {
        if !zeros_in_domain(&det_r, &d)?.zeros.is_empty() {
            return Err(Error::VanishingDeterminant { min: det_min });
        }
    }
    let windings = det_g.winding_numbers()?;
    if let Some((k, &w)) = windings.iter().enumerate().find(|&(_, &w)| w != 0) {
        return Err(Error::NotNullHomotopic { component: k, winding: w });
    }
    let eta = det_g.log_continuation()?;

    // Constant determinant with rational entries: the scaling is a constant,
    // A0 stays rational, and the full case machinery applies to it.
    let const_det = a
        .det_rational()
        .map(|r| r.num.degree().unwrap_or(0) == 0 && r.den.degree().unwrap_or(0) == 0)
        .unwrap_or(false);
    if const_det {
        let ents = a.rational_entries().expect("rational entries");
        let eta0 = eta.values().next().expect("nonempty grids");
        let s = (-eta0 / 2.0).exp();
        let scaled = [
            [ents[0][0].scalar_mul(s), ents[0][1].scalar_mul(s)],
            [ents[1][0].scalar_mul(s), ents[1][1].scalar_mul(s)],
        ];
        let a0 = MatFn::from_rational(d.clone(), scaled)?;
        let inner = factorize_sl2(&a0, opts)?;
        let e_full = add_half_eta(&inner.e, &eta)?;
        let tol = opts.tol.unwrap_or_else(|| default_tol(inner.bass.as_ref()));
        let chk = assess(a, &e_full, &inner.f)?;
        if chk.residual > tol {
            return Err(Error::ResidualTooLarge {
                what: "gl2 factorization",
                residual: chk.residual,
                tol,
            });
        }
        let result = FactorizationResult {
            e: e_full,
            residual: chk.residual,
            trace_e: chk.trace_e,
            trace_f: chk.trace_f,
            cert_e: chk.cert_e,
            cert_f: chk.cert_f,
            ..inner
        };
        return Ok(Gl2Result { windings, eta, result });
    }

    // Transcendental scaling: A0 lives on the grids. The case split follows
    // the rational entries when present (e^{-eta/2} never vanishes, so zero
    // sets are unchanged); pure grid input falls back to scale-relative
    // zero tests.
    let ag_mat = a.to_grid()?;
    let ge = ag_mat.grid_entries().expect("grid repr");
    let sc = eta.map(|v| (-v / 2.0).exp());
    let a0 = [
        [ge[0][0].mul(&sc), ge[0][1].mul(&sc)],
        [ge[1][0].mul(&sc), ge[1][1].mul(&sc)],
    ];
    let rat = a.rational_entries();

    let scale = a0.iter().flatten().map(GridFn::max_abs).fold(0.0, f64::max);
    let diff = a0[0][0].sub(&a0[1][1]);
    let gz = |g: &GridFn| g.max_abs() <= consts::GRID_ZERO_FACTOR * scale;
    let c_zero = match rat {
        Some(e) => e[1][0].is_zero(),
        None => gz(&a0[1][0]),
    };
    let b_zero = match rat {
        Some(e) => e[0][1].is_zero(),
        None => gz(&a0[0][1]),
    };
    let diff_zero = match rat {
        Some(e) => e[0][0].sub(&e[1][1]).is_zero(),
        None => gz(&diff),
    };

    let (wa, wb, wc, wd, trail, tag, c_rat) = if !c_zero {
        let [[wa, wb], [wc, wd]] = a0;
        (wa, wb, wc, wd, vec![], CaseTag::CaseI, rat.map(|e| e[1][0].clone()))
    } else if !b_zero {
        // Swap conjugation: ((a, b), (0, d)) -> ((d, 0), (b, a)).
        let one = C::new(1.0, 0.0);
        let s = Mat2::new(C::new(0.0, 0.0), one, one, C::new(0.0, 0.0));
        let [[pa, pb], [pc, pd]] = a0;
        (pd, pc, pb, pa, vec![s], CaseTag::CaseII, rat.map(|e| e[0][1].clone()))
    } else {
        // Diagonal. A constant-diagonal A0 only arises with constant det,
        // handled above, so equal diagonal entries leave no case to run.
        if diff_zero {
            return Err(Error::InvalidInput(
                "diagonal matrix with equal diagonal entries after det scaling".into(),
            ));
        }
        let one = C::new(1.0, 0.0);
        let u = Mat2::new(one, C::new(0.0, 0.0), one, one);
        let [[pa, _], [_, pd]] = a0;
        let c_rat = rat.map(|e| e[0][0].sub(&e[1][1]));
        (pa, GridFn::zero(&d), diff, pd, vec![u], CaseTag::CaseIII, c_rat)
    };

    // The working lower-left must be zero-free: with rational data that is
    // decidable exactly; on grids alone, interior zeros are only visible
    // through boundary winding, and a nonzero count cannot be covered.
    match &c_rat {
        Some(cr) => {
            if !zeros_in_domain(cr, &d)?.zeros.is_empty() {
                return Err(Error::GridOnlyBassUnsupported);
            }
        }
        None => {
            if wc.winding_numbers()?.iter().sum::<i64>() != 0 {
                return Err(Error::GridOnlyBassUnsupported);
            }
        }
    }

    let bass_res = bass::bass_solve_grid_zero_free(&wc, &wa)?;
    let core = exp_split_core(&d, &wa, &wb, &wc, &wd, &bass_res)?;
    let mut e_m = core.e_mid;
    let mut f_m = core.f_mid;
    for theta in trail.iter().rev() {
        let inv = theta.inverse()?;
        e_m = e_m.conjugate_const(&inv)?;
        f_m = f_m.conjugate_const(&inv)?;
    }
    let e_full = add_half_eta(&e_m, &eta)?;
    let tol = opts.tol.unwrap_or_else(|| default_tol(Some(&bass_res)));
    let chk = assess(a, &e_full, &f_m)?;
    if chk.residual > tol {
        return Err(Error::ResidualTooLarge {
            what: "gl2 factorization",
            residual: chk.residual,
            tol,
        });
    }
    let result = FactorizationResult {
        case: tag,
        e: e_full,
        f: f_m,
        trail,
        bass: Some(bass_res),
        delta: Some(core.delta),
        delta_margins: Some(core.margins),
        lambda: Some(core.lambda),
        theta_re_min: Some(core.theta_re_min),
        branch: Some(core.branch),
        residual: chk.residual,
        trace_e: chk.trace_e,
        trace_f: chk.trace_f,
        cert_e: chk.cert_e,
        cert_f: chk.cert_f,
    };
    Ok(Gl2Result { windings, eta, result })
}
