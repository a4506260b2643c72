//! Stable-rank-one reduction: given rational a, b holomorphic on the closed
//! domain with no common zeros and a not identically zero, produce g and h
//! with
//!
//! ```text
//!     b + g a = e^h,      g, h holomorphic on the closed domain.
//! ```
//!
//! When a is zero-free the solution is elementary: a constant C large enough
//! that 1 + b/C stays in the right half plane gives g = C/a and
//! h = Log C + Log(1 + b/C). When a has interior zeros, a local logarithm
//! f_j = Log b is defined near each zero (b maps a small disk W_j into a disk
//! around b(xi_j) missing the origin), the Cousin data f/a is split as
//! v - w_j across the cover, and
//!
//! ```text
//!     h = a v              outside the W_j,
//!     h = f_j + a w_j      on W_j        (same function, two formulas),
//!     g = (e^h - b)/a      outside,
//!     g = sum_mu (a w)^mu / mu! * b w / (mu + 1)   on W_j,
//! ```
//!
//! where the series is e^h - b divided by a with the cancellation carried out
//! symbolically, so g extends across the zeros of a. The identity
//! b + g a = b e^{a w} = e^h holds for the computed g, h by construction;
//! the honest accuracy signals are the seam agreement of the two h formulas
//! and the holomorphy certificates, all of which are measured and stored.

use std::sync::Arc;

use num_complex::Complex64 as C;

use crate::consts;
use crate::dbar::{self, CoverEntry, SplitMethod, Splitting};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::funcrep::{circle_points, zeros_in_domain, GridFn, RationalFn};

/// One covered zero of a: the working disk W_j around xi_j and the image disk
/// D_j = D(b(xi_j), theta_eff) that b(W_j) is confined to.
#[derive(Debug, Clone, Copy)]
pub struct CoverDisk {
    pub xi: C,
    pub multiplicity: usize,
    pub radius: f64,
    /// b(xi_j), the center of D_j. Never within theta_eff of 0.
    pub b_center: C,
}

/// Disjoint interior disks around the zeros of a, sized so that b's image of
/// each is trapped in a disk missing the origin — the geometric input to the
/// local-logarithm construction.
#[derive(Debug, Clone)]
pub struct ZeroCover {
    pub entries: Vec<CoverDisk>,
    /// Half the grid minimum of |a| + |b|; radius of the image disks D_j.
    pub theta_eff: f64,
}

/// Which branch produced the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BassMethod {
    ZeroFree,
    Exact,
    Dbar,
}

/// Per-zero record in a [`BassResult`].
#[derive(Debug, Clone, Copy)]
pub struct BassZero {
    pub xi: C,
    pub multiplicity: usize,
    pub radius: f64,
    pub b_center: C,
    /// h(xi_j); forced to equal Log b(xi_j) because a(xi_j) = 0.
    pub h_at_zero: C,
}

#[derive(Debug, Clone)]
pub struct BassResult {
    pub method: BassMethod,
    pub g: GridFn,
    pub h: GridFn,
    /// Sum of principal parts of f/a (exact zero-branch only).
    pub v: Option<RationalFn>,
    pub zeros: Vec<BassZero>,
    pub theta_eff: f64,
    /// max over all grid points of |b + g a - e^h|.
    pub residual: f64,
    /// Worst disagreement of the two h formulas on the W_j seam circles.
    pub overlap_defect: f64,
    pub h_certificate: f64,
    pub g_certificate: f64,
    /// min over all grid points of |b + g a| — the nonvanishing witness.
    pub witness_min: f64,
}

/// Grid minimum and maximum of |a| + |b|; rejects near-common zeros.
fn coprime_extent(ag: &GridFn, bg: &GridFn) -> Result<(f64, f64)> {
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    for (av, bv) in ag.values().zip(bg.values()) {
        let s = av.norm() + bv.norm();
        min = min.min(s);
        max = max.max(s);
    }
    if max == 0.0 || min < consts::COMMON_ZERO_FACTOR * max {
        return Err(Error::CommonZero { value: min });
    }
    Ok((min, max))
}

fn build_cover(
    b: &RationalFn,
    d: &Domain,
    zeros: &[(C, usize)],
    theta_eff: f64,
    scale: f64,
) -> Result<ZeroCover> {
    let mut entries = Vec::with_capacity(zeros.len());
    for &(xi, multiplicity) in zeros {
        let b_center = b.eval_unchecked(xi);
        // Grid points straddle the zeros; check coprimality at the zero itself.
        if b_center.norm() < consts::COMMON_ZERO_FACTOR * scale {
            return Err(Error::CommonZero { value: b_center.norm() });
        }
        let mut clearance = d.signed_membership(xi);
        for &(other, _) in zeros {
            if other != xi {
                clearance = clearance.min((other - xi).norm());
            }
        }
        // 0.45 x clearance keeps distinct disks disjoint (0.45 + 0.45 < 1)
        // and strictly interior; halving only shrinks them.
        let mut radius = consts::COVER_RADIUS_FACTOR * clearance;
        let mut halvings = 0;
        loop {
            let spread = circle_points(xi, radius, consts::COVER_IMAGE_SAMPLES)
                .into_iter()
                .map(|z| (b.eval_unchecked(z) - b_center).norm())
                .fold(0.0, f64::max);
            if spread <= consts::COVER_IMAGE_MARGIN * theta_eff {
                break;
            }
            if halvings == consts::COVER_MAX_HALVINGS {
                return Err(Error::RadiusCollapse { location: xi, halvings });
            }
            radius *= 0.5;
            halvings += 1;
        }
        entries.push(CoverDisk { xi, multiplicity, radius, b_center });
    }
    Ok(ZeroCover { entries, theta_eff })
}

/// Cover the interior zeros of a with disks on which b admits a single
/// principal-branch logarithm.
pub fn cover_zeros(a: &RationalFn, b: &RationalFn, d: &Arc<Domain>) -> Result<ZeroCover> {
    let ag = a.sample(d)?;
    let bg = b.sample(d)?;
    let (min_sum, max_sum) = coprime_extent(&ag, &bg)?;
    let zset = zeros_in_domain(a, d)?;
    build_cover(b, d, &zset.zeros, consts::THETA_SAFETY * min_sum, max_sum)
}

/// Series for g on a working disk: (e^{f + a w} - b)/a = b (e^{a w} - 1)/a
/// summed as sum_mu (a w)^mu / mu! * b w/(mu + 1), truncated once a term
/// drops below BASS_SERIES_EPS of the partial sum.
fn series_g(aw: C, bw: C) -> C {
    let mut term = bw;
    let mut s = bw;
    let mut mu = 1.0f64;
    while term.norm() > consts::BASS_SERIES_EPS * s.norm() {
        term *= aw / (mu + 1.0);
        s += term;
        mu += 1.0;
        if mu > 200.0 {
            break; // unreachable for bounded a w: factorial decay dominates
        }
    }
    s
}

/// Local branch of log b on W_j: principal log of b/b(xi_j), which stays in
/// D(1, 0.45) there, shifted by the principal log of b(xi_j).
fn local_log(b: &RationalFn, b_centers: &[C], j: usize, z: C) -> C {
    let bj = b_centers[j];
    (b.eval_unchecked(z) / bj).ln() + bj.ln()
}

struct Assembly<'x> {
    a: &'x RationalFn,
    b: &'x RationalFn,
    split: &'x Splitting,
    b_centers: &'x [C],
}

impl Assembly<'_> {
    fn f_branch(&self, j: usize, z: C) -> C {
        local_log(self.b, self.b_centers, j, z)
    }

    fn data(&self, j: usize, z: C) -> C {
        self.f_branch(j, z) / self.a.eval_unchecked(z)
    }

    /// w_j at a point of W_j, reusing an already-computed transform value so
    /// grid assembly does not re-evaluate the Cauchy-Green integral.
    fn w_value(&self, j: usize, z: C, u: C) -> C {
        match self.split.method {
            SplitMethod::Exact => self.split.f2_at(z, &|j, z| self.data(j, z)),
            SplitMethod::Dbar => {
                let chi = self.split.chi(z);
                let c2 = if chi == 0.0 { C::new(0.0, 0.0) } else { -chi * self.data(j, z) };
                c2 - u
            }
        }
    }

    fn h_at(&self, z: C, u: C) -> C {
        match self.split.entry_containing(z) {
            Some(j) => self.f_branch(j, z) + self.a.eval_unchecked(z) * self.w_value(j, z, u),
            None => {
                let v = match self.split.method {
                    SplitMethod::Exact => {
                        self.split.principal.as_ref().expect("exact splitting").eval_unchecked(z)
                    }
                    SplitMethod::Dbar => -u,
                };
                self.a.eval_unchecked(z) * v
            }
        }
    }

    fn g_at(&self, z: C, u: C, h: C) -> C {
        match self.split.entry_containing(z) {
            Some(j) => {
                let w = self.w_value(j, z, u);
                series_g(self.a.eval_unchecked(z) * w, self.b.eval_unchecked(z) * w)
            }
            None => (h.exp() - self.b.eval_unchecked(z)) / self.a.eval_unchecked(z),
        }
    }
}

fn finalize(
    method: BassMethod,
    g: GridFn,
    h: GridFn,
    v: Option<RationalFn>,
    zeros: Vec<BassZero>,
    theta_eff: f64,
    overlap_defect: f64,
    ag: &GridFn,
    bg: &GridFn,
    tol: f64,
) -> Result<BassResult> {
    let lhs = bg.add(&g.mul(ag));
    let residual = lhs.sub(&h.map(C::exp)).max_abs();
    if residual > tol {
        return Err(Error::ResidualTooLarge { what: "bass identity", residual, tol });
    }
    Ok(BassResult {
        method,
        h_certificate: h.holomorphy_residual(),
        g_certificate: g.holomorphy_residual(),
        witness_min: lhs.min_abs(),
        g,
        h,
        v,
        zeros,
        theta_eff,
        residual,
        overlap_defect,
    })
}

/// Smallest power of two C such that Re(1 + b/C) clears the margin on every
/// grid point, making C(1 + b/C) = b + C zero-free with a principal log.
fn doubling_constant(bg: &GridFn) -> Result<f64> {
    let mut big_c = 1.0f64;
    while bg.values().map(|v| 1.0 + v.re / big_c).fold(f64::INFINITY, f64::min)
        < consts::BASS_C_RE_MARGIN
    {
        big_c *= 2.0;
        if !big_c.is_finite() {
            return Err(Error::InvalidInput("no doubling constant stabilizes 1 + b/C".into()));
        }
    }
    Ok(big_c)
}

fn zero_free_h(bg: &GridFn, big_c: f64) -> GridFn {
    let ln_c = C::new(big_c.ln(), 0.0);
    bg.map(|v| ln_c + (C::new(1.0, 0.0) + v / big_c).ln())
}

/// Zero-free branch on grid data alone, for callers whose a survives only as
/// grid samples (the GL(2) scaling is transcendental). Interior zero-freeness
/// of a is the caller's obligation — certified by winding count upstream —
/// but near-vanishing on the grids is still rejected here.
pub fn bass_solve_grid_zero_free(ag: &GridFn, bg: &GridFn) -> Result<BassResult> {
    let (min_sum, _) = coprime_extent(ag, bg)?;
    let amax = ag.max_abs();
    if let Some((z, v)) = ag
        .points_values()
        .min_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .filter(|(_, v)| v.norm() < consts::COMMON_ZERO_FACTOR * amax)
    {
        return Err(Error::VanishingValue { location: z, modulus: v.norm() });
    }
    let big_c = doubling_constant(bg)?;
    let g = ag.map(|v| C::new(big_c, 0.0) / v);
    let h = zero_free_h(bg, big_c);
    finalize(
        BassMethod::ZeroFree,
        g,
        h,
        None,
        vec![],
        consts::THETA_SAFETY * min_sum,
        0.0,
        ag,
        bg,
        consts::BASS_RESIDUAL_TOL_EXACT,
    )
}

/// Solve b + g a = e^h on the domain. `method` selects how the Cousin data
/// f/a is split when a has interior zeros; it is ignored on the zero-free
/// branch.
pub fn bass_solve(
    a: &RationalFn,
    b: &RationalFn,
    d: &Arc<Domain>,
    method: SplitMethod,
) -> Result<BassResult> {
    if a.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let ag = a.sample(d)?;
    let bg = b.sample(d)?;
    let (min_sum, max_sum) = coprime_extent(&ag, &bg)?;
    let theta_eff = consts::THETA_SAFETY * min_sum;
    let zset = zeros_in_domain(a, d)?;

    if zset.zeros.is_empty() {
        let big_c = doubling_constant(&bg)?;
        let g_rat = a.inv()?.scalar_mul(C::new(big_c, 0.0));
        let g = g_rat.sample(d)?;
        let h = zero_free_h(&bg, big_c);
        return finalize(
            BassMethod::ZeroFree,
            g,
            h,
            None,
            vec![],
            theta_eff,
            0.0,
            &ag,
            &bg,
            consts::BASS_RESIDUAL_TOL_EXACT,
        );
    }

    let cover = build_cover(b, d, &zset.zeros, theta_eff, max_sum)?;
    let entries: Vec<CoverEntry> = cover
        .entries
        .iter()
        .map(|e| CoverEntry {
            xi: e.xi,
            multiplicity: e.multiplicity,
            r_inner: 0.5 * e.radius,
            r_outer: e.radius,
        })
        .collect();
    let b_centers: Vec<C> = cover.entries.iter().map(|e| e.b_center).collect();

    let split = dbar::cousin_split(
        d,
        &entries,
        &|j, z| local_log(b, &b_centers, j, z) / a.eval_unchecked(z),
        method,
    )?;
    let asm = Assembly { a, b, split: &split, b_centers: &b_centers };

    // The two h formulas must agree where they meet (they are images of one
    // global function); measured on each W_j seam circle.
    let mut overlap_defect: f64 = 0.0;
    for (j, e) in entries.iter().enumerate() {
        // Nudged inside the seam circle so roundoff cannot push samples out
        // of the cover disk.
        for z in circle_points(e.xi, e.r_outer * (1.0 - 1e-9), consts::COUSIN_SEAM_SAMPLES) {
            let u = split.u_at(z);
            let az = a.eval_unchecked(z);
            let outer = az
                * match split.method {
                    SplitMethod::Exact => {
                        split.principal.as_ref().expect("exact splitting").eval_unchecked(z)
                    }
                    SplitMethod::Dbar => -u,
                };
            let inner = asm.f_branch(j, z) + az * asm.w_value(j, z, u);
            overlap_defect = overlap_defect.max((outer - inner).norm() / (1.0 + outer.norm()));
        }
    }
    if overlap_defect > consts::BASS_OVERLAP_TOL {
        return Err(Error::OverlapMismatch {
            mismatch: overlap_defect,
            tol: consts::BASS_OVERLAP_TOL,
        });
    }

    let u_grid = match &split.u {
        Some(u) => u.clone(),
        None => GridFn::zero(d),
    };
    let h = u_grid.map_with_point(|z, u| asm.h_at(z, u));
    let g = u_grid.zip_with_point(&h, |z, u, hv| asm.g_at(z, u, hv));

    let zeros: Vec<BassZero> = cover
        .entries
        .iter()
        .map(|e| BassZero {
            xi: e.xi,
            multiplicity: e.multiplicity,
            radius: e.radius,
            b_center: e.b_center,
            h_at_zero: asm.h_at(e.xi, split.u_at(e.xi)),
        })
        .collect();

    let (tag, tol) = match method {
        SplitMethod::Exact => (BassMethod::Exact, consts::BASS_RESIDUAL_TOL_EXACT),
        SplitMethod::Dbar => (BassMethod::Dbar, consts::BASS_RESIDUAL_TOL_DBAR),
    };
    finalize(
        tag,
        g,
        h,
        split.principal.clone(),
        zeros,
        theta_eff,
        overlap_defect,
        &ag,
        &bg,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::Polynomial;
    use crate::domain::Circle;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn poly(coeffs: &[C]) -> RationalFn {
        RationalFn::from_poly(Polynomial::new(coeffs.to_vec()))
    }

    #[test]
    fn cover_single_zero() {
        let d = Domain::unit_disk();
        let a = poly(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let b = RationalFn::one();
        let cover = cover_zeros(&a, &b, &d).unwrap();
        assert_eq!(cover.entries.len(), 1);
        let e = cover.entries[0];
        assert!(e.xi.norm() < 1e-9);
        assert_eq!(e.multiplicity, 1);
        // b constant: the image condition holds at the starting radius.
        assert!((e.radius - consts::COVER_RADIUS_FACTOR).abs() < 1e-9);
        assert!((e.b_center - c(1.0, 0.0)).norm() < 1e-12);
        // min over grids of |z| + 1 is exactly 1 (0 is a grid point), halved.
        assert!(cover.theta_eff >= 0.5 - 1e-12 && cover.theta_eff < 0.55);
    }

    #[test]
    fn cover_rejects_boundary_zero_and_common_zero() {
        let d = Domain::unit_disk();
        let z = poly(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let z_minus_1 = poly(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        match cover_zeros(&z_minus_1, &RationalFn::one(), &d) {
            Err(Error::BoundaryZero { .. }) => {}
            other => panic!("expected BoundaryZero, got {other:?}"),
        }
        match cover_zeros(&z, &z, &d) {
            Err(Error::CommonZero { .. }) => {}
            other => panic!("expected CommonZero, got {other:?}"),
        }
    }

    #[test]
    fn zero_free_doubles_to_two() {
        let d = Domain::unit_disk();
        let a = RationalFn::one();
        let b = poly(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let r = bass_solve(&a, &b, &d, SplitMethod::Exact).unwrap();
        assert_eq!(r.method, BassMethod::ZeroFree);
        assert!(r.zeros.is_empty());
        // C = 1 fails (Re(1 + z) vanishes near z = -1), C = 2 clears 0.1.
        let g_dev = r.g.values().map(|v| (v - c(2.0, 0.0)).norm()).fold(0.0, f64::max);
        assert!(g_dev < 1e-12, "g should be the constant 2, dev {g_dev}");
        let h_dev = r
            .h
            .points_values()
            .map(|(z, hv)| {
                let want = c((2.0f64).ln(), 0.0) + (c(1.0, 0.0) + z / 2.0).ln();
                (hv - want).norm()
            })
            .fold(0.0, f64::max);
        assert!(h_dev < 1e-12, "h formula deviation {h_dev}");
        assert!(r.residual < 1e-12, "residual {}", r.residual);
        assert!(r.witness_min > 0.9);
        assert!(r.h_certificate < 1e-6 && r.g_certificate < 1e-6);
    }

    #[test]
    fn single_zero_forced_value() {
        let d = Domain::unit_disk();
        let a = poly(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let b = RationalFn::one();
        let r = bass_solve(&a, &b, &d, SplitMethod::Exact).unwrap();
        assert_eq!(r.method, BassMethod::Exact);
        assert!(r.residual <= consts::BASS_RESIDUAL_TOL_EXACT);
        // b is 1 everywhere, so h(0) is forced to Log 1 = 0 — and in fact
        // f vanishes identically, making h and g vanish too.
        assert!(r.zeros[0].h_at_zero.norm() < 1e-8);
        assert!(r.h.max_abs() < 1e-8);
        assert!(r.g.max_abs() < 1e-8);
        assert!(r.overlap_defect <= consts::BASS_OVERLAP_TOL);
        assert!(r.witness_min > 0.99);
    }

    #[test]
    fn single_zero_nonconstant_b() {
        let d = Domain::unit_disk();
        let a = poly(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let b = poly(&[c(1.0, 0.0), c(0.5, 0.0)]);
        let r = bass_solve(&a, &b, &d, SplitMethod::Exact).unwrap();
        assert!(r.residual <= consts::BASS_RESIDUAL_TOL_EXACT, "residual {}", r.residual);
        let forced = (r.zeros[0].h_at_zero - c(1.0, 0.0).ln()).norm();
        assert!(forced < 1e-8, "h(0) must be Log b(0) = 0, off by {forced}");
        assert!(r.h_certificate < 1e-6, "h certificate {}", r.h_certificate);
        assert!(r.g_certificate < 1e-6, "g certificate {}", r.g_certificate);
        assert!(r.witness_min > 0.0);
        assert!(r.v.is_some());
    }

    #[test]
    fn double_zero_multiplicity_two() {
        let d = Domain::unit_disk();
        let a = poly(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let b = poly(&[c(1.0, 0.0), c(0.5, 0.0)]);
        let r = bass_solve(&a, &b, &d, SplitMethod::Exact).unwrap();
        assert_eq!(r.zeros.len(), 1);
        assert_eq!(r.zeros[0].multiplicity, 2);
        assert!(r.residual <= consts::BASS_RESIDUAL_TOL_EXACT, "residual {}", r.residual);
        // The clustered zero sits at roundoff distance from 0; the forced
        // value tracks b at the computed location.
        let forced = (r.zeros[0].h_at_zero - r.zeros[0].b_center.ln()).norm();
        assert!(forced < 1e-8, "forced value off by {forced}");
        assert!(r.h_certificate < 1e-6, "h certificate {}", r.h_certificate);
    }

    #[test]
    fn two_zeros_on_annulus_both_methods() {
        let d = Domain::with_defaults(
            Circle::new(c(0.0, 0.0), 1.0),
            vec![Circle::new(c(0.0, 0.5), 0.25)],
        )
        .unwrap();
        let a = RationalFn::from_poly(Polynomial::from_roots(&[c(0.2, 0.0), c(-0.3, 0.0)]));
        let b = poly(&[c(1.0, 0.0), c(0.5, 0.0)]);
        for method in [SplitMethod::Exact, SplitMethod::Dbar] {
            let r = bass_solve(&a, &b, &d, method).unwrap();
            assert_eq!(r.zeros.len(), 2);
            let tol = match method {
                SplitMethod::Exact => consts::BASS_RESIDUAL_TOL_EXACT,
                SplitMethod::Dbar => consts::BASS_RESIDUAL_TOL_DBAR,
            };
            assert!(r.residual <= tol, "{method:?} residual {}", r.residual);
            // Forced values are branch-independent: h(xi) = Log b(xi).
            for z in &r.zeros {
                let want = z.b_center.ln();
                assert!(
                    (z.h_at_zero - want).norm() < 1e-8,
                    "{method:?} forced value off by {}",
                    (z.h_at_zero - want).norm()
                );
            }
            assert!(r.witness_min > 0.0);
            assert!(r.overlap_defect <= consts::BASS_OVERLAP_TOL);
        }
    }

    #[test]
    fn scaling_covariance_of_residual_gate() {
        let d = Domain::unit_disk();
        let a = poly(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let b = poly(&[c(1.0, 0.0), c(0.5, 0.0)]);
        for kappa in [c(2.0, 0.0), c(0.3, -1.1), c(-4.0, 0.25)] {
            let bk = b.scalar_mul(kappa);
            let r = bass_solve(&a, &bk, &d, SplitMethod::Exact).unwrap();
            assert!(r.residual <= consts::BASS_RESIDUAL_TOL_EXACT, "kappa {kappa} residual {}", r.residual);
            let want = (b.eval_unchecked(c(0.0, 0.0)) * kappa).ln();
            assert!((r.zeros[0].h_at_zero - want).norm() < 1e-8);
        }
    }

    #[test]
    fn rejects_identically_zero_a() {
        let d = Domain::unit_disk();
        match bass_solve(&RationalFn::zero(), &RationalFn::one(), &d, SplitMethod::Exact) {
            Err(Error::IdenticallyZero) => {}
            other => panic!("expected IdenticallyZero, got {other:?}"),
        }
    }
}
