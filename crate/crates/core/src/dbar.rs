//! The d-bar machinery: smooth radial cutoffs, compactly supported (0,1)
//! data on annular polar meshes, the Cauchy-Green transform
//!
//! ```text
//!     u(w) = -(1/pi) integral over the support of g(z) dA(z) / (z - w)
//! ```
//!
//! which solves du/dz̄ = g, and the additive Cousin splitting of overlap data
//! into holomorphic halves — either through the transform or, when the data
//! is meromorphic across the cover disks, through exact principal parts.
//!
//! The transform is evaluated per target point in one of three zones relative
//! to each support annulus: a truncated Laurent series in r_outer/t far
//! outside, a truncated Taylor series in t/r_inner deep inside the hole, and
//! a direct cell sum in between, where cells whose equal-area disk contains
//! the target switch to the exactly integrated disk kernel. At the activation
//! thresholds the series tails sit below 1e-18 relative, so the zones agree
//! to machine precision and the dispatch cannot be seen in the output.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64 as C;

use crate::consts;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::funcrep::{circle_points, contour_coeffs, taylor_coeffs, GridFn, Polynomial, RationalFn};

/// Radial C^2 cutoff around a center: 0 on the closed inner disk, 1 outside
/// the outer circle, quintic smoothstep across the band.
#[derive(Debug, Clone, Copy)]
pub struct Cutoff {
    pub center: C,
    pub r_inner: f64,
    pub r_outer: f64,
}

impl Cutoff {
    pub fn new(center: C, r_inner: f64, r_outer: f64) -> Result<Self> {
        if !(r_inner > 0.0 && r_outer > r_inner && r_outer.is_finite()) {
            return Err(Error::BadRadii { r_inner, r_outer });
        }
        Ok(Cutoff { center, r_inner, r_outer })
    }

    fn band_parameter(&self, z: C) -> f64 {
        ((z - self.center).norm() - self.r_inner) / (self.r_outer - self.r_inner)
    }

    pub fn chi(&self, z: C) -> f64 {
        let t = self.band_parameter(z);
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else {
            t * t * t * (10.0 + t * (6.0 * t - 15.0))
        }
    }

    /// Coefficient of dz̄ in dchi/dz̄: the radial chain rule through |z - center|,
    /// whose z̄-derivative is (z - center) / (2 |z - center|).
    pub fn dbar_chi(&self, z: C) -> C {
        let t = self.band_parameter(z);
        if t <= 0.0 || t >= 1.0 {
            return C::new(0.0, 0.0);
        }
        let s = t * (1.0 - t);
        let slope = 30.0 * s * s / (self.r_outer - self.r_inner);
        let d = z - self.center;
        d * (slope / (2.0 * d.norm()))
    }
}

/// Polar midpoint mesh over one support annulus with precomputed cell
/// weights and the Laurent/Taylor moment tables for far-field evaluation.
#[derive(Debug, Clone)]
pub struct AnnulusMesh {
    pub center: C,
    pub r_inner: f64,
    pub r_outer: f64,
    pub n_r: usize,
    pub n_t: usize,
    /// Node offsets from the center, ring-major.
    offsets: Vec<C>,
    /// g(node) times exact cell area, ring-major.
    weights: Vec<C>,
    /// Cell area per ring (rho * dr * dtheta, exact for the polar cell).
    ring_area: Vec<f64>,
    /// Radius of the equal-area disk per ring.
    ring_disk_radius: Vec<f64>,
    /// sum_k W_k (s_k / r_outer)^m for m = 0..OUTER_TERMS.
    outer_moments: Vec<C>,
    /// sum_k W_k (r_inner / s_k)^(m+1) for m = 0..INNER_TERMS; empty if r_inner = 0.
    inner_moments: Vec<C>,
}

impl AnnulusMesh {
    fn build(center: C, r_inner: f64, r_outer: f64, n_r: usize, n_t: usize, g: &dyn Fn(C) -> C) -> Result<Self> {
        let dr = (r_outer - r_inner) / n_r as f64;
        let dt = TAU / n_t as f64;
        let mut offsets = Vec::with_capacity(n_r * n_t);
        let mut weights = Vec::with_capacity(n_r * n_t);
        let mut ring_area = Vec::with_capacity(n_r);
        let mut ring_disk_radius = Vec::with_capacity(n_r);
        for i in 0..n_r {
            let rho = r_inner + (i as f64 + 0.5) * dr;
            let area = rho * dr * dt;
            ring_area.push(area);
            ring_disk_radius.push((area / PI).sqrt());
            for j in 0..n_t {
                let e = C::from_polar(rho, (j as f64 + 0.5) * dt);
                let val = g(center + e);
                if !(val.re.is_finite() && val.im.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "non-finite coefficient sample {val} at {}",
                        center + e
                    )));
                }
                offsets.push(e);
                weights.push(val * area);
            }
        }

        let mut outer_moments = vec![C::new(0.0, 0.0); consts::DBAR_FF_OUTER_TERMS];
        for (k, &s) in offsets.iter().enumerate() {
            let shat = s / r_outer;
            let mut p = weights[k];
            for m in outer_moments.iter_mut() {
                *m += p;
                p *= shat;
            }
        }
        let inner_moments = if r_inner > 0.0 {
            let mut table = vec![C::new(0.0, 0.0); consts::DBAR_FF_INNER_TERMS];
            for (k, &s) in offsets.iter().enumerate() {
                let base = r_inner / s;
                let mut p = weights[k] * base;
                for m in table.iter_mut() {
                    *m += p;
                    p *= base;
                }
            }
            table
        } else {
            Vec::new()
        };

        Ok(AnnulusMesh {
            center,
            r_inner,
            r_outer,
            n_r,
            n_t,
            offsets,
            weights,
            ring_area,
            ring_disk_radius,
            outer_moments,
            inner_moments,
        })
    }

    /// This annulus' part of the transform at one target.
    pub fn contribution(&self, w: C) -> C {
        let t = w - self.center;
        let tn = t.norm();
        if tn >= consts::DBAR_FF_OUTER_FACTOR * self.r_outer {
            // u = (1/(pi r2)) sum_m M_m q^(m+1), q = r2/t, |q| <= 0.8.
            let q = self.r_outer / t;
            let mut s = C::new(0.0, 0.0);
            for &m in self.outer_moments.iter().rev() {
                s = s * q + m;
            }
            return s * q / (PI * self.r_outer);
        }
        if self.r_inner > 0.0 && tn <= consts::DBAR_FF_INNER_FACTOR * self.r_inner {
            // u = -(1/(pi r1)) sum_m L_m p^m, p = t/r1, |p| <= 0.75.
            let p = t / self.r_inner;
            let mut s = C::new(0.0, 0.0);
            for &m in self.inner_moments.iter().rev() {
                s = s * p + m;
            }
            return -s / (PI * self.r_inner);
        }
        // Direct cell sum. A cell's exact equal-area-disk kernel integral is
        // -pi conj(a) when the target sits inside the disk (a = w - node) and
        // -pi rho^2/a outside it — and the outside value IS the plain
        // midpoint term, so switching at the disk radius (always below the
        // half-cell diameter) is exact and keeps the sum continuous in w.
        let mut sum = C::new(0.0, 0.0);
        let mut k = 0;
        for i in 0..self.n_r {
            let disk_sq = self.ring_disk_radius[i] * self.ring_disk_radius[i];
            let inv_area = 1.0 / self.ring_area[i];
            for _ in 0..self.n_t {
                let a = t - self.offsets[k];
                let wk = self.weights[k];
                sum += if a.norm_sqr() < disk_sq {
                    wk * a.conj() * inv_area
                } else {
                    wk / (PI * a)
                };
                k += 1;
            }
        }
        sum
    }
}

/// A continuous (0,1)-form g dz̄ supported on a union of annuli strictly
/// inside the domain, sampled on per-annulus polar meshes.
#[derive(Debug, Clone)]
pub struct Form01 {
    pub domain: Arc<Domain>,
    pub meshes: Vec<AnnulusMesh>,
}

impl Form01 {
    /// Sample `g(annulus index, z)` on polar meshes over the given support
    /// annuli `(center, r_inner, r_outer)`. Every annulus must clear the
    /// domain boundary: inside the outer circle, and each hole either
    /// swallowed by the annulus' inner disk or disjoint from its outer disk.
    pub fn from_fn(
        domain: &Arc<Domain>,
        supports: &[(C, f64, f64)],
        n_r: usize,
        n_t: usize,
        g: impl Fn(usize, C) -> C,
    ) -> Result<Form01> {
        if n_r == 0 || n_t == 0 {
            return Err(Error::InvalidInput(format!("degenerate dbar mesh {n_r} x {n_t}")));
        }
        let tol = domain.boundary_tol();
        for &(center, r1, r2) in supports {
            if !(r1 >= 0.0 && r2 > r1 && r2.is_finite()) {
                return Err(Error::BadRadii { r_inner: r1, r_outer: r2 });
            }
            if (center - domain.outer.center).norm() + r2 > domain.outer.radius - tol {
                return Err(Error::SupportTouchesBoundary { center });
            }
            for h in &domain.holes {
                let d = (center - h.center).norm();
                let hole_inside_ring = d + h.radius <= r1 - tol;
                let hole_outside = d - h.radius >= r2 + tol;
                if !(hole_inside_ring || hole_outside) {
                    return Err(Error::SupportTouchesBoundary { center });
                }
            }
        }
        let mut meshes = Vec::with_capacity(supports.len());
        for (j, &(center, r1, r2)) in supports.iter().enumerate() {
            meshes.push(AnnulusMesh::build(center, r1, r2, n_r, n_t, &|z| g(j, z))?);
        }
        Ok(Form01 { domain: domain.clone(), meshes })
    }

    pub fn transform_at(&self, w: C) -> C {
        self.meshes.iter().map(|m| m.contribution(w)).sum()
    }
}

/// Evaluate the Cauchy-Green transform of `alpha` at the given targets.
pub fn cauchy_green_solve(alpha: &Form01, targets: &[C]) -> Vec<C> {
    targets.iter().map(|&w| alpha.transform_at(w)).collect()
}

/// The transform on the grids of alpha's own domain.
pub fn solve_on_grid(alpha: &Form01) -> GridFn {
    let d = &alpha.domain;
    let boundary = d.boundary_points().map(|z| alpha.transform_at(z)).collect();
    let interior = d.interior.iter().map(|&z| alpha.transform_at(z)).collect();
    GridFn::from_values(d.clone(), boundary, interior)
}

/// One disk of a Cousin cover: the zero location, the pole order of the data
/// there, and the cutoff band radii (the cutoff is 0 inside r_inner and 1
/// outside r_outer).
#[derive(Debug, Clone, Copy)]
pub struct CoverEntry {
    pub xi: C,
    pub multiplicity: usize,
    pub r_inner: f64,
    pub r_outer: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMethod {
    Exact,
    Dbar,
}

/// Result of a Cousin splitting f = f1 - f2: f1 holomorphic away from the
/// cover disks, f2 holomorphic across them. Evaluation goes through
/// [`Splitting::f1_at`] / [`Splitting::f2_at`], which take the original data
/// closure again; the struct stores only what the construction derived.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub method: SplitMethod,
    pub entries: Vec<CoverEntry>,
    pub cutoffs: Vec<Cutoff>,
    /// Exact path: f1 as a rational function (the summed principal parts).
    pub principal: Option<RationalFn>,
    /// Exact path: Taylor coefficients of f - principal at each xi, used
    /// inside the core where direct subtraction would cancel catastrophically.
    pub regular_taylor: Vec<Vec<C>>,
    /// Dbar path: the (0,1) data -dchi f and its transform on the domain grids.
    pub alpha: Option<Form01>,
    pub u: Option<GridFn>,
    /// Worst normalized defect of f1 - f2 = f over the seam samples.
    pub overlap_defect: f64,
}

impl Splitting {
    /// Product of the per-entry cutoffs (exactly 1 outside every cover disk).
    pub fn chi(&self, z: C) -> f64 {
        self.cutoffs.iter().map(|c| c.chi(z)).product()
    }

    /// Index of the cover disk containing z, if any (disks are disjoint).
    pub fn entry_containing(&self, z: C) -> Option<usize> {
        self.entries.iter().position(|e| (z - e.xi).norm() <= e.r_outer)
    }

    /// Transform value at an arbitrary point; identically 0 on the exact path.
    pub fn u_at(&self, w: C) -> C {
        match &self.alpha {
            Some(alpha) => alpha.transform_at(w),
            None => C::new(0.0, 0.0),
        }
    }

    pub fn f1_at(&self, z: C, f: &dyn Fn(usize, C) -> C) -> C {
        match self.method {
            SplitMethod::Exact => self.principal.as_ref().expect("exact splitting").eval_unchecked(z),
            SplitMethod::Dbar => {
                let chi = self.chi(z);
                let c1 = if 1.0 - chi == 0.0 {
                    C::new(0.0, 0.0)
                } else {
                    let j = self.entry_containing(z).expect("chi < 1 only inside the cover");
                    (1.0 - chi) * f(j, z)
                };
                c1 - self.u_at(z)
            }
        }
    }

    /// f2 is only defined on the (closed) cover disks.
    pub fn f2_at(&self, z: C, f: &dyn Fn(usize, C) -> C) -> C {
        let j = self.entry_containing(z).expect("f2 evaluated outside the cover");
        match self.method {
            SplitMethod::Exact => {
                let e = self.entries[j];
                if (z - e.xi).norm() < consts::TAYLOR_CORE_FACTOR * e.r_outer {
                    -taylor_eval(&self.regular_taylor[j], z - e.xi)
                } else {
                    self.principal.as_ref().expect("exact splitting").eval_unchecked(z) - f(j, z)
                }
            }
            SplitMethod::Dbar => {
                let chi = self.chi(z);
                let c2 = if chi == 0.0 { C::new(0.0, 0.0) } else { -chi * f(j, z) };
                c2 - self.u_at(z)
            }
        }
    }
}

fn taylor_eval(coeffs: &[C], dz: C) -> C {
    let mut s = C::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        s = s * dz + c;
    }
    s
}

/// Split overlap data f into f1 - f2 over the cover. `f(j, z)` evaluates the
/// data using the branch valid on cover disk j; the exact path requires f to
/// be meromorphic across the disks with the entry's pole order.
pub fn cousin_split(
    domain: &Arc<Domain>,
    entries: &[CoverEntry],
    f: &dyn Fn(usize, C) -> C,
    method: SplitMethod,
) -> Result<Splitting> {
    cousin_split_with_mesh(domain, entries, f, method, consts::DBAR_COUSIN_NR, consts::DBAR_COUSIN_NT)
}

pub fn cousin_split_with_mesh(
    domain: &Arc<Domain>,
    entries: &[CoverEntry],
    f: &dyn Fn(usize, C) -> C,
    method: SplitMethod,
    n_r: usize,
    n_t: usize,
) -> Result<Splitting> {
    if entries.is_empty() {
        return Err(Error::InvalidInput("cousin_split needs a nonempty cover".into()));
    }
    let tol = domain.boundary_tol();
    let mut cutoffs = Vec::with_capacity(entries.len());
    for e in entries {
        if e.multiplicity == 0 {
            return Err(Error::InvalidInput(format!("cover entry at {} with multiplicity 0", e.xi)));
        }
        cutoffs.push(Cutoff::new(e.xi, e.r_inner, e.r_outer)?);
        // The whole disk must sit in the domain: the data's local branch and
        // the contour circles live on it.
        if domain.signed_membership(e.xi) < e.r_outer + tol {
            return Err(Error::SupportTouchesBoundary { center: e.xi });
        }
    }
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            let d = (entries[i].xi - entries[j].xi).norm();
            if d <= entries[i].r_outer + entries[j].r_outer {
                return Err(Error::InvalidInput(format!(
                    "cover disks at {} and {} overlap",
                    entries[i].xi, entries[j].xi
                )));
            }
        }
    }

    let mut splitting = match method {
        SplitMethod::Exact => {
            let mut principal = RationalFn::zero();
            let mut circle_samples = Vec::with_capacity(entries.len());
            for (j, e) in entries.iter().enumerate() {
                let rc = consts::CONTOUR_RADIUS_FACTOR * e.r_outer;
                let pts = circle_points(e.xi, rc, consts::CONTOUR_SAMPLES);
                let vals: Vec<C> = pts.iter().map(|&z| f(j, z)).collect();
                if vals.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                    return Err(Error::InvalidInput(format!(
                        "overlap data non-finite on the contour around {}",
                        e.xi
                    )));
                }
                let pp = contour_coeffs(&vals, rc, e.multiplicity)?;
                // sum_{k=1..m} c_k (z - xi)^(-k) as one rational term
                let base = Polynomial::from_roots(&[e.xi]);
                let mut num = Polynomial::zero();
                let mut pow = Polynomial::one();
                for k in (1..=e.multiplicity).rev() {
                    num = num.add(&pow.scalar_mul(pp[k - 1]));
                    if k > 1 {
                        pow = pow.mul(&base);
                    }
                }
                let den = Polynomial::from_roots(&vec![e.xi; e.multiplicity]);
                principal = principal.add(&RationalFn::new(num, den)?);
                circle_samples.push((pts, vals, rc));
            }
            // Taylor data of the regular part f - principal at each zero.
            let mut regular_taylor = Vec::with_capacity(entries.len());
            for (pts, vals, rc) in &circle_samples {
                let reg: Vec<C> = pts
                    .iter()
                    .zip(vals)
                    .map(|(&z, &v)| v - principal.eval_unchecked(z))
                    .collect();
                regular_taylor.push(taylor_coeffs(&reg, *rc, consts::TAYLOR_TERMS)?);
            }
            Splitting {
                method,
                entries: entries.to_vec(),
                cutoffs,
                principal: Some(principal),
                regular_taylor,
                alpha: None,
                u: None,
                overlap_defect: 0.0,
            }
        }
        SplitMethod::Dbar => {
            let supports: Vec<(C, f64, f64)> =
                entries.iter().map(|e| (e.xi, e.r_inner, e.r_outer)).collect();
            // On annulus j every other cutoff is exactly 1 (disjoint disks),
            // so -dbar(prod chi) f collapses to -dbar(chi_j) f there.
            let local_cutoffs = cutoffs.clone();
            let alpha = Form01::from_fn(domain, &supports, n_r, n_t, |j, z| {
                -local_cutoffs[j].dbar_chi(z) * f(j, z)
            })?;
            let u = solve_on_grid(&alpha);
            Splitting {
                method,
                entries: entries.to_vec(),
                cutoffs,
                principal: None,
                regular_taylor: Vec::new(),
                alpha: Some(alpha),
                u: Some(u),
                overlap_defect: 0.0,
            }
        }
    };

    // Defining identity f1 - f2 = f on seam circles. On the exact path the
    // seam radius sits inside the Taylor core, so this measures the series
    // against the directly subtracted regular part; on the dbar path the
    // identity is structural and the defect is rounding noise.
    let seam_factor = match method {
        SplitMethod::Exact => consts::COUSIN_SEAM_FACTOR,
        SplitMethod::Dbar => 0.5 * (1.0 + consts::COUSIN_SEAM_FACTOR),
    };
    let mut defect = 0.0f64;
    for (j, e) in entries.iter().enumerate() {
        let pts = circle_points(e.xi, seam_factor * e.r_outer, consts::COUSIN_SEAM_SAMPLES);
        let fmax = pts.iter().map(|&z| f(j, z).norm()).fold(0.0, f64::max);
        for &z in &pts {
            let lhs = splitting.f1_at(z, f) - splitting.f2_at(z, f);
            defect = defect.max((lhs - f(j, z)).norm() / (1.0 + fmax));
        }
    }
    splitting.overlap_defect = defect;
    let tol = match method {
        SplitMethod::Exact => consts::COUSIN_TOL_EXACT,
        SplitMethod::Dbar => consts::COUSIN_TOL_DBAR,
    };
    if defect > tol {
        return Err(Error::OverlapMismatch { mismatch: defect, tol });
    }
    Ok(splitting)
}

// ---------------------------------------------------------------------------
// Self-test: manufactured solution with a known closed form.
//
// bump(z) is a radial plateau supported in the annulus [0.2, 0.5] of the unit
// disk, so u(w) = bump(w) conj(w) is compactly supported, vanishes at
// infinity, and solves du/dz̄ = (dbar bump) z̄ + bump. The transform of that
// data must therefore reproduce bump(w) conj(w) exactly, everywhere.
// ---------------------------------------------------------------------------

const BUMP_RISE: (f64, f64) = (0.2, 0.29);
const BUMP_FALL: (f64, f64) = (0.41, 0.5);

fn bump_cutoffs() -> (Cutoff, Cutoff) {
    let zero = C::new(0.0, 0.0);
    (
        Cutoff::new(zero, BUMP_RISE.0, BUMP_RISE.1).expect("static radii"),
        Cutoff::new(zero, BUMP_FALL.0, BUMP_FALL.1).expect("static radii"),
    )
}

fn bump(z: C) -> f64 {
    let (rise, fall) = bump_cutoffs();
    rise.chi(z) * (1.0 - fall.chi(z))
}

fn dbar_bump(z: C) -> C {
    let (rise, fall) = bump_cutoffs();
    rise.dbar_chi(z) * (1.0 - fall.chi(z)) - rise.chi(z) * fall.dbar_chi(z)
}

fn selftest_probes() -> Vec<C> {
    // Golden-ratio strides in both radius and angle keep the probe lattice
    // incommensurate with every polar mesh, so each refinement level samples
    // the full distribution of cell phases instead of a single drifting one.
    let phi = 0.618_033_988_749_894_9;
    let mut probes = Vec::with_capacity(24 * 32);
    for k in 0..24 {
        let rho = 0.02 + 0.69 * ((k as f64 + 0.37) * phi).fract();
        for l in 0..32 {
            probes.push(C::from_polar(rho, TAU * ((l as f64 * phi).fract() + 0.011 * k as f64)));
        }
    }
    probes
}

#[derive(Debug, Clone, Copy)]
pub struct SelftestRow {
    pub n_r: usize,
    pub n_t: usize,
    pub rel_err: f64,
}

/// Convergence study of the transform against the manufactured solution:
/// for each mesh level, the relative L2 error over a fixed probe set.
pub fn selftest(levels: &[(usize, usize)]) -> Result<Vec<SelftestRow>> {
    let domain = Domain::unit_disk();
    let probes = selftest_probes();
    let truth: Vec<C> = probes.iter().map(|&w| bump(w) * w.conj()).collect();
    let scale = (truth.iter().map(|v| v.norm_sqr()).sum::<f64>() / truth.len() as f64).sqrt();
    let support = [(C::new(0.0, 0.0), BUMP_RISE.0, BUMP_FALL.1)];
    let mut rows = Vec::with_capacity(levels.len());
    for &(n_r, n_t) in levels {
        let alpha = Form01::from_fn(&domain, &support, n_r, n_t, |_, z| {
            dbar_bump(z) * z.conj() + bump(z)
        })?;
        let u = cauchy_green_solve(&alpha, &probes);
        let err = (u
            .iter()
            .zip(&truth)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            / probes.len() as f64)
            .sqrt();
        rows.push(SelftestRow { n_r, n_t, rel_err: err / scale });
    }
    Ok(rows)
}

/// Holomorphy certificates of the transform away from its support, measured
/// on two subdomain grids 0.1 clear of the support annulus: an annulus
/// outside it and a disk inside it. Uses the data form (dbar bump) z̄, whose
/// moments do not vanish, so the transform is genuinely nonzero off-support.
/// Returns (outside residual, inside residual).
pub fn selftest_certificates(n_r: usize, n_t: usize) -> Result<(f64, f64)> {
    let domain = Domain::unit_disk();
    let zero = C::new(0.0, 0.0);
    let support = [(zero, BUMP_RISE.0, BUMP_FALL.1)];
    let alpha = Form01::from_fn(&domain, &support, n_r, n_t, |_, z| dbar_bump(z) * z.conj())?;
    let outside = Domain::with_defaults(
        crate::domain::Circle::new(zero, 1.0),
        vec![crate::domain::Circle::new(zero, BUMP_FALL.1 + 0.1)],
    )?;
    let inside = Domain::with_defaults(crate::domain::Circle::new(zero, BUMP_RISE.0 - 0.1), vec![])?;
    let residual_on = |d: &Arc<Domain>| {
        let boundary = d.boundary_points().map(|z| alpha.transform_at(z)).collect();
        let interior = d.interior.iter().map(|&z| alpha.transform_at(z)).collect();
        GridFn::from_values(d.clone(), boundary, interior).holomorphy_residual()
    };
    Ok((residual_on(&outside), residual_on(&inside)))
}
