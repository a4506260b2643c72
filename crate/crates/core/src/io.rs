//! On-disk formats: JSON descriptors for domains, rational matrices, and run
//! options; CSV for grid functions; and the run manifest every command emits,
//! pass or fail, with a machine-readable error taxonomy.
//!
//! Complex scalars serialize as `[re, im]`. Floating values go through
//! serde_json's shortest round-trip representation in JSON and through
//! `{:.16e}` (17 significant digits) in CSV, so both formats parse back to
//! the identical bits.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64 as C;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::consts;
use crate::dbar::SplitMethod;
use crate::domain::{Circle, Domain};
use crate::error::{Error, ErrorClass, Result};
use crate::factorize::FactorizeOptions;
use crate::funcrep::{GridFn, Polynomial, RationalFn};
use crate::mat2::MatFn;

// ---- domain ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleDesc {
    pub center: [f64; 2],
    pub radius: f64,
}

impl CircleDesc {
    pub fn of(c: &Circle) -> Self {
        CircleDesc { center: [c.center.re, c.center.im], radius: c.radius }
    }

    pub fn to_circle(&self) -> Circle {
        Circle::new(C::new(self.center[0], self.center[1]), self.radius)
    }
}

fn default_boundary_n() -> usize {
    consts::DEFAULT_BOUNDARY_N
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainDesc {
    pub outer: CircleDesc,
    #[serde(default)]
    pub holes: Vec<CircleDesc>,
    #[serde(default = "default_boundary_n")]
    pub boundary_n: usize,
    /// Defaults to outer radius / 64 when absent.
    #[serde(default)]
    pub interior_spacing: Option<f64>,
}

impl DomainDesc {
    pub fn of(d: &Domain) -> Self {
        DomainDesc {
            outer: CircleDesc::of(&d.outer),
            holes: d.holes.iter().map(CircleDesc::of).collect(),
            boundary_n: d.boundary_n,
            interior_spacing: Some(d.interior_spacing),
        }
    }

    pub fn to_domain(&self) -> Result<Arc<Domain>> {
        let outer = self.outer.to_circle();
        let spacing = self
            .interior_spacing
            .unwrap_or(outer.radius * consts::DEFAULT_SPACING_FACTOR);
        Domain::new(
            outer,
            self.holes.iter().map(CircleDesc::to_circle).collect(),
            self.boundary_n,
            spacing,
        )
    }
}

// ---- rational entries and matrices ----

/// Coefficients ascending by degree; an empty `den` means the constant 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalDesc {
    pub num: Vec<[f64; 2]>,
    #[serde(default)]
    pub den: Vec<[f64; 2]>,
}

fn coeffs_to_poly(cs: &[[f64; 2]]) -> Polynomial {
    Polynomial::new(cs.iter().map(|&[re, im]| C::new(re, im)).collect())
}

fn poly_to_coeffs(p: &Polynomial) -> Vec<[f64; 2]> {
    p.coeffs.iter().map(|c| [c.re, c.im]).collect()
}

impl RationalDesc {
    pub fn of(r: &RationalFn) -> Self {
        RationalDesc { num: poly_to_coeffs(&r.num), den: poly_to_coeffs(&r.den) }
    }

    pub fn to_rational(&self) -> Result<RationalFn> {
        let den = if self.den.is_empty() { Polynomial::one() } else { coeffs_to_poly(&self.den) };
        RationalFn::new(coeffs_to_poly(&self.num), den)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDesc {
    pub entries: [[RationalDesc; 2]; 2],
}

impl MatrixDesc {
    pub fn of(m: &MatFn) -> Option<Self> {
        let e = m.rational_entries()?;
        Some(MatrixDesc {
            entries: [
                [RationalDesc::of(&e[0][0]), RationalDesc::of(&e[0][1])],
                [RationalDesc::of(&e[1][0]), RationalDesc::of(&e[1][1])],
            ],
        })
    }

    pub fn to_matfn(&self, d: &Arc<Domain>) -> Result<MatFn> {
        let e = &self.entries;
        MatFn::from_rational(
            d.clone(),
            [
                [e[0][0].to_rational()?, e[0][1].to_rational()?],
                [e[1][0].to_rational()?, e[1][1].to_rational()?],
            ],
        )
    }
}

// ---- instances ----

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OptsDesc {
    #[serde(default)]
    pub tol: Option<f64>,
    /// "exact" (default) or "dbar".
    #[serde(default)]
    pub method: Option<String>,
    #[serde(default)]
    pub boundary_n: Option<usize>,
    #[serde(default)]
    pub interior_spacing: Option<f64>,
}

pub fn parse_method(name: Option<&str>) -> Result<SplitMethod> {
    match name {
        None | Some("exact") => Ok(SplitMethod::Exact),
        Some("dbar") => Ok(SplitMethod::Dbar),
        Some(other) => Err(Error::InvalidInput(format!(
            "unknown method {other:?} (expected \"exact\" or \"dbar\")"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDesc {
    pub domain: DomainDesc,
    pub matrix: MatrixDesc,
    #[serde(default)]
    pub opts: OptsDesc,
}

impl InstanceDesc {
    /// Materialize the instance: grid overrides from `opts` applied to the
    /// domain, entries validated against it, options checked.
    pub fn build(&self) -> Result<(Arc<Domain>, MatFn, FactorizeOptions)> {
        let mut dd = self.domain.clone();
        if let Some(n) = self.opts.boundary_n {
            dd.boundary_n = n;
        }
        if let Some(s) = self.opts.interior_spacing {
            dd.interior_spacing = Some(s);
        }
        let d = dd.to_domain()?;
        if let Some(t) = self.opts.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidInput(format!("tolerance {t} must be positive")));
            }
        }
        let method = parse_method(self.opts.method.as_deref())?;
        let m = self.matrix.to_matfn(&d)?;
        Ok((d, m, FactorizeOptions { tol: self.opts.tol, method }))
    }
}

// ---- JSON plumbing ----

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("{}: {e}", path.display()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| io_err(path, e))
}

/// Write via a sibling temp file and rename, so readers never see a torn file.
fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

// ---- grid function CSV ----

/// Columns `re_z, im_z, re_f, im_f, tag` with tag `boundary_k` (component k
/// in storage order: outer first, then holes) or `interior`.
pub fn write_gridfn_csv(path: &Path, f: &GridFn) -> Result<()> {
    let d = &f.domain;
    let mut out = String::from("re_z,im_z,re_f,im_f,tag\n");
    let mut k = 0;
    for (ci, comp) in d.components.iter().enumerate() {
        for &z in &comp.points {
            let v = f.boundary[k];
            k += 1;
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},boundary_{ci}",
                z.re, z.im, v.re, v.im
            );
        }
    }
    for (&z, &v) in d.interior.iter().zip(&f.interior) {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},interior", z.re, z.im, v.re, v.im);
    }
    atomic_write(path, out.as_bytes())
}

/// Read a grid function back onto `d`, checking that the stored points match
/// the domain's grids in order and location.
pub fn read_gridfn_csv(path: &Path, d: &Arc<Domain>) -> Result<GridFn> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("re_z,im_z,re_f,im_f,tag") => {}
        other => return Err(io_err(path, format!("bad header {other:?}"))),
    }
    let mut boundary = Vec::with_capacity(d.num_boundary_points());
    let mut interior = Vec::with_capacity(d.interior.len());
    for (lineno, line) in lines.enumerate() {
        let mut cols = line.split(',');
        let mut num = || -> Result<f64> {
            cols.next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| io_err(path, format!("line {}: bad number", lineno + 2)))
        };
        let z = C::new(num()?, num()?);
        let v = C::new(num()?, num()?);
        let tag = cols.next().unwrap_or("");
        let expected = if tag.starts_with("boundary_") {
            boundary.push(v);
            d.boundary_points().nth(boundary.len() - 1)
        } else if tag == "interior" {
            interior.push(v);
            d.interior.get(interior.len() - 1).copied()
        } else {
            return Err(io_err(path, format!("line {}: bad tag {tag:?}", lineno + 2)));
        };
        let tol = 1e-9 * d.outer.radius;
        match expected {
            Some(w) if (w - z).norm() <= tol => {}
            _ => return Err(io_err(path, format!("line {}: point off the domain grid", lineno + 2))),
        }
    }
    if boundary.len() != d.num_boundary_points() || interior.len() != d.interior.len() {
        return Err(io_err(
            path,
            format!("grid size mismatch: {}+{} points", boundary.len(), interior.len()),
        ));
    }
    Ok(GridFn::from_values(d.clone(), boundary, interior))
}

// ---- manifests ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestError {
    /// Stable tag from the error taxonomy (`Error::tag`).
    pub tag: String,
    pub message: String,
}

/// Every CLI run writes one of these, pass or fail.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    /// "pass", "input-error", or "math-gate".
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ManifestError>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_tag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cert_e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cert_f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_re_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windings: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Logical name -> path relative to the manifest's directory.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub files: BTreeMap<String, String>,
    /// Timing; excluded from determinism comparisons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Manifest { command: command.into(), status: "pass".into(), ..Manifest::default() }
    }

    pub fn fail(command: &str, err: &Error) -> Self {
        let status = match err.class() {
            ErrorClass::Input => "input-error",
            ErrorClass::MathGate => "math-gate",
        };
        Manifest {
            command: command.into(),
            status: status.into(),
            error: Some(ManifestError { tag: err.tag().into(), message: err.to_string() }),
            ..Manifest::default()
        }
    }
}
