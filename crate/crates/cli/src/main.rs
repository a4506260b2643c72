//! Command-line driver: factorization runs, the stable-rank and logm stages
//! in isolation, the dbar convergence self-test, seeded instance generation,
//! and independent re-verification of finished runs.
//!
//! Exit codes: 0 = pass, 1 = input error, 2 = a mathematical gate failed
//! (residual, certificate, or convergence). Every run writes a manifest JSON
//! with a machine-readable error tag, pass or fail.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use expfact::factorize::{factorize_gl2, factorize_sl2, random_instance, verify, ZeroPlan};
use expfact::io::{
    read_gridfn_csv, read_json, write_gridfn_csv, write_json, DomainDesc, InstanceDesc,
    Manifest, ManifestError, MatrixDesc, RationalDesc,
};
use expfact::{bass, consts, dbar, logm, Circle, Domain, Error, FactorizationResult, Mat2, MatFn, Result};

#[derive(Parser)]
#[command(name = "expfact", version, about = "Exponential factorization of SL(2, C) matrix functions on circular domains")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factor unimodular instances as e^E e^F and emit a report.
    Factorize(FactorizeArgs),
    /// Factor invertible instances whose determinant is null-homotopic.
    FactorizeGl2(FactorizeArgs),
    /// Run the stable-rank stage alone: b + g a = e^h on the domain.
    Bass(BassArgs),
    /// Eigenvalue logarithm of a single constant matrix.
    Logm(LogmArgs),
    /// Convergence self-test of the Cauchy-Green dbar solver.
    DbarSelftest(SelftestArgs),
    /// Generate a seeded random instance file.
    Gen(GenArgs),
    /// Independently re-check a finished factorization run.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FactorizeArgs {
    /// Instance JSON files (at least one).
    inputs: Vec<PathBuf>,
    /// Output directory; one subdirectory per instance plus a report.
    #[arg(long)]
    out: PathBuf,
    /// Residual tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Splitting method: exact | dbar.
    #[arg(long)]
    method: Option<String>,
    /// Boundary samples per component override.
    #[arg(long)]
    boundary_n: Option<usize>,
    /// Interior grid spacing override.
    #[arg(long)]
    spacing: Option<f64>,
}

#[derive(Args)]
struct BassArgs {
    /// JSON file {a, b, domain, method}.
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Splitting method override: exact | dbar.
    #[arg(long)]
    method: Option<String>,
}

#[derive(Args)]
struct LogmArgs {
    /// JSON file {b: [[..]], lambda: [re, im]}.
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long)]
    out: PathBuf,
    /// Number of mesh levels, doubling from the base mesh.
    #[arg(long, default_value_t = 3)]
    levels: usize,
    #[arg(long, default_value_t = 32)]
    base_nr: usize,
    #[arg(long, default_value_t = 128)]
    base_nt: usize,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    /// Number of forced simple interior zeros of the lower-left entry.
    #[arg(long, default_value_t = 0)]
    zeros: usize,
    /// Named domain: disk | annulus | twohole.
    #[arg(long, default_value = "disk")]
    domain: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    boundary_n: Option<usize>,
    #[arg(long)]
    spacing: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// The instance JSON the run factored.
    #[arg(long)]
    instance: PathBuf,
    /// The run directory holding manifest.json and the E/F CSVs.
    #[arg(long)]
    run: PathBuf,
    /// Residual tolerance override.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version print to stdout and exit clean; real parse
            // errors are input errors (exit 1), not clap's default 2, which
            // is reserved for mathematical gates here.
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Cmd::Factorize(a) => run_factorize(&a, false),
        Cmd::FactorizeGl2(a) => run_factorize(&a, true),
        Cmd::Bass(a) => run_bass(&a),
        Cmd::Logm(a) => run_logm(&a),
        Cmd::DbarSelftest(a) => run_selftest(&a),
        Cmd::Gen(a) => run_gen(&a),
        Cmd::Verify(a) => run_verify(&a),
    };
    ExitCode::from(code)
}

fn ensure_dir(p: &Path) -> Result<()> {
    fs::create_dir_all(p).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))
}

fn exit_for(manifest: &Manifest) -> u8 {
    match manifest.status.as_str() {
        "pass" => 0,
        "input-error" => 1,
        _ => 2,
    }
}

/// Write the manifest (fatal if even that fails) and translate to exit code.
fn seal(outdir: &Path, mut manifest: Manifest, t0: Instant) -> u8 {
    manifest.wall_ms = Some(t0.elapsed().as_secs_f64() * 1e3);
    let code = exit_for(&manifest);
    if let Err(e) = write_json(&outdir.join("manifest.json"), &manifest) {
        eprintln!("cannot write manifest: {e}");
        return 1;
    }
    if let Some(err) = &manifest.error {
        eprintln!("{}: [{}] {}", manifest.command, err.tag, err.message);
    }
    code
}

// ---- factorize / factorize-gl2 ----

fn run_factorize(args: &FactorizeArgs, gl2: bool) -> u8 {
    let cmd = if gl2 { "factorize-gl2" } else { "factorize" };
    if args.inputs.is_empty() {
        eprintln!("{cmd}: no input instances given");
        return 1;
    }
    if ensure_dir(&args.out).is_err() {
        eprintln!("{cmd}: cannot create {}", args.out.display());
        return 1;
    }
    let mut rows: Vec<(String, Manifest)> = Vec::with_capacity(args.inputs.len());
    let mut names = BTreeSet::new();
    let mut worst = 0u8;
    for input in &args.inputs {
        let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "instance".into());
        let mut name = stem.clone();
        let mut k = 2;
        while !names.insert(name.clone()) {
            name = format!("{stem}-{k}");
            k += 1;
        }
        let outdir = args.out.join(&name);
        let t0 = Instant::now();
        let manifest = match ensure_dir(&outdir) {
            Err(e) => Manifest::fail(cmd, &e),
            Ok(()) => run_one_factorize(input, &outdir, args, gl2)
                .unwrap_or_else(|e| Manifest::fail(cmd, &e)),
        };
        let code = seal(&outdir, manifest.clone(), t0);
        worst = combine(worst, code);
        let mut m = manifest;
        m.wall_ms = Some(t0.elapsed().as_secs_f64() * 1e3);
        rows.push((name, m));
    }
    if let Err(e) = emit_report(&args.out, &rows) {
        eprintln!("{cmd}: cannot write report: {e}");
        return 1;
    }
    worst
}

/// Input errors outrank math-gate failures: a malformed experiment says
/// nothing about the mathematics.
fn combine(a: u8, b: u8) -> u8 {
    if a == 1 || b == 1 {
        1
    } else {
        a.max(b)
    }
}

fn run_one_factorize(input: &Path, outdir: &Path, args: &FactorizeArgs, gl2: bool) -> Result<Manifest> {
    let cmd = if gl2 { "factorize-gl2" } else { "factorize" };
    let mut desc: InstanceDesc = read_json(input)?;
    if let Some(t) = args.tol {
        desc.opts.tol = Some(t);
    }
    if let Some(m) = &args.method {
        desc.opts.method = Some(m.clone());
    }
    if let Some(n) = args.boundary_n {
        desc.opts.boundary_n = Some(n);
    }
    if let Some(s) = args.spacing {
        desc.opts.interior_spacing = Some(s);
    }
    let (_d, a, opts) = desc.build()?;
    let mut manifest = Manifest::new(cmd);
    if gl2 {
        let out = factorize_gl2(&a, &opts)?;
        manifest.windings = Some(out.windings.clone());
        write_gridfn_csv(&outdir.join("eta.csv"), &out.eta)?;
        manifest.files.insert("eta".into(), "eta.csv".into());
        fill_result(&mut manifest, &out.result, outdir)?;
    } else {
        let r = factorize_sl2(&a, &opts)?;
        fill_result(&mut manifest, &r, outdir)?;
    }
    Ok(manifest)
}

fn fill_result(m: &mut Manifest, r: &FactorizationResult, outdir: &Path) -> Result<()> {
    m.case_tag = Some(r.case.label().into());
    m.delta = r.delta;
    m.residual = Some(r.residual);
    m.trace_e = Some(r.trace_e);
    m.trace_f = Some(r.trace_f);
    m.cert_e = Some(r.cert_e);
    m.cert_f = Some(r.cert_f);
    m.theta_re_min = r.theta_re_min;
    for (label, mat) in [("e", &r.e), ("f", &r.f)] {
        let g = mat.to_grid()?;
        let ent = g.grid_entries().expect("grid repr");
        for i in 0..2 {
            for j in 0..2 {
                let file = format!("{label}_{i}{j}.csv");
                write_gridfn_csv(&outdir.join(&file), &ent[i][j])?;
                m.files.insert(format!("{label}_{i}{j}"), file);
            }
        }
    }
    if let Some(b) = &r.bass {
        write_gridfn_csv(&outdir.join("h.csv"), &b.h)?;
        m.files.insert("h".into(), "h.csv".into());
    }
    if let Some(lambda) = &r.lambda {
        write_gridfn_csv(&outdir.join("lambda.csv"), lambda)?;
        m.files.insert("lambda".into(), "lambda.csv".into());
    }
    Ok(())
}

// ---- report ----

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3e}")).unwrap_or_else(|| "-".into())
}

fn emit_report(out: &Path, rows: &[(String, Manifest)]) -> Result<()> {
    let mut csv = String::from(
        "instance,status,case,delta,residual,trace_e,trace_f,cert_e,cert_f,wall_ms,error\n",
    );
    for (name, m) in rows {
        let err = m.error.as_ref().map(|e| e.tag.clone()).unwrap_or_default();
        csv.push_str(&format!(
            "{name},{},{},{},{},{},{},{},{},{},{err}\n",
            m.status,
            m.case_tag.clone().unwrap_or_default(),
            fmt_opt(m.delta),
            fmt_opt(m.residual),
            fmt_opt(m.trace_e),
            fmt_opt(m.trace_f),
            fmt_opt(m.cert_e),
            fmt_opt(m.cert_f),
            fmt_opt(m.wall_ms),
        ));
    }
    fs::write(out.join("report.csv"), &csv)
        .map_err(|e| Error::InvalidInput(format!("report.csv: {e}")))?;

    let mut txt = String::new();
    txt.push_str(&format!(
        "{:<24} {:>10} {:>4} {:>6} {:>10} {:>10} {:>10} {:>9}\n",
        "instance", "status", "case", "delta", "residual", "cert_e", "cert_f", "wall_ms"
    ));
    for (name, m) in rows {
        txt.push_str(&format!(
            "{:<24} {:>10} {:>4} {:>6} {:>10} {:>10} {:>10} {:>9.1}\n",
            name,
            m.status,
            m.case_tag.clone().unwrap_or_else(|| "-".into()),
            m.delta.map(|d| format!("{d}")).unwrap_or_else(|| "-".into()),
            fmt_opt(m.residual),
            fmt_opt(m.cert_e),
            fmt_opt(m.cert_f),
            m.wall_ms.unwrap_or(0.0),
        ));
    }
    let passing: Vec<&Manifest> = rows.iter().filter(|(_, m)| m.status == "pass").map(|(_, m)| m).collect();
    txt.push_str(&format!("\n{} of {} passed\n", passing.len(), rows.len()));
    if !passing.is_empty() {
        let agg = |take: &dyn Fn(&Manifest) -> Option<f64>, label: &str, txt: &mut String| {
            let mut vs: Vec<f64> = passing.iter().filter_map(|m| take(m)).collect();
            if vs.is_empty() {
                return;
            }
            vs.sort_by(f64::total_cmp);
            txt.push_str(&format!(
                "{label}: min {:.3e}  median {:.3e}  max {:.3e}\n",
                vs[0],
                vs[vs.len() / 2],
                vs[vs.len() - 1]
            ));
        };
        agg(&|m| m.residual, "residual", &mut txt);
        agg(&|m| m.wall_ms, "wall_ms ", &mut txt);
    }
    fs::write(out.join("report.txt"), &txt)
        .map_err(|e| Error::InvalidInput(format!("report.txt: {e}")))?;
    print!("{txt}");
    Ok(())
}

// ---- bass ----

#[derive(Deserialize)]
struct BassInput {
    a: RationalDesc,
    b: RationalDesc,
    domain: DomainDesc,
    #[serde(default)]
    method: Option<String>,
}

#[derive(Serialize)]
struct BassZeroOut {
    xi: [f64; 2],
    multiplicity: usize,
    radius: f64,
}

#[derive(Serialize)]
struct BassOutput {
    residual: f64,
    theta_eff: f64,
    witness_min: f64,
    overlap_defect: f64,
    h_certificate: f64,
    g_certificate: f64,
    zeros: Vec<BassZeroOut>,
    h_csv: String,
    g_csv: String,
}

fn run_bass(args: &BassArgs) -> u8 {
    let t0 = Instant::now();
    if ensure_dir(&args.out).is_err() {
        eprintln!("bass: cannot create {}", args.out.display());
        return 1;
    }
    let manifest = (|| -> Result<Manifest> {
        let input: BassInput = read_json(&args.input)?;
        let method = expfact::io::parse_method(
            args.method.as_deref().or(input.method.as_deref()),
        )?;
        let d = input.domain.to_domain()?;
        let a = input.a.to_rational()?;
        let b = input.b.to_rational()?;
        let r = bass::bass_solve(&a, &b, &d, method)?;
        write_gridfn_csv(&args.out.join("h.csv"), &r.h)?;
        write_gridfn_csv(&args.out.join("g.csv"), &r.g)?;
        let out = BassOutput {
            residual: r.residual,
            theta_eff: r.theta_eff,
            witness_min: r.witness_min,
            overlap_defect: r.overlap_defect,
            h_certificate: r.h_certificate,
            g_certificate: r.g_certificate,
            zeros: r
                .zeros
                .iter()
                .map(|z| BassZeroOut {
                    xi: [z.xi.re, z.xi.im],
                    multiplicity: z.multiplicity,
                    radius: z.radius,
                })
                .collect(),
            h_csv: "h.csv".into(),
            g_csv: "g.csv".into(),
        };
        write_json(&args.out.join("bass.json"), &out)?;
        let mut m = Manifest::new("bass");
        m.residual = Some(r.residual);
        m.cert_e = Some(r.h_certificate);
        m.cert_f = Some(r.g_certificate);
        for f in ["bass.json", "h.csv", "g.csv"] {
            m.files.insert(f.trim_end_matches(".csv").trim_end_matches(".json").into(), f.into());
        }
        Ok(m)
    })()
    .unwrap_or_else(|e| Manifest::fail("bass", &e));
    seal(&args.out, manifest, t0)
}

// ---- logm ----

#[derive(Deserialize)]
struct LogmInput {
    b: [[[f64; 2]; 2]; 2],
    lambda: [f64; 2],
}

#[derive(Serialize)]
struct LogmOutput {
    f: [[[f64; 2]; 2]; 2],
    gap: f64,
    residual: f64,
}

fn run_logm(args: &LogmArgs) -> u8 {
    let t0 = Instant::now();
    if ensure_dir(&args.out).is_err() {
        eprintln!("logm: cannot create {}", args.out.display());
        return 1;
    }
    let manifest = (|| -> Result<Manifest> {
        let input: LogmInput = read_json(&args.input)?;
        let at = |p: [f64; 2]| C::new(p[0], p[1]);
        let b = Mat2::new(
            at(input.b[0][0]),
            at(input.b[0][1]),
            at(input.b[1][0]),
            at(input.b[1][1]),
        );
        let lambda = at(input.lambda);
        let f = logm::log_with_eigenvalue(&b, lambda)?;
        let expf = expfact::mat2::exp_sl2(&f)?;
        let residual = expf.sub(&b).norm() / (1.0 + b.norm());
        let gap = (lambda * 2.0 - b.trace()).norm();
        let out = LogmOutput {
            f: [
                [[f.e[0][0].re, f.e[0][0].im], [f.e[0][1].re, f.e[0][1].im]],
                [[f.e[1][0].re, f.e[1][0].im], [f.e[1][1].re, f.e[1][1].im]],
            ],
            gap,
            residual,
        };
        write_json(&args.out.join("logm.json"), &out)?;
        let mut m = Manifest::new("logm");
        m.residual = Some(residual);
        m.files.insert("logm".into(), "logm.json".into());
        Ok(m)
    })()
    .unwrap_or_else(|e| Manifest::fail("logm", &e));
    seal(&args.out, manifest, t0)
}

// ---- dbar-selftest ----

fn run_selftest(args: &SelftestArgs) -> u8 {
    let t0 = Instant::now();
    if ensure_dir(&args.out).is_err() {
        eprintln!("dbar-selftest: cannot create {}", args.out.display());
        return 1;
    }
    let manifest = (|| -> Result<Manifest> {
        if args.levels == 0 {
            return Err(Error::InvalidInput("need at least one mesh level".into()));
        }
        let levels: Vec<(usize, usize)> =
            (0..args.levels).map(|i| (args.base_nr << i, args.base_nt << i)).collect();
        let rows = dbar::selftest(&levels)?;
        let mut csv = String::from("n_r,n_theta,rel_err\n");
        println!("{:>6} {:>8} {:>12}", "n_r", "n_theta", "rel_err");
        for r in &rows {
            csv.push_str(&format!("{},{},{:.16e}\n", r.n_r, r.n_t, r.rel_err));
            println!("{:>6} {:>8} {:>12.4e}", r.n_r, r.n_t, r.rel_err);
        }
        fs::write(args.out.join("selftest.csv"), &csv)
            .map_err(|e| Error::InvalidInput(format!("selftest.csv: {e}")))?;
        let finest = rows.last().expect("at least one level");
        if finest.rel_err > 0.05 {
            return Err(Error::ResidualTooLarge {
                what: "dbar selftest relative error",
                residual: finest.rel_err,
                tol: 0.05,
            });
        }
        let mut m = Manifest::new("dbar-selftest");
        m.residual = Some(finest.rel_err);
        m.files.insert("selftest".into(), "selftest.csv".into());
        Ok(m)
    })()
    .unwrap_or_else(|e| Manifest::fail("dbar-selftest", &e));
    seal(&args.out, manifest, t0)
}

// ---- gen ----

fn named_domain(name: &str, boundary_n: Option<usize>, spacing: Option<f64>) -> Result<std::sync::Arc<Domain>> {
    let o = |r| Circle::new(C::new(0.0, 0.0), r);
    let (outer, holes) = match name {
        "disk" => (o(1.0), vec![]),
        "annulus" => (o(1.0), vec![Circle::new(C::new(0.0, 0.0), 0.5)]),
        "twohole" => (
            o(1.0),
            vec![
                Circle::new(C::new(-0.45, -0.15), 0.18),
                Circle::new(C::new(0.4, 0.35), 0.2),
            ],
        ),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown domain {other:?} (expected disk, annulus, or twohole)"
            )))
        }
    };
    let n = boundary_n.unwrap_or(consts::DEFAULT_BOUNDARY_N);
    let s = spacing.unwrap_or(outer.radius * consts::DEFAULT_SPACING_FACTOR);
    Domain::new(outer, holes, n, s)
}

fn run_gen(args: &GenArgs) -> u8 {
    let t0 = Instant::now();
    if ensure_dir(&args.out).is_err() {
        eprintln!("gen: cannot create {}", args.out.display());
        return 1;
    }
    let manifest = (|| -> Result<Manifest> {
        let d = named_domain(&args.domain, args.boundary_n, args.spacing)?;
        let m = random_instance(args.seed, &d, &ZeroPlan::Count(args.zeros))?;
        let desc = InstanceDesc {
            domain: DomainDesc::of(&d),
            matrix: MatrixDesc::of(&m).expect("generated instances are rational"),
            opts: Default::default(),
        };
        let file = format!("instance-{}-seed{}-z{}.json", args.domain, args.seed, args.zeros);
        write_json(&args.out.join(&file), &desc)?;
        println!("{}", args.out.join(&file).display());
        let mut man = Manifest::new("gen");
        man.seed = Some(args.seed);
        man.files.insert("instance".into(), file);
        Ok(man)
    })()
    .unwrap_or_else(|e| Manifest::fail("gen", &e));
    seal(&args.out, manifest, t0)
}

// ---- verify ----

fn run_verify(args: &VerifyArgs) -> u8 {
    let t0 = Instant::now();
    let manifest = (|| -> Result<Manifest> {
        let desc: InstanceDesc = read_json(&args.instance)?;
        let (d, a, opts) = desc.build()?;
        let run: Manifest = read_json(&args.run.join("manifest.json"))?;
        let grid_of = |key: &str| -> Result<expfact::GridFn> {
            let file = run.files.get(key).ok_or_else(|| {
                Error::InvalidInput(format!("run manifest has no {key:?} file"))
            })?;
            read_gridfn_csv(&args.run.join(file), &d)
        };
        let load = |label: &str| -> Result<MatFn> {
            Ok(MatFn::from_grid(
                d.clone(),
                [
                    [grid_of(&format!("{label}_00"))?, grid_of(&format!("{label}_01"))?],
                    [grid_of(&format!("{label}_10"))?, grid_of(&format!("{label}_11"))?],
                ],
            ))
        };
        let e = load("e")?;
        let f = load("f")?;
        let tol = args.tol.or(opts.tol).unwrap_or(consts::FACTORIZE_TOL_DEFAULT);
        let report = verify(&a, &e, &f, tol)?;
        let mut m = Manifest::new("verify");
        m.residual = Some(report.residual);
        m.trace_e = Some(report.trace_e);
        m.trace_f = Some(report.trace_f);
        m.cert_e = Some(report.cert_e);
        m.cert_f = Some(report.cert_f);
        if !report.pass() {
            m.status = "math-gate".into();
            m.error = Some(ManifestError {
                tag: "VerificationFailed".into(),
                message: format!(
                    "residual_ok={} traces_ok={} certs_ok={} (tol {tol:.3e})",
                    report.residual_ok, report.traces_ok, report.certs_ok
                ),
            });
        }
        println!(
            "residual {:.3e}  traces {:.3e}/{:.3e}  certs {:.3e}/{:.3e}  -> {}",
            report.residual,
            report.trace_e,
            report.trace_f,
            report.cert_e,
            report.cert_f,
            if report.pass() { "pass" } else { "FAIL" }
        );
        Ok(m)
    })()
    .unwrap_or_else(|e| Manifest::fail("verify", &e));
    if ensure_dir(&args.run).is_err() {
        eprintln!("verify: cannot create {}", args.run.display());
        return 1;
    }
    // The verification manifest sits next to the run's own manifest.
    let mut man = manifest;
    man.wall_ms = Some(t0.elapsed().as_secs_f64() * 1e3);
    let code = exit_for(&man);
    if let Err(e) = write_json(&args.run.join("verify.json"), &man) {
        eprintln!("cannot write verify.json: {e}");
        return 1;
    }
    if let Some(err) = &man.error {
        eprintln!("verify: [{}] {}", err.tag, err.message);
    }
    code
}
