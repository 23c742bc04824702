//! `spin9`: command-line driver for the verification suite and the individual checks.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on usage or
//! I/O errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use spin9::canonical_form::{
    berger_l0_coefficient, berger_phi_mc, finite_invariance, invariant_phi, phi_l0, spin9_generators, CanonicalForm,
    Normalization,
};
use spin9::clifford::spin9_system;
use spin9::groups::{free_action_certificate, normalizer_check, preset_group, presentation_check, GroupKind, GroupPreset, DEFAULT_CAP};
use spin9::linalg::orthogonality_residual;
use spin9::octonion::Quaternion;
use spin9::suite::{run_criterion, run_suite_with, SuiteOptions, TolProfile, Tolerances, CRITERIA};
use spin9::triality::{line_preservation_check, rq_build, rq_rotation};
use spin9::{Rational, Scalar};

#[derive(Parser)]
#[command(name = "spin9", version, about = "Exact and numerical checks of the Spin(9) constructions")]
struct Cli {
    /// RNG seed (also read from SPIN9_SEED).
    #[arg(long, global = true, env = "SPIN9_SEED", default_value_t = 42)]
    seed: u64,
    /// Tolerance profile: default or loose.
    #[arg(long, global = true, default_value = "default", value_parser = parse_profile)]
    tol: TolProfile,
    /// Output path (JSON report, or the .form file for `phi solve|export`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Sample count override for the sampled checks.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every acceptance check and write the JSON report.
    Suite {
        /// Negate entry (row, col) of generator I_alpha before running: "alpha,row,col", 1-based alpha.
        #[arg(long, hide = true, value_parser = parse_flip)]
        flip_entry: Option<(usize, usize, usize)>,
    },
    /// The invariant 8-form: solve, Monte-Carlo Berger estimate, export, import.
    Phi {
        #[command(subcommand)]
        action: PhiCmd,
    },
    /// Triality companions and R_q for a unit quaternion "a,b,c,d".
    Triality {
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Finite subgroup presets: order, free action, normalizer.
    Group {
        #[arg(long)]
        preset: GroupKind,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        check_free: bool,
        /// psi = R_q for the unit quaternion "a,b,c,d".
        #[arg(long, allow_hyphen_values = true)]
        normalizer_psi: Option<String>,
    },
    /// Hopf projection, frame and orthogonality identities.
    Hopf,
    /// Lee form, Weyl connection and cone curvature checks.
    Lcp {
        #[arg(long)]
        fd_step: Option<f64>,
    },
}

#[derive(Subcommand)]
enum PhiCmd {
    /// Solve for the invariant form; --out receives the .form file.
    Solve {
        #[arg(long, default_value = "l0")]
        normalization: Normalization,
    },
    /// Monte-Carlo Berger estimate compared against the solved or an imported form.
    Berger {
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Write the solved form in .form format to --out or stdout.
    Export {
        #[arg(long, default_value = "l0")]
        normalization: Normalization,
    },
    /// Read a .form file and check it against the solver.
    Import {
        path: PathBuf,
        /// Reject files with a different normalization tag.
        #[arg(long)]
        normalization: Option<Normalization>,
    },
}

fn parse_profile(s: &str) -> Result<TolProfile, String> {
    s.parse().map_err(|e: spin9::Error| e.to_string())
}

fn parse_flip(s: &str) -> Result<(usize, usize, usize), String> {
    let v: Vec<usize> = s.split(',').map(|t| t.trim().parse().map_err(|_| format!("bad integer {t:?}"))).collect::<Result<_, _>>()?;
    match v[..] {
        [a, r, c] if (1..=9).contains(&a) && r < 16 && c < 16 => Ok((a, r, c)),
        _ => Err("expected alpha,row,col with alpha in 1..=9 and row, col in 0..16".into()),
    }
}

/// A usage or I/O error (exit status 2).
struct Failure(String);

impl From<spin9::Error> for Failure {
    fn from(e: spin9::Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                so.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, v: &impl Serialize) -> std::io::Result<()> {
    emit(out, &(serde_json::to_string_pretty(v).expect("serializable") + "\n"))
}

fn quaternion(s: &str) -> Result<Quaternion<f64>, Failure> {
    s.parse().map_err(|e: spin9::Error| Failure(format!("quaternion {s:?}: {e}")))
}

fn rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn suite(cli: &Cli, flip: Option<(usize, usize, usize)>) -> Outcome {
    let system = flip.map(|(a, r, c)| spin9_system().with_flipped_entry(a - 1, r, c));
    let report = run_suite_with(&SuiteOptions { seed: cli.seed, profile: cli.tol, system, mc_samples: cli.samples })?;
    for (i, name) in CRITERIA.iter().enumerate() {
        let c = (i + 1) as u8;
        let t = report.timing(c).map(|t| format!(" [{t:.2}s]")).unwrap_or_default();
        eprintln!("{} {c} {name}{t}", if report.criterion_passed(c) { "PASS" } else { "FAIL" });
    }
    for f in report.failures() {
        eprintln!("  {:?}: {} = {:e} ({:?} {:e})", f.status, f.name, f.value, f.bound, f.tolerance);
    }
    emit(cli.out.as_deref(), &(report.to_json() + "\n"))?;
    Ok(report.passed)
}

fn phi(cli: &Cli, action: &PhiCmd) -> Outcome {
    match action {
        PhiCmd::Solve { normalization } => {
            let form = invariant_phi(*normalization)?;
            if let Some(p) = &cli.out {
                std::fs::write(p, form.export())?;
            }
            emit_json(None, &form.report())?;
            Ok(true)
        }
        PhiCmd::Export { normalization } => {
            let form = phi_l0()?.renormalized(*normalization);
            emit(cli.out.as_deref(), &form.export())?;
            Ok(true)
        }
        PhiCmd::Import { path, normalization } => {
            let text = std::fs::read_to_string(path)?;
            let form = CanonicalForm::import(&text, *normalization)
                .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            let invariant = spin9_generators().iter().all(|g| {
                form.form.infinitesimal_action(&g.map(Rational::from_i64)).map(|f| f.is_zero()).unwrap_or(false)
            });
            let matches_solver = form.renormalized(Normalization::L0).form == phi_l0()?.form;
            emit_json(
                cli.out.as_deref(),
                &json!({ "report": form.report(), "invariant": invariant, "matches_solver": matches_solver }),
            )?;
            Ok(invariant)
        }
        PhiCmd::Berger { compare } => {
            let tol = Tolerances::for_profile(cli.tol);
            let samples = cli.samples.unwrap_or(tol.mc_samples);
            let reference = match compare {
                Some(p) => {
                    let text = std::fs::read_to_string(p)?;
                    CanonicalForm::import(&text, None).map_err(|e| Failure(format!("{}: {e}", p.display())))?
                }
                None => phi_l0()?.clone(),
            };
            let est = berger_phi_mc(samples, cli.seed)?;
            let cosine = est.cosine_similarity(&reference.form);
            let (l0, l0_se) = est.coefficient(&spin9::canonical_form::l0_index());
            let threshold = 1.0 - tol.mc_cosine_gap;
            emit_json(
                cli.out.as_deref(),
                &json!({
                    "samples": samples,
                    "seed": cli.seed,
                    "reference": compare.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "solver".into()),
                    "cosine_similarity": cosine,
                    "threshold": threshold,
                    "l0_coefficient": l0,
                    "l0_std_err": l0_se,
                    "expected_l0_coefficient": berger_l0_coefficient().to_f64(),
                    "max_std_err": est.max_std_err(),
                }),
            )?;
            Ok(cosine >= threshold)
        }
    }
}

fn triality(cli: &Cli, q: &str) -> Outcome {
    let tol = Tolerances::for_profile(cli.tol);
    let q = quaternion(q)?;
    let rot = rq_rotation(&q)?;
    let t = &rot.triple;
    let [second, smallest] = t.smallest_singular_values;
    let gap = if smallest > 0.0 { second / smallest } else { f64::MAX };
    let c_orth = t.c_orthogonality(20, cli.seed);
    let b_orth = orthogonality_residual(&t.b);
    let phi_res = finite_invariance(&phi_l0()?.to_f64(), &rot.matrix)?;
    let lines = line_preservation_check(&rot.matrix, cli.samples.unwrap_or(8), cli.seed)?;
    let passed = gap >= tol.singular_gap
        && t.residual <= tol.triality
        && b_orth.max(c_orth) <= tol.triality
        && phi_res <= tol.invariance
        && lines <= tol.lines;
    emit_json(
        cli.out.as_deref(),
        &json!({
            "q": rot.q,
            "a": rows(&t.a),
            "b": rows(&t.b),
            "c_columns": rows(&t.c),
            "relation_residual": t.residual,
            "nullspace_dim": t.nullspace_dim,
            "singular_value_gap": gap,
            "b_orthogonality": b_orth,
            "c_orthogonality": c_orth,
            "phi_invariance": phi_res,
            "line_preservation": lines,
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn group(cli: &Cli, kind: GroupKind, n: usize, check_free: bool, psi: Option<&str>) -> Outcome {
    let preset = GroupPreset::new(kind, n)?;
    let g = preset_group(&preset, DEFAULT_CAP)?;
    let mut passed = g.order() == preset.expected_order();
    let mut report = json!({
        "preset": preset.label(),
        "order": g.order(),
        "expected_order": preset.expected_order(),
        "presentation": presentation_check(&preset)?,
    });
    if check_free {
        let cert = free_action_certificate(&g);
        passed &= cert.free;
        report["certificate"] = serde_json::to_value(&cert).expect("serializable");
    }
    if let Some(s) = psi {
        let m = rq_build(&quaternion(s)?)?;
        let nr = normalizer_check(&m, &g);
        passed &= nr.normalizes;
        report["normalizer"] = serde_json::to_value(&nr).expect("serializable");
    }
    report["passed"] = json!(passed);
    emit_json(cli.out.as_deref(), &report)?;
    Ok(passed)
}

fn criterion(cli: &Cli, c: u8, fd_step: Option<f64>) -> Outcome {
    let mut tol = Tolerances::for_profile(cli.tol);
    if let Some(n) = cli.samples {
        tol.hopf_samples = n;
        tol.lcp_samples = n;
    }
    if let Some(h) = fd_step {
        tol.fd_step = h;
    }
    let r = run_criterion(c, &tol, cli.seed)?;
    emit_json(cli.out.as_deref(), &r)?;
    Ok(r.passed)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Cmd::Suite { flip_entry } => suite(cli, *flip_entry),
        Cmd::Phi { action } => phi(cli, action),
        Cmd::Triality { q } => triality(cli, q),
        Cmd::Group { preset, n, check_free, normalizer_psi } => group(cli, *preset, *n, *check_free, normalizer_psi.as_deref()),
        Cmd::Hopf => criterion(cli, 5, None),
        Cmd::Lcp { fd_step } => criterion(cli, 8, *fd_step),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
