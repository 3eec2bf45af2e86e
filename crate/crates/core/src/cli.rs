//! Batch front-end. Every verb except `wrange` (CSV) and `gen` without
//! `--out` (matrix JSON) prints a JSON [`Report`] on stdout; summaries go to
//! stderr. Exit codes: 0 pass, 1 assertion failure, 2 usage or input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::factor::{cokernel_frame, modulus, polar, rank, sqrt_positive};
use crate::io::{matrix_from_json, matrix_to_json, write_matrix};
use crate::normattain::{eigen_residual, lindenstrauss_chain};
use crate::numrange::{
    numerical_radius, sample_numerical_range, slice_projection, OptimizerConfig,
};
use crate::qlinalg::{random_matrix, random_normal, random_quaternion};
use crate::spectral::{
    construct_j, extend, extension_residuals, in_point_spectrum, in_spherical_spectrum,
    reconstruct, spectral_decomposition, SpectralDecomposition, SpectrumReport,
};
use crate::symplectic::ComplexMatrix;
use crate::DEFAULT_SEED;
use crate::{
    Error, ImaginaryUnit, MatrixKind, NumericConfig, QMatrix, QVector, Quaternion, Result,
};

#[derive(Parser, Debug)]
#[command(name = "quatrad", version, about = "Quaternionic matrix toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a random matrix of the given kind.
    Gen {
        #[arg(long, default_value = "general")]
        kind: MatrixKind,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Output file; the matrix goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Operator norm.
    Norm { input: PathBuf },
    /// Numerical radius by projected gradient ascent.
    Numrad {
        input: PathBuf,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// CSV sample of Rayleigh quotients over the unit sphere.
    Wrange {
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Imaginary unit `i`, `j`, `k` or `x,y,z`; adds slice coordinates.
        #[arg(long, value_parser = parse_unit, allow_hyphen_values = true)]
        slice: Option<ImaginaryUnit>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Spectral decomposition of a normal matrix.
    Spectrum { input: PathBuf },
    /// Spherical spectrum membership of a quaternion.
    Sspec {
        input: PathBuf,
        #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
        q: Quaternion,
    },
    /// Polar decomposition `A = V|A|`.
    Polar { input: PathBuf },
    /// Square root of a positive matrix.
    Sqrt { input: PathBuf },
    /// Rank-one norm-attaining perturbation.
    Perturb {
        input: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Invariant suite on a matrix file or on random matrices.
    Check {
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "input")]
        trials: Option<usize>,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value = "normal")]
        kind: MatrixKind,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Restriction and extension through the plus subspace of `J`.
    ExtendDemo {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn parse_quaternion(s: &str) -> std::result::Result<Quaternion, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match parts[..] {
        [w, x, y, z] if parts.iter().all(|v| v.is_finite()) => Ok(Quaternion::new(w, x, y, z)),
        _ => Err("expected four finite numbers w,x,y,z".into()),
    }
}

fn parse_unit(s: &str) -> std::result::Result<ImaginaryUnit, String> {
    let m = match s {
        "i" => Quaternion::I,
        "j" => Quaternion::J,
        "k" => Quaternion::K,
        _ => {
            let q = parse_quaternion(&format!("0,{s}"))?;
            q.scale(1.0 / q.norm())
        }
    };
    ImaginaryUnit::new(m, 1e-8).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Assertion {
    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Assertion {
            name: name.into(),
            value,
            bound,
            pass: value <= bound,
        }
    }

    pub fn holds(name: &str, ok: bool) -> Self {
        Assertion {
            name: name.into(),
            value: if ok { 0.0 } else { 1.0 },
            bound: 0.0,
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub verb: String,
    pub seed: u64,
    pub inputs: Value,
    pub outputs: Value,
    pub timings: BTreeMap<String, f64>,
    pub assertions: Vec<Assertion>,
    pub pass: bool,
}

impl Report {
    fn new(
        verb: &str,
        seed: u64,
        inputs: Value,
        outputs: Value,
        assertions: Vec<Assertion>,
        start: Instant,
    ) -> Self {
        let pass = assertions.iter().all(|a| a.pass);
        Report {
            verb: verb.into(),
            seed,
            inputs,
            outputs,
            timings: BTreeMap::from([("total_s".to_string(), start.elapsed().as_secs_f64())]),
            assertions,
            pass,
        }
    }
}

/// Parses `args` (program name first) and runs one verb.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read_input(path: &Path) -> Result<QMatrix> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Malformed(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?
    };
    let a = matrix_from_json(&text)?;
    a.require_square()?;
    Ok(a)
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Malformed(format!("output error: {e}"))
}

fn emit(report: &Report, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    serde_json::to_writer_pretty(&mut *out, report).map_err(io_err)?;
    writeln!(out).map_err(io_err)?;
    for a in &report.assertions {
        let tag = if a.pass { "ok  " } else { "FAIL" };
        writeln!(
            err,
            "{tag} {:<28} {:.3e} (bound {:.1e})",
            a.name, a.value, a.bound
        )
        .map_err(io_err)?;
    }
    writeln!(
        err,
        "{}: {}",
        report.verb,
        if report.pass { "pass" } else { "fail" }
    )
    .map_err(io_err)?;
    Ok(report.pass)
}

fn path_json(p: &Path) -> Value {
    json!(p.display().to_string())
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let start = Instant::now();
    let cfg = NumericConfig::default();
    let report = match cmd {
        Command::Gen {
            kind,
            n,
            seed,
            out: path,
        } => {
            if n == 0 {
                return Err(Error::Domain("n must be positive".into()));
            }
            let a = random_matrix(kind, n, seed);
            let Some(path) = path else {
                writeln!(out, "{}", matrix_to_json(&a)).map_err(io_err)?;
                writeln!(err, "generated {kind} {n}x{n} (seed {seed})").map_err(io_err)?;
                return Ok(true);
            };
            write_matrix(&path, &a)?;
            let ok = match kind {
                MatrixKind::General => true,
                MatrixKind::Normal => a.is_normal(&cfg),
                MatrixKind::SelfAdjoint => a.is_self_adjoint(&cfg),
                MatrixKind::Positive => a.is_positive(&cfg),
                MatrixKind::Unitary => a.is_unitary(&cfg),
            };
            Report::new(
                "gen",
                seed,
                json!({"kind": kind.to_string(), "n": n}),
                json!({"path": path_json(&path), "normality_defect": a.normality_defect()}),
                vec![Assertion::holds("kind_postcondition", ok)],
                start,
            )
        }
        Command::Norm { input } => {
            let a = read_input(&input)?;
            let norm = a.operator_norm();
            writeln!(err, "operator norm: {norm}").map_err(io_err)?;
            Report::new(
                "norm",
                cfg.seed,
                json!({"input": path_json(&input)}),
                json!({"norm": norm}),
                vec![],
                start,
            )
        }
        Command::Numrad {
            input,
            restarts,
            iters,
            seed,
        } => {
            let a = read_input(&input)?;
            let ocfg = OptimizerConfig {
                restarts,
                max_iters: iters,
                seed,
                ..OptimizerConfig::default()
            };
            let est = numerical_radius(&a, &ocfg)?;
            let norm = a.operator_norm();
            writeln!(err, "numerical radius: {} (norm {norm})", est.value).map_err(io_err)?;
            Report::new(
                "numrad",
                seed,
                json!({"input": path_json(&input), "restarts": restarts, "iters": iters}),
                json!({"estimate": est, "norm": norm}),
                vec![Assertion::at_most(
                    "radius_minus_norm",
                    est.value - norm,
                    1e-8 * norm.max(1.0),
                )],
                start,
            )
        }
        Command::Wrange {
            input,
            count,
            slice,
            seed,
        } => {
            let a = read_input(&input)?;
            let samples = sample_numerical_range(&a, count, seed)?;
            let mut w = csv::Writer::from_writer(&mut *out);
            let mut header = vec!["w", "x", "y", "z"];
            if slice.is_some() {
                header.extend(["slice_re", "slice_im"]);
            }
            w.write_record(&header).map_err(io_err)?;
            for q in &samples {
                let mut row: Vec<f64> = q.to_array().to_vec();
                if let Some(m) = slice {
                    let (re, im) = slice_projection(*q, m);
                    row.extend([re, im]);
                }
                w.serialize(row).map_err(io_err)?;
            }
            w.flush().map_err(io_err)?;
            let max = samples.iter().map(|q| q.norm()).fold(0.0, f64::max);
            writeln!(err, "{count} samples, max modulus {max}").map_err(io_err)?;
            return Ok(true);
        }
        Command::Spectrum { input } => {
            let a = read_input(&input)?;
            let d = spectral_decomposition(&a, &cfg)?;
            let rep = SpectrumReport::new(&d, &cfg);
            for c in &rep.classes {
                writeln!(err, "class: re {:.6} |im| {:.6}", c.re, c.im_mod).map_err(io_err)?;
            }
            Report::new(
                "spectrum",
                cfg.seed,
                json!({"input": path_json(&input)}),
                serde_json::to_value(&rep).map_err(io_err)?,
                spectral_assertions(&a, &d),
                start,
            )
        }
        Command::Sspec { input, q } => {
            let a = read_input(&input)?;
            let point = in_point_spectrum(&a, q, &cfg)?;
            let spherical = in_spherical_spectrum(&a, q, &cfg)?;
            writeln!(err, "in point spectrum: {point}").map_err(io_err)?;
            Report::new(
                "sspec",
                cfg.seed,
                json!({"input": path_json(&input), "q": q}),
                json!({"class": q.class(), "in_point_spectrum": point, "in_spherical_spectrum": spherical}),
                vec![],
                start,
            )
        }
        Command::Polar { input } => {
            let a = read_input(&input)?;
            let pd = polar(&a, &cfg)?;
            let norm = a.operator_norm().max(f64::MIN_POSITIVE);
            let res = (&(&pd.v * &pd.abs_t) - &a).operator_norm() / norm;
            Report::new(
                "polar",
                cfg.seed,
                json!({"input": path_json(&input)}),
                json!({"v": pd.v, "abs_t": pd.abs_t, "rank": rank(&a, &cfg)}),
                vec![Assertion::at_most("polar_reconstruction", res, 1e-8)],
                start,
            )
        }
        Command::Sqrt { input } => {
            let a = read_input(&input)?;
            let s = sqrt_positive(&a, &cfg)?;
            let res = (&(&s * &s) - &a).operator_norm() / a.operator_norm().max(f64::MIN_POSITIVE);
            Report::new(
                "sqrt",
                cfg.seed,
                json!({"input": path_json(&input)}),
                json!({"sqrt": s}),
                vec![Assertion::at_most("sqrt_squared_residual", res, 1e-8)],
                start,
            )
        }
        Command::Perturb { input, eps } => {
            let a = read_input(&input)?;
            let chain = lindenstrauss_chain(&a, eps, &cfg)?;
            let p = &chain.general;
            let tk = p.witness.norm;
            Report::new(
                "perturb",
                cfg.seed,
                json!({"input": path_json(&input), "eps": eps}),
                json!({
                    "K": p.k,
                    "eps": eps,
                    "witness": p.witness,
                    "norms": {"T": a.operator_norm(), "K": p.k.operator_norm(), "T_plus_K": tk},
                }),
                vec![
                    Assertion::holds("perturbation_rank_one", rank(&p.k, &cfg) == 1),
                    Assertion::at_most(
                        "perturbation_norm_minus_eps",
                        p.k.operator_norm() - eps,
                        1e-12,
                    ),
                    Assertion::at_most("attainment_gap", (tk - p.witness.achieved) / tk, 1e-8),
                ],
                start,
            )
        }
        Command::Check {
            input,
            trials,
            n,
            kind,
            seed,
        } => match (input, trials) {
            (Some(input), _) => {
                let a = read_input(&input)?;
                let assertions = check_matrix(&a, seed)?;
                Report::new(
                    "check",
                    seed,
                    json!({"input": path_json(&input)}),
                    json!({}),
                    assertions,
                    start,
                )
            }
            (None, trials) => {
                let trials = trials.unwrap_or(1);
                if n == 0 || trials == 0 {
                    return Err(Error::Domain("n and trials must be positive".into()));
                }
                let results: Vec<Result<Vec<Assertion>>> = (0..trials)
                    .into_par_iter()
                    .map(|t| {
                        let s = seed.wrapping_add(t as u64);
                        check_matrix(&random_matrix(kind, n, s), s)
                    })
                    .collect();
                let mut rows = Vec::with_capacity(trials);
                let mut merged: Vec<Assertion> = Vec::new();
                writeln!(err, "{:>6} {:>20} {:>5} failed", "trial", "seed", "pass")
                    .map_err(io_err)?;
                for (t, res) in results.into_iter().enumerate() {
                    let res = res?;
                    let failed: Vec<&str> = res
                        .iter()
                        .filter(|a| !a.pass)
                        .map(|a| a.name.as_str())
                        .collect();
                    writeln!(
                        err,
                        "{t:>6} {:>20} {:>5} {}",
                        seed.wrapping_add(t as u64),
                        failed.is_empty(),
                        failed.join(",")
                    )
                    .map_err(io_err)?;
                    rows.push(json!({"trial": t, "seed": seed.wrapping_add(t as u64), "pass": failed.is_empty(), "failed": failed}));
                    merge_worst(&mut merged, res);
                }
                Report::new(
                    "check",
                    seed,
                    json!({"trials": trials, "n": n, "kind": kind.to_string()}),
                    json!({"trials": rows}),
                    merged,
                    start,
                )
            }
        },
        Command::ExtendDemo { input, n, seed } => {
            let (t, source) = match input {
                Some(p) => (read_input(&p)?, path_json(&p)),
                None => (
                    random_normal(n, seed),
                    json!(format!("random normal {n}x{n}")),
                ),
            };
            let d = spectral_decomposition(&t, &cfg)?;
            let j = construct_j(&d, &cfg);
            let dim = t.rows();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vals: Vec<Complex64> = (0..dim * dim)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let w = extend(
                &ComplexMatrix::from_fn(dim, dim, |r, c| vals[dim * r + c]),
                &j,
                &cfg,
            )?;
            let res = extension_residuals(&t, &w, &j, &cfg)?;
            let mut assertions = vec![
                Assertion::at_most("norm_preserved", res.norm, 1e-9),
                Assertion::at_most("round_trip", res.round_trip, 1e-9),
                Assertion::at_most("adjoint", res.adjoint, 1e-9),
                Assertion::at_most("product", res.product, 1e-9),
                Assertion::at_most("additivity", res.additivity, 1e-9),
                Assertion::at_most("identity", res.identity, 1e-9),
            ];
            if let Some(inv) = res.inverse {
                assertions.push(Assertion::at_most("inverse", inv, 1e-9));
            }
            Report::new(
                "extend-demo",
                seed,
                json!({"operator": source}),
                json!({"residuals": res}),
                assertions,
                start,
            )
        }
    };
    emit(&report, out, err)
}

fn merge_worst(merged: &mut Vec<Assertion>, res: Vec<Assertion>) {
    for a in res {
        match merged.iter_mut().find(|m| m.name == a.name) {
            Some(m) => {
                m.value = m.value.max(a.value);
                m.pass &= a.pass;
            }
            None => merged.push(a),
        }
    }
}

fn orthonormality_defect(phis: &[QVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, u) in phis.iter().enumerate() {
        for (b, v) in phis.iter().enumerate() {
            let want = if a == b {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            };
            let got = u.inner(v).unwrap_or(Quaternion::real(f64::INFINITY));
            worst = worst.max((got - want).norm());
        }
    }
    worst
}

fn spectral_assertions(a: &QMatrix, d: &SpectralDecomposition) -> Vec<Assertion> {
    let norm = a.operator_norm().max(f64::MIN_POSITIVE);
    let n = a.rows() as f64;
    let ordered =
        d.qs.windows(2)
            .all(|w| w[0].norm() >= w[1].norm() - 1e-12 * norm);
    vec![
        Assertion::at_most(
            "reconstruction",
            (a - &reconstruct(d)).operator_norm() / (norm * n),
            1e-8,
        ),
        Assertion::at_most("orthonormality", orthonormality_defect(&d.phis), 1e-10),
        Assertion::holds("modulus_order", ordered),
    ]
}

/// Invariant suite for one square matrix. The general part covers the
/// numerical radius bound, the polar factors and the perturbation chain;
/// normal inputs add the normaloid identity, the spectral reconstruction
/// and closure of eigenpairs under similarity.
pub fn check_matrix(a: &QMatrix, seed: u64) -> Result<Vec<Assertion>> {
    let cfg = NumericConfig::default().with_seed(seed);
    a.require_square()?;
    let norm = a.operator_norm();
    if norm == 0.0 {
        return Ok(vec![Assertion::holds("zero_operator", true)]);
    }
    let ocfg = OptimizerConfig {
        seed,
        ..OptimizerConfig::default()
    };
    let radius = numerical_radius(a, &ocfg)?.value;
    let mut out = vec![Assertion::at_most(
        "radius_excess",
        (radius - norm) / norm,
        1e-8,
    )];

    let pd = polar(a, &cfg)?;
    out.push(Assertion::at_most(
        "polar_reconstruction",
        (&(&pd.v * &pd.abs_t) - a).operator_norm() / norm,
        1e-8,
    ));
    let gram = &a.adjoint() * a;
    let abs = modulus(a, &cfg)?;
    out.push(Assertion::at_most(
        "modulus_squared",
        (&(&abs * &abs) - &gram).operator_norm() / gram.operator_norm(),
        1e-8,
    ));
    let isometry = cokernel_frame(a, &cfg)?
        .iter()
        .map(|phi| (pd.v.apply_unchecked(phi).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    out.push(Assertion::at_most("partial_isometry", isometry, 1e-9));
    out.push(Assertion::holds(
        "rank_v_equals_rank_a",
        rank(&pd.v, &cfg) == rank(a, &cfg),
    ));

    let eps = 0.1;
    let chain = lindenstrauss_chain(a, eps, &cfg)?;
    let (p, c) = (&chain.general, &chain.positive);
    out.push(Assertion::holds(
        "perturbation_rank_one",
        rank(&p.k, &cfg) == 1,
    ));
    out.push(Assertion::at_most(
        "perturbation_norm_excess",
        p.k.operator_norm() - eps,
        1e-12,
    ));
    let top = chain.polar.abs_t.operator_norm() + eps;
    out.push(Assertion::at_most(
        "positive_eigen_residual",
        eigen_residual(&(&chain.polar.abs_t + &c.k), &c.witness.x, top),
        1e-9,
    ));
    out.push(Assertion::at_most(
        "attainment_gap",
        (p.witness.norm - p.witness.achieved) / p.witness.norm,
        1e-8,
    ));

    if a.is_normal(&cfg) {
        out.push(Assertion::at_most(
            "normaloid_gap",
            (norm - radius) / norm,
            1e-4,
        ));
        let d = spectral_decomposition(a, &cfg)?;
        out.extend(spectral_assertions(a, &d));
        let top_mod = d.qs.first().map(|q| q.norm()).unwrap_or(0.0);
        out.push(Assertion::at_most(
            "top_eigenvalue_modulus",
            (top_mod - norm).abs() / norm,
            1e-9,
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut closure: f64 = 0.0;
        let mut member = true;
        for (phi, q) in d.pairs() {
            for _ in 0..3 {
                let s = random_quaternion(&mut rng);
                let s = s.scale(1.0 / s.norm());
                let p = s.conj() * q * s;
                let ps = phi.scale_right(s);
                closure = closure.max((&a.apply_unchecked(&ps) - &ps.scale_right(p)).norm() / norm);
                member &= in_point_spectrum(a, p, &cfg)?;
            }
        }
        out.push(Assertion::at_most("class_closure", closure, 1e-8));
        out.push(Assertion::holds("classes_in_point_spectrum", member));
    }
    if a.is_positive(&cfg) {
        let s = sqrt_positive(a, &cfg)?;
        out.push(Assertion::at_most(
            "sqrt_squared",
            (&(&s * &s) - a).operator_norm() / norm,
            1e-8,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_quaternions_and_units() {
        assert_eq!(parse_quaternion("0,0,1,0").unwrap(), Quaternion::J);
        assert_eq!(
            parse_quaternion("-1, 2,3,4").unwrap(),
            Quaternion::new(-1.0, 2.0, 3.0, 4.0)
        );
        assert!(parse_quaternion("1,2,3").is_err());
        assert!(parse_quaternion("1,2,3,x").is_err());
        assert!(parse_quaternion("1,2,3,inf").is_err());
        assert_eq!(parse_unit("j").unwrap(), ImaginaryUnit::J);
        assert!(parse_unit("0,0,2")
            .unwrap()
            .get()
            .approx_eq(Quaternion::K, 1e-15));
        assert!(parse_unit("0,0,0").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run_with(["quatrad"], &mut o, &mut e), 2);
        assert_eq!(run_with(["quatrad", "bogus"], &mut o, &mut e), 2);
        assert_eq!(
            run_with(["quatrad", "norm", "/nonexistent.json"], &mut o, &mut e),
            2
        );
        assert_eq!(run_with(["quatrad", "--help"], &mut o, &mut e), 0);
    }

    #[test]
    fn check_suite_passes_on_generated_kinds() {
        for kind in [
            MatrixKind::Normal,
            MatrixKind::SelfAdjoint,
            MatrixKind::Positive,
            MatrixKind::Unitary,
            MatrixKind::General,
        ] {
            let a = random_matrix(kind, 4, DEFAULT_SEED);
            let res = check_matrix(&a, DEFAULT_SEED).unwrap();
            let failed: Vec<_> = res.iter().filter(|a| !a.pass).collect();
            assert!(failed.is_empty(), "{kind}: {failed:?}");
        }
    }

    #[test]
    fn merge_keeps_worst_value() {
        let mut m = Vec::new();
        merge_worst(&mut m, vec![Assertion::at_most("a", 1.0, 2.0)]);
        merge_worst(&mut m, vec![Assertion::at_most("a", 3.0, 2.0)]);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].value, 3.0);
        assert!(!m[0].pass);
    }
}
