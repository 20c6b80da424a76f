//! Batch front end: JSON in, JSON report out, one job per invocation.
//!
//! Exit codes: 0 success, 2 input error, 3 theorem-check failure,
//! 4 numerical non-convergence.

use crate::classical::{bezout_matrix, common_zero_count_line, line_image_detrep, sylvester_resultant};
use crate::curve::{curve_bezout, curve_common_zero_count, image_detrep, principal_subspace, DetRep};
use crate::error::Error;
use crate::matrix::{determinant, rank_kernel, Matrix, DEFAULT_TOL};
use crate::poly::{MultiPoly, UniPoly};
use crate::vessel::{
    cayley_hamilton_check, discriminant, discriminant_image_check, fiber_isomorphism_check,
    random_vessel, reduce_transformed, sample_curve_points, transform_vessel, vessel_check,
    RationalPair, Vessel,
};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "vessel-elim", about = "Elimination theory for curves with determinantal representations and operator vessels", version)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    /// Input JSON file (stdin when absent)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output JSON file (stdout when absent)
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Numerical tolerance for the float path
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for all randomized sampling; fully determines the output
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sample count for randomized checks
    #[arg(long, global = true, default_value_t = 25)]
    pub samples: usize,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Bezout matrix of two univariate polynomials
    Bezout,
    /// Sylvester resultant of two univariate polynomials
    Resultant,
    /// Determinantal representation of the image of a line under a rational map
    ImageLine,
    /// Operations on curves with determinantal representations
    Curve {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// Operations on operator vessels
    Vessel {
        #[command(subcommand)]
        cmd: VesselCmd,
    },
    /// Fixture generation
    Fixtures {
        #[command(subcommand)]
        cmd: FixturesCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum CurveCmd {
    /// Principal subspace of a determinantal representation at degree n
    Vn,
    /// Generalized Bezout matrix of two homogeneous polynomials along the curve
    Bezout,
    /// Count common zeros of two polynomials along the curve
    CommonZeros,
    /// Determinantal representation of the image curve under a rational map
    Image,
}

#[derive(Subcommand, Debug)]
pub enum VesselCmd {
    /// Validate the vessel axioms
    Check,
    /// Discriminant polynomial and in/out agreement
    Discriminant,
    /// Transform a vessel along a rational map of the plane
    Transform,
    /// Transform and reduce to the basepoint-free outer space
    Reduce,
    /// Full theorem suite: transform, reduce, image containment, fibers
    VerifyTheorems,
}

#[derive(Subcommand, Debug)]
pub enum FixturesCmd {
    /// Generate a random diagonal vessel fixture
    Gen,
}

pub struct JobError {
    pub code: i32,
    pub message: String,
}

impl JobError {
    fn input(msg: impl Into<String>) -> Self {
        JobError { code: 2, message: msg.into() }
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Input(_)
            | Error::Dimension(_)
            | Error::NotHermitian { .. }
            | Error::Infeasible(_)
            | Error::DegenerateMap
            | Error::BasepointAtSpectrum => 2,
            Error::TheoremCheck(_) => 3,
            Error::NonConvergence { .. } | Error::Internal(_) => 4,
        };
        JobError { code, message: e.to_string() }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<Value, JobError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| JobError::input(format!("cannot read {}: {}", p.display(), e)))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| JobError::input(format!("cannot read stdin: {}", e)))?;
            s
        }
    };
    serde_json::from_str(&text)
        .map_err(|e| JobError::input(format!("malformed JSON at line {}, column {}: {}", e.line(), e.column(), e)))
}

fn parse<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T, JobError> {
    serde_json::from_value(v.clone()).map_err(|e| JobError::input(format!("invalid input: {}", e)))
}

#[derive(Deserialize)]
struct PairInput {
    p: UniPoly,
    q: UniPoly,
    n: usize,
}

#[derive(Deserialize)]
struct LineMapInput {
    p0: UniPoly,
    p1: UniPoly,
    p2: UniPoly,
    n: usize,
}

#[derive(Deserialize)]
struct DetRepInput {
    d0: Matrix,
    d1: Matrix,
    d2: Matrix,
}

impl DetRepInput {
    fn build(self) -> Result<DetRep, JobError> {
        Ok(DetRep::new(self.d0, self.d1, self.d2)?)
    }
}

#[derive(Deserialize)]
struct CurveVnInput {
    detrep: DetRepInput,
    n: u32,
}

#[derive(Deserialize)]
struct CurvePairInput {
    detrep: DetRepInput,
    p: MultiPoly,
    q: MultiPoly,
    n: u32,
}

#[derive(Deserialize)]
struct CurveMapInput {
    detrep: DetRepInput,
    p0: MultiPoly,
    p1: MultiPoly,
    p2: MultiPoly,
    n: u32,
}

#[derive(Deserialize)]
struct VesselInput {
    vessel: Vessel,
}

#[derive(Deserialize)]
struct MapInput {
    p0: MultiPoly,
    p1: MultiPoly,
    p2: MultiPoly,
    n: u32,
}

#[derive(Deserialize)]
struct VesselMapInput {
    vessel: Vessel,
    map: MapInput,
}

#[derive(Deserialize)]
struct FixtureInput {
    #[serde(default = "default_dim_h")]
    dim_h: usize,
}

fn default_dim_h() -> usize {
    2
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serialization cannot fail")
}

/// Run one job; returns (report, exit code).
pub fn run(cli: &Cli) -> (Value, i32) {
    match run_inner(cli) {
        Ok((results, code)) => {
            let report = json!({
                "subcommand": subcommand_name(&cli.cmd),
                "tol": cli.tol,
                "seed": cli.seed,
                "samples": cli.samples,
                "ok": code == 0,
                "results": results,
            });
            (report, code)
        }
        Err(e) => {
            let report = json!({
                "subcommand": subcommand_name(&cli.cmd),
                "ok": false,
                "error": e.message,
                "exit_code": e.code,
            });
            (report, e.code)
        }
    }
}

fn subcommand_name(cmd: &Cmd) -> String {
    match cmd {
        Cmd::Bezout => "bezout".into(),
        Cmd::Resultant => "resultant".into(),
        Cmd::ImageLine => "image-line".into(),
        Cmd::Curve { cmd } => match cmd {
            CurveCmd::Vn => "curve vn".into(),
            CurveCmd::Bezout => "curve bezout".into(),
            CurveCmd::CommonZeros => "curve common-zeros".into(),
            CurveCmd::Image => "curve image".into(),
        },
        Cmd::Vessel { cmd } => match cmd {
            VesselCmd::Check => "vessel check".into(),
            VesselCmd::Discriminant => "vessel discriminant".into(),
            VesselCmd::Transform => "vessel transform".into(),
            VesselCmd::Reduce => "vessel reduce".into(),
            VesselCmd::VerifyTheorems => "vessel verify-theorems".into(),
        },
        Cmd::Fixtures { cmd } => match cmd {
            FixturesCmd::Gen => "fixtures gen".into(),
        },
    }
}

fn run_inner(cli: &Cli) -> Result<(Value, i32), JobError> {
    match &cli.cmd {
        Cmd::Bezout => {
            let inp: PairInput = parse(&read_input(&cli.input)?)?;
            let b = bezout_matrix(&inp.p, &inp.q, inp.n)?;
            let det = determinant(&b.entries);
            let kernel_dim = rank_kernel(&b.entries, cli.tol.max(DEFAULT_TOL)).kernel.dim();
            Ok((
                json!({
                    "p": to_value(&inp.p),
                    "q": to_value(&inp.q),
                    "n": inp.n,
                    "matrix": to_value(&b.entries),
                    "determinant": to_value(&det),
                    "kernel_dim": kernel_dim,
                    "exact": b.entries.is_exact(),
                }),
                0,
            ))
        }
        Cmd::Resultant => {
            let inp: PairInput = parse(&read_input(&cli.input)?)?;
            let r = sylvester_resultant(&inp.p, &inp.q, inp.n)?;
            let common = common_zero_count_line(&inp.p, &inp.q, inp.n)?;
            Ok((
                json!({
                    "p": to_value(&inp.p),
                    "q": to_value(&inp.q),
                    "n": inp.n,
                    "resultant": to_value(&r),
                    "common_zero_count": common,
                    "exact": r.is_exact(),
                }),
                0,
            ))
        }
        Cmd::ImageLine => {
            let inp: LineMapInput = parse(&read_input(&cli.input)?)?;
            let img = line_image_detrep(&inp.p0, &inp.p1, &inp.p2, inp.n)?;
            Ok((
                json!({
                    "b10": to_value(&img.b10.entries),
                    "b20": to_value(&img.b20.entries),
                    "b12": to_value(&img.b12.entries),
                    "image_poly": to_value(&img.poly),
                    "exact": img.poly.is_exact(),
                }),
                0,
            ))
        }
        Cmd::Curve { cmd } => run_curve(cli, cmd),
        Cmd::Vessel { cmd } => run_vessel(cli, cmd),
        Cmd::Fixtures { cmd } => match cmd {
            FixturesCmd::Gen => {
                let inp: FixtureInput = match &cli.input {
                    Some(_) => parse(&read_input(&cli.input)?)?,
                    None => FixtureInput { dim_h: default_dim_h() },
                };
                if inp.dim_h == 0 || inp.dim_h > 8 {
                    return Err(JobError::input("dim_h must be between 1 and 8"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                let v = random_vessel(inp.dim_h, &mut rng);
                Ok((
                    json!({
                        "vessel": to_value(&v),
                        "dim_h": v.dim_h(),
                        "dim_e": v.dim_e(),
                    }),
                    0,
                ))
            }
        },
    }
}

fn run_curve(cli: &Cli, cmd: &CurveCmd) -> Result<(Value, i32), JobError> {
    match cmd {
        CurveCmd::Vn => {
            let inp: CurveVnInput = parse(&read_input(&cli.input)?)?;
            check_n(inp.n)?;
            let dr = inp.detrep.build()?;
            let p = principal_subspace(&dr, inp.n);
            Ok((
                json!({
                    "delta": to_value(&dr.delta),
                    "n": inp.n,
                    "dim": p.dim(),
                    "expected_dim": inp.n as usize * dr.m,
                    "basis": to_value(p.subspace.basis()),
                }),
                0,
            ))
        }
        CurveCmd::Bezout => {
            let inp: CurvePairInput = parse(&read_input(&cli.input)?)?;
            check_n(inp.n)?;
            let dr = inp.detrep.build()?;
            let gb = curve_bezout(&inp.p, &inp.q, &dr, inp.n)?;
            Ok((
                json!({
                    "beta10": to_value(&gb.betas.b10),
                    "beta20": to_value(&gb.betas.b20),
                    "beta12": to_value(&gb.betas.b12),
                    "blown": to_value(&gb.blown),
                    "restricted": to_value(&gb.restricted),
                    "kernel_dim": rank_kernel(&gb.restricted, cli.tol.max(DEFAULT_TOL)).kernel.dim(),
                }),
                0,
            ))
        }
        CurveCmd::CommonZeros => {
            let inp: CurvePairInput = parse(&read_input(&cli.input)?)?;
            check_n(inp.n)?;
            let dr = inp.detrep.build()?;
            let count = curve_common_zero_count(&inp.p, &inp.q, &dr, inp.n)?;
            Ok((json!({ "common_zero_count": count }), 0))
        }
        CurveCmd::Image => {
            let inp: CurveMapInput = parse(&read_input(&cli.input)?)?;
            check_n(inp.n)?;
            let dr = inp.detrep.build()?;
            let img = image_detrep(&inp.p0, &inp.p1, &inp.p2, &dr, inp.n, cli.tol)?;
            Ok((
                json!({
                    "image_poly": to_value(&img.poly),
                    "b10": to_value(&img.b10),
                    "b20": to_value(&img.b20),
                    "b12": to_value(&img.b12),
                    "basepoint_count": img.reduction.basepoints.len(),
                    "reduced_dim": img.reduction.vbar.dim(),
                    "exact": img.reduction.exact,
                }),
                0,
            ))
        }
    }
}

fn check_n(n: u32) -> Result<(), JobError> {
    if n == 0 || n > 6 {
        return Err(JobError::input("degree n must be between 1 and 6"));
    }
    Ok(())
}

fn residuals_value(report: &crate::vessel::VesselReport) -> Value {
    Value::Array(
        report
            .residuals
            .iter()
            .map(|r| {
                json!({
                    "axiom": r.name,
                    "norm": r.norm,
                    "exact_zero": r.exact_zero,
                })
            })
            .collect(),
    )
}

fn failing_axioms(report: &crate::vessel::VesselReport, tol: f64) -> Vec<String> {
    let scale = 1.0_f64;
    report
        .residuals
        .iter()
        .filter(|r| match r.exact_zero {
            Some(z) => !z,
            None => r.norm > tol * scale,
        })
        .map(|r| r.name.to_string())
        .collect()
}

fn run_vessel(cli: &Cli, cmd: &VesselCmd) -> Result<(Value, i32), JobError> {
    match cmd {
        VesselCmd::Check => {
            let inp: VesselInput = parse(&read_input(&cli.input)?)?;
            let report = vessel_check(&inp.vessel, cli.tol);
            let failing = failing_axioms(&report, cli.tol);
            let code = if report.pass { 0 } else { 3 };
            Ok((
                json!({
                    "pass": report.pass,
                    "exact": report.exact,
                    "residuals": residuals_value(&report),
                    "failing_axioms": failing,
                }),
                code,
            ))
        }
        VesselCmd::Discriminant => {
            let inp: VesselInput = parse(&read_input(&cli.input)?)?;
            let d = discriminant(&inp.vessel)?;
            let ch = cayley_hamilton_check(&inp.vessel)?;
            Ok((
                json!({
                    "poly": to_value(&d.poly),
                    "in_out_equal": d.in_out_equal,
                    "cayley_hamilton": {
                        "residual": ch.residual,
                        "exact_zero": ch.exact_zero,
                        "principal_dim": ch.principal_dim,
                    },
                }),
                0,
            ))
        }
        VesselCmd::Transform => {
            let inp: VesselMapInput = parse(&read_input(&cli.input)?)?;
            let rp = RationalPair::new(inp.map.p0, inp.map.p1, inp.map.p2, inp.map.n)?;
            let t = transform_vessel(&inp.vessel, &rp)?;
            let report = vessel_check(&t.vessel, cli.tol);
            Ok((
                json!({
                    "vessel": to_value(&t.vessel),
                    "axioms": residuals_value(&report),
                    "pass": report.pass,
                }),
                if report.pass { 0 } else { 3 },
            ))
        }
        VesselCmd::Reduce => {
            let inp: VesselMapInput = parse(&read_input(&cli.input)?)?;
            let rp = RationalPair::new(inp.map.p0, inp.map.p1, inp.map.p2, inp.map.n)?;
            let t = transform_vessel(&inp.vessel, &rp)?;
            let r = reduce_transformed(&t, cli.tol)?;
            let report = vessel_check(&r.vessel, cli.tol);
            let pass = report.pass && r.gamma_out_consistent;
            Ok((
                json!({
                    "vessel": to_value(&r.vessel),
                    "basepoint_count": r.basepoints.len(),
                    "exact": r.exact,
                    "gamma_out_consistent": r.gamma_out_consistent,
                    "axioms": residuals_value(&report),
                    "pass": pass,
                }),
                if pass { 0 } else { 3 },
            ))
        }
        VesselCmd::VerifyTheorems => {
            let inp: VesselMapInput = parse(&read_input(&cli.input)?)?;
            let rp = RationalPair::new(inp.map.p0, inp.map.p1, inp.map.p2, inp.map.n)?;
            let original = inp.vessel;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let base_report = vessel_check(&original, cli.tol);
            let d = discriminant(&original)?;
            let ch = cayley_hamilton_check(&original)?;
            let t = transform_vessel(&original, &rp)?;
            let t_report = vessel_check(&t.vessel, cli.tol);
            let r = reduce_transformed(&t, cli.tol)?;
            let r_report = vessel_check(&r.vessel, cli.tol);
            let image =
                discriminant_image_check(&original, &t, &r, cli.samples.max(1), cli.tol, &mut rng)?;
            // fiber checks at a few sampled curve points
            let fiber_points = sample_curve_points(&d.poly, 3, cli.tol, &mut rng)?;
            let mut fiber_reports = Vec::new();
            let mut fibers_pass = true;
            for (y1, y2) in &fiber_points {
                match fiber_isomorphism_check(&original, &t, &r, y1, y2, cli.tol) {
                    Ok(fr) => {
                        fibers_pass &= fr.pass;
                        fiber_reports.push(json!({
                            "y1": to_value(y1),
                            "y2": to_value(y2),
                            "vectors_checked": fr.vectors_checked,
                            "in_residual": fr.in_residual,
                            "out_residual": fr.out_residual,
                            "basepoint_collisions": fr.basepoint_collisions,
                            "pass": fr.pass,
                        }));
                    }
                    Err(Error::Input(_)) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
            let pass = base_report.pass
                && d.in_out_equal
                && ch.exact_zero.unwrap_or(ch.residual <= cli.tol)
                && t_report.pass
                && r_report.pass
                && r.gamma_out_consistent
                && image.pass
                && fibers_pass;
            Ok((
                json!({
                    "original_axioms_pass": base_report.pass,
                    "discriminant_in_out_equal": d.in_out_equal,
                    "cayley_hamilton_zero": ch.exact_zero,
                    "transformed_axioms_pass": t_report.pass,
                    "reduced_axioms_pass": r_report.pass,
                    "gamma_out_consistent": r.gamma_out_consistent,
                    "image_check": {
                        "sampled": image.sampled,
                        "vanishing": image.vanishing,
                        "skipped_denominator": image.skipped_denominator,
                        "reduced_dim": image.reduced_dim,
                        "expected_dim": image.expected_dim,
                        "pass": image.pass,
                    },
                    "fiber_checks": fiber_reports,
                    "pass": pass,
                }),
                if pass { 0 } else { 3 },
            ))
        }
    }
}
