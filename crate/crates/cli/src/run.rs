//! Command dispatch. Every command builds a [`Report`]; rendering happens afterwards.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use koszul_hh_core::complexes::{
    central_action, hh_report, truncated_estimate, verify_resolution, Coefficients, ComplexError,
    Grading, HochschildComplex,
};
use koszul_hh_core::cup::CupContext;
use koszul_hh_core::dual::{e_identity_check, twisting_cochain_check, CurvedDualTable};
use koszul_hh_core::presentation::{
    declared_field, format_word, parse_element, parse_presentation, pbw_confluence_check, Algebra,
    Confluence, NcPoly, Presentation,
};
use koszul_hh_core::{Check, Field, NumberFieldElement, Rational, Scalar};
use thiserror::Error;

use crate::args::{Cli, Command, Common, SliceArgs};
use crate::report::{
    ClassRef, ClassSlice, CommandInfo, MatrixRecord, ProductRecord, Report, TableEntry,
};

/// Errors that stop a command before a report exists (exit code 2).
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::DegreeOutOfRange { .. } => {
                CliError::Usage(format!("{e} (--max-dual-degree)"))
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Run a command and render its output; returns `(stdout, stderr, exit code)`.
pub fn execute(cli: &Cli) -> (String, String, i32) {
    match run(cli) {
        Ok(report) => {
            let code = if report.all_checks_pass() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            let out = if common(&cli.command).json {
                report.to_json() + "\n"
            } else {
                report.render_text()
            };
            (out, String::new(), code)
        }
        Err(e) => (String::new(), format!("error: {e}\n"), EXIT_USAGE),
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Check { common, .. }
        | Command::Dual { common }
        | Command::Hh { common, .. }
        | Command::Cup { common, .. }
        | Command::Resolution { common, .. } => common,
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let c = common(&cli.command);
    let path = c.file.display().to_string();
    let text = std::fs::read_to_string(&c.file).map_err(|e| CliError::Io {
        path: path.clone(),
        message: e.to_string(),
    })?;
    run_on_text(&cli.command, &text, &path)
}

/// Run a command on presentation text already in memory.
pub fn run_on_text(cmd: &Command, text: &str, path: &str) -> Result<Report, CliError> {
    let parse_err = |e: koszul_hh_core::presentation::ParseError| CliError::Parse {
        path: path.into(),
        message: e.to_string(),
    };
    match declared_field(text).map_err(parse_err)? {
        Field::Rationals => dispatch::<Rational>(cmd, text, path),
        Field::NumberField { .. } => dispatch::<NumberFieldElement>(cmd, text, path),
    }
}

struct Ctx<'a, S> {
    text: &'a str,
    path: &'a str,
    p: Presentation<S>,
}

fn dispatch<S: Scalar>(cmd: &Command, text: &str, path: &str) -> Result<Report, CliError> {
    let p: Presentation<S> = parse_presentation(text).map_err(|e| CliError::Parse {
        path: path.into(),
        message: e.to_string(),
    })?;
    let ctx = Ctx { text, path, p };
    match cmd {
        Command::Check {
            common,
            resolution_weights,
        } => cmd_check(&ctx, common, resolution_weights.clone()),
        Command::Dual { common } => cmd_dual(&ctx, common),
        Command::Hh {
            common,
            slice,
            central,
        } => cmd_hh(&ctx, common, slice, central.as_deref()),
        Command::Cup {
            common,
            coeff,
            table,
            surjectivity,
            central,
            weights,
        } => cmd_cup(
            &ctx,
            common,
            coeff,
            table.as_deref(),
            surjectivity.as_deref(),
            central.as_deref(),
            weights.clone(),
        ),
        Command::Resolution { common, weights } => cmd_resolution(&ctx, common, weights.clone()),
    }
}

fn fmt_range<T: std::fmt::Display>(r: &RangeInclusive<T>) -> String {
    format!("{}..{}", r.start(), r.end())
}

impl<S: Scalar> Ctx<'_, S> {
    fn report(&self, name: &str, options: BTreeMap<String, String>) -> Report {
        Report::new(
            self.text,
            CommandInfo {
                name: name.into(),
                field: self.p.field.to_string(),
                options,
            },
        )
    }

    fn algebra(&self) -> Result<Algebra<S>, CliError> {
        Algebra::new(self.p.clone()).map_err(|e| CliError::Usage(format!("{}: {e}", self.path)))
    }

    fn coefficients(&self, spec: &str) -> Result<Coefficients<S>, CliError> {
        match spec {
            "regular" => Ok(Coefficients::Regular),
            "enveloping" => Ok(Coefficients::Enveloping),
            _ => match spec.strip_prefix("bimodule:") {
                Some(name) => self
                    .p
                    .bimodule(name)
                    .map(|b| Coefficients::Bimodule(b.clone()))
                    .map_err(|e| CliError::Usage(e.to_string())),
                None => Err(CliError::Usage(format!(
                    "unknown coefficients '{spec}', expected regular, enveloping or bimodule:<name>"
                ))),
            },
        }
    }

    fn central(&self, algebra: &Algebra<S>, z: &str) -> Result<NcPoly<S>, CliError> {
        let z =
            parse_element(z, &self.p).map_err(|e| CliError::Usage(format!("--central: {e}")))?;
        Ok(algebra.normal_form(&z))
    }
}

fn opts(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn cmd_check<S: Scalar>(
    ctx: &Ctx<'_, S>,
    common: &Common,
    weights: RangeInclusive<i64>,
) -> Result<Report, CliError> {
    let mut r = ctx.report(
        "check",
        opts(&[
            ("max_dual_degree", common.max_dual_degree.to_string()),
            ("resolution_weights", fmt_range(&weights)),
        ]),
    );
    match ctx.p.validate() {
        Ok(v) => r.checks.push(
            Check::note(
                "presentation valid",
                format!(
                    "{} generators, dim R = {}, {}, {}",
                    v.generators,
                    v.dim_r,
                    if v.weighted { "weighted" } else { "unweighted" },
                    if v.curved { "curved" } else { "flat" }
                ),
            )
            .into(),
        ),
        Err(e) => {
            r.checks
                .push(Check::fail("presentation valid", e.to_string()).into());
            return Ok(r);
        }
    }
    let names = ctx.p.generator_names();
    match pbw_confluence_check(&ctx.p) {
        Ok(Confluence::Pass { overlaps_checked }) => r.checks.push(
            Check::note(
                "PBW confluence",
                format!("{overlaps_checked} overlaps resolve"),
            )
            .into(),
        ),
        Ok(Confluence::Fail(w)) => {
            r.checks.push(
                Check::fail(
                    "PBW confluence",
                    format!(
                        "overlap {} reduces to {} and to {}",
                        format_word(&w.word, &names),
                        w.via_left.format(&names),
                        w.via_right.format(&names)
                    ),
                )
                .into(),
            );
            return Ok(r);
        }
        Err(e) => {
            r.checks
                .push(Check::fail("PBW confluence", e.to_string()).into());
            return Ok(r);
        }
    }
    let t = CurvedDualTable::for_presentation(&ctx.p, common.max_dual_degree);
    let a = ctx.algebra()?;
    for c in [
        t.verify_duality(),
        t.verify_curved(),
        t.verify_leibniz(),
        t.verify_associativity(),
        twisting_cochain_check(&a),
        e_identity_check(&a, &t),
    ] {
        r.checks.push(c.into());
    }
    if !ctx.p.is_weighted() {
        r.checks
            .push(Check::note("Koszul resolution", "skipped: unweighted").into());
        return Ok(r);
    }
    match verify_resolution(&a, &t, weights) {
        Ok(reports) => {
            for rep in reports {
                push_resolution_tables(&mut r, &rep);
                r.checks.push(rep.check().into());
            }
        }
        Err(e) => r
            .checks
            .push(Check::fail("Koszul resolution", e.to_string()).into()),
    }
    Ok(r)
}

fn push_resolution_tables(r: &mut Report, rep: &koszul_hh_core::complexes::ResolutionReport) {
    for (n, (&d, &h)) in rep.dims.iter().zip(&rep.cohomology).enumerate() {
        let degree = -(n as i64);
        r.tables.push(TableEntry {
            table: "K".into(),
            degree,
            weight: Some(rep.weight),
            dim: d,
            representatives: vec![],
            stable: None,
        });
        r.tables.push(TableEntry {
            table: "H(K)".into(),
            degree,
            weight: Some(rep.weight),
            dim: h,
            representatives: vec![],
            stable: None,
        });
    }
}

fn cmd_dual<S: Scalar>(ctx: &Ctx<'_, S>, common: &Common) -> Result<Report, CliError> {
    let mut r = ctx.report(
        "dual",
        opts(&[("max_dual_degree", common.max_dual_degree.to_string())]),
    );
    ctx.p
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let t = CurvedDualTable::for_presentation(&ctx.p, common.max_dual_degree);
    for k in 0..=t.computed_degree() {
        let dim = t.dim(k);
        let reps = (0..dim)
            .map(|a| {
                if k == 0 {
                    "1".to_string()
                } else {
                    t.format_basis(k, a)
                }
            })
            .collect();
        r.tables.push(TableEntry {
            table: "Lambda".into(),
            degree: k as i64,
            weight: None,
            dim,
            representatives: reps,
            stable: None,
        });
    }
    match t.top_degree() {
        Some(top) => r.notes.push(format!("Lambda^k = 0 for k > {top}")),
        None => r.notes.push(format!(
            "Lambda computed through degree {}; no zero component reached",
            t.computed_degree()
        )),
    }
    for k in 1..t.max_source_degree().min(t.computed_degree()) {
        for a in 0..t.dim(k) {
            let dx = t.d(k, &t.basis_vector(k, a));
            if !dx.is_zero() {
                r.notes.push(format!(
                    "d({}) = {}",
                    t.format_basis(k, a),
                    t.format_element(k + 1, &dx)
                ));
            }
        }
    }
    match t.curvature() {
        Some(c) => r.notes.push(format!("c = {}", t.format_element(2, c))),
        None => r.notes.push("c = 0".into()),
    }
    for c in [
        t.verify_duality(),
        t.verify_curved(),
        t.verify_leibniz(),
        t.verify_associativity(),
    ] {
        r.checks.push(c.into());
    }
    Ok(r)
}

fn default_degrees<S: Scalar>(t: &CurvedDualTable<S>) -> RangeInclusive<usize> {
    0..=3.min(t.max_source_degree().saturating_sub(1))
}

fn cmd_hh<S: Scalar>(
    ctx: &Ctx<'_, S>,
    common: &Common,
    args: &SliceArgs,
    central: Option<&str>,
) -> Result<Report, CliError> {
    let a = ctx.algebra()?;
    let t = CurvedDualTable::for_presentation(&ctx.p, common.max_dual_degree);
    let coeff = ctx.coefficients(&args.coeff)?;
    let cx = HochschildComplex::new(&a, &t, &coeff);
    let degrees = args.degrees.clone().unwrap_or_else(|| default_degrees(&t));
    let mut o = vec![
        ("coeff", coeff.label()),
        ("degrees", fmt_range(&degrees)),
        ("max_dual_degree", common.max_dual_degree.to_string()),
    ];

    if let Some(bound) = args.truncate {
        if args.weights.is_some() {
            return Err(CliError::Usage(
                "--truncate and --weights cannot be combined".into(),
            ));
        }
        if central.is_some() {
            return Err(CliError::Usage(
                "--central needs an exact mode (weights or finite coefficients)".into(),
            ));
        }
        o.push(("truncate", bound.to_string()));
        let mut r = ctx.report("hh", opts(&o));
        r.estimate = true;
        let est = truncated_estimate(&cx, bound, degrees)?;
        for row in &est.rows {
            r.tables.push(TableEntry {
                table: "HH estimate".into(),
                degree: row.degree as i64,
                weight: None,
                dim: row.dim_at_bound,
                representatives: vec![],
                stable: Some(row.stable()),
            });
        }
        let at = |f: fn(&koszul_hh_core::complexes::TruncatedRow) -> usize| {
            est.rows
                .iter()
                .map(|r| f(r).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        r.notes.push(format!(
            "estimate at D = {}: ({})",
            bound,
            at(|r| r.dim_at_bound)
        ));
        r.notes.push(format!(
            "estimate at D = {}: ({})",
            bound + 1,
            at(|r| r.dim_at_next)
        ));
        return Ok(r);
    }

    let gradings: Vec<Grading> = match (&coeff, &args.weights) {
        (Coefficients::Bimodule(_), Some(_)) => {
            return Err(ComplexError::BimoduleHasNoWeights.into())
        }
        (Coefficients::Bimodule(_), None) => vec![Grading::Finite],
        (_, w) => {
            if !ctx.p.is_weighted() {
                return Err(ComplexError::Unweighted.into());
            }
            let w = w.clone().unwrap_or(0..=4);
            o.push(("weights", fmt_range(&w)));
            w.map(Grading::Weight).collect()
        }
    };
    let z = central.map(|z| ctx.central(&a, z)).transpose()?;
    if let Some(z) = &z {
        o.push(("central", z.format(&ctx.p.generator_names())));
    }
    let mut r = ctx.report("hh", opts(&o));
    let report = hh_report(&cx, &gradings, degrees)?;
    for e in &report.entries {
        r.tables.push(TableEntry {
            table: "HH".into(),
            degree: e.degree as i64,
            weight: e.grading.weight(),
            dim: e.dim(),
            representatives: e
                .basis
                .representatives()
                .iter()
                .map(|u| cx.format(u))
                .collect(),
            stable: None,
        });
    }
    if let Some(z) = &z {
        let names = ctx.p.generator_names();
        let shift = z.terms().next().map_or(0, |(w, _)| a.weight_of(w));
        for e in &report.entries {
            let target_grading = match e.grading {
                Grading::Weight(w) => Grading::Weight(w + shift),
                g => g,
            };
            let target = match report.get(e.degree, target_grading) {
                Some(t) => t.basis.clone(),
                None => cx.cohomology(target_grading, e.degree)?,
            };
            let m = central_action(&cx, z, &e.basis, &target)?;
            r.matrices.push(MatrixRecord {
                element: z.format(&names),
                degree: e.degree as i64,
                source_weight: e.grading.weight(),
                target_weight: target_grading.weight(),
                rows: m
                    .to_dense()
                    .into_iter()
                    .map(|row| row.iter().map(ToString::to_string).collect())
                    .collect(),
            });
        }
    }
    Ok(r)
}

fn parse_pair(s: &str) -> Option<(usize, usize)> {
    let s = s.replace("deg", "");
    let (p, q) = s.split_once('x')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}

fn cmd_cup<S: Scalar>(
    ctx: &Ctx<'_, S>,
    common: &Common,
    coeff: &str,
    table: Option<&str>,
    surjectivity: Option<&str>,
    central: Option<&str>,
    weights: RangeInclusive<i64>,
) -> Result<Report, CliError> {
    let coefficients = ctx.coefficients(coeff)?;
    if !coefficients.is_algebra() {
        return Err(ComplexError::AlgebraCoefficientsRequired.into());
    }
    if !ctx.p.is_weighted() {
        return Err(ComplexError::Unweighted.into());
    }
    let a = ctx.algebra()?;
    let t = CurvedDualTable::for_presentation(&ctx.p, common.max_dual_degree);
    let cup = CupContext::new(HochschildComplex::new(&a, &t, &coefficients))?;
    let table = match (table, surjectivity, central) {
        (None, None, None) => Some("1x1"),
        (t, _, _) => t,
    };
    let mut o = vec![
        ("weights", fmt_range(&weights)),
        ("max_dual_degree", common.max_dual_degree.to_string()),
    ];
    if let Some(s) = table {
        o.push(("table", s.to_string()));
    }
    if let Some(s) = surjectivity {
        o.push(("surjectivity", s.to_string()));
    }
    let z = central.map(|z| ctx.central(&a, z)).transpose()?;
    if let Some(z) = &z {
        o.push(("central", z.format(&ctx.p.generator_names())));
    }
    let mut r = ctx.report("cup", opts(&o));
    let mut slices: BTreeSet<(usize, i64)> = BTreeSet::new();

    if let Some(spec) = table {
        let (p, q) = parse_pair(spec)
            .ok_or_else(|| CliError::Usage(format!("bad --table '{spec}', expected PxQ")))?;
        for w in weights.clone() {
            for e in cup.products_into(p, q, w)? {
                slices.insert((p, e.left.1));
                slices.insert((q, e.right.1));
                slices.insert((p + q, w));
                r.products.push(ProductRecord {
                    left: ClassRef {
                        degree: p as i64,
                        weight: e.left.1,
                        index: e.left.2,
                    },
                    right: ClassRef {
                        degree: q as i64,
                        weight: e.right.1,
                        index: e.right.2,
                    },
                    target: ClassSlice {
                        degree: (p + q) as i64,
                        weight: w,
                    },
                    coefficients: e.coefficients.iter().map(ToString::to_string).collect(),
                });
            }
        }
    }
    if let Some(spec) = surjectivity {
        let (pq, target) = spec
            .split_once("to")
            .ok_or_else(|| CliError::Usage(format!("bad --surjectivity '{spec}'")))?;
        let (p, q) = parse_pair(pq)
            .ok_or_else(|| CliError::Usage(format!("bad --surjectivity '{spec}'")))?;
        if target.trim().parse::<usize>().ok() != Some(p + q) {
            return Err(CliError::Usage(format!(
                "--surjectivity {spec}: products of degrees {p} and {q} land in degree {}",
                p + q
            )));
        }
        for w in weights.clone() {
            let s = cup.surjectivity(p, q, w)?;
            slices.insert((p + q, w));
            let name = format!("HH^{p} * HH^{q} -> HH^{} surjective at weight {w}", p + q);
            r.checks.push(if s.surjective() {
                Check::note(name, format!("rank {} = dim {}", s.rank, s.target_dim)).into()
            } else {
                Check::fail(name, format!("rank {} < dim {}", s.rank, s.target_dim)).into()
            });
        }
    }
    if let Some(z) = &z {
        let zs = z.format(&ctx.p.generator_names());
        for w in weights.clone() {
            let c = cup.compare_with_central(1, 1, z, w)?;
            slices.insert((2, w));
            let name = format!("image of HH^1 * HH^1 equals {zs} * HH^2 at weight {w}");
            let witness = format!(
                "product rank {}, {zs}-image rank {}, combined rank {}, dim {}",
                c.product_rank, c.central_rank, c.combined_rank, c.target_dim
            );
            r.checks.push(
                if c.equal() {
                    Check::note(name, witness)
                } else {
                    Check::fail(name, witness)
                }
                .into(),
            );
        }
    }
    for (degree, w) in slices {
        let b = cup.cohomology(degree, w)?;
        r.tables.push(TableEntry {
            table: "HH".into(),
            degree: degree as i64,
            weight: Some(w),
            dim: b.dim(),
            representatives: b
                .representatives()
                .iter()
                .map(|u| cup.complex().format(u))
                .collect(),
            stable: None,
        });
    }
    Ok(r)
}

fn cmd_resolution<S: Scalar>(
    ctx: &Ctx<'_, S>,
    common: &Common,
    weights: RangeInclusive<i64>,
) -> Result<Report, CliError> {
    if !ctx.p.is_weighted() {
        return Err(ComplexError::Unweighted.into());
    }
    let a = ctx.algebra()?;
    let t = CurvedDualTable::for_presentation(&ctx.p, common.max_dual_degree);
    let mut r = ctx.report("resolution", opts(&[("weights", fmt_range(&weights))]));
    for rep in verify_resolution(&a, &t, weights)? {
        push_resolution_tables(&mut r, &rep);
        r.checks.push(rep.check().into());
    }
    Ok(r)
}
