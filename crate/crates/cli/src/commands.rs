use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use milnor_core::critical::{morse_report_with, ReportOptions, SolverMode};
use milnor_core::germ::{enumerate_catalog, GermDescriptor};
use milnor_core::morsify::build_family;
use milnor_core::poly::rational::{fmt_rational, parse_rational};
use milnor_core::poly::Rational;
use milnor_core::predict::{
    predict_table, render_csv, render_json, render_rows_markdown, render_theorem_markdown, table_rows, TableKind,
    TableRow,
};
use milnor_core::verify::{
    compare_with, default_eta, default_resolution, homology, mesh_fibre_unchecked, render_svg, BettiReport,
    FibreSpec, Outcome, Side, VerificationVerdict, VerifyOptions,
};
use milnor_core::SCHEMA_VERSION;

use crate::output::{core, csv_rows, json, unsupported, CliError, Format, Output};
use crate::{Bounds, Cli, Command, MeshArgs, OneSide, SideArg, TableArg};

fn germ(code: &str) -> Result<GermDescriptor, CliError> {
    code.parse::<GermDescriptor>().map_err(core)
}

fn fraction(s: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("--{what}: {e}")))
}

fn positive(s: &str, what: &str) -> Result<Rational, CliError> {
    let r = fraction(s, what)?;
    if r <= Rational::from_integer(0.into()) {
        return Err(CliError::Usage(format!("--{what} must be positive")));
    }
    Ok(r)
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let f = cli.format;
    match &cli.command {
        Command::Germ { code } => cmd_germ(code, f.unwrap_or(Format::Text)),
        Command::Morsify { code } => cmd_morsify(code, f.unwrap_or(Format::Text)),
        Command::Predict { code, all, bounds } => match (code, all) {
            (Some(c), false) => cmd_predict(c, f.unwrap_or(Format::Text)),
            (None, true) => cmd_predict_all(*bounds, f.unwrap_or(Format::Csv)),
            _ => Err(CliError::Usage("give a germ code or --all".into())),
        },
        Command::Critical { code, t, radius, full } => {
            cmd_critical(code, t.as_deref(), radius.as_deref(), *full, f.unwrap_or(Format::Text))
        }
        Command::Verify {
            code,
            side,
            all,
            bounds,
            mesh,
        } => {
            let sides: Vec<Side> = match side {
                SideArg::Plus => vec![Side::Plus],
                SideArg::Minus => vec![Side::Minus],
                SideArg::Both => Side::BOTH.to_vec(),
            };
            let opts = verify_options(mesh)?;
            let codes = match (code, all) {
                (Some(c), false) => vec![germ(c)?],
                (None, true) => {
                    let ds: Vec<_> = enumerate_catalog(bounds.kmax, bounds.nmax.min(2));
                    if bounds.nmax > 2 {
                        log::warn!("meshing stops at n = 2; larger n skipped");
                    }
                    ds
                }
                _ => return Err(CliError::Usage("give a germ code or --all".into())),
            };
            cmd_verify(&codes, &sides, &opts, code.is_some(), f.unwrap_or(Format::Text))
        }
        Command::Table { kind, bounds } => cmd_table(*kind, *bounds, f),
        Command::PlotSvg { code, side, mesh } => cmd_plot_svg(code, *side, mesh, cli.output.clone(), f.unwrap_or(Format::Text)),
    }
}

#[derive(Serialize)]
struct GermRow {
    schema_version: u32,
    germ_code: String,
    n: u32,
    s: u32,
    degree: u32,
    polynomial: String,
}

fn cmd_germ(code: &str, f: Format) -> Result<Output, CliError> {
    let d = germ(code)?;
    let p = d.build_germ().map_err(core)?;
    let row = GermRow {
        schema_version: SCHEMA_VERSION,
        germ_code: d.code(),
        n: d.n,
        s: d.s,
        degree: d.degree(),
        polynomial: p.to_string(),
    };
    let body = match f {
        Format::Text => row.polynomial,
        Format::Json => json(&row)?,
        Format::Csv => csv_rows(&[row])?,
        Format::Md => format!(
            "| germ | n | s | polynomial |\n|---|---|---|---|\n| {} | {} | {} | `{}` |\n",
            row.germ_code, row.n, row.s, row.polynomial
        ),
    };
    Ok(Output::ok(body))
}

fn cmd_morsify(code: &str, f: Format) -> Result<Output, CliError> {
    let fam = build_family(&germ(code)?).map_err(core)?;
    let j = fam.to_json();
    let body = match f {
        Format::Text => format!(
            "germ: {}\nfamily: {}\nt in {}\ncase: {}\nrepresentative t: {}",
            j.germ_polynomial, j.polynomial, j.interval.display, j.case_description, j.representative_t
        ),
        Format::Json => json(&j)?,
        other => return Err(unsupported("morsify", other)),
    };
    Ok(Output::ok(body))
}

fn render_rows(rows: &[TableRow], f: Format) -> Result<String, CliError> {
    Ok(match f {
        Format::Text => rows
            .iter()
            .map(|r| match r.status {
                milnor_core::predict::Status::Resolved => format!("{}: {}, {}", r.germ_code, r.beta_plus, r.beta_minus),
                milnor_core::predict::Status::Unresolved => format!("{}: unresolved", r.germ_code),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => json(&render_json(rows))?,
        Format::Csv => render_csv(rows)?,
        Format::Md => render_rows_markdown(rows),
    })
}

fn cmd_predict(code: &str, f: Format) -> Result<Output, CliError> {
    let d = germ(code)?;
    let p = predict_table(&d);
    let body = match f {
        Format::Text => p.summary(),
        Format::Json => json(&TableRow::new(&d, &p))?,
        other => render_rows(&[TableRow::new(&d, &p)], other)?,
    };
    Ok(Output::ok(body))
}

fn cmd_predict_all(b: Bounds, f: Format) -> Result<Output, CliError> {
    Ok(Output::ok(render_rows(&table_rows(TableKind::All, b.kmax, b.nmax), f)?))
}

fn cmd_table(kind: TableArg, b: Bounds, f: Option<Format>) -> Result<Output, CliError> {
    let (k, default) = match kind {
        TableArg::Theorem => (TableKind::Theorem, Format::Md),
        TableArg::Corollary => (TableKind::Corollary, Format::Csv),
        TableArg::All => (TableKind::All, Format::Csv),
    };
    let f = f.unwrap_or(default);
    let body = if kind == TableArg::Theorem && f == Format::Md {
        render_theorem_markdown(b.kmax)
    } else {
        render_rows(&table_rows(k, b.kmax, b.nmax), f)?
    };
    Ok(Output::ok(body))
}

#[derive(Serialize)]
struct PointRow {
    schema_version: u32,
    germ_code: String,
    t0: String,
    point: usize,
    morse_index: usize,
    n_pos: usize,
    n_neg: usize,
    n_zero: usize,
    location: String,
    exact: String,
    certified: bool,
}

fn cmd_critical(code: &str, t: Option<&str>, radius: Option<&str>, full: bool, f: Format) -> Result<Output, CliError> {
    let d = germ(code)?;
    let t0 = t.map(|s| fraction(s, "t")).transpose()?;
    let mut opts = ReportOptions {
        mode: if full { SolverMode::Full } else { SolverMode::Planar },
        ..ReportOptions::default()
    };
    if let Some(r) = radius {
        opts.radius = positive(r, "box")?;
    }
    let r = morse_report_with(&d, t0, &opts).map_err(core)?;
    let rows: Vec<PointRow> = r
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| PointRow {
            schema_version: SCHEMA_VERSION,
            germ_code: d.code(),
            t0: fmt_rational(&r.t0),
            point: i + 1,
            morse_index: p.morse_index,
            n_pos: p.signature.n_pos,
            n_neg: p.signature.n_neg,
            n_zero: p.signature.n_zero,
            location: format!("{:?}", p.approx()),
            exact: p
                .exact
                .as_ref()
                .map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
                .unwrap_or_default(),
            certified: p.certified,
        })
        .collect();
    let body = match f {
        Format::Text => {
            let mut s = format!(
                "{} at t0 = {}: {} critical point(s), {}, oracle {}",
                d.code(),
                fmt_rational(&r.t0),
                r.count(),
                if r.certified() { "certified" } else { "NOT certified" },
                if r.closed_form_matches_oracle { "agrees" } else { "disagrees" }
            );
            for p in &rows {
                s.push_str(&format!(
                    "\n  #{} index {} signature (+{}, -{}, 0:{}) at {} = ({})",
                    p.point, p.morse_index, p.n_pos, p.n_neg, p.n_zero, p.location, p.exact
                ));
            }
            for w in &r.warnings {
                s.push_str(&format!("\n  warning: {w}"));
            }
            s
        }
        Format::Json => json(&r.to_json())?,
        Format::Csv => csv_rows(&rows)?,
        Format::Md => {
            let mut s = String::from("| point | index | signature | location | exact |\n|---|---|---|---|---|\n");
            for p in &rows {
                s.push_str(&format!(
                    "| {} | {} | (+{}, -{}, 0:{}) | {} | {} |\n",
                    p.point, p.morse_index, p.n_pos, p.n_neg, p.n_zero, p.location, p.exact
                ));
            }
            s
        }
    };
    Ok(Output {
        body,
        failed: !r.certified(),
        to_output: true,
    })
}

fn verify_options(m: &MeshArgs) -> Result<VerifyOptions, CliError> {
    let mut o = VerifyOptions {
        sweep: !m.no_sweep,
        resolution: m.resolution,
        ..VerifyOptions::default()
    };
    if let Some(e) = &m.epsilon {
        o.epsilon = positive(e, "epsilon")?;
    }
    o.eta = m.eta.as_deref().map(|e| positive(e, "eta")).transpose()?;
    Ok(o)
}

#[derive(Serialize)]
struct VerifyRow {
    schema_version: u32,
    germ_code: String,
    n: u32,
    s: u32,
    side: String,
    predicted: String,
    observed: String,
    betti: String,
    euler: i64,
    stable: bool,
    outcome: String,
}

fn side_rows(v: &VerificationVerdict) -> Vec<VerifyRow> {
    let pick = |side: Side| -> Option<(&BettiReport, String)> {
        let (report, predicted) = match side {
            Side::Plus => (v.plus.as_ref(), &v.predicted.beta_plus),
            Side::Minus => (v.minus.as_ref(), &v.predicted.beta_minus),
        };
        let predicted = predicted.as_ref().map_or("unresolved".to_string(), ToString::to_string);
        report.map(|r| (r, predicted))
    };
    Side::BOTH
        .into_iter()
        .filter_map(|side| {
            let (r, predicted) = pick(side)?;
            Some(VerifyRow {
                schema_version: SCHEMA_VERSION,
                germ_code: v.germ_code.clone(),
                n: v.n,
                s: v.s,
                side: side.to_string(),
                predicted,
                observed: r.poincare().to_string(),
                betti: r.betti.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                euler: r.euler,
                stable: r.stable,
                outcome: v.outcome.to_string(),
            })
        })
        .collect()
}

fn cmd_verify(
    codes: &[GermDescriptor],
    sides: &[Side],
    opts: &VerifyOptions,
    single: bool,
    f: Format,
) -> Result<Output, CliError> {
    let results: Vec<_> = codes.par_iter().map(|d| compare_with(d, sides, opts)).collect();
    let mut verdicts = Vec::with_capacity(results.len());
    for (d, r) in codes.iter().zip(results) {
        verdicts.push(r.map_err(|e| CliError::Usage(format!("{d}: {e}")))?);
    }
    let failed = verdicts.iter().any(|v| v.outcome == Outcome::Mismatch);
    let rows: Vec<VerifyRow> = verdicts.iter().flat_map(side_rows).collect();
    let body = match f {
        Format::Text => rows
            .iter()
            .map(|r| {
                format!(
                    "{} {}: {} (observed {}, predicted {}, betti [{}], stable {})",
                    r.germ_code, r.side, r.outcome, r.observed, r.predicted, r.betti, r.stable
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json if single => json(&verdicts[0])?,
        Format::Json => json(&serde_json::json!({ "schema_version": SCHEMA_VERSION, "verdicts": verdicts }))?,
        Format::Csv => csv_rows(&rows)?,
        Format::Md => {
            let mut s = String::from(
                "| germ | side | predicted | observed | betti | stable | outcome |\n|---|---|---|---|---|---|---|\n",
            );
            for r in &rows {
                s.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} |\n",
                    r.germ_code, r.side, r.predicted, r.observed, r.betti, r.stable, r.outcome
                ));
            }
            s
        }
    };
    Ok(Output {
        body,
        failed,
        to_output: true,
    })
}

#[derive(Serialize)]
struct PlotSummary {
    schema_version: u32,
    germ_code: String,
    side: Side,
    path: String,
    epsilon: String,
    eta: String,
    resolution: usize,
    betti: Vec<u64>,
}

fn cmd_plot_svg(code: &str, side: OneSide, m: &MeshArgs, out: Option<PathBuf>, f: Format) -> Result<Output, CliError> {
    let d = germ(code)?;
    if d.dim() != 2 {
        return Err(CliError::Usage(format!("{d}: only plane curves (n = 1) can be plotted")));
    }
    let side = match side {
        OneSide::Plus => Side::Plus,
        OneSide::Minus => Side::Minus,
    };
    let opts = verify_options(m)?;
    let spec = FibreSpec {
        polynomial: d.build_germ().map_err(core)?,
        side,
        eta: opts.eta.clone().unwrap_or_else(|| default_eta(&opts.epsilon, d.degree())),
        epsilon: opts.epsilon.clone(),
        resolution: opts.resolution.unwrap_or_else(|| default_resolution(2)),
    };
    let mesh = mesh_fibre_unchecked(&spec).map_err(core)?;
    let eps = milnor_core::poly::rational::to_f64(&spec.epsilon);
    let title = format!("{} {} fibre", d.code(), side);
    let svg = render_svg(&mesh, eps, &title).expect("planar mesh");
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{}-{}.svg", d.code(), side)));
    std::fs::write(&path, svg)?;
    let summary = PlotSummary {
        schema_version: SCHEMA_VERSION,
        germ_code: d.code(),
        side,
        path: path.display().to_string(),
        epsilon: fmt_rational(&spec.epsilon),
        eta: fmt_rational(&spec.eta),
        resolution: spec.resolution,
        betti: homology(&mesh.complex).betti,
    };
    let body = match f {
        Format::Text => format!("wrote {} (betti {:?})", summary.path, summary.betti),
        Format::Json => json(&summary)?,
        Format::Csv => return Err(unsupported("plot-svg", Format::Csv)),
        Format::Md => format!("![{title}]({})\n", summary.path),
    };
    Ok(Output {
        body,
        failed: false,
        to_output: false,
    })
}
