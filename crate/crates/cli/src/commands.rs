use rayon::prelude::*;
use serde_json::{json, Value};

use eurelax_core::descent::{count_exact_bruteforce, count_formula, small_descent_top_sets};
use eurelax_core::exact::{format_rational, parse_rational, to_decimal, to_f64};
use eurelax_core::lform::{eulerian_lform, eulerian_lform_table, lform_from_truncation, Truncation3};
use eurelax_core::pencil::build_pencil;
use eurelax_core::spectra::{boundary_kernel_vector, extreme_roots, psd_interval_left};
use eurelax_core::{
    bounds::{eulerian_diagonal_pencil, separation},
    closed_form_r, psd_certificate, ratio_diagnostic, univariate_eulerian, BoundReport,
    CountMethod, EulerianInstance, PsdCertificate, VectorKind, YPolicy,
};

use crate::svg::{log_line_plot, scatter_plot, Series};
use crate::table::Table;
use crate::{Cli, CliError, Command, Format, KindArg, COUNT_CAP, DIFF_CAP, PENCIL_CAP};

/// Digits after the decimal point wherever a cell is not an exact `p/q`.
const DECIMALS: usize = 30;
/// Digits for ratio diagnostics, which are computed in `f64`.
const RATIO_DECIMALS: usize = 12;

enum PlotKind {
    Scatter,
    LogLine,
}

struct Plot {
    kind: PlotKind,
    title: String,
    xlabel: String,
    ylabel: String,
    series: Vec<Series>,
}

/// Result of one subcommand, renderable in any format it supports.
pub struct Artifact {
    table: Table,
    json: Value,
    plot: Option<Plot>,
}

impl Artifact {
    fn tabular(table: Table) -> Self {
        let json = table.to_json_value();
        Artifact { table, json, plot: None }
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| CliError {
                    kind: "io",
                    message: e.to_string(),
                })?;
                s.push('\n');
                Ok(s.into_bytes())
            }
            Format::Svg => {
                let p = self
                    .plot
                    .as_ref()
                    .ok_or_else(|| CliError::usage("svg output is available for eigvec and diff only"))?;
                let out = match p.kind {
                    PlotKind::Scatter => scatter_plot(&p.title, &p.xlabel, &p.ylabel, &p.series)?,
                    PlotKind::LogLine => log_line_plot(&p.title, &p.xlabel, &p.ylabel, &p.series)?,
                };
                Ok(out.into_bytes())
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Artifact, CliError> {
    let prec = cli.prec;
    let cap = |n: usize, cap: usize| -> Result<(), CliError> {
        if n > cap && !cli.allow_large {
            return Err(CliError::precondition(format!(
                "n = {n} exceeds the default cap {cap}; pass --allow-large to override"
            )));
        }
        Ok(())
    };
    match &cli.command {
        Command::Counts { n } => {
            positive(*n)?;
            cap(*n, COUNT_CAP)?;
            counts(*n)
        }
        Command::Lform { n } => {
            positive(*n)?;
            cap(*n, PENCIL_CAP)?;
            lform(*n)
        }
        Command::Pencil { n } => {
            positive(*n)?;
            cap(*n, PENCIL_CAP)?;
            pencil(*n)
        }
        Command::Bounds { n_min, n_max, kind, y } => {
            ordered(*n_min, *n_max)?;
            cap(*n_max, PENCIL_CAP)?;
            bounds(*n_min, *n_max, *kind, &parse_policy(y)?, prec)
        }
        Command::Roots { n_min, n_max } => {
            ordered(*n_min, *n_max)?;
            cap(*n_max, PENCIL_CAP)?;
            roots(*n_min, *n_max, prec)
        }
        Command::Diff { kind, n_min, n_max } => {
            let kind = match kind {
                KindArg::Old => VectorKind::Old,
                KindArg::New => VectorKind::New,
                KindArg::Both => return Err(CliError::usage("diff takes --kind old or --kind new")),
            };
            // Old runs over n, New over m = n/2
            let (lo, hi) = match kind {
                VectorKind::New => (n_min.unwrap_or(5), n_max.unwrap_or(12)),
                _ => (n_min.unwrap_or(6), n_max.unwrap_or(20)),
            };
            ordered(lo, hi)?;
            let top = if kind == VectorKind::New { 2 * hi } else { hi };
            cap(top, DIFF_CAP)?;
            diff(kind, lo, hi, prec)
        }
        Command::Eigvec { n_min, n_max } => {
            ordered(*n_min, *n_max)?;
            cap(*n_max, PENCIL_CAP)?;
            eigvec(*n_min, *n_max, prec)
        }
    }
}

fn positive(n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::precondition("n must be at least 1"));
    }
    Ok(())
}

fn ordered(lo: usize, hi: usize) -> Result<(), CliError> {
    positive(lo)?;
    if lo > hi {
        return Err(CliError::precondition(format!("empty range {lo}..={hi}")));
    }
    Ok(())
}

fn parse_policy(y: &str) -> Result<YPolicy, CliError> {
    match y {
        "paper" => Ok(YPolicy::Paper),
        "optimal" | "numeric-optimal" => Ok(YPolicy::NumericOptimal),
        other => parse_rational(other)
            .map(YPolicy::Given)
            .map_err(|_| CliError::usage(format!("--y expects paper, optimal or a rational, got {other:?}"))),
    }
}

fn set_label(values: &[usize]) -> String {
    let inner: Vec<String> = values.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(" "))
}

fn counts(n: usize) -> Result<Artifact, CliError> {
    let mut t = Table::new(&["X", "brute", "complement", "deletion", "closed"]);
    let brute_ok = n <= COUNT_CAP;
    for x in small_descent_top_sets(n, 3) {
        let brute = if brute_ok {
            count_exact_bruteforce(n, &x)?.to_string()
        } else {
            String::new()
        };
        let closed = if x.is_empty() {
            String::new()
        } else {
            closed_form_r(&x)?.to_string()
        };
        t.push(vec![
            set_label(&x.to_vec()),
            brute,
            count_formula(n, &x, CountMethod::Complement)?.to_string(),
            count_formula(n, &x, CountMethod::Deletion)?.to_string(),
            closed,
        ]);
    }
    Ok(Artifact::tabular(t))
}

fn lform(n: usize) -> Result<Artifact, CliError> {
    let generic = lform_from_truncation(&Truncation3::eulerian(n));
    let mut t = Table::new(&["monomial", "degree", "generic", "closed", "agree"]);
    for (m, g) in generic.iter() {
        let c = eulerian_lform(n, m)?;
        t.push(vec![
            m.to_string(),
            m.degree().to_string(),
            format_rational(g),
            format_rational(&c),
            (&c == g).to_string(),
        ]);
    }
    Ok(Artifact::tabular(t))
}

fn pencil(n: usize) -> Result<Artifact, CliError> {
    let p = build_pencil(&eulerian_lform_table(n))?;
    let cert = psd_certificate(&p.a0);
    let mut t = Table::new(&["matrix", "row", "col", "value"]);
    let named = std::iter::once(("A0".to_string(), &p.a0))
        .chain(p.ai.iter().enumerate().map(|(i, m)| (format!("A{}", i + 1), m)));
    for (name, m) in named {
        for (r, row) in m.rows_as_strings().into_iter().enumerate() {
            for (c, v) in row.into_iter().enumerate() {
                t.push(vec![name.clone(), r.to_string(), c.to_string(), v]);
            }
        }
    }
    let cert_json = match &cert {
        PsdCertificate::Psd => {
            t.push(vec!["A0_psd".into(), String::new(), String::new(), "true".into()]);
            json!({ "psd": true })
        }
        PsdCertificate::NotPsd { witness, value } => {
            t.push(vec!["A0_psd".into(), String::new(), String::new(), "false".into()]);
            for (i, w) in witness.iter().enumerate() {
                t.push(vec!["witness".into(), i.to_string(), String::new(), format_rational(w)]);
            }
            t.push(vec!["witness_value".into(), String::new(), String::new(), format_rational(value)]);
            json!({
                "psd": false,
                "witness": witness.iter().map(format_rational).collect::<Vec<_>>(),
                "value": format_rational(value),
            })
        }
    };
    let json = json!({ "pencil": p, "certificate": cert_json });
    Ok(Artifact { table: t, json, plot: None })
}

fn kinds_for(kind: KindArg, n: usize) -> Vec<VectorKind> {
    let new_ok = n % 2 == 0 && n >= 4;
    match kind {
        KindArg::Old => vec![VectorKind::Old],
        KindArg::New if new_ok => vec![VectorKind::New],
        KindArg::New => vec![],
        KindArg::Both if new_ok => vec![VectorKind::Old, VectorKind::New],
        KindArg::Both => vec![VectorKind::Old],
    }
}

fn bounds(n_min: usize, n_max: usize, kind: KindArg, policy: &YPolicy, prec: u32) -> Result<Artifact, CliError> {
    let ns: Vec<usize> = (n_min..=n_max).filter(|&n| !kinds_for(kind, n).is_empty()).collect();
    if ns.is_empty() {
        return Err(CliError::precondition(format!(
            "no n in {n_min}..={n_max} admits the requested vector (new needs even n >= 4)"
        )));
    }
    let per_n: Vec<Vec<BoundReport>> = ns
        .par_iter()
        .map(|&n| {
            let inst = EulerianInstance::new(n, prec)?;
            kinds_for(kind, n).into_iter().map(|k| inst.report(k, policy)).collect()
        })
        .collect::<eurelax_core::Result<_>>()?;
    let reports: Vec<BoundReport> = per_n.into_iter().flatten().collect();
    let mut t = Table::new(&BoundReport::CSV_HEADER);
    for r in &reports {
        t.push(r.csv_row());
    }
    let json = serde_json::to_value(&reports).map_err(|e| CliError {
        kind: "io",
        message: e.to_string(),
    })?;
    Ok(Artifact { table: t, json, plot: None })
}

fn roots(n_min: usize, n_max: usize, prec: u32) -> Result<Artifact, CliError> {
    let rows: Vec<Vec<String>> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let (l, r) = extreme_roots(&univariate_eulerian(n), prec)?;
            Ok(vec![
                n.to_string(),
                format_rational(&l.lo),
                format_rational(&l.hi),
                format_rational(&r.lo),
                format_rational(&r.hi),
                to_decimal(&l.mid(), DECIMALS),
                to_decimal(&r.mid(), DECIMALS),
            ])
        })
        .collect::<eurelax_core::Result<_>>()?;
    let mut t = Table::new(&["n", "left_lo", "left_hi", "right_lo", "right_hi", "left_mid", "right_mid"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(Artifact::tabular(t))
}

fn diff(kind: VectorKind, lo: usize, hi: usize, prec: u32) -> Result<Artifact, CliError> {
    let (target, prefactor, index_name) = match kind {
        VectorKind::New => (9.0 / 8.0, 3.0 / 8.0, "m"),
        _ => (0.75, 0.5, "n"),
    };
    let n_of = |k: usize| if kind == VectorKind::New { 2 * k } else { k };
    let seps = (lo..=hi)
        .into_par_iter()
        .map(|k| separation(n_of(k), kind, prec))
        .collect::<eurelax_core::Result<Vec<_>>>()?;
    let seq: Vec<(i64, f64)> = (lo..=hi).zip(&seps).map(|(k, s)| (k as i64, s.mid_f64())).collect();
    let diag = ratio_diagnostic(&seq, target, prefactor)?;
    let dec = |v: f64| format!("{v:.RATIO_DECIMALS$}");
    let mut header = vec![index_name];
    if kind == VectorKind::New {
        header.push("n");
    }
    header.extend(["diff_lo", "diff_hi", "diff", "ratio", "deviation", "normalized"]);
    let mut t = Table::new(&header);
    for ((k, s), norm) in (lo..=hi).zip(&seps).zip(&diag.normalized) {
        let step = diag.steps.iter().find(|st| st.index == k as i64);
        let mut row = vec![k.to_string()];
        if kind == VectorKind::New {
            row.push(n_of(k).to_string());
        }
        row.extend([
            format_rational(&s.lo),
            format_rational(&s.hi),
            to_decimal(&s.mid(), DECIMALS),
            step.map(|st| dec(st.ratio)).unwrap_or_default(),
            step.map(|st| dec(st.deviation)).unwrap_or_default(),
            dec(norm.1),
        ]);
        t.push(row);
    }
    let json = json!({
        "kind": kind.to_string(),
        "rows": t.to_json_value(),
        "diagnostic": diag,
    });
    let plot = Plot {
        kind: PlotKind::LogLine,
        title: format!("{kind} vector: mult - un"),
        xlabel: index_name.to_string(),
        ylabel: "mult - un".to_string(),
        series: vec![Series {
            label: kind.to_string(),
            points: seq.iter().map(|&(k, v)| (k as f64, v)).collect(),
        }],
    };
    Ok(Artifact { table: t, json, plot: Some(plot) })
}

fn eigvec(n_min: usize, n_max: usize, prec: u32) -> Result<Artifact, CliError> {
    let vectors = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let p = eulerian_diagonal_pencil(n);
            let x = psd_interval_left(&p, prec)?;
            boundary_kernel_vector(&p, &x, prec)
        })
        .collect::<eurelax_core::Result<Vec<_>>>()?;
    let mut t = Table::new(&["n", "index", "index/n", "entry"]);
    let mut series = Vec::new();
    for (n, v) in (n_min..=n_max).zip(&vectors) {
        let mut points = Vec::new();
        for (i, e) in v.entries.iter().enumerate() {
            let frac = eurelax_core::exact::ratio(i as i64, n as i64);
            t.push(vec![n.to_string(), i.to_string(), format_rational(&frac), to_decimal(e, DECIMALS)]);
            points.push((to_f64(&frac), to_f64(e)));
        }
        series.push(Series {
            label: format!("n={n}"),
            points,
        });
    }
    let json = json!({ "rows": t.to_json_value(), "vectors": vectors });
    let plot = Plot {
        kind: PlotKind::Scatter,
        title: "Boundary kernel vectors".to_string(),
        xlabel: "index/n".to_string(),
        ylabel: "entry".to_string(),
        series,
    };
    Ok(Artifact { table: t, json, plot: Some(plot) })
}
