//! Subcommand implementations. Each returns its rendered output and status.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use qfi_gme::criteria::{closed_form_f, corollary2_with_signs, ghz_w_signs, lemma_bounds};
use qfi_gme::states::{ghz_w_mix, EnsembleConfig, EnsembleKind};
use qfi_gme::{CriterionReport, DimensionSpec, Verdict};

use crate::args::{BoundArgs, EnsembleKindArg, Format};
use crate::criterion::{CriterionOptions, CriterionSpec};
use crate::error::{usage, Result};
use crate::family::Family;
use crate::scan::{margin_at, scan, ScanConfig, ScanResult};
use crate::state::{parse_dims, StateSpec};

/// Grid rows whose closed form and engine differ by more than this are
/// flagged.
pub const GRID_AGREEMENT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Positive,
    Negative,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Positive => 0,
            Status::Negative => 1,
        }
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Status::Positive
        } else {
            Status::Negative
        }
    }
}

pub struct Output {
    pub body: String,
    pub status: Status,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
}

impl Output {
    fn new(body: String, status: Status) -> Self {
        Self {
            body,
            status,
            notes: Vec::new(),
        }
    }
}

fn csv_string<F>(header: &[&str], fill: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    fill(&mut w)?;
    let bytes = w
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

impl BoundArgs {
    pub fn options(&self) -> CriterionOptions {
        let triple = |v: &Option<Vec<f64>>| v.as_ref().map(|v| [v[0], v[1], v[2]]);
        CriterionOptions {
            f1: self.f1,
            f2: self.f2,
            locals: triple(&self.locals),
            pairs: triple(&self.pairs),
        }
    }
}

#[derive(Serialize)]
pub struct EvalReport<'a> {
    #[serde(flatten)]
    pub report: &'a CriterionReport,
    pub dims: DimensionSpec,
    #[serde(rename = "state-spec")]
    pub state_spec: String,
}

pub fn eval(state: &str, criterion: &str, bounds: &BoundArgs, format: Format) -> Result<Output> {
    let spec = StateSpec::parse(state)?;
    let criterion = CriterionSpec::parse(criterion)?;
    let rho = spec.build()?;
    let report = criterion.evaluate(&rho, &bounds.options())?;
    let body = match format {
        Format::Json => json_string(&EvalReport {
            report: &report,
            dims: rho.dims(),
            state_spec: spec.to_string(),
        })?,
        Format::Csv => csv_string(
            &[
                "state",
                "dims",
                "criterion",
                "statistic",
                "threshold",
                "margin",
                "verdict",
            ],
            |w| {
                w.write_record([
                    spec.to_string(),
                    rho.dims().to_string(),
                    report.criterion.to_string(),
                    report.statistic.to_string(),
                    report.threshold.to_string(),
                    report.margin.to_string(),
                    report.verdict.to_string(),
                ])?;
                Ok(())
            },
        )?,
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "state      {spec} ({})", rho.dims()).unwrap();
            writeln!(s, "criterion  {criterion} ({})", report.criterion).unwrap();
            writeln!(s, "statistic  {:.6}", report.statistic).unwrap();
            writeln!(s, "threshold  {:.6}", report.threshold).unwrap();
            writeln!(s, "margin     {:+.6}", report.margin).unwrap();
            writeln!(s, "verdict    {}", report.verdict).unwrap();
            if !report.details.is_empty() {
                writeln!(s, "details").unwrap();
                for (k, v) in &report.details {
                    writeln!(s, "  {k:<16} {v:.6}").unwrap();
                }
            }
            s
        }
    };
    Ok(Output::new(
        body,
        Status::from_bool(report.verdict.is_detected()),
    ))
}

pub struct ScanArgs<'a> {
    pub family: &'a str,
    pub criterion: &'a str,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub samples: usize,
    pub tol: f64,
    pub bounds: &'a BoundArgs,
}

pub fn run_scan(args: &ScanArgs<'_>) -> Result<(ScanResult, Family, CriterionSpec)> {
    let family = Family::parse(args.family)?;
    let criterion = CriterionSpec::parse(args.criterion)?;
    let config = ScanConfig {
        lo: args.lo.unwrap_or(0.0),
        hi: args.hi.unwrap_or_else(|| family.upper()),
        tol: args.tol,
        samples: args.samples,
    };
    let result = scan(&family, &criterion, &args.bounds.options(), &config)?;
    Ok((result, family, criterion))
}

pub fn scan_command(args: &ScanArgs<'_>, format: Format) -> Result<Output> {
    let (result, family, criterion) = run_scan(args)?;
    let body = match format {
        Format::Json => json_string(&result)?,
        Format::Csv => csv_string(&["kind", "param", "margin"], |w| {
            for (t, m) in &result.margins {
                w.write_record(["sample", &t.to_string(), &m.to_string()])?;
            }
            for (t, m) in &result.bisection {
                w.write_record(["bisect", &t.to_string(), &m.to_string()])?;
            }
            if let Some(t) = result.threshold {
                let m = margin_at(&family, &criterion, &args.bounds.options(), t)?;
                w.write_record(["threshold", &t.to_string(), &m.to_string()])?;
            }
            Ok(())
        })?,
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "family     {}", result.family).unwrap();
            writeln!(s, "criterion  {}", result.criterion).unwrap();
            match result.threshold {
                Some(t) => writeln!(
                    s,
                    "threshold  {} = {t:.6}  (bracket [{:.8}, {:.8}], {} bisection steps)",
                    result.parameter, result.lo, result.hi, result.iterations
                ),
                None => writeln!(
                    s,
                    "threshold  no crossing for {} in [{}, {}]",
                    result.parameter, result.lo, result.hi
                ),
            }
            .unwrap();
            writeln!(s, "samples").unwrap();
            for (t, m) in &result.margins {
                writeln!(s, "  {t:.4}  {m:+.6}").unwrap();
            }
            s
        }
    };
    Ok(Output::new(body, Status::from_bool(result.crossed())))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    pub f: f64,
    pub engine_margin: f64,
    pub abs_diff: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridResult {
    pub points: Vec<GridPoint>,
    pub skipped: usize,
    pub max_abs_diff: f64,
}

pub struct GridArgs {
    pub resolution: usize,
    pub x: (f64, f64),
    pub y: (f64, f64),
}

fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![range.0];
    }
    let step = (range.1 - range.0) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                range.1
            } else {
                range.0 + step * i as f64
            }
        })
        .collect()
}

pub fn grid(args: &GridArgs) -> Result<GridResult> {
    if args.resolution == 0 {
        return Err(usage("grid resolution must be at least 1"));
    }
    for (lo, hi) in [args.x, args.y] {
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(usage(format!("grid range [{lo}, {hi}] must lie in [0, 1]")));
        }
    }
    let (xs, ys) = (axis(args.x, args.resolution), axis(args.y, args.resolution));
    let candidates: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .collect();
    let inside: Vec<(f64, f64)> = candidates
        .iter()
        .copied()
        .filter(|(x, y)| x + y <= 1.0 + 1e-12)
        .collect();
    let skipped = candidates.len() - inside.len();
    let signs = ghz_w_signs();
    let points: Vec<GridPoint> = inside
        .into_par_iter()
        .map(|(x, y)| {
            let f = closed_form_f(x, y)?;
            let engine_margin = corollary2_with_signs(&ghz_w_mix(x, y)?, signs)?.margin;
            Ok(GridPoint {
                x,
                y,
                f,
                engine_margin,
                abs_diff: (f - engine_margin).abs(),
            })
        })
        .collect::<Result<_>>()?;
    let max_abs_diff = points.iter().map(|p| p.abs_diff).fold(0.0, f64::max);
    Ok(GridResult {
        points,
        skipped,
        max_abs_diff,
    })
}

pub fn grid_command(args: &GridArgs, format: Format) -> Result<Output> {
    let result = grid(args)?;
    let body = match format {
        Format::Json => json_string(&result)?,
        Format::Csv => csv_string(&["x", "y", "f", "engine_margin", "abs_diff"], |w| {
            for p in &result.points {
                w.serialize((p.x, p.y, p.f, p.engine_margin, p.abs_diff))?;
            }
            Ok(())
        })?,
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "{:>10} {:>10} {:>12} {:>14} {:>10}",
                "x", "y", "f", "engine_margin", "abs_diff"
            )
            .unwrap();
            for p in &result.points {
                writeln!(
                    s,
                    "{:>10.6} {:>10.6} {:>12.6} {:>14.6} {:>10.2e}",
                    p.x, p.y, p.f, p.engine_margin, p.abs_diff
                )
                .unwrap();
            }
            writeln!(
                s,
                "points {}  skipped {}  max |diff| {:.3e}",
                result.points.len(),
                result.skipped,
                result.max_abs_diff
            )
            .unwrap();
            s
        }
    };
    let agree = result.max_abs_diff <= GRID_AGREEMENT_TOL;
    let mut out = Output::new(body, Status::from_bool(agree));
    if result.skipped > 0 {
        out.notes.push(format!(
            "skipped {} points outside the simplex x + y <= 1",
            result.skipped
        ));
    }
    if !agree {
        out.notes.push(format!(
            "closed form and engine disagree: max |diff| = {:e} > {GRID_AGREEMENT_TOL:e}",
            result.max_abs_diff
        ));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundsRow {
    pub d: usize,
    pub f1: f64,
    pub f2: f64,
    pub threshold: f64,
    pub additive_exact: bool,
}

pub fn bounds(ds: &[usize], format: Format) -> Result<Output> {
    let rows: Vec<BoundsRow> = ds
        .iter()
        .map(|&d| {
            let b = lemma_bounds(d)?;
            Ok(BoundsRow {
                d,
                f1: b.f1,
                f2: b.f2,
                threshold: b.threshold(),
                additive_exact: b.additive_exact(),
            })
        })
        .collect::<Result<_>>()?;
    let body = match format {
        Format::Json => json_string(&rows)?,
        Format::Csv => csv_string(&["d", "f1", "f2", "threshold", "additive_exact"], |w| {
            for r in &rows {
                w.serialize((r.d, r.f1, r.f2, r.threshold, r.additive_exact))?;
            }
            Ok(())
        })?,
        Format::Text => {
            let mut s = format!(
                "{:>4} {:>12} {:>12} {:>12}  f1+f2=threshold\n",
                "d", "F1", "F2", "threshold"
            );
            for r in &rows {
                writeln!(
                    s,
                    "{:>4} {:>12.4} {:>12.4} {:>12.4}  {}",
                    r.d, r.f1, r.f2, r.threshold, r.additive_exact
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Output::new(body, Status::Positive))
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareRow {
    pub family: String,
    pub criterion: String,
    pub threshold: Option<f64>,
    pub note: String,
}

pub const LITERATURE_NOTE: &str = "literature value (quoted, not recomputed)";

pub fn compare(family: &str, samples: usize, tol: f64) -> Result<Vec<CompareRow>> {
    let family = Family::parse(family)?;
    let mut criteria = Vec::new();
    if family.dims() == DimensionSpec::qubits() {
        criteria.push(CriterionSpec::parse("corollary2")?);
    }
    criteria.extend([
        CriterionSpec::Corollary1,
        CriterionSpec::Concurrence,
        CriterionSpec::Knorm(None),
    ]);
    let opts = CriterionOptions::default();
    let config = ScanConfig {
        samples,
        ..ScanConfig::full(&family, tol)
    };
    let mut rows = Vec::new();
    for criterion in &criteria {
        let result = scan(&family, criterion, &opts, &config)?;
        let note = match (result.threshold, criterion) {
            (None, _) => "no crossing".to_string(),
            (Some(_), CriterionSpec::Knorm(None)) => {
                // best k on the detected side of the bracket
                let r = criterion.evaluate(&family.state(result.hi)?, &opts)?;
                format!("best k = {}", r.details["k"])
            }
            (Some(_), _) => String::new(),
        };
        rows.push(CompareRow {
            family: family.to_string(),
            criterion: criterion.to_string(),
            threshold: result.threshold,
            note,
        });
    }
    for (label, value) in family.literature() {
        rows.push(CompareRow {
            family: family.to_string(),
            criterion: label.to_string(),
            threshold: Some(value),
            note: LITERATURE_NOTE.to_string(),
        });
    }
    Ok(rows)
}

pub fn compare_command(family: &str, samples: usize, tol: f64, format: Format) -> Result<Output> {
    let rows = compare(family, samples, tol)?;
    let any = rows
        .iter()
        .any(|r| r.threshold.is_some() && r.note != LITERATURE_NOTE);
    let fmt_t = |t: Option<f64>| t.map(|t| t.to_string()).unwrap_or_default();
    let body = match format {
        Format::Json => json_string(&rows)?,
        Format::Csv => csv_string(&["family", "criterion", "threshold", "note"], |w| {
            for r in &rows {
                w.write_record([&r.family, &r.criterion, &fmt_t(r.threshold), &r.note])?;
            }
            Ok(())
        })?,
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "{:<24} {:<12}  note", "criterion", "threshold").unwrap();
            for r in &rows {
                let t = r
                    .threshold
                    .map(|t| format!("{t:.6}"))
                    .unwrap_or_else(|| "-".into());
                writeln!(s, "{:<24} {:<12}  {}", r.criterion, t, r.note).unwrap();
            }
            s
        }
    };
    Ok(Output::new(body, Status::from_bool(any)))
}

#[derive(Clone, Debug, Serialize)]
pub struct EnsembleRow {
    pub index: usize,
    pub seed: u64,
    pub statistic: f64,
    pub threshold: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnsembleSummary {
    pub criterion: String,
    pub dims: DimensionSpec,
    pub count: usize,
    pub detected: usize,
    pub max_margin: f64,
    pub members: Vec<EnsembleRow>,
}

pub struct EnsembleArgs<'a> {
    pub kind: EnsembleKindArg,
    pub dims: &'a str,
    pub count: usize,
    pub criterion: &'a str,
    pub rank: Option<usize>,
    pub terms: usize,
    pub seed: u64,
    pub bounds: &'a BoundArgs,
}

pub fn ensemble(args: &EnsembleArgs<'_>) -> Result<EnsembleSummary> {
    let dims = parse_dims(args.dims)?;
    let criterion = CriterionSpec::parse(args.criterion)?;
    let kind = match args.kind {
        EnsembleKindArg::Pure => EnsembleKind::Pure,
        EnsembleKindArg::Mixed => EnsembleKind::Mixed { rank: args.rank },
        EnsembleKindArg::Biseparable => EnsembleKind::Biseparable { terms: args.terms },
    };
    if args.count == 0 {
        return Err(usage("ensemble count must be at least 1"));
    }
    let config = EnsembleConfig {
        count: args.count,
        seed: args.seed,
        kind,
        dims,
    };
    let opts = args.bounds.options();
    let members: Vec<EnsembleRow> = (0..args.count)
        .into_par_iter()
        .map(|i| {
            let r = criterion.evaluate(&config.member(i)?, &opts)?;
            Ok(EnsembleRow {
                index: i,
                seed: config.member_seed(i),
                statistic: r.statistic,
                threshold: r.threshold,
                margin: r.margin,
                verdict: r.verdict,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EnsembleSummary {
        criterion: criterion.to_string(),
        dims,
        count: args.count,
        detected: members.iter().filter(|m| m.verdict.is_detected()).count(),
        max_margin: members
            .iter()
            .map(|m| m.margin)
            .fold(f64::NEG_INFINITY, f64::max),
        members,
    })
}

pub fn ensemble_command(args: &EnsembleArgs<'_>, format: Format) -> Result<Output> {
    let summary = ensemble(args)?;
    let body = match format {
        Format::Json => json_string(&summary)?,
        Format::Csv => csv_string(
            &[
                "index",
                "seed",
                "statistic",
                "threshold",
                "margin",
                "verdict",
            ],
            |w| {
                for m in &summary.members {
                    w.write_record([
                        m.index.to_string(),
                        m.seed.to_string(),
                        m.statistic.to_string(),
                        m.threshold.to_string(),
                        m.margin.to_string(),
                        m.verdict.to_string(),
                    ])?;
                }
                Ok(())
            },
        )?,
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "criterion   {} on {} ({} members)",
                summary.criterion, summary.dims, summary.count
            )
            .unwrap();
            writeln!(s, "detected    {}", summary.detected).unwrap();
            writeln!(s, "inconclusive {}", summary.count - summary.detected).unwrap();
            writeln!(s, "max margin  {:+.6}", summary.max_margin).unwrap();
            s
        }
    };
    Ok(Output::new(body, Status::from_bool(summary.detected > 0)))
}
