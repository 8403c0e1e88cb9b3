use serde::Serialize;

use hardy_core::bounds::{bayart_bound, certified_upper_bound, conjecture_bound, e_to_e};
use hardy_core::corpus::{corpus_rng, random_homogeneous};
use hardy_core::extremal::{lower_bound_report, ExtremalReport};
use hardy_core::multiplier::{condition_series, Family, MultiplierSeq, SeriesRow};
use hardy_core::norms::{norm_trig_scaled, ratio_trig_scaled, Method, NormConfig, NormEstimate, RatioReport};
use hardy_core::numtheory::smooth_numbers;
use hardy_core::{Coeff, DirichletPoly, Scaled};

use crate::error::{usage, CliResult};
use crate::input::{choose, read_poly, Poly};
use crate::output::Sink;
use crate::{Command, FamilyArg, Format, RunArgs};

pub fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Norm { file, p, run } => {
            let cfg = run.norm_config();
            let est = match choose(read_poly(&file)?, p) {
                Poly::Int(sp) => norm_of(&sp, p, &cfg)?,
                Poly::Exact(d) => norm_of(&Scaled::unscaled(d), p, &cfg)?,
            };
            let mut sink = open(&run)?;
            sink.emit(&NormJson::new(&est), &NormRow::new(&est))
        }
        Command::Ratio { file, p, q, run } => {
            let cfg = run.norm_config();
            let rep = match choose(read_poly(&file)?, p.max(q)) {
                Poly::Int(sp) => ratio_of(&sp, q, p, &cfg)?,
                Poly::Exact(d) => ratio_of(&Scaled::unscaled(d), q, p, &cfg)?,
            };
            let mut sink = open(&run)?;
            sink.emit(&rep, &RatioRow::new(&rep))
        }
        Command::Extremal { x, x_grid, p, q, run } => {
            let xs = match (x, x_grid) {
                (Some(x), None) => vec![x],
                (None, Some(g)) => parse_grid(&g)?,
                _ => return usage("give exactly one of --x and --x-grid"),
            };
            extremal(&xs, p, q, &run)
        }
        Command::Bounds { x, p, q, y, run } => {
            let rep = certified_upper_bound(x, p, q, y)?;
            let mut sink = open(&run)?;
            sink.emit(&rep, &rep)
        }
        Command::Smooth { x, y, list, run } => smooth(x, y, list, &run),
        Command::Conjecture { m_max, corpus_size, max_vars, p, q, run } => {
            conjecture(m_max, corpus_size, max_vars, p, q, &run)
        }
        Command::Multiplier { family, params, big_n, p, q, eps, stride, run } => {
            multiplier(family, &params, big_n, p, q, eps, stride, &run)
        }
    }
}

fn open(run: &RunArgs) -> CliResult<Sink> {
    Sink::open(run.format, run.out.as_deref())
}

fn norm_of<C: Coeff>(sp: &Scaled<DirichletPoly<C>>, p: f64, cfg: &NormConfig) -> CliResult<NormEstimate> {
    Ok(norm_trig_scaled(&sp.lift()?, p, cfg)?)
}

fn ratio_of<C: Coeff>(sp: &Scaled<DirichletPoly<C>>, q: f64, p: f64, cfg: &NormConfig) -> CliResult<RatioReport> {
    Ok(ratio_trig_scaled(&sp.lift()?, q, p, cfg)?)
}

/// Combined relative error of a quotient of two estimates.
fn quotient_stderr(ratio: f64, num: &NormEstimate, den: &NormEstimate) -> Option<f64> {
    if num.stderr.is_none() && den.stderr.is_none() {
        return None;
    }
    let rel = |e: &NormEstimate| e.stderr.unwrap_or(0.0) / e.value;
    Some(ratio * (rel(num).powi(2) + rel(den).powi(2)).sqrt())
}

#[derive(Serialize)]
struct NormJson<'a> {
    #[serde(flatten)]
    estimate: &'a NormEstimate,
    /// `||D||_p^p` as a fraction, when exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_power: Option<String>,
}

impl<'a> NormJson<'a> {
    fn new(estimate: &'a NormEstimate) -> Self {
        NormJson { estimate, exact_power: estimate.exact_power.as_ref().map(|r| r.to_string()) }
    }
}

#[derive(Serialize)]
struct NormRow {
    value: f64,
    p: f64,
    method: Method,
    stderr: Option<f64>,
    samples: Option<u64>,
    seed: Option<u64>,
}

impl NormRow {
    fn new(e: &NormEstimate) -> Self {
        NormRow { value: e.value, p: e.p, method: e.method, stderr: e.stderr, samples: e.samples, seed: e.seed }
    }
}

#[derive(Serialize)]
struct RatioRow {
    ratio: f64,
    q: f64,
    p: f64,
    method: Method,
    stderr: Option<f64>,
    samples: Option<u64>,
    seed: Option<u64>,
}

impl RatioRow {
    fn new(r: &RatioReport) -> Self {
        let (num, den) = (&r.numerator, &r.denominator);
        RatioRow {
            ratio: r.ratio,
            q: r.q,
            p: r.p,
            method: r.method,
            stderr: quotient_stderr(r.ratio, num, den),
            samples: num.samples.or(den.samples),
            seed: num.seed.or(den.seed),
        }
    }
}

/// `start:stop:factor` as `start * factor^i <= stop`.
fn parse_grid(grid: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = grid.split(':').collect();
    let nums: Vec<f64> = match parts.iter().map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>() {
        Ok(v) if parts.len() == 3 => v,
        _ => return usage(format!("--x-grid expects start:stop:factor, got {grid:?}")),
    };
    let (start, stop, factor) = (nums[0], nums[1], nums[2]);
    if !(start > 0.0 && stop.is_finite() && start <= stop && factor > 1.0) {
        return usage(format!("--x-grid needs 0 < start <= stop and factor > 1, got {grid:?}"));
    }
    let mut xs = Vec::new();
    for i in 0.. {
        let x = start * factor.powi(i);
        // relative slack absorbs rounding in the last step
        if x > stop * (1.0 + 1e-12) {
            break;
        }
        xs.push(x);
    }
    Ok(xs)
}

#[derive(Serialize)]
struct ExtremalJson<'a> {
    #[serde(flatten)]
    report: &'a ExtremalReport,
    flags: String,
}

/// Flat extremal row; numeric fields are empty when the shape is undefined.
#[derive(Serialize)]
struct ExtremalCsv {
    x: f64,
    p: f64,
    q: f64,
    k: Option<u32>,
    n: Option<u32>,
    ratio: Option<f64>,
    ratio_method: Option<Method>,
    stderr: Option<f64>,
    samples: Option<u64>,
    seed: Option<u64>,
    target: Option<f64>,
    asymptote: Option<f64>,
    in_validity_range: bool,
    flags: String,
}

#[derive(Serialize)]
struct UndefinedJson {
    x: f64,
    p: f64,
    q: f64,
    in_validity_range: bool,
    flags: String,
}

const UNDEFINED_FLAGS: &str = "outside-validity-range;undefined-iterated-log";

fn extremal(xs: &[f64], p: f64, q: f64, run: &RunArgs) -> CliResult<()> {
    if let Some(bad) = xs.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return usage(format!("x must be positive and finite, got {bad}"));
    }
    let cfg = run.norm_config();
    let mut sink = open(run)?;
    for &x in xs {
        if x <= e_to_e::<f64>() {
            eprintln!("warning: x = {x}: {UNDEFINED_FLAGS}");
            let row = ExtremalCsv {
                x,
                p,
                q,
                k: None,
                n: None,
                ratio: None,
                ratio_method: None,
                stderr: None,
                samples: None,
                seed: None,
                target: None,
                asymptote: None,
                in_validity_range: false,
                flags: UNDEFINED_FLAGS.into(),
            };
            let json = UndefinedJson { x, p, q, in_validity_range: false, flags: UNDEFINED_FLAGS.into() };
            sink.emit(&json, &row)?;
            continue;
        }
        let rep = lower_bound_report(x, p, q, &cfg)?;
        let flags = rep.params.flags().join(";");
        if !flags.is_empty() {
            eprintln!("warning: x = {x}: {flags}");
        }
        let r = rep.row();
        let row = ExtremalCsv {
            x,
            p,
            q,
            k: Some(r.k),
            n: Some(r.n),
            ratio: Some(r.ratio),
            ratio_method: Some(r.ratio_method),
            stderr: r.stderr,
            samples: rep.samples,
            seed: rep.seed,
            target: Some(r.target),
            asymptote: r.asymptote,
            in_validity_range: rep.params.in_validity_range,
            flags: flags.clone(),
        };
        sink.emit(&ExtremalJson { report: &rep, flags }, &row)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SmoothJson {
    x: f64,
    y: f64,
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    numbers: Option<Vec<u64>>,
}

#[derive(Serialize)]
struct SmoothCount {
    x: f64,
    y: f64,
    count: u64,
}

#[derive(Serialize)]
struct SmoothMember {
    n: u64,
}

fn smooth(x: f64, y: f64, list: bool, run: &RunArgs) -> CliResult<()> {
    if !(x >= 1.0 && x.is_finite() && y >= 1.0 && y.is_finite()) {
        return usage(format!("smooth needs finite x >= 1 and y >= 1, got x = {x}, y = {y}"));
    }
    let numbers = smooth_numbers(x, y);
    let count = numbers.len() as u64;
    let mut sink = open(run)?;
    match (sink.format(), list) {
        (Format::Json, _) => sink.json(&SmoothJson { x, y, count, numbers: list.then_some(numbers) }),
        (Format::Csv, false) => sink.csv(&SmoothCount { x, y, count }),
        (Format::Csv, true) => numbers.iter().try_for_each(|&n| sink.csv(&SmoothMember { n })),
    }
}

/// Terms per corpus polynomial, at most.
const CORPUS_MAX_TERMS: usize = 12;

#[derive(Serialize)]
struct ConjectureRow {
    m: u32,
    count: usize,
    max_ratio: f64,
    conjecture_bound: f64,
    bayart_bound: f64,
    violations: usize,
    pass: bool,
    seed: u64,
}

fn conjecture(m_max: u32, corpus_size: usize, max_vars: u32, p: f64, q: f64, run: &RunArgs) -> CliResult<()> {
    if m_max == 0 || corpus_size == 0 || max_vars == 0 {
        return usage("--m-max, --corpus-size and --max-vars must be positive");
    }
    let cfg = run.norm_config();
    let mut rng = corpus_rng(run.seed);
    let mut sink = open(run)?;
    for m in 1..=m_max {
        let bound = conjecture_bound(m, p, q)?;
        let bayart = bayart_bound(m, p, q)?;
        let (mut max_ratio, mut violations) = (0.0f64, 0);
        for i in 0..corpus_size {
            let nvars = 1 + (i as u32 % max_vars);
            let poly = random_homogeneous(&mut rng, m, nvars, CORPUS_MAX_TERMS)?;
            let rep = ratio_trig_scaled(&poly, q, p, &cfg)?;
            max_ratio = max_ratio.max(rep.ratio);
            // Monte Carlo ratios get four standard errors of room
            let slack = match quotient_stderr(rep.ratio, &rep.numerator, &rep.denominator) {
                Some(se) => 4.0 * se,
                None => 1e-12 * bound,
            };
            if rep.ratio - slack > bound {
                violations += 1;
            }
        }
        let row = ConjectureRow {
            m,
            count: corpus_size,
            max_ratio,
            conjecture_bound: bound,
            bayart_bound: bayart,
            violations,
            pass: violations == 0,
            seed: run.seed,
        };
        sink.emit(&row, &row)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SeriesJson<'a> {
    #[serde(flatten)]
    family: &'a Family,
    decreasing: bool,
    p: f64,
    q: f64,
    eps: f64,
    #[serde(rename = "N")]
    big_n: u64,
    total: f64,
    tail_ratio: Option<f64>,
    flag: hardy_core::multiplier::SeriesFlag,
    rows: Vec<SeriesRow>,
}

fn parse_params(family: FamilyArg, params: &str) -> CliResult<Family> {
    let values: Vec<f64> = match params.split(',').map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>() {
        Ok(v) => v,
        Err(_) => return usage(format!("--params expects comma-separated numbers, got {params:?}")),
    };
    let single = |name: &str| -> CliResult<f64> {
        match values[..] {
            [v] => Ok(v),
            _ => usage(format!("--params for this family is a single value {name}")),
        }
    };
    Ok(match family {
        FamilyArg::Power => Family::Power { sigma: single("sigma")? },
        FamilyArg::LogDecay => Family::LogDecay { c: single("c")? },
        FamilyArg::Table => Family::Table { values },
    })
}

#[allow(clippy::too_many_arguments)]
fn multiplier(
    family: FamilyArg,
    params: &str,
    big_n: u64,
    p: f64,
    q: f64,
    eps: f64,
    stride: u64,
    run: &RunArgs,
) -> CliResult<()> {
    if stride == 0 {
        return usage("--stride must be positive");
    }
    let lam = MultiplierSeq::new(parse_params(family, params)?)?;
    let series = condition_series(&lam, p, q, eps, big_n)?;
    // every stride-th row, always ending on N
    let last = series.rows.len() - 1;
    let rows: Vec<SeriesRow> =
        series.rows.iter().enumerate().filter(|(i, _)| *i as u64 % stride == 0 || *i == last).map(|(_, r)| *r).collect();
    let mut sink = open(run)?;
    match sink.format() {
        Format::Json => sink.json(&SeriesJson {
            family: lam.family(),
            decreasing: lam.is_decreasing(),
            p,
            q,
            eps,
            big_n,
            total: series.total,
            tail_ratio: series.tail_ratio,
            flag: series.flag,
            rows,
        }),
        Format::Csv => rows.iter().try_for_each(|r| sink.csv(r)),
    }
}
