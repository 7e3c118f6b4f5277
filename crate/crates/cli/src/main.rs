//! `irrcyc`: weight distributions of irreducible cyclic codes from the shell.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use irreducible_cyclic::closed_forms::{order3_roots, order4_roots, period_poly_order3, period_poly_order4, periods_order2};
use irreducible_cyclic::cyclotomy::gaussian_periods_exact;
use irreducible_cyclic::weights::{
    bounds, check_period_values, closed_form, code_params, divisibility, period_values, weight_distribution_with,
    CodeSpec, DispatchOptions, PeriodCheck, Strategy, WeightDistribution, BOUND_TABLE, DEFAULT_ENUMERATION_BUDGET,
};
use irreducible_cyclic::{Error, FieldTower, TowerConfig};

const EXIT_BAD_INPUT: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "irrcyc", version, about = "Weight distributions of irreducible cyclic codes over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the weight distribution of C(r, N).
    Dist(CodeArgs),
    /// Compare the closed form with the enumeration oracle.
    Verify(CodeArgs),
    /// Divisibility and weight bounds, with period checks when available.
    Bounds(CodeArgs),
    /// Gaussian periods of order N over GF(p^(s m)).
    Periods(CodeArgs),
    /// Recompute the table of minimum distances and lower bounds.
    Table1(OutputArgs),
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[arg(long)]
    p: u64,
    /// GF(q) = GF(p^s).
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// GF(r) = GF(q^m).
    #[arg(long)]
    m: u32,
    #[arg(long = "N")]
    big_n: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Largest r for which enumeration is attempted.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum MethodArg {
    Auto,
    Closed,
    Brute,
}

impl From<MethodArg> for Strategy {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Strategy::Auto,
            MethodArg::Closed => Strategy::Closed,
            MethodArg::Brute => Strategy::Brute,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct WeightEntry {
    w: String,
    count: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct BoundsReport {
    lower: String,
    upper: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct PeriodReport {
    integral: bool,
    congruent: bool,
    bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct VerifyReport {
    #[serde(rename = "match")]
    matches: bool,
    oracle_method: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TableReport {
    printed_lower_bound: String,
    printed_min_distance: String,
    printed_residue: String,
    residue: String,
    agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RunReport {
    p: u64,
    s: u32,
    m: u32,
    #[serde(rename = "N")]
    big_n: u64,
    q: String,
    r: String,
    n: String,
    #[serde(rename = "N1")]
    n1: u64,
    m0: u32,
    method: Option<String>,
    weights: Vec<WeightEntry>,
    enumerator: Option<String>,
    divisor: String,
    bounds: BoundsReport,
    thm14: Option<PeriodReport>,
    verify: Option<VerifyReport>,
    periods: Option<Vec<String>>,
    period_polynomial: Option<String>,
    table: Option<TableReport>,
    elapsed_ms: u64,
}

impl RunReport {
    fn new(spec: &CodeSpec) -> Self {
        let (lower, upper) = bounds(spec);
        Self {
            p: spec.p,
            s: spec.s,
            m: spec.m,
            big_n: spec.big_n,
            q: spec.q.to_string(),
            r: spec.r.to_string(),
            n: spec.n.to_string(),
            n1: spec.n1,
            m0: spec.m0,
            method: None,
            weights: Vec::new(),
            enumerator: None,
            divisor: divisibility(spec).to_string(),
            bounds: BoundsReport {
                lower: lower.to_string(),
                upper: upper.to_string(),
            },
            thm14: None,
            verify: None,
            periods: None,
            period_polynomial: None,
            table: None,
            elapsed_ms: 0,
        }
    }

    fn set_distribution(&mut self, d: &WeightDistribution) {
        self.method = Some(d.method().tag().to_string());
        self.weights = d
            .entries()
            .iter()
            .map(|(w, c)| WeightEntry {
                w: w.to_string(),
                count: c.to_string(),
            })
            .collect();
        self.enumerator = Some(d.enumerator());
    }

    fn set_checks(&mut self, check: &PeriodCheck) {
        self.thm14 = Some(PeriodReport {
            integral: check.integral_all(),
            congruent: check.congruent_all(),
            bounded: check.bounded_all(),
        });
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotPrime(_) | Error::NotADivisor { .. } | Error::InvalidParameter(_) => EXIT_BAD_INPUT,
            _ => EXIT_UNSUPPORTED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn options(args: &CodeArgs) -> DispatchOptions {
    DispatchOptions {
        budget: args.budget,
        ..DispatchOptions::default()
    }
}

fn spec_of(args: &CodeArgs) -> Result<CodeSpec, Failure> {
    Ok(code_params(args.p, args.s, args.m, args.big_n)?)
}

fn emit(format: Format, report: &RunReport, text: &str) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(report).expect("report serializes")),
        Format::Text => println!("{text}"),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn checks_text(report: &RunReport) -> String {
    match &report.thm14 {
        Some(c) => format!(
            "periods: integral {}, congruence {}, bound {}",
            yes(c.integral),
            yes(c.congruent),
            yes(c.bounded)
        ),
        None => "periods: not available".to_string(),
    }
}

fn attach_period_checks(report: &mut RunReport, spec: &CodeSpec, opts: &DispatchOptions) -> Result<(), Failure> {
    if let Some(periods) = period_values(spec, opts)? {
        let values: Vec<BigInt> = periods.into_iter().map(|(eta, _)| eta).collect();
        report.set_checks(&check_period_values(spec, &values));
    }
    Ok(())
}

fn weight_checks(spec: &CodeSpec, d: &WeightDistribution) -> (bool, bool) {
    let div = divisibility(spec);
    let (lo, hi) = bounds(spec);
    let divisible = d.weights().all(|w| (w % &div) == BigUint::default());
    let bounded = d.weights().all(|w| w >= &lo && w <= &hi);
    (divisible, bounded)
}

fn cmd_dist(args: &CodeArgs, start: Instant) -> Result<u8, Failure> {
    let spec = spec_of(args)?;
    let d = weight_distribution_with(&spec, args.method.into(), &options(args))?;
    let mut report = RunReport::new(&spec);
    report.set_distribution(&d);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    emit(args.output.format, &report, &d.enumerator());
    Ok(0)
}

fn cmd_verify(args: &CodeArgs, start: Instant) -> Result<u8, Failure> {
    let spec = spec_of(args)?;
    let opts = options(args);
    let oracle = weight_distribution_with(&spec, Strategy::Brute, &opts)?;
    let closed = closed_form(&spec, &opts)?;
    let mut report = RunReport::new(&spec);
    attach_period_checks(&mut report, &spec, &opts)?;
    let (divisible, bounded) = weight_checks(&spec, &oracle);
    let tail = format!(
        "divisibility by {}: {}\nbounds [{}, {}]: {}\n{}",
        report.divisor,
        yes(divisible),
        report.bounds.lower,
        report.bounds.upper,
        yes(bounded),
        checks_text(&report)
    );
    let Some(closed) = closed else {
        report.set_distribution(&oracle);
        report.elapsed_ms = start.elapsed().as_millis() as u64;
        emit(
            args.output.format,
            &report,
            &format!("NO CLOSED FORM\noracle: {}\n{tail}", oracle.enumerator()),
        );
        return Ok(EXIT_UNSUPPORTED);
    };
    let matches = closed.same_multiset(&oracle);
    report.set_distribution(&closed);
    report.verify = Some(VerifyReport {
        matches,
        oracle_method: oracle.method().tag().to_string(),
    });
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    let verdict = if matches { "MATCH" } else { "MISMATCH" };
    let text = format!(
        "{verdict} method {}\nclosed form: {}\noracle: {}\n{tail}",
        closed.method().tag(),
        closed.enumerator(),
        oracle.enumerator()
    );
    emit(args.output.format, &report, &text);
    Ok(if matches { 0 } else { EXIT_MISMATCH })
}

fn cmd_bounds(args: &CodeArgs, start: Instant) -> Result<u8, Failure> {
    let spec = spec_of(args)?;
    let mut report = RunReport::new(&spec);
    attach_period_checks(&mut report, &spec, &options(args))?;
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    let text = format!(
        "n = {}, k = {}, N1 = {}\nevery weight is divisible by {}\nevery nonzero weight lies in [{}, {}]\n{}",
        report.n,
        report.m0,
        report.n1,
        report.divisor,
        report.bounds.lower,
        report.bounds.upper,
        checks_text(&report)
    );
    emit(args.output.format, &report, &text);
    Ok(0)
}

/// Closed-form periods of order `N` over GF(p^(s m)), as a multiset.
fn closed_periods(args: &CodeArgs) -> Result<Option<Vec<BigInt>>, Failure> {
    let (p, s, m) = (args.p, args.s, args.m);
    let roots = match args.big_n {
        1 => Some(vec![BigInt::from(-1)]),
        2 => {
            let (a, b) = periods_order2(p, s, m)?;
            Some(vec![a, b])
        }
        3 => order3_roots(p, s, m)?,
        4 => order4_roots(p, s, m)?,
        _ => {
            let spec = spec_of(args)?;
            if spec.n1 != args.big_n {
                return Ok(None);
            }
            period_values(&spec, &DispatchOptions { budget: 0, ..options(args) })?.map(|classes| {
                classes
                    .into_iter()
                    .flat_map(|(eta, count)| std::iter::repeat(eta).take(count as usize))
                    .collect()
            })
        }
    };
    Ok(roots)
}

fn cmd_periods(args: &CodeArgs, start: Instant) -> Result<u8, Failure> {
    let spec = spec_of(args)?;
    let order = args.big_n;
    let r = spec.r_u64().filter(|&r| r <= args.budget);
    let mut lines = Vec::new();
    let shown: Vec<String>;
    let integers: Option<Vec<BigInt>>;
    let enumerate = match args.method {
        MethodArg::Brute => true,
        MethodArg::Closed => false,
        MethodArg::Auto => r.is_some(),
    };
    if enumerate {
        if r.is_none() {
            return Err(Failure {
                code: EXIT_UNSUPPORTED,
                message: format!("r = {} exceeds the enumeration budget {}", spec.r, args.budget),
            });
        }
        let config = TowerConfig {
            table_budget: args.budget,
        };
        let tower = FieldTower::build_with(args.p, args.s, args.m, &config)?;
        let periods = gaussian_periods_exact(&tower, order)?;
        shown = periods.values().iter().map(|v| v.to_string()).collect();
        for (i, v) in shown.iter().enumerate() {
            lines.push(format!("eta_{i} = {v}"));
        }
        integers = periods
            .integer_values()
            .map(|vs| vs.iter().map(|&v| BigInt::from(v)).collect());
    } else {
        let Some(values) = closed_periods(args)? else {
            return Err(Failure {
                code: EXIT_UNSUPPORTED,
                message: format!("no closed form for order-{order} periods over GF({})", spec.r),
            });
        };
        let mut sorted = values.clone();
        sorted.sort();
        shown = sorted.iter().map(|v| v.to_string()).collect();
        lines.push(format!("periods (unordered): {}", shown.join(", ")));
        integers = Some(values);
    }
    let mut report = RunReport::new(&spec);
    report.periods = Some(shown);
    let poly = match order {
        3 => period_poly_order3(args.p, args.s, args.m).ok(),
        4 => period_poly_order4(args.p, args.s, args.m).ok(),
        _ => None,
    };
    if let Some(poly) = &poly {
        lines.push(format!("period polynomial: {}", poly.display()));
        report.period_polynomial = Some(poly.display());
    }
    if spec.n1 == order {
        if let Some(values) = &integers {
            report.set_checks(&check_period_values(&spec, values));
        } else {
            report.thm14 = Some(PeriodReport {
                integral: false,
                congruent: false,
                bounded: false,
            });
        }
        lines.push(checks_text(&report));
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    emit(args.output.format, &report, &lines.join("\n"));
    Ok(0)
}

fn cmd_table1(out: &OutputArgs, start: Instant) -> Result<u8, Failure> {
    let mut reports = Vec::new();
    let mut lines = vec![format!(
        "{:>5} {:>3} {:>5} {:>3} {:>7} {:>7} {:>7} {:>7}  {}",
        "n", "k", "d", "q", "bound", "printed", "res", "printed", "agree"
    )];
    for row in BOUND_TABLE {
        let spec = code_params(row.p, row.s, row.m, row.big_n)?;
        let d = weight_distribution_with(&spec, Strategy::Auto, &DispatchOptions::default())?;
        let mut report = RunReport::new(&spec);
        report.set_distribution(&d);
        let residue = ((&spec.r - 1u32) / (&spec.q - 1u32)) % row.big_n;
        let agree = report.bounds.lower == row.printed_lower_bound.to_string()
            && residue == BigUint::from(row.printed_residue)
            && d.min_weight() == Some(&BigUint::from(row.min_distance));
        let min = d.min_weight().map(|w| w.to_string()).unwrap_or_default();
        lines.push(format!(
            "{:>5} {:>3} {:>5} {:>3} {:>7} {:>7} {:>7} {:>7}  {}",
            report.n,
            report.m0,
            min,
            report.q,
            report.bounds.lower,
            row.printed_lower_bound,
            residue,
            row.printed_residue,
            if agree { "agree" } else { "DISAGREE" }
        ));
        report.table = Some(TableReport {
            printed_lower_bound: row.printed_lower_bound.to_string(),
            printed_min_distance: row.min_distance.to_string(),
            printed_residue: row.printed_residue.to_string(),
            residue: residue.to_string(),
            agree,
        });
        report.elapsed_ms = start.elapsed().as_millis() as u64;
        reports.push(report);
    }
    match out.format {
        Format::Json => println!("{}", serde_json::to_string(&reports).expect("reports serialize")),
        Format::Text => println!("{}", lines.join("\n")),
    }
    Ok(0)
}

fn init_threads(out: &OutputArgs) {
    if out.threads > 0 {
        // A pool set up earlier in the process is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(out.threads).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::Table1(out) => {
            init_threads(out);
            cmd_table1(out, start)
        }
        Command::Dist(a) | Command::Verify(a) | Command::Bounds(a) | Command::Periods(a) => {
            init_threads(&a.output);
            match &cli.command {
                Command::Dist(_) => cmd_dist(a, start),
                Command::Verify(_) => cmd_verify(a, start),
                Command::Bounds(_) => cmd_bounds(a, start),
                _ => cmd_periods(a, start),
            }
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips() {
        let spec = code_params(3, 1, 4, 2).unwrap();
        let mut report = RunReport::new(&spec);
        report.set_distribution(&weight_distribution_with(&spec, Strategy::Auto, &DispatchOptions::default()).unwrap());
        let json = serde_json::to_string(&report).unwrap();
        let back: RunReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert!(json.contains("\"verify\":null"));
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(Failure::from(code_params(2, 1, 4, 7).unwrap_err()).code, EXIT_BAD_INPUT);
        assert_eq!(Failure::from(Error::Unsupported("x".into())).code, EXIT_UNSUPPORTED);
    }
}
