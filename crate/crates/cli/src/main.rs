use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};
use num_complex::Complex;

use fnspace::analytic::{chebyshev, sin_squared, sin_squared_closure, Polynomial, SinSquared};
use fnspace::bench::{self, BenchConfig, BenchRecord, Variant, MAX_COMPONENTS};
use fnspace::concepts::{
    check_differentiable_function, check_function, check_grid_view_function, check_local_function,
    ConceptReport, Function, GridViewFunction, LocalFunction, Signature,
};
use fnspace::describe;
use fnspace::erasure::{ErasedFunction, ScalarFunction};
use fnspace::grid::{geometry_jacobian, make_uniform_grid};
use fnspace::gridfn::{lift_with_derivative, p1_interpolate, ErasedGridViewFunction};

#[derive(Debug, Parser)]
#[command(
    name = "fnspace",
    version,
    about = "Function interface benchmark, demo and concept checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Time the midpoint rule under static, erased and virtual dispatch
    Bench(BenchArgs),
    /// Walk through polynomials, erased handles and local functions
    Demo,
    /// Print concept reports for the built-in fixtures
    Check,
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    /// Numbers of integrand components, e.g. `1-16`, `1,2,4,8` or `1-4,16`
    #[arg(long, default_value = "1-16", value_parser = parse_components)]
    components: Components,

    /// Total work W; each run makes floor(W/N) calls
    #[arg(long, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    work: u64,

    /// Measured runs per cell; the minimum is reported
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    repeats: u64,

    /// Unmeasured runs before the measured ones
    #[arg(long, default_value_t = 1)]
    warmup: u64,

    /// Subset of `abcd`
    #[arg(long, default_value = "abcd", value_parser = parse_variants)]
    variants: Variants,

    /// Write minimum times as CSV
    #[arg(long)]
    csv: Option<PathBuf>,

    /// Write an SVG chart of minimum times
    #[arg(long)]
    chart: Option<PathBuf>,
}

#[derive(Debug, Clone)]
struct Components(Vec<usize>);

#[derive(Debug, Clone)]
struct Variants(Vec<Variant>);

fn parse_count(s: &str) -> Result<usize, String> {
    let n: usize = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a component count"))?;
    if !(1..=MAX_COMPONENTS).contains(&n) {
        return Err(format!(
            "component counts must be between 1 and {MAX_COMPONENTS}, got {n}"
        ));
    }
    Ok(n)
}

fn parse_components(s: &str) -> Result<Components, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (parse_count(lo)?, parse_count(hi)?);
                if lo > hi {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(parse_count(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(Components(out))
}

fn parse_variants(s: &str) -> Result<Variants, String> {
    let set = Variant::parse_set(s).map_err(|e| e.to_string())?;
    if set.is_empty() {
        return Err("no variants selected".to_owned());
    }
    Ok(Variants(set))
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| exit_with(e));
    match cli.command {
        Command::Bench(args) => cmd_bench(args),
        Command::Demo => cmd_demo(),
        Command::Check => cmd_check(),
    }
}

fn usage_error(message: impl std::fmt::Display) -> ! {
    exit_with(Cli::command().error(ErrorKind::ValueValidation, message))
}

/// Help and version go to stdout; every other parse error also shows the usage line.
fn exit_with(error: clap::Error) -> ! {
    if error.use_stderr() && !error.to_string().contains("Usage:") {
        let _ = error.print();
        eprintln!("\n{}", Cli::command().render_usage());
        std::process::exit(2);
    }
    error.exit()
}

fn cmd_bench(args: BenchArgs) -> ExitCode {
    let cfg = BenchConfig {
        components: args.components.0,
        total_work: usize::try_from(args.work)
            .unwrap_or_else(|_| usage_error("--work is too large")),
        repeats: usize::try_from(args.repeats)
            .unwrap_or_else(|_| usage_error("--repeats is too large")),
        warmup_runs: usize::try_from(args.warmup)
            .unwrap_or_else(|_| usage_error("--warmup is too large")),
        variants: args.variants.0,
    };
    if let Err(e) = cfg.validate() {
        usage_error(e);
    }

    println!(
        "W = {}, repeats = {}, warm-up runs = {}",
        cfg.total_work, cfg.repeats, cfg.warmup_runs
    );
    for v in &cfg.variants {
        println!("  ({v}) {}", v.description());
    }
    println!();

    let records = match bench::run_benchmark(&cfg) {
        Ok(records) => records,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    print!("{}", bench::format_table(&records));

    let mismatched = checksum_mismatches(&records);
    if !mismatched.is_empty() {
        eprintln!("error: variants disagree for N = {mismatched:?}");
        return ExitCode::FAILURE;
    }

    if let Some(path) = &args.csv {
        if let Err(e) = bench::write_csv(&records, path) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
        println!("wrote {}", path.display());
    }
    if let Some(path) = &args.chart {
        if let Err(e) = bench::write_chart(&records, path) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
        println!("wrote {}", path.display());
    }
    ExitCode::SUCCESS
}

fn checksum_mismatches(records: &[BenchRecord]) -> Vec<usize> {
    let mut bad = Vec::new();
    for r in records {
        let first = records
            .iter()
            .find(|o| o.n_components == r.n_components)
            .expect("r itself");
        if r.checksum.to_bits() != first.checksum.to_bits() && !bad.contains(&r.n_components) {
            bad.push(r.n_components);
        }
    }
    bad
}

struct Steps {
    failures: usize,
}

impl Steps {
    fn check(&mut self, ok: bool, line: impl std::fmt::Display) {
        println!("[{}] {line}", if ok { "pass" } else { "FAIL" });
        if !ok {
            self.failures += 1;
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + b.abs())
}

fn cmd_demo() -> ExitCode {
    match demo() {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn demo() -> fnspace::Result<usize> {
    let mut steps = Steps { failures: 0 };
    let x = 0.5 * PI;

    println!("Polynomial {{1, 2, 3}}");
    let f = Polynomial::new(vec![1.0, 2.0, 3.0]);
    let df = f.derivative();
    let expected = 1.0 + PI + 0.75 * PI * PI;
    steps.check(
        close(f.eval(x), expected),
        format_args!(
            "f(0.5π) = {:.4}, expected 1 + π + 3π²/4 = {expected:.4}",
            f.eval(x)
        ),
    );
    let expected = 2.0 + 3.0 * PI;
    steps.check(
        close(df.eval(x), expected),
        format_args!(
            "f'(0.5π) = {:.4}, expected 2 + 3π = {expected:.4}",
            df.eval(x)
        ),
    );
    let ddf = df.derivative();
    steps.check(
        ddf.coefficients() == [6.0],
        format_args!("f'' = {:?}", ddf.coefficients()),
    );

    println!("\nErased differentiable function");
    let erased = ScalarFunction::new(f.clone())?;
    let erased_df = erased.derivative()?;
    steps.check(
        erased.eval(x).to_bits() == f.eval(x).to_bits()
            && erased_df.eval(x).to_bits() == df.eval(x).to_bits(),
        format_args!(
            "handle matches the polynomial bitwise (inline storage: {})",
            erased.is_inline()
        ),
    );

    println!("\nOne handle, three kinds of callable");
    let mut h = ErasedFunction::<f64, f64>::new(sin_squared)?;
    let free = h.eval(x);
    h.assign(sin_squared_closure())?;
    let closure = h.eval(x);
    h.assign(SinSquared)?;
    let object = h.eval(x);
    steps.check(
        [free, closure, object].iter().all(|&v| close(v, 1.0)),
        format_args!(
            "sin²(0.5π): free function {free}, closure {closure}, function object {object}"
        ),
    );
    h.assign(|t: f64| t.floor() as i64)?;
    steps.check(
        h.eval(2.7) == 2.0,
        format_args!(
            "integer-valued callable widens: floor(2.7) -> {}",
            h.eval(2.7)
        ),
    );
    match ErasedFunction::<f64, f64>::new(|t: f64| Complex::new(t, 0.0)) {
        Err(e) => steps.check(true, format_args!("complex-valued callable rejected: {e}")),
        Ok(_) => steps.check(false, "complex-valued callable was accepted"),
    }

    println!("\nGrid function x², M = 2");
    let gv = make_uniform_grid(2)?;
    let g = lift_with_derivative(|t: f64| t * t, |t: f64| 2.0 * t, gv);
    let mut local = g.local_function();
    local.bind(&gv.element(0)?)?;
    let v0 = local.evaluate(0.5)?;
    steps.check(
        v0 == 0.0625,
        format_args!("bound to element 0: f_e(0.5) = {v0}"),
    );
    local.bind(&gv.element(1)?)?;
    let v1 = local.evaluate(0.5)?;
    steps.check(
        v1 == 0.5625,
        format_args!("rebound to element 1: f_e(0.5) = {v1}"),
    );

    let e0 = gv.element(0)?;
    local.bind(&e0)?;
    let via_local = local.derivative()?.evaluate(0.5)?;
    let mut via_global = g.derivative()?.local_function();
    via_global.bind(&e0)?;
    let via_global = via_global.evaluate(0.5)?;
    let scaled = via_local * geometry_jacobian(&e0);
    steps.check(
        via_local == 0.5 && via_local.to_bits() == via_global.to_bits(),
        format_args!("(Df)_e(0.5) = {via_local} in global coordinates on both paths, not {scaled}"),
    );

    let erased_g = ErasedGridViewFunction::<f64>::new(g.clone())?;
    let mut erased_local = erased_g.local_function();
    erased_local.bind(&gv.element(1)?)?;
    steps.check(
        erased_local.evaluate(0.5)?.to_bits() == v1.to_bits(),
        format_args!(
            "erased local function agrees: {}",
            erased_local.evaluate(0.5)?
        ),
    );

    println!("\nP1 function {{0, 1, 0}}, M = 2");
    let p1 = p1_interpolate(gv, vec![0.0, 1.0, 0.0])?;
    let mut p1_local = p1.derivative()?.local_function();
    p1_local.bind(&gv.element(1)?)?;
    let slope = p1_local.evaluate(0.5)?;
    steps.check(slope == -2.0, format_args!("slope on element 1 = {slope}"));

    println!();
    if steps.failures == 0 {
        println!("all checks passed");
    } else {
        println!("{} check(s) failed", steps.failures);
    }
    Ok(steps.failures)
}

struct Expectation {
    label: &'static str,
    report: ConceptReport,
    models: bool,
}

fn cmd_check() -> ExitCode {
    let scalar = Signature::scalar();
    let gv = match make_uniform_grid(4) {
        Ok(gv) => gv,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let closure = sin_squared_closure();
    let no_derivative = |t: f64| t.sin() * t.sin();
    let p = Polynomial::new(vec![1.0, 2.0, 3.0]);
    let lifted = lift_with_derivative(|t: f64| t * t, |t: f64| 2.0 * t, gv);
    let local = lifted.local_function();

    let cases = [
        Expectation {
            label: "sin_squared",
            report: check_function(&describe!(sin_squared), scalar),
            models: true,
        },
        Expectation {
            label: "sin_squared closure",
            report: check_function(&describe!(closure), scalar),
            models: true,
        },
        Expectation {
            label: "SinSquared object",
            report: check_function(&describe!(SinSquared), scalar),
            models: true,
        },
        Expectation {
            label: "integer 1",
            report: check_function(&describe!(1), scalar),
            models: false,
        },
        Expectation {
            label: "Polynomial {1, 2, 3}",
            report: check_differentiable_function(&describe!(p), scalar),
            models: true,
        },
        Expectation {
            label: "Polynomial {}",
            report: check_differentiable_function(&describe!(Polynomial::<f64>::zero()), scalar),
            models: true,
        },
        Expectation {
            label: "Chebyshev T2",
            report: check_differentiable_function(&describe!(chebyshev(2)), scalar),
            models: true,
        },
        Expectation {
            label: "closure without derivative",
            report: check_differentiable_function(&describe!(no_derivative), scalar),
            models: false,
        },
        Expectation {
            label: "lift of x²",
            report: check_grid_view_function(&describe!(lifted)),
            models: true,
        },
        Expectation {
            label: "its local function",
            report: check_local_function(&describe!(local)),
            models: true,
        },
        Expectation {
            label: "Polynomial {1}",
            report: check_grid_view_function(&describe!(Polynomial::new(vec![1.0]))),
            models: false,
        },
    ];

    let mut mismatches = 0;
    for case in &cases {
        let verdict = if case.report.models() {
            "models: yes".to_owned()
        } else {
            format!("models: no — {}", case.report.diagnostic())
        };
        let ok = case.report.models() == case.models;
        if !ok {
            mismatches += 1;
        }
        println!(
            "[{}] {} vs {}: {verdict}",
            if ok { "pass" } else { "FAIL" },
            case.label,
            case.report.concept_name()
        );
    }
    if mismatches == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("{mismatches} report(s) did not match expectations");
        ExitCode::FAILURE
    }
}
