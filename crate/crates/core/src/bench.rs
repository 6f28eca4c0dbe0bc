//! Dispatch-cost benchmark: composite midpoint rule on a vector-valued
//! integrand, called four ways.
//!
//! | variant | dispatch | result |
//! |---------|----------|--------|
//! | `a` | static (generic, inlined) | returned by value |
//! | `b` | static (generic, inlined) | written to an output argument |
//! | `c` | [`ErasedFunction`] handle | returned by value |
//! | `d` | `dyn` [`VirtualFunction`] | written to an output argument |
//!
//! All variants sum in ascending `k` and divide by `n` at the end, so their
//! results are bitwise identical.

use std::fmt::{self, Write as _};
use std::hint::black_box;
use std::io;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use crate::concepts::Function;
use crate::erasure::ErasedFunction;

/// Largest supported number of integrand components.
pub const MAX_COMPONENTS: usize = 32;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("no records")]
    NoRecords,

    #[error("unknown variant `{0}`, expected one of a, b, c, d")]
    UnknownVariant(char),

    #[error("number of components must be between 1 and {MAX_COMPONENTS}, got {0}")]
    Components(usize),

    #[error("at least one subinterval is required")]
    NoSubintervals,

    #[error("total work {work} is smaller than the number of components {components}")]
    InsufficientWork { work: usize, components: usize },

    #[error("at least one measured repeat is required")]
    NoRepeats,

    #[error("no variants selected")]
    NoVariants,

    #[error("no component counts selected")]
    NoComponents,

    #[error(transparent)]
    Function(#[from] crate::Error),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    A,
    B,
    C,
    D,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::A, Variant::B, Variant::C, Variant::D];

    pub fn letter(self) -> char {
        match self {
            Variant::A => 'a',
            Variant::B => 'b',
            Variant::C => 'c',
            Variant::D => 'd',
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Variant::A => "static dispatch, return by value",
            Variant::B => "static dispatch, output argument",
            Variant::C => "erased handle, return by value",
            Variant::D => "virtual interface, output argument",
        }
    }

    /// Parses a set such as `"ac"`; duplicates are ignored, order is normalized.
    pub fn parse_set(s: &str) -> Result<Vec<Variant>, BenchError> {
        let mut set = Vec::new();
        for c in s.chars() {
            let v = Variant::try_from(c)?;
            if !set.contains(&v) {
                set.push(v);
            }
        }
        set.sort();
        Ok(set)
    }
}

impl TryFrom<char> for Variant {
    type Error = BenchError;

    fn try_from(c: char) -> Result<Self, BenchError> {
        match c.to_ascii_lowercase() {
            'a' => Ok(Variant::A),
            'b' => Ok(Variant::B),
            'c' => Ok(Variant::C),
            'd' => Ok(Variant::D),
            _ => Err(BenchError::UnknownVariant(c)),
        }
    }
}

impl FromStr for Variant {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Variant::try_from(c),
            (Some(c), Some(_)) => Err(BenchError::UnknownVariant(c)),
            (None, _) => Err(BenchError::NoVariants),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Abstract-interface function with an output argument.
pub trait VirtualFunction<D, R> {
    fn evaluate(&self, x: &D, y: &mut R);
}

/// `f(x)_i = x + i` for `i = 0..N`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StaticIntegrand<const N: usize>;

impl<const N: usize> Function<f64> for StaticIntegrand<N> {
    type Range = [f64; N];

    #[inline(always)]
    fn eval(&self, x: f64) -> [f64; N] {
        std::array::from_fn(|i| x + i as f64)
    }
}

impl<const N: usize> VirtualFunction<f64, [f64; N]> for StaticIntegrand<N> {
    #[inline(always)]
    fn evaluate(&self, x: &f64, y: &mut [f64; N]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = x + i as f64;
        }
    }
}

/// The integrand with a run-time number of components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Integrand {
    components: usize,
}

impl Integrand {
    pub fn new(components: usize) -> Result<Self, BenchError> {
        if components == 0 {
            return Err(BenchError::Components(0));
        }
        Ok(Integrand { components })
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn eval(&self, x: f64) -> Vec<f64> {
        (0..self.components).map(|i| x + i as f64).collect()
    }
}

/// `(1/n) Σ_{k<n} f((k + ½)/n)` with the call returning by value.
#[inline(always)]
pub fn midpoint_integrate<F, const N: usize>(f: &F, n: usize) -> [f64; N]
where
    F: Function<f64, Range = [f64; N]> + ?Sized,
{
    let nf = n as f64;
    let mut sum = [0.0; N];
    for k in 0..n {
        let y = f.eval((k as f64 + 0.5) / nf);
        for i in 0..N {
            sum[i] += y[i];
        }
    }
    for s in &mut sum {
        *s /= nf;
    }
    sum
}

/// [`midpoint_integrate`] with the call writing into an output argument.
#[inline(always)]
pub fn midpoint_integrate_into<F, const N: usize>(f: &F, n: usize) -> [f64; N]
where
    F: VirtualFunction<f64, [f64; N]> + ?Sized,
{
    let nf = n as f64;
    let mut sum = [0.0; N];
    let mut y = [0.0; N];
    for k in 0..n {
        f.evaluate(&((k as f64 + 0.5) / nf), &mut y);
        for i in 0..N {
            sum[i] += y[i];
        }
    }
    for s in &mut sum {
        *s /= nf;
    }
    sum
}

/// Callables for one `(variant, N)` cell, built once before any timing.
struct Cell<const N: usize> {
    integrand: StaticIntegrand<N>,
    erased: ErasedFunction<f64, [f64; N]>,
}

impl<const N: usize> Cell<N> {
    fn new() -> Result<Self, BenchError> {
        Ok(Cell {
            integrand: StaticIntegrand,
            erased: ErasedFunction::new(StaticIntegrand::<N>)?,
        })
    }

    #[inline(never)]
    fn run(&self, variant: Variant, n: usize) -> [f64; N] {
        let n = black_box(n);
        match variant {
            Variant::A => midpoint_integrate(black_box(&self.integrand), n),
            Variant::B => midpoint_integrate_into(black_box(&self.integrand), n),
            Variant::C => midpoint_integrate(black_box(&self.erased), n),
            Variant::D => {
                let dynamic: &dyn VirtualFunction<f64, [f64; N]> = black_box(&self.integrand);
                midpoint_integrate_into(dynamic, n)
            }
        }
    }

    /// Warm-up runs, then timed runs. Returns the last result and the run times in ms.
    fn measure(
        &self,
        variant: Variant,
        n: usize,
        warmup: usize,
        repeats: usize,
    ) -> (Vec<f64>, Vec<f64>) {
        for _ in 0..warmup {
            black_box(self.run(variant, n));
        }
        let mut times = Vec::with_capacity(repeats);
        let mut result = [0.0; N];
        for _ in 0..repeats {
            let start = Instant::now();
            result = black_box(self.run(variant, n));
            times.push(start.elapsed().as_secs_f64() * 1e3);
        }
        (result.to_vec(), times)
    }
}

macro_rules! with_components {
    ($components:expr, $n:ident => $body:expr) => {
        with_components!(@arms $components, $n, $body;
            1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17 18 19 20 21 22 23 24 25 26 27 28 29 30 31 32)
    };
    (@arms $components:expr, $n:ident, $body:expr; $($k:literal)*) => {
        match $components {
            $($k => {
                const $n: usize = $k;
                $body
            })*
            other => Err(BenchError::Components(other)),
        }
    };
}

fn check_components(components: usize) -> Result<(), BenchError> {
    if (1..=MAX_COMPONENTS).contains(&components) {
        Ok(())
    } else {
        Err(BenchError::Components(components))
    }
}

/// Integrates with `n` subintervals using `variant`; returns the result and the elapsed time in ms.
pub fn run_variant(
    variant: Variant,
    components: usize,
    n: usize,
) -> Result<(Vec<f64>, f64), BenchError> {
    check_components(components)?;
    if n == 0 {
        return Err(BenchError::NoSubintervals);
    }
    with_components!(components, N => {
        let cell = Cell::<N>::new()?;
        let (result, times) = cell.measure(variant, n, 0, 1);
        Ok((result, times[0]))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub components: Vec<usize>,
    /// Total work `W`; each run makes `⌊W/N⌋` calls.
    pub total_work: usize,
    pub repeats: usize,
    pub warmup_runs: usize,
    pub variants: Vec<Variant>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            components: (1..=16).collect(),
            total_work: 10_000_000,
            repeats: 4,
            warmup_runs: 1,
            variants: Variant::ALL.to_vec(),
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.components.is_empty() {
            return Err(BenchError::NoComponents);
        }
        if self.variants.is_empty() {
            return Err(BenchError::NoVariants);
        }
        if self.repeats == 0 {
            return Err(BenchError::NoRepeats);
        }
        for &n in &self.components {
            check_components(n)?;
            if self.total_work < n {
                return Err(BenchError::InsufficientWork {
                    work: self.total_work,
                    components: n,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub variant: Variant,
    pub n_components: usize,
    pub n_calls: usize,
    pub min_time_ms: f64,
    pub all_times_ms: Vec<f64>,
    /// Sum of the result components.
    pub checksum: f64,
}

/// Measures every `(variant, N)` cell in turn on the calling thread.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    run_benchmark_with(cfg, |_| {})
}

/// [`run_benchmark`], reporting each record as soon as it is measured.
pub fn run_benchmark_with(
    cfg: &BenchConfig,
    mut progress: impl FnMut(&BenchRecord),
) -> Result<Vec<BenchRecord>, BenchError> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.components.len() * cfg.variants.len());
    for &components in &cfg.components {
        let n_calls = cfg.total_work / components;
        for &variant in &cfg.variants {
            let (result, times) = with_components!(components, N => {
                let cell = Cell::<N>::new()?;
                Ok(cell.measure(variant, n_calls, cfg.warmup_runs, cfg.repeats))
            })?;
            let record = BenchRecord {
                variant,
                n_components: components,
                n_calls,
                min_time_ms: times.iter().copied().fold(f64::INFINITY, f64::min),
                all_times_ms: times,
                checksum: result.iter().sum(),
            };
            progress(&record);
            records.push(record);
        }
    }
    Ok(records)
}

fn sorted(records: &[BenchRecord]) -> Result<Vec<&BenchRecord>, BenchError> {
    if records.is_empty() {
        return Err(BenchError::NoRecords);
    }
    let mut rows: Vec<&BenchRecord> = records.iter().collect();
    rows.sort_by_key(|r| (r.variant, r.n_components));
    Ok(rows)
}

/// CSV with header `variant,N,n_calls,min_time_ms`, rows sorted by variant then `N`.
pub fn emit_csv(records: &[BenchRecord], out: impl io::Write) -> Result<(), BenchError> {
    let rows = sorted(records)?;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["variant", "N", "n_calls", "min_time_ms"])?;
    for r in rows {
        writer.write_record([
            r.variant.to_string(),
            r.n_components.to_string(),
            r.n_calls.to_string(),
            format!("{:.6}", r.min_time_ms),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn csv_string(records: &[BenchRecord]) -> Result<String, BenchError> {
    let mut buf = Vec::new();
    emit_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ASCII"))
}

pub fn write_csv(records: &[BenchRecord], path: impl AsRef<Path>) -> Result<(), BenchError> {
    let rows = csv_string(records)?;
    std::fs::write(path, rows)?;
    Ok(())
}

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// SVG line chart of minimum time against `N`, one polyline per variant.
pub fn chart_svg(records: &[BenchRecord]) -> Result<String, BenchError> {
    let rows = sorted(records)?;
    let (width, height) = (720.0, 440.0);
    let (left, right, top, bottom) = (70.0, 190.0, 30.0, 60.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;

    let n_min = rows.iter().map(|r| r.n_components).min().unwrap_or(1) as f64;
    let n_max = rows.iter().map(|r| r.n_components).max().unwrap_or(1) as f64;
    let t_max = rows.iter().map(|r| r.min_time_ms).fold(0.0, f64::max);
    let t_max = if t_max > 0.0 { t_max * 1.05 } else { 1.0 };
    let sx = |n: f64| {
        if n_max > n_min {
            left + (n - n_min) / (n_max - n_min) * plot_w
        } else {
            left + plot_w / 2.0
        }
    };
    let sy = |t: f64| top + plot_h - t / t_max * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">Minimum run time per variant</text>"#,
        left + plot_w / 2.0
    );
    let _ = writeln!(
        svg,
        r#"<path d="M{left},{top} V{} H{}" fill="none" stroke="black"/>"#,
        top + plot_h,
        left + plot_w
    );
    for i in 0..=4 {
        let t = t_max * f64::from(i) / 4.0;
        let y = sy(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/>"#,
            left - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{t:.2}</text>"#,
            left - 6.0,
            y + 4.0
        );
    }
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n_components).collect();
    ns.sort_unstable();
    ns.dedup();
    for &n in &ns {
        let x = sx(n as f64);
        let y = top + plot_h;
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y}" x2="{x:.2}" y2="{}" stroke="black"/>"#,
            y + 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">{n}</text>"#,
            y + 18.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">number of components N</text>"#,
        left + plot_w / 2.0,
        height - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">minimum time [ms]</text>"#,
        top + plot_h / 2.0
    );

    let mut legend_y = top + 10.0;
    for variant in Variant::ALL {
        let line: Vec<&&BenchRecord> = rows.iter().filter(|r| r.variant == variant).collect();
        if line.is_empty() {
            continue;
        }
        let colour = PALETTE[variant as usize];
        let points: Vec<String> = line
            .iter()
            .map(|r| format!("{:.2},{:.2}", sx(r.n_components as f64), sy(r.min_time_ms)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline data-variant="{variant}" points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
            points.join(" ")
        );
        let lx = left + plot_w + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{legend_y}" x2="{}" y2="{legend_y}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}">({variant}) {}</text>"#,
            lx + 26.0,
            legend_y + 4.0,
            short_label(variant)
        );
        legend_y += 20.0;
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn short_label(variant: Variant) -> &'static str {
    match variant {
        Variant::A => "static, by value",
        Variant::B => "static, out arg",
        Variant::C => "erased, by value",
        Variant::D => "virtual, out arg",
    }
}

pub fn write_chart(records: &[BenchRecord], path: impl AsRef<Path>) -> Result<(), BenchError> {
    let svg = chart_svg(records)?;
    std::fs::write(path, svg)?;
    Ok(())
}

/// Fixed-width text table, times in ms with three decimals.
pub fn format_table(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<7} {:>4} {:>12} {:>12} {:>14}",
        "variant", "N", "n_calls", "min_ms", "checksum"
    );
    for r in records {
        let _ = writeln!(
            out,
            "{:<7} {:>4} {:>12} {:>12.3} {:>14.6}",
            r.variant.to_string(),
            r.n_components,
            r.n_calls,
            r.min_time_ms,
            r.checksum
        );
    }
    out
}
