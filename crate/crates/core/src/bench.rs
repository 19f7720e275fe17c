//! Float-vs-Flint timing harness.
//!
//! Each grid cell (tree count, max depth, seed) gets a synthesized forest
//! and dataset. Every strategy runs `warmup_rounds` untimed full-dataset
//! passes, then `repetitions` timed ones. The median pass time is the
//! cell's summary and `ratio = summary(strategy) / summary(float)`.
//!
//! Ratios are aggregated per configured max depth, over all cells, and
//! over cells with max depth >= 20, each by geometric mean with the
//! population variance of the ratios alongside.

use std::fmt::Write as _;
use std::hint::black_box;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flint::FloatWidth;
use crate::inference::{prepare, ComparisonStrategy, PreparedForest};
use crate::model::Dataset;
use crate::synth::{synth_forest, synth_rows, SynthParams};

pub const REPORT_VERSION: u32 = 1;

/// Cells timed below this many timer ticks are flagged.
pub const COARSE_TICKS: f64 = 100.0;

/// Depth threshold of the pooled deep-forest row.
pub const DEEP_DEPTH: usize = 20;

pub const VARIANCE_ESTIMATOR: &str = "population";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid bench config: {0}")]
    Config(String),
    #[error("no float baseline timing for trees={n_trees} depth={max_depth} seed={seed}")]
    MissingBaseline {
        n_trees: usize,
        max_depth: usize,
        seed: u64,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchGrid {
    pub tree_counts: Vec<usize>,
    pub max_depths: Vec<usize>,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub repetitions: usize,
    pub warmup_rounds: usize,
    /// Strategies timed besides the float baseline, which always runs.
    pub strategies: Vec<ComparisonStrategy>,
    pub grid: BenchGrid,
    pub width: FloatWidth,
    pub n_features: usize,
    pub n_classes: usize,
    /// Synthesized rows per cell; ignored when `dataset` is set.
    pub rows: usize,
    pub dataset: Option<Dataset>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            repetitions: 5,
            warmup_rounds: 1,
            strategies: vec![ComparisonStrategy::Flint],
            grid: BenchGrid {
                tree_counts: vec![1, 5, 10],
                max_depths: vec![1, 5, 10, 20],
                seeds: vec![0],
            },
            width: FloatWidth::Single,
            n_features: 16,
            n_classes: 3,
            rows: 2000,
            dataset: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.repetitions < 3 {
            return bad("repetitions must be >= 3");
        }
        if self.warmup_rounds < 1 {
            return bad("warmup rounds must be >= 1");
        }
        let g = &self.grid;
        if g.tree_counts.is_empty() || g.max_depths.is_empty() || g.seeds.is_empty() {
            return bad("grid must be non-empty");
        }
        if g.tree_counts.contains(&0) || g.max_depths.contains(&0) {
            return bad("tree counts and depths must be >= 1");
        }
        if self.n_classes == 0 {
            return bad("need at least one class");
        }
        match &self.dataset {
            Some(ds) if ds.is_empty() => bad("dataset has no rows"),
            Some(_) => Ok(()),
            None if self.rows == 0 || self.n_features == 0 => bad("rows and features must be >= 1"),
            None => Ok(()),
        }
    }
}

/// Identifies one timed pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassKey {
    pub n_trees: usize,
    pub max_depth: usize,
    pub seed: u64,
    pub strategy: ComparisonStrategy,
    pub repetition: usize,
}

pub trait PassTimer {
    /// Duration of one pass in nanoseconds. The pass returns a checksum.
    fn time(&mut self, key: &PassKey, pass: &mut dyn FnMut() -> usize) -> f64;
    /// Smallest observable duration in nanoseconds.
    fn tick_ns(&self) -> f64;
}

pub struct MonotonicTimer {
    tick_ns: f64,
}

impl MonotonicTimer {
    pub fn new() -> Self {
        let mut tick = f64::INFINITY;
        for _ in 0..1000 {
            let a = Instant::now();
            let mut b = Instant::now();
            while b == a {
                b = Instant::now();
            }
            tick = tick.min((b - a).as_nanos() as f64);
        }
        MonotonicTimer { tick_ns: tick }
    }
}

impl Default for MonotonicTimer {
    fn default() -> Self {
        Self::new()
    }
}

impl PassTimer for MonotonicTimer {
    fn time(&mut self, _key: &PassKey, pass: &mut dyn FnMut() -> usize) -> f64 {
        let t0 = Instant::now();
        black_box(pass());
        t0.elapsed().as_nanos() as f64
    }

    fn tick_ns(&self) -> f64 {
        self.tick_ns
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HostInfo {
    pub os: String,
    pub arch: String,
    pub cpu: String,
    pub logical_cpus: usize,
    pub timer_tick_ns: f64,
    /// Times came from an injected fixture, not a clock.
    pub injected: bool,
    pub tool_version: String,
}

impl HostInfo {
    pub fn detect(timer_tick_ns: f64, injected: bool) -> Self {
        let cpu = std::fs::read_to_string("/proc/cpuinfo")
            .ok()
            .and_then(|s| {
                s.lines()
                    .find(|l| l.starts_with("model name"))
                    .and_then(|l| l.split_once(':'))
                    .map(|(_, v)| v.trim().to_string())
            })
            .unwrap_or_else(|| "unknown".to_string());
        HostInfo {
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            cpu,
            logical_cpus: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            timer_tick_ns,
            injected,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Raw timings of one strategy on one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawCell {
    pub n_trees: usize,
    pub max_depth: usize,
    pub seed: u64,
    pub strategy: ComparisonStrategy,
    pub times_ns: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub n_trees: usize,
    pub max_depth: usize,
    pub seed: u64,
    pub strategy: ComparisonStrategy,
    pub times_ns: Vec<f64>,
    pub summary_ns: f64,
    pub ratio: f64,
    pub coarse_timer: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub strategy: ComparisonStrategy,
    /// `None` for pooled rows.
    pub max_depth: Option<usize>,
    pub ratios: Vec<f64>,
    pub geomean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub version: u32,
    pub host: HostInfo,
    pub width: FloatWidth,
    pub rows: usize,
    pub repetitions: usize,
    pub warmup_rounds: usize,
    pub baseline: ComparisonStrategy,
    pub variance_estimator: String,
    pub cells: Vec<CellResult>,
    pub depth_groups: Vec<GroupSummary>,
    pub overall: Vec<GroupSummary>,
    /// Cells with max depth >= 20, pooled.
    pub deep: Vec<GroupSummary>,
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn geomean(xs: &[f64]) -> f64 {
    (xs.iter().map(|x| x.ln()).sum::<f64>() / xs.len() as f64).exp()
}

pub fn population_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n
}

fn summary(strategy: ComparisonStrategy, max_depth: Option<usize>, ratios: Vec<f64>) -> GroupSummary {
    GroupSummary {
        strategy,
        max_depth,
        geomean: geomean(&ratios),
        variance: population_variance(&ratios),
        ratios,
    }
}

pub struct ReportMeta {
    pub host: HostInfo,
    pub width: FloatWidth,
    pub rows: usize,
    pub repetitions: usize,
    pub warmup_rounds: usize,
}

/// Turns raw timings into a report. The float baseline must be present
/// for every (trees, depth, seed) that appears.
pub fn summarize(raw: Vec<RawCell>, meta: ReportMeta) -> Result<BenchReport, BenchError> {
    let base = ComparisonStrategy::HostFloat;
    let tick = meta.host.timer_tick_ns;
    let mut cells = Vec::with_capacity(raw.len());
    for r in &raw {
        if r.times_ns.is_empty() || r.times_ns.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(BenchError::Config(format!(
                "times for trees={} depth={} seed={} must be positive",
                r.n_trees, r.max_depth, r.seed
            )));
        }
        let b = raw
            .iter()
            .find(|b| b.strategy == base && (b.n_trees, b.max_depth, b.seed) == (r.n_trees, r.max_depth, r.seed))
            .ok_or(BenchError::MissingBaseline {
                n_trees: r.n_trees,
                max_depth: r.max_depth,
                seed: r.seed,
            })?;
        let s = median(&r.times_ns);
        let ratio = if r.strategy == base {
            1.0
        } else {
            s / median(&b.times_ns)
        };
        cells.push(CellResult {
            n_trees: r.n_trees,
            max_depth: r.max_depth,
            seed: r.seed,
            strategy: r.strategy,
            times_ns: r.times_ns.clone(),
            summary_ns: s,
            ratio,
            coarse_timer: !meta.host.injected && s < COARSE_TICKS * tick,
        });
    }

    let mut strategies: Vec<ComparisonStrategy> = Vec::new();
    let mut depths: Vec<usize> = Vec::new();
    for c in &cells {
        if !strategies.contains(&c.strategy) {
            strategies.push(c.strategy);
        }
        if !depths.contains(&c.max_depth) {
            depths.push(c.max_depth);
        }
    }
    strategies.sort_by_key(|s| *s != base);
    depths.sort_unstable();

    let ratios = |pred: &dyn Fn(&CellResult) -> bool| -> Vec<f64> {
        cells.iter().filter(|c| pred(c)).map(|c| c.ratio).collect()
    };
    let mut depth_groups = Vec::new();
    let mut overall = Vec::new();
    let mut deep = Vec::new();
    for &s in &strategies {
        for &d in &depths {
            let r = ratios(&|c| c.strategy == s && c.max_depth == d);
            if !r.is_empty() {
                depth_groups.push(summary(s, Some(d), r));
            }
        }
        overall.push(summary(s, None, ratios(&|c| c.strategy == s)));
        let r = ratios(&|c| c.strategy == s && c.max_depth >= DEEP_DEPTH);
        if !r.is_empty() {
            deep.push(summary(s, None, r));
        }
    }

    Ok(BenchReport {
        version: REPORT_VERSION,
        host: meta.host,
        width: meta.width,
        rows: meta.rows,
        repetitions: meta.repetitions,
        warmup_rounds: meta.warmup_rounds,
        baseline: base,
        variance_estimator: VARIANCE_ESTIMATOR.to_string(),
        cells,
        depth_groups,
        overall,
        deep,
    })
}

enum Matrix {
    Single(Vec<f32>),
    Double(Vec<f64>),
}

fn one_pass(pf: &PreparedForest, m: &Matrix) -> usize {
    match (pf, m) {
        (PreparedForest::Single(e), Matrix::Single(m)) => e.run_pass(black_box(m)),
        (PreparedForest::Double(e), Matrix::Double(m)) => e.run_pass(black_box(m)),
        _ => unreachable!("matrix width follows the forest"),
    }
}

/// Runs the whole grid with `timer`. Timed sections are single-threaded.
pub fn run_bench_with(cfg: &BenchConfig, timer: &mut dyn PassTimer, injected: bool) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    let (width, n_features) = match &cfg.dataset {
        Some(ds) => (ds.width(), ds.n_features()),
        None => (cfg.width, cfg.n_features),
    };
    let mut strategies = vec![ComparisonStrategy::HostFloat];
    for s in &cfg.strategies {
        if !strategies.contains(s) {
            strategies.push(*s);
        }
    }
    let mut raw = Vec::new();
    let mut rows = 0;
    for &n_trees in &cfg.grid.tree_counts {
        for &max_depth in &cfg.grid.max_depths {
            for &seed in &cfg.grid.seeds {
                let forest = synth_forest(
                    &SynthParams::new(n_trees, max_depth, n_features, cfg.n_classes, seed).with_width(width),
                );
                let synthesized;
                let data = match &cfg.dataset {
                    Some(ds) => ds,
                    None => {
                        synthesized = synth_rows(&forest, cfg.rows, seed ^ 0x5eed);
                        &synthesized
                    }
                };
                rows = data.n_rows();
                let matrix = match width {
                    FloatWidth::Single => Matrix::Single(data.features().iter().map(|v| *v as f32).collect()),
                    FloatWidth::Double => Matrix::Double(data.features().to_vec()),
                };
                for &strategy in &strategies {
                    let pf = prepare(&forest, strategy);
                    for _ in 0..cfg.warmup_rounds {
                        black_box(one_pass(&pf, &matrix));
                    }
                    let times_ns = (0..cfg.repetitions)
                        .map(|repetition| {
                            let key = PassKey {
                                n_trees,
                                max_depth,
                                seed,
                                strategy,
                                repetition,
                            };
                            timer.time(&key, &mut || one_pass(&pf, &matrix))
                        })
                        .collect();
                    raw.push(RawCell {
                        n_trees,
                        max_depth,
                        seed,
                        strategy,
                        times_ns,
                    });
                }
            }
        }
    }
    summarize(
        raw,
        ReportMeta {
            host: HostInfo::detect(timer.tick_ns(), injected),
            width,
            rows,
            repetitions: cfg.repetitions,
            warmup_rounds: cfg.warmup_rounds,
        },
    )
}

/// Runs the grid against the monotonic clock.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    run_bench_with(cfg, &mut MonotonicTimer::new(), false)
}

/// Fixture format for `bench --inject`: raw per-repetition times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectedTimings {
    #[serde(default = "default_width")]
    pub width: FloatWidth,
    #[serde(default)]
    pub rows: usize,
    pub cells: Vec<RawCell>,
}

fn default_width() -> FloatWidth {
    FloatWidth::Single
}

pub fn report_from_injected(inj: InjectedTimings) -> Result<BenchReport, BenchError> {
    let reps = inj.cells.iter().map(|c| c.times_ns.len()).max().unwrap_or(0);
    summarize(
        inj.cells,
        ReportMeta {
            host: HostInfo::detect(1.0, true),
            width: inj.width,
            rows: inj.rows,
            repetitions: reps,
            warmup_rounds: 0,
        },
    )
}

pub fn load_injected(path: &Path) -> Result<InjectedTimings, BenchError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "json" => Ok(ReportFormat::Json),
            _ => Err(format!("unknown report format '{s}', expected table or json")),
        }
    }
}

fn table(r: &BenchReport, title: &str, value: impl Fn(&GroupSummary) -> String) -> String {
    let mut depths: Vec<usize> = r.depth_groups.iter().filter_map(|g| g.max_depth).collect();
    depths.sort_unstable();
    depths.dedup();
    let mut header = vec!["strategy".to_string()];
    header.extend(depths.iter().map(|d| format!("D={d}")));
    header.push("all".to_string());
    let mut lines = vec![header];
    let strategies: Vec<ComparisonStrategy> = r.overall.iter().map(|g| g.strategy).collect();
    for &s in &strategies {
        let mut row = vec![s.to_string()];
        for &d in &depths {
            row.push(
                r.depth_groups
                    .iter()
                    .find(|g| g.strategy == s && g.max_depth == Some(d))
                    .map(&value)
                    .unwrap_or_else(|| "-".to_string()),
            );
        }
        row.push(
            r.overall
                .iter()
                .find(|g| g.strategy == s)
                .map(&value)
                .unwrap_or_default(),
        );
        lines.push(row);
    }
    for &s in &strategies {
        let mut row = vec![format!("{s} (D>={DEEP_DEPTH})")];
        row.extend(depths.iter().map(|_| String::new()));
        row.push(
            r.deep
                .iter()
                .find(|g| g.strategy == s)
                .map(&value)
                .unwrap_or_else(|| "n/a".to_string()),
        );
        lines.push(row);
    }
    let cols = lines[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = format!("{title}\n");
    for l in &lines {
        let cells: Vec<String> = l
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 {
                    format!("{c:<w$}", w = widths[i])
                } else {
                    format!("{c:>w$}", w = widths[i])
                }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn render_report(r: &BenchReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        ReportFormat::Table => {
            let mut out = format!(
                "{} {} | {} | {} logical cpus | {} rows | {} reps | median per cell{}\n\n",
                r.host.os,
                r.host.arch,
                r.host.cpu,
                r.host.logical_cpus,
                r.rows,
                r.repetitions,
                if r.host.injected { " | injected timings" } else { "" }
            );
            out.push_str(&table(r, "normalized execution time (geometric mean)", |g| {
                format!("{:.3}x", g.geomean)
            }));
            out.push('\n');
            out.push_str(&table(
                r,
                &format!("variance of ratios ({})", r.variance_estimator),
                |g| format!("{:.2e}", g.variance),
            ));
            let coarse = r.cells.iter().filter(|c| c.coarse_timer).count();
            if coarse > 0 {
                let _ = writeln!(
                    out,
                    "\nwarning: {coarse} cells measured below {COARSE_TICKS} timer ticks"
                );
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(depth: usize, seed: u64, strategy: ComparisonStrategy, t: f64) -> RawCell {
        RawCell {
            n_trees: 1,
            max_depth: depth,
            seed,
            strategy,
            times_ns: vec![t; 3],
        }
    }

    fn inj(cells: Vec<RawCell>) -> BenchReport {
        report_from_injected(InjectedTimings {
            width: FloatWidth::Single,
            rows: 10,
            cells,
        })
        .unwrap()
    }

    use ComparisonStrategy::{Flint, HostFloat};

    #[test]
    fn median_and_variance() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
        assert_eq!(population_variance(&[1.0, 3.0]), 1.0);
        assert_eq!(population_variance(&[0.5, 0.5]), 0.0);
    }

    #[test]
    fn half_time_gives_half_ratio() {
        let r = inj(vec![
            raw(5, 0, HostFloat, 2.0),
            raw(5, 0, Flint, 1.0),
            raw(5, 1, HostFloat, 2.0),
            raw(5, 1, Flint, 1.0),
        ]);
        let g = r.depth_groups.iter().find(|g| g.strategy == Flint).unwrap();
        assert_eq!(g.ratios, vec![0.5, 0.5]);
        assert!((g.geomean - 0.5).abs() < 1e-12);
    }

    #[test]
    fn geomean_of_point_eight_and_point_five() {
        let r = inj(vec![
            raw(10, 0, HostFloat, 1.0),
            raw(10, 0, Flint, 0.8),
            raw(10, 1, HostFloat, 1.0),
            raw(10, 1, Flint, 0.5),
        ]);
        let g = r.depth_groups.iter().find(|g| g.strategy == Flint).unwrap();
        assert!((g.geomean - 0.4f64.sqrt()).abs() < 1e-9);
        assert!((g.geomean - 0.632455532).abs() < 1e-9);
        assert!((g.variance - 0.0225).abs() < 1e-12);
    }

    #[test]
    fn baseline_is_exactly_one() {
        let r = inj(vec![raw(1, 0, HostFloat, 7.0), raw(1, 0, Flint, 3.0)]);
        for c in r.cells.iter().filter(|c| c.strategy == HostFloat) {
            assert_eq!(c.ratio, 1.0);
        }
        assert_eq!(r.overall[0].geomean, 1.0);
    }

    #[test]
    fn deep_row_pools_depth_20_and_up() {
        let r = inj(vec![
            raw(10, 0, HostFloat, 1.0),
            raw(10, 0, Flint, 0.9),
            raw(20, 0, HostFloat, 1.0),
            raw(20, 0, Flint, 0.8),
            raw(30, 0, HostFloat, 1.0),
            raw(30, 0, Flint, 0.5),
        ]);
        let d = r.deep.iter().find(|g| g.strategy == Flint).unwrap();
        assert_eq!(d.ratios, vec![0.8, 0.5]);
        assert!((d.geomean - 0.4f64.sqrt()).abs() < 1e-12);
        let all = r.overall.iter().find(|g| g.strategy == Flint).unwrap();
        assert!((all.geomean - (0.9f64 * 0.8 * 0.5).powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn missing_baseline_is_an_error() {
        let e = report_from_injected(InjectedTimings {
            width: FloatWidth::Single,
            rows: 0,
            cells: vec![raw(1, 0, Flint, 1.0)],
        })
        .unwrap_err();
        assert!(matches!(e, BenchError::MissingBaseline { .. }));
    }

    #[test]
    fn json_round_trip() {
        let r = inj(vec![raw(3, 0, HostFloat, 1.5), raw(3, 0, Flint, 1.2)]);
        let text = render_report(&r, ReportFormat::Json);
        let back: BenchReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn table_has_baseline_and_deep_rows() {
        let r = inj(vec![raw(3, 0, HostFloat, 1.0), raw(3, 0, Flint, 0.75)]);
        let t = render_report(&r, ReportFormat::Table);
        assert!(t.contains("D=3"));
        assert!(t.lines().any(|l| l.starts_with("float ") && l.contains("1.000x")));
        assert!(t.lines().any(|l| l.starts_with("flint ") && l.contains("0.750x")));
        assert!(t.contains("flint (D>=20)") && t.contains("n/a"));
    }

    #[test]
    fn config_validation() {
        let mut c = BenchConfig::default();
        assert!(c.validate().is_ok());
        c.repetitions = 2;
        assert!(c.validate().is_err());
        c = BenchConfig::default();
        c.grid.seeds.clear();
        assert!(c.validate().is_err());
    }

    struct Fake;

    impl PassTimer for Fake {
        fn time(&mut self, key: &PassKey, pass: &mut dyn FnMut() -> usize) -> f64 {
            pass();
            match key.strategy {
                HostFloat => 2000.0,
                Flint => 1000.0 + key.repetition as f64,
            }
        }

        fn tick_ns(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn run_with_injected_timer() {
        let cfg = BenchConfig {
            repetitions: 3,
            grid: BenchGrid {
                tree_counts: vec![2],
                max_depths: vec![3, 20],
                seeds: vec![1],
            },
            rows: 50,
            ..Default::default()
        };
        let r = run_bench_with(&cfg, &mut Fake, true).unwrap();
        assert_eq!(r.cells.len(), 4);
        let f = r.deep.iter().find(|g| g.strategy == Flint).unwrap();
        assert_eq!(f.ratios, vec![1001.0 / 2000.0]);
        assert_eq!(r.rows, 50);
    }
}
