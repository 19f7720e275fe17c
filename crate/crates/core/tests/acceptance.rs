//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines always reach the console; exits non-zero if an attainable
//! criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use flint::bench::{
    render_report, report_from_injected, run_bench, BenchConfig, BenchGrid, InjectedTimings, RawCell, ReportFormat,
};
use flint::codegen::{emit_harness, emit_ifelse, verify_source, Flavor};
use flint::flint::{encode_split_f32, FloatWidth};
use flint::inference::{predict_dataset, prepare, ComparisonStrategy, PreparedForest};
use flint::model::{load_forest, save_dataset, Dataset, Forest};
use flint::oracle::{
    check_operator, check_statements, ge_without_negative_correction, CheckLimits, MiniFloatFormat, Statement,
};
use flint::suite::{run_suite, SuiteConfig};
use flint::synth::{synth_forest, synth_rows, SynthParams};

enum Outcome {
    Pass(String),
    Fail(String),
    /// Red by analysis; does not fail the run.
    Unattainable(String),
    Skipped(String),
}

struct Run {
    unexpected: usize,
}

impl Run {
    fn report(&mut self, name: &str, outcome: Outcome) {
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                self.unexpected += 1;
                ("FAIL", d)
            }
            Outcome::Unattainable(d) => ("FAIL", format!("unattainable as written: {d}")),
            Outcome::Skipped(d) => ("SKIP", d),
        };
        println!("{tag} {name}: {detail}");
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn exhaustive() -> Outcome {
    let start = Instant::now();
    let limits = CheckLimits::default();
    let mut pairs = 0;
    for (k, j, x) in [(8, 4, 3), (6, 3, 2), (10, 5, 4)] {
        let format = MiniFloatFormat::new(k, j, x).unwrap();
        for r in check_statements(format, &Statement::ALL, &limits).unwrap() {
            pairs += r.pairs_enumerated;
            if let Some(ce) = r.counterexample {
                return Outcome::Fail(format!("{} fails on ({k},{j},{x}): {ce}", r.subject));
            }
        }
        let cli = Command::new(env!("CARGO_BIN_EXE_flint"))
            .args(["verify", "--format", &format!("{k},{j},{x}"), "--theorem", "all"])
            .output()
            .unwrap();
        if !cli.status.success() {
            return Outcome::Fail(format!("verify --format {k},{j},{x} exited {:?}", cli.status.code()));
        }
    }
    let format = MiniFloatFormat::DEFAULT;
    let mutant = check_operator(format, "drop-xor", ge_without_negative_correction, &limits).unwrap();
    let Some(ce) = mutant.counterexample else {
        return Outcome::Fail("mutant without the XOR term survived".into());
    };
    if !(ce.x.sign_bit() && ce.y.sign_bit()) {
        return Outcome::Fail(format!("mutant counterexample is not both-negative: {ce}"));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 30.0 {
        return Outcome::Fail(format!("took {secs:.1} s (limit 30 s)"));
    }
    Outcome::Pass(format!(
        "9 statements x 3 formats, {pairs} pairs; mutant killed by {ce}; {secs:.2} s"
    ))
}

fn production_width() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (width, samples) in [(FloatWidth::Single, 10_000_000), (FloatWidth::Double, 1_000_000)] {
        let r = run_suite(&SuiteConfig {
            width,
            samples,
            seed: 42,
        });
        if !r.passed() {
            return Outcome::Fail(format!(
                "{width}: {} mismatches, first {:?}",
                r.mismatch_count,
                r.mismatches.first()
            ));
        }
        parts.push(format!(
            "{width} seed {} {} samples + {}x{} edge pairs, {} checks, {} signed-zero pairs",
            r.seed,
            r.samples,
            r.edge_set_len,
            r.edge_set_len,
            r.total_checks(),
            r.signed_zero_pairs
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Outcome::Fail(format!("took {secs:.1} s (limit 60 s)"));
    }
    Outcome::Pass(format!("{}; {secs:.2} s", parts.join("; ")))
}

const CONSTANTS: [(&str, u32, u32, bool); 4] = [
    ("10.074347", 0x41213087, 0x41213087, false),
    ("11.974715", 0x413f986e, 0x413f986e, false),
    ("10430.507324", 0x4622fa08, 0x4622fa08, false),
    ("-2.935417", 0xc03bddde, 0x403bddde, true),
];

/// Splits taken from the constants' bit patterns, each one ulp from the
/// printed decimal.
fn constants_from_split_bits() -> Result<(), String> {
    for (dec, split_bits, want, neg) in CONSTANTS {
        let split = f32::from_bits(split_bits);
        let parsed = dec.parse::<f32>().unwrap().to_bits();
        if parsed.abs_diff(split_bits) != 1 {
            return Err(format!("{dec} parses to {parsed:#x}, not one ulp from {split_bits:#x}"));
        }
        let s = encode_split_f32(split).map_err(|e| e.to_string())?;
        if (s.constant as u32, s.negative_case) != (want, neg) {
            return Err(format!("{dec}: got {}", s.hex()));
        }
    }
    Ok(())
}

fn constants_from_decimals() -> Outcome {
    let mut off = Vec::new();
    for (dec, _, want, neg) in CONSTANTS {
        let s = encode_split_f32(dec.parse().unwrap()).unwrap();
        if (s.constant as u32, s.negative_case) != (want, neg) {
            off.push(format!("{dec}->{} (want {want:#010x})", s.hex()));
        }
    }
    if off.is_empty() {
        Outcome::Pass("all four decimals encode to the listed constants".into())
    } else {
        Outcome::Unattainable(format!(
            "{}; each decimal rounds to the float one ulp from its constant, while the split behind each constant encodes to it exactly",
            off.join(", ")
        ))
    }
}

fn reference_constants() -> Outcome {
    if let Err(e) = constants_from_split_bits() {
        return Outcome::Fail(e);
    }
    constants_from_decimals()
}

fn grid() -> Vec<(FloatWidth, Forest, Dataset, String)> {
    let mut out = Vec::new();
    for width in [FloatWidth::Single, FloatWidth::Double] {
        for trees in [1, 5, 10] {
            for depth in [1, 5, 10, 20] {
                for seed in [1, 2, 3] {
                    let f = synth_forest(&SynthParams::new(trees, depth, 8, 3, seed).with_width(width));
                    let ds = synth_rows(&f, 1000, seed + 100);
                    out.push((width, f, ds, format!("{width} T={trees} D={depth} seed={seed}")));
                }
            }
        }
    }
    out
}

fn equivalence(grid: &[(FloatWidth, Forest, Dataset, String)]) -> Outcome {
    let mut rows = 0;
    let mut specials = 0;
    for (_, forest, ds, label) in grid {
        let host = prepare(forest, ComparisonStrategy::HostFloat);
        let flint = prepare(forest, ComparisonStrategy::Flint);
        for (i, row) in ds.rows().enumerate() {
            rows += 1;
            if row
                .iter()
                .any(|v| *v == 0.0 || v.is_infinite() || (v.abs() < f32::MIN_POSITIVE as f64 && *v != 0.0))
            {
                specials += 1;
            }
            if host.trace(row).unwrap() != flint.trace(row).unwrap() {
                return Outcome::Fail(format!("{label} row {i}: leaf paths differ"));
            }
            let (a, b) = (host.predict_row(row).unwrap(), flint.predict_row(row).unwrap());
            let same_bits = a.scores.iter().zip(&b.scores).all(|(x, y)| x.to_bits() == y.to_bits());
            if a.class != b.class || !same_bits {
                return Outcome::Fail(format!("{label} row {i}: predictions differ"));
            }
        }
    }
    Outcome::Pass(format!(
        "{} forests, {rows} rows ({specials} with signed zero, denormal or infinite features), 0 divergences",
        grid.len()
    ))
}

fn codegen_structure(grid: &[(FloatWidth, Forest, Dataset, String)]) -> Outcome {
    let mut emissions = 0;
    for (_, forest, _, label) in grid {
        for flavor in [Flavor::Float, Flavor::Flint] {
            let g = emit_ifelse(forest, flavor);
            let report = verify_source(&g);
            if !report.passed() {
                return Outcome::Fail(format!("{label} {flavor}: {:?}", report.violations.first()));
            }
            if flavor == Flavor::Flint {
                let text = g.text();
                if text.contains("float") || text.contains("pX[") || text.contains("scores[c] >") {
                    return Outcome::Fail(format!("{label}: float-typed comparison in flint emission"));
                }
            }
            emissions += 1;
        }
    }
    for stem in ["stump_pos", "stump_neg"] {
        let forest = load_forest(fixtures().join(format!("fixtures/{stem}.json"))).unwrap();
        for flavor in [Flavor::Float, Flavor::Flint] {
            let golden = fixtures().join(format!("golden/{stem}_{flavor}.c"));
            let want = std::fs::read_to_string(&golden).unwrap();
            if emit_ifelse(&forest, flavor).text() != want {
                return Outcome::Fail(format!("{} differs from emission", golden.display()));
            }
        }
    }
    Outcome::Pass(format!("{emissions} emissions verified, 4 goldens byte-exact"))
}

fn cell(depth: usize, strategy: ComparisonStrategy, times: &[f64]) -> RawCell {
    RawCell {
        n_trees: 1,
        max_depth: depth,
        seed: 0,
        strategy,
        times_ns: times.to_vec(),
    }
}

fn bench_math() -> Outcome {
    use ComparisonStrategy::{Flint, HostFloat};
    let inj = InjectedTimings {
        width: FloatWidth::Single,
        rows: 1,
        cells: vec![
            cell(5, HostFloat, &[1000.0, 1000.0, 1000.0]),
            cell(5, Flint, &[790.0, 800.0, 820.0]),
            cell(20, HostFloat, &[2000.0, 1990.0, 2010.0]),
            cell(20, Flint, &[1000.0, 1000.0, 1000.0]),
        ],
    };
    let r = report_from_injected(inj).unwrap();
    let overall = r.overall.iter().find(|g| g.strategy == Flint).unwrap();
    let deep = r.deep.iter().find(|g| g.strategy == Flint).unwrap();
    if (overall.geomean - 0.632_455_532_033_675_9).abs() > 1e-9 || (deep.geomean - 0.5).abs() > 1e-9 {
        return Outcome::Fail(format!("geomeans {} / {}", overall.geomean, deep.geomean));
    }
    if (overall.variance - 0.0225).abs() > 1e-9 {
        return Outcome::Fail(format!("variance {}", overall.variance));
    }

    let cfg = BenchConfig {
        repetitions: 3,
        warmup_rounds: 1,
        grid: BenchGrid {
            tree_counts: vec![1, 5],
            max_depths: vec![1, 5, 20],
            seeds: vec![0],
        },
        rows: 500,
        ..BenchConfig::default()
    };
    let real = run_bench(&cfg).unwrap();
    let baseline_ok = real
        .cells
        .iter()
        .filter(|c| c.strategy == HostFloat)
        .all(|c| c.ratio == 1.0);
    let table = render_report(&real, ReportFormat::Table);
    if !baseline_ok || real.deep.is_empty() || !table.contains("D>=20") {
        return Outcome::Fail("real run lacks a 1.0 baseline or a D>=20 row".into());
    }
    let measured =
        |gs: &[flint::bench::GroupSummary]| gs.iter().find(|g| g.strategy == Flint).map(|g| g.geomean).unwrap();
    Outcome::Pass(format!(
        "geomean(0.8, 0.5) = {:.9}; real run: baseline 1.0, flint {:.3}x overall, {:.3}x at D>=20 (reported, not gated)",
        overall.geomean,
        measured(&real.overall),
        measured(&real.deep)
    ))
}

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc)
        .arg("--version")
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|_| cc)
}

/// `(class, score bits)` per row from a predictions CSV.
fn parse_predictions(text: &str) -> Vec<(usize, Vec<u64>)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',').skip(1);
            let class = it.next().unwrap().parse().unwrap();
            (class, it.map(|s| s.parse::<f64>().unwrap().to_bits()).collect())
        })
        .collect()
}

fn compiled_once(cc: &str, dir: &Path, forest: &Forest, ds: &Dataset, name: &str) -> Result<usize, String> {
    let data = dir.join(format!("{name}.csv"));
    save_dataset(ds, &data).map_err(|e| e.to_string())?;
    let pf: PreparedForest = prepare(forest, ComparisonStrategy::HostFloat);
    let want: Vec<(usize, Vec<u64>)> = predict_dataset(&pf, ds)
        .map_err(|e| e.to_string())?
        .rows
        .into_iter()
        .map(|r| (r.class, r.scores.iter().map(|s| s.to_bits()).collect()))
        .collect();
    for flavor in [Flavor::Float, Flavor::Flint] {
        let src = dir.join(format!("{name}_{flavor}.c"));
        let main = dir.join(format!("{name}_{flavor}_main.c"));
        let exe = dir.join(format!("{name}_{flavor}"));
        std::fs::write(&src, emit_ifelse(forest, flavor).text()).map_err(|e| e.to_string())?;
        std::fs::write(&main, emit_harness(forest, flavor)).map_err(|e| e.to_string())?;
        let out = Command::new(cc)
            .args(["-std=c99", "-O2", "-Wall", "-Wextra", "-pedantic"])
            .arg(&src)
            .arg(&main)
            .arg("-o")
            .arg(&exe)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!(
                "{name} {flavor} failed to compile: {}",
                String::from_utf8_lossy(&out.stderr)
            ));
        }
        let run = Command::new(&exe).arg(&data).output().map_err(|e| e.to_string())?;
        if !run.status.success() {
            return Err(format!("{name} {flavor} exited {:?}", run.status.code()));
        }
        let got = parse_predictions(&String::from_utf8_lossy(&run.stdout));
        if got != want {
            let i = got
                .iter()
                .zip(&want)
                .position(|(a, b)| a != b)
                .unwrap_or(got.len().min(want.len()));
            return Err(format!("{name} {flavor}: first divergence at row {i}"));
        }
    }
    Ok(want.len())
}

fn compiled() -> Outcome {
    let Some(cc) = compiler() else {
        return Outcome::Skipped("no C compiler on PATH".into());
    };
    let dir = tempfile::tempdir().unwrap();
    let stump = load_forest(fixtures().join("fixtures/stump_pos.json")).unwrap();
    let stump_rows = Dataset::new(
        FloatWidth::Single,
        4,
        [
            10.0,
            10.074347,
            f32::from_bits(0x41213087) as f64,
            11.0,
            -0.0,
            f64::INFINITY,
        ]
        .iter()
        .flat_map(|&v| [0.0, 0.0, 0.0, v as f32 as f64])
        .collect(),
        None,
    )
    .unwrap();
    let deep = synth_forest(&SynthParams::new(5, 10, 8, 3, 11));
    let deep_rows = synth_rows(&deep, 1000, 12);
    let deep64 = synth_forest(&SynthParams::new(5, 10, 8, 3, 13).with_width(FloatWidth::Double));
    let deep64_rows = synth_rows(&deep64, 1000, 14);
    let mut total = 0;
    for (f, ds, name) in [
        (&stump, &stump_rows, "stump"),
        (&deep, &deep_rows, "depth10_f32"),
        (&deep64, &deep64_rows, "depth10_f64"),
    ] {
        match compiled_once(&cc, dir.path(), f, ds, name) {
            Ok(n) => total += n,
            Err(e) => return Outcome::Fail(e),
        }
    }
    Outcome::Pass(format!(
        "{cc}: float and flint binaries match the interpreter on {total} rows x 2 flavors"
    ))
}

fn main() {
    let mut run = Run { unexpected: 0 };
    run.report("exhaustive theorem suite", exhaustive());
    run.report("production-width operator", production_width());
    run.report("reference split constants", reference_constants());
    let grid = grid();
    run.report("strategy equivalence", equivalence(&grid));
    run.report("codegen structure", codegen_structure(&grid));
    run.report("bench math", bench_math());
    run.report("compiled emissions", compiled());
    if run.unexpected > 0 {
        println!("{} criteria failed", run.unexpected);
        std::process::exit(1);
    }
}
