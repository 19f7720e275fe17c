use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use flint::bench::{self, BenchConfig, BenchGrid, ReportFormat};
use flint::codegen::{emit_harness, emit_ifelse, verify_source, Flavor};
use flint::flint::FloatWidth;
use flint::inference::{predict_dataset, prepare, write_predictions_csv, ComparisonStrategy};
use flint::model::{load_dataset, load_forest, save_dataset, save_forest, ModelError};
use flint::oracle::{self, CheckLimits, MiniFloatFormat, Statement};
use flint::suite::{self, SuiteConfig};
use flint::synth::{synth_forest, synth_rows, SynthParams};

/// Exit codes:
///   0 success
///   1 a check failed (counterexample, invalid model, divergent rows)
///   2 usage error
///   3 input missing or unreadable
///   4 output could not be written
///   5 request refused (format beyond the exhaustive bound)
#[derive(Debug)]
enum Failure {
    Check(String),
    Usage(String),
    Input(String),
    Output(String),
    Refused(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::Output(_) => 4,
            Failure::Refused(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Usage(m) | Failure::Input(m) | Failure::Output(m) | Failure::Refused(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn out_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Output(format!("cannot write {}: {e}", path.display()))
}

fn model_err(e: ModelError) -> Failure {
    match e {
        ModelError::NotFound(_) | ModelError::Io { .. } | ModelError::Parse(_) => Failure::Input(e.to_string()),
        _ => Failure::Check(format!("invalid model: {e}")),
    }
}

#[derive(Parser)]
#[command(name = "flint", version, about = "Integer-only split comparisons for random forests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the comparison theorems exhaustively on a mini-float format,
    /// or sample the production operator at f32/f64.
    Verify(VerifyArgs),
    /// Load a model JSON file and report whether it is well formed.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Write a pseudorandom forest (and optionally rows for it).
    Synth(SynthArgs),
    /// Emit C source for a model.
    Codegen(CodegenArgs),
    /// Classify a dataset CSV.
    Predict(PredictArgs),
    /// Time float and flint inference over a grid of synthesized forests.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutation {
    /// The sign correction XOR term of the general operator removed.
    DropXor,
}

#[derive(Args)]
struct VerifyArgs {
    /// Mini-float layout as k,j,x (total, exponent, mantissa bits).
    #[arg(long, conflicts_with = "width")]
    format: Option<String>,
    /// Statement to check, or all.
    #[arg(long, default_value = "all")]
    theorem: String,
    /// Largest k accepted for exhaustive checking.
    #[arg(long, default_value_t = oracle::DEFAULT_MAX_CHECK_BITS)]
    max_bits: u32,
    /// Check a deliberately broken operator instead; it must fail.
    #[arg(long, value_enum)]
    mutate: Option<Mutation>,
    /// Run the sampled suite at a production width.
    #[arg(long)]
    width: Option<FloatWidth>,
    #[arg(long, default_value_t = 1_000_000, requires = "width")]
    samples: u64,
    #[arg(long, env = "FLINT_SEED", default_value_t = suite::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 5)]
    trees: usize,
    #[arg(long, default_value_t = 10)]
    depth: usize,
    #[arg(long, default_value_t = 8)]
    features: usize,
    #[arg(long, default_value_t = 2)]
    classes: usize,
    #[arg(long, env = "FLINT_SEED", default_value_t = suite::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value = "f32")]
    width: FloatWidth,
    /// Model output path.
    #[arg(long, default_value = "model.json")]
    out: PathBuf,
    /// Also write this many fuzzed rows to --data-out.
    #[arg(long, requires = "data_out")]
    rows: Option<usize>,
    #[arg(long)]
    data_out: Option<PathBuf>,
}

#[derive(Args)]
struct CodegenArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value = "flint")]
    flavor: Flavor,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also emit a main() that reads a dataset CSV and prints predictions.
    #[arg(long)]
    with_harness: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    #[value(alias = "float")]
    Host,
    Flint,
    Both,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "flint")]
    mode: Mode,
    /// Predictions CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 5, 10])]
    trees: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 5, 10, 20])]
    depths: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0u64])]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = 2000)]
    rows: usize,
    #[arg(long, default_value_t = 16)]
    features: usize,
    #[arg(long, default_value_t = 3)]
    classes: usize,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    warmup: usize,
    #[arg(long, default_value = "f32")]
    width: FloatWidth,
    /// Time over this dataset instead of synthesized rows.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, default_value = "table")]
    format: ReportFormat,
    /// Also write the full JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Build the report from recorded raw timings instead of running.
    #[arg(long)]
    inject: Option<PathBuf>,
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    if let Some(width) = a.width {
        let r = suite::run_suite(&SuiteConfig {
            width,
            samples: a.samples,
            seed: a.seed,
        });
        println!(
            "{width}: {} checks (seed {}, {} samples, edge set v{} of {} values): {} ge, {} signed-zero, {} split, {} negative-path, {} decode",
            r.total_checks(),
            r.seed,
            r.samples,
            r.edge_set_version,
            r.edge_set_len,
            r.ge_pairs,
            r.signed_zero_pairs,
            r.split_pairs,
            r.algebra_pairs,
            r.decode_checks
        );
        if r.passed() {
            println!("all checks passed");
            return Ok(());
        }
        for m in &r.mismatches {
            println!("mismatch in {}: x={} y={}", m.check, m.x_bits, m.y_bits);
        }
        return Err(Failure::Check(format!("{} mismatches", r.mismatch_count)));
    }

    let limits = CheckLimits { max_bits: a.max_bits };
    let format = match &a.format {
        None => MiniFloatFormat::DEFAULT,
        Some(text) => parse_format(text, &limits)?,
    };
    let refused = |e: oracle::CheckError| Failure::Refused(e.to_string());

    if let Some(Mutation::DropXor) = a.mutate {
        let r = oracle::check_operator(
            format,
            "theorem1-without-xor",
            oracle::ge_without_negative_correction,
            &limits,
        )
        .map_err(refused)?;
        return match &r.counterexample {
            Some(c) => {
                println!("{} FAIL on {format}: {c}", r.subject);
                Err(Failure::Check("mutant operator rejected".to_string()))
            }
            None => {
                println!("{} passed {} pairs", r.subject, r.pairs_enumerated);
                Ok(())
            }
        };
    }

    let statements: Vec<Statement> = if a.theorem == "all" {
        Statement::ALL.to_vec()
    } else {
        vec![a.theorem.parse().map_err(Failure::Usage)?]
    };
    let results = oracle::check_statements(format, &statements, &limits).map_err(refused)?;
    let mut failed = 0;
    for r in &results {
        match &r.counterexample {
            None => println!(
                "{:<10} pass  {} pairs, {} applicable",
                r.subject, r.pairs_enumerated, r.pairs_applicable
            ),
            Some(c) => {
                failed += 1;
                println!("{:<10} FAIL  {c}", r.subject);
            }
        }
    }
    let pairs = results[0].pairs_enumerated;
    if failed == 0 {
        println!("all checks passed ({pairs} pairs × {} statements)", results.len());
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{failed} of {} statements failed on {format}",
            results.len()
        )))
    }
}

/// Oversized layouts are refused before their shape is validated, so
/// `20,8,11` reports the exhaustive bound rather than a layout error.
fn parse_format(text: &str, limits: &CheckLimits) -> Result<MiniFloatFormat, Failure> {
    let usage = || Failure::Usage(format!("--format expects k,j,x, got '{text}'"));
    let parts: Vec<u32> = text
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| usage()))
        .collect::<Result<_, _>>()?;
    let [k, j, x] = parts[..] else { return Err(usage()) };
    if k > limits.max_bits {
        return Err(Failure::Refused(format!(
            "format {text} has {k} bits; exhaustive checking is bounded to k <= {} ({} pairs)",
            limits.max_bits,
            1u128 << (2 * limits.max_bits)
        )));
    }
    MiniFloatFormat::new(k, j, x).map_err(|e| Failure::Usage(e.to_string()))
}

fn stdout_err(e: io::Error) -> Outcome {
    if e.kind() == io::ErrorKind::BrokenPipe {
        return Ok(());
    }
    Err(Failure::Output(format!("stdout: {e}")))
}

fn cmd_validate(model: &Path) -> Outcome {
    let f = load_forest(model).map_err(model_err)?;
    println!(
        "valid: {} trees, {} features, {} classes, {}, max depth {}, {} nodes",
        f.trees().len(),
        f.n_features(),
        f.n_classes(),
        f.width(),
        f.max_depth(),
        f.node_count()
    );
    Ok(())
}

fn cmd_synth(a: SynthArgs) -> Outcome {
    if a.trees == 0 || a.depth == 0 || a.features == 0 || a.classes == 0 {
        return Err(Failure::Usage(
            "trees, depth, features and classes must be >= 1".to_string(),
        ));
    }
    let f = synth_forest(&SynthParams::new(a.trees, a.depth, a.features, a.classes, a.seed).with_width(a.width));
    save_forest(&f, &a.out).map_err(|e| out_err(&a.out, e))?;
    println!("wrote {}", a.out.display());
    if let (Some(rows), Some(path)) = (a.rows, &a.data_out) {
        let ds = synth_rows(&f, rows, a.seed);
        save_dataset(&ds, path).map_err(|e| out_err(path, e))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_codegen(a: CodegenArgs) -> Outcome {
    let f = load_forest(&a.model).map_err(model_err)?;
    let g = emit_ifelse(&f, a.flavor);
    let report = verify_source(&g);
    if !report.passed() {
        for v in &report.violations {
            eprintln!("{v}");
        }
        return Err(Failure::Check("emitted source failed structure checks".to_string()));
    }
    let stem = a.model.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
    fs::create_dir_all(&a.out).map_err(|e| out_err(&a.out, e))?;
    let src = a.out.join(format!("{stem}_{}.c", a.flavor));
    fs::write(&src, g.text()).map_err(|e| out_err(&src, e))?;
    println!("{}", src.display());
    if a.with_harness {
        let main = a.out.join(format!("{stem}_{}_main.c", a.flavor));
        fs::write(&main, emit_harness(&f, a.flavor)).map_err(|e| out_err(&main, e))?;
        println!("{}", main.display());
    }
    eprintln!(
        "{} nodes, max nesting {}, {} negative splits",
        g.stats.nodes, g.stats.max_nesting, g.stats.negative_splits
    );
    Ok(())
}

fn cmd_predict(a: PredictArgs) -> Outcome {
    let f = load_forest(&a.model).map_err(model_err)?;
    let ds = load_dataset(&a.data, f.width()).map_err(|e| Failure::Input(e.to_string()))?;
    let input = |e: flint::inference::InferenceError| Failure::Input(e.to_string());

    if a.mode == Mode::Both {
        let host = prepare(&f, ComparisonStrategy::HostFloat);
        let fl = prepare(&f, ComparisonStrategy::Flint);
        let ph = predict_dataset(&host, &ds).map_err(input)?;
        let pf = predict_dataset(&fl, &ds).map_err(input)?;
        let mut divergent = Vec::new();
        for (i, row) in ds.rows().enumerate() {
            let same_path = host.trace(row).map_err(input)? == fl.trace(row).map_err(input)?;
            let same_pred = ph.rows[i].class == pf.rows[i].class
                && ph.rows[i]
                    .scores
                    .iter()
                    .zip(&pf.rows[i].scores)
                    .all(|(a, b)| a.to_bits() == b.to_bits());
            if !(same_path && same_pred) {
                divergent.push(i);
            }
        }
        println!("{} rows, {} divergent rows", ds.n_rows(), divergent.len());
        if let Some(acc) = pf.accuracy {
            println!("accuracy {acc:.6}");
        }
        if divergent.is_empty() {
            return Ok(());
        }
        let shown: Vec<String> = divergent.iter().take(20).map(|i| i.to_string()).collect();
        println!("divergent rows: {}", shown.join(","));
        return Err(Failure::Check("strategies diverge".to_string()));
    }

    let strategy = match a.mode {
        Mode::Host => ComparisonStrategy::HostFloat,
        _ => ComparisonStrategy::Flint,
    };
    let p = predict_dataset(&prepare(&f, strategy), &ds).map_err(input)?;
    match &a.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| out_err(path, e))?;
            write_predictions_csv(&p, f.n_classes(), io::BufWriter::new(file)).map_err(|e| out_err(path, e))?;
        }
        None => {
            if let Err(e) = write_predictions_csv(&p, f.n_classes(), io::stdout().lock()) {
                match e.into_kind() {
                    csv::ErrorKind::Io(io) => stdout_err(io)?,
                    other => return Err(Failure::Output(format!("stdout: {other:?}"))),
                }
            }
        }
    }
    if let Some(acc) = p.accuracy {
        eprintln!("accuracy {acc:.6} over {} rows", ds.n_rows());
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Outcome {
    let report = match &a.inject {
        Some(path) => {
            let inj = bench::load_injected(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            bench::report_from_injected(inj).map_err(|e| Failure::Input(e.to_string()))?
        }
        None => {
            let dataset = match &a.data {
                Some(p) => Some(load_dataset(p, a.width).map_err(|e| Failure::Input(e.to_string()))?),
                None => None,
            };
            let cfg = BenchConfig {
                repetitions: a.reps,
                warmup_rounds: a.warmup,
                strategies: vec![ComparisonStrategy::Flint],
                grid: BenchGrid {
                    tree_counts: a.trees,
                    max_depths: a.depths,
                    seeds: a.seeds,
                },
                width: a.width,
                n_features: a.features,
                n_classes: a.classes,
                rows: a.rows,
                dataset,
            };
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            bench::run_bench(&cfg).map_err(|e| Failure::Check(e.to_string()))?
        }
    };
    if let Some(path) = &a.out {
        fs::write(path, bench::render_report(&report, ReportFormat::Json)).map_err(|e| out_err(path, e))?;
    }
    let mut stdout = io::stdout().lock();
    match stdout.write_all(bench::render_report(&report, a.format).as_bytes()) {
        Ok(()) => Ok(()),
        Err(e) => stdout_err(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Validate { model } => cmd_validate(&model),
        Command::Synth(a) => cmd_synth(a),
        Command::Codegen(a) => cmd_codegen(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
