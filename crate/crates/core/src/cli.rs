//! Command-line interface: `learn`, `generate`, `verify` and `bench`.
//!
//! Exit codes: 0 solved / separates, 1 no solution / does not separate,
//! 2 timeout, 3 input error, 4 internal error.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::benchgen::{gen_task, read_manifest, write_manifest, Family, ManifestRecord, TaskSpec};
use crate::ltl::{parse_formula, satisfies, OperatorSet};
use crate::pipeline::{learn, LearnResult, LearnerConfig, Status};
use crate::trace::{parse_sample, serialize_sample, Sample};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_SOLUTION: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "ltlf-learn",
    version,
    about = "Learn LTLf formulas from positive and negative traces"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// More log output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Learn a separating formula for a task file.
    Learn(LearnArgs),
    /// Generate benchmark task files and a manifest.
    Generate(GenerateArgs),
    /// Check whether a formula separates a task.
    Verify(VerifyArgs),
    /// Run the learner on every task of a manifest.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct LearnerFlags {
    #[arg(long, default_value_t = 8)]
    ltl2bs_switch: usize,
    #[arg(long, default_value_t = 100)]
    beam_width: usize,
    #[arg(long, default_value_t = 70)]
    dc_switch: usize,
    #[arg(long, default_value_t = 10)]
    domination_k: usize,
    /// Comma-separated operators, e.g. "!,X!,X,F,G,&,|,U".
    #[arg(long)]
    operators: Option<String>,
    /// Seconds; 0 disables the limit.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also enumerate `true` and `false`.
    #[arg(long)]
    with_constants: bool,
    /// Plain enumeration without a size bound or set cover.
    #[arg(long)]
    raw_vfb: bool,
}

impl LearnerFlags {
    fn config(&self) -> Result<LearnerConfig, String> {
        let operators = match &self.operators {
            Some(s) => Some(OperatorSet::parse_list(s).map_err(|e| format!("--operators: {e}"))?),
            None => None,
        };
        if !(self.timeout >= 0.0 && self.timeout.is_finite()) {
            return Err("--timeout must be a non-negative number".into());
        }
        if self.beam_width == 0 || self.domination_k == 0 {
            return Err("--beam-width and --domination-k must be positive".into());
        }
        Ok(LearnerConfig {
            ltl2bs_switch: self.ltl2bs_switch,
            beam_width: self.beam_width,
            dc_switch: self.dc_switch,
            domination_k: self.domination_k,
            operators,
            timeout: (self.timeout > 0.0).then(|| Duration::from_secs_f64(self.timeout)),
            seed: self.seed,
            with_constants: self.with_constants,
            raw_vfb: self.raw_vfb,
        })
    }

    fn echo(&self) -> Value {
        json!({
            "ltl2bs_switch": self.ltl2bs_switch,
            "beam_width": self.beam_width,
            "dc_switch": self.dc_switch,
            "domination_k": self.domination_k,
            "operators": self.operators,
            "timeout": self.timeout,
            "seed": self.seed,
            "with_constants": self.with_constants,
            "raw_vfb": self.raw_vfb,
        })
    }
}

#[derive(Args, Debug)]
struct LearnArgs {
    task: PathBuf,
    #[command(flatten)]
    learner: LearnerFlags,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print statistics to stderr in text mode.
    #[arg(long)]
    stats: bool,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(Family::NAMES))]
    family: String,
    /// Length of ordered sequences.
    #[arg(long)]
    n: Option<usize>,
    /// Subword letters, e.g. "0,1,0".
    #[arg(long, value_delimiter = ',')]
    word: Vec<usize>,
    /// Propositions of the subset, e.g. "0,1".
    #[arg(long, value_delimiter = ',')]
    subset: Vec<usize>,
    /// Number of conjuncts.
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    factors: usize,
    #[arg(long, default_value_t = 3)]
    pattern_len: usize,
    /// Number of propositions; defaults to the fewest the family needs.
    #[arg(long)]
    props: Option<usize>,
    /// Trace lengths (comma-separated grid).
    #[arg(long = "len", value_delimiter = ',', default_value = "16")]
    lens: Vec<usize>,
    #[arg(long = "pos", value_delimiter = ',', default_value = "5")]
    pos: Vec<usize>,
    #[arg(long = "neg", value_delimiter = ',', default_value = "5")]
    neg: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tasks per grid point, with seeds `seed`, `seed + 1`, ….
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, default_value_t = crate::benchgen::DEFAULT_MAX_TRIES)]
    max_tries: u64,
    /// Output directory; receives the tasks and `manifest.csv`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    task: PathBuf,
    formula: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct BenchArgs {
    manifest: PathBuf,
    #[command(flatten)]
    learner: LearnerFlags,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// Parses `std::env::args` and runs the command; returns the exit code.
pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .try_init();
    match cli.command {
        Command::Learn(a) => cmd_learn(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn load_sample(path: &Path) -> Result<Sample, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_sample(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Solved => EXIT_OK,
        Status::NoSolution => EXIT_NO_SOLUTION,
        Status::Timeout => EXIT_TIMEOUT,
    }
}

fn result_json(r: &LearnResult, sample: &Sample) -> Value {
    json!({
        "status": r.status,
        "formula": r.formula.as_ref().map(|f| f.display(sample.alphabet()).to_string()),
        "size": r.size(),
        "elapsed_ms": r.elapsed.as_secs_f64() * 1000.0,
        "method": r.method,
        "witness": r.witness,
        "stats": r.stats,
    })
}

fn cmd_learn(a: LearnArgs) -> i32 {
    let cfg = match a.learner.config() {
        Ok(c) => c,
        Err(e) => return input_error(&e),
    };
    let sample = match load_sample(&a.task) {
        Ok(s) => s,
        Err(e) => return input_error(&e),
    };
    let r = match learn(&sample, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    match a.format {
        Format::Json => println!("{}", result_json(&r, &sample)),
        Format::Text => {
            match (&r.formula, r.status) {
                (Some(f), _) => println!("{}", f.display(sample.alphabet())),
                (None, Status::NoSolution) => {
                    println!(
                        "no solution among combinations of formulas up to size {}",
                        cfg.ltl2bs_switch
                    );
                    if let Some(w) = r.witness {
                        println!(
                            "positive trace {} and negative trace {} agree on every enumerated formula",
                            w.pos + 1,
                            w.neg + 1
                        );
                    }
                    println!("a larger --ltl2bs-switch might still find a separator");
                }
                (None, _) => println!("timeout"),
            }
            if a.stats {
                eprintln!("method: {}", r.method.map_or("-", |m| m.as_str()));
                eprintln!("elapsed: {:.3} s", r.elapsed.as_secs_f64());
                eprintln!(
                    "{}",
                    serde_json::to_string_pretty(&r.stats).unwrap_or_default()
                );
            }
        }
    }
    status_code(r.status)
}

fn input_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    EXIT_INPUT
}

fn family_of(a: &GenerateArgs) -> Result<Family, String> {
    Ok(match a.family.as_str() {
        "ordered-sequence" => Family::OrderedSequence {
            n: a.n.ok_or("ordered-sequence needs --n")?,
        },
        "subword" if a.word.is_empty() => return Err("subword needs --word".into()),
        "subword" => Family::Subword {
            word: a.word.clone(),
        },
        "subset" if a.subset.is_empty() => return Err("subset needs --subset".into()),
        "subset" => Family::Subset {
            props: a.subset.clone(),
        },
        "hamming" => Family::Hamming,
        "random-conjuncts" => Family::RandomConjuncts { m: a.m },
        "random-bool-comb" => Family::RandomBoolComb {
            factors: a.factors,
            pattern_len: a.pattern_len,
        },
        other => return Err(format!("unknown family '{other}'")),
    })
}

fn task_file_name(spec: &TaskSpec) -> String {
    let params: String = spec
        .family
        .params()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect();
    let mut name = spec.family.name().to_string();
    if !params.is_empty() {
        name.push('_');
        name.push_str(&params);
    }
    format!(
        "{name}_props{}_len{}_pos{}_neg{}_seed{}.trace",
        spec.n_props, spec.trace_len, spec.n_pos, spec.n_neg, spec.seed
    )
}

fn cmd_generate(a: GenerateArgs) -> i32 {
    let family = match family_of(&a) {
        Ok(f) => f,
        Err(e) => return input_error(&e),
    };
    if let Err(e) = fs::create_dir_all(&a.out) {
        return input_error(&format!("{}: {e}", a.out.display()));
    }
    // Hamming tasks have exactly one positive whatever --pos says.
    let pos_grid = if family == Family::Hamming {
        vec![1]
    } else {
        a.pos.clone()
    };
    let mut records = Vec::new();
    let mut failed = 0;
    for &len in &a.lens {
        for &pos in &pos_grid {
            for &neg in &a.neg {
                for seed in a.seed..a.seed + a.count {
                    let mut spec = TaskSpec::new(family.clone(), len, pos, neg, seed);
                    if let Some(p) = a.props {
                        spec.n_props = p;
                    }
                    spec.max_tries = a.max_tries;
                    let sample = match gen_task(&spec) {
                        Ok(s) => s,
                        Err(e) => {
                            eprintln!("warning: {}: {e}", task_file_name(&spec));
                            failed += 1;
                            continue;
                        }
                    };
                    let name = task_file_name(&spec);
                    if let Err(e) = fs::write(a.out.join(&name), serialize_sample(&sample)) {
                        return input_error(&format!("{name}: {e}"));
                    }
                    records.push(ManifestRecord::new(&spec, name));
                }
            }
        }
    }
    let manifest = a.out.join("manifest.csv");
    if let Err(e) = write_manifest(&manifest, &records) {
        return input_error(&format!("{}: {e}", manifest.display()));
    }
    eprintln!("wrote {} task files to {}", records.len(), a.out.display());
    if failed > 0 {
        EXIT_NO_SOLUTION
    } else {
        EXIT_OK
    }
}

fn cmd_verify(a: VerifyArgs) -> i32 {
    let sample = match load_sample(&a.task) {
        Ok(s) => s,
        Err(e) => return input_error(&e),
    };
    let phi = match parse_formula(&a.formula, sample.alphabet()) {
        Ok(f) => f,
        Err(e) => return input_error(&format!("formula: {e}")),
    };
    let n_pos = sample.n_pos();
    let wrong: Vec<usize> = sample
        .traces()
        .enumerate()
        .filter(|(i, w)| satisfies(&phi, w) != (*i < n_pos))
        .map(|(i, _)| i)
        .collect();
    let describe = |i: usize| {
        if i < n_pos {
            format!("positive {}", i + 1)
        } else {
            format!("negative {}", i - n_pos + 1)
        }
    };
    match a.format {
        Format::Json => println!(
            "{}",
            json!({
                "separates": wrong.is_empty(),
                "size": phi.size(),
                "misclassified": wrong.iter().map(|&i| describe(i)).collect::<Vec<_>>(),
            })
        ),
        Format::Text if wrong.is_empty() => println!("separates ({} traces)", sample.n_traces()),
        Format::Text => {
            println!("does not separate");
            for &i in &wrong {
                println!("  misclassified {}", describe(i));
            }
        }
    }
    if wrong.is_empty() {
        EXIT_OK
    } else {
        EXIT_NO_SOLUTION
    }
}

struct BenchRow {
    family: String,
    status: Option<Status>,
    seconds: f64,
    size: Option<usize>,
}

fn bench_one(
    rec: &ManifestRecord,
    base: &Path,
    cfg: &LearnerConfig,
    echo: &Value,
) -> (Value, BenchRow) {
    let path = base.join(&rec.path);
    let mut row = BenchRow {
        family: rec.family.clone(),
        status: None,
        seconds: 0.0,
        size: None,
    };
    let mut record = json!({
        "task": path.display().to_string(),
        "family": rec.family,
        "params": rec.params,
        "trace_len": rec.trace_len,
        "n_props": rec.n_props,
        "n_pos": rec.n_pos,
        "n_neg": rec.n_neg,
        "seed": rec.seed,
        "config": echo,
    });
    let fields = match load_sample(&path) {
        Err(e) => json!({ "status": "InputError", "error": e }),
        Ok(sample) => match learn(&sample, cfg) {
            Err(e) => json!({ "status": "InternalError", "error": e.to_string() }),
            Ok(r) => {
                row.status = Some(r.status);
                row.seconds = r.elapsed.as_secs_f64();
                row.size = r.size();
                result_json(&r, &sample)
            }
        },
    };
    if let (Value::Object(m), Value::Object(f)) = (&mut record, fields) {
        m.extend(f);
    }
    (record, row)
}

fn cmd_bench(a: BenchArgs) -> i32 {
    let cfg = match a.learner.config() {
        Ok(c) => c,
        Err(e) => return input_error(&e),
    };
    let records = match read_manifest(&a.manifest) {
        Ok(r) => r,
        Err(e) => return input_error(&format!("{}: {e}", a.manifest.display())),
    };
    let base = a.manifest.parent().unwrap_or(Path::new(".")).to_path_buf();
    let echo = a.learner.echo();
    let next = AtomicUsize::new(0);
    // Finished records, flushed to stdout in manifest order.
    let out: Mutex<(usize, Vec<Option<String>>)> = Mutex::new((0, vec![None; records.len()]));
    let rows: Mutex<Vec<Option<BenchRow>>> = Mutex::new((0..records.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..a.jobs.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= records.len() {
                    break;
                }
                let (record, row) = bench_one(&records[i], &base, &cfg, &echo);
                rows.lock().unwrap()[i] = Some(row);
                let mut guard = out.lock().unwrap();
                let (cursor, lines) = &mut *guard;
                lines[i] = Some(record.to_string());
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                while *cursor < lines.len() {
                    let Some(line) = lines[*cursor].take() else {
                        break;
                    };
                    let _ = writeln!(lock, "{line}");
                    *cursor += 1;
                }
            });
        }
    });
    let rows: Vec<BenchRow> = rows.into_inner().unwrap().into_iter().flatten().collect();
    print_summary(&rows);
    EXIT_OK
}

fn print_summary(rows: &[BenchRow]) {
    let mut by_family: BTreeMap<&str, Vec<&BenchRow>> = BTreeMap::new();
    for r in rows {
        by_family.entry(&r.family).or_default().push(r);
    }
    eprintln!(
        "{:<18} {:>10} {:>12} {:>10}",
        "family", "solved", "mean time", "mean size"
    );
    let line = |name: &str, rs: &[&BenchRow]| {
        let solved: Vec<&&BenchRow> = rs
            .iter()
            .filter(|r| r.status == Some(Status::Solved))
            .collect();
        let n = solved.len();
        let time = if n > 0 {
            format!(
                "{:.3} s",
                solved.iter().map(|r| r.seconds).sum::<f64>() / n as f64
            )
        } else {
            "-".into()
        };
        let size = if n > 0 {
            format!(
                "{:.2}",
                solved.iter().filter_map(|r| r.size).sum::<usize>() as f64 / n as f64
            )
        } else {
            "-".into()
        };
        eprintln!(
            "{:<18} {:>10} {:>12} {:>10}",
            name,
            format!("{n} / {}", rs.len()),
            time,
            size
        );
    };
    for (fam, rs) in &by_family {
        line(fam, rs);
    }
    if by_family.len() > 1 {
        let all: Vec<&BenchRow> = rows.iter().collect();
        line("total", &all);
    }
}
