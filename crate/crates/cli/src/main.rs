//! Command-line entry point: train models, compress sentences, summarize
//! topics, tune scorer weights, and evaluate output.
//!
//! Exit codes: 0 on success, 2 on data/validation/configuration failures,
//! 64 on usage errors. Logs go to stderr as line-delimited JSON; command
//! output is deterministic for identical inputs.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use sumtrim::corpus::{load_compression_corpus, load_sentence_file, load_topic, QueryTopic};
use sumtrim::decoder::DecodeContext;
use sumtrim::error::Error as CoreError;
use sumtrim::eval::{compression_metrics, rouge_n, rouge_su4, PrfScores};
use sumtrim::learners::training::{sequence_examples, tree_examples};
use sumtrim::learners::{crf_train, maxent_train, ContextVariant, TrainOptions};
use sumtrim::lm::lm_train;
use sumtrim::pipeline::{compress_with, summarize, Summary};
use sumtrim::ranking::train_ranker;
use sumtrim::scorers::tune_alpha;

use config::RunConfig;

const EXIT_DATA: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(anyhow::Error),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Data(e.into())
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Data(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn log_event(event: &str, fields: serde_json::Value) {
    let mut obj = serde_json::json!({"level": "info", "event": event});
    if let (Some(map), Some(extra)) = (obj.as_object_mut(), fields.as_object()) {
        for (k, v) in extra {
            map.insert(k.clone(), v.clone());
        }
    }
    eprintln!("{obj}");
}

#[derive(Parser)]
#[command(
    name = "sumtrim",
    about = "Query-focused multi-document summarization with sentence compression",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CompressorKind {
    Maxent,
    Crf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SearchKind {
    Basic,
    Context,
    Head,
}

impl From<SearchKind> for ContextVariant {
    fn from(k: SearchKind) -> ContextVariant {
        match k {
            SearchKind::Basic => ContextVariant::Basic,
            SearchKind::Context => ContextVariant::Context,
            SearchKind::Head => ContextVariant::Head,
        }
    }
}

#[derive(Args)]
struct TrainCompressorArgs {
    /// Compression corpus (JSON lines of {tokens, tree, keep_mask}).
    #[arg(long)]
    corpus: PathBuf,
    /// Which learner to train.
    #[arg(long, value_enum)]
    variant: CompressorKind,
    /// Search variant whose history features a MaxEnt model is trained with.
    #[arg(long, value_enum, default_value = "basic")]
    search: SearchKind,
    /// Output model path; the training log goes to `<out>.log.json`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    l2: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct TrainRankerArgs {
    /// Directory of topic directories (each containing topic.json).
    #[arg(long)]
    topics: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainLmArgs {
    /// Plain-text corpus: one whitespace-tokenized sentence per line.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = 5)]
    order: usize,
    #[arg(long, default_value_t = 0.4)]
    discount: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SummarizeArgs {
    /// A topic directory, or a directory of topic directories.
    #[arg(long)]
    topic: PathBuf,
    /// Experiment config JSON (variant, scorer, budget, model paths).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; each topic gets summary.txt and provenance.json.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads for multi-topic runs.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct CompressArgs {
    /// JSON-lines sentences ({tokens, tree, ...}), one compression per line.
    #[arg(long)]
    sentence_file: PathBuf,
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Directory of summaries: <topic>.txt files or <topic>/summary.txt.
    #[arg(long)]
    summaries: Option<PathBuf>,
    /// Directory of references: <topic>/*.txt.
    #[arg(long)]
    abstracts: Option<PathBuf>,
    /// Gold compression corpus; evaluates the configured compressor on it.
    #[arg(long)]
    compression_gold: Option<PathBuf>,
    /// Config naming the compressor models (required with --compression-gold).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Where to write the JSON report (defaults next to --summaries).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct TuneArgs {
    /// Directory of tuning topic directories (abstracts required).
    #[arg(long)]
    topics: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    grid_step: f64,
    #[arg(long)]
    config: PathBuf,
    /// Output path for the tuned weights JSON.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Train a compression model (MaxEnt for tree search, CRF for sequences).
    TrainCompressor(TrainCompressorArgs),
    /// Train the sentence ranker on topics with reference abstracts.
    TrainRanker(TrainRankerArgs),
    /// Train the backoff n-gram language model.
    TrainLm(TrainLmArgs),
    /// Summarize one or more topics.
    Summarize(SummarizeArgs),
    /// Compress sentences from a file, one result line per input line.
    Compress(CompressArgs),
    /// Score summaries against abstracts and/or a compression gold standard.
    Evaluate(EvaluateArgs),
    /// Grid-search the multi-scorer weights on tuning topics.
    Tune(TuneArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let is_help = matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Data(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

fn configure_jobs(jobs: Option<usize>) -> CliResult<()> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(CliError::usage("--jobs must be at least 1"));
        }
        // Failure means a global pool already exists; keep it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::TrainCompressor(args) => train_compressor(args),
        Command::TrainRanker(args) => train_ranker_cmd(args),
        Command::TrainLm(args) => train_lm_cmd(args),
        Command::Summarize(args) => summarize_cmd(args),
        Command::Compress(args) => compress_cmd(args),
        Command::Evaluate(args) => evaluate_cmd(args),
        Command::Tune(args) => tune_cmd(args),
    }
}

fn load_run_config(path: &Path) -> CliResult<RunConfig> {
    let (parsed, base) = config::parse(path).map_err(|e| CliError::usage(e.to_string()))?;
    Ok(parsed.into_run(&base)?)
}

fn train_options(l2: f64, max_iter: usize, tol: f64) -> CliResult<TrainOptions> {
    if l2 < 0.0 || !l2.is_finite() {
        return Err(CliError::usage(format!("--l2 must be >= 0, got {l2}")));
    }
    if max_iter == 0 {
        return Err(CliError::usage("--max-iter must be at least 1"));
    }
    if tol <= 0.0 {
        return Err(CliError::usage("--tol must be positive"));
    }
    Ok(TrainOptions { l2, max_iter, tol })
}

fn write_train_log(out: &Path, log: &sumtrim::learners::TrainLog) -> CliResult<()> {
    let mut log_path = out.as_os_str().to_owned();
    log_path.push(".log.json");
    let log_path = PathBuf::from(log_path);
    let json = serde_json::to_string_pretty(log).expect("train log serializes");
    std::fs::write(&log_path, json + "\n").map_err(|e| CoreError::io(&log_path, e))?;
    Ok(())
}

fn train_compressor(args: TrainCompressorArgs) -> CliResult<()> {
    let opts = train_options(args.l2, args.max_iter, args.tol)?;
    let corpus = load_compression_corpus(&args.corpus)?;
    if corpus.is_empty() {
        return Err(CliError::Data(anyhow::anyhow!(
            "compression corpus {} is empty",
            args.corpus.display()
        )));
    }
    match args.variant {
        CompressorKind::Maxent => {
            let examples = tree_examples(&corpus, args.search.into())?;
            let (model, log) = maxent_train(&examples, &opts)?;
            model.save(&args.out)?;
            write_train_log(&args.out, &log)?;
            log_event(
                "train-compressor",
                serde_json::json!({
                    "variant": "maxent",
                    "examples": examples.len(),
                    "iterations": log.iterations,
                    "converged": log.converged,
                }),
            );
        }
        CompressorKind::Crf => {
            let sequences = sequence_examples(&corpus);
            let (model, log) = crf_train(&sequences, &opts)?;
            model.save(&args.out)?;
            write_train_log(&args.out, &log)?;
            log_event(
                "train-compressor",
                serde_json::json!({
                    "variant": "crf",
                    "sequences": sequences.len(),
                    "iterations": log.iterations,
                    "converged": log.converged,
                }),
            );
        }
    }
    Ok(())
}

/// Load every topic directory under `root`; `root` itself may be a topic.
fn load_topics(root: &Path) -> CliResult<Vec<QueryTopic>> {
    if root.join("topic.json").is_file() {
        return Ok(vec![load_topic(root)?]);
    }
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(root)
        .map_err(|e| CoreError::io(root, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.join("topic.json").is_file())
        .collect();
    dirs.sort();
    if dirs.is_empty() {
        return Err(CliError::Data(anyhow::anyhow!(
            "no topics found under {}",
            root.display()
        )));
    }
    dirs.iter().map(|d| Ok(load_topic(d)?)).collect()
}

fn train_ranker_cmd(args: TrainRankerArgs) -> CliResult<()> {
    let topics = load_topics(&args.topics)?;
    let model = train_ranker(&topics)?;
    model.save(&args.out)?;
    log_event(
        "train-ranker",
        serde_json::json!({
            "topics": topics.len(),
            "features": model.features().len(),
        }),
    );
    Ok(())
}

fn train_lm_cmd(args: TrainLmArgs) -> CliResult<()> {
    if args.order < 1 {
        return Err(CliError::usage("--order must be at least 1"));
    }
    if !(args.discount > 0.0 && args.discount < 1.0) {
        return Err(CliError::usage("--discount must lie in (0, 1)"));
    }
    let text = std::fs::read_to_string(&args.corpus).map_err(|e| CoreError::io(&args.corpus, e))?;
    let corpus: Vec<Vec<String>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect();
    let model = lm_train(&corpus, args.order, args.discount)?;
    model.save(&args.out)?;
    log_event(
        "train-lm",
        serde_json::json!({
            "sentences": corpus.len(),
            "order": args.order,
            "vocab": model.vocab_size(),
        }),
    );
    Ok(())
}

fn summarize_cmd(args: SummarizeArgs) -> CliResult<()> {
    configure_jobs(args.jobs)?;
    let run = load_run_config(&args.config)?;
    let topics = load_topics(&args.topic)?;
    std::fs::create_dir_all(&args.out).map_err(|e| CoreError::io(&args.out, e))?;
    let results: Vec<(String, usize)> = topics
        .par_iter()
        .map(|topic| {
            let summary = summarize(topic, &run.pipeline, &run.models)?;
            let dir = args.out.join(&topic.topic_id);
            std::fs::create_dir_all(&dir).map_err(|e| CoreError::io(&dir, e))?;
            let text_path = dir.join("summary.txt");
            std::fs::write(&text_path, summary.text()).map_err(|e| CoreError::io(&text_path, e))?;
            let prov_path = dir.join("provenance.json");
            let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
            std::fs::write(&prov_path, json + "\n").map_err(|e| CoreError::io(&prov_path, e))?;
            Ok::<_, CoreError>((topic.topic_id.clone(), summary.word_count))
        })
        .collect::<Result<_, _>>()?;
    for (topic_id, words) in &results {
        log_event(
            "summarize",
            serde_json::json!({"topic": topic_id, "words": words}),
        );
    }
    Ok(())
}

fn compress_cmd(args: CompressArgs) -> CliResult<()> {
    let run = load_run_config(&args.config)?;
    let sentences = load_sentence_file(&args.sentence_file)?;
    let ctx = DecodeContext {
        lm: run.models.lm.as_ref(),
        maxent: run.models.maxent.as_ref(),
        ..Default::default()
    };
    for sentence in &sentences {
        let (kept, _) = compress_with(sentence, &run.pipeline, &run.models, &ctx)?;
        let words: Vec<&str> = kept
            .iter()
            .map(|&i| sentence.tokens[i].surface.as_str())
            .collect();
        println!("{}", words.join(" "));
    }
    log_event(
        "compress",
        serde_json::json!({"sentences": sentences.len()}),
    );
    Ok(())
}

#[derive(serde::Serialize)]
struct TopicReport {
    topic_id: String,
    c_rate: Option<f64>,
    rouge_2: PrfScores,
    rouge_su4: PrfScores,
}

#[derive(serde::Serialize)]
struct EvalReport {
    topics: Vec<TopicReport>,
    mean_rouge_2: PrfScores,
    mean_rouge_su4: PrfScores,
    mean_c_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    compression: Option<CompressionReport>,
}

#[derive(serde::Serialize)]
struct CompressionReport {
    examples: usize,
    c_rate: f64,
    uni_precision: f64,
    uni_recall: f64,
    uni_f1: f64,
}

fn lower_tokens(text: &str) -> Vec<String> {
    text.split_whitespace().map(|w| w.to_lowercase()).collect()
}

/// Find summary files: either `<topic>.txt` or `<topic>/summary.txt`.
fn find_summaries(dir: &Path) -> CliResult<Vec<(String, PathBuf, Option<PathBuf>)>> {
    let mut out = Vec::new();
    let entries = std::fs::read_dir(dir).map_err(|e| CoreError::io(dir, e))?;
    for entry in entries.filter_map(|e| e.ok()) {
        let path = entry.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
            let topic = path.file_stem().unwrap().to_string_lossy().into_owned();
            out.push((topic, path, None));
        } else if path.is_dir() && path.join("summary.txt").is_file() {
            let topic = path.file_name().unwrap().to_string_lossy().into_owned();
            let prov = path.join("provenance.json");
            out.push((
                topic,
                path.join("summary.txt"),
                prov.is_file().then_some(prov),
            ));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    if out.is_empty() {
        return Err(CliError::Data(anyhow::anyhow!(
            "no summaries found under {}",
            dir.display()
        )));
    }
    Ok(out)
}

fn load_references(dir: &Path, topic: &str) -> CliResult<Vec<Vec<String>>> {
    let topic_dir = dir.join(topic);
    let refs_dir = if topic_dir.join("abstracts").is_dir() {
        topic_dir.join("abstracts")
    } else {
        topic_dir
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(&refs_dir)
        .map_err(|e| CoreError::io(&refs_dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Data(anyhow::anyhow!(
            "no reference abstracts for topic {topic} under {}",
            dir.display()
        )));
    }
    files
        .iter()
        .map(|f| {
            let text = std::fs::read_to_string(f).map_err(|e| CoreError::io(f, e))?;
            Ok(lower_tokens(&text))
        })
        .collect()
}

fn mean_prf(scores: &[PrfScores]) -> PrfScores {
    let n = scores.len().max(1) as f64;
    PrfScores {
        precision: scores.iter().map(|s| s.precision).sum::<f64>() / n,
        recall: scores.iter().map(|s| s.recall).sum::<f64>() / n,
        f1: scores.iter().map(|s| s.f1).sum::<f64>() / n,
    }
}

fn evaluate_cmd(args: EvaluateArgs) -> CliResult<()> {
    if args.summaries.is_none() && args.compression_gold.is_none() {
        return Err(CliError::usage(
            "evaluate needs --summaries/--abstracts and/or --compression-gold",
        ));
    }

    let mut topics = Vec::new();
    if let Some(summaries_dir) = &args.summaries {
        let abstracts_dir = args
            .abstracts
            .as_ref()
            .ok_or_else(|| CliError::usage("--abstracts is required when --summaries is given"))?;
        for (topic_id, summary_path, provenance) in find_summaries(summaries_dir)? {
            let text = std::fs::read_to_string(&summary_path)
                .map_err(|e| CoreError::io(&summary_path, e))?;
            let candidate = lower_tokens(&text);
            let references = load_references(abstracts_dir, &topic_id)?;
            let rouge_2 = rouge_n(&candidate, &references, 2)?;
            let su4 = rouge_su4(&candidate, &references)?;
            let c_rate = match provenance {
                Some(path) => {
                    let raw =
                        std::fs::read_to_string(&path).map_err(|e| CoreError::io(&path, e))?;
                    let summary: Summary = serde_json::from_str(&raw)
                        .map_err(|e| CoreError::format(&path, e.line(), e.to_string()))?;
                    let kept: usize = summary.sentences.iter().map(|s| s.kept.len()).sum();
                    let source: usize = summary.sentences.iter().map(|s| s.source_tokens).sum();
                    (source > 0).then(|| kept as f64 / source as f64)
                }
                None => None,
            };
            topics.push(TopicReport {
                topic_id,
                c_rate,
                rouge_2,
                rouge_su4: su4,
            });
        }
    }

    let compression = match (&args.compression_gold, &args.config) {
        (Some(gold), Some(config)) => {
            let run = load_run_config(config)?;
            let corpus = load_compression_corpus(gold)?;
            if corpus.is_empty() {
                return Err(CliError::Data(anyhow::anyhow!(
                    "compression gold {} is empty",
                    gold.display()
                )));
            }
            let ctx = DecodeContext {
                lm: run.models.lm.as_ref(),
                maxent: run.models.maxent.as_ref(),
                ..Default::default()
            };
            let mut scores = Vec::new();
            for example in &corpus {
                let (kept, _) = compress_with(&example.sentence, &run.pipeline, &run.models, &ctx)?;
                scores.push(compression_metrics(&kept, &example.keep_mask)?);
            }
            let n = scores.len() as f64;
            Some(CompressionReport {
                examples: scores.len(),
                c_rate: scores.iter().map(|s| s.c_rate).sum::<f64>() / n,
                uni_precision: scores.iter().map(|s| s.uni_precision).sum::<f64>() / n,
                uni_recall: scores.iter().map(|s| s.uni_recall).sum::<f64>() / n,
                uni_f1: scores.iter().map(|s| s.uni_f1).sum::<f64>() / n,
            })
        }
        (Some(_), None) => {
            return Err(CliError::usage(
                "--config is required with --compression-gold",
            ))
        }
        _ => None,
    };

    let with_rates: Vec<f64> = topics.iter().filter_map(|t| t.c_rate).collect();
    let report = EvalReport {
        mean_rouge_2: mean_prf(&topics.iter().map(|t| t.rouge_2).collect::<Vec<_>>()),
        mean_rouge_su4: mean_prf(&topics.iter().map(|t| t.rouge_su4).collect::<Vec<_>>()),
        mean_c_rate: (!with_rates.is_empty())
            .then(|| with_rates.iter().sum::<f64>() / with_rates.len() as f64),
        topics,
        compression,
    };

    // Plain-text table, ROUGE scores scaled by 100 as usually reported.
    if !report.topics.is_empty() {
        println!(
            "{:<16} {:>8} {:>8} {:>8}",
            "Topic", "C Rate", "R-2", "R-SU4"
        );
        for t in &report.topics {
            let c = t
                .c_rate
                .map(|c| format!("{:.2}%", c * 100.0))
                .unwrap_or_else(|| "--".into());
            println!(
                "{:<16} {:>8} {:>8.2} {:>8.2}",
                t.topic_id,
                c,
                t.rouge_2.recall * 100.0,
                t.rouge_su4.recall * 100.0
            );
        }
        let mean_c = report
            .mean_c_rate
            .map(|c| format!("{:.2}%", c * 100.0))
            .unwrap_or_else(|| "--".into());
        println!(
            "{:<16} {:>8} {:>8.2} {:>8.2}",
            "MEAN",
            mean_c,
            report.mean_rouge_2.recall * 100.0,
            report.mean_rouge_su4.recall * 100.0
        );
    }
    if let Some(c) = &report.compression {
        println!(
            "Compression ({} examples): C Rate {:.2}%  Uni-P {:.3}  Uni-R {:.3}  Uni-F1 {:.3}",
            c.examples,
            c.c_rate * 100.0,
            c.uni_precision,
            c.uni_recall,
            c.uni_f1
        );
    }

    let report_path = match &args.report {
        Some(p) => Some(p.clone()),
        None => args.summaries.as_ref().map(|s| s.join("report.json")),
    };
    if let Some(path) = report_path {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(&path, json + "\n").map_err(|e| CoreError::io(&path, e))?;
        log_event(
            "evaluate",
            serde_json::json!({"report": path.display().to_string()}),
        );
    }
    Ok(())
}

fn tune_cmd(args: TuneArgs) -> CliResult<()> {
    configure_jobs(args.jobs)?;
    if !(args.grid_step > 0.0 && args.grid_step <= 0.5) {
        return Err(CliError::usage(format!(
            "--grid-step must lie in (0, 0.5], got {}",
            args.grid_step
        )));
    }
    let run = load_run_config(&args.config)?;
    let topics = load_topics(&args.topics)?;
    let outcome = tune_alpha(&topics, args.grid_step, &run.models, &run.pipeline)?;
    let json = serde_json::to_string_pretty(&outcome.weights).expect("weights serialize");
    std::fs::write(&args.out, json + "\n").map_err(|e| CoreError::io(&args.out, e))?;
    let mut log_path = args.out.as_os_str().to_owned();
    log_path.push(".log.json");
    let log_path = PathBuf::from(log_path);
    let log_json = serde_json::to_string_pretty(&outcome).expect("outcome serializes");
    std::fs::write(&log_path, log_json + "\n").map_err(|e| CoreError::io(&log_path, e))?;
    log_event(
        "tune",
        serde_json::json!({
            "evaluations": outcome.evaluations.len(),
            "alpha": outcome.weights.alpha.to_vec(),
        }),
    );
    Ok(())
}
