//! Black-box tests of the binary: exit codes, file outputs, and the
//! documented command behaviors.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sumtrim::corpus::{save_compression_corpus, save_topic, CompressionExample};
use sumtrim::scorers::ScorerWeights;
use sumtrim_testsupport::{
    compression_corpus_from_topics, standard_models, synthetic_topic, synthetic_topics,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sumtrim"))
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("process exited")
}

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Workspace {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write_topics(&self, n: usize) -> PathBuf {
        let root = self.path("topics");
        for topic in synthetic_topics(n) {
            save_topic(&topic, root.join(&topic.topic_id)).unwrap();
        }
        root
    }

    fn write_corpus(&self, name: &str) -> PathBuf {
        let corpus = compression_corpus_from_topics(&synthetic_topics(1));
        let path = self.path(name);
        save_compression_corpus(&corpus, &path).unwrap();
        path
    }

    /// Train and save the full model set, returning a ready config path.
    fn write_models_and_config(&self, body_extra: serde_json::Value) -> PathBuf {
        let topics = synthetic_topics(2);
        let models = standard_models(&topics);
        models
            .ranker
            .as_ref()
            .unwrap()
            .save(self.path("ranker.json"))
            .unwrap();
        models
            .maxent
            .as_ref()
            .unwrap()
            .save(self.path("maxent.json"))
            .unwrap();
        models
            .crf
            .as_ref()
            .unwrap()
            .save(self.path("crf.json"))
            .unwrap();
        models
            .lm
            .as_ref()
            .unwrap()
            .save(self.path("lm.model"))
            .unwrap();
        std::fs::write(
            self.path("weights.json"),
            serde_json::to_string_pretty(&ScorerWeights::default()).unwrap(),
        )
        .unwrap();
        let mut body = serde_json::json!({
            "variant": "extractive",
            "scorer": "basic",
            "beam": 16,
            "budget": 250,
            "ranker_model": "ranker.json",
            "maxent_model": "maxent.json",
            "crf_model": "crf.json",
            "lm_model": "lm.model",
            "weights": "weights.json",
        });
        if let (Some(map), Some(extra)) = (body.as_object_mut(), body_extra.as_object()) {
            for (k, v) in extra {
                map.insert(k.clone(), v.clone());
            }
        }
        let config = self.path("config.json");
        std::fs::write(&config, serde_json::to_string_pretty(&body).unwrap()).unwrap();
        config
    }
}

#[test]
fn train_compressor_writes_model_and_log() {
    let ws = Workspace::new();
    let corpus = ws.write_corpus("corpus.jsonl");
    for (variant, out) in [("maxent", "m.json"), ("crf", "c.json")] {
        let output = bin()
            .args(["train-compressor", "--variant", variant])
            .arg("--corpus")
            .arg(&corpus)
            .arg("--out")
            .arg(ws.path(out))
            .args(["--max-iter", "40"])
            .output()
            .unwrap();
        assert_eq!(
            code(&output),
            0,
            "{}",
            String::from_utf8_lossy(&output.stderr)
        );
        assert!(ws.path(out).is_file());
        let log_path = ws.path(&format!("{out}.log.json"));
        let log: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(log_path).unwrap()).unwrap();
        // Objective trace is present and non-decreasing.
        let objective = log["objective"].as_array().unwrap();
        assert!(!objective.is_empty());
        let values: Vec<f64> = objective.iter().map(|v| v.as_f64().unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn train_compressor_error_paths() {
    let ws = Workspace::new();
    // Missing corpus file: data error.
    let output = bin()
        .args(["train-compressor", "--variant", "maxent"])
        .arg("--corpus")
        .arg(ws.path("missing.jsonl"))
        .arg("--out")
        .arg(ws.path("m.json"))
        .output()
        .unwrap();
    assert_eq!(code(&output), 2);

    // Negative regularization: usage error.
    let corpus = ws.write_corpus("corpus.jsonl");
    let output = bin()
        .args(["train-compressor", "--variant", "maxent", "--l2", "-1"])
        .arg("--corpus")
        .arg(&corpus)
        .arg("--out")
        .arg(ws.path("m.json"))
        .output()
        .unwrap();
    assert_eq!(code(&output), 64);
}

#[test]
fn train_ranker_fixture_and_errors() {
    let ws = Workspace::new();
    let topics = ws.write_topics(3);
    let output = bin()
        .arg("train-ranker")
        .arg("--topics")
        .arg(&topics)
        .arg("--out")
        .arg(ws.path("ranker.json"))
        .output()
        .unwrap();
    assert_eq!(
        code(&output),
        0,
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(ws.path("ranker.json").is_file());

    // Topics without abstracts: data error.
    let bare = ws.path("bare");
    let mut topic = synthetic_topic(9, "bare-topic", 1, 2);
    topic.abstracts.clear();
    save_topic(&topic, bare.join("bare-topic")).unwrap();
    let output = bin()
        .arg("train-ranker")
        .arg("--topics")
        .arg(&bare)
        .arg("--out")
        .arg(ws.path("r2.json"))
        .output()
        .unwrap();
    assert_eq!(code(&output), 2);

    // Empty directory: data error.
    let empty = ws.path("empty");
    std::fs::create_dir_all(&empty).unwrap();
    let output = bin()
        .arg("train-ranker")
        .arg("--topics")
        .arg(&empty)
        .arg("--out")
        .arg(ws.path("r3.json"))
        .output()
        .unwrap();
    assert_eq!(code(&output), 2);
}

#[test]
fn summarize_extractive_is_verbatim() {
    let ws = Workspace::new();
    let topics_dir = ws.write_topics(1);
    let config = ws.write_models_and_config(serde_json::json!({}));
    let out = ws.path("out");
    let output = bin()
        .arg("summarize")
        .arg("--topic")
        .arg(topics_dir.join("t00"))
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(
        code(&output),
        0,
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let summary = std::fs::read_to_string(out.join("t00/summary.txt")).unwrap();
    // Every summary line is a verbatim sentence of the topic.
    let topic = synthetic_topics(1).remove(0);
    let originals: Vec<String> = topic
        .sentences()
        .map(|s| {
            s.tokens
                .iter()
                .map(|t| t.surface.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    for line in summary.lines() {
        assert!(originals.iter().any(|o| o == line), "not verbatim: {line}");
    }
}

#[test]
fn summarize_rejects_unknown_variant_as_usage_error() {
    let ws = Workspace::new();
    let topics_dir = ws.write_topics(1);
    let config = ws.path("bad.json");
    std::fs::write(
        &config,
        serde_json::json!({"variant": "tree-fancy", "scorer": "basic"}).to_string(),
    )
    .unwrap();
    let output = bin()
        .arg("summarize")
        .arg("--topic")
        .arg(topics_dir.join("t00"))
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(ws.path("out"))
        .output()
        .unwrap();
    assert_eq!(code(&output), 64);
}

#[test]
fn summarize_missing_model_is_config_error() {
    let ws = Workspace::new();
    let topics_dir = ws.write_topics(1);
    let config = ws.path("partial.json");
    // Tree variant without a MaxEnt or LM model.
    std::fs::write(
        &config,
        serde_json::json!({"variant": "tree-basic", "scorer": "basic"}).to_string(),
    )
    .unwrap();
    let output = bin()
        .arg("summarize")
        .arg("--topic")
        .arg(topics_dir.join("t00"))
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(ws.path("out"))
        .output()
        .unwrap();
    assert_eq!(code(&output), 2);
    assert!(String::from_utf8_lossy(&output.stderr).contains("required"));
}

#[test]
fn compress_empty_input_gives_empty_output() {
    let ws = Workspace::new();
    let config = ws.write_models_and_config(serde_json::json!({"variant": "rule"}));
    let input = ws.path("empty.jsonl");
    std::fs::write(&input, "").unwrap();
    let output = bin()
        .arg("compress")
        .arg("--sentence-file")
        .arg(&input)
        .arg("--config")
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(code(&output), 0);
    assert!(output.stdout.is_empty());
}

#[test]
fn compress_reports_line_of_malformed_tree() {
    let ws = Workspace::new();
    let config = ws.write_models_and_config(serde_json::json!({"variant": "rule"}));
    let input = ws.path("bad.jsonl");
    let good =
        r#"{"tokens":[{"surface":"a","pos":"DT","dep_head":-1,"dep_rel":"root"}],"tree":"(DT a)"}"#;
    let bad =
        r#"{"tokens":[{"surface":"a","pos":"DT","dep_head":-1,"dep_rel":"root"}],"tree":"(DT (a"}"#;
    std::fs::write(&input, format!("{good}\n{bad}\n")).unwrap();
    let output = bin()
        .arg("compress")
        .arg("--sentence-file")
        .arg(&input)
        .arg("--config")
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("bad.jsonl:2"), "stderr: {stderr}");
}

#[test]
fn evaluate_identical_summary_scores_one() {
    let ws = Workspace::new();
    let summaries = ws.path("summaries");
    let abstracts = ws.path("abstracts");
    std::fs::create_dir_all(&summaries).unwrap();
    std::fs::create_dir_all(abstracts.join("t1")).unwrap();
    let text = "the embassy bombing was condemned in nairobi\n";
    std::fs::write(summaries.join("t1.txt"), text).unwrap();
    std::fs::write(abstracts.join("t1/ref0.txt"), text).unwrap();
    let report = ws.path("report.json");
    let output = bin()
        .arg("evaluate")
        .arg("--summaries")
        .arg(&summaries)
        .arg("--abstracts")
        .arg(&abstracts)
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(
        code(&output),
        0,
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("Topic"), "table header missing: {stdout}");
    assert!(stdout.contains("R-SU4"));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed["mean_rouge_2"]["recall"].as_f64().unwrap(), 1.0);
    assert_eq!(parsed["mean_rouge_su4"]["recall"].as_f64().unwrap(), 1.0);
}

#[test]
fn evaluate_missing_references_is_data_error() {
    let ws = Workspace::new();
    let summaries = ws.path("summaries");
    std::fs::create_dir_all(&summaries).unwrap();
    std::fs::write(summaries.join("t1.txt"), "some text\n").unwrap();
    let abstracts = ws.path("abstracts");
    std::fs::create_dir_all(&abstracts).unwrap();
    let output = bin()
        .arg("evaluate")
        .arg("--summaries")
        .arg(&summaries)
        .arg("--abstracts")
        .arg(&abstracts)
        .output()
        .unwrap();
    assert_eq!(code(&output), 2);
}

#[test]
fn evaluate_compression_gold_reports_metrics() {
    let ws = Workspace::new();
    let config = ws.write_models_and_config(serde_json::json!({"variant": "sequence"}));
    let gold = ws.write_corpus("gold.jsonl");
    let output = bin()
        .arg("evaluate")
        .arg("--compression-gold")
        .arg(&gold)
        .arg("--config")
        .arg(&config)
        .arg("--report")
        .arg(ws.path("report.json"))
        .output()
        .unwrap();
    assert_eq!(
        code(&output),
        0,
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("Uni-F1"), "{stdout}");
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(ws.path("report.json")).unwrap()).unwrap();
    let f1 = parsed["compression"]["uni_f1"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&f1));
}

#[test]
fn tune_logs_grid_size_and_writes_weights() {
    let ws = Workspace::new();
    let topics_dir = ws.write_topics(1);
    let config = ws.write_models_and_config(serde_json::json!({
        "variant": "tree-basic",
        "scorer": "multi",
        "beam": 4,
        "budget": 30,
    }));
    let out = ws.path("tuned.json");
    let output = bin()
        .arg("tune")
        .arg("--topics")
        .arg(&topics_dir)
        .args(["--grid-step", "0.5"])
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(
        code(&output),
        0,
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("\"evaluations\":243"), "stderr: {stderr}");
    let weights: ScorerWeights =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    weights.validate().unwrap();

    // Out-of-range grid step is a usage error.
    let output = bin()
        .arg("tune")
        .arg("--topics")
        .arg(&topics_dir)
        .args(["--grid-step", "0.7"])
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(ws.path("t2.json"))
        .output()
        .unwrap();
    assert_eq!(code(&output), 64);
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let ws = Workspace::new();
    let corpus = ws.write_corpus("corpus.jsonl");
    let run = |out: &Path| {
        let output = bin()
            .args(["train-compressor", "--variant", "crf", "--max-iter", "30"])
            .arg("--corpus")
            .arg(&corpus)
            .arg("--out")
            .arg(out)
            .output()
            .unwrap();
        assert_eq!(code(&output), 0);
    };
    run(&ws.path("a.json"));
    run(&ws.path("b.json"));
    assert_eq!(
        std::fs::read(ws.path("a.json")).unwrap(),
        std::fs::read(ws.path("b.json")).unwrap()
    );
}

// One unused helper guard so the compression example type stays exercised
// from this crate too.
#[test]
fn corpus_types_round_trip_through_files() {
    let ws = Workspace::new();
    let examples: Vec<CompressionExample> = compression_corpus_from_topics(&synthetic_topics(1));
    let path = ws.path("roundtrip.jsonl");
    save_compression_corpus(&examples, &path).unwrap();
    let loaded = sumtrim::corpus::load_compression_corpus(&path).unwrap();
    assert_eq!(loaded.len(), examples.len());
}
