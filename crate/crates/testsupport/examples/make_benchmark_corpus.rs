//! Write a synthetic token-mask corpus shaped like the written-compression
//! benchmark split (1188 training + 441 test examples) for harness dry-runs.
//!
//! Usage: cargo run -p sumtrim-testsupport --example make_benchmark_corpus -- <out.jsonl>

use sumtrim_testsupport::{synthetic_topic, compression_corpus_from_topics};

fn main() {
    let out = std::env::args().nth(1).expect("usage: make_benchmark_corpus <out.jsonl>");
    let mut examples = Vec::new();
    let mut seed = 0u64;
    while examples.len() < 1629 {
        seed += 1;
        let topic = synthetic_topic(seed, &format!("bench{seed}"), 2, 6);
        examples.extend(compression_corpus_from_topics(&[topic]));
    }
    examples.truncate(1629);
    sumtrim::corpus::save_compression_corpus(&examples, &out).unwrap();
    eprintln!("wrote {} examples to {out}", examples.len());
}
