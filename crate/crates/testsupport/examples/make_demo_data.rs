//! Write a small synthetic dataset for trying the CLI: topic directories,
//! a token-mask compression corpus, and a plain-text LM corpus.
//!
//! Usage: cargo run -p sumtrim-testsupport --example make_demo_data -- <outdir>

use std::path::PathBuf;

fn main() {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .expect("usage: make_demo_data <outdir>");
    let topics = sumtrim_testsupport::synthetic_topics(4);
    for topic in &topics {
        sumtrim::corpus::save_topic(topic, out.join("topics").join(&topic.topic_id)).unwrap();
    }
    let corpus = sumtrim_testsupport::compression_corpus_from_topics(&topics);
    sumtrim::corpus::save_compression_corpus(&corpus, out.join("corpus.jsonl")).unwrap();
    // LM corpus from the gold compressions, so re-ranking prefers trimmed
    // realizations over the originals.
    let mut lm_lines = String::new();
    for example in &corpus {
        let words: Vec<&str> = example
            .kept_indices()
            .into_iter()
            .map(|i| example.sentence.tokens[i].surface.as_str())
            .collect();
        lm_lines.push_str(&words.join(" "));
        lm_lines.push('\n');
    }
    std::fs::write(out.join("sentences.txt"), lm_lines).unwrap();
    eprintln!(
        "wrote {} topics, {} compression examples under {}",
        topics.len(),
        corpus.len(),
        out.display()
    );
}
