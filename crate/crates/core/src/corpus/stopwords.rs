//! Shipped word lists: English stopwords and query instruction words.

use std::collections::BTreeSet;
use std::sync::OnceLock;

fn parse_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

/// The fixed English stopword list.
pub fn stopwords() -> &'static BTreeSet<String> {
    static LIST: OnceLock<BTreeSet<String>> = OnceLock::new();
    LIST.get_or_init(|| parse_list(include_str!("../../data/stopwords.txt")))
}

/// Instruction words removed from query text in addition to stopwords.
pub fn query_instruction_words() -> &'static BTreeSet<String> {
    static LIST: OnceLock<BTreeSet<String>> = OnceLock::new();
    LIST.get_or_init(|| parse_list(include_str!("../../data/query_stopwords.txt")))
}

/// Stopword test on a raw surface form (case-insensitive).
pub fn is_stopword(surface: &str) -> bool {
    stopwords().contains(&surface.to_lowercase())
}
