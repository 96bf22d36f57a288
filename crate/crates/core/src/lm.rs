//! Backoff n-gram language model used for N-best re-ranking and the
//! language-model component score.
//!
//! Smoothing is stupid backoff with a fixed backoff factor: scores are
//! relative frequencies, NOT normalized probabilities. That is fine here
//! because every consumer only compares scores of alternative strings.
//! Unseen words bottom out at a uniform `1/(V+1)` floor.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";

#[derive(Debug, Clone)]
pub struct NGramModel {
    order: usize,
    discount: f64,
    /// `counts[k-1]` maps k-grams (space-joined) to counts.
    counts: Vec<HashMap<String, u64>>,
    /// `context_totals[k-1]` maps (k-1)-gram contexts to the total count of
    /// their continuations.
    context_totals: Vec<HashMap<String, u64>>,
    /// Word types seen in training, boundary markers excluded.
    vocab: HashSet<String>,
}

fn join(tokens: &[&str]) -> String {
    tokens.join(" ")
}

/// Train a stupid-backoff model of the given order on tokenized sentences.
pub fn lm_train(corpus: &[Vec<String>], order: usize, discount: f64) -> Result<NGramModel> {
    if corpus.is_empty() {
        return Err(Error::validation("language model corpus is empty"));
    }
    if order < 1 {
        return Err(Error::validation("order must be at least 1"));
    }
    if !(discount > 0.0 && discount < 1.0) {
        return Err(Error::validation(format!(
            "discount must lie in (0, 1), got {discount}"
        )));
    }
    let mut model = NGramModel {
        order,
        discount,
        counts: vec![HashMap::new(); order],
        context_totals: vec![HashMap::new(); order],
        vocab: HashSet::new(),
    };
    for sentence in corpus {
        for word in sentence {
            model.vocab.insert(word.clone());
        }
        let mut padded: Vec<&str> = vec![BOS; order - 1];
        padded.reserve(sentence.len() + 1);
        padded.extend(sentence.iter().map(String::as_str));
        padded.push(EOS);
        let first_target = order - 1;
        for t in first_target..padded.len() {
            for k in 1..=order {
                let start = t + 1 - k;
                let gram = join(&padded[start..=t]);
                let context = join(&padded[start..t]);
                *model.counts[k - 1].entry(gram).or_insert(0) += 1;
                *model.context_totals[k - 1].entry(context).or_insert(0) += 1;
            }
        }
    }
    Ok(model)
}

impl NGramModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn discount(&self) -> f64 {
        self.discount
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    /// Stupid-backoff score of `word` after `context` (most recent last).
    /// Always in (0, 1].
    pub fn score(&self, context: &[&str], word: &str) -> f64 {
        let usable = context.len().min(self.order - 1);
        let context = &context[context.len() - usable..];
        let mut factor = 1.0;
        for k in (1..=usable + 1).rev() {
            let ctx = join(&context[context.len() + 1 - k..]);
            let mut gram = ctx.clone();
            if !gram.is_empty() {
                gram.push(' ');
            }
            gram.push_str(word);
            if let (Some(&c), Some(&total)) = (
                self.counts[k - 1].get(&gram),
                self.context_totals[k - 1].get(&ctx),
            ) {
                if c > 0 {
                    return factor * c as f64 / total as f64;
                }
            }
            factor *= self.discount;
        }
        // The unigram level ran dry: uniform out-of-vocabulary mass. The
        // last loop pass already multiplied the discount once.
        factor / self.discount * (1.0 / (self.vocab.len() as f64 + 1.0))
    }

    /// Natural-log score of a token sequence with boundary padding on both
    /// sides. Empty input scores 0 by convention.
    pub fn logprob(&self, words: &[String]) -> f64 {
        if words.is_empty() {
            return 0.0;
        }
        let mut padded: Vec<&str> = vec![BOS; self.order - 1];
        padded.reserve(words.len() + 1);
        padded.extend(words.iter().map(String::as_str));
        padded.push(EOS);
        let first_target = self.order - 1;
        let mut total = 0.0;
        for t in first_target..padded.len() {
            let context = &padded[..t];
            total += self.score(context, padded[t]).ln();
        }
        total
    }

    /// Length-normalized log score: `logprob / max(1, token count)`.
    pub fn per_word(&self, words: &[String]) -> f64 {
        self.logprob(words) / words.len().max(1) as f64
    }

    /// Text serialization: header lines, then per order a section of sorted
    /// `ngram<TAB>count` lines. Counts are integers, so reloading reproduces
    /// every score exactly.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::from("sumtrim-ngram 1\n");
        out.push_str(&format!("order\t{}\n", self.order));
        out.push_str(&format!("discount\t{}\n", self.discount));
        for k in 1..=self.order {
            out.push_str(&format!("[{k}-grams]\n"));
            let sorted: BTreeMap<&String, &u64> = self.counts[k - 1].iter().collect();
            for (gram, count) in sorted {
                out.push_str(gram);
                out.push('\t');
                out.push_str(&count.to_string());
                out.push('\n');
            }
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<NGramModel> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text.lines().enumerate();
        let fail = |line: usize, msg: &str| Error::format(path, line + 1, msg);
        match lines.next() {
            Some((_, "sumtrim-ngram 1")) => {}
            _ => return Err(fail(0, "not a sumtrim-ngram v1 file")),
        }
        let order: usize = match lines.next() {
            Some((i, line)) => line
                .strip_prefix("order\t")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| fail(i, "bad order line"))?,
            None => return Err(fail(1, "missing order line")),
        };
        let discount: f64 = match lines.next() {
            Some((i, line)) => line
                .strip_prefix("discount\t")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| fail(i, "bad discount line"))?,
            None => return Err(fail(2, "missing discount line")),
        };
        if order < 1 {
            return Err(fail(1, "order must be at least 1"));
        }
        let mut counts = vec![HashMap::new(); order];
        let mut current: Option<usize> = None;
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let k: usize = rest
                    .strip_suffix("-grams]")
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| fail(i, "bad section header"))?;
                if k < 1 || k > order {
                    return Err(fail(i, "section order out of range"));
                }
                current = Some(k);
                continue;
            }
            let k = current.ok_or_else(|| fail(i, "entry before any section"))?;
            let (gram, count) = line
                .rsplit_once('\t')
                .ok_or_else(|| fail(i, "expected ngram<TAB>count"))?;
            let count: u64 = count.parse().map_err(|_| fail(i, "bad count"))?;
            let words: Vec<&str> = gram.split(' ').collect();
            if words.len() != k {
                return Err(fail(i, "ngram arity does not match its section"));
            }
            counts[k - 1].insert(gram.to_string(), count);
        }
        // Rebuild derived tables.
        let mut context_totals = vec![HashMap::new(); order];
        for k in 1..=order {
            for (gram, &count) in &counts[k - 1] {
                let context = match gram.rsplit_once(' ') {
                    Some((ctx, _)) => ctx.to_string(),
                    None => String::new(),
                };
                *context_totals[k - 1].entry(context).or_insert(0) += count;
            }
        }
        let vocab = counts[0]
            .keys()
            .filter(|w| w.as_str() != BOS && w.as_str() != EOS)
            .cloned()
            .collect();
        Ok(NGramModel {
            order,
            discount,
            counts,
            context_totals,
            vocab,
        })
    }
}
