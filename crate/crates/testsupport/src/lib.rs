//! Synthetic fixtures shared by the sumtrim test suites: annotated-sentence
//! builders, the rule-compression example sentences, the PP-deletion corpus
//! behind the end-to-end compression test, topic generators, and small
//! deterministic random generators for the oracle suites.

use sumtrim::corpus::ptb::parse_ptb;
use sumtrim::corpus::stopwords::is_stopword;
use sumtrim::corpus::{AnnotatedSentence, CompressionExample, Document, QueryTopic, Token};
use sumtrim::learners::{ContextVariant, MaxEntModel};
use sumtrim::rules::RuleId;
use sumtrim::tree::{default_head_rules, NodeLabel, ParseTree};

/// SplitMix64: tiny deterministic generator for fixture construction.
#[derive(Debug, Clone)]
pub struct DetRng(u64);

impl DetRng {
    pub fn new(seed: u64) -> DetRng {
        DetRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[lo, hi)`.
    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.unit() * (hi - lo)
    }
}

/// Build a validated sentence from a bracketed tree (leaves carry POS and
/// surface) and per-token `(dep_head, dep_rel)` pairs. Lemmas default to the
/// lowercased surface.
pub fn sentence(tree_src: &str, deps: &[(i32, &str)]) -> AnnotatedSentence {
    sentence_in_doc("doc", 0, None, tree_src, deps)
}

pub fn sentence_in_doc(
    doc_id: &str,
    position: usize,
    timestamp: Option<&str>,
    tree_src: &str,
    deps: &[(i32, &str)],
) -> AnnotatedSentence {
    let mut tree = parse_ptb(tree_src).expect("fixture tree parses");
    tree.resolve_heads(default_head_rules());
    assert_eq!(
        tree.leaf_count(),
        deps.len(),
        "fixture dep count mismatch for {tree_src}"
    );
    let tokens: Vec<Token> = tree
        .leaves()
        .iter()
        .zip(deps.iter())
        .map(|(&leaf, &(head, rel))| {
            let node = tree.node(leaf);
            let surface = node.word.clone().unwrap();
            let lemma = surface.to_lowercase();
            Token {
                is_stopword: is_stopword(&surface),
                surface,
                lemma,
                pos: node.label.clone(),
                dep_head: head,
                dep_rel: rel.to_string(),
            }
        })
        .collect();
    let s = AnnotatedSentence {
        tokens,
        tree,
        doc_id: doc_id.to_string(),
        position,
        timestamp: timestamp.map(str::to_string),
    };
    s.validate().expect("fixture sentence validates");
    s
}

// ---------------------------------------------------------------------------
// Rule-compression example sentences
// ---------------------------------------------------------------------------

pub struct RuleFixture {
    pub name: &'static str,
    pub rule: RuleId,
    pub sentence: AnnotatedSentence,
    pub is_lead: bool,
    /// Exact union of token spans the rules must delete.
    pub removed: Vec<(usize, usize)>,
}

/// The eight rule families, each with a fully annotated example sentence and
/// the exact spans a correct matcher deletes.
pub fn rule_fixtures() -> Vec<RuleFixture> {
    vec![
        RuleFixture {
            name: "header",
            rule: RuleId::Header,
            sentence: sentence(
                "(S (FRAG (NP (NNP MOSCOW)) (, ,) (NP (NNP October) (CD 19)) \
                 (PRN (-LRB- -LRB-) (NP (NNP Xinhua)) (-RRB- -RRB-)) (: --)) \
                 (NP (JJ Russian) (JJ federal) (NNS troops)) (NP (NNP Tuesday)) \
                 (VP (VBD continued) (NP (NN shelling))) (. .))",
                &[
                    (12, "dep"),
                    (0, "punct"),
                    (0, "dep"),
                    (2, "num"),
                    (5, "punct"),
                    (0, "dep"),
                    (5, "punct"),
                    (12, "punct"),
                    (10, "amod"),
                    (10, "amod"),
                    (12, "nsubj"),
                    (12, "nmod"),
                    (-1, "root"),
                    (12, "dobj"),
                    (12, "punct"),
                ],
            ),
            is_lead: true,
            removed: vec![(0, 8)],
        },
        RuleFixture {
            name: "relative_date",
            rule: RuleId::RelativeDate,
            sentence: sentence(
                "(S (NP (NP (DT The) (NNPS Centers)) (PP (IN for) (NP (NNP Disease) \
                 (NNP Control)))) (VP (VBD confirmed) (NP (NNP Tuesday)) (SBAR (IN that) \
                 (S (NP (EX there)) (VP (VBD was) (NP (DT a) (NN flu) (NN case)))))) (. .))",
                &[
                    (1, "det"),
                    (5, "nsubj"),
                    (4, "case"),
                    (4, "compound"),
                    (1, "nmod"),
                    (-1, "root"),
                    (5, "npadvmod"),
                    (9, "mark"),
                    (9, "expl"),
                    (5, "ccomp"),
                    (12, "det"),
                    (12, "compound"),
                    (9, "nsubj"),
                    (5, "punct"),
                ],
            ),
            is_lead: false,
            removed: vec![(6, 7)],
        },
        RuleFixture {
            name: "attribution",
            rule: RuleId::Attribution,
            sentence: sentence(
                "(S (S (NP (NNP La) (NNP Nina)) (VP (VBZ is) (VP (VBG fueling) \
                 (NP (DT the) (NN weather) (NN phenomenon))))) (, ,) \
                 (NP (DT the) (NNP U.N.) (NN weather) (NN agency)) (VP (VBD said)) (. .))",
                &[
                    (1, "compound"),
                    (3, "nsubj"),
                    (3, "aux"),
                    (12, "ccomp"),
                    (6, "det"),
                    (6, "compound"),
                    (3, "dobj"),
                    (12, "punct"),
                    (11, "det"),
                    (11, "compound"),
                    (11, "compound"),
                    (12, "nsubj"),
                    (-1, "root"),
                    (12, "punct"),
                ],
            ),
            is_lead: false,
            removed: vec![(7, 13)],
        },
        RuleFixture {
            name: "lead_adverbial",
            rule: RuleId::LeadAdverbial,
            sentence: sentence(
                "(S (ADVP (RB Interestingly)) (, ,) (SBAR (IN while) (S (NP (DT the) \
                 (NNPS Democrats)) (VP (VBP tend) (S (VP (TO to) (VP (VB talk) \
                 (PP (IN about) (NP (PRP it))))))))) (, ,) (NP (DT the) (NNPS Republicans)) \
                 (VP (VBP do) (RB not)) (. .))",
                &[
                    (13, "advmod"),
                    (13, "punct"),
                    (5, "mark"),
                    (4, "det"),
                    (5, "nsubj"),
                    (13, "advcl"),
                    (7, "mark"),
                    (5, "xcomp"),
                    (9, "case"),
                    (7, "nmod"),
                    (13, "punct"),
                    (12, "det"),
                    (13, "nsubj"),
                    (-1, "root"),
                    (13, "neg"),
                    (13, "punct"),
                ],
            ),
            is_lead: false,
            removed: vec![(0, 1)],
        },
        RuleFixture {
            name: "noun_appositive",
            rule: RuleId::NounAppositive,
            sentence: sentence(
                "(S (NP (NP (NNP Wayne) (NNP County) (NNP Prosecutor)) \
                 (NP (NNP John) (NNP O'Hara))) (VP (VBD wanted) (S (VP (TO to) \
                 (VP (VB send) (NP (DT a) (NN message)))))) (. .))",
                &[
                    (2, "compound"),
                    (2, "compound"),
                    (5, "nsubj"),
                    (4, "compound"),
                    (2, "appos"),
                    (-1, "root"),
                    (7, "mark"),
                    (5, "xcomp"),
                    (9, "det"),
                    (7, "dobj"),
                    (5, "punct"),
                ],
            ),
            is_lead: false,
            removed: vec![(3, 5)],
        },
        RuleFixture {
            name: "nonrestrictive_relcl",
            rule: RuleId::NonrestrictiveRelcl,
            sentence: sentence(
                "(S (NP (NP (NNP Putin)) (, ,) (SBAR (WHNP (WP who)) (S (VP (VBD was) \
                 (VP (VBN born) (PP (IN on) (NP (NP (NNP October) (CD 7)) (, ,) \
                 (NP (CD 1952)))) (PP (IN in) (NP (NNP Leningrad))))))) (, ,)) \
                 (VP (VBD was) (VP (VBN elected) (PP (IN in) (NP (DT the) \
                 (JJ presidential) (NN election))))) (. .))",
                &[
                    (14, "nsubjpass"),
                    (0, "punct"),
                    (4, "nsubjpass"),
                    (4, "auxpass"),
                    (0, "acl:relcl"),
                    (6, "case"),
                    (4, "nmod"),
                    (6, "num"),
                    (6, "punct"),
                    (6, "appos"),
                    (11, "case"),
                    (4, "nmod"),
                    (0, "punct"),
                    (14, "auxpass"),
                    (-1, "root"),
                    (18, "case"),
                    (18, "det"),
                    (18, "amod"),
                    (14, "nmod"),
                    (14, "punct"),
                ],
            ),
            is_lead: false,
            removed: vec![(2, 12)],
        },
        RuleFixture {
            name: "adverbial_clause_lead_starting",
            rule: RuleId::AdverbialClauseLead,
            sentence: sentence(
                "(S (S (VP (VBG Starting) (PP (IN in) (NP (CD 1998))))) (, ,) \
                 (NP (NNP California)) (VP (MD will) (VP (VB require) \
                 (NP (JJ electric) (NNS fleets)))) (. .))",
                &[
                    (6, "advcl"),
                    (2, "case"),
                    (0, "nmod"),
                    (6, "punct"),
                    (6, "nsubj"),
                    (6, "aux"),
                    (-1, "root"),
                    (8, "amod"),
                    (6, "dobj"),
                    (6, "punct"),
                ],
            ),
            is_lead: true,
            removed: vec![(0, 3)],
        },
        RuleFixture {
            name: "adverbial_clause_lead_given",
            rule: RuleId::AdverbialClauseLead,
            sentence: sentence(
                "(S (S (VP (VBN Given) (NP (DT the) (JJ short) (NN time)))) (, ,) \
                 (NP (NN car) (NNS makers)) (VP (VBP see) (NP (JJ electric) (NNS vehicles)) \
                 (PP (IN as) (NP (DT a) (NN gamble)))) (. .))",
                &[
                    (7, "advcl"),
                    (3, "det"),
                    (3, "amod"),
                    (0, "dobj"),
                    (7, "punct"),
                    (6, "compound"),
                    (7, "nsubj"),
                    (-1, "root"),
                    (9, "amod"),
                    (7, "dobj"),
                    (12, "case"),
                    (12, "det"),
                    (7, "nmod"),
                    (7, "punct"),
                ],
            ),
            is_lead: true,
            removed: vec![(0, 4)],
        },
        RuleFixture {
            name: "parenthetical",
            rule: RuleId::Parenthetical,
            sentence: sentence(
                "(S (NP (DT The) (NN company)) (VP (VBD sold) (NP (NNS computers)) \
                 (PP (TO to) (NP (JJ Christian) (NN home) (NNS schoolers))) \
                 (PP (IN in) (NP (DT the) (JJ early) (NNS 1990s))) \
                 (PRN (-LRB- -LRB-) (NP (NN www.homecomputermarket.com)) (-RRB- -RRB-))) (. .))",
                &[
                    (1, "det"),
                    (2, "nsubj"),
                    (-1, "root"),
                    (2, "dobj"),
                    (7, "case"),
                    (7, "amod"),
                    (7, "compound"),
                    (2, "nmod"),
                    (11, "case"),
                    (11, "det"),
                    (11, "amod"),
                    (2, "nmod"),
                    (13, "punct"),
                    (2, "dep"),
                    (13, "punct"),
                    (2, "punct"),
                ],
            ),
            is_lead: false,
            removed: vec![(12, 15)],
        },
    ]
}

// ---------------------------------------------------------------------------
// End-to-end compression fixture (subject-verb-object with a droppable PP)
// ---------------------------------------------------------------------------

const EX_SUBJECTS: [&str; 6] = ["Malaria", "Cholera", "Famine", "Smog", "Drought", "Ebola"];
const EX_VERBS: [&str; 5] = ["causes", "brings", "spreads", "creates", "yields"];
const EX_OBJECTS: [&str; 5] = ["deaths", "cases", "losses", "injuries", "crises"];
const EX_PLACES: [&str; 5] = ["countries", "regions", "cities", "villages", "areas"];

fn pp_sentence(subject: &str, verb: &str, object: &str, place: &str) -> AnnotatedSentence {
    let tree = format!(
        "(S (NP (NN {subject})) (VP (VBZ {verb}) (NP (NP (NNS millions)) \
         (PP (IN of) (NP (NNS {object}))) (PP (IN in) (NP (JJ developing) (NNS {place}))))))"
    );
    // Tokens: subject verb millions of object in developing place
    sentence(
        &tree,
        &[
            (1, "nsubj"),
            (-1, "root"),
            (1, "dobj"),
            (4, "case"),
            (2, "nmod"),
            (7, "case"),
            (7, "amod"),
            (2, "nmod"),
        ],
    )
}

/// The tree-compression input sentence: the target string plus a trailing
/// locative PP that a trained model should drop.
pub fn pp_example_sentence() -> AnnotatedSentence {
    pp_sentence("Malaria", "causes", "deaths", "countries")
}

pub fn pp_example_target() -> Vec<String> {
    ["Malaria", "causes", "millions", "of", "deaths"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// Thirty synthetic compression examples in which the trailing locative PP
/// is always deleted and everything else kept.
pub fn pp_deletion_corpus() -> Vec<CompressionExample> {
    let mut out = Vec::new();
    let mut rng = DetRng::new(7);
    while out.len() < 30 {
        let subject = EX_SUBJECTS[rng.below(EX_SUBJECTS.len())];
        let verb = EX_VERBS[rng.below(EX_VERBS.len())];
        let object = EX_OBJECTS[rng.below(EX_OBJECTS.len())];
        let place = EX_PLACES[rng.below(EX_PLACES.len())];
        let sentence = pp_sentence(subject, verb, object, place);
        let mut keep_mask = vec![true; sentence.tokens.len()];
        for slot in &mut keep_mask[5..8] {
            *slot = false;
        }
        out.push(CompressionExample {
            sentence,
            keep_mask,
        });
    }
    out
}

/// LM corpus that makes the target string the re-ranking winner.
pub fn pp_example_lm_corpus() -> Vec<Vec<String>> {
    vec![
        pp_example_target(),
        pp_example_target(),
        pp_example_target(),
    ]
}

/// Gold node labels induced by a keep mask, as plain node indices.
pub fn gold_labels(example: &CompressionExample) -> Vec<(usize, NodeLabel)> {
    sumtrim::learners::training::gold_node_labels(example)
        .into_iter()
        .map(|(id, label)| (id.index(), label))
        .collect()
}

// ---------------------------------------------------------------------------
// Synthetic topics
// ---------------------------------------------------------------------------

const TOPIC_NOUNS: [&str; 10] = [
    "embassy", "bombing", "treaty", "flood", "election", "strike", "famine", "virus", "summit",
    "verdict",
];
const FILLER_NOUNS: [&str; 8] = [
    "official",
    "witness",
    "report",
    "crowd",
    "minister",
    "agency",
    "statement",
    "capital",
];
const VERBS: [&str; 6] = [
    "condemned",
    "reported",
    "reached",
    "visited",
    "approved",
    "rejected",
];
const PLACES: [&str; 6] = ["Kenya", "Geneva", "Moscow", "Jakarta", "Lima", "Cairo"];

/// One sentence of the synthetic corpus: a subject-verb-object clause with a
/// trailing locative PP, so tree compressors have something to trim.
fn synthetic_sentence(
    doc_id: &str,
    position: usize,
    timestamp: &str,
    topic_word: &str,
    rng: &mut DetRng,
) -> AnnotatedSentence {
    let subj = FILLER_NOUNS[rng.below(FILLER_NOUNS.len())];
    let verb = VERBS[rng.below(VERBS.len())];
    let obj = if rng.unit() < 0.7 {
        topic_word.to_string()
    } else {
        FILLER_NOUNS[rng.below(FILLER_NOUNS.len())].to_string()
    };
    let place = PLACES[rng.below(PLACES.len())];
    let tree = format!(
        "(S (NP (DT The) (NN {subj})) (VP (VBD {verb}) (NP (DT the) (NN {obj})) \
         (PP (IN in) (NP (NNP {place})))) (. .))"
    );
    sentence_in_doc(
        doc_id,
        position,
        Some(timestamp),
        &tree,
        &[
            (1, "det"),
            (2, "nsubj"),
            (-1, "root"),
            (4, "det"),
            (2, "dobj"),
            (6, "case"),
            (2, "nmod"),
            (2, "punct"),
        ],
    )
}

/// Deterministic synthetic topic: `n_docs` dated documents of
/// `sentences_per_doc` sentences each, plus two reference abstracts built
/// from topic-bearing sentences.
pub fn synthetic_topic(
    seed: u64,
    topic_id: &str,
    n_docs: usize,
    sentences_per_doc: usize,
) -> QueryTopic {
    let mut rng = DetRng::new(seed);
    let topic_word = TOPIC_NOUNS[rng.below(TOPIC_NOUNS.len())];
    let other_word = FILLER_NOUNS[rng.below(FILLER_NOUNS.len())];
    let mut documents = Vec::new();
    for d in 0..n_docs {
        let doc_id = format!("{topic_id}-doc{d}");
        let timestamp = format!("1998-08-{:02}", 10 + d);
        let sentences: Vec<AnnotatedSentence> = (0..sentences_per_doc)
            .map(|p| synthetic_sentence(&doc_id, p, &timestamp, topic_word, &mut rng))
            .collect();
        documents.push(Document {
            doc_id,
            timestamp: Some(timestamp),
            sentences,
            headline: None,
        });
    }
    // References: topic-bearing sentences read back as plain token lists.
    let mut abstracts = Vec::new();
    for pick in 0..2usize {
        let mut tokens = Vec::new();
        for doc in documents.iter().skip(pick % n_docs.max(1)).take(2) {
            for sentence in doc.sentences.iter().take(2) {
                tokens.extend(sentence.tokens.iter().map(|t| t.surface.clone()));
            }
        }
        abstracts.push(tokens);
    }
    QueryTopic {
        topic_id: topic_id.to_string(),
        title: format!("The {topic_word} story"),
        narrative: format!(
            "Describe the {topic_word} events and identify the {other_word} response."
        ),
        documents,
        abstracts,
    }
}

pub fn synthetic_topics(n: usize) -> Vec<QueryTopic> {
    (0..n)
        .map(|i| synthetic_topic(1000 + i as u64, &format!("t{i:02}"), 2, 6))
        .collect()
}

/// A 20-sentence topic for the scorer-degeneracy check.
pub fn twenty_sentence_topic() -> QueryTopic {
    synthetic_topic(4242, "t-twenty", 4, 5)
}

/// Train every model the pipeline can need from the synthetic corpus: a
/// basic-variant MaxEnt, a CRF, a trigram LM over the topics' sentences, a
/// ranker, and default scorer weights.
pub fn standard_models(topics: &[QueryTopic]) -> sumtrim::pipeline::ModelSet {
    use sumtrim::learners::training::{sequence_examples, tree_examples};
    use sumtrim::learners::{crf_train, maxent_train, TrainOptions};

    let corpus = compression_corpus_from_topics(topics);
    let opts = TrainOptions {
        l2: 0.1,
        max_iter: 150,
        tol: 1e-6,
    };
    let maxent_examples = tree_examples(&corpus, ContextVariant::Basic).unwrap();
    let (maxent, _) = maxent_train(&maxent_examples, &opts).unwrap();
    let crf_sequences = sequence_examples(&corpus);
    let (crf, _) = crf_train(&crf_sequences, &opts).unwrap();
    let lm_corpus: Vec<Vec<String>> = topics
        .iter()
        .flat_map(|t| t.sentences())
        .map(|s| s.tokens.iter().map(|t| t.surface.clone()).collect())
        .collect();
    let lm = sumtrim::lm::lm_train(&lm_corpus, 3, 0.4).unwrap();
    let ranker = sumtrim::ranking::train_ranker(topics).unwrap();
    sumtrim::pipeline::ModelSet {
        ranker: Some(ranker),
        maxent: Some(maxent),
        crf: Some(crf),
        lm: Some(lm),
        weights: Some(sumtrim::scorers::ScorerWeights::default()),
    }
}

/// Compression examples derived from synthetic topics: drop the trailing
/// locative PP of each sentence.
pub fn compression_corpus_from_topics(topics: &[QueryTopic]) -> Vec<CompressionExample> {
    let mut out = Vec::new();
    for topic in topics {
        for sentence in topic.sentences() {
            let tree = &sentence.tree;
            let pp = tree
                .node_ids()
                .filter(|&id| tree.node(id).label == "PP")
                .last();
            let mut keep_mask = vec![true; sentence.tokens.len()];
            if let Some(pp) = pp {
                let (start, end) = tree.node(pp).span;
                for slot in &mut keep_mask[start..end] {
                    *slot = false;
                }
            }
            out.push(CompressionExample {
                sentence: sentence.clone(),
                keep_mask,
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Random trees and models for the oracle suites
// ---------------------------------------------------------------------------

const RAND_POS: [&str; 5] = ["NN", "VB", "DT", "JJ", "IN"];
const RAND_CONST: [&str; 5] = ["S", "NP", "VP", "PP", "ADJP"];
const RAND_RELS: [&str; 4] = ["dep", "nsubj", "dobj", "amod"];

fn random_bracketing(rng: &mut DetRng, budget: usize, next_word: &mut usize) -> String {
    if budget == 1 {
        let pos = RAND_POS[rng.below(RAND_POS.len())];
        let word = format!("w{}", *next_word);
        *next_word += 1;
        return format!("({pos} {word})");
    }
    // Internal node plus 1..=3 child subtrees sharing the remaining budget.
    let label = RAND_CONST[rng.below(RAND_CONST.len())];
    let remaining = budget - 1;
    let k = 1 + rng.below(remaining.min(3));
    let mut shares = vec![1usize; k];
    for _ in 0..(remaining - k) {
        shares[rng.below(k)] += 1;
    }
    let children: Vec<String> = shares
        .iter()
        .map(|&share| random_bracketing(rng, share, next_word))
        .collect();
    format!("({label} {})", children.join(" "))
}

/// A random annotated sentence whose tree has exactly `nodes` nodes (>= 1).
pub fn random_sentence(rng: &mut DetRng, nodes: usize) -> AnnotatedSentence {
    assert!(nodes >= 1);
    let mut next_word = 0;
    let bracketing = random_bracketing(rng, nodes, &mut next_word);
    let tree = parse_ptb(&bracketing).expect("random tree parses");
    let n = tree.leaf_count();
    let deps: Vec<(i32, String)> = (0..n)
        .map(|i| {
            if i == 0 {
                (-1, "root".to_string())
            } else {
                (
                    rng.below(i) as i32,
                    RAND_RELS[rng.below(RAND_RELS.len())].to_string(),
                )
            }
        })
        .collect();
    let dep_refs: Vec<(i32, &str)> = deps.iter().map(|(h, r)| (*h, r.as_str())).collect();
    sentence_in_doc("rand", 1, None, &bracketing, &dep_refs)
}

/// Feature names the constituent extractor can emit for this sentence,
/// including the label-history names, so random weights touch everything.
pub fn constituent_feature_names(
    sentence: &AnnotatedSentence,
    variant: ContextVariant,
) -> Vec<String> {
    use sumtrim::learners::constituent_features;
    let mut names: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
    for id in sentence.tree.node_ids() {
        let fv = constituent_features(sentence, &[], id, variant, None);
        for name in fv.names() {
            names.insert(name.to_string());
        }
    }
    for base in [
        "all_children_removed",
        "all_children_retained",
        "any_left_sibling_retained",
        "any_left_sibling_removed",
        "any_left_sibling_partial",
    ] {
        names.insert(base.to_string());
    }
    for label in ["RETAIN", "REMOVE", "PARTIAL"] {
        names.insert(format!("left_sibling={label}"));
        names.insert(format!("head_node={label}"));
        names.insert(format!("modified_head={label}"));
    }
    names.into_iter().collect()
}

/// A MaxEnt model with uniform-random weights over the sentence's feature
/// space and the three node labels.
pub fn random_maxent(
    rng: &mut DetRng,
    sentence: &AnnotatedSentence,
    variant: ContextVariant,
) -> MaxEntModel {
    let features = constituent_feature_names(sentence, variant);
    let labels: Vec<String> = ["PARTIAL", "REMOVE", "RETAIN"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let bias: Vec<f64> = (0..3).map(|_| rng.range_f64(-1.0, 1.0)).collect();
    let weights: Vec<Vec<f64>> = (0..3)
        .map(|_| features.iter().map(|_| rng.range_f64(-2.0, 2.0)).collect())
        .collect();
    MaxEntModel::from_parts(labels, features, bias, weights, 0.0).expect("random model")
}

/// All complete compatible labelings of a tree, enumerated independently of
/// the decoder (depth-first over the traversal with the same label order).
pub fn enumerate_labelings(
    tree: &ParseTree,
    order: &sumtrim::tree::TraversalOrder,
    forced_remove: &std::collections::BTreeSet<sumtrim::tree::NodeId>,
) -> Vec<sumtrim::tree::Labeling> {
    use sumtrim::tree::{compatible, Labeling, NodeId, TraversalOrder};

    fn recurse(
        tree: &ParseTree,
        order: &TraversalOrder,
        forced: &std::collections::BTreeSet<NodeId>,
        pos: usize,
        partial: &mut Labeling,
        out: &mut Vec<Labeling>,
    ) {
        if pos == order.len() {
            out.push(partial.clone());
            return;
        }
        let node = order.at(pos);
        for label in NodeLabel::ALL {
            if tree.node(node).is_leaf() && label == NodeLabel::Partial {
                continue;
            }
            if forced.contains(&node) && label != NodeLabel::Remove {
                continue;
            }
            if !compatible(label, node, tree, partial) {
                continue;
            }
            partial.set(node, label);
            recurse(tree, order, forced, pos + 1, partial, out);
            partial.clear(node);
        }
    }

    let mut out = Vec::new();
    let mut partial = sumtrim::tree::Labeling::empty(tree);
    recurse(tree, order, forced_remove, 0, &mut partial, &mut out);
    out
}
