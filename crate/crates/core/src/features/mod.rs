//! Document-level features in six families.
//!
//! The full vector has 56 columns in a fixed order: general (11),
//! readability (5), lexical (26), grammatical (3), sentiment (6) and
//! publishing (5). [`FEATURE_NAMES`] lists them; [`schema_hash`] fingerprints
//! that order so stored models can detect a mismatch. Features are always
//! computed on the full preview text.

mod readability;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use readability::{
    Ari, ColemanLiau, DaleChall, FleschKincaid, ReadabilityCoefficients, ReadabilityCounts, Smog,
    POLYSYLLABLE_MIN_EXCLUSIVE,
};

use crate::corpus::{AgeRating, Document};
use crate::error::{Error, Result};
use crate::lexicons::{FrequencyDictionary, FrequencyStats, Polarity, SentimentCategory, SentimentLexicon, WordList};
use crate::resources::Resources;
use crate::text::{analyze_with, AnalyzedText, Pos};

/// Words with more syllables than this count toward `many_syllables`.
pub const LONG_WORD_MIN_EXCLUSIVE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    General,
    Readability,
    Lexical,
    Grammatical,
    Sentiment,
    Publishing,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::General,
        Family::Readability,
        Family::Lexical,
        Family::Grammatical,
        Family::Sentiment,
        Family::Publishing,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::General => "general",
            Family::Readability => "readability",
            Family::Lexical => "lexical",
            Family::Grammatical => "grammatical",
            Family::Sentiment => "sentiment",
            Family::Publishing => "publishing",
        }
    }

    pub fn names(self) -> &'static [&'static str] {
        match self {
            Family::General => GENERAL_NAMES,
            Family::Readability => READABILITY_NAMES,
            Family::Lexical => LEXICAL_NAMES,
            Family::Grammatical => GRAMMATICAL_NAMES,
            Family::Sentiment => SENTIMENT_NAMES,
            Family::Publishing => PUBLISHING_NAMES,
        }
    }

    /// Column range of this family inside the full vector.
    pub fn columns(self) -> std::ops::Range<usize> {
        let start: usize = Family::ALL
            .iter()
            .take_while(|f| **f != self)
            .map(|f| f.names().len())
            .sum();
        start..start + self.names().len()
    }

    /// Families whose values are all quantitative (everything but the one-hot ratings).
    pub fn is_quantitative(self) -> bool {
        self != Family::Publishing
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s.trim().to_lowercase())
            .ok_or_else(|| format!("unknown feature family `{s}`"))
    }
}

const GENERAL_NAMES: &[&str] = &[
    "avg_words_len",
    "med_words_len",
    "avg_sent_len",
    "med_sent_len",
    "avg_count_syl",
    "many_syllables",
    "ttr",
    "ttr_n",
    "ttr_a",
    "ttr_v",
    "nav",
];
const READABILITY_NAMES: &[&str] = &["index_fk", "index_cl", "index_ari", "index_smog", "index_dc"];
const LEXICAL_NAMES: &[&str] = &[
    "5000_proc", "5000_freq",
    "words_fr", "s_fr", "v_fr", "adj_fr", "adv_fr", "prop_fr",
    "words_r", "s_r", "v_r", "adj_r", "adv_r", "prop_r",
    "words_d", "s_d", "v_d", "adj_d", "adv_d", "prop_d",
    "words_doc", "s_doc", "v_doc", "adj_doc", "adv_doc", "prop_doc",
];
const GRAMMATICAL_NAMES: &[&str] = &["count_n", "count_v", "count_a"];
const SENTIMENT_NAMES: &[&str] = &[
    "neg_opinion",
    "neg_feeling",
    "neg_fact",
    "pos_opinion",
    "pos_feeling",
    "pos_fact",
];
const PUBLISHING_NAMES: &[&str] = &[
    "age_rating_0",
    "age_rating_6",
    "age_rating_12",
    "age_rating_16",
    "age_rating_18",
];

pub const FEATURE_COUNT: usize = 56;

/// All 56 feature names in vector order.
pub static FEATURE_NAMES: std::sync::LazyLock<Vec<&'static str>> = std::sync::LazyLock::new(|| {
    Family::ALL.iter().flat_map(|f| f.names().iter().copied()).collect()
});

/// SHA-256 over the newline-joined feature names, hex encoded.
pub fn schema_hash() -> String {
    let mut h = Sha256::new();
    for name in FEATURE_NAMES.iter() {
        h.update(name.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Named values in a fixed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub names: Vec<String>,
    pub values: Vec<f64>,
}

impl FeatureVector {
    fn from_parts(names: &[&str], values: Vec<f64>) -> Self {
        debug_assert_eq!(names.len(), values.len());
        debug_assert!(values.iter().all(|v| v.is_finite()), "{names:?} {values:?}");
        FeatureVector {
            names: names.iter().map(|s| s.to_string()).collect(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }

    pub fn concat(parts: impl IntoIterator<Item = FeatureVector>) -> Self {
        let mut out = FeatureVector {
            names: Vec::new(),
            values: Vec::new(),
        };
        for p in parts {
            out.names.extend(p.names);
            out.values.extend(p.values);
        }
        out
    }
}

/// Raw values of the selected families, taken from a full 56-wide vector.
pub fn select_families(full: &[f64], families: &[Family]) -> Vec<f64> {
    assert_eq!(full.len(), FEATURE_COUNT);
    Family::ALL
        .iter()
        .filter(|f| families.contains(f))
        .flat_map(|f| full[f.columns()].iter().copied())
        .collect()
}

/// Names of the selected families, in vector order.
pub fn family_names(families: &[Family]) -> Vec<&'static str> {
    Family::ALL
        .iter()
        .filter(|f| families.contains(f))
        .flat_map(|f| f.names().iter().copied())
        .collect()
}

fn require_text(t: &AnalyzedText) -> Result<()> {
    if t.token_count() == 0 || t.sentence_count() == 0 {
        Err(Error::EmptyText)
    } else {
        Ok(())
    }
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Unique lemmas over tokens of `pos` (all tokens when `None`), divided by that token count.
fn type_token_ratio(t: &AnalyzedText, pos: Option<Pos>) -> f64 {
    let mut seen = HashSet::new();
    let mut n = 0usize;
    for tok in t.tokens.iter().filter(|tok| pos.is_none_or(|p| tok.pos == p)) {
        n += 1;
        seen.insert(tok.lemma.as_str());
    }
    if n == 0 {
        0.0
    } else {
        seen.len() as f64 / n as f64
    }
}

/// `(ttr_a + ttr_n) / ttr_v`, or 0 for a text without verbs.
pub fn nav(ttr_a: f64, ttr_n: f64, ttr_v: f64) -> f64 {
    if ttr_v == 0.0 {
        0.0
    } else {
        (ttr_a + ttr_n) / ttr_v
    }
}

pub fn general_features(t: &AnalyzedText) -> Result<FeatureVector> {
    require_text(t)?;
    let n = t.token_count() as f64;
    let word_lens: Vec<f64> = t.tokens.iter().map(|tok| tok.surface.chars().count() as f64).collect();
    let sent_lens: Vec<f64> = t.sentence_symbols.iter().map(|&s| s as f64).collect();
    let syllables: f64 = t.tokens.iter().map(|tok| tok.syllables as f64).sum();
    let long_words = t.tokens.iter().filter(|tok| tok.syllables > LONG_WORD_MIN_EXCLUSIVE).count() as f64;
    let ttr_n = type_token_ratio(t, Some(Pos::Noun));
    let ttr_a = type_token_ratio(t, Some(Pos::Adj));
    let ttr_v = type_token_ratio(t, Some(Pos::Verb));
    Ok(FeatureVector::from_parts(
        GENERAL_NAMES,
        vec![
            mean(&word_lens),
            median(&word_lens),
            mean(&sent_lens),
            median(&sent_lens),
            syllables / n,
            long_words / n,
            type_token_ratio(t, None),
            ttr_n,
            ttr_a,
            ttr_v,
            nav(ttr_a, ttr_n, ttr_v),
        ],
    ))
}

pub fn readability_features(
    t: &AnalyzedText,
    coefficients: &ReadabilityCoefficients,
    familiar: &WordList,
) -> Result<FeatureVector> {
    require_text(t)?;
    let counts = ReadabilityCounts::from_text(t, familiar);
    Ok(FeatureVector::from_parts(READABILITY_NAMES, coefficients.evaluate(&counts).to_vec()))
}

/// Lexical features plus the number of tokens found in the frequency
/// dictionary. A zero hit count means every dictionary average fell back to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LexicalFeatures {
    pub vector: FeatureVector,
    pub dictionary_hits: usize,
}

const LEXICAL_GROUPS: [Option<Pos>; 6] = [
    None,
    Some(Pos::Noun),
    Some(Pos::Verb),
    Some(Pos::Adj),
    Some(Pos::Adv),
    Some(Pos::ProperNoun),
];

/// Dictionary averages skip tokens whose lemma is not in the dictionary.
pub fn lexical_features(
    t: &AnalyzedText,
    dict: &FrequencyDictionary,
    top5000: &WordList,
) -> Result<LexicalFeatures> {
    if t.token_count() == 0 {
        return Err(Error::EmptyText);
    }
    let n = t.token_count() as f64;
    let mut in_top = 0usize;
    let mut top_ipm = Vec::new();
    // [group][fr, r, d, doc] sums and counts
    let mut sums = [[0.0f64; 4]; 6];
    let mut counts = [0usize; 6];
    let mut hits = 0usize;

    for tok in &t.tokens {
        let stats: Option<FrequencyStats> = dict
            .lookup(&tok.lemma, tok.pos)
            .or_else(|| dict.lookup_any(&tok.lemma));
        if top5000.contains(&tok.lemma) {
            in_top += 1;
            if let Some(ipm) = top5000.ipm(&tok.lemma).or(stats.map(|s| s.ipm)) {
                top_ipm.push(ipm);
            }
        }
        let Some(s) = stats else { continue };
        hits += 1;
        for (g, group) in LEXICAL_GROUPS.iter().enumerate() {
            if group.is_none_or(|p| p == tok.pos) {
                counts[g] += 1;
                for (k, v) in [s.ipm, s.r_segments, s.d_juilland, s.doc_count].into_iter().enumerate() {
                    sums[g][k] += v;
                }
            }
        }
    }

    let mut values = Vec::with_capacity(LEXICAL_NAMES.len());
    values.push(in_top as f64 / n);
    values.push(mean(&top_ipm));
    for k in 0..4 {
        for g in 0..6 {
            values.push(if counts[g] == 0 { 0.0 } else { sums[g][k] / counts[g] as f64 });
        }
    }
    Ok(LexicalFeatures {
        vector: FeatureVector::from_parts(LEXICAL_NAMES, values),
        dictionary_hits: hits,
    })
}

pub fn grammatical_features(t: &AnalyzedText) -> Result<FeatureVector> {
    if t.token_count() == 0 {
        return Err(Error::EmptyText);
    }
    let n = t.token_count() as f64;
    let share = |p: Pos| t.tokens.iter().filter(|tok| tok.pos == p).count() as f64 / n;
    Ok(FeatureVector::from_parts(
        GRAMMATICAL_NAMES,
        vec![share(Pos::Noun), share(Pos::Verb), share(Pos::Adj)],
    ))
}

pub fn sentiment_features(t: &AnalyzedText, lex: &SentimentLexicon) -> Result<FeatureVector> {
    if t.token_count() == 0 {
        return Err(Error::EmptyText);
    }
    const ORDER: [(Polarity, SentimentCategory); 6] = [
        (Polarity::Negative, SentimentCategory::Opinion),
        (Polarity::Negative, SentimentCategory::Feeling),
        (Polarity::Negative, SentimentCategory::Fact),
        (Polarity::Positive, SentimentCategory::Opinion),
        (Polarity::Positive, SentimentCategory::Feeling),
        (Polarity::Positive, SentimentCategory::Fact),
    ];
    let mut counts = [0usize; 6];
    for tok in &t.tokens {
        if let Some(e) = lex.get(&tok.lemma) {
            let slot = ORDER
                .iter()
                .position(|&(p, c)| p == e.polarity && c == e.category)
                .expect("every polarity/category pair has a slot");
            counts[slot] += 1;
        }
    }
    let n = t.token_count() as f64;
    Ok(FeatureVector::from_parts(
        SENTIMENT_NAMES,
        counts.iter().map(|&c| c as f64 / n).collect(),
    ))
}

/// One-hot age rating; `Unknown` is all zeros.
pub fn publishing_features(doc: &Document) -> FeatureVector {
    let values = AgeRating::RATED
        .iter()
        .map(|&r| if r == doc.age_rating { 1.0 } else { 0.0 })
        .collect();
    FeatureVector::from_parts(PUBLISHING_NAMES, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtractionWarning {
    /// No token of the text was found in the frequency dictionary.
    NoDictionaryCoverage,
}

impl std::fmt::Display for ExtractionWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtractionWarning::NoDictionaryCoverage => {
                f.write_str("no token found in the frequency dictionary; lexical averages are 0")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub features: FeatureVector,
    pub warnings: Vec<ExtractionWarning>,
}

pub fn analyze_document(doc: &Document, res: &Resources) -> AnalyzedText {
    analyze_with(&doc.preview_text, res.morphology.as_ref(), &res.splitter)
}

/// All six families for one document, in [`FEATURE_NAMES`] order.
pub fn extract_all(doc: &Document, res: &Resources) -> Result<Extraction> {
    let t = analyze_document(doc, res);
    require_text(&t)?;
    let lexical = lexical_features(&t, &res.frequency, &res.top5000)?;
    let mut warnings = Vec::new();
    if lexical.dictionary_hits == 0 {
        warnings.push(ExtractionWarning::NoDictionaryCoverage);
    }
    let features = FeatureVector::concat([
        general_features(&t)?,
        readability_features(&t, &res.coefficients, &res.familiar)?,
        lexical.vector,
        grammatical_features(&t)?,
        sentiment_features(&t, &res.sentiment)?,
        publishing_features(doc),
    ]);
    debug_assert_eq!(features.len(), FEATURE_COUNT);
    Ok(Extraction { features, warnings })
}

/// Extracts every document in parallel; results keep input order. The first
/// failure is reported with the offending document id.
pub fn extract_many(docs: &[&Document], res: &Resources) -> Result<Vec<Extraction>> {
    docs.par_iter()
        .map(|d| {
            extract_all(d, res).map_err(|e| Error::Validation(format!("document `{}`: {e}", d.id)))
        })
        .collect()
}
