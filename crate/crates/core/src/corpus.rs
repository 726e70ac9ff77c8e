//! Labeled preview corpora: JSONL ingestion, validation, splitting and
//! per-class summary statistics.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{analyze, HeuristicMorphology};

/// Publisher age rating. `Unknown` marks a missing rating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AgeRating {
    R0,
    R6,
    R12,
    R16,
    R18,
    Unknown,
}

impl AgeRating {
    /// The five rated categories, in one-hot order.
    pub const RATED: [AgeRating; 5] = [
        AgeRating::R0,
        AgeRating::R6,
        AgeRating::R12,
        AgeRating::R16,
        AgeRating::R18,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AgeRating::R0 => "0+",
            AgeRating::R6 => "6+",
            AgeRating::R12 => "12+",
            AgeRating::R16 => "16+",
            AgeRating::R18 => "18+",
            AgeRating::Unknown => "unknown",
        }
    }
}

impl fmt::Display for AgeRating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AgeRating {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_lowercase().as_str() {
            "0+" | "0" => Ok(AgeRating::R0),
            "6+" | "6" => Ok(AgeRating::R6),
            "12+" | "12" => Ok(AgeRating::R12),
            "16+" | "16" => Ok(AgeRating::R16),
            "18+" | "18" => Ok(AgeRating::R18),
            "" | "unknown" => Ok(AgeRating::Unknown),
            other => Err(format!("unknown age rating `{other}`")),
        }
    }
}

/// Target audience. Encoded as +1 for children's and -1 for adult texts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Children,
    Adult,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Children, Label::Adult];

    pub fn sign(self) -> f64 {
        match self {
            Label::Children => 1.0,
            Label::Adult => -1.0,
        }
    }

    /// Non-negative scores map to `Children`.
    pub fn from_score(score: f64) -> Label {
        if score >= 0.0 {
            Label::Children
        } else {
            Label::Adult
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Children => "children",
            Label::Adult => "adult",
        }
    }

    pub fn other(self) -> Label {
        match self {
            Label::Children => Label::Adult,
            Label::Adult => Label::Children,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_lowercase().as_str() {
            "children" => Ok(Label::Children),
            "adult" => Ok(Label::Adult),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

impl FromStr for Split {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            other => Err(format!("unknown split `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub preview_text: String,
    pub abstract_text: Option<String>,
    pub age_rating: AgeRating,
    pub genre: Option<String>,
    pub label: Label,
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    id: String,
    text: String,
    label: String,
    #[serde(rename = "abstract", default, skip_serializing_if = "Option::is_none")]
    abstract_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    age_rating: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genre: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<String>,
}

/// An ordered, immutable set of documents with a train/test assignment per document.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    documents: Vec<Document>,
    splits: Vec<Split>,
}

impl Corpus {
    /// Builds a corpus, checking id uniqueness and non-empty previews.
    pub fn new(entries: Vec<(Document, Split)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut corpus = Corpus::default();
        for (doc, split) in entries {
            validate_document(&doc)?;
            if !seen.insert(doc.id.clone()) {
                return Err(Error::Validation(format!("duplicate document id `{}`", doc.id)));
            }
            corpus.documents.push(doc);
            corpus.splits.push(split);
        }
        Ok(corpus)
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn split_of(&self, id: &str) -> Option<Split> {
        self.documents
            .iter()
            .position(|d| d.id == id)
            .map(|i| self.splits[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Document, Split)> {
        self.documents.iter().zip(self.splits.iter().copied())
    }

    /// Documents of one split, in corpus order.
    pub fn subset(&self, split: Split) -> Vec<&Document> {
        self.iter().filter(|(_, s)| *s == split).map(|(d, _)| d).collect()
    }

    pub fn count(&self, split: Split) -> usize {
        self.splits.iter().filter(|&&s| s == split).count()
    }

    /// Reassigns splits at random, separately within each label so that both
    /// sides keep the class balance. `round(test_fraction * n)` documents of
    /// each label go to Test.
    pub fn with_random_split(&self, test_fraction: f64, seed: u64) -> Result<Corpus> {
        if !(0.0..1.0).contains(&test_fraction) {
            return Err(Error::Config(format!("test fraction {test_fraction} outside [0, 1)")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut splits = vec![Split::Train; self.documents.len()];
        for label in Label::ALL {
            let mut idx: Vec<usize> = (0..self.documents.len())
                .filter(|&i| self.documents[i].label == label)
                .collect();
            idx.shuffle(&mut rng);
            let n_test = (test_fraction * idx.len() as f64).round() as usize;
            for &i in &idx[..n_test] {
                splits[i] = Split::Test;
            }
        }
        Ok(Corpus {
            documents: self.documents.clone(),
            splits,
        })
    }

    pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_jsonl(&data, &path.display().to_string())
    }

    /// Parses one JSON record per line. Blank lines are skipped; records
    /// without a `split` field go to Train.
    pub fn parse_jsonl(data: &str, source_name: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut seen = HashSet::new();
        for (idx, line) in data.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(line)
                .map_err(|e| Error::parse(source_name, line_no, e.to_string()))?;
            let invalid = |m: String| Error::Validation(format!("{source_name}:{line_no}: {m}"));
            let label = rec.label.parse::<Label>().map_err(invalid)?;
            let age_rating = match &rec.age_rating {
                Some(r) => r.parse::<AgeRating>().map_err(invalid)?,
                None => AgeRating::Unknown,
            };
            let split = match &rec.split {
                Some(s) => s.parse::<Split>().map_err(invalid)?,
                None => Split::Train,
            };
            if !seen.insert(rec.id.clone()) {
                return Err(invalid(format!("duplicate document id `{}`", rec.id)));
            }
            let doc = Document {
                id: rec.id,
                preview_text: rec.text,
                abstract_text: rec.abstract_text,
                age_rating,
                genre: rec.genre,
                label,
            };
            validate_document(&doc).map_err(|e| invalid(e.to_string()))?;
            entries.push((doc, split));
        }
        Corpus::new(entries)
    }

    /// Serializes to JSONL (UTF-8, LF line endings). Every record carries its split.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (doc, split) in self.iter() {
            let rec = Record {
                id: doc.id.clone(),
                text: doc.preview_text.clone(),
                label: doc.label.as_str().to_string(),
                abstract_text: doc.abstract_text.clone(),
                age_rating: match doc.age_rating {
                    AgeRating::Unknown => None,
                    r => Some(r.as_str().to_string()),
                },
                genre: doc.genre.clone(),
                split: Some(split.as_str().to_string()),
            };
            out.push_str(&serde_json::to_string(&rec).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn save_jsonl(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.to_jsonl().as_bytes()).map_err(|e| Error::io(path, e))
    }
}

fn validate_document(doc: &Document) -> Result<()> {
    if doc.id.is_empty() {
        return Err(Error::Validation("empty document id".into()));
    }
    if doc.preview_text.trim().is_empty() {
        return Err(Error::Validation(format!("document `{}` has an empty preview text", doc.id)));
    }
    Ok(())
}

/// Summary of one (split, label) cell. Averages are `None` for empty cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellStats {
    pub count: usize,
    pub avg_symbols: Option<f64>,
    pub avg_tokens: Option<f64>,
    pub avg_sentences: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    /// Cells in the order (Train, Children), (Train, Adult), (Test, Children), (Test, Adult).
    pub cells: Vec<(Split, Label, CellStats)>,
}

impl CorpusStats {
    pub fn cell(&self, split: Split, label: Label) -> &CellStats {
        self.cells
            .iter()
            .find(|(s, l, _)| *s == split && *l == label)
            .map(|(_, _, c)| c)
            .expect("all four cells present")
    }

    /// Tab-separated table: one row per statistic, one column per cell.
    pub fn to_tsv(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.2}"));
        let mut out = String::from("characteristic");
        for (s, l, _) in &self.cells {
            out.push_str(&format!("\t{}_{}", s.as_str(), l.as_str()));
        }
        out.push('\n');
        let rows: [(&str, &dyn Fn(&CellStats) -> String); 4] = [
            ("number_of_texts", &|c| c.count.to_string()),
            ("avg_symbols", &|c| fmt(c.avg_symbols)),
            ("avg_tokens", &|c| fmt(c.avg_tokens)),
            ("avg_sentences", &|c| fmt(c.avg_sentences)),
        ];
        for (name, get) in rows {
            out.push_str(name);
            for (_, _, c) in &self.cells {
                out.push('\t');
                out.push_str(&get(c));
            }
            out.push('\n');
        }
        out
    }
}

pub fn corpus_stats(corpus: &Corpus) -> Result<CorpusStats> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut cells = Vec::with_capacity(4);
    for split in [Split::Train, Split::Test] {
        for label in Label::ALL {
            let docs: Vec<&Document> = corpus
                .iter()
                .filter(|(d, s)| *s == split && d.label == label)
                .map(|(d, _)| d)
                .collect();
            let n = docs.len();
            let (mut sym, mut tok, mut sent) = (0usize, 0usize, 0usize);
            for d in &docs {
                let t = analyze(&d.preview_text, &HeuristicMorphology);
                sym += t.symbol_count;
                tok += t.token_count();
                sent += t.sentence_count();
            }
            let avg = |total: usize| (n > 0).then(|| total as f64 / n as f64);
            cells.push((
                split,
                label,
                CellStats {
                    count: n,
                    avg_symbols: avg(sym),
                    avg_tokens: avg(tok),
                    avg_sentences: avg(sent),
                },
            ));
        }
    }
    Ok(CorpusStats { cells })
}
