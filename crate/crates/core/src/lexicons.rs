//! Frequency dictionary, sentiment lexicon and plain word lists.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::Pos;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, data: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(data.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Maps a frequency-dictionary tag onto the coarse POS set. Accepts both the
/// national-corpus tags (`S`, `V`, `A`, `ADV`, `S.PROP`) and universal ones.
pub fn pos_from_dictionary_tag(tag: &str) -> Pos {
    match tag.trim().to_ascii_uppercase().as_str() {
        "S" | "NOUN" => Pos::Noun,
        "V" | "VERB" => Pos::Verb,
        "A" | "ADJ" => Pos::Adj,
        "ADV" => Pos::Adv,
        "S.PROP" | "SPROP" | "PROP" | "PROPN" => Pos::ProperNoun,
        _ => Pos::Other,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRecord {
    pub lemma: String,
    /// Tag exactly as it appears in the source file.
    pub tag: String,
    pub pos: Pos,
    /// Occurrences per million tokens.
    pub ipm: f64,
    /// Topic segments (of 100) containing the lemma.
    pub r_segments: u32,
    /// Juilland's D on the 0-100 scale.
    pub d_juilland: f64,
    pub doc_count: u64,
}

/// Per-lemma statistics, possibly averaged over several dictionary rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyStats {
    pub ipm: f64,
    pub r_segments: f64,
    pub d_juilland: f64,
    pub doc_count: f64,
}

impl FrequencyStats {
    fn mean<'a>(records: impl Iterator<Item = &'a FrequencyRecord>) -> Option<Self> {
        let mut n = 0usize;
        let mut acc = FrequencyStats {
            ipm: 0.0,
            r_segments: 0.0,
            d_juilland: 0.0,
            doc_count: 0.0,
        };
        for r in records {
            n += 1;
            acc.ipm += r.ipm;
            acc.r_segments += r.r_segments as f64;
            acc.d_juilland += r.d_juilland;
            acc.doc_count += r.doc_count as f64;
        }
        if n == 0 {
            return None;
        }
        let n = n as f64;
        Some(FrequencyStats {
            ipm: acc.ipm / n,
            r_segments: acc.r_segments / n,
            d_juilland: acc.d_juilland / n,
            doc_count: acc.doc_count / n,
        })
    }
}

/// Lemma frequency dictionary keyed by `(lemma, tag)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrequencyDictionary {
    records: Vec<FrequencyRecord>,
    by_lemma: HashMap<String, Vec<usize>>,
}

const FREQUENCY_HEADER: [&str; 6] = ["lemma", "pos", "ipm", "r", "d", "doc"];

impl FrequencyDictionary {
    pub fn from_records(records: Vec<FrequencyRecord>) -> Result<Self> {
        let mut dict = FrequencyDictionary::default();
        for (i, rec) in records.into_iter().enumerate() {
            dict.push(rec).map_err(|m| Error::Validation(format!("record {}: {m}", i + 1)))?;
        }
        Ok(dict)
    }

    fn push(&mut self, rec: FrequencyRecord) -> std::result::Result<(), String> {
        if !(rec.ipm.is_finite() && rec.ipm >= 0.0) {
            return Err(format!("ipm {} must be a finite value >= 0", rec.ipm));
        }
        if rec.r_segments > 100 {
            return Err(format!("r {} outside [0, 100]", rec.r_segments));
        }
        if !(0.0..=100.0).contains(&rec.d_juilland) {
            return Err(format!("d {} outside [0, 100]", rec.d_juilland));
        }
        let lemma = rec.lemma.to_lowercase();
        let slots = self.by_lemma.entry(lemma.clone()).or_default();
        if slots.iter().any(|&i| self.records[i].tag == rec.tag) {
            return Err(format!("duplicate entry ({lemma}, {})", rec.tag));
        }
        slots.push(self.records.len());
        self.records.push(FrequencyRecord { lemma, ..rec });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[FrequencyRecord] {
        &self.records
    }

    fn entries(&self, lemma: &str) -> impl Iterator<Item = &FrequencyRecord> {
        self.by_lemma
            .get(lemma)
            .into_iter()
            .flatten()
            .map(|&i| &self.records[i])
    }

    /// Statistics for the entries of `lemma` with the given POS.
    pub fn lookup(&self, lemma: &str, pos: Pos) -> Option<FrequencyStats> {
        FrequencyStats::mean(self.entries(lemma).filter(|r| r.pos == pos))
    }

    /// Statistics averaged over every entry of `lemma`.
    pub fn lookup_any(&self, lemma: &str) -> Option<FrequencyStats> {
        FrequencyStats::mean(self.entries(lemma))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read(path)?, &path.display().to_string())
    }

    /// Parses a tab-separated table with header `lemma pos ipm r d doc`.
    pub fn parse(data: &str, source_name: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .has_headers(true)
            .quoting(false)
            .from_reader(data.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| Error::parse(source_name, 1, e.to_string()))?
            .clone();
        let names: Vec<String> = header.iter().map(|h| h.trim().to_lowercase()).collect();
        if names != FREQUENCY_HEADER {
            return Err(Error::parse(
                source_name,
                1,
                format!("expected header `{}`, found `{}`", FREQUENCY_HEADER.join(" "), names.join(" ")),
            ));
        }
        let mut dict = FrequencyDictionary::default();
        for (idx, row) in reader.records().enumerate() {
            let line = idx + 2;
            let row = row.map_err(|e| Error::parse(source_name, line, e.to_string()))?;
            let field = |i: usize| row.get(i).unwrap_or("").trim();
            let number = |i: usize| -> Result<f64> {
                field(i).parse::<f64>().map_err(|_| {
                    Error::parse(source_name, line, format!("column `{}` is not a number: `{}`", FREQUENCY_HEADER[i], field(i)))
                })
            };
            let ipm = number(2)?;
            let r = number(3)?;
            let d = number(4)?;
            let doc = number(5)?;
            if r.fract() != 0.0 || !(0.0..=100.0).contains(&r) {
                return Err(Error::Validation(format!("{source_name}:{line}: r {r} outside [0, 100]")));
            }
            if doc.fract() != 0.0 || doc < 0.0 {
                return Err(Error::Validation(format!("{source_name}:{line}: doc {doc} must be a non-negative integer")));
            }
            let tag = field(1).to_string();
            let rec = FrequencyRecord {
                lemma: field(0).to_string(),
                pos: pos_from_dictionary_tag(&tag),
                tag,
                ipm,
                r_segments: r as u32,
                d_juilland: d,
                doc_count: doc as u64,
            };
            if rec.lemma.is_empty() {
                return Err(Error::parse(source_name, line, "empty lemma"));
            }
            dict.push(rec)
                .map_err(|m| Error::Validation(format!("{source_name}:{line}: {m}")))?;
        }
        Ok(dict)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = FREQUENCY_HEADER.join("\t");
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                r.lemma, r.tag, r.ipm, r.r_segments, r.d_juilland, r.doc_count
            ));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write(path.as_ref(), &self.to_tsv())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SentimentCategory {
    Opinion,
    Feeling,
    Fact,
}

impl FromStr for Polarity {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_lowercase().as_str() {
            "positive" => Ok(Polarity::Positive),
            "negative" => Ok(Polarity::Negative),
            other => Err(format!("unknown polarity `{other}`")),
        }
    }
}

impl FromStr for SentimentCategory {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_lowercase().as_str() {
            "opinion" => Ok(SentimentCategory::Opinion),
            "feeling" => Ok(SentimentCategory::Feeling),
            "fact" => Ok(SentimentCategory::Fact),
            other => Err(format!("unknown category `{other}`")),
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        })
    }
}

impl fmt::Display for SentimentCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SentimentCategory::Opinion => "opinion",
            SentimentCategory::Feeling => "feeling",
            SentimentCategory::Fact => "fact",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentimentEntry {
    pub polarity: Polarity,
    pub category: SentimentCategory,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SentimentLexicon {
    entries: BTreeMap<String, SentimentEntry>,
}

impl SentimentLexicon {
    pub fn insert(&mut self, lemma: &str, entry: SentimentEntry) -> Result<()> {
        let lemma = lemma.trim().to_lowercase();
        if self.entries.contains_key(&lemma) {
            return Err(Error::Validation(format!("duplicate sentiment lemma `{lemma}`")));
        }
        self.entries.insert(lemma, entry);
        Ok(())
    }

    pub fn get(&self, lemma: &str) -> Option<SentimentEntry> {
        self.entries.get(lemma).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read(path)?, &path.display().to_string())
    }

    /// Parses `lemma,polarity,category` rows; a leading header row is optional.
    pub fn parse(data: &str, source_name: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(data.as_bytes());
        let mut lex = SentimentLexicon::default();
        for (idx, row) in reader.records().enumerate() {
            let line = idx + 1;
            let row = row.map_err(|e| Error::parse(source_name, line, e.to_string()))?;
            if row.len() != 3 {
                return Err(Error::parse(source_name, line, format!("expected 3 columns, found {}", row.len())));
            }
            if line == 1 && row[0].trim().eq_ignore_ascii_case("lemma") {
                continue;
            }
            let polarity = row[1].parse().map_err(|m| Error::parse(source_name, line, m))?;
            let category = row[2].parse().map_err(|m| Error::parse(source_name, line, m))?;
            lex.insert(&row[0], SentimentEntry { polarity, category })
                .map_err(|e| Error::parse(source_name, line, e.to_string()))?;
        }
        Ok(lex)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lemma,polarity,category\n");
        for (lemma, e) in &self.entries {
            out.push_str(&format!("{lemma},{},{}\n", e.polarity, e.category));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write(path.as_ref(), &self.to_csv())
    }
}

/// A named set of lowercase lemmas, optionally carrying an ipm per entry.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WordList {
    pub name: String,
    entries: BTreeMap<String, Option<f64>>,
}

impl WordList {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            entries: BTreeMap::new(),
        }
    }

    pub fn from_words<I, S>(name: impl Into<String>, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut list = Self::new(name);
        for w in words {
            list.insert(w.as_ref(), None);
        }
        list
    }

    /// Inserts a lemma. A repeated lemma keeps its first ipm.
    pub fn insert(&mut self, lemma: &str, ipm: Option<f64>) {
        let key = lemma.trim().to_lowercase();
        if !key.is_empty() {
            self.entries.entry(key).or_insert(ipm);
        }
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.entries.contains_key(lemma)
    }

    pub fn ipm(&self, lemma: &str) -> Option<f64> {
        self.entries.get(lemma).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn load(name: impl Into<String>, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(name, &read(path)?, &path.display().to_string())
    }

    /// One lemma per line, optionally followed by a tab and its ipm.
    pub fn parse(name: impl Into<String>, data: &str, source_name: &str) -> Result<Self> {
        let mut list = Self::new(name);
        for (idx, line) in data.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let lemma = parts.next().unwrap_or_default();
            let ipm = match parts.next().map(str::trim).filter(|s| !s.is_empty()) {
                Some(v) => {
                    let ipm = v.parse::<f64>().map_err(|_| {
                        Error::parse(source_name, idx + 1, format!("ipm is not a number: `{v}`"))
                    })?;
                    if !(ipm.is_finite() && ipm >= 0.0) {
                        return Err(Error::Validation(format!("{source_name}:{}: ipm {ipm} out of range", idx + 1)));
                    }
                    Some(ipm)
                }
                None => None,
            };
            list.insert(lemma, ipm);
        }
        Ok(list)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (lemma, ipm) in &self.entries {
            match ipm {
                Some(v) => out.push_str(&format!("{lemma}\t{v}\n")),
                None => out.push_str(&format!("{lemma}\n")),
            }
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write(path.as_ref(), &self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FREQ: &str = include_str!("../resources/test_frequency.tsv");

    #[test]
    fn frequency_lookup() {
        let d = FrequencyDictionary::parse(FREQ, "f.tsv").unwrap();
        let i = d.lookup_any("и").unwrap();
        assert_eq!(i.ipm, 35801.8);
        assert_eq!(i.r_segments, 100.0);
        assert_eq!(d.lookup("кот", Pos::Noun).unwrap().ipm, 64.3);
        assert!(d.lookup("кот", Pos::Verb).is_none());
        assert!(d.lookup_any("жираф").is_none());
        assert_eq!(d.lookup("москва", Pos::ProperNoun).unwrap().doc_count, 9127.0);
    }

    #[test]
    fn lookup_any_averages_over_tags() {
        let data = "lemma\tpos\tipm\tr\td\tdoc\nчто\tCONJ\t100\t90\t80\t10\nчто\tSPRO\t300\t70\t60\t30\n";
        let d = FrequencyDictionary::parse(data, "f").unwrap();
        let s = d.lookup_any("что").unwrap();
        assert_eq!((s.ipm, s.r_segments, s.d_juilland, s.doc_count), (200.0, 80.0, 70.0, 20.0));
        assert_eq!(d.lookup("что", Pos::Other).unwrap().ipm, 200.0);
    }

    #[test]
    fn frequency_range_errors() {
        let bad_r = "lemma\tpos\tipm\tr\td\tdoc\nкот\tS\t1\t101\t50\t3\n";
        let err = FrequencyDictionary::parse(bad_r, "f.tsv").unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(err.to_string().contains("f.tsv:2"), "{err}");

        let bad_d = "lemma\tpos\tipm\tr\td\tdoc\nкот\tS\t1\t10\t100.5\t3\n";
        assert!(FrequencyDictionary::parse(bad_d, "f").is_err());

        let dup = "lemma\tpos\tipm\tr\td\tdoc\nкот\tS\t1\t10\t10\t3\nкот\tS\t2\t10\t10\t3\n";
        let err = FrequencyDictionary::parse(dup, "f").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");

        let header = "lemma\tipm\nкот\t1\n";
        assert!(matches!(FrequencyDictionary::parse(header, "f"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn sentiment_rows() {
        let lex = SentimentLexicon::parse(include_str!("../resources/test_sentiment.csv"), "s").unwrap();
        assert_eq!(
            lex.get("ужасный"),
            Some(SentimentEntry {
                polarity: Polarity::Negative,
                category: SentimentCategory::Opinion
            })
        );
        assert!(lex.get("кот").is_none());

        let err = SentimentLexicon::parse("x,negative,mood\n", "s.csv").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(SentimentLexicon::parse("x,neutral,fact\n", "s").is_err());
        assert!(SentimentLexicon::parse("x,negative,fact\nx,positive,fact\n", "s").is_err());
    }

    #[test]
    fn word_list_lowercases_and_dedups() {
        let list = WordList::parse("top", "Дом\t10\nдом\t20\nкот\n\n", "w").unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(list.ipm("дом"), Some(10.0));
        assert_eq!(list.ipm("кот"), None);
        assert!(list.contains("кот"));
    }

    fn record() -> impl Strategy<Value = FrequencyRecord> {
        (
            "[а-я]{1,8}",
            prop::sample::select(vec!["S", "V", "A", "ADV", "S.PROP", "CONJ"]),
            0.0f64..1e5,
            0u32..=100,
            0.0f64..=100.0,
            0u64..100_000,
        )
            .prop_map(|(lemma, tag, ipm, r, d, doc)| FrequencyRecord {
                lemma,
                pos: pos_from_dictionary_tag(tag),
                tag: tag.to_string(),
                ipm,
                r_segments: r,
                d_juilland: d,
                doc_count: doc,
            })
    }

    proptest! {
        #[test]
        fn frequency_round_trip(records in prop::collection::vec(record(), 0..30)) {
            let mut seen = std::collections::HashSet::new();
            let records: Vec<_> = records.into_iter().filter(|r| seen.insert((r.lemma.clone(), r.tag.clone()))).collect();
            let dict = FrequencyDictionary::from_records(records).unwrap();
            let back = FrequencyDictionary::parse(&dict.to_tsv(), "rt").unwrap();
            prop_assert_eq!(back, dict);
        }

        #[test]
        fn sentiment_and_word_list_round_trip(
            words in prop::collection::btree_map("[а-яa-z]{1,10}", (any::<bool>(), 0u8..3, prop::option::of(0.0f64..1e4)), 0..30)
        ) {
            let mut lex = SentimentLexicon::default();
            let mut list = WordList::new("w");
            for (w, (pos, cat, ipm)) in &words {
                let entry = SentimentEntry {
                    polarity: if *pos { Polarity::Positive } else { Polarity::Negative },
                    category: [SentimentCategory::Opinion, SentimentCategory::Feeling, SentimentCategory::Fact][*cat as usize],
                };
                lex.insert(w, entry).unwrap();
                list.insert(w, *ipm);
            }
            prop_assert_eq!(SentimentLexicon::parse(&lex.to_csv(), "rt").unwrap(), lex);
            prop_assert_eq!(WordList::parse("w", &list.to_text(), "rt").unwrap(), list);
        }
    }
}
