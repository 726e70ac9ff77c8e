//! Tokenization, sentence splitting, syllable counting and morphological
//! annotation.
//!
//! Tokens are maximal runs of letters. A hyphen is kept when it sits between
//! two letters or digits, so `Жил-был` stays one token. A run that contains a
//! digit is not a word and is dropped, although its characters still count
//! toward [`AnalyzedText::char_count`] and [`AnalyzedText::symbol_count`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DEFAULT_ABBREVIATIONS: &str = include_str!("../resources/abbreviations.txt");

/// Coarse part of speech.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
    ProperNoun,
    Other,
}

impl Pos {
    pub fn tag(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Adj => "ADJ",
            Pos::Adv => "ADV",
            Pos::ProperNoun => "PROPN",
            Pos::Other => "OTHER",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "NOUN" => Ok(Pos::Noun),
            "VERB" => Ok(Pos::Verb),
            "ADJ" => Ok(Pos::Adj),
            "ADV" => Ok(Pos::Adv),
            "PROPN" => Ok(Pos::ProperNoun),
            "OTHER" => Ok(Pos::Other),
            other => Err(format!("unknown part-of-speech tag `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
    pub syllables: usize,
}

/// A text decomposed into annotated tokens and sentences.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnalyzedText {
    pub tokens: Vec<Token>,
    /// Token index ranges, one per sentence. Disjoint, ordered, covering all tokens.
    pub sentences: Vec<Range<usize>>,
    /// Non-whitespace characters per sentence, parallel to `sentences`.
    pub sentence_symbols: Vec<usize>,
    /// Letters and digits in the whole text.
    pub char_count: usize,
    /// Non-whitespace characters in the whole text.
    pub symbol_count: usize,
}

impl AnalyzedText {
    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Maps a surface word form to its lemma and part of speech.
///
/// Implementations must be deterministic: the same surface always yields the
/// same answer from one provider instance.
pub trait MorphologyProvider: Send + Sync {
    fn analyze(&self, surface: &str) -> (String, Pos);
}

impl<T: MorphologyProvider + ?Sized> MorphologyProvider for Box<T> {
    fn analyze(&self, surface: &str) -> (String, Pos) {
        (**self).analyze(surface)
    }
}

impl<T: MorphologyProvider + ?Sized> MorphologyProvider for std::sync::Arc<T> {
    fn analyze(&self, surface: &str) -> (String, Pos) {
        (**self).analyze(surface)
    }
}

/// Lookup table of `surface -> (lemma, pos)`, matched on the lowercased surface.
#[derive(Debug, Clone, Default)]
pub struct DictionaryMorphology {
    entries: HashMap<String, (String, Pos)>,
    fallback: Option<HeuristicMorphology>,
}

impl DictionaryMorphology {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry. The first entry for a surface wins; later homonyms are ignored.
    pub fn insert(&mut self, surface: &str, lemma: &str, pos: Pos) {
        self.entries
            .entry(surface.to_lowercase())
            .or_insert_with(|| (lemma.to_lowercase(), pos));
    }

    /// Out-of-vocabulary words go through the suffix heuristic instead of
    /// becoming `Other`.
    pub fn with_heuristic_fallback(mut self) -> Self {
        self.fallback = Some(HeuristicMorphology);
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&data, &path.display().to_string())
    }

    /// Parses `surface<TAB>lemma<TAB>pos` rows. Blank lines and `#` comments are skipped.
    pub fn parse(data: &str, source_name: &str) -> Result<Self> {
        let mut dict = Self::new();
        for (idx, line) in data.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    source_name,
                    idx + 1,
                    format!("expected 3 tab-separated fields, found {}", fields.len()),
                ));
            }
            let pos = fields[2]
                .parse::<Pos>()
                .map_err(|m| Error::parse(source_name, idx + 1, m))?;
            if fields[0].trim().is_empty() || fields[1].trim().is_empty() {
                return Err(Error::parse(source_name, idx + 1, "empty surface or lemma"));
            }
            dict.insert(fields[0].trim(), fields[1].trim(), pos);
        }
        Ok(dict)
    }
}

impl MorphologyProvider for DictionaryMorphology {
    fn analyze(&self, surface: &str) -> (String, Pos) {
        let key = surface.to_lowercase();
        match self.entries.get(&key) {
            Some((lemma, pos)) => (lemma.clone(), *pos),
            None => match &self.fallback {
                Some(h) => h.analyze(surface),
                None => (key, Pos::Other),
            },
        }
    }
}

/// Suffix-based part-of-speech guesser with identity lemmas.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicMorphology;

// Longest suffixes first within each group; groups are tried in order.
const VERB_SUFFIXES: &[&str] = &[
    "ться", "тся", "ешь", "ишь", "ала", "ила", "ела", "ало", "ило", "ть", "ти", "чь", "ал", "ил",
    "ел", "ют", "ing", "ed",
];
const ADJ_SUFFIXES: &[&str] = &[
    "ого", "его", "ому", "ему", "ый", "ий", "ой", "ая", "яя", "ое", "ее", "ые", "ие", "ую", "юю",
    "ых", "их", "ым", "ous", "ful", "ive", "able",
];
const ADV_SUFFIXES: &[&str] = &["ски", "ly"];
const NOUN_SUFFIXES: &[&str] = &[
    "ость", "ение", "ание", "ство", "тель", "ция", "изм", "ник", "щик", "ист", "tion", "ness",
    "ment",
];

impl MorphologyProvider for HeuristicMorphology {
    fn analyze(&self, surface: &str) -> (String, Pos) {
        let lower = surface.to_lowercase();
        let len = lower.chars().count();
        let matches = |suffixes: &[&str]| {
            suffixes
                .iter()
                .any(|s| lower.ends_with(s) && len > s.chars().count() + 1)
        };
        let pos = if matches(NOUN_SUFFIXES) {
            Pos::Noun
        } else if matches(VERB_SUFFIXES) {
            Pos::Verb
        } else if matches(ADJ_SUFFIXES) {
            Pos::Adj
        } else if matches(ADV_SUFFIXES) {
            Pos::Adv
        } else {
            Pos::Other
        };
        (lower, pos)
    }
}

fn is_hyphen(c: char) -> bool {
    matches!(c, '-' | '\u{2010}' | '\u{2011}')
}

/// Byte spans of word tokens in `text`.
pub fn token_spans(text: &str) -> Vec<Range<usize>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].1.is_alphanumeric() {
            i += 1;
            continue;
        }
        let start = i;
        let mut has_digit = false;
        let mut j = i;
        loop {
            let c = chars[j].1;
            if c.is_alphanumeric() {
                if !c.is_alphabetic() {
                    has_digit = true;
                }
                j += 1;
            } else if is_hyphen(c)
                && j > start
                && chars[j - 1].1.is_alphanumeric()
                && j + 1 < chars.len()
                && chars[j + 1].1.is_alphanumeric()
            {
                j += 1;
            } else {
                break;
            }
            if j >= chars.len() {
                break;
            }
        }
        if !has_digit {
            let begin = chars[start].0;
            let end = if j < chars.len() { chars[j].0 } else { text.len() };
            spans.push(begin..end);
        }
        i = j;
    }
    spans
}

/// Word tokens of `text`, in order.
pub fn tokenize(text: &str) -> Vec<&str> {
    token_spans(text).into_iter().map(|r| &text[r]).collect()
}

/// Vowel-letter count, at least 1 for any word containing a letter.
pub fn count_syllables(word: &str) -> usize {
    const VOWELS: &str = "аеёиоуыэюяaeiouy";
    let mut vowels = 0;
    let mut letters = false;
    for c in word.chars() {
        if c.is_alphabetic() {
            letters = true;
            if c.to_lowercase().any(|l| VOWELS.contains(l)) {
                vowels += 1;
            }
        }
    }
    if letters {
        vowels.max(1)
    } else {
        0
    }
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '…')
}

fn is_closing(c: char) -> bool {
    matches!(c, '"' | '\'' | '»' | '”' | '’' | ')' | ']')
}

fn is_opening(c: char) -> bool {
    matches!(c, '"' | '\'' | '«' | '„' | '“' | '(' | '[' | '\u{2014}' | '–' | '-')
}

/// Rule-based sentence splitter.
///
/// A sentence ends at a run of `.`, `!`, `?` or `…` that is followed by the
/// end of the text, or by whitespace and then an uppercase letter (optionally
/// behind opening quotes or a dash). A single period directly after a known
/// abbreviation never ends a sentence.
#[derive(Debug, Clone)]
pub struct SentenceSplitter {
    abbreviations: HashSet<String>,
}

impl Default for SentenceSplitter {
    fn default() -> Self {
        Self::from_list(DEFAULT_ABBREVIATIONS)
    }
}

impl SentenceSplitter {
    /// One abbreviation per line; blank lines and `#` comments are ignored.
    pub fn from_list(list: &str) -> Self {
        let abbreviations = list
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.trim_end_matches('.').to_lowercase())
            .collect();
        Self { abbreviations }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_list(&data))
    }

    pub fn is_abbreviation(&self, word: &str) -> bool {
        self.abbreviations.contains(&word.to_lowercase())
    }

    /// Byte spans of sentences. Blank text yields no sentences; text without a
    /// terminator is one sentence.
    pub fn split(&self, text: &str) -> Vec<Range<usize>> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut spans = Vec::new();
        let mut start = 0usize;
        let mut i = 0usize;
        while i < chars.len() {
            if !is_terminator(chars[i].1) {
                i += 1;
                continue;
            }
            let run_start = i;
            let mut j = i;
            while j < chars.len() && is_terminator(chars[j].1) {
                j += 1;
            }
            while j < chars.len() && is_closing(chars[j].1) {
                j += 1;
            }
            let run_end = if j < chars.len() { chars[j].0 } else { text.len() };

            let single_period = chars[run_start].1 == '.'
                && (run_start + 1 >= chars.len() || !is_terminator(chars[run_start + 1].1));
            let abbreviated = single_period && self.preceding_word_is_abbreviation(&chars, run_start);

            let boundary = if chars[j..].iter().all(|(_, c)| c.is_whitespace()) {
                true
            } else if chars[j].1.is_whitespace() {
                let mut k = j;
                while k < chars.len() && (chars[k].1.is_whitespace() || is_opening(chars[k].1)) {
                    k += 1;
                }
                k < chars.len() && chars[k].1.is_uppercase() && !abbreviated
            } else {
                false
            };

            if boundary {
                if text[start..run_end].chars().any(|c| !c.is_whitespace()) {
                    spans.push(start..run_end);
                }
                start = run_end;
            }
            i = j.max(i + 1);
        }
        if text[start..].chars().any(|c| !c.is_whitespace()) {
            spans.push(start..text.len());
        }
        spans
    }

    fn preceding_word_is_abbreviation(&self, chars: &[(usize, char)], period: usize) -> bool {
        let mut k = period;
        while k > 0 && chars[k - 1].1.is_alphabetic() {
            k -= 1;
        }
        if k == period {
            return false;
        }
        let word: String = chars[k..period].iter().map(|(_, c)| *c).collect();
        self.is_abbreviation(&word)
    }
}

fn default_splitter() -> &'static SentenceSplitter {
    static SPLITTER: OnceLock<SentenceSplitter> = OnceLock::new();
    SPLITTER.get_or_init(SentenceSplitter::default)
}

/// Sentence byte spans using the bundled abbreviation list.
pub fn split_sentences(text: &str) -> Vec<Range<usize>> {
    default_splitter().split(text)
}

pub fn analyze(text: &str, morph: &dyn MorphologyProvider) -> AnalyzedText {
    analyze_with(text, morph, default_splitter())
}

/// Full annotation of `text`. Sentences without any word token are folded
/// into the neighbouring sentence so that sentence ranges cover all tokens.
pub fn analyze_with(text: &str, morph: &dyn MorphologyProvider, splitter: &SentenceSplitter) -> AnalyzedText {
    let spans = token_spans(text);
    let tokens: Vec<Token> = spans
        .iter()
        .map(|r| {
            let surface = &text[r.clone()];
            let (lemma, pos) = morph.analyze(surface);
            Token {
                surface: surface.to_string(),
                lemma,
                pos,
                syllables: count_syllables(surface),
            }
        })
        .collect();

    let mut sentences: Vec<Range<usize>> = Vec::new();
    let mut sentence_symbols: Vec<usize> = Vec::new();
    let mut pending_symbols = 0usize;
    let mut next_token = 0usize;
    for span in splitter.split(text) {
        let symbols = text[span.clone()].chars().filter(|c| !c.is_whitespace()).count();
        let first = next_token;
        while next_token < spans.len() && spans[next_token].start < span.end {
            next_token += 1;
        }
        if next_token > first {
            sentences.push(first..next_token);
            sentence_symbols.push(symbols + pending_symbols);
            pending_symbols = 0;
        } else if let Some(last) = sentence_symbols.last_mut() {
            *last += symbols;
        } else {
            pending_symbols += symbols;
        }
    }

    AnalyzedText {
        tokens,
        sentences,
        sentence_symbols,
        char_count: text.chars().filter(|c| c.is_alphanumeric()).count(),
        symbol_count: text.chars().filter(|c| !c.is_whitespace()).count(),
    }
}
