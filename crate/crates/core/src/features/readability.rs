//! Readability indices.
//!
//! Every index is an intercept plus weighted surface ratios, so a coefficient
//! set adapted to another language only changes the numbers in
//! [`ReadabilityCoefficients`]. The defaults are the classic English constants:
//!
//! | index | formula |
//! |-------|---------|
//! | Flesch-Kincaid | `206.835 - 1.015 * words/sentences - 84.6 * syllables/words` |
//! | Coleman-Liau | `0.0588 * L - 0.296 * S - 15.8` (L letters and S sentences per 100 words) |
//! | ARI | `4.71 * chars/words + 0.5 * words/sentences - 21.43` |
//! | SMOG | `1.043 * sqrt(polysyllables * 30 / sentences) + 3.1291` |
//! | Dale-Chall | `0.1579 * 100 * difficult/words + 0.0496 * words/sentences` |

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicons::WordList;
use crate::text::{AnalyzedText, Pos};

/// Words with more syllables than this count as polysyllables.
pub const POLYSYLLABLE_MIN_EXCLUSIVE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FleschKincaid {
    pub intercept: f64,
    pub words_per_sentence: f64,
    pub syllables_per_word: f64,
}

impl Default for FleschKincaid {
    fn default() -> Self {
        Self {
            intercept: 206.835,
            words_per_sentence: -1.015,
            syllables_per_word: -84.6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColemanLiau {
    pub letters_per_100_words: f64,
    pub sentences_per_100_words: f64,
    pub intercept: f64,
}

impl Default for ColemanLiau {
    fn default() -> Self {
        Self {
            letters_per_100_words: 0.0588,
            sentences_per_100_words: -0.296,
            intercept: -15.8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Ari {
    pub chars_per_word: f64,
    pub words_per_sentence: f64,
    pub intercept: f64,
}

impl Default for Ari {
    fn default() -> Self {
        Self {
            chars_per_word: 4.71,
            words_per_sentence: 0.5,
            intercept: -21.43,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Smog {
    pub factor: f64,
    /// Sentence sample size the polysyllable count is normalised to.
    pub sample_sentences: f64,
    pub intercept: f64,
}

impl Default for Smog {
    fn default() -> Self {
        Self {
            factor: 1.043,
            sample_sentences: 30.0,
            intercept: 3.1291,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DaleChall {
    /// Weight of the difficult-word percentage.
    pub difficult_percent: f64,
    pub words_per_sentence: f64,
    pub intercept: f64,
}

impl Default for DaleChall {
    fn default() -> Self {
        Self {
            difficult_percent: 0.1579,
            words_per_sentence: 0.0496,
            intercept: 0.0,
        }
    }
}

/// Coefficient sets for the five indices. Loadable from TOML with one table
/// per index; omitted keys keep their default.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReadabilityCoefficients {
    pub flesch_kincaid: FleschKincaid,
    pub coleman_liau: ColemanLiau,
    pub ari: Ari,
    pub smog: Smog,
    pub dale_chall: DaleChall,
}

impl ReadabilityCoefficients {
    pub fn from_toml(data: &str) -> Result<Self> {
        let coef: Self = toml::from_str(data).map_err(|e| Error::Config(format!("readability coefficients: {e}")))?;
        coef.validate()?;
        Ok(coef)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&data)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("coefficients serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.flesch_kincaid.intercept,
            self.flesch_kincaid.words_per_sentence,
            self.flesch_kincaid.syllables_per_word,
            self.coleman_liau.letters_per_100_words,
            self.coleman_liau.sentences_per_100_words,
            self.coleman_liau.intercept,
            self.ari.chars_per_word,
            self.ari.words_per_sentence,
            self.ari.intercept,
            self.smog.factor,
            self.smog.sample_sentences,
            self.smog.intercept,
            self.dale_chall.difficult_percent,
            self.dale_chall.words_per_sentence,
            self.dale_chall.intercept,
        ];
        if all.iter().all(|c| c.is_finite()) {
            Ok(())
        } else {
            Err(Error::Config("readability coefficients must be finite".into()))
        }
    }

    pub fn flesch_kincaid(&self, words_per_sentence: f64, syllables_per_word: f64) -> f64 {
        let c = &self.flesch_kincaid;
        c.intercept + c.words_per_sentence * words_per_sentence + c.syllables_per_word * syllables_per_word
    }

    pub fn coleman_liau(&self, letters_per_100_words: f64, sentences_per_100_words: f64) -> f64 {
        let c = &self.coleman_liau;
        c.letters_per_100_words * letters_per_100_words
            + c.sentences_per_100_words * sentences_per_100_words
            + c.intercept
    }

    pub fn ari(&self, chars_per_word: f64, words_per_sentence: f64) -> f64 {
        let c = &self.ari;
        c.chars_per_word * chars_per_word + c.words_per_sentence * words_per_sentence + c.intercept
    }

    pub fn smog(&self, polysyllables: f64, sentences: f64) -> f64 {
        let c = &self.smog;
        c.factor * (polysyllables * c.sample_sentences / sentences).sqrt() + c.intercept
    }

    pub fn dale_chall(&self, difficult_ratio: f64, words_per_sentence: f64) -> f64 {
        let c = &self.dale_chall;
        c.difficult_percent * difficult_ratio * 100.0 + c.words_per_sentence * words_per_sentence + c.intercept
    }

    /// `[index_fk, index_cl, index_ari, index_smog, index_dc]`
    pub fn evaluate(&self, s: &ReadabilityCounts) -> [f64; 5] {
        let words_per_sentence = s.words / s.sentences;
        [
            self.flesch_kincaid(words_per_sentence, s.syllables / s.words),
            self.coleman_liau(s.letters / s.words * 100.0, s.sentences / s.words * 100.0),
            self.ari(s.chars / s.words, words_per_sentence),
            self.smog(s.polysyllables, s.sentences),
            self.dale_chall(s.difficult / s.words, words_per_sentence),
        ]
    }
}

/// Surface counts the indices are built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadabilityCounts {
    pub words: f64,
    pub sentences: f64,
    pub syllables: f64,
    /// Letters inside word tokens.
    pub letters: f64,
    /// Letters and digits anywhere in the text.
    pub chars: f64,
    pub polysyllables: f64,
    pub difficult: f64,
}

impl ReadabilityCounts {
    /// A difficult word is one whose lemma is not in `familiar` and which is
    /// not a proper noun.
    pub fn from_text(t: &AnalyzedText, familiar: &WordList) -> Self {
        let mut c = ReadabilityCounts {
            words: t.token_count() as f64,
            sentences: t.sentence_count() as f64,
            syllables: 0.0,
            letters: 0.0,
            chars: t.char_count as f64,
            polysyllables: 0.0,
            difficult: 0.0,
        };
        for tok in &t.tokens {
            c.syllables += tok.syllables as f64;
            c.letters += tok.surface.chars().filter(|ch| ch.is_alphabetic()).count() as f64;
            if tok.syllables > POLYSYLLABLE_MIN_EXCLUSIVE {
                c.polysyllables += 1.0;
            }
            if tok.pos != Pos::ProperNoun && !familiar.contains(&tok.lemma) {
                c.difficult += 1.0;
            }
        }
        c
    }
}
