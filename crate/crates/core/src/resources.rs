use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::features::ReadabilityCoefficients;
use crate::lexicons::{FrequencyDictionary, SentimentLexicon, WordList};
use crate::text::{DictionaryMorphology, HeuristicMorphology, MorphologyProvider, SentenceSplitter};

/// Everything feature extraction and preprocessing read from disk.
/// Immutable once built and shared by reference across workers.
#[derive(Clone)]
pub struct Resources {
    pub morphology: Arc<dyn MorphologyProvider>,
    pub splitter: SentenceSplitter,
    pub frequency: FrequencyDictionary,
    pub top5000: WordList,
    pub familiar: WordList,
    pub sentiment: SentimentLexicon,
    pub stopwords: WordList,
    pub coefficients: ReadabilityCoefficients,
}

impl std::fmt::Debug for Resources {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Resources")
            .field("frequency", &self.frequency.len())
            .field("top5000", &self.top5000.len())
            .field("familiar", &self.familiar.len())
            .field("sentiment", &self.sentiment.len())
            .field("stopwords", &self.stopwords.len())
            .finish_non_exhaustive()
    }
}

/// File locations of every resource. A missing morphology path selects the
/// suffix heuristic; missing coefficient or abbreviation paths select the
/// built-in defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourcePaths {
    pub morphology: Option<PathBuf>,
    #[serde(default)]
    pub morphology_fallback: bool,
    pub frequency: PathBuf,
    pub sentiment: PathBuf,
    pub stopwords: PathBuf,
    pub top5000: PathBuf,
    pub familiar: PathBuf,
    pub coefficients: Option<PathBuf>,
    pub abbreviations: Option<PathBuf>,
}

impl Resources {
    pub fn load(paths: &ResourcePaths) -> Result<Self> {
        let morphology: Arc<dyn MorphologyProvider> = match &paths.morphology {
            Some(p) => {
                let dict = DictionaryMorphology::load(p)?;
                if paths.morphology_fallback {
                    Arc::new(dict.with_heuristic_fallback())
                } else {
                    Arc::new(dict)
                }
            }
            None => Arc::new(HeuristicMorphology),
        };
        Ok(Resources {
            morphology,
            splitter: match &paths.abbreviations {
                Some(p) => SentenceSplitter::load(p)?,
                None => SentenceSplitter::default(),
            },
            frequency: FrequencyDictionary::load(&paths.frequency)?,
            top5000: WordList::load("top5000", &paths.top5000)?,
            familiar: WordList::load("familiar", &paths.familiar)?,
            sentiment: SentimentLexicon::load(&paths.sentiment)?,
            stopwords: WordList::load("stopwords", &paths.stopwords)?,
            coefficients: match &paths.coefficients {
                Some(p) => ReadabilityCoefficients::load(p)?,
                None => ReadabilityCoefficients::default(),
            },
        })
    }

    /// The small Russian resource set bundled with the crate, for examples and tests.
    pub fn sample() -> Self {
        let parse = || -> Result<Self> {
            Ok(Resources {
                morphology: Arc::new(DictionaryMorphology::parse(
                    include_str!("../resources/test_morphology.tsv"),
                    "test_morphology.tsv",
                )?),
                splitter: SentenceSplitter::default(),
                frequency: FrequencyDictionary::parse(
                    include_str!("../resources/test_frequency.tsv"),
                    "test_frequency.tsv",
                )?,
                top5000: WordList::parse("top5000", include_str!("../resources/test_top5000.txt"), "test_top5000.txt")?,
                familiar: WordList::parse("familiar", include_str!("../resources/test_familiar.txt"), "test_familiar.txt")?,
                sentiment: SentimentLexicon::parse(
                    include_str!("../resources/test_sentiment.csv"),
                    "test_sentiment.csv",
                )?,
                stopwords: WordList::parse("stopwords", include_str!("../resources/test_stopwords.txt"), "test_stopwords.txt")?,
                coefficients: ReadabilityCoefficients::default(),
            })
        };
        parse().expect("bundled resources are valid")
    }
}
