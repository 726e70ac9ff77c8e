//! Seeded synthetic corpus with matching resources.
//!
//! Children's documents use short sentences and draw mostly from a pool of
//! short, frequent lemmas; adult documents use long sentences and draw more
//! often from a pool of long, rare lemmas. Both classes share every lemma, so
//! the bag of words alone separates them only partially.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{AgeRating, Corpus, Document, Label, Split};
use crate::error::{Error, Result};
use crate::features::ReadabilityCoefficients;
use crate::lexicons::{FrequencyDictionary, SentimentLexicon, WordList};
use crate::resources::{ResourcePaths, Resources};
use crate::text::{DictionaryMorphology, Pos, SentenceSplitter};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticConfig {
    pub n_children: usize,
    pub n_adult: usize,
    pub seed: u64,
    pub test_fraction: f64,
    pub min_tokens: usize,
    pub max_tokens: usize,
    /// Mean and spread of words per sentence.
    pub children_sentence: (f64, f64),
    pub adult_sentence: (f64, f64),
    /// Chance that a content word comes from the rare pool.
    pub children_rare_share: f64,
    pub adult_rare_share: f64,
    pub common_lemmas: usize,
    pub rare_lemmas: usize,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n_children: 200,
            n_adult: 200,
            seed: 20240607,
            test_fraction: 0.2,
            min_tokens: 800,
            max_tokens: 1200,
            children_sentence: (6.0, 2.0),
            adult_sentence: (14.0, 4.0),
            children_rare_share: 0.25,
            adult_rare_share: 0.32,
            common_lemmas: 300,
            rare_lemmas: 600,
        }
    }
}

const STOPWORDS: [&str; 6] = ["и", "в", "на", "не", "он", "она"];
const CONSONANTS: &[char] = &['б', 'в', 'г', 'д', 'з', 'к', 'л', 'м', 'н', 'п', 'р', 'с', 'т', 'ф', 'х', 'ш'];
const VOWELS: &[char] = &['а', 'е', 'и', 'о', 'у', 'ы', 'я'];
const GENRES: [&str; 4] = ["adventure", "fantasy", "detective", "prose"];

#[derive(Debug, Clone)]
struct Lemma {
    word: String,
    pos: Pos,
}

/// Corpus plus the text of every resource file it was generated with.
#[derive(Debug, Clone)]
pub struct SyntheticData {
    pub corpus: Corpus,
    pub morphology_tsv: String,
    pub frequency_tsv: String,
    pub sentiment_csv: String,
    pub stopwords_txt: String,
    pub top5000_txt: String,
    pub familiar_txt: String,
}

fn pos_tag(pos: Pos) -> &'static str {
    match pos {
        Pos::Noun => "S",
        Pos::Verb => "V",
        Pos::Adj => "A",
        Pos::Adv => "ADV",
        Pos::ProperNoun => "S.PROP",
        Pos::Other => "PART",
    }
}

fn pseudo_word(rng: &mut ChaCha8Rng, syllables: usize) -> String {
    let mut w = String::new();
    for _ in 0..syllables {
        w.push(*CONSONANTS.choose(rng).expect("non-empty"));
        w.push(*VOWELS.choose(rng).expect("non-empty"));
    }
    if rng.gen_bool(0.5) {
        w.push(*CONSONANTS.choose(rng).expect("non-empty"));
    }
    w
}

fn lemma_pool(
    rng: &mut ChaCha8Rng,
    n: usize,
    syllables: std::ops::RangeInclusive<usize>,
    taken: &mut HashSet<String>,
) -> Vec<Lemma> {
    const POS_CYCLE: [Pos; 10] = [
        Pos::Noun,
        Pos::Verb,
        Pos::Adj,
        Pos::Noun,
        Pos::Verb,
        Pos::Noun,
        Pos::Adv,
        Pos::Adj,
        Pos::Noun,
        Pos::Verb,
    ];
    let splitter = SentenceSplitter::default();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let s = rng.gen_range(syllables.clone());
        let w = pseudo_word(rng, s);
        if !splitter.is_abbreviation(&w) && taken.insert(w.clone()) {
            out.push(Lemma {
                word: w,
                pos: POS_CYCLE[out.len() % POS_CYCLE.len()],
            });
        }
    }
    out
}

fn normal(rng: &mut ChaCha8Rng, mean: f64, sd: f64) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    mean + sd * (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

struct Pools {
    common: Vec<Lemma>,
    rare: Vec<Lemma>,
    names: Vec<Lemma>,
}

fn write_text(rng: &mut ChaCha8Rng, pools: &Pools, tokens: usize, sentence: (f64, f64), rare_share: f64) -> String {
    let mut out = String::new();
    let mut written = 0;
    while written < tokens {
        let len = normal(rng, sentence.0, sentence.1).round().max(2.0) as usize;
        let mut words = Vec::with_capacity(len);
        for i in 0..len {
            let last = i + 1 == len;
            let w = if !last && rng.gen_bool(0.22) {
                STOPWORDS.choose(rng).expect("non-empty").to_string()
            } else if rng.gen_bool(0.03) {
                capitalize(&pools.names.choose(rng).expect("non-empty").word)
            } else if rng.gen_bool(rare_share) {
                pools.rare.choose(rng).expect("non-empty").word.clone()
            } else {
                pools.common.choose(rng).expect("non-empty").word.clone()
            };
            words.push(w);
        }
        words[0] = capitalize(&words[0]);
        let mut sentence_text = String::new();
        for (i, w) in words.iter().enumerate() {
            if i > 0 {
                sentence_text.push_str(if rng.gen_bool(0.08) { ", " } else { " " });
            }
            sentence_text.push_str(w);
        }
        let end = match rng.gen_range(0..10) {
            0 => '!',
            1 => '?',
            _ => '.',
        };
        sentence_text.push(end);
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&sentence_text);
        written += len;
    }
    out
}

fn rating(rng: &mut ChaCha8Rng, label: Label) -> AgeRating {
    let x: f64 = rng.gen();
    match label {
        Label::Children => match x {
            x if x < 0.3 => AgeRating::R0,
            x if x < 0.7 => AgeRating::R6,
            x if x < 0.9 => AgeRating::R12,
            _ => AgeRating::Unknown,
        },
        Label::Adult => match x {
            x if x < 0.2 => AgeRating::R12,
            x if x < 0.6 => AgeRating::R16,
            x if x < 0.9 => AgeRating::R18,
            _ => AgeRating::Unknown,
        },
    }
}

pub fn generate(cfg: &SyntheticConfig) -> Result<SyntheticData> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut taken: HashSet<String> = STOPWORDS.iter().map(|s| s.to_string()).collect();
    let common = lemma_pool(&mut rng, cfg.common_lemmas, 1..=2, &mut taken);
    let rare = lemma_pool(&mut rng, cfg.rare_lemmas, 3..=5, &mut taken);
    let mut names = lemma_pool(&mut rng, 20, 2..=3, &mut taken);
    names.iter_mut().for_each(|l| l.pos = Pos::ProperNoun);
    let pools = Pools { common, rare, names };

    let mut morphology = String::from("# surface\tlemma\tpos\n");
    let mut frequency = String::from("lemma\tpos\tipm\tr\td\tdoc\n");
    let mut top5000 = String::new();
    let mut familiar = String::new();
    for s in STOPWORDS {
        let _ = writeln!(morphology, "{s}\t{s}\tOTHER");
        let _ = writeln!(frequency, "{s}\tCONJ\t{:.1}\t100\t98\t29000", rng.gen_range(5000.0..30000.0));
        let _ = writeln!(top5000, "{s}");
        let _ = writeln!(familiar, "{s}");
    }
    for l in &pools.common {
        let ipm: f64 = rng.gen_range(50.0..2000.0);
        let _ = writeln!(morphology, "{}\t{}\t{}", l.word, l.word, l.pos.tag());
        let _ = writeln!(
            frequency,
            "{}\t{}\t{:.1}\t{}\t{:.0}\t{}",
            l.word,
            pos_tag(l.pos),
            ipm,
            rng.gen_range(60..=100),
            rng.gen_range(70.0..99.0),
            rng.gen_range(1000..30000)
        );
        let _ = writeln!(top5000, "{}\t{ipm:.1}", l.word);
        let _ = writeln!(familiar, "{}", l.word);
    }
    for l in &pools.rare {
        let _ = writeln!(morphology, "{}\t{}\t{}", l.word, l.word, l.pos.tag());
        let _ = writeln!(
            frequency,
            "{}\t{}\t{:.2}\t{}\t{:.0}\t{}",
            l.word,
            pos_tag(l.pos),
            rng.gen_range(0.5..20.0),
            rng.gen_range(5..=50),
            rng.gen_range(20.0..80.0),
            rng.gen_range(10..800)
        );
    }
    for l in &pools.names {
        let _ = writeln!(morphology, "{}\t{}\tPROPN", l.word, l.word);
        let _ = writeln!(
            frequency,
            "{}\tS.PROP\t{:.1}\t{}\t{:.0}\t{}",
            l.word,
            rng.gen_range(5.0..200.0),
            rng.gen_range(20..=90),
            rng.gen_range(30.0..90.0),
            rng.gen_range(100..5000)
        );
    }
    let mut sentiment = String::from("lemma,polarity,category\n");
    let categories = ["opinion", "feeling", "fact"];
    for (i, l) in pools.common.iter().chain(&pools.rare).step_by(15).enumerate() {
        let polarity = if i % 2 == 0 { "positive" } else { "negative" };
        let _ = writeln!(sentiment, "{},{polarity},{}", l.word, categories[(i / 2) % 3]);
    }

    let mut entries = Vec::with_capacity(cfg.n_children + cfg.n_adult);
    let labels = std::iter::repeat_n(Label::Children, cfg.n_children)
        .chain(std::iter::repeat_n(Label::Adult, cfg.n_adult));
    for (i, label) in labels.enumerate() {
        let (sentence, rare_share) = match label {
            Label::Children => (cfg.children_sentence, cfg.children_rare_share),
            Label::Adult => (cfg.adult_sentence, cfg.adult_rare_share),
        };
        let tokens = rng.gen_range(cfg.min_tokens..=cfg.max_tokens);
        let preview = write_text(&mut rng, &pools, tokens, sentence, rare_share);
        let abstract_text = if rng.gen_bool(0.9) {
            let n = rng.gen_range(30..60);
            Some(write_text(&mut rng, &pools, n, sentence, rare_share))
        } else {
            None
        };
        let doc = Document {
            id: format!("{}-{i:04}", label.as_str()),
            preview_text: preview,
            abstract_text,
            age_rating: rating(&mut rng, label),
            genre: Some(GENRES.choose(&mut rng).expect("non-empty").to_string()),
            label,
        };
        entries.push((doc, Split::Train));
    }
    let corpus = Corpus::new(entries)?.with_random_split(cfg.test_fraction, cfg.seed)?;

    Ok(SyntheticData {
        corpus,
        morphology_tsv: morphology,
        frequency_tsv: frequency,
        sentiment_csv: sentiment,
        stopwords_txt: STOPWORDS.join("\n") + "\n",
        top5000_txt: top5000,
        familiar_txt: familiar,
    })
}

impl SyntheticData {
    pub fn resources(&self) -> Result<Resources> {
        Ok(Resources {
            morphology: Arc::new(DictionaryMorphology::parse(&self.morphology_tsv, "synthetic morphology")?),
            splitter: SentenceSplitter::default(),
            frequency: FrequencyDictionary::parse(&self.frequency_tsv, "synthetic frequency")?,
            top5000: WordList::parse("top5000", &self.top5000_txt, "synthetic top5000")?,
            familiar: WordList::parse("familiar", &self.familiar_txt, "synthetic familiar")?,
            sentiment: SentimentLexicon::parse(&self.sentiment_csv, "synthetic sentiment")?,
            stopwords: WordList::parse("stopwords", &self.stopwords_txt, "synthetic stopwords")?,
            coefficients: ReadabilityCoefficients::default(),
        })
    }

    /// Writes `corpus.jsonl` and every resource file into `dir`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<(PathBuf, ResourcePaths)> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let put = |name: &str, data: &str| -> Result<PathBuf> {
            let p = dir.join(name);
            std::fs::write(&p, data).map_err(|e| Error::io(&p, e))?;
            Ok(p)
        };
        let corpus = dir.join("corpus.jsonl");
        self.corpus.save_jsonl(&corpus)?;
        let paths = ResourcePaths {
            morphology: Some(put("morphology.tsv", &self.morphology_tsv)?),
            morphology_fallback: false,
            frequency: put("frequency.tsv", &self.frequency_tsv)?,
            sentiment: put("sentiment.csv", &self.sentiment_csv)?,
            stopwords: put("stopwords.txt", &self.stopwords_txt)?,
            top5000: put("top5000.txt", &self.top5000_txt)?,
            familiar: put("familiar.txt", &self.familiar_txt)?,
            coefficients: None,
            abbreviations: None,
        };
        Ok((corpus, paths))
    }
}
