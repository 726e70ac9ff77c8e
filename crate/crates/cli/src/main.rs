mod config;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agelex::analysis::{correlation_matrix, rank_features, MetricsReport, RangeMode};
use agelex::corpus::{corpus_stats, AgeRating, Corpus, Document, Label, Split};
use agelex::experiment::{self, grid_conditions, run_grid, GridData, ModelParams};
use agelex::features::{family_names, select_families, Family, FEATURE_NAMES};
use agelex::models::{ModelArtifact, ModelKind};
use agelex::pipeline::{prepare_all, PipelineConfig, PreparedDoc};
use agelex::resources::Resources;
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{load_resource_paths, RunConfig};

#[derive(Parser)]
#[command(name = "agelex", version, about = "Classify fiction previews as children's or adult")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Overrides for the config file. Flags win over config values.
#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// JSONL corpus.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// TOML file listing resource paths.
    #[arg(long, global = true)]
    resources: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Model kind: rf or lsvc.
    #[arg(long, global = true)]
    model: Option<ModelKind>,
    /// Model artifact path.
    #[arg(long, global = true)]
    artifact: Option<PathBuf>,
    /// Comma-separated feature families.
    #[arg(long, global = true, value_delimiter = ',')]
    families: Option<Vec<Family>>,
    /// Add abstracts to the TF-IDF text.
    #[arg(long, global = true)]
    abstracts: bool,
    /// Train on feature families only, without TF-IDF.
    #[arg(long, global = true)]
    no_tfidf: bool,
    /// Positive class for metrics: children or adult.
    #[arg(long, global = true)]
    positive: Option<Label>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a JSONL corpus and write it to the output directory.
    Ingest {
        input: PathBuf,
        /// Reassign train/test at random with this test share.
        #[arg(long)]
        test_fraction: Option<f64>,
    },
    /// Per-class corpus characteristics.
    Stats,
    /// Write all 56 features of every document.
    Extract,
    /// Train on the train split and save the model artifact.
    Train,
    /// Score a saved model on the test split.
    Evaluate,
    /// Train and evaluate both models on every feature condition.
    Grid,
    /// Rank features by how well they separate the classes.
    Informativeness {
        #[arg(long, default_value = "train")]
        split: Split,
        #[arg(long)]
        n_intervals: Option<usize>,
        #[arg(long)]
        range_mode: Option<RangeMode>,
    },
    /// Pearson correlations between feature columns.
    Correlations {
        #[arg(long, default_value = "train")]
        split: Split,
    },
    /// Classify one text from a file or standard input.
    Classify {
        file: Option<PathBuf>,
        #[arg(long)]
        age_rating: Option<AgeRating>,
        /// Print every extracted feature value.
        #[arg(long)]
        explain: bool,
    },
}

fn effective_config(c: &Common) -> Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(p) = &c.corpus {
        cfg.corpus = Some(p.clone());
    }
    if let Some(p) = &c.resources {
        cfg.resources = Some(load_resource_paths(p)?);
    }
    if let Some(p) = &c.out {
        cfg.out = p.clone();
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(m) = c.model {
        cfg.model = m;
    }
    if let Some(p) = &c.artifact {
        cfg.artifact = Some(p.clone());
    }
    if let Some(f) = &c.families {
        cfg.families = f.clone();
    }
    if c.abstracts {
        cfg.abstracts = true;
    }
    if c.no_tfidf {
        cfg.tfidf = false;
    }
    if let Some(l) = c.positive {
        cfg.positive = l;
    }
    Ok(cfg)
}

fn write_output(cfg: &RunConfig, name: &str, data: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let path = cfg.out.join(name);
    std::fs::write(&path, data).with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(path)
}

fn load_corpus(cfg: &RunConfig) -> Result<Corpus> {
    Ok(Corpus::load_jsonl(cfg.corpus()?)?)
}

fn load_resources(cfg: &RunConfig) -> Result<Resources> {
    Ok(Resources::load(cfg.resources()?)?)
}

fn model_params(cfg: &RunConfig) -> ModelParams {
    let mut p = ModelParams::default().with_seed(cfg.seed);
    p.forest.n_trees = cfg.n_trees;
    p.svd_for_svc = cfg.svd_for_svc;
    p
}

fn pipeline_config(cfg: &RunConfig) -> PipelineConfig {
    PipelineConfig {
        tfidf: cfg.tfidf,
        abstracts: cfg.abstracts,
        families: cfg.families.clone(),
        ..PipelineConfig::default()
    }
}

struct SplitData<'a> {
    docs: Vec<&'a Document>,
    prepared: Vec<PreparedDoc>,
}

impl SplitData<'_> {
    fn refs(&self) -> Vec<&PreparedDoc> {
        self.prepared.iter().collect()
    }

    fn labels(&self) -> Vec<Label> {
        self.docs.iter().map(|d| d.label).collect()
    }
}

fn prepare_split<'a>(corpus: &'a Corpus, split: Split, res: &Resources) -> Result<SplitData<'a>> {
    let docs = corpus.subset(split);
    if docs.is_empty() {
        bail!("the {} split is empty", split.as_str());
    }
    let prepared = prepare_all(&docs, res, PipelineConfig::default().fragment_len)?;
    for (d, p) in docs.iter().zip(&prepared) {
        for w in &p.warnings {
            eprintln!("warning: document `{}`: {w}", d.id);
        }
    }
    Ok(SplitData { docs, prepared })
}

/// Families used by the analysis commands when none are configured.
fn analysis_families(cfg: &RunConfig, fallback: &[Family]) -> Vec<Family> {
    if cfg.families.is_empty() {
        fallback.to_vec()
    } else {
        let mut f = cfg.families.clone();
        f.sort();
        f.dedup();
        f
    }
}

fn cmd_ingest(cfg: &RunConfig, input: &Path, test_fraction: Option<f64>) -> Result<()> {
    let mut corpus = Corpus::load_jsonl(input)?;
    if let Some(f) = test_fraction {
        corpus = corpus.with_random_split(f, cfg.seed)?;
    }
    write_output(cfg, "corpus.jsonl", &corpus.to_jsonl())?;
    println!(
        "{} documents: {} train, {} test",
        corpus.len(),
        corpus.count(Split::Train),
        corpus.count(Split::Test)
    );
    Ok(())
}

fn cmd_stats(cfg: &RunConfig) -> Result<()> {
    let tsv = corpus_stats(&load_corpus(cfg)?)?.to_tsv();
    write_output(cfg, "stats.tsv", &tsv)?;
    print!("{tsv}");
    Ok(())
}

fn cmd_extract(cfg: &RunConfig) -> Result<()> {
    let corpus = load_corpus(cfg)?;
    let res = load_resources(cfg)?;
    let mut out = String::from("id\tsplit\tlabel");
    for n in FEATURE_NAMES.iter() {
        out.push('\t');
        out.push_str(n);
    }
    out.push('\n');
    for split in [Split::Train, Split::Test] {
        if corpus.count(split) == 0 {
            continue;
        }
        let data = prepare_split(&corpus, split, &res)?;
        for (d, p) in data.docs.iter().zip(&data.prepared) {
            out.push_str(&format!("{}\t{}\t{}", d.id, split.as_str(), d.label));
            for v in &p.features {
                out.push_str(&format!("\t{v}"));
            }
            out.push('\n');
        }
    }
    write_output(cfg, "features.tsv", &out)?;
    Ok(())
}

fn cmd_train(cfg: &RunConfig) -> Result<()> {
    let corpus = load_corpus(cfg)?;
    let res = load_resources(cfg)?;
    let train = prepare_split(&corpus, Split::Train, &res)?;
    let artifact = experiment::train(cfg.model, &pipeline_config(cfg), &train.refs(), &train.labels(), &model_params(cfg))?;
    let path = cfg.artifact_path();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    artifact.save(&path)?;
    eprintln!("wrote {}", path.display());
    println!(
        "{} trained on {} documents, input width {}",
        cfg.model.display_name(),
        train.docs.len(),
        artifact.model.dim()
    );
    Ok(())
}

fn load_artifact(cfg: &RunConfig) -> Result<ModelArtifact> {
    let path = cfg.artifact_path();
    let artifact = ModelArtifact::load(&path).with_context(|| format!("loading model {}", path.display()))?;
    artifact.check_schema()?;
    Ok(artifact)
}

fn cmd_evaluate(cfg: &RunConfig) -> Result<()> {
    let artifact = load_artifact(cfg)?;
    let corpus = load_corpus(cfg)?;
    let res = load_resources(cfg)?;
    let test = prepare_split(&corpus, Split::Test, &res)?;
    let m = experiment::evaluate(&artifact, &test.refs(), &test.labels(), cfg.positive)?;
    let tsv = format!(
        "model\t{}\n{}\t{}\n",
        MetricsReport::TSV_HEADER,
        artifact.model.kind().display_name(),
        m.tsv_fields()
    );
    write_output(cfg, "metrics.tsv", &tsv)?;
    print!("{tsv}");
    Ok(())
}

fn cmd_grid(cfg: &RunConfig) -> Result<()> {
    let corpus = load_corpus(cfg)?;
    let res = load_resources(cfg)?;
    let train = prepare_split(&corpus, Split::Train, &res)?;
    let test = prepare_split(&corpus, Split::Test, &res)?;
    let families = analysis_families(cfg, &Family::ALL);
    let (train_refs, test_refs) = (train.refs(), test.refs());
    let (train_labels, test_labels) = (train.labels(), test.labels());
    let report = run_grid(
        &GridData {
            train: &train_refs,
            train_labels: &train_labels,
            test: &test_refs,
            test_labels: &test_labels,
        },
        &grid_conditions(&families)?,
        &PipelineConfig::default(),
        &model_params(cfg),
        cfg.positive,
    )?;
    let tsv = report.to_tsv();
    write_output(cfg, "grid.tsv", &tsv)?;
    print!("{tsv}");
    Ok(())
}

fn feature_rows(data: &SplitData<'_>, families: &[Family]) -> Vec<Vec<f64>> {
    data.prepared.iter().map(|p| select_families(&p.features, families)).collect()
}

fn cmd_informativeness(cfg: &RunConfig, split: Split) -> Result<()> {
    let corpus = load_corpus(cfg)?;
    let res = load_resources(cfg)?;
    let data = prepare_split(&corpus, split, &res)?;
    let quantitative: Vec<Family> = Family::ALL.into_iter().filter(|f| f.is_quantitative()).collect();
    let families = analysis_families(cfg, &quantitative);
    let report = rank_features(
        &family_names(&families),
        &feature_rows(&data, &families),
        &data.labels(),
        cfg.n_intervals,
        cfg.range_mode,
    )?;
    let tsv = report.to_tsv();
    write_output(cfg, "informativeness.tsv", &tsv)?;
    print!("{tsv}");
    Ok(())
}

fn cmd_correlations(cfg: &RunConfig, split: Split) -> Result<()> {
    let corpus = load_corpus(cfg)?;
    let res = load_resources(cfg)?;
    let data = prepare_split(&corpus, split, &res)?;
    let families = analysis_families(cfg, &[Family::General, Family::Readability]);
    let m = correlation_matrix(&feature_rows(&data, &families), &family_names(&families))?;
    for name in &m.zero_variance {
        eprintln!("warning: `{name}` is constant; its correlations are reported as 0");
    }
    write_output(cfg, "correlations.tsv", &m.to_tsv())?;
    Ok(())
}

fn cmd_classify(cfg: &RunConfig, file: Option<&Path>, age_rating: Option<AgeRating>, explain: bool) -> Result<()> {
    let text = match file {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
            s
        }
    };
    if text.trim().is_empty() {
        bail!("empty text");
    }
    let artifact = load_artifact(cfg)?;
    let res = load_resources(cfg)?;
    let doc = Document {
        id: "input".into(),
        preview_text: text,
        abstract_text: None,
        age_rating: age_rating.unwrap_or(AgeRating::Unknown),
        genre: None,
        label: Label::Children,
    };
    let c = experiment::classify(&artifact, &doc, &res)?;
    for w in &c.extraction.warnings {
        eprintln!("warning: {w}");
    }
    println!("{}\t{:.6}", c.prediction.label, c.prediction.score);
    if explain {
        for (n, v) in c.extraction.features.names.iter().zip(&c.extraction.features.values) {
            println!("{n}\t{v}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = effective_config(&cli.common)?;
    if let Command::Informativeness {
        n_intervals, range_mode, ..
    } = &cli.command
    {
        if let Some(n) = n_intervals {
            cfg.n_intervals = *n;
        }
        if let Some(m) = range_mode {
            cfg.range_mode = *m;
        }
    }
    eprintln!("# effective config\n{}", cfg.to_toml());
    match &cli.command {
        Command::Ingest { input, test_fraction } => cmd_ingest(&cfg, input, *test_fraction),
        Command::Stats => cmd_stats(&cfg),
        Command::Extract => cmd_extract(&cfg),
        Command::Train => cmd_train(&cfg),
        Command::Evaluate => cmd_evaluate(&cfg),
        Command::Grid => cmd_grid(&cfg),
        Command::Informativeness { split, .. } => cmd_informativeness(&cfg, *split),
        Command::Correlations { split } => cmd_correlations(&cfg, *split),
        Command::Classify {
            file,
            age_rating,
            explain,
        } => cmd_classify(&cfg, file.as_deref(), *age_rating, *explain),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
