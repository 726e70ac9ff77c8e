use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::io::Write;

use agelex::synthetic::{generate, SyntheticConfig};

struct Fixture {
    dir: tempfile::TempDir,
    corpus: PathBuf,
    resources: PathBuf,
}

impl Fixture {
    fn new() -> Self {
        let data = generate(&SyntheticConfig {
            n_children: 40,
            n_adult: 40,
            min_tokens: 250,
            max_tokens: 350,
            ..SyntheticConfig::default()
        })
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (corpus, paths) = data.write_to(dir.path().join("data")).unwrap();
        let resources = dir.path().join("resources.toml");
        std::fs::write(&resources, toml::to_string(&paths).unwrap()).unwrap();
        Fixture { dir, corpus, resources }
    }

    fn out(&self) -> PathBuf {
        self.dir.path().join("out")
    }

    fn run(&self, args: &[&str]) -> Output {
        self.run_with_stdin(args, None)
    }

    fn run_with_stdin(&self, args: &[&str], stdin: Option<&str>) -> Output {
        let mut child = Command::new(env!("CARGO_BIN_EXE_agelex"))
            .args(args)
            .arg("--corpus")
            .arg(&self.corpus)
            .arg("--resources")
            .arg(&self.resources)
            .arg("--out")
            .arg(self.out())
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        if let Some(s) = stdin {
            child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
        }
        drop(child.stdin.take());
        child.wait_with_output().unwrap()
    }
}

fn ok(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn stats_has_four_cells() {
    let f = Fixture::new();
    let out = ok(&f.run(&["stats"]));
    let header = out.lines().next().unwrap();
    assert_eq!(header, "characteristic\ttrain_children\ttrain_adult\ttest_children\ttest_adult");
    assert!(f.out().join("stats.tsv").exists());
}

#[test]
fn effective_config_goes_to_stderr() {
    let f = Fixture::new();
    let o = f.run(&["stats", "--seed", "9"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("# effective config") && err.contains("seed = 9"), "{err}");
}

#[test]
fn train_then_evaluate_matches_in_process() {
    let f = Fixture::new();
    ok(&f.run(&["train", "--model", "rf", "--families", "general,publishing"]));
    let artifact = f.out().join("model-rf.json");
    assert!(artifact.exists());
    let printed = ok(&f.run(&["evaluate", "--model", "rf"]));
    assert_eq!(printed, read(&f.out().join("metrics.tsv")));

    let data_dir = f.dir.path().join("data");
    let corpus = agelex::corpus::Corpus::load_jsonl(&f.corpus).unwrap();
    let paths: agelex::resources::ResourcePaths = toml::from_str(&read(&f.resources)).unwrap();
    assert!(paths.frequency.starts_with(&data_dir));
    let res = agelex::resources::Resources::load(&paths).unwrap();
    let test_docs = corpus.subset(agelex::corpus::Split::Test);
    let prepared = agelex::pipeline::prepare_all(&test_docs, &res, 256).unwrap();
    let refs: Vec<_> = prepared.iter().collect();
    let labels: Vec<_> = test_docs.iter().map(|d| d.label).collect();
    let loaded = agelex::models::ModelArtifact::load(&artifact).unwrap();
    let m = agelex::experiment::evaluate(&loaded, &refs, &labels, agelex::corpus::Label::Children).unwrap();
    assert!(printed.lines().nth(1).unwrap().ends_with(&m.tsv_fields()));
}

#[test]
fn classify_stdin_and_explain() {
    let f = Fixture::new();
    ok(&f.run(&["train"]));
    let corpus = agelex::corpus::Corpus::load_jsonl(&f.corpus).unwrap();
    let text = &corpus.documents()[0].preview_text;
    let out = ok(&f.run_with_stdin(&["classify", "--explain"], Some(text)));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 57);
    let label = lines[0].split('\t').next().unwrap();
    assert!(label == "children" || label == "adult");
    assert!(lines[1].starts_with("avg_words_len\t"));
}

#[test]
fn empty_text_fails() {
    let f = Fixture::new();
    ok(&f.run(&["train"]));
    let o = f.run_with_stdin(&["classify"], Some("   \n"));
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty text"));
}

#[test]
fn informativeness_ranks_sentence_length_first() {
    let f = Fixture::new();
    ok(&f.run(&["informativeness", "--families", "general"]));
    let tsv = read(&f.out().join("informativeness.tsv"));
    let first = tsv.lines().nth(1).unwrap();
    assert!(first.contains("_sent_len"), "{first}");
}

#[test]
fn correlations_and_extract_write_files() {
    let f = Fixture::new();
    ok(&f.run(&["correlations"]));
    let corr = read(&f.out().join("correlations.tsv"));
    assert_eq!(corr.lines().count(), 17);
    ok(&f.run(&["extract"]));
    let features = read(&f.out().join("features.tsv"));
    assert_eq!(features.lines().next().unwrap().split('\t').count(), 59);
    assert_eq!(features.lines().count(), 81);
}

#[test]
fn grid_is_deterministic() {
    let f = Fixture::new();
    let first = ok(&f.run(&["grid", "--families", "general,publishing"]));
    let second = ok(&f.run(&["grid", "--families", "general,publishing"]));
    assert_eq!(first, second);
    assert_eq!(first, read(&f.out().join("grid.tsv")));
    assert_eq!(first.lines().count(), 1 + 2 * 10);
}

#[test]
fn ingest_resplits() {
    let f = Fixture::new();
    let out = ok(&f.run(&["ingest", f.corpus.to_str().unwrap(), "--test-fraction", "0.5"]));
    assert!(out.starts_with("80 documents"), "{out}");
    assert!(f.out().join("corpus.jsonl").exists());
}

#[test]
fn errors_exit_nonzero() {
    let f = Fixture::new();
    let o = f.run(&["evaluate", "--artifact", "missing.json"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("error: loading model missing.json"));
    let bad = f.run(&["grid", "--families", "nonsense"]);
    assert!(!bad.status.success());
}
