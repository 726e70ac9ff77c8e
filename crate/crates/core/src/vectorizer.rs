//! Text preprocessing, TF-IDF, min-max scaling and truncated SVD.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::lexicons::WordList;
use crate::text::{tokenize, MorphologyProvider};

pub const FRAGMENT_LEN: usize = 256;
pub const VOCABULARY_SIZE: usize = 2000;
pub const VARIANCE_TARGET: f64 = 0.95;

/// Slack allowed when comparing a cumulative variance ratio with its target.
pub const VARIANCE_EPSILON: f64 = 1e-12;

/// Strips punctuation and digits, lowercases, lemmatizes and drops stopwords.
pub fn preprocess(text: &str, morph: &dyn MorphologyProvider, stopwords: &WordList) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .map(|w| w.to_lowercase())
        .map(|w| morph.analyze(&w).0.to_lowercase())
        .filter(|lemma| !stopwords.contains(lemma))
        .collect()
}

/// The leading `limit` lemmas.
pub fn fragment(lemmas: &[String], limit: usize) -> &[String] {
    assert!(limit > 0, "fragment limit must be positive");
    &lemmas[..lemmas.len().min(limit)]
}

/// Preview followed by the abstract, separated by one space.
pub fn augment_with_abstract(doc: &Document) -> String {
    match doc.abstract_text.as_deref().map(str::trim) {
        Some(a) if !a.is_empty() => format!("{} {}", doc.preview_text, a),
        _ => doc.preview_text.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVector {
    /// Strictly increasing column indices.
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseVector {
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn to_dense(&self, dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TfidfData {
    vocabulary: Vec<String>,
    document_frequency: Vec<u64>,
    n_documents: u64,
}

/// TF-IDF over a fixed vocabulary: raw term counts, `idf = ln((1+N)/(1+df)) + 1`,
/// rows L2-normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TfidfData", into = "TfidfData")]
pub struct TfidfModel {
    vocabulary: Vec<String>,
    document_frequency: Vec<u64>,
    n_documents: u64,
    index: HashMap<String, usize>,
}

impl From<TfidfModel> for TfidfData {
    fn from(m: TfidfModel) -> Self {
        TfidfData {
            vocabulary: m.vocabulary,
            document_frequency: m.document_frequency,
            n_documents: m.n_documents,
        }
    }
}

impl TryFrom<TfidfData> for TfidfModel {
    type Error = Error;
    fn try_from(d: TfidfData) -> Result<Self> {
        if d.vocabulary.len() != d.document_frequency.len() {
            return Err(Error::Validation("tf-idf vocabulary and frequencies differ in length".into()));
        }
        if d.document_frequency.iter().any(|&df| df == 0 || df > d.n_documents) {
            return Err(Error::Validation("tf-idf document frequency outside [1, N]".into()));
        }
        let index: HashMap<String, usize> =
            d.vocabulary.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        if index.len() != d.vocabulary.len() {
            return Err(Error::Validation("tf-idf vocabulary has duplicate terms".into()));
        }
        Ok(TfidfModel {
            vocabulary: d.vocabulary,
            document_frequency: d.document_frequency,
            n_documents: d.n_documents,
            index,
        })
    }
}

impl TfidfModel {
    /// Keeps the `max_terms` lemmas with the highest total count, ties broken
    /// lexicographically.
    pub fn fit<S: AsRef<[String]>>(fragments: &[S], max_terms: usize) -> Result<Self> {
        if fragments.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut total: BTreeMap<&str, u64> = BTreeMap::new();
        let mut df: HashMap<&str, u64> = HashMap::new();
        for frag in fragments {
            let mut seen = std::collections::HashSet::new();
            for lemma in frag.as_ref() {
                *total.entry(lemma).or_default() += 1;
                if seen.insert(lemma.as_str()) {
                    *df.entry(lemma).or_default() += 1;
                }
            }
        }
        let mut ranked: Vec<(&str, u64)> = total.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked.truncate(max_terms);
        TfidfModel::try_from(TfidfData {
            document_frequency: ranked.iter().map(|(t, _)| df[t]).collect(),
            vocabulary: ranked.into_iter().map(|(t, _)| t.to_string()).collect(),
            n_documents: fragments.len() as u64,
        })
    }

    pub fn dim(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn document_frequency(&self) -> &[u64] {
        &self.document_frequency
    }

    pub fn n_documents(&self) -> u64 {
        self.n_documents
    }

    pub fn idf(&self, term: usize) -> f64 {
        let n = self.n_documents as f64;
        ((1.0 + n) / (1.0 + self.document_frequency[term] as f64)).ln() + 1.0
    }

    /// Out-of-vocabulary lemmas are ignored; a fragment without vocabulary
    /// terms maps to the zero vector.
    pub fn transform(&self, fragment: &[String]) -> SparseVector {
        let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
        for lemma in fragment {
            if let Some(&i) = self.index.get(lemma) {
                *counts.entry(i).or_default() += 1.0;
            }
        }
        let mut v = SparseVector {
            indices: counts.keys().copied().collect(),
            values: counts.iter().map(|(&i, &tf)| tf * self.idf(i)).collect(),
        };
        let norm = v.norm();
        if norm > 0.0 {
            v.values.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }
}

fn check_width(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

fn check_matrix(rows: &[Vec<f64>]) -> Result<usize> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InvalidTrainingData("empty matrix".into()))?;
    let p = first.len();
    for r in rows {
        check_width(p, r.len())?;
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTrainingData("matrix contains a non-finite value".into()));
        }
    }
    Ok(p)
}

/// Per-column min-max scaling fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl Scaler {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        let p = check_matrix(rows)?;
        let mut min = vec![f64::INFINITY; p];
        let mut max = vec![f64::NEG_INFINITY; p];
        for r in rows {
            for (j, &v) in r.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Ok(Scaler { min, max })
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Maps into `[0, 1]`, clipping values outside the training range.
    /// Constant columns map to 0.
    pub fn apply(&self, row: &[f64]) -> Result<Vec<f64>> {
        check_width(self.dim(), row.len())?;
        Ok(row
            .iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&x, (&lo, &hi))| {
                if hi > lo {
                    ((x - lo) / (hi - lo)).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect())
    }
}

/// Mean-centered truncated SVD keeping the fewest components that retain the
/// target share of variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvdModel {
    /// `k` orthonormal rows of length `p`.
    pub basis: Vec<Vec<f64>>,
    pub means: Vec<f64>,
    /// Squared singular values of the centered matrix, descending, all of them.
    pub energies: Vec<f64>,
    pub retained: f64,
}

impl SvdModel {
    pub fn fit(rows: &[Vec<f64>], target: f64) -> Result<Self> {
        if !(target > 0.0 && target <= 1.0) {
            return Err(Error::Config(format!("variance target {target} outside (0, 1]")));
        }
        let p = check_matrix(rows)?;
        let n = rows.len();
        if n < 2 {
            return Err(Error::InvalidTrainingData("svd needs at least two rows".into()));
        }
        let mut means = vec![0.0; p];
        for r in rows {
            for (m, v) in means.iter_mut().zip(r) {
                *m += v;
            }
        }
        means.iter_mut().for_each(|m| *m /= n as f64);
        let x: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().zip(&means).map(|(v, m)| v - m).collect())
            .collect();
        let total: f64 = x.iter().flatten().map(|v| v * v).sum();
        if total == 0.0 {
            return Err(Error::ZeroVariance);
        }

        let (values, vectors) = if n < p {
            let gram: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| dot(&x[i], &x[j])).collect())
                .collect();
            symmetric_eigen(gram)
        } else {
            let mut cov = vec![vec![0.0; p]; p];
            for r in &x {
                for i in 0..p {
                    if r[i] == 0.0 {
                        continue;
                    }
                    for j in i..p {
                        cov[i][j] += r[i] * r[j];
                    }
                }
            }
            for i in 0..p {
                for j in 0..i {
                    cov[i][j] = cov[j][i];
                }
            }
            symmetric_eigen(cov)
        };
        let energies: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();

        let mut k = 0;
        let mut cumulative = 0.0;
        while k < energies.len() {
            cumulative += energies[k];
            k += 1;
            if cumulative / total >= target - VARIANCE_EPSILON {
                break;
            }
        }

        let mut basis: Vec<Vec<f64>> = if n < p {
            (0..k)
                .map(|c| {
                    let s = energies[c].sqrt();
                    let mut v = vec![0.0; p];
                    for (i, row) in x.iter().enumerate() {
                        let w = vectors[c][i] / s;
                        for (vj, xj) in v.iter_mut().zip(row) {
                            *vj += w * xj;
                        }
                    }
                    v
                })
                .collect()
        } else {
            vectors.into_iter().take(k).collect()
        };
        orthonormalize(&mut basis);
        for v in &mut basis {
            let pivot = v.iter().copied().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
            if pivot < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        Ok(SvdModel {
            basis,
            means,
            energies,
            retained: (cumulative / total).min(1.0),
        })
    }

    pub fn k(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn apply(&self, row: &[f64]) -> Result<Vec<f64>> {
        check_width(self.dim(), row.len())?;
        let centered: Vec<f64> = row.iter().zip(&self.means).map(|(v, m)| v - m).collect();
        Ok(self.basis.iter().map(|b| dot(b, &centered)).collect())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Modified Gram-Schmidt, in place.
fn orthonormalize(vectors: &mut [Vec<f64>]) {
    for i in 0..vectors.len() {
        let (done, rest) = vectors.split_at_mut(i);
        let v = &mut rest[0];
        for u in done.iter() {
            let d = dot(u, v);
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
        }
        let norm = dot(v, v).sqrt();
        v.iter_mut().for_each(|a| *a /= norm);
    }
}

/// Eigen-decomposition of a symmetric matrix by Householder tridiagonalization
/// and implicit QL. Returns eigenvalues in descending order with their unit
/// eigenvectors as rows.
pub fn symmetric_eigen(a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut v = a;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e);
    // Rows of `vt` are eigenvectors, so the QL rotations touch contiguous memory.
    let mut vt: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    tql2(&mut vt, &mut d, &mut e);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut taken: Vec<Option<Vec<f64>>> = vt.into_iter().map(Some).collect();
    let vectors = order.iter().map(|&i| taken[i].take().expect("each index once")).collect();
    (values, vectors)
}

fn tred2(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    d.copy_from_slice(&v[n - 1]);
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for x in &mut d[..i] {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in j + 1..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

fn tql2(vt: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in &mut d[l + 2..n] {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = vt.split_at_mut(i + 1);
                    let (a, b) = (&mut lo[i], &mut hi[0]);
                    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                        let t = *y;
                        *y = s * *x + c * t;
                        *x = c * *x - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AgeRating, Label};
    use crate::resources::Resources;
    use proptest::prelude::*;

    fn lemmas(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn preprocess_examples() {
        let res = Resources::sample();
        let none = WordList::new("stop");
        assert_eq!(preprocess("Кот спит!", res.morphology.as_ref(), &none), lemmas(&["кот", "спать"]));
        assert_eq!(preprocess("КОТ кот", res.morphology.as_ref(), &none), lemmas(&["кот", "кот"]));
        assert!(preprocess("И в на, не!", res.morphology.as_ref(), &res.stopwords).is_empty());
    }

    #[test]
    fn fragment_examples() {
        let long: Vec<String> = (0..300).map(|i| format!("w{i}")).collect();
        assert_eq!(fragment(&long, FRAGMENT_LEN).len(), 256);
        assert_eq!(fragment(&long, FRAGMENT_LEN)[255], "w255");
        assert_eq!(fragment(&long[..10], FRAGMENT_LEN).len(), 10);
        assert!(fragment(&[], FRAGMENT_LEN).is_empty());
    }

    #[test]
    fn abstract_concatenation() {
        let mut d = Document {
            id: "x".into(),
            preview_text: "p…".into(),
            abstract_text: Some("a…".into()),
            age_rating: AgeRating::Unknown,
            genre: None,
            label: Label::Adult,
        };
        assert_eq!(augment_with_abstract(&d), "p… a…");
        d.abstract_text = None;
        assert_eq!(augment_with_abstract(&d), "p…");
    }

    #[test]
    fn tfidf_single_fragment() {
        let m = TfidfModel::fit(&[lemmas(&["a", "a", "b"])], 2000).unwrap();
        assert_eq!(m.vocabulary(), &lemmas(&["a", "b"])[..]);
        assert_eq!(m.idf(0), 1.0);
        let v = m.transform(&lemmas(&["a", "a", "b"]));
        let s5 = 5f64.sqrt();
        assert_eq!(v.indices, vec![0, 1]);
        assert!((v.values[0] - 2.0 / s5).abs() < 1e-15);
        assert!((v.values[1] - 1.0 / s5).abs() < 1e-15);
        assert_eq!(m.transform(&lemmas(&["zzz"])), SparseVector::default());
    }

    #[test]
    fn tfidf_vocabulary_cut_and_ties() {
        let m = TfidfModel::fit(&[lemmas(&["c", "b", "a", "c"]), lemmas(&["d"])], 2).unwrap();
        assert_eq!(m.vocabulary(), &lemmas(&["c", "a"])[..]);
        assert!(TfidfModel::fit::<Vec<String>>(&[], 10).is_err());
    }

    #[test]
    fn tfidf_serde_keeps_order() {
        let m = TfidfModel::fit(&[lemmas(&["я", "б", "а", "б"])], 10).unwrap();
        let back: TfidfModel = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.transform(&lemmas(&["а"])), m.transform(&lemmas(&["а"])));
    }

    #[test]
    fn scaler_examples() {
        let rows = vec![vec![0.0, 3.0], vec![5.0, 3.0], vec![10.0, 3.0]];
        let s = Scaler::fit(&rows).unwrap();
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| s.apply(r).unwrap()).collect();
        assert_eq!(scaled, vec![vec![0.0, 0.0], vec![0.5, 0.0], vec![1.0, 0.0]]);
        assert_eq!(s.apply(&[12.0, 7.0]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(s.apply(&[-1.0, 3.0]).unwrap()[0], 0.0);
        assert!(matches!(s.apply(&[1.0]), Err(Error::DimensionMismatch { expected: 2, actual: 1 })));
    }

    #[test]
    fn svd_rank_one_and_zero() {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, 2.0 * i as f64, -(i as f64)]).collect();
        let m = SvdModel::fit(&rows, 0.95).unwrap();
        assert_eq!(m.k(), 1);
        assert!((m.retained - 1.0).abs() < 1e-12);
        let zero = vec![vec![1.0, 1.0]; 3];
        assert!(matches!(SvdModel::fit(&zero, 0.95), Err(Error::ZeroVariance)));
    }

    #[test]
    fn svd_energy_cut() {
        // Orthogonal directions with energies 0.9, 0.06, 0.04 (after centering).
        let amp = |e: f64| (e / 2.0).sqrt();
        let rows = vec![
            vec![amp(0.9), 0.0, 0.0],
            vec![-amp(0.9), 0.0, 0.0],
            vec![0.0, amp(0.06), 0.0],
            vec![0.0, -amp(0.06), 0.0],
            vec![0.0, 0.0, amp(0.04)],
            vec![0.0, 0.0, -amp(0.04)],
        ];
        let m = SvdModel::fit(&rows, 0.95).unwrap();
        assert_eq!(m.k(), 2);
        assert!((m.retained - 0.96).abs() < 1e-12);
    }

    #[test]
    fn eigen_small_matrix() {
        let (vals, vecs) = symmetric_eigen(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert!((vals[0] - 3.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        assert!((vecs[0][0].abs() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn tfidf_rows_have_unit_or_zero_norm(
            docs in proptest::collection::vec(proptest::collection::vec(0u8..12, 0..30), 1..8),
            probe in proptest::collection::vec(0u8..20, 0..30),
        ) {
            let to = |d: &Vec<u8>| d.iter().map(|c| format!("t{c}")).collect::<Vec<String>>();
            let frags: Vec<Vec<String>> = docs.iter().map(to).collect();
            let m = TfidfModel::fit(&frags, 6).unwrap();
            prop_assert!(m.dim() <= 6);
            for f in frags.iter().chain(std::iter::once(&to(&probe))) {
                let n = m.transform(f).norm();
                prop_assert!(n == 0.0 || (n - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn scaler_maps_training_cells_into_unit_interval(
            rows in proptest::collection::vec(proptest::collection::vec(-1e6f64..1e6, 4), 1..20),
            probe in proptest::collection::vec(-1e7f64..1e7, 4),
        ) {
            let s = Scaler::fit(&rows).unwrap();
            for r in rows.iter().chain(std::iter::once(&probe)) {
                for v in s.apply(r).unwrap() {
                    prop_assert!((0.0..=1.0).contains(&v));
                }
            }
        }
    }
}
