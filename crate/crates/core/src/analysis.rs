//! Feature informativeness, correlation matrices and classification metrics.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};

pub const DEFAULT_INTERVALS: usize = 100;

/// How interval boundaries are laid out for the two classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RangeMode {
    /// One range spanning both samples, cut into `n` equal intervals.
    #[default]
    Pooled,
    /// Each sample's own range cut into `n` intervals; both cumulative curves
    /// are compared at the union of the two boundary sets.
    PerClass,
}

impl std::str::FromStr for RangeMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pooled" => Ok(RangeMode::Pooled),
            "per-class" => Ok(RangeMode::PerClass),
            other => Err(format!("unknown range mode `{other}` (expected pooled or per-class)")),
        }
    }
}

fn boundaries(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 })
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Share of `sorted_values` at or below `t`.
fn cumulative(sorted_values: &[f64], t: f64) -> f64 {
    sorted_values.partition_point(|&v| v <= t) as f64 / sorted_values.len() as f64
}

/// Largest gap between the two classes' cumulative relative frequencies,
/// taken over the right edges of `n_intervals` equal intervals.
pub fn informativeness(a: &[f64], b: &[f64], n_intervals: usize) -> Result<f64> {
    informativeness_with(a, b, n_intervals, RangeMode::Pooled)
}

pub fn informativeness_with(a: &[f64], b: &[f64], n_intervals: usize, mode: RangeMode) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Validation("informativeness needs two non-empty samples".into()));
    }
    if n_intervals == 0 {
        return Err(Error::Config("n_intervals must be positive".into()));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Validation("informativeness samples must be finite".into()));
    }
    let (sa, sb) = (sorted(a), sorted(b));
    let (amin, amax) = (sa[0], sa[sa.len() - 1]);
    let (bmin, bmax) = (sb[0], sb[sb.len() - 1]);
    let lo = amin.min(bmin);
    let hi = amax.max(bmax);
    if lo == hi {
        return Ok(0.0);
    }
    let gap = |t: f64| (cumulative(&sa, t) - cumulative(&sb, t)).abs();
    let score = match mode {
        RangeMode::Pooled => boundaries(lo, hi, n_intervals).map(gap).fold(0.0, f64::max),
        RangeMode::PerClass => boundaries(amin, amax, n_intervals)
            .chain(boundaries(bmin, bmax, n_intervals))
            .map(gap)
            .fold(0.0, f64::max),
    };
    Ok(score)
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub name: String,
    pub score: f64,
    pub mean_adult: f64,
    pub std_adult: f64,
    pub mean_children: f64,
    pub std_children: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InformativenessReport {
    pub n_intervals: usize,
    pub range_mode: RangeMode,
    /// Sorted by score descending, ties by name.
    pub features: Vec<FeatureScore>,
}

impl InformativenessReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("rank\tfeature\tscore\tmean_adult\tstd_adult\tmean_children\tstd_children\n");
        for (i, f) in self.features.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
                i + 1,
                f.name,
                f.score,
                f.mean_adult,
                f.std_adult,
                f.mean_children,
                f.std_children
            );
        }
        out
    }
}

/// Scores every column of `rows` by [`informativeness`] between the classes.
pub fn rank_features(
    names: &[&str],
    rows: &[Vec<f64>],
    labels: &[Label],
    n_intervals: usize,
    mode: RangeMode,
) -> Result<InformativenessReport> {
    if rows.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            actual: labels.len(),
        });
    }
    for l in Label::ALL {
        let n = labels.iter().filter(|&&x| x == l).count();
        if n < 2 {
            return Err(Error::Validation(format!("need at least 2 {l} documents, found {n}")));
        }
    }
    if let Some(r) = rows.iter().find(|r| r.len() != names.len()) {
        return Err(Error::DimensionMismatch {
            expected: names.len(),
            actual: r.len(),
        });
    }
    let column = |j: usize, class: Label| -> Vec<f64> {
        rows.iter()
            .zip(labels)
            .filter(|(_, &l)| l == class)
            .map(|(r, _)| r[j])
            .collect()
    };
    let mut features: Vec<FeatureScore> = (0..names.len())
        .into_par_iter()
        .map(|j| {
            let adult = column(j, Label::Adult);
            let children = column(j, Label::Children);
            let (mean_adult, std_adult) = mean_std(&adult);
            let (mean_children, std_children) = mean_std(&children);
            Ok(FeatureScore {
                name: names[j].to_string(),
                score: informativeness_with(&adult, &children, n_intervals, mode)?,
                mean_adult,
                std_adult,
                mean_children,
                std_children,
            })
        })
        .collect::<Result<_>>()?;
    features.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.name.cmp(&b.name)));
    Ok(InformativenessReport {
        n_intervals,
        range_mode: mode,
        features,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
    /// Columns with zero variance; their off-diagonal entries are 0.
    pub zero_variance: Vec<String>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.values[i][j])
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("feature");
        for n in &self.names {
            out.push('\t');
            out.push_str(n);
        }
        out.push('\n');
        for (n, row) in self.names.iter().zip(&self.values) {
            out.push_str(n);
            for v in row {
                let _ = write!(out, "\t{v:.6}");
            }
            out.push('\n');
        }
        out
    }
}

/// Pearson correlation between every pair of columns.
pub fn correlation_matrix(rows: &[Vec<f64>], names: &[&str]) -> Result<CorrelationMatrix> {
    if rows.len() < 2 {
        return Err(Error::Validation("correlation needs at least two rows".into()));
    }
    let p = names.len();
    if let Some(r) = rows.iter().find(|r| r.len() != p) {
        return Err(Error::DimensionMismatch {
            expected: p,
            actual: r.len(),
        });
    }
    let n = rows.len() as f64;
    let means: Vec<f64> = (0..p).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
    let centered: Vec<Vec<f64>> = (0..p)
        .map(|j| rows.iter().map(|r| r[j] - means[j]).collect())
        .collect();
    let norms: Vec<f64> = centered
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    let mut values = vec![vec![0.0; p]; p];
    for i in 0..p {
        values[i][i] = 1.0;
        for j in i + 1..p {
            let r = if norms[i] == 0.0 || norms[j] == 0.0 {
                0.0
            } else {
                let dot: f64 = centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b).sum();
                (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0)
            };
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        names: names.iter().map(|s| s.to_string()).collect(),
        values,
        zero_variance: (0..p).filter(|&j| norms[j] == 0.0).map(|j| names[j].to_string()).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub positive: Label,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl MetricsReport {
    pub fn from_counts(positive: Label, tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        MetricsReport {
            positive,
            tp,
            fp,
            fn_,
            tn,
            accuracy: ratio(tp + tn, tp + fp + fn_ + tn),
            precision,
            recall,
            f1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub const TSV_HEADER: &'static str = "positive_class\taccuracy\tf1\tprecision\trecall\ttp\tfp\tfn\ttn";

    pub fn tsv_fields(&self) -> String {
        format!(
            "{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{}\t{}\t{}\t{}",
            self.positive, self.accuracy, self.f1, self.precision, self.recall, self.tp, self.fp, self.fn_, self.tn
        )
    }
}

/// Binary metrics with `positive` as the positive class.
pub fn metrics(predictions: &[Label], labels: &[Label], positive: Label) -> Result<MetricsReport> {
    if predictions.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: predictions.len(),
        });
    }
    if labels.is_empty() {
        return Err(Error::Validation("metrics need at least one prediction".into()));
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for (&p, &t) in predictions.iter().zip(labels) {
        match (p == positive, t == positive) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    Ok(MetricsReport::from_counts(positive, tp, fp, fn_, tn))
}
