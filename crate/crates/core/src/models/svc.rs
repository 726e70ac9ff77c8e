use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_training_data, Prediction};
use crate::corpus::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvcParams {
    pub c: f64,
    pub max_epochs: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SvcParams {
    fn default() -> Self {
        SvcParams {
            c: 1.0,
            max_epochs: 200,
            tolerance: 1e-5,
            seed: 42,
        }
    }
}

/// Linear SVC with an l2 penalty and squared hinge loss:
/// `0.5 * |w|^2 + C * sum(max(0, 1 - y * (w.x + b))^2)`.
///
/// Trained by cyclic coordinate descent over the primal with a Newton step and
/// backtracking line search per coordinate; each epoch visits the coordinates
/// in a seeded random order. Every accepted step lowers the objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvc {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub params: SvcParams,
    /// Objective at the start and after each epoch.
    pub objective_history: Vec<f64>,
}

const SUFFICIENT_DECREASE: f64 = 0.01;
const MAX_BACKTRACKS: usize = 30;

struct Column {
    rows: Vec<u32>,
    values: Vec<f64>,
}

impl LinearSvc {
    pub fn train(x: &[Vec<f64>], y: &[Label], params: &SvcParams) -> Result<Self> {
        let p = check_training_data(x, y)?;
        if !(params.c > 0.0 && params.c.is_finite()) {
            return Err(Error::Config(format!("C must be positive, got {}", params.c)));
        }
        let n = x.len();
        let c = params.c;
        let sign: Vec<f64> = y.iter().map(|l| l.sign()).collect();

        let mut columns: Vec<Column> = (0..p)
            .map(|_| Column {
                rows: Vec::new(),
                values: Vec::new(),
            })
            .collect();
        for (i, row) in x.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    columns[j].rows.push(i as u32);
                    columns[j].values.push(v);
                }
            }
        }
        // The bias is coordinate `p`, an all-ones column outside the penalty.
        columns.push(Column {
            rows: (0..n as u32).collect(),
            values: vec![1.0; n],
        });

        let mut w = vec![0.0; p + 1];
        // slack[i] = 1 - y_i * (w.x_i + b)
        let mut slack = vec![1.0; n];
        let objective = |w: &[f64], slack: &[f64]| {
            0.5 * w[..p].iter().map(|v| v * v).sum::<f64>()
                + c * slack.iter().map(|&s| if s > 0.0 { s * s } else { 0.0 }).sum::<f64>()
        };
        let mut history = vec![objective(&w, &slack)];
        let mut order: Vec<usize> = (0..=p).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

        for _ in 0..params.max_epochs {
            order.shuffle(&mut rng);
            for &j in &order {
                let col = &columns[j];
                let penalized = j < p;
                let mut grad = if penalized { w[j] } else { 0.0 };
                let mut hess = if penalized { 1.0 } else { 0.0 };
                for (&i, &v) in col.rows.iter().zip(&col.values) {
                    let s = slack[i as usize];
                    if s > 0.0 {
                        grad -= 2.0 * c * sign[i as usize] * v * s;
                        hess += 2.0 * c * v * v;
                    }
                }
                if hess <= 0.0 || grad == 0.0 {
                    continue;
                }
                let d = -grad / hess;
                let loss_at = |z: f64| -> f64 {
                    col.rows
                        .iter()
                        .zip(&col.values)
                        .map(|(&i, &v)| {
                            let s = slack[i as usize] - sign[i as usize] * v * z;
                            if s > 0.0 {
                                s * s
                            } else {
                                0.0
                            }
                        })
                        .sum::<f64>()
                };
                let base = loss_at(0.0);
                let reg = |z: f64| if penalized { 0.5 * (w[j] + z).powi(2) } else { 0.0 };
                let f0 = reg(0.0) + c * base;
                let mut step = 1.0;
                let mut accepted = None;
                for _ in 0..MAX_BACKTRACKS {
                    let z = step * d;
                    let fz = reg(z) + c * loss_at(z);
                    if fz - f0 <= -SUFFICIENT_DECREASE * z * z {
                        accepted = Some(z);
                        break;
                    }
                    step *= 0.5;
                }
                let Some(z) = accepted else { continue };
                w[j] += z;
                for (&i, &v) in col.rows.iter().zip(&col.values) {
                    slack[i as usize] -= sign[i as usize] * v * z;
                }
            }
            let obj = objective(&w, &slack);
            let improvement = history.last().copied().unwrap_or(f64::INFINITY) - obj;
            history.push(obj);
            if improvement < params.tolerance {
                break;
            }
        }

        let bias = w.pop().unwrap_or(0.0);
        Ok(LinearSvc {
            weights: w,
            bias,
            params: *params,
            objective_history: history,
        })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        Ok(self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias)
    }

    /// Sign of the margin; a zero margin is labelled children's.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        let margin = self.decision(x)?;
        Ok(Prediction {
            label: Label::from_score(margin),
            score: margin,
        })
    }

    pub fn objective(&self, x: &[Vec<f64>], y: &[Label]) -> Result<f64> {
        let mut loss = 0.0;
        for (row, label) in x.iter().zip(y) {
            let s = 1.0 - label.sign() * self.decision(row)?;
            if s > 0.0 {
                loss += s * s;
            }
        }
        Ok(0.5 * self.weights.iter().map(|v| v * v).sum::<f64>() + self.params.c * loss)
    }
}
