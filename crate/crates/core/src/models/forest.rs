use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_training_data, Prediction};
use crate::corpus::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestParams {
    pub n_trees: usize,
    pub seed: u64,
    /// Candidate features per node; `None` means `ceil(sqrt(p))`.
    pub max_features: Option<usize>,
    pub max_depth: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            seed: 42,
            max_features: None,
            max_depth: None,
            bootstrap: true,
        }
    }
}

/// Gini impurity `1 - sum(p_k^2)`; 0 for an empty node.
pub fn gini(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

fn class_index(l: Label) -> usize {
    match l {
        Label::Children => 0,
        Label::Adult => 1,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum Node {
    Leaf {
        /// Training samples reaching the leaf: `[children, adult]`.
        counts: [u32; 2],
    },
    Split {
        feature: usize,
        /// Samples with `x[feature] <= threshold` go left.
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// A CART tree stored as a flat node list with the root at index 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
    pub n_features: usize,
}

struct Task {
    node: usize,
    samples: Vec<usize>,
    depth: usize,
}

impl DecisionTree {
    /// Grows a tree on `samples` (indices into `x`, repeats allowed). At every
    /// node the features are visited in a fresh random order and the first
    /// `max_features` that admit a split compete; the split minimizing the
    /// weighted child Gini wins, thresholds at midpoints of adjacent distinct
    /// values.
    pub fn fit(
        x: &[Vec<f64>],
        y: &[Label],
        samples: Vec<usize>,
        max_features: usize,
        max_depth: Option<usize>,
        rng: &mut ChaCha8Rng,
    ) -> DecisionTree {
        let p = x[0].len();
        let mut nodes = vec![Node::Leaf { counts: [0, 0] }];
        let mut stack = vec![Task {
            node: 0,
            samples,
            depth: 0,
        }];
        let mut features: Vec<usize> = (0..p).collect();
        while let Some(task) = stack.pop() {
            let mut counts = [0usize; 2];
            for &i in &task.samples {
                counts[class_index(y[i])] += 1;
            }
            let leaf = Node::Leaf {
                counts: [counts[0] as u32, counts[1] as u32],
            };
            let can_split = counts[0] > 0
                && counts[1] > 0
                && task.samples.len() >= 2
                && max_depth.is_none_or(|d| task.depth < d);
            let best = if can_split {
                features.shuffle(rng);
                best_split(x, y, &task.samples, &features, max_features)
            } else {
                None
            };
            match best {
                None => nodes[task.node] = leaf,
                Some((feature, threshold)) => {
                    let (l, r): (Vec<usize>, Vec<usize>) =
                        task.samples.iter().partition(|&&i| x[i][feature] <= threshold);
                    let left = nodes.len();
                    nodes.push(Node::Leaf { counts: [0, 0] });
                    nodes.push(Node::Leaf { counts: [0, 0] });
                    nodes[task.node] = Node::Split {
                        feature,
                        threshold,
                        left,
                        right: left + 1,
                    };
                    stack.push(Task {
                        node: left + 1,
                        samples: r,
                        depth: task.depth + 1,
                    });
                    stack.push(Task {
                        node: left,
                        samples: l,
                        depth: task.depth + 1,
                    });
                }
            }
        }
        DecisionTree { nodes, n_features: p }
    }

    pub fn leaf_counts(&self, x: &[f64]) -> [u32; 2] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { counts } => return *counts,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    /// Majority class of the leaf; ties go to children's.
    pub fn predict_label(&self, x: &[f64]) -> Label {
        let c = self.leaf_counts(x);
        if c[0] >= c[1] {
            Label::Children
        } else {
            Label::Adult
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

fn best_split(
    x: &[Vec<f64>],
    y: &[Label],
    samples: &[usize],
    features: &[usize],
    max_features: usize,
) -> Option<(usize, f64)> {
    let n = samples.len();
    let mut total = [0usize; 2];
    for &i in samples {
        total[class_index(y[i])] += 1;
    }
    let mut best: Option<(f64, usize, f64)> = None;
    let mut tried = 0;
    let mut sorted: Vec<(f64, usize)> = Vec::with_capacity(n);
    for &f in features {
        if tried >= max_features {
            break;
        }
        sorted.clear();
        sorted.extend(samples.iter().map(|&i| (x[i][f], class_index(y[i]))));
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        if sorted[0].0 == sorted[n - 1].0 {
            continue;
        }
        tried += 1;
        let mut left = [0usize; 2];
        for k in 0..n - 1 {
            left[sorted[k].1] += 1;
            if sorted[k].0 == sorted[k + 1].0 {
                continue;
            }
            let right = [total[0] - left[0], total[1] - left[1]];
            let nl = (k + 1) as f64;
            let nr = (n - k - 1) as f64;
            let impurity = (nl * gini(&left) + nr * gini(&right)) / n as f64;
            if best.is_none_or(|(b, _, _)| impurity < b) {
                let mid = sorted[k].0 + (sorted[k + 1].0 - sorted[k].0) / 2.0;
                best = Some((impurity, f, mid));
            }
        }
    }
    best.map(|(_, f, t)| (f, t))
}

/// Bagged CART trees with hard voting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub trees: Vec<DecisionTree>,
    pub params: ForestParams,
    /// Out-of-bag accuracy, when at least one sample was left out of some tree.
    pub oob_accuracy: Option<f64>,
}

impl RandomForest {
    /// Per-tree seeds are drawn in order from the master seed, so the result
    /// does not depend on how trees are scheduled across threads.
    pub fn train(x: &[Vec<f64>], y: &[Label], params: &ForestParams) -> Result<Self> {
        let p = check_training_data(x, y)?;
        if params.n_trees == 0 {
            return Err(Error::Config("a forest needs at least one tree".into()));
        }
        let m = params
            .max_features
            .unwrap_or_else(|| (p as f64).sqrt().ceil() as usize)
            .clamp(1, p);
        let n = x.len();
        let mut master = ChaCha8Rng::seed_from_u64(params.seed);
        let seeds: Vec<u64> = (0..params.n_trees).map(|_| master.gen()).collect();
        let grown: Vec<(DecisionTree, Vec<bool>)> = seeds
            .par_iter()
            .map(|&s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let samples: Vec<usize> = if params.bootstrap {
                    (0..n).map(|_| rng.gen_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                let mut in_bag = vec![false; n];
                samples.iter().for_each(|&i| in_bag[i] = true);
                (DecisionTree::fit(x, y, samples, m, params.max_depth, &mut rng), in_bag)
            })
            .collect();

        let mut votes = vec![[0u32; 2]; n];
        for (tree, in_bag) in &grown {
            for i in (0..n).filter(|&i| !in_bag[i]) {
                votes[i][class_index(tree.predict_label(&x[i]))] += 1;
            }
        }
        let voted: Vec<usize> = (0..n).filter(|&i| votes[i][0] + votes[i][1] > 0).collect();
        let oob_accuracy = (!voted.is_empty()).then(|| {
            let correct = voted
                .iter()
                .filter(|&&i| {
                    let l = if votes[i][0] >= votes[i][1] { Label::Children } else { Label::Adult };
                    l == y[i]
                })
                .count();
            correct as f64 / voted.len() as f64
        });

        Ok(RandomForest {
            trees: grown.into_iter().map(|(t, _)| t).collect(),
            params: *params,
            oob_accuracy,
        })
    }

    pub fn dim(&self) -> usize {
        self.trees[0].n_features
    }

    /// Majority vote; an exact tie goes to children's. The score is the
    /// fraction of trees voting for the returned label.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        let children = self
            .trees
            .iter()
            .filter(|t| t.predict_label(x) == Label::Children)
            .count();
        let adult = self.trees.len() - children;
        let (label, votes) = if children >= adult {
            (Label::Children, children)
        } else {
            (Label::Adult, adult)
        };
        Ok(Prediction {
            label,
            score: votes as f64 / self.trees.len() as f64,
        })
    }
}
