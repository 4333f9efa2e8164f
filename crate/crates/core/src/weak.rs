//! Weak learners trainable under an instance-weight distribution: decision
//! stump, depth-limited weighted-gain tree, and a kNN with weighted votes.
//!
//! All three are crisp: the prediction vector has +1 on the predicted class
//! coordinate and -1 elsewhere. Zero-weight instances are dropped before
//! training, so they influence neither split choices nor kNN votes. The kNN
//! learner evaluates training points leave-one-out (a stored point never
//! votes for itself), which keeps boosting errors meaningful for a
//! memorizing learner.

use crate::data::Dataset;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Base-learner configuration used by every boosting loop in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Learner {
    Stump,
    Tree { max_depth: usize },
    Knn { k: usize },
}

#[derive(Debug, Error)]
pub enum WeakError {
    #[error("feature vector has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("k = {k} is invalid for {n} training points")]
    InvalidK { k: usize, n: usize },
    #[error("invalid weight distribution: {0}")]
    InvalidWeights(String),
}

/// Per-instance training weights; nonnegative and summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightDistribution {
    weights: Vec<f64>,
}

impl WeightDistribution {
    pub fn uniform(n: usize) -> WeightDistribution {
        WeightDistribution {
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// Validates nonnegativity and unit sum (to 1e-9).
    pub fn new(weights: Vec<f64>) -> Result<WeightDistribution, WeakError> {
        if weights.is_empty() {
            return Err(WeakError::InvalidWeights("empty weight vector".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(WeakError::InvalidWeights(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(WeakError::InvalidWeights(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(WeightDistribution { weights })
    }

    /// Builds a distribution from an LP solution point: entries inside the
    /// solver's feasibility tolerance of zero are clamped up, and the vector
    /// is rescaled to unit sum.
    pub fn from_lp_point(weights: Vec<f64>) -> Result<WeightDistribution, WeakError> {
        if weights.iter().any(|w| !w.is_finite() || *w < -1e-7) {
            return Err(WeakError::InvalidWeights(
                "lp point has a significantly negative weight".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(WeakError::InvalidWeights(format!(
                "lp point sums to {sum}, expected 1"
            )));
        }
        Self::from_unnormalized(weights.into_iter().map(|w| w.max(0.0)).collect())
    }

    /// Rescales an arbitrary nonnegative vector onto the probability simplex.
    pub fn from_unnormalized(weights: Vec<f64>) -> Result<WeightDistribution, WeakError> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(WeakError::InvalidWeights(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(WeakError::InvalidWeights("weights sum to zero".into()));
        }
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Ok(WeightDistribution { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    pub left_class: usize,
    pub right_class: usize,
    class_count: usize,
    dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        class: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    nodes: Vec<TreeNode>,
    class_count: usize,
    dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct StoredPoint {
    features: Vec<f64>,
    label: usize,
    weight: f64,
    /// Index of the point in the training dataset, for leave-one-out lookups.
    source: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    k: usize,
    points: Vec<StoredPoint>,
    class_count: usize,
    dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum WeakHypothesis {
    Stump(Stump),
    Tree(Tree),
    Knn(KnnModel),
}

impl WeakHypothesis {
    pub fn class_count(&self) -> usize {
        match self {
            WeakHypothesis::Stump(s) => s.class_count,
            WeakHypothesis::Tree(t) => t.class_count,
            WeakHypothesis::Knn(m) => m.class_count,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            WeakHypothesis::Stump(s) => s.dim,
            WeakHypothesis::Tree(t) => t.dim,
            WeakHypothesis::Knn(m) => m.dim,
        }
    }

    /// Predicted class for a test point.
    pub fn predict_class(&self, x: &[f64]) -> Result<usize, WeakError> {
        if x.len() != self.dim() {
            return Err(WeakError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.classify(x, None))
    }

    /// Predicted class for training instance `index` of the dataset this
    /// hypothesis was trained on. For kNN the stored copy of that instance is
    /// excluded from the vote; stumps and trees ignore the index.
    pub fn predict_class_on_train(&self, index: usize, x: &[f64]) -> usize {
        self.classify(x, Some(index))
    }

    /// Crisp prediction vector: +1 on the predicted class, -1 elsewhere.
    pub fn predict_vector(&self, x: &[f64]) -> Result<Vec<f64>, WeakError> {
        let class = self.predict_class(x)?;
        Ok(self.vector_for(class))
    }

    fn vector_for(&self, class: usize) -> Vec<f64> {
        let mut v = vec![-1.0; self.class_count()];
        v[class] = 1.0;
        v
    }

    fn classify(&self, x: &[f64], exclude_source: Option<usize>) -> usize {
        match self {
            WeakHypothesis::Stump(s) => {
                if x[s.feature] <= s.threshold {
                    s.left_class
                } else {
                    s.right_class
                }
            }
            WeakHypothesis::Tree(t) => {
                let mut node = 0;
                loop {
                    match &t.nodes[node] {
                        TreeNode::Leaf { class } => return *class,
                        TreeNode::Split {
                            feature,
                            threshold,
                            left,
                            right,
                        } => {
                            node = if x[*feature] <= *threshold {
                                *left
                            } else {
                                *right
                            };
                        }
                    }
                }
            }
            WeakHypothesis::Knn(m) => m.vote(x, exclude_source),
        }
    }
}

impl KnnModel {
    fn vote(&self, x: &[f64], exclude_source: Option<usize>) -> usize {
        // (squared distance, source index) sorted ascending; distance ties
        // break toward the lower training index.
        let mut neighbors: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .filter(|(_, p)| Some(p.source) != exclude_source)
            .map(|(idx, p)| {
                let d2: f64 = p
                    .features
                    .iter()
                    .zip(x)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (d2, idx)
            })
            .collect();
        neighbors.sort_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(self.points[a.1].source.cmp(&self.points[b.1].source))
        });

        let mut votes = vec![0.0; self.class_count];
        if neighbors.is_empty() {
            // Nothing left to vote; fall back to the weighted majority of the
            // stored sample.
            for p in &self.points {
                votes[p.label] += p.weight;
            }
        } else {
            for &(_, idx) in neighbors.iter().take(self.k.min(neighbors.len())) {
                let p = &self.points[idx];
                votes[p.label] += p.weight;
            }
        }
        argmax_lowest(&votes)
    }
}

/// Index of the maximum entry; ties go to the lowest index.
pub(crate) fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Instances with strictly positive weight, as (index, weight).
fn active_indices(ds: &Dataset, dist: &WeightDistribution) -> Vec<(usize, f64)> {
    (0..ds.n())
        .filter_map(|i| {
            let w = dist.get(i);
            (w > 0.0).then_some((i, w))
        })
        .collect()
}

/// The weighted-majority class among `members`, ties to the lowest class.
fn weighted_majority(ds: &Dataset, members: &[(usize, f64)], class_count: usize) -> usize {
    let mut totals = vec![0.0; class_count];
    for &(i, w) in members {
        totals[ds.label(i)] += w;
    }
    argmax_lowest(&totals)
}

/// Trains the stump minimizing the weighted 0/1 error over every (feature,
/// midpoint) candidate, with each side predicting its weighted-majority
/// class. Falls back to a constant stump when no split beats it.
pub fn train_stump(ds: &Dataset, dist: &WeightDistribution) -> WeakHypothesis {
    assert_eq!(dist.len(), ds.n());
    let class_count = ds.class_count();
    let active = active_indices(ds, dist);
    let total: f64 = active.iter().map(|&(_, w)| w).sum();

    // Constant stump baseline.
    let majority = weighted_majority(ds, &active, class_count);
    let mut totals = vec![0.0; class_count];
    for &(i, w) in &active {
        totals[ds.label(i)] += w;
    }
    let mut best_error = total - totals[majority];
    let mut best = Stump {
        feature: 0,
        threshold: f64::NEG_INFINITY,
        left_class: majority,
        right_class: majority,
        class_count,
        dim: ds.dim(),
    };

    for feature in 0..ds.dim() {
        let mut order: Vec<(f64, usize, f64)> = active
            .iter()
            .map(|&(i, w)| (ds.features(i)[feature], i, w))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut left = vec![0.0; class_count];
        let mut right = totals.clone();
        for p in 0..order.len().saturating_sub(1) {
            let (value, i, w) = order[p];
            left[ds.label(i)] += w;
            right[ds.label(i)] -= w;
            let next_value = order[p + 1].0;
            if next_value <= value {
                continue;
            }
            let left_class = argmax_lowest(&left);
            let right_class = argmax_lowest(&right);
            let left_w: f64 = left.iter().sum();
            let right_w: f64 = right.iter().sum();
            let error = (left_w - left[left_class]) + (right_w - right[right_class]);
            if error < best_error - 1e-15 {
                best_error = error;
                best = Stump {
                    feature,
                    threshold: 0.5 * (value + next_value),
                    left_class,
                    right_class,
                    class_count,
                    dim: ds.dim(),
                };
            }
        }
    }
    WeakHypothesis::Stump(best)
}

struct TreeBuilder<'a> {
    ds: &'a Dataset,
    max_depth: usize,
    nodes: Vec<TreeNode>,
}

fn entropy(totals: &[f64]) -> f64 {
    let sum: f64 = totals.iter().sum();
    if sum <= 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    for &t in totals {
        if t > 0.0 {
            let p = t / sum;
            h -= p * p.ln();
        }
    }
    h
}

impl TreeBuilder<'_> {
    fn build(&mut self, members: &[(usize, f64)], depth: usize) -> usize {
        let class_count = self.ds.class_count();
        let mut totals = vec![0.0; class_count];
        for &(i, w) in members {
            totals[self.ds.label(i)] += w;
        }
        let majority = argmax_lowest(&totals);
        let pure = totals.iter().filter(|&&t| t > 0.0).count() <= 1;
        if pure || depth >= self.max_depth {
            self.nodes.push(TreeNode::Leaf { class: majority });
            return self.nodes.len() - 1;
        }

        let parent_entropy = entropy(&totals);
        let total_w: f64 = totals.iter().sum();
        // Zero-gain splits are allowed on impure nodes (the first candidate
        // wins ties); requiring strictly positive gain would make patterns
        // like XOR unlearnable at any depth.
        let mut best: Option<(f64, usize, f64)> = None; // (gain, feature, threshold)
        for feature in 0..self.ds.dim() {
            let mut order: Vec<(f64, usize, f64)> = members
                .iter()
                .map(|&(i, w)| (self.ds.features(i)[feature], i, w))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut left = vec![0.0; class_count];
            let mut right = totals.clone();
            for p in 0..order.len().saturating_sub(1) {
                let (value, i, w) = order[p];
                left[self.ds.label(i)] += w;
                right[self.ds.label(i)] -= w;
                let next_value = order[p + 1].0;
                if next_value <= value {
                    continue;
                }
                let left_w: f64 = left.iter().sum();
                let right_w = total_w - left_w;
                let gain = parent_entropy
                    - (left_w * entropy(&left) + right_w * entropy(&right)) / total_w;
                if best.map_or(true, |(g, _, _)| gain > g + 1e-15) {
                    best = Some((gain, feature, 0.5 * (value + next_value)));
                }
            }
        }

        let Some((_, feature, threshold)) = best else {
            self.nodes.push(TreeNode::Leaf { class: majority });
            return self.nodes.len() - 1;
        };
        let (left_members, right_members): (Vec<_>, Vec<_>) = members
            .iter()
            .partition(|&&(i, _)| self.ds.features(i)[feature] <= threshold);
        let left = self.build(&left_members, depth + 1);
        let right = self.build(&right_members, depth + 1);
        self.nodes.push(TreeNode::Split {
            feature,
            threshold,
            left,
            right,
        });
        self.nodes.len() - 1
    }
}

/// Greedy top-down tree maximizing weighted information gain, with leaves
/// predicting the weighted-majority class. `max_depth` counts split levels
/// (1 = stump shape).
pub fn train_tree(ds: &Dataset, dist: &WeightDistribution, max_depth: usize) -> WeakHypothesis {
    assert!(max_depth >= 1);
    assert_eq!(dist.len(), ds.n());
    let members = active_indices(ds, dist);
    let mut builder = TreeBuilder {
        ds,
        max_depth,
        nodes: Vec::new(),
    };
    let root = builder.build(&members, 0);
    let mut nodes = builder.nodes;
    // The recursion appends parents after children; move the root to slot 0
    // for a fixed entry point.
    if root != 0 {
        nodes.swap(0, root);
        for node in nodes.iter_mut() {
            if let TreeNode::Split { left, right, .. } = node {
                for child in [left, right] {
                    if *child == 0 {
                        *child = root;
                    } else if *child == root {
                        *child = 0;
                    }
                }
            }
        }
    }
    WeakHypothesis::Tree(Tree {
        nodes,
        class_count: ds.class_count(),
        dim: ds.dim(),
    })
}

/// Stores the (positively) weighted sample; prediction is the class with the
/// largest summed weight over the k nearest stored points.
pub fn train_knn(
    ds: &Dataset,
    dist: &WeightDistribution,
    k: usize,
) -> Result<WeakHypothesis, WeakError> {
    if k < 1 || k > ds.n() {
        return Err(WeakError::InvalidK { k, n: ds.n() });
    }
    assert_eq!(dist.len(), ds.n());
    let points: Vec<StoredPoint> = active_indices(ds, dist)
        .into_iter()
        .map(|(i, w)| StoredPoint {
            features: ds.features(i).to_vec(),
            label: ds.label(i),
            weight: w,
            source: i,
        })
        .collect();
    Ok(WeakHypothesis::Knn(KnnModel {
        k,
        points,
        class_count: ds.class_count(),
        dim: ds.dim(),
    }))
}

/// Trains one weak hypothesis according to the learner configuration.
pub fn train(
    ds: &Dataset,
    dist: &WeightDistribution,
    learner: Learner,
) -> Result<WeakHypothesis, WeakError> {
    match learner {
        Learner::Stump => Ok(train_stump(ds, dist)),
        Learner::Tree { max_depth } => Ok(train_tree(ds, dist, max_depth)),
        Learner::Knn { k } => train_knn(ds, dist, k),
    }
}

/// Weighted training error: the summed weight of misclassified instances,
/// evaluated leave-one-out for kNN.
pub fn weighted_error(h: &WeakHypothesis, ds: &Dataset, dist: &WeightDistribution) -> f64 {
    let mut err = 0.0;
    for i in 0..ds.n() {
        let w = dist.get(i);
        if w == 0.0 {
            continue;
        }
        if h.predict_class_on_train(i, ds.features(i)) != ds.label(i) {
            err += w;
        }
    }
    err
}
