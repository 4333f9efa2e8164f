//! Margin machinery, the AdaBoost component generators, and weighted-vote
//! ensemble prediction.
//!
//! Margins are normalized so that a fully correct crisp prediction scores +1
//! for any class count: binary margins are `y * f` with labels in {-1, +1},
//! multi-class margins are `(1/|C|) * y^T f` over sign label vectors. The raw
//! (unnormalized) multi-class margin is available behind [`MarginScale`] for
//! sensitivity studies.

use crate::data::Dataset;
use crate::par;
use crate::weak::{self, Learner, WeakHypothesis, WeightDistribution};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("operation requires a binary dataset, got {0} classes")]
    NotBinary(usize),
    #[error("component {index} expects {expected} classes, dataset has {got}")]
    ClassMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("no components")]
    Empty,
    #[error("invalid component weights: {0}")]
    InvalidWeights(String),
    #[error(transparent)]
    Weak(#[from] weak::WeakError),
    #[error("model i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("model parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Normalization of multi-class margins.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarginScale {
    /// `y^T f / |C|`: a correct crisp prediction scores +1 for any class
    /// count, so the hinge target of 1 is meaningful throughout.
    Normalized,
    /// Plain `y^T f`.
    Raw,
}

/// Per-instance, per-component signed agreement values, plus the class layout
/// of the underlying dataset. This is the coefficient source of every LP.
#[derive(Clone, Debug)]
pub struct MarginMatrix {
    values: Vec<f64>,
    n: usize,
    t: usize,
    class_of: Vec<usize>,
    class_count: usize,
    class_indices: Vec<Vec<usize>>,
}

impl MarginMatrix {
    /// Margins of `components` on the dataset they were trained on.
    /// Training-point predictions are evaluated the same way boosting errors
    /// are: sample-storing learners exclude their own copy of the instance.
    pub fn build(
        components: &[WeakHypothesis],
        ds: &Dataset,
    ) -> Result<MarginMatrix, EnsembleError> {
        Self::build_with_scale(components, ds, MarginScale::Normalized)
    }

    pub fn build_with_scale(
        components: &[WeakHypothesis],
        ds: &Dataset,
        scale: MarginScale,
    ) -> Result<MarginMatrix, EnsembleError> {
        if components.is_empty() {
            return Err(EnsembleError::Empty);
        }
        let class_count = ds.class_count();
        for (index, c) in components.iter().enumerate() {
            if c.class_count() != class_count {
                return Err(EnsembleError::ClassMismatch {
                    index,
                    expected: c.class_count(),
                    got: class_count,
                });
            }
        }
        let c = class_count as f64;
        let (correct, wrong) = match scale {
            MarginScale::Normalized => (1.0, (c - 4.0) / c),
            MarginScale::Raw => (c, c - 4.0),
        };
        let rows = par::map_range(ds.n(), |i| {
            let x = ds.features(i);
            let label = ds.label(i);
            components
                .iter()
                .map(|h| {
                    if h.predict_class_on_train(i, x) == label {
                        correct
                    } else {
                        wrong
                    }
                })
                .collect::<Vec<f64>>()
        });
        let class_of: Vec<usize> = (0..ds.n()).map(|i| ds.label(i)).collect();
        Ok(Self::from_rows(
            rows.into_iter().flatten().collect(),
            components.len(),
            class_of,
            class_count,
        ))
    }

    /// Builds a matrix from raw margin rows; used by tests and toy setups.
    pub fn from_rows(
        values: Vec<f64>,
        t: usize,
        class_of: Vec<usize>,
        class_count: usize,
    ) -> MarginMatrix {
        let n = class_of.len();
        assert_eq!(values.len(), n * t);
        let mut class_indices = vec![Vec::new(); class_count];
        for (i, &c) in class_of.iter().enumerate() {
            class_indices[c].push(i);
        }
        MarginMatrix {
            values,
            n,
            t,
            class_of,
            class_count,
            class_indices,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of components (columns).
    pub fn num_components(&self) -> usize {
        self.t
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn entry(&self, i: usize, t: usize) -> f64 {
        self.values[i * self.t + t]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.t..(i + 1) * self.t]
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_indices(&self, class: usize) -> &[usize] {
        &self.class_indices[class]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.class_indices.iter().map(|c| c.len()).collect()
    }

    /// Margin of instance `i` under component weights `alpha`.
    pub fn margin_of(&self, i: usize, alpha: &[f64]) -> f64 {
        margin(alpha, self.row(i))
    }

    /// Builds a matrix from per-component margin columns (see
    /// [`margin_column`]); the round-by-round dual loops grow matrices this
    /// way instead of re-predicting older components.
    pub fn from_columns(columns: &[Vec<f64>], ds: &Dataset) -> MarginMatrix {
        let n = ds.n();
        let t = columns.len();
        let mut values = Vec::with_capacity(n * t);
        for i in 0..n {
            for col in columns {
                debug_assert_eq!(col.len(), n);
                values.push(col[i]);
            }
        }
        let class_of = (0..n).map(|i| ds.label(i)).collect();
        Self::from_rows(values, t, class_of, ds.class_count())
    }
}

/// Margin column of one component on its training set (normalized scale,
/// leave-one-out semantics for sample-storing learners).
pub fn margin_column(h: &WeakHypothesis, ds: &Dataset) -> Vec<f64> {
    let c = ds.class_count() as f64;
    let wrong = (c - 4.0) / c;
    par::map_range(ds.n(), |i| {
        if h.predict_class_on_train(i, ds.features(i)) == ds.label(i) {
            1.0
        } else {
            wrong
        }
    })
}

/// Weighted-vote margin `sum_t alpha_t m[i][t]`.
pub fn margin(alpha: &[f64], margins: &[f64]) -> f64 {
    alpha.iter().zip(margins).map(|(a, m)| a * m).sum()
}

/// Shortfall from the ideal margin: 0 for margins >= 1, else `1 - margin`.
pub fn hinge_loss(rho: f64) -> f64 {
    if rho >= 1.0 {
        0.0
    } else {
        1.0 - rho
    }
}

/// Ordered component hypotheses plus simplex-constrained weights; the trained
/// artifact every algorithm here produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    class_count: usize,
    weights: Vec<f64>,
    components: Vec<WeakHypothesis>,
}

impl Ensemble {
    /// Weights must lie on the simplex: nonnegative, summing to 1 within
    /// 1e-7.
    pub fn new(
        components: Vec<WeakHypothesis>,
        weights: Vec<f64>,
        class_count: usize,
    ) -> Result<Ensemble, EnsembleError> {
        if components.is_empty() {
            return Err(EnsembleError::Empty);
        }
        if components.len() != weights.len() {
            return Err(EnsembleError::InvalidWeights(format!(
                "{} weights for {} components",
                weights.len(),
                components.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < -1e-12) {
            return Err(EnsembleError::InvalidWeights(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-7 {
            return Err(EnsembleError::InvalidWeights(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Ensemble {
            class_count,
            weights: weights.into_iter().map(|w| w.max(0.0)).collect(),
            components,
        })
    }

    /// Builds an ensemble from arbitrary positive votes by rescaling them
    /// onto the simplex (predictions are invariant to positive rescaling).
    pub fn from_votes(
        components: Vec<WeakHypothesis>,
        votes: Vec<f64>,
        class_count: usize,
    ) -> Result<Ensemble, EnsembleError> {
        let sum: f64 = votes.iter().sum();
        if !(sum > 0.0) {
            return Err(EnsembleError::InvalidWeights(
                "vote total must be positive".into(),
            ));
        }
        let weights = votes.into_iter().map(|v| v / sum).collect();
        Ensemble::new(components, weights, class_count)
    }

    pub fn components(&self) -> &[WeakHypothesis] {
        &self.components
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Per-class score vector `s_c = sum_t alpha_t f_{t,c}(x)` and the argmax
    /// class (ties to the lower class index).
    pub fn predict(&self, x: &[f64]) -> Result<(usize, Vec<f64>), EnsembleError> {
        let mut scores = vec![0.0; self.class_count];
        for (h, &a) in self.components.iter().zip(&self.weights) {
            let class = h.predict_class(x)?;
            for (c, s) in scores.iter_mut().enumerate() {
                *s += a * if c == class { 1.0 } else { -1.0 };
            }
        }
        Ok((weak::argmax_lowest(&scores), scores))
    }

    /// Fraction of misclassified instances.
    pub fn error_rate(&self, ds: &Dataset) -> Result<f64, EnsembleError> {
        let mut wrong = 0usize;
        for i in 0..ds.n() {
            if self.predict(ds.features(i))?.0 != ds.label(i) {
                wrong += 1;
            }
        }
        Ok(wrong as f64 / ds.n() as f64)
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<(), EnsembleError> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Ensemble, EnsembleError> {
        let file = std::fs::File::open(path)?;
        let model: Ensemble = serde_json::from_reader(std::io::BufReader::new(file))?;
        Ok(model)
    }
}

/// What a component-generation run produced: the hypotheses, their boosting
/// votes, and the error trace.
#[derive(Clone, Debug)]
pub struct AdaBoostRun {
    pub components: Vec<WeakHypothesis>,
    pub alphas: Vec<f64>,
    pub epsilons: Vec<f64>,
    /// Set when the first weak learner was already at chance level and the
    /// run fell back to that single component.
    pub fallback: bool,
}

impl AdaBoostRun {
    /// The classical weighted-vote ensemble (votes renormalized onto the
    /// simplex; the argmax prediction is unchanged by the rescale).
    pub fn into_ensemble(self, class_count: usize) -> Result<Ensemble, EnsembleError> {
        Ensemble::from_votes(self.components, self.alphas, class_count)
    }
}

const PERFECT_EPS: f64 = 1e-12;
const RATIO_CAP: f64 = 1e6;

/// Binary AdaBoost vote for a round error; the ratio is capped at 1e6 so a
/// perfect round keeps a finite vote.
pub fn adaboost_alpha(eps: f64) -> f64 {
    0.5 * (((1.0 - eps) / eps.max(1e-300)).min(RATIO_CAP)).ln()
}

/// Multi-class vote: `ln((1-eps)/eps) + ln(|C|-1)`, same ratio cap.
pub fn multiclass_alpha(eps: f64, class_count: usize) -> f64 {
    (((1.0 - eps) / eps.max(1e-300)).min(RATIO_CAP)).ln() + ((class_count - 1) as f64).ln()
}

/// Classical binary AdaBoost: returns up to `t_max` components with their
/// votes. Stops early on a perfect round (the capped-vote component is kept)
/// or when a round error reaches 0.5 (that component is dropped, unless it is
/// the first, in which case it becomes a single-component fallback).
pub fn run_adaboost(
    ds: &Dataset,
    learner: Learner,
    t_max: usize,
) -> Result<AdaBoostRun, EnsembleError> {
    if ds.class_count() != 2 {
        return Err(EnsembleError::NotBinary(ds.class_count()));
    }
    boost_loop(
        ds,
        learner,
        t_max,
        0.5,
        adaboost_alpha,
        |_, correct, alpha| {
            if correct {
                (-alpha).exp()
            } else {
                alpha.exp()
            }
        },
    )
}

/// Multi-class component generator: weighted-error loop with votes
/// `ln((1-eps)/eps) + ln(|C|-1)`, misclassified weights multiplied by
/// `exp(alpha)`, stopping when a round error reaches `1 - 1/|C|`.
pub fn run_adaboost_multiclass(
    ds: &Dataset,
    learner: Learner,
    t_max: usize,
) -> Result<AdaBoostRun, EnsembleError> {
    let c = ds.class_count();
    let threshold = 1.0 - 1.0 / c as f64;
    boost_loop(
        ds,
        learner,
        t_max,
        threshold,
        move |eps| multiclass_alpha(eps, c),
        |_, correct, alpha| if correct { 1.0 } else { alpha.exp() },
    )
}

fn boost_loop(
    ds: &Dataset,
    learner: Learner,
    t_max: usize,
    stop_eps: f64,
    vote: impl Fn(f64) -> f64,
    reweight: impl Fn(usize, bool, f64) -> f64,
) -> Result<AdaBoostRun, EnsembleError> {
    let n = ds.n();
    let mut dist = WeightDistribution::uniform(n);
    let mut run = AdaBoostRun {
        components: Vec::new(),
        alphas: Vec::new(),
        epsilons: Vec::new(),
        fallback: false,
    };
    for _ in 0..t_max {
        let h = weak::train(ds, &dist, learner)?;
        let eps = weak::weighted_error(&h, ds, &dist);
        if eps >= stop_eps {
            if run.components.is_empty() {
                run.epsilons.push(eps);
                run.components.push(h);
                run.alphas.push(1.0);
                run.fallback = true;
            }
            break;
        }
        run.epsilons.push(eps);
        let alpha = vote(eps);
        if eps <= PERFECT_EPS {
            run.components.push(h);
            run.alphas.push(alpha);
            break;
        }
        let mut weights = dist.weights().to_vec();
        for (i, w) in weights.iter_mut().enumerate() {
            let correct = h.predict_class_on_train(i, ds.features(i)) == ds.label(i);
            *w *= reweight(i, correct, alpha);
        }
        run.components.push(h);
        run.alphas.push(alpha);
        dist = WeightDistribution::from_unnormalized(weights)?;
    }
    Ok(run)
}
