//! Imbalance-aware evaluation: confusion matrix, G-Mean, binary AUC, and the
//! pairwise-averaged multi-class AUC.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("class {0} has no instances in the evaluation set")]
    AbsentClass(usize),
    #[error("length mismatch: {0} predictions for {1} labels")]
    LengthMismatch(usize, usize),
    #[error("{0}")]
    Invalid(String),
}

/// Evaluation summary of one model on one labeled set. `auc` is binary-only;
/// `avg_auc` needs every class present in the set. Both are omitted (with a
/// warning) when undefined.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub n_test: usize,
    pub confusion: Vec<Vec<usize>>,
    pub per_class_recall: Vec<f64>,
    pub accuracy: f64,
    pub g_mean: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub avg_auc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Row `confusion[true][predicted]` counts.
pub fn confusion_matrix(
    labels: &[usize],
    predictions: &[usize],
    class_count: usize,
) -> Result<Vec<Vec<usize>>, MetricError> {
    if labels.len() != predictions.len() {
        return Err(MetricError::LengthMismatch(predictions.len(), labels.len()));
    }
    let mut m = vec![vec![0usize; class_count]; class_count];
    for (&l, &p) in labels.iter().zip(predictions) {
        if l >= class_count || p >= class_count {
            return Err(MetricError::Invalid(format!(
                "label {l} / prediction {p} outside 0..{class_count}"
            )));
        }
        m[l][p] += 1;
    }
    Ok(m)
}

pub fn per_class_recall(confusion: &[Vec<usize>]) -> Result<Vec<f64>, MetricError> {
    confusion
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let total: usize = row.iter().sum();
            if total == 0 {
                Err(MetricError::AbsentClass(j))
            } else {
                Ok(row[j] as f64 / total as f64)
            }
        })
        .collect()
}

/// Geometric mean of per-class recalls; any zero recall collapses it to 0.
pub fn g_mean(recalls: &[f64]) -> f64 {
    let product: f64 = recalls.iter().product();
    if product <= 0.0 {
        0.0
    } else {
        product.powf(1.0 / recalls.len() as f64)
    }
}

/// Mann-Whitney AUC: the fraction of (positive, negative) pairs where the
/// positive carries the higher score, ties counted one half. `positive` is
/// the class treated as positive; every other label counts as negative.
/// Computed by ranking, so it is O(n log n); tests cross-check the pairwise
/// definition directly.
pub fn auc_binary(scores: &[f64], labels: &[usize], positive: usize) -> Result<f64, MetricError> {
    if scores.len() != labels.len() {
        return Err(MetricError::LengthMismatch(scores.len(), labels.len()));
    }
    let n = scores.len();
    let pos = labels.iter().filter(|&&l| l == positive).count();
    let neg = n - pos;
    if pos == 0 {
        return Err(MetricError::AbsentClass(positive));
    }
    if neg == 0 {
        return Err(MetricError::Invalid("no negative instances present".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Average ranks over tied scores (1-based ranks).
    let mut rank = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            rank[idx] = avg;
        }
        i = j + 1;
    }
    let rank_sum: f64 = (0..n)
        .filter(|&i| labels[i] == positive)
        .map(|i| rank[i])
        .sum();
    let u = rank_sum - (pos * (pos + 1)) as f64 / 2.0;
    Ok(u / (pos as f64 * neg as f64))
}

/// Pairwise-averaged multi-class AUC: for every unordered class pair (i, j),
/// restrict to instances of those two classes and average the AUC of class
/// i's score (i positive) with the AUC of class j's score (j positive); the
/// result is the mean over all pairs. `score_vectors[r]` holds the length-|C|
/// per-class scores of instance r.
pub fn avg_auc(
    score_vectors: &[Vec<f64>],
    labels: &[usize],
    class_count: usize,
) -> Result<f64, MetricError> {
    if score_vectors.len() != labels.len() {
        return Err(MetricError::LengthMismatch(
            score_vectors.len(),
            labels.len(),
        ));
    }
    if class_count < 2 {
        return Err(MetricError::Invalid("need at least two classes".into()));
    }
    for j in 0..class_count {
        if !labels.contains(&j) {
            return Err(MetricError::AbsentClass(j));
        }
    }
    let mut total = 0.0;
    let mut pairs = 0usize;
    for i in 0..class_count {
        for j in i + 1..class_count {
            let subset: Vec<usize> = (0..labels.len())
                .filter(|&r| labels[r] == i || labels[r] == j)
                .collect();
            let labels_ij: Vec<usize> = subset.iter().map(|&r| labels[r]).collect();
            let score_i: Vec<f64> = subset.iter().map(|&r| score_vectors[r][i]).collect();
            let score_j: Vec<f64> = subset.iter().map(|&r| score_vectors[r][j]).collect();
            let a_ij = auc_binary(&score_i, &labels_ij, i)?;
            let a_ji = auc_binary(&score_j, &labels_ij, j)?;
            total += 0.5 * (a_ij + a_ji);
            pairs += 1;
        }
    }
    Ok(total / pairs as f64)
}

/// Builds the full report from predictions and score vectors. For binary
/// problems the AUC score is `s_1 - s_0`; the pairwise average uses the raw
/// per-class scores. Metrics that are undefined on this set (a class absent,
/// or AUC on a multi-class problem) are omitted with a warning.
pub fn evaluate(
    labels: &[usize],
    predictions: &[usize],
    score_vectors: &[Vec<f64>],
    class_count: usize,
) -> Result<EvaluationReport, MetricError> {
    let confusion = confusion_matrix(labels, predictions, class_count)?;
    let mut warnings = Vec::new();

    let (per_class, g) = match per_class_recall(&confusion) {
        Ok(recalls) => {
            let g = g_mean(&recalls);
            (recalls, g)
        }
        Err(MetricError::AbsentClass(j)) => {
            warnings.push(format!("class {j} absent; g-mean undefined, reported 0"));
            let recalls = confusion
                .iter()
                .enumerate()
                .map(|(c, row)| {
                    let total: usize = row.iter().sum();
                    if total == 0 {
                        0.0
                    } else {
                        row[c] as f64 / total as f64
                    }
                })
                .collect();
            (recalls, 0.0)
        }
        Err(e) => return Err(e),
    };

    let correct: usize = (0..class_count).map(|c| confusion[c][c]).sum();
    let accuracy = correct as f64 / labels.len() as f64;

    let auc = if class_count == 2 {
        let scores: Vec<f64> = score_vectors.iter().map(|s| s[1] - s[0]).collect();
        match auc_binary(&scores, labels, 1) {
            Ok(a) => Some(a),
            Err(e) => {
                warnings.push(format!("auc omitted: {e}"));
                None
            }
        }
    } else {
        None
    };

    let avg = match avg_auc(score_vectors, labels, class_count) {
        Ok(a) => Some(a),
        Err(e) => {
            warnings.push(format!("avg_auc omitted: {e}"));
            None
        }
    };

    Ok(EvaluationReport {
        n_test: labels.len(),
        confusion,
        per_class_recall: per_class,
        accuracy,
        g_mean: g,
        auc,
        avg_auc: avg,
        warning: if warnings.is_empty() {
            None
        } else {
            Some(warnings.join("; "))
        },
    })
}
