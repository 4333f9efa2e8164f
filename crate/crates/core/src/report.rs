//! Serializable training-report payloads: what each trainer did, round by
//! round, in a shape the experiment harness can write out for audit.

use crate::dual_lexiboost::{DualLexiOutcome, RoundRecord};
use crate::ensemble::AdaBoostRun;
use crate::lexiboost::LexiBoostOutcome;
use crate::lp_variants::DualVariantOutcome;
use serde::{Deserialize, Serialize};

/// Compact view of a weight distribution: its extremes and entropy.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistSummary {
    pub min: f64,
    pub max: f64,
    pub entropy: f64,
}

impl DistSummary {
    pub fn from_weights(weights: &[f64]) -> DistSummary {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut entropy = 0.0;
        for &w in weights {
            min = min.min(w);
            max = max.max(w);
            if w > 0.0 {
                entropy -= w * w.ln();
            }
        }
        DistSummary { min, max, entropy }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoundSummary {
    pub round: usize,
    pub epsilon: f64,
    pub s_values: Vec<f64>,
    pub dist: DistSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_scale: Option<Vec<f64>>,
}

impl RoundSummary {
    fn from_record(rec: &RoundRecord) -> RoundSummary {
        RoundSummary {
            round: rec.round,
            epsilon: rec.epsilon,
            s_values: rec.s_values.clone(),
            dist: DistSummary::from_weights(&rec.dist),
            d_scale: rec.d_scale.clone(),
        }
    }
}

/// What a training run produced, minus the model itself.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrainReport {
    pub algorithm: String,
    pub class_count: usize,
    pub components: usize,
    pub alpha: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage1_min_avg_losses: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub achieved_avg_losses: Option<Vec<f64>>,
    pub epsilons: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_a: Option<Vec<RoundSummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_c: Option<Vec<RoundSummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round_s: Option<Vec<f64>>,
    pub fallback: bool,
}

impl TrainReport {
    pub fn from_adaboost(run: &AdaBoostRun, class_count: usize) -> TrainReport {
        let total: f64 = run.alphas.iter().sum();
        TrainReport {
            algorithm: "adaboost".into(),
            class_count,
            components: run.components.len(),
            alpha: run.alphas.iter().map(|a| a / total).collect(),
            chi: None,
            stage1_min_avg_losses: None,
            achieved_avg_losses: None,
            epsilons: run.epsilons.clone(),
            phase_a: None,
            phase_c: None,
            round_s: None,
            fallback: run.fallback,
        }
    }

    pub fn from_lexiboost(out: &LexiBoostOutcome) -> TrainReport {
        TrainReport {
            algorithm: "lexiboost".into(),
            class_count: out.ensemble.class_count(),
            components: out.ensemble.components().len(),
            alpha: out.stage2.alpha.clone(),
            chi: Some(out.stage2.chi),
            stage1_min_avg_losses: Some(out.stage1.min_avg_losses()),
            achieved_avg_losses: Some(out.stage2.achieved_avg_losses.clone()),
            epsilons: out.epsilons.clone(),
            phase_a: None,
            phase_c: None,
            round_s: None,
            fallback: out.fallback,
        }
    }

    pub fn from_dual_lexiboost(out: &DualLexiOutcome) -> TrainReport {
        TrainReport {
            algorithm: "dual-lexiboost".into(),
            class_count: out.ensemble.class_count(),
            components: out.ensemble.components().len(),
            alpha: out.stage2.alpha.clone(),
            chi: Some(out.stage2.chi),
            stage1_min_avg_losses: Some(out.stage1.min_avg_losses()),
            achieved_avg_losses: Some(out.stage2.achieved_avg_losses.clone()),
            epsilons: out.phase_c.iter().map(|r| r.epsilon).collect(),
            phase_a: Some(out.phase_a.iter().map(RoundSummary::from_record).collect()),
            phase_c: Some(out.phase_c.iter().map(RoundSummary::from_record).collect()),
            round_s: None,
            fallback: out.fallback,
        }
    }

    pub fn from_variant(out: &DualVariantOutcome, algorithm: &str) -> TrainReport {
        TrainReport {
            algorithm: algorithm.into(),
            class_count: out.ensemble.class_count(),
            components: out.ensemble.components().len(),
            alpha: out.ensemble.weights().to_vec(),
            chi: None,
            stage1_min_avg_losses: None,
            achieved_avg_losses: None,
            epsilons: out.rounds.iter().map(|r| r.epsilon).collect(),
            phase_a: None,
            phase_c: None,
            round_s: Some(out.rounds.iter().map(|r| r.s).collect()),
            fallback: out.fallback,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_of_uniform_weights() {
        let n = 8;
        let weights = vec![1.0 / n as f64; n];
        let summary = DistSummary::from_weights(&weights);
        assert!((summary.entropy - (n as f64).ln()).abs() < 1e-12);
        assert_eq!(summary.min, summary.max);
    }

    #[test]
    fn report_serializes_without_empty_options() {
        let report = TrainReport {
            algorithm: "adaboost".into(),
            class_count: 2,
            components: 3,
            alpha: vec![0.5, 0.3, 0.2],
            chi: None,
            stage1_min_avg_losses: None,
            achieved_avg_losses: None,
            epsilons: vec![0.2, 0.3, 0.4],
            phase_a: None,
            phase_c: None,
            round_s: None,
            fallback: false,
        };
        let text = serde_json::to_string(&report).unwrap();
        assert!(!text.contains("chi"));
        assert!(!text.contains("phase_a"));
        let back: TrainReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.alpha, report.alpha);
    }
}
