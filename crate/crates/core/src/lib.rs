//! Boosted ensembles whose component weights are selected by linear programs.
//!
//! The centerpiece is a two-stage lexicographic scheme: stage one finds, for
//! every class separately, the component-weight vector minimizing that class's
//! average hinge loss; stage two then picks the weights minimizing the maximum
//! excess over those per-class minima. A dual variant additionally adapts the
//! per-instance training weights between boosting rounds. Both handle class
//! imbalance without tuning a misclassification-cost grid.
//!
//! The crate also ships the classical LP-boosting comparators (hard-margin,
//! soft-margin, and unevenly regularized soft-margin, each with its dual
//! column-generation loop), a self-contained two-phase simplex solver, weak
//! learners (stump, depth-limited tree, weighted kNN), imbalance-aware
//! evaluation metrics, and a synthetic imbalanced-Gaussian data generator.

pub mod data;
pub mod dual_lexiboost;
pub mod ensemble;
pub mod lexiboost;
pub mod lp;
pub mod lp_variants;
pub mod metrics;
mod par;
pub mod report;
pub mod weak;
