//! Benchmark grid configuration (JSON).

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchConfig {
    pub datasets: Vec<DatasetSpec>,
    pub algorithms: Vec<String>,
    #[serde(default = "LearnerSpec::default")]
    pub base: LearnerSpec,
    #[serde(default = "default_t_max")]
    pub t_max: usize,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default = "default_cv_folds")]
    pub cv_folds: usize,
}

fn default_t_max() -> usize {
    10
}

fn default_train_fraction() -> f64 {
    0.8
}

fn default_cv_folds() -> usize {
    3
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetSpec {
    /// Two-class Gaussian cell; the generation seed is the experiment seed.
    Synthetic {
        size: usize,
        ir: f64,
        center: f64,
        #[serde(default)]
        outlier_rate: f64,
    },
    Csv {
        path: String,
        #[serde(default)]
        has_header: bool,
    },
}

impl DatasetSpec {
    pub fn id(&self) -> String {
        match self {
            DatasetSpec::Synthetic {
                size,
                ir,
                center,
                outlier_rate,
            } => format!("synthetic(n={size},ir={ir},c={center},out={outlier_rate})"),
            DatasetSpec::Csv { path, .. } => format!("csv({path})"),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerSpec {
    Stump,
    Tree { max_depth: usize },
    Knn { k: usize },
}

impl LearnerSpec {
    fn default() -> LearnerSpec {
        LearnerSpec::Knn { k: 5 }
    }

    pub fn to_learner(self) -> lexiboost_core::weak::Learner {
        match self {
            LearnerSpec::Stump => lexiboost_core::weak::Learner::Stump,
            LearnerSpec::Tree { max_depth } => lexiboost_core::weak::Learner::Tree { max_depth },
            LearnerSpec::Knn { k } => lexiboost_core::weak::Learner::Knn { k },
        }
    }
}

/// Comparator cost grids; the defaults are the usual sweep
/// (nu in {0.1, 0.2} so D in {10, 5}; beta in {2, 4, 8};
/// lower-cap divisors in {25, 50, 100}).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Grids {
    #[serde(default = "default_nu")]
    pub nu: Vec<f64>,
    #[serde(default = "default_beta")]
    pub beta: Vec<f64>,
    #[serde(default = "default_d_lb")]
    pub d_lb: Vec<f64>,
}

fn default_nu() -> Vec<f64> {
    vec![0.1, 0.2]
}

fn default_beta() -> Vec<f64> {
    vec![2.0, 4.0, 8.0]
}

fn default_d_lb() -> Vec<f64> {
    vec![25.0, 50.0, 100.0]
}

impl Default for Grids {
    fn default() -> Grids {
        Grids {
            nu: default_nu(),
            beta: default_beta(),
            d_lb: default_d_lb(),
        }
    }
}
