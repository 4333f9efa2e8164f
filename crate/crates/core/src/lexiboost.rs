//! Two-stage lexicographic component-weight selection.
//!
//! Stage one solves, independently for every class, the LP minimizing that
//! class's average hinge loss over simplex component weights. Stage two then
//! minimizes the maximum excess of any class's average hinge loss beyond its
//! stage-one minimum. The result balances the classes without any
//! misclassification-cost parameter.

use crate::data::Dataset;
use crate::ensemble::{
    hinge_loss, run_adaboost, run_adaboost_multiclass, Ensemble, EnsembleError, MarginMatrix,
};
use crate::lp::{self, LinearProgram, LpError, LpStatus, Relation};
use crate::par;
use crate::weak::Learner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StageError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("{context}: solver reported {status:?}")]
    BadStatus {
        context: &'static str,
        status: LpStatus,
    },
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error("per-class costs: {0}")]
    BadCosts(String),
}

/// Stage-one outcome for one class: the weights minimizing its average hinge
/// loss, the per-instance losses at that optimum (in class-index order), and
/// the minimum itself.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageOneClass {
    pub alpha: Vec<f64>,
    pub lambda: Vec<f64>,
    pub min_avg_loss: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageOneResult {
    pub per_class: Vec<StageOneClass>,
}

impl StageOneResult {
    /// Per-class loss-sum references `e^T lambda*_j` consumed by stage two
    /// and its dual.
    pub fn loss_sums(&self) -> Vec<f64> {
        self.per_class
            .iter()
            .map(|c| c.lambda.iter().sum())
            .collect()
    }

    pub fn min_avg_losses(&self) -> Vec<f64> {
        self.per_class.iter().map(|c| c.min_avg_loss).collect()
    }
}

/// Stage-two outcome: the final simplex weights, the minimized maximum
/// deviation, and the per-class average hinge losses achieved under them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageTwoResult {
    pub alpha: Vec<f64>,
    pub chi: f64,
    pub achieved_avg_losses: Vec<f64>,
}

/// Stage-one LP for class `j`: minimize `(1/n_j) sum lambda_i` over simplex
/// weights and nonnegative per-instance losses, subject to
/// `1 - margin_i <= lambda_i` for the class's rows only.
pub fn stage1_lp(mm: &MarginMatrix, class: usize) -> LinearProgram {
    let t = mm.num_components();
    let members = mm.class_indices(class);
    let n_j = members.len();
    // Variables: alpha_0..t, then lambda per class row.
    let mut lp = LinearProgram::minimize(t + n_j);
    let mut obj = vec![0.0; t + n_j];
    for v in obj.iter_mut().skip(t) {
        *v = 1.0 / n_j as f64;
    }
    lp.set_objective(obj);
    for (r, &i) in members.iter().enumerate() {
        let mut coeffs = vec![0.0; t + n_j];
        coeffs[..t].copy_from_slice(mm.row(i));
        coeffs[t + r] = 1.0;
        lp.add_row(coeffs, Relation::Ge, 1.0);
    }
    let mut simplex_row = vec![0.0; t + n_j];
    for v in simplex_row.iter_mut().take(t) {
        *v = 1.0;
    }
    lp.add_row(simplex_row, Relation::Eq, 1.0);
    lp
}

/// The Lagrangian dual of the stage-one LP, before any sum-to-one repair:
/// maximize `sum_{i in c_j} D(i) - s` subject to the per-component aggregate
/// margins staying at most `s` and `0 <= D(i) <= 1/n_j`. By strong duality
/// its optimum equals the stage-one minimum; tests and the acceptance suite
/// verify that equality.
pub fn stage1_dual_lp(mm: &MarginMatrix, class: usize) -> LinearProgram {
    let t = mm.num_components();
    let members = mm.class_indices(class);
    let n_j = members.len();
    // Variables: D per class row, then s (free).
    let mut lp = LinearProgram::maximize(n_j + 1);
    let mut obj = vec![1.0; n_j + 1];
    obj[n_j] = -1.0;
    lp.set_objective(obj);
    for tau in 0..t {
        let mut coeffs = vec![0.0; n_j + 1];
        for (r, &i) in members.iter().enumerate() {
            coeffs[r] = mm.entry(i, tau);
        }
        coeffs[n_j] = -1.0;
        lp.add_row(coeffs, Relation::Le, 0.0);
    }
    for r in 0..n_j {
        lp.set_bounds(r, 0.0, 1.0 / n_j as f64);
    }
    lp.set_free(n_j);
    lp
}

/// Solves stage one for a single class.
pub fn solve_stage1(mm: &MarginMatrix, class: usize) -> Result<StageOneClass, StageError> {
    let t = mm.num_components();
    let n_j = mm.class_indices(class).len();
    let sol = lp::solve(&stage1_lp(mm, class))?;
    if sol.status != LpStatus::Optimal {
        return Err(StageError::BadStatus {
            context: "per-class hinge-loss minimization",
            status: sol.status,
        });
    }
    let point = sol.point();
    Ok(StageOneClass {
        alpha: point[..t].to_vec(),
        lambda: point[t..t + n_j].to_vec(),
        min_avg_loss: sol.objective(),
    })
}

/// Solves stage one for every class (independent problems, run in parallel
/// when the `parallel` feature is on).
pub fn solve_stage1_all(mm: &MarginMatrix) -> Result<StageOneResult, StageError> {
    let classes: Vec<usize> = (0..mm.class_count()).collect();
    let per_class = par::map_collect(&classes, |&j| solve_stage1(mm, j))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StageOneResult { per_class })
}

/// Stage-two LP: minimize `chi` subject to every class's cost-scaled average
/// hinge loss exceeding its stage-one reference by at most `chi`, over all
/// margin rows. `costs` is the optional known per-class cost vector (defaults
/// to 1 for every class, which is the plain program).
pub fn stage2_lp(
    mm: &MarginMatrix,
    loss_sums: &[f64],
    costs: Option<&[f64]>,
) -> Result<LinearProgram, StageError> {
    let t = mm.num_components();
    let n = mm.n();
    let c = mm.class_count();
    if let Some(costs) = costs {
        if costs.len() != c {
            return Err(StageError::BadCosts(format!(
                "{} costs for {c} classes",
                costs.len()
            )));
        }
        if costs.iter().any(|&x| !(x > 0.0)) {
            return Err(StageError::BadCosts("costs must be positive".into()));
        }
    }
    // Variables: alpha_0..t, lambda_0..n, chi.
    let vars = t + n + 1;
    let chi = t + n;
    let mut lp = LinearProgram::minimize(vars);
    let mut obj = vec![0.0; vars];
    obj[chi] = 1.0;
    lp.set_objective(obj);
    for i in 0..n {
        let mut coeffs = vec![0.0; vars];
        coeffs[..t].copy_from_slice(mm.row(i));
        coeffs[t + i] = 1.0;
        lp.add_row(coeffs, Relation::Ge, 1.0);
    }
    for j in 0..c {
        let cost = costs.map_or(1.0, |cs| cs[j]);
        let n_j = mm.class_indices(j).len() as f64;
        let scale = cost / n_j;
        let mut coeffs = vec![0.0; vars];
        for &i in mm.class_indices(j) {
            coeffs[t + i] = scale;
        }
        coeffs[chi] = -1.0;
        lp.add_row(coeffs, Relation::Le, scale * loss_sums[j]);
    }
    let mut simplex_row = vec![0.0; vars];
    for v in simplex_row.iter_mut().take(t) {
        *v = 1.0;
    }
    lp.add_row(simplex_row, Relation::Eq, 1.0);
    Ok(lp)
}

/// Solves stage two against the stage-one references. The achieved per-class
/// losses are recomputed from the returned weights via the hinge identity
/// (`lambda_i = max(0, 1 - margin_i)` is an optimal loss vector for any
/// optimal alpha, and is immune to degenerate-vertex slack).
pub fn solve_stage2(
    mm: &MarginMatrix,
    stage1: &StageOneResult,
    costs: Option<&[f64]>,
) -> Result<StageTwoResult, StageError> {
    let t = mm.num_components();
    let loss_sums = stage1.loss_sums();
    let lp = stage2_lp(mm, &loss_sums, costs)?;
    let sol = lp::solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(StageError::BadStatus {
            context: "maximum-deviation minimization",
            status: sol.status,
        });
    }
    let alpha = sol.point()[..t].to_vec();
    let achieved = achieved_avg_losses(mm, &alpha);
    Ok(StageTwoResult {
        alpha,
        chi: sol.objective(),
        achieved_avg_losses: achieved,
    })
}

/// Per-class average hinge losses under the given weights.
pub fn achieved_avg_losses(mm: &MarginMatrix, alpha: &[f64]) -> Vec<f64> {
    (0..mm.class_count())
        .map(|j| {
            let members = mm.class_indices(j);
            members
                .iter()
                .map(|&i| hinge_loss(mm.margin_of(i, alpha)))
                .sum::<f64>()
                / members.len() as f64
        })
        .collect()
}

/// A trained two-stage model plus its audit trail.
#[derive(Clone, Debug)]
pub struct LexiBoostOutcome {
    pub ensemble: Ensemble,
    pub stage1: StageOneResult,
    pub stage2: StageTwoResult,
    /// Per-round weighted errors of the component generator.
    pub epsilons: Vec<f64>,
    /// Set when the component generator stalled on its first round and the
    /// model degenerated to that single component.
    pub fallback: bool,
}

/// Runs the full pipeline: generate components (binary AdaBoost, or the
/// multi-class loop for more classes), build the margin matrix, solve the
/// per-class stage, then the deviation stage. Optional per-class costs feed
/// the cost-weighted variant of the final program.
pub fn train_lexiboost_with_costs(
    ds: &Dataset,
    learner: Learner,
    t_max: usize,
    costs: Option<&[f64]>,
) -> Result<LexiBoostOutcome, StageError> {
    let run = if ds.class_count() == 2 {
        run_adaboost(ds, learner, t_max)?
    } else {
        run_adaboost_multiclass(ds, learner, t_max)?
    };
    let mm = MarginMatrix::build(&run.components, ds)?;
    let stage1 = solve_stage1_all(&mm)?;
    let stage2 = solve_stage2(&mm, &stage1, costs)?;
    let ensemble = Ensemble::new(run.components, stage2.alpha.clone(), ds.class_count())?;
    Ok(LexiBoostOutcome {
        ensemble,
        stage1,
        stage2,
        epsilons: run.epsilons,
        fallback: run.fallback,
    })
}

pub fn train_lexiboost(
    ds: &Dataset,
    learner: Learner,
    t_max: usize,
) -> Result<LexiBoostOutcome, StageError> {
    train_lexiboost_with_costs(ds, learner, t_max, None)
}
