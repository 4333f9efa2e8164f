//! The classical LP-boosting comparators: hard-margin weight selection, the
//! soft-margin program, its unevenly regularized two-class variant, and the
//! dual column-generation loops for the hard-margin and uneven programs.
//!
//! The dual soft-margin loop is the `beta = 1`, no-lower-bound special case
//! of the uneven loop, so it shares that code path. Per-instance weight caps
//! in the dual loops use the cost divided by the sample size (`D/n`, and
//! `beta D/n` for the target class), the scale at which a unit-sum weight
//! vector can actually hit them.

use crate::data::Dataset;
use crate::ensemble::{margin_column, Ensemble, EnsembleError, MarginMatrix};
use crate::lp::{self, LinearProgram, LpError, LpStatus, Relation};
use crate::weak::{self, Learner, WeightDistribution};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VariantError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("{context}: solver reported {status:?}")]
    BadStatus {
        context: &'static str,
        status: LpStatus,
    },
    #[error("this formulation is two-class only, got {0} classes")]
    NotBinary(usize),
    #[error(
        "infeasible weight bounds for (D={d}, beta={beta}, D_LB={dlb:?}): \
         lower bounds sum to {lower_sum} and uppers to {upper_sum}, but the weights must sum to 1"
    )]
    InfeasibleBounds {
        d: f64,
        beta: f64,
        dlb: Option<f64>,
        lower_sum: f64,
        upper_sum: f64,
    },
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
}

/// Knobs of the comparator family (defaults follow the usual grid: cost
/// D = 1/nu with nu = 0.2, beta = 2, ten rounds).
#[derive(Clone, Copy, Debug)]
pub struct LpVariantConfig {
    /// Regularization cost D (= 1/nu).
    pub d_cost: f64,
    /// Target-class cost multiplier (> 1 for the uneven programs; 1 recovers
    /// the even soft-margin behavior).
    pub beta: f64,
    /// Divisor turning each upper weight cap into a lower cap
    /// (`lower = upper / divisor`); `None` leaves the lower caps at zero.
    pub d_lb_divisor: Option<f64>,
    pub t_max: usize,
    /// Convergence tolerance of the hard-margin dual loop.
    pub eps_lpa: f64,
}

impl Default for LpVariantConfig {
    fn default() -> Self {
        LpVariantConfig {
            d_cost: 5.0,
            beta: 2.0,
            d_lb_divisor: None,
            t_max: 10,
            eps_lpa: 1e-16,
        }
    }
}

/// Hard-margin weight selection: simplex weights maximizing the minimum
/// margin. Returns the weights and the achieved minimum margin.
pub fn lp_adaboost_weights(mm: &MarginMatrix) -> Result<(Vec<f64>, f64), VariantError> {
    let t = mm.num_components();
    // Variables: alpha_0..t, rho (free).
    let mut model = LinearProgram::maximize(t + 1);
    let mut obj = vec![0.0; t + 1];
    obj[t] = 1.0;
    model.set_objective(obj);
    for i in 0..mm.n() {
        let mut coeffs = vec![0.0; t + 1];
        coeffs[..t].copy_from_slice(mm.row(i));
        coeffs[t] = -1.0;
        model.add_row(coeffs, Relation::Ge, 0.0);
    }
    model.add_row(
        (0..t + 1).map(|v| if v < t { 1.0 } else { 0.0 }).collect(),
        Relation::Eq,
        1.0,
    );
    model.set_free(t);
    let sol = lp::solve(&model)?;
    if sol.status != LpStatus::Optimal {
        return Err(VariantError::BadStatus {
            context: "hard-margin weight selection",
            status: sol.status,
        });
    }
    let point = sol.point();
    Ok((point[..t].to_vec(), point[t]))
}

/// Soft-margin or uneven-cost solution: weights, slacks, margin target.
#[derive(Clone, Debug)]
pub struct SoftMarginSolution {
    pub alpha: Vec<f64>,
    pub xi: Vec<f64>,
    pub rho: f64,
    pub objective: f64,
}

fn soft_margin_lp(mm: &MarginMatrix, slack_costs: &[f64]) -> LinearProgram {
    let t = mm.num_components();
    let n = mm.n();
    // Variables: alpha_0..t, xi_0..n, rho (free).
    let vars = t + n + 1;
    let rho = t + n;
    let mut model = LinearProgram::minimize(vars);
    let mut obj = vec![0.0; vars];
    obj[rho] = -1.0;
    obj[t..t + n].copy_from_slice(slack_costs);
    model.set_objective(obj);
    for i in 0..n {
        let mut coeffs = vec![0.0; vars];
        coeffs[..t].copy_from_slice(mm.row(i));
        coeffs[t + i] = 1.0;
        coeffs[rho] = -1.0;
        model.add_row(coeffs, Relation::Ge, 0.0);
    }
    let mut simplex_row = vec![0.0; vars];
    for v in simplex_row.iter_mut().take(t) {
        *v = 1.0;
    }
    model.add_row(simplex_row, Relation::Eq, 1.0);
    model.set_free(rho);
    model
}

fn solve_soft_margin(
    mm: &MarginMatrix,
    slack_costs: &[f64],
    context: &'static str,
) -> Result<SoftMarginSolution, VariantError> {
    let t = mm.num_components();
    let n = mm.n();
    let sol = lp::solve(&soft_margin_lp(mm, slack_costs))?;
    if sol.status != LpStatus::Optimal {
        return Err(VariantError::BadStatus {
            context,
            status: sol.status,
        });
    }
    let point = sol.point();
    Ok(SoftMarginSolution {
        alpha: point[..t].to_vec(),
        xi: point[t..t + n].to_vec(),
        rho: point[t + n],
        objective: sol.objective(),
    })
}

/// Soft-margin program: minimize `-rho + D sum xi` over simplex weights,
/// slacks relaxing each margin to `rho - xi_i`.
pub fn lp_boost_weights(
    mm: &MarginMatrix,
    d_cost: f64,
) -> Result<SoftMarginSolution, VariantError> {
    let costs = vec![d_cost; mm.n()];
    solve_soft_margin(mm, &costs, "soft-margin weight selection")
}

/// Uneven-cost soft margin for two-class problems: the target class's slacks
/// cost `beta * D`, the rest `D`.
pub fn lpu_boost_weights(
    mm: &MarginMatrix,
    d_cost: f64,
    beta: f64,
    target_class: usize,
) -> Result<SoftMarginSolution, VariantError> {
    if mm.class_count() != 2 {
        return Err(VariantError::NotBinary(mm.class_count()));
    }
    let costs: Vec<f64> = (0..mm.n())
        .map(|i| {
            if mm.class_of(i) == target_class {
                beta * d_cost
            } else {
                d_cost
            }
        })
        .collect();
    solve_soft_margin(mm, &costs, "uneven soft-margin weight selection")
}

/// One completed round of a dual loop.
#[derive(Clone, Debug)]
pub struct VariantRound {
    pub round: usize,
    pub epsilon: f64,
    /// Weights the component was trained under.
    pub dist: Vec<f64>,
    /// Aggregate margin of the round's LP solve.
    pub s: f64,
    /// Minimum margin from the primal solve (hard-margin loop only).
    pub rho: Option<f64>,
    /// Edge of the newly trained component under its training weights.
    pub edge: f64,
}

#[derive(Clone, Debug)]
pub struct DualVariantOutcome {
    pub ensemble: Ensemble,
    pub rounds: Vec<VariantRound>,
    pub fallback: bool,
}

/// Hard-margin dual LP over the trained columns: minimize the aggregate
/// margin `s` over unit-sum nonnegative weights.
pub fn dual_hard_margin_lp(mm: &MarginMatrix) -> LinearProgram {
    let n = mm.n();
    let t = mm.num_components();
    let mut model = LinearProgram::minimize(n + 1);
    let mut obj = vec![0.0; n + 1];
    obj[n] = 1.0;
    model.set_objective(obj);
    for tau in 0..t {
        let mut coeffs = vec![0.0; n + 1];
        for i in 0..n {
            coeffs[i] = mm.entry(i, tau);
        }
        coeffs[n] = -1.0;
        model.add_row(coeffs, Relation::Le, 0.0);
    }
    model.add_row(
        (0..n + 1).map(|v| if v < n { 1.0 } else { 0.0 }).collect(),
        Relation::Eq,
        1.0,
    );
    model.set_free(n);
    model
}

/// Alternates the hard-margin primal (for the weights and minimum margin)
/// with its dual (for the next training weights), growing one component per
/// round. Stops when the dual value drops below the primal minimum margin
/// beyond the configured tolerance, on a stalled weak learner, or after
/// `t_max` rounds. The final weights come from the last primal solve.
pub fn dual_lp_adaboost_train(
    ds: &Dataset,
    learner: Learner,
    cfg: &LpVariantConfig,
) -> Result<DualVariantOutcome, VariantError> {
    let c = ds.class_count() as f64;
    let stall = 1.0 - 1.0 / c;
    let n = ds.n();
    let mut dist = WeightDistribution::uniform(n);
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut components = Vec::new();
    let mut rounds = Vec::new();
    let mut alpha: Option<Vec<f64>> = None;
    let mut fallback = false;

    for round in 1..=cfg.t_max {
        let h = weak::train(ds, &dist, learner).map_err(EnsembleError::from)?;
        let eps = weak::weighted_error(&h, ds, &dist);
        if eps >= stall {
            if components.is_empty() {
                components.push(h);
                fallback = true;
            }
            break;
        }
        let col = margin_column(&h, ds);
        let edge: f64 = col.iter().zip(dist.weights()).map(|(m, w)| m * w).sum();
        columns.push(col);
        components.push(h);

        let mm = MarginMatrix::from_columns(&columns, ds);
        let (a, rho) = lp_adaboost_weights(&mm)?;
        let dual = lp::solve(&dual_hard_margin_lp(&mm))?;
        if dual.status != LpStatus::Optimal {
            return Err(VariantError::BadStatus {
                context: "hard-margin weight dual",
                status: dual.status,
            });
        }
        let s = dual.objective();
        rounds.push(VariantRound {
            round,
            epsilon: eps,
            dist: dist.weights().to_vec(),
            s,
            rho: Some(rho),
            edge,
        });
        alpha = Some(a);
        if s - rho < -cfg.eps_lpa.max(1e-9) {
            break;
        }
        dist = WeightDistribution::from_lp_point(dual.point()[..n].to_vec())
            .map_err(EnsembleError::from)?;
    }

    let alpha = alpha.unwrap_or_else(|| vec![1.0; components.len()]);
    let ensemble = Ensemble::from_votes(components, alpha, ds.class_count())?;
    Ok(DualVariantOutcome {
        ensemble,
        rounds,
        fallback,
    })
}

/// Per-instance weight caps of the uneven dual round LP: `beta D / n` for
/// the target class, `D / n` otherwise; lower caps are the uppers divided by
/// the configured divisor.
pub fn dual_lpu_bounds(
    ds: &Dataset,
    cfg: &LpVariantConfig,
    target_class: usize,
) -> (Vec<f64>, Vec<f64>) {
    let n = ds.n() as f64;
    let upper: Vec<f64> = (0..ds.n())
        .map(|i| {
            let cost = if ds.label(i) == target_class {
                cfg.beta * cfg.d_cost
            } else {
                cfg.d_cost
            };
            cost / n
        })
        .collect();
    let lower: Vec<f64> = match cfg.d_lb_divisor {
        Some(div) => upper.iter().map(|u| u / div).collect(),
        None => vec![0.0; ds.n()],
    };
    (lower, upper)
}

/// Round LP of the uneven dual loop: minimize `s` over box-bounded unit-sum
/// weights.
pub fn dual_lpu_round_lp(mm: &MarginMatrix, lower: &[f64], upper: &[f64]) -> LinearProgram {
    let n = mm.n();
    let t = mm.num_components();
    let mut model = LinearProgram::minimize(n + 1);
    let mut obj = vec![0.0; n + 1];
    obj[n] = 1.0;
    model.set_objective(obj);
    for tau in 0..t {
        let mut coeffs = vec![0.0; n + 1];
        for i in 0..n {
            coeffs[i] = mm.entry(i, tau);
        }
        coeffs[n] = -1.0;
        model.add_row(coeffs, Relation::Le, 0.0);
    }
    model.add_row(
        (0..n + 1).map(|v| if v < n { 1.0 } else { 0.0 }).collect(),
        Relation::Eq,
        1.0,
    );
    for i in 0..n {
        model.set_bounds(i, lower[i], upper[i]);
    }
    model.set_free(n);
    model
}

/// Deterministic box-feasible starting weights: uniform when the box allows
/// it, otherwise lower bounds plus capacity-proportional remainder.
fn initial_box_distribution(lower: &[f64], upper: &[f64]) -> Vec<f64> {
    let n = lower.len();
    let uniform = 1.0 / n as f64;
    if lower.iter().all(|&l| l <= uniform) && upper.iter().all(|&u| u >= uniform) {
        return vec![uniform; n];
    }
    let capacity: f64 = lower.iter().zip(upper).map(|(l, u)| u - l).sum();
    let remainder = 1.0 - lower.iter().sum::<f64>();
    lower
        .iter()
        .zip(upper)
        .map(|(l, u)| l + remainder * (u - l) / capacity)
        .collect()
}

/// Uneven dual loop: each round retrains under box-bounded LP weights and
/// reads the next component weights off the margin rows' Lagrange
/// multipliers. With `beta = 1` and no lower caps this is exactly the even
/// soft-margin dual loop.
pub fn dual_lpu_boost_train(
    ds: &Dataset,
    learner: Learner,
    cfg: &LpVariantConfig,
    target_class: usize,
) -> Result<DualVariantOutcome, VariantError> {
    if ds.class_count() != 2 {
        return Err(VariantError::NotBinary(ds.class_count()));
    }
    let (lower, upper) = dual_lpu_bounds(ds, cfg, target_class);
    let lower_sum: f64 = lower.iter().sum();
    let upper_sum: f64 = upper.iter().sum();
    if lower_sum > 1.0 + 1e-12 || upper_sum < 1.0 - 1e-12 {
        return Err(VariantError::InfeasibleBounds {
            d: cfg.d_cost,
            beta: cfg.beta,
            dlb: cfg.d_lb_divisor,
            lower_sum,
            upper_sum,
        });
    }

    let n = ds.n();
    let mut dist = WeightDistribution::new(initial_box_distribution(&lower, &upper))
        .map_err(EnsembleError::from)?;
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut components = Vec::new();
    let mut rounds = Vec::new();
    let mut alpha: Option<Vec<f64>> = None;
    let mut s_prev: Option<f64> = None;
    let mut fallback = false;

    for round in 1..=cfg.t_max {
        let h = weak::train(ds, &dist, learner).map_err(EnsembleError::from)?;
        let eps = weak::weighted_error(&h, ds, &dist);
        if eps >= 0.5 {
            if components.is_empty() {
                components.push(h);
                fallback = true;
            }
            break;
        }
        let col = margin_column(&h, ds);
        let edge: f64 = col.iter().zip(dist.weights()).map(|(m, w)| m * w).sum();
        // Column-generation stop: a component whose edge does not exceed the
        // previous aggregate margin cannot improve the program.
        if let Some(s) = s_prev {
            if edge <= s + 1e-12 {
                break;
            }
        }
        columns.push(col);
        components.push(h);

        let mm = MarginMatrix::from_columns(&columns, ds);
        let sol = lp::solve(&dual_lpu_round_lp(&mm, &lower, &upper))?;
        if sol.status != LpStatus::Optimal {
            return Err(VariantError::BadStatus {
                context: "uneven weight dual",
                status: sol.status,
            });
        }
        let s = sol.objective();
        // Component weights are the margin rows' multipliers: for this
        // minimization the shadow prices are nonpositive and sum to one in
        // magnitude (stationarity in s); clip and rescale for safety.
        let duals = sol.duals();
        let a: Vec<f64> = (0..columns.len()).map(|t| (-duals[t]).max(0.0)).collect();
        rounds.push(VariantRound {
            round,
            epsilon: eps,
            dist: dist.weights().to_vec(),
            s,
            rho: None,
            edge,
        });
        alpha = Some(a);
        s_prev = Some(s);
        dist = WeightDistribution::from_lp_point(sol.point()[..n].to_vec())
            .map_err(EnsembleError::from)?;
    }

    let alpha = alpha.unwrap_or_else(|| vec![1.0; components.len()]);
    let ensemble = Ensemble::from_votes(components, alpha, 2)?;
    Ok(DualVariantOutcome {
        ensemble,
        rounds,
        fallback,
    })
}
