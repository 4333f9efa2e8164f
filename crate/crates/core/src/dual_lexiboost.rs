//! Dual two-stage training: adapts per-instance weights between boosting
//! rounds by LP, then reuses the primal stage machinery for the reference
//! losses and the final component weights.
//!
//! Phase A trains components under weights chosen per round by the per-class
//! dual programs (one per class, solved independently and reassembled).
//! Phase B solves the primal per-class stage on those components to obtain
//! the reference losses. Phase C trains a fresh component sequence under
//! weights from the stage-two dual, which scales each class's weight cap by
//! how lossy the class already is. Phase D solves the primal deviation stage
//! on the phase-C components and keeps its weights.

use crate::data::Dataset;
use crate::ensemble::{margin_column, Ensemble, EnsembleError, MarginMatrix};
use crate::lexiboost::{
    solve_stage1_all, solve_stage2, StageError, StageOneResult, StageTwoResult,
};
use crate::lp::{self, LinearProgram, LpStatus, Relation};
use crate::par;
use crate::weak::{self, Learner, WeakHypothesis, WeightDistribution};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug)]
pub struct DualLexiConfig {
    pub t_max: usize,
    /// The loop breaks when a round error exceeds `1/|C|` as written. With
    /// more than two classes that is stricter than chance level; this flag
    /// relaxes the threshold to `1 - 1/|C|`.
    pub relaxed_break: bool,
}

impl Default for DualLexiConfig {
    fn default() -> Self {
        DualLexiConfig {
            t_max: 10,
            relaxed_break: false,
        }
    }
}

/// One training round of either phase: the weights the component was trained
/// under, the bounds those weights must respect, and the aggregate-margin
/// values of the LP(s) that produced the next weights.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub epsilon: f64,
    pub s_values: Vec<f64>,
    pub dist: Vec<f64>,
    pub bounds: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_scale: Option<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct DualLexiOutcome {
    pub ensemble: Ensemble,
    /// Phase-B reference stage (solved on the phase-A components).
    pub stage1: StageOneResult,
    /// Phase-D deviation stage (solved on the phase-C components).
    pub stage2: StageTwoResult,
    pub phase_a: Vec<RoundRecord>,
    pub phase_c: Vec<RoundRecord>,
    /// Whether phase-A reassembly ever had to cap-and-redistribute weights
    /// to keep them inside their per-class bounds after renormalization.
    pub clamped: bool,
    pub fallback: bool,
}

#[derive(Clone, Debug)]
pub struct PprimeSolution {
    pub dist: Vec<f64>,
    pub s: f64,
    pub objective: f64,
}

#[derive(Clone, Debug)]
pub struct QprimeSolution {
    pub dist: Vec<f64>,
    pub d_scale: Vec<f64>,
    pub s: f64,
    pub objective: f64,
}

/// Per-class dual program over the components trained so far: maximize the
/// class's total weight minus the aggregate margin `s`, over a full weight
/// vector with `sum D = 1` and per-class caps `D(i) <= 1/n_j`.
pub fn pprime_lp(mm: &MarginMatrix, class: usize) -> LinearProgram {
    let n = mm.n();
    let t = mm.num_components();
    // Variables: D_0..n, then s (free).
    let mut lp = LinearProgram::maximize(n + 1);
    let mut obj = vec![0.0; n + 1];
    for &i in mm.class_indices(class) {
        obj[i] = 1.0;
    }
    obj[n] = -1.0;
    lp.set_objective(obj);
    for tau in 0..t {
        let mut coeffs = vec![0.0; n + 1];
        for i in 0..n {
            coeffs[i] = mm.entry(i, tau);
        }
        coeffs[n] = -1.0;
        lp.add_row(coeffs, Relation::Le, 0.0);
    }
    lp.add_row(
        (0..n + 1).map(|v| if v < n { 1.0 } else { 0.0 }).collect(),
        Relation::Eq,
        1.0,
    );
    for i in 0..n {
        let n_j = mm.class_indices(mm.class_of(i)).len() as f64;
        lp.set_bounds(i, 0.0, 1.0 / n_j);
    }
    lp.set_free(n);
    lp
}

pub fn solve_pprime(mm: &MarginMatrix, class: usize) -> Result<PprimeSolution, StageError> {
    let n = mm.n();
    let sol = lp::solve(&pprime_lp(mm, class))?;
    if sol.status != LpStatus::Optimal {
        return Err(StageError::BadStatus {
            context: "per-class weight dual",
            status: sol.status,
        });
    }
    let point = sol.point();
    Ok(PprimeSolution {
        dist: point[..n].to_vec(),
        s: point[n],
        objective: sol.objective(),
    })
}

/// Stage-two dual program: maximize total weight minus the reference-loss
/// charge `sum_j (d_j/n_j) e^T lambda*_j` minus `s`, where each class's
/// weight cap is scaled by its own `d_j` with `sum d_j <= 1`.
pub fn qprime_lp(mm: &MarginMatrix, loss_sums: &[f64]) -> LinearProgram {
    let n = mm.n();
    let t = mm.num_components();
    let c = mm.class_count();
    // Variables: D_0..n, d_0..c, s.
    let vars = n + c + 1;
    let s_var = n + c;
    let mut lp = LinearProgram::maximize(vars);
    let mut obj = vec![0.0; vars];
    for v in obj.iter_mut().take(n) {
        *v = 1.0;
    }
    for j in 0..c {
        let n_j = mm.class_indices(j).len() as f64;
        obj[n + j] = -loss_sums[j] / n_j;
    }
    obj[s_var] = -1.0;
    lp.set_objective(obj);
    for tau in 0..t {
        let mut coeffs = vec![0.0; vars];
        for i in 0..n {
            coeffs[i] = mm.entry(i, tau);
        }
        coeffs[s_var] = -1.0;
        lp.add_row(coeffs, Relation::Le, 0.0);
    }
    let mut sum_row = vec![0.0; vars];
    for v in sum_row.iter_mut().take(n) {
        *v = 1.0;
    }
    lp.add_row(sum_row, Relation::Eq, 1.0);
    // Per-instance cap scaled by the class's d: D_i - d_j/n_j <= 0.
    for i in 0..n {
        let j = mm.class_of(i);
        let n_j = mm.class_indices(j).len() as f64;
        let mut coeffs = vec![0.0; vars];
        coeffs[i] = 1.0;
        coeffs[n + j] = -1.0 / n_j;
        lp.add_row(coeffs, Relation::Le, 0.0);
    }
    let mut d_row = vec![0.0; vars];
    for v in d_row.iter_mut().skip(n).take(c) {
        *v = 1.0;
    }
    lp.add_row(d_row, Relation::Le, 1.0);
    lp.set_free(s_var);
    lp
}

pub fn solve_qprime(mm: &MarginMatrix, loss_sums: &[f64]) -> Result<QprimeSolution, StageError> {
    let n = mm.n();
    let c = mm.class_count();
    let sol = lp::solve(&qprime_lp(mm, loss_sums))?;
    if sol.status != LpStatus::Optimal {
        return Err(StageError::BadStatus {
            context: "deviation-stage weight dual",
            status: sol.status,
        });
    }
    let point = sol.point();
    Ok(QprimeSolution {
        dist: point[..n].to_vec(),
        d_scale: point[n..n + c].to_vec(),
        s: point[n + c],
        objective: sol.objective(),
    })
}

/// Class-uniform initialization `D_1(i) = 1/(|C| n_j)`.
pub fn initial_distribution(ds: &Dataset) -> Vec<f64> {
    let c = ds.class_count() as f64;
    (0..ds.n())
        .map(|i| 1.0 / (c * ds.class_indices(ds.label(i)).len() as f64))
        .collect()
}

/// Caps entries at their bounds, redistributing the excess proportionally
/// over the rest while preserving the unit sum. Returns whether anything
/// moved. Termination: each pass caps at least one more entry.
fn enforce_caps(dist: &mut [f64], caps: &[f64]) -> bool {
    let mut touched = false;
    for _ in 0..dist.len() {
        let mut excess = 0.0;
        let mut free = 0.0;
        for (v, c) in dist.iter().zip(caps) {
            if *v > *c + 1e-15 {
                excess += *v - *c;
            } else {
                free += *v;
            }
        }
        if excess <= 1e-15 || free <= 0.0 {
            break;
        }
        touched = true;
        let scale = (free + excess) / free;
        for (v, c) in dist.iter_mut().zip(caps) {
            if *v > *c + 1e-15 {
                *v = *c;
            } else {
                *v *= scale;
            }
        }
    }
    touched
}

/// Composite next distribution for phase A: class-j entries come from class
/// j's own dual solve, then one global renormalization restores the unit sum
/// (with a cap repair in the rare case the rescale breaches a bound).
fn assemble_phase_a(parts: &[PprimeSolution], mm: &MarginMatrix, caps: &[f64]) -> (Vec<f64>, bool) {
    let n = mm.n();
    let mut dist: Vec<f64> = (0..n).map(|i| parts[mm.class_of(i)].dist[i]).collect();
    let sum: f64 = dist.iter().sum();
    for v in dist.iter_mut() {
        *v /= sum;
    }
    let clamped = enforce_caps(&mut dist, caps);
    (dist, clamped)
}

enum PhaseKind {
    A,
    C,
}

struct PhaseOutput {
    components: Vec<WeakHypothesis>,
    columns: Vec<Vec<f64>>,
    records: Vec<RoundRecord>,
    clamped: bool,
    fallback: bool,
}

fn run_phase(
    ds: &Dataset,
    learner: Learner,
    cfg: &DualLexiConfig,
    kind: PhaseKind,
    loss_sums: &[f64],
) -> Result<PhaseOutput, StageError> {
    let c = ds.class_count() as f64;
    let break_threshold = if cfg.relaxed_break {
        1.0 - 1.0 / c
    } else {
        1.0 / c
    };
    let init = initial_distribution(ds);
    // Initialization bounds: 1/n_j in phase A; in phase C the feasibility
    // witness d_j = 1/|C| gives exactly the initialization values.
    let init_bounds: Vec<f64> = match kind {
        PhaseKind::A => (0..ds.n())
            .map(|i| 1.0 / ds.class_indices(ds.label(i)).len() as f64)
            .collect(),
        PhaseKind::C => init.clone(),
    };

    let mut dist = WeightDistribution::new(init).map_err(EnsembleError::from)?;
    let mut bounds_now = init_bounds;
    let mut d_now: Option<Vec<f64>> = match kind {
        PhaseKind::A => None,
        PhaseKind::C => Some(vec![1.0 / c; ds.class_count()]),
    };
    let mut out = PhaseOutput {
        components: Vec::new(),
        columns: Vec::new(),
        records: Vec::new(),
        clamped: false,
        fallback: false,
    };

    for round in 1..=cfg.t_max {
        let h = weak::train(ds, &dist, learner).map_err(EnsembleError::from)?;
        let eps = weak::weighted_error(&h, ds, &dist);
        let stalled = eps > break_threshold + 1e-12;
        if stalled && !out.components.is_empty() {
            break;
        }
        out.columns.push(margin_column(&h, ds));
        out.components.push(h);
        out.records.push(RoundRecord {
            round,
            epsilon: eps,
            s_values: Vec::new(),
            dist: dist.weights().to_vec(),
            bounds: bounds_now.clone(),
            d_scale: d_now.clone(),
        });
        if stalled {
            out.fallback = true;
            break;
        }
        if round == cfg.t_max {
            break;
        }
        let mm = MarginMatrix::from_columns(&out.columns, ds);
        match kind {
            PhaseKind::A => {
                let classes: Vec<usize> = (0..ds.class_count()).collect();
                let parts = par::map_collect(&classes, |&j| solve_pprime(&mm, j))
                    .into_iter()
                    .collect::<Result<Vec<_>, _>>()?;
                let caps: Vec<f64> = (0..ds.n())
                    .map(|i| 1.0 / ds.class_indices(ds.label(i)).len() as f64)
                    .collect();
                let (next, clamped) = assemble_phase_a(&parts, &mm, &caps);
                out.clamped |= clamped;
                out.records.last_mut().unwrap().s_values = parts.iter().map(|p| p.s).collect();
                dist = WeightDistribution::from_lp_point(next).map_err(EnsembleError::from)?;
                bounds_now = caps;
            }
            PhaseKind::C => {
                let sol = solve_qprime(&mm, loss_sums)?;
                out.records.last_mut().unwrap().s_values = vec![sol.s];
                bounds_now = (0..ds.n())
                    .map(|i| {
                        let j = ds.label(i);
                        sol.d_scale[j] / ds.class_indices(j).len() as f64
                    })
                    .collect();
                d_now = Some(sol.d_scale.clone());
                dist = WeightDistribution::from_lp_point(sol.dist).map_err(EnsembleError::from)?;
            }
        }
    }
    Ok(out)
}

/// Full dual training loop (phases A through D).
pub fn train_dual_lexiboost(
    ds: &Dataset,
    learner: Learner,
    cfg: &DualLexiConfig,
) -> Result<DualLexiOutcome, StageError> {
    let phase_a = run_phase(ds, learner, cfg, PhaseKind::A, &[])?;
    let mm_a = MarginMatrix::from_columns(&phase_a.columns, ds);
    let stage1 = solve_stage1_all(&mm_a)?;
    let loss_sums = stage1.loss_sums();

    let phase_c = run_phase(ds, learner, cfg, PhaseKind::C, &loss_sums)?;
    let mm_c = MarginMatrix::from_columns(&phase_c.columns, ds);
    let stage2 = solve_stage2(&mm_c, &stage1, None)?;
    let ensemble = Ensemble::new(
        phase_c.components.clone(),
        stage2.alpha.clone(),
        ds.class_count(),
    )?;
    Ok(DualLexiOutcome {
        ensemble,
        stage1,
        stage2,
        phase_a: phase_a.records,
        phase_c: phase_c.records,
        clamped: phase_a.clamped,
        fallback: phase_a.fallback || phase_c.fallback,
    })
}
