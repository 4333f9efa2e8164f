//! Shared training dispatch: algorithm ids, parameter bundles, the model
//! file format, and stratified k-fold support for cost-grid selection.

use crate::CliError;
use lexiboost_core::data::{DataError, Dataset, Instance};
use lexiboost_core::dual_lexiboost::{train_dual_lexiboost, DualLexiConfig};
use lexiboost_core::ensemble::{
    run_adaboost, run_adaboost_multiclass, Ensemble, EnsembleError, MarginMatrix,
};
use lexiboost_core::lexiboost::{train_lexiboost_with_costs, StageError};
use lexiboost_core::lp_variants::{
    dual_lp_adaboost_train, dual_lpu_boost_train, lp_adaboost_weights, lp_boost_weights,
    lpu_boost_weights, LpVariantConfig, VariantError,
};
use lexiboost_core::report::TrainReport;
use lexiboost_core::weak::Learner;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgoId {
    AdaBoost,
    LpAdaBoost,
    DualLpAdaBoost,
    LpBoost,
    DualLpBoost,
    LpuBoost,
    DualLpuBoost,
    LexiBoost,
    DualLexiBoost,
}

impl AlgoId {
    pub fn parse(name: &str) -> Result<AlgoId, CliError> {
        Ok(match name {
            "adaboost" => AlgoId::AdaBoost,
            "lpadaboost" => AlgoId::LpAdaBoost,
            "dual-lpadaboost" => AlgoId::DualLpAdaBoost,
            "lpboost" => AlgoId::LpBoost,
            "dual-lpboost" => AlgoId::DualLpBoost,
            "lpuboost" => AlgoId::LpuBoost,
            "dual-lpuboost" => AlgoId::DualLpuBoost,
            "lexiboost" => AlgoId::LexiBoost,
            "dual-lexiboost" => AlgoId::DualLexiBoost,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown algorithm '{other}' (expected one of: adaboost, lpadaboost, \
                     dual-lpadaboost, lpboost, dual-lpboost, lpuboost, dual-lpuboost, \
                     lexiboost, dual-lexiboost)"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgoId::AdaBoost => "adaboost",
            AlgoId::LpAdaBoost => "lpadaboost",
            AlgoId::DualLpAdaBoost => "dual-lpadaboost",
            AlgoId::LpBoost => "lpboost",
            AlgoId::DualLpBoost => "dual-lpboost",
            AlgoId::LpuBoost => "lpuboost",
            AlgoId::DualLpuBoost => "dual-lpuboost",
            AlgoId::LexiBoost => "lexiboost",
            AlgoId::DualLexiBoost => "dual-lexiboost",
        }
    }

    /// The uneven-cost family is two-class by construction.
    pub fn binary_only(self) -> bool {
        matches!(
            self,
            AlgoId::LpBoost | AlgoId::DualLpBoost | AlgoId::LpuBoost | AlgoId::DualLpuBoost
        )
    }

    /// Which cost knobs the benchmark harness tunes for this algorithm.
    pub fn tuned_knobs(self) -> (bool, bool, bool) {
        match self {
            AlgoId::LpBoost | AlgoId::DualLpBoost => (true, false, false),
            AlgoId::LpuBoost => (true, true, false),
            AlgoId::DualLpuBoost => (true, true, true),
            _ => (false, false, false),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainParams {
    pub learner: Learner,
    pub t_max: usize,
    pub d_cost: f64,
    pub beta: f64,
    pub d_lb: Option<f64>,
    pub eps_lpa: f64,
    pub relaxed_break: bool,
    pub costs: Option<Vec<f64>>,
    /// Target class for the uneven family; defaults to the smallest class.
    pub target_class: Option<usize>,
}

impl Default for TrainParams {
    fn default() -> TrainParams {
        TrainParams {
            learner: Learner::Stump,
            t_max: 10,
            d_cost: 5.0,
            beta: 2.0,
            d_lb: None,
            eps_lpa: 1e-16,
            relaxed_break: false,
            costs: None,
            target_class: None,
        }
    }
}

impl TrainParams {
    fn variant_config(&self) -> LpVariantConfig {
        LpVariantConfig {
            d_cost: self.d_cost,
            beta: self.beta,
            d_lb_divisor: self.d_lb,
            t_max: self.t_max,
            eps_lpa: self.eps_lpa,
        }
    }

    fn target(&self, ds: &Dataset) -> usize {
        self.target_class.unwrap_or_else(|| {
            let sizes = ds.class_sizes();
            let mut best = 0;
            for (j, &s) in sizes.iter().enumerate().skip(1) {
                if s < sizes[best] {
                    best = j;
                }
            }
            best
        })
    }
}

fn stage_err(e: StageError) -> CliError {
    match e {
        StageError::BadCosts(m) => CliError::Usage(m),
        StageError::Ensemble(e) => ensemble_err(e),
        other => CliError::Solver(other.to_string()),
    }
}

fn variant_err(e: VariantError) -> CliError {
    match e {
        VariantError::NotBinary(c) => CliError::Data(format!(
            "this algorithm is two-class only, data has {c} classes"
        )),
        VariantError::InfeasibleBounds { .. } => CliError::Usage(e.to_string()),
        VariantError::Ensemble(e) => ensemble_err(e),
        other => CliError::Solver(other.to_string()),
    }
}

fn ensemble_err(e: EnsembleError) -> CliError {
    match e {
        EnsembleError::NotBinary(_) | EnsembleError::Weak(_) => CliError::Data(e.to_string()),
        other => CliError::Solver(other.to_string()),
    }
}

fn adaboost_components(
    ds: &Dataset,
    learner: Learner,
    t_max: usize,
) -> Result<lexiboost_core::ensemble::AdaBoostRun, CliError> {
    let run = if ds.class_count() == 2 {
        run_adaboost(ds, learner, t_max)
    } else {
        run_adaboost_multiclass(ds, learner, t_max)
    };
    run.map_err(ensemble_err)
}

/// Trains one model and assembles its report.
pub fn train_model(
    algo: AlgoId,
    ds: &Dataset,
    params: &TrainParams,
) -> Result<(Ensemble, TrainReport), CliError> {
    match algo {
        AlgoId::AdaBoost => {
            let run = adaboost_components(ds, params.learner, params.t_max)?;
            let report = TrainReport::from_adaboost(&run, ds.class_count());
            let ens = run.into_ensemble(ds.class_count()).map_err(ensemble_err)?;
            Ok((ens, report))
        }
        AlgoId::LpAdaBoost => {
            let run = adaboost_components(ds, params.learner, params.t_max)?;
            let mm = MarginMatrix::build(&run.components, ds).map_err(ensemble_err)?;
            let (alpha, rho) = lp_adaboost_weights(&mm).map_err(variant_err)?;
            let mut report = TrainReport::from_adaboost(&run, ds.class_count());
            let ens = Ensemble::from_votes(run.components, alpha, ds.class_count())
                .map_err(ensemble_err)?;
            report.algorithm = algo.name().into();
            report.alpha = ens.weights().to_vec();
            report.round_s = Some(vec![rho]);
            Ok((ens, report))
        }
        AlgoId::LpBoost | AlgoId::LpuBoost => {
            let run = adaboost_components(ds, params.learner, params.t_max)?;
            let mm = MarginMatrix::build(&run.components, ds).map_err(ensemble_err)?;
            let sol = if algo == AlgoId::LpBoost {
                lp_boost_weights(&mm, params.d_cost)
            } else {
                lpu_boost_weights(&mm, params.d_cost, params.beta, params.target(ds))
            }
            .map_err(variant_err)?;
            let mut report = TrainReport::from_adaboost(&run, ds.class_count());
            let ens = Ensemble::from_votes(run.components, sol.alpha, ds.class_count())
                .map_err(ensemble_err)?;
            report.algorithm = algo.name().into();
            report.alpha = ens.weights().to_vec();
            report.round_s = Some(vec![sol.rho]);
            Ok((ens, report))
        }
        AlgoId::DualLpAdaBoost => {
            let out = dual_lp_adaboost_train(ds, params.learner, &params.variant_config())
                .map_err(variant_err)?;
            let report = TrainReport::from_variant(&out, algo.name());
            Ok((out.ensemble, report))
        }
        AlgoId::DualLpBoost | AlgoId::DualLpuBoost => {
            let mut cfg = params.variant_config();
            if algo == AlgoId::DualLpBoost {
                cfg.beta = 1.0;
                cfg.d_lb_divisor = None;
            }
            let out = dual_lpu_boost_train(ds, params.learner, &cfg, params.target(ds))
                .map_err(variant_err)?;
            let report = TrainReport::from_variant(&out, algo.name());
            Ok((out.ensemble, report))
        }
        AlgoId::LexiBoost => {
            let out = train_lexiboost_with_costs(
                ds,
                params.learner,
                params.t_max,
                params.costs.as_deref(),
            )
            .map_err(stage_err)?;
            let report = TrainReport::from_lexiboost(&out);
            Ok((out.ensemble, report))
        }
        AlgoId::DualLexiBoost => {
            let cfg = DualLexiConfig {
                t_max: params.t_max,
                relaxed_break: params.relaxed_break,
            };
            let out = train_dual_lexiboost(ds, params.learner, &cfg).map_err(stage_err)?;
            let report = TrainReport::from_dual_lexiboost(&out);
            Ok((out.ensemble, report))
        }
    }
}

/// On-disk model format: the ensemble plus the label tokens, so evaluation
/// CSVs map onto the training classes regardless of row order.
#[derive(Serialize, Deserialize)]
pub struct ModelFile {
    pub class_names: Vec<String>,
    pub model: Ensemble,
}

impl ModelFile {
    pub fn save(&self, path: &std::path::Path) -> Result<(), CliError> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<ModelFile, CliError> {
        let file = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
    }
}

/// Stratified k-fold assignment: per-class shuffle, round-robin fold labels.
/// Folds shrink to the smallest class when necessary; below two usable folds
/// the caller should skip cross-validation.
pub fn stratified_folds(ds: &Dataset, folds: usize, seed: u64) -> Vec<Vec<usize>> {
    let min_class = ds.class_sizes().into_iter().min().unwrap_or(0);
    let k = folds.min(min_class);
    if k < 2 {
        return Vec::new();
    }
    let mut assignment = vec![Vec::new(); k];
    let mut shuffler = rand_like::Shuffler::new(seed);
    for class in 0..ds.class_count() {
        let mut order = ds.class_indices(class).to_vec();
        shuffler.shuffle(&mut order);
        for (pos, idx) in order.into_iter().enumerate() {
            assignment[pos % k].push(idx);
        }
    }
    for fold in assignment.iter_mut() {
        fold.sort_unstable();
    }
    assignment
}

/// Builds (train, heldout) datasets for one fold.
pub fn fold_split(
    ds: &Dataset,
    folds: &[Vec<usize>],
    fold: usize,
) -> Result<(Dataset, Dataset), DataError> {
    let heldout: &[usize] = &folds[fold];
    let mut in_heldout = vec![false; ds.n()];
    for &i in heldout {
        in_heldout[i] = true;
    }
    let collect = |want: bool| -> Vec<Instance> {
        (0..ds.n())
            .filter(|&i| in_heldout[i] == want)
            .map(|i| ds.instance(i).clone())
            .collect()
    };
    let train = Dataset::new(collect(false), ds.class_names().to_vec(), None)?;
    let test = Dataset::new(collect(true), ds.class_names().to_vec(), None)?;
    Ok((train, test))
}

/// Minimal deterministic shuffler over a splitmix-style stream; keeps the
/// CLI crate free of a direct rand dependency.
mod rand_like {
    pub struct Shuffler {
        state: u64,
    }

    impl Shuffler {
        pub fn new(seed: u64) -> Shuffler {
            Shuffler { state: seed }
        }

        fn next(&mut self) -> u64 {
            // splitmix64
            self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = self.state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^ (z >> 31)
        }

        pub fn shuffle<T>(&mut self, items: &mut [T]) {
            for i in (1..items.len()).rev() {
                let j = (self.next() % (i as u64 + 1)) as usize;
                items.swap(i, j);
            }
        }
    }
}
