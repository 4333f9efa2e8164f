use crate::config::{BenchConfig, DatasetSpec};
use crate::hash::fnv1a64;
use crate::runner::{fold_split, stratified_folds, train_model, AlgoId, TrainParams};
use crate::{BenchArgs, CliError};
use lexiboost_core::data::{
    generate_gaussian, inject_outliers, load_csv, stratified_split, Dataset, SyntheticSpec,
};
use lexiboost_core::ensemble::Ensemble;
use lexiboost_core::metrics::{evaluate, EvaluationReport};
use serde::Serialize;
use std::io::Write;
use std::time::Instant;

const SPLIT_SALT: u64 = 0x5e1e_c7ab_1e5a_17ed;
const CV_SALT: u64 = 0xc705_5a17_ed5e_ed00;

#[derive(Clone, Serialize)]
struct SelectedParams {
    d_cost: f64,
    beta: Option<f64>,
    d_lb: Option<f64>,
}

#[derive(Serialize)]
struct BenchRow {
    dataset: String,
    algorithm: String,
    seed: u64,
    config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    selected: Option<SelectedParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    g_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    auc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    avg_auc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    accuracy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fallback: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    timing_ms: f64,
    timing_tune_ms: f64,
}

#[derive(Serialize)]
struct ResultsFile<'a> {
    config_hash: &'a str,
    config: &'a BenchConfig,
    rows: Vec<BenchRow>,
}

struct Cell {
    dataset_index: usize,
    algo: AlgoId,
    seed: u64,
}

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)?;
    let config: BenchConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad bench config: {e}")))?;
    validate(&config)?;
    let config_hash = fnv1a64(serde_json::to_string(&config)?.as_bytes());

    let algos: Vec<AlgoId> = config
        .algorithms
        .iter()
        .map(|a| AlgoId::parse(a))
        .collect::<Result<_, _>>()?;

    // CSV sources load once; synthetic cells generate per seed.
    let mut csv_cache: Vec<Option<Dataset>> = Vec::new();
    for spec in &config.datasets {
        csv_cache.push(match spec {
            DatasetSpec::Csv { path, has_header } => Some(load_csv(path, *has_header)?),
            DatasetSpec::Synthetic { .. } => None,
        });
    }

    let mut cells = Vec::new();
    for dataset_index in 0..config.datasets.len() {
        for &algo in &algos {
            for &seed in &config.seeds {
                cells.push(Cell {
                    dataset_index,
                    algo,
                    seed,
                });
            }
        }
    }

    let run_one = |cell: &Cell| -> BenchRow { run_cell(cell, &config, &csv_cache, &config_hash) };
    #[cfg(feature = "parallel")]
    let rows: Vec<BenchRow> = {
        use rayon::prelude::*;
        cells.par_iter().map(run_one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<BenchRow> = cells.iter().map(run_one).collect();

    std::fs::create_dir_all(&args.out)?;
    let results = ResultsFile {
        config_hash: &config_hash,
        config: &config,
        rows,
    };
    let json_path = args.out.join("results.json");
    let file = std::fs::File::create(&json_path)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), &results)?;
    write_csv(&args.out.join("results.csv"), &results.rows)?;

    let failures = results.rows.iter().filter(|r| r.error.is_some()).count();
    println!(
        "benchmarked {} cells ({failures} failed); results in {}",
        results.rows.len(),
        args.out.display()
    );
    Ok(())
}

fn validate(config: &BenchConfig) -> Result<(), CliError> {
    if config.datasets.is_empty() || config.algorithms.is_empty() || config.seeds.is_empty() {
        return Err(CliError::Usage(
            "bench config needs at least one dataset, algorithm, and seed".into(),
        ));
    }
    if !(0.0 < config.train_fraction && config.train_fraction < 1.0) {
        return Err(CliError::Usage(format!(
            "train fraction must lie in (0, 1), got {}",
            config.train_fraction
        )));
    }
    if config.grids.nu.iter().any(|&nu| !(nu > 0.0)) {
        return Err(CliError::Usage("nu grid entries must be positive".into()));
    }
    Ok(())
}

fn materialize(
    spec: &DatasetSpec,
    cached: &Option<Dataset>,
    seed: u64,
) -> Result<Dataset, CliError> {
    match spec {
        DatasetSpec::Csv { .. } => Ok(cached.clone().expect("csv cached at startup")),
        DatasetSpec::Synthetic {
            size,
            ir,
            center,
            outlier_rate,
        } => {
            let spec = SyntheticSpec {
                total_size: *size,
                imbalance_ratio: *ir,
                majority_center: *center,
                outlier_rate: *outlier_rate,
                seed,
            };
            let mut ds = generate_gaussian(&spec)?;
            if *outlier_rate > 0.0 {
                ds = inject_outliers(&ds, *outlier_rate, seed)?;
            }
            Ok(ds)
        }
    }
}

/// Candidate parameter bundles for a tuned algorithm, in grid order.
fn candidates(config: &BenchConfig, algo: AlgoId) -> Vec<TrainParams> {
    let base = TrainParams {
        learner: config.base.to_learner(),
        t_max: config.t_max,
        ..TrainParams::default()
    };
    let (tune_d, tune_beta, tune_dlb) = algo.tuned_knobs();
    if !tune_d {
        return vec![base];
    }
    let mut out = Vec::new();
    for &nu in &config.grids.nu {
        let d_cost = 1.0 / nu;
        let betas: Vec<Option<f64>> = if tune_beta {
            config.grids.beta.iter().map(|&b| Some(b)).collect()
        } else {
            vec![None]
        };
        for beta in &betas {
            let dlbs: Vec<Option<f64>> = if tune_dlb {
                config.grids.d_lb.iter().map(|&d| Some(d)).collect()
            } else {
                vec![None]
            };
            for dlb in dlbs {
                out.push(TrainParams {
                    d_cost,
                    beta: beta.unwrap_or(1.0),
                    d_lb: dlb,
                    ..base.clone()
                });
            }
        }
    }
    out
}

fn eval_on(model: &Ensemble, ds: &Dataset) -> Result<EvaluationReport, CliError> {
    let mut labels = Vec::with_capacity(ds.n());
    let mut predictions = Vec::with_capacity(ds.n());
    let mut scores = Vec::with_capacity(ds.n());
    for i in 0..ds.n() {
        labels.push(ds.label(i));
        let (class, s) = model
            .predict(ds.features(i))
            .map_err(|e| CliError::Data(e.to_string()))?;
        predictions.push(class);
        scores.push(s);
    }
    evaluate(&labels, &predictions, &scores, model.class_count())
        .map_err(|e| CliError::Data(e.to_string()))
}

fn run_cell(
    cell: &Cell,
    config: &BenchConfig,
    csv_cache: &[Option<Dataset>],
    config_hash: &str,
) -> BenchRow {
    let spec = &config.datasets[cell.dataset_index];
    let mut row = BenchRow {
        dataset: spec.id(),
        algorithm: cell.algo.name().into(),
        seed: cell.seed,
        config_hash: config_hash.into(),
        selected: None,
        g_mean: None,
        auc: None,
        avg_auc: None,
        accuracy: None,
        fallback: None,
        error: None,
        timing_ms: 0.0,
        timing_tune_ms: 0.0,
    };
    match execute(cell, config, &csv_cache[cell.dataset_index], &mut row) {
        Ok(()) => {}
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

fn execute(
    cell: &Cell,
    config: &BenchConfig,
    cached: &Option<Dataset>,
    row: &mut BenchRow,
) -> Result<(), CliError> {
    let spec = &config.datasets[cell.dataset_index];
    let ds = materialize(spec, cached, cell.seed)?;
    if cell.algo.binary_only() && ds.class_count() != 2 {
        return Err(CliError::Data(format!(
            "algorithm '{}' handles two-class data only, dataset has {} classes",
            cell.algo.name(),
            ds.class_count()
        )));
    }
    let (train, test) = stratified_split(&ds, config.train_fraction, cell.seed ^ SPLIT_SALT)?;

    let pool = candidates(config, cell.algo);
    let tuned = pool.len() > 1;
    let tune_started = Instant::now();
    let params = if tuned {
        select_by_cv(cell, config, &train, &pool)?
    } else {
        pool.into_iter().next().expect("at least one candidate")
    };
    if tuned {
        row.timing_tune_ms = tune_started.elapsed().as_secs_f64() * 1e3;
        row.selected = Some(SelectedParams {
            d_cost: params.d_cost,
            beta: cell.algo.tuned_knobs().1.then_some(params.beta),
            d_lb: params.d_lb,
        });
    }

    let started = Instant::now();
    let (model, report) = train_model(cell.algo, &train, &params)?;
    row.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    row.fallback = Some(report.fallback);

    let eval = eval_on(&model, &test)?;
    row.g_mean = Some(eval.g_mean);
    row.auc = eval.auc;
    row.avg_auc = eval.avg_auc;
    row.accuracy = Some(eval.accuracy);
    Ok(())
}

/// Cross-validated cost-grid selection by mean G-Mean on the training split;
/// candidates failing every fold are skipped, ties keep the earliest grid
/// cell.
fn select_by_cv(
    cell: &Cell,
    config: &BenchConfig,
    train: &Dataset,
    pool: &[TrainParams],
) -> Result<TrainParams, CliError> {
    let folds = stratified_folds(train, config.cv_folds, cell.seed ^ CV_SALT);
    if folds.is_empty() {
        return Ok(pool[0].clone());
    }
    let mut best: Option<(f64, usize)> = None;
    let mut last_error: Option<CliError> = None;
    for (idx, params) in pool.iter().enumerate() {
        let mut total = 0.0;
        let mut usable = true;
        for fold in 0..folds.len() {
            let (fit, heldout) = match fold_split(train, &folds, fold) {
                Ok(pair) => pair,
                Err(e) => {
                    last_error = Some(e.into());
                    usable = false;
                    break;
                }
            };
            match train_model(cell.algo, &fit, params).and_then(|(m, _)| eval_on(&m, &heldout)) {
                Ok(eval) => total += eval.g_mean,
                Err(e) => {
                    last_error = Some(e);
                    usable = false;
                    break;
                }
            }
        }
        if usable {
            let mean = total / folds.len() as f64;
            if best.map_or(true, |(b, _)| mean > b) {
                best = Some((mean, idx));
            }
        }
    }
    match best {
        Some((_, idx)) => Ok(pool[idx].clone()),
        None => Err(last_error.unwrap_or_else(|| {
            CliError::Solver("every grid candidate failed cross-validation".into())
        })),
    }
}

fn write_csv(path: &std::path::Path, rows: &[BenchRow]) -> Result<(), CliError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        out,
        "dataset,algorithm,seed,config_hash,d_cost,beta,d_lb,g_mean,auc,avg_auc,accuracy,fallback,error,timing_ms,timing_tune_ms"
    )?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        let (d_cost, beta, d_lb) = match &r.selected {
            Some(s) => (Some(s.d_cost), s.beta, s.d_lb),
            None => (None, None, None),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.dataset,
            r.algorithm,
            r.seed,
            r.config_hash,
            opt(d_cost),
            opt(beta),
            opt(d_lb),
            opt(r.g_mean),
            opt(r.auc),
            opt(r.avg_auc),
            opt(r.accuracy),
            r.fallback.map(|f| f.to_string()).unwrap_or_default(),
            r.error.as_deref().unwrap_or("").replace(',', ";"),
            r.timing_ms,
            r.timing_tune_ms
        )?;
    }
    Ok(())
}
