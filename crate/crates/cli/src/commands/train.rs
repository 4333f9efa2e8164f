use crate::hash::fnv1a64;
use crate::runner::{train_model, AlgoId, ModelFile, TrainParams};
use crate::{CliError, TrainArgs};
use lexiboost_core::data::load_csv;
use lexiboost_core::report::TrainReport;
use lexiboost_core::weak::Learner;
use serde::Serialize;
use std::time::Instant;

#[derive(Serialize)]
struct FullReport<'a> {
    algorithm: &'a str,
    data: String,
    learner: String,
    t_max: usize,
    seed: u64,
    config_hash: String,
    report: &'a TrainReport,
    timing: Timing,
}

#[derive(Serialize)]
struct Timing {
    train_ms: f64,
}

pub fn run(args: &TrainArgs) -> Result<(), CliError> {
    let algo = AlgoId::parse(&args.algo)?;
    let learner = match args.base.as_str() {
        "stump" => Learner::Stump,
        "tree" => Learner::Tree {
            max_depth: args.depth,
        },
        "knn" => Learner::Knn { k: args.k },
        other => {
            return Err(CliError::Usage(format!(
                "unknown base learner '{other}' (expected stump, tree, or knn)"
            )))
        }
    };
    let d_cost = match (args.d_cost, args.nu) {
        (Some(d), _) => d,
        (None, Some(nu)) if nu > 0.0 => 1.0 / nu,
        (None, Some(nu)) => return Err(CliError::Usage(format!("nu must be positive, got {nu}"))),
        (None, None) => 5.0,
    };
    let params = TrainParams {
        learner,
        t_max: args.t,
        d_cost,
        beta: args.beta,
        d_lb: args.d_lb,
        eps_lpa: 1e-16,
        relaxed_break: args.relaxed_break,
        costs: args.costs.clone(),
        target_class: args.target_class,
    };

    let ds = load_csv(&args.data, args.has_header)?;
    if algo.binary_only() && ds.class_count() != 2 {
        return Err(CliError::Data(format!(
            "algorithm '{}' handles two-class data only, but {} has {} classes; \
             use lexiboost, dual-lexiboost, lpadaboost, or dual-lpadaboost instead",
            algo.name(),
            args.data.display(),
            ds.class_count()
        )));
    }

    let started = Instant::now();
    let (ensemble, report) = train_model(algo, &ds, &params)?;
    let train_ms = started.elapsed().as_secs_f64() * 1e3;

    let model_file = ModelFile {
        class_names: ds.class_names().to_vec(),
        model: ensemble,
    };
    model_file.save(&args.model)?;

    if let Some(report_path) = &args.report {
        let config_desc = format!(
            "{}|{}|{:?}|{}|{}|{}|{:?}|{:?}|{}|{:?}",
            algo.name(),
            args.data.display(),
            params.learner,
            params.t_max,
            params.d_cost,
            params.beta,
            params.d_lb,
            params.costs,
            args.seed,
            args.target_class,
        );
        let full = FullReport {
            algorithm: algo.name(),
            data: args.data.display().to_string(),
            learner: format!("{:?}", params.learner),
            t_max: params.t_max,
            seed: args.seed,
            config_hash: fnv1a64(config_desc.as_bytes()),
            report: &report,
            timing: Timing { train_ms },
        };
        let file = std::fs::File::create(report_path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), &full)?;
    }

    let chi = report
        .chi
        .map(|c| format!(", chi = {c:.6}"))
        .unwrap_or_default();
    println!(
        "trained {} with {} components{chi}; model: {}",
        algo.name(),
        report.components,
        args.model.display()
    );
    Ok(())
}
