use crate::runner::ModelFile;
use crate::{CliError, EvalArgs};
use lexiboost_core::data::load_labeled_rows;
use lexiboost_core::metrics::evaluate;

pub fn run(args: &EvalArgs) -> Result<(), CliError> {
    let model_file = ModelFile::load(&args.model)?;
    let rows = load_labeled_rows(&args.data, args.has_header)?;

    let mut labels = Vec::with_capacity(rows.len());
    let mut predictions = Vec::with_capacity(rows.len());
    let mut score_vectors = Vec::with_capacity(rows.len());
    for (features, token) in &rows {
        // The label universe is the model's, so files may miss classes but
        // cannot introduce new ones.
        let label = model_file
            .class_names
            .iter()
            .position(|c| c == token)
            .ok_or_else(|| {
                CliError::Data(format!(
                    "label '{token}' in {} was never seen during training",
                    args.data.display()
                ))
            })?;
        labels.push(label);
        let (class, scores) = model_file
            .model
            .predict(features)
            .map_err(|e| CliError::Data(e.to_string()))?;
        predictions.push(class);
        score_vectors.push(scores);
    }

    let report = evaluate(
        &labels,
        &predictions,
        &score_vectors,
        model_file.model.class_count(),
    )
    .map_err(|e| CliError::Data(e.to_string()))?;

    let text = serde_json::to_string_pretty(&report)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, text)?;
            let auc = report
                .auc
                .map(|a| format!(", auc = {a:.4}"))
                .unwrap_or_default();
            println!(
                "evaluated {} instances: g-mean = {:.4}{auc}; report: {}",
                report.n_test,
                report.g_mean,
                path.display()
            );
        }
        None => println!("{text}"),
    }
    Ok(())
}
