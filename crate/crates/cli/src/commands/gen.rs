use crate::{CliError, GenArgs};
use lexiboost_core::data::{generate_gaussian, inject_outliers, SyntheticSpec};

pub fn run(args: &GenArgs) -> Result<(), CliError> {
    let spec = SyntheticSpec {
        total_size: args.size,
        imbalance_ratio: args.ir,
        majority_center: args.center,
        outlier_rate: args.outlier_rate,
        seed: args.seed,
    };
    spec.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if args.outlier_rate >= 0.5 {
        return Err(CliError::Usage(format!(
            "outlier rate must lie in [0, 0.5), got {}",
            args.outlier_rate
        )));
    }

    let mut ds = generate_gaussian(&spec)?;
    if spec.outlier_rate > 0.0 {
        ds = inject_outliers(&ds, spec.outlier_rate, spec.seed)?;
    }
    ds.save_csv(&args.out)?;

    let sidecar = args.out.with_extension("spec.json");
    let file = std::fs::File::create(&sidecar)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), &spec)?;

    let sizes = ds.class_sizes();
    println!(
        "wrote {} rows ({} minority + {} majority) to {} (spec: {})",
        ds.n(),
        sizes[0],
        sizes[1],
        args.out.display(),
        sidecar.display()
    );
    Ok(())
}
