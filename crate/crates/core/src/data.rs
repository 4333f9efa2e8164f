//! Dataset representation, CSV ingestion, stratified splitting, and the
//! synthetic imbalanced-Gaussian generator with outlier injection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;
use thiserror::Error;

/// One labeled point: a finite feature vector and a class index.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub features: Vec<f64>,
    pub label: usize,
}

/// Per-class generating distributions of a synthetic dataset (unit-covariance
/// Gaussians, one center per class). Carried along so outlier injection can
/// re-sample from the opposite class.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianOrigin {
    pub centers: Vec<Vec<f64>>,
}

/// Immutable labeled dataset with a per-class index partition.
#[derive(Clone, Debug)]
pub struct Dataset {
    instances: Vec<Instance>,
    class_names: Vec<String>,
    class_indices: Vec<Vec<usize>>,
    origin: Option<GaussianOrigin>,
}

/// Parameters of the two-class synthetic protocol: minority drawn from a
/// standard normal at the origin, majority from a unit-covariance normal at
/// `majority_center * (1,...,1)`, both in [`SYNTHETIC_DIM`] dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub total_size: usize,
    pub imbalance_ratio: f64,
    pub majority_center: f64,
    #[serde(default)]
    pub outlier_rate: f64,
    pub seed: u64,
}

pub const SYNTHETIC_DIM: usize = 5;

impl SyntheticSpec {
    /// Minority size under the rounding rule `round(n / (IR + 1))`.
    pub fn minority_size(&self) -> usize {
        (self.total_size as f64 / (self.imbalance_ratio + 1.0)).round() as usize
    }

    pub fn validate(&self) -> Result<(), DataError> {
        if !(self.imbalance_ratio > 1.0) {
            return Err(DataError::InvalidSpec("imbalance ratio must be > 1".into()));
        }
        if !(0.0..1.0).contains(&self.outlier_rate) {
            return Err(DataError::InvalidSpec(
                "outlier rate must lie in [0, 1)".into(),
            ));
        }
        let minority = self.minority_size();
        if minority < 1 || minority >= self.total_size {
            return Err(DataError::InvalidSpec(format!(
                "size {} with IR {} leaves no room for both classes",
                self.total_size, self.imbalance_ratio
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv parse error: {0}")]
    Csv(String),
    #[error("row {row} has {got} columns, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("row {row}, column {col}: feature is not a finite number")]
    NonNumeric { row: usize, col: usize },
    #[error("at least two feature/label columns are required")]
    TooFewColumns,
    #[error("dataset is empty")]
    Empty,
    #[error("dataset contains a single class; at least two are required")]
    SingleClass,
    #[error("invalid dataset: {0}")]
    Invalid(String),
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("train fraction {fraction} empties class {class} on the {side} side")]
    SplitEmptiesClass {
        fraction: f64,
        class: usize,
        side: &'static str,
    },
    #[error("outlier rate must lie in [0, 0.5), got {0}")]
    BadOutlierRate(f64),
    #[error("outlier injection needs generator metadata; this dataset was not synthesized")]
    NoOrigin,
}

impl Dataset {
    /// Builds a dataset, deriving the per-class index partition and checking
    /// the invariants: at least two nonempty classes, uniform finite feature
    /// vectors, labels inside the class range.
    pub fn new(
        instances: Vec<Instance>,
        class_names: Vec<String>,
        origin: Option<GaussianOrigin>,
    ) -> Result<Dataset, DataError> {
        if instances.is_empty() {
            return Err(DataError::Empty);
        }
        let class_count = class_names.len();
        if class_count < 2 {
            return Err(DataError::SingleClass);
        }
        let dim = instances[0].features.len();
        if dim == 0 {
            return Err(DataError::TooFewColumns);
        }
        let mut class_indices = vec![Vec::new(); class_count];
        for (i, inst) in instances.iter().enumerate() {
            if inst.features.len() != dim {
                return Err(DataError::Invalid(format!(
                    "instance {i} has dimension {}, expected {dim}",
                    inst.features.len()
                )));
            }
            if inst.features.iter().any(|f| !f.is_finite()) {
                return Err(DataError::Invalid(format!(
                    "instance {i} has a non-finite feature"
                )));
            }
            if inst.label >= class_count {
                return Err(DataError::Invalid(format!(
                    "instance {i} has label {} outside 0..{class_count}",
                    inst.label
                )));
            }
            class_indices[inst.label].push(i);
        }
        if class_indices.iter().any(|c| c.is_empty()) {
            return Err(DataError::Invalid("a class has no instances".into()));
        }
        Ok(Dataset {
            instances,
            class_names,
            class_indices,
            origin,
        })
    }

    pub fn n(&self) -> usize {
        self.instances.len()
    }

    pub fn dim(&self) -> usize {
        self.instances[0].features.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.class_indices.iter().map(|c| c.len()).collect()
    }

    pub fn class_indices(&self, class: usize) -> &[usize] {
        &self.class_indices[class]
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn instance(&self, i: usize) -> &Instance {
        &self.instances[i]
    }

    pub fn label(&self, i: usize) -> usize {
        self.instances[i].label
    }

    pub fn features(&self, i: usize) -> &[f64] {
        &self.instances[i].features
    }

    pub fn origin(&self) -> Option<&GaussianOrigin> {
        self.origin.as_ref()
    }

    /// Writes `f1,...,fd,label` rows (no header). Floats use the shortest
    /// representation that round-trips, so write-then-load is lossless.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), DataError> {
        for inst in &self.instances {
            let mut line = String::new();
            for f in &inst.features {
                line.push_str(&format!("{f},"));
            }
            line.push_str(&self.class_names[inst.label]);
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn save_csv<P: AsRef<Path>>(&self, path: P) -> Result<(), DataError> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Loads a comma-separated file: feature columns, then one label column.
/// Labels are mapped to class indices in order of first appearance.
pub fn load_csv<P: AsRef<Path>>(path: P, has_header: bool) -> Result<Dataset, DataError> {
    let file = std::fs::File::open(path)?;
    read_csv(file, has_header)
}

/// Raw labeled rows `(features, label token)` with the same column checks as
/// [`read_csv`] but none of the class-universe rules; evaluation sets may
/// miss classes entirely, since their label universe comes from the model.
pub fn load_labeled_rows<P: AsRef<Path>>(
    path: P,
    has_header: bool,
) -> Result<Vec<(Vec<f64>, String)>, DataError> {
    let file = std::fs::File::open(path)?;
    read_labeled_rows(file, has_header)
}

pub fn read_labeled_rows<R: std::io::Read>(
    input: R,
    has_header: bool,
) -> Result<Vec<(Vec<f64>, String)>, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut rows = Vec::new();
    let mut expected_cols: Option<usize> = None;
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DataError::Csv(e.to_string()))?;
        let cols = record.len();
        if cols < 2 {
            return Err(DataError::TooFewColumns);
        }
        match expected_cols {
            None => expected_cols = Some(cols),
            Some(expected) if expected != cols => {
                return Err(DataError::Ragged {
                    row,
                    expected,
                    got: cols,
                });
            }
            _ => {}
        }
        let mut features = Vec::with_capacity(cols - 1);
        for col in 0..cols - 1 {
            let value: f64 = record[col]
                .parse()
                .map_err(|_| DataError::NonNumeric { row, col })?;
            if !value.is_finite() {
                return Err(DataError::NonNumeric { row, col });
            }
            features.push(value);
        }
        rows.push((features, record[cols - 1].to_string()));
    }
    if rows.is_empty() {
        return Err(DataError::Empty);
    }
    Ok(rows)
}

pub fn read_csv<R: std::io::Read>(input: R, has_header: bool) -> Result<Dataset, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let mut instances = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut expected_cols: Option<usize> = None;

    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DataError::Csv(e.to_string()))?;
        let cols = record.len();
        if cols < 2 {
            return Err(DataError::TooFewColumns);
        }
        match expected_cols {
            None => expected_cols = Some(cols),
            Some(expected) if expected != cols => {
                return Err(DataError::Ragged {
                    row,
                    expected,
                    got: cols,
                });
            }
            _ => {}
        }
        let mut features = Vec::with_capacity(cols - 1);
        for col in 0..cols - 1 {
            let value: f64 = record[col]
                .parse()
                .map_err(|_| DataError::NonNumeric { row, col })?;
            if !value.is_finite() {
                return Err(DataError::NonNumeric { row, col });
            }
            features.push(value);
        }
        let token = record[cols - 1].to_string();
        let label = match class_names.iter().position(|c| *c == token) {
            Some(idx) => idx,
            None => {
                class_names.push(token);
                class_names.len() - 1
            }
        };
        instances.push(Instance { features, label });
    }

    if instances.is_empty() {
        return Err(DataError::Empty);
    }
    if class_names.len() < 2 {
        return Err(DataError::SingleClass);
    }
    Dataset::new(instances, class_names, None)
}

/// Splits each class with `round(train_fraction * n_j)` points on the train
/// side, shuffled by the seed. Errors if any class would end up empty on
/// either side.
pub fn stratified_split(
    ds: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset), DataError> {
    if !(0.0 < train_fraction && train_fraction < 1.0) {
        return Err(DataError::Invalid(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for (class, members) in ds.class_indices.iter().enumerate() {
        let n_j = members.len();
        let take = (train_fraction * n_j as f64).round() as usize;
        if take == 0 {
            return Err(DataError::SplitEmptiesClass {
                fraction: train_fraction,
                class,
                side: "train",
            });
        }
        if take >= n_j {
            return Err(DataError::SplitEmptiesClass {
                fraction: train_fraction,
                class,
                side: "test",
            });
        }
        let mut order = members.clone();
        for i in (1..order.len()).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        train_idx.extend_from_slice(&order[..take]);
        test_idx.extend_from_slice(&order[take..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    let subset = |idx: &[usize]| -> Result<Dataset, DataError> {
        let instances = idx.iter().map(|&i| ds.instances[i].clone()).collect();
        Dataset::new(instances, ds.class_names.clone(), ds.origin.clone())
    };
    Ok((subset(&train_idx)?, subset(&test_idx)?))
}

/// Box-Muller normal sampler over a seedable generator; fully deterministic
/// per seed and independent of any library distribution tables.
pub struct NormalSampler {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalSampler {
    pub fn new(seed: u64) -> NormalSampler {
        NormalSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the log finite.
        let u1: f64 = 1.0 - self.rng.random::<f64>();
        let u2: f64 = self.rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    fn vector_around(&mut self, center: &[f64]) -> Vec<f64> {
        center.iter().map(|c| c + self.sample()).collect()
    }
}

/// General blob generator: one unit-covariance Gaussian per class, sampled
/// class by class in order. Class `j` draws `sizes[j]` points around
/// `centers[j]`.
pub fn generate_blobs(
    sizes: &[usize],
    centers: &[Vec<f64>],
    seed: u64,
) -> Result<Dataset, DataError> {
    if sizes.len() != centers.len() {
        return Err(DataError::InvalidSpec(
            "sizes and centers must have equal length".into(),
        ));
    }
    if sizes.len() < 2 {
        return Err(DataError::SingleClass);
    }
    if sizes.contains(&0) {
        return Err(DataError::InvalidSpec("every class needs size >= 1".into()));
    }
    let dim = centers[0].len();
    if centers.iter().any(|c| c.len() != dim) {
        return Err(DataError::InvalidSpec(
            "all centers must share one dimension".into(),
        ));
    }
    let mut sampler = NormalSampler::new(seed);
    let mut instances = Vec::with_capacity(sizes.iter().sum());
    for (label, (&size, center)) in sizes.iter().zip(centers).enumerate() {
        for _ in 0..size {
            instances.push(Instance {
                features: sampler.vector_around(center),
                label,
            });
        }
    }
    let class_names = (0..sizes.len()).map(|j| j.to_string()).collect();
    Dataset::new(
        instances,
        class_names,
        Some(GaussianOrigin {
            centers: centers.to_vec(),
        }),
    )
}

/// Two-class synthetic dataset: class 0 is the minority at the origin,
/// class 1 the majority at `majority_center * (1,...,1)`. Outlier injection
/// is a separate step ([`inject_outliers`]); `spec.outlier_rate` is only
/// metadata here.
pub fn generate_gaussian(spec: &SyntheticSpec) -> Result<Dataset, DataError> {
    spec.validate()?;
    let minority = spec.minority_size();
    let majority = spec.total_size - minority;
    let centers = vec![
        vec![0.0; SYNTHETIC_DIM],
        vec![spec.majority_center; SYNTHETIC_DIM],
    ];
    generate_blobs(&[minority, majority], &centers, spec.seed)
}

/// Replaces `round(rate * n_j)` randomly chosen instances of every class with
/// fresh draws from another class's generating Gaussian, keeping labels and
/// class counts unchanged. Only valid on synthetic datasets (the generating
/// centers must be known). With more than two classes the replacement class
/// is drawn uniformly among the others.
pub fn inject_outliers(ds: &Dataset, rate: f64, seed: u64) -> Result<Dataset, DataError> {
    if !(0.0..0.5).contains(&rate) {
        return Err(DataError::BadOutlierRate(rate));
    }
    let origin = ds.origin().ok_or(DataError::NoOrigin)?.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = NormalSampler {
        rng: ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15),
        spare: None,
    };
    let mut instances = ds.instances.clone();
    let class_count = ds.class_count();
    for class in 0..class_count {
        let members = &ds.class_indices[class];
        let k = (rate * members.len() as f64).round() as usize;
        if k >= members.len() {
            return Err(DataError::BadOutlierRate(rate));
        }
        if k == 0 {
            continue;
        }
        // Partial Fisher-Yates: the first k entries are the chosen victims.
        let mut order = members.clone();
        for i in 0..k {
            let j = rng.random_range(i..order.len());
            order.swap(i, j);
        }
        for &victim in &order[..k] {
            let other = if class_count == 2 {
                1 - class
            } else {
                let pick = rng.random_range(0..class_count - 1);
                if pick >= class {
                    pick + 1
                } else {
                    pick
                }
            };
            instances[victim].features = sampler.vector_around(&origin.centers[other]);
        }
    }
    Dataset::new(instances, ds.class_names.clone(), Some(origin))
}
