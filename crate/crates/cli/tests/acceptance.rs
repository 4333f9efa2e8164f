//! Acceptance suite: one test per criterion, each printing a PASS line when
//! its assertions hold. Run with `cargo test -p lexiboost-cli --test
//! acceptance -- --nocapture` to see the per-criterion lines.

use lexiboost_core::data::{
    generate_blobs, generate_gaussian, inject_outliers, stratified_split, Dataset, SyntheticSpec,
};
use lexiboost_core::dual_lexiboost::{train_dual_lexiboost, DualLexiConfig, RoundRecord};
use lexiboost_core::ensemble::{
    hinge_loss, margin_column, run_adaboost, run_adaboost_multiclass, Ensemble, MarginMatrix,
};
use lexiboost_core::lexiboost::{
    achieved_avg_losses, solve_stage1_all, solve_stage2, stage1_dual_lp, stage1_lp, stage2_lp,
    train_lexiboost, StageOneResult, StageTwoResult,
};
use lexiboost_core::lp::oracle::{enumerate_solve, random_lp};
use lexiboost_core::lp::{self, LpStatus};
use lexiboost_core::lp_variants::{
    dual_lpu_boost_train, lp_boost_weights, lpu_boost_weights, LpVariantConfig,
};
use lexiboost_core::metrics::{confusion_matrix, g_mean, per_class_recall};
use lexiboost_core::weak::{self, Learner, WeightDistribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

fn pass(criterion: usize, name: &str) {
    println!("acceptance criterion {criterion} ({name}): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 1: solver vs vertex-enumeration oracle on 200 random programs.
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_lp_solver_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_001);
    let mut optimal = 0;
    let mut infeasible = 0;
    let mut unbounded = 0;
    for case in 0..200 {
        let model = random_lp(&mut rng, 6, 8);
        let got = lp::solve(&model).expect("solver error");
        let want = enumerate_solve(&model, 1e6);
        assert_eq!(
            got.status,
            want.status,
            "case {case}: status disagreement\n{}",
            model.dump()
        );
        match got.status {
            LpStatus::Optimal => {
                optimal += 1;
                let gap = (got.objective() - want.objective.unwrap()).abs();
                assert!(
                    gap < 1e-6,
                    "case {case}: objective gap {gap}\n{}",
                    model.dump()
                );
            }
            LpStatus::Infeasible => infeasible += 1,
            LpStatus::Unbounded => unbounded += 1,
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "oracle sweep took {elapsed:?}, budget is 10 s"
    );
    assert!(
        optimal > 0 && infeasible > 0 && unbounded > 0,
        "sweep must exercise all statuses"
    );
    pass(1, "lp solver oracle equivalence");
}

// ---------------------------------------------------------------------------
// Criterion 2: strong duality of the per-class stage against its dual form.
// ---------------------------------------------------------------------------

fn random_margin_matrix(rng: &mut ChaCha8Rng, max_n: usize, max_t: usize) -> MarginMatrix {
    let n = rng.random_range(4..=max_n);
    let t = rng.random_range(1..=max_t);
    let values: Vec<f64> = (0..n * t)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    let mut class_of: Vec<usize> = (0..n).map(|_| rng.random_range(0..2)).collect();
    class_of[0] = 0;
    class_of[1] = 1;
    MarginMatrix::from_rows(values, t, class_of, 2)
}

#[test]
fn criterion_02_strong_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_002);
    for case in 0..50 {
        let mm = random_margin_matrix(&mut rng, 40, 6);
        for class in 0..2 {
            let primal = lp::solve(&stage1_lp(&mm, class)).expect("primal solve");
            assert_eq!(primal.status, LpStatus::Optimal);
            let dual = lp::solve(&stage1_dual_lp(&mm, class)).expect("dual solve");
            assert_eq!(dual.status, LpStatus::Optimal);
            let gap = (primal.objective() - dual.objective()).abs();
            assert!(
                gap < 1e-6,
                "case {case} class {class}: duality gap {gap} (primal {}, dual {})",
                primal.objective(),
                dual.objective()
            );
        }
    }
    pass(2, "strong duality of the per-class stage");
}

// ---------------------------------------------------------------------------
// Criteria 3 and 4 share solved instances.
// ---------------------------------------------------------------------------

struct StageInstance {
    mm: MarginMatrix,
    stage1: StageOneResult,
    stage2: StageTwoResult,
}

fn stage_instances() -> &'static Vec<StageInstance> {
    static INSTANCES: OnceLock<Vec<StageInstance>> = OnceLock::new();
    INSTANCES.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(20_240_003);
        (0..20)
            .map(|_| {
                let mm = random_margin_matrix(&mut rng, 30, 6);
                let stage1 = solve_stage1_all(&mm).expect("stage one");
                let stage2 = solve_stage2(&mm, &stage1, None).expect("stage two");
                StageInstance { mm, stage1, stage2 }
            })
            .collect()
    })
}

#[test]
fn criterion_03_stage_optimality_by_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_303);
    for (idx, inst) in stage_instances().iter().enumerate() {
        let t = inst.mm.num_components();
        let mins = inst.stage1.min_avg_losses();
        for sample in 0..10_000 {
            let mut alpha: Vec<f64> = (0..t).map(|_| -rng.random::<f64>().ln()).collect();
            let total: f64 = alpha.iter().sum();
            alpha.iter_mut().for_each(|a| *a /= total);
            let avg = achieved_avg_losses(&inst.mm, &alpha);
            let mut worst_dev: f64 = 0.0;
            for class in 0..2 {
                assert!(
                    avg[class] >= mins[class] - 1e-7,
                    "instance {idx} sample {sample}: class {class} beats stage one \
                     ({} < {})",
                    avg[class],
                    mins[class]
                );
                worst_dev = worst_dev.max(avg[class] - mins[class]);
            }
            assert!(
                worst_dev >= inst.stage2.chi - 1e-7,
                "instance {idx} sample {sample}: deviation {worst_dev} beats chi {}",
                inst.stage2.chi
            );
        }
    }
    pass(3, "stage optimality by simplex sampling");
}

#[test]
fn criterion_04_hinge_identity_at_optima() {
    for (idx, inst) in stage_instances().iter().enumerate() {
        // Per-class stage: the raw LP losses must equal the hinge values.
        for class in 0..2 {
            let entry = &inst.stage1.per_class[class];
            for (r, &i) in inst.mm.class_indices(class).iter().enumerate() {
                let expect = hinge_loss(inst.mm.margin_of(i, &entry.alpha));
                assert!(
                    (entry.lambda[r] - expect).abs() < 1e-7,
                    "instance {idx} class {class} row {r}: lambda {} vs hinge {expect}",
                    entry.lambda[r]
                );
            }
        }
        // Deviation stage: solve the raw LP and check its loss block too.
        let loss_sums = inst.stage1.loss_sums();
        let model = stage2_lp(&inst.mm, &loss_sums, None).expect("stage-two model");
        let sol = lp::solve(&model).expect("stage-two solve");
        assert_eq!(sol.status, LpStatus::Optimal);
        let t = inst.mm.num_components();
        let point = sol.point();
        let alpha = &point[..t];
        for i in 0..inst.mm.n() {
            let expect = hinge_loss(inst.mm.margin_of(i, alpha));
            assert!(
                (point[t + i] - expect).abs() < 1e-7,
                "instance {idx} row {i}: lambda {} vs hinge {expect}",
                point[t + i]
            );
        }
        // And the reported chi is exactly the worst recomputed deviation.
        let mins = inst.stage1.min_avg_losses();
        let worst = inst
            .stage2
            .achieved_avg_losses
            .iter()
            .zip(&mins)
            .map(|(a, m)| a - m)
            .fold(0.0f64, f64::max);
        assert!(
            (worst.max(0.0) - inst.stage2.chi).abs() < 1e-7,
            "instance {idx}: chi {} vs recomputed {worst}",
            inst.stage2.chi
        );
    }
    pass(4, "hinge identity at stage optima");
}

// ---------------------------------------------------------------------------
// Criterion 5: exact solution of the symmetric two-point toy.
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_toy_exactness() {
    let mm = MarginMatrix::from_rows(vec![1.0, -1.0, -1.0, 1.0], 2, vec![0, 1], 2);
    let stage1 = solve_stage1_all(&mm).expect("stage one");
    let stage2 = solve_stage2(&mm, &stage1, None).expect("stage two");

    // Grid oracle: each class's deviation is its single point's hinge loss;
    // minimize the max of (2 - 2 a1) and (2 a1) over the weight grid.
    let mut best = (f64::INFINITY, 0.0);
    for step in 0..=10_000 {
        let a1 = step as f64 * 1e-4;
        let worst = (2.0 - 2.0 * a1).max(2.0 * a1);
        if worst < best.0 {
            best = (worst, a1);
        }
    }
    assert!((best.0 - 1.0).abs() < 1e-3 && (best.1 - 0.5).abs() < 1e-3);

    assert!((stage2.alpha[0] - 0.5).abs() < 1e-6);
    assert!((stage2.alpha[1] - 0.5).abs() < 1e-6);
    assert!((stage2.chi - 1.0).abs() < 1e-6);
    pass(5, "symmetric toy exactness");
}

// ---------------------------------------------------------------------------
// Criteria 6, 7, 8: trend runs at desk scale plus their weight invariants.
// ---------------------------------------------------------------------------

fn test_g_mean(model: &Ensemble, ds: &Dataset) -> f64 {
    let predictions: Vec<usize> = (0..ds.n())
        .map(|i| model.predict(ds.features(i)).expect("predict").0)
        .collect();
    let labels: Vec<usize> = (0..ds.n()).map(|i| ds.label(i)).collect();
    let confusion = confusion_matrix(&labels, &predictions, ds.class_count()).expect("confusion");
    match per_class_recall(&confusion) {
        Ok(recalls) => g_mean(&recalls),
        Err(_) => 0.0,
    }
}

struct TrendFixture {
    /// Per-seed (adaboost, lexiboost, dual-lexiboost) test G-Means.
    clean: Vec<[f64; 3]>,
    outlier: Vec<[f64; 3]>,
    /// Every weight-round record emitted by the dual runs of criteria 6/7.
    dual_rounds: Vec<RoundRecord>,
    elapsed_s: f64,
}

fn trend_fixture() -> &'static TrendFixture {
    static FIXTURE: OnceLock<TrendFixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let started = Instant::now();
        let learner = Learner::Knn { k: 5 };
        let mut clean = Vec::new();
        let mut outlier = Vec::new();
        let mut dual_rounds = Vec::new();
        for with_outliers in [false, true] {
            for seed in 0..10u64 {
                let spec = SyntheticSpec {
                    total_size: 500,
                    imbalance_ratio: 10.0,
                    majority_center: 1.7,
                    outlier_rate: if with_outliers { 0.1 } else { 0.0 },
                    seed,
                };
                let mut ds = generate_gaussian(&spec).expect("generate");
                if with_outliers {
                    ds = inject_outliers(&ds, 0.1, seed).expect("outliers");
                }
                let (train, test) = stratified_split(&ds, 0.8, seed).expect("split");

                let ada = run_adaboost(&train, learner, 10)
                    .expect("adaboost")
                    .into_ensemble(2)
                    .expect("ensemble");
                let lexi = train_lexiboost(&train, learner, 10).expect("lexiboost");
                let dual = train_dual_lexiboost(&train, learner, &DualLexiConfig::default())
                    .expect("dual lexiboost");

                let row = [
                    test_g_mean(&ada, &test),
                    test_g_mean(&lexi.ensemble, &test),
                    test_g_mean(&dual.ensemble, &test),
                ];
                dual_rounds.extend(dual.phase_a);
                dual_rounds.extend(dual.phase_c);
                if with_outliers {
                    outlier.push(row);
                } else {
                    clean.push(row);
                }
            }
        }
        TrendFixture {
            clean,
            outlier,
            dual_rounds,
            elapsed_s: started.elapsed().as_secs_f64(),
        }
    })
}

struct MulticlassFixture {
    per_seed: Vec<[f64; 2]>,
    dual_rounds: Vec<RoundRecord>,
}

fn multiclass_fixture() -> &'static MulticlassFixture {
    static FIXTURE: OnceLock<MulticlassFixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let learner = Learner::Knn { k: 5 };
        let centers = vec![vec![0.0; 5], vec![1.7; 5], vec![3.4; 5]];
        let mut per_seed = Vec::new();
        let mut dual_rounds = Vec::new();
        for seed in 0..5u64 {
            let ds = generate_blobs(&[400, 80, 40], &centers, seed).expect("blobs");
            let (train, test) = stratified_split(&ds, 0.8, seed).expect("split");
            let ada = run_adaboost_multiclass(&train, learner, 10)
                .expect("multiclass adaboost")
                .into_ensemble(3)
                .expect("ensemble");
            let dual = train_dual_lexiboost(&train, learner, &DualLexiConfig::default())
                .expect("dual lexiboost");
            per_seed.push([test_g_mean(&ada, &test), test_g_mean(&dual.ensemble, &test)]);
            dual_rounds.extend(dual.phase_a);
            dual_rounds.extend(dual.phase_c);
        }
        MulticlassFixture {
            per_seed,
            dual_rounds,
        }
    })
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn criterion_06_trend_at_desk_scale() {
    let fixture = trend_fixture();
    assert!(
        fixture.elapsed_s < 600.0,
        "trend runs took {} s, budget is 600",
        fixture.elapsed_s
    );
    for (name, rows) in [
        ("clean", &fixture.clean),
        ("10% outliers", &fixture.outlier),
    ] {
        let ada = mean(rows.iter().map(|r| r[0]));
        let lexi = mean(rows.iter().map(|r| r[1]));
        let dual = mean(rows.iter().map(|r| r[2]));
        println!(
            "  {name}: mean test G-Mean adaboost {ada:.4}, lexiboost {lexi:.4}, \
             dual-lexiboost {dual:.4}"
        );
        assert!(lexi > ada, "{name}: lexiboost {lexi} <= adaboost {ada}");
        assert!(
            dual > ada,
            "{name}: dual-lexiboost {dual} <= adaboost {ada}"
        );
    }
    pass(6, "trend orderings at desk scale");
}

#[test]
fn criterion_07_multiclass_sanity() {
    let fixture = multiclass_fixture();
    let ada = mean(fixture.per_seed.iter().map(|r| r[0]));
    let dual = mean(fixture.per_seed.iter().map(|r| r[1]));
    println!("  3-class: mean G-Mean multiclass adaboost {ada:.4}, dual-lexiboost {dual:.4}");
    assert!(
        dual >= ada,
        "dual-lexiboost {dual} below the multiclass baseline {ada}"
    );
    pass(7, "multi-class ordering");
}

#[test]
fn criterion_08_dual_weight_invariants() {
    let rounds: Vec<&RoundRecord> = trend_fixture()
        .dual_rounds
        .iter()
        .chain(multiclass_fixture().dual_rounds.iter())
        .collect();
    assert!(!rounds.is_empty());
    for (k, rec) in rounds.iter().enumerate() {
        let sum: f64 = rec.dist.iter().sum();
        assert!(
            (sum - 1.0).abs() < 1e-9,
            "record {k} round {}: weights sum to {sum}",
            rec.round
        );
        for (i, (&w, &b)) in rec.dist.iter().zip(&rec.bounds).enumerate() {
            assert!(w >= -1e-12, "record {k} weight {i} negative: {w}");
            assert!(
                w <= b + 1e-9,
                "record {k} round {} weight {i}: {w} above bound {b}",
                rec.round
            );
        }
    }
    println!("  checked {} emitted distributions", rounds.len());
    pass(8, "dual weight invariants");
}

// ---------------------------------------------------------------------------
// Criterion 9: byte-identical CLI outputs modulo timing fields.
// ---------------------------------------------------------------------------

fn strip_timing(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Object(map) => {
            map.retain(|key, _| !key.starts_with("timing"));
            for v in map.values_mut() {
                strip_timing(v);
            }
        }
        serde_json::Value::Array(items) => {
            for v in items {
                strip_timing(v);
            }
        }
        _ => {}
    }
}

fn normalized_json(path: &std::path::Path) -> String {
    let mut value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).expect("read json")).expect("json");
    strip_timing(&mut value);
    serde_json::to_string(&value).expect("serialize")
}

fn run_cli(args: &[&str], dir: &std::path::Path) {
    let status = Command::new(env!("CARGO_BIN_EXE_lexiboost"))
        .args(args)
        .current_dir(dir)
        .status()
        .expect("spawn cli");
    assert!(status.success(), "cli failed: {args:?}");
}

#[test]
fn criterion_09_cli_determinism() {
    let base = tempfile::tempdir().expect("tempdir");
    let mut model_bytes = Vec::new();
    let mut report_norms = Vec::new();
    let mut results_norms = Vec::new();
    let mut csv_norms = Vec::new();

    for run in 0..2 {
        let dir = base.path().join(format!("run{run}"));
        std::fs::create_dir_all(&dir).expect("mkdir");
        run_cli(
            &[
                "gen",
                "--size",
                "160",
                "--ir",
                "4",
                "--center",
                "1.7",
                "--seed",
                "7",
                "--outlier-rate",
                "0.1",
                "--out",
                "data.csv",
            ],
            &dir,
        );
        run_cli(
            &[
                "train",
                "--algo",
                "dual-lexiboost",
                "--base",
                "knn",
                "--k",
                "3",
                "--t",
                "4",
                "--seed",
                "7",
                "--data",
                "data.csv",
                "--model",
                "model.json",
                "--report",
                "report.json",
            ],
            &dir,
        );
        std::fs::write(
            dir.join("grid.json"),
            r#"{
  "datasets": [ { "synthetic": { "size": 120, "ir": 4.0, "center": 1.7 } } ],
  "algorithms": ["adaboost", "lexiboost", "lpboost"],
  "base": "stump",
  "t_max": 4,
  "seeds": [0, 1],
  "grids": { "nu": [0.2, 0.1], "beta": [2.0], "d_lb": [50.0] }
}"#,
        )
        .expect("write grid");
        run_cli(
            &["bench", "--config", "grid.json", "--out", "results"],
            &dir,
        );

        model_bytes.push(std::fs::read(dir.join("model.json")).expect("model bytes"));
        report_norms.push(normalized_json(&dir.join("report.json")));
        results_norms.push(normalized_json(&dir.join("results/results.json")));
        let csv = std::fs::read_to_string(dir.join("results/results.csv")).expect("csv");
        // Timing values are the two last columns of every data row.
        let stripped: Vec<String> = csv
            .lines()
            .map(|line| {
                let cols: Vec<&str> = line.split(',').collect();
                cols[..cols.len().saturating_sub(2)].join(",")
            })
            .collect();
        csv_norms.push(stripped.join("\n"));
    }

    assert_eq!(model_bytes[0], model_bytes[1], "model files differ");
    assert_eq!(report_norms[0], report_norms[1], "train reports differ");
    assert_eq!(results_norms[0], results_norms[1], "bench results differ");
    assert_eq!(csv_norms[0], csv_norms[1], "bench csv differs");
    pass(9, "cli determinism modulo timing");
}

// ---------------------------------------------------------------------------
// Criterion 10: special-case collapse identities.
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_comparator_collapse_identities() {
    // (a) The uneven dual loop with beta = 1 and no lower caps must behave
    // exactly like an independently coded even soft-margin dual loop.
    let ds = generate_blobs(&[12, 48], &[vec![0.0; 3], vec![1.8; 3]], 100).expect("blobs");
    let cfg = LpVariantConfig {
        d_cost: 5.0,
        beta: 1.0,
        d_lb_divisor: None,
        t_max: 5,
        eps_lpa: 1e-16,
    };
    let production = dual_lpu_boost_train(&ds, Learner::Stump, &cfg, 0).expect("dual loop");

    // Reference loop written directly from the even formulation.
    let n = ds.n();
    let cap = cfg.d_cost / n as f64;
    let mut dist = WeightDistribution::uniform(n);
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut reference_alpha: Option<Vec<f64>> = None;
    let mut reference_dists: Vec<Vec<f64>> = Vec::new();
    let mut s_prev: Option<f64> = None;
    for _round in 0..cfg.t_max {
        let h = weak::train(&ds, &dist, Learner::Stump).expect("train");
        let eps = weak::weighted_error(&h, &ds, &dist);
        if eps >= 0.5 {
            break;
        }
        let col = margin_column(&h, &ds);
        let edge: f64 = col.iter().zip(dist.weights()).map(|(m, w)| m * w).sum();
        if let Some(s) = s_prev {
            if edge <= s + 1e-12 {
                break;
            }
        }
        reference_dists.push(dist.weights().to_vec());
        columns.push(col);
        let mm = MarginMatrix::from_columns(&columns, &ds);
        let mut model = lp::LinearProgram::minimize(n + 1);
        let mut obj = vec![0.0; n + 1];
        obj[n] = 1.0;
        model.set_objective(obj);
        for tau in 0..columns.len() {
            let mut coeffs = vec![0.0; n + 1];
            for i in 0..n {
                coeffs[i] = mm.entry(i, tau);
            }
            coeffs[n] = -1.0;
            model.add_row(coeffs, lp::Relation::Le, 0.0);
        }
        model.add_row(
            (0..n + 1).map(|v| if v < n { 1.0 } else { 0.0 }).collect(),
            lp::Relation::Eq,
            1.0,
        );
        for i in 0..n {
            model.set_bounds(i, 0.0, cap);
        }
        model.set_free(n);
        let sol = lp::solve(&model).expect("reference solve");
        assert_eq!(sol.status, LpStatus::Optimal);
        let duals = sol.duals();
        reference_alpha = Some((0..columns.len()).map(|t| (-duals[t]).max(0.0)).collect());
        s_prev = Some(sol.objective());
        dist = WeightDistribution::from_lp_point(sol.point()[..n].to_vec()).expect("dist");
    }
    let reference_alpha = reference_alpha.expect("reference ran");
    let total: f64 = reference_alpha.iter().sum();
    let reference_alpha: Vec<f64> = reference_alpha.iter().map(|a| a / total).collect();

    assert_eq!(production.rounds.len(), reference_dists.len());
    for (round, expect) in production.rounds.iter().zip(&reference_dists) {
        assert_eq!(&round.dist, expect, "training weights diverged");
    }
    assert_eq!(production.ensemble.weights(), &reference_alpha[..]);

    // (b) The uneven primal with beta = 1 is the even primal, exactly.
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_010);
    for _ in 0..10 {
        let mm = random_margin_matrix(&mut rng, 20, 4);
        let even = lp_boost_weights(&mm, 10.0).expect("even");
        let uneven = lpu_boost_weights(&mm, 10.0, 1.0, 1).expect("uneven");
        assert_eq!(even.alpha, uneven.alpha);
        assert_eq!(even.xi, uneven.xi);
        assert_eq!(even.rho, uneven.rho);
    }

    // (c) Unit costs in the final stage reproduce the plain program exactly.
    for _ in 0..10 {
        let mm = random_margin_matrix(&mut rng, 20, 4);
        let stage1 = solve_stage1_all(&mm).expect("stage one");
        let plain = solve_stage2(&mm, &stage1, None).expect("plain");
        let unit = solve_stage2(&mm, &stage1, Some(&[1.0, 1.0])).expect("unit costs");
        assert_eq!(plain.alpha, unit.alpha);
        assert_eq!(plain.chi, unit.chi);
        assert_eq!(plain.achieved_avg_losses, unit.achieved_avg_losses);
    }
    pass(10, "comparator collapse identities");
}
