//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS or FAIL line; exits non-zero if any
//! criterion fails.

mod common;

use std::f64::consts::SQRT_2;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qensemble::classifiers::oracle::{
    cosine_decision, cosine_scale, distance_decision, distance_scale, fidelities, oracle_predict,
};
use qensemble::classifiers::{knn_scores, predict_encoded, rank_descending};
use qensemble::encoding::{build_cosine_state, build_distance_state, build_knn_state, registers, EncodedDataset};
use qensemble::ensembles::{boosting_fit, majority_vote, weighted_vote, BoostingConfig, BOOSTING_EPSILON};
use qensemble::harness::{
    run_experiment, shots_sweep, stats::binomial_std_error, EnsembleKind, ExperimentResult, ExperimentSpec, RunConfig,
};
use qensemble::simulator::{RegisterLayout, StateVector};
use qensemble::{ClassifierConfig, ClassifierKind, Label, Mode, NormalizationKind, Prediction};
use rand::Rng;

type Outcome = Result<String, String>;

fn within(budget: Duration, start: Instant, detail: String) -> Outcome {
    let elapsed = start.elapsed();
    if elapsed <= budget {
        Ok(format!("{detail}; {:.2}s (budget {}s)", elapsed.as_secs_f64(), budget.as_secs()))
    } else {
        Err(format!("{detail}; took {:.2}s, budget {}s", elapsed.as_secs_f64(), budget.as_secs()))
    }
}

// 1. Oracle equivalence: >= 1000 instances, N in {2,4,8}, D in {2,3,4},
//    labels 100% equal, decision values within 1e-9, k-NN orderings equal.
fn oracle_equivalence() -> Outcome {
    const TOLERANCE: f64 = 1e-9;
    let start = Instant::now();
    let mut r = common::rng(1);
    let (mut instances, mut label_mismatch, mut order_mismatch) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    for n in [2, 4, 8] {
        for d in [2, 3, 4] {
            for _ in 0..112 {
                let (train, x) = common::random_instance(&mut r, n, d);
                instances += 1;
                let cos = predict_encoded(&train, &x, &ClassifierConfig::cosine()).map_err(|e| e.to_string())?;
                let dist = predict_encoded(&train, &x, &ClassifierConfig::distance()).map_err(|e| e.to_string())?;
                let cos_o = oracle_predict(ClassifierKind::Cosine, &train, &x).map_err(|e| e.to_string())?;
                let dist_o = oracle_predict(ClassifierKind::Distance, &train, &x).map_err(|e| e.to_string())?;
                label_mismatch += usize::from(cos.label != cos_o.label) + usize::from(dist.label != dist_o.label);
                worst = worst
                    .max((cos.decision_value * cosine_scale(n) - cosine_decision(&train, &x)).abs())
                    .max((dist.decision_value * distance_scale(&train, &x) - distance_decision(&train, &x)).abs());
                let q = knn_scores(&train, &x, &ClassifierConfig::knn(1)).map_err(|e| e.to_string())?;
                order_mismatch += usize::from(rank_descending(&q) != rank_descending(&fidelities(&train, &x)));
            }
        }
    }
    let detail = format!(
        "{instances} instances, {label_mismatch} label mismatches, {order_mismatch} k-NN order mismatches, max scaled decision error {worst:.2e}"
    );
    if instances >= 1000 && label_mismatch == 0 && order_mismatch == 0 && worst < TOLERANCE {
        within(Duration::from_secs(120), start, detail)
    } else {
        Err(detail)
    }
}

// 2. SWAP-test law: 100 random pairs per dimension 2, 4, 8, 16;
//    |P(0) - (1/2 + |<psi|phi>|^2 / 2)| < 1e-10.
fn swap_test_law() -> Outcome {
    const TOLERANCE: f64 = 1e-10;
    let start = Instant::now();
    let mut r = common::rng(2);
    let mut worst: f64 = 0.0;
    let mut unit = |dim: usize| {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
            .collect();
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|a| a / n).collect::<Vec<_>>()
    };
    for q in 1..=4usize {
        let dim = 1 << q;
        for _ in 0..100 {
            let (a, b) = (unit(dim), unit(dim));
            let layout = RegisterLayout::contiguous([("ancilla", 1), ("a", q), ("b", q)]);
            let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (2 * q + 1)];
            for i in 0..dim {
                for j in 0..dim {
                    amps[(j << (q + 1)) | (i << 1)] = a[i] * b[j];
                }
            }
            let mut s = StateVector::from_amplitudes(layout.clone(), amps).map_err(|e| e.to_string())?;
            s.swap_test(0, layout.register("a"), layout.register("b")).map_err(|e| e.to_string())?;
            let overlap: Complex64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
            let p0 = s.probabilities(&[0]).map_err(|e| e.to_string())?.get(0);
            worst = worst.max((p0 - (0.5 + 0.5 * overlap.norm_sqr())).abs());
        }
    }
    let detail = format!("400 pairs, max |P(0) - law| = {worst:.2e}");
    if worst < TOLERANCE {
        within(Duration::from_secs(10), start, detail)
    } else {
        Err(detail)
    }
}

fn circuit(kind: usize, train: &EncodedDataset, x: &[f64]) -> (StateVector, Vec<usize>) {
    match kind {
        0 => {
            let mut s = build_cosine_state(train, x).unwrap();
            let l = s.layout().clone();
            let anc = l.register(registers::SWAP_ANCILLA)[0];
            s.swap_test(anc, l.register(registers::PLUS), l.register(registers::BRANCH)).unwrap();
            (s, vec![anc])
        }
        1 => {
            let mut s = build_distance_state(train, x).unwrap();
            let l = s.layout().clone();
            let anc = l.register(registers::ANCILLA)[0];
            s.apply_hadamard(anc).unwrap();
            (s, vec![anc, l.register(registers::LABEL)[0]])
        }
        _ => {
            let mut s = build_knn_state(train, x).unwrap();
            let l = s.layout().clone();
            let anc = l.register(registers::ANCILLA)[0];
            s.swap_test(anc, l.register(registers::TRAIN_FEATURE), l.register(registers::TEST_FEATURE)).unwrap();
            let mut m = vec![anc];
            m.extend_from_slice(l.register(registers::INDEX));
            (s, m)
        }
    }
}

// 3. Sampling convergence. (a) 8192 shots, 100 seeds: estimates within
//    4 Binomial standard errors in >= 99% of trials. (b) 262144 shots,
//    distance + minmax on iris_versicolor_virginica (120 runs): the
//    statevector accuracy lies inside the sampled 95% Binomial interval.
fn sampling_convergence() -> Outcome {
    const SHOTS: u64 = 8192;
    const SEEDS: u64 = 100;
    const K_SE: f64 = 4.0;
    const MIN_FRACTION: f64 = 0.99;
    let mut r = common::rng(3);
    let (mut trials, mut inside) = (0u64, 0u64);
    for kind in 0..3 {
        let (train, x) = common::random_instance(&mut r, 4, 4);
        let (state, measured) = circuit(kind, &train, &x);
        let exact = state.probabilities(&measured).map_err(|e| e.to_string())?;
        for seed in 0..SEEDS {
            let counts = state.sample_shots(&measured, SHOTS, seed).map_err(|e| e.to_string())?;
            for (outcome, &p) in exact.values.iter().enumerate() {
                trials += 1;
                let se = binomial_std_error(p, SHOTS);
                let err = (counts.frequency(outcome) - p).abs();
                inside += u64::from(if se == 0.0 { err == 0.0 } else { err <= K_SE * se });
            }
        }
    }
    let fraction = inside as f64 / trials as f64;

    let data = common::iris("versicolor_virginica");
    let spec = ExperimentSpec {
        runs: 120,
        seed: 0,
        timing: false,
        ..ExperimentSpec::new(vec![data], Vec::new())
    };
    let base = RunConfig::single(ClassifierKind::Distance, NormalizationKind::MinMax, Mode::Statevector);
    let points = shots_sweep(spec, &[base], &[262_144]).map_err(|e| e.to_string())?;
    let (exact_point, sampled) = (&points[0], &points[1]);
    let covered = exact_point.accuracy >= sampled.ci_low && exact_point.accuracy <= sampled.ci_high;
    let detail = format!(
        "(a) {inside}/{trials} = {fraction:.4} within {K_SE} SE (need >= {MIN_FRACTION}); (b) statevector {:.4}, 262144 shots {:.4} CI [{:.4}, {:.4}] over {} predictions",
        exact_point.accuracy, sampled.accuracy, sampled.ci_low, sampled.ci_high, sampled.total
    );
    if fraction >= MIN_FRACTION && covered {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 4. Toy circuits: x = [1,0,0,0] on four one-hot training vectors labelled
//    (-1,-1,+1,+1); every classifier outputs -1.
fn toy_circuits() -> Outcome {
    let start = Instant::now();
    let train = common::toy_train();
    let x = [1.0, 0.0, 0.0, 0.0];
    let run = |cfg: ClassifierConfig| predict_encoded(&train, &x, &cfg).map_err(|e| e.to_string());
    let cos = run(ClassifierConfig::cosine())?;
    let dist = run(ClassifierConfig::distance())?;
    let knn = run(ClassifierConfig::knn(3))?;
    let ranking = rank_descending(&knn_scores(&train, &x, &ClassifierConfig::knn(3)).map_err(|e| e.to_string())?);
    // hand values: Σ y cos = -1 over N = 4; distance weights (1, ½, ½, ½)
    let cos_ok = (cos.decision_value + 1.0 / (4.0 * SQRT_2)).abs() < 1e-12;
    let dist_ok = (dist.decision_value + 0.1).abs() < 1e-12;
    let all_negative = [cos.label, dist.label, knn.label].iter().all(|l| *l == Label::Negative);
    let detail = format!(
        "labels cosine {} distance {} 3NN {}; decisions {:.6} {:.6}; ranking {ranking:?}",
        cos.label, dist.label, knn.label, cos.decision_value, dist.decision_value
    );
    if all_negative && cos_ok && dist_ok && ranking == [0, 1, 2, 3] {
        within(Duration::from_secs(1), start, detail)
    } else {
        Err(detail)
    }
}

// 5. Ensemble exactness: vote rules under exhaustive enumeration up to
//    N = 7; AdaBoost weights sum to 1 within 1e-12 after every iteration.
fn ensemble_exactness() -> Outcome {
    const SIMPLEX_TOLERANCE: f64 = 1e-12;
    let start = Instant::now();
    let mut r = common::rng(5);
    let mut cases = 0;
    let mut wrong = 0;
    let sign = |s: f64| if s >= 0.0 { Label::Positive } else { Label::Negative };
    for m in 1..=7usize {
        let alphas: Vec<f64> = (0..m).map(|_| r.random_range(-1.0..2.0)).collect();
        for mask in 0..(1u32 << m) {
            let votes: Vec<f64> = (0..m).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
            let preds: Vec<Prediction> = votes.iter().map(|&v| Prediction::from_decision(v, 1.0)).collect();
            let plain = votes.iter().sum::<f64>();
            let weighted: f64 = votes.iter().zip(&alphas).map(|(v, a)| v * a).sum();
            wrong += usize::from(majority_vote(&preds).label != sign(plain));
            wrong += usize::from(weighted_vote(&alphas, &preds).label != sign(weighted));
            cases += 2;
        }
    }
    let mut worst: f64 = 0.0;
    let mut negative = 0;
    let mut iterations = 0;
    for pair in common::IRIS_PAIRS {
        let data = common::iris(pair);
        for base in [ClassifierConfig::cosine(), ClassifierConfig::distance(), ClassifierConfig::knn(3)] {
            let model = boosting_fit(
                &data,
                &BoostingConfig {
                    base,
                    n_internal: 30,
                    s_samples: 8,
                    balanced: false,
                    seed: 5,
                },
            )
            .map_err(|e| e.to_string())?;
            for w in model.weight_history() {
                iterations += 1;
                worst = worst.max((w.iter().sum::<f64>() - 1.0).abs());
                negative += w.iter().filter(|&&v| v < 0.0).count();
            }
            if model.alphas().iter().any(|a| !a.is_finite()) {
                return Err("non-finite classifier weight".into());
            }
        }
    }
    let detail = format!(
        "{wrong}/{cases} vote mismatches; {iterations} boosting iterations, max |Σw - 1| = {worst:.1e}, eps = {BOOSTING_EPSILON:e}"
    );
    if wrong == 0 && worst <= SIMPLEX_TOLERANCE && negative == 0 {
        within(Duration::from_secs(10), start, detail)
    } else {
        Err(detail)
    }
}

fn mean_accuracy<'a>(rs: impl Iterator<Item = &'a ExperimentResult>) -> f64 {
    let acc: Vec<f64> = rs.map(|r| r.accuracy.unwrap_or(0.0)).collect();
    acc.iter().sum::<f64>() / acc.len() as f64
}

// 6. Qualitative reproduction, statevector, 10-run MC-CV, N = 30, S = 8:
//    (a) boosting >= single - 0.02 (cosine and distance, `none`, mean over
//    the three iris sets); (b) stacking spread across normalizations < 0.05
//    per dataset.
fn qualitative_reproduction() -> Outcome {
    const BOOST_MARGIN: f64 = 0.02;
    const STACK_SPREAD: f64 = 0.05;
    let start = Instant::now();
    let datasets: Vec<_> = common::IRIS_PAIRS.iter().map(|p| common::iris(p)).collect();
    let mut configs = Vec::new();
    for kind in [ClassifierKind::Cosine, ClassifierKind::Distance] {
        for e in [EnsembleKind::None, EnsembleKind::Boosting] {
            configs.push(RunConfig::ensemble(e, kind, NormalizationKind::None, Mode::Statevector).with_sizes(30, 8));
        }
    }
    for n in NormalizationKind::ALL {
        configs.push(RunConfig::ensemble(EnsembleKind::Stacking, ClassifierKind::Cosine, n, Mode::Statevector));
    }
    let spec = ExperimentSpec {
        seed: 6,
        ..ExperimentSpec::new(datasets.clone(), configs)
    };
    let results = run_experiment(&spec).map_err(|e| e.to_string())?;
    if let Some(r) = results.iter().find(|r| r.error.is_some()) {
        return Err(format!("run failed: {:?}", r.error));
    }
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in ["cosine", "distance"] {
        let pick = |e: EnsembleKind| mean_accuracy(results.iter().filter(|r| r.classifier == kind && r.ensemble == e));
        let (single, boost) = (pick(EnsembleKind::None), pick(EnsembleKind::Boosting));
        ok &= boost >= single - BOOST_MARGIN;
        parts.push(format!("{kind}: single {single:.4} boosting {boost:.4}"));
    }
    for d in &datasets {
        let means: Vec<f64> = NormalizationKind::ALL
            .iter()
            .map(|&n| {
                mean_accuracy(
                    results
                        .iter()
                        .filter(|r| r.dataset == d.name && r.ensemble == EnsembleKind::Stacking && r.normalization == n),
                )
            })
            .collect();
        let spread = means.iter().cloned().fold(f64::MIN, f64::max) - means.iter().cloned().fold(f64::MAX, f64::min);
        ok &= spread < STACK_SPREAD;
        parts.push(format!("{} stacking spread {spread:.4}", d.name));
    }
    let detail = parts.join("; ");
    if ok {
        within(Duration::from_secs(30 * 60), start, detail)
    } else {
        Err(detail)
    }
}

fn benchmark_files(dir: &Path, tag: &str, threads: usize) -> Result<(Vec<u8>, Vec<u8>), String> {
    let out = dir.join(format!("{tag}.csv"));
    let status = Command::new(env!("CARGO_BIN_EXE_qensemble"))
        .args(["benchmark", "--seed", "7", "--no-timing", "--threads", &threads.to_string()])
        .arg("--dataset")
        .arg(common::datasets_dir())
        .arg("--out")
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(String::from_utf8_lossy(&status.stderr).into_owned());
    }
    let read = |p: &Path| std::fs::read(p).map_err(|e| e.to_string());
    Ok((read(&out)?, read(&dir.join(format!("{tag}_summary.csv")))?))
}

// 7. Determinism: `benchmark` with a fixed master seed gives byte-identical
//    files across two runs and across 1 and 8 threads.
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = benchmark_files(dir.path(), "a", 8)?;
    let b = benchmark_files(dir.path(), "b", 8)?;
    let c = benchmark_files(dir.path(), "c", 1)?;
    let rows = a.0.iter().filter(|&&b| b == b'\n').count() - 1;
    let detail = format!("{rows} result rows; rerun identical: {}; 1 vs 8 threads identical: {}", a == b, a == c);
    if a == b && a == c {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 swap-test law", swap_test_law),
        ("3 sampling convergence", sampling_convergence),
        ("4 toy circuits", toy_circuits),
        ("5 ensemble exactness", ensemble_exactness),
        ("6 qualitative reproduction", qualitative_reproduction),
        ("7 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
