//! Acceptance suite: every release gate runs here, one pass/fail line per
//! criterion (visible with `cargo test --test acceptance -- --nocapture`).
//! Tolerances and budgets are pinned in the assertions themselves.

use fir_cli::scenario::{Scenario, Task};
use fir_cli::run_scenario;
use fir_core::reduce::{ge_factor, mat_identity, replay_on_matrix, Op, TransformationLog};
use fir_core::scalar::Scalar;
use fir_core::words::{ball, Alphabet};
use fir_core::{Domain, RingElement, SpaceOracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

fn pass(criterion: &str, detail: String, elapsed: Duration, budget: Duration) {
    assert!(
        elapsed <= budget,
        "{criterion} exceeded its budget: {elapsed:?} > {budget:?}"
    );
    println!("criterion {criterion}: PASS ({detail}; {elapsed:?} <= {budget:?})");
}

fn scenario(task: Task) -> Scenario {
    Scenario::new(task)
}

/// Worked tree reduction over F2 and the rationals: diameter 3 contracts to
/// 1 and the certificate matches the hand trace.
#[test]
fn criterion_1_worked_reduction() {
    let t0 = Instant::now();
    for (domain, expected_result) in [("fp:2", "1+a"), ("q", "-1-a")] {
        let mut sc = scenario(Task::Reduce);
        sc.domain_spec = domain.into();
        sc.xi = "1+a, -1-a-b-ba".into();
        sc.alpha = "1+b, 1".into();
        let report = run_scenario(&sc);
        assert_eq!(report.exit_code, 0, "{domain}: {}", report.human);
        assert_eq!(report.json["diam_before"], "3");
        assert_eq!(report.json["diam_after"], "1");
        assert_eq!(report.json["result"], expected_result);
        assert_eq!(report.json["pivot_index"], 1);
        assert_eq!(report.json["beta"][0], "b");
        assert_eq!(report.json["kind"], "Component");
    }
    pass("1", "reduce 3 -> 1 over fp:2 and q".into(), t0.elapsed(), Duration::from_secs(1));
}

/// The two-generator ideal collapses to the free basis {1+a} with a log
/// whose replay regenerates the input generators.
#[test]
fn criterion_2_ideal_freeness() {
    let t0 = Instant::now();
    let mut sc = scenario(Task::IdealBasis);
    sc.gens = "1+a, 1+a+b+ba".into();
    let report = run_scenario(&sc);
    assert_eq!(report.exit_code, 0);
    assert_eq!(report.json["status"], "VERIFIED_FREE");
    assert_eq!(report.json["basis"].as_array().unwrap().len(), 1);
    assert_eq!(report.json["basis"][0], "1+a");

    // the inverse log carries the reduced tuple back onto the inputs
    let alphabet = Alphabet::new(2).unwrap();
    let log = TransformationLog::parse(report.json["log"].as_str().unwrap(), &alphabet, Domain::Rational).unwrap();
    let final_tuple: Vec<fir_core::RingVector> = report.json["final_tuple"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| fir_core::parse_vector(v.as_str().unwrap(), &alphabet, Domain::Rational).unwrap())
        .collect();
    let back = log.inverse(&Domain::Rational).unwrap().applied_to(&final_tuple).unwrap();
    let gens: Vec<fir_core::RingVector> = ["1+a", "1+a+b+ba"]
        .iter()
        .map(|s| fir_core::parse_vector(s, &alphabet, Domain::Rational).unwrap())
        .collect();
    assert_eq!(back, gens, "inverse replay must reproduce the input generators");
    pass("2", "basis {1+a}, replay round trip".into(), t0.elapsed(), Duration::from_secs(1));
}

/// Free generators stay apart: the search is exhausted honestly and the
/// process reports inconclusiveness, not freeness.
#[test]
fn criterion_3_independence_honesty() {
    let t0 = Instant::now();
    let mut sc = scenario(Task::IdealBasis);
    sc.gens = "1+a, 1+b".into();
    sc.rmax = 4;
    let report = run_scenario(&sc);
    assert_eq!(report.exit_code, 2, "bounded searches exit 2");
    assert_eq!(report.json["status"], "INDEPENDENT_UP_TO(4)");
    assert_eq!(report.json["basis"].as_array().unwrap().len(), 2);
    pass("3", "INDEPENDENT_UP_TO(4), exit 2".into(), t0.elapsed(), Duration::from_secs(10));
}

fn random_ge_case(domain: Domain, rng: &mut ChaCha8Rng) -> (usize, TransformationLog) {
    let alphabet = Alphabet::new(2).unwrap();
    let words = ball(&alphabet, 1);
    let n = rng.gen_range(2..=3usize);
    let k = rng.gen_range(1..=8usize);
    let mut ops = Vec::new();
    for _ in 0..k {
        match rng.gen_range(0..5u8) {
            0 => {
                let lambda = match domain {
                    Domain::Fp(p) => Scalar::Fp(rng.gen_range(1..p as u64)),
                    _ => unreachable!("acceptance runs over prime fields"),
                };
                let g = words[rng.gen_range(0..words.len())].clone();
                ops.push(Op::ScaleUnit { idx: rng.gen_range(0..n), lambda, g });
            }
            1 => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                if i != j {
                    ops.push(Op::Swap { i, j });
                }
            }
            _ => {
                let src = rng.gen_range(0..n);
                let mut dst = rng.gen_range(0..n);
                while dst == src {
                    dst = rng.gen_range(0..n);
                }
                let mut coeff = RingElement::zero(domain);
                for _ in 0..rng.gen_range(1..=2) {
                    let c = match domain {
                        Domain::Fp(p) => Scalar::Fp(rng.gen_range(1..p as u64)),
                        _ => unreachable!(),
                    };
                    let w = words[rng.gen_range(0..words.len())].clone();
                    coeff = coeff.add(&RingElement::term(domain, c, w)).unwrap();
                }
                if !coeff.is_zero() {
                    ops.push(Op::AddMul { src, dst, coeff });
                }
            }
        }
    }
    (n, TransformationLog { ops })
}

/// One hundred seeded invertible matrices built from elementary and diagonal
/// operations factor back into operations whose replayed product is exact.
#[test]
fn criterion_4_ge_factor_round_trip() {
    let t0 = Instant::now();
    let tree = SpaceOracle::tree(Alphabet::new(2).unwrap());
    let mut successes = 0u32;
    for case in 0..100u64 {
        let domain = if case % 2 == 0 { Domain::fp(2).unwrap() } else { Domain::fp(5).unwrap() };
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&42u64.to_le_bytes());
        seed[8..16].copy_from_slice(&case.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(seed);
        let (n, log) = random_ge_case(domain, &mut rng);
        let x = replay_on_matrix(&log, &mat_identity(domain, n)).unwrap();
        let a = replay_on_matrix(&log.inverse(&domain).unwrap(), &mat_identity(domain, n)).unwrap();
        let factored = ge_factor(&x, &a, &tree, false).unwrap();
        let replayed = replay_on_matrix(&factored, &mat_identity(domain, n)).unwrap();
        assert_eq!(replayed, x, "case {case}: replayed product must equal the input");
        successes += 1;
    }
    assert_eq!(successes, 100);
    pass("4", "100/100 factorizations replay exactly".into(), t0.elapsed(), Duration::from_secs(60));
}

/// The lemma audit is clean on the tree (1000 trials) and on the
/// shortcutted Cayley ball (200 trials).
#[test]
fn criterion_5_lemma_audit() {
    let t0 = Instant::now();
    let mut tree_sc = scenario(Task::AuditLemmas);
    tree_sc.trials = 1000;
    let tree_report = run_scenario(&tree_sc);
    assert_eq!(tree_report.exit_code, 0, "{}", tree_report.human);
    assert_eq!(tree_report.json["failures"], 0);

    let mut ball_sc = scenario(Task::AuditLemmas);
    ball_sc.oracle_kind = "cayley-ball".into();
    ball_sc.extra = vec!["ab".into()];
    ball_sc.radius = 6;
    ball_sc.trials = 200;
    let ball_report = run_scenario(&ball_sc);
    assert_eq!(ball_report.exit_code, 0, "{}", ball_report.human);
    assert_eq!(ball_report.json["failures"], 0);
    // the structural invariants really ran
    for key in [
        "center-gromov-product-bound",
        "radius-vs-diameter",
        "center-vs-midpoint",
        "center-distance-to-origin",
        "ball-intersection-diameter",
        "product-chain-inequality",
        "adjacent-center-distance",
        "path-center-distance",
        "component-relations",
        "reduction-step-contract",
    ] {
        for report in [&tree_report, &ball_report] {
            let checks = report.json["tallies"][key]["checks"].as_u64().unwrap_or(0);
            assert!(checks > 0, "invariant {key} never ran: {}", report.human);
        }
    }
    for key in ["embedded-path-bound", "component-diameter-bound", "free-action-on-finite-sets"] {
        let checks = tree_report.json["tallies"][key]["checks"].as_u64().unwrap_or(0);
        assert!(checks > 0, "invariant {key} never ran on the tree");
    }
    pass("5", "0 failures across 1000 tree + 200 ball trials".into(), t0.elapsed(), Duration::from_secs(120));
}

/// Products of random nonzero elements over F2 of rank-2 free group stay
/// nonzero: no zero divisors at desk scale.
#[test]
fn criterion_6_no_zero_divisors() {
    let t0 = Instant::now();
    let domain = Domain::fp(2).unwrap();
    let alphabet = Alphabet::new(2).unwrap();
    let words = ball(&alphabet, 4);
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&6u64.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(seed);
    let random_nonzero = |rng: &mut ChaCha8Rng| loop {
        let mut e = RingElement::zero(domain);
        for _ in 0..rng.gen_range(1..=8usize) {
            let w = words[rng.gen_range(0..words.len())].clone();
            e = e.add(&RingElement::term(domain, Scalar::Fp(1), w)).unwrap();
        }
        if !e.is_zero() {
            return e;
        }
    };
    for trial in 0..1000 {
        let x = random_nonzero(&mut rng);
        let y = random_nonzero(&mut rng);
        let prod = x.mul(&y).unwrap();
        assert!(!prod.is_zero(), "trial {trial}: ({x}) * ({y}) vanished");
    }
    pass("6", "1000/1000 products nonzero over fp:2".into(), t0.elapsed(), Duration::from_secs(60));
}

/// Descent refuses the classical non-free module with an exact torsion
/// certificate and returns verified bases on the positive controls.
#[test]
fn criterion_7_bass_descent_controls() {
    let t0 = Instant::now();
    // negative control in rank 1
    let mut neg = scenario(Task::BassDescent);
    neg.domain_spec = "z".into();
    neg.rank = 1;
    neg.gens = "2, -1+a".into();
    let report = run_scenario(&neg);
    assert_eq!(report.exit_code, 1);
    assert_eq!(report.json["error"], "star-failure");
    assert_eq!(report.json["p"], 2);
    assert_eq!(report.json["witness"], "2");

    // positive controls: the standard basis and a principal module
    let mut std_basis = scenario(Task::BassDescent);
    std_basis.domain_spec = "z".into();
    std_basis.gens = "(1; 0), (0; 1)".into();
    let report = run_scenario(&std_basis);
    assert_eq!(report.exit_code, 2, "two independent generators are bounded-search honest");
    assert_eq!(report.json["basis"].as_array().unwrap().len(), 2);
    assert_eq!(report.json["k_trace"][0], "1");

    let mut single = scenario(Task::BassDescent);
    single.domain_spec = "z".into();
    single.gens = "2+2*a".into();
    let report = run_scenario(&single);
    assert_eq!(report.exit_code, 0);
    assert_eq!(report.json["status"], "VERIFIED_FREE");
    assert_eq!(report.json["basis"][0], "2+2*a");

    // a genuine division step: <2ξ, 3ξ> descends to <ξ>
    let mut divide = scenario(Task::BassDescent);
    divide.domain_spec = "z".into();
    divide.gens = "2+2*a, 3+3*a".into();
    let report = run_scenario(&divide);
    assert_eq!(report.exit_code, 0);
    assert_eq!(report.json["basis"][0], "1+a");
    assert_eq!(report.json["k_trace"][0], "2");
    assert_eq!(report.json["k_trace"][1], "1");
    pass("7", "torsion certificate (p=2, witness 2) and verified positive bases".into(), t0.elapsed(), Duration::from_secs(10));
}

/// Identical scenarios and seeds produce byte-identical machine-readable
/// report sections.
#[test]
fn criterion_8_determinism() {
    let t0 = Instant::now();
    let mut scenarios: Vec<Scenario> = Vec::new();

    let mut sc = scenario(Task::Reduce);
    sc.domain_spec = "fp:2".into();
    sc.xi = "1+a, -1-a-b-ba".into();
    sc.alpha = "1+b, 1".into();
    scenarios.push(sc);

    let mut sc = scenario(Task::IdealBasis);
    sc.gens = "1+a, 1+a+b+ba".into();
    scenarios.push(sc);

    let mut sc = scenario(Task::IdealBasis);
    sc.gens = "1+a, 1+b".into();
    sc.rmax = 4;
    scenarios.push(sc);

    let mut sc = scenario(Task::GeFactor);
    sc.domain_spec = "fp:5".into();
    sc.matrix_x = "(1; 0), (1+a; 1)".into();
    sc.matrix_a = "(1; 0), (-1-a; 1)".into();
    scenarios.push(sc);

    let mut sc = scenario(Task::AuditLemmas);
    sc.trials = 1000;
    scenarios.push(sc);

    let mut sc = scenario(Task::AuditLemmas);
    sc.oracle_kind = "cayley-ball".into();
    sc.extra = vec!["ab".into()];
    sc.radius = 6;
    sc.trials = 200;
    scenarios.push(sc);

    let mut sc = scenario(Task::BassDescent);
    sc.domain_spec = "z".into();
    sc.rank = 1;
    sc.gens = "2, -1+a".into();
    scenarios.push(sc);

    let mut sc = scenario(Task::BassDescent);
    sc.domain_spec = "z".into();
    sc.gens = "2+2*a, 3+3*a".into();
    scenarios.push(sc);

    for sc in &scenarios {
        let first = run_scenario(sc).json_section();
        let second = run_scenario(sc).json_section();
        assert_eq!(first, second, "scenario {} reran differently", sc.task.name());
    }
    pass(
        "8",
        format!("{} scenarios byte-identical on rerun", scenarios.len()),
        t0.elapsed(),
        Duration::from_secs(300),
    );
}
