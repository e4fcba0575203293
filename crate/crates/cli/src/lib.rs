//! Library half of the command-line front end: scenario execution and
//! report assembly, kept callable so integration tests drive the exact
//! code path the binary runs.
//!
//! A report has a human-readable section and a machine-readable JSON
//! section separated by a `---json---` line. The JSON section is
//! deterministic for a fixed scenario and seed (timings stay on the human
//! side), and the process exit code is 0 for success, 1 for errors, and 2
//! for honest inconclusiveness (bounded searches that neither proved nor
//! refuted).

pub mod scenario;

use fir_core::audit::{audit_lemmas, AuditOptions};
use fir_core::bass::{bass_descent, check_star, StarVerdict, ZModuleSpec};
use fir_core::reduce::{
    ge_factor, ideal_basis, mat_identity, reduce_step, replay_on_matrix, submodule_basis,
    BasisOutcome, BasisStatus, Matrix, ReductionConstants, TransformationLog,
};
use fir_core::ring::{parse_element, parse_vector};
use fir_core::space::{check_hypothesis, min_displacement, SpaceOracle};
use fir_core::{Error, RingElement, RingVector};
use scenario::{split_top_level, Scenario, Task};
use serde_json::{json, Value};

pub struct Report {
    pub human: String,
    pub json: Value,
    pub exit_code: i32,
}

impl Report {
    pub fn render(&self) -> String {
        format!(
            "{}\n---json---\n{}\n",
            self.human.trim_end(),
            serde_json::to_string_pretty(&self.json).unwrap()
        )
    }

    /// The machine-readable section alone (for byte-identity checks).
    pub fn json_section(&self) -> String {
        serde_json::to_string_pretty(&self.json).unwrap()
    }
}

pub fn run_scenario(sc: &Scenario) -> Report {
    let started = std::time::Instant::now();
    let mut report = match dispatch(sc) {
        Ok(r) => r,
        Err(e) => error_report(sc, &e),
    };
    report.human.push_str(&format!("\nelapsed: {:?}", started.elapsed()));
    report
}

fn error_report(sc: &Scenario, e: &Error) -> Report {
    let json = json!({
        "task": sc.task.name(),
        "error": e.to_string(),
        "exit_code": 1,
    });
    Report { human: format!("{} failed: {e}", sc.task.name()), json, exit_code: 1 }
}

fn dispatch(sc: &Scenario) -> Result<Report, Error> {
    match sc.task {
        Task::Reduce => run_reduce(sc),
        Task::IdealBasis => run_ideal_basis(sc),
        Task::SubmoduleBasis => run_submodule_basis(sc),
        Task::GeFactor => run_ge_factor(sc),
        Task::BassDescent => run_bass(sc),
        Task::CheckHypothesis => run_check_hypothesis(sc),
        Task::Delta => run_delta(sc),
        Task::Displacement => run_displacement(sc),
        Task::AuditLemmas => run_audit(sc),
        Task::Replay => run_replay(sc),
    }
}

fn parse_vectors(text: &str, sc: &Scenario) -> Result<Vec<RingVector>, Error> {
    let alphabet = sc.alphabet()?;
    let domain = sc.domain()?;
    split_top_level(text)
        .iter()
        .map(|s| parse_vector(s, &alphabet, domain))
        .collect()
}

fn parse_elements(text: &str, sc: &Scenario) -> Result<Vec<RingElement>, Error> {
    let alphabet = sc.alphabet()?;
    let domain = sc.domain()?;
    split_top_level(text)
        .iter()
        .map(|s| parse_element(s, &alphabet, domain))
        .collect()
}

fn parse_matrix(text: &str, sc: &Scenario) -> Result<Matrix, Error> {
    let rows = parse_vectors(text, sc)?;
    if rows.is_empty() {
        return Err(Error::Empty("matrix with no rows".into()));
    }
    Ok(rows.into_iter().map(|r| r.coords().to_vec()).collect())
}

fn scenario_header(sc: &Scenario) -> Value {
    json!({
        "task": sc.task.name(),
        "oracle": sc.oracle_kind,
        "rank": sc.rank,
        "extra": sc.extra,
        "radius": if sc.oracle_kind == "cayley-ball" { Some(sc.radius) } else { None },
        "domain": sc.domain_spec,
        "seed": sc.seed,
        "rmax": sc.rmax,
        "unsafe": sc.unsafe_mode,
    })
}

fn basis_json(out: &BasisOutcome) -> Value {
    json!({
        "basis": out.basis.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "final_tuple": out.final_tuple.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "status": out.status.to_string(),
        "log": out.log.to_string(),
    })
}

fn basis_exit(status: BasisStatus) -> i32 {
    match status {
        BasisStatus::VerifiedFree => 0,
        BasisStatus::IndependentUpTo(_) => 2,
    }
}

fn run_reduce(sc: &Scenario) -> Result<Report, Error> {
    let oracle = sc.oracle()?;
    let xs = parse_vectors(&sc.xi, sc)?;
    let alphas = parse_elements(&sc.alpha, sc)?;
    if xs.len() != alphas.len() {
        return Err(Error::Precondition("xi and alpha counts differ".into()));
    }
    let constants = ReductionConstants::for_tuple(&oracle, &xs)?;
    let step = reduce_step(&xs, &alphas, &oracle, &constants, sc.unsafe_mode)?;
    let human = format!(
        "reduce: replaced coordinate {} by a same-module combination over {} member(s)\n\
         result: {}\ndiameter: {} -> {}\nbeta: [{}]",
        step.pivot_index + 1,
        step.s_set.len() + 1,
        step.result,
        step.diam_before,
        step.diam_after,
        step.beta.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", "),
    );
    let json = json!({
        "scenario": scenario_header(sc),
        "kind": format!("{:?}", step.kind),
        "v_star": step.v_star,
        "s_set": step.s_set,
        "pivot_index": step.pivot_index,
        "pivot_unit": format!("{}*{}", step.pivot_unit.0, step.pivot_unit.1),
        "beta": step.beta.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "result": step.result.to_string(),
        "diam_before": step.diam_before.to_string(),
        "diam_after": step.diam_after.to_string(),
        "family": step.family_members.iter().map(|(e, c)| json!({"element": e, "color": c})).collect::<Vec<_>>(),
        "diagnostics": step.diagnostics,
        "exit_code": 0,
    });
    Ok(Report { human, json, exit_code: 0 })
}

fn run_ideal_basis(sc: &Scenario) -> Result<Report, Error> {
    let oracle = sc.oracle()?;
    let gens: Vec<RingElement> = parse_elements(&sc.gens, sc)?;
    let out = ideal_basis(&gens, &oracle, sc.rmax, sc.unsafe_mode)?;
    let exit_code = basis_exit(out.status);
    let human = format!(
        "ideal-basis: {} generator(s) -> basis of size {} [{}]\nbasis: [{}]\nlog:\n{}",
        gens.len(),
        out.basis.len(),
        out.status,
        out.basis.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", "),
        out.log,
    );
    let mut json = basis_json(&out);
    json["scenario"] = scenario_header(sc);
    json["exit_code"] = json!(exit_code);
    Ok(Report { human, json, exit_code })
}

fn run_submodule_basis(sc: &Scenario) -> Result<Report, Error> {
    let oracle = sc.oracle()?;
    let gens = parse_vectors(&sc.gens, sc)?;
    let out = submodule_basis(&gens, &oracle, sc.rmax, sc.unsafe_mode)?;
    let exit_code = basis_exit(out.status);
    let human = format!(
        "submodule-basis: {} generator(s) -> basis of size {} [{}]\nbasis: [{}]\nlog:\n{}",
        gens.len(),
        out.basis.len(),
        out.status,
        out.basis.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", "),
        out.log,
    );
    let mut json = basis_json(&out);
    json["scenario"] = scenario_header(sc);
    json["exit_code"] = json!(exit_code);
    Ok(Report { human, json, exit_code })
}

fn run_ge_factor(sc: &Scenario) -> Result<Report, Error> {
    let oracle = sc.oracle()?;
    let x = parse_matrix(&sc.matrix_x, sc)?;
    let a = parse_matrix(&sc.matrix_a, sc)?;
    let log = ge_factor(&x, &a, &oracle, sc.unsafe_mode)?;
    let replayed = replay_on_matrix(&log, &mat_identity(sc.domain()?, x.len()))?;
    if replayed != x {
        return Err(Error::Internal("replayed factorization does not reproduce the input".into()));
    }
    let human = format!(
        "ge-factor: {}x{} matrix factored into {} elementary/diagonal operation(s); replay verified\nlog:\n{}",
        x.len(),
        x.len(),
        log.ops.len(),
        log,
    );
    let json = json!({
        "scenario": scenario_header(sc),
        "operations": log.ops.len(),
        "log": log.to_string(),
        "replay_verified": true,
        "exit_code": 0,
    });
    Ok(Report { human, json, exit_code: 0 })
}

fn run_bass(sc: &Scenario) -> Result<Report, Error> {
    if sc.domain_spec != "z" {
        return Err(Error::Precondition("bass-descent runs over the integers (--domain z)".into()));
    }
    let oracle = sc.oracle()?;
    let gens = parse_vectors(&sc.gens, sc)?;
    let spec = ZModuleSpec::new(gens)?;
    // surface the torsion verdicts beside the descent itself
    let star = check_star(&spec, &sc.primes, sc.rmax)?;
    let star_json: Vec<Value> = star
        .iter()
        .map(|v| match v {
            StarVerdict::PassUpTo { p, radius, unresolved } => {
                json!({"p": p, "verdict": format!("PASS_UP_TO({radius})"), "unresolved": unresolved})
            }
            StarVerdict::Fail { p, witness, witness_coeffs } => json!({
                "p": p,
                "verdict": "FAIL",
                "witness": witness.to_string(),
                "witness_coeffs": witness_coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            }),
        })
        .collect();
    match bass_descent(&spec, &oracle, sc.rmax) {
        Ok(out) => {
            let exit_code = basis_exit(out.status);
            let human = format!(
                "bass-descent: basis of size {} [{}], k trace {:?}\nbasis: [{}]\nnotes: {:?}",
                out.basis.len(),
                out.status,
                out.k_trace.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
                out.basis.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", "),
                out.notes,
            );
            let json = json!({
                "scenario": scenario_header(sc),
                "basis": out.basis.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "status": out.status.to_string(),
                "k_trace": out.k_trace.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
                "generators_over_basis": out.generators_over_basis.iter()
                    .map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "basis_over_generators": out.basis_over_generators.iter()
                    .map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "torsion_checks": star_json,
                "notes": out.notes,
                "exit_code": exit_code,
            });
            Ok(Report { human, json, exit_code })
        }
        Err(Error::StarFailure { p, witness }) => {
            let human = format!(
                "bass-descent: not free — torsion certificate at p={p}: witness {witness} \
                 lies in the module with all coefficients divisible by {p} but is not {p} times a member"
            );
            let json = json!({
                "scenario": scenario_header(sc),
                "error": "star-failure",
                "p": p,
                "witness": witness,
                "torsion_checks": star_json,
                "exit_code": 1,
            });
            Ok(Report { human, json, exit_code: 1 })
        }
        Err(e) => Err(e),
    }
}

fn run_check_hypothesis(sc: &Scenario) -> Result<Report, Error> {
    let oracle = sc.oracle()?;
    let report = check_hypothesis(&oracle, sc.n, Some(sc.gball))?;
    let human = format!(
        "check-hypothesis: n={} delta={} displacement bound={} threshold=(2n+11)^2*delta={} -> {}{}",
        report.n,
        report.delta,
        report.displacement_lower_bound,
        report.threshold,
        if report.satisfied { "satisfied" } else { "NOT satisfied" },
        if report.caveats.is_empty() { String::new() } else { format!("\ncaveat: {}", report.caveats) },
    );
    let json = json!({
        "scenario": scenario_header(sc),
        "n": report.n,
        "delta": report.delta.to_string(),
        "displacement_lower_bound": report.displacement_lower_bound.to_string(),
        "threshold": report.threshold.to_string(),
        "satisfied": report.satisfied,
        "caveats": report.caveats,
        "exit_code": 0,
    });
    Ok(Report { human, json, exit_code: 0 })
}

fn run_delta(sc: &Scenario) -> Result<Report, Error> {
    let oracle = sc.oracle()?;
    let mut human = format!("delta: {}", oracle.delta());
    let mut json = json!({
        "scenario": scenario_header(sc),
        "delta": oracle.delta().to_string(),
        "exit_code": 0,
    });
    if let SpaceOracle::Ball(b) = &oracle {
        human.push_str(&format!(
            "\nvertices: {} (certified within distance {}); delta scanned over {} grid points",
            b.vertex_count(),
            b.certified_radius(),
            b.delta_scan_points(),
        ));
        json["vertices"] = json!(b.vertex_count());
        json["certified_radius"] = json!(b.certified_radius());
        json["delta_scan_points"] = json!(b.delta_scan_points());
        if sc.emit_edges {
            json["edge_list"] = json!(oracle.to_edge_list()?);
        }
    }
    Ok(Report { human, json, exit_code: 0 })
}

fn run_displacement(sc: &Scenario) -> Result<Report, Error> {
    let oracle = sc.oracle()?;
    let d = min_displacement(&oracle, sc.gball)?;
    let human = format!(
        "displacement: {} (witness g={}, p={}){}",
        d.value,
        d.witness_g,
        d.witness_p,
        if d.exact { " [exact]" } else { " [upper bound on the infimum]" },
    );
    let json = json!({
        "scenario": scenario_header(sc),
        "value": d.value.to_string(),
        "witness_g": d.witness_g.to_string(),
        "witness_p": d.witness_p.to_string(),
        "exact": d.exact,
        "exit_code": 0,
    });
    Ok(Report { human, json, exit_code: 0 })
}

fn run_audit(sc: &Scenario) -> Result<Report, Error> {
    let oracle = sc.oracle()?;
    let opts = AuditOptions {
        trials: sc.trials,
        seed: sc.seed,
        domain: sc.domain()?,
        unsafe_mode: sc.unsafe_mode,
    };
    let report = audit_lemmas(&oracle, &opts)?;
    let exit_code = if report.ok() { 0 } else { 1 };
    let mut human = format!(
        "audit-lemmas: {} trial(s), seed {} -> {} failure(s)\n",
        report.trials,
        report.seed,
        report.failure_count(),
    );
    for (name, tally) in &report.tallies {
        human.push_str(&format!(
            "  {name}: {} checks, {} failures, {} skipped\n",
            tally.checks, tally.failures, tally.skipped
        ));
        for ex in &tally.examples {
            human.push_str(&format!("    counterexample: {ex}\n"));
        }
    }
    let tallies: serde_json::Map<String, Value> = report
        .tallies
        .iter()
        .map(|(name, t)| {
            (
                name.clone(),
                json!({"checks": t.checks, "failures": t.failures, "skipped": t.skipped, "examples": t.examples}),
            )
        })
        .collect();
    let json = json!({
        "scenario": scenario_header(sc),
        "trials": report.trials,
        "audit_seed": report.seed,
        "ok": report.ok(),
        "failures": report.failure_count(),
        "tallies": tallies,
        "notes": report.notes,
        "exit_code": exit_code,
    });
    Ok(Report { human, json, exit_code })
}

fn run_replay(sc: &Scenario) -> Result<Report, Error> {
    let alphabet = sc.alphabet()?;
    let domain = sc.domain()?;
    let log = TransformationLog::parse(&sc.log_text, &alphabet, domain)?;
    let tuple: Vec<RingVector> = if sc.identity > 0 {
        (0..sc.identity)
            .map(|i| {
                let coords: Vec<RingElement> = (0..sc.identity)
                    .map(|j| {
                        if i == j {
                            RingElement::one(domain)
                        } else {
                            RingElement::zero(domain)
                        }
                    })
                    .collect();
                RingVector::new(coords)
            })
            .collect::<Result<_, _>>()?
    } else {
        parse_vectors(&sc.input, sc)?
    };
    let out = log.applied_to(&tuple)?;
    let rendered: Vec<String> = out.iter().map(|v| v.to_string()).collect();
    let human = format!("replay: {} op(s) applied\nresult: [{}]", log.ops.len(), rendered.join(", "));
    let json = json!({
        "scenario": scenario_header(sc),
        "operations": log.ops.len(),
        "result": rendered,
        "exit_code": 0,
    });
    Ok(Report { human, json, exit_code: 0 })
}
