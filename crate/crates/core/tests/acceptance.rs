//! Acceptance criteria, one PASS/FAIL line each. Set `RANKMETRIC_LONG=1` to
//! add the t = 4 full-rank simulation.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rankmetric::bounds::{
    du_bound, identity_checks, pe_rank_specific, pe_universal_log_q, sigma_q, BoundParams, IdentityRanges,
};
use rankmetric::oracle::{decodable_census, ExhaustiveCodebook};
use rankmetric::rank_metric::{all_vectors, rank_norm, sample_rank_u, vector_from_index, vector_index};
use rankmetric::sim::{self, run_plan, run_plan_with_workers, sweep, write_sweep_csv, TrialPlan, TrialTally};
use rankmetric::verify::{els_suite, mrd_suite, Check};
use rankmetric::{DecodeOutcome, FieldElement, GabidulinCode, RankVector};

const TINY: [(u32, usize, usize, usize); 3] = [(2, 3, 3, 1), (2, 4, 4, 2), (2, 3, 2, 1)];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.1?}, limit {limit:?}"))
}

fn codewords(code: &GabidulinCode) -> Vec<RankVector> {
    let f = code.field();
    (0..f.order().pow(code.k() as u32))
        .map(|i| code.encode(&vector_from_index(f, code.k(), i)).unwrap())
        .collect()
}

/// N_u and D_u from the union of radius-t balls, built by adding every
/// error of rank at most t to every codeword.
fn ball_cover_counts(code: &GabidulinCode) -> (Vec<u64>, Vec<u64>) {
    let f = code.field();
    let n = code.n();
    let small: Vec<RankVector> = all_vectors(f, n, 1 << 20)
        .unwrap()
        .filter(|e| rank_norm(f, e) <= code.t())
        .collect();
    let mut covered = HashSet::new();
    for c in codewords(code) {
        for e in &small {
            covered.insert(vector_index(f, &c.add(f, e).unwrap()));
        }
    }
    let top = n.min(f.m());
    let (mut n_u, mut d_u) = (vec![0u64; top + 1], vec![0u64; top + 1]);
    for y in all_vectors(f, n, 1 << 20).unwrap() {
        let u = rank_norm(f, &y);
        n_u[u] += 1;
        if covered.contains(&vector_index(f, &y)) {
            d_u[u] += 1;
        }
    }
    (n_u, d_u)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rows = 0;
    for (q, m, n, k) in TINY {
        let code = GabidulinCode::new(q, m, n, k).unwrap();
        let (n_u, d_u) = ball_cover_counts(&code);
        let census = decodable_census(&ExhaustiveCodebook::new(code.clone()).unwrap()).unwrap();
        ensure(census.disagreements == 0, || {
            format!("({q},{m},{n},{k}): {} decoder/geometry disagreements", census.disagreements)
        })?;
        ensure(census.rows.len() == n_u.len(), || format!("({q},{m},{n},{k}): row count"))?;
        for r in &census.rows {
            ensure(r.n_u == n_u[r.u] && r.d_u == d_u[r.u], || {
                format!("({q},{m},{n},{k}) u={}: census {}/{} vs oracle {}/{}", r.u, r.d_u, r.n_u, d_u[r.u], n_u[r.u])
            })?;
            if r.u > code.t() {
                let exact = BigRational::new(d_u[r.u].into(), n_u[r.u].into());
                ensure(r.pe_exact.as_ref() == Some(&exact), || format!("({q},{m},{n},{k}) u={}: P_E", r.u))?;
            }
            rows += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("{rows} census rows agree, {:.1?}", start.elapsed()))
}

fn failed(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{}: {}", c.name, c.violations.join("; ")))
        .collect()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut compared = 0;
    for (q, m, n, k) in TINY {
        let code = GabidulinCode::new(q, m, n, k).unwrap();
        let p = BoundParams::new(q, m, n, k).unwrap();
        let (t, d) = (p.t(), p.d());
        let (n_u, d_u) = ball_cover_counts(&code);
        for u in t + 1..n_u.len() {
            let tag = format!("({q},{m},{n},{k}) u={u}");
            if u + t < d {
                ensure(d_u[u] == 0, || format!("{tag}: D_u = {} in the zero region", d_u[u]))?;
                continue;
            }
            let bound = du_bound(&p, u).map_err(|e| format!("{tag}: {e}"))?;
            ensure(BigUint::from(d_u[u]) <= *bound.tightest(), || {
                format!("{tag}: D_u = {} above {}", d_u[u], bound.tightest())
            })?;
            let exact = BigRational::new(d_u[u].into(), n_u[u].into());
            let spec: BigRational = pe_rank_specific(&p, u);
            ensure(exact <= spec, || format!("{tag}: P_E = {exact} above rank-specific bound {spec}"))?;
            let universal = (q as f64).powf(pe_universal_log_q(q, t));
            let spec_f = spec.to_f64().unwrap();
            ensure(spec_f <= universal * (1.0 + 1e-12), || {
                format!("{tag}: rank-specific {spec_f} above universal {universal}")
            })?;
            compared += 1;
        }
        let census = decodable_census(&ExhaustiveCodebook::new(code).unwrap()).unwrap();
        let v = census.chain_violations();
        ensure(v.is_empty(), || format!("({q},{m},{n},{k}): {}", v.join("; ")))?;
    }
    let lemmas: Vec<Check> = mrd_suite()
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|c| c.name == "rank-distribution-bound" || c.name == "completion-count-bound")
        .collect();
    ensure(lemmas.len() == 2, || "missing lemma checks".into())?;
    let bad = failed(&lemmas);
    ensure(bad.is_empty(), || bad.join(" | "))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{compared} (instance, u) chains hold, {:.1?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut checks = els_suite(&[2, 3], 4, 4).map_err(|e| e.to_string())?;
    checks.extend(mrd_suite().map_err(|e| e.to_string())?);
    let bad = failed(&checks);
    ensure(bad.is_empty(), || bad.join(" | "))?;
    within(start.elapsed(), Duration::from_secs(120))?;
    let instances: usize = checks.iter().map(|c| c.instances).sum();
    Ok(format!("{} checks, {instances} instances, {:.1?}", checks.len(), start.elapsed()))
}

fn criterion_4() -> Outcome {
    let ranges = IdentityRanges::default();
    ensure(ranges.vandermonde_max >= 6 && ranges.max_m >= 16, || "sweep too small".into())?;
    let checks = identity_checks(&ranges);
    ensure(checks.len() == 4, || format!("{} identity families", checks.len()))?;
    for c in &checks {
        ensure(c.instances > 0 && c.violations.is_empty(), || {
            format!("{}: {} instances, {}", c.name, c.instances, c.violations.join("; "))
        })?;
    }
    Ok(checks.iter().map(|c| format!("{} x{}", c.name, c.instances)).collect::<Vec<_>>().join(", "))
}

fn criterion_5() -> Outcome {
    let sigma: f64 = sigma_q(2);
    // direct partial sum of -log2(1 - 2^-i)
    let direct: f64 = (1..200).map(|i| -(1.0 - 0.5f64.powi(i)).log2()).sum();
    ensure((sigma - direct).abs() < 1e-9, || format!("sigma {sigma} vs direct sum {direct}"))?;
    ensure((sigma - 1.7919).abs() <= 5e-4, || format!("sigma(2) = {sigma}"))?;
    Ok(format!("sigma(2) = {sigma:.8}"))
}

fn exhaustive_decoding(q: u32, m: usize, n: usize, k: usize) -> Result<usize, String> {
    let code = GabidulinCode::new(q, m, n, k).unwrap();
    let f = code.field();
    let errors: Vec<RankVector> = all_vectors(f, n, 1 << 20)
        .unwrap()
        .filter(|e| rank_norm(f, e) <= code.t())
        .collect();
    let mut pairs = 0;
    for c in codewords(&code) {
        for e in &errors {
            let y = c.add(f, e).unwrap();
            match code.decode(&y).map_err(|x| x.to_string())? {
                DecodeOutcome::Decoded { codeword, .. } if codeword == c => pairs += 1,
                other => return Err(format!("({q},{m},{n},{k}) c={c:?} e={e:?}: {other:?}")),
            }
        }
    }
    Ok(pairs)
}

fn random_decoding(k: usize, trials: usize, seed: u64) -> Result<(), String> {
    let code = GabidulinCode::new(2, 16, 16, k).unwrap();
    let f = code.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0;
    for _ in 0..trials {
        let msg: Vec<FieldElement> = (0..k).map(|_| f.random(&mut rng)).collect();
        let c = code.encode(&msg).unwrap();
        let e = sample_rank_u(f, 16, code.t(), &mut rng).unwrap();
        if code.decode(&c.add(f, &e).unwrap()).unwrap().codeword() == Some(&c) {
            ok += 1;
        }
    }
    ensure(ok == trials, || format!("(2,16,16,{k}): {ok}/{trials} recovered"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let a = exhaustive_decoding(2, 4, 4, 2)?;
    let b = exhaustive_decoding(2, 3, 3, 1)?;
    random_decoding(12, 10_000, 612)?;
    random_decoding(10, 10_000, 610)?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{a} + {b} exhaustive pairs, 2 x 10^4 random, {:.1?}", start.elapsed()))
}

fn full_rank_run(t: usize, seed: u64) -> Result<(TrialTally, f64), String> {
    let plan = TrialPlan::for_capability(2, 16, t, 16, seed, t as u64);
    let tally = run_plan(&plan).map_err(|e| e.to_string())?;
    let bound = 2f64.powf(pe_universal_log_q(2, t));
    let (_, hi) = tally.wilson_interval();
    ensure(tally.decoder_errors >= 15, || format!("t={t}: only {} decoder errors", tally.decoder_errors))?;
    ensure(hi < bound, || format!("t={t}: upper limit {hi} not below {bound}"))?;
    Ok((tally, hi))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let (t2, _) = full_rank_run(2, 7)?;
    let (t3, _) = full_rank_run(3, 7)?;
    let drop = t2.pe_hat().unwrap().log2() - t3.pe_hat().unwrap().log2();
    ensure(drop > 3.0, || format!("log2 PE_hat drops by {drop:.2}"))?;
    let mut msg = format!(
        "PE_hat t=2 {:.3e}, t=3 {:.3e}, log2 drop {drop:.2}",
        t2.pe_hat().unwrap(),
        t3.pe_hat().unwrap()
    );
    if std::env::var_os("RANKMETRIC_LONG").is_some() {
        let (t4, _) = full_rank_run(4, 7)?;
        msg.push_str(&format!(", t=4 {:.3e}", t4.pe_hat().unwrap()));
    }
    msg.push_str(&format!(", {:.1?}", start.elapsed()));
    Ok(msg)
}

fn criterion_8() -> Outcome {
    let bound = 2f64.powf(pe_universal_log_q(2, 2));
    let plans: Vec<TrialPlan> = sim::preset_fig2(8)
        .into_iter()
        .filter(|p| p.t() == 2 && p.u >= 5)
        .collect();
    ensure(plans.len() == 12, || format!("{} plans", plans.len()))?;
    let mut worst: f64 = 0.0;
    for row in sweep(&plans, None) {
        let tally = row.result.map_err(|e| e.to_string())?;
        let (_, hi) = tally.wilson_interval();
        ensure(hi < bound, || format!("u={}: upper limit {hi} not below {bound}", row.plan.u))?;
        worst = worst.max(hi);
    }
    // d = 6 keeps u = 3 strictly between t and d - t
    let mut gap = TrialPlan::for_capability(2, 16, 2, 3, 8, 99);
    gap.k = 11;
    gap.max_trials = 20_000;
    let tally = run_plan(&gap).map_err(|e| e.to_string())?;
    ensure(tally.pe_hat() == Some(0.0), || format!("gap row PE_hat = {:?}", tally.pe_hat()))?;
    Ok(format!("max upper limit {worst:.3e} < {bound:.3e}; gap row 0/{}", tally.trials))
}

fn criterion_9() -> Outcome {
    let mut plans = sim::preset_fig1(9);
    plans.push(TrialPlan::for_capability(2, 8, 1, 5, 9, 3));
    let mut outputs = Vec::new();
    for w in [1, 2, 7] {
        let mut buf = Vec::new();
        write_sweep_csv(&sweep(&plans, Some(w)), &mut buf).map_err(|e| e.to_string())?;
        outputs.push(buf);
    }
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || "CSV differs across worker counts".into())?;
    let again = run_plan_with_workers(&plans[1], 3).map_err(|e| e.to_string())?;
    let once = run_plan_with_workers(&plans[1], 1).map_err(|e| e.to_string())?;
    ensure(again == once, || "repeated run differs".into())?;
    Ok(format!("{} byte-identical CSVs", outputs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", criterion_1),
        ("bound chain", criterion_2),
        ("subspace and MRD lemma suites", criterion_3),
        ("in-proof identities", criterion_4),
        ("sigma(2)", criterion_5),
        ("decoder correctness", criterion_6),
        ("full-rank error probability versus t", criterion_7),
        ("error probability versus u", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                all = false;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
