use rankmetric::rank_metric::{all_vectors, rank_distance, rank_norm, vector_from_index};
use rankmetric::sim::{homogeneity_chi_square, run_plan, run_plan_with_workers, TrialPlan};
use rankmetric::GabidulinCode;

/// Fraction of rank-u words within distance t of a nonzero codeword, by
/// brute force over the whole space.
fn exact_pe(q: u32, m: usize, n: usize, k: usize, u: usize) -> f64 {
    let code = GabidulinCode::new(q, m, n, k).unwrap();
    let f = code.field();
    let words: Vec<_> = (1..f.order().pow(k as u32))
        .map(|i| code.encode(&vector_from_index(f, k, i)).unwrap())
        .collect();
    let (mut hit, mut total) = (0u64, 0u64);
    for y in all_vectors(f, n, 1 << 20).unwrap().filter(|y| rank_norm(f, y) == u) {
        total += 1;
        if words.iter().any(|c| rank_distance(f, c, &y).unwrap() <= code.t()) {
            hit += 1;
        }
    }
    hit as f64 / total as f64
}

fn plan(q: u32, m: usize, n: usize, k: usize, u: usize, seed: u64) -> TrialPlan {
    let mut p = TrialPlan::for_capability(q, n, 0, u, seed, 0);
    p.m = m;
    p.k = k;
    p
}

#[test]
fn estimate_matches_exact_probability() {
    let exact = exact_pe(2, 3, 3, 1, 3);
    assert!((exact - 154.0 / 168.0).abs() < 1e-12);
    let mut p = plan(2, 3, 3, 1, 3, 99);
    p.min_decoder_errors = u64::MAX;
    p.max_trials = 100_000;
    let tally = run_plan(&p).unwrap();
    assert_eq!(tally.trials, 100_000);
    assert!(tally.censored);
    let se = (exact * (1.0 - exact) / tally.trials as f64).sqrt();
    let hat = tally.pe_hat().unwrap();
    assert!((hat - exact).abs() < 3.0 * se, "hat {hat} exact {exact} se {se}");
}

#[test]
fn estimate_matches_exact_probability_q3() {
    let exact = exact_pe(3, 2, 2, 1, 2);
    let mut p = plan(3, 2, 2, 1, 2, 5);
    p.min_decoder_errors = u64::MAX;
    p.max_trials = 50_000;
    let tally = run_plan(&p).unwrap();
    let se = (exact * (1.0 - exact) / tally.trials as f64).sqrt();
    let hat = tally.pe_hat().unwrap();
    assert!((hat - exact).abs() < 3.0 * se, "hat {hat} exact {exact} se {se}");
}

#[test]
fn outcome_does_not_depend_on_message() {
    let mut zero = plan(2, 8, 8, 4, 4, 11);
    zero.min_decoder_errors = 200;
    zero.zero_message = true;
    let mut random = zero.clone();
    random.zero_message = false;
    random.stream_id = 1;
    let a = run_plan(&zero).unwrap();
    let b = run_plan(&random).unwrap();
    let chi = homogeneity_chi_square(&a, &b);
    // 99% critical value of chi-square with one degree of freedom
    assert!(chi < 6.635, "chi-square {chi}");
}

#[test]
fn stopping_rule_is_exact() {
    let p = plan(2, 8, 8, 4, 4, 3);
    let tally = run_plan(&p).unwrap();
    assert_eq!(tally.decoder_errors, p.min_decoder_errors);
    assert_eq!(tally.trials, tally.failures + tally.decoder_errors);
    assert!(!tally.censored);
}

#[test]
fn tally_is_independent_of_worker_count() {
    let p = plan(2, 8, 8, 4, 5, 17);
    let base = run_plan_with_workers(&p, 1).unwrap();
    for w in [2, 5] {
        assert_eq!(run_plan_with_workers(&p, w).unwrap(), base);
    }
}

#[test]
fn errors_below_d_minus_t_never_mislead() {
    // d = 6, t = 2: rank-3 errors stay at distance >= 3 from other codewords
    let mut p = plan(2, 16, 16, 11, 3, 1);
    p.max_trials = 3000;
    let tally = run_plan(&p).unwrap();
    assert_eq!(tally.decoder_errors, 0);
    assert_eq!(tally.failures, 3000);
    assert_eq!(tally.pe_hat(), Some(0.0));
}

#[test]
fn rejects_error_rank_within_radius() {
    let p = plan(2, 8, 8, 4, 2, 0);
    assert!(run_plan(&p).is_err());
}
