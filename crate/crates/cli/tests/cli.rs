use std::process::{Command, Output};

fn rankmetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankmetric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn bounds_table_over_t() {
    let o = rankmetric(&["bounds", "--q", "2", "--m", "16", "--n", "16", "--t-min", "1", "--t-max", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 5);
    let eq8: Vec<f64> = column(&text, "PE_eq8").iter().map(|s| s.parse().unwrap()).collect();
    for (t, w) in (1..).zip(eq8.windows(2)) {
        let expected = 2f64.powi(-(2 * t + 1));
        assert!((w[1] / w[0] / expected - 1.0).abs() < 1e-5, "t={t}: {}", w[1] / w[0]);
    }
    let notes = column(&text, "note");
    assert_eq!(notes[0], "trivial (>=1)");
    assert!(notes[1..].iter().all(String::is_empty));
}

#[test]
fn bounds_empty_range_is_header_only() {
    let o = rankmetric(&["bounds", "--q", "2", "--m", "16", "--n", "16", "--t-min", "3", "--t-max", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "q,m,n,k,t,u,Du_bound,PE_eq6_7,PE_eq8_log_q,PE_eq8,note\n");
}

#[test]
fn bounds_rejects_invalid_parameters() {
    let o = rankmetric(&["bounds", "--q", "4", "--m", "4", "--n", "4"]);
    assert!(!o.status.success());
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("q = 4"));
}

#[test]
fn census_of_tiny_code() {
    let o = rankmetric(&["census", "--q", "2", "--m", "3", "--n", "3", "--k", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert_eq!(column(&text, "u"), ["0", "1", "2", "3"]);
    let pe = column(&text, "PE_exact");
    assert!(pe[0].is_empty() && pe[1].is_empty());
    assert!(!pe[2].is_empty() && !pe[3].is_empty());
}

#[test]
fn census_of_rate_one_code() {
    let o = rankmetric(&["census", "--q", "2", "--m", "2", "--n", "2", "--k", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(column(&text, "N_u"), column(&text, "D_u"));
}

#[test]
fn census_guard_refusal() {
    let o = rankmetric(&["census", "--q", "2", "--m", "16", "--n", "16", "--k", "12"]);
    assert!(!o.status.success());
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("guard exceeded: codebook"));
}

#[test]
fn verify_unknown_suite_lists_available() {
    let o = rankmetric(&["verify", "no-such-suite"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    for s in ["els-lemmas", "mrd-lemmas", "bound-chain", "identities"] {
        assert!(err.contains(s), "{err}");
    }
}

#[test]
fn verify_identities_passes() {
    let o = rankmetric(&["verify", "identities"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn simulate_zero_budget_gives_censored_rows() {
    let o = rankmetric(&["simulate", "--preset", "fig2", "--max-trials", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 28);
    assert!(column(&text, "censored").iter().all(|c| c == "true"));
    assert!(column(&text, "trials").iter().all(|c| c == "0"));
}

#[test]
fn simulate_invalid_plan_runs_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.csv");
    let o = rankmetric(&[
        "simulate", "--q", "2", "--m", "8", "--n", "8", "--k", "4", "--u", "2",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn simulate_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for w in ["1", "3", "8"] {
        let out = dir.path().join(format!("w{w}.csv"));
        let o = rankmetric(&[
            "simulate", "--q", "2", "--m", "8", "--n", "8", "--k", "4", "--u", "5",
            "--seed", "42", "--workers", w, "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(dir.path().join(format!("w{w}.csv.manifest.json")).exists());
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn simulate_from_plan_file() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    std::fs::write(&plan, r#"[{"q":2,"m":6,"n":6,"k":2,"u":4,"seed":7,"max_trials":500}]"#).unwrap();
    let o = rankmetric(&["simulate", "--plan", plan.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(column(&text, "seed"), ["7"]);
    let trials: u64 = column(&text, "trials")[0].parse().unwrap();
    assert!(trials <= 500);
}
