use std::process::{Command, Output};

fn pim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pim"))
        .args(args)
        .env_remove("IM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header row and numeric body of a CSV, skipping `#` lines.
fn parse(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let cols = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (cols, rows)
}

#[test]
fn contour_peaks_at_the_observation() {
    let out = stdout(&pim(&["contour", "--y", "1.5", "--combiners", "vacuous,hose:0.5"]));
    assert!(out.starts_with("# pim "));
    let (cols, rows) = parse(&out);
    assert_eq!(cols, ["theta", "contour_vacuous", "contour_hose_0.5"]);
    let peak = rows.iter().find(|r| r[0] == 1.5).expect("1.5 lies on the grid");
    assert_eq!(peak[1], 1.0);
    assert_eq!(peak[2], 1.0);
    assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r[1]) && (0.0..=1.0).contains(&r[2])));
}

#[test]
fn figure_preset_matches_explicit_flags() {
    let a = stdout(&pim(&["contour", "--figure", "1a"]));
    let b = stdout(&pim(&["contour", "--y", "1.5", "--combiners", "vacuous,hose:0.5"]));
    let body = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&a), body(&b));
}

#[test]
fn tnorm_dominates_dempster() {
    let out = stdout(&pim(&["contour", "--y", "0.5", "--combiners", "dempster,tnorm:product"]));
    let (_, rows) = parse(&out);
    assert!(rows.iter().all(|r| r[2] >= r[1] - 1e-12));
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        &["contour", "--y", "1", "--combiners", "bogus"][..],
        &["contour"],
        &["contour", "--y", "1,2"],
        &["contour", "--y", "1", "--figure", "9z"],
        &["contour", "--y", "1", "--combiners", ""],
        &["validity-cdf", "--reps", "10"],
        &["cond-validity", "--seed", "1"],
        &["no-such-command"],
    ] {
        assert_eq!(pim(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn total_conflict_exits_with_three() {
    let o = pim(&["contour", "--prior", "interval:1,2,0", "--y", "30", "--combiners", "dempster"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn monte_carlo_output_is_reproducible() {
    let args = ["validity-cdf", "--reps", "3000", "--seed", "7", "--alpha-grid", "0.05:0.95:0.05"];
    let a = stdout(&pim(&args));
    let b = stdout(&pim(&[&args[..], &["--threads", "3"]].concat()));
    assert_eq!(a, b);
    let c = stdout(&pim(&["validity-cdf", "--reps", "3000", "--seed", "8", "--alpha-grid", "0.05:0.95:0.05"]));
    assert_ne!(a, c);
}

#[test]
fn seed_can_come_from_the_environment() {
    let run = |env: bool| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_pim"));
        cmd.args(["coverage", "--reps", "500"]);
        if env {
            cmd.env("IM_SEED", "11");
        } else {
            cmd.env_remove("IM_SEED").args(["--seed", "11"]);
        }
        stdout(&cmd.output().unwrap())
    };
    assert_eq!(run(true), run(false));
}

#[test]
fn coverage_columns() {
    let out = stdout(&pim(&["coverage", "--reps", "500", "--seed", "1"]));
    let header = out.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "im,alpha,coverage,mean_length,stderr_cov,stderr_len,reps,seed");
    assert!(out.contains("\nvacuous,0.05,"));
    assert!(out.contains("\ntnorm_product,0.05,"));
}

#[test]
fn conditional_validity_counterexample_shape() {
    let out = stdout(&pim(&[
        "cond-validity",
        "--figure",
        "2b",
        "--reps",
        "20000",
        "--seed",
        "3",
        "--alpha-grid",
        "0.1:0.9:0.1",
    ]));
    let (cols, rows) = parse(&out);
    assert_eq!(cols, ["alpha", "H_A", "stderr"]);
    assert!(rows.iter().any(|r| r[1] > r[0] + 3.0 * r[2]));
}

#[test]
fn writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let o = pim(&["contour", "--figure", "3d", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let (cols, _) = parse(&text);
    assert_eq!(cols, ["theta", "contour_vacuous", "contour_dempster", "contour_tnorm_product"]);
}

#[test]
fn sparse_contour_columns() {
    let out = stdout(&pim(&["contour", "--sparse", "--grid", "-1:2:0.5,-1:2:0.5"]));
    let (cols, rows) = parse(&out);
    assert_eq!(cols, ["theta", "theta2", "contour_vacuous", "contour_tnorm_product"]);
    assert_eq!(rows.len(), 49);
}

#[test]
fn validify_is_reproducible() {
    let args = ["validify", "--figure", "5b", "--mc-reps", "300", "--seed", "5", "--grid", "0:3:0.1"];
    let a = stdout(&pim(&args));
    assert_eq!(a, stdout(&pim(&[&args[..], &["--threads", "2"]].concat())));
    let (cols, rows) = parse(&a);
    assert_eq!(
        cols,
        ["theta", "contour_vacuous", "contour_tnorm_product", "contour_validified_tnorm_product", "stderr_validified"]
    );
    assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r[3])));
}

#[test]
fn sparse_demo_reports_areas() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let args = ["sparse-demo", "--mc-reps", "2000", "--seed", "2", "--grid", "-3:5:0.1,-3:5:0.1"];
    let o = pim(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    let printed = stdout(&o);
    assert_eq!(printed.lines().count(), 3);
    assert!(printed.starts_with("area_vacuous_0.9 = "));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, stdout(&pim(&args)));
    let (cols, rows) = parse(&text);
    assert_eq!(cols.len(), 8);
    assert_eq!(cols[5], "in_region_0.9_vacuous");
    assert!(rows.iter().all(|r| r[5] == 0.0 || r[5] == 1.0));
}
