use baskakov::cli::{run, EXIT_INVALID, EXIT_OK};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("baskakov").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn eval_smoke() {
    let (code, out, _) = invoke(&["eval", "--op", "mod2", "--n", "50", "--f", "inv1p", "--x-min", "0", "--x-max", "2", "--points", "5"]);
    assert_eq!(code, EXIT_OK);
    let lines = data_lines(&out);
    assert_eq!(lines[0], "x,value");
    assert_eq!(lines.len(), 6);
    for line in &lines[1..] {
        let (_, v) = line.split_once(',').unwrap();
        assert!(v.parse::<f64>().unwrap().is_finite());
    }
    assert!(out.starts_with("# baskakov="));
    assert!(out.contains("# op=mod2\n"));
}

#[test]
fn low_order_moments_match() {
    let (code, out, _) = invoke(&["moments", "--op", "mod1", "--a0", "1", "--a1", "1", "--n", "10", "--x", "1", "--max-degree", "2"]);
    assert_eq!(code, EXIT_OK);
    let lines = data_lines(&out);
    assert_eq!(lines[0], "j,paper_value,oracle_value,match");
    assert_eq!(&lines[1..], ["0,1,1,true", "1,11/8,11/8,true", "2,19/7,19/7,true"]);
}

#[test]
fn mismatches_carry_discrepancies() {
    let (code, out, _) = invoke(&["moments", "--op", "split-a", "--a0", "3/4", "--a1", "1/2", "--n", "20", "--x", "1/2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("2,361/2448,419/2448,false"));
    assert!(out.ends_with("# discrepancy_j2=-29/1224\n"));
}

#[test]
fn converge_footers() {
    let (code, out, _) = invoke(&["converge", "--op", "durrmeyer", "--f", "inv1p", "--n-list", "16,32,64", "--points", "11"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.contains(&"n,sup_error"));
    let n = lines.len();
    assert!(lines[n - 2].starts_with("# slope="));
    assert!(lines[n - 1].starts_with("# r2="));
    let slope: f64 = lines[n - 2]["# slope=".len()..].parse().unwrap();
    assert!((slope + 1.0).abs() < 0.2, "{slope}");
}

#[test]
fn voronovskaja_and_positivity_headers() {
    let (code, out, _) = invoke(&["voronovskaja", "--op", "mod2", "--f", "expneg", "--x", "1", "--n-list", "50,100,200"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(data_lines(&out)[0], "n,scaled_residual,limit,abs_gap");
    let (code, out, _) = invoke(&["positivity"]);
    assert_eq!(code, EXIT_OK);
    let lines = data_lines(&out);
    assert_eq!(lines[0], "case,min_weight,argmin_k,argmin_x");
    assert_eq!(lines.len(), 8);
    let (code, out, _) = invoke(&["positivity", "--a0", "1/2", "--a1", "0", "--n", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(data_lines(&out)[1].starts_with("case2,"));
}

#[test]
fn selftest_passes() {
    let (code, out, _) = invoke(&["selftest"]);
    assert_eq!(code, EXIT_OK);
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("PASS ") && last.ends_with(" checks"), "{last}");
}

#[test]
fn output_is_deterministic() {
    let args = ["eval", "--op", "durrmeyer", "--n", "30", "--f", "dampedsin", "--x-min", "0", "--x-max", "3", "--points", "13"];
    let first = invoke(&args);
    let second = invoke(&args);
    assert_eq!(first, second);
    let args = ["central-moments", "--op", "mod2", "--n", "20", "--x", "1/2"];
    assert_eq!(invoke(&args), invoke(&args));
}

#[test]
fn writes_to_file() {
    let path = std::env::temp_dir().join(format!("baskakov-cli-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = invoke(&["eval", "--op", "baskakov", "--n", "10", "--f", "expneg", "--x", "0.5", "--out", p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(data_lines(&written).len(), 2);
}

#[test]
fn validation_errors() {
    let cases: &[&[&str]] = &[
        &["--bogus"],
        &["eval", "--op", "mod1", "--n", "10", "--f", "expneg", "--x", "1"],
        &["eval", "--op", "mod1", "--a0", "1", "--a1", "0", "--n", "10", "--f", "expneg", "--x", "1"],
        &["eval", "--op", "mod2", "--a0", "1", "--a1", "1", "--n", "10", "--f", "expneg", "--x", "1"],
        &["eval", "--op", "durrmeyer", "--n", "10", "--f", "nope", "--x", "1"],
        &["eval", "--op", "durrmeyer", "--n", "10", "--f", "expneg", "--x", "-1"],
        &["eval", "--op", "durrmeyer", "--n", "10", "--f", "expneg", "--x", "1", "--tol", "0"],
        &["eval", "--op", "durrmeyer", "--n", "2", "--f", "expneg", "--x", "1"],
        &["converge", "--op", "durrmeyer", "--f", "expneg", "--n-list", "32,16,64"],
        &["converge", "--op", "durrmeyer", "--f", "expneg", "--interval", "2:0"],
        &["moments", "--op", "mod1", "--a0", "0.5", "--a1", "0", "--n", "10", "--x", "1"],
        &["moments", "--op", "baskakov", "--n", "10", "--x", "1"],
    ];
    for args in cases {
        let (code, out, err) = invoke(args);
        assert_eq!(code, EXIT_INVALID, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(invoke(&["--help"]).0, EXIT_OK);
    assert_eq!(invoke(&["--version"]).0, EXIT_OK);
}
