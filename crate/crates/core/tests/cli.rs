use std::io::Write;
use std::process::{Command, Output};

fn hbspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV output, after the config and header lines.
fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn coeffs_of_phi_one() {
    let o = hbspace(&["coeffs", "--phi-c", "1", "--order", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("# config: {"));
    assert_eq!(out.lines().nth(1), Some("n,re,im"));
    let re: Vec<f64> = rows(&o).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(re, [1.0, 1.0, 1.0, 1.0]);
}

#[test]
fn coeffs_of_theta_and_phi_half() {
    let o = hbspace(&["coeffs", "--theta", "--order", "1"]);
    let re: Vec<f64> = rows(&o).iter().map(|r| r[1].parse().unwrap()).collect();
    let e = (-0.5f64).exp();
    assert!((re[0] - e).abs() < 1e-15 && (re[1] + e).abs() < 1e-15);

    let o = hbspace(&["coeffs", "--phi-c", "0.5", "--order", "2", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["config"]["subcommand"], "coeffs");
    let re: Vec<f64> = v["result"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r[1].as_f64().unwrap())
        .collect();
    assert_eq!(re, [1.0, 0.5, 0.375]);
}

#[test]
fn usage_errors_are_nonzero() {
    for args in [
        &["coeffs"][..],
        &["coeffs", "--phi-c", "0"],
        &["coeffs", "--phi-c", "1", "--coeff-file", "x.txt"],
        &["containment", "--phi-c", "1", "--space", "hp"],
        &["containment", "--phi-c", "1", "--space", "hp", "--p", "1.5"],
        &["nonsense"],
    ] {
        let o = hbspace(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn hbnorm_examples() {
    let o = hbspace(&["hbnorm", "--phi-c", "1", "--monomial", "5"]);
    assert_eq!(rows(&o), [["7.0"]]);

    let mut zero = tempfile::NamedTempFile::new().unwrap();
    writeln!(zero, "0 0").unwrap();
    let mut poly = tempfile::NamedTempFile::new().unwrap();
    writeln!(poly, "# p = (1+2i) - i z + 3 z^2\n1 2\n0 -1\n3 0").unwrap();
    let o = hbspace(&[
        "hbnorm",
        "--coeff-file",
        zero.path().to_str().unwrap(),
        "--order",
        "4",
        "--poly-file",
        poly.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(rows(&o), [["15.0"]]);

    let o = hbspace(&["hbnorm", "--phi-c", "1", "--order", "64", "--sweep"]);
    for (n, r) in rows(&o).iter().enumerate() {
        assert_eq!(r[0].parse::<usize>().unwrap(), n);
        assert_eq!(r[1].parse::<f64>().unwrap(), n as f64 + 2.0);
    }
}

#[test]
fn bad_coefficient_file_is_reported() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "1 0\nx y").unwrap();
    let o = hbspace(&["coeffs", "--coeff-file", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":2:"));
}

#[test]
fn hardy_containment() {
    let o = hbspace(&["containment", "--phi-c", "0.1", "--space", "hp", "--p", "4", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["result"]["verdict"], "yes");
    assert_eq!(v["result"]["p_tilde"], 4.0);
    let o = hbspace(&["containment", "--phi-c", "0.6", "--space", "hp", "--p", "inf", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["result"]["verdict"], "no");
    assert_eq!(v["result"]["p"], "inf");
}

#[test]
fn dirichlet_and_gevrey_containment() {
    let o = hbspace(&["containment", "--phi-c", "0.5", "--space", "dirichlet", "--levels", "6..10"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("contained-not-compact"));
    assert_eq!(stdout(&o).lines().nth(1), Some("n,k_max,ratio"));
    assert_eq!(rows(&o).len(), 5);

    let o = hbspace(&[
        "containment", "--phi-c", "2", "--space", "gevrey", "--gevrey-c", "1", "--levels", "6..10", "--format", "json",
    ]);
    let v = json(&o);
    assert_ne!(v["result"]["containment"], "not-contained");
    assert_eq!(v["config"]["extra"]["weight"]["kind"], "gevrey");
}

#[test]
fn casestudy_table() {
    let o = hbspace(&["casestudy", "--theta", "--levels", "6..10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().nth(1), Some("c,with_theta,n,max_ratio,slope,verdict"));
    let table = rows(&o);
    assert_eq!(table.len(), 15);
    let verdict = |c: &str| table.iter().find(|r| r[0] == c).unwrap()[5].clone();
    assert_eq!(verdict("0.75"), "compact-contained");
    assert_eq!(verdict("1.0"), "contained-not-compact");
    assert_eq!(verdict("1.25"), "not-contained");

    let o = hbspace(&["casestudy", "--c-values", "0.75", "--levels", "6..10"]);
    assert_eq!(rows(&o)[0][5], "not-contained");
}

#[test]
fn identical_config_gives_identical_output() {
    let args = ["casestudy", "--c-values", "0.5,1", "--theta", "--levels", "5..8", "--format", "json"];
    assert_eq!(hbspace(&args).stdout, hbspace(&args).stdout);
}

#[test]
fn selftest_passes_by_default() {
    let o = hbspace(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(rows(&o).iter().all(|r| r[3] == "true"));
}

#[test]
fn forced_tolerance_fails_named_suite() {
    let o = hbspace(&["selftest", "--levels", "6..9", "--tol", "norms=-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("[FAIL] norms"));
    let failing: Vec<String> = rows(&o).into_iter().filter(|r| r[3] == "false").map(|r| r[0].clone()).collect();
    assert_eq!(failing, ["norms"]);

    let o = hbspace(&["selftest", "--tol", "nosuch=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_leaves_exact_suites_unchanged() {
    let metric = |seed: &str| -> Vec<(String, String)> {
        let o = hbspace(&["selftest", "--levels", "6..8", "--seed", seed]);
        assert!(o.status.success());
        rows(&o).into_iter().map(|r| (r[0].clone(), r[1].clone())).collect()
    };
    let (a, b) = (metric("1"), metric("99"));
    for (x, y) in a.iter().zip(&b) {
        if x.0 != "homomorphism" && x.0 != "lemma" {
            assert_eq!(x, y);
        }
    }
}
