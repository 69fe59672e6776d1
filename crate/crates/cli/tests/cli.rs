use std::process::{Command, Output};

use serde_json::Value;

fn snconj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snconj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn complex(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

#[test]
fn leaf_and_invert_round_trip() {
    let out = snconj(&[
        "leaf", "--alpha", "0.05", "--sector", "plus", "--c", "1+1i", "--x", "0.3+0.6i",
    ]);
    assert!(out.status.success());
    let (re, im) = complex(&stdout_json(&out));
    let y = format!("{re:e}{im:+e}i");
    let out = snconj(&[
        "invert", "--alpha", "0.05", "--sector", "plus", "--x", "0.3+0.6i", "--y", &y,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (cre, cim) = complex(&stdout_json(&out));
    assert!(
        (cre - 1.0).abs() < 1e-8 && (cim - 1.0).abs() < 1e-8,
        "{cre} {cim}"
    );
}

#[test]
fn map_on_the_axis_is_identity() {
    let out = snconj(&["map", "--alpha", "0.05", "--x", "0", "--y", "1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(complex(&v["X"]), (0.0, 0.0));
    assert_eq!(complex(&v["Y"]), (1.0, 0.0));
}

#[test]
fn series_prints_exact_integers() {
    let out = snconj(&["series", "--order", "12"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.trim_end()
            .ends_with("a6=1,a7=0,a8=3,a9=0,a10=15,a11=0,a12=105"),
        "{text}"
    );
    let out = snconj(&["series", "--order", "60"]);
    let text = String::from_utf8(out.stdout).unwrap();
    // 55!! exceeds 2^64
    let double_factorial: u128 = (1..=55u128).step_by(2).product();
    assert!(
        text.trim_end()
            .ends_with(&format!("a60={double_factorial}")),
        "{text}"
    );
}

#[test]
fn stokes_reports_both_constants() {
    let out = snconj(&["stokes", "--alpha", "0.05+0.02i", "--x", "0.6"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["max_err"].as_f64().unwrap() < 1e-7);
    let (re, im) = complex(&v["tau0_est"]);
    assert!((re - 1.05).abs() < 1e-7 && (im - 0.02).abs() < 1e-7);
}

#[test]
fn hankel_matches_closed_form() {
    let out = snconj(&["hankel", "--a", "2", "--j", "1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["rel_err"].as_f64().unwrap() < 1e-8);
    let (re, im) = complex(&v["closed_form"]);
    assert!(re.abs() < 1e-15 && (im + std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn chart_transition_and_failure() {
    let out = snconj(&[
        "chart", "--from", "xy", "--to", "st", "--a", "2", "--b", "3",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["chart"], "st");
    assert_eq!(complex(&v["coords"][0]), (0.5, 0.0));
    assert_eq!(complex(&v["coords"][1]), (1.5, 0.0));
    let out = snconj(&[
        "chart", "--from", "xy", "--to", "st", "--a", "0", "--b", "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "chart_undefined");
}

#[test]
fn verify_exit_codes() {
    let out = snconj(&["verify", "--alpha", "0", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out).as_array().unwrap().len(), 9);

    let out = snconj(&[
        "verify",
        "--alpha",
        "0.05",
        "--suite",
        "system",
        "--samples",
        "100",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["samples"], 100);
    assert_eq!(v["seed"], 3);

    let out = snconj(&["verify", "--alpha", "0.05", "--suite", "continuity"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["pass"], false);

    let out = snconj(&["verify", "--alpha", "0.15", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "alpha_too_large");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        snconj(&["leaf", "--alpha", "nonsense", "--sector", "plus", "--c", "0", "--x", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(snconj(&["map", "--alpha", "0.05"]).status.code(), Some(2));
    assert_eq!(
        snconj(&["verify", "--alpha", "0", "--suite", "all", "--tol", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(snconj(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        snconj(&["verify", "--alpha", "0", "--suite", "nope"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn numerical_failure_exits_three() {
    let out = snconj(&[
        "leaf", "--alpha", "0", "--sector", "plus", "--c", "0", "--x", "0.1i",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "outside_annulus");
    assert!(out.stdout.is_empty());
}

#[test]
fn batch_map_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("points.csv");
    let output = dir.path().join("mapped.csv");
    // points on known leaves, generated through the leaf command
    let mut rows = vec!["re_x,im_x,re_y,im_y".to_string()];
    let mut leaves = Vec::new();
    for ((xr, xi), sector, c) in [
        ((0.4, 0.5), "plus", "1-1i"),
        ((-0.3, -0.6), "minus", "0.5+2i"),
        ((0.9, 0.0), "plus", "-2"),
    ] {
        let x = format!("{xr}{xi:+}i");
        let out = snconj(&[
            "leaf", "--alpha", "0.05", "--sector", sector, "--c", c, "--x", &x,
        ]);
        let (re, im) = complex(&stdout_json(&out));
        rows.push(format!("{xr},{xi},{re},{im}"));
        leaves.push(sector);
    }
    rows.push("0,0,1.5,-0.5".into());
    std::fs::write(&input, rows.join("\n") + "\n").unwrap();
    let out = snconj(&[
        "map",
        "--alpha",
        "0.05",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let mut rdr = csv::Reader::from_path(&output).unwrap();
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["re_x", "im_x", "re_y", "im_y", "re_X", "im_X", "re_Y", "im_Y"]
    );
    let records: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(records.len(), 4);
    assert_eq!(&records[3][4..], &[0.0, 0.0, 1.5, -0.5]);

    // re-verify: the image lies on the ψ-image of the source leaf
    for (rec, sector) in records.iter().zip(&leaves) {
        let fmt = |re: f64, im: f64| format!("{re:e}{im:+e}i");
        let c_src = complex(&stdout_json(&snconj(&[
            "invert",
            "--alpha",
            "0.05",
            "--sector",
            sector,
            "--x",
            &fmt(rec[0], rec[1]),
            "--y",
            &fmt(rec[2], rec[3]),
        ])));
        let c_img = complex(&stdout_json(&snconj(&[
            "invert",
            "--alpha",
            "0",
            "--sector",
            sector,
            "--x",
            &fmt(rec[4], rec[5]),
            "--y",
            &fmt(rec[6], rec[7]),
        ])));
        let psi = sn_conjugacy::transverse::TransverseMap::new(
            num_complex::Complex64::new(0.05, 0.0),
            if *sector == "plus" {
                sn_conjugacy::foliation::SectorTag::Plus
            } else {
                sn_conjugacy::foliation::SectorTag::Minus
            },
        )
        .unwrap();
        let expected = psi.apply(num_complex::Complex64::new(c_src.0, c_src.1));
        assert!((expected.re - c_img.0).abs() < 1e-7 && (expected.im - c_img.1).abs() < 1e-7);
    }
}

#[test]
fn batch_rejects_wrong_header() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    std::fs::write(&input, "x,y\n1,2\n").unwrap();
    let out = snconj(&["map", "--alpha", "0.05", "--input", input.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("header"));
}

#[test]
fn plot_leaves_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("leaves.svg");
    let out = snconj(&[
        "plot-leaves",
        "--alpha",
        "0.05",
        "--radius",
        "0.6",
        "--count",
        "3",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("Re y") && text.contains("Im y"));

    let csv_path = dir.path().join("leaves.csv");
    let out = snconj(&[
        "plot-leaves",
        "--alpha",
        "0.05",
        "--radius",
        "0.6",
        "--count",
        "3",
        "--points",
        "50",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("theta,re_y,im_y,c_index\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 50);
}
