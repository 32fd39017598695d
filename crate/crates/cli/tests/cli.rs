use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dvgauss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dvgauss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Column `col` of a CSV body parsed as floats.
fn column(csv: &str, col: usize) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect()
}

fn close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
    }
}

#[test]
fn purity_table_rows() {
    let out = dvgauss(&["purity-table", "--sigma", "2,0,2", "--dims", "3,5,7,9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("d,purity,limit\n"));
    close(&column(&text, 1), &[0.52865, 0.50099, 0.50003, 0.50000], 5e-5);
    close(&column(&text, 2), &[0.5; 4], 1e-15);

    let text = stdout(&dvgauss(&["purity-table", "--sigma", "3,2,2", "--dims", "9", "--digits", "4"]));
    assert_eq!(text, "d,purity,limit\n9,0.7070,0.7071\n");
    let text = stdout(&dvgauss(&["purity-table", "--sigma", "1,0,1", "--dims", "7", "--digits", "4"]));
    assert_eq!(text, "d,purity,limit\n7,1.0000,1.0000\n");
}

#[test]
fn full_precision_is_round_trip_safe() {
    let text = stdout(&dvgauss(&["purity-table", "--sigma", "2,0,2", "--dims", "5"]));
    let cell = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    let x: f64 = cell.parse().unwrap();
    assert_eq!(format!("{x:.16e}"), cell);
}

#[test]
fn thermal_columns() {
    let text = stdout(&dvgauss(&["thermal", "--nu", "2", "--dim", "7"]));
    assert!(text.starts_with("n,lambda_n,N_n,deviation\n"));
    close(
        &column(&text, 1),
        &[0.6667, 0.2219, 0.0751, 0.0229, 0.0105, 0.0017, 0.0010],
        5e-4,
    );
    close(
        &column(&text, 2),
        &[0.6669, 0.2223, 0.0741, 0.0247, 0.0082, 0.0027, 0.0009],
        1e-4,
    );
}

#[test]
fn commutator_and_spectrum() {
    let text = stdout(&dvgauss(&["commutator", "--dim", "11"]));
    let v = column(&text, 1);
    assert_eq!(v.len(), 11);
    close(&v[7..], &[1.33, -5.45, 19.99, -34.92], 1e-2);

    let text = stdout(&dvgauss(&["spectrum", "--sigma", "2,1,1", "--dim", "5"]));
    let l = column(&text, 1);
    assert!((l[0] - 1.0).abs() < 1e-8);
    assert!(l[1..].iter().all(|x| x.abs() < 1e-8));
}

#[test]
fn transform_rows() {
    let text = stdout(&dvgauss(&["transform", "--A", "pi/4", "--B", "0,0", "--sigma", "2,1,1"]));
    assert!(text.starts_with("A_re,B_re,B_im,d,norm_kind,deviation\n"));
    close(&column(&text, 5), &[0.1701, 0.0932, 0.0489, 0.0256, 0.0135, 0.0071], 5e-4);
    let text = stdout(&dvgauss(&["transform", "--squeeze", "0.5,pi/3", "--sigma", "3,2,2", "--dims", "5,15"]));
    close(&column(&text, 5), &[0.1605, 0.0593], 5e-4);
    let both = stdout(&dvgauss(&["transform", "--sigma", "2,1,1", "--dims", "5", "--norm", "both"]));
    assert_eq!(both.lines().count(), 3);
}

#[test]
fn wigner_grids() {
    let text = stdout(&dvgauss(&["wigner", "--kappa", "1", "--dim", "31"]));
    assert!(text.starts_with("n,k,w\n-15,-15,"));
    assert_eq!(text.lines().count(), 31 * 31 + 1);
    let total: f64 = column(&text, 2).iter().sum();
    assert!((total - 1.0).abs() < 1e-12);

    let json = stdout(&dvgauss(&["wigner", "--sigma", "2,0,2", "--dim", "5", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["d"], 5);
    assert_eq!(v["grid"].as_array().unwrap().len(), 25);
    assert_eq!(v["rho"].as_array().unwrap().len(), 25);

    let centered = dvgauss(&["wigner", "--sigma", "2,0,2", "--center", "1,-1", "--dim", "5"]);
    assert!(centered.status.success());
    let bad = dvgauss(&["wigner", "--sigma", "2,0,2", "--center", "1", "--dim", "5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn bad_arguments_exit_2() {
    for args in [
        vec!["purity-table", "--sigma", "1,2,1"],
        vec!["purity-table", "--sigma", "1,2"],
        vec!["purity-table", "--sigma", "2,0,2", "--dims", "4"],
        vec!["thermal", "--nu", "0.5", "--dim", "7"],
        vec!["transform", "--sigma", "2,1,1", "--norm", "max"],
        vec!["wigner", "--dim", "5"],
        vec!["no-such-command"],
    ] {
        assert_eq!(dvgauss(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn io_failure_exits_3() {
    let out = dvgauss(&["purity-table", "--sigma", "2,0,2", "--out", "/nonexistent-dir/t.csv"]);
    assert_eq!(out.status.code(), Some(3));
    let out = dvgauss(&["purity-table", "--config", "/nonexistent-dir/c.cfg", "--sigma", "2,0,2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_passes() {
    let out = dvgauss(&["check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn files_are_deterministic_and_atomic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = dvgauss(&["thermal", "--nu", "3", "--dim", "9", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    // Overwrites replace the file and leave no temporaries behind.
    let out = dvgauss(&["commutator", "--dim", "5", "--out", a.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(fs::read_to_string(&a).unwrap().starts_with("j,im_lambda\n"));
    let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2, "{names:?}");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# table row\nsigma = 3,2,2\ndims = 3,5\ndigits = 4\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let text = stdout(&dvgauss(&["purity-table", "--config", cfg]));
    assert_eq!(text, "d,purity,limit\n3,0.6633,0.7071\n5,0.7009,0.7071\n");
    let text = stdout(&dvgauss(&["purity-table", "--config", cfg, "--dims", "9", "--digits", "3"]));
    assert_eq!(text, "d,purity,limit\n9,0.707,0.707\n");
    let out_path = dir.path().join("from-config.csv");
    let cfg2 = dir.path().join("out.cfg");
    fs::write(&cfg2, format!("sigma=2,0,2\ndims=3\nout={}\n", out_path.display())).unwrap();
    assert!(dvgauss(&["purity-table", "--config", cfg2.to_str().unwrap()]).status.success());
    assert!(Path::new(&out_path).exists());
}

#[test]
fn json_tables() {
    let text = stdout(&dvgauss(&["purity-table", "--sigma", "2,0,2", "--dims", "3", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["d"], 3);
    assert!((v[0]["limit"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn two_mode_sigma() {
    let text = stdout(&dvgauss(&[
        "purity-table", "--sigma", "2,0,0,0,2,0,0,2,0,2", "--dims", "3", "--digits", "6",
    ]));
    // Product of two σ = 2I modes: the single-mode purity squared.
    assert_eq!(text, "d,purity,limit\n3,0.279472,0.250000\n");
}
