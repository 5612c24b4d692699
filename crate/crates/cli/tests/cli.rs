use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const MARKED: &[&str] = &[
    "--family", "normal", "--mean-s2", "3.0", "--sd-s2", "1.5", "--sd-mu", "1.0", "--mu0", "3.5",
];

fn vpvc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vpvc"))
        .args(args)
        .env_remove("VPVC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV emission as maps from column to field.
fn rows(text: &str) -> Vec<Vec<(String, String)>> {
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    let header: Vec<String> = body[0].split(',').map(str::to_owned).collect();
    let data = body[1..].join("\n");
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(data.as_bytes());
    reader
        .records()
        .map(|r| header.iter().cloned().zip(r.unwrap().iter().map(str::to_owned)).collect())
        .collect()
}

fn field<'a>(row: &'a [(String, String)], name: &str) -> &'a str {
    &row.iter().find(|(k, _)| k == name).unwrap().1
}

fn with(base: &[&'static str], extra: &[&'static str]) -> Vec<&'static str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn marked_prior_examples() {
    let o = vpvc(&with(&["ssd"], &with(MARKED, &["--eps", "20sec", "--k", "2"])));
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(field(&r[0], "n"), "49");

    let o = vpvc(&with(&["ssd"], &with(MARKED, &["--eps", "20sec", "--k", "0"])));
    assert!(o.status.success());
    assert_eq!(field(&rows(&stdout(&o))[0], "n"), "25");
    assert!(String::from_utf8_lossy(&o.stderr).contains("lhs(24) equals eps^2"));
}

#[test]
fn zero_epsilon_is_a_config_error() {
    let o = vpvc(&with(&["ssd"], &with(MARKED, &["--eps", "0"])));
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_hyperparameter_is_a_config_error() {
    let o = vpvc(&["ssd", "--family", "poisson", "--mean", "2.5", "--eps", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--sd"));
}

#[test]
fn native_and_marginal_priors_agree() {
    let a = vpvc(&["ssd", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3"]);
    let b = vpvc(&["ssd", "--family", "poisson", "--alpha", "6.25", "--beta", "2.5", "--eps", "0.3"]);
    assert_eq!(field(&rows(&stdout(&a))[0], "n"), "47");
    assert_eq!(field(&rows(&stdout(&b))[0], "n"), "47");
}

#[test]
fn asymptotics_report() {
    let o = vpvc(&["asymptotics", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--truth", "2.71"]);
    let r = rows(&stdout(&o));
    let k: f64 = field(&r[0], "k_star").parse().unwrap();
    assert!((k - 0.21).abs() < 1e-9);
    assert_eq!(field(&r[0], "gamma"), "0.4");

    let o = vpvc(&["asymptotics", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--truth", "2.0"]);
    assert_eq!(field(&rows(&stdout(&o))[0], "k_star"), "0");

    let o = vpvc(&with(&["asymptotics"], &with(MARKED, &["--eps", "20sec", "--region-width", "1"])));
    assert_eq!(field(&rows(&stdout(&o))[0], "k_star_upper_bound"), "1");
    assert_eq!(field(&rows(&stdout(&o))[0], "k_star"), "NA");
}

#[test]
fn poisson_sweep_shape() {
    let o = vpvc(&[
        "sweep", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--k", "2", "--x", "mean:1:5:5", "--y",
        "sd:0.1:2:5",
    ]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 25);
    let n = |i: usize, j: usize| -> u64 { field(&r[i * 5 + j], "n").parse().unwrap() };
    for i in 0..5 {
        for j in 0..5 {
            if i + 1 < 5 {
                assert!(n(i + 1, j) >= n(i, j));
            }
            if j + 1 < 5 {
                assert!(n(i, j + 1) >= n(i, j));
            }
        }
    }
    // x-major order
    assert_eq!(field(&r[1], "mean"), "1");
    assert_eq!(field(&r[5], "mean"), "2");
    assert_eq!(n(0, 0), 1);
}

#[test]
fn normal_sweep_ignores_mu0() {
    let o = vpvc(&with(
        &["sweep"],
        &with(MARKED, &["--eps", "20sec", "--x", "mu0:0:10:4", "--y", "sd-mu:0.5:2:3"]),
    ));
    let r = rows(&stdout(&o));
    for row in &r[3..] {
        let twin = r.iter().find(|s| field(s, "sd_mu") == field(row, "sd_mu")).unwrap();
        assert_eq!(field(row, "n"), field(twin, "n"));
    }
}

#[test]
fn infeasible_cells_are_marked() {
    let o = vpvc(&[
        "sweep", "--family", "bernoulli", "--mean", "0.5", "--sd", "0.1", "--eps", "0.1", "--x", "mean:0.1:0.5:2", "--y",
        "sd:0.1:0.45:2",
    ]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(field(&r[1], "n"), "NA");
    assert!(!field(&r[1], "reason").is_empty());
    assert_ne!(field(&r[3], "n"), "NA");
}

#[test]
fn unknown_axis_is_rejected() {
    let o = vpvc(&["sweep", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--x", "mean_s2:1:2:2", "--y", "sd:1:2:2"]);
    assert_eq!(o.status.code(), Some(2));
}

fn evaluate_grid(extra: &[&'static str]) -> Output {
    vpvc(&with(
        &[
            "evaluate", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--x", "mean:1:5:3", "--y",
            "sd:0.5:2:3", "--truth", "2.71", "--replicates", "300",
        ],
        extra,
    ))
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let (pa, pb) = (a.to_str().unwrap().to_owned(), b.to_str().unwrap().to_owned());
    let pa: &'static str = Box::leak(pa.into_boxed_str());
    let pb: &'static str = Box::leak(pb.into_boxed_str());
    assert!(evaluate_grid(&["--seed", "9", "--threads", "1", "--output", pa]).status.success());
    assert!(evaluate_grid(&["--seed", "9", "--threads", "3", "--output", pb]).status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(fs::read_to_string(&a).unwrap().starts_with("# vpvc "));

    let other = evaluate_grid(&["--seed", "10"]);
    assert_ne!(rows(&stdout(&other)), rows(&fs::read_to_string(&a).unwrap()));
}

#[test]
fn seed_comes_from_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_vpvc"))
            .args(["evaluate", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--replicates", "200"])
            .env("VPVC_SEED", seed)
            .output()
            .unwrap()
    };
    let a = stdout(&run("77"));
    assert!(a.contains("# seed 77"));
    assert_eq!(a, stdout(&run("77")));
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let csv = rows(&stdout(&evaluate_grid(&[])));
    let json: serde_json::Value = serde_json::from_slice(&evaluate_grid(&["--format", "json"]).stdout).unwrap();
    let items = json["rows"].as_array().unwrap();
    assert_eq!(items.len(), csv.len());
    for (row, obj) in csv.iter().zip(items) {
        for (key, text) in row {
            let v = &obj[key.as_str()];
            if text == "NA" {
                assert!(v.is_null());
            } else if let Ok(x) = text.parse::<f64>() {
                assert_eq!(v.as_f64().unwrap(), x, "{key}");
            } else {
                assert_eq!(v.as_str().unwrap(), text);
            }
        }
    }
    assert_eq!(json["provenance"]["seed"], 1);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    fs::write(
        &cfg,
        "family = normal\n[ssd]\nmean_s2 = 3.0\nsd_s2 = 1.5\nsd_mu = 1.0\nmu0 = 3.5\neps = 20sec\nk = 2\n[apvc]\nmean_s2 = 3.0\nsd_s2 = 1.5\nsd_mu = 1.0\nmu0 = 3.5\neps = 20sec\nk = 0\n",
    )
    .unwrap();
    let path = cfg.to_str().unwrap();
    let from_file = vpvc(&["--config", path, "ssd"]);
    assert!(from_file.status.success(), "{}", String::from_utf8_lossy(&from_file.stderr));
    assert_eq!(field(&rows(&stdout(&from_file))[0], "n"), "49");
    let overridden = vpvc(&["--config", path, "ssd", "--k", "0"]);
    assert_eq!(field(&rows(&stdout(&overridden))[0], "n"), "25");
    let section = vpvc(&["--config", path, "--section", "apvc", "ssd"]);
    assert_eq!(field(&rows(&stdout(&section))[0], "n"), "25");

    // same effective configuration, same hash
    let flags = vpvc(&with(&["ssd"], &with(MARKED, &["--eps", "20sec", "--k", "2"])));
    let hash = |o: &Output| stdout(o).lines().nth(1).unwrap().to_owned();
    assert_eq!(hash(&from_file), hash(&flags));
    assert_ne!(hash(&from_file), hash(&overridden));
}

#[test]
fn broken_config_is_a_config_error() {
    let o = vpvc(&["--config", "/nonexistent/run.ini", "ssd"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn surrogate_then_evaluate_from_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("goals.csv");
    let p: &'static str = Box::leak(data.to_str().unwrap().to_owned().into_boxed_str());
    let o = vpvc(&["surrogate", "--preset", "football", "--output", p, "--seed", "3"]);
    assert!(o.status.success());
    let text = fs::read_to_string(&data).unwrap();
    let values: Vec<f64> = rows(&text).iter().map(|r| field(r, "value").parse().unwrap()).collect();
    assert_eq!(values.len(), 5784);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    assert!((mean - 2.71).abs() < 0.1);

    let o = vpvc(&[
        "evaluate", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--data", p, "--replicates", "500",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rate: f64 = field(&rows(&stdout(&o))[0], "rate").parse().unwrap();
    assert!(rate > 0.8);

    let o = vpvc(&["evaluate", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--data", p, "--column", "goals"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_data_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.csv");
    fs::write(&data, "value\n1\n-2\n").unwrap();
    let o = vpvc(&[
        "evaluate", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--data",
        data.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn exceedance_and_epsilon_sweep() {
    let o = vpvc(&[
        "evaluate", "--kind", "exceedance", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--truth",
        "2.71", "--ks", "0,0.5,2", "--ns", "50,500", "--replicates", "400",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 6);
    let p: Vec<f64> = r.iter().map(|row| field(row, "probability").parse().unwrap()).collect();
    assert!(p[0] >= p[1] && p[1] >= p[2]);

    let o = vpvc(&with(
        &["evaluate", "--kind", "eps-sweep"],
        &with(
            MARKED,
            &[
                "--eps", "30sec", "--eps-list", "30sec,10sec", "--x", "mean-s2:1:5:3", "--y", "sd-s2:0.25:2.5:3", "--truth",
                "4.17,4.05", "--replicates", "200",
            ],
        ),
    ));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(rows(&text).len(), 18);
    assert!(text.contains("fraction of cells with rate in [0.2, 0.8]"));

    let o = vpvc(&with(
        &["evaluate", "--kind", "eps-sweep"],
        &with(MARKED, &["--eps", "30sec", "--eps-list", "10sec,30sec", "--x", "mean-s2:1:5:2", "--y", "sd-s2:0.25:2.5:2"]),
    ));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coverage_single_and_grid() {
    let o = vpvc(&["coverage", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--replicates", "2000"]);
    assert!(o.status.success());
    let rate: f64 = field(&rows(&stdout(&o))[0], "rate").parse().unwrap();
    assert!((0.9..=1.0).contains(&rate));

    let o = vpvc(&[
        "coverage", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--x", "mean:1:5:2", "--y",
        "sd:0.5:2:2", "--replicates", "500",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("# grid average coverage"));
}

#[test]
fn output_to_missing_directory_fails_cleanly() {
    let o = vpvc(&["ssd", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "0.3", "--output", "/nonexistent/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!Path::new("/nonexistent/x.csv").exists());
}

#[test]
fn unreachable_target_is_a_budget_error() {
    // eps^2 underflows to zero, so no n can satisfy the strict inequality
    let o = vpvc(&["ssd", "--family", "poisson", "--mean", "2.5", "--sd", "1", "--eps", "1e-170"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}
