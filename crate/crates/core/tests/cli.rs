use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bergman-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn constant_subcommand() {
    let o = run(&["constant", "--weight", "step:a=1,b=4", "--p", "2", "--alpha", "0", "--family", "centered"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    assert!(header.contains(&"bekolle".to_string()));
    let row = rd.records().next().unwrap().unwrap();
    let b: f64 = row[header.iter().position(|h| h == "bekolle").unwrap()].parse().unwrap();
    assert_eq!(b, 1.5625);
}

#[test]
fn json_output_mirrors_columns() {
    let o = run(&["constant", "--weight", "power:gamma=0.5", "--p", "3", "--alpha", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v[0]["bekolle"].as_f64().unwrap() >= 1.0);
    let o = run(&["angle", "--alpha", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v[0]["measured_M"].as_f64().unwrap() - (1.0 + 2f64.sqrt())).abs() < 1e-8);
    assert!(v[0]["paper_formula_M"].is_number());
}

#[test]
fn sweep_subcommand() {
    let o = run(&["sweep", "--p", "1.5", "--alpha", "0", "--deltas", "0.25,0.125,0.0625"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "delta,bekolle,f_norm,pf_norm,ratio");
    assert_eq!(out.lines().count(), 4);
    let first: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(first[0], 0.25);
    assert!(String::from_utf8_lossy(&o.stderr).contains("slope"));
}

#[test]
fn dominate_subcommand_is_reproducible() {
    let a = run(&["dominate", "--alpha", "0.5", "--samples", "500", "--seed", "9"]);
    let b = run(&["--deterministic", "dominate", "--alpha", "0.5", "--samples", "500", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert_eq!(out.lines().next().unwrap(), "empirical_constant,bound,pass");
    assert!(out.lines().nth(1).unwrap().ends_with("true"));
}

#[test]
fn extrapolate_subcommand() {
    let o = run(&["extrapolate", "--p", "3", "--alpha", "0", "--weight", "step:a=1,b=3", "--trunc", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for key in ["claim:", "lhs:", "rhs:", "margin:", "family_size:", "worst_box:"] {
        assert_eq!(out.matches(key).count(), 4, "{key}");
    }
}

#[test]
fn bad_input_exits_with_two() {
    let o = run(&["constant", "--weight", "wobbly:c=1", "--p", "2", "--alpha", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown weight kind"));
    let o = run(&["constant", "--weight", "constant:c=1", "--p", "0.5", "--alpha", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["extrapolate", "--p", "2", "--alpha", "0", "--weight", "constant:c=1"]);
    assert_eq!(o.status.code(), Some(2));
}
