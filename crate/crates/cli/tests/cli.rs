use std::path::Path;
use std::process::{Command, Output};

use tropenum_core::reports::{load_document, Document};

fn tropenum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropenum")).args(args).env_remove("TROPENUM_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn count_line() {
    let v = json(&tropenum(&["count", "--fan", "p2", "--degree", "1"]));
    assert_eq!(v["schema"], "tropenum.count/1");
    assert_eq!(v["n_trop"], 1);
}

#[test]
fn count_dp6_anticanonical() {
    let v = json(&tropenum(&["count", "--fan", "dp6", "--degree", "anticanonical", "--seed", "1"]));
    assert_eq!(v["n_trop"], 12);
    assert_eq!(v["w_trop"], 8);
    let w = json(&tropenum(&["welschinger", "--fan", "dp6", "--degree", "anticanonical", "--seed", "1"]));
    assert_eq!(v, w);
}

#[test]
fn count_under_max_convention() {
    let v = json(&tropenum(&["count", "--fan", "p2", "--degree", "2", "--convention", "max", "--seed", "4"]));
    assert_eq!(v["n_trop"], 1);
    assert_eq!(v["rays"], serde_json::json!([[1, 1], [-1, 0], [0, -1]]));
    let v = json(&tropenum(&["count", "--fan", "p2", "--degree", "1,1,1", "--convention", "max"]));
    assert_eq!(v["n_trop"], 1);
}

#[test]
fn seed_from_environment() {
    let a = Command::new(env!("CARGO_BIN_EXE_tropenum"))
        .args(["trees", "--k", "2"])
        .env("TROPENUM_SEED", "9")
        .output()
        .unwrap();
    let b = tropenum(&["trees", "--k", "2", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 9);
}

#[test]
fn potential_without_points() {
    let o = tropenum(&["potential", "--fan", "p2", "--k", "0", "--q", "10,7"]);
    let v = json(&o);
    assert_eq!(v["text"], "y0 + x2 + x1 + x0");
    assert_eq!(v["classical"], "y0 + x2 + x1 + x0");
}

#[test]
fn scatter_is_consistent() {
    let v = json(&tropenum(&["scatter", "--fan", "p2", "--k", "2", "--seed", "3"]));
    assert_eq!(v["consistency"]["consistent"], true);
    assert!(!v["diagram"]["walls"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_byte_identical() {
    for args in [
        &["count", "--fan", "p2", "--degree", "2", "--seed", "5"][..],
        &["scatter", "--k", "2", "--seed", "3"][..],
        &["potential", "--k", "1", "--seed", "2", "--q", "301/7,-5/3"][..],
        &["disks", "--k", "2", "--seed", "2", "--q", "301/7,-5/3"][..],
    ] {
        let a = tropenum(args);
        let b = tropenum(args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn jobs_do_not_change_output() {
    let a = tropenum(&["scatter", "--k", "3", "--seed", "2"]);
    let b = tropenum(&["scatter", "--k", "3", "--seed", "2", "--jobs", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = tropenum(&["count", "--fan", "dp6", "--degree", "anticanonical", "--seed", "2"]);
    let b = tropenum(&["count", "--fan", "dp6", "--degree", "anticanonical", "--seed", "2", "--jobs", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

fn round_trip(args: &[&str]) -> Document {
    let o = tropenum(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    load_document(&stdout(&o)).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

#[test]
fn every_document_reloads() {
    assert!(matches!(round_trip(&["count", "--degree", "2"]), Document::Count(_)));
    assert!(matches!(round_trip(&["trees", "--k", "2", "--seed", "3"]), Document::Trees(_)));
    assert!(matches!(round_trip(&["disks", "--k", "1", "--q", "3/2,-7/5"]), Document::Disks(_)));
    assert!(matches!(round_trip(&["scatter", "--k", "2", "--seed", "3"]), Document::Scatter(_)));
    assert!(matches!(round_trip(&["potential", "--k", "2", "--q", "3/2,-7/5"]), Document::Potential(_)));
    assert!(matches!(round_trip(&["phi-check", "--degree", "2", "--seed", "2"]), Document::Phi(_)));
    assert!(matches!(
        round_trip(&["degenerate", "--fan", "dp6", "--degree", "anticanonical", "--seed", "1"]),
        Document::Degenerate(_)
    ));
}

fn well_formed_svg(p: &Path) {
    let s = std::fs::read_to_string(p).unwrap();
    assert!(s.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(s.trim_end().ends_with("</svg>"));
    assert_eq!(s.matches("<svg").count(), 1);
    for line in s.lines().skip(1).filter(|l| l.trim_start().starts_with('<') && !l.contains("</svg>")) {
        let l = line.trim();
        assert!(l.ends_with("/>") || l.ends_with("</text>"), "{l}");
    }
    for num in s.split('"').filter(|t| t.parse::<f64>().is_ok() && t.contains('.')) {
        assert_eq!(num.split('.').nth(1).unwrap().len(), 6, "{num}");
    }
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 4] = [
        ("scatter", &["scatter", "--k", "2", "--seed", "3"]),
        ("potential", &["potential", "--k", "2", "--q", "3/2,-7/5"]),
        ("count", &["count", "--degree", "3", "--seed", "7"]),
        ("degenerate", &["degenerate", "--fan", "dp6", "--degree", "anticanonical"]),
    ];
    for (name, args) in cases {
        let js = dir.path().join(format!("{name}.json"));
        let svg = dir.path().join(format!("{name}.svg"));
        let mut a: Vec<&str> = args.to_vec();
        let js_s = js.to_str().unwrap();
        a.extend(["--out", js_s]);
        let o = tropenum(&a);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
        let r = tropenum(&["render", js_s, svg.to_str().unwrap()]);
        assert!(r.status.success(), "{name}: {}", String::from_utf8_lossy(&r.stderr));
        well_formed_svg(&svg);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(tropenum(&["--help"]).status.code(), Some(0));
    assert_eq!(tropenum(&["--version"]).status.code(), Some(0));
    assert_eq!(tropenum(&["count"]).status.code(), Some(1));
    assert_eq!(tropenum(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(tropenum(&["count", "--degree", "1,2,3"]).status.code(), Some(1));
    assert_eq!(tropenum(&["count", "--fan", "nowhere.json", "--degree", "1"]).status.code(), Some(1));
    assert_eq!(tropenum(&["potential", "--q", "1"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = dir.path().join("o.svg");
    let o = tropenum(&["render", bad.to_str().unwrap(), out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn q_at_a_marked_point_exits_2() {
    let v = json(&tropenum(&["trees", "--k", "1", "--seed", "6"]));
    let p = &v["points"][0];
    let q = format!("{},{}", p[0].as_str().unwrap(), p[1].as_str().unwrap());
    let o = tropenum(&["potential", "--k", "1", "--seed", "6", "--q", &q]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let o = tropenum(&["disks", "--k", "1", "--seed", "6", "--q", &q]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn custom_fan_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("fan.json");
    std::fs::write(&f, r#"{"name":"square","rays":[[1,0],[0,1],[-1,0],[0,-1]]}"#).unwrap();
    let v = json(&tropenum(&["count", "--fan", f.to_str().unwrap(), "--degree", "1,1,1,1"]));
    assert_eq!(v["fan"], "square");
    assert_eq!(v["n_trop"], 1);
}
