use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scanwatch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn polygon(name: &str) -> String {
    corpus().join(name).join("polygon.json").to_string_lossy().into_owned()
}

fn stdout_json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn explore_square_takes_one_scan() {
    let r = stdout_json(&run(&["explore", &polygon("square"), "scansearch"]));
    assert_eq!(r["S"], 1);
    assert_eq!(r["instance"], "square");
    assert_eq!(r["t"]["exact"], "1");
    assert_eq!(r["t"]["approx"], "1.000000");
    assert!(r["ratio"].is_null());
}

#[test]
fn explore_is_reproducible() {
    let args = ["explore", &polygon("comb3"), "scansearch", "--seed", "7"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn explore_reports_ratio_against_exact_oracle() {
    let r = stdout_json(&run(&["explore", &polygon("fig10_closed_south"), "--oracle-res", "4"]));
    assert_eq!(r["oracle"]["status"], "exact");
    let ratio: f64 = r["ratio"].as_str().unwrap().parse().unwrap();
    let t: f64 = r["t"]["approx"].as_str().unwrap().parse().unwrap();
    let opt: f64 = r["oracle"]["t"]["approx"].as_str().unwrap().parse().unwrap();
    assert!((ratio - t / opt).abs() < 1e-6);
}

#[test]
fn bad_polygon_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // a diagonal edge
    fs::write(&bad, r#"{"vertices":[["0","0"],["2","0"],["2","2"],["1","3"],["0","2"]],"start":["0","0"]}"#).unwrap();
    let o = run(&["explore", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let missing = run(&["explore", dir.path().join("none.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
    let unknown = run(&["explore", &polygon("square"), "teleport"]);
    assert_eq!(unknown.status.code(), Some(2));
}

fn count(hay: &str, needle: &str) -> usize {
    hay.matches(needle).count()
}

#[test]
fn svg_circles_every_scan() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig12", "comb3"] {
        let svg = dir.path().join(format!("{name}.svg"));
        let rep = dir.path().join(format!("{name}.json"));
        let o = run(&["explore", &polygon(name), "scansearch", "--svg", svg.to_str().unwrap(), "--json", rep.to_str().unwrap()]);
        assert!(o.status.success());
        let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
        let text = fs::read_to_string(&svg).unwrap();
        assert!(text.starts_with("<?xml"));
        assert!(text.trim_end().ends_with("</svg>"));
        assert_eq!(count(&text, "<circle"), r["S"].as_u64().unwrap() as usize);
        assert_eq!(count(&text, "<polygon"), 1);
        assert_eq!(count(&text, "<polyline"), 1);
        assert_eq!(count(&text, "stroke-dasharray"), r["extensions"].as_array().unwrap().len());
        assert_eq!(count(&text, r#"stroke="lightgray""#), r["search_segments"].as_array().unwrap().len());
        // every opened tag is closed or self-closing
        assert_eq!(count(&text, "<g "), count(&text, "</g>"));
        // render reproduces the same drawing from the report alone
        let again = dir.path().join("again.svg");
        assert!(run(&["render", rep.to_str().unwrap(), "-o", again.to_str().unwrap()]).status.success());
        assert_eq!(fs::read_to_string(&again).unwrap(), text);
    }
}

#[test]
fn comb_report_has_search_segments() {
    let r = stdout_json(&run(&["explore", &polygon("comb3")]));
    assert!(!r["search_segments"].as_array().unwrap().is_empty());
}

const HEADER: &str = "instance,strategy,vertices,c,a,a_k,context_valid,t,t_float,L,S,episodes,case_tags,\
assertions_checked,assertion_failures,max_searches_per_episode,oracle_status,oracle_t,ratio,bound,failed,error,wall_ms";

#[test]
fn bench_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["square", "lshape", "comb3"] {
        let to = dir.path().join(name);
        fs::create_dir(&to).unwrap();
        fs::copy(corpus().join(name).join("polygon.json"), to.join("polygon.json")).unwrap();
    }
    let csv = dir.path().join("out.csv");
    let o = bin()
        .args(["bench", dir.path().to_str().unwrap(), "scansearch,reflex", "--oracle-res", "4", "-o", csv.to_str().unwrap()])
        .env("SCANWATCH_WORKERS", "2")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>().join(","), HEADER);
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 6);
    let col = |name: &str| HEADER.split(',').position(|h| h == name).unwrap();
    let names: Vec<(&str, &str)> = rows.iter().map(|r| (&r[col("instance")], &r[col("strategy")])).collect();
    assert_eq!(names[0], ("comb3", "scansearch"));
    assert_eq!(names[5], ("square", "reflex"));
    for r in &rows {
        assert_eq!(&r[col("failed")], "false");
        let exact = &r[col("oracle_status")] == "exact";
        assert_eq!(exact, !r[col("ratio")].is_empty(), "ratio only with an exact oracle");
        if exact {
            let ratio: f64 = r[col("ratio")].parse().unwrap();
            let t: f64 = r[col("t_float")].parse().unwrap();
            assert!(ratio >= 1.0 - 1e-9 && ratio <= t);
        }
    }
    // 22 vertices is beyond the oracle's limit
    let comb = &rows[0];
    assert_eq!(&comb[col("oracle_status")], "too_large");
    assert!(comb[col("ratio")].is_empty());
}

#[test]
fn bench_flags_context_that_does_not_hold() {
    let o = run(&["bench", &polygon("square"), "scansearch", "--a", "1/2", "--a-k", "1/2", "--oracle-res", "0"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().contains(",true,"));
    let o = run(&["bench", &polygon("lshape"), "scansearch", "--a", "2", "--oracle-res", "0"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    let valid = row.split(',').nth(6).unwrap();
    assert_eq!(valid, "false");
}

#[test]
fn bench_unknown_strategy_is_a_failed_row() {
    let o = run(&["bench", &polygon("square"), "scansearch,teleport", "--oracle-res", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[2].contains("teleport") && lines[2].contains(",true,"));
}

#[test]
fn empty_corpus_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), format!("{HEADER}\n"));
}

#[test]
fn bounds_prints_table_value() {
    let o = run(&["bounds", "--a", "0.5"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("50.0000"));
    assert!(text.contains("group,row,k_zero,k_pos,bold,dominated_by"));
    let j = stdout_json(&run(&["bounds", "--a", "1/2", "--format", "json"]));
    assert_eq!(j["bound"], "50.0000");
    assert!(!j["catalog"].as_array().unwrap().is_empty());
}

#[test]
fn bounds_out_of_range_exits_2() {
    assert_eq!(run(&["bounds", "--a", "2"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "--a", "0.5", "--a-k", "0.75"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "--a", "x"]).status.code(), Some(2));
}

#[test]
fn gen_niche_writes_a_valid_polygon() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("niche.json");
    let o = run(&["gen-niche", "--depth", "2", "--delta", "1", "--d", "1", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    // the explorer re-validates the file on load
    let r = stdout_json(&run(&["explore", out.to_str().unwrap()]));
    assert_eq!(r["terminated_ok"], true);
    let f: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let n = f["vertices"].as_array().unwrap().len();
    assert!(n >= 8 && n.is_multiple_of(2));
}

#[test]
fn gen_niche_adaptive_resolves_every_layer() {
    let r = stdout_json(&run(&["gen-niche", "--depth", "3", "--adaptive", "scansearch"]));
    let res = r["resolutions"].as_array().unwrap();
    assert_eq!(res.len(), 3);
    for (i, x) in res.iter().enumerate() {
        assert!(x["scans"].as_u64().unwrap() as usize > i);
    }
    assert!(r["S"].as_u64().unwrap() >= 4);
}

#[test]
fn oracle_on_square() {
    let r = stdout_json(&run(&["oracle", &polygon("square"), "--res", "4"]));
    assert_eq!(r["status"], "exact");
    assert_eq!(r["t"]["exact"], "1");
    let big = run(&["oracle", &polygon("comb3")]);
    assert_eq!(big.status.code(), Some(2));
}
