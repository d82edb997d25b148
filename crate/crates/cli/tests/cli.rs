use std::io::Write;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_rootcomp");
const EXAMPLE: &str = "--n 4 --lambda fw:0,1,1,0 --mu fw:1,1,1,1 --beta 2..3 --N 1";
const RANK_TWO: &str = "--n 2 --lambda fw:2,2 --mu fw:2,2 --beta 1..2 --N 2";

fn run(args: &str) -> Output {
    Command::new(BIN).args(args.split_whitespace()).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn battery(contents: &str, format: &str) -> Output {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    Command::new(BIN)
        .args(["battery", f.path().to_str().unwrap(), "--format", format])
        .output()
        .unwrap()
}

fn json_lines(args: &str) -> Vec<serde_json::Value> {
    let o = run(&format!("{args} --format json-lines"));
    stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn item<'a>(rec: &'a serde_json::Value, name: &str) -> &'a serde_json::Value {
    rec["items"].as_array().unwrap().iter().find(|i| i["name"] == name).map(|i| &i["value"]).unwrap()
}

#[test]
fn golden_json() {
    let mut got = String::new();
    for c in ["check", "verify", "orbitdim", "disjoint", "mult"] {
        got.push_str(&stdout(&run(&format!("{c} {EXAMPLE} --format json-lines"))));
    }
    assert_eq!(got, include_str!("golden/example.jsonl"));

    let mut got = String::new();
    for c in ["check", "orbitdim", "disjoint", "mult"] {
        got.push_str(&stdout(&run(&format!("{c} {RANK_TWO} --format json-lines"))));
    }
    got.push_str(&stdout(&run("orbitdim --a 2 --format json-lines")));
    got.push_str(&stdout(&run("verify --a 2 --format json-lines")));
    assert_eq!(got, include_str!("golden/rank_two.jsonl"));
}

fn numbers(s: &str) -> Vec<String> {
    s.split(|c: char| !c.is_ascii_digit()).filter(|t| !t.is_empty()).map(String::from).collect()
}

#[test]
fn text_numbers_appear_in_json() {
    for args in [
        format!("check {EXAMPLE}"),
        format!("verify {EXAMPLE}"),
        format!("orbitdim {EXAMPLE}"),
        format!("disjoint {EXAMPLE}"),
        format!("mult {RANK_TWO}"),
        "orbitdim --a 3".to_string(),
    ] {
        let text = stdout(&run(&args));
        let json = stdout(&run(&format!("{args} --format json-lines")));
        let in_json = numbers(&json);
        for n in numbers(&text) {
            assert!(in_json.contains(&n), "{args}: {n} missing from json output");
        }
    }
}

#[test]
fn reference_values() {
    let recs = json_lines(&format!("orbitdim {EXAMPLE}"));
    assert_eq!(item(&recs[0], "xi.dim"), 30);
    assert_eq!(item(&recs[0], "xi.v_mod_w"), 18);
    assert_eq!(item(&recs[0], "xi_tilde.dim"), 30);
    let recs = json_lines(&format!("mult {RANK_TWO}"));
    assert_eq!(item(&recs[0], "multiplicity"), 3);
    let recs = json_lines(&format!("disjoint {RANK_TWO}"));
    assert_eq!(item(&recs[0], "verdict"), "disjoint");
    let recs = json_lines("orbitdim --a -1");
    assert_eq!(item(&recs[0], "xi(a).dim"), 11);
    assert_eq!(item(&recs[0], "derivative_tangent"), false);
}

#[test]
fn simple_root_cases() {
    let args = "--n 3 --lambda fw:0,1,0 --mu fw:0,1,0 --beta 2..2 --N 1";
    let recs = json_lines(&format!("verify {args}"));
    assert_eq!(item(&recs[0], "single_point"), true);
    let recs = json_lines(&format!("disjoint {args}"));
    assert_eq!(item(&recs[0], "verdict"), "unknown");
    assert!(run(&format!("disjoint {args}")).status.success());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&format!("check {EXAMPLE}")).status.code(), Some(0));
    // First condition fails.
    assert_eq!(run("check --n 2 --lambda fw:1,0 --mu fw:1,0 --beta 1..2 --N 1").status.code(), Some(1));
    // Root outside the rank, malformed coweight, missing flag.
    assert_eq!(run("check --n 2 --lambda fw:1,0 --mu fw:1,0 --beta 1..3 --N 1").status.code(), Some(2));
    assert_eq!(run("check --n 2 --lambda fw:1,x --mu fw:1,0 --beta 1..2 --N 1").status.code(), Some(2));
    assert_eq!(run("check --n 2 --lambda fw:1,0 --beta 1..2 --N 1").status.code(), Some(2));
    assert_eq!(run("verify --a 1").status.code(), Some(2));
    assert_eq!(run(&format!("orbitdim {EXAMPLE} --expect-dim 31")).status.code(), Some(1));
}

#[test]
fn case_keys_round_trip() {
    let recs = json_lines(&format!("check {EXAMPLE}"));
    let key = recs[0]["case"].as_str().unwrap().to_string();
    let flags: String = key
        .split(' ')
        .map(|kv| {
            let (k, v) = kv.split_once('=').unwrap();
            format!("--{k} {v} ")
        })
        .collect();
    let again = json_lines(&format!("check {flags}"));
    assert_eq!(again[0]["case"].as_str().unwrap(), key);
}

#[test]
fn empty_battery() {
    let o = battery("# nothing here\n\n", "json-lines");
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["cases"], 0);
}

#[test]
fn battery_with_fabricated_claim() {
    let text = format!("mult {RANK_TWO} --expect-mult 3\nmult {RANK_TWO} --expect-mult 4\n");
    let o = battery(&text, "text");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("1 passed, 1 failed"));
}

#[test]
fn battery_parse_error() {
    let o = battery("orbitdim --n 2 --bogus\n", "text");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn battery_is_order_deterministic() {
    let text = format!("mult {RANK_TWO}\ncheck {EXAMPLE}\nverify --a 2\ncheck {RANK_TWO}\n");
    let a = stdout(&battery(&text, "json-lines"));
    let b = stdout(&battery(&text, "json-lines"));
    assert_eq!(a, b);
    let cases: Vec<String> = a
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter_map(|v| v["case"].as_str().map(String::from))
        .collect();
    let mut sorted = cases.clone();
    sorted.sort();
    assert_eq!(cases, sorted);
}

#[test]
fn shipped_battery_passes() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/battery/reference.txt");
    let o = Command::new(BIN).args(["battery", path]).output().unwrap();
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{}", out.lines().filter(|l| l.contains("FAIL") || l.contains("MISMATCH")).collect::<Vec<_>>().join("\n"));
    assert!(out.contains(" 0 failed"));
}
