mod common;

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

use common::{call, config_path, core_fixtures, request, state, untimed, MINIMAL, RICH};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fair-assess"));
    c.env("RUST_LOG", "warn").env_remove("FAIR_ASSESS_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin()
        .arg("--config")
        .arg(config_path())
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[tokio::test(flavor = "multi_thread")]
async fn evaluate_json_equals_http_body() {
    let st = state();
    for (id, plugin) in [(RICH, "institutional"), (MINIMAL, "generic")] {
        let o = run(&[
            "evaluate", "--id", id, "--plugin", plugin, "--lang", "en", "--format", "json",
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let cli: Value = serde_json::from_slice(&o.stdout).unwrap();
        let (_, http) = call(&st, "POST", "/v1.0/rda/rda_all", Some(&request(id, plugin))).await;
        assert_eq!(untimed(cli), untimed(http), "{id}");
    }
}

#[test]
fn evaluate_writes_markdown_and_html() {
    let dir = tempfile::tempdir().unwrap();
    for (fmt, needle) in [("markdown", "| RDA-F1-01M"), ("html", "<!DOCTYPE html>")] {
        let out = dir.path().join(format!("r.{fmt}"));
        let o = run(&[
            "evaluate",
            "--id",
            RICH,
            "--plugin",
            "institutional",
            "--format",
            fmt,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(text.contains(needle), "{fmt}");
        assert!(text.matches("RDA-").count() >= 41);
    }
}

#[test]
fn batch_with_one_unreachable_id() {
    let dir = tempfile::tempdir().unwrap();
    let ids = core_fixtures().join("repository/ids.txt");
    let o = run(&[
        "batch",
        "--input",
        ids.to_str().unwrap(),
        "--plugin",
        "institutional",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    let mut reports: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    reports.sort();
    assert_eq!(reports, ["10261_900001.json", "10261_900002.json"]);

    let mut rdr = csv::Reader::from_path(dir.path().join("summary.csv")).unwrap();
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(&headers[..7], ["id", "status", "total", "F", "A", "I", "R"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][1], "ok");
    assert!((rows[0][2].parse::<f64>().unwrap() - 6600.0 / 68.0).abs() < 1e-9);
    assert_eq!(&rows[2][0], "10261/900003");
    assert_eq!(&rows[2][1], "error");
    assert!(rows[2][2].is_empty());
    assert!(!rows[2][8].is_empty());
}

#[test]
fn exit_codes_per_error_class() {
    // unknown plugin
    assert_eq!(
        code(&run(&["evaluate", "--id", RICH, "--plugin", "nope"])),
        3
    );
    // nothing reachable
    assert_eq!(
        code(&run(&[
            "evaluate",
            "--id",
            "10261/900003",
            "--plugin",
            "generic"
        ])),
        2
    );
    // unreadable configuration
    let o = bin()
        .args([
            "--config",
            "/nonexistent/service.yaml",
            "evaluate",
            "--id",
            RICH,
        ])
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    // invalid configuration
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.yaml");
    std::fs::write(&bad, "service:\n  pass_threshold: 300\n").unwrap();
    let o = bin()
        .arg("--config")
        .arg(&bad)
        .args(["evaluate", "--id", RICH])
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    // batch over an existing file with a bad plugin aborts before any report
    let ids = core_fixtures().join("repository/ids.txt");
    let o = run(&[
        "batch",
        "--input",
        ids.to_str().unwrap(),
        "--plugin",
        "nope",
        "--out",
        dir.path().join("b").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn export_ontology_writes_turtle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tests.ttl");
    let o = run(&["export-ontology", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let ttl = std::fs::read_to_string(&out).unwrap();
    let triples: Vec<_> = oxttl::TurtleParser::new()
        .for_slice(ttl.as_bytes())
        .collect::<Result<_, _>>()
        .unwrap();
    let n = triples.len();
    assert!(n > 41 * 3);

    let o = run(&[
        "export-ontology",
        "--out",
        out.to_str().unwrap(),
        "--base-namespace",
        "not a uri",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn serve_on_ephemeral_port() {
    let mut child = bin()
        .arg("--config")
        .arg(config_path())
        .args(["serve", "--port", "0"])
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap())
        .read_line(&mut line)
        .unwrap();
    let addr = line
        .trim()
        .strip_prefix("listening on ")
        .expect(&line)
        .to_string();
    assert!(!addr.ends_with(":0"), "{addr}");

    let mut s = TcpStream::connect(&addr).unwrap();
    write!(
        s,
        "GET /health HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n"
    )
    .unwrap();
    let mut resp = String::new();
    s.read_to_string(&mut resp).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(resp.starts_with("HTTP/1.1 200"), "{resp}");
    assert!(resp.contains(env!("CARGO_PKG_VERSION")));
}
