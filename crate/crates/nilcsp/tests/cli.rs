use std::io::Write;
use std::net::TcpListener;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn nilcsp(args: &[&str]) -> Output {
    nilcsp_with_input(args, "")
}

fn nilcsp_with_input(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_nilcsp"))
        .args(args)
        .env_remove("NILCSP_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_owned()
}

#[test]
fn parse_prints_definitions() {
    let o = nilcsp(&["parse", &path("vms.csp")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "VMS = coin -> choc -> coin -> choc -> STOP\n");
}

#[test]
fn parse_reports_position_of_syntax_errors() {
    let o = nilcsp(&["parse", &path("bad.csp")]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(":1:5:"), "{err}");
}

#[test]
fn empty_file_is_valid() {
    let o = nilcsp(&["parse", &path("empty.csp")]);
    assert_eq!((code(&o), stdout(&o)), (0, String::new()));
}

#[test]
fn unbound_names_are_semantic_errors() {
    assert_eq!(code(&nilcsp(&["parse", &path("unbound.csp")])), 3);
    assert_eq!(code(&nilcsp(&["traces", &path("vms.csp"), "--process", "NOPE"])), 3);
    assert_eq!(code(&nilcsp(&["classify", &path("vms.csp"), "NOPE"])), 3);
    assert_eq!(code(&nilcsp(&["animate", &path("vms.csp"), "NOPE"])), 3);
}

#[test]
fn tick_under_parallel_is_a_semantic_error() {
    assert_eq!(code(&nilcsp(&["traces", &path("tickpar.csp"), "--process", "P"])), 3);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&nilcsp(&[])), 2);
    assert_eq!(code(&nilcsp(&["traces", &path("vms.csp")])), 2);
    assert_eq!(code(&nilcsp(&["parse", &path("missing.csp")])), 2);
}

#[test]
fn vms_traces() {
    let o = nilcsp(&["traces", &path("vms.csp"), "--process", "VMS", "--depth", "8"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "<>\n<coin>\n<coin,choc>\n<coin,choc,coin>\n<coin,choc,coin,choc>\n");
}

#[test]
fn traces_at_depth_zero() {
    let o = nilcsp(&["traces", &path("vms.csp"), "--process", "VMS", "--depth", "0"]);
    assert_eq!((code(&o), stdout(&o)), (0, "<>\n".to_owned()));
}

#[test]
fn stop_has_only_the_empty_trace() {
    let o = nilcsp(&["traces", &path("stop.csp"), "--process", "S", "--depth", "8"]);
    assert_eq!((code(&o), stdout(&o)), (0, "<>\n".to_owned()));
}

#[test]
fn traces_json() {
    let o = nilcsp(&["traces", &path("vms.csp"), "--process", "VMS", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "{\"process\":\"VMS\",\"depth\":8,\"truncated\":false,\"traces\":\
         [\"<>\",\"<coin>\",\"<coin,choc>\",\"<coin,choc,coin>\",\"<coin,choc,coin,choc>\"]}\n"
    );
    let skip = nilcsp(&["traces", &path("skip.csp"), "--process", "K", "--depth", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&skip.stdout).unwrap();
    assert_eq!(v["truncated"], true);
    assert_eq!(v["traces"], serde_json::json!(["<>", "<tick>", "<tick,tick>"]));
}

#[test]
fn equiv_verdicts() {
    let vms = path("vms.csp");
    let o = nilcsp(&["equiv", &vms, "nil -> VMS", "VMS"]);
    assert_eq!((code(&o), stdout(&o)), (0, "equivalent (depth 8)\n".to_owned()));

    let o = nilcsp(&["equiv", &vms, "mu X . nil -> X", "nil -> coin -> STOP"]);
    assert_eq!((code(&o), stdout(&o)), (1, "NOT equivalent; witness <coin>\n".to_owned()));

    let o = nilcsp(&["equiv", &vms, "VMS", "VMS", "--depth", "3"]);
    assert_eq!((code(&o), stdout(&o)), (0, "equivalent (depth 3)\n".to_owned()));

    assert_eq!(code(&nilcsp(&["equiv", &vms, "a ->", "VMS"])), 2);
    assert_eq!(code(&nilcsp(&["equiv", &vms, "NOPE", "VMS"])), 3);
}

#[test]
fn classify_statuses() {
    for (file, name, status) in
        [("stop.csp", "S", "quiescent"), ("skip.csp", "K", "terminating"), ("vms.csp", "VMS", "live")]
    {
        let o = nilcsp(&["classify", &path(file), name]);
        assert_eq!((code(&o), stdout(&o)), (0, format!("{status}\n")));
    }
}

#[test]
fn check_laws_small_run() {
    let o = nilcsp(&["check-laws", "--samples", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().filter(|l| !l.starts_with(' ')).collect();
    assert_eq!(lines.len(), 11, "{out}");
    assert!(lines.iter().all(|l| l.contains(" passed ")), "{out}");
}

#[test]
fn check_laws_json_is_deterministic() {
    let args = ["check-laws", "--samples", "20", "--size", "4", "--depth", "4", "--seed", "9", "--json"];
    let a = nilcsp(&args);
    let b = nilcsp(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 11);
    let first = reports[0].as_object().unwrap();
    assert_eq!(first.keys().collect::<Vec<_>>(), ["law", "instances", "passed", "counterexamples"]);
    assert_eq!(reports[3]["law"], "L4");
    assert!(reports[3]["note"].is_string());
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_nilcsp"));
        cmd.args(["check-laws", "--samples", "5", "--size", "3", "--json"]).args(extra);
        match env {
            Some(seed) => cmd.env("NILCSP_SEED", seed),
            None => cmd.env_remove("NILCSP_SEED"),
        };
        String::from_utf8(cmd.output().unwrap().stderr).unwrap()
    };
    assert_eq!(run(Some("77"), &[]), run(None, &["--seed", "77"]));
    assert!(run(Some("77"), &[]).contains("seed 77"));
    assert!(run(None, &[]).contains("seed 42"));
    assert_eq!(run(Some("77"), &["--seed", "42"]), run(None, &[]));
}

#[test]
fn animate_vms_to_stop() {
    let o = nilcsp_with_input(&["animate", &path("vms.csp"), "VMS"], "1\n1\n1\n1\nq\n");
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("trace: <coin,choc,coin,choc>\nstatus: quiescent\nSTOPPED (only nil remains)\n"), "{out}");
}

#[test]
fn animate_stop_is_stopped_immediately() {
    let o = nilcsp_with_input(&["animate", &path("stop.csp"), "S"], "q\n");
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "trace: <>\nstatus: quiescent\nSTOPPED (only nil remains)\n> ");
}

#[test]
fn animate_vmone_terminates() {
    let o = nilcsp_with_input(&["animate", &path("vmone.csp"), "VMONE"], "coin\ntoffee\n");
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("trace: <coin,toffee>\nstatus: terminating\n  1) tick\n"));
}

#[test]
fn serve_on_a_busy_port_fails() {
    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    let o = nilcsp(&["serve", "--port", &port]);
    assert_eq!(code(&o), 2);
}
