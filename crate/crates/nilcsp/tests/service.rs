use std::net::SocketAddr;
use std::sync::Arc;

use nilcsp::core::{observable_traces, parse, ProcessTerm, Trace};
use nilcsp::server;
use nilcsp::session::SessionStore;
use reqwest::{Client, StatusCode};
use serde_json::{json, Value};

const VMS: &str = "VMS = coin -> choc -> coin -> choc -> STOP\n";

async fn start() -> String {
    let listener = server::bind(SocketAddr::from(([127, 0, 0, 1], 0))).await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(server::serve(listener, Arc::new(SessionStore::default())));
    format!("http://{addr}")
}

async fn create(client: &Client, base: &str, source: &str, process: &str) -> (StatusCode, Value) {
    let resp = client
        .post(format!("{base}/sessions"))
        .json(&json!({ "source": source, "process": process }))
        .send()
        .await
        .unwrap();
    (resp.status(), resp.json().await.unwrap())
}

async fn step(client: &Client, base: &str, id: &str, event: &str) -> (StatusCode, Value) {
    let resp = client.post(format!("{base}/sessions/{id}/step")).json(&json!({ "event": event })).send().await.unwrap();
    (resp.status(), resp.json().await.unwrap())
}

#[tokio::test]
async fn health() {
    let base = start().await;
    let resp = reqwest::get(format!("{base}/health")).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    assert_eq!(resp.text().await.unwrap(), "ok");
}

#[tokio::test]
async fn create_views() {
    let base = start().await;
    let client = Client::new();
    let (status, v) = create(&client, &base, VMS, "VMS").await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(v.as_object().unwrap().keys().collect::<Vec<_>>(), ["id", "status", "trace", "events"]);
    assert_eq!((&v["status"], &v["trace"], &v["events"]), (&json!("live"), &json!([]), &json!(["coin"])));

    let (_, stop) = create(&client, &base, "S = mu X . nil -> X", "S").await;
    assert_eq!((&stop["status"], &stop["events"]), (&json!("quiescent"), &json!([])));

    let (_, skip) = create(&client, &base, "K = SKIP", "K").await;
    assert_eq!((&skip["status"], &skip["events"]), (&json!("terminating"), &json!(["tick"])));
}

#[tokio::test]
async fn create_errors() {
    let base = start().await;
    let client = Client::new();
    let (status, v) = create(&client, &base, "P = ->", "P").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!((&v["line"], &v["column"], &v["kind"]), (&json!(1), &json!(5), &json!("syntax")));

    let (status, _) = create(&client, &base, VMS, "VMX").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn vms_session_lifecycle() {
    let base = start().await;
    let client = Client::new();
    let (_, created) = create(&client, &base, VMS, "VMS").await;
    let id = created["id"].as_str().unwrap().to_owned();
    assert!(id.len() >= 32);

    let fetched: Value = client.get(format!("{base}/sessions/{id}")).send().await.unwrap().json().await.unwrap();
    assert_eq!(fetched, created);

    let (status, v) = step(&client, &base, &id, "coin").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!((&v["trace"], &v["events"]), (&json!(["coin"]), &json!(["choc"])));

    let (status, v) = step(&client, &base, &id, "coin").await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["offered"], json!(["choc"]));
    assert!(v["error"].is_string());

    for e in ["choc", "coin", "choc"] {
        assert_eq!(step(&client, &base, &id, e).await.0, StatusCode::OK);
    }
    let v: Value = client.get(format!("{base}/sessions/{id}")).send().await.unwrap().json().await.unwrap();
    assert_eq!((&v["status"], &v["events"]), (&json!("quiescent"), &json!([])));
    assert_eq!(v["trace"], json!(["coin", "choc", "coin", "choc"]));

    let reset: Value = client.post(format!("{base}/sessions/{id}/reset")).send().await.unwrap().json().await.unwrap();
    assert_eq!(reset, created);

    let resp = client.delete(format!("{base}/sessions/{id}")).send().await.unwrap();
    assert_eq!(resp.status(), StatusCode::NO_CONTENT);
    let resp = client.get(format!("{base}/sessions/{id}")).send().await.unwrap();
    assert_eq!(resp.status(), StatusCode::NOT_FOUND);
    assert_eq!(step(&client, &base, &id, "coin").await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn not_offered_on_a_fresh_session() {
    let base = start().await;
    let client = Client::new();
    let (_, v) = create(&client, &base, VMS, "VMS").await;
    let (status, body) = step(&client, &base, v["id"].as_str().unwrap(), "toffee").await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["offered"], json!(["coin"]));
}

#[tokio::test]
async fn cors_preflight() {
    let base = start().await;
    let resp = Client::new()
        .request(reqwest::Method::OPTIONS, format!("{base}/sessions"))
        .header("Origin", "http://localhost:5173")
        .header("Access-Control-Request-Method", "POST")
        .header("Access-Control-Request-Headers", "content-type")
        .send()
        .await
        .unwrap();
    assert!(resp.status().is_success());
    assert_eq!(resp.headers()["access-control-allow-origin"], "*");
}

#[tokio::test]
async fn concurrent_sessions_are_independent() {
    let base = start().await;
    let client = Client::new();
    let mut ids = Vec::new();
    for _ in 0..8 {
        ids.push(create(&client, &base, VMS, "VMS").await.1["id"].as_str().unwrap().to_owned());
    }
    let tasks: Vec<_> = ids
        .iter()
        .cloned()
        .map(|id| {
            let (client, base) = (client.clone(), base.clone());
            tokio::spawn(async move {
                for e in ["coin", "choc", "coin", "choc"] {
                    assert_eq!(step(&client, &base, &id, e).await.0, StatusCode::OK);
                }
            })
        })
        .collect();
    for t in tasks {
        t.await.unwrap();
    }
    for id in ids {
        let v: Value = client.get(format!("{base}/sessions/{id}")).send().await.unwrap().json().await.unwrap();
        assert_eq!(v["status"], "quiescent");
    }
}

#[tokio::test]
async fn racing_steps_on_one_session_each_take_one_transition() {
    let base = start().await;
    let client = Client::new();
    let id = create(&client, &base, VMS, "VMS").await.1["id"].as_str().unwrap().to_owned();
    // Only one of the racing "coin" steps can succeed.
    let tasks: Vec<_> = (0..6)
        .map(|_| {
            let (client, base, id) = (client.clone(), base.clone(), id.clone());
            tokio::spawn(async move { step(&client, &base, &id, "coin").await.0 })
        })
        .collect();
    let mut ok = 0;
    for t in tasks {
        match t.await.unwrap() {
            StatusCode::OK => ok += 1,
            StatusCode::CONFLICT => {}
            other => panic!("{other}"),
        }
    }
    assert_eq!(ok, 1);
}

#[test]
fn recorded_traces_are_replayable() {
    // Walk every session along its first offered event and check each trace
    // against the trace set of the initial process.
    let sources = [
        (VMS, "VMS"),
        ("VMONE = coin -> (choc -> SKIP | toffee -> SKIP)", "VMONE"),
        ("P = a -> P || b -> P", "P"),
        ("P alpha {a, b} = a -> P\nQ = (P || b -> a -> Q)", "Q"),
    ];
    let store = SessionStore::default();
    for (source, process) in sources {
        let defs = parse(source).unwrap().definitions.desugared();
        let name = defs.get_str(process).unwrap().0.clone();
        let id = store.create(source, process).unwrap().id;
        for _ in 0..6 {
            let view = store.get(&id).unwrap();
            let trace: Trace = Trace::parse(&format!("<{}>", view.trace.join(","))).unwrap();
            let set = observable_traces(&ProcessTerm::Ref(name.clone()), &defs, trace.len()).unwrap();
            assert!(set.contains(&trace), "{process}: {trace}");
            let Some(next) = view.events.first() else { break };
            store.step(&id, next).unwrap();
        }
    }
}
