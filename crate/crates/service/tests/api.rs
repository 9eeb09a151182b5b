use std::path::{Path, PathBuf};

use reqwest::StatusCode;
use serde_json::{json, Value};

use qubitquest_service::{spawn_local, AppState, Config};

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn config(data_dir: &Path, shuffle: bool) -> Config {
    let root = repo_root();
    Config {
        port: 0,
        bind: "127.0.0.1".into(),
        data_dir: data_dir.to_path_buf(),
        levels_dir: root.join("levels"),
        quizzes_dir: root.join("quizzes"),
        static_dir: None,
        shuffle_options: shuffle,
    }
}

struct Client {
    http: reqwest::Client,
    base: String,
    token: Option<String>,
}

impl Client {
    async fn start(data_dir: &Path, shuffle: bool) -> Client {
        let state = AppState::load(&config(data_dir, shuffle)).unwrap();
        let (addr, _) = spawn_local(state).await.unwrap();
        Client {
            http: reqwest::Client::new(),
            base: format!("http://{addr}"),
            token: None,
        }
    }

    async fn send(&self, method: reqwest::Method, path: &str, body: Option<Value>) -> (StatusCode, Value) {
        let mut req = self.http.request(method, format!("{}{path}", self.base));
        if let Some(t) = &self.token {
            req = req.bearer_auth(t);
        }
        if let Some(b) = body {
            req = req.json(&b);
        }
        let resp = req.send().await.unwrap();
        let status = resp.status();
        let text = resp.text().await.unwrap();
        (status, serde_json::from_str(&text).unwrap_or(Value::String(text)))
    }

    async fn get(&self, path: &str) -> (StatusCode, Value) {
        self.send(reqwest::Method::GET, path, None).await
    }

    async fn post(&self, path: &str, body: Value) -> (StatusCode, Value) {
        self.send(reqwest::Method::POST, path, Some(body)).await
    }

    async fn sign_up(&mut self, nickname: &str) -> Value {
        let (status, body) = self.post("/api/profiles", json!({ "nickname": nickname })).await;
        assert_eq!(status, StatusCode::CREATED, "{body}");
        self.token = Some(body["token"].as_str().unwrap().to_string());
        body
    }

    async fn start_level(&self, game: &str, level: u8) -> Value {
        let (status, body) = self.post(&format!("/api/games/{game}/levels/{level}/session"), json!({})).await;
        assert_eq!(status, StatusCode::CREATED, "{body}");
        body
    }

    async fn play(&self, game: &str, level: u8, m: Value) -> (StatusCode, Value) {
        self.post(&format!("/api/games/{game}/levels/{level}/moves"), m).await
    }
}

fn bloch_solution(level: u8) -> Vec<&'static str> {
    match level {
        1 => vec!["X"],
        2 => vec!["H"],
        3 => vec!["Z"],
        4 => vec!["S"],
        5 => vec!["X", "H"],
        6 => vec!["H", "Z"],
        _ => unreachable!(),
    }
}

async fn win_bloch(c: &Client, level: u8) -> Value {
    c.start_level("bloch", level).await;
    let mut last = Value::Null;
    for g in bloch_solution(level) {
        let (status, body) = c.play("bloch", level, json!({ "gate": g })).await;
        assert_eq!(status, StatusCode::OK, "{body}");
        last = body;
    }
    assert_eq!(last["status"], "Won");
    last
}

#[tokio::test]
async fn auth_and_nickname_rules() {
    let data = tempfile::tempdir().unwrap();
    let mut c = Client::start(data.path(), false).await;
    assert_eq!(c.get("/api/profile").await.0, StatusCode::UNAUTHORIZED);
    assert_eq!(c.post("/api/profiles", json!({ "nickname": "   " })).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(
        c.post("/api/profiles", json!({ "nickname": "x".repeat(21) })).await.0,
        StatusCode::BAD_REQUEST
    );
    let created = c.sign_up("  Schrödinger ").await;
    assert_eq!(created["nickname"], "Schrödinger");
    let (status, profile) = c.get("/api/profile").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(profile["total_points"], 0);
    assert_eq!(profile["circuits_unlocked"], false);
    assert!(profile.get("token_sha256").is_none());

    c.token = Some("0".repeat(64));
    assert_eq!(c.get("/api/profile").await.0, StatusCode::UNAUTHORIZED);
}

#[tokio::test]
async fn bloch_win_awards_once_and_replays_award_half() {
    let data = tempfile::tempdir().unwrap();
    let mut c = Client::start(data.path(), false).await;
    c.sign_up("ada").await;

    let won = win_bloch(&c, 5).await;
    assert_eq!(won["award"], json!({ "raw_score": 10, "awarded": 10, "replay": false }));
    assert_eq!(won["total_points"], 10);

    // Moving after a win is a conflict and awards nothing further.
    let (status, _) = c.play("bloch", 5, json!({ "gate": "X" })).await;
    assert_eq!(status, StatusCode::CONFLICT);

    // Replay with two wasted moves: raw 8, half of it awarded.
    c.start_level("bloch", 5).await;
    for g in ["H", "H", "X", "H"] {
        c.play("bloch", 5, json!({ "gate": g })).await;
    }
    let (_, session) = c.get("/api/games/bloch/levels/5/session").await;
    assert_eq!(session["award"], json!({ "raw_score": 8, "awarded": 4, "replay": true }));
    let (_, profile) = c.get("/api/profile").await;
    assert_eq!(profile["total_points"], 14);
    assert_eq!(profile["ledger"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn move_errors_map_to_status_codes() {
    let data = tempfile::tempdir().unwrap();
    let mut c = Client::start(data.path(), false).await;
    c.sign_up("bob").await;

    assert_eq!(c.play("bloch", 1, json!({ "gate": "X" })).await.0, StatusCode::NOT_FOUND);
    assert_eq!(c.get("/api/games/chess/levels/1").await.0, StatusCode::NOT_FOUND);
    assert_eq!(c.get("/api/games/bloch/levels/13").await.0, StatusCode::NOT_FOUND);

    c.start_level("bloch", 1).await;
    let (status, body) = c.play("bloch", 1, json!({ "gate": "H" })).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["error"].as_str().unwrap().contains("not allowed"));
    assert_eq!(c.play("bloch", 1, json!({ "gate": "Q" })).await.0, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(
        c.play("bloch", 1, json!({ "gate": "X", "session_id": "stale" })).await.0,
        StatusCode::CONFLICT
    );

    // Entanglement with decoherence: five wrong moves fill the meter.
    c.start_level("entanglement", 4).await;
    let (_, level) = c.get("/api/games/entanglement/levels/4").await;
    let first = level["course_a"][0]["required_action"].as_str().unwrap().to_string();
    let wrong = ["Jump", "Crawl", "Balance", "Weave", "Climb", "Pause"]
        .into_iter()
        .find(|a| *a != first)
        .unwrap();
    let mut last = Value::Null;
    for _ in 0..5 {
        let (status, body) = c.play("entanglement", 4, json!({ "action": wrong })).await;
        assert_eq!(status, StatusCode::OK);
        last = body;
    }
    assert_eq!(last["status"], "Failed");
    assert_eq!(last["state"]["decoherence"], 100);
    assert_eq!(
        c.play("entanglement", 4, json!({ "action": first })).await.0,
        StatusCode::CONFLICT
    );
}

#[tokio::test]
async fn circuits_unlock_after_six_bloch_levels() {
    let data = tempfile::tempdir().unwrap();
    let mut c = Client::start(data.path(), false).await;
    c.sign_up("cleo").await;

    for level in 1..=5 {
        win_bloch(&c, level).await;
    }
    assert_eq!(c.get("/api/games/circuits/levels/1").await.0, StatusCode::FORBIDDEN);
    assert_eq!(
        c.post("/api/games/circuits/levels/1/session", json!({})).await.0,
        StatusCode::FORBIDDEN
    );
    win_bloch(&c, 6).await;
    let (_, games) = c.get("/api/games").await;
    assert_eq!(games[2]["game_id"], "circuits");
    assert_eq!(games[2]["unlocked"], true);
    assert_eq!(games[0]["levels_completed"], 6);

    let (status, level) = c.get("/api/games/circuits/levels/4").await;
    assert_eq!(status, StatusCode::OK);
    assert!(level.get("solution").is_none());
    assert!(level["gate_matrices"]["H@1"]["matrix"].is_array());
    assert!(level["gate_matrices"]["CNOT(1,0)"]["colors"].is_array());

    c.start_level("circuits", 4).await;
    let (status, s) = c
        .play("circuits", 4, json!({ "op": "place", "gate": "H", "column": 0, "wire": 0 }))
        .await;
    assert_eq!(status, StatusCode::OK, "{s}");
    assert_eq!(s["state"]["evaluation"]["colored_output"][0]["primary"], "pink");
    let (status, _) = c
        .play("circuits", 4, json!({ "op": "place", "gate": "X", "column": 0, "wire": 1 }))
        .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (_, s) = c.play("circuits", 4, json!({ "op": "remove", "column": 0, "wire": 0 })).await;
    assert_eq!(s["state"]["fish"], json!({ "fish_remaining": 8, "points_remaining": 9, "outfit_stage": 0 }));
    c.play("circuits", 4, json!({ "op": "place", "gate": "H", "column": 0, "wire": 0 })).await;
    let (_, s) = c
        .play("circuits", 4, json!({ "op": "place", "gate": "CNOT(0,1)", "column": 1 }))
        .await;
    assert_eq!(s["status"], "Won");
    assert_eq!(s["award"]["awarded"], 9);
}

#[tokio::test]
async fn quizzes_never_touch_points() {
    let data = tempfile::tempdir().unwrap();
    let mut c = Client::start(data.path(), false).await;
    c.sign_up("dora").await;

    let (_, list) = c.get("/api/quizzes").await;
    assert_eq!(list.as_array().unwrap().len(), 4);

    let (_, view) = c.get("/api/quizzes/assessment").await;
    assert!(!view.to_string().contains("correct_index"));
    assert_eq!(view["questions"][0]["options"].as_array().unwrap().len(), 5);
    let defaults = view["default_answers"].clone();
    let (status, graded) = c.post("/api/quizzes/assessment/submit", json!({ "answers": defaults })).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(graded["score"], 0);
    assert!(graded.get("per_question").is_none());
    assert!(!graded.to_string().contains("reveal"));

    let (_, view) = c.get("/api/quizzes/bloch").await;
    assert!(view.get("default_answers").is_none());
    let (status, graded) = c.post("/api/quizzes/bloch/submit", json!({ "answers": vec![0; 10] })).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(graded["per_question"].as_array().unwrap().len(), 10);
    assert!(graded["per_question"][0]["reveal"].is_number());
    assert_eq!(graded["record"]["attempts"], 1);

    let (status, _) = c.post("/api/quizzes/bloch/submit", json!({ "answers": vec![0; 9] })).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = c.post("/api/quizzes/bloch/submit", json!({ "answers": vec!["idk"; 10] })).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (_, profile) = c.get("/api/profile").await;
    assert_eq!(profile["total_points"], 0);
    assert_eq!(profile["quiz_records"]["assessment"]["attempts"], 1);
}

#[tokio::test]
async fn shuffled_options_grade_against_served_order() {
    let data = tempfile::tempdir().unwrap();
    let mut c = Client::start(data.path(), true).await;
    c.sign_up("eve").await;
    let bank: Value =
        serde_json::from_str(&std::fs::read_to_string(repo_root().join("quizzes/circuits.json")).unwrap()).unwrap();

    for attempt in 1..=3 {
        let (_, view) = c.get("/api/quizzes/circuits").await;
        let answers: Vec<usize> = bank["questions"]
            .as_array()
            .unwrap()
            .iter()
            .zip(view["questions"].as_array().unwrap())
            .map(|(q, served)| {
                let correct = &q["options"][q["correct_index"].as_u64().unwrap() as usize];
                served["options"].as_array().unwrap().iter().position(|o| o == correct).unwrap()
            })
            .collect();
        let (_, graded) = c.post("/api/quizzes/circuits/submit", json!({ "answers": answers })).await;
        assert_eq!(graded["score"], 10);
        assert_eq!(graded["record"]["attempts"], attempt);
    }
}

#[tokio::test]
async fn profiles_survive_restart() {
    let data = tempfile::tempdir().unwrap();
    let mut c = Client::start(data.path(), false).await;
    let created = c.sign_up("fred").await;
    win_bloch(&c, 1).await;
    let (_, before) = c.get("/api/profile").await;

    let id = created["profile_id"].as_str().unwrap();
    let path = data.path().join("profiles").join(format!("{id}.json"));
    let on_disk = std::fs::read_to_string(&path).unwrap();
    assert!(!on_disk.contains(c.token.as_deref().unwrap()));

    let mut again = Client::start(data.path(), false).await;
    again.token = c.token.clone();
    let (status, after) = again.get("/api/profile").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(before, after);
}
