use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use lucky13::{exact_pmf, recommend, QuestionProfile, ReplayFile, UtilityFunction};
use lucky13_service::{app, load_sessions, SessionStore};
use serde_json::{json, Value};
use tower::ServiceExt;

const CASE_B: &str = include_str!("../../core/fixtures/case_b.json");
const CASE_C: &str = include_str!("../../core/fixtures/case_c.json");

fn service() -> Router {
    app(Arc::new(SessionStore::new()), None).unwrap()
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header(header::CONTENT_TYPE, "application/json");
    let req = req.body(body.map_or_else(Body::empty, |b| Body::from(b.to_string()))).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

async fn raw_post(app: &Router, uri: &str, body: &str) -> (StatusCode, Value) {
    let req = Request::post(uri).header(header::CONTENT_TYPE, "application/json").body(Body::from(body.to_string()));
    let resp = app.clone().oneshot(req.unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

async fn start(app: &Router, fixture: &str) -> (String, ReplayFile) {
    let file = ReplayFile::from_json(fixture).unwrap();
    let (status, game) = call(app, "POST", "/games", Some(json!({ "profile": file.profile, "bet": file.bet }))).await;
    assert_eq!(status, StatusCode::CREATED);
    (game["id"].as_str().unwrap().to_string(), file)
}

#[tokio::test]
async fn advise_examples() {
    let app = service();
    let (status, rec) = call(&app, "POST", "/advise", Some(json!({"s": 3, "u": 8, "g": 2, "utility": "winnings"}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!((rec["range"].as_str(), rec["number"].as_u64()), (Some("10-12"), Some(10)));

    let (_, rec) = call(&app, "POST", "/advise", Some(json!({"p": vec![1.0; 13]}))).await;
    assert_eq!(rec["range"], "13");
    assert!(rec["number"].is_null());

    let (_, rec) = call(&app, "POST", "/advise", Some(json!({"s": 5, "u": 6, "g": 2, "utility": "winprob"}))).await;
    assert_eq!((rec["range"].as_str(), rec["number"].as_u64()), (Some("10-12"), Some(11)));
}

#[tokio::test]
async fn advise_probability_vector_reports_mean_modes_and_ties() {
    let (status, rec) = call(&service(), "POST", "/advise", Some(json!({"p": vec![0.5; 13], "utility": "winprob"}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!((rec["range"].as_str(), rec["number"].as_u64()), (Some("7-9"), Some(7)));
    assert_eq!(rec["mean"], 6.5);
    assert_eq!(rec["darroch_modes"], json!([6, 7]));
    assert!(rec["ties"].as_array().unwrap().contains(&json!({"range": "4-6", "number": 6})));
}

#[tokio::test]
async fn advise_matches_library_exactly() {
    let app = service();
    for (s, u, g) in [(1, 7, 5), (3, 8, 2), (10, 2, 1), (0, 0, 13)] {
        let (_, got) = call(&app, "POST", "/advise", Some(json!({"s": s, "u": u, "g": g, "utility": "winnings"}))).await;
        let want = recommend(
            &exact_pmf(&QuestionProfile::categories(s, u, g).unwrap()),
            &UtilityFunction::ExpectedWinnings,
        );
        assert_eq!(got["expected_winnings"].as_f64().unwrap(), want.expected_winnings);
        assert_eq!(got["win_probability"].as_f64().unwrap(), want.win_probability);
        assert_eq!(got["ties"], serde_json::to_value(&want.ties).unwrap());
    }
}

#[tokio::test]
async fn advise_joint_flag() {
    let (_, rec) = call(&service(), "POST", "/advise", Some(json!({"s": 3, "u": 0, "g": 10, "joint": true}))).await;
    assert_eq!((rec["range"].as_str(), rec["number"].as_u64()), (Some("7-9"), Some(8)));
    assert_eq!(rec["utility"], "joint");
}

#[tokio::test]
async fn advise_rejects_malformed_profiles() {
    let app = service();
    for body in [
        json!({"s": 7, "u": 7, "g": 0}),
        json!({"p": vec![0.4; 13]}),
        json!({"p": vec![0.9; 12]}),
        json!({"s": 3, "u": 8, "g": 2, "utility": "bogus"}),
        json!({"hello": 1}),
    ] {
        let (status, err) = call(&app, "POST", "/advise", Some(body.clone())).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
        assert!(err["error"].is_string());
    }
    let (status, err) = raw_post(&app, "/advise", "{not json").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(err["error"].as_str().unwrap().contains("malformed"));
}

#[tokio::test]
async fn contestant_b_session_rejects_offer() {
    let app = service();
    let (id, file) = start(&app, CASE_B).await;
    for (i, r) in file.reveals.iter().take(9).enumerate() {
        let (status, point) = call(&app, "POST", &format!("/games/{id}/reveals"), Some(json!(r))).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(point["reveal_index"], i + 1);
    }
    let (status, eval) = call(&app, "POST", &format!("/games/{id}/offers"), Some(json!({"amount": 40000}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(eval["advice"], "reject");
    assert_eq!(eval["continuation_value"], 85156.25);

    let (_, game) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(game["state"]["offers"][0]["decision"], "reject");
    assert_eq!(game["trajectory"].as_array().unwrap().len(), 10);
}

#[tokio::test]
async fn contestant_c_full_replay_ends_with_nothing() {
    let app = service();
    let (id, file) = start(&app, CASE_C).await;
    for r in &file.reveals {
        let (status, _) = call(&app, "POST", &format!("/games/{id}/reveals"), Some(json!(r))).await;
        assert_eq!(status, StatusCode::OK);
    }
    let (_, game) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(game["complete"], true);
    assert_eq!(game["current"]["expected_winnings"], 0.0);
    assert_eq!(game["realized_payoff"], 0.0);
    let traj = game["trajectory"].as_array().unwrap();
    assert_eq!(traj.len(), 14);

    let (_, alt) = call(&app, "GET", &format!("/games/{id}/what-if?bet=10-12/10"), None).await;
    assert_eq!(alt.as_array().unwrap().last().unwrap()["expected_winnings"], 125000.0);

    let (status, _) =
        call(&app, "POST", &format!("/games/{id}/reveals"), Some(json!({"category": "U", "correct": true}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = call(&app, "POST", &format!("/games/{id}/offers"), Some(json!({"amount": 1}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn session_errors() {
    let app = service();
    let (status, _) = call(&app, "GET", "/games/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "POST", "/games/nope/reveals", Some(json!({"category": "S", "correct": true}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, _) = call(&app, "POST", "/games", Some(json!({"profile": {"s": 13, "u": 0, "g": 0}, "bet": {"range": "7-9"}}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, game) =
        call(&app, "POST", "/games", Some(json!({"profile": {"s": 13, "u": 0, "g": 0}, "bet": {"range": "13"}}))).await;
    assert_eq!(status, StatusCode::CREATED);
    let id = game["id"].as_str().unwrap();
    let (status, _) = call(&app, "POST", &format!("/games/{id}/reveals"), Some(json!({"category": "G", "correct": true}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = call(&app, "POST", &format!("/games/{id}/reveals"), Some(json!({"correct": true}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", &format!("/games/{id}/offers"), Some(json!({"amount": -5}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (_, game) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert!(game["state"]["reveals"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn fourteenth_reveal_conflicts() {
    let app = service();
    let (status, game) =
        call(&app, "POST", "/games", Some(json!({"profile": {"p": vec![0.9; 13]}, "bet": {"range": "10-12", "number": 12}}))).await;
    assert_eq!(status, StatusCode::CREATED);
    let id = game["id"].as_str().unwrap();
    for _ in 0..13 {
        let (status, _) = call(&app, "POST", &format!("/games/{id}/reveals"), Some(json!({"p": 0.9, "correct": true}))).await;
        assert_eq!(status, StatusCode::OK);
    }
    let (status, err) = call(&app, "POST", &format!("/games/{id}/reveals"), Some(json!({"p": 0.9, "correct": true}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert!(err["error"].is_string());
}

#[tokio::test]
async fn tables() {
    let app = service();
    let (status, rows) = call(&app, "GET", "/tables/two?utility=winprob", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(rows.as_array().unwrap().len(), 14);
    assert_eq!(rows[0]["ties"], json!(["4-6/6"]));
    let (_, rows) = call(&app, "GET", "/tables/three?utility=winnings", None).await;
    assert_eq!(rows.as_array().unwrap().len(), 105);
    let (_, rows) = call(&app, "GET", "/tables/two?utility=both", None).await;
    assert_eq!(rows.as_array().unwrap().len(), 28);
    let (status, _) = call(&app, "GET", "/tables/five", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "GET", "/tables/two?utility=bogus", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn cors_headers_present() {
    let req = Request::get("/tables/two").header(header::ORIGIN, "http://localhost:5173").body(Body::empty()).unwrap();
    let resp = service().oneshot(req).await.unwrap();
    assert_eq!(resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn interleaved_sessions_stay_isolated() {
    let app = service();
    let mut games = Vec::new();
    for fixture in [CASE_B, CASE_C, CASE_B, CASE_C] {
        games.push(start(&app, fixture).await);
    }
    let mut tasks = Vec::new();
    for (id, file) in games.clone() {
        let app = app.clone();
        tasks.push(tokio::spawn(async move {
            for r in &file.reveals {
                let (status, _) = call(&app, "POST", &format!("/games/{id}/reveals"), Some(json!(r))).await;
                assert_eq!(status, StatusCode::OK);
                tokio::task::yield_now().await;
            }
        }));
    }
    for t in tasks {
        t.await.unwrap();
    }
    for (id, file) in games {
        let (_, game) = call(&app, "GET", &format!("/games/{id}"), None).await;
        let want = lucky13::GameState::replay(file.profile, file.bet, &file.reveals).unwrap();
        assert_eq!(game["trajectory"], serde_json::to_value(want.trajectory()).unwrap());
    }
}

#[tokio::test]
async fn snapshot_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sessions.json");
    let store = Arc::new(SessionStore::with_snapshot(&path).unwrap());
    let app = app(store.clone(), None).unwrap();
    let (id, file) = start(&app, CASE_B).await;
    for r in file.reveals.iter().take(9) {
        call(&app, "POST", &format!("/games/{id}/reveals"), Some(json!(r))).await;
    }
    call(&app, "POST", &format!("/games/{id}/offers"), Some(json!({"amount": 40000}))).await;
    start(&app, CASE_C).await;

    let reloaded = SessionStore::with_snapshot(&path).unwrap();
    assert_eq!(reloaded.sessions(), store.sessions());
    assert_eq!(load_sessions(&path).unwrap().len(), 2);
    for s in reloaded.sessions() {
        let original = store.get(&s.id).unwrap();
        assert_eq!(s.state.trajectory(), original.state.trajectory());
    }
}
