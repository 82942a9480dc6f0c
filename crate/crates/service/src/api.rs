//! Route handlers. Every number in a response comes straight from a library call.

use std::collections::HashMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use lucky13::table::flatten;
use lucky13::{
    darroch_mode, exact_pmf, joint_recommend, new_game, recommend, Bet, Error, FlatRow, GameState, OfferEvaluation,
    QuestionProfile, Recommendation, Reveal, TableModel, TableUtility, TrajectoryPoint, UtilityFunction,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::store::{GameSession, SessionStore};

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, message: message.into() }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, message)
    }

    fn not_found(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::PoolExhausted | Error::QuestionUnavailable(_) | Error::GameComplete => StatusCode::CONFLICT,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse<T: DeserializeOwned>(body: &[u8]) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed body: {e}")))
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/advise", post(advise))
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/reveals", post(reveal))
        .route("/games/{id}/offers", post(offer))
        .route("/games/{id}/what-if", get(what_if))
        .route("/tables/{model}", get(table))
        .with_state(store)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AdviseResponse {
    #[serde(flatten)]
    pub recommendation: Recommendation,
    pub utility: String,
    pub joint: bool,
    /// Expected number of correct answers.
    pub mean: f64,
    /// Darroch's mode set, for per-question probability profiles.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub darroch_modes: Option<Vec<u8>>,
}

async fn advise(body: Bytes) -> ApiResult<Json<AdviseResponse>> {
    let value: Value = parse(&body)?;
    let profile = QuestionProfile::deserialize(&value).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let utility: UtilityFunction = match value.get("utility") {
        None | Some(Value::Null) => UtilityFunction::WinProbability,
        Some(Value::String(s)) => s.parse()?,
        Some(_) => return Err(ApiError::bad_request("\"utility\" must be a string")),
    };
    let joint = match value.get("joint") {
        None | Some(Value::Null) => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(ApiError::bad_request("\"joint\" must be a boolean")),
    };
    let pmf = exact_pmf(&profile);
    let recommendation = if joint { joint_recommend(&pmf) } else { recommend(&pmf, &utility) };
    let darroch_modes = match &profile {
        QuestionProfile::Probabilities(p) => Some(darroch_mode(p)?.modes),
        QuestionProfile::Categories { .. } => None,
    };
    Ok(Json(AdviseResponse {
        recommendation,
        utility: if joint { "joint".into() } else { utility.label() },
        joint,
        mean: profile.mean(),
        darroch_modes,
    }))
}

#[derive(Debug, Deserialize)]
struct CreateGame {
    profile: QuestionProfile,
    bet: Bet,
}

/// Full session state plus derived trajectory.
#[derive(Debug, Serialize, Deserialize)]
pub struct GameView {
    pub id: String,
    pub created_ms: u64,
    pub updated_ms: u64,
    pub state: GameState,
    pub complete: bool,
    pub correct_so_far: usize,
    pub current: TrajectoryPoint,
    pub trajectory: Vec<TrajectoryPoint>,
    pub realized_payoff: Option<f64>,
}

impl From<GameSession> for GameView {
    fn from(s: GameSession) -> Self {
        GameView {
            complete: s.state.is_complete(),
            correct_so_far: s.state.correct_so_far(),
            current: s.state.current_point(),
            trajectory: s.state.trajectory(),
            realized_payoff: s.state.realized_payoff(),
            id: s.id,
            created_ms: s.created_ms,
            updated_ms: s.updated_ms,
            state: s.state,
        }
    }
}

async fn create_game(State(store): State<Arc<SessionStore>>, body: Bytes) -> ApiResult<(StatusCode, Json<GameView>)> {
    let req: CreateGame = parse(&body)?;
    let session = store.create(new_game(req.profile, req.bet));
    log::info!("created game {}", session.id);
    Ok((StatusCode::CREATED, Json(session.into())))
}

fn unknown(id: &str) -> ApiError {
    ApiError::not_found(format!("no game with id '{id}'"))
}

async fn get_game(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult<Json<GameView>> {
    store.get(&id).map(|s| Json(s.into())).ok_or_else(|| unknown(&id))
}

async fn reveal(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<TrajectoryPoint>> {
    let r: Reveal = parse(&body)?;
    let point = store
        .update(&id, |state| {
            let next = state.reveal(r.question, r.correct)?;
            let point = next.current_point();
            Ok::<_, Error>((next, point))
        })
        .ok_or_else(|| unknown(&id))??;
    Ok(Json(point))
}

#[derive(Debug, Deserialize)]
struct OfferBody {
    amount: f64,
}

async fn offer(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<OfferEvaluation>> {
    let o: OfferBody = parse(&body)?;
    let eval = store.update(&id, |state| state.evaluate_offer(o.amount)).ok_or_else(|| unknown(&id))??;
    Ok(Json(eval))
}

async fn what_if(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Json<Vec<TrajectoryPoint>>> {
    let bet: Bet = q.get("bet").ok_or_else(|| ApiError::bad_request("missing query parameter 'bet'"))?.parse()?;
    let session = store.get(&id).ok_or_else(|| unknown(&id))?;
    Ok(Json(session.state.what_if(bet)))
}

async fn table(
    Path(model): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Json<Vec<FlatRow>>> {
    let model: TableModel = model.parse().map_err(|e: Error| ApiError::not_found(e.to_string()))?;
    let utility: TableUtility = q.get("utility").map_or("winprob", |s| s.as_str()).parse()?;
    Ok(Json(flatten(&model.rows(), utility)))
}
