use axum::extract::{FromRequestParts, Path, State};
use axum::http::request::Parts;
use axum::http::{header, StatusCode};
use axum::Json;
use chrono::Utc;
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use qubitquest_core::progression::GameId;
use qubitquest_core::quiz::{record_attempt, Answer, Quiz, QuizKind};

use crate::error::{ApiError, ApiResult};
use crate::play::ActiveSession;
use crate::store::{ProfileSlot, SharedSlot};
use crate::views::{games_view, level_view, profile_view, require_unlocked};
use crate::AppState;

/// The caller's profile, resolved from `Authorization: Bearer <token>`.
pub struct Player(pub SharedSlot);

impl FromRequestParts<AppState> for Player {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &AppState) -> Result<Self, Self::Rejection> {
        let token = parts
            .headers
            .get(header::AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "))
            .map(str::trim)
            .ok_or_else(ApiError::unauthorized)?;
        state.store.by_token(token).map(Player).ok_or_else(ApiError::unauthorized)
    }
}

fn parse_game(raw: &str) -> ApiResult<GameId> {
    raw.parse().map_err(|_| ApiError::not_found(format!("unknown game {raw:?}")))
}

#[derive(Deserialize)]
pub struct NewProfile {
    nickname: String,
}

pub async fn create_profile(
    State(state): State<AppState>,
    Json(body): Json<NewProfile>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let (slot, token) = state.store.create(&body.nickname).await?;
    let slot = slot.lock().await;
    let profile = &slot.stored.profile;
    tracing::info!(profile_id = %profile.profile_id, "profile created");
    Ok((
        StatusCode::CREATED,
        Json(json!({
            "profile_id": profile.profile_id,
            "nickname": profile.nickname,
            "token": token,
        })),
    ))
}

pub async fn get_profile(Player(slot): Player) -> Json<Value> {
    Json(profile_view(&slot.lock().await.stored.profile))
}

pub async fn list_games(Player(slot): Player) -> Json<Value> {
    Json(games_view(&slot.lock().await.stored.profile))
}

pub async fn get_level(
    State(state): State<AppState>,
    Player(slot): Player,
    Path((game, level)): Path<(String, u8)>,
) -> ApiResult<Json<Value>> {
    let game = parse_game(&game)?;
    require_unlocked(&slot.lock().await.stored.profile, game)?;
    Ok(Json(level_view(&state.content, game, level)?))
}

/// Starts (or restarts) the caller's session on one level.
pub async fn start_session(
    State(state): State<AppState>,
    Player(slot): Player,
    Path((game, level)): Path<(String, u8)>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let game = parse_game(&game)?;
    let mut slot = slot.lock().await;
    require_unlocked(&slot.stored.profile, game)?;
    let session = ActiveSession::start(&state.content, game, level)?;
    let view = session.view(&state.content)?;
    slot.sessions.insert((game, level), session);
    Ok((StatusCode::CREATED, Json(view)))
}

pub async fn get_session(
    State(state): State<AppState>,
    Player(slot): Player,
    Path((game, level)): Path<(String, u8)>,
) -> ApiResult<Json<Value>> {
    let game = parse_game(&game)?;
    let slot = slot.lock().await;
    require_unlocked(&slot.stored.profile, game)?;
    let session = slot
        .sessions
        .get(&(game, level))
        .ok_or_else(|| ApiError::not_found("no active session for this level"))?;
    Ok(Json(session.view(&state.content)?))
}

pub async fn make_move(
    State(state): State<AppState>,
    Player(slot): Player,
    Path((game, level)): Path<(String, u8)>,
    Json(body): Json<Value>,
) -> ApiResult<Json<Value>> {
    let game = parse_game(&game)?;
    let mut guard = slot.lock().await;
    let slot: &mut ProfileSlot = &mut guard;
    require_unlocked(&slot.stored.profile, game)?;
    let current = slot
        .sessions
        .get(&(game, level))
        .ok_or_else(|| ApiError::not_found("no active session for this level; start one first"))?;
    let mut next = current.apply(&state.content, &body)?;

    if next.is_won() && next.award.is_none() && !slot.stored.profile.has_awarded_session(&next.session_id) {
        let raw = next.score(&state.content)?;
        let (profile, awarded) =
            slot.stored
                .profile
                .award_points(game, level, raw, Utc::now(), Some(next.session_id.clone()))?;
        let replay = slot.stored.profile.has_completed(game, level);
        let mut updated = slot.stored.clone();
        updated.profile = profile.check_rewards();
        let previous = std::mem::replace(&mut slot.stored, updated);
        if let Err(e) = state.store.save(slot).await {
            slot.stored = previous;
            return Err(e.into());
        }
        tracing::info!(
            profile_id = %slot.stored.profile.profile_id,
            game = game.as_str(),
            level,
            raw,
            awarded,
            "level won"
        );
        next.award = Some(crate::play::Award {
            raw_score: raw,
            awarded,
            replay,
        });
    }
    let mut view = next.view(&state.content)?;
    view["total_points"] = json!(slot.stored.profile.total_points);
    slot.sessions.insert((game, level), next);
    Ok(Json(view))
}

fn find_quiz<'a>(state: &'a AppState, id: &str) -> ApiResult<&'a Quiz> {
    state
        .content
        .quiz(id)
        .ok_or_else(|| ApiError::not_found(format!("unknown quiz {id:?}")))
}

/// Option order served to one player for one attempt. Stable between the
/// view and the submission because the attempt count only changes on submit.
fn served_quiz(state: &AppState, quiz: &Quiz, slot: &ProfileSlot) -> Quiz {
    if !state.shuffle_options {
        return quiz.clone();
    }
    let attempts = slot
        .stored
        .profile
        .quiz_records
        .get(&quiz.id)
        .map_or(0, |r| r.attempts);
    let digest = Sha256::digest(format!("{}\0{}\0{attempts}", slot.stored.profile.profile_id, quiz.id));
    let seed = u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"));
    quiz.shuffled(seed)
}

pub async fn list_quizzes(State(state): State<AppState>, Player(slot): Player) -> Json<Value> {
    let slot = slot.lock().await;
    let quizzes: Vec<Value> = state
        .content
        .quizzes
        .iter()
        .map(|q| {
            json!({
                "id": q.id,
                "kind": q.kind,
                "title": q.title,
                "record": slot.stored.profile.quiz_records.get(&q.id).cloned().unwrap_or_default(),
            })
        })
        .collect();
    Json(Value::Array(quizzes))
}

pub async fn get_quiz(
    State(state): State<AppState>,
    Player(slot): Player,
    Path(id): Path<String>,
) -> ApiResult<Json<Value>> {
    let quiz = find_quiz(&state, &id)?;
    let slot = slot.lock().await;
    let view = served_quiz(&state, quiz, &slot).client_view();
    Ok(Json(serde_json::to_value(view).expect("quiz view serializes")))
}

#[derive(Deserialize)]
pub struct Submission {
    answers: Vec<Answer>,
}

pub async fn submit_quiz(
    State(state): State<AppState>,
    Player(slot): Player,
    Path(id): Path<String>,
    Json(body): Json<Submission>,
) -> ApiResult<Json<Value>> {
    let quiz = find_quiz(&state, &id)?;
    let mut guard = slot.lock().await;
    let slot: &mut ProfileSlot = &mut guard;
    let served = served_quiz(&state, quiz, slot);
    let result = served.grade(&body.answers)?;
    let profile = record_attempt(&slot.stored.profile, &quiz.id, result.score)?;
    let mut updated = slot.stored.clone();
    updated.profile = profile;
    let previous = std::mem::replace(&mut slot.stored, updated);
    if let Err(e) = state.store.save(slot).await {
        slot.stored = previous;
        return Err(e.into());
    }
    let record = slot.stored.profile.quiz_records.get(&quiz.id).cloned().unwrap_or_default();
    // Assessment answers stay hidden: only the total comes back.
    let body = match quiz.kind {
        QuizKind::Assessment => json!({ "score": result.score, "record": record }),
        QuizKind::InGame => json!({
            "score": result.score,
            "per_question": result.per_question,
            "record": record,
        }),
    };
    Ok(Json(body))
}
