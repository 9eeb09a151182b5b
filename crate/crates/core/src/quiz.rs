//! Multiple-choice quizzes: the replayable in-game quizzes and the
//! pre/post assessment form.
//!
//! In-game quizzes reveal the correct option after grading and never offer
//! "I don't know". Assessment quizzes add an "I don't know" option, start
//! with it selected, and never reveal answers.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::progression::PlayerProfile;

pub const QUESTIONS_PER_QUIZ: usize = 10;
pub const OPTIONS_PER_QUESTION: usize = 4;
pub const IDK_LABEL: &str = "I don't know";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuizError {
    #[error("quiz {quiz}: expected {QUESTIONS_PER_QUIZ} questions, found {found}")]
    WrongQuestionCount { quiz: String, found: usize },
    #[error("quiz {quiz}, question {question}: expected {OPTIONS_PER_QUESTION} options, found {found}")]
    WrongOptionCount { quiz: String, question: usize, found: usize },
    #[error("quiz {quiz}, question {question}: correct_index {index} out of range")]
    CorrectIndexOutOfRange { quiz: String, question: usize, index: usize },
    #[error("expected {QUESTIONS_PER_QUIZ} answers, got {0}")]
    WrongAnswerCount(usize),
    #[error("answer {question}: option {index} does not exist")]
    OptionOutOfRange { question: usize, index: usize },
    #[error("answer {0}: this quiz has no \"I don't know\" option")]
    IdkNotOffered(usize),
    #[error("default answers exist only for assessment quizzes")]
    NotAssessment,
    #[error("score {0} is outside 0..={QUESTIONS_PER_QUIZ}")]
    ScoreOutOfRange(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuizKind {
    InGame,
    Assessment,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: usize,
    pub prompt: String,
    pub options: Vec<String>,
    pub correct_index: usize,
    pub allow_idk: bool,
}

/// A validated quiz. Construct through [`Quiz::from_file`] or
/// [`Quiz::new`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiz {
    pub id: String,
    pub kind: QuizKind,
    pub title: Option<String>,
    pub questions: Vec<Question>,
}

/// On-disk quiz schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuizFile {
    pub id: String,
    pub kind: QuizKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub questions: Vec<QuestionFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuestionFile {
    pub prompt: String,
    pub options: Vec<String>,
    pub correct_index: usize,
}

impl Quiz {
    pub fn new(file: QuizFile) -> Result<Self, QuizError> {
        let problems = file.violations();
        if let Some(first) = problems.into_iter().next() {
            return Err(first);
        }
        let allow_idk = file.kind == QuizKind::Assessment;
        let questions = file
            .questions
            .into_iter()
            .enumerate()
            .map(|(i, q)| Question {
                id: i + 1,
                prompt: q.prompt,
                options: q.options,
                correct_index: q.correct_index,
                allow_idk,
            })
            .collect();
        Ok(Quiz {
            id: file.id,
            kind: file.kind,
            title: file.title,
            questions,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, QuizLoadError> {
        let file: QuizFile = serde_json::from_str(text)?;
        Ok(Quiz::new(file)?)
    }

    pub fn reveal_correct(&self) -> bool {
        self.kind == QuizKind::InGame
    }

    /// Grades a full answer sheet.
    pub fn grade(&self, answers: &[Answer]) -> Result<GradeResult, QuizError> {
        if answers.len() != self.questions.len() {
            return Err(QuizError::WrongAnswerCount(answers.len()));
        }
        let mut per_question = Vec::with_capacity(answers.len());
        for (i, (q, a)) in self.questions.iter().zip(answers).enumerate() {
            let correct = match *a {
                Answer::Choice(index) if index < q.options.len() => index == q.correct_index,
                Answer::Choice(index) => return Err(QuizError::OptionOutOfRange { question: i, index }),
                Answer::Idk if q.allow_idk => false,
                Answer::Idk => return Err(QuizError::IdkNotOffered(i)),
            };
            let reveal = match (self.reveal_correct(), a) {
                (true, Answer::Choice(_)) => Some(q.correct_index),
                _ => None,
            };
            per_question.push(QuestionFeedback { correct, reveal });
        }
        let score = per_question.iter().filter(|f| f.correct).count() as u32;
        Ok(GradeResult { score, per_question })
    }

    /// "I don't know" pre-selected for every assessment question.
    pub fn default_answers(&self) -> Result<Vec<Answer>, QuizError> {
        if self.kind != QuizKind::Assessment {
            return Err(QuizError::NotAssessment);
        }
        Ok(vec![Answer::Idk; self.questions.len()])
    }

    /// Same quiz with each question's options permuted by a seeded RNG;
    /// correct indices follow their option.
    pub fn shuffled(&self, seed: u64) -> Quiz {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = self.clone();
        for q in &mut out.questions {
            let mut order: Vec<usize> = (0..q.options.len()).collect();
            order.shuffle(&mut rng);
            let options = order.iter().map(|&i| q.options[i].clone()).collect();
            q.correct_index = order.iter().position(|&i| i == q.correct_index).unwrap_or(0);
            q.options = options;
        }
        out
    }

    /// Client-facing view with every correct index stripped.
    pub fn client_view(&self) -> QuizView {
        QuizView {
            id: self.id.clone(),
            kind: self.kind,
            title: self.title.clone(),
            questions: self
                .questions
                .iter()
                .map(|q| {
                    let mut options = q.options.clone();
                    if q.allow_idk {
                        options.push(IDK_LABEL.to_string());
                    }
                    QuestionView {
                        id: q.id,
                        prompt: q.prompt.clone(),
                        options,
                        allow_idk: q.allow_idk,
                    }
                })
                .collect(),
            default_answers: self.default_answers().ok(),
        }
    }
}

impl QuizFile {
    pub fn violations(&self) -> Vec<QuizError> {
        let mut out = Vec::new();
        if self.questions.len() != QUESTIONS_PER_QUIZ {
            out.push(QuizError::WrongQuestionCount {
                quiz: self.id.clone(),
                found: self.questions.len(),
            });
        }
        for (i, q) in self.questions.iter().enumerate() {
            if q.options.len() != OPTIONS_PER_QUESTION {
                out.push(QuizError::WrongOptionCount {
                    quiz: self.id.clone(),
                    question: i + 1,
                    found: q.options.len(),
                });
            }
            if q.correct_index >= OPTIONS_PER_QUESTION {
                out.push(QuizError::CorrectIndexOutOfRange {
                    quiz: self.id.clone(),
                    question: i + 1,
                    index: q.correct_index,
                });
            }
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum QuizLoadError {
    #[error("malformed quiz file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] QuizError),
}

/// A submitted answer: an option index, or "I don't know". JSON form is a
/// number or the string `"idk"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Choice(usize),
    Idk,
}

impl Serialize for Answer {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Answer::Choice(i) => serializer.serialize_u64(*i as u64),
            Answer::Idk => serializer.serialize_str("idk"),
        }
    }
}

impl<'de> Deserialize<'de> for Answer {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(usize),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Index(i) => Ok(Answer::Choice(i)),
            Raw::Text(t) if t.eq_ignore_ascii_case("idk") => Ok(Answer::Idk),
            Raw::Text(t) => Err(D::Error::custom(format!("expected an option index or \"idk\", got {t:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionFeedback {
    pub correct: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reveal: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeResult {
    pub score: u32,
    pub per_question: Vec<QuestionFeedback>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuestionView {
    pub id: usize,
    pub prompt: String,
    pub options: Vec<String>,
    pub allow_idk: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuizView {
    pub id: String,
    pub kind: QuizKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub questions: Vec<QuestionView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default_answers: Option<Vec<Answer>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuizRecord {
    pub attempts: u32,
    pub high_score: u32,
}

/// Counts an attempt and keeps the best score. Never touches points.
pub fn record_attempt(profile: &PlayerProfile, quiz_id: &str, score: u32) -> Result<PlayerProfile, QuizError> {
    if score as usize > QUESTIONS_PER_QUIZ {
        return Err(QuizError::ScoreOutOfRange(score));
    }
    let mut next = profile.clone();
    let record = next.quiz_records.entry(quiz_id.to_string()).or_default();
    record.attempts += 1;
    record.high_score = record.high_score.max(score);
    Ok(next)
}
