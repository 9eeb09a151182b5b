use proptest::prelude::*;

use qubitquest_core::circuits::{CircuitLevel, CircuitSession, CircuitStatus, STARTING_FISH};
use qubitquest_core::entanglement::{Action, EntanglementLevel, EntanglementSession, EntanglementStatus, Mode, Obstacle};
use qubitquest_core::progression::{GameId, PlayerProfile};
use qubitquest_core::quantum::{
    apply_gate, bloch_coordinates, classify_entry, compose_circuit, equal_up_to_global_phase, gate_matrix, Color,
    Complex, Gate, StateVector, UnitaryMatrix, NORM_TOLERANCE,
};
use qubitquest_core::quiz::{Answer, Quiz, QuizFile, QuizKind, QuestionFile};

const TOL: f64 = 1e-9;

fn single_gate() -> impl Strategy<Value = Gate> {
    prop::sample::select(Gate::SINGLE_QUBIT.to_vec())
}

/// A gate together with the wire argument `compose_circuit` expects.
fn placed_gate(num_qubits: usize) -> BoxedStrategy<(Gate, Option<usize>)> {
    if num_qubits == 1 {
        single_gate().prop_map(|g| (g, None)).boxed()
    } else {
        prop_oneof![
            3 => (single_gate(), 0..2usize).prop_map(|(g, w)| (g, Some(w))),
            1 => (0..2usize).prop_map(|c| (Gate::Cnot { control: c, target: 1 - c }, None)),
        ]
        .boxed()
    }
}

fn circuit() -> impl Strategy<Value = (usize, Vec<(Gate, Option<usize>)>)> {
    (1..=2usize).prop_flat_map(|n| (Just(n), prop::collection::vec(placed_gate(n), 0..=8)))
}

fn state(num_qubits: usize) -> impl Strategy<Value = StateVector> {
    let dim = 1 << num_qubits;
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("non-zero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            StateVector::new(v.into_iter().map(|(a, b)| Complex::new(a / norm, b / norm)).collect())
                .expect("normalized")
        })
}

fn power(m: &UnitaryMatrix, k: usize) -> UnitaryMatrix {
    let mut out = UnitaryMatrix::identity(m.dim()).unwrap();
    for _ in 0..k {
        out = m.mul(&out).unwrap();
    }
    out
}

proptest! {
    #[test]
    fn composed_circuits_are_unitary((n, gates) in circuit()) {
        let u = compose_circuit(&gates, n).unwrap();
        prop_assert!(u.unitarity_deviation() < TOL);
    }

    #[test]
    fn gate_application_preserves_norm((n, gates) in circuit(), seed in state(2)) {
        let mut s = if n == 2 { seed } else { StateVector::basis(1, 0).unwrap() };
        for &(g, w) in &gates {
            s = apply_gate(&s, g, w).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn compose_matches_step_by_step_application((n, gates) in circuit(), s in state(2)) {
        let s = if n == 2 { s } else { StateVector::basis(1, 1).unwrap() };
        let u = compose_circuit(&gates, n).unwrap();
        let folded = gates.iter().fold(s.clone(), |acc, &(g, w)| apply_gate(&acc, g, w).unwrap());
        prop_assert!(u.apply(&s).unwrap().max_abs_diff(&folded).unwrap() < TOL);
    }

    #[test]
    fn bloch_points_lie_on_unit_sphere(s in state(1)) {
        let p = bloch_coordinates(&s).unwrap();
        prop_assert!((p.norm() - 1.0).abs() < TOL);
    }

    #[test]
    fn global_phase_is_invisible(s in state(1), theta in 0.0f64..std::f64::consts::TAU) {
        let phased = s.with_global_phase(Complex::from_polar(1.0, theta)).unwrap();
        prop_assert!(equal_up_to_global_phase(&s, &phased, TOL).unwrap());
        let (a, b) = (bloch_coordinates(&s).unwrap(), bloch_coordinates(&phased).unwrap());
        prop_assert!((a.x - b.x).abs() < TOL && (a.y - b.y).abs() < TOL && (a.z - b.z).abs() < TOL);
    }

    #[test]
    fn orthogonal_states_never_compare_equal(s in state(1)) {
        let a = s.amplitudes();
        let perp = StateVector::new(vec![-a[1].conj(), a[0].conj()]).unwrap();
        prop_assert!(!equal_up_to_global_phase(&s, &perp, 1e-6).unwrap());
    }

    #[test]
    fn classification_is_total(re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let class = classify_entry(Complex::new(re, im), 1e-6);
        if re.abs() < 1e-6 && im.abs() < 1e-6 {
            prop_assert_eq!(class.primary, Color::Zero);
        } else {
            prop_assert_ne!(class.primary, Color::Zero);
        }
    }
}

#[test]
fn involutions_and_s_order_four() {
    let id = UnitaryMatrix::identity(2).unwrap();
    for g in [Gate::X, Gate::Y, Gate::Z, Gate::H] {
        let m = gate_matrix(g, 1).unwrap();
        assert!(power(&m, 2).approx_eq(&id, NORM_TOLERANCE), "{g}² ≠ I");
    }
    let s = gate_matrix(Gate::S, 1).unwrap();
    assert!(!power(&s, 2).approx_eq(&id, NORM_TOLERANCE));
    assert!(power(&s, 4).approx_eq(&id, NORM_TOLERANCE));
    let cnot = gate_matrix(Gate::Cnot { control: 0, target: 1 }, 2).unwrap();
    assert!(power(&cnot, 2).approx_eq(&UnitaryMatrix::identity(4).unwrap(), NORM_TOLERANCE));
}

fn course(level_id: u8, decoherence: bool, actions: &[Action]) -> EntanglementLevel {
    let mode = Mode::for_level(level_id);
    let obstacle = |a: Action| Obstacle {
        required_action: a,
        label: a.to_string(),
    };
    EntanglementLevel {
        id: level_id,
        course_a: actions.iter().map(|&a| obstacle(a)).collect(),
        course_b: actions
            .iter()
            .map(|&a| obstacle(qubitquest_core::entanglement::partner_action(a, mode)))
            .collect(),
        mode,
        decoherence_enabled: decoherence,
        wrong_move_limit: 5,
        intro_popup: None,
    }
}

fn action() -> impl Strategy<Value = Action> {
    prop::sample::select(Action::ALL.to_vec())
}

proptest! {
    #[test]
    fn entanglement_counters_stay_consistent(
        level_id in 1u8..=12,
        decoherence in any::<bool>(),
        required in prop::collection::vec(action(), 1..12),
        played in prop::collection::vec(action(), 0..40),
    ) {
        let level = course(level_id, decoherence, &required);
        let mut s = EntanglementSession::start(&level);
        for (steps, a) in (1u32..).zip(played) {
            if s.status != EntanglementStatus::InProgress {
                prop_assert!(s.step(&level, a).is_err());
                break;
            }
            s = s.step(&level, a).unwrap();
            prop_assert!(s.decoherence <= 100);
            prop_assert_eq!(s.synced_count + s.wrong_count, steps);
            prop_assert_eq!(s.position, s.synced_count as usize);
            if !decoherence {
                prop_assert_eq!(s.decoherence, 0);
            }
        }
        match s.status {
            EntanglementStatus::Won => {
                prop_assert_eq!(s.position, level.len());
                let score = s.score(&level).unwrap();
                prop_assert!((1..=10).contains(&score));
            }
            EntanglementStatus::Failed => prop_assert!(s.score(&level).is_err()),
            EntanglementStatus::InProgress => prop_assert!(s.position < level.len()),
        }
    }

    #[test]
    fn perfect_runs_score_ten(level_id in 1u8..=12, required in prop::collection::vec(action(), 1..16)) {
        let level = course(level_id, level_id >= 4, &required);
        let s = level
            .perfect_run()
            .into_iter()
            .fold(EntanglementSession::start(&level), |s, a| s.step(&level, a).unwrap());
        prop_assert_eq!(s.status, EntanglementStatus::Won);
        prop_assert_eq!(s.score(&level).unwrap(), 10);
    }

    #[test]
    fn ledger_always_matches_total(awards in prop::collection::vec((0usize..3, 1u8..=12, 0u32..=10), 0..60)) {
        let mut p = PlayerProfile::new("p", "cat").unwrap();
        for (g, level, raw) in awards {
            let game = GameId::ALL[g];
            let before = p.total_points;
            let replay = p.has_completed(game, level);
            let (next, awarded) = p.award_points(game, level, raw, chrono::Utc::now(), None).unwrap();
            prop_assert_eq!(awarded, if replay { raw / 2 } else { raw });
            prop_assert_eq!(next.total_points, before + u64::from(awarded));
            p = next;
        }
        prop_assert!(p.verify_ledger().is_ok());
        prop_assert_eq!(p.is_circuits_unlocked(), p.completed_levels(GameId::Bloch) >= 6);
    }
}

fn bell_level() -> CircuitLevel {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    serde_json::from_value(serde_json::json!({
        "id": 4,
        "input_state": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
        "target_matrix": [
            [[h, 0.0], [0.0, 0.0], [h, 0.0], [0.0, 0.0]],
            [[0.0, 0.0], [h, 0.0], [0.0, 0.0], [h, 0.0]],
            [[0.0, 0.0], [h, 0.0], [0.0, 0.0], [-h, 0.0]],
            [[h, 0.0], [0.0, 0.0], [-h, 0.0], [0.0, 0.0]]
        ],
        "target_state": [[h, 0.0], [0.0, 0.0], [0.0, 0.0], [h, 0.0]],
        "allowed_gates": ["H", "X", "CNOT"],
        "max_columns": 3,
        "penalty_enabled": true,
        "min_solution_length": 2,
        "solution": [[{"gate": "H", "wire": 0}], [{"gate": "CNOT(0,1)"}]]
    }))
    .unwrap()
}

#[derive(Clone, Debug)]
enum Edit {
    Place(Gate, usize, Option<usize>),
    Remove(usize, usize),
}

fn edit() -> impl Strategy<Value = Edit> {
    prop_oneof![
        (prop::sample::select(vec![Gate::H, Gate::X]), 0..3usize, 0..2usize).prop_map(|(g, c, w)| Edit::Place(g, c, Some(w))),
        (0..3usize).prop_map(|c| Edit::Place(Gate::Cnot { control: 0, target: 1 }, c, None)),
        (0..3usize, 0..2usize).prop_map(|(c, w)| Edit::Remove(c, w)),
    ]
}

proptest! {
    #[test]
    fn fish_accounting(edits in prop::collection::vec(edit(), 0..40)) {
        let level = bell_level();
        let mut s = CircuitSession::start(&level);
        for e in edits {
            let next = match e {
                Edit::Place(g, c, w) => s.place_gate(&level, g, c, w),
                Edit::Remove(c, w) => s.remove_gate(&level, c, w),
            };
            if let Ok(next) = next {
                s = next.check_win(&level).unwrap().0;
            }
            let lost = u32::from(STARTING_FISH - s.fish.fish_remaining);
            prop_assert_eq!(lost, s.removals.min(u32::from(STARTING_FISH)));
            prop_assert_eq!(u32::from(s.fish.outfit_stage), lost / 3);
            prop_assert_eq!(u32::from(s.fish.points_remaining), (10 - lost).max(1));
            prop_assert_eq!(s.status == CircuitStatus::Exhausted, s.fish.fish_remaining == 0 && s.status != CircuitStatus::Won);
            if s.status != CircuitStatus::InProgress {
                break;
            }
        }
    }

    #[test]
    fn grading_counts_matching_answers(picks in prop::collection::vec(0usize..4, 10), correct in prop::collection::vec(0usize..4, 10)) {
        let quiz = Quiz::new(QuizFile {
            id: "t".into(),
            kind: QuizKind::InGame,
            title: None,
            questions: correct
                .iter()
                .enumerate()
                .map(|(i, &c)| QuestionFile {
                    prompt: format!("q{i}"),
                    options: (0..4).map(|o| format!("q{i} option {o}")).collect(),
                    correct_index: c,
                })
                .collect(),
        })
        .unwrap();
        let answers: Vec<Answer> = picks.iter().map(|&p| Answer::Choice(p)).collect();
        let expected = picks.iter().zip(&correct).filter(|(p, c)| p == c).count() as u32;
        prop_assert_eq!(quiz.grade(&answers).unwrap().score, expected);
    }
}
