//! The BFS solver against brute-force enumeration of every sequence.

use proptest::prelude::*;

use qubitquest_cli::solver::{solve_bloch, solve_circuit, SolveError};
use qubitquest_core::bloch::{BlochLevel, BlochSession, BlochStatus};
use qubitquest_core::circuits::{compose_columns, CircuitLevel, Column};
use qubitquest_core::quantum::{equal_up_to_global_phase, gate_matrix, Complex, Gate, GateKind, StateVector};

const BRUTE_DEPTH: usize = 4;

fn stabilizer_states() -> Vec<StateVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |a: (f64, f64), b: (f64, f64)| {
        StateVector::new(vec![Complex::new(a.0, a.1), Complex::new(b.0, b.1)]).unwrap()
    };
    vec![
        c((1.0, 0.0), (0.0, 0.0)),
        c((0.0, 0.0), (1.0, 0.0)),
        c((h, 0.0), (h, 0.0)),
        c((h, 0.0), (-h, 0.0)),
        c((h, 0.0), (0.0, h)),
        c((h, 0.0), (0.0, -h)),
    ]
}

/// Every word over `gates` of length `len`, in lexicographic order.
fn words<T: Copy>(gates: &[T], len: usize) -> Vec<Vec<T>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                gates.iter().map(move |&g| {
                    let mut w = w.clone();
                    w.push(g);
                    w
                })
            })
            .collect()
    })
}

/// Shortest length at which any word maps start to target, by direct
/// matrix-vector products rather than the engine.
fn brute_bloch(start: &StateVector, target: &StateVector, gates: &[Gate]) -> Option<usize> {
    (0..=BRUTE_DEPTH).find(|&len| {
        words(gates, len).iter().any(|w| {
            let end = w
                .iter()
                .fold(start.clone(), |s, &g| gate_matrix(g, 1).unwrap().apply(&s).unwrap());
            equal_up_to_global_phase(&end, target, 1e-6).unwrap()
        })
    })
}

fn gate_subset() -> impl Strategy<Value = Vec<GateKind>> {
    prop::sample::subsequence(vec![GateKind::X, GateKind::Y, GateKind::Z, GateKind::H, GateKind::S], 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bloch_solutions_are_minimal(start in 0usize..6, target in 0usize..6, kinds in gate_subset()) {
        let states = stabilizer_states();
        let level = BlochLevel {
            id: 1,
            start_state: states[start].clone(),
            target_state: states[target].clone(),
            allowed_gates: kinds.clone(),
            min_solution_length: 0,
            intro_popup: None,
            hint: None,
            gate_tooltips: Default::default(),
        };
        let gates: Vec<Gate> = kinds.iter().map(|k| k.default_gate()).collect();
        let brute = brute_bloch(&level.start_state, &level.target_state, &gates);
        match solve_bloch(&level, BRUTE_DEPTH) {
            Ok(sol) => {
                prop_assert_eq!(Some(sol.len()), brute);
                let end = sol
                    .iter()
                    .try_fold(BlochSession::start(&level), |s, &g| s.apply(&level, g))
                    .unwrap();
                prop_assert!(sol.is_empty() || end.status == BlochStatus::Won);
            }
            Err(SolveError::NotFound { .. }) => prop_assert_eq!(brute, None),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

fn columns_for(kinds: &[GateKind]) -> Vec<Column> {
    let singles: Vec<Option<Gate>> = std::iter::once(None)
        .chain(kinds.iter().filter(|k| k.is_single_qubit()).map(|k| Some(k.default_gate())))
        .collect();
    let mut out = Vec::new();
    for &a in &singles {
        for &b in &singles {
            if a.is_some() || b.is_some() {
                out.push(Column::Singles([a, b]));
            }
        }
    }
    if kinds.contains(&GateKind::Cnot) {
        out.push(Column::Controlled { control: 0, target: 1 });
        out.push(Column::Controlled { control: 1, target: 0 });
    }
    out
}

fn circuit_level(columns: &[Column], kinds: &[GateKind]) -> CircuitLevel {
    let u = compose_columns(columns).unwrap();
    let input = StateVector::basis(2, 0).unwrap();
    CircuitLevel {
        id: 2,
        target_state: u.apply(&input).unwrap(),
        input_state: input,
        target_matrix: u,
        allowed_gates: kinds.to_vec(),
        max_columns: 3,
        penalty_enabled: true,
        min_solution_length: columns.len(),
        solution: columns.to_vec(),
        intro_popup: None,
        hint: None,
        gate_tooltips: Default::default(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn circuit_solutions_are_minimal(picks in prop::collection::vec(0usize..64, 0..=3)) {
        let kinds = [GateKind::H, GateKind::X, GateKind::Cnot];
        let all = columns_for(&kinds);
        let built: Vec<Column> = picks.iter().map(|&i| all[i % all.len()]).collect();
        let level = circuit_level(&built, &kinds);
        let brute = (0..=built.len())
            .find(|&len| {
                words(&all, len)
                    .iter()
                    .any(|w| compose_columns(w).unwrap().approx_eq(&level.target_matrix, 1e-6))
            })
            .expect("the built circuit itself is a witness");
        let sol = solve_circuit(&level, 3).unwrap();
        prop_assert_eq!(sol.len(), brute);
        prop_assert!(compose_columns(&sol).unwrap().approx_eq(&level.target_matrix, 1e-6));
    }
}
