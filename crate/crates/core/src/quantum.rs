//! Complex linear algebra for one- and two-qubit systems.
//!
//! Basis order follows the usual "qubit 0 is the left symbol" convention:
//! a two-qubit amplitude vector is indexed `|00⟩, |01⟩, |10⟩, |11⟩`, and a
//! single-qubit gate acting on wire 0 is lifted as `G ⊗ I`, on wire 1 as
//! `I ⊗ G`.
//!
//! Everything here is value-semantic: operations return new states and
//! matrices and never mutate their inputs.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Complex = Complex64;

/// Tolerance used for internal invariants (normalization, unitarity).
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Tolerance used for player-facing comparisons (win checks).
pub const PLAYER_TOLERANCE: f64 = 1e-6;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);
const I: Complex = Complex::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("unsupported qubit count {0}; only 1 or 2 qubits are simulated")]
    UnsupportedQubits(usize),
    #[error("expected {expected} amplitudes or rows, got {len}")]
    BadLength { len: usize, expected: usize },
    #[error("non-finite value in state or matrix")]
    NonFinite,
    #[error("state is not normalized (sum of squared magnitudes = {0})")]
    NotNormalized(f64),
    #[error("matrix is not unitary (max deviation of U†U from I is {0:e})")]
    NotUnitary(f64),
    #[error("{gate} is not valid on a {num_qubits}-qubit system")]
    InvalidGate { gate: Gate, num_qubits: usize },
    #[error("wire {wire} is out of range for a {num_qubits}-qubit system")]
    WireOutOfRange { wire: usize, num_qubits: usize },
    #[error("{0} on a 2-qubit system needs a wire index")]
    MissingWire(Gate),
    #[error("{0} does not take a wire index")]
    UnexpectedWire(Gate),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("gate #{index} in circuit: {source}")]
    InvalidCircuitGate {
        index: usize,
        #[source]
        source: Box<QuantumError>,
    },
    #[error("unknown gate {0:?}")]
    UnknownGate(String),
}

pub type Result<T, E = QuantumError> = std::result::Result<T, E>;

fn ensure_finite(values: &[Complex]) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(QuantumError::NonFinite)
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    match len {
        2 => Ok(1),
        4 => Ok(2),
        _ => Err(QuantumError::BadLength { len, expected: 4 }),
    }
}

fn dim_for_qubits(num_qubits: usize) -> Result<usize> {
    match num_qubits {
        1 => Ok(2),
        2 => Ok(4),
        n => Err(QuantumError::UnsupportedQubits(n)),
    }
}

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

/// Gate families available to level authors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    #[serde(rename = "CNOT")]
    Cnot,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Cnot,
    ];

    pub fn is_single_qubit(self) -> bool {
        self != GateKind::Cnot
    }

    /// The gate of this kind, with CNOT oriented control 0 → target 1.
    pub fn default_gate(self) -> Gate {
        match self {
            GateKind::X => Gate::X,
            GateKind::Y => Gate::Y,
            GateKind::Z => Gate::Z,
            GateKind::H => Gate::H,
            GateKind::S => Gate::S,
            GateKind::Cnot => Gate::Cnot {
                control: 0,
                target: 1,
            },
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Cnot => "CNOT",
        };
        f.write_str(name)
    }
}

/// A concrete gate. Textual form is `X`, `Y`, `Z`, `H`, `S`, or
/// `CNOT(control,target)`; a bare `CNOT` parses as `CNOT(0,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    X,
    Y,
    Z,
    H,
    S,
    Cnot { control: usize, target: usize },
}

impl Gate {
    /// The single-qubit roster, in a fixed order.
    pub const SINGLE_QUBIT: [Gate; 5] = [Gate::X, Gate::Y, Gate::Z, Gate::H, Gate::S];

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X => GateKind::X,
            Gate::Y => GateKind::Y,
            Gate::Z => GateKind::Z,
            Gate::H => GateKind::H,
            Gate::S => GateKind::S,
            Gate::Cnot { .. } => GateKind::Cnot,
        }
    }

    pub fn is_single_qubit(&self) -> bool {
        self.kind().is_single_qubit()
    }

    fn single_qubit_entries(&self) -> Option<[Complex; 4]> {
        let h = Complex::new(FRAC_1_SQRT_2, 0.0);
        Some(match self {
            Gate::X => [ZERO, ONE, ONE, ZERO],
            Gate::Y => [ZERO, -I, I, ZERO],
            Gate::Z => [ONE, ZERO, ZERO, -ONE],
            Gate::H => [h, h, h, -h],
            Gate::S => [ONE, ZERO, ZERO, I],
            Gate::Cnot { .. } => return None,
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cnot { control, target } => write!(f, "CNOT({control},{target})"),
            other => write!(f, "{}", other.kind()),
        }
    }
}

impl FromStr for Gate {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let upper = trimmed.to_ascii_uppercase();
        match upper.as_str() {
            "X" => return Ok(Gate::X),
            "Y" => return Ok(Gate::Y),
            "Z" => return Ok(Gate::Z),
            "H" => return Ok(Gate::H),
            "S" => return Ok(Gate::S),
            "CNOT" | "CX" => return Ok(GateKind::Cnot.default_gate()),
            _ => {}
        }
        let unknown = || QuantumError::UnknownGate(trimmed.to_string());
        let args = upper
            .strip_prefix("CNOT(")
            .or_else(|| upper.strip_prefix("CX("))
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(unknown)?;
        let (c, t) = args
            .split_once("->")
            .or_else(|| args.split_once(','))
            .ok_or_else(unknown)?;
        let control = c.trim().parse().map_err(|_| unknown())?;
        let target = t.trim().parse().map_err(|_| unknown())?;
        Ok(Gate::Cnot { control, target })
    }
}

impl Serialize for Gate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Gate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// JSON encoding helpers: complex as [re, im]
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
struct Pair(Complex);

impl Serialize for Pair {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Pair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(deserializer)?;
        Ok(Pair(Complex::new(re, im)))
    }
}

/// Serde adapter encoding a single complex number as `[re, im]`.
pub mod complex_pair {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex, s: S) -> std::result::Result<S::Ok, S::Error> {
        Pair(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex, D::Error> {
        Pair::deserialize(d).map(|p| p.0)
    }
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// Normalized amplitude vector for one or two qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, checking length, finiteness and
    /// normalization.
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        ensure_finite(&amplitudes)?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = dim_for_qubits(num_qubits)?;
        if index >= dim {
            return Err(QuantumError::BadLength {
                len: index + 1,
                expected: dim,
            });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by a unit-modulus scalar.
    pub fn with_global_phase(&self, phase: Complex) -> Result<Self> {
        Self::new(self.amplitudes.iter().map(|a| a * phase).collect())
    }

    /// Largest entry-wise distance `‖a − b‖∞`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(QuantumError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    /// Internal constructor for results of unitary evolution; the caller
    /// guarantees the amplitudes are already normalized.
    fn from_evolved(num_qubits: usize, amplitudes: Vec<Complex>) -> Self {
        debug_assert!((amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-6);
        StateVector {
            num_qubits,
            amplitudes,
        }
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.amplitudes.iter().map(|a| Pair(*a)))
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<Pair>::deserialize(deserializer)?;
        StateVector::new(pairs.into_iter().map(|p| p.0).collect()).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// A 2×2 or 4×4 unitary, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl UnitaryMatrix {
    /// Builds a matrix from row-major entries, checking shape, finiteness
    /// and unitarity.
    pub fn new(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(QuantumError::BadLength {
                len: dim,
                expected: 4,
            });
        }
        if entries.len() != dim * dim {
            return Err(QuantumError::BadLength {
                len: entries.len(),
                expected: dim * dim,
            });
        }
        ensure_finite(&entries)?;
        let m = UnitaryMatrix { dim, entries };
        let dev = m.unitarity_deviation();
        if dev > NORM_TOLERANCE {
            return Err(QuantumError::NotUnitary(dev));
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(QuantumError::BadLength {
                len: rows.iter().map(Vec::len).find(|&l| l != dim).unwrap_or(0),
                expected: dim,
            });
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn identity(dim: usize) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(QuantumError::BadLength {
                len: dim,
                expected: 4,
            });
        }
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ONE;
        }
        Ok(UnitaryMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex]> {
        self.entries.chunks(self.dim)
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[c * n + r] = self.entries[r * n + c].conj();
            }
        }
        UnitaryMatrix { dim: n, entries }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.dim != rhs.dim {
            return Err(QuantumError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    entries[r * n + c] += a * rhs.entries[k * n + c];
                }
            }
        }
        Ok(UnitaryMatrix { dim: n, entries })
    }

    /// Kronecker product `self ⊗ rhs` of two 2×2 matrices.
    pub fn kron(&self, rhs: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.dim != 2 || rhs.dim != 2 {
            return Err(QuantumError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let mut entries = vec![ZERO; 16];
        for (ar, ac) in (0..2).flat_map(|r| (0..2).map(move |c| (r, c))) {
            let a = self.get(ar, ac);
            for (br, bc) in (0..2).flat_map(|r| (0..2).map(move |c| (r, c))) {
                entries[(ar * 2 + br) * 4 + (ac * 2 + bc)] = a * rhs.get(br, bc);
            }
        }
        Ok(UnitaryMatrix { dim: 4, entries })
    }

    /// Matrix-vector product.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.dim != state.dim() {
            return Err(QuantumError::DimensionMismatch {
                left: self.dim,
                right: state.dim(),
            });
        }
        let amplitudes = self
            .rows()
            .map(|row| row.iter().zip(state.amplitudes()).map(|(m, a)| m * a).sum())
            .collect();
        Ok(StateVector::from_evolved(state.num_qubits(), amplitudes))
    }

    /// `‖U†U − I‖∞` over entries.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let dot: Complex = (0..n)
                    .map(|k| self.entries[k * n + r].conj() * self.entries[k * n + c])
                    .sum();
                let expected = if r == c { ONE } else { ZERO };
                worst = worst.max((dot - expected).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(QuantumError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &UnitaryMatrix, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }
}

impl Serialize for UnitaryMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Pair>> = self
            .rows()
            .map(|r| r.iter().copied().map(Pair).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnitaryMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Pair>>::deserialize(deserializer)?;
        UnitaryMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|p| p.0).collect())
                .collect(),
        )
        .map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Canonical matrix of a gate: 2×2 for single-qubit kinds, 4×4 for CNOT.
pub fn gate_matrix(gate: Gate, num_qubits: usize) -> Result<UnitaryMatrix> {
    dim_for_qubits(num_qubits)?;
    if let Some(entries) = gate.single_qubit_entries() {
        return Ok(UnitaryMatrix { dim: 2, entries: entries.to_vec() });
    }
    let Gate::Cnot { control, target } = gate else {
        unreachable!("single-qubit gates handled above");
    };
    if num_qubits != 2 || control == target || control > 1 || target > 1 {
        return Err(QuantumError::InvalidGate { gate, num_qubits });
    }
    // Permutation: flip the target bit of every basis index whose control bit is set.
    let bit = |wire: usize| 1usize << (1 - wire);
    let mut entries = vec![ZERO; 16];
    for col in 0..4 {
        let row = if col & bit(control) != 0 { col ^ bit(target) } else { col };
        entries[row * 4 + col] = ONE;
    }
    Ok(UnitaryMatrix { dim: 4, entries })
}

/// Lifts a single-qubit gate onto one wire of a two-qubit register.
pub fn lift_single_qubit_gate(gate: Gate, wire: usize) -> Result<UnitaryMatrix> {
    if !gate.is_single_qubit() {
        return Err(QuantumError::InvalidGate { gate, num_qubits: 1 });
    }
    let g = gate_matrix(gate, 1)?;
    let id = UnitaryMatrix::identity(2)?;
    match wire {
        0 => g.kron(&id),
        1 => id.kron(&g),
        _ => Err(QuantumError::WireOutOfRange { wire, num_qubits: 2 }),
    }
}

/// Full-register operator for a gate placement.
pub fn operator_for(gate: Gate, wire: Option<usize>, num_qubits: usize) -> Result<UnitaryMatrix> {
    dim_for_qubits(num_qubits)?;
    match (gate.is_single_qubit(), num_qubits, wire) {
        (true, 1, None | Some(0)) => gate_matrix(gate, 1),
        (true, 1, Some(w)) => Err(QuantumError::WireOutOfRange { wire: w, num_qubits: 1 }),
        (true, _, Some(w)) => lift_single_qubit_gate(gate, w),
        (true, _, None) => Err(QuantumError::MissingWire(gate)),
        (false, _, Some(_)) => Err(QuantumError::UnexpectedWire(gate)),
        (false, n, None) => gate_matrix(gate, n),
    }
}

/// Applies one gate to a state, returning the evolved state.
pub fn apply_gate(state: &StateVector, gate: Gate, wire: Option<usize>) -> Result<StateVector> {
    operator_for(gate, wire, state.num_qubits())?.apply(state)
}

/// Composes a gate sequence into one unitary. The first gate in the list
/// acts first, so it is the rightmost factor.
pub fn compose_circuit(gates: &[(Gate, Option<usize>)], num_qubits: usize) -> Result<UnitaryMatrix> {
    let mut acc = UnitaryMatrix::identity(dim_for_qubits(num_qubits)?)?;
    for (index, &(gate, wire)) in gates.iter().enumerate() {
        let op = operator_for(gate, wire, num_qubits).map_err(|e| QuantumError::InvalidCircuitGate {
            index,
            source: Box::new(e),
        })?;
        acc = op.mul(&acc)?;
    }
    Ok(acc)
}

/// A point on the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochPoint {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Maps `a|0⟩ + b|1⟩` to `(2 Re(a*b), 2 Im(a*b), |a|² − |b|²)`.
pub fn bloch_coordinates(state: &StateVector) -> Result<BlochPoint> {
    if state.num_qubits() != 1 {
        return Err(QuantumError::DimensionMismatch {
            left: state.dim(),
            right: 2,
        });
    }
    let [a, b] = [state.amplitudes[0], state.amplitudes[1]];
    let cross = a.conj() * b;
    Ok(BlochPoint {
        x: 2.0 * cross.re,
        y: 2.0 * cross.im,
        z: a.norm_sqr() - b.norm_sqr(),
    })
}

/// Born-rule probabilities per basis state.
pub fn measurement_probabilities(state: &StateVector) -> Vec<f64> {
    state.amplitudes().iter().map(|a| a.norm_sqr()).collect()
}

/// True when `a = c·b` for some unit-modulus `c`, entry-wise within `tol`.
pub fn equal_up_to_global_phase(a: &StateVector, b: &StateVector, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(QuantumError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let k = b
        .amplitudes()
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.norm_sqr().total_cmp(&y.norm_sqr()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let overlap = b.amplitudes[k].conj() * a.amplitudes[k];
    let phase = if overlap.norm() > f64::EPSILON {
        overlap / overlap.norm()
    } else {
        ONE
    };
    let worst = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max);
    Ok(worst <= tol)
}

/// Display color of a matrix or amplitude entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    /// Positive real.
    Pink,
    /// Negative real.
    Yellow,
    /// Positive imaginary.
    Blue,
    /// Negative imaginary.
    Orange,
    Zero,
}

/// Color class of an entry; mixed entries carry a second color and are
/// rendered as a gradient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColorClass {
    pub primary: Color,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary: Option<Color>,
}

impl ColorClass {
    fn single(primary: Color) -> Self {
        ColorClass {
            primary,
            secondary: None,
        }
    }

    pub fn is_gradient(&self) -> bool {
        self.secondary.is_some()
    }
}

pub fn classify_entry(z: Complex, tol: f64) -> ColorClass {
    let real = if z.re >= 0.0 { Color::Pink } else { Color::Yellow };
    let imag = if z.im >= 0.0 { Color::Blue } else { Color::Orange };
    if z.norm() <= tol {
        ColorClass::single(Color::Zero)
    } else if z.im.abs() <= tol {
        ColorClass::single(real)
    } else if z.re.abs() <= tol {
        ColorClass::single(imag)
    } else {
        ColorClass {
            primary: real,
            secondary: Some(imag),
        }
    }
}

/// Classifies every entry of a matrix, row by row.
pub fn classify_matrix(m: &UnitaryMatrix, tol: f64) -> Vec<Vec<ColorClass>> {
    m.rows()
        .map(|row| row.iter().map(|&z| classify_entry(z, tol)).collect())
        .collect()
}
