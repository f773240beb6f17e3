//! Dense statevector simulator for the six-gate set {X, Z, P, H, CNOT, T}.
//!
//! Qubits are addressed by stable ids handed out in allocation order. Once a
//! qubit is measured it is *consumed*: it keeps its id and its collapse bit, but
//! it is factored out of the amplitude vector and any further operation on it is
//! an error. The amplitude vector therefore only spans the live qubits, in
//! increasing id order, little-endian (the lowest live id is the least
//! significant bit of the amplitude index).

pub mod matrix;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on the L2 norm of a state.
pub const NORM_TOL: f64 = 1e-12;
/// Default tolerance on state fidelity comparisons.
pub const FIDELITY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("qubit {0} is out of range")]
    QubitOutOfRange(usize),
    #[error("qubit {0} was already consumed by a measurement")]
    Consumed(usize),
    #[error("two-qubit operation on qubit {0} twice")]
    DuplicateTargets(usize),
    #[error("forced outcome has zero probability")]
    ImpossibleOutcome,
    #[error("dimension mismatch: {0} vs {1} qubits")]
    DimensionMismatch(usize, usize),
    #[error("amplitude vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),
    #[error("extraction must list every live qubit exactly once")]
    IncompleteExtraction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Z,
    P,
    H,
    Cnot,
    T,
}

impl GateKind {
    pub fn is_clifford(self) -> bool {
        self != GateKind::T
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::P => "P",
            GateKind::H => "H",
            GateKind::Cnot => "CNOT",
            GateKind::T => "T",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A gate applied to concrete indices. The same type is used for logical wires
/// in a [`Circuit`](crate::circuit::Circuit) and for physical qubit ids here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    X(usize),
    Z(usize),
    P(usize),
    H(usize),
    T(usize),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn single(kind: GateKind, q: usize) -> Option<Gate> {
        Some(match kind {
            GateKind::X => Gate::X(q),
            GateKind::Z => Gate::Z(q),
            GateKind::P => Gate::P(q),
            GateKind::H => Gate::H(q),
            GateKind::T => Gate::T(q),
            GateKind::Cnot => return None,
        })
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X(_) => GateKind::X,
            Gate::Z(_) => GateKind::Z,
            Gate::P(_) => GateKind::P,
            Gate::H(_) => GateKind::H,
            Gate::T(_) => GateKind::T,
            Gate::Cnot { .. } => GateKind::Cnot,
        }
    }

    /// Target indices; control first for CNOT.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::Z(q) | Gate::P(q) | Gate::H(q) | Gate::T(q) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    /// Same gate with every index passed through `f`.
    pub fn map(&self, mut f: impl FnMut(usize) -> usize) -> Gate {
        match *self {
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(control),
                target: f(target),
            },
            g => Gate::single(g.kind(), f(g.targets()[0])).expect("single-qubit gate"),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            g => write!(f, "{} {}", g.kind(), g.targets()[0]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub bit: bool,
    /// Born probability of the branch that occurred.
    pub probability: f64,
    pub forced: bool,
}

/// Bell-measurement labels: teleporting `|ψ⟩` leaves the receiver with
/// `X^{m_x} Z^{m_z} |ψ⟩`, undone by applying `X^{m_x}` then `Z^{m_z}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BellOutcome {
    pub m_x: bool,
    pub m_z: bool,
}

impl BellOutcome {
    pub fn new(m_x: bool, m_z: bool) -> Self {
        Self { m_x, m_z }
    }

    pub fn all() -> [BellOutcome; 4] {
        [
            Self::new(false, false),
            Self::new(false, true),
            Self::new(true, false),
            Self::new(true, true),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    /// Position in the live amplitude index.
    Live(usize),
    Consumed(bool),
}

#[derive(Clone, Debug)]
pub struct StateVector {
    slots: Vec<Slot>,
    /// Live qubit ids, ascending; `live[pos]` owns bit `pos` of the amplitude index.
    live: Vec<usize>,
    amps: Vec<Complex64>,
}

impl Default for StateVector {
    fn default() -> Self {
        Self::empty()
    }
}

impl StateVector {
    /// A register with no qubits (a single amplitude of 1).
    pub fn empty() -> Self {
        Self {
            slots: Vec::new(),
            live: Vec::new(),
            amps: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// `|0…0⟩` on `n` qubits.
    pub fn zeros(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Self {
            slots: (0..n).map(Slot::Live).collect(),
            live: (0..n).collect(),
            amps,
        }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, QsimError> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(QsimError::BadLength(len));
        }
        let n = len.trailing_zeros() as usize;
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QsimError::NotNormalized(norm));
        }
        Ok(Self {
            slots: (0..n).map(Slot::Live).collect(),
            live: (0..n).collect(),
            amps,
        })
    }

    /// Single-qubit state `a0|0⟩ + a1|1⟩`, normalized.
    pub fn qubit(a0: Complex64, a1: Complex64) -> Result<Self, QsimError> {
        let mut s = Self::empty();
        s.push_qubit(a0, a1)?;
        Ok(s)
    }

    /// Total qubits ever allocated, consumed ones included.
    pub fn num_qubits(&self) -> usize {
        self.slots.len()
    }

    pub fn live_qubits(&self) -> &[usize] {
        &self.live
    }

    pub fn is_live(&self, q: usize) -> bool {
        matches!(self.slots.get(q), Some(Slot::Live(_)))
    }

    /// Collapse bit of a consumed qubit.
    pub fn consumed_bit(&self, q: usize) -> Option<bool> {
        match self.slots.get(q) {
            Some(Slot::Consumed(b)) => Some(*b),
            _ => None,
        }
    }

    /// Amplitudes over the live qubits only.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Full `2^num_qubits` amplitude vector with consumed qubits fixed at their collapse bits.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let n = self.num_qubits();
        let mut fixed = 0usize;
        for (q, slot) in self.slots.iter().enumerate() {
            if let Slot::Consumed(true) = slot {
                fixed |= 1 << q;
            }
        }
        let mut dense = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (i, a) in self.amps.iter().enumerate() {
            let mut idx = fixed;
            for (pos, &q) in self.live.iter().enumerate() {
                if i >> pos & 1 == 1 {
                    idx |= 1 << q;
                }
            }
            dense[idx] = *a;
        }
        dense
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    /// Tensors a fresh qubit `a0|0⟩ + a1|1⟩` (normalized here) onto the register.
    pub fn push_qubit(&mut self, a0: Complex64, a1: Complex64) -> Result<usize, QsimError> {
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if norm <= NORM_TOL || !norm.is_finite() {
            return Err(QsimError::NotNormalized(norm));
        }
        let (a0, a1) = (a0 / norm, a1 / norm);
        let id = self.slots.len();
        let pos = self.live.len();
        let mut amps = Vec::with_capacity(self.amps.len() * 2);
        amps.extend(self.amps.iter().map(|a| a * a0));
        amps.extend(self.amps.iter().map(|a| a * a1));
        self.amps = amps;
        self.slots.push(Slot::Live(pos));
        self.live.push(id);
        Ok(id)
    }

    /// Appends two qubits in `(|00⟩ + |11⟩)/√2` and returns their ids.
    pub fn make_epr(&mut self) -> (usize, usize) {
        let zero = Complex64::new(1.0, 0.0);
        let nil = Complex64::new(0.0, 0.0);
        let a = self
            .push_qubit(zero, nil)
            .expect("basis state is normalized");
        let b = self
            .push_qubit(zero, nil)
            .expect("basis state is normalized");
        self.apply_gate(&Gate::H(a)).expect("fresh qubit");
        self.apply_gate(&Gate::Cnot {
            control: a,
            target: b,
        })
        .expect("fresh qubits");
        (a, b)
    }

    fn position(&self, q: usize) -> Result<usize, QsimError> {
        match self.slots.get(q) {
            None => Err(QsimError::QubitOutOfRange(q)),
            Some(Slot::Consumed(_)) => Err(QsimError::Consumed(q)),
            Some(Slot::Live(pos)) => Ok(*pos),
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), QsimError> {
        match *gate {
            Gate::Cnot { control, target } => {
                if control == target {
                    return Err(QsimError::DuplicateTargets(control));
                }
                let c = 1usize << self.position(control)?;
                let t = 1usize << self.position(target)?;
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            Gate::X(q) => {
                let b = 1usize << self.position(q)?;
                for i in 0..self.amps.len() {
                    if i & b == 0 {
                        self.amps.swap(i, i | b);
                    }
                }
            }
            Gate::Z(q) => self.phase_on_one(q, Complex64::new(-1.0, 0.0))?,
            Gate::P(q) => self.phase_on_one(q, Complex64::new(0.0, 1.0))?,
            Gate::T(q) => self.phase_on_one(q, Complex64::from_polar(1.0, FRAC_PI_4))?,
            Gate::H(q) => {
                let b = 1usize << self.position(q)?;
                for i in 0..self.amps.len() {
                    if i & b == 0 {
                        let (lo, hi) = (self.amps[i], self.amps[i | b]);
                        self.amps[i] = (lo + hi) * FRAC_1_SQRT_2;
                        self.amps[i | b] = (lo - hi) * FRAC_1_SQRT_2;
                    }
                }
            }
        }
        Ok(())
    }

    fn phase_on_one(&mut self, q: usize, phase: Complex64) -> Result<(), QsimError> {
        let b = 1usize << self.position(q)?;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & b != 0 {
                *a *= phase;
            }
        }
        Ok(())
    }

    /// Probability that measuring `q` in the computational basis yields 1.
    pub fn probability_one(&self, q: usize) -> Result<f64, QsimError> {
        let b = 1usize << self.position(q)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & b != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Computational-basis measurement of `q`, either sampled from `rng` with Born
    /// probabilities or forced to a given bit. The qubit is consumed.
    pub fn measure_z<R: Rng + ?Sized>(
        &mut self,
        q: usize,
        forced: Option<bool>,
        rng: &mut R,
    ) -> Result<MeasurementOutcome, QsimError> {
        let pos = self.position(q)?;
        let p1 = self.probability_one(q)?.clamp(0.0, 1.0);
        let bit = match forced {
            Some(bit) => bit,
            None => rng.gen::<f64>() < p1,
        };
        let probability = if bit { p1 } else { 1.0 - p1 };
        if probability <= NORM_TOL {
            return Err(QsimError::ImpossibleOutcome);
        }
        let scale = 1.0 / probability.sqrt();
        // Dropping bit `pos` is monotone on the surviving indices, so filtering in
        // index order lands them in the right compact order.
        self.amps = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> pos & 1 == 1) == bit)
            .map(|(_, a)| a * scale)
            .collect();
        self.live.remove(pos);
        self.slots[q] = Slot::Consumed(bit);
        for (p, &id) in self.live.iter().enumerate().skip(pos) {
            self.slots[id] = Slot::Live(p);
        }
        Ok(MeasurementOutcome {
            bit,
            probability,
            forced: forced.is_some(),
        })
    }

    /// Bell-basis measurement of `(q1, q2)`, consuming both. Returns the outcome
    /// and its probability. With `q1` holding `|ψ⟩` and `q2` one half of an EPR
    /// pair, the other half ends up in `X^{m_x} Z^{m_z} |ψ⟩`.
    pub fn bell_measure<R: Rng + ?Sized>(
        &mut self,
        q1: usize,
        q2: usize,
        forced: Option<BellOutcome>,
        rng: &mut R,
    ) -> Result<(BellOutcome, f64), QsimError> {
        self.bell_measure_partial(q1, q2, forced.map(|o| o.m_x), forced.map(|o| o.m_z), rng)
    }

    /// [`bell_measure`](Self::bell_measure) with each outcome bit forced or sampled independently.
    pub fn bell_measure_partial<R: Rng + ?Sized>(
        &mut self,
        q1: usize,
        q2: usize,
        forced_x: Option<bool>,
        forced_z: Option<bool>,
        rng: &mut R,
    ) -> Result<(BellOutcome, f64), QsimError> {
        if q1 == q2 {
            return Err(QsimError::DuplicateTargets(q1));
        }
        let mut next = self.clone();
        next.apply_gate(&Gate::Cnot {
            control: q1,
            target: q2,
        })?;
        next.apply_gate(&Gate::H(q1))?;
        let mz = next.measure_z(q1, forced_z, rng)?;
        let mx = next.measure_z(q2, forced_x, rng)?;
        *self = next;
        Ok((
            BellOutcome::new(mx.bit, mz.bit),
            mz.probability * mx.probability,
        ))
    }

    /// Pulls the listed qubits out as a fresh register, in the listed order. The
    /// list must be exactly the live qubits; everything else is already a
    /// classical product factor, so the result is the pure state of those qubits.
    pub fn extract(&self, qubits: &[usize]) -> Result<StateVector, QsimError> {
        let mut sorted = qubits.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qubits.len() || sorted != self.live {
            for &q in qubits {
                self.position(q)?;
            }
            return Err(QsimError::IncompleteExtraction);
        }
        let positions: Vec<usize> = qubits
            .iter()
            .map(|&q| self.position(q))
            .collect::<Result<_, _>>()?;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let j = positions
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &pos)| acc | ((i >> pos & 1) << k));
            amps[j] = *a;
        }
        Ok(Self {
            slots: (0..qubits.len()).map(Slot::Live).collect(),
            live: (0..qubits.len()).collect(),
            amps,
        })
    }

    /// `⟨self|other⟩` over the full register.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, QsimError> {
        if self.num_qubits() != other.num_qubits() {
            return Err(QsimError::DimensionMismatch(
                self.num_qubits(),
                other.num_qubits(),
            ));
        }
        if self.slots == other.slots {
            return Ok(dot(&self.amps, &other.amps));
        }
        if self.live == other.live {
            // Same live set, different classical bits somewhere: orthogonal.
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(dot(&self.to_dense(), &other.to_dense()))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64, QsimError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Single-qubit reduced density matrix of `q`, row-major `[ρ00, ρ01, ρ10, ρ11]`.
    pub fn reduced_density(&self, q: usize) -> Result<[Complex64; 4], QsimError> {
        let b = 1usize << self.position(q)?;
        let mut rho = [Complex64::new(0.0, 0.0); 4];
        for i in 0..self.amps.len() {
            if i & b == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | b]);
                rho[0] += a0 * a0.conj();
                rho[1] += a0 * a1.conj();
                rho[2] += a1 * a0.conj();
                rho[3] += a1 * a1.conj();
            }
        }
        Ok(rho)
    }
}

/// True iff `|⟨a|b⟩| ≥ 1 − tol`.
pub fn states_equal_up_to_phase(
    a: &StateVector,
    b: &StateVector,
    tol: f64,
) -> Result<bool, QsimError> {
    Ok(a.inner(b)?.norm() >= 1.0 - tol)
}

/// Uhlmann fidelity between two single-qubit density matrices.
pub fn qubit_density_fidelity(rho: &[Complex64; 4], sigma: &[Complex64; 4]) -> f64 {
    let overlap =
        (rho[0] * sigma[0] + rho[1] * sigma[2] + rho[2] * sigma[1] + rho[3] * sigma[3]).re;
    let det = |m: &[Complex64; 4]| (m[0] * m[3] - m[1] * m[2]).re.max(0.0);
    (overlap + 2.0 * (det(rho) * det(sigma)).sqrt()).clamp(0.0, 1.0)
}

fn l2_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
