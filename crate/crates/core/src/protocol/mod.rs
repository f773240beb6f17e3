//! The two-party run.
//!
//! A [`ProtocolRun`] walks through the phases in order:
//!
//! 1. **Setup**: resources are allocated in canonical order and each party
//!    receives its input qubits.
//! 2. **Distribute**: Bob teleports his inputs to Alice and keeps the Bell
//!    outcomes as his key shares instead of sending them.
//! 3. **Evaluate**: Alice applies Clifford gates to the encrypted qubits while
//!    both parties update their shares locally; T gates go through
//!    [`run_t_gadget`].
//! 4. **FinalExchange**: Alice measures classical outputs, teleports Bob's
//!    quantum outputs to him, and the parties swap key shares in one
//!    simultaneous round before decrypting locally.
//!
//! The two parties are simulated in one thread over one shared statevector;
//! what each party may read is enforced by keeping its wires, shares and
//! outcomes in its own [`PartyState`] / [`PartyKeys`].

mod gadget;
mod oracle;
mod report;

use std::collections::{BTreeMap, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub use gadget::{run_t_gadget, GadgetOutcome, GadgetSchedule};
pub use oracle::{oracle_evaluate, OracleOutput};
pub use report::{
    GadgetRecord, MeasurementRecord, OutputReport, ResourceUsage, RunReport, SweepReport, SweepRun,
    TeleportRecord, Transcript, SCHEMA_VERSION,
};

use crate::circuit::{
    random_circuit, Circuit, GeneratorConfig, Output, OutputKind, ParseErrorKind,
};
use crate::pauli_frame::{FrameError, KeyShare, KeyTable, PartyKeys};
use crate::qsim::{
    qubit_density_fidelity, BellOutcome, Gate, MeasurementOutcome, QsimError, StateVector, NORM_TOL,
};
use crate::resources::{Channel, CommLedger, EprPurpose, Phase, ResourceError, ResourcePool};
use crate::Party;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("operation requires phase {expected:?}, run is in {actual:?}")]
    Phase { expected: Phase, actual: Phase },
    #[error("gate {index} evaluated out of order (next is {next})")]
    GateOrder { index: usize, next: usize },
    #[error("{remaining} gate(s) not yet evaluated")]
    Unevaluated { remaining: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(ParseErrorKind),
    #[error("no resource allocated for {0:?}")]
    MissingResource(EprPurpose),
    #[error("no nonlocal box allocated for gate {0}")]
    MissingBox(usize),
    #[error("single-output variant needs exactly one Alice-owned output and none for Bob")]
    OutputShape,
    #[error("simulator: {0}")]
    Qsim(#[from] QsimError),
    #[error("keys: {0}")]
    Frame(#[from] FrameError),
    #[error("resources: {0}")]
    Resource(#[from] ResourceError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    /// Outcomes forced in measurement order; once exhausted, outcomes are sampled.
    /// A Bell measurement takes two entries, `m_x` then `m_z`.
    pub forced: Vec<bool>,
    pub schedule: GadgetSchedule,
}

impl RunConfig {
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            ..Default::default()
        }
    }
}

/// Source of measurement outcomes and shared randomness for one run.
#[derive(Clone, Debug)]
pub struct Outcomes {
    forced: VecDeque<bool>,
    rng: ChaCha8Rng,
    branch_probability: f64,
}

impl Outcomes {
    pub fn new(seed: u64, forced: impl IntoIterator<Item = bool>) -> Self {
        Self {
            forced: forced.into_iter().collect(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            branch_probability: 1.0,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Product of the probabilities of every outcome drawn so far.
    pub fn branch_probability(&self) -> f64 {
        self.branch_probability
    }

    pub fn measure(
        &mut self,
        state: &mut StateVector,
        q: usize,
    ) -> Result<MeasurementOutcome, QsimError> {
        let forced = self.forced.pop_front();
        let out = state.measure_z(q, forced, &mut self.rng)?;
        self.branch_probability *= out.probability;
        Ok(out)
    }

    pub fn bell(
        &mut self,
        state: &mut StateVector,
        q1: usize,
        q2: usize,
    ) -> Result<BellOutcome, QsimError> {
        let fx = self.forced.pop_front();
        let fz = self.forced.pop_front();
        let (out, p) = state.bell_measure_partial(q1, q2, fx, fz, &mut self.rng)?;
        self.branch_probability *= p;
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalGadgetRecord {
    pub gate: usize,
    /// `c` for Alice, `d` for Bob.
    pub measurement: bool,
    pub nlb_output: bool,
}

/// One key-share message of the final exchange.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KeyMessage {
    /// Per output wire: `[x, z]` for a quantum output, `[masked bit or x]` for a classical one.
    pub entries: BTreeMap<usize, Vec<bool>>,
}

impl KeyMessage {
    pub fn payload_bits(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }
}

/// What one party holds locally.
#[derive(Clone, Debug)]
pub struct PartyState {
    pub party: Party,
    /// Logical wire to the physical qubit this party holds for it.
    pub wire_map: BTreeMap<usize, usize>,
    pub gadget_log: Vec<LocalGadgetRecord>,
    /// Raw bits this party measured on encrypted output wires.
    pub measured: BTreeMap<usize, bool>,
    pub inbox: Option<KeyMessage>,
}

impl PartyState {
    fn new(party: Party) -> Self {
        Self {
            party,
            wire_map: BTreeMap::new(),
            gadget_log: Vec::new(),
            measured: BTreeMap::new(),
            inbox: None,
        }
    }

    fn qubit(&self, wire: usize) -> usize {
        *self
            .wire_map
            .get(&wire)
            .unwrap_or_else(|| panic!("party {} holds no qubit for wire {wire}", self.party))
    }
}

pub struct ProtocolRun {
    phase: Phase,
    phase_log: Vec<Phase>,
    circuit: Circuit,
    pool: ResourcePool,
    ledger: CommLedger,
    state: StateVector,
    keys: KeyTable,
    alice: PartyState,
    bob: PartyState,
    outcomes: Outcomes,
    seed: u64,
    schedule: GadgetSchedule,
    next_gate: usize,
    transcript: Transcript,
    pre_exchange_fidelity: Option<f64>,
    decrypted_bits: BTreeMap<usize, bool>,
}

impl ProtocolRun {
    pub fn new(circuit: Circuit, config: &RunConfig) -> Result<Self, ProtocolError> {
        circuit.validate().map_err(ProtocolError::InvalidCircuit)?;
        let keys = KeyTable::new(circuit.num_wires);
        Ok(Self {
            phase: Phase::Setup,
            phase_log: vec![Phase::Setup],
            circuit,
            pool: ResourcePool::default(),
            ledger: CommLedger::new(),
            state: StateVector::empty(),
            keys,
            alice: PartyState::new(Party::Alice),
            bob: PartyState::new(Party::Bob),
            outcomes: Outcomes::new(config.seed, config.forced.iter().copied()),
            seed: config.seed,
            schedule: config.schedule,
            next_gate: 0,
            transcript: Transcript::default(),
            pre_exchange_fidelity: None,
            decrypted_bits: BTreeMap::new(),
        })
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn keys(&self) -> &KeyTable {
        &self.keys
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn pool(&self) -> &ResourcePool {
        &self.pool
    }

    pub fn pool_mut(&mut self) -> &mut ResourcePool {
        &mut self.pool
    }

    pub fn ledger(&self) -> &CommLedger {
        &self.ledger
    }

    pub fn party(&self, party: Party) -> &PartyState {
        match party {
            Party::Alice => &self.alice,
            Party::Bob => &self.bob,
        }
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    fn require(&self, expected: Phase) -> Result<(), ProtocolError> {
        if self.phase != expected {
            return Err(ProtocolError::Phase {
                expected,
                actual: self.phase,
            });
        }
        Ok(())
    }

    fn advance(&mut self, next: Phase) {
        debug_assert!(next > self.phase);
        self.phase = next;
        self.phase_log.push(next);
    }

    fn slot(&self, purpose: EprPurpose) -> Result<usize, ProtocolError> {
        self.pool
            .slot_for(purpose)
            .ok_or(ProtocolError::MissingResource(purpose))
    }

    /// Allocates resources, records their distribution and hands each party
    /// its input qubits.
    pub fn setup(&mut self) -> Result<(), ProtocolError> {
        self.require(Phase::Setup)?;
        self.pool = ResourcePool::allocate(&self.circuit);
        for _ in self.pool.epr_slots() {
            self.ledger
                .record(Phase::Setup, Party::Alice, Party::Bob, Channel::EprSetup, 0);
        }
        for w in 0..self.circuit.num_wires {
            let (a0, a1) = self.circuit.initial_states[w].amplitudes();
            let q = self.state.push_qubit(a0, a1)?;
            match self.circuit.input_owner[w] {
                Party::Alice => self.alice.wire_map.insert(w, q),
                Party::Bob => self.bob.wire_map.insert(w, q),
            };
        }
        self.advance(Phase::Distribute);
        Ok(())
    }

    /// Bob teleports every input wire he holds to Alice. All keys start at
    /// zero; Bob's shares absorb his Bell outcomes.
    pub fn distribute_inputs(&mut self) -> Result<(), ProtocolError> {
        self.require(Phase::Distribute)?;
        let wires: Vec<usize> = self.circuit.bob_input_wires().collect();
        for wire in wires {
            let slot = self.slot(EprPurpose::InputTeleport { wire })?;
            let (alice_half, bob_half) = self.pool.take_epr(slot, &mut self.state)?;
            let input = self.bob.qubit(wire);
            let outcome = self.outcomes.bell(&mut self.state, input, bob_half)?;
            self.keys
                .party_mut(Party::Bob)
                .apply_teleport(wire, outcome)?;
            self.bob.wire_map.remove(&wire);
            self.alice.wire_map.insert(wire, alice_half);
            self.transcript.input_teleports.push(TeleportRecord {
                wire,
                sender: Party::Bob,
                outcome,
            });
        }
        self.advance(Phase::Evaluate);
        Ok(())
    }

    /// Evaluates gate `index`, which must be the next unevaluated gate.
    pub fn evaluate_gate(&mut self, index: usize) -> Result<(), ProtocolError> {
        self.require(Phase::Evaluate)?;
        if index != self.next_gate || index >= self.circuit.gates.len() {
            return Err(ProtocolError::GateOrder {
                index,
                next: self.next_gate,
            });
        }
        let gate = self.circuit.gates[index];
        match gate {
            Gate::T(wire) => self.t_gadget(wire, index)?,
            _ => {
                let physical = gate.map(|w| self.alice.qubit(w));
                self.state.apply_gate(&physical)?;
                for party in [Party::Alice, Party::Bob] {
                    self.keys.party_mut(party).apply_clifford(&gate)?;
                }
            }
        }
        self.next_gate += 1;
        Ok(())
    }

    pub fn evaluate_all(&mut self) -> Result<(), ProtocolError> {
        while self.next_gate < self.circuit.gates.len() {
            self.evaluate_gate(self.next_gate)?;
        }
        Ok(())
    }

    fn t_gadget(&mut self, wire: usize, gate: usize) -> Result<(), ProtocolError> {
        let slot = self.slot(EprPurpose::TGadget { gate })?;
        let nlb_id = self
            .pool
            .nlb_for_gate(gate)
            .ok_or(ProtocolError::MissingBox(gate))?;
        let halves = self.pool.take_epr(slot, &mut self.state)?;
        let alice_x = self.keys.share(Party::Alice, wire)?.x;
        let bob_x = self.keys.share(Party::Bob, wire)?.x;
        let wire_qubit = self.alice.qubit(wire);
        let nlb = self.pool.nlb_mut(nlb_id)?;
        let outcome = run_t_gadget(
            &mut self.state,
            wire_qubit,
            halves,
            alice_x,
            bob_x,
            nlb,
            &mut self.outcomes,
            self.schedule,
        )?;
        let first = match self.schedule {
            GadgetSchedule::AliceFirst => Party::Alice,
            GadgetSchedule::BobFirst => Party::Bob,
        };
        for from in [first, first.other()] {
            self.ledger
                .record(Phase::Evaluate, from, from.other(), Channel::Nlb, 0);
        }
        self.alice.wire_map.insert(wire, outcome.output_qubit);
        self.keys
            .party_mut(Party::Alice)
            .apply_t(wire, outcome.c, outcome.nlb_a)?;
        self.keys
            .party_mut(Party::Bob)
            .apply_t(wire, outcome.d, outcome.nlb_b)?;
        self.alice.gadget_log.push(LocalGadgetRecord {
            gate,
            measurement: outcome.c,
            nlb_output: outcome.nlb_a,
        });
        self.bob.gadget_log.push(LocalGadgetRecord {
            gate,
            measurement: outcome.d,
            nlb_output: outcome.nlb_b,
        });
        self.transcript.gadgets.push(GadgetRecord {
            gate,
            wire,
            outcome,
        });
        Ok(())
    }

    /// Decrypts every wire with the global keys on a copy of the state and
    /// compares against the oracle. Only an outside observer can do this.
    fn omniscient_fidelity(&self, oracle: &OracleOutput) -> Result<f64, ProtocolError> {
        let mut copy = self.state.clone();
        let mut qubits = Vec::with_capacity(self.circuit.num_wires);
        for w in 0..self.circuit.num_wires {
            let q = self.alice.qubit(w);
            let key = self.keys.decrypt_key(w)?;
            decrypt(&mut copy, q, key)?;
            qubits.push(q);
        }
        let decrypted = copy.extract(&qubits)?;
        Ok(decrypted.fidelity(&oracle.state)?)
    }

    /// Output teleports, the simultaneous key exchange and local decryption.
    pub fn finalize(mut self) -> Result<RunReport, ProtocolError> {
        self.require(Phase::Evaluate)?;
        let remaining = self.circuit.gates.len() - self.next_gate;
        if remaining > 0 {
            return Err(ProtocolError::Unevaluated { remaining });
        }
        self.advance(Phase::FinalExchange);
        let oracle = oracle_evaluate(&self.circuit)?;
        self.pre_exchange_fidelity = Some(self.omniscient_fidelity(&oracle)?);

        // Alice measures every wire that ends classical or discarded.
        for wire in 0..self.circuit.num_wires {
            if matches!(
                self.circuit.outputs[wire],
                Output::Classical(_) | Output::Discarded
            ) {
                let q = self.alice.qubit(wire);
                let m = self.outcomes.measure(&mut self.state, q)?;
                self.alice.wire_map.remove(&wire);
                self.alice.measured.insert(wire, m.bit);
                self.transcript
                    .output_measurements
                    .push(MeasurementRecord { wire, raw: m.bit });
            }
        }

        // Alice teleports Bob's quantum outputs and folds the outcome into her shares.
        let bob_outputs: Vec<usize> = self.circuit.bob_quantum_output_wires().collect();
        for wire in bob_outputs {
            let slot = self.slot(EprPurpose::OutputTeleport { wire })?;
            let (alice_half, bob_half) = self.pool.take_epr(slot, &mut self.state)?;
            let q = self.alice.qubit(wire);
            let outcome = self.outcomes.bell(&mut self.state, q, alice_half)?;
            self.keys
                .party_mut(Party::Alice)
                .apply_teleport(wire, outcome)?;
            self.alice.wire_map.remove(&wire);
            self.bob.wire_map.insert(wire, bob_half);
            self.transcript.output_teleports.push(TeleportRecord {
                wire,
                sender: Party::Alice,
                outcome,
            });
        }

        // Both messages are built from pre-barrier local state, then both delivered.
        let to_bob = self.compose_message(Party::Alice)?;
        let to_alice = self.compose_message(Party::Bob)?;
        self.ledger.record(
            Phase::FinalExchange,
            Party::Alice,
            Party::Bob,
            Channel::Classical,
            to_bob.payload_bits(),
        );
        self.ledger.record(
            Phase::FinalExchange,
            Party::Bob,
            Party::Alice,
            Channel::Classical,
            to_alice.payload_bits(),
        );
        self.bob.inbox = Some(to_bob);
        self.alice.inbox = Some(to_alice);

        self.decrypt_locally(Party::Alice)?;
        self.decrypt_locally(Party::Bob)?;
        self.advance(Phase::Done);
        self.report(&oracle)
    }

    /// The message `from` sends: its shares for every output the other party owns.
    fn compose_message(&self, from: Party) -> Result<KeyMessage, ProtocolError> {
        let keys: &PartyKeys = self.keys.party(from);
        let local = self.party(from);
        let mut msg = KeyMessage::default();
        for wire in self.circuit.output_wires() {
            let out = self.circuit.outputs[wire];
            if out.owner() != Some(from.other()) {
                continue;
            }
            let share = keys.get(wire)?;
            let bits = match out {
                Output::Quantum(_) => vec![share.x, share.z],
                // Alice holds the raw bit of every measured wire; she sends it masked.
                Output::Classical(_) => match local.measured.get(&wire) {
                    Some(&raw) => vec![raw ^ share.x],
                    None => vec![share.x],
                },
                Output::Discarded => unreachable!("discarded outputs have no owner"),
            };
            msg.entries.insert(wire, bits);
        }
        Ok(msg)
    }

    fn decrypt_locally(&mut self, party: Party) -> Result<(), ProtocolError> {
        let inbox = self.party(party).inbox.clone().unwrap_or_default();
        for (&wire, bits) in &inbox.entries {
            let own = self.keys.share(party, wire)?;
            match self.circuit.outputs[wire] {
                Output::Quantum(_) => {
                    let key = own ^ KeyShare::new(bits[0], bits[1]);
                    let q = self.party(party).qubit(wire);
                    decrypt(&mut self.state, q, key)?;
                }
                Output::Classical(_) => {
                    let bit = match party {
                        Party::Alice => self.alice.measured[&wire] ^ own.x ^ bits[0],
                        Party::Bob => bits[0] ^ own.x,
                    };
                    self.decrypted_bits.insert(wire, bit);
                }
                Output::Discarded => {}
            }
        }
        Ok(())
    }

    fn report(self, oracle: &OracleOutput) -> Result<RunReport, ProtocolError> {
        let circuit = &self.circuit;
        // Condition the oracle on every measured wire, using the true decrypted
        // value (for discarded wires only an observer knows it).
        let mut conditioned = oracle.clone();
        let mut classical = BTreeMap::new();
        let mut consistent = true;
        for (&wire, &raw) in &self.alice.measured {
            let bit = match self.decrypted_bits.get(&wire) {
                Some(&b) => b,
                None => raw ^ self.keys.decrypt_key(wire)?.x,
            };
            match conditioned.condition(wire, bit)? {
                Some((p, next)) => {
                    classical.insert(wire, (bit, p));
                    conditioned = next;
                }
                None => {
                    classical.insert(wire, (bit, 0.0));
                    consistent = false;
                    break;
                }
            }
        }

        let quantum_wires: Vec<usize> = (0..circuit.num_wires)
            .filter(|&w| matches!(circuit.outputs[w], Output::Quantum(_)))
            .collect();
        let holder = |w: usize| match circuit.outputs[w] {
            Output::Quantum(p) => self.party(p).qubit(w),
            _ => unreachable!(),
        };
        let qubits: Vec<usize> = quantum_wires.iter().map(|&w| holder(w)).collect();
        let actual = self.state.extract(&qubits)?;

        let mut outputs = Vec::new();
        let joint_fidelity = if consistent {
            let expected = conditioned.state.extract(&quantum_wires)?;
            let f = actual.fidelity(&expected)?;
            for (i, &w) in quantum_wires.iter().enumerate() {
                let fid = qubit_density_fidelity(
                    &actual.reduced_density(i)?,
                    &expected.reduced_density(i)?,
                );
                outputs.push((w, fid, None, None));
            }
            f
        } else {
            quantum_wires
                .iter()
                .for_each(|&w| outputs.push((w, 0.0, None, None)));
            0.0
        };
        for (&wire, &(bit, p)) in &classical {
            if matches!(circuit.outputs[wire], Output::Classical(_)) {
                let fid = if p > NORM_TOL { 1.0 } else { 0.0 };
                outputs.push((wire, fid, Some(bit as u8), Some(p)));
            }
        }
        outputs.sort_by_key(|o| o.0);
        let outputs: Vec<OutputReport> = outputs
            .into_iter()
            .map(|(wire, fidelity, bit, probability)| OutputReport {
                wire,
                owner: circuit.outputs[wire].owner().expect("output wire"),
                kind: circuit.outputs[wire].kind().expect("output wire"),
                fidelity,
                bit,
                probability,
            })
            .collect();

        let pre = self.pre_exchange_fidelity.unwrap_or(0.0);
        let oracle_fidelity_min = outputs
            .iter()
            .map(|o| o.fidelity)
            .fold(pre.min(joint_fidelity), f64::min);

        let estimate = circuit.estimate_resources();
        let epr = self.pool.consumed_epr();
        let nlb = self.pool.fully_used_nlb();
        let exact = epr == estimate.epr
            && nlb == estimate.nlb
            && epr == self.pool.epr_slots().len()
            && nlb == self.pool.nlbs().len();

        Ok(RunReport {
            schema: SCHEMA_VERSION,
            circuit_hash: circuit.hash_hex(),
            seed: self.seed,
            schedule: self.schedule,
            phase_log: self.phase_log.clone(),
            resources: ResourceUsage {
                epr,
                nlb,
                estimate,
                exact,
            },
            audit: self.ledger.audit(),
            ledger: self.ledger.clone(),
            keys_final: self.keys.rows(),
            outputs,
            pre_exchange_fidelity: pre,
            joint_fidelity,
            oracle_fidelity_min,
            branch_probability: self.outcomes.branch_probability(),
            transcript: self.transcript.clone(),
        })
    }
}

/// Applies `Z^z X^x`: X first, then Z.
fn decrypt(state: &mut StateVector, q: usize, key: KeyShare) -> Result<(), QsimError> {
    if key.x {
        state.apply_gate(&Gate::X(q))?;
    }
    if key.z {
        state.apply_gate(&Gate::Z(q))?;
    }
    Ok(())
}

/// Runs every phase of the protocol on `circuit`.
pub fn run_protocol(circuit: &Circuit, config: &RunConfig) -> Result<RunReport, ProtocolError> {
    let mut run = ProtocolRun::new(circuit.clone(), config)?;
    run.setup()?;
    run.distribute_inputs()?;
    run.evaluate_all()?;
    run.finalize()
}

/// The single-output case: one Alice-owned output, nothing for Bob, so the
/// exchange reduces to Bob's key bits for that one wire.
pub fn run_single_output_variant(
    circuit: &Circuit,
    config: &RunConfig,
) -> Result<RunReport, ProtocolError> {
    single_output_kind(circuit).ok_or(ProtocolError::OutputShape)?;
    run_protocol(circuit, config)
}

/// Per-trial seed derived from the sweep seed.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add((trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs `trials` random circuits, in parallel, each with its own seed.
pub fn sweep(seed: u64, trials: usize, generator: &GeneratorConfig, tolerance: f64) -> SweepReport {
    let runs: Vec<SweepRun> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let s = trial_seed(seed, trial);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let circuit = random_circuit(generator, &mut rng);
            sweep_run(trial, s, &circuit, tolerance)
        })
        .collect();
    let failures: Vec<usize> = runs.iter().filter(|r| !r.passed).map(|r| r.trial).collect();
    SweepReport {
        schema: SCHEMA_VERSION,
        seed,
        trials,
        tolerance,
        min_fidelity: runs.iter().map(|r| r.fidelity).fold(1.0, f64::min),
        all_passed: failures.is_empty(),
        failures,
        runs,
    }
}

fn sweep_run(trial: usize, seed: u64, circuit: &Circuit, tolerance: f64) -> SweepRun {
    let mut run = SweepRun {
        trial,
        seed,
        circuit_hash: circuit.hash_hex(),
        wires: circuit.num_wires,
        gates: circuit.gates.len(),
        t_gates: circuit.t_count(),
        bob_inputs: circuit.bob_input_wires().count(),
        bob_quantum_outputs: circuit.bob_quantum_output_wires().count(),
        epr: 0,
        nlb: 0,
        resources_exact: false,
        audit_passed: false,
        classical_events: 0,
        fidelity: 0.0,
        passed: false,
        error: None,
    };
    match run_protocol(circuit, &RunConfig::seeded(seed)) {
        Ok(report) => {
            run.epr = report.resources.epr;
            run.nlb = report.resources.nlb;
            run.resources_exact = report.resources.exact;
            run.audit_passed = report.audit.passed;
            run.classical_events = report
                .audit
                .per_channel
                .get(&Channel::Classical)
                .copied()
                .unwrap_or(0);
            run.fidelity = report.oracle_fidelity_min;
            run.passed = report.passed(tolerance);
        }
        Err(e) => run.error = Some(e.to_string()),
    }
    run
}

/// The kind of the sole output if the circuit has exactly one, owned by Alice.
pub fn single_output_kind(circuit: &Circuit) -> Option<OutputKind> {
    let mut outs = circuit.output_wires().map(|w| circuit.outputs[w]);
    match (outs.next(), outs.next()) {
        (Some(Output::Quantum(Party::Alice)), None) => Some(OutputKind::Quantum),
        (Some(Output::Classical(Party::Alice)), None) => Some(OutputKind::Classical),
        _ => None,
    }
}

#[cfg(test)]
mod tests;
