//! Pre-shared nonlocal resources and the communication ledger.
//!
//! Resources are matched to their uses by a canonical order both parties can
//! compute from the circuit alone: input-teleport EPR slots by wire, T-gadget
//! slots by gate index, output-teleport slots by wire. Nonlocal boxes follow
//! the T gates in gate order.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::Circuit;
use crate::qsim::StateVector;
use crate::Party;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResourceError {
    #[error("EPR slot {0} does not exist")]
    UnknownSlot(usize),
    #[error("EPR slot {0} was already consumed")]
    SlotConsumed(usize),
    #[error("nonlocal box {0} does not exist")]
    UnknownBox(usize),
    #[error("party {party} already queried nonlocal box {id}")]
    DoubleQuery { id: usize, party: Party },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EprPurpose {
    InputTeleport { wire: usize },
    TGadget { gate: usize },
    OutputTeleport { wire: usize },
}

/// A pre-shared `(|00⟩ + |11⟩)/√2` pair. The qubits are tensored into the
/// simulator when the slot is taken; an untouched pair is a product factor of
/// the global state, so this is the same state as preparing it up front.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EprSlot {
    pub id: usize,
    pub purpose: EprPurpose,
    pub alice_qubit: Option<usize>,
    pub bob_qubit: Option<usize>,
    pub consumed: bool,
}

/// A Popescu-Rohrlich box: on inputs `x` (Alice) and `y` (Bob) it outputs `a`
/// and `b` with `a ⊕ b = x·y`, each marginal uniform.
///
/// Realized with a shared hidden bit `r`: whichever side queries first gets `r`,
/// the second gets `r ⊕ x·y`. The first output therefore never depends on the
/// other side's input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NlbInstance {
    pub id: usize,
    /// Gate index of the T gate this box serves.
    pub gate: usize,
    hidden_bit: Option<bool>,
    alice: Option<NlbQuery>,
    bob: Option<NlbQuery>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NlbQuery {
    pub input: bool,
    pub output: bool,
}

impl NlbInstance {
    pub fn new(id: usize, gate: usize) -> Self {
        Self {
            id,
            gate,
            hidden_bit: None,
            alice: None,
            bob: None,
        }
    }

    /// Fixes the shared randomness instead of sampling it at first query.
    pub fn with_hidden_bit(mut self, bit: bool) -> Self {
        self.hidden_bit = Some(bit);
        self
    }

    pub fn hidden_bit(&self) -> Option<bool> {
        self.hidden_bit
    }

    pub fn query(&self, party: Party) -> Option<NlbQuery> {
        match party {
            Party::Alice => self.alice,
            Party::Bob => self.bob,
        }
    }

    pub fn fully_used(&self) -> bool {
        self.alice.is_some() && self.bob.is_some()
    }

    pub fn invoke<R: Rng + ?Sized>(
        &mut self,
        party: Party,
        input: bool,
        rng: &mut R,
    ) -> Result<bool, ResourceError> {
        if self.query(party).is_some() {
            return Err(ResourceError::DoubleQuery { id: self.id, party });
        }
        let r = *self.hidden_bit.get_or_insert_with(|| rng.gen());
        let output = match self.query(party.other()) {
            None => r,
            Some(first) => r ^ (first.input & input),
        };
        let q = Some(NlbQuery { input, output });
        match party {
            Party::Alice => self.alice = q,
            Party::Bob => self.bob = q,
        }
        Ok(output)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResourcePool {
    epr: Vec<EprSlot>,
    nlb: Vec<NlbInstance>,
}

impl ResourcePool {
    /// One EPR slot per Bob-held input wire, per T gate and per Bob-owned
    /// quantum output, and one box per T gate, in canonical order.
    pub fn allocate(circuit: &Circuit) -> Self {
        let mut pool = Self::default();
        let push = |pool: &mut Self, purpose| {
            let id = pool.epr.len();
            pool.epr.push(EprSlot {
                id,
                purpose,
                alice_qubit: None,
                bob_qubit: None,
                consumed: false,
            });
        };
        for wire in circuit.bob_input_wires() {
            push(&mut pool, EprPurpose::InputTeleport { wire });
        }
        for gate in circuit.t_gate_indices() {
            push(&mut pool, EprPurpose::TGadget { gate });
            let id = pool.nlb.len();
            pool.nlb.push(NlbInstance::new(id, gate));
        }
        for wire in circuit.bob_quantum_output_wires() {
            push(&mut pool, EprPurpose::OutputTeleport { wire });
        }
        pool
    }

    pub fn epr_slots(&self) -> &[EprSlot] {
        &self.epr
    }

    pub fn nlbs(&self) -> &[NlbInstance] {
        &self.nlb
    }

    pub fn slot_for(&self, purpose: EprPurpose) -> Option<usize> {
        self.epr.iter().position(|s| s.purpose == purpose)
    }

    pub fn nlb_for_gate(&self, gate: usize) -> Option<usize> {
        self.nlb.iter().position(|n| n.gate == gate)
    }

    pub fn nlb_mut(&mut self, id: usize) -> Result<&mut NlbInstance, ResourceError> {
        self.nlb.get_mut(id).ok_or(ResourceError::UnknownBox(id))
    }

    pub fn preset_hidden_bit(&mut self, id: usize, bit: bool) -> Result<(), ResourceError> {
        let b = self.nlb_mut(id)?;
        b.hidden_bit = Some(bit);
        Ok(())
    }

    /// Consumes an EPR slot, preparing its pair in `state`. Returns
    /// `(alice_qubit, bob_qubit)`.
    pub fn take_epr(
        &mut self,
        id: usize,
        state: &mut StateVector,
    ) -> Result<(usize, usize), ResourceError> {
        let slot = self.epr.get_mut(id).ok_or(ResourceError::UnknownSlot(id))?;
        if slot.consumed {
            return Err(ResourceError::SlotConsumed(id));
        }
        let (a, b) = state.make_epr();
        slot.alice_qubit = Some(a);
        slot.bob_qubit = Some(b);
        slot.consumed = true;
        Ok((a, b))
    }

    pub fn consumed_epr(&self) -> usize {
        self.epr.iter().filter(|s| s.consumed).count()
    }

    pub fn fully_used_nlb(&self) -> usize {
        self.nlb.iter().filter(|n| n.fully_used()).count()
    }
}

/// Protocol phases, in the only order they may occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Phase {
    Setup,
    Distribute,
    Evaluate,
    FinalExchange,
    Done,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    EprSetup,
    Nlb,
    Classical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEvent {
    pub seq: usize,
    pub phase: Phase,
    pub from: Party,
    pub to: Party,
    pub channel: Channel,
    pub payload_bits: usize,
}

/// Every cross-party interaction of a run, in execution order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CommLedger {
    events: Vec<LedgerEvent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    PhaseRegression {
        seq: usize,
        phase: Phase,
    },
    EprOutsideSetup {
        seq: usize,
        phase: Phase,
    },
    ClassicalOutsideExchange {
        seq: usize,
        phase: Phase,
    },
    NlbCarriesPayload {
        seq: usize,
        bits: usize,
    },
    SelfAddressed {
        seq: usize,
    },
    MessageCount {
        from: Party,
        to: Party,
        count: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditResult {
    pub passed: bool,
    pub violations: Vec<Violation>,
    pub per_channel: BTreeMap<Channel, usize>,
    pub per_phase: BTreeMap<Phase, usize>,
    /// Classical payload, Alice to Bob.
    pub bits_ab: usize,
    /// Classical payload, Bob to Alice.
    pub bits_ba: usize,
}

impl CommLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(
        &mut self,
        phase: Phase,
        from: Party,
        to: Party,
        channel: Channel,
        payload_bits: usize,
    ) {
        let seq = self.events.len();
        self.events.push(LedgerEvent {
            seq,
            phase,
            from,
            to,
            channel,
            payload_bits,
        });
    }

    /// Appends a raw event; `seq` is reassigned. Used to build tampered ledgers in tests.
    pub fn push(&mut self, mut event: LedgerEvent) {
        event.seq = self.events.len();
        self.events.push(event);
    }

    pub fn events(&self) -> &[LedgerEvent] {
        &self.events
    }

    pub fn audit(&self) -> AuditResult {
        let mut violations = Vec::new();
        let mut per_channel = BTreeMap::new();
        let mut per_phase = BTreeMap::new();
        let mut messages = BTreeMap::<(Party, Party), usize>::new();
        let (mut bits_ab, mut bits_ba) = (0, 0);
        let mut last = Phase::Setup;

        for e in &self.events {
            *per_channel.entry(e.channel).or_insert(0) += 1;
            *per_phase.entry(e.phase).or_insert(0) += 1;
            if e.phase < last {
                violations.push(Violation::PhaseRegression {
                    seq: e.seq,
                    phase: e.phase,
                });
            }
            last = last.max(e.phase);
            if e.from == e.to {
                violations.push(Violation::SelfAddressed { seq: e.seq });
            }
            match e.channel {
                Channel::EprSetup if e.phase != Phase::Setup => {
                    violations.push(Violation::EprOutsideSetup {
                        seq: e.seq,
                        phase: e.phase,
                    });
                }
                Channel::Nlb if e.payload_bits != 0 => {
                    violations.push(Violation::NlbCarriesPayload {
                        seq: e.seq,
                        bits: e.payload_bits,
                    });
                }
                Channel::Classical => {
                    if e.phase != Phase::FinalExchange {
                        violations.push(Violation::ClassicalOutsideExchange {
                            seq: e.seq,
                            phase: e.phase,
                        });
                    } else {
                        *messages.entry((e.from, e.to)).or_insert(0) += 1;
                    }
                    match e.from {
                        Party::Alice => bits_ab += e.payload_bits,
                        Party::Bob => bits_ba += e.payload_bits,
                    }
                }
                _ => {}
            }
        }
        for (from, to) in [(Party::Alice, Party::Bob), (Party::Bob, Party::Alice)] {
            let count = messages.get(&(from, to)).copied().unwrap_or(0);
            if count != 1 {
                violations.push(Violation::MessageCount { from, to, count });
            }
        }
        AuditResult {
            passed: violations.is_empty(),
            violations,
            per_channel,
            per_phase,
            bits_ab,
            bits_ba,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn circuit(text: &str) -> Circuit {
        parse_circuit(text).unwrap()
    }

    #[test]
    fn allocation_counts_follow_circuit_structure() {
        let c =
            circuit("wires 2\nowner 0 A\nowner 1 B\nout 0 A quantum\nout 1 B quantum\nT 0\nT 1\n");
        let pool = ResourcePool::allocate(&c);
        assert_eq!(pool.epr_slots().len(), 4);
        assert_eq!(pool.nlbs().len(), 2);
        let purposes: Vec<_> = pool.epr_slots().iter().map(|s| s.purpose).collect();
        assert_eq!(
            purposes,
            vec![
                EprPurpose::InputTeleport { wire: 1 },
                EprPurpose::TGadget { gate: 0 },
                EprPurpose::TGadget { gate: 1 },
                EprPurpose::OutputTeleport { wire: 1 },
            ]
        );
    }

    #[test]
    fn all_alice_clifford_circuit_needs_nothing() {
        let c =
            circuit("wires 2\nowner 0 A\nowner 1 A\nout 0 A\nout 1 A classical\nH 0\nCNOT 0 1\n");
        let pool = ResourcePool::allocate(&c);
        assert!(pool.epr_slots().is_empty());
        assert!(pool.nlbs().is_empty());
    }

    #[test]
    fn three_t_gates_on_one_wire() {
        let c = circuit("wires 1\nowner 0 A\nout 0 A\nT 0\nH 0\nT 0\nT 0\n");
        let pool = ResourcePool::allocate(&c);
        assert_eq!(pool.epr_slots().len(), 3);
        assert_eq!(
            pool.nlbs().iter().map(|n| n.gate).collect::<Vec<_>>(),
            vec![0, 2, 3]
        );
    }

    #[test]
    fn epr_slot_is_single_use() {
        let c = circuit("wires 1\nowner 0 A\nout 0 A\nT 0\n");
        let mut pool = ResourcePool::allocate(&c);
        let mut state = StateVector::empty();
        let (a, b) = pool.take_epr(0, &mut state).unwrap();
        assert_eq!((a, b), (0, 1));
        assert_eq!(
            pool.take_epr(0, &mut state),
            Err(ResourceError::SlotConsumed(0))
        );
        assert_eq!(
            pool.take_epr(7, &mut state),
            Err(ResourceError::UnknownSlot(7))
        );
        assert_eq!(pool.consumed_epr(), 1);
    }

    #[test]
    fn nlb_satisfies_pr_relation_in_both_orders() {
        for x in [false, true] {
            for y in [false, true] {
                for r in [false, true] {
                    let mut n = NlbInstance::new(0, 0).with_hidden_bit(r);
                    let mut rng = ChaCha8Rng::seed_from_u64(0);
                    let a = n.invoke(Party::Alice, x, &mut rng).unwrap();
                    let b = n.invoke(Party::Bob, y, &mut rng).unwrap();
                    assert_eq!(a ^ b, x & y);
                    assert_eq!(a, r);

                    let mut n = NlbInstance::new(0, 0).with_hidden_bit(r);
                    let b = n.invoke(Party::Bob, y, &mut rng).unwrap();
                    let a = n.invoke(Party::Alice, x, &mut rng).unwrap();
                    assert_eq!(a ^ b, x & y);
                    assert_eq!(b, r);
                }
            }
        }
    }

    #[test]
    fn nlb_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut n = NlbInstance::new(0, 0);
        let a = n.invoke(Party::Alice, false, &mut rng).unwrap();
        let b = n.invoke(Party::Bob, true, &mut rng).unwrap();
        assert_eq!(a, b);
        let mut n = NlbInstance::new(0, 0);
        let a = n.invoke(Party::Alice, true, &mut rng).unwrap();
        let b = n.invoke(Party::Bob, true, &mut rng).unwrap();
        assert_eq!(b, !a);
    }

    #[test]
    fn nlb_rejects_second_query_by_same_side() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut n = NlbInstance::new(4, 0);
        n.invoke(Party::Bob, true, &mut rng).unwrap();
        assert_eq!(
            n.invoke(Party::Bob, false, &mut rng),
            Err(ResourceError::DoubleQuery {
                id: 4,
                party: Party::Bob
            })
        );
        assert!(!n.fully_used());
    }

    #[test]
    fn nlb_alice_marginal_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let trials = 10_000;
        let mut ones = 0;
        for i in 0..trials {
            let mut n = NlbInstance::new(0, 0);
            let a = n.invoke(Party::Alice, true, &mut rng).unwrap();
            n.invoke(Party::Bob, i % 2 == 0, &mut rng).unwrap();
            ones += a as usize;
        }
        let freq = ones as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.02, "freq {freq}");
    }

    #[test]
    fn first_output_ignores_counterfactual_other_input() {
        for seed in 0..32 {
            for x in [false, true] {
                let outs: Vec<bool> = [false, true]
                    .iter()
                    .map(|&y| {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        let mut n = NlbInstance::new(0, 0);
                        let a = n.invoke(Party::Alice, x, &mut rng).unwrap();
                        n.invoke(Party::Bob, y, &mut rng).unwrap();
                        a
                    })
                    .collect();
                assert_eq!(outs[0], outs[1]);
            }
        }
    }

    fn good_ledger() -> CommLedger {
        let mut l = CommLedger::new();
        l.record(Phase::Setup, Party::Alice, Party::Bob, Channel::EprSetup, 0);
        l.record(Phase::Evaluate, Party::Alice, Party::Bob, Channel::Nlb, 0);
        l.record(Phase::Evaluate, Party::Bob, Party::Alice, Channel::Nlb, 0);
        l.record(
            Phase::FinalExchange,
            Party::Alice,
            Party::Bob,
            Channel::Classical,
            2,
        );
        l.record(
            Phase::FinalExchange,
            Party::Bob,
            Party::Alice,
            Channel::Classical,
            0,
        );
        l
    }

    #[test]
    fn audit_passes_on_well_formed_ledger() {
        let a = good_ledger().audit();
        assert!(a.passed, "{:?}", a.violations);
        assert_eq!(a.per_channel[&Channel::Classical], 2);
        assert_eq!((a.bits_ab, a.bits_ba), (2, 0));
        assert_eq!(a.per_phase[&Phase::Evaluate], 2);
    }

    #[test]
    fn audit_flags_classical_event_during_evaluation() {
        let mut l = CommLedger::new();
        l.record(
            Phase::Evaluate,
            Party::Bob,
            Party::Alice,
            Channel::Classical,
            1,
        );
        l.record(
            Phase::FinalExchange,
            Party::Alice,
            Party::Bob,
            Channel::Classical,
            0,
        );
        l.record(
            Phase::FinalExchange,
            Party::Bob,
            Party::Alice,
            Channel::Classical,
            0,
        );
        let a = l.audit();
        assert!(!a.passed);
        assert_eq!(
            a.violations,
            vec![Violation::ClassicalOutsideExchange {
                seq: 0,
                phase: Phase::Evaluate
            }]
        );
    }

    #[test]
    fn audit_flags_structural_violations() {
        let mut l = good_ledger();
        l.record(
            Phase::FinalExchange,
            Party::Alice,
            Party::Bob,
            Channel::Classical,
            1,
        );
        l.record(
            Phase::FinalExchange,
            Party::Alice,
            Party::Bob,
            Channel::EprSetup,
            0,
        );
        l.record(Phase::Evaluate, Party::Alice, Party::Bob, Channel::Nlb, 3);
        l.record(Phase::Done, Party::Bob, Party::Bob, Channel::Nlb, 0);
        let v = l.audit().violations;
        assert!(v.contains(&Violation::MessageCount {
            from: Party::Alice,
            to: Party::Bob,
            count: 2
        }));
        assert!(v.contains(&Violation::EprOutsideSetup {
            seq: 6,
            phase: Phase::FinalExchange
        }));
        assert!(v.contains(&Violation::PhaseRegression {
            seq: 7,
            phase: Phase::Evaluate
        }));
        assert!(v.contains(&Violation::NlbCarriesPayload { seq: 7, bits: 3 }));
        assert!(v.contains(&Violation::SelfAddressed { seq: 8 }));
    }

    #[test]
    fn audit_requires_a_message_each_way() {
        let a = CommLedger::new().audit();
        assert!(!a.passed);
        assert_eq!(a.violations.len(), 2);
    }
}
