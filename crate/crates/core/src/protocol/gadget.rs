//! The entanglement-plus-nonlocal-box T gadget.
//!
//! Input: a wire qubit holding `X^x Z^z |ψ⟩` with `x = x^A ⊕ x^B`, and a fresh
//! EPR pair. Alice applies T, a CNOT from her EPR half onto the wire qubit,
//! measures the wire qubit (`c`) and applies `P^{x^A}` to her EPR half, which
//! becomes the wire. Bob applies `P^{x^B}` then H to his half and measures
//! (`d`). The output is
//!
//! `X^{x ⊕ c} Z^{x ⊕ z ⊕ x^A·c ⊕ (x^A ⊕ c)·x^B ⊕ d} T|ψ⟩`
//!
//! and the only cross term, `(x^A ⊕ c)·x^B`, is split into local bits by one
//! nonlocal box queried with `x^A ⊕ c` (Alice) and `x^B` (Bob).

use serde::Serialize;

use super::{Outcomes, ProtocolError};
use crate::qsim::{Gate, StateVector};
use crate::resources::NlbInstance;
use crate::Party;

/// Which party's measurement happens first. Both give the same joint
/// distribution; the steps touch disjoint qubits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetSchedule {
    #[default]
    AliceFirst,
    BobFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GadgetOutcome {
    /// Alice's measurement of the old wire qubit.
    pub c: bool,
    /// Bob's measurement of his EPR half.
    pub d: bool,
    pub nlb_a: bool,
    pub nlb_b: bool,
    /// Probability of the `(c, d)` branch.
    pub probability: f64,
    /// Qubit now carrying the wire (Alice's EPR half).
    #[serde(skip)]
    pub output_qubit: usize,
}

/// Alice's local steps. Returns `c` and its probability.
fn alice_steps(
    state: &mut StateVector,
    wire_qubit: usize,
    alice_half: usize,
    alice_x: bool,
    outcomes: &mut Outcomes,
) -> Result<(bool, f64), ProtocolError> {
    state.apply_gate(&Gate::T(wire_qubit))?;
    state.apply_gate(&Gate::Cnot {
        control: alice_half,
        target: wire_qubit,
    })?;
    let c = outcomes.measure(state, wire_qubit)?;
    if alice_x {
        state.apply_gate(&Gate::P(alice_half))?;
    }
    Ok((c.bit, c.probability))
}

/// Bob's local steps. Returns `d` and its probability.
fn bob_steps(
    state: &mut StateVector,
    bob_half: usize,
    bob_x: bool,
    outcomes: &mut Outcomes,
) -> Result<(bool, f64), ProtocolError> {
    if bob_x {
        state.apply_gate(&Gate::P(bob_half))?;
    }
    state.apply_gate(&Gate::H(bob_half))?;
    let d = outcomes.measure(state, bob_half)?;
    Ok((d.bit, d.probability))
}

/// Runs the gadget on `wire_qubit` with the EPR pair `(alice_half, bob_half)`.
/// `alice_x` and `bob_x` are the parties' pre-gadget X-key shares of the wire.
/// Forced outcomes are consumed in measurement order (`c, d` for
/// [`GadgetSchedule::AliceFirst`], `d, c` otherwise).
#[allow(clippy::too_many_arguments)]
pub fn run_t_gadget(
    state: &mut StateVector,
    wire_qubit: usize,
    (alice_half, bob_half): (usize, usize),
    alice_x: bool,
    bob_x: bool,
    nlb: &mut NlbInstance,
    outcomes: &mut Outcomes,
    schedule: GadgetSchedule,
) -> Result<GadgetOutcome, ProtocolError> {
    let ((c, pc), (d, pd)) = match schedule {
        GadgetSchedule::AliceFirst => {
            let a = alice_steps(state, wire_qubit, alice_half, alice_x, outcomes)?;
            let b = bob_steps(state, bob_half, bob_x, outcomes)?;
            (a, b)
        }
        GadgetSchedule::BobFirst => {
            let b = bob_steps(state, bob_half, bob_x, outcomes)?;
            let a = alice_steps(state, wire_qubit, alice_half, alice_x, outcomes)?;
            (a, b)
        }
    };
    let (nlb_a, nlb_b) = match schedule {
        GadgetSchedule::AliceFirst => {
            let a = nlb.invoke(Party::Alice, alice_x ^ c, outcomes.rng())?;
            let b = nlb.invoke(Party::Bob, bob_x, outcomes.rng())?;
            (a, b)
        }
        GadgetSchedule::BobFirst => {
            let b = nlb.invoke(Party::Bob, bob_x, outcomes.rng())?;
            let a = nlb.invoke(Party::Alice, alice_x ^ c, outcomes.rng())?;
            (a, b)
        }
    };
    Ok(GadgetOutcome {
        c,
        d,
        nlb_a,
        nlb_b,
        probability: pc * pd,
        output_qubit: alice_half,
    })
}
