//! JSON run and sweep reports.

use serde::Serialize;

use super::gadget::{GadgetOutcome, GadgetSchedule};
use crate::circuit::{OutputKind, ResourceEstimate};
use crate::pauli_frame::KeyRow;
use crate::qsim::BellOutcome;
use crate::resources::{AuditResult, CommLedger, Phase};
use crate::Party;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceUsage {
    /// EPR slots consumed.
    pub epr: usize,
    /// Nonlocal boxes queried by both sides.
    pub nlb: usize,
    pub estimate: ResourceEstimate,
    /// Consumption equals the static estimate and every allocated resource was used.
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TeleportRecord {
    pub wire: usize,
    pub sender: Party,
    pub outcome: BellOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GadgetRecord {
    pub gate: usize,
    pub wire: usize,
    #[serde(flatten)]
    pub outcome: GadgetOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub wire: usize,
    /// Raw bit measured on the encrypted wire.
    pub raw: bool,
}

/// Every random outcome of a run, in order.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Transcript {
    pub input_teleports: Vec<TeleportRecord>,
    pub gadgets: Vec<GadgetRecord>,
    pub output_measurements: Vec<MeasurementRecord>,
    pub output_teleports: Vec<TeleportRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OutputReport {
    pub wire: usize,
    pub owner: Party,
    pub kind: OutputKind,
    /// Quantum: single-wire fidelity against the oracle's conditional state.
    /// Classical: 1 if the decrypted bit is possible under the oracle, else 0.
    pub fidelity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bit: Option<u8>,
    /// Classical only: oracle probability of the decrypted bit, given earlier bits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub circuit_hash: String,
    pub seed: u64,
    pub schedule: GadgetSchedule,
    pub phase_log: Vec<Phase>,
    pub resources: ResourceUsage,
    pub ledger: CommLedger,
    pub audit: AuditResult,
    pub keys_final: Vec<KeyRow>,
    pub outputs: Vec<OutputReport>,
    /// Fidelity of the decrypted joint wire state against the oracle, taken
    /// by an omniscient observer just before the output phase.
    pub pre_exchange_fidelity: f64,
    /// Fidelity of the final joint quantum outputs against the oracle
    /// conditioned on the decrypted measured wires.
    pub joint_fidelity: f64,
    pub oracle_fidelity_min: f64,
    /// Probability of the branch this run took.
    pub branch_probability: f64,
    pub transcript: Transcript,
}

impl RunReport {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.audit.passed && self.resources.exact && self.oracle_fidelity_min >= 1.0 - tolerance
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRun {
    pub trial: usize,
    pub seed: u64,
    pub circuit_hash: String,
    pub wires: usize,
    pub gates: usize,
    pub t_gates: usize,
    pub bob_inputs: usize,
    pub bob_quantum_outputs: usize,
    pub epr: usize,
    pub nlb: usize,
    pub resources_exact: bool,
    pub audit_passed: bool,
    pub classical_events: usize,
    pub fidelity: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub schema: u32,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub min_fidelity: f64,
    pub all_passed: bool,
    pub failures: Vec<usize>,
    pub runs: Vec<SweepRun>,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
