//! Direct evaluation: no encryption, no teleportation, one party.

use crate::circuit::Circuit;
use crate::qsim::{QsimError, StateVector};

/// Output of a plain statevector run. Qubit `w` of `state` is wire `w`.
#[derive(Clone, Debug)]
pub struct OracleOutput {
    pub state: StateVector,
}

impl OracleOutput {
    /// Born distribution `[p(0), p(1)]` of measuring `wire`.
    pub fn classical_distribution(&self, wire: usize) -> Result<[f64; 2], QsimError> {
        let p1 = self.state.probability_one(wire)?;
        Ok([1.0 - p1, p1])
    }

    /// Conditions on `wire` measuring `bit`. Returns the branch probability and
    /// the post-measurement output, or `None` if the branch is impossible.
    pub fn condition(
        &self,
        wire: usize,
        bit: bool,
    ) -> Result<Option<(f64, OracleOutput)>, QsimError> {
        let mut state = self.state.clone();
        let mut rng = rand::rngs::mock::StepRng::new(0, 0);
        match state.measure_z(wire, Some(bit), &mut rng) {
            Ok(out) => Ok(Some((out.probability, OracleOutput { state }))),
            Err(QsimError::ImpossibleOutcome) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

pub fn oracle_evaluate(circuit: &Circuit) -> Result<OracleOutput, QsimError> {
    let mut state = StateVector::empty();
    for init in &circuit.initial_states {
        let (a0, a1) = init.amplitudes();
        state.push_qubit(a0, a1)?;
    }
    for gate in &circuit.gates {
        state.apply_gate(gate)?;
    }
    Ok(OracleOutput { state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::qsim::{states_equal_up_to_phase, Gate};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn oracle(body: &str) -> OracleOutput {
        let text = format!("wires 1\nowner 0 A\nout 0 A\n{body}");
        oracle_evaluate(&parse_circuit(&text).unwrap()).unwrap()
    }

    #[test]
    fn hadamard_on_zero() {
        let out = oracle("init 0 zero\nH 0\n");
        let h = FRAC_1_SQRT_2;
        let plus = StateVector::qubit(Complex64::new(h, 0.0), Complex64::new(h, 0.0)).unwrap();
        assert!(states_equal_up_to_phase(&out.state, &plus, 1e-12).unwrap());
        let dist = out.classical_distribution(0).unwrap();
        assert!((dist[0] - 0.5).abs() < 1e-12 && (dist[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn t_fixes_zero() {
        let out = oracle("init 0 zero\nT 0\n");
        assert!(states_equal_up_to_phase(&out.state, &StateVector::zeros(1), 1e-12).unwrap());
    }

    #[test]
    fn conditioning_on_bell_pair() {
        let c = parse_circuit(
            "wires 2\nowner 0 A\nowner 1 B\nout 0 A classical\nout 1 B\nH 0\nCNOT 0 1\n",
        )
        .unwrap();
        let out = oracle_evaluate(&c).unwrap();
        let (p, post) = out.condition(0, true).unwrap().unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        assert!((post.state.probability_one(1).unwrap() - 1.0).abs() < 1e-12);
        let (_, post0) = out.condition(0, false).unwrap().unwrap();
        assert!(post0.condition(1, true).unwrap().is_none());
        let mut direct = StateVector::zeros(2);
        direct.apply_gate(&Gate::H(0)).unwrap();
        direct
            .apply_gate(&Gate::Cnot {
                control: 0,
                target: 1,
            })
            .unwrap();
        assert!(states_equal_up_to_phase(&out.state, &direct, 1e-12).unwrap());
    }
}
