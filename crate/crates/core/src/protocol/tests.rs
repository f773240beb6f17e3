use super::*;
use crate::circuit::{parse_circuit, InitState};
use crate::qsim::states_equal_up_to_phase;
use crate::resources::NlbInstance;
use num_complex::Complex64;

const TOL: f64 = 1e-9;

fn circ(text: &str) -> Circuit {
    parse_circuit(text).unwrap()
}

fn started(text: &str, forced: &[bool]) -> ProtocolRun {
    let config = RunConfig {
        forced: forced.to_vec(),
        ..RunConfig::seeded(11)
    };
    let mut run = ProtocolRun::new(circ(text), &config).unwrap();
    run.setup().unwrap();
    run
}

fn single(init: InitState) -> StateVector {
    let (a0, a1) = init.amplitudes();
    StateVector::qubit(a0, a1).unwrap()
}

/// The state Alice holds for `wire`, decrypted with the global key.
fn decrypted_wire(run: &ProtocolRun, wire: usize) -> StateVector {
    let q = run.party(Party::Alice).wire_map[&wire];
    let mut s = run.state().clone();
    decrypt(&mut s, q, run.keys().decrypt_key(wire).unwrap()).unwrap();
    s.extract(&[q]).unwrap()
}

const EXAMPLE: &str = "\
wires 3
owner 0 A
owner 1 B
owner 2 B
out 0 A quantum
out 1 B quantum
out 2 B classical
init 0 plus
H 1
CNOT 1 2
T 0
P 2
";

#[test]
fn phases_are_enforced() {
    let mut run = ProtocolRun::new(circ(EXAMPLE), &RunConfig::default()).unwrap();
    assert_eq!(
        run.distribute_inputs(),
        Err(ProtocolError::Phase {
            expected: Phase::Distribute,
            actual: Phase::Setup
        })
    );
    assert!(matches!(
        run.evaluate_gate(0),
        Err(ProtocolError::Phase { .. })
    ));
    run.setup().unwrap();
    assert!(matches!(run.setup(), Err(ProtocolError::Phase { .. })));
    run.distribute_inputs().unwrap();
    assert_eq!(run.phase(), Phase::Evaluate);
    assert_eq!(
        run.evaluate_gate(1),
        Err(ProtocolError::GateOrder { index: 1, next: 0 })
    );
    run.evaluate_gate(0).unwrap();
    assert_eq!(
        run.evaluate_gate(0),
        Err(ProtocolError::GateOrder { index: 0, next: 1 })
    );
    assert!(matches!(
        run.finalize(),
        Err(ProtocolError::Unevaluated { remaining: 3 })
    ));
}

#[test]
fn invalid_circuit_is_rejected() {
    let mut c = circ(EXAMPLE);
    c.gates.push(Gate::H(7));
    assert!(matches!(
        ProtocolRun::new(c, &RunConfig::default()),
        Err(ProtocolError::InvalidCircuit(_))
    ));
}

#[test]
fn bob_one_teleported_with_forced_outcome() {
    let mut run = started("wires 1\nowner 0 B\nout 0 B\ninit 0 one\n", &[true, false]);
    run.distribute_inputs().unwrap();
    assert_eq!(
        run.keys().share(Party::Bob, 0).unwrap(),
        KeyShare::new(true, false)
    );
    assert_eq!(run.keys().share(Party::Alice, 0).unwrap(), KeyShare::ZERO);
    // Alice holds X|1> = |0>.
    let q = run.party(Party::Alice).wire_map[&0];
    assert!(run.state().probability_one(q).unwrap() < 1e-12);
    assert!(run.party(Party::Bob).wire_map.is_empty());
    let s = decrypted_wire(&run, 0);
    assert!(s.fidelity(&single(InitState::One)).unwrap() > 1.0 - 1e-12);
}

#[test]
fn alice_inputs_are_not_teleported() {
    let mut run = started("wires 2\nowner 0 A\nowner 1 A\nout 0 A\nout 1 A\n", &[]);
    run.distribute_inputs().unwrap();
    assert!(run.transcript().input_teleports.is_empty());
    assert_eq!(run.pool().consumed_epr(), 0);
    assert!(run
        .keys()
        .rows()
        .iter()
        .all(|r| r.x_a + r.z_a + r.x_b + r.z_b == 0));
}

#[test]
fn bob_plus_decrypts_on_every_branch() {
    for outcome in BellOutcome::all() {
        let mut run = started(
            "wires 1\nowner 0 B\nout 0 B\ninit 0 plus\n",
            &[outcome.m_x, outcome.m_z],
        );
        run.distribute_inputs().unwrap();
        assert_eq!(run.transcript().input_teleports[0].outcome, outcome);
        assert_eq!(
            run.keys().share(Party::Bob, 0).unwrap(),
            KeyShare::new(outcome.m_x, outcome.m_z)
        );
        let s = decrypted_wire(&run, 0);
        assert!(
            s.fidelity(&single(InitState::Plus)).unwrap() > 1.0 - 1e-12,
            "{outcome:?}"
        );
    }
}

#[test]
fn hadamard_swaps_encrypted_key() {
    let mut run = started(
        "wires 1\nowner 0 B\nout 0 A\ninit 0 -i\nH 0\nX 0\n",
        &[true, false],
    );
    run.distribute_inputs().unwrap();
    run.evaluate_gate(0).unwrap();
    assert_eq!(
        run.keys().share(Party::Bob, 0).unwrap(),
        KeyShare::new(false, true)
    );
    run.evaluate_gate(1).unwrap();
    assert_eq!(
        run.keys().share(Party::Bob, 0).unwrap(),
        KeyShare::new(false, true)
    );
    let mut expected = single(InitState::MinusI);
    expected.apply_gate(&Gate::H(0)).unwrap();
    expected.apply_gate(&Gate::X(0)).unwrap();
    assert!(decrypted_wire(&run, 0).fidelity(&expected).unwrap() > 1.0 - 1e-12);
}

#[test]
fn random_clifford_circuit_end_to_end() {
    let cfg = GeneratorConfig {
        min_wires: 6,
        max_wires: 6,
        min_gates: 30,
        max_gates: 30,
        t_fraction: 0.0,
        max_t: 0,
    };
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&cfg, &mut rng);
        assert_eq!(c.t_count(), 0);
        let report = run_protocol(&c, &RunConfig::seeded(seed)).unwrap();
        assert!(report.pre_exchange_fidelity > 1.0 - TOL);
        assert!(report.passed(TOL), "seed {seed}: {}", report.to_json());
        assert_eq!(report.resources.nlb, 0);
    }
}

#[test]
fn t_gadget_on_plus_with_zero_keys() {
    let mut run = started(
        "wires 1\nowner 0 A\nout 0 A\ninit 0 plus\nT 0\n",
        &[false, false],
    );
    run.pool_mut().preset_hidden_bit(0, false).unwrap();
    run.distribute_inputs().unwrap();
    run.evaluate_all().unwrap();
    let g = run.transcript().gadgets[0].outcome;
    assert_eq!((g.c, g.d, g.nlb_a, g.nlb_b), (false, false, false, false));
    assert!((g.probability - 0.25).abs() < 1e-12);
    assert_eq!(run.keys().decrypt_key(0).unwrap(), KeyShare::ZERO);
    let q = run.party(Party::Alice).wire_map[&0];
    let actual = run.state().extract(&[q]).unwrap();
    let mut expected = single(InitState::Plus);
    expected.apply_gate(&Gate::T(0)).unwrap();
    assert!(states_equal_up_to_phase(&actual, &expected, 1e-12).unwrap());
}

#[test]
fn t_gadget_exhaustive() {
    for schedule in [GadgetSchedule::AliceFirst, GadgetSchedule::BobFirst] {
        for init in InitState::LABELS {
            for keys in 0..16u8 {
                let bit = |i: u8| keys >> i & 1 == 1;
                let alice = KeyShare::new(bit(0), bit(1));
                let bob = KeyShare::new(bit(2), bit(3));
                let global = alice ^ bob;
                for branch in 0..8u8 {
                    let (c, d, hidden) = (branch & 1 == 1, branch & 2 == 2, branch & 4 == 4);
                    let (a0, a1) = init.amplitudes();
                    let mut state = StateVector::empty();
                    let wire = state.push_qubit(a0, a1).unwrap();
                    if global.z {
                        state.apply_gate(&Gate::Z(wire)).unwrap();
                    }
                    if global.x {
                        state.apply_gate(&Gate::X(wire)).unwrap();
                    }
                    let halves = state.make_epr();
                    let forced = match schedule {
                        GadgetSchedule::AliceFirst => [c, d],
                        GadgetSchedule::BobFirst => [d, c],
                    };
                    let mut outcomes = Outcomes::new(0, forced);
                    let mut nlb = NlbInstance::new(0, 0).with_hidden_bit(hidden);
                    let out = run_t_gadget(
                        &mut state,
                        wire,
                        halves,
                        alice.x,
                        bob.x,
                        &mut nlb,
                        &mut outcomes,
                        schedule,
                    )
                    .unwrap();
                    assert_eq!((out.c, out.d), (c, d));
                    assert!((out.probability - 0.25).abs() < 1e-12);
                    assert_eq!(out.nlb_a ^ out.nlb_b, (alice.x ^ c) & bob.x);

                    let mut table = KeyTable::from_shares(&[alice], &[bob]);
                    table.apply_t_update(0, c, d, out.nlb_a, out.nlb_b).unwrap();
                    decrypt(&mut state, out.output_qubit, table.decrypt_key(0).unwrap()).unwrap();
                    let actual = state.extract(&[out.output_qubit]).unwrap();
                    let mut expected = single(init);
                    expected.apply_gate(&Gate::T(0)).unwrap();
                    assert!(
                        states_equal_up_to_phase(&actual, &expected, 1e-12).unwrap(),
                        "{schedule:?} {init} keys={keys:04b} branch={branch:03b}"
                    );
                }
            }
        }
    }
}

#[test]
fn bob_quantum_output_is_delivered() {
    let c = circ("wires 1\nowner 0 B\nout 0 B\ninit 0 plus\nT 0\nH 0\n");
    for seed in 0..8 {
        let report = run_protocol(&c, &RunConfig::seeded(seed)).unwrap();
        assert!(report.passed(TOL), "{}", report.to_json());
        assert_eq!(report.outputs.len(), 1);
        assert_eq!(report.outputs[0].owner, Party::Bob);
        assert_eq!((report.audit.bits_ab, report.audit.bits_ba), (2, 0));
        assert_eq!(report.transcript.output_teleports.len(), 1);
    }
}

#[test]
fn classical_output_of_x_on_one_is_zero() {
    for owner in ["A", "B"] {
        let c = circ(&format!(
            "wires 1\nowner 0 {owner}\nout 0 {owner} classical\ninit 0 one\nX 0\n"
        ));
        for seed in 0..8 {
            let report = run_protocol(&c, &RunConfig::seeded(seed)).unwrap();
            assert!(report.passed(TOL));
            assert_eq!(report.outputs[0].bit, Some(0));
            assert_eq!(report.outputs[0].probability, Some(1.0));
        }
    }
}

#[test]
fn ledger_matches_estimate() {
    let c = circ(EXAMPLE);
    let est = c.estimate_resources();
    for seed in 0..10 {
        let report = run_protocol(&c, &RunConfig::seeded(seed)).unwrap();
        assert!(report.passed(TOL), "{}", report.to_json());
        let audit = &report.audit;
        assert_eq!(audit.per_channel[&Channel::EprSetup], est.epr);
        assert_eq!(audit.per_channel[&Channel::Nlb], 2 * est.nlb);
        assert_eq!(audit.per_channel[&Channel::Classical], 2);
        assert_eq!(audit.bits_ab, est.classical_bits_ab);
        assert_eq!(audit.bits_ba, est.classical_bits_ba);
        assert_eq!(
            report.phase_log,
            vec![
                Phase::Setup,
                Phase::Distribute,
                Phase::Evaluate,
                Phase::FinalExchange,
                Phase::Done
            ]
        );
    }
}

#[test]
fn single_output_variant_bits() {
    let quantum = circ(
        "wires 2\nowner 0 A\nowner 1 B\nout 0 A\nout 1 none\ninit 1 plus\nCNOT 1 0\nT 0\nH 0\n",
    );
    let classical = circ("wires 2\nowner 0 A\nowner 1 B\nout 0 A classical\nout 1 none\ninit 1 plus\nCNOT 1 0\nT 0\nH 0\n");
    for seed in 0..8 {
        let q = run_single_output_variant(&quantum, &RunConfig::seeded(seed)).unwrap();
        assert!(q.passed(TOL));
        assert_eq!((q.audit.bits_ab, q.audit.bits_ba), (0, 2));
        let c = run_single_output_variant(&classical, &RunConfig::seeded(seed)).unwrap();
        assert!(c.passed(TOL));
        assert_eq!((c.audit.bits_ab, c.audit.bits_ba), (0, 1));
    }
    assert_eq!(single_output_kind(&quantum), Some(OutputKind::Quantum));
    assert_eq!(
        run_single_output_variant(&circ(EXAMPLE), &RunConfig::default()).unwrap_err(),
        ProtocolError::OutputShape
    );
}

#[test]
fn schedules_agree_branch_by_branch() {
    let c = circ(
        "wires 2\nowner 0 A\nowner 1 B\nout 0 A\nout 1 B\ninit 0 plus\ninit 1 i\nCNOT 0 1\nT 1\n",
    );
    // Forced prefix: Bob's input teleport (m_x, m_z), then the gadget's two bits.
    for branch in 0..16u8 {
        let b = |i: u8| branch >> i & 1 == 1;
        let (c_bit, d_bit) = (b(2), b(3));
        let alice_first = RunConfig {
            seed: 5,
            forced: vec![b(0), b(1), c_bit, d_bit],
            schedule: GadgetSchedule::AliceFirst,
        };
        let bob_first = RunConfig {
            forced: vec![b(0), b(1), d_bit, c_bit],
            schedule: GadgetSchedule::BobFirst,
            ..alice_first.clone()
        };
        let ra = run_protocol(&c, &alice_first).unwrap();
        let rb = run_protocol(&c, &bob_first).unwrap();
        let (ga, gb) = (
            ra.transcript.gadgets[0].outcome,
            rb.transcript.gadgets[0].outcome,
        );
        assert_eq!((ga.c, ga.d), (c_bit, d_bit));
        assert_eq!((gb.c, gb.d), (c_bit, d_bit));
        assert!((ga.probability - gb.probability).abs() < 1e-12);
        assert!(ra.passed(TOL) && rb.passed(TOL));
    }
}

#[test]
fn same_seed_same_report() {
    let c = circ(EXAMPLE);
    let a = run_protocol(&c, &RunConfig::seeded(42)).unwrap().to_json();
    let b = run_protocol(&c, &RunConfig::seeded(42)).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn impossible_forced_branch_errors() {
    let c = circ("wires 1\nowner 0 A\nout 0 A classical\n");
    assert_eq!(
        run_protocol(
            &c,
            &RunConfig {
                forced: vec![true],
                ..RunConfig::default()
            }
        )
        .unwrap_err(),
        ProtocolError::Qsim(QsimError::ImpossibleOutcome)
    );
}

#[test]
fn entangled_outputs_across_parties() {
    let c = circ(
        "wires 2\nowner 0 A\nowner 1 B\nout 0 A\nout 1 B\ninit 0 plus\nT 0\nCNOT 0 1\nT 1\nH 1\n",
    );
    for seed in 0..16 {
        let report = run_protocol(&c, &RunConfig::seeded(seed)).unwrap();
        assert!(report.joint_fidelity > 1.0 - TOL, "{}", report.to_json());
        assert!(report.passed(TOL));
    }
}

#[test]
fn sweep_small() {
    let report = sweep(9, 12, &GeneratorConfig::default(), TOL);
    assert_eq!(report.runs.len(), 12);
    assert!(report.all_passed, "{}", report.to_json());
    assert!(report.min_fidelity > 1.0 - TOL);
    assert_ne!(trial_seed(9, 0), trial_seed(9, 1));
}

#[test]
fn amplitude_input_round_trip() {
    let c = circ("wires 1\nowner 0 B\nout 0 B\ninit 0 amp 0.6 0 0 0.8\nT 0\nP 0\nT 0\n");
    assert_eq!(
        c.initial_states[0],
        InitState::Amplitudes(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))
    );
    for seed in 0..8 {
        assert!(run_protocol(&c, &RunConfig::seeded(seed))
            .unwrap()
            .passed(TOL));
    }
}
