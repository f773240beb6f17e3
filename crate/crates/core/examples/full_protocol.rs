//! Runs the whole two-party protocol on a circuit file and prints the report.
//!
//! `cargo run --example full_protocol -- [path] [seed]`

use inqc::circuit::parse_circuit;
use inqc::protocol::{run_protocol, RunConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/example.qc").to_string()
    });
    let seed = args
        .next()
        .map(|s| s.parse().expect("seed is a u64"))
        .unwrap_or(1);

    let text = std::fs::read_to_string(&path).expect("readable circuit file");
    let circuit = parse_circuit(&text).unwrap_or_else(|e| panic!("{path}: {e}"));
    let report = run_protocol(&circuit, &RunConfig::seeded(seed)).expect("protocol run");

    println!("circuit {}", report.circuit_hash);
    println!("phases  {:?}", report.phase_log);
    for e in report.ledger.events() {
        println!(
            "  #{:<2} {:<14} {} -> {} {:<9} {} bits",
            e.seq,
            format!("{:?}", e.phase),
            e.from,
            e.to,
            format!("{:?}", e.channel),
            e.payload_bits
        );
    }
    for t in &report.transcript.input_teleports {
        println!(
            "input teleport wire {}: m_x={} m_z={}",
            t.wire, t.outcome.m_x as u8, t.outcome.m_z as u8
        );
    }
    for g in &report.transcript.gadgets {
        println!(
            "T gadget gate {} on wire {}: c={} d={}",
            g.gate, g.wire, g.outcome.c as u8, g.outcome.d as u8
        );
    }
    for o in &report.outputs {
        match o.bit {
            Some(b) => println!("wire {} -> {} classical bit {b}", o.wire, o.owner),
            None => println!(
                "wire {} -> {} quantum, fidelity {:.12}",
                o.wire, o.owner, o.fidelity
            ),
        }
    }
    println!("joint fidelity {:.12}", report.joint_fidelity);
    println!("passed {}", report.passed(1e-9));
}
