//! Seeded random-circuit sweep. `cargo run --release --example sweep -- [trials] [seed]`

use inqc::circuit::GeneratorConfig;
use inqc::protocol::sweep;

fn main() {
    let mut args = std::env::args().skip(1);
    let trials = args
        .next()
        .map(|s| s.parse().expect("trials"))
        .unwrap_or(100);
    let seed = args.next().map(|s| s.parse().expect("seed")).unwrap_or(0);

    let report = sweep(seed, trials, &GeneratorConfig::default(), 1e-9);
    let gates: usize = report.runs.iter().map(|r| r.gates).sum();
    let t: usize = report.runs.iter().map(|r| r.t_gates).sum();
    let epr: usize = report.runs.iter().map(|r| r.epr).sum();
    println!("{trials} circuits, {gates} gates ({t} T), {epr} EPR pairs consumed");
    println!("min fidelity {:.15}", report.min_fidelity);
    println!("failures {:?}", report.failures);
}
