//! Circuit IR with two-party ownership annotations, its text format, and
//! static resource estimates.
//!
//! The text format is line oriented; `#` starts a comment:
//!
//! ```text
//! wires 3
//! owner 0 A
//! owner 1 B
//! owner 2 B
//! out 0 A quantum
//! out 1 B quantum
//! out 2 B classical
//! init 0 plus
//! H 1
//! CNOT 1 2
//! T 0
//! P 2
//! ```
//!
//! Every wire needs an `owner` and an `out` line; `init` defaults to `zero`.
//! `R` is accepted as an alias for `T`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::qsim::{Gate, GateKind};
use crate::Party;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseErrorKind {
    #[error("unknown gate or directive `{0}`")]
    UnknownDirective(String),
    #[error("`{name}` takes {expected} argument(s), got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("wire {wire} out of range for {wires} wire(s)")]
    WireOutOfRange { wire: usize, wires: usize },
    #[error("CNOT targets must differ, got wire {0} twice")]
    DuplicateTargets(usize),
    #[error("`wires` must be declared before anything that names a wire")]
    MissingWireCount,
    #[error("duplicate `{directive}` declaration{}", wire.map(|w| format!(" for wire {w}")).unwrap_or_default())]
    Duplicate {
        directive: &'static str,
        wire: Option<usize>,
    },
    #[error("wire {0} has no `owner` declaration")]
    MissingOwner(usize),
    #[error("wire {0} has no `out` declaration")]
    MissingOutput(usize),
    #[error("expected a number, got `{0}`")]
    BadNumber(String),
    #[error("expected A or B, got `{0}`")]
    BadParty(String),
    #[error("expected quantum or classical, got `{0}`")]
    BadOutputKind(String),
    #[error("unknown initial state `{0}`")]
    BadInitialState(String),
    #[error("amplitude pair has norm {0}, expected 1")]
    NotNormalized(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Quantum,
    Classical,
}

impl fmt::Display for OutputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputKind::Quantum => "quantum",
            OutputKind::Classical => "classical",
        })
    }
}

/// Who receives a wire at the end, and in what form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Output {
    /// Measured and thrown away.
    Discarded,
    Quantum(Party),
    /// Measured in the computational basis; the owner gets the bit.
    Classical(Party),
}

impl Output {
    pub fn owner(self) -> Option<Party> {
        match self {
            Output::Discarded => None,
            Output::Quantum(p) | Output::Classical(p) => Some(p),
        }
    }

    pub fn kind(self) -> Option<OutputKind> {
        match self {
            Output::Discarded => None,
            Output::Quantum(_) => Some(OutputKind::Quantum),
            Output::Classical(_) => Some(OutputKind::Classical),
        }
    }

    /// Classical bits the other party must send for this output to be decrypted.
    pub fn key_bits(self) -> usize {
        match self {
            Output::Discarded => 0,
            Output::Quantum(_) => 2,
            Output::Classical(_) => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitState {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
    Amplitudes(Complex64, Complex64),
}

impl InitState {
    pub const LABELS: [InitState; 6] = [
        InitState::Zero,
        InitState::One,
        InitState::Plus,
        InitState::Minus,
        InitState::PlusI,
        InitState::MinusI,
    ];

    pub fn amplitudes(self) -> (Complex64, Complex64) {
        let h = FRAC_1_SQRT_2;
        let c = Complex64::new;
        match self {
            InitState::Zero => (c(1.0, 0.0), c(0.0, 0.0)),
            InitState::One => (c(0.0, 0.0), c(1.0, 0.0)),
            InitState::Plus => (c(h, 0.0), c(h, 0.0)),
            InitState::Minus => (c(h, 0.0), c(-h, 0.0)),
            InitState::PlusI => (c(h, 0.0), c(0.0, h)),
            InitState::MinusI => (c(h, 0.0), c(0.0, -h)),
            InitState::Amplitudes(a0, a1) => (a0, a1),
        }
    }
}

impl fmt::Display for InitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitState::Zero => f.write_str("zero"),
            InitState::One => f.write_str("one"),
            InitState::Plus => f.write_str("plus"),
            InitState::Minus => f.write_str("minus"),
            InitState::PlusI => f.write_str("i"),
            InitState::MinusI => f.write_str("-i"),
            InitState::Amplitudes(a0, a1) => {
                write!(f, "amp {} {} {} {}", a0.re, a0.im, a1.re, a1.im)
            }
        }
    }
}

/// A circuit over `num_wires` logical wires. Gates address wires, not qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub num_wires: usize,
    pub input_owner: Vec<Party>,
    pub outputs: Vec<Output>,
    pub initial_states: Vec<InitState>,
    pub gates: Vec<Gate>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResourceEstimate {
    pub epr: usize,
    pub nlb: usize,
    /// Classical key bits Alice sends Bob in the final exchange.
    pub classical_bits_ab: usize,
    /// Classical key bits Bob sends Alice in the final exchange.
    pub classical_bits_ba: usize,
}

impl Circuit {
    /// Wires held by Bob at the start; each one is teleported to Alice.
    pub fn bob_input_wires(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_wires).filter(|&w| self.input_owner[w] == Party::Bob)
    }

    pub fn t_gate_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| g.kind() == GateKind::T)
            .map(|(i, _)| i)
    }

    pub fn t_count(&self) -> usize {
        self.t_gate_indices().count()
    }

    /// Quantum outputs owed to Bob; each one is teleported back at the end.
    pub fn bob_quantum_output_wires(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_wires).filter(|&w| self.outputs[w] == Output::Quantum(Party::Bob))
    }

    pub fn output_wires(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_wires).filter(|&w| self.outputs[w] != Output::Discarded)
    }

    pub fn validate(&self) -> Result<(), ParseErrorKind> {
        let n = self.num_wires;
        for len in [
            self.input_owner.len(),
            self.outputs.len(),
            self.initial_states.len(),
        ] {
            if len != n {
                return Err(ParseErrorKind::WireOutOfRange {
                    wire: len,
                    wires: n,
                });
            }
        }
        for g in &self.gates {
            for w in g.targets() {
                if w >= n {
                    return Err(ParseErrorKind::WireOutOfRange { wire: w, wires: n });
                }
            }
            if let Gate::Cnot { control, target } = *g {
                if control == target {
                    return Err(ParseErrorKind::DuplicateTargets(control));
                }
            }
        }
        for init in &self.initial_states {
            let (a0, a1) = init.amplitudes();
            let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(ParseErrorKind::NotNormalized(norm));
            }
        }
        Ok(())
    }

    pub fn estimate_resources(&self) -> ResourceEstimate {
        let t = self.t_count();
        let mut est = ResourceEstimate {
            epr: self.bob_input_wires().count() + t + self.bob_quantum_output_wires().count(),
            nlb: t,
            ..Default::default()
        };
        for &out in &self.outputs {
            match out.owner() {
                Some(Party::Bob) => est.classical_bits_ab += out.key_bits(),
                Some(Party::Alice) => est.classical_bits_ba += out.key_bits(),
                None => {}
            }
        }
        est
    }

    /// SHA-256 of the canonical text form, hex encoded.
    pub fn hash_hex(&self) -> String {
        hex::encode(Sha256::digest(self.to_string().as_bytes()))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "wires {}", self.num_wires)?;
        for (w, p) in self.input_owner.iter().enumerate() {
            writeln!(f, "owner {w} {p}")?;
        }
        for (w, out) in self.outputs.iter().enumerate() {
            match out {
                Output::Discarded => writeln!(f, "out {w} none")?,
                Output::Quantum(p) => writeln!(f, "out {w} {p} quantum")?,
                Output::Classical(p) => writeln!(f, "out {w} {p} classical")?,
            }
        }
        for (w, init) in self.initial_states.iter().enumerate() {
            writeln!(f, "init {w} {init}")?;
        }
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Circuit {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_circuit(s)
    }
}

struct Builder {
    num_wires: Option<usize>,
    owners: Vec<Option<Party>>,
    outputs: Vec<Option<Output>>,
    inits: Vec<Option<InitState>>,
    gates: Vec<Gate>,
}

impl Builder {
    fn wires(&self) -> Result<usize, ParseErrorKind> {
        self.num_wires.ok_or(ParseErrorKind::MissingWireCount)
    }

    fn wire(&self, tok: &str) -> Result<usize, ParseErrorKind> {
        let wires = self.wires()?;
        let wire = number(tok)?;
        if wire >= wires {
            return Err(ParseErrorKind::WireOutOfRange { wire, wires });
        }
        Ok(wire)
    }
}

fn number(tok: &str) -> Result<usize, ParseErrorKind> {
    tok.parse()
        .map_err(|_| ParseErrorKind::BadNumber(tok.to_string()))
}

fn real(tok: &str) -> Result<f64, ParseErrorKind> {
    tok.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ParseErrorKind::BadNumber(tok.to_string()))
}

fn party(tok: &str) -> Result<Party, ParseErrorKind> {
    match tok {
        "A" => Ok(Party::Alice),
        "B" => Ok(Party::Bob),
        _ => Err(ParseErrorKind::BadParty(tok.to_string())),
    }
}

fn arity(name: &str, args: &[&str], expected: usize) -> Result<(), ParseErrorKind> {
    if args.len() != expected {
        return Err(ParseErrorKind::Arity {
            name: name.to_string(),
            expected,
            got: args.len(),
        });
    }
    Ok(())
}

fn set_once<T>(
    slot: &mut Option<T>,
    value: T,
    directive: &'static str,
    wire: usize,
) -> Result<(), ParseErrorKind> {
    if slot.is_some() {
        return Err(ParseErrorKind::Duplicate {
            directive,
            wire: Some(wire),
        });
    }
    *slot = Some(value);
    Ok(())
}

fn parse_line(b: &mut Builder, name: &str, args: &[&str]) -> Result<(), ParseErrorKind> {
    match name {
        "wires" => {
            arity(name, args, 1)?;
            if b.num_wires.is_some() {
                return Err(ParseErrorKind::Duplicate {
                    directive: "wires",
                    wire: None,
                });
            }
            let n = number(args[0])?;
            b.num_wires = Some(n);
            b.owners = vec![None; n];
            b.outputs = vec![None; n];
            b.inits = vec![None; n];
        }
        "owner" => {
            arity(name, args, 2)?;
            let w = b.wire(args[0])?;
            let p = party(args[1])?;
            set_once(&mut b.owners[w], p, "owner", w)?;
        }
        "out" => {
            if !(2..=3).contains(&args.len()) {
                return Err(ParseErrorKind::Arity {
                    name: name.to_string(),
                    expected: 3,
                    got: args.len(),
                });
            }
            let w = b.wire(args[0])?;
            let kind = match args.get(2) {
                None | Some(&"quantum") => OutputKind::Quantum,
                Some(&"classical") => OutputKind::Classical,
                Some(other) => return Err(ParseErrorKind::BadOutputKind(other.to_string())),
            };
            let out = match (args[1], kind) {
                ("none", _) => Output::Discarded,
                (p, OutputKind::Quantum) => Output::Quantum(party(p)?),
                (p, OutputKind::Classical) => Output::Classical(party(p)?),
            };
            set_once(&mut b.outputs[w], out, "out", w)?;
        }
        "init" => {
            if args.is_empty() {
                return Err(ParseErrorKind::Arity {
                    name: name.to_string(),
                    expected: 2,
                    got: 0,
                });
            }
            let w = b.wire(args[0])?;
            let state = match &args[1..] {
                ["zero"] => InitState::Zero,
                ["one"] => InitState::One,
                ["plus"] => InitState::Plus,
                ["minus"] => InitState::Minus,
                ["i"] => InitState::PlusI,
                ["-i"] => InitState::MinusI,
                ["amp", re0, im0, re1, im1] => {
                    let a0 = Complex64::new(real(re0)?, real(im0)?);
                    let a1 = Complex64::new(real(re1)?, real(im1)?);
                    let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
                    if (norm - 1.0).abs() > 1e-9 {
                        return Err(ParseErrorKind::NotNormalized(norm));
                    }
                    InitState::Amplitudes(a0, a1)
                }
                ["amp", rest @ ..] => {
                    return Err(ParseErrorKind::Arity {
                        name: "init amp".to_string(),
                        expected: 4,
                        got: rest.len(),
                    })
                }
                other => return Err(ParseErrorKind::BadInitialState(other.join(" "))),
            };
            set_once(&mut b.inits[w], state, "init", w)?;
        }
        "CNOT" => {
            arity(name, args, 2)?;
            let control = b.wire(args[0])?;
            let target = b.wire(args[1])?;
            if control == target {
                return Err(ParseErrorKind::DuplicateTargets(control));
            }
            b.gates.push(Gate::Cnot { control, target });
        }
        _ => {
            let kind = match name {
                "X" => GateKind::X,
                "Z" => GateKind::Z,
                "P" => GateKind::P,
                "H" => GateKind::H,
                "T" | "R" => GateKind::T,
                _ => return Err(ParseErrorKind::UnknownDirective(name.to_string())),
            };
            arity(name, args, 1)?;
            let w = b.wire(args[0])?;
            b.gates
                .push(Gate::single(kind, w).expect("single-qubit kind"));
        }
    }
    Ok(())
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut b = Builder {
        num_wires: None,
        owners: Vec::new(),
        outputs: Vec::new(),
        inits: Vec::new(),
        gates: Vec::new(),
    };
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        let Some(name) = tokens.next() else { continue };
        let args: Vec<&str> = tokens.collect();
        parse_line(&mut b, name, &args).map_err(|kind| ParseError { line, kind })?;
    }
    let at_end = |kind| ParseError {
        line: last_line,
        kind,
    };
    let num_wires = b
        .num_wires
        .ok_or_else(|| at_end(ParseErrorKind::MissingWireCount))?;
    let mut input_owner = Vec::with_capacity(num_wires);
    let mut outputs = Vec::with_capacity(num_wires);
    for w in 0..num_wires {
        input_owner.push(b.owners[w].ok_or_else(|| at_end(ParseErrorKind::MissingOwner(w)))?);
        outputs.push(b.outputs[w].ok_or_else(|| at_end(ParseErrorKind::MissingOutput(w)))?);
    }
    let initial_states = b
        .inits
        .iter()
        .map(|i| i.unwrap_or(InitState::Zero))
        .collect();
    Ok(Circuit {
        num_wires,
        input_owner,
        outputs,
        initial_states,
        gates: b.gates,
    })
}

/// Bounds for random circuit generation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub min_wires: usize,
    pub max_wires: usize,
    pub min_gates: usize,
    pub max_gates: usize,
    /// Probability that a generated gate is T (while under `max_t`).
    pub t_fraction: f64,
    pub max_t: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            min_wires: 2,
            max_wires: 6,
            min_gates: 10,
            max_gates: 40,
            t_fraction: 0.2,
            max_t: 10,
        }
    }
}

fn random_party<R: Rng + ?Sized>(rng: &mut R) -> Party {
    if rng.gen() {
        Party::Alice
    } else {
        Party::Bob
    }
}

fn random_init<R: Rng + ?Sized>(rng: &mut R) -> InitState {
    if rng.gen_bool(0.25) {
        let mut a = [0.0f64; 4];
        a.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-3);
        let a: Vec<f64> = a.iter().map(|v| v / norm).collect();
        let (a0, a1) = (Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3]));
        let renorm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        InitState::Amplitudes(a0 / renorm, a1 / renorm)
    } else {
        InitState::LABELS[rng.gen_range(0..InitState::LABELS.len())]
    }
}

fn random_gates<R: Rng + ?Sized>(config: &GeneratorConfig, wires: usize, rng: &mut R) -> Vec<Gate> {
    let count = rng.gen_range(config.min_gates..=config.max_gates.max(config.min_gates));
    let mut t_used = 0;
    (0..count)
        .map(|_| {
            let w = rng.gen_range(0..wires);
            if t_used < config.max_t && rng.gen_bool(config.t_fraction.clamp(0.0, 1.0)) {
                t_used += 1;
                return Gate::T(w);
            }
            let pick = rng.gen_range(0..if wires > 1 { 5 } else { 4 });
            match pick {
                0 => Gate::X(w),
                1 => Gate::Z(w),
                2 => Gate::P(w),
                3 => Gate::H(w),
                _ => Gate::Cnot {
                    control: w,
                    target: (w + rng.gen_range(1..wires)) % wires,
                },
            }
        })
        .collect()
}

/// A random circuit with uniformly random input ownership and a random output
/// assignment (quantum, classical or discarded, for either party).
pub fn random_circuit<R: Rng + ?Sized>(config: &GeneratorConfig, rng: &mut R) -> Circuit {
    let wires =
        rng.gen_range(config.min_wires.max(1)..=config.max_wires.max(config.min_wires.max(1)));
    let input_owner = (0..wires).map(|_| random_party(rng)).collect();
    let outputs = (0..wires)
        .map(|_| match rng.gen_range(0..5) {
            0 | 1 => Output::Quantum(random_party(rng)),
            2 | 3 => Output::Classical(random_party(rng)),
            _ => Output::Discarded,
        })
        .collect();
    let initial_states = (0..wires).map(|_| random_init(rng)).collect();
    let gates = random_gates(config, wires, rng);
    Circuit {
        num_wires: wires,
        input_owner,
        outputs,
        initial_states,
        gates,
    }
}

/// A random circuit whose only output is one Alice-owned wire of `kind`.
pub fn random_single_output_circuit<R: Rng + ?Sized>(
    config: &GeneratorConfig,
    kind: OutputKind,
    rng: &mut R,
) -> Circuit {
    let mut c = random_circuit(config, rng);
    let keep = rng.gen_range(0..c.num_wires);
    for (w, out) in c.outputs.iter_mut().enumerate() {
        *out = if w != keep {
            Output::Discarded
        } else {
            match kind {
                OutputKind::Quantum => Output::Quantum(Party::Alice),
                OutputKind::Classical => Output::Classical(Party::Alice),
            }
        };
    }
    c
}
