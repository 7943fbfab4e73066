//! Qubit circuits as gate lists, compiled to combinators over `2 * (2 * ...)`.
//!
//! File format: a `qubits N` line, then one gate per line as `name w1 [w2 [w3]]`.
//! Blank lines and `#` comments are ignored.

use std::fmt;

use crate::gates::{gate_arity, named_gate, place_on_wires};
use crate::lang::{Arg, Term, ValueType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitGate {
    pub name: String,
    pub wires: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<CircuitGate>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct CircuitError {
    pub line: usize,
    pub message: String,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Circuit {
        Circuit { n_qubits, gates: Vec::new() }
    }

    /// Append a gate after checking it against the register.
    pub fn push(&mut self, name: &str, wires: &[usize]) -> Result<&mut Circuit, String> {
        let name = name.to_ascii_lowercase();
        let arity = gate_arity(&name).ok_or_else(|| format!("unknown gate `{name}`"))?;
        if wires.len() != arity {
            return Err(format!("`{name}` acts on {arity} wire(s), got {}", wires.len()));
        }
        for (i, w) in wires.iter().enumerate() {
            if *w >= self.n_qubits {
                return Err(format!("wire {w} out of range for {} qubit(s)", self.n_qubits));
            }
            if wires[..i].contains(w) {
                return Err(format!("wire {w} used twice"));
            }
        }
        self.gates.push(CircuitGate { name, wires: wires.to_vec() });
        Ok(self)
    }

    pub fn register_type(&self) -> ValueType {
        ValueType::qubits(self.n_qubits)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        for g in &self.gates {
            write!(f, "{}", g.name)?;
            for w in &g.wires {
                write!(f, " {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| CircuitError { line, message };
        let mut words = content.split_whitespace();
        let head = words.next().unwrap_or_default();
        match &mut circuit {
            None => {
                let n = match (head, words.next(), words.next()) {
                    ("qubits", Some(n), None) => n.parse::<usize>().ok().filter(|&n| n > 0),
                    _ => None,
                };
                let n = n.ok_or_else(|| err("expected `qubits N` with N >= 1".into()))?;
                circuit = Some(Circuit::new(n));
            }
            Some(c) => {
                let wires = words
                    .map(|w| w.parse::<usize>().map_err(|_| err(format!("bad wire index `{w}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                c.push(head, &wires).map_err(err)?;
            }
        }
    }
    circuit.ok_or(CircuitError { line: 1, message: "empty circuit file (missing `qubits N`)".into() })
}

/// The gate term applied to the given wires of an `n`-qubit register.
pub fn place(gate: Term, wires: &[usize], n: usize) -> Term {
    assert!(!wires.is_empty() && wires.len() <= n, "need 1..=n wires");
    place_on_wires(gate, wires, n)
}

/// Compile to core syntax: a sequence of placed gates, in circuit order.
pub fn compile(c: &Circuit) -> Term {
    let ty = c.register_type();
    if c.gates.is_empty() {
        return Term::ann(Term::id(), ty.clone(), ty);
    }
    Term::seq_all(c.gates.iter().map(|g| {
        let gate = named_gate(&g.name).expect("validated gate name");
        place(gate, &g.wires, c.n_qubits)
    }))
}

/// Compile keeping gate names: a sequence of `at(n, wires.., gate)` macro calls.
pub fn compile_symbolic(c: &Circuit) -> Term {
    let ty = c.register_type();
    if c.gates.is_empty() {
        return Term::ann(Term::id(), ty.clone(), ty);
    }
    Term::seq_all(c.gates.iter().map(|g| {
        let mut args = vec![Arg::Int(c.n_qubits)];
        args.extend(g.wires.iter().map(|&w| Arg::Int(w)));
        args.push(Arg::Term(Term::name(&g.name)));
        Term::mac("at", args)
    }))
}
