// The five-gate Toffoli construction from controlled square roots of X,
// checked against the doubly controlled NOT.

use sqrtpi::circuits::{compile, parse_circuit};
use sqrtpi::lang::parse;
use sqrtpi::semantics::PhaseMode;
use sqrtpi::{check_equiv, denote};

const SW: &str = "qubits 3
csx 1 2
cx 0 1
csxdg 1 2
cx 0 1
csx 0 2
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let circuit = parse_circuit(SW)?;
    let term = compile(&circuit);
    println!("{} gates, compiled term of size {}", circuit.gates.len(), term.size());
    println!("{}", denote(&term, None)?);

    let ccx = parse("ctrl(ctrl(swap+))")?;
    println!("strict:     {:?}", check_equiv(&term, &ccx, PhaseMode::Strict)?);

    // a global phase is invisible to phase mode but not to strict mode
    let (shs, id) = (parse("(s ; h)^3")?, parse("id")?);
    println!("(s;h)^3 vs id, strict: {:?}", check_equiv(&shs, &id, PhaseMode::Strict)?);
    println!("(s;h)^3 vs id, phase:  {:?}", check_equiv(&shs, &id, PhaseMode::UpToOmegaPower)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
