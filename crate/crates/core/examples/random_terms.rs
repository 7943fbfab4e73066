// Generate random well-typed terms and check a few laws on them.

use sqrtpi::lang::invert;
use sqrtpi::semantics::{adjoint, eval};
use sqrtpi::testing::TermGen;
use sqrtpi::{denote, elaborate};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut gen = TermGen::with_limits(42, 8, 3);
    for _ in 0..5 {
        let t = gen.term();
        let typed = elaborate(&t, None)?;
        let m = eval(&typed);
        let inv = denote(&invert(&t), None)?;
        println!("{t}");
        println!("  {} <-> {}, unitary: {}, invert = adjoint: {}", typed.src, typed.tgt, m.is_unitary(), inv == adjoint(&m));
    }
    let word = gen.gate_word(2, 5);
    println!("{word}\n  {}", denote(&word, None)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
