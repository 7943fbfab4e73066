// Simplify terms with the rule catalog and replay a derivation by hand.

use sqrtpi::lang::parse;
use sqrtpi::rewrite::{unfold, Direction, Rewriter};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rw = Rewriter::default();

    // S;S = Z, once the gate macros are unfolded into core syntax
    let ss = unfold(&parse("s ; s")?)?;
    let trace = rw.simplify(&ss, None, 50)?;
    println!("{}", trace.start);
    for s in &trace.steps {
        println!("  {} {} at {:?}  ->  {}", s.rule, s.direction.as_str(), s.path, s.term);
    }

    // vi = v ; x, step by step
    use Direction::{Backward, Forward};
    let steps: &[(&str, &[usize], Direction)] = &[
        ("idr", &[], Backward),
        ("gates-ii", &[1], Backward),
        ("E2", &[1], Backward),
        ("inv-l", &[0], Forward),
        ("idl", &[0], Forward),
    ];
    let replay = rw.replay(&parse("vi")?, None, steps)?;
    println!("vi  ->  {}  (phase w^{})", replay.result(), replay.total_phase());

    // phase-carrying rules record their phase in the trace
    let t = rw.simplify(&parse("(s ; h)^3 ; x")?, None, 50)?;
    println!("(s;h)^3 ; x  ->  {}  with w^{}", t.result(), t.total_phase());
    println!("{}", serde_json::to_string_pretty(&t.to_json())?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
