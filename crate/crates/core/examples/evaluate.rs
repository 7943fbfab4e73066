// Parse terms, type them and print their exact matrices.

use sqrtpi::lang::{parse, principal_signature};
use sqrtpi::{denote, elaborate};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for src in ["v", "h", "ctrl(x)", "s ; s", "(s ; h)^3", "uniti*l ; (w * h) ; unite*l"] {
        let t = parse(src)?;
        let typed = elaborate(&t, None)?;
        let m = denote(&t, None)?;
        println!("{src}  :  {} <-> {}", typed.src, typed.tgt);
        println!("  {m}");
    }

    // polymorphic terms report their principal signature
    println!("swap+ ; swap+  :  {}", principal_signature(&parse("swap+ ; swap+")?)?);

    let m = denote(&parse("t")?, None)?;
    println!("t, approximately:\n{}", m.display_float());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
