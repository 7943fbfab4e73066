// Build a circuit in code, place gates on wires and compare against a
// hand-built Kronecker product.

use sqrtpi::circuits::{compile, place, Circuit};
use sqrtpi::denote;
use sqrtpi::gates;
use sqrtpi::semantics::{kronecker, ExactMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut bell = Circuit::new(2);
    bell.push("h", &[0])?.push("cx", &[0, 1])?;
    print!("{bell}");
    println!("{}", denote(&compile(&bell), None)?);

    // H on the middle wire of three
    let placed = denote(&place(gates::h(), &[1], 3), None)?;
    let i2 = ExactMatrix::identity(2);
    let by_hand = kronecker(&kronecker(&i2, &denote(&gates::h(), None)?), &i2);
    assert_eq!(placed, by_hand);
    println!("place(h, [1], 3) matches I (x) H (x) I");

    // wires need not be adjacent or ordered
    let mut c = Circuit::new(3);
    c.push("cx", &[2, 0])?;
    println!("cx 2 0 on 3 qubits:\n{}", denote(&compile(&c), None)?);

    if let Err(e) = Circuit::new(2).push("cx", &[0, 3]) {
        println!("rejected: {e}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
