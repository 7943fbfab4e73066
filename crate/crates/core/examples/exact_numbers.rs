// Arithmetic in Z[1/2, w], where w is a primitive eighth root of unity.

use sqrtpi::exactnum::{Cyclo, Dyadic};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let w = Cyclo::omega_pow(1);
    let sqrt2 = &w + &Cyclo::omega_pow(7);
    println!("w + w^7 = {sqrt2}");
    println!("(w + w^7)^2 = {}", &sqrt2 * &sqrt2);
    println!("w^2 * w^2 = {}", &Cyclo::omega_pow(2) * &Cyclo::omega_pow(2));
    println!("conj(w) = {}", w.conjugate());

    let half = Cyclo::from_dyadic(Dyadic::new(1, 1));
    let inv_sqrt2 = &half * &sqrt2;
    println!("1/sqrt2 = {inv_sqrt2} ~ {:?}", inv_sqrt2.to_complex());
    assert!((&inv_sqrt2 * &sqrt2).is_one());

    // JSON form used by `sqrtpi eval --json`
    println!("{}", serde_json::to_string(&inv_sqrt2.to_json())?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
