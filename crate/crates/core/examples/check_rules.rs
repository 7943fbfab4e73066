// Validate rule families exactly, and watch a corrupted rule fail.

use sqrtpi::lang::parse;
use sqrtpi::rewrite::{find_rule, rule_db, validate_all, validate_rule};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let fam: Vec<_> = rule_db().iter().filter(|r| r.family == "A").cloned().collect();
    let reports = validate_all(&fam);
    for r in &reports {
        println!("{r}");
    }
    let ok = reports.iter().filter(|r| r.passed()).count();
    println!("{ok}/{} pass", reports.len());

    let mut bad = find_rule(rule_db(), "A5").ok_or("A5 missing")?.clone();
    bad.lhs = parse("s ; s ; s")?;
    println!("{}", validate_rule(&bad, &bad.shipped_instantiations()));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
