//! Negabinary digits, the (s, k) decomposition, and the closed-form step
//! between lead rows of T_2.
//!
//! cargo run --example negabinary_leads

use num_bigint::BigInt;
use rotor::josephus;

fn main() -> rotor::Result<()> {
    for x in [1, 6, 999, -7] {
        let nb = josephus::to_negabinary(&BigInt::from(x));
        println!("{x:>4} = {nb} in base -2 (back: {})", josephus::from_negabinary(&nb));
    }

    let d = josephus::decompose_sk(&BigInt::from(14))?;
    println!("14: s = {}, k = {}", d.s, d.k);

    println!("lead rows of T_2 from the closed-form step:");
    for step in josephus::l2_sequence(12)? {
        println!(
            "  l_2({:>2}) = {:>8}  k = {}  k-bound {:?}  growth bound {:?}",
            step.n, step.value, step.decomposition.k, step.k_bound.holds, step.super_exponential
        );
    }
    Ok(())
}
