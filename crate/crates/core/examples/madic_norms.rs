//! Valuations, norms and distances in D_m, and square-root sequences.
//!
//! cargo run --example madic_norms

use num_bigint::BigInt;
use rotor::madic::{self, SqrtSequence};

fn main() -> rotor::Result<()> {
    let m = 3;
    for text in ["0", "9", "18/5", "-27", "1/2"] {
        let q = madic::parse_rational(m, text)?;
        println!("{text:>5}: valuation {:?}, norm {}", q.valuation(), q.norm());
    }

    let a = madic::parse_rational(m, "16")?;
    let b = madic::parse_rational(m, "1")?;
    println!("d(16, 1) = {}", a.distance(&b)?);

    let seq = SqrtSequence::exact(m, BigInt::from(7), BigInt::from(1), 6)?;
    println!("square roots of 7 in D_3:");
    for (n, (t, sq)) in seq.terms.iter().zip(seq.squares()).enumerate() {
        println!("  sigma_{} = {t}, square = {sq}", n + 1);
    }

    let reduced = SqrtSequence::reduced(m, BigInt::from(7), BigInt::from(1), 40, 40)?;
    let all = (1..=40).all(|n| reduced.square_congruence_holds(n));
    println!("sigma_n^2 = 7 mod 3^n for n = 1..=40 (reduced mod 3^40): {all}");
    Ok(())
}
