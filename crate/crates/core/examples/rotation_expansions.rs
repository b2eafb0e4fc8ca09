//! Digit expansions of rationals, their carry arithmetic, shifts, and
//! eventually periodic expansions.
//!
//! cargo run --example rotation_expansions

use rotor::expansion;
use rotor::madic;

fn main() -> rotor::Result<()> {
    let m = 3;
    let n = 12;
    let sixteen = expansion::digitize(&madic::parse_rational(m, "16")?, n);
    let half = expansion::digitize(&madic::parse_rational(m, "1/2")?, n);
    println!("R(16)  = {:?}", sixteen.digits());
    println!("R(1/2) = {:?}", half.digits());

    let (sum, carry) = expansion::add(&sixteen, &half, n)?;
    let direct = expansion::digitize(&madic::parse_rational(m, "33/2")?, n);
    println!("R(16) + R(1/2) = {:?}", sum.digits());
    println!("  carries      = {:?}", carry.as_u64());
    println!("  agrees with R(33/2): {}", sum.agrees_with(&direct, n)?);

    let (prod, _) = expansion::multiply_with_carry(&sixteen, &half, n)?;
    let direct = expansion::digitize(&madic::parse_rational(m, "8")?, n);
    println!("R(16) x R(1/2) = {:?}, agrees with R(8): {}", prod.digits(), prod.agrees_with(&direct, n)?);

    let shifted = expansion::shift(&sixteen);
    println!("shift R(16)    = {:?}", shifted.digits());
    println!("unshift again  = {:?}", expansion::unshift(&shifted)?.digits());

    let q = expansion::periodic_to_rational(m, &[2], &[0, 1])?;
    println!("digits 2 (0 1)* sum to {}", q.to_rational());

    println!("madic digits of 16: {:?}", expansion::madic_digitize(&madic::parse_rational(m, "16")?, 5));
    println!("expansion of (x, r) = (1, 2) matches tracking: {}", expansion::expansion_equals_tracking(m, 1, 2, 30)?);
    Ok(())
}
