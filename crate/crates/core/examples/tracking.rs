//! Following one cell down the triangle: the tracking sequence, its
//! congruence, reconstruction from digits, and the aperiodicity check.
//!
//! cargo run --example tracking

use rotor::tracking::{self, DEFAULT_X_MAX};

fn main() -> rotor::Result<()> {
    let (m, x, r) = (3, 1, 2);

    println!("tracking (x, r) = ({x}, {r}) in T_{m}:");
    for s in tracking::track(m, x, r, 8)? {
        println!("  n = {}: x = {:>3}, r = {}, y = {}", s.n, s.x, s.r, s.y);
    }

    for n in [1, 5, 20] {
        let w = tracking::verify_congruence(m, x, r, n)?;
        println!("congruence at n = {n}: {} = {} mod {} -> {}", w.lhs, w.rhs, w.modulus, w.holds);
    }

    let tail: Vec<u64> = tracking::track(m, 7, 1, 12)?.iter().map(|s| s.r).collect();
    let found = tracking::reconstruct_from_tail(m, &tail, DEFAULT_X_MAX)?;
    println!("digits {tail:?} come from (x, r) = {found:?}");

    let report = tracking::aperiodicity_check(m, x, r, 2000, 40)?;
    println!(
        "aperiodicity over {} digits, periods up to {}: {}",
        report.window,
        report.max_period,
        if report.passed() { "no periodic tail" } else { "periodic tail found" }
    );
    Ok(())
}
