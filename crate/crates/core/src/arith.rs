use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Inverse of `a` modulo `m` as a least non-negative residue.
pub(crate) fn inverse_mod(a: &BigInt, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let modulus = BigInt::from(m);
    let reduced = a.mod_floor(&modulus);
    let ext = reduced.extended_gcd(&modulus);
    if !ext.gcd.is_one() {
        return None;
    }
    ext.x.mod_floor(&modulus).to_u64()
}

/// Number of times `m` divides `n`. `None` for `n = 0`.
pub(crate) fn multiplicity(n: &BigInt, m: u64) -> Option<u64> {
    debug_assert!(m >= 2);
    if n.is_zero() {
        return None;
    }
    let base = BigInt::from(m);
    let mut rest = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = rest.div_rem(&base);
        if !r.is_zero() {
            return Some(k);
        }
        rest = q;
        k += 1;
    }
}

/// `log2(n)` for positive `n`, accurate to f64 precision even for huge values.
pub(crate) fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap_or(u64::MAX) as f64;
    top.log2() + shift as f64
}

pub(crate) fn log2_signed(n: &BigInt) -> f64 {
    match n.sign() {
        Sign::Plus => log2_big(n.magnitude()),
        _ => f64::NEG_INFINITY,
    }
}

pub(crate) fn pow_u64(base: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub(crate) fn is_unit_mod(n: &BigInt, m: u64) -> bool {
    m == 1 || n.gcd(&BigInt::from(m)).is_one()
}
