//! Rotation remainder expansions: digit streams `s_0, s_1, ...` with
//! `q = sum s_k (m/(m+1))^k` in the `m`-adic sense, and the cumulative-carry
//! arithmetic on them.
//!
//! Streams are finite prefixes. A stream produced by [`digitize`] keeps the
//! generator state `(a_n, b)` so it can be extended; results of arithmetic do
//! not, and must be recomputed from longer inputs to get more digits.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::inverse_mod;
use crate::error::{invalid, Error, Result};
use crate::madic::MadicRational;
use crate::tracking;

/// Where a stream's digits came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// The first digits of `R(q)`.
    Rational(MadicRational),
    /// Output of [`add`], [`multiply`] or similar.
    Arithmetic,
    /// Digits supplied by the caller.
    Literal,
}

/// Resumable state of the digit recurrence: `next` is `a_n` for the next
/// digit index and `den` is `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Generator {
    next: BigInt,
    den: BigInt,
    den_inv: u64,
}

impl Generator {
    fn new(m: u64, num: BigInt, den: BigInt) -> Self {
        let den_inv = inverse_mod(&den, m).expect("denominator is a unit mod m");
        Generator { next: num, den, den_inv }
    }

    /// `s_n = a_n b^-1 mod m`, then `a_{n+1} = (m+1)(a_n - s_n b)/m`.
    fn emit(&mut self, m: u64) -> u64 {
        let base = BigInt::from(m);
        let s = (&self.next * BigInt::from(self.den_inv))
            .mod_floor(&base)
            .to_u64()
            .expect("residue below m");
        let reduced = &self.next - BigInt::from(s) * &self.den;
        debug_assert!(reduced.is_multiple_of(&base));
        self.next = reduced / &base * BigInt::from(m + 1);
        s
    }
}

/// A finite prefix of a rotation remainder expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitStream {
    m: u64,
    digits: Vec<u64>,
    gen: Option<Generator>,
    origin: Origin,
}

impl DigitStream {
    pub fn literal(m: u64, digits: Vec<u64>) -> Result<Self> {
        check_base(m)?;
        if let Some(&bad) = digits.iter().find(|&&d| d >= m) {
            return Err(invalid(format!("digit {bad} is out of range for m = {m}")));
        }
        Ok(DigitStream {
            m,
            digits,
            gen: None,
            origin: Origin::Literal,
        })
    }

    fn arithmetic(m: u64, digits: Vec<u64>) -> Self {
        DigitStream {
            m,
            digits,
            gen: None,
            origin: Origin::Arithmetic,
        }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn is_extendable(&self) -> bool {
        self.gen.is_some()
    }

    /// A copy with at least `n` digits, produced from the stored generator.
    pub fn extend(&self, n: usize) -> Result<Self> {
        let mut out = self.clone();
        if n <= out.digits.len() {
            return Ok(out);
        }
        let gen = out.gen.as_mut().ok_or(Error::InsufficientDigits {
            needed: n,
            available: self.digits.len(),
        })?;
        while out.digits.len() < n {
            out.digits.push(gen.emit(self.m));
        }
        Ok(out)
    }

    /// The first `n` digits as a stream with no generator.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        Ok(DigitStream::arithmetic(self.m, self.prefix(n)?.to_vec()))
    }

    fn prefix(&self, n: usize) -> Result<&[u64]> {
        self.digits.get(..n).ok_or(Error::InsufficientDigits {
            needed: n,
            available: self.digits.len(),
        })
    }

    /// Compare the first `n` digits of two streams.
    pub fn agrees_with(&self, other: &DigitStream, n: usize) -> Result<bool> {
        same_base(self.m, other.m)?;
        Ok(self.prefix(n)? == other.prefix(n)?)
    }

    /// `sum_{k < len} s_k (m/(m+1))^k` as an exact element of `D_m`.
    pub fn partial_sum(&self) -> MadicRational {
        partial_sum(self.m, &self.digits)
    }
}

fn check_base(m: u64) -> Result<()> {
    if m < 2 {
        return Err(invalid(format!("expansions need m >= 2, got {m}")));
    }
    Ok(())
}

fn same_base(left: u64, right: u64) -> Result<()> {
    if left != right {
        return Err(Error::MixedBase { left, right });
    }
    Ok(())
}

pub(crate) fn partial_sum(m: u64, digits: &[u64]) -> MadicRational {
    // Horner from the top: s_0 + beta (s_1 + beta (s_2 + ...)).
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let mb = BigInt::from(m);
    let m1 = BigInt::from(m + 1);
    for &d in digits.iter().rev() {
        num = BigInt::from(d) * &den * &m1 + &num * &mb;
        den = &den * &m1;
    }
    MadicRational::new(m, num, den).expect("powers of m+1 are units mod m")
}

/// Cumulative carries `kappa_0, kappa_1, ...` of a digit-wise addition.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CarryTrace {
    /// `kappa_n` for every output digit `n`; `kappa_0 = 0`.
    #[serde(with = "crate::bigser::decimal_vec")]
    pub kappa: Vec<BigUint>,
    /// The carry going into the first digit that was not produced.
    #[serde(with = "crate::bigser::decimal")]
    pub carry_out: BigUint,
}

impl CarryTrace {
    pub fn as_u64(&self) -> Option<Vec<u64>> {
        self.kappa.iter().map(|k| k.to_u64()).collect()
    }
}

/// The first `n` digits of `R(q)`.
pub fn digitize(q: &MadicRational, n: usize) -> DigitStream {
    let m = q.m();
    let mut gen = Generator::new(m, q.numer().clone(), q.denom().clone());
    let digits = (0..n).map(|_| gen.emit(m)).collect();
    DigitStream {
        m,
        digits,
        gen: Some(gen),
        origin: Origin::Rational(q.clone()),
    }
}

/// The first `n` ordinary `m`-adic digits: `q = sum s_k m^k`.
pub fn madic_digitize(q: &MadicRational, n: usize) -> Vec<u64> {
    let m = q.m();
    let base = BigInt::from(m);
    let den = q.denom();
    let inv = BigInt::from(q.denom_inverse_mod_m());
    let mut a = q.numer().clone();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let s = (&a * &inv).mod_floor(&base);
        a = (&a - &s * den) / &base;
        out.push(s.to_u64().expect("residue below m"));
    }
    out
}

/// Digit-wise sum with cumulative carry: `kappa_{n+1} = kappa_n +
/// floor((a_n + b_n + kappa_n)/m)` and output digit `(a_n + b_n + kappa_n) mod m`.
pub fn add(a: &DigitStream, b: &DigitStream, n: usize) -> Result<(DigitStream, CarryTrace)> {
    add_many(&[a, b], n)
}

/// The same carry rule applied to any number of addends at once.
pub fn add_many(addends: &[&DigitStream], n: usize) -> Result<(DigitStream, CarryTrace)> {
    let first = addends
        .first()
        .ok_or_else(|| invalid("addition needs at least one addend"))?;
    let m = first.m;
    let mut prefixes = Vec::with_capacity(addends.len());
    for s in addends {
        same_base(m, s.m)?;
        prefixes.push(s.prefix(n)?);
    }
    Ok(carry_sum(m, n, |i| prefixes.iter().map(|p| p[i]).sum()))
}

/// Run the carry over column sums supplied by `column(i)`.
fn carry_sum<F>(m: u64, n: usize, column: F) -> (DigitStream, CarryTrace)
where
    F: Fn(usize) -> u64,
{
    let base = BigUint::from(m);
    let mut carry = BigUint::zero();
    let mut kappa = Vec::with_capacity(n);
    let mut digits = Vec::with_capacity(n);
    for i in 0..n {
        kappa.push(carry.clone());
        let total = BigUint::from(column(i)) + &carry;
        let (q, r) = total.div_rem(&base);
        digits.push(r.to_u64().expect("residue below m"));
        carry += q;
    }
    (
        DigitStream::arithmetic(m, digits),
        CarryTrace {
            kappa,
            carry_out: carry,
        },
    )
}

/// `k * a` by repeated addition, for a small integer `k`.
pub fn scalar_multiple(a: &DigitStream, k: u64, n: usize) -> Result<DigitStream> {
    let mut acc = DigitStream::arithmetic(a.m, vec![0; n]);
    let a = a.truncated(n)?;
    for _ in 0..k {
        acc = add(&acc, &a, n)?.0;
    }
    Ok(acc)
}

/// Product of two streams, first `n` digits. Needs `n` digits of each
/// operand: output digit `i` only uses operand digits `0..=i`.
pub fn multiply(a: &DigitStream, b: &DigitStream, n: usize) -> Result<DigitStream> {
    Ok(multiply_with_carry(a, b, n)?.0)
}

/// [`multiply`] together with the carry of the final multi-row sum.
///
/// Builds the "times table" `0·a, 1·a, ..., (m-1)·a` by repeated addition,
/// places `s_j(b)·a` shifted `j` places for each digit of `b`, and adds all
/// rows with one cumulative carry.
pub fn multiply_with_carry(
    a: &DigitStream,
    b: &DigitStream,
    n: usize,
) -> Result<(DigitStream, CarryTrace)> {
    same_base(a.m, b.m)?;
    let m = a.m;
    let b_digits = b.prefix(n)?;
    a.prefix(n)?;
    let mut table = Vec::with_capacity(m as usize);
    table.push(DigitStream::arithmetic(m, vec![0; n]));
    let a_n = a.truncated(n)?;
    for k in 1..m as usize {
        let next = add(&table[k - 1], &a_n, n)?.0;
        table.push(next);
    }
    Ok(carry_sum(m, n, |i| {
        (0..=i)
            .map(|j| table[b_digits[j] as usize].digits[i - j])
            .sum()
    }))
}

/// Multiply by `m/(m+1)`: a 0 is put in front of the digits.
pub fn shift(a: &DigitStream) -> DigitStream {
    let m = a.m;
    let mut digits = Vec::with_capacity(a.digits.len() + 1);
    digits.push(0);
    digits.extend_from_slice(&a.digits);
    // With q = a/b, q m/(m+1) has generator values (m+1) a_n over (m+1) b.
    let gen = a.gen.as_ref().map(|g| {
        let scale = BigInt::from(m + 1);
        Generator::new(m, &g.next * &scale, &g.den * &scale)
    });
    let origin = match &a.origin {
        Origin::Rational(q) => Origin::Rational(q.times_base_ratio()),
        other => other.clone(),
    };
    DigitStream {
        m,
        digits,
        gen,
        origin,
    }
}

/// Inverse of [`shift`]; the leading digit must be 0.
pub fn unshift(a: &DigitStream) -> Result<DigitStream> {
    match a.digits.first() {
        None => return Err(Error::InsufficientDigits { needed: 1, available: 0 }),
        Some(&d) if d != 0 => return Err(Error::NotDivisible(d)),
        Some(_) => {}
    }
    let m = a.m;
    let digits = a.digits[1..].to_vec();
    if let Origin::Rational(q) = &a.origin {
        let up = MadicRational::new(
            m,
            q.numer() * BigInt::from(m + 1),
            q.denom() * BigInt::from(m),
        )?;
        let mut rebuilt = digitize(&up, digits.len());
        debug_assert_eq!(rebuilt.digits, digits);
        rebuilt.digits = digits;
        return Ok(rebuilt);
    }
    Ok(DigitStream {
        m,
        digits,
        gen: None,
        origin: a.origin.clone(),
    })
}

/// Exact value of the eventually periodic stream `pre, period, period, ...`.
pub fn periodic_to_rational(m: u64, preperiod: &[u64], period: &[u64]) -> Result<MadicRational> {
    check_base(m)?;
    if period.is_empty() {
        return Err(invalid("period must contain at least one digit"));
    }
    if let Some(&bad) = preperiod.iter().chain(period).find(|&&d| d >= m) {
        return Err(invalid(format!("digit {bad} is out of range for m = {m}")));
    }
    let ratio = BigRational::new(BigInt::from(m), BigInt::from(m + 1));
    let head = partial_sum(m, preperiod).to_rational();
    let block = partial_sum(m, period).to_rational();
    let p = period.len() as i32;
    let t = preperiod.len() as i32;
    let geometric = BigRational::one() - num_traits::pow(ratio.clone(), p as usize);
    let value = head + num_traits::pow(ratio, t as usize) * block / geometric;
    // (m+1)^p - m^p = 1 mod m, so the denominator stays a unit.
    MadicRational::new(m, value.numer().clone(), value.denom().clone())
}

/// Check `R((m+1) y_0(x, r))` against `r_1, ..., r_n` of the tracking sequence.
pub fn expansion_equals_tracking(m: u64, x: u64, r: u64, n: usize) -> Result<bool> {
    check_base(m)?;
    let states = tracking::track(m, x, r, n)?;
    let y0 = BigInt::from(m + 1) * BigInt::from(x) + BigInt::from(r);
    let q = MadicRational::integer(m, BigInt::from(m + 1) * y0);
    let stream = digitize(&q, n);
    Ok(stream
        .digits
        .iter()
        .zip(states.iter().skip(1))
        .all(|(&d, s)| d == s.r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(m: u64, v: i64) -> MadicRational {
        MadicRational::integer(m, v)
    }

    fn r3(v: i64, n: usize) -> DigitStream {
        digitize(&int(3, v), n)
    }

    #[test]
    fn r16_matches_the_tracked_columns() {
        assert_eq!(r3(16, 12).digits(), &[1, 2, 0, 2, 1, 1, 2, 1, 2, 2, 2, 0]);
    }

    #[test]
    fn small_integer_expansions() {
        assert!(r3(0, 30).digits().iter().all(|&d| d == 0));
        assert!(r3(4, 30).digits().iter().all(|&d| d == 1));
        assert!(r3(8, 30).digits().iter().all(|&d| d == 2));
        assert_eq!(
            r3(9, 21).digits(),
            &[0, 0, 1, 2, 0, 2, 1, 1, 2, 1, 2, 2, 2, 0, 1, 0, 0, 1, 1, 0, 0]
        );
    }

    #[test]
    fn partial_sums_close_in_on_the_value() {
        let q = MadicRational::new(3, 27.into(), 2.into()).unwrap();
        let s = digitize(&q, 30);
        for n in 0..=30 {
            let prefix = DigitStream::literal(3, s.digits()[..n].to_vec()).unwrap();
            let diff = q.checked_sub(&prefix.partial_sum()).unwrap();
            assert!(diff.valuation().at_least(n as u64), "n = {n}");
        }
    }

    #[test]
    fn extend_resumes_the_generator() {
        let short = r3(9, 5);
        let long = short.extend(21).unwrap();
        assert_eq!(long.digits(), r3(9, 21).digits());
        let lit = DigitStream::literal(3, vec![1, 2]).unwrap();
        assert!(matches!(lit.extend(3), Err(Error::InsufficientDigits { .. })));
    }

    #[test]
    fn ordinary_madic_digits() {
        let d = madic_digitize(&int(3, 16), 6);
        assert_eq!(d, vec![1, 2, 1, 0, 0, 0]);
        assert!(madic_digitize(&int(5, 0), 8).iter().all(|&v| v == 0));
        let half = MadicRational::new(3, 1.into(), 2.into()).unwrap();
        let d = madic_digitize(&half, 10);
        assert_eq!(d, vec![2, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn addition_tables() {
        // The printed rows of this table are R(544), R(400) and R(944).
        assert_eq!(r3(544, 13).digits(), &[1, 1, 1, 0, 2, 0, 1, 2, 0, 0, 0, 2, 0]);
        let (sum, carry) = add(&r3(544, 13), &r3(400, 13), 13).unwrap();
        assert_eq!(sum.digits(), &[2, 2, 1, 2, 1, 2, 1, 2, 2, 2, 1, 2, 0]);
        assert_eq!(sum.digits(), r3(944, 13).digits());
        assert_eq!(carry.as_u64().unwrap(), vec![0, 0, 0, 0, 0, 1, 1, 2, 3, 4, 5, 7, 10]);

        let (sum, carry) = add(&r3(9, 13), &r3(9, 13), 13).unwrap();
        assert_eq!(sum.digits(), &[0, 0, 2, 1, 1, 2, 1, 2, 2, 2, 0, 1, 0]);
        assert_eq!(carry.as_u64().unwrap(), vec![0, 0, 0, 0, 1, 1, 2, 3, 4, 6, 8, 12, 17]);

        // Digits of R(1) + R(8) are R(9); the carries follow from the rule.
        let (sum, carry) = add(&r3(1, 13), &r3(8, 13), 13).unwrap();
        assert_eq!(sum.digits(), r3(9, 13).digits());
        assert_eq!(carry.as_u64().unwrap(), vec![0, 1, 2, 3, 4, 6, 8, 11, 15, 20, 27, 36, 48]);
    }

    #[test]
    fn adding_zero_changes_nothing() {
        let (sum, carry) = add(&r3(16, 20), &r3(0, 20), 20).unwrap();
        assert_eq!(sum.digits(), r3(16, 20).digits());
        assert!(carry.kappa.iter().all(|k| k.is_zero()));
    }

    #[test]
    fn addition_errors() {
        assert!(matches!(
            add(&r3(1, 5), &r3(2, 4), 5),
            Err(Error::InsufficientDigits { needed: 5, available: 4 })
        ));
        assert!(matches!(
            add(&r3(1, 5), &digitize(&int(5, 2), 5), 5),
            Err(Error::MixedBase { .. })
        ));
    }

    #[test]
    fn multiplication_tables() {
        let (prod, carry) = multiply_with_carry(&r3(9, 13), &r3(11, 13), 13).unwrap();
        assert_eq!(prod.digits(), &[0, 0, 2, 1, 2, 0, 1, 1, 1, 0, 2, 0, 1]);
        assert_eq!(prod.digits(), r3(99, 13).digits());
        assert_eq!(carry.as_u64().unwrap(), vec![0, 0, 0, 0, 0, 0, 2, 3, 6, 10, 16, 24, 35]);

        let (prod, carry) = multiply_with_carry(&r3(4, 13), &r3(4, 13), 13).unwrap();
        assert_eq!(prod.digits(), r3(16, 13).digits());
        assert_eq!(carry.as_u64().unwrap(), vec![0, 0, 0, 1, 2, 4, 7, 11, 17, 25, 36, 51, 72]);

        assert_eq!(scalar_multiple(&r3(9, 13), 2, 13).unwrap().digits(), r3(18, 13).digits());
    }

    #[test]
    fn ring_identities() {
        let q = r3(37, 25);
        assert_eq!(multiply(&q, &r3(0, 25), 25).unwrap().digits(), r3(0, 25).digits());
        assert_eq!(multiply(&q, &r3(1, 25), 25).unwrap().digits(), q.digits());
    }

    #[test]
    fn naive_digitwise_sum_is_not_the_expansion() {
        // R(16) = 4 * R(4): adding R(4) four times digit-wise mod 3 gives 1,2,0,1,2,0,...
        let naive: Vec<u64> = (1..=12).map(|k| k % 3).collect();
        assert_eq!(naive[..6], [1, 2, 0, 1, 2, 0]);
        assert_ne!(r3(16, 12).digits(), naive.as_slice());
    }

    #[test]
    fn shifting_multiplies_by_the_base() {
        let r12 = shift(&r3(16, 14));
        assert_eq!(r12.digits()[..5], [0, 1, 2, 0, 2]);
        assert_eq!(r12.digits(), r3(12, 15).digits());
        assert_eq!(r12.extend(30).unwrap().digits(), r3(12, 30).digits());
        assert_eq!(shift(&r12).digits(), r3(9, 16).digits());
        assert_eq!(unshift(&r12).unwrap(), r3(16, 14).extend(14).unwrap());
        assert!(matches!(unshift(&r3(16, 5)), Err(Error::NotDivisible(1))));
    }

    #[test]
    fn periodic_streams() {
        assert_eq!(periodic_to_rational(3, &[], &[1]).unwrap(), int(3, 4));
        assert_eq!(periodic_to_rational(3, &[2], &[1]).unwrap(), int(3, 5));
        assert_eq!(periodic_to_rational(3, &[], &[0]).unwrap(), int(3, 0));
        // (1 + 2 beta) / (1 - beta^2) with beta = 3/4 is 40/7.
        let q = periodic_to_rational(3, &[], &[1, 2]).unwrap();
        assert_eq!(q, MadicRational::new(3, 40.into(), 7.into()).unwrap());
        let cycle: Vec<u64> = (0..40).map(|i| [1, 2][i % 2]).collect();
        assert_eq!(digitize(&q, 40).digits(), cycle.as_slice());
        assert!(periodic_to_rational(3, &[], &[]).is_err());
        assert!(periodic_to_rational(3, &[3], &[1]).is_err());
    }

    #[test]
    fn expansion_of_the_tracked_one() {
        assert!(expansion_equals_tracking(3, 1, 0, 12).unwrap());
        assert!(expansion_equals_tracking(3, 1, 0, 0).unwrap());
    }

    fn coprime_den(m: u64, raw: i64) -> i64 {
        let mut d = raw.max(1);
        while num_integer::gcd(d, m as i64) != 1 {
            d += 1;
        }
        d
    }

    proptest::proptest! {
        #[test]
        fn digits_leave_a_remainder_of_growing_valuation(
            m in 2u64..8, a in -3000i64..3000, d in 1i64..50, n in 0usize..40,
        ) {
            let q = MadicRational::new(m, a.into(), coprime_den(m, d).into()).unwrap();
            let s = digitize(&q, n);
            proptest::prop_assert!(s.digits().iter().all(|&v| v < m));
            let diff = q.checked_sub(&s.partial_sum()).unwrap();
            proptest::prop_assert!(diff.valuation().at_least(n as u64));
        }

        #[test]
        fn changing_a_digit_breaks_the_sum(
            m in 2u64..8, a in -3000i64..3000, n in 1usize..60, pos in 0usize..60, bump in 1u64..8,
        ) {
            let pos = pos % n;
            let q = MadicRational::integer(m, a);
            let mut digits = digitize(&q, n).digits().to_vec();
            digits[pos] = (digits[pos] + 1 + bump % (m - 1)) % m;
            let wrong = DigitStream::literal(m, digits).unwrap();
            let v = q.checked_sub(&wrong.partial_sum()).unwrap().valuation();
            proptest::prop_assert_eq!(v.finite(), Some(pos as u64));
        }

        #[test]
        fn addition_is_a_homomorphism(m in 2u64..8, a in -5000i64..5000, b in -5000i64..5000, n in 0usize..60) {
            let (p, q) = (MadicRational::integer(m, a), MadicRational::integer(m, b));
            let (sum, trace) = add(&digitize(&p, n), &digitize(&q, n), n).unwrap();
            proptest::prop_assert_eq!(sum.digits().to_vec(), digitize(&p.checked_add(&q).unwrap(), n).digits().to_vec());
            proptest::prop_assert!(trace.kappa.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn multiplication_is_a_homomorphism(m in 2u64..7, a in -500i64..500, b in -500i64..500, n in 0usize..40) {
            let (p, q) = (MadicRational::integer(m, a), MadicRational::integer(m, b));
            let prod = multiply(&digitize(&p, n), &digitize(&q, n), n).unwrap();
            proptest::prop_assert_eq!(prod.digits().to_vec(), digitize(&p.checked_mul(&q).unwrap(), n).digits().to_vec());
        }

        #[test]
        fn shift_matches_multiplying_by_the_base(m in 2u64..8, a in -3000i64..3000, d in 1i64..50, n in 0usize..40) {
            let q = MadicRational::new(m, a.into(), coprime_den(m, d).into()).unwrap();
            let s = digitize(&q, n);
            let shifted = shift(&s);
            proptest::prop_assert_eq!(shifted.digits().to_vec(), digitize(&q.times_base_ratio(), n + 1).digits().to_vec());
            proptest::prop_assert_eq!(unshift(&shifted).unwrap().digits().to_vec(), s.digits().to_vec());
        }

        #[test]
        fn periodic_streams_round_trip(
            m in 2u64..6,
            pre in proptest::collection::vec(0u64..6, 0..4),
            period in proptest::collection::vec(0u64..6, 1..4),
        ) {
            let pre: Vec<u64> = pre.into_iter().map(|v| v % m).collect();
            let period: Vec<u64> = period.into_iter().map(|v| v % m).collect();
            let q = periodic_to_rational(m, &pre, &period).unwrap();
            let n = pre.len() + 10 * period.len();
            let expected: Vec<u64> = pre.iter().copied().chain(period.iter().copied().cycle()).take(n).collect();
            proptest::prop_assert_eq!(digitize(&q, n).digits().to_vec(), expected);
        }

        #[test]
        fn expansions_follow_the_tracked_cell(m in 2u64..9, x in 1u64..300, r in 0u64..8, n in 0usize..60) {
            proptest::prop_assert!(expansion_equals_tracking(m, x, r % m, n).unwrap());
        }
    }

    #[test]
    fn eventually_constant_expansions_invert() {
        for v in 0..=8 {
            let d = r3(v, 2);
            let tail = [r3(v, 3).digits()[2]];
            assert_eq!(periodic_to_rational(3, &d.digits()[..2], &tail).unwrap(), int(3, v));
        }
    }
}
