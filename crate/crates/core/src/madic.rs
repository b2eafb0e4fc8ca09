//! The ring `D_m` of rationals whose reduced denominator is prime to `m`,
//! with the `m`-adic valuation, norm and distance.
//!
//! The valuation only looks at the numerator: `|a/b|_m = m^-k` where `m^k` is
//! the largest power of `m` dividing `a`. For composite `m` this is not
//! multiplicative, only sub-multiplicative.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{inverse_mod, is_unit_mod, multiplicity, pow_u64};
use crate::error::{invalid, Error, Result};

/// An element `num/den` of `D_m`, always in lowest terms with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MadicRational {
    m: u64,
    num: BigInt,
    den: BigInt,
}

fn check_base(m: u64) -> Result<()> {
    if m < 2 {
        return Err(invalid(format!("m-adic base must be at least 2, got {m}")));
    }
    Ok(())
}

impl MadicRational {
    pub fn new(m: u64, num: BigInt, den: BigInt) -> Result<Self> {
        check_base(m)?;
        if den.is_zero() {
            return Err(invalid("denominator is zero"));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if num.is_zero() {
            (BigInt::zero(), BigInt::one())
        } else {
            (num / &g, den / &g)
        };
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if !is_unit_mod(&den, m) {
            return Err(Error::NotInDm {
                m,
                num: num.to_string(),
                den: den.to_string(),
            });
        }
        Ok(MadicRational { m, num, den })
    }

    pub fn integer(m: u64, n: impl Into<BigInt>) -> Self {
        assert!(m >= 2, "m-adic base must be at least 2");
        MadicRational {
            m,
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero(m: u64) -> Self {
        Self::integer(m, 0)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::MixedBase {
                left: self.m,
                right: other.m,
            });
        }
        Ok(())
    }

    fn from_parts(m: u64, num: BigInt, den: BigInt) -> Self {
        // den is a product of units mod m, so reduction cannot fail.
        Self::new(m, num, den).expect("D_m is closed under ring operations")
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        Ok(Self::from_parts(
            self.m,
            &self.num * &other.den + &other.num * &self.den,
            &self.den * &other.den,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        Ok(Self::from_parts(
            self.m,
            &self.num * &other.num,
            &self.den * &other.den,
        ))
    }

    pub fn neg(&self) -> Self {
        MadicRational {
            m: self.m,
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// Multiply by the expansion base `m/(m+1)`.
    pub fn times_base_ratio(&self) -> Self {
        Self::from_parts(
            self.m,
            &self.num * BigInt::from(self.m),
            &self.den * BigInt::from(self.m + 1),
        )
    }

    pub fn valuation(&self) -> Valuation {
        match multiplicity(&self.num, self.m) {
            Some(k) => Valuation::Finite(k),
            None => Valuation::Infinite,
        }
    }

    /// `|q|_m` as the exact rational `m^-k`, or 0.
    pub fn norm(&self) -> BigRational {
        self.valuation().norm(self.m)
    }

    pub fn distance(&self, other: &Self) -> Result<BigRational> {
        Ok(self.checked_sub(other)?.norm())
    }

    /// `den^-1 mod m` as a least residue.
    pub(crate) fn denom_inverse_mod_m(&self) -> u64 {
        inverse_mod(&self.den, self.m).expect("denominator is a unit mod m")
    }
}

impl fmt::Display for MadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Parse `"a/b"` or `"a"`, with an optional sign on `a`.
pub fn parse_rational(m: u64, text: &str) -> Result<MadicRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let parse = |s: &str| {
        s.parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("malformed rational {text:?}, expected num/den")))
    };
    MadicRational::new(m, parse(num)?, parse(den)?)
}

/// Power of `m` dividing the numerator; `Infinite` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, k: u64) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn norm(self, m: u64) -> BigRational {
        match self {
            Valuation::Finite(k) => BigRational::new(BigInt::one(), pow_u64(m, k)),
            Valuation::Infinite => BigRational::zero(),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Largest exact term index [`SqrtSequence::exact`] accepts. Exact terms
/// roughly double in length each step, so term 22 already has millions of
/// digits.
pub const MAX_EXACT_SQRT_TERMS: usize = 22;

/// `sigma_{n+1} = (c - sigma_n^2) (2 sigma_1)^-1 + sigma_n`, whose squares
/// converge to `c` in `D_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtSequence {
    pub m: u64,
    pub c: BigInt,
    pub sigma1: BigInt,
    /// `(2 sigma_1)^-1 mod m` as a least residue.
    pub inv: u64,
    /// `sigma_1, sigma_2, ...`.
    pub terms: Vec<BigInt>,
    /// `Some(N)` when the terms are residues mod `m^N` rather than exact.
    pub modulus_exponent: Option<u32>,
}

impl SqrtSequence {
    /// The exact integers `sigma_1..sigma_n`.
    pub fn exact(m: u64, c: BigInt, sigma1: BigInt, n_terms: usize) -> Result<Self> {
        if n_terms > MAX_EXACT_SQRT_TERMS {
            return Err(invalid(format!(
                "exact square-root terms grow doubly exponentially; at most {MAX_EXACT_SQRT_TERMS} \
                 are supported, use the reduced form for more"
            )));
        }
        Self::build(m, c, sigma1, n_terms, None)
    }

    /// `sigma_1..sigma_n` reduced to least residues mod `m^exponent`.
    ///
    /// Reduction commutes with the iteration, so every congruence modulo
    /// `m^k` with `k <= exponent` is the same as for the exact terms.
    pub fn reduced(
        m: u64,
        c: BigInt,
        sigma1: BigInt,
        n_terms: usize,
        exponent: u32,
    ) -> Result<Self> {
        Self::build(m, c, sigma1, n_terms, Some(exponent))
    }

    fn build(
        m: u64,
        c: BigInt,
        sigma1: BigInt,
        n_terms: usize,
        exponent: Option<u32>,
    ) -> Result<Self> {
        check_base(m)?;
        if m.is_multiple_of(2) {
            return Err(Error::Unsupported(format!(
                "square-root sequences need odd m, got {m}"
            )));
        }
        if !is_unit_mod(&c, m) {
            return Err(invalid(format!("c = {c} is not prime to m = {m}")));
        }
        let base = BigInt::from(m);
        if !(&sigma1 * &sigma1 - &c).mod_floor(&base).is_zero() {
            return Err(Error::InvalidSeed {
                m,
                c: c.to_string(),
                seed: sigma1.to_string(),
            });
        }
        let inv = inverse_mod(&(BigInt::from(2) * &sigma1), m)
            .expect("2 sigma_1 is a unit when m is odd and sigma_1^2 = c is a unit");
        let modulus = exponent.map(|e| pow_u64(m, e as u64));
        let reduce = |v: BigInt| match &modulus {
            Some(md) => v.mod_floor(md),
            None => v,
        };
        let inv_big = BigInt::from(inv);
        let mut terms = Vec::with_capacity(n_terms);
        let mut cur = reduce(sigma1.clone());
        for _ in 0..n_terms {
            let next = reduce((&c - &cur * &cur) * &inv_big + &cur);
            terms.push(std::mem::replace(&mut cur, next));
        }
        Ok(SqrtSequence {
            m,
            c,
            sigma1,
            inv,
            terms,
            modulus_exponent: exponent,
        })
    }

    pub fn squares(&self) -> Vec<BigInt> {
        self.terms.iter().map(|t| t * t).collect()
    }

    /// `sigma_n^2 = c mod m^n` for the 1-based index `n`.
    pub fn square_congruence_holds(&self, n: usize) -> bool {
        let t = &self.terms[n - 1];
        let md = pow_u64(self.m, n as u64);
        (t * t - &self.c).mod_floor(&md).is_zero()
    }

    /// `m^k` divides `sigma_n - sigma_k`, i.e. `|sigma_n - sigma_k|_m <= m^-k`.
    pub fn cauchy_bound_holds(&self, n: usize, k: usize) -> bool {
        let diff = &self.terms[n - 1] - &self.terms[k - 1];
        diff.mod_floor(&pow_u64(self.m, k as u64)).is_zero()
    }
}
