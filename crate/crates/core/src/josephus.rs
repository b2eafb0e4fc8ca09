//! Negabinary expansions, the `m = 2` lead-row recurrence, and Josephus games
//! played on triangle rows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{log2_signed, pow_u64};
use crate::error::{invalid, Result};
use crate::triangle;

/// Base `-2` digits, least significant first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct NegaBinary {
    bits: Vec<u8>,
}

impl NegaBinary {
    pub fn from_bits(mut bits: Vec<u8>) -> Result<Self> {
        if let Some(bad) = bits.iter().find(|&&b| b > 1) {
            return Err(invalid(format!("negabinary digit {bad} is not 0 or 1")));
        }
        while bits.last() == Some(&0) {
            bits.pop();
        }
        Ok(NegaBinary { bits })
    }

    /// Parse the usual most-significant-first notation, e.g. `"11001"`.
    pub fn parse(text: &str) -> Result<Self> {
        let bits = text
            .trim()
            .chars()
            .rev()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(invalid(format!("negabinary digit {other:?} is not 0 or 1"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        NegaBinary::from_bits(bits)
    }

    /// `b_0, b_1, ...` with `x = sum b_i (-2)^i`.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Length of the run of 1s starting at `b_0`.
    pub fn trailing_ones(&self) -> u64 {
        self.bits.iter().take_while(|&&b| b == 1).count() as u64
    }
}

impl fmt::Display for NegaBinary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("0");
        }
        for b in self.bits.iter().rev() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Take `b_0 = x mod 2`, then continue with `(x - b_0)/(-2)`.
pub fn to_negabinary(x: &BigInt) -> NegaBinary {
    let minus_two = BigInt::from(-2);
    let mut rest = x.clone();
    let mut bits = Vec::new();
    while !rest.is_zero() {
        let b = if rest.is_odd() { 1u8 } else { 0 };
        bits.push(b);
        rest = (rest - b) / &minus_two;
    }
    NegaBinary { bits }
}

pub fn from_negabinary(n: &NegaBinary) -> BigInt {
    let minus_two = BigInt::from(-2);
    n.bits
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &b| acc * &minus_two + b)
}

/// `x = 2^{k+1} s + (1 - (-2)^k)/3`, with `k` the trailing run of 1s in the
/// negabinary expansion of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkDecomposition {
    #[serde(with = "crate::bigser::decimal_signed")]
    pub s: BigInt,
    pub k: u64,
}

/// `(1 - (-2)^k)/3`: the value of `k` negabinary ones.
fn ones_value(k: u64) -> BigInt {
    (BigInt::one() - signed_pow(-2, k)) / 3
}

fn signed_pow(base: i64, exp: u64) -> BigInt {
    let mag = pow_u64(base.unsigned_abs(), exp);
    if base < 0 && exp % 2 == 1 {
        -mag
    } else {
        mag
    }
}

pub fn decompose_sk(x: &BigInt) -> Result<SkDecomposition> {
    if !x.is_positive() {
        return Err(invalid(format!("decomposition needs x >= 1, got {x}")));
    }
    let k = to_negabinary(x).trailing_ones();
    let rest = x - ones_value(k);
    let scale = pow_u64(2, k + 1);
    debug_assert!(rest.is_multiple_of(&scale));
    Ok(SkDecomposition { s: rest / scale, k })
}

/// `l_2(n+1) = 3^{k+1} s + (1 - (-3)^k)/2` where `l_2(n) = 2^{k+1} s + (1 - (-2)^k)/3`.
pub fn l2_next(l: &BigInt) -> Result<BigInt> {
    let SkDecomposition { s, k } = decompose_sk(l)?;
    Ok(pow_u64(3, k + 1) * s + (BigInt::one() - signed_pow(-3, k)) / 2)
}

/// Outcome of comparing one side of a bound with the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    /// Both sides agree, so a strict inequality fails while the weak one holds.
    Equal,
    Violated,
    /// The two sides agree to within floating-point tolerance.
    Indeterminate,
    NotApplicable,
}

impl Verdict {
    /// Treat a strict inequality as satisfied only on [`Verdict::Holds`].
    pub fn strict_ok(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::NotApplicable)
    }
}

/// Relative tolerance for the logarithmic bound comparisons.
pub const LOG_TOLERANCE: f64 = 1e-12;

/// Verdict for `small < large` given `log2` of both sides.
fn compare_logs(small: f64, large: f64) -> Verdict {
    let scale = small.abs().max(large.abs()).max(1.0);
    if (large - small).abs() <= LOG_TOLERANCE * scale {
        Verdict::Indeterminate
    } else if small < large {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

/// Check of `k <= ceil(log2 l) + 1`, with equality exactly when `s = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KBound {
    pub k: u64,
    pub bound: u64,
    pub holds: bool,
    /// `(k == bound) == (s == 0)`.
    pub equality_clause: bool,
}

pub fn k_bound(l: &BigInt) -> Result<KBound> {
    let SkDecomposition { s, k } = decompose_sk(l)?;
    // ceil(log2 l) is the bit length of l - 1.
    let bound = (l - 1u32).bits() + 1;
    Ok(KBound {
        k,
        bound,
        holds: k <= bound,
        equality_clause: (k == bound) == s.is_zero(),
    })
}

/// One term of `l_2` together with its bound checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct L2Step {
    pub n: usize,
    #[serde(with = "crate::bigser::decimal_signed")]
    pub value: BigInt,
    pub decomposition: SkDecomposition,
    pub k_bound: KBound,
    /// `l_2(n+1) < 27/8 l_2(n)^{log2 3}`; reported, not asserted.
    pub ratio_upper: Verdict,
    /// `l_2(n+1) >= 9/4 l_2(n)^{log2 3}`, only applicable when `s = 0`.
    pub ratio_lower: Verdict,
    /// `l_2(n) < 8^{(log2 3)^{n-1} - 1}`.
    pub super_exponential: Verdict,
}

/// `l_2(1), ..., l_2(n_max)` starting from `l_2(1) = 1`.
pub fn l2_sequence(n_max: usize) -> Result<Vec<L2Step>> {
    if n_max == 0 {
        return Err(invalid("l2_sequence needs n_max >= 1"));
    }
    let log3 = 3f64.log2();
    let mut steps = Vec::with_capacity(n_max);
    let mut value = BigInt::one();
    for n in 1..=n_max {
        let next = l2_next(&value)?;
        let decomposition = decompose_sk(&value)?;
        let (log_l, log_next) = (log2_signed(&value), log2_signed(&next));
        let scaled = log3 * log_l;
        let ratio_upper = compare_logs(log_next, (27f64 / 8.0).log2() + scaled);
        let ratio_lower = if decomposition.s.is_zero() {
            match compare_logs((9f64 / 4.0).log2() + scaled, log_next) {
                Verdict::Violated => Verdict::Violated,
                _ => Verdict::Holds,
            }
        } else {
            Verdict::NotApplicable
        };
        let super_exponential = if n == 1 {
            // Both sides are exactly 1 here: 8^0 = l_2(1).
            if value.is_one() {
                Verdict::Equal
            } else {
                Verdict::Violated
            }
        } else {
            let exponent = log3.powi(n as i32 - 1) - 1.0;
            compare_logs(log_l, 3.0 * exponent)
        };
        steps.push(L2Step {
            n,
            k_bound: k_bound(&value)?,
            value,
            decomposition,
            ratio_upper,
            ratio_lower,
            super_exponential,
        });
        value = next;
    }
    Ok(steps)
}

/// A Josephus game on row `x` of `T_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JosephusTrace {
    pub m: u64,
    pub x: u64,
    /// Columns in the order they were crossed out.
    pub eliminated: Vec<u64>,
    pub winner_column: u64,
    pub winner_value: u64,
}

/// Fenwick tree over 0/1 flags supporting "k-th remaining" lookups.
struct Remaining {
    tree: Vec<u32>,
    top_bit: usize,
}

impl Remaining {
    fn full(len: usize) -> Self {
        let mut tree = vec![0u32; len + 1];
        for i in 1..=len {
            tree[i] += 1;
            let parent = i + (i & i.wrapping_neg());
            if parent <= len {
                tree[parent] += tree[i];
            }
        }
        let top_bit = if len == 0 { 0 } else { 1 << (usize::BITS - 1 - len.leading_zeros()) };
        Remaining { tree, top_bit }
    }

    fn remove(&mut self, index: usize) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] -= 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Index of the remaining element with rank `rank` (0-based).
    fn select(&self, rank: usize) -> usize {
        let mut pos = 0;
        let mut left = rank as u32;
        let mut step = self.top_bit;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= left {
                pos = next;
                left -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

/// Elimination order of `len` cells: start at rank `start`, count `step`
/// cells (the start is count 1) moving by `dir` ranks at a time, remove the
/// last one, and restart at the neighbour in the same direction.
fn eliminate(len: usize, start: usize, step: usize, forward: bool) -> Vec<usize> {
    let mut set = Remaining::full(len);
    let mut order = Vec::with_capacity(len);
    let mut cur = start;
    for alive in (1..=len).rev() {
        let moves = (step - 1) % alive;
        let target = if forward {
            (cur + moves) % alive
        } else {
            (cur + alive - moves) % alive
        };
        order.push(set.select(target));
        set.remove(order[order.len() - 1]);
        if alive > 1 {
            cur = if forward {
                target % (alive - 1)
            } else {
                (target + alive - 2) % (alive - 1)
            };
        }
    }
    order
}

/// Play the leftward counting game on row `x` of `T_m`: the cell in column
/// `(m - 1) mod x` counts 1 and the cell receiving count `m + 1` is crossed out.
pub fn josephus_game(m: u64, x: u64) -> Result<JosephusTrace> {
    let row = triangle::row(m, x)?;
    let len = x as usize;
    let start = ((m - 1) % x) as usize;
    let mut order = eliminate(len, start, m as usize + 1, false);
    let winner_column = order.pop().expect("row is non-empty") as u64;
    Ok(JosephusTrace {
        m,
        x,
        eliminated: order.into_iter().map(|c| c as u64).collect(),
        winner_column,
        winner_value: row.get(winner_column),
    })
}

/// Survivor `J_n(x)` of the classic game on `1..=x`, crossing out every
/// `n`-th number clockwise starting the count at 1.
pub fn josephus_survivor(n: u64, x: u64) -> Result<u64> {
    if n < 2 {
        return Err(invalid(format!("the count step must be at least 2, got {n}")));
    }
    if x == 0 {
        return Err(invalid("the circle needs at least one number"));
    }
    let order = eliminate(x as usize, 0, n as usize, true);
    Ok(order[order.len() - 1] as u64 + 1)
}

/// The member of `1..=x` congruent to `m - j` mod `x`.
pub fn survivor_from_one_position(m: u64, x: u64, j: u64) -> u64 {
    let r = (BigInt::from(m) - BigInt::from(j)).mod_floor(&BigInt::from(x));
    let r = r.to_u64().expect("residue fits");
    if r == 0 {
        x
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn nb(x: i64) -> String {
        to_negabinary(&BigInt::from(x)).to_string()
    }

    #[test]
    fn negabinary_examples() {
        assert_eq!(nb(43), "1111111");
        assert_eq!(nb(500), "11000110100");
        assert_eq!(nb(999), "10000111011");
        assert_eq!(nb(9), "11001");
        assert!(to_negabinary(&BigInt::zero()).bits().is_empty());
        assert_eq!(from_negabinary(&NegaBinary::parse("11001").unwrap()), BigInt::from(9));
        assert!(NegaBinary::parse("102").is_err());
    }

    #[test]
    fn negabinary_matches_search() {
        for x in -300i64..=300 {
            assert_eq!(to_negabinary(&BigInt::from(x)).bits(), oracle::negabinary_by_search(x).as_slice());
        }
    }

    #[test]
    fn sk_examples() {
        let sk = |x: i64| decompose_sk(&BigInt::from(x)).unwrap();
        assert_eq!(sk(43), SkDecomposition { s: 0.into(), k: 7 });
        assert_eq!(sk(9), SkDecomposition { s: 2.into(), k: 1 });
        assert_eq!(sk(1), SkDecomposition { s: 0.into(), k: 1 });
        assert_eq!(sk(10), SkDecomposition { s: 5.into(), k: 0 });
        assert!(decompose_sk(&BigInt::zero()).is_err());
    }

    #[test]
    fn lead_rows_for_m2() {
        let steps = l2_sequence(8).unwrap();
        let values: Vec<u64> = steps.iter().map(|s| s.value.to_u64().unwrap()).collect();
        assert_eq!(values, vec![1, 2, 3, 14, 21, 47, 158, 237]);
        assert_eq!(l2_next(&BigInt::from(20)).unwrap(), BigInt::from(30));
        assert_eq!(steps[0].super_exponential, Verdict::Equal);
        assert!(steps[1..].iter().all(|s| s.super_exponential == Verdict::Holds));
    }

    #[test]
    fn lead_rows_agree_with_the_sweep() {
        let swept = triangle::leads(2, 20, triangle::RowCap::new(100_000).unwrap()).unwrap();
        let steps = l2_sequence(swept.values.len()).unwrap();
        for (step, lead) in steps.iter().zip(&swept.values) {
            assert_eq!(step.value, BigInt::from(*lead));
        }
    }

    #[test]
    fn k_bound_cases() {
        for x in 1..=20_000i64 {
            let kb = k_bound(&BigInt::from(x)).unwrap();
            assert!(kb.holds && kb.equality_clause, "x = {x}");
        }
    }

    #[test]
    fn worked_game_on_t3_row_10() {
        let trace = josephus_game(3, 10).unwrap();
        assert_eq!(trace.eliminated, vec![9, 5, 1, 6, 0, 3, 4, 2, 7]);
        assert_eq!((trace.winner_column, trace.winner_value), (8, 1));
    }

    #[test]
    fn small_games() {
        for m in 1..=6 {
            let t = josephus_game(m, 2).unwrap();
            assert_eq!(t.winner_value, 1);
            assert_eq!(triangle::row(m, 2).unwrap().get(t.eliminated[0]), 2);
            let t = josephus_game(m, 1).unwrap();
            assert!(t.eliminated.is_empty());
            assert_eq!(t.winner_column, 0);
        }
    }

    #[test]
    fn survivors() {
        assert_eq!(josephus_survivor(2, 10), Ok(5));
        assert_eq!(josephus_survivor(4, 10), Ok(5));
        assert_eq!(josephus_survivor(7, 1), Ok(1));
        assert!(josephus_survivor(1, 5).is_err());
        assert_eq!(survivor_from_one_position(3, 10, 8), 5);
    }

    #[test]
    fn games_match_the_simulators() {
        for m in 1..=6 {
            for x in 1..=300 {
                let trace = josephus_game(m, x).unwrap();
                let (order, winner) = oracle::row_game(m, x);
                assert_eq!(trace.eliminated, order);
                assert_eq!(trace.winner_column, winner);
                assert_eq!(josephus_survivor(m + 1, x).unwrap(), oracle::circle_survivor(m + 1, x));
            }
        }
    }

    proptest! {
        #[test]
        fn negabinary_round_trip(x in -1_000_000_000i64..1_000_000_000) {
            let n = to_negabinary(&BigInt::from(x));
            prop_assert_eq!(from_negabinary(&n), BigInt::from(x));
            prop_assert_ne!(n.bits().last(), Some(&0));
        }

        #[test]
        fn sk_identity(x in 1i64..10_000_000) {
            let SkDecomposition { s, k } = decompose_sk(&BigInt::from(x)).unwrap();
            prop_assert_eq!(pow_u64(2, k + 1) * s + ones_value(k), BigInt::from(x));
        }

        #[test]
        fn winner_is_the_one(m in 1u64..7, x in 2u64..1500) {
            let trace = josephus_game(m, x).unwrap();
            prop_assert_eq!(trace.winner_value, 1);
            let j = triangle::one_position(m, x).unwrap();
            prop_assert_eq!(trace.winner_column, j);
            prop_assert_eq!(josephus_survivor(m + 1, x).unwrap(), survivor_from_one_position(m, x, j));
        }
    }
}
