//! Slow, direct simulators used to cross-check the fast code paths.
//!
//! Nothing here shares logic with the modules it checks: rows are rebuilt
//! from the index relations on plain vectors, visits are found by carrying a
//! marker through the queue, and Josephus games remove entries one by one.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::madic::MadicRational;
use crate::Result;

/// Next row from `T(x+1, r) = T(x, r + m)` and `T(x+1, x) = 1 + T(x, 0)`.
pub fn naive_next_row(m: u64, prev: &[u64]) -> Vec<u64> {
    let len = prev.len();
    let mut next: Vec<u64> = (0..len).map(|r| prev[(r + m as usize) % len]).collect();
    next.push(1 + prev[0]);
    next
}

pub fn naive_row(m: u64, x: u64) -> Vec<u64> {
    let mut cur = vec![1];
    for _ in 1..x {
        cur = naive_next_row(m, &cur);
    }
    cur
}

/// Follow the cell at column `r mod x` of row `x` one row at a time (a cell
/// in column `c` of a row of length `L` moves to column `(c - m) mod L`), and
/// record `(row, column)` every time it can be read in one of the first `m`
/// columns. The first entry is `(x, r)` itself.
pub fn marked_cell_visits(m: u64, x: u64, r: u64, count: usize) -> Vec<(u64, u64)> {
    let mut col = r % x;
    let mut row = x;
    let mut visits = vec![(x, r)];
    let mut after = Some(r);
    while visits.len() < count {
        // In a short row a column c also reads as c + row, c + 2 row, ...
        let mut cand = col;
        while cand < m && visits.len() < count {
            if after.is_none_or(|a| cand > a) {
                visits.push((row, cand));
            }
            cand += row;
        }
        after = None;
        col = (col + row - m % row) % row;
        row += 1;
    }
    visits
}

/// Rotation remainder digits chosen one at a time: digit `k` is the only
/// residue that makes `q - sum_{j<=k} (m/(m+1))^j s_j` divisible by `m^(k+1)`.
pub fn searched_digits(q: &MadicRational, n: usize) -> Result<Vec<u64>> {
    let m = q.m();
    let ratio = MadicRational::new(m, BigInt::from(m), BigInt::from(m + 1))?;
    let mut power = MadicRational::new(m, BigInt::from(1), BigInt::from(1))?;
    let mut rest = q.clone();
    let mut digits = Vec::with_capacity(n);
    for k in 0..n {
        let mut chosen = None;
        for s in 0..m {
            let term = power.checked_mul(&MadicRational::integer(m, s))?;
            let cand = rest.checked_sub(&term)?;
            if cand.valuation().at_least(k as u64 + 1) {
                chosen = Some((s, cand));
                break;
            }
        }
        let (s, cand) = chosen.expect("some residue always works");
        digits.push(s);
        rest = cand;
        power = power.checked_mul(&ratio)?;
    }
    Ok(digits)
}

/// `J_n(x)` by removing people from a vector.
pub fn circle_survivor(n: u64, x: u64) -> u64 {
    let mut people: Vec<u64> = (1..=x).collect();
    let mut idx = 0usize;
    while people.len() > 1 {
        idx = (idx + n as usize - 1) % people.len();
        people.remove(idx);
        if idx == people.len() {
            idx = 0;
        }
    }
    people[0]
}

/// `J_n(x)` from `J(k) = (J(k-1) + n) mod k`, shifted to 1-based labels.
pub fn survivor_recurrence(n: u64, x: u64) -> u64 {
    let mut j = 0u64;
    for k in 2..=x {
        j = (j + n) % k;
    }
    j + 1
}

/// `J_2(x) = 2l + 1` where `x = 2^a + l` with `0 <= l < 2^a`.
pub fn survivor_two(x: u64) -> u64 {
    let top = 1u64 << (63 - x.leading_zeros());
    2 * (x - top) + 1
}

/// Elimination order of the leftward row game, played on a plain vector of
/// surviving columns. Returns `(eliminated columns, winner column)`.
pub fn row_game(m: u64, x: u64) -> (Vec<u64>, u64) {
    let mut alive: Vec<u64> = (0..x).collect();
    let mut idx = ((m + x - 1) % x) as usize;
    let mut out = Vec::new();
    while alive.len() > 1 {
        let len = alive.len();
        let target = (idx + len * (m as usize / len + 1) - m as usize) % len;
        out.push(alive.remove(target));
        idx = if target == 0 { alive.len() - 1 } else { target - 1 };
    }
    (out, alive[0])
}

/// Negabinary digits by brute force: the unique 0/1 string whose value is `x`,
/// found by counting upward through bit patterns.
pub fn negabinary_by_search(x: i64) -> Vec<u8> {
    if x == 0 {
        return Vec::new();
    }
    for pattern in 1u64.. {
        let mut value = 0i64;
        let mut place = 1i64;
        let mut bits = Vec::new();
        let mut p = pattern;
        while p > 0 {
            let b = (p & 1) as u8;
            if b == 1 {
                value += place;
            }
            bits.push(b);
            place *= -2;
            p >>= 1;
        }
        if value == x {
            return bits;
        }
    }
    unreachable!()
}

pub fn is_zero_digits(d: &[u64]) -> bool {
    d.iter().all(|v| v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_rows_agree_with_the_opening_table() {
        assert_eq!(naive_row(3, 10), vec![4, 3, 2, 3, 3, 3, 3, 2, 1, 4]);
    }

    #[test]
    fn marked_visits_reproduce_the_tracked_one() {
        let v = marked_cell_visits(3, 1, 0, 10);
        let xs: Vec<u64> = v.iter().map(|p| p.0).collect();
        let rs: Vec<u64> = v.iter().map(|p| p.1).collect();
        assert_eq!(xs, vec![1, 1, 1, 2, 2, 3, 4, 5, 7, 9]);
        assert_eq!(rs, vec![0, 1, 2, 0, 2, 1, 1, 2, 1, 2]);
    }

    #[test]
    fn survivor_oracles_agree() {
        assert_eq!(circle_survivor(2, 10), 5);
        assert_eq!(circle_survivor(4, 10), 5);
        for n in 2..6 {
            for x in 1..60 {
                assert_eq!(circle_survivor(n, x), survivor_recurrence(n, x));
            }
        }
        for x in 1..300 {
            assert_eq!(survivor_two(x), survivor_recurrence(2, x));
        }
    }

    #[test]
    fn row_game_worked_example() {
        let (out, winner) = row_game(3, 10);
        assert_eq!(out[0], 9);
        assert_eq!(winner, 8);
        assert_eq!(out, vec![9, 5, 1, 6, 0, 3, 4, 2, 7]);
    }

    #[test]
    fn negabinary_search_small_values() {
        assert_eq!(negabinary_by_search(9), vec![1, 0, 0, 1, 1]);
        assert_eq!(negabinary_by_search(43), vec![1; 7]);
    }
}
