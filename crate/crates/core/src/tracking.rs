//! Tracking a single cell of `T_m` through its visits to the first `m`
//! columns.
//!
//! A cell at row `x_n`, column `r_n < m` next reappears in the first `m`
//! columns at row `x_{n+1} = x_n + floor((x_n + r_n)/m)` and column
//! `r_{n+1} = (x_n + r_n) mod m`. The encoding `y_n = (m+1) x_n + r_n` then
//! satisfies `y_{n+1} = floor((m+1) y_n / m)`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Position of the tracked cell at its `n`-th visit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackState {
    pub n: usize,
    /// Row index (1-based).
    #[serde(with = "crate::bigser::decimal")]
    pub x: BigUint,
    /// Column index, below `m`.
    pub r: u64,
    /// `(m+1) x + r`.
    #[serde(with = "crate::bigser::decimal")]
    pub y: BigUint,
}

fn check_start(m: u64, x: u64, r: u64) -> Result<()> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    if x == 0 {
        return Err(invalid("rows are numbered from 1"));
    }
    if r >= m {
        return Err(invalid(format!("start column {r} must be below m = {m}")));
    }
    Ok(())
}

/// States `0..=n_max` of the cell starting at row `x`, column `r`.
pub fn track(m: u64, x: u64, r: u64, n_max: usize) -> Result<Vec<TrackState>> {
    check_start(m, x, r)?;
    let base = BigUint::from(m);
    let m1 = BigUint::from(m + 1);
    let mut xs = BigUint::from(x);
    let mut rs = r;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let y = &m1 * &xs + rs;
        out.push(TrackState {
            n,
            x: xs.clone(),
            r: rs,
            y,
        });
        let (q, rem) = (&xs + rs).div_rem(&base);
        xs += q;
        rs = rem.to_u64().expect("remainder below m");
    }
    Ok(out)
}

/// `y_0, ..., y_{n_max}` from the floor recurrence alone.
pub fn y_sequence(m: u64, x: u64, r: u64, n_max: usize) -> Result<Vec<BigUint>> {
    check_start(m, x, r)?;
    let base = BigUint::from(m);
    let m1 = BigUint::from(m + 1);
    let mut y = &m1 * x + r;
    let mut out = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        let next = &y * &m1 / &base;
        out.push(std::mem::replace(&mut y, next));
    }
    Ok(out)
}

/// Both sides of `(m+1)^n ((m+1)x + r) = sum_{k=1}^n (m+1)^{n-k} m^{k-1} r_k`
/// reduced mod `m^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceWitness {
    pub n: usize,
    #[serde(with = "crate::bigser::decimal")]
    pub modulus: BigUint,
    #[serde(with = "crate::bigser::decimal")]
    pub lhs: BigUint,
    #[serde(with = "crate::bigser::decimal")]
    pub rhs: BigUint,
    pub holds: bool,
}

pub fn verify_congruence(m: u64, x: u64, r: u64, n: usize) -> Result<CongruenceWitness> {
    if n == 0 {
        return Err(invalid("the congruence needs n >= 1"));
    }
    let states = track(m, x, r, n)?;
    let base = BigUint::from(m);
    let m1 = BigUint::from(m + 1);
    let exp = u32::try_from(n).map_err(|_| invalid("n is too large"))?;
    let modulus = num_traits::pow(base.clone(), n);
    let lhs = (m1.pow(exp) * &states[0].y) % &modulus;
    // Horner in k: acc = (m+1) acc + m^{k-1} r_k.
    let mut rhs = BigUint::zero();
    let mut m_pow = BigUint::from(1u32);
    for state in &states[1..] {
        rhs = (&rhs * &m1 + &m_pow * state.r) % &modulus;
        m_pow *= &base;
    }
    let holds = lhs == rhs;
    Ok(CongruenceWitness {
        n,
        modulus,
        lhs,
        rhs,
        holds,
    })
}

/// Default bound on the starting row searched by [`reconstruct_from_tail`].
pub const DEFAULT_X_MAX: u64 = 10_000;

/// Find the unique start `(x, r)` with `x <= x_max` whose digits
/// `r_1, ..., r_n` equal `tail`.
pub fn reconstruct_from_tail(m: u64, tail: &[u64], x_max: u64) -> Result<(u64, u64)> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    if let Some(&bad) = tail.iter().find(|&&d| d >= m) {
        return Err(invalid(format!("digit {bad} is out of range for m = {m}")));
    }
    let mut found = None;
    let mut count = 0usize;
    for x in 1..=x_max {
        for r in 0..m {
            if prefix_matches(m, x, r, tail) {
                count += 1;
                found.get_or_insert((x, r));
            }
        }
    }
    match (count, found) {
        (1, Some(start)) => Ok(start),
        (0, _) => Err(Error::NotFound),
        _ => Err(Error::Ambiguous { count }),
    }
}

fn prefix_matches(m: u64, x: u64, r: u64, tail: &[u64]) -> bool {
    // Machine words suffice while x stays below u64::MAX - m; fall back to
    // big integers past that.
    let (mut xs, mut rs) = (x, r);
    for (i, &want) in tail.iter().enumerate() {
        let Some(sum) = xs.checked_add(rs).filter(|s| s.checked_add(s / m).is_some()) else {
            return prefix_matches_big(m, xs, rs, &tail[i..]);
        };
        xs += sum / m;
        rs = sum % m;
        if rs != want {
            return false;
        }
    }
    true
}

fn prefix_matches_big(m: u64, x: u64, r: u64, tail: &[u64]) -> bool {
    let base = BigUint::from(m);
    let mut xs = BigUint::from(x);
    let mut rs = r;
    for &want in tail {
        let (q, rem) = (&xs + rs).div_rem(&base);
        xs += q;
        rs = rem.to_u64().expect("remainder below m");
        if rs != want {
            return false;
        }
    }
    true
}

/// Result of a periodic-tail scan for one period `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodWitness {
    pub period: usize,
    /// Largest index `n` with `d_{n+p} != d_n`, if any.
    pub last_mismatch: Option<usize>,
    /// Whether every tail start up to the report's `latest_start` has a
    /// mismatch at or after it.
    pub aperiodic: bool,
}

/// Witness table for "no periodic tail with period at most `max_period`
/// inside a window of `window` digits".
///
/// A tail start `t` counts only when `t <= window - 2 * max_period`, so a
/// periodic tail has to cover at least two full copies of the largest period
/// before it is reported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AperiodicityReport {
    pub window: usize,
    pub max_period: usize,
    pub latest_start: usize,
    pub periods: Vec<PeriodWitness>,
}

impl AperiodicityReport {
    /// `true` when no period produced a periodic tail.
    pub fn passed(&self) -> bool {
        self.periods.iter().all(|w| w.aperiodic)
    }

    /// Periods for which a periodic tail was found.
    pub fn periodic_periods(&self) -> Vec<usize> {
        self.periods
            .iter()
            .filter(|w| !w.aperiodic)
            .map(|w| w.period)
            .collect()
    }
}

/// Scan an arbitrary digit sequence for periodic tails.
pub fn detect_periodic_tail(digits: &[u64], max_period: usize) -> Result<AperiodicityReport> {
    let window = digits.len();
    if max_period == 0 || window < 2 * max_period {
        return Err(invalid(format!(
            "window {window} must be at least twice the maximum period {max_period} (and that at least 1)"
        )));
    }
    let latest_start = window - 2 * max_period;
    let periods = (1..=max_period)
        .map(|p| {
            let last_mismatch = (0..window - p).rev().find(|&n| digits[n + p] != digits[n]);
            PeriodWitness {
                period: p,
                last_mismatch,
                aperiodic: last_mismatch.is_some_and(|n| n >= latest_start),
            }
        })
        .collect();
    Ok(AperiodicityReport {
        window,
        max_period,
        latest_start,
        periods,
    })
}

/// Scan `r_0, ..., r_{window-1}` of the track starting at `(x, r)`.
pub fn aperiodicity_check(
    m: u64,
    x: u64,
    r: u64,
    window: usize,
    max_period: usize,
) -> Result<AperiodicityReport> {
    if window == 0 {
        return Err(invalid("window must be positive"));
    }
    let digits: Vec<u64> = track(m, x, r, window - 1)?.iter().map(|s| s.r).collect();
    detect_periodic_tail(&digits, max_period)
}
