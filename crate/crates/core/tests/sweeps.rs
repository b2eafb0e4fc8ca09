//! Larger sweeps over the triangle that are too slow for unit tests in debug
//! builds but cheap with the ring buffer.

use std::collections::BTreeMap;

use rotor::triangle::{self, RowCap, Sweep};

#[test]
fn successive_rows_rotate_and_append() {
    for m in 1..=8u64 {
        let mut sweep = Sweep::new(m).unwrap();
        let mut prev: Vec<u64> = sweep.cells().collect();
        for x in 1..2000u64 {
            sweep.step().unwrap();
            let cur: Vec<u64> = sweep.cells().collect();
            assert_eq!(cur.len() as u64, x + 1);
            for (r, &v) in cur[..x as usize].iter().enumerate() {
                assert_eq!(v, prev[(r + m as usize) % x as usize], "m={m} x={x} r={r}");
            }
            assert_eq!(cur[x as usize], prev[0] + 1);
            prev = cur;
        }
    }
}

#[test]
fn heads_of_t1_are_bit_counts() {
    let heads = triangle::heads(1, 4096).unwrap();
    for (i, h) in heads.iter().enumerate() {
        assert_eq!(*h, u64::from((i as u64 + 1).count_ones()));
    }
}

#[test]
fn powers_of_two_for_m1() {
    let cap = RowCap::default();
    let leads = triangle::leads(1, 12, cap).unwrap();
    let appears = triangle::appearances(1, 12, cap).unwrap();
    let powers: Vec<u64> = (0..12).map(|k| 1 << k).collect();
    assert_eq!(leads.values, powers);
    assert_eq!(appears.values, powers);
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn reduced_frequencies_for_m1_are_binomial() {
    for n in 1..=10u64 {
        let dense = triangle::reduced_frequency_row(1, n, RowCap::default()).unwrap().dense();
        let want: Vec<u64> = (1..=n).map(|k| binomial(n - 1, k - 1)).collect();
        assert_eq!(dense, want, "n = {n}");
        let rev: Vec<u64> = dense.iter().rev().copied().collect();
        assert_eq!(dense, rev);
        let peak = dense.iter().enumerate().max_by_key(|(_, v)| **v).unwrap().0;
        assert!(dense[..=peak].windows(2).all(|w| w[0] <= w[1]));
        assert!(dense[peak..].windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn every_small_number_appears_for_m2() {
    let found = triangle::appearances(2, 20, RowCap::default()).unwrap();
    assert!(!found.cap_reached);
    assert_eq!(found.values.len(), 20);
    assert_eq!(found.values[19], 91_031);
}

#[test]
fn m2_heads_recur() {
    let counts: BTreeMap<u64, u64> = triangle::head_counts(2, 1_000_000).unwrap();
    let (value, fewest) = counts.iter().min_by_key(|(_, c)| **c).unwrap();
    assert!(*fewest >= 2, "head value {value} seen only {fewest} times");
}
