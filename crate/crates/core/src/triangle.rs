//! Rows of the rotating-queue triangle `T_m` and the sequences read off them.
//!
//! Rows are 1-indexed and columns 0-indexed. Only the current row is ever held
//! in memory: [`Sweep`] keeps it in a ring buffer whose head moves `m` places
//! per row, so a step costs `O(m)` and memory stays `O(x)`.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{invalid, Error, Result};

pub const DEFAULT_ROW_CAP: u64 = 1_000_000;

/// Upper bound on the number of rows a sweep may generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowCap(u64);

impl RowCap {
    pub fn new(rows: u64) -> Result<Self> {
        if rows == 0 {
            return Err(invalid("row cap must be positive"));
        }
        Ok(RowCap(rows))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl Default for RowCap {
    fn default() -> Self {
        RowCap(DEFAULT_ROW_CAP)
    }
}

/// A sequence computed by a sweep that may have stopped at the row cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Capped<T> {
    pub values: Vec<T>,
    /// Set when the cap was hit before all requested terms were found.
    pub cap_reached: bool,
    pub rows_scanned: u64,
}

/// One row of `T_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriangleRow {
    m: u64,
    x: u64,
    cells: Vec<u64>,
}

impl TriangleRow {
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Row index, starting at 1.
    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<u64> {
        self.cells
    }

    /// `T_m(x, r)` with `r` reduced modulo the row length.
    pub fn get(&self, r: u64) -> u64 {
        self.cells[(r % self.x) as usize]
    }

    pub fn head(&self) -> u64 {
        self.cells[0]
    }

    /// The cell appended when this row was formed.
    pub fn last(&self) -> u64 {
        self.cells[self.cells.len() - 1]
    }

    /// Column of the unique cell holding 1.
    pub fn one_position(&self) -> Result<u64> {
        let mut ones = self.cells.iter().enumerate().filter(|(_, &v)| v == 1);
        match (ones.next(), ones.next()) {
            (Some((col, _)), None) => Ok(col as u64),
            (None, _) => Err(Error::InvariantViolation(format!(
                "row {} of T_{} has no cell equal to 1",
                self.x, self.m
            ))),
            (Some(_), Some(_)) => Err(Error::InvariantViolation(format!(
                "row {} of T_{} has more than one cell equal to 1",
                self.x, self.m
            ))),
        }
    }

    pub fn frequencies(&self) -> FrequencyRow {
        let mut counts = BTreeMap::new();
        for &v in &self.cells {
            *counts.entry(v).or_insert(0) += 1;
        }
        FrequencyRow { x: self.x, counts }
    }
}

/// Multiplicities of the values in one row (`F_m(x, k)` for each `k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyRow {
    pub x: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl FrequencyRow {
    pub fn count(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    /// Counts for values `1..=max`, zero-filled.
    pub fn dense(&self) -> Vec<u64> {
        let max = self.counts.keys().next_back().copied().unwrap_or(0);
        (1..=max).map(|k| self.count(k)).collect()
    }
}

/// Forward generator of `T_m`, one row at a time.
#[derive(Clone, Debug)]
pub struct Sweep {
    m: u64,
    x: u64,
    queue: VecDeque<u64>,
}

impl Sweep {
    /// Positioned at row 1, `[1]`.
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(invalid("rotation number m must be at least 1"));
        }
        let mut queue = VecDeque::with_capacity(16);
        queue.push_back(1);
        Ok(Sweep { m, x: 1, queue })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn row_index(&self) -> u64 {
        self.x
    }

    pub fn head(&self) -> u64 {
        self.queue[0]
    }

    pub fn last(&self) -> u64 {
        self.queue[self.queue.len() - 1]
    }

    pub fn cell(&self, r: u64) -> u64 {
        self.queue[(r % self.x) as usize]
    }

    pub fn cells(&self) -> impl Iterator<Item = u64> + '_ {
        self.queue.iter().copied()
    }

    /// Advance to the next row: rotate left by `m` and append `1 + old head`.
    pub fn step(&mut self) -> Result<()> {
        let appended = self
            .head()
            .checked_add(1)
            .ok_or(Error::Overflow { row: self.x + 1 })?;
        let shift = (self.m % self.x) as usize;
        self.queue.rotate_left(shift);
        self.queue.push_back(appended);
        self.x += 1;
        Ok(())
    }

    pub fn snapshot(&self) -> TriangleRow {
        TriangleRow {
            m: self.m,
            x: self.x,
            cells: self.queue.iter().copied().collect(),
        }
    }
}

fn check_args(m: u64, x: u64) -> Result<()> {
    if m == 0 {
        return Err(invalid("rotation number m must be at least 1"));
    }
    if x == 0 {
        return Err(invalid("row index x must be at least 1"));
    }
    Ok(())
}

/// Row `x` of `T_m`.
pub fn row(m: u64, x: u64) -> Result<TriangleRow> {
    check_args(m, x)?;
    let mut sweep = Sweep::new(m)?;
    while sweep.row_index() < x {
        sweep.step()?;
    }
    Ok(sweep.snapshot())
}

/// `T_m(x, r)`, where `r` may exceed the row length.
pub fn entry(m: u64, x: u64, r: u64) -> Result<u64> {
    Ok(row(m, x)?.get(r))
}

/// `h_m(1..=x_max)`, the heads of the first `x_max` rows.
pub fn heads(m: u64, x_max: u64) -> Result<Vec<u64>> {
    check_args(m, x_max)?;
    let mut sweep = Sweep::new(m)?;
    let mut out = Vec::with_capacity(x_max as usize);
    out.push(sweep.head());
    while sweep.row_index() < x_max {
        sweep.step()?;
        out.push(sweep.head());
    }
    Ok(out)
}

/// Rows led by the 1, `l_m(1..=n_max)`, scanning at most `cap` rows.
pub fn leads(m: u64, n_max: usize, cap: RowCap) -> Result<Capped<u64>> {
    scan(m, n_max, cap, |sweep, out| {
        if sweep.head() == 1 {
            out.push(sweep.row_index());
        }
    })
}

/// `a_m(1..=n_max)`: the first row whose appended cell equals `n`.
pub fn appearances(m: u64, n_max: usize, cap: RowCap) -> Result<Capped<u64>> {
    scan(m, n_max, cap, |sweep, out| {
        // The appended cell never exceeds one more than the running maximum,
        // so new values show up in order.
        if sweep.last() == out.len() as u64 + 1 {
            out.push(sweep.row_index());
        }
    })
}

fn scan<F>(m: u64, n_max: usize, cap: RowCap, mut visit: F) -> Result<Capped<u64>>
where
    F: FnMut(&Sweep, &mut Vec<u64>),
{
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    let mut sweep = Sweep::new(m)?;
    let mut values = Vec::new();
    loop {
        visit(&sweep, &mut values);
        if values.len() >= n_max {
            break;
        }
        if sweep.row_index() >= cap.get() {
            return Ok(Capped {
                values,
                cap_reached: true,
                rows_scanned: sweep.row_index(),
            });
        }
        sweep.step()?;
    }
    Ok(Capped {
        values,
        cap_reached: false,
        rows_scanned: sweep.row_index(),
    })
}

/// `j_m(x)`, the column holding the 1 in row `x`.
pub fn one_position(m: u64, x: u64) -> Result<u64> {
    row(m, x)?.one_position()
}

/// `F_m(x, .)`.
pub fn frequency_row(m: u64, x: u64) -> Result<FrequencyRow> {
    Ok(row(m, x)?.frequencies())
}

/// `f_m(n, .) = F_m(a_m(n), .)`.
pub fn reduced_frequency_row(m: u64, n: u64, cap: RowCap) -> Result<FrequencyRow> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let found = appearances(m, n as usize, cap)?;
    if found.cap_reached {
        return Err(Error::CapReached { cap: cap.get() });
    }
    frequency_row(m, found.values[n as usize - 1])
}

/// How often each value heads a row among rows `1..=rows`.
pub fn head_counts(m: u64, rows: u64) -> Result<BTreeMap<u64, u64>> {
    let mut counts = BTreeMap::new();
    for h in heads(m, rows)? {
        *counts.entry(h).or_insert(0) += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opening_rows_of_t3() {
        assert_eq!(row(3, 10).unwrap().cells(), &[4, 3, 2, 3, 3, 3, 3, 2, 1, 4]);
        assert_eq!(row(3, 1).unwrap().cells(), &[1]);
        assert_eq!(row(3, 9).unwrap().cells(), &[3, 2, 1, 4, 3, 2, 3, 3, 3]);
    }

    #[test]
    fn tenth_row_of_t1() {
        assert_eq!(row(1, 10).unwrap().cells(), &[2, 3, 2, 3, 3, 4, 1, 2, 2, 3]);
    }

    #[test]
    fn row_14_of_t2_is_led_by_one() {
        assert_eq!(row(2, 14).unwrap().head(), 1);
    }

    #[test]
    fn rejects_zero_arguments() {
        assert!(matches!(row(0, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(row(3, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn entries_wrap_around() {
        assert_eq!(entry(3, 9, 10).unwrap(), 2);
        assert_eq!(entry(3, 9, 10).unwrap(), entry(3, 9, 1).unwrap());
        assert_eq!(entry(3, 10, 7).unwrap(), 2);
        for m in 1..6 {
            assert_eq!(entry(m, 1, 0).unwrap(), 1);
        }
    }

    #[test]
    fn heads_match_first_column() {
        assert_eq!(heads(3, 10).unwrap(), vec![1, 1, 2, 2, 3, 2, 2, 2, 3, 4]);
        assert_eq!(heads(1, 1).unwrap(), vec![1]);
    }

    #[test]
    fn heads_of_t1_count_binary_ones() {
        let h = heads(1, 1 << 12).unwrap();
        for (i, &v) in h.iter().enumerate() {
            let x = i as u64 + 1;
            assert_eq!(v, x.count_ones() as u64, "x = {x}");
        }
    }

    #[test]
    fn lead_and_appearance_rows() {
        let l1 = leads(1, 12, RowCap::default()).unwrap();
        let a1 = appearances(1, 12, RowCap::default()).unwrap();
        let powers: Vec<u64> = (0..12).map(|n| 1u64 << n).collect();
        assert_eq!(l1.values, powers);
        assert_eq!(a1.values, powers);

        assert_eq!(leads(3, 2, RowCap::default()).unwrap().values, vec![1, 2]);
        assert_eq!(
            leads(2, 6, RowCap::default()).unwrap().values,
            vec![1, 2, 3, 14, 21, 47]
        );
        assert_eq!(appearances(3, 4, RowCap::default()).unwrap().values, vec![1, 2, 4, 6]);
        for m in 1..8 {
            assert_eq!(appearances(m, 1, RowCap::default()).unwrap().values, vec![1]);
        }
    }

    #[test]
    fn cap_gives_partial_result() {
        let got = leads(2, 10, RowCap::new(20).unwrap()).unwrap();
        assert!(got.cap_reached);
        assert_eq!(got.values, vec![1, 2, 3, 14]);
        assert_eq!(got.rows_scanned, 20);
        assert!(matches!(
            reduced_frequency_row(2, 10, RowCap::new(20).unwrap()),
            Err(Error::CapReached { cap: 20 })
        ));
    }

    #[test]
    fn position_of_the_one() {
        assert_eq!(one_position(3, 10).unwrap(), 8);
        assert_eq!(one_position(3, 1).unwrap(), 0);
        assert_eq!(one_position(1, 10).unwrap(), 6);
    }

    #[test]
    fn one_position_reports_broken_rows() {
        let bad = TriangleRow { m: 3, x: 2, cells: vec![2, 2] };
        assert!(matches!(bad.one_position(), Err(Error::InvariantViolation(_))));
        let bad = TriangleRow { m: 3, x: 2, cells: vec![1, 1] };
        assert!(matches!(bad.one_position(), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn frequency_rows() {
        let f = frequency_row(1, 10).unwrap();
        assert_eq!(f.dense(), vec![1, 4, 4, 1]);
        assert_eq!(f.counts.values().sum::<u64>(), 10);
        assert_eq!(frequency_row(1, 11).unwrap().dense(), vec![1, 4, 5, 1]);
        assert_eq!(frequency_row(4, 1).unwrap().dense(), vec![1]);

        let reduced = reduced_frequency_row(1, 10, RowCap::default()).unwrap();
        assert_eq!(reduced.dense(), vec![1, 9, 36, 84, 126, 126, 84, 36, 9, 1]);
    }
}
