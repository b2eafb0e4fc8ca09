//! Rows, heads, lead rows, appearances and frequency rows of the rotation
//! triangle.
//!
//! cargo run --example triangle_rows -- [m]

use rotor::triangle::{self, RowCap};

fn main() -> rotor::Result<()> {
    let m: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let cap = RowCap::default();

    println!("first rows of T_{m}:");
    for x in 1..=10 {
        let row = triangle::row(m, x)?;
        let cells: Vec<String> = row.cells().iter().map(u64::to_string).collect();
        println!("  x = {x:>2}: {}", cells.join(" "));
    }

    println!("heads:       {:?}", triangle::heads(m, 20)?);

    let leads = triangle::leads(m, 8, cap)?;
    println!("lead rows:   {:?} ({} rows scanned)", leads.values, leads.rows_scanned);

    let appears = triangle::appearances(m, 8, cap)?;
    println!("appearances: {:?}", appears.values);

    let row = triangle::row(m, 30)?;
    println!("position of the 1 in row 30: {}", row.one_position()?);
    println!("frequencies of row 30: {:?}", row.frequencies().dense());
    Ok(())
}
