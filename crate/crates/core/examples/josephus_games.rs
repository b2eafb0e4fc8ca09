//! The row game on T_m and the circle game it corresponds to.
//!
//! cargo run --example josephus_games

use rotor::josephus;
use rotor::triangle;

fn main() -> rotor::Result<()> {
    let (m, x) = (3, 10);
    let game = josephus::josephus_game(m, x)?;
    println!("row game on row {x} of T_{m}:");
    println!("  elimination order (columns): {:?}", game.eliminated);
    println!("  winner column {} holding {}", game.winner_column, game.winner_value);

    let j = triangle::one_position(m, x)?;
    println!("  the 1 sits at column {j}");
    println!(
        "  circle survivor read off the 1: {}, played out: {}",
        josephus::survivor_from_one_position(m, x, j),
        josephus::josephus_survivor(m + 1, x)?
    );

    for x in [5, 10, 41] {
        println!("circle of {x}, every {}th out: survivor {}", m + 1, josephus::josephus_survivor(m + 1, x)?);
    }
    Ok(())
}
