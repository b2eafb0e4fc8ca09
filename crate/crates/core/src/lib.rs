//! Rotating-queue triangles and the arithmetic that explains them.
//!
//! The triangle `T_m` starts from the row `[1]`; each following row is the
//! previous one rotated left by `m` places with `1 + old head` appended.
//! Following a single cell as it keeps returning to the first `m` columns
//! produces a column sequence `r_1, r_2, ...` which is the digit expansion of
//! `(m+1)((m+1)x + r)` in "base `m/(m+1)`" inside the `m`-adic completion of
//! the rationals whose denominators are prime to `m`.
//!
//! Modules:
//!
//! * [`triangle`]: row generation on a ring buffer, heads, lead rows,
//!   appearance rows, frequency rows and the position of the 1.
//! * [`tracking`]: the visit sequences `x_n`, `r_n`, `y_n`, the mod `m^n`
//!   congruence, tail reconstruction and periodicity scans.
//! * [`madic`]: rationals in `D_m`, valuation, norm, distance and Hensel
//!   style square-root sequences.
//! * [`expansion`]: rotation remainder digit streams with the cumulative
//!   carry addition and shift-and-add multiplication.
//! * [`josephus`]: negabinary, the `m = 2` lead-row recurrence and Josephus
//!   games on triangle rows.
//! * [`oracle`]: slow brute-force simulators used to cross-check the above.
//! * [`verify`]: named cross-check suites, shared by the CLI and the tests.
//! * [`cli`]: the `rotor` command-line front end.

pub mod cli;
pub mod error;
pub mod expansion;
pub mod josephus;
pub mod madic;
pub mod oracle;
pub mod tracking;
pub mod triangle;
pub mod verify;

mod arith;
mod bigser;

pub use error::{Error, Result};
pub use expansion::{CarryTrace, DigitStream, Origin};
pub use josephus::{JosephusTrace, NegaBinary, SkDecomposition};
pub use madic::{MadicRational, SqrtSequence, Valuation};
pub use tracking::TrackState;
pub use triangle::{Capped, FrequencyRow, RowCap, TriangleRow};
