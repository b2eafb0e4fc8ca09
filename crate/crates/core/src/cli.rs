//! The `rotor` command line.
//!
//! Every subcommand prints plain text by default, or a JSON envelope
//! `{"m", "op", "params", "result"}` with `--format json`, or CSV rows with
//! `--format csv`. Exit codes: 0 on success, 1 on usage or parameter errors,
//! 2 when a verification fails.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::expansion::{self, CarryTrace};
use crate::josephus::{self, JosephusTrace, L2Step};
use crate::madic::{parse_rational, MadicRational, SqrtSequence, Valuation};
use crate::tracking::{self, AperiodicityReport, CongruenceWitness, TrackState};
use crate::triangle::{self, Capped, RowCap, DEFAULT_ROW_CAP};
use crate::verify::{self, CheckOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Plain,
    Json,
    Csv,
}

/// Settings shared by all subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub m: u64,
    pub row_cap: RowCap,
    pub digit_precision: usize,
    pub output_format: OutputFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            m: 3,
            row_cap: RowCap::default(),
            digit_precision: 64,
            output_format: OutputFormat::Plain,
            seed: verify::DEFAULT_SEED,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "rotor", version, about = "Rotating-queue triangles and rotation remainder expansions")]
struct Cli {
    /// Rotation number.
    #[arg(short = 'm', long, global = true, default_value_t = 3)]
    m: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,
    /// Largest row a sweep may generate.
    #[arg(long, global = true, env = "ROTOR_ROW_CAP", default_value_t = DEFAULT_ROW_CAP)]
    row_cap: u64,
    /// Default number of expansion digits.
    #[arg(long, global = true, default_value_t = 64)]
    precision: usize,
    /// Seed for randomized verification sweeps.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print row x of T_m, or the single cell in column r.
    Row {
        #[arg(short = 'x')]
        x: u64,
        #[arg(short = 'r')]
        r: Option<u64>,
    },
    /// Heads of rows 1..=x.
    Heads {
        #[arg(short = 'x')]
        x: u64,
    },
    /// Rows whose head is 1.
    Leads {
        #[arg(short = 'n', default_value_t = 20)]
        n: usize,
    },
    /// First row in which each of 1..=n is appended.
    Appears {
        #[arg(short = 'n', default_value_t = 20)]
        n: usize,
    },
    /// Value counts of row x, or of row a_m(x) with --reduced.
    Freq {
        #[arg(short = 'x')]
        x: u64,
        #[arg(long)]
        reduced: bool,
    },
    /// Track the cell at row x, column r through its visits to the first m columns.
    Track {
        #[arg(short = 'x')]
        x: u64,
        #[arg(short = 'r', default_value_t = 0)]
        r: u64,
        #[arg(short = 'n', default_value_t = 10)]
        n: usize,
        /// Only print y_0..y_n.
        #[arg(long)]
        y: bool,
    },
    /// Check the mod m^n congruence for a tracked cell.
    Congruence {
        #[arg(short = 'x')]
        x: u64,
        #[arg(short = 'r', default_value_t = 0)]
        r: u64,
        #[arg(short = 'n', default_value_t = 20)]
        n: usize,
    },
    /// Recover the start (x, r) from the column digits r_1, r_2, ...
    Reconstruct {
        #[arg(required = true, value_delimiter = ',', num_args = 1..)]
        digits: Vec<u64>,
        #[arg(long, default_value_t = tracking::DEFAULT_X_MAX)]
        x_max: u64,
    },
    /// Scan a tracked column sequence for periodic tails.
    Aperiodic {
        #[arg(short = 'x')]
        x: u64,
        #[arg(short = 'r', default_value_t = 0)]
        r: u64,
        #[arg(long, default_value_t = 200)]
        window: usize,
        #[arg(long, default_value_t = 20)]
        max_period: usize,
    },
    /// m-adic valuation and norm of a rational.
    Valuation {
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// m-adic distance between two rationals.
    Distance {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Square-root sequence sigma_1, sigma_2, ... of c.
    Sqrtseq(SqrtArgs),
    /// Digits of R(q), or ordinary m-adic digits with --madic.
    Expand {
        #[arg(short = 'q', allow_hyphen_values = true)]
        q: String,
        #[arg(short = 'n')]
        n: Option<usize>,
        #[arg(long)]
        madic: bool,
    },
    /// Add R(p) and R(q) digit by digit with the cumulative carry.
    Add(BinaryArgs),
    /// Multiply R(p) by R(q) with the shift-and-add algorithm.
    Mul(BinaryArgs),
    /// Multiply R(q) by m/(m+1) (or divide with --inverse).
    Shift {
        #[arg(short = 'q', allow_hyphen_values = true)]
        q: String,
        #[arg(short = 'n')]
        n: Option<usize>,
        #[arg(long)]
        inverse: bool,
    },
    /// Exact value of an eventually periodic digit stream.
    Periodic {
        #[arg(long, value_delimiter = ',')]
        pre: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        period: Vec<u64>,
    },
    /// Negabinary expansion and (s, k) decomposition (m is always 2).
    Negabin {
        #[arg(allow_hyphen_values = true)]
        x: BigInt,
    },
    /// The m = 2 lead rows from the negabinary recurrence, with bound checks.
    L2 {
        #[arg(short = 'n', default_value_t = 15)]
        n: usize,
    },
    /// Josephus game on row x of T_m and the survivor J_(m+1)(x).
    Josephus {
        #[arg(short = 'x')]
        x: u64,
    },
    /// Run a named cross-check suite.
    Verify {
        /// Suite name or criterion number.
        #[arg(default_value = "all")]
        suite: String,
        /// Run criteria one after another.
        #[arg(long)]
        serial: bool,
    },
}

#[derive(Args, Debug)]
struct SqrtArgs {
    #[arg(short = 'c', allow_hyphen_values = true)]
    c: BigInt,
    #[arg(long, allow_hyphen_values = true)]
    sigma1: BigInt,
    #[arg(short = 'n', default_value_t = 7)]
    n: usize,
    /// Keep terms as residues mod m^k instead of exact integers.
    #[arg(long)]
    reduced: Option<u32>,
}

#[derive(Args, Debug)]
struct BinaryArgs {
    #[arg(allow_hyphen_values = true)]
    p: String,
    #[arg(allow_hyphen_values = true)]
    q: String,
    #[arg(short = 'n')]
    n: Option<usize>,
}

/// JSON envelope shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub m: u64,
    pub op: String,
    pub params: Value,
    pub result: Value,
}

/// Partial sweep result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepResult {
    pub values: Vec<u64>,
    pub cap_reached: bool,
    pub rows_scanned: u64,
}

impl From<Capped<u64>> for SweepResult {
    fn from(c: Capped<u64>) -> Self {
        SweepResult {
            values: c.values,
            cap_reached: c.cap_reached,
            rows_scanned: c.rows_scanned,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StartResult {
    pub x: u64,
    pub r: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationResult {
    pub q: String,
    /// `None` for zero, whose valuation is infinite.
    pub valuation: Option<u64>,
    pub norm: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub p: String,
    pub q: String,
    pub distance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtResult {
    pub c: String,
    pub sigma1: String,
    pub inv: u64,
    pub terms: Vec<String>,
    pub modulus_exponent: Option<u32>,
    /// `sigma_n^2 = c mod m^n` for each term.
    pub congruences: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandResult {
    pub q: String,
    pub digits: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticResult {
    pub p: String,
    pub q: String,
    pub value: String,
    pub digits: Vec<u64>,
    pub carry: CarryTrace,
    /// Whether the digits equal the expansion of `value` computed directly.
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegabinResult {
    pub x: String,
    pub negabinary: String,
    pub bits: Vec<u8>,
    pub decomposition: Option<josephus::SkDecomposition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JosephusResult {
    pub game: JosephusTrace,
    pub one_position: u64,
    pub survivor: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub suite: String,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub outcomes: Vec<CheckOutcome>,
}

/// What a subcommand produced, before formatting.
struct Rendered {
    m: u64,
    op: &'static str,
    params: Value,
    result: Value,
    plain: String,
    csv: Vec<Vec<String>>,
    ok: bool,
}

impl Rendered {
    fn new<T: Serialize>(cfg: &RunConfig, op: &'static str, params: Value, result: &T) -> Result<Self> {
        Ok(Rendered {
            m: cfg.m,
            op,
            params,
            result: serde_json::to_value(result).map_err(|e| Error::Parse(e.to_string()))?,
            plain: String::new(),
            csv: Vec::new(),
            ok: true,
        })
    }

    fn plain(mut self, text: impl Into<String>) -> Self {
        self.plain = text.into();
        self
    }

    fn csv(mut self, rows: Vec<Vec<String>>) -> Self {
        self.csv = rows;
        self
    }

    fn ok(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }
}

fn joined<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn indexed_csv<T: ToString>(header: &str, values: &[T]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["index".to_string(), header.to_string()]];
    rows.extend(values.iter().enumerate().map(|(i, v)| vec![i.to_string(), v.to_string()]));
    rows
}

fn config(cli: &Cli) -> Result<RunConfig> {
    if cli.precision == 0 {
        return Err(invalid("--precision must be at least 1"));
    }
    Ok(RunConfig {
        m: cli.m,
        row_cap: RowCap::new(cli.row_cap)?,
        digit_precision: cli.precision,
        output_format: cli.format,
        seed: cli.seed,
    })
}

/// Parse `argv` (program name first), run the command and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let rendered = config(&cli).and_then(|cfg| execute(&cfg, &cli.command).map(|r| (cfg, r)));
    match rendered {
        Ok((cfg, r)) => match emit(&cfg, &r, out) {
            Ok(()) if r.ok => EXIT_OK,
            Ok(()) => EXIT_VERIFY,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(cfg: &RunConfig, r: &Rendered, out: &mut dyn Write) -> std::io::Result<()> {
    match cfg.output_format {
        OutputFormat::Plain => writeln!(out, "{}", r.plain),
        OutputFormat::Json => {
            let envelope = Envelope {
                m: r.m,
                op: r.op.to_string(),
                params: r.params.clone(),
                result: r.result.clone(),
            };
            serde_json::to_writer_pretty(&mut *out, &envelope)?;
            writeln!(out)
        }
        OutputFormat::Csv => {
            let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(&mut *out);
            for row in &r.csv {
                writer.write_record(row)?;
            }
            writer.flush()
        }
    }
}

fn rational(cfg: &RunConfig, text: &str) -> Result<MadicRational> {
    parse_rational(cfg.m, text)
}

fn execute(cfg: &RunConfig, command: &Command) -> Result<Rendered> {
    let m = cfg.m;
    match command {
        Command::Row { x, r } => {
            let row = triangle::row(m, *x)?;
            match r {
                Some(r) => {
                    let v = row.get(*r);
                    Ok(Rendered::new(cfg, "row", json!({"x": x, "r": r}), &v)?
                        .plain(v.to_string())
                        .csv(vec![vec!["value".into()], vec![v.to_string()]]))
                }
                None => Ok(Rendered::new(cfg, "row", json!({"x": x}), &row.cells())?
                    .plain(joined(row.cells()))
                    .csv(indexed_csv("value", row.cells()))),
            }
        }
        Command::Heads { x } => {
            let h = triangle::heads(m, *x)?;
            Ok(Rendered::new(cfg, "heads", json!({"x": x}), &h)?
                .plain(joined(&h))
                .csv(indexed_csv("head", &h)))
        }
        Command::Leads { n } | Command::Appears { n } => {
            let (op, found) = match command {
                Command::Leads { .. } => ("leads", triangle::leads(m, *n, cfg.row_cap)?),
                _ => ("appears", triangle::appearances(m, *n, cfg.row_cap)?),
            };
            let res = SweepResult::from(found);
            let mut plain = joined(&res.values);
            if res.cap_reached {
                plain.push_str(&format!("\n(row cap reached after {} rows)", res.rows_scanned));
            }
            let csv = indexed_csv("row", &res.values);
            Ok(Rendered::new(cfg, op, json!({"n": n, "row_cap": cfg.row_cap.get()}), &res)?
                .plain(plain)
                .csv(csv))
        }
        Command::Freq { x, reduced } => {
            let f = if *reduced {
                triangle::reduced_frequency_row(m, *x, cfg.row_cap)?
            } else {
                triangle::frequency_row(m, *x)?
            };
            let counts: BTreeMap<u64, u64> = f.counts.clone();
            let plain = counts.iter().map(|(v, c)| format!("{v}:{c}")).collect::<Vec<_>>().join(" ");
            let mut csv = vec![vec!["value".to_string(), "count".to_string()]];
            csv.extend(counts.iter().map(|(v, c)| vec![v.to_string(), c.to_string()]));
            Ok(Rendered::new(cfg, "freq", json!({"x": x, "reduced": reduced}), &counts)?
                .plain(plain)
                .csv(csv))
        }
        Command::Track { x, r, n, y } => {
            if *y {
                let ys = tracking::y_sequence(m, *x, *r, *n)?;
                let text: Vec<String> = ys.iter().map(|v| v.to_string()).collect();
                return Ok(Rendered::new(cfg, "y_sequence", json!({"x": x, "r": r, "n": n}), &text)?
                    .plain(text.join(" "))
                    .csv(indexed_csv("y", &text)));
            }
            let states = tracking::track(m, *x, *r, *n)?;
            let mut plain = String::from("n x r y");
            let mut csv = vec![vec!["n".into(), "x".into(), "r".into(), "y".into()]];
            for s in &states {
                plain.push_str(&format!("\n{} {} {} {}", s.n, s.x, s.r, s.y));
                csv.push(vec![s.n.to_string(), s.x.to_string(), s.r.to_string(), s.y.to_string()]);
            }
            Ok(Rendered::new(cfg, "track", json!({"x": x, "r": r, "n": n}), &states)?
                .plain(plain)
                .csv(csv))
        }
        Command::Congruence { x, r, n } => {
            let w = tracking::verify_congruence(m, *x, *r, *n)?;
            let plain = format!(
                "{} (mod {}^{}: {} vs {})",
                if w.holds { "holds" } else { "FAILS" },
                m,
                n,
                w.lhs,
                w.rhs
            );
            let csv = vec![
                vec!["n".into(), "lhs".into(), "rhs".into(), "holds".into()],
                vec![n.to_string(), w.lhs.to_string(), w.rhs.to_string(), w.holds.to_string()],
            ];
            let ok = w.holds;
            Ok(Rendered::new(cfg, "congruence", json!({"x": x, "r": r, "n": n}), &w)?
                .plain(plain)
                .csv(csv)
                .ok(ok))
        }
        Command::Reconstruct { digits, x_max } => {
            let (x, r) = tracking::reconstruct_from_tail(m, digits, *x_max)?;
            let res = StartResult { x, r };
            Ok(Rendered::new(cfg, "reconstruct", json!({"digits": digits, "x_max": x_max}), &res)?
                .plain(format!("x = {x}, r = {r}"))
                .csv(vec![vec!["x".into(), "r".into()], vec![x.to_string(), r.to_string()]]))
        }
        Command::Aperiodic { x, r, window, max_period } => {
            let rep = tracking::aperiodicity_check(m, *x, *r, *window, *max_period)?;
            let mut plain = format!(
                "{}: no period <= {} repeats from any start <= {} in {} digits",
                if rep.passed() { "aperiodic" } else { "PERIODIC" },
                max_period,
                rep.latest_start,
                window
            );
            let mut csv = vec![vec!["period".into(), "last_mismatch".into(), "aperiodic".into()]];
            for w in &rep.periods {
                let last = w.last_mismatch.map_or("none".to_string(), |i| i.to_string());
                plain.push_str(&format!("\n  p = {:>3}: last mismatch at {}", w.period, last));
                csv.push(vec![w.period.to_string(), last, w.aperiodic.to_string()]);
            }
            let ok = rep.passed();
            Ok(Rendered::new(
                cfg,
                "aperiodic",
                json!({"x": x, "r": r, "window": window, "max_period": max_period}),
                &rep,
            )?
            .plain(plain)
            .csv(csv)
            .ok(ok))
        }
        Command::Valuation { q } => {
            let q = rational(cfg, q)?;
            let v = q.valuation();
            let res = ValuationResult {
                q: q.to_string(),
                valuation: v.finite(),
                norm: v.norm(m).to_string(),
            };
            let shown = match v {
                Valuation::Infinite => "inf".to_string(),
                Valuation::Finite(k) => k.to_string(),
            };
            Ok(Rendered::new(cfg, "valuation", json!({"q": res.q}), &res)?
                .plain(format!("v = {shown}, |q| = {}", res.norm))
                .csv(vec![
                    vec!["q".into(), "valuation".into(), "norm".into()],
                    vec![res.q.clone(), shown, res.norm.clone()],
                ]))
        }
        Command::Distance { p, q } => {
            let (p, q) = (rational(cfg, p)?, rational(cfg, q)?);
            let res = DistanceResult {
                p: p.to_string(),
                q: q.to_string(),
                distance: p.distance(&q)?.to_string(),
            };
            Ok(Rendered::new(cfg, "distance", json!({"p": res.p, "q": res.q}), &res)?
                .plain(res.distance.clone())
                .csv(vec![
                    vec!["p".into(), "q".into(), "distance".into()],
                    vec![res.p.clone(), res.q.clone(), res.distance.clone()],
                ]))
        }
        Command::Sqrtseq(a) => {
            let seq = match a.reduced {
                Some(k) => SqrtSequence::reduced(m, a.c.clone(), a.sigma1.clone(), a.n, k)?,
                None => SqrtSequence::exact(m, a.c.clone(), a.sigma1.clone(), a.n)?,
            };
            let limit = seq.modulus_exponent.map_or(usize::MAX, |k| k as usize);
            let congruences: Vec<bool> = (1..=a.n)
                .map(|n| n <= limit && seq.square_congruence_holds(n))
                .collect();
            let res = SqrtResult {
                c: a.c.to_string(),
                sigma1: a.sigma1.to_string(),
                inv: seq.inv,
                terms: seq.terms.iter().map(|t| t.to_string()).collect(),
                modulus_exponent: seq.modulus_exponent,
                congruences,
            };
            let mut csv = vec![vec!["n".into(), "sigma".into(), "square_congruence".into()]];
            for (i, (t, ok)) in res.terms.iter().zip(&res.congruences).enumerate() {
                csv.push(vec![(i + 1).to_string(), t.clone(), ok.to_string()]);
            }
            let plain = res.terms.join("\n");
            Ok(Rendered::new(
                cfg,
                "sqrtseq",
                json!({"c": res.c, "sigma1": res.sigma1, "n": a.n, "reduced": a.reduced}),
                &res,
            )?
            .plain(plain)
            .csv(csv))
        }
        Command::Expand { q, n, madic } => {
            let q = rational(cfg, q)?;
            let n = n.unwrap_or(cfg.digit_precision);
            let digits = if *madic {
                expansion::madic_digitize(&q, n)
            } else {
                expansion::digitize(&q, n).digits().to_vec()
            };
            let res = ExpandResult {
                q: q.to_string(),
                digits,
            };
            let csv = indexed_csv("digit", &res.digits);
            Ok(Rendered::new(cfg, if *madic { "expand_madic" } else { "expand" }, json!({"q": res.q, "n": n}), &res)?
                .plain(joined(&res.digits))
                .csv(csv))
        }
        Command::Add(a) | Command::Mul(a) => {
            let is_add = matches!(command, Command::Add(_));
            let (p, q) = (rational(cfg, &a.p)?, rational(cfg, &a.q)?);
            let n = a.n.unwrap_or(cfg.digit_precision);
            let (left, right) = (expansion::digitize(&p, n), expansion::digitize(&q, n));
            let (value, (stream, carry)) = if is_add {
                (p.checked_add(&q)?, expansion::add(&left, &right, n)?)
            } else {
                (p.checked_mul(&q)?, expansion::multiply_with_carry(&left, &right, n)?)
            };
            let expected = expansion::digitize(&value, n);
            let res = ArithmeticResult {
                p: p.to_string(),
                q: q.to_string(),
                value: value.to_string(),
                digits: stream.digits().to_vec(),
                agrees: expected.digits() == stream.digits(),
                carry,
            };
            let kappa: Vec<String> = res.carry.kappa.iter().map(|k| k.to_string()).collect();
            let plain = format!(
                "R({}) {} R({}) = R({})\ndigits: {}\ncarry:  {}",
                res.p,
                if is_add { "+" } else { "x" },
                res.q,
                res.value,
                joined(&res.digits),
                kappa.join(" ")
            );
            let mut csv = vec![vec!["index".into(), "digit".into(), "carry".into()]];
            for (i, (d, k)) in res.digits.iter().zip(&kappa).enumerate() {
                csv.push(vec![i.to_string(), d.to_string(), k.clone()]);
            }
            let ok = res.agrees;
            Ok(Rendered::new(cfg, if is_add { "add" } else { "mul" }, json!({"p": res.p, "q": res.q, "n": n}), &res)?
                .plain(plain)
                .csv(csv)
                .ok(ok))
        }
        Command::Shift { q, n, inverse } => {
            let q = rational(cfg, q)?;
            let n = n.unwrap_or(cfg.digit_precision);
            let stream = expansion::digitize(&q, n);
            let shifted = if *inverse {
                expansion::unshift(&stream)?
            } else {
                expansion::shift(&stream)
            };
            let value = match shifted.origin() {
                expansion::Origin::Rational(v) => v.to_string(),
                _ => String::new(),
            };
            let res = ExpandResult {
                q: value,
                digits: shifted.digits().to_vec(),
            };
            let csv = indexed_csv("digit", &res.digits);
            Ok(Rendered::new(cfg, "shift", json!({"q": q.to_string(), "n": n, "inverse": inverse}), &res)?
                .plain(joined(&res.digits))
                .csv(csv))
        }
        Command::Periodic { pre, period } => {
            let v = expansion::periodic_to_rational(m, pre, period)?.to_string();
            Ok(Rendered::new(cfg, "periodic", json!({"pre": pre, "period": period}), &v)?
                .plain(v.clone())
                .csv(vec![vec!["value".into()], vec![v]]))
        }
        Command::Negabin { x } => {
            let nb = josephus::to_negabinary(x);
            let res = NegabinResult {
                x: x.to_string(),
                negabinary: nb.to_string(),
                bits: nb.bits().to_vec(),
                decomposition: josephus::decompose_sk(x).ok(),
            };
            let mut csv = vec![vec!["x".into(), "negabinary".into(), "s".into(), "k".into()]];
            let (s, k) = res
                .decomposition
                .as_ref()
                .map_or((String::new(), String::new()), |d| (d.s.to_string(), d.k.to_string()));
            csv.push(vec![res.x.clone(), res.negabinary.clone(), s, k]);
            let mut r = Rendered::new(cfg, "negabin", json!({"x": res.x}), &res)?
                .plain(res.negabinary.clone())
                .csv(csv);
            r.m = 2;
            Ok(r)
        }
        Command::L2 { n } => {
            let steps: Vec<L2Step> = josephus::l2_sequence(*n)?;
            let mut plain = String::from("n l_2(n) s k super-exponential");
            let mut csv = vec![vec![
                "n".into(),
                "value".into(),
                "s".into(),
                "k".into(),
                "k_bound".into(),
                "ratio_upper".into(),
                "ratio_lower".into(),
                "super_exponential".into(),
            ]];
            for s in &steps {
                plain.push_str(&format!(
                    "\n{} {} {} {} {:?}",
                    s.n, s.value, s.decomposition.s, s.decomposition.k, s.super_exponential
                ));
                csv.push(vec![
                    s.n.to_string(),
                    s.value.to_string(),
                    s.decomposition.s.to_string(),
                    s.decomposition.k.to_string(),
                    s.k_bound.bound.to_string(),
                    format!("{:?}", s.ratio_upper),
                    format!("{:?}", s.ratio_lower),
                    format!("{:?}", s.super_exponential),
                ]);
            }
            let mut r = Rendered::new(cfg, "l2", json!({"n": n}), &steps)?.plain(plain).csv(csv);
            r.m = 2;
            Ok(r)
        }
        Command::Josephus { x } => {
            let game = josephus::josephus_game(m, *x)?;
            let one_position = triangle::one_position(m, *x)?;
            let survivor = josephus::josephus_survivor(m + 1, *x)?;
            let plain = format!(
                "eliminated: {}\nwinner column: {}\nwinner value: {}\nJ_{}({}) = {}",
                joined(&game.eliminated),
                game.winner_column,
                game.winner_value,
                m + 1,
                x,
                survivor
            );
            let mut csv = vec![vec!["step".into(), "column".into()]];
            csv.extend(game.eliminated.iter().enumerate().map(|(i, c)| vec![(i + 1).to_string(), c.to_string()]));
            csv.push(vec!["winner".into(), game.winner_column.to_string()]);
            let res = JosephusResult {
                game,
                one_position,
                survivor,
            };
            Ok(Rendered::new(cfg, "josephus", json!({"x": x}), &res)?.plain(plain).csv(csv))
        }
        Command::Verify { suite, serial } => {
            let ids = verify::suite(suite)?;
            let outcomes = verify::run_many(&ids, cfg.seed, !serial)?;
            let passed = outcomes.iter().filter(|o| o.passed).count();
            let res = VerifyResult {
                suite: suite.clone(),
                seed: cfg.seed,
                passed,
                failed: outcomes.len() - passed,
                outcomes,
            };
            let mut plain = String::new();
            let mut csv = vec![vec!["criterion".into(), "name".into(), "passed".into()]];
            for o in &res.outcomes {
                plain.push_str(&o.summary_line());
                plain.push('\n');
                for line in &o.detail {
                    plain.push_str(&format!("    {line}\n"));
                }
                csv.push(vec![o.id.to_string(), o.name.clone(), o.passed.to_string()]);
            }
            plain.push_str(&format!("{} passed, {} failed", res.passed, res.failed));
            let ok = res.failed == 0;
            Ok(Rendered::new(cfg, "verify", json!({"suite": suite, "seed": cfg.seed}), &res)?
                .plain(plain)
                .csv(csv)
                .ok(ok))
        }
    }
}

/// Re-exported so callers can deserialize the `result` field of an envelope.
pub type TrackResult = Vec<TrackState>;
pub type CongruenceResult = CongruenceWitness;
pub type AperiodicResult = AperiodicityReport;

#[cfg(test)]
mod tests {
    use super::*;
    use serde::de::DeserializeOwned;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("rotor").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn json_result<T: DeserializeOwned>(args: &[&str]) -> (Envelope, T) {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let (code, out, err) = run_capture(&full);
        assert_eq!(code, 0, "{err}");
        let env: Envelope = serde_json::from_str(&out).unwrap();
        let result = serde_json::from_value(env.result.clone()).unwrap();
        (env, result)
    }

    #[test]
    fn plain_examples() {
        assert_eq!(run_capture(&["row", "-m", "3", "-x", "10"]).1, "4 3 2 3 3 3 3 2 1 4\n");
        assert_eq!(
            run_capture(&["expand", "-m", "3", "-q", "16", "-n", "12"]).1,
            "1 2 0 2 1 1 2 1 2 2 2 0\n"
        );
        assert_eq!(run_capture(&["negabin", "999"]).1, "10000111011\n");
        assert_eq!(run_capture(&["row", "-m", "3", "-x", "9", "-r", "10"]).1, "2\n");
        assert_eq!(run_capture(&["periodic", "--pre", "2", "--period", "1"]).1, "5\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["row", "-x", "0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["expand", "-q", "1/3"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["expand", "-q", "1/x"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
        assert_eq!(run_capture(&["--precision", "0", "expand", "-q", "1"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["verify", "nope"]).0, EXIT_USAGE);
    }

    #[test]
    fn json_round_trips() {
        let (env, cells): (_, Vec<u64>) = json_result(&["row", "-x", "10"]);
        assert_eq!((env.m, env.op.as_str()), (3, "row"));
        assert_eq!(cells, triangle::row(3, 10).unwrap().into_cells());

        let (_, states): (_, TrackResult) = json_result(&["track", "-x", "1", "-n", "30"]);
        assert_eq!(states, tracking::track(3, 1, 0, 30).unwrap());

        let (_, res): (_, ArithmeticResult) = json_result(&["add", "1", "8", "-n", "13"]);
        assert_eq!(res.carry, expansion::add(
            &expansion::digitize(&MadicRational::integer(3, 1), 13),
            &expansion::digitize(&MadicRational::integer(3, 8), 13),
            13,
        ).unwrap().1);
        assert!(res.agrees);

        let (env, res): (_, NegabinResult) = json_result(&["negabin", "43"]);
        assert_eq!(env.m, 2);
        assert_eq!(res.decomposition.unwrap().k, 7);

        let (_, steps): (_, Vec<L2Step>) = json_result(&["l2", "-n", "12"]);
        assert_eq!(steps, josephus::l2_sequence(12).unwrap());

        let (_, res): (_, SqrtResult) = json_result(&["sqrtseq", "-c", "7", "--sigma1", "2", "-n", "7"]);
        assert_eq!(res.terms[6], "-899158406333172853");

        let (_, res): (_, JosephusResult) = json_result(&["josephus", "-x", "10"]);
        assert_eq!(res.survivor, 5);
        assert_eq!(res.game, josephus::josephus_game(3, 10).unwrap());

        let (_, w): (_, CongruenceResult) = json_result(&["congruence", "-x", "5", "-r", "2", "-n", "40"]);
        assert_eq!(w, tracking::verify_congruence(3, 5, 2, 40).unwrap());

        let (_, rep): (_, AperiodicResult) = json_result(&["aperiodic", "-x", "1"]);
        assert_eq!(rep, tracking::aperiodicity_check(3, 1, 0, 200, 20).unwrap());

        let (_, counts): (_, BTreeMap<u64, u64>) = json_result(&["-m", "1", "freq", "-x", "11"]);
        assert_eq!(counts, BTreeMap::from([(1, 1), (2, 4), (3, 5), (4, 1)]));

        let (_, sweep): (_, SweepResult) = json_result(&["--row-cap", "100", "-m", "2", "leads", "-n", "10"]);
        assert_eq!(sweep.values, vec![1, 2, 3, 14, 21, 47]);
        assert!(sweep.cap_reached);

        let (_, start): (_, StartResult) = json_result(&["reconstruct", "1,2,0,2,1,1,2,1,2", "--x-max", "50"]);
        assert_eq!(start, StartResult { x: 1, r: 0 });

        let (_, v): (_, ValuationResult) = json_result(&["valuation", "54/4"]);
        assert_eq!((v.valuation, v.norm.as_str()), (Some(3), "1/27"));
        let (_, v): (_, ValuationResult) = json_result(&["valuation", "0"]);
        assert_eq!(v.valuation, None);

        let (_, d): (_, DistanceResult) = json_result(&["distance", "16", "1"]);
        assert_eq!(d.distance, "1/3");

        let (_, e): (_, ExpandResult) = json_result(&["shift", "-q", "16", "-n", "4"]);
        assert_eq!((e.q.as_str(), e.digits), ("12", vec![0, 1, 2, 0, 2]));
    }

    #[test]
    fn csv_output() {
        let (code, out, _) = run_capture(&["--format", "csv", "heads", "-x", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out, "index,head\n0,1\n1,1\n2,2\n3,2\n");
    }

    #[test]
    fn verify_suite_runs() {
        let (code, out, _) = run_capture(&["verify", "3"]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("PASS"));
    }
}
