//! `qgames` — command-line front end for the quantum-games engine.
//!
//! Every subcommand emits one machine-readable table (CSV by default,
//! JSON with `--format json`) either to standard output or atomically to
//! `--out FILE`. Output is deterministic for a fixed seed regardless of
//! how many worker threads the parallel feature uses: randomness is
//! derived per cell from the seed and the cell index, and tables are
//! assembled by index, never by completion order.
//!
//! Exit codes: 0 success, 1 invalid arguments or I/O failure, 2 internal
//! consistency check failed (crosscheck deviation above tolerance).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use qgames::equilibria::{best_response, nash_equilibria, StrategyGrid};
use qgames::ewl::catalog::{game_by_name, game_catalog, quantum_edge_strategy};
use qgames::ewl::closed_form::{closed_form_classical_alice, closed_form_payoff};
use qgames::ewl::sampling::crosscheck_deviation;
use qgames::ewl::DecoherenceSpec;
use qgames::pennyflip::q_win_probability;
use qgames::truel::boundary_scan;

/// Decoherence levels used by the boundary sweep.
const BOUNDARY_P_VALUES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
/// Number of decoherence samples for surface and curve sweeps: 0, 0.1, ... 1.
const P_STEPS: usize = 11;

#[derive(Parser)]
#[command(
    name = "qgames",
    version,
    about = "Quantum games under decoherence: payoff tables for plotting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the table to FILE (atomic: temp file + rename) instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Base seed for randomized commands (crosscheck); others are
    /// deterministic and ignore it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Payoff surface over (p, theta): classical Alice sweeps theta against
    /// the game's fixed quantum-edge Bob.
    Surface {
        /// Game name: pd, chicken or bos.
        #[arg(long)]
        game: String,
        /// Number of theta samples across [0, pi].
        #[arg(long, default_value_t = 33)]
        grid: usize,
    },
    /// Best classical reply vs decoherence for every catalog game: Alice
    /// plays her best classical theta against the quantum-edge Bob.
    Curves {
        /// Resolution of Alice's classical response grid.
        #[arg(long, default_value_t = 33)]
        grid: usize,
    },
    /// Coin-duel win probability of the quantum player vs measurement
    /// strength.
    Pennyflip {
        /// Number of p samples across [0, 1].
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
    /// Three-player shootout: Alice's payoff for holding fire vs shooting
    /// Charles over an (a, b) failure-probability grid, for five
    /// decoherence levels.
    TruelBoundary {
        /// Grid resolution per axis.
        #[arg(long, default_value_t = 21)]
        grid: usize,
        /// Charles's failure probability.
        #[arg(long, default_value_t = 0.0)]
        charles: f64,
    },
    /// Compare the closed-form payoff oracle against the full density-matrix
    /// pipeline on seeded random profiles; exit 2 on disagreement.
    Crosscheck {
        /// Random profiles per game.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Largest tolerated |closed form - pipeline|.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Pure Nash equilibria of one game at one decoherence level by grid
    /// search with local refinement.
    Nash {
        /// Game name: pd, chicken or bos.
        #[arg(long)]
        game: String,
        /// Decoherence probability applied in both windows.
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        /// Restrict both players to classical strategies (theta only).
        #[arg(long)]
        classical: bool,
        /// Theta resolution; phase axes use (grid + 1) / 2 points.
        #[arg(long, default_value_t = 9)]
        grid: usize,
        /// Deviation tolerance for accepting an equilibrium.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

/// A failure that should stop the run with a specific exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn inconsistent(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<qgames::Error> for Failure {
    fn from(err: qgames::Error) -> Self {
        Failure::invalid(err.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::invalid(format!("i/o error: {err}"))
    }
}

/// One emitted cell; integers and text stay unmangled in both formats.
enum Value {
    Text(String),
    Integer(u64),
    Number(f64),
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn to_csv(&self) -> String {
        let mut text = self.columns.join(",");
        text.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::Text(s) => s.clone(),
                    Value::Integer(n) => n.to_string(),
                    // 17 significant digits: round-trip safe for f64
                    Value::Number(x) => format!("{x:.16e}"),
                })
                .collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        text
    }

    fn to_json(&self) -> String {
        let columns: Vec<serde_json::Value> = self
            .columns
            .iter()
            .map(|&c| serde_json::Value::from(c))
            .collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                serde_json::Value::from(
                    row.iter()
                        .map(|v| match v {
                            Value::Text(s) => serde_json::Value::from(s.as_str()),
                            Value::Integer(n) => serde_json::Value::from(*n),
                            Value::Number(x) => serde_json::Value::from(*x),
                        })
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let mut doc = serde_json::Map::new();
        doc.insert("columns".into(), serde_json::Value::from(columns));
        doc.insert("rows".into(), serde_json::Value::from(rows));
        let mut text = serde_json::Value::from(doc).to_string();
        text.push('\n');
        text
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help and version requests are not argument errors
            let benign = matches!(
                err.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            );
            let _ = err.print();
            return if benign {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (table, check) = match &cli.command {
        Command::Surface { game, grid } => (surface(game, *grid)?, None),
        Command::Curves { grid } => (curves(*grid)?, None),
        Command::Pennyflip { steps } => (pennyflip(*steps)?, None),
        Command::TruelBoundary { grid, charles } => (truel_boundary(*grid, *charles)?, None),
        Command::Crosscheck { samples, tol } => {
            let (table, worst) = crosscheck(*samples, cli.seed)?;
            let check = (worst > *tol).then(|| {
                Failure::inconsistent(format!(
                    "oracle disagreement {worst:.3e} exceeds tolerance {tol:.3e}"
                ))
            });
            (table, check)
        }
        Command::Nash {
            game,
            p,
            classical,
            grid,
            tol,
        } => (nash(game, *p, *classical, *grid, *tol)?, None),
    };

    let text = match cli.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    emit(&text, cli.out.as_deref())?;

    match check {
        Some(failure) => Err(failure),
        None => Ok(()),
    }
}

/// Write to stdout, or atomically to `path` via a sibling temp file so a
/// crash never leaves a half-written table behind.
fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".tmp");
            let tmp = PathBuf::from(tmp);
            {
                let mut file = fs::File::create(&tmp)?;
                file.write_all(text.as_bytes())?;
                file.sync_all()?;
            }
            fs::rename(&tmp, path)?;
            Ok(())
        }
    }
}

fn lookup_game(name: &str) -> Result<qgames::ewl::GameDefinition, Failure> {
    game_by_name(name).ok_or_else(|| {
        Failure::invalid(format!(
            "unknown game {name:?}; expected pd, chicken or bos"
        ))
    })
}

fn decoherence_steps() -> impl Iterator<Item = f64> {
    (0..P_STEPS).map(|i| i as f64 / (P_STEPS - 1) as f64)
}

fn surface(game: &str, grid: usize) -> Result<Table, Failure> {
    if grid < 2 {
        return Err(Failure::invalid("surface needs --grid >= 2"));
    }
    let game = lookup_game(game)?;
    let bob = quantum_edge_strategy(&game.name).expect("catalog game has an edge strategy");
    let thetas: Vec<f64> = (0..grid)
        .map(|t| (t as f64 * std::f64::consts::PI / (grid - 1) as f64).min(std::f64::consts::PI))
        .collect();
    let cells: Vec<(f64, f64, f64, f64)> = qgames::exec::map_indexed(P_STEPS * grid, |idx| {
        let p = (idx / grid) as f64 / (P_STEPS - 1) as f64;
        let theta = thetas[idx % grid];
        let noise = DecoherenceSpec::symmetric(p).expect("p in range");
        let alice = closed_form_classical_alice(0, theta, &bob, &noise, &game.payoffs)
            .expect("validated inputs");
        let bob_payoff = closed_form_classical_alice(1, theta, &bob, &noise, &game.payoffs)
            .expect("validated inputs");
        (p, theta, alice, bob_payoff)
    });
    Ok(Table {
        columns: vec!["p", "theta", "payoff_alice", "payoff_bob"],
        rows: cells
            .into_iter()
            .map(|(p, theta, a, b)| {
                vec![
                    Value::Number(p),
                    Value::Number(theta),
                    Value::Number(a),
                    Value::Number(b),
                ]
            })
            .collect(),
    })
}

fn curves(grid: usize) -> Result<Table, Failure> {
    let response_grid = StrategyGrid::classical(grid)?;
    let mut rows = Vec::new();
    for game in game_catalog() {
        let bob = quantum_edge_strategy(&game.name).expect("catalog game has an edge strategy");
        for p in decoherence_steps() {
            let noise = DecoherenceSpec::symmetric(p)?;
            let alice = best_response(&game.payoffs, 0, &bob, &noise, &response_grid)?;
            let bob_payoff = closed_form_payoff(1, &alice.best, &bob, &noise, &game.payoffs)?;
            rows.push(vec![
                Value::Text(game.name.clone()),
                Value::Number(p),
                Value::Number(alice.value),
                Value::Number(bob_payoff),
            ]);
        }
    }
    Ok(Table {
        columns: vec!["game", "p", "payoff_alice", "payoff_bob"],
        rows,
    })
}

fn pennyflip(steps: usize) -> Result<Table, Failure> {
    if steps < 2 {
        return Err(Failure::invalid("pennyflip needs --steps >= 2"));
    }
    let rows = (0..steps)
        .map(|i| {
            let p = i as f64 / (steps - 1) as f64;
            let q_win = q_win_probability(p).expect("p in range");
            vec![Value::Number(p), Value::Number(q_win)]
        })
        .collect();
    Ok(Table {
        columns: vec!["p", "q_win"],
        rows,
    })
}

fn truel_boundary(grid: usize, charles: f64) -> Result<Table, Failure> {
    let mut rows = Vec::new();
    for p in BOUNDARY_P_VALUES {
        for cell in boundary_scan(p, grid, charles)? {
            rows.push(vec![
                Value::Number(p),
                Value::Number(cell.a),
                Value::Number(cell.b),
                Value::Number(cell.payoff_nothing),
                Value::Number(cell.payoff_target),
            ]);
        }
    }
    Ok(Table {
        columns: vec!["p", "a", "b", "payoff_nothing", "payoff_target_charles"],
        rows,
    })
}

fn crosscheck(samples: u64, seed: u64) -> Result<(Table, f64), Failure> {
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for game in game_catalog() {
        let dev = crosscheck_deviation(&game, samples, seed)?;
        worst = worst.max(dev);
        rows.push(vec![
            Value::Text(game.name.clone()),
            Value::Integer(samples),
            Value::Number(dev),
        ]);
    }
    Ok((
        Table {
            columns: vec!["game", "samples", "max_deviation"],
            rows,
        },
        worst,
    ))
}

fn nash(game: &str, p: f64, classical: bool, grid: usize, tol: f64) -> Result<Table, Failure> {
    let game = lookup_game(game)?;
    let noise = DecoherenceSpec::symmetric(p)?;
    let strategy_grid = if classical {
        StrategyGrid::classical(grid)?
    } else {
        let phases = grid.div_ceil(2);
        StrategyGrid::full(grid, phases.max(2), phases.max(2))?
    };
    let equilibria = nash_equilibria(&game.payoffs, &noise, &strategy_grid, tol)?;
    let rows = equilibria
        .into_iter()
        .map(|eq| {
            vec![
                Value::Text(game.name.clone()),
                Value::Number(p),
                Value::Number(eq.first.theta()),
                Value::Number(eq.first.alpha()),
                Value::Number(eq.first.beta()),
                Value::Number(eq.second.theta()),
                Value::Number(eq.second.alpha()),
                Value::Number(eq.second.beta()),
                Value::Number(eq.payoffs[0]),
                Value::Number(eq.payoffs[1]),
            ]
        })
        .collect();
    Ok(Table {
        columns: vec![
            "game", "p", "theta_a", "alpha_a", "beta_a", "theta_b", "alpha_b", "beta_b",
            "payoff_a", "payoff_b",
        ],
        rows,
    })
}
