use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};
use serde::Serialize;

use tropgw::absolute::{absolute_invariant, kontsevich, GwRecord, HomologyClass};
use tropgw::configs::CurveConfig;
use tropgw::lattice::{LatticeVector, Rational};
use tropgw::solver::{InvariantTable, Mismatch, Solver, DEFAULT_VERIFY_MIN_CHI, DEFAULT_Y_SET};
use tropgw::store::{load_table, save_table, CACHE_FILE};

/// Exact relative and absolute Gromov-Witten invariants of blowups of the plane.
#[derive(Parser, Debug)]
#[command(name = "tropgw", version)]
struct Cli {
    /// Directory holding the persistent invariant table.
    #[arg(long, global = true, env = "TROPGW_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print n_Γ for a connected configuration.
    Invariant {
        /// Configuration JSON, e.g. '[[[2,-2]]]'.
        #[arg(long, value_parser = parse_connected)]
        gamma: CurveConfig,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate every connected invariant within the bounds.
    Table {
        #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
        max_degree: i64,
        #[arg(long, allow_negative_numbers = true)]
        min_chi: i64,
        /// Table file to resume from and write back to.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print the absolute invariant n_{g,β} of the plane blown up in n points.
    Absolute {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        points: u32,
        #[arg(long, allow_negative_numbers = true)]
        genus: i64,
        /// Class "d:c1,...,cn" meaning dH - c1 E1 - ... - cn En.
        #[arg(long, allow_hyphen_values = true)]
        class: HomologyClass,
        #[arg(long)]
        json: bool,
    },
    /// Check that both sweeps of e^F agree; exits 1 on any mismatch.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
        max_degree: i64,
        /// Incoming vector "(y1,y2)"; repeatable. Defaults to a fixed set.
        #[arg(long = "y", allow_hyphen_values = true, value_parser = parse_incoming)]
        ys: Vec<LatticeVector>,
        #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_VERIFY_MIN_CHI)]
        min_chi: i64,
        #[arg(long)]
        json: bool,
    },
    /// Print N_1..N_d, the classical counts of rational plane curves.
    OracleKontsevich {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_degree: u32,
        #[arg(long)]
        json: bool,
    },
}

fn parse_connected(s: &str) -> Result<CurveConfig, String> {
    let c = CurveConfig::parse_json(s).map_err(|e| e.to_string())?;
    if !c.is_outgoing_only() || !c.is_connected() {
        return Err("expected one component of outgoing vectors".into());
    }
    Ok(c)
}

fn parse_incoming(s: &str) -> Result<LatticeVector, String> {
    let y: LatticeVector = s.parse().map_err(|e: tropgw::ParseError| e.to_string())?;
    if !tropgw::is_valid_incoming(y) {
        return Err(format!(
            "{y} is not an admissible incoming vector (need y1 <= -1, y2 > y1)"
        ));
    }
    Ok(y)
}

#[derive(Serialize)]
struct Entry<'a> {
    gamma: &'a CurveConfig,
    value: &'a Rational,
}

#[derive(Serialize)]
struct VerifyLine<'a> {
    y: LatticeVector,
    max_degree: i64,
    min_chi: i64,
    holds: bool,
    coefficients: usize,
    mismatches: &'a [Mismatch],
}

/// Loads the cached table on creation and writes it back if it grew.
struct Cache {
    path: Option<PathBuf>,
    loaded: usize,
}

impl Cache {
    fn open(path: Option<PathBuf>) -> Result<(Self, Solver)> {
        let table = match &path {
            Some(p) if p.exists() => load_table(p)?,
            _ => InvariantTable::new(),
        };
        let loaded = table.len();
        Ok((Cache { path, loaded }, Solver::with_table(table)))
    }

    fn close(&self, solver: &Solver, bounds: Option<(i64, i64)>) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let grew = solver.table().len() > self.loaded;
        if !grew && bounds.is_none() {
            return Ok(());
        }
        let mut table = solver.table().clone();
        if let Some(new) = bounds {
            table.set_bounds(Some(widest(table.bounds(), new)));
        }
        save_table(&table, path).with_context(|| format!("saving cache {}", path.display()))
    }
}

/// Keep whichever bounds cover the other, preferring the newer ones.
fn widest(old: Option<(i64, i64)>, new: (i64, i64)) -> (i64, i64) {
    match old {
        Some(o) if o.0 >= new.0 && o.1 <= new.1 => o,
        _ => new,
    }
}

fn cache_file(dir: Option<&Path>) -> Option<PathBuf> {
    dir.map(|d| d.join(CACHE_FILE))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cached = cache_file(cli.cache_dir.as_deref());
    match cli.command {
        Command::Invariant { gamma, json } => {
            let (cache, mut solver) = Cache::open(cached)?;
            let value = solver.invariant(&gamma)?;
            cache.close(&solver, None)?;
            if json {
                print_json(&Entry {
                    gamma: &gamma,
                    value: &value,
                })?;
            } else {
                println!("{value}");
            }
        }
        Command::Table {
            max_degree,
            min_chi,
            cache,
            json,
        } => {
            let (cache, mut solver) = Cache::open(cache.or(cached))?;
            let table = solver.invariant_table(max_degree, min_chi)?;
            cache.close(&solver, Some((max_degree, min_chi)))?;
            let entries: Vec<Entry> = table.solved().map(|(gamma, value)| Entry { gamma, value }).collect();
            if json {
                print_json(&entries)?;
            } else {
                for e in entries {
                    println!("{}\t{}", e.gamma, e.value);
                }
            }
        }
        Command::Absolute {
            points,
            genus,
            class,
            json,
        } => {
            let (cache, mut solver) = Cache::open(cached)?;
            let value = absolute_invariant(points as usize, genus, &class, &mut solver)?;
            cache.close(&solver, None)?;
            if json {
                print_json(&GwRecord { genus, class, value })?;
            } else {
                println!("{value}");
            }
        }
        Command::Verify {
            max_degree,
            ys,
            min_chi,
            json,
        } => {
            let ys = if ys.is_empty() { DEFAULT_Y_SET.to_vec() } else { ys };
            let (cache, mut solver) = Cache::open(cached)?;
            let mut all_hold = true;
            let mut lines = Vec::new();
            for y in ys {
                let report = solver.verify_identity(y, max_degree, min_chi)?;
                all_hold &= report.holds();
                let coefficients = report
                    .left
                    .configs()
                    .chain(report.right.configs())
                    .collect::<std::collections::BTreeSet<_>>()
                    .len();
                lines.push((report, coefficients));
            }
            cache.close(&solver, None)?;
            if json {
                let out: Vec<VerifyLine> = lines
                    .iter()
                    .map(|(r, n)| VerifyLine {
                        y: r.y,
                        max_degree: r.max_degree,
                        min_chi: r.min_chi,
                        holds: r.holds(),
                        coefficients: *n,
                        mismatches: &r.mismatches,
                    })
                    .collect();
                print_json(&out)?;
            } else {
                for (r, n) in &lines {
                    if r.holds() {
                        println!("y = {}: ok ({n} coefficients)", r.y);
                    } else {
                        println!(
                            "y = {}: FAILED ({} of {n} coefficients differ)",
                            r.y,
                            r.mismatches.len()
                        );
                        for m in &r.mismatches {
                            println!("  {}: left {} right {}", m.config, m.left, m.right);
                        }
                    }
                }
            }
            if !all_hold {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::OracleKontsevich { max_degree, json } => {
            let values = kontsevich(max_degree as usize);
            if json {
                print_json(&values)?;
            } else {
                for (d, n) in values.iter().enumerate() {
                    println!("{}\t{n}", d + 1);
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Absolute { points, class, .. } = &cli.command {
        if class.points() != *points as usize {
            Cli::command()
                .error(
                    ErrorKind::ValueValidation,
                    format!(
                        "--class has {} exceptional coefficients but --points is {points}",
                        class.points()
                    ),
                )
                .exit();
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
