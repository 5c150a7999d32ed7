//! Command-line front end. Exit codes: 0 success or verified equilibrium,
//! 1 invalid input or internal failure, 2 a profitable deviation was found.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::equilibrium::{check_corollary, solve};
use crate::error::{Error, Result};
use crate::format::{stopping_time_from_map, GameFile, ReportFile, ResultFile};
use crate::game::GameSpec;
use crate::gen::{generate, GenOptions};
use crate::verify::{verify_nash, Method};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_DEVIATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "asymstop")]
#[command(about = "Solve and verify stopping games with asymmetric information")]
#[command(version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a game file against the model assumptions
    Validate { file: PathBuf },

    /// Run the recursive construction and report (tau*, nu*, theta*)
    Solve {
        file: PathBuf,
        /// Include every iterate in the result
        #[arg(long)]
        trace: bool,
        /// Certify (tau*, theta*) against best responses
        #[arg(long)]
        verify: bool,
        /// Also certify by exhaustive enumeration of both strategy spaces
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Write a seeded random game
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        outcomes: usize,
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        ensure_condition9: bool,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        out: PathBuf,
    },

    /// Exhaustively check the (tau*, theta*) pair stored in a result file
    Oracle {
        file: PathBuf,
        #[arg(long)]
        equilibrium: PathBuf,
    },
}

pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Solve {
            file,
            trace,
            verify,
            oracle,
            out,
        } => solve_cmd(&file, trace, verify, oracle, out.as_deref()),
        Command::Gen {
            seed,
            outcomes,
            horizon,
            ensure_condition9,
            symmetric,
            out,
        } => gen_cmd(seed, outcomes, horizon, ensure_condition9, symmetric, &out),
        Command::Oracle { file, equilibrium } => oracle_cmd(&file, &equilibrium),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn load_game(path: &Path) -> Result<GameSpec> {
    let file = GameFile::read(path)?;
    let diag = file.diagnose();
    for w in &diag.warnings {
        eprintln!("warning: {w}");
    }
    diag.game.ok_or_else(|| Error::Format(diag.errors.join("; ")))
}

pub fn validate(path: &Path) -> Result<i32> {
    let diag = GameFile::read(path)?.diagnose();
    for e in &diag.errors {
        println!("error: {e}");
    }
    for w in &diag.warnings {
        println!("warning: {w}");
    }
    if diag.is_valid() {
        let c9 = if diag.warnings.is_empty() {
            "satisfied"
        } else {
            "violated"
        };
        println!("valid; condition X1 >= Y1 {c9}");
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_INVALID)
    }
}

pub fn solve_cmd(
    path: &Path,
    trace: bool,
    verify: bool,
    oracle: bool,
    out: Option<&Path>,
) -> Result<i32> {
    let game = load_game(path)?;
    if !game.satisfies_condition9() {
        eprintln!("warning: X1 >= Y1 fails; the pair is not guaranteed to be an equilibrium");
    }
    let res = solve(&game)?;
    if !check_corollary(&game, &res) {
        return Err(Error::ConstructionInvariant(
            "{nu* < tau*} and {theta* < tau*} differ".into(),
        ));
    }
    let mut file = ResultFile::new(&game, &res, trace);
    let mut code = EXIT_OK;
    if verify {
        let rep = verify_nash(&game, &res.tau_star, &res.theta_star, Method::FastPath)?;
        if !rep.is_nash {
            code = EXIT_DEVIATION;
        }
        file.report = Some(ReportFile::from_report(game.space(), &rep));
    }
    if oracle {
        let rep = verify_nash(&game, &res.tau_star, &res.theta_star, Method::Exhaustive)?;
        if !rep.is_nash {
            code = EXIT_DEVIATION;
        }
        file.oracle_report = Some(ReportFile::from_report(game.space(), &rep));
    }
    let text = file.to_json();
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(code)
}

pub fn gen_cmd(
    seed: u64,
    outcomes: usize,
    horizon: usize,
    ensure_condition9: bool,
    symmetric: bool,
    out: &Path,
) -> Result<i32> {
    if outcomes == 0 {
        return Err(Error::EmptySampleSpace);
    }
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    let opts = GenOptions {
        outcomes,
        horizon,
        ensure_condition9,
        symmetric,
    };
    std::fs::write(out, GameFile::from_game(&generate(seed, &opts)).to_json())?;
    Ok(EXIT_OK)
}

pub fn oracle_cmd(path: &Path, equilibrium: &Path) -> Result<i32> {
    let game = load_game(path)?;
    let result = ResultFile::read(equilibrium)?;
    let tau = stopping_time_from_map(game.space(), &result.tau_star)?;
    let theta = stopping_time_from_map(game.space(), &result.theta_star)?;
    let rep = verify_nash(&game, &tau, &theta, Method::Exhaustive)?;
    let file = ReportFile::from_report(game.space(), &rep);
    println!("{}", serde_json::to_string_pretty(&file)?);
    Ok(if rep.is_nash { EXIT_OK } else { EXIT_DEVIATION })
}
