//! Command-line front end.
//!
//! Subcommands map onto the library modules: `analyze` (profit, variance,
//! regime), `sweep` (CSV tables over one varying parameter), `fair`
//! (fair-parameter solver and fair curve), `simulate` (seeded Monte Carlo)
//! and `collision` (birthday probabilities of final scores).
//!
//! Output is deterministic byte for byte: data files carry no timestamps and
//! floats print in Rust's shortest round-trip form. Exit codes: 0 success,
//! 2 validation error, 3 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{expected_net_profit, expected_net_profit_unbounded, variance_report};
use crate::asymptotics::{classify, Regime, DEFAULT_FAIR_TOL};
use crate::collision::{
    all_distinct_probability, collision_probability, maclaurin_upper_bound, ScoreWeights,
};
use crate::error::{Error, Result};
use crate::fairness::{fair_curve, fair_p, fair_u_for_d, FairSolution, FairStatus};
use crate::game::{threshold_index, GameParams, PayoutVariant};
use crate::simulate::{run_seed, simulate_batch, simulate_trajectory};

#[derive(Parser, Debug)]
#[command(
    name = "gamblekit",
    version,
    about = "Analyze, solve and simulate capped-payout multiplicative coin-toss games"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact profit, probabilities, variance and regime for one game
    Analyze(AnalyzeArgs),
    /// CSV table of analysis outputs over a grid of one parameter
    Sweep(SweepArgs),
    /// Solve for a fair up factor, a fair bias, or a whole fair curve
    Fair(FairArgs),
    /// Seeded Monte Carlo batches and trajectories
    Simulate(SimulateArgs),
    /// Birthday-problem probabilities for final scores
    Collision(CollisionArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct GameArgs {
    /// Number of rounds
    #[arg(long, default_value_t = 100)]
    n: u32,
    /// Up factor applied on heads
    #[arg(long, default_value_t = 1.5)]
    u: f64,
    /// Down factor applied on tails
    #[arg(long, default_value_t = 0.6)]
    d: f64,
    /// Probability of heads
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Stake in euros
    #[arg(long, default_value_t = 100.0)]
    stake: f64,
    /// Payout rule on a loss
    #[arg(long, value_enum, default_value_t = VariantOpt::Proportional)]
    variant: VariantOpt,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum VariantOpt {
    Proportional,
    TotalLoss,
}

impl From<VariantOpt> for PayoutVariant {
    fn from(v: VariantOpt) -> Self {
        match v {
            VariantOpt::Proportional => PayoutVariant::Proportional,
            VariantOpt::TotalLoss => PayoutVariant::TotalLoss,
        }
    }
}

/// Round counts past this exist only as typos; the tables they would need do
/// not fit in memory.
const MAX_CLI_ROUNDS: u32 = 10_000_000;

impl GameArgs {
    fn to_params(self) -> Result<GameParams> {
        if self.n > MAX_CLI_ROUNDS {
            return Err(Error::domain(format!(
                "n = {} exceeds the supported maximum of {MAX_CLI_ROUNDS}",
                self.n
            )));
        }
        Ok(GameParams::new(self.n, self.u, self.d, self.p)?
            .with_stake(self.stake)?
            .with_variant(self.variant.into()))
    }
}

/// Entry point used by the binary and by tests; returns the exit code.
pub fn run<I, A>(args: I) -> u8
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(Error::Io(e)) => {
            eprintln!("gamblekit: i/o error: {e}");
            3
        }
        Err(e) => {
            eprintln!("gamblekit: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Fair(args) => cmd_fair(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Collision(args) => cmd_collision(args),
    }
}

// ---------------------------------------------------------------- analyze

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Print the JSON report instead of the text summary
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct AnalyzeReport {
    pub n: u32,
    pub u: f64,
    pub d: f64,
    pub p: f64,
    pub stake: f64,
    pub variant: PayoutVariant,
    pub k0: u32,
    pub boundary: f64,
    pub exact_boundary: bool,
    pub g: f64,
    pub term_a: f64,
    pub term_b: f64,
    pub win_prob: f64,
    pub loss_prob: f64,
    /// g scaled by the stake.
    pub expected_net_profit: f64,
    /// Expectation under the uncapped pass-through payout.
    pub unbounded_expected_net_profit: f64,
    /// Unit-stake profit variance; absent under the total-loss payout.
    pub variance: Option<f64>,
    pub variance_summands: Option<[f64; 5]>,
    /// Absent for degenerate coins (p = 0 or 1).
    pub regime: Option<Regime>,
    pub criterion: Option<f64>,
}

pub fn analyze_report(params: &GameParams) -> Result<AnalyzeReport> {
    let threshold = threshold_index(params.n, params.u, params.d)?;
    let profile = expected_net_profit(params)?;
    let (variance, variance_summands) = if params.payout_variant == PayoutVariant::Proportional {
        let v = variance_report(params)?;
        (Some(v.variance), Some(v.summands))
    } else {
        (None, None)
    };
    let class = if params.p > 0.0 && params.p < 1.0 {
        Some(classify(params.u, params.d, params.p, DEFAULT_FAIR_TOL)?)
    } else {
        None
    };
    Ok(AnalyzeReport {
        n: params.n,
        u: params.u,
        d: params.d,
        p: params.p,
        stake: params.stake,
        variant: params.payout_variant,
        k0: threshold.k0,
        boundary: threshold.boundary,
        exact_boundary: threshold.exact_boundary,
        g: profile.g,
        term_a: profile.term_a,
        term_b: profile.term_b,
        win_prob: profile.win_prob,
        loss_prob: profile.loss_prob,
        expected_net_profit: profile.g * params.stake,
        unbounded_expected_net_profit: expected_net_profit_unbounded(params),
        variance,
        variance_summands,
        regime: class.map(|c| c.regime),
        criterion: class.map(|c| c.criterion),
    })
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let params = args.game.to_params()?;
    let report = analyze_report(&params)?;
    let json = to_json(&report)?;
    if args.json {
        print!("{json}");
    } else {
        print_analyze_text(&report);
    }
    if let Some(path) = &args.out {
        fs::write(path, json)?;
    }
    Ok(())
}

fn print_analyze_text(r: &AnalyzeReport) {
    let variant = match r.variant {
        PayoutVariant::Proportional => "proportional",
        PayoutVariant::TotalLoss => "total-loss",
    };
    println!(
        "game: n={} u={} d={} p={} stake={} variant={variant}",
        r.n, r.u, r.d, r.p, r.stake
    );
    println!(
        "threshold: k0={} boundary={} exact={}",
        r.k0, r.boundary, r.exact_boundary
    );
    println!("win probability:  {}", r.win_prob);
    println!("loss probability: {}", r.loss_prob);
    println!("A term: {}", r.term_a);
    println!("B term: {}", r.term_b);
    println!("expected net profit per unit stake: {}", r.g);
    println!(
        "expected net profit on this stake:  {}",
        r.expected_net_profit
    );
    if let Some(v) = r.variance {
        println!("unit-stake profit variance: {v}");
    }
    println!(
        "uncapped-payout expectation on this stake: {}",
        r.unbounded_expected_net_profit
    );
    match (r.regime, r.criterion) {
        (Some(regime), Some(criterion)) => {
            println!("regime: {regime:?} (criterion u^p d^q = {criterion})");
        }
        _ => println!("regime: undefined for degenerate coin"),
    }
}

// ------------------------------------------------------------------ sweep

/// Which parameter a sweep varies.
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVar {
    N,
    U,
    D,
    P,
}

impl SweepVar {
    fn label(self) -> &'static str {
        match self {
            SweepVar::N => "n",
            SweepVar::U => "u",
            SweepVar::D => "d",
            SweepVar::P => "p",
        }
    }
}

/// Analysis quantities a sweep can emit, named exactly as the CSV columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOutput {
    G,
    A,
    B,
    Var,
    V1,
    V2,
    V3,
    V4,
    V5,
    WinProb,
}

impl SweepOutput {
    const ALL: [(&'static str, SweepOutput); 10] = [
        ("g", SweepOutput::G),
        ("A", SweepOutput::A),
        ("B", SweepOutput::B),
        ("var", SweepOutput::Var),
        ("v1", SweepOutput::V1),
        ("v2", SweepOutput::V2),
        ("v3", SweepOutput::V3),
        ("v4", SweepOutput::V4),
        ("v5", SweepOutput::V5),
        ("win_prob", SweepOutput::WinProb),
    ];

    fn label(self) -> &'static str {
        Self::ALL.iter().find(|(_, v)| *v == self).unwrap().0
    }

    fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .find(|(label, _)| *label == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| {
                Error::domain(format!(
                    "unknown output column {name:?}; known: g, A, B, var, v1..v5, win_prob"
                ))
            })
    }

    fn needs_variance(self) -> bool {
        !matches!(
            self,
            SweepOutput::G | SweepOutput::A | SweepOutput::B | SweepOutput::WinProb
        )
    }
}

/// A validated sweep request: grid, fixed parameters and output columns.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub grid: Vec<f64>,
    pub fixed: GameParams,
    pub outputs: Vec<SweepOutput>,
}

impl SweepSpec {
    pub fn from_range(
        variable: SweepVar,
        lo: f64,
        hi: f64,
        steps: u64,
        fixed: GameParams,
        outputs: Vec<SweepOutput>,
    ) -> Result<Self> {
        if steps < 1 {
            return Err(Error::domain("steps must be at least 1"));
        }
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::domain(format!("need lo < hi, got {lo} >= {hi}")));
        }
        let grid = (0..steps)
            .map(|i| {
                if steps == 1 {
                    lo
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect();
        SweepSpec::from_values(variable, grid, fixed, outputs)
    }

    pub fn from_values(
        variable: SweepVar,
        grid: Vec<f64>,
        fixed: GameParams,
        outputs: Vec<SweepOutput>,
    ) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::domain("sweep grid must not be empty"));
        }
        let mut spec = SweepSpec {
            variable,
            grid,
            fixed,
            outputs,
        };
        if variable == SweepVar::N {
            // Integer grid: round, keep order, drop duplicates.
            let mut seen = Vec::new();
            for x in &spec.grid {
                let n = x.round();
                if n.is_nan() || n < 1.0 || n > f64::from(MAX_CLI_ROUNDS) {
                    return Err(Error::domain(format!(
                        "n grid values must lie in 1..={MAX_CLI_ROUNDS}, got {x}"
                    )));
                }
                if seen.last() != Some(&n) {
                    seen.push(n);
                }
            }
            spec.grid = seen;
        }
        Ok(spec)
    }

    fn params_at(&self, x: f64) -> Result<GameParams> {
        let mut p = self.fixed;
        match self.variable {
            SweepVar::N => p.n = x as u32,
            SweepVar::U => p.u = x,
            SweepVar::D => p.d = x,
            SweepVar::P => p.p = x,
        }
        // Revalidate what construction would have checked.
        GameParams::new(p.n, p.u, p.d, p.p)?;
        Ok(p)
    }

    /// Writes the CSV: a header naming the variable and the requested
    /// outputs, one row per grid point. An empty output set produces a
    /// header-only file.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut header = vec![self.variable.label().to_string()];
        header.extend(self.outputs.iter().map(|o| o.label().to_string()));
        writeln!(w, "{}", header.join(","))?;
        if self.outputs.is_empty() {
            return Ok(());
        }
        let needs_var = self.outputs.iter().any(|o| o.needs_variance());
        for &x in &self.grid {
            let params = self.params_at(x)?;
            let profile = expected_net_profit(&params)?;
            let var = if needs_var {
                Some(variance_report(&params)?)
            } else {
                None
            };
            let mut fields = Vec::with_capacity(self.outputs.len() + 1);
            if self.variable == SweepVar::N {
                fields.push(format!("{}", x as u32));
            } else {
                fields.push(format!("{x}"));
            }
            for o in &self.outputs {
                let value = match o {
                    SweepOutput::G => profile.g,
                    SweepOutput::A => profile.term_a,
                    SweepOutput::B => profile.term_b,
                    SweepOutput::WinProb => profile.win_prob,
                    SweepOutput::Var => var.as_ref().unwrap().variance,
                    SweepOutput::V1 => var.as_ref().unwrap().summands[0],
                    SweepOutput::V2 => var.as_ref().unwrap().summands[1],
                    SweepOutput::V3 => var.as_ref().unwrap().summands[2],
                    SweepOutput::V4 => var.as_ref().unwrap().summands[3],
                    SweepOutput::V5 => var.as_ref().unwrap().summands[4],
                };
                fields.push(format!("{value}"));
            }
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Parameter to vary
    #[arg(long, value_enum)]
    var: SweepVar,
    #[arg(long, conflicts_with = "values", requires = "hi")]
    lo: Option<f64>,
    #[arg(long, requires = "lo")]
    hi: Option<f64>,
    #[arg(long, requires = "lo")]
    steps: Option<u64>,
    /// Explicit comma-separated grid instead of lo/hi/steps
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// Comma-separated output columns: g,A,B,var,v1..v5,win_prob
    #[arg(long, default_value = "g")]
    outputs: String,
    #[command(flatten)]
    game: GameArgs,
    /// Output CSV path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let fixed = args.game.to_params()?;
    let outputs = if args.outputs.trim().is_empty() {
        Vec::new()
    } else {
        args.outputs
            .split(',')
            .map(|s| SweepOutput::parse(s.trim()))
            .collect::<Result<Vec<_>>>()?
    };
    let spec = match (args.values, args.lo, args.hi) {
        (Some(values), None, _) => SweepSpec::from_values(args.var, values, fixed, outputs)?,
        (None, Some(lo), Some(hi)) => {
            let steps = args.steps.unwrap_or(101);
            SweepSpec::from_range(args.var, lo, hi, steps, fixed, outputs)?
        }
        _ => {
            return Err(Error::domain(
                "specify either --values or --lo/--hi (with optional --steps)",
            ))
        }
    };
    write_to(args.out.as_deref(), |w| spec.write_csv(w))
}

// ------------------------------------------------------------------- fair

#[derive(Args, Debug)]
struct FairArgs {
    #[arg(long, default_value_t = 100)]
    n: u32,
    /// Fix the up factor (solve for p when both u and d are fixed)
    #[arg(long)]
    u: Option<f64>,
    /// Fix the down factor
    #[arg(long)]
    d: Option<f64>,
    /// Fix the heads probability (solve for u when d and p are fixed)
    #[arg(long)]
    p: Option<f64>,
    /// Bracket width the bisection narrows to
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Upper end of the up-factor scan range
    #[arg(long, default_value_t = 4.0)]
    u_max: f64,
    #[arg(long, value_enum, default_value_t = VariantOpt::Proportional)]
    variant: VariantOpt,
    /// Sweep d over a grid and solve the fair u for each point (CSV)
    #[arg(long, num_args = 3, value_names = ["LO", "HI", "STEPS"])]
    d_grid: Option<Vec<f64>>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct FairReport {
    pub n: u32,
    /// Parameter solved for: "u" or "p".
    pub solved: String,
    pub fixed_u: Option<f64>,
    pub fixed_d: Option<f64>,
    pub fixed_p: Option<f64>,
    pub tol: f64,
    pub status: FairStatus,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub g_lo: f64,
    pub g_hi: f64,
    pub midpoint: f64,
}

fn status_label(status: FairStatus) -> &'static str {
    match status {
        FairStatus::Crossing => "crossing",
        FairStatus::JumpAcrossZero => "jump-across-zero",
        FairStatus::NoSignChange => "no-sign-change",
    }
}

fn cmd_fair(args: FairArgs) -> Result<()> {
    let variant: PayoutVariant = args.variant.into();
    if let Some(grid_spec) = &args.d_grid {
        let (lo, hi, steps) = (grid_spec[0], grid_spec[1], grid_spec[2] as u64);
        if steps < 1 || lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::domain("d grid needs lo < hi and steps >= 1"));
        }
        let p = args.p.unwrap_or(0.5);
        let d_grid: Vec<f64> = (0..steps)
            .map(|i| {
                if steps == 1 {
                    lo
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect();
        let base = GameParams::new(args.n, 1.5, d_grid[0], p)?.with_variant(variant);
        let rows = fair_curve(&base, &d_grid, args.tol, args.u_max)?;
        return write_to(args.out.as_deref(), |w| {
            writeln!(w, "d,u_lo,u_hi,g_lo,g_hi,status")?;
            for (d, sol) in &rows {
                writeln!(
                    w,
                    "{d},{},{},{},{},{}",
                    sol.bracket_lo,
                    sol.bracket_hi,
                    sol.g_lo,
                    sol.g_hi,
                    status_label(sol.status)
                )?;
            }
            Ok(())
        });
    }

    let (solved, solution): (&str, FairSolution) = match (args.u, args.d, args.p) {
        (None, Some(d), Some(p)) => {
            let base = GameParams::new(args.n, 1.5, d, p)?.with_variant(variant);
            ("u", fair_u_for_d(&base, args.tol, args.u_max)?)
        }
        (Some(u), Some(d), None) => {
            let base = GameParams::new(args.n, u, d, 0.5)?.with_variant(variant);
            ("p", fair_p(&base, args.tol)?)
        }
        _ => {
            return Err(Error::domain(
                "specify --d and --p to solve for u, or --u and --d to solve for p",
            ))
        }
    };
    let report = FairReport {
        n: args.n,
        solved: solved.to_string(),
        fixed_u: args.u,
        fixed_d: args.d,
        fixed_p: args.p,
        tol: args.tol,
        status: solution.status,
        bracket_lo: solution.bracket_lo,
        bracket_hi: solution.bracket_hi,
        g_lo: solution.g_lo,
        g_hi: solution.g_hi,
        midpoint: solution.midpoint(),
    };
    let json = to_json(&report)?;
    print!("{json}");
    if let Some(path) = &args.out {
        fs::write(path, json)?;
    }
    Ok(())
}

// --------------------------------------------------------------- simulate

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Master seed; batches sub-seed each run deterministically
    #[arg(long)]
    seed: u64,
    /// Number of independent runs in the batch
    #[arg(long, default_value_t = 100)]
    runs: u64,
    /// Emit this many full score trajectories as CSV instead of batch stats
    #[arg(long)]
    trajectories: Option<u64>,
    /// Keep per-run profits in the JSON report
    #[arg(long)]
    retain_samples: bool,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct SimulateReport {
    pub n: u32,
    pub u: f64,
    pub d: f64,
    pub p: f64,
    pub stake: f64,
    pub variant: PayoutVariant,
    pub seed: u64,
    pub num_runs: u64,
    pub mean_profit: f64,
    pub sample_variance: f64,
    pub win_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profit_samples: Option<Vec<f64>>,
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let params = args.game.to_params()?;
    if let Some(k) = args.trajectories {
        if k < 1 {
            return Err(Error::domain("need at least one trajectory"));
        }
        return write_to(args.out.as_deref(), |w| {
            writeln!(w, "run,round,score")?;
            for run in 0..k {
                let t = simulate_trajectory(&params, run_seed(args.seed, run))?;
                for (round, score) in t.scores.iter().enumerate() {
                    writeln!(w, "{run},{round},{score}")?;
                }
            }
            Ok(())
        });
    }

    if args.runs < 1 {
        return Err(Error::domain("a batch needs at least one run"));
    }
    let stats = simulate_batch(&params, args.runs, args.seed, args.retain_samples)?;
    let report = SimulateReport {
        n: params.n,
        u: params.u,
        d: params.d,
        p: params.p,
        stake: params.stake,
        variant: params.payout_variant,
        seed: args.seed,
        num_runs: stats.num_runs,
        mean_profit: stats.mean_profit,
        sample_variance: stats.sample_variance,
        win_count: stats.win_count,
        profit_samples: stats.profit_samples,
    };
    let json = to_json(&report)?;
    print!("{json}");
    if let Some(path) = &args.out {
        fs::write(path, json)?;
    }
    Ok(())
}

// --------------------------------------------------------------- collision

#[derive(Args, Debug)]
struct CollisionArgs {
    /// Rounds per game when weights are built from the binomial pmf
    #[arg(long, default_value_t = 100)]
    n: u32,
    /// Heads probability for the binomial pmf
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Number of independent games
    #[arg(long, default_value_t = 8)]
    m: u32,
    /// Read the pmf from a file (one weight per line) instead of (n, p)
    #[arg(long, conflicts_with_all = ["n", "p"])]
    weights: Option<PathBuf>,
    /// Also write the JSON report to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct CollisionReport {
    pub outcomes: usize,
    pub m: u32,
    pub all_distinct_probability: f64,
    pub collision_probability: f64,
    /// Uniform-weights bound on the all-distinct probability.
    pub maclaurin_upper_bound: f64,
    /// Complement of the bound: a lower bound on the collision probability.
    pub collision_lower_bound: f64,
}

fn cmd_collision(args: CollisionArgs) -> Result<()> {
    let weights = match &args.weights {
        Some(path) => ScoreWeights::new(read_weights_file(path)?)?,
        None => ScoreWeights::binomial(args.n, args.p)?,
    };
    let distinct = all_distinct_probability(&weights, args.m)?;
    let bound = maclaurin_upper_bound::<f64>(weights.outcome_count() as u32 - 1, args.m);
    let report = CollisionReport {
        outcomes: weights.outcome_count(),
        m: args.m,
        all_distinct_probability: distinct,
        collision_probability: collision_probability(&weights, args.m)?,
        maclaurin_upper_bound: bound,
        collision_lower_bound: 1.0 - bound,
    };
    let json = to_json(&report)?;
    print!("{json}");
    if let Some(path) = &args.out {
        fs::write(path, json)?;
    }
    Ok(())
}

fn read_weights_file(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| {
            Error::domain(format!(
                "weights file line {}: not a number: {line:?}",
                lineno + 1
            ))
        })?;
        out.push(value);
    }
    Ok(out)
}

// ---------------------------------------------------------------- helpers

fn to_json<S: Serialize>(value: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::domain(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Runs `emit` against the file at `path`, or stdout when no path is given.
fn write_to<F>(path: Option<&Path>, emit: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => {
            let file = fs::File::create(p)?;
            let mut w = io::BufWriter::new(file);
            emit(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock)
        }
    }
}
