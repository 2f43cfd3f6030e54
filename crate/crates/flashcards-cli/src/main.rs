//! Command-line interface for the flashcard-game toolkit.
//!
//! Subcommands cover simulation (event-log CSV), sequence codecs, the
//! deck-of-times decoder, staircase/RSK tableaux, the theorem check
//! suites, the rescaled point cloud, sigma-game variants, permutation
//! statistics, and conjecture probes. All output is plain text; every
//! subcommand is deterministic given its flags.
//!
//! Exit codes: 0 = success and all hard checks pass, 1 = a hard check
//! found violations, 2 = usage/config/io error, 3 = resource cap or step
//! budget reached before any result was available.

use clap::{Args, Parser, Subcommand, ValueEnum};
use flashcards::analysis::{self, CheckReport};
use flashcards::codec;
use flashcards::engine::{self, GameState};
use flashcards::tableau;
use flashcards::variants::{self, SigmaFamily};
use flashcards::{Error, GameOptions, Schedule, TimeTable};
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "flashcards",
    version,
    about = "Flashcard game simulation and analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a game and write the event log as CSV (t,card,k).
    Simulate(SimulateArgs),
    /// Write a viewing or counting sequence, one integer per line.
    Sequences(SequencesArgs),
    /// Convert between viewing and counting sequences.
    Convert(ConvertArgs),
    /// Recover time and deck of cards from a deck of times.
    DecodeTimes(DecodeTimesArgs),
    /// Staircase tableau of viewing times, or RSK verification tableaux.
    Tableau(TableauArgs),
    /// Run a hard check suite; exit 1 if any violation is found.
    Check(CheckArgs),
    /// Rescaled point cloud: CSV and SVG with the reference bounds.
    Curve(CurveArgs),
    /// Run a sigma-game variant and write its event log.
    Variants(VariantsArgs),
    /// Inversion/descent timeseries of the deck (t,inv,des).
    Stats(StatsArgs),
    /// Conjecture probes; reported, never fail the exit code.
    Probe(ProbeArgs),
}

#[derive(Args)]
struct ScheduleArg {
    /// Schedule: shorthand (slow, recap, constant:5, affine:3,1, power:2,
    /// table:2,4,8;repeat-last, uniform[:seed], poisson[:seed]) or JSON
    /// ({"kind":"slow"}, {"kind":"constant","c":5}, ...).
    #[arg(long, default_value = "slow")]
    schedule: String,
    /// Seed override for stochastic schedules.
    #[arg(long)]
    seed: Option<u64>,
}

impl ScheduleArg {
    fn parse(&self) -> Result<Schedule, Failure> {
        let mut schedule = if self.schedule.trim_start().starts_with('{') {
            let s: Schedule = serde_json::from_str(&self.schedule)
                .map_err(|e| Failure::usage(format!("bad schedule JSON: {e}")))?;
            s.validate().map_err(Failure::from)?;
            s
        } else {
            Schedule::parse(&self.schedule)?
        };
        if let Some(seed) = self.seed {
            schedule = match schedule {
                Schedule::Uniform { .. } => Schedule::uniform(seed),
                Schedule::Poisson { .. } => Schedule::poisson(seed),
                other => other,
            };
        }
        Ok(schedule)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    schedule: ScheduleArg,
    /// Number of clock ticks to simulate.
    #[arg(long)]
    steps: u64,
    /// Materialization cap for the deck.
    #[arg(long, default_value_t = flashcards::DEFAULT_MAX_POSITION)]
    cap: u64,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SeqKind {
    Viewing,
    Counting,
}

#[derive(Args)]
struct SequencesArgs {
    #[command(flatten)]
    schedule: ScheduleArg,
    #[arg(long)]
    len: u64,
    #[arg(long, value_enum, default_value = "viewing")]
    kind: SeqKind,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    /// Input file, one integer per line (stdin if omitted).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Direction: the kind of the *input* sequence.
    #[arg(long, value_enum)]
    from: SeqKind,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeTimesArgs {
    /// Deck of times as comma-separated counts, e.g. "11,6,9,4".
    #[arg(long)]
    input: String,
}

#[derive(Args)]
struct TableauArgs {
    #[command(flatten)]
    schedule: ScheduleArg,
    /// Build the staircase tableau with entries <= tmax.
    #[arg(long, conflicts_with = "rsk")]
    tmax: Option<u64>,
    /// Transpose before printing.
    #[arg(long)]
    transpose: bool,
    /// Run RSK on a sequence prefix and print the recording tableau.
    #[arg(long, value_enum)]
    rsk: Option<SeqKind>,
    /// Prefix length for --rsk.
    #[arg(long, default_value_t = 100)]
    len: u64,
    /// With --rsk, print the insertion tableau instead of the recording one.
    #[arg(long, requires = "rsk")]
    insertion: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// Slow-game theorem suite plus catch-up and minimal-gap checks.
    Slow,
    /// General-schedule bounds for the configured schedule.
    General,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[command(flatten)]
    schedule: ScheduleArg,
    /// Largest return-count / card index to check.
    #[arg(long, default_value_t = 500)]
    n_max: u64,
    /// Step budget for the underlying simulation.
    #[arg(long, default_value_t = 50_000_000)]
    steps: u64,
    /// Materialization cap for the deck.
    #[arg(long, default_value_t = flashcards::DEFAULT_MAX_POSITION)]
    cap: u64,
    /// Safety constant for the catch-up check (slow suite).
    #[arg(long, default_value_t = 2)]
    c0: u64,
    /// Write the report as CSV here as well.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    schedule: ScheduleArg,
    /// Time interval LO:HI for T_n(k).
    #[arg(long)]
    interval: String,
    /// Circle-bound epsilon used in the bound report.
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    Transposition,
    Reversal,
    Cut,
    Shuffle,
    Cycle,
}

#[derive(Args)]
struct VariantsArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Schedule for the cycle family.
    #[command(flatten)]
    schedule: ScheduleArg,
    #[arg(long)]
    steps: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    schedule: ScheduleArg,
    #[arg(long)]
    t_max: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ProbeKind {
    /// Ratios T_1(n)/n^2 over an n range.
    CEstimate,
    /// Extremal (T_i(n+1) - T_i(n)) - 2n margin.
    Gap,
    /// First time c_i(t) = c_1(t).
    Stabilization,
    /// Intercept ratios n/sqrt(T_n(1)).
    Intercept,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long, value_enum)]
    kind: ProbeKind,
    #[command(flatten)]
    schedule: ScheduleArg,
    #[arg(long, default_value_t = 1000)]
    n_lo: u64,
    #[arg(long, default_value_t = 2000)]
    n_hi: u64,
    /// Card index for gap/stabilization probes.
    #[arg(long, default_value_t = 1)]
    card: u64,
    #[arg(long, default_value_t = 500)]
    n_max: u64,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

/// A failed command: message plus process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MaterializationCap { .. } | Error::StepBudget { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sequences(a) => cmd_sequences(a),
        Command::Convert(a) => cmd_convert(a),
        Command::DecodeTimes(a) => cmd_decode_times(a),
        Command::Tableau(a) => cmd_tableau(a),
        Command::Check(a) => cmd_check(a),
        Command::Curve(a) => cmd_curve(a),
        Command::Variants(a) => cmd_variants(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Probe(a) => cmd_probe(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn cmd_simulate(a: SimulateArgs) -> Result<ExitCode, Failure> {
    let schedule = a.schedule.parse()?;
    let opts = GameOptions {
        cap: a.cap,
        ..GameOptions::default()
    };
    let mut game = GameState::with_options(schedule, opts);
    game.run_until_time(a.steps)?;
    let events = game.timetable().events().expect("event log enabled");
    engine::write_event_log_csv(events, out_writer(&a.out)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sequences(a: SequencesArgs) -> Result<ExitCode, Failure> {
    let schedule = a.schedule.parse()?;
    let seq = match a.kind {
        SeqKind::Viewing => engine::viewing_prefix(&schedule, a.len)?,
        SeqKind::Counting => engine::counting_prefix(&schedule, a.len)?,
    };
    codec::write_sequence(&seq, out_writer(&a.out)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_convert(a: ConvertArgs) -> Result<ExitCode, Failure> {
    let seq = match &a.input {
        Some(p) => codec::read_sequence(io::BufReader::new(File::open(p)?))?,
        None => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf)?;
            codec::read_sequence(io::Cursor::new(buf))?
        }
    };
    let converted = match a.from {
        SeqKind::Viewing => codec::viewing_to_counting(&seq),
        SeqKind::Counting => codec::counting_to_viewing(&seq)?,
    };
    codec::write_sequence(&converted, out_writer(&a.out)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_decode_times(a: DecodeTimesArgs) -> Result<ExitCode, Failure> {
    let td: codec::TimesDeck = a.input.parse()?;
    let (t, cards) = codec::times_to_deck(&td)?;
    let cards: Vec<String> = cards.iter().map(|c| c.to_string()).collect();
    println!("t={t}; deck={}", cards.join(","));
    Ok(ExitCode::SUCCESS)
}

fn cmd_tableau(a: TableauArgs) -> Result<ExitCode, Failure> {
    let schedule = a.schedule.parse()?;
    let mut w = out_writer(&a.out)?;
    if let Some(kind) = a.rsk {
        // row insertion is the superlinear verification path; the staircase
        // construction is the way to build large tableaux
        if a.len > 10_000 {
            return Err(Failure::usage(
                "--rsk is capped at --len 10000; use --tmax for larger tableaux",
            ));
        }
        let seq = match kind {
            SeqKind::Viewing => engine::viewing_prefix(&schedule, a.len)?,
            SeqKind::Counting => engine::counting_prefix(&schedule, a.len)?,
        };
        let pair = tableau::rsk_reversed(&seq);
        let rows = if a.insertion {
            &pair.insertion
        } else {
            &pair.recording
        };
        tableau::write_rows_csv(rows, &mut w)?;
        return Ok(ExitCode::SUCCESS);
    }
    let tmax = a
        .tmax
        .ok_or_else(|| Failure::usage("one of --tmax or --rsk is required"))?;
    let mut game = GameState::new(schedule);
    game.run_until_time(tmax)?;
    let st = tableau::build_staircase(game.timetable(), tmax)?;
    let st = if a.transpose { st.transpose() } else { st };
    tableau::write_rows_csv(st.rows(), &mut w)?;
    Ok(ExitCode::SUCCESS)
}

/// Runs `schedule` until `T_1(target)` is recorded, stopping early (with
/// data intact) on the position cap or the step budget.
fn run_for_checks(
    schedule: &Schedule,
    target: u64,
    steps: u64,
    cap: u64,
) -> Result<TimeTable, Failure> {
    let opts = GameOptions {
        cap,
        step_budget: steps,
        record_events: false,
        track_limit: 1 << 16,
    };
    let mut game = GameState::with_options(schedule.clone(), opts);
    match game.run_until_seen(1, target) {
        Ok(_) => {}
        Err(Error::MaterializationCap { requested, cap }) => {
            eprintln!(
                "note: position cap reached (wanted {requested}, cap {cap}); \
                 checking the range the data covers"
            );
        }
        Err(Error::StepBudget { budget }) => {
            eprintln!("note: step budget {budget} reached; checking the range the data covers");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(game.into_timetable())
}

fn finish_report(report: CheckReport, csv: &Option<PathBuf>) -> Result<ExitCode, Failure> {
    print!("{report}");
    if let Some(path) = csv {
        report.write_csv(BufWriter::new(File::create(path)?))?;
    }
    Ok(if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_check(a: CheckArgs) -> Result<ExitCode, Failure> {
    let schedule = a.schedule.parse()?;
    match a.suite {
        Suite::Slow => {
            if schedule != Schedule::Slow {
                return Err(Failure::usage("--suite slow requires --schedule slow"));
            }
            let tt = run_for_checks(&schedule, a.n_max + 1, a.steps, a.cap)?;
            let report = analysis::check_slow_theorems(&tt, a.n_max, 10_000)?
                .merge(analysis::check_root2k(&tt, a.n_max, a.c0)?)
                .merge(analysis::check_min_gap(&tt, a.n_max)?);
            finish_report(report, &a.csv)
        }
        Suite::General => {
            let tt = run_for_checks(&schedule, a.n_max + 1, a.steps, a.cap)?;
            let report = analysis::check_general(&schedule, &tt, a.n_max)?;
            finish_report(report, &a.csv)
        }
    }
}

fn cmd_curve(a: CurveArgs) -> Result<ExitCode, Failure> {
    let schedule = a.schedule.parse()?;
    let (lo, hi) = a
        .interval
        .split_once(':')
        .and_then(|(l, h)| Some((l.parse::<u64>().ok()?, h.parse::<u64>().ok()?)))
        .ok_or_else(|| Failure::usage("--interval must be LO:HI"))?;
    if lo < 1 || hi < lo {
        return Err(Failure::usage("--interval must satisfy 1 <= LO <= HI"));
    }
    let mut game = GameState::with_options(
        schedule,
        GameOptions {
            record_events: false,
            ..GameOptions::default()
        },
    );
    game.run_until_time(hi)?;
    let pc = analysis::point_cloud(game.timetable(), lo, hi)?;
    if let Some(path) = &a.csv {
        analysis::write_cloud_csv(&pc, BufWriter::new(File::create(path)?))?;
    }
    if let Some(path) = &a.svg {
        analysis::write_cloud_svg(&pc, BufWriter::new(File::create(path)?))?;
    }
    let report = analysis::check_cloud_bounds(&pc, a.epsilon);
    print!("{report}");
    Ok(if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_variants(a: VariantsArgs) -> Result<ExitCode, Failure> {
    let family = match a.family {
        Family::Transposition => SigmaFamily::Transposition,
        Family::Reversal => SigmaFamily::Reversal,
        Family::Cut => SigmaFamily::Cut,
        Family::Shuffle => SigmaFamily::Shuffle,
        Family::Cycle => SigmaFamily::Cycle(a.schedule.parse()?),
    };
    let mut game = variants::SigmaGame::new(family);
    game.run_until_time(a.steps)?;
    let events = game.timetable().events().expect("event log enabled");
    engine::write_event_log_csv(events, out_writer(&a.out)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(a: StatsArgs) -> Result<ExitCode, Failure> {
    let schedule = a.schedule.parse()?;
    let series = variants::stats_timeseries(&schedule, a.t_max)?;
    variants::write_stats_csv(&series, out_writer(&a.out)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_probe(a: ProbeArgs) -> Result<ExitCode, Failure> {
    let schedule = a.schedule.parse()?;
    match a.kind {
        ProbeKind::CEstimate => {
            let tt = run_for_checks(
                &schedule,
                a.n_hi,
                a.budget,
                flashcards::DEFAULT_MAX_POSITION,
            )?;
            let stats = analysis::estimate_c(&tt, a.n_lo, a.n_hi)?;
            println!("return-time ratio T_1(n)/n^2, {stats}");
        }
        ProbeKind::Gap => {
            let tt = run_for_checks(
                &schedule,
                a.n_max + 2,
                a.budget,
                flashcards::DEFAULT_MAX_POSITION,
            )?;
            let probe = analysis::gap_probe(&tt, a.card, a.n_max)?;
            println!(
                "gap margin for card {}: max (T_i(n+1)-T_i(n)) - 2n = {} at n={} (gap {})",
                probe.card, probe.max_margin, probe.witness_n, probe.witness_gap
            );
        }
        ProbeKind::Stabilization => {
            match analysis::stabilization_probe(&schedule, a.card, a.budget)? {
                Some(t) => println!("card {} first matches card 1's count at t={t}", a.card),
                None => println!(
                    "card {} did not match card 1's count within {} steps",
                    a.card, a.budget
                ),
            }
        }
        ProbeKind::Intercept => {
            let tt = run_for_checks(
                &schedule,
                a.n_hi + 1,
                a.budget,
                flashcards::DEFAULT_MAX_POSITION,
            )?;
            let ratios = analysis::curve_intercept_probe(&tt, a.n_lo, a.n_hi)?;
            let (mut mn, mut mx, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
            for &(_, r) in &ratios {
                mn = mn.min(r);
                mx = mx.max(r);
                sum += r;
            }
            println!(
                "intercept ratio n/sqrt(T_n(1)), n in [{}, {}]: min {:.6}, max {:.6}, mean {:.6}",
                a.n_lo,
                a.n_hi,
                mn,
                mx,
                sum / ratios.len() as f64
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
