use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oasm_core::baselines::{fully_naive, less_naive, offline_oasm_oracle};
use oasm_core::bench::{run_bench, write_bench_tsv, BenchConfig};
use oasm_core::fasta::{read_events, Event};
use oasm_core::output::{Format, Record, RecordWriter};
use oasm_core::search::{run_msearch, run_search, MultiInput, PatternSet};
use oasm_core::systolic::{exec_time_model, simulate_core, CoreConfig};
use oasm_core::{Alphabet, Error, Pattern, Result, Symbol};

#[derive(Parser)]
#[command(name = "oasm", version, about = "Approximate pattern search without shadow hits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream one pattern over the input and print occurrences as they are found.
    Search(SearchArgs),
    /// Search several patterns over the same input.
    Msearch(MsearchArgs),
    /// Run a reference search that keeps every hit.
    Baseline(BaselineArgs),
    /// Run the cycle-level model of the hardware core.
    Simulate(SimulateArgs),
    /// Time the engine on random data.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Alphabet file, one token per line. Defaults to ACGTN (case-insensitive, U read as T).
    #[arg(long)]
    alphabet: Option<PathBuf>,
    /// Input file, plain symbols or FASTA; `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
}

impl InputArgs {
    fn alphabet(&self) -> Result<Alphabet> {
        match &self.alphabet {
            None => Ok(Alphabet::nucleotide()),
            Some(path) => Alphabet::from_reader(BufReader::new(open(path)?)),
        }
    }

    fn is_stdin(&self) -> bool {
        self.input == "-"
    }

    fn reader(&self) -> Result<Box<dyn Read + Send>> {
        if self.is_stdin() {
            Ok(Box::new(io::stdin()))
        } else {
            Ok(Box::new(open(Path::new(&self.input))?))
        }
    }
}

#[derive(Args)]
struct PatternArgs {
    #[arg(long)]
    pattern: String,
    /// Maximum edit distance.
    #[arg(long)]
    k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Tsv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Tsv => Format::Tsv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "tsv")]
    format: FormatArg,
    /// Do not print the run summary on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct MsearchArgs {
    /// Pattern file: `id<TAB>pattern<TAB>K` per line.
    #[arg(long)]
    patterns: PathBuf,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "tsv")]
    format: FormatArg,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    FullyNaive,
    LessNaive,
    Oracle,
}

#[derive(Args)]
struct BaselineArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[command(flatten)]
    pattern: PatternArgs,
    #[command(flatten)]
    input: InputArgs,
    /// Only enumerate lengths l_p-K ..= l_p+K (same hits, less work).
    #[arg(long)]
    prune: bool,
    /// Print only the number of hits per record.
    #[arg(long)]
    count: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[command(flatten)]
    input: InputArgs,
    /// Write a per-cycle register trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Number of windows to trace.
    #[arg(long, default_value_t = 1)]
    trace_windows: usize,
    /// Processing elements in the core; defaults to the pattern length.
    #[arg(long)]
    l_p_max: Option<usize>,
    /// Largest threshold supported by the core; defaults to K.
    #[arg(long)]
    k_max: Option<usize>,
    /// Bits per symbol; defaults to the alphabet's code width.
    #[arg(long)]
    l_symb: Option<u32>,
    /// Clock period in nanoseconds.
    #[arg(long, default_value_t = 10)]
    t_clk_ns: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Pattern lengths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "5,7,10,15")]
    lp: Vec<usize>,
    /// Thresholds, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    k: Vec<usize>,
    /// Text length.
    #[arg(long, default_value_t = 3104)]
    lt: usize,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    t_clk_ns: u64,
    /// Skip the simulator run per cell.
    #[arg(long)]
    no_sim: bool,
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io {
        context: format!("opening {}", path.display()),
        source: e,
    })
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::Io {
        context: format!("creating {}", path.display()),
        source: e,
    })
}

fn out_err(e: io::Error) -> Error {
    Error::Io {
        context: "writing output".into(),
        source: e,
    }
}

fn search(args: &SearchArgs) -> Result<()> {
    let alphabet = args.input.alphabet()?;
    let pattern = Pattern::parse(&args.pattern.pattern, args.pattern.k, &alphabet)?;
    let mut writer = RecordWriter::new(io::stdout().lock(), args.format.into());
    let report = run_search(&pattern, &args.pattern.pattern, &alphabet, args.input.reader()?, &mut writer)?;
    drop(writer.finish()?);
    if !args.quiet {
        eprint!("{report}");
    }
    Ok(())
}

fn msearch(args: &MsearchArgs) -> Result<()> {
    let alphabet = args.input.alphabet()?;
    let set = PatternSet::parse(BufReader::new(open(&args.patterns)?), alphabet)?;
    let reader = args.input.reader()?;
    let input = if args.input.is_stdin() {
        MultiInput::Stream(reader)
    } else {
        MultiInput::Buffered(reader)
    };
    let mut writer = RecordWriter::new(io::stdout().lock(), args.format.into());
    let report = run_msearch(&set, input, args.workers, &mut writer)?;
    drop(writer.finish()?);
    if !args.quiet {
        eprint!("{report}");
    }
    Ok(())
}

/// Splits input events into `(header, sequence)` records.
fn records(events: Vec<Event>) -> Vec<(Option<String>, Vec<Symbol>)> {
    let mut out: Vec<(Option<String>, Vec<Symbol>)> = Vec::new();
    for e in events {
        match e {
            Event::Record(h) => out.push((Some(h.to_string()), Vec::new())),
            Event::Symbols(s) => match out.last_mut() {
                Some(last) => last.1.extend(s),
                None => out.push((None, s)),
            },
        }
    }
    out
}

fn baseline(args: &BaselineArgs) -> Result<()> {
    let alphabet = args.input.alphabet()?;
    let pattern = Pattern::parse(&args.pattern.pattern, args.pattern.k, &alphabet)?;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let header = match (args.count, args.algo) {
        (true, _) => "record\thits",
        (false, Algo::LessNaive) => "end\tdistance",
        (false, _) => "start\tlength\tdistance\tmatched_substring",
    };
    writeln!(out, "{header}").map_err(out_err)?;
    for (name, text) in records(read_events(args.input.reader()?, &alphabet)?) {
        let decode = |from: usize, len: usize| alphabet.decode_all(&text[from..from + len]);
        let mut lines = Vec::new();
        match args.algo {
            Algo::FullyNaive => {
                for h in fully_naive(&pattern, &text, args.prune) {
                    lines.push(format!("{}\t{}\t{}\t{}", h.start, h.length, h.distance, decode(h.start, h.length)?));
                }
            }
            Algo::LessNaive => {
                for h in less_naive(&pattern, &text) {
                    lines.push(format!("{}\t{}", h.end, h.distance));
                }
            }
            Algo::Oracle => {
                for o in offline_oasm_oracle(&pattern, &text) {
                    lines.push(format!("{}\t{}\t{}\t{}", o.start, o.length, o.distance, decode(o.start, o.length)?));
                }
            }
        }
        if args.count {
            writeln!(out, "{}\t{}", name.as_deref().unwrap_or("-"), lines.len()).map_err(out_err)?;
            continue;
        }
        if let Some(name) = &name {
            writeln!(out, "#record\t{name}").map_err(out_err)?;
        }
        for l in lines {
            writeln!(out, "{l}").map_err(out_err)?;
        }
    }
    out.flush().map_err(out_err)
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let alphabet = args.input.alphabet()?;
    let pattern = Pattern::parse(&args.pattern.pattern, args.pattern.k, &alphabet)?;
    let t_clk = Duration::from_nanos(args.t_clk_ns);
    let cfg = CoreConfig {
        l_p_max: args.l_p_max.unwrap_or(pattern.len()),
        l_symb: args.l_symb.unwrap_or(alphabet.code_width_bits()),
        k_max: args.k_max.unwrap_or(pattern.threshold()),
        t_clk,
    };
    let trace_windows = if args.trace.is_some() { args.trace_windows } else { 0 };
    let mut writer = RecordWriter::new(io::stdout().lock(), Format::Tsv);
    for (name, text) in records(read_events(args.input.reader()?, &alphabet)?) {
        let report = simulate_core(&pattern, &text, &cfg, trace_windows)?;
        for o in &report.occurrences {
            let matched = alphabet.decode_all(&text[o.start..o.start + o.length])?;
            writer.write(&Record {
                pattern_id: 0,
                start: o.start,
                length: o.length,
                distance: o.distance,
                matched_substring: &matched,
                record: name.as_deref(),
            })?;
        }
        let model = exec_time_model(pattern.len(), pattern.threshold(), text.len(), t_clk)
            .map(|d| format!("{:.6e}s", d.as_secs_f64()))
            .unwrap_or_else(|_| "n/a".into());
        eprintln!(
            "{}windows={} cycles_per_window={} total_cycles={} simulated={:.6e}s model={model}",
            name.as_deref().map(|n| format!("{n}: ")).unwrap_or_default(),
            report.windows,
            report.cycles_per_window,
            report.total_cycles,
            report.elapsed(t_clk).as_secs_f64(),
        );
        if let (Some(path), Some(trace)) = (&args.trace, &report.trace) {
            trace.write_tsv(io::BufWriter::new(create(path)?)).map_err(out_err)?;
        }
    }
    drop(writer.finish()?);
    Ok(())
}

fn bench(args: &BenchArgs) -> Result<()> {
    let cfg = BenchConfig {
        pattern_lens: args.lp.clone(),
        thresholds: args.k.clone(),
        text_len: args.lt,
        reps: args.reps,
        seed: args.seed,
        t_clk: Duration::from_nanos(args.t_clk_ns),
        simulate: !args.no_sim,
    };
    let rows = run_bench(&cfg)?;
    write_bench_tsv(&rows, io::stdout().lock()).map_err(out_err)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Search(a) => search(a),
        Command::Msearch(a) => msearch(a),
        Command::Baseline(a) => baseline(a),
        Command::Simulate(a) => simulate(a),
        Command::Bench(a) => bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
