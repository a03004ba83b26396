//! `grm`: command-line front end for Generalized Reed-Muller erasure codes.
//!
//! Exit codes: 0 success, 1 decode incomplete, 2 usage or parameter error,
//! 3 integrity error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use grm_core::geometry::{self, brute_force_line_count};
use grm_core::sim::{self, BenchConfig, ReceptionModel, TrialConfig};
use grm_core::symbols::{parse_message, parse_word, render_word};
use grm_core::{CodeParams, DecoderKind, Error, FieldSpec, GrmCode, ReceptionState};
use serde::Deserialize;

/// Largest space the brute-force line check will scan.
const MAX_BRUTE_FORCE_POINTS: usize = 4096;

#[derive(Parser)]
#[command(
    name = "grm",
    version,
    about = "Generalized Reed-Muller erasure codes: encode, decode, simulate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CodeArgs {
    #[arg(short = 'r', help = "polynomial degree bound")]
    r: usize,
    #[arg(short = 'm', help = "number of variables")]
    m: usize,
    #[arg(short = 'q', help = "field order (prime power)")]
    q: usize,
}

#[derive(Args, Clone, Copy, Default)]
struct OptCodeArgs {
    #[arg(short = 'r')]
    r: Option<usize>,
    #[arg(short = 'm')]
    m: Option<usize>,
    #[arg(short = 'q')]
    q: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print derived code parameters.
    Params(CodeArgs),
    /// Systematically encode a message file into a codeword file.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(short, long, help = "message file: k symbols")]
        input: PathBuf,
        #[arg(short, long, help = "output codeword file (default: stdout)")]
        out: Option<PathBuf>,
    },
    /// Recover erasures (`?`) in a received word file.
    Decode {
        #[command(flatten)]
        code: OptCodeArgs,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long, default_value = "ld")]
        decoder: DecoderKind,
        #[arg(short, long, help = "output word file (default: stdout)")]
        out: Option<PathBuf>,
    },
    /// Success-probability curves over random reception orders.
    Simulate {
        #[arg(short, long, help = "JSON config; flags override its fields")]
        config: Option<PathBuf>,
        #[command(flatten)]
        code: OptCodeArgs,
        #[arg(short, long)]
        decoder: Option<DecoderKind>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, help = "record wall-clock decode times in the CSV")]
        timing: bool,
        #[arg(long, help = "also report the full-rank threshold distribution (GE)")]
        threshold: bool,
        #[arg(long, help = "also write a (q, K) Reed-Solomon baseline curve")]
        rs_baseline_k: Option<usize>,
        #[arg(short, long, default_value = ".", help = "output directory")]
        out: PathBuf,
    },
    /// Paired decoder timings under i.i.d. erasures.
    Bench {
        #[arg(short, long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        code: OptCodeArgs,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(
            long,
            value_delimiter = ',',
            help = "comma-separated erasure fractions"
        )]
        fractions: Option<Vec<f64>>,
        #[arg(short, long, value_delimiter = ',')]
        decoder: Option<Vec<DecoderKind>>,
        #[arg(short, long, help = "output CSV file (default: stdout)")]
        out: Option<PathBuf>,
    },
    /// Check the canonical line count against brute-force pair grouping.
    VerifyGeometry {
        #[arg(short = 'q')]
        q: usize,
        #[arg(short = 'm')]
        m: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
    Io(String),
    Incomplete(usize),
    Mismatch(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Incomplete(_) => 1,
            CliError::Core(Error::Integrity(_)) | CliError::Mismatch(_) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Mismatch(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Incomplete(n) => write!(f, "decoding incomplete: {n} symbols still erased"),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, contents: &str) -> CliResult {
    match path {
        Some(p) => {
            fs::write(p, contents).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed={s}");
        s
    })
}

fn resolve_params(flags: OptCodeArgs, from_config: Option<CodeParams>) -> CliResult<CodeParams> {
    let base = from_config.map(|p| (p.r, p.m, p.q));
    let pick = |flag: Option<usize>, i: usize, name: &str| {
        flag.or(base.map(|b| [b.0, b.1, b.2][i]))
            .ok_or_else(|| CliError::Usage(format!("missing -{name} (no config given)")))
    };
    Ok(CodeParams::new(
        pick(flags.r, 0, "r")?,
        pick(flags.m, 1, "m")?,
        pick(flags.q, 2, "q")?,
    )?)
}

fn cmd_params(args: CodeArgs) -> CliResult {
    let p = CodeParams::new(args.r, args.m, args.q)?;
    println!(
        "r={} m={} q={} n={} k={} d={} locality={} lines={} lines_per_point={} rate={:.4}",
        p.r,
        p.m,
        p.q,
        p.n,
        p.k,
        p.d,
        p.locality,
        p.line_count(),
        p.lines_per_point(),
        p.rate()
    );
    Ok(())
}

fn cmd_encode(args: CodeArgs, input: &Path, out: Option<&Path>) -> CliResult {
    let code = GrmCode::new(args.r, args.m, args.q)?;
    let message = parse_message(&read(input)?, code.params())?;
    let word = code.encode(&message)?;
    let symbols: Vec<_> = word.into_iter().map(Some).collect();
    write_output(out, &render_word(code.params(), &symbols))
}

fn cmd_decode(
    flags: OptCodeArgs,
    input: &Path,
    decoder: DecoderKind,
    out: Option<&Path>,
) -> CliResult {
    let file = parse_word(&read(input)?)?;
    let p = file.params;
    for (flag, actual, name) in [
        (flags.r, p.r, "r"),
        (flags.m, p.m, "m"),
        (flags.q, p.q, "q"),
    ] {
        if flag.is_some_and(|v| v != actual) {
            return Err(CliError::Usage(format!(
                "-{name} does not match the file header ({actual})"
            )));
        }
    }
    let code = GrmCode::from_params(p)?;
    let state = ReceptionState::from_received(&code, &file.symbols)?;
    let report = decoder.decode(&code, &state)?;
    let fin = &report.final_state;
    if report.full_decode {
        let word: Vec<_> = fin.values().into_iter().flatten().collect();
        if !code.is_codeword(&word) {
            return Err(CliError::Core(Error::Integrity(
                "decoded word is not a codeword".into(),
            )));
        }
    }
    write_output(out, &render_word(code.params(), &fin.values()))?;
    let erased = fin.len() - fin.known_count();
    eprintln!(
        "decoder={} received={} recovered={} erased={} full_decode={} info_decode={} line_decodes={} rank={} elapsed_us={:.1}",
        decoder,
        state.known_count(),
        report.recovered_count,
        erased,
        report.full_decode,
        report.info_decode,
        report.line_decode_ops,
        report.rref_pivots,
        report.elapsed.as_secs_f64() * 1e6
    );
    if erased > 0 {
        return Err(CliError::Incomplete(erased));
    }
    Ok(())
}

#[derive(Deserialize)]
struct SimulateFile {
    code_params: CodeParams,
    decoder: Option<DecoderKind>,
    trials: Option<usize>,
    seed: Option<u64>,
    #[serde(default)]
    reception_model: ReceptionModel,
    #[serde(default)]
    record_timing: bool,
}

fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn create_csv(path: &Path) -> CliResult<io::BufWriter<fs::File>> {
    fs::File::create(path)
        .map(io::BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    config: Option<&Path>,
    flags: OptCodeArgs,
    decoder: Option<DecoderKind>,
    trials: Option<usize>,
    seed: Option<u64>,
    timing: bool,
    threshold: bool,
    rs_baseline_k: Option<usize>,
    out: &Path,
) -> CliResult {
    let file: Option<SimulateFile> = config.map(load_json).transpose()?;
    let params = resolve_params(flags, file.as_ref().map(|f| f.code_params))?;
    let cfg = TrialConfig {
        code_params: params,
        decoder: decoder
            .or(file.as_ref().and_then(|f| f.decoder))
            .unwrap_or(DecoderKind::Ld),
        trials: trials
            .or(file.as_ref().and_then(|f| f.trials))
            .unwrap_or(1000),
        seed: resolve_seed(seed.or(file.as_ref().and_then(|f| f.seed))),
        reception_model: file.as_ref().map(|f| f.reception_model).unwrap_or_default(),
        record_timing: timing || file.as_ref().is_some_and(|f| f.record_timing),
    };
    cfg.validate()?;
    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;

    let points = sim::run_curve(&cfg)?;
    let path = out.join(format!(
        "curve_r{}_m{}_q{}_{}.csv",
        params.r, params.m, params.q, cfg.decoder
    ));
    let mut w = create_csv(&path)?;
    sim::write_curve_csv(&mut w, &cfg, &points).map_err(|e| CliError::Io(e.to_string()))?;
    println!("wrote {}", path.display());

    if threshold {
        let ge_cfg = TrialConfig {
            decoder: DecoderKind::Ge,
            ..cfg.clone()
        };
        let s = sim::measure_full_rank_threshold(&ge_cfg)?;
        println!(
            "full_rank_threshold k={} min={} median={} mean={:.3} max={}",
            params.k, s.min, s.median, s.mean, s.max
        );
    }

    if let Some(k) = rs_baseline_k {
        let baseline = sim::rs_baseline_curve(params.q, k, cfg.trials, cfg.seed)?;
        let path = out.join(format!("curve_rs_q{}_k{}.csv", params.q, k));
        let mut w = create_csv(&path)?;
        let mut write = || -> io::Result<()> {
            writeln!(
                w,
                "# rs baseline n={} k={} trials={} seed={} rng={}",
                params.q,
                k,
                cfg.trials,
                cfg.seed,
                sim::RNG_ALGORITHM
            )?;
            writeln!(w, "{}", sim::CURVE_CSV_HEADER)?;
            for pt in &baseline {
                writeln!(
                    w,
                    "{:.6},{:.6},{:.6},",
                    pt.received_fraction, pt.mean_info_known_fraction, pt.prob_full_info_decode
                )?;
            }
            Ok(())
        };
        write().map_err(|e| CliError::Io(e.to_string()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[derive(Deserialize)]
struct BenchFile {
    code_params: CodeParams,
    trials: Option<usize>,
    seed: Option<u64>,
    erasure_fractions: Option<Vec<f64>>,
    decoders: Option<Vec<DecoderKind>>,
}

fn cmd_bench(
    config: Option<&Path>,
    flags: OptCodeArgs,
    trials: Option<usize>,
    seed: Option<u64>,
    fractions: Option<Vec<f64>>,
    decoders: Option<Vec<DecoderKind>>,
    out: Option<&Path>,
) -> CliResult {
    let file: Option<BenchFile> = config.map(load_json).transpose()?;
    let params = resolve_params(flags, file.as_ref().map(|f| f.code_params))?;
    let cfg = BenchConfig {
        code_params: params,
        trials: trials
            .or(file.as_ref().and_then(|f| f.trials))
            .unwrap_or(200),
        seed: resolve_seed(seed.or(file.as_ref().and_then(|f| f.seed))),
        erasure_fractions: fractions
            .or(file.as_ref().and_then(|f| f.erasure_fractions.clone()))
            .unwrap_or_else(|| vec![0.1, 0.2, 0.3, 0.4, 0.5]),
        decoders: decoders
            .or(file.as_ref().and_then(|f| f.decoders.clone()))
            .unwrap_or_else(|| vec![DecoderKind::Ld, DecoderKind::Pld, DecoderKind::Ge]),
    };
    let rows = sim::run_bench(&cfg)?;
    let mut buf = Vec::new();
    sim::write_bench_csv(&mut buf, &cfg, &rows).map_err(|e| CliError::Io(e.to_string()))?;
    write_output(out, &String::from_utf8(buf).expect("CSV is ASCII"))
}

fn cmd_verify_geometry(q: usize, m: usize) -> CliResult {
    let field = FieldSpec::new(q)?;
    if m == 0 {
        return Err(CliError::Usage("m must be at least 1".into()));
    }
    let n = geometry::space_size(q, m)?;
    if n > MAX_BRUTE_FORCE_POINTS {
        return Err(CliError::Usage(format!(
            "q^m = {n} is too large for the brute-force check (max {MAX_BRUTE_FORCE_POINTS})"
        )));
    }
    let enumerated = geometry::enumerate_lines(&field, m).len();
    let formula = geometry::line_count(q, m);
    let brute = brute_force_line_count(&field, m);
    let pass = enumerated == brute && enumerated == formula;
    let verdict = if pass { "PASS" } else { "FAIL" };
    if enumerated == formula {
        println!("{enumerated} lines, brute-force {brute}, {verdict}");
    } else {
        println!("{enumerated} lines, brute-force {brute}, closed form {formula}, {verdict}");
    }
    if pass {
        Ok(())
    } else {
        Err(CliError::Mismatch(
            "line enumeration disagrees with brute force".into(),
        ))
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Params(args) => cmd_params(args),
        Command::Encode { code, input, out } => cmd_encode(code, &input, out.as_deref()),
        Command::Decode {
            code,
            input,
            decoder,
            out,
        } => cmd_decode(code, &input, decoder, out.as_deref()),
        Command::Simulate {
            config,
            code,
            decoder,
            trials,
            seed,
            timing,
            threshold,
            rs_baseline_k,
            out,
        } => cmd_simulate(
            config.as_deref(),
            code,
            decoder,
            trials,
            seed,
            timing,
            threshold,
            rs_baseline_k,
            &out,
        ),
        Command::Bench {
            config,
            code,
            trials,
            seed,
            fractions,
            decoder,
            out,
        } => cmd_bench(
            config.as_deref(),
            code,
            trials,
            seed,
            fractions,
            decoder,
            out.as_deref(),
        ),
        Command::VerifyGeometry { q, m } => cmd_verify_geometry(q, m),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("grm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
