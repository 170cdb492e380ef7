//! The `pcn` command-line runner: criteria tables, PCN polynomial search,
//! CN/PCN enumeration, brute-force counts and decomposition reports.

pub mod jobs;
pub mod state;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use pcn_core::criteria::{assess, CRITERIA_CSV_HEADER};
use pcn_core::enumeration::{
    brute_force_oracle, count_cn, count_pcn, EnumerationOptions, DEFAULT_BIG_THRESHOLD, DEFAULT_CHUNK_SIZE,
    DEFAULT_ORACLE_CEILING, DEFAULT_TABLE_LIMIT, ENUMERATION_CSV_HEADER,
};
use pcn_core::search::{pcns_csv_row, search_absolute_pcn, PCNS_CSV_HEADER};
use pcn_core::structure::{build_cn_digraph, finest_agreeable_decomposition, is_completely_basic, is_regular_pair};

use jobs::{collect_triples, Triple};
use state::{JobState, RowResult};

/// Header of the brute-force count CSV.
pub const ORACLE_CSV_HEADER: &str = "q,n,P,N,PN,CN,PCN";

#[derive(Parser, Debug)]
#[command(name = "pcn", version, about = "Primitive completely normal elements of finite field extensions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub select: Selection,
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Reuse finished rows recorded beside the output file.
    #[arg(long, global = true, requires = "out")]
    pub resume: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Selection {
    /// A triple `p,e,n`; may be repeated.
    #[arg(long = "triple", global = true, value_name = "P,E,N")]
    pub triple: Vec<Triple>,
    /// File with one `p,e,n` triple per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub triples: Option<PathBuf>,
    /// Degrees `n` as `A..B`, `A-B` or `N` (inclusive).
    #[arg(long, global = true, value_name = "RANGE")]
    pub n_range: Option<String>,
    /// Largest characteristic for `--n-range`.
    #[arg(long, global = true, value_name = "P")]
    pub p_max: Option<u64>,
    /// Largest field size `q = p^e` for `--n-range` (defaults to `--p-max`).
    #[arg(long, global = true, value_name = "Q")]
    pub q_max: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the existence criteria C1 to C5, searching for a witness when all fail.
    Criteria,
    /// Search for the least absolute PCN polynomial of degree `e n` over `F_p`.
    Search,
    /// Count CN and PCN elements through the cyclotomic decomposition.
    Enumerate(EnumerateArgs),
    /// Count P, N, PN, CN and PCN by scanning every element.
    Oracle(OracleArgs),
    /// Print the essential set and the finest agreeable decomposition.
    Decompose,
}

#[derive(Args, Debug, Clone)]
pub struct EnumerateArgs {
    /// Count CN only and leave the PCN column empty.
    #[arg(long)]
    pub cn_only: bool,
    /// Components with at most this many complete generators are kept in memory.
    #[arg(long, value_name = "B", default_value_t = DEFAULT_BIG_THRESHOLD)]
    pub big_threshold: u64,
    /// Use a primitivity bitset for fields with at most this many elements.
    #[arg(long, value_name = "B", default_value_t = DEFAULT_TABLE_LIMIT)]
    pub table_limit: u64,
    /// Elements of the largest component handled per checkpointed chunk
    #[arg(long, value_name = "N", default_value_t = DEFAULT_CHUNK_SIZE)]
    pub chunk_size: u64,
    /// Seed for locating the first completely normal element
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Levels::Relaxed)]
    pub levels: Levels,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Levels {
    /// Only the levels in the essential set.
    Relaxed,
    /// Every divisor of the module character.
    Full,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    /// Refuse fields with more than this many elements.
    #[arg(long, value_name = "B", default_value_t = DEFAULT_ORACLE_CEILING)]
    pub oracle_ceiling: u64,
}

/// Result of a run: the text written and the number of alarms raised.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub alarms: usize,
    pub token: String,
}

impl Outcome {
    /// 0 on success, 2 when some triple had all criteria fail without a witness.
    pub fn exit_code(&self) -> u8 {
        if self.alarms > 0 {
            2
        } else {
            0
        }
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Criteria => "criteria",
            Command::Search => "search",
            Command::Enumerate(_) => "enumerate",
            Command::Oracle(_) => "oracle",
            Command::Decompose => "decompose",
        }
    }

    /// Options that change the output, as part of the job identity.
    fn fingerprint(&self) -> String {
        match self {
            Command::Enumerate(a) => format!(
                "cn_only={} big={} table={} chunk={} seed={} levels={:?}",
                a.cn_only, a.big_threshold, a.table_limit, a.chunk_size, a.seed, a.levels
            ),
            Command::Oracle(a) => format!("ceiling={}", a.oracle_ceiling),
            _ => String::new(),
        }
    }

    fn header(&self) -> Option<&'static str> {
        match self {
            Command::Criteria => Some(CRITERIA_CSV_HEADER),
            Command::Search => Some(PCNS_CSV_HEADER),
            Command::Enumerate(_) => Some(ENUMERATION_CSV_HEADER),
            Command::Oracle(_) => Some(ORACLE_CSV_HEADER),
            Command::Decompose => None,
        }
    }
}

fn chunk_log(out: Option<&Path>, t: &Triple) -> Option<PathBuf> {
    out.map(|o| {
        let mut dir = o.as_os_str().to_owned();
        dir.push(".chunks");
        PathBuf::from(dir).join(format!("{}-{}-{}.jsonl", t.p, t.e, t.n))
    })
}

fn criteria_row(t: &Triple) -> Result<RowResult> {
    let pair = t.pair()?;
    let mut report = assess(&pair);
    if report.skip.is_some() {
        return Ok(RowResult { row: None, alarm: false });
    }
    let mut alarm = false;
    if report.needs_witness() {
        match search_absolute_pcn(t.p, t.e, t.n) {
            Ok(f) => report.witness = Some(f),
            Err(_) => alarm = true,
        }
    }
    Ok(RowResult { row: Some(report.csv_row()), alarm })
}

fn search_row(t: &Triple) -> Result<RowResult> {
    let f = search_absolute_pcn(t.p, t.e, t.n).with_context(|| format!("search for {t}"))?;
    Ok(RowResult { row: Some(pcns_csv_row(t.p, t.e as u64 * t.n, &f)?), alarm: false })
}

fn enumerate_row(t: &Triple, args: &EnumerateArgs, out: Option<&Path>, resume: bool) -> Result<RowResult> {
    let pair = t.pair()?;
    let checkpoint = if args.cn_only { None } else { chunk_log(out, t) };
    if let Some(path) = &checkpoint {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        if !resume && path.exists() {
            std::fs::remove_file(path).with_context(|| format!("removing {}", path.display()))?;
        }
    }
    let opts = EnumerationOptions {
        relaxed: args.levels == Levels::Relaxed,
        big_threshold: args.big_threshold,
        table_limit: args.table_limit,
        chunk_size: args.chunk_size,
        checkpoint,
        seed: args.seed,
    };
    let rec = if args.cn_only { count_cn(&pair, &opts)? } else { count_pcn(&pair, &opts)? };
    Ok(RowResult { row: Some(rec.csv_row()), alarm: false })
}

fn oracle_row(t: &Triple, args: &OracleArgs) -> Result<RowResult> {
    let pair = t.pair()?;
    let q = brute_force_oracle(&pair, args.oracle_ceiling)?;
    let row = format!(
        "{},{},{},{},{},{},{}",
        pair.q(),
        pair.n,
        q.primitive,
        q.normal,
        q.primitive_normal,
        q.completely_normal,
        q.pcn
    );
    Ok(RowResult { row: Some(row), alarm: false })
}

/// Human-readable structure report for one triple.
pub fn decompose_report(t: &Triple) -> Result<String> {
    let pair = t.pair()?;
    let dag = build_cn_digraph(&pair);
    let decomposition = finest_agreeable_decomposition(&pair);
    let mut s = String::new();
    writeln!(s, "(q, n) = ({}, {}) with p = {}, e = {}", pair.q(), pair.n, pair.p, pair.e)?;
    let d: Vec<String> = dag.sources().iter().map(u64::to_string).collect();
    writeln!(s, "  essential set D* = {{{}}}", d.join(", "))?;
    writeln!(s, "  regular pair: {}", if is_regular_pair(&pair) { "yes" } else { "no" })?;
    writeln!(s, "  completely basic: {}", if is_completely_basic(&pair) { "yes" } else { "no" })?;
    let labels: Vec<String> = decomposition.parts.iter().map(|c| c.label(&pair)).collect();
    writeln!(s, "  finest agreeable decomposition: {}", labels.join(", "))?;
    for c in &decomposition.parts {
        writeln!(
            s,
            "    C{} dimension {} over F_q, module character {}{}",
            c,
            c.dimension(),
            c.kappa(),
            if c.is_regular(&pair) { ", regular" } else { "" }
        )?;
    }
    Ok(s)
}

/// Runs the command and returns the produced text; the text is also
/// written to `--out` (or standard output when `print` is set).
pub fn run(cli: &Cli, print: bool) -> Result<Outcome> {
    if let Some(n) = cli.threads {
        // A second build in the same process fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let sel = &cli.select;
    let triples = collect_triples(&sel.triple, sel.triples.as_deref(), sel.n_range.as_deref(), sel.p_max, sel.q_max)?;
    let listed: Vec<String> = triples.iter().map(ToString::to_string).collect();
    let spec = state::sha256_hex(
        format!("{}\n{}\n{}", cli.command.name(), cli.command.fingerprint(), listed.join(";")).as_bytes(),
    );
    let out = cli.out.as_deref();
    let job = JobState::open(out, spec, cli.resume)?;

    let results: Vec<(Triple, RowResult)> = triples
        .par_iter()
        .map(|t| -> Result<(Triple, RowResult)> {
            let key = t.to_string();
            if let Some(done) = job.get(&key) {
                return Ok((*t, done));
            }
            let res = match &cli.command {
                Command::Criteria => criteria_row(t)?,
                Command::Search => search_row(t)?,
                Command::Enumerate(a) => enumerate_row(t, a, out, cli.resume)?,
                Command::Oracle(a) => oracle_row(t, a)?,
                Command::Decompose => RowResult { row: Some(decompose_report(t)?), alarm: false },
            };
            job.record(key, res.clone())?;
            Ok((*t, res))
        })
        .collect::<Result<_>>()?;

    let mut text = String::new();
    if let Some(h) = cli.command.header() {
        text.push_str(h);
        text.push('\n');
    }
    let mut alarms = 0;
    for (t, r) in &results {
        alarms += r.alarm as usize;
        if let Some(row) = &r.row {
            text.push_str(row);
            if !row.ends_with('\n') {
                text.push('\n');
            }
        }
        if r.alarm {
            eprintln!("alarm: all criteria fail for {t} and no PCN polynomial was found");
        }
    }
    match out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None if print => std::io::stdout().lock().write_all(text.as_bytes())?,
        None => {}
    }
    Ok(Outcome { text, alarms, token: job.token() })
}
