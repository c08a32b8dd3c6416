use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use causal_ladder::decode::{graph_from_int1, string_from_cf1, tree_from_int1};
use causal_ladder::exact::parse_ratio;
use causal_ladder::gap::{pairwise_separation_check, separation_table};
use causal_ladder::nfl::{
    builtin_learner, per_query_error_exact, per_query_error_monte_carlo, run_nfl, ConstantPredictor, Mode,
    ObservationalMarginal, QueryPredictor,
};
use causal_ladder::verify::verify_family;
use causal_ladder::{compute_oracle, AnswerOracle, Caps, Family, HiddenParam, OracleKind, Scm, VERSION};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "ladder", version, about = "Exact oracles and rung gaps for small binary SCMs")]
struct Cli {
    /// Exogenous support cap (points enumerated per distribution).
    #[arg(long, global = true, env = "LADDER_SUPPORT_CAP")]
    support_cap: Option<u64>,
    /// Largest n for the all-interventions oracle.
    #[arg(long, global = true, env = "LADDER_INT_ALL_CAP")]
    int_all_cap: Option<usize>,
    /// Largest tree size for enumeration.
    #[arg(long, global = true, env = "LADDER_TREE_CAP")]
    tree_cap: Option<usize>,
    /// Largest bipartite layer size for enumeration.
    #[arg(long, global = true, env = "LADDER_GRAPH_CAP")]
    graph_cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FamilyName {
    Tree,
    Bipartite,
    Xor,
}

#[derive(clap::Args, Debug, Clone, Serialize)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    /// Node count (tree family).
    #[arg(long)]
    n: Option<usize>,
    /// Layer size / module count (bipartite and xor families).
    #[arg(long)]
    m: Option<usize>,
}

impl FamilyArgs {
    fn family(&self) -> anyhow::Result<Family> {
        match (self.family, self.n, self.m) {
            (FamilyName::Tree, Some(n), None) => Ok(Family::Tree { n }),
            (FamilyName::Bipartite, None, Some(m)) => Ok(Family::Bipartite { m }),
            (FamilyName::Xor, None, Some(m)) => Ok(Family::Xor { m }),
            (FamilyName::Tree, ..) => Err(InputError::msg("tree family takes --n")),
            _ => Err(InputError::msg("bipartite and xor families take --m")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DecodeKind {
    Tree,
    Graph,
    Xor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Exact,
    Mc,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a family's exhaustive verification suite.
    Verify(FamilyArgs),
    /// Ambiguity / encoder / entropy row for a family and rung pair.
    Gaps {
        #[command(flatten)]
        family: FamilyArgs,
        /// Lower rung (default: OBS, or INT_ALL for xor).
        #[arg(long)]
        lower: Option<OracleKind>,
        /// Higher rung (default: INT1, or CF1 for xor).
        #[arg(long)]
        higher: Option<OracleKind>,
    },
    /// Pairwise d_Int separation of the bipartite INT1 oracles.
    Sep {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "1/5")]
        epsilon: String,
    },
    /// Recover a hidden parameter from a canonical oracle file.
    Decode {
        #[arg(long, value_enum)]
        kind: DecodeKind,
        oracle_file: PathBuf,
    },
    /// No-free-lunch experiment for an observational learner.
    Nfl {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        n_samples: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value = "uniform-guess")]
        learner: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Also score a per-query predictor: `constant:<p>` or `observational-marginal`.
        #[arg(long)]
        per_query: Option<String>,
    },
    /// Compute an oracle and write its canonical bytes.
    DumpOracle {
        #[arg(long)]
        kind: OracleKind,
        /// Hidden-parameter JSON (tree, graph or string).
        #[arg(long, conflicts_with = "scm_file", required_unless_present = "scm_file")]
        param_file: Option<PathBuf>,
        /// SCM JSON document.
        #[arg(long)]
        scm_file: Option<PathBuf>,
    },
    /// Build a family SCM from a hidden parameter and write its JSON.
    DumpScm {
        #[arg(long)]
        param_file: PathBuf,
    },
}

/// Bad input that should map to exit code 2 without being a library error.
#[derive(Debug)]
struct InputError(String);

impl InputError {
    fn msg(s: impl Into<String>) -> anyhow::Error {
        anyhow::Error::new(InputError(s.into()))
    }
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a C,
    caps: Caps,
    status: &'static str,
    result: R,
}

struct Output {
    bytes: Vec<u8>,
    passed: bool,
    failure: Option<String>,
}

fn caps_of(cli: &Cli) -> Caps {
    let d = Caps::default();
    Caps {
        support: cli.support_cap.unwrap_or(d.support),
        int_all_n: cli.int_all_cap.unwrap_or(d.int_all_n),
        tree_n: cli.tree_cap.unwrap_or(d.tree_n),
        graph_m: cli.graph_cap.unwrap_or(d.graph_m),
    }
}

fn json<C: Serialize, R: Serialize>(command: &'static str, config: &C, caps: Caps, passed: bool, result: R) -> anyhow::Result<Vec<u8>> {
    let env = Envelope {
        tool: "ladder",
        version: VERSION,
        command,
        config,
        caps,
        status: if passed { "pass" } else { "fail" },
        result,
    };
    let mut text = serde_json::to_string_pretty(&env)?;
    text.push('\n');
    Ok(text.into_bytes())
}

fn csv_rows<R: Serialize>(rows: impl IntoIterator<Item = R>) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| anyhow!("{e}"))
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(|e| InputError::msg(format!("{e:#}")))
}

fn expected_ambiguity(family: Family, lower: OracleKind, higher: OracleKind) -> Option<u64> {
    match (family, lower, higher) {
        (Family::Tree { n }, OracleKind::Obs, OracleKind::Int1) => (n as u64).checked_pow(n.saturating_sub(1) as u32),
        (Family::Bipartite { m }, OracleKind::Obs, OracleKind::Int1) => 1u64.checked_shl((m * m) as u32),
        (Family::Xor { m }, OracleKind::IntAll, OracleKind::Cf1) => 1u64.checked_shl(m as u32),
        _ => None,
    }
}

#[derive(Serialize)]
struct CheckRow<'a> {
    family: &'a str,
    size: usize,
    check: &'a str,
    passed: bool,
    detail: &'a str,
}

#[derive(Serialize)]
struct GapsResult {
    #[serde(flatten)]
    detail: causal_ladder::gap::GapDetail,
    expected_ambiguity: Option<u64>,
}

#[derive(Serialize)]
struct NflResult {
    /// Applies to every observational learner.
    bound_all_learners: String,
    /// This learner's rate.
    measured: causal_ladder::nfl::NflReport,
    per_query: Option<causal_ladder::nfl::PerQueryReport>,
}

fn parse_predictor(spec: &str) -> anyhow::Result<Box<dyn QueryPredictor>> {
    if spec == "observational-marginal" {
        return Ok(Box::new(ObservationalMarginal));
    }
    match spec.strip_prefix("constant:") {
        Some(p) => Ok(Box::new(ConstantPredictor(parse_ratio(p)?))),
        None => Err(InputError::msg(format!("unknown predictor {spec:?}"))),
    }
}

fn load_oracle(path: &Path) -> anyhow::Result<AnswerOracle> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display())).map_err(|e| InputError::msg(format!("{e:#}")))?;
    Ok(AnswerOracle::parse(&bytes)?)
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let caps = caps_of(cli);
    let ok = |bytes| Ok(Output { bytes, passed: true, failure: None });
    match &cli.command {
        Command::Verify(args) => {
            let family = args.family()?;
            let report = verify_family(family, &caps)?;
            let passed = report.passed();
            let failure = report.first_failure().map(|c| format!("{}: {}", c.name, c.detail));
            let bytes = match cli.format {
                Format::Json => json("verify", args, caps, passed, &report)?,
                Format::Csv => csv_rows(report.checks.iter().map(|c| CheckRow {
                    family: report.family,
                    size: report.size,
                    check: c.name,
                    passed: c.passed,
                    detail: &c.detail,
                }))?,
            };
            Ok(Output { bytes, passed, failure })
        }
        Command::Gaps { family: args, lower, higher } => {
            let family = args.family()?;
            let xor = matches!(family, Family::Xor { .. });
            let lower = lower.unwrap_or(if xor { OracleKind::IntAll } else { OracleKind::Obs });
            let higher = higher.unwrap_or(if xor { OracleKind::Cf1 } else { OracleKind::Int1 });
            let detail = separation_table(family, lower, higher, &caps)?;
            let expected = expected_ambiguity(family, lower, higher);
            let passed = detail.lower_le_upper && expected.is_none_or(|e| e == detail.row.ambiguity_count);
            let failure = (!passed).then(|| {
                format!("ambiguity {} (expected {expected:?}), encoder bits {}", detail.row.ambiguity_count, detail.row.encoder_bits)
            });
            #[derive(Serialize)]
            struct Config<'a> {
                #[serde(flatten)]
                family: &'a FamilyArgs,
                lower: &'static str,
                higher: &'static str,
            }
            let config = Config { family: args, lower: lower.name(), higher: higher.name() };
            let bytes = match cli.format {
                Format::Json => json("gaps", &config, caps, passed, GapsResult { detail, expected_ambiguity: expected })?,
                Format::Csv => csv_rows([detail.row])?,
            };
            Ok(Output { bytes, passed, failure })
        }
        Command::Sep { m, epsilon } => {
            let eps = parse_ratio(epsilon).map_err(|e| InputError::msg(e.to_string()))?;
            let report = pairwise_separation_check(*m, &eps, &caps)?;
            let passed = report.meets_half;
            let failure = (!passed).then(|| format!("min d_Int {} below 1/2", report.min_pairwise_d_int));
            #[derive(Serialize)]
            struct Config<'a> {
                m: usize,
                epsilon: &'a str,
            }
            let bytes = match cli.format {
                Format::Json => json("sep", &Config { m: *m, epsilon }, caps, passed, &report)?,
                Format::Csv => csv_rows([&report])?,
            };
            Ok(Output { bytes, passed, failure })
        }
        Command::Decode { kind, oracle_file } => {
            let oracle = load_oracle(oracle_file)?;
            let param = match kind {
                DecodeKind::Tree => HiddenParam::Tree(tree_from_int1(&oracle)?),
                DecodeKind::Graph => HiddenParam::Graph(graph_from_int1(&oracle)?),
                DecodeKind::Xor => HiddenParam::String(string_from_cf1(&oracle)?),
            };
            ok(format!("{}\n", param.to_json()).into_bytes())
        }
        Command::Nfl { m, n_samples, trials, learner, seed, mode, per_query } => {
            let learner_impl = builtin_learner(learner).ok_or_else(|| InputError::msg(format!("unknown learner {learner:?}")))?;
            let mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Mc => Mode::MonteCarlo,
            };
            let measured = run_nfl(*m, *n_samples, *trials, learner_impl.as_ref(), *seed, mode, &caps)?;
            let per_query_report = match per_query {
                None => None,
                Some(spec) => {
                    let p = parse_predictor(spec)?;
                    Some(match mode {
                        Mode::Exact => per_query_error_exact(*m, p.as_ref(), *n_samples, &caps)?,
                        Mode::MonteCarlo => per_query_error_monte_carlo(*m, p.as_ref(), *n_samples, *trials, *seed, &caps)?,
                    })
                }
            };
            let passed = measured.within_bound && per_query_report.as_ref().is_none_or(|r| r.at_least_quarter);
            let failure = (!passed).then(|| format!("measured rate {} vs bound {}", measured.success_rate, measured.bound));
            #[derive(Serialize)]
            struct Config<'a> {
                m: usize,
                n_samples: usize,
                trials: u64,
                learner: &'a str,
                seed: u64,
                mode: Mode,
                per_query: &'a Option<String>,
            }
            let config = Config { m: *m, n_samples: *n_samples, trials: *trials, learner, seed: *seed, mode, per_query };
            let bytes = match cli.format {
                Format::Json => json(
                    "nfl",
                    &config,
                    caps,
                    passed,
                    NflResult { bound_all_learners: measured.bound.clone(), measured, per_query: per_query_report },
                )?,
                Format::Csv => csv_rows([&measured])?,
            };
            Ok(Output { bytes, passed, failure })
        }
        Command::DumpOracle { kind, param_file, scm_file } => {
            let scm = match (param_file, scm_file) {
                (Some(p), _) => HiddenParam::from_json(&read_text(p)?)?.build_scm(),
                (None, Some(s)) => Scm::from_json(&read_text(s)?)?,
                (None, None) => bail!(InputError("--param-file or --scm-file required".into())),
            };
            ok(compute_oracle(&scm, *kind, &caps)?.serialize().into_bytes())
        }
        Command::DumpScm { param_file } => {
            let scm = HiddenParam::from_json(&read_text(param_file)?)?.build_scm();
            ok(format!("{}\n", scm.to_json()).into_bytes())
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<causal_ladder::Error>() {
        Some(e) if e.is_cap() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &output.bytes).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().lock().write_all(&output.bytes).map_err(Into::into),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if let Some(f) = output.failure {
        eprintln!("FAIL {f}");
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
