use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::warn;
use serde_json::json;
use vsrq_core::codemetrics::{scan_tree, LanguageProfile, ModuleMap};
use vsrq_core::config::{self, AssessmentConfig, CONFIG_DIR_ENV};
use vsrq_core::evaluation::{
    confusion, curve_to_csv, format_percent, metrics, percent_2dp, risk_ratio_curve, ComponentScores, LabeledCorpus,
};
use vsrq_core::pipeline::{assess, weight_report};
use vsrq_core::{ClassificationRule, Error, SystemDescription};

#[derive(Parser)]
#[command(name = "vsrq", version, about = "Interval security risk scoring for connected-vehicle systems")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration overlay (JSON) merged over the defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Seed for clustering initialisation and the direction search.
    #[arg(long, global = true, value_name = "N", conflicts_with = "entropy_seed")]
    seed: Option<u64>,
    /// Draw a fresh seed instead of the configured one.
    #[arg(long, global = true)]
    entropy_seed: bool,
    /// Vehicle-state rule.
    #[arg(long, global = true, value_name = "RULE")]
    rule: Option<ClassificationRule>,
    /// Treat an excessive consistency ratio as an error.
    #[arg(long, global = true)]
    strict_consistency: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a source tree and write a code-metric report.
    Scan {
        root: PathBuf,
        /// Built-in profile name (`c`, `python`) or a profile file.
        #[arg(long, default_value = "c")]
        profile: String,
        /// Path-prefix to module-id map.
        #[arg(long, value_name = "PATH")]
        module_map: Option<PathBuf>,
    },
    /// Calibrate indicator weights.
    Weights {
        /// System description whose samples drive the objective correction.
        #[arg(long, value_name = "PATH")]
        system: Option<PathBuf>,
    },
    /// Assess one system description.
    Assess { system: PathBuf },
    /// Score vulnerable-component predictions against labels.
    Eval {
        corpus: PathBuf,
        /// Per-component scores (JSON).
        #[arg(long, value_name = "PATH")]
        scores: Option<PathBuf>,
        /// Write the risk-ratio curve as CSV.
        #[arg(long, value_name = "PATH")]
        curve_out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => stdout(text),
    }
}

// A closed pipe (`vsrq weights | head`) is not an error.
fn stdout(text: &str) -> Result<(), Error> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn entropy_seed() -> u64 {
    use std::hash::{BuildHasher, Hasher};
    let mut h = std::collections::hash_map::RandomState::new().build_hasher();
    h.write_u128(
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos()),
    );
    h.write_u32(std::process::id());
    h.finish()
}

fn load_config(c: &Common) -> Result<AssessmentConfig, Error> {
    let mut cfg = AssessmentConfig::load(c.config.as_deref())?;
    if c.strict_consistency {
        cfg.strict_consistency = true;
    }
    if let Some(seed) = c.seed {
        cfg.set_seed(seed);
    } else if c.entropy_seed {
        let seed = entropy_seed();
        eprintln!("using seed {seed}");
        cfg.set_seed(seed);
    }
    Ok(cfg)
}

fn load_profile(spec: &str) -> Result<LanguageProfile, Error> {
    let builtin = match spec {
        "c" => Some(("c.json", config::C_PROFILE)),
        "python" => Some(("python.json", config::PYTHON_PROFILE)),
        _ => None,
    };
    match builtin {
        Some((file, text)) => {
            if let Some(dir) = std::env::var_os(CONFIG_DIR_ENV).filter(|d| !d.is_empty()) {
                let p = PathBuf::from(dir).join("profiles").join(file);
                if p.exists() {
                    return LanguageProfile::from_json(&read(&p)?);
                }
            }
            LanguageProfile::from_json(text)
        }
        None => LanguageProfile::from_json(&read(Path::new(spec))?),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let c = &cli.common;
    match &cli.command {
        Command::Scan {
            root,
            profile,
            module_map,
        } => {
            let profile = load_profile(profile)?;
            let map = match module_map {
                Some(p) => Some(ModuleMap::from_json(&read(p)?)?),
                None => None,
            };
            let report = scan_tree(root, &profile, map.as_ref())?;
            for e in &report.errors {
                warn!("{}: {}", e.path, e.message);
            }
            write_out(c.out.as_deref(), &to_json(&report))
        }
        Command::Weights { system } => {
            let cfg = load_config(c)?;
            let desc = match system {
                Some(p) => Some(SystemDescription::load(p)?),
                None => None,
            };
            let report = weight_report(&cfg, desc.as_ref(), c.rule.unwrap_or(cfg.rule))?;
            for w in &report.warnings {
                warn!("{w}");
            }
            write_out(c.out.as_deref(), &to_json(&report))?;
            if c.out.is_some() {
                stdout(&report.to_text())?;
            }
            Ok(())
        }
        Command::Assess { system } => {
            let cfg = load_config(c)?;
            let desc = SystemDescription::load(system)?;
            let report = assess(&cfg, &desc, c.rule.unwrap_or(cfg.rule))?;
            for w in &report.warnings {
                warn!("{w}");
            }
            write_out(c.out.as_deref(), &to_json(&report))?;
            if c.out.is_some() {
                stdout(&report.to_text())?;
            }
            Ok(())
        }
        Command::Eval {
            corpus,
            scores,
            curve_out,
        } => {
            let cfg = load_config(c)?;
            let mut corpus = LabeledCorpus::parse(&read(corpus)?)?;
            let scores = match scores {
                Some(p) => Some(ComponentScores::from_json(&read(p)?)?),
                None => None,
            };
            let mut curve = None;
            if let Some(s) = &scores {
                let ids: BTreeSet<&str> = corpus.items().iter().map(|i| i.id.as_str()).collect();
                let unknown: Vec<vsrq_core::Issue> = s
                    .scores
                    .keys()
                    .filter(|k| !ids.contains(k.as_str()))
                    .map(|k| vsrq_core::Issue::new(format!("scores.{k}"), "not in the corpus"))
                    .collect();
                if !unknown.is_empty() {
                    return Err(Error::Validation(unknown));
                }
                corpus = corpus.with_derived_predictions(s, &cfg.vsr_bands, cfg.positive_from)?;
                curve = Some(risk_ratio_curve(&corpus, s, &cfg.vsr_bands)?);
            } else if curve_out.is_some() {
                return Err(Error::validation("--curve-out", "requires --scores"));
            }
            let cm = confusion(&corpus)?;
            let m = metrics(&cm);
            let pct = |v: Option<f64>| v.map(percent_2dp);
            let out = json!({
                "schemaVersion": 1,
                "components": corpus.len(),
                "confusion": cm,
                "metrics": m,
                "percent": {
                    "accuracy": pct(m.accuracy),
                    "precision": pct(m.precision),
                    "recall": pct(m.recall),
                },
                "curve": curve,
            });
            write_out(c.out.as_deref(), &to_json(&out))?;
            if let (Some(p), Some(points)) = (curve_out, &curve) {
                fs::write(p, curve_to_csv(points)).map_err(|e| Error::Io {
                    path: p.clone(),
                    source: e,
                })?;
            }
            if c.out.is_some() {
                stdout(&format!(
                    "components {}\nTP {}  FP {}  TN {}  FN {}\naccuracy  {}\nprecision {}\nrecall    {}\n",
                    corpus.len(),
                    cm.tp,
                    cm.fp,
                    cm.tn,
                    cm.fn_,
                    format_percent(m.accuracy),
                    format_percent(m.precision),
                    format_percent(m.recall),
                ))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
