use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use abelcover::error::MIN_GENUS;
use abelcover::reidemeister::{closed_form_pairing, oracle_pairing, ClosedForm};
use abelcover::suites::{run_suite, SuiteConfig};
use abelcover::xcalculus::{
    corner_cycle, project_group_ring, reduce_to_w1, reduce_to_w2, x_q, y_expr_image, Dir, XExpr,
    XSym, YSym,
};
use abelcover::{GroupRing, LatticeVector, Word};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "abelcover",
    version,
    about = "Exact verification suites for pairings on abelian covers of surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit its report.
    Suite {
        name: String,
        #[arg(long, default_value_t = MIN_GENUS)]
        genus: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-coordinate lattice box bound.
        #[arg(long = "box")]
        box_bound: Option<i64>,
        /// Instance count for every randomized check.
        #[arg(long)]
        count: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate a single expression given as JSON (`-` reads stdin).
    Eval { verb: Verb, payload: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verb {
    Pair,
    PairOracle,
    Xq,
    Reduce,
    Project,
    Theta,
}

enum Failure {
    Checks,
    Usage(String),
}

impl From<abelcover::Error> for Failure {
    fn from(e: abelcover::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn parse<T: DeserializeOwned>(v: Value) -> Result<T, Failure> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        Failure::Usage(format!("invalid payload at `{path}`: {}", e.into_inner()))
    })
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum PairPayload {
    Separated {
        genus: usize,
    },
    SeparatingVsCommutator {
        h: LatticeVector,
        first: LatticeVector,
        second: LatticeVector,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OraclePayload {
    genus: Option<usize>,
    x: String,
    y: String,
    h1: Option<LatticeVector>,
    h2: Option<LatticeVector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SymPayload {
    h: LatticeVector,
    x: LatticeVector,
    y: LatticeVector,
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
enum ReducePayload {
    W1 {
        h: LatticeVector,
        x: LatticeVector,
        y: LatticeVector,
    },
    W2 {
        d: usize,
        h: LatticeVector,
        dir: Dir,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectPayload {
    level: u8,
    element: GroupRing,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThetaPayload {
    #[serde(default = "min_genus")]
    genus: usize,
    d: usize,
}

fn min_genus() -> usize {
    MIN_GENUS
}

fn genus_of(v: &LatticeVector, genus: Option<usize>) -> Result<usize, Failure> {
    match genus {
        Some(g) if g != v.genus() => Err(Failure::Usage(format!("{v} does not have genus {g}"))),
        _ => Ok(v.genus()),
    }
}

fn ysym_json(s: &YSym, c: &abelcover::Rational) -> Value {
    json!({"c": c.to_string(), "d": s.d, "h": s.h, "dir": s.dir})
}

fn eval(verb: Verb, payload: Value) -> Result<Value, Failure> {
    let out = match verb {
        Verb::Pair => {
            let data = match parse::<PairPayload>(payload)? {
                PairPayload::Separated { genus } => ClosedForm::Separated { genus },
                PairPayload::SeparatingVsCommutator { h, first, second } => {
                    ClosedForm::SeparatingVsCommutator { h, first, second }
                }
            };
            serde_json::to_value(closed_form_pairing(&data)?)
        }
        Verb::PairOracle => {
            let p: OraclePayload = parse(payload)?;
            let g = match (&p.h1, &p.h2) {
                (Some(h), _) | (None, Some(h)) => genus_of(h, p.genus)?,
                (None, None) => p.genus.unwrap_or(MIN_GENUS),
            };
            let x = Word::parse(g, &p.x)?;
            let y = Word::parse(g, &p.y)?;
            let h1 = p.h1.unwrap_or_else(|| LatticeVector::zero(g));
            let h2 = p.h2.unwrap_or_else(|| LatticeVector::zero(g));
            serde_json::to_value(oracle_pairing(&x, &y, &h1, &h2)?)
        }
        Verb::Xq => {
            let expr: XExpr = if payload.get("terms").is_some() {
                parse(payload)?
            } else {
                let s: SymPayload = parse(payload)?;
                XExpr::from_sym(XSym::v1(s.h, s.x, s.y)?)
            };
            serde_json::to_value(x_q(&expr))
        }
        Verb::Reduce => match parse::<ReducePayload>(payload)? {
            ReducePayload::W1 { h, x, y } => {
                let s = XSym::v1(h, x, y)?;
                let out = reduce_to_w1(&s)?;
                Ok(json!({"reduced": out, "image": x_q(&out)}))
            }
            ReducePayload::W2 { d, h, dir } => {
                let s = YSym::new(d, h, dir)?;
                let out = reduce_to_w2(&s);
                let image = y_expr_image(&out).unwrap_or_else(|| GroupRing::zero(s.genus()));
                let terms: Vec<Value> = out.iter().map(|(s, c)| ysym_json(s, c)).collect();
                Ok(json!({"reduced": {"terms": terms}, "image": image}))
            }
        },
        Verb::Project => {
            let p: ProjectPayload = parse(payload)?;
            serde_json::to_value(project_group_ring(p.level, &p.element)?)
        }
        Verb::Theta => {
            let p: ThetaPayload = parse(payload)?;
            abelcover::error::require_genus(p.genus)?;
            serde_json::to_value(corner_cycle(p.genus, p.d)?)
        }
    };
    out.map_err(|e| Failure::Usage(e.to_string()))
}

fn read_payload(arg: &str) -> Result<Value, Failure> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("payload is not JSON: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Suite {
            name,
            genus,
            seed,
            box_bound,
            count,
            out,
            format,
        } => {
            let cfg = SuiteConfig {
                genus,
                seed,
                box_bound,
                count,
            };
            let report = run_suite(&name, &cfg)?;
            let text = match format {
                Format::Json => report.to_json(),
                Format::Markdown => report.to_markdown(),
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, text)
                        .map_err(|e| Failure::Usage(format!("writing {}: {e}", path.display())))?;
                    let verdict = if report.passed { "pass" } else { "FAIL" };
                    eprintln!("{name}: {verdict} ({})", path.display());
                }
                None => print!("{text}"),
            }
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::Eval { verb, payload } => {
            let v = eval(verb, read_payload(&payload)?)?;
            println!("{v}");
            Ok(())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("ACL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "ACL_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
