use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use povagg::aggregate::{common_space, representation_iso, solve_affine, synthesize, IsoOutcome, SolveOutcome};
use povagg::error::Error;
use povagg::json::{self as pj, parse_scenario, PoolingScenario, Scenario, ScenarioBody};
use povagg::linalg::RVector;
use povagg::pareto::{check_all, Axiom};
use povagg::pooling::{gfc_check_measure, lyapunov_gap, pool, pooling_profile, uniform, GFC_ATOM_LIMIT};
use povagg::profile::{Point, Profile};
use povagg::rational::parse_rational;

#[derive(Parser)]
#[command(name = "povagg", version, about = "Exact aggregation of incomplete preorders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a scenario.
    Validate { scenario: PathBuf },
    /// Compare two points under one representation (0 is the social one).
    Compare {
        scenario: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 0)]
        rep: usize,
        /// Read --x and --y as ambient coordinates instead of vertex weights.
        #[arg(long)]
        coords: bool,
    },
    /// Decide P1 to P4, DR and weak DR.
    Axioms { scenario: PathBuf },
    /// Build the aggregating map and social space.
    Synthesize {
        scenario: PathBuf,
        #[arg(long, default_value = "P4")]
        level: String,
    },
    /// Solve f0 = L f_I + b.
    Solve { scenario: PathBuf },
    /// Put every representation into one partially ordered space.
    CommonSpace {
        scenario: PathBuf,
        #[arg(long)]
        dr_form: bool,
    },
    /// Test whether two representations of the scenario order the domain alike.
    Iso {
        scenario: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Pool the individual measures of a pooling scenario.
    Pool {
        scenario: PathBuf,
        /// Also run the cancellation check up to this sequence length.
        #[arg(long)]
        gfc: Option<usize>,
    },
    /// Range convexity gap of measures on a finite algebra.
    Lyapunov {
        scenario: Option<PathBuf>,
        /// Uniform measure on n atoms, used when no scenario is given.
        #[arg(long)]
        n: Option<usize>,
    },
}

enum Outcome {
    Ok(Value, String),
    Precondition(Value, String),
}

struct Failure {
    code: u8,
    report: Value,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let precondition = matches!(
            e,
            Error::AxiomFailed(_) | Error::DRRequired | Error::NotZeroAtEmpty | Error::NotRepresenting(_)
        );
        Failure {
            code: if precondition { 2 } else { 1 },
            report: pj::error_json(&e),
            message: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    let message = msg.into();
    Failure {
        code: 1,
        report: json!({"kind": "usage", "message": message}),
        message,
    }
}

fn load(path: &PathBuf) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_scenario(&text)?)
}

fn profile_of(s: &Scenario) -> Result<Profile, Failure> {
    match &s.body {
        ScenarioBody::Profile(p) => Ok(p.clone()),
        ScenarioBody::Pooling(ps) => Ok(pooling_profile(&ps.individuals, &ps.social)?),
    }
}

fn pooling_of(s: &Scenario) -> Result<&PoolingScenario, Failure> {
    match &s.body {
        ScenarioBody::Pooling(p) => Ok(p),
        ScenarioBody::Profile(_) => Err(usage("this command needs a pooling scenario")),
    }
}

fn parse_list(s: &str, what: &str) -> Result<RVector, Failure> {
    s.split(',')
        .map(|t| parse_rational(t).ok_or_else(|| usage(format!("{what}: not a rational: {t:?}"))))
        .collect()
}

fn point(p: &Profile, s: &str, coords: bool, what: &str) -> Result<Point, Failure> {
    let v = parse_list(s, what)?;
    let obj = if coords {
        json!({"coords": pj::vector_json(&v)})
    } else {
        json!({"weights": pj::vector_json(&v)})
    };
    Ok(pj::parse_point(&obj, &format!("--{what}"), &p.domain)?)
}

fn run(cmd: &Command) -> Result<Outcome, Failure> {
    Ok(match cmd {
        Command::Validate { scenario } => {
            let s = load(scenario)?;
            let (kind, detail) = match &s.body {
                ScenarioBody::Profile(p) => (
                    "profile",
                    json!({"individuals": p.n(), "domain": pj::domain_json(&p.domain)}),
                ),
                ScenarioBody::Pooling(ps) => (
                    "pooling",
                    json!({"atoms": ps.algebra.atoms, "individuals": ps.individuals.len()}),
                ),
            };
            Outcome::Ok(
                json!({"valid": true, "kind": kind, "detail": detail, "has_expected": s.expected.is_some()}),
                format!("valid {kind} scenario"),
            )
        }
        Command::Compare {
            scenario,
            x,
            y,
            rep,
            coords,
        } => {
            let p = profile_of(&load(scenario)?)?;
            if *rep > p.n() {
                return Err(usage(format!("--rep must be at most {}", p.n())));
            }
            let px = point(&p, x, *coords, "x")?;
            let py = point(&p, y, *coords, "y")?;
            let r = p.compare(*rep, &px, &py)?;
            let fx = p.rep(*rep).evaluate(&p.domain, &px)?;
            let fy = p.rep(*rep).evaluate(&p.domain, &py)?;
            Outcome::Ok(
                json!({
                    "rep": rep,
                    "x": pj::point_json(&px),
                    "y": pj::point_json(&py),
                    "f_x": pj::vector_json(&fx),
                    "f_y": pj::vector_json(&fy),
                    "comparison": pj::relation_json(&r),
                }),
                r.relation.name().to_string(),
            )
        }
        Command::Axioms { scenario } => {
            let p = profile_of(&load(scenario)?)?;
            let s = check_all(&p)?;
            let line = s
                .reports
                .iter()
                .map(|r| format!("{} {}", r.axiom.name(), if r.holds { "holds" } else { "fails" }))
                .chain([format!("DR {}", s.dr)])
                .collect::<Vec<_>>()
                .join(", ");
            if s.all_hold() {
                Outcome::Ok(pj::summary_json(&s), line)
            } else {
                Outcome::Precondition(pj::summary_json(&s), line)
            }
        }
        Command::Synthesize { scenario, level } => {
            let lv = Axiom::parse(level).ok_or_else(|| usage(format!("unknown level {level:?}")))?;
            let p = profile_of(&load(scenario)?)?;
            let r = synthesize(&p, lv)?;
            let msg = format!(
                "social space of dimension {}, map {}",
                r.space.dim(),
                r.positivity.name()
            );
            Outcome::Ok(pj::synthesis_json(&r), msg)
        }
        Command::Solve { scenario } => {
            let p = profile_of(&load(scenario)?)?;
            let o = solve_affine(&p)?;
            match &o {
                SolveOutcome::Solved(a) => {
                    Outcome::Ok(pj::solve_json(&o), format!("solved, L is {}", a.positivity.name()))
                }
                SolveOutcome::NoP1(_) => {
                    Outcome::Precondition(pj::solve_json(&o), "P1 fails, no affine solution".into())
                }
            }
        }
        Command::CommonSpace { scenario, dr_form } => {
            let p = profile_of(&load(scenario)?)?;
            let c = common_space(&p, *dr_form)?;
            let msg = format!("common space of dimension {}", c.space.dim());
            Outcome::Ok(pj::common_space_json(&c), msg)
        }
        Command::Iso { scenario, a, b } => {
            let p = profile_of(&load(scenario)?)?;
            if *a > p.n() || *b > p.n() {
                return Err(usage(format!("representation indices must be at most {}", p.n())));
            }
            let o = representation_iso(&p.domain, p.rep(*a), p.rep(*b))?;
            let v = pj::iso_json(&o);
            match o {
                IsoOutcome::Iso { .. } => Outcome::Ok(v, "isomorphic".into()),
                IsoOutcome::NotSamePreorder { .. } => Outcome::Precondition(v, "different preorders".into()),
                IsoOutcome::NotPervasive { .. } => Outcome::Precondition(v, "not pervasive".into()),
            }
        }
        Command::Pool { scenario, gfc } => {
            let s = load(scenario)?;
            let ps = pooling_of(&s)?;
            let positivity: Vec<Value> = std::iter::once(&ps.social)
                .chain(&ps.individuals)
                .map(|m| pj::measure_positivity_json(&m.positivity_nontriviality()))
                .collect();
            let cancellation = match gfc {
                Some(k) if ps.algebra.len() > GFC_ATOM_LIMIT => {
                    return Err(usage(format!("--gfc {k} needs at most {GFC_ATOM_LIMIT} atoms")))
                }
                Some(k) => Some(pj::gfc_json(&gfc_check_measure(&ps.social, *k)?, &ps.algebra)),
                None => None,
            };
            let mut v = json!({"positivity": positivity, "cancellation": cancellation});
            match pool(&ps.algebra, &ps.individuals, &ps.social) {
                Ok(r) => {
                    let msg = match &r.affine {
                        Some(a) => format!("pooled, weights {}", pj::rows_json(a.map.matrix.row_vecs())),
                        None => "pooled without DR".into(),
                    };
                    v["pool"] = pj::pooling_json(&r);
                    Outcome::Ok(v, msg)
                }
                Err(e @ Error::AxiomFailed(_)) => {
                    let msg = e.to_string();
                    v["pool"] = pj::error_json(&e);
                    Outcome::Precondition(v, msg)
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Lyapunov { scenario, n } => {
            let (atoms, measures) = match (scenario, n) {
                (Some(path), None) => {
                    let s = load(path)?;
                    let ps = pooling_of(&s)?;
                    let mut ms = Vec::new();
                    for m in std::iter::once(&ps.social).chain(&ps.individuals) {
                        for c in 0..m.target.dim() {
                            ms.push(m.atom_values.iter().map(|v| v[c].clone()).collect::<RVector>());
                        }
                    }
                    (ps.algebra.len(), ms)
                }
                (None, Some(n)) if *n > 0 => (*n, vec![uniform(*n)]),
                _ => return Err(usage("give either a pooling scenario or a positive --n")),
            };
            let r = lyapunov_gap(atoms, &measures)?;
            let msg = format!("gap {}", pj::rational_json(&r.gap).as_str().unwrap_or_default());
            Outcome::Ok(pj::lyapunov_json(&r), msg)
        }
    })
}

fn command_echo(cmd: &Command) -> Value {
    let path = |p: &PathBuf| p.display().to_string();
    match cmd {
        Command::Validate { scenario } => json!({"name": "validate", "scenario": path(scenario)}),
        Command::Compare {
            scenario,
            x,
            y,
            rep,
            coords,
        } => json!({"name": "compare", "scenario": path(scenario), "x": x, "y": y, "rep": rep, "coords": coords}),
        Command::Axioms { scenario } => json!({"name": "axioms", "scenario": path(scenario)}),
        Command::Synthesize { scenario, level } => {
            json!({"name": "synthesize", "scenario": path(scenario), "level": level})
        }
        Command::Solve { scenario } => json!({"name": "solve", "scenario": path(scenario)}),
        Command::CommonSpace { scenario, dr_form } => {
            json!({"name": "common-space", "scenario": path(scenario), "dr_form": dr_form})
        }
        Command::Iso { scenario, a, b } => json!({"name": "iso", "scenario": path(scenario), "a": a, "b": b}),
        Command::Pool { scenario, gfc } => json!({"name": "pool", "scenario": path(scenario), "gfc": gfc}),
        Command::Lyapunov { scenario, n } => {
            json!({"name": "lyapunov", "scenario": scenario.as_ref().map(path), "n": n})
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("POVAGG_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("POVAGG_THREADS must be a positive integer");
                return ExitCode::from(1);
            }
        }
    }
    let echo = command_echo(&cli.command);
    let (status, code, result, message) = match run(&cli.command) {
        Ok(Outcome::Ok(v, m)) => ("ok", 0, v, m),
        Ok(Outcome::Precondition(v, m)) => ("precondition_failed", 2, v, m),
        Err(f) => (
            if f.code == 2 { "precondition_failed" } else { "error" },
            f.code,
            f.report,
            f.message,
        ),
    };
    let report = json!({"command": echo, "status": status, "exit_code": code, "result": result});
    let text = serde_json::to_string_pretty(&report).expect("serializable report");
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    eprintln!("{}: {message}", echo["name"].as_str().unwrap_or("povagg"));
    ExitCode::from(code)
}
