//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::aperiodic::{count_aperiodic_free, count_f_lm};
use crate::bounds::{
    burnside_bound_free, burnside_bound_general, find_m0_free, find_m0_general, ConstantsLedger,
    FreeBoundParams, GeneralBoundParams, TailExponent,
};
use crate::cayley::{build_ball, effective_width, estimate_delta_within, growth_upper_estimate, Ball};
use crate::conetypes::{build_automaton, classify_essential, estimate_beta_gamma, spectral_radius, ConeAutomaton};
use crate::error::{Error, Result};
use crate::fset::{build_f, build_h, verify_f_properties, HParams};
use crate::lexgeo::{count_lex_types, lex_geodesics, lex_type_sample};
use crate::presentation::{CompletionLimits, GroupOracle};
use crate::verify::{resolve_presentation, run_battery, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "hypergrowth", version, about = "Growth of hyperbolic groups and their periodic quotients")]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Significant digits kept for floating-point output.
    #[arg(long, global = true, default_value_t = 15)]
    pub digits: usize,

    #[arg(long, global = true, env = "HYPERGROWTH_THREADS", default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Exponent {
    #[default]
    Four,
    Two,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Presentation file, or one of the bundled names f2, f3, z2, genus2.
    #[arg(long)]
    pub presentation: String,
    #[arg(long)]
    pub radius: usize,
    /// Stop once the ball holds this many elements.
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ball and sphere counts, δ̂ and an upper growth estimate.
    Ball {
        #[command(flatten)]
        group: GroupArgs,
        /// Radius of the core used for δ̂ (cost grows with the cube of its size).
        #[arg(long, default_value_t = 2)]
        delta_core: usize,
    },
    /// Cone-type automaton, growth rate, essential states, β̂ and γ̂.
    ConeTypes {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        lookahead: usize,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Largest radius in the β̂/γ̂ estimates; defaults to (N − R)/2.
        #[arg(long)]
        r_max: Option<usize>,
    },
    /// Lexicographic geodesics and truncated lex types.
    Lexgeo {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        element: Option<String>,
        #[arg(long)]
        lookahead: Option<usize>,
    },
    /// Aperiodic counts: free mode with --k, or over a presentation.
    Aperiodic {
        #[arg(long, conflicts_with = "presentation")]
        k: Option<usize>,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long)]
        presentation: Option<String>,
        #[arg(long = "L", default_value_t = 0)]
        l: usize,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
    },
    /// The H iteration and F construction with their property checks.
    Fset {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        nu: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Growth rate; computed from the cone automaton when omitted.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        lookahead: Option<usize>,
    },
    /// Lower bounds for the growth of periodic quotients.
    Bounds {
        #[command(subcommand)]
        which: BoundsCommand,
    },
    /// Run the invariant battery over the bundled groups.
    Verify {
        #[arg(long)]
        group: Option<String>,
        /// Read presentations from this directory instead of the bundled copies.
        #[arg(long)]
        bundle_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    Free {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        a: f64,
        /// Placeholder 0 when omitted.
        #[arg(long)]
        eta: Option<u64>,
        /// Placeholder 1 when omitted.
        #[arg(long)]
        n0: Option<u64>,
        #[arg(long)]
        n: u64,
        /// Computed with find_m0_free when omitted.
        #[arg(long)]
        m0: Option<usize>,
        #[arg(long, default_value_t = 64)]
        window: usize,
    },
    General {
        #[arg(long)]
        ledger: PathBuf,
        /// Placeholder 1 when omitted.
        #[arg(long = "L")]
        l: Option<f64>,
        /// Placeholder 0.01 when omitted.
        #[arg(long)]
        eps: Option<f64>,
        /// Placeholder 1 when omitted.
        #[arg(long = "nG")]
        n_g: Option<u64>,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 64)]
        window: usize,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Exponent::Four)]
        exponent: Exponent,
    },
}

enum Output {
    Json(Value),
    Csv(String),
}

/// Parses `args`, runs the command and returns the exit status. Errors are
/// written to stderr as a JSON record and give status 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    let result = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
        .and_then(|pool| pool.install(|| dispatch(cli)))
        .and_then(|out| emit(cli, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let record = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            eprintln!("{record}");
            2
        }
    }
}

fn emit(cli: &Cli, out: Output) -> Result<i32> {
    let mut code = 0;
    let text = match out {
        Output::Json(v) => {
            if v.get("all_passed") == Some(&Value::Bool(false)) {
                code = 1;
            }
            let v = round_floats(v, cli.digits);
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Output::Csv(s) => s,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(code)
}

fn round_floats(v: Value, digits: usize) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let r: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
            json!(r)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(|x| round_floats(x, digits)).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, round_floats(x, digits))).collect()),
        other => other,
    }
}

fn oracle_for(name: &str) -> Result<GroupOracle> {
    GroupOracle::from_presentation(&resolve_presentation(name)?, CompletionLimits::default())
}

fn ball_for(g: &GroupArgs) -> Result<Ball> {
    build_ball(&oracle_for(&g.presentation)?, g.radius, g.budget)
}

/// Uses `lookahead` when given, otherwise the smallest one that closes.
fn automaton_for(ball: &Ball, lookahead: Option<usize>) -> Result<ConeAutomaton> {
    if let Some(r) = lookahead {
        return build_automaton(ball, r);
    }
    let mut last = Error::InvalidParameter(format!("radius {} too small for an automaton", ball.radius()));
    for r in 1..=ball.radius() / 2 {
        match build_automaton(ball, r) {
            Ok(a) => return Ok(a),
            Err(e @ (Error::SignatureCollision { .. } | Error::IncompleteState(_))) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let format = cli.format;
    let want_csv = format == Some(Format::Csv);
    match &cli.command {
        Command::Ball { group, delta_core } => {
            let ball = ball_for(group)?;
            let counts = ball.ball_counts();
            let core = (*delta_core).min(ball.radius() / 2);
            let delta = estimate_delta_within(&ball, core);
            if want_csv {
                let mut s = String::from("r,sphere_count,ball_count\n");
                for (r, (&sp, &b)) in ball.sphere_counts().iter().zip(&counts).enumerate() {
                    s += &format!("{r},{sp},{b}\n");
                }
                return Ok(Output::Csv(s));
            }
            Ok(Output::Json(json!({
                "radius": ball.radius(),
                "counts": counts,
                "sphere_counts": ball.sphere_counts(),
                "delta_hat": *delta.numer() as f64 / *delta.denom() as f64,
                "delta_core": core,
                "growth_upper": growth_upper_estimate(&counts).ok().map(finite),
            })))
        }
        Command::ConeTypes {
            group,
            lookahead,
            delta,
            r_max,
        } => {
            let ball = ball_for(group)?;
            let a = build_automaton(&ball, *lookahead)?;
            let lambda = spectral_radius(&a)?;
            let c = classify_essential(&a, lambda, 1e-9)?;
            let r_max = r_max.unwrap_or((ball.radius() - lookahead) / 2);
            let bg = estimate_beta_gamma(&ball, &a, &c, r_max, effective_width(*delta))?;
            let alphabet = ball.alphabet();
            let transitions: Vec<Value> = (0..a.num_states())
                .map(|s| {
                    let row: serde_json::Map<String, Value> = a
                        .successors(s)
                        .map(|(x, t)| (alphabet.letter_char(x).to_string(), json!(t)))
                        .collect();
                    Value::Object(row)
                })
                .collect();
            Ok(Output::Json(json!({
                "radius": ball.radius(),
                "lookahead": lookahead,
                "start": a.start(),
                "states": (0..a.num_states()).map(|s| a.signature_hash(s)).collect::<Vec<_>>(),
                "transitions": transitions,
                "lambda": lambda,
                "essential": c.essential,
                "beta_hat": finite(bg.beta),
                "gamma_hat": finite(bg.gamma),
                "r_max": r_max,
                "path_counts": a.path_counts(ball.radius()).iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })))
        }
        Command::Lexgeo {
            group,
            element,
            lookahead,
        } => {
            let ball = ball_for(group)?;
            let lex = lex_geodesics(&ball);
            let alphabet = ball.alphabet();
            if let Some(text) = element {
                let w = alphabet.parse_word(text)?;
                let g = ball.lookup(&w).ok_or_else(|| Error::OutOfRange {
                    requested: ball.oracle().length(&w) as f64,
                    radius: ball.radius(),
                })?;
                let mut out = json!({
                    "element": text,
                    "length": ball.length(g),
                    "sigma": alphabet.format(&lex.sigma(g)),
                });
                if let Some(r) = lookahead {
                    out["lex_type_size"] = json!(lex_type_sample(&ball, &lex, g, *r)?.members.len());
                }
                return Ok(Output::Json(out));
            }
            let mut out = json!({
                "radius": ball.radius(),
                "sigma": (0..ball.len() as u32).map(|g| alphabet.format(&lex.sigma(g))).collect::<Vec<_>>(),
            });
            if let Some(r) = lookahead {
                out["lex_type_counts"] = json!(count_lex_types(&ball, &lex, *r)?);
            }
            Ok(Output::Json(out))
        }
        Command::Aperiodic {
            k,
            m,
            max_len,
            presentation,
            l,
            radius,
            delta,
        } => {
            let (ball_counts, counts): (Vec<u128>, Vec<u64>) = match (k, presentation) {
                (Some(k), _) => {
                    let t = count_aperiodic_free(*k, *m, *max_len)?;
                    let lam = (2 * k - 1) as u128;
                    let balls = (0..=*max_len as u32)
                        .map(|s| if s == 0 { 1 } else { 1 + (2 * *k as u128) * (lam.pow(s) - 1) / (lam - 1) })
                        .collect();
                    (balls, t.counts)
                }
                (None, Some(p)) => {
                    let n = radius.ok_or_else(|| Error::InvalidParameter("--radius is required with --presentation".into()))?;
                    let ball = build_ball(&oracle_for(p)?, n, None)?;
                    let lex = lex_geodesics(&ball);
                    let s_max = n.checked_sub(*l).ok_or_else(|| {
                        Error::InvalidParameter(format!("L = {l} exceeds the radius {n}"))
                    })?;
                    let counts = count_f_lm(&ball, &lex, *l, *m, s_max, *delta, None)?;
                    (ball.ball_counts()[..=s_max].iter().map(|&c| c as u128).collect(), counts)
                }
                (None, None) => {
                    return Err(Error::InvalidParameter("give --k (free mode) or --presentation".into()))
                }
            };
            if format == Some(Format::Json) {
                return Ok(Output::Json(json!({
                    "m": m,
                    "ball_counts": ball_counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "aperiodic_counts": counts,
                })));
            }
            let mut s = String::from("s,ball_count,aperiodic_count,ratio\n");
            for (i, (&b, &c)) in ball_counts.iter().zip(&counts).enumerate() {
                s += &format!("{i},{b},{c},{:.12}\n", c as f64 / b as f64);
            }
            Ok(Output::Csv(s))
        }
        Command::Fset {
            group,
            r,
            nu,
            delta,
            lambda,
            lookahead,
        } => {
            let ball = ball_for(group)?;
            let lex = lex_geodesics(&ball);
            let lambda = match lambda {
                Some(x) => *x,
                None => spectral_radius(&automaton_for(&ball, *lookahead)?)?,
            };
            let h = build_h(
                &ball,
                &lex,
                HParams {
                    r: *r,
                    nu: *nu,
                    delta: *delta,
                    lambda,
                },
            )?;
            let f = build_f(&h);
            let rep = verify_f_properties(&f, &h, &ball, &lex);
            Ok(Output::Json(json!({
                "radius": ball.radius(),
                "lambda": lambda,
                "interior": h.interior,
                "stage_sizes": h.stage_sizes(),
                "fixed_point_size": h.size(),
                "f_stage_sizes": f.stages.iter().map(Vec::len).collect::<Vec<_>>(),
                "f_size": f.size(),
                "report": {
                    "identity_in_f": rep.identity_in_f,
                    "checked": rep.checked,
                    "growth_violations": rep.growth_violations.len(),
                    "gap_violations": rep.gap_violations.len(),
                    "outside_h": rep.outside_h.len(),
                    "holds": rep.holds(),
                },
            })))
        }
        Command::Bounds { which } => bounds(which).map(Output::Json),
        Command::Verify { group, bundle_dir } => {
            let report = run_battery(&VerifyOptions {
                group: group.clone(),
                bundle_dir: bundle_dir.clone(),
            });
            let mut v = serde_json::to_value(&report)?;
            v["all_passed"] = json!(report.all_passed());
            Ok(Output::Json(v))
        }
    }
}

fn bounds(which: &BoundsCommand) -> Result<Value> {
    match which {
        BoundsCommand::Free {
            k,
            a,
            eta,
            n0,
            n,
            m0,
            window,
        } => {
            let mut placeholders = Vec::new();
            let eta = eta.unwrap_or_else(|| {
                placeholders.push("eta");
                0
            });
            let n0 = n0.unwrap_or_else(|| {
                placeholders.push("n0");
                1
            });
            let m0 = match m0 {
                Some(m) => *m,
                None => find_m0_free(*k, *a, *window, 100_000)?.m0,
            };
            let p = FreeBoundParams {
                k: *k,
                n: *n,
                a: *a,
                m0,
                n0,
                eta,
            };
            let b = burnside_bound_free(&p)?;
            Ok(json!({
                "params": p,
                "value": b.value,
                "kappa": b.kappa,
                "placeholders": placeholders,
            }))
        }
        BoundsCommand::General {
            ledger,
            l,
            eps,
            n_g,
            n,
            window,
            cap,
            exponent,
        } => {
            let mut placeholders = Vec::new();
            let mut pick = |v: &Option<f64>, name: &'static str, default: f64| {
                v.unwrap_or_else(|| {
                    placeholders.push(name);
                    default
                })
            };
            let l = pick(l, "L", 1.0);
            let eps = pick(eps, "eps", 0.01);
            let n_g = n_g.unwrap_or_else(|| {
                placeholders.push("nG");
                1
            });
            let ledger = ConstantsLedger::from_json(&std::fs::read_to_string(ledger)?)?;
            let exponent = match exponent {
                Exponent::Four => TailExponent::Four,
                Exponent::Two => TailExponent::Two,
            };
            let cert = find_m0_general(&ledger, l, *window, *cap, exponent)?;
            let b = burnside_bound_general(&ledger, &GeneralBoundParams { l, eps, n_g, n: *n }, cert)?;
            let mut v = serde_json::to_value(&b)?;
            v["placeholders"] = json!(placeholders);
            Ok(v)
        }
    }
}
