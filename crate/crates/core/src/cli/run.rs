//! Command-line dispatch.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::report::{emit_json, emit_text, CommandResult, RunReport};
use super::svg::{auto_bbox, emit_construction_svg, emit_svg};
use super::{parse_pair, parse_script, Command, Script};
use crate::geomodel::{algebraize, eval_with_choices, random_choices, random_instance, Choice, Instance, Pinning, Predicate};
use crate::groebner::{set_trace, ResourceLimits};
use crate::locus::{locus_equation_with, LocusError, LocusOptions, LocusResult};
use crate::polycore::{int, MonomialOrder};
use crate::reasoner::{discover, grade, prove, prove_details, DiscoverOptions, ReasonerError, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    Prove,
    Details,
    Locus,
    Grade,
    Discover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Grevlex,
    Lex,
}

/// Proves, grades and explores ruler-and-compass constructions written in `.geo` scripts.
#[derive(Debug, Parser)]
#[command(name = "geoprove", version)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Verb,
    pub file: PathBuf,
    /// Pin a free point: NAME=x,y (repeatable; overrides pins in the file).
    #[arg(long = "pin", value_name = "NAME=x,y")]
    pub pins: Vec<String>,
    #[arg(long, value_enum, default_value = "grevlex")]
    pub order: OrderArg,
    /// Time budget per command, in seconds.
    #[arg(long, env = "GEOPROVE_TIMEOUT", default_value_t = 60.0)]
    pub timeout: f64,
    #[arg(long)]
    pub json: bool,
    /// Write a picture of the locus (or the construction) to this file.
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    /// Log every processed S-pair to stderr.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNPROVED: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Default)]
struct Status {
    unproved: bool,
    timeout: bool,
    usage: bool,
}

impl Status {
    fn verdict(&mut self, v: Verdict) {
        match v {
            Verdict::Unproved => self.unproved = true,
            Verdict::Timeout => self.timeout = true,
            _ => {}
        }
    }

    fn code(&self) -> i32 {
        if self.usage {
            EXIT_USAGE
        } else if self.timeout {
            EXIT_TIMEOUT
        } else if self.unproved {
            EXIT_UNPROVED
        } else {
            EXIT_OK
        }
    }
}

/// Parses `args` (program name first), runs the script and writes the report.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(&args) {
        Ok((report, status, svg)) => {
            let text = if args.json { emit_json(&report) + "\n" } else { emit_text(&report) };
            let _ = write!(out, "{text}");
            if let (Some(path), Some(svg)) = (&args.svg, svg) {
                if let Err(e) = std::fs::write(path, svg) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            status.code()
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn load(args: &Args) -> Result<(Script, Pinning), String> {
    let text = std::fs::read_to_string(&args.file).map_err(|e| format!("cannot read {}: {e}", args.file.display()))?;
    let script = parse_script(&text).map_err(|e| e.to_string())?;
    let mut pins = script.pins.clone();
    for p in &args.pins {
        let (name, value) = p.split_once('=').ok_or_else(|| format!("--pin expects NAME=x,y, got {p}"))?;
        let v = parse_pair(value).ok_or_else(|| format!("--pin {name}: cannot parse coordinates {value}"))?;
        pins.insert(name.trim().to_string(), v);
    }
    Ok((script, pins))
}

/// Predicates of the script's commands, or `(predicate, mover)` pairs for locus runs.
fn targets(script: &Script, verb: Verb) -> Vec<(Predicate, Option<String>)> {
    script
        .commands
        .iter()
        .filter_map(|c| match (c, verb) {
            (Command::Locus { pred, mover }, Verb::Locus) => Some((pred.clone(), Some(mover.clone()))),
            (_, Verb::Locus) | (Command::Discover, _) => None,
            (Command::Prove(p) | Command::ProveDetails(p) | Command::Grade(p), _) => Some((p.clone(), None)),
            (Command::Locus { pred, .. }, _) => Some((pred.clone(), None)),
        })
        .collect()
}

type Outcome = (RunReport, Status, Option<String>);

fn execute(args: &Args) -> Result<Outcome, String> {
    set_trace(args.trace);
    if !(args.timeout.is_finite() && args.timeout > 0.0) {
        return Err("--timeout must be a positive number of seconds".into());
    }
    let (script, pins) = load(args)?;
    let limits = ResourceLimits::with_time(args.timeout);
    let order = match args.order {
        OrderArg::Grevlex => MonomialOrder::Grevlex,
        OrderArg::Lex => MonomialOrder::Lex,
    };
    let c = &script.construction;
    let mut status = Status::default();
    let mut results = Vec::new();
    let mut first_locus: Option<(Result<LocusResult, LocusError>, String)> = None;

    let verb = args.command;
    if verb == Verb::Discover {
        let start = Instant::now();
        let opts = DiscoverOptions {
            seed: args.seed,
            ..Default::default()
        };
        let d = discover(c, &pins, &limits, &opts).map_err(|e| e.to_string())?;
        for f in &d.findings {
            if let Some(p) = &f.proof {
                if p.verdict == Verdict::Timeout {
                    status.timeout = true;
                }
            }
        }
        let mut r = CommandResult::new("discover").with_discovery(&d);
        r.time_ms = start.elapsed().as_millis() as u64;
        results.push(r);
    } else {
        let todo = targets(&script, verb);
        if todo.is_empty() {
            return Err(format!("{} has no command to {:?}", args.file.display(), verb).to_lowercase());
        }
        for (pred, mover) in todo {
            let start = Instant::now();
            let kind = format!("{verb:?}").to_lowercase();
            let mut r = CommandResult::new(&kind);
            r.predicate = Some(pred.to_dsl());
            match verb {
                Verb::Prove | Verb::Details => {
                    let sys = algebraize(c, &pred, &pins).map_err(|e| e.to_string())?;
                    let p = if verb == Verb::Prove { prove(&sys, &limits) } else { prove_details(&sys, &limits) };
                    status.verdict(p.verdict);
                    r = r.with_proof(&p);
                }
                Verb::Grade => {
                    let sys = algebraize(c, &pred, &pins).map_err(|e| e.to_string())?;
                    match grade(&sys, &order, &limits) {
                        Ok(g) => r = r.with_grade(&g),
                        Err(ReasonerError::Timeout) => {
                            status.timeout = true;
                            r.verdict = Some(Verdict::Timeout);
                        }
                        Err(e) => {
                            status.unproved = true;
                            r.verdict = Some(Verdict::Unproved);
                            r.error = Some(e.to_string());
                        }
                    }
                }
                Verb::Locus => {
                    let mover = mover.expect("locus target");
                    let opts = LocusOptions {
                        seed: args.seed,
                        ..Default::default()
                    };
                    let res = locus_equation_with(c, &pred, &mover, &pins, &limits, &opts);
                    match &res {
                        Ok(l) => r = r.with_locus(l),
                        Err(LocusError::EmptyLocus) => r.error = Some("EMPTY_LOCUS: the locus is the entire plane".into()),
                        Err(e @ LocusError::Timeout(_)) => {
                            status.timeout = true;
                            r.verdict = Some(Verdict::Timeout);
                            r.error = Some(e.to_string());
                        }
                        Err(e @ LocusError::NoSolutions(_)) => r.error = Some(e.to_string()),
                        Err(e) => return Err(e.to_string()),
                    }
                    if first_locus.is_none() {
                        first_locus = Some((res, mover));
                    }
                }
                Verb::Discover => unreachable!(),
            }
            r.time_ms = start.elapsed().as_millis() as u64;
            results.push(r);
        }
    }

    let svg = match &args.svg {
        Some(_) => Some(picture(&script, &pins, first_locus.as_ref(), args.seed)?),
        None => None,
    };
    let report = RunReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: format!("{verb:?}").to_lowercase(),
        file: args.file.display().to_string(),
        order: format!("{:?}", args.order).to_lowercase(),
        timeout_s: args.timeout,
        results,
    };
    Ok((report, status, svg))
}

/// Instance at the pinning; the mover sits on a VALID component when there is one.
fn picture(
    script: &Script,
    pins: &Pinning,
    locus: Option<&(Result<LocusResult, LocusError>, String)>,
    seed: u64,
) -> Result<String, String> {
    let c = &script.construction;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let witness: Option<Instance> = locus
        .and_then(|(r, _)| r.as_ref().ok())
        .and_then(|l| l.components.iter().find_map(|c| c.witness.clone()));
    let inst = match witness {
        Some(w) => w,
        None => random_instance(c, pins, &mut rng, 64).or_else(|_| {
            let mut choices = random_choices(c, pins, &mut rng);
            if let Some((_, mover)) = locus {
                choices.insert(mover.clone(), Choice::Point(int(1), int(1)));
            }
            eval_with_choices(c, &choices)
        }).map_err(|e| e.to_string())?,
    };
    let bbox = auto_bbox(&inst);
    let text = match locus {
        Some((Ok(l), _)) => emit_svg(Some(l), c, &inst, &bbox, 600),
        Some((Err(LocusError::EmptyLocus), _)) => emit_svg(None, c, &inst, &bbox, 600),
        _ => emit_construction_svg(c, &inst, &bbox, 600),
    };
    text.map_err(|e| e.to_string())
}
