use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use invdepth::actions::GroupKind;
use invdepth::depth_lab::{cmdef_pipeline, verify, PipelineOptions};
use invdepth::frobenius::{frobenius_invariants, FrobeniusProblem, KernelRoute};
use invdepth::groebner::cache;
use invdepth::text::PolyFile;
use invdepth::{budget, ops, Error, Result};

#[derive(Parser)]
#[command(
    name = "invdepth",
    version,
    about = "Groebner bases, Frobenius invariants and depth bounds"
)]
struct Cli {
    /// Ignore and do not write the on-disk cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Wall-clock budget in seconds; long runs stop with a partial result.
    #[arg(long, global = true, value_name = "SECS")]
    time_budget: Option<f64>,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Ga,
    Sl2,
}

impl From<Group> for GroupKind {
    fn from(g: Group) -> Self {
        match g {
            Group::Ga => GroupKind::Ga,
            Group::Sl2 => GroupKind::SL2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Fused,
    Stepwise,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Groebner basis of the ideal in a polynomial file.
    Gb {
        file: PathBuf,
        #[arg(long, default_value = "grevlex")]
        order: String,
    },
    /// Relation ideal of the generators in a polynomial file.
    Relideal { file: PathBuf },
    /// Subalgebra membership with a witness in the tags `T1, T2, ...`.
    Member {
        generators: PathBuf,
        candidates: PathBuf,
    },
    /// Generators of the Frobenius-twisted vector invariants.
    Frobinv {
        p: u32,
        k: usize,
        group: Group,
        #[arg(long, value_enum, default_value = "fused")]
        route: Route,
    },
    /// The bracket-sum hsop for n copies, in the polynomial ring or in tags.
    Hsop {
        n: usize,
        /// Exponent on every bracket.
        #[arg(long, default_value_t = 1)]
        exponent: u32,
        #[arg(long)]
        tags: bool,
        /// Characteristic; 0 means the rationals.
        #[arg(long, default_value_t = 0)]
        char: u32,
    },
    /// Greedy regular-sequence scan modulo the relations in a ring file.
    Scanreg { ring: PathBuf, sequence: PathBuf },
    /// Two-sided bounds on the Cohen-Macaulay defect with a certificate.
    Cmdef {
        p: u32,
        k: usize,
        group: Group,
        /// Do not homogenize the middle block of the test sequence.
        #[arg(long)]
        raw: bool,
    },
    /// Re-check a certificate produced by `cmdef`.
    Verify { certificate: PathBuf },
}

enum Outcome {
    Done(String),
    Partial(String),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Gb { file, order } => ops::groebner_basis(&read(file)?, order).map(Outcome::Done),
        Command::Relideal { file } => ops::relation_ideal(&read(file)?).map(Outcome::Done),
        Command::Member {
            generators,
            candidates,
        } => {
            let (header, found) = ops::membership(&read(generators)?, &read(candidates)?)?;
            let mut s = format!("{header}\n");
            for w in found {
                s.push_str(w.as_deref().unwrap_or("# not a member"));
                s.push('\n');
            }
            Ok(Outcome::Done(s))
        }
        Command::Frobinv { p, k, group, route } => {
            let route = match route {
                Route::Fused => KernelRoute::Fused,
                Route::Stepwise => KernelRoute::Stepwise,
            };
            let prob = FrobeniusProblem::builtin((*group).into(), *p, *k)?.with_route(route);
            let out = frobenius_invariants(&prob)?;
            let mut s = String::new();
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            s.push_str(&format!("# {} generators\n", out.invariants.len()));
            s.push_str(&PolyFile::new(prob.target.clone(), out.invariants).render());
            Ok(Outcome::Done(s))
        }
        Command::Hsop {
            n,
            exponent,
            tags,
            char,
        } => ops::hsop(*n, *exponent, *char, *tags).map(Outcome::Done),
        Command::Scanreg { ring, sequence } => {
            let rep = ops::scan_regular(&read(ring)?, &read(sequence)?)?;
            let mut s = String::new();
            for (i, g) in rep.accepted.iter().zip(&rep.sequence) {
                s.push_str(&format!("regular {} {g}\n", i + 1));
            }
            s.push_str(&format!("depth >= {}\n", rep.accepted.len()));
            Ok(if rep.interrupted {
                Outcome::Partial(s)
            } else {
                Outcome::Done(s)
            })
        }
        Command::Cmdef { p, k, group, raw } => {
            let cert = cmdef_pipeline(
                *p,
                *k,
                (*group).into(),
                PipelineOptions { homogenize: !raw },
            )?;
            let text = cert.render()?;
            Ok(if cert.complete {
                Outcome::Done(text)
            } else {
                Outcome::Partial(text)
            })
        }
        Command::Verify { certificate } => {
            let rep = verify(&read(certificate)?)?;
            let (lo, hi) = rep.cmdef;
            let status = if rep.complete { "complete" } else { "partial" };
            Ok(Outcome::Done(format!(
                "certificate ok ({status}), cmdef in [{lo}, {hi}]\n"
            )))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io {
            path: p.display().to_string(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.no_cache {
        cache::set_enabled(false);
    }
    let budget = match cli.time_budget {
        Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
        Some(_) => {
            eprintln!("error: time budget must be a nonnegative number of seconds");
            return ExitCode::from(1);
        }
        None => None,
    };
    let result = budget::with_budget(budget, || run(&cli));
    let (text, code) = match result {
        Ok(Outcome::Done(t)) => (t, 0),
        Ok(Outcome::Partial(t)) => (t, 2),
        Err(Error::Interrupted) => {
            eprintln!("error: time budget exhausted");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
