//! `btorsion`: command-line front end for the torsion library.

mod output;
mod spectral;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use bilinear_torsion::complex_torsion::{cohomology, torsion_form_with, CohomologyData, LiftChoice};
use bilinear_torsion::io::{from_json, load_knot, parse_euler, ComplexFile, MorseFile};
use bilinear_torsion::thom_smale::{build_thom_smale, milnor_torsion};
use bilinear_torsion::turaev::{euler_class_circle, fox_alexander, turaev_torsion, Representation};
use bilinear_torsion::verify::{run_all, VerifyOptions};
use bilinear_torsion::{CMatrix, Error, Tolerances, C64};
use clap::{Parser, Subcommand, ValueEnum};

use output::{format_complex, write_csv, write_json, Row};

#[derive(Debug, Parser)]
#[command(name = "btorsion", version, about = "Bilinear torsions of flat bundles")]
struct Cli {
    /// Write result rows to this file: JSON if it ends in `.json`, CSV otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized lifts and the verification suite.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Multiply every tolerance by this factor.
    #[arg(long = "tol-scale", global = true, default_value_t = 1.0)]
    tol_scale: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Torsion of a finite complex, a Morse system, or a circle system with an Euler structure.
    Torsion {
        #[command(subcommand)]
        kind: TorsionKind,
    },
    /// Alexander polynomial of a knot presentation.
    Alexander { file: PathBuf },
    /// Spectral experiments on the circle.
    Spectral {
        file: PathBuf,
        #[arg(long, value_enum)]
        op: spectral::Op,
        /// Grid size for discrete operators.
        #[arg(long)]
        grid: Option<usize>,
        /// Witten deformation parameter.
        #[arg(long = "T")]
        t: Option<f64>,
        /// Spectral cut radius.
        #[arg(long)]
        cut: Option<f64>,
        #[arg(long, value_enum)]
        method: Option<spectral::Method>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(value_enum)]
        what: VerifyWhat,
    },
}

#[derive(Debug, Subcommand)]
enum TorsionKind {
    Finite {
        file: PathBuf,
    },
    Morse {
        file: PathBuf,
    },
    Turaev {
        file: PathBuf,
        /// `base:w0,w1,...` or `w0,w1,...`: windings of the spider paths.
        #[arg(long)]
        euler: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyWhat {
    All,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn run(cli: &Cli) -> anyhow::Result<Vec<Row>> {
    let tol = Tolerances::default().scaled(cli.tol_scale);
    let choice = cli.seed.map_or(LiftChoice::Canonical, LiftChoice::Randomized);
    match &cli.command {
        Command::Torsion { kind: TorsionKind::Finite { file } } => {
            let (c, b, h) = from_json::<ComplexFile>(&read(file)?)?.build()?;
            let h = h.unwrap_or_else(|| cohomology(&c));
            let value = torsion_form_with(&c, &b, &h, choice, &tol)?;
            println!("{}", format_complex(value));
            Ok(vec![Row::new("torsion-finite", value).param("file", file.display())])
        }
        Command::Torsion { kind: TorsionKind::Morse { file } } => {
            let f: MorseFile = from_json(&read(file)?)?;
            let ms = f.system()?;
            let forms = f.forms(&ms)?;
            let (c, _) = build_thom_smale(&ms, &forms)?;
            let value = milnor_torsion(&ms, &forms, &cohomology(&c))?;
            println!("{}", format_complex(value));
            Ok(vec![Row::new("torsion-morse", value).param("file", file.display())])
        }
        Command::Torsion { kind: TorsionKind::Turaev { file, euler } } => {
            let f: MorseFile = from_json(&read(file)?)?;
            let Some(circle) = &f.circle else {
                return Err(Error::Schema {
                    field: "circle".into(),
                    message: "Turaev torsion is computed for circle systems".into(),
                }
                .into());
            };
            let ms = f.system()?;
            let e = parse_euler(euler, &ms)?;
            let lambda = C64::new(circle.lambda[0], circle.lambda[1]);
            let rep = Representation::circle(CMatrix::diag(&[lambda]))?;
            let (c, _) = build_thom_smale(&ms, &f.forms(&ms)?)?;
            let h: CohomologyData = cohomology(&c);
            let value = turaev_torsion(&ms, &rep, &e, &CMatrix::identity(1), &h)?;
            let class = euler_class_circle(&ms, &e)?;
            println!("{}  (Euler class {class})", format_complex(value));
            Ok(vec![Row::new("torsion-turaev", value).param("file", file.display()).param("euler_class", class)])
        }
        Command::Alexander { file } => {
            let p = load_knot(&read(file)?)?;
            let d = fox_alexander(&p)?;
            println!("{d}");
            let at_one = C64::new(d.at_one() as f64, 0.0);
            Ok(vec![Row::new("alexander", at_one).param("polynomial", &d)])
        }
        Command::Spectral { file, op, grid, t, cut, method } => {
            let args = spectral::Args { op: *op, grid: *grid, t: *t, cut: *cut, method: *method };
            spectral::run(&read(file)?, &args)
        }
        Command::Verify { what: VerifyWhat::All } => {
            let mut opts = VerifyOptions { tol_scale: cli.tol_scale, ..VerifyOptions::default() };
            if let Some(s) = cli.seed {
                opts.seed = s;
            }
            let reports = run_all(&opts);
            let mut rows = Vec::new();
            for r in &reports {
                println!("{}", r.line());
                rows.push(
                    Row::new("verify", C64::new(r.elapsed.as_secs_f64(), 0.0))
                        .param("criterion", r.id)
                        .param("title", r.title)
                        .param("budget_s", r.budget.as_secs())
                        .checked(0.0, r.passed),
                );
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            println!("{passed}/{} criteria passed", reports.len());
            Ok(rows)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return if e.is_schema() { 2 } else { 1 };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rows) => {
            if let Some(path) = &cli.out {
                let json = path.extension().is_some_and(|e| e == "json");
                let written = fs::File::create(path).map_err(anyhow::Error::from).and_then(|f| {
                    if json {
                        Ok(write_json(f, &rows)?)
                    } else {
                        Ok(write_csv(f, &rows)?)
                    }
                });
                if let Err(e) = written {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if rows.iter().all(|r| r.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
