mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kstab_core::arith::{int, parse_rational, rat, Rational};
use kstab_core::autforms::{analyze_pencil, PencilConfig};
use kstab_core::classify::{load_table, match_invariants, seed_table, smooth_limit_report};
use kstab_core::geometry::{BlowupGeometry, CurveClass, DivisorClass};
use kstab_core::positivity::ConeSpec;
use kstab_core::stability::{beta_for_direction, verdict_chain};
use kstab_core::{Error, Result};

use config::FileConfig;
use report::{ClassifyReport, Query, VolumeReport};

#[derive(Parser)]
#[command(
    name = "kstab",
    version,
    about = "Exact beta-invariant, volume and automorphism computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// β of a divisor over a blowup, with the stability verdict.
    Beta(SampledArgs),
    /// Piecewise volume along -K - t·D only.
    Volume(SampledArgs),
    /// Automorphism checks for a pencil configuration.
    Aut(AutArgs),
    /// Match invariants against a family table and run the smooth-limit argument.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct GeometryArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Named geometry, e.g. mori-mukai-2.23.
    #[arg(long, conflicts_with = "geometry")]
    preset: Option<String>,
    /// Explicit invariants d,r,c,g.
    #[arg(long, value_name = "d,r,c,g")]
    geometry: Option<String>,
    /// Divisor class a,b in the basis (π*A, E). Default 1,-1.
    #[arg(long, value_name = "a,b", allow_hyphen_values = true)]
    direction: Option<String>,
    /// Log discrepancy of the divisor. Default 1.
    #[arg(long = "A", value_name = "RATIONAL")]
    log_discrepancy: Option<String>,
    /// Extremal curve l,f (repeatable). Default: fibre 0,1 and line 1,0.
    #[arg(long, value_name = "l,f", allow_hyphen_values = true)]
    cone: Vec<String>,
}

#[derive(Args)]
struct SampledArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    /// Print sampled volume values as CSV instead of the JSON report.
    #[arg(long)]
    csv: bool,
    /// Spacing of CSV samples. Default 1/8.
    #[arg(long, value_name = "RATIONAL")]
    sample_step: Option<String>,
}

#[derive(Args)]
struct AutArgs {
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// subfamily-a or subfamily-b.
    #[arg(long)]
    pencil_preset: Option<String>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[arg(long)]
    pencil_preset: Option<String>,
    /// CSV table with header id,b2,b3,degree.
    #[arg(long, value_name = "FILE", conflicts_with = "seed_table")]
    table: Option<PathBuf>,
    /// Use the built-in seed table.
    #[arg(long)]
    seed_table: bool,
    #[arg(long)]
    b2: Option<u32>,
    #[arg(long)]
    b3: Option<u32>,
    #[arg(long, value_name = "RATIONAL")]
    degree: Option<String>,
}

fn rationals(s: &str, count: usize, what: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != count {
        return Err(Error::Input(format!(
            "{what} expects {count} comma-separated values, got {s:?}"
        )));
    }
    parts.into_iter().map(parse_rational).collect()
}

fn file_config(path: &Option<PathBuf>) -> Result<FileConfig> {
    path.as_deref()
        .map_or_else(|| Ok(FileConfig::default()), config::load)
}

struct BetaSetup {
    geometry: BlowupGeometry,
    direction: DivisorClass,
    log_discrepancy: Rational,
    cone: ConeSpec,
}

fn resolve(args: &GeometryArgs, file: &FileConfig) -> Result<BetaSetup> {
    let geometry = match (&args.preset, &args.geometry) {
        (Some(name), _) => BlowupGeometry::from_preset(name)?,
        (None, Some(g)) => {
            let parts: Vec<&str> = g.split(',').collect();
            if parts.len() != 4 {
                return Err(Error::Input(format!(
                    "--geometry expects d,r,c,g, got {g:?}"
                )));
            }
            let genus = parts[3].trim().parse().map_err(|_| {
                Error::Input(format!(
                    "genus must be a nonnegative integer, got {:?}",
                    parts[3]
                ))
            })?;
            BlowupGeometry::new(
                parse_rational(parts[0])?,
                parse_rational(parts[1])?,
                parse_rational(parts[2])?,
                genus,
            )?
        }
        (None, None) => match (&file.preset, &file.geometry) {
            (Some(_), Some(_)) => {
                return Err(Error::Input(
                    "config gives both a preset and an explicit geometry".into(),
                ))
            }
            (Some(name), None) => BlowupGeometry::from_preset(name)?,
            (None, Some((d, r, c, g))) => {
                BlowupGeometry::new(d.to_rational()?, r.to_rational()?, c.to_rational()?, *g)?
            }
            (None, None) => {
                return Err(Error::Input(
                    "no geometry: pass --preset or --geometry".into(),
                ))
            }
        },
    };
    let direction = match (&args.direction, &file.direction) {
        (Some(s), _) => {
            let v = rationals(s, 2, "--direction")?;
            DivisorClass::new(v[0].clone(), v[1].clone())
        }
        (None, Some((a, b))) => DivisorClass::new(a.to_rational()?, b.to_rational()?),
        (None, None) => DivisorClass::strict_transform_hyperplane(),
    };
    let log_discrepancy = match (&args.log_discrepancy, &file.log_discrepancy) {
        (Some(s), _) => parse_rational(s)?,
        (None, Some(v)) => v.to_rational()?,
        (None, None) => int(1),
    };
    let cone = if !args.cone.is_empty() {
        let curves = args
            .cone
            .iter()
            .map(|s| rationals(s, 2, "--cone").map(|v| CurveClass::new(v[0].clone(), v[1].clone())))
            .collect::<Result<Vec<_>>>()?;
        ConeSpec::new(curves)?
    } else if let Some(list) = &file.cone {
        let curves = list
            .iter()
            .map(|(l, f)| Ok(CurveClass::new(l.to_rational()?, f.to_rational()?)))
            .collect::<Result<Vec<_>>>()?;
        ConeSpec::new(curves)?
    } else {
        ConeSpec::blowup_default()
    };
    Ok(BetaSetup {
        geometry,
        direction,
        log_discrepancy,
        cone,
    })
}

fn resolve_pencil(preset: &Option<String>, file: &FileConfig) -> Result<Option<PencilConfig>> {
    match (preset, &file.pencil) {
        (Some(name), _) => PencilConfig::from_preset(name).map(Some),
        (None, Some(section)) => section.build().map(Some),
        (None, None) => Ok(None),
    }
}

fn sample_step(args: &SampledArgs, file: &FileConfig) -> Result<Rational> {
    match (&args.sample_step, &file.sample_step) {
        (Some(s), _) => parse_rational(s),
        (None, Some(v)) => v.to_rational(),
        (None, None) => Ok(rat(1, 8)),
    }
}

fn run_beta(args: &SampledArgs) -> Result<String> {
    let file = file_config(&args.geometry.config)?;
    let setup = resolve(&args.geometry, &file)?;
    let report = beta_for_direction(
        &setup.geometry,
        &setup.direction,
        &setup.log_discrepancy,
        &setup.cone,
    )?;
    if args.csv {
        return report::sample_csv(&report.volume_pieces, &sample_step(args, &file)?);
    }
    report::json(&report)
}

fn run_volume(args: &SampledArgs) -> Result<String> {
    let file = file_config(&args.geometry.config)?;
    let setup = resolve(&args.geometry, &file)?;
    let report = VolumeReport::compute(&setup.geometry, &setup.direction, &setup.cone)?;
    if args.csv {
        return report::sample_csv(&report.volume_pieces, &sample_step(args, &file)?);
    }
    report::json(&report)
}

fn run_aut(args: &AutArgs) -> Result<String> {
    let file = file_config(&args.config)?;
    let pencil = resolve_pencil(&args.pencil_preset, &file)?.ok_or_else(|| {
        Error::Input("no pencil: pass --pencil-preset or a [pencil] config section".into())
    })?;
    report::json(&analyze_pencil(&pencil)?)
}

fn run_classify(args: &ClassifyArgs) -> Result<String> {
    let file = file_config(&args.geometry.config)?;
    let (table, source) = match (&args.table, args.seed_table, &file.table) {
        (Some(path), _, _) | (None, false, Some(path)) => {
            let f = std::fs::File::open(path)
                .map_err(|e| Error::Input(format!("cannot open table {}: {e}", path.display())))?;
            (load_table(f)?, path.display().to_string())
        }
        (None, true, _) => (seed_table(), "seed".to_string()),
        (None, false, None) => {
            return Err(Error::Input(
                "no table: pass --table FILE or --seed-table".into(),
            ))
        }
    };
    let file_query = file.query.as_ref();
    let b2 = args.b2.or(file_query.and_then(|q| q.b2));
    let b3 = args.b3.or(file_query.and_then(|q| q.b3));
    let degree = match (&args.degree, file_query.and_then(|q| q.degree.as_ref())) {
        (Some(s), _) => Some(parse_rational(s)?),
        (None, Some(v)) => Some(v.to_rational()?),
        (None, None) => None,
    };
    let (Some(b2), Some(b3), Some(degree)) = (b2, b3, degree) else {
        return Err(Error::Input("query needs --b2, --b3 and --degree".into()));
    };
    let matches = match_invariants(&table, b2, b3, &degree);

    let setup = resolve(&args.geometry, &file)?;
    let beta = beta_for_direction(
        &setup.geometry,
        &setup.direction,
        &setup.log_discrepancy,
        &setup.cone,
    )?;
    let pencil = resolve_pencil(&args.pencil_preset, &file)?;
    let aut_finite = match &pencil {
        Some(p) => Some(analyze_pencil(p)?.aut_finite),
        None => None,
    };
    let verdict = verdict_chain(std::slice::from_ref(&beta), aut_finite == Some(true));
    let limit = smooth_limit_report(&matches, &verdict);
    report::json(&ClassifyReport {
        query: Query { b2, b3, degree },
        table: source,
        table_rows: table.len(),
        matches,
        beta: beta.beta,
        aut_finite,
        verdict,
        conclusion: limit.conclusion,
        report: limit.text,
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) => 2,
        Error::Regime(_) | Error::InfiniteStabilizer(_) => 3,
        Error::Parse { .. } => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Beta(a) => run_beta(a),
        Command::Volume(a) => run_volume(a),
        Command::Aut(a) => run_aut(a),
        Command::Classify(a) => run_classify(a),
    };
    match out {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("kstab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
