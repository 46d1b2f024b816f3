use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use ruled::audit::{Auditor, TheoremId};
use ruled::frame::frame_samples;
use ruled::generators::catalog;
use ruled::slant::{DEFAULT_TOL, SAMPLED_TOL};
use ruled::surface::ParamValue;
use ruled::{RuledSurfaceSpec, SampleGrid};

use crate::args::{AnalyzeArgs, Command, ExportArgs, GenerateArgs};
use crate::error::{CliError, CliResult};
use crate::mesh::export_obj;
use crate::report::{samples_csv, to_json, Meta, ReportFile, SlantBlock, TOOL, VERSION};
use crate::spec_file::{tabulate, SurfaceSpecFile};

/// Writes `contents` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(contents.as_bytes())
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, contents: &str) -> CliResult<()> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn load(path: &Path) -> CliResult<RuledSurfaceSpec> {
    SurfaceSpecFile::read(path)?.build(path)
}

fn report(name: &'static str, args: &AnalyzeArgs, theorems: &[TheoremId]) -> CliResult<ReportFile> {
    let surface = load(&args.surface)?;
    let tol = args.tol.unwrap_or(if surface.is_sampled() {
        SAMPLED_TOL
    } else {
        DEFAULT_TOL
    });
    if !(tol > 0.0) || !(args.angle_tol >= 0.0) {
        return Err(CliError::Usage("tolerances must be positive".into()));
    }
    let grid = SampleGrid::uniform(surface.range, args.samples)?;
    let samples = frame_samples(&surface, &grid)?;
    let auditor = Auditor::from_samples(samples, tol, args.angle_tol)?;
    let audits: BTreeMap<String, _> = theorems
        .iter()
        .map(|&t| (t.as_str().to_string(), auditor.run(t)))
        .collect();
    Ok(ReportFile {
        meta: Meta {
            tool: TOOL,
            version: VERSION,
            command: name,
            tol,
            angle_tol: args.angle_tol,
            samples: args.samples,
            range: [surface.range.lo, surface.range.hi],
            provenance: surface.provenance.clone(),
            expected: surface.expected.clone(),
        },
        slant: SlantBlock::from(&auditor.report),
        samples: auditor.samples,
        audits,
    })
}

fn write_report(args: &AnalyzeArgs, report: &ReportFile) -> CliResult<()> {
    emit(args.out.as_deref(), &to_json(report))?;
    if args.csv {
        // `--csv` requires `--out`.
        let path = csv_path(args.out.as_deref().expect("clap enforces --out"));
        write_atomic(&path, &samples_csv(&report.samples))?;
    }
    Ok(())
}

/// The CSV table lives next to the report, with a `.csv` extension.
pub fn csv_path(report: &Path) -> PathBuf {
    report.with_extension("csv")
}

fn catalog_params(raw: &[String]) -> CliResult<BTreeMap<String, ParamValue>> {
    raw.iter()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--param `{kv}` is not KEY=VALUE")))?;
            let numbers = v
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("--param `{kv}`: {e}")))?;
            let value = if numbers.len() == 1 && !v.contains(',') {
                ParamValue::Number(numbers[0])
            } else {
                ParamValue::List(numbers)
            };
            Ok((k.to_string(), value))
        })
        .collect()
}

fn generate_cmd(args: &GenerateArgs) -> CliResult<()> {
    let surface = match (&args.surface, &args.catalog) {
        (Some(path), _) => load(path)?,
        (None, Some(name)) => catalog(name, &catalog_params(&args.params)?)
            .map_err(|e| CliError::Usage(e.to_string()))?,
        (None, None) => {
            return Err(CliError::Usage(
                "generate needs --surface or --catalog".into(),
            ))
        }
    };
    if surface.is_sampled() {
        return Err(CliError::Usage(
            "generate expects a catalog or prescribed_kappa spec".into(),
        ));
    }
    let file = tabulate(&surface, args.samples)?;
    emit(args.out.as_deref(), &to_json(&file))
}

fn export_cmd(args: &ExportArgs) -> CliResult<()> {
    let surface = load(&args.surface)?;
    emit(
        args.out.as_deref(),
        &export_obj(&surface, args.grid, args.v_range)?,
    )
}

pub fn run(command: &Command) -> CliResult<()> {
    match command {
        Command::Analyze(a) => write_report(a, &report("analyze", a, &TheoremId::ALL)?),
        Command::Classify(a) => write_report(a, &report("classify", a, &[])?),
        Command::Verify(v) => {
            let r = report("verify", &v.common, &v.theorem.theorems())?;
            write_report(&v.common, &r)
        }
        Command::Generate(g) => generate_cmd(g),
        Command::Export(e) => export_cmd(e),
    }
}

/// Parses `argv`, runs the command, prints any diagnostic, and returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = crate::args::parse_cli(argv).and_then(|c| run(&c));
    match result {
        Ok(()) => 0,
        Err(CliError::Help(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            match &e {
                CliError::Usage(text) => eprintln!("{}", text.trim_end()),
                other => eprintln!("error: {other}"),
            }
            e.exit_code()
        }
    }
}
