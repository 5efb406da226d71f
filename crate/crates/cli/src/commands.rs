use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use depmat_core::frontend::{build_ir, load_ir, save_ir};
use depmat_core::ingest::discover_services;
use depmat_core::matrix::{diff, prune_ddm, prune_edm, prune_sdm, HotspotRow, MatrixView};
use depmat_core::pipeline::{load_settings, AnalysisReport, AnalysisSettings};
use depmat_core::render::{
    emit_csv, emit_diff_json, emit_heatmap, emit_hotspots_csv, emit_json, format_diff_table,
    HeatmapSpec,
};

use crate::args::{
    AnalyzeArgs, Command, DiffArgs, HotspotsArgs, IrCommand, IrExportArgs, IrValidateArgs,
    OutputFormat,
};
use crate::inputs::{
    analyze_ir_file, analyze_source_retaining, load_matrix_input, with_checkout, write_ir,
};

pub fn run(command: Command) -> ExitCode {
    let result = match command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Diff(args) => cmd_diff(args),
        Command::Hotspots(args) => cmd_hotspots(args),
        Command::Ir(IrCommand::Export(args)) => cmd_ir_export(args),
        Command::Ir(IrCommand::Validate(args)) => cmd_ir_validate(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_empty_system(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn is_empty_system(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        matches!(cause.downcast_ref::<depmat_core::Error>(), Some(depmat_core::Error::EmptySystem))
    })
}

/// Defaults, then the config file, then command-line overrides.
fn settings_from(
    config: Option<&Path>,
    strict: bool,
    min_calls: Option<u32>,
) -> Result<AnalysisSettings> {
    let mut settings = match config {
        Some(path) => load_settings(path)?,
        None => AnalysisSettings::default(),
    };
    settings.strict |= strict;
    if let Some(n) = min_calls {
        settings.hotspots.min_calls = n;
    }
    settings.render.check()?;
    Ok(settings)
}

fn init_jobs(jobs: Option<u64>) -> Result<()> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .context("cannot size the worker pool")?;
    }
    Ok(())
}

const SUMMARY_KEYS: [&str; 8] = [
    "services",
    "endpoints",
    "calls",
    "matched",
    "unmatched",
    "ambiguous",
    "entities",
    "entityClasses",
];

fn summary_line(report: &AnalysisReport) -> String {
    let counts = report.summary();
    SUMMARY_KEYS
        .iter()
        .map(|key| format!("{key}={}", counts.get(key).copied().unwrap_or(0)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_outputs(
    dir: &Path,
    report: &AnalysisReport,
    formats: &[OutputFormat],
    settings: &AnalysisSettings,
) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let write = |name: String, text: String| -> Result<()> {
        fs::write(dir.join(&name), text).with_context(|| format!("cannot write {name}"))
    };
    let views: [(MatrixView, &str); 3] = [
        (prune_edm(&report.edm), "Endpoint dependency matrix"),
        (prune_ddm(&report.ddm), "Data dependency matrix"),
        (prune_sdm(&report.sdm), "Service dependency matrix"),
    ];
    if formats.contains(&OutputFormat::Json) {
        write("analysis.json".to_string(), emit_json(report))?;
    }
    if formats.contains(&OutputFormat::Csv) {
        for (view, _) in &views {
            write(format!("{}.csv", view.kind), emit_csv(view))?;
        }
        write("hotspots.csv".to_string(), emit_hotspots_csv(&report.hotspots))?;
    }
    if formats.contains(&OutputFormat::Svg) {
        for (view, title) in &views {
            let spec = HeatmapSpec::from_view(view, *title, settings.render.mark_extremes);
            write(format!("{}.svg", view.kind), emit_heatmap(&spec, &settings.render.colors))?;
        }
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    let settings = settings_from(args.config.as_deref(), args.strict, None)?;
    init_jobs(args.jobs)?;
    let report = match (&args.ir_in, &args.source) {
        (Some(ir_path), _) => analyze_ir_file(ir_path, &settings)?,
        (None, Some(source)) => {
            analyze_source_retaining(source, args.rev.as_deref(), &settings)?
        }
        (None, None) => bail!("analyze needs a source path or --ir-in"),
    };
    if let Some(path) = &args.ir_out {
        write_ir(&report, path)?;
    }
    write_outputs(&args.out, &report, &args.format, &settings)?;
    println!("{}", summary_line(&report));
    Ok(ExitCode::SUCCESS)
}

fn cmd_diff(args: DiffArgs) -> Result<ExitCode> {
    let settings = settings_from(args.config.as_deref(), args.strict, None)?;
    init_jobs(args.jobs)?;
    let kind = args.kind.kind();
    let old = load_matrix_input(&args.old, kind, args.old_rev.as_deref(), &settings)?;
    let new = load_matrix_input(&args.new, kind, args.new_rev.as_deref(), &settings)?;
    let delta = diff(old.as_any(), new.as_any())?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    fs::write(args.out.join("diff.json"), emit_diff_json(kind, &delta))
        .context("cannot write diff.json")?;
    print!("{}", format_diff_table(kind, &delta));
    Ok(if delta.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn hotspot_table(rows: &[HotspotRow], min_calls: u32) -> String {
    if rows.is_empty() {
        return format!("no endpoints with more than {min_calls} calls\n");
    }
    let mut table: Vec<[String; 5]> = vec![[
        "service".to_string(),
        "endpoint".to_string(),
        "method".to_string(),
        "calls".to_string(),
        "callers".to_string(),
    ]];
    for row in rows {
        table.push([
            row.endpoint.service.clone(),
            row.endpoint.path.render(),
            row.endpoint.method.as_str().to_string(),
            row.call_count.to_string(),
            row.distinct_callers.to_string(),
        ]);
    }
    let mut widths = [0usize; 5];
    for row in &table {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &table {
        let line: Vec<String> =
            row.iter().zip(widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn cmd_hotspots(args: HotspotsArgs) -> Result<ExitCode> {
    let settings = settings_from(args.config.as_deref(), args.strict, args.min_calls)?;
    init_jobs(args.jobs)?;
    let report = match (&args.ir_in, &args.source) {
        (Some(ir_path), _) => analyze_ir_file(ir_path, &settings)?,
        (None, Some(source)) => {
            analyze_source_retaining(source, args.rev.as_deref(), &settings)?
        }
        (None, None) => bail!("hotspots needs a source path or --ir-in"),
    };
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        fs::write(dir.join("hotspots.csv"), emit_hotspots_csv(&report.hotspots))
            .context("cannot write hotspots.csv")?;
    }
    print!("{}", hotspot_table(&report.hotspots, settings.hotspots.min_calls));
    Ok(ExitCode::SUCCESS)
}

fn cmd_ir_export(args: IrExportArgs) -> Result<ExitCode> {
    let settings = settings_from(args.config.as_deref(), false, None)?;
    init_jobs(args.jobs)?;
    with_checkout(&args.source, args.rev.as_deref(), |root, meta| {
        let (roots, _) = discover_services(root, &settings.discovery)?;
        let (ir, _) = build_ir(root, &roots, &settings.frontend, meta)?;
        save_ir(&ir, &args.out)?;
        Ok(())
    })?;
    println!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_ir_validate(args: IrValidateArgs) -> Result<ExitCode> {
    let ir = load_ir(&args.path)?;
    println!(
        "{}: ok ({} services, {} endpoints, {} calls, {} entities)",
        args.path.display(),
        ir.services.len(),
        ir.endpoints.len(),
        ir.calls.len(),
        ir.entities.len()
    );
    Ok(ExitCode::SUCCESS)
}
