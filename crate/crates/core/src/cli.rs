//! The `flatframe` command line.
//!
//! Exit codes: 0 certified or matched, 1 refuted or infeasible, 2 budget
//! exhausted, 3 input error (with a one-line diagnostic on stderr).

use std::io::Write;
use std::ops::ControlFlow;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arith;
use crate::catalog::{self, RootVector, SpaceDescriptor};
use crate::incidence::{self, ColumnBasis, EnumerationOptions, IncidenceMatrix};
use crate::matcher::{self, MatchResult, Mode};
use crate::oracle::{self, CertStatus, CertificationReport, CertifyOptions, Feasibility, WeakProfile};
use crate::singular::{self, Frame, SingularError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "flatframe", version, about = "Property E certification for symmetric spaces")]
pub struct Cli {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV (catalog, dims, txtable).
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalogued spaces, or print one descriptor.
    Catalog { space: Option<String> },
    /// Rank, dimension, column count and maximally singular rays.
    Dims { space: String },
    /// Dimension of Q_v for a vector such as `1,0,-1`.
    Qdim {
        space: String,
        #[arg(allow_hyphen_values = true)]
        vector: String,
    },
    /// Enumerate frames of maximally singular lines.
    Frames {
        space: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run the staged greedy matcher or the flow oracle on one matrix.
    Match {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, default_value = "repair")]
        mode: Mode,
        /// Use the SL(n+1,R) two-phase algorithm (needs a space and frame).
        #[arg(long, conflicts_with = "oracle")]
        two_phase: bool,
        /// Use the exact flow oracle instead of the greedy matcher.
        #[arg(long)]
        oracle: bool,
    },
    /// Certify or refute Property E.
    Certify {
        space: String,
        /// Enumerate frames even when counting already certifies.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Weak matching with a regular row.
    Weak {
        space: String,
        #[arg(long, default_value = "regular-row")]
        profile: WeakProfile,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Table of rank, dim, min q_dim, t_X and degree bounds.
    Txtable {
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Split a product frame into factor frames.
    Split {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long)]
        n1: usize,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Maximum number of frames examined.
    #[arg(long, env = "FLATFRAME_BUDGET")]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value = "on")]
    up_to_weyl: Toggle,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Toggle {
    On,
    Off,
}

#[derive(Args, Debug)]
struct MatrixInput {
    /// Matrix JSON, or a `frames --json` document (see `--index`).
    #[arg(long, conflicts_with_all = ["space", "frame"])]
    matrix: Option<PathBuf>,
    /// Frame to take from a `frames --json` document.
    #[arg(long)]
    index: Option<usize>,
    #[arg(long, requires = "frame")]
    space: Option<String>,
    /// Frame vectors, `1,0,0;1,1,0` or a JSON array of arrays.
    #[arg(long, requires = "space", allow_hyphen_values = true)]
    frame: Option<String>,
    /// Per-row demands, `3,3,2`.
    #[arg(long)]
    demands: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Parse `argv` and run; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "{line}");
            return EXIT_INPUT;
        }
    };
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    match dispatch(cli.command, format, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", one_line(&e));
            EXIT_INPUT
        }
    }
}

fn one_line(e: &anyhow::Error) -> String {
    e.chain().map(|c| c.to_string()).collect::<Vec<_>>().join(": ").replace('\n', " ")
}

fn dispatch(command: Command, format: Format, out: &mut dyn Write) -> Result<i32> {
    let csv_ok = matches!(command, Command::Catalog { .. } | Command::Dims { .. } | Command::Txtable { .. });
    if format == Format::Csv && !csv_ok {
        bail!("--csv is only available for catalog, dims and txtable");
    }
    match command {
        Command::Catalog { space } => cmd_catalog(space.as_deref(), format, out),
        Command::Dims { space } => cmd_dims(&space, format, out),
        Command::Qdim { space, vector } => cmd_qdim(&space, &vector, format, out),
        Command::Frames { space, search } => cmd_frames(&space, &search, format, out),
        Command::Match { input, mode, two_phase, oracle } => cmd_match(&input, mode, two_phase, oracle, format, out),
        Command::Certify { space, exhaustive, search, workers } => {
            let desc = space_of(&space)?;
            let opts = certify_options(&search, exhaustive, workers);
            report_out(oracle::certify_property_e(&desc, &opts), format, out)
        }
        Command::Weak { space, profile, search, workers } => {
            let desc = space_of(&space)?;
            let opts = certify_options(&search, true, workers);
            report_out(oracle::certify_weak_matching(&desc, profile, &opts), format, out)
        }
        Command::Txtable { rank } => cmd_txtable(rank, format, out),
        Command::Split { input, n1 } => cmd_split(&input, n1, format, out),
    }
}

fn space_of(id: &str) -> Result<SpaceDescriptor> {
    catalog::lookup(id).with_context(|| format!("space `{id}`"))
}

fn certify_options(search: &SearchArgs, exhaustive: bool, workers: usize) -> CertifyOptions {
    CertifyOptions {
        budget: search.budget,
        exhaustive,
        workers: workers.max(1),
        up_to_weyl: search.up_to_weyl == Toggle::On,
        ..Default::default()
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    s.split(',')
        .map(|t| t.trim().replace('−', "-").parse::<i64>().map_err(|e| anyhow!("bad integer `{}`: {e}", t.trim())))
        .collect()
}

fn parse_frame(s: &str) -> Result<Vec<Vec<i64>>> {
    let t = s.trim();
    if t.starts_with("[[") {
        return serde_json::from_str(t).context("frame JSON");
    }
    t.split(';').filter(|v| !v.trim().is_empty()).map(parse_ints).collect()
}

fn emit_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn fmt_vec(v: &[i64]) -> String {
    format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
}

/// Left-aligned columns separated by two spaces.
fn write_table(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for row in rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_catalog(space: Option<&str>, format: Format, out: &mut dyn Write) -> Result<i32> {
    if let Some(id) = space {
        let desc = space_of(id)?;
        match format {
            Format::Json => emit_json(out, &catalog::to_json(&desc))?,
            _ => {
                writeln!(out, "space    {}", desc.id)?;
                writeln!(out, "type     {}", desc.root_system.type_label())?;
                writeln!(out, "rank     {}", desc.rank)?;
                writeln!(out, "dim_x    {}", desc.dim_x)?;
                writeln!(out, "columns  {}", desc.column_count())?;
                let rows: Vec<Vec<String>> = desc
                    .root_system
                    .positive_roots
                    .iter()
                    .map(|r| vec![r.vector.to_string(), r.multiplicity.to_string()])
                    .collect();
                write_table(out, &["root", "mult"], &rows)?;
            }
        }
        return Ok(EXIT_OK);
    }
    let descs = catalog::catalog();
    let header = ["space", "type", "rank", "dim_x", "columns", "recorded_min_qdim", "consistent"];
    let rows: Vec<Vec<String>> = descs
        .iter()
        .map(|d| {
            vec![
                d.id.clone(),
                d.root_system.type_label(),
                d.rank.to_string(),
                d.dim_x.to_string(),
                d.column_count().to_string(),
                d.recorded_min_qdim.to_string(),
                catalog::multiplicity_table(d).is_ok().to_string(),
            ]
        })
        .collect();
    match format {
        Format::Json => {
            let items: Vec<Value> = descs
                .iter()
                .zip(&rows)
                .map(|(d, r)| {
                    json!({
                        "id": d.id, "type": r[1], "rank": d.rank, "dim_x": d.dim_x,
                        "columns": d.column_count(), "recorded_min_qdim": d.recorded_min_qdim,
                        "consistent": r[6] == "true",
                    })
                })
                .collect();
            emit_json(out, &Value::Array(items))?;
        }
        Format::Csv => write_csv(out, &header, &rows)?,
        Format::Text => write_table(out, &header, &rows)?,
    }
    Ok(EXIT_OK)
}

fn cmd_dims(id: &str, format: Format, out: &mut dyn Write) -> Result<i32> {
    let desc = space_of(id)?;
    let rays = singular::maximally_singular_rays(&desc);
    let rows: Vec<Vec<String>> = rays
        .iter()
        .map(|r| vec![(r.index + 1).to_string(), fmt_vec(&r.vector), r.q_dim.to_string()])
        .collect();
    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "space": desc.id,
                "type": desc.root_system.type_label(),
                "rank": desc.rank,
                "dim_x": desc.dim_x,
                "columns": desc.column_count(),
                "min_qdim": singular::min_q_dim(&desc),
                "t_x": singular::t_invariant(&desc),
                "rays": rays.iter().map(|r| json!({"index": r.index + 1, "vector": r.vector, "q_dim": r.q_dim})).collect::<Vec<_>>(),
            }),
        )?,
        Format::Csv => write_csv(out, &["ray", "vector", "q_dim"], &rows)?,
        Format::Text => {
            writeln!(out, "space    {}", desc.id)?;
            writeln!(out, "type     {}", desc.root_system.type_label())?;
            writeln!(out, "rank     {}", desc.rank)?;
            writeln!(out, "dim_x    {}", desc.dim_x)?;
            writeln!(out, "columns  {}", desc.column_count())?;
            write_table(out, &["ray", "vector", "q_dim"], &rows)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_qdim(id: &str, vector: &str, format: Format, out: &mut dyn Write) -> Result<i32> {
    let desc = space_of(id)?;
    let v = parse_ints(vector)?;
    let q = singular::q_dim(&desc, &RootVector::from_ints(&v))?;
    match format {
        Format::Json => emit_json(out, &json!({"space": desc.id, "vector": v, "q_dim": q}))?,
        _ => writeln!(out, "{q}")?,
    }
    Ok(EXIT_OK)
}

fn cmd_frames(id: &str, search: &SearchArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let desc = space_of(id)?;
    let opts = EnumerationOptions {
        up_to_weyl: search.up_to_weyl == Toggle::On,
        budget: search.budget,
        ..Default::default()
    };
    let lines = singular::singular_lines(&desc, opts.group_cap)?;
    let basis = ColumnBasis::new(&desc);
    let mut matrices = Vec::new();
    let (_, group_order, exceeded) = incidence::for_each_singular_frame(&desc, opts, |f| {
        matrices.push(incidence::matrix_from_lines(&desc, &basis, &lines, f));
        ControlFlow::Continue(())
    })?;
    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "space": desc.id,
                "lines": lines.len(),
                "group_order": group_order,
                "budget_exceeded": exceeded,
                "frames": matrices.iter().map(IncidenceMatrix::to_json).collect::<Vec<_>>(),
            }),
        )?,
        _ => {
            writeln!(out, "space        {}", desc.id)?;
            writeln!(out, "lines        {}", lines.len())?;
            writeln!(out, "group order  {group_order}")?;
            writeln!(out, "frames       {}", matrices.len())?;
            let rows: Vec<Vec<String>> = matrices
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let vs: Vec<String> = a.rows.iter().filter_map(|r| r.owner.as_deref().map(fmt_vec)).collect();
                    let pops: Vec<String> = a.popcounts().iter().map(usize::to_string).collect();
                    vec![i.to_string(), vs.join(" "), pops.join(",")]
                })
                .collect();
            write_table(out, &["frame", "vectors", "popcounts"], &rows)?;
        }
    }
    Ok(if exceeded { EXIT_BUDGET } else { EXIT_OK })
}

/// The matrix named by the input flags, with its space and frame when known.
fn load_matrix(input: &MatrixInput) -> Result<(IncidenceMatrix, Option<SpaceDescriptor>, Option<Frame>)> {
    let (mut a, desc, frame) = match (&input.matrix, &input.space, &input.frame) {
        (Some(path), _, _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let mut doc: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            if let Some(frames) = doc.get_mut("frames").and_then(Value::as_array_mut) {
                let i = input.index.unwrap_or(0);
                let n = frames.len();
                doc = frames.get(i).cloned().ok_or_else(|| anyhow!("frame index {i} out of range ({n} frames)"))?;
            } else if input.index.is_some() {
                bail!("--index needs a frames document");
            }
            let a = IncidenceMatrix::from_json(&doc)?;
            let desc = a.space.as_deref().map(space_of).transpose()?;
            let vectors: Vec<Vec<i64>> = a.rows.iter().filter_map(|r| r.owner.clone()).collect();
            let frame = match &desc {
                Some(d) if vectors.len() == a.rows.len() => Some(Frame::from_ints(d, &vectors)?),
                _ => None,
            };
            (a, desc, frame)
        }
        (None, Some(space), Some(frame)) => {
            let desc = space_of(space)?;
            let f = Frame::from_ints(&desc, &parse_frame(frame)?)?;
            let a = incidence::incidence_matrix(&desc, &f)?;
            (a, Some(desc), Some(f))
        }
        _ => bail!("give --matrix FILE or --space ID --frame VECTORS"),
    };
    if let Some(d) = &input.demands {
        let demands: Vec<u32> = parse_ints(d)?
            .into_iter()
            .map(|x| u32::try_from(x).map_err(|_| anyhow!("demand {x} out of range")))
            .collect::<Result<_>>()?;
        a = IncidenceMatrix::from_dense(&a.dense(), Some(demands))
            .map(|mut b| {
                b.space = a.space.clone();
                for (rb, ra) in b.rows.iter_mut().zip(&a.rows) {
                    rb.owner = ra.owner.clone();
                }
                b
            })?;
    }
    Ok((a, desc, frame))
}

fn write_match(out: &mut dyn Write, a: &IncidenceMatrix, r: &MatchResult) -> Result<()> {
    writeln!(out, "status   {:?}", r.status)?;
    writeln!(out, "mode     {:?}", r.mode)?;
    writeln!(out, "repairs  {}", r.repairs)?;
    for s in &r.trace {
        let remaining: Vec<String> = s.remaining.iter().map(|(row, n)| format!("{row}:{n}")).collect();
        writeln!(out, "stage {}: row {} takes {:?}  [N: {}]", s.stage, s.row, s.columns, remaining.join(" "))?;
        for x in &s.exchanges {
            writeln!(out, "  row {} gives back {} and takes {}", x.row, x.released, x.taken)?;
        }
    }
    if let Some(f) = &r.failure {
        writeln!(out, "failed at stage {}: row {} has {} of {} columns left", f.stage, f.row, f.remaining, f.demand)?;
    } else {
        for (i, cols) in r.assignment.iter().enumerate() {
            writeln!(out, "row {i} (demand {}): {:?}", a.demands[i], cols)?;
        }
    }
    Ok(())
}

fn cmd_match(
    input: &MatrixInput,
    mode: Mode,
    two_phase: bool,
    use_oracle: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32> {
    let (a, desc, frame) = load_matrix(input)?;
    if use_oracle {
        let result = oracle::feasible_matching(&a)?;
        match format {
            Format::Json => emit_json(out, &serde_json::to_value(&result)?)?,
            _ => match &result {
                Feasibility::Feasible(r) => write_match(out, &a, r)?,
                Feasibility::Infeasible { certificate: c } => {
                    writeln!(out, "status   infeasible")?;
                    writeln!(
                        out,
                        "rows {:?} see {} columns but demand {}",
                        c.row_subset, c.neighborhood_size, c.demand_sum
                    )?;
                }
            },
        }
        return Ok(if result.is_feasible() { EXIT_OK } else { EXIT_REFUTED });
    }
    if two_phase {
        let (Some(desc), Some(frame)) = (desc, frame) else {
            bail!("--two-phase needs a space and a frame");
        };
        let r = matcher::sl_two_phase(&desc, &frame)?;
        match format {
            Format::Json => emit_json(out, &serde_json::to_value(&r)?)?,
            _ => {
                if let Some(why) = &r.hypothesis_failure {
                    writeln!(out, "hypothesis failed: {why}")?;
                }
                writeln!(out, "escalated {}", r.escalated)?;
                write_match(out, &a, &r.result)?;
            }
        }
        return Ok(if r.result.is_matched() { EXIT_OK } else { EXIT_REFUTED });
    }
    let r = matcher::staged_greedy(&a, mode)?;
    match format {
        Format::Json => emit_json(out, &serde_json::to_value(&r)?)?,
        _ => write_match(out, &a, &r)?,
    }
    Ok(if r.is_matched() { EXIT_OK } else { EXIT_REFUTED })
}

fn report_out(
    report: std::result::Result<CertificationReport, oracle::OracleError>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32> {
    let report = match report {
        Ok(r) => r,
        Err(oracle::OracleError::Singular(SingularError::GroupTooLarge(n))) => {
            bail_budget(out, format, n)?;
            return Ok(EXIT_BUDGET);
        }
        Err(e) => return Err(e.into()),
    };
    match format {
        Format::Json => emit_json(out, &serde_json::to_value(&report)?)?,
        _ => write_report(out, &report, 0)?,
    }
    Ok(match report.status {
        CertStatus::Certified => EXIT_OK,
        CertStatus::Refuted => EXIT_REFUTED,
        CertStatus::BudgetExhausted => EXIT_BUDGET,
    })
}

fn bail_budget(out: &mut dyn Write, format: Format, n: usize) -> Result<()> {
    match format {
        Format::Json => emit_json(out, &json!({"status": "budget_exhausted", "reason": format!("group exceeds {n} elements")}))?,
        _ => writeln!(out, "status  budget_exhausted (group exceeds {n} elements)")?,
    }
    Ok(())
}

fn write_report(out: &mut dyn Write, r: &CertificationReport, depth: usize) -> Result<()> {
    let pad = "  ".repeat(depth);
    writeln!(out, "{pad}space            {}", r.space_id)?;
    writeln!(out, "{pad}status           {}", serde_json::to_value(r.status)?.as_str().unwrap_or_default())?;
    writeln!(out, "{pad}method           {}", serde_json::to_value(r.method)?.as_str().unwrap_or_default())?;
    writeln!(out, "{pad}rank / dim_x     {} / {}", r.rank, r.dim_x)?;
    writeln!(out, "{pad}columns          {}", r.columns)?;
    writeln!(out, "{pad}frames examined  {}", r.frames_examined)?;
    if let (Some(l), Some(g)) = (r.line_count, r.group_order) {
        writeln!(out, "{pad}lines / group    {l} / {g}")?;
    }
    if let Some(g) = r.greedy_agreement {
        writeln!(out, "{pad}greedy agreement {}/{} ({g:.4})", r.greedy_successes, r.feasible_frames)?;
    }
    for (k, v) in &r.facts {
        writeln!(out, "{pad}{k:<16} {v}")?;
    }
    if let Some(c) = &r.counterexample {
        let vs: Vec<String> = c.frame.iter().map(|v| fmt_vec(v)).collect();
        writeln!(out, "{pad}counterexample   {}", vs.join(" "))?;
        writeln!(
            out,
            "{pad}certificate      rows {:?} see {} columns < demand {}",
            c.certificate.row_subset, c.certificate.neighborhood_size, c.certificate.demand_sum
        )?;
    }
    if let Some(split) = &r.split {
        writeln!(out, "{pad}split            {split:?}")?;
    }
    for f in &r.factors {
        writeln!(out, "{pad}factor:")?;
        write_report(out, f, depth + 1)?;
    }
    Ok(())
}

fn cmd_txtable(rank: Option<usize>, format: Format, out: &mut dyn Write) -> Result<i32> {
    let mut descs: Vec<SpaceDescriptor> = catalog::catalog()
        .into_iter()
        .filter(|d| !d.is_product() && rank.is_none_or(|r| d.rank == r))
        .collect();
    descs.sort_by(|a, b| (a.family, &a.params).cmp(&(b.family, &b.params)));
    let header = ["space", "rank", "dim_x", "min_qdim", "t_X", "degree_bound", "exceptional_flag"];
    let rows: Vec<Vec<String>> = descs
        .iter()
        .map(|d| {
            let bound = singular::degree_bound(d).ok();
            vec![
                d.id.clone(),
                d.rank.to_string(),
                d.dim_x.to_string(),
                singular::min_q_dim(d).to_string(),
                singular::t_invariant(d).to_string(),
                bound.map_or(String::new(), |b| b.bound.to_string()),
                bound.map_or(String::new(), |b| b.exceptional.to_string()),
            ]
        })
        .collect();
    match format {
        Format::Csv => write_csv(out, &header, &rows)?,
        Format::Text => write_table(out, &header, &rows)?,
        Format::Json => {
            let items: Vec<Value> = descs
                .iter()
                .map(|d| {
                    let bound = singular::degree_bound(d).ok();
                    json!({
                        "space": d.id, "rank": d.rank, "dim_x": d.dim_x,
                        "min_qdim": singular::min_q_dim(d), "t_X": singular::t_invariant(d),
                        "degree_bound": bound.map(|b| b.bound),
                        "exceptional_flag": bound.map(|b| b.exceptional),
                    })
                })
                .collect();
            emit_json(out, &Value::Array(items))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_split(input: &MatrixInput, n1: usize, format: Format, out: &mut dyn Write) -> Result<i32> {
    let (a, desc, frame) = load_matrix(input)?;
    let vectors: Vec<Vec<i64>> = match (&desc, &frame) {
        (Some(d), Some(f)) => f.vectors.iter().map(|v| arith::primitive(&d.root_system.simple_evaluations(v))).collect(),
        _ => a.rows.iter().filter_map(|r| r.owner.clone()).collect(),
    };
    if vectors.len() != a.rows.len() {
        bail!("the matrix carries no frame vectors");
    }
    let tau = incidence::split_product_frame(&vectors, n1)?;
    match format {
        Format::Json => emit_json(out, &json!({"n1": n1, "tau": tau}))?,
        _ => writeln!(out, "tau {tau:?}")?,
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("flatframe").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn dims_sp6() {
        let (code, out, _) = run_str(&["dims", "Sp(6,R)"]);
        assert_eq!(code, 0);
        let q: Vec<&str> = out.lines().skip(6).map(|l| l.split_whitespace().last().unwrap()).collect();
        assert_eq!(q, vec!["5", "7", "6"]);
    }

    #[test]
    fn certify_sl4_refuted() {
        let (code, out, _) = run_str(&["certify", "SL(4,R)"]);
        assert_eq!(code, 1);
        assert!(out.contains("counting"));
    }

    #[test]
    fn input_errors_exit_3() {
        let (code, _, err) = run_str(&["dims", "XY(3)"]);
        assert_eq!(code, 3);
        assert_eq!(err.lines().count(), 1);
        let (code, _, _) = run_str(&["bogus"]);
        assert_eq!(code, 3);
        let (code, _, _) = run_str(&["match", "--space", "SL(3,R)", "--frame", "1,0,-1;2,-1,-1;0,0,0"]);
        assert_eq!(code, 3);
    }

    #[test]
    fn qdim_negative_vector() {
        let (code, out, _) = run_str(&["qdim", "SL(3,R)", "1,0,-1"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "3");
    }
}
