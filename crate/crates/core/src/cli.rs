//! The `lenscross` command line.
//!
//! Exit codes: 0 on success, 1 when a checked inequality fails, 2 on usage, parse or
//! precondition errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bisection::bisection_width_exact;
use crate::bounds::{check_drawing_bounds, check_lemma4, thrackle_check, Verdict};
use crate::crossing::{count_crossings, count_crossings_sweep};
use crate::decompose::{decompose, Action};
use crate::drawing::{load, save, Drawing};
use crate::error::{Error, Result};
use crate::generators::{Family, GeneratorSpec, DEFAULT_SEGMENTS_PER_ARC};
use crate::lens::{analyze, lenses};
use crate::rational::Rational;
use crate::replay::{replay_theorem1, sampling_statistics, Checkpoint};
use crate::svg::{render_svg, RenderOptions};

#[derive(Parser, Debug)]
#[command(name = "lenscross", version, about = "Exact checks for drawings of multigraphs with lenses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Semicircle,
    Nested,
    Convex,
    Random,
    Thrackle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Engine {
    Naive,
    Sweep,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a drawing.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: Option<usize>,
        /// Number of nested arcs (nested family).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Parallel companions to add (random family).
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, default_value_t = DEFAULT_SEGMENTS_PER_ARC)]
        segments: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check general position.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Count crossings.
    Cross {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Naive)]
        engine: Engine,
        #[arg(long)]
        json: bool,
    },
    /// List lenses.
    Lenses {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Separated / single-crossing verdict and every bound verdict.
    Check {
        file: PathBuf,
        /// Constant of the classical crossing lemma forms.
        #[arg(long, default_value = "1/64")]
        c_param: Rational,
        #[arg(long)]
        json: bool,
    },
    /// Exact bisection width (small instances only).
    Bisect {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Replay the lens-counting argument with sampled vertex subsets.
    Replay {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the bisection-based decomposition.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        k_override: Option<Rational>,
        #[arg(long)]
        json: bool,
    },
    /// Render to SVG.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        shade_lenses: bool,
        #[arg(long)]
        no_crossings: bool,
    },
}

impl Command {
    fn json(&self) -> bool {
        match self {
            Command::Validate { json, .. }
            | Command::Cross { json, .. }
            | Command::Lenses { json, .. }
            | Command::Check { json, .. }
            | Command::Bisect { json, .. }
            | Command::Replay { json, .. }
            | Command::Decompose { json, .. } => *json,
            Command::Gen { .. } | Command::Render { .. } => false,
        }
    }
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let json = cli.command.json();
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            if json {
                let obj = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&obj).unwrap());
            } else {
                let _ = writeln!(err, "error: {e}");
            }
            2
        }
    }
}

fn read_drawing(path: &Path) -> Result<Drawing> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    load(&bytes)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    let _ = writeln!(out, "{text}");
}

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{cell:<width$}", width = widths[i]))
            .collect();
        s.push_str(line.join("  ").trim_end());
        s.push('\n');
    }
    s
}

fn row(cells: &[&dyn ToString]) -> Vec<String> {
    cells.iter().map(|c| c.to_string()).collect()
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "FAILS",
        Verdict::NotApplicable => "n/a",
    }
}

fn checkpoint_table(cps: &[Checkpoint]) -> String {
    let mut rows = vec![row(&[&"checkpoint", &"lhs", &"", &"rhs", &"pass"])];
    for c in cps {
        let pass = match (c.pass, c.gating) {
            (true, _) => "ok",
            (false, true) => "FAIL",
            (false, false) => "fail (informational)",
        };
        rows.push(vec![c.name.clone(), c.lhs.clone(), c.relation.clone(), c.rhs.clone(), pass.into()]);
    }
    table(&rows)
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Gen {
            family,
            n,
            k,
            seed,
            extra,
            segments,
            output,
        } => {
            let (family, size) = match family {
                FamilyArg::Nested => (Family::NestedLenses, k.or(n.map(|n| n.saturating_sub(1)))),
                FamilyArg::Semicircle => (Family::Semicircle, n),
                FamilyArg::Convex => (Family::ConvexComplete, n),
                FamilyArg::Random => (Family::RandomSeparated, n),
                FamilyArg::Thrackle => (Family::StarThrackle, n),
            };
            let size = size.ok_or_else(|| Error::Domain("missing size: pass --n (or --k for nested)".into()))?;
            let spec = GeneratorSpec {
                seed,
                extra_parallel: extra,
                segments_per_arc: segments,
                ..GeneratorSpec::new(family, size)
            };
            let bytes = save(&spec.generate()?);
            match output {
                Some(path) => write_file(&path, &bytes)?,
                None => {
                    let _ = out.write_all(&bytes);
                }
            }
            Ok(0)
        }
        Command::Validate { file, json } => {
            let d = read_drawing(&file)?;
            let report = d.validate();
            if json {
                emit_json(out, &report);
            } else if report.ok {
                let _ = writeln!(out, "valid: n = {}, e = {}", d.n(), d.e());
            } else {
                let mut rows = vec![row(&[&"violation", &"edges", &"witness"])];
                for v in &report.violations {
                    let edges: Vec<String> = v.edges.iter().map(|e| e.to_string()).collect();
                    let witness = v
                        .witness
                        .as_ref()
                        .map_or(String::new(), |p| format!("({}, {})", p.x, p.y));
                    rows.push(vec![format!("{:?}", v.kind), edges.join(","), witness]);
                }
                let _ = write!(out, "invalid\n{}", table(&rows));
            }
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::Cross { file, engine, json } => {
            let d = read_drawing(&file)?;
            let r = match engine {
                Engine::Naive => count_crossings(&d)?,
                Engine::Sweep => count_crossings_sweep(&d)?,
            };
            if json {
                emit_json(out, &r);
            } else {
                let _ = writeln!(out, "total crossings: {}\nmax per pair: {}", r.total, r.max_pair);
                let mut rows = vec![row(&[&"edge", &"edge", &"crossings"])];
                for ((a, b), c) in &r.pair_counts {
                    rows.push(row(&[a, b, c]));
                }
                let _ = write!(out, "{}", table(&rows));
            }
            Ok(0)
        }
        Command::Lenses { file, json } => {
            let d = read_drawing(&file)?;
            let ls = lenses(&d)?;
            if json {
                emit_json(out, &ls);
            } else {
                let _ = writeln!(out, "{} lenses", ls.len());
                let mut rows = vec![row(&[&"edges", &"endpoints", &"size", &"interior"])];
                for l in &ls {
                    let interior: Vec<String> = l.interior_vertices.iter().map(|v| v.to_string()).collect();
                    rows.push(vec![
                        format!("{},{}", l.bounding_edges.0, l.bounding_edges.1),
                        format!("{},{}", l.endpoints.0, l.endpoints.1),
                        l.size.to_string(),
                        interior.join(","),
                    ]);
                }
                let _ = write!(out, "{}", table(&rows));
            }
            Ok(0)
        }
        Command::Check { file, c_param, json } => {
            let d = read_drawing(&file)?;
            let a = analyze(&d)?;
            let bounds = check_drawing_bounds(&d, &c_param)?;
            let thrackle = thrackle_check(&d)?;
            let ok = bounds.theorems_hold() && (!thrackle.premise_holds || thrackle.bound_holds);
            if json {
                emit_json(
                    out,
                    &json!({
                        "verdict": a.verdict,
                        "bounds": bounds,
                        "thrackle": thrackle,
                    }),
                );
            } else {
                let v = &bounds.verdicts;
                let mut rows = vec![
                    row(&[&"n", &bounds.n]),
                    row(&[&"e", &bounds.e]),
                    row(&[&"max multiplicity", &bounds.m]),
                    row(&[&"crossings", &bounds.cr_actual]),
                    row(&[&"separated", &a.verdict.separated]),
                    row(&[&"single_crossing", &a.verdict.single_crossing]),
                ];
                rows.push(row(&[&"crossing lemma (simple)", &verdict_str(v.eq1_classic)]));
                rows.push(row(&[&"crossing lemma (multiplicity)", &verdict_str(v.eq2_szekely)]));
                rows.push(row(&[&"multigraph crossing bound", &verdict_str(v.corollary2)]));
                rows.push(row(&[&"euler lower bound", &verdict_str(v.euler_lower)]));
                rows.push(row(&[&"theorem1", &verdict_str(v.theorem1)]));
                rows.push(row(&[&"thrackle premise", &thrackle.premise_holds]));
                rows.push(row(&[&"e <= 4n", &thrackle.bound_holds]));
                let _ = write!(out, "{}", table(&rows));
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Bisect { file, json } => {
            let d = read_drawing(&file)?;
            let r = bisection_width_exact(&d)?;
            let a = analyze(&d)?;
            let lemma4 = if a.is_separated_single_crossing() {
                Some(check_lemma4(&d)?)
            } else {
                None
            };
            let ok = r.parts_valid && lemma4.as_ref().is_none_or(|l| l.holds);
            if json {
                emit_json(out, &json!({"bisection": r, "lemma4": lemma4}));
            } else {
                let side = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                let mut rows = vec![
                    row(&[&"width", &r.width]),
                    row(&[&"V1", &side(&r.partition.0)]),
                    row(&[&"V2", &side(&r.partition.1)]),
                    row(&[&"deleted", &side(&r.deleted_edges)]),
                    row(&[&"parts valid", &r.parts_valid]),
                ];
                if let Some(l) = &lemma4 {
                    rows.push(vec![
                        "lemma4".into(),
                        format!("{} <= 22*sqrt({}) ~ {:.3}: {}", l.lhs, l.radicand, l.rhs, l.holds),
                    ]);
                }
                let _ = write!(out, "{}", table(&rows));
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Replay {
            file,
            seed,
            trials,
            json,
        } => {
            let d = read_drawing(&file)?;
            let trace = replay_theorem1(&d, seed, trials)?;
            let sampling = if trials > 0 {
                Some(sampling_statistics(&d, seed, trials, None)?)
            } else {
                None
            };
            if json {
                emit_json(out, &json!({"trace": trace, "sampling": sampling}));
            } else {
                let _ = writeln!(
                    out,
                    "branch {:?}, |L| = {}, k = {}, heavy vertex = {}, |L^o| = {}",
                    trace.branch,
                    trace.lens_total,
                    trace.chosen_k.map_or("-".into(), |k| k.to_string()),
                    trace.heavy_vertex.map_or("-".into(), |v| v.to_string()),
                    trace.origin_lens_count
                );
                if let Some(s) = &sampling {
                    let _ = writeln!(
                        out,
                        "mean |W| = {:.4} (pn = {}), within 4 SE: {}; mean empty lenses = {:.4} (expected {:.4})",
                        s.mean_w.to_f64(),
                        s.expected_w,
                        s.within_4se,
                        s.mean_empty_lenses.to_f64(),
                        s.expected_empty_exact.to_f64()
                    );
                }
                let _ = write!(out, "{}", checkpoint_table(&trace.checkpoints));
            }
            Ok(if trace.passed() { 0 } else { 1 })
        }
        Command::Decompose { file, k_override, json } => {
            let d = read_drawing(&file)?;
            let t = decompose(&d, k_override)?;
            if json {
                emit_json(out, &t);
            } else {
                let _ = writeln!(
                    out,
                    "k = {} (~{:e}), delta = {}, stop at step {} ({:?}), deleted {} edges, heavy edges {}",
                    t.k_threshold,
                    t.k_threshold_approx,
                    t.delta,
                    t.stop_step,
                    t.stop_reason,
                    t.edges_deleted_total,
                    t.final_heavy_edges
                );
                let mut rows = vec![row(&[&"step", &"v", &"e", &"c", &"action"])];
                for f in &t.families {
                    for m in &f.members {
                        let action = match &m.action {
                            Action::Kept => "kept".to_string(),
                            Action::Split { width, .. } => format!("split b={width}"),
                        };
                        rows.push(row(&[&f.step, &m.v, &m.e, &m.c, &action]));
                    }
                }
                let _ = write!(out, "{}", table(&rows));
                let _ = write!(out, "{}", checkpoint_table(&t.checkpoints));
            }
            Ok(if t.passed() { 0 } else { 1 })
        }
        Command::Render {
            file,
            output,
            shade_lenses,
            no_crossings,
        } => {
            let d = read_drawing(&file)?;
            let opts = RenderOptions {
                shade_lenses,
                mark_crossings: !no_crossings,
                ..RenderOptions::default()
            };
            write_file(&output, render_svg(&d, &opts)?.as_bytes())?;
            Ok(0)
        }
    }
}
