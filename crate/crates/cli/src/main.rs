use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use sofic_tiles::graph::{check_resolving, determinize_forward, LabeledGraph};
use sofic_tiles::json;
use sofic_tiles::measure::{self, MeasureVector};
use sofic_tiles::oracle;
use sofic_tiles::rational::format_rat;
use sofic_tiles::tile::{self, TileReport};
use sofic_tiles::zn::{compute_nucleus, ExpandingSystem, MooreDiagram};
use sofic_tiles::{Error, ErrorKind, ProbabilityVector, Result};

#[derive(Parser)]
#[command(name = "sofic", version, about = "Exact measures of sofic shifts and self-affine tiles")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Measure number of a right-resolving graph and a witness word.
    Meas { graph: PathBuf },
    /// Measure number, F and B vectors and the component breakdown.
    Report {
        graph: PathBuf,
        #[arg(long)]
        weights: Option<String>,
    },
    /// Measures of the sets F_v.
    MuF {
        graph: PathBuf,
        /// Letter weights, e.g. `0=1/3,1=2/3`. Uniform by default.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Measures of the sets B_v.
    MuB {
        graph: PathBuf,
        #[arg(long)]
        weights: Option<String>,
    },
    /// Subset construction seeded from every vertex.
    Determinize { graph: PathBuf },
    /// Whether every finite word labels a path.
    FullShift { graph: PathBuf },
    /// Nucleus diagram of an affine pair.
    Nucleus { pair: PathBuf },
    /// Tile report of an affine pair, or of a nucleus document with `--nucleus`.
    Tile {
        #[arg(required_unless_present = "nucleus", conflicts_with = "nucleus")]
        pair: Option<PathBuf>,
        #[arg(long)]
        nucleus: Option<PathBuf>,
    },
    /// Box-counting estimate of the tile's Lebesgue measure.
    Oracle {
        pair: PathBuf,
        #[arg(long)]
        level: u32,
        /// Cell side, as a decimal or as `2^-6`.
        #[arg(long, value_parser = parse_cell)]
        cell: f64,
    },
    /// Occupancy bitmap of a planar tile as binary PGM.
    Raster {
        pair: PathBuf,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        res: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Also write the grid as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn parse_cell(s: &str) -> std::result::Result<f64, String> {
    let value = match s.split_once('^') {
        Some((base, exp)) => {
            let b: f64 = base.trim().parse().map_err(|_| format!("bad cell `{s}`"))?;
            let e: i32 = exp.trim().parse().map_err(|_| format!("bad cell `{s}`"))?;
            b.powi(e)
        }
        None => s.trim().parse().map_err(|_| format!("bad cell `{s}`"))?,
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(format!("cell must be positive, got `{s}`"))
    }
}

/// What a command produced: a JSON value and its plain-text rendering.
struct Output {
    json: Value,
    text: String,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<LabeledGraph> {
    json::parse_graph(&read(path)?)
}

fn load_system(path: &Path) -> Result<ExpandingSystem> {
    ExpandingSystem::new(json::parse_pair(&read(path)?)?)
}

fn weights(g: &LabeledGraph, text: Option<&str>) -> Result<ProbabilityVector> {
    match text {
        Some(s) => ProbabilityVector::parse(g.alphabet(), s),
        None => Ok(ProbabilityVector::uniform(g.alphabet())),
    }
}

fn resolving(g: &LabeledGraph) -> bool {
    g.is_letter_labeled() && check_resolving(g).is_right_resolving()
}

fn vector_text(v: &MeasureVector) -> String {
    let width = v.vertices.iter().map(String::len).max().unwrap_or(0);
    v.iter()
        .map(|(name, r)| format!("{name:<width$}  {}\n", format_rat(r)))
        .collect()
}

fn tile_text(r: &TileReport) -> String {
    let mut s = format!(
        "tile measure: {}\nopen set condition: {}\nneighbors: {}\n",
        r.tile_measure,
        r.osc,
        r.neighbors.len()
    );
    if let Some(rows) = &r.intersections {
        let width = rows.iter().map(|(a, _)| a.len()).max().unwrap_or(1).max(1);
        s.push_str(&format!("{:<width$}  overlap\n", "a"));
        for (a, v) in rows {
            s.push_str(&format!("{a:<width$}  {}\n", format_rat(v)));
        }
    } else {
        for n in &r.neighbors {
            s.push_str(&format!("  {n}\n"));
        }
    }
    s
}

fn nucleus_text(nuc: &MooreDiagram) -> String {
    let mut s = format!("{} states over {} letters\n", nuc.states().len(), nuc.letters());
    for (g, name) in nuc.states().iter().enumerate() {
        for (x, t) in nuc.transitions(g).iter().enumerate() {
            s.push_str(&format!("{name} --{x}/{}--> {}\n", t.out, nuc.states()[t.next]));
        }
    }
    s
}

fn run(command: Command) -> Result<Output> {
    Ok(match command {
        Command::Meas { graph } => {
            let g = load_graph(&graph)?;
            let m = measure::measure_number(&g)?;
            Output {
                text: format!(
                    "measure number: {}\nwitness: {}\n",
                    m.value,
                    g.alphabet().format_word(&m.witness)
                ),
                json: json::measure_number_to_value(&g, &m),
            }
        }
        Command::Report { graph, weights: w } => {
            let g = load_graph(&graph)?;
            let p = weights(&g, w.as_deref())?;
            let r = measure::measure_report(&g, &p)?;
            Output {
                text: format!(
                    "measure number: {}\nwitness: {}\nF:\n{}B:\n{}",
                    r.measure_number,
                    g.alphabet().format_word(&r.witness),
                    vector_text(&r.f),
                    vector_text(&r.b)
                ),
                json: json::measure_report_to_value(&g, &r),
            }
        }
        Command::MuF { graph, weights: w } => {
            let g = load_graph(&graph)?;
            let p = weights(&g, w.as_deref())?;
            let v = if resolving(&g) { measure::mu_f(&g, &p)? } else { measure::mu_f_general(&g, &p)? };
            Output {
                text: vector_text(&v),
                json: json::vector_to_value(&v),
            }
        }
        Command::MuB { graph, weights: w } => {
            let g = load_graph(&graph)?;
            let p = weights(&g, w.as_deref())?;
            let v = if resolving(&g) { measure::mu_b(&g, &p)? } else { measure::mu_b_general(&g, &p)? };
            Output {
                text: vector_text(&v),
                json: json::vector_to_value(&v),
            }
        }
        Command::Determinize { graph } => {
            let g = load_graph(&graph)?;
            let d = determinize_forward(&g)?;
            let value = json::determinized_to_value(&g, &d);
            let mut text = String::new();
            for e in d.graph.edges() {
                text.push_str(&format!(
                    "{} --{}--> {}\n",
                    d.graph.vertex_name(e.from),
                    d.graph.alphabet().format_word(&e.label),
                    d.graph.vertex_name(e.to)
                ));
            }
            Output { json: value, text }
        }
        Command::FullShift { graph } => {
            let full = measure::is_full_shift(&load_graph(&graph)?)?;
            Output {
                json: serde_json::json!({ "full_shift": full }),
                text: format!("full shift: {full}\n"),
            }
        }
        Command::Nucleus { pair } => {
            let nuc = compute_nucleus(&load_system(&pair)?)?;
            Output {
                json: json::nucleus_to_value(&nuc.diagram),
                text: nucleus_text(&nuc.diagram),
            }
        }
        Command::Tile { pair, nucleus } => {
            let report = match (pair, nucleus) {
                (_, Some(path)) => tile::diagram_report(&json::parse_nucleus(&read(&path)?)?)?,
                (Some(path), None) => tile::tile_report(&load_system(&path)?)?,
                (None, None) => unreachable!("clap requires one input"),
            };
            Output {
                json: json::tile_report_to_value(&report),
                text: tile_text(&report),
            }
        }
        Command::Oracle { pair, level, cell } => {
            let e = oracle::estimate_lebesgue(&load_system(&pair)?, level, cell)?;
            Output {
                text: format!(
                    "estimate: {}\ncell: {}\npiece diameter bound: {}\ncells: {}\n",
                    e.estimate, e.cell, e.piece_diameter_bound, e.cells
                ),
                json: json::estimate_to_value(&e),
            }
        }
        Command::Raster {
            pair,
            level,
            res,
            output,
            csv,
        } => {
            let r = oracle::raster(&load_system(&pair)?, level, res)?;
            r.write_pgm(io::BufWriter::new(fs::File::create(&output)?))?;
            if let Some(path) = &csv {
                r.write_csv(io::BufWriter::new(fs::File::create(path)?))?;
            }
            let value = serde_json::json!({
                "width": r.width,
                "height": r.height,
                "occupied": r.occupied_count(),
                "area": r.area(),
                "pgm": output.display().to_string(),
            });
            Output {
                text: format!(
                    "{}x{} raster, {} occupied pixels, area {}\n",
                    r.width,
                    r.height,
                    r.occupied_count(),
                    r.area()
                ),
                json: value,
            }
        }
    })
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Input => 2,
        ErrorKind::Resource => 3,
        ErrorKind::Internal => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&out.json).expect("reports serialize");
                    s.push('\n');
                    s
                }
                Format::Text => out.text,
            };
            let mut stdout = io::stdout().lock();
            if stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let kind = e.kind();
            let tag = match kind {
                ErrorKind::Input => "input",
                ErrorKind::Resource => "resource",
                ErrorKind::Internal => "internal",
            };
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{tag}]: {msg}");
            ExitCode::from(exit_code(kind))
        }
    }
}
