//! `turaev` — exact invariants of mesh Legendrians from bicolored trivalent
//! ribbon graphs: graph statistics, torsion reports, handle-slide edge
//! labels, identity verification suites, pairwise comparison, and the
//! series invariant r₁.
//!
//! Exit codes: 0 success, 1 domain errors (undefined torsion, no valid cut
//! edge, unreadable input), 2 file syntax/semantic errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use turaev::cocycle::{euler_number_clutching, euler_number_cocycle};
use turaev::mesh::{
    distinguish, higher_torsion_r1, legendrian_turaev_torsion, solve_edge_labels,
    solve_edge_labels_auto,
};
use turaev::ribbon::RibbonGraph;
use turaev::ring::RingElem;
use turaev::slides::{
    random_unit, verify_edge_identity, verify_exchange, verify_vertex_identity, SquareMatrixR,
};

use turaev_cli::doc::{parse_graph, render, resolve_cut, DocError};

#[derive(Parser)]
#[command(name = "turaev", version, about = "Exact invariants of mesh Legendrians from ribbon graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print V/E/F counts, Euler characteristic, genus, and winding number
    Info {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compute the torsion report: n, epsilon, tau, Reidemeister class
    Torsion {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Solve the handle-slide edge labels and the closure exponent
    Labels {
        file: PathBuf,
        /// Cut edge: a half-edge name or `nameA-nameB` (default: first valid)
        #[arg(long)]
        cut: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Re-render a graph file in canonical form
    Render {
        file: PathBuf,
    },
    /// Run the identity verification suites
    Verify {
        /// Graph files for the Euler-number cross-check
        files: Vec<PathBuf>,
        /// Also cross-check this many random graphs
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// Seed for the random units and graphs
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Compare two graphs by |w| and the exact torsion
    Compare {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the series invariant r1(n, power)
    R1 {
        n: u32,
        power: i64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

/// Print one line to stdout; when the downstream pipe has closed (`head`,
/// `less` quitting) the process ends quietly instead of panicking.
fn out(line: std::fmt::Arguments) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if writeln!(stdout, "{line}").is_err() {
        std::process::exit(0);
    }
}

/// Like [`out`] but without the trailing newline.
fn out_raw(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if write!(stdout, "{text}").is_err() {
        std::process::exit(0);
    }
}

macro_rules! outln {
    ($($t:tt)*) => { out(format_args!($($t)*)) };
}

/// A failed command: message for stderr plus the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Failure {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<turaev::mesh::MeshError> for Failure {
    fn from(e: turaev::mesh::MeshError) -> Failure {
        Failure::domain(e.to_string())
    }
}

fn load_graph(path: &Path) -> Result<RibbonGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::domain(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_graph(&text)?.graph)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Info { file, json } => cmd_info(&file, json),
        Command::Torsion { file, json } => cmd_torsion(&file, json),
        Command::Labels { file, cut, json } => cmd_labels(&file, cut.as_deref(), json),
        Command::Render { file } => {
            let g = load_graph(&file)?;
            out_raw(&render(&g));
            Ok(())
        }
        Command::Verify { files, random, seed, json } => cmd_verify(&files, random, seed, json),
        Command::Compare { file1, file2, json } => cmd_compare(&file1, &file2, json),
        Command::R1 { n, power, tol, json } => cmd_r1(n, power, tol, json),
    }
}

fn cmd_info(file: &Path, json: bool) -> Result<(), Failure> {
    let g = load_graph(file)?;
    let inv = g.invariants();
    if json {
        outln!("{}", serde_json::to_string_pretty(&inv).expect("serializable"));
    } else {
        outln!(
            "V={} E={} F={} chi={} genus={} w={}",
            inv.vertex_count,
            inv.edge_count,
            inv.face_count,
            inv.euler_characteristic,
            inv.genus,
            inv.winding
        );
    }
    Ok(())
}

fn cmd_torsion(file: &Path, json: bool) -> Result<(), Failure> {
    let g = load_graph(file)?;
    let report = legendrian_turaev_torsion(&g)?;
    if json {
        outln!("{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable"));
    } else {
        outln!(
            "n={} epsilon={:+} inconclusive={}",
            report.n,
            report.epsilon.to_int(),
            report.inconclusive
        );
        outln!("tau (up to sign): {}", report.tau.canonical_rep());
        outln!("reidemeister rep: {}", report.reidemeister_class.value);
    }
    Ok(())
}

fn cmd_labels(file: &Path, cut: Option<&str>, json: bool) -> Result<(), Failure> {
    let g = load_graph(file)?;
    let labeling = match cut {
        Some(spec) => {
            let cut = resolve_cut(&g, spec).map_err(Failure::domain)?;
            solve_edge_labels(&g, cut)?
        }
        None => solve_edge_labels_auto(&g)?,
    };
    if json {
        outln!(
            "{}",
            serde_json::to_string_pretty(&labeling.to_json(&g)).expect("serializable")
        );
    } else {
        outln!(
            "cut edge: {} - {}",
            g.half_edge_name(labeling.cut_edge.0),
            g.half_edge_name(labeling.cut_edge.1)
        );
        outln!("closure: u^{} = v^{}", labeling.closure_exponent, g.winding());
        outln!("v = u^{} (up to sign)", labeling.v.u_exp);
        let exps = |triple: &[turaev::ring::UnitUpToSign; 3]| {
            triple.iter().map(|u| u.u_exp.to_string()).collect::<Vec<_>>().join(" ")
        };
        for vl in &labeling.vertex_labels {
            outln!(
                "{}: a=[{}] b=[{}] c=[{}]",
                g.vertex_name(vl.vertex),
                exps(&vl.a),
                exps(&vl.b),
                exps(&vl.c)
            );
        }
    }
    Ok(())
}

fn cmd_verify(files: &[PathBuf], random: usize, seed: u64, json: bool) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_ok = true;
    let mut lines: Vec<String> = Vec::new();

    let mut edge_ok = true;
    for _ in 0..100 {
        let a = random_unit(&mut rng);
        let b = random_unit(&mut rng);
        edge_ok &= verify_edge_identity(&a, &b).ok;
    }
    lines.push(format!(
        "edge identity: {} (100 random unit pairs)",
        if edge_ok { "ok" } else { "FAIL" }
    ));
    all_ok &= edge_ok;

    let mut vertex_ok = true;
    for _ in 0..100 {
        let b1 = random_unit(&mut rng);
        let b2 = random_unit(&mut rng);
        let b3 = random_unit(&mut rng);
        vertex_ok &= verify_vertex_identity(&b1, &b2, &b3).ok;
    }
    lines.push(format!(
        "vertex identity: {} (100 random unit triples)",
        if vertex_ok { "ok" } else { "FAIL" }
    ));
    all_ok &= vertex_ok;

    // exchange on a fixed matrix with a zero slot, random unit labels
    let mut exchange_ok = true;
    for _ in 0..25 {
        let s = random_unit(&mut rng);
        let m = SquareMatrixR::from_rows(vec![
            vec![RingElem::one(), RingElem::zero(), random_unit(&mut rng)],
            vec![random_unit(&mut rng), RingElem::one(), RingElem::zero()],
            vec![RingElem::zero(), random_unit(&mut rng), RingElem::one()],
        ]);
        exchange_ok &= verify_exchange(&m, 0, 1, &s)
            .map_err(|e| Failure::domain(e.to_string()))?;
    }
    lines.push(format!(
        "exchange no-change: {} (25 random labelled matrices)",
        if exchange_ok { "ok" } else { "FAIL" }
    ));
    all_ok &= exchange_ok;

    let mut graphs: Vec<(String, RibbonGraph)> = Vec::new();
    for file in files {
        graphs.push((file.display().to_string(), load_graph(file)?));
    }
    for i in 0..random {
        let g = RibbonGraph::random(6, seed.wrapping_add(i as u64));
        graphs.push((format!("random-{i}"), g));
    }
    let mut euler_ok = true;
    for (name, g) in &graphs {
        let cocycle = euler_number_cocycle(g).map_err(|e| Failure::domain(e.to_string()))?;
        let clutching = euler_number_clutching(g);
        if cocycle != clutching || cocycle != g.winding() {
            euler_ok = false;
            lines.push(format!(
                "  {name}: cocycle={cocycle} clutching={clutching} w={}",
                g.winding()
            ));
        }
    }
    lines.push(format!(
        "euler cross-check: {} ({} graphs)",
        if euler_ok { "ok" } else { "FAIL" },
        graphs.len()
    ));
    all_ok &= euler_ok;

    if json {
        let value = json!({
            "edge_identity": edge_ok,
            "vertex_identity": vertex_ok,
            "exchange_no_change": exchange_ok,
            "euler_cross_check": euler_ok,
            "graphs_checked": graphs.len(),
            "ok": all_ok,
        });
        outln!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        for line in &lines {
            outln!("{line}");
        }
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::domain("verification failed"))
    }
}

fn cmd_compare(file1: &Path, file2: &Path, json: bool) -> Result<(), Failure> {
    let g1 = load_graph(file1)?;
    let g2 = load_graph(file2)?;
    let verdict = distinguish(&g1, &g2)?;
    if json {
        outln!(
            "{}",
            serde_json::to_string_pretty(&json!({ "result": verdict.to_string() }))
                .expect("serializable")
        );
    } else {
        outln!("{verdict}");
    }
    Ok(())
}

fn cmd_r1(n: u32, power: i64, tol: f64, json: bool) -> Result<(), Failure> {
    let value = higher_torsion_r1(n, power, tol)?;
    if json {
        outln!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "n": n,
                "power": power,
                "tol": tol,
                "value": value,
            }))
            .expect("serializable")
        );
    } else {
        outln!("{value}");
    }
    Ok(())
}
