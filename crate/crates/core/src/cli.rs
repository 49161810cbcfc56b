//! Command line front end: graph and family files, reports and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::constructors::{
    automorphism_graph, canonical_lqck_family, classical_graph, complete_graph, nontracial_m2,
    rank_one_graph, trivial_graph, AutomorphismSpec, FamilyKind,
};
use crate::correspondence::{
    build_edge_correspondence, compact_residual_of, cp_isomorphism_of, fullness_of, left_kernel_of,
    tensor_over_adjacency,
};
use crate::error::{Error, Result};
use crate::fock::{build_fock, fock_relations, representation_residuals};
use crate::graph::{
    cp_by_modular_criterion, homomorphism_check, indicator_properties, is_completely_positive,
    quantum_sources_sinks_with_tolerance,
};
use crate::linalg::{CMatrix, C64};
use crate::relations::{
    classical_reduction, family_from_classical, lqck_residuals, qck_residuals, CkFamily,
};
use crate::space::{AlgebraElement, BlockStructure, DeltaState};
use crate::tolerance;
use crate::{LinearMapOnB, QuantumGraph};

/// Complex numbers are stored as `[re, im]`.
pub type Entry = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub blocks: Vec<usize>,
    pub psi: Vec<Vec<f64>>,
    /// Row-major matrix of `A` in the canonical basis.
    pub adjacency: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub k: usize,
    /// `s(e_p)` for every canonical unit, each a row-major `k × k` matrix.
    pub images: Vec<Vec<Vec<Entry>>>,
    /// Optional half-open column window `[start, end)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

fn to_rows(m: &CMatrix) -> Vec<Vec<Entry>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

fn from_rows(rows: &[Vec<Entry>], what: &str) -> Result<CMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::ShapeMismatch(format!("{what} has ragged rows")));
    }
    Ok(CMatrix::from_fn(r, c, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

impl GraphFile {
    pub fn from_graph(g: &QuantumGraph) -> Self {
        Self {
            blocks: g.structure().sizes().to_vec(),
            psi: g.psi().weights().to_vec(),
            adjacency: to_rows(g.matrix()),
            tol: None,
        }
    }

    pub fn to_graph(&self, tol: f64) -> Result<QuantumGraph> {
        let structure = BlockStructure::new(self.blocks.clone())?;
        let psi = DeltaState::new(structure.clone(), self.psi.clone())?;
        let m = from_rows(&self.adjacency, "adjacency")?;
        structure.check_dim(m.nrows(), "adjacency rows")?;
        structure.check_dim(m.ncols(), "adjacency columns")?;
        let a = LinearMapOnB::new(m)?;
        QuantumGraph::with_tolerance(psi, a, tol)
    }
}

impl FamilyFile {
    pub fn from_family(f: &CkFamily) -> Self {
        Self {
            k: f.k(),
            images: f.images().iter().map(to_rows).collect(),
            window: f.window().map(|w| [w.start, w.end]),
            tol: None,
        }
    }

    pub fn to_family(&self) -> Result<CkFamily> {
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(p, m)| from_rows(m, &format!("image {p}")))
            .collect::<Result<Vec<_>>>()?;
        let family = CkFamily::new(self.k, images)?;
        match self.window {
            Some([a, b]) => family.with_window(a..b),
            None => Ok(family),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Parser)]
#[command(
    name = "qgraph",
    version,
    about = "Checks finite quantum graphs, their edge correspondences and Cuntz-Krieger families"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a graph and report its indicator, positivity and correspondence data.
    Inspect { graph: PathBuf },
    /// Build the truncated Fock module and check the representation identities.
    Fock {
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Evaluate a family file against a graph.
    Check {
        graph: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Write a bundled graph or family fixture.
    Example {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Qck,
    Lqck,
    Classical,
}

/// A finished command: the machine-readable report, a human summary and
/// the checks that exceeded the tolerance.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub summary: Vec<String>,
    pub failures: Vec<String>,
}

impl Outcome {
    fn new(report: Value) -> Self {
        Self {
            report,
            summary: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    fn bound(&mut self, what: &str, residual: f64, tol: f64) {
        let ok = residual <= tol;
        self.line(format!(
            "{:<34} {residual:.3e} {}",
            what,
            if ok { "ok" } else { "FAIL" }
        ));
        if !ok {
            self.failures.push(what.to_string());
        }
    }
}

fn resolve_tol(file: Option<f64>) -> f64 {
    file.filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or_else(tolerance::from_env)
}

fn load_graph(path: &Path) -> Result<(QuantumGraph, f64, GraphFile)> {
    let file: GraphFile = read_json(path)?;
    let tol = resolve_tol(file.tol);
    let g = file.to_graph(tol)?;
    Ok((g, tol, file))
}

pub fn run_inspect(path: &Path) -> Result<Outcome> {
    let (g, tol, _) = load_graph(path)?;
    let mut out = Outcome::new(Value::Null);
    out.line(format!(
        "B = {:?}, dim {}, delta^2 = {:.12}",
        g.structure().sizes(),
        g.dim(),
        g.delta_sq()
    ));
    out.bound("Schur idempotency", g.schur_residual(), tol);
    let choi = is_completely_positive(g.psi(), g.adjacency())?;
    let modular = cp_by_modular_criterion(&g, tol);
    out.line(format!(
        "completely positive: Choi {} / modular {}",
        choi.completely_positive, modular
    ));
    if choi.completely_positive != modular {
        out.failures.push("CP criteria disagree".into());
    }
    let indicator = indicator_properties(&g);
    out.bound("indicator reconstruction", indicator.reconstruction, tol);
    out.bound("indicator idempotency", indicator.idempotency, tol);
    out.bound(
        "indicator modular self-adjointness",
        indicator.modular_self_adjointness,
        tol,
    );
    let ss = quantum_sources_sinks_with_tolerance(&g, tol);
    out.line(format!("sources {:?}, sinks {:?}", ss.sources, ss.sinks));

    let mut report = json!({
        "blocks": g.structure().sizes(),
        "dim": g.dim(),
        "delta_sq": g.delta_sq(),
        "tol": tol,
        "schur_residual": g.schur_residual(),
        "cp": { "choi": choi, "modular": modular },
        "indicator": indicator,
        "sources": ss.sources,
        "sinks": ss.sinks,
    });
    if choi.completely_positive {
        let edge = build_edge_correspondence(&g)?;
        let kernel = left_kernel_of(&edge);
        let fullness = fullness_of(&edge);
        let compact = compact_residual_of(&edge);
        let hom = homomorphism_check(&g)?;
        let cp = cp_isomorphism_of(&edge, &tensor_over_adjacency(&g)?);
        let faithful = kernel.kernel_dim == 0;
        out.line(format!(
            "dim E_G = {}, faithful {}, full {}",
            edge.dim(),
            faithful,
            fullness.full
        ));
        out.bound("left kernel vs prediction", kernel.distance, tol);
        out.bound("compact decomposition", compact, tol);
        let is_hom = hom.multiplicativity <= tol;
        out.line(format!(
            "A multiplicative {is_hom} ({:.3e}), indicator shift {:.3e}",
            hom.multiplicativity, hom.indicator_shift
        ));
        // the two residuals must vanish together
        if is_hom != (hom.indicator_shift <= tol) {
            out.failures.push("homomorphism criterion".into());
        }
        out.bound("E_G vs B (x)_A B", cp.max(), tol);
        let obj = report.as_object_mut().expect("object");
        obj.insert("edge_dim".into(), json!(edge.dim()));
        obj.insert("faithful".into(), json!(faithful));
        obj.insert("full".into(), json!(fullness.full));
        obj.insert("left_kernel".into(), json!(kernel));
        obj.insert("fullness".into(), json!(fullness));
        obj.insert("compact_residual".into(), json!(compact));
        obj.insert("homomorphism".into(), json!(hom));
        obj.insert("cp_isomorphism".into(), json!(cp));
    }
    out.report = report;
    Ok(out)
}

pub fn run_fock(path: &Path, levels: usize) -> Result<Outcome> {
    let (g, tol, _) = load_graph(path)?;
    let f = build_fock(&g, levels)?;
    let rep = representation_residuals(&f);
    let rel = fock_relations(&f);
    let mut out = Outcome::new(json!({
        "level_dims": f.level_dims(),
        "tol": tol,
        "balanced": f.balanced_residuals,
        "representation": rep,
        "relations": rel,
    }));
    out.line(format!("level dims {:?}", f.level_dims()));
    let balanced = f.balanced_residuals.iter().copied().fold(0.0, f64::max);
    out.bound("balanced tensor relation", balanced, tol);
    out.bound("T*T = pi(<,>)", rep.toeplitz, tol);
    out.bound("covariance (interior)", rep.covariance, tol);
    out.bound("annihilation", rep.annihilation, tol);
    out.bound("pi unital", rep.unital, tol);
    out.bound("pi *-homomorphism", rep.homomorphism, tol);
    out.bound("LQCK1 (interior)", rel.lqck[0], tol);
    out.bound("LQCK2 (interior)", rel.lqck[1], tol);
    out.bound("LQCK3 (interior)", rel.lqck[2], tol);
    out.bound("mu(T* x T) (interior)", rel.toeplitz_product, tol);
    out.bound("mu(T x T*) m* (interior)", rel.toeplitz_coproduct, tol);
    out.line(format!(
        "vacuum covariance defect {:.3e}",
        rep.vacuum_defect
    ));
    out.line(format!("LQCK3 with vacuum {:.3e}", rel.lqck3_with_vacuum));
    Ok(out)
}

pub fn run_check(graph: &Path, family: &Path, mode: Mode) -> Result<Outcome> {
    let file: FamilyFile = read_json(family)?;
    let (g, graph_tol, gf) = load_graph(graph)?;
    let tol = file
        .tol
        .filter(|t| t.is_finite() && *t > 0.0)
        .or(gf.tol)
        .map_or(graph_tol, |t| t);
    let s = file.to_family()?;
    let mut out = Outcome::new(Value::Null);
    match mode {
        Mode::Qck => {
            let r = qck_residuals(&s, &g)?;
            out.bound("QCK1", r.r1, tol);
            out.bound("QCK2", r.r2, tol);
            out.bound("QCK3", r.r3, tol);
            out.report = json!({ "mode": "qck", "tol": tol, "residuals": r });
        }
        Mode::Lqck => {
            let r = lqck_residuals(&s, &g)?;
            out.bound("LQCK1", r.lqck.r1, tol);
            out.bound("LQCK2", r.lqck.r2, tol);
            out.bound("LQCK3", r.lqck.r3, tol);
            out.bound("adapted vs coordinate-free", r.cross_agreement, tol);
            out.report = json!({ "mode": "lqck", "tol": tol, "residuals": r });
        }
        Mode::Classical => {
            let r = classical_reduction(&g, &s)?;
            out.bound("partial isometries", r.partial_isometry, tol);
            out.bound("Cuntz-Krieger", r.cuntz_krieger, tol);
            out.bound("range projections sum to 1", r.range_sum, tol);
            out.bound("scaling dictionary", r.dictionary, tol);
            out.report = json!({ "mode": "classical", "tol": tol, "residuals": r });
        }
    }
    Ok(out)
}

/// Names accepted by `example`.
pub const EXAMPLES: &[&str] = &[
    "complete-c2",
    "complete-m2",
    "complete-nontracial-m2",
    "trivial-m2",
    "rank-one-m2",
    "three-cycle",
    "two-cycle",
    "source-sink",
    "loop",
    "automorphism-c3",
    "family-trivial-m2",
    "family-rank-one-m2",
    "family-two-cycle",
    "family-loop",
];

fn diag_t() -> AlgebraElement {
    let s = BlockStructure::new(vec![2]).expect("valid");
    let t = CMatrix::from_diagonal(&crate::linalg::CVector::from_vec(vec![
        C64::new(2f64.sqrt(), 0.0),
        C64::new(0.0, 0.0),
    ]));
    AlgebraElement::from_blocks(&s, vec![t]).expect("shape")
}

fn tracial_m2() -> DeltaState {
    DeltaState::tracial(BlockStructure::new(vec![2]).expect("valid")).expect("trace")
}

fn two_cycle() -> Vec<Vec<f64>> {
    vec![vec![0.0, 1.0], vec![1.0, 0.0]]
}

pub fn example_graph(name: &str) -> Result<Option<QuantumGraph>> {
    let g = match name {
        "complete-c2" => complete_graph(&DeltaState::uniform(2)?)?,
        "complete-m2" => complete_graph(&tracial_m2())?,
        "complete-nontracial-m2" => complete_graph(&nontracial_m2())?,
        "trivial-m2" => trivial_graph(&tracial_m2())?,
        "rank-one-m2" => rank_one_graph(&tracial_m2(), &diag_t())?,
        "three-cycle" => classical_graph(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ])?,
        "two-cycle" => classical_graph(&two_cycle())?,
        "source-sink" => classical_graph(&[vec![0.0, 1.0], vec![0.0, 0.0]])?,
        "loop" => classical_graph(&[vec![1.0]])?,
        "automorphism-c3" => {
            let psi = DeltaState::uniform(3)?;
            let spec = AutomorphismSpec::permutation(psi.structure(), vec![1, 2, 0]);
            automorphism_graph(&psi, &spec)?.0
        }
        _ => return Ok(None),
    };
    Ok(Some(g))
}

pub fn example_family(name: &str) -> Result<Option<CkFamily>> {
    let one = CMatrix::identity(1, 1);
    let f = match name {
        "family-trivial-m2" => canonical_lqck_family(&tracial_m2(), &FamilyKind::Trivial, &one)?,
        "family-rank-one-m2" => {
            canonical_lqck_family(&tracial_m2(), &FamilyKind::RankOne(diag_t()), &one)?
        }
        "family-two-cycle" => {
            let e12 = CMatrix::from_fn(2, 2, |i, j| {
                C64::new(if (i, j) == (0, 1) { 1.0 } else { 0.0 }, 0.0)
            });
            family_from_classical(
                &classical_graph(&two_cycle())?,
                &[e12.clone(), e12.transpose()],
            )?
        }
        "family-loop" => family_from_classical(&classical_graph(&[vec![1.0]])?, &[one])?,
        _ => return Ok(None),
    };
    Ok(Some(f))
}

pub fn run_example(name: &str, out_path: &Path) -> Result<Outcome> {
    let kind = if let Some(g) = example_graph(name)? {
        write_json(out_path, &GraphFile::from_graph(&g))?;
        "graph"
    } else if let Some(f) = example_family(name)? {
        write_json(out_path, &FamilyFile::from_family(&f))?;
        "family"
    } else {
        return Err(Error::Parse(format!(
            "unknown example {name:?}; expected one of {}",
            EXAMPLES.join(", ")
        )));
    };
    let mut out = Outcome::new(
        json!({ "example": name, "kind": kind, "path": out_path.display().to_string() }),
    );
    out.line(format!("wrote {kind} {name} to {}", out_path.display()));
    Ok(out)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Inspect { graph } => run_inspect(graph),
        Command::Fock { graph, levels } => run_fock(graph, *levels),
        Command::Check {
            graph,
            family,
            mode,
        } => run_check(graph, family, *mode),
        Command::Example { name, out } => run_example(name, out),
    }
}

/// Parses the process arguments, runs the command and maps the result to
/// an exit code: 0 pass, 1 input or validation error, 2 residual above
/// tolerance. Reports go to stdout as JSON, summaries to stderr.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            for line in &out.summary {
                eprintln!("{line}");
            }
            let status = if out.failures.is_empty() {
                "pass"
            } else {
                "fail"
            };
            let doc = json!({ "status": status, "failures": out.failures, "report": out.report });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
            if out.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!("{} check(s) above tolerance", out.failures.len());
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error [{}]: {e}", e.kind());
            let doc = json!({ "status": "error", "error": e.kind(), "message": e.to_string() });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
            ExitCode::from(1)
        }
    }
}
