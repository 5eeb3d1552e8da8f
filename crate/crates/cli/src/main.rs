use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use glkh::cube::{validate_cube_parity, AssignmentKind, Convention, CubeError, StateCube, WARN_CUBE_VERTICES};
use glkh::fixtures;
use glkh::graph::{LabeledGraph, UnorientedGraph};
use glkh::homology::{align_and_compare, khovanov, Coefficients, HomologyError, KhOptions};
use glkh::moves::{apply_script, MoveScript};
use glkh::pu::{find_pu_orientation, is_pu, PuError, PuMethod};
use glkh::validate::{random_subjects, validate_many, Report, ValidateOptions};

#[derive(Parser)]
#[command(name = "glkh", version, about = "Principal unimodularity and odd Khovanov homology of bipartite graph-links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide principal unimodularity; print a witness if it fails.
    CheckPu {
        file: PathBuf,
        /// minors-b, minors-a, state-dets or all
        #[arg(long, default_value = "minors-b")]
        method: String,
    },
    /// Find a PU orientation of a graph given with `uedge` lines.
    Orient { file: PathBuf },
    /// Print the homology table `h <i> <q> <betti> <torsion|->`.
    Homology {
        file: PathBuf,
        #[command(flatten)]
        kh: KhArgs,
        #[arg(long, default_value = "z")]
        coeffs: Coefficients,
    },
    /// Apply a move script and write the resulting graph.
    Apply {
        file: PathBuf,
        script: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare homology before and after a move script.
    Invariance {
        file: PathBuf,
        script: PathBuf,
        #[command(flatten)]
        kh: KhArgs,
    },
    /// Face class statistics and the cube parity report.
    Faces {
        file: PathBuf,
        #[arg(long, default_value = "signed")]
        convention: Convention,
    },
    /// Run the invariant battery on a file, on random graphs, or on the shipped fixtures.
    Validate {
        file: Option<PathBuf>,
        /// Random graphs: max vertex count, sample count, seed.
        #[arg(long, num_args = 3, value_names = ["N", "K", "SEED"], conflicts_with = "file")]
        random: Option<Vec<u64>>,
        #[arg(long, default_value = "signed")]
        convention: Convention,
        /// Corrupt one edge sign; the battery must then fail.
        #[arg(long)]
        negative_control: bool,
        /// Moves sampled per graph for the invariance check.
        #[arg(long, default_value_t = 8)]
        moves: usize,
    },
}

#[derive(clap::Args)]
struct KhArgs {
    #[arg(long = "assignment-type", default_value = "X")]
    kind: AssignmentKind,
    #[arg(long, default_value = "signed")]
    convention: Convention,
}

/// Exit status with a message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn negative(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<HomologyError> for Failure {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::NotPu(_) => Failure::negative(e.to_string()),
            HomologyError::Cube(CubeError::SizeBound(_)) => Failure::usage(e.to_string()),
            _ => Failure::internal(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<LabeledGraph, Failure> {
    LabeledGraph::parse(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_script(path: &Path) -> Result<MoveScript, Failure> {
    MoveScript::parse(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn warn_size(g: &LabeledGraph) {
    if g.n() > WARN_CUBE_VERTICES {
        eprintln!("warning: {} vertices; the state cube has 2^{} corners", g.n(), g.n());
    }
}

fn check_pu(file: &Path, method: &str) -> CmdResult {
    let g = load(file)?;
    let methods: Vec<PuMethod> = if method == "all" {
        PuMethod::ALL.to_vec()
    } else {
        vec![method.parse().map_err(Failure::usage)?]
    };
    let verdicts: Vec<_> = methods.iter().map(|&m| (m, is_pu(&g, m))).collect();
    if verdicts.iter().any(|(_, v)| v.is_ok() != verdicts[0].1.is_ok()) {
        return Err(Failure::internal(format!("methods disagree: {verdicts:?}")));
    }
    match &verdicts[0].1 {
        Ok(()) => {
            println!("PU");
            Ok(())
        }
        Err(c) => {
            println!("NOT PU: {}", c.describe(&g));
            Err(Failure::negative(""))
        }
    }
}

fn orient(file: &Path) -> CmdResult {
    let text = read(file)?;
    if let Ok(g) = LabeledGraph::parse(&text) {
        if is_pu(&g, PuMethod::MinorsB).is_ok() {
            eprintln!("input orientation is already PU");
            print!("{}", g.serialize());
            return Ok(());
        }
    }
    let u = UnorientedGraph::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    match find_pu_orientation(&u) {
        Ok(Some(g)) => {
            print!("{}", g.serialize());
            Ok(())
        }
        Ok(None) => {
            println!("NONE");
            Err(Failure::negative(""))
        }
        Err(e @ PuError::NotBipartite(..)) => Err(Failure::negative(e.to_string())),
        Err(e) => Err(Failure::internal(e.to_string())),
    }
}

fn options(kh: &KhArgs, coefficients: Coefficients) -> KhOptions {
    KhOptions { kind: kh.kind, convention: kh.convention, coefficients }
}

fn homology(file: &Path, kh: &KhArgs, coeffs: Coefficients) -> CmdResult {
    let g = load(file)?;
    warn_size(&g);
    print!("{}", khovanov(&g, options(kh, coeffs))?);
    Ok(())
}

fn apply(file: &Path, script: &Path, output: Option<&Path>) -> CmdResult {
    let g = load(file)?;
    let s = load_script(script)?;
    let h = apply_script(&g, &s).map_err(|e| Failure::negative(format!("MoveFailed({}): {}", e.index, e.cause)))?;
    match output {
        Some(path) => fs::write(path, h.serialize()).map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{}", h.serialize());
            Ok(())
        }
    }
}

fn invariance(file: &Path, script: &Path, kh: &KhArgs) -> CmdResult {
    let g = load(file)?;
    let s = load_script(script)?;
    let h = apply_script(&g, &s).map_err(|e| Failure::negative(format!("MoveFailed({}): {}", e.index, e.cause)))?;
    warn_size(&h);
    let opts = options(kh, Coefficients::Z);
    let cmp = align_and_compare(&khovanov(&g, opts)?, &khovanov(&h, opts)?);
    println!("{cmp}");
    if cmp.is_equal() {
        Ok(())
    } else {
        Err(Failure::negative(""))
    }
}

fn faces(file: &Path, convention: Convention) -> CmdResult {
    let g = load(file)?;
    warn_size(&g);
    if let Err(c) = is_pu(&g, PuMethod::MinorsB) {
        return Err(Failure::negative(format!("graph is not PU: {}", c.describe(&g))));
    }
    let cube = StateCube::new(&g).map_err(HomologyError::from)?;
    let table = cube.faces(convention).map_err(HomologyError::from)?;
    println!("faces {}", table.len());
    for (name, count) in ["A", "C", "X", "Y"].iter().zip(table.class_counts()) {
        println!("class {name} {count}");
    }
    for (raw, count) in table.raw_counts().iter().enumerate() {
        println!("type {} {count}", raw + 1);
    }
    let report = validate_cube_parity(&table);
    println!("parity {convention}: {} violations in {} subcubes", report.violations.len(), report.cubes);
    for (y, [i, j, k], ax, ay) in report.violations.iter().take(10) {
        println!(
            "  subcube at {} on {},{},{}: A+X={ax} A+Y={ay}",
            g.format_state(cube.state(*y)),
            g.name(*i),
            g.name(*j),
            g.name(*k)
        );
    }
    if report.is_clean() {
        Ok(())
    } else {
        Err(Failure::negative(""))
    }
}

fn print_report(r: &Report) {
    println!("== {}", r.subject);
    for c in &r.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            println!("{mark} {}", c.name);
        } else {
            println!("{mark} {} ({})", c.name, c.detail);
        }
    }
}

fn validate(file: Option<&Path>, random: Option<&[u64]>, opts: ValidateOptions) -> CmdResult {
    let subjects: Vec<(String, LabeledGraph)> = match (file, random) {
        (Some(path), _) => vec![(path.display().to_string(), load(path)?)],
        (None, Some(&[n, k, seed])) => random_subjects(n as usize, k as usize, seed),
        (None, Some(_)) => return Err(Failure::usage("--random takes N K SEED")),
        (None, None) => fixtures::ALL
            .iter()
            .filter(|(name, _)| *name != "ODD4")
            .map(|(name, text)| (name.to_string(), fixtures::graph(text)))
            .collect(),
    };
    let reports = validate_many(&subjects, opts);
    for r in &reports {
        print_report(r);
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} graphs, {} failed", reports.len(), failed);
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::negative(""))
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::CheckPu { file, method } => check_pu(&file, &method),
        Command::Orient { file } => orient(&file),
        Command::Homology { file, kh, coeffs } => homology(&file, &kh, coeffs),
        Command::Apply { file, script, output } => apply(&file, &script, output.as_deref()),
        Command::Invariance { file, script, kh } => invariance(&file, &script, &kh),
        Command::Faces { file, convention } => faces(&file, convention),
        Command::Validate { file, random, convention, negative_control, moves } => {
            validate(file.as_deref(), random.as_deref(), ValidateOptions { convention, negative_control, moves })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("{}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
