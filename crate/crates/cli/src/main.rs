use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vdw_core::curves::{
    emit_curve_table, find_extrema, same_symmetry_crossings, GridScale, PotentialCurve, DEFAULT_R_MAX, DEFAULT_R_MIN,
};
use vdw_core::dispersion::{c6_crossed, c6_sweep, default_rule, C6Result};
use vdw_core::oracle::{c6_state_sum_over_states, ToyModel};
use vdw_core::quadrature::DEFAULT_NODES;
use vdw_core::specdata::{read_dataset, validate_dataset, AtomKind, Dataset, SymmetryLabel, SymmetryState};
use vdw_core::units::cm_to_hartree;
use vdw_core::Error;

/// Relative tolerance between the quadrature path and the sum over states.
const ORACLE_TOLERANCE: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "vdw", version, about = "Atom-dimer van der Waals coefficients and long-range curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct Output {
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Field delimiter of printed tables.
    #[arg(long, default_value = ",")]
    delimiter: String,
    /// Significant digits of printed numbers.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=17))]
    precision: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a dataset against every invariant.
    Validate {
        #[arg(long)]
        dataset: PathBuf,
    },
    /// C6 of every symmetry state in a dataset.
    C6 {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODES, value_parser = parse_nodes)]
        nodes: usize,
        /// Only states of this atom.
        #[arg(long)]
        atom: Option<AtomKind>,
        /// Only this rotational level.
        #[arg(long)]
        j: Option<i32>,
        /// Also evaluate the explicit sum over states and compare.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate long-range potential curves, optionally with extrema and crossings.
    Curves {
        /// Dataset providing C6 (computed), C5 and the rotational constant.
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// CSV of `symmetry,j,c5,c6` to use instead of computed coefficients.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Rotational constant in cm⁻¹; defaults to the dataset's.
        #[arg(long)]
        b_rot: Option<f64>,
        #[arg(long)]
        atom: Option<AtomKind>,
        #[arg(long, default_value_t = DEFAULT_NODES, value_parser = parse_nodes)]
        nodes: usize,
        #[arg(long, default_value_t = DEFAULT_R_MIN)]
        rmin: f64,
        #[arg(long, default_value_t = DEFAULT_R_MAX)]
        rmax: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value = "log")]
        scale: GridScale,
        /// Report extrema and same-symmetry crossings.
        #[arg(long)]
        analyze: bool,
        /// Also write `<out>.gp`, a gnuplot script plotting the table.
        #[arg(long)]
        gnuplot: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the quadrature path with the sum over states on random toy models.
    OracleCheck {
        #[arg(long, default_value_t = 100)]
        models: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_NODES, value_parser = parse_nodes)]
        nodes: usize,
    },
}

fn parse_nodes(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < vdw_core::quadrature::MIN_NODES {
        return Err(format!("at least {} nodes are required", vdw_core::quadrature::MIN_NODES));
    }
    Ok(n)
}

/// A failure with its exit status: 1 for data or physics, 2 for the environment.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_io() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn physics(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { dataset } => cmd_validate(&dataset),
        Command::C6 {
            dataset,
            nodes,
            atom,
            j,
            oracle,
            output,
        } => cmd_c6(&dataset, nodes, atom, j, oracle, &output),
        Command::Curves {
            dataset,
            table,
            b_rot,
            atom,
            nodes,
            rmin,
            rmax,
            points,
            scale,
            analyze,
            gnuplot,
            output,
        } => cmd_curves(CurvesArgs {
            dataset,
            table,
            b_rot,
            atom,
            nodes,
            rmin,
            rmax,
            points,
            scale,
            analyze,
            gnuplot,
            output,
        }),
        Command::OracleCheck { models, seed, nodes } => cmd_oracle_check(models, seed, nodes),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn num(v: f64, precision: u32) -> String {
    format!("{:.*e}", precision as usize - 1, v)
}

fn cmd_validate(path: &Path) -> Result<(), Failure> {
    let d = read_dataset(path)?;
    let report = validate_dataset(&d);
    for c in &report.checks {
        if !c.passed {
            println!("{c}");
        }
    }
    let failures = report.failures().count();
    println!("{} checks, {} failed", report.checks.len(), failures);
    if failures > 0 {
        return Err(physics(format!("{} failed validation", path.display())));
    }
    Ok(())
}

fn load(path: &Path) -> Result<Dataset, Failure> {
    Ok(vdw_core::specdata::load_dataset(path)?)
}

/// States in output order: symmetry, j, then file order.
fn selected_states(d: &Dataset, atom: Option<AtomKind>, j: Option<i32>) -> Vec<(usize, &SymmetryState)> {
    let mut states: Vec<(usize, &SymmetryState)> = d
        .states
        .iter()
        .enumerate()
        .filter(|(_, s)| atom.is_none_or(|a| s.atom == a) && j.is_none_or(|j| s.j == j))
        .collect();
    states.sort_by_key(|(i, s)| (s.atom, s.label, s.j, *i));
    states
}

fn state_name(i: usize, s: &SymmetryState) -> String {
    format!("state #{} ({} {} j={})", i + 1, s.atom, s.label, s.j)
}

fn compute(d: &Dataset, states: &[(usize, &SymmetryState)], nodes: usize) -> Result<Vec<C6Result>, Failure> {
    let rule = default_rule(d, nodes)?;
    let subset = Dataset {
        states: states.iter().map(|(_, s)| (*s).clone()).collect(),
        ..d.clone()
    };
    c6_sweep(&subset, &rule)
        .into_iter()
        .zip(states)
        .map(|(r, (i, s))| r.map_err(|e| physics(format!("{}: {e}", state_name(*i, s)))))
        .collect()
}

fn cmd_c6(path: &Path, nodes: usize, atom: Option<AtomKind>, j: Option<i32>, oracle: bool, output: &Output) -> Result<(), Failure> {
    let d = load(path)?;
    let states = selected_states(&d, atom, j);
    if states.is_empty() {
        return Err(physics("no symmetry states match the selection"));
    }
    let results = compute(&d, &states, nodes)?;
    let p = output.precision;
    let sep = output.delimiter.as_str();

    let mut header = vec!["atom", "symmetry", "j", "C5", "C6", "valence", "downward", "core"];
    if oracle {
        header.extend(["sum_over_states", "rel_diff"]);
    }
    let mut text = format!("# {}\n", header.join(sep));
    let mut worst: f64 = 0.0;
    for ((i, s), r) in states.iter().zip(&results) {
        let mut fields = vec![
            s.atom.to_string(),
            s.label.to_string(),
            s.j.to_string(),
            num(s.c5, p),
            num(r.total, p),
            num(r.valence_integral, p),
            num(r.downward_term, p),
            num(r.core_term, p),
        ];
        if oracle {
            let sos = c6_state_sum_over_states(&d, s).map_err(|e| physics(format!("{}: {e}", state_name(*i, s))))?;
            let factorized = r.valence_integral + r.downward_term;
            let rel = relative_difference(factorized, sos);
            worst = worst.max(rel);
            fields.push(num(sos, p));
            fields.push(num(rel, 3));
        }
        text.push_str(&fields.join(sep));
        text.push('\n');
    }
    emit(output, &text)?;
    if oracle {
        eprintln!("largest relative difference to the sum over states: {worst:.3e}");
        if worst > ORACLE_TOLERANCE {
            return Err(physics(format!("oracle mismatch {worst:.3e} exceeds {ORACLE_TOLERANCE:e}")));
        }
    }
    Ok(())
}

fn relative_difference(a: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        a.abs()
    } else {
        ((a - reference) / reference).abs()
    }
}

struct CurvesArgs {
    dataset: Option<PathBuf>,
    table: Option<PathBuf>,
    b_rot: Option<f64>,
    atom: Option<AtomKind>,
    nodes: usize,
    rmin: f64,
    rmax: f64,
    points: usize,
    scale: GridScale,
    analyze: bool,
    gnuplot: bool,
    output: Output,
}

fn read_curve_csv(path: &Path, b_rot: f64) -> Result<Vec<PotentialCurve>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let mut curves = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("symmetry") {
            continue;
        }
        let bad = |m: String| physics(format!("{}:{}: {m}", path.display(), n + 1));
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [sym, j, c5, c6] = fields[..] else {
            return Err(bad(format!("expected 4 fields, found {}", fields.len())));
        };
        let symmetry: SymmetryLabel = sym.parse().map_err(bad)?;
        let j: i32 = j.parse().map_err(|e| bad(format!("j: {e}")))?;
        let c5: f64 = c5.parse().map_err(|e| bad(format!("c5: {e}")))?;
        let c6: f64 = c6.parse().map_err(|e| bad(format!("c6: {e}")))?;
        curves.push(PotentialCurve::new(symmetry, j, c5, c6, b_rot)?);
    }
    Ok(curves)
}

fn cmd_curves(a: CurvesArgs) -> Result<(), Failure> {
    if a.gnuplot && a.output.out.is_none() {
        return Err(physics("--gnuplot needs --out so the script can reference the table"));
    }
    let dataset = a.dataset.as_deref().map(load).transpose()?;
    let b_rot = match (a.b_rot, &dataset) {
        (Some(b), _) => cm_to_hartree(b),
        (None, Some(d)) => d.b_rot,
        (None, None) => return Err(physics("the rotational constant needs --b-rot or --dataset")),
    };
    let curves = match (&a.table, &dataset) {
        (Some(table), _) => read_curve_csv(table, b_rot)?,
        (None, Some(d)) => {
            let states = selected_states(d, a.atom, None);
            let results = compute(d, &states, a.nodes)?;
            states
                .iter()
                .zip(&results)
                .map(|((_, s), r)| PotentialCurve::new(s.label, s.j, s.c5, r.total, b_rot))
                .collect::<Result<_, _>>()?
        }
        (None, None) => return Err(physics("curves needs --table or --dataset")),
    };
    if curves.is_empty() {
        return Err(physics("no curves to tabulate"));
    }

    let table = emit_curve_table(&curves, a.rmin, a.rmax, a.points, a.scale)?;
    emit(&a.output, &table.render(&a.output.delimiter, a.output.precision as usize))?;

    if a.gnuplot {
        let out = a.output.out.as_ref().expect("checked above");
        write_gnuplot(out, &table.labels, &a.output.delimiter, a.scale)?;
    }

    if a.analyze {
        let mut report = String::new();
        for c in &curves {
            // stationary points outside the window lie where the expansion is meaningless
            for f in find_extrema(c).into_iter().filter(|f| f.r >= a.rmin && f.r <= a.rmax) {
                report.push_str(&format!("# {f}\n"));
            }
        }
        for f in same_symmetry_crossings(&curves, a.rmin, a.rmax)? {
            report.push_str(&format!("# {f}\n"));
        }
        if report.is_empty() {
            report.push_str("# no extrema or crossings\n");
        }
        print!("{report}");
    }
    Ok(())
}

fn write_gnuplot(table: &Path, labels: &[String], delimiter: &str, scale: GridScale) -> Result<(), Failure> {
    let mut script_path = table.as_os_str().to_owned();
    script_path.push(".gp");
    let script_path = PathBuf::from(script_path);
    let name = table.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s = String::new();
    s.push_str(&format!("set datafile separator \"{delimiter}\"\n"));
    s.push_str("set datafile commentschars \"#\"\n");
    if scale == GridScale::Log {
        s.push_str("set logscale x\n");
    }
    s.push_str("set xlabel \"R (a.u.)\"\nset ylabel \"V (cm^-1)\"\nset key outside\n");
    let plots: Vec<String> = labels
        .iter()
        .enumerate()
        .map(|(k, l)| format!("\"{name}\" using 1:{} with lines title \"{l}\"", k + 2))
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    fs::write(&script_path, s).map_err(|e| io_failure(&script_path, e))
}

fn cmd_oracle_check(models: usize, seed: u64, nodes: usize) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut with_downward = 0;
    for k in 0..models {
        let m = ToyModel::random(&mut rng);
        if m.has_downward() {
            with_downward += 1;
        }
        let d = m.to_dataset();
        let rule = default_rule(&d, nodes)?;
        let crossed = c6_crossed(&d, AtomKind::Excited, m.j, m.bra.0, m.bra.1, m.ket.0, m.ket.1, &rule)?;
        let sos = m.sum_over_states()?;
        let rel = if sos.abs() < 1e-10 { crossed.abs() } else { relative_difference(crossed, sos) };
        worst = worst.max(rel);
        println!("model {k:>4}: j={} l={} factorized={crossed:.12e} sum_over_states={sos:.12e} rel_diff={rel:.3e}", m.j, m.atom.l);
    }
    println!("{models} models ({with_downward} with downward transitions), largest relative difference {worst:.3e}");
    if worst > ORACLE_TOLERANCE {
        return Err(physics(format!("oracle mismatch {worst:.3e} exceeds {ORACLE_TOLERANCE:e}")));
    }
    Ok(())
}
