//! `tropic`: solve tropical linear equations, inequalities, combined systems,
//! and extended equations from JSON problem files, with optional SVG plots of
//! planar instances.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use tropic::doc::{
    family_json, index_set_json, matrix_json, parse_problem, value_json, vector_json,
    ProblemDocument,
};
use tropic::error::CliError;
use tropic::render::{render_svg, PlotOverlay};
use tropic_core::dependence::{extract_basis, independence_margin, is_independent};
use tropic_core::distance::{membership, nearest_point, project_above, project_below};
use tropic_core::solver::{
    general_solution, preprocess, solve_equation, solve_extended, solve_inequality, solve_system,
    FamilySolution, Preprocessed, SolveOptions,
};
use tropic_core::{Semifield, Tolerance, Vector};

#[derive(Parser)]
#[command(
    name = "tropic",
    version,
    about = "Tropical linear systems over idempotent semifields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance from d to the span of the columns of A, with witnesses.
    Distance(RunArgs),
    /// Solve A x = d: existence, maximal solution, pseudo-solution.
    Solve(RunArgs),
    /// The complete solution family of A x = d.
    SolveAll(RunArgs),
    /// Solve A x <= d: the residuated upper bound.
    Inequality(RunArgs),
    /// Solve the combined system A x = d, C x <= b.
    System(RunArgs),
    /// Solve the extended equation A x (+) b = d.
    Extended(RunArgs),
    /// Extract an equivalent linearly independent column subsystem of A.
    Basis(RunArgs),
    /// Test the columns of A for linear independence.
    Independent(RunArgs),
    /// Test whether d belongs to the span of the columns of A.
    Membership(RunArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Distance(_) => "distance",
            Self::Solve(_) => "solve",
            Self::SolveAll(_) => "solve-all",
            Self::Inequality(_) => "inequality",
            Self::System(_) => "system",
            Self::Extended(_) => "extended",
            Self::Basis(_) => "basis",
            Self::Independent(_) => "independent",
            Self::Membership(_) => "membership",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Self::Distance(a)
            | Self::Solve(a)
            | Self::SolveAll(a)
            | Self::Inequality(a)
            | Self::System(a)
            | Self::Extended(a)
            | Self::Basis(a)
            | Self::Independent(a)
            | Self::Membership(a) => a,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Problem document (UTF-8 JSON).
    #[arg(long)]
    input: PathBuf,
    /// Write the result document here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also render the instance to this SVG file (2-dimensional max-plus or
    /// max-times instances only).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Comparison tolerance, overriding the document options.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Enumeration cap on columns, overriding TROPIC_CAP and the document.
    #[arg(long)]
    cap: Option<usize>,
    /// Also decide uniqueness of the maximal solution (triggers enumeration).
    #[arg(long)]
    check_uniqueness: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: &Command) -> Result<u8, CliError> {
    let args = command.args();
    let text = std::fs::read_to_string(&args.input)?;
    let mut doc = parse_problem(&text)?;
    apply_overrides(&mut doc, args)?;
    let opts = SolveOptions {
        tolerance: doc.tolerance,
        enumeration_cap: doc.cap,
        check_uniqueness: doc.check_uniqueness,
    };

    let mut out = Map::new();
    out.insert("command".into(), json!(command.name()));
    out.insert("semifield".into(), json!(doc.semifield.as_str()));
    let mut overlay = PlotOverlay::default();
    let code = dispatch(command, &doc, &opts, &mut out, &mut overlay)?;

    if let Some(path) = &args.svg {
        let svg = render_svg(&doc, &overlay)?;
        std::fs::write(path, svg)?;
    }

    let rendered = serde_json::to_string_pretty(&Value::Object(out)).expect("results serialize");
    match &args.output {
        Some(path) => std::fs::write(path, rendered + "\n")?,
        None => println!("{rendered}"),
    }
    Ok(code)
}

fn apply_overrides(doc: &mut ProblemDocument, args: &RunArgs) -> Result<(), CliError> {
    if let Some(eps) = args.tolerance {
        doc.tolerance = Tolerance::new(eps).map_err(|_| {
            CliError::InvalidOption(format!("tolerance {eps} must be finite and >= 0"))
        })?;
    }
    if let Some(cap) = args.cap {
        doc.cap = cap;
    } else if let Ok(raw) = std::env::var("TROPIC_CAP") {
        doc.cap = raw.parse().map_err(|_| {
            CliError::InvalidOption(format!("TROPIC_CAP={raw} is not a column count"))
        })?;
    }
    if args.check_uniqueness {
        doc.check_uniqueness = true;
    }
    Ok(())
}

/// Diagnostics shared by most commands: the consistency index sets and the
/// free (zero) columns, in one-based form.
fn diagnostics(doc: &ProblemDocument) -> Result<Value, CliError> {
    let sf = doc.semifield;
    match preprocess(&doc.a, &doc.d)? {
        Preprocessed::Problem(rp) => {
            let zero_rows: Vec<usize> = rp.consistency.zero_rows.one_based();
            let forced: Vec<usize> = rp
                .consistency
                .forced_cols
                .iter()
                .map(|j| rp.kept[j] + 1)
                .collect();
            Ok(json!({
                "zero_rows_of_d": zero_rows,
                "forced_zero_cols": forced,
                "free_cols": rp.free.one_based(),
            }))
        }
        Preprocessed::ZeroRhs { free, .. } => Ok(json!({
            "zero_rows_of_d": (1..=doc.d.len()).collect::<Vec<_>>(),
            "forced_zero_cols": Vec::<usize>::new(),
            "free_cols": free.one_based(),
        })),
        Preprocessed::ZeroMatrix { columns, zero_rhs } => Ok(json!({
            "zero_rows_of_d": if zero_rhs {
                (1..=doc.d.len()).collect::<Vec<_>>()
            } else {
                (0..doc.d.len())
                    .filter(|&i| sf.is_zero(doc.d.get(i)))
                    .map(|i| i + 1)
                    .collect::<Vec<_>>()
            },
            "forced_zero_cols": Vec::<usize>::new(),
            "free_cols": (1..=columns).collect::<Vec<_>>(),
        })),
    }
}

fn family_verdict(out: &mut Map<String, Value>, solution: &FamilySolution) -> u8 {
    out.insert("solvable".into(), json!(solution.solvable));
    out.insert("delta".into(), value_json(solution.delta.value()));
    out.insert("family".into(), family_json(&solution.family));
    if let Some(reason) = solution.reason {
        out.insert("reason".into(), json!(reason.to_string()));
    }
    u8::from(!solution.solvable)
}

fn dispatch(
    command: &Command,
    doc: &ProblemDocument,
    opts: &SolveOptions,
    out: &mut Map<String, Value>,
    overlay: &mut PlotOverlay,
) -> Result<u8, CliError> {
    let sf = doc.semifield;
    match command {
        Command::Distance(_) => {
            out.insert("diagnostics".into(), diagnostics(doc)?);
            match preprocess(&doc.a, &doc.d)? {
                Preprocessed::ZeroMatrix { columns, zero_rhs } => {
                    // span {0}: the distance is the identity to the zero
                    // vector and the maximal element to anything else
                    let delta = if zero_rhs { sf.one() } else { sf.top() };
                    out.insert("delta".into(), value_json(delta));
                    overlay.delta = Some(delta);
                    if zero_rhs {
                        out.insert("x".into(), vector_json(&Vector::zeros(sf, columns)));
                        out.insert("y".into(), vector_json(&Vector::zeros(sf, doc.d.len())));
                    }
                }
                Preprocessed::ZeroRhs { columns, .. } => {
                    out.insert("delta".into(), value_json(sf.one()));
                    out.insert("x".into(), vector_json(&Vector::zeros(sf, columns)));
                    out.insert("y".into(), vector_json(&Vector::zeros(sf, doc.d.len())));
                    overlay.delta = Some(sf.one());
                }
                Preprocessed::Problem(rp) => {
                    let r = nearest_point(&rp.matrix, &rp.rhs)?;
                    out.insert("delta".into(), value_json(r.delta.value()));
                    out.insert("row_regular".into(), json!(r.row_regular));
                    overlay.delta = Some(r.delta.value());
                    if let (Some(x), Some(y)) = (&r.argmin, &r.nearest) {
                        let full = scatter(&rp.kept, x, sf, doc.a.cols());
                        out.insert("x".into(), vector_json(&full));
                        out.insert("y".into(), vector_json(y));
                        if y.len() == 2 {
                            overlay.nearest = Some([y.get(0), y.get(1)]);
                        }
                    }
                    if let Ok((x1, _)) = project_below(&rp.matrix, &rp.rhs) {
                        let y1 = rp.matrix.mul_vector(&x1)?;
                        if y1.len() == 2 {
                            overlay.below = Some([y1.get(0), y1.get(1)]);
                        }
                    }
                    if let Ok((x2, _)) = project_above(&rp.matrix, &rp.rhs) {
                        let y2 = rp.matrix.mul_vector(&x2)?;
                        if y2.len() == 2 {
                            overlay.above = Some([y2.get(0), y2.get(1)]);
                        }
                    }
                }
            }
            Ok(0)
        }
        Command::Solve(_) => {
            let s = solve_equation(&doc.a, &doc.d, opts)?;
            out.insert("diagnostics".into(), diagnostics(doc)?);
            out.insert("solvable".into(), json!(s.solvable));
            out.insert("delta".into(), value_json(s.delta.value()));
            out.insert("pseudo".into(), vector_json(&s.pseudo));
            overlay.delta = Some(s.delta.value());
            if let Some(maximal) = &s.maximal {
                out.insert("maximal".into(), vector_json(maximal));
                let y = doc.a.mul_vector(maximal)?;
                if y.len() == 2 {
                    overlay.nearest = Some([y.get(0), y.get(1)]);
                }
            }
            if let Some(unique) = s.unique {
                out.insert("unique".into(), json!(unique));
            }
            Ok(u8::from(!s.solvable))
        }
        Command::SolveAll(_) => {
            let s = general_solution(&doc.a, &doc.d, opts)?;
            out.insert("diagnostics".into(), diagnostics(doc)?);
            overlay.delta = Some(s.delta.value());
            Ok(family_verdict(out, &s))
        }
        Command::Inequality(_) => {
            let s = solve_inequality(&doc.a, &doc.d)?;
            out.insert("diagnostics".into(), diagnostics(doc)?);
            out.insert("upper_bound".into(), vector_json(&s.upper_bound));
            out.insert("free_cols".into(), index_set_json(&s.free_cols));
            Ok(0)
        }
        Command::System(_) => {
            let c = doc.c.as_ref().ok_or(CliError::MissingField("C"))?;
            let b = doc.b.as_ref().ok_or(CliError::MissingField("b"))?;
            let s = solve_system(&doc.a, &doc.d, c, b, opts)?;
            out.insert("diagnostics".into(), diagnostics(doc)?);
            overlay.delta = Some(s.delta.value());
            Ok(family_verdict(out, &s))
        }
        Command::Extended(_) => {
            let b = doc.b.as_ref().ok_or(CliError::MissingField("b"))?;
            let s = solve_extended(&doc.a, b, &doc.d, opts)?;
            out.insert("diagnostics".into(), diagnostics(doc)?);
            overlay.delta = Some(s.delta.value());
            overlay.extended = true;
            Ok(family_verdict(out, &s))
        }
        Command::Basis(_) => {
            let basis = extract_basis(&doc.a, doc.tolerance)?;
            out.insert("kept".into(), index_set_json(&basis.kept));
            out.insert("basis".into(), matrix_json(&basis.basis));
            out.insert("margin".into(), value_json(basis.margin.value()));
            Ok(0)
        }
        Command::Independent(_) => {
            let margin = independence_margin(&doc.a)?;
            let verdict = is_independent(&doc.a, doc.tolerance)?;
            out.insert("independent".into(), json!(verdict));
            out.insert("margin".into(), value_json(margin.value()));
            Ok(0)
        }
        Command::Membership(_) => {
            let m = membership(&doc.a, &doc.d, doc.tolerance)?;
            out.insert("member".into(), json!(m.member));
            out.insert("delta".into(), value_json(m.delta.value()));
            overlay.delta = Some(m.delta.value());
            if let Some(w) = &m.witness {
                out.insert("witness".into(), vector_json(w));
            }
            Ok(0)
        }
    }
}

/// Scatter reduced coefficients back to the original column count, zeros at
/// the removed columns.
fn scatter(kept: &[usize], reduced: &Vector, sf: Semifield, n: usize) -> Vector {
    let mut entries = vec![sf.zero(); n];
    for (r, &orig) in kept.iter().enumerate() {
        entries[orig] = reduced.get(r);
    }
    Vector::new(sf, entries).expect("scattered entries stay in the carrier")
}
