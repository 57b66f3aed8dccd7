//! `psido`: inspect groups, transform functions, extract symbols, and run the
//! verification suites from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use psido_core::catalog::{self, GroupBundle};
use psido_core::fourier;
use psido_core::heat::{self, BiInvariantLaplacian};
use psido_core::io::{self, CoefficientsDoc, FunctionDoc, SymbolDoc};
use psido_core::nuclear::{self, NuclearIndices};
use psido_core::quantize;
use psido_core::schatten;
use psido_core::verify::{self, Suite, VerifyOptions};
use psido_core::{linalg, HomogeneousSpace, LinearOperator, SeededRng};

use output::Format;

#[derive(Parser)]
#[command(
    name = "psido",
    version,
    about = "Pseudo-differential calculus on coset spaces of finite groups"
)]
struct Cli {
    /// Output format (default depends on the command)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List or inspect groups
    Groups {
        #[command(subcommand)]
        action: GroupsCmd,
    },
    /// Run verification suites; exit 1 if any check fails
    Verify(VerifyArgs),
    /// Heat trace sweep. CSV columns: t, trace_formula, trace_oracle, residual
    HeatTrace(HeatArgs),
    /// Compare the Schatten quasi-norm with its symbol-side expression
    Schatten(SchattenArgs),
    /// Trace via kernel diagonal, symbol, and eigenvalue sum
    Trace(OperatorArgs),
    /// Sufficiency functional and decomposition cost
    Nuclearity(NuclearityArgs),
    /// Symbol extraction
    Symbol {
        #[command(subcommand)]
        action: SymbolCmd,
    },
    /// Fourier transform of coset functions
    Transform {
        #[command(subcommand)]
        action: TransformCmd,
    },
}

#[derive(Subcommand)]
enum GroupsCmd {
    /// Built-in groups with order and subgroup names
    List,
    /// Cayley table size, subgroups and character table
    Show {
        name: Option<String>,
        #[arg(long)]
        group_file: Option<PathBuf>,
    },
    /// Print a built-in group as a group spec document
    Export { name: String },
}

#[derive(Subcommand)]
enum SymbolCmd {
    /// Symbol blocks per coset and dual class
    Dump(OperatorArgs),
}

#[derive(Subcommand)]
enum TransformCmd {
    /// Coset function -> Fourier coefficients
    Forward(TransformArgs),
    /// Fourier coefficients -> coset function
    Inverse(TransformArgs),
}

#[derive(Args, Clone)]
struct SpaceArgs {
    /// Built-in group name (see `groups list`)
    #[arg(long)]
    group: Option<String>,
    /// Group spec document to load instead of a built-in group
    #[arg(long, conflicts_with = "group")]
    group_file: Option<PathBuf>,
    /// Subgroup name; `trivial` and `full` always exist
    #[arg(long)]
    subgroup: Option<String>,
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Kernel file: {"size": N, "kernel": N x N [re, im] pairs}
    #[arg(long, conflicts_with = "random")]
    kernel: Option<PathBuf>,
    /// Use a random operator with complex Gaussian kernel entries
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OperatorArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[command(flatten)]
    source: SourceArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Run every catalog pair instead of one
    #[arg(long, conflicts_with_all = ["group", "group_file", "subgroup"])]
    catalog: bool,
    #[arg(long, default_value = "all", value_parser = Suite::NAMES)]
    suite: String,
    /// Override every per-check tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random samples per sampled check
    #[arg(long, default_value_t = VerifyOptions::default().samples)]
    samples: usize,
}

#[derive(Args)]
struct HeatArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, default_value_t = 0.0)]
    tmin: f64,
    #[arg(long, default_value_t = 2.0)]
    tmax: f64,
    #[arg(long, default_value_t = 21)]
    steps: usize,
    /// Comma-separated element indices replacing the default generating set
    #[arg(long, value_delimiter = ',')]
    generators: Option<Vec<usize>>,
}

#[derive(Args)]
struct SchattenArgs {
    #[command(flatten)]
    op: OperatorArgs,
    #[arg(long)]
    r: f64,
}

#[derive(Args)]
struct NuclearityArgs {
    #[command(flatten)]
    op: OperatorArgs,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 2.0)]
    p1: f64,
    #[arg(long, default_value_t = 2.0)]
    p2: f64,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Input document; forward takes {"values": [...]}, inverse takes {"classes": [...]}
    #[arg(long, conflicts_with = "random")]
    input: Option<PathBuf>,
    /// Forward only: transform a random function
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Usage or input problem; maps to exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let fmt = cli.format;
    match cli.command {
        Command::Groups { action } => groups(action, fmt.unwrap_or(Format::Text)),
        Command::Verify(args) => verify_cmd(args, fmt.unwrap_or(Format::Text)),
        Command::HeatTrace(args) => heat_trace(args, fmt.unwrap_or(Format::Csv)),
        Command::Schatten(args) => schatten_cmd(args, fmt.unwrap_or(Format::Text)),
        Command::Trace(args) => trace_cmd(args, fmt.unwrap_or(Format::Text)),
        Command::Nuclearity(args) => nuclearity_cmd(args, fmt.unwrap_or(Format::Text)),
        Command::Symbol {
            action: SymbolCmd::Dump(args),
        } => symbol_dump(args, fmt.unwrap_or(Format::Text)),
        Command::Transform { action } => transform(action, fmt.unwrap_or(Format::Json)),
    }
}

fn load_bundle(group: Option<&str>, file: Option<&PathBuf>) -> Result<GroupBundle, InputError> {
    match (group, file) {
        (_, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            Ok(io::load_group(&text)?)
        }
        (Some(name), None) => Ok(catalog::builtin(name)?),
        (None, None) => Err(InputError("give --group or --group-file".into())),
    }
}

impl SpaceArgs {
    fn resolve(&self) -> Result<(GroupBundle, HomogeneousSpace), InputError> {
        let bundle = load_bundle(self.group.as_deref(), self.group_file.as_ref())?;
        let sub = self
            .subgroup
            .as_deref()
            .ok_or_else(|| InputError("give --subgroup".into()))?;
        let space = bundle.space(sub)?;
        Ok((bundle, space))
    }
}

impl SourceArgs {
    fn operator(&self, space: &HomogeneousSpace) -> Result<LinearOperator, InputError> {
        match (&self.kernel, self.random) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                Ok(io::load_kernel(space, &text)?)
            }
            (None, true) => Ok(SeededRng::new(self.seed).operator(space)),
            (None, false) => Err(InputError("give --kernel FILE or --random".into())),
        }
    }
}

#[derive(Serialize)]
struct GroupRow {
    name: String,
    order: usize,
    subgroups: String,
}

#[derive(Serialize)]
struct SubgroupInfo {
    name: String,
    order: usize,
    normal: bool,
}

#[derive(Serialize)]
struct IrrepInfo {
    label: String,
    dim: usize,
    character: Vec<io::Pair>,
}

#[derive(Serialize)]
struct GroupInfo {
    name: String,
    order: usize,
    cayley: [usize; 2],
    abelian: bool,
    subgroups: Vec<SubgroupInfo>,
    irreps: Vec<IrrepInfo>,
}

fn groups(action: GroupsCmd, fmt: Format) -> CmdResult {
    match action {
        GroupsCmd::List => {
            let rows = catalog::builtin_names()
                .into_iter()
                .map(|name| {
                    let b = catalog::builtin(&name)?;
                    Ok(GroupRow {
                        order: b.group.order(),
                        subgroups: b.subgroup_names().join(" "),
                        name,
                    })
                })
                .collect::<Result<Vec<_>, InputError>>()?;
            output::emit_rows(fmt, &rows, &["name", "order", "subgroups"], |r| {
                vec![r.name.clone(), r.order.to_string(), r.subgroups.clone()]
            })?;
        }
        GroupsCmd::Show { name, group_file } => {
            let b = load_bundle(name.as_deref(), group_file.as_ref())?;
            let subgroups = b
                .subgroup_names()
                .into_iter()
                .map(|n| {
                    let s = b.subgroup(&n)?;
                    Ok(SubgroupInfo {
                        order: s.order(),
                        normal: s.is_normal(&b.group),
                        name: n,
                    })
                })
                .collect::<Result<Vec<_>, InputError>>()?;
            let info = GroupInfo {
                name: b.group.name().to_string(),
                order: b.group.order(),
                cayley: [b.group.order(), b.group.order()],
                abelian: b.group.is_abelian(),
                subgroups,
                irreps: b
                    .irreps
                    .iter()
                    .map(|i| IrrepInfo {
                        label: i.label().to_string(),
                        dim: i.dim(),
                        character: i.character().iter().map(|&z| io::to_pair(z)).collect(),
                    })
                    .collect(),
            };
            match fmt {
                Format::Text => print!("{}", output::group_text(&info)),
                Format::Json => output::print_json(&info)?,
                Format::Csv => {
                    output::emit_rows(fmt, &info.irreps, &["label", "dim", "character"], |i| {
                        vec![
                            i.label.clone(),
                            i.dim.to_string(),
                            output::pairs_inline(&i.character),
                        ]
                    })?;
                }
            }
        }
        GroupsCmd::Export { name } => {
            println!("{}", io::export_group(&catalog::builtin(&name)?)?);
        }
    }
    Ok(true)
}

fn verify_cmd(args: VerifyArgs, fmt: Format) -> CmdResult {
    let suite: Suite = args.suite.parse()?;
    if let Some(tol) = args.tol {
        if tol.is_nan() || tol < 0.0 {
            return Err(InputError(format!("--tol must be nonnegative, got {tol}")));
        }
    }
    let opts = VerifyOptions {
        seed: args.seed,
        tolerance: args.tol,
        samples: args.samples,
    };
    let start = Instant::now();
    let mut reports = Vec::new();
    if args.catalog {
        for (g, h) in catalog::standard_pairs() {
            let bundle = catalog::builtin(g)?;
            let space = bundle.space(h)?;
            reports.push(verify::run_suite(&bundle, &space, suite, &opts));
        }
    } else {
        let (bundle, space) = args.space.resolve()?;
        reports.push(verify::run_suite(&bundle, &space, suite, &opts));
    }
    eprintln!("elapsed {:.2}s", start.elapsed().as_secs_f64());
    match fmt {
        Format::Text => print!("{}", output::verify_text(&reports)),
        Format::Json if args.catalog => output::print_json(&reports)?,
        Format::Json => output::print_json(&reports[0])?,
        Format::Csv => {
            let rows: Vec<_> = reports.iter().flat_map(|r| r.checks.iter()).collect();
            output::emit_rows(
                fmt,
                &rows,
                &["pair", "check", "residual", "tolerance", "passed"],
                |c| {
                    vec![
                        c.pair.clone(),
                        c.id.clone(),
                        c.residual.to_string(),
                        c.tolerance.to_string(),
                        c.passed.to_string(),
                    ]
                },
            )?;
        }
    }
    let ok = reports.iter().all(|r| r.all_passed());
    if !ok {
        let worst = reports.iter().filter_map(|r| r.worst()).max_by(|a, b| {
            (a.residual / a.tolerance.max(f64::MIN_POSITIVE))
                .total_cmp(&(b.residual / b.tolerance.max(f64::MIN_POSITIVE)))
        });
        if let Some(w) = worst {
            eprintln!(
                "verification failed; worst offender {} on {}: residual {:e} > tolerance {:e}",
                w.id, w.pair, w.residual, w.tolerance
            );
        }
    }
    Ok(ok)
}

#[derive(Serialize)]
struct HeatRow {
    t: f64,
    trace_formula: f64,
    trace_oracle: f64,
    residual: f64,
}

fn heat_trace(args: HeatArgs, fmt: Format) -> CmdResult {
    let (bundle, space) = args.space.resolve()?;
    if args.steps == 0 {
        return Err(InputError("--steps must be at least 1".into()));
    }
    if !(args.tmin >= 0.0 && args.tmax >= args.tmin) {
        return Err(InputError(format!(
            "need 0 <= tmin <= tmax, got {} and {}",
            args.tmin, args.tmax
        )));
    }
    let laplacian = match &args.generators {
        Some(gens) => BiInvariantLaplacian::new(bundle.group.clone(), &bundle.irreps, gens)?,
        None => BiInvariantLaplacian::for_bundle(&bundle)?,
    };
    let mut rows = Vec::with_capacity(args.steps);
    for i in 0..args.steps {
        let t = if args.steps == 1 {
            args.tmin
        } else {
            args.tmin + (args.tmax - args.tmin) * i as f64 / (args.steps - 1) as f64
        };
        let formula = heat::heat_trace(&laplacian, &space, t)?;
        let oracle = linalg::trace(&heat::heat_operator_oracle(&laplacian, &space, t)?.matrix()).re;
        rows.push(HeatRow {
            t,
            trace_formula: formula,
            trace_oracle: oracle,
            residual: (formula - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE),
        });
    }
    output::emit_rows(
        fmt,
        &rows,
        &["t", "trace_formula", "trace_oracle", "residual"],
        |r| {
            vec![
                r.t.to_string(),
                r.trace_formula.to_string(),
                r.trace_oracle.to_string(),
                format!("{:e}", r.residual),
            ]
        },
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct SchattenOut {
    pair: String,
    singular_values: Vec<f64>,
    #[serde(flatten)]
    report: schatten::SchattenReport,
}

fn schatten_cmd(args: SchattenArgs, fmt: Format) -> CmdResult {
    let (_, space) = args.op.space.resolve()?;
    let op = args.op.source.operator(&space)?;
    let out = SchattenOut {
        pair: space.label(),
        singular_values: schatten::singular_values(&op)?.values,
        report: schatten::schatten_criterion_check(&space, &op, args.r)?,
    };
    output::emit_record(fmt, &out, || {
        vec![
            ("pair", out.pair.clone()),
            ("r", out.report.r.to_string()),
            ("||T||_{S_r}^r", out.report.quasi_norm.to_string()),
            ("symbol side", out.report.symbol_side.to_string()),
            ("residual", format!("{:e}", out.report.residual)),
        ]
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct TraceOut {
    pair: String,
    #[serde(flatten)]
    report: nuclear::TraceReport,
}

fn trace_cmd(args: OperatorArgs, fmt: Format) -> CmdResult {
    let (_, space) = args.space.resolve()?;
    let op = args.source.operator(&space)?;
    let out = TraceOut {
        pair: space.label(),
        report: nuclear::trace_report(&space, &op)?,
    };
    let r = &out.report;
    output::emit_record(fmt, &out, || {
        vec![
            ("pair", out.pair.clone()),
            ("trace (kernel diagonal)", output::complex(r.trace_kernel)),
            ("trace (symbol)", output::complex(r.trace_symbol)),
            ("trace (eigenvalue sum)", output::complex(r.trace_eigen)),
            ("||T||_{S_1}", r.trace_norm.to_string()),
            (
                "residual kernel/symbol",
                format!("{:e}", r.residual_kernel_symbol),
            ),
            (
                "residual kernel/eigen",
                format!("{:e}", r.residual_kernel_eigen),
            ),
            (
                "residual symbol/eigen",
                format!("{:e}", r.residual_symbol_eigen),
            ),
        ]
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct NuclearityOut {
    pair: String,
    #[serde(flatten)]
    report: nuclear::NuclearityReport,
}

fn nuclearity_cmd(args: NuclearityArgs, fmt: Format) -> CmdResult {
    let (_, space) = args.op.space.resolve()?;
    let op = args.op.source.operator(&space)?;
    let indices = NuclearIndices::new(args.r, args.p1, args.p2)?;
    let out = NuclearityOut {
        pair: space.label(),
        report: nuclear::nuclearity_report(&space, &op, indices)?,
    };
    let r = &out.report;
    output::emit_record(fmt, &out, || {
        vec![
            ("pair", out.pair.clone()),
            ("r", r.indices.r.to_string()),
            ("p1", r.indices.p1.to_string()),
            ("p2", r.indices.p2.to_string()),
            ("functional", r.functional.to_string()),
            ("cost", r.cost.to_string()),
            ("terms", r.terms.to_string()),
            ("trace", output::complex(r.trace.trace_kernel)),
            ("trace residual", format!("{:e}", r.trace.max_residual())),
        ]
    })?;
    Ok(true)
}

fn symbol_dump(args: OperatorArgs, fmt: Format) -> CmdResult {
    let (_, space) = args.space.resolve()?;
    let op = args.source.operator(&space)?;
    let doc = SymbolDoc::from_symbol(&space, &quantize::symbol_from_operator(&space, &op)?);
    match fmt {
        Format::Text => print!("{}", output::symbol_text(&space.label(), &doc)),
        Format::Json => output::print_json(&doc)?,
        Format::Csv => {
            let rows: Vec<_> = doc
                .cosets
                .iter()
                .flat_map(|c| c.classes.iter().map(move |b| (c.coset, b)))
                .flat_map(|(x, b)| {
                    b.block.iter().enumerate().flat_map(move |(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(move |(j, z)| (x, b.label.clone(), i, j, *z))
                    })
                })
                .collect();
            output::emit_rows(
                fmt,
                &rows,
                &["coset", "class", "row", "col", "re", "im"],
                |(x, l, i, j, z)| {
                    vec![
                        x.to_string(),
                        l.clone(),
                        i.to_string(),
                        j.to_string(),
                        z[0].to_string(),
                        z[1].to_string(),
                    ]
                },
            )?;
        }
    }
    Ok(true)
}

fn transform(action: TransformCmd, fmt: Format) -> CmdResult {
    if fmt == Format::Csv {
        return Err(InputError(
            "transform supports --format json or text".into(),
        ));
    }
    let read = |args: &TransformArgs| -> Result<String, InputError> {
        let path = args
            .input
            .as_ref()
            .ok_or_else(|| InputError("give --input FILE".into()))?;
        fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
    };
    match action {
        TransformCmd::Forward(args) => {
            let (_, space) = args.space.resolve()?;
            let f = if args.random && args.input.is_none() {
                SeededRng::new(args.seed).function(&space)
            } else {
                serde_json::from_str::<FunctionDoc>(&read(&args)?)?.into_function(&space)?
            };
            let doc = CoefficientsDoc::from_coefficients(&space, &fourier::forward(&space, &f)?);
            output::print_doc(fmt, &doc)?;
        }
        TransformCmd::Inverse(args) => {
            if args.random {
                return Err(InputError("--random applies to forward only".into()));
            }
            let (_, space) = args.space.resolve()?;
            let coeffs = serde_json::from_str::<CoefficientsDoc>(&read(&args)?)?
                .into_coefficients(&space)?;
            let doc = FunctionDoc::from_function(&fourier::inverse(&space, &coeffs)?);
            output::print_doc(fmt, &doc)?;
        }
    }
    Ok(true)
}
