//! `shortcover`: compute, construct, convert and check quower covers of
//! toroidal boards and short covers of `F_q^3`.
//!
//! Exit codes: 0 success, 1 a checked cover is invalid, 2 bad arguments or
//! input, 3 the solver hit its time limit.

mod doc;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use shortcover::board::{is_cover, render_ascii, BoardCover, BoardVariant};
use shortcover::constructions::{construct, cover_odd_blocks, known_bounds};
use shortcover::field::prime_power;
use shortcover::lifting::{cover_points, extract, lift, normalize_cover};
use shortcover::setcover::{
    build_board_instance, build_windrose_instance, solve_exact, write_lp_string, Label,
    SolveOptions, SolveResult, Status,
};
use shortcover::{Plane, ProjPoint};

use doc::CoverDoc;

/// Writes to standard output, exiting quietly once the reader has gone away
/// (as with `| head`).
fn emit(args: fmt::Arguments) {
    if let Err(e) = io::stdout().lock().write_fmt(args) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(2);
    }
}

macro_rules! say {
    ($($t:tt)*) => {
        emit(format_args!("{}\n", format_args!($($t)*)))
    };
}

#[derive(Parser)]
#[command(
    name = "shortcover",
    version,
    about = "Quower covers of toroidal boards and short covers of F_q^3"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum number of quowers covering the n x n torus
    Xi(XiArgs),
    /// Minimum number of radius-1 extended balls covering F_q^3
    C(CArgs),
    /// Turn a punctured board cover over Z_{q-1} into a short cover of F_q^3
    Lift(ConvertArgs),
    /// Turn a short cover of F_q^3 of size at most q-2 into a punctured board cover
    Extract(ConvertArgs),
    /// Check a cover document
    Verify(VerifyArgs),
    /// Write the covering problem as a 0-1 program in CPLEX LP format
    Lp(LpArgs),
    /// Print the table of optima
    Table(TableArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum VariantArg {
    Full,
    Punctured,
}

impl From<VariantArg> for BoardVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Full => BoardVariant::Full,
            VariantArg::Punctured => BoardVariant::Punctured,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum XiMethod {
    Solve,
    Construct,
    Bounds,
}

#[derive(Copy, Clone, ValueEnum)]
enum CMethod {
    Solve,
    Lift,
}

#[derive(Args, Clone)]
struct SolveArgs {
    /// Solver worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Stop the exact search after this many seconds
    #[arg(long, value_name = "SECS")]
    time_limit: Option<f64>,
    /// Search without the symmetry reduction
    #[arg(long)]
    no_symmetry: bool,
}

impl SolveArgs {
    fn options(&self) -> Result<SolveOptions, Failure> {
        let time_limit = match self.time_limit {
            Some(s) if !(s.is_finite() && s > 0.0) => {
                return Err(Failure::Usage(format!(
                    "--time-limit must be positive, got {s}"
                )))
            }
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        if self.threads == Some(0) {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        Ok(SolveOptions {
            symmetry: !self.no_symmetry,
            time_limit,
            threads: self.threads,
        })
    }
}

#[derive(Args)]
struct XiArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value = "full")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "solve")]
    method: XiMethod,
    /// Print the cover document instead of the summary
    #[arg(long)]
    json: bool,
    /// Draw the board
    #[arg(long)]
    ascii: bool,
    /// Also write the cover document to this file
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args)]
struct CArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum, default_value = "solve")]
    method: CMethod,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long)]
    q: u32,
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("instance").required(true).args(["n", "q"]))]
struct LpArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_enum, default_value = "full", requires = "n")]
    variant: VariantArg,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    max_n: u32,
    #[arg(long, default_value_t = 0)]
    max_q: u32,
    #[command(flatten)]
    solve: SolveArgs,
}

enum Failure {
    /// A cover failed its check.
    Rejected(String),
    Usage(String),
    Timeout(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Timeout(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Rejected(m) | Failure::Usage(m) | Failure::Timeout(m) => m,
        }
    }
}

impl From<shortcover::Error> for Failure {
    fn from(e: shortcover::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn producer(what: &str) -> String {
    format!("shortcover {} {what}", env!("CARGO_PKG_VERSION"))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            emit(format_args!("{text}"));
            Ok(())
        }
    }
}

fn read_doc(path: &Path) -> Result<CoverDoc, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    doc::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn xi_name(variant: BoardVariant) -> &'static str {
    match variant {
        BoardVariant::Full => "xi",
        BoardVariant::Punctured => "xi_D",
    }
}

fn board_from_result(n: u32, variant: BoardVariant, r: &SolveResult) -> BoardCover {
    let centers = r.chosen.iter().filter_map(|l| match l {
        Label::Cell(p) => Some(*p),
        _ => None,
    });
    BoardCover::new(n, variant, centers).expect("solver returns cells of the board")
}

fn points_from_result(plane: &Plane, r: &SolveResult) -> Vec<ProjPoint> {
    r.chosen
        .iter()
        .filter_map(|l| match l {
            Label::Point(c) => {
                let coords = c.map(|i| plane.field().from_index(i).expect("solver labels"));
                Some(plane.point(coords).expect("solver labels"))
            }
            _ => None,
        })
        .collect()
}

fn list_centers(cover: &BoardCover) -> String {
    if cover.is_empty() {
        return "(none)".into();
    }
    let cells: Vec<String> = cover.centers().iter().map(|p| p.to_string()).collect();
    cells.join(" ")
}

fn list_points(plane: &Plane, points: &[ProjPoint]) -> String {
    let pts: Vec<String> = points
        .iter()
        .map(|&p| format!("({})", plane.format_point(p)))
        .collect();
    pts.join(" ")
}

fn timeout_note(r: &SolveResult) -> String {
    format!(
        "time limit reached after {} nodes; best cover has {} elements, lower bound {}",
        r.stats.nodes, r.optimum, r.lower_bound
    )
}

fn cmd_xi(args: &XiArgs) -> Result<(), Failure> {
    if args.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let (n, variant) = (args.n, BoardVariant::from(args.variant));
    let name = xi_name(variant);
    let (cover, headline, what, timed_out) = match args.method {
        XiMethod::Bounds => {
            let (lo, hi) = known_bounds(n, variant);
            if lo == hi {
                say!("{name}({n}) = {lo}");
            } else {
                say!("{lo} <= {name}({n}) <= {hi}");
            }
            return Ok(());
        }
        XiMethod::Construct => {
            let cover = construct(n, variant)?;
            let line = format!("{name}({n}) <= {} (construction)", cover.len());
            (cover, line, "xi --method construct", None)
        }
        XiMethod::Solve => {
            let inst = build_board_instance(n, variant)?;
            let r = solve_exact(&inst, &args.solve.options()?);
            let cover = board_from_result(n, variant, &r);
            if r.status == Status::Optimal {
                (
                    cover,
                    format!("{name}({n}) = {}", r.optimum),
                    "xi --method solve",
                    None,
                )
            } else {
                let line = format!("{name}({n}) <= {}", r.optimum);
                (cover, line, "xi --method solve", Some(timeout_note(&r)))
            }
        }
    };
    let document = doc::board_doc(&cover, None, &producer(what));
    if let Some(path) = &args.out {
        write_out(Some(path), &doc::render(&document))?;
    }
    if args.json {
        write_out(None, &doc::render(&document))?;
    } else {
        say!("{headline}");
        say!("centers (1-based): {}", list_centers(&cover));
        say!("verified: {}", yes_no(document.verified));
        if args.ascii {
            emit(format_args!("{}", render_ascii(&cover)));
        }
    }
    match timed_out {
        Some(note) => Err(Failure::Timeout(note)),
        None => Ok(()),
    }
}

fn check_q(q: u32) -> Result<(), Failure> {
    if prime_power(q).is_none() {
        return Err(Failure::Usage(format!("q = {q} is not a prime power")));
    }
    Ok(())
}

/// Best available punctured cover of `Z_n^2` for lifting: a construction for
/// even `n`, otherwise the solver's cover or the odd-block construction,
/// whichever is smaller.
fn board_for_lift(n: u32, opts: &SolveOptions) -> Result<(BoardCover, String), Failure> {
    if n.is_multiple_of(2) {
        return Ok((
            construct(n, BoardVariant::Punctured)?,
            "construction".into(),
        ));
    }
    let blocks = cover_odd_blocks(n)?.with_variant(BoardVariant::Punctured);
    let mut opts = opts.clone();
    opts.time_limit.get_or_insert(Duration::from_secs(60));
    let r = solve_exact(&build_board_instance(n, BoardVariant::Punctured)?, &opts);
    if r.optimum <= blocks.len() {
        let tag = if r.status == Status::Optimal {
            "solver, optimal"
        } else {
            "solver, time limit"
        };
        Ok((
            board_from_result(n, BoardVariant::Punctured, &r),
            tag.into(),
        ))
    } else {
        Ok((blocks, "construction".into()))
    }
}

fn cmd_c(args: &CArgs) -> Result<(), Failure> {
    check_q(args.q)?;
    let q = args.q;
    let plane = Plane::new(q)?;
    let opts = args.solve.options()?;
    match args.method {
        CMethod::Solve => {
            let r = solve_exact(&build_windrose_instance(q)?, &opts);
            let points = points_from_result(&plane, &r);
            let verified = plane.wind_rose_report(&points).covered;
            let cover = shortcover::ShortCover::new(
                plane.field_arc().clone(),
                points.iter().map(|p| p.vector()).collect(),
            )?;
            let document = doc::short_doc(&plane, &cover, &producer("c --method solve"));
            if let Some(path) = &args.out {
                write_out(Some(path), &doc::render(&document))?;
            }
            if args.json {
                write_out(None, &doc::render(&document))?;
            } else {
                let rel = if r.status == Status::Optimal {
                    "="
                } else {
                    "<="
                };
                say!("c({q}) {rel} {}", r.optimum);
                say!("centers: {}", list_points(&plane, &points));
                say!("verified: {}", yes_no(verified && document.verified));
            }
            if r.status != Status::Optimal {
                return Err(Failure::Timeout(timeout_note(&r)));
            }
        }
        CMethod::Lift => {
            if q < 5 {
                return Err(Failure::Usage(format!("lifting needs q >= 5, got q = {q}")));
            }
            let (board, source) = board_for_lift(q - 1, &opts)?;
            let cover = lift(&board, &plane)?;
            let document = doc::short_doc(&plane, &cover, &producer("c --method lift"));
            if let Some(path) = &args.out {
                write_out(Some(path), &doc::render(&document))?;
            }
            if args.json {
                write_out(None, &doc::render(&document))?;
            } else {
                let points = cover_points(&plane, &cover)?;
                say!("c({q}) <= {}", cover.len());
                say!(
                    "lifted from {} quowers on the punctured Z_{}^2 ({source})",
                    board.len(),
                    q - 1
                );
                say!("centers: {}", list_points(&plane, &points));
                say!("verified: {}", yes_no(document.verified));
            }
        }
    }
    Ok(())
}

fn cmd_lift(args: &ConvertArgs) -> Result<(), Failure> {
    check_q(args.q)?;
    let board = read_doc(&args.input)?
        .board()
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.input.display())))?;
    let plane = Plane::new(args.q)?;
    let cover = lift(&board, &plane)?;
    let document = doc::short_doc(&plane, &cover, &producer("lift"));
    write_out(args.out.as_deref(), &doc::render(&document))?;
    if args.out.is_some() {
        say!(
            "lifted {} quowers to {} balls over GF({}); verified: {}",
            board.len(),
            cover.len(),
            args.q,
            yes_no(document.verified)
        );
    }
    Ok(())
}

fn cmd_extract(args: &ConvertArgs) -> Result<(), Failure> {
    check_q(args.q)?;
    let (plane, cover) = read_doc(&args.input)?
        .short()
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.input.display())))?;
    if plane.q() != args.q {
        return Err(Failure::Usage(format!(
            "{} holds a cover over GF({}), not GF({})",
            args.input.display(),
            plane.q(),
            args.q
        )));
    }
    let points = cover_points(&plane, &cover)?;
    let normal = normalize_cover(&plane, &points)?;
    let board = extract(&plane, &normal)?;
    let document = doc::board_doc(&board, Some(plane.field()), &producer("extract"));
    write_out(args.out.as_deref(), &doc::render(&document))?;
    if args.out.is_some() {
        say!(
            "extracted {} quowers on the punctured Z_{}^2 from {} balls; verified: {}",
            board.len(),
            board.n(),
            cover.len(),
            yes_no(document.verified)
        );
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let document = read_doc(&args.input)?;
    let bad_input = |e: String| Failure::Usage(format!("{}: {e}", args.input.display()));
    let (size, description, uncovered) = match document.kind {
        doc::Kind::Board => {
            let cover = document.board().map_err(bad_input)?;
            let report = is_cover(&cover);
            let missed: Vec<String> = report.uncovered.iter().map(|p| p.to_string()).collect();
            let what = format!(
                "board cover of the {} Z_{}^2 with {} quowers",
                cover.variant().name(),
                cover.n(),
                cover.len()
            );
            (cover.len(), what, missed)
        }
        doc::Kind::Short => {
            let (plane, cover) = document.short().map_err(bad_input)?;
            let report = plane.is_short_cover(&cover)?;
            let f = plane.field();
            let missed: Vec<String> = report
                .uncovered
                .iter()
                .map(|v| {
                    let c = v.0.map(|x| f.format(x));
                    format!("({},{},{})", c[0], c[1], c[2])
                })
                .collect();
            let what = format!(
                "short cover of F_{}^3 with {} balls",
                plane.q(),
                cover.len()
            );
            (cover.len(), what, missed)
        }
    };
    let mut problems = Vec::new();
    if size != document.size {
        problems.push(format!(
            "declared size {} but {size} distinct centers",
            document.size
        ));
    }
    if !uncovered.is_empty() {
        problems.push(format!(
            "{} uncovered: {}",
            uncovered.len(),
            uncovered.join(" ")
        ));
    }
    if problems.is_empty() {
        say!("valid: {description}");
        Ok(())
    } else {
        say!("invalid: {description}");
        for p in &problems {
            say!("  {p}");
        }
        Err(Failure::Rejected(format!(
            "{} is not a valid cover",
            args.input.display()
        )))
    }
}

fn cmd_lp(args: &LpArgs) -> Result<(), Failure> {
    let inst = match (args.n, args.q) {
        (Some(n), None) => build_board_instance(n, args.variant.into())?,
        (None, Some(q)) => {
            check_q(q)?;
            build_windrose_instance(q)?
        }
        _ => return Err(Failure::Usage("give exactly one of --n and --q".into())),
    };
    write_out(args.out.as_deref(), &write_lp_string(&inst))
}

fn cmd_table(args: &TableArgs) -> Result<(), Failure> {
    let opts = args.solve.options()?;
    let mut timeouts = 0;
    let mut solve = |inst: shortcover::SetCoverInstance| -> String {
        let r = solve_exact(&inst, &opts);
        if r.status == Status::Optimal {
            format!("{} solver", r.optimum)
        } else {
            timeouts += 1;
            format!("{}..{} solver", r.lower_bound, r.optimum)
        }
    };
    let mut board_cell = |n: u32, variant: BoardVariant| -> Result<String, Failure> {
        let (lo, hi) = known_bounds(n, variant);
        if lo == hi {
            let built = construct(n, variant).ok().filter(|c| c.len() as u32 == lo);
            let tag = if built.is_some() {
                "construction"
            } else {
                "bound"
            };
            return Ok(format!("{lo} {tag}"));
        }
        Ok(solve(build_board_instance(n, variant)?))
    };
    say!("{:>4}  {:<18}{:<18}", "n", "xi(n)", "xi_D(n)");
    for n in 1..=args.max_n {
        let full = board_cell(n, BoardVariant::Full)?;
        let punctured = board_cell(n, BoardVariant::Punctured)?;
        say!("{n:>4}  {full:<18}{punctured:<18}");
    }
    let qs: Vec<u32> = (2..=args.max_q)
        .filter(|&q| prime_power(q).is_some())
        .collect();
    if !qs.is_empty() {
        say!("");
        say!("{:>4}  {:<18}", "q", "c(q)");
        for q in qs {
            let cell = if q >= 5 && q % 2 == 1 {
                // Lift of the even-order punctured construction, which meets
                // the lower bound.
                let (d, _) = known_bounds(q - 1, BoardVariant::Punctured);
                format!("{} construction", d + 2)
            } else {
                solve(build_windrose_instance(q)?)
            };
            say!("{q:>4}  {cell:<18}");
        }
    }
    if timeouts > 0 {
        return Err(Failure::Timeout(format!(
            "{timeouts} cells hit the time limit"
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Xi(a) => cmd_xi(a),
        Command::C(a) => cmd_c(a),
        Command::Lift(a) => cmd_lift(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Lp(a) => cmd_lp(a),
        Command::Table(a) => cmd_table(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
