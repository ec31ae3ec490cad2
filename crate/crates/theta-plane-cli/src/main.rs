use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use theta_plane::{
    format_coeff, format_element, format_matrix, format_named_elements, k0_class,
    make_test_projector, parse_element, parse_matrix, parse_named_elements, top_gram_check,
    trivialize, AlgMatrix, AlgebraSignature, Element, Error, JetContext, MultiIndex, ThetaMatrix,
};

/// Exact and numeric computation over twisted polynomial coordinate rings:
/// normal forms, star, matrix products, projector checks, trivializing
/// unitaries and K-theory classes.
#[derive(Parser)]
#[command(name = "thetaplane", version, max_term_width = 100)]
struct Cli {
    /// Deformation-angle config file (required for numeric mode and `eval`)
    #[arg(long, global = true, value_name = "FILE")]
    theta: Option<PathBuf>,

    /// Coefficient arithmetic for element commands
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,

    /// Working truncation degree: products are computed modulo terms of
    /// higher total degree
    #[arg(long, global = true, value_name = "D", default_value_t = 4)]
    degree: u32,

    /// Coefficient tolerance for numeric-mode comparisons
    #[arg(long, global = true, value_name = "T", default_value_t = 1e-9)]
    tol: f64,

    /// Seed for `gen-test`
    #[arg(long, global = true, value_name = "S", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Subcommand)]
enum Cmd {
    /// Multiply two matrix files and print the product in canonical text
    Mul {
        a: PathBuf,
        b: PathBuf,
    },
    /// Apply the star operation to an element
    Star(ElementInput),
    /// Print the normal form of an element
    Normalize(ElementInput),
    /// Evaluate an element's phase coefficients at the deformation angles
    Eval(ElementInput),
    /// Check whether a matrix file holds a projector (self-adjoint idempotent
    /// modulo the working degree); prints yes, or no with the leading
    /// violating coefficient
    Projcheck {
        file: PathBuf,
    },
    /// Construct the unitary that conjugates a projector to constant diagonal
    /// form, write it to a file, and print the rank/residual report
    Trivialize {
        file: PathBuf,
        /// Output path for the unitary
        #[arg(short, long, value_name = "FILE", default_value = "U.mat")]
        out: PathBuf,
    },
    /// Print the K-theory class of a projector as a signed integer
    K0 {
        file: PathBuf,
    },
    /// Write a seeded test projector (a conjugate of a constant diagonal
    /// projector by a truncated-exponential unitary)
    GenTest(GenTestArgs),
    /// Print one diagonal coefficient of the Gram expansion of a matrix row:
    /// the coefficient of z^M zbar^M in sum_l P[k,l] * star(P[k,l])
    Gram {
        file: PathBuf,
        /// Row to expand (1-based)
        #[arg(short = 'k', value_name = "K")]
        row: u32,
        /// Exponent vector M as comma-separated integers, one per coordinate
        /// pair
        #[arg(short = 'M', long = "exponents", value_name = "m1,m2,...", value_delimiter = ',')]
        exponents: Vec<u32>,
    },
}

#[derive(Args)]
struct ElementInput {
    /// Number of conjugate coordinate pairs (defaults to the Θ config's size
    /// in numeric mode)
    #[arg(short = 'n', long = "pairs", value_name = "N")]
    pairs: Option<u32>,

    /// Include the central self-adjoint generator x (dimension m = 2n+1)
    #[arg(long)]
    odd: bool,

    #[command(flatten)]
    source: ExprOrFile,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ExprOrFile {
    /// Expression to process
    #[arg(short = 'e', long = "expr", value_name = "EXPR")]
    expr: Option<String>,

    /// File of `name = expression` lines
    #[arg(short = 'f', long = "file", value_name = "FILE")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct GenTestArgs {
    /// Number of conjugate coordinate pairs
    #[arg(short = 'n', long = "pairs", value_name = "N")]
    pairs: Option<u32>,

    /// Include the central self-adjoint generator x (dimension m = 2n+1)
    #[arg(long)]
    odd: bool,

    /// Matrix size
    #[arg(short = 'N', long = "size", value_name = "SIZE")]
    size: usize,

    /// Rank of the generated projector
    #[arg(short = 'r', long = "rank", value_name = "RANK")]
    rank: usize,

    /// Output path
    #[arg(short, long, value_name = "FILE")]
    out: PathBuf,
}

enum Failure {
    Domain(Error),
    Io(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(e) if e.is_syntax() => 2,
            Failure::Domain(_) => 1,
            Failure::Io(_) | Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Domain(e) => e.to_string(),
            Failure::Io(m) | Failure::Usage(m) => m.clone(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
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

fn run(cli: Cli) -> Result<(), Failure> {
    let theta = load_theta(cli.theta.as_deref())?;
    if cli.mode == ModeArg::Numeric && theta.is_none() {
        return Err(Failure::Usage(
            "numeric mode requires --theta FILE".into(),
        ));
    }
    let ctx = JetContext::new(cli.degree, cli.tol)?;

    match &cli.cmd {
        Cmd::Mul { a, b } => {
            let ma = read_matrix(a, &theta)?;
            let mb = read_matrix(b, &theta)?;
            let prod = ma.mul(&mb, Some(&ctx))?;
            print!("{}", format_matrix(&prod));
        }
        Cmd::Star(input) => {
            for_each_element(input, &cli, &theta, |e| Ok(e.star()))?;
        }
        Cmd::Normalize(input) => {
            for_each_element(input, &cli, &theta, Ok)?;
        }
        Cmd::Eval(input) => {
            let th = theta.clone().ok_or_else(|| {
                Failure::Usage("eval requires --theta FILE".into())
            })?;
            for_each_element(input, &cli, &theta, |e| {
                if e.sig().is_exact() {
                    Ok(e.eval(&th)?)
                } else {
                    Ok(e)
                }
            })?;
        }
        Cmd::Projcheck { file } => {
            let p = read_matrix(file, &theta)?;
            projcheck(&p, &ctx)?;
        }
        Cmd::Trivialize { file, out } => {
            let p = read_matrix(file, &theta)?;
            let result = trivialize(&p, &ctx)?;
            write_file(out, &format_matrix(&result.u))?;
            println!("{}", result.report());
        }
        Cmd::K0 { file } => {
            let p = read_matrix(file, &theta)?;
            println!("{}", k0_class(&p, &ctx)?);
        }
        Cmd::GenTest(args) => {
            let sig = signature(args.pairs, args.odd, cli.mode, &theta)?;
            let (p, _) = make_test_projector(&sig, cli.seed, args.size, args.rank, cli.degree)?;
            write_file(&args.out, &format_matrix(&p))?;
            println!(
                "wrote {}: size={} rank={} degree={} seed={}",
                args.out.display(),
                args.size,
                args.rank,
                cli.degree,
                cli.seed
            );
        }
        Cmd::Gram {
            file,
            row,
            exponents,
        } => {
            let p = read_matrix(file, &theta)?;
            if *row == 0 || *row as usize > p.size() {
                return Err(Failure::Usage(format!(
                    "row must be in 1..={}, got {row}",
                    p.size()
                )));
            }
            let c = top_gram_check(&p, *row as usize - 1, exponents)?;
            println!("{}", format_coeff(&c));
        }
    }
    Ok(())
}

fn load_theta(path: Option<&Path>) -> Result<Option<Arc<ThetaMatrix>>, Failure> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = read_file(p)?;
            Ok(Some(Arc::new(ThetaMatrix::parse_config(&text)?)))
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn read_matrix(path: &Path, theta: &Option<Arc<ThetaMatrix>>) -> Result<AlgMatrix, Failure> {
    let text = read_file(path)?;
    Ok(parse_matrix(&text, theta.clone())?)
}

/// Builds the algebra signature for element commands from the flags.
fn signature(
    pairs: Option<u32>,
    odd: bool,
    mode: ModeArg,
    theta: &Option<Arc<ThetaMatrix>>,
) -> Result<AlgebraSignature, Failure> {
    let n = match (pairs, theta) {
        (Some(n), Some(th)) if mode == ModeArg::Numeric && n != th.n() => {
            return Err(Failure::Usage(format!(
                "-n {n} disagrees with the Θ config (n={})",
                th.n()
            )));
        }
        (Some(n), _) => n,
        (None, Some(th)) if mode == ModeArg::Numeric => th.n(),
        (None, _) => {
            return Err(Failure::Usage(
                "specify the number of coordinate pairs with -n".into(),
            ));
        }
    };
    let m = if odd { 2 * n + 1 } else { 2 * n };
    let sig = match mode {
        ModeArg::Exact => AlgebraSignature::exact(n, m)?,
        ModeArg::Numeric => {
            AlgebraSignature::numeric(m, theta.clone().expect("checked in run"))?
        }
    };
    Ok(sig)
}

fn for_each_element(
    input: &ElementInput,
    cli: &Cli,
    theta: &Option<Arc<ThetaMatrix>>,
    f: impl Fn(Element) -> Result<Element, Failure>,
) -> Result<(), Failure> {
    let sig = signature(input.pairs, input.odd, cli.mode, theta)?;
    match (&input.source.expr, &input.source.file) {
        (Some(expr), None) => {
            let e = parse_element(expr, &sig)?;
            println!("{}", format_element(&f(e)?));
        }
        (None, Some(path)) => {
            let text = read_file(path)?;
            let items = parse_named_elements(&text, &sig)?;
            let mut out = Vec::with_capacity(items.len());
            for (name, e) in items {
                out.push((name, f(e)?));
            }
            print!("{}", format_named_elements(&out));
        }
        _ => unreachable!("clap enforces exactly one source"),
    }
    Ok(())
}

/// Prints `yes`, or `no` plus the leading violating coefficient of the
/// idempotency or self-adjointness defect.
fn projcheck(p: &AlgMatrix, ctx: &JetContext) -> Result<(), Failure> {
    let trunc = p.truncate(ctx.degree);
    let idem = trunc.mul(&trunc, Some(ctx))?.sub(&trunc)?;
    let herm = trunc.sub(&trunc.adjoint())?;
    let tol = if p.sig().is_exact() { 0.0 } else { ctx.tol };
    if let Some((cell, idx, coeff)) = leading_violation(&idem, tol) {
        println!("no");
        println!(
            "idempotency fails at cell [{},{}], index {}: {}",
            cell.0 + 1,
            cell.1 + 1,
            index_text(&idx, p.sig().has_central()),
            format_coeff(&coeff)
        );
        return Ok(());
    }
    if let Some((cell, idx, coeff)) = leading_violation(&herm, tol) {
        println!("no");
        println!(
            "self-adjointness fails at cell [{},{}], index {}: {}",
            cell.0 + 1,
            cell.1 + 1,
            index_text(&idx, p.sig().has_central()),
            format_coeff(&coeff)
        );
        return Ok(());
    }
    println!("yes");
    Ok(())
}

/// The nonzero coefficient of largest canonical index across all cells of a
/// defect matrix, if any survives the tolerance.
fn leading_violation(
    defect: &AlgMatrix,
    tol: f64,
) -> Option<((usize, usize), MultiIndex, theta_plane::Coeff)> {
    let mut best: Option<((usize, usize), MultiIndex, theta_plane::Coeff)> = None;
    for (cell, e) in defect.entries() {
        for (idx, c) in e.terms() {
            if c.magnitude_f64() <= tol {
                continue;
            }
            if best.as_ref().is_none_or(|(_, bi, _)| idx > bi) {
                best = Some((cell, idx.clone(), c.clone()));
            }
        }
    }
    best
}

fn index_text(idx: &MultiIndex, odd: bool) -> String {
    let join = |v: &[u32]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    if odd {
        format!("({};{};{})", join(idx.p()), join(idx.q()), idx.t())
    } else {
        format!("({};{})", join(idx.p()), join(idx.q()))
    }
}
