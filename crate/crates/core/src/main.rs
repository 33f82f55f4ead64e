//! Command-line front end: build construction files, compute invariant
//! reports, tabulate families, draw SVG diagrams, and interrogate
//! intersection lattices.
//!
//! Exit codes: 0 success, 2 schema or parameter error, 3 geometric
//! degeneracy, 4 refused certificate, 5 family discrepancy. All output
//! is byte-deterministic; failures print one structured JSON line on
//! stderr carrying the offending object's description.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use brieskorn::lattice::{
    build_lattice, phi_factorization, total_monodromy, twist_product, verify_spectrum, Exponents,
    LatticeError,
};
use brieskorn::exact::poly_to_string;
use brieskorn::render::render_svg;
use brieskorn::report::{
    build_construction, catalog_text, construction_text, enforce_a3, has_refusal,
    invariant_report, lambda_gcd_catalog, load_construction, report_text, t_slice_catalog,
    to_json, Failure,
};

#[derive(Parser)]
#[command(
    name = "brieskorn",
    version,
    about = "Exact combinatorial invariants of fibered monotone Lagrangians"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Realize a recipe into a self-verifying construction file.
    Build(BuildArgs),
    /// Compute the invariant report of a construction.
    Invariants(InvariantsArgs),
    /// Tabulate a parameter family and cross-check its distinctness.
    Family(FamilyArgs),
    /// Draw a construction as a deterministic SVG diagram.
    Render(RenderArgs),
    /// Interrogate the intersection lattice of an exponent list.
    Lattice(LatticeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Svg,
}

#[derive(Args)]
struct IoArgs {
    /// Write the result to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct InputArgs {
    /// A recipe or construction file, either a path or a name resolved
    /// against the corpus directory.
    input: String,
    /// Directory of named recipes.
    #[arg(long, default_value = "corpus")]
    corpus: PathBuf,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct InvariantsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    io: IoArgs,
    /// Restrict to the first three cycles: any use of the fourth is a
    /// schema error.
    #[arg(long)]
    a3: bool,
    /// Assert that the computation draws no randomness (it never does);
    /// the assertion is recorded in the report.
    #[arg(long)]
    seed_free: bool,
}

#[derive(Args)]
struct FamilyArgs {
    #[command(subcommand)]
    which: FamilySelect,
}

#[derive(Subcommand)]
enum FamilySelect {
    /// The slice T_{k,k+c,m} for 0 <= k <= k_max: equal soft
    /// invariants, separated by the certified rank against S2.
    Torus {
        #[arg(long)]
        c: i64,
        #[arg(long)]
        k_max: i64,
        #[arg(long, default_value_t = 0)]
        m: i64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Linear chains separated by their displacement gcd; list them as
    /// semicolon-separated groups of comma-separated k:l pairs, e.g.
    /// "0:2,0:4;0:3,0:6".
    Chains {
        #[arg(long, default_value = "")]
        list: String,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Write the drawing to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (drawings are always SVG).
    #[arg(long, value_enum, default_value = "svg")]
    format: Format,
}

#[derive(Args)]
struct LatticeArgs {
    /// Comma-separated exponent list, e.g. "3,3" or "2,4,4".
    #[arg(long)]
    exponents: String,
    /// Verify the fractional factorization identity phi^k == nu^b for
    /// this k (requires the last exponent to be k times the lcm of the
    /// others).
    #[arg(long)]
    phi_power: Option<i64>,
    #[command(flatten)]
    io: IoArgs,
}

// ---------------------------------------------------------------------------

fn lattice_failure(e: LatticeError) -> Failure {
    match e {
        LatticeError::SpectrumMismatch { .. } => Failure::Discrepancy(e.to_string()),
        _ => Failure::Schema(e.to_string()),
    }
}

fn read_input(args: &InputArgs) -> Result<String, Failure> {
    let direct = Path::new(&args.input);
    let path = if direct.is_file() {
        direct.to_path_buf()
    } else {
        let mut named = args.corpus.join(&args.input);
        if named.extension().is_none() {
            named.set_extension("json");
        }
        if !named.is_file() {
            return Err(Failure::Schema(format!(
                "no construction named {:?} (not a file, and {:?} does not exist)",
                args.input, named
            )));
        }
        named
    };
    fs::read_to_string(&path)
        .map_err(|e| Failure::Schema(format!("cannot read {:?}: {}", path, e)))
}

fn write_output(rendered: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| Failure::Schema(format!("cannot write {:?}: {}", path, e))),
        None => {
            print!("{}", rendered);
            Ok(())
        }
    }
}

fn reject_svg(io: &IoArgs, verb: &str) -> Result<(), Failure> {
    if io.format == Format::Svg {
        return Err(Failure::Schema(format!(
            "the {} verb emits json or text; drawings come from the render verb",
            verb
        )));
    }
    Ok(())
}

fn cmd_build(args: BuildArgs) -> Result<(), Failure> {
    reject_svg(&args.io, "build")?;
    let text = read_input(&args.input)?;
    let (spec, _) = load_construction(&text)?;
    let (file, _) = build_construction(&spec)?;
    let rendered = match args.io.format {
        Format::Json => to_json(&file),
        Format::Text => construction_text(&file),
        Format::Svg => unreachable!(),
    };
    write_output(&rendered, args.io.out.as_deref())
}

fn cmd_invariants(args: InvariantsArgs) -> Result<(), Failure> {
    reject_svg(&args.io, "invariants")?;
    let text = read_input(&args.input)?;
    let (spec, construction) = load_construction(&text)?;
    let mut flags = Vec::new();
    if args.a3 {
        enforce_a3(&construction)?;
        flags.push("a3".to_string());
    }
    if args.seed_free {
        flags.push("seed-free".to_string());
    }
    let report = invariant_report(&spec, &construction, &flags)?;
    let rendered = match args.io.format {
        Format::Json => to_json(&report),
        Format::Text => report_text(&report),
        Format::Svg => unreachable!(),
    };
    write_output(&rendered, args.io.out.as_deref())?;
    if has_refusal(&report) {
        let refused: Vec<&str> = report
            .hard
            .hf
            .iter()
            .filter(|e| e.status != "certified")
            .map(|e| e.sphere.as_str())
            .collect();
        return Err(Failure::NotCertified(format!(
            "rank not certified against {}; the report carries the offending candidate discs",
            refused.join(", ")
        )));
    }
    Ok(())
}

fn parse_chain_list(list: &str) -> Result<Vec<Vec<(i64, i64)>>, Failure> {
    let mut chains = Vec::new();
    for group in list.split(';') {
        let group = group.trim();
        if group.is_empty() {
            continue;
        }
        let mut pairs = Vec::new();
        for pair in group.split(',') {
            let pair = pair.trim();
            let (k, l) = pair.split_once(':').ok_or_else(|| {
                Failure::Schema(format!("chain entry {:?} is not of the form k:l", pair))
            })?;
            let parse = |s: &str| {
                s.trim().parse::<i64>().map_err(|_| {
                    Failure::Schema(format!("chain entry {:?} has a non-integer part", pair))
                })
            };
            pairs.push((parse(k)?, parse(l)?));
        }
        chains.push(pairs);
    }
    Ok(chains)
}

fn cmd_family(args: FamilyArgs) -> Result<(), Failure> {
    let (catalog, io) = match args.which {
        FamilySelect::Torus { c, k_max, m, io } => {
            reject_svg(&io, "family")?;
            (t_slice_catalog(c, k_max, m)?, io)
        }
        FamilySelect::Chains { list, io } => {
            reject_svg(&io, "family")?;
            (lambda_gcd_catalog(&parse_chain_list(&list)?)?, io)
        }
    };
    let rendered = match io.format {
        Format::Json => to_json(&catalog),
        Format::Text => catalog_text(&catalog),
        Format::Svg => unreachable!(),
    };
    write_output(&rendered, io.out.as_deref())?;
    if !catalog.discrepancies.is_empty() {
        return Err(Failure::Discrepancy(format!(
            "{} discrepancies in the family table; see the catalog",
            catalog.discrepancies.len()
        )));
    }
    Ok(())
}

fn cmd_render(args: RenderArgs) -> Result<(), Failure> {
    if args.format != Format::Svg {
        return Err(Failure::Schema(
            "the render verb only emits svg; reports come from the invariants verb".to_string(),
        ));
    }
    let text = read_input(&args.input)?;
    let (spec, construction) = load_construction(&text)?;
    let svg = render_svg(&spec, &construction)?;
    write_output(&svg, args.out.as_deref())
}

#[derive(Serialize)]
struct PhiCheck {
    k: i64,
    b: i64,
    factors: usize,
    holds: bool,
}

#[derive(Serialize)]
struct LatticeReport {
    schema: String,
    exponents: Vec<i64>,
    rank: usize,
    /// Ascending coefficients `c0 c1 ... cn` of `det(tI - nu)`.
    charpoly_ascending: String,
    spectrum_verified: bool,
    monodromy_order_divides: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<PhiCheck>,
}

fn lattice_report(args: &LatticeArgs) -> Result<LatticeReport, Failure> {
    let mut exps = Vec::new();
    for part in args.exponents.split(',') {
        let part = part.trim();
        exps.push(part.parse::<i64>().map_err(|_| {
            Failure::Schema(format!("exponent {:?} is not an integer", part))
        })?);
    }
    let e = Exponents::new(exps).map_err(lattice_failure)?;
    if e.rank() > 128 {
        return Err(Failure::Schema(format!(
            "rank {} exceeds the command-line oracle cap of 128",
            e.rank()
        )));
    }
    let lat = build_lattice(&e);
    // The oracle: twist-product spectrum must match the classical one.
    let charpoly = verify_spectrum(&lat).map_err(lattice_failure)?;
    let phi = match args.phi_power {
        None => None,
        Some(k) => {
            let indices = phi_factorization(&e, k).map_err(lattice_failure)?;
            let phi = twist_product(&lat, &indices).map_err(lattice_failure)?;
            let holds = phi.pow(k as u64) == total_monodromy(&lat).pow(e.b() as u64);
            if !holds {
                return Err(Failure::Discrepancy(format!(
                    "phi^{} differs from nu^{} for exponents {:?}",
                    k,
                    e.b(),
                    e.list()
                )));
            }
            Some(PhiCheck { k, b: e.b(), factors: indices.len(), holds })
        }
    };
    Ok(LatticeReport {
        schema: "lattice-report/1".to_string(),
        exponents: e.list().to_vec(),
        rank: e.rank(),
        charpoly_ascending: poly_to_string(&charpoly),
        spectrum_verified: true,
        monodromy_order_divides: e.lcm_all(),
        phi,
    })
}

fn lattice_text(report: &LatticeReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "lattice of exponents ({})\n",
        report.exponents.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
    ));
    out.push_str(&format!("  rank: {}\n", report.rank));
    out.push_str(&format!("  characteristic polynomial (ascending coefficients): {}\n", report.charpoly_ascending));
    out.push_str("  spectrum oracle: twist product matches the classical spectrum\n");
    out.push_str(&format!("  monodromy order divides {}\n", report.monodromy_order_divides));
    if let Some(phi) = &report.phi {
        out.push_str(&format!(
            "  factorization: phi^{} == nu^{} across {} twist factors\n",
            phi.k, phi.b, phi.factors
        ));
    }
    out
}

fn cmd_lattice(args: LatticeArgs) -> Result<(), Failure> {
    reject_svg(&args.io, "lattice")?;
    let report = lattice_report(&args)?;
    let rendered = match args.io.format {
        Format::Json => to_json(&report),
        Format::Text => lattice_text(&report),
        Format::Svg => unreachable!(),
    };
    write_output(&rendered, args.io.out.as_deref())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.verb {
        Verb::Build(args) => cmd_build(args),
        Verb::Invariants(args) => cmd_invariants(args),
        Verb::Family(args) => cmd_family(args),
        Verb::Render(args) => cmd_render(args),
        Verb::Lattice(args) => cmd_lattice(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let line = serde_json::json!({
                "error": { "kind": failure.label(), "message": failure.message() }
            });
            eprintln!("{}", line);
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
