use std::io::Read;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use ddgk::gkestimate::{gk_report, DimSequence, GkReport};
use ddgk::growth::{
    check_lemma_inclusions, check_lower_bound, check_rk_upper, find_p, growth_csv, growth_json, power_dims, FindP,
    GeneratingSet, GrowthResult,
};
use ddgk::linbasis::DEFAULT_ATOM_BUDGET;
use ddgk::specio::{parse_ring_elem, presets};
use ddgk::{parse_expr, parse_spec, validate_presentation, DdAlgebra, DdElement, DdPresentation, RingSpec, Q};

#[derive(Parser)]
#[command(name = "ddgk", version, about = "Normal forms and growth of differential difference algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a presentation and print the validation report.
    Validate { file: String },
    /// Print the normal form of an expression.
    Nf { file: String, expr: String },
    /// Print the normal form of a product.
    Mul { file: String, left: String, right: String },
    /// Print the exact table dim(W^r).
    Growth {
        file: String,
        #[command(flatten)]
        gens: GensArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print degree estimates for the growth table.
    Gk {
        file: String,
        #[command(flatten)]
        gens: GensArgs,
    },
    /// Run one of the bound or lemma checkers.
    Check(CheckArgs),
    /// Print the text of a builtin presentation.
    Preset {
        name: String,
        /// Parameter as KEY=VALUE with an exact rational VALUE.
        #[arg(long = "param")]
        params: Vec<String>,
    },
}

#[derive(Args)]
struct GensArgs {
    /// Generators of W; defaults to V + D's + S's.
    #[arg(long, value_delimiter = ',')]
    gens: Vec<String>,
    #[arg(long)]
    rmax: usize,
    #[arg(long, default_value_t = DEFAULT_ATOM_BUDGET)]
    budget: usize,
}

#[derive(Args)]
#[group(skip)]
#[command(group(ArgGroup::new("mode").required(true).args(["lemmas", "lower_bound", "rk_upper", "find_p"])))]
struct CheckArgs {
    file: String,
    /// Subspace inclusion lemmas up to --smax.
    #[arg(long)]
    lemmas: bool,
    #[arg(long, default_value_t = 3)]
    smax: usize,
    #[arg(long, value_name = "R")]
    lower_bound: Option<usize>,
    #[arg(long, value_name = "R")]
    rk_upper: Option<usize>,
    #[arg(long, value_name = "P_MAX")]
    find_p: Option<usize>,
    /// Basis of V; defaults to 1, the ring variables and their inverses.
    #[arg(long, value_delimiter = ',')]
    v: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Status {
    Ok,
    CheckFailed,
    Truncated,
}

struct InputError(String);

type CliResult<T> = Result<T, InputError>;

fn read_source(path: &str) -> CliResult<String> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| InputError(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn load_presentation(path: &str) -> CliResult<DdPresentation> {
    let text = read_source(path)?;
    parse_spec(&text).map_err(|e| InputError(format!("{path}: {e}")))
}

fn load_algebra(path: &str) -> CliResult<DdAlgebra> {
    DdAlgebra::new(load_presentation(path)?).map_err(|e| InputError(format!("{path}: {e}")))
}

fn expr(alg: &DdAlgebra, text: &str) -> CliResult<DdElement> {
    parse_expr(alg, text).map_err(|e| InputError(format!("expression `{text}`: {e}")))
}

fn exprs(alg: &DdAlgebra, texts: &[String]) -> CliResult<Vec<DdElement>> {
    texts.iter().map(|t| expr(alg, t)).collect()
}

fn generating_set(alg: &DdAlgebra, args: &GensArgs) -> CliResult<GeneratingSet> {
    if args.rmax == 0 {
        return Err(InputError("--rmax must be positive".into()));
    }
    if args.budget == 0 {
        return Err(InputError("--budget must be positive".into()));
    }
    let g = if args.gens.is_empty() {
        GeneratingSet::new(presets::default_v_basis(alg), true, true, args.rmax)
    } else {
        GeneratingSet::from_generators(exprs(alg, &args.gens)?, args.rmax)
    };
    Ok(g.with_budget(args.budget))
}

fn growth_table(alg: &DdAlgebra, args: &GensArgs) -> CliResult<GrowthResult> {
    let g = generating_set(alg, args)?;
    power_dims(alg, &g).map_err(|e| InputError(e.to_string()))
}

fn report_truncation(res: &GrowthResult) -> Status {
    match &res.reason {
        Some(reason) if res.truncated => {
            eprintln!("truncated: {reason}");
            Status::Truncated
        }
        _ => Status::Ok,
    }
}

fn gk_text(rep: &GkReport) -> String {
    let show = |v: Option<usize>| v.map_or_else(|| "none".to_string(), |d| d.to_string());
    let pointwise: Vec<String> = rep.slope_estimates.iter().map(|(r, v)| format!("{r}:{v:.4}")).collect();
    format!(
        "difference degree: {}\nslope over r = {}..{}: {:.4}\npointwise: {}\nverdict: {}\n",
        show(rep.difference_degree),
        rep.window.0,
        rep.window.1,
        rep.slope_window,
        pointwise.join(" "),
        show(rep.verdict),
    )
}

fn parse_param(ring: &RingSpec, text: &str) -> CliResult<(String, Q)> {
    let (key, value) = text.split_once('=').ok_or_else(|| InputError(format!("parameter `{text}`: expected KEY=VALUE")))?;
    let v = parse_ring_elem(ring, value)
        .ok()
        .and_then(|e| e.as_constant())
        .ok_or_else(|| InputError(format!("parameter `{key}`: `{value}` is not a rational")))?;
    Ok((key.trim().to_string(), v))
}

fn check(args: &CheckArgs) -> CliResult<Status> {
    let alg = load_algebra(&args.file)?;
    let v = if args.v.is_empty() { presets::default_v_basis(&alg) } else { exprs(&alg, &args.v)? };
    let fail = |e: ddgk::Error| InputError(e.to_string());
    let passed = if args.lemmas {
        let rep = check_lemma_inclusions(&alg, &v, args.smax).map_err(fail)?;
        print!("{}", rep.render());
        rep.all_applicable_pass()
    } else if let Some(r) = args.lower_bound {
        let rep = check_lower_bound(&alg, &v, r).map_err(fail)?;
        let w = rep.dim_w_3r.map_or_else(|| "unknown".to_string(), |d| d.to_string());
        println!(
            "r = {}: dim(W^{}) = {w} >= dim(V^r) * #alpha * #beta = {} * {} * {} = {}",
            rep.r,
            3 * rep.r,
            rep.dim_v_r,
            rep.card_alpha,
            rep.card_beta,
            rep.required
        );
        if rep.truncated {
            eprintln!("truncated: atom budget exhausted");
            return Ok(Status::Truncated);
        }
        println!("{}", if rep.passed { "pass" } else { "fail" });
        rep.passed
    } else if let Some(r_max) = args.rk_upper {
        let rep = check_rk_upper(&alg, r_max).map_err(fail)?;
        for row in &rep.rows {
            println!("r = {}: {} <= {} {}", row.r, row.dim, row.bound, if row.passed { "ok" } else { "FAIL" });
        }
        if rep.truncated {
            eprintln!("truncated: atom budget exhausted");
            return Ok(Status::Truncated);
        }
        println!("{}", if rep.passed { "pass" } else { "fail" });
        rep.passed
    } else if let Some(p_max) = args.find_p {
        match find_p(&alg, &v, p_max).map_err(fail)? {
            FindP::Found(p) => {
                println!("p = {p}");
                true
            }
            FindP::NotSigmaStable => {
                println!("V is not sigma-stable");
                false
            }
            FindP::NotFound => {
                println!("no p <= {p_max}");
                false
            }
        }
    } else {
        unreachable!("clap enforces one mode")
    };
    Ok(if passed { Status::Ok } else { Status::CheckFailed })
}

fn run(cli: Cli) -> CliResult<Status> {
    match cli.command {
        Command::Validate { file } => {
            let p = load_presentation(&file)?;
            let rep = validate_presentation(&p).map_err(|e| InputError(format!("{file}: {e}")))?;
            print!("{}", rep.render());
            Ok(if rep.is_valid() { Status::Ok } else { Status::CheckFailed })
        }
        Command::Nf { file, expr: text } => {
            let alg = load_algebra(&file)?;
            println!("{}", expr(&alg, &text)?.render(alg.ring()));
            Ok(Status::Ok)
        }
        Command::Mul { file, left, right } => {
            let alg = load_algebra(&file)?;
            let (a, b) = (expr(&alg, &left)?, expr(&alg, &right)?);
            println!("{}", alg.mul_elem(&a, &b).render(alg.ring()));
            Ok(Status::Ok)
        }
        Command::Growth { file, gens, format } => {
            let alg = load_algebra(&file)?;
            let res = growth_table(&alg, &gens)?;
            match format {
                Format::Csv => print!("{}", growth_csv(&res)),
                Format::Json => {
                    let gk = gk_report(&DimSequence::from_dims(&res.dims)).ok();
                    print!("{}", growth_json(&res, &alg.presentation().fingerprint(), gk.as_ref()));
                }
            }
            Ok(report_truncation(&res))
        }
        Command::Gk { file, gens } => {
            let alg = load_algebra(&file)?;
            let res = growth_table(&alg, &gens)?;
            let rep = gk_report(&DimSequence::from_dims(&res.dims)).map_err(|e| InputError(e.to_string()))?;
            print!("{}", gk_text(&rep));
            Ok(report_truncation(&res))
        }
        Command::Check(args) => check(&args),
        Command::Preset { name, params } => {
            let field = RingSpec::field();
            let params = params.iter().map(|p| parse_param(&field, p)).collect::<CliResult<Vec<_>>>()?;
            let preset = presets::by_name(&name, &params).map_err(|e| InputError(e.to_string()))?;
            print!("{}", preset.spec_text());
            Ok(Status::Ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(1),
        Ok(Status::Truncated) => ExitCode::from(3),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
