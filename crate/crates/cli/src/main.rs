use std::process::ExitCode;

use apery::qbernoulli::QBernoulliParams;
use apery::report::{InstanceRecord, ReportValue, SuiteReport};
use apery::root_identities::{verify_height_sum, verify_poincare_products};
use apery::roots::{format_int_poly, macdonald_product, solomon_product};
use apery::sampling::{instance_rng, random_injective_table};
use apery::suite::{fixed_records, run_instance, InstanceSource, Suite, SuiteOptions};
use apery::{CanonicalPath, NumericalSemigroup, RootLabel, RootSystem};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "apery", version, about = "Numerical semigroups, Apéry sets and telescoping identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a semigroup, its Apéry set and its canonical path.
    Info {
        #[command(flatten)]
        semigroup: SemigroupArgs,
        /// Apéry modulus; defaults to the multiplicity.
        #[arg(long)]
        m: Option<u64>,
    },
    /// Run identity suites on seeded random or fixed instances.
    Verify(VerifyArgs),
    /// Describe a root system and check its height identities.
    Roots {
        /// Type letter (A..G) or full label such as G2 or E8.
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct SemigroupArgs {
    /// Comma-separated generators.
    #[arg(long, value_delimiter = ',')]
    gens: Option<Vec<u64>>,
    /// Comma-separated gaps.
    #[arg(long, value_delimiter = ',')]
    gaps: Option<Vec<u64>>,
}

impl SemigroupArgs {
    fn is_given(&self) -> bool {
        self.gens.is_some() || self.gaps.is_some()
    }

    fn build(&self) -> apery::Result<NumericalSemigroup> {
        match (&self.gens, &self.gaps) {
            (Some(gens), _) => NumericalSemigroup::from_generators(gens),
            (None, Some(gaps)) => NumericalSemigroup::from_gaps(gaps),
            (None, None) => Err(apery::Error::InvalidArgument(
                "one of --gens or --gaps is required".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    instances: u64,
    #[command(flatten)]
    semigroup: SemigroupArgs,
    /// Apéry modulus for a fixed semigroup; defaults to the multiplicity.
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Draw f with repeated values instead of an injective one.
    #[arg(long)]
    non_injective_f: bool,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    alpha: Option<u32>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Bernoulli order n for the q-Bernoulli checks.
    #[arg(long, default_value_t = 2)]
    order: u32,
    #[arg(long)]
    truncation_tol: Option<f64>,
    #[arg(long)]
    max_terms: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Info { semigroup, m } => info(&semigroup, m),
        Command::Verify(args) => verify(&args),
        Command::Roots { kind, rank, seed } => roots(&kind, rank, seed),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn list(values: impl IntoIterator<Item = impl ToString>) -> String {
    let parts: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn info(args: &SemigroupArgs, m: Option<u64>) -> apery::Result<bool> {
    let s = args.build()?;
    let m = m.unwrap_or_else(|| s.multiplicity());
    println!("semigroup: {s}");
    println!("gaps: {}", list(s.gaps()));
    println!("genus: {}", s.genus());
    match s.frobenius() {
        Some(f) => println!("frobenius: {f}"),
        None => println!("frobenius: none (all nonnegative integers)"),
    }
    println!("minimal generators: {}", list(s.minimal_generators()));
    let apery = s.apery_set(m)?;
    println!("apery set (m = {m}): {}", list(apery.values()));
    println!("A: {}", list(apery.counts()));
    let heights = s.height_partition(m)?;
    println!("height counts b: {}", list(heights.counts()));
    println!(
        "conjugacy of A and b: {}",
        if heights.is_conjugate_to(&apery) { "ok" } else { "FAILED" }
    );
    let path = CanonicalPath::new(&s, m)?;
    println!("canonical path: {} steps", path.len());
    for (i, step) in path.steps().iter().enumerate() {
        println!(
            "  step {}: c = {}, T = {}",
            i + 1,
            step.frobenius_added,
            list(&step.t_set)
        );
    }
    Ok(true)
}

fn suites(name: &str) -> apery::Result<Vec<Suite>> {
    if name == "all" {
        Ok(Suite::ALL.to_vec())
    } else {
        Ok(vec![name.parse()?])
    }
}

fn options(args: &VerifyArgs) -> apery::Result<SuiteOptions> {
    let base = QBernoulliParams::standard();
    let mut params = QBernoulliParams::new(
        args.q.unwrap_or(base.q),
        args.l.unwrap_or(base.l),
        args.y.unwrap_or(base.y),
        args.alpha.unwrap_or(base.alpha),
        args.lambda.unwrap_or(base.lambda),
    )?;
    if let Some(tol) = args.truncation_tol {
        params = params.with_tolerance(tol);
    }
    if let Some(max) = args.max_terms {
        params.max_terms = max;
    }
    params.validate()?;
    Ok(SuiteOptions {
        non_injective: args.non_injective_f,
        qbernoulli: params,
        bernoulli_order: args.order,
        ..SuiteOptions::default()
    })
}

fn verify(args: &VerifyArgs) -> apery::Result<bool> {
    let opts = options(args)?;
    let source = if args.semigroup.is_given() {
        let s = args.semigroup.build()?;
        let m = args.m.unwrap_or_else(|| s.multiplicity());
        // Surface a bad modulus before any work starts.
        s.apery_set(m)?;
        InstanceSource::Fixed(s, m)
    } else {
        InstanceSource::Random
    };
    let mut records: Vec<InstanceRecord> = Vec::new();
    for suite in suites(&args.suite)? {
        let per_instance: Vec<Vec<InstanceRecord>> = (0..args.instances)
            .into_par_iter()
            .map(|index| run_instance(suite, args.seed, index, &source, &opts))
            .collect::<apery::Result<_>>()?;
        records.extend(per_instance.into_iter().flatten());
        records.extend(fixed_records(suite, &opts)?);
    }
    let report = SuiteReport::new(&args.suite, args.seed, records);
    match args.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print_text(&report),
    }
    Ok(report.pass)
}

fn short(value: &ReportValue) -> String {
    let text = match value {
        ReportValue::Scalar(s) => s.clone(),
        ReportValue::Vector(v) => format!("[{}]", v.join(", ")),
    };
    if text.len() > 60 {
        format!("{}...", &text[..57])
    } else {
        text
    }
}

fn print_text(report: &SuiteReport) {
    let mut failures = 0;
    for r in &report.instances {
        let status = if r.equal { "ok  " } else { "FAIL" };
        let target = match (&r.semigroup, r.m) {
            (Some(s), Some(m)) => format!(" gaps={} m={m}", list(&s.gaps)),
            _ => String::new(),
        };
        let params = if r.params.is_empty() {
            String::new()
        } else {
            let parts: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!(" {}", parts.join(" "))
        };
        let sides = match r.residual {
            Some(res) => format!("residual {res:e}"),
            None => format!("{} = {}", short(&r.lhs), short(&r.rhs)),
        };
        println!("{status} {}{target}{params}: {sides}", r.identity);
        if let Some(w) = &r.witness {
            println!("     witness: {w}");
        }
        failures += usize::from(!r.equal);
    }
    println!(
        "suite {} seed {}: {} checks, {} failed",
        report.suite,
        report.seed,
        report.instances.len(),
        failures
    );
}

fn root_label(kind: &str, rank: Option<usize>) -> apery::Result<RootLabel> {
    match rank {
        Some(r) if kind.len() == 1 => format!("{kind}{r}").parse(),
        Some(r) => {
            let label: RootLabel = kind.parse()?;
            if label.rank != r {
                return Err(apery::Error::InvalidArgument(format!(
                    "label {kind} has rank {}, not {r}",
                    label.rank
                )));
            }
            Ok(label)
        }
        None => kind.parse(),
    }
}

fn roots(kind: &str, rank: Option<usize>, seed: u64) -> apery::Result<bool> {
    let rs = RootSystem::build(root_label(kind, rank)?)?;
    println!("system: {}", rs.label());
    println!("positive roots: {}", rs.positive_roots().len());
    println!("heights: {}", list(rs.heights()));
    println!("height counts b: {}", list(rs.height_counts()));
    println!("exponents: {}", list(rs.exponents()));
    let conjugate = rs.heights_conjugate_to_exponents();
    println!("conjugacy: {}", if conjugate { "ok" } else { "FAILED" });
    println!("poincare (exponents): {}", format_int_poly(&solomon_product(&rs)));
    println!("poincare (heights): {}", format_int_poly(&macdonald_product(&rs)?));
    let poincare = verify_poincare_products(&rs)?;
    println!("poincare equality: {}", if poincare.equal { "ok" } else { "FAILED" });
    let top = rs.exponents().last().copied().unwrap_or(0) + 1;
    let f = random_injective_table(&mut instance_rng(seed, 0), top);
    let height_sum = verify_height_sum(&rs, &f)?;
    println!(
        "height identity (seed {seed}): {} = {} {}",
        short(&height_sum.lhs),
        short(&height_sum.rhs),
        if height_sum.equal { "ok" } else { "FAILED" }
    );
    Ok(conjugate && poincare.equal && height_sum.equal)
}
