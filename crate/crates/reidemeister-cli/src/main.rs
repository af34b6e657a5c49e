//! Command-line front end: spectra, single Reidemeister numbers,
//! verification sweeps, gcd witnesses and case classification, with JSON
//! output for downstream tooling.
//!
//! Exit codes: 0 success/agreement, 1 validation error, 2 disagreement
//! between methods, 3 budget exceeded.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use reidemeister::autos::{
    enumerate_automorphisms, reidemeister_spectrum_bruteforce, reidemeister_via_classes,
    twisted_class_count, Automorphism,
};
use reidemeister::characters::{ch1_fixed, chp_fixed_direct, reidemeister_via_characters};
use reidemeister::group::{decompose_fixed_part, enumerate_groups, valid_alphas};
use reidemeister::modarith::{gcd_u, gcd_witness, mod_pow, WitnessProblem};
use reidemeister::spectrum::{classify_case, spec_full, Spectrum};
use reidemeister::{Budget, Error, SmcGroup};

const EXIT_OK: i32 = 0;
const EXIT_INVALID: i32 = 1;
const EXIT_DISAGREE: i32 = 2;
const EXIT_BUDGET: i32 = 3;

#[derive(Parser)]
#[command(
    name = "reidemeister",
    version,
    about = "Reidemeister numbers and spectra of split metacyclic groups (C_n x C_p^m) : C_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reidemeister spectrum of the group with the given parameters
    Spectrum(SpectrumArgs),
    /// R(phi) for the automorphism phi(x) = x^gamma, phi(y) = x^a y
    Reidemeister(ReidemeisterArgs),
    /// Sweep every valid parameter set within the budget and cross-check
    /// the closed-form spectra against the exhaustive oracles
    Verify(VerifyArgs),
    /// Solve for gamma with prescribed gcd(gamma - a^i, n) = d_i
    Witness(WitnessArgs),
    /// Show the decomposition and spectrum case of a parameter set
    Classify(ClassifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Bruteforce,
    Characters,
    Both,
    All,
}

impl Method {
    fn wants_formula(self) -> bool {
        matches!(self, Method::Formula | Method::Both | Method::All)
    }

    fn wants_bruteforce(self) -> bool {
        matches!(self, Method::Bruteforce | Method::Both | Method::All)
    }

    fn wants_characters(self) -> bool {
        matches!(self, Method::Characters | Method::All)
    }
}

#[derive(Args)]
struct GroupParams {
    /// order of the coprime part of the cyclic normal subgroup
    #[arg(long)]
    n: u64,
    /// exponent of the p-power part, `|<x>| = n * p^m`
    #[arg(long)]
    m: u32,
    /// prime order of the acting group
    #[arg(long)]
    p: u64,
}

#[derive(Args)]
struct OutputOpts {
    /// print records as JSON instead of text
    #[arg(long)]
    json: bool,
    /// also write the JSON records to a file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// worker threads for sweeps (0 = one per core)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    group: GroupParams,
    /// action exponent mod n * p^m; omitted = one record per valid alpha
    #[arg(long)]
    alpha: Option<i64>,
    #[arg(long, value_enum, default_value_t = Method::Formula)]
    method: Method,
    /// largest group order the exhaustive methods may walk
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// largest automorphism count an enumeration may produce
    #[arg(long, default_value_t = 100_000)]
    aut_budget: u64,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct ReidemeisterArgs {
    #[command(flatten)]
    group: GroupParams,
    #[arg(long)]
    alpha: i64,
    /// exponent of phi(x) = x^gamma
    #[arg(long)]
    gamma: u64,
    /// exponent a of phi(y) = x^a y
    #[arg(long, default_value_t = 0)]
    a_img: u64,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 100_000)]
    aut_budget: u64,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct VerifyArgs {
    /// sweep bound: every group with |G| <= budget is checked
    #[arg(long, default_value_t = 2_000)]
    budget: u64,
    /// automorphism bound; the default covers every group a 2000 sweep needs
    #[arg(long, default_value_t = 2_100_000)]
    aut_budget: u64,
    /// per-automorphism three-way checks run on groups up to this order
    #[arg(long, default_value_t = 500)]
    triple_budget: u64,
    /// perturb the computed formula spectra to exercise failure reporting
    #[arg(long, hide = true)]
    inject_fault: bool,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct WitnessArgs {
    /// the modulus the gcd conditions live in
    #[arg(long)]
    n: u64,
    /// prime number of conditions
    #[arg(long)]
    p: u64,
    /// unit of multiplicative order p mod n
    #[arg(long)]
    a: u64,
    /// target divisors d_0, ..., d_(p-1), comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<u64>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    group: GroupParams,
    #[arg(long)]
    alpha: i64,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct RecordParams {
    n: u64,
    m: u32,
    p: u64,
    alpha: u64,
}

/// One computation result; `spectrum` holds the agreed value (`[R]` for
/// single Reidemeister numbers) and `methods` the per-method results.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct ResultRecord {
    params: RecordParams,
    case: String,
    spectrum: Vec<u64>,
    methods: BTreeMap<String, Vec<u64>>,
    agree: bool,
    ms: u64,
}

impl ResultRecord {
    fn human(&self) -> String {
        let methods = self
            .methods
            .iter()
            .map(|(name, vals)| format!("{name}={}", fmt_set(vals)))
            .collect::<Vec<_>>()
            .join(" ");
        format!(
            "n={} m={} p={} alpha={} case={} spectrum={} [{methods}] agree={} ({} ms)",
            self.params.n,
            self.params.m,
            self.params.p,
            self.params.alpha,
            self.case,
            fmt_set(&self.spectrum),
            self.agree,
            self.ms
        )
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct WitnessRecord {
    n: u64,
    p: u64,
    a: u64,
    targets: Vec<u64>,
    gamma: u64,
    /// (i, a^i mod n, gcd(gamma - a^i, n)) per condition
    checks: Vec<(u64, u64, u64)>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct ClassifyRecord {
    params: RecordParams,
    cyclic_order: u64,
    alpha_mod_n: u64,
    alpha_mod_p_power: u64,
    fixed_part: u64,
    free_n: u64,
    reduced_alpha: u64,
    case: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct VerifySummary {
    budget: u64,
    groups_checked: u64,
    automorphisms_checked: u64,
    failures: u64,
    first_counterexample: Option<ResultRecord>,
    ms: u64,
}

fn fmt_set(values: &[u64]) -> String {
    let inner = values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    format!("{{{inner}}}")
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(Error::Invalid(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
        Err(err @ Error::BudgetExceeded { .. }) => {
            eprintln!("error: {err}");
            EXIT_BUDGET
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Reidemeister(args) => cmd_reidemeister(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Witness(args) => cmd_witness(args),
        Command::Classify(args) => cmd_classify(args),
    }
}

fn configure_jobs(jobs: usize) {
    if jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}

fn emit<T: Serialize>(output: &OutputOpts, records: &T, human: String) -> Result<(), Error> {
    let to_json = || {
        serde_json::to_string_pretty(records)
            .map_err(|e| Error::Invalid(format!("serialization failed: {e}")))
    };
    if output.json {
        println!("{}", to_json()?);
    } else {
        println!("{human}");
    }
    if let Some(path) = &output.out {
        let mut file = std::fs::File::create(path)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
        writeln!(file, "{}", to_json()?)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn case_name(n: u64, m: u32, p: u64, alpha: u64) -> Result<String, Error> {
    let part = decompose_fixed_part(n, m, p, alpha)?;
    Ok(classify_case(part.free_n, m, p, part.reduced_alpha)?.to_string())
}

fn spectrum_via_characters(group: &SmcGroup, budget: &Budget) -> Result<Spectrum, Error> {
    let mut values = std::collections::BTreeSet::new();
    for phi in enumerate_automorphisms(group, budget)? {
        values.insert(reidemeister_via_characters(group, &phi, budget)?);
    }
    Ok(Spectrum::from_values(values))
}

fn spectrum_record(
    n: u64,
    m: u32,
    p: u64,
    alpha: i64,
    method: Method,
    budget: &Budget,
) -> Result<ResultRecord, Error> {
    let start = Instant::now();
    let group = SmcGroup::new(n, m, p, alpha)?;
    let mut methods = BTreeMap::new();
    if method.wants_formula() {
        let spec = spec_full(n, m, p, alpha)?;
        methods.insert("formula".to_string(), spec.values().to_vec());
    }
    if method.wants_bruteforce() {
        let spec = reidemeister_spectrum_bruteforce(&group, budget)?;
        methods.insert("bruteforce".to_string(), spec.values().to_vec());
    }
    if method.wants_characters() {
        let spec = spectrum_via_characters(&group, budget)?;
        methods.insert("characters".to_string(), spec.values().to_vec());
    }
    let agree = methods
        .values()
        .collect::<std::collections::HashSet<_>>()
        .len()
        <= 1;
    let spectrum = methods.values().next().cloned().unwrap_or_default();
    Ok(ResultRecord {
        params: RecordParams {
            n,
            m,
            p,
            alpha: group.alpha(),
        },
        case: case_name(n, m, p, group.alpha())?,
        spectrum,
        methods,
        agree,
        ms: start.elapsed().as_millis() as u64,
    })
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<i32, Error> {
    configure_jobs(args.output.jobs);
    let (n, m, p) = (args.group.n, args.group.m, args.group.p);
    let budget = Budget {
        max_group_order: args.budget,
        max_automorphisms: args.aut_budget,
    };
    let alphas: Vec<i64> = match args.alpha {
        Some(alpha) => vec![alpha],
        None => {
            let all = valid_alphas(n, m, p)?;
            if all.is_empty() {
                return Err(Error::Invalid(format!(
                    "no non-trivial action of C_{p} exists for n = {n}, m = {m}"
                )));
            }
            all.into_iter().map(|a| a as i64).collect()
        }
    };
    let records = alphas
        .par_iter()
        .map(|&alpha| spectrum_record(n, m, p, alpha, args.method, &budget))
        .collect::<Result<Vec<_>, _>>()?;
    let human = records
        .iter()
        .map(ResultRecord::human)
        .collect::<Vec<_>>()
        .join("\n");
    emit(&args.output, &records, human)?;
    Ok(if records.iter().all(|r| r.agree) {
        EXIT_OK
    } else {
        EXIT_DISAGREE
    })
}

fn cmd_reidemeister(args: ReidemeisterArgs) -> Result<i32, Error> {
    configure_jobs(args.output.jobs);
    if args.method == Method::Formula {
        return Err(Error::Invalid(
            "the formula method computes whole spectra; use bruteforce, characters, or both".into(),
        ));
    }
    let start = Instant::now();
    let (n, m, p) = (args.group.n, args.group.m, args.group.p);
    let budget = Budget {
        max_group_order: args.budget,
        max_automorphisms: args.aut_budget,
    };
    let group = SmcGroup::new(n, m, p, args.alpha)?;
    let phi = Automorphism::from_unit_pair(&group, args.gamma, args.a_img)?;
    let mut methods = BTreeMap::new();
    if args.method.wants_bruteforce() {
        let classes = group.conjugacy_classes(&budget)?;
        methods.insert(
            "bruteforce".to_string(),
            vec![reidemeister_via_classes(&group, &classes, &phi)],
        );
    }
    if args.method.wants_characters() || args.method == Method::Both {
        methods.insert(
            "characters".to_string(),
            vec![reidemeister_via_characters(&group, &phi, &budget)?],
        );
    }
    let agree = methods
        .values()
        .collect::<std::collections::HashSet<_>>()
        .len()
        <= 1;
    let record = ResultRecord {
        params: RecordParams {
            n,
            m,
            p,
            alpha: group.alpha(),
        },
        case: case_name(n, m, p, group.alpha())?,
        spectrum: methods.values().next().cloned().unwrap_or_default(),
        methods,
        agree,
        ms: start.elapsed().as_millis() as u64,
    };
    emit(&args.output, &record, record.human())?;
    Ok(if record.agree { EXIT_OK } else { EXIT_DISAGREE })
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Error> {
    configure_jobs(args.output.jobs);
    let start = Instant::now();
    let budget = Budget {
        max_group_order: args.budget.max(args.triple_budget),
        max_automorphisms: args.aut_budget,
    };
    let groups = enumerate_groups(args.budget);
    let results: Vec<Result<(u64, Option<ResultRecord>), Error>> = groups
        .par_iter()
        .map(|group| verify_group(group, &budget, args.triple_budget, args.inject_fault))
        .collect();
    let mut automorphisms_checked = 0;
    let mut failures = 0;
    let mut first_counterexample = None;
    for result in results {
        let (autos, counterexample) = result?;
        automorphisms_checked += autos;
        if let Some(record) = counterexample {
            failures += 1;
            if first_counterexample.is_none() {
                first_counterexample = Some(record);
            }
        }
    }
    let summary = VerifySummary {
        budget: args.budget,
        groups_checked: groups.len() as u64,
        automorphisms_checked,
        failures,
        first_counterexample,
        ms: start.elapsed().as_millis() as u64,
    };
    let human = if summary.failures == 0 {
        format!(
            "verified {} groups (|G| <= {}), {} automorphisms cross-checked, all methods agree ({} ms)",
            summary.groups_checked, summary.budget, summary.automorphisms_checked, summary.ms
        )
    } else {
        format!(
            "FAILED: {} of {} groups disagree; first counterexample: {}",
            summary.failures,
            summary.groups_checked,
            summary
                .first_counterexample
                .as_ref()
                .map(ResultRecord::human)
                .unwrap_or_default()
        )
    };
    emit(&args.output, &summary, human)?;
    Ok(if summary.failures == 0 {
        EXIT_OK
    } else {
        EXIT_DISAGREE
    })
}

/// Checks one group: formula vs brute force always, plus character spectra
/// and the per-automorphism triple agreement below the triple budget.
fn verify_group(
    group: &SmcGroup,
    budget: &Budget,
    triple_budget: u64,
    inject_fault: bool,
) -> Result<(u64, Option<ResultRecord>), Error> {
    let start = Instant::now();
    let mut formula = spec_full(group.n(), group.m(), group.p(), group.alpha() as i64)?;
    if inject_fault {
        let bumped: Vec<u64> = formula.values().iter().map(|&v| v + 1).collect();
        formula = Spectrum::from_values(bumped);
    }
    let brute = reidemeister_spectrum_bruteforce(group, budget)?;
    let mut methods = BTreeMap::new();
    methods.insert("formula".to_string(), formula.values().to_vec());
    methods.insert("bruteforce".to_string(), brute.values().to_vec());
    let mut automorphisms_checked = 0;
    let mut agree = formula == brute;
    if group.order() <= triple_budget {
        let spec_chars = spectrum_via_characters(group, budget)?;
        agree &= spec_chars == brute;
        methods.insert("characters".to_string(), spec_chars.values().to_vec());
        let classes = group.conjugacy_classes(budget)?;
        for phi in enumerate_automorphisms(group, budget)? {
            let by_classes = reidemeister_via_classes(group, &classes, &phi);
            let by_twisted = twisted_class_count(group, &phi, budget)?;
            let by_characters = ch1_fixed(group, &phi) + chp_fixed_direct(group, &phi, budget)?;
            agree &= by_classes == by_twisted && by_twisted == by_characters;
            automorphisms_checked += 1;
        }
    }
    let counterexample = (!agree).then(|| ResultRecord {
        params: RecordParams {
            n: group.n(),
            m: group.m(),
            p: group.p(),
            alpha: group.alpha(),
        },
        case: case_name(group.n(), group.m(), group.p(), group.alpha())
            .unwrap_or_else(|e| format!("unclassifiable: {e}")),
        spectrum: brute.values().to_vec(),
        methods,
        agree: false,
        ms: start.elapsed().as_millis() as u64,
    });
    Ok((automorphisms_checked, counterexample))
}

fn cmd_witness(args: WitnessArgs) -> Result<i32, Error> {
    let problem = WitnessProblem::new(args.n, args.p, args.a, args.d.clone())?;
    let gamma = gcd_witness(&problem)?;
    let checks: Vec<(u64, u64, u64)> = problem
        .targets()
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let ai = mod_pow(problem.a(), i as u64, problem.n());
            let g = gcd_u((gamma + problem.n() - ai) % problem.n(), problem.n());
            (i as u64, ai, g)
        })
        .collect();
    let record = WitnessRecord {
        n: problem.n(),
        p: problem.p(),
        a: problem.a(),
        targets: problem.targets().to_vec(),
        gamma,
        checks: checks.clone(),
    };
    let mut human = format!(
        "gamma = {gamma} (gcd(gamma, {}) = {})",
        problem.n(),
        gcd_u(gamma, problem.n())
    );
    for (i, ai, g) in &checks {
        human.push_str(&format!(
            "\n  gcd(gamma - a^{i}, n) = gcd({gamma} - {ai}, {}) = {g}  [target {}]",
            problem.n(),
            problem.targets()[*i as usize]
        ));
    }
    emit(&args.output, &record, human)?;
    Ok(EXIT_OK)
}

fn cmd_classify(args: ClassifyArgs) -> Result<i32, Error> {
    let (n, m, p) = (args.group.n, args.group.m, args.group.p);
    let group = SmcGroup::new(n, m, p, args.alpha)?;
    let part = decompose_fixed_part(n, m, p, group.alpha())?;
    let case = classify_case(part.free_n, m, p, part.reduced_alpha)?;
    let record = ClassifyRecord {
        params: RecordParams {
            n,
            m,
            p,
            alpha: group.alpha(),
        },
        cyclic_order: group.cyclic_order(),
        alpha_mod_n: group.alpha() % n,
        alpha_mod_p_power: group.alpha() % group.p_power(),
        fixed_part: part.fixed_order,
        free_n: part.free_n,
        reduced_alpha: part.reduced_alpha,
        case: case.to_string(),
    };
    let human = format!(
        "G = (C_{n} x C_{}^{m}) : C_{p}, |G| = {}\nalpha = {} (mod n: {}, mod p^m: {})\nfixed part H = C_{}, free part n = {}, reduced alpha = {}\ncase: {}",
        p,
        group.order(),
        group.alpha(),
        record.alpha_mod_n,
        record.alpha_mod_p_power,
        record.fixed_part,
        record.free_n,
        record.reduced_alpha,
        record.case
    );
    emit(&args.output, &record, human)?;
    Ok(EXIT_OK)
}

// keep clap's debug asserts honest about the CLI definition
#[test]
fn cli_definition_is_consistent() {
    use clap::CommandFactory;
    Cli::command().debug_assert();
}
