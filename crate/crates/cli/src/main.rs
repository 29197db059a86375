//! `padic-k1`: group data, SK1, Γ of a unit, and descent verification reports.

mod expr;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use padic_k1::budget::Budget;
use padic_k1::coeff::arith::{factor, is_prime};
use padic_k1::coeff::CoeffRing;
use padic_k1::descent::{
    default_sweep, full_descent_report, run_claim_on, ReportBundle, Scenario, VerificationReport, CLAIMS,
};
use padic_k1::groups::{group_by_name, h2_ab_part, schur_multiplier, sk1_pgroup, Group, GroupError, Presentation};
use padic_k1::logdet::{assertion_precision, gamma_full};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "padic-k1", version, about = "K1 of p-adic group rings at finite precision")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Resource caps as `key=value,...`; overrides PADIC_K1_BUDGET.
    #[arg(long, global = true)]
    budget: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, conjugacy classes, abelianization, center and p-regular classes.
    GroupInfo {
        /// Catalog name such as `Q8` or `C3xC9`.
        group: Option<String>,
        /// Presentation file instead of a catalog name.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Restrict p-regular data to this prime and list K-conjugacy classes over Q_p.
        #[arg(long)]
        p: Option<u64>,
    },
    /// H2, its abelian part and SK1 of Z_p[G] for a p-group: `sk1 GROUP P`.
    Sk1 {
        /// `GROUP P`, or just `P` with --file.
        #[arg(num_args = 1..=2, required = true)]
        args: Vec<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Γ of a unit over W(F_{p^n})/p^N: `gamma GROUP P n N EXPR`.
    Gamma {
        /// `GROUP P n N EXPR`, or `P n N EXPR` with --file.
        #[arg(num_args = 4..=5, required = true, allow_hyphen_values = true)]
        args: Vec<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Runs descent checks and prints a report; exits with 1 if any check fails.
    Verify(VerifyArgs),
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Claim id (repeatable); see --list-claims.
    #[arg(long)]
    claim: Vec<String>,
    /// Every claim.
    #[arg(long)]
    all: bool,
    /// Run over every catalog p-group at --p with the default scenarios.
    #[arg(long)]
    sweep_catalog: bool,
    /// Print the claim ids and exit.
    #[arg(long)]
    list_claims: bool,
    #[arg(long, default_value = "C1")]
    group: String,
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    p: u64,
    /// Residue degree of O_R.
    #[arg(long = "nR", default_value_t = 1)]
    n_r: usize,
    /// Residue degree of O_S; defaults to nR.
    #[arg(long = "nS")]
    n_s: Option<usize>,
    /// Precision: coefficients live mod p^N.
    #[arg(long = "N", default_value_t = 3)]
    precision: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    samples: usize,
    /// Worker threads for sweeps.
    #[arg(long)]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock `runtime_ms` (makes output non-reproducible).
    #[arg(long)]
    timings: bool,
}

/// Usage errors exit with 2, failed checks with 1.
enum Failure {
    Usage(String),
    Checks,
}

type CmdResult = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(b) = &cli.budget {
        if let Err(e) = Budget::parse(b) {
            eprintln!("error: --budget: {e}");
            return ExitCode::from(2);
        }
        std::env::set_var("PADIC_K1_BUDGET", b);
    }
    let res = match &cli.command {
        Command::GroupInfo { group, file, p } => cmd_group_info(group.as_deref(), file.as_ref(), *p, cli.format),
        Command::Sk1 { args, file } => cmd_sk1(args, file.as_ref(), cli.format),
        Command::Gamma { args, file } => cmd_gamma(args, file.as_ref(), cli.format),
        Command::Verify(v) => cmd_verify(v, cli.format),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_group(name: Option<&str>, file: Option<&PathBuf>) -> Result<(String, Arc<Group>), Failure> {
    match (name, file) {
        (Some(_), Some(_)) => Err(usage("give either a group name or --file, not both")),
        (None, None) => Err(usage("missing group: give a catalog name or --file PATH")),
        (Some(n), None) => match group_by_name(n) {
            Ok(g) => Ok((n.to_string(), Arc::new(g))),
            Err(GroupError::UnknownGroup(_)) => Err(usage(format!(
                "unknown group `{n}`; catalog: {} (or any product like C2xC4)",
                padic_k1::groups::catalog_names().join(", ")
            ))),
            Err(e) => Err(usage(e.to_string())),
        },
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let pres = Presentation::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let g = Group::from_presentation(&pres, Budget::global().cosets).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let name = path.file_stem().map_or("file".into(), |s| s.to_string_lossy().into_owned());
            Ok((name, Arc::new(g)))
        }
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, Failure> {
    s.parse().map_err(|_| usage(format!("{what} must be a non-negative integer, got `{s}`")))
}

fn check_prime(p: u64) -> CmdResult {
    if is_prime(p) {
        Ok(())
    } else {
        Err(usage(format!("p = {p} is not prime")))
    }
}

fn element_name(g: &Group, x: usize, words: &[Vec<usize>]) -> String {
    if x == 0 {
        return "1".into();
    }
    let names = g.generator_names();
    let mut parts: Vec<(usize, usize)> = Vec::new();
    for &i in &words[x] {
        match parts.last_mut() {
            Some((j, k)) if *j == i => *k += 1,
            _ => parts.push((i, 1)),
        }
    }
    parts
        .iter()
        .map(|&(i, k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
        .collect::<Vec<_>>()
        .join("*")
}

fn emit(format: Format, text: String, value: Value) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("json")),
    }
}

fn cmd_group_info(name: Option<&str>, file: Option<&PathBuf>, p: Option<u64>, format: Format) -> CmdResult {
    let (label, g) = load_group(name, file)?;
    if let Some(p) = p {
        check_prime(p)?;
    }
    let words = g.generator_words();
    let conj = g.conjugacy();
    let (ab, _, _) = g.abelianization();
    let center = g.center();
    let primes: Vec<u64> = match p {
        Some(p) => vec![p],
        None => factor(g.order() as u64).into_iter().map(|(q, _)| q).collect(),
    };
    let reps: Vec<String> = conj.representatives.iter().map(|&x| element_name(&g, x, &words)).collect();
    let mut text = format!(
        "group {label}\norder {}\nexponent {}\nclasses {}\nclass sizes {:?}\nabelianization {ab}\ncenter order {}\n",
        g.order(),
        g.exponent(),
        g.num_classes(),
        conj.class_sizes,
        center.len()
    );
    text.push_str(&format!("class representatives {}\n", reps.join(", ")));
    let mut regular = Vec::new();
    for &q in &primes {
        let cls = g.p_regular_classes(q);
        text.push_str(&format!("{q}-regular classes {}\n", cls.iter().map(|&c| reps[c].clone()).collect::<Vec<_>>().join(", ")));
        regular.push(json!({"p": q, "classes": cls}));
    }
    let mut kconj = Value::Null;
    if let Some(p) = p {
        let ks = g.k_conjugacy_bookkeeping(p, 1);
        for k in &ks {
            text.push_str(&format!(
                "K-class of {}: fuses {:?}, |N| = {}, |Z| = {}\n",
                element_name(&g, k.representative, &words),
                k.fused_classes,
                k.normalizer.len(),
                k.centralizer.len()
            ));
        }
        kconj = ks
            .iter()
            .map(|k| {
                json!({"representative": element_name(&g, k.representative, &words), "fused_classes": k.fused_classes,
                       "normalizer_order": k.normalizer.len(), "centralizer_order": k.centralizer.len()})
            })
            .collect();
    }
    let value = json!({
        "group": label, "order": g.order(), "exponent": g.exponent(), "classes": g.num_classes(),
        "class_sizes": conj.class_sizes, "representatives": reps, "abelianization": ab.to_string(),
        "center": center.iter().map(|&x| element_name(&g, x, &words)).collect::<Vec<_>>(),
        "p_regular": regular, "k_conjugacy": kconj,
    });
    emit(format, text, value);
    Ok(())
}

fn cmd_sk1(args: &[String], file: Option<&PathBuf>, format: Format) -> CmdResult {
    let (name, p) = match (args, file) {
        ([g, p], None) => (Some(g.as_str()), p),
        ([p], Some(_)) => (None, p),
        _ => return Err(usage("expected `sk1 GROUP P` or `sk1 --file PATH P`")),
    };
    let p: u64 = parse_num(p, "P")?;
    check_prime(p)?;
    let (label, g) = load_group(name, file)?;
    if !g.is_p_group(p) {
        return Err(usage(format!(
            "{label} is not a {p}-group; SK1 from H2/H2ab needs a p-group (see `group-info {label} --p {p}` for K-conjugacy data)"
        )));
    }
    let h2 = schur_multiplier(&g).map_err(|e| usage(e.to_string()))?;
    let h2ab = h2_ab_part(&g).map_err(|e| usage(e.to_string()))?;
    let sk1 = sk1_pgroup(&g, p).map_err(|e| usage(e.to_string()))?;
    let text = format!("group {label}, p = {p}\nH2 = {h2}\nH2ab = {h2ab}\nSK1 = {sk1}\n");
    let value = json!({"group": label, "p": p, "H2": h2.to_string(), "H2ab": h2ab.to_string(), "SK1": sk1.to_string()});
    emit(format, text, value);
    Ok(())
}

fn cmd_gamma(args: &[String], file: Option<&PathBuf>, format: Format) -> CmdResult {
    let (name, rest) = match (args.len(), file) {
        (5, None) => (Some(args[0].as_str()), &args[1..]),
        (4, Some(_)) => (None, args),
        _ => return Err(usage("expected `gamma GROUP P n N EXPR` or `gamma --file PATH P n N EXPR`")),
    };
    let p: u64 = parse_num(&rest[0], "P")?;
    let n: usize = parse_num(&rest[1], "n")?;
    let big_n: u32 = parse_num(&rest[2], "N")?;
    check_prime(p)?;
    if n == 0 || big_n < 2 {
        return Err(usage("need n ≥ 1 and N ≥ 2"));
    }
    let (label, g) = load_group(name, file)?;
    if !g.is_p_group(p) {
        return Err(usage(format!("{label} is not a {p}-group; Γ is defined here for p-groups only")));
    }
    let ring = CoeffRing::unramified(p, n, big_n).map_err(|e| usage(e.to_string()))?;
    let u = expr::parse_unit(&rest[3], &ring, &g).map_err(|e| usage(format!("{e}\n  {}\n  {}^", rest[3], " ".repeat(e.position))))?;
    if !u.is_unit() {
        return Err(usage(format!("`{}` is not a unit", rest[3])));
    }
    let gamma = gamma_full(&u).map_err(|e| usage(e.to_string()))?;
    let reliable = assertion_precision(p, big_n);
    let words = g.generator_words();
    let reps: Vec<String> = g.conjugacy().representatives.iter().map(|&x| element_name(&g, x, &words)).collect();
    let mut text = format!("Γ({}) over W(F_{p}^{n})/{p}^{big_n}[{label}]\n", rest[3]);
    let mut classes = Vec::new();
    for (c, rep) in reps.iter().enumerate() {
        let v = gamma.get(c);
        text.push_str(&format!("  [{rep}]  {v}\n"));
        classes.push(json!({"class": c, "representative": rep, "value": v.coeffs()}));
    }
    text.push_str(&format!("values mod {p}^{big_n} for the canonical lift; lift-independent mod {p}^{reliable}\n"));
    let value = json!({"group": label, "p": p, "n": n, "N": big_n, "reliable_precision": reliable, "classes": classes});
    emit(format, text, value);
    Ok(())
}

fn report_text(r: &VerificationReport) -> String {
    let s = &r.scenario;
    let mut t = format!(
        "{:<20} {:<14} {} p={} nR={} nS={} N={} seed={}",
        r.status.to_string(),
        r.claim,
        s.group,
        s.p,
        s.n_r,
        s.n_s,
        s.precision,
        s.seed
    );
    if let Some(a) = r.precision_used {
        t.push_str(&format!(" precision={a}"));
    }
    if r.finite_level {
        t.push_str(" (finite level)");
    }
    if let Some(ms) = r.runtime_ms {
        t.push_str(&format!(" {ms}ms"));
    }
    t.push('\n');
    if let Some(reason) = &r.reason {
        t.push_str(&format!("    reason: {reason}\n"));
    }
    for w in &r.witnesses {
        t.push_str(&format!("    witness: {w}\n"));
    }
    for n in &r.notes {
        t.push_str(&format!("    {n}\n"));
    }
    t
}

fn cmd_verify(v: &VerifyArgs, format: Format) -> CmdResult {
    if v.list_claims {
        for c in CLAIMS {
            println!("{c}");
        }
        return Ok(());
    }
    for c in &v.claim {
        if !CLAIMS.contains(&c.as_str()) {
            return Err(usage(format!("unknown claim `{c}`; known claims: {}", CLAIMS.join(", "))));
        }
    }
    if v.claim.is_empty() && !v.all {
        return Err(usage("choose --claim ID or --all"));
    }
    check_prime(v.p)?;
    let n_s = v.n_s.unwrap_or(v.n_r);
    if v.n_r == 0 || !n_s.is_multiple_of(v.n_r) {
        return Err(usage(format!("nR = {} must be positive and divide nS = {n_s}", v.n_r)));
    }
    if v.precision < 2 {
        return Err(usage("N must be at least 2"));
    }
    let claims: Vec<String> = if v.all { CLAIMS.iter().map(|c| c.to_string()).collect() } else { v.claim.clone() };
    let threads = v.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let single = claims.len() == 1 && !v.sweep_catalog;
    let bundle = if v.sweep_catalog {
        if v.file.is_some() {
            return Err(usage("--sweep-catalog runs over the catalog; drop --file"));
        }
        let jobs: Vec<_> =
            default_sweep(v.p, v.precision, v.seed, v.samples).into_iter().filter(|(c, _)| claims.contains(c)).collect();
        full_descent_report(&jobs, threads, v.timings)
    } else {
        let name = if v.file.is_some() { None } else { Some(v.group.as_str()) };
        let (label, g) = load_group(name, v.file.as_ref())?;
        let sc = Scenario::new(&label, v.p, v.n_r, n_s, v.precision, v.seed, v.samples);
        if v.file.is_none() {
            let jobs: Vec<_> = claims.iter().map(|c| (c.clone(), sc.clone())).collect();
            full_descent_report(&jobs, threads, v.timings)
        } else {
            let reports = claims
                .iter()
                .map(|c| {
                    let start = std::time::Instant::now();
                    let mut r = run_claim_on(c, &g, &sc).expect("claim ids validated");
                    if v.timings {
                        r.runtime_ms = Some(start.elapsed().as_millis() as u64);
                    }
                    r
                })
                .collect();
            ReportBundle { reports }
        }
    };
    let out = match format {
        Format::Text => bundle.reports.iter().map(report_text).collect::<String>(),
        Format::Json => {
            let s = if single {
                serde_json::to_string_pretty(&bundle.reports[0])
            } else {
                serde_json::to_string_pretty(&bundle)
            };
            s.expect("reports serialize") + "\n"
        }
    };
    match &v.out {
        Some(path) => std::fs::write(path, &out).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{out}"),
    }
    if bundle.failed() {
        Err(Failure::Checks)
    } else {
        Ok(())
    }
}
