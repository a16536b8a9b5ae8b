use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use sigma_groups::corpus::{
    builtin_corpus, builtin_corpus_extended, load_corpus_dir, partitions_for, resolve_group, CorpusItem,
    PartitionSelector,
};
use sigma_groups::dot::{export_dot, Marks};
use sigma_groups::sigma::DEFAULT_HALL_SET_CAP;
use sigma_groups::verifier::{summarize, verify_corpus, ConfigEcho, VerifyConfig};

#[derive(Parser)]
#[command(name = "sigma", version, about = "σ-subnormality invariants of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariants of one group.
    Analyze {
        /// Group file, or builtin:NAME.
        group: String,
        #[arg(long, default_value = "finest")]
        sigma: String,
        #[arg(long)]
        json: bool,
    },
    /// Run every check over a corpus and write a report.
    Verify {
        /// `builtin` or `dir:<path>`.
        #[arg(long, default_value = "builtin")]
        corpus: String,
        /// Comma-separated selectors: finest, all-two-blocks, two-block:2+3, file:<path>.
        #[arg(long, default_value = "finest")]
        sigma: String,
        #[arg(long)]
        max_order: Option<usize>,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Include groups that are slow to verify (S5).
        #[arg(long)]
        extended: bool,
        #[arg(long, default_value_t = DEFAULT_HALL_SET_CAP)]
        hall_cap: u64,
    },
    /// Write the subgroup lattice as Graphviz DOT.
    Lattice {
        group: String,
        #[arg(long)]
        dot: PathBuf,
        /// Comma-separated: normal, sigma-subnormal, sigma-quasinormal.
        #[arg(long, default_value = "")]
        mark: String,
        #[arg(long, default_value = "finest")]
        sigma: String,
    },
    /// List the builtin corpus.
    ListCorpus {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        extended: bool,
    },
}

fn single_partition(group_primes: &[u64], selector: &str) -> Result<sigma_groups::sigma::SigmaPartition> {
    let sel = PartitionSelector::parse(selector)?;
    if matches!(sel, PartitionSelector::AllTwoBlocks) {
        bail!("--sigma takes a single partition here");
    }
    partitions_for(group_primes, &[sel])?
        .into_iter()
        .next()
        .ok_or_else(|| anyhow!("no partition selected"))
}

fn analyze(group: &str, sigma: &str, json: bool) -> Result<u8> {
    let entry = resolve_group(group)?;
    let lat = entry.lattice()?;
    let sigma = single_partition(&lat.group().primes(), sigma)?;
    let s = summarize(&lat, &sigma);
    if json {
        println!("{}", serde_json::to_string_pretty(&s)?);
        return Ok(0);
    }
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    println!("group            {}", s.group);
    println!("sigma            {}", s.sigma);
    println!("order            {}", s.order);
    println!("subgroups        {}", s.subgroups);
    println!("pi               {:?}", s.pi);
    println!("sigma(G)         {:?}", s.sigma_of_group);
    println!("abelian          {}", s.abelian);
    println!("nilpotent        {}", s.nilpotent);
    println!("soluble          {}", s.soluble);
    println!("supersoluble     {}", s.supersoluble);
    println!("schmidt          {}", s.schmidt);
    println!("sigma-primary    {}", s.sigma_primary);
    println!("sigma-nilpotent  {}", s.sigma_nilpotent);
    println!("sigma-soluble    {}", s.sigma_soluble);
    println!("sigma-fiber      {}", s.sigma_fiber);
    println!("m_sigma          {}", s.m_sigma);
    println!("m_sigma_q        {}", s.m_sigma_q);
    println!("h_sigma          {}", opt(s.h_sigma.map(|v| v.to_string())));
    println!("l_sigma          {}", opt(s.l_sigma.map(|v| v.to_string())));
    println!("rank             {}", opt(s.rank.map(|v| v.to_string())));
    println!("residual order   {}", s.sigma_residual_order);
    println!("F_sigma order    {}", s.f_sigma_order);
    println!("sigma-subnormal  {}", s.sigma_subnormal_count);
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    corpus: &str,
    sigma: &str,
    max_order: Option<usize>,
    jobs: Option<usize>,
    report: Option<PathBuf>,
    extended: bool,
    hall_cap: u64,
) -> Result<u8> {
    let selectors = PartitionSelector::parse_list(sigma)?;
    let items: Vec<CorpusItem> = if corpus == "builtin" {
        let entries = if extended {
            builtin_corpus_extended()
        } else {
            builtin_corpus()
        };
        entries.into_iter().map(CorpusItem::Entry).collect()
    } else if let Some(dir) = corpus.strip_prefix("dir:") {
        load_corpus_dir(&PathBuf::from(dir))?
    } else {
        bail!("unknown corpus {corpus:?}; expected builtin or dir:<path>");
    };
    let cfg = VerifyConfig { hall_cap };
    let echo = ConfigEcho {
        corpus: corpus.to_string(),
        sigma: sigma.split(',').map(str::to_string).collect(),
        max_order,
        hall_cap,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build().context("building worker pool")?;
    let mut rep = pool.install(|| verify_corpus(&items, &selectors, max_order, &cfg, echo));
    rep.generated_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .ok()
        .map(|d| d.as_secs());

    let t = &rep.summary.totals;
    eprintln!(
        "{} groups, {} (group, sigma) pairs: {} pass, {} fail, {} skipped, {} capped, {} errored",
        rep.summary.groups, rep.summary.pairs, t.pass, t.fail, t.skipped, t.capped, rep.summary.errored
    );
    for r in rep.results.iter().filter(|r| r.status.key() == "fail") {
        eprintln!(
            "FAIL {} {} [{}]: {}",
            r.check,
            r.group,
            r.sigma,
            r.detail.as_deref().unwrap_or("")
        );
    }
    for e in &rep.errors {
        eprintln!("ERROR {}: {}", e.group, e.error);
    }
    let text = rep.to_json();
    match report {
        Some(path) => {
            std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{text}"),
    }
    Ok(if rep.has_failures() {
        1
    } else if rep.errors.is_empty() {
        0
    } else {
        2
    })
}

fn lattice(group: &str, dot: PathBuf, mark: &str, sigma: &str) -> Result<u8> {
    let entry = resolve_group(group)?;
    let lat = entry.lattice()?;
    let sigma = single_partition(&lat.group().primes(), sigma)?;
    let mut marks = Marks::default();
    for m in mark.split(',').map(str::trim).filter(|m| !m.is_empty()) {
        match m {
            "normal" => marks.normal = true,
            "sigma-subnormal" => marks.sigma_subnormal = true,
            "sigma-quasinormal" => marks.sigma_quasinormal = true,
            other => bail!("unknown mark {other:?}"),
        }
    }
    std::fs::write(&dot, export_dot(&lat, &sigma, marks))
        .with_context(|| format!("writing {}", dot.display()))?;
    Ok(0)
}

fn list_corpus(json: bool, extended: bool) -> Result<u8> {
    let entries = if extended {
        builtin_corpus_extended()
    } else {
        builtin_corpus()
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&entries)?);
    } else {
        for e in &entries {
            let tags: Vec<&str> = e.tags.iter().map(String::as_str).collect();
            println!("{:<12} {:>4}  {}", e.name, e.order, tags.join(","));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Analyze { group, sigma, json } => analyze(&group, &sigma, json),
        Command::Verify {
            corpus,
            sigma,
            max_order,
            jobs,
            report,
            extended,
            hall_cap,
        } => verify(&corpus, &sigma, max_order, jobs, report, extended, hall_cap),
        Command::Lattice {
            group,
            dot,
            mark,
            sigma,
        } => lattice(&group, dot, &mark, &sigma),
        Command::ListCorpus { json, extended } => list_corpus(json, extended),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
