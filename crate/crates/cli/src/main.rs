mod checks;
mod families;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde_json::json;

use loopforge::audit::{audit, Outcome};
use loopforge::classes::classify_elements;
use loopforge::classify::{self, LoopSummary};
use loopforge::io::{read_table, to_text, write_table};
use loopforge::iso;
use loopforge::search::{self, Law, SearchSpec, SearchStatus, DEFAULT_BUDGET};
use loopforge::structure::{structure_report, DEFAULT_GROUP_CAP};
use loopforge::{LoopError, LoopTable};

use checks::CheckLaw;

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;
const LONG_BUDGET: Duration = Duration::from_secs(1800);

#[derive(Parser)]
#[command(name = "loopforge", version, about = "Finite loop toolkit for conjugacy-closed loops")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test laws on a table; exit 1 if any fails.
    Check {
        file: PathBuf,
        /// Comma-separated: lcc,rcc,cc,pa,wip,moufang,extra,flex,aip,diassoc
        #[arg(long, value_delimiter = ',', default_value = "cc")]
        laws: Vec<CheckLaw>,
        #[arg(long)]
        json: bool,
    },
    /// Structure and element-class report.
    Info {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write a named fixture or family member, e.g. `q16:1,1` or `fam27:1,0,1,0,1`.
    Gen {
        family: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Apply a random relabeling that keeps the identity at 0.
        #[arg(long)]
        shuffle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exit 0 and print an isomorphism if the two tables are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Classify the nonassociative PACC loops of order 16 or 27.
    Classify {
        order: usize,
        /// Write one canonical table per class plus report.json here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include the order-16 extra-loop search.
        #[arg(long)]
        long: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive search for loops satisfying laws.
    Search {
        #[arg(long)]
        order: usize,
        /// Comma-separated: lcc,rcc,pa,extra,moufang,wip,flexible (empty for all loops)
        #[arg(long, value_delimiter = ',', default_value = "")]
        laws: Vec<String>,
        #[arg(long)]
        nonassociative: bool,
        #[arg(long)]
        up_to_iso: bool,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        limit: Option<usize>,
        /// Wall-clock budget in seconds (default: LOOPFORGE_BUDGET or 600).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run every applicable invariant; exit 1 if any fails.
    Audit {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Input(String),
    Timeout(String),
}

impl From<LoopError> for Failure {
    fn from(e: LoopError) -> Self {
        match e {
            LoopError::SearchIncomplete(m) => Failure::Timeout(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(EXIT_INPUT);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let res = match cli.cmd {
        Cmd::Check { file, laws, json } => cmd_check(&file, &laws, json),
        Cmd::Info { file, json } => cmd_info(&file, json),
        Cmd::Gen { family, out, shuffle, seed } => cmd_gen(&family, out.as_deref(), shuffle, seed),
        Cmd::Iso { a, b } => cmd_iso(&a, &b),
        Cmd::Classify { order, out, long, budget, json } => cmd_classify(order, out.as_deref(), long, budget, json),
        Cmd::Search {
            order,
            laws,
            nonassociative,
            up_to_iso,
            count_only,
            limit,
            budget,
            out,
            json,
        } => {
            let opts = SearchOpts {
                nonassociative,
                up_to_iso,
                count_only,
                limit,
                budget,
                jobs: cli.jobs,
                out,
                json,
            };
            cmd_search(order, &laws, &opts)
        }
        Cmd::Audit { file, json } => cmd_audit(&file, json),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Timeout(m)) => {
            eprintln!("timeout: {m}");
            ExitCode::from(EXIT_TIMEOUT)
        }
    }
}

fn load(path: &Path) -> Result<LoopTable, Failure> {
    read_table(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("report serializes"));
}

fn cmd_check(file: &Path, laws: &[CheckLaw], json: bool) -> CmdResult {
    let q = load(file)?;
    let results: Vec<(CheckLaw, Option<Vec<usize>>)> =
        laws.iter().map(|&l| (l, checks::counterexample(&q, l))).collect();
    if json {
        let mut m = serde_json::Map::new();
        for (l, w) in &results {
            m.insert(l.name().into(), json!({ "holds": w.is_none(), "counterexample": w }));
        }
        print_json(&m);
    } else {
        for (l, w) in &results {
            match w {
                None => println!("{:<8} holds", l.name()),
                Some(w) => println!("{:<8} fails at {w:?}", l.name()),
            }
        }
    }
    Ok(if results.iter().all(|(_, w)| w.is_none()) { 0 } else { EXIT_FAIL })
}

fn fmt_set(v: &[usize]) -> String {
    let s: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("{{{}}}", s.join(","))
}

fn cmd_info(file: &Path, json: bool) -> CmdResult {
    let q = load(file)?;
    let st = structure_report(&q, DEFAULT_GROUP_CAP);
    let el = classify_elements(&q);
    if json {
        print_json(&json!({ "structure": st, "elements": el }));
        return Ok(0);
    }
    let f = &el.flags;
    let rows: Vec<(&str, String)> = vec![
        ("order", st.order.to_string()),
        ("nucleus", fmt_set(&st.nucleus)),
        ("left nucleus", fmt_set(&st.left_nucleus)),
        ("middle nucleus", fmt_set(&st.middle_nucleus)),
        ("right nucleus", fmt_set(&st.right_nucleus)),
        ("center", fmt_set(&st.center)),
        ("associator subloop", fmt_set(&st.associator_subloop)),
        ("nucleus normal", st.nucleus_normal.to_string()),
        (
            "Q/N abelian group",
            st.quotient_is_abelian_group.map_or("n/a".into(), |b| b.to_string()),
        ),
        (
            "exponent of Q/N",
            st.exponent_of_quotient.map_or("n/a".into(), |e| e.to_string()),
        ),
        ("PA set", fmt_set(&el.pa_set)),
        ("WIP set", fmt_set(&el.wip_set)),
        ("Moufang set", fmt_set(&el.moufang_set)),
        ("pseudoMoufang set", fmt_set(&el.pseudo_set)),
        ("extra set", fmt_set(&el.extra_set)),
        ("square-nuclear set", fmt_set(&el.square_nuclear_set)),
        ("PA set is subloop", el.pa_set_is_subloop.to_string()),
        ("Moufang set is subloop", el.moufang_set_is_subloop.to_string()),
        ("LCC", f.is_lcc.to_string()),
        ("RCC", f.is_rcc.to_string()),
        ("CC", f.is_cc.to_string()),
        ("power-associative", f.is_pa.to_string()),
        ("WIP loop", f.is_wip_loop.to_string()),
        ("Moufang loop", f.is_moufang_loop.to_string()),
        ("extra loop", f.is_extra_loop.to_string()),
        ("flexible", f.is_flexible_loop.to_string()),
        ("diassociative", f.is_diassociative.to_string()),
        ("AIP", f.has_aip.map_or("n/a".into(), |b| b.to_string())),
        ("group", f.is_group.to_string()),
        ("abelian group", f.is_abelian_group.to_string()),
    ];
    let mut rows = rows;
    if let Some(g) = &st.groups {
        rows.push(("|Mlt|", g.mlt_order.to_string()));
        rows.push(("|Inn|", g.inn_order.to_string()));
        rows.push(("RInn = LInn", g.rinn_equals_linn.to_string()));
    }
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<w$}  {v}");
    }
    Ok(0)
}

fn cmd_gen(family: &str, out: Option<&Path>, shuffle: bool, seed: u64) -> CmdResult {
    let mut q = families::build(family).map_err(Failure::Input)?;
    if shuffle {
        q = families::shuffle(&q, seed);
    }
    match out {
        Some(p) => write_table(p, &q)?,
        None => print!("{}", to_text(&q)),
    }
    Ok(0)
}

fn cmd_iso(a: &Path, b: &Path) -> CmdResult {
    let (qa, qb) = (load(a)?, load(b)?);
    match iso::are_isomorphic(&qa, &qb) {
        Some(p) => {
            let imgs: Vec<String> = (0..qa.order()).map(|x| p.apply(x).to_string()).collect();
            println!("{}", imgs.join(" "));
            Ok(0)
        }
        None => {
            println!("not isomorphic");
            Ok(EXIT_FAIL)
        }
    }
}

fn budget_from(flag: Option<u64>, default: Duration) -> Result<Duration, Failure> {
    if let Some(s) = flag {
        return Ok(Duration::from_secs(s));
    }
    match std::env::var("LOOPFORGE_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(Duration::from_secs)
            .map_err(|_| Failure::Input(format!("LOOPFORGE_BUDGET must be whole seconds, got '{v}'"))),
        Err(_) => Ok(default),
    }
}

fn write_classes(dir: &Path, prefix: &str, tables: &[&LoopSummary], report: &impl serde::Serialize) -> CmdResult {
    fs::create_dir_all(dir)?;
    for (i, s) in tables.iter().enumerate() {
        let q = LoopTable::from_rows(&s.table)?;
        let q = match &s.name {
            Some(nm) => q.with_name(nm.clone()),
            None => q,
        };
        write_table(&dir.join(format!("{prefix}-{i}.tbl")), &q)?;
    }
    fs::write(
        dir.join("report.json"),
        serde_json::to_string_pretty(report).expect("report serializes") + "\n",
    )?;
    Ok(0)
}

fn cmd_classify(order: usize, out: Option<&Path>, long: bool, budget: Option<u64>, json: bool) -> CmdResult {
    match order {
        27 => {
            let r = classify::classify_order27()?;
            if let Some(dir) = out {
                let reps: Vec<&LoopSummary> = r.classes.iter().map(|c| &c.representative).collect();
                write_classes(dir, "order27", &reps, &r)?;
            }
            if json {
                print_json(&r);
            } else {
                println!("nonassociative members: {} of {}", r.nonassociative_members, r.members);
                println!("classes: {}", r.class_count);
                println!("with AIP: {}", r.aip_count);
                for (case, k) in &r.case_counts {
                    println!("case {case}: {k}");
                }
                for (i, c) in r.classes.iter().enumerate() {
                    println!(
                        "  [{i}] case {:<5} |T|={:<2} |M|={} aip={:<5} members={}",
                        c.label(),
                        c.t_size,
                        c.m_size,
                        c.aip,
                        c.members.len()
                    );
                }
            }
            Ok(0)
        }
        16 => {
            let census = if long { Some(budget_from(budget, LONG_BUDGET)?) } else { None };
            let r = classify::classify_order16(census)?;
            if let Some(dir) = out {
                let mut reps: Vec<&LoopSummary> = r.trio.iter().map(|f| &f.representative).collect();
                if let Some(c) = &r.extra_census {
                    reps.extend(c.classes.iter().map(|f| &f.representative));
                }
                write_classes(dir, "order16", &reps, &r)?;
            }
            if json {
                print_json(&r);
            } else {
                println!("non-extra trio:");
                for f in &r.trio {
                    println!(
                        "  {:<8} pacc={} nonassoc={} extra={} |N|={} |Z|={} Z cyclic={} |Q/N|={}",
                        f.label,
                        f.pacc,
                        f.nonassociative,
                        f.extra_loop,
                        f.nucleus_size,
                        f.center_size,
                        f.center_cyclic,
                        f.quotient_order
                    );
                }
                println!("trio pairwise nonisomorphic: {}", r.trio_pairwise_nonisomorphic);
                println!("Q_(r,s) classes: {}", r.q16_classes.len());
                println!("parity rule holds: {}", r.parity_rule_holds);
                match (&r.extra_census, r.total_classes) {
                    (Some(c), Some(t)) => {
                        println!("nonassociative extra classes: {} ({:.1}s)", c.classes.len(), c.elapsed_secs);
                        println!("total classes: {t}");
                    }
                    _ => println!("extra census skipped (use --long)"),
                }
            }
            Ok(0)
        }
        other => Err(Failure::Input(format!("classification is available for orders 16 and 27, not {other}"))),
    }
}

struct SearchOpts {
    nonassociative: bool,
    up_to_iso: bool,
    count_only: bool,
    limit: Option<usize>,
    budget: Option<u64>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    json: bool,
}

fn cmd_search(order: usize, laws: &[String], o: &SearchOpts) -> CmdResult {
    let laws = laws
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Law>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut spec = SearchSpec::new(order, &laws).budget(budget_from(o.budget, DEFAULT_BUDGET)?);
    spec.nonassociative_only = o.nonassociative;
    spec.up_to_iso = o.up_to_iso;
    spec.count_only = o.count_only;
    spec.limit = o.limit;
    spec.jobs = o.jobs;
    let r = search::search(&spec)?;
    if let Some(dir) = &o.out {
        fs::create_dir_all(dir)?;
        for (i, q) in r.loops.iter().enumerate() {
            write_table(&dir.join(format!("loop-{i}.tbl")), q)?;
        }
    }
    if o.json {
        let tables: Vec<LoopSummary> = r.loops.iter().map(LoopSummary::from).collect();
        print_json(&json!({
            "status": r.status,
            "count": r.count,
            "nodes": r.nodes,
            "elapsed_secs": r.elapsed.as_secs_f64(),
            "loops": tables,
        }));
    } else {
        println!("count: {}", r.count);
        if !o.count_only {
            for q in &r.loops {
                println!();
                print!("{}", to_text(q));
            }
        }
    }
    eprintln!(
        "status: {} ({} nodes, {:.2}s)",
        match r.status {
            SearchStatus::Complete => "complete",
            SearchStatus::TimedOut => "timed out; count is a lower bound",
            SearchStatus::LimitReached => "limit reached",
        },
        r.nodes,
        r.elapsed.as_secs_f64()
    );
    Ok(if r.status == SearchStatus::TimedOut { EXIT_TIMEOUT } else { 0 })
}

fn cmd_audit(file: &Path, json: bool) -> CmdResult {
    let q = load(file)?;
    let r = audit(&q);
    if json {
        print_json(&r);
    } else {
        let h = &r.hypotheses;
        println!(
            "hypotheses: cc={} pa={} pacc={} wip={} associative={}",
            h.cc, h.pa, h.pacc, h.wip, h.associative
        );
        for c in &r.checks {
            match &c.outcome {
                Outcome::Pass => println!("PASS {}", c.name),
                Outcome::Fail { witness, detail } => println!("FAIL {} at {witness:?}: {detail}", c.name),
                Outcome::NotApplicable { reason } => println!("N/A  {} ({reason})", c.name),
            }
        }
        println!("{} passed, {} failed", r.passed(), r.failures().count());
    }
    Ok(if r.is_clean() { 0 } else { EXIT_FAIL })
}
