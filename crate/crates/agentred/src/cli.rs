//! Command-line driver. Every command emits records; the exit code is 0
//! only when every check it ran passed.

use std::io::Write;

use agentred_core::agents::{
    atomic_pair, atomic_pair_certified_bound, collapse_depth, conjecture_readings, longest_reduction,
    longest_reduction_with_witness, nd_bound, nd_bound_sharp, nd_with, sandwich, upper_bound, Agent, Explorer,
    SearchBudget, Tower,
};
use agentred_core::certificates::{certify_with, diagnose, extract_bound, Derivation, Limits};
use agentred_core::lambda::{
    eta_long_spine, game_situation, general_bound, hlr_run_with, hlr_steps, lower_bound_family, metrics, HlrBudget, Term,
};
use agentred_core::pointers::{enumerate_interactions, for_each_interaction, PlayBudget};
use agentred_core::Error;
use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::corpus::{random_agent, rng, AgentShape};
use crate::formats::{parse_agent, parse_term, write_derivation};

pub const HEADER: &str = r#"{"format":"agentred-records","version":1}"#;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Records,
}

#[derive(Debug, Parser)]
#[command(name = "agentred", version, about = "Agent reduction lengths, interaction enumeration, certificates and head linear reduction bounds")]
pub struct Cli {
    /// Cap on distinct agents explored, plays enumerated, and derivation nodes built.
    #[arg(long, global = true, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_agents: u64,
    /// Cap on the length of an enumerated play.
    #[arg(long, global = true, default_value_t = 1 << 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_play_len: u64,
    /// Cap on head linear reduction steps.
    #[arg(long, global = true, default_value_t = 100_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_steps: u64,
    /// Bit cap below which towers are printed as exact numbers.
    #[arg(long, global = true, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    pub tower_bits: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Seed for randomly generated corpora.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print witnesses: reduction chains, longest plays, reduction traces.
    #[arg(long, global = true)]
    pub witness: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Longest reduction from an agent, against the general bound.
    Longest { agent: String },
    /// N_d(n, p) from agents and from plays.
    Nd { n: u32, p: u32, d: u32 },
    /// N_3(n, p) for n >= 1, p >= 2, n + p <= MAX_SUM, against both closed-form readings.
    Conjecture { max_sum: u32 },
    /// Evaluate bounds: for an agent, for `--nd N P D`, or over `--random K` seeded agents.
    Bound {
        agent: Option<String>,
        #[arg(long, num_args = 3, value_names = ["N", "P", "D"])]
        nd: Option<Vec<u32>>,
        #[arg(long)]
        random: Option<u32>,
    },
    /// Build and check a level-0 derivation bounding an agent.
    Certify { agent: String },
    /// Head linear reduction of a closed term, or of `2_n ... 2_0 id` with `--family N`.
    Hlr {
        term: Option<String>,
        #[arg(long)]
        family: Option<u32>,
        /// η-expand the head and every argument of the applicative spine first.
        #[arg(long)]
        eta_long: bool,
    },
    /// Map every play of n ⋆_d p to agent reductions.
    Simulate { n: u32, p: u32, d: u32 },
}

/// Collected output of one command.
struct Report {
    records: Vec<Map<String, Value>>,
    failed: bool,
}

impl Report {
    fn new() -> Self {
        Report {
            records: Vec::new(),
            failed: false,
        }
    }

    fn push(&mut self, kind: &str, fields: Value) {
        let mut m = Map::new();
        m.insert("kind".into(), kind.into());
        if let Value::Object(f) = fields {
            m.extend(f);
        }
        self.records.push(m);
    }

    /// Records the outcome of a check and returns it as a verdict string.
    fn verdict(&mut self, ok: bool) -> &'static str {
        self.failed |= !ok;
        if ok {
            "PASS"
        } else {
            "FAIL"
        }
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Records => {
                writeln!(out, "{HEADER}")?;
                for r in &self.records {
                    writeln!(out, "{}", Value::Object(r.clone()))?;
                }
            }
            Format::Human => {
                for r in &self.records {
                    let kind = r["kind"].as_str().unwrap_or_default();
                    if let Some(Value::String(text)) = r.get("text") {
                        writeln!(out, "{kind}:")?;
                        write!(out, "{text}")?;
                        continue;
                    }
                    let fields: Vec<String> = r
                        .iter()
                        .filter(|(k, _)| *k != "kind")
                        .map(|(k, v)| match v {
                            Value::String(s) => format!("{k}={s}"),
                            other => format!("{k}={other}"),
                        })
                        .collect();
                    writeln!(out, "{kind:<12} {}", fields.join("  "))?;
                }
            }
        }
        Ok(())
    }
}

fn tower_json(t: &Tower, bits: u64) -> Value {
    json!({
        "tower": t.to_string(),
        "value": t.to_biguint(bits).map(|v| v.to_string()),
    })
}

impl Cli {
    fn search_budget(&self) -> SearchBudget {
        SearchBudget {
            max_agents: self.budget_agents,
        }
    }

    fn play_budget(&self) -> PlayBudget {
        PlayBudget {
            max_plays: self.budget_agents,
            max_len: usize::try_from(self.budget_play_len).unwrap_or(usize::MAX),
        }
    }

    fn hlr_budget(&self) -> HlrBudget {
        HlrBudget {
            max_steps: self.budget_steps,
        }
    }

    fn limits(&self) -> Limits {
        Limits {
            max_nodes: self.budget_agents,
            ..Limits::default()
        }
    }
}

/// Runs the command line `args`, writing to `out`; returns the exit code:
/// 0 when every check passed, 1 when a check failed, 2 on errors.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut report = Report::new();
    let outcome = execute(&cli, &mut report);
    if let Err(e) = &outcome {
        report.push("error", json!({ "message": format!("{e:#}") }));
    }
    if report.write(cli.format, out).is_err() {
        return 2;
    }
    match outcome {
        Err(_) => 2,
        Ok(()) if report.failed => 1,
        Ok(()) => 0,
    }
}

fn execute(cli: &Cli, report: &mut Report) -> anyhow::Result<()> {
    match &cli.command {
        Command::Longest { agent } => cmd_longest(cli, report, &parse_agent(agent)?),
        Command::Nd { n, p, d } => cmd_nd(cli, report, *n, *p, *d),
        Command::Conjecture { max_sum } => cmd_conjecture(cli, report, *max_sum),
        Command::Bound { agent, nd, random } => cmd_bound(cli, report, agent.as_deref(), nd.as_deref(), *random),
        Command::Certify { agent } => cmd_certify(cli, report, &parse_agent(agent)?),
        Command::Hlr { term, family, eta_long } => {
            let mut t = match (term, family) {
                (Some(src), None) => parse_term(src)?,
                (None, Some(n)) => lower_bound_family(*n),
                _ => bail!("give either a term or --family N"),
            };
            if *eta_long {
                t = eta_long_spine(&t)?;
            }
            cmd_hlr(cli, report, &t, *family)
        }
        Command::Simulate { n, p, d } => cmd_simulate(cli, report, *n, *p, *d),
    }
}

fn cmd_longest(cli: &Cli, report: &mut Report, a: &Agent) -> anyhow::Result<()> {
    let stats = if cli.witness {
        longest_reduction_with_witness(a, &cli.search_budget())?
    } else {
        longest_reduction(a, &cli.search_budget())?
    };
    let m = a.metrics();
    let mut rec = json!({
        "agent": a.to_string(),
        "longest": stats.longest,
        "explored": stats.explored,
        "size": m.size,
        "max": m.max_label,
        "depth": m.depth,
    });
    match upper_bound(a) {
        Ok(bound) => {
            rec["bound"] = tower_json(&bound, cli.tower_bits);
            rec["check"] = report.verdict(Tower::from(stats.longest) <= bound).into();
        }
        Err(Error::Hypothesis(why)) => rec["bound"] = json!({ "outside_hypotheses": why }),
        Err(e) => return Err(e.into()),
    }
    report.push("longest", rec);
    if let Some(chain) = &stats.witness {
        for (i, step) in chain.iter().enumerate() {
            report.push("witness", json!({ "step": i + 1, "agent": step.to_string() }));
        }
    }
    Ok(())
}

fn cmd_nd(cli: &Cli, report: &mut Report, n: u32, p: u32, d: u32) -> anyhow::Result<()> {
    if d < 2 {
        bail!(Error::Precondition(format!("nd needs d >= 2, got {d}")));
    }
    let mut ex = Explorer::new(cli.search_budget());
    let agents = nd_with(&mut ex, n, p, d)?;
    let mut rec = json!({ "n": n, "p": p, "d": d, "agents": agents, "explored": ex.explored() });
    let mut longest_play = None;
    match enumerate_interactions(n, p, d, cli.play_budget()) {
        Ok(st) => {
            rec["plays"] = json!(st.max_length);
            rec["play_count"] = json!(st.count);
            let agree = st.max_length as u64 == agents;
            report.verdict(agree);
            rec["agreement"] = if agree { "AGREE" } else { "DISAGREE" }.into();
            longest_play = Some(st.longest);
        }
        Err(Error::BudgetExceeded { .. } | Error::PlayTooLong { .. }) => {
            rec["plays"] = Value::Null;
            rec["agreement"] = "SKIPPED (play budget)".into();
        }
        Err(e) => return Err(e.into()),
    }
    let value = Tower::from(agents);
    let bits = cli.tower_bits;
    let mut bounds = Map::new();
    for (name, bound) in [("main", nd_bound(n, p, d).ok()), ("sharp", nd_bound_sharp(n, p, d).ok())] {
        if let Some(b) = bound {
            let mut v = tower_json(&b, bits);
            v["holds"] = json!(value <= b);
            bounds.insert(name.into(), v);
        }
    }
    // certified for the agent n[{d}p[]], whose longest reduction is one less
    if let Ok(b) = atomic_pair_certified_bound(n, p, d) {
        let mut v = tower_json(&b, bits);
        v["holds"] = json!(Tower::from(agents.saturating_sub(1)) <= b);
        bounds.insert("certified_atomic_pair".into(), v);
    }
    rec["bounds"] = Value::Object(bounds);
    report.push("nd", rec);
    if let (true, Some(s)) = (cli.witness, longest_play) {
        report.push("witness", json!({ "play": s.to_string() }));
    }
    Ok(())
}

fn cmd_conjecture(cli: &Cli, report: &mut Report, max_sum: u32) -> anyhow::Result<()> {
    let mut ex = Explorer::new(cli.search_budget());
    let (mut additive, mut exponential, mut rows) = (true, true, 0);
    for sum in 3..=max_sum {
        for n in 1..=sum - 2 {
            let p = sum - n;
            let value = BigUint::from(nd_with(&mut ex, n, p, 3)?);
            let (a, b) = conjecture_readings(n, p)?;
            additive &= value == a;
            exponential &= value == b;
            rows += 1;
            report.push(
                "conjecture_row",
                json!({
                    "n": n, "p": p, "n3": value.to_string(),
                    "additive": a.to_string(), "additive_match": value == a,
                    "exponential": b.to_string(), "exponential_match": value == b,
                }),
            );
        }
    }
    let surviving: Vec<&str> = [("additive", additive), ("exponential", exponential)]
        .into_iter()
        .filter(|(_, ok)| *ok)
        .map(|(name, _)| name)
        .collect();
    let decisive = surviving.len() == 1;
    let check = report.verdict(rows == 0 || !surviving.is_empty());
    report.push(
        "conjecture",
        json!({
            "max_sum": max_sum, "rows": rows, "explored": ex.explored(),
            "surviving": surviving, "decisive": decisive, "check": check,
        }),
    );
    Ok(())
}

fn cmd_bound(
    cli: &Cli,
    report: &mut Report,
    agent: Option<&str>,
    nd: Option<&[u32]>,
    random: Option<u32>,
) -> anyhow::Result<()> {
    let bits = cli.tower_bits;
    match (agent, nd, random) {
        (Some(src), None, None) => {
            let a = parse_agent(src)?;
            let bound = upper_bound(&a)?;
            let m = a.metrics();
            report.push(
                "bound",
                json!({ "agent": a.to_string(), "size": m.size, "max": m.max_label, "depth": m.depth,
                        "bound": tower_json(&bound, bits) }),
            );
        }
        (None, Some(&[n, p, d]), None) => {
            let mut rec = json!({ "n": n, "p": p, "d": d, "collapse_depth": collapse_depth(n, p) });
            rec["main"] = tower_json(&nd_bound(n, p, d)?, bits);
            if let Ok(t) = nd_bound_sharp(n, p, d) {
                rec["sharp"] = tower_json(&t, bits);
            }
            rec["certified"] = tower_json(&atomic_pair_certified_bound(n, p, d)?, bits);
            if let Ok((lo, hi)) = sandwich(n, p, d) {
                rec["sandwich"] = json!({ "low": tower_json(&lo, bits), "high": tower_json(&hi, bits) });
            }
            report.push("bound", rec);
        }
        (None, None, Some(k)) => {
            let mut r = rng(cli.seed);
            let shape = AgentShape {
                max_size: 6,
                max_label: 3,
                max_edge: 4,
            };
            let mut ex = Explorer::new(cli.search_budget());
            let (mut checked, mut skipped, mut violations) = (0u32, 0u32, 0u32);
            for _ in 0..k {
                let a = random_agent(&mut r, shape);
                let Ok(bound) = upper_bound(&a) else { continue };
                match ex.longest(&a) {
                    Ok(n) => {
                        checked += 1;
                        if Tower::from(n) > bound {
                            violations += 1;
                            report.push("violation", json!({ "agent": a.to_string(), "longest": n,
                                                             "bound": tower_json(&bound, bits) }));
                        }
                    }
                    Err(Error::BudgetExceeded { .. }) => {
                        skipped += 1;
                        ex = Explorer::new(cli.search_budget());
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            let check = report.verdict(violations == 0);
            report.push(
                "bound_sweep",
                json!({ "seed": cli.seed, "agents": k, "checked": checked, "skipped_budget": skipped,
                        "violations": violations, "check": check }),
            );
        }
        _ => bail!("give exactly one of an agent, --nd N P D, or --random K"),
    }
    Ok(())
}

fn cmd_certify(cli: &Cli, report: &mut Report, a: &Agent) -> anyhow::Result<()> {
    let (derivation, bound, nodes) = if a.label() == 0 {
        (Derivation::base(BigUint::from(0u32), 0, a.clone()), None, 1)
    } else {
        let c = certify_with(a, cli.limits())?;
        (c.derivation, Some(c.bound), c.nodes_built)
    };
    let verdict = diagnose(&derivation);
    let extracted = extract_bound(&derivation).ok();
    let mut rec = json!({
        "agent": a.to_string(),
        "alpha": derivation.alpha.to_string(),
        "rho": derivation.rho,
        "nodes_built": nodes,
        "distinct_nodes": derivation.distinct_nodes(),
        "checker": match &verdict { Ok(()) => "valid".to_string(), Err(f) => f.to_string() },
        "extracted": extracted.as_ref().map(|v| v.to_string()),
    });
    let mut ok = verdict.is_ok() && extracted.is_some();
    if let Some(b) = &bound {
        rec["theorem_bound"] = tower_json(b, cli.tower_bits);
        if a.metrics().depth >= 2 {
            ok &= Tower::exact(derivation.alpha.clone()) <= *b;
        }
    }
    match longest_reduction(a, &cli.search_budget()) {
        Ok(st) => {
            rec["longest"] = json!(st.longest);
            ok &= extracted.as_ref().is_some_and(|v| *v >= BigUint::from(st.longest));
        }
        Err(Error::BudgetExceeded { .. }) => rec["longest"] = Value::Null,
        Err(e) => return Err(e.into()),
    }
    rec["check"] = report.verdict(ok).into();
    report.push("certify", rec);
    match write_derivation(&derivation, 100_000) {
        Ok(text) => report.push("derivation", json!({ "text": text })),
        Err(why) => report.push("derivation", json!({ "omitted": why })),
    }
    Ok(())
}

fn cmd_hlr(cli: &Cli, report: &mut Report, t: &Term, family: Option<u32>) -> anyhow::Result<()> {
    let ty = t.typecheck()?;
    let count = hlr_steps(t, cli.hlr_budget())?;
    let m = metrics(t)?;
    let mut rec = json!({
        "term": if t.size() <= 400 { Value::from(t.to_string()) } else { Value::from(format!("<{} nodes>", t.size())) },
        "type": ty.to_string(),
        "level": ty.level(),
        "steps": count.steps,
        "sh": m.sh, "h": m.height, "g": m.degree,
    });
    let steps = Tower::from(count.steps);
    let mut ok = true;
    let gb = general_bound(t)?;
    rec["general_bound"] = tower_json(&gb.bound, cli.tower_bits);
    ok &= steps <= gb.bound;
    match game_situation(t) {
        Ok(gs) => {
            rec["game_bound"] = tower_json(&gs.bound, cli.tower_bits);
            ok &= steps <= gs.bound;
        }
        Err(Error::NotGameSituation(why)) => rec["game_bound"] = json!({ "not_a_game_situation": why }),
        Err(e) => return Err(e.into()),
    }
    if let Some(n) = family {
        let floor = Tower::new(n + 1, 1u32);
        rec["family_floor"] = tower_json(&floor, cli.tower_bits);
        ok &= steps >= floor;
    }
    rec["check"] = report.verdict(ok).into();
    report.push("hlr", rec);
    if cli.witness {
        let mut steps = Vec::new();
        hlr_run_with(t, cli.hlr_budget(), |s, _| {
            steps.push(json!({ "variable": s.variable.to_string(), "position": s.position,
                               "argument": s.argument.to_string() }));
        })
        .context("tracing head linear reduction")?;
        for (i, s) in steps.into_iter().enumerate() {
            let mut s = s;
            s["step"] = json!(i + 1);
            report.push("trace", s);
        }
    }
    Ok(())
}

fn cmd_simulate(cli: &Cli, report: &mut Report, n: u32, p: u32, d: u32) -> anyhow::Result<()> {
    let start = atomic_pair(n, p, d);
    let (mut plays, mut steps, mut failures) = (0u64, 0u64, 0u64);
    let mut first_failure = None;
    for_each_interaction(n, p, d, cli.play_budget(), |s| {
        plays += 1;
        // prefixes are visited too; only the last step of each play is new
        if s.len() < 2 {
            return;
        }
        steps += 1;
        let ok = match s.simulate(n, p, d) {
            Ok(chain) => {
                chain[0] == start
                    && chain
                        .windows(2)
                        .last()
                        .is_some_and(|w| w[0].reduction_steps().contains(&w[1]))
            }
            Err(e) => {
                first_failure.get_or_insert_with(|| format!("{s}: {e}"));
                false
            }
        };
        if !ok {
            failures += 1;
            first_failure.get_or_insert_with(|| s.to_string());
        }
    })?;
    let check = report.verdict(failures == 0);
    report.push(
        "simulate",
        json!({ "n": n, "p": p, "d": d, "plays": plays, "steps_verified": steps - failures,
                "failures": failures, "first_failure": first_failure, "check": check }),
    );
    Ok(())
}
