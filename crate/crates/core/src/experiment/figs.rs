use std::io::Write;

use serde::Serialize;

use super::ExperimentConfig;
use crate::agents::{asmtc, AgentAssignment, AsmtcParams};
use crate::diffusion::OverheadLedger;
use crate::error::{Error, Result};
use crate::graph::Instance;
use crate::seeding::{celf_select, celf_select_with_agents, deployment_ledgers, deployment_overhead};

/// A row of an output table.
pub trait CsvRow {
    const HEADER: &'static str;
    fn fields(&self) -> String;
}

pub fn write_rows<R: CsvRow, W: Write>(rows: &[R], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{}", R::HEADER)?;
    for r in rows {
        writeln!(w, "{}", r.fields())?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fig3Row {
    pub k: usize,
    pub spread_without_agents: f64,
    pub spread_with_agents: f64,
}

impl CsvRow for Fig3Row {
    const HEADER: &'static str = "K,spread_without_agents,spread_with_agents";
    fn fields(&self) -> String {
        format!("{},{},{}", self.k, self.spread_without_agents, self.spread_with_agents)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fig4Row {
    pub n: usize,
    pub asmtc_control_overhead: u64,
    pub deployment_overhead_with_agents: u64,
}

impl CsvRow for Fig4Row {
    const HEADER: &'static str = "n,asmtc_control_overhead,deployment_overhead_with_agents";
    fn fields(&self) -> String {
        format!(
            "{},{},{}",
            self.n, self.asmtc_control_overhead, self.deployment_overhead_with_agents
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fig5Row {
    pub num_delegated_allowed: usize,
    pub deployment_overhead: u64,
}

impl CsvRow for Fig5Row {
    const HEADER: &'static str = "num_delegated_allowed,deployment_overhead";
    fn fields(&self) -> String {
        format!("{},{}", self.num_delegated_allowed, self.deployment_overhead)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fig6Row {
    pub k: usize,
    pub avg_degree: f64,
    pub overhead_no_agents: u64,
    pub overhead_asmtc: u64,
    pub reduction_pct: f64,
}

impl CsvRow for Fig6Row {
    const HEADER: &'static str = "K,avg_degree,overhead_no_agents,overhead_asmtc,reduction_pct";
    fn fields(&self) -> String {
        format!(
            "{},{},{},{},{:.4}",
            self.k, self.avg_degree, self.overhead_no_agents, self.overhead_asmtc, self.reduction_pct
        )
    }
}

fn max_k(ks: &[usize], what: &str) -> Result<usize> {
    match ks.iter().copied().max() {
        Some(k) if k > 0 && ks.iter().all(|&k| k > 0) => Ok(k),
        _ => Err(Error::domain(format!("{what} needs positive seed budgets"))),
    }
}

/// Spread of CELF seeds chosen while billing messages to the all-self
/// assignment and to the agent assignment; the two columns agree whenever
/// agents leave diffusion untouched. Budgets share one run: CELF seeds for
/// a smaller budget are a prefix of the larger run.
pub fn fig3(cfg: &ExperimentConfig, inst: &Instance) -> Result<Vec<Fig3Row>> {
    let kmax = max_k(&cfg.fig3_k, "fig3")?;
    let pool = cfg.pool();
    let agents = asmtc(inst, &cfg.asmtc)?.assignment;
    let all_self = AgentAssignment::all_self(inst.node_count());
    let (without, _) = celf_select_with_agents(inst, &all_self, kmax, &pool, &cfg.selection)?;
    let (with, _) = celf_select_with_agents(inst, &agents, kmax, &pool, &cfg.selection)?;
    let prefix = |gains: &[i64], k: usize| gains[..k].iter().sum::<i64>() as f64 / pool.trials as f64;
    Ok(cfg
        .fig3_k
        .iter()
        .map(|&k| Fig3Row {
            k,
            spread_without_agents: prefix(&without.gain_totals, k),
            spread_with_agents: prefix(&with.gain_totals, k),
        })
        .collect())
}

/// Control traffic of agent selection and the message hops of a deployment
/// under its agents, as the network grows.
pub fn fig4(cfg: &ExperimentConfig) -> Result<Vec<Fig4Row>> {
    let pool = cfg.pool();
    let mut rows = Vec::new();
    for &n in &cfg.fig4_n {
        let c = cfg.with_n(n)?;
        let inst = c.build()?.instance;
        let out = asmtc(&inst, &c.asmtc)?;
        let sel = celf_select(inst.social(), c.k.min(n), &pool, &c.selection)?;
        let ledger = deployment_overhead(&inst, &sel, &out.assignment, &pool, &c.deploy)?;
        rows.push(Fig4Row {
            n,
            asmtc_control_overhead: out.ledger.total(),
            deployment_overhead_with_agents: ledger.message_hops(),
        });
    }
    Ok(rows)
}

/// Deployment message hops when at most a given number of nodes may hand
/// their messages to an agent.
pub fn fig5(cfg: &ExperimentConfig, inst: &Instance) -> Result<Vec<Fig5Row>> {
    let n = inst.node_count();
    let pool = cfg.pool();
    let sel = celf_select(inst.social(), cfg.k, &pool, &cfg.selection)?;
    let caps: Vec<usize> = cfg
        .fig5_fractions
        .iter()
        .map(|f| (f * n as f64).floor() as usize)
        .collect();
    let assignments = caps
        .iter()
        .map(|&cap| {
            let params = AsmtcParams {
                max_delegated: Some(cap),
                ..cfg.asmtc
            };
            asmtc(inst, &params).map(|o| o.assignment)
        })
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&AgentAssignment> = assignments.iter().collect();
    let ledgers = deployment_ledgers(inst, &sel, &refs, &pool, &cfg.deploy)?;
    Ok(caps
        .iter()
        .zip(ledgers)
        .map(|(&cap, per)| Fig5Row {
            num_delegated_allowed: cap,
            deployment_overhead: per.iter().copied().sum::<OverheadLedger>().message_hops(),
        })
        .collect())
}

/// Deployment ledgers without agents and with agent selection, for every
/// budget in `ks`, from one selection and one replay.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub k: usize,
    pub baseline: OverheadLedger,
    pub asmtc: OverheadLedger,
}

pub fn compare_overhead(
    cfg: &ExperimentConfig,
    inst: &Instance,
    ks: &[usize],
) -> Result<Vec<Comparison>> {
    let kmax = max_k(ks, "comparison")?;
    let pool = cfg.pool();
    let sel = celf_select(inst.social(), kmax, &pool, &cfg.selection)?;
    let agents = asmtc(inst, &cfg.asmtc)?.assignment;
    let all_self = AgentAssignment::all_self(inst.node_count());
    let ledgers = deployment_ledgers(inst, &sel, &[&all_self, &agents], &pool, &cfg.deploy)?;
    let upto = |per: &[OverheadLedger], k: usize| per[..k].iter().copied().sum();
    Ok(ks
        .iter()
        .map(|&k| Comparison {
            k,
            baseline: upto(&ledgers[0], k),
            asmtc: upto(&ledgers[1], k),
        })
        .collect())
}

/// Message hops with and without agents across ad-hoc densities. The
/// friendship graph and the mapping are the same for every density.
pub fn fig6(cfg: &ExperimentConfig) -> Result<Vec<Fig6Row>> {
    let (social, diag) = cfg.build_social()?;
    let mut rows = Vec::new();
    for &(avg, max) in &cfg.fig6_degrees {
        let c = cfg.with_adhoc_degree(avg, max)?;
        let inst = c.build_on(social.clone(), diag.clone())?.instance;
        for cmp in compare_overhead(&c, &inst, &cfg.fig6_k)? {
            let (base, with) = (cmp.baseline.message_hops(), cmp.asmtc.message_hops());
            rows.push(Fig6Row {
                k: cmp.k,
                avg_degree: avg,
                overhead_no_agents: base,
                overhead_asmtc: with,
                reduction_pct: if base == 0 {
                    0.0
                } else {
                    100.0 * (base as f64 - with as f64) / base as f64
                },
            });
        }
    }
    Ok(rows)
}
