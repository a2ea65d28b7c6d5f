//! Drivers for `binloc reproduce`: each experiment returns named CSV tables.

use binloc_core::fitness::{DeJongFunction, DeJongSpec};
use binloc_core::gea::{run_es, run_ga, run_sa, EsConfig, GaConfig, GenerationStats, SaConfig};
use binloc_core::RepresentationKind;
use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliResult;
use crate::format::sig6;
use crate::output::{stats_table, Table};

/// The four 5-bit representations compared throughout.
pub const FOUR: [RepresentationKind; 4] = [
    RepresentationKind::Sb,
    RepresentationKind::Brg,
    RepresentationKind::Ngg32,
    RepresentationKind::Ubl32,
];

pub const ONEMAX_ELL: u32 = 5;
pub const ONEMAX_TARGETS: [u32; 2] = [31, 15];
pub const SA_GENERATIONS: u32 = 2000;
pub const ES_GENERATIONS: u32 = 1000;
pub const GA_GENERATIONS: u32 = 30;
pub const GA_EARLY_GENERATIONS: u32 = 20;

/// Targets giving SB and UBL four local maxima each. UBL has four only at
/// 15 and 16; 13 is the nearest such target for SB.
pub const CONVERGENCE_TARGETS: [(RepresentationKind, u32); 2] =
    [(RepresentationKind::Sb, 13), (RepresentationKind::Ubl32, 15)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReproduceId {
    Fig2,
    Table1,
    Table2,
    Fig4,
    Fig5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Paper,
}

impl Profile {
    pub fn trials(self, id: ReproduceId) -> u64 {
        let ga = matches!(id, ReproduceId::Table2 | ReproduceId::Fig5);
        match (self, ga) {
            (Profile::Quick, false) => 10_000,
            (Profile::Paper, false) => 100_000,
            (Profile::Quick, true) => 1_000,
            (Profile::Paper, true) => 3_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Output {
    pub file_name: String,
    pub table: Table,
}

fn series(file_name: String, stats: &[GenerationStats]) -> Output {
    Output {
        file_name,
        table: stats_table(stats),
    }
}

pub fn reproduce(id: ReproduceId, trials: u64, seed: u64) -> CliResult<Vec<Output>> {
    match id {
        ReproduceId::Fig2 => fig2(trials, seed),
        ReproduceId::Table1 => table1(trials, seed),
        ReproduceId::Table2 => table2(trials, seed),
        ReproduceId::Fig4 => fig4(trials, seed),
        ReproduceId::Fig5 => fig5(trials, seed),
    }
}

pub fn sa_config(target: u32, trials: u64, seed: u64) -> SaConfig {
    let mut cfg = SaConfig::new(ONEMAX_ELL, target);
    cfg.trials = trials;
    cfg.max_generations = SA_GENERATIONS;
    cfg.master_seed = seed;
    cfg
}

pub fn es_config(target: u32, trials: u64, seed: u64) -> EsConfig {
    let mut cfg = EsConfig::new(ONEMAX_ELL, target);
    cfg.trials = trials;
    cfg.max_generations = ES_GENERATIONS;
    cfg.master_seed = seed;
    cfg
}

pub fn ga_config(function: DeJongFunction, kind: RepresentationKind, generations: u32, trials: u64, seed: u64) -> GaConfig {
    let mut cfg = GaConfig::new(DeJongSpec::classical(function), kind);
    cfg.generations = generations;
    cfg.trials = trials;
    cfg.master_seed = seed;
    cfg
}

fn fig2(trials: u64, seed: u64) -> CliResult<Vec<Output>> {
    let mut out = Vec::new();
    let mut summary = Table::new(&["target", "representation", "fraction_at_100", "fraction_at_500", "fraction_at_2000"]);
    for a in ONEMAX_TARGETS {
        for kind in FOUR {
            let stats = run_sa(&sa_config(a, trials, seed), &kind.build(ONEMAX_ELL, 0)?)?;
            let at = |g: usize| sig6(stats[g - 1].fraction_at_optimum);
            summary.push(vec![a.to_string(), kind.name().into(), at(100), at(500), at(2000)]);
            out.push(series(format!("fig2_a{a}_{}.csv", kind.name()), &stats));
        }
    }
    out.push(Output {
        file_name: "fig2_summary.csv".into(),
        table: summary,
    });
    Ok(out)
}

fn table1(trials: u64, seed: u64) -> CliResult<Vec<Output>> {
    let mut out = Vec::new();
    let mut summary = Table::new(&["target", "representation", "mean_generations_to_optimum", "converged_fraction"]);
    for a in ONEMAX_TARGETS {
        for kind in FOUR {
            let report = run_es(&es_config(a, trials, seed), &kind.build(ONEMAX_ELL, 0)?)?;
            summary.push(vec![
                a.to_string(),
                kind.name().into(),
                report.mean_generations_to_optimum.map(sig6).unwrap_or_default(),
                sig6(report.converged_fraction),
            ]);
            out.push(series(format!("table1_a{a}_{}.csv", kind.name()), &report.stats));
        }
    }
    out.push(Output {
        file_name: "table1.csv".into(),
        table: summary,
    });
    Ok(out)
}

fn table2(trials: u64, seed: u64) -> CliResult<Vec<Output>> {
    let mut out = Vec::new();
    let mut summary = Table::new(&["function", "representation", "online_performance"]);
    for f in DeJongFunction::ALL {
        for kind in FOUR {
            let stats = run_ga(&ga_config(f, kind, GA_GENERATIONS, trials, seed))?;
            let last = stats.last().expect("at least one generation");
            summary.push(vec![f.name().into(), kind.name().into(), sig6(last.online_performance)]);
            out.push(series(format!("table2_{}_{}.csv", f.name(), kind.name()), &stats));
        }
    }
    out.push(Output {
        file_name: "table2.csv".into(),
        table: summary,
    });
    Ok(out)
}

fn fig4(trials: u64, seed: u64) -> CliResult<Vec<Output>> {
    let mut out = Vec::new();
    let mut sa_runs = Vec::new();
    let mut es_runs = Vec::new();
    for (kind, a) in CONVERGENCE_TARGETS {
        let r = kind.build(ONEMAX_ELL, 0)?;
        let sa = run_sa(&sa_config(a, trials, seed), &r)?;
        let es = run_es(&es_config(a, trials, seed), &r)?.stats;
        out.push(series(format!("fig4_sa_{}_a{a}.csv", kind.name()), &sa));
        out.push(series(format!("fig4_es_{}_a{a}.csv", kind.name()), &es));
        sa_runs.push(sa);
        es_runs.push(es);
    }
    let header: Vec<String> = std::iter::once("generation".to_string())
        .chain(CONVERGENCE_TARGETS.iter().map(|(k, a)| format!("{}_a{a}", k.name())))
        .collect();
    for (name, runs) in [("fig4_sa.csv", &sa_runs), ("fig4_es.csv", &es_runs)] {
        let mut t = Table::new(&header);
        for g in 0..runs[0].len() {
            let mut row = vec![(g + 1).to_string()];
            row.extend(runs.iter().map(|s| sig6(s[g].mean_fitness)));
            t.push(row);
        }
        out.push(Output {
            file_name: name.into(),
            table: t,
        });
    }
    Ok(out)
}

fn fig5(trials: u64, seed: u64) -> CliResult<Vec<Output>> {
    let mut out = Vec::new();
    let header: Vec<&str> = std::iter::once("generation").chain(FOUR.iter().map(|k| k.name())).collect();
    for f in DeJongFunction::ALL {
        let runs = FOUR
            .iter()
            .map(|&k| run_ga(&ga_config(f, k, GA_EARLY_GENERATIONS, trials, seed)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut t = Table::new(&header);
        for g in 0..GA_EARLY_GENERATIONS as usize {
            let mut row = vec![(g + 1).to_string()];
            row.extend(runs.iter().map(|s| sig6(s[g].best_fitness)));
            t.push(row);
        }
        out.push(Output {
            file_name: format!("fig5_{}.csv", f.name()),
            table: t,
        });
    }
    Ok(out)
}
