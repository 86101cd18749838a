//! Figure and data commands. Each produces one or more tables; grid rows are
//! evaluated in parallel and collected in order.

use pacs_core::{
    mean_n, moment_density, normalization, pnd, report, weight, Complex64, NormMethod, PacsPoint, SipSystem, StatMethod,
    StatsReport,
};
use rayon::prelude::*;

use crate::config::{Method, RunConfig};
use crate::output::Table;
use crate::Command;

fn stat_method(m: Method) -> StatMethod {
    match m {
        Method::Series => StatMethod::Series,
        Method::Closed => StatMethod::Closed,
    }
}

fn stats_at(system: &SipSystem, z: f64, m: usize, method: StatMethod) -> Option<StatsReport> {
    let p = PacsPoint::new(*system, Complex64::new(z, 0.0), m).ok()?;
    report(&p, method).ok()
}

fn header(first: &str, prefix: &str, ms: &[usize]) -> Vec<String> {
    std::iter::once(first.to_string()).chain(ms.iter().map(|m| format!("{prefix}_m{m}"))).collect()
}

/// ω_m over the grid, one column per m.
pub fn weight_table(cfg: &RunConfig) -> Table {
    let g = cfg.grid;
    let mut t = Table::new(format!("weight function, {} family", cfg.system.family().name()), header(g.label(), "w", &cfg.m_list));
    t.rows = g
        .values()
        .par_iter()
        .map(|&v| {
            let x = g.amplitude(v).powi(2);
            std::iter::once(v)
                .chain(cfg.m_list.iter().map(|&m| weight(&cfg.system, m, x).unwrap_or(f64::NAN)))
                .collect()
        })
        .collect();
    t
}

/// Mandel Q and g² over the grid: two tables.
pub fn q_g2_tables(cfg: &RunConfig) -> Vec<Table> {
    let g = cfg.grid;
    let method = stat_method(cfg.method);
    let rows: Vec<(f64, Vec<Option<StatsReport>>)> = g
        .values()
        .par_iter()
        .map(|&v| (v, cfg.m_list.iter().map(|&m| stats_at(&cfg.system, g.amplitude(v), m, method)).collect()))
        .collect();
    let fam = cfg.system.family().name();
    let mut q = Table::new(format!("Mandel Q, {fam} family"), header(g.label(), "Q", &cfg.m_list));
    let mut g2 = Table::new(format!("second-order correlation, {fam} family"), header(g.label(), "g2", &cfg.m_list));
    for (v, reps) in rows {
        q.rows.push(std::iter::once(v).chain(reps.iter().map(|r| r.map_or(f64::NAN, |r| r.mandel_q))).collect());
        g2.rows.push(std::iter::once(v).chain(reps.iter().map(|r| r.map_or(f64::NAN, |r| r.g2))).collect());
    }
    vec![q, g2]
}

/// Number distribution P_n for n = 0..=n_max, one table per amplitude.
pub fn pnd_tables(cfg: &RunConfig) -> Vec<Table> {
    let method = stat_method(cfg.method);
    cfg.z_points
        .iter()
        .map(|&z| {
            let mut t = Table::new(
                format!("number distribution at |z| = {z}, {} family", cfg.system.family().name()),
                header("n", "P", &cfg.m_list),
            );
            let points: Vec<Option<PacsPoint>> =
                cfg.m_list.iter().map(|&m| PacsPoint::new(cfg.system, Complex64::new(z, 0.0), m).ok()).collect();
            t.rows = (0..=cfg.n_max)
                .into_par_iter()
                .map(|n| {
                    std::iter::once(n as f64)
                        .chain(points.iter().map(|p| p.as_ref().and_then(|p| pnd(p, n, method).ok()).unwrap_or(f64::NAN)))
                        .collect()
                })
                .collect();
            t
        })
        .collect()
}

/// ⟨N⟩, ⟨N²⟩, Q, g² in long format: one row per (grid point, m).
pub fn stats_table(cfg: &RunConfig) -> Table {
    let g = cfg.grid;
    let method = stat_method(cfg.method);
    let mut t = Table::new(
        format!("photon statistics, {} family", cfg.system.family().name()),
        [g.label(), "m", "mean_n", "mean_n2", "Q", "g2"].iter().map(|s| s.to_string()).collect(),
    );
    let rows: Vec<Vec<Vec<f64>>> = g
        .values()
        .par_iter()
        .map(|&v| {
            cfg.m_list
                .iter()
                .map(|&m| match stats_at(&cfg.system, g.amplitude(v), m, method) {
                    Some(r) => vec![v, m as f64, r.mean_n, r.mean_n2, r.mandel_q, r.g2],
                    None => {
                        // ⟨N⟩ is defined even where Q is not (vacuum with m = 0).
                        let mean = PacsPoint::new(cfg.system, Complex64::new(g.amplitude(v), 0.0), m)
                            .ok()
                            .and_then(|p| mean_n(&p, method).ok())
                            .unwrap_or(f64::NAN);
                        vec![v, m as f64, mean, f64::NAN, f64::NAN, f64::NAN]
                    }
                })
                .collect()
        })
        .collect();
    t.rows = rows.into_iter().flatten().collect();
    t
}

/// Normalization N_m and moment density W_m = π N_m² ω_m over the grid.
pub fn sweep_tables(cfg: &RunConfig) -> Vec<Table> {
    let g = cfg.grid;
    let norm_method = match cfg.method {
        Method::Series => NormMethod::Series,
        Method::Closed => NormMethod::Closed,
    };
    let fam = cfg.system.family().name();
    let rows: Vec<(f64, Vec<f64>, Vec<f64>)> = g
        .values()
        .par_iter()
        .map(|&v| {
            let x = g.amplitude(v).powi(2);
            let n = cfg.m_list.iter().map(|&m| normalization(&cfg.system, m, x, norm_method).unwrap_or(f64::NAN)).collect();
            let w = cfg.m_list.iter().map(|&m| moment_density(&cfg.system, m, x).unwrap_or(f64::NAN)).collect();
            (v, n, w)
        })
        .collect();
    let mut tn = Table::new(format!("normalization, {fam} family"), header(g.label(), "N", &cfg.m_list));
    let mut tw = Table::new(format!("moment density, {fam} family"), header(g.label(), "W", &cfg.m_list));
    for (v, n, w) in rows {
        tn.rows.push(std::iter::once(v).chain(n).collect());
        tw.rows.push(std::iter::once(v).chain(w).collect());
    }
    vec![tn, tw]
}

/// Tables for a data-producing command.
pub fn run(cfg: &RunConfig) -> Vec<Table> {
    use Command::*;
    match cfg.command {
        Fig1 | Fig4 | Fig7 | Fig10 | Weight => vec![weight_table(cfg)],
        Fig2 | Fig5 | Fig8 | Fig11 => q_g2_tables(cfg),
        Fig3 | Fig6 | Fig9 | Fig12 | Pnd => pnd_tables(cfg),
        Stats => vec![stats_table(cfg)],
        Sweep => sweep_tables(cfg),
        Verify => Vec::new(),
    }
}
