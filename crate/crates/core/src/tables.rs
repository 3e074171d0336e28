//! Regeneration of the reference tables.

use serde::Serialize;

use crate::potential::{qes_potential, Potential, QuarticPotential};
use crate::reference::reference_tables;
use crate::solver::{eigenvalues_auto, merge_sectors, sector_nu, EigenvalueResult, EnergyScanConfig, Sector};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCell {
    /// Row parameter (`A2` or `J`) as printed.
    pub row: String,
    pub param: f64,
    pub level: usize,
    pub reference: f64,
    pub result: Result<EigenvalueResult, String>,
}

impl TableCell {
    pub fn energy(&self) -> Option<f64> {
        self.result.as_ref().ok().map(|r| r.energy)
    }

    pub fn diff(&self) -> Option<f64> {
        self.energy().map(|e| e - self.reference)
    }
}

struct Job {
    pot: Potential,
    nu: f64,
    count: usize,
}

/// Each job searches upward from the bottom of its potential; only the
/// step, tolerances, truncation and execution mode of `config` are used.
fn run(jobs: &[Job], config: &EnergyScanConfig) -> Vec<Result<Vec<EigenvalueResult>, String>> {
    let config = EnergyScanConfig { e_min: f64::NEG_INFINITY, e_max: f64::INFINITY, ..config.clone() };
    config.execution.map(jobs, |j| eigenvalues_auto(&j.pot, j.nu, j.count, &config).map_err(|e| e.to_string()))
}

fn cells(row: String, param: f64, reference: &[f64; 4], levels: Result<Vec<EigenvalueResult>, String>) -> Vec<TableCell> {
    (0..4)
        .map(|k| TableCell {
            row: row.clone(),
            param,
            level: k,
            reference: reference[k],
            result: match &levels {
                Ok(v) => v.get(k).cloned().ok_or_else(|| "level missing".to_string()),
                Err(e) => Err(e.clone()),
            },
        })
        .collect()
}

/// Quartic double well: two even and two odd levels per row, merged.
pub fn table1(config: &EnergyScanConfig) -> Vec<TableCell> {
    let t = &reference_tables().table1;
    let jobs: Vec<Job> = t
        .rows
        .iter()
        .flat_map(|r| {
            let pot: Potential = QuarticPotential { a4: t.a4, a2: r.a2, am2: 0.0 }.into();
            [Job { pot, nu: 0.0, count: 2 }, Job { pot, nu: 1.0, count: 2 }]
        })
        .collect();
    let out = run(&jobs, config);
    t.rows
        .iter()
        .zip(out.chunks(2))
        .flat_map(|(r, pair)| {
            let merged = match (&pair[0], &pair[1]) {
                (Ok(e), Ok(o)) => Ok(merge_sectors(&[e.clone(), o.clone()]).into_iter().map(|m| m.result).collect()),
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            };
            cells(format!("{}", r.a2), r.a2, &r.energies, merged)
        })
        .collect()
}

/// Sextic family in the regular sector, four lowest levels per `J`.
pub fn table2(config: &EnergyScanConfig) -> Vec<TableCell> {
    let t = &reference_tables().table2;
    let s = t.s_value();
    let jobs: Result<Vec<Job>, String> = t
        .rows
        .iter()
        .map(|r| {
            let pot: Potential = qes_potential(s, r.j_value()).into();
            let nu = sector_nu(&pot, Sector::Regular).map_err(|e| e.to_string())?;
            Ok(Job { pot, nu, count: 4 })
        })
        .collect();
    let jobs = jobs.expect("reference potentials are valid");
    let out = run(&jobs, config);
    t.rows
        .iter()
        .zip(out)
        .flat_map(|(r, levels)| cells(r.j.clone(), r.j_value(), &r.energies, levels))
        .collect()
}
