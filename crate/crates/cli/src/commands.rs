//! Subcommand implementations. Each returns the table to print and whether
//! any part of the job failed.

use std::fmt;

use anharmonic::exec::Execution;
use anharmonic::oracle::{oracle_states, Boundary, OracleConfig};
use anharmonic::potential::{indicial_exponents, qes_potential, Potential, QuarticPotential, SexticPotential};
use anharmonic::series::Summation;
use anharmonic::solver::{
    eigenvalues, eigenvalues_auto, merge_sectors, sample_wronskian, EigenvalueResult, EnergyScanConfig,
};
use anharmonic::tables::{table1, table2, TableCell};
use anharmonic::wronskian::{Precision, TruncationConfig};

use crate::args::{Job, PrecisionArg, SectorArg, SummationArg};
use crate::output::{e8, fixed, full, sci, text, Cell, Table};

/// Error with the process exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Invalid or incomplete arguments (exit 2).
    Usage(String),
    /// Solver or I/O failure (exit 1).
    Run(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Run(m) => f.write_str(m),
        }
    }
}

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

fn run_err(e: impl fmt::Display) -> Failure {
    Failure::Run(e.to_string())
}

pub struct Outcome {
    pub table: Table,
    /// Some part of the job failed after the table was produced.
    pub failed: bool,
}

#[derive(Debug, Clone)]
struct SectorSpec {
    label: String,
    nu: f64,
    boundary: Option<Boundary>,
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

impl Job {
    fn potential(&self) -> Result<Potential, Failure> {
        if self.qes_s.is_some() || self.qes_j.is_some() {
            if self.quartic {
                return Err(usage("--qes-s/--qes-j define a sextic potential"));
            }
            if self.a6.is_some() || self.a4.is_some() || self.a2.is_some() || self.am2.is_some() {
                return Err(usage("--qes-s/--qes-j cannot be combined with explicit coefficients"));
            }
            let (Some(s), Some(j)) = (self.qes_s, self.qes_j) else {
                return Err(usage("--qes-s and --qes-j must be given together"));
            };
            let p = qes_potential(s, j);
            return SexticPotential::new(p.a6, p.a4, p.a2, p.am2).map(Into::into).map_err(|e| usage(e.to_string()));
        }
        if self.sextic {
            SexticPotential::new(
                self.a6.unwrap_or(1.0),
                self.a4.unwrap_or(0.0),
                self.a2.unwrap_or(0.0),
                self.am2.unwrap_or(0.0),
            )
            .map(Into::into)
            .map_err(|e| usage(e.to_string()))
        } else if self.quartic {
            if self.a6.is_some() {
                return Err(usage("--a6 needs --sextic"));
            }
            QuarticPotential::new(self.a4.unwrap_or(1.0), self.a2.unwrap_or(0.0), self.am2.unwrap_or(0.0))
                .map(Into::into)
                .map_err(|e| usage(e.to_string()))
        } else {
            Err(usage("choose a potential family with --quartic or --sextic"))
        }
    }

    fn sectors(&self, pot: &Potential) -> Result<Vec<SectorSpec>, Failure> {
        let am2 = pot.am2();
        let pair = indicial_exponents(am2).map_err(|e| usage(e.to_string()))?;
        let line = |label: &str, nu: f64, b: Boundary| SectorSpec { label: label.into(), nu, boundary: Some(b) };
        if let Some(nu) = self.nu {
            let boundary = if am2 == 0.0 && nu == 0.0 {
                Some(Boundary::Even1d)
            } else if am2 == 0.0 && nu == 1.0 {
                Some(Boundary::Odd1d)
            } else if (nu - pair.nu_regular).abs() < 1e-12 {
                Some(Boundary::DirichletOrigin)
            } else {
                None
            };
            return Ok(vec![SectorSpec { label: format!("nu={}", fmt_num(nu)), nu, boundary }]);
        }
        let default = if am2 == 0.0 { SectorArg::Both } else { SectorArg::Radial };
        let needs_line = |s: &str| usage(format!("sector {s} needs Am2 = 0; use radial or other"));
        Ok(match self.sector.unwrap_or(default) {
            SectorArg::Even if am2 != 0.0 => return Err(needs_line("even")),
            SectorArg::Odd if am2 != 0.0 => return Err(needs_line("odd")),
            SectorArg::Both if am2 != 0.0 => return Err(needs_line("both")),
            SectorArg::Even => vec![line("even", 0.0, Boundary::Even1d)],
            SectorArg::Odd => vec![line("odd", 1.0, Boundary::Odd1d)],
            SectorArg::Both => vec![line("even", 0.0, Boundary::Even1d), line("odd", 1.0, Boundary::Odd1d)],
            SectorArg::Radial => vec![line("radial", pair.nu_regular, Boundary::DirichletOrigin)],
            SectorArg::Other => vec![SectorSpec { label: "other".into(), nu: pair.nu_other, boundary: None }],
        })
    }

    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }

    fn truncation(&self) -> Result<TruncationConfig, Failure> {
        let mut t = TruncationConfig::default();
        if let Some(h) = self.h_terms {
            t.h_terms = h;
        }
        if let Some(set) = &self.n_set {
            if set.is_empty() {
                return Err(usage("--n-set must list at least one index"));
            }
            t.n_set = set.clone();
            t.n_ref = set[0];
        }
        if let Some(n) = self.n_ref {
            t.n_ref = n;
            if self.n_set.is_none() {
                t.n_set = vec![n, n + 1, n + 2];
            } else if !t.n_set.contains(&n) {
                t.n_set.insert(0, n);
            }
        }
        if let Some(p) = self.precision {
            t.precision = match p {
                PrecisionArg::Double => Precision::Double,
                PrecisionArg::Extended => Precision::Extended,
                PrecisionArg::Auto => Precision::Auto,
            };
        }
        if let Some(s) = self.summation {
            t.summation = match s {
                SummationArg::Truncated => Summation::Truncated,
                SummationArg::Levin => Summation::Levin,
            };
        }
        Ok(t)
    }

    fn scan_config(&self) -> Result<EnergyScanConfig, Failure> {
        if !(self.step > 0.0) {
            return Err(usage("--step must be positive"));
        }
        if !(self.root_tolerance > 0.0) {
            return Err(usage("--root-tolerance must be positive"));
        }
        if let (Some(lo), Some(hi)) = (self.e_min, self.e_max) {
            if lo > hi {
                return Err(usage("--e-min must not exceed --e-max"));
            }
        }
        Ok(EnergyScanConfig {
            e_min: self.e_min.unwrap_or(f64::NEG_INFINITY),
            e_max: self.e_max.unwrap_or(f64::INFINITY),
            step: self.step,
            root_tolerance: self.root_tolerance,
            truncation: self.truncation()?,
            execution: self.execution(),
            ..EnergyScanConfig::default()
        })
    }

    fn oracle_config(&self) -> Result<OracleConfig, Failure> {
        let mut c = OracleConfig { execution: self.execution(), ..OracleConfig::default() };
        if let Some(n) = self.grid_points {
            c.grid_points = n;
        }
        c.r_max = self.r_max;
        Ok(c)
    }
}

fn describe(pot: &Potential) -> String {
    match pot {
        Potential::Quartic(p) => {
            format!("quartic a4={} a2={} am2={}", fmt_num(p.a4), fmt_num(p.a2), fmt_num(p.am2))
        }
        Potential::Sextic(p) => format!(
            "sextic a6={} a4={} a2={} am2={}",
            fmt_num(p.a6),
            fmt_num(p.a4),
            fmt_num(p.a2),
            fmt_num(p.am2)
        ),
    }
}

fn truncation_meta(t: &mut Table, tr: &TruncationConfig) {
    let set: Vec<String> = tr.n_set.iter().map(|n| n.to_string()).collect();
    t.meta(
        "truncation",
        format!(
            "h_terms={} n_ref={} n_set={} precision={:?} summation={:?}",
            tr.h_terms,
            tr.n_ref,
            set.join(","),
            tr.precision,
            tr.summation
        )
        .to_lowercase(),
    );
}

fn base_meta(t: &mut Table, command: &str) {
    t.meta("program", format!("anharmonic {}", env!("CARGO_PKG_VERSION")));
    t.meta("command", command);
}

fn solve_sector(
    pot: &Potential,
    nu: f64,
    count: usize,
    config: &EnergyScanConfig,
) -> Result<Vec<EigenvalueResult>, anharmonic::solver::SolverError> {
    if config.e_min.is_finite() && config.e_max.is_finite() {
        eigenvalues(pot, nu, count, config)
    } else {
        eigenvalues_auto(pot, nu, count, config)
    }
}

fn sector_label(sectors: &[SectorSpec], nu: f64) -> String {
    sectors.iter().find(|s| s.nu == nu).map(|s| s.label.clone()).unwrap_or_else(|| format!("nu={nu}"))
}

fn solved(
    pot: &Potential,
    sectors: &[SectorSpec],
    count: usize,
    config: &EnergyScanConfig,
) -> Result<Vec<(usize, EigenvalueResult)>, Failure> {
    let mut per = Vec::new();
    for s in sectors {
        per.push(solve_sector(pot, s.nu, count, config).map_err(|e| run_err(format!("sector {}: {e}", s.label)))?);
    }
    Ok(merge_sectors(&per).into_iter().take(count).map(|m| (m.k, m.result)).collect())
}

pub fn solve(job: &Job) -> Result<Outcome, Failure> {
    let pot = job.potential()?;
    let sectors = job.sectors(&pot)?;
    let config = job.scan_config()?;
    let mut t = Table::new(&[
        "k",
        "sector",
        "nu",
        "energy",
        "estimated_error",
        "qes_exact",
        "converged",
        "precision",
        "energy_full",
    ]);
    base_meta(&mut t, "solve");
    t.meta("potential", describe(&pot));
    truncation_meta(&mut t, &config.truncation);
    let levels = if job.count == 0 { Vec::new() } else { solved(&pot, &sectors, job.count, &config)? };
    for (k, r) in levels {
        t.push(vec![
            Cell::Int(k as i64),
            text(sector_label(&sectors, r.sector_nu)),
            full(r.sector_nu),
            e8(r.energy),
            sci(r.estimated_error),
            Cell::Bool(r.qes_exact),
            Cell::Bool(r.converged),
            text(format!("{:?}", r.precision).to_lowercase()),
            full(r.energy),
        ]);
    }
    Ok(Outcome { table: t, failed: false })
}

pub fn scan(job: &Job) -> Result<Outcome, Failure> {
    let pot = job.potential()?;
    let sectors = job.sectors(&pot)?;
    let config = job.scan_config()?;
    let (Some(lo), Some(hi)) = (job.e_min, job.e_max) else {
        return Err(usage("scan needs --e-min and --e-max"));
    };
    let mut t = Table::new(&[
        "sector",
        "energy",
        "w_normalized",
        "spread",
        "converged",
        "gammas_accepted",
        "qes_terminated",
        "error",
    ]);
    base_meta(&mut t, "scan");
    t.meta("potential", describe(&pot));
    truncation_meta(&mut t, &config.truncation);
    for s in &sectors {
        let samples = sample_wronskian(&pot, s.nu, lo, hi, job.step, &config.truncation, config.execution)
            .map_err(|e| usage(e.to_string()))?;
        for (i, w) in samples.into_iter().enumerate() {
            let e = lo + i as f64 * job.step;
            t.push(match w {
                Ok(w) => vec![
                    text(&s.label),
                    fixed(e, 10),
                    sci(w.normalized()),
                    sci(w.spread),
                    Cell::Bool(w.converged),
                    Cell::Bool(w.gammas_accepted),
                    Cell::Bool(w.qes_terminated),
                    Cell::Missing,
                ],
                Err(err) => vec![
                    text(&s.label),
                    fixed(e, 10),
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Bool(false),
                    Cell::Bool(false),
                    Cell::Bool(false),
                    text(err.to_string()),
                ],
            });
        }
    }
    Ok(Outcome { table: t, failed: false })
}

fn table_rows(t: &mut Table, cells: &[TableCell], sector: impl Fn(&EigenvalueResult) -> &'static str) -> bool {
    let mut failed = false;
    for c in cells {
        let mut row = vec![text(&c.row), Cell::Int(c.level as i64), e8(c.reference)];
        match &c.result {
            Ok(r) => row.extend([
                text(sector(r)),
                e8(r.energy),
                sci(r.energy - c.reference),
                sci(r.estimated_error),
                Cell::Bool(r.qes_exact),
                text("ok"),
                full(r.energy),
            ]),
            Err(e) => {
                failed = true;
                row.extend([
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                    text(e.clone()),
                    Cell::Missing,
                ])
            }
        }
        t.push(row);
    }
    failed
}

const TABLE_COLUMNS: [&str; 10] =
    ["row", "level", "reference", "sector", "energy", "diff", "estimated_error", "qes_exact", "status", "energy_full"];

fn table_config(job: &Job) -> Result<EnergyScanConfig, Failure> {
    let mut c = job.scan_config()?;
    // the table drivers choose their own windows
    c.e_min = f64::NEG_INFINITY;
    c.e_max = f64::INFINITY;
    Ok(c)
}

pub fn tables1(job: &Job) -> Result<Outcome, Failure> {
    let config = table_config(job)?;
    let mut t = Table::new(&TABLE_COLUMNS);
    t.columns[0] = "a2";
    base_meta(&mut t, "table1");
    t.meta("potential", "quartic a4=1 a2=<row> am2=0, even and odd sectors merged");
    truncation_meta(&mut t, &config.truncation);
    let cells = table1(&config);
    let failed = table_rows(&mut t, &cells, |r| if r.sector_nu == 0.0 { "even" } else { "odd" });
    Ok(Outcome { table: t, failed })
}

pub fn tables2(job: &Job) -> Result<Outcome, Failure> {
    let config = table_config(job)?;
    let mut t = Table::new(&TABLE_COLUMNS);
    t.columns[0] = "j";
    base_meta(&mut t, "table2");
    t.meta("potential", "sextic qes s=(2+sqrt3)/4 j=<row>, radial sector");
    truncation_meta(&mut t, &config.truncation);
    let cells = table2(&config);
    let failed = table_rows(&mut t, &cells, |_| "radial");
    Ok(Outcome { table: t, failed })
}

fn oracle_sector(s: &SectorSpec) -> Result<Boundary, Failure> {
    s.boundary.ok_or_else(|| usage(format!("the oracle has no boundary condition for sector {}", s.label)))
}

pub fn oracle(job: &Job) -> Result<Outcome, Failure> {
    let pot = job.potential()?;
    let sectors = job.sectors(&pot)?;
    let oc = job.oracle_config()?;
    let mut t = Table::new(&["k", "sector", "energy", "nodes", "r_max", "energy_full"]);
    base_meta(&mut t, "oracle");
    t.meta("potential", describe(&pot));
    t.meta("oracle", format!("grid_points={} r_min={}", oc.grid_points, fmt_num(oc.r_min)));
    let mut all = Vec::new();
    for s in &sectors {
        let b = oracle_sector(s)?;
        let levels = oracle_states(&pot, b, job.count, &oc).map_err(|e| run_err(format!("sector {}: {e}", s.label)))?;
        all.extend(levels.into_iter().map(|l| (s.label.clone(), l)));
    }
    all.sort_by(|a, b| a.1.energy.total_cmp(&b.1.energy));
    for (k, (label, l)) in all.into_iter().take(job.count).enumerate() {
        t.push(vec![
            Cell::Int(k as i64),
            text(label),
            e8(l.energy),
            Cell::Int(l.nodes as i64),
            fixed(l.r_max, 4),
            full(l.energy),
        ]);
    }
    Ok(Outcome { table: t, failed: false })
}

pub fn compare(job: &Job) -> Result<Outcome, Failure> {
    let pot = job.potential()?;
    let sectors = job.sectors(&pot)?;
    let config = job.scan_config()?;
    let oc = job.oracle_config()?;
    if !(job.tolerance > 0.0) {
        return Err(usage("--tolerance must be positive"));
    }
    let mut t = Table::new(&[
        "k",
        "sector",
        "level_in_sector",
        "e_wronskian",
        "e_oracle",
        "abs_diff",
        "within_tolerance",
        "diagnostic",
    ]);
    base_meta(&mut t, "compare");
    t.meta("potential", describe(&pot));
    truncation_meta(&mut t, &config.truncation);
    t.meta("tolerance", sci_text(job.tolerance));
    let mut rows: Vec<(f64, bool, Vec<Cell>)> = Vec::new();
    for s in &sectors {
        let b = oracle_sector(s)?;
        let oracle = oracle_states(&pot, b, job.count, &oc).map_err(|e| run_err(format!("oracle, sector {}: {e}", s.label)))?;
        let wr = if job.count == 0 { Ok(Vec::new()) } else { solve_sector(&pot, s.nu, job.count, &config) };
        for (i, o) in oracle.iter().enumerate() {
            let (w, diag) = match &wr {
                Ok(levels) => match levels.get(i) {
                    Some(r) if r.converged => (Some(r.energy), String::new()),
                    Some(r) => (Some(r.energy), "W not converged at root".to_string()),
                    None => (None, "no Wronskian root".to_string()),
                },
                Err(e) => (None, e.to_string()),
            };
            let diff = w.map(|w| (w - o.energy).abs());
            let within = diff.is_some_and(|d| d <= job.tolerance);
            rows.push((
                o.energy,
                within,
                vec![
                    Cell::Missing,
                    text(&s.label),
                    Cell::Int(i as i64),
                    w.map(full).unwrap_or(Cell::Missing),
                    full(o.energy),
                    diff.map(sci).unwrap_or(Cell::Missing),
                    Cell::Bool(within),
                    if diag.is_empty() { Cell::Missing } else { text(diag) },
                ],
            ));
        }
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut failed = false;
    for (k, (_, within, mut row)) in rows.into_iter().take(job.count).enumerate() {
        failed |= !within;
        row[0] = Cell::Int(k as i64);
        t.push(row);
    }
    Ok(Outcome { table: t, failed })
}

fn sci_text(x: f64) -> String {
    format!("{x:e}")
}
