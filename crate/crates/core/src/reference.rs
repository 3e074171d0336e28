//! Published reference values shipped with the crate.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::expr;

const SOURCE: &str = include_str!("../data/reference_tables.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct Table1Row {
    pub a2: f64,
    pub energies: [f64; 4],
}

/// Double well `a4 r^4 + A2 r^2` on the line.
#[derive(Debug, Clone, Deserialize)]
pub struct Table1 {
    pub a4: f64,
    pub rows: Vec<Table1Row>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table2Row {
    /// Expression text, e.g. `-sqrt3/4`.
    pub j: String,
    pub energies: [f64; 4],
}

impl Table2Row {
    pub fn j_value(&self) -> f64 {
        expr::eval(&self.j).expect("reference J parses")
    }
}

/// Sextic family parametrized by `(s, J)`, regular sector.
#[derive(Debug, Clone, Deserialize)]
pub struct Table2 {
    pub s: String,
    pub rows: Vec<Table2Row>,
}

impl Table2 {
    pub fn s_value(&self) -> f64 {
        expr::eval(&self.s).expect("reference s parses")
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct ReferenceTables {
    pub table1: Table1,
    pub table2: Table2,
}

pub fn reference_tables() -> &'static ReferenceTables {
    static TABLES: OnceLock<ReferenceTables> = OnceLock::new();
    TABLES.get_or_init(|| toml::from_str(SOURCE).expect("embedded reference tables parse"))
}
