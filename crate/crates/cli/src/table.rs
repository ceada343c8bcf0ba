use dtqw::classical::{classical_peak, ChainParams};
use dtqw::series::LoopKernel;
use rayon::prelude::*;

use crate::{default_t_max, run_sweep, CliError, Result, SweepConfig};

/// Starting levels of the reference table.
pub const TABLE1_LEVELS: [usize; 6] = [10, 20, 50, 100, 200, 500];

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    /// `"quantum"` or `"classical"`.
    pub method: &'static str,
    pub n: usize,
    pub t_star: usize,
    pub p_star: f64,
}

/// Peak time and peak probability for both walks at every level.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
}

impl Table1 {
    pub fn find(&self, method: &str, n: usize) -> Option<&Table1Row> {
        self.rows.iter().find(|r| r.method == method && r.n == n)
    }
}

fn quantum_row(n: usize, kernel: LoopKernel) -> Result<Table1Row> {
    let cfg = SweepConfig {
        kernel,
        ..SweepConfig::default()
    };
    let peak = run_sweep::<f64>(n, &cfg)?
        .quantum_peak
        .ok_or(CliError::NoSignal)?;
    Ok(Table1Row {
        method: "quantum",
        n,
        t_star: peak.t_star,
        p_star: peak.p_star,
    })
}

fn classical_row(n: usize) -> Table1Row {
    let (t_star, p_star) = classical_peak(n, &ChainParams::<f64>::binary_tree());
    Table1Row {
        method: "classical",
        n,
        t_star,
        p_star,
    }
}

/// Quantum rows come from the series route over `t <= default_t_max(n)`,
/// classical rows from the exact chain recursion.
pub fn table1(kernel: LoopKernel) -> Result<Table1> {
    let quantum: Vec<Table1Row> = TABLE1_LEVELS
        .par_iter()
        .map(|&n| quantum_row(n, kernel))
        .collect::<Result<_>>()?;
    let classical: Vec<Table1Row> = TABLE1_LEVELS.par_iter().map(|&n| classical_row(n)).collect();
    let mut rows = quantum;
    rows.extend(classical);
    debug_assert!(rows.iter().all(|r| r.t_star <= default_t_max(r.n)));
    Ok(Table1 { rows })
}
