use std::str::FromStr;

use dtqw::asymptotics::asymptotic_probability;
use dtqw::btree::{simulate_projected, simulate_tree};
use dtqw::classical::{chain_dp, hit_probability, ChainParams};
use dtqw::series::{amplitude_sequence, LoopKernel};
use dtqw::Real;
use rayon::prelude::*;

use crate::{CliError, Result};

/// Route used for the quantum root probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantumMethod {
    /// Coefficient extraction from the generating function.
    Series,
    /// Lumped (level, direction) walk.
    Projected,
    /// Full sparse simulation on the tree (small `t` only).
    Tree,
}

impl FromStr for QuantumMethod {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(Self::Series),
            "projected" => Ok(Self::Projected),
            "tree" => Ok(Self::Tree),
            _ => Err(CliError::Parameter(format!(
                "unknown quantum method `{s}` (series|projected|tree)"
            ))),
        }
    }
}

/// Route used for the classical hitting probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalMethod {
    Dp,
    Integral,
}

impl FromStr for ClassicalMethod {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dp" => Ok(Self::Dp),
            "integral" => Ok(Self::Integral),
            _ => Err(CliError::Parameter(format!(
                "unknown classical method `{s}` (dp|integral)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub quantum: Option<QuantumMethod>,
    pub classical: Option<ClassicalMethod>,
    pub asymptotic: bool,
    pub kernel: LoopKernel,
    /// Largest `t`; `None` means [`default_t_max`].
    pub t_max: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            quantum: Some(QuantumMethod::Series),
            classical: None,
            asymptotic: false,
            kernel: LoopKernel::Walk,
            t_max: None,
        }
    }
}

/// `max(4n, n + 600)`: covers the peak near `1.5n` and a long tail.
pub fn default_t_max(n: usize) -> usize {
    (4 * n).max(n + 600)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub t: usize,
    pub quantum: Option<f64>,
    pub classical: Option<f64>,
    pub asymptotic: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub t_star: usize,
    pub p_star: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub n: usize,
    pub points: Vec<SweepPoint>,
    pub quantum_peak: Option<Peak>,
    pub classical_peak: Option<Peak>,
    pub asymptotic_peak: Option<Peak>,
}

impl SweepResult {
    /// `(t, p)` pairs of one column, skipping points where it was not computed.
    pub fn column(&self, pick: impl Fn(&SweepPoint) -> Option<f64>) -> Vec<(usize, f64)> {
        self.points
            .iter()
            .filter_map(|p| pick(p).map(|v| (p.t, v)))
            .collect()
    }
}

fn peak_of(values: &[(usize, f64)]) -> Option<Peak> {
    values
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .fold(None, |best: Option<Peak>, &(t, p)| match best {
            Some(b) if b.p_star >= p => Some(b),
            _ => Some(Peak { t_star: t, p_star: p }),
        })
}

fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Runs the configured routes for one starting level, `t = n..=t_max`.
pub fn run_sweep<T: Real>(n: usize, cfg: &SweepConfig) -> Result<SweepResult> {
    if n == 0 {
        return Err(CliError::Parameter("n must be at least 1".into()));
    }
    let t_max = cfg.t_max.unwrap_or_else(|| default_t_max(n));
    if t_max < n {
        return Err(CliError::Parameter(format!("t_max = {t_max} is below n = {n}")));
    }
    let quantum: Option<Vec<f64>> = match cfg.quantum {
        None => None,
        Some(m) => {
            let amps = match m {
                QuantumMethod::Series => amplitude_sequence::<T>(cfg.kernel, n, t_max)?,
                QuantumMethod::Projected => simulate_projected::<T>(n, t_max)?,
                QuantumMethod::Tree => simulate_tree::<T>(n, t_max)?,
            };
            Some(amps.iter().map(|a| to_f64(a.norm_sqr())).collect())
        }
    };
    let params = ChainParams::<T>::binary_tree();
    let classical: Option<Vec<f64>> = match cfg.classical {
        None => None,
        Some(ClassicalMethod::Dp) => {
            Some(chain_dp(n, t_max, &params).into_iter().map(to_f64).collect())
        }
        Some(ClassicalMethod::Integral) => Some(
            (0..=t_max)
                .map(|t| hit_probability(n, t, &params).map(to_f64))
                .collect::<dtqw::Result<_>>()?,
        ),
    };
    let mut points = Vec::with_capacity(t_max - n + 1);
    for t in n..=t_max {
        let asymptotic = if cfg.asymptotic && t > n {
            Some(to_f64(asymptotic_probability::<T>(n, t)?))
        } else {
            None
        };
        points.push(SweepPoint {
            t,
            quantum: quantum.as_ref().map(|q| q[t]),
            classical: classical.as_ref().map(|c| c[t]),
            asymptotic,
        });
    }
    let mut result = SweepResult {
        n,
        points,
        quantum_peak: None,
        classical_peak: None,
        asymptotic_peak: None,
    };
    result.quantum_peak = peak_of(&result.column(|p| p.quantum));
    result.classical_peak = peak_of(&result.column(|p| p.classical));
    result.asymptotic_peak = peak_of(&result.column(|p| p.asymptotic));
    Ok(result)
}

/// Runs [`run_sweep`] for every `n` in parallel; results are sorted by `n`.
pub fn run_sweeps<T: Real>(ns: &[usize], cfg: &SweepConfig) -> Result<Vec<SweepResult>> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns.par_iter().map(|&n| run_sweep::<T>(n, cfg)).collect()
}

/// Centered moving average with `window` samples (shorter at the ends).
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let w = window.max(1);
    let before = w / 2;
    let after = w - before - 1;
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(before);
            let hi = (i + after).min(values.len() - 1);
            values[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peaks_match_scan() {
        let cfg = SweepConfig {
            classical: Some(ClassicalMethod::Dp),
            asymptotic: true,
            t_max: Some(120),
            ..SweepConfig::default()
        };
        let r = run_sweep::<f64>(10, &cfg).unwrap();
        assert_eq!(r.points.first().unwrap().t, 10);
        assert_eq!(r.points.last().unwrap().t, 120);
        assert!(r.points.windows(2).all(|w| w[0].t < w[1].t));
        let q = r.column(|p| p.quantum);
        let (t, p) = q
            .iter()
            .fold((0, 0.0), |b, &(t, p)| if p > b.1 { (t, p) } else { b });
        assert_eq!(r.quantum_peak, Some(Peak { t_star: t, p_star: p }));
        assert_eq!(r.classical_peak.unwrap().t_star, 22);
        assert!(r.points[0].asymptotic.is_none());
        assert!(r.points[1].asymptotic.is_some());
        for p in &r.points {
            for v in [p.quantum, p.classical, p.asymptotic].into_iter().flatten() {
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        let cfg = SweepConfig {
            t_max: Some(3),
            ..SweepConfig::default()
        };
        assert!(run_sweep::<f64>(5, &cfg).is_err());
        assert!(run_sweep::<f64>(0, &SweepConfig::default()).is_err());
    }

    #[test]
    fn sweeps_are_sorted() {
        let cfg = SweepConfig {
            t_max: Some(80),
            ..SweepConfig::default()
        };
        let r = run_sweeps::<f64>(&[7, 3, 5, 3], &cfg).unwrap();
        assert_eq!(r.iter().map(|s| s.n).collect::<Vec<_>>(), vec![3, 5, 7]);
    }

    #[test]
    fn averaging_window() {
        let v = [1.0, 3.0, 5.0, 7.0];
        assert_eq!(moving_average(&v, 1), v.to_vec());
        assert_eq!(moving_average(&v, 2), vec![1.0, 2.0, 4.0, 6.0]);
        assert_eq!(moving_average(&v, 3), vec![2.0, 3.0, 5.0, 6.0]);
    }
}
