use dtqw::series::LoopKernel;
use rayon::prelude::*;

use crate::{run_sweep, ClassicalMethod, CliError, QuantumMethod, Result, SweepConfig};

/// Default fraction of the `n`-range used for scaling fits (the last quarter).
pub const DEFAULT_WINDOW_FRAC: f64 = 0.25;

/// `t/p` minimized over the sequence; ties go to the smaller `t`.
pub fn runtime_estimate(probs: &[(usize, f64)]) -> Result<(usize, f64)> {
    probs
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|&(t, p)| (t, t as f64 / p))
        .fold(None, |best: Option<(usize, f64)>, cand| match best {
            Some(b) if b.1 < cand.1 || (b.1 == cand.1 && b.0 <= cand.0) => Some(b),
            _ => Some(cand),
        })
        .ok_or(CliError::NoSignal)
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(CliError::Parameter(
            "a line fit needs at least two (x, y) pairs".into(),
        ));
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(CliError::Parameter("all x values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| y - (slope * x + intercept))
        .collect();
    Ok(LineFit {
        slope,
        intercept,
        residuals,
    })
}

/// Exponential-in-`n` fit of run times.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// Slope of `ln(runtime)` against `n` inside the window.
    pub slope: f64,
    pub intercept: f64,
    /// Smallest and largest `n` inside the window.
    pub window: (usize, usize),
    /// `ln(runtime)` residuals inside the window.
    pub residuals: Vec<(usize, f64)>,
    /// Same slope over all points.
    pub full_range_slope: f64,
    /// Slope of `ln(runtime)` against `ln(n)` over all points.
    pub power_exponent: f64,
}

/// Fits `ln(runtime)` linearly in `n` over the last `window_frac` of the range.
pub fn fit_scaling(points: &[(usize, f64)], window_frac: f64) -> Result<ScalingFit> {
    if points.len() < 4 {
        return Err(CliError::Parameter(format!(
            "scaling fit needs at least 4 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(n, r)| !(r > 0.0 && r.is_finite()) || n == 0) {
        return Err(CliError::Parameter(
            "run times must be positive and finite, levels nonzero".into(),
        ));
    }
    if !(window_frac > 0.0 && window_frac <= 1.0) {
        return Err(CliError::Parameter(format!(
            "window fraction {window_frac} is outside (0, 1]"
        )));
    }
    let mut pts = points.to_vec();
    pts.sort_by_key(|p| p.0);
    let (lo, hi) = (pts[0].0 as f64, pts[pts.len() - 1].0 as f64);
    let cut = hi - window_frac * (hi - lo);
    let window: Vec<(usize, f64)> = pts
        .iter()
        .copied()
        .filter(|&(n, _)| n as f64 >= cut - 1e-9)
        .collect();
    if window.len() < 2 {
        return Err(CliError::Parameter(format!(
            "degenerate fit window: {} point(s) with n >= {cut}",
            window.len()
        )));
    }
    let xs: Vec<f64> = window.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = window.iter().map(|p| p.1.ln()).collect();
    let local = fit_line(&xs, &ys)?;
    let all_x: Vec<f64> = pts.iter().map(|p| p.0 as f64).collect();
    let all_y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let full = fit_line(&all_x, &all_y)?;
    let log_x: Vec<f64> = all_x.iter().map(|x| x.ln()).collect();
    let power = fit_line(&log_x, &all_y)?;
    Ok(ScalingFit {
        slope: local.slope,
        intercept: local.intercept,
        window: (window[0].0, window[window.len() - 1].0),
        residuals: window.iter().map(|p| p.0).zip(local.residuals).collect(),
        full_range_slope: full.slope,
        power_exponent: power.slope,
    })
}

/// Peak time against starting level.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakTimeFit {
    /// `t ≈ c·n`.
    pub proportional: f64,
    pub max_rel_residual: f64,
    /// `t ≈ c·n + d·ln n`.
    pub with_log: (f64, f64),
    /// `t ≈ a·n + b`.
    pub affine: (f64, f64),
    pub max_abs_residual_affine: f64,
}

pub fn fit_peak_times(points: &[(usize, usize)]) -> Result<PeakTimeFit> {
    if points.len() < 2 || points.iter().any(|&(n, _)| n < 2) {
        return Err(CliError::Parameter(
            "peak-time fit needs at least two levels >= 2".into(),
        ));
    }
    let ns: Vec<f64> = points.iter().map(|p| p.0 as f64).collect();
    let ts: Vec<f64> = points.iter().map(|p| p.1 as f64).collect();
    let snn: f64 = ns.iter().map(|n| n * n).sum();
    let snt: f64 = ns.iter().zip(&ts).map(|(n, t)| n * t).sum();
    let c = snt / snn;
    let max_rel_residual = ns
        .iter()
        .zip(&ts)
        .map(|(n, t)| ((t - c * n) / t).abs())
        .fold(0.0, f64::max);
    // Normal equations for the two regressors n and ln n.
    let ls: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let snl: f64 = ns.iter().zip(&ls).map(|(n, l)| n * l).sum();
    let sll: f64 = ls.iter().map(|l| l * l).sum();
    let slt: f64 = ls.iter().zip(&ts).map(|(l, t)| l * t).sum();
    let det = snn * sll - snl * snl;
    let with_log = if det.abs() > 0.0 {
        ((snt * sll - slt * snl) / det, (snn * slt - snl * snt) / det)
    } else {
        (c, 0.0)
    };
    let affine = fit_line(&ns, &ts)?;
    let max_abs_residual_affine = affine.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    Ok(PeakTimeFit {
        proportional: c,
        max_rel_residual,
        with_log,
        affine: (affine.slope, affine.intercept),
        max_abs_residual_affine,
    })
}

/// Quantum versus classical run-time scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub slope_quantum: f64,
    pub slope_classical: f64,
    /// `slope_quantum / slope_classical`.
    pub ratio: f64,
    pub window: (usize, usize),
    pub window_frac: f64,
    pub residuals_quantum: Vec<(usize, f64)>,
    pub residuals_classical: Vec<(usize, f64)>,
    pub full_range_ratio: f64,
    pub power_quantum: f64,
    pub power_classical: f64,
    pub peak_times_quantum: Option<PeakTimeFit>,
    pub peak_times_classical: Option<PeakTimeFit>,
}

/// Fits both run-time series over the same window and forms the slope ratio.
pub fn compare_scaling(
    quantum: &[(usize, f64)],
    classical: &[(usize, f64)],
    window_frac: f64,
) -> Result<FitReport> {
    let q = fit_scaling(quantum, window_frac)?;
    let c = fit_scaling(classical, window_frac)?;
    Ok(FitReport {
        slope_quantum: q.slope,
        slope_classical: c.slope,
        ratio: q.slope / c.slope,
        window: (q.window.0.min(c.window.0), q.window.1.max(c.window.1)),
        window_frac,
        residuals_quantum: q.residuals,
        residuals_classical: c.residuals,
        full_range_ratio: q.full_range_slope / c.full_range_slope,
        power_quantum: q.power_exponent,
        power_classical: c.power_exponent,
        peak_times_quantum: None,
        peak_times_classical: None,
    })
}

/// Sweeps every level in `ns`, then fits quantum and classical run times and peak times.
pub fn scaling_report(ns: &[usize], kernel: LoopKernel, window_frac: f64) -> Result<FitReport> {
    let cfg = SweepConfig {
        quantum: Some(QuantumMethod::Series),
        classical: Some(ClassicalMethod::Dp),
        asymptotic: false,
        kernel,
        t_max: None,
    };
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    type Level = ((usize, f64), (usize, f64), (usize, usize), (usize, usize));
    let per_level: Vec<Level> = ns
        .par_iter()
        .map(|&n| -> Result<Level> {
            let r = run_sweep::<f64>(n, &cfg)?;
            let (_, rq) = runtime_estimate(&r.column(|p| p.quantum))?;
            let (_, rc) = runtime_estimate(&r.column(|p| p.classical))?;
            let tq = r.quantum_peak.ok_or(CliError::NoSignal)?.t_star;
            let tc = r.classical_peak.ok_or(CliError::NoSignal)?.t_star;
            Ok(((n, rq), (n, rc), (n, tq), (n, tc)))
        })
        .collect::<Result<_>>()?;
    let quantum: Vec<_> = per_level.iter().map(|l| l.0).collect();
    let classical: Vec<_> = per_level.iter().map(|l| l.1).collect();
    let mut report = compare_scaling(&quantum, &classical, window_frac)?;
    let peaks_q: Vec<_> = per_level.iter().map(|l| l.2).collect();
    let peaks_c: Vec<_> = per_level.iter().map(|l| l.3).collect();
    report.peak_times_quantum = Some(fit_peak_times(&peaks_q)?);
    report.peak_times_classical = Some(fit_peak_times(&peaks_c)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runtime_examples() {
        let (t, r) = runtime_estimate(&[(16, 6.8e-4)]).unwrap();
        assert_eq!(t, 16);
        assert!((r - 2.3529e4).abs() < 1.0);
        let flat: Vec<(usize, f64)> = (5..20).map(|t| (t, 0.1)).collect();
        assert_eq!(runtime_estimate(&flat).unwrap().0, 5);
        assert!(matches!(
            runtime_estimate(&[(3, 0.0), (5, 0.0)]),
            Err(CliError::NoSignal)
        ));
        // Equal t/p: the smaller t wins regardless of order.
        assert_eq!(runtime_estimate(&[(20, 0.2), (10, 0.1)]).unwrap().0, 10);
    }

    #[test]
    fn exponential_slope_recovered() {
        let pts: Vec<(usize, f64)> = (10..=40).map(|n| (n, (0.7 * n as f64).exp())).collect();
        let fit = fit_scaling(&pts, DEFAULT_WINDOW_FRAC).unwrap();
        assert!((fit.slope - 0.7).abs() < 1e-10);
        assert!((fit.full_range_slope - 0.7).abs() < 1e-10);
        assert_eq!(fit.window, (33, 40));
    }

    #[test]
    fn fit_errors() {
        let pts = [(1usize, 1.0), (2, 2.0), (3, 3.0)];
        assert!(fit_scaling(&pts, 0.25).is_err());
        let pts = [(10usize, 1.0), (20, 2.0), (30, 3.0), (1000, 4.0)];
        assert!(matches!(fit_scaling(&pts, 0.1), Err(CliError::Parameter(_))));
        assert!(fit_scaling(&[(1, 1.0), (2, -2.0), (3, 3.0), (4, 1.0)], 0.5).is_err());
    }

    #[test]
    fn peak_time_fits() {
        let pts: Vec<(usize, usize)> = (10..=200).map(|n| (n, 3 * n - 8)).collect();
        let fit = fit_peak_times(&pts).unwrap();
        assert!((fit.affine.0 - 3.0).abs() < 1e-12);
        assert!((fit.affine.1 + 8.0).abs() < 1e-9);
        assert!(fit.max_abs_residual_affine < 1e-9);
        let pts: Vec<(usize, usize)> = (50..=500)
            .step_by(10)
            .map(|n| (n, (1.5 * n as f64 + 2.0 * (n as f64).ln()).round() as usize))
            .collect();
        let fit = fit_peak_times(&pts).unwrap();
        assert!((fit.with_log.0 - 1.5).abs() < 0.01);
        assert!((fit.with_log.1 - 2.0).abs() < 0.5);
    }
}
