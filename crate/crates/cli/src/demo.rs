use dtqw::interchange::{line_unitary, step, InterchangeWalk, NodeId, ProductState};
use dtqw::memchain::{evolve_distribution, marginal, persistent_cycle_chain, MemoryDistribution};
use dtqw::Complex;

use crate::{CliError, Result, SiteSeries};

/// Persistent classical walk on an `n_sites` cycle, started at site 1 coming from 0.
pub fn memchain_demo(n_sites: usize, p: f64, t_max: usize) -> Result<SiteSeries> {
    let chain = persistent_cycle_chain(n_sites, p)?;
    let mut mu = MemoryDistribution::point_mass(n_sites, 0, 1)?;
    let mut rows = Vec::with_capacity((t_max + 1) * n_sites);
    for t in 0..=t_max {
        if t > 0 {
            mu = evolve_distribution(&mu, &chain)?;
        }
        rows.extend(
            marginal(&mu)
                .into_iter()
                .enumerate()
                .map(|(site, prob)| (t, site as i64, prob)),
        );
    }
    Ok(SiteSeries { rows })
}

/// Quantum walk on a line with the two-neighbor unitary of parameter `p`.
///
/// Starts at the origin in `(|−1⟩⊗|0⟩ + i|+1⟩⊗|0⟩)/√2`; the path is long enough
/// that neither end is ever reached. Sites are reported relative to the origin.
pub fn line_demo(p: f64, t_max: usize) -> Result<SiteSeries> {
    if t_max > 1 << 20 {
        return Err(CliError::Parameter(format!("t_max = {t_max} is too large for the demo")));
    }
    let origin = t_max as u64 + 1;
    let len = 2 * origin + 1;
    let mut walk = InterchangeWalk::<f64>::path(len)?;
    for v in 1..len - 1 {
        walk.set_unitary(line_unitary(NodeId(v), p)?.unitary)?;
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut state: ProductState<f64> = [
        (NodeId(origin - 1), NodeId(origin), Complex::new(h, 0.0)),
        (NodeId(origin + 1), NodeId(origin), Complex::new(0.0, h)),
    ]
    .into_iter()
    .collect();
    let mut rows = Vec::new();
    for t in 0..=t_max {
        if t > 0 {
            state = step(&state, &walk)?;
        }
        let mut probs = vec![0.0; len as usize];
        for (_, current, amp) in state.iter() {
            probs[current.0 as usize] += amp.norm_sqr();
        }
        rows.extend(
            probs
                .iter()
                .enumerate()
                .filter(|(_, &q)| q > 0.0)
                .map(|(site, &q)| (t, site as i64 - origin as i64, q)),
        );
    }
    Ok(SiteSeries { rows })
}
