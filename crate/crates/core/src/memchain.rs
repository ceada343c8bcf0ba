//! Classical memory-2 Markov chains.
//!
//! A distribution `mu[i][j]` is the probability of currently being at `j` having
//! arrived from `i`. Site `j` carries its own stochastic layer `P_j` whose row `i`
//! gives the next-site distribution when arriving at `j` from `i`. One step
//! produces row `j` of the new distribution as `(column j of mu)ᵀ · P_j`.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Num, Signed};

use crate::{Error, Result};

/// Scalar usable as a probability: floating point or exact rationals.
pub trait Probability: Num + Signed + Clone + PartialOrd + Debug {
    /// Tolerance for "sums to one" checks; zero for exact types.
    fn tolerance() -> Self;
}

impl Probability for f64 {
    fn tolerance() -> Self {
        1e-12
    }
}

impl Probability for f32 {
    fn tolerance() -> Self {
        1e-5
    }
}

impl Probability for Ratio<i64> {
    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }
}

impl Probability for Ratio<i128> {
    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }
}

fn from_count<P: Probability>(k: usize) -> P {
    (0..k).fold(P::zero(), |acc, _| acc + P::one())
}

fn close_to_one<P: Probability>(x: &P) -> bool {
    (x.clone() - P::one()).abs() <= P::tolerance()
}

/// Dense `n × n` two-index distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryDistribution<P> {
    n: usize,
    mu: Vec<P>,
}

impl<P: Probability> MemoryDistribution<P> {
    /// Builds a distribution from rows `mu[prev][current]`, checking the invariants.
    pub fn new(rows: Vec<Vec<P>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::parameter("n_sites", "must be positive"));
        }
        let mut mu = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "distribution row",
                    expected: n,
                    found: row.len(),
                });
            }
            mu.extend(row);
        }
        if mu.iter().any(|x| x.is_negative()) {
            return Err(Error::parameter("mu", "entries must be nonnegative"));
        }
        let total = mu.iter().cloned().fold(P::zero(), |a, b| a + b);
        if !close_to_one(&total) {
            return Err(Error::parameter("mu", format!("total mass {total:?} is not 1")));
        }
        Ok(Self { n, mu })
    }

    /// All mass on the pair `(prev, current)`.
    pub fn point_mass(n: usize, prev: usize, current: usize) -> Result<Self> {
        if n == 0 || prev >= n || current >= n {
            return Err(Error::parameter("point_mass", "pair outside 0..n"));
        }
        let mut mu = vec![P::zero(); n * n];
        mu[prev * n + current] = P::one();
        Ok(Self { n, mu })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("n_sites", "must be positive"));
        }
        let w = P::one() / from_count::<P>(n * n);
        Ok(Self {
            n,
            mu: vec![w; n * n],
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn get(&self, prev: usize, current: usize) -> &P {
        &self.mu[prev * self.n + current]
    }

    /// Row-major entries, `prev` major.
    pub fn as_slice(&self) -> &[P] {
        &self.mu
    }

    pub fn total(&self) -> P {
        self.mu.iter().cloned().fold(P::zero(), |a, b| a + b)
    }
}

/// One stochastic layer per site.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryChain<P> {
    n: usize,
    layers: Vec<Vec<P>>,
}

impl<P: Probability> MemoryChain<P> {
    /// `layers[j]` is `P_j` in row-major order (`n * n` entries).
    pub fn new(layers: Vec<Vec<P>>) -> Result<Self> {
        let n = layers.len();
        if n == 0 {
            return Err(Error::parameter("n_sites", "must be positive"));
        }
        for (j, layer) in layers.iter().enumerate() {
            if layer.len() != n * n {
                return Err(Error::DimensionMismatch {
                    what: "transition layer",
                    expected: n * n,
                    found: layer.len(),
                });
            }
            for (i, row) in layer.chunks(n).enumerate() {
                if row.iter().any(|x| x.is_negative() || *x > P::one()) {
                    return Err(Error::parameter(
                        "layers",
                        format!("P_{j} row {i} has an entry outside [0, 1]"),
                    ));
                }
                let s = row.iter().cloned().fold(P::zero(), |a, b| a + b);
                if !close_to_one(&s) {
                    return Err(Error::parameter(
                        "layers",
                        format!("P_{j} row {i} sums to {s:?}"),
                    ));
                }
            }
        }
        Ok(Self { n, layers })
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    /// Entry `p_{prev, next | site}`.
    pub fn transition(&self, site: usize, prev: usize, next: usize) -> &P {
        &self.layers[site][prev * self.n + next]
    }

    pub fn layer(&self, site: usize) -> &[P] {
        &self.layers[site]
    }
}

/// One step of the memory-2 chain.
pub fn evolve_distribution<P: Probability>(
    mu: &MemoryDistribution<P>,
    chain: &MemoryChain<P>,
) -> Result<MemoryDistribution<P>> {
    let n = mu.n;
    if chain.n != n {
        return Err(Error::DimensionMismatch {
            what: "chain vs distribution sites",
            expected: n,
            found: chain.n,
        });
    }
    let mut out = vec![P::zero(); n * n];
    for j in 0..n {
        let layer = &chain.layers[j];
        let row = &mut out[j * n..(j + 1) * n];
        for i in 0..n {
            let c = mu.get(i, j);
            if c.is_zero() {
                continue;
            }
            for (m, slot) in row.iter_mut().enumerate() {
                let w = &layer[i * n + m];
                if !w.is_zero() {
                    *slot = slot.clone() + c.clone() * w.clone();
                }
            }
        }
    }
    Ok(MemoryDistribution { n, mu: out })
}

/// Persistent walk on an `n`-cycle: keep direction with probability `p`.
pub fn persistent_cycle_chain<P: Probability>(n: usize, p: P) -> Result<MemoryChain<P>> {
    if n < 3 {
        return Err(Error::parameter("n_sites", format!("need at least 3, got {n}")));
    }
    if p.is_negative() || p > P::one() {
        return Err(Error::parameter("p", format!("{p:?} is outside [0, 1]")));
    }
    let q = P::one() - p.clone();
    let layers = (0..n)
        .map(|j| {
            let left = (j + n - 1) % n;
            let right = (j + 1) % n;
            let mut layer = vec![P::zero(); n * n];
            for k in 0..n {
                if k != left && k != right {
                    layer[k * n + k] = P::one();
                }
            }
            layer[left * n + left] = q.clone();
            layer[left * n + right] = p.clone();
            layer[right * n + left] = p.clone();
            layer[right * n + right] = q.clone();
            layer
        })
        .collect();
    MemoryChain::new(layers)
}

/// Probability of currently being at each site.
pub fn marginal<P: Probability>(mu: &MemoryDistribution<P>) -> Vec<P> {
    let n = mu.n;
    (0..n)
        .map(|j| (0..n).fold(P::zero(), |acc, i| acc + mu.get(i, j).clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Ratio<i64>;

    fn q(a: i64, b: i64) -> Q {
        Ratio::new(a, b)
    }

    #[test]
    fn persistent_step_from_point_mass() {
        let n = 7;
        let p = q(2, 5);
        let chain = persistent_cycle_chain(n, p).unwrap();
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let mu = MemoryDistribution::point_mass(n, prev, i).unwrap();
            let next = evolve_distribution(&mu, &chain).unwrap();
            for a in 0..n {
                for b in 0..n {
                    let expected = if (a, b) == (i, (i + 1) % n) {
                        p
                    } else if (a, b) == (i, prev) {
                        q(3, 5)
                    } else {
                        q(0, 1)
                    };
                    assert_eq!(*next.get(a, b), expected, "pair ({a},{b}) from {i}");
                }
            }
        }
    }

    #[test]
    fn identity_layers_transpose() {
        let n = 4;
        let eye: Vec<Q> = (0..n * n)
            .map(|k| if k / n == k % n { q(1, 1) } else { q(0, 1) })
            .collect();
        let chain = MemoryChain::new(vec![eye; n]).unwrap();
        let rows: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| q((i * n + j + 1) as i64, 136)).collect())
            .collect();
        let mu = MemoryDistribution::new(rows).unwrap();
        let out = evolve_distribution(&mu, &chain).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(out.get(j, i), mu.get(i, j));
            }
        }
    }

    #[test]
    fn wraparound_entries() {
        let chain = persistent_cycle_chain(5, 0.3f64).unwrap();
        assert_eq!(*chain.transition(0, 4, 4), 0.7);
        assert_eq!(*chain.transition(0, 4, 1), 0.3);
        assert_eq!(*chain.transition(0, 1, 4), 0.3);
        assert_eq!(*chain.transition(4, 3, 0), 0.3);
        assert_eq!(*chain.transition(4, 0, 0), 0.7);
        assert_eq!(*chain.transition(4, 0, 3), 0.3);
        assert_eq!(*chain.transition(4, 4, 4), 1.0);
        assert_eq!(*chain.transition(2, 2, 2), 1.0);
    }

    #[test]
    fn deterministic_when_fully_persistent() {
        let n = 6;
        let chain = persistent_cycle_chain(n, 1.0f64).unwrap();
        let mut mu = MemoryDistribution::point_mass(n, 0, 1).unwrap();
        for t in 1..=12 {
            mu = evolve_distribution(&mu, &chain).unwrap();
            assert_eq!(*mu.get((t) % n, (t + 1) % n), 1.0);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            persistent_cycle_chain(2, 0.5f64),
            Err(Error::Parameter { .. })
        ));
        assert!(matches!(
            persistent_cycle_chain(5, 1.5f64),
            Err(Error::Parameter { .. })
        ));
        let mu = MemoryDistribution::<f64>::point_mass(4, 0, 1).unwrap();
        let chain = persistent_cycle_chain(5, 0.5f64).unwrap();
        assert!(matches!(
            evolve_distribution(&mu, &chain),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(MemoryChain::new(vec![vec![0.5f64, 0.6, 0.5, 0.5]; 2]).is_err());
        assert!(MemoryDistribution::new(vec![vec![0.5f64, 0.6], vec![0.0, 0.0]]).is_err());
    }

    #[test]
    fn marginals() {
        let mu = MemoryDistribution::<Q>::point_mass(5, 3, 1).unwrap();
        let m = marginal(&mu);
        assert_eq!(m, vec![q(0, 1), q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
        let u = marginal(&MemoryDistribution::<Q>::uniform(5).unwrap());
        assert!(u.iter().all(|x| *x == q(1, 5)));
    }
}
