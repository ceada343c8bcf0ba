//! Coinless quantum walks on ordered node pairs.
//!
//! A state is a sparse superposition of `|prev⟩⊗|current⟩`. One step swaps the
//! two slots and then lets the unitary of the (new) first-slot site act on the
//! second slot. Reduced matrices are indexed by the site's stored neighbor list
//! and act on row vectors: an amplitude sitting on neighbor `k` is sent to
//! neighbor `m` with weight `reduced[k][m]`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::Zero;
use smallvec::SmallVec;

use crate::scalar::{neumaier_sum, Real};
use crate::{Error, Result};

/// Graph node label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    what: "matrix row",
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex::zero(); dim * dim];
        for k in 0..dim {
            data[k * dim + k] = Complex::new(T::one(), T::zero());
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.data[row * self.dim + col] = value;
    }

    /// Max-norm of `M·Mᴴ − I`.
    pub fn unitarity_deviation(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex::zero();
                for k in 0..d {
                    acc = acc + self.get(r, k) * self.get(c, k).conj();
                }
                if r == c {
                    acc.re -= T::one();
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

/// Unitary of one site over its neighbor subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteUnitary<T> {
    site: NodeId,
    neighbors: Vec<NodeId>,
    reduced: CMatrix<T>,
}

impl<T: Real> SiteUnitary<T> {
    /// Checks dimensions, distinct neighbors, and unitarity at [`Real::check_tol`].
    pub fn new(site: NodeId, neighbors: Vec<NodeId>, reduced: CMatrix<T>) -> Result<Self> {
        let u = Self::new_unchecked(site, neighbors, reduced)?;
        let dev = u.reduced.unitarity_deviation();
        if !(dev <= T::check_tol()) {
            return Err(Error::NotUnitary {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(u)
    }

    /// Like [`SiteUnitary::new`] without the unitarity check.
    pub fn new_unchecked(
        site: NodeId,
        neighbors: Vec<NodeId>,
        reduced: CMatrix<T>,
    ) -> Result<Self> {
        if reduced.dim() != neighbors.len() {
            return Err(Error::DimensionMismatch {
                what: "reduced matrix vs neighbor list",
                expected: neighbors.len(),
                found: reduced.dim(),
            });
        }
        let mut sorted = neighbors.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != neighbors.len() {
            return Err(Error::parameter("neighbors", "duplicate neighbor"));
        }
        Ok(Self {
            site,
            neighbors,
            reduced,
        })
    }

    pub fn site(&self) -> NodeId {
        self.site
    }

    pub fn neighbors(&self) -> &[NodeId] {
        &self.neighbors
    }

    pub fn reduced(&self) -> &CMatrix<T> {
        &self.reduced
    }

    pub fn view(&self) -> SiteView<'_, T> {
        SiteView {
            neighbors: SmallVec::from_slice(&self.neighbors),
            reduced: &self.reduced,
        }
    }
}

/// True iff `‖U·Uᴴ − I‖_max ≤ tol`.
pub fn verify_unitary<T: Real>(u: &SiteUnitary<T>, tol: T) -> bool {
    u.reduced.unitarity_deviation() <= tol
}

/// What [`step`] needs to know about one site.
#[derive(Debug, Clone)]
pub struct SiteView<'a, T> {
    pub neighbors: SmallVec<[NodeId; 4]>,
    pub reduced: &'a CMatrix<T>,
}

/// A graph together with one unitary per site.
pub trait Walk<T: Real> {
    fn site(&self, site: NodeId) -> Result<SiteView<'_, T>>;
}

/// Walk on an explicit adjacency list.
#[derive(Debug, Clone, Default)]
pub struct InterchangeWalk<T> {
    adjacency: BTreeMap<NodeId, Vec<NodeId>>,
    unitaries: BTreeMap<NodeId, SiteUnitary<T>>,
}

impl<T: Real> InterchangeWalk<T> {
    /// The adjacency must be symmetric.
    pub fn new(adjacency: BTreeMap<NodeId, Vec<NodeId>>) -> Result<Self> {
        for (&v, nbrs) in &adjacency {
            for &w in nbrs {
                let back = adjacency.get(&w).is_some_and(|l| l.contains(&v));
                if !back {
                    return Err(Error::parameter(
                        "adjacency",
                        format!("edge {v}-{w} is not symmetric"),
                    ));
                }
            }
        }
        Ok(Self {
            adjacency,
            unitaries: BTreeMap::new(),
        })
    }

    /// Path graph on `0..len`.
    pub fn path(len: u64) -> Result<Self> {
        let adjacency = (0..len)
            .map(|v| {
                let mut nb = Vec::new();
                if v > 0 {
                    nb.push(NodeId(v - 1));
                }
                if v + 1 < len {
                    nb.push(NodeId(v + 1));
                }
                (NodeId(v), nb)
            })
            .collect();
        Self::new(adjacency)
    }

    /// Installs a unitary; its neighbor set must equal the graph's.
    pub fn set_unitary(&mut self, u: SiteUnitary<T>) -> Result<()> {
        let graph = self
            .adjacency
            .get(&u.site)
            .ok_or_else(|| Error::parameter("site", format!("{} is not in the graph", u.site)))?;
        let mut a = graph.clone();
        let mut b = u.neighbors.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::parameter(
                "neighbors",
                format!("unitary neighbors of {} differ from the graph", u.site),
            ));
        }
        self.unitaries.insert(u.site, u);
        Ok(())
    }

    pub fn with_unitary(mut self, u: SiteUnitary<T>) -> Result<Self> {
        self.set_unitary(u)?;
        Ok(self)
    }

    pub fn neighbors(&self, site: NodeId) -> Option<&[NodeId]> {
        self.adjacency.get(&site).map(Vec::as_slice)
    }
}

impl<T: Real> Walk<T> for InterchangeWalk<T> {
    fn site(&self, site: NodeId) -> Result<SiteView<'_, T>> {
        self.unitaries
            .get(&site)
            .map(SiteUnitary::view)
            .ok_or(Error::MissingUnitary(site))
    }
}

/// Sparse superposition over ordered pairs `(prev, current)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProductState<T> {
    entries: BTreeMap<(NodeId, NodeId), Complex<T>>,
}

impl<T: Real> ProductState<T> {
    pub fn new() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// `|prev⟩⊗|current⟩` with amplitude 1.
    pub fn pure(prev: NodeId, current: NodeId) -> Self {
        let mut s = Self::new();
        s.entries
            .insert((prev, current), Complex::new(T::one(), T::zero()));
        s
    }

    /// Adds `amp` to the entry at `(prev, current)`.
    pub fn add(&mut self, prev: NodeId, current: NodeId, amp: Complex<T>) {
        let e = self.entries.entry((prev, current)).or_insert_with(Complex::zero);
        *e = *e + amp;
    }

    pub fn get(&self, prev: NodeId, current: NodeId) -> Complex<T> {
        self.entries
            .get(&(prev, current))
            .copied()
            .unwrap_or_else(Complex::zero)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in `(prev, current)` order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, NodeId, Complex<T>)> + '_ {
        self.entries.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn norm_sqr(&self) -> T {
        neumaier_sum(self.entries.values().map(|c| c.norm_sqr()))
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.norm() - T::one()).abs() <= tol
    }
}

impl<T: Real> FromIterator<(NodeId, NodeId, Complex<T>)> for ProductState<T> {
    fn from_iter<I: IntoIterator<Item = (NodeId, NodeId, Complex<T>)>>(iter: I) -> Self {
        let mut s = Self::new();
        for (i, j, c) in iter {
            s.add(i, j, c);
        }
        s
    }
}

/// `|i⟩⊗|j⟩ ↦ |j⟩⊗|i⟩`.
pub fn apply_interchange<T: Real>(state: &ProductState<T>) -> ProductState<T> {
    ProductState {
        entries: state.entries.iter().map(|(&(i, j), &c)| ((j, i), c)).collect(),
    }
}

/// One step: interchange, then the unitary of each first-slot site on the second slot.
pub fn step<T: Real, W: Walk<T> + ?Sized>(
    state: &ProductState<T>,
    walk: &W,
) -> Result<ProductState<T>> {
    let swapped = apply_interchange(state);
    let mut out = Vec::with_capacity(swapped.len() * 2);
    let mut iter = swapped.entries.iter().peekable();
    let mut input: SmallVec<[Complex<T>; 4]> = SmallVec::new();
    while let Some(&(&(site, _), _)) = iter.peek() {
        let view = walk.site(site)?;
        let k = view.neighbors.len();
        input.clear();
        input.resize(k, Complex::zero());
        while let Some(&(&(s, from), &amp)) = iter.peek() {
            if s != site {
                break;
            }
            let slot = view
                .neighbors
                .iter()
                .position(|&v| v == from)
                .ok_or(Error::NotAnEdge {
                    prev: from,
                    current: site,
                })?;
            input[slot] = input[slot] + amp;
            iter.next();
        }
        for m in 0..k {
            let mut acc = Complex::zero();
            for (r, &x) in input.iter().enumerate() {
                if !x.is_zero() {
                    acc = acc + x * view.reduced.get(r, m);
                }
            }
            if !acc.is_zero() {
                out.push(((site, view.neighbors[m]), acc));
            }
        }
    }
    out.sort_unstable_by_key(|&(key, _)| key);
    Ok(ProductState {
        entries: out.into_iter().collect(),
    })
}

/// Line-walk unitary plus a flag for the deterministic limits `p ∈ {0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineUnitary<T> {
    pub unitary: SiteUnitary<T>,
    pub degenerate: bool,
}

/// `[[√(1−p), √p], [−√p, √(1−p)]]` over neighbors `(site−1, site+1)`.
pub fn line_unitary<T: Real>(site: NodeId, p: T) -> Result<LineUnitary<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::parameter("p", format!("{p} is outside [0, 1]")));
    }
    if site.0 == 0 {
        return Err(Error::parameter("site", "site 0 has no left neighbor"));
    }
    let c = |x: T| Complex::new(x, T::zero());
    let s = (T::one() - p).sqrt();
    let r = p.sqrt();
    let reduced = CMatrix::from_rows(vec![vec![c(s), c(r)], vec![c(-r), c(s)]])?;
    let unitary = SiteUnitary::new(site, vec![NodeId(site.0 - 1), NodeId(site.0 + 1)], reduced)?;
    Ok(LineUnitary {
        unitary,
        degenerate: p == T::zero() || p == T::one(),
    })
}

/// `(U)_{km} = 2√(p_k p_m) − δ_{km}` over the given neighbors.
pub fn szegedy_unitary<T: Real>(
    site: NodeId,
    neighbors: Vec<NodeId>,
    probs: &[T],
) -> Result<SiteUnitary<T>> {
    if probs.len() != neighbors.len() {
        return Err(Error::DimensionMismatch {
            what: "probabilities vs neighbors",
            expected: neighbors.len(),
            found: probs.len(),
        });
    }
    if probs.iter().any(|&x| !(x >= T::zero())) {
        return Err(Error::parameter("probs", "entries must be nonnegative"));
    }
    let total = neumaier_sum(probs.iter().copied());
    if !((total - T::one()).abs() <= T::check_tol()) {
        return Err(Error::parameter("probs", format!("sum is {total}, not 1")));
    }
    let two = T::one() + T::one();
    let rows = probs
        .iter()
        .enumerate()
        .map(|(k, &pk)| {
            probs
                .iter()
                .enumerate()
                .map(|(m, &pm)| {
                    let d = if k == m { T::one() } else { T::zero() };
                    Complex::new(two * (pk * pm).sqrt() - d, T::zero())
                })
                .collect()
        })
        .collect();
    SiteUnitary::new(site, neighbors, CMatrix::from_rows(rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn n(v: u64) -> NodeId {
        NodeId(v)
    }

    fn line_walk(len: u64, p: f64) -> InterchangeWalk<f64> {
        let mut w = InterchangeWalk::path(len).unwrap();
        for v in 1..len - 1 {
            w.set_unitary(line_unitary(n(v), p).unwrap().unitary).unwrap();
        }
        w
    }

    #[test]
    fn interchange_swaps_and_is_involution() {
        let s: ProductState<f64> = [
            (n(1), n(2), Complex::new(0.6, 0.0)),
            (n(3), n(2), Complex::new(0.0, 0.8)),
        ]
        .into_iter()
        .collect();
        let x = apply_interchange(&s);
        assert_eq!(x.get(n(2), n(1)), Complex::new(0.6, 0.0));
        assert_eq!(x.get(n(2), n(3)), Complex::new(0.0, 0.8));
        assert_eq!(x.len(), 2);
        assert_eq!(apply_interchange(&x), s);
    }

    #[test]
    fn line_steps() {
        let p = 0.3f64;
        let w = line_walk(10, p);
        let out = step(&ProductState::pure(n(4), n(5)), &w).unwrap();
        assert_abs_diff_eq!(out.get(n(5), n(4)).re, (1.0 - p).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(out.get(n(5), n(6)).re, p.sqrt(), epsilon = 1e-15);
        assert_eq!(out.len(), 2);
        let out = step(&ProductState::pure(n(6), n(5)), &w).unwrap();
        assert_abs_diff_eq!(out.get(n(5), n(4)).re, -p.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(out.get(n(5), n(6)).re, (1.0 - p).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn line_unitary_flags() {
        let u = line_unitary(n(3), 0.3f64).unwrap();
        assert!(!u.degenerate);
        assert!(verify_unitary(&u.unitary, 1e-14));
        assert!(line_unitary(n(3), 1.0f64).unwrap().degenerate);
        assert!(line_unitary(n(3), 1.5f64).is_err());
        assert!(line_unitary(n(0), 0.5f64).is_err());
    }

    #[test]
    fn missing_unitary_names_site() {
        let w = line_walk(5, 0.5);
        let once = step(&ProductState::pure(n(2), n(3)), &w).unwrap();
        let err = step(&once, &w).unwrap_err();
        assert_eq!(err, Error::MissingUnitary(n(4)));
    }

    #[test]
    fn non_edge_rejected() {
        let w = line_walk(8, 0.5);
        let err = step(&ProductState::pure(n(1), n(4)), &w).unwrap_err();
        assert_eq!(
            err,
            Error::NotAnEdge {
                prev: n(1),
                current: n(4)
            }
        );
    }

    #[test]
    fn szegedy_examples() {
        let u = szegedy_unitary(n(0), vec![n(1)], &[1.0f64]).unwrap();
        assert_eq!(u.reduced().get(0, 0), Complex::new(1.0, 0.0));
        let u = szegedy_unitary(n(0), vec![n(1), n(2)], &[0.5f64, 0.5]).unwrap();
        assert_abs_diff_eq!(u.reduced().get(0, 0).re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u.reduced().get(0, 1).re, 1.0, epsilon = 1e-15);
        let third = 1.0f64 / 3.0;
        let u = szegedy_unitary(n(0), vec![n(1), n(2), n(3)], &[third; 3]).unwrap();
        for k in 0..3 {
            for m in 0..3 {
                let want = if k == m { -1.0 / 3.0 } else { 2.0 / 3.0 };
                assert_abs_diff_eq!(u.reduced().get(k, m).re, want, epsilon = 1e-15);
                assert_eq!(u.reduced().get(k, m).im, 0.0);
            }
        }
        assert!(verify_unitary(&u, 1e-12));
        assert!(szegedy_unitary(n(0), vec![n(1), n(2)], &[0.5f64, 0.6]).is_err());
    }

    #[test]
    fn perturbed_matrix_fails_verification() {
        let mut m = line_unitary(n(2), 0.4f64).unwrap().unitary.reduced().clone();
        let v = m.get(0, 1);
        m.set(0, 1, v + Complex::new(1e-3, 0.0));
        let u = SiteUnitary::new_unchecked(n(2), vec![n(1), n(3)], m.clone()).unwrap();
        assert!(!verify_unitary(&u, 1e-6));
        assert!(matches!(
            SiteUnitary::new(n(2), vec![n(1), n(3)], m),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn unitary_neighbors_must_match_graph() {
        let mut w = InterchangeWalk::<f64>::path(5).unwrap();
        let bad = szegedy_unitary(n(2), vec![n(1), n(4)], &[0.5, 0.5]).unwrap();
        assert!(w.set_unitary(bad).is_err());
    }
}
