//! The symmetric walk on the semi-infinite binary tree.
//!
//! Labels: the root is `0` and has the single child `1`; every other node `v`
//! has parent `v / 2` (with `parent(1) = 0`) and children `2v`, `2v + 1`. Level
//! `ℓ ≥ 1` holds the nodes `2^{ℓ−1} .. 2^ℓ − 1`.
//!
//! Internal nodes use the symmetric 3×3 block `(1/√3)[[1,a,a],[a,1,a],[a,a,1]]`
//! with `a = e^{2πi/3}` over `(parent, left child, right child)`; the root
//! reflects with coefficient 1.
//!
//! Because every node treats its two children alike, the root amplitude only
//! depends on the walker's level and on whether it last moved toward or away
//! from the root. [`simulate_projected`] runs that lumped line walk and is the
//! production route; [`simulate_tree`] evolves the full sparse state and is a
//! validation oracle.

use num_complex::Complex;
use num_traits::Zero;
use smallvec::smallvec;

use crate::interchange::{self, CMatrix, NodeId, ProductState, SiteUnitary, SiteView, Walk};
use crate::scalar::{cube_root_of_unity, neumaier_sum, omega_power, sqrt3, Real};
use crate::{Error, Result};

/// Deepest level whose leftmost node fits in a `u64` label with its children.
pub const MAX_TREE_LEVEL: usize = 62;

/// Default cap on the number of stored pairs in [`TreeEvolution`].
pub const DEFAULT_STATE_CAP: usize = 1 << 24;

pub const ROOT: NodeId = NodeId(0);

pub fn parent(v: NodeId) -> Option<NodeId> {
    match v.0 {
        0 => None,
        1 => Some(ROOT),
        x => Some(NodeId(x / 2)),
    }
}

pub fn children(v: NodeId) -> Vec<NodeId> {
    match v.0 {
        0 => vec![NodeId(1)],
        x => vec![NodeId(2 * x), NodeId(2 * x + 1)],
    }
}

pub fn level(v: NodeId) -> usize {
    (u64::BITS - v.0.leading_zeros()) as usize
}

/// Leftmost node of level `n ≥ 1`.
pub fn leftmost(n: usize) -> Result<NodeId> {
    if n == 0 || n > MAX_TREE_LEVEL {
        return Err(Error::parameter(
            "n",
            format!("level must be in 1..={MAX_TREE_LEVEL}, got {n}"),
        ));
    }
    Ok(NodeId(1u64 << (n - 1)))
}

fn neighbors_of(v: NodeId) -> smallvec::SmallVec<[NodeId; 4]> {
    match v.0 {
        0 => smallvec![NodeId(1)],
        1 => smallvec![ROOT, NodeId(2), NodeId(3)],
        x => smallvec![NodeId(x / 2), NodeId(2 * x), NodeId(2 * x + 1)],
    }
}

fn internal_block<T: Real>() -> CMatrix<T> {
    let s = T::one() / sqrt3::<T>();
    let one = Complex::new(s, T::zero());
    let a = cube_root_of_unity::<T>() * s;
    CMatrix::from_rows(vec![vec![one, a, a], vec![a, one, a], vec![a, a, one]])
        .expect("3x3 block")
}

/// The tree's unitaries; implements [`Walk`] without storing per-node data.
#[derive(Debug, Clone)]
pub struct BinaryTree<T> {
    internal: CMatrix<T>,
    root: CMatrix<T>,
}

impl<T: Real> Default for BinaryTree<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> BinaryTree<T> {
    pub fn new() -> Self {
        Self {
            internal: internal_block(),
            root: CMatrix::identity(1),
        }
    }
}

impl<T: Real> Walk<T> for BinaryTree<T> {
    fn site(&self, site: NodeId) -> Result<SiteView<'_, T>> {
        let reduced = if site == ROOT { &self.root } else { &self.internal };
        Ok(SiteView {
            neighbors: neighbors_of(site),
            reduced,
        })
    }
}

/// Unitary of node `j`: the symmetric block for internal nodes, `[1]` at the root.
pub fn tree_unitary<T: Real>(j: NodeId) -> SiteUnitary<T> {
    let reduced = if j == ROOT {
        CMatrix::identity(1)
    } else {
        internal_block()
    };
    SiteUnitary::new_unchecked(j, neighbors_of(j).to_vec(), reduced).expect("consistent sizes")
}

/// Walker at the leftmost level-`n` node, arrived from its left child.
pub fn initial_state<T: Real>(n: usize) -> Result<ProductState<T>> {
    let v = leftmost(n)?;
    Ok(ProductState::pure(NodeId(2 * v.0), v))
}

/// Walker at `node`, arrived from the neighbor `from`.
pub fn initial_state_at<T: Real>(node: NodeId, from: NodeId) -> Result<ProductState<T>> {
    if !neighbors_of(node).contains(&from) {
        return Err(Error::NotAnEdge {
            prev: from,
            current: node,
        });
    }
    Ok(ProductState::pure(from, node))
}

/// Step-by-step full-tree evolution with a cap on the stored support.
#[derive(Debug, Clone)]
pub struct TreeEvolution<T> {
    tree: BinaryTree<T>,
    state: ProductState<T>,
    time: usize,
    cap: usize,
}

impl<T: Real> TreeEvolution<T> {
    pub fn new(initial: ProductState<T>) -> Self {
        Self::with_cap(initial, DEFAULT_STATE_CAP)
    }

    pub fn with_cap(initial: ProductState<T>, cap: usize) -> Self {
        Self {
            tree: BinaryTree::new(),
            state: initial,
            time: 0,
            cap,
        }
    }

    pub fn step(&mut self) -> Result<()> {
        let next = interchange::step(&self.state, &self.tree)?;
        if next.len() > self.cap {
            return Err(Error::ResourceLimit {
                size: next.len(),
                cap: self.cap,
            });
        }
        self.state = next;
        self.time += 1;
        Ok(())
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn state(&self) -> &ProductState<T> {
        &self.state
    }

    /// Amplitude on the pair (child of root, root).
    pub fn root_amplitude(&self) -> Complex<T> {
        self.state.get(NodeId(1), ROOT)
    }
}

/// Root amplitudes `H_n(t)`, `t = 0..=t_max`, by full sparse evolution.
pub fn simulate_tree<T: Real>(n: usize, t_max: usize) -> Result<Vec<Complex<T>>> {
    simulate_tree_with_cap(n, t_max, DEFAULT_STATE_CAP)
}

pub fn simulate_tree_with_cap<T: Real>(
    n: usize,
    t_max: usize,
    cap: usize,
) -> Result<Vec<Complex<T>>> {
    let mut evo = TreeEvolution::with_cap(initial_state(n)?, cap);
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(evo.root_amplitude());
    for _ in 0..t_max {
        evo.step()?;
        out.push(evo.root_amplitude());
    }
    Ok(out)
}

/// Direction of the walker's previous move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    TowardRoot,
    AwayFromRoot,
}

/// What happens to amplitude that reaches the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootBoundary {
    /// The root sends everything back to level 1.
    Reflect,
    /// Arrivals after time 0 are recorded and removed.
    Absorb,
}

/// Step weights of the lumped walk.
#[derive(Debug, Clone, Copy)]
pub struct ProjectedWeights<T> {
    /// Away from root, turn back toward it.
    pub away_turn: Complex<T>,
    /// Away from root, keep going away.
    pub away_continue: Complex<T>,
    /// Toward root, turn away from it.
    pub toward_turn: Complex<T>,
    /// Toward root, keep going toward it.
    pub toward_continue: Complex<T>,
}

impl<T: Real> ProjectedWeights<T> {
    pub fn new() -> Self {
        let s = T::one() / sqrt3::<T>();
        let a = cube_root_of_unity::<T>();
        let one = Complex::new(T::one(), T::zero());
        Self {
            away_turn: Complex::new(s, T::zero()),
            away_continue: a * (s + s),
            toward_turn: (one + a) * s,
            toward_continue: a * s,
        }
    }
}

impl<T: Real> Default for ProjectedWeights<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Amplitudes of the lumped walk by (level, direction).
///
/// The root only ever holds toward-root amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedState<T> {
    toward: Vec<Complex<T>>,
    away: Vec<Complex<T>>,
}

impl<T: Real> ProjectedState<T> {
    /// Unit amplitude at `(level, direction)`.
    pub fn pure(level: usize, direction: Direction) -> Result<Self> {
        if level == 0 && direction == Direction::AwayFromRoot {
            return Err(Error::parameter(
                "direction",
                "the root holds only toward-root amplitude",
            ));
        }
        let mut s = Self {
            toward: vec![Complex::zero(); level + 1],
            away: vec![Complex::zero(); level + 1],
        };
        *s.slot_mut(level, direction) = Complex::new(T::one(), T::zero());
        Ok(s)
    }

    fn slot_mut(&mut self, level: usize, direction: Direction) -> &mut Complex<T> {
        match direction {
            Direction::TowardRoot => &mut self.toward[level],
            Direction::AwayFromRoot => &mut self.away[level],
        }
    }

    pub fn get(&self, level: usize, direction: Direction) -> Complex<T> {
        let v = match direction {
            Direction::TowardRoot => &self.toward,
            Direction::AwayFromRoot => &self.away,
        };
        v.get(level).copied().unwrap_or_else(Complex::zero)
    }

    /// Number of levels currently stored.
    pub fn levels(&self) -> usize {
        self.toward.len()
    }

    pub fn root(&self) -> Complex<T> {
        self.toward[0]
    }

    pub fn clear_root(&mut self) {
        self.toward[0] = Complex::zero();
    }

    /// Squared amplitudes summed over all entries (not conserved by lumping).
    pub fn weight(&self) -> T {
        neumaier_sum(
            self.toward
                .iter()
                .chain(self.away.iter())
                .map(|c| c.norm_sqr()),
        )
    }

    /// One lumped step; levels above `max_level` are dropped.
    pub fn step(&self, w: &ProjectedWeights<T>, max_level: usize) -> Self {
        let top = self.levels().min(max_level + 1);
        let mut toward = vec![Complex::zero(); top];
        let mut away = vec![Complex::zero(); top];
        for l in 0..self.levels() {
            let tw = self.toward[l];
            let aw = self.away[l];
            if l == 0 {
                if !tw.is_zero() && 1 < top {
                    away[1] = away[1] + tw;
                }
                continue;
            }
            if !aw.is_zero() {
                if l - 1 < top {
                    toward[l - 1] = toward[l - 1] + aw * w.away_turn;
                }
                if l + 1 < top {
                    away[l + 1] = away[l + 1] + aw * w.away_continue;
                }
            }
            if !tw.is_zero() {
                if l + 1 < top {
                    away[l + 1] = away[l + 1] + tw * w.toward_turn;
                }
                if l - 1 < top {
                    toward[l - 1] = toward[l - 1] + tw * w.toward_continue;
                }
            }
        }
        Self { toward, away }
    }

    /// Grows storage by one level so an unpruned step can move outward.
    fn reserve_level(&mut self) {
        self.toward.push(Complex::zero());
        self.away.push(Complex::zero());
    }
}

/// Root arrivals of the lumped walk started at `(level, direction)`.
///
/// Entry `t` is the amplitude at the root after `t` steps. Amplitude that can no
/// longer reach the root within `t_max` steps is pruned, so the cost is
/// `O(t_max²)`.
pub fn evolve_projected<T: Real>(
    level: usize,
    direction: Direction,
    t_max: usize,
    boundary: RootBoundary,
) -> Result<Vec<Complex<T>>> {
    let w = ProjectedWeights::new();
    let mut state = ProjectedState::pure(level, direction)?;
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(state.root());
    for t in 1..=t_max {
        state.reserve_level();
        state = state.step(&w, t_max - t);
        out.push(state.root());
        if boundary == RootBoundary::Absorb {
            state.clear_root();
        }
    }
    Ok(out)
}

/// `H_n(t)`, `t = 0..=t_max`, from the lumped walk started at `(n, toward root)`.
pub fn simulate_projected<T: Real>(n: usize, t_max: usize) -> Result<Vec<Complex<T>>> {
    evolve_projected(n, Direction::TowardRoot, t_max, RootBoundary::Reflect)
}

/// First-passage amplitudes `h_n(t)` from level `n` to the root.
pub fn first_passage_projected<T: Real>(n: usize, t_max: usize) -> Result<Vec<Complex<T>>> {
    if n == 0 {
        return Err(Error::parameter("n", "first passage needs n >= 1"));
    }
    evolve_projected(n, Direction::TowardRoot, t_max, RootBoundary::Absorb)
}

/// Root-to-root amplitudes `G(t)` allowing any number of intermediate visits; `G(0) = 1`.
pub fn multi_loop_projected<T: Real>(t_max: usize) -> Result<Vec<Complex<T>>> {
    evolve_projected(0, Direction::TowardRoot, t_max, RootBoundary::Reflect)
}

/// Simple-loop amplitudes `g(t)` (root touched only at both ends); `g(0) = 0`.
pub fn simple_loop_projected<T: Real>(t_max: usize) -> Result<Vec<Complex<T>>> {
    let mut g = evolve_projected(0, Direction::TowardRoot, t_max, RootBoundary::Absorb)?;
    g[0] = Complex::zero();
    Ok(g)
}

/// Simple-loop amplitude `g(t)` by enumerating every lumped path explicitly.
///
/// Exponential in `t`; meant as an oracle for `t ≲ 24`.
pub fn loop_amplitude_bruteforce<T: Real>(t: usize) -> Complex<T> {
    if t < 2 || t % 2 == 1 {
        return Complex::zero();
    }
    let w = ProjectedWeights::<T>::new();
    fn walk<T: Real>(
        w: &ProjectedWeights<T>,
        level: usize,
        dir: Direction,
        remaining: usize,
        acc: Complex<T>,
    ) -> Complex<T> {
        if remaining == 0 {
            return if level == 0 { acc } else { Complex::zero() };
        }
        if level == 0 || level > remaining {
            return Complex::zero();
        }
        let (back, back_w, out_w) = match dir {
            Direction::AwayFromRoot => (Direction::TowardRoot, w.away_turn, w.away_continue),
            Direction::TowardRoot => (Direction::TowardRoot, w.toward_continue, w.toward_turn),
        };
        walk(w, level - 1, back, remaining - 1, acc * back_w)
            + walk(w, level + 1, Direction::AwayFromRoot, remaining - 1, acc * out_w)
    }
    walk(
        &w,
        1,
        Direction::AwayFromRoot,
        t - 1,
        Complex::new(T::one(), T::zero()),
    )
}

/// `(a/√3)^n`, the single shortest path from level `n`.
pub fn direct_path_amplitude<T: Real>(n: usize) -> Complex<T> {
    let s = T::one() / sqrt3::<T>();
    omega_power::<T>(n as i64) * s.powi(n as i32)
}
