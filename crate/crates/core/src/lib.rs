//! Discrete-time quantum walks in the interchange framework.
//!
//! The walk state lives on ordered pairs `(previous, current)` of graph nodes and
//! one step is "swap the pair, then let the unitary of the current site act on
//! the slot that remembers where the walker came from". No coin space is needed.
//!
//! Besides the framework itself ([`interchange`]) and its classical analogue
//! ([`memchain`]), the crate carries everything needed to study the symmetric
//! walk on the semi-infinite binary tree:
//!
//! * [`btree`]: full sparse simulation on the tree and the exact lumped
//!   (level, direction) line walk,
//! * [`series`]: truncated complex power series and the generating functions of
//!   loops, first passages and the root amplitude,
//! * [`asymptotics`]: the two-saddle steepest-descent approximation of the root
//!   amplitude,
//! * [`classical`]: the classical walk on the tree (spectral integral and exact
//!   dynamic programming) used as a benchmark.
//!
//! All numerics are generic over the scalar type through [`Real`]; the `*64`
//! aliases below fix `f64`, which is what the command line uses by default.

pub mod asymptotics;
pub mod btree;
pub mod classical;
mod error;
pub mod interchange;
pub mod memchain;
pub mod quadrature;
mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use scalar::{cube_root_of_unity, lit, neumaier_sum, omega_power, sqrt3, Real};

pub use num_complex::Complex;

/// Complex amplitude over the scalar `T`.
pub type Amplitude<T> = Complex<T>;

pub type Amplitude64 = Amplitude<f64>;
pub type Amplitude32 = Amplitude<f32>;
pub type ProductState64 = interchange::ProductState<f64>;
pub type SiteUnitary64 = interchange::SiteUnitary<f64>;
pub type InterchangeWalk64 = interchange::InterchangeWalk<f64>;
pub type BinaryTree64 = btree::BinaryTree<f64>;
pub type ProjectedState64 = btree::ProjectedState<f64>;
pub type PowerSeries64 = series::PowerSeries<f64>;
pub type PowerSeries32 = series::PowerSeries<f32>;
pub type SaddleData64 = asymptotics::SaddleData<f64>;
pub type ChainParams64 = classical::ChainParams<f64>;
pub type MemoryChain64 = memchain::MemoryChain<f64>;
pub type MemoryDistribution64 = memchain::MemoryDistribution<f64>;
