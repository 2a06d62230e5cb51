//! Block-and-hole spherical polyhedra and their generic rigidity in 3-space.
//!
//! The crate is organised around a small number of pieces:
//!
//! * [`poly`] holds the combinatorial model (a sphere-embedded graph whose
//!   faces are partitioned into blocks, holes and triangulated discs) and the
//!   structural predicates used by the contraction engine.
//! * [`transform`] implements the graph surgery: vertex splits, edge
//!   contractions, subdivisions, flips, cycle/path splits and block/hole swaps.
//! * [`contraction`] runs the contraction sequence and produces
//!   certificates whose reversal is a vertex-split construction.
//! * [`rigidity`] is the exact rank oracle over a 61-bit prime field.
//! * [`counting`] carries the combinatorial necessary conditions (balance,
//!   pebble-game sparsity, separation, cut cycles, Menger paths).
//! * [`generators`] and [`allostery`] build the instance families and the
//!   degree-of-freedom transmission sweeps.

pub mod allostery;
pub mod cli;
pub mod contraction;
pub mod counting;
pub mod error;
pub mod generators;
pub mod graph;
pub mod poly;
pub mod rigidity;
pub mod transform;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, Vertex};
pub use poly::{Block, Disc, DiscId, Hole, Polyhedron};
