//! Exact enumeration of solutions to generalized Sidon equations
//! `x_{1,1}+...+x_{1,h_1} = ... = x_{k,1}+...+x_{k,h_k}` in the grid `[n]^d`
//! and the torus `Z_n^d`, exact counts of r-colorings without rainbow
//! solutions, the palette (template) calculus, rainbow-hypergraph
//! co-degree statistics, the explicit constructions, and a verification
//! suite of exact inequalities.
//!
//! All counts are exact integers; every threshold involving `log2 n` or a
//! fractional power of `n` is decided on a rigorous rational enclosure.

pub mod bitset;
pub mod cache;
pub mod coloring;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod grid;
pub mod hypergraph;
pub mod oracle;
pub mod report;
pub mod solutions;
pub mod template;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{full_grid, point_sum, Ambient, EquationSpec, Grid, Point, PointSet, SumVector};

use serde::{Deserialize, Serialize};

/// Work limits. Exceeding one is a hard [`Error::Capacity`], never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Stored subset entries across sum buckets, and cells of dense sum tables.
    pub bucket_entries: u64,
    /// Search-tree nodes expanded by coloring backtracking.
    pub coloring_nodes: u64,
}

impl Budget {
    /// Subsets visited while filling buckets, as a multiple of `bucket_entries`.
    pub const VISIT_FACTOR: u64 = 1000;

    pub fn new(bucket_entries: u64, coloring_nodes: u64) -> Self {
        Budget {
            bucket_entries,
            coloring_nodes,
        }
    }

    pub fn visit_limit(&self) -> u64 {
        self.bucket_entries.saturating_mul(Self::VISIT_FACTOR)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            bucket_entries: 1_000_000,
            coloring_nodes: 10_000_000,
        }
    }
}
