//! Exact minimum-weight perfect matching on a complete distance graph.
//!
//! Solved by dynamic programming over subsets: the lowest unmatched node is
//! always paired first, so each subset is solved once. Cost is
//! `O(2^m · m)` time and `2^m` floats of memory, which caps `m` at
//! [`MAX_MATCHING_NODES`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::shortest_paths::{Distance, DistanceMatrix};
use crate::COST_TOLERANCE;

pub const MAX_MATCHING_NODES: usize = 24;

/// Anything that can report the distance between two nodes.
pub trait PairDistance {
    fn pair_distance(&self, u: NodeId, v: NodeId) -> Result<f64>;
}

impl PairDistance for DistanceMatrix {
    fn pair_distance(&self, u: NodeId, v: NodeId) -> Result<f64> {
        match self.distance(u, v)? {
            Distance::Finite(d) => Ok(d),
            Distance::Unreachable => Err(Error::Unreachable { from: u, to: v }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    /// Each pair is `(smaller id, larger id)`; pairs sorted ascending.
    pub pairs: Vec<(NodeId, NodeId)>,
    pub total_cost: f64,
}

impl Pairing {
    pub fn empty() -> Self {
        Pairing { pairs: Vec::new(), total_cost: 0.0 }
    }
}

/// Pairs up `nodes` so the summed distance is minimal. Among equal-cost
/// pairings the lexicographically smallest sorted pair list is returned.
pub fn min_weight_perfect_matching<D: PairDistance + ?Sized>(
    nodes: &[NodeId],
    dist: &D,
) -> Result<Pairing> {
    let m = nodes.len();
    if m % 2 == 1 {
        return Err(Error::OddCardinality(m));
    }
    if m > MAX_MATCHING_NODES {
        return Err(Error::CardinalityTooLarge { got: m, max: MAX_MATCHING_NODES });
    }
    let mut ids = nodes.to_vec();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateNode(w[0]));
    }
    if m == 0 {
        return Ok(Pairing::empty());
    }

    let mut w = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = dist.pair_distance(ids[i], ids[j])?;
            w[i][j] = d;
            w[j][i] = d;
        }
    }

    let full = (1usize << m) - 1;
    let mut best = vec![f64::INFINITY; full + 1];
    best[0] = 0.0;
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut b = f64::INFINITY;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            b = b.min(w[i][j] + best[rest & !(1 << j)]);
        }
        best[mask] = b;
    }

    let mut pairs = Vec::with_capacity(m / 2);
    let mut total_cost = 0.0;
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let j = (i + 1..m)
            .filter(|&j| rest & (1 << j) != 0)
            .find(|&j| w[i][j] + best[rest & !(1 << j)] <= best[mask] + COST_TOLERANCE)
            .expect("optimal partner exists");
        pairs.push((ids[i], ids[j]));
        total_cost += w[i][j];
        mask = rest & !(1 << j);
    }
    Ok(Pairing { pairs, total_cost })
}
