//! Metric travelling salesman: Christofides' approximation, 2-opt and 3-opt
//! local search, and an exact Held–Karp solver for small instances.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Node, NodeId, NodeIndex};
use crate::matching::{min_weight_perfect_matching, PairDistance};
use crate::postman::{hierholzer_euler_circuit, odd_nodes, ClosedWalk};
use crate::shortest_paths::floyd_warshall;
use crate::spanning::prim_mst;
use crate::COST_TOLERANCE;

/// Largest instance [`held_karp_exact`] accepts.
pub const MAX_EXACT_NODES: usize = 14;

/// Complete symmetric distance table satisfying the triangle inequality.
#[derive(Debug, Clone)]
pub struct MetricInstance {
    order: Vec<NodeId>,
    d: Vec<Vec<f64>>,
    index: NodeIndex,
}

impl MetricInstance {
    /// Validates and wraps a distance table. `d[i][j]` is the distance between
    /// `order[i]` and `order[j]`.
    pub fn new(order: Vec<NodeId>, d: Vec<Vec<f64>>) -> Result<Self> {
        let n = order.len();
        if d.len() != n || d.iter().any(|row| row.len() != n) {
            return Err(Error::NotMetric(format!("table is not {n}x{n}")));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = order.iter().find(|id| !seen.insert(**id)) {
            return Err(Error::DuplicateNode(*dup));
        }
        for i in 0..n {
            if d[i][i] != 0.0 {
                return Err(Error::NotMetric(format!("d[{i}][{i}] = {}", d[i][i])));
            }
            for j in 0..n {
                let x = d[i][j];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::NotMetric(format!("d[{i}][{j}] = {x}")));
                }
                if x != d[j][i] {
                    return Err(Error::NotMetric(format!("d[{i}][{j}] != d[{j}][{i}]")));
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][j] > d[i][k] + d[k][j] + COST_TOLERANCE {
                        return Err(Error::NotMetric(format!(
                            "d[{i}][{j}] exceeds the detour through {k}"
                        )));
                    }
                }
            }
        }
        let index = NodeIndex::new(order.clone());
        Ok(MetricInstance { order, d, index })
    }

    /// Straight-line distances between the given nodes.
    pub fn euclidean(nodes: &[Node]) -> Result<Self> {
        let d = nodes
            .iter()
            .map(|a| nodes.iter().map(|b| crate::graph::euclidean_weight(a, b)).collect())
            .collect();
        Self::new(nodes.iter().map(|n| n.id).collect(), d)
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn index_of(&self, id: NodeId) -> Result<usize> {
        self.index.get(id)
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> Result<f64> {
        Ok(self.d[self.index_of(u)?][self.index_of(v)?])
    }

    /// Cost of visiting `nodes` in order and returning to the first.
    pub fn tour_cost(&self, nodes: &[NodeId]) -> Result<f64> {
        let idx = self.indices(nodes)?;
        Ok(self.cyclic_cost(&idx))
    }

    fn indices(&self, nodes: &[NodeId]) -> Result<Vec<usize>> {
        nodes.iter().map(|&n| self.index_of(n)).collect()
    }

    fn cyclic_cost(&self, idx: &[usize]) -> f64 {
        match idx {
            [] | [_] => 0.0,
            _ => {
                let closing = self.d[idx[idx.len() - 1]][idx[0]];
                idx.windows(2).map(|w| self.d[w[0]][w[1]]).sum::<f64>() + closing
            }
        }
    }

    fn tour_from(&self, idx: &[usize]) -> Tour {
        Tour { nodes: idx.iter().map(|&i| self.order[i]).collect(), cost: self.cyclic_cost(idx) }
    }

    /// The instance as a complete graph, one edge per unordered pair.
    fn complete_graph(&self) -> Graph {
        let mut g = self.bare_graph();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                g.add_edge(self.order[i], self.order[j], Some(self.d[i][j])).expect("valid pair");
            }
        }
        g
    }

    fn bare_graph(&self) -> Graph {
        let mut g = Graph::new();
        for &id in &self.order {
            g.insert_node(Node { id, x: 0.0, y: 0.0, label: None }).expect("distinct ids");
        }
        g
    }
}

impl PairDistance for MetricInstance {
    fn pair_distance(&self, u: NodeId, v: NodeId) -> Result<f64> {
        self.distance(u, v)
    }
}

/// Closed tour visiting every node of an instance once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    pub nodes: Vec<NodeId>,
    /// Includes the closing leg back to the first node.
    pub cost: f64,
}

/// Shortest-path distances between `targets` (default: every node).
pub fn metric_closure(g: &Graph, targets: Option<&[NodeId]>) -> Result<MetricInstance> {
    let targets = match targets {
        Some(t) => t.to_vec(),
        None => g.node_ids(),
    };
    for &t in &targets {
        g.node(t)?;
    }
    let all = floyd_warshall(g);
    let mut d = vec![vec![0.0; targets.len()]; targets.len()];
    for (i, &u) in targets.iter().enumerate() {
        for (j, &v) in targets.iter().enumerate() {
            d[i][j] = all.distance(u, v)?.finite().ok_or(Error::Disconnected)?;
        }
    }
    MetricInstance::new(targets, d)
}

/// Christofides: minimum spanning tree, perfect matching of its odd-degree
/// nodes, Euler circuit of the union, then shortcut to a Hamiltonian tour
/// starting at `start`. Cost is at most 1.5 times the optimum.
pub fn christofides(m: &MetricInstance, start: NodeId) -> Result<Tour> {
    if m.len() < 3 {
        return Err(Error::TooFewNodes(m.len()));
    }
    m.index_of(start)?;
    let complete = m.complete_graph();
    let tree = prim_mst(&complete, Some(start))?;

    let mut h = m.bare_graph();
    for &e in &tree.edges {
        let e = complete.edge(e)?;
        h.add_edge(e.u, e.v, Some(e.weight))?;
    }
    let odd = odd_nodes(&h);
    let pairing = min_weight_perfect_matching(&odd.nodes, m)?;
    for &(a, b) in &pairing.pairs {
        h.add_edge(a, b, Some(m.distance(a, b)?))?;
    }

    let circuit = hierholzer_euler_circuit(&h, start)?;
    shortcut_to_hamiltonian(&circuit, m)
}

/// Keeps the first visit of each node along the walk and closes the cycle.
pub fn shortcut_to_hamiltonian(walk: &ClosedWalk, m: &MetricInstance) -> Result<Tour> {
    let mut seen = vec![false; m.len()];
    let mut idx = Vec::with_capacity(m.len());
    for &n in &walk.node_sequence {
        let i = m.index_of(n)?;
        if !seen[i] {
            seen[i] = true;
            idx.push(i);
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::WalkMissesNode(m.order[missing]));
    }
    Ok(m.tour_from(&idx))
}

/// 2-opt with first-improvement pivoting: reverse a segment whenever that
/// shortens the tour by more than the cost tolerance, and repeat full passes
/// until none does. The first node stays in place.
pub fn two_opt(t: &Tour, m: &MetricInstance) -> Result<Tour> {
    let mut tour = m.indices(&t.nodes)?;
    let n = tour.len();
    if n < 4 {
        return Ok(m.tour_from(&tour));
    }
    let d = &m.d;
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n - 2 {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b, c, e) = (tour[i], tour[i + 1], tour[j], tour[(j + 1) % n]);
                let delta = d[a][c] + d[b][e] - d[a][b] - d[c][e];
                if delta < -COST_TOLERANCE {
                    tour[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
    }
    Ok(m.tour_from(&tour))
}

/// 3-opt with first-improvement pivoting. Removing three edges splits the
/// tour into the fixed part and two segments; every reordering and
/// reorientation of the two segments is tried (this includes all 2-opt moves).
pub fn three_opt(t: &Tour, m: &MetricInstance) -> Result<Tour> {
    let mut tour = m.indices(&t.nodes)?;
    let n = tour.len();
    if n < 4 {
        return Ok(m.tour_from(&tour));
    }
    let d = &m.d;
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n - 2 {
            for j in i + 1..n - 1 {
                for k in j + 1..n {
                    let (a, f) = (tour[i], tour[(k + 1) % n]);
                    let seg_b = (tour[i + 1], tour[j]);
                    let seg_c = (tour[j + 1], tour[k]);
                    let old = d[a][seg_b.0] + d[seg_b.1][seg_c.0] + d[seg_c.1][f];
                    let Some(mv) = best_reconnection(d, a, f, seg_b, seg_c, old) else {
                        continue;
                    };
                    let mut b: Vec<usize> = tour[i + 1..=j].to_vec();
                    let mut c: Vec<usize> = tour[j + 1..=k].to_vec();
                    if mv.reverse_b {
                        b.reverse();
                    }
                    if mv.reverse_c {
                        c.reverse();
                    }
                    let middle = if mv.swap { [c, b].concat() } else { [b, c].concat() };
                    tour.splice(i + 1..=k, middle);
                    improved = true;
                }
            }
        }
    }
    Ok(m.tour_from(&tour))
}

#[derive(Debug, Clone, Copy)]
struct Reconnection {
    swap: bool,
    reverse_b: bool,
    reverse_c: bool,
}

/// First of the seven non-trivial reconnections that beats `old`.
fn best_reconnection(
    d: &[Vec<f64>],
    a: usize,
    f: usize,
    b: (usize, usize),
    c: (usize, usize),
    old: f64,
) -> Option<Reconnection> {
    let flip = |s: (usize, usize), rev: bool| if rev { (s.1, s.0) } else { s };
    for swap in [false, true] {
        for reverse_b in [false, true] {
            for reverse_c in [false, true] {
                if !swap && !reverse_b && !reverse_c {
                    continue;
                }
                let (x, y) = if swap {
                    (flip(c, reverse_c), flip(b, reverse_b))
                } else {
                    (flip(b, reverse_b), flip(c, reverse_c))
                };
                let new = d[a][x.0] + d[x.1][y.0] + d[y.1][f];
                if new < old - COST_TOLERANCE {
                    return Some(Reconnection { swap, reverse_b, reverse_c });
                }
            }
        }
    }
    None
}

/// Exact optimum by dynamic programming over subsets (Held–Karp). The tour
/// starts at the instance's first node.
pub fn held_karp_exact(m: &MetricInstance) -> Result<Tour> {
    let n = m.len();
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    if n > MAX_EXACT_NODES {
        return Err(Error::TooLarge { got: n, max: MAX_EXACT_NODES });
    }
    // Subsets range over nodes 1..n; bit i-1 stands for node i.
    let k = n - 1;
    let full = (1usize << k) - 1;
    let mut cost = vec![vec![f64::INFINITY; k]; full + 1];
    let mut parent = vec![vec![usize::MAX; k]; full + 1];
    for j in 0..k {
        cost[1 << j][j] = m.d[0][j + 1];
    }
    for mask in 1..=full {
        for j in 0..k {
            if mask & (1 << j) == 0 || mask == 1 << j {
                continue;
            }
            let prev = mask & !(1 << j);
            let mut bits = prev;
            while bits != 0 {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let c = cost[prev][p] + m.d[p + 1][j + 1];
                if c < cost[mask][j] {
                    cost[mask][j] = c;
                    parent[mask][j] = p;
                }
            }
        }
    }
    let last = (0..k)
        .min_by(|&x, &y| {
            (cost[full][x] + m.d[x + 1][0]).total_cmp(&(cost[full][y] + m.d[y + 1][0]))
        })
        .expect("k >= 2");
    let mut rev = Vec::with_capacity(n);
    let (mut mask, mut j) = (full, last);
    loop {
        rev.push(j + 1);
        let p = parent[mask][j];
        mask &= !(1 << j);
        if mask == 0 {
            break;
        }
        j = p;
    }
    rev.push(0);
    rev.reverse();
    Ok(m.tour_from(&rev))
}
