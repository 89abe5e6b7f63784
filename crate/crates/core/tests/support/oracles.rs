//! Brute-force reference solvers and random instance generators. Nothing in
//! here calls the algorithms under test.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use route_core::{ClosedWalk, Graph, MetricInstance, Node, NodeId};

/// Connected graph: a random spanning tree plus `extra` random edges
/// (parallel edges allowed), weights uniform in `[lo, hi]`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, extra: usize, lo: f64, hi: f64) -> Graph {
    let mut g = Graph::new();
    let ids: Vec<NodeId> = (0..n)
        .map(|_| g.add_node(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0), None).unwrap())
        .collect();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        g.add_edge(ids[i], ids[j], Some(rng.gen_range(lo..=hi))).unwrap();
    }
    if n >= 2 {
        for _ in 0..extra {
            let (a, b) = distinct_pair(rng, n);
            g.add_edge(ids[a], ids[b], Some(rng.gen_range(lo..=hi))).unwrap();
        }
    }
    g
}

/// Random graph that may be disconnected.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, m: usize, lo: f64, hi: f64) -> Graph {
    let mut g = Graph::new();
    let ids: Vec<NodeId> = (0..n).map(|i| g.add_node(i as f64, 0.0, None).unwrap()).collect();
    if n >= 2 {
        for _ in 0..m {
            let (a, b) = distinct_pair(rng, n);
            g.add_edge(ids[a], ids[b], Some(rng.gen_range(lo..=hi))).unwrap();
        }
    }
    g
}

/// Connected graph with at most `max_odd` odd-degree nodes: extra edges are
/// added between odd nodes until the count is low enough.
pub fn random_graph_few_odd<R: Rng>(rng: &mut R, n: usize, extra: usize, max_odd: usize) -> Graph {
    let mut g = random_connected_graph(rng, n, extra, 0.1, 10.0);
    loop {
        let odd: Vec<NodeId> =
            g.degrees().into_iter().filter(|(_, d)| d % 2 == 1).map(|(n, _)| n).collect();
        if odd.len() <= max_odd {
            return g;
        }
        let mut pick = odd.clone();
        pick.shuffle(rng);
        g.add_edge(pick[0], pick[1], Some(rng.gen_range(0.1..=10.0))).unwrap();
    }
}

/// Connected multigraph with every degree even: a closed walk through all
/// nodes plus `extra_walks` random closed walks.
pub fn random_eulerian_multigraph<R: Rng>(rng: &mut R, n: usize, extra_walks: usize) -> Graph {
    assert!(n >= 3);
    let mut g = Graph::new();
    let ids: Vec<NodeId> = (0..n)
        .map(|_| g.add_node(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0), None).unwrap())
        .collect();
    let mut tour = ids.clone();
    tour.shuffle(rng);
    add_closed_walk(rng, &mut g, &tour);
    for _ in 0..extra_walks {
        let len = rng.gen_range(2..=n.min(6));
        let mut walk: Vec<NodeId> = Vec::with_capacity(len);
        while walk.len() < len {
            let c = ids[rng.gen_range(0..n)];
            if walk.last() != Some(&c) {
                walk.push(c);
            }
        }
        if walk.first() == walk.last() {
            walk.pop();
        }
        if walk.len() >= 2 {
            add_closed_walk(rng, &mut g, &walk);
        }
    }
    g
}

fn add_closed_walk<R: Rng>(rng: &mut R, g: &mut Graph, walk: &[NodeId]) {
    for i in 0..walk.len() {
        let (a, b) = (walk[i], walk[(i + 1) % walk.len()]);
        g.add_edge(a, b, Some(rng.gen_range(0.1..=10.0))).unwrap();
    }
}

fn distinct_pair<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// Random points in a 1000x1000 box.
pub fn random_points<R: Rng>(rng: &mut R, n: usize) -> Vec<Node> {
    (0..n)
        .map(|i| Node {
            id: NodeId(i as u64),
            x: rng.gen_range(0.0..1000.0),
            y: rng.gen_range(0.0..1000.0),
            label: None,
        })
        .collect()
}

pub fn random_euclidean_instance<R: Rng>(rng: &mut R, n: usize) -> MetricInstance {
    MetricInstance::euclidean(&random_points(rng, n)).unwrap()
}

/// Symmetric random table with zero diagonal (not necessarily metric).
pub fn random_table<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(0.0..100.0);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    d
}

/// Relax every edge `n - 1` times.
pub fn bellman_ford(g: &Graph, source: NodeId) -> BTreeMap<NodeId, Option<f64>> {
    let mut dist: BTreeMap<NodeId, Option<f64>> = g.node_ids().into_iter().map(|n| (n, None)).collect();
    dist.insert(source, Some(0.0));
    for _ in 1..g.node_count().max(1) {
        let mut changed = false;
        for e in g.edges() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if let Some(da) = dist[&a] {
                    let cand = da + e.weight;
                    if dist[&b].is_none_or(|db| cand < db) {
                        dist.insert(b, Some(cand));
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Kruskal's total weight with a plain union-find; `None` if disconnected.
pub fn kruskal_total(g: &Graph) -> Option<f64> {
    let ids = g.node_ids();
    let pos: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut edges: Vec<_> = g.edges().collect();
    edges.sort_by(|a, b| a.weight.total_cmp(&b.weight));
    let (mut total, mut used) = (0.0, 0);
    for e in edges {
        let (a, b) = (find(&mut parent, pos[&e.u]), find(&mut parent, pos[&e.v]));
        if a != b {
            parent[a] = b;
            total += e.weight;
            used += 1;
        }
    }
    (used + 1 == ids.len() || ids.is_empty()).then_some(total)
}

/// Minimum over every perfect pairing of `0..n`, enumerated recursively.
pub fn brute_force_matching(n: usize, dist: &dyn Fn(usize, usize) -> f64) -> f64 {
    fn go(rest: &mut Vec<usize>, dist: &dyn Fn(usize, usize) -> f64) -> f64 {
        if rest.is_empty() {
            return 0.0;
        }
        let first = rest.remove(0);
        let mut best = f64::INFINITY;
        for k in 0..rest.len() {
            let partner = rest.remove(k);
            best = best.min(dist(first, partner) + go(rest, dist));
            rest.insert(k, partner);
        }
        rest.insert(0, first);
        best
    }
    assert!(n % 2 == 0);
    go(&mut (0..n).collect(), dist)
}

/// Number of perfect pairings of `n` items, `(n - 1)!!`.
pub fn pairing_count(n: usize) -> usize {
    (1..n).step_by(2).product()
}

/// Chinese Postman cost: all edge weights plus the cheapest pairing of odd
/// nodes under Bellman-Ford distances.
pub fn brute_force_postman(g: &Graph) -> f64 {
    let odd: Vec<NodeId> =
        g.degrees().into_iter().filter(|(_, d)| d % 2 == 1).map(|(n, _)| n).collect();
    let rows: Vec<BTreeMap<NodeId, Option<f64>>> = odd.iter().map(|&o| bellman_ford(g, o)).collect();
    let edge_sum: f64 = g.edges().map(|e| e.weight).sum();
    edge_sum + brute_force_matching(odd.len(), &|i, j| rows[i][&odd[j]].unwrap())
}

/// Exact tour cost by trying every permutation with the first node fixed.
pub fn brute_force_tsp(m: &MetricInstance) -> f64 {
    let ids = m.order().to_vec();
    let mut rest: Vec<NodeId> = ids[1..].to_vec();
    let mut best = f64::INFINITY;
    permute(&mut rest, 0, &mut |perm| {
        let mut tour = vec![ids[0]];
        tour.extend_from_slice(perm);
        best = best.min(m.tour_cost(&tour).unwrap());
    });
    best
}

fn permute(items: &mut Vec<NodeId>, k: usize, visit: &mut dyn FnMut(&[NodeId])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Checks that `walk` is an Euler circuit of `g`: closed at its start,
/// consecutive nodes joined by the listed edge, every edge exactly once.
pub fn check_euler_circuit(g: &Graph, walk: &ClosedWalk) -> Result<(), String> {
    if walk.node_sequence.first() != Some(&walk.start) || walk.node_sequence.last() != Some(&walk.start) {
        return Err(format!("walk not closed at {}", walk.start));
    }
    if walk.node_sequence.len() != walk.edge_sequence.len() + 1 {
        return Err("node/edge sequence lengths disagree".into());
    }
    let mut ids = walk.edge_sequence.clone();
    ids.sort_unstable();
    let all: Vec<_> = g.edges().map(|e| e.id).collect();
    if ids != all {
        return Err("edges not used exactly once".into());
    }
    for (i, &e) in walk.edge_sequence.iter().enumerate() {
        let e = g.edge(e).map_err(|e| e.to_string())?;
        let (a, b) = (walk.node_sequence[i], walk.node_sequence[i + 1]);
        if !((e.u == a && e.v == b) || (e.u == b && e.v == a)) {
            return Err(format!("edge {} does not join {a} and {b}", e.id));
        }
    }
    let cost: f64 = walk.edge_sequence.iter().map(|&e| g.edge(e).unwrap().weight).sum();
    if (cost - walk.total_cost).abs() > 1e-9 {
        return Err(format!("reported cost {} but edges sum to {cost}", walk.total_cost));
    }
    Ok(())
}
