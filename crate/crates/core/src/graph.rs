//! Network topologies with self-inclusive neighborhoods.
//!
//! The degree convention throughout the crate: `degree_inclusive(v)` counts
//! the node itself, so a `d`-regular topology has `d - 1` stored neighbors
//! per node and per-link fan-out `d - 1`.

use crate::error::{Error, Result};
use crate::seeds::rng_from;
use rand::seq::SliceRandom;

/// Undirected, connected graph. Adjacency lists are sorted and exclude the
/// node itself; immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    adjacency: Vec<Vec<usize>>,
}

impl Topology {
    /// Complete graph on `v >= 2` nodes.
    pub fn complete(v: usize) -> Result<Self> {
        if v < 2 {
            return Err(Error::InvalidParam(format!(
                "complete graph needs at least 2 nodes, got {v}"
            )));
        }
        let adjacency = (0..v)
            .map(|u| (0..v).filter(|&w| w != u).collect())
            .collect();
        Ok(Topology { adjacency })
    }

    /// Single isolated node (the degenerate one-node network).
    pub fn singleton() -> Self {
        Topology {
            adjacency: vec![Vec::new()],
        }
    }

    /// Builds a topology from an explicit edge list.
    pub fn from_edges(v: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); v];
        for &(a, b) in edges {
            if a >= v || b >= v {
                return Err(Error::InvalidParam(format!(
                    "edge ({a}, {b}) out of range for {v} nodes"
                )));
            }
            if a == b {
                return Err(Error::InvalidParam(format!("self loop at node {a}")));
            }
            if adjacency[a].contains(&b) {
                return Err(Error::InvalidParam(format!("duplicate edge ({a}, {b})")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let topo = Topology { adjacency };
        if !topo.is_connected() {
            return Err(Error::Infeasible("graph is not connected".into()));
        }
        Ok(topo)
    }

    /// Random `d`-regular topology (self-inclusive degree `d`, so `d - 1`
    /// neighbors per node), sampled by the pairing model with rejection of
    /// self loops, multi-edges and disconnected outcomes. Deterministic for
    /// a fixed `seed`; fails after 1000 rejected attempts.
    pub fn random_regular(v: usize, d: usize, seed: u64) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidParam("degree must be at least 1".into()));
        }
        let neighbors = d - 1;
        if neighbors >= v && !(v == 1 && neighbors == 0) {
            return Err(Error::InvalidParam(format!(
                "degree {d} infeasible for {v} nodes (needs d - 1 < V)"
            )));
        }
        if v == 1 {
            return Ok(Topology::singleton());
        }
        if neighbors * v % 2 != 0 {
            return Err(Error::Infeasible(format!(
                "(d - 1) * V = {} is odd",
                neighbors * v
            )));
        }
        if neighbors == 0 {
            return Err(Error::Infeasible(
                "degree 1 on more than one node cannot be connected".into(),
            ));
        }
        if neighbors == v - 1 {
            // The complete graph is the unique (V-1)-neighbor graph; the
            // pairing model would reject almost every attempt here.
            return Topology::complete(v);
        }

        let mut rng = rng_from(seed);
        let mut stubs: Vec<usize> = Vec::with_capacity(v * neighbors);
        for node in 0..v {
            stubs.extend(std::iter::repeat(node).take(neighbors));
        }

        'attempt: for _ in 0..1000 {
            stubs.shuffle(&mut rng);
            let mut adjacency = vec![Vec::new(); v];
            for pair in stubs.chunks_exact(2) {
                let (a, b) = (pair[0], pair[1]);
                if a == b || adjacency[a].contains(&b) {
                    continue 'attempt;
                }
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
            for list in &mut adjacency {
                list.sort_unstable();
            }
            let topo = Topology { adjacency };
            if topo.is_connected() {
                return Ok(topo);
            }
        }
        Err(Error::GenerationFailed(format!(
            "no connected {d}-regular graph on {v} nodes within 1000 attempts"
        )))
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    /// Sorted neighbors of `v`, excluding `v` itself.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Self-inclusive degree `d_v = |neighbors| + 1`.
    pub fn degree_inclusive(&self, v: usize) -> usize {
        self.adjacency[v].len() + 1
    }

    /// Neighborhood of `v` including `v` itself, sorted.
    pub fn neighborhood_inclusive(&self, v: usize) -> Vec<usize> {
        let mut set = self.adjacency[v].clone();
        let pos = set.partition_point(|&u| u < v);
        set.insert(pos, v);
        set
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        let v = self.num_nodes();
        if v == 0 {
            return false;
        }
        let mut seen = vec![false; v];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_examples() {
        let t = Topology::complete(3).unwrap();
        assert_eq!(t.neighbors(0), &[1, 2]);
        assert_eq!(t.degree_inclusive(0), 3);

        let t2 = Topology::complete(2).unwrap();
        assert_eq!(t2.neighbors(0), &[1]);
        assert_eq!(t2.degree_inclusive(0), 2);

        assert_eq!(Topology::complete(10).unwrap().edge_count(), 45);
        assert!(Topology::complete(1).is_err());
    }

    #[test]
    fn regular_examples() {
        let t = Topology::random_regular(10, 5, 17).unwrap();
        for v in 0..10 {
            assert_eq!(t.neighbors(v).len(), 4);
        }
        assert!(t.is_connected());

        // d - 1 = V - 1 collapses to the complete graph
        let t = Topology::random_regular(6, 6, 3).unwrap();
        assert_eq!(t, Topology::complete(6).unwrap());

        // handshake parity: 3 * 5 odd
        assert!(matches!(
            Topology::random_regular(5, 4, 3),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn regular_is_reproducible() {
        let a = Topology::random_regular(12, 5, 99).unwrap();
        let b = Topology::random_regular(12, 5, 99).unwrap();
        assert_eq!(a, b);
        let c = Topology::random_regular(12, 5, 100).unwrap();
        // different seeds will usually give a different graph
        assert!(a != c || a.edge_count() == c.edge_count());
    }

    #[test]
    fn symmetry_and_connectivity() {
        for seed in 0..5 {
            let t = Topology::random_regular(10, 5, seed).unwrap();
            for v in 0..10 {
                for &u in t.neighbors(v) {
                    assert!(t.neighbors(u).contains(&v), "asymmetric edge {v}-{u}");
                }
            }
            assert!(t.is_connected());
        }
    }

    #[test]
    fn inclusive_neighborhood() {
        let t = Topology::complete(3).unwrap();
        assert_eq!(t.neighborhood_inclusive(1), vec![0, 1, 2]);

        // ring of 4: degree 3 including self
        let ring = Topology::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(ring.neighborhood_inclusive(0), vec![0, 1, 3]);
        for v in 0..4 {
            assert_eq!(
                ring.neighborhood_inclusive(v).len(),
                ring.degree_inclusive(v)
            );
        }
    }

    #[test]
    fn from_edges_rejects_disconnected() {
        assert!(Topology::from_edges(4, &[(0, 1), (2, 3)]).is_err());
    }
}
