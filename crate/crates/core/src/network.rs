use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Simple undirected graph stored as sorted adjacency lists.
///
/// Construction rejects self-loops, duplicate edges and out-of-range
/// endpoints. Connectivity is not enforced here so that disconnected inputs
/// can still be represented and rejected by callers that require it (see
/// [`Network::require_connected`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    adjacency: Vec<Vec<usize>>,
}

impl Network {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("network must have at least one node".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::Range { index: u, len: n });
            }
            if v >= n {
                return Err(Error::Range { index: v, len: n });
            }
            if u == v {
                return Err(Error::Domain(format!("self-loop at node {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Domain(format!("duplicate edge at node {u}")));
            }
        }
        Ok(Self { adjacency })
    }

    /// Builds from adjacency lists that are already known to be simple and
    /// symmetric (used by the generators).
    pub(crate) fn from_adjacency_unchecked(mut adjacency: Vec<Vec<usize>>) -> Self {
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Self { adjacency }
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain("a cycle needs at least 3 nodes".into()));
        }
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_edges(n, &edges)
    }

    /// Node 0 is the centre.
    pub fn star(leaves: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Self::from_edges(leaves + 1, &edges)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Breadth-first reachability from node 0 covers every node.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Domain("network is not connected".into()))
        }
    }

    /// Relabels nodes so that old node `i` becomes `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::Shape(format!(
                "permutation of length {} for {} nodes",
                perm.len(),
                self.n()
            )));
        }
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Self::from_edges(self.n(), &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(matches!(
            Network::from_edges(3, &[(1, 1)]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            Network::from_edges(3, &[(0, 1), (1, 0)]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            Network::from_edges(3, &[(0, 3)]),
            Err(Error::Range { index: 3, len: 3 })
        ));
    }

    #[test]
    fn adjacency_is_sorted_and_symmetric() {
        let net = Network::from_edges(4, &[(3, 0), (0, 1), (2, 0)]).unwrap();
        assert_eq!(net.neighbors(0), &[1, 2, 3]);
        assert_eq!(net.neighbors(3), &[0]);
        assert_eq!(
            net.edges().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (0, 3)]
        );
        assert_eq!(net.edge_count(), 3);
    }

    #[test]
    fn connectivity() {
        assert!(Network::from_edges(1, &[]).unwrap().is_connected());
        assert!(!Network::from_edges(4, &[(0, 1), (2, 3)])
            .unwrap()
            .is_connected());
        assert!(Network::path(100).unwrap().is_connected());
    }

    #[test]
    fn relabel_preserves_structure() {
        let net = Network::path(4).unwrap();
        let r = net.relabeled(&[3, 2, 1, 0]).unwrap();
        assert_eq!(r, net);
        let r = net.relabeled(&[1, 0, 2, 3]).unwrap();
        assert_eq!(r.neighbors(1), &[0]);
        assert_eq!(r.neighbors(0), &[1, 2]);
    }
}
