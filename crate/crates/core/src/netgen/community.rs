use std::collections::BTreeMap;

use crate::error::Result;
use crate::network::Network;

#[derive(Debug, Clone, PartialEq)]
pub struct CommunityPartition {
    /// Community id of each node; ids are contiguous from 0 and ordered by
    /// each community's smallest node.
    pub assignment: Vec<usize>,
    pub sizes: Vec<usize>,
    pub modularity: f64,
}

impl CommunityPartition {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Id of the smallest community (lowest id among equals).
    pub fn smallest(&self) -> usize {
        (0..self.sizes.len())
            .min_by_key(|&c| self.sizes[c])
            .unwrap_or(0)
    }

    pub fn members(&self, community: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == community)
            .collect()
    }
}

/// Newman modularity `sum_c [ L_c / m - (D_c / 2m)^2 ]`, with `L_c` the
/// edges inside community `c` and `D_c` its total degree.
pub fn modularity(net: &Network, assignment: &[usize]) -> f64 {
    let m = net.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let c = assignment.iter().copied().max().map_or(0, |x| x + 1);
    let mut internal = vec![0.0; c];
    let mut degree = vec![0.0; c];
    for u in 0..net.n() {
        degree[assignment[u]] += net.degree(u) as f64;
    }
    for (u, v) in net.edges() {
        if assignment[u] == assignment[v] {
            internal[assignment[u]] += 1.0;
        }
    }
    (0..c)
        .map(|i| internal[i] / m - (degree[i] / (2.0 * m)).powi(2))
        .sum()
}

/// Greedy modularity agglomeration (Clauset-Newman-Moore).
///
/// Starts from singletons and repeatedly merges the adjacent pair with the
/// largest modularity gain until no merge has positive gain. Gains are kept
/// as exact integers (`2m E_cd - D_c D_d`, i.e. the gain scaled by `2m^2`),
/// so ties are genuine and resolved by the lowest `(c, d)` pair.
pub fn detect_communities(net: &Network) -> Result<CommunityPartition> {
    net.require_connected()?;
    let n = net.n();
    let m = net.edge_count() as i128;

    let mut degree: Vec<i128> = (0..n).map(|u| net.degree(u) as i128).collect();
    let mut links: Vec<BTreeMap<usize, i128>> = (0..n)
        .map(|u| net.neighbors(u).iter().map(|&v| (v, 1)).collect())
        .collect();
    let mut alive = vec![true; n];
    let mut parent: Vec<usize> = (0..n).collect();
    // modularity scaled by 4m^2
    let mut q_scaled: i128 = -degree.iter().map(|d| d * d).sum::<i128>();

    loop {
        let mut best: Option<(i128, usize, usize)> = None;
        for c in (0..n).filter(|&c| alive[c]) {
            for (&d, &e) in links[c].range(c + 1..) {
                let gain = 2 * m * e - degree[c] * degree[d];
                if best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, c, d));
                }
            }
        }
        let Some((gain, c, d)) = best else { break };
        if gain <= 0 {
            break;
        }
        q_scaled += 2 * gain;
        degree[c] += degree[d];
        alive[d] = false;
        parent[d] = c;
        let moved = std::mem::take(&mut links[d]);
        links[c].remove(&d);
        for (x, e) in moved {
            if x == c {
                continue;
            }
            *links[c].entry(x).or_insert(0) += e;
            let lx = &mut links[x];
            lx.remove(&d);
            *lx.entry(c).or_insert(0) += e;
        }
    }

    let root = |mut u: usize| {
        while parent[u] != u {
            u = parent[u];
        }
        u
    };
    let mut ids = BTreeMap::new();
    let mut assignment = Vec::with_capacity(n);
    let mut sizes = Vec::new();
    for u in 0..n {
        let r = root(u);
        let next = ids.len();
        let id = *ids.entry(r).or_insert(next);
        if id == sizes.len() {
            sizes.push(0);
        }
        sizes[id] += 1;
        assignment.push(id);
    }
    let modularity = if m == 0 {
        0.0
    } else {
        q_scaled as f64 / (4 * m * m) as f64
    };
    Ok(CommunityPartition {
        assignment,
        sizes,
        modularity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn two_cliques() -> Network {
        let mut edges = Vec::new();
        for base in [0, 5] {
            for u in 0..5 {
                for v in u + 1..5 {
                    edges.push((base + u, base + v));
                }
            }
        }
        edges.push((4, 5));
        Network::from_edges(10, &edges).unwrap()
    }

    #[test]
    fn bridged_cliques_split_in_two() {
        let net = two_cliques();
        let p = detect_communities(&net).unwrap();
        assert_eq!(p.sizes, vec![5, 5]);
        assert_eq!(p.assignment, vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        assert!((p.modularity - modularity(&net, &p.assignment)).abs() < 1e-12);
    }

    #[test]
    fn complete_graph_is_one_community() {
        let p = detect_communities(&Network::complete(6).unwrap()).unwrap();
        assert_eq!(p.sizes, vec![6]);
        assert!(p.modularity.abs() < 1e-12);
    }

    #[test]
    fn single_node() {
        let p = detect_communities(&Network::from_edges(1, &[]).unwrap()).unwrap();
        assert_eq!(p.sizes, vec![1]);
        assert_eq!(p.modularity, 0.0);
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let net = Network::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(detect_communities(&net), Err(Error::Domain(_))));
    }

    #[test]
    fn modularity_of_known_partitions() {
        let net = two_cliques();
        // m = 21, each side has 10 internal edges and degree sum 21
        let q = modularity(&net, &[0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        let expected = 2.0 * (10.0 / 21.0 - 0.25);
        assert!((q - expected).abs() < 1e-15);
        assert_eq!(modularity(&net, &[0; 10]), 0.0);
    }
}
