//! Small-world graph generation and community detection.

mod community;

pub use community::{detect_communities, modularity, CommunityPartition};

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::network::Network;
use crate::sampling::{SeededRng, StreamLabel};

pub const DEFAULT_RING_DEGREE: usize = 10;
pub const DEFAULT_REWIRE_P: f64 = 0.1;
pub const MAX_GENERATION_ATTEMPTS: u32 = 100;

pub fn is_connected(net: &Network) -> bool {
    net.is_connected()
}

/// Connected Watts-Strogatz graph.
///
/// Starts from a ring where each node links to `ring_degree / 2` neighbours
/// on either side, then visits the ring edges `(u, u + j)` in order of
/// offset `j` and node `u`, rewiring each with probability `rewire_p` to a
/// uniformly chosen node that is neither `u` nor already adjacent to it.
/// Disconnected draws are discarded and regenerated with seed
/// `seed + attempt`.
pub fn watts_strogatz(n: usize, ring_degree: usize, rewire_p: f64, seed: u64) -> Result<Network> {
    if ring_degree < 2 || !ring_degree.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "ring_degree must be even and at least 2, got {ring_degree}"
        )));
    }
    if n <= ring_degree {
        return Err(Error::Config(format!(
            "n = {n} must exceed ring_degree = {ring_degree}"
        )));
    }
    if !(0.0..=1.0).contains(&rewire_p) {
        return Err(Error::Config(format!(
            "rewire_p must lie in [0, 1], got {rewire_p}"
        )));
    }
    for attempt in 0..MAX_GENERATION_ATTEMPTS {
        let mut rng = SeededRng::new(seed.wrapping_add(attempt as u64), StreamLabel::Graph);
        let net = watts_strogatz_once(n, ring_degree, rewire_p, &mut rng);
        if net.is_connected() {
            return Ok(net);
        }
        log::debug!("Watts-Strogatz attempt {attempt} disconnected, retrying");
    }
    Err(Error::GenerationFailed {
        attempts: MAX_GENERATION_ATTEMPTS,
    })
}

fn watts_strogatz_once(n: usize, ring_degree: usize, p: f64, rng: &mut SeededRng) -> Network {
    let half = ring_degree / 2;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=half {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for j in 1..=half {
        for u in 0..n {
            if rng.random::<f64>() >= p {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let v = (u + j) % n;
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    Network::from_adjacency_unchecked(adj.into_iter().map(|s| s.into_iter().collect()).collect())
}
