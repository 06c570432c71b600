#![allow(dead_code)]

use biasdyn::{BiasSet, Network, OpinionState};
use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random spanning tree plus independent extra edges with probability `p`.
pub fn random_connected(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Network {
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((rng.random_range(0..i), i));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Network::from_edges(n, &edges).unwrap()
}

pub fn simplex_point(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let e: Vec<f64> = (0..k)
        .map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-300)
        .collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

pub fn random_state(n: usize, k: usize, rng: &mut ChaCha8Rng) -> OpinionState<f64> {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| simplex_point(k, rng)).collect();
    OpinionState::from_rows(&rows).unwrap()
}

/// Entries uniform in `[lo, hi)`, each replaced by zero with probability `zero_p`.
pub fn random_biases(
    n: usize,
    k: usize,
    lo: f64,
    hi: f64,
    zero_p: f64,
    rng: &mut ChaCha8Rng,
) -> BiasSet<f64> {
    let values = (0..n * k)
        .map(|_| {
            if rng.random_bool(zero_p) {
                0.0
            } else {
                rng.random_range(lo..hi)
            }
        })
        .collect();
    BiasSet::new(n, k, values).unwrap()
}

pub fn uniform_biases(n: usize, k: usize, c: f64) -> BiasSet<f64> {
    BiasSet::new(n, k, vec![c; n * k]).unwrap()
}

/// Random permutation of `0..n`.
pub fn permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.random_range(0..=i));
    }
    p
}

/// Largest recessive set by exhaustive search over every proper subset.
pub fn brute_force_recessive(b: &BiasSet<f64>) -> Vec<usize> {
    let k = b.k();
    let mut best: Vec<usize> = Vec::new();
    for mask in 0u32..(1 << k) - 1 {
        let inside = |l: usize| mask & (1 << l) != 0;
        let ok = b.rows().all(|r| {
            (0..k)
                .filter(|&l| inside(l))
                .all(|l| (0..k).filter(|&d| !inside(d)).all(|d| r[l] < r[d]))
        });
        let members: Vec<usize> = (0..k).filter(|&l| inside(l)).collect();
        if ok && members.len() > best.len() {
            best = members;
        }
    }
    best
}

pub fn spectral_radius(m: [[f64; 2]; 2]) -> f64 {
    Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Iterates linear averaging until the largest row change drops below `tol`.
pub fn degroot_limit(
    x0: &OpinionState<f64>,
    net: &Network,
    tol: f64,
    max_steps: usize,
) -> OpinionState<f64> {
    let mut x = x0.clone();
    for _ in 0..max_steps {
        let next = biasdyn::degroot_step(&x, net).unwrap();
        let change = next.max_row_change(&x);
        x = next;
        if change < tol {
            break;
        }
    }
    x
}

pub fn max_abs_diff(a: &OpinionState<f64>, b: &OpinionState<f64>) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
