//! Seeded sampling of initial opinions and bias assignments.
//!
//! All randomness comes from ChaCha8 keyed by a 64-bit seed, with one
//! independent stream per [`StreamLabel`]. Changing how many draws one
//! stream consumes never shifts another, so e.g. retrying graph generation
//! leaves the sampled opinions untouched.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{BiasSet, OpinionState};
use crate::netgen::CommunityPartition;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamLabel {
    Graph = 0,
    Opinions = 1,
    BiasAssignment = 2,
}

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    label: StreamLabel,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, label: StreamLabel) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(label as u64);
        Self { seed, label, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> StreamLabel {
        self.label
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Uniform point on the `(k-1)`-simplex: `k` standard exponentials
/// `-ln u`, `u` in `(0, 1]`, divided by their sum.
pub fn sample_simplex_uniform<T: Real>(k: usize, rng: &mut SeededRng) -> Vec<T> {
    if k == 1 {
        return vec![T::one()];
    }
    loop {
        let draws: Vec<T> = (0..k)
            .map(|_| {
                let u = 1.0 - rng.random::<f64>();
                T::lit(-u.ln())
            })
            .collect();
        let total = draws.iter().fold(T::zero(), |a, &b| a + b);
        // all draws zero has probability ~2^-53k; redraw rather than divide by zero
        if total > T::zero() {
            return draws.into_iter().map(|v| v / total).collect();
        }
    }
}

/// `n` independent uniform simplex points.
pub fn sample_opinions<T: Real>(
    n: usize,
    k: usize,
    rng: &mut SeededRng,
) -> Result<OpinionState<T>> {
    let values: Vec<T> = (0..n)
        .flat_map(|_| sample_simplex_uniform::<T>(k, rng))
        .collect();
    OpinionState::new(n, k, values)
}

fn check_pair<T: Real>(majority: &[T], minority: &[T]) -> Result<()> {
    if majority.len() != minority.len() {
        return Err(Error::Shape(format!(
            "majority bias has {} entries, minority bias has {}",
            majority.len(),
            minority.len()
        )));
    }
    Ok(())
}

fn assemble<T: Real>(
    n: usize,
    majority: &[T],
    minority: &[T],
    is_minority: impl Fn(usize) -> bool,
) -> Result<BiasSet<T>> {
    let values: Vec<T> = (0..n)
        .flat_map(|i| {
            if is_minority(i) { minority } else { majority }
                .iter()
                .copied()
        })
        .collect();
    BiasSet::new(n, majority.len(), values)
}

/// Minority bias for every node of `minority_community`, majority bias elsewhere.
pub fn assign_biases_by_community<T: Real>(
    partition: &CommunityPartition,
    majority: &[T],
    minority: &[T],
    minority_community: usize,
) -> Result<BiasSet<T>> {
    check_pair(majority, minority)?;
    if minority_community >= partition.sizes.len() {
        return Err(Error::Range {
            index: minority_community,
            len: partition.sizes.len(),
        });
    }
    assemble(partition.assignment.len(), majority, minority, |i| {
        partition.assignment[i] == minority_community
    })
}

/// Uniformly random `count`-subset of `0..n` (partial Fisher-Yates), sorted.
pub fn random_subset(n: usize, count: usize, rng: &mut SeededRng) -> Result<Vec<usize>> {
    if count > n {
        return Err(Error::Config(format!("cannot choose {count} of {n} nodes")));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..count {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(count);
    idx.sort_unstable();
    Ok(idx)
}

/// Minority bias for `minority_count` uniformly chosen nodes. Returns the
/// bias set together with the sorted minority members.
pub fn assign_biases_random<T: Real>(
    n: usize,
    majority: &[T],
    minority: &[T],
    minority_count: usize,
    rng: &mut SeededRng,
) -> Result<(BiasSet<T>, Vec<usize>)> {
    check_pair(majority, minority)?;
    let members = random_subset(n, minority_count, rng)?;
    let mut mask = vec![false; n];
    members.iter().for_each(|&i| mask[i] = true);
    let biases = assemble(n, majority, minority, |i| mask[i])?;
    Ok((biases, members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::recessive_set;

    const R_A: [f64; 3] = [0.8, 0.09, 0.11];
    const R_B: [f64; 3] = [0.11, 0.09, 0.8];

    fn two_communities() -> CommunityPartition {
        CommunityPartition {
            assignment: vec![0, 0, 1, 0, 1],
            sizes: vec![3, 2],
            modularity: 0.0,
        }
    }

    #[test]
    fn single_alternative_is_certain() {
        let mut rng = SeededRng::new(1, StreamLabel::Opinions);
        for _ in 0..10 {
            assert_eq!(sample_simplex_uniform::<f64>(1, &mut rng), vec![1.0]);
        }
    }

    #[test]
    fn draws_lie_on_the_simplex() {
        let mut rng = SeededRng::new(9, StreamLabel::Opinions);
        for k in 2..8 {
            let x = sample_simplex_uniform::<f64>(k, &mut rng);
            assert!(x.iter().all(|&v| v >= 0.0));
            assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn component_means_are_one_third() {
        let mut rng = SeededRng::new(2024, StreamLabel::Opinions);
        let draws = 100_000;
        let mut acc = [0.0; 3];
        for _ in 0..draws {
            let x = sample_simplex_uniform::<f64>(3, &mut rng);
            for l in 0..3 {
                acc[l] += x[l];
            }
        }
        for a in acc {
            assert!((a / draws as f64 - 1.0 / 3.0).abs() < 0.01);
        }
    }

    #[test]
    fn streams_are_reproducible_and_independent() {
        let a: Vec<u64> = {
            let mut r = SeededRng::new(5, StreamLabel::Opinions);
            (0..4).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = SeededRng::new(5, StreamLabel::Opinions);
            (0..4).map(|_| r.next_u64()).collect()
        };
        let c: Vec<u64> = {
            let mut r = SeededRng::new(5, StreamLabel::Graph);
            (0..4).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn community_assignment_follows_ids() {
        let p = two_communities();
        let b = assign_biases_by_community(&p, &R_A, &R_B, 1).unwrap();
        let minority_rows = b.rows().filter(|r| *r == R_B).count();
        assert_eq!(minority_rows, 2);
        assert_eq!(b.row(2), R_B);
        assert_eq!(b.row(0), R_A);
        // no implicit size check: the larger community can be the "minority"
        let b = assign_biases_by_community(&p, &R_A, &R_B, 0).unwrap();
        assert_eq!(b.rows().filter(|r| *r == R_B).count(), 3);
        assert_eq!(recessive_set(&b).recessive, vec![1]);
        assert!(matches!(
            assign_biases_by_community(&p, &R_A, &R_B, 2),
            Err(Error::Range { index: 2, len: 2 })
        ));
    }

    #[test]
    fn random_assignment_counts() {
        let mut rng = SeededRng::new(3, StreamLabel::BiasAssignment);
        let (b, m) = assign_biases_random(10, &R_A, &R_B, 0, &mut rng).unwrap();
        assert!(m.is_empty());
        assert!(b.rows().all(|r| r == R_A));
        let (b, m) = assign_biases_random(10, &R_A, &R_B, 10, &mut rng).unwrap();
        assert_eq!(m.len(), 10);
        assert!(b.rows().all(|r| r == R_B));
        assert!(matches!(
            assign_biases_random(10, &R_A, &R_B, 11, &mut rng),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn random_minority_of_fifty_two() {
        let draw = || {
            let mut rng = SeededRng::new(42, StreamLabel::BiasAssignment);
            assign_biases_random(500, &R_A, &R_B, 52, &mut rng).unwrap()
        };
        let (b, members) = draw();
        assert_eq!(members.len(), 52);
        assert_eq!(b.rows().filter(|r| *r == R_B).count(), 52);
        assert_eq!(b.rows().filter(|r| *r == R_A).count(), 448);
        assert_eq!(draw().1, members);
    }
}
