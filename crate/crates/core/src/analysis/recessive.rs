use crate::error::{Error, Result};
use crate::model::{BiasSet, OpinionState};
use crate::scalar::{max_of, Scalar};

/// Split of the alternatives into a dominant set and a recessive set, where
/// every agent's bias strictly favours each dominant alternative over each
/// recessive one. Indices are zero-based and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltPartition {
    pub dominant: Vec<usize>,
    pub recessive: Vec<usize>,
}

impl AltPartition {
    /// Partition of `0..k` with the given recessive alternatives.
    pub fn from_recessive(k: usize, recessive: &[usize]) -> Result<Self> {
        let mut mask = vec![false; k];
        for &l in recessive {
            if l >= k {
                return Err(Error::Range { index: l, len: k });
            }
            mask[l] = true;
        }
        let dominant: Vec<_> = (0..k).filter(|&l| !mask[l]).collect();
        if dominant.is_empty() {
            return Err(Error::Domain("dominant set must be nonempty".into()));
        }
        let recessive = (0..k).filter(|&l| mask[l]).collect();
        Ok(Self {
            dominant,
            recessive,
        })
    }

    pub fn k(&self) -> usize {
        self.dominant.len() + self.recessive.len()
    }

    /// Whether every agent ranks every dominant alternative strictly above
    /// every recessive one.
    pub fn separates<T: Scalar>(&self, biases: &BiasSet<T>) -> bool {
        biases.rows().all(|r| {
            self.recessive
                .iter()
                .all(|&l| self.dominant.iter().all(|&d| r[l] < r[d]))
        })
    }
}

/// Largest recessive set for `biases`.
///
/// Every agent's top-ranked alternatives must be dominant, and any
/// alternative that some agent ranks at least as high as a dominant one must
/// be dominant too. Closing the top-ranked set under that rule gives the
/// smallest admissible dominant set, hence the largest recessive set.
pub fn recessive_set<T: Scalar>(biases: &BiasSet<T>) -> AltPartition {
    let k = biases.k();
    let mut dominant = vec![false; k];
    for r in biases.rows() {
        let top = r.iter().copied().fold(r[0], max_of);
        for (l, &v) in r.iter().enumerate() {
            if v == top {
                dominant[l] = true;
            }
        }
    }
    loop {
        let mut changed = false;
        for l in 0..k {
            if dominant[l] {
                continue;
            }
            let joins = biases
                .rows()
                .any(|r| (0..k).any(|d| dominant[d] && r[l] >= r[d]));
            if joins {
                dominant[l] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    AltPartition {
        dominant: (0..k).filter(|&l| dominant[l]).collect(),
        recessive: (0..k).filter(|&l| !dominant[l]).collect(),
    }
}

/// `max_i sum_{l in L} x_i[l]`: the largest total weight any agent puts on
/// the recessive alternatives. Zero when `L` is empty.
pub fn lyapunov_value<T: Scalar>(state: &OpinionState<T>, partition: &AltPartition) -> T {
    state
        .rows()
        .map(|row| {
            partition
                .recessive
                .iter()
                .fold(T::zero(), |acc, &l| acc + row[l])
        })
        .fold(T::zero(), max_of)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const R_A: [f64; 3] = [0.8, 0.09, 0.11];
    const R_B: [f64; 3] = [0.11, 0.09, 0.8];

    #[test]
    fn shared_strict_ranking_leaves_only_the_top() {
        let b = BiasSet::repeated(4, &R_A).unwrap();
        let p = recessive_set(&b);
        assert_eq!(p.dominant, vec![0]);
        assert_eq!(p.recessive, vec![1, 2]);
    }

    #[test]
    fn mixed_majority_minority_biases() {
        let b = BiasSet::from_rows(&[R_A.to_vec(), R_B.to_vec(), R_A.to_vec()]).unwrap();
        let p = recessive_set(&b);
        assert_eq!(p.dominant, vec![0, 2]);
        assert_eq!(p.recessive, vec![1]);
        assert!(p.separates(&b));
    }

    #[test]
    fn opposed_preferences_have_no_recessive_option() {
        let b = BiasSet::from_rows(&[vec![0.6, 0.4], vec![0.4, 0.6]]).unwrap();
        let p = recessive_set(&b);
        assert!(p.recessive.is_empty());
        assert_eq!(p.dominant, vec![0, 1]);
    }

    #[test]
    fn ties_keep_alternatives_dominant() {
        let b = BiasSet::from_rows(&[vec![0.5, 0.5, 0.1], vec![0.2, 0.3, 0.1]]).unwrap();
        let p = recessive_set(&b);
        assert_eq!(p.recessive, vec![2]);
        let b = BiasSet::from_rows(&[vec![0.5, 0.4, 0.4]]).unwrap();
        assert_eq!(recessive_set(&b).recessive, vec![1, 2]);
        let b = BiasSet::from_rows(&[vec![0.0, 0.0]]).unwrap();
        assert!(recessive_set(&b).recessive.is_empty());
    }

    #[test]
    fn lyapunov_examples() {
        let third = 1.0 / 3.0;
        let s = OpinionState::repeated(4, &[third, third, third]).unwrap();
        let p = AltPartition::from_recessive(3, &[1]).unwrap();
        assert_abs_diff_eq!(lyapunov_value(&s, &p), third, epsilon = 1e-15);

        let empty = AltPartition::from_recessive(3, &[]).unwrap();
        assert_eq!(lyapunov_value(&s, &empty), 0.0);

        let s = OpinionState::from_rows(&[vec![0.0, 1.0, 0.0], vec![0.5, 0.0, 0.5]]).unwrap();
        assert_eq!(lyapunov_value(&s, &p), 1.0);
    }

    #[test]
    fn partition_validation() {
        assert!(matches!(
            AltPartition::from_recessive(2, &[0, 1]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            AltPartition::from_recessive(2, &[2]),
            Err(Error::Range { .. })
        ));
    }
}
