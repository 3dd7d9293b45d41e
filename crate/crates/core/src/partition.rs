use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A set of disjoint, nonempty clusters of data indices.
///
/// Stored in canonical form: members sorted within each cluster, clusters
/// sorted by their smallest member. Two clusterings of the same sets are
/// therefore equal as values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Clustering {
    clusters: Vec<Vec<usize>>,
}

impl Clustering {
    pub fn new(clusters: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        let mut clusters: Vec<Vec<usize>> = clusters
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        for c in &clusters {
            if c.is_empty() {
                return Err(Error::EmptySubset);
            }
            for &x in c {
                if seen.insert(x, ()).is_some() {
                    return Err(Error::OverlappingClusters(x));
                }
            }
        }
        clusters.sort();
        Ok(Clustering { clusters })
    }

    pub fn singletons(ground: impl IntoIterator<Item = usize>) -> Self {
        Clustering::new(ground.into_iter().map(|x| vec![x]).collect()).expect("distinct singletons")
    }

    pub fn whole(ground: impl IntoIterator<Item = usize>) -> Self {
        let all: Vec<usize> = ground.into_iter().collect();
        if all.is_empty() {
            return Clustering { clusters: Vec::new() };
        }
        Clustering::new(vec![all]).expect("one cluster")
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.clusters.iter().map(Vec::as_slice)
    }

    /// All members, sorted.
    pub fn ground_set(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.clusters.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    /// Position of the cluster containing `x`.
    pub fn cluster_of(&self, x: usize) -> Option<usize> {
        self.clusters.iter().position(|c| c.binary_search(&x).is_ok())
    }

    /// `{C ∩ Y : C ∈ self, C ∩ Y ≠ ∅}`.
    pub fn restrict(&self, subset: &[usize]) -> Clustering {
        let clusters = self
            .clusters
            .iter()
            .map(|c| c.iter().copied().filter(|x| subset.contains(x)).collect::<Vec<_>>())
            .filter(|c| !c.is_empty())
            .collect();
        Clustering::new(clusters).expect("restriction of disjoint clusters")
    }

    /// True when every cluster of `coarser` is a union of clusters of
    /// `self`. Both must cover the same ground set.
    pub fn refines(&self, coarser: &Clustering) -> Result<bool> {
        if self.ground_set() != coarser.ground_set() {
            return Err(Error::GroundSetMismatch);
        }
        Ok(self.clusters.iter().all(|c| {
            let home = coarser.cluster_of(c[0]);
            c.iter().all(|&x| coarser.cluster_of(x) == home)
        }))
    }
}

impl fmt::Display for Clustering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clusters
            .iter()
            .map(|c| {
                let m: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", m.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = Clustering::new(vec![vec![3, 2], vec![1, 0]]).unwrap();
        let b = Clustering::new(vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "{0,1} {2,3}");
        assert_eq!(a.cluster_of(3), Some(1));
        assert_eq!(a.cluster_of(9), None);
    }

    #[test]
    fn rejects_overlap_and_empty() {
        assert_eq!(
            Clustering::new(vec![vec![0, 1], vec![1]]),
            Err(Error::OverlappingClusters(1))
        );
        assert_eq!(Clustering::new(vec![vec![]]), Err(Error::EmptySubset));
    }

    #[test]
    fn restriction() {
        let c = Clustering::new(vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(c.restrict(&[0, 1]), Clustering::new(vec![vec![0, 1]]).unwrap());
        assert_eq!(c.restrict(&[0, 1, 2]), c);
        let whole = Clustering::whole(0..5);
        assert_eq!(whole.restrict(&[1, 3]), Clustering::whole([1, 3]));
    }

    #[test]
    fn refinement_order() {
        let fine = Clustering::singletons(0..4);
        let mid = Clustering::new(vec![vec![0, 1], vec![2], vec![3]]).unwrap();
        let coarse = Clustering::whole(0..4);
        assert!(fine.refines(&mid).unwrap());
        assert!(mid.refines(&mid).unwrap());
        assert!(mid.refines(&coarse).unwrap());
        assert!(!coarse.refines(&mid).unwrap());
        let other = Clustering::new(vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(!mid.refines(&other).unwrap());
        assert_eq!(mid.refines(&Clustering::whole(0..3)), Err(Error::GroundSetMismatch));
    }
}
