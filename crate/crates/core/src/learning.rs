//! Sequential classifiers built on a training clustering.
//!
//! New data arrive one at a time. Each is compared with the cluster
//! centers; it joins the cluster of its nearest center when that center is
//! unique, and otherwise the nearby cluster whose energy grows least, or it
//! founds a cluster of its own when no such cluster is unique. The adaptive
//! variant also splits a cluster whose energy rises above a threshold.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::centers::center_candidates;
use crate::dendrogram::Dendrogram;
use crate::energy::{EnergyValue, Threshold};
use crate::error::{Error, Result};
use crate::padic::{FieldParams, NormValue, PAdicValue};
use crate::partition::Clustering;

/// A point of `X ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Point {
    Datum(usize),
    Infinity,
}

/// A cluster of a classification, or the cluster `{∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClusterRef {
    Cluster(usize),
    Infinity,
}

impl Serialize for ClusterRef {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ClusterRef::Cluster(i) => s.serialize_u64(*i as u64),
            ClusterRef::Infinity => s.serialize_str("inf"),
        }
    }
}

/// A dataset together with a clustering of it.
#[derive(Debug, Clone)]
pub struct Classification {
    dendrogram: Dendrogram,
    clustering: Clustering,
}

impl Classification {
    pub fn new(data: Vec<PAdicValue>, clustering: Clustering) -> Result<Self> {
        let n = data.len();
        if clustering.ground_set() != (0..n).collect::<Vec<_>>() {
            return Err(Error::GroundSetMismatch);
        }
        Ok(Classification { dendrogram: Dendrogram::build(data)?, clustering })
    }

    pub fn data(&self) -> &[PAdicValue] {
        self.dendrogram.data()
    }

    pub fn field(&self) -> &FieldParams {
        self.dendrogram.field()
    }

    pub fn dendrogram(&self) -> &Dendrogram {
        &self.dendrogram
    }

    pub fn clustering(&self) -> &Clustering {
        &self.clustering
    }

    /// `κ`: the cluster of a point, with `∞ ↦ {∞}`.
    pub fn classify(&self, point: Point) -> Result<ClusterRef> {
        match point {
            Point::Infinity => Ok(ClusterRef::Infinity),
            Point::Datum(x) => self
                .clustering
                .cluster_of(x)
                .map(ClusterRef::Cluster)
                .ok_or(Error::UnknownMember(x)),
        }
    }

    /// Checks that `centers[i]` lies in the `i`-th cluster.
    pub fn check_centers(&self, centers: &[usize]) -> Result<()> {
        if centers.len() != self.clustering.len() {
            return Err(Error::CenterCount { expected: self.clustering.len(), got: centers.len() });
        }
        for (i, (c, &a)) in self.clustering.iter().zip(centers).enumerate() {
            if !c.contains(&a) {
                return Err(Error::CenterNotInCluster { center: a, cluster: i });
            }
        }
        Ok(())
    }
}

/// Where a new datum meets the centers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NearestCenters {
    /// `m_y`: distance to the nearest centers.
    pub distance: NormValue,
    /// Centers at distance `m_y`, sorted.
    pub centers: Vec<usize>,
    /// True when the datum lies farther from every center than the centers
    /// lie from each other, so that its path to `∞` leaves the tree of the
    /// centers above its root.
    pub above_root: bool,
}

/// `m_y` and the centers attaining it.
pub fn nearest_center_vertex(data: &[PAdicValue], centers: &[usize], y: &PAdicValue) -> Result<NearestCenters> {
    if centers.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut dist = Vec::with_capacity(centers.len());
    for &a in centers {
        let x = data.get(a).ok_or(Error::UnknownMember(a))?;
        dist.push((a, y.distance(x)?));
    }
    let distance = dist.iter().map(|d| d.1).min().unwrap();
    let mut nearest: Vec<usize> = dist.iter().filter(|d| d.1 == distance).map(|d| d.0).collect();
    nearest.sort_unstable();
    let mut spread = NormValue::Zero;
    for &a in centers {
        for &b in centers {
            spread = spread.max(data[a].distance(&data[b])?);
        }
    }
    Ok(NearestCenters { distance, centers: nearest, above_root: distance > spread })
}

/// `𝒞_y`: positions of the clusters whose center is nearest to `y`.
pub fn candidate_clusters(classification: &Classification, centers: &[usize], y: &PAdicValue) -> Result<Vec<usize>> {
    classification.check_centers(centers)?;
    let near = nearest_center_vertex(classification.data(), centers, y)?;
    Ok(centers
        .iter()
        .enumerate()
        .filter(|(_, a)| near.centers.contains(a))
        .map(|(i, _)| i)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    /// Joined the cluster of this center.
    Joined { center: usize },
    /// None of the nearest centers branches off where the datum does.
    NewClusterNoCandidate,
    /// Several candidate clusters grow by the same least energy.
    NewClusterEnergyTie,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearnStep {
    /// Index of the new datum in the extended dataset.
    pub datum: usize,
    pub nearest: NearestCenters,
    /// Centers whose nearest branching point towards the datum is the
    /// datum's own; only computed when several centers are nearest.
    pub candidates: Vec<usize>,
    #[serde(flatten)]
    pub outcome: Outcome,
    /// Energy of the cluster the datum ends up in.
    pub energy: EnergyValue,
    /// Subclusters, when the cluster was split afterwards.
    pub split: Option<Vec<Vec<usize>>>,
}

/// Outcome of [`verify_classifier`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    /// `φ`: model cluster position to classifier cluster position.
    pub phi: Option<Vec<usize>>,
    pub saturated: bool,
}

/// Checks that every model cluster lands inside a single classifier
/// cluster, and distinct model clusters in distinct ones. `∞` always maps
/// to the residue, which holds no data.
pub fn verify_classifier(clustering: &Clustering, model: &Clustering) -> Verification {
    let mut phi = Vec::with_capacity(model.len());
    for c in model.iter() {
        let home = clustering.cluster_of(c[0]);
        if home.is_none() || c.iter().any(|&x| clustering.cluster_of(x) != home) {
            return Verification { valid: false, phi: None, saturated: false };
        }
        phi.push(home.unwrap());
    }
    let distinct: BTreeSet<usize> = phi.iter().copied().collect();
    if distinct.len() != phi.len() {
        return Verification { valid: false, phi: None, saturated: false };
    }
    let saturated = distinct.len() == clustering.len();
    Verification { valid: true, phi: Some(phi), saturated }
}

#[derive(Debug, Clone)]
pub struct Classifier {
    pub dendrogram: Dendrogram,
    pub clustering: Clustering,
    /// One center per cluster, in the clustering's order.
    pub centers: Vec<usize>,
    /// The classification the classifier is checked against: the training
    /// clustering, refined by any splits.
    pub model: Clustering,
    pub verification: Verification,
    pub log: Vec<LearnStep>,
}

impl Classifier {
    /// `λ`: the classifier cluster of a point.
    pub fn classify(&self, point: Point) -> Result<ClusterRef> {
        match point {
            Point::Infinity => Ok(ClusterRef::Infinity),
            Point::Datum(x) => self
                .clustering
                .cluster_of(x)
                .map(ClusterRef::Cluster)
                .ok_or(Error::UnknownMember(x)),
        }
    }

    /// The residue `λ^(−1)(φ({∞}))`; learning never adds data to it.
    pub fn residue(&self) -> Vec<Point> {
        vec![Point::Infinity]
    }

    pub fn is_saturated(&self) -> bool {
        self.verification.saturated
    }
}

struct Phi<'a>(&'a [usize]);

impl Serialize for Phi<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len() + 1))?;
        for (i, j) in self.0.iter().enumerate() {
            m.serialize_entry(&i.to_string(), j)?;
        }
        m.serialize_entry("inf", "inf")?;
        m.end()
    }
}

impl Serialize for Classifier {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct ClusterJson<'a> {
            members: &'a [usize],
            center: usize,
        }
        let clusters: Vec<ClusterJson> = self
            .clustering
            .iter()
            .zip(&self.centers)
            .map(|(members, &center)| ClusterJson { members, center })
            .collect();
        let data: Vec<String> = self.dendrogram.data().iter().map(ToString::to_string).collect();
        let mut m = s.serialize_map(Some(8))?;
        m.serialize_entry("data", &data)?;
        m.serialize_entry("clusters", &clusters)?;
        m.serialize_entry("model", &self.model)?;
        m.serialize_entry("phi", &self.verification.phi.as_deref().map(Phi))?;
        m.serialize_entry("residue", &["inf"])?;
        m.serialize_entry("valid", &self.verification.valid)?;
        m.serialize_entry("saturated", &self.verification.saturated)?;
        m.serialize_entry("log", &self.log)?;
        m.end()
    }
}

struct Learner {
    dendrogram: Dendrogram,
    clusters: Vec<Vec<usize>>,
    centers: Vec<usize>,
    model: Vec<Vec<usize>>,
    log: Vec<LearnStep>,
}

impl Learner {
    /// `(#C − 1) · μ(C)`.
    fn energy(&self, cluster: &[usize]) -> EnergyValue {
        let mu = self.dendrogram.tree().diameter(cluster).expect("members of the dataset");
        EnergyValue::from_norm(*self.dendrogram.field(), mu, (cluster.len() - 1) as u64)
    }

    fn step(&mut self, y: PAdicValue, threshold: Option<&Threshold>) -> Result<()> {
        let near = nearest_center_vertex(self.dendrogram.data(), &self.centers, &y)?;
        let yi = self.dendrogram.insert(y)?;
        let cluster_of_center = |a: usize| self.centers.iter().position(|&c| c == a).unwrap();

        let mut candidates = Vec::new();
        let outcome = if near.centers.len() == 1 {
            Outcome::Joined { center: near.centers[0] }
        } else {
            for &a in &near.centers {
                let mut closest = NormValue::Zero;
                let mut first = true;
                for &z in near.centers.iter().filter(|&&z| z != a) {
                    let d = self.dendrogram.distance(a, z)?;
                    if first || d < closest {
                        closest = d;
                        first = false;
                    }
                }
                if closest == near.distance {
                    candidates.push(a);
                }
            }
            let mut best: Vec<(usize, EnergyValue)> = Vec::new();
            for &a in &candidates {
                let mut grown = self.clusters[cluster_of_center(a)].clone();
                grown.push(yi);
                let e = self.energy(&grown);
                match best.first().map(|b| e.compare(&b.1).expect("one field")) {
                    None | Some(Ordering::Less) => best = vec![(a, e)],
                    Some(Ordering::Equal) => best.push((a, e)),
                    Some(Ordering::Greater) => {}
                }
            }
            match best.len() {
                0 => Outcome::NewClusterNoCandidate,
                1 => Outcome::Joined { center: best[0].0 },
                _ => Outcome::NewClusterEnergyTie,
            }
        };

        let target = match outcome {
            Outcome::Joined { center } => {
                let i = cluster_of_center(center);
                self.clusters[i].push(yi);
                self.clusters[i].sort_unstable();
                i
            }
            _ => {
                self.clusters.push(vec![yi]);
                self.centers.push(yi);
                self.clusters.len() - 1
            }
        };
        let energy = self.energy(&self.clusters[target]);
        let split = match threshold {
            Some(r) if r.compare_energy(&energy) == Ordering::Greater => Some(self.split(target)?),
            _ => None,
        };
        self.log.push(LearnStep { datum: yi, nearest: near, candidates, outcome, energy, split });
        Ok(())
    }

    /// Replaces cluster `i` by the member sets of the root's children in its
    /// own dendrogram. The old center stays with its part; every other part
    /// gets a center from the greedy center search.
    fn split(&mut self, i: usize) -> Result<Vec<Vec<usize>>> {
        let cluster = self.clusters[i].clone();
        let center = self.centers[i];
        let keep: BTreeSet<usize> = cluster.iter().copied().collect();
        let sub = self
            .dendrogram
            .tree()
            .restrict(|l| keep.contains(&l))
            .expect("cluster is nonempty");
        let parts: Vec<Vec<usize>> = sub.children(sub.root()).iter().map(|c| sub.members(c).to_vec()).collect();
        self.clusters.remove(i);
        self.centers.remove(i);
        for part in &parts {
            let c = if part.contains(&center) {
                center
            } else {
                center_candidates(self.dendrogram.tree(), part)?.representative
            };
            self.clusters.push(part.clone());
            self.centers.push(c);
        }
        // the model follows the split wherever it cuts a training cluster
        let mut model = Vec::with_capacity(self.model.len() + parts.len());
        for m in &self.model {
            let outside: Vec<usize> = m.iter().copied().filter(|x| !keep.contains(x)).collect();
            for part in &parts {
                let inside: Vec<usize> = m.iter().copied().filter(|x| part.contains(x)).collect();
                if !inside.is_empty() {
                    model.push(inside);
                }
            }
            if !outside.is_empty() {
                model.push(outside);
            }
        }
        self.model = model;
        Ok(parts)
    }

    fn finish(self) -> Classifier {
        let by_cluster: BTreeMap<Vec<usize>, usize> =
            self.clusters.into_iter().zip(self.centers).collect();
        let clustering = Clustering::new(by_cluster.keys().cloned().collect()).expect("disjoint clusters");
        let centers = clustering.iter().map(|c| by_cluster[c]).collect();
        let model = Clustering::new(self.model).expect("disjoint clusters");
        let verification = verify_classifier(&clustering, &model);
        Classifier { dendrogram: self.dendrogram, clustering, centers, model, verification, log: self.log }
    }
}

fn run(
    classification: &Classification,
    centers: &[usize],
    updates: Vec<PAdicValue>,
    threshold: Option<&Threshold>,
) -> Result<Classifier> {
    classification.check_centers(centers)?;
    let mut learner = Learner {
        dendrogram: classification.dendrogram.clone(),
        clusters: classification.clustering.clusters().to_vec(),
        centers: centers.to_vec(),
        model: classification.clustering.clusters().to_vec(),
        log: Vec::new(),
    };
    for y in updates {
        learner.step(y, threshold)?;
    }
    Ok(learner.finish())
}

/// Classifies `updates` in order against the training classification.
/// `centers[i]` is the center of the `i`-th training cluster.
pub fn learn(classification: &Classification, centers: &[usize], updates: Vec<PAdicValue>) -> Result<Classifier> {
    run(classification, centers, updates, None)
}

/// As [`learn`], splitting every cluster whose energy exceeds `threshold`
/// right after it receives a datum.
pub fn adaptive_learn(
    classification: &Classification,
    centers: &[usize],
    updates: Vec<PAdicValue>,
    threshold: &Threshold,
) -> Result<Classifier> {
    run(classification, centers, updates, Some(threshold))
}
