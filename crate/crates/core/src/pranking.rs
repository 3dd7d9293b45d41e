//! Rankings of vertices by their energy drop `δ_v`, for one prime or in the
//! limit of large primes.
//!
//! Written in `t = p^(−1/e)`, every `δ_v` is a fixed integer polynomial, so
//! the ranking at a prime is the order of these polynomials at one point and
//! the limit ranking is their order as `t → 0⁺`. A root bound on every
//! pairwise difference gives a prime beyond which the two agree.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::energy::{delta, EnergyDelta};
use crate::error::{Error, Result};
use crate::fixtures::ReferenceCell;
use crate::padic::FieldParams;
use crate::poly::GradientPolynomial;
use crate::primes::{is_prime, primes};
use crate::tree::{Tree, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub struct RankGroup {
    pub vertices: Vec<VertexId>,
    pub polynomial: GradientPolynomial,
    /// Exact drop at the ranking's prime; absent for the limit ranking.
    pub delta: Option<EnergyDelta>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    /// `None` for the limit ranking.
    pub prime: Option<u64>,
    pub groups: Vec<RankGroup>,
}

impl Ranking {
    /// Vertex ids per rank, highest drop first.
    pub fn order(&self) -> Vec<Vec<VertexId>> {
        self.groups.iter().map(|g| g.vertices.clone()).collect()
    }

    pub fn rank_of(&self, v: VertexId) -> Option<usize> {
        self.groups.iter().position(|g| g.vertices.contains(&v))
    }
}

impl Serialize for Ranking {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ranks: Vec<Vec<usize>> = self
            .groups
            .iter()
            .map(|g| g.vertices.iter().map(|v| v.0).collect())
            .collect();
        let deltas: BTreeMap<String, &EnergyDelta> = self
            .groups
            .iter()
            .filter_map(|g| g.delta.as_ref().map(|d| (g, d)))
            .flat_map(|(g, d)| g.vertices.iter().map(move |v| (v.to_string(), d)))
            .collect();
        let polys: BTreeMap<String, &GradientPolynomial> = self
            .groups
            .iter()
            .flat_map(|g| g.vertices.iter().map(move |v| (v.to_string(), &g.polynomial)))
            .collect();
        let mut st = s.serialize_struct("Ranking", 4)?;
        st.serialize_field("prime", &self.prime)?;
        st.serialize_field("ranks", &ranks)?;
        st.serialize_field("delta", &deltas)?;
        st.serialize_field("polynomial", &polys)?;
        st.end()
    }
}

fn polynomials(tree: &Tree) -> Result<Vec<(VertexId, GradientPolynomial)>> {
    if tree.vertex_count() == 0 {
        return Err(Error::NoVertices);
    }
    Ok(tree
        .vertices()
        .iter()
        .map(|v| (v.id, GradientPolynomial::of_vertex(tree, v.id)))
        .collect())
}

/// Sorts items descending by `cmp` (stable in vertex id) and groups equal
/// neighbours.
fn group_desc<T>(mut items: Vec<T>, cmp: impl Fn(&T, &T) -> Ordering) -> Vec<Vec<T>> {
    items.sort_by(|a, b| cmp(b, a));
    let mut groups: Vec<Vec<T>> = Vec::new();
    for item in items {
        match groups.last_mut() {
            Some(g) if cmp(&g[0], &item) == Ordering::Equal => g.push(item),
            _ => groups.push(vec![item]),
        }
    }
    groups
}

/// The ranking at prime `p` with ramification `e`: vertices by exact
/// `δ_v` descending, exact ties grouped.
pub fn p_ranking(tree: &Tree, p: u64, e: u32) -> Result<Ranking> {
    let field = FieldParams::new(p, e, 1)?;
    let items: Vec<(VertexId, GradientPolynomial, EnergyDelta)> = polynomials(tree)?
        .into_iter()
        .map(|(v, poly)| (v, poly, delta(tree, &field, v)))
        .collect();
    let groups = group_desc(items, |a, b| a.2.compare(&b.2).expect("one field"))
        .into_iter()
        .map(|g| RankGroup {
            vertices: g.iter().map(|x| x.0).collect(),
            polynomial: g[0].1.clone(),
            delta: Some(g[0].2.clone()),
        })
        .collect();
    Ok(Ranking { prime: Some(p), groups })
}

/// The ranking all large primes share: drops compared as `t → 0⁺`.
///
/// The lowest term of `δ_v` is `(#C_v − 1) t^ℓ(v)`, so this is level
/// ascending, then size descending; vertices that agree there are ordered
/// by the next differing coefficient, and only identical polynomials tie.
pub fn asymptotic_ranking(tree: &Tree) -> Result<Ranking> {
    let groups = group_desc(polynomials(tree)?, |a, b| a.1.compare_near_zero(&b.1))
        .into_iter()
        .map(|g| RankGroup {
            vertices: g.iter().map(|x| x.0).collect(),
            polynomial: g[0].1.clone(),
            delta: None,
        })
        .collect();
    Ok(Ranking { prime: None, groups })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationBound {
    /// Every prime above this ranks like [`asymptotic_ranking`].
    pub bound: u64,
    /// Vertex pairs with identical drop polynomials, tied at every prime.
    pub permanent_ties: Vec<(VertexId, VertexId)>,
}

/// A prime bound beyond which the ranking no longer changes, from the
/// Cauchy bound of every pairwise difference in `u = 1/t`.
pub fn stabilization_bound(tree: &Tree, e: u32) -> Result<StabilizationBound> {
    let polys = polynomials(tree)?;
    let mut bound = BigUint::from(1u32);
    let mut permanent_ties = Vec::new();
    for (i, (v, pv)) in polys.iter().enumerate() {
        for (w, pw) in &polys[i + 1..] {
            match pv.sub(pw).prime_threshold(e) {
                None => permanent_ties.push((*v, *w)),
                Some(b) => bound = bound.max(b),
            }
        }
    }
    Ok(StabilizationBound { bound: bound.to_u64().unwrap_or(u64::MAX), permanent_ties })
}

/// The smallest prime from which on every ranking equals the limit
/// ranking, found by checking each prime up to the bound. Agreement is not
/// monotone in `p`, so the scan cannot stop early.
pub fn exact_stabilization_prime(tree: &Tree, e: u32) -> Result<u64> {
    let limit = asymptotic_ranking(tree)?.order();
    let bound = stabilization_bound(tree, e)?.bound;
    let mut last_bad = None;
    for p in primes().take_while(|&p| p <= bound) {
        if p_ranking(tree, p, e)?.order() != limit {
            last_bad = Some(p);
        }
    }
    Ok(match last_bad {
        None => 2,
        Some(p) => crate::primes::next_prime(p),
    })
}

/// A printed value that differs from the recomputed one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub name: String,
    pub vertex: VertexId,
    pub prime: u64,
    pub published: String,
    pub computed: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingTable {
    pub rankings: Vec<Ranking>,
    pub asymptotic: Ranking,
    pub stabilization: StabilizationBound,
    pub discrepancies: Vec<Discrepancy>,
}

/// Rankings at each prime, the limit ranking, and a comparison against
/// optional reference values.
pub fn ranking_table(tree: &Tree, primes: &[u64], e: u32, reference: &[ReferenceCell]) -> Result<RankingTable> {
    if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::NotPrime(p));
    }
    let rankings = primes
        .iter()
        .map(|&p| p_ranking(tree, p, e))
        .collect::<Result<Vec<_>>>()?;
    let mut discrepancies = Vec::new();
    for cell in reference {
        let Some(r) = rankings.iter().find(|r| r.prime == Some(cell.prime)) else { continue };
        let Some(g) = r.groups.iter().find(|g| g.vertices.contains(&cell.vertex)) else { continue };
        let exact = g.delta.as_ref().and_then(EnergyDelta::to_rational);
        if exact.as_ref() != Some(&cell.value) {
            discrepancies.push(Discrepancy {
                name: cell.name.clone(),
                vertex: cell.vertex,
                prime: cell.prime,
                published: cell.value.to_string(),
                computed: g.delta.as_ref().map(ToString::to_string).unwrap_or_default(),
            });
        }
    }
    Ok(RankingTable {
        rankings,
        asymptotic: asymptotic_ranking(tree)?,
        stabilization: stabilization_bound(tree, e)?,
        discrepancies,
    })
}
