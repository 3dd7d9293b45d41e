//! Random instances and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use padic_lbg::tree::RawNode;
use padic_lbg::{FieldParams, Node, NormValue, PAdicValue, Tree};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn qp(p: u64) -> FieldParams {
    FieldParams::rational(p).unwrap()
}

/// Field configurations exercised by the metric properties.
pub fn field_configs() -> Vec<FieldParams> {
    [(2, 1, 1), (3, 1, 1), (5, 1, 1), (2, 2, 1), (3, 3, 1), (2, 1, 2), (3, 2, 2)]
        .iter()
        .map(|&(p, e, f)| FieldParams::new(p, e, f).unwrap())
        .collect()
}

/// A random digit word with start index in `-2..=0` and up to `len` digits.
pub fn random_value(rng: &mut ChaCha8Rng, field: FieldParams, len: usize) -> PAdicValue {
    let start = rng.gen_range(-2..=0);
    let n = rng.gen_range(1..=len);
    let digits = (0..n).map(|_| rng.gen_range(0..field.q())).collect();
    PAdicValue::new(field, start, digits).unwrap()
}

/// `n` distinct random values; short words over a small alphabet share
/// long prefixes, which keeps the trees deep.
pub fn random_dataset(rng: &mut ChaCha8Rng, field: FieldParams, n: usize, len: usize) -> Vec<PAdicValue> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < n {
        let v = random_value(rng, field, len);
        let key = (v.trimmed().0, v.trimmed().1.to_vec());
        if seen.insert(key) {
            out.push(v);
        }
    }
    out
}

/// A random tree with at most `max_vertices` vertices, fan-out in
/// `2..=max_fan_out` and level gaps in `1..=3`. Leaves are labelled in
/// depth-first order.
pub fn random_tree(rng: &mut ChaCha8Rng, max_vertices: usize, max_fan_out: usize) -> Tree {
    let mut budget = rng.gen_range(1..=max_vertices);
    let mut next = 0;
    let raw = random_raw(rng, 0, &mut budget, max_fan_out, &mut next);
    Tree::from_raw(raw).unwrap()
}

fn random_raw(
    rng: &mut ChaCha8Rng,
    level: i64,
    budget: &mut usize,
    max_fan_out: usize,
    next: &mut usize,
) -> RawNode {
    *budget -= 1;
    let k = rng.gen_range(2..=max_fan_out);
    let mut children = Vec::with_capacity(k);
    for _ in 0..k {
        if *budget > 0 && rng.gen_bool(0.5) {
            let gap = rng.gen_range(1..=3);
            children.push(random_raw(rng, level + gap, budget, max_fan_out, next));
        } else {
            children.push(RawNode::Leaf(*next));
            *next += 1;
        }
    }
    RawNode::Internal(level, children)
}

/// Every set of disjoint nodes covering all leaves: the verticial
/// clusterings of the tree, as node lists.
pub fn all_cuts(tree: &Tree) -> Vec<Vec<Node>> {
    fn cuts(tree: &Tree, node: Node) -> Vec<Vec<Node>> {
        let mut out = vec![vec![node]];
        if let Node::Vertex(_) = node {
            let mut acc: Vec<Vec<Node>> = vec![Vec::new()];
            for &c in tree.children(node) {
                let sub = cuts(tree, c);
                acc = acc
                    .iter()
                    .flat_map(|a| {
                        sub.iter().map(move |s| {
                            let mut v = a.clone();
                            v.extend_from_slice(s);
                            v
                        })
                    })
                    .collect();
            }
            out.extend(acc);
        }
        out
    }
    cuts(tree, tree.root())
}

/// `p^(−j)` as a rational.
pub fn p_pow(p: u64, j: i64) -> BigRational {
    let base = BigInt::from(p);
    if j >= 0 {
        BigRational::new(BigInt::one(), num_traits::pow(base, j as usize))
    } else {
        BigRational::from_integer(num_traits::pow(base, (-j) as usize))
    }
}

/// `|x − y|` over an unramified field, from the digits alone: the first
/// index where the words differ.
pub fn norm_rational(p: u64, n: NormValue) -> BigRational {
    match n {
        NormValue::Zero => BigRational::zero(),
        NormValue::Pow(j) => p_pow(p, j),
    }
}

/// `Σ (#C_v − 1)·μ(v)` over a node list, with μ read off brute-force
/// pairwise distances of the members.
pub fn cut_energy(tree: &Tree, data: &[PAdicValue], p: u64, nodes: &[Node]) -> BigRational {
    nodes
        .iter()
        .map(|n| {
            let members = tree.members(n);
            let mu = brute_diameter(data, members);
            norm_rational(p, mu) * BigRational::from_integer((members.len() as i64 - 1).into())
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

pub fn brute_diameter(data: &[PAdicValue], members: &[usize]) -> NormValue {
    let mut mu = NormValue::Zero;
    for &a in members {
        for &b in members {
            mu = mu.max(data[a].distance(&data[b]).unwrap());
        }
    }
    mu
}

/// `v_p(n)` by repeated division.
pub fn valuation(p: u64, n: &BigInt) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.clone();
    let p = BigInt::from(p);
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    Some(v)
}

/// `Σ_{a∈C} |a − α|` for an unramified field, by brute force.
pub fn brute_epsilon(data: &[PAdicValue], p: u64, cluster: &[usize], alpha: usize) -> BigRational {
    cluster
        .iter()
        .map(|&a| norm_rational(p, data[a].distance(&data[alpha]).unwrap()))
        .fold(BigRational::zero(), |x, y| x + y)
}

/// All minimizers of [`brute_epsilon`].
pub fn brute_centers(data: &[PAdicValue], p: u64, cluster: &[usize]) -> Vec<usize> {
    let values: Vec<(usize, BigRational)> =
        cluster.iter().map(|&a| (a, brute_epsilon(data, p, cluster, a))).collect();
    let best = values.iter().map(|v| v.1.clone()).min().unwrap();
    let mut out: Vec<usize> = values.into_iter().filter(|v| v.1 == best).map(|v| v.0).collect();
    out.sort_unstable();
    out
}

/// A random subset of `0..n` of the given size.
pub fn random_subset(rng: &mut ChaCha8Rng, n: usize, size: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let mut out = all[..size].to_vec();
    out.sort_unstable();
    out
}

pub fn biguint(n: u64) -> BigUint {
    BigUint::from(n)
}
