//! Exact energies `Σ A_j · p^(−j/e)` and the energy functionals built on
//! them.
//!
//! For `e = 1` every value is a rational with a power of `p` as denominator
//! and comparison is cross-multiplication. For `e > 1` a signed combination
//! is grouped by `j mod e` into rational components along the basis
//! `1, s, …, s^(e−1)` with `s = p^(−1/e)`. These are linearly independent
//! over the rationals (`x^e − p` is Eisenstein), so the combination is zero
//! exactly when every component is. A nonzero combination gets its sign from
//! rational interval bounds on `s`, refined until the interval excludes zero.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::{FieldParams, NormValue};
use crate::partition::Clustering;
use crate::tree::{Node, Tree, VertexId};

#[derive(Debug, Clone)]
pub struct EnergyValue {
    field: FieldParams,
    terms: BTreeMap<i64, BigUint>,
}

impl EnergyValue {
    pub fn zero(field: FieldParams) -> Self {
        EnergyValue { field, terms: BTreeMap::new() }
    }

    /// `coeff · p^(−j/e)`.
    pub fn term(field: FieldParams, j: i64, coeff: impl Into<BigUint>) -> Self {
        let mut out = EnergyValue::zero(field);
        out.add_term(j, coeff.into());
        out
    }

    /// `coeff · norm`; zero when the norm is.
    pub fn from_norm(field: FieldParams, norm: NormValue, coeff: impl Into<BigUint>) -> Self {
        match norm {
            NormValue::Zero => EnergyValue::zero(field),
            NormValue::Pow(j) => EnergyValue::term(field, j, coeff),
        }
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    /// Nonzero coefficients by exponent index.
    pub fn terms(&self) -> &BTreeMap<i64, BigUint> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, j: i64, coeff: BigUint) {
        if coeff.is_zero() {
            return;
        }
        *self.terms.entry(j).or_default() += coeff;
    }

    pub fn checked_add(&self, other: &EnergyValue) -> Result<EnergyValue> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut out = self.clone();
        for (&j, c) in &other.terms {
            out.add_term(j, c.clone());
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: &BigUint) -> EnergyValue {
        let mut out = EnergyValue::zero(self.field);
        for (&j, c) in &self.terms {
            out.add_term(j, c * factor);
        }
        out
    }

    pub fn compare(&self, other: &EnergyValue) -> Result<Ordering> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut diff: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (&j, c) in &self.terms {
            *diff.entry(j).or_default() += BigInt::from(c.clone());
        }
        for (&j, c) in &other.terms {
            *diff.entry(j).or_default() -= BigInt::from(c.clone());
        }
        Ok(sign_of(&self.field, &diff))
    }

    /// The exact value as a rational, available when `e = 1`.
    pub fn to_rational(&self) -> Option<BigRational> {
        (self.field.e() == 1).then(|| rational_value(self.field.p(), &signed(&self.terms, 1)))
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&j, c)| c.to_f64().unwrap_or(f64::INFINITY) * self.field.power_to_f64(j))
            .sum()
    }

    /// Sum of a sequence of energies over one field.
    pub fn sum<'a>(field: FieldParams, items: impl IntoIterator<Item = &'a EnergyValue>) -> Result<Self> {
        items
            .into_iter()
            .try_fold(EnergyValue::zero(field), |acc, x| acc.checked_add(x))
    }
}

impl PartialEq for EnergyValue {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ok(Ordering::Equal)
    }
}

impl PartialOrd for EnergyValue {
    /// `None` only when the fields differ.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other).ok()
    }
}

impl fmt::Display for EnergyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&j, c)| match j {
                0 => c.to_string(),
                _ => format!("{c}*{}^({}/{})", self.field.p(), -j, self.field.e()),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct TermJson {
    j: i64,
    coeff: String,
}

impl Serialize for EnergyValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(&j, c)| TermJson { j, coeff: c.to_string() })
            .collect();
        let mut st = s.serialize_struct("EnergyValue", 3)?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("decimal", &self.to_f64())?;
        st.end()
    }
}

fn signed(terms: &BTreeMap<i64, BigUint>, sign: i32) -> BTreeMap<i64, BigInt> {
    terms
        .iter()
        .map(|(&j, c)| {
            let c = BigInt::from(c.clone());
            (j, if sign < 0 { -c } else { c })
        })
        .collect()
}

fn p_power(p: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), exp as usize)
}

/// `Σ c_j p^(−j)` as a rational.
fn rational_value(p: u64, terms: &BTreeMap<i64, BigInt>) -> BigRational {
    let Some(&top) = terms.keys().next_back() else {
        return BigRational::zero();
    };
    let numer: BigInt = terms
        .iter()
        .map(|(&j, c)| c * p_power(p, (top - j) as u64))
        .sum();
    if top >= 0 {
        BigRational::new(numer, p_power(p, top as u64))
    } else {
        BigRational::from_integer(numer * p_power(p, (-top) as u64))
    }
}

/// Exact sign of `Σ c_j p^(−j/e)`.
pub(crate) fn sign_of(field: &FieldParams, terms: &BTreeMap<i64, BigInt>) -> Ordering {
    let (p, e) = (field.p(), field.e() as i64);
    if e == 1 {
        let Some(&top) = terms.keys().next_back() else {
            return Ordering::Equal;
        };
        let numer: BigInt = terms
            .iter()
            .map(|(&j, c)| c * p_power(p, (top - j) as u64))
            .sum();
        return numer.sign_ordering();
    }
    // component r collects c_j p^(−(j − r)/e) for j ≡ r mod e
    let mut components: Vec<BTreeMap<i64, BigInt>> = vec![BTreeMap::new(); e as usize];
    for (&j, c) in terms {
        let r = j.rem_euclid(e);
        *components[r as usize].entry((j - r) / e).or_default() += c;
    }
    let comps: Vec<BigRational> = components.iter().map(|m| rational_value(p, m)).collect();
    if comps.iter().all(Zero::is_zero) {
        return Ordering::Equal;
    }
    let mut bits = 64u32;
    loop {
        let (lo, hi) = s_bounds(p, e as u32, bits);
        let (mut sum_lo, mut sum_hi) = (BigRational::zero(), BigRational::zero());
        let (mut pow_lo, mut pow_hi) = (BigRational::one(), BigRational::one());
        for c in &comps {
            if c.is_positive() {
                sum_lo += c * &pow_lo;
                sum_hi += c * &pow_hi;
            } else {
                sum_lo += c * &pow_hi;
                sum_hi += c * &pow_lo;
            }
            pow_lo *= &lo;
            pow_hi *= &hi;
        }
        if sum_lo.is_positive() {
            return Ordering::Greater;
        }
        if sum_hi.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

/// Rational bounds `lo ≤ p^(−1/e) ≤ hi` with about `bits` bits of precision.
fn s_bounds(p: u64, e: u32, bits: u32) -> (BigRational, BigRational) {
    let scale = BigUint::one() << bits;
    let r = (BigUint::from(p) << (bits as usize * e as usize)).nth_root(e);
    let scale = BigInt::from(scale);
    let r = BigInt::from(r);
    (
        BigRational::new(scale.clone(), &r + 1),
        BigRational::new(scale, r),
    )
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        match self.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// A signed energy `plus − minus`.
#[derive(Debug, Clone)]
pub struct EnergyDelta {
    plus: EnergyValue,
    minus: EnergyValue,
}

impl EnergyDelta {
    pub fn new(plus: EnergyValue, minus: EnergyValue) -> Result<Self> {
        if plus.field != minus.field {
            return Err(Error::FieldMismatch);
        }
        Ok(EnergyDelta { plus, minus })
    }

    pub fn plus(&self) -> &EnergyValue {
        &self.plus
    }

    pub fn minus(&self) -> &EnergyValue {
        &self.minus
    }

    pub fn field(&self) -> &FieldParams {
        &self.plus.field
    }

    fn combined(&self) -> BTreeMap<i64, BigInt> {
        let mut out = signed(&self.plus.terms, 1);
        for (j, c) in signed(&self.minus.terms, -1) {
            *out.entry(j).or_default() += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Coefficients of the signed combination by exponent index.
    pub fn coefficients(&self) -> BTreeMap<i64, BigInt> {
        self.combined()
    }

    pub fn sign(&self) -> Ordering {
        sign_of(self.field(), &self.combined())
    }

    pub fn compare(&self, other: &EnergyDelta) -> Result<Ordering> {
        let left = self.plus.checked_add(&other.minus)?;
        let right = self.minus.checked_add(&other.plus)?;
        left.compare(&right)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        (self.field().e() == 1).then(|| rational_value(self.field().p(), &self.combined()))
    }

    pub fn to_f64(&self) -> f64 {
        self.plus.to_f64() - self.minus.to_f64()
    }
}

impl PartialEq for EnergyDelta {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ok(Ordering::Equal)
    }
}

impl fmt::Display for EnergyDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "({}) - ({})", self.plus, self.minus),
        }
    }
}

impl Serialize for EnergyDelta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let exact = self.to_rational().map(|r| r.to_string());
        let mut st = s.serialize_struct("EnergyDelta", 4)?;
        st.serialize_field("plus", &self.plus)?;
        st.serialize_field("minus", &self.minus)?;
        st.serialize_field("exact", &exact)?;
        st.serialize_field("decimal", &self.to_f64())?;
        st.end()
    }
}

/// A positive threshold, written `p^-j`, `a/b` or as an integer.
///
/// `p^-j` stands for `p^(−j)` in the base field, which is exponent index
/// `j·e` once a field is fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    PrimePower(i64),
    Rational(BigRational),
}

impl Threshold {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::InvalidThreshold(text.to_string());
        if let Some(rest) = t.strip_prefix("p^") {
            let rest = rest.trim_start_matches('(').trim_end_matches(')');
            let exp: i64 = rest.parse().map_err(|_| bad())?;
            return Ok(Threshold::PrimePower(-exp));
        }
        let value = match t.split_once('/') {
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                if b.is_zero() {
                    return Err(bad());
                }
                BigRational::new(a, b)
            }
            None => BigRational::from_integer(t.parse().map_err(|_| bad())?),
        };
        if value.is_negative() {
            return Err(bad());
        }
        Ok(Threshold::Rational(value))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Threshold::Rational(r) if r.is_zero())
    }

    /// Exact order of `value` relative to the threshold.
    pub fn compare_energy(&self, value: &EnergyValue) -> Ordering {
        let field = value.field;
        match self {
            Threshold::PrimePower(j) => {
                let t = EnergyValue::term(field, j * field.e() as i64, 1u32);
                value.compare(&t).expect("same field")
            }
            Threshold::Rational(r) => {
                let mut terms: BTreeMap<i64, BigInt> = value
                    .terms
                    .iter()
                    .map(|(&j, c)| (j, BigInt::from(c.clone()) * r.denom()))
                    .collect();
                *terms.entry(0).or_default() -= r.numer();
                sign_of(&field, &terms)
            }
        }
    }

    /// `value < threshold`, the strict test used for quasi-singletons.
    pub fn exceeds(&self, value: &EnergyValue) -> bool {
        self.compare_energy(value) == Ordering::Less
    }

    pub fn to_f64(&self, field: &FieldParams) -> f64 {
        match self {
            Threshold::PrimePower(j) => field.power_to_f64(j * field.e() as i64),
            Threshold::Rational(r) => r.to_f64().unwrap_or(f64::INFINITY),
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::PrimePower(j) => write!(f, "p^{}", -j),
            Threshold::Rational(r) => write!(f, "{r}"),
        }
    }
}

impl std::str::FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Threshold::parse(s)
    }
}

/// `(#C_v − 1) · μ(v)`; zero for ends.
pub fn vertex_energy(tree: &Tree, field: &FieldParams, node: Node) -> EnergyValue {
    EnergyValue::from_norm(*field, tree.mu(node), (tree.size(node) - 1) as u64)
}

/// `E(V) = Σ_{v∈V} (#C_v − 1) · μ(v)`.
pub fn family_energy(tree: &Tree, field: &FieldParams, nodes: &[Node]) -> EnergyValue {
    let mut out = EnergyValue::zero(*field);
    for &n in nodes {
        let e = vertex_energy(tree, field, n);
        for (j, c) in e.terms {
            out.add_term(j, c);
        }
    }
    out
}

/// `Σ_C (#C − 1) · μ(C_v)` where `C_v` is the smallest disk containing `C`.
pub fn clustering_energy(tree: &Tree, field: &FieldParams, clustering: &Clustering) -> Result<EnergyValue> {
    let mut out = EnergyValue::zero(*field);
    for c in clustering.iter() {
        let disk = tree.lca(c)?;
        let e = EnergyValue::from_norm(*field, tree.mu(disk), (c.len() - 1) as u64);
        out = out.checked_add(&e)?;
    }
    Ok(out)
}

/// `E_p(X, 𝒞, a) = Σ_C Σ_{x∈C} |x − a_C|`, with `centers[i]` the center of
/// the `i`-th cluster in canonical order.
pub fn pointed_energy(
    tree: &Tree,
    field: &FieldParams,
    clustering: &Clustering,
    centers: &[usize],
) -> Result<EnergyValue> {
    if centers.len() != clustering.len() {
        return Err(Error::CenterCount { expected: clustering.len(), got: centers.len() });
    }
    let mut out = EnergyValue::zero(*field);
    for (i, (c, &a)) in clustering.iter().zip(centers).enumerate() {
        if !c.contains(&a) {
            return Err(Error::CenterNotInCluster { center: a, cluster: i });
        }
        for &x in c {
            if let NormValue::Pow(j) = tree.diameter(&[a, x])? {
                out.add_term(j, BigUint::one());
            }
        }
    }
    Ok(out)
}

/// `δ_v E = E(v) − E(ch v)`.
pub fn delta(tree: &Tree, field: &FieldParams, v: VertexId) -> EnergyDelta {
    let node = Node::Vertex(v);
    EnergyDelta {
        plus: vertex_energy(tree, field, node),
        minus: family_energy(tree, field, tree.children(node)),
    }
}

/// True when `finer` refines `coarser`.
pub fn is_refinement(finer: &Clustering, coarser: &Clustering) -> Result<bool> {
    finer.refines(coarser)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::AbstractDendrogram;

    fn qp(p: u64) -> FieldParams {
        FieldParams::rational(p).unwrap()
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn thirteen() -> Tree {
        AbstractDendrogram::parse("(0 (1 (2 L L) (2 L L)) (1 (2 L L) (2 (3 L L)(3 L L)(3 L L L))))")
            .unwrap()
            .into_tree()
    }

    #[test]
    fn rational_compare() {
        let f = qp(2);
        let a = EnergyValue::term(f, 1, 11u32);
        let b = EnergyValue::term(f, 0, 12u32);
        assert_eq!(a.compare(&b), Ok(Ordering::Less));
        assert_eq!(a.to_rational(), Some(ratio(11, 2)));
        let sum = a.checked_add(&b).unwrap();
        assert_eq!(sum.compare(&sum.clone()), Ok(Ordering::Equal));
        // 2·2^-1 = 1
        assert_eq!(EnergyValue::term(f, 1, 2u32), EnergyValue::term(f, 0, 1u32));
        assert_eq!(EnergyValue::term(f, -2, 1u32).to_rational(), Some(ratio(4, 1)));
    }

    #[test]
    fn ramified_compare() {
        let f = FieldParams::new(2, 2, 1).unwrap();
        // 3·2^(-1/2) ≈ 2.121 < 2 + 2^(-1) = 2.5
        let a = EnergyValue::term(f, 1, 3u32);
        let b = EnergyValue::term(f, 0, 2u32).checked_add(&EnergyValue::term(f, 2, 1u32)).unwrap();
        assert_eq!(a.compare(&b), Ok(Ordering::Less));
        // 2·2^(-2/2) = 1 exactly
        assert_eq!(EnergyValue::term(f, 2, 2u32), EnergyValue::term(f, 0, 1u32));
        assert!((a.to_f64() - 2.1213203435596424).abs() < 1e-12);
    }

    #[test]
    fn close_irrational_values() {
        // 99·3^(-1/3) ≈ 68.64 against 69 and 68
        let f = FieldParams::new(3, 3, 1).unwrap();
        let a = EnergyValue::term(f, 1, 99u32);
        assert_eq!(a.compare(&EnergyValue::term(f, 0, 69u32)), Ok(Ordering::Less));
        assert_eq!(a.compare(&EnergyValue::term(f, 0, 68u32)), Ok(Ordering::Greater));
        // 1393·2^(-1/2) ≈ 984.99975, just below 985
        let g = FieldParams::new(2, 2, 1).unwrap();
        let x = EnergyValue::term(g, 1, 1393u32);
        assert_eq!(x.compare(&EnergyValue::term(g, 0, 985u32)), Ok(Ordering::Less));
        assert_eq!(x.compare(&EnergyValue::term(g, 0, 984u32)), Ok(Ordering::Greater));
    }

    #[test]
    fn field_mismatch() {
        let a = EnergyValue::term(qp(2), 0, 1u32);
        let b = EnergyValue::term(qp(3), 0, 1u32);
        assert_eq!(a.compare(&b), Err(Error::FieldMismatch));
        assert_eq!(a.partial_cmp(&b), None);
    }

    #[test]
    fn json_shape() {
        let v = EnergyValue::term(qp(3), 1, 11u32);
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["terms"][0]["j"], 1);
        assert_eq!(json["terms"][0]["coeff"], "11");
        assert!((json["decimal"].as_f64().unwrap() - 11.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn thirteen_point_energies() {
        let t = thirteen();
        let f = qp(3);
        let root = t.root();
        assert_eq!(vertex_energy(&t, &f, root), EnergyValue::term(f, 0, 12u32));
        assert!(vertex_energy(&t, &f, Node::End(0)).is_zero());
        let ch = t.children(root).to_vec();
        assert_eq!(family_energy(&t, &f, &ch), EnergyValue::term(f, 1, 11u32));
        let c = t.children(ch[1]).to_vec();
        assert_eq!(family_energy(&t, &f, &c), EnergyValue::term(f, 2, 7u32));
        assert!(family_energy(&t, &f, &[]).is_zero());
    }

    #[test]
    fn deltas_of_thirteen_point_tree() {
        let t = thirteen();
        for (p, a, b, c, d) in [
            (2, ratio(13, 2), ratio(1, 1), ratio(9, 4), ratio(1, 1)),
            (3, ratio(25, 3), ratio(7, 9), ratio(17, 9), ratio(14, 27)),
            (5, ratio(49, 5), ratio(13, 25), ratio(33, 25), ratio(26, 125)),
        ] {
            let f = qp(p);
            let got: Vec<_> = [0, 1, 4, 6]
                .iter()
                .map(|&i| delta(&t, &f, VertexId(i)).to_rational().unwrap())
                .collect();
            assert_eq!(got, vec![a, b, c, d], "p = {p}");
        }
    }

    #[test]
    fn clustering_energy_uses_smallest_disk() {
        let flat = AbstractDendrogram::parse("(0 L L L)").unwrap().into_tree();
        let f = qp(3);
        let c = Clustering::new(vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(clustering_energy(&flat, &f, &c).unwrap(), EnergyValue::term(f, 0, 1u32));
        assert!(clustering_energy(&flat, &f, &Clustering::singletons(0..3)).unwrap().is_zero());
    }

    #[test]
    fn pointed_energy_of_four_points() {
        let t = AbstractDendrogram::parse("(0 (2 L L) (1 L L))").unwrap().into_tree();
        let f = qp(2);
        let whole = Clustering::whole(0..4);
        let e = pointed_energy(&t, &f, &whole, &[0]).unwrap();
        let expected = EnergyValue::term(f, 2, 1u32).checked_add(&EnergyValue::term(f, 0, 2u32)).unwrap();
        assert_eq!(e, expected);
        assert_eq!(
            pointed_energy(&t, &f, &whole, &[0, 1]),
            Err(Error::CenterCount { expected: 1, got: 2 })
        );
        let split = Clustering::new(vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(
            pointed_energy(&t, &f, &split, &[0, 1]),
            Err(Error::CenterNotInCluster { center: 1, cluster: 1 })
        );
    }

    #[test]
    fn thresholds() {
        let f = qp(2);
        let eps = Threshold::parse("p^-1").unwrap();
        assert_eq!(eps, Threshold::PrimePower(1));
        assert!(eps.exceeds(&EnergyValue::term(f, 4, 1u32)));
        assert!(!eps.exceeds(&EnergyValue::term(f, 1, 1u32)));
        assert!(eps.exceeds(&EnergyValue::zero(f)));
        let half = Threshold::parse("1/2").unwrap();
        assert_eq!(half.compare_energy(&EnergyValue::term(f, 1, 1u32)), Ordering::Equal);
        assert_eq!(Threshold::parse("3").unwrap().compare_energy(&EnergyValue::term(f, 0, 2u32)), Ordering::Less);
        assert!(Threshold::parse("0").unwrap().is_zero());
        assert!(Threshold::parse("-1").is_err());
        assert!(Threshold::parse("1/0").is_err());
        assert!(Threshold::parse("abc").is_err());
        // with e = 2, p^-1 is index 2
        let g = FieldParams::new(3, 2, 1).unwrap();
        assert_eq!(eps.compare_energy(&EnergyValue::term(g, 2, 1u32)), Ordering::Equal);
        assert_eq!(eps.to_string(), "p^-1");
    }

    #[test]
    fn delta_compare_and_json() {
        let t = thirteen();
        let f = qp(2);
        let b = delta(&t, &f, VertexId(1));
        let d = delta(&t, &f, VertexId(6));
        assert_eq!(b.compare(&d), Ok(Ordering::Equal));
        assert_eq!(b.sign(), Ordering::Greater);
        let json = serde_json::to_value(&b).unwrap();
        assert_eq!(json["exact"], "1");
    }
}
