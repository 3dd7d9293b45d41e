//! Integer Laurent polynomials in `t = p^(−1/e)`.
//!
//! The energy drop of a vertex, `δ_v = (n−1)t^ℓ − Σ (n_i − 1) t^(ℓ_i)`, does
//! not depend on the prime once written in `t`. Comparing drops across
//! primes then reduces to the sign of a difference polynomial at a point.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::energy::{EnergyDelta, EnergyValue};
use crate::padic::FieldParams;
use crate::tree::{Node, Tree, VertexId};

/// `t^shift · Σ_i coeffs[i] · t^i`, normalized so that `coeffs` neither
/// starts nor ends with a zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradientPolynomial {
    shift: i64,
    coeffs: Vec<BigInt>,
}

impl GradientPolynomial {
    pub fn zero() -> Self {
        GradientPolynomial { shift: 0, coeffs: Vec::new() }
    }

    /// From `exponent → coefficient` pairs.
    pub fn from_terms(terms: &BTreeMap<i64, BigInt>) -> Self {
        let nonzero: Vec<(i64, &BigInt)> = terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&j, c)| (j, c))
            .collect();
        let Some(&(lo, _)) = nonzero.first() else {
            return GradientPolynomial::zero();
        };
        let hi = nonzero.last().unwrap().0;
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (j, c) in nonzero {
            coeffs[(j - lo) as usize] = c.clone();
        }
        GradientPolynomial { shift: lo, coeffs }
    }

    /// The polynomial of `δ_v`.
    pub fn of_vertex(tree: &Tree, v: VertexId) -> Self {
        let vx = tree.vertex(v);
        let mut terms = BTreeMap::new();
        *terms.entry(vx.level).or_insert_with(BigInt::zero) += BigInt::from(vx.size() - 1);
        for &c in &vx.children {
            if let Node::Vertex(w) = c {
                let w = tree.vertex(w);
                *terms.entry(w.level).or_insert_with(BigInt::zero) -= BigInt::from(w.size() - 1);
            }
        }
        GradientPolynomial::from_terms(&terms)
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Coefficients after dividing off `t^shift`; `P(0)` is the first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> BTreeMap<i64, BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.shift + i as i64, c.clone()))
            .collect()
    }

    pub fn sub(&self, other: &GradientPolynomial) -> GradientPolynomial {
        let mut terms = self.terms();
        for (j, c) in other.terms() {
            *terms.entry(j).or_insert_with(BigInt::zero) -= c;
        }
        GradientPolynomial::from_terms(&terms)
    }

    /// Exact value at `t = p^(−1/e)`, including the shift.
    pub fn evaluate(&self, field: &FieldParams) -> EnergyDelta {
        let mut plus = EnergyValue::zero(*field);
        let mut minus = EnergyValue::zero(*field);
        for (j, c) in self.terms() {
            let term = EnergyValue::term(*field, j, c.magnitude().clone());
            if c.is_positive() {
                plus = plus.checked_add(&term).expect("same field");
            } else {
                minus = minus.checked_add(&term).expect("same field");
            }
        }
        EnergyDelta::new(plus, minus).expect("same field")
    }

    /// `Σ c_i t^i` without the shift, in floating point.
    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Sign of the polynomial for all small enough `t > 0`.
    pub fn sign_near_zero(&self) -> Ordering {
        self.constant_term().cmp(&BigInt::zero())
    }

    /// Order of `self` and `other` as `t → 0⁺`: the sign of the lowest
    /// coefficient of the difference.
    pub fn compare_near_zero(&self, other: &GradientPolynomial) -> Ordering {
        self.sub(other).sign_near_zero()
    }

    /// `1 + max_{i≥1} |c_i| / |c_0|`: every root `u` of the reversed
    /// polynomial (in `u = 1/t`) satisfies `|u|` below this bound, so the
    /// sign is that of `c_0` for all `0 < t ≤ 1/bound`. `None` for zero.
    pub fn reciprocal_root_bound(&self) -> Option<BigRational> {
        let c0 = self.coeffs.first()?.abs();
        let max = self.coeffs.iter().skip(1).map(Signed::abs).max().unwrap_or_default();
        Some(BigRational::one() + BigRational::new(max, c0))
    }

    /// Smallest integer `P` such that the sign at `t = p^(−1/e)` equals the
    /// sign near zero for every `p > P`. `None` for the zero polynomial.
    pub fn prime_threshold(&self, e: u32) -> Option<BigUint> {
        let bound = num_traits::pow(self.reciprocal_root_bound()?, e as usize);
        let (q, r) = bound.numer().div_rem(bound.denom());
        let ceil = if r.is_zero() { q } else { q + 1 };
        Some(ceil.to_biguint().expect("bound is positive"))
    }
}

impl fmt::Display for GradientPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&match i {
                0 => mag.to_string(),
                1 if mag.is_one() => "t".into(),
                1 => format!("{mag}t"),
                _ if mag.is_one() => format!("t^{i}"),
                _ => format!("{mag}t^{i}"),
            });
        }
        if self.shift != 0 {
            write!(f, "t^{}·({out})", self.shift)
        } else {
            write!(f, "{out}")
        }
    }
}

impl Serialize for GradientPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json {
            shift: i64,
            coeffs: Vec<String>,
        }
        Json { shift: self.shift, coeffs: self.coeffs.iter().map(ToString::to_string).collect() }
            .serialize(s)
    }
}
