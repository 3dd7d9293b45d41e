//! Finite digit expansions and the ultrametric they carry.
//!
//! A [`PAdicValue`] is a finite word `α_m, α_{m+1}, …` of formal digits in
//! `{0, …, q−1}` attached to consecutive powers of a uniformiser, starting at
//! some (possibly negative) index `m`. Only the metric is modelled: the
//! distance of two words is `p^(−j/e)` where `j` is the first index at which
//! their zero-extended digit sequences differ. No field arithmetic is
//! provided, and none is needed by any algorithm in this crate.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::primes::is_prime;

/// Prime `p`, ramification degree `e` and residue degree `f` of the field the
/// data live in. Digits range over an alphabet of `q = p^f` symbols and the
/// uniformiser has norm `p^(−1/e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FieldParams {
    p: u64,
    e: u32,
    f: u32,
    #[serde(skip)]
    q: u64,
}

impl FieldParams {
    pub fn new(p: u64, e: u32, f: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidField("ramification degree must be at least 1".into()));
        }
        if f == 0 {
            return Err(Error::InvalidField("residue degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(f)
            .ok_or_else(|| Error::InvalidField(format!("alphabet size {p}^{f} does not fit in 64 bits")))?;
        Ok(FieldParams { p, e, f, q })
    }

    /// The unramified field with residue field `F_p`, i.e. `Q_p` itself.
    pub fn rational(p: u64) -> Result<Self> {
        Self::new(p, 1, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// Alphabet size `p^f`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Floating approximation of `p^(−j/e)`.
    pub fn power_to_f64(&self, j: i64) -> f64 {
        (self.p as f64).powf(-(j as f64) / self.e as f64)
    }
}

impl fmt::Display for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} e={} f={}", self.p, self.e, self.f)
    }
}

/// A value of the norm: either zero or `p^(−j/e)` for an integer exponent `j`.
///
/// Ordered as real numbers: `Zero` is the least element and a larger
/// exponent means a smaller norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormValue {
    Zero,
    Pow(i64),
}

impl NormValue {
    pub const ONE: NormValue = NormValue::Pow(0);

    pub fn exponent(&self) -> Option<i64> {
        match *self {
            NormValue::Zero => None,
            NormValue::Pow(j) => Some(j),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NormValue::Zero)
    }

    pub fn to_f64(&self, field: &FieldParams) -> f64 {
        match *self {
            NormValue::Zero => 0.0,
            NormValue::Pow(j) => field.power_to_f64(j),
        }
    }
}

impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NormValue::Zero, NormValue::Zero) => Ordering::Equal,
            (NormValue::Zero, NormValue::Pow(_)) => Ordering::Less,
            (NormValue::Pow(_), NormValue::Zero) => Ordering::Greater,
            (NormValue::Pow(a), NormValue::Pow(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Zero => write!(f, "0"),
            NormValue::Pow(j) => write!(f, "p^({})", -j),
        }
    }
}

impl Serialize for NormValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NormValue::Zero => s.serialize_none(),
            NormValue::Pow(j) => s.serialize_i64(*j),
        }
    }
}

/// A finite expansion `Σ α_i π^i` over the formal digit alphabet.
///
/// `digits[k]` is the coefficient at index `start + k`; every index outside
/// the stored range carries the digit zero. Equality and hashing ignore
/// leading and trailing zeros.
#[derive(Debug, Clone)]
pub struct PAdicValue {
    field: FieldParams,
    start: i64,
    digits: Vec<u64>,
}

impl PAdicValue {
    pub fn new(field: FieldParams, start: i64, digits: Vec<u64>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= field.q) {
            return Err(Error::DigitOutOfRange { digit: d, q: field.q });
        }
        Ok(PAdicValue { field, start, digits })
    }

    pub fn zero(field: FieldParams) -> Self {
        PAdicValue { field, start: 0, digits: vec![0] }
    }

    /// Base-`q` expansion of a natural number, least significant digit
    /// first, starting at index 0. Zero is the one-digit word `(0)`.
    pub fn from_integer(n: &BigUint, field: FieldParams) -> Self {
        if n.is_zero() {
            return Self::zero(field);
        }
        let q = BigUint::from(field.q);
        let mut digits = Vec::new();
        let mut rest = n.clone();
        while !rest.is_zero() {
            let (quot, rem) = rest.div_rem(&q);
            digits.push(rem.to_u64().expect("remainder is below q"));
            rest = quot;
        }
        PAdicValue { field, start: 0, digits }
    }

    pub fn from_u64(n: u64, field: FieldParams) -> Self {
        Self::from_integer(&BigUint::from(n), field)
    }

    /// Parses the digit-word grammar `[d(,d)*][.d(,d)*]` or `int:<n>`.
    ///
    /// Digits before the point sit at indices 0, 1, 2, … (least significant
    /// first), digits after it at −1, −2, …. Commas may be left out when
    /// `q ≤ 10`, in which case every character is one digit.
    pub fn parse(text: &str, field: FieldParams) -> Result<Self> {
        let text = text.trim();
        if let Some(n) = text.strip_prefix("int:") {
            let n: BigUint = n
                .trim()
                .parse()
                .map_err(|_| Error::Syntax(format!("`{text}` is not a natural number")))?;
            return Ok(Self::from_integer(&n, field));
        }
        if text.is_empty() {
            return Err(Error::Syntax("empty digit word".into()));
        }
        let (whole, frac) = match text.split_once('.') {
            Some((w, f)) => {
                if f.is_empty() || f.contains('.') {
                    return Err(Error::Syntax(format!("bad fractional part in `{text}`")));
                }
                (w, Some(f))
            }
            None => (text, None),
        };
        let whole = parse_digit_group(whole, field.q)?;
        let frac = match frac {
            Some(f) => parse_digit_group(f, field.q)?,
            None => Vec::new(),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(Error::Syntax(format!("no digits in `{text}`")));
        }
        let start = -(frac.len() as i64);
        let mut digits: Vec<u64> = frac.into_iter().rev().collect();
        digits.extend(whole);
        Self::new(field, start, digits)
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    /// Index of the first stored digit.
    pub fn start_index(&self) -> i64 {
        self.start
    }

    /// One past the index of the last stored digit.
    pub fn end_index(&self) -> i64 {
        self.start + self.digits.len() as i64
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Digit at `index`, zero outside the stored range.
    pub fn digit(&self, index: i64) -> u64 {
        if index < self.start {
            return 0;
        }
        self.digits.get((index - self.start) as usize).copied().unwrap_or(0)
    }

    /// Index of the first nonzero digit; `None` for the zero value.
    pub fn valuation_index(&self) -> Option<i64> {
        self.digits
            .iter()
            .position(|&d| d != 0)
            .map(|k| self.start + k as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation_index().is_none()
    }

    pub fn norm(&self) -> NormValue {
        match self.valuation_index() {
            Some(j) => NormValue::Pow(j),
            None => NormValue::Zero,
        }
    }

    /// First index at which the zero-extended digit sequences differ.
    /// Does not check that the fields agree.
    pub fn first_difference(&self, other: &PAdicValue) -> Option<i64> {
        let lo = self.start.min(other.start);
        let hi = self.end_index().max(other.end_index());
        (lo..hi).find(|&i| self.digit(i) != other.digit(i))
    }

    pub fn distance(&self, other: &PAdicValue) -> Result<NormValue> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(match self.first_difference(other) {
            Some(j) => NormValue::Pow(j),
            None => NormValue::Zero,
        })
    }

    /// The nonzero part of the word: `(start, digits)` with no leading or
    /// trailing zeros. The zero value trims to an empty word at index 0.
    pub fn trimmed(&self) -> (i64, &[u64]) {
        let Some(first) = self.digits.iter().position(|&d| d != 0) else {
            return (0, &[]);
        };
        let last = self.digits.iter().rposition(|&d| d != 0).unwrap();
        (self.start + first as i64, &self.digits[first..=last])
    }
}

fn parse_digit_group(group: &str, q: u64) -> Result<Vec<u64>> {
    let group = group.trim();
    if group.is_empty() {
        return Ok(Vec::new());
    }
    let parse_one = |s: &str| -> Result<u64> {
        let s = s.trim();
        s.parse::<u64>()
            .map_err(|_| Error::Syntax(format!("`{s}` is not a digit")))
    };
    let digits = if group.contains(',') {
        group.split(',').map(parse_one).collect::<Result<Vec<_>>>()?
    } else if q <= 10 {
        group
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(u64::from)
                    .ok_or_else(|| Error::Syntax(format!("`{c}` is not a digit")))
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        vec![parse_one(group)?]
    };
    if let Some(&d) = digits.iter().find(|&&d| d >= q) {
        return Err(Error::DigitOutOfRange { digit: d, q });
    }
    Ok(digits)
}

impl PartialEq for PAdicValue {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.first_difference(other).is_none()
    }
}

impl Eq for PAdicValue {}

impl Hash for PAdicValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        let (start, digits) = self.trimmed();
        start.hash(state);
        digits.hash(state);
    }
}

impl fmt::Display for PAdicValue {
    /// Renders in the input grammar, so `parse(display(x)) == x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.field.q <= 10 { "" } else { "," };
        let top = self.end_index().max(1);
        let whole: Vec<String> = (0..top).map(|i| self.digit(i).to_string()).collect();
        write!(f, "{}", whole.join(sep))?;
        if self.start < 0 {
            let frac: Vec<String> = (self.start..0).rev().map(|i| self.digit(i).to_string()).collect();
            write!(f, ".{}", frac.join(sep))?;
        }
        Ok(())
    }
}
