//! Sparse integer polynomials in `u` and `q_1..q_c`, and the multisets that
//! accompany the enhanced invariants.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial term {term:?}: {reason}")]
pub struct PolyParseError {
    pub term: String,
    pub reason: &'static str,
}

/// `u^u · q_1^{q[0]} ··· q_c^{q[c-1]}`. Trailing zero `q` exponents are
/// trimmed so equal monomials compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Monomial {
    pub u: u64,
    pub q: Vec<u64>,
}

impl Monomial {
    pub fn new(u: u64, q: Vec<u64>) -> Self {
        let mut m = Monomial { u, q };
        while m.q.last() == Some(&0) {
            m.q.pop();
        }
        m
    }

    pub fn u(e: u64) -> Self {
        Monomial { u: e, q: Vec::new() }
    }

    pub fn q(exps: &[u64]) -> Self {
        Self::new(0, exps.to_vec())
    }

    pub fn degree(&self) -> u64 {
        self.u + self.q.iter().sum::<u64>()
    }

    pub fn is_one(&self) -> bool {
        self.u == 0 && self.q.is_empty()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.u.cmp(&other.u))
            .then_with(|| self.q.cmp(&other.q))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.u {
            0 => {}
            1 => write!(f, "u")?,
            e => write!(f, "u^{e}")?,
        }
        for (i, &e) in self.q.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "q_{}", i + 1)?,
                e => write!(f, "q_{}^{e}", i + 1)?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct InvariantPolynomial {
    terms: BTreeMap<Monomial, i64>,
}

impl InvariantPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::default(), c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, other: &InvariantPolynomial) {
        for (m, &c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn scale(&self, k: i64) -> InvariantPolynomial {
        let mut out = Self::zero();
        for (m, &c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn coefficient(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Coefficient of `u^e`.
    pub fn u_coefficient(&self, e: u64) -> i64 {
        self.coefficient(&Monomial::u(e))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when only `u` appears.
    pub fn is_u_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.q.is_empty())
    }

    /// Sum of all coefficients.
    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// `Σ coeff · (exponent of u)`.
    pub fn weighted_u_sum(&self) -> i64 {
        self.terms.iter().map(|(m, &c)| c * m.u as i64).sum()
    }

    /// `(exponent, coefficient)` pairs for `u`-only polynomials, ascending.
    pub fn u_terms(&self) -> Vec<(u64, i64)> {
        let mut v: Vec<(u64, i64)> = self.terms.iter().map(|(m, &c)| (m.u, c)).collect();
        v.sort();
        v
    }

    pub fn from_u_terms(terms: &[(u64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in terms {
            p.add_term(Monomial::u(e), c);
        }
        p
    }
}

impl fmt::Display for InvariantPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, &c)) in self.terms.iter().enumerate() {
            let abs = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if abs != 1 || m.is_one() {
                write!(f, "{abs}")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for InvariantPolynomial {
    type Err = PolyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Self::zero();
        if compact == "0" {
            return Ok(p);
        }
        if compact.is_empty() {
            return Err(PolyParseError {
                term: s.to_string(),
                reason: "empty input",
            });
        }
        // Split on signs that start a term.
        let mut terms: Vec<(i64, String)> = Vec::new();
        let mut sign = 1;
        let mut cur = String::new();
        let chars: Vec<char> = compact.chars().collect();
        for (i, &ch) in chars.iter().enumerate() {
            let starts_term = (ch == '+' || ch == '-') && (i == 0 || chars[i - 1] != '^');
            if starts_term {
                if !cur.is_empty() {
                    terms.push((sign, std::mem::take(&mut cur)));
                } else if i != 0 {
                    return Err(PolyParseError {
                        term: s.to_string(),
                        reason: "empty term",
                    });
                }
                sign = if ch == '-' { -1 } else { 1 };
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(PolyParseError {
                term: s.to_string(),
                reason: "dangling sign",
            });
        }
        terms.push((sign, cur));
        for (sign, t) in terms {
            let (c, m) = parse_term(&t)?;
            p.add_term(m, sign * c);
        }
        Ok(p)
    }
}

fn parse_term(t: &str) -> Result<(i64, Monomial), PolyParseError> {
    let err = |reason| PolyParseError {
        term: t.to_string(),
        reason,
    };
    let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
    let mut rest = &t[digits.len()..];
    let coeff = if digits.is_empty() {
        1
    } else {
        digits.parse::<i64>().map_err(|_| err("coefficient overflow"))?
    };
    if digits.is_empty() && rest.is_empty() {
        return Err(err("empty term"));
    }
    let mut u = 0u64;
    let mut q: Vec<u64> = Vec::new();
    let exponent = |rest: &mut &str| -> Result<u64, PolyParseError> {
        if let Some(r) = rest.strip_prefix('^') {
            let d: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            if d.is_empty() {
                return Err(err("missing exponent"));
            }
            *rest = &r[d.len()..];
            d.parse().map_err(|_| err("exponent overflow"))
        } else {
            Ok(1)
        }
    };
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix("q_") {
            let d: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            let idx: usize = d.parse().map_err(|_| err("bad q index"))?;
            if idx == 0 {
                return Err(err("q indices start at 1"));
            }
            rest = &r[d.len()..];
            let e = exponent(&mut rest)?;
            if q.len() < idx {
                q.resize(idx, 0);
            }
            q[idx - 1] += e;
        } else if let Some(r) = rest.strip_prefix('u') {
            rest = r;
            u += exponent(&mut rest)?;
        } else {
            return Err(err("unexpected character"));
        }
    }
    Ok((coeff, Monomial::new(u, q)))
}

/// Result of `order_compare`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyOrder {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl fmt::Display for PolyOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PolyOrder::Greater => "greater",
            PolyOrder::Less => "less",
            PolyOrder::Equal => "equal",
            PolyOrder::Incomparable => "incomparable",
        };
        f.write_str(s)
    }
}

/// Coefficientwise comparison over the union of the supports.
///
/// By default `P ≻ Q` when every coefficient of `P` is at least the
/// matching one of `Q` and some coefficient is larger. With `strict`, every
/// coefficient in the union of supports must be strictly larger.
pub fn order_compare(p: &InvariantPolynomial, q: &InvariantPolynomial, strict: bool) -> PolyOrder {
    if p == q {
        return PolyOrder::Equal;
    }
    let mut keys: Vec<&Monomial> = p.terms.keys().chain(q.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    let (mut gt, mut lt, mut eq) = (0, 0, 0);
    for m in &keys {
        match p.coefficient(m).cmp(&q.coefficient(m)) {
            Ordering::Greater => gt += 1,
            Ordering::Less => lt += 1,
            Ordering::Equal => eq += 1,
        }
    }
    let all_strict = eq == 0;
    match (gt > 0, lt > 0) {
        (true, false) if !strict || all_strict => PolyOrder::Greater,
        (false, true) if !strict || all_strict => PolyOrder::Less,
        _ => PolyOrder::Incomparable,
    }
}

/// Multiset attached to an enhanced invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "entries", rename_all = "kebab-case")]
pub enum EnhancedMultiset {
    /// Invariant factors of the additive closure of each labeling image,
    /// with multiplicities.
    InvariantFactors(#[serde(with = "entries")] BTreeMap<Vec<u64>, u64>),
    /// Fiber cardinalities over base labelings, with multiplicities.
    FiberSizes(#[serde(with = "entries")] BTreeMap<u64, u64>),
}

/// Maps as `[[key, count], ...]` so non-string keys survive JSON.
mod entries {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<K: Serialize, S: Serializer>(m: &BTreeMap<K, u64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter())
    }

    pub fn deserialize<'de, K, D>(d: D) -> Result<BTreeMap<K, u64>, D::Error>
    where
        K: Deserialize<'de> + Ord,
        D: Deserializer<'de>,
    {
        Ok(Vec::<(K, u64)>::deserialize(d)?.into_iter().collect())
    }
}

impl EnhancedMultiset {
    pub fn total_multiplicity(&self) -> u64 {
        match self {
            EnhancedMultiset::InvariantFactors(m) => m.values().sum(),
            EnhancedMultiset::FiberSizes(m) => m.values().sum(),
        }
    }

    /// Sum of `u^{|entry|}` over entries.
    pub fn to_polynomial(&self) -> InvariantPolynomial {
        let mut p = InvariantPolynomial::zero();
        match self {
            EnhancedMultiset::InvariantFactors(m) => {
                for (factors, &k) in m {
                    p.add_term(Monomial::u(factors.iter().product()), k as i64);
                }
            }
            EnhancedMultiset::FiberSizes(m) => {
                for (&size, &k) in m {
                    p.add_term(Monomial::u(size), k as i64);
                }
            }
        }
        p
    }

    /// Sum of multiplicity times cardinality.
    pub fn weighted_total(&self) -> u64 {
        match self {
            EnhancedMultiset::InvariantFactors(m) => m.iter().map(|(f, &k)| k * f.iter().product::<u64>()).sum(),
            EnhancedMultiset::FiberSizes(m) => m.iter().map(|(&s, &k)| k * s).sum(),
        }
    }
}

impl fmt::Display for EnhancedMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self {
            EnhancedMultiset::InvariantFactors(m) => {
                for (factors, &k) in m {
                    let group = if factors.is_empty() {
                        "0".to_string()
                    } else {
                        factors.iter().map(|d| format!("Z_{d}")).collect::<Vec<_>>().join("+")
                    };
                    parts.push(if k == 1 { group } else { format!("{k}x{group}") });
                }
            }
            EnhancedMultiset::FiberSizes(m) => {
                for (&s, &k) in m {
                    parts.push(if k == 1 { format!("{s}") } else { format!("{k}x{s}") });
                }
            }
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}
