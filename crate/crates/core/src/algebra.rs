//! Finite abelian groups presented as direct sums of cyclic groups, and the
//! quotient rings `Z_n[t]/(p(t))` that carry the coefficient ring of a
//! finite `(t,s)`-rack.
//!
//! Group elements are integer vectors, but most hot paths work with the
//! mixed-radix index of an element instead: index order coincides with
//! lexicographic order on the vectors, first component most significant.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// An element of an [`AbelianGroup`], component `i` reduced mod `moduli[i]`.
pub type Element = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("modulus {0} is invalid (must be at least 2)")]
    BadModulus(u64),
    #[error("group of order {0} is too large to enumerate")]
    TooLarge(u128),
    #[error("malformed element {element:?} for moduli {moduli:?}")]
    MalformedElement { element: Vec<u64>, moduli: Vec<u64> },
    #[error("element set is not a subgroup: {a:?} + {b:?} is missing")]
    NotASubgroup { a: Element, b: Element },
    #[error("polynomial {0:?} is not monic of degree at least 1")]
    InvalidPolynomial(Vec<i64>),
}

/// Largest group this crate will enumerate element-by-element.
pub const MAX_GROUP_ORDER: u128 = 1 << 20;

/// `Z_{m_1} ⊕ ... ⊕ Z_{m_k}`. The empty list of moduli is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    moduli: Vec<u64>,
    order: usize,
}

impl AbelianGroup {
    pub fn new(moduli: Vec<u64>) -> Result<Self, AlgebraError> {
        let mut order: u128 = 1;
        for &m in &moduli {
            if m < 2 {
                return Err(AlgebraError::BadModulus(m));
            }
            order *= m as u128;
            if order > MAX_GROUP_ORDER {
                return Err(AlgebraError::TooLarge(order));
            }
        }
        Ok(AbelianGroup {
            moduli,
            order: order as usize,
        })
    }

    pub fn cyclic(n: u64) -> Result<Self, AlgebraError> {
        Self::new(vec![n])
    }

    pub fn trivial() -> Self {
        AbelianGroup {
            moduli: Vec::new(),
            order: 1,
        }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> Element {
        vec![0; self.moduli.len()]
    }

    pub fn check(&self, x: &[u64]) -> Result<(), AlgebraError> {
        if x.len() != self.moduli.len() || x.iter().zip(&self.moduli).any(|(&a, &m)| a >= m) {
            return Err(AlgebraError::MalformedElement {
                element: x.to_vec(),
                moduli: self.moduli.clone(),
            });
        }
        Ok(())
    }

    /// Reduces an arbitrary integer vector into the group.
    pub fn reduce(&self, x: &[i64]) -> Element {
        x.iter()
            .zip(&self.moduli)
            .map(|(&a, &m)| a.rem_euclid(m as i64) as u64)
            .collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Element {
        x.iter()
            .zip(y)
            .zip(&self.moduli)
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect()
    }

    pub fn neg(&self, x: &[u64]) -> Element {
        x.iter().zip(&self.moduli).map(|(&a, &m)| (m - a) % m).collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Element {
        self.add(x, &self.neg(y))
    }

    /// Mixed-radix index of an element; lexicographic order is preserved.
    pub fn index_of(&self, x: &[u64]) -> usize {
        let mut idx = 0usize;
        for (&a, &m) in x.iter().zip(&self.moduli) {
            idx = idx * m as usize + a as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Element {
        let mut out = vec![0; self.moduli.len()];
        for (slot, &m) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = (idx % m as usize) as u64;
            idx /= m as usize;
        }
        out
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<Element> {
        (0..self.order).map(|i| self.element(i)).collect()
    }

    /// Addition table on indices: `table[a * order + b] = index(a + b)`.
    pub fn addition_table(&self) -> Vec<usize> {
        let elems = self.elements();
        let mut table = Vec::with_capacity(self.order * self.order);
        for a in &elems {
            for b in &elems {
                table.push(self.index_of(&self.add(a, b)));
            }
        }
        table
    }

    /// Additive order of an element.
    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter().zip(&self.moduli).map(|(&a, &m)| m / gcd(a, m)).fold(1, lcm)
    }

    /// The smallest subgroup containing `gens`.
    pub fn subgroup_closure(&self, gens: &[Element]) -> Result<Vec<Element>, AlgebraError> {
        let mut idx = Vec::with_capacity(gens.len());
        for g in gens {
            self.check(g)?;
            idx.push(self.index_of(g));
        }
        let table = self.addition_table();
        Ok(closure_indices(&table, self.order, &idx)
            .into_iter()
            .map(|i| self.element(i))
            .collect())
    }

    /// Invariant factors `d_1 | d_2 | ... | d_k` of a subgroup, read off from
    /// its element-order census. The trivial subgroup has no factors.
    pub fn invariant_factors(&self, subgroup: &[Element]) -> Result<Vec<u64>, AlgebraError> {
        for x in subgroup {
            self.check(x)?;
        }
        let set: std::collections::BTreeSet<&Element> = subgroup.iter().collect();
        if !set.contains(&self.zero()) {
            let z = self.zero();
            return Err(AlgebraError::NotASubgroup { a: z.clone(), b: z });
        }
        for a in &set {
            for b in &set {
                let c = self.add(a, b);
                if !set.contains(&c) {
                    return Err(AlgebraError::NotASubgroup {
                        a: (*a).clone(),
                        b: (*b).clone(),
                    });
                }
            }
        }
        let orders: Vec<u64> = set.iter().map(|x| self.element_order(x)).collect();
        Ok(factors_from_orders(&orders))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.moduli.iter().map(|m| format!("Z_{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Worklist saturation of a generating set under an index-level addition
/// table. Returns the sorted subgroup indices (index 0 is the identity).
pub fn closure_indices(add_table: &[usize], order: usize, gens: &[usize]) -> Vec<usize> {
    let mut member = vec![false; order];
    let mut members = vec![0usize];
    member[0] = true;
    let mut frontier: Vec<usize> = Vec::new();
    for &g in gens {
        if !member[g] {
            member[g] = true;
            members.push(g);
            frontier.push(g);
        }
    }
    // In a finite group, closure under addition alone already yields negatives.
    while let Some(x) = frontier.pop() {
        let current = members.clone();
        for y in current {
            let z = add_table[x * order + y];
            if !member[z] {
                member[z] = true;
                members.push(z);
                frontier.push(z);
            }
        }
    }
    members.sort_unstable();
    members
}

/// Invariant factors of a finite abelian group given the additive orders of
/// all its elements.
pub fn factors_from_orders(orders: &[u64]) -> Vec<u64> {
    let size = orders.len() as u64;
    let mut per_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (p, top) in prime_factorization(size) {
        // r_k = log_p #{x : p^k x = 0}; the number of cyclic p-factors of
        // exponent >= k is r_k - r_{k-1}.
        let mut ranks = vec![0u32];
        for k in 1..=top {
            let pk = p.pow(k);
            let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            ranks.push(log_exact(count, p));
        }
        let mut exps = Vec::new();
        for k in 1..ranks.len() {
            let at_least_k = ranks[k] - ranks[k - 1];
            let at_least_next = if k + 1 < ranks.len() {
                ranks[k + 1] - ranks[k]
            } else {
                0
            };
            for _ in 0..(at_least_k - at_least_next) {
                exps.push(k as u32);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.insert(p, exps);
    }
    let len = per_prime.values().map(Vec::len).max().unwrap_or(0);
    // factors[0] is the largest; d_k for the divisor chain comes out reversed.
    let mut factors = vec![1u64; len];
    for (p, exps) in &per_prime {
        for (i, e) in exps.iter().enumerate() {
            factors[i] *= p.pow(*e);
        }
    }
    factors.reverse();
    factors
}

fn log_exact(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 1 {
        debug_assert_eq!(n % p, 0);
        n /= p;
        e += 1;
    }
    e
}

pub fn prime_factorization(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn inverse_mod(a: u64, n: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % n as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(n as i128) as u64)
}

/// `Z_n[t]/(p(t))` for a monic `p` of degree `d >= 1`; elements are
/// coefficient vectors of length `d`, ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientRing {
    n: u64,
    modulus: Vec<u64>,
    t_inverse: Option<Vec<u64>>,
}

impl QuotientRing {
    /// `p` is given in ascending coefficient order and must be monic.
    pub fn new(n: u64, p: &[i64]) -> Result<Self, AlgebraError> {
        if n < 2 {
            return Err(AlgebraError::BadModulus(n));
        }
        let lead = p.last().copied().unwrap_or(0);
        if p.len() < 2 || lead.rem_euclid(n as i64) != 1 {
            return Err(AlgebraError::InvalidPolynomial(p.to_vec()));
        }
        let modulus: Vec<u64> = p.iter().map(|&c| c.rem_euclid(n as i64) as u64).collect();
        let d = modulus.len() - 1;
        let size = (n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        if size > MAX_GROUP_ORDER {
            return Err(AlgebraError::TooLarge(size));
        }
        let mut ring = QuotientRing {
            n,
            modulus,
            t_inverse: None,
        };
        // p(t) = t r(t) + p0, so t * (-r(t) / p0) = 1 whenever p0 is a unit.
        if let Some(p0_inv) = inverse_mod(ring.modulus[0], n) {
            let mut inv = vec![0u64; d];
            for (slot, &c) in inv.iter_mut().zip(&ring.modulus[1..]) {
                *slot = ((n - c) % n) * p0_inv % n;
            }
            ring.t_inverse = Some(inv);
        }
        Ok(ring)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// The reduced monic modulus, ascending.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn size(&self) -> usize {
        (self.n as usize).pow(self.degree() as u32)
    }

    pub fn t_is_unit(&self) -> bool {
        self.t_inverse.is_some()
    }

    pub fn t_inverse(&self) -> Option<&[u64]> {
        self.t_inverse.as_deref()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1 % self.n;
        v
    }

    /// The class of `t`.
    pub fn t(&self) -> Vec<u64> {
        self.reduce_poly(&[0, 1])
    }

    /// Reduces an arbitrary polynomial (ascending, any length).
    pub fn reduce_poly(&self, coeffs: &[u64]) -> Vec<u64> {
        let n = self.n;
        let d = self.degree();
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % n).collect();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top == 0 {
                continue;
            }
            let shift = c.len() - d;
            for i in 0..d {
                let sub = top * self.modulus[i] % n;
                c[shift + i] = (c[shift + i] + n - sub) % n;
            }
        }
        c.resize(d, 0);
        c
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.n).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + self.n - y) % self.n).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut prod = vec![0u64; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.n;
            }
        }
        self.reduce_poly(&prod)
    }

    /// All elements in lexicographic order of coefficient vectors.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let group = AbelianGroup::new(vec![self.n; self.degree()]).expect("size checked");
        group.elements()
    }

    /// Exhaustive search for a multiplicative inverse.
    pub fn inverse_by_search(&self, a: &[u64]) -> Option<Vec<u64>> {
        let one = self.one();
        self.elements().into_iter().find(|b| self.mul(a, b) == one)
    }

    /// Matrix of multiplication by `a` on coefficient vectors (column `j` is
    /// `a * t^j`).
    pub fn multiplication_matrix(&self, a: &[u64]) -> Vec<Vec<i64>> {
        let d = self.degree();
        let mut m = vec![vec![0i64; d]; d];
        for j in 0..d {
            let mut basis = vec![0u64; d];
            basis[j] = 1;
            let col = self.mul(a, &basis);
            for i in 0..d {
                m[i][j] = col[i] as i64;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx_set(g: &AbelianGroup, xs: &[Element]) -> Vec<usize> {
        xs.iter().map(|x| g.index_of(x)).collect()
    }

    #[test]
    fn closure_examples() {
        let z4 = AbelianGroup::cyclic(4).unwrap();
        assert_eq!(z4.subgroup_closure(&[vec![2]]).unwrap(), vec![vec![0], vec![2]]);
        assert_eq!(z4.subgroup_closure(&[]).unwrap(), vec![vec![0]]);
        let z12 = AbelianGroup::cyclic(12).unwrap();
        let c = z12.subgroup_closure(&[vec![4]]).unwrap();
        assert_eq!(idx_set(&z12, &c), vec![0, 4, 8]);
    }

    #[test]
    fn closure_rejects_malformed() {
        let z4 = AbelianGroup::cyclic(4).unwrap();
        assert!(matches!(
            z4.subgroup_closure(&[vec![5]]),
            Err(AlgebraError::MalformedElement { .. })
        ));
        assert!(matches!(
            z4.subgroup_closure(&[vec![1, 1]]),
            Err(AlgebraError::MalformedElement { .. })
        ));
    }

    #[test]
    fn invariant_factor_examples() {
        let z4 = AbelianGroup::cyclic(4).unwrap();
        assert_eq!(z4.invariant_factors(&[vec![0], vec![2]]).unwrap(), vec![2]);
        let v4 = AbelianGroup::new(vec![2, 2]).unwrap();
        assert_eq!(v4.invariant_factors(&v4.elements()).unwrap(), vec![2, 2]);
        let z12 = AbelianGroup::cyclic(12).unwrap();
        let evens: Vec<Element> = (0..12).step_by(2).map(|x| vec![x]).collect();
        assert_eq!(z12.invariant_factors(&evens).unwrap(), vec![6]);
        assert_eq!(z12.invariant_factors(&[vec![0]]).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn invariant_factors_of_mixed_sums() {
        // Z_2 + Z_4 + Z_12 = Z_2 + Z_4 + Z_4 + Z_3 -> [2, 4, 12]
        let g = AbelianGroup::new(vec![2, 4, 12]).unwrap();
        assert_eq!(g.invariant_factors(&g.elements()).unwrap(), vec![2, 4, 12]);
        let g = AbelianGroup::new(vec![6, 10]).unwrap();
        assert_eq!(g.invariant_factors(&g.elements()).unwrap(), vec![2, 30]);
    }

    #[test]
    fn invariant_factors_rejects_non_subgroup() {
        let z4 = AbelianGroup::cyclic(4).unwrap();
        assert!(matches!(
            z4.invariant_factors(&[vec![0], vec![1]]),
            Err(AlgebraError::NotASubgroup { .. })
        ));
        assert!(matches!(
            z4.invariant_factors(&[vec![2]]),
            Err(AlgebraError::NotASubgroup { .. })
        ));
    }

    #[test]
    fn index_order_is_lexicographic() {
        let g = AbelianGroup::new(vec![2, 3]).unwrap();
        let elems = g.elements();
        let mut sorted = elems.clone();
        sorted.sort();
        assert_eq!(elems, sorted);
        for (i, e) in elems.iter().enumerate() {
            assert_eq!(g.index_of(e), i);
        }
    }

    #[test]
    fn ring_examples() {
        let r = QuotientRing::new(2, &[1, 1]).unwrap();
        assert_eq!(r.size(), 2);
        assert_eq!(r.t(), vec![1]);
        assert!(r.t_is_unit());

        let r = QuotientRing::new(2, &[1, 0, 1]).unwrap();
        assert_eq!(r.size(), 4);
        assert_eq!(r.t_inverse().unwrap(), r.t().as_slice());
        assert_eq!(r.mul(&r.t(), &r.t()), r.one());

        let r = QuotientRing::new(4, &[-3, 1]).unwrap();
        assert_eq!(r.t(), vec![3]);
        assert_eq!(r.t_inverse().unwrap(), &[3]);
    }

    #[test]
    fn ring_errors() {
        assert!(matches!(
            QuotientRing::new(4, &[1, 2]),
            Err(AlgebraError::InvalidPolynomial(_))
        ));
        assert!(matches!(
            QuotientRing::new(4, &[1]),
            Err(AlgebraError::InvalidPolynomial(_))
        ));
        let r = QuotientRing::new(4, &[2, 1]).unwrap();
        assert!(!r.t_is_unit());
        let r = QuotientRing::new(6, &[0, 0, 1]).unwrap();
        assert!(!r.t_is_unit());
    }

    #[test]
    fn t_inverse_matches_exhaustive_search() {
        for n in 2..7u64 {
            for c0 in 0..n as i64 {
                for c1 in 0..n as i64 {
                    let r = QuotientRing::new(n, &[c0, c1, 1]).unwrap();
                    let by_search = r.inverse_by_search(&r.t());
                    assert_eq!(r.t_inverse().map(<[u64]>::to_vec), by_search, "n={n} p=[{c0},{c1},1]");
                }
            }
        }
    }

    #[test]
    fn inverse_mod_works() {
        assert_eq!(inverse_mod(3, 4), Some(3));
        assert_eq!(inverse_mod(2, 4), None);
        assert_eq!(inverse_mod(7, 12), Some(7));
        assert_eq!(inverse_mod(1, 2), Some(1));
    }
}
