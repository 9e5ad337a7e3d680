//! Finite racks stored as operation tables.
//!
//! Elements are `0..n` internally. The text format and [`FiniteRack::from_matrix`]
//! use the 1-based rack-matrix convention: row `i`, column `j` holds `k`
//! when `x_i ▷ x_j = x_k`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::lcm;
use crate::search::{self, cycle_type, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RackError {
    #[error("rack matrix is empty")]
    Empty,
    #[error("rack matrix row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry {value} at row {row}, column {col} is outside 1..={n}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
    #[error("axiom (i) fails: column {col} is not a permutation")]
    ColumnNotPermutation { col: usize },
    #[error("axiom (ii) fails at (x, y, z) = ({x}, {y}, {z}): (x▷y)▷z != (x▷z)▷(y▷z)")]
    NotDistributive { x: usize, y: usize, z: usize },
    #[error("map is not a permutation of 1..={0}")]
    NotPermutation(usize),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("malformed rack matrix text: {0}")]
    Parse(String),
}

/// A validated finite rack.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteRack {
    n: usize,
    op: Vec<usize>,
    inv: Vec<usize>,
}

impl FiniteRack {
    /// Validates a 1-based rack matrix.
    pub fn from_matrix(rows: &[Vec<usize>]) -> Result<Self, RackError> {
        let n = rows.len();
        if n == 0 {
            return Err(RackError::Empty);
        }
        let mut op = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(RackError::NotSquare {
                    row: i + 1,
                    len: row.len(),
                    n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v == 0 || v > n {
                    return Err(RackError::EntryOutOfRange {
                        row: i + 1,
                        col: j + 1,
                        value: v,
                        n,
                    });
                }
                op.push(v - 1);
            }
        }
        Self::from_table(n, op)
    }

    /// Validates a 0-based row-major table `op[x * n + y] = x ▷ y`.
    pub fn from_table(n: usize, op: Vec<usize>) -> Result<Self, RackError> {
        if n == 0 {
            return Err(RackError::Empty);
        }
        assert_eq!(op.len(), n * n, "table size must be n*n");
        if let Some(&bad) = op.iter().find(|&&v| v >= n) {
            let pos = op.iter().position(|&v| v == bad).unwrap();
            return Err(RackError::EntryOutOfRange {
                row: pos / n + 1,
                col: pos % n + 1,
                value: bad + 1,
                n,
            });
        }
        let mut inv = vec![usize::MAX; n * n];
        for y in 0..n {
            for x in 0..n {
                let z = op[x * n + y];
                if inv[z * n + y] != usize::MAX {
                    return Err(RackError::ColumnNotPermutation { col: y + 1 });
                }
                inv[z * n + y] = x;
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = op[x * n + y];
                for z in 0..n {
                    let lhs = op[xy * n + z];
                    let rhs = op[op[x * n + z] * n + op[y * n + z]];
                    if lhs != rhs {
                        return Err(RackError::NotDistributive {
                            x: x + 1,
                            y: y + 1,
                            z: z + 1,
                        });
                    }
                }
            }
        }
        Ok(FiniteRack { n, op, inv })
    }

    /// `x ▷ y = σ(x)`. `sigma` is 1-based.
    pub fn constant_action(sigma: &[usize]) -> Result<Self, RackError> {
        let n = sigma.len();
        let perm = one_based_permutation(sigma)?;
        let mut op = Vec::with_capacity(n * n);
        for &image in &perm {
            op.extend(std::iter::repeat_n(image, n));
        }
        Self::from_table(n, op)
    }

    /// `x ▷ y = y^{-k} x y^{k}` on a group given by its Cayley table.
    pub fn conjugation(group: &FiniteGroup, exponent: i64) -> Result<Self, RackError> {
        let n = group.order();
        let mut op = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let yk = group.pow(y, exponent);
                let yk_inv = group.inverse(yk);
                op.push(group.mul(group.mul(yk_inv, x), yk));
            }
        }
        Self::from_table(n, op)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `x ▷ y`, 0-based.
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.op[x * self.n + y]
    }

    /// `x ▷⁻¹ y`, 0-based.
    #[inline]
    pub fn inv_op(&self, x: usize, y: usize) -> usize {
        self.inv[x * self.n + y]
    }

    pub fn table(&self) -> &[usize] {
        &self.op
    }

    /// The 1-based rack matrix.
    pub fn matrix(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|x| (0..self.n).map(|y| self.op(x, y) + 1).collect())
            .collect()
    }

    pub fn kink_map(&self) -> KinkMap {
        KinkMap::new((0..self.n).map(|x| self.op(x, x)).collect())
    }

    /// Rack rank `N` and per-element ranks `N(x)`.
    pub fn rank(&self) -> RackRank {
        let kink = self.kink_map();
        let per_element = kink.element_orders();
        let lcm_of_elements = per_element.iter().copied().fold(1, lcm);
        assert_eq!(
            lcm_of_elements,
            kink.order(),
            "rack rank must be the lcm of element ranks"
        );
        RackRank {
            rank: kink.order(),
            per_element,
        }
    }

    pub fn is_quandle(&self) -> bool {
        (0..self.n).all(|x| self.op(x, x) == x)
    }

    /// `{x : x ▷ x = x}`; may be empty.
    pub fn maximal_subquandle(&self) -> Vec<usize> {
        let q: Vec<usize> = (0..self.n).filter(|&x| self.op(x, x) == x).collect();
        debug_assert!(q.iter().all(|&x| q.iter().all(|&y| q.contains(&self.op(x, y)))));
        q
    }

    /// True when `elems` is closed under ▷ and ▷⁻¹.
    pub fn is_closed(&self, elems: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &x in elems {
            member[x] = true;
        }
        elems.iter().all(|&x| {
            elems
                .iter()
                .all(|&y| member[self.op(x, y)] && member[self.inv_op(x, y)])
        })
    }

    /// The subrack on a closed subset, elements renumbered in the given order.
    /// Returns `None` for the empty set or a non-closed subset.
    pub fn subrack(&self, elems: &[usize]) -> Option<FiniteRack> {
        if elems.is_empty() || !self.is_closed(elems) {
            return None;
        }
        let mut pos = vec![usize::MAX; self.n];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let m = elems.len();
        let mut op = Vec::with_capacity(m * m);
        for &x in elems {
            for &y in elems {
                op.push(pos[self.op(x, y)]);
            }
        }
        FiniteRack::from_table(m, op).ok()
    }

    /// Whether `f` (0-based images) is a rack homomorphism `self -> target`.
    pub fn is_homomorphism(&self, target: &FiniteRack, f: &[usize]) -> bool {
        if f.len() != self.n || f.iter().any(|&v| v >= target.n) {
            return false;
        }
        let ok = (0..self.n).all(|x| (0..self.n).all(|y| f[self.op(x, y)] == target.op(f[x], f[y])));
        if ok {
            debug_assert!((0..self.n).all(|x| (0..self.n).all(|y| f[self.inv_op(x, y)] == target.inv_op(f[x], f[y]))));
        }
        ok
    }

    /// Partition into orbits under all right translations `x ↦ x ▷ y`.
    pub fn orbits(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for x in 0..self.n {
            for y in 0..self.n {
                let a = find(&mut parent, x);
                let b = find(&mut parent, self.op(x, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..self.n).map(|x| find(&mut parent, x)).collect()
    }

    fn profiles(&self) -> Vec<Vec<u64>> {
        let ranks = self.rank().per_element;
        let orbit = self.orbits();
        let mut orbit_size = vec![0u64; self.n];
        for &o in &orbit {
            orbit_size[o] += 1;
        }
        (0..self.n)
            .map(|x| {
                let column: Vec<usize> = (0..self.n).map(|z| self.op(z, x)).collect();
                let row_image = {
                    let mut r: Vec<usize> = (0..self.n).map(|y| self.op(x, y)).collect();
                    r.sort_unstable();
                    r.dedup();
                    r.len() as u64
                };
                let mut p = vec![ranks[x], orbit_size[orbit[x]], row_image];
                p.extend(cycle_type(&column));
                p
            })
            .collect()
    }

    fn structure(&self) -> Structure {
        Structure {
            n: self.n,
            binary: vec![self.op.clone()],
            unary: vec![],
            profiles: self.profiles(),
        }
    }

    /// Lexicographically least rack isomorphism `self -> other`, if any.
    ///
    /// Candidates are pruned by kink-map cycle type, per-element rack rank,
    /// orbit size, and the cycle type of each right translation.
    pub fn find_isomorphism(&self, other: &FiniteRack) -> Option<Vec<usize>> {
        if self.n != other.n {
            return None;
        }
        if self.kink_map().cycle_type() != other.kink_map().cycle_type() {
            return None;
        }
        let found = search::find_isomorphism(&self.structure(), &other.structure(), &[]);
        if let Some(f) = &found {
            debug_assert!(self.is_homomorphism(other, f));
        }
        found
    }

    /// All rack automorphisms, in lexicographic order.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let s = self.structure();
        let mut out = Vec::new();
        search::for_each_isomorphism(&s, &s, &[], |m| {
            out.push(m.to_vec());
            false
        });
        out
    }

    /// Relabels elements: element `x` of `self` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteRack, RackError> {
        let n = self.n;
        let one_based: Vec<usize> = perm.iter().map(|&p| p + 1).collect();
        one_based_permutation(&one_based)?;
        let mut op = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                op[perm[x] * n + perm[y]] = perm[self.op(x, y)];
            }
        }
        FiniteRack::from_table(n, op)
    }
}

impl fmt::Display for FiniteRack {
    /// Rack matrix text format: `n`, then `n` rows of 1-based entries.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for row in self.matrix() {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for FiniteRack {
    type Err = RackError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tokens = s.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| RackError::Parse("missing size".into()))?
            .parse()
            .map_err(|e| RackError::Parse(format!("bad size: {e}")))?;
        let mut rows = vec![Vec::with_capacity(n); n];
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..n {
                let tok = tokens
                    .next()
                    .ok_or_else(|| RackError::Parse(format!("row {} has fewer than {n} entries", i + 1)))?;
                let v = tok
                    .parse()
                    .map_err(|e| RackError::Parse(format!("row {}, column {}: {e}", i + 1, j + 1)))?;
                row.push(v);
            }
        }
        if tokens.next().is_some() {
            return Err(RackError::Parse("trailing entries after the last row".into()));
        }
        FiniteRack::from_matrix(&rows)
    }
}

fn one_based_permutation(sigma: &[usize]) -> Result<Vec<usize>, RackError> {
    let n = sigma.len();
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for &v in sigma {
        if v == 0 || v > n || seen[v - 1] {
            return Err(RackError::NotPermutation(n));
        }
        seen[v - 1] = true;
        out.push(v - 1);
    }
    Ok(out)
}

/// `N` and `N(x)` for each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RackRank {
    pub rank: u64,
    pub per_element: Vec<u64>,
}

/// The kink map `π(x) = x ▷ x` as a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KinkMap {
    perm: Vec<usize>,
}

impl KinkMap {
    fn new(perm: Vec<usize>) -> Self {
        KinkMap { perm }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.perm[x]
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn cycle_type(&self) -> Vec<u64> {
        cycle_type(&self.perm)
    }

    /// Cycle length through each element.
    pub fn element_orders(&self) -> Vec<u64> {
        (0..self.perm.len())
            .map(|x| {
                let mut len = 1;
                let mut y = self.perm[x];
                while y != x {
                    y = self.perm[y];
                    len += 1;
                }
                len
            })
            .collect()
    }

    pub fn order(&self) -> u64 {
        self.cycle_type().into_iter().fold(1, lcm)
    }
}

/// A finite group given by a validated 0-based Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self, RackError> {
        let n = rows.len();
        if n == 0 {
            return Err(RackError::InvalidGroup("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n || row.iter().any(|&v| v >= n) {
                return Err(RackError::InvalidGroup(
                    "table must be square with entries in 0..n".into(),
                ));
            }
            table.extend_from_slice(row);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or_else(|| RackError::InvalidGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x * n + y] == identity && table[y * n + x] == identity)
                .ok_or_else(|| RackError::InvalidGroup(format!("element {x} has no inverse")))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a * n + b] * n + c] != table[a * n + table[b * n + c]] {
                        return Err(RackError::InvalidGroup(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            n,
            table,
            identity,
            inverses,
        })
    }

    /// The symmetric group on `k` letters, elements in lexicographic order of
    /// their one-line notation; product is composition `(pq)(i) = q(p(i))`.
    pub fn symmetric(k: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..k {
            let mut next = Vec::new();
            for p in &perms {
                for v in 0..k {
                    if !p.contains(&v) {
                        let mut q = p.clone();
                        q.push(v);
                        next.push(q);
                    }
                }
            }
            perms = next;
        }
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let rows: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index(&p.iter().map(|&i| q[i]).collect()))
                    .collect()
            })
            .collect();
        Self::from_table(&rows).expect("symmetric group table is valid")
    }

    pub fn cyclic(n: usize) -> Self {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(&rows).expect("cyclic group table is valid")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inverse(a) } else { a };
        let mut out = self.identity;
        for _ in 0..k.unsigned_abs() {
            out = self.mul(out, base);
        }
        out
    }
}
