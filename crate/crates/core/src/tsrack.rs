//! `(t,s)`-racks: an abelian group with an automorphism `t` and an
//! endomorphism `s` such that `ts = st` and `s² = (1 - t)s`, made into a rack
//! by `x ▷ y = tx + sy`.
//!
//! A [`TsRack`] lives on a subgroup (its carrier) of an ambient
//! [`AbelianGroup`]; full constructions use the whole group, and
//! [`TsRack::s_submodule`] restricts to the image of `s`. Elements are the
//! positions `0..size()` in the carrier, in lexicographic order of their
//! vectors, so position 0 is always the zero element.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{closure_indices, factors_from_orders, gcd, AbelianGroup, AlgebraError, Element, QuotientRing};
use crate::rack::FiniteRack;
use crate::search::{self, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TsRackError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("t = {t} is not invertible modulo {n}")]
    NotInvertible { t: u64, n: u64 },
    #[error("t is not invertible in Z_{n}[t]/(p(t)) for p = {p:?}")]
    TNotUnitInRing { n: u64, p: Vec<u64> },
    #[error("s^2 = (1-t)s fails mod {n}: s^2 = {lhs}, (1-t)s = {rhs}")]
    RelationViolation { n: u64, lhs: u64, rhs: u64 },
    #[error("matrix shape does not match a group of rank {rank}")]
    MatrixShape { rank: usize },
    #[error("{which} matrix entry ({row}, {col}) = {value} is not well defined from Z_{from} to Z_{to}")]
    NotWellDefined {
        which: char,
        row: usize,
        col: usize,
        value: i64,
        from: u64,
        to: u64,
    },
    #[error("t is not bijective")]
    TNotBijective,
    #[error("t and s do not commute at {0:?}")]
    NotCommuting(Element),
    #[error("s^2 != (Id - t)s at {0:?}")]
    SRelation(Element),
    #[error("wrong structure: {0}")]
    WrongStructure(String),
}

/// How a rack was built, kept for display and spec round-trips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Linear { n: u64, t: u64, s: u64 },
    Quotient { n: u64, p: Vec<u64> },
    Module,
    SSubmodule,
}

#[derive(Debug, Clone)]
pub struct TsRack {
    group: AbelianGroup,
    carrier: Vec<usize>,
    pos: Vec<usize>,
    add: Vec<usize>,
    neg: Vec<usize>,
    t: Vec<usize>,
    t_inv: Vec<usize>,
    s: Vec<usize>,
    construction: Construction,
}

impl TsRack {
    /// `Z_n` with `x ▷ y = tx + sy`.
    pub fn linear(n: u64, t: u64, s: u64) -> Result<Self, TsRackError> {
        let group = AbelianGroup::cyclic(n)?;
        let (t, s) = (t % n, s % n);
        if gcd(t, n) != 1 {
            return Err(TsRackError::NotInvertible { t, n });
        }
        let lhs = s * s % n;
        let rhs = (1 + n - t) % n * s % n;
        if lhs != rhs {
            return Err(TsRackError::RelationViolation { n, lhs, rhs });
        }
        let mut rack = Self::module(group, &[vec![t as i64]], &[vec![s as i64]])?;
        rack.construction = Construction::Linear { n, t, s };
        Ok(rack)
    }

    /// `Λ̈_n/(p(t)) ≅ R ⊕ R` with `R = Z_n[t]/(p)`; the pair `(a, b)` is
    /// `a + b·s`, `t(a, b) = (ta, tb)` and `s(a, b) = (0, a + (1 - t)b)`.
    pub fn quotient(n: u64, p: &[i64]) -> Result<Self, TsRackError> {
        let ring = QuotientRing::new(n, p)?;
        if !ring.t_is_unit() {
            return Err(TsRackError::TNotUnitInRing {
                n,
                p: ring.modulus().to_vec(),
            });
        }
        let d = ring.degree();
        let mt = ring.multiplication_matrix(&ring.t());
        let one_minus_t = ring.sub(&ring.one(), &ring.t());
        let m1t = ring.multiplication_matrix(&one_minus_t);
        let mut tm = vec![vec![0i64; 2 * d]; 2 * d];
        let mut sm = vec![vec![0i64; 2 * d]; 2 * d];
        for i in 0..d {
            for j in 0..d {
                tm[i][j] = mt[i][j];
                tm[d + i][d + j] = mt[i][j];
                sm[d + i][d + j] = m1t[i][j];
            }
            sm[d + i][i] = 1;
        }
        let group = AbelianGroup::new(vec![n; 2 * d])?;
        let mut rack = Self::module(group, &tm, &sm)?;
        rack.construction = Construction::Quotient {
            n,
            p: ring.modulus().to_vec(),
        };
        Ok(rack)
    }

    /// A general module structure given by integer matrices acting on
    /// element vectors: `(Tx)_i = Σ_j T_ij x_j mod m_i`.
    pub fn module(group: AbelianGroup, t: &[Vec<i64>], s: &[Vec<i64>]) -> Result<Self, TsRackError> {
        let k = group.rank();
        for (which, m) in [('t', t), ('s', s)] {
            if m.len() != k || m.iter().any(|row| row.len() != k) {
                return Err(TsRackError::MatrixShape { rank: k });
            }
            let moduli = group.moduli();
            for i in 0..k {
                for j in 0..k {
                    // Z_{m_j} -> Z_{m_i}, x ↦ a x is well defined iff m_i | a m_j.
                    let a = m[i][j];
                    if (a as i128 * moduli[j] as i128).rem_euclid(moduli[i] as i128) != 0 {
                        return Err(TsRackError::NotWellDefined {
                            which,
                            row: i,
                            col: j,
                            value: a,
                            from: moduli[j],
                            to: moduli[i],
                        });
                    }
                }
            }
        }
        let elems = group.elements();
        let apply = |m: &[Vec<i64>], x: &Element| -> usize {
            let v: Vec<i64> = (0..k)
                .map(|i| (0..k).map(|j| m[i][j] * x[j] as i64).sum::<i64>())
                .collect();
            group.index_of(&group.reduce(&v))
        };
        let t_table: Vec<usize> = elems.iter().map(|x| apply(t, x)).collect();
        let s_table: Vec<usize> = elems.iter().map(|x| apply(s, x)).collect();
        let carrier: Vec<usize> = (0..group.order()).collect();
        Self::from_tables(group, carrier, t_table, s_table, Construction::Module)
    }

    /// Builds from ambient-index tables; `t` and `s` are indexed by carrier
    /// position and hold ambient indices.
    fn from_tables(
        group: AbelianGroup,
        carrier: Vec<usize>,
        t_amb: Vec<usize>,
        s_amb: Vec<usize>,
        construction: Construction,
    ) -> Result<Self, TsRackError> {
        let m = carrier.len();
        let mut pos = vec![usize::MAX; group.order()];
        for (i, &c) in carrier.iter().enumerate() {
            pos[c] = i;
        }
        let to_pos = |amb: usize| -> Result<usize, TsRackError> {
            match pos[amb] {
                usize::MAX => Err(TsRackError::WrongStructure("action leaves the carrier".into())),
                p => Ok(p),
            }
        };
        let t: Vec<usize> = t_amb.iter().map(|&a| to_pos(a)).collect::<Result<_, _>>()?;
        let s: Vec<usize> = s_amb.iter().map(|&a| to_pos(a)).collect::<Result<_, _>>()?;
        let vecs: Vec<Element> = carrier.iter().map(|&c| group.element(c)).collect();
        let mut add = Vec::with_capacity(m * m);
        for a in &vecs {
            for b in &vecs {
                add.push(to_pos(group.index_of(&group.add(a, b)))?);
            }
        }
        let neg: Vec<usize> = vecs
            .iter()
            .map(|a| to_pos(group.index_of(&group.neg(a))))
            .collect::<Result<_, _>>()?;

        let mut t_inv = vec![usize::MAX; m];
        for (x, &tx) in t.iter().enumerate() {
            if t_inv[tx] != usize::MAX {
                return Err(TsRackError::TNotBijective);
            }
            t_inv[tx] = x;
        }
        let rack = TsRack {
            group,
            carrier,
            pos,
            add,
            neg,
            t,
            t_inv,
            s,
            construction,
        };
        for x in 0..m {
            if rack.t[rack.s[x]] != rack.s[rack.t[x]] {
                return Err(TsRackError::NotCommuting(rack.vector(x)));
            }
            // s(sx) = sx - t(sx)
            let sx = rack.s[x];
            if rack.s[sx] != rack.sub(sx, rack.t[sx]) {
                return Err(TsRackError::SRelation(rack.vector(x)));
            }
        }
        Ok(rack)
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    /// Element vector at a carrier position.
    pub fn vector(&self, x: usize) -> Element {
        self.group.element(self.carrier[x])
    }

    /// Carrier position of an element vector.
    pub fn position(&self, v: &[u64]) -> Option<usize> {
        self.group.check(v).ok()?;
        match self.pos[self.group.index_of(v)] {
            usize::MAX => None,
            p => Some(p),
        }
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size() + y]
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg[y])
    }

    #[inline]
    pub fn t(&self, x: usize) -> usize {
        self.t[x]
    }

    #[inline]
    pub fn t_inv(&self, x: usize) -> usize {
        self.t_inv[x]
    }

    #[inline]
    pub fn s(&self, x: usize) -> usize {
        self.s[x]
    }

    pub fn t_table(&self) -> &[usize] {
        &self.t
    }

    pub fn s_table(&self) -> &[usize] {
        &self.s
    }

    pub fn add_table(&self) -> &[usize] {
        &self.add
    }

    /// `(t + s)x`, the kink map.
    #[inline]
    pub fn kink(&self, x: usize) -> usize {
        self.add(self.t[x], self.s[x])
    }

    /// `x ▷ y = tx + sy`.
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.add(self.t[x], self.s[y])
    }

    /// `x ▷⁻¹ y = t⁻¹(x - sy)`.
    #[inline]
    pub fn inv_op(&self, x: usize, y: usize) -> usize {
        self.t_inv[self.sub(x, self.s[y])]
    }

    /// The rack matrix, elements in carrier (lexicographic) order.
    pub fn to_finite_rack(&self) -> FiniteRack {
        let m = self.size();
        let table: Vec<usize> = (0..m)
            .flat_map(|x| (0..m).map(move |y| (x, y)))
            .map(|(x, y)| self.op(x, y))
            .collect();
        FiniteRack::from_table(m, table).expect("a (t,s)-rack satisfies the rack axioms")
    }

    /// Multiplicative order of the `(t+s)`-action.
    pub fn kink_order(&self) -> u64 {
        let m = self.size();
        let mut cur: Vec<usize> = (0..m).collect();
        let mut k = 0u64;
        loop {
            cur = cur.iter().map(|&x| self.kink(x)).collect();
            k += 1;
            if cur.iter().enumerate().all(|(i, &x)| i == x) {
                return k;
            }
        }
    }

    pub fn is_alexander(&self) -> bool {
        (0..self.size()).all(|x| self.s[x] == self.sub(x, self.t[x]))
    }

    /// Image of `s`, as sorted carrier positions.
    pub fn s_image(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.s.iter().copied().collect();
        set.into_iter().collect()
    }

    /// The submodule `sX` with restricted `t` and `s`.
    pub fn s_submodule(&self) -> TsRack {
        let image = self.s_image();
        let carrier: Vec<usize> = image.iter().map(|&p| self.carrier[p]).collect();
        let t_amb: Vec<usize> = image.iter().map(|&p| self.carrier[self.t[p]]).collect();
        let s_amb: Vec<usize> = image.iter().map(|&p| self.carrier[self.s[p]]).collect();
        Self::from_tables(self.group.clone(), carrier, t_amb, s_amb, Construction::SSubmodule)
            .expect("sX is closed under t and s")
    }

    /// Carrier positions of this rack's elements inside `other` when both
    /// share an ambient group (e.g. `sX` inside `X`).
    pub fn embedding_into(&self, other: &TsRack) -> Option<Vec<usize>> {
        if self.group != other.group {
            return None;
        }
        self.carrier
            .iter()
            .map(|&c| match other.pos[c] {
                usize::MAX => None,
                p => Some(p),
            })
            .collect()
    }

    /// `{x : (t + s)x = x}`.
    pub fn maximal_subquandle(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.kink(x) == x).collect()
    }

    /// `x ↦ x + z`.
    pub fn translation(&self, z: usize) -> Vec<usize> {
        (0..self.size()).map(|x| self.add(x, z)).collect()
    }

    /// Additive closure of a set of elements, as sorted positions.
    pub fn additive_closure(&self, elems: &[usize]) -> Vec<usize> {
        closure_indices(&self.add, self.size(), elems)
    }

    /// Invariant factors of a subgroup given by sorted positions.
    pub fn invariant_factors(&self, subgroup: &[usize]) -> Result<Vec<u64>, AlgebraError> {
        let vecs: Vec<Element> = subgroup.iter().map(|&x| self.vector(x)).collect();
        self.group.invariant_factors(&vecs)
    }

    /// Invariant factors assuming `subgroup` is already closed.
    pub fn invariant_factors_unchecked(&self, subgroup: &[usize]) -> Vec<u64> {
        let orders: Vec<u64> = subgroup
            .iter()
            .map(|&x| self.group.element_order(&self.vector(x)))
            .collect();
        factors_from_orders(&orders)
    }

    fn module_structure(&self, with_s: bool) -> Structure {
        let m = self.size();
        let add_order: Vec<u64> = (0..m).map(|x| self.group.element_order(&self.vector(x))).collect();
        let cycle = |f: &dyn Fn(usize) -> usize, x: usize| -> u64 {
            let mut y = f(x);
            let mut k = 1;
            while y != x {
                y = f(y);
                k += 1;
            }
            k
        };
        let profiles = (0..m)
            .map(|x| {
                let mut p = vec![add_order[x], cycle(&|y| self.t[y], x)];
                if with_s {
                    p.push(add_order[self.s[x]]);
                    p.push(cycle(&|y| self.kink(y), x));
                }
                p
            })
            .collect();
        let mut unary = vec![self.t.clone()];
        if with_s {
            unary.push(self.s.clone());
        }
        Structure {
            n: m,
            binary: vec![self.add.clone()],
            unary,
            profiles,
        }
    }

    fn finish_display_name(&self) -> String {
        match &self.construction {
            Construction::Linear { n, t, s } => format!("linear(n={n}, t={t}, s={s})"),
            Construction::Quotient { n, p } => format!("quotient(n={n}, p={p:?})"),
            Construction::Module => format!("module({})", self.group),
            Construction::SSubmodule => format!("submodule of {} of order {}", self.group, self.size()),
        }
    }
}

impl fmt::Display for TsRack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.finish_display_name())
    }
}

/// All `(t, s)` in `Z_n` with `t` a unit and `s² = (1 - t)s`, lexicographic.
pub fn enumerate_linear(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for t in 0..n {
        if gcd(t, n) != 1 {
            continue;
        }
        for s in 0..n {
            if s * s % n == (1 + n - t) % n * s % n {
                out.push((t, s));
            }
        }
    }
    out
}

/// Lexicographically least `Λ̈`-module isomorphism (additive, commuting with
/// `t` and `s`), as a map on carrier positions.
pub fn module_isomorphism(a: &TsRack, b: &TsRack) -> Option<Vec<usize>> {
    if a.size() != b.size() {
        return None;
    }
    search::find_isomorphism(&a.module_structure(true), &b.module_structure(true), &[(0, 0)])
}

/// Alexander quandle isomorphism criterion: equal orders and
/// `(1 - t)M ≅ (1 - t)M'` as `Z[t^{±1}]`-modules.
pub fn alexander_isomorphic(a: &TsRack, b: &TsRack) -> Result<bool, TsRackError> {
    for (name, m) in [("first", a), ("second", b)] {
        if !m.is_alexander() {
            return Err(TsRackError::WrongStructure(format!(
                "{name} rack is not an Alexander quandle (s != 1 - t)"
            )));
        }
    }
    if a.size() != b.size() {
        return Ok(false);
    }
    let (sa, sb) = (a.s_submodule(), b.s_submodule());
    if sa.size() != sb.size() {
        return Ok(false);
    }
    Ok(search::find_isomorphism(&sa.module_structure(false), &sb.module_structure(false), &[(0, 0)]).is_some())
}

/// Witness for an isomorphism of `(t,s)`-racks assembled from a module
/// isomorphism of the `s`-submodules and a map on `(t+s)`-orbits of coset
/// representatives. All elements are carrier positions of `X` or `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsRackIsoCertificate {
    /// `h : sX -> sY` as (x, h(x)) pairs.
    pub h: Vec<(usize, usize)>,
    /// Coset representatives of `X/sX` (least element of each coset).
    pub a_reps: Vec<usize>,
    /// Their images, a set of coset representatives of `Y/sY`.
    pub b_reps: Vec<usize>,
    /// `g : O(A) -> O(B)` as (e, g(e)) pairs, sorted by `e`.
    pub g: Vec<(usize, usize)>,
    /// The assembled rack isomorphism `φ(α + ω) = g(α) + h(ω)`.
    pub phi: Vec<usize>,
}

/// Searches for module isomorphisms `h : sX -> sY`, coset representatives
/// and orbit bijections satisfying the `(t,s)`-rack isomorphism criterion,
/// and returns the first certificate whose assembled map verifies as a rack
/// isomorphism.
pub fn tsrack_isomorphism(x: &TsRack, y: &TsRack) -> Option<TsRackIsoCertificate> {
    if x.size() != y.size() {
        return None;
    }
    let (sx, sy) = (x.s_submodule(), y.s_submodule());
    if sx.size() != sy.size() {
        return None;
    }
    let sx_in_x = sx.embedding_into(x).expect("sX embeds in X");
    let sy_in_y = sy.embedding_into(y).expect("sY embeds in Y");
    let mut hs: Vec<Vec<usize>> = Vec::new();
    search::for_each_isomorphism(&sx.module_structure(true), &sy.module_structure(true), &[(0, 0)], |m| {
        hs.push(m.iter().map(|&v| sy_in_y[v]).collect());
        false
    });
    let ctx = CosetContext::new(x, &sx_in_x);
    let cty = CosetContext::new(y, &sy_in_y);
    let rx = x.to_finite_rack();
    let ry = y.to_finite_rack();
    hs.par_iter().find_map_first(|h_on_sx| {
        // h as a map on X positions (usize::MAX off sX).
        let mut h = vec![usize::MAX; x.size()];
        for (i, &p) in sx_in_x.iter().enumerate() {
            h[p] = h_on_sx[i];
        }
        search_orbit_maps(x, y, &ctx, &cty, &h, &rx, &ry)
    })
}

struct CosetContext {
    in_s: Vec<bool>,
    /// Least element of the coset of each element.
    rep: Vec<usize>,
    reps: Vec<usize>,
}

impl CosetContext {
    fn new(r: &TsRack, s_elems: &[usize]) -> Self {
        let m = r.size();
        let mut in_s = vec![false; m];
        for &p in s_elems {
            in_s[p] = true;
        }
        let mut rep = vec![usize::MAX; m];
        let mut reps = Vec::new();
        for a in 0..m {
            if rep[a] != usize::MAX {
                continue;
            }
            reps.push(a);
            for &w in s_elems {
                rep[r.add(a, w)] = a;
            }
        }
        CosetContext { in_s, rep, reps }
    }
}

fn search_orbit_maps(
    x: &TsRack,
    y: &TsRack,
    cx: &CosetContext,
    cy: &CosetContext,
    h: &[usize],
    rx: &FiniteRack,
    ry: &FiniteRack,
) -> Option<TsRackIsoCertificate> {
    let reps = &cx.reps;
    let kink_inv_x = invert(&(0..x.size()).map(|e| x.kink(e)).collect::<Vec<_>>());
    // For e in X: the unique α ∈ A and ω ∈ sX with e = (t+s)α + ω.
    let decompose = |e: usize| -> (usize, usize) {
        let alpha = cx.rep[kink_inv_x[e]];
        let omega = x.sub(e, x.kink(alpha));
        debug_assert!(cx.in_s[omega]);
        (alpha, omega)
    };
    // g(α) must satisfy s g(α) = h(sα); the rest is fixed by the successor
    // relation α ↦ rep((t+s)α) on A.
    let candidates: Vec<Vec<usize>> = reps
        .iter()
        .map(|&a| {
            let target = h[x.s(a)];
            (0..y.size()).filter(|&v| y.s(v) == target).collect()
        })
        .collect();
    let mut g_on_a = vec![usize::MAX; x.size()];
    let mut found = None;
    assign_reps(
        x,
        y,
        cx,
        cy,
        h,
        &decompose,
        &candidates,
        0,
        &mut g_on_a,
        &mut |g_on_a| {
            let cert = assemble(x, y, cx, cy, h, &decompose, g_on_a, rx, ry);
            if cert.is_some() {
                found = cert;
                true
            } else {
                false
            }
        },
    );
    found
}

#[allow(clippy::too_many_arguments)]
fn assign_reps(
    x: &TsRack,
    y: &TsRack,
    cx: &CosetContext,
    cy: &CosetContext,
    h: &[usize],
    decompose: &dyn Fn(usize) -> (usize, usize),
    candidates: &[Vec<usize>],
    k: usize,
    g: &mut Vec<usize>,
    done: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let reps = &cx.reps;
    if k == reps.len() {
        return done(g);
    }
    let alpha = reps[k];
    if g[alpha] != usize::MAX {
        return assign_reps(x, y, cx, cy, h, decompose, candidates, k + 1, g, done);
    }
    for &v in &candidates[k] {
        let mut trail = Vec::new();
        if propagate_rep(x, y, cx, cy, h, decompose, alpha, v, g, &mut trail)
            && assign_reps(x, y, cx, cy, h, decompose, candidates, k + 1, g, done)
        {
            return true;
        }
        for a in trail {
            g[a] = usize::MAX;
        }
    }
    false
}

/// Sets `g(α) = v` and follows `β = rep((t+s)α)`, `g(β) = (t+s)g(α) + h(ω)`
/// around the cycle, checking `s g(β) = h(sβ)` and that images lie in
/// distinct cosets of `sY`.
#[allow(clippy::too_many_arguments)]
fn propagate_rep(
    x: &TsRack,
    y: &TsRack,
    cx: &CosetContext,
    cy: &CosetContext,
    h: &[usize],
    decompose: &dyn Fn(usize) -> (usize, usize),
    alpha: usize,
    v: usize,
    g: &mut [usize],
    trail: &mut Vec<usize>,
) -> bool {
    let mut a = alpha;
    let mut val = v;
    loop {
        if g[a] != usize::MAX {
            return g[a] == val;
        }
        if y.s(val) != h[x.s(a)] {
            return false;
        }
        let coset = cy.rep[val];
        if cx
            .reps
            .iter()
            .any(|&other| g[other] != usize::MAX && cy.rep[g[other]] == coset)
        {
            return false;
        }
        g[a] = val;
        trail.push(a);
        let next = cx.rep[x.kink(a)];
        let (alpha_n, omega_n) = decompose(next);
        debug_assert_eq!(alpha_n, a);
        val = y.add(y.kink(val), h[omega_n]);
        a = next;
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    x: &TsRack,
    y: &TsRack,
    cx: &CosetContext,
    cy: &CosetContext,
    h: &[usize],
    decompose: &dyn Fn(usize) -> (usize, usize),
    g_on_a: &[usize],
    rx: &FiniteRack,
    ry: &FiniteRack,
) -> Option<TsRackIsoCertificate> {
    let a_reps = cx.reps.clone();
    let b_reps: Vec<usize> = a_reps.iter().map(|&a| g_on_a[a]).collect();
    let orbit_a = kink_orbit(x, &a_reps);
    let orbit_b = kink_orbit(y, &b_reps);
    if orbit_a.len() != orbit_b.len() {
        return None;
    }
    let mut g = Vec::with_capacity(orbit_a.len());
    let mut image = BTreeSet::new();
    for &e in &orbit_a {
        let (alpha, omega) = decompose(e);
        let ge = y.add(y.kink(g_on_a[alpha]), h[omega]);
        if a_reps.binary_search(&e).is_ok() && g_on_a[e] != ge {
            return None;
        }
        if !image.insert(ge) {
            return None;
        }
        g.push((e, ge));
    }
    if image != orbit_b.iter().copied().collect::<BTreeSet<_>>() {
        return None;
    }
    let phi: Vec<usize> = (0..x.size())
        .map(|e| {
            let alpha = cx.rep[e];
            let omega = x.sub(e, alpha);
            y.add(g_on_a[alpha], h[omega])
        })
        .collect();
    let bijective = phi.iter().collect::<BTreeSet<_>>().len() == y.size();
    if !bijective || !rx.is_homomorphism(ry, &phi) {
        return None;
    }
    debug_assert!(b_reps.iter().map(|&b| cy.rep[b]).collect::<BTreeSet<_>>().len() == cy.reps.len());
    let h_pairs = (0..x.size()).filter(|&p| cx.in_s[p]).map(|p| (p, h[p])).collect();
    Some(TsRackIsoCertificate {
        h: h_pairs,
        a_reps,
        b_reps,
        g,
        phi,
    })
}

/// `{(t+s)^k α}` by forward iteration, sorted.
pub fn kink_orbit(r: &TsRack, seeds: &[usize]) -> Vec<usize> {
    let mut set = BTreeSet::new();
    for &a in seeds {
        let mut e = a;
        while set.insert(e) {
            e = r.kink(e);
        }
    }
    set.into_iter().collect()
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}
