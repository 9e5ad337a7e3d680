//! Rack labelings of framed diagrams and the counting invariants built on
//! them.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::diagram::{LinkDiagram, Relation};
use crate::poly::{EnhancedMultiset, InvariantPolynomial, Monomial};
use crate::rack::FiniteRack;
use crate::tsrack::TsRack;

/// Label of each arc, arcs in diagram order.
pub type Labeling = Vec<usize>;

/// The operations a labeling search needs.
pub trait RackOps: Sync {
    fn size(&self) -> usize;
    fn op(&self, x: usize, y: usize) -> usize;
    fn inv_op(&self, x: usize, y: usize) -> usize;
}

impl RackOps for FiniteRack {
    fn size(&self) -> usize {
        FiniteRack::size(self)
    }
    fn op(&self, x: usize, y: usize) -> usize {
        FiniteRack::op(self, x, y)
    }
    fn inv_op(&self, x: usize, y: usize) -> usize {
        FiniteRack::inv_op(self, x, y)
    }
}

impl RackOps for TsRack {
    fn size(&self) -> usize {
        TsRack::size(self)
    }
    fn op(&self, x: usize, y: usize) -> usize {
        TsRack::op(self, x, y)
    }
    fn inv_op(&self, x: usize, y: usize) -> usize {
        TsRack::inv_op(self, x, y)
    }
}

const UNSET: usize = usize::MAX;

struct Search<'a, R: RackOps> {
    rack: &'a R,
    relations: Vec<Relation>,
    touching: Vec<Vec<usize>>,
    labels: Vec<usize>,
    trail: Vec<usize>,
}

impl<R: RackOps> Search<'_, R> {
    fn set(&mut self, arc: usize, v: usize, queue: &mut Vec<usize>) -> bool {
        match self.labels[arc] {
            UNSET => {
                self.labels[arc] = v;
                self.trail.push(arc);
                queue.push(arc);
                true
            }
            old => old == v,
        }
    }

    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(arc) = queue.pop() {
            for k in 0..self.touching[arc].len() {
                let r = self.relations[self.touching[arc][k]];
                let (i, o, y) = (self.labels[r.inp], self.labels[r.out], self.labels[r.over]);
                if y == UNSET {
                    continue;
                }
                let ok = if i != UNSET {
                    let v = if r.sign > 0 {
                        self.rack.op(i, y)
                    } else {
                        self.rack.inv_op(i, y)
                    };
                    self.set(r.out, v, &mut queue)
                } else if o != UNSET {
                    let v = if r.sign > 0 {
                        self.rack.inv_op(o, y)
                    } else {
                        self.rack.op(o, y)
                    };
                    self.set(r.inp, v, &mut queue)
                } else {
                    true
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, to: usize) {
        while self.trail.len() > to {
            let a = self.trail.pop().unwrap();
            self.labels[a] = UNSET;
        }
    }

    fn run(&mut self, out: &mut Vec<Labeling>) {
        let Some(arc) = self.labels.iter().position(|&l| l == UNSET) else {
            out.push(self.labels.clone());
            return;
        };
        for v in 0..self.rack.size() {
            let mark = self.trail.len();
            let mut queue = Vec::new();
            if self.set(arc, v, &mut queue) && self.propagate(queue) {
                self.run(out);
            }
            self.undo(mark);
        }
    }
}

fn touching(d: &LinkDiagram, relations: &[Relation]) -> Vec<Vec<usize>> {
    let mut t = vec![Vec::new(); d.arc_count()];
    for (k, r) in relations.iter().enumerate() {
        for a in [r.inp, r.over, r.out] {
            if !t[a].contains(&k) {
                t[a].push(k);
            }
        }
    }
    t
}

/// All labelings of `d` by `x`, by backtracking over arcs in component
/// order with propagation through the crossing relations. Sorted.
pub fn enumerate_homs<R: RackOps>(d: &LinkDiagram, x: &R) -> Vec<Labeling> {
    let relations = d.crossing_relations();
    let mut s = Search {
        rack: x,
        touching: touching(d, &relations),
        relations,
        labels: vec![UNSET; d.arc_count()],
        trail: Vec::new(),
    };
    let mut out = Vec::new();
    s.run(&mut out);
    out.sort();
    out
}

pub fn is_labeling<R: RackOps>(d: &LinkDiagram, x: &R, f: &[usize]) -> bool {
    f.len() == d.arc_count()
        && f.iter().all(|&v| v < x.size())
        && d.crossing_relations().iter().all(|r| {
            let v = if r.sign > 0 {
                x.op(f[r.inp], f[r.over])
            } else {
                x.inv_op(f[r.inp], f[r.over])
            };
            v == f[r.out]
        })
}

/// A linear combination `Σ E_j(v_j)` of free variables, each `E_j` an
/// additive endomorphism stored as a table.
#[derive(Clone, Debug)]
struct Form {
    terms: BTreeMap<usize, Vec<usize>>,
}

struct Linear<'a> {
    x: &'a TsRack,
}

impl Linear<'_> {
    fn var(&self, v: usize) -> Form {
        Form {
            terms: BTreeMap::from([(v, (0..self.x.size()).collect())]),
        }
    }

    fn map(&self, f: &Form, table: &[usize]) -> Form {
        Form {
            terms: f
                .terms
                .iter()
                .map(|(&v, e)| (v, e.iter().map(|&a| table[a]).collect()))
                .collect(),
        }
    }

    fn add(&self, a: &Form, b: &Form) -> Form {
        let mut terms = a.terms.clone();
        for (&v, e) in &b.terms {
            match terms.get_mut(&v) {
                Some(cur) => {
                    for (c, &y) in cur.iter_mut().zip(e) {
                        *c = self.x.add(*c, y);
                    }
                }
                None => {
                    terms.insert(v, e.clone());
                }
            }
        }
        terms.retain(|_, e| e.iter().any(|&y| y != 0));
        Form { terms }
    }

    fn neg(&self, a: &Form) -> Form {
        let neg: Vec<usize> = (0..self.x.size()).map(|y| self.x.neg(y)).collect();
        self.map(a, &neg)
    }

    /// `t a + s b`.
    fn op(&self, a: &Form, b: &Form) -> Form {
        self.add(&self.map(a, self.x.t_table()), &self.map(b, self.x.s_table()))
    }

    /// `t⁻¹(a - s b)`.
    fn inv_op(&self, a: &Form, b: &Form) -> Form {
        let t_inv: Vec<usize> = (0..self.x.size()).map(|y| self.x.t_inv(y)).collect();
        let diff = self.add(a, &self.neg(&self.map(b, self.x.s_table())));
        self.map(&diff, &t_inv)
    }

    fn eval(&self, f: &Form, vals: &[usize]) -> usize {
        f.terms.iter().fold(0, |acc, (&v, e)| self.x.add(acc, e[vals[v]]))
    }
}

/// All labelings of `d` by a `(t,s)`-rack, solving the crossing relations
/// as an affine system: each arc label becomes a linear form in free
/// variables, and only the leftover relations are checked by enumeration.
/// Agrees with [`enumerate_homs`]; sorted.
pub fn enumerate_homs_linear(d: &LinkDiagram, x: &TsRack) -> Vec<Labeling> {
    let lin = Linear { x };
    let relations = d.crossing_relations();
    let touch = touching(d, &relations);
    let mut forms: Vec<Option<Form>> = vec![None; d.arc_count()];
    let mut residuals: Vec<Form> = Vec::new();
    let mut vars = 0;
    while let Some(seed) = forms.iter().position(|f| f.is_none()) {
        forms[seed] = Some(lin.var(vars));
        vars += 1;
        let mut queue = vec![seed];
        while let Some(arc) = queue.pop() {
            for &k in &touch[arc] {
                let r = relations[k];
                let Some(y) = forms[r.over].clone() else { continue };
                let (i, o) = (forms[r.inp].clone(), forms[r.out].clone());
                let (target, value) = match (&i, &o) {
                    (Some(i), _) if r.sign > 0 => (r.out, lin.op(i, &y)),
                    (Some(i), _) => (r.out, lin.inv_op(i, &y)),
                    (None, Some(o)) if r.sign > 0 => (r.inp, lin.inv_op(o, &y)),
                    (None, Some(o)) => (r.inp, lin.op(o, &y)),
                    (None, None) => continue,
                };
                match &forms[target] {
                    None => {
                        forms[target] = Some(value);
                        queue.push(target);
                    }
                    Some(existing) => {
                        let res = lin.add(&value, &lin.neg(existing));
                        if !res.terms.is_empty() {
                            residuals.push(res);
                        }
                    }
                }
            }
        }
    }
    let forms: Vec<Form> = forms.into_iter().map(|f| f.expect("every arc has a form")).collect();
    // Each relation either defined a form or left a residual.
    let m = x.size();
    let mut out = Vec::new();
    let mut vals = vec![0usize; vars];
    'outer: loop {
        if residuals.iter().all(|r| lin.eval(r, &vals) == 0) {
            let f: Labeling = forms.iter().map(|form| lin.eval(form, &vals)).collect();
            debug_assert!(is_labeling(d, x, &f));
            out.push(f);
        }
        for v in (0..vars).rev() {
            vals[v] += 1;
            if vals[v] < m {
                continue 'outer;
            }
            vals[v] = 0;
        }
        break;
    }
    out.sort();
    out.dedup();
    out
}

/// `(framing, labeling count)` over the framed family with period `n`.
pub fn framing_counts<R: RackOps>(l: &LinkDiagram, x: &R, n: u64) -> Vec<(Vec<u64>, u64)> {
    l.framed_family(n)
        .par_iter()
        .map(|(w, d)| (w.clone(), enumerate_homs(d, x).len() as u64))
        .collect()
}

/// `Φ^Z`: labelings summed over one period of framings.
pub fn counting_invariant(l: &LinkDiagram, x: &FiniteRack) -> u64 {
    framing_counts(l, x, x.rank().rank).iter().map(|(_, c)| c).sum()
}

/// `Φ^Z` for a `(t,s)`-rack via the linear solver.
pub fn counting_invariant_linear(l: &LinkDiagram, x: &TsRack) -> u64 {
    l.framed_family(x.kink_order())
        .par_iter()
        .map(|(_, d)| enumerate_homs_linear(d, x).len() as u64)
        .sum()
}

/// `Φ^W = Σ_w |Hom| q^w`.
pub fn writhe_enhanced(l: &LinkDiagram, x: &FiniteRack) -> InvariantPolynomial {
    let mut p = InvariantPolynomial::zero();
    for (w, count) in framing_counts(l, x, x.rank().rank) {
        p.add_term(Monomial::q(&w), count as i64);
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnhancedInvariant {
    pub polynomial: InvariantPolynomial,
    pub multiset: EnhancedMultiset,
}

fn labelings_per_framing(l: &LinkDiagram, x: &TsRack) -> Vec<Vec<Labeling>> {
    l.framed_family(x.kink_order())
        .par_iter()
        .map(|(_, d)| enumerate_homs_linear(d, x))
        .collect()
}

/// `Φ^{ts,+}`: `u^{|AC(Im f)|}` summed over labelings of all framings,
/// with the invariant factors of each `AC(Im f)`.
pub fn additive_enhanced(l: &LinkDiagram, x: &TsRack) -> EnhancedInvariant {
    let mut poly = InvariantPolynomial::zero();
    let mut multiset: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let mut cache: HashMap<Vec<usize>, (u64, Vec<u64>)> = HashMap::new();
    for labelings in labelings_per_framing(l, x) {
        for f in labelings {
            let mut image = f.clone();
            image.sort_unstable();
            image.dedup();
            let (size, factors) = cache
                .entry(image)
                .or_insert_with_key(|image| {
                    let ac = x.additive_closure(image);
                    (ac.len() as u64, x.invariant_factors_unchecked(&ac))
                })
                .clone();
            poly.add_term(Monomial::u(size), 1);
            *multiset.entry(factors).or_insert(0) += 1;
        }
    }
    EnhancedInvariant {
        polynomial: poly,
        multiset: EnhancedMultiset::InvariantFactors(multiset),
    }
}

/// `Φ^{ts,s}`: each labeling `f` projects to the `sX`-labeling `s∘f`;
/// every such `g` with a nonempty fiber contributes `u^{|fiber|}`.
pub fn s_enhanced(l: &LinkDiagram, x: &TsRack) -> EnhancedInvariant {
    let mut poly = InvariantPolynomial::zero();
    let mut sizes: BTreeMap<u64, u64> = BTreeMap::new();
    for labelings in labelings_per_framing(l, x) {
        let mut fibers: BTreeMap<Labeling, u64> = BTreeMap::new();
        for f in labelings {
            let g: Labeling = f.iter().map(|&v| x.s(v)).collect();
            *fibers.entry(g).or_insert(0) += 1;
        }
        for (_, size) in fibers {
            poly.add_term(Monomial::u(size), 1);
            *sizes.entry(size).or_insert(0) += 1;
        }
    }
    EnhancedInvariant {
        polynomial: poly,
        multiset: EnhancedMultiset::FiberSizes(sizes),
    }
}

/// `P(1)`.
pub fn recover_counting_from_additive(p: &InvariantPolynomial) -> i64 {
    p.eval_at_one()
}

/// `Σ coeff · exponent`.
pub fn recover_counting_from_s(p: &InvariantPolynomial) -> i64 {
    p.weighted_u_sum()
}
