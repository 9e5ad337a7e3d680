//! Blackboard-framed oriented link diagrams.
//!
//! A diagram is stored at the level of edges: an edge runs from one crossing
//! to the next along its component (a crossing-free component is a single
//! edge that is its own successor). Each crossing records the two incoming
//! and two outgoing edges. Arcs, the generators of the fundamental rack, are
//! the classes of edges joined by passing over a crossing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("malformed PD code at {quad}: {reason}")]
    MalformedPd { quad: String, reason: String },
    #[error("malformed PD code at {quad}: label {label} occurs {count} times (expected 2)")]
    LabelCount { quad: String, label: i64, count: usize },
    #[error("ambiguous over-strand direction at {quad}; use the signed form X+[...] or X-[...]")]
    Ambiguous { quad: String },
    #[error("braid letter {letter} out of range for {strands} strands")]
    BraidLetter { letter: i64, strands: usize },
    #[error("braid needs at least one strand")]
    NoStrands,
    #[error("no component {component} (diagram has {count})")]
    NoComponent { component: usize, count: usize },
    #[error("malformed link spec {0:?}")]
    LinkSpec(String),
}

/// One crossing. The under strand runs `under_in -> under_out` and the over
/// strand runs `over_in -> over_out`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub under_in: usize,
    pub under_out: usize,
    pub over_in: usize,
    pub over_out: usize,
    pub sign: i8,
}

/// `out = inp ▷ over` (sign +1) or `out = inp ▷⁻¹ over` (sign -1), on arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Relation {
    pub inp: usize,
    pub over: usize,
    pub out: usize,
    pub sign: i8,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.sign > 0 { "▷" } else { "▷⁻¹" };
        write!(f, "a{} = a{} {op} a{}", self.out, self.inp, self.over)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    edge_count: usize,
    crossings: Vec<Crossing>,
    next: Vec<usize>,
    /// Edges of each component in traversal order, starting at the least.
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
    /// Arc of each edge; arcs are numbered by their least edge.
    arc_of: Vec<usize>,
    arc_count: usize,
}

impl LinkDiagram {
    /// Builds a diagram from edge-level crossings; edges `0..edge_count`
    /// not touched by any crossing become crossing-free components.
    pub fn from_crossings(edge_count: usize, crossings: Vec<Crossing>) -> Result<Self, DiagramError> {
        let bad = |reason: String| DiagramError::MalformedPd {
            quad: "<diagram>".into(),
            reason,
        };
        let mut next = vec![usize::MAX; edge_count];
        let mut prev = vec![usize::MAX; edge_count];
        for c in &crossings {
            for (a, b) in [(c.under_in, c.under_out), (c.over_in, c.over_out)] {
                if a >= edge_count || b >= edge_count {
                    return Err(bad(format!("edge out of range in {c:?}")));
                }
                if next[a] != usize::MAX || prev[b] != usize::MAX {
                    return Err(bad(format!("edge reused in {c:?}")));
                }
                next[a] = b;
                prev[b] = a;
            }
            if c.sign != 1 && c.sign != -1 {
                return Err(bad(format!("sign must be +1 or -1 in {c:?}")));
            }
        }
        for e in 0..edge_count {
            match (next[e] == usize::MAX, prev[e] == usize::MAX) {
                (true, true) => {
                    next[e] = e;
                    prev[e] = e;
                }
                (false, false) => {}
                _ => return Err(bad(format!("edge {e} is not closed up"))),
            }
        }
        let mut component_of = vec![usize::MAX; edge_count];
        let mut components = Vec::new();
        for start in 0..edge_count {
            if component_of[start] != usize::MAX {
                continue;
            }
            let idx = components.len();
            let mut comp = Vec::new();
            let mut e = start;
            loop {
                component_of[e] = idx;
                comp.push(e);
                e = next[e];
                if e == start {
                    break;
                }
            }
            components.push(comp);
        }
        // Arcs: join over_in with over_out.
        let mut parent: Vec<usize> = (0..edge_count).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        for c in &crossings {
            let (a, b) = (find(&mut parent, c.over_in), find(&mut parent, c.over_out));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut arc_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut arc_of = vec![0; edge_count];
        for (e, slot) in arc_of.iter_mut().enumerate() {
            let r = find(&mut parent, e);
            let n = arc_ids.len();
            *slot = *arc_ids.entry(r).or_insert(n);
        }
        Ok(LinkDiagram {
            edge_count,
            crossings,
            next,
            components,
            component_of,
            arc_of,
            arc_count: arc_ids.len(),
        })
    }

    pub fn unlink(k: usize) -> Self {
        Self::from_crossings(k, Vec::new()).expect("unlink is valid")
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of_edge(&self, e: usize) -> usize {
        self.component_of[e]
    }

    pub fn successor(&self, e: usize) -> usize {
        self.next[e]
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn arc_of_edge(&self, e: usize) -> usize {
        self.arc_of[e]
    }

    /// Component of each arc.
    pub fn arc_components(&self) -> Vec<usize> {
        let mut out = vec![0; self.arc_count];
        for e in 0..self.edge_count {
            out[self.arc_of[e]] = self.component_of[e];
        }
        out
    }

    /// Per-component sum of self-crossing signs.
    pub fn writhe_vector(&self) -> Vec<i64> {
        let mut w = vec![0i64; self.components.len()];
        for c in &self.crossings {
            let (a, b) = (self.component_of[c.under_in], self.component_of[c.over_in]);
            if a == b {
                w[a] += c.sign as i64;
            }
        }
        w
    }

    pub fn crossing_relations(&self) -> Vec<Relation> {
        self.crossings
            .iter()
            .map(|c| Relation {
                inp: self.arc_of[c.under_in],
                over: self.arc_of[c.over_in],
                out: self.arc_of[c.under_out],
                sign: c.sign,
            })
            .collect()
    }

    /// Reidemeister I kink on the first edge of `component`: the strand
    /// passes over itself and then under.
    pub fn add_kink(&self, component: usize, sign: i8) -> Result<LinkDiagram, DiagramError> {
        let Some(comp) = self.components.get(component) else {
            return Err(DiagramError::NoComponent {
                component,
                count: self.components.len(),
            });
        };
        let e = comp[0];
        let mut crossings = self.crossings.clone();
        let k1 = self.edge_count;
        if self.next[e] == e {
            crossings.push(Crossing {
                under_in: k1,
                under_out: e,
                over_in: e,
                over_out: k1,
                sign,
            });
            return Self::from_crossings(self.edge_count + 1, crossings);
        }
        let k2 = k1 + 1;
        // e used to end at some crossing; k2 now ends there instead.
        for c in crossings.iter_mut() {
            if c.under_in == e {
                c.under_in = k2;
            } else if c.over_in == e {
                c.over_in = k2;
            }
        }
        crossings.push(Crossing {
            under_in: k1,
            under_out: k2,
            over_in: e,
            over_out: k1,
            sign,
        });
        Self::from_crossings(self.edge_count + 2, crossings)
    }

    /// `k` kinks of the given sign on one component.
    pub fn add_kinks(&self, component: usize, k: u64, sign: i8) -> Result<LinkDiagram, DiagramError> {
        let mut d = self.clone();
        for _ in 0..k {
            d = d.add_kink(component, sign)?;
        }
        Ok(d)
    }

    /// One diagram per `w ∈ (Z_N)^c`, in lexicographic order of `w`, with
    /// writhe vector congruent to `w` mod `N`.
    pub fn framed_family(&self, n: u64) -> Vec<(Vec<u64>, LinkDiagram)> {
        let n = n.max(1);
        let c = self.component_count();
        let base: Vec<u64> = self
            .writhe_vector()
            .iter()
            .map(|&w| w.rem_euclid(n as i64) as u64)
            .collect();
        let total = (n as usize).pow(c as u32);
        let mut out = Vec::with_capacity(total);
        let mut w = vec![0u64; c];
        for _ in 0..total {
            let mut d = self.clone();
            for i in 0..c {
                let k = (w[i] + n - base[i]) % n;
                d = d.add_kinks(i, k, 1).expect("component exists");
            }
            out.push((w.clone(), d));
            for i in (0..c).rev() {
                w[i] += 1;
                if w[i] < n {
                    break;
                }
                w[i] = 0;
            }
        }
        out
    }

    /// Disjoint union; `other`'s components come after this diagram's.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> LinkDiagram {
        let off = self.edge_count;
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|c| Crossing {
            under_in: c.under_in + off,
            under_out: c.under_out + off,
            over_in: c.over_in + off,
            over_out: c.over_out + off,
            sign: c.sign,
        }));
        Self::from_crossings(off + other.edge_count, crossings).expect("union of valid diagrams")
    }

    /// Closure of a braid on `strands` strands. Letter `i > 0` is `σ_i`: the
    /// strand in position `i` crosses over the one in position `i + 1`.
    /// Letter `-i` is the inverse.
    pub fn from_braid(strands: usize, word: &[i64]) -> Result<LinkDiagram, DiagramError> {
        if strands == 0 {
            return Err(DiagramError::NoStrands);
        }
        let mut edges = strands;
        let mut cur: Vec<usize> = (0..strands).collect();
        let mut crossings = Vec::new();
        for &letter in word {
            let i = letter.unsigned_abs() as usize;
            if letter == 0 || i >= strands {
                return Err(DiagramError::BraidLetter { letter, strands });
            }
            let (left, right) = (cur[i - 1], cur[i]);
            let (to_right, to_left) = (edges, edges + 1);
            edges += 2;
            let c = if letter > 0 {
                Crossing {
                    over_in: left,
                    over_out: to_right,
                    under_in: right,
                    under_out: to_left,
                    sign: 1,
                }
            } else {
                Crossing {
                    under_in: left,
                    under_out: to_right,
                    over_in: right,
                    over_out: to_left,
                    sign: -1,
                }
            };
            crossings.push(c);
            cur[i - 1] = to_left;
            cur[i] = to_right;
        }
        // Close up: the final edge in each position is the initial one.
        let mut rename: Vec<usize> = (0..edges).collect();
        for (p, &e) in cur.iter().enumerate() {
            rename[e] = p;
        }
        let mut ids = vec![usize::MAX; edges];
        let mut count = 0;
        for &r in rename.iter().take(edges) {
            if ids[r] == usize::MAX {
                ids[r] = count;
                count += 1;
            }
        }
        let map = |e: usize| ids[rename[e]];
        let crossings = crossings
            .into_iter()
            .map(|c| Crossing {
                under_in: map(c.under_in),
                under_out: map(c.under_out),
                over_in: map(c.over_in),
                over_out: map(c.over_out),
                sign: c.sign,
            })
            .collect();
        Self::from_crossings(count, crossings)
    }

    /// Parses `X[a,b,c,d]` quadruples (and signed `X+[...]`, `X-[...]`).
    /// `a` is the incoming under edge and `c` the outgoing one; `b`, `d`
    /// are the over edges in counterclockwise order. Positive crossings have
    /// the over strand running `d -> b`.
    pub fn from_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
        let quads = scan_quads(text)?;
        if quads.is_empty() {
            return Ok(Self::unlink(0));
        }
        let mut occurrences: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
        for (qi, q) in quads.iter().enumerate() {
            for (slot, &label) in q.labels.iter().enumerate() {
                occurrences.entry(label).or_default().push((qi, slot));
            }
        }
        for (&label, occ) in &occurrences {
            if occ.len() != 2 {
                return Err(DiagramError::LabelCount {
                    quad: quads[occ[occ.len() - 1].0].text.clone(),
                    label,
                    count: occ.len(),
                });
            }
        }
        let edge_of: BTreeMap<i64, usize> = occurrences.keys().enumerate().map(|(i, &l)| (l, i)).collect();
        let other = |qi: usize, slot: usize| -> (usize, usize) {
            let occ = &occurrences[&quads[qi].labels[slot]];
            if occ[0] == (qi, slot) {
                occ[1]
            } else {
                occ[0]
            }
        };
        // incoming[q][slot]: Some(true) if that edge ends at crossing q.
        let mut incoming: Vec<[Option<bool>; 4]> = vec![[None; 4]; quads.len()];
        let mut stack = Vec::new();
        let set = |incoming: &mut Vec<[Option<bool>; 4]>,
                   stack: &mut Vec<(usize, usize)>,
                   qi: usize,
                   slot: usize,
                   v: bool|
         -> Result<(), DiagramError> {
            match incoming[qi][slot] {
                Some(old) if old != v => Err(DiagramError::MalformedPd {
                    quad: quads[qi].text.clone(),
                    reason: format!("edge {} has inconsistent orientation", quads[qi].labels[slot]),
                }),
                Some(_) => Ok(()),
                None => {
                    incoming[qi][slot] = Some(v);
                    stack.push((qi, slot));
                    Ok(())
                }
            }
        };
        for (qi, q) in quads.iter().enumerate() {
            set(&mut incoming, &mut stack, qi, 0, true)?;
            set(&mut incoming, &mut stack, qi, 2, false)?;
            if let Some(sign) = q.sign {
                // Positive: over runs d -> b, so d is incoming.
                set(&mut incoming, &mut stack, qi, 3, sign > 0)?;
                set(&mut incoming, &mut stack, qi, 1, sign < 0)?;
            }
        }
        let propagate =
            |incoming: &mut Vec<[Option<bool>; 4]>, stack: &mut Vec<(usize, usize)>| -> Result<(), DiagramError> {
                while let Some((qi, slot)) = stack.pop() {
                    let v = incoming[qi][slot].expect("set");
                    let (oq, os) = other(qi, slot);
                    set(incoming, stack, oq, os, !v)?;
                    if slot == 1 || slot == 3 {
                        set(incoming, stack, qi, 4 - slot, !v)?;
                    }
                }
                Ok(())
            };
        propagate(&mut incoming, &mut stack)?;

        // Remaining over strands: fall back to cyclic numbering within each
        // component, taking components as consecutive label ranges.
        let ranges = component_ranges(&quads, &edge_of);
        for qi in 0..quads.len() {
            if incoming[qi][1].is_some() {
                continue;
            }
            let q = &quads[qi];
            let (b, d) = (q.labels[1], q.labels[3]);
            let range = |l: i64| ranges.iter().find(|r| r.0 <= l && l <= r.1).copied();
            let (Some(rb), Some(rd)) = (range(b), range(d)) else {
                return Err(DiagramError::MalformedPd {
                    quad: q.text.clone(),
                    reason: "labels not numbered consecutively".into(),
                });
            };
            let next = |l: i64, r: (i64, i64)| if l == r.1 { r.0 } else { l + 1 };
            let b_to_d = rb == rd && next(b, rb) == d;
            let d_to_b = rb == rd && next(d, rd) == b;
            match (b_to_d, d_to_b) {
                (true, true) => return Err(DiagramError::Ambiguous { quad: q.text.clone() }),
                (false, false) => {
                    return Err(DiagramError::MalformedPd {
                        quad: q.text.clone(),
                        reason: "over edges are not adjacent".into(),
                    })
                }
                (true, false) => set(&mut incoming, &mut stack, qi, 1, true)?,
                (false, true) => set(&mut incoming, &mut stack, qi, 3, true)?,
            }
            propagate(&mut incoming, &mut stack)?;
        }

        let mut crossings = Vec::with_capacity(quads.len());
        for (qi, q) in quads.iter().enumerate() {
            let e = |slot: usize| edge_of[&q.labels[slot]];
            let d_in = incoming[qi][3] == Some(true);
            let (over_in, over_out) = if d_in { (e(3), e(1)) } else { (e(1), e(3)) };
            let sign = if d_in { 1 } else { -1 };
            if let Some(s) = q.sign {
                debug_assert_eq!(s, sign);
            }
            crossings.push(Crossing {
                under_in: e(0),
                under_out: e(2),
                over_in,
                over_out,
                sign,
            });
        }
        Self::from_crossings(edge_of.len(), crossings).map_err(|err| match err {
            DiagramError::MalformedPd { reason, .. } => DiagramError::MalformedPd {
                quad: text.trim().to_string(),
                reason,
            },
            other => other,
        })
    }
}

struct Quad {
    labels: [i64; 4],
    sign: Option<i8>,
    text: String,
}

fn scan_quads(text: &str) -> Result<Vec<Quad>, DiagramError> {
    let mut quads = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let end = rest.find(']').ok_or_else(|| DiagramError::MalformedPd {
            quad: rest.to_string(),
            reason: "missing ']'".into(),
        })?;
        let raw = rest[..=end].trim();
        rest = rest[end + 1..].trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        let bad = |reason: &str| DiagramError::MalformedPd {
            quad: raw.to_string(),
            reason: reason.to_string(),
        };
        let (head, body) = raw.split_once('[').ok_or_else(|| bad("missing '['"))?;
        let sign = match head.trim() {
            "X" => None,
            "X+" => Some(1),
            "X-" | "X−" => Some(-1),
            _ => return Err(bad("expected X[...], X+[...] or X-[...]")),
        };
        let body = body.trim_end_matches(']');
        let nums: Vec<i64> = body
            .split(',')
            .map(|s| s.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("entries must be integers"))?;
        let labels: [i64; 4] = nums.try_into().map_err(|_| bad("expected four entries"))?;
        quads.push(Quad {
            labels,
            sign,
            text: raw.to_string(),
        });
    }
    Ok(quads)
}

/// Label ranges `[lo, hi]` of the components, joining under and over pairs.
fn component_ranges(quads: &[Quad], edge_of: &BTreeMap<i64, usize>) -> Vec<(i64, i64)> {
    let labels: Vec<i64> = edge_of.keys().copied().collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for q in quads {
        for (a, b) in [(0, 2), (1, 3)] {
            let (x, y) = (
                find(&mut parent, edge_of[&q.labels[a]]),
                find(&mut parent, edge_of[&q.labels[b]]),
            );
            parent[x] = y;
        }
    }
    let mut ranges: BTreeMap<usize, (i64, i64)> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        let r = find(&mut parent, i);
        let e = ranges.entry(r).or_insert((l, l));
        e.0 = e.0.min(l);
        e.1 = e.1.max(l);
    }
    ranges.into_values().collect()
}

/// A link given as `pd: ...`, `braid: strands: letters...` or `unknots: k`
/// parts joined by `;`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkSpec {
    pub text: String,
    pub diagram: LinkDiagram,
}

impl FromStr for LinkSpec {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut diagram: Option<LinkDiagram> = None;
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (kind, body) = part
                .split_once(':')
                .ok_or_else(|| DiagramError::LinkSpec(part.to_string()))?;
            let body = body.trim();
            let d = match kind.trim() {
                "pd" => LinkDiagram::from_pd(body)?,
                "braid" => {
                    let (strands, letters) = body
                        .split_once(':')
                        .ok_or_else(|| DiagramError::LinkSpec(part.to_string()))?;
                    let strands: usize = strands
                        .trim()
                        .parse()
                        .map_err(|_| DiagramError::LinkSpec(part.to_string()))?;
                    let word: Vec<i64> = letters
                        .split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|t| !t.is_empty())
                        .map(|t| t.parse::<i64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| DiagramError::LinkSpec(part.to_string()))?;
                    LinkDiagram::from_braid(strands, &word)?
                }
                "unknots" => {
                    let k: usize = body.parse().map_err(|_| DiagramError::LinkSpec(part.to_string()))?;
                    LinkDiagram::unlink(k)
                }
                _ => return Err(DiagramError::LinkSpec(part.to_string())),
            };
            diagram = Some(match diagram {
                None => d,
                Some(prev) => prev.disjoint_union(&d),
            });
        }
        let diagram = diagram.ok_or_else(|| DiagramError::LinkSpec(s.to_string()))?;
        Ok(LinkSpec {
            text: s.trim().to_string(),
            diagram,
        })
    }
}
