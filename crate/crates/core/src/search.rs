//! Backtracking search for bijections between two finite structures that
//! preserve a list of binary and unary operation tables.
//!
//! Used for rack isomorphism (one binary operation) and for module
//! isomorphism (addition plus the `t` and `s` actions). Each element carries
//! a profile vector of isomorphism invariants; candidates must match profiles
//! exactly. Profiles prune, they never decide.

/// Operation tables over elements `0..n`. Binary tables are row-major:
/// `binary[k][a * n + b]`.
#[derive(Debug, Clone)]
pub struct Structure {
    pub n: usize,
    pub binary: Vec<Vec<usize>>,
    pub unary: Vec<Vec<usize>>,
    pub profiles: Vec<Vec<u64>>,
}

impl Structure {
    fn same_signature(&self, other: &Structure) -> bool {
        self.n == other.n && self.binary.len() == other.binary.len() && self.unary.len() == other.unary.len()
    }
}

struct State<'a> {
    a: &'a Structure,
    b: &'a Structure,
    forward: Vec<Option<usize>>,
    used: Vec<bool>,
    trail: Vec<usize>,
    assigned: Vec<usize>,
}

impl<'a> State<'a> {
    fn assign(&mut self, x: usize, y: usize, queue: &mut Vec<usize>) -> bool {
        match self.forward[x] {
            Some(v) => v == y,
            None => {
                if self.used[y] || self.a.profiles[x] != self.b.profiles[y] {
                    return false;
                }
                self.forward[x] = Some(y);
                self.used[y] = true;
                self.trail.push(x);
                queue.push(x);
                true
            }
        }
    }

    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        let n = self.a.n;
        while let Some(x) = queue.pop() {
            let fx = self.forward[x].expect("queued elements are assigned");
            for k in 0..self.a.unary.len() {
                let (ux, ufx) = (self.a.unary[k][x], self.b.unary[k][fx]);
                if !self.assign(ux, ufx, &mut queue) {
                    return false;
                }
            }
            self.assigned.push(x);
            let partners = self.assigned.clone();
            for z in partners {
                let fz = self.forward[z].expect("assigned");
                for k in 0..self.a.binary.len() {
                    let ta = &self.a.binary[k];
                    let tb = &self.b.binary[k];
                    if !self.assign(ta[x * n + z], tb[fx * n + fz], &mut queue) {
                        return false;
                    }
                    if !self.assign(ta[z * n + x], tb[fz * n + fx], &mut queue) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, trail_len: usize, assigned_len: usize) {
        while self.trail.len() > trail_len {
            let x = self.trail.pop().unwrap();
            let y = self.forward[x].take().unwrap();
            self.used[y] = false;
        }
        self.assigned.truncate(assigned_len);
    }

    fn search(&mut self, from: usize) -> bool {
        let next = (from..self.a.n).find(|&x| self.forward[x].is_none());
        let Some(x) = next else {
            return true;
        };
        for y in 0..self.b.n {
            if self.used[y] || self.a.profiles[x] != self.b.profiles[y] {
                continue;
            }
            let (tl, al) = (self.trail.len(), self.assigned.len());
            let mut queue = Vec::new();
            if self.assign(x, y, &mut queue) && self.propagate(queue) && self.search(x + 1) {
                return true;
            }
            self.undo_to(tl, al);
        }
        false
    }
}

/// Finds the lexicographically least structure-preserving bijection `a -> b`
/// extending the forced pairs in `fixed`, if any.
pub fn find_isomorphism(a: &Structure, b: &Structure, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
    if !a.same_signature(b) {
        return None;
    }
    let mut pa = a.profiles.clone();
    let mut pb = b.profiles.clone();
    pa.sort();
    pb.sort();
    if pa != pb {
        return None;
    }
    let mut state = State {
        a,
        b,
        forward: vec![None; a.n],
        used: vec![false; b.n],
        trail: Vec::new(),
        assigned: Vec::new(),
    };
    let mut queue = Vec::new();
    for &(x, y) in fixed {
        if !state.assign(x, y, &mut queue) {
            return None;
        }
    }
    if !state.propagate(queue) {
        return None;
    }
    if state.search(0) {
        Some(state.forward.into_iter().map(|v| v.unwrap()).collect())
    } else {
        None
    }
}

/// Calls `visit` on every structure-preserving bijection `a -> b` extending
/// `fixed`, in lexicographic order, until `visit` returns `true`.
pub fn for_each_isomorphism<F>(a: &Structure, b: &Structure, fixed: &[(usize, usize)], mut visit: F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    if !a.same_signature(b) {
        return false;
    }
    let mut state = State {
        a,
        b,
        forward: vec![None; a.n],
        used: vec![false; b.n],
        trail: Vec::new(),
        assigned: Vec::new(),
    };
    let mut queue = Vec::new();
    for &(x, y) in fixed {
        if !state.assign(x, y, &mut queue) {
            return false;
        }
    }
    if !state.propagate(queue) {
        return false;
    }
    enumerate(&mut state, 0, &mut visit)
}

fn enumerate<F>(state: &mut State<'_>, from: usize, visit: &mut F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    let next = (from..state.a.n).find(|&x| state.forward[x].is_none());
    let Some(x) = next else {
        let map: Vec<usize> = state.forward.iter().map(|v| v.unwrap()).collect();
        return visit(&map);
    };
    for y in 0..state.b.n {
        if state.used[y] || state.a.profiles[x] != state.b.profiles[y] {
            continue;
        }
        let (tl, al) = (state.trail.len(), state.assigned.len());
        let mut queue = Vec::new();
        if state.assign(x, y, &mut queue) && state.propagate(queue) && enumerate(state, x + 1, visit) {
            return true;
        }
        state.undo_to(tl, al);
    }
    false
}

/// Sorted cycle lengths of a permutation.
pub fn cycle_type(perm: &[usize]) -> Vec<u64> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    lengths
}
