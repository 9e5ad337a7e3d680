#![allow(dead_code)]

use std::path::Path;
use std::str::FromStr;

use tsrack::cli::parse_link_list;
use tsrack::tsrack::enumerate_linear;
use tsrack::{AbelianGroup, FiniteRack, LinkDiagram, LinkSpec, TsRack};

pub fn corpus() -> Vec<(String, LinkSpec)> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/links.tsv");
    let text = std::fs::read_to_string(path).expect("corpus file");
    parse_link_list(&text)
        .expect("corpus lines")
        .into_iter()
        .map(|(line, name, spec)| {
            let l = LinkSpec::from_str(&spec).unwrap_or_else(|e| panic!("line {line} ({name}): {e}"));
            (name, l)
        })
        .collect()
}

pub fn corpus_link(name: &str) -> LinkDiagram {
    corpus()
        .into_iter()
        .find(|(n, _)| n == name)
        .unwrap_or_else(|| panic!("{name} not in corpus"))
        .1
        .diagram
}

pub fn is_knot_name(name: &str) -> bool {
    !name.starts_with('L')
}

pub fn braid(strands: usize, word: &[i64]) -> LinkDiagram {
    LinkDiagram::from_braid(strands, word).unwrap()
}

pub fn trefoil() -> LinkDiagram {
    braid(2, &[1, 1, 1])
}

pub fn hopf() -> LinkDiagram {
    braid(2, &[1, 1])
}

/// `Z_2 ⊕ Z_2` with `t = Id, s(x, y) = (0, x)` and `Z_4` with `t = 1, s = 2`.
pub fn example_modules() -> Vec<(String, TsRack)> {
    let v4 = AbelianGroup::new(vec![2, 2]).unwrap();
    vec![
        (
            "Z2+Z2 t=Id s(x,y)=(0,x)".into(),
            TsRack::module(v4, &[vec![1, 0], vec![0, 1]], &[vec![0, 0], vec![1, 0]]).unwrap(),
        ),
        (
            "Z4 t=1 s=2".into(),
            TsRack::module(AbelianGroup::cyclic(4).unwrap(), &[vec![1]], &[vec![2]]).unwrap(),
        ),
        ("quotient(2, t+1)".into(), TsRack::quotient(2, &[1, 1]).unwrap()),
    ]
}

/// Every valid `(t, s)` pair of 2x2 matrices over `Z_2`.
pub fn all_v4_modules() -> Vec<TsRack> {
    let v4 = AbelianGroup::new(vec![2, 2]).unwrap();
    let mats: Vec<Vec<Vec<i64>>> = (0..16)
        .map(|b: i64| vec![vec![b & 1, (b >> 1) & 1], vec![(b >> 2) & 1, (b >> 3) & 1]])
        .collect();
    let mut out = Vec::new();
    for t in &mats {
        for s in &mats {
            if let Ok(r) = TsRack::module(v4.clone(), t, s) {
                out.push(r);
            }
        }
    }
    out
}

pub fn linear_racks(max_n: u64) -> Vec<(String, TsRack)> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for (t, s) in enumerate_linear(n) {
            out.push((format!("linear({n},{t},{s})"), TsRack::linear(n, t, s).unwrap()));
        }
    }
    out
}

/// Racks the property suites run over.
pub fn constructed_tsracks() -> Vec<(String, TsRack)> {
    let mut out = linear_racks(12);
    out.extend(example_modules());
    out.push(("quotient(3, t+1)".into(), TsRack::quotient(3, &[1, 1]).unwrap()));
    out.push(("quotient(2, t^2+1)".into(), TsRack::quotient(2, &[1, 0, 1]).unwrap()));
    for (i, r) in all_v4_modules().into_iter().enumerate() {
        out.push((format!("v4 module #{i}"), r));
    }
    out
}

/// Labelings by exhaustive enumeration of all arc assignments, checking
/// each crossing against the rack matrix directly.
pub fn brute_force_labelings(d: &LinkDiagram, x: &FiniteRack) -> Option<Vec<Vec<usize>>> {
    let n = x.size();
    let arcs = d.arc_count();
    let total = (n as u128).checked_pow(arcs as u32)?;
    if total > 200_000 {
        return None;
    }
    let m = x.matrix();
    let rels = d.crossing_relations();
    let mut out = Vec::new();
    let mut f = vec![0usize; arcs];
    for _ in 0..total {
        let ok = rels.iter().all(|r| {
            // matrix row = left operand, column = right operand, 1-based
            if r.sign > 0 {
                m[f[r.inp]][f[r.over]] - 1 == f[r.out]
            } else {
                m[f[r.out]][f[r.over]] - 1 == f[r.inp]
            }
        });
        if ok {
            out.push(f.clone());
        }
        for v in f.iter_mut() {
            *v += 1;
            if *v < n {
                break;
            }
            *v = 0;
        }
    }
    out.sort();
    Some(out)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// `x ▷ (y ▷ z) = (x ▷ y) ▷ (x ▷ z)` for all triples.
pub fn left_distributive(r: &FiniteRack) -> bool {
    let n = r.size();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| r.op(x, r.op(y, z)) == r.op(r.op(x, y), r.op(x, z)))))
}

/// Alexander quandle: `s = 1 - t` as maps.
pub fn alexander_by_definition(x: &TsRack) -> bool {
    (0..x.size()).all(|v| x.s(v) == x.sub(v, x.t(v)))
}

pub fn translation_is_automorphism(x: &TsRack, z: usize) -> bool {
    let fr = x.to_finite_rack();
    let p: Vec<usize> = (0..x.size()).map(|v| x.add(v, z)).collect();
    fr.is_homomorphism(&fr, &p)
}
