//! Command front end: input loading, result records, the on-disk cache and
//! the grouped table report. The binary is a thin clap layer over this.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diagram::{DiagramError, LinkSpec};
use crate::invariants;
use crate::poly::{order_compare, EnhancedMultiset, InvariantPolynomial, PolyOrder};
use crate::rack::{FiniteRack, RackError};
use crate::spec::{RackInput, TsRackSpec};
use crate::tsrack::{self, TsRackError};

/// Bumped whenever the record layout or any invariant computation changes.
pub const RECORD_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+r1");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid structure: {0}")]
    Validation(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Internal(_) => 4,
            CliError::Io { .. } => 5,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

fn rack_error(context: &str, e: RackError) -> CliError {
    match e {
        RackError::Parse(_) | RackError::Empty | RackError::NotSquare { .. } => {
            CliError::Parse(format!("{context}: {e}"))
        }
        _ => CliError::Validation(format!("{context}: {e}")),
    }
}

fn tsrack_error(context: &str, e: TsRackError) -> CliError {
    CliError::Validation(format!("{context}: {e}"))
}

fn diagram_error(context: &str, e: DiagramError) -> CliError {
    CliError::Parse(format!("{context}: {e}"))
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn parse_spec(text: &str, context: &str) -> Result<RackInput, CliError> {
    let spec: TsRackSpec =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{context}: bad rack spec: {e}")))?;
    let rack = spec.build().map_err(|e| tsrack_error(context, e))?;
    Ok(RackInput::Module {
        spec,
        rack: Box::new(rack),
    })
}

/// Inline JSON spec, or a file holding either a JSON spec or a rack matrix.
pub fn load_rack(arg: &str) -> Result<RackInput, CliError> {
    let arg = arg.trim();
    if arg.starts_with('{') {
        return parse_spec(arg, "--rack");
    }
    let path = Path::new(arg);
    let text = strip_comments(&read(path)?);
    let context = path.display().to_string();
    if text.starts_with('{') {
        parse_spec(&text, &context)
    } else {
        let rack = FiniteRack::from_str(&text).map_err(|e| rack_error(&context, e))?;
        Ok(RackInput::Matrix(rack))
    }
}

fn looks_like_link_spec(arg: &str) -> bool {
    matches!(arg.split_once(':'), Some((head, _)) if matches!(head.trim(), "pd" | "braid" | "unknots"))
}

/// Inline link spec, or a file holding one (comment lines skipped).
pub fn load_link(arg: &str) -> Result<LinkSpec, CliError> {
    if looks_like_link_spec(arg) {
        return LinkSpec::from_str(arg).map_err(|e| diagram_error("--link", e));
    }
    let path = Path::new(arg);
    let text = strip_comments(&read(path)?).replace('\n', " ");
    LinkSpec::from_str(&text).map_err(|e| diagram_error(&path.display().to_string(), e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantKind {
    Count,
    Writhe,
    Additive,
    SEnh,
}

impl InvariantKind {
    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::Count => "count",
            InvariantKind::Writhe => "writhe",
            InvariantKind::Additive => "additive",
            InvariantKind::SEnh => "s-enh",
        }
    }
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InvariantKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "count" => InvariantKind::Count,
            "writhe" => InvariantKind::Writhe,
            "additive" => InvariantKind::Additive,
            "s-enh" => InvariantKind::SEnh,
            _ => return Err(CliError::Parse(format!("unknown invariant kind {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: i64,
    pub u: u64,
    pub q: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub invariant: InvariantKind,
    pub rack_spec: String,
    pub rack_spec_hash: String,
    pub link_spec: String,
    pub polynomial: String,
    pub terms: Vec<Term>,
    pub multiset: Option<EnhancedMultiset>,
    pub counting_value: u64,
}

impl ResultRecord {
    pub fn to_polynomial(&self) -> InvariantPolynomial {
        let mut p = InvariantPolynomial::zero();
        for t in &self.terms {
            p.add_term(crate::poly::Monomial::new(t.u, t.q.clone()), t.coefficient);
        }
        p
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.polynomial));
        out.push_str(&format!("invariant: {}\n", self.invariant));
        out.push_str(&format!("rack: {}\n", self.rack_spec));
        out.push_str(&format!("link: {}\n", self.link_spec));
        if let Some(m) = &self.multiset {
            out.push_str(&format!("multiset: {m}\n"));
        }
        out.push_str(&format!("counting value: {}\n", self.counting_value));
        out
    }
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Computes one invariant of one link. Additive and s-enhanced invariants
/// need the module structure, so a bare matrix rack is rejected for them.
pub fn compute(rack: &RackInput, link: &LinkSpec, kind: InvariantKind) -> Result<ResultRecord, CliError> {
    let d = &link.diagram;
    let (poly, multiset, count) = match (kind, rack) {
        (InvariantKind::Count, RackInput::Module { rack, .. }) => {
            let c = invariants::counting_invariant_linear(d, rack);
            (InvariantPolynomial::constant(c as i64), None, c)
        }
        (InvariantKind::Count, RackInput::Matrix(r)) => {
            let c = invariants::counting_invariant(d, r);
            (InvariantPolynomial::constant(c as i64), None, c)
        }
        (InvariantKind::Writhe, r) => {
            let p = invariants::writhe_enhanced(d, &r.finite_rack());
            let c = p.eval_at_one();
            (p, None, c as u64)
        }
        (InvariantKind::Additive | InvariantKind::SEnh, RackInput::Matrix(_)) => {
            return Err(CliError::Validation(format!(
                "the {kind} invariant needs a (t,s)-rack spec, not a bare rack matrix"
            )));
        }
        (InvariantKind::Additive, RackInput::Module { rack, .. }) => {
            let e = invariants::additive_enhanced(d, rack);
            let c = invariants::recover_counting_from_additive(&e.polynomial);
            (e.polynomial, Some(e.multiset), c as u64)
        }
        (InvariantKind::SEnh, RackInput::Module { rack, .. }) => {
            let e = invariants::s_enhanced(d, rack);
            let c = invariants::recover_counting_from_s(&e.polynomial);
            (e.polynomial, Some(e.multiset), c as u64)
        }
    };
    if let Some(m) = &multiset {
        if m.to_polynomial() != poly {
            return Err(CliError::Internal(format!(
                "multiset {m} disagrees with polynomial {poly}"
            )));
        }
    }
    let rack_spec = rack.canonical();
    Ok(ResultRecord {
        invariant: kind,
        rack_spec_hash: sha256_hex(&rack_spec),
        rack_spec,
        link_spec: link.text.clone(),
        polynomial: poly.to_string(),
        terms: poly
            .terms()
            .map(|(m, c)| Term {
                coefficient: c,
                u: m.u,
                q: m.q.clone(),
            })
            .collect(),
        multiset,
        counting_value: count,
    })
}

/// Content-addressed result store; one JSON file per key.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        Self::with_version(dir, RECORD_VERSION)
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: &str) -> Result<Self, CliError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Cache {
            dir,
            version: version.to_string(),
        })
    }

    pub fn key(&self, rack_spec: &str, link_spec: &str, kind: InvariantKind) -> String {
        sha256_hex(&format!("{}\0{}\0{}\0{}", self.version, kind, rack_spec, link_spec))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn lookup(&self, key: &str) -> Option<ResultRecord> {
        let path = self.path(key);
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str(&text) {
            Ok(r) => Some(r),
            Err(e) => {
                log::warn!("ignoring corrupt cache entry {}: {e}", path.display());
                None
            }
        }
    }

    /// Writes to a temporary file in the cache directory, then renames.
    pub fn store(&self, key: &str, record: &ResultRecord) -> Result<(), CliError> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        tmp.write_all(record.to_json().as_bytes())
            .map_err(|e| CliError::io(tmp.path(), e))?;
        let path = self.path(key);
        tmp.persist(&path).map_err(|e| CliError::io(&path, e.error))?;
        Ok(())
    }
}

/// `compute` behind an optional cache.
pub fn compute_cached(
    rack: &RackInput,
    link: &LinkSpec,
    kind: InvariantKind,
    cache: Option<&Cache>,
) -> Result<ResultRecord, CliError> {
    let Some(cache) = cache else {
        return compute(rack, link, kind);
    };
    let key = cache.key(&rack.canonical(), &link.text, kind);
    if let Some(r) = cache.lookup(&key) {
        log::debug!("cache hit {key}");
        return Ok(r);
    }
    let r = compute(rack, link, kind)?;
    if let Err(e) = cache.store(&key, &r) {
        log::warn!("could not write cache entry: {e}");
    }
    Ok(r)
}

/// Orders names like `3_1 < 8_18 < 10_1 < L2a1 < L10a1`.
pub fn natural_key(name: &str) -> Vec<(bool, u64, String)> {
    let mut out = Vec::new();
    let mut chars = name.chars().peekable();
    while let Some(&c) = chars.peek() {
        let digit = c.is_ascii_digit();
        let mut chunk = String::new();
        while let Some(&c) = chars.peek() {
            if c.is_ascii_digit() != digit {
                break;
            }
            chunk.push(c);
            chars.next();
        }
        let value = if digit { chunk.parse().unwrap_or(u64::MAX) } else { 0 };
        out.push((!digit, value, chunk));
    }
    out
}

/// `name<whitespace>spec` lines; blank lines and `#` comments skipped.
/// Returns `(line number, name, spec text)`.
pub fn parse_link_list(text: &str) -> Result<Vec<(usize, String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, spec) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| CliError::Parse(format!("line {}: expected a name and a link spec", i + 1)))?;
        out.push((i + 1, name.to_string(), spec.trim().to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub polynomial: String,
    pub links: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableFailure {
    pub link: String,
    pub line: usize,
    pub error: String,
}

/// `lesser <_X greater` between two rows, by row index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableOrder {
    pub lesser: usize,
    pub greater: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub invariant: InvariantKind,
    pub rack_spec: String,
    pub rows: Vec<TableRow>,
    pub failures: Vec<TableFailure>,
    pub order: Vec<TableOrder>,
    pub strict_order: bool,
}

/// Computes every link in parallel and groups equal polynomials. Rows are
/// sorted by polynomial so the result does not depend on input line order.
pub fn table_command(
    rack: &RackInput,
    links: &[(usize, String, String)],
    kind: InvariantKind,
    cache: Option<&Cache>,
    strict_order: bool,
) -> Table {
    let results: Vec<(usize, String, Result<ResultRecord, CliError>)> = links
        .par_iter()
        .map(|(line, name, spec)| {
            let r = LinkSpec::from_str(spec)
                .map_err(|e| diagram_error(&format!("line {line} ({name})"), e))
                .and_then(|l| compute_cached(rack, &l, kind, cache));
            (*line, name.clone(), r)
        })
        .collect();
    let mut groups: BTreeMap<InvariantPolynomial, Vec<String>> = BTreeMap::new();
    let mut failures = Vec::new();
    for (line, name, r) in results {
        match r {
            Ok(rec) => groups.entry(rec.to_polynomial()).or_default().push(name),
            Err(e) => failures.push(TableFailure {
                link: name,
                line,
                error: e.to_string(),
            }),
        }
    }
    failures.sort_by(|a, b| {
        natural_key(&a.link)
            .cmp(&natural_key(&b.link))
            .then(a.line.cmp(&b.line))
    });
    let polys: Vec<InvariantPolynomial> = groups.keys().cloned().collect();
    let rows: Vec<TableRow> = groups
        .into_iter()
        .map(|(p, mut names)| {
            names.sort_by_key(|n| natural_key(n));
            TableRow {
                polynomial: p.to_string(),
                links: names,
            }
        })
        .collect();
    let mut order = Vec::new();
    if matches!(kind, InvariantKind::Additive | InvariantKind::SEnh) {
        for i in 0..polys.len() {
            for j in 0..polys.len() {
                if i != j && order_compare(&polys[i], &polys[j], strict_order) == PolyOrder::Less {
                    order.push(TableOrder { lesser: i, greater: j });
                }
            }
        }
    }
    Table {
        invariant: kind,
        rack_spec: rack.canonical(),
        rows,
        failures,
        order,
        strict_order,
    }
}

impl Table {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("invariant: {}\nrack: {}\n", self.invariant, self.rack_spec);
        let width = self
            .rows
            .iter()
            .map(|r| r.polynomial.len())
            .max()
            .unwrap_or(0)
            .max("polynomial".len());
        out.push_str(&format!("{:<width$} | links\n", "polynomial"));
        out.push_str(&format!("{}-+-{}\n", "-".repeat(width), "-".repeat(5)));
        for r in &self.rows {
            out.push_str(&format!("{:<width$} | {}\n", r.polynomial, r.links.join(", ")));
        }
        if !self.order.is_empty() {
            let rel = if self.strict_order { "strict" } else { "weak" };
            out.push_str(&format!("\norder ({rel}):\n"));
            for o in &self.order {
                out.push_str(&format!(
                    "  {{{}}} < {{{}}}\n",
                    self.rows[o.lesser].links.join(", "),
                    self.rows[o.greater].links.join(", ")
                ));
            }
        }
        if !self.failures.is_empty() {
            out.push_str(&format!("\n{} link(s) failed:\n", self.failures.len()));
            for f in &self.failures {
                out.push_str(&format!("  {} (line {}): {}\n", f.link, f.line, f.error));
            }
        }
        out
    }
}

/// Outcome of `iso-check`. The certificate is present only when both inputs
/// carry module structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub isomorphic: bool,
    /// 1-based rack isomorphism, `phi[i-1]` is the image of element `i`.
    pub phi: Option<Vec<usize>>,
    pub certificate: Option<CertificateText>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateText {
    pub h: Vec<(Vec<u64>, Vec<u64>)>,
    pub a_reps: Vec<Vec<u64>>,
    pub b_reps: Vec<Vec<u64>>,
    pub g: Vec<(Vec<u64>, Vec<u64>)>,
}

pub fn iso_check(a: &RackInput, b: &RackInput) -> Result<IsoReport, CliError> {
    let one_based = |p: Vec<usize>| p.into_iter().map(|v| v + 1).collect::<Vec<_>>();
    let brute = a.finite_rack().find_isomorphism(&b.finite_rack());
    let (Some(x), Some(y)) = (a.ts_rack(), b.ts_rack()) else {
        return Ok(IsoReport {
            isomorphic: brute.is_some(),
            phi: brute.map(one_based),
            certificate: None,
        });
    };
    let cert = tsrack::tsrack_isomorphism(x, y);
    if cert.is_some() != brute.is_some() {
        return Err(CliError::Internal(
            "module criterion and exhaustive search disagree on isomorphism".into(),
        ));
    }
    let Some(c) = cert else {
        return Ok(IsoReport {
            isomorphic: false,
            phi: None,
            certificate: None,
        });
    };
    if !x.to_finite_rack().is_homomorphism(&y.to_finite_rack(), &c.phi) {
        return Err(CliError::Internal("certificate map is not a rack homomorphism".into()));
    }
    let pair = |&(u, v): &(usize, usize)| (x.vector(u), y.vector(v));
    Ok(IsoReport {
        isomorphic: true,
        certificate: Some(CertificateText {
            h: c.h.iter().map(pair).collect(),
            a_reps: c.a_reps.iter().map(|&u| x.vector(u)).collect(),
            b_reps: c.b_reps.iter().map(|&v| y.vector(v)).collect(),
            g: c.g.iter().map(pair).collect(),
        }),
        phi: Some(one_based(c.phi)),
    })
}

fn vec_text(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

impl IsoReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        if !self.isomorphic {
            return "not isomorphic\n".into();
        }
        let mut out = String::from("isomorphic\n");
        if let Some(c) = &self.certificate {
            let maps = |m: &[(Vec<u64>, Vec<u64>)]| {
                m.iter()
                    .map(|(a, b)| format!("{} -> {}", vec_text(a), vec_text(b)))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let list = |v: &[Vec<u64>]| v.iter().map(|x| vec_text(x)).collect::<Vec<_>>().join(" ");
            out.push_str(&format!("h on sX: {}\n", maps(&c.h)));
            out.push_str(&format!(
                "coset representatives: {} -> {}\n",
                list(&c.a_reps),
                list(&c.b_reps)
            ));
            out.push_str(&format!("g on (t+s)-orbit: {}\n", maps(&c.g)));
        }
        if let Some(phi) = &self.phi {
            let cells: Vec<String> = phi.iter().map(usize::to_string).collect();
            out.push_str(&format!("phi: {}\n", cells.join(" ")));
        }
        out
    }
}
