//! Quivers, paths, and algebras presented by a quiver with relations.
//!
//! Conventions used across the crate:
//!
//! * A path stores its arrows in **application order**: the first entry is
//!   the first arrow applied. A word `[a, b]` is the path "a, then b", so
//!   its start is `source(a)` and its end is `target(b)`.
//! * The algebra product `p * q` is "apply `q` first, then `p`", matching
//!   the usual composition of functions. Consequently `e_i * x * e_j` is
//!   the span of paths from `j` to `i`.
//! * Every arrow carries a non-negative integer degree; paths are graded by
//!   the sum of their arrow degrees. Relations must be homogeneous both in
//!   degree and in endpoints.
//! * Coefficients are exact rationals of arbitrary precision.

use crate::{input_err, Error, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Exact rational coefficient.
pub type Coef = BigRational;

/// An arrow of a quiver, with a non-negative grading degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: usize,
}

/// A finite quiver: named vertices and named, graded arrows.
///
/// Vertices and arrows are indexed by their declared order; all path data
/// refers to these indices. Declared order is semantically meaningful: the
/// word order on paths (hence Groebner bases and normal forms) compares
/// arrows by declared index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_ids: BTreeMap<String, usize>,
    arrow_ids: BTreeMap<String, usize>,
    out_arrows: Vec<Vec<usize>>,
    in_arrows: Vec<Vec<usize>>,
}

/// Incremental constructor for [`Quiver`].
#[derive(Debug, Default, Clone)]
pub struct QuiverBuilder {
    vertices: Vec<String>,
    arrows: Vec<(String, String, String, usize)>,
}

impl QuiverBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> &mut Self {
        self.vertices.push(name.into());
        self
    }

    pub fn arrow(
        &mut self,
        name: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
        degree: usize,
    ) -> &mut Self {
        self.arrows
            .push((name.into(), source.into(), target.into(), degree));
        self
    }

    pub fn build(self) -> Result<Quiver> {
        let mut vertex_ids = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vertex_ids.insert(v.clone(), i).is_some() {
                input_err!("duplicate vertex name {:?}", v);
            }
        }
        let mut arrow_ids = BTreeMap::new();
        let mut arrows = Vec::with_capacity(self.arrows.len());
        for (i, (name, src, tgt, degree)) in self.arrows.into_iter().enumerate() {
            let source = match vertex_ids.get(&src) {
                Some(&s) => s,
                None => input_err!("arrow {:?} has unknown source vertex {:?}", name, src),
            };
            let target = match vertex_ids.get(&tgt) {
                Some(&t) => t,
                None => input_err!("arrow {:?} has unknown target vertex {:?}", name, tgt),
            };
            if arrow_ids.insert(name.clone(), i).is_some() {
                input_err!("duplicate arrow name {:?}", name);
            }
            arrows.push(Arrow {
                name,
                source,
                target,
                degree,
            });
        }
        let mut out_arrows = vec![Vec::new(); self.vertices.len()];
        let mut in_arrows = vec![Vec::new(); self.vertices.len()];
        for (i, a) in arrows.iter().enumerate() {
            out_arrows[a.source].push(i);
            in_arrows[a.target].push(i);
        }
        Ok(Quiver {
            vertices: self.vertices,
            arrows,
            vertex_ids,
            arrow_ids,
            out_arrows,
            in_arrows,
        })
    }
}

impl Quiver {
    pub fn builder() -> QuiverBuilder {
        QuiverBuilder::new()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_ids.get(name).copied()
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_id(&self, name: &str) -> Option<usize> {
        self.arrow_ids.get(name).copied()
    }

    /// Arrows with the given source vertex, in declared order.
    pub fn arrows_from(&self, v: usize) -> &[usize] {
        &self.out_arrows[v]
    }

    /// Arrows with the given target vertex, in declared order.
    pub fn arrows_into(&self, v: usize) -> &[usize] {
        &self.in_arrows[v]
    }

    /// The length-zero path at a vertex.
    pub fn trivial_path(&self, v: usize) -> Path {
        assert!(v < self.n_vertices());
        Path {
            start: v as u32,
            end: v as u32,
            word: Vec::new(),
        }
    }

    /// The length-one path consisting of a single arrow.
    pub fn arrow_path(&self, a: usize) -> Path {
        let arrow = &self.arrows[a];
        Path {
            start: arrow.source as u32,
            end: arrow.target as u32,
            word: vec![a as u32],
        }
    }

    /// Builds a path from arrow indices in application order.
    pub fn path_from_arrows(&self, word: &[usize]) -> Result<Path> {
        if word.is_empty() {
            input_err!("a path needs at least one arrow; use trivial_path for idempotents");
        }
        for w in word.windows(2) {
            let (a, b) = (&self.arrows[w[0]], &self.arrows[w[1]]);
            if a.target != b.source {
                input_err!(
                    "arrows {:?} and {:?} do not compose: {} ends at {} but {} starts at {}",
                    a.name,
                    b.name,
                    a.name,
                    self.vertices[a.target],
                    b.name,
                    self.vertices[b.source]
                );
            }
        }
        Ok(Path {
            start: self.arrows[word[0]].source as u32,
            end: self.arrows[*word.last().unwrap()].target as u32,
            word: word.iter().map(|&a| a as u32).collect(),
        })
    }

    /// Builds a path from arrow names in application order.
    pub fn path_from_names(&self, names: &[&str]) -> Result<Path> {
        let word: Vec<usize> = names
            .iter()
            .map(|n| {
                self.arrow_id(n)
                    .ok_or_else(|| Error::new(format!("unknown arrow name {:?}", n)))
            })
            .collect::<Result<_>>()?;
        self.path_from_arrows(&word)
    }

    /// Total degree of a path (sum of its arrow degrees).
    pub fn path_degree(&self, p: &Path) -> usize {
        p.word
            .iter()
            .map(|&a| self.arrows[a as usize].degree)
            .sum()
    }

    /// The vertices a path visits, starting vertex first.
    pub fn path_vertices(&self, p: &Path) -> Vec<usize> {
        let mut vs = Vec::with_capacity(p.len() + 1);
        vs.push(p.start());
        for &a in &p.word {
            vs.push(self.arrows[a as usize].target);
        }
        vs
    }

    /// Human-readable form of a path, arrows in application order.
    pub fn path_string(&self, p: &Path) -> String {
        if p.word.is_empty() {
            format!("e_{}", self.vertices[p.start()])
        } else {
            p.word
                .iter()
                .map(|&a| self.arrows[a as usize].name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    /// Graphviz rendering of the quiver, stable under reruns.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph quiver {\n");
        for v in &self.vertices {
            s.push_str(&format!("  \"{}\";\n", v));
        }
        for a in &self.arrows {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}:{}\"];\n",
                self.vertices[a.source], self.vertices[a.target], a.name, a.degree
            ));
        }
        s.push_str("}\n");
        s
    }
}

/// A path in a quiver: a start vertex, an end vertex, and the arrow word in
/// application order. Length-zero paths are the vertex idempotents.
///
/// Paths are totally ordered by length, then lexicographically by arrow
/// index from the first-applied position, then by start vertex. This is the
/// word order underlying all Groebner computations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    start: u32,
    end: u32,
    word: Vec<u32>,
}

impl Path {
    pub fn start(&self) -> usize {
        self.start as usize
    }

    pub fn end(&self) -> usize {
        self.end as usize
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Arrow indices in application order.
    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn arrow_at(&self, i: usize) -> usize {
        self.word[i] as usize
    }

    /// The composite "self, then next": defined iff `self` ends where
    /// `next` starts.
    pub fn then(&self, next: &Path) -> Option<Path> {
        if self.end != next.start {
            return None;
        }
        let mut word = Vec::with_capacity(self.word.len() + next.word.len());
        word.extend_from_slice(&self.word);
        word.extend_from_slice(&next.word);
        Some(Path {
            start: self.start,
            end: next.end,
            word,
        })
    }

    /// Reversed word, for passing to an opposite quiver.
    pub(crate) fn reversed(&self) -> Path {
        Path {
            start: self.end,
            end: self.start,
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub(crate) fn from_raw(start: usize, end: usize, word: Vec<u32>) -> Path {
        Path {
            start: start as u32,
            end: end as u32,
            word,
        }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.start.cmp(&other.start))
            .then_with(|| self.end.cmp(&other.end))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Algebra product of two paths: `compose(p, q)` is "q first, then p".
/// Defined iff `q` ends where `p` starts; `None` encodes the zero product.
pub fn compose(p: &Path, q: &Path) -> Option<Path> {
    q.then(p)
}

/// A finite rational linear combination of paths.
///
/// The zero element is the empty combination. No zero coefficients are
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathElement {
    terms: BTreeMap<Path, Coef>,
}

impl PathElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_path(p: Path) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, Coef::one());
        PathElement { terms }
    }

    pub fn from_term(p: Path, c: Coef) -> Self {
        let mut el = PathElement::zero();
        el.add_term(p, c);
        el
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Coef)> {
        self.terms.iter()
    }

    pub fn coef(&self, p: &Path) -> Coef {
        self.terms.get(p).cloned().unwrap_or_else(Coef::zero)
    }

    /// The order-largest path of the support, if any.
    pub fn leading_path(&self) -> Option<&Path> {
        self.terms.keys().next_back()
    }

    pub fn add_term(&mut self, p: Path, c: Coef) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &PathElement) -> PathElement {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PathElement) -> PathElement {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> PathElement {
        PathElement {
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coef) -> PathElement {
        if c.is_zero() {
            return PathElement::zero();
        }
        PathElement {
            terms: self
                .terms
                .iter()
                .map(|(p, k)| (p.clone(), k * c))
                .collect(),
        }
    }

    /// Bilinear extension of path composition: `multiply(p, q)` applies `q`
    /// first. Incomposable path pairs contribute zero.
    pub fn multiply(&self, other: &PathElement) -> PathElement {
        let mut out = PathElement::zero();
        for (p, cp) in &self.terms {
            for (q, cq) in &other.terms {
                if let Some(pq) = compose(p, q) {
                    out.add_term(pq, cp * cq);
                }
            }
        }
        out
    }

    /// Common endpoints of all support paths, or `None` for zero or mixed
    /// support.
    pub fn support_endpoints(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let se = (first.start(), first.end());
        for p in it {
            if (p.start(), p.end()) != se {
                return None;
            }
        }
        Some(se)
    }

    pub(crate) fn reversed(&self) -> PathElement {
        PathElement {
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.reversed(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for PathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·[{}→{}|{:?}]", c, p.start(), p.end(), p.word())?;
        }
        Ok(())
    }
}

/// An algebra presented by a quiver and homogeneous relations.
///
/// Invariants enforced at construction: every relation is a nonzero
/// combination of paths of length at least one, all sharing the same start
/// vertex, the same end vertex, and the same total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedGradedAlgebra {
    quiver: Quiver,
    relations: Vec<PathElement>,
}

impl PresentedGradedAlgebra {
    pub fn new(quiver: Quiver, relations: Vec<PathElement>) -> Result<Self> {
        for (i, rel) in relations.iter().enumerate() {
            if rel.is_zero() {
                input_err!("relation {} is zero", i);
            }
            if rel.support_endpoints().is_none() {
                input_err!("relation {} mixes paths with different endpoints", i);
            }
            let mut deg = None;
            for (p, _) in rel.terms() {
                if p.is_empty() {
                    input_err!("relation {} contains a length-zero path", i);
                }
                for &a in p.word() {
                    if (a as usize) >= quiver.n_arrows() {
                        input_err!("relation {} uses an arrow index out of range", i);
                    }
                }
                let d = quiver.path_degree(p);
                match deg {
                    None => deg = Some(d),
                    Some(d0) if d0 != d => {
                        input_err!("relation {} mixes paths of degrees {} and {}", i, d0, d)
                    }
                    _ => {}
                }
            }
        }
        Ok(PresentedGradedAlgebra { quiver, relations })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[PathElement] {
        &self.relations
    }

    /// The opposite algebra: arrows reversed (same names, order, degrees),
    /// relation words reversed.
    pub fn opposite(&self) -> PresentedGradedAlgebra {
        let mut b = Quiver::builder();
        for v in self.quiver.vertex_names() {
            b.vertex(v.clone());
        }
        for a in self.quiver.arrows() {
            b.arrow(
                a.name.clone(),
                self.quiver.vertex_name(a.target),
                self.quiver.vertex_name(a.source),
                a.degree,
            );
        }
        let quiver = b.build().expect("reversing a valid quiver cannot fail");
        let relations = self.relations.iter().map(|r| r.reversed()).collect();
        PresentedGradedAlgebra { quiver, relations }
    }

    /// Quotient by the two-sided ideal generated by the idempotents of the
    /// named vertices: drops those vertices, every arrow touching them, and
    /// every relation term whose path visits one of them.
    pub fn quotient_by_vertices(&self, kill: &BTreeSet<String>) -> Result<PresentedGradedAlgebra> {
        for name in kill {
            if self.quiver.vertex_id(name).is_none() {
                input_err!("cannot quotient by unknown vertex {:?}", name);
            }
        }
        if kill.len() == self.quiver.n_vertices() {
            input_err!("quotient would remove every vertex");
        }
        let killed: Vec<bool> = (0..self.quiver.n_vertices())
            .map(|v| kill.contains(self.quiver.vertex_name(v)))
            .collect();

        let mut b = Quiver::builder();
        for (v, name) in self.quiver.vertex_names().iter().enumerate() {
            if !killed[v] {
                b.vertex(name.clone());
            }
        }
        let mut arrow_map: Vec<Option<usize>> = vec![None; self.quiver.n_arrows()];
        let mut next = 0usize;
        for (i, a) in self.quiver.arrows().iter().enumerate() {
            if !killed[a.source] && !killed[a.target] {
                arrow_map[i] = Some(next);
                next += 1;
                b.arrow(
                    a.name.clone(),
                    self.quiver.vertex_name(a.source),
                    self.quiver.vertex_name(a.target),
                    a.degree,
                );
            }
        }
        let quiver = b.build()?;

        let mut relations = Vec::new();
        for rel in &self.relations {
            let mut image = PathElement::zero();
            for (p, c) in rel.terms() {
                if self
                    .quiver
                    .path_vertices(p)
                    .iter()
                    .any(|&v| killed[v])
                {
                    continue;
                }
                let word: Vec<usize> = p
                    .word()
                    .iter()
                    .map(|&a| arrow_map[a as usize].expect("endpoints survive, so arrows do"))
                    .collect();
                image.add_term(quiver.path_from_arrows(&word)?, c.clone());
            }
            if !image.is_zero() {
                relations.push(image);
            }
        }
        PresentedGradedAlgebra::new(quiver, relations)
    }

    /// Largest relation word length (0 when there are no relations).
    pub fn max_relation_length(&self) -> usize {
        self.relations
            .iter()
            .flat_map(|r| r.terms().map(|(p, _)| p.len()))
            .max()
            .unwrap_or(0)
    }
}

// ---------------------------------------------------------------------------
// JSON interchange format.
// ---------------------------------------------------------------------------

/// Serialized arrow: endpoints by vertex name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub name: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub degree: usize,
}

/// One term of a serialized relation: a rational coefficient rendered as
/// `"p"` or `"p/q"`, and a path as arrow names in application order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDoc {
    pub coef: String,
    pub path: Vec<String>,
}

/// Serialized presentation of a graded algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    #[serde(default)]
    pub relations: Vec<Vec<TermDoc>>,
}

pub fn parse_coef(s: &str) -> Result<Coef> {
    Coef::from_str(s.trim())
        .map_err(|e| Error::new(format!("bad rational coefficient {:?}: {}", s, e)))
}

pub fn coef_string(c: &Coef) -> String {
    c.to_string()
}

impl PresentedGradedAlgebra {
    pub fn to_doc(&self) -> AlgebraDoc {
        let q = &self.quiver;
        AlgebraDoc {
            vertices: q.vertex_names().to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowDoc {
                    name: a.name.clone(),
                    source: q.vertex_name(a.source).to_string(),
                    target: q.vertex_name(a.target).to_string(),
                    degree: a.degree,
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|rel| {
                    rel.terms()
                        .map(|(p, c)| TermDoc {
                            coef: coef_string(c),
                            path: p
                                .word()
                                .iter()
                                .map(|&a| q.arrow(a as usize).name.clone())
                                .collect(),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &AlgebraDoc) -> Result<Self> {
        let mut b = Quiver::builder();
        for v in &doc.vertices {
            b.vertex(v.clone());
        }
        for a in &doc.arrows {
            b.arrow(a.name.clone(), a.source.clone(), a.target.clone(), a.degree);
        }
        let quiver = b.build()?;
        let mut relations = Vec::with_capacity(doc.relations.len());
        for (i, rel) in doc.relations.iter().enumerate() {
            let mut el = PathElement::zero();
            for term in rel {
                let names: Vec<&str> = term.path.iter().map(|s| s.as_str()).collect();
                if names.is_empty() {
                    input_err!("relation {} has a term with an empty path", i);
                }
                let p = quiver.path_from_names(&names)?;
                el.add_term(p, parse_coef(&term.coef)?);
            }
            if el.is_zero() {
                input_err!("relation {} collapses to zero", i);
            }
            relations.push(el);
        }
        PresentedGradedAlgebra::new(quiver, relations)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("algebra doc serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: AlgebraDoc = serde_json::from_str(text)
            .map_err(|e| Error::new(format!("bad algebra JSON: {}", e)))?;
        Self::from_doc(&doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn commutative_square() -> PresentedGradedAlgebra {
        // 4-vertex square: two routes from vertex a to vertex d, forced equal.
        let mut b = Quiver::builder();
        for v in ["a", "b", "c", "d"] {
            b.vertex(v);
        }
        b.arrow("x", "a", "b", 0);
        b.arrow("y", "b", "d", 1);
        b.arrow("u", "a", "c", 0);
        b.arrow("v", "c", "d", 1);
        let q = b.build().unwrap();
        let xy = q.path_from_names(&["x", "y"]).unwrap();
        let uv = q.path_from_names(&["u", "v"]).unwrap();
        let rel = PathElement::from_path(xy).sub(&PathElement::from_path(uv));
        PresentedGradedAlgebra::new(q, vec![rel]).unwrap()
    }

    #[test]
    fn compose_follows_application_order() {
        let alg = commutative_square();
        let q = alg.quiver();
        let x = q.arrow_path(q.arrow_id("x").unwrap());
        let y = q.arrow_path(q.arrow_id("y").unwrap());
        // y*x means "x first, then y".
        let yx = compose(&y, &x).expect("x ends where y starts");
        assert_eq!(yx.start(), q.vertex_id("a").unwrap());
        assert_eq!(yx.end(), q.vertex_id("d").unwrap());
        assert_eq!(yx.word(), &[0, 1]);
        // x*y is not composable.
        assert!(compose(&x, &y).is_none());
        // Idempotents act as one-sided identities exactly at their vertex.
        let ea = q.trivial_path(q.vertex_id("a").unwrap());
        let eb = q.trivial_path(q.vertex_id("b").unwrap());
        assert_eq!(compose(&x, &ea).as_ref(), Some(&x));
        assert_eq!(compose(&eb, &x).as_ref(), Some(&x));
        assert!(compose(&ea, &x).is_none());
    }

    #[test]
    fn multiply_is_bilinear_and_kills_incomposables() {
        let alg = commutative_square();
        let q = alg.quiver();
        let x = PathElement::from_path(q.arrow_path(q.arrow_id("x").unwrap()));
        let u = PathElement::from_path(q.arrow_path(q.arrow_id("u").unwrap()));
        let y = PathElement::from_path(q.arrow_path(q.arrow_id("y").unwrap()));
        let v = PathElement::from_path(q.arrow_path(q.arrow_id("v").unwrap()));
        // (y + v) * (x + u) = yx + vu: the cross terms are incomposable.
        let prod = y.add(&v).multiply(&x.add(&u));
        assert_eq!(prod.n_terms(), 2);
        let yx = q.path_from_names(&["x", "y"]).unwrap();
        let vu = q.path_from_names(&["u", "v"]).unwrap();
        assert_eq!(prod.coef(&yx), Coef::one());
        assert_eq!(prod.coef(&vu), Coef::one());
    }

    #[test]
    fn path_order_is_length_then_word() {
        let alg = commutative_square();
        let q = alg.quiver();
        let e = q.trivial_path(0);
        let x = q.arrow_path(0);
        let u = q.arrow_path(2);
        let xy = q.path_from_names(&["x", "y"]).unwrap();
        assert!(e < x);
        assert!(x < u); // arrow index 0 before 2
        assert!(u < xy); // any length-1 word before any length-2 word
    }

    #[test]
    fn opposite_is_an_involution_and_reverses_words() {
        let alg = commutative_square();
        let op = alg.opposite();
        assert_eq!(op.opposite(), alg);
        let rel = &op.relations()[0];
        let (s, e) = rel.support_endpoints().unwrap();
        // Original relation runs a -> d; the opposite runs d -> a.
        assert_eq!(op.quiver().vertex_name(s), "d");
        assert_eq!(op.quiver().vertex_name(e), "a");
    }

    #[test]
    fn quotient_kills_vertices_arrows_and_through_terms() {
        // Linear quiver 1 -> 2 -> 3; kill the middle vertex.
        let mut b = Quiver::builder();
        for v in ["1", "2", "3"] {
            b.vertex(v);
        }
        b.arrow("a", "1", "2", 0);
        b.arrow("b", "2", "3", 0);
        let q = b.build().unwrap();
        let alg = PresentedGradedAlgebra::new(q, vec![]).unwrap();
        let quot = alg
            .quotient_by_vertices(&BTreeSet::from(["2".to_string()]))
            .unwrap();
        assert_eq!(quot.quiver().n_vertices(), 2);
        assert_eq!(quot.quiver().n_arrows(), 0);

        // A two-term relation with one term through the killed vertex keeps
        // only the surviving term.
        let alg = commutative_square();
        let quot = alg
            .quotient_by_vertices(&BTreeSet::from(["b".to_string()]))
            .unwrap();
        assert_eq!(quot.relations().len(), 1);
        assert_eq!(quot.relations()[0].n_terms(), 1);
        let p = quot.relations()[0].leading_path().unwrap();
        assert_eq!(quot.quiver().path_string(p), "u*v");
    }

    #[test]
    fn json_round_trip_preserves_presentation() {
        let alg = commutative_square();
        let text = alg.to_json();
        let back = PresentedGradedAlgebra::from_json(&text).unwrap();
        assert_eq!(back, alg);
    }

    #[test]
    fn constructor_rejects_inhomogeneous_relations() {
        let mut b = Quiver::builder();
        b.vertex("1").vertex("2");
        b.arrow("a", "1", "2", 0);
        b.arrow("b", "1", "2", 1);
        let q = b.build().unwrap();
        let a = PathElement::from_path(q.arrow_path(0));
        let bb = PathElement::from_path(q.arrow_path(1));
        // Mixed degree.
        assert!(PresentedGradedAlgebra::new(q.clone(), vec![a.add(&bb)]).is_err());
        // Mixed endpoints.
        let mut b2 = Quiver::builder();
        b2.vertex("1").vertex("2").vertex("3");
        b2.arrow("a", "1", "2", 0);
        b2.arrow("c", "1", "3", 0);
        let q2 = b2.build().unwrap();
        let a2 = PathElement::from_path(q2.arrow_path(0));
        let c2 = PathElement::from_path(q2.arrow_path(1));
        assert!(PresentedGradedAlgebra::new(q2, vec![a2.add(&c2)]).is_err());
        // Length-zero path.
        let e = PathElement::from_path(q.trivial_path(0));
        assert!(PresentedGradedAlgebra::new(q, vec![e]).is_err());
    }
}
