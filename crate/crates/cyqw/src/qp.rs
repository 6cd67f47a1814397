//! Quivers with potential. A potential is a linear combination of cycles,
//! stored up to rotation; its cyclic derivatives present the Jacobian
//! algebra. A cut (a set of arrows meeting every potential cycle exactly
//! once) makes the Jacobian algebra graded; its degree-zero part is the
//! truncated algebra presented on the complement of the cut. The package
//! also builds the associated 4-term complex of projective bimodules and
//! checks the finiteness/corner hypotheses under which the truncated
//! algebra controls the whole graded algebra.

use crate::cycheck::{BimodElt, BimodGen, BimoduleComplex, DiffMap};
use crate::normalform::{complete_groebner, is_finite_dimensional, FiniteDim};
use crate::pathalg::{
    coef_string, parse_coef, ArrowDoc, Coef, Path, PathElement, PresentedGradedAlgebra, Quiver,
};
use crate::{input_err, Error, Result};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A set of arrow names cutting the potential.
pub type Cut = BTreeSet<String>;

/// A linear combination of quiver cycles. Each cycle is an arrow-id word in
/// application order (first-applied first) that closes up; terms are kept in
/// cyclic-canonical form (the rotation with lexicographically minimal word),
/// merged, and purged of zero coefficients, so two potentials differing only
/// by rotations of their cycles compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    quiver: Quiver,
    terms: Vec<(Coef, Vec<u32>)>,
}

/// The rotation of `word` with the lexicographically smallest letter
/// sequence.
fn min_rotation(word: &[u32]) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for s in 0..word.len() {
        let mut rot = Vec::with_capacity(word.len());
        rot.extend_from_slice(&word[s..]);
        rot.extend_from_slice(&word[..s]);
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.expect("rotating a nonempty word")
}

/// Product-notation rendering of a cycle (last-applied arrow first).
fn cycle_string(quiver: &Quiver, cycle: &[u32]) -> String {
    cycle
        .iter()
        .rev()
        .map(|&a| quiver.arrow(a as usize).name.as_str())
        .collect::<Vec<_>>()
        .join("·")
}

impl Potential {
    pub fn new(quiver: Quiver, terms: Vec<(Coef, Vec<u32>)>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<u32>, Coef> = BTreeMap::new();
        for (k, (coef, cycle)) in terms.into_iter().enumerate() {
            if cycle.is_empty() {
                input_err!("potential term {} has an empty cycle", k);
            }
            let ids: Vec<usize> = cycle.iter().map(|&a| a as usize).collect();
            let p = quiver.path_from_arrows(&ids)?;
            if p.start() != p.end() {
                input_err!(
                    "potential term {} does not close up (runs {} → {})",
                    k,
                    quiver.vertex_name(p.start()),
                    quiver.vertex_name(p.end())
                );
            }
            let entry = merged.entry(min_rotation(&cycle)).or_insert_with(Coef::zero);
            *entry += coef;
        }
        merged.retain(|_, c| !c.is_zero());
        Ok(Potential {
            quiver,
            terms: merged.into_iter().map(|(w, c)| (c, w)).collect(),
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// Canonicalized terms: (coefficient, cycle word in application order).
    pub fn terms(&self) -> &[(Coef, Vec<u32>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The potential as an element of the path algebra, each cycle closed up
    /// at the base point of its canonical rotation.
    pub fn as_element(&self) -> PathElement {
        let mut out = PathElement::zero();
        for (c, cycle) in &self.terms {
            let v = self.quiver.arrow(cycle[0] as usize).source;
            out.add_term(Path::from_raw(v, v, cycle.clone()), c.clone());
        }
        out
    }
}

/// The cyclic derivative of the potential with respect to arrow `a`: for
/// each occurrence of `a` in each term, rotate the cycle so `a` is applied
/// first, delete it, and accumulate the remainder with the term's
/// coefficient. The result runs from target(a) to source(a); an arrow absent
/// from the potential gives zero.
pub fn cyclic_derivative(w: &Potential, a: usize) -> PathElement {
    let quiver = w.quiver();
    let arrow = quiver.arrow(a);
    let mut out = PathElement::zero();
    for (coef, cycle) in w.terms() {
        for (pos, &letter) in cycle.iter().enumerate() {
            if letter as usize != a {
                continue;
            }
            let mut rest = Vec::with_capacity(cycle.len() - 1);
            rest.extend_from_slice(&cycle[pos + 1..]);
            rest.extend_from_slice(&cycle[..pos]);
            out.add_term(
                Path::from_raw(arrow.target, arrow.source, rest),
                coef.clone(),
            );
        }
    }
    out
}

/// Verdict of [`is_cut`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutCheck {
    pub ok: bool,
    /// First potential term meeting the cut a number of times other than
    /// one, rendered in product notation, with that count.
    pub offending_term: Option<(String, usize)>,
}

/// Checks whether every term of the potential contains exactly one arrow of
/// `cut`. Unknown arrow names are an input error.
pub fn is_cut(w: &Potential, cut: &Cut) -> Result<CutCheck> {
    let quiver = w.quiver();
    let mut in_cut = vec![false; quiver.n_arrows()];
    for name in cut {
        match quiver.arrow_id(name) {
            Some(a) => in_cut[a] = true,
            None => input_err!("cut names unknown arrow {:?}", name),
        }
    }
    for (_, cycle) in w.terms() {
        let hits = cycle.iter().filter(|&&a| in_cut[a as usize]).count();
        if hits != 1 {
            return Ok(CutCheck {
                ok: false,
                offending_term: Some((cycle_string(quiver, cycle), hits)),
            });
        }
    }
    Ok(CutCheck {
        ok: true,
        offending_term: None,
    })
}

fn ensure_cut(w: &Potential, cut: &Cut) -> Result<()> {
    let check = is_cut(w, cut)?;
    if let Some((term, hits)) = check.offending_term {
        input_err!("not a cut: term {} contains {} cut arrows", term, hits);
    }
    Ok(())
}

/// Rebuilds the potential's quiver with the given arrow degrees.
fn regraded_quiver(quiver: &Quiver, degree: impl Fn(usize) -> usize) -> Quiver {
    let mut b = Quiver::builder();
    for v in quiver.vertex_names() {
        b.vertex(v.clone());
    }
    for (id, a) in quiver.arrows().iter().enumerate() {
        b.arrow(
            a.name.clone(),
            quiver.vertex_name(a.source),
            quiver.vertex_name(a.target),
            degree(id),
        );
    }
    b.build().expect("regrading a valid quiver cannot fail")
}

/// The Jacobian algebra of the potential: the path algebra modulo the
/// nonzero cyclic derivatives, one per arrow. With a cut the arrows are
/// graded 1 on the cut and 0 off it (which makes every relation
/// homogeneous); without one all arrows sit in degree 0.
pub fn jacobian_algebra(w: &Potential, cut: Option<&Cut>) -> Result<PresentedGradedAlgebra> {
    if let Some(cut) = cut {
        ensure_cut(w, cut)?;
    }
    let quiver = regraded_quiver(w.quiver(), |id| match cut {
        Some(cut) => usize::from(cut.contains(&w.quiver().arrow(id).name)),
        None => 0,
    });
    let mut relations = Vec::new();
    for a in 0..quiver.n_arrows() {
        let der = cyclic_derivative(w, a);
        if !der.is_zero() {
            relations.push(der);
        }
    }
    PresentedGradedAlgebra::new(quiver, relations)
}

/// The degree-zero part of the cut-graded Jacobian algebra, presented
/// directly: the quiver keeps every vertex and drops the cut arrows (all
/// remaining arrows in degree 0), and the relations are the cyclic
/// derivatives with respect to the cut arrows, which stay off the cut by the
/// cut property.
pub fn truncated_algebra(w: &Potential, cut: &Cut) -> Result<PresentedGradedAlgebra> {
    ensure_cut(w, cut)?;
    let quiver = w.quiver();
    let mut b = Quiver::builder();
    for v in quiver.vertex_names() {
        b.vertex(v.clone());
    }
    let mut remap: Vec<Option<u32>> = vec![None; quiver.n_arrows()];
    let mut next = 0u32;
    for (id, a) in quiver.arrows().iter().enumerate() {
        if !cut.contains(&a.name) {
            remap[id] = Some(next);
            next += 1;
            b.arrow(
                a.name.clone(),
                quiver.vertex_name(a.source),
                quiver.vertex_name(a.target),
                0,
            );
        }
    }
    let sub = b.build().expect("dropping arrows keeps the quiver valid");

    let mut relations = Vec::new();
    for (id, a) in quiver.arrows().iter().enumerate() {
        if !cut.contains(&a.name) {
            continue;
        }
        let der = cyclic_derivative(w, id);
        if der.is_zero() {
            continue;
        }
        let mut translated = PathElement::zero();
        for (p, c) in der.terms() {
            let word: Vec<u32> = p
                .word()
                .iter()
                .map(|&x| remap[x as usize].expect("cut derivatives stay off the cut"))
                .collect();
            translated.add_term(Path::from_raw(p.start(), p.end(), word), c.clone());
        }
        relations.push(translated);
    }
    PresentedGradedAlgebra::new(sub, relations)
}

/// A contiguous piece of a validated cycle as a path; `start` pins the base
/// vertex when the piece is empty.
fn slice_path(quiver: &Quiver, word: &[u32], start: usize) -> Path {
    if word.is_empty() {
        quiver.trivial_path(start)
    } else {
        let ids: Vec<usize> = word.iter().map(|&a| a as usize).collect();
        quiver
            .path_from_arrows(&ids)
            .expect("pieces of a validated cycle compose")
    }
}

/// The 4-term complex of projective bimodules over the cut-graded Jacobian
/// algebra B. Writing d for the cut grading and s, t for arrow endpoints,
/// the terms are
///
/// * P₀ = ⊕_i B·e_i ⊗ e_i·B  (twist 0),
/// * P₁ = ⊕_a B·e_{t(a)} ⊗ e_{s(a)}·B  (twist d(a)),
/// * P₂ = ⊕_b B·e_{s(b)} ⊗ e_{t(b)}·B  (twist 1 − d(b)),
/// * P₃ = ⊕_i B·e_i ⊗ e_i·B  (twist 1),
///
/// and the differentials multiply arrows onto the outer legs (P₁ → P₀ and
/// P₃ → P₂, left minus right) or split each potential cycle around one arrow
/// pair (P₂ → P₁). When the algebra satisfies the Calabi-Yau property this
/// complex resolves B; `cycheck::verify_complex` decides that degree by
/// degree.
pub fn dimer_bimodule_complex(w: &Potential, cut: &Cut) -> Result<BimoduleComplex> {
    let b = jacobian_algebra(w, Some(cut))?;
    let quiver = b.quiver().clone();
    let nv = quiver.n_vertices();
    let one = Coef::from_integer(1.into());

    let vertex_gens = |twist: i64| -> Vec<BimodGen> {
        (0..nv)
            .map(|i| BimodGen {
                left_vertex: i,
                right_vertex: i,
                twist,
            })
            .collect()
    };
    let terms = vec![
        vertex_gens(0),
        quiver
            .arrows()
            .iter()
            .map(|a| BimodGen {
                left_vertex: a.target,
                right_vertex: a.source,
                twist: a.degree as i64,
            })
            .collect(),
        quiver
            .arrows()
            .iter()
            .map(|a| BimodGen {
                left_vertex: a.source,
                right_vertex: a.target,
                twist: 1 - a.degree as i64,
            })
            .collect(),
        vertex_gens(1),
    ];

    // P₁ → P₀: a ⊗ e at the source minus e ⊗ a at the target.
    let mut d0: DiffMap = Vec::with_capacity(quiver.n_arrows());
    for a in quiver.arrows() {
        let id = quiver.arrow_id(&a.name).expect("arrow of the same quiver");
        let mut row: BTreeMap<usize, BimodElt> = BTreeMap::new();
        row.entry(a.source).or_insert_with(BimodElt::zero).add_term(
            quiver.arrow_path(id),
            quiver.trivial_path(a.source),
            one.clone(),
        );
        row.entry(a.target).or_insert_with(BimodElt::zero).add_term(
            quiver.trivial_path(a.target),
            quiver.arrow_path(id),
            -one.clone(),
        );
        d0.push(row.into_iter().collect());
    }

    // P₂ → P₁: rotate each potential cycle so the indexing arrow b is
    // applied last, then split the remainder around every arrow occurrence;
    // what follows the occurrence lands in the left leg, what precedes it in
    // the right leg.
    let mut d1: DiffMap = Vec::with_capacity(quiver.n_arrows());
    for b_arrow in quiver.arrows() {
        let b_id = quiver
            .arrow_id(&b_arrow.name)
            .expect("arrow of the same quiver") as u32;
        let mut row: BTreeMap<usize, BimodElt> = BTreeMap::new();
        for (coef, cycle) in w.terms() {
            for pos in 0..cycle.len() {
                if cycle[pos] != b_id {
                    continue;
                }
                let mut rest = Vec::with_capacity(cycle.len() - 1);
                rest.extend_from_slice(&cycle[pos + 1..]);
                rest.extend_from_slice(&cycle[..pos]);
                for (q, &a) in rest.iter().enumerate() {
                    let a_arrow = quiver.arrow(a as usize);
                    let l = slice_path(&quiver, &rest[q + 1..], a_arrow.target);
                    let r = slice_path(&quiver, &rest[..q], b_arrow.target);
                    row.entry(a as usize)
                        .or_insert_with(BimodElt::zero)
                        .add_term(l, r, coef.clone());
                }
            }
        }
        d1.push(row.into_iter().collect());
    }

    // P₃ → P₂: sum of a ⊗ e over incoming arrows minus e ⊗ b over outgoing
    // ones.
    let mut d2: DiffMap = Vec::with_capacity(nv);
    for i in 0..nv {
        let mut row: BTreeMap<usize, BimodElt> = BTreeMap::new();
        for &a in quiver.arrows_into(i) {
            row.entry(a).or_insert_with(BimodElt::zero).add_term(
                quiver.arrow_path(a),
                quiver.trivial_path(i),
                one.clone(),
            );
        }
        for &b_id in quiver.arrows_from(i) {
            row.entry(b_id).or_insert_with(BimodElt::zero).add_term(
                quiver.trivial_path(i),
                quiver.arrow_path(b_id),
                -one.clone(),
            );
        }
        d2.push(row.into_iter().collect());
    }

    BimoduleComplex::new(b, terms, vec![d0, d1, d2])
}

/// Outcome of the corner-vanishing test on one orientation: whether any
/// degree-0 normal word enters the vertex subset from outside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CornerCheck {
    Vanishes,
    Nonzero { witness: String },
    Unknown { reason: String },
}

/// Per-vertex source test in the degree-0 quiver. A vertex is a source on
/// the given orientation when no degree-0 arrow enters it, and a source on
/// the opposite orientation when no degree-0 arrow leaves it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceCheck {
    pub vertex: String,
    pub source_in_given: bool,
    pub source_in_opposite: bool,
}

/// What [`check_main_hypotheses`] found.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesesReport {
    /// Finite dimensionality of the quotient by the subset's idempotents.
    pub stable_finite: FiniteDim,
    /// Corner test e·A₀·(1−e) = 0 on the algebra as given.
    pub corner_given: CornerCheck,
    /// The same test on the opposite algebra.
    pub corner_opposite: CornerCheck,
    pub sources: Vec<SourceCheck>,
    /// The quotient is certified finite dimensional and the corner vanishes
    /// on at least one orientation.
    pub pass: bool,
}

fn corner_check(b: &PresentedGradedAlgebra, e: &BTreeSet<String>, cap: usize) -> CornerCheck {
    let gb = complete_groebner(b, cap);
    let words = match gb.normal_words_up_to_grade(0) {
        Ok(words) => words,
        Err(err) => {
            return CornerCheck::Unknown {
                reason: err.to_string(),
            }
        }
    };
    let quiver = b.quiver();
    let inside = |v: usize| e.contains(quiver.vertex_name(v));
    for word in &words {
        if inside(word.end()) && !inside(word.start()) {
            return CornerCheck::Nonzero {
                witness: quiver.path_string(word),
            };
        }
    }
    CornerCheck::Vanishes
}

/// Checks the hypotheses under which the degree-0 part controls the graded
/// algebra B: the quotient B/⟨e⟩ by the idempotents of the vertex subset is
/// finite dimensional, and no degree-0 path enters the subset from outside —
/// the latter evaluated on both B and its opposite, since the two
/// orientations of a quiver present opposite algebras. The per-vertex source
/// checks on the degree-0 quiver are reported alongside.
pub fn check_main_hypotheses(
    b: &PresentedGradedAlgebra,
    e: &BTreeSet<String>,
    cap: usize,
) -> Result<HypothesesReport> {
    if e.is_empty() {
        input_err!("the vertex subset is empty");
    }
    for name in e {
        if b.quiver().vertex_id(name).is_none() {
            input_err!("unknown vertex {:?}", name);
        }
    }
    if e.len() == b.quiver().n_vertices() {
        input_err!("the vertex subset must be proper");
    }

    let quotient = b.quotient_by_vertices(e)?;
    let stable_finite = is_finite_dimensional(&quotient, cap);
    let corner_given = corner_check(b, e, cap);
    let corner_opposite = corner_check(&b.opposite(), e, cap);

    let quiver = b.quiver();
    let sources = e
        .iter()
        .map(|name| {
            let v = quiver.vertex_id(name).expect("validated above");
            let degree_zero = |ids: &[usize]| ids.iter().any(|&a| quiver.arrow(a).degree == 0);
            SourceCheck {
                vertex: name.clone(),
                source_in_given: !degree_zero(quiver.arrows_into(v)),
                source_in_opposite: !degree_zero(quiver.arrows_from(v)),
            }
        })
        .collect();

    let pass = matches!(stable_finite, FiniteDim::Yes(_))
        && (corner_given == CornerCheck::Vanishes || corner_opposite == CornerCheck::Vanishes);
    Ok(HypothesesReport {
        stable_finite,
        corner_given,
        corner_opposite,
        sources,
        pass,
    })
}

// ---------------------------------------------------------------------------
// JSON interchange format.
// ---------------------------------------------------------------------------

/// One serialized potential term: a rational coefficient rendered as `"p"`
/// or `"p/q"`, and a cycle as arrow names in application order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialTermDoc {
    pub coef: String,
    pub cycle: Vec<String>,
}

/// Serialized quiver with potential and optional cut.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QpDoc {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    #[serde(default)]
    pub potential: Vec<PotentialTermDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut: Option<Vec<String>>,
}

pub fn qp_to_doc(w: &Potential, cut: Option<&Cut>) -> QpDoc {
    let quiver = w.quiver();
    QpDoc {
        vertices: quiver.vertex_names().to_vec(),
        arrows: quiver
            .arrows()
            .iter()
            .map(|a| ArrowDoc {
                name: a.name.clone(),
                source: quiver.vertex_name(a.source).to_string(),
                target: quiver.vertex_name(a.target).to_string(),
                degree: a.degree,
            })
            .collect(),
        potential: w
            .terms()
            .iter()
            .map(|(c, cycle)| PotentialTermDoc {
                coef: coef_string(c),
                cycle: cycle
                    .iter()
                    .map(|&a| quiver.arrow(a as usize).name.clone())
                    .collect(),
            })
            .collect(),
        cut: cut.map(|d| d.iter().cloned().collect()),
    }
}

pub fn qp_from_doc(doc: &QpDoc) -> Result<(Potential, Option<Cut>)> {
    let mut b = Quiver::builder();
    for v in &doc.vertices {
        b.vertex(v.clone());
    }
    for a in &doc.arrows {
        b.arrow(a.name.clone(), a.source.clone(), a.target.clone(), a.degree);
    }
    let quiver = b.build()?;
    let mut terms = Vec::with_capacity(doc.potential.len());
    for (k, term) in doc.potential.iter().enumerate() {
        let mut cycle = Vec::with_capacity(term.cycle.len());
        for name in &term.cycle {
            match quiver.arrow_id(name) {
                Some(a) => cycle.push(a as u32),
                None => input_err!("potential term {} names unknown arrow {:?}", k, name),
            }
        }
        terms.push((parse_coef(&term.coef)?, cycle));
    }
    let cut = match &doc.cut {
        None => None,
        Some(names) => {
            for name in names {
                if quiver.arrow_id(name).is_none() {
                    input_err!("cut names unknown arrow {:?}", name);
                }
            }
            Some(names.iter().cloned().collect())
        }
    };
    let w = Potential::new(quiver, terms)?;
    Ok((w, cut))
}

pub fn qp_to_json(w: &Potential, cut: Option<&Cut>) -> String {
    serde_json::to_string_pretty(&qp_to_doc(w, cut)).expect("QP doc serializes")
}

pub fn qp_from_json(text: &str) -> Result<(Potential, Option<Cut>)> {
    let doc: QpDoc =
        serde_json::from_str(text).map_err(|e| Error::new(format!("bad QP JSON: {}", e)))?;
    qp_from_doc(&doc)
}

// ---------------------------------------------------------------------------
// Ready-made examples.
// ---------------------------------------------------------------------------

/// Stock quivers with potential used in tests and CLI examples.
pub mod fixtures {
    use super::*;
    use num_traits::One;

    fn coef(n: i64) -> Coef {
        Coef::from_integer(n.into())
    }

    /// Four vertices on a cycle 1 → 2 → 3 → 4 → 1 with every step doubled
    /// (x's, y's, z's, w's), the potential pairing the two ways around the
    /// square with alternating signs, and the cut {x1, x2}.
    pub fn doubled_square() -> (Potential, Cut) {
        let mut b = Quiver::builder();
        for v in 1..=4 {
            b.vertex(v.to_string());
        }
        for (name, s, t) in [("x", "1", "2"), ("y", "2", "3"), ("z", "3", "4"), ("w", "4", "1")] {
            for k in 1..=2 {
                b.arrow(format!("{}{}", name, k), s, t, 0);
            }
        }
        let quiver = b.build().expect("fixture quiver is well formed");
        let id = |n: &str| quiver.arrow_id(n).expect("fixture arrow") as u32;
        let cycle =
            |names: [&str; 4]| names.iter().map(|n| id(n)).collect::<Vec<_>>();
        let terms = vec![
            (Coef::one(), cycle(["x1", "y1", "z1", "w1"])),
            (Coef::one(), cycle(["x2", "y2", "z2", "w2"])),
            (coef(-1), cycle(["x2", "y1", "z2", "w1"])),
            (coef(-1), cycle(["x1", "y2", "z1", "w2"])),
        ];
        let w = Potential::new(quiver, terms).expect("fixture potential is well formed");
        let cut = ["x1", "x2"].into_iter().map(String::from).collect();
        (w, cut)
    }

    /// Six vertices on a hexagon 1 → 2 → ⋯ → 6 → 1 with two triangle chords
    /// 1 → 3 → 5 → 1 and 2 → 4 → 6 → 2 (arrow aXY runs Y → X). The potential
    /// takes the hexagon and the triangles positively and the three mixed
    /// 4-cycles negatively; the cut is {a16, a26, a15}.
    pub fn chorded_hexagon() -> (Potential, Cut) {
        let mut b = Quiver::builder();
        for v in 1..=6 {
            b.vertex(v.to_string());
        }
        let arrows = [
            ("a21", "1", "2"),
            ("a32", "2", "3"),
            ("a43", "3", "4"),
            ("a54", "4", "5"),
            ("a65", "5", "6"),
            ("a16", "6", "1"),
            ("a31", "1", "3"),
            ("a53", "3", "5"),
            ("a15", "5", "1"),
            ("a42", "2", "4"),
            ("a64", "4", "6"),
            ("a26", "6", "2"),
        ];
        for (name, s, t) in arrows {
            b.arrow(name, s, t, 0);
        }
        let quiver = b.build().expect("fixture quiver is well formed");
        let id = |n: &str| quiver.arrow_id(n).expect("fixture arrow") as u32;
        let cycle = |names: &[&str]| names.iter().map(|n| id(n)).collect::<Vec<_>>();
        let terms = vec![
            (Coef::one(), cycle(&["a16", "a21", "a32", "a43", "a54", "a65"])),
            (Coef::one(), cycle(&["a42", "a64", "a26"])),
            (Coef::one(), cycle(&["a31", "a53", "a15"])),
            (coef(-1), cycle(&["a31", "a43", "a64", "a16"])),
            (coef(-1), cycle(&["a26", "a32", "a53", "a65"])),
            (coef(-1), cycle(&["a42", "a54", "a15", "a21"])),
        ];
        let w = Potential::new(quiver, terms).expect("fixture potential is well formed");
        let cut = ["a16", "a26", "a15"].into_iter().map(String::from).collect();
        (w, cut)
    }

    /// One vertex with three loops x, y, z and the commutator potential
    /// zyx − yzx, cut at {x}. Its Jacobian algebra is the polynomial ring on
    /// three variables, so the truncation is infinite dimensional — handy as
    /// the smallest genuinely three-dimensional example.
    pub fn three_loops() -> (Potential, Cut) {
        let mut b = Quiver::builder();
        b.vertex("1");
        for name in ["x", "y", "z"] {
            b.arrow(name, "1", "1", 0);
        }
        let quiver = b.build().expect("fixture quiver is well formed");
        let id = |n: &str| quiver.arrow_id(n).expect("fixture arrow") as u32;
        let terms = vec![
            (Coef::one(), vec![id("x"), id("y"), id("z")]),
            (coef(-1), vec![id("x"), id("z"), id("y")]),
        ];
        let w = Potential::new(quiver, terms).expect("fixture potential is well formed");
        let cut = ["x"].into_iter().map(String::from).collect();
        (w, cut)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::{chorded_hexagon, doubled_square, three_loops};
    use super::*;
    use crate::cycheck::verify_self_duality;
    use crate::normalform::{normal_form, DEFAULT_CAP};

    fn rational(n: i64) -> Coef {
        Coef::from_integer(n.into())
    }

    #[test]
    fn potentials_store_cycles_up_to_rotation() {
        let (w, _) = doubled_square();
        let q = w.quiver().clone();
        let id = |n: &str| q.arrow_id(n).unwrap() as u32;

        let rotated = Potential::new(
            q.clone(),
            vec![
                (rational(1), vec![id("y1"), id("z1"), id("w1"), id("x1")]),
                (rational(1), vec![id("z2"), id("w2"), id("x2"), id("y2")]),
                (rational(-1), vec![id("w1"), id("x2"), id("y1"), id("z2")]),
                (rational(-1), vec![id("y2"), id("z1"), id("w2"), id("x1")]),
            ],
        )
        .unwrap();
        assert_eq!(w, rotated);

        let merged = Potential::new(
            q.clone(),
            vec![
                (rational(1), vec![id("x1"), id("y1"), id("z1"), id("w1")]),
                (rational(2), vec![id("y1"), id("z1"), id("w1"), id("x1")]),
            ],
        )
        .unwrap();
        assert_eq!(merged.terms().len(), 1);
        assert_eq!(merged.terms()[0].0, rational(3));

        let terms = vec![
            (rational(1), vec![id("x1"), id("y1"), id("z1"), id("w1")]),
            (rational(-1), vec![id("y1"), id("z1"), id("w1"), id("x1")]),
        ];
        let cancelled = Potential::new(q, terms).unwrap();
        assert!(cancelled.is_zero());
    }

    #[test]
    fn rejects_broken_cycles() {
        let (w, _) = doubled_square();
        let q = w.quiver().clone();
        let id = |n: &str| q.arrow_id(n).unwrap() as u32;
        // An open path, an incomposable word, and an empty cycle.
        assert!(Potential::new(q.clone(), vec![(rational(1), vec![id("x1"), id("y1")])]).is_err());
        assert!(Potential::new(q.clone(), vec![(rational(1), vec![id("x1"), id("x2")])]).is_err());
        assert!(Potential::new(q, vec![(rational(1), vec![])]).is_err());
    }

    #[test]
    fn cyclic_derivatives() {
        let (w, _) = doubled_square();
        let q = w.quiver();
        let x1 = q.arrow_id("x1").unwrap();
        let der = cyclic_derivative(&w, x1);
        // The two cycles through x1 survive, read from the arrow after x1:
        // w1·z1·y1 − w2·z1·y2, running 2 → 1.
        let mut expected = PathElement::zero();
        expected.add_term(q.path_from_names(&["y1", "z1", "w1"]).unwrap(), rational(1));
        expected.add_term(q.path_from_names(&["y2", "z1", "w2"]).unwrap(), rational(-1));
        assert_eq!(der, expected);

        // A 2-cycle differentiates to the complementary arrow, a loop to the
        // trivial path, and an absent arrow to zero.
        let mut b = Quiver::builder();
        b.vertex("u").vertex("v");
        b.arrow("x", "u", "v", 0);
        b.arrow("y", "v", "u", 0);
        b.arrow("t", "u", "u", 0);
        b.arrow("s", "v", "v", 0);
        let q2 = b.build().unwrap();
        let id = |n: &str| q2.arrow_id(n).unwrap();
        let w2 = Potential::new(
            q2.clone(),
            vec![
                (rational(1), vec![id("x") as u32, id("y") as u32]),
                (rational(1), vec![id("t") as u32]),
            ],
        )
        .unwrap();
        assert_eq!(
            cyclic_derivative(&w2, id("x")),
            PathElement::from_path(q2.arrow_path(id("y")))
        );
        assert_eq!(
            cyclic_derivative(&w2, id("t")),
            PathElement::from_path(q2.trivial_path(0))
        );
        assert!(cyclic_derivative(&w2, id("s")).is_zero());
    }

    #[test]
    fn cut_detection() {
        let (w, cut) = doubled_square();
        assert_eq!(is_cut(&w, &cut).unwrap(), CutCheck { ok: true, offending_term: None });

        // {y1, y2} cuts every cycle once as well.
        let ys: Cut = ["y1", "y2"].into_iter().map(String::from).collect();
        assert!(is_cut(&w, &ys).unwrap().ok);

        // {w1} misses the all-2 cycle entirely.
        let lone: Cut = ["w1"].into_iter().map(String::from).collect();
        let check = is_cut(&w, &lone).unwrap();
        assert!(!check.ok);
        assert_eq!(
            check.offending_term,
            Some(("w2·z1·y2·x1".to_string(), 0))
        );

        // {x1, y1} hits the first cycle twice.
        let pair: Cut = ["x1", "y1"].into_iter().map(String::from).collect();
        let check = is_cut(&w, &pair).unwrap();
        assert!(!check.ok);
        assert_eq!(
            check.offending_term,
            Some(("w1·z1·y1·x1".to_string(), 2))
        );

        let unknown: Cut = ["nope"].into_iter().map(String::from).collect();
        assert!(is_cut(&w, &unknown).is_err());

        let (w2, cut2) = chorded_hexagon();
        assert!(is_cut(&w2, &cut2).unwrap().ok);
        let (w3, cut3) = three_loops();
        assert!(is_cut(&w3, &cut3).unwrap().ok);
    }

    #[test]
    fn jacobian_presentations() {
        let (w, cut) = doubled_square();
        let ungraded = jacobian_algebra(&w, None).unwrap();
        assert_eq!(ungraded.quiver().n_vertices(), 4);
        assert_eq!(ungraded.quiver().n_arrows(), 8);
        assert_eq!(ungraded.relations().len(), 8);
        assert!(ungraded.quiver().arrows().iter().all(|a| a.degree == 0));

        let graded = jacobian_algebra(&w, Some(&cut)).unwrap();
        let q = graded.quiver();
        for a in q.arrows() {
            assert_eq!(a.degree, usize::from(cut.contains(&a.name)));
        }
        // Differentiating along a removes the degree of a from the
        // degree-one potential.
        for (a, rel) in q.arrows().iter().zip(graded.relations()) {
            let (p, _) = rel.terms().next().unwrap();
            assert_eq!(q.path_degree(p), 1 - usize::from(cut.contains(&a.name)));
        }

        let (w2, cut2) = chorded_hexagon();
        let b2 = jacobian_algebra(&w2, Some(&cut2)).unwrap();
        assert_eq!(b2.quiver().n_vertices(), 6);
        assert_eq!(b2.quiver().n_arrows(), 12);
        assert_eq!(b2.relations().len(), 12);

        // A zero potential presents the plain path algebra.
        let empty = Potential::new(w.quiver().clone(), vec![]).unwrap();
        assert!(jacobian_algebra(&empty, None).unwrap().relations().is_empty());

        // Grading by a non-cut is rejected.
        let not_cut: Cut = ["y1"].into_iter().map(String::from).collect();
        assert!(jacobian_algebra(&w, Some(&not_cut)).is_err());
    }

    #[test]
    fn truncated_presentations() {
        let (w, cut) = doubled_square();
        let a = truncated_algebra(&w, &cut).unwrap();
        assert_eq!(a.quiver().n_vertices(), 4);
        assert_eq!(a.quiver().n_arrows(), 6);
        assert_eq!(a.relations().len(), 2);
        let q = a.quiver();
        let mut first = PathElement::zero();
        first.add_term(q.path_from_names(&["y1", "z1", "w1"]).unwrap(), rational(1));
        first.add_term(q.path_from_names(&["y2", "z1", "w2"]).unwrap(), rational(-1));
        assert_eq!(a.relations()[0], first);
        let mut second = PathElement::zero();
        second.add_term(q.path_from_names(&["y2", "z2", "w2"]).unwrap(), rational(1));
        second.add_term(q.path_from_names(&["y1", "z2", "w1"]).unwrap(), rational(-1));
        assert_eq!(a.relations()[1], second);
        // Acyclic quiver: the truncation is finite dimensional, with normal
        // words the 4 idempotents, 6 arrows, 8 length-2 and 6 length-3 paths.
        assert_eq!(is_finite_dimensional(&a, DEFAULT_CAP), FiniteDim::Yes(24));

        let (w2, cut2) = chorded_hexagon();
        let a2 = truncated_algebra(&w2, &cut2).unwrap();
        assert_eq!(a2.quiver().n_vertices(), 6);
        assert_eq!(a2.quiver().n_arrows(), 9);
        assert_eq!(a2.relations().len(), 3);
        assert!(matches!(
            is_finite_dimensional(&a2, DEFAULT_CAP),
            FiniteDim::Yes(_)
        ));

        let not_cut: Cut = ["x1"].into_iter().map(String::from).collect();
        assert!(truncated_algebra(&w, &not_cut).is_err());
    }

    #[test]
    fn arrow_weighted_derivatives_rebuild_the_potential() {
        // Σ_a a·∂_aW and 4·W both lie in the Jacobian ideal for this
        // length-homogeneous potential, so their difference (the cyclic
        // Euler identity) reduces to zero.
        let (w, cut) = doubled_square();
        let b = jacobian_algebra(&w, Some(&cut)).unwrap();
        let gb = complete_groebner(&b, DEFAULT_CAP);
        assert!(gb.is_complete());
        let q = b.quiver();
        let mut lhs = PathElement::zero();
        for a in 0..q.n_arrows() {
            let arrow = PathElement::from_path(q.arrow_path(a));
            lhs = lhs.add(&arrow.multiply(&cyclic_derivative(&w, a)));
        }
        assert!(!lhs.is_zero());
        let rhs = w.as_element().scale(&rational(4));
        assert!(normal_form(&lhs.sub(&rhs), &gb).is_zero());
    }

    #[test]
    fn degree_zero_corners_match_the_truncation() {
        for (w, cut) in [doubled_square(), chorded_hexagon()] {
            let b = jacobian_algebra(&w, Some(&cut)).unwrap();
            let a = truncated_algebra(&w, &cut).unwrap();
            let gb_b = complete_groebner(&b, DEFAULT_CAP);
            let gb_a = complete_groebner(&a, DEFAULT_CAP);
            let nv = b.quiver().n_vertices();
            for i in 0..nv {
                for j in 0..nv {
                    assert_eq!(
                        gb_b.graded_dimension(Some((i, j)), 0),
                        gb_a.graded_dimension(Some((i, j)), 0),
                        "corner ({}, {})",
                        i,
                        j
                    );
                }
            }
        }
    }

    #[test]
    fn bimodule_complex_shapes() {
        let (w, cut) = doubled_square();
        let c = dimer_bimodule_complex(&w, &cut).unwrap();
        assert_eq!(c.len(), 4);
        let ranks: Vec<usize> = (0..4).map(|l| c.gens(l).len()).collect();
        assert_eq!(ranks, vec![4, 8, 8, 4]);
        let q = c.algebra().quiver().clone();
        for (a, g) in q.arrows().iter().zip(c.gens(1)) {
            assert_eq!((g.left_vertex, g.right_vertex), (a.target, a.source));
            assert_eq!(g.twist, a.degree as i64);
        }
        for (a, g) in q.arrows().iter().zip(c.gens(2)) {
            assert_eq!((g.left_vertex, g.right_vertex), (a.source, a.target));
            assert_eq!(g.twist, 1 - a.degree as i64);
        }
        assert!(c.gens(0).iter().all(|g| g.twist == 0));
        assert!(c.gens(3).iter().all(|g| g.twist == 1));
        assert!(verify_self_duality(&c, 3).pass);

        // The middle map fans each x1-cycle out over its other three arrows;
        // the two cycles through x1 share the target z1.
        let x1 = q.arrow_id("x1").unwrap();
        let row = &c.diff(1)[x1];
        assert_eq!(row.len(), 5);
        let z1 = q.arrow_id("z1").unwrap();
        let shared = row.iter().find(|(tgt, _)| *tgt == z1).unwrap();
        assert_eq!(shared.1.terms().count(), 2);

        let (w3, cut3) = three_loops();
        let c3 = dimer_bimodule_complex(&w3, &cut3).unwrap();
        let ranks3: Vec<usize> = (0..4).map(|l| c3.gens(l).len()).collect();
        assert_eq!(ranks3, vec![1, 3, 3, 1]);
        assert!(verify_self_duality(&c3, 3).pass);
    }

    #[test]
    fn hypothesis_reports() {
        let (w, cut) = doubled_square();
        let b = jacobian_algebra(&w, Some(&cut)).unwrap();
        let e: BTreeSet<String> = ["1"].into_iter().map(String::from).collect();
        let report = check_main_hypotheses(&b, &e, DEFAULT_CAP).unwrap();
        assert!(matches!(report.stable_finite, FiniteDim::Yes(_)));
        // The corner vanishes on exactly one orientation of this quiver.
        let given = report.corner_given == CornerCheck::Vanishes;
        let opposite = report.corner_opposite == CornerCheck::Vanishes;
        assert!(
            given != opposite,
            "given: {:?}, opposite: {:?}",
            report.corner_given,
            report.corner_opposite
        );
        assert!(report.pass);

        assert!(check_main_hypotheses(&b, &BTreeSet::new(), DEFAULT_CAP).is_err());
        let all: BTreeSet<String> = (1..=4).map(|v| v.to_string()).collect();
        assert!(check_main_hypotheses(&b, &all, DEFAULT_CAP).is_err());
    }

    #[test]
    fn qp_documents_round_trip() {
        let (w, cut) = chorded_hexagon();
        let text = qp_to_json(&w, Some(&cut));
        let (back, back_cut) = qp_from_json(&text).unwrap();
        assert_eq!(w, back);
        assert_eq!(back_cut, Some(cut));

        let (w1, _) = doubled_square();
        let (bare, no_cut) = qp_from_json(&qp_to_json(&w1, None)).unwrap();
        assert_eq!(w1, bare);
        assert_eq!(no_cut, None);

        let mut doc = qp_to_doc(&w1, None);
        doc.potential[0].cycle[0] = "missing".to_string();
        assert!(qp_from_doc(&doc).is_err());
        let mut doc = qp_to_doc(&w1, None);
        doc.cut = Some(vec!["missing".to_string()]);
        assert!(qp_from_doc(&doc).is_err());
    }
}
