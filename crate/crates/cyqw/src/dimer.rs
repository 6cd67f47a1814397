//! Dimer models: bipartite graphs embedded in the torus. The embedding is
//! stored combinatorially, as the list of faces with cyclically ordered
//! boundary edges, which is exactly the data needed to build the dual quiver
//! with potential. The module also enumerates perfect matchings (which become
//! cuts of the dual potential) and decides charge consistency by exact linear
//! programming.

use crate::normalform::{is_finite_dimensional, FiniteDim};
use crate::pathalg::{Coef, Quiver};
use crate::qp::{self, Cut, Potential};
use crate::simplex::{maximize, LpResult};
use crate::{input_err, Result};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// One edge of a dimer graph, joining a white vertex to a black vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimerEdge {
    pub id: String,
    pub white: String,
    pub black: String,
}

/// A bipartite graph on the torus.
///
/// Faces are cyclic edge-id lists: consecutive entries share a vertex, and
/// walking a face passes through each of its boundary edges from one endpoint
/// to the other. An edge borders exactly two face slots (possibly both in the
/// same face). The struct doubles as its own JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimerGraph {
    pub white: Vec<String>,
    pub black: Vec<String>,
    pub edges: Vec<DimerEdge>,
    pub faces: Vec<Vec<String>>,
}

impl DimerGraph {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| crate::Error::new(format!("invalid dimer document: {}", e)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dimer documents serialize")
    }
}

/// Outcome of [`validate_dimer`]: every structural violation found, not just
/// the first.
#[derive(Debug, Clone, Serialize)]
pub struct DimerReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Checks the structural invariants: distinct ids, bipartite edge endpoints,
/// every edge on exactly two face slots, and Euler characteristic zero.
/// Violations are collected, never panicked on.
pub fn validate_dimer(g: &DimerGraph) -> DimerReport {
    let mut violations = Vec::new();
    let mut vertex_seen = BTreeSet::new();
    for name in g.white.iter().chain(g.black.iter()) {
        if !vertex_seen.insert(name.as_str()) {
            violations.push(format!("duplicate vertex id {:?}", name));
        }
    }
    let whites: BTreeSet<&str> = g.white.iter().map(|s| s.as_str()).collect();
    let blacks: BTreeSet<&str> = g.black.iter().map(|s| s.as_str()).collect();
    let mut edge_seen = BTreeSet::new();
    for e in &g.edges {
        if !edge_seen.insert(e.id.as_str()) {
            violations.push(format!("duplicate edge id {:?}", e.id));
        }
        if !whites.contains(e.white.as_str()) {
            violations.push(format!(
                "edge {:?}: white endpoint {:?} is not a white vertex",
                e.id, e.white
            ));
        }
        if !blacks.contains(e.black.as_str()) {
            violations.push(format!(
                "edge {:?}: black endpoint {:?} is not a black vertex",
                e.id, e.black
            ));
        }
    }
    let mut slots: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, face) in g.faces.iter().enumerate() {
        if face.is_empty() {
            violations.push(format!("face {} is empty", i));
        }
        for id in face {
            if edge_seen.contains(id.as_str()) {
                *slots.entry(id.as_str()).or_insert(0) += 1;
            } else {
                violations.push(format!("face {} uses unknown edge id {:?}", i, id));
            }
        }
    }
    for e in &g.edges {
        let n = slots.get(e.id.as_str()).copied().unwrap_or(0);
        if n != 2 {
            violations.push(format!(
                "edge {:?} occurs in {} face slots (expected 2)",
                e.id, n
            ));
        }
    }
    let chi = (g.white.len() + g.black.len()) as i64 - g.edges.len() as i64 + g.faces.len() as i64;
    if chi != 0 {
        violations.push(format!("Euler characteristic is {}, not 0", chi));
    }
    DimerReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// Index-resolved graph. Vertices live in one combined space: whites first
/// (0..nw), then blacks.
struct Resolved {
    nw: usize,
    /// Per edge: (white endpoint, black endpoint) as combined indices.
    ends: Vec<(usize, usize)>,
    /// Per face: boundary edge indices in cyclic order.
    faces: Vec<Vec<usize>>,
    /// Per combined vertex: incident edge indices, ascending.
    incident: Vec<Vec<usize>>,
}

/// Resolves all ids to indices. Errors on ids that cannot be resolved;
/// torus-level invariants are not enforced here.
fn resolve_ids(g: &DimerGraph) -> Result<Resolved> {
    let nw = g.white.len();
    let mut vertex_idx: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, name) in g.white.iter().chain(g.black.iter()).enumerate() {
        if vertex_idx.insert(name.as_str(), i).is_some() {
            input_err!("duplicate vertex id {:?}", name);
        }
    }
    let mut edge_idx: BTreeMap<&str, usize> = BTreeMap::new();
    let mut ends = Vec::with_capacity(g.edges.len());
    let mut incident = vec![Vec::new(); vertex_idx.len()];
    for (i, e) in g.edges.iter().enumerate() {
        if edge_idx.insert(e.id.as_str(), i).is_some() {
            input_err!("duplicate edge id {:?}", e.id);
        }
        let w = match vertex_idx.get(e.white.as_str()) {
            Some(&w) if w < nw => w,
            _ => input_err!(
                "edge {:?}: white endpoint {:?} is not a white vertex",
                e.id,
                e.white
            ),
        };
        let b = match vertex_idx.get(e.black.as_str()) {
            Some(&b) if b >= nw => b,
            _ => input_err!(
                "edge {:?}: black endpoint {:?} is not a black vertex",
                e.id,
                e.black
            ),
        };
        ends.push((w, b));
        incident[w].push(i);
        incident[b].push(i);
    }
    let mut faces = Vec::with_capacity(g.faces.len());
    for (i, face) in g.faces.iter().enumerate() {
        let mut resolved = Vec::with_capacity(face.len());
        for id in face {
            match edge_idx.get(id.as_str()) {
                Some(&e) => resolved.push(e),
                None => input_err!("face {} uses unknown edge id {:?}", i, id),
            }
        }
        faces.push(resolved);
    }
    Ok(Resolved {
        nw,
        ends,
        faces,
        incident,
    })
}

/// Full validation plus resolution, for the operations that need a genuine
/// torus dimer.
fn resolve_strict(g: &DimerGraph) -> Result<Resolved> {
    let report = validate_dimer(g);
    if !report.ok {
        input_err!("invalid dimer graph: {}", report.violations.join("; "));
    }
    resolve_ids(g)
}

/// Corner sequence of one face: `corners[k]` is the vertex the face walk
/// passes between `face[k]` and `face[k+1]`.
type Corners = Vec<usize>;

/// Walks the face from a chosen corner and checks that it closes into an
/// alternating walk. Returns the full corner sequence, or None when the data
/// is not a closed walk under this seed.
fn walk_face(face: &[usize], ends: &[(usize, usize)], seed_pos: usize, seed: usize) -> Option<Corners> {
    let m = face.len();
    let mut corners = vec![usize::MAX; m];
    corners[seed_pos] = seed;
    let mut cur = seed;
    for step in 1..m {
        let j = (seed_pos + step) % m;
        let (w, b) = ends[face[j]];
        if cur != w && cur != b {
            return None;
        }
        cur = if cur == w { b } else { w };
        corners[j] = cur;
    }
    // Closing the walk: the last corner must be the other endpoint of the
    // seeded edge.
    let (w, b) = ends[face[seed_pos]];
    if cur != w && cur != b {
        return None;
    }
    let back = if cur == w { b } else { w };
    if back != seed {
        return None;
    }
    Some(corners)
}

/// Candidate corner sequences for one face. A consecutive pair of edges with
/// a unique common vertex pins the walk; faces made entirely of parallel
/// edges (digons and the like) admit two mirror walks, both returned.
fn face_corner_candidates(
    index: usize,
    face: &[usize],
    ends: &[(usize, usize)],
) -> Result<Vec<Corners>> {
    let m = face.len();
    if m == 0 {
        input_err!("face {} is empty", index);
    }
    for k in 0..m {
        let (ew, eb) = ends[face[k]];
        let (fw, fb) = ends[face[(k + 1) % m]];
        match (ew == fw, eb == fb) {
            (true, true) => continue,
            (true, false) => {
                return match walk_face(face, ends, k, ew) {
                    Some(c) => Ok(vec![c]),
                    None => input_err!("face {} is not a closed alternating walk", index),
                };
            }
            (false, true) => {
                return match walk_face(face, ends, k, eb) {
                    Some(c) => Ok(vec![c]),
                    None => input_err!("face {} is not a closed alternating walk", index),
                };
            }
            (false, false) => input_err!(
                "face {}: consecutive edges {} and {} share no vertex",
                index,
                face[k],
                face[(k + 1) % m]
            ),
        }
    }
    // Every consecutive pair is parallel: the whole face runs between one
    // white/black pair and both walk directions are locally consistent.
    let (w, b) = ends[face[0]];
    let mut out = Vec::new();
    for seed in [w, b] {
        if let Some(c) = walk_face(face, ends, 0, seed) {
            out.push(c);
        }
    }
    if out.is_empty() {
        input_err!("face {} is not a closed alternating walk", index);
    }
    Ok(out)
}

/// A consistently oriented embedding.
struct Oriented {
    /// Per combined vertex: the cyclic successor around it, mapping an
    /// incident edge to (next incident edge, the face between them).
    succ: Vec<BTreeMap<usize, (usize, usize)>>,
    /// Per edge: (source face, target face) of the dual arrow under the
    /// white-on-the-left rule.
    sides: Vec<(usize, usize)>,
}

/// Tries one full corner assignment. Fails when some edge is traversed twice
/// in the same direction (the face data would not orient) or some vertex's
/// corners do not close into a single rotation.
fn try_orient(r: &Resolved, corners: &[&Corners]) -> Option<Oriented> {
    let nv = r.incident.len();
    let ne = r.ends.len();
    let mut entries: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ne];
    for (f, face) in r.faces.iter().enumerate() {
        let m = face.len();
        for j in 0..m {
            let entry = corners[f][(j + m - 1) % m];
            entries[face[j]].push((entry, f));
        }
    }
    let mut sides = Vec::with_capacity(ne);
    for (e, t) in entries.iter().enumerate() {
        debug_assert_eq!(t.len(), 2, "slot counts were validated");
        let (w, _) = r.ends[e];
        let (v1, f1) = t[0];
        let (v2, f2) = t[1];
        if v1 == v2 {
            return None;
        }
        // The traversal entering at the white endpoint runs white -> black;
        // its face is the target of the dual arrow.
        let (src, tgt) = if v1 == w { (f2, f1) } else { (f1, f2) };
        sides.push((src, tgt));
    }
    let mut succ: Vec<BTreeMap<usize, (usize, usize)>> = vec![BTreeMap::new(); nv];
    for (f, face) in r.faces.iter().enumerate() {
        let m = face.len();
        for j in 0..m {
            let v = corners[f][j];
            if succ[v].insert(face[j], (face[(j + 1) % m], f)).is_some() {
                return None;
            }
        }
    }
    for v in 0..nv {
        let map = &succ[v];
        if map.len() != r.incident[v].len() {
            return None;
        }
        let Some(&start) = map.keys().next() else {
            continue;
        };
        let mut seen = BTreeSet::new();
        let mut cur = start;
        for _ in 0..map.len() {
            if !seen.insert(cur) {
                return None;
            }
            cur = match map.get(&cur) {
                Some(&(next, _)) => next,
                None => return None,
            };
        }
        if cur != start {
            return None;
        }
    }
    Some(Oriented { succ, sides })
}

/// Orients the embedding: picks a corner assignment (backtracking over the
/// faces whose walk direction is ambiguous) under which every edge is
/// traversed once in each direction and every vertex has a single rotation.
fn orient(r: &Resolved) -> Result<Oriented> {
    let mut candidates = Vec::with_capacity(r.faces.len());
    for (i, face) in r.faces.iter().enumerate() {
        candidates.push(face_corner_candidates(i, face, &r.ends)?);
    }
    let mut choice = vec![0usize; candidates.len()];
    loop {
        let picked: Vec<&Corners> = choice
            .iter()
            .zip(candidates.iter())
            .map(|(&c, cands)| &cands[c])
            .collect();
        if let Some(o) = try_orient(r, &picked) {
            return Ok(o);
        }
        // Odometer step over the candidate lists.
        let mut k = candidates.len();
        loop {
            if k == 0 {
                input_err!("the face data does not orient the surface consistently");
            }
            k -= 1;
            if choice[k] + 1 < candidates[k].len() {
                choice[k] += 1;
                for c in choice[k + 1..].iter_mut() {
                    *c = 0;
                }
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Builds the quiver with potential dual to the dimer graph.
///
/// Quiver vertices are the faces (named by face index), arrows are the edges
/// (keeping their ids), all in declaration order. Each arrow is oriented so
/// that the white endpoint of its edge lies on the arrow's left; `flip`
/// reverses every arrow, giving the opposite convention. Every graph vertex
/// contributes the cycle of arrows dual to its incident edges in rotation
/// order; the potential is the sum of the white cycles minus the black ones.
pub fn dual_qp(g: &DimerGraph, flip: bool) -> Result<Potential> {
    let r = resolve_strict(g)?;
    let o = orient(&r)?;
    let mut builder = Quiver::builder();
    for f in 0..r.faces.len() {
        builder.vertex(f.to_string());
    }
    for (e, edge) in g.edges.iter().enumerate() {
        let (src, tgt) = o.sides[e];
        let (src, tgt) = if flip { (tgt, src) } else { (src, tgt) };
        builder.arrow(edge.id.clone(), src.to_string(), tgt.to_string(), 0);
    }
    let quiver = builder.build()?;
    let mut terms = Vec::with_capacity(r.incident.len());
    for (v, map) in o.succ.iter().enumerate() {
        let Some(&start) = map.keys().next() else {
            continue;
        };
        let mut rotation = vec![start];
        let mut cur = start;
        loop {
            cur = map[&cur].0;
            if cur == start {
                break;
            }
            rotation.push(cur);
        }
        // Around a black vertex consecutive arrows compose in rotation
        // order; around a white vertex they compose against it.
        let mut word: Vec<u32> = if v < r.nw {
            std::iter::once(rotation[0])
                .chain(rotation[1..].iter().rev().copied())
                .map(|e| e as u32)
                .collect()
        } else {
            rotation.iter().map(|&e| e as u32).collect()
        };
        if flip {
            word.reverse();
        }
        let coef = if v < r.nw { Coef::one() } else { -Coef::one() };
        terms.push((coef, word));
    }
    Potential::new(quiver, terms)
}

/// Enumerates all perfect matchings, canonically sorted, each as the set of
/// its edge ids (the same shape a cut of the dual potential takes). A graph
/// with unequal colour class sizes has none.
pub fn perfect_matchings(g: &DimerGraph) -> Result<Vec<Cut>> {
    let r = resolve_ids(g)?;
    let nb = g.black.len();
    if g.white.len() != nb {
        return Ok(Vec::new());
    }
    let mut used_white = vec![false; r.nw];
    let mut chosen: Vec<usize> = Vec::with_capacity(nb);
    let mut found: Vec<Cut> = Vec::new();
    fn extend(
        k: usize,
        r: &Resolved,
        g: &DimerGraph,
        used_white: &mut [bool],
        chosen: &mut Vec<usize>,
        found: &mut Vec<Cut>,
    ) {
        if k == r.incident.len() - r.nw {
            found.push(chosen.iter().map(|&e| g.edges[e].id.clone()).collect());
            return;
        }
        for &e in &r.incident[r.nw + k] {
            let (w, _) = r.ends[e];
            if !used_white[w] {
                used_white[w] = true;
                chosen.push(e);
                extend(k + 1, r, g, used_white, chosen, found);
                chosen.pop();
                used_white[w] = false;
            }
        }
    }
    extend(0, &r, g, &mut used_white, &mut chosen, &mut found);
    found.sort();
    Ok(found)
}

/// Feasibility report for the charge conditions.
#[derive(Debug, Clone)]
pub struct ChargeReport {
    pub feasible: bool,
    /// The optimal uniform positivity margin (largest ε with every charge
    /// at least ε), when the equality system is solvable at all.
    pub margin: Option<Coef>,
    /// A charge per edge id, present exactly when feasible.
    pub witness: Option<BTreeMap<String, Coef>>,
    /// The witness re-substituted into both condition families, exactly.
    pub verified: bool,
}

/// Decides whether the graph carries charges R(edge) > 0 with
///
/// * sum of R over the edges at each vertex equal to 2, and
/// * sum of (1 − R) over the boundary slots of each face equal to 2,
///
/// by maximizing the positivity margin in exact rational arithmetic. The
/// conditions are feasible precisely when the optimal margin is positive.
pub fn consistency_charge(g: &DimerGraph) -> Result<ChargeReport> {
    let r = resolve_strict(g)?;
    let ne = g.edges.len();
    // Variables: one slack s_e = R_e − ε per edge, then ε = p − q split into
    // nonnegative parts. Equalities in R translate by substitution.
    let n = ne + 2;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let two = Coef::from_integer(2.into());
    for inc in &r.incident {
        let mut row = vec![Coef::zero(); n];
        for &e in inc {
            row[e] += Coef::one();
        }
        let deg = Coef::from_integer(inc.len().into());
        row[ne] = deg.clone();
        row[ne + 1] = -deg;
        rows.push(row);
        rhs.push(two.clone());
    }
    for face in &r.faces {
        let mut row = vec![Coef::zero(); n];
        for &e in face {
            row[e] += Coef::one();
        }
        let m = Coef::from_integer(face.len().into());
        row[ne] = m.clone();
        row[ne + 1] = -m.clone();
        rows.push(row);
        rhs.push(m - &two);
    }
    let mut objective = vec![Coef::zero(); n];
    objective[ne] = Coef::one();
    objective[ne + 1] = -Coef::one();
    match maximize(&objective, &rows, &rhs) {
        LpResult::Infeasible => Ok(ChargeReport {
            feasible: false,
            margin: None,
            witness: None,
            verified: false,
        }),
        LpResult::Unbounded => input_err!("charge margin is unbounded; the graph is degenerate"),
        LpResult::Optimal { value, solution } => {
            if value <= Coef::zero() {
                return Ok(ChargeReport {
                    feasible: false,
                    margin: Some(value),
                    witness: None,
                    verified: false,
                });
            }
            let witness: BTreeMap<String, Coef> = g
                .edges
                .iter()
                .enumerate()
                .map(|(e, edge)| (edge.id.clone(), &solution[e] + &value))
                .collect();
            let verified = verify_charges(&r, g, &witness);
            Ok(ChargeReport {
                feasible: true,
                margin: Some(value),
                witness: Some(witness),
                verified,
            })
        }
    }
}

/// Exact re-substitution of a witness into both condition families.
fn verify_charges(r: &Resolved, g: &DimerGraph, witness: &BTreeMap<String, Coef>) -> bool {
    let two = Coef::from_integer(2.into());
    let charge = |e: usize| &witness[&g.edges[e].id];
    for inc in &r.incident {
        let mut sum = Coef::zero();
        for &e in inc {
            sum += charge(e);
        }
        if sum != two {
            return false;
        }
    }
    for face in &r.faces {
        let mut sum = Coef::zero();
        for &e in face {
            sum += Coef::one() - charge(e);
        }
        if sum != two {
            return false;
        }
    }
    witness.values().all(|x| *x > Coef::zero())
}

/// Aggregate verification that a perfect matching and an idempotent vertex
/// set satisfy the finiteness and corner/source hypotheses on the dual
/// algebra.
#[derive(Debug, Clone, Serialize)]
pub struct MatchingHypothesesReport {
    /// The matching meets every potential term exactly once.
    pub matching_is_cut: bool,
    /// Finite dimensionality of the degree-zero truncation.
    pub truncated_finite: FiniteDim,
    /// The corner and source checks on the graded Jacobian algebra.
    pub main: qp::HypothesesReport,
    pub pass: bool,
}

/// Runs the full hypothesis suite for the dimer pipeline: `d` must be a
/// perfect matching (input error otherwise); it is checked to be a cut of
/// the dual potential, the truncation by it is tested for finite dimension,
/// and the corner/source conditions are checked on the graded Jacobian
/// algebra with respect to the face set `e` (face-index vertex names).
pub fn check_matching_hypotheses(
    g: &DimerGraph,
    d: &Cut,
    e: &BTreeSet<String>,
    cap: usize,
) -> Result<MatchingHypothesesReport> {
    let matchings = perfect_matchings(g)?;
    if !matchings.iter().any(|m| m == d) {
        input_err!("the chosen edge set is not a perfect matching of the graph");
    }
    let w = dual_qp(g, false)?;
    let cut_check = qp::is_cut(&w, d)?;
    if !cut_check.ok {
        // Impossible for a genuine perfect matching: every vertex cycle of
        // the potential meets it exactly once by definition.
        input_err!("perfect matching fails to cut the dual potential");
    }
    let truncation = qp::truncated_algebra(&w, d)?;
    let truncated_finite = is_finite_dimensional(&truncation, cap);
    let graded = qp::jacobian_algebra(&w, Some(d))?;
    let main = qp::check_main_hypotheses(&graded, e, cap)?;
    let pass = matches!(truncated_finite, FiniteDim::Yes(_)) && main.pass;
    Ok(MatchingHypothesesReport {
        matching_is_cut: true,
        truncated_finite,
        main,
        pass,
    })
}

/// Small dimer graphs used across the test suite and the command line
/// examples.
pub mod fixtures {
    use super::{DimerEdge, DimerGraph};

    fn graph(
        white: &[&str],
        black: &[&str],
        edges: &[(&str, &str, &str)],
        faces: &[&[&str]],
    ) -> DimerGraph {
        DimerGraph {
            white: white.iter().map(|s| s.to_string()).collect(),
            black: black.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|&(id, w, b)| DimerEdge {
                    id: id.into(),
                    white: w.into(),
                    black: b.into(),
                })
                .collect(),
            faces: faces
                .iter()
                .map(|f| f.iter().map(|s| s.to_string()).collect())
                .collect(),
        }
    }

    /// The 2×2 square grid on the torus: two white and two black vertices in
    /// checkerboard position, eight edges, four square faces. Its dual is
    /// the doubled-square quiver with potential
    /// ([`crate::qp::fixtures::doubled_square`]), with face k dualizing to
    /// vertex k+1 of that fixture and edges keeping their arrow names.
    pub fn square_grid() -> DimerGraph {
        graph(
            &["W1", "W2"],
            &["B1", "B2"],
            &[
                ("x1", "W1", "B1"),
                ("x2", "W2", "B2"),
                ("y1", "W1", "B2"),
                ("y2", "W2", "B1"),
                ("z1", "W1", "B1"),
                ("z2", "W2", "B2"),
                ("w1", "W1", "B2"),
                ("w2", "W2", "B1"),
            ],
            &[
                &["x2", "w2", "x1", "w1"],
                &["x1", "y2", "x2", "y1"],
                &["z1", "y1", "z2", "y2"],
                &["z2", "w1", "z1", "w2"],
            ],
        )
    }

    /// Six vertices, twelve edges, six square faces. One white vertex has
    /// degree six and the other two degree three; the dual is the chorded
    /// hexagon ([`crate::qp::fixtures::chorded_hexagon`]), again with face k
    /// dualizing to vertex k+1.
    pub fn chorded_hexagon_dimer() -> DimerGraph {
        graph(
            &["W1", "W2", "W3"],
            &["B1", "B2", "B3"],
            &[
                ("a21", "W1", "B3"),
                ("a32", "W1", "B2"),
                ("a43", "W1", "B1"),
                ("a54", "W1", "B3"),
                ("a65", "W1", "B2"),
                ("a16", "W1", "B1"),
                ("a31", "W3", "B1"),
                ("a53", "W3", "B2"),
                ("a15", "W3", "B3"),
                ("a42", "W2", "B3"),
                ("a64", "W2", "B1"),
                ("a26", "W2", "B2"),
            ],
            &[
                &["a16", "a31", "a15", "a21"],
                &["a21", "a42", "a26", "a32"],
                &["a32", "a53", "a31", "a43"],
                &["a43", "a64", "a42", "a54"],
                &["a54", "a15", "a53", "a65"],
                &["a65", "a26", "a64", "a16"],
            ],
        )
    }

    /// The hexagonal dimer: one white and one black vertex, three parallel
    /// edges, one hexagonal face traversing each edge twice. Its dual is the
    /// three-loop quiver ([`crate::qp::fixtures::three_loops`]).
    pub fn hexagonal() -> DimerGraph {
        graph(
            &["W"],
            &["B"],
            &[("x", "W", "B"), ("y", "W", "B"), ("z", "W", "B")],
            &[&["x", "z", "y", "x", "z", "y"]],
        )
    }

    /// A valid torus dimer containing a digon face: two vertices joined by
    /// four parallel edges, with one digon and one hexagonal face. The digon
    /// face forces its two charges to sum to zero, so no positive charge
    /// assignment exists.
    pub fn digon_torus() -> DimerGraph {
        graph(
            &["W"],
            &["B"],
            &[
                ("a", "W", "B"),
                ("b", "W", "B"),
                ("c", "W", "B"),
                ("d", "W", "B"),
            ],
            &[&["a", "b"], &["a", "c", "d", "b", "c", "d"]],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::{chorded_hexagon_dimer, digon_torus, hexagonal, square_grid};
    use super::*;
    use crate::normalform::DEFAULT_CAP;
    use crate::qp::fixtures::{chorded_hexagon, doubled_square, three_loops};

    #[test]
    fn fixtures_validate_and_bad_data_is_reported() {
        for g in [
            square_grid(),
            chorded_hexagon_dimer(),
            hexagonal(),
            digon_torus(),
        ] {
            let report = validate_dimer(&g);
            assert!(report.ok, "violations: {:?}", report.violations);
        }

        let mut white_white = square_grid();
        white_white.edges[0].black = "W2".to_string();
        let report = validate_dimer(&white_white);
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("not a black vertex")));

        let mut missing_face = square_grid();
        missing_face.faces.pop();
        let report = validate_dimer(&missing_face);
        assert!(report.violations.iter().any(|v| v.contains("face slots")));
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("Euler characteristic")));

        let mut dup = hexagonal();
        dup.edges[1].id = "x".to_string();
        assert!(!validate_dimer(&dup).ok);
    }

    #[test]
    fn dual_of_the_square_grid_is_the_doubled_square() {
        let dual = dual_qp(&square_grid(), false).unwrap();
        let (reference, _) = doubled_square();
        let dq = dual.quiver();
        let rq = reference.quiver();
        assert_eq!(dq.n_vertices(), 4);
        assert_eq!(dq.n_arrows(), 8);
        // Face k corresponds to reference vertex k+1; arrows share names.
        for (a, b) in dq.arrows().iter().zip(rq.arrows().iter()) {
            assert_eq!(a.name, b.name);
            let rename = |v: usize| (v + 1).to_string();
            assert_eq!(rename(a.source), rq.vertex_name(b.source));
            assert_eq!(rename(a.target), rq.vertex_name(b.target));
        }
        assert_eq!(dual.terms(), reference.terms());
    }

    #[test]
    fn dual_of_the_chorded_hexagon_dimer_matches_its_potential() {
        let dual = dual_qp(&chorded_hexagon_dimer(), false).unwrap();
        let (reference, _) = chorded_hexagon();
        assert_eq!(dual.quiver().n_vertices(), 6);
        assert_eq!(dual.quiver().n_arrows(), 12);
        for (a, b) in dual
            .quiver()
            .arrows()
            .iter()
            .zip(reference.quiver().arrows().iter())
        {
            assert_eq!(a.name, b.name);
            assert_eq!(
                (a.source + 1).to_string(),
                reference.quiver().vertex_name(b.source)
            );
            assert_eq!(
                (a.target + 1).to_string(),
                reference.quiver().vertex_name(b.target)
            );
        }
        assert_eq!(dual.terms(), reference.terms());
    }

    #[test]
    fn dual_of_the_hexagonal_dimer_is_the_three_loop_potential() {
        let dual = dual_qp(&hexagonal(), false).unwrap();
        let (reference, _) = three_loops();
        assert_eq!(dual.quiver().n_vertices(), 1);
        assert_eq!(dual.quiver().n_arrows(), 3);
        assert_eq!(dual.terms(), reference.terms());
    }

    #[test]
    fn duality_counts_hold_for_every_fixture() {
        for g in [
            square_grid(),
            chorded_hexagon_dimer(),
            hexagonal(),
            digon_torus(),
        ] {
            let dual = dual_qp(&g, false).unwrap();
            assert_eq!(dual.quiver().n_vertices(), g.faces.len());
            assert_eq!(dual.quiver().n_arrows(), g.edges.len());
            assert_eq!(dual.terms().len(), g.white.len() + g.black.len());
        }
    }

    #[test]
    fn flipping_reverses_arrows_and_cycles() {
        let plain = dual_qp(&square_grid(), false).unwrap();
        let flipped = dual_qp(&square_grid(), true).unwrap();
        for (a, b) in plain
            .quiver()
            .arrows()
            .iter()
            .zip(flipped.quiver().arrows().iter())
        {
            assert_eq!(a.name, b.name);
            assert_eq!(a.source, b.target);
            assert_eq!(a.target, b.source);
        }
        assert_eq!(plain.terms().len(), flipped.terms().len());
        for ((ca, wa), (cb, wb)) in plain.terms().iter().zip(flipped.terms().iter()) {
            assert_eq!(ca, cb);
            let mut reversed: Vec<u32> = wb.clone();
            reversed.reverse();
            // Reversal is an anti-isomorphism: cycles correspond up to
            // rotation, which the canonical form normalizes away.
            let mut best = reversed.clone();
            for s in 1..reversed.len() {
                let rot: Vec<u32> = reversed[s..]
                    .iter()
                    .chain(reversed[..s].iter())
                    .copied()
                    .collect();
                if rot < best {
                    best = rot;
                }
            }
            assert_eq!(wa, &best);
        }
    }

    #[test]
    fn unorientable_face_data_is_an_input_error() {
        let mut broken = square_grid();
        broken.faces[0].reverse();
        let err = dual_qp(&broken, false).unwrap_err();
        assert!(err.message().contains("orient"));

        let mut torn = square_grid();
        torn.faces[1] = vec![
            "x1".to_string(),
            "x2".to_string(),
            "y2".to_string(),
            "y1".to_string(),
        ];
        assert!(dual_qp(&torn, false).is_err());
    }

    #[test]
    fn matchings_are_enumerated_and_are_cuts() {
        let cases = [
            (square_grid(), 8usize),
            (chorded_hexagon_dimer(), 12),
            (hexagonal(), 3),
            (digon_torus(), 4),
        ];
        for (g, expected) in cases {
            let matchings = perfect_matchings(&g).unwrap();
            assert_eq!(matchings.len(), expected, "matchings of {:?}", g.white);
            let dual = dual_qp(&g, false).unwrap();
            let flipped = dual_qp(&g, true).unwrap();
            for m in &matchings {
                assert_eq!(m.len(), g.white.len());
                assert!(qp::is_cut(&dual, m).unwrap().ok);
                assert!(qp::is_cut(&flipped, m).unwrap().ok);
            }
        }

        let grid = perfect_matchings(&square_grid()).unwrap();
        let xs: Cut = ["x1", "x2"].iter().map(|s| s.to_string()).collect();
        assert!(grid.contains(&xs));
        let chord = perfect_matchings(&chorded_hexagon_dimer()).unwrap();
        let printed: Cut = ["a16", "a26", "a15"].iter().map(|s| s.to_string()).collect();
        assert!(chord.contains(&printed));
        for m in perfect_matchings(&hexagonal()).unwrap() {
            assert_eq!(m.len(), 1);
        }
    }

    #[test]
    fn unbalanced_graphs_have_no_matchings() {
        let mut g = hexagonal();
        g.white.push("W2".to_string());
        assert!(perfect_matchings(&g).unwrap().is_empty());
    }

    #[test]
    fn charges_are_exact() {
        let half = Coef::new(1.into(), 2.into());
        let report = consistency_charge(&square_grid()).unwrap();
        assert!(report.feasible);
        assert!(report.verified);
        assert_eq!(report.margin, Some(half.clone()));
        let witness = report.witness.unwrap();
        assert!(witness.values().all(|x| *x == half));

        let two_thirds = Coef::new(2.into(), 3.into());
        let report = consistency_charge(&hexagonal()).unwrap();
        assert!(report.feasible && report.verified);
        assert_eq!(report.margin, Some(two_thirds.clone()));
        assert!(report.witness.unwrap().values().all(|x| *x == two_thirds));

        let report = consistency_charge(&chorded_hexagon_dimer()).unwrap();
        assert!(report.feasible && report.verified);

        let report = consistency_charge(&digon_torus()).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.margin, Some(Coef::zero()));
        assert!(report.witness.is_none());
    }

    #[test]
    fn hypothesis_pipeline_on_the_square_grid() {
        let cut: Cut = ["x1", "x2"].iter().map(|s| s.to_string()).collect();
        let e: BTreeSet<String> = ["0".to_string()].into_iter().collect();
        let report =
            check_matching_hypotheses(&square_grid(), &cut, &e, DEFAULT_CAP).unwrap();
        assert!(report.matching_is_cut);
        assert_eq!(report.truncated_finite, FiniteDim::Yes(24));
        assert!(report.main.pass);
        assert!(report.pass);

        let not_matching: Cut = ["x1", "y1"].iter().map(|s| s.to_string()).collect();
        assert!(check_matching_hypotheses(&square_grid(), &not_matching, &e, DEFAULT_CAP).is_err());
    }

    #[test]
    fn dimer_documents_round_trip() {
        let g = chorded_hexagon_dimer();
        let text = g.to_json();
        let back = DimerGraph::from_json(&text).unwrap();
        assert_eq!(back, g);
        assert!(DimerGraph::from_json("{\"white\": [}").is_err());
    }
}
