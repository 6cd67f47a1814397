//! Brute-force counterparts of the main computational routes.
//!
//! Everything here recomputes a quantity by direct enumeration and exact
//! linear algebra: graded dimensions come from the span of all paths modulo
//! the span of all relation multiples (no rewriting, no Groebner machinery),
//! and matching counts come from a permanent-style subset recursion (no
//! backtracking enumeration). Tests compare the primary implementations
//! against these independent answers.

use std::collections::BTreeMap;

use crate::dimer::DimerGraph;
use crate::input_err;
use crate::linalg::sparse_rank;
use crate::pathalg::{Coef, Path, PathElement, PresentedGradedAlgebra, Quiver};
use crate::Result;

/// All paths of grading degree at most `grade`, by breadth-first extension.
/// `len_cap` bounds word length: a quiver whose degree-zero arrows contain a
/// cycle has infinitely many paths in a fixed grade, and hitting the cap
/// while extensions are still admissible reports an error rather than a
/// silently truncated answer.
fn paths_up_to_grade(q: &Quiver, grade: usize, len_cap: usize) -> Result<Vec<Path>> {
    let mut out: Vec<Path> = Vec::new();
    let mut frontier: Vec<Path> = (0..q.n_vertices()).map(|v| q.trivial_path(v)).collect();
    while let Some(p) = frontier.pop() {
        let d = q.path_degree(&p);
        for &a in q.arrows_from(p.end()) {
            if d + q.arrow(a).degree <= grade {
                if p.len() == len_cap {
                    input_err!(
                        "path enumeration exceeded the length cap {len_cap}; \
                         raise it, or the quiver has a degree-zero cycle"
                    );
                }
                let step = q.arrow_path(a);
                frontier.push(p.then(&step).expect("arrow leaves the path's end"));
            }
        }
        out.push(p);
    }
    out.sort();
    Ok(out)
}

/// All paths of grading degree exactly `grade`, sorted.
pub fn paths_of_grade(q: &Quiver, grade: usize, len_cap: usize) -> Result<Vec<Path>> {
    let mut v = paths_up_to_grade(q, grade, len_cap)?;
    v.retain(|p| q.path_degree(p) == grade);
    Ok(v)
}

/// Graded component dimensions by direct linear algebra: entry `[i][j]` is
/// the dimension of `e_i · A_grade · e_j`, computed as the number of
/// grade-`grade` paths from `j` to `i` minus the rank of every ideal element
/// `p · r · q` (relation `r`, path cofactors `p`, `q`) supported there. The
/// products are free path-algebra products, so the answer shares nothing
/// with the rewriting route.
pub fn graded_dimensions_bruteforce(
    alg: &PresentedGradedAlgebra,
    grade: usize,
    len_cap: usize,
) -> Result<Vec<Vec<u64>>> {
    let q = alg.quiver();
    let nv = q.n_vertices();
    let all = paths_up_to_grade(q, grade, len_cap)?;
    let degs: Vec<usize> = all.iter().map(|p| q.path_degree(p)).collect();

    // span index per (start, end) pair
    let mut index: Vec<Vec<BTreeMap<&Path, u32>>> = vec![vec![BTreeMap::new(); nv]; nv];
    for (p, &d) in all.iter().zip(&degs) {
        if d == grade {
            let slot = &mut index[p.start()][p.end()];
            let next = slot.len() as u32;
            slot.insert(p, next);
        }
    }

    let mut rows: Vec<Vec<Vec<Vec<(u32, Coef)>>>> = vec![vec![Vec::new(); nv]; nv];
    for r in alg.relations() {
        let Some((rf, rt)) = r.support_endpoints() else { continue };
        let rd = match r.leading_path() {
            Some(p) => q.path_degree(p),
            None => continue,
        };
        if rd > grade {
            continue;
        }
        let lefts: Vec<usize> = (0..all.len())
            .filter(|&k| all[k].start() == rt && degs[k] + rd <= grade)
            .collect();
        let rights: Vec<usize> = (0..all.len())
            .filter(|&k| all[k].end() == rf && degs[k] + rd <= grade)
            .collect();
        for &l in &lefts {
            for &v in &rights {
                if degs[l] + rd + degs[v] != grade {
                    continue;
                }
                let prod = PathElement::from_path(all[l].clone())
                    .multiply(r)
                    .multiply(&PathElement::from_path(all[v].clone()));
                if prod.is_zero() {
                    continue;
                }
                let slot = &index[all[v].start()][all[l].end()];
                let row: Vec<(u32, Coef)> = prod
                    .terms()
                    .map(|(p, c)| {
                        let col = slot.get(p).expect("product lands in the enumerated span");
                        (*col, c.clone())
                    })
                    .collect();
                rows[all[v].start()][all[l].end()].push(row);
            }
        }
    }

    let mut out = vec![vec![0u64; nv]; nv];
    for i in 0..nv {
        for j in 0..nv {
            let n_paths = index[j][i].len();
            let rank = sparse_rank(rows[j][i].drain(..));
            out[i][j] = (n_paths - rank) as u64;
        }
    }
    Ok(out)
}

/// Total dimension of the grade, summing [`graded_dimensions_bruteforce`].
pub fn total_graded_dimension_bruteforce(
    alg: &PresentedGradedAlgebra,
    grade: usize,
    len_cap: usize,
) -> Result<u64> {
    Ok(graded_dimensions_bruteforce(alg, grade, len_cap)?
        .iter()
        .flatten()
        .sum())
}

/// Number of perfect matchings of a dimer graph, as the permanent of the
/// multiplicity biadjacency matrix via subset dynamic programming. Parallel
/// edges count as distinct matchings, matching the enumerator's convention.
pub fn matching_count_bruteforce(g: &DimerGraph) -> Result<u64> {
    let nw = g.white.len();
    if nw != g.black.len() {
        return Ok(0);
    }
    if nw > 20 {
        input_err!("matching count by permanent is limited to 20 vertices per colour");
    }
    let widx: BTreeMap<&str, usize> =
        g.white.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
    let bidx: BTreeMap<&str, usize> =
        g.black.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
    let mut mult = vec![vec![0u64; nw]; nw];
    for e in &g.edges {
        let (Some(&w), Some(&b)) = (widx.get(e.white.as_str()), bidx.get(e.black.as_str()))
        else {
            input_err!("edge {} has an endpoint outside the colour classes", e.id);
        };
        mult[b][w] += 1;
    }
    // dp over sets of used whites; row = number of blacks already matched
    let mut dp = vec![0u64; 1usize << nw];
    dp[0] = 1;
    for mask in 1..(1usize << nw) {
        let row = (mask.count_ones() - 1) as usize;
        let mut acc = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if mult[row][w] != 0 {
                acc += mult[row][w] * dp[mask & !(1usize << w)];
            }
        }
        dp[mask] = acc;
    }
    Ok(dp[(1usize << nw) - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimer::{fixtures, perfect_matchings};
    use crate::mckay::{degree_zero_part, invariant_monomial_count, mckay_algebra, McKayInput};
    use crate::normalform::{complete_groebner, GradedCount, DEFAULT_CAP};
    use crate::pathalg::Quiver;

    #[test]
    fn three_routes_agree_on_weighted_cyclic_algebra() {
        let input = McKayInput::new(3, vec![1, 1, 1]).unwrap();
        let alg = mckay_algebra(&input).unwrap();
        let gb = complete_groebner(&alg, DEFAULT_CAP);
        for ell in 0..=1 {
            let brute = graded_dimensions_bruteforce(&alg, ell, 8).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let lattice = invariant_monomial_count(&input, i, j, ell).unwrap();
                    assert_eq!(brute[i][j], lattice, "pair ({i}, {j}) at grade {ell}");
                    assert_eq!(
                        gb.graded_dimension(Some((i, j)), ell),
                        GradedCount::Count(lattice)
                    );
                }
            }
        }
    }

    #[test]
    fn bruteforce_matches_groebner_on_truncated_algebra() {
        let input = McKayInput::new(3, vec![1, 1, 1]).unwrap();
        let alg = degree_zero_part(&mckay_algebra(&input).unwrap()).unwrap();
        let gb = complete_groebner(&alg, DEFAULT_CAP);
        let mut total = 0;
        for (ell, want) in [(0usize, 3u64), (1, 6), (2, 6), (3, 0)] {
            let brute = total_graded_dimension_bruteforce(&alg, ell, 8).unwrap();
            assert_eq!(brute, want);
            assert_eq!(gb.graded_dimension(None, ell), GradedCount::Count(want));
            total += brute;
        }
        assert_eq!(total, 15);
    }

    #[test]
    fn enumeration_refuses_degree_zero_cycles() {
        let mut b = Quiver::builder();
        b.vertex("*");
        b.arrow("x", "*", "*", 0);
        let q = b.build().unwrap();
        let err = paths_of_grade(&q, 0, 16).unwrap_err();
        assert!(err.message().contains("length cap"), "{err}");
    }

    #[test]
    fn permanent_agrees_with_matching_enumeration() {
        for (g, want) in [
            (fixtures::square_grid(), 8),
            (fixtures::chorded_hexagon_dimer(), 12),
            (fixtures::hexagonal(), 3),
            (fixtures::digon_torus(), 4),
        ] {
            let listed = perfect_matchings(&g).unwrap().len() as u64;
            let counted = matching_count_bruteforce(&g).unwrap();
            assert_eq!(listed, counted);
            assert_eq!(counted, want);
        }
    }

    #[test]
    fn unbalanced_graphs_have_no_matchings() {
        let mut g = fixtures::square_grid();
        g.white.push("W3".to_string());
        assert_eq!(matching_count_bruteforce(&g).unwrap(), 0);
    }
}
