//! Representation theory of finite-dimensional presented graded algebras.
//!
//! Everything here works with a [`FiniteAlgebraModel`]: a presented algebra
//! whose Groebner basis is complete and whose normal words form a finite
//! basis. On top of that model the module provides finite-dimensional left
//! modules as quiver representations, minimal projective resolutions, Ext
//! dimensions and global dimension, Cartan and Coxeter invariants, the
//! bimodule `Ext^n(D(Λ), Λ)` with its tensor powers (the generalized
//! preprojective grading), and iterated inverse Serre functors computed
//! through injective coresolutions.
//!
//! Conventions, fixed once for the whole module:
//! * modules are **left** modules; the component of `M` at vertex `i` is
//!   `e_i M`, so an arrow `a: s -> t` acts as a linear map from the
//!   component at `s` to the component at `t`;
//! * the indecomposable projective `P_i` is `Λ e_i`; its component at
//!   vertex `j` is spanned by the normal words from `i` to `j`;
//! * the indecomposable injective `I_i` is the dual of `e_i Λ`; its
//!   component at `j` has dimension the number of normal words from `j`
//!   to `i`;
//! * a path acts by applying its first letter first, matching the product
//!   convention of [`crate::pathalg`] where `p * q` applies `q` first.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::input_err;
use crate::linalg::Mat;
use crate::normalform::{complete_groebner, FiniteDim, GroebnerBasis, DEFAULT_CAP};
use crate::pathalg::{Coef, Path, PathElement, PresentedGradedAlgebra, Quiver};
use crate::polyq::{charpoly, Poly};
use crate::Result;
use num_traits::{One, Zero};

// ---------------------------------------------------------------------------
// The finite-dimensional working model.
// ---------------------------------------------------------------------------

/// A presented algebra together with a completed Groebner basis and its full
/// finite basis of normal words, indexed for linear-algebra work.
#[derive(Debug, Clone)]
pub struct FiniteAlgebraModel {
    gb: GroebnerBasis,
    basis: Vec<Path>,
    index: BTreeMap<Path, usize>,
    /// `pairs[i][j]` lists, as ascending indices into `basis`, the normal
    /// words from vertex `i` to vertex `j`.
    pairs: Vec<Vec<Vec<usize>>>,
}

/// Build the working model of `alg`, completing a Groebner basis up to the
/// given cap. Fails when the algebra is infinite-dimensional or when finite
/// dimensionality cannot be certified within the cap.
pub fn build_model(alg: &PresentedGradedAlgebra, cap: usize) -> Result<FiniteAlgebraModel> {
    let gb = complete_groebner(alg, cap);
    match gb.finite_dimensionality() {
        FiniteDim::Yes(_) => {}
        FiniteDim::No => {
            input_err!("algebra is infinite-dimensional; it has no finite working model")
        }
        FiniteDim::Unknown { cap } => {
            input_err!("finite dimensionality undecided at completion cap {cap}; raise the cap")
        }
    }
    let basis = gb.all_normal_words()?;
    let nv = gb.algebra().quiver().n_vertices();
    let mut index = BTreeMap::new();
    let mut pairs = vec![vec![Vec::new(); nv]; nv];
    for (k, w) in basis.iter().enumerate() {
        index.insert(w.clone(), k);
        pairs[w.start()][w.end()].push(k);
    }
    let model = FiniteAlgebraModel { gb, basis, index, pairs };
    model.spot_check_multiplication()?;
    Ok(model)
}

impl FiniteAlgebraModel {
    pub fn algebra(&self) -> &PresentedGradedAlgebra {
        self.gb.algebra()
    }

    pub fn quiver(&self) -> &Quiver {
        self.algebra().quiver()
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    /// Total dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    /// Normal words from vertex `i` to vertex `j`, as indices into `basis`.
    pub fn pair_words(&self, i: usize, j: usize) -> &[usize] {
        &self.pairs[i][j]
    }

    fn n_vertices(&self) -> usize {
        self.quiver().n_vertices()
    }

    fn n_arrows(&self) -> usize {
        self.quiver().n_arrows()
    }

    fn nf(&self, x: &PathElement) -> PathElement {
        self.gb.normal_form(x)
    }

    fn arrow_elt(&self, a: usize) -> PathElement {
        PathElement::from_path(self.quiver().arrow_path(a))
    }

    fn basis_elt(&self, k: usize) -> PathElement {
        PathElement::from_path(self.basis[k].clone())
    }

    /// Indices of all normal words starting at `i`, ascending.
    fn starting(&self, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.pairs[i].iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// Largest grading degree of a basis word.
    fn max_word_grade(&self) -> usize {
        let q = self.quiver();
        self.basis.iter().map(|w| q.path_degree(w)).max().unwrap_or(0)
    }

    /// Dense coordinates of a normal-form element over a sorted list of basis
    /// indices. Panics if the element is not supported on that list.
    fn coords_in(&self, list: &[usize], x: &PathElement) -> Vec<Coef> {
        let mut out = vec![Coef::zero(); list.len()];
        for (p, c) in x.terms() {
            let k = *self.index.get(p).expect("normal form is supported on the basis");
            let pos = list
                .binary_search(&k)
                .expect("element supported on the requested component");
            out[pos] = c.clone();
        }
        out
    }

    /// Cheap guard run at construction: products of basis words stay inside
    /// the basis and associate.
    fn spot_check_multiplication(&self) -> Result<()> {
        let m = self.basis.len().min(4);
        for x in 0..m {
            for y in 0..m {
                let xy = self.nf(&self.basis_elt(x).multiply(&self.basis_elt(y)));
                for (p, _) in xy.terms() {
                    if !self.index.contains_key(p) {
                        input_err!("normal form escaped the basis; Groebner data inconsistent");
                    }
                }
                for z in 0..m {
                    let zc = self.basis_elt(z);
                    let l = self.nf(&xy.multiply(&zc));
                    let yz = self.nf(&self.basis_elt(y).multiply(&zc));
                    let r = self.nf(&self.basis_elt(x).multiply(&yz));
                    if !l.sub(&r).is_zero() {
                        input_err!("basis multiplication fails associativity spot check");
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of left multiplication by arrow `a` from the span of the basis
    /// words `src_list` (which end at the source of `a`) to `tgt_list`.
    fn left_mult_mat(&self, a: usize, src_list: &[usize], tgt_list: &[usize]) -> Mat {
        let ae = self.arrow_elt(a);
        let mut m = Mat::zeros(tgt_list.len(), src_list.len());
        for (col, &k) in src_list.iter().enumerate() {
            let img = self.nf(&ae.multiply(&self.basis_elt(k)));
            for (row, c) in self.coords_in(tgt_list, &img).into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(row, col, c);
                }
            }
        }
        m
    }

    /// Matrix of right multiplication by arrow `a` from the span of
    /// `src_list` (words starting at the target of `a`) to `tgt_list`.
    fn right_mult_mat(&self, a: usize, src_list: &[usize], tgt_list: &[usize]) -> Mat {
        let ae = self.arrow_elt(a);
        let mut m = Mat::zeros(tgt_list.len(), src_list.len());
        for (col, &k) in src_list.iter().enumerate() {
            let img = self.nf(&self.basis_elt(k).multiply(&ae));
            for (row, c) in self.coords_in(tgt_list, &img).into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(row, col, c);
                }
            }
        }
        m
    }
}

// ---------------------------------------------------------------------------
// Representations.
// ---------------------------------------------------------------------------

/// A finite-dimensional left module, given concretely: a space dimension per
/// vertex, and for each arrow a matrix from the source-vertex component to
/// the target-vertex component.
#[derive(Debug, Clone)]
pub struct Representation {
    pub spaces: Vec<usize>,
    pub act: Vec<Mat>,
}

impl Representation {
    pub fn total_dim(&self) -> u64 {
        self.spaces.iter().map(|&d| d as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.spaces.iter().all(|&d| d == 0)
    }
}

/// Matrix by which the path `p` acts on `rep`: the first letter of the word
/// is applied first.
fn path_matrix(rep: &Representation, p: &Path) -> Mat {
    let mut m = Mat::identity(rep.spaces[p.start()]);
    for i in 0..p.len() {
        m = rep.act[p.arrow_at(i)].mul(&m);
    }
    m
}

/// Matrix by which an element supported on paths `from -> to` acts on `rep`.
fn elt_matrix(rep: &Representation, x: &PathElement, from: usize, to: usize) -> Mat {
    let mut m = Mat::zeros(rep.spaces[to], rep.spaces[from]);
    for (p, c) in x.terms() {
        debug_assert!(p.start() == from && p.end() == to);
        m = m.add(&path_matrix(rep, p).scale(c));
    }
    m
}

impl FiniteAlgebraModel {
    /// The simple module concentrated at vertex `v`.
    pub fn simple(&self, v: usize) -> Representation {
        let q = self.quiver();
        let spaces: Vec<usize> = (0..q.n_vertices()).map(|j| usize::from(j == v)).collect();
        let act = (0..q.n_arrows())
            .map(|a| {
                let ar = q.arrow(a);
                Mat::zeros(spaces[ar.target], spaces[ar.source])
            })
            .collect();
        Representation { spaces, act }
    }

    /// The zero module.
    fn zero_rep(&self) -> Representation {
        Representation {
            spaces: vec![0; self.n_vertices()],
            act: (0..self.n_arrows()).map(|_| Mat::zeros(0, 0)).collect(),
        }
    }

    /// The indecomposable projective `P_v = Λ e_v`, on the basis of normal
    /// words starting at `v`.
    pub fn projective(&self, v: usize) -> Representation {
        self.proj_rep(&[v])
    }

    /// The left regular module `Λ = ⊕_v P_v`, summands in vertex order.
    pub fn regular(&self) -> Representation {
        let all: Vec<usize> = (0..self.n_vertices()).collect();
        self.proj_rep(&all)
    }

    /// The left module `D(Λ)`, dual of the right regular module. Its
    /// component at vertex `i` is dual to the span of the normal words
    /// starting at `i`, in ascending basis order.
    pub fn dual_module(&self) -> Representation {
        let q = self.quiver();
        let nv = q.n_vertices();
        let lists: Vec<Vec<usize>> = (0..nv).map(|i| self.starting(i)).collect();
        let spaces: Vec<usize> = lists.iter().map(Vec::len).collect();
        let act = (0..q.n_arrows())
            .map(|a| {
                let ar = q.arrow(a);
                // (a f)(x) = f(x a): transpose of right multiplication by a.
                self.right_mult_mat(a, &lists[ar.target], &lists[ar.source]).transpose()
            })
            .collect();
        Representation { spaces, act }
    }

    /// Check that `rep` is a well-formed module: matrix shapes match the
    /// quiver and every relation acts as zero.
    pub fn validate(&self, rep: &Representation) -> Result<()> {
        let q = self.quiver();
        if rep.spaces.len() != q.n_vertices() || rep.act.len() != q.n_arrows() {
            input_err!("representation has wrong vertex or arrow count");
        }
        for a in 0..q.n_arrows() {
            let ar = q.arrow(a);
            if rep.act[a].rows() != rep.spaces[ar.target]
                || rep.act[a].cols() != rep.spaces[ar.source]
            {
                input_err!(
                    "matrix for arrow {} has shape {}x{}, expected {}x{}",
                    ar.name,
                    rep.act[a].rows(),
                    rep.act[a].cols(),
                    rep.spaces[ar.target],
                    rep.spaces[ar.source]
                );
            }
        }
        for rel in self.algebra().relations() {
            let (from, to) = rel
                .support_endpoints()
                .expect("validated relations have uniform endpoints");
            if !elt_matrix(rep, rel, from, to).is_zero() {
                input_err!("a relation does not act as zero on the representation");
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Maps between direct sums of projectives.
// ---------------------------------------------------------------------------

/// A map `⊕_c P_{src[c]} -> ⊕_r P_{tgt[r]}` between finite direct sums of
/// indecomposable projectives, presented by algebra elements: the entry in
/// row `r`, column `c` is a normal-form element supported on paths from
/// `tgt[r]` to `src[c]`, recording the image of the `c`-th generator inside
/// the `r`-th summand.
#[derive(Debug, Clone)]
pub struct ProjectiveMap {
    src: Vec<usize>,
    tgt: Vec<usize>,
    entries: Vec<Vec<PathElement>>,
}

impl ProjectiveMap {
    pub fn source_summands(&self) -> &[usize] {
        &self.src
    }

    pub fn target_summands(&self) -> &[usize] {
        &self.tgt
    }

    pub fn entry(&self, r: usize, c: usize) -> &PathElement {
        &self.entries[r][c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(PathElement::is_zero)
    }

    /// True when no entry has a trivial-path component, i.e. the map lands
    /// in the radical of its target.
    pub fn is_radical(&self, q: &Quiver) -> bool {
        for (r, row) in self.entries.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                if self.src[c] == self.tgt[r]
                    && !x.coef(&q.trivial_path(self.src[c])).is_zero()
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Per-vertex layout of the direct sum `⊕_c P_{summands[c]}`: at each vertex
/// the summand blocks appear in order, block `c` spanned by the normal words
/// from `summands[c]` to that vertex, in ascending basis order.
struct SumLayout {
    dims: Vec<usize>,
    /// `offsets[j][c]` is the offset of block `c` at vertex `j`.
    offsets: Vec<Vec<usize>>,
}

impl FiniteAlgebraModel {
    fn sum_layout(&self, summands: &[usize]) -> SumLayout {
        let nv = self.n_vertices();
        let mut dims = vec![0usize; nv];
        let mut offsets = vec![Vec::with_capacity(summands.len()); nv];
        for &v in summands {
            for (j, d) in dims.iter_mut().enumerate() {
                offsets[j].push(*d);
                *d += self.pairs[v][j].len();
            }
        }
        SumLayout { dims, offsets }
    }

    /// The direct sum `⊕_c P_{summands[c]}` as a representation, in the
    /// layout of [`Self::sum_layout`].
    fn proj_rep(&self, summands: &[usize]) -> Representation {
        let q = self.quiver();
        let lay = self.sum_layout(summands);
        let mut act = Vec::with_capacity(q.n_arrows());
        for a in 0..q.n_arrows() {
            let ar = q.arrow(a);
            let (s, t) = (ar.source, ar.target);
            let mut m = Mat::zeros(lay.dims[t], lay.dims[s]);
            for (c, &v) in summands.iter().enumerate() {
                let block = self.left_mult_mat(a, &self.pairs[v][s], &self.pairs[v][t]);
                for r in 0..block.rows() {
                    for k in 0..block.cols() {
                        if !block.at(r, k).is_zero() {
                            m.set(
                                lay.offsets[t][c] + r,
                                lay.offsets[s][c] + k,
                                block.at(r, k).clone(),
                            );
                        }
                    }
                }
            }
            act.push(m);
        }
        Representation { spaces: lay.dims, act }
    }

    /// Concrete matrices of a projective-sum map, one per vertex, in the
    /// layouts of source and target.
    fn concrete(&self, f: &ProjectiveMap) -> Vec<Mat> {
        let ls = self.sum_layout(&f.src);
        let lt = self.sum_layout(&f.tgt);
        let nv = self.n_vertices();
        let mut out = Vec::with_capacity(nv);
        for j in 0..nv {
            let mut m = Mat::zeros(lt.dims[j], ls.dims[j]);
            for (c, &v) in f.src.iter().enumerate() {
                for (wi, &k) in self.pairs[v][j].iter().enumerate() {
                    let w = self.basis_elt(k);
                    let col = ls.offsets[j][c] + wi;
                    for (r, &u) in f.tgt.iter().enumerate() {
                        let x = &f.entries[r][c];
                        if x.is_zero() {
                            continue;
                        }
                        let img = self.nf(&w.multiply(x));
                        for (row, cf) in
                            self.coords_in(&self.pairs[u][j], &img).into_iter().enumerate()
                        {
                            if !cf.is_zero() {
                                m.set(lt.offsets[j][r] + row, col, cf);
                            }
                        }
                    }
                }
            }
            out.push(m);
        }
        out
    }

    /// Composition `then ∘ first`. Entries compose in reversed order: the
    /// entry of the first map ends up leftmost in each product, which puts
    /// its word last in application order.
    pub fn compose_maps(&self, first: &ProjectiveMap, then: &ProjectiveMap) -> ProjectiveMap {
        debug_assert_eq!(first.tgt, then.src);
        let mut entries = Vec::with_capacity(then.tgt.len());
        for r in 0..then.tgt.len() {
            let mut row = Vec::with_capacity(first.src.len());
            for c in 0..first.src.len() {
                let mut acc = PathElement::zero();
                for b in 0..first.tgt.len() {
                    acc = acc.add(&first.entries[b][c].multiply(&then.entries[r][b]));
                }
                row.push(self.nf(&acc));
            }
            entries.push(row);
        }
        ProjectiveMap { src: first.src.clone(), tgt: then.tgt.clone(), entries }
    }

    /// Build the map `⊕_c P_{src[c]} -> ⊕_r P_{tgt[r]}` whose `c`-th
    /// generator has the given concrete image (a vector in the component of
    /// the target sum at the vertex `src[c]`).
    fn map_from_images(
        &self,
        tgt: &[usize],
        src: &[usize],
        images: &[Vec<Coef>],
    ) -> ProjectiveMap {
        let lay = self.sum_layout(tgt);
        let mut entries = vec![vec![PathElement::zero(); src.len()]; tgt.len()];
        for (c, &v) in src.iter().enumerate() {
            for (r, &u) in tgt.iter().enumerate() {
                let mut x = PathElement::zero();
                for (wi, &k) in self.pairs[u][v].iter().enumerate() {
                    let cf = images[c][lay.offsets[v][r] + wi].clone();
                    if !cf.is_zero() {
                        x.add_term(self.basis[k].clone(), cf);
                    }
                }
                entries[r][c] = x;
            }
        }
        ProjectiveMap { src: src.to_vec(), tgt: tgt.to_vec(), entries }
    }

    /// Matrix of `Hom(f, N): Hom(⊕P_{tgt}, N) -> Hom(⊕P_{src}, N)` in the
    /// identifications `Hom(P_v, N) = N_v`, blocks ordered by summand.
    fn hom_matrix(&self, f: &ProjectiveMap, n: &Representation) -> Mat {
        let row_off: Vec<usize> = f
            .src
            .iter()
            .scan(0, |acc, &v| {
                let o = *acc;
                *acc += n.spaces[v];
                Some(o)
            })
            .collect();
        let col_off: Vec<usize> = f
            .tgt
            .iter()
            .scan(0, |acc, &v| {
                let o = *acc;
                *acc += n.spaces[v];
                Some(o)
            })
            .collect();
        let rows: usize = f.src.iter().map(|&v| n.spaces[v]).sum();
        let cols: usize = f.tgt.iter().map(|&v| n.spaces[v]).sum();
        let mut m = Mat::zeros(rows, cols);
        for (c, &vs) in f.src.iter().enumerate() {
            for (r, &vt) in f.tgt.iter().enumerate() {
                let x = &f.entries[r][c];
                if x.is_zero() {
                    continue;
                }
                let block = elt_matrix(n, x, vt, vs);
                for i in 0..block.rows() {
                    for j in 0..block.cols() {
                        if !block.at(i, j).is_zero() {
                            m.set(row_off[c] + i, col_off[r] + j, block.at(i, j).clone());
                        }
                    }
                }
            }
        }
        m
    }
}

// ---------------------------------------------------------------------------
// Minimal projective resolutions, Ext, global dimension.
// ---------------------------------------------------------------------------

/// A minimal projective resolution `... -> T_1 -> T_0 -> M -> 0`, with each
/// term recorded as a list of summand vertices.
#[derive(Debug, Clone)]
pub struct ProjResolution {
    terms: Vec<Vec<usize>>,
    /// `diffs[k]: T_{k+1} -> T_k`.
    diffs: Vec<ProjectiveMap>,
    /// Images in `M` of the generators of `T_0`, one coordinate vector in
    /// the component of `M` at the summand's vertex.
    aug: Vec<Vec<Coef>>,
    complete: bool,
}

impl ProjResolution {
    pub fn terms(&self) -> &[Vec<usize>] {
        &self.terms
    }

    pub fn diffs(&self) -> &[ProjectiveMap] {
        &self.diffs
    }

    /// Largest term index built. Equals the projective dimension when the
    /// resolution is complete.
    pub fn length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// True when every differential lands in the radical, which is the
    /// minimality criterion for a resolution by projective covers.
    pub fn is_minimal(&self, q: &Quiver) -> bool {
        self.diffs.iter().all(|d| d.is_radical(q))
    }
}

impl FiniteAlgebraModel {
    /// Minimal projective cover data for `m`: summand vertices (ordered by
    /// vertex, with multiplicity) and the image in `m` of each generator.
    /// The images span a complement of the radical of `m`.
    fn cover(&self, m: &Representation) -> (Vec<usize>, Vec<Vec<Coef>>) {
        let q = self.quiver();
        let mut summands = Vec::new();
        let mut gens: Vec<Vec<Coef>> = Vec::new();
        for i in 0..q.n_vertices() {
            let d = m.spaces[i];
            if d == 0 {
                continue;
            }
            let incoming: Vec<usize> = q.arrows_into(i).to_vec();
            let rad_cols: usize = incoming.iter().map(|&a| m.act[a].cols()).sum();
            let mut mat = Mat::zeros(d, rad_cols + d);
            let mut off = 0;
            for &a in &incoming {
                let f = &m.act[a];
                for r in 0..f.rows() {
                    for c in 0..f.cols() {
                        if !f.at(r, c).is_zero() {
                            mat.set(r, off + c, f.at(r, c).clone());
                        }
                    }
                }
                off += f.cols();
            }
            for k in 0..d {
                mat.set(k, rad_cols + k, Coef::one());
            }
            let (_, pivots) = mat.rref();
            for p in pivots.into_iter().filter(|&p| p >= rad_cols) {
                summands.push(i);
                let mut g = vec![Coef::zero(); d];
                g[p - rad_cols] = Coef::one();
                gens.push(g);
            }
        }
        (summands, gens)
    }

    /// Concrete matrices (one per vertex) of the cover map
    /// `⊕_c P_{summands[c]} -> m` sending the `c`-th generator to `gens[c]`.
    fn cover_matrices(
        &self,
        summands: &[usize],
        gens: &[Vec<Coef>],
        m: &Representation,
    ) -> Vec<Mat> {
        let lay = self.sum_layout(summands);
        let nv = self.n_vertices();
        let mut out = Vec::with_capacity(nv);
        for j in 0..nv {
            let mut mat = Mat::zeros(m.spaces[j], lay.dims[j]);
            for (c, &v) in summands.iter().enumerate() {
                for (wi, &k) in self.pairs[v][j].iter().enumerate() {
                    let p = &self.basis[k];
                    let mut img = gens[c].clone();
                    for t in 0..p.len() {
                        img = m.act[p.arrow_at(t)].apply(&img);
                    }
                    for (row, val) in img.into_iter().enumerate() {
                        if !val.is_zero() {
                            mat.set(row, lay.offsets[j][c] + wi, val);
                        }
                    }
                }
            }
            out.push(mat);
        }
        out
    }

    /// Kernel of a vertex-wise linear map out of `rep`: per-vertex inclusion
    /// matrices (columns form a kernel basis) plus the subrepresentation they
    /// carry.
    fn kernel_subrep(&self, rep: &Representation, f: &[Mat]) -> (Vec<Mat>, Representation) {
        let q = self.quiver();
        let incl: Vec<Mat> = (0..q.n_vertices())
            .map(|j| mat_from_columns(rep.spaces[j], &f[j].kernel_basis()))
            .collect();
        let spaces: Vec<usize> = incl.iter().map(Mat::cols).collect();
        let act: Vec<Mat> = (0..q.n_arrows())
            .map(|a| {
                let ar = q.arrow(a);
                let rhs = rep.act[a].mul(&incl[ar.source]);
                incl[ar.target]
                    .solve_mat(&rhs)
                    .expect("arrow action preserves the kernel")
            })
            .collect();
        (incl, Representation { spaces, act })
    }

    /// Minimal projective resolution of `m` by iterated projective covers,
    /// built out to term index `cap` at most. The result is flagged complete
    /// when the last kernel vanishes.
    pub fn projective_resolution(&self, m: &Representation, cap: usize) -> ProjResolution {
        let t0 = std::time::Instant::now();
        let (s0, g0) = self.cover(m);
        eprintln!("[prof]   cover0 {:?} ({} summands)", t0.elapsed(), s0.len());
        let t0 = std::time::Instant::now();
        let aug_mats = self.cover_matrices(&s0, &g0, m);
        eprintln!("[prof]   cover_matrices0 {:?}", t0.elapsed());
        let t0 = std::time::Instant::now();
        let (mut incl, mut cur) = self.kernel_subrep(&self.proj_rep(&s0), &aug_mats);
        eprintln!("[prof]   kernel0 {:?} (dim {})", t0.elapsed(), cur.total_dim());
        let mut terms = vec![s0];
        let mut diffs: Vec<ProjectiveMap> = Vec::new();
        while !cur.is_zero() && terms.len() <= cap {
            let t0 = std::time::Instant::now();
            let (sk, gk) = self.cover(&cur);
            eprintln!("[prof]   cover {:?} ({} summands)", t0.elapsed(), sk.len());
            let t0 = std::time::Instant::now();
            let ambient: Vec<Vec<Coef>> = sk
                .iter()
                .zip(&gk)
                .map(|(&v, g)| incl[v].apply(g))
                .collect();
            let d = self.map_from_images(terms.last().unwrap(), &sk, &ambient);
            eprintln!("[prof]   map_from_images {:?}", t0.elapsed());
            let t0 = std::time::Instant::now();
            let cov = self.cover_matrices(&sk, &gk, &cur);
            eprintln!("[prof]   cover_matrices {:?}", t0.elapsed());
            let t0 = std::time::Instant::now();
            let (ninc, ncur) = self.kernel_subrep(&self.proj_rep(&sk), &cov);
            eprintln!("[prof]   kernel {:?} (dim {})", t0.elapsed(), ncur.total_dim());
            terms.push(sk);
            diffs.push(d);
            incl = ninc;
            cur = ncur;
        }
        ProjResolution { terms, diffs, aug: g0, complete: cur.is_zero() }
    }

    /// Dimension of `Ext^k(m, n)`, computed from a minimal projective
    /// resolution of `m`.
    pub fn ext_dim(&self, m: &Representation, n: &Representation, k: usize) -> usize {
        let res = self.projective_resolution(m, k + 1);
        let t = res.terms.len();
        if k >= t {
            debug_assert!(res.complete);
            return 0;
        }
        let hom_dim = |j: usize| -> usize { res.terms[j].iter().map(|&v| n.spaces[v]).sum() };
        let cocycles = if k + 1 < t {
            hom_dim(k) - self.hom_matrix(&res.diffs[k], n).rank()
        } else {
            hom_dim(k)
        };
        let coboundaries = if k == 0 {
            0
        } else {
            self.hom_matrix(&res.diffs[k - 1], n).rank()
        };
        cocycles - coboundaries
    }
}

/// Global dimension, either exact or bounded below when the probe cap was
/// exhausted first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GlobalDim {
    Finite(usize),
    AtLeast(usize),
}

impl FiniteAlgebraModel {
    /// Global dimension as the maximum projective dimension of the simples,
    /// resolving each out to term index `cap`.
    pub fn global_dimension(&self, cap: usize) -> GlobalDim {
        let mut best = 0;
        for v in 0..self.n_vertices() {
            let res = self.projective_resolution(&self.simple(v), cap);
            if !res.complete {
                return GlobalDim::AtLeast(cap + 1);
            }
            best = best.max(res.length());
        }
        GlobalDim::Finite(best)
    }
}

// ---------------------------------------------------------------------------
// Cartan matrix and Coxeter polynomial.
// ---------------------------------------------------------------------------

impl FiniteAlgebraModel {
    /// The Cartan matrix: `C[i][j]` counts the normal words from `j` to `i`,
    /// i.e. the dimension of `e_i Λ e_j`. Column `j` is the dimension vector
    /// of the projective `P_j`; row `i` is the dimension vector of the
    /// injective `I_i`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let nv = self.n_vertices();
        (0..nv)
            .map(|i| (0..nv).map(|j| self.pairs[j][i].len() as i64).collect())
            .collect()
    }

    /// Characteristic polynomial of the Coxeter matrix `-C^{-T} C`. Fails
    /// when the Cartan matrix is singular.
    pub fn coxeter_polynomial(&self) -> Result<Poly> {
        let nv = self.n_vertices();
        let cart = self.cartan_matrix();
        let mut c = Mat::zeros(nv, nv);
        for i in 0..nv {
            for j in 0..nv {
                c.set(i, j, Coef::from_integer(cart[i][j].into()));
            }
        }
        let Some(cti) = c.transpose().inverse() else {
            input_err!("Cartan matrix is singular; the Coxeter matrix is undefined")
        };
        let phi = cti.mul(&c).neg();
        Ok(charpoly(&phi.to_rows()))
    }
}

// ---------------------------------------------------------------------------
// Bimodules and tensor products over the algebra.
// ---------------------------------------------------------------------------

/// A finite-dimensional bimodule, given by components `dims[i][j]` (`i` the
/// left vertex, `j` the right vertex) together with the action of each
/// arrow on both sides: `left[a][j]` maps the `(source(a), j)` component to
/// `(target(a), j)`, and `right[a][i]` maps `(i, target(a))` to
/// `(i, source(a))` (right multiplication shortens from the path's start).
#[derive(Debug, Clone)]
pub struct Bimodule {
    pub dims: Vec<Vec<usize>>,
    pub left: Vec<Vec<Mat>>,
    pub right: Vec<Vec<Mat>>,
}

impl Bimodule {
    pub fn total_dim(&self) -> u64 {
        self.dims.iter().flatten().map(|&d| d as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().flatten().all(|&d| d == 0)
    }

    /// Check that every left action matrix commutes with every right action
    /// matrix, the compatibility making the two actions a bimodule.
    pub fn actions_commute(&self, q: &Quiver) -> bool {
        for a in 0..q.n_arrows() {
            let (sa, ta) = (q.arrow(a).source, q.arrow(a).target);
            for b in 0..q.n_arrows() {
                let (sb, tb) = (q.arrow(b).source, q.arrow(b).target);
                // both routes (sa, tb) -> (ta, sb)
                let via_left = self.right[b][ta].mul(&self.left[a][tb]);
                let via_right = self.left[a][sb].mul(&self.right[b][sa]);
                if !via_left.sub(&via_right).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Canonical-representative arithmetic in a quotient of `k^n` by a spanned
/// subspace: reduce against the reduced row echelon form of the span, read
/// coordinates off the non-pivot positions.
struct CosetReducer {
    n: usize,
    rows: Vec<Vec<Coef>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl CosetReducer {
    fn new(n: usize, spanning: &[Vec<Coef>]) -> CosetReducer {
        let mut m = Mat::zeros(spanning.len(), n);
        for (i, v) in spanning.iter().enumerate() {
            for (j, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    m.set(i, j, c.clone());
                }
            }
        }
        let (r, pivots) = m.rref();
        let rows: Vec<Vec<Coef>> = (0..pivots.len())
            .map(|i| (0..n).map(|j| r.at(i, j).clone()).collect())
            .collect();
        let free: Vec<usize> = (0..n).filter(|k| !pivots.contains(k)).collect();
        CosetReducer { n, rows, pivots, free }
    }

    fn quotient_dim(&self) -> usize {
        self.free.len()
    }

    /// Canonical coset representative: pivot coordinates eliminated.
    fn reduce(&self, v: &[Coef]) -> Vec<Coef> {
        debug_assert_eq!(v.len(), self.n);
        let mut out = v.to_vec();
        for (ri, &p) in self.pivots.iter().enumerate() {
            if !out[p].is_zero() {
                let f = out[p].clone();
                for k in p..self.n {
                    let v = &out[k] - &(&f * &self.rows[ri][k]);
                    out[k] = v;
                }
            }
        }
        out
    }

    /// Coordinates of the class of `v` over the free positions.
    fn coords(&self, v: &[Coef]) -> Vec<Coef> {
        let r = self.reduce(v);
        self.free.iter().map(|&k| r[k].clone()).collect()
    }
}

/// Only the identity block structure of a Kronecker product is needed here:
/// `a ⊗ I_id` in the index convention `(p, q) -> p * id + q`.
fn kron_with_identity_right(a: &Mat, id: usize) -> Mat {
    let mut m = Mat::zeros(a.rows() * id, a.cols() * id);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if !a.at(r, c).is_zero() {
                for s in 0..id {
                    m.set(r * id + s, c * id + s, a.at(r, c).clone());
                }
            }
        }
    }
    m
}

/// `I_id ⊗ b` in the index convention `(p, q) -> p * rows(b) + q` on rows.
fn kron_with_identity_left(id: usize, b: &Mat) -> Mat {
    let mut m = Mat::zeros(id * b.rows(), id * b.cols());
    for k in 0..id {
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                if !b.at(r, c).is_zero() {
                    m.set(k * b.rows() + r, k * b.cols() + c, b.at(r, c).clone());
                }
            }
        }
    }
    m
}

fn mat_from_columns(rows: usize, cols: &[Vec<Coef>]) -> Mat {
    let mut m = Mat::zeros(rows, cols.len());
    for (j, v) in cols.iter().enumerate() {
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                m.set(i, j, c.clone());
            }
        }
    }
    m
}

fn unit_vec(n: usize, k: usize) -> Vec<Coef> {
    let mut v = vec![Coef::zero(); n];
    v[k] = Coef::one();
    v
}

impl FiniteAlgebraModel {
    /// The algebra itself as a bimodule: component `(i, j)` is `e_i Λ e_j`,
    /// on the basis of normal words from `j` to `i`.
    pub fn regular_bimodule(&self) -> Bimodule {
        let q = self.quiver();
        let nv = q.n_vertices();
        let dims: Vec<Vec<usize>> =
            (0..nv).map(|i| (0..nv).map(|j| self.pairs[j][i].len()).collect()).collect();
        let mut left = Vec::with_capacity(q.n_arrows());
        let mut right = Vec::with_capacity(q.n_arrows());
        for a in 0..q.n_arrows() {
            let ar = q.arrow(a);
            left.push(
                (0..nv)
                    .map(|j| {
                        self.left_mult_mat(a, &self.pairs[j][ar.source], &self.pairs[j][ar.target])
                    })
                    .collect(),
            );
            right.push(
                (0..nv)
                    .map(|i| {
                        self.right_mult_mat(a, &self.pairs[ar.target][i], &self.pairs[ar.source][i])
                    })
                    .collect(),
            );
        }
        Bimodule { dims, left, right }
    }

    /// The zero bimodule with well-shaped (empty) action matrices.
    fn zero_bimodule(&self) -> Bimodule {
        let nv = self.n_vertices();
        let na = self.n_arrows();
        Bimodule {
            dims: vec![vec![0; nv]; nv],
            left: vec![vec![Mat::zeros(0, 0); nv]; na],
            right: vec![vec![Mat::zeros(0, 0); nv]; na],
        }
    }

    /// Tensor product `x ⊗_Λ y` of bimodules: the cokernel, inside the
    /// vertex-wise tensor product over the semisimple subalgebra, of the
    /// relations `(x·a) ⊗ y - x ⊗ (a·y)` for all arrows `a`.
    pub fn tensor_bimodules(&self, x: &Bimodule, y: &Bimodule) -> Bimodule {
        let q = self.quiver();
        let nv = q.n_vertices();
        let na = q.n_arrows();

        struct PairData {
            offsets: Vec<usize>,
            dim: usize,
            red: CosetReducer,
        }

        let mut data: Vec<Vec<PairData>> = Vec::with_capacity(nv);
        for i in 0..nv {
            let mut row = Vec::with_capacity(nv);
            for j in 0..nv {
                let mut offsets = Vec::with_capacity(nv);
                let mut dim = 0usize;
                for m in 0..nv {
                    offsets.push(dim);
                    dim += x.dims[i][m] * y.dims[m][j];
                }
                let mut rels: Vec<Vec<Coef>> = Vec::new();
                for a in 0..na {
                    let ar = q.arrow(a);
                    let (sa, ta) = (ar.source, ar.target);
                    let xr = &x.right[a][i]; // (i, ta) -> (i, sa)
                    let yl = &y.left[a][j]; // (sa, j) -> (ta, j)
                    for p in 0..x.dims[i][ta] {
                        for qv in 0..y.dims[sa][j] {
                            let mut rel = vec![Coef::zero(); dim];
                            for rx in 0..x.dims[i][sa] {
                                if !xr.at(rx, p).is_zero() {
                                    rel[offsets[sa] + rx * y.dims[sa][j] + qv] =
                                        xr.at(rx, p).clone();
                                }
                            }
                            for ry in 0..y.dims[ta][j] {
                                if !yl.at(ry, qv).is_zero() {
                                    let pos = offsets[ta] + p * y.dims[ta][j] + ry;
                                    let v = &rel[pos] - yl.at(ry, qv);
                                    rel[pos] = v;
                                }
                            }
                            if rel.iter().any(|c| !c.is_zero()) {
                                rels.push(rel);
                            }
                        }
                    }
                }
                let red = CosetReducer::new(dim, &rels);
                row.push(PairData { offsets, dim, red });
            }
            data.push(row);
        }

        let dims: Vec<Vec<usize>> =
            (0..nv).map(|i| (0..nv).map(|j| data[i][j].red.quotient_dim()).collect()).collect();

        // Ambient action of an arrow on one leg, then reduction to quotient
        // coordinates. A unit vector at a free position is its own canonical
        // representative, so quotient basis vectors lift to ambient units.
        let ambient_left = |a: usize, j: usize| -> Mat {
            let ar = q.arrow(a);
            let src = &data[ar.source][j];
            let tgt = &data[ar.target][j];
            let mut m = Mat::zeros(tgt.dim, src.dim);
            for midv in 0..nv {
                let block = kron_with_identity_right(&x.left[a][midv], y.dims[midv][j]);
                for r in 0..block.rows() {
                    for c in 0..block.cols() {
                        if !block.at(r, c).is_zero() {
                            m.set(
                                tgt.offsets[midv] + r,
                                src.offsets[midv] + c,
                                block.at(r, c).clone(),
                            );
                        }
                    }
                }
            }
            m
        };
        let ambient_right = |a: usize, i: usize| -> Mat {
            let ar = q.arrow(a);
            let src = &data[i][ar.target];
            let tgt = &data[i][ar.source];
            let mut m = Mat::zeros(tgt.dim, src.dim);
            for midv in 0..nv {
                let block = kron_with_identity_left(x.dims[i][midv], &y.right[a][midv]);
                for r in 0..block.rows() {
                    for c in 0..block.cols() {
                        if !block.at(r, c).is_zero() {
                            m.set(
                                tgt.offsets[midv] + r,
                                src.offsets[midv] + c,
                                block.at(r, c).clone(),
                            );
                        }
                    }
                }
            }
            m
        };

        let induced = |amb: &Mat, src: &PairData, tgt: &PairData| -> Mat {
            let mut m = Mat::zeros(tgt.red.quotient_dim(), src.red.quotient_dim());
            for (h, &fc) in src.red.free.iter().enumerate() {
                let img = amb.apply(&unit_vec(src.dim, fc));
                for (r, c) in tgt.red.coords(&img).into_iter().enumerate() {
                    if !c.is_zero() {
                        m.set(r, h, c);
                    }
                }
            }
            m
        };

        let mut left = Vec::with_capacity(na);
        let mut right = Vec::with_capacity(na);
        for a in 0..na {
            let ar = q.arrow(a);
            left.push(
                (0..nv)
                    .map(|j| {
                        induced(&ambient_left(a, j), &data[ar.source][j], &data[ar.target][j])
                    })
                    .collect::<Vec<Mat>>(),
            );
            right.push(
                (0..nv)
                    .map(|i| {
                        induced(&ambient_right(a, i), &data[i][ar.target], &data[i][ar.source])
                    })
                    .collect::<Vec<Mat>>(),
            );
        }
        Bimodule { dims, left, right }
    }
}

// ---------------------------------------------------------------------------
// The bimodule Ext^n(D(Λ), Λ).
// ---------------------------------------------------------------------------

/// A subquotient `ker(out) / im(inc)` of a concrete vector space, with a
/// kernel basis and coset reduction inside kernel coordinates.
struct Subquotient {
    ker: Mat,
    red: CosetReducer,
}

impl Subquotient {
    fn new(out: &Mat, inc: &Mat) -> Subquotient {
        let ker = mat_from_columns(out.cols(), &out.kernel_basis());
        let in_ker = ker
            .solve_mat(inc)
            .expect("incoming image lies in the kernel (the composite vanishes)");
        let cols: Vec<Vec<Coef>> = (0..in_ker.cols())
            .map(|j| (0..in_ker.rows()).map(|i| in_ker.at(i, j).clone()).collect())
            .collect();
        let red = CosetReducer::new(ker.cols(), &cols);
        Subquotient { ker, red }
    }

    fn dim(&self) -> usize {
        self.red.quotient_dim()
    }

    /// Ambient representative of the `h`-th basis vector of the subquotient.
    fn rep(&self, h: usize) -> Vec<Coef> {
        let k = self.red.free[h];
        (0..self.ker.rows()).map(|i| self.ker.at(i, k).clone()).collect()
    }

    /// Subquotient coordinates of an ambient vector lying in the kernel.
    fn coords_of_ambient(&self, v: &[Coef]) -> Vec<Coef> {
        let z = self.ker.solve(v).expect("vector lies in the kernel");
        self.red.coords(&z)
    }

    /// Matrix induced on subquotients by an ambient matrix that maps
    /// `ker(out)` into the target kernel and `im(inc)` into the target image.
    fn induced(&self, tgt: &Subquotient, ambient: &Mat) -> Mat {
        let mut m = Mat::zeros(tgt.dim(), self.dim());
        for h in 0..self.dim() {
            let img = ambient.apply(&self.rep(h));
            for (r, c) in tgt.coords_of_ambient(&img).into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(r, h, c);
                }
            }
        }
        m
    }
}

impl FiniteAlgebraModel {
    /// Dimension of the cochain space `Hom(⊕_c P_{summands[c]}, Λ)` in right
    /// grade `j` (values supported on words starting at `j`).
    fn cochain_dim(&self, summands: &[usize], j: usize) -> usize {
        summands.iter().map(|&v| self.pairs[j][v].len()).sum()
    }

    /// Matrix of precomposition with `f` on `Hom(-, Λ)` restricted to right
    /// grade `j`: the value of a hom on the generator of a summand at vertex
    /// `v` is recorded over the normal words from `j` to `v`.
    fn hom_matrix_graded(&self, f: &ProjectiveMap, j: usize) -> Mat {
        let rows = self.cochain_dim(&f.src, j);
        let cols = self.cochain_dim(&f.tgt, j);
        let mut m = Mat::zeros(rows, cols);
        let mut col_off = 0;
        for (r, &vt) in f.tgt.iter().enumerate() {
            for (wi, &k) in self.pairs[j][vt].iter().enumerate() {
                let w = self.basis_elt(k);
                let mut row_off = 0;
                for (c, &vs) in f.src.iter().enumerate() {
                    let x = &f.entries[r][c];
                    if !x.is_zero() {
                        let img = self.nf(&x.multiply(&w));
                        for (row, cf) in
                            self.coords_in(&self.pairs[j][vs], &img).into_iter().enumerate()
                        {
                            if !cf.is_zero() {
                                m.add_to(row_off + row, col_off + wi, &cf);
                            }
                        }
                    }
                    row_off += self.pairs[j][vs].len();
                }
            }
            col_off += self.pairs[j][vt].len();
        }
        m
    }

    /// Matrix of right multiplication by arrow `b` on cochains, from right
    /// grade `target(b)` to right grade `source(b)`, block-diagonal over the
    /// summands.
    fn right_mult_cochain(&self, b: usize, summands: &[usize]) -> Mat {
        let ar = self.quiver().arrow(b);
        let (sb, tb) = (ar.source, ar.target);
        let rows = self.cochain_dim(summands, sb);
        let cols = self.cochain_dim(summands, tb);
        let mut m = Mat::zeros(rows, cols);
        let mut ro = 0;
        let mut co = 0;
        for &v in summands {
            let block = self.right_mult_mat(b, &self.pairs[tb][v], &self.pairs[sb][v]);
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    if !block.at(r, c).is_zero() {
                        m.set(ro + r, co + c, block.at(r, c).clone());
                    }
                }
            }
            ro += self.pairs[sb][v].len();
            co += self.pairs[tb][v].len();
        }
        m
    }

    /// Per-vertex matrices of right multiplication by the idempotent `e_i`
    /// on `D(Λ)`, in the bases used by [`Self::dual_module`].
    fn dual_right_idempotent(&self, i: usize) -> Vec<Mat> {
        (0..self.n_vertices())
            .map(|v| {
                let list = self.starting(v);
                let mut m = Mat::zeros(list.len(), list.len());
                for (k, &w) in list.iter().enumerate() {
                    if self.basis[w].end() == i {
                        m.set(k, k, Coef::one());
                    }
                }
                m
            })
            .collect()
    }

    /// Per-vertex matrices of right multiplication by arrow `a` on `D(Λ)`:
    /// `(f·a)(x) = f(a·x)`, so the column of the dual of `p` collects the
    /// coefficients of `p` in the products `a·x`.
    fn dual_right_arrow(&self, a: usize) -> Vec<Mat> {
        let sa = self.quiver().arrow(a).source;
        let ae = self.arrow_elt(a);
        (0..self.n_vertices())
            .map(|v| {
                let list = self.starting(v);
                let mut m = Mat::zeros(list.len(), list.len());
                for (xi, &w) in list.iter().enumerate() {
                    if self.basis[w].end() != sa {
                        continue;
                    }
                    let img = self.nf(&ae.multiply(&self.basis_elt(w)));
                    for (p, cf) in img.terms() {
                        let g = self.index[p];
                        let col = list.binary_search(&g).expect("product stays in the component");
                        m.set(xi, col, cf.clone());
                    }
                }
                m
            })
            .collect()
    }

    /// Lift a module endomorphism `f` of the resolved module to a chain
    /// self-map of the resolution, returned at term index `upto`. Each level
    /// is found by solving through the previous differential; exactness of
    /// the resolution guarantees a solution.
    fn lift_chain_self_map(
        &self,
        res: &ProjResolution,
        m: &Representation,
        f: &[Mat],
        upto: usize,
    ) -> ProjectiveMap {
        let aug = self.cover_matrices(&res.terms[0], &res.aug, m);
        let images: Vec<Vec<Coef>> = res.terms[0]
            .iter()
            .zip(&res.aug)
            .map(|(&v, g)| {
                aug[v]
                    .solve(&f[v].apply(g))
                    .expect("endomorphism image lifts through the cover")
            })
            .collect();
        let mut u = self.map_from_images(&res.terms[0], &res.terms[0], &images);
        for k in 1..=upto {
            let d = &res.diffs[k - 1]; // T_k -> T_{k-1}
            let dmats = self.concrete(d);
            let umats = self.concrete(&u);
            let lay = self.sum_layout(&res.terms[k]);
            let images: Vec<Vec<Coef>> = res.terms[k]
                .iter()
                .enumerate()
                .map(|(c, &v)| {
                    let gen_col = self.gen_position(&lay, &res.terms[k], c, v);
                    let dcol: Vec<Coef> =
                        (0..dmats[v].rows()).map(|r| dmats[v].at(r, gen_col).clone()).collect();
                    let rhs = umats[v].apply(&dcol);
                    dmats[v].solve(&rhs).expect("chain lift exists by exactness")
                })
                .collect();
            u = self.map_from_images(&res.terms[k], &res.terms[k], &images);
        }
        u
    }

    /// Column index of the generator of summand `c` (at vertex `v`) inside
    /// the concrete vertex-`v` component of its sum.
    fn gen_position(&self, lay: &SumLayout, summands: &[usize], c: usize, v: usize) -> usize {
        debug_assert_eq!(summands[c], v);
        let g = self.index[&self.quiver().trivial_path(v)];
        lay.offsets[v][c] + self.pairs[v][v].binary_search(&g).expect("trivial word present")
    }

    /// The bimodule `Ext^n(D(Λ), Λ)` for `n >= 1`.
    ///
    /// The right structure acts on the values in `Λ`; the left structure is
    /// induced by lifting the right action on `D(Λ)` to chain self-maps of
    /// its minimal projective resolution. Lifts of a fixed endomorphism are
    /// unique up to homotopy, so the induced maps on cohomology are
    /// well-defined, and the lifted idempotents cut the cohomology into its
    /// left vertex components.
    pub fn ext_bimodule(&self, n: usize) -> Result<Bimodule> {
        if n == 0 {
            input_err!("ext_bimodule expects a positive cohomological degree");
        }
        let q = self.quiver();
        let nv = q.n_vertices();
        let na = q.n_arrows();
        let dual = self.dual_module();
        let res = self.projective_resolution(&dual, n + 1);
        if res.terms.len() <= n {
            debug_assert!(res.complete);
            return Ok(self.zero_bimodule());
        }

        // Cohomology of Hom(T_*, Λ) at index n, one right grade at a time.
        let subq: Vec<Subquotient> = (0..nv)
            .map(|j| {
                let dim_n = self.cochain_dim(&res.terms[n], j);
                let out = if res.diffs.len() > n {
                    self.hom_matrix_graded(&res.diffs[n], j)
                } else {
                    Mat::zeros(0, dim_n)
                };
                let inc = self.hom_matrix_graded(&res.diffs[n - 1], j);
                Subquotient::new(&out, &inc)
            })
            .collect();

        let lift_e: Vec<ProjectiveMap> = (0..nv)
            .map(|i| self.lift_chain_self_map(&res, &dual, &self.dual_right_idempotent(i), n))
            .collect();
        let lift_a: Vec<ProjectiveMap> = (0..na)
            .map(|a| self.lift_chain_self_map(&res, &dual, &self.dual_right_arrow(a), n))
            .collect();

        // Adapted bases: per right grade j, a basis of the cohomology grouped
        // by the images of the lifted idempotents.
        let mut dims = vec![vec![0usize; nv]; nv];
        let mut bases: Vec<Mat> = Vec::with_capacity(nv);
        let mut bases_inv: Vec<Mat> = Vec::with_capacity(nv);
        let mut offsets = vec![vec![0usize; nv]; nv]; // offsets[j][i]
        for j in 0..nv {
            let h = subq[j].dim();
            let mut cols: Vec<Vec<Coef>> = Vec::with_capacity(h);
            for i in 0..nv {
                let pi = subq[j].induced(&subq[j], &self.hom_matrix_graded(&lift_e[i], j));
                let (_, pivots) = pi.rref();
                offsets[j][i] = cols.len();
                dims[i][j] = pivots.len();
                for p in pivots {
                    cols.push((0..h).map(|r| pi.at(r, p).clone()).collect());
                }
            }
            debug_assert_eq!(cols.len(), h, "idempotent images decompose the cohomology");
            let v = mat_from_columns(h, &cols);
            let vi = v.inverse().expect("adapted basis is invertible");
            bases.push(v);
            bases_inv.push(vi);
        }

        let block = |m: &Mat, ro: usize, rn: usize, co: usize, cn: usize| -> Mat {
            let mut out = Mat::zeros(rn, cn);
            for r in 0..rn {
                for c in 0..cn {
                    if !m.at(ro + r, co + c).is_zero() {
                        out.set(r, c, m.at(ro + r, co + c).clone());
                    }
                }
            }
            out
        };

        let mut left: Vec<Vec<Mat>> = Vec::with_capacity(na);
        let mut right: Vec<Vec<Mat>> = Vec::with_capacity(na);
        for a in 0..na {
            let ar = q.arrow(a);
            let (sa, ta) = (ar.source, ar.target);
            let mut per_j = Vec::with_capacity(nv);
            for j in 0..nv {
                let la = subq[j].induced(&subq[j], &self.hom_matrix_graded(&lift_a[a], j));
                let adapted = bases_inv[j].mul(&la).mul(&bases[j]);
                per_j.push(block(
                    &adapted,
                    offsets[j][ta],
                    dims[ta][j],
                    offsets[j][sa],
                    dims[sa][j],
                ));
            }
            left.push(per_j);

            let amb = self.right_mult_cochain(a, &res.terms[n]);
            let rh = subq[ta].induced(&subq[sa], &amb);
            let adapted = bases_inv[sa].mul(&rh).mul(&bases[ta]);
            let mut per_i = Vec::with_capacity(nv);
            for i in 0..nv {
                per_i.push(block(
                    &adapted,
                    offsets[sa][i],
                    dims[i][sa],
                    offsets[ta][i],
                    dims[i][ta],
                ));
            }
            right.push(per_i);
        }

        Ok(Bimodule { dims, left, right })
    }
}

// ---------------------------------------------------------------------------
// Preprojective grading: tensor powers of Ext^n(D(Λ), Λ).
// ---------------------------------------------------------------------------

/// Graded dimensions of the tensor algebra of `E = Ext^n(D(Λ), Λ)` over the
/// algebra: grade `ℓ` is `Λ` for `ℓ = 0` and `E^{⊗ℓ}` beyond.
#[derive(Debug, Clone, Serialize)]
pub struct PreprojReport {
    pub n: usize,
    /// Total dimension of each grade, `0..=max_ell`.
    pub totals: Vec<u64>,
    /// Per-grade component dimensions `[i][j]`.
    pub pair_dims: Vec<Vec<Vec<usize>>>,
}

impl FiniteAlgebraModel {
    pub fn preprojective_graded_dims(&self, n: usize, max_ell: usize) -> Result<PreprojReport> {
        let e = self.ext_bimodule(n)?;
        let mut cur = self.regular_bimodule();
        let mut totals = vec![cur.total_dim()];
        let mut pair_dims = vec![cur.dims.clone()];
        for _ in 1..=max_ell {
            cur = self.tensor_bimodules(&cur, &e);
            totals.push(cur.total_dim());
            pair_dims.push(cur.dims.clone());
        }
        Ok(PreprojReport { n, totals, pair_dims })
    }
}

// ---------------------------------------------------------------------------
// Complexes of projectives: minimalization and homology.
// ---------------------------------------------------------------------------

/// A bounded complex of direct sums of projectives. `terms[k]` sits in
/// cohomological degree `offset + k`, and `diffs[k]` maps `terms[k]` to
/// `terms[k + 1]`.
#[derive(Debug, Clone)]
struct ProjComplex {
    offset: i64,
    terms: Vec<Vec<usize>>,
    diffs: Vec<ProjectiveMap>,
}

impl FiniteAlgebraModel {
    /// Remove contractible two-term pieces until every differential entry
    /// lies in the radical (Gaussian elimination for complexes). Homology is
    /// unchanged. Empty boundary terms are trimmed afterwards.
    fn minimalize(&self, cx: &mut ProjComplex) {
        let q = self.quiver();
        loop {
            let mut found = None;
            'scan: for k in 0..cx.diffs.len() {
                let d = &cx.diffs[k];
                for r in 0..d.tgt.len() {
                    for c in 0..d.src.len() {
                        if d.src[c] == d.tgt[r]
                            && !d.entries[r][c].coef(&q.trivial_path(d.src[c])).is_zero()
                        {
                            found = Some((k, r, c));
                            break 'scan;
                        }
                    }
                }
            }
            let Some((k, r, c)) = found else { break };
            self.cancel_pair(cx, k, r, c);
        }
        while cx.terms.len() > 1 && cx.terms[0].is_empty() {
            cx.terms.remove(0);
            cx.diffs.remove(0);
            cx.offset += 1;
        }
        while cx.terms.len() > 1 && cx.terms.last().unwrap().is_empty() {
            cx.terms.pop();
            cx.diffs.pop();
        }
    }

    /// Cancel the invertible entry at row `r`, column `c` of `diffs[k]`,
    /// correcting the remaining entries and shortening the two terms. The
    /// adjacent differentials only lose the corresponding row and column.
    fn cancel_pair(&self, cx: &mut ProjComplex, k: usize, r: usize, c: usize) {
        let d = cx.diffs[k].clone();
        let v = d.src[c];
        let yinv = self.corner_inverse(v, &d.entries[r][c]);
        let mut entries = Vec::with_capacity(d.tgt.len() - 1);
        for r2 in 0..d.tgt.len() {
            if r2 == r {
                continue;
            }
            let mut row = Vec::with_capacity(d.src.len() - 1);
            for c2 in 0..d.src.len() {
                if c2 == c {
                    continue;
                }
                let corr = d.entries[r][c2].multiply(&yinv).multiply(&d.entries[r2][c]);
                row.push(self.nf(&d.entries[r2][c2].sub(&corr)));
            }
            entries.push(row);
        }
        if k > 0 {
            let prev = &mut cx.diffs[k - 1];
            prev.tgt.remove(c);
            prev.entries.remove(c);
        }
        if k + 1 < cx.diffs.len() {
            let next = &mut cx.diffs[k + 1];
            next.src.remove(r);
            for row in &mut next.entries {
                row.remove(r);
            }
        }
        cx.terms[k].remove(c);
        cx.terms[k + 1].remove(r);
        cx.diffs[k] = ProjectiveMap {
            src: cx.terms[k].clone(),
            tgt: cx.terms[k + 1].clone(),
            entries,
        };
    }

    /// Inverse of an element of the corner algebra `e_v Λ e_v` whose
    /// trivial-path coefficient is nonzero, via the geometric series of its
    /// (nilpotent) radical part.
    fn corner_inverse(&self, v: usize, y: &PathElement) -> PathElement {
        let triv = self.quiver().trivial_path(v);
        let e = PathElement::from_path(triv.clone());
        let t = y.coef(&triv);
        assert!(!t.is_zero(), "corner element has no invertible part");
        let tinv = t.recip();
        let s = self.nf(&y.sub(&e.scale(&t))).scale(&-tinv.clone());
        let mut inv = e;
        let mut pow = s.clone();
        let mut guard = 0usize;
        while !pow.is_zero() {
            inv = inv.add(&pow);
            pow = self.nf(&pow.multiply(&s));
            guard += 1;
            assert!(guard <= self.dim() + 1, "radical part failed to be nilpotent");
        }
        inv.scale(&tinv)
    }

    /// Vertex-wise homology dimensions of the complex at every degree.
    fn complex_homology(&self, cx: &ProjComplex) -> Vec<(i64, Vec<usize>)> {
        let nv = self.n_vertices();
        let mats: Vec<Vec<Mat>> = cx.diffs.iter().map(|d| self.concrete(d)).collect();
        let mut out = Vec::with_capacity(cx.terms.len());
        for k in 0..cx.terms.len() {
            let lay = self.sum_layout(&cx.terms[k]);
            let mut dims = Vec::with_capacity(nv);
            for j in 0..nv {
                let rank_out = if k < mats.len() { mats[k][j].rank() } else { 0 };
                let rank_in = if k > 0 { mats[k - 1][j].rank() } else { 0 };
                dims.push(lay.dims[j] - rank_out - rank_in);
            }
            out.push((cx.offset + k as i64, dims));
        }
        out
    }

    /// The degree-zero homology of the complex as a representation.
    fn complex_degree_zero(&self, cx: &ProjComplex) -> Representation {
        if cx.offset > 0 || -cx.offset >= cx.terms.len() as i64 {
            return self.zero_rep();
        }
        let k0 = (-cx.offset) as usize;
        let rep = self.proj_rep(&cx.terms[k0]);
        let q = self.quiver();
        let nv = q.n_vertices();
        let dout: Vec<Mat> = if k0 < cx.diffs.len() {
            self.concrete(&cx.diffs[k0])
        } else {
            (0..nv).map(|j| Mat::zeros(0, rep.spaces[j])).collect()
        };
        let din: Vec<Mat> = if k0 > 0 {
            self.concrete(&cx.diffs[k0 - 1])
        } else {
            (0..nv).map(|j| Mat::zeros(rep.spaces[j], 0)).collect()
        };
        let sq: Vec<Subquotient> =
            (0..nv).map(|j| Subquotient::new(&dout[j], &din[j])).collect();
        let spaces: Vec<usize> = sq.iter().map(Subquotient::dim).collect();
        let act: Vec<Mat> = (0..q.n_arrows())
            .map(|a| {
                let ar = q.arrow(a);
                sq[ar.source].induced(&sq[ar.target], &rep.act[a])
            })
            .collect();
        Representation { spaces, act }
    }
}

// ---------------------------------------------------------------------------
// Iterated inverse Serre functor.
// ---------------------------------------------------------------------------

/// Homology of one inverse Serre iterate at one cohomological degree.
#[derive(Debug, Clone, Serialize)]
pub struct SerreHomology {
    pub degree: i64,
    pub dims: Vec<usize>,
    pub total: u64,
}

/// One iterate: all nonzero homology degrees, plus degree zero always.
#[derive(Debug, Clone, Serialize)]
pub struct SerreStep {
    pub ell: usize,
    pub homology: Vec<SerreHomology>,
}

/// Iterated application of the inverse Serre functor to the regular module.
#[derive(Debug, Clone, Serialize)]
pub struct SerreReport {
    pub n: usize,
    pub steps: Vec<SerreStep>,
    /// True when every computed iterate was concentrated in degree zero.
    pub concentrated: bool,
}

impl FiniteAlgebraModel {
    /// The inverse Serre image of `m`, shifted by `n`: take a minimal
    /// injective coresolution (computed as a projective resolution of the
    /// dual module over the opposite algebra, dualized back), relabel each
    /// `I_v` as `P_v` (the inverse Nakayama functor on injectives), place
    /// the start of the coresolution in degree `-n`, and minimalize.
    fn serre_inverse_complex(
        &self,
        op: &FiniteAlgebraModel,
        m: &Representation,
        n: usize,
    ) -> Result<ProjComplex> {
        let q = self.quiver();
        let dual_rep = Representation {
            spaces: m.spaces.clone(),
            act: (0..q.n_arrows()).map(|a| m.act[a].transpose()).collect(),
        };
        let res = op.projective_resolution(&dual_rep, n + 1);
        if !res.complete {
            input_err!("injective coresolution exceeded the certified global dimension");
        }
        let terms = res.terms.clone();
        let mut diffs = Vec::with_capacity(res.diffs.len());
        for k in 0..res.diffs.len() {
            let d = &res.diffs[k];
            // dualizing swaps source and target and reverses every word
            let mut entries = Vec::with_capacity(d.src.len());
            for r in 0..d.src.len() {
                let mut row = Vec::with_capacity(d.tgt.len());
                for c in 0..d.tgt.len() {
                    row.push(reverse_elt(&d.entries[c][r]));
                }
                entries.push(row);
            }
            diffs.push(ProjectiveMap {
                src: d.tgt.clone(),
                tgt: d.src.clone(),
                entries,
            });
        }
        Ok(ProjComplex { offset: -(n as i64), terms, diffs })
    }

    /// Iterate the inverse Serre functor `ℓ = 1..=max_ell` times starting
    /// from the regular module, recording the homology of every iterate.
    /// Iteration continues only while each iterate is concentrated in degree
    /// zero (otherwise later iterates would need the full derived category).
    /// Requires the global dimension to be certifiably at most `n`.
    pub fn serre_inverse_iterates(&self, n: usize, max_ell: usize) -> Result<SerreReport> {
        match self.global_dimension(n + 1) {
            GlobalDim::Finite(g) if g <= n => {}
            GlobalDim::Finite(g) => {
                input_err!("global dimension {g} exceeds the requested parameter n = {n}")
            }
            GlobalDim::AtLeast(m) => {
                input_err!(
                    "global dimension is at least {m}, exceeding the requested parameter n = {n}"
                )
            }
        }
        let cap = DEFAULT_CAP.max(2 * self.max_word_grade() + 2);
        let op = build_model(&self.algebra().opposite(), cap)?;

        let mut cur = self.regular();
        let mut steps = vec![SerreStep {
            ell: 0,
            homology: vec![SerreHomology {
                degree: 0,
                dims: cur.spaces.clone(),
                total: cur.total_dim(),
            }],
        }];
        let mut concentrated = true;
        for ell in 1..=max_ell {
            let t0 = std::time::Instant::now();
            let mut cx = self.serre_inverse_complex(&op, &cur, n)?;
            eprintln!("[prof] ell={ell} coresolution {:?}", t0.elapsed());
            let t0 = std::time::Instant::now();
            self.minimalize(&mut cx);
            eprintln!("[prof] ell={ell} minimalize {:?}", t0.elapsed());
            let t0 = std::time::Instant::now();
            let hom = self.complex_homology(&cx);
            eprintln!("[prof] ell={ell} homology {:?}", t0.elapsed());
            let mut entries: Vec<SerreHomology> = hom
                .iter()
                .filter(|(deg, dims)| *deg == 0 || dims.iter().any(|&d| d > 0))
                .map(|(deg, dims)| SerreHomology {
                    degree: *deg,
                    dims: dims.clone(),
                    total: dims.iter().map(|&d| d as u64).sum(),
                })
                .collect();
            if !entries.iter().any(|e| e.degree == 0) {
                entries.push(SerreHomology {
                    degree: 0,
                    dims: vec![0; self.n_vertices()],
                    total: 0,
                });
                entries.sort_by_key(|e| e.degree);
            }
            let clean = entries.iter().all(|e| e.degree == 0 || e.total == 0);
            steps.push(SerreStep { ell, homology: entries });
            if !clean {
                concentrated = false;
                break;
            }
            cur = self.complex_degree_zero(&cx);
        }
        Ok(SerreReport { n, steps, concentrated })
    }
}

/// Reverse every word of an element, translating between an algebra and its
/// opposite.
fn reverse_elt(x: &PathElement) -> PathElement {
    let mut out = PathElement::zero();
    for (p, c) in x.terms() {
        out.add_term(p.reversed(), c.clone());
    }
    out
}

// ---------------------------------------------------------------------------
