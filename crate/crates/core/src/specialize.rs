//! Geometric embeddings between (extended) lattice data, the vanishing-h¹
//! condition, and lineage verification.
//!
//! An embedding `σ : Λ → Λ₀` is stored as the exact matrix acting on dual
//! coordinates: column `j` holds the pairings of `σ(e_j^∨)` with `ℰ₀ ∪ {h₀}`
//! (source `h^∨` last, target `h₀^∨` last).

mod lineage;

use std::ops::ControlFlow;

use num_traits::Zero;
use rayon::prelude::*;

use crate::classify::{in_positive_cone, LatticeData};
use crate::error::{domain, Error, Result};
use crate::lattice::{in_root_monoid, rat_int, Basis, QVector, Sublattice};
use crate::linalg::{self, Matrix};
use crate::roots::Component;
use crate::{Rat, RatMatrix};

pub use lineage::{admits_class, family, family_members, lineage_family, minimal_members};

/// Lattice data with a marked ι-pair `S = {v⁺, v⁻}` of lift classes.
#[derive(Clone, Debug)]
pub struct ExtendedLatticeData {
    pub base: LatticeData,
    /// `v⁺` in dual coordinates; `v⁻ = ι v⁺`.
    pub v_plus: Vec<i64>,
}

impl ExtendedLatticeData {
    pub fn new(base: LatticeData, v_plus: Vec<i64>) -> Result<Self> {
        if v_plus.len() != base.mu() + 1 {
            return domain(format!("expected {} coordinates, got {}", base.mu() + 1, v_plus.len()));
        }
        if !base.contains_dual(&v_plus) {
            return domain("marked class is not in Λ");
        }
        if base.iota_dual(&v_plus) == v_plus {
            return domain("marked class is ι-invariant, so S is not a pair");
        }
        Ok(ExtendedLatticeData { base, v_plus })
    }

    pub fn v_minus(&self) -> Vec<i64> {
        self.base.iota_dual(&self.v_plus)
    }

    pub fn marked(&self) -> [Vec<i64>; 2] {
        [self.v_plus.clone(), self.v_minus()]
    }

    /// Order of `v⁺` in `G`.
    pub fn class_order(&self) -> usize {
        self.base.class_order_dual(&self.v_plus).expect("v⁺ ∈ Λ")
    }

    /// `(v⁺, h)`.
    pub fn degree(&self) -> i64 {
        self.v_plus[self.base.mu()]
    }

    pub fn mu(&self) -> usize {
        self.base.mu()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EmbeddingFlags {
    pub isometric: bool,
    pub h_preserving: bool,
    pub monoid_condition: bool,
    pub primitive: bool,
    /// `None` when no marked pairs were supplied.
    pub marked_class_condition: Option<bool>,
    pub vanishing_h1: Option<bool>,
}

impl EmbeddingFlags {
    pub fn base_valid(&self) -> bool {
        self.isometric && self.h_preserving && self.monoid_condition && self.primitive
    }

    /// All base flags plus both extended flags.
    pub fn certified(&self) -> bool {
        self.base_valid() && self.marked_class_condition == Some(true) && self.vanishing_h1 == Some(true)
    }
}

#[derive(Clone, Debug)]
pub struct GeometricEmbedding {
    pub source: LatticeData,
    pub target: LatticeData,
    /// Rows: target dual coordinates; columns: source dual coordinates.
    pub matrix: RatMatrix,
    pub flags: EmbeddingFlags,
}

impl GeometricEmbedding {
    /// Builds the embedding from a matrix and re-checks the base flags.
    pub fn from_matrix(source: LatticeData, target: LatticeData, matrix: RatMatrix) -> Result<Self> {
        let flags = check_embedding(&source, &target, &matrix)?;
        Ok(GeometricEmbedding { source, target, matrix, flags })
    }

    /// Image of a source vector given in dual coordinates.
    pub fn apply(&self, d: &[i64]) -> Vec<Rat> {
        let v: Vec<Rat> = d.iter().map(|&x| rat_int(x)).collect();
        self.matrix.mul_vec(&v)
    }

    /// Image of an integral source vector, when integral.
    pub fn apply_int(&self, d: &[i64]) -> Option<Vec<i64>> {
        self.apply(d).iter().map(to_i64).collect()
    }

    /// `σ(e_i)` for the simple roots, in target primal coordinates over `ℰ₀`.
    pub fn root_images(&self) -> Vec<Vec<Rat>> {
        let src = self.source.sigma();
        let tgt = self.target.sigma();
        (0..self.source.mu())
            .map(|i| {
                let d = src.dual_coords(&src.basis_vector(i)).expect("own vector");
                let img = tgt.vector(self.matrix.mul_vec(&d), Basis::Dual).expect("right length");
                let p = tgt.primal_coords(&img).expect("own vector");
                p[..self.target.mu()].to_vec()
            })
            .collect()
    }

    /// `τ ∘ σ`.
    pub fn compose(&self, after: &GeometricEmbedding) -> Result<GeometricEmbedding> {
        if after.source.ade() != self.target.ade() || after.source.glue().elements != self.target.glue().elements {
            return domain("embeddings are not composable");
        }
        GeometricEmbedding::from_matrix(self.source.clone(), after.target.clone(), after.matrix.mul(&self.matrix))
    }
}

fn to_i64(x: &Rat) -> Option<i64> {
    x.is_integer().then(|| num_traits::ToPrimitive::to_i64(&x.to_integer())).flatten()
}

/// Independent verification of the four base flags of a dual-coordinate matrix.
pub fn check_embedding(source: &LatticeData, target: &LatticeData, m: &RatMatrix) -> Result<EmbeddingFlags> {
    let (n, n0) = (source.mu() + 1, target.mu() + 1);
    if m.rows() != n0 || m.cols() != n {
        return domain(format!("matrix is {}×{}, expected {n0}×{n}", m.rows(), m.cols()));
    }
    let (s, t) = (source.sigma(), target.sigma());
    // (x, y) = xᵀ G⁻¹ y on dual coordinates
    let isometric = m.transpose().mul(t.gram_inverse()).mul(m) == *s.gram_inverse();
    let mut hd = vec![Rat::zero(); n];
    hd[n - 1] = rat_int(2);
    let mut hd0 = vec![Rat::zero(); n0];
    hd0[n0 - 1] = rat_int(2);
    let h_preserving = m.mul_vec(&hd) == hd0;
    let fund: Vec<QVector> = (0..target.mu()).map(|i| t.basis_vector(i)).collect();
    let mut monoid_condition = true;
    for i in 0..n {
        let d = s.dual_coords(&s.basis_vector(i))?;
        let img = t.to_basis(&t.vector(m.mul_vec(&d), Basis::Dual)?, Basis::Primal)?;
        if i < source.mu() {
            let ok = img.coords[n0 - 1].is_zero() && {
                let mut v = img.clone();
                v.coords.truncate(n0 - 1);
                let f: Vec<QVector> = fund
                    .iter()
                    .map(|q| {
                        let mut q = q.clone();
                        q.coords.truncate(n0 - 1);
                        q
                    })
                    .collect();
                in_root_monoid(&f, &v)?
            };
            monoid_condition &= ok;
        }
    }
    let primitive = {
        let mut gens = Vec::new();
        for b in source.lambda().basis() {
            let d = s.dual_coords(&b)?;
            gens.push(t.vector(m.mul_vec(&d), Basis::Dual)?);
        }
        let img = Sublattice::new(t, gens)?;
        img.is_contained_in(target.lambda())? && target.lambda().is_primitive_sub(&img)?
    };
    Ok(EmbeddingFlags { isometric, h_preserving, monoid_condition, primitive, ..Default::default() })
}

/// Search limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Root-assignment nodes visited before giving up.
    pub max_nodes: u64,
    /// Stop after this many embeddings.
    pub max_results: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 20_000_000, max_results: usize::MAX }
    }
}

#[derive(Clone, Debug)]
pub struct EmbeddingSearch {
    pub embeddings: Vec<GeometricEmbedding>,
    /// False when the node budget ran out before the space was exhausted.
    pub complete: bool,
    pub nodes: u64,
}

/// Positive roots of one component in primal coordinates.
pub fn positive_roots(c: Component) -> Vec<Vec<i64>> {
    let g = c.gram();
    let r = c.rank;
    let ip = |x: &[i64], j: usize| -> i64 { (0..r).map(|i| x[i] * g[i][j]).sum() };
    let mut out: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        })
        .collect();
    let mut k = 0;
    while k < out.len() {
        for j in 0..r {
            // simply laced: x + e_j is a root iff (x, e_j) = 1
            if ip(&out[k], j) == 1 {
                let mut y = out[k].clone();
                y[j] += 1;
                if !out.contains(&y) {
                    out.push(y);
                }
            }
        }
        k += 1;
    }
    out.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum()).then_with(|| a.cmp(b)));
    out
}

struct TargetComp {
    offset: usize,
    rank: usize,
    roots: Vec<Vec<i64>>,
    /// Pairings between roots, row-major.
    ip: Vec<i64>,
    /// Roots pairing to `+1` with a given root.
    nb: Vec<Vec<usize>>,
}

struct Search<'a> {
    src: &'a LatticeData,
    tgt: &'a LatticeData,
    comps: Vec<TargetComp>,
    /// Source roots in assignment order, with source component and parent.
    order: Vec<(usize, usize, Option<usize>)>,
    /// Source roots grouped by their source component, in assignment order.
    comp_end: Vec<usize>,
    src_gram: Vec<Vec<i64>>,
    /// Per assigned source root: (target component, root index).
    img: Vec<(usize, usize)>,
    /// Glue elements of the source, with the last assignment position they need.
    glue_checks: Vec<(usize, Vec<i64>)>,
    budget: SearchBudget,
    nodes: u64,
    exhausted: bool,
}

/// Geometric embeddings of `source` into `target`, up to the budget.
pub fn geometric_embeddings(source: &LatticeData, target: &LatticeData, budget: SearchBudget) -> Result<EmbeddingSearch> {
    let mut found = Vec::new();
    let limit = budget.max_results;
    let (complete, nodes) = search_embeddings(source, target, budget, &mut |e| {
        found.push(e);
        if found.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(EmbeddingSearch { embeddings: found, complete, nodes })
}

/// Depth-first search over root images; `visit` sees every base-valid
/// embedding.  Returns `(complete, nodes)`; `complete` is false when the
/// budget ran out or the visitor stopped the search.
pub fn search_embeddings(
    source: &LatticeData,
    target: &LatticeData,
    budget: SearchBudget,
    visit: &mut dyn FnMut(GeometricEmbedding) -> ControlFlow<()>,
) -> Result<(bool, u64)> {
    if source.mu() > target.mu() {
        return Ok((true, 0));
    }
    let mut s = Search::new(source, target, budget);
    let r = s.rec(0, visit)?;
    Ok((r.is_continue() && !s.exhausted, s.nodes))
}

impl<'a> Search<'a> {
    fn new(src: &'a LatticeData, tgt: &'a LatticeData, budget: SearchBudget) -> Self {
        let toffs = tgt.ade().offsets();
        let comps = tgt
            .ade()
            .components()
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let roots = positive_roots(c);
                let g = c.gram();
                let nr = roots.len();
                let mut ip = vec![0i64; nr * nr];
                for a in 0..nr {
                    for b in 0..nr {
                        let mut acc = 0;
                        for i in 0..c.rank {
                            for j in 0..c.rank {
                                acc += roots[a][i] * g[i][j] * roots[b][j];
                            }
                        }
                        ip[a * nr + b] = acc;
                    }
                }
                let nb = (0..nr).map(|a| (0..nr).filter(|&b| ip[a * nr + b] == 1).collect()).collect();
                TargetComp { offset: toffs[k], rank: c.rank, roots, ip, nb }
            })
            .collect();
        // source components by decreasing rank, roots in breadth-first order
        let comps_src = src.ade().components();
        let soffs = src.ade().offsets();
        let mut corder: Vec<usize> = (0..comps_src.len()).collect();
        corder.sort_by_key(|&c| std::cmp::Reverse(comps_src[c].rank));
        let mut order = Vec::new();
        let mut comp_end = Vec::new();
        for &c in &corder {
            let comp = comps_src[c];
            let edges = comp.edges();
            let mut seen = vec![false; comp.rank];
            let mut queue = std::collections::VecDeque::from([(0usize, None)]);
            seen[0] = true;
            while let Some((i, parent)) = queue.pop_front() {
                order.push((c, soffs[c] + i, parent.map(|p: usize| soffs[c] + p)));
                for &(a, b) in &edges {
                    let j = if a == i { b } else if b == i { a } else { continue };
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back((j, Some(i)));
                    }
                }
            }
            comp_end.push(order.len());
        }
        // every glue element is checked once its support is assigned
        let e = src.engine();
        let pos_of_comp: Vec<usize> = {
            let mut p = vec![0; comps_src.len()];
            for (k, &c) in corder.iter().enumerate() {
                p[c] = comp_end[k];
            }
            p
        };
        let mut glue_checks: Vec<(usize, Vec<i64>)> = src
            .glue()
            .elements
            .iter()
            .filter(|&&x| x != 0)
            .map(|&x| {
                let d = e.dual_coords(x);
                let last = (0..comps_src.len())
                    .filter(|&c| d[soffs[c]..soffs[c] + comps_src[c].rank].iter().any(|&v| v != 0))
                    .map(|c| pos_of_comp[c])
                    .max()
                    .unwrap_or(0);
                (last, d)
            })
            .collect();
        glue_checks.sort();
        Search {
            src,
            tgt,
            comps,
            order,
            comp_end,
            src_gram: src.ade().gram_rows(),
            img: Vec::new(),
            glue_checks,
            budget,
            nodes: 0,
            exhausted: false,
        }
    }

    fn rec(&mut self, k: usize, visit: &mut dyn FnMut(GeometricEmbedding) -> ControlFlow<()>) -> Result<ControlFlow<()>> {
        if self.comp_end.contains(&k) || k == 0 {
            if !self.glue_ok(k) {
                return Ok(ControlFlow::Continue(()));
            }
        }
        if k == self.order.len() {
            let m = self.matrix();
            let flags = check_embedding(self.src, self.tgt, &m)?;
            if flags.base_valid() {
                let e = GeometricEmbedding { source: self.src.clone(), target: self.tgt.clone(), matrix: m, flags };
                return Ok(visit(e));
            }
            return Ok(ControlFlow::Continue(()));
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            self.exhausted = true;
            return Ok(ControlFlow::Break(()));
        }
        let (c, i, parent) = self.order[k];
        let cands: Vec<(usize, usize)> = match parent {
            None => (0..self.comps.len())
                .filter(|&t| self.comps[t].rank >= self.src.ade().components()[c].rank)
                .flat_map(|t| (0..self.comps[t].roots.len()).map(move |a| (t, a)))
                .collect(),
            Some(p) => {
                let pk = self.order.iter().position(|o| o.1 == p).expect("parent assigned");
                let (t, a) = self.img[pk];
                self.comps[t].nb[a].iter().map(|&b| (t, b)).collect()
            }
        };
        for (t, a) in cands {
            if !self.consistent(k, i, c, t, a) {
                continue;
            }
            self.img.push((t, a));
            let r = self.rec(k + 1, visit)?;
            self.img.pop();
            if r.is_break() {
                return Ok(r);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Pairings of a candidate image with all earlier images.
    fn consistent(&self, k: usize, i: usize, c: usize, t: usize, a: usize) -> bool {
        let comp = &self.comps[t];
        let nr = comp.roots.len();
        for (j, &(t2, b)) in self.img.iter().enumerate() {
            if t2 != t {
                continue;
            }
            let (c2, i2, _) = self.order[j];
            let want = if c2 == c { self.src_gram[i][i2] } else { 0 };
            if comp.ip[a * nr + b] != want {
                return false;
            }
        }
        let _ = k;
        true
    }

    /// `σ(g) ∈ Λ₀` for the glue elements whose support is fully assigned at `k`.
    fn glue_ok(&self, k: usize) -> bool {
        let e = self.src.engine();
        let s = e.scale();
        let soffs = e.offsets();
        let mu0 = self.tgt.mu();
        let g0 = self.tgt.ade().gram_rows();
        for (last, d) in &self.glue_checks {
            if *last != k {
                continue;
            }
            // σ(g) = Σ y_i σ(e_i) + (d_h / 2) h₀, with y = G⁻¹ d scaled by s
            let mut prim = vec![0i64; mu0];
            for c in 0..e.ncomp() {
                let r = e.locals()[c].rank;
                let inv = e.inverse_scaled(c);
                let part = &d[soffs[c]..soffs[c] + r];
                if part.iter().all(|&x| x == 0) {
                    continue;
                }
                for ii in 0..r {
                    let y: i64 = (0..r).map(|jj| inv[ii * r + jj] * part[jj]).sum();
                    if y == 0 {
                        continue;
                    }
                    let pos = self.order.iter().position(|o| o.1 == soffs[c] + ii).expect("assigned");
                    let (t, a) = self.img[pos];
                    let comp = &self.comps[t];
                    for (q, &x) in comp.roots[a].iter().enumerate() {
                        prim[comp.offset + q] += y * x;
                    }
                }
            }
            let mut dual = vec![0i64; mu0 + 1];
            for j in 0..mu0 {
                let v: i64 = (0..mu0).map(|q| g0[j][q] * prim[q]).sum();
                if v % s != 0 {
                    return false;
                }
                dual[j] = v / s;
            }
            dual[mu0] = d[self.src.mu()];
            if !self.tgt.contains_dual(&dual) {
                return false;
            }
        }
        true
    }

    fn matrix(&self) -> RatMatrix {
        let (n, n0) = (self.src.mu() + 1, self.tgt.mu() + 1);
        let mut r = Matrix::from_fn(n0, n, |_, _| Rat::zero());
        for (k, &(_, i, _)) in self.order.iter().enumerate() {
            let (t, a) = self.img[k];
            let comp = &self.comps[t];
            for (q, &x) in comp.roots[a].iter().enumerate() {
                r.set(comp.offset + q, i, rat_int(x));
            }
        }
        r.set(n0 - 1, n - 1, rat_int(1));
        let g0 = linalg::to_rational(self.tgt.sigma().gram());
        g0.mul(&r).mul(self.src.sigma().gram_inverse())
    }
}

/// Where `σ(v⁺)` and `σ(v⁻)` land: `Some((s, m⁺, m⁻))` when
/// `σ(v⁺) ∈ v₀^{s} + ⟨ℰ₀⟩⁺` and `σ(v⁻) ∈ v₀^{−s} + ⟨ℰ₀⟩⁺`, with `s = 0` for
/// `v₀⁺`; `m^±` are the multiplicities over `ℰ₀`.
pub fn marked_image(
    sigma: &GeometricEmbedding,
    s: &ExtendedLatticeData,
    s0: &ExtendedLatticeData,
) -> Option<(usize, Vec<i64>, Vec<i64>)> {
    let e0 = s0.base.engine();
    let ip = sigma.apply_int(&s.v_plus)?;
    let im = sigma.apply_int(&s.v_minus())?;
    let t = s0.marked();
    for k in 0..2 {
        let dp: Vec<i64> = ip.iter().zip(&t[k]).map(|(a, b)| a - b).collect();
        let dm: Vec<i64> = im.iter().zip(&t[1 - k]).map(|(a, b)| a - b).collect();
        if in_positive_cone(e0, &dp) && in_positive_cone(e0, &dm) {
            return Some((k, primal_parts(s0, &dp), primal_parts(s0, &dm)));
        }
    }
    None
}

/// `σ(S) ⊂ S₀ + ⟨ℰ₀⟩⁺`, with `v⁺` and `v⁻` landing over different members of `S₀`.
pub fn respects_marked_classes(sigma: &GeometricEmbedding, s: &ExtendedLatticeData, s0: &ExtendedLatticeData) -> bool {
    marked_image(sigma, s, s0).is_some()
}

fn primal_parts(l: &ExtendedLatticeData, d: &[i64]) -> Vec<i64> {
    let e = l.base.engine();
    let s = e.scale();
    let offs = e.offsets();
    let mut out = vec![0i64; l.mu()];
    for c in 0..e.ncomp() {
        let r = e.locals()[c].rank;
        let inv = e.inverse_scaled(c);
        for i in 0..r {
            let y: i64 = (0..r).map(|j| inv[i * r + j] * d[offs[c] + j]).sum();
            out[offs[c] + i] = y / s;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    /// `w² = −2`.
    Root,
    /// `w² = 0` and `(w, h) = 3`.
    Elliptic,
}

/// `w = v + Σ m_e e` described by pairings: `v²`, `(v, e)`, `(e, e')`, `(v, h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcurveDecomposition {
    pub v_norm: i64,
    pub v_dot: Vec<i64>,
    /// Row-major pairings among the `e`.
    pub gram: Vec<i64>,
    pub mult: Vec<u64>,
    pub v_dot_h: i64,
}

impl SubcurveDecomposition {
    fn n(&self) -> usize {
        self.mult.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.v_dot.len() != n || self.gram.len() != n * n {
            return domain("malformed subcurve decomposition");
        }
        for i in 0..n {
            for j in 0..n {
                if self.gram[i * n + j] != self.gram[j * n + i] {
                    return domain("subcurve Gram matrix is not symmetric");
                }
            }
        }
        Ok(())
    }

    /// `u²` for `u = n_v v + Σ n_e e`.
    pub fn norm(&self, nv: i64, ne: &[i64]) -> i64 {
        let n = self.n();
        let mut s = nv * nv * self.v_norm;
        for i in 0..n {
            if ne[i] == 0 {
                continue;
            }
            s += 2 * nv * ne[i] * self.v_dot[i];
            for j in 0..n {
                s += ne[i] * self.gram[i * n + j] * ne[j];
            }
        }
        s
    }

    pub fn w_norm(&self) -> i64 {
        let m: Vec<i64> = self.mult.iter().map(|&x| x as i64).collect();
        self.norm(1, &m)
    }

    /// The decomposition of `w = v₀ + Σ m_e e` inside target lattice data.
    pub fn in_lattice(l: &LatticeData, v0: &[i64], mult: &[i64]) -> Result<Self> {
        if mult.iter().any(|&m| m < 0) || mult.len() != l.mu() {
            return domain("multiplicities must be nonnegative, one per root");
        }
        let idx: Vec<usize> = (0..l.mu()).collect();
        let g = l.ade().gram_rows();
        let n = idx.len();
        let gram = (0..n * n).map(|k| g[idx[k / n]][idx[k % n]]).collect();
        let v_norm = l.inner(v0, v0);
        let v_norm = to_i64(&v_norm).ok_or_else(|| Error::Domain("v² is not integral".into()))?;
        Ok(SubcurveDecomposition {
            v_norm,
            v_dot: idx.iter().map(|&i| v0[i]).collect(),
            gram,
            mult: mult.iter().map(|&m| m as u64).collect(),
            v_dot_h: v0[l.mu()],
        })
    }
}

/// Every nonzero subcurve vector `u` of `w` satisfies `u² ≤ w²`.
///
/// Depth-first over the multiplicities with the bound
/// `u² ≤ p² + 2 Σ_{e unassigned} m_e · max(0, (p, e))` for a partial vector `p`
/// (the unassigned part lies in the negative-definite `⟨ℰ⟩`).
pub fn vanishing_h1(w: &SubcurveDecomposition, kind: TargetKind) -> Result<bool> {
    w.validate()?;
    check_kind(w, kind)?;
    let wn = w.w_norm();
    let n = w.n();
    let support: Vec<usize> = (0..n).filter(|&i| w.mult[i] > 0).collect();
    for nv in [1i64, 0] {
        // (p, e_i) for the current partial vector p
        let mut dots: Vec<i64> = (0..n).map(|i| nv * w.v_dot[i]).collect();
        let mut ne = vec![0i64; n];
        let start = nv * nv * w.v_norm;
        if violates(w, &support, 0, nv, start, &mut dots, &mut ne, wn) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn violates(
    w: &SubcurveDecomposition,
    support: &[usize],
    k: usize,
    nv: i64,
    norm: i64,
    dots: &mut Vec<i64>,
    ne: &mut Vec<i64>,
    wn: i64,
) -> bool {
    let n = w.n();
    if k == support.len() {
        let nonzero = nv != 0 || ne.iter().any(|&x| x != 0);
        return nonzero && norm > wn;
    }
    let bound: i64 = norm + 2 * support[k..].iter().map(|&i| w.mult[i] as i64 * dots[i].max(0)).sum::<i64>();
    if bound <= wn {
        return false;
    }
    let i = support[k];
    let mut cur = norm;
    for c in 0..=w.mult[i] as i64 {
        if c > 0 {
            // adding e_i once more: norm gains e_i² + 2 (p, e_i)
            cur += w.gram[i * n + i] + 2 * dots[i];
            for j in 0..n {
                dots[j] += w.gram[i * n + j];
            }
            ne[i] = c;
        }
        if violates(w, support, k + 1, nv, cur, dots, ne, wn) {
            // restore before unwinding
            for j in 0..n {
                dots[j] -= c * w.gram[i * n + j];
            }
            ne[i] = 0;
            return true;
        }
    }
    let c = w.mult[i] as i64;
    for j in 0..n {
        dots[j] -= c * w.gram[i * n + j];
    }
    ne[i] = 0;
    false
}

fn check_kind(w: &SubcurveDecomposition, kind: TargetKind) -> Result<()> {
    let wn = w.w_norm();
    match kind {
        TargetKind::Root if wn != -2 => domain(format!("w² = {wn}, expected −2")),
        TargetKind::Elliptic if wn != 0 || w.v_dot_h != 3 => {
            domain(format!("w² = {wn} and (w, h) = {}, expected 0 and 3", w.v_dot_h))
        }
        _ => Ok(()),
    }
}

/// Exhaustive oracle for [`vanishing_h1`]; `None` above `cap` subcurves.
pub fn vanishing_h1_exhaustive(w: &SubcurveDecomposition, kind: TargetKind, cap: u64) -> Result<Option<bool>> {
    w.validate()?;
    check_kind(w, kind)?;
    let total = w.mult.iter().try_fold(2u64, |a, &m| a.checked_mul(m + 1));
    match total {
        Some(t) if t <= cap => {}
        _ => return Ok(None),
    }
    let wn = w.w_norm();
    let n = w.n();
    let mut ne = vec![0i64; n];
    loop {
        for nv in [0, 1] {
            if (nv != 0 || ne.iter().any(|&x| x != 0)) && w.norm(nv, &ne) > wn {
                return Ok(Some(false));
            }
        }
        let mut k = 0;
        while k < n {
            ne[k] += 1;
            if ne[k] <= w.mult[k] as i64 {
                break;
            }
            ne[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    Ok(Some(true))
}

/// Sets the marked-class and vanishing-h¹ flags of `sigma`.
pub fn certify(sigma: &mut GeometricEmbedding, s: &ExtendedLatticeData, s0: &ExtendedLatticeData) -> Result<()> {
    match marked_image(sigma, s, s0) {
        None => {
            sigma.flags.marked_class_condition = Some(false);
            sigma.flags.vanishing_h1 = Some(false);
        }
        Some((k, mp, _)) => {
            sigma.flags.marked_class_condition = Some(true);
            let w = SubcurveDecomposition::in_lattice(&s0.base, &s0.marked()[k], &mp)?;
            let kind = if w.w_norm() == -2 { TargetKind::Root } else { TargetKind::Elliptic };
            sigma.flags.vanishing_h1 = Some(vanishing_h1(&w, kind).unwrap_or(false));
        }
    }
    Ok(())
}

/// First embedding of `s` into `s0` passing every flag.
pub fn find_certified(
    s: &ExtendedLatticeData,
    s0: &ExtendedLatticeData,
    budget: SearchBudget,
) -> Result<(Option<GeometricEmbedding>, bool, u64)> {
    if s.degree() != s0.degree() {
        return Ok((None, true, 0));
    }
    let mut found = None;
    let mut err = None;
    let (complete, nodes) = search_embeddings(&s.base, &s0.base, budget, &mut |mut e| match certify(&mut e, s, s0) {
        Ok(()) if e.flags.certified() => {
            found = Some(e);
            ControlFlow::Break(())
        }
        Ok(()) => ControlFlow::Continue(()),
        Err(x) => {
            err = Some(x);
            ControlFlow::Break(())
        }
    })?;
    if let Some(x) = err {
        return Err(x);
    }
    let complete = complete || found.is_some();
    Ok((found, complete, nodes))
}

/// Whether two extended lattice data are isomorphic: an embedding of equal
/// rank that maps `S` onto `S₀` exactly.
pub fn isomorphic(a: &ExtendedLatticeData, b: &ExtendedLatticeData, budget: SearchBudget) -> Result<Option<bool>> {
    if a.base.ade() != b.base.ade() || a.base.g_order() != b.base.g_order() || a.degree() != b.degree() {
        return Ok(Some(false));
    }
    let mut hit = false;
    let (complete, _) = search_embeddings(&a.base, &b.base, budget, &mut |e| {
        let ip = e.apply_int(&a.v_plus);
        if ip.as_ref() == Some(&b.v_plus) || ip.as_ref() == Some(&b.v_minus()) {
            hit = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(if hit { Some(true) } else if complete { Some(false) } else { None })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MemberOutcome {
    /// Isomorphic to the originator.
    Originator,
    Certified { nodes: u64 },
    NoEmbedding,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct MemberReport {
    pub index: usize,
    pub ade: String,
    pub mu: usize,
    pub outcome: MemberOutcome,
    /// The certifying embedding.
    pub witness: Option<GeometricEmbedding>,
}

#[derive(Clone, Debug)]
pub struct LineageReport {
    pub class_order: usize,
    pub degree: i64,
    /// The originator is the unique minimal-μ member up to isomorphism.
    pub originator_unique_minimal: bool,
    pub members: Vec<MemberReport>,
}

impl LineageReport {
    pub fn passed(&self) -> bool {
        self.originator_unique_minimal
            && self.members.iter().all(|m| matches!(m.outcome, MemberOutcome::Originator | MemberOutcome::Certified { .. }))
    }

    pub fn failures(&self) -> impl Iterator<Item = &MemberReport> {
        self.members.iter().filter(|m| !matches!(m.outcome, MemberOutcome::Originator | MemberOutcome::Certified { .. }))
    }
}

/// Checks that `originator` is the unique minimal-μ member of `family` and
/// that every other member admits a certified embedding from it.
pub fn lineage_check(family: &[ExtendedLatticeData], originator: &ExtendedLatticeData, budget: SearchBudget) -> Result<LineageReport> {
    if family.is_empty() {
        return domain("empty family");
    }
    let d = originator.class_order();
    let n = originator.degree();
    for m in family {
        if m.class_order() != d || m.degree() != n {
            return domain("family members differ in class-order or degree");
        }
    }
    let min_mu = family.iter().map(|m| m.mu()).min().unwrap();
    let members: Vec<MemberReport> = family
        .par_iter()
        .enumerate()
        .map(|(index, m)| -> Result<MemberReport> {
            let mut rep = MemberReport { index, ade: m.base.ade().to_string(), mu: m.mu(), outcome: MemberOutcome::NoEmbedding, witness: None };
            if m.mu() == originator.mu() && isomorphic(originator, m, budget)? == Some(true) {
                rep.outcome = MemberOutcome::Originator;
                return Ok(rep);
            }
            let (w, complete, nodes) = find_certified(originator, m, budget)?;
            rep.outcome = match (&w, complete) {
                (Some(_), _) => MemberOutcome::Certified { nodes },
                (None, true) => MemberOutcome::NoEmbedding,
                (None, false) => MemberOutcome::BudgetExhausted,
            };
            rep.witness = w;
            Ok(rep)
        })
        .collect::<Result<_>>()?;
    let originator_unique_minimal = originator.mu() == min_mu
        && members.iter().filter(|m| m.mu == min_mu).all(|m| m.outcome == MemberOutcome::Originator)
        && members.iter().any(|m| m.outcome == MemberOutcome::Originator);
    Ok(LineageReport { class_order: d, degree: n, originator_unique_minimal, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::lattice_types;
    use crate::roots::ADEType;

    #[test]
    fn positive_root_counts() {
        for (c, n) in [(Component::a(5), 15), (Component::d(6), 30), (Component::e(6), 36), (Component::e(8), 120)] {
            assert_eq!(positive_roots(c).len(), n);
        }
    }

    #[test]
    fn identity_is_geometric() {
        let r = ADEType::parse("A3+2A7").unwrap();
        for l in lattice_types(&r).unwrap() {
            let n = l.mu() + 1;
            let m = Matrix::from_fn(n, n, |i, j| if i == j { rat_int(1) } else { Rat::zero() });
            assert!(check_embedding(&l, &l, &m).unwrap().base_valid());
        }
    }

    #[test]
    fn larger_source_has_no_embedding() {
        let a = &lattice_types(&ADEType::parse("A4").unwrap()).unwrap()[0];
        let b = &lattice_types(&ADEType::parse("A3").unwrap()).unwrap()[0];
        let s = geometric_embeddings(a, b, SearchBudget::default()).unwrap();
        assert!(s.embeddings.is_empty() && s.complete);
    }

    #[test]
    fn a2_into_a3() {
        let a = &lattice_types(&ADEType::parse("A2").unwrap()).unwrap()[0];
        let b = &lattice_types(&ADEType::parse("A3").unwrap()).unwrap()[0];
        // ordered chains of two adjacent positive roots of A3
        let s = geometric_embeddings(a, b, SearchBudget::default()).unwrap();
        assert!(s.complete);
        assert!(!s.embeddings.is_empty());
        for e in &s.embeddings {
            assert!(check_embedding(a, b, &e.matrix).unwrap().base_valid());
        }
    }

    #[test]
    fn chain_violates_vanishing() {
        // w = v + 2e, v² = e² = −2, (v, e) = 2: u = v + e has u² = 0
        let w = SubcurveDecomposition { v_norm: -2, v_dot: vec![2], gram: vec![-2], mult: vec![2], v_dot_h: 1 };
        assert_eq!(w.w_norm(), -2);
        assert!(!vanishing_h1(&w, TargetKind::Root).unwrap());
        assert_eq!(vanishing_h1_exhaustive(&w, TargetKind::Root, 1 << 20).unwrap(), Some(false));
    }

    #[test]
    fn bare_class_vanishes() {
        let w = SubcurveDecomposition { v_norm: -2, v_dot: vec![1, 0], gram: vec![-2, 1, 1, -2], mult: vec![0, 0], v_dot_h: 1 };
        assert!(vanishing_h1(&w, TargetKind::Root).unwrap());
    }

    #[test]
    fn wrong_kind_rejected() {
        let w = SubcurveDecomposition { v_norm: -2, v_dot: vec![], gram: vec![], mult: vec![], v_dot_h: 1 };
        assert!(vanishing_h1(&w, TargetKind::Elliptic).is_err());
    }
}
