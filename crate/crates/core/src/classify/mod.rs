//! Lattice types of a given ADE type, their splitting-curve class sets and
//! invariants, configuration fingerprints, and the inventory of lattice
//! Zariski k-ples.

mod classes;
mod enumerate;
mod profile;

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::glue::{GlueEngine, GlueSubgroup};
use crate::k3;
use crate::lattice::{rat_int, Basis, EvenLattice, QVector, Sublattice};
use crate::roots::{ADEType, MAX_SEXTIC_MU};
use crate::Rat;

pub(crate) use classes::in_positive_cone;
pub use classes::{iota_pairs, ClassSets, Role};
pub use enumerate::{
    classify_ade, enumerate_all, enumerate_types, group_kples, EnumerateOptions, Inventory, KPle, KPleMember, MuRow, TypeRecord,
    TypeSummary,
};
pub use profile::{
    canonical_tau_data, config_fingerprint, degs, profile, profile_with, tau_data, ClassInfo, ConfigFingerprint,
    SexticProfile,
};

/// Lattice data `[ℰ, h, Λ]` with `Λ = Λ(H)` for a glue subgroup `H`.
#[derive(Clone, Debug)]
pub struct LatticeData {
    engine: Arc<GlueEngine>,
    glue: GlueSubgroup,
    sigma: EvenLattice,
    lambda: Sublattice,
}

impl LatticeData {
    /// Builds `Λ(H)` and checks evenness and `ι`-stability.
    pub fn new(engine: Arc<GlueEngine>, glue: GlueSubgroup) -> Result<Self> {
        for &x in &glue.elements {
            if engine.q_scaled(x) != 0 {
                return Err(Error::NotIsotropic {
                    element: format!("{:?}", engine.dual_coords(x)),
                    q: engine.q(x).to_string(),
                });
            }
            if !glue.contains(engine.iota(x)) {
                return Err(Error::Consistency("the involution does not preserve Λ".into()));
            }
        }
        let sigma = engine.ade().sigma_lattice();
        let mut gens: Vec<QVector> = (0..sigma.rank()).map(|i| sigma.basis_vector(i)).collect();
        for &g in &glue.generators {
            let coords = engine.dual_coords(g).into_iter().map(rat_int).collect();
            gens.push(sigma.vector(coords, Basis::Dual)?);
        }
        let lambda = Sublattice::new(&sigma, gens)?;
        Ok(LatticeData { engine, glue, sigma, lambda })
    }

    /// `Λ(H)` for `H` generated by the classes of integral dual-coordinate vectors.
    pub fn from_glue(engine: Arc<GlueEngine>, gens: &[Vec<i64>]) -> Result<Self> {
        let n = engine.ade().mu() + 1;
        if let Some(g) = gens.iter().find(|g| g.len() != n) {
            return domain(format!("glue generator has {} coordinates, expected {n}", g.len()));
        }
        let classes: Vec<u32> = gens.iter().map(|g| engine.class_of(g)).collect();
        let glue = engine.subgroup(&classes);
        LatticeData::new(engine, glue)
    }

    /// Same as [`LatticeData::from_glue`] for an ADE type.
    pub fn from_ade_glue(r: &ADEType, gens: &[Vec<i64>]) -> Result<Self> {
        Self::from_glue(Arc::new(GlueEngine::new(r)), gens)
    }

    pub fn ade(&self) -> &ADEType {
        self.engine.ade()
    }

    pub fn mu(&self) -> usize {
        self.ade().mu()
    }

    pub fn engine(&self) -> &GlueEngine {
        &self.engine
    }

    pub fn engine_arc(&self) -> Arc<GlueEngine> {
        self.engine.clone()
    }

    pub fn glue(&self) -> &GlueSubgroup {
        &self.glue
    }

    /// `Σ = ⟨ℰ⟩ ⊕ ⟨h⟩`, `h` last.
    pub fn sigma(&self) -> &EvenLattice {
        &self.sigma
    }

    /// `Λ` as a sublattice of `Σ ⊗ Q`.
    pub fn lambda(&self) -> &Sublattice {
        &self.lambda
    }

    /// `Λ` with its own Gram matrix.
    pub fn lambda_lattice(&self) -> EvenLattice {
        self.lambda.to_even_lattice().expect("Λ is even")
    }

    /// Glue generators as integral dual coordinates over `ℰ^∨ ∪ {h^∨}`.
    pub fn glue_generators(&self) -> Vec<Vec<i64>> {
        self.glue.generators.iter().map(|&g| self.engine.dual_coords(g)).collect()
    }

    /// Invariant factors of `G = Λ/Σ`.
    pub fn g_structure(&self) -> Vec<u64> {
        self.engine.structure(&self.glue.elements)
    }

    pub fn g_order(&self) -> usize {
        self.glue.order()
    }

    /// Whether an integral vector of `Σ^∨` (dual coordinates) lies in `Λ`.
    pub fn contains_dual(&self, v: &[i64]) -> bool {
        self.glue.contains(self.engine.class_of(v))
    }

    /// `ι` on dual coordinates.
    pub fn iota_dual(&self, v: &[i64]) -> Vec<i64> {
        let p = self.ade().involution();
        let mut out = v.to_vec();
        for (i, &j) in p.iter().enumerate() {
            out[j] = v[i];
        }
        out
    }

    /// `scale · (x, y)`, see [`GlueEngine::scale`].
    pub fn inner_scaled(&self, x: &[i64], y: &[i64]) -> i64 {
        self.engine.inner_scaled(x, y)
    }

    pub fn inner(&self, x: &[i64], y: &[i64]) -> Rat {
        Rat::new(self.inner_scaled(x, y).into(), self.engine.scale().into())
    }

    /// Order of the class of `x ∈ Λ` in `G`.
    pub fn class_order_dual(&self, x: &[i64]) -> Result<usize> {
        if !self.contains_dual(x) {
            return domain("vector is not in Λ");
        }
        Ok(self.engine.element_order(self.engine.class_of(x)))
    }

    /// Order of `x` modulo `Σ`.
    pub fn class_order(&self, x: &QVector) -> Result<usize> {
        let d = integral_dual(&self.sigma, x)?;
        self.class_order_dual(&d)
    }

    /// Whether `x ∈ Λ` is v-smooth: each local part is 0 or a dual basis vector.
    pub fn v_smooth(&self, x: &QVector) -> Result<bool> {
        let d = integral_dual(&self.sigma, x)?;
        if !self.contains_dual(&d) {
            return domain("vector is not in Λ");
        }
        Ok(self.v_smooth_dual(&d))
    }

    pub fn v_smooth_dual(&self, d: &[i64]) -> bool {
        let offs = self.engine.offsets();
        (0..self.engine.ncomp()).all(|c| {
            let part = &d[offs[c]..offs[c + 1]];
            let nz: Vec<i64> = part.iter().copied().filter(|&x| x != 0).collect();
            nz.is_empty() || (nz.len() == 1 && nz[0] == 1)
        })
    }

    /// `τ_P(x)` for every point: the index `j` with `x_P = e_j^∨`, 0 if `x_P = 0`.
    pub fn taus(&self, d: &[i64]) -> Vec<usize> {
        let offs = self.engine.offsets();
        (0..self.engine.ncomp())
            .map(|c| d[offs[c]..offs[c + 1]].iter().position(|&x| x != 0).map_or(0, |i| i + 1))
            .collect()
    }

    /// The dual-coordinate vector with the given `h`-degree and local parts `e_τ^∨`.
    pub fn vsmooth_vector(&self, h_coord: i64, taus: &[usize]) -> Vec<i64> {
        let offs = self.engine.offsets();
        let mut v = vec![0i64; self.mu() + 1];
        for (c, &t) in taus.iter().enumerate() {
            if t > 0 {
                v[offs[c] + t - 1] = 1;
            }
        }
        v[self.mu()] = h_coord;
        v
    }

    /// `x` as a vector of `Σ ⊗ Q` in the dual basis.
    pub fn qvector(&self, d: &[i64]) -> QVector {
        self.sigma.vector(d.iter().map(|&x| rat_int(x)).collect(), Basis::Dual).expect("right length")
    }

    /// Canonical sort key: `(|G|, invariant factors, glue generators)`.
    fn sort_key(&self) -> (usize, Vec<u64>, Vec<Vec<i64>>) {
        (self.g_order(), self.g_structure(), self.glue_generators())
    }
}

/// Dual coordinates of `x` when they are integral.
fn integral_dual(sigma: &EvenLattice, x: &QVector) -> Result<Vec<i64>> {
    let d = sigma.dual_coords(x)?;
    d.iter()
        .map(|c| {
            if c.is_integer() {
                num_traits::ToPrimitive::to_i64(&c.to_integer()).ok_or_else(|| Error::Domain("coordinate too large".into()))
            } else {
                Err(Error::Domain("vector is not in Σ^∨".into()))
            }
        })
        .collect()
}

/// Every lattice type with ADE type `r`, in canonical order.
pub fn lattice_types(r: &ADEType) -> Result<Vec<LatticeData>> {
    if r.mu() > MAX_SEXTIC_MU {
        return domain(format!("total rank {} exceeds {MAX_SEXTIC_MU}", r.mu()));
    }
    let engine = Arc::new(GlueEngine::new(r));
    lattice_types_with(engine)
}

pub fn lattice_types_with(engine: Arc<GlueEngine>) -> Result<Vec<LatticeData>> {
    let mut out = Vec::new();
    for h in engine.good_isotropic_orbits() {
        let ld = LatticeData::new(engine.clone(), h)?;
        debug_assert!(k3::urabe_root_condition(&ld) && k3::urabe_isotropic_condition(&ld));
        if k3::embeds_in_k3(&ld.lambda_lattice())? {
            out.push(ld);
        }
    }
    out.sort_by(|a, b| cmp_types(a, b));
    Ok(out)
}

fn cmp_types(a: &LatticeData, b: &LatticeData) -> Ordering {
    a.sort_key().cmp(&b.sort_key())
}

/// `(G, Θ/Σ, F)`: invariant factors of `G`, the elements of `Θ/Σ ⊆ G`, and
/// invariant factors of `F = Λ/Θ`.  The generation identities are checked;
/// a failure is a consistency error.
pub fn groups_g_f(l: &LatticeData, sets: &ClassSets) -> Result<(Vec<u64>, Vec<u32>, Vec<u64>)> {
    let e = l.engine();
    let classes = |v: &[Vec<i64>]| -> Vec<u32> { v.iter().map(|x| e.class_of(x)).collect() };
    let theta_gens = classes(&sets.theta_vectors());
    let theta = e.span(&theta_gens);
    let f = quotient_invariants(e, &l.glue().elements, &theta);
    let fail = |what: &str| Err(Error::Consistency(format!("{what} for {} (G = {:?})", l.ade(), l.g_structure())));
    if !sets.lines_lift.is_empty() || !sets.conics_lift.is_empty() {
        if f.is_empty() {
            return fail("F is trivial although Z-splitting lines or conics exist");
        }
        let mut gens = theta_gens;
        gens.extend(classes(&sets.lines_lift));
        gens.extend(classes(&sets.conics_lift));
        if e.span(&gens) != l.glue().elements {
            return fail("Λ is not generated by Θ and the splitting line and conic classes");
        }
    } else if !f.is_empty() {
        if sets.cubics_lift.len() != 2 {
            return fail("F ≠ 0 without splitting lines or conics, but |𝒢^l| ≠ 2");
        }
        let mut gens = theta_gens;
        gens.extend(classes(&sets.cubics_lift));
        if e.span(&gens) != l.glue().elements {
            return fail("Λ is not generated by Θ and 𝒢^l");
        }
        if l.g_structure() != [4] {
            return fail("F ≠ 0 without splitting lines or conics, but G is not cyclic of order 4");
        }
    }
    Ok((l.g_structure(), theta, f))
}

/// Invariant factors of `H/K` for subgroups `K ⊆ H` given as sorted element sets.
pub fn quotient_invariants(e: &GlueEngine, h: &[u32], k: &[u32]) -> Vec<u64> {
    // canonical coset representative: the minimum of x + K
    let rep = |x: u32| k.iter().map(|&y| e.add(x, y)).min().unwrap();
    let mut reps: Vec<u32> = h.iter().map(|&x| rep(x)).collect();
    reps.sort_unstable();
    reps.dedup();
    let orders: Vec<u64> = reps
        .iter()
        .map(|&x| {
            let mut n = 1u64;
            let mut y = x;
            while !k.contains(&y) {
                y = e.add(y, x);
                n += 1;
            }
            n
        })
        .collect();
    crate::glue::abelian_invariants(&orders)
}

