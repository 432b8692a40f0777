//! Discriminant forms `L^∨/L`, isotropic subgroups and even overlattices.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::lattice::{rat_int, Basis, EvenLattice, QuotientStructure, QVector, Sublattice};
use crate::linalg::{self, Matrix};
use crate::{Int, Rat};

/// Reduces `x` into `[0, m)`.
pub fn rat_mod(x: &Rat, m: i64) -> Rat {
    let m = rat_int(m);
    let k = (x / &m).floor();
    x - k * m
}

/// The finite quadratic form on `L^∨/L`, possibly with all values negated.
#[derive(Clone, Debug)]
pub struct FiniteQuadraticForm {
    host: EvenLattice,
    negated: bool,
    generators: Vec<QVector>,
    orders: Vec<Int>,
    // rows of the Smith transform for the nontrivial invariant factors
    proj: Matrix<Int>,
}

/// `disc_form(L)`: the group `L^∨/L` with `q(x) = x² mod 2`, `b(x,y) = (x,y) mod 1`.
pub fn disc_form(l: &EvenLattice) -> FiniteQuadraticForm {
    let s = linalg::smith(l.gram());
    let n = l.rank();
    let uinv = linalg::inverse(&linalg::to_rational(&s.u)).expect("unimodular");
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    let mut rows = Vec::new();
    for i in 0..n {
        let d = s.d[i].abs();
        if d > Int::one() {
            let g: Vec<Rat> = uinv.col(i);
            generators.push(QVector { coords: g, basis: Basis::Dual, host: l.id() });
            orders.push(d);
            rows.push(s.u.row(i));
        }
    }
    let proj = if rows.is_empty() { Matrix::zeros(0, n) } else { Matrix::from_rows(rows) };
    FiniteQuadraticForm { host: l.clone(), negated: false, generators, orders, proj }
}

impl FiniteQuadraticForm {
    pub fn host(&self) -> &EvenLattice {
        &self.host
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    /// Invariant factors (each > 1).
    pub fn orders(&self) -> &[Int] {
        &self.orders
    }

    /// Representatives in the dual lattice of the cyclic generators.
    pub fn generators(&self) -> &[QVector] {
        &self.generators
    }

    pub fn order(&self) -> Int {
        self.orders.iter().fold(Int::one(), |a, b| a * b)
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// The same group with `q` and `b` negated.
    pub fn negate(&self) -> FiniteQuadraticForm {
        FiniteQuadraticForm { negated: !self.negated, ..self.clone() }
    }

    /// Signature mod 8, from the host lattice (Milgram).
    pub fn signature_mod8(&self) -> i64 {
        let (p, m) = self.host.signature();
        let s = (p as i64 - m as i64).rem_euclid(8);
        if self.negated {
            (-s).rem_euclid(8)
        } else {
            s
        }
    }

    /// Coordinates of the class of `x ∈ L^∨` in the cyclic decomposition.
    pub fn class_coords(&self, x: &QVector) -> Result<Vec<Int>> {
        let d = self.host.dual_coords(x)?;
        let mut di = Vec::with_capacity(d.len());
        for c in d {
            if !c.is_integer() {
                return domain("vector is not in the dual lattice");
            }
            di.push(c.to_integer());
        }
        let y = self.proj.mul_vec(&di);
        Ok(y.into_iter().zip(&self.orders).map(|(a, m)| a.mod_floor(m)).collect())
    }

    /// A dual-lattice representative of the class with the given coordinates.
    pub fn element(&self, coords: &[Int]) -> QVector {
        let n = self.host.rank();
        let mut acc = vec![Rat::zero(); n];
        for (g, c) in self.generators.iter().zip(coords) {
            let cr = Rat::from_integer(c.clone());
            for (a, x) in acc.iter_mut().zip(&g.coords) {
                *a += x * &cr;
            }
        }
        QVector { coords: acc, basis: Basis::Dual, host: self.host.id() }
    }

    fn sign(&self) -> Rat {
        if self.negated {
            -Rat::one()
        } else {
            Rat::one()
        }
    }

    /// `q(x)` in `[0, 2)`.
    pub fn q(&self, x: &QVector) -> Result<Rat> {
        Ok(rat_mod(&(self.host.norm(x)? * self.sign()), 2))
    }

    /// `b(x, y)` in `[0, 1)`.
    pub fn b(&self, x: &QVector, y: &QVector) -> Result<Rat> {
        Ok(rat_mod(&(self.host.inner(x, y)? * self.sign()), 1))
    }

    pub fn q_coords(&self, c: &[Int]) -> Rat {
        self.q(&self.element(c)).expect("own element")
    }

    pub fn b_coords(&self, c: &[Int], d: &[Int]) -> Rat {
        self.b(&self.element(c), &self.element(d)).expect("own element")
    }

    /// Number of elements as `u64`, if small.
    pub fn small_order(&self) -> Option<u64> {
        self.order().to_u64()
    }

    /// Mixed-radix decoding of element index `k`.
    pub fn coords_of_index(&self, mut k: u64) -> Vec<Int> {
        let mut out = Vec::with_capacity(self.orders.len());
        for m in &self.orders {
            let m = m.to_u64().expect("small group");
            out.push(Int::from(k % m));
            k /= m;
        }
        out
    }

    pub fn index_of_coords(&self, c: &[Int]) -> u64 {
        let mut k = 0u64;
        for (x, m) in c.iter().zip(&self.orders).rev() {
            let m = m.to_u64().expect("small group");
            k = k * m + x.mod_floor(&Int::from(m)).to_u64().unwrap();
        }
        k
    }

    /// All elements as coordinate vectors (small groups only).
    pub fn elements(&self) -> Vec<Vec<Int>> {
        let n = self.small_order().expect("group too large to enumerate");
        (0..n).map(|k| self.coords_of_index(k)).collect()
    }

    /// Sum of two classes.
    pub fn add_coords(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), m)| (x + y).mod_floor(m)).collect()
    }

    /// Checks `q(x+y) − q(x) − q(y) ≡ 2 b(x,y)` on the generators.
    pub fn check_polarisation(&self) -> bool {
        let k = self.orders.len();
        let unit = |i: usize| {
            let mut v = vec![Int::zero(); k];
            v[i] = Int::one();
            v
        };
        for i in 0..k {
            for j in 0..k {
                let (a, b) = (unit(i), unit(j));
                let lhs = self.q_coords(&self.add_coords(&a, &b)) - self.q_coords(&a) - self.q_coords(&b);
                let rhs = self.b_coords(&a, &b) * rat_int(2);
                if !(rat_mod(&(lhs - rhs), 2)).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// A subgroup of a discriminant group on which `q` vanishes identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicSubgroup {
    /// Generators as class coordinates of the ambient form.
    pub generators: Vec<Vec<Int>>,
    pub order: Int,
    /// Invariant factors of the subgroup.
    pub structure: Vec<Int>,
}

impl IsotropicSubgroup {
    /// Validates isotropy on every element, not just the generators.
    pub fn new(form: &FiniteQuadraticForm, generators: Vec<Vec<Int>>) -> Result<Self> {
        let elems = span(form, &generators);
        for e in &elems {
            let q = form.q_coords(e);
            if !q.is_zero() {
                return Err(Error::NotIsotropic { element: fmt_coords(e), q: q.to_string() });
            }
        }
        let structure = subgroup_structure(form, &generators);
        Ok(IsotropicSubgroup { generators, order: Int::from(elems.len()), structure })
    }

    pub fn trivial() -> Self {
        IsotropicSubgroup { generators: vec![], order: Int::one(), structure: vec![] }
    }
}

fn fmt_coords(c: &[Int]) -> String {
    format!("[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

/// All elements of the subgroup generated by `gens`.
pub fn span(form: &FiniteQuadraticForm, gens: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let zero = vec![Int::zero(); form.orders().len()];
    let mut set: BTreeSet<Vec<Int>> = BTreeSet::new();
    set.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = form.add_coords(&x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

/// Invariant factors of the subgroup of `form` generated by `gens`.
pub fn subgroup_structure(form: &FiniteQuadraticForm, gens: &[Vec<Int>]) -> Vec<Int> {
    // relations: columns are generator images plus the ambient relations d_i e_i
    let k = form.orders().len();
    let mut cols: Vec<Vec<Int>> = gens.to_vec();
    for (i, m) in form.orders().iter().enumerate() {
        let mut v = vec![Int::zero(); k];
        v[i] = m.clone();
        cols.push(v);
    }
    if k == 0 {
        return vec![];
    }
    // subgroup ≅ M / D where M = span(cols); write D in the basis of M
    let m = linalg::hnf_cols(&Matrix::from_cols(k, &cols));
    let host = EvenLattice::new(Matrix::<Int>::identity(k).map(|x| x * Int::from(2)), (0..k).map(|i| format!("g{i}")).collect())
        .expect("diagonal even lattice");
    let to_q = |c: &Vec<Int>| QVector {
        coords: c.iter().map(|x| Rat::from_integer(x.clone())).collect(),
        basis: Basis::Primal,
        host: host.id(),
    };
    let big = Sublattice::new(&host, m.to_cols().iter().map(to_q).collect()).expect("same host");
    let mut dcols = Vec::new();
    for (i, d) in form.orders().iter().enumerate() {
        let mut v = vec![Int::zero(); k];
        v[i] = d.clone();
        dcols.push(to_q(&v));
    }
    let small = Sublattice::new(&host, dcols).expect("same host");
    big.quotient_structure(&small).expect("relations lie in the span").torsion
}

/// `Λ(H)`: the preimage of `H` in `Σ^∨`.
pub fn overlattice(form: &FiniteQuadraticForm, h: &[Vec<Int>]) -> Result<Sublattice> {
    let sigma = form.host();
    for e in span(form, h) {
        let q = form.q_coords(&e);
        if !q.is_zero() {
            return Err(Error::NotIsotropic { element: fmt_coords(&e), q: q.to_string() });
        }
    }
    let mut gens: Vec<QVector> = (0..sigma.rank()).map(|i| sigma.basis_vector(i)).collect();
    for g in h {
        gens.push(sigma.to_basis(&form.element(g), Basis::Primal)?);
    }
    Sublattice::new(sigma, gens)
}

/// `Λ / Θ` via the Smith form of the inclusion.
pub fn quotient_structure(lambda: &Sublattice, theta: &Sublattice) -> Result<QuotientStructure> {
    if !theta.is_contained_in(lambda)? {
        return domain("the sublattice is not contained in the ambient lattice");
    }
    lambda.quotient_structure(theta)
}

/// Element permutations induced by basis permutations of the host.
fn element_action(form: &FiniteQuadraticForm, perm: &[usize]) -> Result<Vec<u64>> {
    let host = form.host();
    let n = host.rank();
    if perm.len() != n {
        return domain("permutation has the wrong length");
    }
    for i in 0..n {
        for j in 0..n {
            if host.gram().get(perm[i], perm[j]) != host.gram().get(i, j) {
                return domain("permutation does not preserve the form");
            }
        }
    }
    let size = form.small_order().ok_or_else(|| Error::Domain("group too large".into()))?;
    let mut out = vec![0u64; size as usize];
    for k in 0..size {
        let x = form.element(&form.coords_of_index(k));
        let mut y = vec![Rat::zero(); n];
        for i in 0..n {
            y[perm[i]] = x.coords[i].clone();
        }
        let yv = QVector { coords: y, basis: Basis::Dual, host: host.id() };
        out[k as usize] = form.index_of_coords(&form.class_coords(&yv)?);
    }
    Ok(out)
}

/// Every isotropic subgroup, as sorted element-index sets (small groups only).
pub fn all_isotropic_subgroups(form: &FiniteQuadraticForm) -> Vec<Vec<u64>> {
    let size = form.small_order().expect("small group");
    let elems: Vec<Vec<Int>> = (0..size).map(|k| form.coords_of_index(k)).collect();
    let iso: Vec<u64> = (0..size).filter(|&k| form.q_coords(&elems[k as usize]).is_zero()).collect();
    let add = |a: u64, b: u64| form.index_of_coords(&form.add_coords(&elems[a as usize], &elems[b as usize]));
    let iso_set: HashSet<u64> = iso.iter().copied().collect();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let start = vec![0u64];
    seen.insert(start.clone());
    let mut level = vec![start];
    while !level.is_empty() {
        let mut next = Vec::new();
        for h in &level {
            let hs: HashSet<u64> = h.iter().copied().collect();
            for &x in &iso {
                if hs.contains(&x) {
                    continue;
                }
                // close ⟨H, x⟩
                let mut set = hs.clone();
                let mut frontier: Vec<u64> = set.iter().copied().collect();
                let mut ok = true;
                while let Some(a) = frontier.pop() {
                    for b in [x] {
                        let c = add(a, b);
                        if !iso_set.contains(&c) {
                            ok = false;
                            break;
                        }
                        if set.insert(c) {
                            frontier.push(c);
                        }
                    }
                    if !ok {
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                // closure under the generators of H as well
                let mut sorted: Vec<u64> = set.into_iter().collect();
                sorted.sort_unstable();
                if seen.insert(sorted.clone()) {
                    next.push(sorted);
                }
            }
        }
        level = next;
    }
    let mut out: Vec<Vec<u64>> = seen.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// One representative per orbit of the group generated by `aut` (basis
/// permutations of the host) on the isotropic subgroups.  Intended for small
/// groups; the classification pipeline uses the structured engine in
/// [`crate::glue`].
pub fn isotropic_orbits(form: &FiniteQuadraticForm, aut: &[Vec<usize>]) -> Result<Vec<IsotropicSubgroup>> {
    let actions: Vec<Vec<u64>> = aut.iter().map(|p| element_action(form, p)).collect::<Result<_>>()?;
    let subs = all_isotropic_subgroups(form);
    let mut assigned: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut reps: Vec<Vec<u64>> = Vec::new();
    for s in &subs {
        if assigned.contains_key(s) {
            continue;
        }
        let id = reps.len();
        let mut orbit = vec![s.clone()];
        assigned.insert(s.clone(), id);
        let mut i = 0;
        while i < orbit.len() {
            for act in &actions {
                let mut img: Vec<u64> = orbit[i].iter().map(|&e| act[e as usize]).collect();
                img.sort_unstable();
                if !assigned.contains_key(&img) {
                    assigned.insert(img.clone(), id);
                    orbit.push(img);
                }
            }
            i += 1;
        }
        // canonical representative: the orbit member with the smallest element list
        let best = orbit.into_iter().min().expect("nonempty orbit");
        reps.push(best);
    }
    let mut out = Vec::new();
    for r in reps {
        let gens = minimal_generators(form, &r);
        out.push(IsotropicSubgroup::new(form, gens)?);
    }
    out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.generators.cmp(&b.generators)));
    Ok(out)
}

/// Greedy generating tuple: repeatedly add the smallest element not yet spanned.
pub fn minimal_generators(form: &FiniteQuadraticForm, elements: &[u64]) -> Vec<Vec<Int>> {
    let mut gens: Vec<Vec<Int>> = Vec::new();
    let mut spanned: HashSet<Vec<Int>> = span(form, &gens).into_iter().collect();
    let mut sorted = elements.to_vec();
    sorted.sort_unstable();
    for k in sorted {
        let c = form.coords_of_index(k);
        if !spanned.contains(&c) {
            gens.push(c);
            spanned = span(form, &gens).into_iter().collect();
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;
    use crate::roots::ADEType;

    #[test]
    fn e8_is_unimodular() {
        let f = disc_form(&ADEType::parse("E8").unwrap().root_lattice());
        assert!(f.is_trivial());
    }

    #[test]
    fn h_form() {
        let h = EvenLattice::from_i64(&[vec![2]], vec!["h".into()]).unwrap();
        let f = disc_form(&h);
        assert_eq!(f.orders(), &[Int::from(2)]);
        assert_eq!(f.q_coords(&[Int::one()]), rat(1, 2));
        assert!(f.check_polarisation());
    }

    #[test]
    fn a3_two_a7_orders() {
        let s = ADEType::parse("A3+2A7").unwrap().sigma_lattice();
        let f = disc_form(&s);
        assert_eq!(f.order(), Int::from(512));
        assert!(f.check_polarisation());
    }
}
