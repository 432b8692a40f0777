//! Even lattices with exact Gram matrices, vectors in their rational span,
//! sublattices with canonical Hermite bases, and short-vector enumeration in
//! negative-definite lattices.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::linalg::{self, Matrix};
use crate::{Int, Rat};

/// Identifies the lattice a vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HostId(pub u64);

/// Whether coordinates refer to the lattice basis or to its dual basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Primal,
    Dual,
}

/// An even lattice given by its Gram matrix.
#[derive(Clone)]
pub struct EvenLattice {
    gram: Matrix<Int>,
    inv: Matrix<Rat>,
    labels: Vec<String>,
    id: HostId,
}

impl PartialEq for EvenLattice {
    fn eq(&self, o: &Self) -> bool {
        self.gram == o.gram && self.labels == o.labels
    }
}
impl Eq for EvenLattice {}

impl fmt::Debug for EvenLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvenLattice").field("labels", &self.labels).field("gram", &self.gram).finish()
    }
}

impl EvenLattice {
    /// Checks symmetry, evenness and nondegeneracy.
    pub fn new(gram: Matrix<Int>, labels: Vec<String>) -> Result<Self> {
        if !gram.is_symmetric() {
            return domain("Gram matrix is not symmetric");
        }
        if labels.len() != gram.rows() {
            return domain("one label per basis vector required");
        }
        for i in 0..gram.rows() {
            if gram.get(i, i).is_odd() {
                return domain(format!("diagonal entry {i} is odd"));
            }
        }
        let inv = linalg::inverse(&linalg::to_rational(&gram))
            .ok_or_else(|| Error::Domain("Gram matrix is singular".into()))?;
        let mut h = DefaultHasher::new();
        gram.hash(&mut h);
        Ok(EvenLattice { gram, inv, labels, id: HostId(h.finish()) })
    }

    pub fn from_i64(rows: &[Vec<i64>], labels: Vec<String>) -> Result<Self> {
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect());
        Self::new(m, labels)
    }

    /// Labels `b1, b2, ...`.
    pub fn unlabeled(rows: &[Vec<i64>]) -> Result<Self> {
        let labels = (1..=rows.len()).map(|i| format!("b{i}")).collect();
        Self::from_i64(rows, labels)
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<Int> {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &Matrix<Rat> {
        &self.inv
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self) -> HostId {
        self.id
    }

    pub fn det(&self) -> Int {
        linalg::det(&self.gram)
    }

    pub fn signature(&self) -> (usize, usize) {
        linalg::signature(&linalg::to_rational(&self.gram))
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature() == (0, self.rank())
    }

    /// Orthogonal direct sum, labels concatenated.
    pub fn direct_sum(&self, other: &EvenLattice) -> EvenLattice {
        let (a, b) = (self.rank(), other.rank());
        let g = Matrix::from_fn(a + b, a + b, |i, j| {
            if i < a && j < a {
                self.gram.get(i, j).clone()
            } else if i >= a && j >= a {
                other.gram.get(i - a, j - a).clone()
            } else {
                Int::zero()
            }
        });
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        EvenLattice::new(g, labels).expect("direct sum of even lattices is even")
    }

    /// The same module with the form multiplied by `-1`.
    pub fn negated(&self) -> EvenLattice {
        EvenLattice::new(self.gram.map(|x| -x.clone()), self.labels.clone()).expect("negation keeps evenness")
    }

    pub fn vector(&self, coords: Vec<Rat>, basis: Basis) -> Result<QVector> {
        if coords.len() != self.rank() {
            return domain(format!("expected {} coordinates, got {}", self.rank(), coords.len()));
        }
        Ok(QVector { coords, basis, host: self.id })
    }

    pub fn vector_i64(&self, coords: &[i64], basis: Basis) -> Result<QVector> {
        self.vector(coords.iter().map(|&c| Rat::from_integer(Int::from(c))).collect(), basis)
    }

    /// `i`-th basis vector.
    pub fn basis_vector(&self, i: usize) -> QVector {
        let mut c = vec![Rat::zero(); self.rank()];
        c[i] = Rat::one();
        QVector { coords: c, basis: Basis::Primal, host: self.id }
    }

    /// `i`-th dual basis vector.
    pub fn dual_basis_vector(&self, i: usize) -> QVector {
        let mut c = vec![Rat::zero(); self.rank()];
        c[i] = Rat::one();
        QVector { coords: c, basis: Basis::Dual, host: self.id }
    }

    fn check_host(&self, v: &QVector) -> Result<()> {
        if v.host != self.id {
            return domain("vector belongs to a different lattice");
        }
        Ok(())
    }

    /// Coordinates in the lattice basis.
    pub fn primal_coords(&self, v: &QVector) -> Result<Vec<Rat>> {
        self.check_host(v)?;
        Ok(match v.basis {
            Basis::Primal => v.coords.clone(),
            Basis::Dual => self.inv.mul_vec(&v.coords),
        })
    }

    /// Coordinates in the dual basis, i.e. the pairings with the basis vectors.
    pub fn dual_coords(&self, v: &QVector) -> Result<Vec<Rat>> {
        self.check_host(v)?;
        Ok(match v.basis {
            Basis::Dual => v.coords.clone(),
            Basis::Primal => linalg::to_rational(&self.gram).mul_vec(&v.coords),
        })
    }

    pub fn to_basis(&self, v: &QVector, basis: Basis) -> Result<QVector> {
        let coords = match basis {
            Basis::Primal => self.primal_coords(v)?,
            Basis::Dual => self.dual_coords(v)?,
        };
        Ok(QVector { coords, basis, host: self.id })
    }

    pub fn inner(&self, x: &QVector, y: &QVector) -> Result<Rat> {
        let a = self.primal_coords(x)?;
        let b = self.dual_coords(y)?;
        Ok(a.iter().zip(&b).fold(Rat::zero(), |s, (p, q)| s + p * q))
    }

    pub fn norm(&self, x: &QVector) -> Result<Rat> {
        self.inner(x, x)
    }

    /// Whether `v` lies in the lattice itself.
    pub fn contains(&self, v: &QVector) -> Result<bool> {
        Ok(self.primal_coords(v)?.iter().all(|c| c.is_integer()))
    }

    /// Whether `v` lies in the dual lattice.
    pub fn dual_contains(&self, v: &QVector) -> Result<bool> {
        Ok(self.dual_coords(v)?.iter().all(|c| c.is_integer()))
    }
}

/// A vector of the rational span of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector {
    pub coords: Vec<Rat>,
    pub basis: Basis,
    pub host: HostId,
}

impl QVector {
    fn compatible(&self, o: &QVector) -> Result<()> {
        if self.host != o.host {
            return domain("vectors belong to different lattices");
        }
        if self.basis != o.basis {
            return domain("cross-basis arithmetic is rejected; convert first");
        }
        Ok(())
    }

    pub fn add(&self, o: &QVector) -> Result<QVector> {
        self.compatible(o)?;
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        Ok(QVector { coords, ..self.clone() })
    }

    pub fn sub(&self, o: &QVector) -> Result<QVector> {
        self.compatible(o)?;
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        Ok(QVector { coords, ..self.clone() })
    }

    pub fn scale(&self, c: &Rat) -> QVector {
        QVector { coords: self.coords.iter().map(|a| a * c).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

pub(crate) fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub(crate) fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

fn common_denominator(xs: &[Rat]) -> Int {
    linalg::lcm_all(xs.iter().map(|x| x.denom().clone()))
}

// ---------------------------------------------------------------------------
// Sublattices
// ---------------------------------------------------------------------------

/// A full-rank or partial sublattice of the rational span of a host lattice.
///
/// The canonical basis is the column Hermite form of the generators, taken in
/// primal coordinates after clearing the fixed denominator `denom`.
#[derive(Clone, Debug)]
pub struct Sublattice {
    host: EvenLattice,
    generators: Vec<QVector>,
    denom: Int,
    hnf: Matrix<Int>,
}

impl PartialEq for Sublattice {
    fn eq(&self, o: &Self) -> bool {
        self.host == o.host && self.denom == o.denom && self.hnf == o.hnf
    }
}
impl Eq for Sublattice {}

impl Sublattice {
    pub fn new(host: &EvenLattice, generators: Vec<QVector>) -> Result<Self> {
        let prim: Vec<Vec<Rat>> = generators.iter().map(|g| host.primal_coords(g)).collect::<Result<_>>()?;
        let all: Vec<Rat> = prim.iter().flatten().cloned().collect();
        let denom = common_denominator(&all);
        let cols: Vec<Vec<Int>> = prim
            .iter()
            .map(|c| c.iter().map(|x| (x * Rat::from_integer(denom.clone())).to_integer()).collect())
            .collect();
        let m = Matrix::from_cols(host.rank(), &cols);
        let hnf = linalg::hnf_cols(&m);
        Ok(Sublattice { host: host.clone(), generators, denom, hnf })
    }

    /// The host lattice itself.
    pub fn whole(host: &EvenLattice) -> Self {
        let gens = (0..host.rank()).map(|i| host.basis_vector(i)).collect();
        Sublattice::new(host, gens).expect("basis vectors belong to the host")
    }

    /// The dual lattice of the host.
    pub fn dual_of(host: &EvenLattice) -> Self {
        let gens = (0..host.rank()).map(|i| host.dual_basis_vector(i)).collect();
        Sublattice::new(host, gens).expect("dual basis vectors belong to the host span")
    }

    pub fn host(&self) -> &EvenLattice {
        &self.host
    }

    pub fn generators(&self) -> &[QVector] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.hnf.cols()
    }

    /// The canonical (Hermite) basis, in primal coordinates.
    pub fn basis(&self) -> Vec<QVector> {
        let d = Rat::from_integer(self.denom.clone());
        (0..self.hnf.cols())
            .map(|j| {
                let coords = self.hnf.col(j).into_iter().map(|x| Rat::from_integer(x) / &d).collect();
                QVector { coords, basis: Basis::Primal, host: self.host.id }
            })
            .collect()
    }

    /// Integer coordinates of `v` in the canonical basis, if `v` belongs to the sublattice.
    pub fn coords_of(&self, v: &QVector) -> Result<Option<Vec<Int>>> {
        let p = self.host.primal_coords(v)?;
        let d = Rat::from_integer(self.denom.clone());
        let mut target = Vec::with_capacity(p.len());
        for x in &p {
            let y = x * &d;
            if !y.is_integer() {
                return Ok(None);
            }
            target.push(y.to_integer());
        }
        // echelon back-substitution: walk the pivot rows in order
        let n = self.hnf.rows();
        let mut out = vec![Int::zero(); self.hnf.cols()];
        let mut row = 0;
        for j in 0..self.hnf.cols() {
            while row < n && self.hnf.get(row, j).is_zero() {
                if !target[row].is_zero() {
                    return Ok(None);
                }
                row += 1;
            }
            let piv = self.hnf.get(row, j);
            let (q, r) = target[row].div_rem(piv);
            if !r.is_zero() {
                return Ok(None);
            }
            for i in row..n {
                let t = target[i].clone() - q.clone() * self.hnf.get(i, j).clone();
                target[i] = t;
            }
            out[j] = q;
            row += 1;
        }
        if target.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(out))
    }

    pub fn contains(&self, v: &QVector) -> Result<bool> {
        Ok(self.coords_of(v)?.is_some())
    }

    /// Gram matrix of the canonical basis.
    pub fn gram(&self) -> Matrix<Rat> {
        let b = self.basis();
        Matrix::from_fn(b.len(), b.len(), |i, j| self.host.inner(&b[i], &b[j]).expect("same host"))
    }

    /// The sublattice as an even lattice in its canonical basis.
    pub fn to_even_lattice(&self) -> Result<EvenLattice> {
        let g = self.gram();
        let mut rows = Vec::new();
        for i in 0..g.rows() {
            let mut r = Vec::new();
            for j in 0..g.cols() {
                let x = g.get(i, j);
                if !x.is_integer() {
                    return domain("sublattice is not integral");
                }
                r.push(x.to_integer());
            }
            rows.push(r);
        }
        let labels = (1..=g.rows()).map(|i| format!("v{i}")).collect();
        EvenLattice::new(Matrix::from_rows(rows), labels)
    }

    /// Whether every vector of `self` lies in `other`.
    pub fn is_contained_in(&self, other: &Sublattice) -> Result<bool> {
        for b in self.basis() {
            if !other.contains(&b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Matrix whose columns are the canonical basis of `sub` written in the
    /// canonical basis of `self`.
    fn inclusion_matrix(&self, sub: &Sublattice) -> Result<Matrix<Int>> {
        let mut cols = Vec::new();
        for b in sub.basis() {
            match self.coords_of(&b)? {
                Some(c) => cols.push(c),
                None => return domain("the sublattice is not contained in the ambient lattice"),
            }
        }
        Ok(Matrix::from_cols(self.rank(), &cols))
    }

    /// Invariant factors (> 1) of the torsion of `self / sub`; `sub` must be contained in `self`.
    /// Also returns the free rank of the quotient.
    pub fn quotient_structure(&self, sub: &Sublattice) -> Result<QuotientStructure> {
        let m = self.inclusion_matrix(sub)?;
        let d = linalg::elementary_divisors(&m);
        let free_rank = self.rank() - d.len();
        let torsion = d.into_iter().filter(|x| !x.is_one()).collect();
        Ok(QuotientStructure { torsion, free_rank })
    }

    /// Whether `self / sub` is torsion-free.
    pub fn is_primitive_sub(&self, sub: &Sublattice) -> Result<bool> {
        Ok(self.quotient_structure(sub)?.torsion.is_empty())
    }

    /// Order of the class of `v` in `self / sub` (`None` if infinite).
    pub fn class_order(&self, sub: &Sublattice, v: &QVector) -> Result<Option<u64>> {
        if !self.contains(v)? {
            return domain("vector is not in the ambient lattice");
        }
        // a torsion class has order dividing the exponent of the torsion part
        let mut k = 1u64;
        let cap = 1u64 << 40;
        let q = self.quotient_structure(sub)?;
        let exponent: u64 = q.torsion.iter().fold(1u64, |a, t| a.lcm(&t.to_u64().unwrap_or(cap)));
        while k <= exponent.max(1) {
            if sub.contains(&v.scale(&Rat::from_integer(Int::from(k))))? {
                return Ok(Some(k));
            }
            k += 1;
        }
        Ok(None)
    }
}

/// Invariant-factor description of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientStructure {
    pub torsion: Vec<Int>,
    pub free_rank: usize,
}

impl QuotientStructure {
    pub fn order(&self) -> Option<Int> {
        (self.free_rank == 0).then(|| self.torsion.iter().fold(Int::one(), |a, b| a * b))
    }
}

/// `L / M` torsion-free, decided by the elementary divisors of the inclusion.
pub fn is_primitive_sublattice(m: &Sublattice, l: &EvenLattice) -> Result<bool> {
    if m.host().id() != l.id() {
        return domain("sublattice lives in a different lattice");
    }
    for g in m.generators() {
        if !l.contains(g)? {
            return domain("generator does not lie in the lattice");
        }
    }
    Sublattice::whole(l).is_primitive_sub(m)
}

/// Whether `v` is a nonnegative integer combination of the root basis `fund`.
pub fn in_root_monoid(fund: &[QVector], v: &QVector) -> Result<bool> {
    match root_coordinates(fund, v)? {
        None => domain("vector is outside the rational span of the root basis"),
        Some(c) => Ok(c.iter().all(|x| x.is_integer() && !x.is_negative())),
    }
}

/// Coordinates of `v` in the (linearly independent) vectors `fund`, all of
/// which must be expressed in the same basis as `v`.
pub fn root_coordinates(fund: &[QVector], v: &QVector) -> Result<Option<Vec<Rat>>> {
    for f in fund {
        f.compatible(v)?;
    }
    let n = v.coords.len();
    let m = Matrix::from_cols(n, &fund.iter().map(|f| f.coords.clone()).collect::<Vec<_>>());
    Ok(linalg::solve(&m, &v.coords))
}

// ---------------------------------------------------------------------------
// Short vectors
// ---------------------------------------------------------------------------

/// Smallest integer `r >= 0` with `r^2 >= y` (for rational `y >= 0`).
fn ceil_sqrt(y: &Rat) -> Int {
    if !y.is_positive() {
        return Int::zero();
    }
    let c = y.ceil().to_integer();
    let mut r = c.sqrt();
    while Rat::from_integer(&r * &r) < *y {
        r += 1;
    }
    r
}

/// Decomposition `Q(x) = Σ d_i (x_i + Σ_{j>i} u_ij x_j)^2` of a positive-definite form.
struct Cholesky {
    d: Vec<Rat>,
    u: Vec<Vec<Rat>>,
}

fn cholesky(q: &Matrix<Rat>) -> Option<Cholesky> {
    let n = q.rows();
    let mut d = vec![Rat::zero(); n];
    let mut u = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        let mut di = q.get(i, i).clone();
        for k in 0..i {
            di -= &d[k] * &u[k][i] * &u[k][i];
        }
        if !di.is_positive() {
            return None;
        }
        for j in i + 1..n {
            let mut s = q.get(i, j).clone();
            for k in 0..i {
                s -= &d[k] * &u[k][i] * &u[k][j];
            }
            u[i][j] = s / &di;
        }
        u[i][i] = Rat::one();
        d[i] = di;
    }
    Some(Cholesky { d, u })
}

/// All `x ∈ rep + L` with `-bound <= x^2`, in primal coordinates with their norms.
///
/// The lattice must be negative definite.  Results are sorted
/// lexicographically by coordinates.
pub fn coset_vectors_up_to(l: &EvenLattice, rep: &[Rat], bound: &Rat) -> Result<Vec<(Vec<Rat>, Rat)>> {
    let n = l.rank();
    if rep.len() != n {
        return domain("coset representative has the wrong length");
    }
    if n == 0 {
        return Ok(vec![(vec![], Rat::zero())]);
    }
    let q = linalg::to_rational(l.gram()).map(|x| -x.clone());
    let ch = cholesky(&q).ok_or_else(|| Error::Domain("lattice is not negative definite".into()))?;
    let mut out = Vec::new();
    let mut x = vec![Rat::zero(); n];
    fn rec(
        i: usize,
        ch: &Cholesky,
        rep: &[Rat],
        rem: &Rat,
        bound: &Rat,
        x: &mut Vec<Rat>,
        out: &mut Vec<(Vec<Rat>, Rat)>,
    ) {
        let n = rep.len();
        // centre of the i-th term
        let mut c = Rat::zero();
        for j in i + 1..n {
            c -= &ch.u[i][j] * &x[j];
        }
        let y = rem / &ch.d[i];
        let r = Rat::from_integer(ceil_sqrt(&y));
        let lo = (&c - &rep[i] - &r).floor().to_integer();
        let hi = (&c - &rep[i] + &r).ceil().to_integer();
        let mut k = lo;
        while k <= hi {
            let xi = &rep[i] + Rat::from_integer(k.clone());
            let t = &xi - &c;
            let term = &ch.d[i] * &t * &t;
            if term <= *rem {
                x[i] = xi;
                let rem2 = rem - &term;
                if i == 0 {
                    out.push((x.clone(), -(bound - &rem2)));
                } else {
                    rec(i - 1, ch, rep, &rem2, bound, x, out);
                }
            }
            k += 1;
        }
    }
    rec(n - 1, &ch, rep, bound, bound, &mut x, &mut out);
    out.sort();
    Ok(out)
}

/// All `x ∈ coset_rep + L` with `x^2 = norm`, canonically sorted.
pub fn vectors_in_coset_with_norm(l: &EvenLattice, coset_rep: &QVector, norm: &Rat) -> Result<Vec<QVector>> {
    if norm.is_positive() {
        return domain("norm must be nonpositive in a negative-definite lattice");
    }
    if !l.is_negative_definite() {
        return domain("lattice is not negative definite");
    }
    if !l.dual_contains(coset_rep)? {
        return domain("coset representative is not in the dual lattice");
    }
    let rep = l.primal_coords(coset_rep)?;
    let bound = -norm.clone();
    let found = coset_vectors_up_to(l, &rep, &bound)?;
    let mut out = Vec::new();
    for (c, nm) in found {
        if nm == *norm {
            let v = QVector { coords: c, basis: Basis::Primal, host: l.id() };
            out.push(l.to_basis(&v, coset_rep.basis)?);
        }
    }
    out.sort();
    Ok(out)
}

/// The indecomposable positive roots for the linear form `t` (given by its
/// values on the primal basis).
pub fn fundamental_system_from_form(l: &EvenLattice, t: &[Rat]) -> Result<Vec<QVector>> {
    if t.len() != l.rank() {
        return domain("linear form has the wrong length");
    }
    let zero = l.vector(vec![Rat::zero(); l.rank()], Basis::Primal)?;
    let roots = vectors_in_coset_with_norm(l, &zero, &rat_int(-2))?;
    let eval = |v: &QVector| v.coords.iter().zip(t).fold(Rat::zero(), |s, (a, b)| s + a * b);
    let mut pos = Vec::new();
    for r in &roots {
        let tv = eval(r);
        if tv.is_zero() {
            let root = r.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
            return Err(Error::Wall { root: format!("[{root}]") });
        }
        if tv.is_positive() {
            pos.push(r.clone());
        }
    }
    let set: HashSet<Vec<Rat>> = pos.iter().map(|v| v.coords.clone()).collect();
    let mut simple: Vec<QVector> = pos
        .iter()
        .filter(|d| {
            !pos.iter().any(|d1| {
                let rest: Vec<Rat> = d.coords.iter().zip(&d1.coords).map(|(a, b)| a - b).collect();
                set.contains(&rest)
            })
        })
        .cloned()
        .collect();
    simple.sort_by(|a, b| eval(a).cmp(&eval(b)).then_with(|| a.cmp(b)));
    Ok(simple)
}

/// Converts a small rational to a pair of `i64` (numerator, denominator).
pub fn rat_to_i64(x: &Rat) -> Option<(i64, i64)> {
    Some((x.numer().to_i64()?, x.denom().to_i64()?))
}

pub fn int_from(x: i64) -> BigInt {
    BigInt::from(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_n(n: usize) -> EvenLattice {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            -2
                        } else if i.abs_diff(j) == 1 {
                            1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        EvenLattice::unlabeled(&rows).unwrap()
    }

    #[test]
    fn a1_roots() {
        let l = a_n(1);
        let z = l.vector_i64(&[0], Basis::Primal).unwrap();
        let v = vectors_in_coset_with_norm(&l, &z, &rat_int(-2)).unwrap();
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn a3_glue_minimal_vectors() {
        let l = a_n(3);
        let rep = l.dual_basis_vector(2);
        let v = vectors_in_coset_with_norm(&l, &rep, &rat(-3, 4)).unwrap();
        assert_eq!(v.len(), 4);
        for x in &v {
            assert_eq!(x.basis, Basis::Dual);
        }
    }

    #[test]
    fn rank_zero_is_trivial() {
        let l = EvenLattice::unlabeled(&[]).unwrap();
        assert_eq!(l.det(), Int::one());
        let z = l.vector(vec![], Basis::Primal).unwrap();
        assert_eq!(vectors_in_coset_with_norm(&l, &z, &Rat::zero()).unwrap().len(), 1);
    }

    #[test]
    fn index_two_is_not_primitive() {
        let l = EvenLattice::unlabeled(&[vec![-2]]).unwrap();
        let m = Sublattice::new(&l, vec![l.vector_i64(&[2], Basis::Primal).unwrap()]).unwrap();
        assert!(!is_primitive_sublattice(&m, &l).unwrap());
        assert!(is_primitive_sublattice(&Sublattice::whole(&l), &l).unwrap());
    }

    #[test]
    fn cross_basis_rejected() {
        let l = a_n(2);
        let a = l.basis_vector(0);
        let b = l.dual_basis_vector(0);
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn monoid_membership() {
        let l = a_n(3);
        let fund: Vec<QVector> = (0..3).map(|i| l.basis_vector(i)).collect();
        assert!(in_root_monoid(&fund, &fund[0]).unwrap());
        let d = fund[0].sub(&fund[1]).unwrap();
        assert!(!in_root_monoid(&fund, &d).unwrap());
        let s = l.vector_i64(&[1, 2, 1], Basis::Primal).unwrap();
        assert!(in_root_monoid(&fund, &s).unwrap());
    }
}
