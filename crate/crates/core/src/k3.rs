//! Realizability: primitive embeddings into the K3 lattice and the two
//! vector conditions on overlattices.
//!
//! Existence of an even lattice with prescribed signature and discriminant
//! form follows Nikulin's criterion.  The local data (`l(A_p)`, the
//! discriminant of the `p`-adic lattice `K(q_p)`) are read off a `p`-adic
//! Jordan splitting of the host lattice that carries the form, so no
//! normal-form theory for finite quadratic forms is needed.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::classify::LatticeData;
use crate::discriminant::FiniteQuadraticForm;
use crate::error::{domain, Result};
use crate::lattice::EvenLattice;
use crate::linalg::{self, Matrix};
use crate::{Int, Rat};

/// Signature and discriminant form of a hypothetical even lattice.
#[derive(Clone, Debug)]
pub struct GenusSpec {
    pub p_plus: usize,
    pub p_minus: usize,
    pub form: FiniteQuadraticForm,
}

/// One block of a `p`-adic Jordan splitting: `p^valuation · J` with `J`
/// unimodular of size 1 or 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanBlock {
    pub valuation: u32,
    pub size: usize,
    pub det: Rat,
}

/// `p`-adic valuation of a nonzero rational.
pub fn valuation(x: &Rat, p: u64) -> i64 {
    let p = Int::from(p);
    let mut v = 0i64;
    let mut n = x.numer().abs();
    while n.is_multiple_of(&p) {
        n /= &p;
        v += 1;
    }
    let mut d = x.denom().abs();
    while d.is_multiple_of(&p) {
        d /= &p;
        v -= 1;
    }
    v
}

/// The unit part `x / p^v(x)` as `numerator · denominator` (a representative
/// of the same square class for odd denominators).
fn unit_part(x: &Rat, p: u64) -> Int {
    let pp = Int::from(p);
    let mut n = x.numer().clone();
    while n.is_multiple_of(&pp) {
        n /= &pp;
    }
    let mut d = x.denom().clone();
    while d.is_multiple_of(&pp) {
        d /= &pp;
    }
    n * d
}

/// Jordan splitting of a nonsingular symmetric integer matrix over `Z_(p)`.
pub fn jordan_blocks(gram: &Matrix<Int>, p: u64) -> Vec<JordanBlock> {
    let mut m: Vec<Vec<Rat>> = gram.to_rows().into_iter().map(|r| r.into_iter().map(Rat::from_integer).collect()).collect();
    let mut alive: Vec<usize> = (0..m.len()).collect();
    let mut out = Vec::new();
    let val = |x: &Rat| if x.is_zero() { i64::MAX } else { valuation(x, p) };
    while !alive.is_empty() {
        // entry of minimal valuation; diagonal preferred
        let mut best_diag: Option<(i64, usize)> = None;
        let mut best_off: Option<(i64, usize, usize)> = None;
        for (a, &i) in alive.iter().enumerate() {
            let v = val(&m[i][i]);
            if best_diag.map_or(true, |(bv, _)| v < bv) {
                best_diag = Some((v, i));
            }
            for &j in &alive[a + 1..] {
                let v = val(&m[i][j]);
                if best_off.map_or(true, |(bv, _, _)| v < bv) {
                    best_off = Some((v, i, j));
                }
            }
        }
        let (dv, di) = best_diag.expect("nonempty");
        let off_v = best_off.map_or(i64::MAX, |b| b.0);
        if dv <= off_v {
            pivot1(&mut m, &alive, di);
            out.push(JordanBlock { valuation: dv as u32, size: 1, det: m[di][di].clone() });
            alive.retain(|&k| k != di);
            continue;
        }
        let (v, i, j) = best_off.unwrap();
        if p != 2 {
            // e_i += e_j makes a diagonal entry of valuation v
            add_basis(&mut m, i, j, &alive);
            pivot1(&mut m, &alive, i);
            out.push(JordanBlock { valuation: v as u32, size: 1, det: m[i][i].clone() });
            alive.retain(|&k| k != i);
            continue;
        }
        pivot2(&mut m, &alive, i, j);
        let det = &m[i][i] * &m[j][j] - &m[i][j] * &m[i][j];
        out.push(JordanBlock { valuation: v as u32, size: 2, det });
        alive.retain(|&k| k != i && k != j);
    }
    out
}

fn add_basis(m: &mut [Vec<Rat>], i: usize, j: usize, alive: &[usize]) {
    for &k in alive {
        let t = m[k][j].clone();
        m[k][i] += t;
    }
    for &k in alive {
        let t = m[j][k].clone();
        m[i][k] += t;
    }
}

fn pivot1(m: &mut [Vec<Rat>], alive: &[usize], i: usize) {
    let piv = m[i][i].clone();
    for &k in alive {
        if k == i || m[k][i].is_zero() {
            continue;
        }
        let f = &m[k][i] / &piv;
        for &l in alive {
            let t = &f * &m[i][l];
            m[k][l] -= t;
        }
        for &l in alive {
            let t = &f * &m[l][i];
            m[l][k] -= t;
        }
        // restore exact symmetry of the eliminated pair
        m[k][i] = Rat::zero();
        m[i][k] = Rat::zero();
    }
}

fn pivot2(m: &mut [Vec<Rat>], alive: &[usize], i: usize, j: usize) {
    let (a, b, c) = (m[i][i].clone(), m[i][j].clone(), m[j][j].clone());
    let det = &a * &c - &b * &b;
    // inverse of [[a,b],[b,c]]
    let (ia, ib, ic) = (&c / &det, -&b / &det, &a / &det);
    for &k in alive {
        if k == i || k == j {
            continue;
        }
        let (x, y) = (m[k][i].clone(), m[k][j].clone());
        if x.is_zero() && y.is_zero() {
            continue;
        }
        // row_k -= (x, y) B^{-1} (row_i; row_j)
        let fi = &x * &ia + &y * &ib;
        let fj = &x * &ib + &y * &ic;
        for &l in alive {
            let t = &fi * &m[i][l] + &fj * &m[j][l];
            m[k][l] -= t;
        }
        for &l in alive {
            let t = &fi * &m[l][i] + &fj * &m[l][j];
            m[l][k] -= t;
        }
        m[k][i] = Rat::zero();
        m[i][k] = Rat::zero();
        m[k][j] = Rat::zero();
        m[j][k] = Rat::zero();
    }
}

fn primes_of(n: &Int) -> Vec<u64> {
    let mut n = n.abs().to_u64().expect("discriminant fits in u64");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Legendre symbol `(a/p)` for odd prime `p ∤ a`.
pub fn legendre(a: &Int, p: u64) -> i32 {
    let pp = Int::from(p);
    let a = a.mod_floor(&pp);
    let e = Int::from((p - 1) / 2);
    let r = a.modpow(&e, &pp);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Local data of a discriminant form at `p`: `l(A_p)`, the discriminant of
/// `K(q_p)`, and whether the 2-part splits off a rank-one odd summand.
#[derive(Clone, Debug)]
pub struct LocalData {
    pub length: usize,
    pub discr: Rat,
    pub odd_half: bool,
}

pub fn local_data(form: &FiniteQuadraticForm, p: u64) -> LocalData {
    let blocks = jordan_blocks(form.host().gram(), p);
    let mut length = 0;
    let mut discr = Rat::one();
    let mut odd_half = false;
    for b in &blocks {
        if b.valuation >= 1 {
            length += b.size;
            discr *= &b.det;
            if p == 2 && b.valuation == 1 && b.size == 1 {
                odd_half = true;
            }
        }
    }
    if form.is_negated() && length % 2 == 1 {
        discr = -discr;
    }
    LocalData { length, discr, odd_half }
}

/// Whether an even lattice with the given signature and discriminant form exists.
pub fn exists_even_lattice(spec: &GenusSpec) -> bool {
    let (tp, tm) = (spec.p_plus as i64, spec.p_minus as i64);
    let rank = (tp + tm) as usize;
    if (tp - tm - spec.form.signature_mod8()).rem_euclid(8) != 0 {
        return false;
    }
    let order = spec.form.order();
    if order.is_one() {
        return true;
    }
    let signed_order = if tm % 2 == 1 { -Rat::from_integer(order.clone()) } else { Rat::from_integer(order.clone()) };
    for p in primes_of(&order) {
        let loc = local_data(&spec.form, p);
        if rank < loc.length {
            return false;
        }
        if rank > loc.length {
            continue;
        }
        let u1 = unit_part(&signed_order, p);
        let u2 = unit_part(&loc.discr, p);
        if p == 2 {
            if loc.odd_half {
                continue;
            }
            let r = (u1 * u2).mod_floor(&Int::from(8));
            if r != Int::from(1) && r != Int::from(7) {
                return false;
            }
        } else if legendre(&(u1 * u2), p) != 1 {
            return false;
        }
    }
    true
}

/// Whether `Λ` (signature `(1, μ)`) embeds primitively into the K3 lattice.
pub fn embeds_in_k3(lambda: &EvenLattice) -> Result<bool> {
    let (p, m) = lambda.signature();
    if p != 1 || m + p != lambda.rank() || m > 19 {
        return domain(format!("expected signature (1, μ) with μ ≤ 19, got ({p}, {m})"));
    }
    let form = crate::discriminant::disc_form(lambda).negate();
    Ok(exists_even_lattice(&GenusSpec { p_plus: 2, p_minus: 19 - m, form }))
}

/// `embeds_in_k3` for lattices given by a Gram matrix.
pub fn embeds_gram_in_k3(gram: &Matrix<Int>) -> Result<bool> {
    let labels = (0..gram.rows()).map(|i| format!("b{i}")).collect();
    embeds_in_k3(&EvenLattice::new(gram.clone(), labels)?)
}

/// Every `x ∈ Λ` with `(x,h) = 0` and `x² = −2` lies in `⟨ℰ⟩`.
pub fn urabe_root_condition(l: &LatticeData) -> bool {
    let e = l.engine();
    l.glue().elements.iter().all(|&x| !e.violates_root(x))
}

/// No `x ∈ Λ` with `(x,h) = 1` and `x² = 0`.
pub fn urabe_isotropic_condition(l: &LatticeData) -> bool {
    let e = l.engine();
    l.glue().elements.iter().all(|&x| !e.violates_isotropic(x))
}

/// Signature of the form via the host's real signature (Milgram).
pub fn milgram_signature(form: &FiniteQuadraticForm) -> i64 {
    form.signature_mod8()
}

/// Determinant of a Gram matrix (convenience for callers holding matrices).
pub fn gram_det(gram: &Matrix<Int>) -> Int {
    linalg::det(gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminant::disc_form;
    use crate::roots::ADEType;

    fn spec(p: usize, m: usize, l: &EvenLattice, neg: bool) -> GenusSpec {
        let f = disc_form(l);
        GenusSpec { p_plus: p, p_minus: m, form: if neg { f.negate() } else { f } }
    }

    #[test]
    fn unimodular_cases() {
        let e8 = ADEType::parse("E8").unwrap().root_lattice();
        assert!(exists_even_lattice(&spec(0, 8, &e8, false)));
        assert!(!exists_even_lattice(&spec(0, 1, &e8, false)));
    }

    #[test]
    fn root_lattices_exist() {
        for s in ["A1", "A2", "A5", "D4", "D5", "E6", "E7", "2A1", "A3+2A7", "2A4+A9"] {
            let l = ADEType::parse(s).unwrap().root_lattice();
            let n = l.rank();
            assert!(exists_even_lattice(&spec(0, n, &l, false)), "{s}");
            // and the positive version with negated form
            assert!(exists_even_lattice(&spec(n, 0, &l, true)), "{s} negated");
        }
    }

    #[test]
    fn length_obstruction() {
        // (Z/2)^3 from 3A1 cannot live on a rank-2 lattice
        let l = ADEType::parse("3A1").unwrap().root_lattice();
        assert!(!exists_even_lattice(&spec(1, 1, &l, false)));
    }

    #[test]
    fn jordan_determinant_matches() {
        let l = ADEType::parse("A3+2A7").unwrap().sigma_lattice();
        for p in [2u64, 3, 5] {
            let blocks = jordan_blocks(l.gram(), p);
            let prod = blocks.iter().fold(Rat::one(), |a, b| a * &b.det);
            let d = Rat::from_integer(linalg::det(l.gram()));
            // same square class: equal valuation and unit ratio a square
            assert_eq!(valuation(&prod, p), valuation(&d, p));
        }
    }
}
