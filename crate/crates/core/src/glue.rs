//! Component-structured discriminant groups of `Σ = ⟨ℰ⟩ ⊕ ⟨h⟩`.
//!
//! Elements are mixed-radix indices over the per-component groups (the
//! `⟨h⟩` factor last), so the hot loops of the subgroup search run on small
//! integers.  All quadratic values are kept as integers scaled by
//! `scale = lcm(2, dets)`.

use std::collections::{HashMap, HashSet};

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::discriminant::disc_form;
use crate::lattice::{coset_vectors_up_to, rat_int, Basis, EvenLattice, QVector};
use crate::linalg::{self, Matrix};
use crate::roots::{ADEType, Component};
use crate::{Int, Rat};

/// The discriminant group of one component (or of `⟨h⟩`).
#[derive(Clone, Debug)]
pub struct LocalGroup {
    pub component: Option<Component>,
    pub rank: usize,
    pub order: usize,
    /// Dual coordinates of one representative per element.
    pub reps: Vec<Vec<i64>>,
    add: Vec<u16>,
    neg: Vec<u16>,
    basis_class: Vec<u16>,
    /// Exact norm of the chosen representative.
    pub rep_norm: Vec<Rat>,
    /// Action of each diagram automorphism (identity first).
    pub auts: Vec<Vec<u16>>,
    /// The diagram automorphisms as permutations of the simple roots.
    pub root_auts: Vec<Vec<usize>>,
    pub iota: Vec<u16>,
    /// Smallest element of each local automorphism orbit.
    pub orbit: Vec<u16>,
    /// Distinct norms `>= -2` in each coset (exact).
    pub short_norms: Vec<Vec<Rat>>,
    gram_inv: Matrix<Rat>,
}

fn rank_one_h() -> Vec<Vec<i64>> {
    vec![vec![2]]
}

impl LocalGroup {
    pub fn new(component: Option<Component>) -> Self {
        let gram = match component {
            Some(c) => c.gram(),
            None => rank_one_h(),
        };
        let r = gram.len();
        let lat = EvenLattice::unlabeled(&gram).expect("component Gram is even and nonsingular");
        let form = disc_form(&lat);
        let key = |c: &[i64]| -> Vec<Int> {
            let v = QVector { coords: c.iter().map(|&x| rat_int(x)).collect(), basis: Basis::Dual, host: lat.id() };
            form.class_coords(&v).expect("integral dual coordinates")
        };
        // generators tried in order; for A_l the last node first so that
        // element k is k·e_l^∨
        let order_of_try: Vec<usize> = match component {
            Some(c) if c.family == crate::roots::Family::A => (0..r).rev().collect(),
            _ => (0..r).collect(),
        };
        let mut reps: Vec<Vec<i64>> = vec![vec![0; r]];
        let mut index: HashMap<Vec<Int>, u16> = HashMap::new();
        index.insert(key(&reps[0]), 0);
        for &i in &order_of_try {
            let mut g = vec![0i64; r];
            g[i] = 1;
            if index.contains_key(&key(&g)) {
                continue;
            }
            let base = reps.clone();
            let mut k = 1i64;
            loop {
                let kg: Vec<i64> = g.iter().map(|x| x * k).collect();
                if index.contains_key(&key(&kg)) {
                    break;
                }
                for b in &base {
                    let v: Vec<i64> = b.iter().zip(&kg).map(|(x, y)| x + y).collect();
                    let id = reps.len() as u16;
                    index.insert(key(&v), id);
                    reps.push(v);
                }
                k += 1;
            }
        }
        let order = reps.len();
        assert_eq!(Int::from(order), form.order(), "local group closure");
        let lookup = |c: &[i64]| -> u16 { index[&key(c)] };
        let mut add = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                let v: Vec<i64> = reps[a].iter().zip(&reps[b]).map(|(x, y)| x + y).collect();
                add[a * order + b] = lookup(&v);
            }
        }
        let neg: Vec<u16> = (0..order).map(|a| (0..order).find(|&b| add[a * order + b] == 0).unwrap() as u16).collect();
        let basis_class: Vec<u16> = (0..r)
            .map(|i| {
                let mut e = vec![0i64; r];
                e[i] = 1;
                lookup(&e)
            })
            .collect();
        let gram_inv = lat.gram_inverse().clone();
        let norm_of = |c: &[i64]| -> Rat {
            let cr: Vec<Rat> = c.iter().map(|&x| rat_int(x)).collect();
            linalg::bilinear(&gram_inv, &cr, &cr)
        };
        let rep_norm: Vec<Rat> = reps.iter().map(|c| norm_of(c)).collect();
        let root_auts = match component {
            Some(c) => c.diagram_automorphisms(),
            None => vec![vec![0]],
        };
        let act = |p: &[usize]| -> Vec<u16> {
            reps.iter()
                .map(|c| {
                    let mut d = vec![0i64; r];
                    for i in 0..r {
                        d[p[i]] = c[i];
                    }
                    lookup(&d)
                })
                .collect()
        };
        let auts: Vec<Vec<u16>> = root_auts.iter().map(|p| act(p)).collect();
        let iota = match component {
            Some(c) => act(&c.involution()),
            None => (0..order as u16).collect(),
        };
        let orbit: Vec<u16> = (0..order).map(|a| auts.iter().map(|p| p[a]).min().unwrap()).collect();
        let short_norms = match component {
            Some(_) => reps
                .iter()
                .map(|c| {
                    let cr: Vec<Rat> = c.iter().map(|&x| rat_int(x)).collect();
                    let prim = linalg_mul_vec(&gram_inv, &cr);
                    let mut ns: Vec<Rat> = coset_vectors_up_to(&lat, &prim, &rat_int(2))
                        .expect("negative definite")
                        .into_iter()
                        .map(|(_, n)| n)
                        .collect();
                    ns.sort();
                    ns.dedup();
                    ns
                })
                .collect(),
            None => vec![vec![]; order],
        };
        LocalGroup {
            component,
            rank: r,
            order,
            reps,
            add,
            neg,
            basis_class,
            rep_norm,
            auts,
            root_auts,
            iota,
            orbit,
            short_norms,
            gram_inv,
        }
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    pub fn mul(&self, k: i64, a: u16) -> u16 {
        let n = self.order as i64;
        let k = k.rem_euclid(n);
        let mut acc = 0u16;
        for _ in 0..k {
            acc = self.add(acc, a);
        }
        acc
    }

    /// Class of an integral dual-coordinate vector.
    pub fn class_of(&self, c: &[i64]) -> u16 {
        let mut acc = 0u16;
        for (i, &x) in c.iter().enumerate() {
            if x != 0 {
                acc = self.add(acc, self.mul(x, self.basis_class[i]));
            }
        }
        acc
    }

    /// Exact inner product of two dual-coordinate vectors.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> Rat {
        let ar: Vec<Rat> = a.iter().map(|&x| rat_int(x)).collect();
        let br: Vec<Rat> = b.iter().map(|&x| rat_int(x)).collect();
        linalg::bilinear(&self.gram_inv, &ar, &br)
    }

    pub fn gram_inverse(&self) -> &Matrix<Rat> {
        &self.gram_inv
    }

    /// Class of the dual basis vector `e_i^∨` (0-based `i`).
    pub fn basis_class(&self, i: usize) -> u16 {
        self.basis_class[i]
    }

    pub fn element_order(&self, a: u16) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.add(x, a);
            k += 1;
        }
        k
    }
}

fn linalg_mul_vec(m: &Matrix<Rat>, v: &[Rat]) -> Vec<Rat> {
    m.mul_vec(v)
}

/// An element of `Aut(ℰ)`: component `c` goes to `perm[c]` twisted by the
/// local diagram automorphism `local[c]` (an index into `LocalGroup::auts`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutElement {
    pub perm: Vec<usize>,
    pub local: Vec<usize>,
}

/// A glue subgroup as a sorted set of element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueSubgroup {
    pub elements: Vec<u32>,
    pub generators: Vec<u32>,
}

impl GlueSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

/// The structured discriminant group of `Σ(R)`.
#[derive(Clone, Debug)]
pub struct GlueEngine {
    ade: ADEType,
    locals: Vec<LocalGroup>,
    strides: Vec<u64>,
    size: u64,
    scale: i64,
    offsets: Vec<usize>,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    qs: Vec<Vec<i64>>,
    bs: Vec<Vec<i64>>,
    shorts: Vec<Vec<Vec<i64>>>,
    inv_scaled: Vec<Vec<i64>>,
}

impl GlueEngine {
    pub fn new(ade: &ADEType) -> Self {
        let mut cache: HashMap<Component, LocalGroup> = HashMap::new();
        let mut locals: Vec<LocalGroup> = Vec::new();
        for &c in ade.components() {
            let g = cache.entry(c).or_insert_with(|| LocalGroup::new(Some(c))).clone();
            locals.push(g);
        }
        locals.push(LocalGroup::new(None));
        let mut strides = Vec::with_capacity(locals.len());
        let mut size = 1u64;
        for l in &locals {
            strides.push(size);
            size *= l.order as u64;
        }
        let scale = locals.iter().fold(2i64, |a, l| a.lcm(&(l.order as i64)));
        let to_scaled = |x: &Rat| -> i64 {
            let y = x * rat_int(scale);
            assert!(y.is_integer(), "scale clears denominators");
            y.to_integer().to_i64().expect("small norm")
        };
        let qs = locals.iter().map(|l| l.rep_norm.iter().map(|n| to_scaled(n).rem_euclid(2 * scale)).collect()).collect();
        let bs = locals
            .iter()
            .map(|l| {
                let mut t = vec![0i64; l.order * l.order];
                for a in 0..l.order {
                    for b in 0..l.order {
                        t[a * l.order + b] = to_scaled(&l.inner(&l.reps[a], &l.reps[b])).rem_euclid(scale);
                    }
                }
                t
            })
            .collect();
        let shorts = locals.iter().map(|l| l.short_norms.iter().map(|v| v.iter().map(to_scaled).collect()).collect()).collect();
        let mut offsets = ade.offsets();
        offsets.push(ade.mu());
        let blocks = ade.equal_blocks();
        let mut block_of = vec![0usize; ade.components().len()];
        for (b, blk) in blocks.iter().enumerate() {
            for &c in blk {
                block_of[c] = b;
            }
        }
        let inv_scaled = locals
            .iter()
            .map(|l| {
                let r = l.rank;
                let mut t = Vec::with_capacity(r * r);
                for i in 0..r {
                    for j in 0..r {
                        t.push(to_scaled(l.gram_inv.get(i, j)));
                    }
                }
                t
            })
            .collect();
        GlueEngine { ade: ade.clone(), locals, strides, size, scale, offsets, block_of, blocks, qs, bs, shorts, inv_scaled }
    }

    pub fn ade(&self) -> &ADEType {
        &self.ade
    }

    pub fn locals(&self) -> &[LocalGroup] {
        &self.locals
    }

    /// Number of components (without `⟨h⟩`).
    pub fn ncomp(&self) -> usize {
        self.locals.len() - 1
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn digits(&self, x: u32) -> Vec<u16> {
        let mut x = x as u64;
        self.locals
            .iter()
            .map(|l| {
                let d = (x % l.order as u64) as u16;
                x /= l.order as u64;
                d
            })
            .collect()
    }

    pub fn index(&self, d: &[u16]) -> u32 {
        d.iter().zip(&self.strides).map(|(&a, &s)| a as u64 * s).sum::<u64>() as u32
    }

    #[inline]
    fn digit(&self, x: u32, c: usize) -> u16 {
        ((x as u64 / self.strides[c]) % self.locals[c].order as u64) as u16
    }

    pub fn h_digit(&self, x: u32) -> u16 {
        self.digit(x, self.ncomp())
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        for (l, &s) in self.locals.iter().zip(&self.strides) {
            let o = l.order as u64;
            out += l.add((a % o) as u16, (b % o) as u16) as u64 * s;
            a /= o;
            b /= o;
        }
        out as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.map_digits(a, |c, d| self.locals[c].neg(d))
    }

    #[inline]
    fn map_digits(&self, x: u32, f: impl Fn(usize, u16) -> u16) -> u32 {
        let mut x = x as u64;
        let mut out = 0u64;
        for (c, (l, &s)) in self.locals.iter().zip(&self.strides).enumerate() {
            let o = l.order as u64;
            out += f(c, (x % o) as u16) as u64 * s;
            x /= o;
        }
        out as u32
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    /// `q(x)·scale mod 2·scale`.
    pub fn q_scaled(&self, x: u32) -> i64 {
        let mut x = x as u64;
        let mut acc = 0i64;
        for (c, l) in self.locals.iter().enumerate() {
            let o = l.order as u64;
            acc += self.qs[c][(x % o) as usize];
            x /= o;
        }
        acc.rem_euclid(2 * self.scale)
    }

    pub fn q(&self, x: u32) -> Rat {
        Rat::new(Int::from(self.q_scaled(x)), Int::from(self.scale))
    }

    /// `b(x,y)·scale mod scale`.
    pub fn b_scaled(&self, x: u32, y: u32) -> i64 {
        let (mut x, mut y) = (x as u64, y as u64);
        let mut acc = 0i64;
        for (c, l) in self.locals.iter().enumerate() {
            let o = l.order as u64;
            acc += self.bs[c][(x % o) as usize * l.order + (y % o) as usize];
            x /= o;
            y /= o;
        }
        acc.rem_euclid(self.scale)
    }

    pub fn iota(&self, x: u32) -> u32 {
        self.map_digits(x, |c, d| self.locals[c].iota[d as usize])
    }

    /// Concatenated dual coordinates (`h` last) of the representative of `x`.
    pub fn dual_coords(&self, x: u32) -> Vec<i64> {
        let d = self.digits(x);
        let mut out = Vec::with_capacity(self.ade.mu() + 1);
        for (c, l) in self.locals.iter().enumerate() {
            out.extend_from_slice(&l.reps[d[c] as usize]);
        }
        out
    }

    /// `scale · (x, y)` for integral dual-coordinate vectors of `Σ^∨`.
    pub fn inner_scaled(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (c, inv) in self.inv_scaled.iter().enumerate() {
            let o = self.offsets[c];
            let r = self.locals[c].rank;
            for i in 0..r {
                if x[o + i] == 0 {
                    continue;
                }
                for j in 0..r {
                    acc += x[o + i] * inv[i * r + j] * y[o + j];
                }
            }
        }
        acc
    }

    /// `scale · G_c^{-1}` row-major, for each factor (`⟨h⟩` last).
    pub fn inverse_scaled(&self, c: usize) -> &[i64] {
        &self.inv_scaled[c]
    }

    /// Class of an integral vector of `Σ^∨` in dual coordinates.
    pub fn class_of(&self, v: &[i64]) -> u32 {
        let d: Vec<u16> = self
            .locals
            .iter()
            .enumerate()
            .map(|(c, l)| {
                let o = self.offsets[c];
                l.class_of(&v[o..o + l.rank])
            })
            .collect();
        self.index(&d)
    }

    /// Whether `x + Σ` contains a vector `ξ + (h-part)` whose `⟨ℰ⟩^∨`-part
    /// has norm exactly `target_scaled / scale`.
    pub fn coset_hits(&self, x: u32, target_scaled: i64) -> bool {
        let d = self.digits(x);
        let m = self.ncomp();
        // sumset of per-component short norms, pruned below the target
        let mut reach: Vec<i64> = vec![0];
        for c in 0..m {
            let s = &self.shorts[c][d[c] as usize];
            let mut next: Vec<i64> = Vec::with_capacity(reach.len() * s.len());
            for &r in &reach {
                for &n in s {
                    if r + n >= target_scaled {
                        next.push(r + n);
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            if next.is_empty() {
                return false;
            }
            reach = next;
        }
        reach.contains(&target_scaled)
    }

    /// A class with `h`-digit 0 off `⟨ℰ⟩` that contains a root.
    pub fn violates_root(&self, x: u32) -> bool {
        let d = self.digits(x);
        let m = self.ncomp();
        d[m] == 0 && d[..m].iter().any(|&a| a != 0) && self.coset_hits(x, -2 * self.scale)
    }

    /// A class with `h`-digit 1 containing `h/2 + ξ` with `ξ² = −1/2`.
    pub fn violates_isotropic(&self, x: u32) -> bool {
        self.h_digit(x) == 1 && self.coset_hits(x, -self.scale / 2)
    }

    /// Neither vector condition of the realizability criterion fails on `x + Σ`.
    pub fn is_good(&self, x: u32) -> bool {
        !self.violates_root(x) && !self.violates_isotropic(x)
    }

    /// Every element that is isotropic and good.
    pub fn good_isotropic(&self) -> Vec<u32> {
        (1..self.size as u32).filter(|&x| self.q_scaled(x) == 0 && self.is_good(x)).collect()
    }

    /// Sorted closure of `gens`.
    pub fn span(&self, gens: &[u32]) -> Vec<u32> {
        let mut set: HashSet<u32> = HashSet::new();
        set.insert(0);
        let mut frontier = vec![0u32];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        let mut v: Vec<u32> = set.into_iter().collect();
        v.sort_unstable();
        v
    }

    pub fn subgroup(&self, gens: &[u32]) -> GlueSubgroup {
        let elements = self.span(gens);
        let generators = self.minimal_generators(&elements);
        GlueSubgroup { elements, generators }
    }

    /// Greedy generators: the smallest element not yet spanned, repeatedly.
    pub fn minimal_generators(&self, elements: &[u32]) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut spanned: HashSet<u32> = [0u32].into_iter().collect();
        for &x in elements {
            if !spanned.contains(&x) {
                gens.push(x);
                spanned = self.span(&gens).into_iter().collect();
            }
        }
        gens
    }

    pub fn apply(&self, g: &AutElement, x: u32) -> u32 {
        let d = self.digits(x);
        let mut e = d.clone();
        for c in 0..self.ncomp() {
            e[g.perm[c]] = self.locals[c].auts[g.local[c]][d[c] as usize];
        }
        self.index(&e)
    }

    /// The permutation of `ℰ` realizing `g`.
    pub fn root_permutation(&self, g: &AutElement) -> Vec<usize> {
        let mut p = vec![0usize; self.ade.mu()];
        for c in 0..self.ncomp() {
            let a = &self.locals[c].root_auts[g.local[c]];
            for i in 0..self.locals[c].rank {
                p[self.offsets[c] + i] = self.offsets[g.perm[c]] + a[i];
            }
        }
        p
    }

    /// Colour refinement on the bipartite incidence of elements and
    /// components (edge label: the local orbit of the digit).  Returns the
    /// stable component and element colours.
    fn colours(&self, digits: &[Vec<u16>]) -> (Vec<u64>, Vec<u64>) {
        let m = self.ncomp();
        let mut col: Vec<u64> = (0..m).map(|c| self.block_of[c] as u64).collect();
        let mut row: Vec<u64> = digits.iter().map(|d| d[m] as u64).collect();
        let mut classes = (distinct(&col), distinct(&row));
        loop {
            let new_row: Vec<u64> = digits
                .iter()
                .zip(&row)
                .map(|(d, &r)| {
                    let mut nb: Vec<(u64, u16)> =
                        (0..m).filter(|&c| d[c] != 0).map(|c| (col[c], self.locals[c].orbit[d[c] as usize])).collect();
                    nb.sort_unstable();
                    hash_of(&(r, nb))
                })
                .collect();
            let new_col: Vec<u64> = (0..m)
                .map(|c| {
                    let mut nb: Vec<(u64, u16)> = digits
                        .iter()
                        .zip(&new_row)
                        .filter(|(d, _)| d[c] != 0)
                        .map(|(d, &r)| (r, self.locals[c].orbit[d[c] as usize]))
                        .collect();
                    nb.sort_unstable();
                    hash_of(&(col[c], nb))
                })
                .collect();
            row = new_row;
            col = new_col;
            let k = (distinct(&col), distinct(&row));
            if k == classes {
                break;
            }
            classes = k;
        }
        (col, row)
    }

    /// An `Aut(ℰ)`-invariant of a subgroup.
    pub fn invariant(&self, h: &[u32]) -> Vec<u64> {
        let digits: Vec<Vec<u16>> = h.iter().map(|&x| self.digits(x)).collect();
        let (mut col, mut row) = self.colours(&digits);
        col.sort_unstable();
        row.sort_unstable();
        let mut out = vec![h.len() as u64];
        out.extend(col);
        out.extend(row);
        out
    }

    /// Finds `g ∈ Aut(ℰ)` with `g(h1) = h2`.
    pub fn find_equivalence(&self, h1: &[u32], h2: &[u32]) -> Option<AutElement> {
        if h1.len() != h2.len() {
            return None;
        }
        let m = self.ncomp();
        let d1: Vec<Vec<u16>> = h1.iter().map(|&x| self.digits(x)).collect();
        let d2: Vec<Vec<u16>> = h2.iter().map(|&x| self.digits(x)).collect();
        let (col1, _) = self.colours(&d1);
        let (col2, _) = self.colours(&d2);
        let nonzero = |d: &Vec<Vec<u16>>, c: usize| d.iter().any(|e| e[c] != 0);
        let mut nz: Vec<usize> = (0..m).filter(|&c| nonzero(&d1, c)).collect();
        // rarest colours first
        let freq = |x: u64| col1.iter().filter(|&&y| y == x).count();
        nz.sort_by_key(|&c| (freq(col1[c]), col1[c]));
        let nz_count = nz.len();
        let mut order = nz;
        order.extend((0..m).filter(|&c| !nonzero(&d1, c)));
        let targets_nonzero = (0..m).filter(|&c| nonzero(&d2, c)).count();
        if targets_nonzero != nz_count {
            return None;
        }
        let mut st = EqSearch {
            eng: self,
            d1: &d1,
            d2: &d2,
            col1: &col1,
            col2: &col2,
            order: &order,
            nz_count,
            used: vec![false; m],
            perm: vec![usize::MAX; m],
            local: vec![0; m],
        };
        if st.rec(0) {
            // zero columns map to the remaining zero columns in block order
            for k in nz_count..m {
                let c = order[k];
                let b = self.block_of[c];
                let t = self.blocks[b].iter().copied().find(|&t| !st.used[t]).expect("zero column target");
                st.used[t] = true;
                st.perm[c] = t;
                st.local[c] = 0;
            }
            Some(AutElement { perm: st.perm, local: st.local })
        } else {
            None
        }
    }

    pub fn equivalent(&self, h1: &[u32], h2: &[u32]) -> bool {
        self.find_equivalence(h1, h2).is_some()
    }

    /// One representative per `Aut(ℰ)`-orbit of isotropic subgroups all of
    /// whose elements are good, in discovery order (trivial group first).
    pub fn good_isotropic_orbits(&self) -> Vec<GlueSubgroup> {
        let good = self.good_isotropic();
        let mut is_good = vec![false; self.size as usize];
        for &x in &good {
            is_good[x as usize] = true;
        }
        let trivial = GlueSubgroup { elements: vec![0], generators: vec![] };
        let mut all = vec![trivial.clone()];
        let mut level = vec![trivial];
        while !level.is_empty() {
            let mut next: Vec<GlueSubgroup> = Vec::new();
            let mut buckets: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
            let mut seen: HashSet<Vec<u32>> = HashSet::new();
            for h in &level {
                for &x in &good {
                    if h.contains(x) {
                        continue;
                    }
                    if h.generators.iter().any(|&g| self.b_scaled(g, x) != 0) {
                        continue;
                    }
                    // index of ⟨h, x⟩ over h must be prime
                    let mut k = 1usize;
                    let mut y = x;
                    let mut multiples = vec![x];
                    loop {
                        y = self.add(y, x);
                        k += 1;
                        if h.contains(y) {
                            break;
                        }
                        multiples.push(y);
                    }
                    if !is_prime(k) {
                        continue;
                    }
                    let mut elems = h.elements.clone();
                    let mut ok = true;
                    'outer: for &mx in &multiples {
                        for &e in &h.elements {
                            let z = self.add(e, mx);
                            if !is_good[z as usize] {
                                ok = false;
                                break 'outer;
                            }
                            elems.push(z);
                        }
                    }
                    if !ok {
                        continue;
                    }
                    elems.sort_unstable();
                    if !seen.insert(elems.clone()) {
                        continue;
                    }
                    let inv = self.invariant(&elems);
                    let bucket = buckets.entry(inv).or_default();
                    if bucket.iter().any(|&i| self.equivalent(&next[i].elements, &elems)) {
                        continue;
                    }
                    bucket.push(next.len());
                    let generators = self.minimal_generators(&elems);
                    next.push(GlueSubgroup { elements: elems, generators });
                }
            }
            all.extend(next.iter().cloned());
            level = next;
        }
        all
    }

    /// Invariant factors of a subgroup given by its elements.
    pub fn structure(&self, h: &[u32]) -> Vec<u64> {
        let orders: Vec<u64> = h.iter().map(|&x| self.element_order(x) as u64).collect();
        abelian_invariants(&orders)
    }

    /// Every element of the full automorphism group (small groups only).
    pub fn all_automorphisms(&self) -> Vec<AutElement> {
        let m = self.ncomp();
        let mut perms: Vec<Vec<usize>> = vec![(0..m).collect()];
        for blk in &self.blocks {
            let mut next = Vec::new();
            for p in &perms {
                for q in permutations(blk) {
                    let mut r = p.clone();
                    for (i, &c) in blk.iter().enumerate() {
                        r[c] = q[i];
                    }
                    next.push(r);
                }
            }
            perms = next;
        }
        let mut locals: Vec<Vec<usize>> = vec![vec![]];
        for c in 0..m {
            let n = self.locals[c].auts.len();
            let mut next = Vec::new();
            for l in &locals {
                for a in 0..n {
                    let mut r = l.clone();
                    r.push(a);
                    next.push(r);
                }
            }
            locals = next;
        }
        let mut out = Vec::with_capacity(perms.len() * locals.len());
        for p in &perms {
            for l in &locals {
                out.push(AutElement { perm: p.clone(), local: l.clone() });
            }
        }
        out
    }
}

struct EqSearch<'a> {
    eng: &'a GlueEngine,
    d1: &'a [Vec<u16>],
    d2: &'a [Vec<u16>],
    col1: &'a [u64],
    col2: &'a [u64],
    order: &'a [usize],
    nz_count: usize,
    used: Vec<bool>,
    perm: Vec<usize>,
    local: Vec<usize>,
}

impl EqSearch<'_> {
    fn rec(&mut self, k: usize) -> bool {
        if k == self.nz_count {
            return self.projections_match(k);
        }
        let c = self.order[k];
        let b = self.eng.block_of[c];
        for &t in &self.eng.blocks[b] {
            if self.used[t] || self.col1[c] != self.col2[t] {
                continue;
            }
            for a in 0..self.eng.locals[c].auts.len() {
                self.used[t] = true;
                self.perm[c] = t;
                self.local[c] = a;
                if self.projections_match(k + 1) && self.rec(k + 1) {
                    return true;
                }
                self.used[t] = false;
            }
        }
        false
    }

    fn projections_match(&self, k: usize) -> bool {
        let m = self.eng.ncomp();
        let comps = &self.order[..k];
        let p1: HashSet<Vec<u16>> = self
            .d1
            .iter()
            .map(|d| {
                let mut v = Vec::with_capacity(k + 1);
                v.push(d[m]);
                for &c in comps {
                    v.push(self.eng.locals[c].auts[self.local[c]][d[c] as usize]);
                }
                v
            })
            .collect();
        let p2: HashSet<Vec<u16>> = self
            .d2
            .iter()
            .map(|d| {
                let mut v = Vec::with_capacity(k + 1);
                v.push(d[m]);
                for &c in comps {
                    v.push(d[self.perm[c]]);
                }
                v
            })
            .collect();
        p1 == p2
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Invariant factors `d_1 | d_2 | …` (each > 1) of a finite abelian group
/// from the multiset of its element orders.
pub fn abelian_invariants(orders: &[u64]) -> Vec<u64> {
    let n = orders.len() as u64;
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    // per prime: exponents of the cyclic p-factors, largest first
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let mut ranks = vec![0u32];
        let mut k = 1u32;
        loop {
            let pk = p.pow(k);
            let cnt = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let r = log_p(cnt, p);
            ranks.push(r);
            if cnt == p_part(n, p) {
                break;
            }
            k += 1;
        }
        let mut exps = Vec::new();
        for k in 1..ranks.len() {
            let at_least_k = ranks[k] - ranks[k - 1];
            let at_least_k1 = if k + 1 < ranks.len() { ranks[k + 1] - ranks[k] } else { 0 };
            for _ in 0..(at_least_k - at_least_k1) {
                exps.push(k as u32);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push((p, exps));
    }
    let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..len)
        .map(|i| per_prime.iter().map(|(p, e)| e.get(i).map(|&k| p.pow(k)).unwrap_or(1)).product())
        .collect();
    out.reverse();
    out
}

fn p_part(mut n: u64, p: u64) -> u64 {
    let mut r = 1;
    while n % p == 0 {
        n /= p;
        r *= p;
    }
    r
}

fn log_p(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        debug_assert_eq!(n % p, 0);
        n /= p;
        k += 1;
    }
    k
}

/// Glue generators as `Int` dual coordinates (for the generic layers).
pub fn to_int_coords(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eng(s: &str) -> GlueEngine {
        GlueEngine::new(&ADEType::parse(s).unwrap())
    }

    #[test]
    fn a3_2a7_shape() {
        let e = eng("A3+2A7");
        assert_eq!(e.size(), 512);
        // q(1,1,1,1) = -3/4 - 7/8 - 7/8 + 1/2 = -2 ≡ 0
        let x = e.index(&[1, 1, 1, 1]);
        assert_eq!(e.q_scaled(x), 0);
        assert_eq!(e.element_order(x), 8);
    }

    #[test]
    fn invariants_of_small_groups() {
        assert_eq!(abelian_invariants(&[1, 2, 2, 2]), vec![2, 2]);
        assert_eq!(abelian_invariants(&[1, 2, 4, 4]), vec![4]);
        assert_eq!(abelian_invariants(&[1, 3, 3, 2, 6, 6]), vec![6]);
        assert_eq!(abelian_invariants(&[1]), Vec::<u64>::new());
    }

    #[test]
    fn a_generator_is_last_node() {
        let l = LocalGroup::new(Some(Component::a(7)));
        assert_eq!(l.reps[1], vec![0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(l.rep_norm[1], crate::lattice::rat(-7, 8));
    }

    #[test]
    fn e8_local_is_trivial() {
        assert_eq!(LocalGroup::new(Some(Component::e(8))).order, 1);
    }

    #[test]
    fn equivalence_respects_swaps() {
        let e = eng("2A7");
        let a = e.span(&[e.index(&[4, 0, 0])]);
        let b = e.span(&[e.index(&[0, 4, 0])]);
        assert!(e.equivalent(&a, &b));
        let g = e.find_equivalence(&a, &b).unwrap();
        let mut img: Vec<u32> = a.iter().map(|&x| e.apply(&g, x)).collect();
        img.sort_unstable();
        assert_eq!(img, b);
    }
}

fn distinct(v: &[u64]) -> usize {
    v.iter().collect::<HashSet<_>>().len()
}

fn hash_of<T: std::hash::Hash>(x: &T) -> u64 {
    use std::hash::{BuildHasher, BuildHasherDefault};
    BuildHasherDefault::<std::collections::hash_map::DefaultHasher>::default().hash_one(x)
}
