//! ADE conventions: Dynkin numbering, the covering involution, multiplicity
//! parity, smooth-branch classes, the local contributions `σ_P`, and the
//! diagram automorphism group.
//!
//! Numbering of simple roots (1-based in names, 0-based in code):
//!
//! * `A_l`: the chain `e1 - e2 - ... - el`.
//! * `D_m`: `e1` and `e2` both attached to `e3`, then the chain `e3 - e4 - ... - em`.
//! * `E_n`: the chain `e2 - e3 - ... - en` with `e1` attached to `e4`.
//!
//! Simple roots have square `-2`; adjacent roots pair to `+1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::lattice::{rat, rat_int, EvenLattice};
use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    D,
    E,
}

/// One irreducible root system.  Ordering is `(family, rank)`, the canonical
/// component order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
}

impl Component {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
        };
        if !ok {
            return domain(format!("no root system {family:?}{rank}"));
        }
        Ok(Component { family, rank })
    }

    pub fn a(l: usize) -> Self {
        Component::new(Family::A, l).expect("A_l with l >= 1")
    }

    pub fn d(m: usize) -> Self {
        Component::new(Family::D, m).expect("D_m with m >= 4")
    }

    pub fn e(n: usize) -> Self {
        Component::new(Family::E, n).expect("E_6, E_7 or E_8")
    }

    pub fn name(&self) -> String {
        format!("{self}")
    }

    /// Edges of the Dynkin diagram, 0-based.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let r = self.rank;
        match self.family {
            Family::A => (0..r - 1).map(|i| (i, i + 1)).collect(),
            Family::D => {
                let mut e = vec![(1, 2), (0, 2)];
                e.extend((2..r - 1).map(|i| (i, i + 1)));
                e
            }
            Family::E => {
                let mut e: Vec<(usize, usize)> = (1..r - 1).map(|i| (i, i + 1)).collect();
                e.push((0, 3));
                e
            }
        }
    }

    /// Negative-definite Cartan-type Gram matrix.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let r = self.rank;
        let mut g = vec![vec![0i64; r]; r];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = -2;
        }
        for (i, j) in self.edges() {
            g[i][j] = 1;
            g[j][i] = 1;
        }
        g
    }

    /// `|det|` of the Gram matrix, the order of the discriminant group.
    pub fn det(&self) -> u64 {
        match self.family {
            Family::A => self.rank as u64 + 1,
            Family::D => 4,
            Family::E => 9 - self.rank as u64,
        }
    }

    /// The involution induced by the double cover, as a permutation of the
    /// simple roots.
    pub fn involution(&self) -> Vec<usize> {
        let r = self.rank;
        match (self.family, r) {
            (Family::A, _) => (0..r).rev().collect(),
            (Family::D, m) if m % 2 == 1 => {
                let mut p: Vec<usize> = (0..r).collect();
                p.swap(0, 1);
                p
            }
            (Family::D, _) => (0..r).collect(),
            (Family::E, 6) => e6_flip(),
            (Family::E, _) => (0..r).collect(),
        }
    }

    /// Whether the multiplicity of `e_i^∨` (1-based `i`) is even.
    pub fn even_multiplicity(&self, i: usize) -> Result<bool> {
        self.check_index(i)?;
        let r = self.rank;
        Ok(match self.family {
            Family::A => true,
            Family::D if r % 2 == 0 => i % 2 == 0 || i <= 2,
            Family::D => i % 2 == 1 || i <= 2,
            Family::E => match r {
                6 => i != 1,
                7 => ![2, 4, 6].contains(&i),
                _ => ![2, 4, 6, 8].contains(&i),
            },
        })
    }

    /// Dual-basis indices (1-based) that can be classes of smooth local branches.
    pub fn smooth_branch_classes(&self) -> Vec<usize> {
        let r = self.rank;
        match self.family {
            Family::A if r % 2 == 1 => vec![(r + 1) / 2],
            Family::A => vec![],
            Family::D if r % 2 == 0 => vec![1, 2, r],
            Family::D => vec![r],
            Family::E if r == 7 => vec![7],
            Family::E => vec![],
        }
    }

    /// Local contribution `σ_P` for the incidence index `tau` (0 = not on the curve).
    pub fn sigma_p(&self, tau: usize) -> Result<Rat> {
        if tau == 0 {
            return Ok(Rat::zero());
        }
        self.check_index(tau)?;
        let r = self.rank as i64;
        let t = tau as i64;
        Ok(match self.family {
            Family::A => {
                let m = t.min(r + 1 - t);
                rat(-m * m, r + 1)
            }
            Family::D => {
                if tau <= 2 {
                    if r % 2 == 0 {
                        rat(-r, 4)
                    } else {
                        rat(2 - r, 4)
                    }
                } else {
                    // transcribed as printed
                    rat_int(t - r - 1)
                }
            }
            Family::E => {
                let table: &[(i64, i64)] = match r {
                    6 => &[(-2, 1), (-2, 3), (-8, 3), (-6, 1), (-8, 3), (-2, 3)],
                    7 => &[(-7, 2), (-2, 1), (-6, 1), (-12, 1), (-15, 2), (-4, 1), (-3, 2)],
                    _ => &[(-8, 1), (-4, 1), (-14, 1), (-30, 1), (-20, 1), (-12, 1), (-6, 1), (-2, 1)],
                };
                let (n, d) = table[tau - 1];
                rat(n, d)
            }
        })
    }

    /// Every diagram automorphism, identity first.
    pub fn diagram_automorphisms(&self) -> Vec<Vec<usize>> {
        let r = self.rank;
        let id: Vec<usize> = (0..r).collect();
        match (self.family, r) {
            (Family::A, 1) => vec![id],
            (Family::A, _) => vec![id, (0..r).rev().collect()],
            (Family::D, 4) => {
                // S3 on {e1, e2, e4}
                let ends = [0usize, 1, 3];
                let perms = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
                perms
                    .iter()
                    .map(|p| {
                        let mut q = id.clone();
                        for (k, &src) in ends.iter().enumerate() {
                            q[src] = ends[p[k]];
                        }
                        q
                    })
                    .collect()
            }
            (Family::D, _) => {
                let mut s = id.clone();
                s.swap(0, 1);
                vec![id, s]
            }
            (Family::E, 6) => vec![id, e6_flip()],
            (Family::E, _) => vec![id],
        }
    }

    /// Generators of the diagram automorphism group.
    pub fn automorphism_generators(&self) -> Vec<Vec<usize>> {
        let r = self.rank;
        let id: Vec<usize> = (0..r).collect();
        match (self.family, r) {
            (Family::D, 4) => {
                let mut s = id.clone();
                s.swap(0, 1);
                let mut t = id;
                t.swap(1, 3);
                vec![s, t]
            }
            _ => self.diagram_automorphisms().into_iter().skip(1).collect(),
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            return domain(format!("index {i} out of range for {self}"));
        }
        Ok(())
    }
}

fn e6_flip() -> Vec<usize> {
    // e1 fixed, e_i <-> e_{8-i} for i >= 2 (1-based)
    let mut p = vec![0usize; 6];
    for i in 2..=6usize {
        p[i - 1] = 8 - i - 1;
    }
    p
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.family {
            Family::A => 'A',
            Family::D => 'D',
            Family::E => 'E',
        };
        write!(f, "{c}{}", self.rank)
    }
}

/// A multiset of components in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ADEType {
    components: Vec<Component>,
}

/// Largest total rank accepted by the parser (sextic bound).
pub const MAX_SEXTIC_MU: usize = 19;

impl ADEType {
    pub fn new(mut components: Vec<Component>) -> Self {
        components.sort();
        ADEType { components }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn mu(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Offset of each component in the global root index.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.components.len());
        let mut acc = 0;
        for c in &self.components {
            off.push(acc);
            acc += c.rank;
        }
        off
    }

    /// Basis labels: `t1..` style names are not used; each root is `X#k.i`.
    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            for i in 1..=c.rank {
                out.push(format!("{c}#{}.e{i}", k + 1));
            }
        }
        out
    }

    /// Block-diagonal Gram rows of `⟨ℰ⟩`.
    pub fn gram_rows(&self) -> Vec<Vec<i64>> {
        let n = self.mu();
        let mut g = vec![vec![0i64; n]; n];
        for (c, off) in self.components.iter().zip(self.offsets()) {
            let b = c.gram();
            for i in 0..c.rank {
                for j in 0..c.rank {
                    g[off + i][off + j] = b[i][j];
                }
            }
        }
        g
    }

    /// Global involution on `ℰ`.
    pub fn involution(&self) -> Vec<usize> {
        self.lift_local(|c| c.involution())
    }

    fn lift_local(&self, f: impl Fn(&Component) -> Vec<usize>) -> Vec<usize> {
        let mut p = Vec::with_capacity(self.mu());
        for (c, off) in self.components.iter().zip(self.offsets()) {
            p.extend(f(c).into_iter().map(|i| i + off));
        }
        p
    }

    /// Generators of `Aut(ℰ)`: local diagram symmetries and swaps of equal
    /// neighbouring components.
    pub fn aut_generators(&self) -> Vec<Vec<usize>> {
        let n = self.mu();
        let offs = self.offsets();
        let id: Vec<usize> = (0..n).collect();
        let mut gens = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            for g in c.automorphism_generators() {
                let mut p = id.clone();
                for i in 0..c.rank {
                    p[offs[k] + i] = offs[k] + g[i];
                }
                gens.push(p);
            }
        }
        for k in 1..self.components.len() {
            if self.components[k] == self.components[k - 1] {
                let mut p = id.clone();
                for i in 0..self.components[k].rank {
                    p[offs[k] + i] = offs[k - 1] + i;
                    p[offs[k - 1] + i] = offs[k] + i;
                }
                gens.push(p);
            }
        }
        gens
    }

    /// `|Aut(ℰ)|`.
    pub fn aut_order(&self) -> BigInt {
        let mut order = BigInt::one();
        let mut k = 0;
        while k < self.components.len() {
            let c = self.components[k];
            let mut m = 0u64;
            while k < self.components.len() && self.components[k] == c {
                m += 1;
                k += 1;
            }
            let local = BigInt::from(c.diagram_automorphisms().len());
            for i in 1..=m {
                order *= &local * BigInt::from(i);
            }
        }
        order
    }

    /// Indices of components grouped by equal type.
    pub fn equal_blocks(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            match out.last_mut() {
                Some(b) if self.components[b[0]] == *c => b.push(k),
                _ => out.push(vec![k]),
            }
        }
        out
    }

    /// Parses `A3+2A7`-style strings; rejects totals above the sextic bound.
    pub fn parse(s: &str) -> Result<Self> {
        let t = Self::parse_unbounded(s)?;
        if t.mu() > MAX_SEXTIC_MU {
            return Err(Error::Parse {
                pos: s.len(),
                msg: format!("total rank {} exceeds {MAX_SEXTIC_MU}", t.mu()),
            });
        }
        Ok(t)
    }

    /// Like [`ADEType::parse`] without the rank bound.
    pub fn parse_unbounded(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "0" {
            return Ok(ADEType::default());
        }
        let mut comps = Vec::new();
        let bytes = s.as_bytes();
        let mut pos = 0;
        let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
        loop {
            while pos < bytes.len() && bytes[pos] == b' ' {
                pos += 1;
            }
            let start = pos;
            let mut mult = 0usize;
            let mut has_mult = false;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                mult = mult * 10 + (bytes[pos] - b'0') as usize;
                has_mult = true;
                pos += 1;
                if mult > 1000 {
                    return Err(err(start, "multiplicity too large"));
                }
            }
            if has_mult && mult == 0 {
                return Err(err(start, "multiplicity must be positive"));
            }
            let fam = match bytes.get(pos) {
                Some(b'A') => Family::A,
                Some(b'D') => Family::D,
                Some(b'E') => Family::E,
                _ => return Err(err(pos, "expected one of A, D, E")),
            };
            pos += 1;
            let rstart = pos;
            let mut rank = 0usize;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                rank = rank * 10 + (bytes[pos] - b'0') as usize;
                pos += 1;
                if rank > 10_000 {
                    return Err(err(rstart, "rank too large"));
                }
            }
            if pos == rstart {
                return Err(err(rstart, "expected a rank"));
            }
            let c = Component::new(fam, rank).map_err(|_| {
                let msg = match fam {
                    Family::A => "A_l requires l >= 1",
                    Family::D => "D_m requires m >= 4",
                    Family::E => "E_n requires n in {6, 7, 8}",
                };
                err(start, msg)
            })?;
            for _ in 0..if has_mult { mult } else { 1 } {
                comps.push(c);
            }
            while pos < bytes.len() && bytes[pos] == b' ' {
                pos += 1;
            }
            match bytes.get(pos) {
                None => break,
                Some(b'+') => pos += 1,
                Some(_) => return Err(err(pos, "expected '+' between terms")),
            }
        }
        Ok(ADEType::new(comps))
    }

    /// `⟨ℰ⟩` as an even lattice.
    pub fn root_lattice(&self) -> EvenLattice {
        EvenLattice::from_i64(&self.gram_rows(), self.labels()).expect("ADE Gram matrices are even and definite")
    }

    /// `Σ = ⟨ℰ⟩ ⊕ ⟨h⟩` with `h² = 2` as the last basis vector.
    pub fn sigma_lattice(&self) -> EvenLattice {
        let h = EvenLattice::from_i64(&[vec![2]], vec!["h".into()]).expect("⟨2⟩ is even");
        self.root_lattice().direct_sum(&h)
    }

    /// All ADE types of total rank exactly `n`, in canonical order.
    pub fn all_of_rank(n: usize) -> Vec<ADEType> {
        let mut kinds = Vec::new();
        for r in 1..=n {
            kinds.push(Component::a(r));
        }
        for r in 4..=n {
            kinds.push(Component::d(r));
        }
        for r in 6..=n.min(8) {
            kinds.push(Component::e(r));
        }
        kinds.sort();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(kinds: &[Component], start: usize, left: usize, cur: &mut Vec<Component>, out: &mut Vec<ADEType>) {
            if left == 0 {
                out.push(ADEType::new(cur.clone()));
                return;
            }
            for k in start..kinds.len() {
                if kinds[k].rank <= left {
                    cur.push(kinds[k]);
                    rec(kinds, k, left - kinds[k].rank, cur, out);
                    cur.pop();
                }
            }
        }
        rec(&kinds, 0, n, &mut cur, &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for ADEType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut k = 0;
        while k < self.components.len() {
            let c = self.components[k];
            let mut m = 0;
            while k < self.components.len() && self.components[k] == c {
                m += 1;
                k += 1;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if m > 1 {
                write!(f, "{m}")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for ADEType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ADEType::parse(s)
    }
}

/// Applies a permutation `p` (root `i` ↦ root `p[i]`) to a Gram matrix check.
pub fn preserves_gram(g: &[Vec<i64>], p: &[usize]) -> bool {
    (0..g.len()).all(|i| (0..g.len()).all(|j| g[p[i]][p[j]] == g[i][j]))
}

/// Free functions mirroring the table lookups.
pub fn even_multiplicity(c: Component, i: usize) -> Result<bool> {
    c.even_multiplicity(i)
}

pub fn smooth_branch_classes(c: Component) -> Vec<usize> {
    c.smooth_branch_classes()
}

pub fn sigma_p(c: Component, tau: usize) -> Result<Rat> {
    c.sigma_p(tau)
}

pub fn ade_gram(r: &ADEType) -> EvenLattice {
    r.root_lattice()
}

pub fn involution(r: &ADEType) -> Vec<usize> {
    r.involution()
}

pub fn aut_generators(r: &ADEType) -> Vec<Vec<usize>> {
    r.aut_generators()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let t = ADEType::parse("A3+2A7").unwrap();
        assert_eq!(t.components(), &[Component::a(3), Component::a(7), Component::a(7)]);
        assert_eq!(t.to_string(), "A3+2A7");
        assert_eq!(ADEType::parse("3A5").unwrap().mu(), 15);
        assert!(matches!(ADEType::parse("D3"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(ADEType::parse("A3+B2"), Err(Error::Parse { pos: 3, .. })));
        assert!(ADEType::parse("A20").is_err());
        assert_eq!(ADEType::parse("E8+D4+A1").unwrap().to_string(), "A1+D4+E8");
    }

    #[test]
    fn e6_involution_matches_table() {
        let p = Component::e(6).involution();
        assert_eq!(p, vec![0, 5, 4, 3, 2, 1]);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(Component::a(2).sigma_p(1).unwrap(), rat(-1, 3));
        assert_eq!(Component::e(8).sigma_p(8).unwrap(), rat_int(-2));
        assert_eq!(Component::d(5).sigma_p(0).unwrap(), Rat::zero());
    }

    #[test]
    fn rank_counts_small() {
        assert_eq!(ADEType::all_of_rank(4).len(), 6);
        assert_eq!(ADEType::all_of_rank(0).len(), 1);
    }
}
