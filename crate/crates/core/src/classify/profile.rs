//! Profiles (degrees, groups, splitting numbers, classes) and
//! configuration fingerprints.

use std::collections::BTreeMap;

use super::classes::{ClassSets, Role};
use super::{groups_g_f, LatticeData};
use crate::error::{Error, Result};
use crate::glue::GlueEngine;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    /// Dual coordinates over `ℰ^∨ ∪ {h^∨}`.
    pub coords: Vec<i64>,
    pub role: Role,
    pub class_order: usize,
    /// `τ_P` per singular point for v-smooth classes (1-based, 0 when `x_P = 0`).
    pub tau: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SexticProfile {
    pub ade: String,
    pub degs: Vec<u32>,
    pub g_structure: Vec<u64>,
    pub f_structure: Vec<u64>,
    pub z1: usize,
    pub z2: usize,
    pub classes: Vec<ClassInfo>,
    /// Set when the type belongs to a lattice Zariski k-ple.
    pub zariski_flag: bool,
}

impl SexticProfile {
    pub fn g_order(&self) -> u64 {
        self.g_structure.iter().product()
    }

    pub fn f_order(&self) -> u64 {
        self.f_structure.iter().product()
    }

    pub fn classes_with(&self, r: Role) -> impl Iterator<Item = &ClassInfo> {
        self.classes.iter().filter(move |c| c.role == r)
    }
}

/// Degrees of the irreducible components.
pub fn degs(sets: &ClassSets) -> Result<Vec<u32>> {
    let (nl, nc) = (sets.lines_branch.len() as u32, sets.conics_branch.len() as u32);
    if nl == 0 && nc == 0 && !sets.cubics_branch.is_empty() {
        return Ok(vec![3, 3]);
    }
    let used = nl + 2 * nc;
    if used > 6 {
        return Err(Error::Consistency(format!("components of total degree {used}")));
    }
    let mut d: Vec<u32> = std::iter::repeat(1).take(nl as usize).chain(std::iter::repeat(2).take(nc as usize)).collect();
    if used < 6 {
        d.push(6 - used);
    }
    d.sort_unstable();
    Ok(d)
}

pub fn profile(l: &LatticeData) -> Result<SexticProfile> {
    let sets = ClassSets::compute(l);
    profile_with(l, &sets)
}

pub fn profile_with(l: &LatticeData, sets: &ClassSets) -> Result<SexticProfile> {
    let (g, _theta, f) = groups_g_f(l, sets)?;
    let degs = degs(sets)?;
    let mut classes = Vec::new();
    for role in [Role::LineComponent, Role::LineLift, Role::ConicComponent, Role::ConicLift, Role::CubicComponent, Role::CubicLift] {
        let vsmooth = !matches!(role, Role::CubicComponent | Role::CubicLift);
        for x in sets.by_role(role) {
            classes.push(ClassInfo {
                coords: x.clone(),
                role,
                class_order: l.class_order_dual(x)?,
                tau: vsmooth.then(|| l.taus(x)),
            });
        }
    }
    Ok(SexticProfile {
        ade: l.ade().to_string(),
        degs,
        g_structure: g,
        f_structure: f,
        z1: sets.z1(),
        z2: sets.z2(),
        classes,
        zariski_flag: false,
    })
}

/// Combinatorial key of the configuration type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConfigFingerprint(pub String);

impl std::fmt::Display for ConfigFingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Row-permutation count above which rows are sorted instead of minimized over.
const MAX_ROW_PERMS: usize = 5040;

/// Canonical key from the ADE type, the degrees, and the local parts of
/// every component class at every singular point, minimized over `Aut(ℰ)`
/// and over reorderings of components of equal degree.
pub fn config_fingerprint(p: &SexticProfile, l: &LatticeData) -> ConfigFingerprint {
    let e = l.engine();
    let mut groups: Vec<Vec<&Vec<i64>>> = Vec::new();
    for role in [Role::LineComponent, Role::ConicComponent] {
        groups.push(p.classes_with(role).map(|c| &c.coords).collect());
    }
    if p.degs == [3, 3] {
        groups.push(p.classes_with(Role::CubicComponent).map(|c| &c.coords).collect());
    }
    let total: usize = groups.iter().map(|g| factorial(g.len())).product();
    let best = if total > MAX_ROW_PERMS {
        let rows: Vec<&Vec<i64>> = groups
            .iter()
            .flat_map(|g| {
                let mut g = g.clone();
                g.sort();
                g
            })
            .collect();
        canonical_matrix(e, &rows)
    } else {
        let orders: Vec<Vec<Vec<usize>>> = groups.iter().map(|g| permutations(g.len())).collect();
        let mut best: Option<String> = None;
        let mut idx = vec![0usize; groups.len()];
        loop {
            let rows: Vec<&Vec<i64>> =
                groups.iter().enumerate().flat_map(|(k, g)| orders[k][idx[k]].iter().map(move |&i| g[i])).collect();
            let key = canonical_matrix(e, &rows);
            if best.as_ref().map_or(true, |b| key < *b) {
                best = Some(key);
            }
            // odometer over the per-group permutations
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < orders[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        best.unwrap_or_default()
    };
    ConfigFingerprint(format!("{}|{:?}|{}", p.ade, p.degs, best))
}

/// Per point: the column of local parts, minimized over the local diagram
/// automorphisms; columns then sorted within each block of equal components.
fn canonical_matrix(e: &GlueEngine, rows: &[&Vec<i64>]) -> String {
    let offs = e.offsets();
    let mut out = String::new();
    for blk in e.blocks() {
        let mut cols: Vec<Vec<i64>> = blk
            .iter()
            .map(|&c| {
                let loc = &e.locals()[c];
                let r = loc.rank;
                loc.root_auts
                    .iter()
                    .map(|a| {
                        let mut col = Vec::with_capacity(rows.len() * r);
                        for x in rows {
                            let part = &x[offs[c]..offs[c] + r];
                            let mut img = vec![0i64; r];
                            for i in 0..r {
                                img[a[i]] = part[i];
                            }
                            col.extend(img);
                        }
                        col
                    })
                    .min()
                    .unwrap()
            })
            .collect();
        cols.sort();
        out.push('[');
        for c in cols {
            out.push_str(&c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            out.push(';');
        }
        out.push(']');
    }
    out
}

fn factorial(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// `(class order, τ)` data of ι-pairs, brought to a canonical form under
/// `Aut(ℰ)` together with an independent choice of lift in every pair.
/// Each input entry describes one of the two lifts.
pub fn canonical_tau_data(e: &GlueEngine, data: &[(usize, Vec<usize>)]) -> Vec<(usize, Vec<usize>)> {
    let m = e.ncomp();
    let iota_tau = |t: &[usize]| -> Vec<usize> {
        (0..m)
            .map(|c| if t[c] == 0 { 0 } else { inv_index(&e.locals()[c], t[c]) })
            .collect()
    };
    let pairs: Vec<(usize, Vec<usize>, Vec<usize>)> = data.iter().map(|(o, t)| (*o, t.clone(), iota_tau(t))).collect();
    let mut best: Option<Vec<(usize, Vec<usize>)>> = None;
    for g in e.all_automorphisms() {
        let act = |t: &[usize]| -> Vec<usize> {
            let mut out = vec![0usize; m];
            for c in 0..m {
                out[g.perm[c]] = if t[c] == 0 { 0 } else { e.locals()[c].root_auts[g.local[c]][t[c] - 1] + 1 };
            }
            out
        };
        let mut img: Vec<(usize, Vec<usize>)> =
            pairs.iter().map(|(o, a, b)| (*o, act(a).min(act(b)))).collect();
        img.sort();
        if best.as_ref().map_or(true, |b| img < *b) {
            best = Some(img);
        }
    }
    best.unwrap_or_default()
}

fn inv_index(loc: &crate::glue::LocalGroup, t: usize) -> usize {
    let c = loc.component.expect("component");
    c.involution()[t - 1] + 1
}

/// `(class order, τ)` of one lift per ι-pair of the given role.
pub fn tau_data(p: &SexticProfile, l: &LatticeData, role: Role) -> Vec<(usize, Vec<usize>)> {
    let mut seen: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    let mut out = Vec::new();
    for c in p.classes_with(role) {
        if seen.contains_key(&c.coords) {
            continue;
        }
        seen.insert(l.iota_dual(&c.coords), ());
        seen.insert(c.coords.clone(), ());
        out.push((c.class_order, c.tau.clone().unwrap_or_default()));
    }
    out
}
