//! Families of extended lattice data sharing a degree and a class-order.

use rayon::prelude::*;

use super::ExtendedLatticeData;
use crate::classify::{iota_pairs, lattice_types, ClassSets};
use crate::error::{domain, Result};
use crate::glue::GlueEngine;
use crate::roots::{ADEType, MAX_SEXTIC_MU};

/// `scale ·` the `⟨ℰ⟩`-norm of a lift of a splitting curve of degree `n`.
fn target_norm(e: &GlueEngine, n: i64) -> Result<i64> {
    let s = e.scale();
    match n {
        1 => Ok(-5 * s / 2),
        2 => Ok(-4 * s),
        _ => domain(format!("families are built for degrees 1 and 2, not {n}")),
    }
}

/// Whether `R` has a v-smooth class of `h`-degree `n`, the right norm and
/// order `d` whose ι-pair spans a good isotropic subgroup.  Necessary for a
/// lattice type of `R` to carry such a splitting curve.
pub fn admits_class(e: &GlueEngine, n: i64, d: usize) -> Result<bool> {
    let target = target_norm(e, n)?;
    let m = e.ncomp();
    // per component: (norm, digit) for 0 and each e_τ^∨ whose order divides d
    let opts: Vec<Vec<(i64, u16)>> = (0..m)
        .map(|c| {
            let loc = &e.locals()[c];
            let r = loc.rank;
            let inv = e.inverse_scaled(c);
            let mut o = vec![(0i64, 0u16)];
            for t in 0..r {
                let dg = loc.basis_class(t);
                if d % loc.element_order(dg) == 0 {
                    o.push((inv[t * r + t], dg));
                }
            }
            o
        })
        .collect();
    let mut min_rest = vec![0i64; m + 1];
    for c in (0..m).rev() {
        min_rest[c] = min_rest[c + 1] + opts[c].iter().map(|o| o.0).min().unwrap_or(0);
    }
    let mut digits = vec![0u16; m + 1];
    digits[m] = (n % 2) as u16;
    Ok(rec(e, &opts, &min_rest, target, d, 0, 0, &mut digits))
}

#[allow(clippy::too_many_arguments)]
fn rec(e: &GlueEngine, opts: &[Vec<(i64, u16)>], min_rest: &[i64], target: i64, d: usize, c: usize, sum: i64, digits: &mut Vec<u16>) -> bool {
    if sum < target || sum + min_rest[c] > target {
        return false;
    }
    if c == opts.len() {
        if sum != target {
            return false;
        }
        let x = e.index(digits);
        if e.element_order(x) != d {
            return false;
        }
        let span = e.span(&[x, e.iota(x)]);
        return span.iter().all(|&y| y == 0 || (e.q_scaled(y) == 0 && e.is_good(y)));
    }
    for &(nm, dg) in &opts[c] {
        digits[c] = dg;
        if rec(e, opts, min_rest, target, d, c + 1, sum + nm, digits) {
            digits[c] = 0;
            return true;
        }
    }
    digits[c] = 0;
    false
}

/// Extended data of every lattice type of `r` with a Z-splitting curve of
/// degree `n` and class-order `d`, one per ι-pair, in canonical order.
pub fn family_members(r: &ADEType, n: i64, d: usize) -> Result<Vec<ExtendedLatticeData>> {
    let e = GlueEngine::new(r);
    if !admits_class(&e, n, d)? {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for l in lattice_types(r)? {
        let sets = ClassSets::compute(&l);
        let lifts = if n == 1 { &sets.lines_lift } else { &sets.conics_lift };
        for (x, _) in iota_pairs(&l, lifts) {
            if l.class_order_dual(&x)? == d {
                out.push(ExtendedLatticeData::new(l.clone(), x)?);
            }
        }
    }
    Ok(out)
}

/// All members with `μ` in `mus`, sorted by `(μ, ADE type)` and then canonically.
pub fn family(n: i64, d: usize, mus: std::ops::RangeInclusive<usize>) -> Result<Vec<ExtendedLatticeData>> {
    if *mus.end() > MAX_SEXTIC_MU {
        return domain(format!("μ ≤ {MAX_SEXTIC_MU} required"));
    }
    let ades: Vec<ADEType> = mus.flat_map(ADEType::all_of_rank).collect();
    let per: Vec<Vec<ExtendedLatticeData>> =
        ades.par_iter().map(|r| family_members(r, n, d)).collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

/// The members of minimal `μ ≤ max_mu`, scanning `μ` upwards.
pub fn minimal_members(n: i64, d: usize, max_mu: usize) -> Result<Vec<ExtendedLatticeData>> {
    for mu in 0..=max_mu {
        let f = family(n, d, mu..=mu)?;
        if !f.is_empty() {
            return Ok(f);
        }
    }
    Ok(vec![])
}

/// `(minimal members, family)` in one upward scan: the family holds every
/// member with `μ ≤ max_mu`, and also the minimal members when their `μ`
/// exceeds `max_mu`.
pub fn lineage_family(n: i64, d: usize, max_mu: usize) -> Result<(Vec<ExtendedLatticeData>, Vec<ExtendedLatticeData>)> {
    let mut mins: Option<Vec<ExtendedLatticeData>> = None;
    let mut fam = Vec::new();
    for mu in 0..=MAX_SEXTIC_MU {
        if mins.is_some() && mu > max_mu {
            break;
        }
        let f = family(n, d, mu..=mu)?;
        if mins.is_none() && !f.is_empty() {
            mins = Some(f.clone());
        }
        fam.extend(f);
    }
    Ok((mins.unwrap_or_default(), fam))
}
