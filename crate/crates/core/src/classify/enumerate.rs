//! Inventory of lattice types, configuration types and lattice Zariski
//! k-ples over all ADE types up to a total rank.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::classes::ClassSets;
use super::profile::{config_fingerprint, profile_with, ConfigFingerprint, SexticProfile};
use super::{lattice_types, LatticeData};
use crate::error::{domain, Result};
use crate::roots::{ADEType, MAX_SEXTIC_MU};

/// Everything computed for one lattice type.
#[derive(Clone, Debug)]
pub struct TypeRecord {
    pub data: LatticeData,
    pub sets: ClassSets,
    pub profile: SexticProfile,
    pub fingerprint: ConfigFingerprint,
}

/// Lattice types of `r` with profiles and fingerprints; `zariski_flag` is
/// set on types sharing a fingerprint with another type.
pub fn classify_ade(r: &ADEType) -> Result<Vec<TypeRecord>> {
    let types = lattice_types(r)?;
    let mut out: Vec<TypeRecord> = types
        .into_par_iter()
        .map(|data| {
            let sets = ClassSets::compute(&data);
            let profile = profile_with(&data, &sets)?;
            let fingerprint = config_fingerprint(&profile, &data);
            Ok(TypeRecord { data, sets, profile, fingerprint })
        })
        .collect::<Result<_>>()?;
    let mut count: BTreeMap<ConfigFingerprint, usize> = BTreeMap::new();
    for t in &out {
        *count.entry(t.fingerprint.clone()).or_default() += 1;
    }
    for t in &mut out {
        t.profile.zariski_flag = count[&t.fingerprint] > 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeSummary {
    pub ade: String,
    pub mu: usize,
    /// Position within the canonical order of the types of `ade`.
    pub index: usize,
    pub g_structure: Vec<u64>,
    pub f_structure: Vec<u64>,
    pub z1: usize,
    pub z2: usize,
    pub degs: Vec<u32>,
    pub fingerprint: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuRow {
    pub mu: usize,
    pub lattice_types: usize,
    pub config_types: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPleMember {
    pub index: usize,
    pub z1: usize,
    pub z2: usize,
    pub g_order: u64,
}

/// Several lattice types in one configuration type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPle {
    pub ade: String,
    pub mu: usize,
    pub fingerprint: String,
    pub members: Vec<KPleMember>,
    /// The orders of `G` differ, so the embeddings are topologically distinct.
    pub g_orders_differ: bool,
    /// Members are pairwise distinguished by `(z₁, z₂)`.
    pub distinguished_by_z: bool,
}

#[derive(Clone, Debug, Default)]
pub struct EnumerateOptions {
    /// Keep one summary per type in the inventory.
    pub keep_types: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Inventory {
    pub max_mu: usize,
    pub rows: Vec<MuRow>,
    pub kples: Vec<KPle>,
    pub types: Vec<TypeSummary>,
}

/// Summaries of the types of one ADE type, with its k-ples.
pub fn enumerate_types(r: &ADEType) -> Result<(Vec<TypeSummary>, Vec<KPle>)> {
    let recs = classify_ade(r)?;
    let ade = r.to_string();
    let types: Vec<TypeSummary> = recs
        .iter()
        .enumerate()
        .map(|(index, t)| TypeSummary {
            ade: ade.clone(),
            mu: r.mu(),
            index,
            g_structure: t.profile.g_structure.clone(),
            f_structure: t.profile.f_structure.clone(),
            z1: t.profile.z1,
            z2: t.profile.z2,
            degs: t.profile.degs.clone(),
            fingerprint: t.fingerprint.0.clone(),
        })
        .collect();
    let kples = group_kples(&types);
    Ok((types, kples))
}

/// k-ples among the summaries of one ADE type: fingerprints shared by more
/// than one type.
pub fn group_kples(types: &[TypeSummary]) -> Vec<KPle> {
    let mut groups: BTreeMap<&str, Vec<&TypeSummary>> = BTreeMap::new();
    for t in types {
        groups.entry(&t.fingerprint).or_default().push(t);
    }
    groups
        .into_iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(fp, v)| {
            let members: Vec<KPleMember> = v
                .iter()
                .map(|t| KPleMember { index: t.index, z1: t.z1, z2: t.z2, g_order: t.g_structure.iter().product() })
                .collect();
            let g_orders_differ = members.iter().any(|m| m.g_order != members[0].g_order);
            let mut zs: Vec<(usize, usize)> = members.iter().map(|m| (m.z1, m.z2)).collect();
            zs.sort_unstable();
            zs.dedup();
            KPle {
                ade: v[0].ade.clone(),
                mu: v[0].mu,
                fingerprint: fp.to_string(),
                distinguished_by_z: zs.len() == members.len(),
                members,
                g_orders_differ,
            }
        })
        .collect()
}

/// Counts of lattice and configuration types for every `μ ≤ max_mu`, and
/// the k-ple inventory.  The result does not depend on the thread count.
pub fn enumerate_all(max_mu: usize, opts: &EnumerateOptions) -> Result<Inventory> {
    if max_mu > MAX_SEXTIC_MU {
        return domain(format!("max_mu {max_mu} exceeds {MAX_SEXTIC_MU}"));
    }
    let ades: Vec<ADEType> = (0..=max_mu).flat_map(ADEType::all_of_rank).collect();
    let per: Vec<(Vec<TypeSummary>, Vec<KPle>)> =
        ades.par_iter().map(enumerate_types).collect::<Result<_>>()?;
    Ok(Inventory::from_parts(max_mu, per, opts))
}

impl Inventory {
    /// Aggregates per-ADE results (from [`enumerate_types`]) in the given order.
    pub fn from_parts(max_mu: usize, per: Vec<(Vec<TypeSummary>, Vec<KPle>)>, opts: &EnumerateOptions) -> Inventory {
        let mut rows: Vec<MuRow> = (0..=max_mu).map(|mu| MuRow { mu, lattice_types: 0, config_types: 0 }).collect();
        let mut inv = Inventory { max_mu, ..Default::default() };
        for (types, kples) in per {
            if let Some(t) = types.first() {
                let row = &mut rows[t.mu];
                row.lattice_types += types.len();
                let mut fps: Vec<&str> = types.iter().map(|t| t.fingerprint.as_str()).collect();
                fps.sort_unstable();
                fps.dedup();
                row.config_types += fps.len();
            }
            inv.kples.extend(kples);
            if opts.keep_types {
                inv.types.extend(types);
            }
        }
        inv.rows = rows;
        inv
    }
}
