//! JSON documents.  Rationals are `"p/q"` strings (integers without `/q`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use sextic_lattice::classify::{ClassInfo, KPle, LatticeData, Role, SexticProfile, TypeSummary};
use sextic_lattice::specialize::{ExtendedLatticeData, GeometricEmbedding};
use sextic_lattice::{ADEType, Rat};

use crate::CliError;

pub fn rat_str(x: &Rat) -> String {
    x.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rat, CliError> {
    let bad = || CliError::Schema(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

fn int_strs(v: &[i64]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Integral coordinates from rational strings.
pub fn parse_int_coords(v: &[String]) -> Result<Vec<i64>, CliError> {
    v.iter()
        .map(|s| {
            let r = parse_rat(s)?;
            if !r.is_integer() {
                return Err(CliError::Schema(format!("coordinate {s} is not integral")));
            }
            r.to_integer().to_i64().ok_or_else(|| CliError::Schema(format!("coordinate {s} too large")))
        })
        .collect()
}

/// A lattice datum, optionally with a marked lift `v⁺`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDataDoc {
    pub ade: String,
    pub mu: usize,
    /// Glue generators over `ℰ^∨ ∪ {h^∨}`.
    pub glue: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<String>>,
}

impl LatticeDataDoc {
    pub fn from_data(l: &LatticeData) -> Self {
        LatticeDataDoc {
            ade: l.ade().to_string(),
            mu: l.mu(),
            glue: l.glue_generators().iter().map(|g| int_strs(g)).collect(),
            marked: None,
        }
    }

    pub fn from_extended(x: &ExtendedLatticeData) -> Self {
        LatticeDataDoc { marked: Some(int_strs(&x.v_plus)), ..Self::from_data(&x.base) }
    }

    pub fn to_data(&self) -> Result<LatticeData, CliError> {
        let r = ADEType::parse(&self.ade)?;
        if r.mu() != self.mu {
            return Err(CliError::Schema(format!("mu = {} but {} has rank {}", self.mu, self.ade, r.mu())));
        }
        let gens: Vec<Vec<i64>> = self.glue.iter().map(|g| parse_int_coords(g)).collect::<Result<_, _>>()?;
        Ok(LatticeData::from_ade_glue(&r, &gens)?)
    }

    pub fn to_extended(&self) -> Result<Option<ExtendedLatticeData>, CliError> {
        let base = self.to_data()?;
        match &self.marked {
            None => Ok(None),
            Some(v) => Ok(Some(ExtendedLatticeData::new(base, parse_int_coords(v)?)?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub role: String,
    pub coords: Vec<String>,
    pub class_order: usize,
    /// Singular point label → `τ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<BTreeMap<String, usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeDoc {
    pub index: usize,
    pub glue: Vec<Vec<String>>,
    pub g: Vec<u64>,
    pub f: Vec<u64>,
    pub degs: Vec<u32>,
    pub z1: usize,
    pub z2: usize,
    pub zariski_flag: bool,
    pub fingerprint: String,
    pub classes: Vec<ClassDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyDoc {
    pub ade: String,
    pub mu: usize,
    /// Glue of the first type, so that the document is also a valid
    /// lattice-data file.
    pub glue: Vec<Vec<String>>,
    pub version: String,
    pub types: Vec<TypeDoc>,
}

/// Labels of the singular points: `P1:A3`, `P2:A7`, ...
pub fn point_labels(r: &ADEType) -> Vec<String> {
    r.components().iter().enumerate().map(|(i, c)| format!("P{}:{}", i + 1, c)).collect()
}

pub fn profile_to_doc(index: usize, l: &LatticeData, p: &SexticProfile, fingerprint: &str) -> TypeDoc {
    let labels = point_labels(l.ade());
    TypeDoc {
        index,
        glue: l.glue_generators().iter().map(|g| int_strs(g)).collect(),
        g: p.g_structure.clone(),
        f: p.f_structure.clone(),
        degs: p.degs.clone(),
        z1: p.z1,
        z2: p.z2,
        zariski_flag: p.zariski_flag,
        fingerprint: fingerprint.to_string(),
        classes: p
            .classes
            .iter()
            .map(|c| ClassDoc {
                role: c.role.as_str().to_string(),
                coords: int_strs(&c.coords),
                class_order: c.class_order,
                tau: c.tau.as_ref().map(|t| labels.iter().cloned().zip(t.iter().copied()).collect()),
            })
            .collect(),
    }
}

/// Inverse of [`profile_to_doc`] on the profile part.
pub fn profile_from_doc(ade: &str, t: &TypeDoc) -> Result<SexticProfile, CliError> {
    let r = ADEType::parse(ade)?;
    let labels = point_labels(&r);
    let classes = t
        .classes
        .iter()
        .map(|c| {
            let role = Role::parse(&c.role).ok_or_else(|| CliError::Schema(format!("unknown role {:?}", c.role)))?;
            let tau = match &c.tau {
                None => None,
                Some(m) => Some(
                    labels
                        .iter()
                        .map(|k| m.get(k).copied().ok_or_else(|| CliError::Schema(format!("missing τ for {k}"))))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
            };
            Ok(ClassInfo { coords: parse_int_coords(&c.coords)?, role, class_order: c.class_order, tau })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(SexticProfile {
        ade: r.to_string(),
        degs: t.degs.clone(),
        g_structure: t.g.clone(),
        f_structure: t.f.clone(),
        z1: t.z1,
        z2: t.z2,
        classes,
        zariski_flag: t.zariski_flag,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KPleMemberDoc {
    pub index: usize,
    pub z1: usize,
    pub z2: usize,
    pub g_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KPleDoc {
    pub ade: String,
    pub mu: usize,
    pub fingerprint: String,
    pub members: Vec<KPleMemberDoc>,
    pub g_orders_differ: bool,
    pub distinguished_by_z: bool,
}

pub fn kple_doc(k: &KPle) -> KPleDoc {
    KPleDoc {
        ade: k.ade.clone(),
        mu: k.mu,
        fingerprint: k.fingerprint.clone(),
        members: k.members.iter().map(|m| KPleMemberDoc { index: m.index, z1: m.z1, z2: m.z2, g_order: m.g_order }).collect(),
        g_orders_differ: k.g_orders_differ,
        distinguished_by_z: k.distinguished_by_z,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuRowDoc {
    pub mu: usize,
    pub lattice_types: usize,
    pub config_types: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateDoc {
    pub max_mu: usize,
    pub version: String,
    pub rows: Vec<MuRowDoc>,
    pub kples: Vec<KPleDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagsDoc {
    pub isometric: bool,
    pub h_preserving: bool,
    pub monoid_condition: bool,
    pub primitive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked_class_condition: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanishing_h1: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingDoc {
    /// Rows: target dual coordinates; columns: source dual coordinates.
    pub matrix: Vec<Vec<String>>,
    pub flags: FlagsDoc,
    /// `σ(v⁺)` when marked classes were given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked_image: Option<Vec<String>>,
}

impl EmbeddingDoc {
    pub fn new(e: &GeometricEmbedding, marked: Option<&[i64]>) -> Self {
        let f = e.flags;
        EmbeddingDoc {
            matrix: e.matrix.to_rows().iter().map(|r| r.iter().map(rat_str).collect()).collect(),
            flags: FlagsDoc {
                isometric: f.isometric,
                h_preserving: f.h_preserving,
                monoid_condition: f.monoid_condition,
                primitive: f.primitive,
                marked_class_condition: f.marked_class_condition,
                vanishing_h1: f.vanishing_h1,
            },
            marked_image: marked.map(|v| e.apply(v).iter().map(rat_str).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializeDoc {
    pub source: LatticeDataDoc,
    pub target: LatticeDataDoc,
    pub complete: bool,
    pub nodes: u64,
    pub embeddings: Vec<EmbeddingDoc>,
}

impl ClassifyDoc {
    pub fn summaries(&self) -> Vec<TypeSummary> {
        self.types
            .iter()
            .map(|t| TypeSummary {
                ade: self.ade.clone(),
                mu: self.mu,
                index: t.index,
                g_structure: t.g.clone(),
                f_structure: t.f.clone(),
                z1: t.z1,
                z2: t.z2,
                degs: t.degs.clone(),
                fingerprint: t.fingerprint.clone(),
            })
            .collect()
    }
}
