//! The worked example for `A3+2A7`: its glue subgroups, the splitting
//! classes `u`, `v`, `w`, and an explicit embedding of the `2A1+4A3`
//! conic originator into `Λ(H₃)`.

use num_traits::Zero;

use crate::classify::LatticeData;
use crate::error::{Error, Result};
use crate::roots::ADEType;
use crate::specialize::{ExtendedLatticeData, GeometricEmbedding};
use crate::{Rat, RatMatrix};

pub const TARGET_ADE: &str = "A3+2A7";
pub const SOURCE_ADE: &str = "2A1+4A3";

/// Glue generators of `H₀ … H₃` over `(t̄₃^∨, ē₇^∨, ē′₇^∨, h̄^∨)`.
pub const H_GENERATORS: [&[[i64; 4]]; 4] = [&[], &[[0, 4, 4, 0]], &[[1, 1, 1, 1]], &[[2, 2, 2, 0]]];
pub const H_ORDERS: [usize; 4] = [1, 2, 8, 4];

pub const U: [i64; 18] = [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 2];
pub const V: [i64; 18] = [1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1];
pub const W: [i64; 18] = [0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 2];

/// Glue generator of the source, `a^∨ + a′^∨ + Σ d^(ν)∨`.
pub const SOURCE_GLUE: [i64; 15] = [1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0];
/// A lift of the splitting conic of the source.
pub const W_PRIME: [i64; 15] = [1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 2];

/// The embedding on dual coordinates, `a = 1/2`, `b = 1/4`, `c = 3/4`;
/// rows `t₁…t₃, e₁…e₇, e′₁…e′₇, h`, columns `a, a′, (b, c, d)^(1…4), h`.
pub const SIGMA_ROWS: &str = "\
1 0 0 0 0 0 0 0 0 0 0 0 0 0 0
-a -a 0 0 0 0 0 0 0 0 0 0 0 0 0
0 1 0 0 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 -b -a -c b a c 0 0 0 0
0 0 0 0 0 0 0 1 0 0 0 0 0 0 0
0 0 0 0 0 0 1 0 0 0 0 0 0 0 0
0 0 0 0 0 b -a -b -b -a b 0 0 0 0
0 0 0 0 0 0 0 0 0 1 0 0 0 0 0
0 0 0 0 0 c a b b -a -b 0 0 0 0
0 0 0 0 0 -c -a -b c a b 0 0 0 0
0 0 0 0 1 0 0 0 0 0 0 0 0 0 0
0 0 b a -b 0 0 0 0 0 0 -b -a -c 0
0 0 0 0 0 0 0 0 0 0 0 0 0 1 0
0 0 -b a b 0 0 0 0 0 0 b a -b 0
0 0 1 0 0 0 0 0 0 0 0 0 0 0 0
0 0 -c -a -b 0 0 0 0 0 0 -b a b 0
0 0 0 0 0 0 0 0 0 0 0 1 0 0 0
0 0 0 0 0 0 0 0 0 0 0 0 0 0 1
";

/// Dual coordinates of a glue element given over the last-node generators
/// of each `A` component and `h^∨`.
pub fn last_node_coords(r: &ADEType, g: &[i64]) -> Vec<i64> {
    let offs = r.offsets();
    let mut v = vec![0i64; r.mu() + 1];
    for (c, comp) in r.components().iter().enumerate() {
        v[offs[c] + comp.rank - 1] = g[c];
    }
    v[r.mu()] = g[r.components().len()];
    v
}

/// `Λ(H_i)` for `A3+2A7`.
pub fn target_lattice(i: usize) -> Result<LatticeData> {
    let r = ADEType::parse(TARGET_ADE)?;
    let gens: Vec<Vec<i64>> = H_GENERATORS[i].iter().map(|g| last_node_coords(&r, g)).collect();
    LatticeData::from_ade_glue(&r, &gens)
}

pub fn source_lattice() -> Result<LatticeData> {
    let r = ADEType::parse(SOURCE_ADE)?;
    LatticeData::from_ade_glue(&r, &[SOURCE_GLUE.to_vec()])
}

pub fn source_extended() -> Result<ExtendedLatticeData> {
    ExtendedLatticeData::new(source_lattice()?, W_PRIME.to_vec())
}

pub fn target_extended() -> Result<ExtendedLatticeData> {
    ExtendedLatticeData::new(target_lattice(3)?, W.to_vec())
}

/// Parses whitespace-separated rows of integers, fractions `p/q`, or the
/// symbols `a`, `b`, `c` (optionally negated).
pub fn parse_matrix(text: &str) -> Result<RatMatrix> {
    let mut rows = Vec::new();
    let mut start = 0;
    for line in text.split_inclusive('\n') {
        let pos = start;
        start += line.len();
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<Rat> = line
            .split_whitespace()
            .map(|tok| parse_entry(tok).ok_or_else(|| Error::Parse { pos, msg: format!("bad entry {tok:?}") }))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Parse { pos: 0, msg: "ragged or empty matrix".into() });
    }
    Ok(RatMatrix::from_rows(rows))
}

fn parse_entry(tok: &str) -> Option<Rat> {
    let (neg, body) = match tok.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, tok),
    };
    let q = |n: i64, d: i64| Rat::new(n.into(), d.into());
    let v = match body {
        "a" => q(1, 2),
        "b" => q(1, 4),
        "c" => q(3, 4),
        _ => match body.split_once('/') {
            Some((n, d)) => {
                let d: i64 = d.parse().ok()?;
                if d == 0 {
                    return None;
                }
                q(n.parse().ok()?, d)
            }
            None => q(body.parse().ok()?, 1),
        },
    };
    Some(if neg && !v.is_zero() { -v } else { v })
}

/// The explicit embedding with its base flags re-checked.
pub fn sigma() -> Result<GeometricEmbedding> {
    GeometricEmbedding::from_matrix(source_lattice()?, target_lattice(3)?, parse_matrix(SIGMA_ROWS)?)
}
