//! The sets ℒ, 𝒞, 𝒢 of a lattice type, found by bounded search over
//! per-component local parts in dual coordinates.

use super::LatticeData;
use crate::glue::GlueEngine;

/// Role of a class in a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    LineComponent,
    LineLift,
    ConicComponent,
    ConicLift,
    CubicComponent,
    CubicLift,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::LineComponent => "line-component",
            Role::LineLift => "line-lift",
            Role::ConicComponent => "conic-component",
            Role::ConicLift => "conic-lift",
            Role::CubicComponent => "cubic-component",
            Role::CubicLift => "cubic-lift",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        [Role::LineComponent, Role::LineLift, Role::ConicComponent, Role::ConicLift, Role::CubicComponent, Role::CubicLift]
            .into_iter()
            .find(|r| r.as_str() == s)
    }
}

/// All class sets of one lattice type, as dual-coordinate vectors
/// (`h` coordinate last), each list sorted.
#[derive(Clone, Debug, Default)]
pub struct ClassSets {
    pub lines: Vec<Vec<i64>>,
    pub lines_branch: Vec<Vec<i64>>,
    pub lines_lift: Vec<Vec<i64>>,
    /// 𝒞′: before removing the decomposable classes.
    pub conics_prime: Vec<Vec<i64>>,
    pub conics: Vec<Vec<i64>>,
    pub conics_branch: Vec<Vec<i64>>,
    pub conics_lift: Vec<Vec<i64>>,
    pub cubics: Vec<Vec<i64>>,
    pub cubics_branch: Vec<Vec<i64>>,
    pub cubics_lift: Vec<Vec<i64>>,
}

struct Opt {
    /// Dual coordinates of the local part.
    part: Vec<i64>,
    /// `scale ·` its norm (≤ 0).
    norm: i64,
    digit: u16,
}

impl ClassSets {
    pub fn compute(l: &LatticeData) -> ClassSets {
        let e = l.engine();
        let s = e.scale();
        let vs = vsmooth_options(e);
        let lines = search(l, &vs, -5 * s / 2, 1, 1);
        let conics_prime: Vec<Vec<i64>> =
            search(l, &vs, -4 * s, 0, 2).into_iter().filter(|x| e.class_of(x) != 0).collect();
        let conics: Vec<Vec<i64>> =
            conics_prime.iter().filter(|x| !decomposes(e, x, &lines)).cloned().collect();
        let dom = dominant_options(e, 9 * s / 2);
        let cubics: Vec<Vec<i64>> = search(l, &dom, -9 * s / 2, 1, 3)
            .into_iter()
            .filter(|g| lines.iter().all(|x| e.inner_scaled(g, x) >= 0))
            .collect();
        let split = |v: &[Vec<i64>]| -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
            v.iter().cloned().partition(|x| l.iota_dual(x) == *x)
        };
        let (lines_branch, lines_lift) = split(&lines);
        let (conics_branch, conics_lift) = split(&conics);
        let (cubics_branch, cubics_lift) = split(&cubics);
        ClassSets {
            lines,
            lines_branch,
            lines_lift,
            conics_prime,
            conics,
            conics_branch,
            conics_lift,
            cubics,
            cubics_branch,
            cubics_lift,
        }
    }

    pub fn z1(&self) -> usize {
        self.lines_lift.len() / 2
    }

    pub fn z2(&self) -> usize {
        self.conics_lift.len() / 2
    }

    /// Generators of `Θ` beyond `Σ`.
    pub fn theta_vectors(&self) -> Vec<Vec<i64>> {
        if !self.lines_branch.is_empty() || !self.conics_branch.is_empty() {
            self.lines_branch.iter().chain(&self.conics_branch).cloned().collect()
        } else {
            self.cubics_branch.clone()
        }
    }

    pub fn by_role(&self, r: Role) -> &[Vec<i64>] {
        match r {
            Role::LineComponent => &self.lines_branch,
            Role::LineLift => &self.lines_lift,
            Role::ConicComponent => &self.conics_branch,
            Role::ConicLift => &self.conics_lift,
            Role::CubicComponent => &self.cubics_branch,
            Role::CubicLift => &self.cubics_lift,
        }
    }
}

/// One representative per `ι`-pair, with its partner: `(x, ιx)` with `x < ιx`.
pub fn iota_pairs(l: &LatticeData, lifts: &[Vec<i64>]) -> Vec<(Vec<i64>, Vec<i64>)> {
    lifts
        .iter()
        .filter_map(|x| {
            let y = l.iota_dual(x);
            (*x < y).then(|| (x.clone(), y))
        })
        .collect()
}

/// Local options for v-smooth vectors: `0` and each `e_τ^∨`.
fn vsmooth_options(e: &GlueEngine) -> Vec<Vec<Opt>> {
    (0..e.ncomp())
        .map(|c| {
            let loc = &e.locals()[c];
            let r = loc.rank;
            let inv = e.inverse_scaled(c);
            let mut opts = vec![Opt { part: vec![0; r], norm: 0, digit: 0 }];
            for t in 0..r {
                let mut part = vec![0; r];
                part[t] = 1;
                opts.push(Opt { part, norm: inv[t * r + t], digit: loc.basis_class(t) });
            }
            opts
        })
        .collect()
}

/// Local options for dominant weights `Σ n_i e_i^∨` (`n_i ≥ 0`) with
/// `scale · |norm| ≤ bound`.  The inverse Cartan matrices have positive
/// entries, so the norm is monotone in every `n_i`.
fn dominant_options(e: &GlueEngine, bound: i64) -> Vec<Vec<Opt>> {
    (0..e.ncomp())
        .map(|c| {
            let loc = &e.locals()[c];
            let r = loc.rank;
            let inv = e.inverse_scaled(c);
            let norm = |n: &[i64]| -> i64 {
                let mut acc = 0;
                for i in 0..r {
                    for j in 0..r {
                        acc += n[i] * inv[i * r + j] * n[j];
                    }
                }
                acc
            };
            let mut out = Vec::new();
            let mut n = vec![0i64; r];
            fn rec(i: usize, n: &mut Vec<i64>, bound: i64, norm: &dyn Fn(&[i64]) -> i64, out: &mut Vec<Vec<i64>>) {
                if i == n.len() {
                    out.push(n.clone());
                    return;
                }
                loop {
                    rec(i + 1, n, bound, norm, out);
                    n[i] += 1;
                    if -norm(n) > bound {
                        break;
                    }
                }
                n[i] = 0;
            }
            rec(0, &mut n, bound, &norm, &mut out);
            out.into_iter()
                .map(|part| {
                    let nm = norm(&part);
                    let digit = loc.class_of(&part);
                    Opt { part, norm: nm, digit }
                })
                .collect()
        })
        .collect()
}

/// Every `x ∈ Λ` whose local parts come from `opts`, with `⟨ℰ⟩`-norm
/// `target / scale` and `h`-coordinate `h_coord` (class `h_digit`).
fn search(l: &LatticeData, opts: &[Vec<Opt>], target: i64, h_digit: u16, h_coord: i64) -> Vec<Vec<i64>> {
    let e = l.engine();
    let m = e.ncomp();
    // most negative reachable sum from component c onwards
    let mut min_rest = vec![0i64; m + 1];
    for c in (0..m).rev() {
        min_rest[c] = min_rest[c + 1] + opts[c].iter().map(|o| o.norm).min().unwrap_or(0);
    }
    let mut digits = vec![0u16; m + 1];
    digits[m] = h_digit;
    let mut choice = vec![0usize; m];
    let mut out = Vec::new();
    struct Ctx<'a> {
        l: &'a LatticeData,
        opts: &'a [Vec<Opt>],
        min_rest: &'a [i64],
        target: i64,
        h_coord: i64,
    }
    fn rec(ctx: &Ctx, c: usize, sum: i64, digits: &mut Vec<u16>, choice: &mut Vec<usize>, out: &mut Vec<Vec<i64>>) {
        let m = ctx.opts.len();
        if sum < ctx.target || sum + ctx.min_rest[c] > ctx.target {
            return;
        }
        if c == m {
            if sum == ctx.target && ctx.l.glue().contains(ctx.l.engine().index(digits)) {
                let mut v = Vec::with_capacity(ctx.l.mu() + 1);
                for (k, &i) in choice.iter().enumerate() {
                    v.extend_from_slice(&ctx.opts[k][i].part);
                }
                v.push(ctx.h_coord);
                out.push(v);
            }
            return;
        }
        for (i, o) in ctx.opts[c].iter().enumerate() {
            digits[c] = o.digit;
            choice[c] = i;
            rec(ctx, c + 1, sum + o.norm, digits, choice, out);
        }
        digits[c] = 0;
        choice[c] = 0;
    }
    let ctx = Ctx { l, opts, min_rest: &min_rest, target, h_coord };
    rec(&ctx, 0, 0, &mut digits, &mut choice, &mut out);
    out.sort();
    out
}

/// Whether `x − l₁ − l₂ ∈ ⟨ℰ⟩⁺` for some `l₁, l₂ ∈ ℒ` (possibly equal).
fn decomposes(e: &GlueEngine, x: &[i64], lines: &[Vec<i64>]) -> bool {
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i..] {
            let d: Vec<i64> = x.iter().zip(a).zip(b).map(|((p, q), r)| p - q - r).collect();
            if in_positive_cone(e, &d) {
                return true;
            }
        }
    }
    false
}

/// Whether a dual-coordinate vector with zero `h`-part is a nonnegative
/// integral combination of the simple roots.
pub(crate) fn in_positive_cone(e: &GlueEngine, d: &[i64]) -> bool {
    let s = e.scale();
    let offs = e.offsets();
    if d[offs[e.ncomp()]] != 0 {
        return false;
    }
    for c in 0..e.ncomp() {
        let r = e.locals()[c].rank;
        let inv = e.inverse_scaled(c);
        let part = &d[offs[c]..offs[c] + r];
        for i in 0..r {
            // primal coordinates are G⁻¹ d
            let y: i64 = (0..r).map(|j| inv[i * r + j] * part[j]).sum();
            if y % s != 0 || y < 0 {
                return false;
            }
        }
    }
    true
}
