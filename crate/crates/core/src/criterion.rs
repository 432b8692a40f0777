//! Numerical test for a splitting curve to be pre-Z-splitting:
//! `(deg Γ)²/2 + Σ_P σ_P(Γ) ≤ t_Γ`, with equality exactly in the
//! pre-Z-splitting case.

use num_traits::Zero;

use crate::classify::LatticeData;
use crate::error::{domain, Result};
use crate::lattice::rat;
use crate::roots::Component;
use crate::Rat;

/// A proposed smooth splitting curve not contained in `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCurveSpec {
    pub degree: u32,
    /// `t_Γ = (B̃ · Γ̃⁺)`.
    pub t_gamma: u32,
    /// `(type of P, τ_P(Γ̃⁺))`, with `τ = 0` when `P ∉ Γ`.
    pub incidences: Vec<(Component, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionResult {
    /// Pre-Z-splitting.
    Equality,
    /// Splitting but not pre-Z-splitting.
    StrictInequality,
    /// The inequality fails: no such splitting curve exists.
    Infeasible,
}

impl CriterionResult {
    pub fn as_str(self) -> &'static str {
        match self {
            CriterionResult::Equality => "equality",
            CriterionResult::StrictInequality => "strict-inequality",
            CriterionResult::Infeasible => "infeasible",
        }
    }
}

impl SplitCurveSpec {
    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return domain("degree must be positive");
        }
        for (c, t) in &self.incidences {
            if *t > c.rank {
                return domain(format!("τ = {t} out of range for {c}"));
            }
        }
        Ok(())
    }

    /// `(deg Γ)²/2 + Σ_P σ_P(Γ)`.
    pub fn lhs(&self) -> Result<Rat> {
        self.validate()?;
        let d = self.degree as i64;
        let mut s = rat(d * d, 2);
        for (c, t) in &self.incidences {
            s += c.sigma_p(*t)?;
        }
        Ok(s)
    }
}

pub fn pre_z_split_test(spec: &SplitCurveSpec) -> Result<CriterionResult> {
    let l = spec.lhs()?;
    let t = Rat::from_integer(spec.t_gamma.into());
    Ok(match l.cmp(&t) {
        std::cmp::Ordering::Equal => CriterionResult::Equality,
        std::cmp::Ordering::Less => CriterionResult::StrictInequality,
        std::cmp::Ordering::Greater => CriterionResult::Infeasible,
    })
}

/// The curve data of a v-smooth class `x` of `h`-degree `degree`:
/// `τ_P` from its local parts and `t = (x, ιx)`.
pub fn spec_from_class(l: &LatticeData, x: &[i64], degree: u32) -> Result<SplitCurveSpec> {
    if !l.v_smooth_dual(x) {
        return domain("class is not v-smooth");
    }
    let t = l.inner(x, &l.iota_dual(x));
    if !t.is_integer() || t < Rat::zero() {
        return domain(format!("(x, ιx) = {t} is not a nonnegative integer"));
    }
    let t: u32 = num_traits::ToPrimitive::to_u32(&t.to_integer()).expect("small");
    let incidences = l.ade().components().iter().copied().zip(l.taus(x)).collect();
    Ok(SplitCurveSpec { degree, t_gamma: t, incidences })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_conic() {
        let s = SplitCurveSpec { degree: 2, t_gamma: 0, incidences: vec![(Component::a(2), 1); 6] };
        assert_eq!(pre_z_split_test(&s).unwrap(), CriterionResult::Equality);
    }

    #[test]
    fn triple_tangent_line() {
        let s = SplitCurveSpec { degree: 1, t_gamma: 3, incidences: vec![] };
        assert_eq!(pre_z_split_test(&s).unwrap(), CriterionResult::StrictInequality);
    }

    #[test]
    fn violated_inequality() {
        let s = SplitCurveSpec { degree: 2, t_gamma: 0, incidences: vec![] };
        assert_eq!(pre_z_split_test(&s).unwrap(), CriterionResult::Infeasible);
    }

    #[test]
    fn lift_swap_symmetry() {
        for l in 1..12 {
            for t in 1..=l {
                let a = Component::a(l).sigma_p(t).unwrap();
                let b = Component::a(l).sigma_p(l + 1 - t).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn bad_tau_rejected() {
        let s = SplitCurveSpec { degree: 2, t_gamma: 0, incidences: vec![(Component::a(2), 3)] };
        assert!(pre_z_split_test(&s).is_err());
    }
}
