//! The canonical maximal PSL₂ local-type system of a hyperbolic log–orbi curve
//! and the degree bookkeeping behind its maximality.
//!
//! At every special point the type is `κ·ϖ∨`, the pushout of the SL₂ type
//! `(κ/2)·α∨` of a square root `Θ` of the log–orbi canonical bundle `ω`. The
//! rank-2 model is `Θ ⊕ Θ⁻¹` with Higgs field `Θ → Θ⁻¹ ⊗ ω`.

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::parahoric::{
    mp_grading, pushout_sl2_to_psl2, FilteredSpace, LocalType, ParahoricBundleData, PointFiltration,
};
use crate::rational::{self, frac, Rational};
use crate::signature::{kappa, Signature, SpecialPoint};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalPoint {
    /// `c_j` or `d_k`, matching the presentation generators.
    pub label: String,
    #[serde(rename = "point")]
    pub kind: SpecialPoint,
    #[serde(with = "rational::serde_str")]
    pub kappa: Rational,
    pub psl2_type: LocalType,
    #[serde(with = "rational::serde_str")]
    pub sl2_half_weight: Rational,
    /// Reduced denominator of the PSL₂ coefficient.
    pub denominator: u64,
    pub positive_mp_nonzero: bool,
    /// Every square-root choice of the SL₂ lift pushes out to `κ·ϖ∨` up to
    /// the Weyl group and integral translations.
    pub lift_independent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalTypeSystem {
    pub signature: Signature,
    pub points: Vec<CanonicalPoint>,
}

/// Canonical types `κ_x·ϖ∨` at every special point of a hyperbolic signature.
pub fn canonical_type_system(sig: &Signature) -> Result<CanonicalTypeSystem> {
    require_hyperbolic(sig)?;
    let mut points = Vec::new();
    let (mut j, mut k) = (0, 0);
    for kind in sig.special_points() {
        let label = match kind {
            SpecialPoint::Orb(_) => {
                j += 1;
                format!("c{j}")
            }
            SpecialPoint::Log => {
                k += 1;
                format!("d{k}")
            }
        };
        let kappa = kappa(kind)?;
        let half = &kappa * frac(1, 2);
        let psl2_type = pushout_sl2_to_psl2(&LocalType::SL2(half.clone()))?;
        debug_assert_eq!(psl2_type, LocalType::PSL2(kappa.clone()));
        let denominator = psl2_type.denominator();
        let expected = match kind {
            SpecialPoint::Orb(m) => m,
            SpecialPoint::Log => 1,
        };
        if denominator != expected {
            return Err(Error::Inconsistent(format!(
                "type at {label} has denominator {denominator}, expected {expected}"
            )));
        }
        points.push(CanonicalPoint {
            label,
            kind,
            positive_mp_nonzero: !mp_grading(&psl2_type).positive_part().is_empty(),
            lift_independent: lift_independent(&kappa)?,
            kappa,
            psl2_type,
            sl2_half_weight: half,
            denominator,
        });
    }
    Ok(CanonicalTypeSystem { signature: sig.clone(), points })
}

/// Square roots of a weight-`κ` line have local weight `w` with `2w ≡ κ`
/// mod ℤ, up to sign; all of them must push out to `±κ` mod ℤ.
fn lift_independent(kappa: &Rational) -> Result<bool> {
    let half = kappa * frac(1, 2);
    let lifts = [half.clone(), -&half, &half + frac(1, 2), -(&half + frac(1, 2))];
    for w in lifts {
        let LocalType::PSL2(b) = pushout_sl2_to_psl2(&LocalType::SL2(w))? else {
            unreachable!("pushout of an SL2 type is a PSL2 type");
        };
        let same = rational::is_integral(&(&b - kappa)) || rational::is_integral(&(&b + kappa));
        if !same {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_hyperbolic(sig: &Signature) -> Result<()> {
    if sig.is_hyperbolic() {
        Ok(())
    } else {
        Err(Error::NotHyperbolic(format!("{sig} ({})", sig.sector())))
    }
}

/// Degree bookkeeping for the canonical rank-2 model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximalityReport {
    pub signature: Signature,
    #[serde(with = "rational::serde_str")]
    pub deg_omega: Rational,
    #[serde(with = "rational::serde_str")]
    pub pardeg_theta: Rational,
    #[serde(with = "rational::serde_str")]
    pub pardeg_theta_inv_omega: Rational,
    /// `pardeg(Θ⊗Θ) = deg ω`.
    pub theta_squares_to_omega: bool,
    /// The Higgs entry `Θ → Θ⁻¹⊗ω` is an isomorphism at the level of degrees.
    pub higgs_degree_equality: bool,
    #[serde(with = "rational::serde_str")]
    pub rank2_pdeg: Rational,
    /// `pardeg(Θ) = ½ deg ω`.
    pub maximal: bool,
}

/// Line bundle data with underlying degree `d` and weight `w(κ_x)` at every
/// special point.
fn weighted_line(sig: &Signature, degree: i64, weight: impl Fn(&Rational) -> Rational) -> Result<ParahoricBundleData> {
    let system = canonical_type_system(sig)?;
    let points = system
        .points
        .iter()
        .map(|p| PointFiltration { point: p.label.clone(), filtration: FilteredSpace::line(weight(&p.kappa)) })
        .collect();
    ParahoricBundleData::new(1, degree, points)
}

pub fn maximality_certificate(sig: &Signature) -> Result<MaximalityReport> {
    require_hyperbolic(sig)?;
    let g = sig.genus() as i64;
    let theta = weighted_line(sig, g - 1, |k| k * frac(1, 2))?;
    let omega = weighted_line(sig, 2 * g - 2, Clone::clone)?;

    let deg_omega = sig.canonical_degree();
    debug_assert_eq!(omega.pdeg(), deg_omega);
    let pardeg_theta = theta.pdeg();
    let pardeg_theta_inv_omega = theta.dual().tensor(&omega)?.pdeg();
    let rank2_pdeg = theta.direct_sum(&theta.dual())?.pdeg();
    let theta_squares_to_omega = theta.tensor(&theta)?.pdeg() == deg_omega;
    let higgs_degree_equality = pardeg_theta == pardeg_theta_inv_omega;
    let maximal = pardeg_theta == &deg_omega * frac(1, 2) && pardeg_theta.is_positive();
    Ok(MaximalityReport {
        signature: sig.clone(),
        deg_omega,
        pardeg_theta,
        pardeg_theta_inv_omega,
        theta_squares_to_omega,
        higgs_degree_equality,
        rank2_pdeg,
        maximal,
    })
}

/// All degree identities of the report hold.
pub fn is_balanced(report: &MaximalityReport) -> bool {
    report.rank2_pdeg.is_zero() && report.higgs_degree_equality && report.theta_squares_to_omega
}
