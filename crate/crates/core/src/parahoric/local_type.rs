use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde::{Deserialize, Serialize};

use super::filtration::FilteredSpace;
use super::residue::QMatrix;
use crate::error::{Error, Result};
use crate::rational::{self, frac, int, Rational};

/// A rational cocharacter up to Weyl conjugacy.
///
/// `GL` keeps its weights sorted descending (the dominant representative).
/// `SL2(a)` means `a·α∨` and `PSL2(b)` means `b·ϖ∨`, with `⟨α, α∨⟩ = 2` and
/// `⟨α, ϖ∨⟩ = 1`. Coefficients are not reduced into a fundamental window.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLocalType", into = "RawLocalType")]
pub enum LocalType {
    GL(Vec<Rational>),
    SL2(Rational),
    PSL2(Rational),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLocalType {
    group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeff: Option<String>,
}

impl TryFrom<RawLocalType> for LocalType {
    type Error = Error;

    fn try_from(raw: RawLocalType) -> Result<Self> {
        match (raw.group.as_str(), raw.weights, raw.coeff) {
            ("GL", Some(w), None) => LocalType::gl(w.iter().map(|s| rational::parse(s)).collect::<Result<_>>()?),
            ("SL2", None, Some(c)) => Ok(LocalType::SL2(rational::parse(&c)?)),
            ("PSL2", None, Some(c)) => Ok(LocalType::PSL2(rational::parse(&c)?)),
            ("GL", ..) => Err(Error::Invalid("a GL type takes \"weights\" and no \"coeff\"".into())),
            ("SL2" | "PSL2", ..) => {
                Err(Error::Invalid(format!("a {} type takes \"coeff\" and no \"weights\"", raw.group)))
            }
            (g, ..) => Err(Error::Invalid(format!("unknown group {g:?}; expected GL, SL2 or PSL2"))),
        }
    }
}

impl From<LocalType> for RawLocalType {
    fn from(t: LocalType) -> Self {
        match t {
            LocalType::GL(w) => RawLocalType {
                group: "GL".into(),
                weights: Some(w.iter().map(rational::to_string).collect()),
                coeff: None,
            },
            LocalType::SL2(a) => {
                RawLocalType { group: "SL2".into(), weights: None, coeff: Some(rational::to_string(&a)) }
            }
            LocalType::PSL2(b) => {
                RawLocalType { group: "PSL2".into(), weights: None, coeff: Some(rational::to_string(&b)) }
            }
        }
    }
}

impl fmt::Display for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalType::GL(w) => {
                let w: Vec<String> = w.iter().map(rational::to_string).collect();
                write!(f, "GL{}({})", w.len(), w.join(", "))
            }
            LocalType::SL2(a) => write!(f, "({})α∨", rational::to_string(a)),
            LocalType::PSL2(b) => write!(f, "({})ϖ∨", rational::to_string(b)),
        }
    }
}

/// Representations for which a model filtration is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    /// The defining representation of `GL(n)`, or of `SL2`.
    Standard,
    /// The standard representation of the `SL2` cover; for `PSL2(b)` this
    /// uses the lift `(b/2)·α∨`.
    StandardViaLift,
    Adjoint,
}

impl LocalType {
    pub fn gl(mut weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Invalid("GL(n) type needs n ≥ 1 weights".into()));
        }
        weights.sort_by(|a, b| b.cmp(a));
        Ok(LocalType::GL(weights))
    }

    pub fn group_name(&self) -> String {
        match self {
            LocalType::GL(w) => format!("GL{}", w.len()),
            LocalType::SL2(_) => "SL2".into(),
            LocalType::PSL2(_) => "PSL2".into(),
        }
    }

    /// Weights of the standard representation, or of the `SL2` lift.
    fn standard_weights(&self) -> Vec<Rational> {
        match self {
            LocalType::GL(w) => w.clone(),
            LocalType::SL2(a) => vec![a.clone(), -a],
            LocalType::PSL2(b) => {
                let h = b / int(2);
                vec![h.clone(), -h]
            }
        }
    }

    /// Whether the cocharacter lies in the integral cocharacter lattice, i.e.
    /// the fractional part of the type is trivial.
    pub fn is_integral(&self) -> bool {
        match self {
            LocalType::GL(w) => w.iter().all(rational::is_integral),
            LocalType::SL2(c) | LocalType::PSL2(c) => rational::is_integral(c),
        }
    }

    /// Least common denominator of the type data.
    pub fn denominator(&self) -> u64 {
        match self {
            LocalType::GL(w) => w.iter().map(rational::denominator_u64).fold(1, rational::lcm),
            LocalType::SL2(c) | LocalType::PSL2(c) => rational::denominator_u64(c),
        }
    }

    /// Whether every Moy–Prasad grade vanishes.
    pub fn is_central(&self) -> bool {
        mp_grading(self).positive_part().is_empty()
    }

    pub fn coefficient(&self) -> Option<&Rational> {
        match self {
            LocalType::GL(_) => None,
            LocalType::SL2(c) | LocalType::PSL2(c) => Some(c),
        }
    }
}

/// One basis element of the Lie algebra with its Moy–Prasad grade.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedElement {
    pub label: String,
    #[serde(with = "rational::serde_str")]
    pub grade: Rational,
}

/// The grading of the Lie algebra by a rational cocharacter, on a basis of
/// root vectors and Cartan elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MpGrading {
    pub local_type: LocalType,
    pub entries: Vec<GradedElement>,
}

impl MpGrading {
    /// Labels spanning `𝔤_{>0}`.
    pub fn positive_part(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| e.grade > Rational::zero()).map(|e| e.label.as_str()).collect()
    }

    /// Labels spanning `𝔤_{≥a}`.
    pub fn part_geq(&self, a: &Rational) -> Vec<&str> {
        self.entries.iter().filter(|e| &e.grade >= a).map(|e| e.label.as_str()).collect()
    }

    /// `r ↦ dim 𝔤_r` over the nonzero pieces.
    pub fn pieces(&self) -> BTreeMap<Rational, usize> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry(e.grade.clone()).or_insert(0) += 1;
        }
        out
    }

    pub fn grade(&self, label: &str) -> Option<&Rational> {
        self.entries.iter().find(|e| e.label == label).map(|e| &e.grade)
    }

    /// Whether a matrix in the standard representation (of the `SL2` lift for
    /// `PSL2`) lies in `𝔤_{≥b}`: `A_ij ≠ 0 ⇒ w_i − w_j ≥ b`.
    pub fn contains(&self, a: &QMatrix, b: &Rational) -> Result<bool> {
        let w = self.local_type.standard_weights();
        let n = w.len();
        if a.nrows() != n || a.ncols() != n {
            return Err(Error::Invalid(format!(
                "{}x{} matrix for a rank-{n} standard representation",
                a.nrows(),
                a.ncols()
            )));
        }
        Ok((0..n).all(|i| (0..n).all(|j| a[(i, j)].is_zero() || &(&w[i] - &w[j]) >= b)))
    }
}

pub fn mp_grading(t: &LocalType) -> MpGrading {
    let entries = match t {
        LocalType::GL(w) => {
            let n = w.len();
            let mut out = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    out.push(GradedElement { label: format!("E{}{}", i + 1, j + 1), grade: &w[i] - &w[j] });
                }
            }
            out
        }
        LocalType::SL2(_) | LocalType::PSL2(_) => {
            let top = root_grade(t);
            vec![
                GradedElement { label: "e".into(), grade: top.clone() },
                GradedElement { label: "h".into(), grade: Rational::zero() },
                GradedElement { label: "f".into(), grade: -top },
            ]
        }
    };
    MpGrading { local_type: t.clone(), entries }
}

/// `⟨α, θ⟩` for the positive root of `SL2`/`PSL2`.
fn root_grade(t: &LocalType) -> Rational {
    match t {
        LocalType::SL2(a) => a * int(2),
        LocalType::PSL2(b) => b.clone(),
        LocalType::GL(w) => &w[0] - &w[w.len() - 1],
    }
}

/// Weights `⟨χ, θ⟩` of the representation, one per basis vector.
pub fn model_filtration(t: &LocalType, rep: Representation) -> Result<FilteredSpace> {
    use Representation::*;
    let weights = match (t, rep) {
        (LocalType::GL(w), Standard) => w.clone(),
        (LocalType::SL2(_), Standard | StandardViaLift) | (LocalType::PSL2(_), StandardViaLift) => t.standard_weights(),
        (LocalType::GL(w), Adjoint) => {
            let mut out = Vec::with_capacity(w.len() * w.len());
            for a in w {
                for b in w {
                    out.push(a - b);
                }
            }
            out
        }
        (LocalType::SL2(_) | LocalType::PSL2(_), Adjoint) => {
            let top = root_grade(t);
            vec![top.clone(), Rational::zero(), -top]
        }
        (LocalType::GL(_), StandardViaLift) | (LocalType::PSL2(_), Standard) => {
            return Err(Error::IncompatibleRepresentation(format!(
                "{rep:?} is not a representation of {}",
                t.group_name()
            )))
        }
    };
    FilteredSpace::new(weights)
}

/// `(f*θ)_y = e·θ_x` for a point of ramification index `e`.
pub fn pullback_type(t: &LocalType, e: u64) -> Result<LocalType> {
    if e == 0 {
        return Err(Error::Invalid("ramification index must be at least 1".into()));
    }
    let e = int(e as i64);
    Ok(match t {
        LocalType::GL(w) => LocalType::GL(w.iter().map(|x| x * &e).collect()),
        LocalType::SL2(a) => LocalType::SL2(a * e),
        LocalType::PSL2(b) => LocalType::PSL2(b * e),
    })
}

/// `a·α∨ ↦ 2a·ϖ∨`, using `α∨ = 2ϖ∨` in the cocharacters of `PSL2`.
pub fn pushout_sl2_to_psl2(t: &LocalType) -> Result<LocalType> {
    match t {
        LocalType::SL2(a) => Ok(LocalType::PSL2(a * int(2))),
        other => Err(Error::Invalid(format!("pushout to PSL2 needs an SL2 type, got {}", other.group_name()))),
    }
}

/// Local type of a product group, one factor per block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductType {
    pub factors: Vec<LocalType>,
}

impl ProductType {
    /// Block-diagonal model filtration on `V₁ ⊕ V₂ ⊕ …`.
    pub fn model_filtration(&self, reps: &[Representation]) -> Result<FilteredSpace> {
        if reps.len() != self.factors.len() {
            return Err(Error::Invalid(format!("{} representations for {} factors", reps.len(), self.factors.len())));
        }
        let mut weights = Vec::new();
        for (t, &rep) in self.factors.iter().zip(reps) {
            weights.extend(model_filtration(t, rep)?.weights().iter().cloned());
        }
        FilteredSpace::new(weights)
    }
}

/// `θ ⊠ θ′` for the product of the structure groups.
pub fn external_product(types: &[LocalType]) -> Result<ProductType> {
    if types.is_empty() {
        return Err(Error::Invalid("external product of no types".into()));
    }
    Ok(ProductType { factors: types.to_vec() })
}

/// The `SL2` type `(κ/2)·α∨` whose pushout is `κ·ϖ∨`.
pub fn half_lift(kappa: &Rational) -> LocalType {
    LocalType::SL2(kappa * frac(1, 2))
}
