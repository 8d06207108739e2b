use nalgebra::DMatrix;
use num::Zero;
use serde::{Deserialize, Serialize};

use super::filtration::FilteredSpace;
use super::local_type::{model_filtration, pullback_type, LocalType, Representation};
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

/// Exact rational matrix.
pub type QMatrix = DMatrix<Rational>;

/// Classification of a residue `λθ + N` against the model filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidueFlag {
    Algebraic,
    Log,
    NotAdjusted,
}

impl std::fmt::Display for ResidueFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ResidueFlag::Algebraic => "algebraic",
            ResidueFlag::Log => "log",
            ResidueFlag::NotAdjusted => "not-adjusted",
        })
    }
}

/// Residue of a λ-connection at a marked point, written in a basis adapted to
/// the model filtration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawResidue", into = "RawResidue")]
pub struct ResidueDatum {
    pub lambda: Rational,
    pub local_type: Option<LocalType>,
    pub model: FilteredSpace,
    pub semisimple: QMatrix,
    pub nilpotent: QMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResidue {
    #[serde(with = "rational::serde_str")]
    lambda: Rational,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    local_type: Option<LocalType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rep: Option<Representation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    model: Option<FilteredSpace>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_matrix")]
    semisimple: Option<QMatrix>,
    #[serde(with = "matrix_serde")]
    nilpotent: QMatrix,
}

impl TryFrom<RawResidue> for ResidueDatum {
    type Error = Error;

    fn try_from(raw: RawResidue) -> Result<Self> {
        let model = match (&raw.local_type, raw.model) {
            (Some(t), None) => {
                let rep = raw.rep.unwrap_or(match t {
                    LocalType::GL(_) => Representation::Standard,
                    LocalType::SL2(_) => Representation::Standard,
                    LocalType::PSL2(_) => Representation::Adjoint,
                });
                model_filtration(t, rep)?
            }
            (None, Some(m)) => m,
            (Some(_), Some(_)) => return Err(Error::Invalid("give either \"type\" or \"model\", not both".into())),
            (None, None) => return Err(Error::Invalid("residue needs a \"type\" or a \"model\" filtration".into())),
        };
        let semisimple = match raw.semisimple {
            Some(s) => s,
            None => diagonal(&model, &raw.lambda),
        };
        let mut datum = ResidueDatum::from_parts(raw.lambda, model, semisimple, raw.nilpotent)?;
        datum.local_type = raw.local_type;
        Ok(datum)
    }
}

impl From<ResidueDatum> for RawResidue {
    fn from(r: ResidueDatum) -> Self {
        RawResidue {
            lambda: r.lambda,
            local_type: None,
            rep: None,
            model: Some(r.model),
            semisimple: Some(r.semisimple),
            nilpotent: r.nilpotent,
        }
    }
}

fn diagonal(model: &FilteredSpace, lambda: &Rational) -> QMatrix {
    let w = model.weights();
    QMatrix::from_fn(w.len(), w.len(), |i, j| if i == j { lambda * &w[i] } else { Rational::zero() })
}

impl ResidueDatum {
    /// `λθ + N` on the model filtration of `rep`; the semisimple part is
    /// `diag(λ·w)`.
    pub fn new(lambda: Rational, t: &LocalType, rep: Representation, nilpotent: QMatrix) -> Result<Self> {
        let model = model_filtration(t, rep)?;
        let semisimple = diagonal(&model, &lambda);
        let mut r = ResidueDatum::from_parts(lambda, model, semisimple, nilpotent)?;
        r.local_type = Some(t.clone());
        Ok(r)
    }

    /// Assembles a residue without checking the semisimple part; that check is
    /// part of [`classify_residue`].
    pub fn from_parts(lambda: Rational, model: FilteredSpace, semisimple: QMatrix, nilpotent: QMatrix) -> Result<Self> {
        let n = model.dim();
        for (name, m) in [("semisimple", &semisimple), ("nilpotent", &nilpotent)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::MalformedResidue(format!(
                    "{name} part is {}x{}, model filtration has dimension {n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(ResidueDatum { lambda, local_type: None, model, semisimple, nilpotent })
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn residue(&self) -> QMatrix {
        &self.semisimple + &self.nilpotent
    }

    /// Residue of the tensor product connection: `S⊗1 + 1⊗S′` and
    /// `N⊗1 + 1⊗N′` on the convolution filtration.
    pub fn tensor(&self, other: &ResidueDatum) -> Result<Self> {
        if self.lambda != other.lambda {
            return Err(Error::Invalid(format!(
                "cannot tensor residues with λ = {} and λ = {}",
                self.lambda, other.lambda
            )));
        }
        let (i1, i2) = (QMatrix::identity(self.dim(), self.dim()), QMatrix::identity(other.dim(), other.dim()));
        let kron_sum = |a: &QMatrix, b: &QMatrix| a.kronecker(&i2) + i1.kronecker(b);
        ResidueDatum::from_parts(
            self.lambda.clone(),
            self.model.tensor(&other.model),
            kron_sum(&self.semisimple, &other.semisimple),
            kron_sum(&self.nilpotent, &other.nilpotent),
        )
    }

    /// Residue on the dual bundle: `−Sᵀ` and `−Nᵀ` on the dual filtration.
    pub fn dual(&self) -> Self {
        ResidueDatum {
            lambda: self.lambda.clone(),
            local_type: None,
            model: self.model.dual(),
            semisimple: -self.semisimple.transpose(),
            nilpotent: -self.nilpotent.transpose(),
        }
    }
}

/// Algebraic when `N = 0`, log when `N ≠ 0` strictly raises the model
/// filtration, not adjusted otherwise.
pub fn classify_residue(res: &ResidueDatum) -> Result<ResidueFlag> {
    let expected = diagonal(&res.model, &res.lambda);
    if res.semisimple != expected {
        return Err(Error::MalformedResidue(
            "semisimple part differs from λ times the model weights on the diagonal".into(),
        ));
    }
    if res.nilpotent.iter().all(Zero::is_zero) {
        return Ok(ResidueFlag::Algebraic);
    }
    Ok(if res.model.strictly_raises(&res.nilpotent)? { ResidueFlag::Log } else { ResidueFlag::NotAdjusted })
}

/// Pullback along a point of ramification index `e`: `λθ + N ↦ λ(eθ) + eN`.
pub fn pullback_residue(res: &ResidueDatum, e: u64) -> Result<ResidueDatum> {
    if e == 0 {
        return Err(Error::Invalid("ramification index must be at least 1".into()));
    }
    let k = int(e as i64);
    Ok(ResidueDatum {
        lambda: res.lambda.clone(),
        local_type: res.local_type.as_ref().map(|t| pullback_type(t, e)).transpose()?,
        model: res.model.scaled(e),
        semisimple: &res.semisimple * k.clone(),
        nilpotent: &res.nilpotent * k,
    })
}

/// Rows of `"p/q"` strings.
pub mod matrix_serde {
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    use super::QMatrix;
    use crate::rational;

    pub fn serialize<S: Serializer>(m: &QMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| rational::to_string(&m[(i, j)])).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<QMatrix, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        from_rows(&rows).map_err(D::Error::custom)
    }

    pub fn from_rows(rows: &[Vec<String>]) -> crate::Result<QMatrix> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(crate::Error::Invalid("matrix must be square and nonempty".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            for x in r {
                entries.push(rational::parse(x)?);
            }
        }
        Ok(QMatrix::from_row_iterator(n, n, entries))
    }
}

mod opt_matrix {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{matrix_serde, QMatrix};

    pub fn serialize<S: Serializer>(m: &Option<QMatrix>, s: S) -> Result<S::Ok, S::Error> {
        match m {
            Some(m) => matrix_serde::serialize(m, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<QMatrix>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "matrix_serde")] QMatrix);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}
