//! Signatures `(g; m₁, …, m_r; s)` of log–orbi curves and their exact invariants.
//!
//! Cusps are not orbifold points of order ∞: they are counted separately in
//! [`Signature::cusps`], and every entry of [`Signature::orders`] is at least 2.

use std::fmt;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, frac, int, Rational};

/// Discrete data of a log–orbi curve. Orders are kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSignature", into = "RawSignature")]
pub struct Signature {
    genus: u64,
    orders: Vec<u64>,
    cusps: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSignature {
    genus: i64,
    #[serde(default)]
    orders: Vec<i64>,
    #[serde(default)]
    cusps: i64,
}

impl TryFrom<RawSignature> for Signature {
    type Error = Error;

    fn try_from(raw: RawSignature) -> Result<Self> {
        if raw.genus < 0 {
            return Err(Error::Invalid(format!("genus must be nonnegative, got {}", raw.genus)));
        }
        if raw.cusps < 0 {
            return Err(Error::Invalid(format!("cusp count must be nonnegative, got {}", raw.cusps)));
        }
        let orders = raw
            .orders
            .iter()
            .map(|&m| if m < 2 { Err(Error::InvalidOrder(m)) } else { Ok(m as u64) })
            .collect::<Result<Vec<_>>>()?;
        Signature::new(raw.genus as u64, orders, raw.cusps as u64)
    }
}

impl From<Signature> for RawSignature {
    fn from(sig: Signature) -> Self {
        RawSignature {
            genus: sig.genus as i64,
            orders: sig.orders.iter().map(|&m| m as i64).collect(),
            cusps: sig.cusps as i64,
        }
    }
}

/// Sign class of the canonical degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::Spherical => "spherical",
            Sector::Euclidean => "euclidean",
            Sector::Hyperbolic => "hyperbolic",
        })
    }
}

/// A special point of a log–orbi curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "order")]
pub enum SpecialPoint {
    Orb(u64),
    Log,
}

impl fmt::Display for SpecialPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialPoint::Orb(m) => write!(f, "orb({m})"),
            SpecialPoint::Log => f.write_str("log"),
        }
    }
}

impl Signature {
    pub fn new(genus: u64, mut orders: Vec<u64>, cusps: u64) -> Result<Self> {
        if let Some(&m) = orders.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidOrder(m as i64));
        }
        orders.sort_unstable();
        Ok(Signature { genus, orders, cusps })
    }

    /// Genus-zero signature with three orbifold points and no cusps.
    pub fn triangle(p: u64, q: u64, r: u64) -> Result<Self> {
        Signature::new(0, vec![p, q, r], 0)
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn cusps(&self) -> u64 {
        self.cusps
    }

    /// Special points in presentation order: orbifold points, then cusps.
    pub fn special_points(&self) -> impl Iterator<Item = SpecialPoint> + '_ {
        self.orders.iter().map(|&m| SpecialPoint::Orb(m)).chain((0..self.cusps).map(|_| SpecialPoint::Log))
    }

    /// `2 − 2g − s − Σ (1 − 1/m_j)`.
    pub fn euler_char(&self) -> Rational {
        let mut chi = int(2) - int(2 * self.genus as i64) - int(self.cusps as i64);
        for &m in &self.orders {
            chi -= int(1) - frac(1, m as i64);
        }
        chi
    }

    /// Degree of the log–orbi canonical bundle, `2g − 2 + s + Σ (1 − 1/m_j)`.
    pub fn canonical_degree(&self) -> Rational {
        let mut deg = int(2 * self.genus as i64) - int(2) + int(self.cusps as i64);
        for &m in &self.orders {
            deg += kappa(SpecialPoint::Orb(m)).expect("orders are validated");
        }
        deg
    }

    pub fn sector(&self) -> Sector {
        match rational::sign(&self.canonical_degree()) {
            std::cmp::Ordering::Less => Sector::Spherical,
            std::cmp::Ordering::Equal => Sector::Euclidean,
            std::cmp::Ordering::Greater => Sector::Hyperbolic,
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.sector() == Sector::Hyperbolic
    }

    pub fn with_order(&self, m: u64) -> Result<Self> {
        let mut orders = self.orders.clone();
        orders.push(m);
        Signature::new(self.genus, orders, self.cusps)
    }

    pub fn with_cusp(&self) -> Self {
        Signature { cusps: self.cusps + 1, ..self.clone() }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; [", self.genus)?;
        for (i, m) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]; {})", self.cusps)
    }
}

pub fn euler_char(sig: &Signature) -> Rational {
    sig.euler_char()
}

pub fn canonical_degree(sig: &Signature) -> Rational {
    sig.canonical_degree()
}

pub fn classify_sector(sig: &Signature) -> Sector {
    sig.sector()
}

/// Local coefficient of the log–orbi canonical bundle: `1 − 1/m` at an orbifold
/// point of order `m`, `1` at a cusp.
pub fn kappa(point: SpecialPoint) -> Result<Rational> {
    match point {
        SpecialPoint::Orb(m) if m < 2 => Err(Error::InvalidOrder(m as i64)),
        SpecialPoint::Orb(m) => Ok(int(1) - frac(1, m as i64)),
        SpecialPoint::Log => Ok(int(1)),
    }
}

/// Sum of local coefficients; equals `canonical_degree − (2g − 2)`.
pub fn boundary_degree(sig: &Signature) -> Rational {
    sig.special_points().map(|p| kappa(p).expect("validated")).fold(Rational::zero(), |acc, k| acc + k)
}
