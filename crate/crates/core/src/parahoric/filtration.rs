use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::residue::QMatrix;
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

/// A decreasing ℚ-filtration on a finite-dimensional space, split by a basis
/// in which every vector carries one weight: `F_{≥a}` is spanned by the basis
/// vectors of weight at least `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFiltered", into = "RawFiltered")]
pub struct FilteredSpace {
    weights: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawFiltered {
    #[serde(with = "rational::serde_vec")]
    weights: Vec<Rational>,
}

impl TryFrom<RawFiltered> for FilteredSpace {
    type Error = Error;
    fn try_from(raw: RawFiltered) -> Result<Self> {
        FilteredSpace::new(raw.weights)
    }
}

impl From<FilteredSpace> for RawFiltered {
    fn from(f: FilteredSpace) -> Self {
        RawFiltered { weights: f.weights }
    }
}

impl FilteredSpace {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Invalid("a filtered space needs positive dimension".into()));
        }
        Ok(FilteredSpace { weights })
    }

    /// A line of the given weight.
    pub fn line(weight: Rational) -> Self {
        FilteredSpace { weights: vec![weight] }
    }

    /// The trivial filtration (all weights zero).
    pub fn trivial(dim: usize) -> Self {
        FilteredSpace { weights: vec![Rational::zero(); dim.max(1)] }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Basis weights in basis order.
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Weights sorted descending; equal for isomorphic filtered spaces.
    pub fn sorted_weights(&self) -> Vec<Rational> {
        let mut w = self.weights.clone();
        w.sort_by(|a, b| b.cmp(a));
        w
    }

    pub fn same_filtration(&self, other: &FilteredSpace) -> bool {
        self.sorted_weights() == other.sorted_weights()
    }

    pub fn dim_geq(&self, a: &Rational) -> usize {
        self.weights.iter().filter(|w| *w >= a).count()
    }

    pub fn dim_gt(&self, a: &Rational) -> usize {
        self.weights.iter().filter(|w| *w > a).count()
    }

    /// `a ↦ dim gr_a` over the jumps of the filtration.
    pub fn graded_dims(&self) -> BTreeMap<Rational, usize> {
        let mut out = BTreeMap::new();
        for w in &self.weights {
            *out.entry(w.clone()).or_insert(0) += 1;
        }
        out
    }

    /// `Σ_a a · dim gr_a`.
    pub fn weight_sum(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |acc, w| acc + w)
    }

    pub fn scaled(&self, e: u64) -> Self {
        let e = int(e as i64);
        FilteredSpace { weights: self.weights.iter().map(|w| w * &e).collect() }
    }

    pub fn shifted(&self, by: &Rational) -> Self {
        FilteredSpace { weights: self.weights.iter().map(|w| w + by).collect() }
    }

    /// Convolution: `F_{≥c}(E⊗F) = Σ_{a+b≥c} F_{≥a}E ⊗ F_{≥b}F`. Basis order
    /// is `e_i ⊗ f_j` with `i` major.
    pub fn tensor(&self, other: &FilteredSpace) -> Self {
        let mut weights = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.weights {
            for b in &other.weights {
                weights.push(a + b);
            }
        }
        FilteredSpace { weights }
    }

    /// Dual filtration `F_{≥c}(E^∨) = (F_{>−c}E)^⊥`, in the dual basis.
    pub fn dual(&self) -> Self {
        FilteredSpace { weights: self.weights.iter().map(|w| -w).collect() }
    }

    pub fn hom(&self, other: &FilteredSpace) -> Self {
        self.dual().tensor(other)
    }

    pub fn direct_sum(&self, other: &FilteredSpace) -> Self {
        let mut weights = self.weights.clone();
        weights.extend(other.weights.iter().cloned());
        FilteredSpace { weights }
    }

    /// `Λ^k`, basis indexed by increasing `k`-subsets in lexicographic order.
    pub fn exterior_power(&self, k: usize) -> Result<Self> {
        let n = self.dim();
        if k == 0 || k > n {
            return Err(Error::Invalid(format!("exterior power {k} of a {n}-dimensional space")));
        }
        let mut weights = Vec::new();
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            weights.push(subset.iter().fold(Rational::zero(), |acc, &i| acc + &self.weights[i]));
            let Some(pos) = (0..k).rev().find(|&p| subset[p] < n - k + p) else {
                break;
            };
            subset[pos] += 1;
            for q in pos + 1..k {
                subset[q] = subset[q - 1] + 1;
            }
        }
        Ok(FilteredSpace { weights })
    }

    /// Weight of the top exterior power line.
    pub fn determinant_weight(&self) -> Rational {
        self.weight_sum()
    }

    /// Reduces every weight into `[0, 1)`. Returns the normalised filtration
    /// and the integer `Σ ⌊w⌋` by which the underlying lattice is modified.
    pub fn normalize_window(&self) -> (Self, Rational) {
        let mut shift = Rational::zero();
        let weights = self
            .weights
            .iter()
            .map(|w| {
                shift += rational::floor(w);
                rational::fract(w)
            })
            .collect();
        (FilteredSpace { weights }, shift)
    }

    pub fn is_integral(&self) -> bool {
        self.weights.iter().all(rational::is_integral)
    }

    fn check_square(&self, m: &QMatrix) -> Result<()> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::Invalid(format!(
                "{}x{} matrix acting on a {}-dimensional filtered space",
                m.nrows(),
                m.ncols(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Whether `A · F_{≥a} ⊆ F_{≥a+shift}` for all `a`, i.e. every nonzero
    /// entry `A_ij` has `w_i ≥ w_j + shift`.
    pub fn shifts_by(&self, a: &QMatrix, shift: &Rational) -> Result<bool> {
        self.check_square(a)?;
        Ok(self.entries_ok(a, |wi, wj| wi >= &(wj + shift)))
    }

    /// Whether `N · F_{≥a} ⊆ F_{>a}` for all `a`.
    pub fn strictly_raises(&self, n: &QMatrix) -> Result<bool> {
        self.check_square(n)?;
        Ok(self.entries_ok(n, |wi, wj| wi > wj))
    }

    fn entries_ok(&self, m: &QMatrix, ok: impl Fn(&Rational, &Rational) -> bool) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| m[(i, j)].is_zero() || ok(&self.weights[i], &self.weights[j])))
    }

    /// Largest weight minus smallest; zero iff the filtration has one jump.
    pub fn spread(&self) -> Rational {
        let s = self.sorted_weights();
        (&s[0] - &s[s.len() - 1]).abs()
    }
}

pub fn filt_tensor(e: &FilteredSpace, f: &FilteredSpace) -> FilteredSpace {
    e.tensor(f)
}

pub fn filt_dual(e: &FilteredSpace) -> FilteredSpace {
    e.dual()
}

pub fn filt_hom(e: &FilteredSpace, f: &FilteredSpace) -> FilteredSpace {
    e.hom(f)
}

pub fn filt_sum(e: &FilteredSpace, f: &FilteredSpace) -> FilteredSpace {
    e.direct_sum(f)
}
