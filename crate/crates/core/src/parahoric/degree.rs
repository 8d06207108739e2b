use std::collections::BTreeMap;

use num::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::filtration::FilteredSpace;
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// The filtration of a bundle's fibre at one marked point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointFiltration {
    pub point: String,
    #[serde(flatten)]
    pub filtration: FilteredSpace,
}

/// Underlying degree plus weighted-flag data at the marked points; enough to
/// evaluate the parahoric degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBundle", into = "RawBundle")]
pub struct ParahoricBundleData {
    rank: usize,
    degree: i64,
    points: Vec<PointFiltration>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    degree: i64,
    #[serde(default)]
    points: Vec<PointFiltration>,
}

impl TryFrom<RawBundle> for ParahoricBundleData {
    type Error = Error;

    fn try_from(raw: RawBundle) -> Result<Self> {
        let rank = match (raw.rank, raw.points.first()) {
            (Some(r), _) => r,
            (None, Some(p)) => p.filtration.dim(),
            (None, None) => return Err(Error::Invalid("bundle data without points needs an explicit rank".into())),
        };
        ParahoricBundleData::new(rank, raw.degree, raw.points)
    }
}

impl From<ParahoricBundleData> for RawBundle {
    fn from(d: ParahoricBundleData) -> Self {
        RawBundle { rank: Some(d.rank), degree: d.degree, points: d.points }
    }
}

impl ParahoricBundleData {
    pub fn new(rank: usize, degree: i64, points: Vec<PointFiltration>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Invalid("rank must be positive".into()));
        }
        for p in &points {
            if p.filtration.dim() != rank {
                return Err(Error::Invalid(format!(
                    "filtration at {:?} has dimension {}, expected rank {rank}",
                    p.point,
                    p.filtration.dim()
                )));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(p) = points.iter().find(|p| !seen.insert(p.point.as_str())) {
            return Err(Error::Invalid(format!("point {:?} listed twice", p.point)));
        }
        Ok(ParahoricBundleData { rank, degree, points })
    }

    /// Convenience constructor from `(point, weights)` pairs.
    pub fn with_points<'a>(degree: i64, points: impl IntoIterator<Item = (&'a str, FilteredSpace)>) -> Result<Self> {
        let points: Vec<PointFiltration> =
            points.into_iter().map(|(p, f)| PointFiltration { point: p.to_string(), filtration: f }).collect();
        let rank = points
            .first()
            .map(|p| p.filtration.dim())
            .ok_or_else(|| Error::Invalid("at least one point is needed to infer the rank".into()))?;
        ParahoricBundleData::new(rank, degree, points)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn points(&self) -> &[PointFiltration] {
        &self.points
    }

    /// `deg E + Σ_x Σ_a a · dim gr_a`.
    pub fn pdeg(&self) -> Rational {
        self.points.iter().fold(int(self.degree), |acc, p| acc + p.filtration.weight_sum())
    }

    fn by_point(&self) -> BTreeMap<&str, &FilteredSpace> {
        self.points.iter().map(|p| (p.point.as_str(), &p.filtration)).collect()
    }

    /// Combines pointwise over the union of marked points, filling absent
    /// points with the trivial filtration.
    fn combine(
        &self,
        other: &ParahoricBundleData,
        rank: usize,
        degree: i64,
        op: impl Fn(&FilteredSpace, &FilteredSpace) -> FilteredSpace,
    ) -> Result<Self> {
        let (a, b) = (self.by_point(), other.by_point());
        let mut ids: Vec<&str> = a.keys().chain(b.keys()).copied().collect();
        ids.sort_unstable();
        ids.dedup();
        let (ta, tb) = (FilteredSpace::trivial(self.rank), FilteredSpace::trivial(other.rank));
        let points = ids
            .into_iter()
            .map(|id| PointFiltration {
                point: id.to_string(),
                filtration: op(a.get(id).copied().unwrap_or(&ta), b.get(id).copied().unwrap_or(&tb)),
            })
            .collect();
        ParahoricBundleData::new(rank, degree, points)
    }

    pub fn direct_sum(&self, other: &ParahoricBundleData) -> Result<Self> {
        let degree = checked(self.degree.checked_add(other.degree))?;
        self.combine(other, self.rank + other.rank, degree, FilteredSpace::direct_sum)
    }

    /// `deg(E⊗F) = rk F · deg E + rk E · deg F`, with convolution filtrations.
    pub fn tensor(&self, other: &ParahoricBundleData) -> Result<Self> {
        let degree = (other.rank as i64)
            .checked_mul(self.degree)
            .zip((self.rank as i64).checked_mul(other.degree))
            .and_then(|(x, y)| x.checked_add(y));
        self.combine(other, self.rank * other.rank, checked(degree)?, FilteredSpace::tensor)
    }

    pub fn dual(&self) -> Self {
        ParahoricBundleData {
            rank: self.rank,
            degree: -self.degree,
            points: self
                .points
                .iter()
                .map(|p| PointFiltration { point: p.point.clone(), filtration: p.filtration.dual() })
                .collect(),
        }
    }

    /// The line `det E = Λ^rk E` with its induced weights.
    pub fn determinant(&self) -> Self {
        ParahoricBundleData {
            rank: 1,
            degree: self.degree,
            points: self
                .points
                .iter()
                .map(|p| PointFiltration {
                    point: p.point.clone(),
                    filtration: FilteredSpace::line(p.filtration.determinant_weight()),
                })
                .collect(),
        }
    }

    /// Pullback along a cover of degree `n`. `profiles` gives the ramification
    /// indices over each marked point; missing indices are unramified sheets.
    /// Each preimage `y` of `x` gets the weights of `x` scaled by `e_y`, named
    /// `x.1, x.2, …` in profile order.
    pub fn pullback(&self, n: u64, profiles: &BTreeMap<String, Vec<u64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("cover degree must be at least 1".into()));
        }
        if let Some(id) = profiles.keys().find(|id| !self.points.iter().any(|p| &p.point == *id)) {
            return Err(Error::Invalid(format!("profile given for unmarked point {id:?}")));
        }
        let mut points = Vec::new();
        for p in &self.points {
            let mut profile = profiles.get(&p.point).cloned().unwrap_or_default();
            if profile.contains(&0) {
                return Err(Error::Invalid(format!("zero ramification index over {:?}", p.point)));
            }
            let total: u64 = profile.iter().sum();
            if total > n {
                return Err(Error::Invalid(format!(
                    "profile over {:?} sums to {total}, more than the degree {n}",
                    p.point
                )));
            }
            profile.extend(std::iter::repeat_n(1, (n - total) as usize));
            for (k, &e) in profile.iter().enumerate() {
                points.push(PointFiltration {
                    point: format!("{}.{}", p.point, k + 1),
                    filtration: p.filtration.scaled(e),
                });
            }
        }
        let degree = checked(i64::try_from(n).ok().and_then(|n| n.checked_mul(self.degree)))?;
        ParahoricBundleData::new(self.rank, degree, points)
    }

    /// Moves every weight into `[0, 1)` by elementary modifications. The
    /// underlying degree absorbs the integral shifts, so `pdeg` is unchanged.
    pub fn normalize_window(&self) -> Result<Self> {
        let mut degree = int(self.degree);
        let mut points = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let (f, shift) = p.filtration.normalize_window();
            degree += shift;
            points.push(PointFiltration { point: p.point.clone(), filtration: f });
        }
        let degree = checked(degree.to_integer().to_i64())?;
        ParahoricBundleData::new(self.rank, degree, points)
    }

    /// `pdeg(det E)`; equals `pdeg(E)` since the weight of `Λ^top` is the sum
    /// of the weights.
    pub fn determinant_pdeg(&self) -> Rational {
        self.determinant().pdeg()
    }

    pub fn is_trivially_weighted(&self) -> bool {
        self.points.iter().all(|p| p.filtration.weights().iter().all(Zero::is_zero))
    }
}

fn checked(v: Option<i64>) -> Result<i64> {
    v.ok_or_else(|| Error::Invalid("degree overflows a 64-bit integer".into()))
}

/// `pdeg(f*E) = deg(f) · pdeg(E)`.
pub fn pullback_pdeg(d: &Rational, deg_f: u64) -> Result<Rational> {
    if deg_f == 0 {
        return Err(Error::Invalid("cover degree must be at least 1".into()));
    }
    Ok(d * int(deg_f as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn fs(w: &[(i64, i64)]) -> FilteredSpace {
        FilteredSpace::new(w.iter().map(|&(p, q)| frac(p, q)).collect()).unwrap()
    }

    #[test]
    fn small_examples() {
        let d = ParahoricBundleData::with_points(0, [("x", fs(&[(1, 2), (-1, 2)]))]).unwrap();
        assert_eq!(d.pdeg(), int(0));
        let d = ParahoricBundleData::with_points(-1, [("x", FilteredSpace::line(frac(3, 7)))]).unwrap();
        assert_eq!(d.pdeg(), frac(-4, 7));
        let d = ParahoricBundleData::with_points(0, [("x", fs(&[(1, 1), (0, 1), (-1, 1)]))]).unwrap();
        assert_eq!(d.pdeg(), int(0));
    }

    #[test]
    fn tensor_and_sum_degrees() {
        let e =
            ParahoricBundleData::with_points(3, [("x", fs(&[(1, 3), (-1, 2)])), ("y", fs(&[(1, 5), (1, 5)]))]).unwrap();
        let f = ParahoricBundleData::with_points(-1, [("x", fs(&[(2, 7), (0, 1), (1, 9)]))]).unwrap();
        let t = e.tensor(&f).unwrap();
        assert_eq!(t.rank(), 6);
        assert_eq!(t.degree(), 3 * 3 + -2);
        assert_eq!(t.pdeg(), int(3) * e.pdeg() + int(2) * f.pdeg());
        assert_eq!(e.direct_sum(&f).unwrap().pdeg(), e.pdeg() + f.pdeg());
        assert_eq!(e.dual().pdeg(), -e.pdeg());
        assert_eq!(e.determinant_pdeg(), e.pdeg());
    }

    #[test]
    fn pullback_scales_pdeg() {
        let e = ParahoricBundleData::with_points(-1, [("x", fs(&[(1, 3), (-1, 3)])), ("y", fs(&[(1, 2), (0, 1)]))])
            .unwrap();
        let profiles = BTreeMap::from([("x".to_string(), vec![3, 3]), ("y".to_string(), vec![2, 2])]);
        let p = e.pullback(6, &profiles).unwrap();
        assert_eq!(p.points().len(), 2 + 4);
        assert_eq!(p.points()[0].filtration.weights(), &[int(1), int(-1)]);
        assert_eq!(p.pdeg(), pullback_pdeg(&e.pdeg(), 6).unwrap());
        assert!(e.pullback(6, &BTreeMap::from([("z".to_string(), vec![2])])).is_err());
        assert!(e.pullback(2, &profiles).is_err());
    }

    #[test]
    fn window_normalisation_keeps_pdeg() {
        let e = ParahoricBundleData::with_points(0, [("x", fs(&[(7, 3), (-5, 4)]))]).unwrap();
        let n = e.normalize_window().unwrap();
        assert_eq!(n.pdeg(), e.pdeg());
        assert_eq!(n.degree(), 2 - 2);
        assert_eq!(n.points()[0].filtration.weights(), &[frac(1, 3), frac(3, 4)]);
    }

    #[test]
    fn pullback_pdeg_multiplies() {
        assert_eq!(pullback_pdeg(&frac(1, 42), 42).unwrap(), int(1));
        assert!(pullback_pdeg(&int(1), 0).is_err());
    }

    #[test]
    fn rejects_rank_mismatch_and_duplicates() {
        assert!(ParahoricBundleData::with_points(0, [("x", fs(&[(1, 1)])), ("y", fs(&[(1, 1), (0, 1)]))]).is_err());
        assert!(ParahoricBundleData::with_points(0, [("x", fs(&[(1, 1)])), ("x", fs(&[(0, 1)]))]).is_err());
    }

    #[test]
    fn json_shape() {
        let d: ParahoricBundleData =
            serde_json::from_str(r#"{"degree":-1,"points":[{"point":"x","weights":["3/7"]}]}"#).unwrap();
        assert_eq!(d.pdeg(), frac(-4, 7));
        let back: ParahoricBundleData = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<ParahoricBundleData>(r#"{"degree":0}"#).is_err());
        assert_eq!(serde_json::from_str::<ParahoricBundleData>(r#"{"degree":2,"rank":3}"#).unwrap().pdeg(), int(2));
    }
}
