//! Orbifold models over a fixed coarse curve, ordered by divisibility of
//! stabilizer orders, and the étale resolution of ramified covers.
//!
//! A model is an order function on opaque point ids; points not listed have
//! order 1. Refinement means the coarse order divides the fine order at every
//! point, and the join is the pointwise lcm.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{low_index_subgroups_with_budget, presentation, OrbiPresentation, DEFAULT_SEARCH_BUDGET};
use crate::rational::lcm;
use crate::signature::{Sector, Signature};

/// Upper bound on the number of models [`enumerate_models`] will produce.
pub const MAX_ENUMERATED_MODELS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct OrbifoldModel {
    coarse_genus: u64,
    orders: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(alias = "genus")]
    coarse_genus: u64,
    #[serde(default)]
    orders: BTreeMap<String, u64>,
}

impl TryFrom<RawModel> for OrbifoldModel {
    type Error = Error;
    fn try_from(raw: RawModel) -> Result<Self> {
        OrbifoldModel::new(raw.coarse_genus, raw.orders)
    }
}

impl From<OrbifoldModel> for RawModel {
    fn from(m: OrbifoldModel) -> Self {
        RawModel { coarse_genus: m.coarse_genus, orders: m.orders }
    }
}

impl OrbifoldModel {
    pub fn new(coarse_genus: u64, orders: BTreeMap<String, u64>) -> Result<Self> {
        if let Some((x, &m)) = orders.iter().find(|(_, &m)| m < 2) {
            return Err(Error::Invalid(format!("order {m} at point {x:?}; marked points need order ≥ 2")));
        }
        Ok(OrbifoldModel { coarse_genus, orders })
    }

    /// The model with no orbifold points.
    pub fn trivial(coarse_genus: u64) -> Self {
        OrbifoldModel { coarse_genus, orders: BTreeMap::new() }
    }

    pub fn from_pairs<'a>(coarse_genus: u64, pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Result<Self> {
        OrbifoldModel::new(coarse_genus, pairs.into_iter().map(|(x, m)| (x.to_string(), m)).collect())
    }

    /// Builds a model from a list of orders, dropping entries equal to 1.
    fn from_raw_orders(coarse_genus: u64, orders: BTreeMap<String, u64>) -> Self {
        OrbifoldModel { coarse_genus, orders: orders.into_iter().filter(|&(_, m)| m >= 2).collect() }
    }

    pub fn coarse_genus(&self) -> u64 {
        self.coarse_genus
    }

    pub fn orders(&self) -> &BTreeMap<String, u64> {
        &self.orders
    }

    pub fn order_at(&self, x: &str) -> u64 {
        self.orders.get(x).copied().unwrap_or(1)
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.coarse_genus, self.orders.values().copied().collect(), 0).expect("orders are at least 2")
    }

    pub fn sector(&self) -> Sector {
        self.signature().sector()
    }

    fn same_genus(&self, other: &OrbifoldModel) -> Result<()> {
        if self.coarse_genus != other.coarse_genus {
            return Err(Error::Invalid(format!(
                "models over coarse curves of genus {} and {}",
                self.coarse_genus, other.coarse_genus
            )));
        }
        Ok(())
    }

    fn points_with<'a>(&'a self, other: &'a OrbifoldModel) -> BTreeSet<&'a str> {
        self.orders.keys().chain(other.orders.keys()).map(String::as_str).collect()
    }
}

/// Whether `coarse` divides `fine` at every point.
pub fn refines(fine: &OrbifoldModel, coarse: &OrbifoldModel) -> Result<bool> {
    fine.same_genus(coarse)?;
    Ok(fine.points_with(coarse).into_iter().all(|x| fine.order_at(x).is_multiple_of(coarse.order_at(x))))
}

/// Pointwise lcm: the least model refining both.
pub fn common_refinement(a: &OrbifoldModel, b: &OrbifoldModel) -> Result<OrbifoldModel> {
    a.same_genus(b)?;
    let orders = a.points_with(b).into_iter().map(|x| (x.to_string(), lcm(a.order_at(x), b.order_at(x)))).collect();
    Ok(OrbifoldModel::from_raw_orders(a.coarse_genus, orders))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchPoint {
    pub point: String,
    pub profile: Vec<u64>,
    /// Route this point to a cusp of the target instead of an orbifold point.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub cusp: bool,
}

/// A branched cover `Y → C` of degree `n`, described by its ramification
/// profiles over the branch points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCover", into = "RawCover")]
pub struct RamifiedCoverData {
    degree: u64,
    branches: Vec<BranchPoint>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCover {
    degree: u64,
    branches: Vec<BranchPoint>,
}

impl TryFrom<RawCover> for RamifiedCoverData {
    type Error = Error;
    fn try_from(raw: RawCover) -> Result<Self> {
        RamifiedCoverData::new(raw.degree, raw.branches)
    }
}

impl From<RamifiedCoverData> for RawCover {
    fn from(c: RamifiedCoverData) -> Self {
        RawCover { degree: c.degree, branches: c.branches }
    }
}

impl RamifiedCoverData {
    pub fn new(degree: u64, branches: Vec<BranchPoint>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Invalid("cover degree must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        for b in &branches {
            if !seen.insert(b.point.as_str()) {
                return Err(Error::Invalid(format!("branch point {:?} listed twice", b.point)));
            }
            if b.profile.contains(&0) {
                return Err(Error::Invalid(format!("zero ramification index over {:?}", b.point)));
            }
            let total: u64 = b.profile.iter().sum();
            if total != degree {
                return Err(Error::Invalid(format!(
                    "profile over {:?} sums to {total}, not the degree {degree}",
                    b.point
                )));
            }
            if !b.cusp && b.profile.iter().all(|&e| e == 1) {
                return Err(Error::Invalid(format!("point {:?} is not a branch point (all e = 1)", b.point)));
            }
        }
        Ok(RamifiedCoverData { degree, branches })
    }

    /// Convenience constructor for orbifold branch points only.
    pub fn from_profiles<'a>(degree: u64, profiles: impl IntoIterator<Item = (&'a str, Vec<u64>)>) -> Result<Self> {
        let branches =
            profiles.into_iter().map(|(p, e)| BranchPoint { point: p.to_string(), profile: e, cusp: false }).collect();
        RamifiedCoverData::new(degree, branches)
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn branches(&self) -> &[BranchPoint] {
        &self.branches
    }
}

/// Target orders making a branched cover an orbifold covering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Resolution {
    /// `m_x` at each orbifold branch point.
    pub target: BTreeMap<String, u64>,
    /// `m_y = m_x / e_y` for each preimage, in profile order; 1 means the
    /// preimage is not an orbifold point.
    pub sources: BTreeMap<String, Vec<u64>>,
    /// Branch points routed to cusps; every preimage is a cusp.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub cusps: BTreeMap<String, usize>,
}

impl Resolution {
    pub fn target_model(&self, coarse_genus: u64) -> OrbifoldModel {
        OrbifoldModel::from_raw_orders(coarse_genus, self.target.clone())
    }

    /// `e_y · m_y = m_x` at every preimage.
    pub fn is_etale(&self, cover: &RamifiedCoverData) -> bool {
        cover.branches.iter().filter(|b| !b.cusp).all(|b| {
            let (Some(&m), Some(src)) = (self.target.get(&b.point), self.sources.get(&b.point)) else {
                return false;
            };
            src.len() == b.profile.len() && b.profile.iter().zip(src).all(|(e, my)| e * my == m)
        })
    }
}

/// `m_x = lcm{e_y}`: the minimal choice.
pub fn resolve_ramification(cover: &RamifiedCoverData) -> Result<Resolution> {
    resolve_with_multipliers(cover, &BTreeMap::new())
}

/// `m_x = k_x · lcm{e_y}` for the given multipliers (default 1), which is
/// also a valid orbifold étale model.
pub fn resolve_with_multipliers(cover: &RamifiedCoverData, multipliers: &BTreeMap<String, u64>) -> Result<Resolution> {
    if let Some(x) = multipliers.keys().find(|x| !cover.branches.iter().any(|b| &b.point == *x)) {
        return Err(Error::Invalid(format!("multiplier given for unknown point {x:?}")));
    }
    let mut res = Resolution { target: BTreeMap::new(), sources: BTreeMap::new(), cusps: BTreeMap::new() };
    for b in &cover.branches {
        if b.cusp {
            res.cusps.insert(b.point.clone(), b.profile.len());
            continue;
        }
        let k = multipliers.get(&b.point).copied().unwrap_or(1);
        if k == 0 {
            return Err(Error::Invalid(format!("zero multiplier at {:?}", b.point)));
        }
        let m = b.profile.iter().copied().fold(1, lcm) * k;
        res.sources.insert(b.point.clone(), b.profile.iter().map(|e| m / e).collect());
        res.target.insert(b.point.clone(), m);
    }
    debug_assert!(res.is_etale(cover));
    Ok(res)
}

/// Whether `m` is a valid target order over a profile: every `e_y` divides it.
pub fn is_valid_target_order(profile: &[u64], m: u64) -> bool {
    m > 0 && profile.iter().all(|&e| m.is_multiple_of(e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectorModel {
    pub model: OrbifoldModel,
    pub signature: Signature,
    pub sector: Sector,
}

/// All models with at most `point_budget` marked points `x1, x2, …` and orders
/// in `2..=order_budget`, orders nondecreasing along the point ids. Ordered by
/// number of points, then lexicographically.
pub fn enumerate_models(coarse_genus: u64, point_budget: usize, order_budget: u64) -> Result<Vec<SectorModel>> {
    let choices = order_budget.saturating_sub(1) as usize;
    let mut total = 0usize;
    for k in 0..=point_budget {
        total = total.saturating_add(multisets(choices, k));
        if total > MAX_ENUMERATED_MODELS {
            return Err(Error::ResourceExceeded { what: "orbifold model enumeration", limit: MAX_ENUMERATED_MODELS });
        }
    }
    let mut out = Vec::with_capacity(total);
    let mut current = Vec::new();
    for k in 0..=point_budget {
        push_multisets(coarse_genus, k, 2, order_budget, &mut current, &mut out);
    }
    Ok(out)
}

fn multisets(n: usize, k: usize) -> usize {
    // C(n + k − 1, k), saturating
    if k == 0 {
        return 1;
    }
    if n == 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 + i) / (i + 1);
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

fn push_multisets(g: u64, k: usize, min: u64, max: u64, current: &mut Vec<u64>, out: &mut Vec<SectorModel>) {
    if current.len() == k {
        let orders = current.iter().enumerate().map(|(i, &m)| (format!("x{}", i + 1), m)).collect();
        let model = OrbifoldModel { coarse_genus: g, orders };
        let signature = model.signature();
        out.push(SectorModel { sector: signature.sector(), signature, model });
        return;
    }
    for m in min..=max {
        current.push(m);
        push_multisets(g, k, m, max, current, out);
        current.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProSystemNode {
    pub id: usize,
    pub model: OrbifoldModel,
    pub signature: Signature,
    pub presentation: String,
}

/// A covering relation `fine → coarse` of the refinement order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProSystemEdge {
    pub fine: usize,
    pub coarse: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProSystem {
    pub nodes: Vec<ProSystemNode>,
    pub edges: Vec<ProSystemEdge>,
}

/// Hasse diagram of the refinement order on the given hyperbolic models,
/// each node labelled with the presentation of its orbifold group.
pub fn hyperbolic_prosystem_edges(models: &[OrbifoldModel]) -> Result<ProSystem> {
    let mut unique: Vec<&OrbifoldModel> = Vec::new();
    for m in models {
        if let Some(first) = unique.first() {
            first.same_genus(m)?;
        }
        if !m.signature().is_hyperbolic() {
            return Err(Error::NotHyperbolic(format!("model {} ({})", m.signature(), m.sector())));
        }
        if !unique.contains(&m) {
            unique.push(m);
        }
    }
    let n = unique.len();
    let mut below = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            below[i][j] = i != j && refines(unique[i], unique[j])?;
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if below[i][j] && !(0..n).any(|k| below[i][k] && below[k][j]) {
                edges.push(ProSystemEdge { fine: i, coarse: j });
            }
        }
    }
    let nodes = unique
        .into_iter()
        .enumerate()
        .map(|(id, m)| {
            let signature = m.signature();
            ProSystemNode { id, presentation: presentation(&signature).to_string(), signature, model: m.clone() }
        })
        .collect();
    Ok(ProSystem { nodes, edges })
}

/// Number of conjugacy classes of subgroups of each index `1..=max_index`
/// in the orbifold group of a node: finite evidence for the pro-system.
pub fn quotient_evidence(model: &OrbifoldModel, max_index: usize) -> Result<Vec<usize>> {
    let pres: OrbiPresentation = presentation(&model.signature());
    let tables = low_index_subgroups_with_budget(&pres.presentation, max_index, DEFAULT_SEARCH_BUDGET)?;
    let mut counts = vec![0; max_index];
    for t in tables {
        counts[t.index() - 1] += 1;
    }
    Ok(counts)
}
