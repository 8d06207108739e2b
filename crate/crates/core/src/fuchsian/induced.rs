use num::{Integer, One, Signed, ToPrimitive};
use serde::Serialize;

use super::{presentation, CosetTable};
use crate::error::{Error, Result};
use crate::rational::{frac, int, Rational};
use crate::signature::{Signature, SpecialPoint};

/// A finite-index subgroup together with the signature of the corresponding cover.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgroupRecord {
    pub table: CosetTable,
    #[serde(rename = "induced_signature")]
    pub induced_sig: Signature,
    pub index: usize,
    /// Cycle lengths (local ramification indices) over each special point of
    /// the parent, orbifold points first, then cusps.
    pub ramification: Vec<LocalCover>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalCover {
    pub point: SpecialPoint,
    pub cycle_lengths: Vec<u64>,
}

/// Signature of the cover attached to `table`, a transitive action of the
/// orbifold group of `parent`.
///
/// A cycle of length `ℓ` of the torsion generator of order `m` gives an
/// orbifold point of order `m/ℓ` (dropped when `m/ℓ = 1`), each cycle of a
/// cusp generator gives a cusp, and the genus is solved from `χ(cover) = n·χ(parent)`.
pub fn induced_signature(parent: &Signature, table: &CosetTable) -> Result<SubgroupRecord> {
    let pres = presentation(parent);
    let table = table.aligned_to(&pres.presentation)?;
    table.validate_for(&pres.presentation)?;

    let n = table.index();
    let mut orders = Vec::new();
    let mut cusps = 0u64;
    let mut ramification = Vec::new();
    for (j, &m) in parent.orders().iter().enumerate() {
        let g = (pres.c(j + 1) - 1) as usize;
        let lens = table.cycle_type(g);
        for &l in &lens {
            if m % l != 0 {
                return Err(Error::Inconsistent(format!("cycle of length {l} for a generator of order {m}")));
            }
            if m / l >= 2 {
                orders.push(m / l);
            }
        }
        ramification.push(LocalCover { point: SpecialPoint::Orb(m), cycle_lengths: lens });
    }
    for k in 1..=parent.cusps() as usize {
        let g = (pres.d(k) - 1) as usize;
        let lens = table.cycle_type(g);
        cusps += lens.len() as u64;
        ramification.push(LocalCover { point: SpecialPoint::Log, cycle_lengths: lens });
    }

    let chi = parent.euler_char() * int(n as i64);
    // χ = 2 − 2g − s − Σ(1 − 1/m)  ⇒  2g = 2 − s − Σ(1 − 1/m) − χ
    let mut twice_genus = int(2) - int(cusps as i64) - &chi;
    for &m in &orders {
        twice_genus -= int(1) - frac(1, m as i64);
    }
    if !twice_genus.denom().is_one() || twice_genus.is_negative() || twice_genus.numer().is_odd() {
        return Err(Error::Inconsistent(format!(
            "Euler characteristic {chi} does not determine a valid genus (2g = {twice_genus})"
        )));
    }
    let genus = (twice_genus / int(2)).to_integer().to_u64().expect("nonnegative and small");
    let induced_sig = Signature::new(genus, orders, cusps)?;
    debug_assert_eq!(induced_sig.euler_char(), chi);
    Ok(SubgroupRecord { table, induced_sig, index: n, ramification })
}

/// `χ(sub) − index · χ(parent)`; zero for every valid record.
pub fn euler_defect(parent: &Signature, record: &SubgroupRecord) -> Rational {
    record.induced_sig.euler_char() - parent.euler_char() * int(record.index as i64)
}
