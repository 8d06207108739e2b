//! Fixtures shared by the benchmarks.

use orbiform::fuchsian::{presentation, Presentation, Word};
use orbiform::parahoric::{FilteredSpace, ParahoricBundleData};
use orbiform::rational::frac;
use orbiform::{RamifiedCoverData, Signature};

/// `⟨x, y | x², y³, (xy)⁷, [x, y]⁴⟩ ≅ PSL(2,7)` on the (2,3,7) generators,
/// so the trivial subgroup has index 168.
pub fn psl27_presentation() -> Presentation {
    let sig = Signature::triangle(2, 3, 7).unwrap();
    let p = presentation(&sig);
    let (x, y) = (p.c(1), p.c(2));
    let commutator: Word = vec![-x, -y, x, y];
    p.presentation.with_relators([commutator.repeat(4)]).unwrap()
}

/// A rank-`r` bundle with weights `k/7` at three points.
pub fn bundle(r: usize, degree: i64) -> ParahoricBundleData {
    let space = |shift: i64| FilteredSpace::new((0..r as i64).map(|k| frac(k + shift, 7)).collect()).unwrap();
    ParahoricBundleData::with_points(degree, [("x", space(0)), ("y", space(1)), ("z", space(2))]).unwrap()
}

/// A degree-`n` cover with profiles of every shape up to 5 parts.
pub fn cover(n: u64) -> RamifiedCoverData {
    let profile = |parts: u64| {
        let mut p = vec![n / parts; parts as usize];
        p[0] += n % parts;
        p
    };
    RamifiedCoverData::from_profiles(n, [("x", profile(2)), ("y", profile(3)), ("z", profile(5))]).unwrap()
}
