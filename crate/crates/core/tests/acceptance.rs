//! Acceptance gate: one line per criterion with its timing against a pinned
//! limit. Exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::Matrix2;
use num::complex::Complex64;
use num::Zero;
use orbiform::fuchsian::{coset_enumerate, induced_signature, low_index_subgroups, presentation, DEFAULT_MAX_COSETS};
use orbiform::parahoric::{
    classify_residue, model_filtration, mp_grading, FilteredSpace, LocalType, ParahoricBundleData, QMatrix,
    Representation, ResidueDatum, ResidueFlag,
};
use orbiform::rational::{frac, int};
use orbiform::{
    canonical_type_system, hypergeometric_monodromy, maximality_certificate, resolve_ramification, triangle_data,
    RamifiedCoverData, Rational, Sector, Signature, SpecialPoint,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const INTEG_TOL: f64 = 1e-10;
const CHECK_TOL: f64 = 1e-6;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sig(g: u64, o: &[u64], s: u64) -> Signature {
    Signature::new(g, o.to_vec(), s).unwrap()
}

fn criterion_1() -> Check {
    let a = sig(0, &[2, 3, 7], 0).euler_char();
    let b = sig(0, &[2, 3], 1).euler_char();
    // 2 − 2g − s − Σ(1 − 1/m), written out
    let oracle_a = int(2) - (int(1) - frac(1, 2)) - (int(1) - frac(1, 3)) - (int(1) - frac(1, 7));
    let oracle_b = int(2) - int(1) - (int(1) - frac(1, 2)) - (int(1) - frac(1, 3));
    ensure(a == frac(-1, 42) && a == oracle_a, || format!("χ(2,3,7) = {a}"))?;
    ensure(b == frac(-1, 6) && b == oracle_b, || format!("χ(2,3;1) = {b}"))?;
    Ok(format!("χ = {a}, {b}"))
}

fn criterion_2() -> Check {
    let table = [
        (sig(0, &[2, 3, 5], 0), Sector::Spherical),
        (sig(0, &[2, 3, 6], 0), Sector::Euclidean),
        (sig(0, &[2, 4, 4], 0), Sector::Euclidean),
        (sig(0, &[2, 3, 7], 0), Sector::Hyperbolic),
        (sig(1, &[], 0), Sector::Euclidean),
        (sig(2, &[], 0), Sector::Hyperbolic),
    ];
    for (s, want) in &table {
        ensure(s.sector() == *want, || format!("{s}: {} instead of {want}", s.sector()))?;
    }
    Ok(format!("{} signatures", table.len()))
}

fn criterion_3() -> Check {
    let s = sig(0, &[2, 3], 1);
    let classes = low_index_subgroups(&presentation(&s), 6).map_err(|e| e.to_string())?;
    let target = sig(0, &[], 3);
    let hit = classes
        .iter()
        .filter(|t| t.index() == 6)
        .map(|t| induced_signature(&s, t).unwrap())
        .find(|r| r.induced_sig == target)
        .ok_or("no torsion-free index-6 class with signature (0;;3)")?;
    ensure(hit.induced_sig.orders().is_empty(), || "class has torsion".into())?;
    let lhs = hit.induced_sig.euler_char();
    ensure(lhs == int(-1) && lhs == int(6) * s.euler_char(), || format!("χ = {lhs}"))?;
    Ok(format!("{} classes up to index 6, χ = -1 = 6·(-1/6)", classes.len()))
}

fn criterion_4() -> Check {
    let s = sig(0, &[2, 3, 7], 0);
    let kernel = table_from(&s, psl27_images()).schreier_generators();
    let t = coset_enumerate(&presentation(&s), &kernel, DEFAULT_MAX_COSETS).map_err(|e| e.to_string())?;
    ensure(t.index() == 168, || format!("index {}", t.index()))?;
    let rec = induced_signature(&s, &t).map_err(|e| e.to_string())?;
    ensure(rec.induced_sig == sig(3, &[], 0), || format!("induced {}", rec.induced_sig))?;
    let chi = rec.induced_sig.euler_char();
    ensure(chi == int(-4) && chi == int(168) * s.euler_char(), || format!("χ = {chi}"))?;
    Ok(format!("index 168, {} kernel generators, χ = -4", kernel.len()))
}

fn criterion_5() -> Check {
    let sys = canonical_type_system(&sig(0, &[2, 3, 7], 0)).map_err(|e| e.to_string())?;
    let want = [(frac(1, 2), 2), (frac(2, 3), 3), (frac(6, 7), 7)];
    ensure(sys.points.len() == 3, || "expected three points".into())?;
    for (p, (coeff, den)) in sys.points.iter().zip(want) {
        ensure(p.psl2_type == LocalType::PSL2(coeff.clone()) && p.denominator == den, || {
            format!("{}: {} with denominator {}", p.label, p.psl2_type, p.denominator)
        })?;
    }
    for s in [sig(0, &[2, 3], 1), sig(0, &[], 3), sig(1, &[5], 2)] {
        let sys = canonical_type_system(&s).map_err(|e| e.to_string())?;
        for p in sys.points.iter().filter(|p| p.kind == SpecialPoint::Log) {
            ensure(p.psl2_type == LocalType::PSL2(int(1)) && p.positive_mp_nonzero, || {
                format!("{s} {}: {} mp={}", p.label, p.psl2_type, p.positive_mp_nonzero)
            })?;
        }
    }
    Ok("(1/2)ϖ∨, (2/3)ϖ∨, (6/7)ϖ∨; cusps ϖ∨".into())
}

fn random_hyperbolic(rng: &mut ChaCha8Rng) -> Signature {
    loop {
        let g = rng.gen_range(0..=3);
        let r = rng.gen_range(0..=5);
        let s = rng.gen_range(0..=3);
        let orders = (0..r).map(|_| rng.gen_range(2..=30)).collect();
        let sig = Signature::new(g, orders, s).unwrap();
        if sig.is_hyperbolic() {
            return sig;
        }
    }
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let s = random_hyperbolic(&mut rng);
        let rep = maximality_certificate(&s).map_err(|e| e.to_string())?;
        // canonical degree 2g − 2 + s + Σ(1 − 1/m) = −χ
        let mut canonical = int(2 * s.genus() as i64 - 2 + s.cusps() as i64);
        for &m in s.orders() {
            canonical += int(1) - frac(1, m as i64);
        }
        ensure(rep.deg_omega == canonical, || format!("{s}: deg ω = {}", rep.deg_omega))?;
        ensure(rep.pardeg_theta == &canonical * frac(1, 2), || format!("{s}: pardeg Θ = {}", rep.pardeg_theta))?;
        ensure(rep.rank2_pdeg.is_zero(), || format!("{s}: rank-2 pdeg = {}", rep.rank2_pdeg))?;
    }
    Ok("100 signatures".into())
}

fn rand_rat(rng: &mut ChaCha8Rng) -> Rational {
    frac(rng.gen_range(-12..=12), rng.gen_range(1..=8))
}

fn rand_space(rng: &mut ChaCha8Rng, max: usize) -> FilteredSpace {
    let n = rng.gen_range(1..=max);
    FilteredSpace::new((0..n).map(|_| rand_rat(rng)).collect()).unwrap()
}

fn rand_bundle(rng: &mut ChaCha8Rng) -> ParahoricBundleData {
    let r = rng.gen_range(1..=3);
    let deg = rng.gen_range(-6..=6);
    let mut pts: Vec<(&str, FilteredSpace)> = Vec::new();
    for id in ["x", "y", "z"] {
        if rng.gen_bool(0.7) {
            pts.push((id, FilteredSpace::new((0..r).map(|_| rand_rat(rng)).collect()).unwrap()));
        }
    }
    if pts.is_empty() {
        ParahoricBundleData::new(r, deg, vec![]).unwrap()
    } else {
        ParahoricBundleData::with_points(deg, pts).unwrap()
    }
}

fn rand_type(rng: &mut ChaCha8Rng) -> (LocalType, Representation) {
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(1..=4);
            (LocalType::gl((0..n).map(|_| rand_rat(rng)).collect()).unwrap(), Representation::Standard)
        }
        1 => (LocalType::SL2(rand_rat(rng)), Representation::Standard),
        _ => (LocalType::PSL2(rand_rat(rng)), Representation::StandardViaLift),
    }
}

fn criterion_7() -> Check {
    const N: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..N {
        let (e, f, g) = (rand_space(&mut rng, 3), rand_space(&mut rng, 3), rand_space(&mut rng, 3));
        ensure(e.tensor(&f).tensor(&g) == e.tensor(&f.tensor(&g)), || "convolution not associative".into())?;
    }
    for _ in 0..N {
        let e = rand_space(&mut rng, 5);
        ensure(e.dual().dual() == e, || "dual not an involution".into())?;
    }
    for _ in 0..N {
        let (e, f) = (rand_bundle(&mut rng), rand_bundle(&mut rng));
        let lhs = e.tensor(&f).map_err(|x| x.to_string())?.pdeg();
        let rhs = int(f.rank() as i64) * e.pdeg() + int(e.rank() as i64) * f.pdeg();
        ensure(lhs == rhs, || format!("pdeg(E⊗F) = {lhs}, formula gives {rhs}"))?;
    }
    for _ in 0..N {
        let n = rng.gen_range(1..=4);
        let t = LocalType::gl((0..n).map(|_| rand_rat(&mut rng)).collect()).unwrap();
        let b = rand_rat(&mut rng);
        let mp = mp_grading(&t);
        let w = model_filtration(&t, Representation::Standard).unwrap();
        let a = QMatrix::from_fn(n, n, |i, j| {
            let g = mp.grade(&format!("E{}{}", i + 1, j + 1)).unwrap();
            if g >= &b {
                int(rng.gen_range(-3..=3))
            } else {
                Rational::zero()
            }
        });
        for jump in w.graded_dims().keys() {
            ensure(apply_filtered_check(&w, &a, jump, &b), || format!("A ∈ 𝔤_≥{b} fails at F_≥{jump}"))?;
        }
    }
    for _ in 0..N {
        let lambda = rand_rat(&mut rng);
        let ((t1, r1), (t2, r2)) = (rand_type(&mut rng), rand_type(&mut rng));
        let (f1, f2) = (model_filtration(&t1, r1).unwrap(), model_filtration(&t2, r2).unwrap());
        let n1 = strictly_raising_matrix(&f1, rng.gen());
        let n2 = if rng.gen_bool(0.3) {
            QMatrix::from_element(f2.dim(), f2.dim(), Rational::zero())
        } else {
            strictly_raising_matrix(&f2, rng.gen())
        };
        let x = ResidueDatum::new(lambda.clone(), &t1, r1, n1).map_err(|e| e.to_string())?;
        let y = ResidueDatum::new(lambda, &t2, r2, n2).map_err(|e| e.to_string())?;
        let flag = classify_residue(&x.tensor(&y).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(flag != ResidueFlag::NotAdjusted, || "tensor of adjusted residues is not adjusted".into())?;
    }
    for _ in 0..N {
        let e = rand_bundle(&mut rng);
        let n = rng.gen_range(1..=6u64);
        let mut profiles = std::collections::BTreeMap::new();
        for p in e.points() {
            let mut left = n;
            let mut profile = Vec::new();
            while left > 0 && rng.gen_bool(0.6) {
                let k = rng.gen_range(1..=left);
                profile.push(k);
                left -= k;
            }
            profiles.insert(p.point.clone(), profile);
        }
        let pulled = e.pullback(n, &profiles).map_err(|x| x.to_string())?;
        ensure(pulled.pdeg() == int(n as i64) * e.pdeg(), || format!("pdeg(f*E) = {}", pulled.pdeg()))?;
    }
    Ok(format!("6 properties × {N} instances"))
}

fn criterion_8() -> Check {
    let tr_oracle = |n: u64| 2.0 * (PI / n as f64).cos();
    let dist_pm = |m: &Matrix2<Complex64>| {
        let id = Matrix2::identity();
        (m - id).norm().min((m + id).norm())
    };
    let (mut count, mut worst) = (0, 0.0f64);
    for p in 2..=8u64 {
        for q in 2..=8u64 {
            for r in 2..=8u64 {
                if q * r + p * r + p * q >= p * q * r {
                    continue;
                }
                let data = triangle_data(p, q, r).map_err(|e| e.to_string())?;
                let rep = hypergeometric_monodromy(&data, INTEG_TOL).map_err(|e| e.to_string())?;
                let (m0, m1, mi) = (rep.m0.0, rep.m1.0, rep.minf.0);
                let mut defects = Vec::new();
                for (m, n) in [(m0, p), (m1, q), (mi, r)] {
                    let t = m.trace();
                    defects.push((t - tr_oracle(n)).norm().min((t + tr_oracle(n)).norm()));
                    defects.push(dist_pm(&m.pow(n as u32)));
                }
                defects.push(dist_pm(&(m0 * m1 * mi)));
                for w in [m0 * m1, m0 * m1 * m1, m0 * m0 * m1, m0 * m1 * m0 * m1 * m1] {
                    defects.push(w.trace().im.abs());
                }
                let d = defects.into_iter().fold(0.0, f64::max);
                ensure(d < CHECK_TOL, || format!("({p},{q},{r}) defect {d:e}"))?;
                worst = worst.max(d);
                count += 1;
            }
        }
    }
    Ok(format!("{count} triples, worst defect {worst:.1e}"))
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..500 {
        let degree = rng.gen_range(2..=24u64);
        let mut branches = Vec::new();
        for x in ["x", "y", "z"] {
            let mut left = degree;
            let mut profile = Vec::new();
            while left > 0 {
                let e = rng.gen_range(1..=left.min(12));
                profile.push(e);
                left -= e;
            }
            if profile.iter().any(|&e| e > 1) {
                branches.push((x, profile));
            }
        }
        if branches.is_empty() {
            continue;
        }
        let cover = RamifiedCoverData::from_profiles(degree, branches.clone()).map_err(|e| e.to_string())?;
        let res = resolve_ramification(&cover).map_err(|e| e.to_string())?;
        for (x, profile) in &branches {
            let m = res.target[*x];
            for (e, my) in profile.iter().zip(&res.sources[*x]) {
                ensure(e * my == m, || format!("{x}: {e}·{my} ≠ {m}"))?;
            }
            let least = (1..=m).find(|c| profile.iter().all(|e| c % e == 0)).unwrap();
            ensure(least == m, || format!("{x}: {m} is not minimal, {least} works"))?;
        }
    }
    Ok("500 profiles".into())
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut done = 0;
    while done < 50 {
        let n = rng.gen_range(2..=9);
        let Some(cover) = random_perm_cover(&mut rng, n) else { continue };
        let rec = induced_signature(&cover.signature, &cover.table()).map_err(|e| e.to_string())?;
        let data =
            RamifiedCoverData::from_profiles(n as u64, cover.profiles().iter().map(|(x, p)| (x.as_str(), p.clone())))
                .map_err(|e| e.to_string())?;
        let res = resolve_ramification(&data).map_err(|e| e.to_string())?;
        ensure(res.target_model(0).signature() == cover.signature, || "lcm target differs from parent".into())?;
        let mut resolved: Vec<u64> = res.sources.values().flatten().copied().filter(|&m| m > 1).collect();
        resolved.sort_unstable();
        ensure(rec.induced_sig.orders() == resolved, || {
            format!("induced {:?} vs resolved {:?}", rec.induced_sig.orders(), resolved)
        })?;
        done += 1;
    }
    Ok("50 covers".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact Euler characteristics", Duration::from_millis(1), criterion_1),
        ("sector table", Duration::from_millis(1), criterion_2),
        ("degree-index formula", Duration::from_secs(1), criterion_3),
        ("Hurwitz cover", Duration::from_secs(30), criterion_4),
        ("canonical types", Duration::from_millis(1), criterion_5),
        ("maximality bookkeeping", Duration::from_millis(100), criterion_6),
        ("filtered-algebra properties", Duration::from_secs(5), criterion_7),
        ("triangle monodromy sweep", Duration::from_secs(60), criterion_8),
        ("resolution round-trip", Duration::from_secs(1), criterion_9),
        ("cross-module consistency", Duration::from_secs(5), criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {}: {} {name} [{:.3} ms / {:.0} ms] {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64() * 1e3,
            limit.as_secs_f64() * 1e3,
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
