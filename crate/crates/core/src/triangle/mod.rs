//! Monodromy of the Gauss hypergeometric equation for hyperbolic triangle
//! orbifolds `(p, q, r)`.
//!
//! Parameters are fixed on the branch `c = 1 − 1/p`, `c − a − b = 1/q`,
//! `a − b = 1/r`, so the local exponent differences at `0, 1, ∞` are
//! `1/p, 1/q, 1/r`. The equation `z(1−z)w″ + [c − (a+b+1)z]w′ − ab·w = 0` is
//! integrated as the system `Y′ = A(z)Y` for `Y = (w, w′)`.
//!
//! Loops are based at a real point between 0 and 1. `γ₀` and `γ₁` run along
//! the real axis to circles of radius 1/4 around 0 and 1, traversed
//! counterclockwise. `γ∞` is a separately integrated clockwise circle of
//! radius 1 about 1/2 entered from above, so that `γ₀γ₁γ∞ = 1` in the
//! fundamental group with paths composed left to right.
//!
//! Transport along a path `γ` gives the matrix `Φ_γ` with
//! `Y(end) = Φ_γ·Y(start)`, which reverses composition:
//! `Φ_{γδ} = Φ_δ Φ_γ`, hence `Φ_∞ = (Φ₁Φ₀)⁻¹`. The reported monodromy
//! matrices are `M_γ = Φ_γ⁻¹`, a homomorphism, so `M₀M₁M∞ = I` holds
//! literally. Each `M` is rescaled to determinant 1; sign-sensitive checks
//! take the minimum over `±I`.

mod integrator;
mod path;

use std::f64::consts::PI;

use num::complex::Complex64;
use num::{ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, frac, int, Rational};

pub use integrator::{integrate, CMatrix, Stats, Tolerance};
pub use path::{Path, Segment};

/// Paths must stay at least this far from 0 and 1.
pub const EXCLUSION_RADIUS: f64 = 0.125;
pub const DEFAULT_INTEG_TOL: f64 = 1e-10;
pub const DEFAULT_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleData {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    #[serde(with = "rational::serde_vec")]
    pub exponent_differences: Vec<Rational>,
    /// Columns at `0, 1, ∞`: `((n−1)/2n, (n+1)/2n)`.
    #[serde(serialize_with = "rational_columns")]
    pub riemann_scheme: [[Rational; 2]; 3],
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
}

fn rational_columns<S: Serializer>(cols: &[[Rational; 2]; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(3))?;
    for col in cols {
        seq.serialize_element(&[rational::to_string(&col[0]), rational::to_string(&col[1])])?;
    }
    seq.end()
}

pub fn triangle_data(p: u64, q: u64, r: u64) -> Result<TriangleData> {
    if let Some(&n) = [p, q, r].iter().find(|&&n| n < 2) {
        return Err(Error::InvalidOrder(n as i64));
    }
    let (ip, iq, ir) = (frac(1, p as i64), frac(1, q as i64), frac(1, r as i64));
    if &ip + &iq + &ir >= int(1) {
        return Err(Error::NotHyperbolic(format!("triangle ({p},{q},{r}), since 1/p + 1/q + 1/r ≥ 1")));
    }
    let half = frac(1, 2);
    let a = (int(1) - &ip - &iq + &ir) * &half;
    let b = (int(1) - &ip - &iq - &ir) * &half;
    let c = int(1) - &ip;
    let column = |n: u64| [frac(n as i64 - 1, 2 * n as i64), frac(n as i64 + 1, 2 * n as i64)];
    let data = TriangleData {
        p,
        q,
        r,
        exponent_differences: vec![ip, iq, ir],
        riemann_scheme: [column(p), column(q), column(r)],
        a,
        b,
        c,
    };
    debug_assert!(data.exponent_equations_hold());
    Ok(data)
}

impl TriangleData {
    /// `|1 − c| = 1/p`, `|c − a − b| = 1/q`, `|a − b| = 1/r`, exactly.
    pub fn exponent_equations_hold(&self) -> bool {
        use num::Signed;
        let d = &self.exponent_differences;
        (int(1) - &self.c).abs() == d[0]
            && (&self.c - &self.a - &self.b).abs() == d[1]
            && (&self.a - &self.b).abs() == d[2]
            && self.riemann_scheme.iter().zip(d).all(|(col, x)| &(&col[1] - &col[0]) == x)
    }

    fn params(&self) -> (f64, f64, f64) {
        let f = |x: &Rational| x.to_f64().expect("small rationals");
        (f(&self.a), f(&self.b), f(&self.c))
    }

    /// `A(z)` of the first-order system.
    pub fn system_matrix(&self, z: Complex64) -> CMatrix {
        let (a, b, c) = self.params();
        let d = z * (Complex64::new(1.0, 0.0) - z);
        CMatrix::new(
            Complex64::zero(),
            Complex64::new(1.0, 0.0),
            Complex64::new(a * b, 0.0) / d,
            -(Complex64::new(c, 0.0) - z * (a + b + 1.0)) / d,
        )
    }

    /// Closed-form determinants of `Φ₀, Φ₁, Φ∞` from the residues of `tr A`.
    pub fn transport_determinants(&self) -> [Complex64; 3] {
        let (a, b, c) = self.params();
        let e = |x: f64| Complex64::from_polar(1.0, 2.0 * PI * x);
        [e(-c), e(c - a - b), e(a + b)]
    }
}

/// `|tr|` of the determinant-one monodromy at `0, 1, ∞` from the local
/// exponents alone: `2cos(π/p), 2cos(π/q), 2cos(π/r)`.
pub fn eigenvalue_oracle(data: &TriangleData) -> [f64; 3] {
    [data.p, data.q, data.r].map(|n| 2.0 * (PI / n as f64).cos())
}

/// Parallel transport `Φ` along `path`, with `Y(end) = Φ·Y(start)`.
pub fn transport(data: &TriangleData, path: &Path, tol: &Tolerance, stats: &mut Stats) -> Result<CMatrix> {
    path.check_clearance(&[0.0, 1.0], EXCLUSION_RADIUS)?;
    let mut y = CMatrix::identity();
    for seg in &path.segments {
        let f = |t: f64| data.system_matrix(seg.point(t)) * seg.velocity(t);
        y = integrate(f, y, tol, stats)?;
    }
    Ok(y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyOptions {
    pub integ_tol: f64,
    pub check_tol: f64,
    pub basepoint: f64,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        MonodromyOptions { integ_tol: DEFAULT_INTEG_TOL, check_tol: DEFAULT_CHECK_TOL, basepoint: 0.5 }
    }
}

/// A 2×2 complex matrix serialised as rows of `[re, im]` pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat(pub CMatrix);

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> =
            (0..2).map(|i| (0..2).map(|j| [self.0[(i, j)].re, self.0[(i, j)].im]).collect()).collect();
        rows.serialize(s)
    }
}

fn complex_pairs<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
    pairs.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleMonodromyReport {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub basepoint: f64,
    pub integ_tol: f64,
    pub check_tol: f64,
    pub m0: Mat,
    pub m1: Mat,
    pub minf: Mat,
    #[serde(serialize_with = "complex_pairs")]
    pub traces: Vec<Complex64>,
    pub oracle_traces: [f64; 3],
    /// `||tr M| − oracle|` at `0, 1, ∞`.
    pub trace_defects: [f64; 3],
    /// `min_± ‖M₀^p ∓ I‖`, `min_± ‖M₁^q ∓ I‖`, `min_± ‖M∞^r ∓ I‖`.
    pub order_defects: [f64; 3],
    /// `min_± ‖M₀M₁M∞ ∓ I‖` with `M∞` from its own loop.
    pub relation_defect: f64,
    /// `|det Φ − closed form|` at `0, 1, ∞`.
    pub determinant_defects: [f64; 3],
    /// Largest `|Im tr|` over the word list.
    pub reality_defect: f64,
    pub reality_words: Vec<String>,
    pub steps: usize,
    pub traces_pass: bool,
    pub relations_pass: bool,
    pub reality_pass: bool,
    pub determinants_pass: bool,
    pub all_pass: bool,
}

fn normalize(m: &CMatrix) -> CMatrix {
    m / m.determinant().sqrt()
}

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn signed_identity_defect(m: &CMatrix) -> f64 {
    let id = CMatrix::identity();
    frobenius(&(m - id)).min(frobenius(&(m + id)))
}

fn power(m: &CMatrix, n: u64) -> CMatrix {
    (0..n).fold(CMatrix::identity(), |acc, _| acc * m)
}

fn invert(m: &CMatrix) -> Result<CMatrix> {
    m.try_inverse().ok_or_else(|| Error::NumericalAccuracy("singular transport matrix".into()))
}

pub fn hypergeometric_monodromy(data: &TriangleData, integ_tol: f64) -> Result<TriangleMonodromyReport> {
    hypergeometric_monodromy_with(data, &MonodromyOptions { integ_tol, ..MonodromyOptions::default() })
}

pub fn hypergeometric_monodromy_with(data: &TriangleData, opts: &MonodromyOptions) -> Result<TriangleMonodromyReport> {
    let tol = Tolerance::new(opts.integ_tol)?;
    if !(opts.check_tol.is_finite() && opts.check_tol > 0.0) {
        return Err(Error::Invalid(format!("check tolerance must be positive, got {}", opts.check_tol)));
    }
    let z0 = opts.basepoint;
    if !(z0 > 0.0 && z0 < 1.0) {
        return Err(Error::Invalid(format!("basepoint must lie strictly between 0 and 1, got {z0}")));
    }
    let loops = [Path::real_loop(z0, 0.0, 0.25), Path::real_loop(z0, 1.0, 0.25), Path::loop_at_infinity(z0, 0.5, 1.0)];
    for l in &loops {
        l.check_clearance(&[0.0, 1.0], EXCLUSION_RADIUS)?;
    }

    let results: Vec<Result<(CMatrix, Stats)>> = std::thread::scope(|s| {
        let handles: Vec<_> = loops
            .iter()
            .map(|l| {
                s.spawn(move || {
                    let mut stats = Stats::default();
                    transport(data, l, &tol, &mut stats).map(|m| (m, stats))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("integration thread panicked")).collect()
    });
    let mut phis = Vec::with_capacity(3);
    let mut steps = 0;
    for r in results {
        let (phi, stats) = r?;
        steps += stats.accepted + stats.rejected;
        phis.push(phi);
    }

    let closed = data.transport_determinants();
    let determinant_defects = [0, 1, 2].map(|i| (phis[i].determinant() - closed[i]).norm());

    let mut ms = Vec::with_capacity(3);
    for phi in &phis {
        ms.push(normalize(&invert(phi)?));
    }
    let (m0, m1, minf) = (ms[0], ms[1], ms[2]);

    let traces: Vec<Complex64> = ms.iter().map(|m| m.trace()).collect();
    let oracle_traces = eigenvalue_oracle(data);
    let trace_defects = [0, 1, 2].map(|i| (traces[i].norm() - oracle_traces[i]).abs());
    let order_defects =
        [(m0, data.p), (m1, data.q), (minf, data.r)].map(|(m, n)| signed_identity_defect(&power(&m, n)));
    let relation_defect = signed_identity_defect(&(m0 * m1 * minf));

    let words: [(&str, CMatrix); 5] =
        [("M0", m0), ("M1", m1), ("M0*M1", m0 * m1), ("M0*M1^2", m0 * m1 * m1), ("M0^2*M1", m0 * m0 * m1)];
    let reality_defect = words.iter().map(|(_, w)| w.trace().im.abs()).fold(0.0, f64::max);

    let ok = |x: &f64| x.is_finite() && *x < opts.check_tol;
    let traces_pass = trace_defects.iter().all(ok);
    let relations_pass = order_defects.iter().all(ok) && ok(&relation_defect);
    let reality_pass = ok(&reality_defect);
    let determinants_pass = determinant_defects.iter().all(ok);
    Ok(TriangleMonodromyReport {
        p: data.p,
        q: data.q,
        r: data.r,
        basepoint: z0,
        integ_tol: opts.integ_tol,
        check_tol: opts.check_tol,
        m0: Mat(m0),
        m1: Mat(m1),
        minf: Mat(minf),
        traces,
        oracle_traces,
        trace_defects,
        order_defects,
        relation_defect,
        determinant_defects,
        reality_defect,
        reality_words: words.iter().map(|(n, _)| n.to_string()).collect(),
        steps,
        traces_pass,
        relations_pass,
        reality_pass,
        determinants_pass,
        all_pass: traces_pass && relations_pass && reality_pass && determinants_pass,
    })
}

impl TriangleMonodromyReport {
    pub fn max_defect(&self) -> f64 {
        self.trace_defects
            .iter()
            .chain(&self.order_defects)
            .chain(&self.determinant_defects)
            .chain([&self.relation_defect, &self.reality_defect])
            .fold(0.0, |m, &x| m.max(x))
    }
}
