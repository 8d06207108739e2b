//! Independent oracles shared by the integration tests: explicit permutation
//! groups and brute-force enumeration of permutation representations.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use nalgebra::DVector;
use num::{One, Zero};
use orbiform::fuchsian::presentation;
use orbiform::parahoric::{FilteredSpace, QMatrix};
use orbiform::rational::int;
use orbiform::{CosetTable, Rational, Signature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Perm = Vec<usize>;

/// `x·(pq) = (x·p)·q`, matching the right action of coset tables.
pub fn compose(p: &[usize], q: &[usize]) -> Perm {
    p.iter().map(|&x| q[x]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x] = i;
    }
    out
}

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn power(p: &[usize], k: u64) -> Perm {
    (0..k).fold(identity(p.len()), |acc, _| compose(&acc, p))
}

pub fn all_perms(n: usize) -> Vec<Perm> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn is_transitive(perms: &[Perm], n: usize) -> bool {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for p in perms {
            for y in [p[x], inverse(p)[x]] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Number of subgroups of index `n` in the orbifold group of `sig`, computed
/// as (transitive actions on `n` points) / (n − 1)!. The last generator of the
/// long relation is solved from it; all others range over `S_n` subject to
/// their torsion relation.
pub fn brute_force_subgroup_count(sig: &Signature, n: usize) -> usize {
    let pres = presentation(sig);
    let ngens = pres.num_generators();
    let perms = all_perms(n);
    let mut order_of = vec![None; ngens];
    for (j, &m) in sig.orders().iter().enumerate() {
        order_of[(pres.c(j + 1) - 1) as usize] = Some(m);
    }
    let candidates: Vec<Vec<&Perm>> = (0..ngens)
        .map(|g| perms.iter().filter(|p| order_of[g].is_none_or(|m| power(p, m) == identity(n))).collect())
        .collect();
    let long = pres.long_relation();
    // a generator occurring once in the long relation can be solved for;
    // otherwise every generator ranges freely and the relation is checked
    let solved = long
        .iter()
        .rev()
        .find(|&&x| long.iter().filter(|&&y| y.abs() == x.abs()).count() == 1)
        .map(|&x| (x.unsigned_abs() - 1) as usize);

    let free: Vec<usize> = (0..ngens).filter(|&g| Some(g) != solved).collect();
    let word = |images: &[Perm], letters: &[i32]| {
        letters.iter().fold(identity(n), |acc, &letter| {
            let g = (letter.unsigned_abs() - 1) as usize;
            let p = if letter > 0 { images[g].clone() } else { inverse(&images[g]) };
            compose(&acc, &p)
        })
    };
    let mut count = 0;
    let mut choice = vec![0usize; free.len()];
    loop {
        let mut images: Vec<Perm> = vec![Vec::new(); ngens];
        for (k, &g) in free.iter().enumerate() {
            images[g] = candidates[g][choice[k]].clone();
        }
        let ok = match solved {
            Some(sg) => {
                // u · x^±1 · v = 1  ⇒  x^±1 = u⁻¹ v⁻¹
                let pos = long.iter().position(|&x| x.unsigned_abs() as usize == sg + 1).unwrap();
                let (u, v) = (word(&images, &long[..pos]), word(&images, &long[pos + 1..]));
                let x = compose(&inverse(&u), &inverse(&v));
                images[sg] = if long[pos] > 0 { x } else { inverse(&x) };
                order_of[sg].is_none_or(|m| power(&images[sg], m) == identity(n))
            }
            None => word(&images, &long) == identity(n),
        };
        if ok && is_transitive(&images, n) {
            count += 1;
        }
        // odometer
        let mut k = 0;
        loop {
            if k == free.len() {
                return count / factorial(n - 1);
            }
            choice[k] += 1;
            if choice[k] < candidates[free[k]].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Number of distinct subgroups represented by a conjugacy-class table: the
/// index divided by the number of cosets whose stabiliser equals coset 1's.
pub fn conjugates(table: &CosetTable) -> usize {
    let own = table.standardized();
    let fixed = (0..table.index()).filter(|&c| table.rerooted(c) == own).count();
    table.index() / fixed
}

/// Regular right action of a finite group given by generator images in some
/// faithful representation with hashable elements.
pub fn regular_action<T: Clone + Eq + std::hash::Hash>(
    identity: T,
    gens: &[T],
    mul: impl Fn(&T, &T) -> T,
) -> Vec<Perm> {
    let mut index: HashMap<T, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut elems = vec![identity];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let h = mul(&elems[i], g);
            if !index.contains_key(&h) {
                index.insert(h.clone(), elems.len());
                elems.push(h);
            }
        }
        i += 1;
    }
    gens.iter().map(|g| elems.iter().map(|e| index[&mul(e, g)]).collect()).collect()
}

type M2 = [i64; 4];

fn psl_normal(m: M2, p: i64) -> M2 {
    let m = m.map(|x| x.rem_euclid(p));
    let neg = m.map(|x| (p - x) % p);
    m.min(neg)
}

fn psl_mul(a: &M2, b: &M2, p: i64) -> M2 {
    psl_normal(
        [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]],
        p,
    )
}

/// PSL(2,7) acting regularly, as images of `c1, c2, c3` for the (2,3,7)
/// triangle group: `x` of order 2, `y` of order 3, `xy` unipotent up to sign.
pub fn psl27_images() -> Vec<Perm> {
    let p = 7;
    let x = psl_normal([0, -1, 1, 0], p);
    let y = psl_normal([0, -1, 1, 1], p);
    let xy = psl_mul(&x, &y, p);
    // inverse of xy in SL2: [[d, -b], [-c, a]]
    let z = psl_normal([xy[3], -xy[1], -xy[2], xy[0]], p);
    regular_action(psl_normal([1, 0, 0, 1], p), &[x, y, z], |a, b| psl_mul(a, b, p))
}

/// S3 acting regularly, as images of `c1, c2, d1` for the modular orbifold:
/// the reduction PSL(2,ℤ) → PSL(2,𝔽₂) ≅ S3.
pub fn s3_images() -> Vec<Perm> {
    let x: Perm = vec![1, 0, 2];
    let y: Perm = vec![1, 2, 0];
    let d = inverse(&compose(&x, &y));
    regular_action(identity(3), &[x, y, d], |a, b| compose(a, b))
}

pub fn table_from(sig: &Signature, perms: Vec<Perm>) -> CosetTable {
    let pres = presentation(sig);
    CosetTable::new(perms[0].len(), pres.presentation.generators.clone(), perms, vec![]).unwrap()
}

/// Applies `a` to a spanning set of `F_{≥jump}` and checks that every image
/// lies in `F_{≥jump+b}`, computing on vectors rather than matrix entries.
pub fn apply_filtered_check(f: &FilteredSpace, a: &QMatrix, jump: &Rational, b: &Rational) -> bool {
    let w = f.weights();
    let n = w.len();
    let target = jump + b;
    (0..n).filter(|&j| &w[j] >= jump).all(|j| {
        let mut v = DVector::from_element(n, Rational::zero());
        v[j] = Rational::one();
        let image = a * v;
        (0..n).all(|i| image[i].is_zero() || w[i] >= target)
    })
}

/// A random nilpotent that strictly raises `f`: entries only where
/// `w_i > w_j`, small integers drawn from `seed`.
pub fn strictly_raising_matrix(f: &FilteredSpace, seed: u64) -> QMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = f.weights();
    QMatrix::from_fn(w.len(), w.len(), |i, j| if w[i] > w[j] { int(rng.gen_range(-3..=3)) } else { Rational::zero() })
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Perm {
    let mut p = identity(n);
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

pub fn order(p: &[usize]) -> u64 {
    cycle_type(p).into_iter().fold(1, orbiform::rational::lcm)
}

pub fn cycle_type(p: &[usize]) -> Vec<u64> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable();
    out
}

/// A transitive branched cover of the sphere realised by `σ₁σ₂σ₃ = 1`, with
/// identity branch cycles dropped and the rest moved into nondecreasing order
/// by Hurwitz moves `(a, b) ↦ (b, b⁻¹ab)`, which keep the product and the
/// cycle types.
pub struct PermCover {
    pub degree: usize,
    pub signature: Signature,
    /// `(point id, branch cycle)` in presentation order.
    pub branches: Vec<(String, Perm)>,
}

pub fn random_perm_cover(rng: &mut impl Rng, degree: usize) -> Option<PermCover> {
    let s1 = random_perm(rng, degree);
    let s2 = random_perm(rng, degree);
    let s3 = inverse(&compose(&s1, &s2));
    if !is_transitive(&[s1.clone(), s2.clone()], degree) {
        return None;
    }
    let mut branches: Vec<(String, Perm)> = [s1, s2, s3]
        .into_iter()
        .enumerate()
        .map(|(i, s)| (format!("x{}", i + 1), s))
        .filter(|(_, s)| *s != identity(degree))
        .collect();
    if branches.len() < 2 {
        return None;
    }
    for end in (1..branches.len()).rev() {
        for i in 0..end {
            if order(&branches[i].1) > order(&branches[i + 1].1) {
                let (a, b) = (branches[i].1.clone(), branches[i + 1].1.clone());
                let conj = compose(&compose(&inverse(&b), &a), &b);
                branches[i].1 = b;
                branches[i + 1].1 = conj;
                let name = branches[i].0.clone();
                branches[i].0 = std::mem::replace(&mut branches[i + 1].0, name);
            }
        }
    }
    let signature = Signature::new(0, branches.iter().map(|(_, s)| order(s)).collect(), 0).ok()?;
    Some(PermCover { degree, signature, branches })
}

impl PermCover {
    pub fn table(&self) -> CosetTable {
        table_from(&self.signature, self.branches.iter().map(|(_, s)| s.clone()).collect())
    }

    pub fn profiles(&self) -> Vec<(String, Vec<u64>)> {
        self.branches.iter().map(|(x, s)| (x.clone(), cycle_type(s))).collect()
    }
}
