//! Orbifold fundamental groups, coset enumeration and the subgroup ↔ cover dictionary.
//!
//! Words are sequences of signed, 1-based generator indices: `3` is the third
//! generator and `-3` its inverse.  Generators of an orbifold presentation are
//! ordered `a1, b1, …, a_g, b_g, c1, …, c_r, d1, …, d_s`.

mod coset_table;
mod induced;
mod low_index;
mod todd_coxeter;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signature::Signature;

pub use coset_table::{CosetTable, CosetTableJson};
pub use induced::{euler_defect, induced_signature, LocalCover, SubgroupRecord};
pub use low_index::{low_index_subgroups, low_index_subgroups_with_budget, DEFAULT_SEARCH_BUDGET};
pub use todd_coxeter::{coset_enumerate, enumerate_cosets, DEFAULT_MAX_COSETS};

pub type Word = Vec<i32>;

/// Inverse of a word.
pub fn invert(word: &[i32]) -> Word {
    word.iter().rev().map(|&x| -x).collect()
}

/// Free reduction.
pub fn reduce(word: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &x in word {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// A finite presentation over named generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let p = Presentation { generators, relators };
        for r in &p.relators {
            p.check_word(r)?;
        }
        Ok(p)
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn check_word(&self, word: &[i32]) -> Result<()> {
        let n = self.generators.len() as i32;
        match word.iter().find(|&&x| x == 0 || x.abs() > n) {
            Some(x) => Err(Error::Invalid(format!("letter {x} out of range for a presentation on {n} generators"))),
            None => Ok(()),
        }
    }

    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut relators = self.relators.clone();
        relators.extend(extra);
        Presentation::new(self.generators.clone(), relators)
    }

    pub fn format_word(&self, word: &[i32]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < word.len() {
            let x = word[i];
            let mut run = 1;
            while i + run < word.len() && word[i + run] == x {
                run += 1;
            }
            let name = &self.generators[(x.unsigned_abs() - 1) as usize];
            let exp = if x > 0 { run as i64 } else { -(run as i64) };
            parts.push(if exp == 1 { name.clone() } else { format!("{name}^{exp}") });
            i += run;
        }
        parts.join("*")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// The standard presentation of the orbifold fundamental group of a signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbiPresentation {
    pub signature: Signature,
    #[serde(flatten)]
    pub presentation: Presentation,
}

impl OrbiPresentation {
    /// 1-based generator index of `a_i` (`i` is 1-based).
    pub fn a(&self, i: usize) -> i32 {
        (2 * i - 1) as i32
    }

    pub fn b(&self, i: usize) -> i32 {
        (2 * i) as i32
    }

    pub fn c(&self, j: usize) -> i32 {
        (2 * self.signature.genus() as usize + j) as i32
    }

    pub fn d(&self, k: usize) -> i32 {
        (2 * self.signature.genus() as usize + self.signature.orders().len() + k) as i32
    }

    /// Word in the long relation `Π[a_i,b_i] · c₁⋯c_r · d₁⋯d_s`.
    pub fn long_relation(&self) -> Word {
        let g = self.signature.genus() as usize;
        let mut w = Vec::new();
        for i in 1..=g {
            w.extend([self.a(i), self.b(i), -self.a(i), -self.b(i)]);
        }
        w.extend((1..=self.signature.orders().len()).map(|j| self.c(j)));
        w.extend((1..=self.signature.cusps() as usize).map(|k| self.d(k)));
        w
    }

    pub fn num_generators(&self) -> usize {
        self.presentation.num_generators()
    }
}

impl fmt::Display for OrbiPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.presentation.fmt(f)
    }
}

pub fn presentation(sig: &Signature) -> OrbiPresentation {
    let g = sig.genus() as usize;
    let r = sig.orders().len();
    let s = sig.cusps() as usize;
    let mut generators = Vec::with_capacity(2 * g + r + s);
    for i in 1..=g {
        generators.push(format!("a{i}"));
        generators.push(format!("b{i}"));
    }
    generators.extend((1..=r).map(|j| format!("c{j}")));
    generators.extend((1..=s).map(|k| format!("d{k}")));

    let mut pres =
        OrbiPresentation { signature: sig.clone(), presentation: Presentation { generators, relators: Vec::new() } };
    let long = pres.long_relation();
    let mut relators = Vec::new();
    if !long.is_empty() {
        relators.push(long);
    }
    for (j, &m) in sig.orders().iter().enumerate() {
        relators.push(vec![pres.c(j + 1); m as usize]);
    }
    pres.presentation.relators = relators;
    pres
}
