use std::collections::VecDeque;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{reduce, Presentation, Word};
use crate::error::{Error, Result};

/// A transitive right action of a finitely presented group on the cosets of a
/// finite-index subgroup. Coset `0` (printed as `1`) is the subgroup itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CosetTableJson", into = "CosetTableJson")]
pub struct CosetTable {
    index: usize,
    generators: Vec<String>,
    perms: Vec<Vec<usize>>,
    inverses: Vec<Vec<usize>>,
    subgroup_generators: Vec<Word>,
}

/// Wire form: 1-based images keyed by generator name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CosetTableJson {
    pub index: usize,
    pub perms: IndexMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subgroup_generators: Vec<Word>,
}

impl TryFrom<CosetTableJson> for CosetTable {
    type Error = Error;

    fn try_from(json: CosetTableJson) -> Result<Self> {
        let mut generators = Vec::with_capacity(json.perms.len());
        let mut perms = Vec::with_capacity(json.perms.len());
        for (name, images) in json.perms {
            let zero_based = images
                .iter()
                .map(|&x| {
                    if x == 0 || x > json.index {
                        Err(Error::Invalid(format!("image {x} of {name} outside 1..={}", json.index)))
                    } else {
                        Ok(x - 1)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            generators.push(name);
            perms.push(zero_based);
        }
        CosetTable::new(json.index, generators, perms, json.subgroup_generators)
    }
}

impl From<CosetTable> for CosetTableJson {
    fn from(t: CosetTable) -> Self {
        let perms = t
            .generators
            .iter()
            .zip(&t.perms)
            .map(|(name, p)| (name.clone(), p.iter().map(|&x| x + 1).collect()))
            .collect();
        CosetTableJson { index: t.index, perms, subgroup_generators: t.subgroup_generators }
    }
}

fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

impl CosetTable {
    /// Builds a table from 0-based permutation images, checking that each
    /// generator acts bijectively on `0..index`.
    pub fn new(
        index: usize,
        generators: Vec<String>,
        perms: Vec<Vec<usize>>,
        subgroup_generators: Vec<Word>,
    ) -> Result<Self> {
        if index == 0 {
            return Err(Error::Invalid("coset table index must be positive".into()));
        }
        if generators.len() != perms.len() {
            return Err(Error::Invalid("one permutation per generator is required".into()));
        }
        for (name, p) in generators.iter().zip(&perms) {
            if p.len() != index {
                return Err(Error::Invalid(format!("{name} has {} images, expected {index}", p.len())));
            }
            let mut seen = vec![false; index];
            for &x in p {
                if x >= index || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Invalid(format!("{name} is not a permutation of 1..={index}")));
                }
            }
        }
        let inverses = perms.iter().map(|p| invert_perm(p)).collect();
        Ok(CosetTable { index, generators, perms, inverses, subgroup_generators })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    /// 0-based images of the `g`-th generator (0-based).
    pub fn perm(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }

    pub fn subgroup_generators(&self) -> &[Word] {
        &self.subgroup_generators
    }

    pub fn with_subgroup_generators(mut self, words: Vec<Word>) -> Self {
        self.subgroup_generators = words;
        self
    }

    /// Image of a coset under one signed letter.
    pub fn apply(&self, coset: usize, letter: i32) -> usize {
        let g = (letter.unsigned_abs() - 1) as usize;
        if letter > 0 {
            self.perms[g][coset]
        } else {
            self.inverses[g][coset]
        }
    }

    pub fn act(&self, coset: usize, word: &[i32]) -> usize {
        word.iter().fold(coset, |c, &x| self.apply(c, x))
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.index];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(c) = queue.pop_front() {
            for p in self.perms.iter().chain(&self.inverses) {
                let d = p[c];
                if !seen[d] {
                    seen[d] = true;
                    count += 1;
                    queue.push_back(d);
                }
            }
        }
        count == self.index
    }

    pub fn relator_holds(&self, word: &[i32]) -> bool {
        (0..self.index).all(|c| self.act(c, word) == c)
    }

    /// Checks generator names, relators, transitivity and subgroup generators
    /// against a presentation.
    pub fn validate_for(&self, pres: &Presentation) -> Result<()> {
        if self.generators != pres.generators {
            return Err(Error::Invalid(format!(
                "table generators {:?} do not match presentation generators {:?}",
                self.generators, pres.generators
            )));
        }
        for r in &pres.relators {
            if !self.relator_holds(r) {
                return Err(Error::Inconsistent(format!("relator {} does not act trivially", pres.format_word(r))));
            }
        }
        if !self.is_transitive() {
            return Err(Error::Inconsistent("action is not transitive".into()));
        }
        for w in &self.subgroup_generators {
            pres.check_word(w)?;
            if self.act(0, w) != 0 {
                return Err(Error::Inconsistent(format!(
                    "subgroup generator {} does not fix coset 1",
                    pres.format_word(w)
                )));
            }
        }
        Ok(())
    }

    /// Reorders the permutations to follow the presentation's generator order.
    pub fn aligned_to(&self, pres: &Presentation) -> Result<Self> {
        let mut perms = Vec::with_capacity(pres.generators.len());
        for name in &pres.generators {
            let g = self
                .generators
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Invalid(format!("coset table has no permutation for {name}")))?;
            perms.push(self.perms[g].clone());
        }
        if self.generators.len() != pres.generators.len() {
            return Err(Error::Invalid(format!(
                "coset table has {} permutations, presentation has {} generators",
                self.generators.len(),
                pres.generators.len()
            )));
        }
        CosetTable::new(self.index, pres.generators.clone(), perms, self.subgroup_generators.clone())
    }

    /// Breadth-first relabelling order starting from `root`, scanning columns
    /// `g1, g1⁻¹, g2, g2⁻¹, …`.
    fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.index];
        let mut order = Vec::with_capacity(self.index);
        label[root] = 0;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for g in 0..self.perms.len() {
                for d in [self.perms[g][c], self.inverses[g][c]] {
                    if label[d] == usize::MAX {
                        label[d] = order.len();
                        order.push(d);
                    }
                }
            }
        }
        order
    }

    fn relabel(&self, order: &[usize]) -> Vec<Vec<usize>> {
        let mut label = vec![0; self.index];
        for (new, &old) in order.iter().enumerate() {
            label[old] = new;
        }
        self.perms.iter().map(|p| order.iter().map(|&old| label[p[old]]).collect()).collect()
    }

    /// Standard form: cosets renumbered in breadth-first order from coset 1.
    pub fn standardized(&self) -> Self {
        self.rerooted(0)
    }

    /// Standard form of the table of the conjugate subgroup stabilising `root`.
    /// Subgroup generators are dropped unless `root` is coset 1.
    pub fn rerooted(&self, root: usize) -> Self {
        let order = self.bfs_order(root);
        assert_eq!(order.len(), self.index, "rerooting requires a transitive table");
        let perms = self.relabel(&order);
        let subgroup_generators = if root == 0 { self.subgroup_generators.clone() } else { Vec::new() };
        CosetTable::new(self.index, self.generators.clone(), perms, subgroup_generators)
            .expect("relabelling preserves permutations")
    }

    /// Row-major encoding used for lexicographic comparisons.
    pub fn encoding(&self) -> Vec<usize> {
        let mut enc = Vec::with_capacity(self.index * self.perms.len());
        for c in 0..self.index {
            for p in &self.perms {
                enc.push(p[c]);
            }
        }
        enc
    }

    /// Lexicographically least standard form over all choices of base coset;
    /// two transitive tables have equal canonical forms iff their point
    /// stabilisers are conjugate.
    pub fn conjugacy_canonical(&self) -> Self {
        (0..self.index)
            .map(|r| self.rerooted(r))
            .min_by(|a, b| a.encoding().cmp(&b.encoding()))
            .expect("index is positive")
    }

    /// Whether the stabiliser of coset 1 is normal (every coset gives the same standard table).
    pub fn is_normal(&self) -> bool {
        let base = self.standardized().encoding();
        (1..self.index).all(|r| self.rerooted(r).encoding() == base)
    }

    pub fn cycles(&self, g: usize) -> Vec<Vec<usize>> {
        let p = &self.perms[g];
        let mut seen = vec![false; self.index];
        let mut out = Vec::new();
        for start in 0..self.index {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut c = p[start];
            while c != start {
                seen[c] = true;
                cycle.push(c);
                c = p[c];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths of the `g`-th generator, sorted descending.
    pub fn cycle_type(&self, g: usize) -> Vec<u64> {
        let mut lens: Vec<u64> = self.cycles(g).iter().map(|c| c.len() as u64).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Breadth-first Schreier transversal: a word `u_c` with `1·u_c = c` for every coset.
    pub fn transversal(&self) -> Vec<Word> {
        let mut words: Vec<Option<Word>> = vec![None; self.index];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            let base = words[c].clone().expect("visited");
            for g in 0..self.perms.len() {
                for letter in [(g + 1) as i32, -((g + 1) as i32)] {
                    let d = self.apply(c, letter);
                    if words[d].is_none() {
                        let mut w = base.clone();
                        w.push(letter);
                        words[d] = Some(w);
                        queue.push_back(d);
                    }
                }
            }
        }
        words.into_iter().map(|w| w.expect("table is transitive")).collect()
    }

    /// Nontrivial Schreier generators `u_c · x · u_{c·x}⁻¹` of the stabiliser of coset 1.
    pub fn schreier_generators(&self) -> Vec<Word> {
        let transversal = self.transversal();
        let mut out: Vec<Word> = Vec::new();
        for c in 0..self.index {
            for g in 0..self.perms.len() {
                let letter = (g + 1) as i32;
                let d = self.apply(c, letter);
                let mut w = transversal[c].clone();
                w.push(letter);
                w.extend(super::invert(&transversal[d]));
                let w = reduce(&w);
                if !w.is_empty() && !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out
    }

    /// The equivariant map sending coset 1 to coset 1, when this table's
    /// subgroup is contained in `coarse`'s subgroup.
    pub fn covering_map(&self, coarse: &CosetTable) -> Option<Vec<usize>> {
        if self.generators != coarse.generators || !self.index.is_multiple_of(coarse.index) {
            return None;
        }
        let mut map = vec![usize::MAX; self.index];
        map[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            for g in 0..self.perms.len() {
                for letter in [(g + 1) as i32, -((g + 1) as i32)] {
                    let d = self.apply(c, letter);
                    let image = coarse.apply(map[c], letter);
                    if map[d] == usize::MAX {
                        map[d] = image;
                        queue.push_back(d);
                    } else if map[d] != image {
                        return None;
                    }
                }
            }
        }
        Some(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_regular() -> CosetTable {
        // S3 acting regularly: x an involution, y of order 3, (xy)^2 = 1.
        CosetTable::new(6, vec!["x".into(), "y".into()], vec![vec![1, 0, 3, 2, 5, 4], vec![2, 5, 4, 1, 0, 3]], vec![])
            .unwrap()
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(CosetTable::new(2, vec!["x".into()], vec![vec![0, 0]], vec![]).is_err());
        assert!(CosetTable::new(2, vec!["x".into()], vec![vec![0]], vec![]).is_err());
        assert!(CosetTable::new(0, vec![], vec![], vec![]).is_err());
    }

    #[test]
    fn json_is_one_based_and_ordered() {
        let t = CosetTable::new(2, vec!["b".into(), "a".into()], vec![vec![1, 0], vec![0, 1]], vec![]).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"index":2,"perms":{"b":[2,1],"a":[1,2]}}"#);
        let back: CosetTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<CosetTable>(r#"{"index":2,"perms":{"a":[0,1]}}"#).is_err());
    }

    #[test]
    fn standardization_is_idempotent_and_invariant() {
        let t = s3_regular();
        let s = t.standardized();
        assert_eq!(s.standardized(), s);
        assert!(t.is_transitive());
        assert!(t.is_normal());
        for r in 0..6 {
            assert_eq!(t.rerooted(r).conjugacy_canonical(), t.conjugacy_canonical());
        }
    }

    #[test]
    fn schreier_generators_fix_base_coset() {
        let t = s3_regular();
        for w in t.schreier_generators() {
            assert_eq!(t.act(0, &w), 0);
        }
        let tr = t.transversal();
        for (c, w) in tr.iter().enumerate() {
            assert_eq!(t.act(0, w), c);
        }
    }

    #[test]
    fn covering_map_onto_quotient() {
        let t = s3_regular();
        // the sign action: x odd, y even
        let sign = CosetTable::new(2, vec!["x".into(), "y".into()], vec![vec![1, 0], vec![0, 1]], vec![]).unwrap();
        let map = t.covering_map(&sign).expect("regular action covers every quotient");
        assert_eq!(map.iter().filter(|&&m| m == 0).count(), 3);
        assert!(sign.covering_map(&t).is_none());
    }

    #[test]
    fn cycle_types() {
        let t = s3_regular();
        assert_eq!(t.cycle_type(0), vec![2, 2, 2]);
        assert_eq!(t.cycle_type(1), vec![3, 3]);
    }
}
