//! HLT coset enumeration with lookahead.
//!
//! Columns are indexed `2g` for generator `g` and `2g + 1` for its inverse, so
//! the inverse column of `x` is `x ^ 1`.

use std::collections::VecDeque;

use super::{CosetTable, OrbiPresentation, Presentation, Word};
use crate::error::{Error, Result};

/// Default limit on the number of coset rows held at once.
pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

const UNDEF: usize = usize::MAX;

struct Full;

struct Enumerator {
    ncols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    relators: Vec<Vec<usize>>,
    max_cosets: usize,
    live: usize,
}

fn column(letter: i32) -> usize {
    let g = (letter.unsigned_abs() - 1) as usize;
    if letter > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

impl Enumerator {
    fn new(ngens: usize, relators: &[Word], max_cosets: usize) -> Self {
        let ncols = 2 * ngens;
        let relators =
            relators.iter().filter(|r| !r.is_empty()).map(|r| r.iter().map(|&x| column(x)).collect()).collect();
        Enumerator { ncols, table: vec![UNDEF; ncols], parent: vec![0], relators, max_cosets, live: 1 }
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.ncols + x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.table[c * self.ncols + x] = d;
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), Full> {
        if self.rows() >= self.max_cosets {
            return Err(Full);
        }
        let d = self.rows();
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.live += 1;
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut c = c;
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut VecDeque<usize>) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a != b {
            let (keep, drop) = if a < b { (a, b) } else { (b, a) };
            self.parent[drop] = keep;
            self.live -= 1;
            queue.push_back(drop);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::new();
        self.merge(a, b, &mut queue);
        while let Some(dead) = queue.pop_front() {
            for x in 0..self.ncols {
                let d = self.get(dead, x);
                if d == UNDEF {
                    continue;
                }
                self.set(d, x ^ 1, UNDEF);
                let mu = self.rep(dead);
                let nu = self.rep(d);
                let mu_x = self.get(mu, x);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x, &mut queue);
                } else {
                    let nu_inv = self.get(nu, x ^ 1);
                    if nu_inv != UNDEF {
                        self.merge(mu, nu_inv, &mut queue);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                    }
                }
            }
        }
    }

    /// Scans `word` from coset `c`, defining new cosets when `fill` is set.
    fn scan(&mut self, c: usize, word: &[usize], fill: bool) -> Result<(), Full> {
        if word.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0isize, word.len() as isize - 1);
        loop {
            while i <= j && self.get(f, word[i as usize]) != UNDEF {
                f = self.get(f, word[i as usize]);
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.get(b, word[j as usize] ^ 1) != UNDEF {
                b = self.get(b, word[j as usize] ^ 1);
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = word[i as usize];
                self.set(f, x, b);
                self.set(b, x ^ 1, f);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, word[i as usize])?;
        }
    }

    /// Removes dead rows, preserving the order of live cosets. Returns the new
    /// position of the first live coset at or after `cursor`.
    fn compress(&mut self, cursor: usize) -> usize {
        let mut label = vec![UNDEF; self.rows()];
        let mut next = 0;
        let mut new_cursor = None;
        for (c, l) in label.iter_mut().enumerate() {
            if self.is_live(c) {
                if c >= cursor && new_cursor.is_none() {
                    new_cursor = Some(next);
                }
                *l = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next * self.ncols);
        for c in 0..self.rows() {
            if self.is_live(c) {
                for x in 0..self.ncols {
                    let d = self.get(c, x);
                    table.push(if d == UNDEF { UNDEF } else { label[d] });
                }
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.live = next;
        new_cursor.unwrap_or(next)
    }

    /// Lookahead: scan every live coset against every relator without
    /// defining, then compress. Fails if no row was freed.
    fn make_room(&mut self, cursor: usize) -> Result<usize> {
        let relators = std::mem::take(&mut self.relators);
        for c in 0..self.rows() {
            for r in &relators {
                if !self.is_live(c) {
                    break;
                }
                let _ = self.scan(c, r, false);
            }
        }
        self.relators = relators;
        let cursor = self.compress(cursor);
        if self.rows() >= self.max_cosets {
            return Err(Error::ResourceExceeded { what: "coset enumeration", limit: self.max_cosets });
        }
        Ok(cursor)
    }

    fn run(&mut self, subgroup: &[Vec<usize>]) -> Result<()> {
        for w in subgroup {
            while self.scan(0, w, true).is_err() {
                self.make_room(0)?;
            }
        }
        let mut cursor = 0;
        'outer: while cursor < self.rows() {
            if !self.is_live(cursor) {
                cursor += 1;
                continue;
            }
            for r in 0..self.relators.len() {
                if !self.is_live(cursor) {
                    break;
                }
                let word = std::mem::take(&mut self.relators[r]);
                let outcome = self.scan(cursor, &word, true);
                self.relators[r] = word;
                if outcome.is_err() {
                    cursor = self.make_room(cursor)?;
                    continue 'outer;
                }
            }
            for x in 0..self.ncols {
                if !self.is_live(cursor) {
                    break;
                }
                if self.get(cursor, x) == UNDEF && self.define(cursor, x).is_err() {
                    cursor = self.make_room(cursor)?;
                    continue 'outer;
                }
            }
            cursor += 1;
        }
        self.compress(0);
        Ok(())
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the group
/// given by `pres`. The result is in standard (breadth-first) form.
pub fn enumerate_cosets(pres: &Presentation, subgroup: &[Word], max_cosets: usize) -> Result<CosetTable> {
    if max_cosets == 0 {
        return Err(Error::Invalid("max_cosets must be at least 1".into()));
    }
    for w in subgroup {
        pres.check_word(w)?;
    }
    let ngens = pres.num_generators();
    let mut e = Enumerator::new(ngens, &pres.relators, max_cosets);
    let sub: Vec<Vec<usize>> = subgroup.iter().map(|w| w.iter().map(|&x| column(x)).collect()).collect();
    e.run(&sub)?;

    let index = e.rows();
    let mut perms = vec![vec![0; index]; ngens];
    for c in 0..index {
        for (g, perm) in perms.iter_mut().enumerate() {
            let d = e.get(c, 2 * g);
            if d == UNDEF {
                return Err(Error::Inconsistent(format!("coset table incomplete at coset {}", c + 1)));
            }
            perm[c] = d;
        }
    }
    let table = CosetTable::new(index, pres.generators.clone(), perms, subgroup.to_vec())?.standardized();
    table.validate_for(pres)?;
    Ok(table)
}

/// Coset enumeration over the standard presentation of an orbifold group.
pub fn coset_enumerate(pres: &OrbiPresentation, subgroup: &[Word], max_cosets: usize) -> Result<CosetTable> {
    enumerate_cosets(&pres.presentation, subgroup, max_cosets)
}
