//! Conjugacy classes of subgroups of bounded index, by backtracking over
//! partial coset tables.
//!
//! Each branch fills the first undefined entry in row-major order, either with
//! an existing coset or with the next new one, so every complete table reached
//! is already standard. Relator scanning propagates forced entries and prunes
//! contradictions. A complete table is kept only when it is the least standard
//! form over all base cosets, which selects one table per conjugacy class.

use super::{CosetTable, OrbiPresentation, Presentation, Word};
use crate::error::{Error, Result};

/// Default limit on search-tree nodes.
pub const DEFAULT_SEARCH_BUDGET: usize = 1_000_000;

const UNDEF: usize = usize::MAX;

#[derive(Clone)]
struct Partial {
    ncols: usize,
    cosets: usize,
    table: Vec<usize>,
}

impl Partial {
    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.ncols + x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.table[c * self.ncols + x] = d;
    }

    fn assign(&mut self, c: usize, x: usize, d: usize) {
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
    }

    /// Scans every relator from every coset until no more entries are forced.
    /// Returns false on a contradiction.
    fn propagate(&mut self, relators: &[Vec<usize>]) -> bool {
        loop {
            let mut changed = false;
            for c in 0..self.cosets {
                for r in relators {
                    match self.scan(c, r) {
                        Scan::Conflict => return false,
                        Scan::Deduced => changed = true,
                        Scan::Open | Scan::Closed => {}
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn scan(&mut self, c: usize, word: &[usize]) -> Scan {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0isize, word.len() as isize - 1);
        while i <= j && self.get(f, word[i as usize]) != UNDEF {
            f = self.get(f, word[i as usize]);
            i += 1;
        }
        if i > j {
            return if f == b { Scan::Closed } else { Scan::Conflict };
        }
        while j >= i && self.get(b, word[j as usize] ^ 1) != UNDEF {
            b = self.get(b, word[j as usize] ^ 1);
            j -= 1;
        }
        if j < i {
            return if f == b { Scan::Closed } else { Scan::Conflict };
        }
        if i == j {
            let x = word[i as usize];
            // Both slots are free here: the forward scan stopped at (f, x) and
            // the backward scan at (b, x⁻¹).
            if self.get(b, x ^ 1) != UNDEF {
                return Scan::Conflict;
            }
            self.assign(f, x, b);
            return Scan::Deduced;
        }
        Scan::Open
    }

    fn first_gap(&self) -> Option<(usize, usize)> {
        (0..self.cosets * self.ncols).find(|&k| self.table[k] == UNDEF).map(|k| (k / self.ncols, k % self.ncols))
    }
}

enum Scan {
    Closed,
    Open,
    Deduced,
    Conflict,
}

struct Search<'a> {
    pres: &'a Presentation,
    relators: Vec<Vec<usize>>,
    max_index: usize,
    nodes: usize,
    budget: usize,
    found: Vec<CosetTable>,
}

impl Search<'_> {
    fn visit(&mut self, mut state: Partial) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::ResourceExceeded { what: "low-index subgroup search", limit: self.budget });
        }
        if !state.propagate(&self.relators) {
            return Ok(());
        }
        let Some((c, x)) = state.first_gap() else {
            self.accept(&state);
            return Ok(());
        };
        for d in 0..state.cosets {
            if state.get(d, x ^ 1) == UNDEF {
                let mut next = state.clone();
                next.assign(c, x, d);
                self.visit(next)?;
            }
        }
        if state.cosets < self.max_index {
            let d = state.cosets;
            state.cosets += 1;
            state.table.extend(std::iter::repeat_n(UNDEF, state.ncols));
            state.assign(c, x, d);
            self.visit(state)?;
        }
        Ok(())
    }

    fn accept(&mut self, state: &Partial) {
        let ngens = state.ncols / 2;
        let perms: Vec<Vec<usize>> =
            (0..ngens).map(|g| (0..state.cosets).map(|c| state.get(c, 2 * g)).collect()).collect();
        let table = CosetTable::new(state.cosets, self.pres.generators.clone(), perms, Vec::new())
            .expect("complete partial tables are permutations");
        debug_assert_eq!(table, table.standardized());
        let own = table.encoding();
        if (1..table.index()).any(|r| table.rerooted(r).encoding() < own) {
            return;
        }
        self.found.push(table);
    }
}

/// One standard coset table per conjugacy class of subgroups of index at most
/// `max_index`, ordered by index and then by table encoding.
pub fn low_index_subgroups(pres: &OrbiPresentation, max_index: usize) -> Result<Vec<CosetTable>> {
    low_index_subgroups_with_budget(&pres.presentation, max_index, DEFAULT_SEARCH_BUDGET)
}

pub fn low_index_subgroups_with_budget(
    pres: &Presentation,
    max_index: usize,
    budget: usize,
) -> Result<Vec<CosetTable>> {
    if max_index == 0 {
        return Err(Error::Invalid("max_index must be at least 1".into()));
    }
    let ngens = pres.num_generators();
    let relators: Vec<Vec<usize>> = pres
        .relators
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r: &Word| {
            r.iter()
                .map(|&x| {
                    let g = (x.unsigned_abs() - 1) as usize;
                    if x > 0 {
                        2 * g
                    } else {
                        2 * g + 1
                    }
                })
                .collect()
        })
        .collect();
    let mut search = Search { pres, relators, max_index, nodes: 0, budget, found: Vec::new() };
    let root = Partial { ncols: 2 * ngens, cosets: 1, table: vec![UNDEF; 2 * ngens] };
    search.visit(root)?;
    let mut found = search.found;
    found.sort_by(|a, b| a.index().cmp(&b.index()).then_with(|| a.encoding().cmp(&b.encoding())));
    Ok(found)
}
