//! Exhaustive generation of unlabeled finite lattices.
//!
//! A lattice with at least two elements is a finite meet-semilattice with a
//! bottom plus an adjoined top, and removing any maximal element of such a
//! semilattice leaves another one. So every semilattice of size `m + 1`
//! arises from one of size `m` by adding a new maximal element whose lower
//! covers form an antichain `A`, provided every old element `y` still has a
//! meet with it (the down-set of `A` intersected with `↓y` has a greatest
//! element). Children are deduplicated by canonical key at a single merge
//! point per level, which also fixes the output order.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::canon::{canonical_labeling, CanonicalKey};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

pub const DEFAULT_MAX_SIZE: usize = 11;

/// Down-set rows are single machine words.
const WORD_LIMIT: usize = 63;

/// Meet-semilattice with bottom `0`; `rows[x]` is the down-set of `x`.
#[derive(Clone, Debug)]
struct Semilattice {
    rows: Vec<u64>,
}

impl Semilattice {
    fn bottom_only() -> Self {
        Semilattice { rows: vec![1] }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    fn comparable(&self, a: usize, b: usize) -> bool {
        self.rows[a] >> b & 1 == 1 || self.rows[b] >> a & 1 == 1
    }

    fn antichains(&self) -> Vec<u64> {
        fn grow(s: &Semilattice, start: usize, chosen: &mut Vec<usize>, mask: u64, out: &mut Vec<u64>) {
            for e in start..s.len() {
                if chosen.iter().all(|&c| !s.comparable(c, e)) {
                    chosen.push(e);
                    let m = mask | 1 << e;
                    out.push(m);
                    grow(s, e + 1, chosen, m, out);
                    chosen.pop();
                }
            }
        }
        let mut out = Vec::new();
        grow(self, 0, &mut Vec::new(), 0, &mut out);
        out
    }

    /// Down-set of the new element (without itself) if adding it above the
    /// antichain keeps all meets.
    fn extension(&self, antichain: u64) -> Option<u64> {
        let mut below = 0u64;
        for a in bits(antichain) {
            below |= self.rows[a];
        }
        for (y, &row) in self.rows.iter().enumerate() {
            if below >> y & 1 == 1 {
                continue;
            }
            let common = below & row;
            if !bits(common).any(|e| common & !self.rows[e] == 0) {
                return None;
            }
        }
        Some(below)
    }

    fn children(&self) -> Vec<(CanonicalKey, Semilattice)> {
        let n = self.len();
        self.antichains()
            .into_iter()
            .filter_map(|a| self.extension(a))
            .map(|below| {
                let mut rows = self.rows.clone();
                rows.push(below | 1 << n);
                Semilattice { rows }.canonical()
            })
            .collect()
    }

    /// Upper and lower covers of the lattice obtained by adding a top.
    fn lattice_covers(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let n = self.len();
        let top = n;
        let mut upper = vec![Vec::new(); n + 1];
        let mut lower = vec![Vec::new(); n + 1];
        for b in 0..n {
            let strict = self.rows[b] & !(1 << b);
            let mut covered = 0u64;
            for c in bits(strict) {
                covered |= self.rows[c] & !(1 << c);
            }
            for a in bits(strict & !covered) {
                upper[a].push(b);
                lower[b].push(a);
            }
        }
        for x in 0..n {
            if upper[x].is_empty() {
                upper[x].push(top);
                lower[top].push(x);
            }
        }
        (upper, lower)
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        let top = self.len();
        b == top || (a != top && self.rows[b] >> a & 1 == 1)
    }

    /// Relabels into canonical order of the lattice with a top adjoined. The
    /// top always lands last and the bottom first, since they are the unique
    /// elements of greatest and least height.
    fn canonical(&self) -> (CanonicalKey, Semilattice) {
        let (upper, lower) = self.lattice_covers();
        let (key, order) = canonical_labeling(self.len() + 1, &upper, &lower, |a, b| self.leq(a, b));
        debug_assert_eq!(order[self.len()], self.len());
        let mut pos = vec![0usize; self.len()];
        for (p, &x) in order[..self.len()].iter().enumerate() {
            pos[x] = p;
        }
        let mut rows = vec![0u64; self.len()];
        for (x, &row) in self.rows.iter().enumerate() {
            for a in bits(row) {
                rows[pos[x]] |= 1 << pos[a];
            }
        }
        (key, Semilattice { rows })
    }

    fn to_lattice(&self) -> Lattice {
        let (upper, _) = self.lattice_covers();
        let covers: Vec<(usize, usize)> = upper
            .iter()
            .enumerate()
            .flat_map(|(a, ups)| ups.iter().map(move |&b| (a, b)))
            .collect();
        Lattice::from_covers(self.len() + 1, &covers).expect("semilattice with a top is a lattice")
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let b = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(b)
    })
}

fn check_cap(max_size: usize, cap: usize) -> Result<()> {
    if max_size > cap || max_size > WORD_LIMIT {
        return Err(Error::CapExceeded {
            requested: max_size,
            cap: cap.min(WORD_LIMIT),
        });
    }
    Ok(())
}

/// Level `m` holds the canonical semilattices of size `m` (lattices of size
/// `m + 1`), for `m = 1..=levels`.
fn semilattice_levels(levels: usize) -> Vec<Vec<Semilattice>> {
    let mut out: Vec<Vec<Semilattice>> = Vec::new();
    if levels == 0 {
        return out;
    }
    out.push(vec![Semilattice::bottom_only()]);
    for _ in 1..levels {
        let parents = out.last().unwrap();
        let merged: BTreeMap<CanonicalKey, Semilattice> = parents
            .par_iter()
            .flat_map_iter(|p| p.children())
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        out.push(merged.into_values().collect());
    }
    out
}

/// One representative per isomorphism class for every size `1..=max_size`,
/// grouped by size. Ids of each representative are its canonical labeling,
/// and each group is sorted by canonical key.
pub fn enumerate_by_size(max_size: usize, cap: usize) -> Result<Vec<Vec<Lattice>>> {
    check_cap(max_size, cap)?;
    let mut out = Vec::new();
    if max_size == 0 {
        return Ok(out);
    }
    out.push(vec![Lattice::from_covers(1, &[]).unwrap()]);
    for level in semilattice_levels(max_size - 1) {
        out.push(level.par_iter().map(Semilattice::to_lattice).collect());
    }
    Ok(out)
}

/// All lattices with at most `max_size` elements, smallest first.
pub fn enumerate_lattices(max_size: usize, cap: usize) -> Result<impl Iterator<Item = Lattice>> {
    Ok(enumerate_by_size(max_size, cap)?.into_iter().flatten())
}

/// Number of unlabeled lattices of each size `1..=max_size`, without
/// materializing them.
pub fn count_lattices(max_size: usize, cap: usize) -> Result<Vec<usize>> {
    check_cap(max_size, cap)?;
    if max_size == 0 {
        return Ok(Vec::new());
    }
    let mut counts = vec![1];
    counts.extend(semilattice_levels(max_size - 1).iter().map(Vec::len));
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(count_lattices(7, DEFAULT_MAX_SIZE).unwrap(), vec![1, 1, 1, 2, 5, 15, 53]);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            count_lattices(12, DEFAULT_MAX_SIZE),
            Err(Error::CapExceeded { requested: 12, cap: 11 })
        ));
        assert!(count_lattices(64, 100).is_err());
    }

    #[test]
    fn emitted_lattices_are_canonical_and_distinct() {
        let levels = enumerate_by_size(6, DEFAULT_MAX_SIZE).unwrap();
        for (i, level) in levels.iter().enumerate() {
            let mut keys = Vec::new();
            for l in level {
                assert_eq!(l.size(), i + 1);
                assert_eq!(*l, l.canonicalized());
                keys.push(l.canonical_form());
            }
            let n = keys.len();
            keys.sort();
            keys.dedup();
            assert_eq!(keys.len(), n);
        }
    }

    #[test]
    fn deterministic() {
        let a: Vec<_> = enumerate_lattices(7, 11).unwrap().map(|l| l.canonical_form()).collect();
        let b: Vec<_> = enumerate_lattices(7, 11).unwrap().map(|l| l.canonical_form()).collect();
        assert_eq!(a, b);
    }
}
