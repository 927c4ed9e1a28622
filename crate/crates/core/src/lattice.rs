//! Finite bounded lattices stored as dense id tables.
//!
//! Elements are the ids `0..size`. A [`Lattice`] is built from its cover
//! relation and keeps the full order relation (as bit-set rows) together with
//! precomputed meet and join tables, so every lattice operation after
//! construction is a table lookup.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::canon::{self, CanonicalKey};
use crate::error::{Bound, Error, Result};

#[derive(Clone, Debug)]
pub struct Lattice {
    size: usize,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    down: Vec<BitSet>,
    up: Vec<BitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    height: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.covers == other.covers
    }
}

impl Eq for Lattice {}

impl Lattice {
    /// Builds and validates a lattice from its cover pairs `(a, b)`, meaning
    /// `b` covers `a`. The input must be exactly the transitive reduction of
    /// the order; transitive edges are rejected rather than dropped.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Lattice> {
        if size == 0 {
            return Err(Error::Empty);
        }
        let mut upper = vec![Vec::new(); size];
        let mut lower = vec![Vec::new(); size];
        for &(a, b) in covers {
            for id in [a, b] {
                if id >= size {
                    return Err(Error::OutOfRange { id, size });
                }
            }
            if a == b {
                return Err(Error::CycleDetected(a));
            }
            upper[a].push(b);
            lower[b].push(a);
        }
        for list in upper.iter_mut().chain(lower.iter_mut()) {
            list.sort_unstable();
        }
        for (a, list) in upper.iter().enumerate() {
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::RedundantCover(a, w[0]));
            }
        }
        for list in lower.iter_mut() {
            list.dedup();
        }

        // Kahn's algorithm; leftover elements sit on a cycle.
        let mut indegree: Vec<usize> = lower.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..size).filter(|&x| indegree[x] == 0).collect();
        let mut topo = Vec::with_capacity(size);
        while let Some(x) = queue.pop_front() {
            topo.push(x);
            for &y in &upper[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        if topo.len() < size {
            let stuck = (0..size).find(|&x| indegree[x] > 0).unwrap_or(0);
            return Err(Error::CycleDetected(stuck));
        }

        let mut up = vec![BitSet::new(size); size];
        for &x in topo.iter().rev() {
            let mut row = BitSet::new(size);
            row.insert(x);
            for &y in &upper[x] {
                row.union_with(&up[y]);
            }
            up[x] = row;
        }
        for (a, list) in upper.iter().enumerate() {
            for &b in list {
                if list.iter().any(|&c| c != b && up[c].contains(b)) {
                    return Err(Error::RedundantCover(a, b));
                }
            }
        }
        let mut down = vec![BitSet::new(size); size];
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b].insert(a);
            }
        }

        let mut height = vec![0usize; size];
        for &x in &topo {
            height[x] = lower[x].iter().map(|&a| height[a] + 1).max().unwrap_or(0);
        }

        let minimal: Vec<usize> = (0..size).filter(|&x| lower[x].is_empty()).collect();
        let maximal: Vec<usize> = (0..size).filter(|&x| upper[x].is_empty()).collect();
        if minimal.len() > 1 {
            return Err(Error::NotALattice {
                a: minimal[0],
                b: minimal[1],
                bound: Bound::Meet,
            });
        }
        if maximal.len() > 1 {
            return Err(Error::NotALattice {
                a: maximal[0],
                b: maximal[1],
                bound: Bound::Join,
            });
        }
        let bottom = minimal[0];
        let top = maximal[0];

        let meet = bound_table(size, &down, &height, Bound::Meet)?;
        let join = bound_table(size, &up, &height, Bound::Join)?;

        let mut cover_list: Vec<(usize, usize)> = upper
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().map(move |&b| (a, b)))
            .collect();
        cover_list.sort_unstable();

        Ok(Lattice {
            size,
            covers: cover_list,
            upper,
            lower,
            down,
            up,
            meet,
            join,
            height,
            bottom,
            top,
        })
    }

    /// Builds a lattice from an order predicate, computing its transitive
    /// reduction first.
    pub fn from_order(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Lattice> {
        let mut down = vec![BitSet::new(size); size];
        for (b, row) in down.iter_mut().enumerate() {
            for a in 0..size {
                if a != b && leq(a, b) {
                    row.insert(a);
                }
            }
        }
        Lattice::from_covers(size, &reduce(&down))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b] as usize
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Length of the longest chain from the bottom to `x`.
    pub fn height(&self, x: usize) -> usize {
        self.height[x]
    }

    pub fn heights(&self) -> &[usize] {
        &self.height
    }

    pub fn down_set(&self, x: usize) -> &BitSet {
        &self.down[x]
    }

    pub fn up_set(&self, x: usize) -> &BitSet {
        &self.up[x]
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.upper[a].binary_search(&b).is_ok()
    }

    /// `a ⪯ b`: either `b` covers `a` or they are equal.
    pub fn covers_or_equal(&self, a: usize, b: usize) -> bool {
        a == b || self.is_cover(a, b)
    }

    fn check_id(&self, id: usize) -> Result<()> {
        if id < self.size {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                id,
                size: self.size,
            })
        }
    }

    fn check_leq(&self, y: usize, z: usize) -> Result<()> {
        self.check_id(y)?;
        self.check_id(z)?;
        if self.leq(y, z) {
            Ok(())
        } else {
            Err(Error::NotComparable(y, z))
        }
    }

    /// The interval `[y, z]` as a lattice of its own, with the map from new
    /// ids to ids of `self`.
    pub fn interval(&self, y: usize, z: usize) -> Result<(Lattice, Vec<usize>)> {
        self.check_leq(y, z)?;
        let members: Vec<usize> = self.up[y].intersection(&self.down[z]).iter().collect();
        let mut index = vec![usize::MAX; self.size];
        for (i, &x) in members.iter().enumerate() {
            index[x] = i;
        }
        let covers: Vec<(usize, usize)> = self
            .covers
            .iter()
            .filter(|&&(a, b)| index[a] != usize::MAX && index[b] != usize::MAX)
            .map(|&(a, b)| (index[a], index[b]))
            .collect();
        Ok((Lattice::from_covers(members.len(), &covers)?, members))
    }

    /// The sub-poset induced on `members` (which must be closed under meet and
    /// join, or at least form a lattice in the induced order), with its
    /// embedding. Covers of the result need not be covers of `self`.
    pub fn restrict(&self, members: &[usize]) -> Result<(Lattice, Vec<usize>)> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            self.check_id(m)?;
        }
        let sub = Lattice::from_order(members.len(), |a, b| self.leq(members[a], members[b]))?;
        Ok((sub, members))
    }

    /// All maximal chains, in lexicographic order of their id sequences.
    pub fn maximal_chains(&self) -> Vec<Chain> {
        self.saturated_chains(self.bottom, self.top)
    }

    pub fn maximal_chains_between(&self, y: usize, z: usize) -> Result<Vec<Chain>> {
        self.check_leq(y, z)?;
        Ok(self.saturated_chains(y, z))
    }

    fn saturated_chains(&self, y: usize, z: usize) -> Vec<Chain> {
        let mut out = Vec::new();
        let mut path = vec![y];
        self.chain_dfs(z, &mut path, &mut out);
        out
    }

    fn chain_dfs(&self, z: usize, path: &mut Vec<usize>, out: &mut Vec<Chain>) {
        let last = *path.last().unwrap();
        if last == z {
            out.push(Chain(path.clone()));
            return;
        }
        for &next in &self.upper[last] {
            if self.leq(next, z) {
                path.push(next);
                self.chain_dfs(z, path, out);
                path.pop();
            }
        }
    }

    /// Smallest subset containing `generators` that is closed under pairwise
    /// meets and joins. Each round adds every meet and join of a pair drawn
    /// from the previous round's set, until nothing new appears.
    pub fn sublattice_generated(&self, generators: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.size];
        let mut current: Vec<usize> = Vec::new();
        for &g in generators {
            if !member[g] {
                member[g] = true;
                current.push(g);
            }
        }
        let mut fresh = current.clone();
        while !fresh.is_empty() {
            let mut next = Vec::new();
            for &a in &fresh {
                for &b in &current {
                    for c in [self.meet(a, b), self.join(a, b)] {
                        if !member[c] {
                            member[c] = true;
                            next.push(c);
                        }
                    }
                }
            }
            current.extend_from_slice(&next);
            fresh = next;
        }
        current.sort_unstable();
        current
    }

    /// The order dual: same ids, every cover reversed.
    pub fn dual(&self) -> Lattice {
        let covers: Vec<(usize, usize)> = self.covers.iter().map(|&(a, b)| (b, a)).collect();
        Lattice::from_covers(self.size, &covers).expect("dual of a lattice is a lattice")
    }

    /// Renames element `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Lattice> {
        if perm.len() != self.size {
            return Err(Error::ParamOutOfRange(format!(
                "permutation of length {} for lattice of size {}",
                perm.len(),
                self.size
            )));
        }
        let covers: Vec<(usize, usize)> =
            self.covers.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        Lattice::from_covers(self.size, &covers)
    }

    /// Isomorphism-invariant key: equal keys iff the lattices are isomorphic.
    pub fn canonical_form(&self) -> CanonicalKey {
        self.canonical_labeling().0
    }

    /// Canonical key together with the canonical order: `order[p]` is the
    /// element placed at canonical position `p`.
    pub fn canonical_labeling(&self) -> (CanonicalKey, Vec<usize>) {
        canon::canonical_labeling(self.size, &self.upper, &self.lower, |a, b| self.leq(a, b))
    }

    /// The isomorphic copy whose ids are the canonical positions.
    pub fn canonicalized(&self) -> Lattice {
        let (_, order) = self.canonical_labeling();
        let mut perm = vec![0; self.size];
        for (pos, &x) in order.iter().enumerate() {
            perm[x] = pos;
        }
        self.relabel(&perm).expect("relabeling preserves validity")
    }
}

/// Transitive reduction of a strict order given as strict down-set rows.
pub(crate) fn reduce(strict_down: &[BitSet]) -> Vec<(usize, usize)> {
    let n = strict_down.len();
    let mut covers = Vec::new();
    for (b, row) in strict_down.iter().enumerate() {
        let mut below_others = BitSet::new(n);
        for c in row.iter() {
            below_others.union_with(&strict_down[c]);
        }
        for a in row.iter() {
            if !below_others.contains(a) {
                covers.push((a, b));
            }
        }
    }
    covers
}

fn bound_table(size: usize, rows: &[BitSet], height: &[usize], kind: Bound) -> Result<Vec<u32>> {
    // For meets `rows` are down-sets and the bound is the highest common
    // element; for joins they are up-sets and the bound is the lowest.
    let mut table = vec![0u32; size * size];
    for a in 0..size {
        for b in a..size {
            let value = if rows[b].contains(a) {
                a
            } else if rows[a].contains(b) {
                b
            } else {
                let common = rows[a].intersection(&rows[b]);
                let best = common.iter().max_by_key(|&c| match kind {
                    Bound::Meet => height[c] as isize,
                    Bound::Join => -(height[c] as isize),
                });
                match best {
                    Some(c) if common.is_subset(&rows[c]) => c,
                    _ => return Err(Error::NotALattice { a, b, bound: kind }),
                }
            };
            table[a * size + b] = value as u32;
            table[b * size + a] = value as u32;
        }
    }
    Ok(table)
}

/// A strictly increasing sequence of elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chain(Vec<usize>);

impl Chain {
    pub fn new(lattice: &Lattice, elements: Vec<usize>) -> Result<Chain> {
        for &x in &elements {
            lattice.check_id(x)?;
        }
        if elements.is_empty() {
            return Err(Error::NotAChain("empty sequence".into()));
        }
        if let Some(w) = elements.windows(2).find(|w| !lattice.lt(w[0], w[1])) {
            return Err(Error::NotAChain(format!("{} is not below {}", w[0], w[1])));
        }
        Ok(Chain(elements))
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn into_elements(self) -> Vec<usize> {
        self.0
    }

    /// Number of cover steps, i.e. one less than the number of elements.
    pub fn length(&self) -> usize {
        self.0.len() - 1
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().unwrap()
    }

    pub fn is_saturated(&self, lattice: &Lattice) -> bool {
        self.0.windows(2).all(|w| lattice.is_cover(w[0], w[1]))
    }

    pub fn is_maximal(&self, lattice: &Lattice) -> bool {
        self.first() == lattice.bottom() && self.last() == lattice.top() && self.is_saturated(lattice)
    }
}
