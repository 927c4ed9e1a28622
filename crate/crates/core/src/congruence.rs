//! Lattice congruences, quotients, and the maximum graded quotient.
//!
//! The relation "identified by every homomorphism into a graded lattice" is
//! realized as the common refinement of all congruences whose quotient is
//! graded, since homomorphic images are exactly quotients by congruences.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::properties::{is_graded, PropertyReport};

pub const DEFAULT_CONGRUENCE_CAP: usize = 1 << 20;

/// A partition of the elements, stored as a class index per element. Class
/// indices are normalized to order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Congruence {
    class_of: Vec<usize>,
}

impl Congruence {
    pub fn equality(size: usize) -> Congruence {
        Congruence {
            class_of: (0..size).collect(),
        }
    }

    pub fn total(size: usize) -> Congruence {
        Congruence {
            class_of: vec![0; size],
        }
    }

    /// Checks that the partition is compatible with meet and join.
    pub fn new(lattice: &Lattice, labels: &[usize]) -> Result<Congruence> {
        if labels.len() != lattice.size() {
            return Err(Error::IncompatiblePartition(format!(
                "{} labels for {} elements",
                labels.len(),
                lattice.size()
            )));
        }
        let c = Congruence::normalized(labels);
        if let Some((a, b, z)) = c.violation(lattice) {
            return Err(Error::IncompatiblePartition(format!(
                "{a} and {b} share a class but their meets or joins with {z} do not"
            )));
        }
        Ok(c)
    }

    fn normalized(labels: &[usize]) -> Congruence {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let class_of = labels
            .iter()
            .map(|&l| match seen.iter().find(|(old, _)| *old == l) {
                Some(&(_, id)) => id,
                None => {
                    let id = seen.len();
                    seen.push((l, id));
                    id
                }
            })
            .collect();
        Congruence { class_of }
    }

    fn violation(&self, lattice: &Lattice) -> Option<(usize, usize, usize)> {
        let mut rep = vec![usize::MAX; self.num_classes()];
        for x in lattice.elements() {
            let c = self.class_of[x];
            if rep[c] == usize::MAX {
                rep[c] = x;
                continue;
            }
            let r = rep[c];
            for z in lattice.elements() {
                if !self.same(lattice.meet(x, z), lattice.meet(r, z))
                    || !self.same(lattice.join(x, z), lattice.join(r, z))
                {
                    return Some((r, x, z));
                }
            }
        }
        None
    }

    pub fn is_compatible(&self, lattice: &Lattice) -> bool {
        self.violation(lattice).is_none()
    }

    pub fn size(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.class_of
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn num_classes(&self) -> usize {
        self.class_of.iter().max().map_or(0, |&m| m + 1)
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    pub fn is_equality(&self) -> bool {
        self.num_classes() == self.size()
    }

    /// Every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        let mut target = vec![usize::MAX; self.num_classes()];
        self.class_of.iter().zip(&other.class_of).all(|(&c, &d)| {
            if target[c] == usize::MAX {
                target[c] = d;
            }
            target[c] == d
        })
    }

    /// Common refinement.
    pub fn meet(&self, other: &Congruence) -> Congruence {
        let pairs: Vec<usize> = self
            .class_of
            .iter()
            .zip(&other.class_of)
            .map(|(&a, &b)| a * other.size() + b)
            .collect();
        Congruence::normalized(&pairs)
    }

    /// Transitive closure of the union. For congruences of a lattice this is
    /// again a congruence.
    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.size());
        for part in [self, other] {
            let mut first = vec![usize::MAX; part.num_classes()];
            for (x, &c) in part.class_of.iter().enumerate() {
                if first[c] == usize::MAX {
                    first[c] = x;
                } else {
                    uf.union(first[c], x);
                }
            }
        }
        uf.into_congruence()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_congruence(mut self) -> Congruence {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Congruence::normalized(&roots)
    }
}

/// Least congruence identifying `a` and `b`. Every pair merged by the
/// union-find is pushed through all translations `t ↦ t ∧ z`, `t ↦ t ∨ z`.
pub fn principal_congruence(lattice: &Lattice, a: usize, b: usize) -> Congruence {
    let mut uf = UnionFind::new(lattice.size());
    let mut pending = Vec::new();
    if uf.union(a, b) {
        pending.push((a, b));
    }
    while let Some((x, y)) = pending.pop() {
        for z in lattice.elements() {
            for (p, q) in [
                (lattice.meet(x, z), lattice.meet(y, z)),
                (lattice.join(x, z), lattice.join(y, z)),
            ] {
                if uf.union(p, q) {
                    pending.push((p, q));
                }
            }
        }
    }
    uf.into_congruence()
}

/// Every congruence, as joins of the principal congruences of covers, sorted.
pub fn all_congruences(lattice: &Lattice, cap: usize) -> Result<Vec<Congruence>> {
    let mut seeds: Vec<Congruence> = lattice
        .covers()
        .par_iter()
        .map(|&(a, b)| principal_congruence(lattice, a, b))
        .collect();
    seeds.sort();
    seeds.dedup();

    let mut seen: HashSet<Congruence> = HashSet::new();
    let mut frontier = vec![Congruence::equality(lattice.size())];
    seen.insert(frontier[0].clone());
    for s in &seeds {
        if seen.insert(s.clone()) {
            frontier.push(s.clone());
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for theta in &frontier {
            for s in &seeds {
                if s.refines(theta) {
                    continue;
                }
                let j = theta.join(s);
                if !seen.contains(&j) {
                    seen.insert(j.clone());
                    next.push(j);
                }
            }
            if seen.len() > cap {
                return Err(Error::TooLarge {
                    what: "congruence count".into(),
                    cap,
                });
            }
        }
        frontier = next;
    }
    let mut out: Vec<Congruence> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub lattice: Lattice,
    /// Class (= quotient element id) of each original element.
    pub projection: Vec<usize>,
}

/// `L/θ`, ordered by `[a] ≤ [b]` iff `a ∨ b ≡ b`.
pub fn quotient(lattice: &Lattice, theta: &Congruence) -> Result<Quotient> {
    if theta.size() != lattice.size() {
        return Err(Error::IncompatiblePartition(format!(
            "partition of {} elements for a lattice of {}",
            theta.size(),
            lattice.size()
        )));
    }
    if let Some((a, b, z)) = theta.violation(lattice) {
        return Err(Error::IncompatiblePartition(format!(
            "{a} and {b} share a class but their meets or joins with {z} do not"
        )));
    }
    let reps: Vec<usize> = theta.classes().iter().map(|c| c[0]).collect();
    let q = Lattice::from_order(reps.len(), |a, b| {
        theta.class_of(lattice.join(reps[a], reps[b])) == b
    })?;
    Ok(Quotient {
        lattice: q,
        projection: theta.labels().to_vec(),
    })
}

fn has_graded_quotient(lattice: &Lattice, theta: &Congruence) -> bool {
    quotient(lattice, theta)
        .map(|q| is_graded(&q.lattice).verdict)
        .expect("enumerated congruences are compatible")
}

/// The congruence `∼`: common refinement of every congruence whose quotient
/// is graded.
pub fn g_congruence(lattice: &Lattice, cap: usize) -> Result<Congruence> {
    let all = all_congruences(lattice, cap)?;
    Ok(g_from(lattice, &all))
}

pub(crate) fn g_from(lattice: &Lattice, all: &[Congruence]) -> Congruence {
    all.par_iter()
        .filter(|theta| has_graded_quotient(lattice, theta))
        .cloned()
        .reduce(|| Congruence::total(lattice.size()), |a, b| a.meet(&b))
}

/// `L/∼` when it is graded; `None` means `L` has no maximum graded quotient.
pub fn maximum_graded_quotient(lattice: &Lattice, cap: usize) -> Result<Option<Quotient>> {
    let g = g_congruence(lattice, cap)?;
    let q = quotient(lattice, &g)?;
    Ok(is_graded(&q.lattice).verdict.then_some(q))
}

/// Checks in `L/∼`: whenever `[x] ⪯ [y] ⪯ [z]`, `[x] ≤ [u] ≤ [v] ≤ [z]`,
/// `[u] ∨ [y] = [z]` and `[v] ∧ [y] = [x]`, then `[u] = [v]`. The
/// counterexample lists the least representatives of `x, y, z, u, v`.
pub fn lemma1_check(lattice: &Lattice, cap: usize) -> Result<PropertyReport> {
    let g = g_congruence(lattice, cap)?;
    let q = quotient(lattice, &g)?;
    let reps: Vec<usize> = g.classes().iter().map(|c| c[0]).collect();
    Ok(match collapse_violation(&q.lattice) {
        Some(t) => PropertyReport::fail("lemma1", t.iter().map(|&c| reps[c]).collect()),
        None => PropertyReport::pass("lemma1"),
    })
}

/// The same statement evaluated directly in `l`.
pub fn collapse_violation(l: &Lattice) -> Option<[usize; 5]> {
    for x in l.elements() {
        let mids: Vec<usize> = std::iter::once(x).chain(l.upper_covers(x).iter().copied()).collect();
        for &y in &mids {
            let tops: Vec<usize> = std::iter::once(y).chain(l.upper_covers(y).iter().copied()).collect();
            for &z in &tops {
                let between: Vec<usize> = l.up_set(x).intersection(l.down_set(z)).iter().collect();
                for &u in &between {
                    if l.join(u, y) != z {
                        continue;
                    }
                    for &v in &between {
                        if u != v && l.leq(u, v) && l.meet(v, y) == x {
                            return Some([x, y, z, u, v]);
                        }
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions as c;

    #[test]
    fn principal_examples() {
        let chain = c::chain(2).unwrap();
        assert!(principal_congruence(&chain, 1, 1).is_equality());
        assert_eq!(principal_congruence(&chain, 0, 1).labels(), &[0, 0, 1]);
        let m3 = c::diamond();
        for a in m3.elements() {
            for b in m3.elements() {
                if a != b {
                    assert_eq!(principal_congruence(&m3, a, b), Congruence::total(5));
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_congruences(&c::chain(2).unwrap(), 100).unwrap().len(), 4);
        assert_eq!(all_congruences(&c::diamond(), 100).unwrap().len(), 2);
        assert_eq!(all_congruences(&c::boolean(2).unwrap(), 100).unwrap().len(), 4);
        assert!(matches!(
            all_congruences(&c::chain(6).unwrap(), 10),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn quotients() {
        let n5 = c::pentagon();
        let eq = quotient(&n5, &Congruence::equality(5)).unwrap();
        assert_eq!(eq.lattice.canonical_form(), n5.canonical_form());
        let one = quotient(&n5, &Congruence::total(5)).unwrap();
        assert_eq!(one.lattice.size(), 1);
        let theta = principal_congruence(&n5, 1, 2);
        assert_eq!(theta.classes(), vec![vec![0], vec![1, 2], vec![3], vec![4]]);
        let q = quotient(&n5, &theta).unwrap();
        assert_eq!(q.lattice.canonical_form(), c::boolean(2).unwrap().canonical_form());
        let bad = Congruence::normalized(&[0, 1, 1, 2, 2]);
        assert!(matches!(quotient(&n5, &bad), Err(Error::IncompatiblePartition(_))));
        assert!(Congruence::new(&n5, &[0, 1, 1, 2, 2]).is_err());
        assert!(Congruence::new(&n5, &[7, 3, 3, 9, 1]).is_ok());
    }

    #[test]
    fn graded_quotients() {
        let b3 = c::boolean(3).unwrap();
        assert!(g_congruence(&b3, 100).unwrap().is_equality());
        assert_eq!(maximum_graded_quotient(&b3, 100).unwrap().unwrap().lattice, b3);

        let f1 = c::figure1();
        assert!(g_congruence(&f1, 100).unwrap().is_equality());
        assert!(maximum_graded_quotient(&f1, 100).unwrap().is_none());

        let n5 = c::pentagon();
        let g = g_congruence(&n5, 100).unwrap();
        assert_eq!(g.classes(), vec![vec![0], vec![1, 2], vec![3], vec![4]]);
        let q = maximum_graded_quotient(&n5, 100).unwrap().unwrap();
        assert_eq!(q.lattice.canonical_form(), c::boolean(2).unwrap().canonical_form());
    }

    #[test]
    fn lemma1_on_named() {
        assert!(lemma1_check(&c::figure1(), 100).unwrap().verdict);
        for k in 0..=4 {
            let g = c::grid_quotient(k).unwrap();
            assert!(lemma1_check(&g.lattice, 1 << 16).unwrap().verdict);
        }
    }

    #[test]
    fn join_and_meet_of_partitions() {
        let a = Congruence::normalized(&[0, 0, 1, 2]);
        let b = Congruence::normalized(&[0, 1, 1, 2]);
        assert_eq!(a.join(&b).labels(), &[0, 0, 0, 1]);
        assert!(a.meet(&b).is_equality());
        assert!(a.refines(&a.join(&b)));
        assert!(!a.refines(&b));
    }
}
