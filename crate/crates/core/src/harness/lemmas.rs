//! Structural facts about left modular elements and chains, each checked
//! wherever its hypotheses hold.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::congruence::lemma1_check;
use crate::error::Result;
use crate::lattice::{Chain, Lattice};
use crate::properties::{
    find_left_modular_chain, induced_chain, induced_element, is_graded, left_modular_elements,
    modular_unchecked, PropertyReport,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSuiteReport {
    /// Collapse property of the maximum graded quotient.
    pub graded_quotient_collapse: PropertyReport,
    /// Covers between left modular elements persist under joins and meets.
    pub cover_persistence: PropertyReport,
    /// Induced elements are left modular in their interval.
    pub interval_left_modularity: PropertyReport,
    /// Induced chains are maximal left modular chains of their interval.
    pub induced_chains: PropertyReport,
    /// `M(w, xᵢ, xⱼ)` along a left modular chain of a graded lattice, and
    /// gradedness of the sublattice generated by the chain and `w`.
    pub chain_modular_pairs: PropertyReport,
}

impl LemmaSuiteReport {
    pub fn all(&self) -> [&PropertyReport; 5] {
        [
            &self.graded_quotient_collapse,
            &self.cover_persistence,
            &self.interval_left_modularity,
            &self.induced_chains,
            &self.chain_modular_pairs,
        ]
    }

    pub fn passed(&self) -> bool {
        self.all().iter().all(|r| r.verdict)
    }
}

/// For left modular `u ⋖ v` and any `z`: `u ∨ z ⪯ v ∨ z` and `u ∧ z ⪯ v ∧ z`.
/// Counterexample `[u, v, z]`.
pub fn check_cover_persistence(lattice: &Lattice, lm: &[bool]) -> PropertyReport {
    const NAME: &str = "cover-persistence";
    for &(u, v) in lattice.covers() {
        if !(lm[u] && lm[v]) {
            continue;
        }
        for z in lattice.elements() {
            if !lattice.covers_or_equal(lattice.join(u, z), lattice.join(v, z))
                || !lattice.covers_or_equal(lattice.meet(u, z), lattice.meet(v, z))
            {
                return PropertyReport::fail(NAME, vec![u, v, z]);
            }
        }
    }
    PropertyReport::pass(NAME)
}

/// For left modular `x` and `y < z`, `(x ∨ y) ∧ z` is left modular in
/// `[y, z]`. Counterexample `[x, y, z]`.
pub fn check_interval_left_modularity(lattice: &Lattice, lm: &[bool]) -> PropertyReport {
    const NAME: &str = "interval-left-modularity";
    let mut cache: HashMap<(usize, usize), (Vec<usize>, Vec<bool>)> = HashMap::new();
    for y in lattice.elements() {
        for z in lattice.elements().filter(|&z| lattice.lt(y, z)) {
            let (ids, flags) = cache.entry((y, z)).or_insert_with(|| {
                let (sub, ids) = lattice.interval(y, z).expect("y < z");
                (ids, left_modular_elements(&sub))
            });
            for x in lattice.elements().filter(|&x| lm[x]) {
                let e = induced_element(lattice, x, y, z).expect("y < z");
                let local = ids.iter().position(|&g| g == e).expect("element lies in interval");
                if !flags[local] {
                    return PropertyReport::fail(NAME, vec![x, y, z]);
                }
            }
        }
    }
    PropertyReport::pass(NAME)
}

/// A maximal left modular chain induces one in every interval `[y, z]`.
/// Counterexample `[y, z]` followed by the chain's elements.
pub fn check_induced_chains(lattice: &Lattice, chain: &Chain) -> PropertyReport {
    const NAME: &str = "induced-chains";
    for y in lattice.elements() {
        for z in lattice.elements().filter(|&z| lattice.leq(y, z)) {
            if induced_chain(lattice, chain, y, z).is_err() {
                let mut cx = vec![y, z];
                cx.extend_from_slice(chain.elements());
                return PropertyReport::fail(NAME, cx);
            }
        }
    }
    PropertyReport::witnessed(NAME, chain.elements().to_vec())
}

/// In a graded lattice with left modular maximal chain `x`: `M(w, xᵢ, xⱼ)`
/// for all `w` and `i < j`, and the sublattice generated by `x ∪ {w}` is
/// graded by the rank of `L`. Counterexample `[w, xᵢ, xⱼ]`, or `[w]` when
/// the generated sublattice is not graded that way.
pub fn check_chain_modular_pairs(lattice: &Lattice, chain: &Chain) -> PropertyReport {
    const NAME: &str = "chain-modular-pairs";
    let xs = chain.elements();
    for w in lattice.elements() {
        for (i, &xi) in xs.iter().enumerate() {
            for &xj in &xs[i + 1..] {
                if !modular_unchecked(lattice, w, xi, xj) {
                    return PropertyReport::fail(NAME, vec![w, xi, xj]);
                }
            }
        }
        let mut gens = xs.to_vec();
        gens.push(w);
        let members = lattice.sublattice_generated(&gens);
        let (k, ids) = lattice.restrict(&members).expect("sublattice");
        let inherited = k
            .covers()
            .iter()
            .all(|&(a, b)| lattice.height(ids[b]) == lattice.height(ids[a]) + 1);
        if !inherited {
            return PropertyReport::fail(NAME, vec![w]);
        }
    }
    PropertyReport::witnessed(NAME, xs.to_vec())
}

/// Runs every check whose hypotheses hold; the rest are reported as
/// vacuous passes.
pub fn verify_lemma_suite(lattice: &Lattice, congruence_cap: usize) -> Result<LemmaSuiteReport> {
    let lm = left_modular_elements(lattice);
    let chain = find_left_modular_chain(lattice);
    let graded = is_graded(lattice).verdict;
    Ok(LemmaSuiteReport {
        graded_quotient_collapse: lemma1_check(lattice, congruence_cap)?,
        cover_persistence: check_cover_persistence(lattice, &lm),
        interval_left_modularity: check_interval_left_modularity(lattice, &lm),
        induced_chains: match &chain {
            Some(c) => check_induced_chains(lattice, c),
            None => PropertyReport::pass("induced-chains"),
        },
        chain_modular_pairs: match &chain {
            Some(c) if graded => check_chain_modular_pairs(lattice, c),
            _ => PropertyReport::pass("chain-modular-pairs"),
        },
    })
}
