//! Structural properties: gradedness, distributivity, modular triples, left
//! modular elements and chains, supersolvability.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Chain, Lattice};

/// Verdict for one property, with a witness for existential truths and a
/// counterexample for universal failures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Vec<usize>>,
}

impl PropertyReport {
    pub fn pass(property: &str) -> Self {
        PropertyReport {
            property: property.to_string(),
            verdict: true,
            witness: None,
            counterexample: None,
        }
    }

    pub fn witnessed(property: &str, witness: Vec<usize>) -> Self {
        PropertyReport {
            witness: Some(witness),
            ..Self::pass(property)
        }
    }

    pub fn fail(property: &str, counterexample: Vec<usize>) -> Self {
        PropertyReport {
            property: property.to_string(),
            verdict: false,
            witness: None,
            counterexample: Some(counterexample),
        }
    }

    pub fn absent(property: &str) -> Self {
        PropertyReport {
            verdict: false,
            ..Self::pass(property)
        }
    }
}

/// The properties addressable by name from catalogs and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Graded,
    Distributive,
    Modular,
    LeftModular,
    Supersolvable,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Graded,
        Property::Distributive,
        Property::Modular,
        Property::LeftModular,
        Property::Supersolvable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Graded => "graded",
            Property::Distributive => "distributive",
            Property::Modular => "modular",
            Property::LeftModular => "left-modular",
            Property::Supersolvable => "supersolvable",
        }
    }

    pub fn parse(name: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn evaluate(self, lattice: &Lattice) -> PropertyReport {
        match self {
            Property::Graded => is_graded(lattice),
            Property::Distributive => is_distributive(lattice),
            Property::Modular => is_modular(lattice),
            Property::LeftModular => match find_left_modular_chain(lattice) {
                Some(chain) => PropertyReport::witnessed("left-modular", chain.into_elements()),
                None => PropertyReport::absent("left-modular"),
            },
            Property::Supersolvable => is_supersolvable(lattice),
        }
    }
}

/// Every cover steps the height by exactly one. For finite bounded lattices
/// this is the same as all maximal chains of every interval having equal
/// length.
pub fn is_graded(lattice: &Lattice) -> PropertyReport {
    match lattice
        .covers()
        .iter()
        .find(|&&(a, b)| lattice.height(b) != lattice.height(a) + 1)
    {
        Some(&(a, b)) => PropertyReport::fail("graded", vec![a, b]),
        None => PropertyReport::pass("graded"),
    }
}

pub fn distributive_triple(lattice: &Lattice, a: usize, b: usize, c: usize) -> bool {
    lattice.meet(a, lattice.join(b, c)) == lattice.join(lattice.meet(a, b), lattice.meet(a, c))
}

pub fn is_distributive(lattice: &Lattice) -> PropertyReport {
    let all: Vec<usize> = lattice.elements().collect();
    match distributivity_violation(lattice, &all) {
        Some(t) => PropertyReport::fail("distributive", t),
        None => PropertyReport::pass("distributive"),
    }
}

/// First triple of `members` violating `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`.
/// `members` should be closed under meet and join.
pub fn distributivity_violation(lattice: &Lattice, members: &[usize]) -> Option<Vec<usize>> {
    for &a in members {
        for &b in members {
            for &c in members {
                if c < b {
                    continue;
                }
                if !distributive_triple(lattice, a, b, c) {
                    return Some(vec![a, b, c]);
                }
            }
        }
    }
    None
}

/// `M(x, y, z)`: `(y ∨ x) ∧ z = y ∨ (x ∧ z)`, defined for `y ≤ z`.
pub fn modular_triple(lattice: &Lattice, x: usize, y: usize, z: usize) -> Result<bool> {
    if !lattice.leq(y, z) {
        return Err(Error::NotComparable(y, z));
    }
    Ok(modular_unchecked(lattice, x, y, z))
}

#[inline]
pub(crate) fn modular_unchecked(lattice: &Lattice, x: usize, y: usize, z: usize) -> bool {
    lattice.meet(lattice.join(y, x), z) == lattice.join(y, lattice.meet(x, z))
}

pub fn is_modular(lattice: &Lattice) -> PropertyReport {
    for x in lattice.elements() {
        for y in lattice.elements() {
            for z in lattice.up_set(y).iter() {
                if !modular_unchecked(lattice, x, y, z) {
                    return PropertyReport::fail("modular", vec![x, y, z]);
                }
            }
        }
    }
    PropertyReport::pass("modular")
}

/// `x` is left modular when `M(x, y, z)` holds for every `y ≤ z`; the
/// counterexample is the offending `(y, z)`.
pub fn is_left_modular_element(lattice: &Lattice, x: usize) -> PropertyReport {
    match left_modular_violation(lattice, x) {
        Some((y, z)) => PropertyReport::fail("left-modular-element", vec![y, z]),
        None => PropertyReport::witnessed("left-modular-element", vec![x]),
    }
}

fn left_modular_violation(lattice: &Lattice, x: usize) -> Option<(usize, usize)> {
    for y in lattice.elements() {
        for z in lattice.up_set(y).iter() {
            if !modular_unchecked(lattice, x, y, z) {
                return Some((y, z));
            }
        }
    }
    None
}

/// Flags for every element: is it left modular?
pub fn left_modular_elements(lattice: &Lattice) -> Vec<bool> {
    lattice
        .elements()
        .map(|x| left_modular_violation(lattice, x).is_none())
        .collect()
}

/// First maximal chain (in lexicographic id order) made of left modular
/// elements, if any.
pub fn find_left_modular_chain(lattice: &Lattice) -> Option<Chain> {
    let flags = left_modular_elements(lattice);
    left_modular_chain_from(lattice, &flags)
}

pub(crate) fn left_modular_chain_from(lattice: &Lattice, flags: &[bool]) -> Option<Chain> {
    fn dfs(lattice: &Lattice, flags: &[bool], path: &mut Vec<usize>) -> bool {
        let last = *path.last().unwrap();
        if last == lattice.top() {
            return true;
        }
        for &next in lattice.upper_covers(last) {
            if flags[next] {
                path.push(next);
                if dfs(lattice, flags, path) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let mut path = vec![lattice.bottom()];
    dfs(lattice, flags, &mut path).then(|| Chain::new(lattice, path).unwrap())
}

/// Every maximal chain consisting of left modular elements.
pub fn left_modular_chains(lattice: &Lattice) -> Vec<Chain> {
    let flags = left_modular_elements(lattice);
    lattice
        .maximal_chains()
        .into_iter()
        .filter(|c| c.elements().iter().all(|&x| flags[x]))
        .collect()
}

/// Is the sublattice generated by the two chains distributive? Returns the
/// violating triple if not.
pub fn chain_pair_violation(lattice: &Lattice, m: &Chain, c: &Chain) -> Option<Vec<usize>> {
    let mut generators = m.elements().to_vec();
    generators.extend_from_slice(c.elements());
    let generated = lattice.sublattice_generated(&generators);
    distributivity_violation(lattice, &generated)
}

/// Supersolvable: some maximal chain `m` generates a distributive sublattice
/// together with every other maximal chain. Candidates with more left modular
/// elements are tried first. The witness is the M-chain; when no candidate
/// works, the counterexample is a distributivity violation found for the
/// first candidate tried.
pub fn is_supersolvable(lattice: &Lattice) -> PropertyReport {
    let flags = left_modular_elements(lattice);
    let chains = lattice.maximal_chains();
    let mut candidates: Vec<&Chain> = chains.iter().collect();
    candidates.sort_by_key(|c| std::cmp::Reverse(c.elements().iter().filter(|&&x| flags[x]).count()));

    let found = candidates.par_iter().find_map_first(|m| {
        chains
            .iter()
            .all(|c| chain_pair_violation(lattice, m, c).is_none())
            .then(|| (*m).clone())
    });
    match found {
        Some(m) => PropertyReport::witnessed("supersolvable", m.into_elements()),
        None => {
            let first = candidates[0];
            let violation = chains
                .iter()
                .find_map(|c| chain_pair_violation(lattice, first, c))
                .expect("a failing candidate has a violating chain");
            PropertyReport::fail("supersolvable", violation)
        }
    }
}

/// `(y ∨ x) ∧ z` for `y ≤ z`.
pub fn induced_element(lattice: &Lattice, x: usize, y: usize, z: usize) -> Result<usize> {
    if !lattice.leq(y, z) {
        return Err(Error::NotComparable(y, z));
    }
    Ok(lattice.meet(lattice.join(y, x), z))
}

/// The elements `(y ∨ xᵢ) ∧ z` of a left modular maximal chain, deduplicated,
/// as a chain of `[y, z]`.
pub fn induced_chain(lattice: &Lattice, xchain: &Chain, y: usize, z: usize) -> Result<Chain> {
    if !lattice.leq(y, z) {
        return Err(Error::NotComparable(y, z));
    }
    if !xchain.is_maximal(lattice) {
        return Err(Error::NotLeftModularChain("not a maximal chain".into()));
    }
    if let Some(&bad) = xchain
        .elements()
        .iter()
        .find(|&&x| left_modular_violation(lattice, x).is_some())
    {
        return Err(Error::NotLeftModularChain(format!("element {bad} is not left modular")));
    }
    let mut out: Vec<usize> = Vec::new();
    for &x in xchain.elements() {
        let e = lattice.meet(lattice.join(y, x), z);
        if out.last() != Some(&e) {
            out.push(e);
        }
    }
    Chain::new(lattice, out)
}
