//! Checks that a graded lattice generated by a chain and one extra element is
//! a homomorphic image of the grid model `G(k)`.

use crate::constructions::{grid_quotient, GridQuotient};
use crate::error::{Error, Result};
use crate::lattice::{Chain, Lattice};
use crate::properties::{is_graded, PropertyReport};

pub fn universal_property_check(k: usize, target: &Lattice, chain: &Chain, w: usize) -> Result<PropertyReport> {
    universal_property_check_with(&grid_quotient(k)?, target, chain, w)
}

/// Same as [`universal_property_check`] with a prebuilt grid. The
/// counterexample is a pair `[a, b]` of grid ids whose meet or join is not
/// preserved, or `usize::MAX` followed by the target ids the map misses.
/// On success the witness is the image of each grid id.
pub fn universal_property_check_with(
    grid: &GridQuotient,
    target: &Lattice,
    chain: &Chain,
    w: usize,
) -> Result<PropertyReport> {
    const NAME: &str = "grid-universal-property";
    if w >= target.size() {
        return Err(Error::OutOfRange {
            id: w,
            size: target.size(),
        });
    }
    if chain.length() != grid.k {
        return Err(Error::HypothesisFailed(format!(
            "chain has length {}, expected {}",
            chain.length(),
            grid.k
        )));
    }
    if !is_graded(target).verdict {
        return Err(Error::HypothesisFailed("target lattice is not graded".into()));
    }
    let mut gens = chain.elements().to_vec();
    gens.push(w);
    if target.sublattice_generated(&gens).len() != target.size() {
        return Err(Error::HypothesisFailed(
            "chain and w do not generate the target lattice".into(),
        ));
    }
    let image = grid.evaluate(target, chain.elements(), w);
    let g = &grid.lattice;
    for a in g.elements() {
        for b in g.elements().skip(a + 1) {
            if image[g.meet(a, b)] != target.meet(image[a], image[b])
                || image[g.join(a, b)] != target.join(image[a], image[b])
            {
                return Ok(PropertyReport::fail(NAME, vec![a, b]));
            }
        }
    }
    let mut hit = vec![false; target.size()];
    for &x in &image {
        hit[x] = true;
    }
    let missed: Vec<usize> = target.elements().filter(|&x| !hit[x]).collect();
    if !missed.is_empty() {
        let mut cx = vec![usize::MAX];
        cx.extend(missed);
        return Ok(PropertyReport::fail(NAME, cx));
    }
    Ok(PropertyReport::witnessed(NAME, image))
}

/// Every chain of `lattice` (as a strictly increasing id list), including
/// single elements.
pub fn all_chains(lattice: &Lattice) -> Vec<Chain> {
    fn grow(l: &Lattice, path: &mut Vec<usize>, out: &mut Vec<Chain>) {
        out.push(Chain::new(l, path.clone()).expect("increasing"));
        let last = *path.last().unwrap();
        for next in l.elements().filter(|&n| l.lt(last, n)) {
            path.push(next);
            grow(l, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for start in lattice.elements() {
        grow(lattice, &mut vec![start], &mut out);
    }
    out
}

/// All `(chain, w)` pairs whose union generates `lattice`.
pub fn generating_pairs(lattice: &Lattice) -> Vec<(Chain, usize)> {
    let mut out = Vec::new();
    for chain in all_chains(lattice) {
        for w in lattice.elements() {
            let mut gens = chain.elements().to_vec();
            gens.push(w);
            if lattice.sublattice_generated(&gens).len() == lattice.size() {
                out.push((chain.clone(), w));
            }
        }
    }
    out
}
