//! The down-set homomorphism certifying supersolvability, and the two-chain
//! identities it rests on.
//!
//! For chains `x₀ < … < x_r` and `y₀ < … < y_s` from bottom to top, set
//! `uⁱⱼ = xᵢ ∧ yⱼ` and `vⁱⱼ = xᵢ ∨ yⱼ`. For a down-set `I` of
//! `[1, r] × [1, s]`, `φ(I)` is the join of `uⁱⱼ` over `I` and `ψ(I)` is the
//! meet of `vⁱ⁻¹ⱼ₋₁` over the complement. `φ` preserves joins and `ψ` meets;
//! when they agree everywhere they form a homomorphism from a distributive
//! lattice onto the sublattice generated by the two chains.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{all_downsets, DownSet};
use crate::error::{Error, Result};
use crate::lattice::{Chain, Lattice};
use crate::properties::PropertyReport;

/// Default bound on `r · s` for down-set enumeration; covers every lattice
/// with at most 8 elements.
pub const DEFAULT_GRID_CAP: usize = 49;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UvTables {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    /// `u[i][j] = x[i] ∧ y[j]`
    pub u: Vec<Vec<usize>>,
    /// `v[i][j] = x[i] ∨ y[j]`
    pub v: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl UvTables {
    /// Both chains must run from the bottom to the top.
    pub fn new(lattice: &Lattice, xchain: &Chain, ychain: &Chain) -> Result<UvTables> {
        for (name, c) in [("x", xchain), ("y", ychain)] {
            if c.first() != lattice.bottom() || c.last() != lattice.top() {
                return Err(Error::HypothesisFailed(format!(
                    "{name}-chain must run from bottom to top"
                )));
            }
        }
        let x = xchain.elements().to_vec();
        let y = ychain.elements().to_vec();
        let u = x.iter().map(|&a| y.iter().map(|&b| lattice.meet(a, b)).collect()).collect();
        let v = x.iter().map(|&a| y.iter().map(|&b| lattice.join(a, b)).collect()).collect();
        Ok(UvTables {
            x,
            y,
            u,
            v,
            bottom: lattice.bottom(),
            top: lattice.top(),
        })
    }

    /// `(r, s)`: lengths of the two chains.
    pub fn dims(&self) -> (usize, usize) {
        (self.x.len() - 1, self.y.len() - 1)
    }

    fn check(&self, set: &DownSet) -> Result<()> {
        if set.dims() != self.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                got: set.dims(),
            });
        }
        Ok(())
    }
}

/// `φ(I) = ⋁_{(i,j) ∈ I} uⁱⱼ`; the empty join is the bottom.
pub fn phi(lattice: &Lattice, tables: &UvTables, set: &DownSet) -> Result<usize> {
    tables.check(set)?;
    Ok(set
        .members()
        .fold(tables.bottom, |acc, (i, j)| lattice.join(acc, tables.u[i][j])))
}

/// `ψ(I) = ⋀_{(i,j) ∉ I} vⁱ⁻¹ⱼ₋₁`; the empty meet is the top.
pub fn psi(lattice: &Lattice, tables: &UvTables, set: &DownSet) -> Result<usize> {
    tables.check(set)?;
    Ok(set
        .non_members()
        .fold(tables.top, |acc, (i, j)| lattice.meet(acc, tables.v[i - 1][j - 1])))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub ychain: Vec<usize>,
    pub dims: (usize, usize),
    pub downsets_checked: usize,
    pub phi_equals_psi: bool,
    pub homomorphism: bool,
    pub image: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupersolvabilityCertificate {
    pub mchain: Vec<usize>,
    pub records: Vec<ChainRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificationFailure {
    PhiPsiMismatch {
        downset: Vec<(usize, usize)>,
        phi: usize,
        psi: usize,
    },
    MeetNotPreserved {
        first: Vec<(usize, usize)>,
        second: Vec<(usize, usize)>,
    },
    JoinNotPreserved {
        first: Vec<(usize, usize)>,
        second: Vec<(usize, usize)>,
    },
    ImageMismatch {
        image: Vec<usize>,
        generated: Vec<usize>,
    },
    UvClosureMismatch {
        joins_of_u: Vec<usize>,
        meets_of_v: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub mchain: Vec<usize>,
    pub ychain: Vec<usize>,
    pub failure: CertificationFailure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    Certified(SupersolvabilityCertificate),
    Refuted(Refutation),
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }
}

/// Bit pattern of the lattice path bounding a down-set: bit `h_i + r - i`
/// for each column `i`. Distinct down-sets get distinct codes.
fn path_code(heights: impl Iterator<Item = usize>, r: usize) -> usize {
    heights.enumerate().fold(0, |acc, (c, h)| acc | 1 << (h + r - 1 - c))
}

/// Down-set ids by path code: a dense table for short paths, a map otherwise.
enum CodeIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<usize, usize>),
}

impl CodeIndex {
    fn new(bits: usize, downsets: &[DownSet], r: usize) -> CodeIndex {
        let codes = downsets.iter().map(|d| path_code(d.heights().iter().copied(), r));
        if bits <= 20 {
            let mut table = vec![u32::MAX; 1 << bits];
            for (id, code) in codes.enumerate() {
                table[code] = id as u32;
            }
            CodeIndex::Dense(table)
        } else {
            CodeIndex::Sparse(codes.enumerate().map(|(id, code)| (code, id)).collect())
        }
    }

    fn get(&self, code: usize) -> usize {
        match self {
            CodeIndex::Dense(t) => t[code] as usize,
            CodeIndex::Sparse(m) => m[&code],
        }
    }
}

/// Checks one chain pair; `Err` carries the first failed check. `downsets`
/// must be every down-set of the `r × s` grid.
pub fn certify_pair(
    lattice: &Lattice,
    tables: &UvTables,
    downsets: &[DownSet],
) -> std::result::Result<ChainRecord, CertificationFailure> {
    let (r, s) = tables.dims();
    let mut values = Vec::with_capacity(downsets.len());
    for d in downsets {
        let (p, q) = (
            phi(lattice, tables, d).expect("dims match"),
            psi(lattice, tables, d).expect("dims match"),
        );
        if p != q {
            return Err(CertificationFailure::PhiPsiMismatch {
                downset: d.members().collect(),
                phi: p,
                psi: q,
            });
        }
        values.push(p);
    }
    let index = CodeIndex::new(r + s, downsets, r);
    let broken = (0..downsets.len()).into_par_iter().find_map_first(|a| {
        let ha = downsets[a].heights();
        (a..downsets.len()).find_map(|b| {
            let hb = downsets[b].heights();
            let meet = index.get(path_code(ha.iter().zip(hb).map(|(&x, &y)| x.min(y)), r));
            let join = index.get(path_code(ha.iter().zip(hb).map(|(&x, &y)| x.max(y)), r));
            if values[meet] != lattice.meet(values[a], values[b]) {
                Some((a, b, true))
            } else if values[join] != lattice.join(values[a], values[b]) {
                Some((a, b, false))
            } else {
                None
            }
        })
    });
    if let Some((a, b, is_meet)) = broken {
        let first = downsets[a].members().collect();
        let second = downsets[b].members().collect();
        return Err(if is_meet {
            CertificationFailure::MeetNotPreserved { first, second }
        } else {
            CertificationFailure::JoinNotPreserved { first, second }
        });
    }
    let mut image = values.clone();
    image.sort_unstable();
    image.dedup();
    let mut generators = tables.x.clone();
    generators.extend_from_slice(&tables.y);
    let generated = lattice.sublattice_generated(&generators);
    if image != generated {
        return Err(CertificationFailure::ImageMismatch { image, generated });
    }
    let joins_of_u = closure(lattice, tables.u.iter().flatten().copied(), true);
    let meets_of_v = closure(lattice, tables.v.iter().flatten().copied(), false);
    if joins_of_u != image || meets_of_v != image {
        return Err(CertificationFailure::UvClosureMismatch {
            joins_of_u,
            meets_of_v,
        });
    }
    Ok(ChainRecord {
        ychain: tables.y.clone(),
        dims: (r, s),
        downsets_checked: downsets.len(),
        phi_equals_psi: true,
        homomorphism: true,
        image,
    })
}

/// All joins (or all meets) of subsets of `items`, including the empty one.
fn closure(lattice: &Lattice, items: impl Iterator<Item = usize>, joins: bool) -> Vec<usize> {
    let items: Vec<usize> = items.collect();
    let mut set = vec![if joins { lattice.bottom() } else { lattice.top() }];
    let mut member = vec![false; lattice.size()];
    member[set[0]] = true;
    let mut i = 0;
    while i < set.len() {
        let cur = set[i];
        for &t in &items {
            let next = if joins { lattice.join(cur, t) } else { lattice.meet(cur, t) };
            if !member[next] {
                member[next] = true;
                set.push(next);
            }
        }
        i += 1;
    }
    set.sort_unstable();
    set
}

/// Tries to certify `mchain` as an M-chain: for every maximal chain `y`,
/// `φ = ψ` on all down-sets, `φ` preserves meets and joins, and its image is
/// the sublattice generated by the two chains.
pub fn certify_supersolvable(lattice: &Lattice, mchain: &Chain, grid_cap: usize) -> Result<Certification> {
    if !mchain.is_maximal(lattice) {
        return Err(Error::HypothesisFailed("M-chain candidate is not a maximal chain".into()));
    }
    let mut downset_cache: HashMap<(usize, usize), Vec<DownSet>> = HashMap::new();
    let mut records = Vec::new();
    for ychain in lattice.maximal_chains() {
        let tables = UvTables::new(lattice, mchain, &ychain)?;
        let (r, s) = tables.dims();
        if r * s > grid_cap {
            return Err(Error::TooLarge {
                what: format!("down-set grid {r}x{s}"),
                cap: grid_cap,
            });
        }
        let downsets = downset_cache.entry((r, s)).or_insert_with(|| all_downsets(r, s));
        match certify_pair(lattice, &tables, downsets) {
            Ok(record) => records.push(record),
            Err(failure) => {
                return Ok(Certification::Refuted(Refutation {
                    mchain: mchain.elements().to_vec(),
                    ychain: ychain.into_elements(),
                    failure,
                }))
            }
        }
    }
    Ok(Certification::Certified(SupersolvabilityCertificate {
        mchain: mchain.elements().to_vec(),
        records,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Identity {
    P,
    Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqViolation {
    pub identity: Identity,
    /// `a₁ ≥ … ≥ aₜ` from the x-chain.
    pub a: Vec<usize>,
    /// `b₁ ≤ … ≤ bₜ` from the y-chain.
    pub b: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

/// `Pₜ`: `(b₁ ∨ a₁) ∧ … ∧ (bₜ ∨ aₜ) = b₁ ∨ (a₁ ∧ b₂) ∨ … ∨ (aₜ₋₁ ∧ bₜ) ∨ aₜ`.
pub fn eval_p(lattice: &Lattice, a: &[usize], b: &[usize]) -> (usize, usize) {
    let t = a.len();
    let lhs = lattice.meet_all((0..t).map(|i| lattice.join(b[i], a[i])));
    let rhs = lattice.join_all(
        std::iter::once(b[0])
            .chain((1..t).map(|i| lattice.meet(a[i - 1], b[i])))
            .chain(std::iter::once(a[t - 1])),
    );
    (lhs, rhs)
}

/// `Qₜ`: `(a₁ ∧ b₁) ∨ … ∨ (aₜ ∧ bₜ) = a₁ ∧ (b₁ ∨ a₂) ∧ … ∧ (bₜ₋₁ ∨ aₜ) ∧ bₜ`.
pub fn eval_q(lattice: &Lattice, a: &[usize], b: &[usize]) -> (usize, usize) {
    let t = a.len();
    let lhs = lattice.join_all((0..t).map(|i| lattice.meet(a[i], b[i])));
    let rhs = lattice.meet_all(
        std::iter::once(a[0])
            .chain((1..t).map(|i| lattice.join(b[i - 1], a[i])))
            .chain(std::iter::once(b[t - 1])),
    );
    (lhs, rhs)
}

/// Monotone index sequences of length `t` over `0..n`, lexicographic.
/// Non-increasing when `decreasing`, else non-decreasing.
pub(crate) fn monotone_sequences(n: usize, t: usize, decreasing: bool) -> Vec<Vec<usize>> {
    fn grow(n: usize, t: usize, dec: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        let range = match (cur.last(), dec) {
            (None, _) => 0..n,
            (Some(&l), true) => 0..l + 1,
            (Some(&l), false) => l..n,
        };
        for i in range {
            cur.push(i);
            grow(n, t, dec, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    grow(n, t, decreasing, &mut Vec::new(), &mut out);
    out
}

/// Every violation of `Qₜ`, then of `Pₜ`. Sequences are non-strict; the
/// y-chain may be any chain.
pub fn pq_violations(lattice: &Lattice, xchain: &Chain, ychain: &Chain, t: usize) -> Vec<PqViolation> {
    assert!(t >= 1, "t starts at 1");
    let xs = xchain.elements();
    let ys = ychain.elements();
    let a_seqs = monotone_sequences(xs.len(), t, true);
    let b_seqs = monotone_sequences(ys.len(), t, false);
    let mut out = Vec::new();
    for (identity, eval) in [(Identity::Q, eval_q as fn(&Lattice, &[usize], &[usize]) -> (usize, usize)), (Identity::P, eval_p)] {
        for ai in &a_seqs {
            let a: Vec<usize> = ai.iter().map(|&i| xs[i]).collect();
            for bi in &b_seqs {
                let b: Vec<usize> = bi.iter().map(|&i| ys[i]).collect();
                let (lhs, rhs) = eval(lattice, &a, &b);
                if lhs != rhs {
                    out.push(PqViolation {
                        identity,
                        a: a.clone(),
                        b,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    out
}

/// Passes when neither identity fails; the counterexample of a failure is
/// `a₁…aₜ, b₁…bₜ, lhs, rhs` and the property names the failing identity.
pub fn verify_pq(lattice: &Lattice, xchain: &Chain, ychain: &Chain, t: usize) -> PropertyReport {
    match pq_violations(lattice, xchain, ychain, t).into_iter().next() {
        None => PropertyReport::pass(&format!("PQ{t}")),
        Some(v) => {
            let mut cx = v.a;
            cx.extend(v.b);
            cx.push(v.lhs);
            cx.push(v.rhs);
            PropertyReport::fail(&format!("{:?}{t}", v.identity), cx)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions as c;

    fn b2_tables() -> (Lattice, UvTables) {
        let b2 = c::boolean(2).unwrap();
        let x = Chain::new(&b2, vec![0, 1, 3]).unwrap();
        let y = Chain::new(&b2, vec![0, 2, 3]).unwrap();
        let t = UvTables::new(&b2, &x, &y).unwrap();
        (b2, t)
    }

    #[test]
    fn phi_examples() {
        let (b2, t) = b2_tables();
        assert_eq!(phi(&b2, &t, &DownSet::empty(2, 2)).unwrap(), 0);
        assert_eq!(phi(&b2, &t, &DownSet::full(2, 2)).unwrap(), 3);
        let i = DownSet::from_members(2, 2, [(1, 1), (1, 2)]).unwrap();
        assert_eq!(phi(&b2, &t, &i).unwrap(), 1);
        assert!(matches!(
            phi(&b2, &t, &DownSet::empty(3, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn psi_examples() {
        let (b2, t) = b2_tables();
        assert_eq!(psi(&b2, &t, &DownSet::full(2, 2)).unwrap(), 3);
        assert_eq!(psi(&b2, &t, &DownSet::empty(2, 2)).unwrap(), 0);
        let i = DownSet::from_members(2, 2, [(1, 1), (1, 2)]).unwrap();
        assert_eq!(psi(&b2, &t, &i).unwrap(), 1);
    }

    #[test]
    fn path_codes_are_distinct() {
        for (r, s) in [(1, 1), (2, 3), (4, 4), (3, 6)] {
            let mut codes: Vec<usize> = all_downsets(r, s)
                .iter()
                .map(|d| path_code(d.heights().iter().copied(), r))
                .collect();
            codes.sort_unstable();
            codes.dedup();
            assert_eq!(codes.len(), crate::constructions::downset_count(r, s));
        }
    }

    #[test]
    fn long_chain_certifies() {
        let c7 = c::chain(7).unwrap();
        let m = c7.maximal_chains()[0].clone();
        assert!(certify_supersolvable(&c7, &m, DEFAULT_GRID_CAP).unwrap().is_certified());
    }

    #[test]
    fn sequences() {
        assert_eq!(
            monotone_sequences(3, 2, true),
            vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 0], vec![2, 1], vec![2, 2]]
        );
        assert_eq!(monotone_sequences(3, 2, false).len(), 6);
        assert_eq!(monotone_sequences(4, 3, false).len(), 20);
    }

    #[test]
    fn t1_is_tautologous() {
        let n5 = c::pentagon();
        for x in n5.maximal_chains() {
            for y in n5.maximal_chains() {
                assert!(verify_pq(&n5, &x, &y, 1).verdict);
            }
        }
    }

    #[test]
    fn pentagon_q2_witness() {
        let n5 = c::pentagon();
        let x = Chain::new(&n5, vec![0, 1, 2, 4]).unwrap();
        let y = Chain::new(&n5, vec![0, 3, 4]).unwrap();
        let r = verify_pq(&n5, &x, &y, 2);
        assert!(!r.verdict);
        assert_eq!(r.property, "Q2");
        // a = (b, a), b = (c, 1̂); lhs a, rhs b.
        assert_eq!(r.counterexample, Some(vec![2, 1, 3, 4, 1, 2]));
    }

    #[test]
    fn certificates() {
        let b3 = c::boolean(3).unwrap();
        let m = b3.maximal_chains()[0].clone();
        assert!(certify_supersolvable(&b3, &m, DEFAULT_GRID_CAP).unwrap().is_certified());

        let hex = c::benzene();
        for m in hex.maximal_chains() {
            let cert = certify_supersolvable(&hex, &m, DEFAULT_GRID_CAP).unwrap();
            assert!(!cert.is_certified());
        }
        let n5 = c::pentagon();
        let m = Chain::new(&n5, vec![0, 1, 2, 4]).unwrap();
        match certify_supersolvable(&n5, &m, DEFAULT_GRID_CAP).unwrap() {
            Certification::Refuted(r) => assert_eq!(r.ychain, vec![0, 3, 4]),
            other => panic!("unexpected {other:?}"),
        }
        let short = Chain::new(&n5, vec![0, 2, 4]).unwrap();
        assert!(certify_supersolvable(&n5, &short, DEFAULT_GRID_CAP).is_err());
        assert!(matches!(
            certify_supersolvable(&c::boolean(6).unwrap(), &c::boolean(6).unwrap().maximal_chains()[0], 25),
            Err(Error::TooLarge { .. })
        ));
    }
}
