//! Named lattice families, the grid model of the maximum graded quotient of a
//! chain freely joined with one extra point, and down-set lattices of grids.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Largest element count the parametrized constructors will produce.
pub const MAX_CONSTRUCTED_SIZE: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Chain of length `k` (so `k + 1` elements).
    Chain(usize),
    Boolean(usize),
    Diamond,
    Pentagon,
    Benzene,
    Figure1,
    Partition(usize),
    Divisor(u64),
    Product(Box<Family>, Box<Family>),
    Point,
    Grid(usize),
    DownSets(usize, usize),
}

/// Raw numeric parameters as they arrive from the command line.
#[derive(Clone, Debug, Default)]
pub struct FamilyParams {
    pub k: Option<i64>,
    pub n: Option<i64>,
    pub m: Option<i64>,
    pub r: Option<i64>,
    pub s: Option<i64>,
    pub factors: Vec<String>,
}

fn param(name: &str, value: Option<i64>, family: &str) -> Result<usize> {
    let v = value.ok_or_else(|| Error::ParamOutOfRange(format!("{family} needs --{name}")))?;
    usize::try_from(v).map_err(|_| Error::ParamOutOfRange(format!("--{name} must be non-negative, got {v}")))
}

impl Family {
    pub fn from_params(name: &str, p: &FamilyParams) -> Result<Family> {
        Ok(match name {
            "chain" => Family::Chain(param("k", p.k, name)?),
            "boolean" => Family::Boolean(param("n", p.n, name)?),
            "diamond" | "m3" => Family::Diamond,
            "pentagon" | "n5" => Family::Pentagon,
            "benzene" | "hexagon" => Family::Benzene,
            "figure1" => Family::Figure1,
            "partition" => Family::Partition(param("n", p.n, name)?),
            "divisor" => Family::Divisor(param("m", p.m, name)? as u64),
            "point" => Family::Point,
            "grid" => Family::Grid(param("k", p.k, name)?),
            "downset" => Family::DownSets(param("r", p.r, name)?, param("s", p.s, name)?),
            "product" => {
                if p.factors.len() != 2 {
                    return Err(Error::ParamOutOfRange(
                        "product needs exactly two --factors, e.g. chain:1,chain:2".into(),
                    ));
                }
                Family::Product(
                    Box::new(p.factors[0].parse()?),
                    Box::new(p.factors[1].parse()?),
                )
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Compact form `name[:param[xparam]]`, with `A*B` for products:
    /// `chain:3`, `partition:4`, `downset:2x3`, `chain:1*chain:1`.
    fn from_str(text: &str) -> Result<Family> {
        if let Some((a, b)) = text.split_once('*') {
            return Ok(Family::Product(Box::new(a.parse()?), Box::new(b.parse()?)));
        }
        let (name, arg) = match text.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (text, None),
        };
        let num = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::ParamOutOfRange(format!("bad parameter `{s}` in `{text}`")))
        };
        let mut params = FamilyParams::default();
        if let Some(arg) = arg {
            if name == "downset" {
                let (r, s) = arg
                    .split_once('x')
                    .ok_or_else(|| Error::ParamOutOfRange(format!("expected RxS in `{text}`")))?;
                params.r = Some(num(r)?);
                params.s = Some(num(s)?);
            } else {
                let v = num(arg)?;
                params.k = Some(v);
                params.n = Some(v);
                params.m = Some(v);
            }
        }
        Family::from_params(name, &params)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Chain(k) => write!(f, "chain:{k}"),
            Family::Boolean(n) => write!(f, "boolean:{n}"),
            Family::Diamond => write!(f, "diamond"),
            Family::Pentagon => write!(f, "pentagon"),
            Family::Benzene => write!(f, "benzene"),
            Family::Figure1 => write!(f, "figure1"),
            Family::Partition(n) => write!(f, "partition:{n}"),
            Family::Divisor(m) => write!(f, "divisor:{m}"),
            Family::Product(a, b) => write!(f, "{a}*{b}"),
            Family::Point => write!(f, "point"),
            Family::Grid(k) => write!(f, "grid:{k}"),
            Family::DownSets(r, s) => write!(f, "downset:{r}x{s}"),
        }
    }
}

pub fn named_lattice(family: &Family) -> Result<Lattice> {
    match family {
        Family::Chain(k) => chain(*k),
        Family::Boolean(n) => boolean(*n),
        Family::Diamond => Ok(diamond()),
        Family::Pentagon => Ok(pentagon()),
        Family::Benzene => Ok(benzene()),
        Family::Figure1 => Ok(figure1()),
        Family::Partition(n) => partition_lattice(*n),
        Family::Divisor(m) => divisor_lattice(*m),
        Family::Product(a, b) => product(&named_lattice(a)?, &named_lattice(b)?),
        Family::Point => Ok(point()),
        Family::Grid(k) => Ok(grid_quotient(*k)?.lattice),
        Family::DownSets(r, s) => Ok(downset_lattice(*r, *s, MAX_CONSTRUCTED_SIZE)?.lattice),
    }
}

fn fixed(size: usize, covers: &[(usize, usize)]) -> Lattice {
    Lattice::from_covers(size, covers).expect("fixed cover list is a lattice")
}

/// The one-element lattice.
pub fn point() -> Lattice {
    fixed(1, &[])
}

pub fn chain(k: usize) -> Result<Lattice> {
    if k + 1 > MAX_CONSTRUCTED_SIZE {
        return Err(Error::ParamOutOfRange(format!("chain length {k} too large")));
    }
    let covers: Vec<(usize, usize)> = (0..k).map(|i| (i, i + 1)).collect();
    Lattice::from_covers(k + 1, &covers)
}

/// Subsets of an `n`-set; element ids are the subset bit masks.
pub fn boolean(n: usize) -> Result<Lattice> {
    if n > 12 {
        return Err(Error::ParamOutOfRange(format!("boolean lattice rank {n} > 12")));
    }
    let covers: Vec<(usize, usize)> = (0..1usize << n)
        .flat_map(|a| (0..n).filter(move |i| a >> i & 1 == 0).map(move |i| (a, a | 1 << i)))
        .collect();
    Lattice::from_covers(1 << n, &covers)
}

/// M₃: bottom 0, atoms 1, 2, 3, top 4.
pub fn diamond() -> Lattice {
    fixed(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
}

/// N₅: bottom 0, the long side 1 ⋖ 2, the short side 3, top 4.
pub fn pentagon() -> Lattice {
    fixed(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
}

/// Hexagon: bottom 0, atoms 1, 2, coatoms 3, 4 with 1 ⋖ 3 and 2 ⋖ 4, top 5.
pub fn benzene() -> Lattice {
    fixed(6, &[(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 5)])
}

/// Two chains glued at their ends: 0 ⋖ 1 ⋖ 2 ⋖ 3 ⋖ 4 and 0 ⋖ 5 ⋖ 6 ⋖ 4.
pub fn figure1() -> Lattice {
    fixed(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (5, 6), (6, 4)])
}

/// Set partitions of `{0..n}` as restricted growth strings, ordered by
/// decreasing block count (so the all-singletons partition comes first).
/// The ids of [`partition_lattice`] index this list.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |&m| m + 1);
        for b in 0..=next {
            prefix.push(b);
            grow(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    let blocks = |p: &Vec<usize>| p.iter().max().map_or(0, |&m| m + 1);
    out.sort_by(|a, b| blocks(b).cmp(&blocks(a)).then_with(|| a.cmp(b)));
    out
}

/// Partitions of an `n`-set ordered by refinement.
pub fn partition_lattice(n: usize) -> Result<Lattice> {
    if !(1..=6).contains(&n) {
        return Err(Error::ParamOutOfRange(format!("partition lattice needs 1 <= n <= 6, got {n}")));
    }
    let parts = set_partitions(n);
    Lattice::from_order(parts.len(), |a, b| {
        let (p, q) = (&parts[a], &parts[b]);
        (0..n).all(|i| (0..n).all(|j| p[i] != p[j] || q[i] == q[j]))
    })
}

/// Divisors of `m` ordered by divisibility; ids follow increasing value.
pub fn divisor_lattice(m: u64) -> Result<Lattice> {
    if m == 0 || m > 1_000_000_000 {
        return Err(Error::ParamOutOfRange(format!("divisor lattice needs 1 <= m <= 1e9, got {m}")));
    }
    let divisors = divisors(m);
    Lattice::from_order(divisors.len(), |a, b| divisors[b].is_multiple_of(divisors[a]))
}

pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Direct product; the pair `(a, b)` gets id `a * |right| + b`.
pub fn product(left: &Lattice, right: &Lattice) -> Result<Lattice> {
    let (n1, n2) = (left.size(), right.size());
    if n1 * n2 > MAX_CONSTRUCTED_SIZE {
        return Err(Error::ParamOutOfRange(format!("product of sizes {n1} and {n2} too large")));
    }
    let mut covers = Vec::new();
    for &(a, a2) in left.covers() {
        for b in right.elements() {
            covers.push((a * n2 + b, a2 * n2 + b));
        }
    }
    for a in left.elements() {
        for &(b, b2) in right.covers() {
            covers.push((a * n2 + b, a * n2 + b2));
        }
    }
    Lattice::from_covers(n1 * n2, &covers)
}

/// The grid model of the maximum graded quotient of `C_k ∗ S`.
///
/// Elements are the pairs `(i, j)` with `-1 <= i <= k` and
/// `max(i, 0) <= j <= k + 1`, ordered componentwise. The pair `(i, j)` with
/// `0 <= i <= j <= k` stands for `(y ∨ xᵢ) ∧ xⱼ`; `i = -1` means no join with
/// `y` was taken (`y ∧ xⱼ`), and `j = k + 1` means no meet with a chain
/// element (`y ∨ xᵢ`). The chain element `xᵢ` is `(i, i)` and `y` is
/// `(-1, k + 1)`.
#[derive(Clone, Debug)]
pub struct GridQuotient {
    pub k: usize,
    pub lattice: Lattice,
    /// `index[id]` is the pair of element `id`.
    pub index: Vec<(i64, i64)>,
    /// Images of `x₀, …, x_k`.
    pub x: Vec<usize>,
    pub y: usize,
}

impl GridQuotient {
    pub fn element(&self, i: i64, j: i64) -> Option<usize> {
        self.index.iter().position(|&p| p == (i, j))
    }

    /// Closed-form element count `(k + 2)(k + 5)/2 − 1`.
    pub fn expected_size(k: usize) -> usize {
        (k + 2) * (k + 5) / 2 - 1
    }

    /// Rank of `(i, j)` is `i + j + 1`.
    pub fn rank_of(&self, id: usize) -> usize {
        let (i, j) = self.index[id];
        (i + j + 1) as usize
    }

    /// The map `G(k) → M` sending each index pair to its expression in a
    /// chain `c₀ < … < c_k` of `M` and an element `w`.
    pub fn evaluate(&self, target: &Lattice, chain: &[usize], w: usize) -> Vec<usize> {
        let k = self.k as i64;
        self.index
            .iter()
            .map(|&(i, j)| match (i, j) {
                (-1, j) if j == k + 1 => w,
                (-1, j) => target.meet(w, chain[j as usize]),
                (i, j) if j == k + 1 => target.join(w, chain[i as usize]),
                (i, j) => target.meet(target.join(w, chain[i as usize]), chain[j as usize]),
            })
            .collect()
    }
}

pub fn grid_quotient(k: usize) -> Result<GridQuotient> {
    if GridQuotient::expected_size(k) > MAX_CONSTRUCTED_SIZE {
        return Err(Error::ParamOutOfRange(format!("grid quotient parameter k = {k} too large")));
    }
    let k = k as i64;
    let mut index = Vec::new();
    for i in -1..=k {
        for j in i.max(0)..=k + 1 {
            index.push((i, j));
        }
    }
    let lattice = Lattice::from_order(index.len(), |a, b| {
        index[a].0 <= index[b].0 && index[a].1 <= index[b].1
    })?;
    let find = |p: (i64, i64)| index.iter().position(|&q| q == p).unwrap();
    let x = (0..=k).map(|i| find((i, i))).collect();
    let y = find((-1, k + 1));
    Ok(GridQuotient {
        k: k as usize,
        lattice,
        index,
        x,
        y,
    })
}

/// A down-closed subset of the grid `[1, r] × [1, s]`, stored by column
/// heights: cell `(i, j)` is a member iff `j <= heights[i - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DownSet {
    r: usize,
    s: usize,
    heights: Vec<usize>,
}

impl DownSet {
    pub fn empty(r: usize, s: usize) -> DownSet {
        DownSet {
            r,
            s,
            heights: vec![0; r],
        }
    }

    pub fn full(r: usize, s: usize) -> DownSet {
        DownSet {
            r,
            s,
            heights: vec![s; r],
        }
    }

    /// Validates range and down-closure of an explicit cell list (1-based).
    pub fn from_members(
        r: usize,
        s: usize,
        cells: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<DownSet> {
        let mut member = vec![vec![false; s + 1]; r + 1];
        for (i, j) in cells {
            if !(1..=r).contains(&i) || !(1..=s).contains(&j) {
                return Err(Error::ParamOutOfRange(format!("cell ({i}, {j}) outside [1,{r}]x[1,{s}]")));
            }
            member[i][j] = true;
        }
        let mut heights = vec![0; r];
        for i in 1..=r {
            heights[i - 1] = (1..=s).take_while(|&j| member[i][j]).count();
            if (1..=s).any(|j| member[i][j] && j > heights[i - 1]) {
                return Err(Error::ParamOutOfRange(format!("column {i} is not down-closed")));
            }
            if i > 1 && heights[i - 1] > heights[i - 2] {
                return Err(Error::ParamOutOfRange(format!("column {i} exceeds column {}", i - 1)));
            }
        }
        Ok(DownSet { r, s, heights })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    /// Column heights, non-increasing.
    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        (1..=self.r).contains(&i) && j >= 1 && j <= self.heights[i - 1]
    }

    pub fn members(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.heights
            .iter()
            .enumerate()
            .flat_map(|(c, &h)| (1..=h).map(move |j| (c + 1, j)))
    }

    pub fn non_members(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.heights
            .iter()
            .enumerate()
            .flat_map(move |(c, &h)| (h + 1..=self.s).map(move |j| (c + 1, j)))
    }

    pub fn len(&self) -> usize {
        self.heights.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &DownSet) -> bool {
        self.heights.iter().zip(&other.heights).all(|(a, b)| a <= b)
    }

    pub fn union(&self, other: &DownSet) -> DownSet {
        self.zip_with(other, usize::max)
    }

    pub fn intersection(&self, other: &DownSet) -> DownSet {
        self.zip_with(other, usize::min)
    }

    fn zip_with(&self, other: &DownSet, f: fn(usize, usize) -> usize) -> DownSet {
        DownSet {
            r: self.r,
            s: self.s,
            heights: self.heights.iter().zip(&other.heights).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

/// Number of down-sets of an `r × s` grid, `C(r + s, r)`, saturating.
pub fn downset_count(r: usize, s: usize) -> usize {
    let mut acc: u128 = 1;
    for i in 1..=r.min(s) as u128 {
        acc = acc * (r.max(s) as u128 + i) / i;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

pub fn all_downsets(r: usize, s: usize) -> Vec<DownSet> {
    fn extend(r: usize, s: usize, cap: usize, heights: &mut Vec<usize>, out: &mut Vec<DownSet>) {
        if heights.len() == r {
            out.push(DownSet {
                r,
                s,
                heights: heights.clone(),
            });
            return;
        }
        for h in 0..=cap {
            heights.push(h);
            extend(r, s, h, heights, out);
            heights.pop();
        }
    }
    let mut out = Vec::new();
    extend(r, s, s, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.heights.cmp(&b.heights)));
    out
}

/// The distributive lattice of down-sets of `[1, r] × [1, s]` under inclusion.
#[derive(Clone, Debug)]
pub struct DownSetLattice {
    pub r: usize,
    pub s: usize,
    pub lattice: Lattice,
    pub sets: Vec<DownSet>,
    index: HashMap<DownSet, usize>,
}

impl DownSetLattice {
    pub fn id_of(&self, set: &DownSet) -> Option<usize> {
        self.index.get(set).copied()
    }
}

pub fn downset_lattice(r: usize, s: usize, cap: usize) -> Result<DownSetLattice> {
    if r == 0 || s == 0 {
        return Err(Error::ParamOutOfRange(format!("grid dimensions must be positive, got {r}x{s}")));
    }
    let count = downset_count(r, s);
    if count > cap {
        return Err(Error::TooLarge {
            what: format!("down-set lattice of a {r}x{s} grid ({count} elements)"),
            cap,
        });
    }
    let sets = all_downsets(r, s);
    let lattice = Lattice::from_order(sets.len(), |a, b| sets[a].is_subset(&sets[b]))?;
    let index = sets.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
    Ok(DownSetLattice {
        r,
        s,
        lattice,
        sets,
        index,
    })
}
