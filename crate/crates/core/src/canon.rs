//! Canonical labeling of finite posets.
//!
//! Colors start from order invariants (height, depth, down-set and up-set
//! sizes) and are refined against the colors of upper and lower covers until
//! stable. Remaining ties are broken by individualizing each member of the
//! first non-singleton cell in turn; the lexicographically smallest order
//! matrix over all leaves is the key. Elements with identical upper and lower
//! cover sets are interchangeable, so only one of them is individualized.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Byte string identifying an isomorphism class: the element count followed
/// by the order matrix in canonical order, packed row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(text: &str) -> Option<CanonicalKey> {
        hex::decode(text).ok().map(CanonicalKey)
    }

    /// Number of elements of the lattice this key describes.
    pub fn size(&self) -> usize {
        let mut bytes = [0u8; 4];
        bytes.copy_from_slice(&self.0[..4]);
        u32::from_be_bytes(bytes) as usize
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

pub(crate) fn canonical_labeling(
    n: usize,
    upper: &[Vec<usize>],
    lower: &[Vec<usize>],
    leq: impl Fn(usize, usize) -> bool,
) -> (CanonicalKey, Vec<usize>) {
    let mut search = Search {
        n,
        upper,
        lower,
        leq: &leq,
        twin: twin_classes(upper, lower),
        best: None,
    };
    let colors = search.initial_colors();
    search.descend(colors);
    let (key, order) = search.best.expect("search visits at least one leaf");
    (CanonicalKey(key), order)
}

fn twin_classes(upper: &[Vec<usize>], lower: &[Vec<usize>]) -> Vec<usize> {
    let mut ids: HashMap<(&[usize], &[usize]), usize> = HashMap::new();
    (0..upper.len())
        .map(|x| {
            let next = ids.len();
            *ids.entry((&upper[x], &lower[x])).or_insert(next)
        })
        .collect()
}

struct Search<'a, F> {
    n: usize,
    upper: &'a [Vec<usize>],
    lower: &'a [Vec<usize>],
    leq: &'a F,
    twin: Vec<usize>,
    best: Option<(Vec<u8>, Vec<usize>)>,
}

impl<F: Fn(usize, usize) -> bool> Search<'_, F> {
    fn initial_colors(&self) -> Vec<u32> {
        let n = self.n;
        let mut height = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        for x in 0..n {
            longest(x, self.lower, &mut height);
            longest(x, self.upper, &mut depth);
        }
        let signature: Vec<(usize, usize, usize, usize)> = (0..n)
            .map(|x| {
                let below = (0..n).filter(|&a| (self.leq)(a, x)).count();
                let above = (0..n).filter(|&b| (self.leq)(x, b)).count();
                (height[x], depth[x], below, above)
            })
            .collect();
        rank_signatures(&signature)
    }

    fn refine(&self, colors: &mut Vec<u32>) {
        let mut classes = count_classes(colors);
        loop {
            let signature: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..self.n)
                .map(|x| {
                    let mut ups: Vec<u32> = self.upper[x].iter().map(|&y| colors[y]).collect();
                    let mut lows: Vec<u32> = self.lower[x].iter().map(|&y| colors[y]).collect();
                    ups.sort_unstable();
                    lows.sort_unstable();
                    (colors[x], ups, lows)
                })
                .collect();
            *colors = rank_signatures(&signature);
            let now = count_classes(colors);
            if now == classes {
                return;
            }
            classes = now;
        }
    }

    fn descend(&mut self, mut colors: Vec<u32>) {
        self.refine(&mut colors);
        let classes = count_classes(&colors);
        if classes == self.n {
            self.leaf(&colors);
            return;
        }
        let mut cell_size = vec![0usize; classes];
        for &c in &colors {
            cell_size[c as usize] += 1;
        }
        let target = cell_size.iter().position(|&s| s > 1).unwrap() as u32;
        let members: Vec<usize> = (0..self.n).filter(|&x| colors[x] == target).collect();
        let mut tried_twins = Vec::new();
        for &v in &members {
            if tried_twins.contains(&self.twin[v]) {
                continue;
            }
            tried_twins.push(self.twin[v]);
            let split: Vec<u32> = (0..self.n)
                .map(|x| 2 * colors[x] + u32::from(colors[x] == target && x != v))
                .collect();
            let ranked = rank_signatures(&split);
            self.descend(ranked);
        }
    }

    fn leaf(&mut self, colors: &[u32]) {
        let n = self.n;
        let mut order = vec![0usize; n];
        for (x, &c) in colors.iter().enumerate() {
            order[c as usize] = x;
        }
        let mut key = Vec::with_capacity(4 + (n * n).div_ceil(8));
        key.extend_from_slice(&(n as u32).to_be_bytes());
        let mut byte = 0u8;
        let mut filled = 0;
        for &a in &order {
            for &b in &order {
                byte = (byte << 1) | u8::from((self.leq)(a, b));
                filled += 1;
                if filled == 8 {
                    key.push(byte);
                    byte = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            key.push(byte << (8 - filled));
        }
        match &self.best {
            Some((best, _)) if *best <= key => {}
            _ => self.best = Some((key, order)),
        }
    }
}

fn longest(x: usize, next: &[Vec<usize>], memo: &mut [usize]) -> usize {
    if memo[x] != usize::MAX {
        return memo[x];
    }
    let value = next[x]
        .iter()
        .map(|&y| longest(y, next, memo) + 1)
        .max()
        .unwrap_or(0);
    memo[x] = value;
    value
}

fn rank_signatures<T: Ord + Clone>(signature: &[T]) -> Vec<u32> {
    let mut distinct: Vec<T> = signature.to_vec();
    distinct.sort();
    distinct.dedup();
    signature
        .iter()
        .map(|s| distinct.binary_search(s).unwrap() as u32)
        .collect()
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().max().map_or(0, |&m| m as usize + 1)
}
