//! Brute-force reference implementations shared by the integration tests.
//! None of them goes through the library's canonical labeling, congruence
//! closure or rank bookkeeping.

#![allow(dead_code)]

use std::collections::BTreeSet;

use latmod::Lattice;

/// Order matrix as rows of booleans.
pub type Order = Vec<Vec<bool>>;

pub fn order_of(lattice: &Lattice) -> Order {
    let n = lattice.size();
    (0..n).map(|a| (0..n).map(|b| lattice.leq(a, b)).collect()).collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Least packed order matrix over all relabelings fixing the first and last
/// element (the bottom and top of a naturally labeled bounded poset).
pub fn brute_key(order: &Order) -> Vec<bool> {
    let n = order.len();
    if n <= 2 {
        return order.iter().flatten().copied().collect();
    }
    let middle: Vec<usize> = (1..n - 1).collect();
    permutations(&middle)
        .into_iter()
        .map(|p| {
            let mut perm = vec![0];
            perm.extend(p);
            perm.push(n - 1);
            let mut bits = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    bits.push(order[perm[a]][perm[b]]);
                }
            }
            bits
        })
        .min()
        .unwrap()
}

/// Bottom and top placed first and last.
pub fn bounds_outside(lattice: &Lattice) -> Order {
    let n = lattice.size();
    let mut ids = vec![lattice.bottom()];
    ids.extend(lattice.elements().filter(|&x| x != lattice.bottom() && x != lattice.top()));
    if n > 1 {
        ids.push(lattice.top());
    }
    (0..n).map(|a| (0..n).map(|b| lattice.leq(ids[a], ids[b])).collect()).collect()
}

fn has_all_bounds(order: &Order) -> bool {
    let n = order.len();
    let unique_extreme = |set: &[usize], below: bool| {
        set.iter()
            .filter(|&&c| set.iter().all(|&d| if below { order[c][d] } else { order[d][c] }))
            .count()
            == 1
    };
    for a in 0..n {
        for b in a + 1..n {
            let upper: Vec<usize> = (0..n).filter(|&u| order[a][u] && order[b][u]).collect();
            let lower: Vec<usize> = (0..n).filter(|&l| order[l][a] && order[l][b]).collect();
            if !unique_extreme(&upper, true) || !unique_extreme(&lower, false) {
                return false;
            }
        }
    }
    true
}

/// Orders of every lattice on `n` elements with a natural labeling (`a < b`
/// implies `a < b` as integers), bottom `0` and top `n - 1`, one per
/// isomorphism class, keyed by [`brute_key`].
pub fn lattice_oracle(n: usize) -> BTreeSet<Vec<bool>> {
    let mut out = BTreeSet::new();
    if n == 1 {
        out.insert(vec![true]);
        return out;
    }
    let pairs: Vec<(usize, usize)> = (1..n - 1)
        .flat_map(|a| (a + 1..n - 1).map(move |b| (a, b)))
        .collect();
    for mask in 0u64..1 << pairs.len() {
        let mut order = vec![vec![false; n]; n];
        for a in 0..n {
            order[a][a] = true;
            order[0][a] = true;
            order[a][n - 1] = true;
        }
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                order[a][b] = true;
            }
        }
        let transitive = (0..n).all(|a| {
            (0..n).all(|b| !order[a][b] || (0..n).all(|c| !order[b][c] || order[a][c]))
        });
        if transitive && has_all_bounds(&order) {
            out.insert(brute_key(&order));
        }
    }
    out
}

/// All set partitions of `0..n` as first-appearance labelings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(n: usize, cur: &mut Vec<usize>, blocks: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=blocks {
            cur.push(b);
            grow(n, cur, blocks.max(b + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    grow(n, &mut Vec::new(), 0, &mut out);
    out
}

/// Partitions compatible with meet and join, by direct filtering.
pub fn congruence_oracle(lattice: &Lattice) -> BTreeSet<Vec<usize>> {
    let n = lattice.size();
    set_partitions(n)
        .into_iter()
        .filter(|p| {
            (0..n).all(|a| {
                (0..n).all(|b| {
                    p[a] != p[b]
                        || (0..n).all(|z| {
                            p[lattice.meet(a, z)] == p[lattice.meet(b, z)]
                                && p[lattice.join(a, z)] == p[lattice.join(b, z)]
                        })
                })
            })
        })
        .collect()
}

/// All maximal chains of every interval `[a, b]` have the same length,
/// found by exhaustive path search in the order matrix.
pub fn graded_by_intervals(order: &Order) -> bool {
    let n = order.len();
    let covers = |a: usize, b: usize| {
        a != b && order[a][b] && (0..n).all(|c| c == a || c == b || !(order[a][c] && order[c][b]))
    };
    fn lengths(order: &Order, cover: &dyn Fn(usize, usize) -> bool, a: usize, b: usize, out: &mut BTreeSet<usize>, depth: usize) {
        if a == b {
            out.insert(depth);
            return;
        }
        for c in 0..order.len() {
            if cover(a, c) && order[c][b] {
                lengths(order, cover, c, b, out, depth + 1);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if order[a][b] {
                let mut seen = BTreeSet::new();
                lengths(order, &covers, a, b, &mut seen, 0);
                if seen.len() != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// The lattice generated by a two-element chain `x₀ < x₁` and a free point
/// `y`, listed by hand: `y∧x₀, y∧x₁, x₀, (y∧x₁)∨x₀, (y∨x₀)∧x₁, x₁, y,
/// y∨x₀, y∨x₁`.
pub fn free_chain_plus_point() -> Lattice {
    Lattice::from_covers(
        9,
        &[
            (0, 1),
            (0, 2),
            (1, 3),
            (1, 6),
            (2, 3),
            (3, 4),
            (4, 5),
            (4, 7),
            (6, 7),
            (5, 8),
            (7, 8),
        ],
    )
    .unwrap()
}
