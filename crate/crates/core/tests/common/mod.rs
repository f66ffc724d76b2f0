//! Brute-force oracles shared by the integration tests. None of them use
//! the library's search or group machinery.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use nest_core::{Graph, NestParams, Perm};

/// Every automorphism of `g`, by backtracking over adjacency-preserving
/// partial maps in vertex order.
pub fn naive_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, image: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = g.vertex_count();
        let x = image.len();
        if x == n {
            out.push(image.clone());
            return;
        }
        for y in 0..n {
            if used[y] || g.degree(x) != g.degree(y) {
                continue;
            }
            if (0..x).all(|w| g.is_adjacent(w, x) == g.is_adjacent(image[w], y)) {
                used[y] = true;
                image.push(y);
                extend(g, image, used, out);
                image.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(
        g,
        &mut Vec::new(),
        &mut vec![false; g.vertex_count()],
        &mut out,
    );
    out
}

/// All elements generated by `gens`, by breadth-first closure.
pub fn closure(degree: usize, gens: &[Perm]) -> BTreeSet<Vec<usize>> {
    let id: Vec<usize> = (0..degree).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Vec<usize> = x.iter().map(|&i| g.apply(i)).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Shortest cycle length by exhaustive search for simple cycles.
pub fn naive_girth(g: &Graph) -> Option<usize> {
    fn dfs(g: &Graph, start: usize, x: usize, len: usize, target: usize, on: &mut [bool]) -> bool {
        if len == target {
            return g.is_adjacent(x, start);
        }
        for y in g.neighbors(x) {
            if y > start && !on[y] {
                on[y] = true;
                let found = dfs(g, start, y, len + 1, target, on);
                on[y] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }
    let n = g.vertex_count();
    (3..=n).find(|&target| {
        (0..n).any(|s| {
            let mut on = vec![false; n];
            on[s] = true;
            dfs(g, s, s, 1, target, &mut on)
        })
    })
}

/// Every raw tuple of modulus `n` that passes validation, deduplicated
/// after reduction.
pub fn all_valid_tuples(n: usize) -> Vec<NestParams> {
    let n = n as i64;
    let mut out = BTreeSet::new();
    for a in 1..n {
        for b in 1..n {
            for c in 1..n {
                for k in 1..n {
                    if let Ok(p) = NestParams::new(n, a, b, c, k) {
                        out.insert(p);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

pub fn nest(n: i64, a: i64, b: i64, c: i64, k: i64) -> NestParams {
    NestParams::new(n, a, b, c, k).unwrap()
}
