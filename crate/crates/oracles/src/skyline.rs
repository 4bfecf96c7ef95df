//! Skyline answers by direct dominance scans.

use std::collections::BTreeSet;

use tempogeo::{EventSequence, Window};

/// `q` dominates `p`: at least as large everywhere and not identical.
pub fn dominated_by(p: &[f64], q: &[f64]) -> bool {
    p.iter().zip(q).all(|(a, b)| a <= b) && p != q
}

/// Skyline of the window by an `O(w^2)` scan, in increasing index order.
pub fn skyline(seq: &EventSequence, w: Window) -> Vec<usize> {
    w.indices()
        .filter(|&k| {
            !w.indices()
                .any(|m| dominated_by(seq.coords(k), seq.coords(m)))
        })
        .collect()
}

pub fn skyline_colors(seq: &EventSequence, w: Window) -> BTreeSet<u32> {
    skyline(seq, w)
        .into_iter()
        .filter_map(|k| seq.color(k))
        .collect()
}

pub fn skyline_count(seq: &EventSequence, w: Window) -> usize {
    skyline(seq, w).len()
}

/// Skylines of `[i, j]` for every `j >= i`, grown one element at a time.
/// Calls `visit(j, skyline)` with the skyline sorted by index.
pub fn skylines_from(seq: &EventSequence, i: usize, mut visit: impl FnMut(usize, &[usize])) {
    let mut current: Vec<usize> = Vec::new();
    for j in i..seq.len() {
        let p = seq.coords(j);
        if !current.iter().any(|&k| dominated_by(p, seq.coords(k))) {
            current.retain(|&k| !dominated_by(seq.coords(k), p));
            current.push(j);
        }
        visit(j, &current);
    }
}

/// `(pi, phi)` straight from the definition.
pub fn phi_pi(seq: &EventSequence) -> (Vec<usize>, Vec<usize>) {
    let n = seq.len();
    let mut pi = vec![0; n];
    let mut phi = vec![n - 1; n];
    for k in 0..n {
        for j in k + 1..n {
            if dominated_by(seq.coords(k), seq.coords(j)) {
                phi[k] = j - 1;
                break;
            }
        }
        for i in (0..k).rev() {
            if dominated_by(seq.coords(k), seq.coords(i)) {
                pi[k] = i + 1;
                break;
            }
        }
    }
    (pi, phi)
}

/// Violations of the defining properties of a `(pi, phi)` table: `e_k`
/// maximal in `[pi[k], phi[k]]` and not maximal one step beyond either end.
pub fn phi_pi_violations(seq: &EventSequence, pi: &[usize], phi: &[usize]) -> Vec<usize> {
    let n = seq.len();
    let maximal = |k: usize, lo: usize, hi: usize| {
        !(lo..=hi).any(|m| dominated_by(seq.coords(k), seq.coords(m)))
    };
    (0..n)
        .filter(|&k| {
            let ok = pi[k] <= k
                && k <= phi[k]
                && phi[k] < n
                && maximal(k, pi[k], phi[k])
                && (pi[k] == 0 || !maximal(k, pi[k] - 1, k))
                && (phi[k] == n - 1 || !maximal(k, k, phi[k] + 1));
            !ok
        })
        .collect()
}
