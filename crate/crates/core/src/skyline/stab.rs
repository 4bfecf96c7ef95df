//! Stabbing structure for the rectangles `[pi[k], k] x [k, phi[k]]`.
//!
//! Reporting uses a segment tree over `k`; each node stores a priority search
//! tree of its keys (max-heap on `phi`, split by `pi` rank), so a query visits
//! `O(log n)` nodes and spends `O(log n + m_v)` in each. Counting uses a
//! persistent prefix-sum tree over `j` with one version per `i`.

use super::PiPhiTable;
use crate::event::Window;
use crate::tree::Layout;

#[derive(Debug, Clone, Copy, Default)]
struct Entry {
    key: u32,
    pi: u32,
    phi: u32,
    /// Minimum `pi` over the subtree rooted here.
    lo: u32,
}

#[derive(Debug, Clone, Copy, Default)]
struct PNode {
    left: u32,
    right: u32,
    sum: i32,
}

#[derive(Debug, Clone)]
pub struct StabIndex {
    layout: Layout,
    /// One array of `n` entries per tree level; node `v` of height `h` owns
    /// `levels[h][span(v)]`.
    levels: Vec<Vec<Entry>>,
    nodes: Vec<PNode>,
    versions: Vec<u32>,
    size: usize,
}

fn build_pst(keys: &mut [u32], out: &mut [Entry], table: &PiPhiTable) {
    let m = keys.len();
    if m == 0 {
        return;
    }
    let lo = table.pi[keys[0] as usize] as u32;
    let mut r = 0;
    for (p, &k) in keys.iter().enumerate() {
        if table.phi[k as usize] > table.phi[keys[r] as usize] {
            r = p;
        }
    }
    keys[..=r].rotate_right(1);
    let k = keys[0] as usize;
    out[0] = Entry {
        key: k as u32,
        pi: table.pi[k] as u32,
        phi: table.phi[k] as u32,
        lo,
    };
    let lsize = m / 2;
    let (kl, kr) = keys[1..].split_at_mut(lsize);
    let (ol, or) = out[1..].split_at_mut(lsize);
    build_pst(kl, ol, table);
    build_pst(kr, or, table);
}

fn report_pst(entries: &[Entry], i: u32, j: u32, out: &mut Vec<usize>) {
    let visit = |p: usize, m: usize, stack: &mut Vec<(usize, usize)>| {
        if m > 0 && entries[p].phi >= j && entries[p].lo <= i {
            stack.push((p, m));
        }
    };
    let mut stack = Vec::new();
    visit(0, entries.len(), &mut stack);
    while let Some((p, m)) = stack.pop() {
        let e = entries[p];
        if e.pi <= i {
            out.push(e.key as usize);
        }
        let lsize = m / 2;
        visit(p + 1, lsize, &mut stack);
        visit(p + 1 + lsize, m - 1 - lsize, &mut stack);
    }
}

impl StabIndex {
    /// Approximate heap footprint in bytes.
    pub fn memory_bytes(&self) -> usize {
        use std::mem::size_of;
        self.levels.iter().map(|l| l.len() * size_of::<Entry>()).sum::<usize>()
            + self.nodes.len() * size_of::<PNode>()
            + self.versions.len() * size_of::<u32>()
    }

    pub fn build(table: &PiPhiTable) -> Self {
        let n = table.len();
        let layout = Layout::new(n);
        let height = layout.root_height() as usize;
        let mut levels = Vec::with_capacity(height + 1);
        let mut sorted: Vec<u32> = (0..n as u32).collect();
        for h in 0..=height {
            if h > 0 {
                let block = 1usize << h;
                let half = block / 2;
                let mut merged = Vec::with_capacity(n);
                for lo in (0..n).step_by(block) {
                    let mid = (lo + half).min(n);
                    let hi = (lo + block).min(n);
                    let (mut a, mut b) = (lo, mid);
                    while a < mid || b < hi {
                        let take_a = b >= hi
                            || (a < mid
                                && table.pi[sorted[a] as usize] <= table.pi[sorted[b] as usize]);
                        if take_a {
                            merged.push(sorted[a]);
                            a += 1;
                        } else {
                            merged.push(sorted[b]);
                            b += 1;
                        }
                    }
                }
                sorted = merged;
            }
            let mut keys = sorted.clone();
            let mut level = vec![Entry::default(); n];
            let block = 1usize << h;
            for lo in (0..n).step_by(block) {
                let hi = (lo + block).min(n);
                build_pst(&mut keys[lo..hi], &mut level[lo..hi], table);
            }
            levels.push(level);
        }

        let size = layout.size();
        let mut idx = StabIndex {
            layout,
            levels,
            nodes: vec![PNode::default()],
            versions: Vec::with_capacity(n),
            size,
        };
        let mut starts: Vec<Vec<usize>> = vec![Vec::new(); n];
        for k in 0..n {
            starts[table.pi[k]].push(k);
        }
        let mut root = 0u32;
        for i in 0..n {
            if i > 0 {
                root = idx.toggle(root, i - 1, table, -1);
            }
            for &k in &starts[i] {
                root = idx.toggle(root, k, table, 1);
            }
            idx.versions.push(root);
        }
        idx
    }

    fn toggle(&mut self, root: u32, k: usize, table: &PiPhiTable, sign: i32) -> u32 {
        let root = self.add(root, k, sign);
        if table.phi[k] + 1 < table.len() {
            self.add(root, table.phi[k] + 1, -sign)
        } else {
            root
        }
    }

    fn add(&mut self, root: u32, pos: usize, delta: i32) -> u32 {
        let mut path = Vec::with_capacity(32);
        let (mut v, mut lo, mut hi) = (root, 0usize, self.size);
        loop {
            path.push(v);
            if hi - lo == 1 {
                break;
            }
            let mid = (lo + hi) / 2;
            let node = self.nodes[v as usize];
            if pos < mid {
                v = node.left;
                hi = mid;
            } else {
                v = node.right;
                lo = mid;
            }
        }
        // Rebuild the path bottom-up.
        let mut child = u32::MAX;
        let (mut lo, mut hi) = (pos, pos + 1);
        for &old in path.iter().rev() {
            let mut node = self.nodes[old as usize];
            node.sum += delta;
            if child != u32::MAX {
                let span = hi - lo;
                if lo % (2 * span) == 0 {
                    node.left = child;
                    hi += span;
                } else {
                    node.right = child;
                    lo -= span;
                }
            }
            self.nodes.push(node);
            child = (self.nodes.len() - 1) as u32;
        }
        child
    }

    pub fn report(&self, i: usize, j: usize, out: &mut Vec<usize>) {
        for v in self.layout.canonical_cover(Window::new(i, j)) {
            let h = self.layout.height(v) as usize;
            let (lo, hi) = self.layout.span(v);
            report_pst(&self.levels[h][lo..hi], i as u32, j as u32, out);
        }
    }

    pub fn count(&self, i: usize, j: usize) -> usize {
        let (mut v, mut lo, mut hi) = (self.versions[i], 0usize, self.size);
        let mut total = 0i64;
        while v != 0 {
            if hi - lo == 1 {
                total += self.nodes[v as usize].sum as i64;
                break;
            }
            let mid = (lo + hi) / 2;
            let node = self.nodes[v as usize];
            if j < mid {
                v = node.left;
                hi = mid;
            } else {
                total += self.nodes[node.left as usize].sum as i64;
                v = node.right;
                lo = mid;
            }
        }
        total as usize
    }
}
