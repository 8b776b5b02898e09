//! Exhaustive search for linear subspaces contained in a set of vectors.
//!
//! Every subspace `V` has a unique greedy basis: `v1` is the least nonzero
//! element of `V`, and `v(k+1)` is the least element of `V` outside
//! `span(v1..vk)`. A sequence is such a basis exactly when it increases and
//! each `v(k+1)` has no bit in a pivot (highest bit) column of the earlier
//! vectors. The search walks these sequences only, so each subspace is
//! reported once.
//!
//! At depth `k` the search keeps the list `L_k` of candidates `c` that are
//! greater than `vk`, free of pivot bits, and whose whole coset `c + U_k`
//! lies in the set. Extending by `v` keeps those `c > v` in `L_k` with
//! `c ^ v` also in `L_k`, a single bitset probe per candidate.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::GoldParams;
use crate::linalg::Subspace;
use crate::walsh::{full_spectrum, is_walsh_zero_gold_packed, FnTable};

#[inline]
fn msb(w: u32) -> u32 {
    31 - w.leading_zeros()
}

struct Search<'v, F: FnMut(&[u32])> {
    dim: usize,
    marks: Vec<Vec<u64>>,
    basis: Vec<u32>,
    visit: &'v mut F,
}

impl<F: FnMut(&[u32])> Search<'_, F> {
    fn new(width: u32, dim: usize, visit: &mut F) -> Search<'_, F> {
        let words = (1usize << width).div_ceil(64);
        Search {
            dim,
            marks: vec![vec![0u64; words]; dim],
            basis: Vec::with_capacity(dim),
            visit,
        }
    }

    #[inline]
    fn marked(&self, depth: usize, w: u32) -> bool {
        self.marks[depth][(w >> 6) as usize] >> (w & 63) & 1 != 0
    }

    fn set_marks(&mut self, depth: usize, list: &[u32], on: bool) {
        let marks = &mut self.marks[depth];
        for &w in list {
            if on {
                marks[(w >> 6) as usize] |= 1 << (w & 63);
            } else {
                marks[(w >> 6) as usize] &= !(1 << (w & 63));
            }
        }
    }

    /// Extends the current basis by `list[j]` and searches below it.
    fn branch(&mut self, list: &[u32], j: usize, depth: usize) {
        let remaining = self.dim - depth;
        let v = list[j];
        self.basis.push(v);
        if remaining == 1 {
            (self.visit)(&self.basis);
        } else {
            let need = (1usize << (remaining - 1)) - 1;
            let pivot = 1u32 << msb(v);
            let next: Vec<u32> = list[j + 1..]
                .iter()
                .copied()
                .filter(|&c| c & pivot == 0 && self.marked(depth, c ^ v))
                .collect();
            if next.len() >= need {
                self.descend(&next, depth + 1);
            }
        }
        self.basis.pop();
    }

    fn descend(&mut self, list: &[u32], depth: usize) {
        let remaining = self.dim - depth;
        let need_after = (1usize << (remaining - 1)) - 1;
        if remaining > 1 {
            self.set_marks(depth, list, true);
        }
        for j in 0..list.len() {
            if list.len() - j - 1 < need_after {
                break;
            }
            self.branch(list, j, depth);
        }
        if remaining > 1 {
            self.set_marks(depth, list, false);
        }
    }
}

/// Calls `visit` with the greedy basis of every `dim`-dimensional subspace
/// whose nonzero vectors all lie in `members`. `members` must be sorted,
/// nonzero, and below `2^width`.
pub fn subspaces_within<F: FnMut(&[u32])>(width: u32, members: &[u32], dim: u32, mut visit: F) {
    debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
    if dim == 0 {
        visit(&[]);
        return;
    }
    let mut search = Search::new(width, dim as usize, &mut visit);
    search.descend(members, 0);
}

/// Like [`subspaces_within`], collecting canonical spaces; the subtrees
/// under each first vector run in parallel and are merged in order.
pub fn collect_subspaces_within(width: u32, members: &[u32], dim: u32) -> Vec<Subspace> {
    if dim == 0 {
        return vec![Subspace::zero(width)];
    }
    let need_after = (1usize << (dim - 1)) - 1;
    let mut out: Vec<Subspace> = (0..members.len())
        .into_par_iter()
        .filter(|&j| members.len() - j > need_after)
        .flat_map_iter(|j| {
            let mut found = Vec::new();
            let mut visit = |basis: &[u32]| found.push(Subspace::span(width, basis.iter().copied()));
            let mut search = Search::new(width, dim as usize, &mut visit);
            if dim > 1 {
                search.set_marks(0, members, true);
            }
            search.branch(members, j, 0);
            found
        })
        .collect();
    out.sort();
    out
}

/// Largest `n` for which [`enumerate_wz_spaces`] runs.
pub const WZ_ENUMERATION_MAX_N: u32 = 7;

/// Every WZ space of `f`: all `n`-dimensional subspaces of F_2^(2n) whose
/// nonzero vectors are Walsh zeros, in canonical sorted order. The zero set
/// comes from the Gold test when `gold` is given (valid only if `f` is that
/// Gold function), otherwise from the full spectrum.
pub fn enumerate_wz_spaces(f: &FnTable, gold: Option<&GoldParams>) -> Result<Vec<Subspace>> {
    let n = f.n();
    if n > WZ_ENUMERATION_MAX_N {
        return Err(Error::SizeGuard(format!(
            "exhaustive WZ-space search is limited to n <= {WZ_ENUMERATION_MAX_N}; n = {n} is out of budget"
        )));
    }
    let zeros: Vec<u32> = match gold {
        Some(gp) => (1..1u32 << (2 * n))
            .filter(|&w| is_walsh_zero_gold_packed(f.ctx(), gp, w))
            .collect(),
        None => {
            let spec = full_spectrum(f)?;
            (1..1u32 << (2 * n))
                .filter(|&w| spec.values()[w as usize] == 0)
                .collect()
        }
    };
    Ok(collect_subspaces_within(2 * n, &zeros, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Brute force: all spans of `dim` members, deduplicated.
    fn brute(width: u32, members: &[u32], dim: u32) -> BTreeSet<Subspace> {
        let set: BTreeSet<u32> = members.iter().copied().collect();
        let mut out = BTreeSet::new();
        let mut stack = vec![(Subspace::zero(width), 0usize)];
        while let Some((s, start)) = stack.pop() {
            if s.dim() == dim {
                if s.elements().unwrap().skip(1).all(|w| set.contains(&w)) {
                    out.insert(s);
                }
                continue;
            }
            for (k, &m) in members.iter().enumerate().skip(start) {
                let mut t = s.clone();
                if t.insert(m) {
                    stack.push((t, k + 1));
                }
            }
        }
        out
    }

    #[test]
    fn counts_all_subspaces() {
        let all: Vec<u32> = (1..16).collect();
        for (dim, expect) in [(1, 15), (2, 35), (3, 15), (4, 1)] {
            let mut count = 0;
            subspaces_within(4, &all, dim, |_| count += 1);
            assert_eq!(count, expect, "dim {dim}");
        }
    }

    #[test]
    fn agrees_with_brute_force_on_a_sparse_set() {
        let members: Vec<u32> = (1..64u32).filter(|w| (w * 37 + 11) % 5 != 0).collect();
        for dim in 1..=3 {
            let fast: BTreeSet<Subspace> = collect_subspaces_within(6, &members, dim).into_iter().collect();
            assert_eq!(fast, brute(6, &members, dim), "dim {dim}");
        }
    }

    #[test]
    fn each_space_reported_once() {
        let all: Vec<u32> = (1..32).collect();
        let spaces = collect_subspaces_within(5, &all, 2);
        let unique: BTreeSet<_> = spaces.iter().cloned().collect();
        assert_eq!(spaces.len(), unique.len());
        assert_eq!(spaces.len(), 155);
    }
}
