//! Linear algebra over F_2 on bit-packed vectors.
//!
//! [`Subspace`] covers the narrow case (width at most 32 bits: subspaces of
//! F_{2^n} and of F_{2^n} x F_{2^n}). [`BitMatrix`] covers the wide generator
//! matrices of the graph codes, whose rows have `2^n - 1` columns.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

/// Largest dimension for which [`Subspace::elements`] and
/// [`BitMatrix::weight_spectrum`] will enumerate.
pub const ENUMERATION_LIMIT: u32 = 20;

/// Packs `(a, b)` into one word: low `n` bits hold `a`, the next `n` hold `b`.
#[inline]
pub fn pack_pair(n: u32, a: Elem, b: Elem) -> u32 {
    a.0 | b.0 << n
}

#[inline]
pub fn unpack_pair(n: u32, w: u32) -> (Elem, Elem) {
    (Elem(w & ((1 << n) - 1)), Elem(w >> n))
}

#[inline]
fn msb(w: u32) -> u32 {
    31 - w.leading_zeros()
}

/// An F_2-subspace of `width`-bit words, stored as its reduced row echelon
/// basis: each row's pivot is its highest set bit, pivots strictly decrease
/// down the list, and no other row has a bit in a pivot column. Two spans
/// are equal exactly when their bases are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    width: u32,
    basis: Vec<u32>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(w={}, [", self.width)?;
        for (k, r) in self.basis.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r:#x}")?;
        }
        write!(f, "])")
    }
}

impl Subspace {
    pub fn zero(width: u32) -> Subspace {
        assert!(width <= 32, "subspace width {width} exceeds 32 bits");
        Subspace {
            width,
            basis: Vec::new(),
        }
    }

    pub fn full(width: u32) -> Subspace {
        Subspace::span(width, (0..width).map(|k| 1u32 << k))
    }

    /// Row-reduced span of `vectors`. Bits at or above `width` must be clear.
    pub fn span<I: IntoIterator<Item = u32>>(width: u32, vectors: I) -> Subspace {
        let mut s = Subspace::zero(width);
        for v in vectors {
            debug_assert!(width == 32 || v >> width == 0, "{v:#x} wider than {width} bits");
            s.insert(v);
        }
        s
    }

    /// Adds `v` to the span, keeping the basis reduced. Returns whether the
    /// dimension grew.
    pub fn insert(&mut self, v: u32) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        let p = msb(r);
        for row in self.basis.iter_mut() {
            if *row >> p & 1 != 0 {
                *row ^= r;
            }
        }
        let at = self.basis.partition_point(|&row| msb(row) > p);
        self.basis.insert(at, r);
        true
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    /// Canonical basis, highest pivot first.
    #[inline]
    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// Bitmask of the pivot columns.
    pub fn pivot_mask(&self) -> u32 {
        self.basis.iter().fold(0, |m, &r| m | 1 << msb(r))
    }

    /// Least element of the coset `v + self`.
    #[inline]
    pub fn reduce(&self, mut v: u32) -> u32 {
        for &row in &self.basis {
            if v >> msb(row) & 1 != 0 {
                v ^= row;
            }
        }
        v
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.reduce(v) == 0
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|&r| other.contains(r))
    }

    /// Every vector of the space, each once, in Gray-code order starting at 0.
    pub fn elements(&self) -> Result<impl Iterator<Item = u32> + '_> {
        if self.dim() > ENUMERATION_LIMIT {
            return Err(Error::SizeGuard(format!(
                "refusing to enumerate a space of dimension {} (limit {ENUMERATION_LIMIT})",
                self.dim()
            )));
        }
        let count = 1u64 << self.dim();
        let mut acc = 0u32;
        Ok((0..count).map(move |k| {
            if k > 0 {
                acc ^= self.basis[k.trailing_zeros() as usize];
            }
            acc
        }))
    }

    /// `self ∩ other` by the Zassenhaus algorithm.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.width != other.width {
            return Err(Error::WidthMismatch(self.width, other.width));
        }
        let w = self.width;
        // rows (a | a) for a in self, (b | 0) for b in other; high half first
        let rows = self
            .basis
            .iter()
            .map(|&a| (a as u64) << w | a as u64)
            .chain(other.basis.iter().map(|&b| (b as u64) << w));
        let mut echelon: Vec<u64> = Vec::new();
        for mut v in rows {
            for &r in &echelon {
                let p = 63 - r.leading_zeros();
                if v >> p & 1 != 0 {
                    v ^= r;
                }
            }
            if v != 0 {
                let p = 63 - v.leading_zeros();
                for r in echelon.iter_mut() {
                    if *r >> p & 1 != 0 {
                        *r ^= v;
                    }
                }
                let at = echelon.partition_point(|&r| 63 - r.leading_zeros() > p);
                echelon.insert(at, v);
            }
        }
        let low = (1u64 << w) - 1;
        Ok(Subspace::span(
            w,
            echelon
                .iter()
                .filter(|&&r| r >> w == 0)
                .map(|&r| (r & low) as u32),
        ))
    }

    /// `self + other`.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        if self.width != other.width {
            return Err(Error::WidthMismatch(self.width, other.width));
        }
        let mut s = self.clone();
        for &r in &other.basis {
            s.insert(r);
        }
        Ok(s)
    }

    /// `{x : parity(x & c) = 0 for every c in constraints}`.
    pub fn null_space<I: IntoIterator<Item = u32>>(width: u32, constraints: I) -> Subspace {
        let c = Subspace::span(width, constraints);
        let pivots = c.pivot_mask();
        let free = (0..width).filter(|&k| pivots >> k & 1 == 0);
        Subspace::span(
            width,
            free.map(|f| {
                c.basis
                    .iter()
                    .filter(|&&row| row >> f & 1 != 0)
                    .fold(1u32 << f, |x, &row| x | 1 << msb(row))
            }),
        )
    }

    /// Bit-matrix view of the basis (rows in canonical order).
    pub fn to_matrix(&self) -> BitMatrix {
        BitMatrix::from_fn(self.basis.len(), self.width as usize, |r, c| {
            self.basis[r] >> c & 1 != 0
        })
    }
}

/// The trace-orthogonal space `{x : Tr(s x) = 0 for all s in S}`.
pub fn orthogonal_complement(ctx: &FieldCtx, s: &[Elem]) -> Subspace {
    Subspace::null_space(ctx.n(), s.iter().map(|&a| ctx.trace_form(a)))
}

/// A dense bit matrix with arbitrary column count.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    ncols: usize,
    rows: Vec<Vec<u64>>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.ncols)?;
        for r in 0..self.rows.len() {
            let line: String = (0..self.ncols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> BitMatrix {
        BitMatrix {
            ncols,
            rows: vec![vec![0; ncols.div_ceil(64)]; nrows],
        }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> bool) -> BitMatrix {
        let mut m = BitMatrix::zeros(nrows, ncols);
        for r in 0..nrows {
            for c in 0..ncols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Rows given as words: bit `c` of `rows[r]` is entry `(r, c)`.
    pub fn from_words(ncols: usize, rows: &[u64]) -> BitMatrix {
        assert!(ncols <= 64);
        BitMatrix::from_fn(rows.len(), ncols, |r, c| rows[r] >> c & 1 != 0)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 != 0
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let word = &mut self.rows[r][c / 64];
        if v {
            *word |= 1 << (c % 64);
        } else {
            *word &= !(1 << (c % 64));
        }
    }

    /// Column `c` read as a word: bit `r` is entry `(r, c)`. At most 64 rows.
    pub fn column(&self, c: usize) -> u64 {
        assert!(self.rows.len() <= 64);
        (0..self.rows.len()).fold(0, |acc, r| acc | (self.get(r, c) as u64) << r)
    }

    /// Stacks `self` on top of `other`.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.ncols != other.ncols {
            return Err(Error::WidthMismatch(self.ncols as u32, other.ncols as u32));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix {
            ncols: self.ncols,
            rows,
        })
    }

    fn first_set(row: &[u64]) -> Option<usize> {
        row.iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * 64 + w.trailing_zeros() as usize)
    }

    /// Reduced row echelon form with zero rows dropped. Pivots are the
    /// leftmost set column of each row and increase down the matrix.
    pub fn rref(&self) -> BitMatrix {
        let mut rows = self.rows.clone();
        let mut out: Vec<Vec<u64>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for mut row in rows.drain(..) {
            for (p, prow) in pivots.iter().zip(out.iter()) {
                if row[p / 64] >> (p % 64) & 1 != 0 {
                    row.iter_mut().zip(prow).for_each(|(a, b)| *a ^= b);
                }
            }
            if let Some(p) = Self::first_set(&row) {
                for prow in out.iter_mut() {
                    if prow[p / 64] >> (p % 64) & 1 != 0 {
                        prow.iter_mut().zip(&row).for_each(|(a, b)| *a ^= b);
                    }
                }
                pivots.push(p);
                out.push(row);
            }
        }
        let mut order: Vec<usize> = (0..out.len()).collect();
        order.sort_by_key(|&k| pivots[k]);
        BitMatrix {
            ncols: self.ncols,
            rows: order.into_iter().map(|k| out[k].clone()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().nrows()
    }

    /// Whether the two matrices generate the same row space.
    pub fn row_space_equal(&self, other: &BitMatrix) -> bool {
        self.ncols == other.ncols && self.rref() == other.rref()
    }

    /// Hamming weights of every nonzero codeword of the row space, sorted.
    pub fn weight_spectrum(&self) -> Result<Vec<u32>> {
        let basis = self.rref();
        let k = basis.nrows() as u32;
        if k > ENUMERATION_LIMIT {
            return Err(Error::SizeGuard(format!(
                "code dimension {k} exceeds enumeration limit {ENUMERATION_LIMIT}"
            )));
        }
        let mut word = vec![0u64; self.ncols.div_ceil(64)];
        let mut weights = Vec::with_capacity((1usize << k) - 1);
        for g in 1u64..1 << k {
            let row = &basis.rows[g.trailing_zeros() as usize];
            word.iter_mut().zip(row).for_each(|(a, b)| *a ^= b);
            weights.push(word.iter().map(|w| w.count_ones()).sum());
        }
        weights.sort_unstable();
        Ok(weights)
    }
}

/// The generator matrix of the simplex code: all nonzero columns of F_2^r.
pub fn simplex_generator(r: usize) -> BitMatrix {
    BitMatrix::from_fn(r, (1 << r) - 1, |row, col| (col + 1) >> row & 1 != 0)
}

/// Kernel of the linear map sending basis word `k` to `images[k]`.
pub fn linear_kernel(images: &[u32]) -> Subspace {
    let mut rows: Vec<(u32, u32)> = Vec::new();
    let mut kernel = Subspace::zero(images.len() as u32);
    for (k, &img) in images.iter().enumerate() {
        let mut v = (img, 1u32 << k);
        for &(r, comb) in &rows {
            if v.0 >> msb(r) & 1 != 0 {
                v.0 ^= r;
                v.1 ^= comb;
            }
        }
        if v.0 == 0 {
            kernel.insert(v.1);
        } else {
            rows.push(v);
            rows.sort_by_key(|r| std::cmp::Reverse(msb(r.0)));
        }
    }
    kernel
}

/// Solves `sum_k x_k images[k] = target` over F_2, returning the least
/// solution `x` (as a word) or `None` when `target` is not in the image.
pub fn solve_least(images: &[u32], target: u32) -> Option<u32> {
    // echelon of (image | combination) pairs
    let mut rows: Vec<(u32, u32)> = Vec::new();
    for (k, &img) in images.iter().enumerate() {
        let mut v = (img, 1u32 << k);
        for &(r, comb) in &rows {
            if v.0 >> msb(r) & 1 != 0 {
                v.0 ^= r;
                v.1 ^= comb;
            }
        }
        if v.0 != 0 {
            rows.push(v);
            rows.sort_by_key(|r| std::cmp::Reverse(msb(r.0)));
        }
    }
    let mut t = (target, 0u32);
    for &(r, comb) in &rows {
        if t.0 >> msb(r) & 1 != 0 {
            t.0 ^= r;
            t.1 ^= comb;
        }
    }
    if t.0 != 0 {
        return None;
    }
    Some(linear_kernel(images).reduce(t.1))
}
