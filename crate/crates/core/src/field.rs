//! Arithmetic in the binary field F_{2^n} for odd `n` in `3..=13`.
//!
//! Elements are bit-packed polynomials: bit `k` of the word is the
//! coefficient of `x^k`. Multiplication is carry-less multiplication
//! followed by reduction modulo the context's irreducible polynomial, so a
//! whole element always fits in one machine word.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{invalid, Error, Result};

pub const MIN_DEGREE: u32 = 3;
pub const MAX_DEGREE: u32 = 13;

/// A field element in polynomial-basis representation.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem({:#x})", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Elem {
    type Output = Elem;
    #[inline]
    fn add(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for Elem {
    #[inline]
    fn add_assign(&mut self, rhs: Elem) {
        self.0 ^= rhs.0;
    }
}

/// One concrete field F_{2^n}. Immutable and cheap to copy.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    n: u32,
    modulus: u32,
    // bit k = Tr(x^k); Tr(a) is the parity of a & trace_mask
    trace_mask: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.n, self.modulus)
    }
}

/// Carry-less product of two polynomials whose product fits in 32 bits.
#[inline]
fn clmul(mut a: u32, mut b: u32) -> u32 {
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

#[inline]
fn degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `b` over F_2[x]; `b` must be nonzero.
pub(crate) fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Irreducibility by trial division against every polynomial of degree at
/// most `deg(p)/2`.
pub fn is_irreducible(p: u32) -> bool {
    let d = degree(p);
    if d < 1 {
        return false;
    }
    for dd in 1..=d / 2 {
        for q in (1u32 << dd)..(1u32 << (dd + 1)) {
            if poly_rem(p, q) == 0 {
                return false;
            }
        }
    }
    true
}

fn check_degree(n: u32) -> Result<()> {
    if n.is_multiple_of(2) || !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
        return Err(invalid(format!(
            "field degree must be odd and in [{MIN_DEGREE}, {MAX_DEGREE}], got {n}"
        )));
    }
    Ok(())
}

impl FieldCtx {
    /// Builds F_{2^n}. Without a modulus the numerically least irreducible
    /// polynomial of degree `n` is used.
    pub fn new(n: u32, modulus: Option<u32>) -> Result<FieldCtx> {
        check_degree(n)?;
        let modulus = match modulus {
            Some(m) => {
                if degree(m) != n as i32 || !is_irreducible(m) {
                    return Err(Error::ReducibleModulus { n, modulus: m });
                }
                m
            }
            None => ((1u32 << n) | 1..1u32 << (n + 1))
                .find(|&m| is_irreducible(m))
                .expect("an irreducible polynomial exists in every degree"),
        };
        let mut ctx = FieldCtx {
            n,
            modulus,
            trace_mask: 0,
        };
        let mut mask = 0;
        for k in 0..n {
            if ctx.trace_slow(Elem(1 << k)) {
                mask |= 1 << k;
            }
        }
        ctx.trace_mask = mask;
        Ok(ctx)
    }

    /// Shorthand for the default field of degree `n`.
    pub fn with_degree(n: u32) -> Result<FieldCtx> {
        FieldCtx::new(n, None)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn trace_mask(&self) -> u32 {
        self.trace_mask
    }

    /// `2^n`.
    #[inline]
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    /// Order of the multiplicative group, `2^n - 1`.
    #[inline]
    pub fn group_order(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    #[inline]
    pub fn mask(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    /// All field elements in increasing word order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..1u32 << self.n).map(Elem)
    }

    /// Nonzero field elements in increasing word order.
    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..1u32 << self.n).map(Elem)
    }

    /// Checks that a raw word is a field element of this context.
    pub fn elem(&self, bits: u32) -> Result<Elem> {
        if bits >> self.n != 0 {
            return Err(invalid(format!(
                "{bits:#x} is not an element of GF(2^{})",
                self.n
            )));
        }
        Ok(Elem(bits))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let mut r = clmul(a.0, b.0);
        let n = self.n;
        let mut bit = 2 * n - 2;
        while bit >= n {
            if r >> bit & 1 != 0 {
                r ^= self.modulus << (bit - n);
            }
            bit -= 1;
        }
        Elem(r)
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// `a^(2^k)`, the k-fold Frobenius.
    pub fn frobenius(&self, mut a: Elem, k: u32) -> Elem {
        for _ in 0..k % self.n {
            a = self.square(a);
        }
        a
    }

    /// `a^k` with the exponent reduced mod `2^n - 1` for nonzero `a`.
    /// `0^0 = 1` and `0^k = 0` for `k > 0`.
    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if a.is_zero() {
            return if k == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let mut e = k % self.group_order();
        let mut base = a;
        let mut acc = Elem::ONE;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.group_order() - 1))
    }

    fn trace_slow(&self, a: Elem) -> bool {
        let mut acc = Elem::ZERO;
        let mut y = a;
        for _ in 0..self.n {
            acc += y;
            y = self.square(y);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 == 1
    }

    /// Absolute trace `Tr(a)`, as 0 or 1.
    #[inline]
    pub fn trace(&self, a: Elem) -> u32 {
        (a.0 & self.trace_mask).count_ones() & 1
    }

    /// The mask `m` with `Tr(a * x) = parity(x & m)` for every `x`.
    pub fn trace_form(&self, a: Elem) -> u32 {
        let mut m = 0;
        let mut basis = Elem::ONE;
        for k in 0..self.n {
            // a * x^k, computed by repeated multiplication by x
            if k > 0 {
                basis = self.mul(basis, Elem(2));
            }
            m |= self.trace(self.mul(a, basis)) << k;
        }
        m
    }

    /// Relative trace `Tr^n_m(a) = sum_{j < n/m} a^(2^(mj))`.
    pub fn trace_rel(&self, m: u32, a: Elem) -> Result<Elem> {
        self.check_divisor(m)?;
        let mut acc = Elem::ZERO;
        let mut y = a;
        for _ in 0..self.n / m {
            acc += y;
            y = self.frobenius(y, m);
        }
        Ok(acc)
    }

    fn check_divisor(&self, m: u32) -> Result<()> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(invalid(format!("{m} does not divide {}", self.n)));
        }
        Ok(())
    }

    /// The unique `y` with `y^(2^i) = a`.
    pub fn qroot(&self, a: Elem, i: u32) -> Elem {
        let i = i % self.n;
        self.frobenius(a, (self.n - i) % self.n)
    }

    /// The subfield F_{2^m}, in increasing word order.
    pub fn subfield(&self, m: u32) -> Result<Vec<Elem>> {
        self.check_divisor(m)?;
        Ok(self.elements().filter(|&a| self.frobenius(a, m) == a).collect())
    }

    /// Whether `a` lies in the subfield F_{2^m}.
    pub fn in_subfield(&self, m: u32, a: Elem) -> bool {
        self.n.is_multiple_of(m) && self.frobenius(a, m) == a
    }

    /// The polynomial basis `1, x, ..., x^(n-1)`.
    pub fn polynomial_basis(&self) -> Vec<Elem> {
        (0..self.n).map(|k| Elem(1 << k)).collect()
    }

    /// Trace-dual basis: returns `b` with `Tr(basis[i] * b[j]) = [i == j]`.
    ///
    /// The Gram matrix `M[i][j] = Tr(a_i a_j)` is symmetric, and the dual
    /// basis is `b_j = sum_k (M^-1)[j][k] a_k`.
    pub fn dual_basis(&self, basis: &[Elem]) -> Result<Vec<Elem>> {
        let n = self.n as usize;
        if basis.len() != n {
            return Err(invalid(format!(
                "a basis needs {n} elements, got {}",
                basis.len()
            )));
        }
        let mut gram: Vec<u32> = basis
            .iter()
            .map(|&a| {
                basis
                    .iter()
                    .enumerate()
                    .fold(0, |row, (j, &b)| row | self.trace(self.mul(a, b)) << j)
            })
            .collect();
        let mut inv: Vec<u32> = (0..n).map(|i| 1 << i).collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| gram[r] >> col & 1 != 0)
                .ok_or_else(|| invalid("input elements are not an F2-basis"))?;
            gram.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && gram[r] >> col & 1 != 0 {
                    gram[r] ^= gram[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(inv
            .iter()
            .map(|&row| {
                (0..n)
                    .filter(|&k| row >> k & 1 != 0)
                    .fold(Elem::ZERO, |acc, k| acc + basis[k])
            })
            .collect())
    }

    pub fn gold_params(&self, i: u32) -> Result<GoldParams> {
        GoldParams::new(self, i)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Exponent data for the Gold function `x^(2^i+1)` on one field.
///
/// `t` realizes `x^(1/(2^i+1))` and `e = (2^n-1) - t` realizes
/// `x^(-1/(2^i+1))`. Both fractional powers send 0 to 0.
#[derive(Clone, PartialEq, Eq)]
pub struct GoldParams {
    n: u32,
    i: u32,
    d: u64,
    t: u64,
    e: u64,
    invroot: Vec<Elem>,
}

impl fmt::Debug for GoldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GoldParams")
            .field("n", &self.n)
            .field("i", &self.i)
            .field("d", &self.d)
            .field("t", &self.t)
            .field("e", &self.e)
            .finish()
    }
}

impl GoldParams {
    pub fn new(ctx: &FieldCtx, i: u32) -> Result<GoldParams> {
        let n = ctx.n();
        if i == 0 || i >= n || gcd(i as u64, n as u64) != 1 {
            return Err(invalid(format!(
                "need 1 <= i < {n} with gcd(i, {n}) = 1, got i = {i}"
            )));
        }
        let q = ctx.group_order();
        let d = (1u64 << i) + 1;
        let t = mod_inverse(d, q).ok_or_else(|| invalid("2^i+1 is not invertible"))?;
        let e = q - t;
        let invroot = ctx.elements().map(|b| ctx.pow(b, e)).collect::<Vec<_>>();
        let mut gp = GoldParams {
            n,
            i,
            d,
            t,
            e,
            invroot,
        };
        // pow(0, e) is 0 already since e > 0
        gp.invroot[0] = Elem::ZERO;
        Ok(gp)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn i(&self) -> u32 {
        self.i
    }

    /// The Gold exponent `2^i + 1`.
    #[inline]
    pub fn d(&self) -> u64 {
        self.d
    }

    #[inline]
    pub fn t(&self) -> u64 {
        self.t
    }

    #[inline]
    pub fn e(&self) -> u64 {
        self.e
    }

    /// `2^i`.
    #[inline]
    pub fn two_i(&self) -> u64 {
        1u64 << self.i
    }

    /// `b^(1/(2^i+1))`.
    pub fn root_gold(&self, ctx: &FieldCtx, b: Elem) -> Elem {
        ctx.pow(b, self.t)
    }

    /// `b^(-1/(2^i+1))`, with `0 -> 0`. Table lookup.
    #[inline]
    pub fn invroot_gold(&self, b: Elem) -> Elem {
        self.invroot[b.0 as usize]
    }

    /// `x^(2^i+1)`.
    pub fn gold(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        ctx.mul(ctx.frobenius(x, self.i), x)
    }
}
