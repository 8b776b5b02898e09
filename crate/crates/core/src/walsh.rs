//! Walsh transforms of functions on F_{2^n} and Walsh-zero-space checks.

use crate::error::{invalid, Error, Result};
use crate::field::{Elem, FieldCtx, GoldParams};
use crate::linalg::{pack_pair, unpack_pair, Subspace};

/// A function F_{2^n} -> F_{2^n} stored as a lookup table indexed by the
/// word of `x`. Tables are normalized so that `f(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnTable {
    ctx: FieldCtx,
    table: Vec<Elem>,
}

impl FnTable {
    pub fn new(ctx: FieldCtx, table: Vec<Elem>) -> Result<FnTable> {
        if table.len() != ctx.size() {
            return Err(invalid(format!(
                "table has {} entries, GF(2^{}) has {}",
                table.len(),
                ctx.n(),
                ctx.size()
            )));
        }
        if let Some(bad) = table.iter().find(|v| v.0 >> ctx.n() != 0) {
            return Err(invalid(format!("table value {bad} is outside the field")));
        }
        if !table[0].is_zero() {
            return Err(invalid("tables must satisfy f(0) = 0"));
        }
        Ok(FnTable { ctx, table })
    }

    pub fn from_fn(ctx: FieldCtx, f: impl Fn(Elem) -> Elem) -> Result<FnTable> {
        FnTable::new(ctx, ctx.elements().map(f).collect())
    }

    /// The Gold function `x^(2^i+1)`.
    pub fn gold(ctx: FieldCtx, gp: &GoldParams) -> FnTable {
        FnTable::from_fn(ctx, |x| gp.gold(&ctx, x)).expect("Gold table is well formed")
    }

    #[inline]
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.ctx.n()
    }

    #[inline]
    pub fn eval(&self, x: Elem) -> Elem {
        self.table[x.0 as usize]
    }

    #[inline]
    pub fn table(&self) -> &[Elem] {
        &self.table
    }
}

/// `W_f(a, b) = sum_x (-1)^Tr(a x + b f(x))`.
pub fn walsh_at(f: &FnTable, a: Elem, b: Elem) -> i32 {
    let ctx = f.ctx();
    let ma = ctx.trace_form(a);
    let mb = ctx.trace_form(b);
    ctx.elements()
        .map(|x| {
            let bit = ((x.0 & ma) ^ (f.eval(x).0 & mb)).count_ones() & 1;
            1 - 2 * bit as i32
        })
        .sum()
}

/// The full Walsh spectrum, indexed by the packed pair `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: u32,
    values: Vec<i32>,
}

impl WalshSpectrum {
    #[inline]
    pub fn at(&self, a: Elem, b: Elem) -> i32 {
        self.values[pack_pair(self.n, a, b) as usize]
    }

    #[inline]
    pub fn values(&self) -> &[i32] {
        &self.values
    }

    /// `sum W^2`, which equals `2^(3n)` for every function.
    pub fn energy(&self) -> u64 {
        self.values.iter().map(|&v| (v as i64 * v as i64) as u64).sum()
    }
}

/// In-place Walsh–Hadamard butterfly on a power-of-two slice.
pub fn fwht(data: &mut [i32]) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for chunk in data.chunks_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        }
        h *= 2;
    }
}

/// Walsh spectrum by one fast transform of the graph indicator
/// `{(x, f(x))}` on F_2^(2n).
///
/// The butterfly yields `sum_x (-1)^(u.x + v.f(x))` for dot-product
/// characters; `Tr(a x)` is the dot product with the trace form of `a`, so
/// the result is re-indexed through that linear bijection.
pub fn full_spectrum(f: &FnTable) -> Result<WalshSpectrum> {
    let ctx = f.ctx();
    let n = ctx.n();
    if n > crate::field::MAX_DEGREE {
        return Err(Error::SizeGuard(format!("spectrum of size 2^{} refused", 2 * n)));
    }
    let mut hat = vec![0i32; 1 << (2 * n)];
    for x in ctx.elements() {
        hat[pack_pair(n, x, f.eval(x)) as usize] = 1;
    }
    fwht(&mut hat);
    let forms: Vec<u32> = ctx.elements().map(|a| ctx.trace_form(a)).collect();
    let mut values = vec![0i32; 1 << (2 * n)];
    for b in ctx.elements() {
        let fb = forms[b.0 as usize];
        for a in ctx.elements() {
            let fa = forms[a.0 as usize];
            values[pack_pair(n, a, b) as usize] = hat[(fa | fb << n) as usize];
        }
    }
    Ok(WalshSpectrum { n, values })
}

/// Closed-form Walsh-zero test for the Gold function `x^(2^i+1)`:
/// `(a, b)` is a zero iff `b != 0` and `Tr(a b^(-1/(2^i+1))) = 0`, or
/// `a != 0 = b`.
#[inline]
pub fn is_walsh_zero_gold(ctx: &FieldCtx, gp: &GoldParams, a: Elem, b: Elem) -> bool {
    if b.is_zero() {
        return !a.is_zero();
    }
    ctx.trace(ctx.mul(a, gp.invroot_gold(b))) == 0
}

/// Same test on a packed pair word.
#[inline]
pub fn is_walsh_zero_gold_packed(ctx: &FieldCtx, gp: &GoldParams, w: u32) -> bool {
    let (a, b) = unpack_pair(ctx.n(), w);
    is_walsh_zero_gold(ctx, gp, a, b)
}

/// Whether `z` is a WZ space of `f`: dimension `n` and every nonzero element
/// a Walsh zero. With `fast` the Gold test is used, which is only valid when
/// `f` is the Gold function of those parameters; otherwise each element is
/// summed directly.
pub fn verify_wz_space(f: &FnTable, z: &Subspace, fast: Option<&GoldParams>) -> Result<bool> {
    let n = f.n();
    if z.width() != 2 * n {
        return Err(Error::WidthMismatch(z.width(), 2 * n));
    }
    if z.dim() != n {
        return Ok(false);
    }
    let ctx = f.ctx();
    let ok = match fast {
        Some(gp) => {
            if gp.n() != n {
                return Err(invalid("Gold parameters belong to another field"));
            }
            z.elements()?
                .skip(1)
                .all(|w| is_walsh_zero_gold_packed(ctx, gp, w))
        }
        None => z.elements()?.skip(1).all(|w| {
            let (a, b) = unpack_pair(n, w);
            walsh_at(f, a, b) == 0
        }),
    };
    Ok(ok)
}

/// Gold-only variant of [`verify_wz_space`] that needs no table.
pub fn verify_wz_space_gold(ctx: &FieldCtx, gp: &GoldParams, z: &Subspace) -> Result<bool> {
    let n = ctx.n();
    if z.width() != 2 * n {
        return Err(Error::WidthMismatch(z.width(), 2 * n));
    }
    if z.dim() != n {
        return Ok(false);
    }
    Ok(z.elements()?
        .skip(1)
        .all(|w| is_walsh_zero_gold_packed(ctx, gp, w)))
}

/// Largest `n` accepted by [`wz_count`].
pub const WZ_COUNT_MAX_N: u32 = 9;

/// Number of nonzero pairs `(a, b)` with `W_f(a, b) = 0`.
pub fn wz_count(f: &FnTable) -> Result<usize> {
    if f.n() > WZ_COUNT_MAX_N {
        return Err(Error::SizeGuard(format!(
            "wz_count limited to n <= {WZ_COUNT_MAX_N}"
        )));
    }
    Ok(full_spectrum(f)?
        .values()
        .iter()
        .skip(1)
        .filter(|&&v| v == 0)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gold(n: u32, i: u32) -> (FieldCtx, GoldParams, FnTable) {
        let ctx = FieldCtx::with_degree(n).unwrap();
        let gp = ctx.gold_params(i).unwrap();
        let f = FnTable::gold(ctx, &gp);
        (ctx, gp, f)
    }

    /// Brute-force Walsh sum written directly from the definition.
    fn walsh_naive(ctx: &FieldCtx, f: &FnTable, a: Elem, b: Elem) -> i32 {
        ctx.elements()
            .map(|x| {
                let t = ctx.trace(ctx.mul(a, x) + ctx.mul(b, f.eval(x)));
                if t == 0 {
                    1
                } else {
                    -1
                }
            })
            .sum()
    }

    #[test]
    fn table_validation() {
        let ctx = FieldCtx::with_degree(3).unwrap();
        assert!(FnTable::new(ctx, vec![Elem(1); 8]).is_err());
        assert!(FnTable::new(ctx, vec![Elem(0); 7]).is_err());
        assert!(FnTable::new(
            ctx,
            vec![
                Elem(0),
                Elem(9),
                Elem(0),
                Elem(0),
                Elem(0),
                Elem(0),
                Elem(0),
                Elem(0)
            ]
        )
        .is_err());
    }

    #[test]
    fn walsh_at_examples() {
        let (ctx, _, f) = gold(3, 1);
        assert_eq!(walsh_at(&f, Elem::ZERO, Elem::ZERO), 8);
        for a in ctx.nonzero() {
            assert_eq!(walsh_at(&f, a, Elem::ZERO), 0);
        }
        assert_eq!(walsh_at(&f, Elem::ONE, Elem::ONE), -4);
        for a in ctx.elements() {
            for b in ctx.elements() {
                assert_eq!(walsh_at(&f, a, b), walsh_naive(&ctx, &f, a, b));
            }
        }
    }

    #[test]
    fn spectrum_matches_pointwise_n3() {
        let (ctx, _, f) = gold(3, 1);
        let spec = full_spectrum(&f).unwrap();
        for a in ctx.elements() {
            for b in ctx.elements() {
                assert_eq!(spec.at(a, b), walsh_naive(&ctx, &f, a, b));
            }
        }
    }

    #[test]
    fn spectrum_parseval_and_balance_n5() {
        let ctx = FieldCtx::with_degree(5).unwrap();
        // a non-Gold function, x^7
        let f = FnTable::from_fn(ctx, |x| ctx.pow(x, 7)).unwrap();
        let spec = full_spectrum(&f).unwrap();
        assert_eq!(spec.energy(), 1 << 15);
        assert_eq!(spec.at(Elem::ZERO, Elem::ZERO), 32);
        for a in ctx.nonzero() {
            assert_eq!(spec.at(a, Elem::ZERO), 0);
        }
        for a in ctx.elements() {
            for b in ctx.elements() {
                assert_eq!(spec.at(a, b), walsh_naive(&ctx, &f, a, b));
            }
        }
    }

    #[test]
    fn gold_test_examples() {
        let (ctx, gp, _) = gold(5, 1);
        assert!(is_walsh_zero_gold(&ctx, &gp, Elem(3), Elem::ZERO));
        assert!(!is_walsh_zero_gold(&ctx, &gp, Elem::ZERO, Elem::ZERO));
        assert!(is_walsh_zero_gold(&ctx, &gp, Elem::ZERO, Elem(7)));
    }

    #[test]
    fn half_of_each_fibre_is_zero() {
        let (ctx, gp, _) = gold(7, 3);
        for b in ctx.nonzero() {
            let zeros = ctx
                .elements()
                .filter(|&a| is_walsh_zero_gold(&ctx, &gp, a, b))
                .count();
            assert_eq!(zeros, 64);
        }
    }

    #[test]
    fn trivial_spaces_verify() {
        let (_, gp, f) = gold(5, 2);
        let n = 5;
        let za0 = Subspace::span(2 * n, (0..n).map(|k| 1 << k));
        let z0b = Subspace::span(2 * n, (0..n).map(|k| 1 << (n + k)));
        for fast in [None, Some(&gp)] {
            assert!(verify_wz_space(&f, &za0, fast).unwrap());
            assert!(verify_wz_space(&f, &z0b, fast).unwrap());
        }
        assert!(verify_wz_space(&f, &Subspace::span(n, [1]), None).is_err());
        // too small
        assert!(!verify_wz_space(&f, &Subspace::span(2 * n, [1]), None).unwrap());
    }

    #[test]
    fn space_with_a_nonzero_point_fails() {
        let (ctx, gp, f) = gold(5, 1);
        let n = 5;
        // find (a, b) with Tr(a b^e) = 1 and b != 0
        let (a, b) = ctx
            .nonzero()
            .flat_map(|b| ctx.elements().map(move |a| (a, b)))
            .find(|&(a, b)| ctx.trace(ctx.mul(a, gp.invroot_gold(b))) == 1)
            .unwrap();
        let bad = pack_pair(n, a, b);
        let mut z = Subspace::span(2 * n, (0..n - 1).map(|k| 1 << (n + k)));
        z.insert(bad);
        if z.dim() == n {
            assert!(!verify_wz_space(&f, &z, Some(&gp)).unwrap());
            assert!(!verify_wz_space(&f, &z, None).unwrap());
        }
        let z = Subspace::span(2 * n, [bad, 1, 2, 4, 8]);
        assert_eq!(z.dim(), n);
        assert!(!verify_wz_space(&f, &z, Some(&gp)).unwrap());
        assert!(!verify_wz_space(&f, &z, None).unwrap());
    }

    #[test]
    fn wz_count_examples() {
        let (_, _, f5) = gold(5, 1);
        assert_eq!(wz_count(&f5).unwrap(), 527);
        let (ctx, gp, f3) = gold(3, 1);
        // Gold-test oracle count for n = 3
        let oracle = ctx
            .elements()
            .flat_map(|b| ctx.elements().map(move |a| (a, b)))
            .filter(|&(a, b)| is_walsh_zero_gold(&ctx, &gp, a, b))
            .count();
        assert_eq!(wz_count(&f3).unwrap(), oracle);
        assert_eq!(oracle, 7 + 7 * 4);
    }

    #[test]
    fn wz_count_linear_bijection() {
        // zeros of a linear bijection: every pair except the 2^n on the graph
        // of its adjoint; brute force through walsh_at
        let ctx = FieldCtx::with_degree(3).unwrap();
        let f = FnTable::from_fn(ctx, |x| ctx.mul(x, Elem(0b110))).unwrap();
        let brute = ctx
            .elements()
            .flat_map(|b| ctx.elements().map(move |a| (a, b)))
            .filter(|&(a, b)| (a, b) != (Elem::ZERO, Elem::ZERO) && walsh_at(&f, a, b) == 0)
            .count();
        assert_eq!(wz_count(&f).unwrap(), brute);
        assert_eq!(brute, 64 - 8);
        let big = FnTable::gold(
            FieldCtx::with_degree(11).unwrap(),
            &FieldCtx::with_degree(11).unwrap().gold_params(1).unwrap(),
        );
        assert!(matches!(wz_count(&big), Err(Error::SizeGuard(_))));
    }
}
