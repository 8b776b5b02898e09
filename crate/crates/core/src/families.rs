//! i-compatible subspaces and the explicit families of WZ spaces of the
//! Gold function `x^(2^i+1)`.
//!
//! Every constructor returns a width-`2n` [`Subspace`] of packed pairs
//! `(a, b)` in canonical form, so spaces built by different routes can be
//! compared with `==`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::enumerate::subspaces_within;
use crate::error::{invalid, Error, Result};
use crate::field::{Elem, FieldCtx, GoldParams};
use crate::linalg::{linear_kernel, orthogonal_complement, pack_pair, solve_least, Subspace};

/// `Z_a0 = {(a, 0)}`.
pub fn trivial_a0(n: u32) -> Subspace {
    Subspace::span(2 * n, (0..n).map(|k| 1 << k))
}

/// `Z_0b = {(0, b)}`.
pub fn trivial_0b(n: u32) -> Subspace {
    Subspace::span(2 * n, (0..n).map(|k| 1 << (n + k)))
}

/// An additive subspace `S` whose image under `s -> s^(-1/(2^i+1))` is
/// again a subspace, together with that image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleSpace {
    space: Subspace,
    i: u32,
    inv_image: Subspace,
}

impl CompatibleSpace {
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn inv_image(&self) -> &Subspace {
        &self.inv_image
    }
}

/// Maps every element of `s` through the inverse Gold root and returns the
/// certificate when the image is additively closed.
pub fn is_compatible(ctx: &FieldCtx, gp: &GoldParams, s: &Subspace) -> Option<CompatibleSpace> {
    if s.width() != ctx.n() {
        return None;
    }
    // the image has 2^dim distinct elements, so it is a subspace exactly
    // when its span is no larger
    let image = Subspace::span(ctx.n(), s.elements().ok()?.map(|v| gp.invroot_gold(Elem(v)).0));
    (image.dim() == s.dim()).then(|| CompatibleSpace {
        space: s.clone(),
        i: gp.i(),
        inv_image: image,
    })
}

/// Upper bound on the number of candidate subspaces scanned by
/// [`enumerate_compatible`].
const COMPATIBLE_SCAN_LIMIT: u64 = 50_000_000;

fn gaussian_binomial(n: u32, k: u32) -> u64 {
    let (mut num, mut den) = (1u128, 1u128);
    for j in 0..k {
        num *= (1u128 << (n - j)) - 1;
        den *= (1u128 << (j + 1)) - 1;
    }
    (num / den) as u64
}

/// All `dim`-dimensional i-compatible subspaces of F_{2^n}, sorted.
///
/// Compatibility is invariant under scaling, and every nonzero subspace is
/// a multiple of one that contains 1. So the scan runs over subspaces
/// `span{1} + T` with `T` in the words whose bit 0 is clear, and the hits
/// are then spread over all multiples `mu S`.
pub fn enumerate_compatible(ctx: &FieldCtx, gp: &GoldParams, dim: u32) -> Result<Vec<Subspace>> {
    let n = ctx.n();
    if dim == 0 || dim > n {
        return Err(invalid(format!("dimension must be in [1, {n}], got {dim}")));
    }
    let candidates = gaussian_binomial(n - 1, dim - 1);
    if candidates > COMPATIBLE_SCAN_LIMIT {
        return Err(Error::SizeGuard(format!(
            "{candidates} candidate subspaces exceed the scan limit {COMPATIBLE_SCAN_LIMIT}"
        )));
    }
    let members: Vec<u32> = (1..1u32 << n).filter(|w| w & 1 == 0).collect();
    let mut seeds = Vec::new();
    subspaces_within(n, &members, dim - 1, |basis| {
        let s = Subspace::span(n, basis.iter().copied().chain([1]));
        if is_compatible(ctx, gp, &s).is_some() {
            seeds.push(s);
        }
    });
    let mut out = BTreeSet::new();
    for s in &seeds {
        for mu in ctx.nonzero() {
            out.insert(scale(ctx, s, mu));
        }
    }
    Ok(out.into_iter().collect())
}

/// `mu S` for a width-`n` space.
pub fn scale(ctx: &FieldCtx, s: &Subspace, mu: Elem) -> Subspace {
    Subspace::span(s.width(), s.basis().iter().map(|&v| ctx.mul(mu, Elem(v)).0))
}

/// `X x S` with `X` the trace-orthogonal complement of `S^(-1/(2^i+1))`.
pub fn build_comp(ctx: &FieldCtx, gp: &GoldParams, s: &CompatibleSpace) -> Result<Subspace> {
    if s.i != gp.i() || s.space.width() != ctx.n() {
        return Err(invalid("compatible space belongs to other parameters"));
    }
    let n = ctx.n();
    let inv: Vec<Elem> = s.inv_image.basis().iter().map(|&v| Elem(v)).collect();
    let x = orthogonal_complement(ctx, &inv);
    Ok(Subspace::span(
        2 * n,
        x.basis()
            .iter()
            .copied()
            .chain(s.space.basis().iter().map(|&b| b << n)),
    ))
}

/// [`build_comp`] from a plain subspace, rejecting incompatible input.
pub fn build_comp_from(ctx: &FieldCtx, gp: &GoldParams, s: &Subspace) -> Result<Subspace> {
    let cs =
        is_compatible(ctx, gp, s).ok_or_else(|| invalid(format!("{s:?} is not {}-compatible", gp.i())))?;
    build_comp(ctx, gp, &cs)
}

/// The graph of `x -> mu^-(2^i+1) (xi Tr(mu x) + Tr(xi^(2^i) mu x))`
/// for `xi` in the subfield F_8 (so `3 | n`) and `mu != 0`.
pub fn build_xi(ctx: &FieldCtx, gp: &GoldParams, xi: Elem, mu: Elem) -> Result<Subspace> {
    let n = ctx.n();
    if !n.is_multiple_of(3) {
        return Err(invalid(format!("the xi family needs 3 | n, got n = {n}")));
    }
    if !ctx.in_subfield(3, xi) {
        return Err(invalid(format!("{xi} is not in the subfield GF(8)")));
    }
    let scale = ctx
        .inv(ctx.pow(mu, gp.d()))
        .map_err(|_| invalid("mu must be nonzero"))?;
    let xi_q = ctx.frobenius(xi, gp.i());
    Ok(Subspace::span(
        2 * n,
        (0..n).map(|k| {
            let x = Elem(1 << k);
            let mx = ctx.mul(mu, x);
            let mut inner = Elem(ctx.trace(ctx.mul(xi_q, mx)));
            if ctx.trace(mx) == 1 {
                inner += xi;
            }
            pack_pair(n, x, ctx.mul(scale, inner))
        }),
    ))
}

/// Parameter-free part of the trace family for one `m`: pairs `(a_b, b)`
/// for a basis `b` of F_{2^m} with `Tr^n_m(a_b) = b + b^(1/2^i)`, plus
/// `(k, 0)` for a basis of `ker Tr^n_m`. Scaling by `mu` gives the space.
#[derive(Clone, Debug)]
pub struct TraceFmTemplate {
    m: u32,
    pairs: Vec<(Elem, Elem)>,
}

impl TraceFmTemplate {
    pub fn new(ctx: &FieldCtx, gp: &GoldParams, m: u32) -> Result<TraceFmTemplate> {
        let n = ctx.n();
        let sub = ctx.subfield(m)?;
        let images: Vec<u32> = (0..n)
            .map(|k| ctx.trace_rel(m, Elem(1 << k)).map(|e| e.0))
            .collect::<Result<_>>()?;
        let sub_basis = Subspace::span(n, sub.iter().map(|e| e.0));
        let mut pairs = Vec::with_capacity(n as usize);
        for &b in sub_basis.basis() {
            let b = Elem(b);
            let target = b + ctx.qroot(b, gp.i());
            // least preimage; the resulting space does not depend on the choice
            let a = solve_least(&images, target.0).ok_or_else(|| Error::Integrity {
                stage: "tracefm-preimage",
                detail: format!("{target} has no preimage under Tr^{n}_{m}"),
            })?;
            pairs.push((Elem(a), b));
        }
        for &k in linear_kernel(&images).basis() {
            pairs.push((Elem(k), Elem::ZERO));
        }
        Ok(TraceFmTemplate { m, pairs })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `{(mu a, mu^(2^i+1) b)}` over the template pairs.
    pub fn instantiate(&self, ctx: &FieldCtx, gp: &GoldParams, mu: Elem) -> Result<Subspace> {
        if mu.is_zero() {
            return Err(invalid("mu must be nonzero"));
        }
        let n = ctx.n();
        let mu_d = ctx.pow(mu, gp.d());
        Ok(Subspace::span(
            2 * n,
            self.pairs
                .iter()
                .map(|&(a, b)| pack_pair(n, ctx.mul(mu, a), ctx.mul(mu_d, b))),
        ))
    }
}

/// `{(mu a, mu^(2^i+1) b) : b in F_{2^m}, Tr^n_m(a) = b + b^(1/2^i)}`.
pub fn build_tracefm(ctx: &FieldCtx, gp: &GoldParams, m: u32, mu: Elem) -> Result<Subspace> {
    if mu.is_zero() {
        return Err(invalid("mu must be nonzero"));
    }
    TraceFmTemplate::new(ctx, gp, m)?.instantiate(ctx, gp, mu)
}

/// The `m = n` trace space written as a graph over `b`:
/// `{(nu (b + b^(1/2^i)), nu^(2^i+1) b) : b in F_{2^n}}`.
pub fn tracefm_graph(ctx: &FieldCtx, gp: &GoldParams, nu: Elem) -> Result<Subspace> {
    if nu.is_zero() {
        return Err(invalid("nu must be nonzero"));
    }
    let n = ctx.n();
    let nu_d = ctx.pow(nu, gp.d());
    Ok(Subspace::span(
        2 * n,
        (0..n).map(|k| {
            let b = Elem(1 << k);
            pack_pair(n, ctx.mul(nu, b + ctx.qroot(b, gp.i())), ctx.mul(nu_d, b))
        }),
    ))
}

/// Which construction produced a WZ space, with enough data to rebuild it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WzFamily {
    #[serde(rename = "trivial_a0")]
    TrivialA0,
    #[serde(rename = "trivial_0b")]
    Trivial0B,
    Comp {
        s: Subspace,
    },
    TraceFm {
        m: u32,
        mu: Elem,
    },
    Xi {
        xi: Elem,
        mu: Elem,
    },
}

impl WzFamily {
    pub fn regenerate(&self, ctx: &FieldCtx, gp: &GoldParams) -> Result<Subspace> {
        match self {
            WzFamily::TrivialA0 => Ok(trivial_a0(ctx.n())),
            WzFamily::Trivial0B => Ok(trivial_0b(ctx.n())),
            WzFamily::Comp { s } => build_comp_from(ctx, gp, s),
            WzFamily::TraceFm { m, mu } => build_tracefm(ctx, gp, *m, *mu),
            WzFamily::Xi { xi, mu } => build_xi(ctx, gp, *xi, *mu),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WzFamily::TrivialA0 => "trivial_a0",
            WzFamily::Trivial0B => "trivial_0b",
            WzFamily::Comp { .. } => "comp",
            WzFamily::TraceFm { .. } => "tracefm",
            WzFamily::Xi { .. } => "xi",
        }
    }
}

/// Projections of `z` onto `{a : (a,0) in z}` and `{b : (0,b) in z}`.
fn coordinate_parts(n: u32, z: &Subspace) -> Result<(Subspace, Subspace)> {
    let x = z.intersect(&trivial_a0(n))?;
    let s = z.intersect(&trivial_0b(n))?;
    Ok((
        Subspace::span(n, x.basis().iter().copied()),
        Subspace::span(n, s.basis().iter().map(|&w| w >> n)),
    ))
}

/// Tags of every family that reproduces `z` bit-exactly, in the fixed
/// search order trivial, comp, tracefm, xi. Overlaps show up as several
/// tags.
pub fn classify_all(ctx: &FieldCtx, gp: &GoldParams, z: &Subspace) -> Result<Vec<WzFamily>> {
    let mut tags = Vec::new();
    classify_into(ctx, gp, z, false, &mut tags)?;
    Ok(tags)
}

/// First matching family tag, or `None` when no construction produces `z`.
pub fn classify_space(ctx: &FieldCtx, gp: &GoldParams, z: &Subspace) -> Result<Option<WzFamily>> {
    let mut tags = Vec::new();
    classify_into(ctx, gp, z, true, &mut tags)?;
    Ok(tags.into_iter().next())
}

fn classify_into(
    ctx: &FieldCtx,
    gp: &GoldParams,
    z: &Subspace,
    first_only: bool,
    tags: &mut Vec<WzFamily>,
) -> Result<()> {
    let n = ctx.n();
    if z.width() != 2 * n {
        return Err(Error::WidthMismatch(z.width(), 2 * n));
    }
    let done = |tags: &Vec<WzFamily>| first_only && !tags.is_empty();

    if *z == trivial_a0(n) {
        tags.push(WzFamily::TrivialA0);
    }
    if *z == trivial_0b(n) {
        tags.push(WzFamily::Trivial0B);
    }
    if done(tags) {
        return Ok(());
    }

    // a comp space is the product of its two coordinate parts, and S is the
    // second part, so the only candidate is read off z directly
    let (x, s) = coordinate_parts(n, z)?;
    if x.dim() + s.dim() == n {
        if let Some(cs) = is_compatible(ctx, gp, &s) {
            if build_comp(ctx, gp, &cs)? == *z {
                tags.push(WzFamily::Comp { s });
            }
        }
    }
    if done(tags) {
        return Ok(());
    }

    for m in (1..=n).filter(|m| n.is_multiple_of(*m)) {
        let template = TraceFmTemplate::new(ctx, gp, m)?;
        for mu in ctx.nonzero() {
            if template.instantiate(ctx, gp, mu)? == *z {
                tags.push(WzFamily::TraceFm { m, mu });
                if done(tags) {
                    return Ok(());
                }
            }
        }
    }

    if n.is_multiple_of(3) {
        for xi in ctx.subfield(3)? {
            for mu in ctx.nonzero() {
                if build_xi(ctx, gp, xi, mu)? == *z {
                    tags.push(WzFamily::Xi { xi, mu });
                    if done(tags) {
                        return Ok(());
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walsh::verify_wz_space_gold;

    fn setup(n: u32, i: u32) -> (FieldCtx, GoldParams) {
        let ctx = FieldCtx::with_degree(n).unwrap();
        let gp = ctx.gold_params(i).unwrap();
        (ctx, gp)
    }

    #[test]
    fn trivial_compatible_spaces() {
        let (ctx, gp) = setup(7, 2);
        assert!(is_compatible(&ctx, &gp, &Subspace::zero(7)).is_some());
        assert!(is_compatible(&ctx, &gp, &Subspace::span(7, [1])).is_some());
        assert!(is_compatible(&ctx, &gp, &Subspace::full(7)).is_some());
    }

    #[test]
    fn f8_subspaces_are_compatible() {
        let (ctx, gp) = setup(9, 1);
        let f8: Vec<u32> = ctx.subfield(3).unwrap().iter().map(|e| e.0).collect();
        let mut count = 0;
        crate::enumerate::subspaces_within(9, &f8[1..], 2, |basis| {
            let s = Subspace::span(9, basis.iter().copied());
            assert!(is_compatible(&ctx, &gp, &s).is_some());
            count += 1;
        });
        assert_eq!(count, 7);
        assert!(is_compatible(&ctx, &gp, &Subspace::span(9, f8.iter().copied())).is_some());
    }

    #[test]
    fn scaling_preserves_compatibility() {
        let (ctx, gp) = setup(9, 4);
        let xi = ctx.subfield(3).unwrap()[2];
        let s = Subspace::span(9, [1, xi.0]);
        assert!(is_compatible(&ctx, &gp, &s).is_some());
        for mu in ctx.nonzero().step_by(17) {
            assert!(is_compatible(&ctx, &gp, &scale(&ctx, &s, mu)).is_some());
        }
    }

    #[test]
    fn comp_extremes_are_trivial() {
        let (ctx, gp) = setup(5, 1);
        assert_eq!(
            build_comp_from(&ctx, &gp, &Subspace::zero(5)).unwrap(),
            trivial_a0(5)
        );
        assert_eq!(
            build_comp_from(&ctx, &gp, &Subspace::full(5)).unwrap(),
            trivial_0b(5)
        );
        let z = build_comp_from(&ctx, &gp, &Subspace::span(5, [0b10110])).unwrap();
        assert_eq!(z.dim(), 5);
        assert!(verify_wz_space_gold(&ctx, &gp, &z).unwrap());
        // 2-dim spaces of GF(32) are never compatible
        assert!(build_comp_from(&ctx, &gp, &Subspace::span(5, [1, 2])).is_err());
    }

    #[test]
    fn xi_family() {
        let (ctx, gp) = setup(9, 1);
        for xi in [Elem::ZERO, Elem::ONE] {
            for mu in [Elem(1), Elem(77)] {
                assert_eq!(build_xi(&ctx, &gp, xi, mu).unwrap(), trivial_a0(9));
            }
        }
        let f8 = ctx.subfield(3).unwrap();
        let primitive = f8[2];
        let z = build_xi(&ctx, &gp, primitive, Elem::ONE).unwrap();
        assert_eq!(z.dim(), 9);
        assert!(verify_wz_space_gold(&ctx, &gp, &z).unwrap());
        let outside = ctx.nonzero().find(|&e| !ctx.in_subfield(3, e)).unwrap();
        assert!(build_xi(&ctx, &gp, outside, Elem::ONE).is_err());
        assert!(build_xi(&ctx, &gp, primitive, Elem::ZERO).is_err());
        let (c5, g5) = setup(5, 1);
        assert!(build_xi(&c5, &g5, Elem::ONE, Elem::ONE).is_err());
    }

    #[test]
    fn tracefm_family() {
        let (ctx, gp) = setup(5, 1);
        let z = build_tracefm(&ctx, &gp, 5, Elem::ONE).unwrap();
        assert!(z.contains(pack_pair(5, Elem::ZERO, Elem::ONE)));
        for mu in ctx.nonzero() {
            let z = build_tracefm(&ctx, &gp, 5, mu).unwrap();
            assert!(verify_wz_space_gold(&ctx, &gp, &z).unwrap());
            assert_eq!(z, tracefm_graph(&ctx, &gp, mu).unwrap());
        }
        // m = 1: {(mu a, mu^3 b) : Tr(a) = 0, b in F2}
        let mu = Elem(0b1101);
        let z = build_tracefm(&ctx, &gp, 1, mu).unwrap();
        let mu3 = ctx.pow(mu, 3);
        let expect = Subspace::span(
            10,
            ctx.elements()
                .filter(|&a| ctx.trace(a) == 0)
                .map(|a| pack_pair(5, ctx.mul(mu, a), Elem::ZERO))
                .chain([pack_pair(5, Elem::ZERO, mu3)]),
        );
        assert_eq!(z, expect);
        assert!(build_tracefm(&ctx, &gp, 2, mu).is_err());
        assert!(build_tracefm(&ctx, &gp, 5, Elem::ZERO).is_err());
    }

    #[test]
    fn compatible_counts_small() {
        let (ctx, gp) = setup(5, 1);
        assert!(enumerate_compatible(&ctx, &gp, 2).unwrap().is_empty());
        assert_eq!(enumerate_compatible(&ctx, &gp, 1).unwrap().len(), 31);
        assert_eq!(enumerate_compatible(&ctx, &gp, 5).unwrap().len(), 1);
        assert!(enumerate_compatible(&ctx, &gp, 0).is_err());
    }

    #[test]
    fn classify_roundtrip() {
        let (ctx, gp) = setup(9, 2);
        let xi = ctx.subfield(3).unwrap()[3];
        let cases = [
            WzFamily::TrivialA0,
            WzFamily::Trivial0B,
            WzFamily::Comp {
                s: Subspace::span(9, [Elem(0x51).0]),
            },
            WzFamily::TraceFm { m: 3, mu: Elem(0x3) },
            WzFamily::Xi { xi, mu: Elem(0x1) },
        ];
        for tag in cases {
            let z = tag.regenerate(&ctx, &gp).unwrap();
            let found = classify_space(&ctx, &gp, &z).unwrap().unwrap();
            assert_eq!(found.regenerate(&ctx, &gp).unwrap(), z);
        }
    }
}
