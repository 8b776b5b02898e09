//! Trivially intersecting pairs of WZ spaces of Gold functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::families::{build_comp_from, build_xi, tracefm_graph, trivial_0b, trivial_a0};
use crate::field::{Elem, FieldCtx, GoldParams};
use crate::linalg::Subspace;
use crate::walsh::verify_wz_space_gold;

/// How a pair was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum Provenance {
    /// `(Z_a0, Z_0b)`.
    Trivial,
    /// `(Z_0b, xi-space(xi, mu))`.
    P51 { xi: Elem, mu: Elem },
    /// `(xi-space(xi, mu), trace graph(nu))`, needs
    /// `Tr((xi + xi^(2^i)) (mu nu)^(-2^i)) = 0`.
    P52 { xi: Elem, mu: Elem, nu: Elem },
    /// `(trace graph(nu), comp(span{mu, xi mu}))`, needs
    /// `Tr((xi + xi^(2^i)) mu^(2^i/(2^i+1)) nu^(-2^i)) = 1`.
    P53 { xi: Elem, mu: Elem, nu: Elem },
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::Trivial => "trivial",
            Provenance::P51 { .. } => "p51",
            Provenance::P52 { .. } => "p52",
            Provenance::P53 { .. } => "p53",
        }
    }
}

/// Two WZ spaces `y`, `z` of one Gold function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiPair {
    pub y: Subspace,
    pub z: Subspace,
    pub provenance: Provenance,
    pub verified: bool,
}

impl TiPair {
    /// Builds the pair and runs [`TiPair::check`] on it.
    pub fn new(
        ctx: &FieldCtx,
        gp: &GoldParams,
        y: Subspace,
        z: Subspace,
        provenance: Provenance,
    ) -> Result<TiPair> {
        let mut pair = TiPair {
            y,
            z,
            provenance,
            verified: false,
        };
        pair.verified = pair.check(ctx, gp)?;
        Ok(pair)
    }

    /// Independent re-check: both spaces are WZ spaces and they meet only in 0.
    pub fn check(&self, ctx: &FieldCtx, gp: &GoldParams) -> Result<bool> {
        Ok(verify_wz_space_gold(ctx, gp, &self.y)?
            && verify_wz_space_gold(ctx, gp, &self.z)?
            && self.y.intersect(&self.z)?.dim() == 0)
    }

    /// The same pair with the two spaces exchanged.
    pub fn swapped(&self) -> TiPair {
        TiPair {
            y: self.z.clone(),
            z: self.y.clone(),
            ..self.clone()
        }
    }
}

fn require_f8(ctx: &FieldCtx) -> Result<Vec<Elem>> {
    if !ctx.n().is_multiple_of(3) {
        return Err(invalid(format!("construction needs 3 | n, got n = {}", ctx.n())));
    }
    ctx.subfield(3)
}

fn require_nonzero(name: &str, v: Elem) -> Result<()> {
    if v.is_zero() {
        return Err(invalid(format!("{name} must be nonzero")));
    }
    Ok(())
}

/// Elements of F_8 outside F_2, in word order. All six are primitive.
pub fn f8_primitive(ctx: &FieldCtx) -> Result<Vec<Elem>> {
    Ok(require_f8(ctx)?.into_iter().filter(|e| e.0 > 1).collect())
}

pub fn pair_trivial(ctx: &FieldCtx, gp: &GoldParams) -> Result<TiPair> {
    let n = ctx.n();
    TiPair::new(ctx, gp, trivial_a0(n), trivial_0b(n), Provenance::Trivial)
}

pub fn pair_p51(ctx: &FieldCtx, gp: &GoldParams, xi: Elem, mu: Elem) -> Result<TiPair> {
    let f8 = require_f8(ctx)?;
    if !f8.contains(&xi) || xi.0 <= 1 {
        return Err(invalid(format!("xi = {xi} must lie in GF(8) outside GF(2)")));
    }
    require_nonzero("mu", mu)?;
    let z = build_xi(ctx, gp, xi, mu)?;
    TiPair::new(ctx, gp, trivial_0b(ctx.n()), z, Provenance::P51 { xi, mu })
}

/// Side condition of the xi/trace-graph pair.
pub fn p52_condition(ctx: &FieldCtx, gp: &GoldParams, xi: Elem, mu: Elem, nu: Elem) -> Result<bool> {
    let c = xi + ctx.frobenius(xi, gp.i());
    let w = ctx.pow(ctx.inv(ctx.mul(mu, nu))?, gp.two_i());
    Ok(ctx.trace(ctx.mul(c, w)) == 0)
}

/// Side condition of the trace-graph/comp pair; `mu^(2^i/(2^i+1))` is
/// `mu^(2^i t)` with `t` the Gold root exponent.
pub fn p53_condition(ctx: &FieldCtx, gp: &GoldParams, xi: Elem, mu: Elem, nu: Elem) -> Result<bool> {
    let c = xi + ctx.frobenius(xi, gp.i());
    let mu_part = ctx.pow(mu, (gp.two_i() * gp.t()) % ctx.group_order());
    let nu_part = ctx.pow(ctx.inv(nu)?, gp.two_i());
    Ok(ctx.trace(ctx.mul(c, ctx.mul(mu_part, nu_part))) == 1)
}

fn p52_checked(ctx: &FieldCtx, xi: Elem, mu: Elem, nu: Elem) -> Result<()> {
    let f8 = require_f8(ctx)?;
    if !f8.contains(&xi) {
        return Err(invalid(format!("xi = {xi} must lie in GF(8)")));
    }
    require_nonzero("mu", mu)?;
    require_nonzero("nu", nu)
}

fn p53_checked(ctx: &FieldCtx, xi: Elem, mu: Elem, nu: Elem) -> Result<()> {
    p52_checked(ctx, xi, mu, nu)?;
    if xi.0 <= 1 {
        return Err(invalid(format!("xi = {xi} must be primitive in GF(8)")));
    }
    Ok(())
}

/// The xi-space / trace-graph pair, built regardless of its side
/// condition. `verified` reports what the checks found.
pub fn build_p52(ctx: &FieldCtx, gp: &GoldParams, xi: Elem, mu: Elem, nu: Elem) -> Result<TiPair> {
    p52_checked(ctx, xi, mu, nu)?;
    let y = build_xi(ctx, gp, xi, mu)?;
    let z = tracefm_graph(ctx, gp, nu)?;
    TiPair::new(ctx, gp, y, z, Provenance::P52 { xi, mu, nu })
}

/// The trace-graph / comp pair, built regardless of its side condition.
pub fn build_p53(ctx: &FieldCtx, gp: &GoldParams, xi: Elem, mu: Elem, nu: Elem) -> Result<TiPair> {
    p53_checked(ctx, xi, mu, nu)?;
    let y = tracefm_graph(ctx, gp, nu)?;
    let s = Subspace::span(ctx.n(), [mu.0, ctx.mul(xi, mu).0]);
    let z = build_comp_from(ctx, gp, &s)?;
    TiPair::new(ctx, gp, y, z, Provenance::P53 { xi, mu, nu })
}

fn require_verified(pair: TiPair) -> Result<TiPair> {
    if !pair.verified {
        return Err(Error::Integrity {
            stage: "pair-verification",
            detail: format!(
                "{:?} satisfies its side condition but failed verification",
                pair.provenance
            ),
        });
    }
    Ok(pair)
}

/// `None` when the side condition fails: the construction then makes no
/// claim, and no pair is built.
pub fn pair_p52(ctx: &FieldCtx, gp: &GoldParams, xi: Elem, mu: Elem, nu: Elem) -> Result<Option<TiPair>> {
    p52_checked(ctx, xi, mu, nu)?;
    if !p52_condition(ctx, gp, xi, mu, nu)? {
        return Ok(None);
    }
    build_p52(ctx, gp, xi, mu, nu)
        .and_then(require_verified)
        .map(Some)
}

pub fn pair_p53(ctx: &FieldCtx, gp: &GoldParams, xi: Elem, mu: Elem, nu: Elem) -> Result<Option<TiPair>> {
    p53_checked(ctx, xi, mu, nu)?;
    if !p53_condition(ctx, gp, xi, mu, nu)? {
        return Ok(None);
    }
    build_p53(ctx, gp, xi, mu, nu)
        .and_then(require_verified)
        .map(Some)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchFamily {
    P52,
    P53,
}

/// Outcome of a randomized parameter search.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub family: SearchFamily,
    pub draws: usize,
    /// Draws whose side condition held.
    pub hits: usize,
    pub pairs: Vec<TiPair>,
}

impl SearchReport {
    pub fn hit_rate(&self) -> f64 {
        if self.draws == 0 {
            0.0
        } else {
            self.hits as f64 / self.draws as f64
        }
    }
}

/// Parameters of draw `index`: `xi` uniform on F_8 \ F_2, `mu` and `nu`
/// uniform on the nonzero elements. Each draw has its own ChaCha stream
/// keyed by `(seed, index)`, so any subset of draws can be replayed.
pub fn draw_parameters(ctx: &FieldCtx, seed: u64, index: u64) -> Result<(Elem, Elem, Elem)> {
    let prim = f8_primitive(ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let xi = prim[rng.gen_range(0..prim.len())];
    let top = 1u32 << ctx.n();
    let mu = Elem(rng.gen_range(1..top));
    let nu = Elem(rng.gen_range(1..top));
    Ok((xi, mu, nu))
}

/// Draws `budget` parameter sets and keeps the pairs whose side condition
/// holds. Output order follows the draw index.
pub fn search_pairs(
    ctx: &FieldCtx,
    gp: &GoldParams,
    family: SearchFamily,
    budget: usize,
    seed: u64,
) -> Result<SearchReport> {
    require_f8(ctx)?;
    let outcomes: Vec<Option<TiPair>> = (0..budget as u64)
        .into_par_iter()
        .map(|index| {
            let (xi, mu, nu) = draw_parameters(ctx, seed, index)?;
            match family {
                SearchFamily::P52 => pair_p52(ctx, gp, xi, mu, nu),
                SearchFamily::P53 => pair_p53(ctx, gp, xi, mu, nu),
            }
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<TiPair> = outcomes.into_iter().flatten().collect();
    Ok(SearchReport {
        family,
        draws: budget,
        hits: pairs.len(),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_tracefm;

    fn setup(n: u32, i: u32) -> (FieldCtx, GoldParams) {
        let ctx = FieldCtx::with_degree(n).unwrap();
        let gp = ctx.gold_params(i).unwrap();
        (ctx, gp)
    }

    #[test]
    fn trivial_pair() {
        let (ctx, gp) = setup(9, 1);
        let p = pair_trivial(&ctx, &gp).unwrap();
        assert!(p.verified);
        assert_eq!(p.y.intersect(&p.z).unwrap().dim(), 0);
        assert_eq!((p.y.dim(), p.z.dim()), (9, 9));
    }

    #[test]
    fn p51_all_xi() {
        let (ctx, gp) = setup(9, 1);
        for xi in f8_primitive(&ctx).unwrap() {
            let p = pair_p51(&ctx, &gp, xi, Elem::ONE).unwrap();
            assert!(p.verified);
        }
        assert!(pair_p51(&ctx, &gp, Elem::ONE, Elem::ONE).is_err());
        assert!(pair_p51(&ctx, &gp, Elem::ZERO, Elem::ONE).is_err());
        let xi = f8_primitive(&ctx).unwrap()[0];
        assert!(pair_p51(&ctx, &gp, xi, Elem::ZERO).is_err());
    }

    #[test]
    fn p52_and_p53_reject_bad_parameters() {
        let (c5, g5) = setup(5, 1);
        assert!(pair_p52(&c5, &g5, Elem::ONE, Elem::ONE, Elem::ONE).is_err());
        let (ctx, gp) = setup(9, 1);
        let xi = f8_primitive(&ctx).unwrap()[0];
        assert!(pair_p52(&ctx, &gp, xi, Elem::ZERO, Elem::ONE).is_err());
        assert!(pair_p53(&ctx, &gp, Elem::ONE, Elem::ONE, Elem::ONE).is_err());
        assert!(pair_p53(&ctx, &gp, xi, Elem::ONE, Elem::ZERO).is_err());
    }

    #[test]
    fn p52_graph_matches_tracefm_space() {
        let (ctx, gp) = setup(9, 2);
        for nu in [Elem(1), Elem(0x1ab), Elem(0x44)] {
            assert_eq!(
                tracefm_graph(&ctx, &gp, nu).unwrap(),
                build_tracefm(&ctx, &gp, 9, nu).unwrap()
            );
        }
    }

    #[test]
    fn conditions_give_verified_pairs() {
        let (ctx, gp) = setup(9, 1);
        let mut seen = [0usize; 2];
        for index in 0..60 {
            let (xi, mu, nu) = draw_parameters(&ctx, 7, index).unwrap();
            if let Some(p) = pair_p52(&ctx, &gp, xi, mu, nu).unwrap() {
                assert!(p.check(&ctx, &gp).unwrap());
                seen[0] += 1;
            }
            if let Some(p) = pair_p53(&ctx, &gp, xi, mu, nu).unwrap() {
                assert!(p.check(&ctx, &gp).unwrap());
                let s = Subspace::span(9, [mu.0, ctx.mul(xi, mu).0]);
                assert_eq!(s.dim(), 2);
                assert!(crate::families::is_compatible(&ctx, &gp, &s).is_some());
                seen[1] += 1;
            }
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn p52_condition_by_direct_exponent() {
        let (ctx, gp) = setup(9, 4);
        let xi = f8_primitive(&ctx).unwrap()[1];
        for (mu, nu) in [(Elem(3), Elem(5)), (Elem(0x100), Elem(0x1f))] {
            // (mu nu)^(-2^i) evaluated as (mu nu)^(q - 2^i)
            let q = ctx.group_order();
            let w = ctx.pow(ctx.mul(mu, nu), q - gp.two_i());
            let c = xi + ctx.pow(xi, gp.two_i());
            let direct = ctx.trace(ctx.mul(c, w)) == 0;
            assert_eq!(p52_condition(&ctx, &gp, xi, mu, nu).unwrap(), direct);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let (ctx, gp) = setup(9, 1);
        let a = search_pairs(&ctx, &gp, SearchFamily::P52, 40, 1).unwrap();
        let b = search_pairs(&ctx, &gp, SearchFamily::P52, 40, 1).unwrap();
        assert_eq!(a.pairs, b.pairs);
        assert!(a.pairs.iter().all(|p| p.verified));
        let c = search_pairs(&ctx, &gp, SearchFamily::P52, 40, 2).unwrap();
        assert_ne!(a.pairs, c.pairs);
    }

    #[test]
    fn swapped_pair_stays_valid() {
        let (ctx, gp) = setup(9, 1);
        let p = pair_p51(&ctx, &gp, f8_primitive(&ctx).unwrap()[3], Elem(9)).unwrap();
        assert!(p.swapped().check(&ctx, &gp).unwrap());
    }
}
