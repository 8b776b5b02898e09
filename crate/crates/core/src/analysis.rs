//! Differential, bijectivity and degree checks on lookup tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::field::{Elem, FieldCtx};
use crate::walsh::FnTable;

/// Summary of the properties checked on a function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub is_apn: bool,
    pub is_permutation: bool,
    pub algebraic_degree: u32,
    /// `multiplicity -> number of (a, b)`, over `a != 0` and all `b`.
    pub differential_spectrum: BTreeMap<u32, u64>,
}

impl AnalysisReport {
    pub fn of(f: &FnTable) -> AnalysisReport {
        let differential_spectrum = differential_spectrum(f);
        AnalysisReport {
            is_apn: differential_spectrum.keys().all(|&m| m <= 2),
            is_permutation: is_permutation(f),
            algebraic_degree: algebraic_degree(f),
            differential_spectrum,
        }
    }
}

/// Counts, for every `a != 0` and `b`, the solutions of
/// `f(x + a) + f(x) = b`, and tallies those counts.
pub fn differential_spectrum(f: &FnTable) -> BTreeMap<u32, u64> {
    let size = f.ctx().size();
    let mut counts = vec![0u32; size];
    let mut spectrum = BTreeMap::new();
    for a in 1..size {
        counts.iter_mut().for_each(|c| *c = 0);
        for x in 0..size {
            let d = f.table()[x ^ a].0 ^ f.table()[x].0;
            counts[d as usize] += 1;
        }
        for &c in &counts {
            *spectrum.entry(c).or_insert(0) += 1;
        }
    }
    spectrum
}

/// Every derivative equation has at most two solutions.
pub fn is_apn(f: &FnTable) -> bool {
    let size = f.ctx().size();
    let mut counts = vec![0u8; size];
    for a in 1..size {
        counts.iter_mut().for_each(|c| *c = 0);
        for x in 0..size {
            let d = (f.table()[x ^ a].0 ^ f.table()[x].0) as usize;
            counts[d] += 1;
            if counts[d] > 2 {
                return false;
            }
        }
    }
    true
}

pub fn is_permutation(f: &FnTable) -> bool {
    let mut seen = vec![false; f.ctx().size()];
    f.table()
        .iter()
        .all(|v| !std::mem::replace(&mut seen[v.0 as usize], true))
}

/// Maximum degree of the algebraic normal forms of the coordinate
/// functions. All coordinates are transformed at once: word `k` of the
/// Möbius transform carries the ANF coefficient of monomial `k` for every
/// output bit.
pub fn algebraic_degree(f: &FnTable) -> u32 {
    let mut anf: Vec<u32> = f.table().iter().map(|v| v.0).collect();
    let size = anf.len();
    let mut h = 1;
    while h < size {
        for x in 0..size {
            if x & h != 0 {
                anf[x] ^= anf[x ^ h];
            }
        }
        h <<= 1;
    }
    anf.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, _)| k.count_ones())
        .max()
        .unwrap_or(0)
}

/// `g` with `g(f(x)) = x`.
pub fn compositional_inverse(f: &FnTable) -> Result<FnTable> {
    if !is_permutation(f) {
        return Err(invalid("function is not a permutation"));
    }
    let mut inv = vec![Elem::ZERO; f.ctx().size()];
    for (x, y) in f.table().iter().enumerate() {
        inv[y.0 as usize] = Elem(x as u32);
    }
    FnTable::new(*f.ctx(), inv)
}

/// `x -> x^k` with `0 -> 0`.
pub fn monomial_table(ctx: &FieldCtx, k: u64) -> Result<FnTable> {
    if k == 0 {
        return Err(invalid("monomial exponent must be at least 1"));
    }
    FnTable::from_fn(*ctx, |x| ctx.pow(x, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apn_examples() {
        let ctx = FieldCtx::with_degree(5).unwrap();
        assert!(is_apn(&monomial_table(&ctx, 3).unwrap()));
        assert!(!is_apn(&monomial_table(&ctx, 1).unwrap()));
        for n in [3, 5, 7, 9] {
            let ctx = FieldCtx::with_degree(n).unwrap();
            for i in (1..n).filter(|&i| crate::field::gcd(i as u64, n as u64) == 1) {
                let f = monomial_table(&ctx, (1 << i) + 1).unwrap();
                assert!(is_apn(&f), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn report_of_gold_n5() {
        let ctx = FieldCtx::with_degree(5).unwrap();
        let r = AnalysisReport::of(&monomial_table(&ctx, 3).unwrap());
        assert!(r.is_apn && r.is_permutation);
        assert_eq!(r.algebraic_degree, 2);
        // APN: each a != 0 gives 16 values hit twice and 16 missed
        assert_eq!(r.differential_spectrum.get(&2), Some(&(31 * 16)));
        assert_eq!(r.differential_spectrum.get(&0), Some(&(31 * 16)));
        assert_eq!(r.differential_spectrum.len(), 2);
    }

    #[test]
    fn permutation_examples() {
        let ctx = FieldCtx::with_degree(7).unwrap();
        assert!(is_permutation(&monomial_table(&ctx, 3).unwrap()));
        assert!(!is_permutation(
            &FnTable::new(ctx, vec![Elem::ZERO; 128]).unwrap()
        ));
        assert!(is_permutation(
            &monomial_table(&FieldCtx::with_degree(5).unwrap(), 3).unwrap()
        ));
    }

    #[test]
    fn degree_examples() {
        let ctx = FieldCtx::with_degree(9).unwrap();
        assert_eq!(algebraic_degree(&monomial_table(&ctx, 3).unwrap()), 2);
        let t = ctx.gold_params(1).unwrap().t();
        assert_eq!(algebraic_degree(&monomial_table(&ctx, t).unwrap()), 5);
        assert_eq!(algebraic_degree(&monomial_table(&ctx, 1).unwrap()), 1);
        assert_eq!(
            algebraic_degree(&FnTable::new(ctx, vec![Elem::ZERO; 512]).unwrap()),
            0
        );
    }

    #[test]
    fn monomial_degree_is_binary_weight() {
        let ctx = FieldCtx::with_degree(5).unwrap();
        for k in 1..31u64 {
            let f = monomial_table(&ctx, k).unwrap();
            assert_eq!(algebraic_degree(&f), k.count_ones(), "k={k}");
        }
    }

    #[test]
    fn inverse_examples() {
        let ctx = FieldCtx::with_degree(5).unwrap();
        let id = monomial_table(&ctx, 1).unwrap();
        assert_eq!(compositional_inverse(&id).unwrap(), id);
        let cube = monomial_table(&ctx, 3).unwrap();
        let inv = compositional_inverse(&cube).unwrap();
        assert_eq!(inv, monomial_table(&ctx, 21).unwrap());
        for x in ctx.elements() {
            assert_eq!(inv.eval(cube.eval(x)), x);
        }
        assert!(compositional_inverse(&FnTable::new(ctx, vec![Elem::ZERO; 32]).unwrap()).is_err());
        assert!(monomial_table(&ctx, 0).is_err());
    }
}
