//! Property checks shared by the property tests and the acceptance run.
//! Each runs `cases` random cases and reports the first counterexample.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use wzspace::artifact::{ArtifactFile, Payload, WzSpaceArtifact};
use wzspace::field::{Elem, FieldCtx};
use wzspace::linalg::{orthogonal_complement, Subspace};
use wzspace::walsh::{full_spectrum, FnTable};

pub const CASES: u32 = 1000;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn finish(r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn odd_degree() -> impl Strategy<Value = u32> {
    prop_oneof![Just(3u32), Just(5), Just(7), Just(9), Just(11), Just(13)]
}

/// Sum of squared Walsh values over all `(a, b)` is `2^(3n)` for any `f`.
pub fn parseval(cases: u32) -> Result<(), String> {
    let ctx = FieldCtx::with_degree(5).unwrap();
    let strat = proptest::collection::vec(0u32..32, 31);
    finish(runner(cases).run(&strat, |values| {
        let table: Vec<Elem> = std::iter::once(Elem::ZERO)
            .chain(values.into_iter().map(Elem))
            .collect();
        let f = FnTable::new(ctx, table).unwrap();
        let energy = full_spectrum(&f).unwrap().energy();
        prop_assert_eq!(energy, 1u64 << 15);
        Ok(())
    }))
}

fn pivot(w: u32) -> u32 {
    31 - w.leading_zeros()
}

/// The reduced basis is canonical: independent of the spanning list, in
/// echelon form, and a basis of the span.
pub fn rref_canonical(cases: u32) -> Result<(), String> {
    let strat = (1u32..=20).prop_flat_map(|w| {
        (
            Just(w),
            proptest::collection::vec(0..1u32 << w, 0..10),
            proptest::collection::vec(any::<u64>(), 0..6),
        )
    });
    finish(runner(cases).run(&strat, |(width, vectors, mixes)| {
        let s = Subspace::span(width, vectors.iter().copied());
        // any list with the same span reduces to the same basis
        let mut other: Vec<u32> = vectors.iter().rev().copied().collect();
        for m in &mixes {
            let combo = vectors
                .iter()
                .enumerate()
                .filter(|(k, _)| m >> (k % 64) & 1 != 0)
                .fold(0, |a, (_, &v)| a ^ v);
            other.push(combo);
        }
        prop_assert_eq!(&Subspace::span(width, other), &s);
        let b = s.basis();
        for k in 0..b.len() {
            if k + 1 < b.len() {
                prop_assert!(pivot(b[k]) > pivot(b[k + 1]));
            }
            for (l, &r) in b.iter().enumerate() {
                if l != k {
                    prop_assert_eq!(r >> pivot(b[k]) & 1, 0);
                }
            }
        }
        prop_assert_eq!(&Subspace::span(width, b.iter().copied()), &s);
        for &v in &vectors {
            prop_assert!(s.contains(v));
        }
        prop_assert_eq!(s.elements().unwrap().count(), 1usize << s.dim());
        Ok(())
    }))
}

/// `dim(U + V) + dim(U n V) = dim U + dim V`, with the intersection inside both.
pub fn intersection(cases: u32) -> Result<(), String> {
    let strat = (
        proptest::collection::vec(0u32..1 << 12, 0..8),
        proptest::collection::vec(0u32..1 << 12, 0..8),
    );
    finish(runner(cases).run(&strat, |(u, v)| {
        let u = Subspace::span(12, u);
        let v = Subspace::span(12, v);
        let meet = u.intersect(&v).unwrap();
        let join = u.join(&v).unwrap();
        prop_assert_eq!(meet.dim() + join.dim(), u.dim() + v.dim());
        prop_assert!(meet.is_subspace_of(&u) && meet.is_subspace_of(&v));
        // brute-force membership
        for w in u.elements().unwrap() {
            prop_assert_eq!(meet.contains(w), v.contains(w));
        }
        Ok(())
    }))
}

/// The trace-orthogonal complement is an involution with complementary dimension.
pub fn orthogonal_involution(cases: u32) -> Result<(), String> {
    let strat = odd_degree().prop_flat_map(|n| (Just(n), proptest::collection::vec(0u32..1 << n, 0..6)));
    finish(runner(cases).run(&strat, |(n, words)| {
        let ctx = FieldCtx::with_degree(n).unwrap();
        let s = Subspace::span(n, words);
        let elems = |t: &Subspace| t.basis().iter().map(|&w| Elem(w)).collect::<Vec<_>>();
        let perp = orthogonal_complement(&ctx, &elems(&s));
        prop_assert_eq!(perp.dim() + s.dim(), n);
        prop_assert_eq!(orthogonal_complement(&ctx, &elems(&perp)), s);
        Ok(())
    }))
}

/// `Tr(a_i b_j) = [i == j]` for the computed dual of a random basis.
pub fn dual_basis(cases: u32) -> Result<(), String> {
    let strat = odd_degree().prop_flat_map(|n| (Just(n), proptest::collection::vec(1u32..1 << n, 64)));
    finish(runner(cases).run(&strat, |(n, pool)| {
        let ctx = FieldCtx::with_degree(n).unwrap();
        let mut span = Subspace::zero(n);
        let basis: Vec<Elem> = pool.into_iter().filter(|&w| span.insert(w)).map(Elem).collect();
        if basis.len() < n as usize {
            return Err(TestCaseError::reject("pool did not span the field"));
        }
        let dual = ctx.dual_basis(&basis).unwrap();
        for (i, &a) in basis.iter().enumerate() {
            for (j, &b) in dual.iter().enumerate() {
                prop_assert_eq!(ctx.trace(ctx.mul(a, b)), (i == j) as u32);
            }
        }
        Ok(())
    }))
}

/// Root identities: `qroot(x)^(2^i) = x`, `(x^(1/d))^d = x`, and
/// `b^(-1/d)^d * b = 1`.
pub fn root_identities(cases: u32) -> Result<(), String> {
    let strat = odd_degree().prop_flat_map(|n| (Just(n), 1..n, 0u32..1 << n));
    finish(runner(cases).run(&strat, |(n, i, x)| {
        let ctx = FieldCtx::with_degree(n).unwrap();
        let x = Elem(x);
        prop_assert_eq!(ctx.pow(ctx.qroot(x, i), 1 << i), x);
        if let Ok(gp) = ctx.gold_params(i) {
            let q = ctx.group_order();
            prop_assert_eq!(gp.d() * gp.t() % q, 1);
            prop_assert_eq!(gp.gold(&ctx, gp.root_gold(&ctx, x)), x);
            prop_assert_eq!(gp.gold(&ctx, x), ctx.pow(x, gp.d()));
            if !x.is_zero() {
                let r = gp.invroot_gold(x);
                prop_assert_eq!(ctx.mul(ctx.pow(r, gp.d()), x), Elem::ONE);
            }
        }
        Ok(())
    }))
}

/// WZ-space files re-parse to the same object, whatever spanning list was stored.
pub fn artifact_round_trip(cases: u32) -> Result<(), String> {
    let strat = proptest::collection::vec(0u32..1 << 10, 0..8);
    finish(runner(cases).run(&strat, |words| {
        let ctx = FieldCtx::with_degree(5).unwrap();
        let space = Subspace::span(10, words);
        let file = ArtifactFile::new(
            &ctx,
            Payload::WzSpace(WzSpaceArtifact {
                gold_i: 1,
                space,
                family: None,
            }),
        );
        let back = ArtifactFile::from_json(&file.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, file);
        Ok(())
    }))
}

pub type Suite = (&'static str, fn(u32) -> Result<(), String>);

pub const SUITES: [Suite; 7] = [
    ("parseval", parseval),
    ("rref canonicity", rref_canonical),
    ("intersection", intersection),
    ("orthogonal complement", orthogonal_involution),
    ("dual basis", dual_basis),
    ("root identities", root_identities),
    ("artifact round trip", artifact_round_trip),
];
