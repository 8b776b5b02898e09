//! Self-checking experiments, each ending in a JSON report with a verdict.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use crate::analysis::{algebraic_degree, monomial_table};
use crate::ccz::certify_ccz;
use crate::enumerate::enumerate_wz_spaces;
use crate::error::{invalid, Error, Result};
use crate::families::{classify_space, enumerate_compatible, WzFamily};
use crate::field::{gcd, Elem, FieldCtx};
use crate::pairs::{f8_primitive, pair_p51, pair_trivial, search_pairs, SearchFamily, TiPair};
use crate::walsh::{is_walsh_zero_gold, walsh_at, FnTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// Enumerate and classify the WZ spaces of `x^3` on F_32.
    Lemma12,
    /// Degrees of the permutations obtained from pairs on F_512.
    Degrees9,
    /// Numbers of compatible subspaces.
    CompatCounts,
    /// Frequency of the pair side conditions.
    Probability,
    /// Gold zero test against direct Walsh sums.
    WalshOracle,
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::Lemma12,
        Target::Degrees9,
        Target::CompatCounts,
        Target::Probability,
        Target::WalshOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Lemma12 => "lemma12",
            Target::Degrees9 => "degrees9",
            Target::CompatCounts => "compat-counts",
            Target::Probability => "probability",
            Target::WalshOracle => "walsh-oracle",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Target> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| invalid(format!("unknown target {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproReport {
    pub target: String,
    pub pass: bool,
    pub discrepancies: Vec<String>,
    pub details: serde_json::Value,
}

impl ReproReport {
    fn new(target: Target, discrepancies: Vec<String>, details: serde_json::Value) -> ReproReport {
        ReproReport {
            target: target.name().into(),
            pass: discrepancies.is_empty(),
            discrepancies,
            details,
        }
    }
}

fn expect<T: PartialEq + fmt::Debug>(out: &mut Vec<String>, what: &str, got: T, want: T) {
    if got != want {
        out.push(format!("{what}: got {got:?}, expected {want:?}"));
    }
}

/// Exponents `i` in `1..n` coprime to `n`.
pub fn gold_exponents(n: u32) -> impl Iterator<Item = u32> {
    (1..n).filter(move |&i| gcd(i as u64, n as u64) == 1)
}

/// Counts of the WZ spaces of a Gold function by family, grouping the
/// trivial spaces with the family they are limits of: `Z_a0` is the comp
/// space over `S = {0}` and `Z_0b` the trace space at `mu = infinity`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SpaceCensus {
    pub total: usize,
    pub tracefm: usize,
    pub comp: usize,
    pub xi: usize,
    pub unclassified: usize,
    pub by_tag: BTreeMap<String, usize>,
}

pub fn census(n: u32, i: u32) -> Result<SpaceCensus> {
    let ctx = FieldCtx::with_degree(n)?;
    let gp = ctx.gold_params(i)?;
    let f = FnTable::gold(ctx, &gp);
    let spaces = enumerate_wz_spaces(&f, Some(&gp))?;
    let mut c = SpaceCensus {
        total: spaces.len(),
        ..SpaceCensus::default()
    };
    for z in &spaces {
        let tag = classify_space(&ctx, &gp, z)?;
        let name = tag.as_ref().map_or("unclassified", |t| t.name());
        *c.by_tag.entry(name.into()).or_insert(0) += 1;
        match tag {
            Some(WzFamily::TraceFm { .. }) | Some(WzFamily::Trivial0B) => c.tracefm += 1,
            Some(WzFamily::Comp { .. }) | Some(WzFamily::TrivialA0) => c.comp += 1,
            Some(WzFamily::Xi { .. }) => c.xi += 1,
            None => c.unclassified += 1,
        }
    }
    Ok(c)
}

fn lemma12() -> Result<ReproReport> {
    let c = census(5, 1)?;
    let mut out = Vec::new();
    expect(&mut out, "total", c.total, 64);
    expect(&mut out, "tracefm", c.tracefm, 32);
    expect(&mut out, "comp", c.comp, 32);
    expect(&mut out, "unclassified", c.unclassified, 0);
    Ok(ReproReport::new(
        Target::Lemma12,
        out,
        serde_json::to_value(&c).expect("census serializes"),
    ))
}

/// Pairs used for the degree experiment on F_512 with `i = 1`: the trivial
/// pair, the six `P51` pairs with `mu = 1`, and the first `samples` hits of
/// seeded `P52` and `P53` searches.
pub fn degree_pairs(samples: usize, seed: u64) -> Result<Vec<TiPair>> {
    let ctx = FieldCtx::with_degree(9)?;
    let gp = ctx.gold_params(1)?;
    let mut pairs = vec![pair_trivial(&ctx, &gp)?];
    for xi in f8_primitive(&ctx)? {
        pairs.push(pair_p51(&ctx, &gp, xi, Elem::ONE)?);
    }
    for family in [SearchFamily::P52, SearchFamily::P53] {
        let mut budget = 2 * samples + 64;
        loop {
            let found = search_pairs(&ctx, &gp, family, budget, seed)?;
            if found.pairs.len() >= samples {
                pairs.extend(found.pairs.into_iter().take(samples));
                break;
            }
            budget *= 2;
        }
    }
    Ok(pairs)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DegreeSurvey {
    pub pairs: usize,
    pub degrees: BTreeMap<u32, usize>,
    pub by_construction: BTreeMap<String, BTreeSet<u32>>,
    pub failures: Vec<String>,
}

pub fn degree_survey(samples: usize, seed: u64) -> Result<DegreeSurvey> {
    let ctx = FieldCtx::with_degree(9)?;
    let gp = ctx.gold_params(1)?;
    let f = FnTable::gold(ctx, &gp);
    let mut s = DegreeSurvey::default();
    for pair in degree_pairs(samples, seed)? {
        s.pairs += 1;
        match certify_ccz(&f, &pair) {
            Ok(cert) => {
                let r = &cert.g_report;
                if !(r.is_apn && r.is_permutation && cert.codes_equal) {
                    s.failures.push(format!(
                        "{:?}: apn={} perm={}",
                        pair.provenance, r.is_apn, r.is_permutation
                    ));
                }
                if pair.provenance == crate::pairs::Provenance::Trivial && cert.g != f {
                    s.failures.push("trivial pair did not give back f".into());
                }
                *s.degrees.entry(r.algebraic_degree).or_insert(0) += 1;
                s.by_construction
                    .entry(pair.provenance.name().into())
                    .or_default()
                    .insert(r.algebraic_degree);
            }
            Err(e) => s.failures.push(format!("{:?}: {e}", pair.provenance)),
        }
    }
    Ok(s)
}

fn degrees9(seed: u64) -> Result<ReproReport> {
    let survey = degree_survey(200, seed)?;
    let ctx = FieldCtx::with_degree(9)?;
    let gp = ctx.gold_params(1)?;
    let mut out = survey.failures.clone();
    let seen: BTreeSet<u32> = survey.degrees.keys().copied().collect();
    expect(&mut out, "degree set", seen, BTreeSet::from([2, 4, 5]));
    expect(
        &mut out,
        "deg x^3",
        algebraic_degree(&monomial_table(&ctx, gp.d())?),
        2,
    );
    expect(
        &mut out,
        "deg x^(1/3)",
        algebraic_degree(&monomial_table(&ctx, gp.t())?),
        5,
    );
    let details = serde_json::to_value(&survey).expect("survey serializes");
    Ok(ReproReport::new(Target::Degrees9, out, details))
}

/// `(n, dim, count)` for the compatible-subspace counts checked.
pub fn compatible_counts() -> Result<Vec<(u32, u32, usize)>> {
    let mut rows = Vec::new();
    for (n, dim) in [(9, 2), (9, 3), (5, 2), (7, 2)] {
        let ctx = FieldCtx::with_degree(n)?;
        let gp = ctx.gold_params(1)?;
        rows.push((n, dim, enumerate_compatible(&ctx, &gp, dim)?.len()));
    }
    Ok(rows)
}

fn compat_counts() -> Result<ReproReport> {
    let rows = compatible_counts()?;
    let mut out = Vec::new();
    let mut details = Vec::new();
    for &(n, dim, count) in &rows {
        let want = match (n, dim) {
            (9, 2) => 511,
            (9, 3) => 73,
            _ => 0,
        };
        expect(&mut out, &format!("n={n} dim={dim}"), count, want);
        details.push(json!({"n": n, "dim": dim, "count": count, "expected": want}));
    }
    Ok(ReproReport::new(Target::CompatCounts, out, json!(details)))
}

fn probability(seed: u64) -> Result<ReproReport> {
    let ctx = FieldCtx::with_degree(9)?;
    let gp = ctx.gold_params(1)?;
    let mut out = Vec::new();
    let mut details = serde_json::Map::new();
    for family in [SearchFamily::P52, SearchFamily::P53] {
        let r = search_pairs(&ctx, &gp, family, 1000, seed)?;
        let rate = r.hit_rate();
        if !(0.45..=0.55).contains(&rate) {
            out.push(format!("{family:?} hit rate {rate} outside [0.45, 0.55]"));
        }
        if r.pairs.iter().any(|p| !p.verified) {
            out.push(format!("{family:?} returned an unverified pair"));
        }
        details.insert(
            format!("{family:?}").to_lowercase(),
            json!({"draws": r.draws, "hits": r.hits, "rate": rate}),
        );
    }
    Ok(ReproReport::new(
        Target::Probability,
        out,
        serde_json::Value::Object(details),
    ))
}

/// Number of `(a, b)` where the Gold zero test and the Walsh sum disagree.
pub fn walsh_oracle_mismatches(n: u32, i: u32) -> Result<usize> {
    let ctx = FieldCtx::with_degree(n)?;
    let gp = ctx.gold_params(i)?;
    let f = FnTable::gold(ctx, &gp);
    let mut bad = 0;
    for a in ctx.elements() {
        for b in ctx.elements() {
            if is_walsh_zero_gold(&ctx, &gp, a, b) != (walsh_at(&f, a, b) == 0) {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

fn walsh_oracle() -> Result<ReproReport> {
    let mut out = Vec::new();
    let mut details = Vec::new();
    for n in [3, 5, 7] {
        for i in gold_exponents(n) {
            let bad = walsh_oracle_mismatches(n, i)?;
            if bad > 0 {
                out.push(format!("n={n} i={i}: {bad} mismatches"));
            }
            details.push(json!({"n": n, "i": i, "pairs": 1u64 << (2 * n), "mismatches": bad}));
        }
    }
    Ok(ReproReport::new(Target::WalshOracle, out, json!(details)))
}

pub fn reproduce(target: Target, seed: u64) -> Result<ReproReport> {
    match target {
        Target::Lemma12 => lemma12(),
        Target::Degrees9 => degrees9(seed),
        Target::CompatCounts => compat_counts(),
        Target::Probability => probability(seed),
        Target::WalshOracle => walsh_oracle(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.name().parse::<Target>().unwrap(), t);
        }
        assert!("lemma13".parse::<Target>().is_err());
    }

    #[test]
    fn small_reports_pass() {
        let r = reproduce(Target::Lemma12, 0).unwrap();
        assert!(r.pass, "{:?}", r.discrepancies);
        assert_eq!(r.details["total"], 64);
        assert_eq!(walsh_oracle_mismatches(5, 2).unwrap(), 0);
    }

    #[test]
    fn census_n3() {
        let c = census(3, 1).unwrap();
        assert_eq!(c.unclassified, 0);
        assert_eq!(c.total, c.tracefm + c.comp + c.xi);
    }
}
