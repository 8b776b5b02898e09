use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wzspace::analysis::{monomial_table, AnalysisReport};
use wzspace::artifact::{
    parse_hex, ArtifactFile, Payload, PermutationArtifact, TiPairArtifact, WzSpaceArtifact,
};
use wzspace::ccz::certify_ccz;
use wzspace::enumerate::enumerate_wz_spaces;
use wzspace::error::Error;
use wzspace::families::{
    build_comp_from, build_tracefm, build_xi, classify_all, trivial_0b, trivial_a0, WzFamily,
};
use wzspace::field::{is_irreducible, Elem, FieldCtx, GoldParams};
use wzspace::linalg::Subspace;
use wzspace::pairs::{
    build_p52, build_p53, f8_primitive, pair_p51, pair_p52, pair_p53, pair_trivial, search_pairs,
    SearchFamily, TiPair,
};
use wzspace::reproduce::{census, reproduce, Target};
use wzspace::walsh::{verify_wz_space, FnTable};

/// Walsh-zero spaces of Gold functions and the permutations built from them.
#[derive(Parser)]
#[command(name = "wzspace", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show the field's modulus and basic counts.
    FieldInfo {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_hex)]
        modulus: Option<u32>,
    },
    /// Build, check, enumerate or classify WZ spaces.
    #[command(subcommand)]
    Wz(WzCommand),
    /// Build or search for trivially intersecting pairs.
    #[command(subcommand)]
    Pair(PairCommand),
    /// Turn a pair into a permutation, or analyze a function.
    #[command(subcommand)]
    Perm(PermCommand),
    /// Run one of the built-in experiments and check its outcome.
    Reproduce {
        #[arg(value_parser = parse_target)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct GoldArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    i: u32,
    #[arg(long, value_parser = parse_hex)]
    modulus: Option<u32>,
}

impl GoldArgs {
    fn open(&self) -> Result<(FieldCtx, GoldParams), Error> {
        let ctx = FieldCtx::new(self.n, self.modulus)?;
        let gp = ctx.gold_params(self.i)?;
        Ok((ctx, gp))
    }
}

#[derive(Args, Clone, Default)]
struct XiArgs {
    /// Element of GF(8) inside the field, as hex.
    #[arg(long, value_parser = parse_hex, conflicts_with = "xi_primitive")]
    xi: Option<u32>,
    /// Use the least primitive element of GF(8).
    #[arg(long)]
    xi_primitive: bool,
}

impl XiArgs {
    fn resolve(&self, ctx: &FieldCtx) -> Result<Elem, Error> {
        match (self.xi, self.xi_primitive) {
            (Some(x), _) => ctx.elem(x),
            (None, true) => Ok(f8_primitive(ctx)?[0]),
            (None, false) => {
                f8_primitive(ctx)?;
                Err(Error::InvalidParameter("give --xi or --xi-primitive".into()))
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceFamily {
    TrivialA0,
    Trivial0b,
    Comp,
    Tracefm,
    Xi,
}

#[derive(Subcommand)]
enum WzCommand {
    /// Build one WZ space from a family and its parameters.
    Construct {
        #[command(flatten)]
        gold: GoldArgs,
        #[arg(long, value_enum)]
        family: SpaceFamily,
        #[command(flatten)]
        xi: XiArgs,
        #[arg(long, value_parser = parse_hex, default_value = "1")]
        mu: u32,
        /// Subfield degree for the trace family (defaults to n).
        #[arg(long)]
        m: Option<u32>,
        /// Spanning words of S for the comp family.
        #[arg(long, value_parser = parse_hex, value_delimiter = ',')]
        s: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a stored space is a WZ space of its Gold function.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// List every WZ space (n <= 7).
    Enumerate {
        #[command(flatten)]
        gold: GoldArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a stored space, or all WZ spaces for the given parameters.
    Classify {
        #[arg(long = "in", conflicts_with_all = ["n"])]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 1)]
        i: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PairFamily {
    Trivial,
    P51,
    P52,
    P53,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchKind {
    P52,
    P53,
}

#[derive(Subcommand)]
enum PairCommand {
    Construct {
        #[command(flatten)]
        gold: GoldArgs,
        #[arg(long, value_enum)]
        family: PairFamily,
        #[command(flatten)]
        xi: XiArgs,
        #[arg(long, value_parser = parse_hex, default_value = "1")]
        mu: u32,
        #[arg(long, value_parser = parse_hex, default_value = "1")]
        nu: u32,
        /// Build and check the pair even when its side condition fails.
        #[arg(long)]
        opportunistic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw random parameters and keep the pairs whose condition holds.
    Search {
        #[command(flatten)]
        gold: GoldArgs,
        #[arg(long, value_enum)]
        family: SearchKind,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a stored pair.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseFunction {
    Gold,
}

#[derive(Subcommand)]
enum PermCommand {
    /// Extract the CCZ-equivalent permutation from a stored pair.
    Build {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long, value_enum, default_value = "gold")]
        f: BaseFunction,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// APN, bijectivity and degree of a stored permutation or a monomial.
    Analyze {
        #[arg(long = "in", conflicts_with_all = ["n"])]
        input: Option<PathBuf>,
        #[arg(long, requires = "exponent")]
        n: Option<u32>,
        /// Monomial exponent `k`, or `1/d` for the inverse of `x^d`.
        #[arg(long)]
        exponent: Option<String>,
    },
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Process outcome, mapped onto the exit status.
enum Failure {
    Mismatch(String),
    Condition(String),
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Error(e)
    }
}

type Outcome = Result<(), Failure>;

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Mismatch(_) => 2,
        Failure::Condition(_) => 5,
        Failure::Error(Error::SizeGuard(_)) => 4,
        Failure::Error(Error::Integrity { .. }) => 2,
        Failure::Error(_) => 3,
    }
}

fn emit(json_mode: bool, value: serde_json::Value, text: String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&value).expect("json value"));
    } else {
        println!("{text}");
    }
}

fn save(path: &Option<PathBuf>, file: &ArtifactFile) -> Result<(), Error> {
    if let Some(p) = path {
        file.write(p)?;
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn words(s: &Subspace) -> Vec<String> {
    s.basis().iter().map(|w| format!("{w:#x}")).collect()
}

fn field_info(json_mode: bool, n: u32, modulus: Option<u32>) -> Outcome {
    let ctx = FieldCtx::new(n, modulus)?;
    let trace_zero = ctx.elements().filter(|&x| ctx.trace(x) == 0).count();
    let value = json!({
        "n": n,
        "modulus": format!("{:#x}", ctx.modulus()),
        "irreducible": is_irreducible(ctx.modulus()),
        "size": ctx.size(),
        "trace_zero": trace_zero,
        "trace_mask": format!("{:#x}", ctx.trace_mask()),
    });
    let text = format!(
        "n = {n}\nmodulus = {:#x}\nirreducible = {}\ntrace-zero elements = {trace_zero}",
        ctx.modulus(),
        is_irreducible(ctx.modulus())
    );
    emit(json_mode, value, text);
    Ok(())
}

fn load_space(path: &Path) -> Result<(FieldCtx, GoldParams, WzSpaceArtifact), Error> {
    let file = ArtifactFile::read(path)?;
    let ctx = file.field.context()?;
    match file.payload {
        Payload::WzSpace(a) => {
            let gp = ctx.gold_params(a.gold_i)?;
            Ok((ctx, gp, a))
        }
        other => Err(Error::Format(format!(
            "expected a wz_space file, found {}",
            other.kind()
        ))),
    }
}

fn load_pair(path: &Path) -> Result<(FieldCtx, GoldParams, TiPair), Error> {
    let file = ArtifactFile::read(path)?;
    let ctx = file.field.context()?;
    match file.payload {
        Payload::TiPair(a) => {
            let gp = ctx.gold_params(a.gold_i)?;
            Ok((ctx, gp, a.pair()))
        }
        other => Err(Error::Format(format!(
            "expected a ti_pair file, found {}",
            other.kind()
        ))),
    }
}

fn space_json(s: &Subspace, family: Option<&WzFamily>) -> serde_json::Value {
    json!({"dim": s.dim(), "basis": words(s), "family": family})
}

fn run_wz(json_mode: bool, cmd: WzCommand) -> Outcome {
    match cmd {
        WzCommand::Construct {
            gold,
            family,
            xi,
            mu,
            m,
            s,
            out,
        } => {
            let (ctx, gp) = gold.open()?;
            let mu = ctx.elem(mu)?;
            let tag = match family {
                SpaceFamily::TrivialA0 => WzFamily::TrivialA0,
                SpaceFamily::Trivial0b => WzFamily::Trivial0B,
                SpaceFamily::Comp => {
                    for &w in &s {
                        ctx.elem(w)?;
                    }
                    WzFamily::Comp {
                        s: Subspace::span(ctx.n(), s),
                    }
                }
                SpaceFamily::Tracefm => WzFamily::TraceFm {
                    m: m.unwrap_or(ctx.n()),
                    mu,
                },
                SpaceFamily::Xi => WzFamily::Xi {
                    xi: xi.resolve(&ctx)?,
                    mu,
                },
            };
            let space = match &tag {
                WzFamily::TrivialA0 => trivial_a0(ctx.n()),
                WzFamily::Trivial0B => trivial_0b(ctx.n()),
                WzFamily::Comp { s } => build_comp_from(&ctx, &gp, s)?,
                WzFamily::TraceFm { m, mu } => build_tracefm(&ctx, &gp, *m, *mu)?,
                WzFamily::Xi { xi, mu } => build_xi(&ctx, &gp, *xi, *mu)?,
            };
            let file = ArtifactFile::new(
                &ctx,
                Payload::WzSpace(WzSpaceArtifact {
                    gold_i: gp.i(),
                    space: space.clone(),
                    family: Some(tag.clone()),
                }),
            );
            save(&out, &file)?;
            emit(
                json_mode,
                space_json(&space, Some(&tag)),
                format!(
                    "{} space of dimension {}: [{}]",
                    tag.name(),
                    space.dim(),
                    words(&space).join(", ")
                ),
            );
            Ok(())
        }
        WzCommand::Verify { input } => {
            let (ctx, gp, a) = load_space(&input)?;
            let f = FnTable::gold(ctx, &gp);
            let ok = a.space.dim() == ctx.n() && verify_wz_space(&f, &a.space, None)?;
            let regenerated = match &a.family {
                Some(tag) => Some(tag.regenerate(&ctx, &gp)? == a.space),
                None => None,
            };
            let pass = ok && regenerated != Some(false);
            emit(
                json_mode,
                json!({"wz_space": ok, "matches_family": regenerated, "pass": pass}),
                format!(
                    "wz space: {}; matches recorded family: {:?}",
                    if ok { "ok" } else { "FAIL" },
                    regenerated
                ),
            );
            if pass {
                Ok(())
            } else {
                Err(Failure::Mismatch("space failed verification".into()))
            }
        }
        WzCommand::Enumerate { gold, out } => {
            let (ctx, gp) = gold.open()?;
            let f = FnTable::gold(ctx, &gp);
            let spaces = enumerate_wz_spaces(&f, Some(&gp))?;
            let list: Vec<serde_json::Value> = spaces.iter().map(|s| json!(words(s))).collect();
            let value = json!({"n": ctx.n(), "i": gp.i(), "count": spaces.len(), "spaces": list});
            save(&out, &ArtifactFile::new(&ctx, Payload::Report(value.clone())))?;
            emit(json_mode, value, format!("{} WZ spaces", spaces.len()));
            Ok(())
        }
        WzCommand::Classify {
            input: Some(path), ..
        } => {
            let (ctx, gp, a) = load_space(&path)?;
            let tags = classify_all(&ctx, &gp, &a.space)?;
            let names: Vec<&str> = tags.iter().map(|t| t.name()).collect();
            emit(
                json_mode,
                json!({"tags": tags}),
                if names.is_empty() {
                    "unclassified".into()
                } else {
                    names.join(", ")
                },
            );
            if tags.is_empty() {
                Err(Failure::Mismatch("space matches no family".into()))
            } else {
                Ok(())
            }
        }
        WzCommand::Classify { input: None, n, i } => {
            let n = n.ok_or_else(|| Error::InvalidParameter("give --in FILE or --n".into()))?;
            let c = census(n, i)?;
            let text = format!(
                "total {}: tracefm {} (incl. Z_0b), comp {} (incl. Z_a0), xi {}, unclassified {}",
                c.total, c.tracefm, c.comp, c.xi, c.unclassified
            );
            emit(json_mode, serde_json::to_value(&c).expect("census"), text);
            if c.unclassified > 0 {
                Err(Failure::Mismatch(format!(
                    "{} spaces unclassified",
                    c.unclassified
                )))
            } else {
                Ok(())
            }
        }
    }
}

fn pair_json(p: &TiPair) -> serde_json::Value {
    json!({"provenance": p.provenance, "verified": p.verified, "y": words(&p.y), "z": words(&p.z)})
}

fn run_pair(json_mode: bool, cmd: PairCommand) -> Outcome {
    match cmd {
        PairCommand::Construct {
            gold,
            family,
            xi,
            mu,
            nu,
            opportunistic,
            out,
        } => {
            let (ctx, gp) = gold.open()?;
            let (mu, nu) = (ctx.elem(mu)?, ctx.elem(nu)?);
            let built = match family {
                PairFamily::Trivial => Some(pair_trivial(&ctx, &gp)?),
                PairFamily::P51 => Some(pair_p51(&ctx, &gp, xi.resolve(&ctx)?, mu)?),
                PairFamily::P52 if opportunistic => Some(build_p52(&ctx, &gp, xi.resolve(&ctx)?, mu, nu)?),
                PairFamily::P53 if opportunistic => Some(build_p53(&ctx, &gp, xi.resolve(&ctx)?, mu, nu)?),
                PairFamily::P52 => pair_p52(&ctx, &gp, xi.resolve(&ctx)?, mu, nu)?,
                PairFamily::P53 => pair_p53(&ctx, &gp, xi.resolve(&ctx)?, mu, nu)?,
            };
            let Some(pair) = built else {
                emit(
                    json_mode,
                    json!({"condition": false}),
                    "side condition fails; no pair built".into(),
                );
                return Err(Failure::Condition("side condition fails".into()));
            };
            save(
                &out,
                &ArtifactFile::new(&ctx, Payload::TiPair(TiPairArtifact::of(&gp, &pair))),
            )?;
            emit(
                json_mode,
                pair_json(&pair),
                format!("{} pair, verified: {}", pair.provenance.name(), pair.verified),
            );
            if pair.verified {
                Ok(())
            } else {
                Err(Failure::Mismatch("pair failed verification".into()))
            }
        }
        PairCommand::Search {
            gold,
            family,
            seed,
            budget,
            out,
        } => {
            let (ctx, gp) = gold.open()?;
            let family = match family {
                SearchKind::P52 => SearchFamily::P52,
                SearchKind::P53 => SearchFamily::P53,
            };
            let r = search_pairs(&ctx, &gp, family, budget, seed)?;
            let value = json!({
                "family": r.family,
                "seed": seed,
                "draws": r.draws,
                "hits": r.hits,
                "hit_rate": r.hit_rate(),
                "pairs": r.pairs.iter().map(pair_json).collect::<Vec<_>>(),
            });
            save(&out, &ArtifactFile::new(&ctx, Payload::Report(value.clone())))?;
            emit(
                json_mode,
                value,
                format!("{} of {} draws hit (rate {:.3})", r.hits, r.draws, r.hit_rate()),
            );
            Ok(())
        }
        PairCommand::Verify { input } => {
            let (ctx, gp, pair) = load_pair(&input)?;
            let ok = pair.check(&ctx, &gp)?;
            emit(
                json_mode,
                json!({"pass": ok}),
                if ok { "ok".into() } else { "FAIL".into() },
            );
            if ok {
                Ok(())
            } else {
                Err(Failure::Mismatch("pair failed verification".into()))
            }
        }
    }
}

fn report_text(r: &AnalysisReport) -> String {
    format!(
        "apn = {}\npermutation = {}\nalgebraic degree = {}",
        r.is_apn, r.is_permutation, r.algebraic_degree
    )
}

fn parse_exponent(ctx: &FieldCtx, s: &str) -> Result<u64, Error> {
    let bad = || Error::InvalidParameter(format!("bad exponent {s:?}"));
    match s.split_once('/') {
        Some(("1", d)) => {
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            wzspace::field::mod_inverse(d, ctx.group_order())
                .ok_or_else(|| Error::InvalidParameter(format!("x^{d} is not a permutation of the field")))
        }
        Some(_) => Err(bad()),
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn run_perm(json_mode: bool, cmd: PermCommand) -> Outcome {
    match cmd {
        PermCommand::Build {
            pair,
            f: BaseFunction::Gold,
            out,
        } => {
            let (ctx, gp, pair) = load_pair(&pair)?;
            if !pair.check(&ctx, &gp)? {
                return Err(Failure::Error(Error::Integrity {
                    stage: "pair-verification",
                    detail: "stored pair does not verify".into(),
                }));
            }
            let f = FnTable::gold(ctx, &gp);
            let cert = certify_ccz(&f, &pair)?;
            let artifact = PermutationArtifact {
                gold_i: gp.i(),
                provenance: pair.provenance,
                codes_equal: cert.codes_equal,
                table: cert.g.table().to_vec(),
                report: cert.g_report.clone(),
            };
            save(&out, &ArtifactFile::new(&ctx, Payload::Permutation(artifact)))?;
            let same = cert.g == f;
            emit(
                json_mode,
                json!({"codes_equal": cert.codes_equal, "equals_f": same, "report": cert.g_report}),
                format!(
                    "codes equal = {}\ng = f: {same}\n{}",
                    cert.codes_equal,
                    report_text(&cert.g_report)
                ),
            );
            Ok(())
        }
        PermCommand::Analyze {
            input: Some(path), ..
        } => {
            let file = ArtifactFile::read(&path)?;
            let ctx = file.field.context()?;
            let Payload::Permutation(p) = file.payload else {
                return Err(Error::Format("expected a permutation file".into()).into());
            };
            let g = FnTable::new(ctx, p.table)?;
            let r = AnalysisReport::of(&g);
            emit(
                json_mode,
                serde_json::to_value(&r).expect("report"),
                report_text(&r),
            );
            if r != p.report {
                return Err(Failure::Mismatch(
                    "recomputed report differs from the stored one".into(),
                ));
            }
            Ok(())
        }
        PermCommand::Analyze {
            input: None,
            n,
            exponent,
        } => {
            let n =
                n.ok_or_else(|| Error::InvalidParameter("give --in FILE or --n with --exponent".into()))?;
            let ctx = FieldCtx::with_degree(n)?;
            let k = parse_exponent(&ctx, exponent.as_deref().unwrap_or("1"))?;
            let r = AnalysisReport::of(&monomial_table(&ctx, k)?);
            let mut value = serde_json::to_value(&r).expect("report");
            value["exponent"] = json!(k);
            emit(
                json_mode,
                value,
                format!("x^{k} on GF(2^{n})\n{}", report_text(&r)),
            );
            Ok(())
        }
    }
}

fn run_reproduce(json_mode: bool, target: Target, seed: u64, out: Option<PathBuf>) -> Outcome {
    let report = reproduce(target, seed)?;
    let value = serde_json::to_value(&report).expect("report");
    if let Some(p) = &out {
        let text = serde_json::to_string_pretty(&value).expect("report") + "\n";
        std::fs::write(p, text).map_err(|e| Error::Format(format!("{}: {e}", p.display())))?;
    }
    let mut text = format!("{target}: {}", if report.pass { "PASS" } else { "FAIL" });
    for d in &report.discrepancies {
        text.push_str(&format!("\n  {d}"));
    }
    emit(json_mode, value, text);
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Mismatch(report.discrepancies.join("; ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::FieldInfo { n, modulus } => field_info(cli.json, n, modulus),
        Command::Wz(cmd) => run_wz(cli.json, cmd),
        Command::Pair(cmd) => run_pair(cli.json, cmd),
        Command::Perm(cmd) => run_perm(cli.json, cmd),
        Command::Reproduce { target, seed, out } => run_reproduce(cli.json, target, seed, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Mismatch(m) => eprintln!("mismatch: {m}"),
                Failure::Condition(m) => eprintln!("condition failed: {m}"),
                Failure::Error(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}
