//! From a trivially intersecting pair of WZ spaces to a permutation that is
//! CCZ-equivalent to `f`.
//!
//! The graph code of `f` has one column per nonzero `x`, holding
//! `(Tr(alpha_k x))_k` over `(Tr(alpha_k f(x)))_k`, so its codewords are the
//! functions `x -> Tr(a x + b f(x))`. Re-reading the same code in a basis
//! `B1 | B2` of `F_2^(2n)` made of two WZ spaces gives a second generator
//! matrix whose halves are simplex codes, so its columns are again a graph
//! `(u, g(u))` with `g` a permutation.

use rayon::prelude::*;

use crate::analysis::AnalysisReport;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{unpack_pair, BitMatrix, Subspace};
use crate::pairs::TiPair;
use crate::walsh::FnTable;

/// Generator matrix of a graph code, split into its two `n`-row halves.
/// Column `j` belongs to the nonzero element `x = j + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCode {
    pub g1: BitMatrix,
    pub g2: BitMatrix,
}

impl GraphCode {
    pub fn stacked(&self) -> BitMatrix {
        self.g1.stack(&self.g2).expect("halves share a column count")
    }

    pub fn ncols(&self) -> usize {
        self.g1.ncols()
    }

    fn from_columns(n: u32, columns: &[(u32, u32)]) -> GraphCode {
        let rows = n as usize;
        let g1 = BitMatrix::from_fn(rows, columns.len(), |r, c| columns[c].0 >> r & 1 != 0);
        let g2 = BitMatrix::from_fn(rows, columns.len(), |r, c| columns[c].1 >> r & 1 != 0);
        GraphCode { g1, g2 }
    }

    /// `(top, bottom)` of column `j`, bit `r` holding row `r`.
    pub fn column(&self, j: usize) -> (u32, u32) {
        (self.g1.column(j) as u32, self.g2.column(j) as u32)
    }
}

/// Row masks `m` with `Tr(alpha x) = parity(x & m)` for the polynomial basis.
fn basis_forms(ctx: &FieldCtx) -> Vec<u32> {
    ctx.polynomial_basis()
        .into_iter()
        .map(|a| ctx.trace_form(a))
        .collect()
}

fn parities(masks: &[u32], x: u32) -> u32 {
    masks
        .iter()
        .enumerate()
        .fold(0, |acc, (r, &m)| acc | ((x & m).count_ones() & 1) << r)
}

/// `G1[k][j] = Tr(x^k x_j)`, `G2[k][j] = Tr(x^k f(x_j))`.
pub fn build_graph_code(f: &FnTable) -> GraphCode {
    let ctx = f.ctx();
    let forms = basis_forms(ctx);
    let columns: Vec<(u32, u32)> = (1..ctx.size() as u32)
        .into_par_iter()
        .map(|x| (parities(&forms, x), parities(&forms, f.eval(Elem(x)).0)))
        .collect();
    GraphCode::from_columns(ctx.n(), &columns)
}

/// The rows `x -> Tr(a x + b f(x))` for the basis vectors `(a, b)` of `s`,
/// taken in increasing pivot order.
fn half_rows(ctx: &FieldCtx, s: &Subspace) -> Vec<(u32, u32)> {
    s.basis()
        .iter()
        .rev()
        .map(|&w| {
            let (a, b) = unpack_pair(ctx.n(), w);
            (ctx.trace_form(a), ctx.trace_form(b))
        })
        .collect()
}

fn distinct_nonzero(values: impl Iterator<Item = u32>, size: usize) -> bool {
    let mut seen = vec![false; size];
    for v in values {
        if v == 0 || std::mem::replace(&mut seen[v as usize], true) {
            return false;
        }
    }
    true
}

/// The graph code of `f` written in the basis of a verified pair: the top
/// half comes from `pair.y`, the bottom half from `pair.z`. Each half must
/// have pairwise distinct nonzero columns.
pub fn build_pair_code(f: &FnTable, pair: &TiPair) -> Result<GraphCode> {
    let ctx = f.ctx();
    let n = ctx.n();
    if !pair.verified {
        return Err(Error::Integrity {
            stage: "pair-verification",
            detail: "pair is not verified".into(),
        });
    }
    if pair.y.width() != 2 * n || pair.z.width() != 2 * n || pair.y.dim() != n || pair.z.dim() != n {
        return Err(Error::Integrity {
            stage: "pair-verification",
            detail: format!("pair spaces must be {n}-dimensional subspaces of F_2^{}", 2 * n),
        });
    }
    let top = half_rows(ctx, &pair.y);
    let bottom = half_rows(ctx, &pair.z);
    let row = |rows: &[(u32, u32)], x: u32, fx: u32| {
        rows.iter().enumerate().fold(0, |acc, (r, &(ma, mb))| {
            acc | (((x & ma) ^ (fx & mb)).count_ones() & 1) << r
        })
    };
    let columns: Vec<(u32, u32)> = (1..ctx.size() as u32)
        .into_par_iter()
        .map(|x| {
            let fx = f.eval(Elem(x)).0;
            (row(&top, x, fx), row(&bottom, x, fx))
        })
        .collect();
    for (half, pick) in [("top", 0), ("bottom", 1)] {
        let values = columns.iter().map(|c| if pick == 0 { c.0 } else { c.1 });
        if !distinct_nonzero(values, ctx.size()) {
            return Err(Error::Integrity {
                stage: "pair-code",
                detail: format!("{half} half of G' has a zero or repeated column"),
            });
        }
    }
    Ok(GraphCode::from_columns(n, &columns))
}

/// Decodes each column through the dual of the polynomial basis and reads
/// the code as the graph of `g`.
pub fn extract_permutation(ctx: &FieldCtx, code: &GraphCode) -> Result<FnTable> {
    let dual = ctx.dual_basis(&ctx.polynomial_basis())?;
    let decode = |c: u32| {
        dual.iter()
            .enumerate()
            .filter(|(r, _)| c >> r & 1 != 0)
            .fold(Elem::ZERO, |acc, (_, &b)| acc + b)
    };
    let mut table: Vec<Option<Elem>> = vec![None; ctx.size()];
    table[0] = Some(Elem::ZERO);
    for j in 0..code.ncols() {
        let (top, bottom) = code.column(j);
        let u = decode(top);
        let slot = &mut table[u.0 as usize];
        if slot.is_some() {
            return Err(Error::Integrity {
                stage: "extraction",
                detail: format!("input {u} decoded twice; the pair does not intersect trivially"),
            });
        }
        *slot = Some(decode(bottom));
    }
    let table = table
        .into_iter()
        .map(|v| v.expect("all inputs decoded"))
        .collect();
    FnTable::new(*ctx, table)
}

/// Evidence that `g` is CCZ-equivalent to `f`.
#[derive(Clone, Debug)]
pub struct CczCertificate {
    pub f: FnTable,
    pub g: FnTable,
    pub pair: TiPair,
    pub codes_equal: bool,
    pub g_report: AnalysisReport,
}

pub fn certify_ccz(f: &FnTable, pair: &TiPair) -> Result<CczCertificate> {
    let ctx = f.ctx();
    let code = build_graph_code(f);
    let pair_code = build_pair_code(f, pair)?;
    let codes_equal = code.stacked().row_space_equal(&pair_code.stacked());
    if !codes_equal {
        return Err(Error::Integrity {
            stage: "code-equality",
            detail: "G and G' span different codes".into(),
        });
    }
    let g = extract_permutation(ctx, &pair_code)?;
    let g_report = AnalysisReport::of(&g);
    if !g_report.is_permutation {
        return Err(Error::Integrity {
            stage: "permutation",
            detail: "extracted function is not bijective".into(),
        });
    }
    Ok(CczCertificate {
        f: f.clone(),
        g,
        pair: pair.clone(),
        codes_equal,
        g_report,
    })
}
