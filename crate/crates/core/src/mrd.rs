//! Rank-metric codes attached to linear sets: C_f = {a x + b f(x)} as an
//! F_q-space of q^{2n} maps of F_{q^n}, their rank distributions, the MRD
//! property (all nonzero ranks >= n-1), the four named families, and
//! small-scale matrix-code equivalence testing.
//!
//! Matrices realize maps in the fixed F_q-basis g^0..g^{n-1}; equivalence
//! witnesses depend on that choice, which is recorded in reports.

use crate::arith::gcd;
use crate::classify::Budget;
use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx, ONE, ZERO};
use crate::projline::rref_fq;
use crate::qpoly::{evaluate, kernel_dimension, QPoly};
use rayon::prelude::*;
use serde::Serialize;

/// An F_q-linear code of q-polynomials. For C_f the basis is
/// x*g^i, f(x)*g^i (2n polynomials) and `defining` is f.
#[derive(Clone, Debug)]
pub struct RankCode {
    pub basis: Vec<QPoly>,
    pub defining: Option<QPoly>,
}

pub fn code_from_poly(ctx: &FieldCtx, f: &QPoly) -> Result<RankCode> {
    if f.is_scalar_multiple_of_x() {
        return Err(Error::DegeneratePoly);
    }
    let mut basis = Vec::with_capacity(2 * f.n());
    for &w in ctx.qn_basis() {
        basis.push(QPoly::scalar(ctx, w));
    }
    for &w in ctx.qn_basis() {
        let coeffs = f.coeffs.iter().map(|&c| ctx.mul(w, c)).collect();
        basis.push(QPoly { coeffs });
    }
    Ok(RankCode {
        basis,
        defining: Some(f.clone()),
    })
}

/// A code spanned by arbitrary q-polynomials (test scaffolding and duals).
pub fn code_from_basis(basis: Vec<QPoly>) -> RankCode {
    RankCode {
        basis,
        defining: None,
    }
}

impl RankCode {
    pub fn n(&self) -> usize {
        self.basis.first().map_or(0, |f| f.n())
    }

    /// F_q-dimension of the span.
    pub fn dim(&self, ctx: &FieldCtx) -> u32 {
        let mut rows: Vec<Vec<FElem>> = self.basis.iter().map(|f| poly_coords(ctx, f)).collect();
        rref_fq(ctx, &mut rows) as u32
    }

    /// Membership in the F_q-span of the basis.
    pub fn contains(&self, ctx: &FieldCtx, f: &QPoly) -> bool {
        let mut rows: Vec<Vec<FElem>> = self.basis.iter().map(|g| poly_coords(ctx, g)).collect();
        let dim = rref_fq(ctx, &mut rows);
        rows.push(poly_coords(ctx, f));
        rref_fq(ctx, &mut rows) == dim
    }

    /// Every element of the span, as coefficient vectors.
    pub fn elements(&self, ctx: &FieldCtx) -> Vec<QPoly> {
        let n = self.n();
        if let Some(f) = &self.defining {
            // fast path: elements are a*x + b*f(x) over (a,b) in F_{q^n}^2
            let mut out = Vec::with_capacity((ctx.size() * ctx.size()) as usize);
            for a in ctx.elements() {
                for b in ctx.elements() {
                    let mut coeffs: Vec<FElem> = f.coeffs.iter().map(|&c| ctx.mul(b, c)).collect();
                    coeffs[0] = ctx.add(coeffs[0], a);
                    out.push(QPoly { coeffs });
                }
            }
            return out;
        }
        let fq = ctx.base_q_elements().to_vec();
        let q = fq.len();
        let k = self.basis.len();
        let total = q.pow(k as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rest = idx;
            let mut coeffs = vec![ZERO; n];
            for b in &self.basis {
                let c = fq[rest % q];
                rest /= q;
                if c.0 != 0 {
                    for (i, ci) in coeffs.iter_mut().enumerate() {
                        *ci = ctx.add(*ci, ctx.mul(c, b.coeffs[i]));
                    }
                }
            }
            out.push(QPoly { coeffs });
        }
        out
    }
}

fn poly_coords(ctx: &FieldCtx, f: &QPoly) -> Vec<FElem> {
    let mut row = Vec::with_capacity(f.n() * ctx.n() as usize);
    for &c in &f.coeffs {
        row.extend(ctx.to_q_coords(c));
    }
    row
}

/// A_0..A_n with A_r = #{c in C : rank(c) = r}; rank via the F_q-kernel of
/// the q-polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankDistribution {
    pub counts: Vec<u64>,
}

impl RankDistribution {
    pub fn min_nonzero_rank(&self) -> Option<usize> {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &c)| c > 0)
            .map(|(r, _)| r)
    }
}

pub fn rank_distribution(
    ctx: &FieldCtx,
    code: &RankCode,
    budget: &Budget,
) -> Result<RankDistribution> {
    let n = ctx.n() as usize;
    let total = (ctx.q() as u128).pow(code.basis.len() as u32);
    budget.check("rank scan", total)?;
    let elements = code.elements(ctx);
    let counts = elements
        .par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut acc, c| {
                let rank = n as u32 - kernel_dimension(ctx, c);
                acc[rank as usize] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    assert_eq!(counts.iter().sum::<u64>() as u128, total);
    assert_eq!(counts[0], 1);
    Ok(RankDistribution { counts })
}

/// MRD for dimension-2n codes: q^{2n} elements and A_1 = .. = A_{n-2} = 0.
pub fn is_mrd(ctx: &FieldCtx, code: &RankCode, budget: &Budget) -> Result<bool> {
    let n = ctx.n() as usize;
    if code.basis.len() != 2 * n || code.dim(ctx) != 2 * n as u32 {
        return Ok(false);
    }
    let dist = rank_distribution(ctx, code, budget)?;
    Ok(dist.counts[1..n.saturating_sub(1)].iter().all(|&c| c == 0))
}

/// The four named families of defining polynomials.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CodeFamily {
    Gabidulin,
    GenGabidulin,
    Sheekey,
    Ltz,
}

/// Defining q-polynomial for a named family. Scatteredness (hence the MRD
/// property) of the Sheekey and LTZ members depends on delta and is checked
/// computationally by callers, not assumed.
pub fn family(ctx: &FieldCtx, which: CodeFamily, s: u32, delta: Option<FElem>) -> Result<QPoly> {
    let n = ctx.n();
    match which {
        CodeFamily::Gabidulin => Ok(QPoly::monomial(ctx, 1, ONE)),
        CodeFamily::GenGabidulin => {
            if s == 0 || s >= n || gcd(s as u64, n as u64) != 1 {
                return Err(Error::BadParams(format!(
                    "generalized Gabidulin requires gcd(s,n) = 1 and 0 < s < n, got s={s}, n={n}"
                )));
            }
            Ok(QPoly::monomial(ctx, s, ONE))
        }
        CodeFamily::Sheekey => {
            if n < 3 {
                return Err(Error::BadParams("family needs n >= 3".into()));
            }
            let d = delta.ok_or_else(|| Error::BadParams("delta required".into()))?;
            let mut coeffs = vec![ZERO; n as usize];
            coeffs[1] = d;
            coeffs[(n - 1) as usize] = ONE;
            Ok(QPoly { coeffs })
        }
        CodeFamily::Ltz => {
            if n < 3 {
                return Err(Error::BadParams("family needs n >= 3".into()));
            }
            if s == 0 || s >= n || gcd(s as u64, n as u64) != 1 {
                return Err(Error::BadParams(format!(
                    "LTZ requires gcd(s,n) = 1 and 0 < s < n, got s={s}, n={n}"
                )));
            }
            let d = delta.ok_or_else(|| Error::BadParams("delta required".into()))?;
            if ctx.rel_norm(d) == ONE {
                return Err(Error::BadParams("LTZ requires N(delta) != 1".into()));
            }
            let mut coeffs = vec![ZERO; n as usize];
            coeffs[s as usize] = d;
            coeffs[(n - s) as usize] = ONE;
            Ok(QPoly { coeffs })
        }
    }
}

// ---- matrix realization and small-scale code equivalence --------------------

/// n x n matrix over F_q (entries constrained to the base subfield),
/// row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FqMatrix {
    pub n: usize,
    pub entries: Vec<FElem>,
}

impl FqMatrix {
    pub fn identity(n: usize) -> FqMatrix {
        let mut entries = vec![ZERO; n * n];
        for i in 0..n {
            entries[i * n + i] = ONE;
        }
        FqMatrix { n, entries }
    }

    pub fn at(&self, i: usize, j: usize) -> FElem {
        self.entries[i * self.n + j]
    }

    pub fn matmul(&self, ctx: &FieldCtx, other: &FqMatrix) -> FqMatrix {
        let n = self.n;
        let mut entries = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.0 == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] = ctx.add(entries[i * n + j], ctx.mul(a, other.at(k, j)));
                }
            }
        }
        FqMatrix { n, entries }
    }

    pub fn transpose(&self) -> FqMatrix {
        let n = self.n;
        let mut entries = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        FqMatrix { n, entries }
    }

    /// Entrywise x -> x^(p^k); an automorphism of F_q when e | k*...; callers
    /// pass k = e-step multiples of the base automorphism.
    pub fn frobenius(&self, ctx: &FieldCtx, k: u32) -> FqMatrix {
        FqMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|&x| ctx.frobenius_p(x, k))
                .collect(),
        }
    }

    pub fn rank(&self, ctx: &FieldCtx) -> u32 {
        let mut rows: Vec<Vec<FElem>> = (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect();
        rref_fq(ctx, &mut rows) as u32
    }

    pub fn is_invertible(&self, ctx: &FieldCtx) -> bool {
        self.rank(ctx) == self.n as u32
    }
}

/// Matrix of the map x -> c(x) in the basis g^0..g^{n-1}: column j holds the
/// coordinates of c(g^j).
pub fn matrix_of_qpoly(ctx: &FieldCtx, c: &QPoly) -> FqMatrix {
    let n = ctx.n() as usize;
    let mut entries = vec![ZERO; n * n];
    for (j, &b) in ctx.qn_basis().iter().enumerate() {
        let coords = ctx.to_q_coords(evaluate(ctx, c, b));
        for i in 0..n {
            entries[i * n + j] = coords[i];
        }
    }
    FqMatrix { n, entries }
}

/// All invertible n x n matrices over F_q, in ascending encoding order.
fn general_linear_group(ctx: &FieldCtx, n: usize) -> Vec<FqMatrix> {
    let fq = ctx.base_q_elements().to_vec();
    let q = fq.len();
    let total = q.pow((n * n) as u32);
    (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let mut rest = idx;
            let mut entries = vec![ZERO; n * n];
            for e in entries.iter_mut() {
                *e = fq[rest % q];
                rest /= q;
            }
            let m = FqMatrix { n, entries };
            m.is_invertible(ctx).then_some(m)
        })
        .collect()
}

pub fn gl_order(q: u64, n: u32) -> u128 {
    let qn = (q as u128).pow(n);
    (0..n).map(|i| qn - (q as u128).pow(i)).product()
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeEquivWitness {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub sigma_exp: u32,
    pub transposed: bool,
}

/// Exhaustive equivalence search between two matrix codes: find A, B in
/// GL(n,q) and sigma in Aut(F_q) (optionally with transposition) such that
/// A * C1^sigma * B = C2 as sets. Prunes by rank distribution first; any
/// witness is re-verified by full set comparison.
pub fn code_equivalent_smallscale(
    ctx: &FieldCtx,
    c1: &RankCode,
    c2: &RankCode,
    allow_transpose: bool,
    budget: &Budget,
) -> Result<Option<CodeEquivWitness>> {
    let b1: Vec<FqMatrix> = c1.basis.iter().map(|f| matrix_of_qpoly(ctx, f)).collect();
    let b2: Vec<FqMatrix> = c2.basis.iter().map(|f| matrix_of_qpoly(ctx, f)).collect();
    let d1 = rank_distribution(ctx, c1, budget)?;
    let d2 = rank_distribution(ctx, c2, budget)?;
    if d1 != d2 {
        return Ok(None);
    }
    equivalent_matrix_spans(ctx, &b1, &b2, allow_transpose, budget)
}

/// Core search on F_q-spans of matrices (bases of equal dimension).
pub fn equivalent_matrix_spans(
    ctx: &FieldCtx,
    basis1: &[FqMatrix],
    basis2: &[FqMatrix],
    allow_transpose: bool,
    budget: &Budget,
) -> Result<Option<CodeEquivWitness>> {
    let n = basis1.first().map(|m| m.n).unwrap_or(0);
    let order = gl_order(ctx.q(), n as u32);
    let sweeps = order * order * ctx.e() as u128 * if allow_transpose { 2 } else { 1 };
    budget.check("GL(n,q)^2 equivalence sweep", sweeps)?;

    // RREF of the target span for membership testing
    let mut target_rows: Vec<Vec<FElem>> = basis2.iter().map(|m| m.entries.clone()).collect();
    let target_dim = rref_fq(ctx, &mut target_rows);
    let mut source_rows: Vec<Vec<FElem>> = basis1.iter().map(|m| m.entries.clone()).collect();
    if rref_fq(ctx, &mut source_rows) != target_dim {
        return Ok(None);
    }

    let gl = general_linear_group(ctx, n);
    let transposes: &[bool] = if allow_transpose {
        &[false, true]
    } else {
        &[false]
    };
    for &transposed in transposes {
        for sigma in 0..ctx.e() {
            let k = sigma; // automorphism x -> x^(p^sigma) of F_q
            let twisted: Vec<FqMatrix> = basis1
                .iter()
                .map(|m| {
                    let t = m.frobenius(ctx, k);
                    if transposed {
                        t.transpose()
                    } else {
                        t
                    }
                })
                .collect();
            let witness = gl
                .par_iter()
                .map(|a| {
                    let am: Vec<FqMatrix> = twisted.iter().map(|m| a.matmul(ctx, m)).collect();
                    for b in &gl {
                        let mut ok = true;
                        for m in &am {
                            let img = m.matmul(ctx, b);
                            if !in_row_space(ctx, &target_rows, &img.entries) {
                                ok = false;
                                break;
                            }
                        }
                        if ok {
                            return Some((a.clone(), b.clone()));
                        }
                    }
                    None
                })
                .find_first(|w| w.is_some())
                .flatten();
            if let Some((a, b)) = witness {
                // re-verify: transformed set equals the target set
                let img_set: std::collections::BTreeSet<Vec<FElem>> = span_elements(
                    ctx,
                    &twisted
                        .iter()
                        .map(|m| {
                            a.matmul(ctx, m).matmul(
                                ctx,
                                &FqMatrix {
                                    n,
                                    entries: b.entries.clone(),
                                },
                            )
                        })
                        .collect::<Vec<_>>(),
                )
                .into_iter()
                .collect();
                let tgt_set: std::collections::BTreeSet<Vec<FElem>> =
                    span_elements(ctx, basis2).into_iter().collect();
                assert_eq!(img_set, tgt_set, "witness failed set re-verification");
                return Ok(Some(CodeEquivWitness {
                    a: a.entries.iter().map(|x| x.0).collect(),
                    b: b.entries.iter().map(|x| x.0).collect(),
                    sigma_exp: sigma,
                    transposed,
                }));
            }
        }
    }
    Ok(None)
}

fn in_row_space(ctx: &FieldCtx, rref_rows: &[Vec<FElem>], candidate: &[FElem]) -> bool {
    let mut v = candidate.to_vec();
    for row in rref_rows {
        let pivot = row.iter().position(|c| c.0 != 0).unwrap();
        if v[pivot].0 != 0 {
            let c = v[pivot];
            for (vi, ri) in v.iter_mut().zip(row) {
                let s = ctx.mul(c, *ri);
                *vi = ctx.sub(*vi, s);
            }
        }
    }
    v.iter().all(|c| c.0 == 0)
}

fn span_elements(ctx: &FieldCtx, basis: &[FqMatrix]) -> Vec<Vec<FElem>> {
    let fq = ctx.base_q_elements().to_vec();
    let q = fq.len();
    let k = basis.len();
    let nn = basis.first().map_or(0, |m| m.entries.len());
    let total = q.pow(k as u32);
    let mut out = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rest = idx;
        let mut entries = vec![ZERO; nn];
        for b in basis {
            let c = fq[rest % q];
            rest /= q;
            if c.0 != 0 {
                for (x, y) in entries.iter_mut().zip(&b.entries) {
                    *x = ctx.add(*x, ctx.mul(c, *y));
                }
            }
        }
        out.push(entries);
    }
    out
}

/// The trace Gram matrix T with T_ij = Tr(g^i g^j) over F_q, which realizes
/// the adjoint on matrices: matrix(adjoint(f)) = T * matrix(f)^T * T^{-1}.
pub fn trace_gram_matrix(ctx: &FieldCtx) -> FqMatrix {
    let n = ctx.n() as usize;
    let mut entries = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] = ctx.trace_q(ctx.mul(ctx.qn_basis()[i], ctx.qn_basis()[j]));
        }
    }
    FqMatrix { n, entries }
}

pub fn invert_fq_matrix(ctx: &FieldCtx, m: &FqMatrix) -> Option<FqMatrix> {
    let n = m.n;
    let mut rows: Vec<Vec<FElem>> = (0..n)
        .map(|i| {
            let mut r = m.entries[i * n..(i + 1) * n].to_vec();
            let mut unit = vec![ZERO; n];
            unit[i] = ONE;
            r.extend(unit);
            r
        })
        .collect();
    if rref_fq(ctx, &mut rows) != n {
        return None;
    }
    let mut entries = vec![ZERO; n * n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            entries[i * n + j] = row[n + j];
        }
    }
    Some(FqMatrix { n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use crate::projline::profile_of_poly;
    use crate::qpoly::{adjoint, dickson_matrix};

    fn f8() -> FieldCtx {
        build_field(2, 1, 3, None).unwrap()
    }

    #[test]
    fn gabidulin_code_f8() {
        let ctx = f8();
        let code = code_from_poly(&ctx, &QPoly::monomial(&ctx, 1, ONE)).unwrap();
        assert_eq!(code.dim(&ctx), 6);
        let dist = rank_distribution(&ctx, &code, &Budget::default()).unwrap();
        assert_eq!(dist.counts.iter().sum::<u64>(), 64);
        assert_eq!(dist.counts[0], 1);
        assert_eq!(dist.counts[1], 0);
        assert_eq!(dist.min_nonzero_rank(), Some(2));
        assert!(is_mrd(&ctx, &code, &Budget::default()).unwrap());
    }

    #[test]
    fn degenerate_and_trace_codes() {
        let ctx = f8();
        assert_eq!(
            code_from_poly(&ctx, &QPoly::identity(&ctx)).unwrap_err(),
            Error::DegeneratePoly
        );
        let code = code_from_poly(&ctx, &QPoly::trace(&ctx)).unwrap();
        let dist = rank_distribution(&ctx, &code, &Budget::default()).unwrap();
        assert!(dist.counts[1] > 0, "b*Tr(x) has rank 1");
        assert!(!is_mrd(&ctx, &code, &Budget::default()).unwrap());
    }

    #[test]
    fn scalar_only_code_has_full_ranks() {
        let ctx = f8();
        let basis: Vec<QPoly> = ctx
            .qn_basis()
            .iter()
            .map(|&w| QPoly::scalar(&ctx, w))
            .collect();
        let code = code_from_basis(basis);
        let dist = rank_distribution(&ctx, &code, &Budget::default()).unwrap();
        assert_eq!(dist.counts[3], 7); // q^n - 1 invertible scalar maps
        assert_eq!(dist.counts[0], 1);
        assert_eq!(dist.counts[1] + dist.counts[2], 0);
    }

    #[test]
    fn code_membership() {
        let ctx = f8();
        let f = QPoly::monomial(&ctx, 1, ONE);
        let code = code_from_poly(&ctx, &f).unwrap();
        // a x + b f(x) is in the code
        let mut el = QPoly::scalar(&ctx, FElem(5));
        el.coeffs[1] = FElem(7);
        assert!(code.contains(&ctx, &el));
        // x^(q^2) is not
        assert!(!code.contains(&ctx, &QPoly::monomial(&ctx, 2, ONE)));
    }

    #[test]
    fn families() {
        let ctx = build_field(2, 1, 5, None).unwrap();
        assert_eq!(
            family(&ctx, CodeFamily::Gabidulin, 0, None).unwrap(),
            QPoly::monomial(&ctx, 1, ONE)
        );
        assert_eq!(
            family(&ctx, CodeFamily::GenGabidulin, 2, None).unwrap(),
            QPoly::monomial(&ctx, 2, ONE)
        );
        assert!(family(&ctx, CodeFamily::GenGabidulin, 5, None).is_err());
        let d = ctx.generator();
        let sh = family(&ctx, CodeFamily::Sheekey, 0, Some(d)).unwrap();
        assert_eq!(sh.coeffs[1], d);
        assert_eq!(sh.coeffs[4], ONE);
        // q = 2: every norm is 1, so LTZ is unavailable
        assert!(family(&ctx, CodeFamily::Ltz, 1, Some(d)).is_err());
        let ctx3 = build_field(3, 1, 4, None).unwrap();
        let d3 = ctx3.generator();
        assert_ne!(ctx3.rel_norm(d3), ONE);
        let ltz = family(&ctx3, CodeFamily::Ltz, 1, Some(d3)).unwrap();
        assert_eq!(ltz.coeffs[1], d3);
        assert_eq!(ltz.coeffs[3], ONE);
    }

    #[test]
    fn mrd_iff_scattered_exhaustive_f8() {
        let ctx = f8();
        for enc in 0..512u64 {
            let f = QPoly::new(
                &ctx,
                vec![FElem(enc & 7), FElem((enc >> 3) & 7), FElem(enc >> 6)],
            );
            if f.is_scalar_multiple_of_x() {
                continue;
            }
            let code = code_from_poly(&ctx, &f).unwrap();
            let mrd = is_mrd(&ctx, &code, &Budget::default()).unwrap();
            let scattered = profile_of_poly(&ctx, &f).scattered;
            assert_eq!(mrd, scattered, "f = {:?}", f.coeffs);
        }
    }

    #[test]
    fn matrix_realization_and_dickson_rank_agree() {
        for (p, e, n) in [(2u64, 1u32, 3u32), (3, 1, 3), (2, 2, 2)] {
            let ctx = build_field(p, e, n, None).unwrap();
            let mut lcg = 0xD1CE_u64;
            let mut rnd = || {
                lcg = lcg
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                FElem((lcg >> 33) % ctx.size())
            };
            for _ in 0..30 {
                let f = QPoly::new(&ctx, (0..n).map(|_| rnd()).collect());
                let viamatrix = matrix_of_qpoly(&ctx, &f).rank(&ctx);
                let viakernel = ctx.n() - kernel_dimension(&ctx, &f);
                let viadickson = dickson_matrix(&ctx, &f).rank(&ctx);
                assert_eq!(viamatrix, viakernel);
                assert_eq!(viamatrix, viadickson);
            }
        }
    }

    #[test]
    fn adjoint_matrix_is_gram_conjugated_transpose() {
        let ctx = f8();
        let t = trace_gram_matrix(&ctx);
        let tinv = invert_fq_matrix(&ctx, &t).unwrap();
        for enc in (0..512u64).step_by(7) {
            let f = QPoly::new(
                &ctx,
                vec![FElem(enc & 7), FElem((enc >> 3) & 7), FElem(enc >> 6)],
            );
            let lhs = matrix_of_qpoly(&ctx, &adjoint(&ctx, &f));
            let rhs = t
                .matmul(&ctx, &matrix_of_qpoly(&ctx, &f).transpose())
                .matmul(&ctx, &tinv);
            assert_eq!(lhs, rhs, "f = {:?}", f.coeffs);
        }
    }

    #[test]
    fn code_self_equivalence_and_distinct_distributions() {
        let ctx = f8();
        let c1 = code_from_poly(&ctx, &QPoly::monomial(&ctx, 1, ONE)).unwrap();
        // identity witness on itself
        let w = code_equivalent_smallscale(&ctx, &c1, &c1, false, &Budget::default())
            .unwrap()
            .unwrap();
        assert!(!w.transposed);
        // different rank distributions prune immediately
        let ct = code_from_poly(&ctx, &QPoly::trace(&ctx)).unwrap();
        assert!(
            code_equivalent_smallscale(&ctx, &c1, &ct, true, &Budget::default())
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn gabidulin_twins_are_equivalent_f8() {
        let ctx = f8();
        let c1 = code_from_poly(&ctx, &QPoly::monomial(&ctx, 1, ONE)).unwrap();
        let c2 = code_from_poly(&ctx, &QPoly::monomial(&ctx, 2, ONE)).unwrap();
        let w = code_equivalent_smallscale(&ctx, &c1, &c2, false, &Budget::default())
            .unwrap()
            .expect("pseudoregulus codes are equivalent for n = 3");
        assert!(!w.transposed);
        assert_eq!(w.sigma_exp, 0);
    }

    #[test]
    fn transpose_code_equivalent_to_adjoint_code_f8() {
        let ctx = f8();
        let f = QPoly::monomial(&ctx, 1, ONE);
        let ct_basis: Vec<FqMatrix> = code_from_poly(&ctx, &f)
            .unwrap()
            .basis
            .iter()
            .map(|g| matrix_of_qpoly(&ctx, g).transpose())
            .collect();
        let fh_basis: Vec<FqMatrix> = code_from_poly(&ctx, &adjoint(&ctx, &f))
            .unwrap()
            .basis
            .iter()
            .map(|g| matrix_of_qpoly(&ctx, g))
            .collect();
        let w =
            equivalent_matrix_spans(&ctx, &ct_basis, &fh_basis, false, &Budget::default()).unwrap();
        assert!(w.is_some(), "C_f^T is equivalent to the adjoint code");
    }

    #[test]
    fn budget_guards_equivalence_sweep() {
        let ctx = f8();
        let c = code_from_poly(&ctx, &QPoly::monomial(&ctx, 1, ONE)).unwrap();
        let tiny = Budget { max_candidates: 10 };
        assert!(matches!(
            code_equivalent_smallscale(&ctx, &c, &c, false, &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn gl_order_formula() {
        assert_eq!(gl_order(2, 3), 168);
        assert_eq!(gl_order(2, 4), 20160);
        let ctx = f8();
        assert_eq!(general_linear_group(&ctx, 3).len() as u128, gl_order(2, 3));
    }
}
