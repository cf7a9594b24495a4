//! Linearized q-polynomials f(x) = sum a_i x^(q^i) over F_{q^n}.
//!
//! These are exactly the F_q-linear maps of F_{q^n}; the module provides
//! evaluation, composition mod x^(q^n) - x, the adjoint with respect to the
//! trace form Tr(xy), kernels, Dickson matrices and the scaling conjugate
//! f_lambda(x) = f(lambda x)/lambda.

use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx, ONE, ZERO};

/// Coefficient vector (a_0, ..., a_{n-1}) of f(x) = sum a_i x^(q^i).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QPoly {
    pub coeffs: Vec<FElem>,
}

impl std::fmt::Debug for QPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QPoly{:?}", self.coeffs)
    }
}

impl QPoly {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<FElem>) -> Self {
        assert_eq!(coeffs.len(), ctx.n() as usize, "coefficient vector length");
        QPoly { coeffs }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        QPoly {
            coeffs: vec![ZERO; ctx.n() as usize],
        }
    }

    /// The identity map x.
    pub fn identity(ctx: &FieldCtx) -> Self {
        let mut coeffs = vec![ZERO; ctx.n() as usize];
        coeffs[0] = ONE;
        QPoly { coeffs }
    }

    /// a*x as a q-polynomial.
    pub fn scalar(ctx: &FieldCtx, a: FElem) -> Self {
        let mut coeffs = vec![ZERO; ctx.n() as usize];
        coeffs[0] = a;
        QPoly { coeffs }
    }

    /// The single term c*x^(q^i).
    pub fn monomial(ctx: &FieldCtx, i: u32, c: FElem) -> Self {
        let mut coeffs = vec![ZERO; ctx.n() as usize];
        coeffs[(i % ctx.n()) as usize] = c;
        QPoly { coeffs }
    }

    /// The trace map: all coefficients 1.
    pub fn trace(ctx: &FieldCtx) -> Self {
        QPoly {
            coeffs: vec![ONE; ctx.n() as usize],
        }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.0 == 0)
    }

    /// Is f = a_0 x, i.e. F_{q^n}-linear?
    pub fn is_scalar_multiple_of_x(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.0 == 0)
    }

    /// Nonzero terms as (exponent index, coefficient).
    pub fn terms(&self) -> Vec<(usize, FElem)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.0 != 0)
            .map(|(i, &c)| (i, c))
            .collect()
    }

    pub fn encoding(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.0).collect()
    }
}

/// f(x) = sum a_i x^(q^i).
pub fn evaluate(ctx: &FieldCtx, f: &QPoly, x: FElem) -> FElem {
    let mut acc = ZERO;
    let mut xp = x;
    for i in 0..f.n() {
        let c = f.coeffs[i];
        if c.0 != 0 {
            acc = ctx.add(acc, ctx.mul(c, xp));
        }
        if i + 1 < f.n() {
            xp = ctx.frobenius_q(xp, 1);
        }
    }
    acc
}

/// The adjoint of f with respect to the bilinear form Tr(xy):
/// coefficient j of the adjoint is a_{(n-j) mod n}^(q^j), so that
/// Tr(y f(x)) = Tr(x fhat(y)) for all x, y.
pub fn adjoint(ctx: &FieldCtx, f: &QPoly) -> QPoly {
    let n = f.n();
    let mut coeffs = vec![ZERO; n];
    for (j, c) in coeffs.iter_mut().enumerate() {
        let src = (n - j) % n;
        *c = ctx.frobenius_q(f.coeffs[src], j as u32);
    }
    QPoly { coeffs }
}

/// f o g reduced mod x^(q^n) - x: coefficient c_k = sum_{i+j=k mod n} a_i b_j^(q^i).
pub fn compose(ctx: &FieldCtx, f: &QPoly, g: &QPoly) -> QPoly {
    let n = f.n();
    let mut coeffs = vec![ZERO; n];
    for (i, &a) in f.coeffs.iter().enumerate() {
        if a.0 == 0 {
            continue;
        }
        for (j, &b) in g.coeffs.iter().enumerate() {
            if b.0 == 0 {
                continue;
            }
            let k = (i + j) % n;
            coeffs[k] = ctx.add(coeffs[k], ctx.mul(a, ctx.frobenius_q(b, i as u32)));
        }
    }
    QPoly { coeffs }
}

/// Sparse composition on (index, coefficient) term lists; same reduction as
/// `compose` but O(#terms^2) for the witness-search hot loop.
pub fn compose_terms(
    ctx: &FieldCtx,
    f_terms: &[(usize, FElem)],
    g_terms: &[(usize, FElem)],
    n: usize,
) -> Vec<FElem> {
    let mut coeffs = vec![ZERO; n];
    for &(i, a) in f_terms {
        for &(j, b) in g_terms {
            let k = (i + j) % n;
            coeffs[k] = ctx.add(coeffs[k], ctx.mul(a, ctx.frobenius_q(b, i as u32)));
        }
    }
    coeffs
}

/// dim over F_q of ker f, via the F_p matrix of f on F_{q^n} = F_p^(en).
pub fn kernel_dimension(ctx: &FieldCtx, f: &QPoly) -> u32 {
    let en = ctx.en() as usize;
    let p = ctx.p();
    // column k = digits of f(basis element with encoding p^k)
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(en);
    let mut basis_enc = 1u64;
    for _ in 0..en {
        let v = evaluate(ctx, f, FElem(basis_enc));
        let mut digits = Vec::with_capacity(en);
        let mut x = v.0;
        for _ in 0..en {
            digits.push(x % p);
            x /= p;
        }
        cols.push(digits);
        basis_enc *= p;
    }
    // row reduce the en x en matrix over F_p
    let mut rows: Vec<Vec<u64>> = (0..en)
        .map(|r| (0..en).map(|c| cols[c][r]).collect())
        .collect();
    let mut rank = 0usize;
    for col in 0..en {
        let Some(pr) = (rank..en).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = crate::arith::mod_inverse(rows[rank][col], p).unwrap();
        for j in 0..en {
            rows[rank][j] = rows[rank][j] * inv % p;
        }
        for r in 0..en {
            if r != rank && rows[r][col] != 0 {
                let c = rows[r][col];
                for j in 0..en {
                    rows[r][j] = (rows[r][j] + (p - c) * rows[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    let ker_p = (en - rank) as u32;
    assert_eq!(ker_p % ctx.e(), 0, "kernel must be an F_q-space");
    ker_p / ctx.e()
}

/// n x n Dickson matrix over F_{q^n}: entry (i, j) = a_{(j-i) mod n}^(q^i).
/// With this convention D_{f o g} = D_f * D_g, and transposition realizes
/// the adjoint.
#[derive(Clone, PartialEq, Eq)]
pub struct DicksonMatrix {
    pub n: usize,
    /// row-major entries
    pub entries: Vec<FElem>,
}

impl std::fmt::Debug for DicksonMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DicksonMatrix {}x{}:", self.n, self.n)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", &self.entries[i * self.n..(i + 1) * self.n])?;
        }
        Ok(())
    }
}

impl DicksonMatrix {
    pub fn at(&self, i: usize, j: usize) -> FElem {
        self.entries[i * self.n + j]
    }

    pub fn transpose(&self) -> DicksonMatrix {
        let n = self.n;
        let mut entries = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        DicksonMatrix { n, entries }
    }

    pub fn matmul(&self, ctx: &FieldCtx, other: &DicksonMatrix) -> DicksonMatrix {
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
        DicksonMatrix { n, entries }
    }

    /// Rank over F_{q^n} by Gaussian elimination (exact in a finite field).
    pub fn rank(&self, ctx: &FieldCtx) -> u32 {
        let n = self.n;
        let mut rows: Vec<Vec<FElem>> = (0..n)
            .map(|i| self.entries[i * n..(i + 1) * n].to_vec())
            .collect();
        let mut rank = 0usize;
        for col in 0..n {
            let Some(pr) = (rank..n).find(|&r| rows[r][col].0 != 0) else {
                continue;
            };
            rows.swap(rank, pr);
            let inv = ctx.inv(rows[rank][col]);
            for j in 0..n {
                rows[rank][j] = ctx.mul(rows[rank][j], inv);
            }
            for r in 0..n {
                if r != rank && rows[r][col].0 != 0 {
                    let c = rows[r][col];
                    for j in 0..n {
                        rows[r][j] = ctx.sub(rows[r][j], ctx.mul(c, rows[rank][j]));
                    }
                }
            }
            rank += 1;
        }
        rank as u32
    }
}

pub fn dickson_matrix(ctx: &FieldCtx, f: &QPoly) -> DicksonMatrix {
    let n = f.n();
    let mut entries = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            let idx = (j + n - i) % n;
            entries[i * n + j] = ctx.frobenius_q(f.coeffs[idx], i as u32);
        }
    }
    DicksonMatrix { n, entries }
}

/// The scaling conjugate f_lambda(x) = f(lambda x)/lambda, with coefficient
/// i equal to a_i lambda^(q^i - 1). It satisfies lambda * U_{f_lambda} = U_f.
pub fn scale_conjugate(ctx: &FieldCtx, f: &QPoly, lambda: FElem) -> Result<QPoly> {
    if lambda.0 == 0 {
        return Err(Error::ZeroScalar);
    }
    let n = f.n();
    let linv = ctx.inv(lambda);
    let mut coeffs = vec![ZERO; n];
    for i in 0..n {
        if f.coeffs[i].0 == 0 {
            continue;
        }
        // lambda^(q^i - 1) = lambda^(q^i) * lambda^(-1)
        let factor = ctx.mul(ctx.frobenius_q(lambda, i as u32), linv);
        coeffs[i] = ctx.mul(f.coeffs[i], factor);
    }
    Ok(QPoly { coeffs })
}

/// Twist the coefficients by sigma = p^k: the q-polynomial f^(sigma) with
/// f(x)^sigma = f^(sigma)(x^sigma).
pub fn sigma_twist(ctx: &FieldCtx, f: &QPoly, k: u32) -> QPoly {
    QPoly {
        coeffs: f.coeffs.iter().map(|&c| ctx.frobenius_p(c, k)).collect(),
    }
}

/// Parse "a0,a1,...,a(n-1)" with base-p integer encodings.
pub fn parse_coeffs(ctx: &FieldCtx, s: &str) -> Result<QPoly> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != ctx.n() as usize {
        return Err(Error::Parse(format!(
            "expected {} coefficients, got {}",
            ctx.n(),
            parts.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(parts.len());
    for p in parts {
        let enc: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient {p:?}")))?;
        coeffs.push(ctx.elem(enc)?);
    }
    Ok(QPoly { coeffs })
}

pub fn format_coeffs(f: &QPoly) -> String {
    f.coeffs
        .iter()
        .map(|c| c.0.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn f8() -> FieldCtx {
        build_field(2, 1, 3, None).unwrap()
    }

    #[test]
    fn evaluate_basics() {
        let ctx = f8();
        let id = QPoly::identity(&ctx);
        for x in ctx.elements() {
            assert_eq!(evaluate(&ctx, &id, x), x);
        }
        // trace at 1 with n = 3 odd in char 2
        let tr = QPoly::trace(&ctx);
        assert_eq!(evaluate(&ctx, &tr, ONE), ONE);
        for x in ctx.elements() {
            assert_eq!(evaluate(&ctx, &tr, x), ctx.trace_q(x));
        }
        // delta*x^q + x^(q^(n-1)) at x = 1 gives delta + 1
        let delta = ctx.generator();
        let mut f = QPoly::zero(&ctx);
        f.coeffs[1] = delta;
        f.coeffs[2] = ONE;
        assert_eq!(evaluate(&ctx, &f, ONE), ctx.add(delta, ONE));
    }

    #[test]
    fn evaluate_is_additive_and_q_homogeneous() {
        let ctx = build_field(3, 1, 3, None).unwrap();
        let f = QPoly::new(&ctx, vec![FElem(5), FElem(11), FElem(2)]);
        for x in ctx.elements().step_by(2) {
            for y in ctx.elements().step_by(3) {
                assert_eq!(
                    evaluate(&ctx, &f, ctx.add(x, y)),
                    ctx.add(evaluate(&ctx, &f, x), evaluate(&ctx, &f, y))
                );
            }
            for &c in ctx.base_q_elements() {
                assert_eq!(
                    evaluate(&ctx, &f, ctx.mul(c, x)),
                    ctx.mul(c, evaluate(&ctx, &f, x))
                );
            }
        }
    }

    #[test]
    fn adjoint_coefficients() {
        let ctx = f8();
        // x^q <-> x^(q^(n-1))
        let xq = QPoly::monomial(&ctx, 1, ONE);
        assert_eq!(adjoint(&ctx, &xq), QPoly::monomial(&ctx, 2, ONE));
        // a0 x is self-adjoint
        let sc = QPoly::scalar(&ctx, ctx.generator());
        assert_eq!(adjoint(&ctx, &sc), sc);
        // delta x^q + x^(q^(n-1)) -> x^q + delta^(q^(n-1)) x^(q^(n-1))
        let delta = ctx.generator();
        let mut f = QPoly::zero(&ctx);
        f.coeffs[1] = delta;
        f.coeffs[2] = ONE;
        let fh = adjoint(&ctx, &f);
        assert_eq!(fh.coeffs[1], ONE);
        assert_eq!(fh.coeffs[2], ctx.frobenius_q(delta, 2));
        assert_eq!(fh.coeffs[0], ZERO);
    }

    #[test]
    fn adjoint_is_involution_and_respects_trace_form() {
        for (p, e, n) in [(2u64, 1u32, 3u32), (3, 1, 3), (2, 1, 4), (2, 2, 2)] {
            let ctx = build_field(p, e, n, None).unwrap();
            let mut lcg = 0x2545F4914F6CDD1Du64;
            let mut rnd = || {
                lcg = lcg
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                FElem((lcg >> 33) % ctx.size())
            };
            for _ in 0..10 {
                let f = QPoly::new(&ctx, (0..n).map(|_| rnd()).collect());
                let fh = adjoint(&ctx, &f);
                assert_eq!(adjoint(&ctx, &fh), f);
                // Tr(y f(x)) = Tr(x fhat(y)), exhaustively (fields here < 2^12)
                for x in ctx.elements() {
                    for y in ctx.elements() {
                        let lhs = ctx.trace_q(ctx.mul(y, evaluate(&ctx, &f, x)));
                        let rhs = ctx.trace_q(ctx.mul(x, evaluate(&ctx, &fh, y)));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn compose_matches_pointwise_evaluation() {
        let ctx = f8();
        // identities
        let id = QPoly::identity(&ctx);
        let xq = QPoly::monomial(&ctx, 1, ONE);
        assert_eq!(compose(&ctx, &xq, &id), xq);
        assert_eq!(compose(&ctx, &xq, &xq), QPoly::monomial(&ctx, 2, ONE));
        assert_eq!(
            compose(&ctx, &xq, &QPoly::monomial(&ctx, 2, ONE)),
            QPoly::identity(&ctx)
        );
        // exhaustive pointwise agreement over all f, g for F_8
        for fe in 0..512u64 {
            let f = QPoly::new(
                &ctx,
                vec![FElem(fe & 7), FElem((fe >> 3) & 7), FElem(fe >> 6)],
            );
            let g = QPoly::new(&ctx, vec![FElem(3), FElem(5), FElem(6)]);
            let fg = compose(&ctx, &f, &g);
            for x in ctx.elements() {
                assert_eq!(
                    evaluate(&ctx, &fg, x),
                    evaluate(&ctx, &f, evaluate(&ctx, &g, x))
                );
            }
        }
    }

    #[test]
    fn kernel_dimensions() {
        let ctx = f8();
        assert_eq!(kernel_dimension(&ctx, &QPoly::identity(&ctx)), 0);
        assert_eq!(kernel_dimension(&ctx, &QPoly::trace(&ctx)), 2);
        // x^q - x has kernel F_q
        let mut f = QPoly::monomial(&ctx, 1, ONE);
        f.coeffs[0] = ctx.neg(ONE);
        assert_eq!(kernel_dimension(&ctx, &f), 1);
        assert_eq!(kernel_dimension(&ctx, &QPoly::zero(&ctx)), 3);
        // cross-check against brute-force kernels, also over F_9 (e = 2 tower)
        for (p, e, n) in [(2u64, 1u32, 3u32), (2, 2, 2)] {
            let ctx = build_field(p, e, n, None).unwrap();
            for enc in 0..ctx.size().pow(2) {
                let f = QPoly::new(
                    &ctx,
                    (0..n as u64)
                        .map(|i| FElem(enc / ctx.size().pow(i as u32) % ctx.size()))
                        .collect(),
                );
                let brute = ctx
                    .elements()
                    .filter(|&x| evaluate(&ctx, &f, x) == ZERO)
                    .count() as u64;
                assert_eq!(ctx.q().pow(kernel_dimension(&ctx, &f)), brute);
            }
        }
    }

    #[test]
    fn dickson_matrix_basics() {
        let ctx = f8();
        let id = dickson_matrix(&ctx, &QPoly::identity(&ctx));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(id.at(i, j), if i == j { ONE } else { ZERO });
            }
        }
        // trace over F_8: all-ones matrix of rank 1
        let tr = dickson_matrix(&ctx, &QPoly::trace(&ctx));
        assert!(tr.entries.iter().all(|&c| c == ONE));
        assert_eq!(tr.rank(&ctx), 1);
        // transpose identity
        let xq = QPoly::monomial(&ctx, 1, ONE);
        assert_eq!(
            dickson_matrix(&ctx, &xq).transpose(),
            dickson_matrix(&ctx, &adjoint(&ctx, &xq))
        );
    }

    #[test]
    fn dickson_rank_complements_kernel_and_multiplies() {
        for (p, e, n) in [(2u64, 1u32, 3u32), (3, 1, 3), (2, 2, 2)] {
            let ctx = build_field(p, e, n, None).unwrap();
            let mut lcg = 0x9E3779B97F4A7C15u64;
            let mut rnd = || {
                lcg = lcg
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                FElem((lcg >> 33) % ctx.size())
            };
            for _ in 0..40 {
                let f = QPoly::new(&ctx, (0..n).map(|_| rnd()).collect());
                let g = QPoly::new(&ctx, (0..n).map(|_| rnd()).collect());
                let df = dickson_matrix(&ctx, &f);
                assert_eq!(df.rank(&ctx) + kernel_dimension(&ctx, &f), ctx.n());
                assert_eq!(df.transpose(), dickson_matrix(&ctx, &adjoint(&ctx, &f)));
                let dg = dickson_matrix(&ctx, &g);
                let dfg = dickson_matrix(&ctx, &compose(&ctx, &f, &g));
                assert_eq!(df.matmul(&ctx, &dg), dfg);
            }
        }
    }

    #[test]
    fn scale_conjugate_properties() {
        let ctx = f8();
        let delta = ctx.generator();
        let mut f = QPoly::zero(&ctx);
        f.coeffs[1] = delta;
        f.coeffs[2] = ONE;
        assert_eq!(scale_conjugate(&ctx, &f, ONE).unwrap(), f);
        assert_eq!(
            scale_conjugate(&ctx, &f, ZERO).unwrap_err(),
            Error::ZeroScalar
        );
        // x^q picks up lambda^(q-1)
        let xq = QPoly::monomial(&ctx, 1, ONE);
        for lam in ctx.nonzero_elements() {
            let s = scale_conjugate(&ctx, &xq, lam).unwrap();
            assert_eq!(s.coeffs[1], ctx.pow(lam, (ctx.q() - 1) as u128));
            // pointwise: f_lambda(x) = f(lambda x) / lambda
            for x in ctx.elements() {
                assert_eq!(
                    evaluate(&ctx, &s, x),
                    ctx.div(evaluate(&ctx, &xq, ctx.mul(lam, x)), lam)
                );
            }
        }
    }

    #[test]
    fn trace_family_from_norm_one_scalars() {
        // f(x) = sum lambda^(q^i - 1) x^(q^i) is the scaling conjugate of the
        // trace map; its coefficient vector is (1, u, u^(1+q), ...) with
        // u = lambda^(q-1) of norm 1.
        let ctx = build_field(3, 1, 3, None).unwrap();
        for lam in ctx.nonzero_elements() {
            let s = scale_conjugate(&ctx, &QPoly::trace(&ctx), lam).unwrap();
            let u = ctx.pow(lam, (ctx.q() - 1) as u128);
            assert_eq!(ctx.rel_norm(u), ONE);
            let mut expect = ONE;
            for i in 0..3usize {
                assert_eq!(s.coeffs[i], expect);
                // u^(1+q+...+q^i) = u^(1+...+q^(i-1)) * u^(q^i)
                expect = ctx.mul(expect, ctx.pow(u, ctx.q().pow(i as u32) as u128));
            }
        }
    }

    #[test]
    fn sparse_compose_agrees_with_dense() {
        let ctx = build_field(5, 1, 2, None).unwrap();
        let f = QPoly::new(&ctx, vec![FElem(7), FElem(13)]);
        let g = QPoly::new(&ctx, vec![FElem(0), FElem(21)]);
        let dense = compose(&ctx, &f, &g);
        let sparse = compose_terms(&ctx, &f.terms(), &g.terms(), 2);
        assert_eq!(dense.coeffs, sparse);
    }

    #[test]
    fn coeff_parsing_round_trips() {
        let ctx = f8();
        let f = parse_coeffs(&ctx, "0,1,0").unwrap();
        assert_eq!(f, QPoly::monomial(&ctx, 1, ONE));
        assert_eq!(format_coeffs(&f), "0,1,0");
        assert!(parse_coeffs(&ctx, "0,1").is_err());
        assert!(parse_coeffs(&ctx, "0,1,9").is_err());
    }
}
