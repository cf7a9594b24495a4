//! Points of PG(1,q^n), F_q-subspaces of W = F_{q^n}^2, linear set
//! profiles with point weights, and the orthogonal complement under the
//! non-degenerate alternating form Tr(xv - yu).
//!
//! Subspaces are stored in row-reduced echelon form over F_q relative to
//! the basis g^0..g^{n-1} of F_{q^n} (2n coordinates per vector), so equal
//! subspaces have identical representations.

use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx, ONE, ZERO};
use crate::qpoly::{evaluate, QPoly};
use serde::Serialize;
use std::collections::BTreeMap;

/// A point of PG(1,q^n): either (1, m) or the point at infinity (0, 1).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PointPG1 {
    Affine(FElem),
    Infinity,
}

impl PointPG1 {
    pub fn normalize(ctx: &FieldCtx, v: (FElem, FElem)) -> Option<PointPG1> {
        if v.0 .0 != 0 {
            Some(PointPG1::Affine(ctx.div(v.1, v.0)))
        } else if v.1 .0 != 0 {
            Some(PointPG1::Infinity)
        } else {
            None
        }
    }

    pub fn representative(&self) -> (FElem, FElem) {
        match self {
            PointPG1::Affine(m) => (ONE, *m),
            PointPG1::Infinity => (ZERO, ONE),
        }
    }
}

impl std::fmt::Display for PointPG1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointPG1::Affine(m) => write!(f, "(1:{})", m),
            PointPG1::Infinity => write!(f, "inf"),
        }
    }
}

/// All q^n + 1 points of the line.
pub fn all_points(ctx: &FieldCtx) -> Vec<PointPG1> {
    let mut out: Vec<PointPG1> = ctx.elements().map(PointPG1::Affine).collect();
    out.push(PointPG1::Infinity);
    out
}

// ---- F_q linear algebra on coordinate rows ---------------------------------

/// Row reduce over F_q in place; returns the rank. Rows are kept in RREF with
/// pivots strictly increasing, zero rows removed.
pub(crate) fn rref_fq(ctx: &FieldCtx, rows: &mut Vec<Vec<FElem>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col].0 != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = ctx.inv(rows[rank][col]);
        for j in 0..ncols {
            rows[rank][j] = ctx.mul(rows[rank][j], inv);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col].0 != 0 {
                let c = rows[r][col];
                for j in 0..ncols {
                    let s = ctx.mul(c, rows[rank][j]);
                    rows[r][j] = ctx.sub(rows[r][j], s);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows.retain(|r| r.iter().any(|c| c.0 != 0));
    rank
}

/// Basis of the right kernel {v : rows * v = 0} over F_q.
pub(crate) fn kernel_basis_fq(
    ctx: &FieldCtx,
    rows: &[Vec<FElem>],
    ncols: usize,
) -> Vec<Vec<FElem>> {
    let mut m: Vec<Vec<FElem>> = rows.to_vec();
    rref_fq(ctx, &mut m);
    let mut pivot_of_col = vec![None; ncols];
    for (r, row) in m.iter().enumerate() {
        if let Some(c) = row.iter().position(|x| x.0 != 0) {
            pivot_of_col[c] = Some(r);
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![ZERO; ncols];
        v[free] = ONE;
        for (c, pr) in pivot_of_col.iter().enumerate() {
            if let Some(r) = pr {
                v[c] = ctx.neg(m[*r][free]);
            }
        }
        basis.push(v);
    }
    basis
}

/// An F_q-subspace of W = F_{q^n}^2 in canonical row-reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqSubspace {
    rows: Vec<Vec<FElem>>,
}

impl std::fmt::Debug for FqSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FqSubspace(dim {})", self.rows.len())
    }
}

impl FqSubspace {
    pub fn from_rows(ctx: &FieldCtx, mut rows: Vec<Vec<FElem>>) -> FqSubspace {
        rref_fq(ctx, &mut rows);
        FqSubspace { rows }
    }

    pub fn from_w_vectors(ctx: &FieldCtx, vecs: &[(FElem, FElem)]) -> FqSubspace {
        let rows = vecs.iter().map(|&v| w_to_row(ctx, v)).collect();
        FqSubspace::from_rows(ctx, rows)
    }

    pub fn dim(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn rows(&self) -> &[Vec<FElem>] {
        &self.rows
    }

    /// Basis as vectors of W.
    pub fn w_basis(&self, ctx: &FieldCtx) -> Vec<(FElem, FElem)> {
        self.rows.iter().map(|r| row_to_w(ctx, r)).collect()
    }

    /// All q^dim - 1 nonzero vectors, by sweeping F_q-combinations.
    pub fn nonzero_vectors(&self, ctx: &FieldCtx) -> Vec<(FElem, FElem)> {
        let basis = self.w_basis(ctx);
        let fq = ctx.base_q_elements().to_vec();
        let q = fq.len();
        let k = basis.len();
        let total = q.pow(k as u32);
        let mut out = Vec::with_capacity(total - 1);
        for idx in 1..total {
            let mut rest = idx;
            let mut acc = (ZERO, ZERO);
            for b in basis.iter().take(k) {
                let c = fq[rest % q];
                rest /= q;
                if c.0 != 0 {
                    acc.0 = ctx.add(acc.0, ctx.mul(c, b.0));
                    acc.1 = ctx.add(acc.1, ctx.mul(c, b.1));
                }
            }
            out.push(acc);
        }
        out
    }

    pub fn contains(&self, ctx: &FieldCtx, v: (FElem, FElem)) -> bool {
        let mut rows = self.rows.clone();
        rows.push(w_to_row(ctx, v));
        rref_fq(ctx, &mut rows) == self.rows.len()
    }

    /// The scaled subspace lambda*U (an F_q-subspace again).
    pub fn scale(&self, ctx: &FieldCtx, lambda: FElem) -> FqSubspace {
        let vecs: Vec<(FElem, FElem)> = self
            .w_basis(ctx)
            .into_iter()
            .map(|(a, b)| (ctx.mul(lambda, a), ctx.mul(lambda, b)))
            .collect();
        FqSubspace::from_w_vectors(ctx, &vecs)
    }

    /// Image under an additive map of W (componentwise on a basis).
    pub fn map_vectors<F>(&self, ctx: &FieldCtx, f: F) -> FqSubspace
    where
        F: Fn((FElem, FElem)) -> (FElem, FElem),
    {
        let vecs: Vec<(FElem, FElem)> = self.w_basis(ctx).into_iter().map(f).collect();
        FqSubspace::from_w_vectors(ctx, &vecs)
    }
}

pub(crate) fn w_to_row(ctx: &FieldCtx, v: (FElem, FElem)) -> Vec<FElem> {
    let mut row = ctx.to_q_coords(v.0);
    row.extend(ctx.to_q_coords(v.1));
    row
}

pub(crate) fn row_to_w(ctx: &FieldCtx, row: &[FElem]) -> (FElem, FElem) {
    let n = ctx.n() as usize;
    (ctx.from_q_coords(&row[..n]), ctx.from_q_coords(&row[n..]))
}

// ---- graphs of q-polynomials ------------------------------------------------

/// U_f = {(x, f(x)) : x in F_{q^n}}, an n-dimensional F_q-subspace.
pub fn subspace_of_poly(ctx: &FieldCtx, f: &QPoly) -> FqSubspace {
    let vecs: Vec<(FElem, FElem)> = ctx
        .qn_basis()
        .iter()
        .map(|&b| (b, evaluate(ctx, f, b)))
        .collect();
    FqSubspace::from_w_vectors(ctx, &vecs)
}

/// Recover f with U = U_f, or report that U meets the vertical line <(0,1)>.
pub fn poly_of_subspace(ctx: &FieldCtx, u: &FqSubspace) -> Result<QPoly> {
    let n = ctx.n() as usize;
    if u.dim() != ctx.n() {
        return Err(Error::WrongRank {
            expected: ctx.n(),
            got: u.dim(),
        });
    }
    let basis = u.w_basis(ctx);
    // U is a graph iff the first coordinates are F_q-independent.
    let mut first: Vec<Vec<FElem>> = basis.iter().map(|(a, _)| ctx.to_q_coords(*a)).collect();
    if rref_fq(ctx, &mut first) < n {
        return Err(Error::NotAGraph);
    }
    // Interpolate: sum_i c_i a_r^(q^i) = b_r. The Moore matrix of an
    // F_q-independent family is invertible over F_{q^n}.
    let mut m: Vec<Vec<FElem>> = basis
        .iter()
        .map(|(a, _)| (0..n as u32).map(|i| ctx.frobenius_q(*a, i)).collect())
        .collect();
    let mut rhs: Vec<FElem> = basis.iter().map(|(_, b)| *b).collect();
    // Gaussian elimination over F_{q^n}
    for col in 0..n {
        let pr = (col..n)
            .find(|&r| m[r][col].0 != 0)
            .expect("Moore matrix is invertible");
        m.swap(col, pr);
        rhs.swap(col, pr);
        let inv = ctx.inv(m[col][col]);
        for j in 0..n {
            m[col][j] = ctx.mul(m[col][j], inv);
        }
        rhs[col] = ctx.mul(rhs[col], inv);
        for r in 0..n {
            if r != col && m[r][col].0 != 0 {
                let c = m[r][col];
                for j in 0..n {
                    let s = ctx.mul(c, m[col][j]);
                    m[r][j] = ctx.sub(m[r][j], s);
                }
                let s = ctx.mul(c, rhs[col]);
                rhs[r] = ctx.sub(rhs[r], s);
            }
        }
    }
    Ok(QPoly::new(ctx, rhs))
}

// ---- weights and profiles ---------------------------------------------------

/// w_{L_U}(P) = dim_q(<z> ∩ U) for P = <z>.
pub fn point_weight(ctx: &FieldCtx, u: &FqSubspace, p: PointPG1) -> u32 {
    let z = p.representative();
    let n = ctx.n();
    // <z>_{F_{q^n}} as an F_q-subspace of W has basis z*g^i.
    let mut stacked: Vec<Vec<FElem>> = u.rows().to_vec();
    for &b in ctx.qn_basis() {
        stacked.push(w_to_row(ctx, (ctx.mul(z.0, b), ctx.mul(z.1, b))));
    }
    let sum_dim = rref_fq(ctx, &mut stacked) as u32;
    u.dim() + n - sum_dim
}

/// Point set, weights and derived data of the linear set L_U.
#[derive(Clone, Debug, Serialize)]
pub struct LinearSetProfile {
    #[serde(skip)]
    pub points: Vec<PointPG1>,
    #[serde(skip)]
    pub weights: Vec<u32>,
    pub size: u64,
    pub rank: u32,
    pub maxfield_d: u32,
    pub scattered: bool,
    pub weight_spectrum: BTreeMap<u32, u64>,
}

impl LinearSetProfile {
    pub fn weight_of(&self, p: PointPG1) -> u32 {
        match self.points.binary_search(&p) {
            Ok(i) => self.weights[i],
            Err(_) => 0,
        }
    }

    fn from_counts(ctx: &FieldCtx, counts: BTreeMap<PointPG1, u64>, rank: u32) -> LinearSetProfile {
        let q = ctx.q();
        let n = ctx.n();
        let mut points = Vec::with_capacity(counts.len());
        let mut weights = Vec::with_capacity(counts.len());
        let mut spectrum: BTreeMap<u32, u64> = BTreeMap::new();
        for (pt, c) in counts {
            // c = q^w - 1 exactly: the nonzero vectors of U on the spread
            // element of pt
            let mut w = 0u32;
            let mut acc = 1u64;
            while acc < c + 1 {
                acc *= q;
                w += 1;
            }
            assert_eq!(acc, c + 1, "vector count per point must be q^w - 1");
            points.push(pt);
            weights.push(w);
            *spectrum.entry(w).or_insert(0) += 1;
        }
        let size = points.len() as u64;
        let d = *weights.iter().min().expect("nonempty linear set");
        if n % d != 0 {
            panic!(
                "internal consistency failure: minimum weight {d} does not divide n={n}; \
                 points/weights: {:?}",
                points.iter().zip(&weights).collect::<Vec<_>>()
            );
        }
        if rank == n && d < n {
            // size bounds for a rank-n set whose maximum field of linearity
            // is F_{q^d}
            let lower = q.pow(n - d) + 1;
            let upper = (ctx.size() - 1) / (q.pow(d) - 1);
            assert!(
                size >= lower && size <= upper,
                "direction-count bounds violated: size={size}, bounds=[{lower},{upper}], d={d}"
            );
        }
        let scattered = weights.iter().all(|&w| w == 1);
        LinearSetProfile {
            points,
            weights,
            size,
            rank,
            maxfield_d: d,
            scattered,
            weight_spectrum: spectrum,
        }
    }
}

/// Profile of L_U for a rank-n subspace U, by sweeping the q^n - 1 nonzero
/// vectors of U grouped per spread element.
pub fn profile(ctx: &FieldCtx, u: &FqSubspace) -> Result<LinearSetProfile> {
    if u.dim() != ctx.n() {
        return Err(Error::WrongRank {
            expected: ctx.n(),
            got: u.dim(),
        });
    }
    let mut counts: BTreeMap<PointPG1, u64> = BTreeMap::new();
    for v in u.nonzero_vectors(ctx) {
        let pt = PointPG1::normalize(ctx, v).expect("nonzero vector");
        *counts.entry(pt).or_insert(0) += 1;
    }
    Ok(LinearSetProfile::from_counts(ctx, counts, u.dim()))
}

/// Profile of L_f via the direction multiset {f(x)/x : x != 0}; the point
/// (1, m) collects q^w - 1 values of x, and infinity never occurs.
pub fn profile_of_poly(ctx: &FieldCtx, f: &QPoly) -> LinearSetProfile {
    let mut counts: BTreeMap<PointPG1, u64> = BTreeMap::new();
    for x in ctx.nonzero_elements() {
        let m = ctx.div(evaluate(ctx, f, x), x);
        *counts.entry(PointPG1::Affine(m)).or_insert(0) += 1;
    }
    LinearSetProfile::from_counts(ctx, counts, ctx.n())
}

/// Sorted distinct directions {f(x)/x}; the affine fingerprint of L_f.
pub fn direction_set(ctx: &FieldCtx, f: &QPoly) -> Vec<FElem> {
    let mut dirs: Vec<FElem> = ctx
        .nonzero_elements()
        .map(|x| ctx.div(evaluate(ctx, f, x), x))
        .collect();
    dirs.sort_unstable();
    dirs.dedup();
    dirs
}

// ---- symplectic duality -----------------------------------------------------

/// Orthogonal complement of U under the alternating F_q-bilinear form
/// Tr_{q^n/q}(xv - yu) on W. dim U' = 2n - dim U and U'' = U.
pub fn perp(ctx: &FieldCtx, u: &FqSubspace) -> FqSubspace {
    let n = ctx.n() as usize;
    let two_n = 2 * n;
    // Gram matrix in the coordinate basis (g^i, 0), (0, g^j):
    // eta'((g^i,0),(0,g^j)) = Tr(g^(i+j)), the two diagonal blocks vanish.
    let mut tr = vec![vec![ZERO; n]; n];
    for i in 0..n {
        for j in 0..n {
            tr[i][j] = ctx.trace_q(ctx.mul(ctx.qn_basis()[i], ctx.qn_basis()[j]));
        }
    }
    // rows of U * Gram
    let mut m: Vec<Vec<FElem>> = Vec::with_capacity(u.rows().len());
    for row in u.rows() {
        let mut out = vec![ZERO; two_n];
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = ZERO;
            for i in 0..n {
                // Gram[i][n+j] = tr[i][j], Gram[n+i][j] = -tr[i][j]
                if j >= n {
                    acc = ctx.add(acc, ctx.mul(row[i], tr[i][j - n]));
                } else {
                    acc = ctx.sub(acc, ctx.mul(row[n + i], tr[i][j]));
                }
            }
            *o = acc;
        }
        m.push(out);
    }
    let basis = kernel_basis_fq(ctx, &m, two_n);
    FqSubspace::from_rows(ctx, basis)
}

// ---- normalization ----------------------------------------------------------

/// Apply, deterministically, the first projectivity (coordinate swap
/// composed with a shear, shear constants in generator-power order) whose
/// image linear set avoids the point at infinity. Returns the image
/// subspace and the shear constant used: (x, y) -> (y + c x, x).
pub fn normalize_off_infinity(
    ctx: &FieldCtx,
    u: &FqSubspace,
    points: &[PointPG1],
) -> (FqSubspace, FElem) {
    for c in ctx.elements_generator_order() {
        let bad = PointPG1::Affine(ctx.neg(c));
        if points.binary_search(&bad).is_err() {
            let mapped = u.map_vectors(ctx, |(x, y)| (ctx.add(y, ctx.mul(c, x)), x));
            return (mapped, c);
        }
    }
    unreachable!("a linear set never covers the whole line");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use crate::qpoly::{adjoint, kernel_dimension, scale_conjugate, QPoly};

    fn f8() -> FieldCtx {
        build_field(2, 1, 3, None).unwrap()
    }

    #[test]
    fn graph_subspaces_round_trip() {
        for (p, e, n) in [(2u64, 1u32, 3u32), (3, 1, 3), (2, 2, 2), (2, 1, 4)] {
            let ctx = build_field(p, e, n, None).unwrap();
            let mut lcg = 0xDEADBEEFu64;
            let mut rnd = || {
                lcg = lcg
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                FElem((lcg >> 33) % ctx.size())
            };
            for _ in 0..25 {
                let f = QPoly::new(&ctx, (0..n).map(|_| rnd()).collect());
                let u = subspace_of_poly(&ctx, &f);
                assert_eq!(u.dim(), n);
                assert_eq!(poly_of_subspace(&ctx, &u).unwrap(), f);
            }
        }
    }

    #[test]
    fn zero_and_identity_graphs() {
        let ctx = f8();
        let u0 = subspace_of_poly(&ctx, &QPoly::zero(&ctx));
        for (a, b) in u0.nonzero_vectors(&ctx) {
            assert_ne!(a, ZERO);
            assert_eq!(b, ZERO);
        }
        let u1 = subspace_of_poly(&ctx, &QPoly::identity(&ctx));
        for (a, b) in u1.nonzero_vectors(&ctx) {
            assert_eq!(a, b);
        }
        // canonical form is idempotent
        let again = FqSubspace::from_rows(&ctx, u1.rows().to_vec());
        assert_eq!(again, u1);
    }

    #[test]
    fn vertical_subspace_is_not_a_graph() {
        let ctx = f8();
        let vecs: Vec<(FElem, FElem)> = ctx.qn_basis().iter().map(|&b| (ZERO, b)).collect();
        let u = FqSubspace::from_w_vectors(&ctx, &vecs);
        assert_eq!(poly_of_subspace(&ctx, &u).unwrap_err(), Error::NotAGraph);
        let small = FqSubspace::from_w_vectors(&ctx, &vecs[..2]);
        assert!(matches!(
            poly_of_subspace(&ctx, &small).unwrap_err(),
            Error::WrongRank { .. }
        ));
    }

    #[test]
    fn scaled_graph_is_scale_conjugate() {
        let ctx = build_field(2, 1, 4, None).unwrap();
        let mut lcg = 0xABCDu64;
        let mut rnd = || {
            lcg = lcg
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            FElem((lcg >> 33) % ctx.size())
        };
        for _ in 0..20 {
            let f = QPoly::new(&ctx, (0..4).map(|_| rnd()).collect());
            let lam = loop {
                let l = rnd();
                if l.0 != 0 {
                    break l;
                }
            };
            let scaled = subspace_of_poly(&ctx, &f).scale(&ctx, lam);
            let g = poly_of_subspace(&ctx, &scaled).unwrap();
            assert_eq!(g, scale_conjugate(&ctx, &f, ctx.inv(lam)).unwrap());
        }
    }

    #[test]
    fn weights_of_named_sets() {
        let ctx = f8();
        // U_x: the single point (1,1) of full weight
        let ux = subspace_of_poly(&ctx, &QPoly::identity(&ctx));
        assert_eq!(point_weight(&ctx, &ux, PointPG1::Affine(ONE)), 3);
        for x in ctx.elements() {
            if x != ONE {
                assert_eq!(point_weight(&ctx, &ux, PointPG1::Affine(x)), 0);
            }
        }
        assert_eq!(point_weight(&ctx, &ux, PointPG1::Infinity), 0);
        // trace: kernel point has weight n-1
        let ut = subspace_of_poly(&ctx, &QPoly::trace(&ctx));
        assert_eq!(point_weight(&ctx, &ut, PointPG1::Affine(ZERO)), 2);
        // pseudoregulus: every point of the set has weight 1
        let up = subspace_of_poly(&ctx, &QPoly::monomial(&ctx, 1, ONE));
        let prof = profile(&ctx, &up).unwrap();
        for (pt, w) in prof.points.iter().zip(&prof.weights) {
            assert_eq!(*w, 1, "point {pt}");
        }
    }

    #[test]
    fn graph_weights_match_kernel_dimensions() {
        // for graphs, w(P_m) = dim ker(f - m x)
        for (p, e, n) in [(2u64, 1u32, 3u32), (3, 1, 3)] {
            let ctx = build_field(p, e, n, None).unwrap();
            let mut lcg = 0x77777u64;
            let mut rnd = || {
                lcg = lcg
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                FElem((lcg >> 33) % ctx.size())
            };
            for _ in 0..15 {
                let f = QPoly::new(&ctx, (0..n).map(|_| rnd()).collect());
                let u = subspace_of_poly(&ctx, &f);
                for m in ctx.elements() {
                    let mut shifted = f.clone();
                    shifted.coeffs[0] = ctx.sub(shifted.coeffs[0], m);
                    assert_eq!(
                        point_weight(&ctx, &u, PointPG1::Affine(m)),
                        kernel_dimension(&ctx, &shifted)
                    );
                }
                assert_eq!(point_weight(&ctx, &u, PointPG1::Infinity), 0);
            }
        }
    }

    #[test]
    fn profile_sizes_trace_and_pseudoregulus() {
        let ctx = f8();
        let t = profile(&ctx, &subspace_of_poly(&ctx, &QPoly::trace(&ctx))).unwrap();
        assert_eq!(t.size, 5); // q^2 + 1
        assert_eq!(t.maxfield_d, 1);
        assert!(!t.scattered);
        assert_eq!(t.weight_spectrum.get(&2), Some(&1));
        assert_eq!(t.weight_spectrum.get(&1), Some(&4));

        let pr = profile(
            &ctx,
            &subspace_of_poly(&ctx, &QPoly::monomial(&ctx, 1, ONE)),
        )
        .unwrap();
        assert_eq!(pr.size, 7); // q^2 + q + 1
        assert!(pr.scattered);

        let single = profile(&ctx, &subspace_of_poly(&ctx, &QPoly::identity(&ctx))).unwrap();
        assert_eq!(single.size, 1);
        assert_eq!(single.maxfield_d, 3);
    }

    #[test]
    fn profile_partition_identity_and_poly_agreement() {
        for (p, e, n) in [(2u64, 1u32, 3u32), (3, 1, 3), (2, 2, 2)] {
            let ctx = build_field(p, e, n, None).unwrap();
            let mut lcg = 0x5151u64;
            let mut rnd = || {
                lcg = lcg
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                FElem((lcg >> 33) % ctx.size())
            };
            for _ in 0..20 {
                let f = QPoly::new(&ctx, (0..n).map(|_| rnd()).collect());
                let u = subspace_of_poly(&ctx, &f);
                let prof = profile(&ctx, &u).unwrap();
                // sum over points of (q^w - 1) = q^n - 1
                let total: u64 = prof.weights.iter().map(|&w| ctx.q().pow(w) - 1).sum();
                assert_eq!(total, ctx.size() - 1);
                // the direction-multiset profile agrees with the subspace sweep
                let viapoly = profile_of_poly(&ctx, &f);
                assert_eq!(viapoly.points, prof.points);
                assert_eq!(viapoly.weights, prof.weights);
            }
        }
    }

    #[test]
    fn direction_bijection_for_graphs() {
        let ctx = f8();
        let f = QPoly::monomial(&ctx, 1, ONE);
        let prof = profile(&ctx, &subspace_of_poly(&ctx, &f)).unwrap();
        let dirs = direction_set(&ctx, &f);
        let pts: Vec<PointPG1> = dirs.into_iter().map(PointPG1::Affine).collect();
        assert_eq!(prof.points, pts);
        assert!(!prof.points.contains(&PointPG1::Infinity));
    }

    #[test]
    fn perp_duality() {
        let ctx = f8();
        // U_f^perp = U_fhat, exhaustively over all 512 q-polynomials
        for enc in 0..512u64 {
            let f = QPoly::new(
                &ctx,
                vec![FElem(enc & 7), FElem((enc >> 3) & 7), FElem(enc >> 6)],
            );
            let dual = perp(&ctx, &subspace_of_poly(&ctx, &f));
            assert_eq!(dual, subspace_of_poly(&ctx, &adjoint(&ctx, &f)));
        }
        // whole space maps to zero
        let mut all_rows: Vec<Vec<FElem>> = Vec::new();
        for i in 0..6 {
            let mut r = vec![ZERO; 6];
            r[i] = ONE;
            all_rows.push(r);
        }
        let whole = FqSubspace::from_rows(&ctx, all_rows);
        assert_eq!(perp(&ctx, &whole).dim(), 0);
    }

    #[test]
    fn perp_dimensions_and_involution_random_subspaces() {
        let ctx = build_field(2, 1, 4, None).unwrap();
        let mut lcg = 0xFACEu64;
        let mut rnd = || {
            lcg = lcg
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            lcg >> 33
        };
        for dim_target in 0..=8usize {
            for _ in 0..8 {
                let vecs: Vec<(FElem, FElem)> = (0..dim_target)
                    .map(|_| (FElem(rnd() % 16), FElem(rnd() % 16)))
                    .collect();
                let u = FqSubspace::from_w_vectors(&ctx, &vecs);
                let d = perp(&ctx, &u);
                assert_eq!(d.dim(), 8 - u.dim());
                assert_eq!(perp(&ctx, &d), u);
            }
        }
    }

    #[test]
    fn dual_set_equals_primal_set() {
        // profile(U) and profile(perp(U)) share points and weights for rank n
        let ctx = f8();
        for enc in 0..512u64 {
            let f = QPoly::new(
                &ctx,
                vec![FElem(enc & 7), FElem((enc >> 3) & 7), FElem(enc >> 6)],
            );
            let u = subspace_of_poly(&ctx, &f);
            let pu = profile(&ctx, &u).unwrap();
            let pd = profile(&ctx, &perp(&ctx, &u)).unwrap();
            assert_eq!(pu.points, pd.points);
            assert_eq!(pu.weights, pd.weights);
        }
        // also for rank-n subspaces whose set contains infinity
        let swapped =
            subspace_of_poly(&ctx, &QPoly::trace(&ctx)).map_vectors(&ctx, |(x, y)| (y, x));
        let pu = profile(&ctx, &swapped).unwrap();
        assert!(pu.points.contains(&PointPG1::Infinity));
        let pd = profile(&ctx, &perp(&ctx, &swapped)).unwrap();
        assert_eq!(pu.points, pd.points);
        assert_eq!(pu.weights, pd.weights);
    }

    #[test]
    fn weights_invariant_under_semilinear_maps() {
        let ctx = f8();
        let f = QPoly::trace(&ctx);
        let u = subspace_of_poly(&ctx, &f);
        // an invertible semilinear map: (x,y) -> (A x^sigma + B y^sigma, C x^sigma + D y^sigma)
        let (a, b, c, d, k) = (FElem(3), FElem(5), FElem(1), FElem(6), 1u32);
        assert_ne!(
            ctx.sub(ctx.mul(a, d), ctx.mul(b, c)),
            ZERO,
            "test map must be invertible"
        );
        let mapped = u.map_vectors(&ctx, |(x, y)| {
            let (xs, ys) = (ctx.frobenius_p(x, k), ctx.frobenius_p(y, k));
            (
                ctx.add(ctx.mul(a, xs), ctx.mul(b, ys)),
                ctx.add(ctx.mul(c, xs), ctx.mul(d, ys)),
            )
        });
        for pt in all_points(&ctx) {
            let (x, y) = pt.representative();
            let (xs, ys) = (ctx.frobenius_p(x, k), ctx.frobenius_p(y, k));
            let img = (
                ctx.add(ctx.mul(a, xs), ctx.mul(b, ys)),
                ctx.add(ctx.mul(c, xs), ctx.mul(d, ys)),
            );
            let img_pt = PointPG1::normalize(&ctx, img).unwrap();
            assert_eq!(
                point_weight(&ctx, &u, pt),
                point_weight(&ctx, &mapped, img_pt)
            );
        }
    }

    #[test]
    fn normalization_moves_infinity_off_the_set() {
        let ctx = f8();
        // U = <(0,1)>-heavy subspace: vertical plus a partial graph
        let mut vecs: Vec<(FElem, FElem)> = ctx.qn_basis().iter().map(|&b| (ZERO, b)).collect();
        vecs.pop();
        vecs.push((ONE, ZERO));
        let u = FqSubspace::from_w_vectors(&ctx, &vecs);
        assert_eq!(u.dim(), 3);
        let prof = profile(&ctx, &u).unwrap();
        assert!(prof.points.contains(&PointPG1::Infinity));
        let (nu, _c) = normalize_off_infinity(&ctx, &u, &prof.points);
        let nprof = profile(&ctx, &nu).unwrap();
        assert!(!nprof.points.contains(&PointPG1::Infinity));
        assert_eq!(nprof.size, prof.size);
        let spectrum_a: Vec<u64> = prof.weight_spectrum.values().cloned().collect();
        let spectrum_b: Vec<u64> = nprof.weight_spectrum.values().cloned().collect();
        assert_eq!(spectrum_a, spectrum_b);
    }
}
