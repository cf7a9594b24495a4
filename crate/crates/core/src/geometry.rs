//! Companion geometry: Redei-type blocking sets of PG(2,q^n), projections
//! of the canonical (rational) subgeometry of PG(n-1,q^n) onto a line, and
//! transversal-space counting — the subspace-side oracle for the
//! ZGammaL-class.

use crate::arith::gaussian_binomial;
use crate::classify::{all_polys_with_direction_set, scaling_classes, Budget};
use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx, ONE, ZERO};
use crate::projline::{
    normalize_off_infinity, profile, profile_of_poly, FqSubspace, LinearSetProfile, PointPG1,
};
use crate::qpoly::QPoly;
use serde::Serialize;
use std::collections::BTreeSet;

/// A point of PG(k-1,q^n): homogeneous coordinates normalized so the first
/// nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProjPoint {
    pub coords: Vec<FElem>,
}

impl ProjPoint {
    pub fn normalize(ctx: &FieldCtx, coords: &[FElem]) -> Option<ProjPoint> {
        let lead = coords.iter().position(|c| c.0 != 0)?;
        let inv = ctx.inv(coords[lead]);
        Some(ProjPoint {
            coords: coords.iter().map(|&c| ctx.mul(inv, c)).collect(),
        })
    }

    pub fn encoding(&self) -> Vec<u64> {
        self.coords.iter().map(|c| c.0).collect()
    }
}

// ---- F_{q^n} linear algebra helpers ------------------------------------------

/// Reduced row echelon form over F_{q^n}; returns the rank.
fn rref_fqn(ctx: &FieldCtx, rows: &mut Vec<Vec<FElem>>) -> usize {
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

fn rank_fqn(ctx: &FieldCtx, rows: &[Vec<FElem>]) -> usize {
    let mut m = rows.to_vec();
    rref_fqn(ctx, &mut m)
}

/// Inverse of a square matrix over F_{q^n}.
fn invert_fqn(ctx: &FieldCtx, m: &[Vec<FElem>]) -> Option<Vec<Vec<FElem>>> {
    let n = m.len();
    let mut rows: Vec<Vec<FElem>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            let mut unit = vec![ZERO; n];
            unit[i] = ONE;
            row.extend(unit);
            row
        })
        .collect();
    if rref_fqn(ctx, &mut rows) != n {
        return None;
    }
    Some(rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

// ---- Redei-type blocking sets -------------------------------------------------

/// The linear set of <U, w>_{F_q} in PG(2,q^n), W embedded as the plane
/// z = 0. Its size is q^n + |L_U| and the line z = 0 is an |L_U|-secant.
pub fn redei_blocking_set(
    ctx: &FieldCtx,
    u: &FqSubspace,
    w: &[FElem; 3],
) -> Result<Vec<ProjPoint>> {
    if u.dim() != ctx.n() {
        return Err(Error::WrongRank {
            expected: ctx.n(),
            got: u.dim(),
        });
    }
    if w[2].0 == 0 {
        return Err(Error::BadAffinePoint);
    }
    let mut points: BTreeSet<ProjPoint> = BTreeSet::new();
    // alpha = 0: the points of L_U on the line z = 0
    for (a, b) in u.nonzero_vectors(ctx) {
        points.insert(ProjPoint::normalize(ctx, &[a, b, ZERO]).unwrap());
    }
    let line_points = points.len() as u64;
    // alpha != 0 in F_q
    for &alpha in ctx.base_q_elements() {
        if alpha.0 == 0 {
            continue;
        }
        let aw = [
            ctx.mul(alpha, w[0]),
            ctx.mul(alpha, w[1]),
            ctx.mul(alpha, w[2]),
        ];
        let mut vecs = u.nonzero_vectors(ctx);
        vecs.push((ZERO, ZERO));
        for (a, b) in vecs {
            let v = [ctx.add(a, aw[0]), ctx.add(b, aw[1]), aw[2]];
            points.insert(ProjPoint::normalize(ctx, &v).unwrap());
        }
    }
    let out: Vec<ProjPoint> = points.into_iter().collect();
    assert_eq!(
        out.len() as u64,
        ctx.size() + line_points,
        "a Redei-type set has q^n + |L_U| points"
    );
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockingReport {
    pub size: u64,
    /// N = |B| - q^n, the secant size defining Redei lines.
    pub n_secant: u64,
    pub is_blocking: bool,
    pub redei_lines: u64,
    /// Dual coordinates of each Redei line.
    pub redei_line_duals: Vec<Vec<u64>>,
}

/// Sweep all q^{2n} + q^n + 1 lines of PG(2,q^n): blocking means every line
/// meets B; Redei lines are the N-secants.
pub fn blocking_checks(
    ctx: &FieldCtx,
    points: &[ProjPoint],
    budget: &Budget,
) -> Result<BlockingReport> {
    let size = ctx.size();
    let line_count = size * size + size + 1;
    budget.check("line sweep", line_count as u128 * (size + 1) as u128)?;
    let set: BTreeSet<&ProjPoint> = points.iter().collect();
    let n_secant = points.len() as u64 - size;

    let mut is_blocking = true;
    let mut redei_lines = 0u64;
    let mut duals = Vec::new();
    let mut sweep = |dual: [FElem; 3]| {
        let hits = line_point_count(ctx, &dual, &set);
        if hits == 0 {
            is_blocking = false;
        }
        if hits == n_secant {
            redei_lines += 1;
            duals.push(vec![dual[0].0, dual[1].0, dual[2].0]);
        }
    };
    for y in ctx.elements() {
        for z in ctx.elements() {
            sweep([ONE, y, z]);
        }
    }
    for z in ctx.elements() {
        sweep([ZERO, ONE, z]);
    }
    sweep([ZERO, ZERO, ONE]);

    Ok(BlockingReport {
        size: points.len() as u64,
        n_secant,
        is_blocking,
        redei_lines,
        redei_line_duals: duals,
    })
}

/// Points on the line l.X = 0, via a kernel basis of the dual vector.
pub fn line_points(ctx: &FieldCtx, dual: &[FElem; 3]) -> Vec<ProjPoint> {
    let pivot = dual.iter().position(|c| c.0 != 0).expect("nonzero dual");
    let mut basis: Vec<[FElem; 3]> = Vec::with_capacity(2);
    for j in 0..3 {
        if j == pivot {
            continue;
        }
        let mut v = [ZERO; 3];
        v[j] = ONE;
        v[pivot] = ctx.neg(ctx.div(dual[j], dual[pivot]));
        basis.push(v);
    }
    let mut out = Vec::with_capacity(ctx.size() as usize + 1);
    for t in ctx.elements() {
        let v = [
            ctx.add(basis[0][0], ctx.mul(t, basis[1][0])),
            ctx.add(basis[0][1], ctx.mul(t, basis[1][1])),
            ctx.add(basis[0][2], ctx.mul(t, basis[1][2])),
        ];
        out.push(ProjPoint::normalize(ctx, &v).unwrap());
    }
    out.push(ProjPoint::normalize(ctx, &basis[1]).unwrap());
    out
}

fn line_point_count(ctx: &FieldCtx, dual: &[FElem; 3], set: &BTreeSet<&ProjPoint>) -> u64 {
    line_points(ctx, dual)
        .iter()
        .filter(|p| set.contains(p))
        .count() as u64
}

// ---- projections of the canonical subgeometry ---------------------------------

/// Center and axis of a projection of the rational subgeometry of
/// PG(n-1,q^n): gamma spans an (n-3)-space disjoint from the subgeometry,
/// lambda spans the target line.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectionConfig {
    pub gamma: Vec<Vec<FElem>>,
    pub lambda: [Vec<FElem>; 2],
}

#[derive(Clone, Debug)]
pub struct ProjectionOutput {
    /// The projected set, in coordinates of the axis basis.
    pub points: Vec<PointPG1>,
    /// The F_q-subspace of lambda-coordinates defining the projected set.
    pub subspace: FqSubspace,
    pub profile: LinearSetProfile,
}

/// All (q^n - 1)/(q - 1) rational points, as normalized F_q-coordinate
/// vectors of length n.
pub fn rational_points(ctx: &FieldCtx) -> Vec<ProjPoint> {
    let n = ctx.n() as usize;
    let fq = ctx.base_q_elements().to_vec();
    let q = fq.len();
    let mut out = BTreeSet::new();
    for idx in 1..q.pow(n as u32) {
        let mut rest = idx;
        let mut v = vec![ZERO; n];
        for c in v.iter_mut() {
            *c = fq[rest % q];
            rest /= q;
        }
        out.insert(ProjPoint::normalize(ctx, &v).unwrap());
    }
    out.into_iter().collect()
}

/// Project the rational subgeometry from the center onto the axis:
/// P -> <gamma, P> ∩ lambda, computed for every rational point. The result
/// is certified to be an F_q-linear set of rank n spanning the axis by
/// exhibiting its defining subspace.
pub fn project_subgeometry(ctx: &FieldCtx, cfg: &ProjectionConfig) -> Result<ProjectionOutput> {
    let n = ctx.n() as usize;
    if n > 5 {
        return Err(Error::BudgetExceeded {
            what: "projection ambient dimension",
            needed: n as u128,
            budget: 5,
        });
    }
    if cfg.gamma.len() != n - 2
        || cfg.gamma.iter().any(|v| v.len() != n)
        || cfg.lambda.iter().any(|v| v.len() != n)
    {
        return Err(Error::BadParams(
            "projection config needs n-2 center vectors and 2 axis vectors of length n".into(),
        ));
    }
    if rank_fqn(ctx, &cfg.gamma) != n - 2 {
        return Err(Error::BadParams("center vectors are dependent".into()));
    }
    if rank_fqn(ctx, &[cfg.lambda[0].clone(), cfg.lambda[1].clone()]) != 2 {
        return Err(Error::BadParams("axis vectors are dependent".into()));
    }
    let mut stacked = cfg.gamma.clone();
    stacked.push(cfg.lambda[0].clone());
    stacked.push(cfg.lambda[1].clone());
    if rank_fqn(ctx, &stacked) != n {
        return Err(Error::CenterMeetsAxis);
    }
    // center must avoid the rational subgeometry
    for p in rational_points(ctx) {
        let mut rows = cfg.gamma.clone();
        rows.push(p.coords.clone());
        if rank_fqn(ctx, &rows) == n - 2 {
            return Err(Error::CenterMeetsSubgeometry);
        }
    }
    // Solve u = sum_i c_i gamma_i + alpha l1 + beta l2 for each rational u:
    // the transpose of the stacked basis is invertible.
    let mut at: Vec<Vec<FElem>> = vec![vec![ZERO; n]; n];
    for (i, row) in stacked.iter().enumerate() {
        for j in 0..n {
            at[j][i] = row[j];
        }
    }
    let inv = invert_fqn(ctx, &at).expect("stacked basis is invertible");
    let project = |u: &[FElem]| -> (FElem, FElem) {
        let mut alpha = ZERO;
        let mut beta = ZERO;
        for j in 0..n {
            if u[j].0 != 0 {
                alpha = ctx.add(alpha, ctx.mul(inv[n - 2][j], u[j]));
                beta = ctx.add(beta, ctx.mul(inv[n - 1][j], u[j]));
            }
        }
        (alpha, beta)
    };

    let mut points = BTreeSet::new();
    for p in rational_points(ctx) {
        let coords = project(&p.coords);
        let pt = PointPG1::normalize(ctx, coords)
            .expect("projection of a point off the center is nonzero");
        points.insert(pt);
    }
    let points: Vec<PointPG1> = points.into_iter().collect();

    // the defining subspace: images of the rational standard basis
    let mut wvecs = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![ZERO; n];
        e[i] = ONE;
        wvecs.push(project(&e));
    }
    let subspace = FqSubspace::from_w_vectors(ctx, &wvecs);
    assert_eq!(
        subspace.dim() as usize,
        n,
        "center disjoint from the subgeometry forces an injective projection"
    );
    let prof = profile(ctx, &subspace)?;
    assert_eq!(
        prof.points, points,
        "pointwise projection must agree with the subspace route"
    );
    Ok(ProjectionOutput {
        points,
        subspace,
        profile: prof,
    })
}

/// Construct a projection configuration realizing L_f, via the cyclic
/// embedding x -> (x, x^q, ..., x^(q^(n-1))) pulled back to rational
/// coordinates through the Moore matrix of the basis g^0..g^(n-1).
pub fn realize_as_projection(ctx: &FieldCtx, f: &QPoly) -> Result<ProjectionConfig> {
    let n = ctx.n() as usize;
    let prof = profile_of_poly(ctx, f);
    if prof.maxfield_d != 1 {
        return Err(Error::MaxFieldTooLarge { d: prof.maxfield_d });
    }
    let t = (1..n)
        .find(|&j| f.coeffs[j].0 != 0)
        .expect("maxfield F_q excludes scalar maps");
    let at_inv = ctx.inv(f.coeffs[t]);

    // In cyclic coordinates y, the map Phi(y) = (y_0, sum_i a_i y_i) sends
    // the embedded subgeometry onto U_f. Center = ker Phi, axis = a
    // preimage pair of (1,0), (0,1).
    let mut cyc_gamma: Vec<Vec<FElem>> = Vec::with_capacity(n - 2);
    for i in 1..n {
        if i == t {
            continue;
        }
        let mut v = vec![ZERO; n];
        v[i] = ONE;
        v[t] = ctx.neg(ctx.mul(f.coeffs[i], at_inv));
        cyc_gamma.push(v);
    }
    let mut w1 = vec![ZERO; n];
    w1[0] = ONE;
    w1[t] = ctx.neg(ctx.mul(f.coeffs[0], at_inv));
    let mut w2 = vec![ZERO; n];
    w2[t] = at_inv;

    // Moore matrix M[i][j] = (g^j)^(q^i): rational coords -> cyclic coords.
    let moore: Vec<Vec<FElem>> = (0..n)
        .map(|i| {
            ctx.qn_basis()
                .iter()
                .map(|&b| ctx.frobenius_q(b, i as u32))
                .collect()
        })
        .collect();
    let minv = invert_fqn(ctx, &moore).expect("Moore matrix of a basis is invertible");
    let pull = |v: &[FElem]| -> Vec<FElem> {
        (0..n)
            .map(|r| {
                let mut acc = ZERO;
                for j in 0..n {
                    if v[j].0 != 0 {
                        acc = ctx.add(acc, ctx.mul(minv[r][j], v[j]));
                    }
                }
                acc
            })
            .collect()
    };

    let cfg = ProjectionConfig {
        gamma: cyc_gamma.iter().map(|v| pull(v)).collect(),
        lambda: [pull(&w1), pull(&w2)],
    };
    // round-trip: the projection reproduces L_f exactly
    let out = project_subgeometry(ctx, &cfg)?;
    assert_eq!(
        out.points, prof.points,
        "constructed projection must reproduce the linear set"
    );
    Ok(cfg)
}

// ---- transversal spaces --------------------------------------------------------

/// Number of rank-n subspaces defining L_U, up to scalar multiplication:
/// the subspace-side count of the ZGammaL-class. Enumerates graphs over a
/// normalized copy of the set by a full coefficient sweep (no identity
/// pruning), so it is independent of the classification search.
pub fn transversal_spaces(ctx: &FieldCtx, u: &FqSubspace, budget: &Budget) -> Result<usize> {
    let prof = profile(ctx, u)?;
    if prof.maxfield_d != 1 {
        return Err(Error::MaxFieldTooLarge { d: prof.maxfield_d });
    }
    let points = if prof.points.binary_search(&PointPG1::Infinity).is_ok() {
        let (moved, _) = normalize_off_infinity(ctx, u, &prof.points);
        profile(ctx, &moved)?.points
    } else {
        prof.points
    };
    let dirs: Vec<FElem> = points
        .iter()
        .map(|p| match p {
            PointPG1::Affine(m) => *m,
            PointPG1::Infinity => unreachable!("normalized off infinity"),
        })
        .collect();
    let polys = all_polys_with_direction_set(ctx, &dirs, budget)?;
    Ok(scaling_classes(ctx, &polys).representatives.len())
}

/// Independent full sweep: enumerate every n-dimensional F_q-subspace of W
/// in echelon form, keep those defining the same point set, and count
/// scaling orbits. Exponential in n; intended for q = 2,3 and n <= 4.
pub fn transversal_spaces_full_sweep(
    ctx: &FieldCtx,
    u: &FqSubspace,
    budget: &Budget,
) -> Result<usize> {
    let n = ctx.n();
    let prof = profile(ctx, u)?;
    let total = gaussian_binomial(2 * n, n, ctx.q());
    budget.check("full subspace sweep", total * (ctx.q() as u128).pow(n))?;
    let target = prof.points;
    let mut survivors: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    let mut count: u128 = 0;
    enumerate_rref_subspaces(ctx, 2 * n as usize, n as usize, &mut |rows| {
        count += 1;
        let cand = FqSubspace::from_rows(ctx, rows.to_vec());
        let mut pts: BTreeSet<PointPG1> = BTreeSet::new();
        for v in cand.nonzero_vectors(ctx) {
            pts.insert(PointPG1::normalize(ctx, v).unwrap());
        }
        if pts.into_iter().collect::<Vec<_>>() == target {
            survivors.insert(encode_rows(&cand));
        }
    });
    assert_eq!(count, total, "echelon enumeration must hit every subspace");
    // count scaling orbits among survivors
    let mut remaining = survivors;
    let mut orbits = 0usize;
    while let Some(first) = remaining.iter().next().cloned() {
        orbits += 1;
        let sub = decode_rows(ctx, &first);
        for lam in ctx.nonzero_elements() {
            let scaled = sub.scale(ctx, lam);
            remaining.remove(&encode_rows(&scaled));
        }
    }
    Ok(orbits)
}

fn encode_rows(u: &FqSubspace) -> Vec<Vec<u64>> {
    u.rows()
        .iter()
        .map(|r| r.iter().map(|c| c.0).collect())
        .collect()
}

fn decode_rows(ctx: &FieldCtx, rows: &[Vec<u64>]) -> FqSubspace {
    FqSubspace::from_rows(
        ctx,
        rows.iter()
            .map(|r| r.iter().map(|&c| FElem(c)).collect())
            .collect(),
    )
}

/// Visit every dim-dimensional subspace of F_q^ncols exactly once, as the
/// rows of its reduced echelon form.
pub(crate) fn enumerate_rref_subspaces<F: FnMut(&[Vec<FElem>])>(
    ctx: &FieldCtx,
    ncols: usize,
    dim: usize,
    visit: &mut F,
) {
    let fq = ctx.base_q_elements().to_vec();
    let q = fq.len();
    // iterate pivot-column combinations in ascending lexicographic order
    let mut pivots: Vec<usize> = (0..dim).collect();
    loop {
        // free positions: (row, col) with col > pivot[row], col not a pivot
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            for c in p + 1..ncols {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let mut rows = vec![vec![ZERO; ncols]; dim];
        for (r, &p) in pivots.iter().enumerate() {
            rows[r][p] = ONE;
        }
        let total = q.pow(free.len() as u32);
        for idx in 0..total {
            let mut rest = idx;
            for &(r, c) in &free {
                rows[r][c] = fq[rest % q];
                rest /= q;
            }
            visit(&rows);
        }
        // next pivot combination
        let mut i = dim;
        let advanced = loop {
            if i == 0 {
                break false;
            }
            i -= 1;
            if pivots[i] < ncols - dim + i {
                pivots[i] += 1;
                for j in i + 1..dim {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break true;
            }
        };
        if !advanced {
            return;
        }
    }
}
