//! Elimination theory along a plane algebraic curve given by a determinantal
//! representation: Vandermonde vectors, the blown-up space W_n and principal
//! subspace V_n, generalized Bezout matrices, basepoint reduction, and
//! image-curve determinantal representations.
//!
//! Layout conventions: W_n coordinates are blocks of size m indexed by the
//! degree-(n-1) monomials in graded-lex order with x0 > x1 > x2 (see
//! [`MonomialIndex`]). The blown Bezout matrix uses the validated pairing
//! B = beta12 (x) D0 + beta20 (x) D1 + beta10 (x) D2.

use crate::error::{Error, Result};
use crate::matrix::{
    congruence_restrict, kron, rank_kernel, solve, Matrix, Subspace, DEFAULT_TOL,
};
use crate::pencil::{pencil_det_poly, pencil_det_trivariate};
use crate::poly::{MonomialIndex, MultiPoly};
use crate::roots::{poly_roots, promote_root, rationalize};
use crate::scalar::Scalar;
use num::{BigRational, Zero};
use rand::Rng;

const RATIONALIZE_MAX_DEN: u64 = 1 << 24;

/// A plane curve Delta(x0,x1,x2) = det(x0 D0 + x1 D1 - x2 D2) with hermitian
/// D's; Delta is cached.
#[derive(Clone, Debug)]
pub struct DetRep {
    pub m: usize,
    pub d0: Matrix,
    pub d1: Matrix,
    pub d2: Matrix,
    pub delta: MultiPoly,
}

impl DetRep {
    pub fn new(d0: Matrix, d1: Matrix, d2: Matrix) -> Result<Self> {
        let m = d0.rows();
        if d1.rows() != m || d2.rows() != m {
            return Err(Error::Dimension("determinantal representation sizes differ".into()));
        }
        d0.check_hermitian(DEFAULT_TOL)?;
        d1.check_hermitian(DEFAULT_TOL)?;
        d2.check_hermitian(DEFAULT_TOL)?;
        let delta = pencil_det_trivariate(&d0, &d1, &d2)?;
        if delta.is_zero() {
            return Err(Error::Input("determinant polynomial is identically zero".into()));
        }
        Ok(DetRep { m, d0, d1, d2, delta })
    }

    /// The conic x0^2 - x1^2 - x2^2.
    pub fn conic() -> Self {
        DetRep::new(
            Matrix::identity(2),
            Matrix::from_int_rows(&[&[1, 0], &[0, -1]]),
            Matrix::from_int_rows(&[&[0, 1], &[1, 0]]),
        )
        .unwrap()
    }

    pub fn pencil_at(&self, x: &[Scalar; 3]) -> Matrix {
        self.d0.scale(&x[0]).add(&self.d1.scale(&x[1])).sub(&self.d2.scale(&x[2]))
    }
}

/// A point of the curve together with a kernel vector of the pencil there.
#[derive(Clone, Debug)]
pub struct CurvePoint {
    pub x: [Scalar; 3],
    pub e: Matrix,
    pub exact: bool,
}

impl CurvePoint {
    pub fn new(dr: &DetRep, x: [Scalar; 3], e: Matrix, tol: f64) -> Result<Self> {
        if e.rows() != dr.m || e.cols() != 1 || e.is_zero() {
            return Err(Error::Input("kernel vector has wrong shape or is zero".into()));
        }
        let exact = x.iter().all(Scalar::is_exact) && e.is_exact();
        let r = dr.pencil_at(&x).mul(&e);
        if exact {
            if !r.is_zero() {
                return Err(Error::Input("pencil does not annihilate e at the point".into()));
            }
        } else {
            let scale = dr.pencil_at(&x).max_abs().max(1.0) * e.max_abs().max(1.0);
            if r.max_abs() > tol * scale {
                return Err(Error::Input("pencil residual at the point exceeds tolerance".into()));
            }
        }
        Ok(CurvePoint { x, e, exact })
    }
}

/// Vandermonde vector (x^i e)_{|i|=n-1} in W_n.
pub fn vandermonde_vector(pt: &CurvePoint, n: u32) -> Matrix {
    let idx = MonomialIndex::new(n - 1);
    let blocks: Vec<Matrix> = idx
        .triples()
        .into_iter()
        .map(|t| {
            let c = &(&pt.x[0].pow(t[0]) * &pt.x[1].pow(t[1])) * &pt.x[2].pow(t[2]);
            pt.e.scale(&c)
        })
        .collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    Matrix::vstack(&refs)
}

/// The principal subspace V_n of W_n, cut out by the shift constraints
/// D0 w_{j+e0} + D1 w_{j+e1} - D2 w_{j+e2} = 0 over |j| = n-2.
#[derive(Clone, Debug)]
pub struct PrincipalSubspace {
    pub n: u32,
    pub subspace: Subspace,
}

impl PrincipalSubspace {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }
}

pub fn principal_subspace(dr: &DetRep, n: u32) -> PrincipalSubspace {
    let m = dr.m;
    if n == 1 {
        return PrincipalSubspace { n, subspace: Subspace::full(m) };
    }
    let idx = MonomialIndex::new(n - 1);
    let big_n = idx.len();
    let rows_idx = MonomialIndex::new(n - 2);
    let mut rows: Vec<Matrix> = Vec::with_capacity(rows_idx.len());
    for j in rows_idx.triples() {
        let mut block = Matrix::zeros(m, big_n * m);
        for (d, shift, sign) in [
            (&dr.d0, [1, 0, 0], 1i64),
            (&dr.d1, [0, 1, 0], 1),
            (&dr.d2, [0, 0, 1], -1),
        ] {
            let t = [j[0] + shift[0], j[1] + shift[1], j[2] + shift[2]];
            let c = idx.position(t).expect("shifted index has degree n-1");
            let s = Scalar::from_int(sign);
            for a in 0..m {
                for b in 0..m {
                    let v = block.get(a, c * m + b) + &(d.get(a, b) * &s);
                    block.set(a, c * m + b, v);
                }
            }
        }
        rows.push(block);
    }
    let refs: Vec<&Matrix> = rows.iter().collect();
    let stacked = Matrix::vstack(&refs);
    let info = rank_kernel(&stacked, DEFAULT_TOL);
    PrincipalSubspace { n, subspace: info.kernel }
}

/// Points of the curve on the pencil line with fixed (x1, x2); rational
/// roots of the pencil polynomial are promoted to exact points.
pub fn pencil_points(dr: &DetRep, x1: &Scalar, x2: &Scalar, tol: f64) -> Result<Vec<CurvePoint>> {
    let poly = pencil_det_poly(&dr.d0, &dr.d1, &dr.d2, x1, x2);
    if poly.is_zero() {
        return Err(Error::Input("pencil determinant polynomial is identically zero".into()));
    }
    if poly.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let roots = poly_roots(&poly, tol)?;
    let mut out = Vec::new();
    for root in roots {
        let promoted = if x1.is_exact() && x2.is_exact() {
            promote_root(&poly, root.value, RATIONALIZE_MAX_DEN)
        } else {
            None
        };
        match promoted {
            Some(x0) => {
                let x = [x0, x1.clone(), x2.clone()];
                let info = rank_kernel(&dr.pencil_at(&x), tol);
                for k in 0..info.kernel.dim() {
                    let e = info.kernel.basis().column(k);
                    out.push(CurvePoint { x: x.clone(), e, exact: true });
                }
            }
            None => {
                let x = [
                    Scalar::from_c64(root.value),
                    Scalar::from_c64(x1.to_c64()),
                    Scalar::from_c64(x2.to_c64()),
                ];
                let info = rank_kernel(&dr.pencil_at(&x), tol);
                for k in 0..info.kernel.dim() {
                    let e = info.kernel.basis().column(k);
                    out.push(CurvePoint { x: x.clone(), e, exact: false });
                }
            }
        }
    }
    Ok(out)
}

/// Fixture generator: solve the linear constraints (x0 D0 + x1 D1 - x2 D2)e = 0
/// on hermitian unknowns and sample a random rational solution with
/// nondegenerate determinant.
pub fn detrep_through_points(
    points: &[([Scalar; 3], Matrix)],
    m: usize,
    rng: &mut impl Rng,
) -> Result<DetRep> {
    // real parametrization of a hermitian matrix: m diagonal entries plus
    // (re, im) for each i<j pair
    let per_matrix = m * m;
    let nunk = 3 * per_matrix;
    let coeff_of = |mat: usize, a: usize, b: usize| -> Vec<(usize, Scalar)> {
        // entry (a,b) of hermitian matrix `mat` as a Gaussian-rational linear
        // combination of real unknowns
        let base = mat * per_matrix;
        if a == b {
            vec![(base + a, Scalar::one())]
        } else {
            let (lo, hi, conjugate) = if a < b { (a, b, false) } else { (b, a, true) };
            let off = m + 2 * pair_index(lo, hi, m);
            let im = if conjugate { Scalar::gaussian_int(0, -1) } else { Scalar::i() };
            vec![(base + off, Scalar::one()), (base + off + 1, im)]
        }
    };
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (x, e) in points {
        if !x.iter().all(Scalar::is_exact) || !e.is_exact() {
            return Err(Error::Input("prescribed points must be exact".into()));
        }
        let signs = [x[0].clone(), x[1].clone(), -&x[2]];
        for a in 0..m {
            let mut re_row = vec![Scalar::zero(); nunk];
            let mut im_row = vec![Scalar::zero(); nunk];
            for b in 0..m {
                for (mat, s) in signs.iter().enumerate() {
                    let f = s * e.get(b, 0);
                    for (u, c) in coeff_of(mat, a, b) {
                        let g = &c * &f;
                        let (gr, gi) = g.exact_parts().unwrap();
                        re_row[u] = &re_row[u] + &Scalar::from_rational(gr);
                        im_row[u] = &im_row[u] + &Scalar::from_rational(gi);
                    }
                }
            }
            rows.push(re_row);
            rows.push(im_row);
        }
    }
    let kernel = if rows.is_empty() {
        Subspace::full(nunk)
    } else {
        rank_kernel(&Matrix::from_rows(rows), DEFAULT_TOL).kernel
    };
    if kernel.dim() == 0 {
        return Err(Error::Infeasible("point prescription admits only the zero pencil".into()));
    }
    for _ in 0..20 {
        let coeffs: Vec<Scalar> =
            (0..kernel.dim()).map(|_| Scalar::from_int(rng.gen_range(-9i64..=9))).collect();
        let mut u = vec![Scalar::zero(); nunk];
        for (k, c) in coeffs.iter().enumerate() {
            for r in 0..nunk {
                u[r] = &u[r] + &(kernel.basis().get(r, k) * c);
            }
        }
        let build = |mat: usize| -> Matrix {
            Matrix::from_fn(m, m, |a, b| {
                coeff_of(mat, a, b)
                    .into_iter()
                    .map(|(idx, c)| &c * &u[idx])
                    .fold(Scalar::zero(), |acc, v| &acc + &v)
            })
        };
        let (d0, d1, d2) = (build(0), build(1), build(2));
        if let Ok(dr) = DetRep::new(d0, d1, d2) {
            // verify prescriptions exactly
            let ok = points.iter().all(|(x, e)| dr.pencil_at(x).mul(e).is_zero());
            if ok {
                return Ok(dr);
            }
        }
    }
    Err(Error::Infeasible(
        "all sampled solutions give an identically zero determinant".into(),
    ))
}

fn pair_index(i: usize, j: usize, m: usize) -> usize {
    // position of (i,j), i<j, in row-major upper-triangle order
    (0..i).map(|r| m - r - 1).sum::<usize>() + (j - i - 1)
}

/// The three symmetric matrices of the bracket decomposition
/// p(x)q(y) - q(x)p(y) = sum_i,j b10 x^i (x1 y0 - x0 y1) y^j
///                     + b20 x^i (x2 y0 - x0 y2) y^j
///                     + b12 x^i (x1 y2 - x2 y1) y^j.
#[derive(Clone, Debug)]
pub struct BetaTriple {
    pub n: u32,
    pub b10: Matrix,
    pub b20: Matrix,
    pub b12: Matrix,
}

type BiKey = ([u32; 3], [u32; 3]);

fn bracket_terms(g: usize) -> [([u32; 3], [u32; 3], i64); 2] {
    match g {
        0 => [([0, 1, 0], [1, 0, 0], 1), ([1, 0, 0], [0, 1, 0], -1)], // x1 y0 - x0 y1
        1 => [([0, 0, 1], [1, 0, 0], 1), ([1, 0, 0], [0, 0, 1], -1)], // x2 y0 - x0 y2
        _ => [([0, 1, 0], [0, 0, 1], 1), ([0, 0, 1], [0, 1, 0], -1)], // x1 y2 - x2 y1
    }
}

fn add_key(
    map: &mut std::collections::BTreeMap<BiKey, Scalar>,
    key: BiKey,
    v: Scalar,
) {
    let e = map.entry(key).or_insert_with(Scalar::zero);
    *e = &*e + &v;
    if e.is_zero() {
        map.remove(&key);
    }
}

fn bihom_difference(p: &MultiPoly, q: &MultiPoly) -> std::collections::BTreeMap<BiKey, Scalar> {
    // p(x)q(y) - q(x)p(y)
    let mut map = std::collections::BTreeMap::new();
    let terms = |f: &MultiPoly| -> Vec<([u32; 3], Scalar)> {
        f.terms().map(|(e, c)| ([e[0], e[1], e[2]], c.clone())).collect()
    };
    for (ea, ca) in terms(p) {
        for (eb, cb) in terms(q) {
            add_key(&mut map, (ea, eb), &ca * &cb);
            add_key(&mut map, (eb, ea), -&(&ca * &cb));
        }
    }
    map
}

fn expand_beta(betas: &BetaTriple) -> std::collections::BTreeMap<BiKey, Scalar> {
    let idx = MonomialIndex::new(betas.n - 1);
    let mons = idx.triples();
    let mut map = std::collections::BTreeMap::new();
    for (g, beta) in [(0usize, &betas.b10), (1, &betas.b20), (2, &betas.b12)] {
        for a in 0..mons.len() {
            for b in 0..mons.len() {
                let c = beta.get(a, b);
                if c.is_zero() {
                    continue;
                }
                for (xe, ye, s) in bracket_terms(g) {
                    let kx = [mons[a][0] + xe[0], mons[a][1] + xe[1], mons[a][2] + xe[2]];
                    let ky = [mons[b][0] + ye[0], mons[b][1] + ye[1], mons[b][2] + ye[2]];
                    add_key(&mut map, (kx, ky), c * &Scalar::from_int(s));
                }
            }
        }
    }
    map
}

/// Canonical (deterministic minimum-support) bracket decomposition of a pair
/// of degree-n homogeneous polynomials.
pub fn bezout_decomposition(p: &MultiPoly, q: &MultiPoly, n: u32) -> Result<BetaTriple> {
    for f in [p, q] {
        if f.nvars() != 3 || !f.is_homogeneous(n) {
            return Err(Error::Input(format!(
                "bezout_decomposition expects homogeneous trivariate polynomials of degree {}",
                n
            )));
        }
    }
    let idx = MonomialIndex::new(n - 1);
    let mons = idx.triples();
    let big_n = mons.len();
    // unknown order: beta10 upper triangle, then beta20, then beta12
    let mut unknown_keys: Vec<(usize, usize, usize)> = Vec::new();
    for g in 0..3 {
        for a in 0..big_n {
            for b in a..big_n {
                unknown_keys.push((g, a, b));
            }
        }
    }
    // equations over degree-n monomial pairs
    let eq_idx = MonomialIndex::new(n);
    let eq_mons = eq_idx.triples();
    let key_pos = |k: &BiKey| -> usize {
        eq_idx.position(k.0).unwrap() * eq_mons.len() + eq_idx.position(k.1).unwrap()
    };
    let nrows = eq_mons.len() * eq_mons.len();
    let mut a_mat = Matrix::zeros(nrows, unknown_keys.len());
    for (col, &(g, a, b)) in unknown_keys.iter().enumerate() {
        let mut pairs = vec![(a, b)];
        if a != b {
            pairs.push((b, a));
        }
        for (ia, ib) in pairs {
            for (xe, ye, s) in bracket_terms(g) {
                let kx = [mons[ia][0] + xe[0], mons[ia][1] + xe[1], mons[ia][2] + xe[2]];
                let ky = [mons[ib][0] + ye[0], mons[ib][1] + ye[1], mons[ib][2] + ye[2]];
                let r = key_pos(&(kx, ky));
                let v = a_mat.get(r, col) + &Scalar::from_int(s);
                a_mat.set(r, col, v);
            }
        }
    }
    let target = bihom_difference(p, q);
    let mut rhs = Matrix::zeros(nrows, 1);
    for (k, v) in &target {
        rhs.set(key_pos(k), 0, v.clone());
    }
    let u = solve(&a_mat, &rhs)
        .map_err(|_| Error::Internal("bracket decomposition system is inconsistent".into()))?;
    let mut b10 = Matrix::zeros(big_n, big_n);
    let mut b20 = Matrix::zeros(big_n, big_n);
    let mut b12 = Matrix::zeros(big_n, big_n);
    for (col, &(g, a, b)) in unknown_keys.iter().enumerate() {
        let v = u.get(col, 0).clone();
        let beta = match g {
            0 => &mut b10,
            1 => &mut b20,
            _ => &mut b12,
        };
        beta.set(a, b, v.clone());
        beta.set(b, a, v);
    }
    let betas = BetaTriple { n, b10, b20, b12 };
    if expand_beta(&betas) != target {
        return Err(Error::Internal("bracket decomposition identity check failed".into()));
    }
    Ok(betas)
}

/// Exact verification of the six-variable decomposition identity.
pub fn verify_beta_identity(betas: &BetaTriple, p: &MultiPoly, q: &MultiPoly) -> bool {
    expand_beta(betas) == bihom_difference(p, q)
}

/// Generalized Bezout data: beta triple, blown matrix B on W_n, restriction
/// B' to the principal subspace coordinates.
#[derive(Clone, Debug)]
pub struct GeneralizedBezout {
    pub n: u32,
    pub betas: BetaTriple,
    pub blown: Matrix,
    pub principal: PrincipalSubspace,
    pub restricted: Matrix,
}

/// Assemble B = beta12 (x) D0 + beta20 (x) D1 + beta10 (x) D2 and its
/// restriction to V_n.
pub fn curve_bezout(
    p: &MultiPoly,
    q: &MultiPoly,
    dr: &DetRep,
    n: u32,
) -> Result<GeneralizedBezout> {
    let betas = bezout_decomposition(p, q, n)?;
    let blown = kron(&betas.b12, &dr.d0)
        .add(&kron(&betas.b20, &dr.d1))
        .add(&kron(&betas.b10, &dr.d2));
    let principal = principal_subspace(dr, n);
    let restricted = congruence_restrict(&blown, &principal.subspace)?;
    Ok(GeneralizedBezout { n, betas, blown, principal, restricted })
}

/// dim ker B'(p,q): the number of common zeros of p and q along the curve.
pub fn curve_common_zero_count(
    p: &MultiPoly,
    q: &MultiPoly,
    dr: &DetRep,
    n: u32,
) -> Result<usize> {
    let gb = curve_bezout(p, q, dr, n)?;
    Ok(rank_kernel(&gb.restricted, DEFAULT_TOL).kernel.dim())
}

/// Report of the bilinear vanishing correspondence
/// V^T(y) B V(x) = 0  <=>  p(x)q(y) - q(x)p(y) = 0 on sampled curve points.
#[derive(Clone, Debug, Default)]
pub struct BilinearReport {
    pub pairs_checked: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub skipped_degenerate: usize,
}

pub fn bilinear_vanishing_check(
    p: &MultiPoly,
    q: &MultiPoly,
    dr: &DetRep,
    n: u32,
    samples: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<BilinearReport> {
    let gb = curve_bezout(p, q, dr, n)?;
    let mut points: Vec<CurvePoint> = Vec::new();
    let mut tries = 0;
    while points.len() < samples && tries < 8 * samples.max(4) {
        tries += 1;
        let x1 = Scalar::from_int(rng.gen_range(-20i64..=20));
        let x2 = Scalar::from_int(rng.gen_range(-20i64..=20));
        if x1.is_zero() && x2.is_zero() {
            continue;
        }
        if let Ok(pts) = pencil_points(dr, &x1, &x2, tol) {
            points.extend(pts);
        }
    }
    let mut report = BilinearReport::default();
    let bnorm = gb.blown.max_abs().max(1.0);
    let dnorm =
        dr.d0.max_abs().max(dr.d1.max_abs()).max(dr.d2.max_abs()).max(1.0);
    for i in 0..points.len() {
        for j in 0..points.len() {
            if report.pairs_checked >= samples {
                return Ok(report);
            }
            let (px, py) = (&points[i], &points[j]);
            // pairing vector u_g = conj(h)^T D_g e; the bilinear identity
            // degenerates (both sides vanish trivially) when all three vanish
            let hbar_t = py.e.adjoint();
            let uscale = py.e.max_abs().max(1.0) * px.e.max_abs().max(1.0) * dnorm;
            let degenerate = [&dr.d0, &dr.d1, &dr.d2].iter().all(|d| {
                hbar_t.mul(d).mul(&px.e).get(0, 0).abs() <= tol * uscale
            });
            if degenerate {
                report.skipped_degenerate += 1;
                continue;
            }
            // the transpose-kernel condition h^T M(y) = 0 holds for the
            // entrywise conjugate of the sampled point (hermitian pencil)
            let py_conj = CurvePoint {
                x: [py.x[0].conj(), py.x[1].conj(), py.x[2].conj()],
                e: py.e.map(Scalar::conj),
                exact: py.exact,
            };
            // coincident points carry derivative data on the left side while
            // the right side vanishes identically; the correspondence only
            // speaks about distinct points
            if same_projective_point(&px.x, &py_conj.x, tol) {
                report.skipped_degenerate += 1;
                continue;
            }
            let vx = vandermonde_vector(px, n);
            let vy = vandermonde_vector(&py_conj, n);
            let lhs = vy.transpose().mul(&gb.blown).mul(&vx).get(0, 0).clone();
            let lhs_scale = vy.max_abs().max(1.0) * bnorm * vx.max_abs().max(1.0);
            let pq = &(&p.evaluate(&px.x) * &q.evaluate(&py_conj.x))
                - &(&q.evaluate(&px.x) * &p.evaluate(&py_conj.x));
            let pq_scale = [px, py]
                .iter()
                .map(|pt| pt.x.iter().map(Scalar::abs).fold(1.0, f64::max).powi(n as i32))
                .product::<f64>();
            let lhs_zero = lhs.abs() <= tol * lhs_scale;
            let rhs_zero = pq.abs() <= tol * pq_scale;
            report.pairs_checked += 1;
            if lhs_zero == rhs_zero {
                report.agreements += 1;
            } else {
                report.disagreements += 1;
            }
        }
    }
    Ok(report)
}

/// Zeros of a homogeneous polynomial f on the curve, located by eliminating
/// y2 with a bivariate resultant and matching roots; rational candidates are
/// promoted to exact points.
pub fn curve_poly_intersection(
    dr: &DetRep,
    f: &MultiPoly,
    tol: f64,
) -> Result<Vec<CurvePoint>> {
    let da = dr.delta.dehomogenize();
    let fa = f.dehomogenize();
    let mut out: Vec<CurvePoint> = Vec::new();
    let push_candidate = |y1: Scalar, y2: Scalar, out: &mut Vec<CurvePoint>| {
        let cand = try_exact_point(dr, &y1, &y2);
        let x = match cand {
            Some(x) => x,
            None => [
                Scalar::from_f64(1.0),
                Scalar::from_c64(y1.to_c64()),
                Scalar::from_c64(y2.to_c64()),
            ],
        };
        let fv = f.evaluate(&x);
        let on_curve_and_f = if x.iter().all(Scalar::is_exact) {
            dr.delta.evaluate(&x).is_zero() && fv.is_zero()
        } else {
            let xs = x.iter().map(Scalar::abs).fold(1.0, f64::max);
            let k = f.total_degree().unwrap_or(0) as i32;
            dr.delta.evaluate(&x).abs() <= 1e3 * tol * xs.powi(dr.m as i32)
                && fv.abs() <= 1e3 * tol * xs.powi(k)
        };
        if !on_curve_and_f {
            return;
        }
        if out.iter().any(|p| same_projective_point(&p.x, &x, tol)) {
            return;
        }
        let info = rank_kernel(&dr.pencil_at(&x), tol);
        for k in 0..info.kernel.dim() {
            let e = info.kernel.basis().column(k);
            let exact = x.iter().all(Scalar::is_exact) && e.is_exact();
            out.push(CurvePoint { x: x.clone(), e, exact });
        }
    };

    let deg_y2 = |g: &MultiPoly| g.terms().map(|(e, _)| e[1]).max().unwrap_or(0);
    let (d_delta, d_f) = (deg_y2(&da), deg_y2(&fa));
    if d_delta == 0 || d_f == 0 {
        // one input does not involve y2: root the y2-free one in y1 and the
        // other in y2 at each such root
        let (free, other) = if d_delta == 0 { (&da, &fa) } else { (&fa, &da) };
        let free_uni = bivar_to_uni(free, 0);
        if free_uni.degree().is_some() && free_uni.degree() != Some(0) {
            for r1 in poly_roots(&free_uni, tol)? {
                let y1 = promote_root(&free_uni, r1.value, RATIONALIZE_MAX_DEN)
                    .unwrap_or(Scalar::from_c64(r1.value));
                let slice = substitute_y1(other, &y1);
                if let Some(d) = slice.degree() {
                    if d >= 1 {
                        for r2 in poly_roots(&slice, tol)? {
                            push_candidate(
                                y1.clone(),
                                Scalar::from_c64(r2.value),
                                &mut out,
                            );
                        }
                    }
                }
            }
        }
    } else {
        let res = bivariate_resultant_y2(&da, &fa)?;
        if res.is_zero() {
            return Err(Error::Input(
                "polynomial shares a component with the curve; zero set is not finite".into(),
            ));
        }
        if res.degree().map_or(false, |d| d >= 1) {
            for r1 in poly_roots(&res, tol.min(1e-10))? {
                let y1 = promote_root(&res, r1.value, RATIONALIZE_MAX_DEN)
                    .unwrap_or(Scalar::from_c64(r1.value));
                let sd = substitute_y1(&da, &y1);
                let sf = substitute_y1(&fa, &y1);
                if sd.degree().map_or(true, |d| d == 0) || sf.degree().map_or(true, |d| d == 0)
                {
                    continue;
                }
                let rd = poly_roots(&sd, tol)?;
                let rf = poly_roots(&sf, tol)?;
                let scale = 1.0 + rd.iter().map(|r| r.value.norm()).fold(0.0, f64::max);
                for a in &rd {
                    if rf.iter().any(|b| (a.value - b.value).norm() < 1e4 * tol * scale) {
                        push_candidate(y1.clone(), Scalar::from_c64(a.value), &mut out);
                    }
                }
            }
        }
    }

    // points at infinity: Delta(0, x1, x2) = 0 and f(0, x1, x2) = 0
    let inf_delta = binary_slice(&dr.delta);
    let inf_f = binary_slice(f);
    for (x1, x2) in common_binary_roots(&inf_delta, &inf_f, tol)? {
        let x = [Scalar::zero(), x1, x2];
        if out.iter().any(|p| same_projective_point(&p.x, &x, tol)) {
            continue;
        }
        let info = rank_kernel(&dr.pencil_at(&x), tol);
        for k in 0..info.kernel.dim() {
            let e = info.kernel.basis().column(k);
            let exact = x.iter().all(Scalar::is_exact) && e.is_exact();
            out.push(CurvePoint { x: x.clone(), e, exact });
        }
    }
    Ok(out)
}

fn try_exact_point(dr: &DetRep, y1: &Scalar, y2: &Scalar) -> Option<[Scalar; 3]> {
    let promote = |s: &Scalar| -> Option<Scalar> {
        if s.is_exact() {
            return Some(s.clone());
        }
        let z = s.to_c64();
        let re = rationalize(z.re, RATIONALIZE_MAX_DEN)?;
        let im = if z.im.abs() < 1e-9 * (1.0 + z.norm()) {
            BigRational::zero()
        } else {
            rationalize(z.im, RATIONALIZE_MAX_DEN)?
        };
        Some(Scalar::gaussian(re, im))
    };
    let x = [Scalar::one(), promote(y1)?, promote(y2)?];
    if dr.delta.evaluate(&x).is_zero() {
        Some(x)
    } else {
        None
    }
}

fn same_projective_point(a: &[Scalar; 3], b: &[Scalar; 3], tol: f64) -> bool {
    // cross products vanish => proportional
    let scale = a.iter().chain(b.iter()).map(Scalar::abs).fold(1.0, f64::max);
    for i in 0..3 {
        for j in i + 1..3 {
            let c = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
            if c.abs() > 1e4 * tol * scale * scale {
                return false;
            }
        }
    }
    true
}

fn bivar_to_uni(p: &MultiPoly, var: usize) -> crate::poly::UniPoly {
    let deg = p.terms().map(|(e, _)| e[var]).max().unwrap_or(0) as usize;
    let mut coeffs = vec![Scalar::zero(); deg + 1];
    for (e, c) in p.terms() {
        coeffs[e[var] as usize] = &coeffs[e[var] as usize] + c;
    }
    crate::poly::UniPoly::new(coeffs)
}

/// Substitute y1 = value in a bivariate polynomial; result univariate in y2.
pub(crate) fn substitute_y1(p: &MultiPoly, value: &Scalar) -> crate::poly::UniPoly {
    let deg = p.terms().map(|(e, _)| e[1]).max().unwrap_or(0) as usize;
    let mut coeffs = vec![Scalar::zero(); deg + 1];
    for (e, c) in p.terms() {
        let v = c * &value.pow(e[0]);
        coeffs[e[1] as usize] = &coeffs[e[1] as usize] + &v;
    }
    crate::poly::UniPoly::new(coeffs)
}

/// Resultant of two bivariate polynomials with respect to y2, as a
/// univariate polynomial in y1: the Sylvester determinant with polynomial
/// entries, recovered by evaluation at rational nodes and interpolation.
fn bivariate_resultant_y2(a: &MultiPoly, b: &MultiPoly) -> Result<crate::poly::UniPoly> {
    let deg_y2 = |g: &MultiPoly| g.terms().map(|(e, _)| e[1]).max().unwrap_or(0) as usize;
    let deg_y1 = |g: &MultiPoly| g.terms().map(|(e, _)| e[0]).max().unwrap_or(0) as usize;
    let (da, db) = (deg_y2(a), deg_y2(b));
    let bound = db * deg_y1(a) + da * deg_y1(b);
    let nodes: Vec<Scalar> = (0..=bound as i64).map(Scalar::from_int).collect();
    let values: Vec<Scalar> = nodes
        .iter()
        .map(|t| {
            let pa = substitute_y1(a, t);
            let pb = substitute_y1(b, t);
            let size = da + db;
            let mut s = Matrix::zeros(size, size);
            for i in 0..db {
                for k in 0..=da {
                    s.set(i, i + k, pa.coeff(da - k));
                }
            }
            for i in 0..da {
                for k in 0..=db {
                    s.set(db + i, i + k, pb.coeff(db - k));
                }
            }
            crate::matrix::determinant(&s)
        })
        .collect();
    Ok(crate::poly::interpolate(&nodes, &values))
}

fn binary_slice(p: &MultiPoly) -> MultiPoly {
    // restriction to x0 = 0, as a bivariate polynomial in (x1, x2)
    let mut out = MultiPoly::zero(2);
    for (e, c) in p.terms() {
        if e[0] == 0 {
            out.add_term(vec![e[1], e[2]], c.clone());
        }
    }
    out
}

fn common_binary_roots(
    a: &MultiPoly,
    b: &MultiPoly,
    tol: f64,
) -> Result<Vec<(Scalar, Scalar)>> {
    // projective roots of two binary forms; returns representatives (x1, x2)
    let mut out = Vec::new();
    if a.is_zero() || b.is_zero() {
        return Ok(out);
    }
    // chart x2 = 1
    let ua = binary_to_uni(a);
    let ub = binary_to_uni(b);
    if ua.degree().map_or(false, |d| d >= 1) {
        for r in poly_roots(&ua, tol)? {
            let x1 = promote_root(&ua, r.value, RATIONALIZE_MAX_DEN)
                .unwrap_or(Scalar::from_c64(r.value));
            let v = ub.eval(&x1);
            let vanishes = if x1.is_exact() && ub.is_exact() {
                v.is_zero()
            } else {
                v.abs() <= 1e3 * tol * (1.0 + x1.abs()).powi(ub.degree().unwrap_or(0) as i32)
            };
            if vanishes {
                out.push((x1, Scalar::one()));
            }
        }
    }
    // the point (x1, x2) = (1, 0)
    let at_inf = |f: &MultiPoly| -> bool {
        f.terms().all(|(e, c)| e[1] != 0 || c.is_zero())
    };
    if at_inf(a) && at_inf(b) {
        out.push((Scalar::one(), Scalar::zero()));
    }
    Ok(out)
}

fn binary_to_uni(p: &MultiPoly) -> crate::poly::UniPoly {
    // substitute x2 = 1; univariate in x1
    let deg = p.terms().map(|(e, _)| e[0]).max().unwrap_or(0) as usize;
    let mut coeffs = vec![Scalar::zero(); deg + 1];
    for (e, c) in p.terms() {
        coeffs[e[0] as usize] = &coeffs[e[0] as usize] + c;
    }
    crate::poly::UniPoly::new(coeffs)
}

/// Result of basepoint reduction: the common zeros of (p0, p1, p2) on the
/// curve and the orthogonal complement of their Vandermonde vectors in V_n.
#[derive(Clone, Debug)]
pub struct BasepointReduction {
    pub basepoints: Vec<CurvePoint>,
    pub vbar: Subspace,
    /// Coordinates of the vbar basis relative to the V_n basis.
    pub coords: Matrix,
    pub exact: bool,
}

pub fn basepoint_reduce(
    p0: &MultiPoly,
    p1: &MultiPoly,
    p2: &MultiPoly,
    dr: &DetRep,
    n: u32,
    tol: f64,
) -> Result<BasepointReduction> {
    for f in [p0, p1, p2] {
        if !f.is_homogeneous(n) {
            return Err(Error::Input("map polynomials must be homogeneous of degree n".into()));
        }
    }
    let candidates = curve_poly_intersection(dr, p0, tol)?;
    let mut basepoints: Vec<CurvePoint> = Vec::new();
    for pt in candidates {
        let vanish = |f: &MultiPoly| -> bool {
            let v = f.evaluate(&pt.x);
            if pt.exact {
                v.is_zero()
            } else {
                let xs = pt.x.iter().map(Scalar::abs).fold(1.0, f64::max);
                v.abs() <= 1e3 * tol * xs.powi(n as i32)
            }
        };
        if vanish(p1) && vanish(p2) {
            basepoints.push(pt);
        }
    }
    let principal = principal_subspace(dr, n);
    if basepoints.is_empty() {
        let coords = Matrix::identity(principal.dim());
        return Ok(BasepointReduction {
            basepoints,
            vbar: principal.subspace,
            coords,
            exact: true,
        });
    }
    let c = principal.subspace.basis();
    let exact = basepoints.iter().all(|p| p.exact);
    let vmats: Vec<Matrix> = basepoints.iter().map(|p| vandermonde_vector(p, n)).collect();
    let vrefs: Vec<&Matrix> = vmats.iter().collect();
    let v = Matrix::hstack(&vrefs);
    let constraints = v.adjoint().mul(c);
    let info = rank_kernel(&constraints, tol);
    let coords = info.kernel.basis().clone();
    let vbar_basis = c.mul(&coords);
    let vbar = Subspace::new(vbar_basis)?;
    Ok(BasepointReduction { basepoints, vbar, coords, exact })
}

/// Determinantal representation of the image curve:
/// det(x0 Bbar(p1,p2) + x1 Bbar(p2,p0) - x2 Bbar(p1,p0)).
#[derive(Clone, Debug)]
pub struct ImageDetRep {
    pub b12: Matrix,
    pub b20: Matrix,
    pub b10: Matrix,
    pub poly: MultiPoly,
    pub reduction: BasepointReduction,
}

pub fn image_detrep(
    p0: &MultiPoly,
    p1: &MultiPoly,
    p2: &MultiPoly,
    dr: &DetRep,
    n: u32,
    tol: f64,
) -> Result<ImageDetRep> {
    let reduction = basepoint_reduce(p0, p1, p2, dr, n, tol)?;
    let restrict = |a: &MultiPoly, b: &MultiPoly| -> Result<Matrix> {
        let betas = bezout_decomposition(a, b, n)?;
        let blown = kron(&betas.b12, &dr.d0)
            .add(&kron(&betas.b20, &dr.d1))
            .add(&kron(&betas.b10, &dr.d2));
        congruence_restrict(&blown, &reduction.vbar)
    };
    let b12 = restrict(p1, p2)?;
    let b20 = restrict(p2, p0)?;
    let b10 = restrict(p1, p0)?;
    let poly = pencil_det_trivariate(&b12, &b20, &b10)?;
    if poly.is_zero() {
        return Err(Error::DegenerateMap);
    }
    Ok(ImageDetRep { b12, b20, b10, poly, reduction })
}
