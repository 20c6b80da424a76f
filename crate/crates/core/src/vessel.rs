//! Commutative two-operator vessels: axiom checking, discriminant
//! polynomials, the generalized Cayley-Hamilton identity, fibers, and the
//! rational transformation/reduction of a vessel along a rational map of its
//! discriminant curve.

use crate::curve::{
    basepoint_reduce, bezout_decomposition, principal_subspace, substitute_y1,
    vandermonde_vector, CurvePoint, DetRep, PrincipalSubspace,
};
use crate::error::{Error, Result};
use crate::matrix::{inverse, kron, rank_kernel, solve, Matrix, Subspace, DEFAULT_TOL};
use crate::pencil::pencil_det_trivariate;
use crate::poly::{MonomialIndex, MultiPoly};
use crate::roots::{poly_roots, promote_root};
use crate::scalar::Scalar;
use num::Zero;
use rand::Rng;

/// Argument order for the compressed pencil matrices of a transformed
/// vessel: sigma'_1 = B'(P1, P0), sigma'_2 = B'(P2, P0), gamma'^in =
/// B'(P1, P2). The opposite order (each pair swapped, flipping all signs)
/// is the recorded alternative; the convention-validation tests pin this
/// one by requiring the transformed vessel to satisfy the axioms exactly.
const SWAP_PENCIL_ARGS: bool = false;

/// A commutative two-operator vessel: commuting operators on the inner
/// space, a coupling map into the outer space, and selfadjoint pencil data.
#[derive(Clone, Debug)]
pub struct Vessel {
    pub a1: Matrix,
    pub a2: Matrix,
    /// dimE x dimH coupling map.
    pub phi: Matrix,
    pub sigma1: Matrix,
    pub sigma2: Matrix,
    pub gamma_in: Matrix,
    pub gamma_out: Matrix,
}

impl Vessel {
    pub fn new(
        a1: Matrix,
        a2: Matrix,
        phi: Matrix,
        sigma1: Matrix,
        sigma2: Matrix,
        gamma_in: Matrix,
        gamma_out: Matrix,
    ) -> Result<Self> {
        let h = a1.rows();
        let m = phi.rows();
        if a1.cols() != h || a2.rows() != h || a2.cols() != h || phi.cols() != h {
            return Err(Error::Dimension("operator/coupling dimensions differ".into()));
        }
        for s in [&sigma1, &sigma2, &gamma_in, &gamma_out] {
            if s.rows() != m || s.cols() != m {
                return Err(Error::Dimension("pencil matrix size differs from dim E".into()));
            }
            s.check_hermitian(DEFAULT_TOL)?;
        }
        Ok(Vessel { a1, a2, phi, sigma1, sigma2, gamma_in, gamma_out })
    }

    pub fn dim_h(&self) -> usize {
        self.a1.rows()
    }

    pub fn dim_e(&self) -> usize {
        self.phi.rows()
    }

    pub fn is_exact(&self) -> bool {
        [&self.a1, &self.a2, &self.phi, &self.sigma1, &self.sigma2, &self.gamma_in,
         &self.gamma_out]
            .iter()
            .all(|m| m.is_exact())
    }
}

/// One axiom residual: its name and the largest entry of the residual
/// matrix (exactly zero on the exact path iff `exact_zero`).
#[derive(Clone, Debug)]
pub struct AxiomResidual {
    pub name: &'static str,
    pub norm: f64,
    pub exact_zero: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct VesselReport {
    pub residuals: Vec<AxiomResidual>,
    pub exact: bool,
    pub pass: bool,
}

/// The five axiom residual matrices, in report order.
fn axiom_residuals(v: &Vessel) -> Vec<(&'static str, Matrix)> {
    let i = Scalar::i();
    let phi_adj = v.phi.adjoint();
    let minus_i = i.inv();
    let skew = |a: &Matrix| a.sub(&a.adjoint()).scale(&minus_i); // (A - A*)/i
    vec![
        ("commutation", v.a1.mul(&v.a2).sub(&v.a2.mul(&v.a1))),
        ("colligation-1", phi_adj.mul(&v.sigma1).mul(&v.phi).sub(&skew(&v.a1))),
        ("colligation-2", phi_adj.mul(&v.sigma2).mul(&v.phi).sub(&skew(&v.a2))),
        (
            "input-linkage",
            v.gamma_in.mul(&v.phi).sub(
                &v.sigma1
                    .mul(&v.phi)
                    .mul(&v.a2.adjoint())
                    .sub(&v.sigma2.mul(&v.phi).mul(&v.a1.adjoint())),
            ),
        ),
        (
            "output-linkage",
            v.gamma_out.mul(&v.phi).sub(
                &v.sigma1.mul(&v.phi).mul(&v.a2).sub(&v.sigma2.mul(&v.phi).mul(&v.a1)),
            ),
        ),
        (
            "gamma-linkage",
            v.gamma_out.sub(&v.gamma_in).sub(
                &v.sigma1
                    .mul(&v.phi)
                    .mul(&phi_adj)
                    .mul(&v.sigma2)
                    .sub(&v.sigma2.mul(&v.phi).mul(&phi_adj).mul(&v.sigma1))
                    .scale(&i),
            ),
        ),
    ]
}

/// Evaluate all vessel axioms; the pass verdict is exact on the exact path
/// and tolerance-based otherwise.
pub fn vessel_check(v: &Vessel, tol: f64) -> VesselReport {
    let exact = v.is_exact();
    let scale = [&v.a1, &v.a2, &v.phi, &v.sigma1, &v.sigma2, &v.gamma_in, &v.gamma_out]
        .iter()
        .map(|m| m.max_abs())
        .fold(1.0, f64::max);
    let mut residuals = Vec::new();
    let mut pass = true;
    for (name, r) in axiom_residuals(v) {
        let norm = r.max_abs();
        let exact_zero = if exact { Some(r.is_zero()) } else { None };
        let ok = match exact_zero {
            Some(z) => z,
            None => norm <= tol * scale * scale * scale,
        };
        pass &= ok;
        residuals.push(AxiomResidual { name, norm, exact_zero });
    }
    VesselReport { residuals, exact, pass }
}

/// Diagonal vessel fixture: commuting diagonal operators, outer space the
/// coordinates with nonselfadjoint action, coupling the coordinate
/// projection, and the gamma matrices solved from the linkage axioms.
pub fn vessel_fixture(diag1: &[Scalar], diag2: &[Scalar]) -> Result<Vessel> {
    let h = diag1.len();
    if diag2.len() != h {
        return Err(Error::Dimension("diagonal lengths differ".into()));
    }
    if diag1.iter().chain(diag2).any(|s| !s.is_exact()) {
        return Err(Error::Input("fixture diagonals must be exact".into()));
    }
    let a1 = Matrix::diagonal(diag1);
    let a2 = Matrix::diagonal(diag2);
    let two = Scalar::from_int(2);
    let imag = |s: &Scalar| -> Scalar {
        let (_, im) = s.exact_parts().unwrap();
        &Scalar::from_rational(im) * &two
    };
    // outer space: coordinates where either operator is nonselfadjoint
    let picked: Vec<usize> = (0..h)
        .filter(|&k| !imag(&diag1[k]).is_zero() || !imag(&diag2[k]).is_zero())
        .collect();
    let m = picked.len();
    let mut phi = Matrix::zeros(m, h);
    for (j, &k) in picked.iter().enumerate() {
        phi.set(j, k, Scalar::one());
    }
    let sigma1 = Matrix::diagonal(&picked.iter().map(|&k| imag(&diag1[k])).collect::<Vec<_>>());
    let sigma2 = Matrix::diagonal(&picked.iter().map(|&k| imag(&diag2[k])).collect::<Vec<_>>());
    let phi_adj = phi.adjoint();
    let gamma_in = sigma1
        .mul(&phi)
        .mul(&a2.adjoint())
        .mul(&phi_adj)
        .sub(&sigma2.mul(&phi).mul(&a1.adjoint()).mul(&phi_adj));
    let gamma_out = sigma1
        .mul(&phi)
        .mul(&a2)
        .mul(&phi_adj)
        .sub(&sigma2.mul(&phi).mul(&a1).mul(&phi_adj));
    let v = Vessel::new(a1, a2, phi, sigma1, sigma2, gamma_in, gamma_out)?;
    let report = vessel_check(&v, DEFAULT_TOL);
    if !report.pass {
        return Err(Error::Infeasible(
            "commuting pair admits no vessel with this outer space".into(),
        ));
    }
    Ok(v)
}

/// Random diagonal fixture with small Gaussian-integer spectra; always at
/// least one nonselfadjoint coordinate.
pub fn random_vessel(dim_h: usize, rng: &mut impl Rng) -> Vessel {
    loop {
        let draw = |rng: &mut dyn rand::RngCore| {
            Scalar::gaussian_int(rng.gen_range(-4i64..=4), rng.gen_range(-3i64..=3))
        };
        let d1: Vec<Scalar> = (0..dim_h).map(|_| draw(rng)).collect();
        let d2: Vec<Scalar> = (0..dim_h).map(|_| draw(rng)).collect();
        if let Ok(v) = vessel_fixture(&d1, &d2) {
            if v.dim_e() > 0 {
                return v;
            }
        }
    }
}

/// Discriminant data: the bivariate polynomial from the input pencil and
/// whether the output pencil gives the identical polynomial.
#[derive(Clone, Debug)]
pub struct Discriminant {
    pub poly: MultiPoly,
    pub in_out_equal: bool,
}

/// det(y1 sigma2 - y2 sigma1 + gamma), exact bivariate polynomial.
fn pencil_poly(gamma: &Matrix, sigma1: &Matrix, sigma2: &Matrix) -> Result<MultiPoly> {
    Ok(pencil_det_trivariate(gamma, sigma2, sigma1)?.dehomogenize())
}

pub fn discriminant(v: &Vessel) -> Result<Discriminant> {
    let pin = pencil_poly(&v.gamma_in, &v.sigma1, &v.sigma2)?;
    let pout = pencil_poly(&v.gamma_out, &v.sigma1, &v.sigma2)?;
    Ok(Discriminant { in_out_equal: pin == pout, poly: pin })
}

/// Cayley-Hamilton check: Delta(A1, A2) annihilates the vessel principal
/// subspace span{A1^a A2^b Phi* E}.
#[derive(Clone, Debug)]
pub struct CayleyHamiltonReport {
    pub residual: f64,
    pub exact_zero: Option<bool>,
    pub principal_dim: usize,
}

pub fn cayley_hamilton_check(v: &Vessel) -> Result<CayleyHamiltonReport> {
    let delta = discriminant(v)?.poly;
    let value = delta.evaluate_matrices(&v.a1, &v.a2);
    let h = v.dim_h();
    let phi_adj = v.phi.adjoint();
    let mut cols: Vec<Matrix> = Vec::new();
    for a in 0..=h as u32 {
        for b in 0..=h as u32 {
            if a + b <= h as u32 {
                cols.push(v.a1.pow(a).mul(&v.a2.pow(b)).mul(&phi_adj));
            }
        }
    }
    let refs: Vec<&Matrix> = cols.iter().collect();
    let span = Matrix::hstack(&refs);
    let principal_dim = if v.dim_e() == 0 { 0 } else { rank_kernel(&span, DEFAULT_TOL).rank };
    let r = value.mul(&span);
    let exact_zero = if v.is_exact() && delta.is_exact() { Some(r.is_zero()) } else { None };
    Ok(CayleyHamiltonReport { residual: r.max_abs(), exact_zero, principal_dim })
}

/// In/out fibers at a point of the plane: kernels of the two pencils.
#[derive(Clone, Debug)]
pub struct Fibers {
    pub e_in: Subspace,
    pub e_out: Subspace,
    pub on_curve: bool,
}

pub fn fibers(v: &Vessel, y1: &Scalar, y2: &Scalar, tol: f64) -> Result<Fibers> {
    let delta = discriminant(v)?;
    let dv = delta.poly.evaluate(&[y1.clone(), y2.clone()]);
    let on_curve = if dv.is_exact() {
        dv.is_zero()
    } else {
        let s = y1.abs().max(y2.abs()).max(1.0).powi(v.dim_e() as i32);
        dv.abs() <= tol * s
    };
    let pencil_at = |gamma: &Matrix| {
        v.sigma2.scale(y1).sub(&v.sigma1.scale(y2)).add(gamma)
    };
    let e_in = rank_kernel(&pencil_at(&v.gamma_in), tol).kernel;
    let e_out = rank_kernel(&pencil_at(&v.gamma_out), tol).kernel;
    Ok(Fibers { e_in, e_out, on_curve })
}

/// A rational map of the plane r = (p1/p0, p2/p0) with real coefficients,
/// homogenized at degree n.
#[derive(Clone, Debug)]
pub struct RationalPair {
    pub p0: MultiPoly,
    pub p1: MultiPoly,
    pub p2: MultiPoly,
    pub n: u32,
}

impl RationalPair {
    pub fn new(p0: MultiPoly, p1: MultiPoly, p2: MultiPoly, n: u32) -> Result<Self> {
        for p in [&p0, &p1, &p2] {
            if p.nvars() != 2 {
                return Err(Error::Input("rational map data must be bivariate".into()));
            }
            if !p.is_exact() {
                return Err(Error::Input("rational map must have exact coefficients".into()));
            }
            for (_, c) in p.terms() {
                let (_, im) = c.exact_parts().unwrap();
                if !im.is_zero() {
                    return Err(Error::Input("rational map must have real coefficients".into()));
                }
            }
            if p.total_degree().unwrap_or(0) > n {
                return Err(Error::Input("map degree exceeds homogenization degree".into()));
            }
        }
        if p0.is_zero() {
            return Err(Error::Input("denominator is identically zero".into()));
        }
        Ok(RationalPair { p0, p1, p2, n })
    }

    /// The identity map (1, y1, y2) at degree 1.
    pub fn identity() -> Self {
        RationalPair {
            p0: MultiPoly::constant(2, Scalar::one()),
            p1: MultiPoly::var(2, 0),
            p2: MultiPoly::var(2, 1),
            n: 1,
        }
    }

    pub fn homogenized(&self) -> (MultiPoly, MultiPoly, MultiPoly) {
        (
            self.p0.homogenize(self.n).unwrap(),
            self.p1.homogenize(self.n).unwrap(),
            self.p2.homogenize(self.n).unwrap(),
        )
    }

    /// Image point (p1/p0, p2/p0)(y); None where the denominator vanishes.
    pub fn image_point(&self, y1: &Scalar, y2: &Scalar) -> Option<(Scalar, Scalar)> {
        let pt = [y1.clone(), y2.clone()];
        let d = self.p0.evaluate(&pt);
        if d.is_zero() || (!d.is_exact() && d.abs() < 1e-12) {
            return None;
        }
        Some((&self.p1.evaluate(&pt) / &d, &self.p2.evaluate(&pt) / &d))
    }
}

/// The transformed vessel V' together with the curve-side data needed for
/// the basepoint reduction and the theorem checks.
#[derive(Clone, Debug)]
pub struct Transformed {
    pub vessel: Vessel,
    pub rp: RationalPair,
    /// Determinantal representation of the original discriminant curve,
    /// slots (gamma_in, sigma2, sigma1).
    pub dr: DetRep,
    pub principal: PrincipalSubspace,
    /// Blown pencil matrices B(P1,P0), B(P2,P0), B(P1,P2) on W_n.
    pub b10: Matrix,
    pub b20: Matrix,
    pub b12: Matrix,
    /// The coupling block column in W_n coordinates.
    pub block_col: Matrix,
}

fn blown(pa: &MultiPoly, pb: &MultiPoly, n: u32, dr: &DetRep) -> Result<Matrix> {
    let (x, y) = if SWAP_PENCIL_ARGS { (pb, pa) } else { (pa, pb) };
    let betas = bezout_decomposition(x, y, n)?;
    Ok(kron(&betas.b12, &dr.d0)
        .add(&kron(&betas.b20, &dr.d1))
        .add(&kron(&betas.b10, &dr.d2)))
}

/// Transform a vessel along a rational map of the plane: new operators
/// r_i(A1, A2), outer space the principal subspace of the discriminant
/// curve's determinantal representation, pencil matrices the compressed
/// generalized Bezout matrices of the map polynomials.
pub fn transform_vessel(v: &Vessel, rp: &RationalPair) -> Result<Transformed> {
    if !v.is_exact() {
        return Err(Error::Input("transformation requires an exact vessel".into()));
    }
    let dr = DetRep::new(v.gamma_in.clone(), v.sigma2.clone(), v.sigma1.clone())?;
    let n = rp.n;
    let (cp0, cp1, cp2) = rp.homogenized();

    // new operators r_i(A1, A2)
    let p0a = rp.p0.evaluate_matrices(&v.a1, &v.a2);
    let p0a_inv = inverse(&p0a).map_err(|_| Error::BasepointAtSpectrum)?;
    let a1p = rp.p1.evaluate_matrices(&v.a1, &v.a2).mul(&p0a_inv);
    let a2p = rp.p2.evaluate_matrices(&v.a1, &v.a2).mul(&p0a_inv);

    // compressed pencil matrices
    let principal = principal_subspace(&dr, n);
    let c = principal.subspace.basis();
    let b10 = blown(&cp1, &cp0, n, &dr)?;
    let b20 = blown(&cp2, &cp0, n, &dr)?;
    let b12 = blown(&cp1, &cp2, n, &dr)?;
    let sigma1p = c.adjoint().mul(&b10).mul(c);
    let sigma2p = c.adjoint().mul(&b20).mul(c);
    let gamma_inp = c.adjoint().mul(&b12).mul(c);

    // coupling block column: Phi A1*^{i1} A2*^{i2} p0(A1*, A2*)^{-1} over
    // the degree-(n-1) monomial layout of W_n
    let p0a_star_inv =
        inverse(&rp.p0.evaluate_matrices(&v.a1.adjoint(), &v.a2.adjoint()))
            .map_err(|_| Error::BasepointAtSpectrum)?;
    let blocks: Vec<Matrix> = MonomialIndex::new(n - 1)
        .triples()
        .into_iter()
        .map(|t| {
            v.phi
                .mul(&v.a1.adjoint().pow(t[1]))
                .mul(&v.a2.adjoint().pow(t[2]))
                .mul(&p0a_star_inv)
        })
        .collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    let block_col = Matrix::vstack(&refs);

    // the block column lies in the principal subspace; its coordinates are
    // the new coupling map
    let phip = solve(c, &block_col).map_err(|_| {
        Error::TheoremCheck(
            "coupling block column does not lie in the principal subspace".into(),
        )
    })?;
    if !c.mul(&phip).sub(&block_col).is_zero() {
        return Err(Error::TheoremCheck(
            "coupling block column does not lie in the principal subspace".into(),
        ));
    }

    let gamma_outp = linkage_gamma_out(&gamma_inp, &sigma1p, &sigma2p, &phip);
    let vessel =
        Vessel::new(a1p, a2p, phip, sigma1p, sigma2p, gamma_inp, gamma_outp)?;
    let report = vessel_check(&vessel, DEFAULT_TOL);
    if !report.pass {
        return Err(Error::TheoremCheck(
            "transformed vessel violates the axioms; pencil-argument convention invalid"
                .into(),
        ));
    }
    Ok(Transformed { vessel, rp: rp.clone(), dr, principal, b10, b20, b12, block_col })
}

fn linkage_gamma_out(
    gamma_in: &Matrix,
    sigma1: &Matrix,
    sigma2: &Matrix,
    phi: &Matrix,
) -> Matrix {
    let phi_adj = phi.adjoint();
    gamma_in.add(
        &sigma1
            .mul(phi)
            .mul(&phi_adj)
            .mul(sigma2)
            .sub(&sigma2.mul(phi).mul(&phi_adj).mul(sigma1))
            .scale(&Scalar::i()),
    )
}

/// The reduced vessel V'' on the basepoint-free part of the outer space.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub vessel: Vessel,
    pub basepoints: Vec<CurvePoint>,
    /// Basis of the reduced outer space inside W_n.
    pub cbar: Subspace,
    /// Coordinates of cbar relative to the V_n basis.
    pub coords: Matrix,
    pub exact: bool,
    /// Linkage-defined gamma''^out agrees with the compression of
    /// gamma'^out (exactly on the exact path, within tol otherwise).
    pub gamma_out_consistent: bool,
}

pub fn reduce_transformed(t: &Transformed, tol: f64) -> Result<Reduced> {
    let (cp0, cp1, cp2) = t.rp.homogenized();
    let reduction = basepoint_reduce(&cp0, &cp1, &cp2, &t.dr, t.rp.n, tol)?;
    if reduction.basepoints.is_empty() {
        return Ok(Reduced {
            vessel: t.vessel.clone(),
            basepoints: Vec::new(),
            cbar: t.principal.subspace.clone(),
            coords: reduction.coords,
            exact: true,
            gamma_out_consistent: true,
        });
    }
    let cbar = reduction.vbar;
    let cb = cbar.basis();
    let sigma1pp = cb.adjoint().mul(&t.b10).mul(cb);
    let sigma2pp = cb.adjoint().mul(&t.b20).mul(cb);
    let gamma_inpp = cb.adjoint().mul(&t.b12).mul(cb);
    // coupling: orthogonal projection of the block column onto the reduced
    // space, in cbar coordinates
    let phipp = if cbar.dim() == 0 {
        Matrix::zeros(0, t.vessel.dim_h())
    } else {
        let gram = cb.adjoint().mul(cb);
        let gram_inv = inverse(&gram)
            .map_err(|_| Error::Internal("singular Gram matrix".into()))?;
        gram_inv.mul(&cb.adjoint()).mul(&t.block_col)
    };
    let gamma_outpp = linkage_gamma_out(&gamma_inpp, &sigma1pp, &sigma2pp, &phipp);
    // cross-check: compressing gamma'^out gives the same matrix
    let k = &reduction.coords;
    let compressed = k.adjoint().mul(&t.vessel.gamma_out).mul(k);
    let diff = gamma_outpp.sub(&compressed);
    let gamma_out_consistent = if diff.is_exact() {
        diff.is_zero()
    } else {
        diff.max_abs() <= tol * compressed.max_abs().max(1.0) * 1e3
    };
    let vessel = Vessel::new(
        t.vessel.a1.clone(),
        t.vessel.a2.clone(),
        phipp,
        sigma1pp,
        sigma2pp,
        gamma_inpp,
        gamma_outpp,
    )?;
    Ok(Reduced {
        vessel,
        basepoints: reduction.basepoints,
        cbar,
        coords: reduction.coords,
        exact: reduction.exact,
        gamma_out_consistent,
    })
}

/// Toleranced vanishing test, scaled by the coefficient size of the
/// polynomial and the magnitude of the point.
fn poly_vanishes(p: &MultiPoly, pt: &[Scalar], tol: f64) -> bool {
    let v = p.evaluate(pt);
    if v.is_exact() {
        return v.is_zero();
    }
    let cs = p.terms().map(|(_, c)| c.abs()).fold(1.0, f64::max);
    let xs = pt.iter().map(Scalar::abs).fold(1.0, f64::max);
    let d = p.total_degree().unwrap_or(0) as i32;
    v.abs() <= tol * cs * xs.powi(d) * (p.num_terms() as f64).max(1.0)
}

/// Sampled points of the zero set of a bivariate polynomial: fix rational
/// values of the first variable and root the resulting univariate slice.
pub fn sample_curve_points(
    delta: &MultiPoly,
    samples: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<Vec<(Scalar, Scalar)>> {
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < samples && tries < 20 * samples.max(1) {
        tries += 1;
        let y1 = Scalar::ratio(rng.gen_range(-30i64..=30), rng.gen_range(1i64..=6));
        let slice = substitute_y1(delta, &y1);
        match slice.degree() {
            None | Some(0) => continue,
            _ => {}
        }
        let Ok(roots) = poly_roots(&slice, tol) else { continue };
        for r in roots {
            let y2 = promote_root(&slice, r.value, 1 << 24)
                .unwrap_or(Scalar::from_c64(r.value));
            out.push((y1.clone(), y2));
            if out.len() >= samples {
                break;
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Input("no curve points found for sampling".into()));
    }
    Ok(out)
}

/// Containment/equality report for the reduced discriminant: the image of
/// every sampled curve point lies on the reduced discriminant, and the
/// reduced outer dimension is n*m minus the number of basepoints.
#[derive(Clone, Debug)]
pub struct ImageReport {
    pub sampled: usize,
    pub vanishing: usize,
    pub skipped_denominator: usize,
    pub reduced_dim: usize,
    pub expected_dim: usize,
    pub delta_nonzero: bool,
    pub pass: bool,
}

pub fn discriminant_image_check(
    original: &Vessel,
    t: &Transformed,
    r: &Reduced,
    samples: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<ImageReport> {
    let delta = discriminant(original)?.poly;
    let delta2 = discriminant(&r.vessel)?.poly;
    let delta_nonzero = !delta2.is_zero();
    if !delta_nonzero {
        return Err(Error::TheoremCheck(
            "reduced discriminant is identically zero; basepoint reduction failed".into(),
        ));
    }
    let points = sample_curve_points(&delta, samples, tol, rng)?;
    let mut vanishing = 0;
    let mut skipped = 0;
    let mut checked = 0;
    for (y1, y2) in &points {
        let Some((r1, r2)) = t.rp.image_point(y1, y2) else {
            skipped += 1;
            continue;
        };
        checked += 1;
        if poly_vanishes(&delta2, &[r1, r2], tol) {
            vanishing += 1;
        }
    }
    let reduced_dim = r.vessel.dim_e();
    let expected_dim =
        t.rp.n as usize * original.dim_e() - r.basepoints.len();
    let pass = vanishing == checked && checked > 0 && reduced_dim == expected_dim;
    Ok(ImageReport {
        sampled: checked,
        vanishing,
        skipped_denominator: skipped,
        reduced_dim,
        expected_dim,
        delta_nonzero,
        pass,
    })
}

/// Fiber-map report: the Vandermonde-style vector built from an input
/// fiber vector lands in the reduced input fiber at the image point (and
/// likewise for the output side).
#[derive(Clone, Debug)]
pub struct FiberReport {
    pub vectors_checked: usize,
    pub in_residual: f64,
    pub out_residual: f64,
    pub basepoint_collisions: usize,
    pub pass: bool,
}

pub fn fiber_isomorphism_check(
    original: &Vessel,
    t: &Transformed,
    r: &Reduced,
    y1: &Scalar,
    y2: &Scalar,
    tol: f64,
) -> Result<FiberReport> {
    let fib = fibers(original, y1, y2, tol)?;
    let Some((r1, r2)) = t.rp.image_point(y1, y2) else {
        return Err(Error::Input("denominator vanishes at the test point".into()));
    };
    // The input side uses the input-slot machinery already carried by the
    // transform; the output side is symmetric but built from the output-slot
    // determinantal representation (gamma_out, sigma2, sigma1), whose curve
    // is the same, and the fiber must land in the kernel of the compressed
    // output-slot pencil on the output-slot reduced space.
    let (cp0, cp1, cp2) = t.rp.homogenized();
    let n = t.rp.n;
    let dr_out = DetRep::new(
        original.gamma_out.clone(),
        original.sigma2.clone(),
        original.sigma1.clone(),
    )?;
    let red_out = basepoint_reduce(&cp0, &cp1, &cp2, &dr_out, n, tol)?;
    let pencil_on = |b10: &Matrix, b20: &Matrix, b12: &Matrix, cb: &Matrix| {
        let m = b20.scale(&r1).sub(&b10.scale(&r2)).add(b12);
        cb.adjoint().mul(&m).mul(cb)
    };
    let pin = pencil_on(&t.b10, &t.b20, &t.b12, r.cbar.basis());
    let b10o = blown(&cp1, &cp0, n, &dr_out)?;
    let b20o = blown(&cp2, &cp0, n, &dr_out)?;
    let b12o = blown(&cp1, &cp2, n, &dr_out)?;
    let pout = pencil_on(&b10o, &b20o, &b12o, red_out.vbar.basis());
    let x = [Scalar::one(), y1.clone(), y2.clone()];
    let mut report = FiberReport {
        vectors_checked: 0,
        in_residual: 0.0,
        out_residual: 0.0,
        basepoint_collisions: 0,
        pass: true,
    };
    for (fiber, pencil, space, side) in [
        (&fib.e_in, &pin, &r.cbar, 0usize),
        (&fib.e_out, &pout, &red_out.vbar, 1),
    ] {
        let cb = space.basis();
        if space.dim() == 0 {
            report.basepoint_collisions += fiber.dim();
            continue;
        }
        let gram_inv = inverse(&cb.adjoint().mul(cb))
            .map_err(|_| Error::Internal("singular Gram matrix".into()))?;
        for kcol in 0..fiber.dim() {
            let e = fiber.basis().column(kcol);
            let pt = CurvePoint { x: x.clone(), e, exact: x.iter().all(Scalar::is_exact) };
            let w = vandermonde_vector(&pt, n);
            let coords = gram_inv.mul(&cb.adjoint()).mul(&w);
            if coords.is_zero()
                || (!coords.is_exact() && coords.max_abs() <= tol * w.max_abs().max(1.0))
            {
                report.basepoint_collisions += 1;
                continue;
            }
            // the projected coordinates must reproduce w exactly up to the
            // component discarded with the basepoint constraints; residual
            // is measured against the compressed pencil at the image point
            let res = pencil.mul(&coords);
            let scale = pencil.max_abs().max(1.0) * coords.max_abs().max(1.0);
            let rel = res.max_abs() / scale;
            let ok = if res.is_exact() { res.is_zero() } else { rel <= tol };
            report.vectors_checked += 1;
            if side == 0 {
                report.in_residual = report.in_residual.max(rel);
            } else {
                report.out_residual = report.out_residual.max(rel);
            }
            report.pass &= ok;
        }
    }
    Ok(report)
}
