//! W-function expansions, coefficient-space differentiation and two model
//! time steppers.
//!
//! The diffusion stepper is implicit Euler for `u_t = u_xx`, i.e.
//! `(I - dt D^2) u+ = u`. Because `D^2` is negative semidefinite the step is a
//! contraction. The advection stepper is the Cayley transform
//! `(I - dt/2 D) u+ = (I + dt/2 D) u`, which is orthogonal since `D` is
//! skew-symmetric.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobidiff::{kappa, DiffMatrixBuild};
use crate::semisep::{product, StructuredLu};
use crate::specfun::{gauss_jacobi_rule, jacobi_eval, weight_mass, JacobiParams, OrthonormalRecurrence};

/// Expansion coefficients in the W-function basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffVector {
    pub params: JacobiParams,
    pub coeffs: Vec<f64>,
}

impl CoeffVector {
    pub fn new(params: JacobiParams, coeffs: Vec<f64>) -> Result<Self> {
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::Input(format!("coefficient {k} is not finite")));
        }
        Ok(Self { params, coeffs })
    }

    pub fn zeros(params: JacobiParams, n: usize) -> Self {
        Self { params, coeffs: vec![0.0; n] }
    }

    /// The coordinate vector of `phi_k`.
    pub fn unit(params: JacobiParams, n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::Index { row: k, col: 0, size: n });
        }
        let mut coeffs = vec![0.0; n];
        coeffs[k] = 1.0;
        Ok(Self { params, coeffs })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Euclidean norm, equal to the `L2` norm of the represented function.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `sum_k u_k phi_k(x)`.
    pub fn reconstruct(&self, x: f64) -> Result<f64> {
        let phi = wfun_all(&self.params, self.len(), x)?;
        Ok(phi.iter().zip(&self.coeffs).map(|(p, c)| p * c).sum())
    }
}

fn check_point(x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > 1.0 {
        return Err(Error::Domain(format!("x must lie in [-1, 1], got {x}")));
    }
    Ok(())
}

/// `phi_n(x) = kappa_n (1-x)^(alpha/2) (1+x)^(beta/2) P_n(x)`, zero at `x = +-1`.
pub fn wfun_eval(params: &JacobiParams, n: usize, x: f64) -> Result<f64> {
    check_point(x)?;
    if x.abs() == 1.0 {
        return Ok(0.0);
    }
    Ok(kappa(params, n) * params.sqrt_weight(x) * jacobi_eval(params.alpha, params.beta, n, x)?)
}

/// `phi_0(x), ..., phi_{n-1}(x)` by the orthonormal recurrence.
pub fn wfun_all(params: &JacobiParams, n: usize, x: f64) -> Result<Vec<f64>> {
    check_point(x)?;
    if x.abs() == 1.0 {
        return Ok(vec![0.0; n]);
    }
    let mut p = orthonormal_values(params, n, x)?;
    let s = params.sqrt_weight(x);
    p.iter_mut().for_each(|v| *v *= s);
    Ok(p)
}

/// Orthonormal polynomials `p_0(x), ..., p_{n-1}(x)`.
fn orthonormal_values(params: &JacobiParams, n: usize, x: f64) -> Result<Vec<f64>> {
    let rec = OrthonormalRecurrence::new(params.alpha, params.beta, n)?;
    Ok(orthonormal_values_with(&rec, params, n, x))
}

fn orthonormal_values_with(rec: &OrthonormalRecurrence, params: &JacobiParams, n: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n);
    if n == 0 {
        return p;
    }
    p.push(weight_mass(params.alpha, params.beta).sqrt().recip());
    for k in 0..n - 1 {
        let prev = if k == 0 { 0.0 } else { rec.b[k - 1] * p[k - 1] };
        p.push(((x - rec.a[k]) * p[k] - prev) / rec.b[k]);
    }
    p
}

/// First `n` coefficients `f_k = int f phi_k`, by a Gauss–Jacobi rule with
/// `max(2n, 64)` nodes applied to `f / sqrt(w)`.
pub fn expand<F: Fn(f64) -> f64>(params: &JacobiParams, f: F, n: usize) -> Result<CoeffVector> {
    let q = (2 * n).max(64);
    let rule = gauss_jacobi_rule(params.alpha, params.beta, q)?;
    let rec = OrthonormalRecurrence::new(params.alpha, params.beta, n)?;
    let mut coeffs = vec![0.0; n];
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let sample = f(x);
        if !sample.is_finite() {
            return Err(Error::Input(format!("f({x}) is not finite")));
        }
        let g = w * sample / params.sqrt_weight(x);
        for (c, p) in coeffs.iter_mut().zip(orthonormal_values_with(&rec, params, n, x)) {
            *c += g * p;
        }
    }
    CoeffVector::new(*params, coeffs)
}

fn check_len(build: &DiffMatrixBuild, u: &CoeffVector) -> Result<()> {
    if u.len() != build.n {
        return Err(Error::Dimension { expected: build.n, got: u.len() });
    }
    Ok(())
}

/// Coefficients of the derivative of `sum_m u_m phi_m`.
///
/// `(u')_n = sum_m D[m][n] u_m`, which is `-(D u)_n` by skew-symmetry.
pub fn differentiate(build: &DiffMatrixBuild, u: &CoeffVector) -> Result<CoeffVector> {
    check_len(build, u)?;
    let du = build.matvec(&u.coeffs)?;
    Ok(CoeffVector { params: u.params, coeffs: du.into_iter().map(|v| -v).collect() })
}

/// Linear algebra used by the steppers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Generator products and the `O(N)` structured solver.
    Structured,
    /// Dense matrices and LU.
    Dense,
}

impl Route {
    /// Structured when the build carries generators.
    pub fn preferred(build: &DiffMatrixBuild) -> Self {
        if build.semisep().is_some() {
            Route::Structured
        } else {
            Route::Dense
        }
    }
}

#[derive(Debug, Clone)]
enum Factor {
    Structured(StructuredLu),
    Dense(nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl Factor {
    fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        match self {
            Factor::Structured(lu) => lu.solve(rhs),
            Factor::Dense(lu) => lu
                .solve(&DVector::from_column_slice(rhs))
                .map(|x| x.as_slice().to_vec())
                .ok_or(Error::Singular { index: 0 }),
        }
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Domain(format!("dt must be positive and finite, got {dt}")));
    }
    Ok(())
}

fn structured_d(build: &DiffMatrixBuild) -> Result<crate::semisep::SemiSepGenerators> {
    build
        .semisep()
        .ok_or_else(|| Error::Unsupported(format!("the {} build carries no generators", build.source.name())))
}

/// `I + s M` as a dense matrix.
fn shifted_dense(m: &DMatrix<f64>, s: f64) -> DMatrix<f64> {
    DMatrix::identity(m.nrows(), m.ncols()) + m * s
}

/// Implicit Euler for `u_t = u_xx`: `(I - dt D^2) u+ = u`.
#[derive(Debug, Clone)]
pub struct DiffusionStepper {
    n: usize,
    dt: f64,
    route: Route,
    factor: Factor,
}

impl DiffusionStepper {
    pub fn new(build: &DiffMatrixBuild, dt: f64) -> Result<Self> {
        Self::with_route(build, dt, Route::preferred(build))
    }

    pub fn with_route(build: &DiffMatrixBuild, dt: f64, route: Route) -> Result<Self> {
        check_dt(dt)?;
        let factor = match route {
            Route::Structured => {
                let d = structured_d(build)?;
                let d2 = product(&d, &d)?;
                Factor::Structured(StructuredLu::new(&d2.scale(-dt), 1.0)?)
            }
            Route::Dense => {
                let d = build.to_dense()?;
                let lu = shifted_dense(&(&d * &d), -dt).lu();
                if !lu.is_invertible() {
                    return Err(Error::Singular { index: 0 });
                }
                Factor::Dense(lu)
            }
        };
        Ok(Self { n: build.n, dt, route, factor })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn step(&self, u: &CoeffVector) -> Result<CoeffVector> {
        if u.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: u.len() });
        }
        Ok(CoeffVector { params: u.params, coeffs: self.factor.solve(&u.coeffs)? })
    }
}

/// Cayley step for `u_t = D u`: `(I - dt/2 D) u+ = (I + dt/2 D) u`.
#[derive(Debug, Clone)]
pub struct CayleyStepper {
    n: usize,
    dt: f64,
    route: Route,
    factor: Factor,
    explicit: Explicit,
}

#[derive(Debug, Clone)]
enum Explicit {
    Structured(crate::semisep::SemiSepGenerators),
    Dense(DMatrix<f64>),
}

impl CayleyStepper {
    pub fn new(build: &DiffMatrixBuild, dt: f64) -> Result<Self> {
        Self::with_route(build, dt, Route::preferred(build))
    }

    pub fn with_route(build: &DiffMatrixBuild, dt: f64, route: Route) -> Result<Self> {
        check_dt(dt)?;
        let half = 0.5 * dt;
        let (factor, explicit) = match route {
            Route::Structured => {
                let d = structured_d(build)?;
                let lu = StructuredLu::new(&d.scale(-half), 1.0)?;
                (Factor::Structured(lu), Explicit::Structured(d))
            }
            Route::Dense => {
                let d = build.to_dense()?;
                let lu = shifted_dense(&d, -half).lu();
                if !lu.is_invertible() {
                    return Err(Error::Singular { index: 0 });
                }
                (Factor::Dense(lu), Explicit::Dense(d))
            }
        };
        Ok(Self { n: build.n, dt, route, factor, explicit })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn step(&self, u: &CoeffVector) -> Result<CoeffVector> {
        if u.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: u.len() });
        }
        let du = match &self.explicit {
            Explicit::Structured(g) => g.matvec(&u.coeffs)?,
            Explicit::Dense(d) => (d * DVector::from_column_slice(&u.coeffs)).as_slice().to_vec(),
        };
        let half = 0.5 * self.dt;
        let rhs: Vec<f64> = u.coeffs.iter().zip(&du).map(|(v, dv)| v + half * dv).collect();
        Ok(CoeffVector { params: u.params, coeffs: self.factor.solve(&rhs)? })
    }
}

/// One implicit Euler diffusion step.
pub fn step_diffusion(build: &DiffMatrixBuild, u: &CoeffVector, dt: f64) -> Result<CoeffVector> {
    check_len(build, u)?;
    DiffusionStepper::new(build, dt)?.step(u)
}

/// One Cayley advection step.
pub fn step_advection_cayley(build: &DiffMatrixBuild, u: &CoeffVector, dt: f64) -> Result<CoeffVector> {
    check_len(build, u)?;
    CayleyStepper::new(build, dt)?.step(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobidiff::{build, Source};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(a, b).unwrap()
    }

    fn random(params: JacobiParams, n: usize, seed: u64) -> CoeffVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CoeffVector::new(params, (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn wfun_examples() {
        let params = p(2.0, 2.0);
        assert_eq!(wfun_eval(&params, 3, 1.0).unwrap(), 0.0);
        assert_eq!(wfun_eval(&params, 0, -1.0).unwrap(), 0.0);
        assert!((wfun_eval(&params, 0, 0.0).unwrap() - 15f64.sqrt() / 4.0).abs() < 1e-15);
        assert!(matches!(wfun_eval(&params, 0, 1.5), Err(Error::Domain(_))));
        for n in [0, 3, 9] {
            let rule = gauss_jacobi_rule(0.0, 0.0, n + 1 + 2).unwrap();
            let norm = rule.integrate(|x| wfun_eval(&params, n, x).unwrap().powi(2));
            assert!((norm - 1.0).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn recurrence_matches_pointwise() {
        let params = p(1.5, 0.5);
        for x in [-0.99, -0.4, 0.0, 0.35, 0.8] {
            let all = wfun_all(&params, 12, x).unwrap();
            for (n, v) in all.iter().enumerate() {
                let want = wfun_eval(&params, n, x).unwrap();
                assert!((v - want).abs() < 1e-12 * want.abs().max(1.0), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn expand_examples() {
        let params = p(2.0, 2.0);
        let e3 = expand(&params, |x| wfun_eval(&params, 3, x).unwrap(), 10).unwrap();
        for (k, c) in e3.coeffs.iter().enumerate() {
            assert!((c - if k == 3 { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
        let f = |x| 2.0 * wfun_eval(&params, 0, x).unwrap() - wfun_eval(&params, 2, x).unwrap();
        let u = expand(&params, f, 6).unwrap();
        for (c, want) in u.coeffs.iter().zip([2.0, 0.0, -1.0, 0.0, 0.0, 0.0]) {
            assert!((c - want).abs() < 1e-12);
        }
        assert!(matches!(expand(&params, |_| f64::NAN, 4), Err(Error::Input(_))));
    }

    #[test]
    fn expand_matches_refined_quadrature() {
        let params = p(2.0, 2.0);
        let f = |x: f64| (1.0 - x * x).powi(2);
        let n = 20;
        let u = expand(&params, f, n).unwrap();
        // f / sqrt(w) = 1 - x^2, integrated against p_k w on twice the nodes.
        let rule = gauss_jacobi_rule(2.0, 2.0, 256).unwrap();
        for (k, c) in u.coeffs.iter().enumerate() {
            let want = rule.integrate(|x| (1.0 - x * x) * orthonormal_values(&params, n, x).unwrap()[k]);
            assert!((c - want).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn differentiate_zero_and_example() {
        let params = p(2.0, 2.0);
        let b = build(&params, 16, Source::Generators).unwrap();
        let zero = CoeffVector::zeros(params, 16);
        assert!(differentiate(&b, &zero).unwrap().coeffs.iter().all(|&c| c == 0.0));

        let k0 = kappa(&params, 0);
        let u = expand(&params, |x| k0 * (1.0 - x * x).powi(2), 16).unwrap();
        let du = differentiate(&b, &u).unwrap();
        let x = 0.3;
        let want = -4.0 * k0 * x * (1.0 - x * x);
        assert!((du.reconstruct(x).unwrap() - want).abs() < 1e-6);
    }

    #[test]
    fn differentiate_routes_agree() {
        let params = p(4.0, 2.0);
        let u = random(params, 48, 3);
        let g = differentiate(&build(&params, 48, Source::Generators).unwrap(), &u).unwrap();
        let d = differentiate(&build(&params, 48, Source::ClosedForm).unwrap(), &u).unwrap();
        assert!((g.norm() - d.norm()).abs() < 1e-11 * g.norm());
        let short = CoeffVector::zeros(params, 4);
        let b = build(&params, 48, Source::Generators).unwrap();
        assert!(matches!(differentiate(&b, &short), Err(Error::Dimension { .. })));
    }

    #[test]
    fn diffusion_step_contracts_and_routes_agree() {
        let params = p(2.0, 2.0);
        let b = build(&params, 64, Source::Generators).unwrap();
        let zero = CoeffVector::zeros(params, 64);
        assert!(step_diffusion(&b, &zero, 1e-2).unwrap().coeffs.iter().all(|&c| c == 0.0));
        let u = random(params, 64, 9);
        let s = step_diffusion(&b, &u, 1e-2).unwrap();
        assert!(s.norm() <= u.norm());
        let dense = DiffusionStepper::with_route(&b, 1e-2, Route::Dense).unwrap().step(&u).unwrap();
        for (x, y) in s.coeffs.iter().zip(&dense.coeffs) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(matches!(step_diffusion(&b, &u, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn cayley_step_conserves_norm() {
        let params = p(2.0, 2.0);
        let b = build(&params, 64, Source::Generators).unwrap();
        let zero = CoeffVector::zeros(params, 64);
        assert!(step_advection_cayley(&b, &zero, 1e-2).unwrap().coeffs.iter().all(|&c| c == 0.0));
        let structured = CayleyStepper::new(&b, 1e-2).unwrap();
        let dense = CayleyStepper::with_route(&b, 1e-2, Route::Dense).unwrap();
        let mut u = random(params, 64, 5);
        let mut v = u.clone();
        let start = u.norm();
        for _ in 0..100 {
            u = structured.step(&u).unwrap();
            v = dense.step(&v).unwrap();
            for (x, y) in u.coeffs.iter().zip(&v.coeffs) {
                assert!((x - y).abs() < 1e-10);
            }
        }
        assert!((u.norm() - start).abs() <= 1e-10);
    }

    #[test]
    fn structured_route_needs_generators() {
        let params = p(1.0, 1.0);
        let b = build(&params, 8, Source::ClosedForm).unwrap();
        assert_eq!(Route::preferred(&b), Route::Dense);
        assert!(matches!(
            DiffusionStepper::with_route(&b, 0.1, Route::Structured),
            Err(Error::Unsupported(_))
        ));
    }
}
