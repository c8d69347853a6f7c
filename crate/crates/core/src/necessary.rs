//! The necessary condition for complex geodesics of circular domains.
//!
//! If `f` is a complex geodesic of an `(α1, …, αn)`-circular domain with left
//! inverse `F`, then `ψ(λ) = Σ ∂F/∂z_j(f(λ)) · i α_j f_j(λ)` has the shape
//! `-conj(ψ(0)) λ² + iCλ + ψ(0)` with `C` real. This module samples `ψ`
//! along a disc, fits that shape, and reports how far the samples are from it.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremals::HolomorphicFunction;
use crate::geodesics::{left_inverse_residual, AnalyticDisc};
use crate::{C64, I};

/// Largest `max |F(f(λ)) - λ|` for which a disc counts as having `F` as a
/// left inverse.
pub const HYPOTHESIS_TOL: f64 = 1e-8;
pub const ANALYTIC_FIT_TOL: f64 = 1e-7;
pub const NUMERIC_FIT_TOL: f64 = 1e-5;
pub const NUMERIC_STEP: f64 = 1e-5;
pub const MIN_SAMPLES: usize = 8;

/// Weights of a circular action `z ↦ (e^{iα1 t} z1, …, e^{iαn t} zn)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircularAction {
    pub alpha: Vec<f64>,
}

impl CircularAction {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("action weights must be finite".into()));
        }
        Ok(Self { alpha })
    }

    /// The two actions under which the tetrablock is invariant.
    pub fn tetrablock() -> [Self; 2] {
        [
            Self { alpha: vec![1.0, 0.0, 1.0] },
            Self { alpha: vec![0.0, 1.0, 1.0] },
        ]
    }

    pub fn symmetrized_bidisc() -> Self {
        Self { alpha: vec![1.0, 2.0] }
    }

    /// Rotation of the `j`-th coordinate only.
    pub fn coordinate(j: usize, dim: usize) -> Result<Self> {
        if j >= dim {
            return Err(Error::InvalidParameter(format!("coordinate {j} out of range for dimension {dim}")));
        }
        let mut alpha = vec![0.0; dim];
        alpha[j] = 1.0;
        Ok(Self { alpha })
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }
}

/// `γ(z) = i (α1 z1, …, αn zn)`.
pub fn vector_field(action: &CircularAction, z: &[C64]) -> Result<Vec<C64>> {
    if z.len() != action.dim() {
        return Err(Error::Dimension {
            expected: action.dim(),
            got: z.len(),
        });
    }
    Ok(action.alpha.iter().zip(z).map(|(a, zj)| I * *a * zj).collect())
}

/// Complex-step estimate of the partial derivatives of a holomorphic `F`:
/// the four-point stencil
/// `(F(z+h) - F(z-h) - iF(z+ih) + iF(z-ih)) / 4h` in each coordinate, whose
/// error is `O(h⁴)`, combined over `h` and `h/2` by Richardson extrapolation.
pub fn numeric_gradient(f: &dyn HolomorphicFunction, z: &[C64], step: f64) -> Result<Vec<C64>> {
    let stencil = |j: usize, h: f64| -> Result<C64> {
        let mut p = z.to_vec();
        let mut at = |d: C64| -> Result<C64> {
            p[j] = z[j] + d;
            f.eval(&p)
        };
        let (hr, hi) = (C64::new(h, 0.0), C64::new(0.0, h));
        Ok((at(hr)? - at(-hr)? - I * at(hi)? + I * at(-hi)?) / (4.0 * h))
    };
    (0..z.len())
        .map(|j| {
            let coarse = stencil(j, step)?;
            let fine = stencil(j, step / 2.0)?;
            Ok((16.0 * fine - coarse) / 15.0)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradientSource {
    Analytic,
    Numeric,
}

/// Closed-form gradient when `F` provides one, otherwise [`numeric_gradient`].
pub fn gradient(f: &dyn HolomorphicFunction, z: &[C64]) -> Result<(Vec<C64>, GradientSource)> {
    match f.gradient(z) {
        Some(g) => Ok((g?, GradientSource::Analytic)),
        None => Ok((numeric_gradient(f, z, NUMERIC_STEP)?, GradientSource::Numeric)),
    }
}

/// `ψ(λ) = Σ ∂F/∂z_j(f(λ)) γ_j(f(λ))`.
pub fn psi_of_lambda(
    f: &dyn HolomorphicFunction,
    disc: &dyn AnalyticDisc,
    action: &CircularAction,
    lambda: C64,
) -> Result<C64> {
    let z = disc.eval(lambda);
    let field = vector_field(action, &z)?;
    let (g, _) = gradient(f, &z)?;
    Ok(g.iter().zip(&field).map(|(a, b)| a * b).sum())
}

/// `λ = r e^{2πik/16}` for `r ∈ {0.15, 0.35, 0.55, 0.75}`.
pub fn fit_samples() -> Vec<C64> {
    let mut out = Vec::with_capacity(64);
    for r in [0.15, 0.35, 0.55, 0.75] {
        for k in 0..16 {
            out.push(C64::from_polar(r, std::f64::consts::TAU * k as f64 / 16.0));
        }
    }
    out
}

/// Best fit of `ψ(λ) = -conj(psi0) λ² + i c λ + psi0` with `c` real.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    pub psi0: C64,
    pub c: f64,
    /// `max |model(λ) - ψ(λ)|` over the samples.
    pub residual: f64,
}

impl QuadraticFit {
    pub fn model(&self, lambda: C64) -> C64 {
        -self.psi0.conj() * lambda * lambda + I * self.c * lambda + self.psi0
    }

    /// The constant `a` of the equivalent form `conj(a) λ² + Cλ + a` of
    /// `ψ / i`.
    pub fn a(&self) -> C64 {
        -I * self.psi0
    }
}

fn check_samples(samples: &[(C64, C64)]) -> Result<()> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    Ok(())
}

/// Least-squares fit of the constrained quadratic form. Writing
/// `psi0 = x + iy`, the model is `x(1 - λ²) + y·i(1 + λ²) + c·iλ`, which is
/// real-linear in `(x, y, c)`; real and imaginary parts give the rows.
pub fn fit_quadratic_form(samples: &[(C64, C64)]) -> Result<QuadraticFit> {
    check_samples(samples)?;
    let n = samples.len();
    let mut a = DMatrix::zeros(2 * n, 3);
    let mut b = DVector::zeros(2 * n);
    for (k, &(l, v)) in samples.iter().enumerate() {
        let cols = [1.0 - l * l, I * (1.0 + l * l), I * l];
        for (j, col) in cols.iter().enumerate() {
            a[(2 * k, j)] = col.re;
            a[(2 * k + 1, j)] = col.im;
        }
        b[2 * k] = v.re;
        b[2 * k + 1] = v.im;
    }
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-12 * sv.max() {
        return Err(Error::RankDeficient);
    }
    let x = svd.solve(&b, 0.0).map_err(|_| Error::RankDeficient)?;
    let mut fit = QuadraticFit {
        psi0: C64::new(x[0], x[1]),
        c: x[2],
        residual: 0.0,
    };
    fit.residual = samples
        .iter()
        .map(|&(l, v)| (fit.model(l) - v).norm())
        .fold(0.0, f64::max);
    Ok(fit)
}

/// Unconstrained complex fit `c2 λ² + c1 λ + c0`, for checking that the
/// constraints of [`QuadraticFit`] hold on their own rather than by
/// construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeQuadraticFit {
    pub c0: C64,
    pub c1: C64,
    pub c2: C64,
    pub residual: f64,
}

impl FreeQuadraticFit {
    /// `|c2 + conj(c0)|`, zero when the outer coefficients are coupled.
    pub fn coupling_defect(&self) -> f64 {
        (self.c2 + self.c0.conj()).norm()
    }

    /// `c1 / i`, real when the middle coefficient has the expected form.
    pub fn middle(&self) -> C64 {
        self.c1 / I
    }
}

pub fn fit_free_quadratic(samples: &[(C64, C64)]) -> Result<FreeQuadraticFit> {
    check_samples(samples)?;
    let n = samples.len();
    let a = DMatrix::from_fn(n, 3, |k, j| samples[k].0.powi(j as i32));
    let b = DVector::from_iterator(n, samples.iter().map(|s| s.1));
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-12 * sv.max() {
        return Err(Error::RankDeficient);
    }
    let x = svd.solve(&b, 0.0).map_err(|_| Error::RankDeficient)?;
    let residual = samples
        .iter()
        .map(|&(l, v)| (x[0] + x[1] * l + x[2] * l * l - v).norm())
        .fold(0.0, f64::max);
    Ok(FreeQuadraticFit {
        c0: x[0],
        c1: x[1],
        c2: x[2],
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NecessaryVerdict {
    Pass,
    /// The samples are not of the required shape.
    FitRejected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NecessaryReport {
    pub fit: QuadraticFit,
    pub free_fit: FreeQuadraticFit,
    pub left_inverse_residual: f64,
    pub gradient: GradientSource,
    pub tolerance: f64,
    pub samples: usize,
    pub verdict: NecessaryVerdict,
}

/// Checks the necessary condition for `disc` with left inverse `f` under
/// `action`. A disc for which `f` is not a left inverse is reported as
/// [`Error::Hypothesis`] rather than as a failed fit. `tol` defaults to
/// [`ANALYTIC_FIT_TOL`] or [`NUMERIC_FIT_TOL`] depending on the gradient used.
pub fn geodesic_necessary_check(
    f: &dyn HolomorphicFunction,
    disc: &dyn AnalyticDisc,
    action: &CircularAction,
    tol: Option<f64>,
) -> Result<NecessaryReport> {
    if f.dim() != disc.dim() || action.dim() != disc.dim() {
        return Err(Error::Dimension {
            expected: disc.dim(),
            got: if f.dim() != disc.dim() { f.dim() } else { action.dim() },
        });
    }
    let hypothesis = left_inverse_residual(disc, f).unwrap_or(f64::INFINITY);
    if hypothesis.is_nan() || hypothesis >= HYPOTHESIS_TOL {
        return Err(Error::Hypothesis {
            residual: hypothesis,
            threshold: HYPOTHESIS_TOL,
        });
    }
    let mut source = GradientSource::Analytic;
    let mut samples = Vec::with_capacity(64);
    for lambda in fit_samples() {
        let z = disc.eval(lambda);
        let field = vector_field(action, &z)?;
        let (g, s) = gradient(f, &z)?;
        if s == GradientSource::Numeric {
            source = s;
        }
        samples.push((lambda, g.iter().zip(&field).map(|(a, b)| a * b).sum()));
    }
    let fit = fit_quadratic_form(&samples)?;
    let free_fit = fit_free_quadratic(&samples)?;
    let tolerance = tol.unwrap_or(match source {
        GradientSource::Analytic => ANALYTIC_FIT_TOL,
        GradientSource::Numeric => NUMERIC_FIT_TOL,
    });
    Ok(NecessaryReport {
        fit,
        free_fit,
        left_inverse_residual: hypothesis,
        gradient: source,
        tolerance,
        samples: samples.len(),
        verdict: if fit.residual < tolerance {
            NecessaryVerdict::Pass
        } else {
            NecessaryVerdict::FitRejected
        },
    })
}

/// The single-coordinate form for Reinhardt domains: the action rotating
/// only `z_j`.
pub fn reinhardt_check(
    f: &dyn HolomorphicFunction,
    disc: &dyn AnalyticDisc,
    j: usize,
    tol: Option<f64>,
) -> Result<NecessaryReport> {
    let action = CircularAction::coordinate(j, disc.dim())?;
    geodesic_necessary_check(f, disc, &action, tol)
}
