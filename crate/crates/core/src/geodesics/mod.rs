//! Analytic discs in the tetrablock and the symmetrized bidisc.
//!
//! Holds the geodesics through the origin and their generalizations, boundary
//! discs, product discs, the transport `f ↦ (f1/λ, f2, f3/λ)`, and the
//! searches that turn disc families into upper bounds for the Lempert
//! function.

mod discs;
mod search;
mod solve;

pub use discs::*;
pub use search::*;
pub use solve::*;

use serde::{Deserialize, Serialize};

use crate::domains::DomainKind;
use crate::error::Result;
use crate::extremals::HolomorphicFunction;
use crate::C64;

/// A holomorphic map from the unit disc into ℂⁿ.
pub trait AnalyticDisc: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, lambda: C64) -> Vec<C64>;
}

impl<T: AnalyticDisc + ?Sized> AnalyticDisc for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, lambda: C64) -> Vec<C64> {
        (**self).eval(lambda)
    }
}

impl<T: AnalyticDisc + ?Sized> AnalyticDisc for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, lambda: C64) -> Vec<C64> {
        (**self).eval(lambda)
    }
}

/// Closure-backed disc.
pub struct FnDisc<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(C64) -> Vec<C64> + Send + Sync> FnDisc<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(C64) -> Vec<C64> + Send + Sync> AnalyticDisc for FnDisc<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, lambda: C64) -> Vec<C64> {
        (self.f)(lambda)
    }
}

/// Radii `0.1, 0.2, …, 0.9` times the 16th roots of unity.
pub fn standard_samples() -> Vec<C64> {
    let mut out = Vec::with_capacity(144);
    for r in 1..=9 {
        for k in 0..16 {
            out.push(C64::from_polar(
                r as f64 / 10.0,
                std::f64::consts::TAU * k as f64 / 16.0,
            ));
        }
    }
    out
}

/// `max |F(f(λ)) - λ|` over [`standard_samples`].
pub fn left_inverse_residual(f: &dyn AnalyticDisc, left: &dyn HolomorphicFunction) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for lambda in standard_samples() {
        let v = left.eval(&f.eval(lambda))?;
        worst = worst.max((v - lambda).norm());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiscVerdict {
    /// Inside the domain at every sample and `F ∘ f = id` within tolerance.
    GeodesicVerified,
    /// Inside the domain at every sample; no left inverse was checked.
    InDomainOnly,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscVerificationReport {
    /// Largest defining value over the samples (`< 1` inside the domain).
    pub max_e_value: f64,
    pub left_inverse_residual: Option<f64>,
    pub samples: usize,
    pub verdict: DiscVerdict,
}

/// Samples `f` on [`standard_samples`], checks it stays in `domain`, and when
/// a left inverse is supplied checks `F ∘ f = id` to `tol`.
pub fn verify_disc(
    f: &dyn AnalyticDisc,
    domain: DomainKind,
    left: Option<&dyn HolomorphicFunction>,
    tol: f64,
) -> Result<DiscVerificationReport> {
    let samples = standard_samples();
    let mut max_e_value: f64 = 0.0;
    for &lambda in &samples {
        let v = domain.defining_value(&f.eval(lambda))?;
        max_e_value = if v.is_nan() { f64::INFINITY } else { max_e_value.max(v) };
    }
    let in_domain = max_e_value < 1.0;
    let residual = match left {
        Some(left) => Some(left_inverse_residual(f, left).unwrap_or(f64::INFINITY)),
        None => None,
    };
    let verdict = match (in_domain, residual) {
        (false, _) => DiscVerdict::Failed,
        (true, None) => DiscVerdict::InDomainOnly,
        (true, Some(r)) if r < tol => DiscVerdict::GeodesicVerified,
        (true, Some(_)) => DiscVerdict::Failed,
    };
    Ok(DiscVerificationReport {
        max_e_value,
        left_inverse_residual: residual,
        samples: samples.len(),
        verdict,
    })
}
