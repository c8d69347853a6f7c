use serde::{Deserialize, Serialize};

use super::{standard_samples, AnalyticDisc};
use crate::domains::{g2_membership, tetra_e_value, G2Point, Location, TetraPoint};
use crate::error::{Error, Result};
use crate::extremals::sigma;
use crate::hyperbolic::{check_open, check_unimodular, BlaschkeMap, HyperbolicDistance};
use crate::C64;

const ORIGIN_VALUE_TOL: f64 = 1e-12;

fn check_lambda(lambda: C64) -> Result<()> {
    check_open("lambda", lambda)
}

fn check_unit_interval(what: &str, c: f64, closed_right: bool) -> Result<()> {
    let ok = c >= 0.0 && if closed_right { c <= 1.0 } else { c < 1.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{what} must lie in [0, 1{} , got {c}",
            if closed_right { "]" } else { ")" }
        )))
    }
}

/// A Blaschke map with the unimodular factor chosen so that its value at the
/// origin is real and `<= 0`. Returns the map and `C = -φ(0)`.
pub fn normalized_phi(zeros: Vec<C64>, scale: f64) -> Result<(BlaschkeMap, f64)> {
    let at_origin: C64 = zeros.iter().fold(C64::new(1.0, 0.0), |acc, &a| acc * (-a));
    let u = if at_origin.norm() > 0.0 {
        -at_origin.conj() / at_origin.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let phi = BlaschkeMap::new(u, zeros, scale)?;
    let c = -phi.value_at_origin().re;
    Ok((phi, c.max(0.0)))
}

/// Normalizes `φ = scale · Π (λ - a_k)/(1 - conj(a_k) λ)` to `φ(0) = -C <= 0`
/// and moves the rotation into `ω1`, so that `ω1 φ`, `ω1 C` and `C φ` depend
/// smoothly on `(omega1_raw, zeros, scale)`. Returns `(φ, C, ω1)`.
pub(crate) fn rotated_phi(omega1_raw: C64, zeros: Vec<C64>, scale: f64) -> Result<(BlaschkeMap, f64, C64)> {
    let at_origin: C64 = scale * zeros.iter().fold(C64::new(1.0, 0.0), |acc, &a| acc * (-a));
    let c = at_origin.norm();
    let v = if c > 0.0 { -at_origin.conj() / c } else { C64::new(1.0, 0.0) };
    let phi = BlaschkeMap::new(v, zeros, scale)?;
    Ok((phi, c, omega1_raw * v.conj()))
}

/// Parameters of a complex geodesic through the origin,
/// `λ ↦ (ω1 (φ + C)/(1 + C), ω2 λ (1 + Cφ)/(1 + C), ω1 ω2 λ φ)` with
/// `φ: 𝔻 → 𝔻̄`, `φ(0) = -C`, `C ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OriginGeodesicParams {
    pub c: f64,
    pub omega1: C64,
    pub omega2: C64,
    pub phi: BlaschkeMap,
}

impl OriginGeodesicParams {
    pub fn new(c: f64, omega1: C64, omega2: C64, phi: BlaschkeMap) -> Result<Self> {
        check_unit_interval("C", c, true)?;
        let omega1 = check_unimodular("omega1", omega1)?;
        let omega2 = check_unimodular("omega2", omega2)?;
        let gap = (phi.value_at_origin() + c).norm();
        if gap > ORIGIN_VALUE_TOL {
            return Err(Error::InvalidParameter(format!(
                "phi(0) must equal -C = {}; |phi(0) + C| = {gap:e}",
                -c
            )));
        }
        Ok(Self {
            c,
            omega1,
            omega2,
            phi,
        })
    }

    /// Reads `C` off `φ(0)`, which must be real and nonpositive.
    pub fn from_phi(omega1: C64, omega2: C64, phi: BlaschkeMap) -> Result<Self> {
        let c = -phi.value_at_origin().re;
        Self::new(c.clamp(0.0, 1.0), omega1, omega2, phi)
    }

    /// The `C = 1` edge case: `φ ≡ -1`, giving `λ ↦ (0, 0, -ω1 ω2 λ)`.
    pub fn degenerate(omega1: C64, omega2: C64) -> Result<Self> {
        Self::new(1.0, omega1, omega2, BlaschkeMap::constant(C64::new(-1.0, 0.0))?)
    }

    pub fn eval(&self, lambda: C64) -> TetraPoint {
        let phi = self.phi.eval(lambda);
        let c = self.c;
        TetraPoint::new(
            self.omega1 * (phi + c) / (1.0 + c),
            self.omega2 * lambda * (1.0 + c * phi) / (1.0 + c),
            self.omega1 * self.omega2 * lambda * phi,
        )
    }
}

pub fn eval_origin_geodesic(p: &OriginGeodesicParams, lambda: C64) -> Result<TetraPoint> {
    check_lambda(lambda)?;
    Ok(p.eval(lambda))
}

/// An origin geodesic as a disc, optionally followed by the swap of the first
/// two coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OriginGeodesic {
    pub params: OriginGeodesicParams,
    pub swapped: bool,
}

impl OriginGeodesic {
    pub fn new(params: OriginGeodesicParams) -> Self {
        Self {
            params,
            swapped: false,
        }
    }

    pub fn point(&self, lambda: C64) -> TetraPoint {
        let p = self.params.eval(lambda);
        if self.swapped {
            sigma(&p)
        } else {
            p
        }
    }

    /// `conj(ω2) Ψ_{conj(ω1)}` (composed with the swap when needed), for which
    /// `F ∘ f = id`.
    pub fn left_inverse(&self) -> crate::extremals::PsiFunction {
        let f = crate::extremals::PsiFunction::geodesic_left_inverse(self.params.omega1, self.params.omega2);
        if self.swapped {
            f.swapped()
        } else {
            f
        }
    }
}

impl AnalyticDisc for OriginGeodesic {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, lambda: C64) -> Vec<C64> {
        self.point(lambda).to_array().to_vec()
    }
}

/// `λ ↦ (ω1 (φ + C)/(1 + C), ω2 ψ (1 + Cφ)/(1 + C), ω1 ω2 φ ψ)` with
/// `φ, ψ: 𝔻 → 𝔻`, `C ∈ [0, 1)`. Always maps into the tetrablock; a complex
/// geodesic whenever `ψ` is an automorphism.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralDiscParams {
    pub c: f64,
    pub omega1: C64,
    pub omega2: C64,
    pub phi: BlaschkeMap,
    pub psi: BlaschkeMap,
}

impl GeneralDiscParams {
    pub fn new(c: f64, omega1: C64, omega2: C64, phi: BlaschkeMap, psi: BlaschkeMap) -> Result<Self> {
        check_unit_interval("C", c, false)?;
        let omega1 = check_unimodular("omega1", omega1)?;
        let omega2 = check_unimodular("omega2", omega2)?;
        if !phi.maps_into_open_disc() || !psi.maps_into_open_disc() {
            return Err(Error::InvalidParameter(
                "phi and psi must map into the open disc".into(),
            ));
        }
        Ok(Self {
            c,
            omega1,
            omega2,
            phi,
            psi,
        })
    }

    pub fn eval(&self, lambda: C64) -> TetraPoint {
        let phi = self.phi.eval(lambda);
        let psi = self.psi.eval(lambda);
        let c = self.c;
        TetraPoint::new(
            self.omega1 * (phi + c) / (1.0 + c),
            self.omega2 * psi * (1.0 + c * phi) / (1.0 + c),
            self.omega1 * self.omega2 * phi * psi,
        )
    }

    pub fn is_geodesic(&self) -> bool {
        self.psi.is_automorphism()
    }
}

pub fn eval_general_disc(p: &GeneralDiscParams, lambda: C64) -> Result<TetraPoint> {
    check_lambda(lambda)?;
    Ok(p.eval(lambda))
}

impl AnalyticDisc for GeneralDiscParams {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, lambda: C64) -> Vec<C64> {
        GeneralDiscParams::eval(self, lambda).to_array().to_vec()
    }
}

/// A disc lying in the boundary of the tetrablock:
/// `λ ↦ (ω1 (φ + C)/(1 + C), ω2 (1 + Cφ)/(1 + C), ω1 ω2 φ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDisc {
    pub c: f64,
    pub omega1: C64,
    pub omega2: C64,
    pub phi: BlaschkeMap,
}

impl BoundaryDisc {
    pub fn new(c: f64, omega1: C64, omega2: C64, phi: BlaschkeMap) -> Result<Self> {
        check_unit_interval("C", c, true)?;
        Ok(Self {
            c,
            omega1: check_unimodular("omega1", omega1)?,
            omega2: check_unimodular("omega2", omega2)?,
            phi,
        })
    }

    pub fn point(&self, lambda: C64) -> TetraPoint {
        let phi = self.phi.eval(lambda);
        let c = self.c;
        TetraPoint::new(
            self.omega1 * (phi + c) / (1.0 + c),
            self.omega2 * (1.0 + c * phi) / (1.0 + c),
            self.omega1 * self.omega2 * phi,
        )
    }
}

impl AnalyticDisc for BoundaryDisc {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, lambda: C64) -> Vec<C64> {
        self.point(lambda).to_array().to_vec()
    }
}

pub fn eval_boundary_disc(
    c: f64,
    omega1: C64,
    omega2: C64,
    phi: &BlaschkeMap,
    lambda: C64,
) -> Result<TetraPoint> {
    check_lambda(lambda)?;
    Ok(BoundaryDisc::new(c, omega1, omega2, phi.clone())?.point(lambda))
}

/// `λ ↦ (a(λ), b(λ), a(λ) b(λ))`, a disc in the orbit of the origin; a complex
/// geodesic when `a` or `b` is an automorphism.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductDisc {
    pub a: BlaschkeMap,
    pub b: BlaschkeMap,
}

impl ProductDisc {
    pub fn new(a: BlaschkeMap, b: BlaschkeMap) -> Result<Self> {
        if !a.maps_into_open_disc() || !b.maps_into_open_disc() {
            return Err(Error::InvalidParameter(
                "product disc factors must map into the open disc".into(),
            ));
        }
        Ok(Self { a, b })
    }

    pub fn point(&self, lambda: C64) -> TetraPoint {
        TetraPoint::from_product(self.a.eval(lambda), self.b.eval(lambda))
    }

    pub fn is_geodesic(&self) -> bool {
        self.a.is_automorphism() || self.b.is_automorphism()
    }
}

impl AnalyticDisc for ProductDisc {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, lambda: C64) -> Vec<C64> {
        self.point(lambda).to_array().to_vec()
    }
}

pub fn product_disc(a: &BlaschkeMap, b: &BlaschkeMap, lambda: C64) -> Result<TetraPoint> {
    check_lambda(lambda)?;
    Ok(ProductDisc::new(a.clone(), b.clone())?.point(lambda))
}

/// Value of `g(λ) = h(λ)/λ` for `h` holomorphic with `h(0) = 0`, including the
/// removable point. Near the origin the quotient is replaced by its mean over
/// a circle around `λ` whose points stay at least `1e-5` from 0 (64-point
/// trapezoid, exact for the analytic discs used here up to rounding).
pub(crate) fn divided_by_lambda(h: impl Fn(C64) -> C64, lambda: C64) -> C64 {
    const NEAR: f64 = 1e-5;
    if lambda.norm() >= NEAR {
        return h(lambda) / lambda;
    }
    let radius = NEAR + lambda.norm();
    let n = 64;
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..n {
        let mu = lambda + C64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64);
        sum += h(mu) / mu;
    }
    sum / n as f64
}

/// `f̃(λ) = (f1(λ)/λ, f2(λ), f3(λ)/λ)` for a tetrablock disc with
/// `f1(0) = f3(0) = 0`. The transported disc lies entirely in the tetrablock
/// or entirely in its boundary.
pub struct TransportedDisc<D> {
    inner: D,
}

impl<D: AnalyticDisc> TransportedDisc<D> {
    pub fn new(inner: D) -> Result<Self> {
        if inner.dim() != 3 {
            return Err(Error::Dimension {
                expected: 3,
                got: inner.dim(),
            });
        }
        let at_zero = inner.eval(C64::new(0.0, 0.0));
        if at_zero[0].norm() > ORIGIN_VALUE_TOL || at_zero[2].norm() > ORIGIN_VALUE_TOL {
            return Err(Error::Precondition(format!(
                "transport needs f1(0) = f3(0) = 0, got {} and {}",
                at_zero[0], at_zero[2]
            )));
        }
        Ok(Self { inner })
    }

    pub fn point(&self, lambda: C64) -> TetraPoint {
        let f2 = self.inner.eval(lambda)[1];
        let f1 = divided_by_lambda(|mu| self.inner.eval(mu)[0], lambda);
        let f3 = divided_by_lambda(|mu| self.inner.eval(mu)[2], lambda);
        TetraPoint::new(f1, f2, f3)
    }
}

impl<D: AnalyticDisc> AnalyticDisc for TransportedDisc<D> {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, lambda: C64) -> Vec<C64> {
        self.point(lambda).to_array().to_vec()
    }
}

pub fn transport_disc<D: AnalyticDisc>(f: D) -> Result<TransportedDisc<D>> {
    TransportedDisc::new(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransportClass {
    Interior,
    Boundary,
    Mixed,
}

/// Classifies a tetrablock disc over the origin and [`standard_samples`]:
/// all values below `1 - tol`, all within `tol` of 1, or neither.
pub fn classify_disc(f: &dyn AnalyticDisc, tol: f64) -> Result<(TransportClass, f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for lambda in std::iter::once(C64::new(0.0, 0.0)).chain(standard_samples()) {
        let e = tetra_e_value(&TetraPoint::from_slice(&f.eval(lambda))?);
        lo = lo.min(e);
        hi = hi.max(e);
    }
    let class = if hi < 1.0 - tol {
        TransportClass::Interior
    } else if (lo - 1.0).abs() <= tol && (hi - 1.0).abs() <= tol {
        TransportClass::Boundary
    } else {
        TransportClass::Mixed
    };
    Ok((class, lo, hi))
}

/// The transported extremal
/// `λ ↦ (ω1 (φ + C)/(λ(1 + C)), ω2 λ (1 + Cφ)/(1 + C), ω1 ω2 φ)` for a
/// non-automorphism `φ` with `φ(0) = -C`. It is a Lempert extremal for
/// `(f(0), f(σ))` at every `σ ≠ 0`, and it omits the set `{z1 z2 = z3}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cor43Extremal {
    pub c: f64,
    pub omega1: C64,
    pub omega2: C64,
    pub phi: BlaschkeMap,
}

impl Cor43Extremal {
    pub fn new(c: f64, omega1: C64, omega2: C64, phi: BlaschkeMap) -> Result<Self> {
        check_unit_interval("C", c, false)?;
        if phi.is_automorphism() {
            return Err(Error::InvalidParameter(
                "phi must not be an automorphism: the transported disc would lie in the boundary".into(),
            ));
        }
        if !phi.maps_into_open_disc() {
            return Err(Error::InvalidParameter("phi must map into the open disc".into()));
        }
        let gap = (phi.value_at_origin() + c).norm();
        if gap > ORIGIN_VALUE_TOL {
            return Err(Error::InvalidParameter(format!(
                "phi(0) must equal -C; |phi(0) + C| = {gap:e}"
            )));
        }
        Ok(Self {
            c,
            omega1: check_unimodular("omega1", omega1)?,
            omega2: check_unimodular("omega2", omega2)?,
            phi,
        })
    }

    pub fn point(&self, lambda: C64) -> TetraPoint {
        let c = self.c;
        let phi = self.phi.eval(lambda);
        let quotient = if lambda == C64::new(0.0, 0.0) {
            self.phi.derivative(lambda)
        } else {
            divided_by_lambda(|mu| self.phi.eval(mu) + c, lambda)
        };
        TetraPoint::new(
            self.omega1 * quotient / (1.0 + c),
            self.omega2 * lambda * (1.0 + c * phi) / (1.0 + c),
            self.omega1 * self.omega2 * phi,
        )
    }
}

impl AnalyticDisc for Cor43Extremal {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, lambda: C64) -> Vec<C64> {
        self.point(lambda).to_array().to_vec()
    }
}

pub fn cor43_extremal(
    c: f64,
    omega1: C64,
    omega2: C64,
    phi: &BlaschkeMap,
    lambda: C64,
) -> Result<TetraPoint> {
    check_lambda(lambda)?;
    Ok(Cor43Extremal::new(c, omega1, omega2, phi.clone())?.point(lambda))
}

/// Lempert function between `(0, 0, w)` and `(0, z, w)`: `|z| / (1 - |w|)` on
/// the Möbius scale.
pub fn lempert_special(z: C64, w: C64) -> Result<HyperbolicDistance> {
    if z.norm() + w.norm() >= 1.0 {
        return Err(Error::Precondition(format!(
            "need |z| + |w| < 1, got {}",
            z.norm() + w.norm()
        )));
    }
    Ok(HyperbolicDistance::from_m(z.norm() / (1.0 - w.norm())))
}

/// The extremal `λ ↦ (0, λ(1 - |w|), w)` (rotated to hit `(0, z, w)`) and the
/// preimage `λ2` of `(0, z, w)`; the preimage of `(0, 0, w)` is 0.
pub fn special_pair_extremal(z: C64, w: C64) -> Result<(Cor43Extremal, C64)> {
    lempert_special(z, w)?;
    let c = w.norm();
    let omega1 = if c > 0.0 { -w / c } else { C64::new(1.0, 0.0) };
    let disc = Cor43Extremal::new(c, omega1, C64::new(1.0, 0.0), BlaschkeMap::constant(C64::new(-c, 0.0))?)?;
    Ok((disc, z / (1.0 - c)))
}

/// Parameters of the symmetrized-bidisc geodesics through the origin,
/// `C ∈ [1, 2]`, `|ω| = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct G2GeodesicParams {
    pub c: f64,
    pub omega: C64,
}

impl G2GeodesicParams {
    pub fn new(c: f64, omega: C64) -> Result<Self> {
        if !(1.0..=2.0).contains(&c) {
            return Err(Error::InvalidParameter(format!("C must lie in [1, 2], got {c}")));
        }
        Self::unchecked(c, omega)
    }

    /// Skips the range check on `C`; used to exhibit what goes wrong outside
    /// the admissible window.
    pub fn unchecked(c: f64, omega: C64) -> Result<Self> {
        Ok(Self {
            c,
            omega: check_unimodular("omega", omega)?,
        })
    }

    pub fn point(&self, lambda: C64) -> G2Point {
        let (c, omega) = (self.c, self.omega);
        let s = 2.0 * (2.0 - c) * lambda / (omega * lambda * (1.0 - c) - 1.0);
        let p = lambda * (lambda - omega.conj() * (1.0 - c)) / (1.0 - lambda * omega * (1.0 - c));
        G2Point::new(s, p)
    }
}

impl AnalyticDisc for G2GeodesicParams {
    fn dim(&self) -> usize {
        2
    }
    fn eval(&self, lambda: C64) -> Vec<C64> {
        self.point(lambda).to_array().to_vec()
    }
}

pub fn g2_origin_geodesic(p: &G2GeodesicParams, lambda: C64) -> Result<G2Point> {
    check_lambda(lambda)?;
    Ok(p.point(lambda))
}

/// Grid search (`radii × angles`, radii up to 0.999) for a `λ` whose image
/// under the formula leaves the symmetrized bidisc.
pub fn g2_violation_witness(p: &G2GeodesicParams, radii: usize, angles: usize) -> Option<C64> {
    for i in 1..=radii {
        let r = 0.999 * i as f64 / radii as f64;
        for k in 0..angles {
            let lambda = C64::from_polar(r, std::f64::consts::TAU * k as f64 / angles as f64);
            let w = p.point(lambda);
            let outside = !(w.s.is_finite() && w.p.is_finite())
                || g2_membership(&w, 1e-12).map(|r| r.location != Location::Interior).unwrap_or(true);
            if outside {
                return Some(lambda);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::tetra_membership;
    use crate::extremals::{g2_f, psi_eta, G2LeftInverse};
    use crate::geodesics::{left_inverse_residual, verify_disc, DiscVerdict, FnDisc};
    use crate::domains::DomainKind;
    use crate::unimodular;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn constant(v: f64) -> BlaschkeMap {
        BlaschkeMap::constant(c(v, 0.0)).unwrap()
    }

    #[test]
    fn origin_geodesic_examples() {
        let p = OriginGeodesicParams::new(0.0, c(1.0, 0.0), c(1.0, 0.0), BlaschkeMap::identity()).unwrap();
        assert_eq!(eval_origin_geodesic(&p, c(0.0, 0.0)).unwrap(), TetraPoint::ORIGIN);
        let v = eval_origin_geodesic(&p, c(0.5, 0.0)).unwrap();
        assert!(v.max_abs_diff(TetraPoint::real(0.5, 0.5, 0.25)) < 1e-16);

        let p = OriginGeodesicParams::new(0.5, c(1.0, 0.0), c(1.0, 0.0), constant(-0.5)).unwrap();
        let v = eval_origin_geodesic(&p, c(0.5, 0.0)).unwrap();
        assert!(v.max_abs_diff(TetraPoint::real(0.0, 0.25, -0.25)) < 1e-16);

        assert!(eval_origin_geodesic(&p, c(1.0, 0.0)).is_err());
        assert!(OriginGeodesicParams::new(0.3, c(1.0, 0.0), c(1.0, 0.0), constant(-0.5)).is_err());
        assert!(OriginGeodesicParams::new(1.2, c(1.0, 0.0), c(1.0, 0.0), constant(-1.0)).is_err());
    }

    #[test]
    fn degenerate_edge_is_rotated_third_axis() {
        let (o1, o2) = (unimodular(0.4), unimodular(-1.3));
        let p = OriginGeodesicParams::degenerate(o1, o2).unwrap();
        let lambda = c(0.3, 0.2);
        let v = p.eval(lambda);
        assert!(v.max_abs_diff(TetraPoint::new(c(0.0, 0.0), c(0.0, 0.0), -o1 * o2 * lambda)) < 1e-16);
        let disc = OriginGeodesic::new(p);
        let residual = left_inverse_residual(&disc, &disc.left_inverse()).unwrap();
        assert!(residual < 1e-14);
    }

    #[test]
    fn normalized_phi_has_nonpositive_origin_value() {
        let (phi, big_c) = normalized_phi(vec![c(0.3, 0.4), c(-0.2, 0.1)], 0.9).unwrap();
        let v = phi.value_at_origin();
        assert!(v.im.abs() < 1e-16 && v.re <= 0.0);
        assert!((big_c - 0.9 * 0.5 * 0.05f64.sqrt()).abs() < 1e-15);
        let (_, zero) = normalized_phi(vec![c(0.0, 0.0)], 1.0).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn general_disc_examples() {
        let p = GeneralDiscParams::new(0.3, c(1.0, 0.0), c(1.0, 0.0), constant(0.1), BlaschkeMap::identity()).unwrap();
        let v = eval_general_disc(&p, c(0.2, 0.0)).unwrap();
        let expected = TetraPoint::real(0.4 / 1.3, 0.2 * 1.03 / 1.3, 0.02);
        assert!(v.max_abs_diff(expected) < 1e-16);
        assert!(tetra_e_value(&v) < 1.0);
        assert!(p.is_geodesic());

        // ψ = id recovers the origin geodesic
        let (phi, big_c) = normalized_phi(vec![c(0.5, 0.2)], 0.8).unwrap();
        let general = GeneralDiscParams::new(big_c, unimodular(1.0), unimodular(2.0), phi.clone(), BlaschkeMap::identity()).unwrap();
        let origin = OriginGeodesicParams::new(big_c, unimodular(1.0), unimodular(2.0), phi).unwrap();
        for lambda in standard_samples() {
            assert!(general.eval(lambda).max_abs_diff(origin.eval(lambda)) < 1e-15);
        }

        assert!(GeneralDiscParams::new(1.0, c(1.0, 0.0), c(1.0, 0.0), constant(0.1), BlaschkeMap::identity()).is_err());
        let unimodular_constant = BlaschkeMap::new(c(1.0, 0.0), vec![], 1.0).unwrap();
        assert!(GeneralDiscParams::new(0.2, c(1.0, 0.0), c(1.0, 0.0), unimodular_constant, BlaschkeMap::identity()).is_err());
    }

    #[test]
    fn boundary_disc_examples() {
        let v = eval_boundary_disc(0.0, c(1.0, 0.0), c(1.0, 0.0), &constant(0.0), c(0.3, 0.0)).unwrap();
        assert_eq!(v, TetraPoint::real(0.0, 1.0, 0.0));
        assert_eq!(tetra_e_value(&v), 1.0);

        let v = eval_boundary_disc(0.5, c(1.0, 0.0), c(1.0, 0.0), &constant(0.2), c(-0.4, 0.1)).unwrap();
        assert!((tetra_e_value(&v) - 1.0).abs() < 1e-14);

        let phi = BlaschkeMap::new(unimodular(0.7), vec![c(0.1, -0.5), c(0.3, 0.3)], 0.9).unwrap();
        let disc = BoundaryDisc::new(0.35, unimodular(2.0), unimodular(-0.4), phi).unwrap();
        for lambda in standard_samples() {
            assert!((tetra_e_value(&disc.point(lambda)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn origin_geodesic_left_inverse() {
        let (phi, big_c) = normalized_phi(vec![c(0.2, -0.6), c(0.1, 0.1)], 0.95).unwrap();
        let (o1, o2) = (unimodular(2.2), unimodular(-0.7));
        let disc = OriginGeodesic::new(OriginGeodesicParams::new(big_c, o1, o2, phi).unwrap());
        for lambda in standard_samples() {
            let v = o2.conj() * psi_eta(o1.conj(), &disc.point(lambda)).unwrap();
            assert!((v - lambda).norm() < 1e-14);
        }
        let report = verify_disc(&disc, DomainKind::Tetrablock, Some(&disc.left_inverse()), 1e-12).unwrap();
        assert_eq!(report.verdict, DiscVerdict::GeodesicVerified);
        assert!(report.max_e_value < 1.0);

        let mut swapped = disc.clone();
        swapped.swapped = true;
        assert!(left_inverse_residual(&swapped, &swapped.left_inverse()).unwrap() < 1e-14);
        assert!(left_inverse_residual(&swapped, &disc.left_inverse()).unwrap() > 1e-3);
    }

    #[test]
    fn constant_disc_fails_verification() {
        let disc = FnDisc::new(3, |_| vec![c(0.1, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let f = crate::extremals::PsiFunction::new(c(1.0, 0.0));
        let residual = left_inverse_residual(&disc, &f).unwrap();
        assert!(residual > 0.8);
        let report = verify_disc(&disc, DomainKind::Tetrablock, Some(&f), 1e-10).unwrap();
        assert_eq!(report.verdict, DiscVerdict::Failed);
        let report = verify_disc(&disc, DomainKind::Tetrablock, None, 1e-10).unwrap();
        assert_eq!(report.verdict, DiscVerdict::InDomainOnly);
    }

    #[test]
    fn transport_examples() {
        let (a, b, cc) = (c(0.1, 0.2), c(0.3, 0.0), c(-0.2, 0.1));
        let disc = FnDisc::new(3, move |l: C64| vec![l * a, b, l * cc]);
        let t = transport_disc(disc).unwrap();
        for lambda in std::iter::once(c(0.0, 0.0)).chain(standard_samples()) {
            assert!(t.point(lambda).max_abs_diff(TetraPoint::new(a, b, cc)) < 1e-12);
        }
        let bad = FnDisc::new(3, |l: C64| vec![l + 0.1, l, l]);
        assert!(matches!(transport_disc(bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn transport_of_non_automorphism_origin_geodesic() {
        let (phi, big_c) = normalized_phi(vec![c(0.5, 0.3)], 0.9).unwrap();
        let (o1, o2) = (unimodular(0.3), unimodular(1.9));
        let params = OriginGeodesicParams::new(big_c, o1, o2, phi.clone()).unwrap();
        let t = transport_disc(OriginGeodesic::new(params)).unwrap();
        let at_zero = t.point(c(0.0, 0.0));
        let expected = TetraPoint::new(o1 * phi.derivative(c(0.0, 0.0)) / (1.0 + big_c), c(0.0, 0.0), -o1 * o2 * big_c);
        assert!(at_zero.max_abs_diff(expected) < 1e-10);
        assert!(phi.derivative(c(0.0, 0.0)).norm() < 1.0 - big_c * big_c);
        assert_eq!(classify_disc(&t, 1e-8).unwrap().0, TransportClass::Interior);

        // matches the direct formula of the transported extremal
        let direct = Cor43Extremal::new(big_c, o1, o2, phi).unwrap();
        for lambda in standard_samples() {
            assert!(direct.point(lambda).max_abs_diff(t.point(lambda)) < 1e-12);
        }
    }

    #[test]
    fn transport_of_automorphism_origin_geodesic_touches_boundary() {
        let (phi, big_c) = normalized_phi(vec![c(-0.4, 0.2)], 1.0).unwrap();
        let params = OriginGeodesicParams::new(big_c, unimodular(0.5), unimodular(2.5), phi.clone()).unwrap();
        assert!((phi.derivative(c(0.0, 0.0)).norm() - (1.0 - big_c * big_c)).abs() < 1e-15);
        let t = transport_disc(OriginGeodesic::new(params)).unwrap();
        let (class, lo, hi) = classify_disc(&t, 1e-8).unwrap();
        assert_eq!(class, TransportClass::Boundary, "{lo} {hi}");
    }

    #[test]
    fn cor43_examples() {
        let lambda = c(-0.2, 0.6);
        let v = cor43_extremal(0.4, c(1.0, 0.0), c(1.0, 0.0), &constant(-0.4), lambda).unwrap();
        assert!(v.max_abs_diff(TetraPoint::new(c(0.0, 0.0), lambda * 0.6, c(-0.4, 0.0))) < 1e-16);

        let v = cor43_extremal(0.5, c(1.0, 0.0), c(1.0, 0.0), &constant(-0.5), c(0.3, 0.0)).unwrap();
        assert!(v.max_abs_diff(TetraPoint::real(0.0, 0.15, -0.5)) < 1e-16);

        let auto = BlaschkeMap::automorphism(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        assert!(Cor43Extremal::new(0.5, c(1.0, 0.0), c(1.0, 0.0), auto).is_err());
        assert!(Cor43Extremal::new(0.5, c(1.0, 0.0), c(1.0, 0.0), constant(-0.4)).is_err());
    }

    #[test]
    fn cor43_images_avoid_product_set_and_stay_inside() {
        let (phi, big_c) = normalized_phi(vec![c(0.6, -0.1), c(0.2, 0.5)], 0.85).unwrap();
        let disc = Cor43Extremal::new(big_c, unimodular(1.3), unimodular(-2.4), phi).unwrap();
        for lambda in std::iter::once(c(0.0, 0.0)).chain(standard_samples()) {
            let v = disc.point(lambda);
            assert!((v.z1 * v.z2 - v.z3).norm() > 0.0);
            assert_eq!(tetra_membership(&v, 1e-10).unwrap().location, Location::Interior);
        }
    }

    #[test]
    fn lempert_special_examples() {
        assert_eq!(lempert_special(c(0.0, 0.0), c(0.5, 0.0)).unwrap().m_scale, 0.0);
        assert!((lempert_special(c(0.3, 0.0), c(0.5, 0.0)).unwrap().m_scale - 0.6).abs() < 1e-15);
        let z = c(0.1, -0.3);
        assert!((lempert_special(z, c(0.0, 0.0)).unwrap().m_scale - z.norm()).abs() < 1e-16);
        assert!(lempert_special(c(0.5, 0.0), c(0.5, 0.0)).is_err());
    }

    #[test]
    fn special_pair_extremal_interpolates() {
        for (z, w) in [(c(0.3, 0.1), c(-0.2, 0.4)), (c(0.0, 0.4), c(0.0, 0.0)), (c(0.05, 0.0), c(-0.5, 0.0))] {
            let (disc, l2) = special_pair_extremal(z, w).unwrap();
            assert!(disc.point(c(0.0, 0.0)).max_abs_diff(TetraPoint::new(c(0.0, 0.0), c(0.0, 0.0), w)) < 1e-15);
            assert!(disc.point(l2).max_abs_diff(TetraPoint::new(c(0.0, 0.0), z, w)) < 1e-15);
            assert!((l2.norm() - lempert_special(z, w).unwrap().m_scale).abs() < 1e-15);
        }
    }

    #[test]
    fn product_disc_examples() {
        let lambda = c(0.3, -0.2);
        let v = product_disc(&BlaschkeMap::identity(), &constant(0.0), lambda).unwrap();
        assert_eq!(v, TetraPoint::new(lambda, c(0.0, 0.0), c(0.0, 0.0)));

        let square = BlaschkeMap::new(c(1.0, 0.0), vec![c(0.0, 0.0), c(0.0, 0.0)], 1.0).unwrap();
        let v = product_disc(&BlaschkeMap::identity(), &square, c(0.5, 0.0)).unwrap();
        assert!(v.max_abs_diff(TetraPoint::real(0.5, 0.25, 0.125)) < 1e-16);
        assert_eq!(tetra_membership(&v, 1e-10).unwrap().location, Location::Interior);

        assert!(ProductDisc::new(BlaschkeMap::identity(), square.clone()).unwrap().is_geodesic());
        assert!(!ProductDisc::new(square.clone(), square).unwrap().is_geodesic());
    }

    #[test]
    fn g2_geodesic_examples() {
        let omega = unimodular(0.8);
        let lambda = c(0.3, 0.4);
        let p = G2GeodesicParams::new(2.0, omega).unwrap();
        let v = g2_origin_geodesic(&p, lambda).unwrap();
        assert!(v.s.norm() < 1e-16);
        assert!((v.p - omega.conj() * lambda).norm() < 1e-15);

        let p = G2GeodesicParams::new(1.0, c(1.0, 0.0)).unwrap();
        let v = g2_origin_geodesic(&p, c(0.4, 0.0)).unwrap();
        assert!((v.s - c(-0.8, 0.0)).norm() < 1e-16 && (v.p - c(0.16, 0.0)).norm() < 1e-16);

        assert!(G2GeodesicParams::new(2.5, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn g2_window() {
        for k in 0..=20 {
            let big_c = 1.0 + 0.05 * k as f64;
            for j in 0..8 {
                let omega = unimodular(std::f64::consts::TAU * j as f64 / 8.0 + 0.1);
                let p = G2GeodesicParams::new(big_c, omega).unwrap();
                let report = verify_disc(&p, DomainKind::SymmetrizedBidisc, Some(&G2LeftInverse { omega }), 1e-12).unwrap();
                assert_eq!(report.verdict, DiscVerdict::GeodesicVerified, "C = {big_c}");
                assert!(g2_f(omega, &p.point(c(0.0, 0.0))).unwrap().norm() < 1e-16);
                assert_eq!(g2_violation_witness(&p, 200, 64), None);
            }
        }
        for big_c in [0.9, 2.1, 2.5] {
            let p = G2GeodesicParams::unchecked(big_c, unimodular(0.3)).unwrap();
            assert!(g2_violation_witness(&p, 200, 64).is_some(), "C = {big_c}");
        }
    }
}
