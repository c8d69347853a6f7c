//! Holomorphic functions into the disc used as extremal candidates on the
//! tetrablock and the symmetrized bidisc, and the distance-type quantities
//! built from them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domains::{tetra_e_value, G2Point, TetraPoint};
use crate::error::{Error, Result};
use crate::hyperbolic::{check_unimodular, mobius_quotient, HyperbolicDistance, CLOSURE_TOL};
use crate::optimize::{maximize_on_circle, AngleSearch};
use crate::{unimodular, C64};

const POLE_GUARD: f64 = 1e-14;

/// `Ψ_η(z) = (η z3 - z2) / (η z1 - 1)` without checks.
#[inline]
pub fn psi_eta_unchecked(eta: C64, z: &TetraPoint) -> C64 {
    (eta * z.z3 - z.z2) / (eta * z.z1 - 1.0)
}

/// `Ψ_η(z)` for `|η| <= 1`. A point `z` with `|z1| < 1` lies in the
/// tetrablock iff `|Ψ_η(z)| < 1` for every such `η`.
pub fn psi_eta(eta: C64, z: &TetraPoint) -> Result<C64> {
    if eta.norm() > 1.0 + CLOSURE_TOL {
        return Err(Error::OutsideClosedDisc {
            what: "eta",
            modulus: eta.norm(),
        });
    }
    if (eta * z.z1 - 1.0).norm() < POLE_GUARD {
        return Err(Error::Pole(format!("eta * z1 = 1 at eta = {eta}")));
    }
    Ok(psi_eta_unchecked(eta, z))
}

/// Swap of the first two coordinates.
pub fn sigma(z: &TetraPoint) -> TetraPoint {
    TetraPoint::new(z.z2, z.z1, z.z3)
}

/// `F_ω(z) = (ω z1, z2, ω z3)`.
pub fn f_omega_automorphism(omega: C64, z: &TetraPoint) -> Result<TetraPoint> {
    let omega = check_unimodular("omega", omega)?;
    Ok(TetraPoint::new(omega * z.z1, z.z2, omega * z.z3))
}

/// `z2 / sqrt(1 + z3 - z1 z2)` with the principal root.
///
/// On the tetrablock `|z1 z2 - z3| < 1`, so the radicand stays in the open
/// right half-plane, away from the cut.
pub fn magic_f(z: &TetraPoint) -> Result<C64> {
    let radicand = 1.0 + z.z3 - z.z1 * z.z2;
    if radicand.re <= 0.0 {
        return Err(Error::Branch(format!(
            "1 + z3 - z1 z2 = {radicand} is not in the right half-plane"
        )));
    }
    Ok(z.z2 / radicand.sqrt())
}

/// `(2ω p - s) / (2 - ω s)`; left inverse of the symmetrized-bidisc
/// geodesics through the origin.
pub fn g2_f(omega: C64, w: &G2Point) -> Result<C64> {
    let omega = check_unimodular("omega", omega)?;
    let denom = 2.0 - omega * w.s;
    if denom.norm() <= POLE_GUARD {
        return Err(Error::Pole(format!("2 - omega s vanishes at s = {}", w.s)));
    }
    Ok((2.0 * omega * w.p - w.s) / denom)
}

/// A holomorphic function on an open subset of ℂⁿ, optionally with
/// closed-form partial derivatives.
pub trait HolomorphicFunction: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, z: &[C64]) -> Result<C64>;

    /// `(∂F/∂z_1, …, ∂F/∂z_n)` when a closed form is known.
    fn gradient(&self, _z: &[C64]) -> Option<Result<Vec<C64>>> {
        None
    }

    fn label(&self) -> String;
}

fn check_dim(expected: usize, z: &[C64]) -> Result<()> {
    if z.len() == expected {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected,
            got: z.len(),
        })
    }
}

/// `z ↦ factor · Ψ_η(z)`, or `factor · Ψ_η(σ(z))` when `swapped`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiFunction {
    pub eta: C64,
    pub factor: C64,
    pub swapped: bool,
}

impl PsiFunction {
    pub fn new(eta: C64) -> Self {
        Self {
            eta,
            factor: C64::new(1.0, 0.0),
            swapped: false,
        }
    }

    /// The left inverse `conj(ω2) Ψ_{conj(ω1)}` of the geodesic through the
    /// origin with rotation parameters `ω1, ω2`.
    pub fn geodesic_left_inverse(omega1: C64, omega2: C64) -> Self {
        Self {
            eta: omega1.conj(),
            factor: omega2.conj(),
            swapped: false,
        }
    }

    pub fn swapped(mut self) -> Self {
        self.swapped = !self.swapped;
        self
    }

    fn point(&self, z: &[C64]) -> Result<TetraPoint> {
        let p = TetraPoint::from_slice(z)?;
        Ok(if self.swapped { sigma(&p) } else { p })
    }
}

impl HolomorphicFunction for PsiFunction {
    fn dim(&self) -> usize {
        3
    }

    fn eval(&self, z: &[C64]) -> Result<C64> {
        Ok(self.factor * psi_eta(self.eta, &self.point(z)?)?)
    }

    fn gradient(&self, z: &[C64]) -> Option<Result<Vec<C64>>> {
        Some(self.point(z).and_then(|p| {
            let denom = self.eta * p.z1 - 1.0;
            if denom.norm() < POLE_GUARD {
                return Err(Error::Pole("eta * z1 = 1".into()));
            }
            let num = self.eta * p.z3 - p.z2;
            let d1 = -self.eta * num / (denom * denom);
            let d2 = -1.0 / denom;
            let d3 = self.eta / denom;
            let (g1, g2) = if self.swapped { (d2, d1) } else { (d1, d2) };
            Ok(vec![self.factor * g1, self.factor * g2, self.factor * d3])
        }))
    }

    fn label(&self) -> String {
        format!(
            "{}·Psi[{}]{}",
            self.factor,
            self.eta,
            if self.swapped { "∘sigma" } else { "" }
        )
    }
}

/// `z2 / sqrt(1 + z3 - z1 z2)` as a [`HolomorphicFunction`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MagicFunction;

impl HolomorphicFunction for MagicFunction {
    fn dim(&self) -> usize {
        3
    }

    fn eval(&self, z: &[C64]) -> Result<C64> {
        magic_f(&TetraPoint::from_slice(z)?)
    }

    fn gradient(&self, z: &[C64]) -> Option<Result<Vec<C64>>> {
        Some(TetraPoint::from_slice(z).and_then(|p| {
            let d = 1.0 + p.z3 - p.z1 * p.z2;
            if d.re <= 0.0 {
                return Err(Error::Branch("radicand left the right half-plane".into()));
            }
            let root = d.sqrt();
            let d32 = d * root;
            Ok(vec![
                p.z2 * p.z2 / (2.0 * d32),
                1.0 / root + p.z1 * p.z2 / (2.0 * d32),
                -p.z2 / (2.0 * d32),
            ])
        }))
    }

    fn label(&self) -> String {
        "MagicF".into()
    }
}

/// `(s, p) ↦ (2ω p - s) / (2 - ω s)` as a [`HolomorphicFunction`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct G2LeftInverse {
    pub omega: C64,
}

impl HolomorphicFunction for G2LeftInverse {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, z: &[C64]) -> Result<C64> {
        g2_f(self.omega, &G2Point::from_slice(z)?)
    }

    fn gradient(&self, z: &[C64]) -> Option<Result<Vec<C64>>> {
        Some(G2Point::from_slice(z).and_then(|w| {
            let denom = 2.0 - self.omega * w.s;
            if denom.norm() <= POLE_GUARD {
                return Err(Error::Pole("2 - omega s vanishes".into()));
            }
            let omega = self.omega;
            Ok(vec![
                (-2.0 + 2.0 * omega * omega * w.p) / (denom * denom),
                2.0 * omega / denom,
            ])
        }))
    }

    fn label(&self) -> String {
        format!("G2F[{}]", self.omega)
    }
}

/// `z ↦ z_index` on ℂⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoordinateFunction {
    pub index: usize,
    pub dim: usize,
}

impl HolomorphicFunction for CoordinateFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: &[C64]) -> Result<C64> {
        check_dim(self.dim, z)?;
        Ok(z[self.index])
    }

    fn gradient(&self, z: &[C64]) -> Option<Result<Vec<C64>>> {
        Some(check_dim(self.dim, z).map(|_| {
            let mut g = vec![C64::new(0.0, 0.0); self.dim];
            g[self.index] = C64::new(1.0, 0.0);
            g
        }))
    }

    fn label(&self) -> String {
        format!("z{}", self.index + 1)
    }
}

/// A closure-backed function without closed-form derivatives.
pub struct FnFunction<F> {
    dim: usize,
    label: String,
    f: F,
}

impl<F> FnFunction<F>
where
    F: Fn(&[C64]) -> Result<C64> + Send + Sync,
{
    pub fn new(dim: usize, label: impl Into<String>, f: F) -> Self {
        Self {
            dim,
            label: label.into(),
            f,
        }
    }
}

impl<F> HolomorphicFunction for FnFunction<F>
where
    F: Fn(&[C64]) -> Result<C64> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: &[C64]) -> Result<C64> {
        check_dim(self.dim, z)?;
        (self.f)(z)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtremalFamilyTag {
    PsiOmega,
    PsiOmegaSigma,
    MagicF,
    G2FOmega,
}

impl ExtremalFamilyTag {
    pub fn name(self) -> &'static str {
        match self {
            Self::PsiOmega => "PsiOmega",
            Self::PsiOmegaSigma => "PsiOmegaSigma",
            Self::MagicF => "MagicF",
            Self::G2FOmega => "G2FOmega",
        }
    }
}

impl fmt::Display for ExtremalFamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ExtremalFamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "psiomega" | "psi" => Ok(Self::PsiOmega),
            "psiomegasigma" | "psisigma" => Ok(Self::PsiOmegaSigma),
            "magicf" | "magic" => Ok(Self::MagicF),
            "g2fomega" | "g2f" => Ok(Self::G2FOmega),
            _ => Err(Error::InvalidParameter(format!("unknown extremal family {s:?}"))),
        }
    }
}

/// An extremal family, optionally pinned to one member `ω`. Without a pinned
/// parameter the parametrized families are optimized over `ω ∈ ∂𝔻`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalFamilyId {
    pub tag: ExtremalFamilyTag,
    pub parameter: Option<C64>,
}

impl ExtremalFamilyId {
    pub fn all_over(tag: ExtremalFamilyTag) -> Self {
        Self { tag, parameter: None }
    }

    pub fn member(tag: ExtremalFamilyTag, omega: C64) -> Result<Self> {
        let omega = check_unimodular("family parameter", omega)?;
        Ok(Self {
            tag,
            parameter: Some(omega),
        })
    }

    /// The three tetrablock families.
    pub fn tetrablock_defaults() -> Vec<Self> {
        [
            ExtremalFamilyTag::PsiOmega,
            ExtremalFamilyTag::PsiOmegaSigma,
            ExtremalFamilyTag::MagicF,
        ]
        .into_iter()
        .map(Self::all_over)
        .collect()
    }
}

/// A family of holomorphic maps 𝔼 → 𝔻 indexed by a unimodular parameter
/// (families without a parameter ignore it).
pub trait TetraFamily: Send + Sync {
    fn name(&self) -> &str;
    fn parametrized(&self) -> bool;
    fn eval(&self, omega: C64, z: &TetraPoint) -> Result<C64>;
}

struct PsiOmegaFamily;
struct PsiOmegaSigmaFamily;
struct MagicFamily;

impl TetraFamily for PsiOmegaFamily {
    fn name(&self) -> &str {
        "PsiOmega"
    }
    fn parametrized(&self) -> bool {
        true
    }
    fn eval(&self, omega: C64, z: &TetraPoint) -> Result<C64> {
        psi_eta(omega, z)
    }
}

impl TetraFamily for PsiOmegaSigmaFamily {
    fn name(&self) -> &str {
        "PsiOmegaSigma"
    }
    fn parametrized(&self) -> bool {
        true
    }
    fn eval(&self, omega: C64, z: &TetraPoint) -> Result<C64> {
        psi_eta(omega, &sigma(z))
    }
}

impl TetraFamily for MagicFamily {
    fn name(&self) -> &str {
        "MagicF"
    }
    fn parametrized(&self) -> bool {
        false
    }
    fn eval(&self, _omega: C64, z: &TetraPoint) -> Result<C64> {
        magic_f(z)
    }
}

fn builtin_family(tag: ExtremalFamilyTag) -> Result<&'static dyn TetraFamily> {
    match tag {
        ExtremalFamilyTag::PsiOmega => Ok(&PsiOmegaFamily),
        ExtremalFamilyTag::PsiOmegaSigma => Ok(&PsiOmegaSigmaFamily),
        ExtremalFamilyTag::MagicF => Ok(&MagicFamily),
        ExtremalFamilyTag::G2FOmega => Err(Error::FamilyMismatch("G2FOmega")),
    }
}

/// Best value of `m(F(w), F(z))` over one family.
fn family_lower_bound(
    family: &dyn TetraFamily,
    parameter: Option<C64>,
    w: &TetraPoint,
    z: &TetraPoint,
    search: AngleSearch,
) -> Result<(f64, Option<C64>)> {
    let value = |omega: C64| -> Result<f64> {
        Ok(mobius_quotient(family.eval(omega, w)?, family.eval(omega, z)?))
    };
    match (family.parametrized(), parameter) {
        (false, _) => Ok((value(C64::new(1.0, 0.0))?, None)),
        (true, Some(omega)) => Ok((value(omega)?, Some(omega))),
        (true, None) => {
            let mut failure = None;
            let (theta, best) = maximize_on_circle(
                |theta| match value(unimodular(theta)) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NEG_INFINITY
                    }
                },
                search,
            );
            match failure {
                Some(e) if !best.is_finite() => Err(e),
                _ => Ok((best, Some(unimodular(theta)))),
            }
        }
    }
}

fn require_interior(what: &'static str, z: &TetraPoint) -> Result<()> {
    let e = tetra_e_value(z);
    if e < 1.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{what} must lie in the tetrablock (e-value {e})"
        )))
    }
}

/// `sup_{ω ∈ ∂𝔻} max { m(Ψ_ω(w), Ψ_ω(z)), m(Ψ_ω(σw), Ψ_ω(σz)) }`, a lower
/// bound for the Carathéodory distance assembled from the `Ψ` family alone.
pub fn p_e(w: &TetraPoint, z: &TetraPoint, search: AngleSearch) -> Result<HyperbolicDistance> {
    require_interior("w", w)?;
    require_interior("z", z)?;
    let (plain, _) = family_lower_bound(&PsiOmegaFamily, None, w, z, search)?;
    let (swapped, _) = family_lower_bound(&PsiOmegaSigmaFamily, None, w, z, search)?;
    Ok(HyperbolicDistance::from_m(plain.max(swapped)))
}

/// A certified lower bound for the Carathéodory distance together with the
/// family member attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub distance: HyperbolicDistance,
    pub family: String,
    pub omega: Option<C64>,
}

/// Registered families of maps 𝔼 → 𝔻. Every registered family only ever
/// increases the lower bound, so extensions never invalidate it.
pub struct FamilyRegistry {
    families: Vec<Box<dyn TetraFamily>>,
    search: AngleSearch,
}

impl FamilyRegistry {
    pub fn empty(search: AngleSearch) -> Self {
        Self {
            families: Vec::new(),
            search,
        }
    }

    pub fn standard() -> Self {
        let mut registry = Self::empty(AngleSearch::EXTREMAL);
        registry.register(Box::new(PsiOmegaFamily));
        registry.register(Box::new(PsiOmegaSigmaFamily));
        registry.register(Box::new(MagicFamily));
        registry
    }

    pub fn register(&mut self, family: Box<dyn TetraFamily>) {
        self.families.push(family);
    }

    pub fn names(&self) -> Vec<&str> {
        self.families.iter().map(|f| f.name()).collect()
    }

    pub fn lower_bound(&self, w: &TetraPoint, z: &TetraPoint) -> Result<LowerBound> {
        require_interior("w", w)?;
        require_interior("z", z)?;
        if self.families.is_empty() {
            return Err(Error::Precondition("no families registered".into()));
        }
        let mut best = LowerBound {
            distance: HyperbolicDistance::ZERO,
            family: self.families[0].name().to_string(),
            omega: None,
        };
        let mut best_m = f64::NEG_INFINITY;
        for family in &self.families {
            let (m, omega) = family_lower_bound(family.as_ref(), None, w, z, self.search)?;
            if m > best_m {
                best_m = m;
                best = LowerBound {
                    distance: HyperbolicDistance::from_m(m),
                    family: family.name().to_string(),
                    omega,
                };
            }
        }
        Ok(best)
    }
}

/// Lower bound for the Carathéodory distance of the tetrablock over the given
/// families (m-scale maximum of `m(F(w), F(z))`).
pub fn caratheodory_lower_bound(
    w: &TetraPoint,
    z: &TetraPoint,
    families: &[ExtremalFamilyId],
    search: AngleSearch,
) -> Result<LowerBound> {
    require_interior("w", w)?;
    require_interior("z", z)?;
    if families.is_empty() {
        return Err(Error::Precondition("at least one family is required".into()));
    }
    let mut best: Option<(f64, LowerBound)> = None;
    for id in families {
        let family = builtin_family(id.tag)?;
        let (m, omega) = family_lower_bound(family, id.parameter, w, z, search)?;
        if best.as_ref().is_none_or(|(b, _)| m > *b) {
            best = Some((
                m,
                LowerBound {
                    distance: HyperbolicDistance::from_m(m),
                    family: id.tag.name().to_string(),
                    omega,
                },
            ));
        }
    }
    Ok(best.map(|(_, b)| b).expect("families is nonempty"))
}

/// `sup_ω m(F_ω(w), F_ω(z))` over the symmetrized-bidisc left inverses.
pub fn g2_caratheodory_lower_bound(
    w: &G2Point,
    z: &G2Point,
    search: AngleSearch,
) -> Result<LowerBound> {
    for (what, p) in [("w", w), ("z", z)] {
        let (r1, r2) = p.roots();
        if r1.norm().max(r2.norm()) >= 1.0 {
            return Err(Error::Precondition(format!(
                "{what} must lie in the symmetrized bidisc"
            )));
        }
    }
    let (theta, m) = maximize_on_circle(
        |theta| {
            let omega = unimodular(theta);
            match (g2_f(omega, w), g2_f(omega, z)) {
                (Ok(a), Ok(b)) => mobius_quotient(a, b),
                _ => f64::NEG_INFINITY,
            }
        },
        search,
    );
    Ok(LowerBound {
        distance: HyperbolicDistance::from_m(m),
        family: ExtremalFamilyTag::G2FOmega.name().to_string(),
        omega: Some(unimodular(theta)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_interior(rng: &mut ChaCha8Rng) -> TetraPoint {
        loop {
            let mut coord = || C64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..6.3));
            let z = TetraPoint::new(coord(), coord(), coord());
            if tetra_e_value(&z) < 1.0 {
                return z;
            }
        }
    }

    #[test]
    fn psi_eta_examples() {
        let z = TetraPoint::new(c(0.1, 0.2), c(-0.3, 0.05), c(0.2, 0.0));
        assert_eq!(psi_eta(c(0.0, 0.0), &z).unwrap(), z.z2);

        let w = c(0.3, -0.2);
        let v = psi_eta(c(1.0, 0.0), &TetraPoint::new(c(0.0, 0.0), c(0.0, 0.0), w)).unwrap();
        assert!((v + w).norm() < 1e-16);

        assert!(matches!(
            psi_eta(c(1.0, 0.0), &TetraPoint::real(1.0, 0.0, 0.0)),
            Err(Error::Pole(_))
        ));
        assert!(psi_eta(c(1.5, 0.0), &z).is_err());
    }

    #[test]
    fn psi_on_origin_geodesic_with_constant_phi() {
        // φ ≡ -C, ω1 = 1: f(λ) = (0, ω2 λ (1 - C), -ω2 C λ), and Ψ_1(f(λ)) = ω2 λ
        let big_c = 0.5;
        let omega2 = crate::unimodular(0.4);
        for lambda in [c(0.1, 0.0), c(-0.3, 0.4), c(0.0, 0.8)] {
            let f = TetraPoint::new(c(0.0, 0.0), omega2 * lambda * (1.0 - big_c), -omega2 * big_c * lambda);
            let v = psi_eta(c(1.0, 0.0), &f).unwrap();
            assert!((v - omega2 * lambda).norm() < 1e-15);
            assert!((v.norm() - lambda.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn automorphism_examples() {
        let z = TetraPoint::new(c(0.1, 0.0), c(0.2, 0.0), c(0.05, 0.0));
        assert_eq!(sigma(&sigma(&z)), z);
        assert_eq!(sigma(&z), TetraPoint::new(z.z2, z.z1, z.z3));
        assert_eq!(tetra_e_value(&sigma(&z)), tetra_e_value(&z));

        assert_eq!(f_omega_automorphism(c(1.0, 0.0), &z).unwrap(), z);
        let flipped = f_omega_automorphism(c(-1.0, 0.0), &z).unwrap();
        assert_eq!(flipped, TetraPoint::real(-0.1, 0.2, -0.05));
        assert_eq!(tetra_e_value(&flipped), tetra_e_value(&z));

        let (a, b) = (crate::unimodular(0.3), crate::unimodular(-1.1));
        let composed = f_omega_automorphism(a, &f_omega_automorphism(b, &z).unwrap()).unwrap();
        let direct = f_omega_automorphism(a * b, &z).unwrap();
        assert!(composed.max_abs_diff(direct) < 1e-16);

        assert!(f_omega_automorphism(c(0.5, 0.0), &z).is_err());
    }

    #[test]
    fn magic_f_examples() {
        let z2 = c(0.3, -0.1);
        assert_eq!(magic_f(&TetraPoint::new(c(0.0, 0.0), z2, c(0.0, 0.0))).unwrap(), z2);

        let (big_c, lambda) = (0.5, c(0.2, 0.1));
        let v = magic_f(&TetraPoint::new(c(0.0, 0.0), lambda * (1.0 - big_c), c(-big_c, 0.0))).unwrap();
        assert!((v - lambda * (1.0 - big_c) / (1.0 - big_c).sqrt()).norm() < 1e-16);
        assert!((v.norm() - lambda.norm() * (1.0 - big_c).sqrt()).abs() < 1e-16);

        // 0.5 / sqrt(1 + 0.25 - 0.25)
        assert!((magic_f(&TetraPoint::real(0.5, 0.5, 0.25)).unwrap() - c(0.5, 0.0)).norm() < 1e-16);

        assert!(matches!(magic_f(&TetraPoint::real(0.0, 0.5, -1.5)), Err(Error::Branch(_))));
    }

    #[test]
    fn magic_f_maps_into_disc() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10_000 {
            let z = random_interior(&mut rng);
            assert!((z.z1 * z.z2 - z.z3).norm() < 1.0);
            assert!(magic_f(&z).unwrap().norm() < 1.0);
        }
    }

    #[test]
    fn g2_f_examples() {
        assert_eq!(g2_f(c(1.0, 0.0), &G2Point::real(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let omega = crate::unimodular(0.9);
        let lambda = c(0.3, -0.4);
        let v = g2_f(omega, &G2Point::new(-2.0 * lambda, lambda * lambda)).unwrap();
        assert!((v - lambda).norm() < 1e-15);
        // (0.5 - 1) / (2 - 1)
        assert_eq!(g2_f(c(1.0, 0.0), &G2Point::real(1.0, 0.25)).unwrap(), c(-0.5, 0.0));
        assert!(matches!(g2_f(c(1.0, 0.0), &G2Point::real(2.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn p_e_examples() {
        let z = TetraPoint::new(c(0.1, 0.1), c(-0.2, 0.0), c(0.05, 0.1));
        assert_eq!(p_e(&z, &z, AngleSearch::EXTREMAL).unwrap().m_scale, 0.0);

        // closed form |λ| / (1 + C - C|λ|)
        for (big_c, lambda, expected) in [(0.5, 0.5, 0.4), (0.5, 0.1, 0.1 / 1.45)] {
            let w = TetraPoint::real(0.0, 0.0, -big_c);
            let z = TetraPoint::real(0.0, lambda * (1.0 - big_c), -big_c);
            let d = p_e(&w, &z, AngleSearch::EXTREMAL).unwrap();
            assert!((d.m_scale - expected).abs() < 1e-12, "{} vs {expected}", d.m_scale);
        }
        assert!(p_e(&TetraPoint::real(1.0, 0.0, 0.0), &z, AngleSearch::EXTREMAL).is_err());
    }

    #[test]
    fn p_e_matches_closed_form_on_slice_family() {
        for big_c in [0.05, 0.2, 0.5, 0.8, 0.95] {
            for lambda in [c(0.1, 0.0), c(-0.3, 0.5), c(0.0, 0.9)] {
                let w = TetraPoint::real(0.0, 0.0, -big_c);
                let z = TetraPoint::new(c(0.0, 0.0), lambda * (1.0 - big_c), c(-big_c, 0.0));
                let r = lambda.norm();
                let expected = r / (1.0 + big_c - big_c * r);
                let d = p_e(&w, &z, AngleSearch::EXTREMAL).unwrap();
                assert!((d.m_scale - expected).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn separation_of_p_e_from_lower_bound() {
        let w = TetraPoint::real(0.0, 0.0, -0.5);
        let z = TetraPoint::real(0.0, 0.05, -0.5);
        let pe = p_e(&w, &z, AngleSearch::EXTREMAL).unwrap().m_scale;
        let lb = caratheodory_lower_bound(
            &w,
            &z,
            &ExtremalFamilyId::tetrablock_defaults(),
            AngleSearch::EXTREMAL,
        )
        .unwrap();
        assert!((pe - 0.068_965_517_241_379_31).abs() < 1e-10);
        assert!((lb.distance.m_scale - 0.1 * 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(lb.family, "MagicF");
        assert!(lb.distance.m_scale > pe);

        let registry = FamilyRegistry::standard();
        let lb2 = registry.lower_bound(&w, &z).unwrap();
        assert_eq!(lb2.distance, lb.distance);
    }

    #[test]
    fn lower_bound_dominates_p_e_and_respects_symmetries() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let families = ExtremalFamilyId::tetrablock_defaults();
        for _ in 0..40 {
            let w = random_interior(&mut rng);
            let z = random_interior(&mut rng);
            let pe = p_e(&w, &z, AngleSearch::EXTREMAL).unwrap().m_scale;
            let lb = caratheodory_lower_bound(&w, &z, &families, AngleSearch::EXTREMAL).unwrap();
            assert!(pe <= lb.distance.m_scale + 1e-12);

            let swapped = p_e(&sigma(&w), &sigma(&z), AngleSearch::EXTREMAL).unwrap().m_scale;
            assert!((swapped - pe).abs() < 1e-10);
            let omega = crate::unimodular(rng.gen_range(0.0..6.3));
            let rotated = p_e(
                &f_omega_automorphism(omega, &w).unwrap(),
                &f_omega_automorphism(omega, &z).unwrap(),
                AngleSearch::EXTREMAL,
            )
            .unwrap()
            .m_scale;
            assert!((rotated - pe).abs() < 1e-10, "{rotated} vs {pe}");
        }
    }

    #[test]
    fn pinned_family_member_and_mismatch() {
        let w = TetraPoint::ORIGIN;
        let z = TetraPoint::real(0.3, 0.0, 0.0);
        let pinned = ExtremalFamilyId::member(ExtremalFamilyTag::PsiOmegaSigma, c(1.0, 0.0)).unwrap();
        let lb = caratheodory_lower_bound(&w, &z, &[pinned], AngleSearch::EXTREMAL).unwrap();
        // Ψ_1(σ z) = 0.3
        assert!((lb.distance.m_scale - 0.3).abs() < 1e-15);
        assert_eq!(lb.omega, Some(c(1.0, 0.0)));

        let g2 = ExtremalFamilyId::all_over(ExtremalFamilyTag::G2FOmega);
        assert!(matches!(
            caratheodory_lower_bound(&w, &z, &[g2], AngleSearch::EXTREMAL),
            Err(Error::FamilyMismatch(_))
        ));
        assert!(caratheodory_lower_bound(&w, &z, &[], AngleSearch::EXTREMAL).is_err());
    }

    #[test]
    fn registry_accepts_new_families() {
        struct FirstCoordinate;
        impl TetraFamily for FirstCoordinate {
            fn name(&self) -> &str {
                "z1"
            }
            fn parametrized(&self) -> bool {
                false
            }
            fn eval(&self, _: C64, z: &TetraPoint) -> Result<C64> {
                Ok(z.z1)
            }
        }
        let mut registry = FamilyRegistry::empty(AngleSearch::EXTREMAL);
        registry.register(Box::new(FirstCoordinate));
        let lb = registry
            .lower_bound(&TetraPoint::ORIGIN, &TetraPoint::real(0.4, 0.0, 0.0))
            .unwrap();
        assert_eq!(lb.family, "z1");
        assert!((lb.distance.m_scale - 0.4).abs() < 1e-16);
        assert_eq!(registry.names(), vec!["z1"]);
    }

    #[test]
    fn g2_lower_bound_on_origin_geodesic_pair() {
        // C = 1 geodesic: (-2λ, λ²), distance from the origin is |λ|
        let lambda = c(0.2, 0.3);
        let lb = g2_caratheodory_lower_bound(
            &G2Point::real(0.0, 0.0),
            &G2Point::new(-2.0 * lambda, lambda * lambda),
            AngleSearch::EXTREMAL,
        )
        .unwrap();
        assert!((lb.distance.m_scale - lambda.norm()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_gradients_match_difference_quotients() {
        let functions: Vec<Box<dyn HolomorphicFunction>> = vec![
            Box::new(PsiFunction::geodesic_left_inverse(crate::unimodular(0.3), crate::unimodular(2.0))),
            Box::new(PsiFunction::new(crate::unimodular(-1.0)).swapped()),
            Box::new(MagicFunction),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let z = random_interior(&mut rng).to_array();
            for f in &functions {
                let g = f.gradient(&z).unwrap().unwrap();
                for j in 0..3 {
                    let h = 1e-6;
                    let mut zp = z;
                    zp[j] += h;
                    let mut zm = z;
                    zm[j] -= h;
                    let fd = (f.eval(&zp).unwrap() - f.eval(&zm).unwrap()) / (2.0 * h);
                    assert!((fd - g[j]).norm() < 1e-6 * (1.0 + g[j].norm()), "{}", f.label());
                }
            }
        }
    }
}
