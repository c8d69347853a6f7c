//! Membership and scaling functionals for the tetrablock 𝔼 and the
//! symmetrized bidisc G₂.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::{maximize_on_circle, AngleSearch};
use crate::{unimodular, C64};

/// Default half-width of the band around the level set `{value = 1}` that is
/// classified as boundary.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A point of ℂ³, tested against the tetrablock.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TetraPoint {
    pub z1: C64,
    pub z2: C64,
    pub z3: C64,
}

impl TetraPoint {
    pub const ORIGIN: Self = Self {
        z1: C64::new(0.0, 0.0),
        z2: C64::new(0.0, 0.0),
        z3: C64::new(0.0, 0.0),
    };

    pub fn new(z1: C64, z2: C64, z3: C64) -> Self {
        Self { z1, z2, z3 }
    }

    pub fn real(z1: f64, z2: f64, z3: f64) -> Self {
        Self::new(z1.into(), z2.into(), z3.into())
    }

    pub fn from_slice(z: &[C64]) -> Result<Self> {
        match z {
            [z1, z2, z3] => Ok(Self::new(*z1, *z2, *z3)),
            _ => Err(Error::Dimension {
                expected: 3,
                got: z.len(),
            }),
        }
    }

    pub fn to_array(self) -> [C64; 3] {
        [self.z1, self.z2, self.z3]
    }

    /// The product embedding `(λ, μ) ↦ (λ, μ, λμ)`, whose image is the orbit
    /// of the origin under the automorphism group.
    pub fn from_product(lambda: C64, mu: C64) -> Self {
        Self::new(lambda, mu, lambda * mu)
    }

    /// `(t z1, t z2, t² z3)`.
    pub fn quasi_scaled(self, t: C64) -> Self {
        Self::new(t * self.z1, t * self.z2, t * t * self.z3)
    }

    pub fn is_origin(self) -> bool {
        self == Self::ORIGIN
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self.z1 - other.z1)
            .norm()
            .max((self.z2 - other.z2).norm())
            .max((self.z3 - other.z3).norm())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

impl Location {
    /// Classifies a defining value whose sublevel set `{< 1}` is the domain.
    pub fn classify(value: f64, tol: f64) -> Self {
        if value < 1.0 - tol {
            Location::Interior
        } else if (value - 1.0).abs() <= tol {
            Location::Boundary
        } else {
            Location::Exterior
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub location: Location,
    pub e_value: f64,
    pub psi_sup: Option<f64>,
    pub tolerance_used: f64,
}

/// `|z1 - conj(z2) z3| + |z2 - conj(z1) z3| + |z3|²`; the tetrablock is its
/// sublevel set `{< 1}`.
pub fn tetra_e_value(z: &TetraPoint) -> f64 {
    (z.z1 - z.z2.conj() * z.z3).norm() + (z.z2 - z.z1.conj() * z.z3).norm() + z.z3.norm_sqr()
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("tolerance must be positive, got {tol}")))
    }
}

pub fn tetra_membership(z: &TetraPoint, tol: f64) -> Result<MembershipReport> {
    check_tol(tol)?;
    let e_value = tetra_e_value(z);
    Ok(MembershipReport {
        location: Location::classify(e_value, tol),
        e_value,
        psi_sup: None,
        tolerance_used: tol,
    })
}

/// Membership report with the `Ψ`-criterion filled in whenever `|z1| < 1`.
pub fn tetra_membership_full(z: &TetraPoint, tol: f64) -> Result<MembershipReport> {
    let mut report = tetra_membership(z, tol)?;
    if z.z1.norm() < 1.0 {
        report.psi_sup = Some(psi_sup(z, AngleSearch::MEMBERSHIP)?);
    }
    Ok(report)
}

/// `sup_{|η| = 1} |Ψ_η(z)|`, which by the maximum principle equals the sup
/// over the closed disc when `|z1| < 1`. A point with `|z1| < 1` lies in the
/// tetrablock exactly when this is `< 1`.
pub fn psi_sup(z: &TetraPoint, search: AngleSearch) -> Result<f64> {
    if z.z1.norm() >= 1.0 {
        return Err(Error::Precondition(format!(
            "psi_sup needs |z1| < 1, got {}",
            z.z1.norm()
        )));
    }
    let (_, value) = maximize_on_circle(
        |theta| crate::extremals::psi_eta_unchecked(unimodular(theta), z).norm(),
        search,
    );
    Ok(value)
}

/// A point `(s, p)` of ℂ², tested against the symmetrized bidisc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct G2Point {
    pub s: C64,
    pub p: C64,
}

impl G2Point {
    pub fn new(s: C64, p: C64) -> Self {
        Self { s, p }
    }

    pub fn real(s: f64, p: f64) -> Self {
        Self::new(s.into(), p.into())
    }

    /// Symmetrization `(λ + μ, λμ)`.
    pub fn from_roots(lambda: C64, mu: C64) -> Self {
        Self::new(lambda + mu, lambda * mu)
    }

    pub fn from_slice(z: &[C64]) -> Result<Self> {
        match z {
            [s, p] => Ok(Self::new(*s, *p)),
            _ => Err(Error::Dimension {
                expected: 2,
                got: z.len(),
            }),
        }
    }

    pub fn to_array(self) -> [C64; 2] {
        [self.s, self.p]
    }

    /// Roots of `t² - s t + p`, larger modulus first.
    pub fn roots(self) -> (C64, C64) {
        quadratic_roots(-self.s, self.p)
    }
}

/// Roots of `t² + b t + c` by the sign-matched formula, which avoids
/// cancellation between `-b` and the square root of the discriminant.
pub fn quadratic_roots(b: C64, c: C64) -> (C64, C64) {
    let sqrt_disc = (b * b - 4.0 * c).sqrt();
    let sign = if (b.conj() * sqrt_disc).re >= 0.0 { 1.0 } else { -1.0 };
    let q = -(b + sign * sqrt_disc) / 2.0;
    if q == C64::new(0.0, 0.0) {
        // b = 0 and c = 0
        return (q, q);
    }
    let (r1, r2) = (q, c / q);
    if r1.norm() >= r2.norm() {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct G2MembershipReport {
    pub location: Location,
    pub max_root_modulus: f64,
    pub roots: [C64; 2],
    pub tolerance_used: f64,
}

pub fn g2_membership(w: &G2Point, tol: f64) -> Result<G2MembershipReport> {
    check_tol(tol)?;
    let (r1, r2) = w.roots();
    let max_root_modulus = r1.norm().max(r2.norm());
    Ok(G2MembershipReport {
        location: Location::classify(max_root_modulus, tol),
        max_root_modulus,
        roots: [r1, r2],
        tolerance_used: tol,
    })
}

/// Quasi-homogeneous gauge of the tetrablock:
/// `ρ(z) = inf { t > 0 : (z1/t, z2/t, z3/t²) ∈ 𝔼 }`, so that
/// `ρ(λz1, λz2, λ²z3) = |λ| ρ(z)` and `ρ(z) < 1` exactly on 𝔼.
///
/// Membership of the rescaled point is monotone in `t` because the
/// tetrablock is the image of the unit ball of 2×2 matrices under
/// `A ↦ (a11, a22, det A)` and the ball is balanced. Computed by bisection to
/// absolute accuracy `tol`; `ρ(0) = 0`.
pub fn rho_functional(z: &TetraPoint, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if z.is_origin() {
        return Ok(0.0);
    }
    let inside = |t: f64| {
        let inv = 1.0 / t;
        tetra_e_value(&z.quasi_scaled(C64::new(inv, 0.0))) < 1.0
    };
    let mut hi = 4.0 * z.z1.norm().max(z.z2.norm()).max(z.z3.norm().sqrt()).max(1.0);
    while !inside(hi) {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Domains whose membership is decided by a single defining value with
/// sublevel set `{< 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainKind {
    Tetrablock,
    SymmetrizedBidisc,
    /// The unit polydisc in ℂⁿ; used for Reinhardt examples.
    Polydisc,
}

impl DomainKind {
    pub fn defining_value(self, z: &[C64]) -> Result<f64> {
        match self {
            DomainKind::Tetrablock => Ok(tetra_e_value(&TetraPoint::from_slice(z)?)),
            DomainKind::SymmetrizedBidisc => {
                let (r1, r2) = G2Point::from_slice(z)?.roots();
                Ok(r1.norm().max(r2.norm()))
            }
            DomainKind::Polydisc => Ok(z.iter().map(|c| c.norm()).fold(0.0, f64::max)),
        }
    }
}
