//! Unit-disc geometry: Möbius pseudodistance, disc automorphisms and finite
//! Blaschke products.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Slack allowed when a value is required to lie in the closed disc.
pub const CLOSURE_TOL: f64 = 1e-12;

/// Slack allowed when a value is required to be unimodular.
pub const UNIMODULAR_TOL: f64 = 1e-12;

pub(crate) fn check_open(what: &'static str, v: C64) -> Result<()> {
    let modulus = v.norm();
    if modulus < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisc { what, modulus })
    }
}

pub(crate) fn check_closed(what: &'static str, v: C64) -> Result<()> {
    let modulus = v.norm();
    if modulus <= 1.0 + CLOSURE_TOL {
        Ok(())
    } else {
        Err(Error::OutsideClosedDisc { what, modulus })
    }
}

/// Validates `|v| = 1` and returns `v` renormalized onto the circle.
pub(crate) fn check_unimodular(what: &'static str, v: C64) -> Result<C64> {
    let modulus = v.norm();
    if (modulus - 1.0).abs() <= UNIMODULAR_TOL {
        Ok(v / modulus)
    } else {
        Err(Error::NotUnimodular { what, modulus })
    }
}

/// A complex number known to lie in the closed unit disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiscValue(C64);

impl DiscValue {
    /// Accepts `|v| < 1`.
    pub fn open(v: C64) -> Result<Self> {
        check_open("disc value", v)?;
        Ok(Self(v))
    }

    /// Accepts `|v| <= 1 + CLOSURE_TOL`.
    pub fn closed(v: C64) -> Result<Self> {
        check_closed("disc value", v)?;
        Ok(Self(v))
    }

    pub fn get(self) -> C64 {
        self.0
    }

    pub fn is_open(self) -> bool {
        self.0.norm() < 1.0
    }
}

impl From<DiscValue> for C64 {
    fn from(v: DiscValue) -> Self {
        v.0
    }
}

/// A distance on the disc reported on both scales: the Möbius pseudodistance
/// `m` and the Poincaré distance `p = artanh(m)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicDistance {
    pub m_scale: f64,
    pub p_scale: f64,
}

impl HyperbolicDistance {
    pub const ZERO: Self = Self {
        m_scale: 0.0,
        p_scale: 0.0,
    };

    pub fn from_m(m: f64) -> Self {
        let m = m.max(0.0);
        Self {
            m_scale: m,
            p_scale: m.atanh(),
        }
    }

    pub fn from_p(p: f64) -> Self {
        let p = p.max(0.0);
        Self {
            m_scale: p.tanh(),
            p_scale: p,
        }
    }
}

/// `|(a - b) / (1 - conj(a) b)|` without argument checks.
#[inline]
pub fn mobius_quotient(a: C64, b: C64) -> f64 {
    (a - b).norm() / (C64::new(1.0, 0.0) - a.conj() * b).norm()
}

/// Möbius and Poincaré distance between two points of the open disc.
pub fn mobius_distance(a: C64, b: C64) -> Result<HyperbolicDistance> {
    check_open("first argument", a)?;
    check_open("second argument", b)?;
    Ok(HyperbolicDistance::from_m(mobius_quotient(a, b)))
}

/// A finite Blaschke product scaled into the disc,
/// `λ ↦ scale · u · Π (λ - a_k) / (1 - conj(a_k) λ)`, or a constant map.
///
/// Every self-map of the disc the tetrablock constructions need
/// (automorphisms, rotations, constants, `t·λ`, products of those) has this
/// form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeMap {
    unimodular_factor: C64,
    zeros: Vec<C64>,
    scale: f64,
    constant_offset: Option<C64>,
}

impl BlaschkeMap {
    pub fn new(unimodular_factor: C64, zeros: Vec<C64>, scale: f64) -> Result<Self> {
        let unimodular_factor = check_unimodular("unimodular factor", unimodular_factor)?;
        for &a in &zeros {
            check_open("Blaschke zero", a)?;
        }
        if !(0.0..=1.0).contains(&scale) {
            return Err(Error::InvalidParameter(format!(
                "Blaschke scale must lie in [0, 1], got {scale}"
            )));
        }
        Ok(Self {
            unimodular_factor,
            zeros,
            scale,
            constant_offset: None,
        })
    }

    /// The constant map `λ ↦ c`, `|c| <= 1`.
    pub fn constant(c: C64) -> Result<Self> {
        check_closed("constant value", c)?;
        Ok(Self {
            unimodular_factor: C64::new(1.0, 0.0),
            zeros: Vec::new(),
            scale: 1.0,
            constant_offset: Some(c),
        })
    }

    pub fn identity() -> Self {
        Self {
            unimodular_factor: C64::new(1.0, 0.0),
            zeros: vec![C64::new(0.0, 0.0)],
            scale: 1.0,
            constant_offset: None,
        }
    }

    /// `λ ↦ ω (λ - a) / (1 - conj(a) λ)`.
    pub fn automorphism(a: C64, omega: C64) -> Result<Self> {
        Self::new(omega, vec![a], 1.0)
    }

    pub fn unimodular_factor(&self) -> C64 {
        self.unimodular_factor
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn constant_offset(&self) -> Option<C64> {
        self.constant_offset
    }

    /// Number of Möbius factors; constant maps have degree 0.
    pub fn degree(&self) -> usize {
        if self.constant_offset.is_some() {
            0
        } else {
            self.zeros.len()
        }
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0 || self.scale == 0.0
    }

    /// One Möbius factor at full scale.
    pub fn is_automorphism(&self) -> bool {
        self.constant_offset.is_none() && self.zeros.len() == 1 && self.scale == 1.0
    }

    /// Whether the map sends the open disc into the open disc (rather than
    /// merely into its closure).
    pub fn maps_into_open_disc(&self) -> bool {
        match self.constant_offset {
            Some(c) => c.norm() < 1.0,
            None => !self.zeros.is_empty() || self.scale < 1.0,
        }
    }

    pub fn eval(&self, lambda: C64) -> C64 {
        if let Some(c) = self.constant_offset {
            return c;
        }
        let product = self
            .zeros
            .iter()
            .fold(C64::new(1.0, 0.0), |acc, &a| acc * mobius_factor(a, lambda));
        self.unimodular_factor * self.scale * product
    }

    pub fn derivative(&self, lambda: C64) -> C64 {
        if self.constant_offset.is_some() || self.zeros.is_empty() {
            return C64::new(0.0, 0.0);
        }
        let factors: Vec<C64> = self.zeros.iter().map(|&a| mobius_factor(a, lambda)).collect();
        let mut total = C64::new(0.0, 0.0);
        for (k, &a) in self.zeros.iter().enumerate() {
            let denom = C64::new(1.0, 0.0) - a.conj() * lambda;
            let mut term = C64::new(1.0 - a.norm_sqr(), 0.0) / (denom * denom);
            for (j, f) in factors.iter().enumerate() {
                if j != k {
                    term *= f;
                }
            }
            total += term;
        }
        self.unimodular_factor * self.scale * total
    }

    pub fn value_at_origin(&self) -> C64 {
        self.eval(C64::new(0.0, 0.0))
    }
}

#[inline]
fn mobius_factor(a: C64, lambda: C64) -> C64 {
    (lambda - a) / (C64::new(1.0, 0.0) - a.conj() * lambda)
}

/// The disc automorphism `λ ↦ ω (λ - a) / (1 - conj(a) λ)`.
pub fn disc_automorphism(a: C64, omega: C64) -> Result<BlaschkeMap> {
    BlaschkeMap::automorphism(a, omega)
}

/// Evaluates `b` at a point of the open disc.
pub fn blaschke_eval(b: &BlaschkeMap, lambda: C64) -> Result<C64> {
    check_open("evaluation point", lambda)?;
    Ok(b.eval(lambda))
}

/// Schwarz–Pick contraction test for a sampled self-map `g` at two points:
/// `m(g(λ1), g(λ2)) <= m(λ1, λ2) + 1e-12`.
pub fn schwarz_pick_check(g: impl Fn(C64) -> C64, l1: C64, l2: C64) -> bool {
    mobius_quotient(g(l1), g(l2)) <= mobius_quotient(l1, l2) + 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_disc_point(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
        C64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
    }

    #[test]
    fn distance_examples() {
        let d = mobius_distance(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(d, HyperbolicDistance::ZERO);

        let d = mobius_distance(c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((d.m_scale - 0.5).abs() < 1e-15);
        assert!((d.p_scale - 0.549_306_144_334_054_8).abs() < 1e-15);

        // 0.6 / (1 + 0.09)
        let d = mobius_distance(c(0.3, 0.0), c(-0.3, 0.0)).unwrap();
        assert!((d.m_scale - 0.6 / 1.09).abs() < 1e-15);
        assert!((d.m_scale - 0.550_458_715_596_330_3).abs() < 1e-15);
    }

    #[test]
    fn distance_is_symmetric_and_rejects_boundary() {
        let a = c(0.2, -0.7);
        let b = c(-0.4, 0.1);
        assert_eq!(
            mobius_distance(a, b).unwrap(),
            mobius_distance(b, a).unwrap()
        );
        assert!(matches!(
            mobius_distance(c(1.0, 0.0), b),
            Err(Error::OutsideDisc { .. })
        ));
        assert!(mobius_distance(a, c(0.0, -1.5)).is_err());
    }

    #[test]
    fn automorphism_examples() {
        let id = disc_automorphism(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(id.eval(c(0.7, 0.0)), c(0.7, 0.0));

        let h = disc_automorphism(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        assert!(h.eval(c(0.5, 0.0)).norm() < 1e-16);
        assert!((h.eval(c(0.0, 0.0)) - c(-0.5, 0.0)).norm() < 1e-16);
        assert!(h.is_automorphism());

        assert!(disc_automorphism(c(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(disc_automorphism(c(0.1, 0.0), c(0.5, 0.0)).is_err());
    }

    #[test]
    fn blaschke_examples() {
        let constant = BlaschkeMap::constant(c(-0.5, 0.0)).unwrap();
        for l in [c(0.0, 0.0), c(0.3, 0.4), c(-0.9, 0.0)] {
            assert_eq!(blaschke_eval(&constant, l).unwrap(), c(-0.5, 0.0));
        }
        assert!(constant.is_constant());
        assert_eq!(constant.degree(), 0);

        let id = BlaschkeMap::identity();
        assert_eq!(blaschke_eval(&id, c(0.0, 0.3)).unwrap(), c(0.0, 0.3));

        let two = BlaschkeMap::new(c(1.0, 0.0), vec![c(0.5, 0.0), c(-0.5, 0.0)], 1.0).unwrap();
        assert!((two.eval(c(0.0, 0.0)) - c(-0.25, 0.0)).norm() < 1e-16);
        assert!(!two.is_automorphism());

        assert!(blaschke_eval(&two, c(1.0, 0.0)).is_err());
        assert!(BlaschkeMap::new(c(1.0, 0.0), vec![c(0.5, 0.0)], 1.5).is_err());
        assert!(BlaschkeMap::constant(c(1.5, 0.0)).is_err());
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let b = BlaschkeMap::new(c(0.0, 1.0), vec![c(0.3, -0.2), c(-0.1, 0.6)], 0.8).unwrap();
        let l = c(0.2, 0.1);
        let h = 1e-6;
        let fd = (b.eval(l + h) - b.eval(l - h)) / (2.0 * h);
        assert!((fd - b.derivative(l)).norm() < 1e-9);
    }

    #[test]
    fn schwarz_pick_examples() {
        assert!(schwarz_pick_check(|l| l, c(0.1, 0.2), c(-0.5, 0.3)));
        assert!(schwarz_pick_check(|_| c(0.3, 0.0), c(0.1, 0.2), c(-0.5, 0.3)));
        // 0.25 <= 0.5
        assert!(schwarz_pick_check(|l| l * l, c(0.0, 0.0), c(0.5, 0.0)));
        // expansion is caught
        assert!(!schwarz_pick_check(|l| 1.5 * l, c(0.0, 0.0), c(0.5, 0.0)));
    }

    #[test]
    fn automorphisms_preserve_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a = random_disc_point(&mut rng, 0.95);
            let omega = crate::unimodular(rng.gen_range(0.0..std::f64::consts::TAU));
            let h = disc_automorphism(a, omega).unwrap();
            let l1 = random_disc_point(&mut rng, 0.95);
            let l2 = random_disc_point(&mut rng, 0.95);
            let before = mobius_quotient(l1, l2);
            let after = mobius_quotient(h.eval(l1), h.eval(l2));
            assert!((before - after).abs() < 1e-12, "{before} vs {after}");
        }
    }

    #[test]
    fn scales_round_trip() {
        let mut m = 0.0;
        while m <= 1.0 - 1e-8 {
            let d = HyperbolicDistance::from_m(m);
            let back = HyperbolicDistance::from_p(d.p_scale);
            assert!((back.m_scale - m).abs() <= 1e-14 * m.max(1e-300));
            m += 0.013_7;
        }
        let d = HyperbolicDistance::from_m(1.0 - 1e-8);
        assert!((d.p_scale.tanh() - d.m_scale).abs() <= 1e-14);
    }

    #[test]
    fn blaschke_maps_into_closed_disc() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            let degree = rng.gen_range(0..4);
            let zeros = (0..degree).map(|_| random_disc_point(&mut rng, 0.99)).collect();
            let omega = crate::unimodular(rng.gen_range(0.0..std::f64::consts::TAU));
            let b = BlaschkeMap::new(omega, zeros, rng.gen_range(0.0..=1.0)).unwrap();
            let l = random_disc_point(&mut rng, 0.999);
            assert!(b.eval(l).norm() <= 1.0 + CLOSURE_TOL);
        }
    }
}
