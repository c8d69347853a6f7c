//! Seeded verification campaigns for the identities and inequalities the
//! library implements. Each suite returns a [`SuiteReport`] with the number
//! of cases examined, the worst deviation seen and the threshold it was held
//! to.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domains::{psi_sup, rho_functional, tetra_e_value, TetraPoint};
use crate::error::{Error, Result};
use crate::extremals::{caratheodory_lower_bound, p_e, ExtremalFamilyId, G2LeftInverse, HolomorphicFunction};
use crate::geodesics::{
    classify_disc, disc_search_upper_bound, g2_violation_witness, lempert_special, left_inverse_residual,
    normalized_phi, special_pair_extremal, standard_samples, transport_disc, verify_disc, BoundaryDisc, DiscVerdict,
    G2GeodesicParams, GeneralDiscParams, OriginGeodesic, OriginGeodesicParams, SearchOptions, TransportClass,
};
use crate::hyperbolic::{mobius_quotient, BlaschkeMap};
use crate::necessary::{geodesic_necessary_check, CircularAction, NecessaryVerdict};
use crate::optimize::AngleSearch;
use crate::domains::DomainKind;
use crate::{unimodular, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Boundary,
    Inclusion,
    Certificate,
    Prop41,
    Prop5,
    Necessary,
    G2,
    Membership,
    Rho,
    Transport,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Boundary,
        Suite::Inclusion,
        Suite::Certificate,
        Suite::Prop41,
        Suite::Prop5,
        Suite::Necessary,
        Suite::G2,
        Suite::Membership,
        Suite::Rho,
        Suite::Transport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Boundary => "boundary",
            Suite::Inclusion => "inclusion",
            Suite::Certificate => "certificate",
            Suite::Prop41 => "prop41",
            Suite::Prop5 => "prop5",
            Suite::Necessary => "necessary",
            Suite::G2 => "g2",
            Suite::Membership => "membership",
            Suite::Rho => "rho",
            Suite::Transport => "transport",
        }
    }

    pub fn claim(self) -> &'static str {
        match self {
            Suite::Boundary => "boundary discs have e = 1 identically",
            Suite::Inclusion => "general discs map into the tetrablock",
            Suite::Certificate => "origin geodesics have the Psi left inverse and k = c = |lambda| at origin pairs",
            Suite::Prop41 => "Lempert function of ((0,0,w),(0,z,w)) equals |z|/(1-|w|)",
            Suite::Prop5 => "the Psi-family lower bound is strictly below the Caratheodory distance",
            Suite::Necessary => "geodesics satisfy the quadratic necessary condition",
            Suite::G2 => "symmetrized-bidisc geodesics exist exactly for C in [1,2]",
            Suite::Membership => "the defining inequality agrees with the Psi supremum test",
            Suite::Rho => "the gauge is quasi-homogeneous",
            Suite::Transport => "transported discs lie wholly inside or wholly on the boundary",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub claim: String,
    /// Number of elementary checks performed.
    pub samples: usize,
    /// Largest deviation observed, in the units of `threshold`.
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Suite-specific figures (named values, all raw numbers unless the key
    /// carries a scale suffix).
    pub metrics: BTreeMap<String, f64>,
}

struct Tally {
    samples: usize,
    worst: f64,
    failures: usize,
    metrics: BTreeMap<String, f64>,
}

impl Tally {
    fn new() -> Self {
        Self {
            samples: 0,
            worst: 0.0,
            failures: 0,
            metrics: BTreeMap::new(),
        }
    }

    /// Records a deviation; NaN counts as infinitely bad.
    fn record(&mut self, deviation: f64, ok: bool) {
        self.samples += 1;
        self.worst = if deviation.is_nan() { f64::INFINITY } else { self.worst.max(deviation) };
        if !ok || deviation.is_nan() {
            self.failures += 1;
        }
    }

    fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    fn finish(mut self, suite: Suite, threshold: f64) -> SuiteReport {
        self.metric("failures", self.failures as f64);
        SuiteReport {
            suite,
            claim: suite.claim().to_string(),
            samples: self.samples,
            worst: self.worst,
            threshold,
            passed: self.failures == 0,
            metrics: self.metrics,
        }
    }
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> C64 {
    unimodular(rng.gen_range(0.0..std::f64::consts::TAU))
}

fn random_disc_point(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    C64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// A constant map into the open disc or a Blaschke product of degree 1 or 2.
fn random_self_map(rng: &mut ChaCha8Rng) -> BlaschkeMap {
    let degree = rng.gen_range(0..=2);
    if degree == 0 {
        return BlaschkeMap::constant(random_disc_point(rng, 0.99)).expect("inside the disc");
    }
    let zeros = (0..degree).map(|_| random_disc_point(rng, 0.95)).collect();
    BlaschkeMap::new(random_unimodular(rng), zeros, rng.gen_range(0.05..=1.0)).expect("valid Blaschke data")
}

/// Origin geodesic with `φ` constant or of degree 1–2.
pub fn random_origin_geodesic(rng: &mut ChaCha8Rng) -> OriginGeodesicParams {
    let (o1, o2) = (random_unimodular(rng), random_unimodular(rng));
    let degree = rng.gen_range(0..=2);
    let (phi, c) = if degree == 0 {
        let c: f64 = rng.gen_range(0.0..=1.0);
        (BlaschkeMap::constant(C64::new(-c, 0.0)).expect("closed disc"), c)
    } else {
        let zeros = (0..degree).map(|_| random_disc_point(rng, 0.95)).collect();
        normalized_phi(zeros, rng.gen_range(0.05..=1.0)).expect("valid Blaschke data")
    };
    OriginGeodesicParams::new(c, o1, o2, phi).expect("normalized parameters")
}

fn random_lambdas(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| random_disc_point(rng, 0.99)).collect()
}

fn boundary(seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..1000 {
        let disc = BoundaryDisc::new(rng.gen_range(0.0..=1.0), random_unimodular(&mut rng), random_unimodular(&mut rng), random_self_map(&mut rng))?;
        for lambda in random_lambdas(&mut rng, 100) {
            let d = (tetra_e_value(&disc.point(lambda)) - 1.0).abs();
            t.record(d, d < 1e-12);
        }
    }
    Ok(t.finish(Suite::Boundary, 1e-12))
}

fn inclusion(seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    let mut max_e: f64 = 0.0;
    for _ in 0..1000 {
        let p = GeneralDiscParams::new(
            rng.gen_range(0.0..1.0),
            random_unimodular(&mut rng),
            random_unimodular(&mut rng),
            random_self_map(&mut rng),
            random_self_map(&mut rng),
        )?;
        for lambda in random_lambdas(&mut rng, 100) {
            let e = tetra_e_value(&p.eval(lambda));
            max_e = max_e.max(e);
            t.record(e, e < 1.0);
        }
    }
    t.metric("max_e_value", max_e);
    t.metric("margin", 1.0 - max_e);
    Ok(t.finish(Suite::Inclusion, 1.0))
}

fn certificate_discs(seed: u64) -> Vec<OriginGeodesic> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..200).map(|_| OriginGeodesic::new(random_origin_geodesic(&mut rng))).collect()
}

fn certificate(seed: u64) -> Result<SuiteReport> {
    let mut t = Tally::new();
    let mut worst_schwarz: f64 = 0.0;
    for disc in certificate_discs(seed) {
        let left = disc.left_inverse();
        let r = left_inverse_residual(&disc, &left)?;
        t.record(r, r < 1e-10);
        let at_origin = left.eval(&disc.point(C64::new(0.0, 0.0)).to_array())?;
        for lambda in standard_samples() {
            let image = left.eval(&disc.point(lambda).to_array())?;
            let d = (mobius_quotient(at_origin, image) - lambda.norm()).abs();
            worst_schwarz = worst_schwarz.max(d);
            t.record(0.0, d < 1e-12);
        }
    }
    t.metric("max_schwarz_defect", worst_schwarz);
    Ok(t.finish(Suite::Certificate, 1e-10))
}

/// The `(z, w)` grid: `|z| = 0.04(i+1)`, `|w| = 0.05j`, so `|z| + |w| <= 0.85`.
pub fn prop41_grid() -> Vec<(C64, C64)> {
    let mut out = Vec::with_capacity(100);
    for i in 0..10 {
        for j in 0..10 {
            let z = C64::from_polar(0.04 * (i + 1) as f64, 0.7 * i as f64 + 0.3 * j as f64);
            let w = C64::from_polar(0.05 * j as f64, 1.3 * j as f64 + 0.2);
            out.push((z, w));
        }
    }
    out
}

/// Applies `f` to every item on scoped worker threads; results keep input
/// order, so the outcome does not depend on scheduling.
fn parallel_map<T: Sync, R: Send>(items: &[T], f: impl Fn(usize, &T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                let f = &f;
                scope.spawn(move || part.iter().enumerate().map(|(i, x)| f(c * chunk + i, x)).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn prop41(seed: u64, budget: usize) -> Result<SuiteReport> {
    let grid = prop41_grid();
    let searched = parallel_map(&grid, |k, &(z, w)| -> Result<Option<f64>> {
        let a = TetraPoint::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), w);
        let b = TetraPoint::new(C64::new(0.0, 0.0), z, w);
        let opts = SearchOptions {
            budget,
            seed: seed.wrapping_add(k as u64),
            ..SearchOptions::default()
        };
        Ok(disc_search_upper_bound(&a, &b, &opts)?.bound().map(|d| d.m_scale))
    });
    let mut t = Tally::new();
    let mut worst_extremal: f64 = 0.0;
    let mut worst_over: f64 = 0.0;
    let mut worst_under: f64 = 0.0;
    for ((z, w), found) in grid.into_iter().zip(searched) {
        let exact = lempert_special(z, w)?.m_scale;
        let bound = found?.unwrap_or(f64::INFINITY);
        let over = bound - exact;
        worst_over = worst_over.max(over);
        worst_under = worst_under.max(-over);
        t.record(over.abs(), over <= 1e-9 && over >= -1e-6);

        let a = TetraPoint::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), w);
        let b = TetraPoint::new(C64::new(0.0, 0.0), z, w);
        let (disc, l2) = special_pair_extremal(z, w)?;
        let miss = disc.point(C64::new(0.0, 0.0)).max_abs_diff(a).max(disc.point(l2).max_abs_diff(b));
        let d = (l2.norm() - exact).abs().max(miss);
        worst_extremal = worst_extremal.max(d);
        t.record(0.0, d < 1e-12);
    }
    t.metric("max_search_excess", worst_over);
    t.metric("max_search_deficit", worst_under);
    t.metric("max_extremal_defect", worst_extremal);
    Ok(t.finish(Suite::Prop41, 1e-6))
}

fn prop5() -> Result<SuiteReport> {
    let w = TetraPoint::real(0.0, 0.0, -0.5);
    let z = TetraPoint::real(0.0, 0.05, -0.5);
    let pe = p_e(&w, &z, AngleSearch::EXTREMAL)?.m_scale;
    let lower = caratheodory_lower_bound(&w, &z, &ExtremalFamilyId::tetrablock_defaults(), AngleSearch::EXTREMAL)?;
    let c_lower = lower.distance.m_scale;
    let mut t = Tally::new();
    let d1 = (pe - 0.068966).abs();
    let d2 = (c_lower - 0.070711).abs();
    t.record(d1, d1 <= 1e-6);
    t.record(d2, d2 <= 1e-6);
    t.record(0.0, c_lower > pe);
    t.metric("p_e_m_scale", pe);
    t.metric("c_lower_m_scale", c_lower);
    t.metric("gap_m_scale", c_lower - pe);
    Ok(t.finish(Suite::Prop5, 1e-6))
}

/// The G₂ grid: `C = 1 + 0.05k`, eight rotations each.
pub fn g2_grid() -> Vec<G2GeodesicParams> {
    let mut out = Vec::new();
    for k in 0..=20 {
        for j in 0..8 {
            let omega = unimodular(std::f64::consts::TAU * j as f64 / 8.0 + 0.1);
            out.push(G2GeodesicParams::new(1.0 + 0.05 * k as f64, omega).expect("grid inside [1, 2]"));
        }
    }
    out
}

fn necessary(seed: u64) -> Result<SuiteReport> {
    let mut t = Tally::new();
    let mut worst_tetra: f64 = 0.0;
    for disc in certificate_discs(seed) {
        for action in CircularAction::tetrablock() {
            let r = geodesic_necessary_check(&disc.left_inverse(), &disc, &action, Some(1e-7))?;
            worst_tetra = worst_tetra.max(r.fit.residual);
            t.record(r.fit.residual, r.verdict == NecessaryVerdict::Pass);
        }
    }
    let mut worst_a: f64 = 0.0;
    let mut worst_imag: f64 = 0.0;
    let mut worst_c: f64 = 0.0;
    for p in g2_grid() {
        let r = geodesic_necessary_check(&G2LeftInverse { omega: p.omega }, &p, &CircularAction::symmetrized_bidisc(), Some(1e-7))?;
        let a = r.free_fit.c0.norm();
        let imag = r.free_fit.middle().im.abs();
        worst_a = worst_a.max(a);
        worst_imag = worst_imag.max(imag);
        worst_c = worst_c.max((r.fit.c - p.c).abs());
        t.record(r.fit.residual, r.verdict == NecessaryVerdict::Pass && a < 1e-9 && imag < 1e-9);
    }
    t.metric("max_tetrablock_fit_residual", worst_tetra);
    t.metric("max_g2_constant", worst_a);
    t.metric("max_g2_imaginary_c", worst_imag);
    t.metric("max_g2_c_deviation", worst_c);
    Ok(t.finish(Suite::Necessary, 1e-7))
}

fn g2_window() -> Result<SuiteReport> {
    let mut t = Tally::new();
    let mut worst: f64 = 0.0;
    for p in g2_grid() {
        let r = verify_disc(&p, DomainKind::SymmetrizedBidisc, Some(&G2LeftInverse { omega: p.omega }), 1e-12)?;
        let res = r.left_inverse_residual.unwrap_or(f64::INFINITY);
        worst = worst.max(res);
        let clean = g2_violation_witness(&p, 200, 64).is_none();
        t.record(res, r.verdict == DiscVerdict::GeodesicVerified && clean);
    }
    for c in [0.9, 2.1, 2.5] {
        let p = G2GeodesicParams::unchecked(c, unimodular(0.3))?;
        let witness = g2_violation_witness(&p, 200, 64);
        if let Some(l) = witness {
            t.metric(&format!("witness_modulus_c_{c}"), l.norm());
        }
        t.record(0.0, witness.is_some());
    }
    t.metric("max_left_inverse_residual", worst);
    Ok(t.finish(Suite::G2, 1e-12))
}

fn membership(seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    let mut skipped = 0usize;
    while t.samples < 10_000 {
        let z = TetraPoint::new(
            random_disc_point(&mut rng, 1.0),
            random_disc_point(&mut rng, 1.3),
            random_disc_point(&mut rng, 1.3),
        );
        let e = tetra_e_value(&z);
        if (e - 1.0).abs() < 1e-6 {
            skipped += 1;
            continue;
        }
        let sup = psi_sup(&z, AngleSearch::MEMBERSHIP)?;
        t.record(0.0, (e < 1.0) == (sup < 1.0));
    }
    t.metric("disagreements", t.failures as f64);
    t.metric("skipped_in_band", skipped as f64);
    Ok(t.finish(Suite::Membership, 0.0))
}

fn rho(seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..100 {
        let z = TetraPoint::new(
            random_disc_point(&mut rng, 1.5),
            random_disc_point(&mut rng, 1.5),
            random_disc_point(&mut rng, 1.5),
        );
        let lambda: f64 = 1.0 - rng.gen::<f64>();
        let scaled = TetraPoint::new(lambda * z.z1, lambda * z.z2, lambda * lambda * z.z3);
        let d = (rho_functional(&scaled, 1e-12)? - lambda * rho_functional(&z, 1e-12)?).abs();
        t.record(d, d < 1e-7);
    }
    Ok(t.finish(Suite::Rho, 1e-7))
}

fn transport(seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    let mut counts = [0usize; 3];
    for k in 0..200 {
        let automorphism = k % 2 == 0;
        let (phi, c) = if automorphism {
            normalized_phi(vec![random_disc_point(&mut rng, 0.95)], 1.0)?
        } else {
            let degree = rng.gen_range(1..=2);
            normalized_phi((0..degree).map(|_| random_disc_point(&mut rng, 0.95)).collect(), 0.9)?
        };
        let params = OriginGeodesicParams::new(c, random_unimodular(&mut rng), random_unimodular(&mut rng), phi)?;
        let disc = transport_disc(OriginGeodesic::new(params))?;
        let (class, lo, hi) = classify_disc(&disc, 1e-8)?;
        counts[class as usize] += 1;
        let expected = if automorphism { TransportClass::Boundary } else { TransportClass::Interior };
        let deviation = if automorphism { (lo - 1.0).abs().max((hi - 1.0).abs()) } else { 0.0 };
        t.record(deviation, class == expected);
    }
    t.metric("interior", counts[TransportClass::Interior as usize] as f64);
    t.metric("boundary", counts[TransportClass::Boundary as usize] as f64);
    t.metric("mixed", counts[TransportClass::Mixed as usize] as f64);
    Ok(t.finish(Suite::Transport, 1e-8))
}

/// Evaluation allowance per pair in the Lempert-function suite.
pub const PROP41_BUDGET: usize = crate::geodesics::DEFAULT_SEARCH_BUDGET;

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    match suite {
        Suite::Boundary => boundary(seed),
        Suite::Inclusion => inclusion(seed),
        Suite::Certificate => certificate(seed),
        Suite::Prop41 => prop41(seed, PROP41_BUDGET),
        Suite::Prop5 => prop5(),
        Suite::Necessary => necessary(seed),
        Suite::G2 => g2_window(),
        Suite::Membership => membership(seed),
        Suite::Rho => rho(seed),
        Suite::Transport => transport(seed),
    }
}

pub fn run_all(seed: u64) -> Result<Vec<SuiteReport>> {
    Suite::ALL.into_iter().map(|s| run_suite(s, seed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn quick_suites_pass() {
        for s in [Suite::Prop5, Suite::Rho, Suite::G2, Suite::Transport] {
            let r = run_suite(s, 1).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        assert_eq!(run_suite(Suite::Rho, 4).unwrap(), run_suite(Suite::Rho, 4).unwrap());
    }
}
