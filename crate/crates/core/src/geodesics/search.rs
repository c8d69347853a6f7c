use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::discs::{rotated_phi, Cor43Extremal, GeneralDiscParams, OriginGeodesic, OriginGeodesicParams, ProductDisc};
use super::AnalyticDisc;
use crate::domains::{tetra_membership, Location, TetraPoint, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::extremals::sigma;
use crate::hyperbolic::{mobius_quotient, BlaschkeMap, HyperbolicDistance};
use crate::optimize::{descend_on_zero_set, levenberg_marquardt, restore_feasibility, EvalBudget, Residual};
use crate::{unimodular, C64};

/// Largest sum of squared interpolation errors a candidate disc may have.
pub const ACCEPT_RESIDUAL: f64 = 1e-9;
pub const DEFAULT_SEARCH_BUDGET: usize = 100_000;

const DESCENT_FEASIBLE: f64 = 1e-18;
const TIGHT_RESIDUAL: f64 = 1e-20;
const COR43_SCALE_CAP: f64 = 1.0 - 1e-9;
const PENALTY: f64 = 1e3;
const SCREEN_DRAWS: usize = 32;
/// Cost below which a short Levenberg–Marquardt run is continued.
const PROMISING: f64 = 1e-3;

/// A finite-dimensional family of analytic discs in the tetrablock, with
/// Blaschke degrees of the free self-maps of the disc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchFamily {
    /// The general discs with `φ`, `ψ` of the given degrees (0 = constant).
    General { phi_degree: usize, psi_degree: usize, swapped: bool },
    /// Origin geodesics precomposed with a disc automorphism.
    Origin { phi_degree: usize, swapped: bool },
    /// Transported extremals.
    Cor43 { phi_degree: usize, swapped: bool },
    /// `λ ↦ (a, b, ab)`.
    Product { a_degree: usize, b_degree: usize },
}

fn self_map_len(degree: usize) -> usize {
    if degree == 0 {
        2
    } else {
        2 + 2 * degree
    }
}

fn normalized_len(degree: usize) -> usize {
    1 + 2 * degree
}

struct Cursor<'a> {
    x: &'a [f64],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn new(x: &'a [f64]) -> Self {
        Self { x, at: 0 }
    }

    fn take(&mut self) -> f64 {
        let v = self.x[self.at];
        self.at += 1;
        v
    }

    fn angle(&mut self) -> C64 {
        unimodular(self.take())
    }

    fn unit(&mut self) -> f64 {
        self.take().sin().powi(2)
    }

    fn point(&mut self) -> C64 {
        let v = C64::new(self.take(), self.take());
        v / (1.0 + v.norm_sqr()).sqrt()
    }

    fn self_map(&mut self, degree: usize) -> Result<BlaschkeMap> {
        if degree == 0 {
            return BlaschkeMap::constant(self.point());
        }
        let u = self.angle();
        let s = self.unit();
        let zeros = (0..degree).map(|_| self.point()).collect();
        BlaschkeMap::new(u, zeros, s)
    }

    /// `φ` with `φ(0) = -C` real, the rotation absorbed into `ω1`; returns
    /// `(φ, C, ω1, ω2)`.
    fn normalized(&mut self, degree: usize, cap: f64) -> Result<(BlaschkeMap, f64, C64, C64)> {
        let (o1, o2) = (self.angle(), self.angle());
        if degree == 0 {
            let c = self.unit() * cap;
            return Ok((BlaschkeMap::constant(C64::new(-c, 0.0))?, c, o1, o2));
        }
        let s = self.unit() * cap;
        let zeros = (0..degree).map(|_| self.point()).collect();
        let (phi, c, o1) = rotated_phi(o1, zeros, s)?;
        Ok((phi, c, o1, o2))
    }
}

struct Swapped<D>(D);

impl<D: AnalyticDisc> AnalyticDisc for Swapped<D> {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, lambda: C64) -> Vec<C64> {
        let v = TetraPoint::from_slice(&self.0.eval(lambda)).expect("tetrablock disc");
        sigma(&v).to_array().to_vec()
    }
}

fn maybe_swapped<D: AnalyticDisc + 'static>(disc: D, swapped: bool) -> Box<dyn AnalyticDisc> {
    if swapped {
        Box::new(Swapped(disc))
    } else {
        Box::new(disc)
    }
}

impl SearchFamily {
    /// The families tried by default, simplest first.
    pub fn standard() -> Vec<Self> {
        let mut out = Vec::new();
        for d in 0..=2 {
            for swapped in [false, true] {
                out.push(Self::Cor43 { phi_degree: d, swapped });
                out.push(Self::Origin { phi_degree: d, swapped });
            }
        }
        for (a, b) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)] {
            out.push(Self::Product { a_degree: a, b_degree: b });
        }
        for phi in 0..=2 {
            for psi in 1..=2 {
                for swapped in [false, true] {
                    out.push(Self::General {
                        phi_degree: phi,
                        psi_degree: psi,
                        swapped,
                    });
                }
            }
        }
        out
    }

    /// Whether the family is closed under precomposition with disc
    /// automorphisms, so the first preimage can be pinned at 0.
    fn pins_first_preimage(self) -> bool {
        matches!(self, Self::General { .. } | Self::Product { .. })
    }

    fn disc_len(self) -> usize {
        match self {
            Self::General {
                phi_degree,
                psi_degree,
                ..
            } => 3 + self_map_len(phi_degree) + self_map_len(psi_degree),
            Self::Origin { phi_degree, .. } | Self::Cor43 { phi_degree, .. } => 2 + normalized_len(phi_degree),
            Self::Product { a_degree, b_degree } => self_map_len(a_degree) + self_map_len(b_degree),
        }
    }

    /// Length of the real parameter vector: disc parameters followed by the
    /// free preimages.
    pub fn parameter_len(self) -> usize {
        self.disc_len() + if self.pins_first_preimage() { 2 } else { 4 }
    }

    /// Builds the disc encoded by the leading parameters.
    pub fn disc(self, x: &[f64]) -> Result<Box<dyn AnalyticDisc>> {
        if x.len() < self.disc_len() {
            return Err(Error::Dimension {
                expected: self.disc_len(),
                got: x.len(),
            });
        }
        let mut cur = Cursor::new(x);
        Ok(match self {
            Self::General {
                phi_degree,
                psi_degree,
                swapped,
            } => {
                let c = cur.unit();
                let (o1, o2) = (cur.angle(), cur.angle());
                let phi = cur.self_map(phi_degree)?;
                let psi = cur.self_map(psi_degree)?;
                maybe_swapped(GeneralDiscParams::new(c, o1, o2, phi, psi)?, swapped)
            }
            Self::Origin { phi_degree, swapped } => {
                let (phi, c, o1, o2) = cur.normalized(phi_degree, 1.0)?;
                let disc = OriginGeodesic {
                    params: OriginGeodesicParams::new(c, o1, o2, phi)?,
                    swapped,
                };
                Box::new(disc)
            }
            Self::Cor43 { phi_degree, swapped } => {
                let (phi, c, o1, o2) = cur.normalized(phi_degree, COR43_SCALE_CAP)?;
                maybe_swapped(Cor43Extremal::new(c, o1, o2, phi)?, swapped)
            }
            Self::Product { a_degree, b_degree } => {
                let a = cur.self_map(a_degree)?;
                let b = cur.self_map(b_degree)?;
                Box::new(ProductDisc::new(a, b)?)
            }
        })
    }

    /// The preimages `(λ1, λ2)` encoded by the trailing parameters.
    pub fn preimages(self, x: &[f64]) -> (C64, C64) {
        let mut cur = Cursor::new(&x[self.disc_len()..]);
        if self.pins_first_preimage() {
            (C64::new(0.0, 0.0), cur.point())
        } else {
            let l1 = cur.point();
            (l1, cur.point())
        }
    }
}

struct Interpolation<'a> {
    family: SearchFamily,
    w: &'a TetraPoint,
    z: &'a TetraPoint,
}

impl Residual for Interpolation<'_> {
    fn len(&self) -> usize {
        12
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        let Ok(disc) = self.family.disc(x) else {
            out.fill(PENALTY);
            return;
        };
        let (l1, l2) = self.family.preimages(x);
        let a = disc.eval(l1);
        let b = disc.eval(l2);
        let targets = self.w.to_array().into_iter().chain(self.z.to_array());
        for (k, (v, t)) in a.iter().chain(b.iter()).zip(targets).enumerate() {
            let d = v - t;
            out[2 * k] = d.re;
            out[2 * k + 1] = d.im;
        }
        if out.iter().any(|v| !v.is_finite()) {
            out.fill(PENALTY);
        }
    }
}

/// Coarse stage of a start: the best of [`SCREEN_DRAWS`] uniform draws.
fn screened_start(r: &impl Residual, n: usize, rng: &mut ChaCha8Rng, budget: &mut EvalBudget) -> Vec<f64> {
    let mut out = vec![0.0; r.len()];
    let mut best = (f64::INFINITY, Vec::new());
    for _ in 0..SCREEN_DRAWS {
        let x: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        r.eval(&x, &mut out);
        let cost: f64 = out.iter().map(|v| v * v).sum();
        if cost < best.0 {
            best = (cost, x);
        }
    }
    budget.charge(SCREEN_DRAWS);
    best.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub families: Vec<SearchFamily>,
    /// Allowance of interpolation-residual evaluations.
    pub budget: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            families: SearchFamily::standard(),
            budget: DEFAULT_SEARCH_BUDGET,
            seed: 0,
        }
    }
}

/// An interpolating disc found by the search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub bound: HyperbolicDistance,
    pub family: SearchFamily,
    pub params: Vec<f64>,
    pub lambda1: C64,
    pub lambda2: C64,
    /// Sum of squared interpolation errors.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SearchOutcome {
    /// `w = z`; the bound is 0 without any disc.
    Coincident,
    Found { hit: SearchHit, evaluations: usize },
    NotFound { evaluations: usize },
}

impl SearchOutcome {
    pub fn bound(&self) -> Option<HyperbolicDistance> {
        match self {
            Self::Coincident => Some(HyperbolicDistance::ZERO),
            Self::Found { hit, .. } => Some(hit.bound),
            Self::NotFound { .. } => None,
        }
    }
}

fn require_interior(what: &str, z: &TetraPoint) -> Result<()> {
    let report = tetra_membership(z, DEFAULT_TOL)?;
    if report.location != Location::Interior {
        return Err(Error::Precondition(format!(
            "{what} must lie in the tetrablock (e = {})",
            report.e_value
        )));
    }
    Ok(())
}

/// Upper bound for the Lempert function between `w` and `z` (Möbius scale):
/// the least `m(λ1, λ2)` over discs of the given families with `f(λ1) = w`
/// and `f(λ2) = z`, found by seeded multistart Levenberg–Marquardt on the
/// interpolation residual followed by descent along the interpolating set.
pub fn disc_search_upper_bound(w: &TetraPoint, z: &TetraPoint, opts: &SearchOptions) -> Result<SearchOutcome> {
    require_interior("w", w)?;
    require_interior("z", z)?;
    if w == z {
        return Ok(SearchOutcome::Coincident);
    }
    if opts.families.is_empty() {
        return Err(Error::InvalidParameter("no disc families to search".into()));
    }
    let mut budget = EvalBudget::new(opts.budget);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    // Hits interpolating to roundoff take precedence: a hit that is only
    // within ACCEPT_RESIDUAL can undercut the true value by trading
    // interpolation error for a shorter disc distance.
    let mut tight: Option<SearchHit> = None;
    let mut loose: Option<SearchHit> = None;
    // Each start goes to the family that has consumed the fewest evaluations
    // so far, so cheap low-dimensional families get proportionally more
    // starts. Ties go to the earlier family.
    let mut spent = vec![0usize; opts.families.len()];
    while !budget.exhausted() {
        let slot = (0..spent.len()).min_by_key(|&k| (spent[k], k)).expect("non-empty family list");
        let family = opts.families[slot];
        let before = budget.used();
        let residual = Interpolation { family, w, z };
        let objective = |x: &[f64]| {
            let (l1, l2) = family.preimages(x);
            mobius_quotient(l1, l2)
        };
        let x0 = screened_start(&residual, family.parameter_len(), &mut rng, &mut budget);
        let mut fitted = levenberg_marquardt(&residual, x0, 1e-24, 10, &mut budget);
        if fitted.cost < PROMISING && fitted.cost >= 1e-24 {
            fitted = levenberg_marquardt(&residual, fitted.x, 1e-24, 100, &mut budget);
        }
        if fitted.cost >= ACCEPT_RESIDUAL {
            spent[slot] += budget.used() - before;
            continue;
        }
        let descended = descend_on_zero_set(&objective, &residual, fitted.x.clone(), DESCENT_FEASIBLE, 60, &mut budget);
        let candidate = if descended.cost < ACCEPT_RESIDUAL && objective(&descended.x) <= objective(&fitted.x) {
            descended
        } else {
            fitted
        };
        let polished = restore_feasibility(&residual, candidate.x, 1e-28, 20, &mut budget);
        spent[slot] += budget.used() - before;
        if polished.cost >= ACCEPT_RESIDUAL {
            continue;
        }
        let m = objective(&polished.x);
        let slot = if polished.cost < TIGHT_RESIDUAL { &mut tight } else { &mut loose };
        if slot.as_ref().is_none_or(|b| m < b.bound.m_scale) {
            let (lambda1, lambda2) = family.preimages(&polished.x);
            *slot = Some(SearchHit {
                bound: HyperbolicDistance::from_m(m),
                family,
                params: polished.x,
                lambda1,
                lambda2,
                residual: polished.cost,
            });
        }
    }
    let evaluations = budget.used();
    Ok(match tight.or(loose) {
        Some(hit) => SearchOutcome::Found { hit, evaluations },
        None => SearchOutcome::NotFound { evaluations },
    })
}
