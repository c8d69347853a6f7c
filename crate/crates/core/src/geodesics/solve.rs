use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::discs::{rotated_phi, OriginGeodesic, OriginGeodesicParams};
use crate::domains::{tetra_membership, Location, TetraPoint, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::hyperbolic::{check_open, BlaschkeMap};
use crate::optimize::{descend_on_zero_set, levenberg_marquardt, restore_feasibility, EvalBudget, Residual};
use crate::{unimodular, C64};

/// Largest `|f(λ0) - z|` accepted as a hit.
pub const SOLVE_TOL: f64 = 1e-8;
pub const DEFAULT_SOLVE_BUDGET: usize = 40_000;

const STARTS_PER_VARIANT: usize = 6;

fn decode(x: &[f64], degree: usize, swapped: bool) -> Result<OriginGeodesic> {
    let point = |k: usize| {
        let v = C64::new(x[k], x[k + 1]);
        v / (1.0 + v.norm_sqr()).sqrt()
    };
    let (o1, o2) = (unimodular(x[0]), unimodular(x[1]));
    let s = x[2].sin().powi(2);
    let (phi, c, o1) = if degree == 0 {
        (BlaschkeMap::constant(C64::new(-s, 0.0))?, s, o1)
    } else {
        rotated_phi(o1, (0..degree).map(|k| point(3 + 2 * k)).collect(), s)?
    };
    Ok(OriginGeodesic {
        params: OriginGeodesicParams::new(c, o1, o2, phi)?,
        swapped,
    })
}

struct PointResidual<'a> {
    z: &'a TetraPoint,
    lambda0: C64,
    degree: usize,
    swapped: bool,
}

impl Residual for PointResidual<'_> {
    fn len(&self) -> usize {
        6
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        let Ok(disc) = decode(x, self.degree, self.swapped) else {
            out.fill(1e3);
            return;
        };
        let v = disc.point(self.lambda0);
        for (k, (a, b)) in v.to_array().into_iter().zip(self.z.to_array()).enumerate() {
            out[2 * k] = (a - b).re;
            out[2 * k + 1] = (a - b).im;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSolution {
    pub geodesic: OriginGeodesic,
    pub degree: usize,
    /// `|f(λ0) - z|`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SolveOutcome {
    Found(GeodesicSolution),
    /// The budget ran out first; this says nothing about existence.
    NotFound { evaluations: usize },
}

/// Finds an origin geodesic `f` (possibly followed by the swap of the first
/// two coordinates) with `f(λ0) = z`, trying Blaschke degrees
/// `0..=max_degree` of `φ` in order and, within the first degree that works,
/// preferring the smallest `C`.
pub fn solve_origin_geodesic_through(
    z: &TetraPoint,
    lambda0: C64,
    max_degree: usize,
    budget: usize,
) -> Result<SolveOutcome> {
    let report = tetra_membership(z, DEFAULT_TOL)?;
    if report.location != Location::Interior {
        return Err(Error::Precondition(format!(
            "z must lie in the tetrablock (e = {})",
            report.e_value
        )));
    }
    check_open("lambda0", lambda0)?;
    let mut budget = EvalBudget::new(budget);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for degree in 0..=max_degree {
        let n = 3 + 2 * degree;
        let mut best: Option<(f64, GeodesicSolution)> = None;
        for swapped in [false, true] {
            let residual = PointResidual {
                z,
                lambda0,
                degree,
                swapped,
            };
            for _ in 0..STARTS_PER_VARIANT {
                if budget.exhausted() {
                    break;
                }
                let x0: Vec<f64> = (0..n)
                    .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                    .collect();
                let fitted = levenberg_marquardt(&residual, x0, 1e-26, 100, &mut budget);
                if fitted.cost.sqrt() >= SOLVE_TOL {
                    continue;
                }
                let c_of = |x: &[f64]| decode(x, degree, swapped).map(|g| g.params.c).unwrap_or(f64::INFINITY);
                let lowered = descend_on_zero_set(&c_of, &residual, fitted.x.clone(), 1e-24, 60, &mut budget);
                let x = if lowered.cost.sqrt() < SOLVE_TOL && c_of(&lowered.x) <= c_of(&fitted.x) {
                    lowered.x
                } else {
                    fitted.x
                };
                let polished = restore_feasibility(&residual, x, 1e-30, 10, &mut budget);
                let r = polished.cost.sqrt();
                if r >= SOLVE_TOL {
                    continue;
                }
                let geodesic = decode(&polished.x, degree, swapped)?;
                let c = geodesic.params.c;
                if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
                    best = Some((
                        c,
                        GeodesicSolution {
                            geodesic,
                            degree,
                            residual: r,
                        },
                    ));
                }
            }
        }
        if let Some((_, solution)) = best {
            return Ok(SolveOutcome::Found(solution));
        }
    }
    Ok(SolveOutcome::NotFound {
        evaluations: budget.used(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::{left_inverse_residual, normalized_phi, standard_samples};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn found(out: SolveOutcome) -> GeodesicSolution {
        match out {
            SolveOutcome::Found(s) => s,
            other => panic!("not found: {other:?}"),
        }
    }

    #[test]
    fn product_point_recovers_diagonal_geodesic() {
        let z = TetraPoint::real(0.5, 0.5, 0.25);
        let s = found(solve_origin_geodesic_through(&z, c(0.5, 0.0), 2, DEFAULT_SOLVE_BUDGET).unwrap());
        assert_eq!(s.degree, 1);
        assert!(s.params_c() < 1e-6, "C = {}", s.params_c());
        for lambda in standard_samples() {
            let v = s.geodesic.point(lambda);
            assert!(v.max_abs_diff(TetraPoint::new(lambda, lambda, lambda * lambda)) < 1e-5);
        }
    }

    #[test]
    fn round_trip_through_known_geodesic() {
        let (phi, big_c) = normalized_phi(vec![c(-0.3, 0.5)], 0.7).unwrap();
        let params = OriginGeodesicParams::new(big_c, unimodular(1.2), unimodular(0.3), phi).unwrap();
        let lambda0 = c(0.2, 0.35);
        let z = params.eval(lambda0);
        let s = found(solve_origin_geodesic_through(&z, lambda0, 1, DEFAULT_SOLVE_BUDGET).unwrap());
        assert!(s.geodesic.point(lambda0).max_abs_diff(z) < 1e-9);
        assert!(left_inverse_residual(&s.geodesic, &s.geodesic.left_inverse()).unwrap() < 1e-10);
    }

    #[test]
    fn exterior_point_is_rejected() {
        let z = TetraPoint::real(0.9, 0.9, 0.0);
        assert!(matches!(
            solve_origin_geodesic_through(&z, c(0.5, 0.0), 1, 1000),
            Err(Error::Precondition(_))
        ));
    }

    impl GeodesicSolution {
        fn params_c(&self) -> f64 {
            self.geodesic.params.c
        }
    }
}
