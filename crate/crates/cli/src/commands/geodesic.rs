use serde_json::{json, Value};
use tetrablock::domains::DomainKind;
use tetrablock::extremals::{G2LeftInverse, HolomorphicFunction};
use tetrablock::geodesics::{
    left_inverse_residual, solve_origin_geodesic_through, verify_disc, AnalyticDisc, BoundaryDisc, Cor43Extremal,
    DiscVerdict, FnDisc, G2GeodesicParams, GeneralDiscParams, OriginGeodesic, OriginGeodesicParams, SolveOutcome,
};
use tetrablock::hyperbolic::BlaschkeMap;
use tetrablock::C64;

use crate::args::{DiscArgs, DiscKind, Domain, GeodesicCommand};
use crate::commands::distance::parse_tetra_point;
use crate::literal::parse_complex;
use crate::report::{
    blaschke, complex, complex_text, complexes, raw, sig17, CliError, CliResult, Outcome, EXIT_VERIFICATION,
};

/// A disc assembled from command-line parameters.
struct Built {
    disc: Box<dyn AnalyticDisc>,
    left: Option<Box<dyn HolomorphicFunction>>,
    domain: DomainKind,
    params: Value,
}

fn complex_arg(what: &str, s: &str) -> CliResult<C64> {
    parse_complex(s).map_err(|e| CliError::Usage(format!("--{what}: {e}")))
}

fn swap_disc(disc: Box<dyn AnalyticDisc>) -> Box<dyn AnalyticDisc> {
    Box::new(FnDisc::new(3, move |lambda| {
        let v = disc.eval(lambda);
        vec![v[1], v[0], v[2]]
    }))
}

fn build(d: &DiscArgs) -> CliResult<Built> {
    if d.domain == Domain::G2 {
        let c = d.c.ok_or_else(|| CliError::Usage("--C is required for G2 geodesics".into()))?;
        let omega = complex_arg("omega", &d.omega)?;
        let p = G2GeodesicParams::new(c, omega)?;
        return Ok(Built {
            disc: Box::new(p),
            left: Some(Box::new(G2LeftInverse { omega: p.omega })),
            domain: DomainKind::SymmetrizedBidisc,
            params: json!({ "C": raw(p.c), "omega": complex(p.omega) }),
        });
    }
    let omega1 = complex_arg("omega1", &d.omega1)?;
    let omega2 = complex_arg("omega2", &d.omega2)?;
    let phi = match (&d.phi, d.c) {
        (Some(spec), _) => spec.build()?,
        (None, Some(c)) => BlaschkeMap::constant(C64::new(-c, 0.0))?,
        (None, None) => return Err(CliError::Usage("give --C, --phi or both".into())),
    };
    let c = d.c.unwrap_or_else(|| (-phi.value_at_origin().re).max(0.0));
    let mut params = json!({
        "kind": format!("{:?}", d.kind).to_lowercase(),
        "C": raw(c),
        "omega1": complex(omega1),
        "omega2": complex(omega2),
        "phi": blaschke(&phi),
        "swapped": d.swap,
    });
    let (disc, left): (Box<dyn AnalyticDisc>, Option<Box<dyn HolomorphicFunction>>) = match d.kind {
        DiscKind::Origin => {
            let g = OriginGeodesic {
                params: OriginGeodesicParams::new(c, omega1, omega2, phi)?,
                swapped: d.swap,
            };
            let left = Box::new(g.left_inverse());
            return Ok(Built {
                disc: Box::new(g),
                left: Some(left),
                domain: DomainKind::Tetrablock,
                params,
            });
        }
        DiscKind::General => {
            let psi = d
                .psi
                .as_ref()
                .ok_or_else(|| CliError::Usage("--psi is required for general discs".into()))?
                .build()?;
            params["psi"] = blaschke(&psi);
            (Box::new(GeneralDiscParams::new(c, omega1, omega2, phi, psi)?), None)
        }
        DiscKind::Boundary => (Box::new(BoundaryDisc::new(c, omega1, omega2, phi)?), None),
        DiscKind::Transported => (Box::new(Cor43Extremal::new(c, omega1, omega2, phi)?), None),
    };
    Ok(Built {
        disc: if d.swap { swap_disc(disc) } else { disc },
        left,
        domain: DomainKind::Tetrablock,
        params,
    })
}

fn polar_grid(angles: usize) -> Vec<C64> {
    (1..=9)
        .flat_map(|r| {
            (0..angles).map(move |k| C64::from_polar(r as f64 / 10.0, std::f64::consts::TAU * k as f64 / angles as f64))
        })
        .collect()
}

fn eval(disc: &DiscArgs, lambda: &[String], samples: usize) -> CliResult<Outcome> {
    let built = build(disc)?;
    let points: Vec<C64> = if lambda.is_empty() {
        polar_grid(samples)
    } else {
        lambda.iter().map(|s| complex_arg("lambda", s)).collect::<CliResult<_>>()?
    };
    let mut rows = Vec::with_capacity(points.len());
    let mut text = String::new();
    for &l in &points {
        if l.norm() >= 1.0 {
            return Err(CliError::Invariant(format!("lambda = {l} must lie in the open unit disc")));
        }
        let v = built.disc.eval(l);
        let e = built.domain.defining_value(&v)?;
        text += &format!(
            "{} -> ({})\n",
            complex_text(l),
            v.iter().map(|&c| complex_text(c)).collect::<Vec<_>>().join(", ")
        );
        rows.push(json!({ "lambda": complex(l), "point": complexes(&v), "defining_value": raw(e) }));
    }
    Ok(Outcome::new(
        "geodesic eval",
        json!({ "domain": domain_name(built.domain), "params": built.params, "samples": samples }),
        json!({ "table": rows }),
        json!({}),
        text.trim_end().to_string(),
    ))
}

fn domain_name(d: DomainKind) -> &'static str {
    match d {
        DomainKind::Tetrablock => "tetrablock",
        DomainKind::SymmetrizedBidisc => "g2",
        DomainKind::Polydisc => "polydisc",
    }
}

fn verify(disc: &DiscArgs, tol: f64) -> CliResult<Outcome> {
    let built = build(disc)?;
    let report = verify_disc(built.disc.as_ref(), built.domain, built.left.as_deref(), tol)?;
    let mut text = format!(
        "{:?}: max defining value {} over {} samples",
        report.verdict,
        sig17(report.max_e_value),
        report.samples
    );
    if let Some(r) = report.left_inverse_residual {
        text += &format!(", left-inverse residual {}", sig17(r));
    }
    let outcome = Outcome::new(
        "geodesic verify",
        json!({ "domain": domain_name(built.domain), "params": built.params }),
        json!({
            "verdict": report.verdict,
            "max_defining_value": raw(report.max_e_value),
            "left_inverse_residual": report.left_inverse_residual.map(raw),
            "left_inverse": built.left.as_ref().map(|f| f.label()),
            "samples": report.samples,
        }),
        json!({ "tolerance": raw(tol) }),
        text,
    );
    Ok(match report.verdict {
        DiscVerdict::Failed => outcome.with_exit(EXIT_VERIFICATION),
        _ => outcome,
    })
}

fn solve(point: &str, lambda: &str, max_degree: usize, budget: usize) -> CliResult<Outcome> {
    let z = parse_tetra_point(point)?;
    let l = complex_arg("lambda", lambda)?;
    let inputs = json!({
        "point": complexes(&z.to_array()),
        "lambda": complex(l),
        "max_degree": max_degree,
        "budget": budget,
    });
    match solve_origin_geodesic_through(&z, l, max_degree, budget)? {
        SolveOutcome::Found(s) => {
            let g = &s.geodesic;
            let certificate = left_inverse_residual(g, &g.left_inverse())?;
            let text = format!(
                "found degree {} geodesic{}: C {}  omega1 {}  omega2 {}  residual {}",
                s.degree,
                if g.swapped { " (swapped)" } else { "" },
                sig17(g.params.c),
                complex_text(g.params.omega1),
                complex_text(g.params.omega2),
                sig17(s.residual)
            );
            Ok(Outcome::new(
                "geodesic solve",
                inputs,
                json!({
                    "status": "found",
                    "degree": s.degree,
                    "C": raw(g.params.c),
                    "omega1": complex(g.params.omega1),
                    "omega2": complex(g.params.omega2),
                    "phi": blaschke(&g.params.phi),
                    "swapped": g.swapped,
                    "interpolation_residual": raw(s.residual),
                    "left_inverse_residual": raw(certificate),
                }),
                json!({ "tolerance": raw(tetrablock::geodesics::SOLVE_TOL) }),
                text,
            ))
        }
        SolveOutcome::NotFound { evaluations } => Ok(Outcome::new(
            "geodesic solve",
            inputs,
            json!({ "status": "not_found", "evaluations": evaluations }),
            json!({ "tolerance": raw(tetrablock::geodesics::SOLVE_TOL) }),
            format!("no geodesic found within {evaluations} evaluations"),
        )
        .with_exit(EXIT_VERIFICATION)),
    }
}

pub fn run(cmd: &GeodesicCommand, default_tol: f64) -> CliResult<Outcome> {
    match cmd {
        GeodesicCommand::Eval { disc, lambda, samples } => eval(disc, lambda, *samples),
        GeodesicCommand::Verify { disc, tol } => verify(disc, tol.unwrap_or(default_tol)),
        GeodesicCommand::Solve {
            point,
            lambda,
            max_degree,
            budget,
        } => solve(point, lambda, *max_degree, *budget),
    }
}
