use serde_json::json;
use tetrablock::domains::{g2_membership, tetra_membership_full, G2Point, Location, TetraPoint};

use crate::args::{Domain, MemberArgs};
use crate::literal::parse_complex;
use crate::report::{complex, complex_text, complexes, raw, sig17, CliError, CliResult, Outcome};

pub fn exit_code(location: Location) -> i32 {
    match location {
        Location::Interior => 0,
        Location::Boundary => 1,
        Location::Exterior => 2,
    }
}

pub fn run(args: &MemberArgs, default_tol: f64) -> CliResult<Outcome> {
    let z = args
        .components
        .iter()
        .map(|s| parse_complex(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Usage)?;
    let tol = args.tol.unwrap_or(default_tol);
    let (domain, results, location, summary) = match args.domain {
        Domain::Tetrablock => {
            let p = TetraPoint::from_slice(&z).map_err(|e| CliError::Usage(e.to_string()))?;
            let r = tetra_membership_full(&p, tol)?;
            let summary = format!("e_value {}", sig17(r.e_value));
            (
                "tetrablock",
                json!({
                    "location": r.location,
                    "e_value": raw(r.e_value),
                    "psi_sup": r.psi_sup.map(raw),
                }),
                r.location,
                summary,
            )
        }
        Domain::G2 => {
            let p = G2Point::from_slice(&z).map_err(|e| CliError::Usage(e.to_string()))?;
            let r = g2_membership(&p, tol)?;
            let summary = format!(
                "max root modulus {} (roots {}, {})",
                sig17(r.max_root_modulus),
                complex_text(r.roots[0]),
                complex_text(r.roots[1])
            );
            (
                "g2",
                json!({
                    "location": r.location,
                    "max_root_modulus": raw(r.max_root_modulus),
                    "roots": complexes(&r.roots),
                }),
                r.location,
                summary,
            )
        }
    };
    let text = format!("{location:?}: {summary}");
    Ok(Outcome::new(
        "member",
        json!({
            "domain": domain,
            "point": z.iter().map(|&c| complex(c)).collect::<Vec<_>>(),
        }),
        results,
        json!({ "tolerance": raw(tol) }),
        text,
    )
    .with_exit(exit_code(location)))
}
