use serde_json::{json, Value};
use tetrablock::domains::TetraPoint;
use tetrablock::extremals::{caratheodory_lower_bound, p_e, ExtremalFamilyId, ExtremalFamilyTag};
use tetrablock::geodesics::{disc_search_upper_bound, lempert_special, SearchFamily, SearchOptions, SearchOutcome};
use tetrablock::hyperbolic::{mobius_distance, HyperbolicDistance};
use tetrablock::optimize::AngleSearch;
use tetrablock::C64;

use crate::args::DistanceArgs;
use crate::literal::parse_point;
use crate::report::{complex, complexes, distance, raw, sig17, CliError, CliResult, Outcome, EXIT_VERIFICATION};

/// Slack allowed in `c_lower <= k_upper`; the search bound is exact only up
/// to its interpolation residual.
pub const SANDWICH_SLACK: f64 = 1e-8;

pub fn parse_tetra_point(s: &str) -> CliResult<TetraPoint> {
    let z = parse_point(s).map_err(CliError::Usage)?;
    TetraPoint::from_slice(&z).map_err(|e| CliError::Usage(e.to_string()))
}

fn family_kind(f: &SearchFamily) -> &'static str {
    match f {
        SearchFamily::General { .. } => "general",
        SearchFamily::Origin { .. } => "origin",
        SearchFamily::Cor43 { .. } => "cor43",
        SearchFamily::Product { .. } => "product",
    }
}

pub fn search_families(kinds: &[String]) -> CliResult<Vec<SearchFamily>> {
    let all = SearchFamily::standard();
    for k in kinds {
        if !all.iter().any(|f| family_kind(f) == k.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown disc family {k:?} (expected general, origin, cor43 or product)"
            )));
        }
    }
    Ok(all
        .into_iter()
        .filter(|f| kinds.iter().any(|k| k == family_kind(f)))
        .collect())
}

/// The closed form of the Lempert function when the pair has one of the two
/// shapes where it is known: `(0,0,w)` against `(0,z,w)` or `(z,0,w)`, and
/// pairs of points `(a, b, ab)`.
pub fn closed_form(w: &TetraPoint, z: &TetraPoint) -> CliResult<Option<(&'static str, HyperbolicDistance)>> {
    let zero = C64::new(0.0, 0.0);
    for (a, b) in [(w, z), (z, w)] {
        if a.z1 == zero && a.z2 == zero && a.z3 == b.z3 && (b.z1 == zero || b.z2 == zero) {
            let s = if b.z1 == zero { b.z2 } else { b.z1 };
            return Ok(Some(("special_pair", lempert_special(s, a.z3)?)));
        }
    }
    let product = |p: &TetraPoint| (p.z3 - p.z1 * p.z2).norm() <= 1e-14;
    if product(w) && product(z) {
        let d1 = mobius_distance(w.z1, z.z1)?;
        let d2 = mobius_distance(w.z2, z.z2)?;
        let d = if d1.m_scale >= d2.m_scale { d1 } else { d2 };
        return Ok(Some(("product", d)));
    }
    Ok(None)
}

pub fn run(args: &DistanceArgs) -> CliResult<Outcome> {
    let w = parse_tetra_point(&args.w)?;
    let z = parse_tetra_point(&args.z)?;
    let lower: Vec<ExtremalFamilyId> = args
        .lower_families
        .iter()
        .map(|s| s.parse::<ExtremalFamilyTag>().map(ExtremalFamilyId::all_over))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let opts = SearchOptions {
        families: search_families(&args.upper_families)?,
        budget: args.budget,
        seed: args.seed,
    };

    let pe = p_e(&w, &z, AngleSearch::EXTREMAL)?;
    let lower_bound = caratheodory_lower_bound(&w, &z, &lower, AngleSearch::EXTREMAL)?;
    let search = disc_search_upper_bound(&w, &z, &opts)?;
    let closed = closed_form(&w, &z)?;

    let upper = search.bound();
    let c_lower = lower_bound.distance;
    let holds = upper.is_none_or(|u| c_lower.m_scale <= u.m_scale + SANDWICH_SLACK && pe.m_scale <= u.m_scale + SANDWICH_SLACK);

    let k_upper = match &search {
        SearchOutcome::Coincident => json!({ "status": "coincident", "m_scale": 0.0, "p_scale": 0.0 }),
        SearchOutcome::Found { hit, evaluations } => {
            let mut v = distance(hit.bound);
            let obj = v.as_object_mut().expect("object");
            obj.insert("status".into(), json!("found"));
            obj.insert("family".into(), serde_json::to_value(hit.family).expect("serializable"));
            obj.insert("lambda1".into(), complex(hit.lambda1));
            obj.insert("lambda2".into(), complex(hit.lambda2));
            obj.insert("interpolation_residual".into(), raw(hit.residual));
            obj.insert("evaluations".into(), json!(evaluations));
            v
        }
        SearchOutcome::NotFound { evaluations } => json!({ "status": "not_found", "evaluations": evaluations }),
    };
    let mut c_lower_json = distance(c_lower);
    {
        let obj = c_lower_json.as_object_mut().expect("object");
        obj.insert("family".into(), json!(lower_bound.family));
        obj.insert("omega".into(), lower_bound.omega.map(complex).unwrap_or(Value::Null));
    }
    let closed_json = closed.map(|(kind, d)| {
        let mut v = distance(d);
        v.as_object_mut().expect("object").insert("kind".into(), json!(kind));
        v
    });

    let mut text = format!(
        "p_e      m {}  p {}\nc_lower  m {}  p {}  ({})\n",
        sig17(pe.m_scale),
        sig17(pe.p_scale),
        sig17(c_lower.m_scale),
        sig17(c_lower.p_scale),
        lower_bound.family
    );
    match upper {
        Some(u) => text += &format!("k_upper  m {}  p {}\n", sig17(u.m_scale), sig17(u.p_scale)),
        None => text += "k_upper  not found within budget\n",
    }
    if let Some((kind, d)) = closed {
        text += &format!("closed   m {}  p {}  ({kind})\n", sig17(d.m_scale), sig17(d.p_scale));
    }
    if !holds {
        text += "SANDWICH VIOLATED: lower bound exceeds upper bound\n";
    }

    let outcome = Outcome::new(
        "distance",
        json!({
            "w": complexes(&w.to_array()),
            "z": complexes(&z.to_array()),
            "lower_families": lower.iter().map(|f| f.tag.name()).collect::<Vec<_>>(),
            "upper_families": args.upper_families,
            "budget": args.budget,
            "seed": args.seed,
        }),
        json!({
            "p_e": distance(pe),
            "c_lower": c_lower_json,
            "k_upper": k_upper,
            "closed_form": closed_json,
            "sandwich_holds": holds,
        }),
        json!({
            "sandwich_slack": raw(SANDWICH_SLACK),
            "angle_grid": AngleSearch::EXTREMAL.grid,
            "angle_refine_steps": AngleSearch::EXTREMAL.refine_steps,
        }),
        text.trim_end().to_string(),
    );
    Ok(if holds { outcome } else { outcome.with_exit(EXIT_VERIFICATION) })
}
