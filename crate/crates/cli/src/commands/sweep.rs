use std::collections::BTreeMap;
use std::io::Write;

use serde_json::{json, Value};
use tetrablock::domains::TetraPoint;
use tetrablock::extremals::{caratheodory_lower_bound, p_e, ExtremalFamilyId};
use tetrablock::geodesics::{disc_search_upper_bound, lempert_special, OriginGeodesicParams, SearchOptions};
use tetrablock::hyperbolic::BlaschkeMap;
use tetrablock::optimize::AngleSearch;
use tetrablock::C64;

use crate::args::{Format, Quantity, SweepArgs};
use crate::literal::{parse_complex, parse_range};
use crate::report::{raw, sig17, CliError, CliResult, Outcome};

/// Largest gap between the search bound and the closed form still counted
/// as equal.
pub const EQUALITY_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
enum Cell {
    Num(f64),
    Bool(bool),
}

/// One output row; the map keeps columns in alphabetical order.
type Row = BTreeMap<&'static str, Cell>;

fn columns(q: Quantity) -> Vec<&'static str> {
    let mut cols = match q {
        Quantity::PE => vec!["c", "certified_m_scale", "lambda_im", "lambda_re", "p_e_m_scale", "p_e_p_scale"],
        Quantity::CLower => vec![
            "c",
            "c_lower_m_scale",
            "c_lower_p_scale",
            "certified_m_scale",
            "lambda_im",
            "lambda_re",
        ],
        Quantity::KUpper => vec!["equal", "k_upper_m_scale", "lempert_special_m_scale", "w", "z"],
    };
    cols.sort_unstable();
    cols
}

fn range(what: &str, s: &str) -> CliResult<Vec<f64>> {
    parse_range(s).map_err(|e| CliError::Usage(format!("--{what}: {e}")))
}

fn geodesic_rows(args: &SweepArgs) -> CliResult<Vec<Row>> {
    let lambda = parse_complex(&args.lambda).map_err(|e| CliError::Usage(format!("--lambda: {e}")))?;
    let omega1 = parse_complex(&args.omega1).map_err(|e| CliError::Usage(format!("--omega1: {e}")))?;
    let omega2 = parse_complex(&args.omega2).map_err(|e| CliError::Usage(format!("--omega2: {e}")))?;
    let origin = TetraPoint::real(0.0, 0.0, 0.0);
    let mut rows = Vec::new();
    for c in range("C", &args.c)? {
        let phi = BlaschkeMap::constant(C64::new(-c, 0.0))?;
        let z = OriginGeodesicParams::new(c, omega1, omega2, phi)?.eval(lambda);
        let mut row = Row::new();
        row.insert("c", Cell::Num(c));
        row.insert("certified_m_scale", Cell::Num(lambda.norm()));
        row.insert("lambda_re", Cell::Num(lambda.re));
        row.insert("lambda_im", Cell::Num(lambda.im));
        if args.quantity == Quantity::PE {
            let d = p_e(&origin, &z, AngleSearch::EXTREMAL)?;
            row.insert("p_e_m_scale", Cell::Num(d.m_scale));
            row.insert("p_e_p_scale", Cell::Num(d.p_scale));
        } else {
            let families = ExtremalFamilyId::tetrablock_defaults();
            let d = caratheodory_lower_bound(&origin, &z, &families, AngleSearch::EXTREMAL)?.distance;
            row.insert("c_lower_m_scale", Cell::Num(d.m_scale));
            row.insert("c_lower_p_scale", Cell::Num(d.p_scale));
        }
        rows.push(row);
    }
    Ok(rows)
}

fn k_upper_rows(args: &SweepArgs) -> CliResult<Vec<Row>> {
    let mut rows = Vec::new();
    let ws = range("w", &args.w)?;
    for (k, z) in range("z", &args.z)?.into_iter().enumerate() {
        for (j, &w) in ws.iter().enumerate() {
            let a = TetraPoint::real(0.0, 0.0, w);
            let b = TetraPoint::real(0.0, z, w);
            let exact = lempert_special(C64::new(z, 0.0), C64::new(w, 0.0))?;
            let opts = SearchOptions {
                budget: args.budget,
                seed: args.seed.wrapping_add((k * ws.len() + j) as u64),
                ..SearchOptions::default()
            };
            let bound = disc_search_upper_bound(&a, &b, &opts)?.bound();
            let mut row = Row::new();
            row.insert("z", Cell::Num(z));
            row.insert("w", Cell::Num(w));
            row.insert("lempert_special_m_scale", Cell::Num(exact.m_scale));
            row.insert("k_upper_m_scale", Cell::Num(bound.map_or(f64::NAN, |d| d.m_scale)));
            row.insert(
                "equal",
                Cell::Bool(bound.is_some_and(|d| (d.m_scale - exact.m_scale).abs() <= EQUALITY_TOL)),
            );
            rows.push(row);
        }
    }
    Ok(rows)
}

fn render_csv(cols: &[&'static str], rows: &[Row]) -> CliResult<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(cols).map_err(io)?;
    for row in rows {
        let cells: Vec<String> = cols
            .iter()
            .map(|c| match &row[c] {
                Cell::Num(v) => sig17(*v),
                Cell::Bool(b) => b.to_string(),
            })
            .collect();
        w.write_record(&cells).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

fn render_json_lines(rows: &[Row]) -> Vec<u8> {
    let mut out = Vec::new();
    for row in rows {
        let obj: serde_json::Map<String, Value> = row
            .iter()
            .map(|(k, v)| {
                let v = match v {
                    Cell::Num(x) => json!(x),
                    Cell::Bool(b) => json!(b),
                };
                (k.to_string(), v)
            })
            .collect();
        out.extend(serde_json::to_vec(&Value::Object(obj)).expect("serializable"));
        out.push(b'\n');
    }
    out
}

/// Writes the artifact to `--output` (or standard output) and returns the
/// report about it.
pub fn run(args: &SweepArgs) -> CliResult<Outcome> {
    let rows = match args.quantity {
        Quantity::PE | Quantity::CLower => geodesic_rows(args)?,
        Quantity::KUpper => k_upper_rows(args)?,
    };
    let cols = columns(args.quantity);
    let bytes = match args.out {
        Format::Csv => render_csv(&cols, &rows)?,
        Format::Json => render_json_lines(&rows),
    };
    let target = match &args.output {
        Some(path) => {
            std::fs::write(path, &bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Some(path.display().to_string())
        }
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(&bytes).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => None,
            }
        }
    };
    let quantity = match args.quantity {
        Quantity::PE => "p-e",
        Quantity::CLower => "c-lower",
        Quantity::KUpper => "k-upper",
    };
    let text = match &target {
        Some(p) => format!("wrote {} rows to {p}", rows.len()),
        None => String::new(),
    };
    let all_equal = rows.iter().all(|r| r.get("equal").is_none_or(|c| *c == Cell::Bool(true)));
    Ok(Outcome::new(
        "sweep",
        json!({
            "quantity": quantity,
            "C": args.c,
            "lambda": args.lambda,
            "omega1": args.omega1,
            "omega2": args.omega2,
            "z": args.z,
            "w": args.w,
            "budget": args.budget,
            "seed": args.seed,
            "format": format!("{:?}", args.out).to_lowercase(),
        }),
        json!({ "rows": rows.len(), "columns": cols, "output": target, "all_equal": all_equal }),
        json!({ "equality_tolerance": raw(EQUALITY_TOL) }),
        text,
    ))
}
