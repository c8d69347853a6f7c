//! Parsers for the literal syntax accepted on the command line.

use num_complex::Complex64 as C64;
use tetrablock::geodesics::normalized_phi;
use tetrablock::hyperbolic::BlaschkeMap;

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i` and `-i` (a trailing `j` is also
/// accepted). Components are ordinary decimal floats, exponents included.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let bad = |part: &str| format!("malformed complex literal {s:?} (at {part:?})");
    let number = |part: &str| -> Result<f64, String> {
        let v: f64 = part.parse().map_err(|_| bad(part))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad(part))
        }
    };
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(C64::new(number(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => number(x)?,
    };
    let re = if re.is_empty() { 0.0 } else { number(re)? };
    Ok(C64::new(re, im))
}

/// Comma-separated complex components, e.g. `0,0.05,-0.5`.
pub fn parse_point(s: &str) -> Result<Vec<C64>, String> {
    s.split(',').map(parse_complex).collect()
}

/// Either a single value `v` or an inclusive range `start:stop:step`. A range
/// with `stop < start` is empty. Values are rounded to 12 decimals so that
/// `0.05:0.95:0.05` yields `0.15` rather than `0.15000000000000002`.
pub fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| -> Result<f64, String> {
        p.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("malformed number {p:?} in range {s:?}"))
    };
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step <= 0.0 {
                return Err(format!("range step must be positive in {s:?}"));
            }
            if stop < start {
                return Ok(Vec::new());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..n)
                .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
                .collect())
        }
        _ => Err(format!("expected 'v' or 'start:stop:step', got {s:?}")),
    }
}

/// A self-map of the disc:
///
/// * `id`: the identity;
/// * `const:<c>`: the constant `c`;
/// * `zeros:<a1>,<a2>,…[@<scale>]`: the Blaschke product with these zeros and
///   scale (default 1), rotated so that its value at 0 is real and `<= 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum SelfMapSpec {
    Identity,
    Constant(C64),
    Zeros { zeros: Vec<C64>, scale: f64 },
}

impl std::str::FromStr for SelfMapSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "id" {
            return Ok(Self::Identity);
        }
        if let Some(c) = s.strip_prefix("const:") {
            return Ok(Self::Constant(parse_complex(c)?));
        }
        if let Some(rest) = s.strip_prefix("zeros:") {
            let (list, scale) = match rest.split_once('@') {
                Some((list, scale)) => (
                    list,
                    scale
                        .parse::<f64>()
                        .map_err(|_| format!("malformed scale {scale:?}"))?,
                ),
                None => (rest, 1.0),
            };
            return Ok(Self::Zeros {
                zeros: parse_point(list)?,
                scale,
            });
        }
        Err(format!("expected 'id', 'const:<c>' or 'zeros:<a1>,…[@scale]', got {s:?}"))
    }
}

impl SelfMapSpec {
    pub fn build(&self) -> tetrablock::Result<BlaschkeMap> {
        match self {
            Self::Identity => Ok(BlaschkeMap::identity()),
            Self::Constant(c) => BlaschkeMap::constant(*c),
            Self::Zeros { zeros, scale } => Ok(normalized_phi(zeros.clone(), *scale)?.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let cases = [
            ("0.3", C64::new(0.3, 0.0)),
            ("-0.8", C64::new(-0.8, 0.0)),
            ("0.5+0.25i", C64::new(0.5, 0.25)),
            ("0.5-0.25i", C64::new(0.5, -0.25)),
            ("-2i", C64::new(0.0, -2.0)),
            ("i", C64::new(0.0, 1.0)),
            ("-i", C64::new(0.0, -1.0)),
            ("1e-3+2E-4i", C64::new(1e-3, 2e-4)),
            ("1e-3i", C64::new(0.0, 1e-3)),
            ("3-i", C64::new(3.0, -1.0)),
        ];
        for (s, want) in cases {
            assert_eq!(parse_complex(s).unwrap(), want, "{s}");
        }
        for s in ["", "abc", "1+", "nan", "inf", "1++2i", "0.5i+1"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0.05:0.95:0.05").unwrap().len(), 19);
        assert_eq!(parse_range("0.05:0.95:0.05").unwrap()[2], 0.15);
        assert_eq!(parse_range("0.5").unwrap(), vec![0.5]);
        assert!(parse_range("1:0:0.1").unwrap().is_empty());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("0:1").is_err());
    }

    #[test]
    fn self_maps() {
        assert_eq!("id".parse::<SelfMapSpec>().unwrap(), SelfMapSpec::Identity);
        let z: SelfMapSpec = "zeros:0.3,0.1+0.2i@0.8".parse().unwrap();
        let phi = z.build().unwrap();
        assert_eq!(phi.degree(), 2);
        assert!(phi.value_at_origin().im.abs() < 1e-15);
        assert!(phi.value_at_origin().re <= 0.0);
        assert!("bogus".parse::<SelfMapSpec>().is_err());
    }
}
