use num_complex::Complex64;

/// Parses `RE`, `IMi`, `RE+IMi` or `RE-IMi`, each number optionally in exponent notation.
/// A bare `i` coefficient means 1.
pub fn parse_complex(input: &str) -> Result<Complex64, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let number = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| format!("invalid complex literal '{input}'"))
    };
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(number(&s)?, 0.0));
    };
    let coefficient = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => number(t),
    };
    // the sign separating the parts is the last one that does not start an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(
            number(&body[..k])?,
            coefficient(&body[k..])?,
        )),
        None => Ok(Complex64::new(0.0, coefficient(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_complex("0.05").unwrap(), Complex64::new(0.05, 0.0));
        assert_eq!(
            parse_complex("0.03+0.04i").unwrap(),
            Complex64::new(0.03, 0.04)
        );
        assert_eq!(parse_complex("-1-2i").unwrap(), Complex64::new(-1.0, -2.0));
        assert_eq!(parse_complex("0.09i").unwrap(), Complex64::new(0.0, 0.09));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(
            parse_complex("1e-3+2.5E+2i").unwrap(),
            Complex64::new(1e-3, 250.0)
        );
        assert_eq!(
            parse_complex("-1e-3-1e-2i").unwrap(),
            Complex64::new(-1e-3, -1e-2)
        );
        assert_eq!(parse_complex("2+i").unwrap(), Complex64::new(2.0, 1.0));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), Complex64::new(1.0, 2.0));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1+2", "1+xi", "i+1"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }
}
