use num_complex::Complex64;

use crate::error::{Error, Result};

fn parse_err(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        what: "complex number",
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn parse_real(text: &str, input: &str) -> Result<f64> {
    text.parse::<f64>()
        .map_err(|e| parse_err(input, format!("bad real part {text:?}: {e}")))
}

/// Parses `a`, `a+bi`, `a-bi`, `bi` or `a+i`.
///
/// The imaginary part, when present alongside a real part, must carry an
/// explicit sign. Exponents (`1e-3+2e+1i`) are accepted.
pub fn parse_complex(input: &str) -> Result<Complex64> {
    let s = input.trim();
    if s.is_empty() {
        return Err(parse_err(input, "empty literal"));
    }
    let Some(body) = s.strip_suffix('i') else {
        let re = parse_real(s, input)?;
        if !re.is_finite() {
            return Err(parse_err(input, "non-finite component"));
        }
        return Ok(Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_text, im_text) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_text.is_empty() {
        0.0
    } else {
        parse_real(re_text, input)?
    };
    let im = match im_text {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t
            .parse::<f64>()
            .map_err(|e| parse_err(input, format!("bad imaginary part {t:?}: {e}")))?,
    };
    if !(re.is_finite() && im.is_finite()) {
        return Err(parse_err(input, "non-finite component"));
    }
    Ok(Complex64::new(re, im))
}
