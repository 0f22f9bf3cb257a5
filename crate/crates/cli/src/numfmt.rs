//! Command-line complex numbers: parsing `a+bi` / `a,b`, and `%.15g`-style
//! echo.

use num_complex::Complex64;

/// Formats like C's `%.15g`.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..15).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Canonical `a+bi` echo.
pub fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", fmt_g(z.re), fmt_g(z.im.abs()))
}

fn number(s: &str, full: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("cannot parse complex number \"{full}\""))
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi` and `a,b`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    if let Some((re, im)) = s.split_once(',') {
        return Ok(Complex64::new(number(re, text)?, number(im, text)?));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(number(&s, text)?, 0.0));
    };
    // the sign that separates real and imaginary parts is the last one not
    // belonging to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (number(&body[..i], text)?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => number(other, text)?,
    };
    Ok(Complex64::new(re, im))
}

/// Comma-separated reals.
pub fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',').map(|s| number(s, text)).collect()
}
