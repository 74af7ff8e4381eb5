//! Parsers for the textual flag formats: complex numbers, ranges and lists.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;

/// Parses `0.1`, `-0.5i`, `i`, `0.5-0.1i`, `1e-3+2e-1i`.
pub fn complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        bail!("empty complex number");
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(t.parse().with_context(|| format!("invalid number `{s}`"))?, 0.0));
    };
    // the imaginary part starts at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse().with_context(|| format!("invalid imaginary part in `{s}`"))?,
    };
    let re = if re.is_empty() { 0.0 } else { re.parse().with_context(|| format!("invalid real part in `{s}`"))? };
    Ok(Complex64::new(re, im))
}

/// `start:stop:step` expanded into an inclusive grid.
pub fn range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("invalid range `{s}`")))
        .collect::<Result<_>>()?;
    let [start, stop, step] = nums[..] else {
        if let [single] = nums[..] {
            return Ok(vec![single]);
        }
        bail!("range `{s}` must be start:stop:step");
    };
    if !(step > 0.0 && stop >= start && start.is_finite() && stop.is_finite()) {
        bail!("range `{s}` needs step > 0 and stop >= start");
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    // snap away the accumulated representation error so `0.1:1:0.1` prints cleanly
    let snap = |v: f64| (v * 1e12).round() / 1e12;
    Ok((0..=count).map(|i| snap(start + i as f64 * step)).collect())
}

/// Comma-separated list whose entries are numbers or `start:stop:step` ranges.
pub fn real_list(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        out.extend(range(item)?);
    }
    if out.is_empty() {
        bail!("empty list `{s}`");
    }
    Ok(out)
}

pub fn complex_list(s: &str) -> Result<Vec<Complex64>> {
    let out: Vec<Complex64> =
        s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(complex).collect::<Result<_>>()?;
    if out.is_empty() {
        bail!("empty list `{s}`");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(complex("0.1").unwrap(), Complex64::new(0.1, 0.0));
        assert_eq!(complex("-0.5i").unwrap(), Complex64::new(0.0, -0.5));
        assert_eq!(complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(complex("0.5-0.1i").unwrap(), Complex64::new(0.5, -0.1));
        assert_eq!(complex("1e-3+2e-1i").unwrap(), Complex64::new(1e-3, 0.2));
        assert_eq!(complex("2-i").unwrap(), Complex64::new(2.0, -1.0));
        assert!(complex("abc").is_err());
        assert!(complex("").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(range("1:3:1").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(range("0.1:30:0.1").unwrap().len(), 300);
        assert_eq!(range("0.1:1:0.1").unwrap()[2], 0.3);
        assert_eq!(range("2.5").unwrap(), vec![2.5]);
        assert!(range("3:1:1").is_err());
        assert!(range("1:2:0").is_err());
        assert_eq!(real_list("1.5,1.25").unwrap(), vec![1.5, 1.25]);
    }
}
