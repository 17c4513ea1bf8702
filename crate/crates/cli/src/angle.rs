//! Angle arguments: plain radians or multiples of π such as `pi`, `pi/6`,
//! `3pi/4`, `3*pi/4`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI};

/// π/d correctly rounded for the common divisors; fl(π)/6 and fl(π)/3 are
/// one ulp away from it.
fn pi_over(d: f64) -> f64 {
    match d {
        2.0 => FRAC_PI_2,
        3.0 => FRAC_PI_3,
        4.0 => FRAC_PI_4,
        6.0 => FRAC_PI_6,
        8.0 => FRAC_PI_8,
        _ => PI / d,
    }
}

pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = s.to_ascii_lowercase();
    let Some(at) = lower.find("pi") else {
        return s.parse::<f64>().map_err(|_| format!("cannot read {text:?} as an angle"));
    };
    let head = lower[..at].trim_end_matches('*');
    let tail = &lower[at + 2..];
    let factor = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| format!("bad multiplier in {text:?}"))?,
    };
    let value = if tail.is_empty() {
        factor * PI
    } else if let Some(d) = tail.strip_prefix('/') {
        let d: f64 = d.parse().map_err(|_| format!("bad divisor in {text:?}"))?;
        if d == 0.0 {
            return Err(format!("zero divisor in {text:?}"));
        }
        factor * pi_over(d)
    } else {
        return Err(format!("cannot read {text:?} as an angle"));
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_of_pi() {
        assert_eq!(parse_angle("pi/6").unwrap(), FRAC_PI_6);
        assert_eq!(parse_angle("PI/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_angle("pi/2").unwrap(), FRAC_PI_2);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("-pi/3").unwrap(), -FRAC_PI_3);
        assert_eq!(parse_angle("pi/8").unwrap(), FRAC_PI_8);
        assert_eq!(parse_angle("pi/5").unwrap(), PI / 5.0);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn plain_numbers() {
        assert_eq!(parse_angle("0.5236").unwrap(), 0.5236);
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert_eq!(parse_angle("1e-3").unwrap(), 1e-3);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "tau", "pi/", "pi/0", "pix", "2x*pi", "pi*2"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }
}
