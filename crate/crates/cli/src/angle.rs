//! Angle arguments: plain radians (`1.5708`) or multiples of pi
//! (`pi`, `pi/2`, `3pi/4`, `2*pi/3`, `-pi/6`).

use std::f64::consts::PI;

pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return finite(v, s);
    }
    let Some(at) = t.find("pi") else {
        return Err(format!("'{s}' is not a number or a multiple of pi"));
    };
    let (coef, rest) = t.split_at(at);
    let rest = &rest[2..];

    let coef = coef.trim().trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c
            .parse::<f64>()
            .map_err(|_| format!("bad coefficient '{c}' in angle '{s}'"))?,
    };
    let rest = rest.trim();
    let den = if rest.is_empty() {
        1.0
    } else {
        let d = rest
            .strip_prefix('/')
            .ok_or_else(|| format!("unexpected '{rest}' in angle '{s}'"))?;
        d.trim()
            .parse::<f64>()
            .map_err(|_| format!("bad denominator '{d}' in angle '{s}'"))?
    };
    if den == 0.0 {
        return Err(format!("zero denominator in angle '{s}'"));
    }
    finite(coef * PI / den, s)
}

fn finite(v: f64, s: &str) -> Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}
