/// 12 significant digits: fixed point for magnitudes from `1e-4` up,
/// scientific below. Zero (either sign) renders as `0.000000000000`.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < 1e-4 {
        return format!("{x:.11e}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let fixed = |m: i32| {
        let decimals = (11 - m).max(0) as usize;
        format!("{x:.decimals$}")
    };
    let s = fixed(magnitude);
    // Rounding can carry into a new leading digit, e.g. 0.99999999999996.
    let rounded: f64 = s.parse().expect("formatted float");
    if rounded.abs() >= 10f64.powi(magnitude + 1) {
        fixed(magnitude + 1)
    } else {
        s
    }
}

/// [`sig12`] of the value, or an empty field.
pub fn opt12(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}
