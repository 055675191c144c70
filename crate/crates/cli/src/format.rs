use std::fmt::Write;

use relengine_core::Counters;

/// `x` with 10 significant digits, fixed notation.
pub fn significant(x: f64) -> String {
    const DIGITS: i32 = 10;
    if x == 0.0 || !x.is_finite() {
        return format!("{:.*}", (DIGITS - 1) as usize, x);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (DIGITS - 1 - magnitude).max(0) as usize;
    let text = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (0.99999999996 -> 1.0000000000).
    let carried = text.trim_start_matches(['-', '0', '.']).replace('.', "").len() > DIGITS as usize;
    if carried && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        text
    }
}

pub fn counters(c: &Counters) -> String {
    let mut out = String::new();
    writeln!(out, "connectivity checks: {}", c.connectivity_checks).unwrap();
    writeln!(out, "accepted: {}", c.accepted).unwrap();
    if !c.stms_per_stage.is_empty() {
        let counts: Vec<String> = c.stms_per_stage.iter().map(usize::to_string).collect();
        writeln!(
            out,
            "aggregated matrices: {} (total {})",
            counts.join(", "),
            c.total_stms()
        )
        .unwrap();
        writeln!(out, "convolution products: {}", c.convolution_products).unwrap();
    }
    writeln!(out, "multiplications: {}", c.multiplications).unwrap();
    writeln!(out, "summations: {}", c.summations).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(significant(0.7), "0.7000000000");
        assert_eq!(significant(0.97818030000001), "0.9781803000");
        assert_eq!(significant(1.0), "1.000000000");
        assert_eq!(significant(0.000123), "0.0001230000000");
        assert_eq!(significant(0.0), "0.000000000");
        assert_eq!(significant(0.99999999996), "1.000000000");
    }
}
