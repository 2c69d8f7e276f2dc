//! Number formatting shared by the CSV writers.

/// Formats `x` with `digits` significant digits, `%g` style: fixed notation
/// for decimal exponents in `[-5, digits)`, scientific otherwise, trailing
/// zeros trimmed.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig;

    #[test]
    fn g_style() {
        assert_eq!(sig(0.0, 17), "0");
        assert_eq!(sig(1.0, 17), "1");
        assert_eq!(sig(-0.5, 12), "-0.5");
        assert_eq!(sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(sig(1e-7, 12), "1e-7");
        assert_eq!(sig(123456.0, 3), "1.23e5");
        assert_eq!(sig(std::f64::consts::PI, 17), "3.1415926535897931");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for &x in &[0.1, 2.0f64.sqrt(), -1e-300, 6.02214076e23, 1.0 / 7.0] {
            assert_eq!(sig(x, 17).parse::<f64>().unwrap(), x);
        }
    }
}
