//! C99 `%a`-style hexadecimal floats, for bit-exact text round trips.

/// Formats `x` as `[-]0x1.<hex>p<exp>` (subnormals as `0x0.<hex>p-1022`).
pub fn format(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x == 0.0 {
        return format!("{sign}0x0p+0");
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    let (lead, exp) = if raw_exp == 0 { (0, -1022) } else { (1, raw_exp - 1023) };
    let mut digits = format!("{mant:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    let frac = if digits.is_empty() { String::new() } else { format!(".{digits}") };
    format!("{sign}0x{lead}{frac}p{exp:+}")
}

/// Parses the output of [`format`] (and any `%a` rendering with at most 13
/// fraction digits).
pub fn parse(s: &str) -> Option<f64> {
    let s = s.trim();
    match s {
        "nan" => return Some(f64::NAN),
        "inf" => return Some(f64::INFINITY),
        "-inf" => return Some(f64::NEG_INFINITY),
        _ => {}
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let body = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X"))?;
    let (mantissa, exp) = body.split_once(['p', 'P'])?;
    let exp: i64 = exp.parse().ok()?;
    let (lead, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac.len() > 13 || lead.len() != 1 {
        return None;
    }
    let lead = u64::from_str_radix(lead, 16).ok()?;
    let frac_bits = if frac.is_empty() {
        0
    } else {
        u64::from_str_radix(frac, 16).ok()? << (4 * (13 - frac.len()))
    };
    let value = match lead {
        0 if frac_bits == 0 => 0.0,
        0 if exp == -1022 => f64::from_bits(frac_bits),
        1 if (-1022..=1023).contains(&exp) => f64::from_bits((((exp + 1023) as u64) << 52) | frac_bits),
        _ => return None,
    };
    Some(if negative { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_renderings() {
        assert_eq!(format(1.0), "0x1p+0");
        assert_eq!(format(-0.5), "-0x1p-1");
        assert_eq!(format(10.0), "0x1.4p+3");
        assert_eq!(format(f64::MIN_POSITIVE / 2.0), "0x0.8p-1022");
        assert_eq!(format(0.0), "0x0p+0");
    }

    #[test]
    fn round_trips() {
        for x in [1.0, -0.1, 1e300, 5e-324, f64::MAX, 1024f64.ln(), -0.0, f64::INFINITY] {
            let back = parse(&format(x)).unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x}");
        }
        assert!(parse("0x1.zp+0").is_none());
        assert!(parse("1.5").is_none());
    }
}
