//! Textual float formats: C99 hex floats, shortest round-trip decimals and
//! truncated significant digits.

use crate::fpbits::mul_pow2;

/// Shortest decimal that parses back to the same `f64`.
pub fn shortest(x: f64) -> String {
    format!("{x:?}")
}

/// Hex-float rendering, e.g. `0x1.8p+1` for 3.0 and `0x0.0000000000001p-1022`
/// for the smallest subnormal.
pub fn format_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    let bits = x.to_bits();
    let field = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if field == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if field == 0 {
        (0, -1022)
    } else {
        (1, field - 1023)
    };
    let digits = format!("{frac:013x}");
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        format!("{sign}0x{lead}p{exp:+}")
    } else {
        format!("{sign}0x{lead}.{digits}p{exp:+}")
    }
}

/// Parse a hex float (`[-]0x<hex>[.<hex>][p<exp>]`) or `inf`/`nan`.
///
/// The result is correctly rounded, subnormals included.
pub fn parse_hex(s: &str) -> Option<f64> {
    let s = s.trim();
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let apply_sign = |v: f64| if negative { -v } else { v };
    match body.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => return Some(apply_sign(f64::INFINITY)),
        "nan" => return Some(f64::NAN),
        _ => {}
    }
    let body = body
        .strip_prefix("0x")
        .or_else(|| body.strip_prefix("0X"))?;
    let (mantissa, exponent) = match body.find(['p', 'P']) {
        Some(at) => (&body[..at], body[at + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(at) => (&mantissa[..at], &mantissa[at + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }

    let mut m: u64 = 0;
    let mut scale = exponent;
    let mut sticky = false;
    for (digit, in_frac) in int_part
        .chars()
        .map(|c| (c, false))
        .chain(frac_part.chars().map(|c| (c, true)))
    {
        let d = digit.to_digit(16)? as u64;
        if m >> 59 == 0 {
            m = m * 16 + d;
            if in_frac {
                scale -= 4;
            }
        } else {
            sticky |= d != 0;
            if !in_frac {
                scale += 4;
            }
        }
    }
    if m == 0 {
        return Some(apply_sign(0.0));
    }
    Some(apply_sign(round_scaled(m, scale, sticky)))
}

/// Correctly rounded `(m + sticky·ε) · 2^scale` as an `f64`.
fn round_scaled(m: u64, scale: i64, sticky: bool) -> f64 {
    let bitlen = 64 - m.leading_zeros() as i64;
    let top = bitlen - 1 + scale;
    if top > 1023 {
        return f64::INFINITY;
    }
    let keep = if top >= -1022 { 53 } else { 53 - (-1022 - top) };
    let drop = bitlen - keep;
    if drop <= 0 {
        return mul_pow2(m as f64, scale);
    }
    let (kept, half, rest) = if drop > 64 {
        (0u64, false, true)
    } else {
        let kept = if drop == 64 { 0 } else { m >> drop };
        let half = (m >> (drop - 1)) & 1 == 1;
        let rest = drop > 1 && m & ((1u64 << (drop - 1)) - 1) != 0;
        (kept, half, rest)
    };
    let rest = rest || sticky;
    let round_up = half && (rest || kept & 1 == 1);
    let kept = kept + round_up as u64;
    mul_pow2(kept as f64, scale + drop)
}

/// Parse either a decimal or a hex float.
pub fn parse_float(s: &str) -> Option<f64> {
    let t = s.trim();
    if t.contains("0x") || t.contains("0X") {
        parse_hex(t)
    } else {
        t.parse().ok()
    }
}

/// The shortest round-trip decimal of `x`, cut (not rounded) after `digits`
/// significant digits. Trailing zeros are dropped.
pub fn truncate_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return shortest(x);
    }
    // Exponent form gives digit string and decimal exponent directly.
    let sci = format!("{:e}", x.abs());
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let mut all: String = mant.chars().filter(|c| *c != '.').collect();
    all.truncate(digits);
    let all = all.trim_end_matches('0');
    let all = if all.is_empty() { "0" } else { all };
    let sign = if x < 0.0 { "-" } else { "" };

    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), all)
    } else if point as usize >= all.len() {
        format!("{}{}", all, "0".repeat(point as usize - all.len()))
    } else {
        let (int, frac) = all.split_at(point as usize);
        format!("{int}.{frac}")
    };
    format!("{sign}{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_examples() {
        assert_eq!(format_hex(3.0), "0x1.8p+1");
        assert_eq!(format_hex(1.0), "0x1p+0");
        assert_eq!(format_hex(-0.0), "-0x0p+0");
        assert_eq!(format_hex(f64::from_bits(1)), "0x0.0000000000001p-1022");
        assert_eq!(format_hex(f64::MAX), "0x1.fffffffffffffp+1023");
        assert_eq!(format_hex(f64::NEG_INFINITY), "-inf");
        assert_eq!(parse_hex("0x1.8p+1"), Some(3.0));
        assert_eq!(parse_hex("-0x10"), Some(-16.0));
        assert_eq!(parse_hex("0x.8"), Some(0.5));
        assert_eq!(parse_hex("0x1p-1074"), Some(f64::from_bits(1)));
        assert_eq!(parse_hex("0x1p-1075"), Some(0.0));
        assert_eq!(parse_hex("0x1.8p-1075"), Some(f64::from_bits(1)));
        assert_eq!(parse_hex("0x1p1024"), Some(f64::INFINITY));
        assert!(parse_hex("0x").is_none());
        assert!(parse_hex("0x1.g").is_none());
    }

    #[test]
    fn hex_rounding_ties_to_even() {
        // 1 + 2^-53 is a tie between 1 and 1 + 2^-52.
        assert_eq!(parse_hex("0x1.00000000000008p+0"), Some(1.0));
        assert_eq!(
            parse_hex("0x1.00000000000018p+0"),
            Some(1.0 + 2.0 * f64::EPSILON)
        );
        assert_eq!(
            parse_hex("0x1.000000000000080001p+0"),
            Some(1.0 + f64::EPSILON)
        );
    }

    #[test]
    fn hex_round_trips() {
        for x in [0.1, -2.5e-310, 1e300, f64::MIN_POSITIVE, 123456.789, 5e-324] {
            assert_eq!(parse_hex(&format_hex(x)).unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn truncation() {
        assert_eq!(truncate_significant(14.392651557922363, 8), "14.392651");
        assert_eq!(
            truncate_significant(1.0000535249710083, 16),
            "1.000053524971008"
        );
        assert_eq!(
            truncate_significant(0.999990701675415, 15),
            "0.999990701675415"
        );
        assert_eq!(truncate_significant(-0.00123456, 3), "-0.00123");
        assert_eq!(truncate_significant(123456.0, 3), "123000");
        assert_eq!(truncate_significant(2.0, 5), "2");
    }
}
