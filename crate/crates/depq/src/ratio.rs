//! Exact rational values and their fixed-point decimal rendering.
//!
//! Dependency scores are classified by exact comparison against 0 and 1,
//! so they are kept as integer fractions end to end. Decimal strings only
//! appear at the reporting boundary, always six places, rounded half to
//! even, which keeps report files diff-stable across runs and platforms.

use num_rational::Ratio;

/// Exact fraction used for scores, epsilons and percentages.
pub type Rat = Ratio<i64>;

/// Builds a reduced fraction from raw counts.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(numer, denom)
}

/// Renders `r` as a decimal with `places` fractional digits, rounding
/// half to even. `r` must be non-negative.
pub fn decimal(r: Rat, places: u32) -> String {
    let numer = *r.numer();
    let denom = *r.denom();
    assert!(numer >= 0 && denom > 0, "decimal() expects a non-negative value");

    let scale = 10u128.pow(places);
    let n = numer as u128 * scale;
    let d = denom as u128;
    let mut scaled = n / d;
    let rem = n % d;
    // Round half to even on the discarded remainder.
    match (2 * rem).cmp(&d) {
        std::cmp::Ordering::Greater => scaled += 1,
        std::cmp::Ordering::Equal => {
            if scaled % 2 == 1 {
                scaled += 1;
            }
        }
        std::cmp::Ordering::Less => {}
    }

    let int_part = scaled / scale;
    let frac_part = scaled % scale;
    if places == 0 {
        format!("{int_part}")
    } else {
        format!("{int_part}.{frac_part:0width$}", width = places as usize)
    }
}

/// Six-place rendering used throughout reports.
pub fn decimal6(r: Rat) -> String {
    decimal(r, 6)
}

/// Parses a plain decimal literal (`"0.05"`, `"1"`, `".5"`) into an exact
/// fraction. Signs, exponents and other float syntax are rejected so the
/// parsed value is exactly the digits written.
pub fn parse_decimal(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (int_str, frac_str) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_str.is_empty() && frac_str.is_empty() {
        return None;
    }
    if !int_str.chars().all(|c| c.is_ascii_digit()) || !frac_str.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let int_part: i64 = if int_str.is_empty() {
        0
    } else {
        int_str.parse().ok()?
    };
    if frac_str.len() > 12 {
        return None;
    }
    let scale = 10i64.pow(frac_str.len() as u32);
    let frac_part: i64 = if frac_str.is_empty() {
        0
    } else {
        frac_str.parse().ok()?
    };
    Some(rat(int_part.checked_mul(scale)?.checked_add(frac_part)?, scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_six_places() {
        assert_eq!(decimal6(rat(1, 2)), "0.500000");
        assert_eq!(decimal6(rat(7, 8)), "0.875000");
        assert_eq!(decimal6(rat(3, 4)), "0.750000");
        assert_eq!(decimal6(rat(0, 1)), "0.000000");
        assert_eq!(decimal6(rat(1, 1)), "1.000000");
    }

    #[test]
    fn rounds_half_to_even() {
        // 0.0000005 is a tie at six places: 0 is even, stays down.
        assert_eq!(decimal(rat(1, 2_000_000), 6), "0.000000");
        // 0.0000015 ties up to the even digit 2.
        assert_eq!(decimal(rat(3, 2_000_000), 6), "0.000002");
        // Non-tie cases round normally.
        assert_eq!(decimal(rat(1, 3), 6), "0.333333");
        assert_eq!(decimal(rat(2, 3), 6), "0.666667");
    }

    #[test]
    fn percent_style_one_place() {
        assert_eq!(decimal(rat(100, 1), 1), "100.0");
        assert_eq!(decimal(rat(1, 3) * rat(100, 1), 1), "33.3");
        // 0.25% ties to even at one place: 0.2.
        assert_eq!(decimal(rat(1, 400) * rat(100, 1), 1), "0.2");
        // 0.35% ties to even at one place: 0.4.
        assert_eq!(decimal(rat(35, 100), 1), "0.4");
    }

    #[test]
    fn parses_decimal_literals() {
        assert_eq!(parse_decimal("0.05"), Some(rat(1, 20)));
        assert_eq!(parse_decimal("1"), Some(rat(1, 1)));
        assert_eq!(parse_decimal(".5"), Some(rat(1, 2)));
        assert_eq!(parse_decimal("0.875"), Some(rat(7, 8)));
        assert_eq!(parse_decimal(""), None);
        assert_eq!(parse_decimal("-0.1"), None);
        assert_eq!(parse_decimal("1e-3"), None);
        assert_eq!(parse_decimal("."), None);
    }
}
