//! Exact rational arithmetic for costs, coverage fractions, and optimum
//! comparisons. All optimum-equality checks in this workspace compare
//! rationals, never floats.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Q = Ratio<i128>;

pub fn q(num: i128, den: i128) -> Q {
    Ratio::new(num, den)
}

pub fn q_int(n: i128) -> Q {
    Ratio::from_integer(n)
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

pub fn q_to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Parses `n` or `n/d` with an optional leading minus on the numerator.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: i128 = num
        .trim()
        .parse()
        .map_err(|_| format!("bad rational numerator {num:?}"))?;
    let d: i128 = den
        .trim()
        .parse()
        .map_err(|_| format!("bad rational denominator {den:?}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Ratio::new(n, d))
}

/// Canonical `n/d` form with the denominator always written.
pub fn format_q(x: Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        assert_eq!(parse_q("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_q("6/8").unwrap(), q(3, 4));
        assert_eq!(parse_q("5").unwrap(), q_int(5));
        assert_eq!(format_q(q(6, 8)), "3/4");
        assert_eq!(format_q(q_int(2)), "2/1");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }
}
