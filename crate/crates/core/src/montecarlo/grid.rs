use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{config, Error, Result};

/// Growth exponent `eps = num/den` in `(0, 1)`, kept as written (not reduced)
/// so output reproduces the grid the user asked for.
#[derive(Debug, Clone, Copy, Eq)]
pub struct Epsilon {
    num: u32,
    den: u32,
}

impl Epsilon {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(config(format!(
                "epsilon {num}/{den} must lie strictly in (0, 1)"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Epsilon {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Ord for Epsilon {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u64 * other.den as u64).cmp(&(other.num as u64 * self.den as u64))
    }
}

impl PartialOrd for Epsilon {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || config(format!("cannot parse epsilon '{s}' (expected num/den)"));
        let (a, b) = s.trim().split_once('/').ok_or_else(bad)?;
        let num = a.trim().parse().map_err(|_| bad())?;
        let den = b.trim().parse().map_err(|_| bad())?;
        Self::new(num, den)
    }
}

/// `floor(n^eps)` in exact integer arithmetic: the largest `p` with
/// `p^den <= n^num`.
pub fn dimension_for(n: u64, eps: Epsilon) -> u64 {
    if n <= 1 {
        return n;
    }
    let target = BigUint::from(n).pow(eps.num);
    let fits = |p: u64| BigUint::from(p).pow(eps.den) <= target;
    let mut p = (n as f64)
        .powf(eps.value())
        .floor()
        .to_u64()
        .unwrap_or(1)
        .max(1);
    while !fits(p) {
        p -= 1;
    }
    while fits(p + 1) {
        p += 1;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: u32, d: u32) -> Epsilon {
        Epsilon::new(n, d).unwrap()
    }

    #[test]
    fn grid_dimensions_at_500() {
        let got: Vec<u64> = [8, 10, 12, 14, 16, 20]
            .iter()
            .map(|&k| dimension_for(500, e(k, 24)))
            .collect();
        assert_eq!(got, vec![7, 13, 22, 37, 62, 177]);
        assert_eq!(dimension_for(500, e(17, 24)), 81);
    }

    #[test]
    fn exact_at_perfect_powers() {
        // 1000^(2/3) = 100 exactly; float pow can land just below.
        assert_eq!(dimension_for(1000, e(2, 3)), 100);
        assert_eq!(dimension_for(1024, e(1, 2)), 32);
        assert_eq!(dimension_for(1023, e(1, 2)), 31);
        assert_eq!(dimension_for(10_000, e(12, 24)), 100);
    }

    #[test]
    fn ordering_is_by_value() {
        assert_eq!(e(8, 24), e(1, 3));
        assert!(e(10, 24) < e(1, 2));
        assert_eq!(e(8, 24).to_string(), "8/24");
    }

    #[test]
    fn parsing() {
        assert_eq!("10/24".parse::<Epsilon>().unwrap(), e(10, 24));
        assert!("24/24".parse::<Epsilon>().is_err());
        assert!("0.5".parse::<Epsilon>().is_err());
        assert!("1/0".parse::<Epsilon>().is_err());
    }
}
