use std::fmt;

use num_integer::Integer;

use super::Cyclotomic;

/// A root of unity exp(2πi·exponent/order), kept in lowest terms so that
/// equal roots compare equal regardless of how they were written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    order: u32,
    exponent: u32,
}

impl RootOfUnity {
    pub fn new(order: u32, exponent: i64) -> Self {
        assert!(order > 0, "root of unity of order 0");
        let e = exponent.rem_euclid(order as i64) as u32;
        let g = e.gcd(&order);
        let (order, exponent) = if e == 0 { (1, 0) } else { (order / g, e / g) };
        RootOfUnity { order, exponent }
    }

    pub fn one() -> Self {
        RootOfUnity {
            order: 1,
            exponent: 0,
        }
    }

    /// Multiplicative order of the root.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    pub fn inverse(&self) -> Self {
        RootOfUnity::new(self.order, -(self.exponent as i64))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order.lcm(&other.order);
        let e = self.exponent as i64 * (n / self.order) as i64
            + other.exponent as i64 * (n / other.order) as i64;
        RootOfUnity::new(n, e)
    }

    /// Exponent of this root as a power of ζ_n; `n` must be a multiple of the order.
    pub fn exponent_in(&self, n: u32) -> u32 {
        assert!(
            n.is_multiple_of(self.order),
            "order {} does not divide {}",
            self.order,
            n
        );
        self.exponent * (n / self.order)
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.order, self.exponent as i64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exponent) {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (n, 1) => write!(f, "E({n})"),
            (n, e) => write!(f, "E({n})^{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        assert_eq!(RootOfUnity::new(12, 3), RootOfUnity::new(4, 1));
        assert_eq!(RootOfUnity::new(6, 6), RootOfUnity::one());
        assert_eq!(RootOfUnity::new(4, -1), RootOfUnity::new(4, 3));
        assert_eq!(RootOfUnity::new(4, 1).inverse(), RootOfUnity::new(4, 3));
        assert_eq!(
            RootOfUnity::new(3, 1).mul(&RootOfUnity::new(6, 1)),
            RootOfUnity::new(2, 1)
        );
        assert_eq!(
            RootOfUnity::new(2, 1).to_cyclotomic(),
            Cyclotomic::from_int(-1)
        );
    }
}
