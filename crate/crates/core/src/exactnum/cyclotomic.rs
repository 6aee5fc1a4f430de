use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::Complex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{self, Poly};
use super::{ExactError, Rational};

pub fn euler_phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// Reduction data for Q(ζ_N): Φ_N and every power ζ^k (0 ≤ k < N) written in
/// the power basis 1, ζ, …, ζ^{φ(N)−1}.
struct Table {
    phi: usize,
    cyclo: Vec<BigInt>,
    powers: Vec<Vec<BigInt>>,
}

fn tables() -> &'static RwLock<HashMap<u32, Arc<Table>>> {
    static TABLES: OnceLock<RwLock<HashMap<u32, Arc<Table>>>> = OnceLock::new();
    TABLES.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Integer coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    table(n).cyclo.clone()
}

/// `φ(n)` and ζ_n^k for `0 ≤ k < n` in the power basis.
pub(crate) fn power_table(n: u32) -> (usize, Vec<Vec<BigInt>>) {
    let t = table(n);
    (t.phi, t.powers.clone())
}

fn table(n: u32) -> Arc<Table> {
    assert!(n > 0, "cyclotomic order must be positive");
    if let Some(t) = tables().read().expect("table lock poisoned").get(&n) {
        return t.clone();
    }
    let t = Arc::new(build_table(n));
    tables()
        .write()
        .expect("table lock poisoned")
        .entry(n)
        .or_insert(t)
        .clone()
}

fn build_table(n: u32) -> Table {
    // Φ_n = (x^n − 1) / Π_{d | n, d < n} Φ_d
    let mut num: Poly = vec![Rational::zero(); n as usize + 1];
    num[0] = -Rational::one();
    num[n as usize] = Rational::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div: Poly = table(d)
                .cyclo
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect();
            let (q, r) = poly::divrem(&num, &div);
            debug_assert!(r.is_empty());
            num = q;
        }
    }
    let cyclo: Vec<BigInt> = num.iter().map(|c| c.to_integer()).collect();
    let phi = cyclo.len() - 1;
    debug_assert_eq!(phi, euler_phi(n));

    let mut powers = Vec::with_capacity(n as usize);
    let mut current = vec![BigInt::zero(); phi];
    if phi > 0 {
        current[0] = BigInt::one();
    }
    for _ in 0..n {
        powers.push(current.clone());
        // multiply by ζ and reduce the overflow with ζ^φ = −Σ c_i ζ^i
        let top = current.pop().unwrap_or_default();
        current.insert(0, BigInt::zero());
        if !top.is_zero() {
            for (i, c) in cyclo.iter().enumerate().take(phi) {
                current[i] -= &top * c;
            }
        }
    }
    Table { phi, cyclo, powers }
}

/// An exact element of the cyclotomic field Q(ζ_N), ζ_N = exp(2πi/N).
///
/// The value is stored as its residue modulo Φ_N in the power basis, so two
/// values of the same order are equal exactly when their coefficient vectors
/// are. Values of different orders compare by lifting to the lcm.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// ζ_n^k for any integer k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n > 0, "root of unity of order 0");
        let k = k.rem_euclid(n as i64) as usize;
        let t = table(n);
        Cyclotomic {
            order: n,
            coeffs: t.powers[k]
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        }
    }

    /// Builds a value from coefficients already in the power basis of Q(ζ_order).
    pub(crate) fn from_power_basis(order: u32, coeffs: Vec<Rational>) -> Self {
        debug_assert_eq!(coeffs.len(), table(order).phi);
        if coeffs[1..].iter().all(Zero::is_zero) {
            return Self::from_rational(coeffs.into_iter().next().expect("phi ≥ 1"));
        }
        Cyclotomic { order, coeffs }
    }

    /// Reduces a length-`order` vector (entry k = coefficient of ζ_order^k)
    /// modulo Φ_order.
    pub fn canonicalize(order: u32, raw: &[Rational]) -> Result<Self, ExactError> {
        if order == 0 {
            return Err(ExactError::InvalidOrder(0));
        }
        if raw.len() != order as usize {
            return Err(ExactError::RawLength {
                expected: order as usize,
                got: raw.len(),
            });
        }
        Ok(Self::reduce(order, raw))
    }

    fn reduce(order: u32, raw: &[Rational]) -> Self {
        let t = table(order);
        let mut coeffs = vec![Rational::zero(); t.phi];
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < t.phi {
                coeffs[k] += c;
                continue;
            }
            for (slot, p) in coeffs.iter_mut().zip(&t.powers[k]) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        Cyclotomic { order, coeffs }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn rational_fast(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-expresses the value in Q(ζ_target); `order()` must divide `target`.
    pub fn lift(&self, target: u32) -> Self {
        assert!(
            target.is_multiple_of(self.order),
            "cannot lift order {} to {}",
            self.order,
            target
        );
        if target == self.order {
            return self.clone();
        }
        if let Some(q) = self.rational_fast() {
            let phi = table(target).phi;
            let mut coeffs = vec![Rational::zero(); phi];
            coeffs[0] = q.clone();
            return Cyclotomic {
                order: target,
                coeffs,
            };
        }
        let step = (target / self.order) as usize;
        let mut raw = vec![Rational::zero(); target as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[k * step] = c.clone();
        }
        Self::reduce(target, &raw)
    }

    fn common(a: &Self, b: &Self) -> u32 {
        a.order.lcm(&b.order)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn invert(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if let Some(q) = self.rational_fast() {
            return Ok(Cyclotomic {
                order: self.order,
                coeffs: {
                    let mut v = vec![Rational::zero(); self.coeffs.len()];
                    v[0] = q.recip();
                    v
                },
            });
        }
        let t = table(self.order);
        let modulus: Poly = t
            .cyclo
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let inv = poly::inverse_mod(&self.coeffs, &modulus).ok_or(ExactError::DivisionByZero)?;
        let mut coeffs = vec![Rational::zero(); t.phi];
        for (slot, c) in coeffs.iter_mut().zip(inv) {
            *slot = c;
        }
        Ok(Cyclotomic {
            order: self.order,
            coeffs,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self * &other.invert()?)
    }

    /// Complex conjugation, ζ ↦ ζ^{−1}.
    pub fn conjugate(&self) -> Self {
        if self.rational_fast().is_some() {
            return self.clone();
        }
        let n = self.order as usize;
        let mut raw = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[(n - k) % n] = c.clone();
        }
        Self::reduce(self.order, &raw)
    }

    /// Galois action ζ ↦ ζ^k for k coprime to the order.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.order as i64;
        let mut raw = vec![Rational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            raw[(j as i64 * k).rem_euclid(n) as usize] += c;
        }
        Self::reduce(self.order, &raw)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Numeric value under ζ_N ↦ exp(2πi/N).
    pub fn to_complex(&self) -> Complex<f64> {
        let n = self.order as f64;
        let mut acc = Complex::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n;
            acc += Complex::new(angle.cos(), angle.sin()) * x;
        }
        acc
    }

    fn mul_same_order(a: &Self, b: &Self) -> Self {
        // clear denominators, multiply in Z[ζ], divide once at the end
        let (na, da) = integral(&a.coeffs);
        let (nb, db) = integral(&b.coeffs);
        let t = table(a.order);
        let n = a.order as usize;
        let mut raw = vec![BigInt::zero(); n];
        for (i, x) in na.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in nb.iter().enumerate() {
                if !y.is_zero() {
                    raw[(i + j) % n] += x * y;
                }
            }
        }
        let mut acc = vec![BigInt::zero(); t.phi];
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < t.phi {
                acc[k] += c;
                continue;
            }
            for (slot, p) in acc.iter_mut().zip(&t.powers[k]) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        let den = da * db;
        Cyclotomic {
            order: a.order,
            coeffs: acc
                .into_iter()
                .map(|c| Rational::new(c, den.clone()))
                .collect(),
        }
    }
}

/// Integer numerators over the lcm of the denominators.
fn integral(coeffs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for c in coeffs {
        if !c.denom().is_one() {
            den = den.lcm(c.denom());
        }
    }
    let nums = coeffs
        .iter()
        .map(|c| {
            if c.denom().is_one() {
                c.numer() * &den
            } else {
                c.numer() * (&den / c.denom())
            }
        })
        .collect();
    (nums, den)
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        match (self.rational_fast(), other.rational_fast()) {
            (Some(a), Some(b)) => return a == b,
            (Some(_), None) | (None, Some(_)) => return false,
            _ => {}
        }
        let n = Self::common(self, other);
        self.lift(n).coeffs == other.lift(n).coeffs
    }
}

impl Eq for Cyclotomic {}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Cyclotomic::from_int(n)
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Cyclotomic::from_rational(q)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.order == rhs.order {
            return Cyclotomic {
                order: self.order,
                coeffs: self
                    .coeffs
                    .iter()
                    .zip(&rhs.coeffs)
                    .map(|(a, b)| a + b)
                    .collect(),
            };
        }
        let n = Cyclotomic::common(self, rhs);
        &self.lift(n) + &rhs.lift(n)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.order == rhs.order {
            return Cyclotomic {
                order: self.order,
                coeffs: self
                    .coeffs
                    .iter()
                    .zip(&rhs.coeffs)
                    .map(|(a, b)| a - b)
                    .collect(),
            };
        }
        let n = Cyclotomic::common(self, rhs);
        &self.lift(n) - &rhs.lift(n)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero();
        }
        if let Some(q) = rhs.rational_fast() {
            return self.scale(q);
        }
        if let Some(q) = self.rational_fast() {
            return rhs.scale(q);
        }
        if self.order == rhs.order {
            return Cyclotomic::mul_same_order(self, rhs);
        }
        let n = Cyclotomic::common(self, rhs);
        Cyclotomic::mul_same_order(&self.lift(n), &rhs.lift(n))
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &'a Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Cyclotomic> for &'a Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a -= b;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        let mut acc = Cyclotomic::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Prints in the `E(n)` expression syntax accepted by the scenario parser,
/// e.g. `3/2 + E(3)` or `-1/2*E(5)^2`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            let body = if k == 0 {
                fmt_rational(&abs)
            } else {
                let root = if k == 1 {
                    format!("E({})", self.order)
                } else {
                    format!("E({})^{}", self.order, k)
                };
                if abs.is_one() {
                    root
                } else {
                    format!("{}*{}", fmt_rational(&abs), root)
                }
            };
            match (first, negative) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[{}]({})", self.order, self)
    }
}
