//! Dense univariate polynomials over Q, lowest degree first.

use num_traits::{One, Zero};

use super::Rational;

pub(crate) type Poly = Vec<Rational>;

pub(crate) fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn degree(p: &Poly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
        out.push(x - y);
    }
    trim(&mut out);
    out
}

/// Euclidean division; `divisor` must be nonzero.
pub(crate) fn divrem(a: &Poly, divisor: &Poly) -> (Poly, Poly) {
    let db = degree(divisor).expect("division by the zero polynomial");
    let lead = divisor[db].clone();
    let mut rem = a.clone();
    trim(&mut rem);
    let mut quot = vec![Rational::zero(); rem.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let factor = &rem[dr] / &lead;
        let shift = dr - db;
        for (i, c) in divisor.iter().enumerate().take(db + 1) {
            if !c.is_zero() {
                rem[shift + i] -= &factor * c;
            }
        }
        quot[shift] = factor;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// Returns `u` with `a * u ≡ 1 (mod modulus)`, or `None` when `a` is not a
/// unit modulo `modulus`.
pub(crate) fn inverse_mod(a: &Poly, modulus: &Poly) -> Option<Poly> {
    let mut r0 = modulus.clone();
    let mut r1 = a.clone();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Poly = Vec::new();
    let mut s1: Poly = vec![Rational::one()];
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is the gcd; a unit gcd is a nonzero constant.
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = r0[0].clone();
    let mut u: Poly = s0.into_iter().map(|x| x / &c).collect();
    let (_, rem) = divrem(&u, modulus);
    u = rem;
    Some(u)
}
