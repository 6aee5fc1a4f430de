//! Q(ζ_N) arithmetic on `i128` for one fixed order. Every operation returns
//! `None` on overflow so callers can fall back to the exact big-number path.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactnum::{power_table, Cyclotomic, Rational};

const MAX_PHI: usize = 24;

pub(crate) struct Field {
    order: u32,
    phi: usize,
    // ζ^k for 0 ≤ k < 2φ − 1, in the power basis
    powers: Vec<Vec<i128>>,
}

#[derive(Clone)]
pub(crate) struct Elem {
    num: Vec<i128>,
    den: i128,
}

impl Elem {
    pub(crate) fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0)
    }
}

impl Field {
    /// The field generated by all the given values, if it is small enough.
    pub(crate) fn containing<'a>(
        values: impl IntoIterator<Item = &'a Cyclotomic>,
    ) -> Option<Rc<Field>> {
        thread_local! {
            static FIELDS: RefCell<HashMap<u32, Option<Rc<Field>>>> = RefCell::new(HashMap::new());
        }
        let order = values
            .into_iter()
            .filter(|c| !c.is_zero())
            .fold(1u32, |acc, c| acc.lcm(&c.order()));
        FIELDS.with(|f| {
            f.borrow_mut()
                .entry(order)
                .or_insert_with(|| Field::new(order))
                .clone()
        })
    }

    fn new(order: u32) -> Option<Rc<Field>> {
        let (phi, table) = power_table(order);
        if phi > MAX_PHI {
            return None;
        }
        let powers = (0..(2 * phi).max(1) - 1)
            .map(|k| {
                table[k % order as usize]
                    .iter()
                    .map(|c| c.to_i128())
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Rc::new(Field { order, phi, powers }))
    }

    pub(crate) fn zero(&self) -> Elem {
        Elem {
            num: vec![0; self.phi],
            den: 1,
        }
    }

    pub(crate) fn import(&self, c: &Cyclotomic) -> Option<Elem> {
        if c.is_zero() {
            return Some(self.zero());
        }
        if c.order() != self.order {
            return self.import(&c.lift(self.order));
        }
        let mut den = 1i128;
        let mut parts = Vec::with_capacity(self.phi);
        for q in c.coeffs() {
            let (n, d) = (q.numer().to_i128()?, q.denom().to_i128()?);
            den = (den / den.gcd(&d)).checked_mul(d)?;
            parts.push((n, d));
        }
        let num = parts
            .into_iter()
            .map(|(n, d)| n.checked_mul(den / d))
            .collect::<Option<Vec<_>>>()?;
        Some(Elem { num, den })
    }

    pub(crate) fn import_all(&self, cs: &[Cyclotomic]) -> Option<Vec<Elem>> {
        cs.iter().map(|c| self.import(c)).collect()
    }

    pub(crate) fn export(&self, e: &Elem) -> Cyclotomic {
        if e.is_zero() {
            return Cyclotomic::zero();
        }
        let coeffs = e
            .num
            .iter()
            .map(|&c| {
                let g = c.gcd(&e.den);
                Rational::new_raw(BigInt::from(c / g), BigInt::from(e.den / g))
            })
            .collect();
        Cyclotomic::from_power_basis(self.order, coeffs)
    }

    pub(crate) fn mul(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        let mut buf = [0i128; 2 * MAX_PHI - 1];
        let raw = &mut buf[..2 * self.phi - 1];
        for (i, &x) in a.num.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.num.iter().enumerate() {
                if y != 0 {
                    raw[i + j] = raw[i + j].checked_add(x.checked_mul(y)?)?;
                }
            }
        }
        let mut num = raw[..self.phi].to_vec();
        let raw = &raw[..];
        for (k, &c) in raw.iter().enumerate().skip(self.phi) {
            if c == 0 {
                continue;
            }
            for (slot, &p) in num.iter_mut().zip(&self.powers[k]) {
                if p != 0 {
                    *slot = slot.checked_add(c.checked_mul(p)?)?;
                }
            }
        }
        normalize(num, a.den.checked_mul(b.den)?)
    }

    /// `a += b` over the lcm of the denominators; the sum is not reduced.
    pub(crate) fn add_to(&self, a: &mut Elem, b: &Elem) -> Option<()> {
        if b.is_zero() {
            return Some(());
        }
        if a.den == b.den {
            for (x, &y) in a.num.iter_mut().zip(&b.num) {
                *x = x.checked_add(y)?;
            }
            return Some(());
        }
        let g = a.den.gcd(&b.den);
        let (fa, fb) = (b.den / g, a.den / g);
        for (x, &y) in a.num.iter_mut().zip(&b.num) {
            *x = x.checked_mul(fa)?.checked_add(y.checked_mul(fb)?)?;
        }
        a.den = a.den.checked_mul(fa)?;
        Some(())
    }
}

fn normalize(mut num: Vec<i128>, mut den: i128) -> Option<Elem> {
    if num.iter().all(|&c| c == 0) {
        return Some(Elem { num, den: 1 });
    }
    let g = num.iter().fold(den, |g, c| g.gcd(c));
    if !g.is_one() && !g.is_zero() {
        num.iter_mut().for_each(|c| *c /= g);
        den /= g;
    }
    if den < 0 {
        num.iter_mut().for_each(|c| *c = -*c);
        den = den.checked_neg()?;
    }
    Some(Elem { num, den })
}
