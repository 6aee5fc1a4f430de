use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{same_group, RepError};
use crate::exactnum::Cyclotomic;
use crate::groups::{FiniteGroup, GroupEmbedding};

/// Class function, one value per conjugacy class in the group's class order.
#[derive(Clone)]
pub struct VirtualCharacter {
    group: Arc<FiniteGroup>,
    values: Vec<Cyclotomic>,
}

impl VirtualCharacter {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<Cyclotomic>) -> Result<Self, RepError> {
        if values.len() != group.num_classes() {
            return Err(RepError::Shape(format!(
                "{} values for {} conjugacy classes",
                values.len(),
                group.num_classes()
            )));
        }
        Ok(VirtualCharacter { group, values })
    }

    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, values: Vec<Cyclotomic>) -> Self {
        VirtualCharacter { group, values }
    }

    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        VirtualCharacter::new_unchecked(
            group.clone(),
            vec![Cyclotomic::zero(); group.num_classes()],
        )
    }

    pub fn constant(group: &Arc<FiniteGroup>, c: Cyclotomic) -> Self {
        VirtualCharacter::new_unchecked(group.clone(), vec![c; group.num_classes()])
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value_at_class(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    pub fn value_at(&self, g: usize) -> &Cyclotomic {
        &self.values[self.group.class_of(g)]
    }

    /// Value at the identity, which must be an integer.
    pub fn virtual_dim(&self) -> Result<BigInt, RepError> {
        let v = self
            .value_at(self.group.identity())
            .as_rational()
            .ok_or(RepError::NotIntegral)?;
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(RepError::NotIntegral)
        }
    }

    fn zip_with(
        &self,
        other: &VirtualCharacter,
        f: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic,
    ) -> Result<VirtualCharacter, RepError> {
        if !same_group(&self.group, &other.group) {
            return Err(RepError::IncompatibleGroups);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(VirtualCharacter::new_unchecked(self.group.clone(), values))
    }

    pub fn add(&self, other: &VirtualCharacter) -> Result<VirtualCharacter, RepError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &VirtualCharacter) -> Result<VirtualCharacter, RepError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &VirtualCharacter) -> Result<VirtualCharacter, RepError> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn neg(&self) -> VirtualCharacter {
        self.map(|v| -v)
    }

    pub fn scale(&self, c: &Cyclotomic) -> VirtualCharacter {
        self.map(|v| v * c)
    }

    pub fn conjugate(&self) -> VirtualCharacter {
        self.map(Cyclotomic::conjugate)
    }

    fn map(&self, f: impl Fn(&Cyclotomic) -> Cyclotomic) -> VirtualCharacter {
        VirtualCharacter::new_unchecked(self.group.clone(), self.values.iter().map(f).collect())
    }

    /// `(1/|G|) Σ_g a(g) conj(b(g))`, summed over classes.
    pub fn inner_product(&self, other: &VirtualCharacter) -> Result<Cyclotomic, RepError> {
        if !same_group(&self.group, &other.group) {
            return Err(RepError::IncompatibleGroups);
        }
        let sizes = &self.group.conjugacy().class_sizes;
        let mut acc = Cyclotomic::zero();
        for ((a, b), &size) in self.values.iter().zip(&other.values).zip(sizes) {
            acc += &(&(a * &b.conjugate()) * &Cyclotomic::from_int(size as i64));
        }
        let n = BigRational::from_integer(BigInt::from(self.group.order()));
        Ok(acc.scale(&n.recip()))
    }

    pub fn restrict(&self, emb: &GroupEmbedding) -> Result<VirtualCharacter, RepError> {
        if !same_group(&self.group, emb.target()) {
            return Err(RepError::IncompatibleGroups);
        }
        let fusion = emb.fuse_classes();
        let values = fusion.map.iter().map(|&c| self.values[c].clone()).collect();
        Ok(VirtualCharacter::new_unchecked(
            emb.source().clone(),
            values,
        ))
    }

    /// Induction by the defining sum
    /// `(1/|G|) Σ_{x ∈ H, x⁻¹hx ∈ G} χ(x⁻¹hx)`.
    pub fn induce_by_sum(&self, emb: &GroupEmbedding) -> Result<VirtualCharacter, RepError> {
        if !same_group(&self.group, emb.source()) {
            return Err(RepError::IncompatibleGroups);
        }
        let big = emb.target();
        let inv_order = BigRational::new(BigInt::from(1), BigInt::from(self.group.order()));
        let values = big
            .conjugacy()
            .class_reps
            .iter()
            .map(|&h| {
                let mut acc = Cyclotomic::zero();
                for x in big.elements() {
                    if let Some(g) = emb.preimage(big.conjugate(big.inv(x), h)) {
                        acc += self.value_at(g);
                    }
                }
                acc.scale(&inv_order)
            })
            .collect();
        Ok(VirtualCharacter::new_unchecked(big.clone(), values))
    }

    /// Induction through class fusion:
    /// `Σ_i (|Z_H(h)| / |Z_G(g_i)|) χ(g_i)` over source classes `g_i` fusing to `(h)`.
    pub fn induce_by_centralizers(
        &self,
        emb: &GroupEmbedding,
    ) -> Result<VirtualCharacter, RepError> {
        if !same_group(&self.group, emb.source()) {
            return Err(RepError::IncompatibleGroups);
        }
        let fusion = emb.fuse_classes();
        let small = self.group.conjugacy();
        let big = emb.target().conjugacy();
        let values = fusion
            .fibers
            .iter()
            .enumerate()
            .map(|(hc, fiber)| {
                let zh = big.centralizers[hc].len();
                fiber
                    .iter()
                    .map(|&gc| {
                        let w = BigRational::new(
                            BigInt::from(zh),
                            BigInt::from(small.centralizers[gc].len()),
                        );
                        self.values[gc].scale(&w)
                    })
                    .sum()
            })
            .collect();
        Ok(VirtualCharacter::new_unchecked(
            emb.target().clone(),
            values,
        ))
    }
}

impl PartialEq for VirtualCharacter {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.values == other.values
    }
}

impl fmt::Debug for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}
