use super::{SupportError, SupportSet};
use crate::coefficients::{FieldDescriptor, FieldElement};
use crate::exponents::GroupElement;
use crate::series::{Domain, Series};

/// Series realising the subset and union steps of the additive-closure
/// argument.
#[derive(Debug, Clone)]
pub struct GroupWitnesses {
    /// `(a, c)` with `supp(a) = supp(c) = A` and `supp(a + c) = B`, present
    /// when `B ⊆ A`.
    pub subset: Option<(Series, Series)>,
    /// `(a, b)` with `supp(a) = A`, `supp(b) = B` and `supp(a + b) = A ∪ B`.
    pub union: (Series, Series),
}

/// A coefficient other than `0` and `-1`.
fn spare_coefficient(field: FieldDescriptor) -> Result<FieldElement, SupportError> {
    match field {
        FieldDescriptor::PrimeField(2) => Err(SupportError::FieldTooSmall),
        FieldDescriptor::RationalFunctions(_) => Ok(field.variable().expect("rational functions have x")),
        _ => Ok(field.one()),
    }
}

fn explicit(s: &SupportSet) -> Result<&[GroupElement], SupportError> {
    if s.is_explicit() {
        Ok(s.elements())
    } else {
        Err(SupportError::NotExplicit)
    }
}

/// `a = sum_{g in A} t^g` and `c = alpha sum_{g in B} t^g - sum_{g in A \ B} t^g`
/// with `alpha` outside `{0, -1}`, so the sum cancels exactly on `A \ B`.
pub fn subset_witness(
    a: &SupportSet,
    b: &SupportSet,
    domain: Domain,
) -> Result<(Series, Series), SupportError> {
    let (xa, xb) = (explicit(a)?, explicit(b)?);
    let alpha = spare_coefficient(domain.field)?;
    if let Some(g) = xb.iter().find(|g| !xa.contains(g)) {
        return Err(SupportError::NotInSuperset(g.clone()));
    }
    let minus_one = domain.field.one().negated();
    let sa = Series::indicator(domain, xa)?;
    let sc = Series::literal(
        domain,
        xa.iter().map(|g| {
            let c = if xb.contains(g) { alpha.clone() } else { minus_one.clone() };
            (g.clone(), c)
        }),
    )?;
    Ok((sa, sc))
}

/// `a = sum_{g in A} t^g` and `b = alpha sum_{g in B} t^g` with `alpha`
/// outside `{0, -1}`, so nothing cancels on `A ∩ B`.
pub fn union_witness(
    a: &SupportSet,
    b: &SupportSet,
    domain: Domain,
) -> Result<(Series, Series), SupportError> {
    let (xa, xb) = (explicit(a)?, explicit(b)?);
    let alpha = spare_coefficient(domain.field)?;
    let sa = Series::indicator(domain, xa)?;
    let sb = Series::literal(domain, xb.iter().map(|g| (g.clone(), alpha.clone())))?;
    Ok((sa, sb))
}

/// Both witness pairs for explicit finite `A` and `B`.
pub fn build_group_witnesses(
    a: &SupportSet,
    b: &SupportSet,
    domain: Domain,
) -> Result<GroupWitnesses, SupportError> {
    let subset =
        if explicit(b)?.iter().all(|g| a.contains(g)) { Some(subset_witness(a, b, domain)?) } else { None };
    Ok(GroupWitnesses { subset, union: union_witness(a, b, domain)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::GroupDescriptor;
    use crate::series::{support_up_to, Horizon};

    fn set(v: &[i64]) -> SupportSet {
        SupportSet::finite(v.iter().map(|&x| GroupElement::from(x)))
    }

    fn support(s: &Series) -> Vec<GroupElement> {
        support_up_to(s, &Horizon::new(GroupElement::from(100), 100).unwrap()).unwrap()
    }

    #[test]
    fn subset_witness_cancels() {
        let d = Domain::new(GroupDescriptor::Integers, FieldDescriptor::Rationals);
        let (a, c) = subset_witness(&set(&[0, 1]), &set(&[0]), d).unwrap();
        assert_eq!(support(&a), set(&[0, 1]).elements());
        assert_eq!(support(&c), set(&[0, 1]).elements());
        assert_eq!(support(&(&a + &c)), set(&[0]).elements());
    }

    #[test]
    fn union_witness_keeps_everything() {
        let d = Domain::new(GroupDescriptor::Integers, FieldDescriptor::Rationals);
        let (a, b) = union_witness(&set(&[1]), &set(&[2]), d).unwrap();
        assert_eq!(support(&(&a + &b)), set(&[1, 2]).elements());
        let f3 = Domain::new(GroupDescriptor::Integers, FieldDescriptor::prime_field(3).unwrap());
        let (a, b) = union_witness(&set(&[1, 2]), &set(&[2, 3]), f3).unwrap();
        assert_eq!(support(&(&a + &b)), set(&[1, 2, 3]).elements());
    }

    #[test]
    fn f2_is_too_small() {
        let d = Domain::new(GroupDescriptor::Integers, FieldDescriptor::prime_field(2).unwrap());
        assert_eq!(
            build_group_witnesses(&set(&[0, 1]), &set(&[0]), d).unwrap_err(),
            SupportError::FieldTooSmall
        );
    }
}
