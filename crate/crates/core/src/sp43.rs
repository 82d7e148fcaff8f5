//! The reference group Sp(4,3) and its central quotient.
//!
//! The generators are built from symplectic transvections with respect to a
//! fixed alternating Gram matrix. No particular published generating set is
//! assumed; instead every run validates the three properties that make the
//! enumeration a legitimate oracle: each generator preserves the form, the
//! closure has exactly 51 840 elements, and the center is {I, -I}.

use crate::error::{Error, Result};
use crate::field::{FieldMatrix, FieldVector};
use crate::group::{GeneratorSet, GroupEnumeration};

const P: u8 = 3;

/// Order of Sp(4,3).
pub const SP43_ORDER: usize = 51_840;

/// The fixed alternating Gram matrix: antidiagonal (1, 1, -1, -1).
pub fn gram_matrix() -> FieldMatrix {
    FieldMatrix::from_rows(
        &[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[-1, 0, 0, 0]],
        P,
    )
}

/// The symplectic transvection x |-> x + (x J v^T) v, as a matrix acting on
/// row vectors.
pub fn transvection(v: &FieldVector) -> FieldMatrix {
    let j = gram_matrix();
    let jv = j.mul(&column_of(v));
    let mut t = FieldMatrix::identity(4, P);
    for i in 0..4 {
        for k in 0..4 {
            let add = jv.get(i, 0).mul(v.get(k));
            let cur = t.get(i, k).add(add);
            t.set(i, k, cur.value() as i64);
        }
    }
    t
}

fn column_of(v: &FieldVector) -> FieldMatrix {
    let mut m = FieldMatrix::zero(4, P);
    for i in 0..v.dim() {
        m.set(i, 0, v.get(i).value() as i64);
    }
    m
}

/// Whether `g` preserves the alternating form: g J g^T = J.
pub fn preserves_form(g: &FieldMatrix) -> bool {
    let j = gram_matrix();
    g.mul(&j).mul(&g.transpose()) == j
}

/// Two generators of Sp(4,3): a single transvection, and a product of three
/// transvections. The pair is validated by [`validated_enumeration`] on
/// every run.
pub fn generators() -> Vec<FieldMatrix> {
    let t1 = transvection(&FieldVector::new(&[1, 0, 0, 0], P));
    let t2 = transvection(&FieldVector::new(&[0, 1, 0, 0], P))
        .mul(&transvection(&FieldVector::new(&[0, 0, 1, 0], P)))
        .mul(&transvection(&FieldVector::new(&[0, 0, 1, 1], P)));
    vec![t1, t2]
}

/// The enumerated Sp(4,3) together with its center {I, -I}. Any failed
/// validation is a configuration error: the reference oracle must not be
/// trusted in that case.
pub struct Sp43 {
    enumeration: GroupEnumeration,
    center: Vec<FieldMatrix>,
}

impl Sp43 {
    pub fn enumeration(&self) -> &GroupEnumeration {
        &self.enumeration
    }

    pub fn center(&self) -> &[FieldMatrix] {
        &self.center
    }
}

/// Enumerates and validates the reference group. `limit` must admit 51 840
/// elements; a tighter limit surfaces as the enumeration error it is.
pub fn validated_enumeration(limit: usize) -> Result<Sp43> {
    let gens = generators();
    for (i, g) in gens.iter().enumerate() {
        if !preserves_form(g) {
            return Err(Error::Config(format!(
                "reference generator {i} does not preserve the alternating form"
            )));
        }
    }
    let set = GeneratorSet::new(gens, "Sp(4,3)")?;
    let enumeration = GroupEnumeration::close(set, limit)?;
    if enumeration.order() != SP43_ORDER {
        return Err(Error::Config(format!(
            "reference closure has {} elements instead of {SP43_ORDER}",
            enumeration.order()
        )));
    }
    let center: Vec<FieldMatrix> = enumeration
        .elements()
        .iter()
        .filter(|x| {
            enumeration
                .generators()
                .generators()
                .iter()
                .all(|g| x.mul(g) == g.mul(x))
        })
        .cloned()
        .collect();
    let id = FieldMatrix::identity(4, P);
    let neg_id = id.neg();
    if center.len() != 2 || !center.contains(&id) || !center.contains(&neg_id) {
        return Err(Error::Config(format!(
            "reference center has {} elements, expected {{I, -I}}",
            center.len()
        )));
    }
    Ok(Sp43 { enumeration, center })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn transvections_preserve_the_form() {
        for v in [[1, 0, 0, 0], [0, 1, 1, 0], [1, 2, 0, 1]] {
            let t = transvection(&FieldVector::new(&v.map(|e| e as i64), P));
            assert!(preserves_form(&t));
        }
    }

    #[test]
    fn generators_are_symplectic() {
        for g in generators() {
            assert!(preserves_form(&g));
        }
    }

    #[test]
    fn enumeration_validates_and_quotient_spectrum_is_correct() {
        let sp = validated_enumeration(60_000).unwrap();
        assert_eq!(sp.enumeration().order(), SP43_ORDER);
        let spectrum = sp.enumeration().spectrum_mod_center(sp.center()).unwrap();
        let mu: BTreeSet<u64> = [5, 9, 12].into_iter().collect();
        let omega: BTreeSet<u64> = [1, 2, 3, 4, 5, 6, 9, 12].into_iter().collect();
        assert_eq!(spectrum.mu(), &mu);
        assert_eq!(spectrum.omega(), &omega);
    }

    #[test]
    fn tight_limit_is_an_enumeration_error() {
        assert!(matches!(
            validated_enumeration(1000),
            Err(Error::EnumerationLimitExceeded { .. })
        ));
    }
}
