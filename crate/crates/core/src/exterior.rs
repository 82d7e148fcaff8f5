//! The exterior square of the 4-dimensional module V, with the induced
//! actions of the Frobenius generators on the six wedge basis vectors
//! e_i ^ e_j (i < j) and the distinguished 2-dimensional submodule.

use crate::construction::{FrobeniusPair, P};
use crate::error::{Error, Result};
use crate::field::{row_reduce, solve_combination, FieldMatrix, FieldVector};

/// Index pairs of the wedge basis, in lexicographic order.
pub const WEDGE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Matrix of the action of `g` on the wedge basis: the (ij, kl) entry is
/// the 2x2 minor of `g` on rows {i, j} and columns {k, l}.
pub fn wedge_action(g: &FieldMatrix) -> FieldMatrix {
    assert_eq!(g.dim(), 4);
    let mut w = FieldMatrix::zero(6, g.modulus());
    for (r, &(i, j)) in WEDGE_PAIRS.iter().enumerate() {
        for (c, &(k, l)) in WEDGE_PAIRS.iter().enumerate() {
            let minor = g.get(i, k).mul(g.get(j, l)).sub(g.get(i, l).mul(g.get(j, k)));
            w.set(r, c, minor.value() as i64);
        }
    }
    w
}

/// The wedge square of V with the generator actions and the vectors
/// u1 = v^va + v^va^3 + va^2^va^3 and u2 = v^va^2 + va^va^2 + va^va^3.
#[derive(Debug, Clone)]
pub struct ExteriorSquare {
    action_a: FieldMatrix,
    action_b: FieldMatrix,
    u1: FieldVector,
    u2: FieldVector,
}

fn wedge_vector(terms: &[(usize, usize)]) -> FieldVector {
    let mut v = FieldVector::zero(6, P);
    let mut out = v.entries().to_vec();
    for t in terms {
        let idx = WEDGE_PAIRS.iter().position(|p| p == t).expect("basis pair");
        out[idx] = (out[idx] + 1) % P;
    }
    v = FieldVector::new(&out.iter().map(|&e| e as i64).collect::<Vec<_>>(), P);
    v
}

impl ExteriorSquare {
    pub fn build(fp: &FrobeniusPair) -> Self {
        ExteriorSquare {
            action_a: wedge_action(fp.a()),
            action_b: wedge_action(fp.b()),
            u1: wedge_vector(&[(0, 1), (0, 3), (2, 3)]),
            u2: wedge_vector(&[(0, 2), (1, 2), (1, 3)]),
        }
    }

    pub fn dim(&self) -> usize {
        6
    }

    pub fn action_a(&self) -> &FieldMatrix {
        &self.action_a
    }

    pub fn action_b(&self) -> &FieldMatrix {
        &self.action_b
    }

    pub fn u1(&self) -> &FieldVector {
        &self.u1
    }

    pub fn u2(&self) -> &FieldVector {
        &self.u2
    }

    /// Actions of a and b on the 4-dimensional quotient by span(u1, u2),
    /// in the basis of standard vectors completing u1, u2.
    pub fn quotient_actions(&self) -> Result<(FieldMatrix, FieldMatrix)> {
        let mut basis = vec![self.u1.clone(), self.u2.clone()];
        for i in 0..6 {
            let e = FieldVector::unit(6, i, P);
            let before = row_reduce(&basis).1;
            let mut ext = basis.clone();
            ext.push(e.clone());
            if row_reduce(&ext).1 > before {
                basis.push(e);
            }
        }
        if basis.len() != 6 {
            return Err(Error::Structural("could not complete the wedge basis".into()));
        }
        let project = |action: &FieldMatrix| -> Result<FieldMatrix> {
            let mut q = FieldMatrix::zero(4, P);
            for i in 0..4 {
                let image = basis[2 + i].apply(action);
                let coords = solve_combination(&basis, &image)
                    .ok_or_else(|| Error::Structural("wedge image outside the basis span".into()))?;
                for j in 0..4 {
                    q.set(i, j, coords.get(2 + j).value() as i64);
                }
            }
            Ok(q)
        };
        Ok((project(&self.action_a)?, project(&self.action_b)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::centralizer_in_module;

    #[test]
    fn wedge_dimension_and_action_orders() {
        let fp = FrobeniusPair::build();
        let ext = ExteriorSquare::build(&fp);
        assert_eq!(ext.dim(), 6);
        assert_eq!(ext.action_a().order(10).unwrap(), 5);
        assert_eq!(ext.action_b().order(10).unwrap(), 4);
    }

    #[test]
    fn u_vectors_transform_as_stated() {
        let fp = FrobeniusPair::build();
        let ext = ExteriorSquare::build(&fp);
        assert_eq!(ext.u1().apply(ext.action_a()), *ext.u1());
        assert_eq!(ext.u1().apply(ext.action_b()), *ext.u2());
        assert_eq!(ext.u2().apply(ext.action_a()), *ext.u2());
        assert_eq!(ext.u2().apply(ext.action_b()), ext.u1().neg());
    }

    #[test]
    fn quotient_is_a_fixed_point_free_module() {
        let fp = FrobeniusPair::build();
        let ext = ExteriorSquare::build(&fp);
        let (qa, qb) = ext.quotient_actions().unwrap();
        assert!(centralizer_in_module(&qa).is_empty());
        assert!(qa.pow(5).is_identity());
        assert!(qb.pow(4).is_identity());
        assert_eq!(qa.conjugate_by(&qb).unwrap(), qa.pow(2));
    }
}
