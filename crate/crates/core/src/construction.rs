//! The explicit objects of the construction: the 4x4 generators a, b of the
//! Frobenius group of shape 5:4, the four 17x17 generators A, B, C, D, and
//! the module homomorphisms sending the simple module V into the conjugation
//! module on 4x4 matrices.
//!
//! All matrices are hard-coded as literal data and verified against their
//! defining relations at load; nothing here is re-derived from the abstract
//! presentation.

use crate::error::{Error, Result};
use crate::field::{kernel_basis, FieldMatrix, FieldVector};
use crate::group::{GeneratorSet, GroupEnumeration};

/// Prime of the base field. Everything in the construction lives over GF(3).
pub const P: u8 = 3;

/// Row/column offsets of the five diagonal blocks (sizes 1, 4, 4, 4, 4) in
/// the 17x17 picture.
pub const BLOCK_OFFSETS: [usize; 5] = [0, 1, 5, 9, 13];

/// The pair (a, b) generating the Frobenius group F of shape 5:4, in the
/// basis (v, va, va^2, va^3) of the simple module V.
#[derive(Debug, Clone)]
pub struct FrobeniusPair {
    a: FieldMatrix,
    b: FieldMatrix,
}

impl FrobeniusPair {
    /// The literal generator matrices. Panics if the literals fail their
    /// defining relations, which would mean corrupted source data.
    pub fn build() -> Self {
        let pair = Self::from_matrices(
            FieldMatrix::from_rows(
                &[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, -1, -1, -1]],
                P,
            ),
            FieldMatrix::from_rows(
                &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[-1, -1, -1, -1], &[0, 1, 0, 0]],
                P,
            ),
        );
        pair.check_invariants().expect("literal generators satisfy the relations");
        pair
    }

    /// Wraps raw matrices without validation; callers verify separately.
    pub fn from_matrices(a: FieldMatrix, b: FieldMatrix) -> Self {
        FrobeniusPair { a, b }
    }

    pub fn a(&self) -> &FieldMatrix {
        &self.a
    }

    pub fn b(&self) -> &FieldMatrix {
        &self.b
    }

    /// a^5 = b^4 = 1, a^b = a^2, and 1 + a + a^2 + a^3 + a^4 = 0.
    pub fn check_invariants(&self) -> Result<()> {
        let id = FieldMatrix::identity(4, P);
        if self.a.pow(5) != id {
            return Err(Error::Structural("a^5 != 1".into()));
        }
        if self.b.pow(4) != id {
            return Err(Error::Structural("b^4 != 1".into()));
        }
        if self.a.conjugate_by(&self.b)? != self.a.pow(2) {
            return Err(Error::Structural("a^b != a^2".into()));
        }
        let mut sum = id;
        for k in 1..=4 {
            sum = sum.add(&self.a.pow(k));
        }
        if !sum.is_zero() {
            return Err(Error::Structural("1 + a + a^2 + a^3 + a^4 != 0".into()));
        }
        Ok(())
    }

    /// Full enumeration of F = <a, b> (order 20).
    pub fn enumerate(&self) -> Result<GroupEnumeration> {
        let gens = GeneratorSet::new(vec![self.a.clone(), self.b.clone()], "F")?;
        GroupEnumeration::close(gens, 40)
    }

    /// The off-diagonal blocks c_1 = b, c_2 = b^3, c_3 = b^2, c_4 = -b^2 of
    /// the generator C.
    pub fn c_blocks(&self) -> [FieldMatrix; 4] {
        [
            self.b.clone(),
            self.b.pow(3),
            self.b.pow(2),
            self.b.pow(2).neg(),
        ]
    }
}

/// Checks the full table of conjugation identities in F, each cell as two
/// equalities (for example b^a = ba^4 and ba^4 = a^2b). Returns one message
/// per failing cell; empty means all 24 equalities hold.
pub fn conjugation_identity_failures(a: &FieldMatrix, b: &FieldMatrix) -> Vec<String> {
    // Rows of the table: (label, i, j, k, l) encodes (b^i)^(a^j) = b^i a^k = a^l b^i.
    let table = [
        (1u64, 1u64, 4u64, 2u64),
        (2, 1, 2, 3),
        (3, 1, 3, 1),
        (1, 2, 3, 4),
        (2, 2, 4, 1),
        (3, 2, 1, 2),
        (1, 3, 2, 1),
        (2, 3, 1, 4),
        (3, 3, 4, 3),
        (1, 4, 1, 3),
        (2, 4, 3, 2),
        (3, 4, 2, 4),
    ];
    let mut failures = Vec::new();
    for (i, j, k, l) in table {
        let cell = format!("(b^{i})^(a^{j})");
        let conj = match b.pow(i).conjugate_by(&a.pow(j)) {
            Ok(m) => m,
            Err(_) => {
                failures.push(format!("{cell}: a is singular"));
                continue;
            }
        };
        let mid = b.pow(i).mul(&a.pow(k));
        let rhs = a.pow(l).mul(&b.pow(i));
        if conj != mid {
            failures.push(format!("{cell} != b^{i} a^{k}"));
        }
        if mid != rhs {
            failures.push(format!("b^{i} a^{k} != a^{l} b^{i} (cell {cell})"));
        }
    }
    failures
}

/// Places a 4x4 matrix in all four lower diagonal blocks of the 17x17
/// picture, with the scalar 1 in the top-left corner.
pub fn diag_embed(m: &FieldMatrix) -> FieldMatrix {
    assert_eq!(m.dim(), 4);
    let mut out = FieldMatrix::identity(17, m.modulus());
    for &offset in &BLOCK_OFFSETS[1..] {
        out.set_submatrix(offset, offset, m);
    }
    out
}

/// The four 17x17 generators in block form.
#[derive(Debug, Clone)]
pub struct BigGenerators {
    a: FieldMatrix,
    b: FieldMatrix,
    c: FieldMatrix,
    d: FieldMatrix,
}

impl BigGenerators {
    pub fn build(fp: &FrobeniusPair) -> Self {
        let [c1, c2, c3, c4] = fp.c_blocks();
        let mut c = FieldMatrix::identity(17, P);
        c.set_submatrix(BLOCK_OFFSETS[1], BLOCK_OFFSETS[2], &c1);
        c.set_submatrix(BLOCK_OFFSETS[1], BLOCK_OFFSETS[3], &c3);
        c.set_submatrix(BLOCK_OFFSETS[2], BLOCK_OFFSETS[4], &c4);
        c.set_submatrix(BLOCK_OFFSETS[3], BLOCK_OFFSETS[4], &c2);
        let mut d = FieldMatrix::identity(17, P);
        d.set_row_segment(0, BLOCK_OFFSETS[1], &FieldVector::new(&[1, 0, 0, 0], P));
        BigGenerators {
            a: diag_embed(fp.a()),
            b: diag_embed(fp.b()),
            c,
            d,
        }
    }

    /// Wraps four matrices loaded from a group description file. Only shape
    /// and invertibility are validated here; the structural checks compare
    /// against the built-in construction.
    pub fn from_matrices(mats: Vec<FieldMatrix>) -> Result<Self> {
        if mats.len() != 4 {
            return Err(Error::InvalidGenerators(format!(
                "expected 4 generators, found {}",
                mats.len()
            )));
        }
        for (i, m) in mats.iter().enumerate() {
            if m.dim() != 17 {
                return Err(Error::InvalidGenerators(format!(
                    "generator {i} has dimension {} instead of 17",
                    m.dim()
                )));
            }
            m.inverse()
                .map_err(|_| Error::InvalidGenerators(format!("generator {i} is singular")))?;
        }
        let mut it = mats.into_iter();
        Ok(BigGenerators {
            a: it.next().unwrap(),
            b: it.next().unwrap(),
            c: it.next().unwrap(),
            d: it.next().unwrap(),
        })
    }

    pub fn a(&self) -> &FieldMatrix {
        &self.a
    }

    pub fn b(&self) -> &FieldMatrix {
        &self.b
    }

    pub fn c(&self) -> &FieldMatrix {
        &self.c
    }

    pub fn d(&self) -> &FieldMatrix {
        &self.d
    }

    pub fn generator_set(&self) -> Result<GeneratorSet> {
        GeneratorSet::new(
            vec![self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()],
            "G",
        )
    }
}

/// A module homomorphism V -> M determined by v |-> c_i, stored as an
/// explicit linear map from V coordinates to flattened 4x4 matrices:
/// row k is the flattening of a^-k c_i a^k.
#[derive(Debug, Clone)]
pub struct ModuleHom {
    index: usize,
    rows: Vec<FieldVector>,
}

impl ModuleHom {
    /// Builds alpha_i after verifying the two extension conditions on
    /// m = c_i: m is fixed by conjugation with b, and the sum of its five
    /// a-conjugates vanishes. Failure would indicate corrupted block data.
    pub fn build_alpha(index: usize, fp: &FrobeniusPair) -> Result<Self> {
        assert!((1..=4).contains(&index), "alpha index must be 1..=4");
        let m = fp.c_blocks()[index - 1].clone();
        if m.conjugate_by(fp.b())? != m {
            return Err(Error::Structural(format!("c_{index} is not fixed by b-conjugation")));
        }
        let mut sum = FieldMatrix::zero(4, P);
        for k in 0..5 {
            sum = sum.add(&m.conjugate_by(&fp.a().pow(k))?);
        }
        if !sum.is_zero() {
            return Err(Error::Structural(format!(
                "sum of a-conjugates of c_{index} is nonzero"
            )));
        }
        let rows = (0..4)
            .map(|k| Ok(m.conjugate_by(&fp.a().pow(k))?.flatten()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleHom { index, rows })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Unvalidated constructor for negative-control tests that feed
    /// corrupted maps into the verifiers. Not part of the supported API.
    #[doc(hidden)]
    pub fn from_rows_unchecked(index: usize, rows: Vec<FieldVector>) -> Self {
        ModuleHom { index, rows }
    }

    /// Rows of the 4x16 matrix of the map.
    pub fn rows(&self) -> &[FieldVector] {
        &self.rows
    }

    /// Image of a V coordinate vector, as a 4x4 matrix.
    pub fn apply(&self, u: &FieldVector) -> FieldMatrix {
        assert_eq!(u.dim(), 4);
        let mut acc = FieldVector::zero(16, u.modulus());
        for k in 0..4 {
            let coeff = u.get(k);
            if !coeff.is_zero() {
                acc = acc.add(&self.rows[k].scale(coeff));
            }
        }
        FieldMatrix::from_flat(&acc, 4)
    }

    /// Messages for every basis vector and generator where the map fails to
    /// commute with the module action; empty means the map is a genuine
    /// module homomorphism on generators.
    pub fn action_commutation_failures(&self, fp: &FrobeniusPair) -> Vec<String> {
        let mut failures = Vec::new();
        for (gname, g) in [("a", fp.a()), ("b", fp.b())] {
            for k in 0..4 {
                let x = FieldVector::unit(4, k, P);
                let lhs = self.apply(&x.apply(g));
                let rhs = self
                    .apply(&x)
                    .conjugate_by(g)
                    .expect("group generator is invertible");
                if lhs != rhs {
                    failures.push(format!(
                        "alpha_{} does not commute with {gname} on basis vector {k}",
                        self.index
                    ));
                }
            }
        }
        failures
    }
}

/// Basis of the fixed space {x : x g = x}, the kernel of g - 1.
pub fn centralizer_in_module(g: &FieldMatrix) -> Vec<FieldVector> {
    let shifted = g.sub(&FieldMatrix::identity(g.dim(), g.modulus()));
    kernel_basis(&shifted)
}

/// The 1620-element affine group on V, realized as 5x5 matrices
/// [[1, v], [0, m]] with m in F. Its spectrum corroborates the order-12
/// witness search.
pub fn enumerate_affine_vf(fp: &FrobeniusPair) -> Result<GroupEnumeration> {
    let affine = |m: &FieldMatrix, translation: &FieldVector| {
        let mut out = FieldMatrix::identity(5, P);
        out.set_submatrix(1, 1, m);
        out.set_row_segment(0, 1, translation);
        out
    };
    let zero = FieldVector::zero(4, P);
    let gens = GeneratorSet::new(
        vec![
            affine(fp.a(), &zero),
            affine(fp.b(), &zero),
            affine(&FieldMatrix::identity(4, P), &FieldVector::new(&[1, 0, 0, 0], P)),
        ],
        "V:F",
    )?;
    GroupEnumeration::close(gens, 2000)
}
