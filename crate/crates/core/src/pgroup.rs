//! Coordinate representation of the 3^24-element normal subgroup P of the
//! 17x17 group, and of its subgroup generated by the F-conjugates of C.
//!
//! A P element is stored as four d-rows in GF(3)^4 plus a five-matrix tuple
//! (f1, f2, f3, f4, h); multiplication, inversion, conjugation by the
//! block-diagonal subgroup, and the order test all run on coordinates and
//! are cross-checked against the 17x17 matrix arithmetic in tests.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::construction::{BigGenerators, FrobeniusPair, BLOCK_OFFSETS, P};
use crate::error::{Error, Result};
use crate::field::{solve_combination, FieldMatrix, FieldVector};
use crate::group::{bfs_closure, GroupElement};

/// The tuple coordinates (f1, f2, f3, f4, h) of an element with zero d-rows.
///
/// The product rule on the h component is h + h' + f1 f4' + f3 f2', exactly
/// the (2,5) block of the 17x17 product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CTuple {
    f: [FieldMatrix; 4],
    h: FieldMatrix,
}

impl CTuple {
    pub fn new(f: [FieldMatrix; 4], h: FieldMatrix) -> Self {
        CTuple { f, h }
    }

    pub fn identity() -> Self {
        let z = FieldMatrix::zero(4, P);
        CTuple {
            f: [z.clone(), z.clone(), z.clone(), z.clone()],
            h: z,
        }
    }

    /// The tuple of the generator C itself: (c1, c2, c3, c4, 0).
    pub fn generator_c(fp: &FrobeniusPair) -> Self {
        CTuple {
            f: fp.c_blocks(),
            h: FieldMatrix::zero(4, P),
        }
    }

    pub fn f(&self, i: usize) -> &FieldMatrix {
        &self.f[i - 1]
    }

    pub fn h(&self) -> &FieldMatrix {
        &self.h
    }

    pub fn is_identity(&self) -> bool {
        self.f.iter().all(|m| m.is_zero()) && self.h.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = [
            self.f[0].add(&other.f[0]),
            self.f[1].add(&other.f[1]),
            self.f[2].add(&other.f[2]),
            self.f[3].add(&other.f[3]),
        ];
        let h = self
            .h
            .add(&other.h)
            .add(&self.f[0].mul(&other.f[3]))
            .add(&self.f[2].mul(&other.f[1]));
        CTuple { f, h }
    }

    pub fn inverse(&self) -> Self {
        let h = self
            .h
            .neg()
            .add(&self.f[0].mul(&self.f[3]))
            .add(&self.f[2].mul(&self.f[1]));
        CTuple {
            f: [
                self.f[0].neg(),
                self.f[1].neg(),
                self.f[2].neg(),
                self.f[3].neg(),
            ],
            h,
        }
    }

    /// Componentwise conjugation by a 4x4 matrix, the restriction of
    /// conjugation by diag(1, m, m, m, m).
    pub fn conjugate(&self, m: &FieldMatrix) -> Result<Self> {
        Ok(self.conjugate_with(&m.inverse()?, m))
    }

    /// Conjugation with the inverse supplied by the caller, for loops that
    /// conjugate many tuples by the same matrix.
    pub fn conjugate_with(&self, m_inv: &FieldMatrix, m: &FieldMatrix) -> Self {
        let conj = |x: &FieldMatrix| m_inv.mul(x).mul(m);
        CTuple {
            f: [
                conj(&self.f[0]),
                conj(&self.f[1]),
                conj(&self.f[2]),
                conj(&self.f[3]),
            ],
            h: conj(&self.h),
        }
    }
}

impl GroupElement for CTuple {
    fn identity_like(&self) -> Self {
        CTuple::identity()
    }

    fn compose(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn invert(&self) -> Self {
        self.inverse()
    }
}

/// Structured coordinates of a P element per the block-unitriangular form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PElement {
    d: [FieldVector; 4],
    c: CTuple,
}

/// The three possibly-nonzero above-diagonal blocks of the cube of a
/// block-unitriangular matrix in characteristic 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeBlocks {
    pub z1: FieldMatrix,
    pub z2: FieldMatrix,
    pub t1: FieldMatrix,
}

impl CubeBlocks {
    pub fn is_zero(&self) -> bool {
        self.z1.is_zero() && self.z2.is_zero() && self.t1.is_zero()
    }
}

/// Generic upper block-unitriangular 5x5 matrix over the ring of 4x4
/// matrices, i.e. a 20x20 matrix over GF(3). Block names follow the
/// superdiagonal layout: x on (i, i+1), y on (i, i+2), z on (i, i+3),
/// t on (1, 5).
#[derive(Debug, Clone)]
pub struct UnitriangularBlocks {
    pub x: [FieldMatrix; 4],
    pub y: [FieldMatrix; 3],
    pub z: [FieldMatrix; 2],
    pub t: FieldMatrix,
}

impl UnitriangularBlocks {
    pub fn to_matrix(&self) -> FieldMatrix {
        let mut m = FieldMatrix::identity(20, P);
        for (i, blk) in self.x.iter().enumerate() {
            m.set_submatrix(4 * i, 4 * (i + 1), blk);
        }
        for (i, blk) in self.y.iter().enumerate() {
            m.set_submatrix(4 * i, 4 * (i + 2), blk);
        }
        for (i, blk) in self.z.iter().enumerate() {
            m.set_submatrix(4 * i, 4 * (i + 3), blk);
        }
        m.set_submatrix(0, 16, &self.t);
        m
    }

    /// The cube formula: z1' = x1 x2 x3, z2' = x2 x3 x4, and
    /// t1' = x1 x2 y3 + x1 y2 x4 + y1 x3 x4.
    pub fn cube_blocks(&self) -> CubeBlocks {
        let [x1, x2, x3, x4] = &self.x;
        let [y1, y2, y3] = &self.y;
        CubeBlocks {
            z1: x1.mul(x2).mul(x3),
            z2: x2.mul(x3).mul(x4),
            t1: x1
                .mul(x2)
                .mul(y3)
                .add(&x1.mul(y2).mul(x4))
                .add(&y1.mul(x3).mul(x4)),
        }
    }
}

/// A d-row padded to a 4x4 matrix: the row in the top, zeros below. This is
/// the natural embedding of the 17x17 picture into the 20x20 one.
fn pad_row(v: &FieldVector) -> FieldMatrix {
    let mut m = FieldMatrix::zero(4, v.modulus());
    m.set_row_segment(0, 0, v);
    m
}

impl PElement {
    pub fn identity() -> Self {
        PElement {
            d: std::array::from_fn(|_| FieldVector::zero(4, P)),
            c: CTuple::identity(),
        }
    }

    pub fn from_parts(d: [FieldVector; 4], c: CTuple) -> Self {
        assert!(d.iter().all(|v| v.dim() == 4));
        PElement { d, c }
    }

    /// An element with only d-rows (the normal closure of D lives here).
    pub fn pure_d(d: [FieldVector; 4]) -> Self {
        Self::from_parts(d, CTuple::identity())
    }

    pub fn from_tuple(c: CTuple) -> Self {
        PElement {
            d: std::array::from_fn(|_| FieldVector::zero(4, P)),
            c,
        }
    }

    pub fn d(&self, i: usize) -> &FieldVector {
        &self.d[i - 1]
    }

    pub fn tuple(&self) -> &CTuple {
        &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.d.iter().all(|v| v.is_zero()) && self.c.is_identity()
    }

    /// All sixteen d coordinates as one row, for the linear span checks.
    pub fn d_coordinates(&self) -> FieldVector {
        FieldVector::concat(&[&self.d[0], &self.d[1], &self.d[2], &self.d[3]])
    }

    pub fn from_d_coordinates(v: &FieldVector) -> Self {
        assert_eq!(v.dim(), 16);
        Self::pure_d(std::array::from_fn(|i| v.segment(4 * i, 4)))
    }

    /// Coordinate product; agrees with the 17x17 matrix product on
    /// embeddings.
    pub fn mul(&self, other: &Self) -> Self {
        let c = self.c.mul(&other.c);
        let d1 = self.d[0].add(&other.d[0]);
        let d2 = self.d[1].add(&other.d[1]).add(&self.d[0].apply(other.c.f(1)));
        let d3 = self.d[2].add(&other.d[2]).add(&self.d[0].apply(other.c.f(3)));
        let d4 = self.d[3]
            .add(&other.d[3])
            .add(&self.d[0].apply(other.c.h()))
            .add(&self.d[1].apply(other.c.f(4)))
            .add(&self.d[2].apply(other.c.f(2)));
        PElement {
            d: [d1, d2, d3, d4],
            c,
        }
    }

    /// Inverse computed through the matrix embedding (Gauss on the
    /// unipotent 17x17 matrix) and re-parsed into coordinates.
    pub fn inverse(&self) -> Self {
        let inv = self
            .embed()
            .inverse()
            .expect("unipotent matrices are invertible");
        Self::parse(&inv).expect("inverse of a P element stays in P form")
    }

    /// The 17x17 block-unitriangular matrix with these coordinates.
    pub fn embed(&self) -> FieldMatrix {
        let mut m = FieldMatrix::identity(17, P);
        for (i, row) in self.d.iter().enumerate() {
            m.set_row_segment(0, BLOCK_OFFSETS[1 + i], row);
        }
        m.set_submatrix(BLOCK_OFFSETS[1], BLOCK_OFFSETS[2], self.c.f(1));
        m.set_submatrix(BLOCK_OFFSETS[1], BLOCK_OFFSETS[3], self.c.f(3));
        m.set_submatrix(BLOCK_OFFSETS[1], BLOCK_OFFSETS[4], self.c.h());
        m.set_submatrix(BLOCK_OFFSETS[2], BLOCK_OFFSETS[4], self.c.f(4));
        m.set_submatrix(BLOCK_OFFSETS[3], BLOCK_OFFSETS[4], self.c.f(2));
        m
    }

    /// Inverse of [`embed`](Self::embed): fails with a shape error on any
    /// matrix that is not block-unitriangular with zeros where the form
    /// requires them.
    pub fn parse(m: &FieldMatrix) -> Result<Self> {
        if m.dim() != 17 {
            return Err(Error::Shape(format!("dimension {} instead of 17", m.dim())));
        }
        if m.modulus() != P {
            return Err(Error::Shape("modulus is not 3".into()));
        }
        let d: [FieldVector; 4] =
            std::array::from_fn(|i| m.row_segment(0, BLOCK_OFFSETS[1 + i], 4));
        let f1 = m.submatrix(BLOCK_OFFSETS[1], BLOCK_OFFSETS[2], 4);
        let f3 = m.submatrix(BLOCK_OFFSETS[1], BLOCK_OFFSETS[3], 4);
        let h = m.submatrix(BLOCK_OFFSETS[1], BLOCK_OFFSETS[4], 4);
        let f4 = m.submatrix(BLOCK_OFFSETS[2], BLOCK_OFFSETS[4], 4);
        let f2 = m.submatrix(BLOCK_OFFSETS[3], BLOCK_OFFSETS[4], 4);
        let candidate = PElement {
            d,
            c: CTuple::new([f1, f2, f3, f4], h),
        };
        // Everything outside the named blocks must match the identity
        // pattern; rebuilding and comparing catches all deviations at once.
        if candidate.embed() != *m {
            return Err(Error::Shape(
                "nonzero entries outside the admissible blocks".into(),
            ));
        }
        Ok(candidate)
    }

    /// The 20x20 embedding: d-rows padded to 4x4 blocks, the leading scalar
    /// replaced by the identity block. Products and the cube formula match
    /// the 17x17 arithmetic literally in this picture.
    pub fn padded_blocks(&self) -> UnitriangularBlocks {
        let zero = FieldMatrix::zero(4, P);
        UnitriangularBlocks {
            x: [
                pad_row(&self.d[0]),
                self.c.f(1).clone(),
                zero.clone(),
                self.c.f(2).clone(),
            ],
            y: [pad_row(&self.d[1]), self.c.f(3).clone(), self.c.f(4).clone()],
            z: [pad_row(&self.d[2]), self.c.h().clone()],
            t: pad_row(&self.d[3]),
        }
    }

    pub fn embed_padded(&self) -> FieldMatrix {
        self.padded_blocks().to_matrix()
    }

    /// Cube blocks from the coordinate formula.
    pub fn cube_blocks(&self) -> CubeBlocks {
        self.padded_blocks().cube_blocks()
    }

    /// Order in {1, 3, 9}: 9 exactly when some cube block is nonzero.
    pub fn order(&self) -> u64 {
        if !self.cube_blocks().is_zero() {
            9
        } else if self.is_identity() {
            1
        } else {
            3
        }
    }

    /// Conjugation by diag(1, m, m, m, m) for m in the Frobenius group:
    /// d-rows transform by the module action, the tuple componentwise.
    pub fn conjugate_by_f(&self, m: &FieldMatrix) -> Result<Self> {
        Ok(PElement {
            d: [
                self.d[0].apply(m),
                self.d[1].apply(m),
                self.d[2].apply(m),
                self.d[3].apply(m),
            ],
            c: self.c.conjugate(m)?,
        })
    }

    /// Text form: four d-rows, a blank line, then f1, f2, f3, f4, h in the
    /// matrix text format separated by blank lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.d {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        for block in [
            self.c.f(1),
            self.c.f(2),
            self.c.f(3),
            self.c.f(4),
            self.c.h(),
        ] {
            out.push('\n');
            out.push_str(&block.to_text());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let mut d: Vec<FieldVector> = Vec::new();
        for i in 0..4 {
            let line = lines.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected four d-rows".into(),
            })?;
            let entries: std::result::Result<Vec<i64>, _> =
                line.split_whitespace().map(|t| t.parse::<i64>()).collect();
            let entries = entries.map_err(|_| Error::Parse {
                line: i + 1,
                message: "non-integer d-row entry".into(),
            })?;
            if entries.len() != 4 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "d-row must have four entries".into(),
                });
            }
            d.push(FieldVector::new(&entries, P));
        }
        let mut blocks = Vec::new();
        let mut block = String::new();
        for line in lines.chain(std::iter::once("")) {
            if line.trim().is_empty() {
                if !block.trim().is_empty() {
                    blocks.push(FieldMatrix::from_text(&block)?);
                    block.clear();
                }
            } else {
                block.push_str(line);
                block.push('\n');
            }
        }
        if blocks.len() != 5 {
            return Err(Error::Parse {
                line: 5,
                message: format!("expected five 4x4 blocks, found {}", blocks.len()),
            });
        }
        let h = blocks.pop().unwrap();
        let f4 = blocks.pop().unwrap();
        let f3 = blocks.pop().unwrap();
        let f2 = blocks.pop().unwrap();
        let f1 = blocks.pop().unwrap();
        Ok(PElement {
            d: [d[0].clone(), d[1].clone(), d[2].clone(), d[3].clone()],
            c: CTuple::new([f1, f2, f3, f4], h),
        })
    }
}

/// The fully enumerated group generated by the F-conjugates of C, as
/// coordinate tuples.
#[derive(Debug, Clone)]
pub struct CGroup {
    elements: Vec<CTuple>,
    index: HashMap<CTuple, usize>,
}

/// Enumerates all tuples reachable from C under F-conjugation, products and
/// inverses. Any blow-up past 3^8 elements is an error: it would falsify
/// the structure the rest of the verification relies on.
pub fn enumerate_c_group(fp: &FrobeniusPair) -> Result<CGroup> {
    let f_group = fp.enumerate()?;
    let base = CTuple::generator_c(fp);
    let mut generators: Vec<CTuple> = Vec::new();
    for m in f_group.elements() {
        let conj = base.conjugate(m)?;
        if !generators.contains(&conj) {
            generators.push(conj);
        }
    }
    let elements = bfs_closure(&generators, 6561)?;
    let index = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    Ok(CGroup { elements, index })
}

impl CGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CTuple] {
        &self.elements
    }

    pub fn contains(&self, t: &CTuple) -> bool {
        self.index.contains_key(t)
    }

    /// Elements fixed by componentwise conjugation with `m`.
    pub fn fixed_by(&self, m: &FieldMatrix) -> Result<Vec<CTuple>> {
        let m_inv = m.inverse()?;
        let mut fixed = Vec::new();
        for t in &self.elements {
            if t.conjugate_with(&m_inv, m) == *t {
                fixed.push(t.clone());
            }
        }
        Ok(fixed)
    }

    /// The set of all commutators, which for this group is the full derived
    /// subgroup.
    ///
    /// The quadratic sweep is avoided honestly: the pure-h tuples are first
    /// verified central by exhaustive products, after which commutators only
    /// depend on the f-parts, leaving one representative pair per f-part
    /// pair to exhaust.
    pub fn derived_subgroup(&self) -> Result<Vec<CTuple>> {
        let pure_h: Vec<&CTuple> = self
            .elements
            .iter()
            .filter(|t| (1..=4).all(|i| t.f(i).is_zero()))
            .collect();
        for k in &pure_h {
            for t in &self.elements {
                if k.mul(t) != t.mul(k) {
                    return Err(Error::Structural(
                        "a pure-h tuple fails to be central".into(),
                    ));
                }
            }
        }
        let mut reps: Vec<&CTuple> = Vec::new();
        let mut seen: HashMap<Vec<u8>, ()> = HashMap::new();
        for t in &self.elements {
            let mut key = Vec::with_capacity(64);
            for i in 1..=4 {
                key.extend_from_slice(t.f(i).flatten().entries());
            }
            if seen.insert(key, ()).is_none() {
                reps.push(t);
            }
        }
        let mut commutators: HashMap<CTuple, ()> = HashMap::new();
        for x in &reps {
            for y in &reps {
                let c = x.inverse().mul(&y.inverse()).mul(&x.mul(y));
                commutators.insert(c, ());
            }
        }
        let mut out: Vec<CTuple> = commutators.into_keys().collect();
        // Canonical order for deterministic downstream use.
        out.sort_by(|s, t| {
            let key = |u: &CTuple| {
                let mut k = Vec::with_capacity(80);
                for i in 1..=4 {
                    k.extend_from_slice(u.f(i).flatten().entries());
                }
                k.extend_from_slice(u.h().flatten().entries());
                k
            };
            key(s).cmp(&key(t))
        });
        Ok(out)
    }

    /// Recovers the common u with f_i = u alpha_i from the f1 component;
    /// `None` when the tuple is outside the alpha parametrization.
    pub fn u_of(t: &CTuple, alpha1: &crate::construction::ModuleHom) -> Option<FieldVector> {
        solve_combination(alpha1.rows(), &t.f(1).flatten())
    }

    /// Exact spectrum over the enumerated tuples.
    pub fn spectrum(&self) -> crate::group::Spectrum {
        let omega = self
            .elements
            .iter()
            .map(|t| crate::group::order_of(t, 9).expect("tuple orders divide 9"))
            .collect();
        crate::group::Spectrum::new(omega).expect("exhaustive order sets are divisor-closed")
    }
}

/// The linear action on the 16 d-coordinates induced by conjugation with a
/// block matrix whose first row and column are trivial (true for A, B, C
/// and anything in the group they generate).
pub fn d_action_matrix(g: &FieldMatrix) -> Result<FieldMatrix> {
    if g.dim() != 17 {
        return Err(Error::Shape(format!("dimension {} instead of 17", g.dim())));
    }
    if g.get(0, 0).value() != 1 {
        return Err(Error::Shape("top-left entry is not 1".into()));
    }
    for j in 1..17 {
        if !g.get(0, j).is_zero() {
            return Err(Error::Shape("first row carries d-blocks".into()));
        }
        if !g.get(j, 0).is_zero() {
            return Err(Error::Shape("first column is nontrivial".into()));
        }
    }
    Ok(g.submatrix(1, 1, 16))
}

/// Structural order computation for P: the d-space spans all sixteen
/// coordinates under the combined actions, the tuple group has 3^8
/// elements, and the two factors intersect trivially, giving
/// |P| = 3^16 * 3^8 = 3^24.
pub fn p_group_order(cgroup: &CGroup, big: &BigGenerators) -> Result<u64> {
    if cgroup.len() != 6561 {
        return Err(Error::Structural(format!(
            "tuple group has {} elements instead of 6561",
            cgroup.len()
        )));
    }
    let actions = [
        d_action_matrix(big.a())?,
        d_action_matrix(big.b())?,
        d_action_matrix(big.c())?,
    ];
    let seed = PElement::parse(big.d())
        .map_err(|_| Error::Structural("D does not have the P form".into()))?
        .d_coordinates();
    let span = crate::group::orbit_span(&seed, &actions);
    if span.len() != 16 {
        return Err(Error::Structural(format!(
            "d-space spans only {} of 16 dimensions",
            span.len()
        )));
    }
    let trivial_tuples = cgroup.elements().iter().filter(|t| t.is_identity()).count();
    if trivial_tuples != 1 {
        return Err(Error::Structural(
            "tuple group intersects the d-part nontrivially".into(),
        ));
    }
    Ok(3u64.pow(24))
}

/// Uniform sampler on P: d coordinates uniform, tuple uniform over the
/// enumerated 3^8 set. Exactly uniform given the verified product
/// decomposition.
pub struct PElementSampler<'a> {
    cgroup: &'a CGroup,
    rng: ChaCha8Rng,
}

impl<'a> PElementSampler<'a> {
    pub fn new(cgroup: &'a CGroup, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        PElementSampler { cgroup, rng }
    }

    pub fn sample(&mut self) -> PElement {
        let d: [FieldVector; 4] = std::array::from_fn(|_| {
            let entries: Vec<i64> = (0..4).map(|_| self.rng.random_range(0..3)).collect();
            FieldVector::new(&entries, P)
        });
        let tuple = self.cgroup.elements()[self.rng.random_range(0..self.cgroup.len())].clone();
        PElement::from_parts(d, tuple)
    }
}
