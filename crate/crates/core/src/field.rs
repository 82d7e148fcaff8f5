//! Exact arithmetic over the prime field GF(p) and dense square matrices
//! over it.
//!
//! Everything above this module (group enumeration, the 17x17 construction,
//! the lemma verifiers) reduces to these kernels. Vectors are rows and
//! modules act on the right throughout: `x.apply(g)` computes `x * g`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest matrix dimension the kernels accept. The construction never
/// needs more than 20 (the padded block-unitriangular picture).
pub const MAX_DIM: usize = 32;

fn canonical(value: i64, modulus: u8) -> u8 {
    value.rem_euclid(modulus as i64) as u8
}

/// A residue in {0, .., p-1} together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    value: u8,
    modulus: u8,
}

impl FieldScalar {
    pub fn new(value: i64, modulus: u8) -> Self {
        assert!((2..=251).contains(&modulus), "modulus out of range");
        FieldScalar {
            value: canonical(value, modulus),
            modulus,
        }
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn modulus(self) -> u8 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, other: Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        Self::new(self.value as i64 + other.value as i64, self.modulus)
    }

    pub fn sub(self, other: Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        Self::new(self.value as i64 - other.value as i64, self.modulus)
    }

    pub fn mul(self, other: Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        Self::new(self.value as i64 * other.value as i64, self.modulus)
    }

    pub fn neg(self) -> Self {
        Self::new(-(self.value as i64), self.modulus)
    }

    /// Multiplicative inverse by Fermat's little theorem (p prime).
    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::Singular);
        }
        let mut acc: u64 = 1;
        let mut base = self.value as u64;
        let mut e = self.modulus as u64 - 2;
        let p = self.modulus as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Ok(Self::new(acc as i64, self.modulus))
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A row vector over GF(p) with immutable dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldVector {
    entries: Vec<u8>,
    modulus: u8,
}

impl FieldVector {
    pub fn new(entries: &[i64], modulus: u8) -> Self {
        FieldVector {
            entries: entries.iter().map(|&e| canonical(e, modulus)).collect(),
            modulus,
        }
    }

    pub fn zero(dim: usize, modulus: u8) -> Self {
        FieldVector {
            entries: vec![0; dim],
            modulus,
        }
    }

    pub fn unit(dim: usize, index: usize, modulus: u8) -> Self {
        let mut v = Self::zero(dim, modulus);
        v.entries[index] = 1 % modulus;
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn modulus(&self) -> u8 {
        self.modulus
    }

    pub fn get(&self, i: usize) -> FieldScalar {
        FieldScalar::new(self.entries[i] as i64, self.modulus)
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        assert_eq!(self.modulus, other.modulus);
        let p = self.modulus as u16;
        FieldVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&x, &y)| ((x as u16 + y as u16) % p) as u8)
                .collect(),
            modulus: self.modulus,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let p = self.modulus;
        FieldVector {
            entries: self.entries.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect(),
            modulus: p,
        }
    }

    pub fn scale(&self, by: FieldScalar) -> Self {
        assert_eq!(self.modulus, by.modulus());
        let p = self.modulus as u32;
        FieldVector {
            entries: self
                .entries
                .iter()
                .map(|&x| (x as u32 * by.value() as u32 % p) as u8)
                .collect(),
            modulus: self.modulus,
        }
    }

    /// Right action: `self * m`.
    pub fn apply(&self, m: &FieldMatrix) -> Self {
        assert_eq!(self.dim(), m.dim(), "vector/matrix dimension mismatch");
        assert_eq!(self.modulus, m.modulus());
        let n = self.dim();
        let p = self.modulus as u32;
        let mut acc = vec![0u32; n];
        for (k, &xk) in self.entries.iter().enumerate() {
            if xk == 0 {
                continue;
            }
            let row = m.row_slice(k);
            for j in 0..n {
                acc[j] += xk as u32 * row[j] as u32;
            }
        }
        FieldVector {
            entries: acc.iter().map(|&v| (v % p) as u8).collect(),
            modulus: self.modulus,
        }
    }

    /// Concatenates several vectors into one long row.
    pub fn concat(parts: &[&FieldVector]) -> Self {
        let modulus = parts[0].modulus;
        let mut entries = Vec::new();
        for part in parts {
            assert_eq!(part.modulus, modulus);
            entries.extend_from_slice(&part.entries);
        }
        FieldVector { entries, modulus }
    }

    pub fn segment(&self, start: usize, len: usize) -> FieldVector {
        FieldVector {
            entries: self.entries[start..start + len].to_vec(),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for FieldVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A dense square matrix over GF(p), stored row-major with canonical
/// residues. Equality and hashing are entrywise, which is what makes the
/// hashed closure enumeration work.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    dim: usize,
    modulus: u8,
    entries: Vec<u8>,
}

impl FieldMatrix {
    pub fn from_rows(rows: &[&[i64]], modulus: u8) -> Self {
        let n = rows.len();
        assert!(n <= MAX_DIM, "dimension above supported maximum");
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            entries.extend(row.iter().map(|&e| canonical(e, modulus)));
        }
        FieldMatrix {
            dim: n,
            modulus,
            entries,
        }
    }

    pub fn zero(dim: usize, modulus: u8) -> Self {
        assert!(dim <= MAX_DIM);
        FieldMatrix {
            dim,
            modulus,
            entries: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize, modulus: u8) -> Self {
        let mut m = Self::zero(dim, modulus);
        for i in 0..dim {
            m.entries[i * dim + i] = 1 % modulus;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u8 {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> FieldScalar {
        FieldScalar::new(self.entries[i * self.dim + j] as i64, self.modulus)
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.entries[i * self.dim + j] = canonical(value, self.modulus);
    }

    fn row_slice(&self, i: usize) -> &[u8] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row(&self, i: usize) -> FieldVector {
        FieldVector {
            entries: self.row_slice(i).to_vec(),
            modulus: self.modulus,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim, self.modulus)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Flattens the matrix into a single row vector (row-major).
    pub fn flatten(&self) -> FieldVector {
        FieldVector {
            entries: self.entries.clone(),
            modulus: self.modulus,
        }
    }

    pub fn from_flat(v: &FieldVector, dim: usize) -> Self {
        assert_eq!(v.dim(), dim * dim);
        FieldMatrix {
            dim,
            modulus: v.modulus(),
            entries: v.entries().to_vec(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    /// Exact product mod p.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul(other))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        assert_eq!(self.modulus, other.modulus, "matrix modulus mismatch");
        let n = self.dim;
        let p = self.modulus as u32;
        let mut out = vec![0u8; n * n];
        let mut acc = [0u32; MAX_DIM];
        for i in 0..n {
            acc[..n].fill(0);
            for k in 0..n {
                let aik = self.entries[i * n + k] as u32;
                if aik == 0 {
                    continue;
                }
                let brow = &other.entries[k * n..k * n + n];
                for j in 0..n {
                    acc[j] += aik * brow[j] as u32;
                }
            }
            for j in 0..n {
                out[i * n + j] = (acc[j] % p) as u8;
            }
        }
        FieldMatrix {
            dim: n,
            modulus: self.modulus,
            entries: out,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.modulus, other.modulus);
        let p = self.modulus as u16;
        FieldMatrix {
            dim: self.dim,
            modulus: self.modulus,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&x, &y)| ((x as u16 + y as u16) % p) as u8)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let p = self.modulus;
        FieldMatrix {
            dim: self.dim,
            modulus: p,
            entries: self.entries.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect(),
        }
    }

    /// `self^k` by repeated squaring; `k = 0` gives the identity.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut result = Self::identity(self.dim, self.modulus);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    /// Inverse by Gauss-Jordan elimination; `Err(Singular)` when none exists.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let p = self.modulus as i64;
        let mut a: Vec<i64> = self.entries.iter().map(|&e| e as i64).collect();
        let mut inv: Vec<i64> = Self::identity(n, self.modulus)
            .entries
            .iter()
            .map(|&e| e as i64)
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r * n + col] % p != 0).ok_or(Error::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                    inv.swap(col * n + j, pivot * n + j);
                }
            }
            let scale = FieldScalar::new(a[col * n + col], self.modulus).inv()?.value() as i64;
            for j in 0..n {
                a[col * n + j] = a[col * n + j] * scale % p;
                inv[col * n + j] = inv[col * n + j] * scale % p;
            }
            for r in 0..n {
                if r != col && a[r * n + col] % p != 0 {
                    let f = a[r * n + col] % p;
                    for j in 0..n {
                        a[r * n + j] = (a[r * n + j] - f * a[col * n + j]).rem_euclid(p);
                        inv[r * n + j] = (inv[r * n + j] - f * inv[col * n + j]).rem_euclid(p);
                    }
                }
            }
        }
        Ok(FieldMatrix {
            dim: n,
            modulus: self.modulus,
            entries: inv.iter().map(|&e| e as u8).collect(),
        })
    }

    /// Least k >= 1 with `self^k = I`, found by iterated multiplication.
    /// Fails past `bound`, which signals a non-invertible input or a bound
    /// chosen too small.
    pub fn order(&self, bound: u64) -> Result<u64> {
        let id = Self::identity(self.dim, self.modulus);
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc == id {
                return Ok(k);
            }
            acc = acc.mul(self);
        }
        Err(Error::OrderBoundExceeded { bound })
    }

    /// Conjugate `g^-1 * self * g`, the right conjugation action used for
    /// module structures on matrix spaces.
    pub fn conjugate_by(&self, g: &FieldMatrix) -> Result<Self> {
        Ok(g.inverse()?.mul(self).mul(g))
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zero(n, self.modulus);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, size: usize) -> FieldMatrix {
        let mut out = Self::zero(size, self.modulus);
        for i in 0..size {
            for j in 0..size {
                out.entries[i * size + j] = self.entries[(r0 + i) * self.dim + c0 + j];
            }
        }
        out
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, block: &FieldMatrix) {
        assert_eq!(self.modulus, block.modulus);
        for i in 0..block.dim {
            for j in 0..block.dim {
                self.entries[(r0 + i) * self.dim + c0 + j] = block.entries[i * block.dim + j];
            }
        }
    }

    pub fn row_segment(&self, i: usize, c0: usize, len: usize) -> FieldVector {
        FieldVector {
            entries: self.entries[i * self.dim + c0..i * self.dim + c0 + len].to_vec(),
            modulus: self.modulus,
        }
    }

    pub fn set_row_segment(&mut self, i: usize, c0: usize, v: &FieldVector) {
        assert_eq!(self.modulus, v.modulus());
        self.entries[i * self.dim + c0..i * self.dim + c0 + v.dim()]
            .copy_from_slice(v.entries());
    }

    /// Canonical plain-text form: a header line `"n p"`, then n lines of n
    /// space-separated residues. Round-trips bit-exactly through
    /// [`FieldMatrix::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.dim, self.modulus);
        for i in 0..self.dim {
            let row: Vec<String> = self.row_slice(i).iter().map(|e| e.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Like [`to_text`](Self::to_text) but prints residues above p/2 as
    /// negative, for visual diffing of displays written with -1's.
    pub fn to_text_symmetric(&self) -> String {
        let half = self.modulus / 2;
        let mut out = format!("{} {}\n", self.dim, self.modulus);
        for i in 0..self.dim {
            let row: Vec<String> = self
                .row_slice(i)
                .iter()
                .map(|&e| {
                    if e > half {
                        format!("{}", e as i16 - self.modulus as i16)
                    } else {
                        e.to_string()
                    }
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (lineno, header) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, message: "empty matrix text".into() })?;
        let mut parts = header.split_whitespace();
        let parse_err = |line: usize, message: &str| Error::Parse {
            line: line + 1,
            message: message.to_string(),
        };
        let dim: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(lineno, "expected header \"n p\""))?;
        let modulus: u8 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(lineno, "expected header \"n p\""))?;
        if parts.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens in header"));
        }
        if dim == 0 || dim > MAX_DIM || !(2..=251).contains(&modulus) {
            return Err(parse_err(lineno, "header out of range"));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for _ in 0..dim {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, "unexpected end of matrix text"))?;
            let row: std::result::Result<Vec<i64>, _> =
                line.split_whitespace().map(|t| t.parse::<i64>()).collect();
            let row = row.map_err(|_| parse_err(lineno, "non-integer entry"))?;
            if row.len() != dim {
                return Err(parse_err(lineno, "wrong row length"));
            }
            entries.extend(row.iter().map(|&e| canonical(e, modulus)));
        }
        Ok(FieldMatrix { dim, modulus, entries })
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Reduced row echelon form of the given rows. Returns the nonzero reduced
/// rows (a canonical basis of the row span) and the rank.
pub fn row_reduce(rows: &[FieldVector]) -> (Vec<FieldVector>, usize) {
    if rows.is_empty() {
        return (Vec::new(), 0);
    }
    let width = rows[0].dim();
    let mut work: Vec<FieldVector> = rows.to_vec();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..work.len()).find(|&r| !work[r].get(col).is_zero()) else {
            continue;
        };
        work.swap(rank, pivot);
        let inv = work[rank].get(col).inv().expect("pivot nonzero");
        work[rank] = work[rank].scale(inv);
        for r in 0..work.len() {
            if r != rank && !work[r].get(col).is_zero() {
                let f = work[r].get(col);
                work[r] = work[r].sub(&work[rank].scale(f));
            }
        }
        rank += 1;
        if rank == work.len() {
            break;
        }
    }
    work.truncate(rank);
    (work, rank)
}

/// Rank of the span of the given row vectors.
pub fn span_dimension(vectors: &[FieldVector]) -> usize {
    row_reduce(vectors).1
}

/// Whether `v` lies in the row span of `basis`.
pub fn in_span(basis: &[FieldVector], v: &FieldVector) -> bool {
    let (_, r0) = row_reduce(basis);
    let mut extended = basis.to_vec();
    extended.push(v.clone());
    let (_, r1) = row_reduce(&extended);
    r0 == r1
}

/// Canonical basis of the right null space `{x : x m = 0}` (row-vector
/// convention: the kernel of the right action of `m`).
pub fn kernel_basis(m: &FieldMatrix) -> Vec<FieldVector> {
    // x m = 0  <=>  m^T x^T = 0; eliminate on m^T and read off free variables.
    let n = m.dim();
    let p = m.modulus();
    let mt = m.transpose();
    let mut work: Vec<FieldVector> = (0..n).map(|i| mt.row(i)).collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| !work[r].get(col).is_zero()) else {
            continue;
        };
        work.swap(rank, pivot);
        let inv = work[rank].get(col).inv().expect("pivot nonzero");
        work[rank] = work[rank].scale(inv);
        for r in 0..n {
            if r != rank && !work[r].get(col).is_zero() {
                let f = work[r].get(col);
                work[r] = work[r].sub(&work[rank].scale(f));
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = FieldVector::zero(n, p);
        v.entries[free] = 1;
        for (col, &pr) in pivot_of_col.iter().enumerate() {
            if let Some(pr) = pr {
                v.entries[col] = work[pr].get(free).neg().value();
            }
        }
        basis.push(v);
    }
    basis
}

/// Solves `x * rows = target` where `rows` are stacked as the matrix rows,
/// i.e. finds coefficients expressing `target` as a combination of `rows`.
/// Returns `None` when `target` is outside the span.
pub fn solve_combination(rows: &[FieldVector], target: &FieldVector) -> Option<FieldVector> {
    let m = rows.len();
    let width = target.dim();
    let p = target.modulus();
    // Augment each row with the standard basis vector tracking coefficients.
    let mut work: Vec<(FieldVector, FieldVector)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), FieldVector::unit(m, i, p)))
        .collect();
    let mut t = target.clone();
    let mut tc = FieldVector::zero(m, p);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..m).find(|&r| !work[r].0.get(col).is_zero()) else {
            continue;
        };
        work.swap(rank, pivot);
        let inv = work[rank].0.get(col).inv().expect("pivot nonzero");
        work[rank].0 = work[rank].0.scale(inv);
        work[rank].1 = work[rank].1.scale(inv);
        for r in 0..m {
            if r != rank && !work[r].0.get(col).is_zero() {
                let f = work[r].0.get(col);
                work[r].0 = work[r].0.sub(&work[rank].0.scale(f));
                work[r].1 = work[r].1.sub(&work[rank].1.scale(f));
            }
        }
        if !t.get(col).is_zero() {
            let f = t.get(col);
            t = t.sub(&work[rank].0.scale(f));
            tc = tc.add(&work[rank].1.scale(f));
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    if t.is_zero() {
        Some(tc)
    } else {
        None
    }
}
