//! Generic finite matrix-group machinery: breadth-first closure
//! enumeration, element-order spectra, quotient spectra, orbit spans, and
//! seeded random-word sampling for groups too large to enumerate.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{row_reduce, span_dimension, FieldMatrix, FieldVector};

/// Minimal interface the closure/spectrum machinery needs from a group
/// element. Implemented by [`FieldMatrix`] and by the coordinate tuples of
/// the structured p-group.
pub trait GroupElement: Clone + Eq + std::hash::Hash {
    fn identity_like(&self) -> Self;
    fn compose(&self, other: &Self) -> Self;
    fn invert(&self) -> Self;
}

impl GroupElement for FieldMatrix {
    fn identity_like(&self) -> Self {
        FieldMatrix::identity(self.dim(), self.modulus())
    }

    fn compose(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn invert(&self) -> Self {
        self.inverse().expect("group element must be invertible")
    }
}

/// Least k >= 1 with `x^k` equal to the identity, by iterated composition.
pub fn order_of<T: GroupElement>(x: &T, bound: u64) -> Result<u64> {
    let id = x.identity_like();
    let mut acc = x.clone();
    for k in 1..=bound {
        if acc == id {
            return Ok(k);
        }
        acc = acc.compose(x);
    }
    Err(Error::OrderBoundExceeded { bound })
}

/// Breadth-first closure of the identity under right-multiplication by the
/// generators. The element set is independent of traversal order; the
/// returned vector records the (deterministic) discovery order.
pub fn bfs_closure<T: GroupElement>(generators: &[T], limit: usize) -> Result<Vec<T>> {
    assert!(!generators.is_empty(), "need at least one generator");
    let id = generators[0].identity_like();
    let mut index: HashMap<T, usize> = HashMap::new();
    let mut elements = vec![id.clone()];
    index.insert(id, 0);
    let mut next = 0;
    while next < elements.len() {
        let current = elements[next].clone();
        next += 1;
        for g in generators {
            let product = current.compose(g);
            if !index.contains_key(&product) {
                if elements.len() >= limit {
                    return Err(Error::EnumerationLimitExceeded {
                        limit,
                        partial: elements.len(),
                    });
                }
                index.insert(product.clone(), elements.len());
                elements.push(product);
            }
        }
    }
    Ok(elements)
}

/// A nonempty list of invertible matrices of common dimension and modulus,
/// with their precomputed inverses.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    generators: Vec<FieldMatrix>,
    inverses: Vec<FieldMatrix>,
    label: String,
}

impl GeneratorSet {
    pub fn new(generators: Vec<FieldMatrix>, label: &str) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidGenerators("empty generator list".into()));
        }
        let dim = generators[0].dim();
        let modulus = generators[0].modulus();
        let mut inverses = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.dim() != dim || g.modulus() != modulus {
                return Err(Error::InvalidGenerators(format!(
                    "generator {i} has mismatched dimension or modulus"
                )));
            }
            let inv = g
                .inverse()
                .map_err(|_| Error::InvalidGenerators(format!("generator {i} is singular")))?;
            inverses.push(inv);
        }
        Ok(GeneratorSet {
            generators,
            inverses,
            label: label.to_string(),
        })
    }

    pub fn generators(&self) -> &[FieldMatrix] {
        &self.generators
    }

    pub fn inverses(&self) -> &[FieldMatrix] {
        &self.inverses
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn modulus(&self) -> u8 {
        self.generators[0].modulus()
    }

    /// Group description file: a header line `"dim p"`, then the generator
    /// matrices in the plain matrix text format separated by blank lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.dim(), self.modulus());
        for g in &self.generators {
            out.push('\n');
            out.push_str(&g.to_text());
        }
        out
    }

    pub fn from_text(text: &str, label: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, message: "empty group file".into() })?;
        let mut parts = header.split_whitespace();
        let dim: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { line: 1, message: "expected header \"dim p\"".into() })?;
        let modulus: u8 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { line: 1, message: "expected header \"dim p\"".into() })?;
        let rest: Vec<&str> = lines.collect();
        let mut generators = Vec::new();
        let mut block = String::new();
        for line in rest.iter().chain(std::iter::once(&"")) {
            if line.trim().is_empty() {
                if !block.trim().is_empty() {
                    generators.push(FieldMatrix::from_text(&block)?);
                    block.clear();
                }
            } else {
                block.push_str(line);
                block.push('\n');
            }
        }
        for (i, g) in generators.iter().enumerate() {
            if g.dim() != dim || g.modulus() != modulus {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("generator {i} does not match the file header"),
                });
            }
        }
        GeneratorSet::new(generators, label)
    }
}

/// A fully enumerated finite matrix group, stored as a hashed element set.
#[derive(Debug, Clone)]
pub struct GroupEnumeration {
    elements: Vec<FieldMatrix>,
    index: HashMap<FieldMatrix, usize>,
    generators: GeneratorSet,
}

impl GroupEnumeration {
    /// Enumerates the full group generated by `generators` when its order is
    /// at most `limit`; otherwise fails carrying the partial count.
    pub fn close(generators: GeneratorSet, limit: usize) -> Result<Self> {
        let elements = bfs_closure(generators.generators(), limit)?;
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        Ok(GroupEnumeration {
            elements,
            index,
            generators,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &FieldMatrix) -> bool {
        self.index.contains_key(m)
    }

    pub fn elements(&self) -> &[FieldMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    /// Exact spectrum by computing every element's order.
    pub fn spectrum_exhaustive(&self) -> Spectrum {
        let bound = self.order() as u64;
        let omega: BTreeSet<u64> = self
            .elements
            .iter()
            .map(|m| m.order(bound).expect("order divides group order"))
            .collect();
        Spectrum::new(omega).expect("exhaustive order sets are divisor-closed")
    }

    /// Spectrum of the quotient by a central subgroup: the order of the
    /// coset xZ is the least n with x^n in Z.
    pub fn spectrum_mod_center(&self, center: &[FieldMatrix]) -> Result<Spectrum> {
        if center.is_empty() {
            return Err(Error::CenterNotCentral("center set is empty".into()));
        }
        let id = FieldMatrix::identity(self.generators.dim(), self.generators.modulus());
        if !center.contains(&id) {
            return Err(Error::CenterNotCentral("center does not contain identity".into()));
        }
        for z in center {
            if !self.contains(z) {
                return Err(Error::CenterNotCentral("center element outside group".into()));
            }
            for g in self.generators.generators() {
                if z.mul(g) != g.mul(z) {
                    return Err(Error::CenterNotCentral(
                        "center element does not commute with a generator".into(),
                    ));
                }
            }
            if !center.contains(&z.invert()) {
                return Err(Error::CenterNotCentral("center not closed under inverse".into()));
            }
            for w in center {
                if !center.contains(&z.mul(w)) {
                    return Err(Error::CenterNotCentral("center not closed under product".into()));
                }
            }
        }
        let bound = self.order() as u64;
        let mut omega = BTreeSet::new();
        for x in &self.elements {
            let mut acc = x.clone();
            let mut coset_order = None;
            for n in 1..=bound {
                if center.contains(&acc) {
                    coset_order = Some(n);
                    break;
                }
                acc = acc.mul(x);
            }
            omega.insert(coset_order.expect("coset order divides group order"));
        }
        Spectrum::new(omega)
    }
}

/// A divisor-closed set of element orders together with its maximal
/// elements under divisibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    omega: BTreeSet<u64>,
    mu: BTreeSet<u64>,
}

impl Spectrum {
    /// Validates that `omega` is divisor-closed and derives the maximal set.
    pub fn new(omega: BTreeSet<u64>) -> Result<Self> {
        let mu = mu_of(&omega)?;
        Ok(Spectrum { omega, mu })
    }

    /// Builds the full spectrum determined by a maximal set.
    pub fn from_maximal(mu: &BTreeSet<u64>) -> Self {
        let omega = divisor_closure(mu);
        let mu = mu_of(&omega).expect("closure is divisor-closed");
        Spectrum { omega, mu }
    }

    pub fn omega(&self) -> &BTreeSet<u64> {
        &self.omega
    }

    pub fn mu(&self) -> &BTreeSet<u64> {
        &self.mu
    }

    /// Two lines: sorted omega, then sorted mu.
    pub fn to_text(&self) -> String {
        let fmt = |s: &BTreeSet<u64>| {
            s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        };
        format!("{}\n{}\n", fmt(&self.omega), fmt(&self.mu))
    }
}

/// Union of the divisor sets of the entries.
pub fn divisor_closure(values: &BTreeSet<u64>) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for &v in values {
        assert!(v >= 1, "orders are positive");
        for d in 1..=v {
            if v % d == 0 {
                out.insert(d);
            }
        }
    }
    out
}

/// Maximal elements of a divisor-closed set under divisibility.
pub fn mu_of(omega: &BTreeSet<u64>) -> Result<BTreeSet<u64>> {
    for &v in omega {
        for d in 1..=v {
            if v % d == 0 && !omega.contains(&d) {
                return Err(Error::NotDivisorClosed { value: v, divisor: d });
            }
        }
    }
    Ok(omega
        .iter()
        .filter(|&&v| !omega.iter().any(|&w| w != v && w % v == 0))
        .copied()
        .collect())
}

fn word_step(gens: &GeneratorSet, rng: &mut ChaCha8Rng, acc: FieldMatrix) -> FieldMatrix {
    let k = gens.generators().len();
    let pick = rng.random_range(0..2 * k);
    if pick < k {
        acc.mul(&gens.generators()[pick])
    } else {
        acc.mul(&gens.inverses()[pick - k])
    }
}

/// Product of `word_length` uniformly chosen generators and inverses;
/// deterministic for a fixed seed.
pub fn random_element(gens: &GeneratorSet, word_length: usize, seed: u64) -> FieldMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = FieldMatrix::identity(gens.dim(), gens.modulus());
    for _ in 0..word_length {
        acc = word_step(gens, &mut rng, acc);
    }
    acc
}

/// Observed orders of sampled random words, as a multiset.
///
/// Each sample draws its own word length uniformly from 1..=`word_length`;
/// a fixed length would make low-order elements (short powers of single
/// generators, cancelling pairs) unreachable in practice. Work is split
/// into `workers` shards on independent seeded streams, so the result
/// depends only on (seed, workers), never on scheduling.
pub fn spectrum_sampled(
    gens: &GeneratorSet,
    samples: u64,
    word_length: usize,
    seed: u64,
    workers: usize,
) -> Result<BTreeMap<u64, u64>> {
    assert!(samples >= 1 && word_length >= 1 && workers >= 1);
    let shard_sizes: Vec<u64> = (0..workers as u64)
        .map(|w| samples / workers as u64 + u64::from(w < samples % workers as u64))
        .collect();
    let run_shard = |stream: u64, count: u64| -> Result<BTreeMap<u64, u64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut counts = BTreeMap::new();
        for _ in 0..count {
            let length = rng.random_range(1..=word_length);
            let mut acc = FieldMatrix::identity(gens.dim(), gens.modulus());
            for _ in 0..length {
                acc = word_step(gens, &mut rng, acc);
            }
            let order = acc.order(1000)?;
            *counts.entry(order).or_insert(0) += 1;
        }
        Ok(counts)
    };
    let shard_results: Vec<Result<BTreeMap<u64, u64>>> = if workers == 1 {
        vec![run_shard(0, shard_sizes[0])]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = shard_sizes
                .iter()
                .enumerate()
                .map(|(w, &count)| scope.spawn(move || run_shard(w as u64, count)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("shard panicked")).collect()
        })
    };
    let mut merged = BTreeMap::new();
    for shard in shard_results {
        for (order, count) in shard? {
            *merged.entry(order).or_insert(0) += count;
        }
    }
    Ok(merged)
}

/// Basis of the smallest subspace containing `seed` and closed under the
/// right action of every matrix in `action`.
pub fn orbit_span(seed: &FieldVector, action: &[FieldMatrix]) -> Vec<FieldVector> {
    if seed.is_zero() {
        return Vec::new();
    }
    let mut basis = vec![seed.clone()];
    let mut frontier = vec![seed.clone()];
    while let Some(v) = frontier.pop() {
        for g in action {
            let image = v.apply(g);
            if span_dimension(&basis) < {
                let mut ext = basis.clone();
                ext.push(image.clone());
                span_dimension(&ext)
            } {
                basis.push(image.clone());
                frontier.push(image);
            }
        }
    }
    let (reduced, _) = row_reduce(&basis);
    reduced
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u8 = 3;

    fn gen_a() -> FieldMatrix {
        FieldMatrix::from_rows(
            &[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, -1, -1, -1]],
            P,
        )
    }

    fn gen_b() -> FieldMatrix {
        FieldMatrix::from_rows(
            &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[-1, -1, -1, -1], &[0, 1, 0, 0]],
            P,
        )
    }

    fn frobenius() -> GroupEnumeration {
        let gens = GeneratorSet::new(vec![gen_a(), gen_b()], "F").unwrap();
        GroupEnumeration::close(gens, 100).unwrap()
    }

    /// Brute-force oracle: enumerate all words up to length 10 and compute
    /// orders by repeated multiplication, independent of the closure code.
    fn frobenius_orders_oracle() -> BTreeSet<u64> {
        let mut elements: BTreeSet<Vec<u8>> = BTreeSet::new();
        let mut frontier = vec![FieldMatrix::identity(4, P)];
        let flat = |m: &FieldMatrix| m.flatten().entries().to_vec();
        elements.insert(flat(&frontier[0]));
        for _ in 0..10 {
            let mut next = Vec::new();
            for x in &frontier {
                for g in [gen_a(), gen_b()] {
                    let y = x.mul(&g);
                    if elements.insert(flat(&y)) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        assert_eq!(elements.len(), 20);
        let mut orders = BTreeSet::new();
        for entries in &elements {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.iter().map(|&e| e as i64).collect()).collect();
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let m = FieldMatrix::from_rows(&refs, P);
            let mut acc = m.clone();
            let mut k = 1;
            while !acc.is_identity() {
                acc = acc.mul(&m);
                k += 1;
            }
            orders.insert(k);
        }
        orders
    }

    #[test]
    fn close_frobenius_order_20() {
        assert_eq!(frobenius().order(), 20);
    }

    #[test]
    fn close_trivial_group() {
        let gens = GeneratorSet::new(vec![FieldMatrix::identity(4, P)], "1").unwrap();
        assert_eq!(GroupEnumeration::close(gens, 10).unwrap().order(), 1);
    }

    #[test]
    fn close_limit_exceeded_carries_partial_count() {
        let gens = GeneratorSet::new(vec![gen_a(), gen_b()], "F").unwrap();
        match GroupEnumeration::close(gens, 7) {
            Err(Error::EnumerationLimitExceeded { limit: 7, partial }) => {
                assert!(partial >= 7);
            }
            other => panic!("expected limit error, got {other:?}"),
        }
    }

    #[test]
    fn close_is_idempotent() {
        let f = frobenius();
        let regen = GeneratorSet::new(f.elements().to_vec(), "F-all").unwrap();
        let again = GroupEnumeration::close(regen, 100).unwrap();
        let lhs: std::collections::HashSet<_> = f.elements().iter().cloned().collect();
        let rhs: std::collections::HashSet<_> = again.elements().iter().cloned().collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lagrange_on_nested_subgroups() {
        let f = frobenius();
        let sub = GroupEnumeration::close(GeneratorSet::new(vec![gen_a()], "<a>").unwrap(), 100).unwrap();
        assert_eq!(sub.order(), 5);
        assert_eq!(f.order() % sub.order(), 0);
        for x in sub.elements() {
            assert!(f.contains(x));
        }
    }

    #[test]
    fn spectrum_of_frobenius_matches_oracle() {
        // Frozen from the word-enumeration oracle below.
        let expected: BTreeSet<u64> = [1, 2, 4, 5].into_iter().collect();
        assert_eq!(frobenius_orders_oracle(), expected);
        let spectrum = frobenius().spectrum_exhaustive();
        assert_eq!(spectrum.omega(), &expected);
        let mu: BTreeSet<u64> = [4, 5].into_iter().collect();
        assert_eq!(spectrum.mu(), &mu);
    }

    #[test]
    fn spectrum_of_trivial_group() {
        let gens = GeneratorSet::new(vec![FieldMatrix::identity(4, P)], "1").unwrap();
        let g = GroupEnumeration::close(gens, 10).unwrap();
        let omega: BTreeSet<u64> = [1].into_iter().collect();
        assert_eq!(g.spectrum_exhaustive().omega(), &omega);
    }

    #[test]
    fn mod_center_with_trivial_center_is_plain_spectrum() {
        let f = frobenius();
        let z = vec![FieldMatrix::identity(4, P)];
        assert_eq!(f.spectrum_mod_center(&z).unwrap(), f.spectrum_exhaustive());
    }

    #[test]
    fn mod_center_full_cyclic_quotient_is_trivial() {
        let sub = GroupEnumeration::close(GeneratorSet::new(vec![gen_a()], "<a>").unwrap(), 100).unwrap();
        let z = sub.elements().to_vec();
        let spectrum = sub.spectrum_mod_center(&z).unwrap();
        let omega: BTreeSet<u64> = [1].into_iter().collect();
        assert_eq!(spectrum.omega(), &omega);
    }

    #[test]
    fn mod_center_rejects_non_central_sets() {
        let f = frobenius();
        // <a> is not central in F.
        let z = vec![FieldMatrix::identity(4, P), gen_a()];
        assert!(matches!(
            f.spectrum_mod_center(&z),
            Err(Error::CenterNotCentral(_))
        ));
    }

    #[test]
    fn divisor_closure_examples() {
        let s: BTreeSet<u64> = [5, 9, 12].into_iter().collect();
        let expected: BTreeSet<u64> = [1, 2, 3, 4, 5, 6, 9, 12].into_iter().collect();
        assert_eq!(divisor_closure(&s), expected);
        let one: BTreeSet<u64> = [1].into_iter().collect();
        assert_eq!(divisor_closure(&one), one);
        assert!(divisor_closure(&BTreeSet::new()).is_empty());
    }

    #[test]
    fn mu_examples() {
        let omega: BTreeSet<u64> = [1, 2, 3, 4, 5, 6, 9, 12].into_iter().collect();
        let mu: BTreeSet<u64> = [5, 9, 12].into_iter().collect();
        assert_eq!(mu_of(&omega).unwrap(), mu);
        let one: BTreeSet<u64> = [1].into_iter().collect();
        assert_eq!(mu_of(&one).unwrap(), one);
        let f_omega: BTreeSet<u64> = [1, 2, 4, 5].into_iter().collect();
        let f_mu: BTreeSet<u64> = [4, 5].into_iter().collect();
        assert_eq!(mu_of(&f_omega).unwrap(), f_mu);
        let open: BTreeSet<u64> = [1, 4].into_iter().collect();
        assert!(matches!(mu_of(&open), Err(Error::NotDivisorClosed { .. })));
    }

    #[test]
    fn mu_after_closure_recovers_antichains() {
        for antichain in [vec![5u64, 9, 12], vec![4, 5], vec![7], vec![6, 10, 15]] {
            let mu: BTreeSet<u64> = antichain.iter().copied().collect();
            let spectrum = Spectrum::from_maximal(&mu);
            assert_eq!(spectrum.mu(), &mu);
        }
    }

    #[test]
    fn random_element_is_deterministic() {
        let gens = GeneratorSet::new(vec![gen_a(), gen_b()], "F").unwrap();
        let x = random_element(&gens, 50, 7);
        let y = random_element(&gens, 50, 7);
        assert_eq!(x, y);
        let id_gens = GeneratorSet::new(vec![FieldMatrix::identity(4, P)], "1").unwrap();
        assert!(random_element(&id_gens, 50, 7).is_identity());
    }

    #[test]
    fn sampling_stays_inside_exhaustive_spectrum() {
        let f = frobenius();
        let omega = f.spectrum_exhaustive();
        let counts = spectrum_sampled(f.generators(), 1000, 16, 99, 1).unwrap();
        for order in counts.keys() {
            assert!(omega.omega().contains(order), "order {order} outside spectrum");
        }
        assert!(counts.contains_key(&5), "order 5 should be witnessed");
    }

    #[test]
    fn sampling_partition_is_deterministic_per_worker_count() {
        let f = frobenius();
        let a = spectrum_sampled(f.generators(), 500, 16, 3, 4).unwrap();
        let b = spectrum_sampled(f.generators(), 500, 16, 3, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn orbit_span_examples() {
        let v = FieldVector::new(&[1, 0, 0, 0], P);
        let span = orbit_span(&v, &[gen_a(), gen_b()]);
        assert_eq!(span.len(), 4);
        assert!(orbit_span(&FieldVector::zero(4, P), &[gen_a()]).is_empty());
        // vb = v, so the orbit under <b> alone is one-dimensional.
        assert_eq!(orbit_span(&v, &[gen_b()]).len(), 1);
    }

    #[test]
    fn group_file_roundtrip() {
        let gens = GeneratorSet::new(vec![gen_a(), gen_b()], "F").unwrap();
        let text = gens.to_text();
        let back = GeneratorSet::from_text(&text, "F").unwrap();
        assert_eq!(back.generators(), gens.generators());
        assert!(GeneratorSet::from_text("", "x").is_err());
        assert!(GeneratorSet::from_text("4 3\n\n2 3\n1 0\n0 1\n", "x").is_err());
    }
}
