//! One verifier per structural claim behind the isospectrality statement.
//!
//! Every verifier produces a [`CheckResult`] with witnesses and, on
//! failure, a counterexample. Verification-level failures are ordinary
//! `Ok(fail)` results; an `Err` from these functions means the environment
//! or configuration is unusable (enumeration limits, unreadable inputs),
//! which callers report separately from a failed verification.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::construction::{
    centralizer_in_module, conjugation_identity_failures, diag_embed, BigGenerators,
    FrobeniusPair, ModuleHom, P,
};
use crate::error::{Error, Result};
use crate::exterior::ExteriorSquare;
use crate::field::{
    in_span, kernel_basis, row_reduce, span_dimension, FieldMatrix, FieldVector,
};
use crate::group::{spectrum_sampled, GeneratorSet, GroupEnumeration};
use crate::pgroup::{
    d_action_matrix, enumerate_c_group, p_group_order, CGroup, PElement, PElementSampler,
    UnitriangularBlocks,
};
use crate::sp43;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// Outcome of one verifier run: name, status, printable witnesses, the
/// first counterexample on failure, the number of cases examined, and the
/// seed the verifier consumed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub witnesses: Vec<String>,
    pub counterexample: Option<String>,
    pub samples_used: u64,
    pub seed: u64,
    pub millis: u64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Accumulates witnesses and the first failure while a verifier runs.
struct Checker {
    name: &'static str,
    witnesses: Vec<String>,
    counterexample: Option<String>,
    samples: u64,
    seed: u64,
    start: Instant,
}

impl Checker {
    fn new(name: &'static str, seed: u64) -> Self {
        Checker {
            name,
            witnesses: Vec::new(),
            counterexample: None,
            samples: 0,
            seed,
            start: Instant::now(),
        }
    }

    fn require(&mut self, condition: bool, message: impl FnOnce() -> String) {
        if !condition && self.counterexample.is_none() {
            self.counterexample = Some(message());
        }
    }

    fn failed(&self) -> bool {
        self.counterexample.is_some()
    }

    fn witness(&mut self, text: impl Into<String>) {
        self.witnesses.push(text.into());
    }

    fn count(&mut self, samples: u64) {
        self.samples += samples;
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name.to_string(),
            status: if self.counterexample.is_none() {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            witnesses: self.witnesses,
            counterexample: self.counterexample,
            samples_used: self.samples,
            seed: self.seed,
            millis: self.start.elapsed().as_millis() as u64,
        }
    }
}

/// Per-check seed derivation: FNV-1a over the check name folded into the
/// master seed, finished with a splitmix round.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in label.bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = h ^ master;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Knobs shared by the verifiers; mirrored from the tool configuration.
#[derive(Debug, Clone)]
pub struct VerifyParams {
    pub lemma_samples: u64,
    pub spectrum_samples: u64,
    pub word_length: usize,
    pub workers: usize,
    pub seed: u64,
    pub limit: usize,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            lemma_samples: 10_000,
            spectrum_samples: 100_000,
            word_length: 64,
            workers: 1,
            seed: 1,
            limit: 60_000,
        }
    }
}

/// The constructed objects every verifier works against. The Frobenius pair
/// and everything derived from it always come from the built-in literals;
/// the 17x17 generators may be overridden from a group description file, in
/// which case the structural checks compare them against the construction.
pub struct VerifyContext {
    pub fp: FrobeniusPair,
    pub big: BigGenerators,
    pub alphas: Vec<ModuleHom>,
    pub f_group: GroupEnumeration,
    pub cgroup: CGroup,
}

impl VerifyContext {
    pub fn build(big_override: Option<Vec<FieldMatrix>>) -> Result<Self> {
        let fp = FrobeniusPair::build();
        let big = match big_override {
            Some(mats) => BigGenerators::from_matrices(mats)?,
            None => BigGenerators::build(&fp),
        };
        Self::from_parts(fp, big)
    }

    pub fn from_parts(fp: FrobeniusPair, big: BigGenerators) -> Result<Self> {
        let alphas = (1..=4)
            .map(|i| ModuleHom::build_alpha(i, &fp))
            .collect::<Result<Vec<_>>>()?;
        let f_group = fp.enumerate()?;
        let cgroup = enumerate_c_group(&fp)?;
        Ok(VerifyContext {
            fp,
            big,
            alphas,
            f_group,
            cgroup,
        })
    }
}

/// The commutator pairing on V coordinates:
/// phi(u, u') = u a1 * u' a4 - u' a1 * u a4 + u a3 * u' a2 - u' a3 * u a2.
pub fn phi(alphas: &[ModuleHom], u: &FieldVector, v: &FieldVector) -> FieldMatrix {
    let ap = |i: usize, x: &FieldVector| alphas[i - 1].apply(x);
    ap(1, u)
        .mul(&ap(4, v))
        .sub(&ap(1, v).mul(&ap(4, u)))
        .add(&ap(3, u).mul(&ap(2, v)))
        .sub(&ap(3, v).mul(&ap(2, u)))
}

/// The quadratic form psi(u) = u a1 * u a4 + u a3 * u a2 on the b^2-fixed
/// subspace.
pub fn psi(alphas: &[ModuleHom], u: &FieldVector) -> FieldMatrix {
    let ap = |i: usize, x: &FieldVector| alphas[i - 1].apply(x);
    ap(1, u).mul(&ap(4, u)).add(&ap(3, u).mul(&ap(2, u)))
}

fn all_v_coordinates() -> Vec<FieldVector> {
    (0..81)
        .map(|i| {
            FieldVector::new(
                &[
                    (i / 27 % 3) as i64,
                    (i / 9 % 3) as i64,
                    (i / 3 % 3) as i64,
                    (i % 3) as i64,
                ],
                P,
            )
        })
        .collect()
}

/// All vectors in the span of a basis (3^k of them; used for k <= 2).
fn span_elements(basis: &[FieldVector]) -> Vec<FieldVector> {
    let mut out = vec![FieldVector::zero(basis[0].dim(), P)];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * 3);
        for coeff in 0..3i64 {
            for v in &out {
                next.push(v.add(&b.scale(crate::field::FieldScalar::new(coeff, P))));
            }
        }
        out = next;
    }
    out
}

// ---------------------------------------------------------------------------
// individual verifiers
// ---------------------------------------------------------------------------

/// Defining relations of the Frobenius pair, simplicity of V, and the fixed
/// spaces of a and b^2.
pub fn check_frobenius(fp: &FrobeniusPair, master_seed: u64) -> Result<CheckResult> {
    let mut c = Checker::new("frobenius", derive_seed(master_seed, "frobenius"));
    match fp.check_invariants() {
        Ok(()) => c.witness("a^5 = b^4 = 1, a^b = a^2, 1 + a + a^2 + a^3 + a^4 = 0"),
        Err(e) => c.require(false, || e.to_string()),
    }
    c.require(fp.a().get(3, 0).value() == 2, || {
        format!("a entry (4,1) is {}, expected 2", fp.a().get(3, 0).value())
    });
    let v = FieldVector::unit(4, 0, P);
    let orbit = crate::group::orbit_span(&v, &[fp.a().clone(), fp.b().clone()]);
    c.require(orbit.len() == 4, || {
        format!("orbit of v spans {} dimensions instead of 4", orbit.len())
    });
    c.witness("orbit of v under {a, b} spans all of V");
    let fixed_b2 = centralizer_in_module(&fp.b().pow(2));
    c.require(fixed_b2.len() == 2, || {
        format!("fixed space of b^2 has dimension {}", fixed_b2.len())
    });
    c.require(
        in_span(&fixed_b2, &FieldVector::new(&[1, 0, 0, 0], P))
            && in_span(&fixed_b2, &FieldVector::new(&[0, 0, 1, 1], P)),
        || "fixed space of b^2 is not spanned by v and va^2 + va^3".to_string(),
    );
    c.witness("C_V(b^2) = <v, va^2 + va^3>");
    let fixed_a = centralizer_in_module(fp.a());
    c.require(fixed_a.is_empty(), || {
        format!("a has a {}-dimensional fixed space on V", fixed_a.len())
    });
    c.witness("a acts fixed-point freely on V");
    c.count(9);
    Ok(c.finish())
}

/// The twelve conjugation identities, each verified as two equalities.
pub fn check_conjugation_identities(fp: &FrobeniusPair, master_seed: u64) -> Result<CheckResult> {
    let mut c = Checker::new(
        "conjugation-identities",
        derive_seed(master_seed, "conjugation-identities"),
    );
    let failures = conjugation_identity_failures(fp.a(), fp.b());
    c.require(failures.is_empty(), || failures.join("; "));
    c.witness("all 24 equalities of the conjugation table hold");
    c.count(24);
    Ok(c.finish())
}

fn first_difference(label: &str, got: &FieldMatrix, expected: &FieldMatrix) -> Option<String> {
    if got == expected {
        return None;
    }
    for i in 0..got.dim() {
        for j in 0..got.dim() {
            if got.get(i, j) != expected.get(i, j) {
                return Some(format!(
                    "{label} differs from the construction at entry ({},{}): {} instead of {}",
                    i + 1,
                    j + 1,
                    got.get(i, j).value(),
                    expected.get(i, j).value()
                ));
            }
        }
    }
    Some(format!("{label} differs in shape"))
}

/// Block structure and orders of the 17x17 generators, and the closure of
/// the block-diagonal pair back to the 20-element Frobenius group.
pub fn check_big_generators(ctx: &VerifyContext, master_seed: u64) -> Result<CheckResult> {
    let mut c = Checker::new("big-generators", derive_seed(master_seed, "big-generators"));
    let built = BigGenerators::build(&ctx.fp);
    for (label, got, expected) in [
        ("A", ctx.big.a(), built.a()),
        ("B", ctx.big.b(), built.b()),
        ("C", ctx.big.c(), built.c()),
        ("D", ctx.big.d(), built.d()),
    ] {
        if let Some(diff) = first_difference(label, got, expected) {
            c.require(false, || diff);
        }
    }
    c.witness("A, B, C, D match the block construction entrywise");
    for (label, m, expected) in [
        ("A", ctx.big.a(), 5u64),
        ("B", ctx.big.b(), 4),
        ("C", ctx.big.c(), 3),
        ("D", ctx.big.d(), 3),
    ] {
        match m.order(20) {
            Ok(order) => c.require(order == expected, || {
                format!("{label} has order {order}, expected {expected}")
            }),
            Err(e) => c.require(false, || format!("{label}: {e}")),
        }
    }
    c.require(!ctx.big.d().pow(2).is_identity(), || "D^2 = 1".to_string());
    c.witness("orders: |A| = 5, |B| = 4, |C| = 3, |D| = 3");
    let gens = GeneratorSet::new(vec![ctx.big.a().clone(), ctx.big.b().clone()], "F17")?;
    match GroupEnumeration::close(gens, 40) {
        Ok(f17) => {
            c.require(f17.order() == 20, || {
                format!("<A, B> has order {}, expected 20", f17.order())
            });
            let all_embedded = ctx
                .f_group
                .elements()
                .iter()
                .all(|m| f17.contains(&diag_embed(m)));
            c.require(all_embedded, || {
                "<A, B> is not the block-diagonal copy of F".to_string()
            });
            c.witness("<A, B> is the block-diagonal copy of F, order 20");
        }
        Err(e) => c.require(false, || format!("<A, B> closure failed: {e}")),
    }
    c.count(20);
    Ok(c.finish())
}

/// Extension conditions for every nonzero element of the span of b, b^2,
/// b^3, the module-homomorphism property of the four induced maps, and the
/// (informational) dimension of the full solution space of the conditions.
pub fn check_module_hom(ctx: &VerifyContext, master_seed: u64) -> Result<CheckResult> {
    let mut c = Checker::new("module-hom", derive_seed(master_seed, "module-hom"));
    let fp = &ctx.fp;
    let powers = [fp.b().clone(), fp.b().pow(2), fp.b().pow(3)];
    let mut checked = 0u64;
    for l1 in 0..3i64 {
        for l2 in 0..3i64 {
            for l3 in 0..3i64 {
                if (l1, l2, l3) == (0, 0, 0) {
                    continue;
                }
                let scale = |m: &FieldMatrix, s: i64| -> FieldMatrix {
                    match s {
                        0 => FieldMatrix::zero(4, P),
                        1 => m.clone(),
                        _ => m.add(m),
                    }
                };
                let m = scale(&powers[0], l1)
                    .add(&scale(&powers[1], l2))
                    .add(&scale(&powers[2], l3));
                let fixed = m.conjugate_by(fp.b()).map(|cb| cb == m).unwrap_or(false);
                c.require(fixed, || {
                    format!("m = {l1}b + {l2}b^2 + {l3}b^3 is not fixed by b-conjugation")
                });
                let mut sum = FieldMatrix::zero(4, P);
                for k in 0..5 {
                    sum = sum.add(&m.conjugate_by(&fp.a().pow(k)).expect("a invertible"));
                }
                c.require(sum.is_zero(), || {
                    format!("sum of a-conjugates of {l1}b + {l2}b^2 + {l3}b^3 is nonzero")
                });
                checked += 1;
            }
        }
    }
    c.require(checked == 26, || format!("checked {checked} of 26 span elements"));
    c.witness("all 26 nonzero elements of <b, b^2, b^3> satisfy both conditions");
    for alpha in &ctx.alphas {
        let failures = alpha.action_commutation_failures(fp);
        c.require(failures.is_empty(), || failures.join("; "));
    }
    c.witness("alpha_1..alpha_4 commute with the actions of a and b");
    // Informational only: dimension of the full solution space of the two
    // linear conditions on 4x4 matrices. Dimension 3 means the converse of
    // the extension criterion also holds; this is recorded, not asserted.
    let mut condition_rows = Vec::new();
    for idx in 0..16 {
        let mut basis_m = FieldMatrix::zero(4, P);
        basis_m.set(idx / 4, idx % 4, 1);
        let fixed_part = basis_m.conjugate_by(fp.b()).expect("b invertible").sub(&basis_m);
        let mut sum = FieldMatrix::zero(4, P);
        for k in 0..5 {
            sum = sum.add(&basis_m.conjugate_by(&fp.a().pow(k)).expect("a invertible"));
        }
        condition_rows.push(FieldVector::concat(&[&fixed_part.flatten(), &sum.flatten()]));
    }
    let solution_dim = 16 - span_dimension(&condition_rows);
    c.witness(format!(
        "informational: solution space of the two conditions has dimension {solution_dim}\
         {}",
        if solution_dim == 3 { " (equals the span, so the converse holds)" } else { "" }
    ));
    c.count(26 + 32);
    Ok(c.finish())
}

/// The wedge square decomposition: the 2-dimensional invariant subspace
/// with its exact action equalities, and the 4-dimensional quotient with a
/// fixed-point-free action of a.
pub fn check_exterior_square(fp: &FrobeniusPair, master_seed: u64) -> Result<CheckResult> {
    let mut c = Checker::new(
        "exterior-square",
        derive_seed(master_seed, "exterior-square"),
    );
    let ext = ExteriorSquare::build(fp);
    c.require(ext.dim() == 6, || "wedge square is not 6-dimensional".to_string());
    c.witness("dim of the wedge square is 6");
    let pairs: [(&str, FieldVector, FieldVector); 4] = [
        ("u1 a = u1", ext.u1().apply(ext.action_a()), ext.u1().clone()),
        ("u1 b = u2", ext.u1().apply(ext.action_b()), ext.u2().clone()),
        ("u2 a = u2", ext.u2().apply(ext.action_a()), ext.u2().clone()),
        ("u2 b = -u1", ext.u2().apply(ext.action_b()), ext.u1().neg()),
    ];
    for (label, got, expected) in pairs {
        c.require(got == expected, || format!("{label} fails: got {got}"));
    }
    c.witness("u1 a = u1, u1 b = u2, u2 a = u2, u2 b = -u1");
    let udim = span_dimension(&[ext.u1().clone(), ext.u2().clone()]);
    c.require(udim == 2, || format!("U has dimension {udim}, expected 2"));
    match ext.quotient_actions() {
        Ok((qa, qb)) => {
            let fixed = centralizer_in_module(&qa);
            c.require(fixed.is_empty(), || {
                format!("a fixes a {}-dimensional subspace of the quotient", fixed.len())
            });
            c.require(qa.pow(5).is_identity(), || "quotient action of a has wrong order".into());
            c.require(qb.pow(4).is_identity(), || "quotient action of b has wrong order".into());
            let conj = qa.conjugate_by(&qb).map(|m| m == qa.pow(2)).unwrap_or(false);
            c.require(conj, || "quotient actions do not satisfy a^b = a^2".into());
            c.witness("quotient is 4-dimensional, a-fixed-point-free, with the F relations");
        }
        Err(e) => c.require(false, || e.to_string()),
    }
    c.count(4 + 36);
    Ok(c.finish())
}

/// The order-9 criterion for block-unitriangular matrices over the 4x4
/// matrix ring: ninth powers are trivial, the cube has exactly the three
/// formula blocks, and the order drops below 9 precisely when all three
/// vanish. Both branches of the equivalence must occur among the samples.
pub fn check_unitriangular(samples: u64, master_seed: u64) -> Result<CheckResult> {
    check_unitriangular_with(samples, master_seed, 1)
}

/// `zero_weight` out of 4 is the probability of drawing a zero block; the
/// default mix guarantees both order branches occur. A weight of 0 makes
/// the short-order branch unreachable in practice, which the verifier must
/// report as insufficient coverage.
pub fn check_unitriangular_with(
    samples: u64,
    master_seed: u64,
    zero_weight: u32,
) -> Result<CheckResult> {
    let seed = derive_seed(master_seed, "unitriangular");
    let mut c = Checker::new("unitriangular", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_block = |rng: &mut ChaCha8Rng| -> FieldMatrix {
        if rng.random_range(0..4) < zero_weight {
            return FieldMatrix::zero(4, P);
        }
        let mut m = FieldMatrix::zero(4, P);
        for i in 0..4 {
            for j in 0..4 {
                m.set(i, j, rng.random_range(0..3));
            }
        }
        m
    };
    let identity20 = FieldMatrix::identity(20, P);
    let mut low_branch = 0u64;
    let mut high_branch = 0u64;
    for _ in 0..samples {
        let blocks = UnitriangularBlocks {
            x: std::array::from_fn(|_| random_block(&mut rng)),
            y: std::array::from_fn(|_| random_block(&mut rng)),
            z: std::array::from_fn(|_| random_block(&mut rng)),
            t: random_block(&mut rng),
        };
        let x = blocks.to_matrix();
        if x.pow(9) != identity20 {
            c.require(false, || format!("ninth power is nontrivial for:\n{}", x.to_text()));
            break;
        }
        let cube = blocks.cube_blocks();
        let mut expected_cube = identity20.clone();
        expected_cube.set_submatrix(0, 12, &cube.z1);
        expected_cube.set_submatrix(4, 16, &cube.z2);
        expected_cube.set_submatrix(0, 16, &cube.t1);
        if x.pow(3) != expected_cube {
            c.require(false, || {
                format!("cube formula mismatch for:\n{}", x.to_text())
            });
            break;
        }
        let order = match x.order(9) {
            Ok(o) => o,
            Err(e) => {
                c.require(false, || format!("order computation failed: {e}"));
                break;
            }
        };
        let conditions_hold = cube.is_zero();
        if (order < 9) != conditions_hold {
            c.require(false, || {
                format!(
                    "criterion mismatch: order {order}, conditions {}:\n{}",
                    conditions_hold,
                    x.to_text()
                )
            });
            break;
        }
        if order < 9 {
            low_branch += 1;
        } else {
            high_branch += 1;
        }
        c.count(1);
    }
    if !c.failed() {
        c.require(low_branch > 0 && high_branch > 0, || {
            format!(
                "insufficient coverage: {low_branch} samples below order 9, {high_branch} at order 9"
            )
        });
        c.witness(format!(
            "{low_branch} samples of order < 9, {high_branch} of order 9; zero discrepancies"
        ));
    }
    Ok(c.finish())
}

/// Order, closure and parametrization of the tuple group generated by the
/// F-conjugates of C: 3^8 elements of exponent 3, all of the form
/// (u a1, u a2, u a3, u a4, h), closed under F-conjugation, with derived
/// subgroup the 81 central pure-h tuples.
pub fn check_c_group(ctx: &VerifyContext, master_seed: u64) -> Result<CheckResult> {
    let mut c = Checker::new("c-group", derive_seed(master_seed, "c-group"));
    let cgroup = &ctx.cgroup;
    c.require(cgroup.len() == 6561, || {
        format!("tuple group has {} elements, expected 3^8 = 6561", cgroup.len())
    });
    c.witness(format!("|<C>^F| = {}", cgroup.len()));
    'outer: for m in ctx.f_group.elements() {
        let m_inv = match m.inverse() {
            Ok(inv) => inv,
            Err(e) => {
                c.require(false, || e.to_string());
                break;
            }
        };
        for t in cgroup.elements() {
            if !cgroup.contains(&t.conjugate_with(&m_inv, m)) {
                c.require(false, || "tuple set is not closed under F-conjugation".into());
                break 'outer;
            }
        }
    }
    c.witness("closed under conjugation by all 20 elements of F");
    for t in cgroup.elements() {
        if c.failed() {
            break;
        }
        match CGroup::u_of(t, &ctx.alphas[0]) {
            Some(u) => {
                for alpha in &ctx.alphas {
                    c.require(&alpha.apply(&u) == t.f(alpha.index()), || {
                        format!("tuple has f_{} outside the alpha parametrization", alpha.index())
                    });
                }
            }
            None => c.require(false, || "tuple f_1 is outside the image of alpha_1".into()),
        }
        c.require(t.mul(t).mul(t).is_identity(), || "a tuple has order above 3".into());
        c.count(1);
    }
    c.witness("every tuple is (u a1, u a2, u a3, u a4, h) for a common u, and has cube 1");
    match cgroup.derived_subgroup() {
        Ok(derived) => {
            c.require(derived.len() == 81, || {
                format!("derived subgroup has {} elements, expected 81", derived.len())
            });
            let all_pure_h = derived
                .iter()
                .all(|t| (1..=4).all(|i| t.f(i).is_zero()) && cgroup.contains(t));
            c.require(all_pure_h, || "derived subgroup contains a non-central tuple".into());
            c.witness("derived subgroup = the 81 pure-h tuples (nilpotency class 2)");
        }
        Err(e) => c.require(false, || e.to_string()),
    }
    Ok(c.finish())
}

/// The pairing phi is balanced and alternating, kills the invariant wedge
/// vector, and its image spans exactly the derived subgroup of the tuple
/// group, a 4-dimensional module.
pub fn check_w_iso_v(ctx: &VerifyContext, master_seed: u64) -> Result<CheckResult> {
    let mut c = Checker::new("w-iso-v", derive_seed(master_seed, "w-iso-v"));
    let basis: Vec<FieldVector> = (0..4).map(|i| FieldVector::unit(4, i, P)).collect();
    for (gname, g) in [("a", ctx.fp.a()), ("b", ctx.fp.b())] {
        for x in &basis {
            for y in &basis {
                let lhs = phi(&ctx.alphas, &x.apply(g), &y.apply(g));
                let rhs = phi(&ctx.alphas, x, y)
                    .conjugate_by(g)
                    .expect("generator invertible");
                c.require(lhs == rhs, || {
                    format!("phi is not balanced for {gname} on a basis pair")
                });
            }
        }
    }
    c.witness("phi(ug, u'g) = phi(u, u') o g for g in {a, b} on all basis pairs");
    for u in all_v_coordinates() {
        c.require(phi(&ctx.alphas, &u, &u).is_zero(), || {
            format!("phi(u, u) is nonzero for u = {u}")
        });
        c.count(1);
    }
    c.witness("phi(u, u) = 0 for all 81 vectors");
    let long_sum = phi(&ctx.alphas, &basis[0], &basis[1])
        .add(&phi(&ctx.alphas, &basis[0], &basis[3]))
        .add(&phi(&ctx.alphas, &basis[2], &basis[3]));
    c.require(long_sum.is_zero(), || {
        "the induced map does not kill the invariant wedge vector u1".to_string()
    });
    c.witness("phi(v,va) + phi(v,va^3) + phi(va^2,va^3) = 0");
    let mut image_rows = Vec::new();
    for x in &basis {
        for y in &basis {
            image_rows.push(phi(&ctx.alphas, x, y).flatten());
        }
    }
    let image_dim = span_dimension(&image_rows);
    c.require(image_dim == 4, || {
        format!("span of Im phi has dimension {image_dim}, expected 4")
    });
    match ctx.cgroup.derived_subgroup() {
        Ok(derived) => {
            c.require(derived.len() == 81, || {
                format!("derived subgroup has {} elements", derived.len())
            });
            let derived_rows: Vec<FieldVector> =
                derived.iter().map(|t| t.h().flatten()).collect();
            let (reduced_image, _) = row_reduce(&image_rows);
            let (reduced_derived, _) = row_reduce(&derived_rows);
            c.require(reduced_image == reduced_derived, || {
                "span of Im phi differs from the derived subgroup".to_string()
            });
            c.witness("span of Im phi = derived subgroup of the tuple group (81 elements, dim 4)");
        }
        Err(e) => c.require(false, || e.to_string()),
    }
    Ok(c.finish())
}

/// Exclusion of order 18: the two psi values, the 81 exhaustive pairing
/// annihilations, and the full sweep of the centralizer of B^2 in P,
/// counted by two independent constructions, with no element of order 9.
pub fn check_psi_order18(ctx: &VerifyContext, master_seed: u64) -> Result<CheckResult> {
    let mut c = Checker::new("psi-order18", derive_seed(master_seed, "psi-order18"));
    let fp = &ctx.fp;
    let b2 = fp.b().pow(2);
    let v = FieldVector::unit(4, 0, P);
    let va23 = FieldVector::unit(4, 2, P).add(&FieldVector::unit(4, 3, P));
    let target = FieldMatrix::identity(4, P).sub(&b2).mul(fp.b());
    c.require(psi(&ctx.alphas, &v) == target, || {
        "psi(v) != (1 - b^2) b".to_string()
    });
    c.require(psi(&ctx.alphas, &va23) == target.neg(), || {
        "psi(va^2 + va^3) != -(1 - b^2) b".to_string()
    });
    c.witness("psi(v) = (1 - b^2) b and psi(va^2 + va^3) = -(1 - b^2) b");
    let fixed_basis = centralizer_in_module(&b2);
    c.require(fixed_basis.len() == 2, || {
        format!("C_V(b^2) has dimension {}", fixed_basis.len())
    });
    let fixed_vectors = span_elements(&fixed_basis);
    for w in &fixed_vectors {
        for u in &fixed_vectors {
            c.require(w.apply(&psi(&ctx.alphas, u)).is_zero(), || {
                format!("w psi(u) != 0 for w = {w}, u = {u}")
            });
            c.count(1);
        }
    }
    c.witness("w psi(u) = 0 for all 81 pairs in C_V(b^2)");

    // Construction one (coordinate-built): d-rows from the fixed-space
    // span, tuples filtered by componentwise conjugation.
    let fixed_tuples = match ctx.cgroup.fixed_by(&b2) {
        Ok(t) => t,
        Err(e) => {
            c.require(false, || e.to_string());
            return Ok(c.finish());
        }
    };
    let d_slot_count = fixed_vectors.len() as u64;
    let count_coordinate = d_slot_count.pow(4) * fixed_tuples.len() as u64;

    // Construction two (fixed-point-filtered): the kernel of the linear
    // B^2-action on the 16 d-coordinates, and the tuples fixed under
    // conjugation computed through the 17x17 matrix embedding.
    match d_action_matrix(&ctx.big.b().pow(2)) {
        Ok(action) => {
            let kernel = kernel_basis(&action.sub(&FieldMatrix::identity(16, P)));
            let count_kernel = 3u64.pow(kernel.len() as u32);
            c.require(count_kernel == d_slot_count.pow(4), || {
                format!(
                    "d-space fixed counts disagree: kernel gives {count_kernel}, \
                     coordinate construction gives {}",
                    d_slot_count.pow(4)
                )
            });
        }
        Err(e) => c.require(false, || e.to_string()),
    }
    let b2_big = ctx.big.b().pow(2);
    let mut matrix_fixed = 0usize;
    for t in ctx.cgroup.elements() {
        let embedded = PElement::from_tuple(t.clone()).embed();
        match embedded.conjugate_by(&b2_big) {
            Ok(conj) => {
                if conj == embedded {
                    matrix_fixed += 1;
                }
            }
            Err(e) => {
                c.require(false, || e.to_string());
                break;
            }
        }
    }
    c.require(matrix_fixed == fixed_tuples.len(), || {
        format!(
            "fixed tuple counts disagree: {} by tuple conjugation, {} by matrix conjugation",
            fixed_tuples.len(),
            matrix_fixed
        )
    });
    c.witness(format!(
        "|C_P(B^2)| = {count_coordinate} = 3^8 d-parts x {} fixed tuples (both routes agree)",
        fixed_tuples.len()
    ));

    // Exhaustive sweep: no element of the centralizer has order 9.
    let mut d_combos: Vec<[FieldVector; 4]> = Vec::with_capacity(6561);
    for i1 in 0..fixed_vectors.len() {
        for i2 in 0..fixed_vectors.len() {
            for i3 in 0..fixed_vectors.len() {
                for i4 in 0..fixed_vectors.len() {
                    d_combos.push([
                        fixed_vectors[i1].clone(),
                        fixed_vectors[i2].clone(),
                        fixed_vectors[i3].clone(),
                        fixed_vectors[i4].clone(),
                    ]);
                }
            }
        }
    }
    let mut swept = 0u64;
    let mut spot = 0u64;
    'sweep: for tuple in &fixed_tuples {
        for combo in &d_combos {
            let element = PElement::from_parts(combo.clone(), tuple.clone());
            let order = element.order();
            if order == 9 {
                c.require(false, || {
                    format!("element of order 9 inside C_P(B^2):\n{}", element.to_text())
                });
                break 'sweep;
            }
            swept += 1;
            // Spot cross-checks through the matrix arithmetic.
            if swept % 50_000 == 0 {
                spot += 1;
                let embedded = element.embed();
                let fixed = embedded
                    .conjugate_by(&b2_big)
                    .map(|conj| conj == embedded)
                    .unwrap_or(false);
                c.require(fixed, || "swept element is not fixed by B^2".to_string());
                let matrix_order = embedded.order(9).unwrap_or(0);
                c.require(matrix_order == order, || {
                    "coordinate and matrix orders disagree inside C_P(B^2)".to_string()
                });
            }
        }
    }
    c.count(swept);
    if !c.failed() {
        c.witness(format!(
            "no element of order 9 among all {swept} elements of C_P(B^2) \
             ({spot} spot-checked against the matrix arithmetic)"
        ));
        c.witness("hence no element of order 18 in the full group");
    }
    Ok(c.finish())
}

/// Fixed points of A on P are trivial: on V, on the 16 d-coordinates, and
/// on all 6561 tuples. With |A| = 5 coprime to 3 this covers P, so order 15
/// is excluded.
pub fn check_fpf_a(ctx: &VerifyContext, master_seed: u64) -> Result<CheckResult> {
    let mut c = Checker::new("fpf-a", derive_seed(master_seed, "fpf-a"));
    let fixed_v = centralizer_in_module(ctx.fp.a());
    c.require(fixed_v.is_empty(), || {
        format!("a fixes a {}-dimensional subspace of V", fixed_v.len())
    });
    c.witness("C_V(a) = 0");
    match d_action_matrix(ctx.big.a()) {
        Ok(action) => {
            let kernel = kernel_basis(&action.sub(&FieldMatrix::identity(16, P)));
            c.require(kernel.is_empty(), || {
                format!("A fixes a {}-dimensional d-subspace", kernel.len())
            });
            c.witness("A-conjugation fixes no nonzero d-coordinates");
        }
        Err(e) => c.require(false, || e.to_string()),
    }
    match ctx.cgroup.fixed_by(ctx.fp.a()) {
        Ok(fixed) => {
            c.require(fixed.len() == 1 && fixed[0].is_identity(), || {
                format!("{} tuples are fixed by A-conjugation", fixed.len())
            });
            c.witness("the identity is the only A-fixed tuple of all 6561");
        }
        Err(e) => c.require(false, || e.to_string()),
    }
    c.count(6561 + 16 + 4);
    if !c.failed() {
        c.witness("coprime action of |A| = 5 on the 3-group P: C_P(A) = 1, so order 15 is excluded");
    }
    Ok(c.finish())
}

/// Exponent of P and the explicit order-9 witness C D1.
pub fn check_exponent_order9(ctx: &VerifyContext, params: &VerifyParams) -> Result<CheckResult> {
    let seed = derive_seed(params.seed, "exponent-order9");
    let mut c = Checker::new("exponent-order9", seed);
    let mut sampler = PElementSampler::new(&ctx.cgroup, seed, 1);
    let mut nines = 0u64;
    let identity17 = FieldMatrix::identity(17, P);
    for _ in 0..params.lemma_samples {
        let x = sampler.sample();
        let order = x.order();
        if ![1, 3, 9].contains(&order) {
            c.require(false, || format!("sampled element of order {order}"));
            break;
        }
        if x.embed().pow(9) != identity17 {
            c.require(false, || "sampled element has nontrivial ninth power".to_string());
            break;
        }
        if order == 9 {
            nines += 1;
        }
        c.count(1);
    }
    if !c.failed() {
        c.require(nines > 0, || "no element of order 9 among the samples".to_string());
        c.witness(format!(
            "{} random P elements all have order in {{1, 3, 9}} and ninth power 1; {nines} of order 9",
            params.lemma_samples
        ));
    }
    let annihilator = ctx.fp.b().sub(&ctx.fp.b().pow(3));
    c.require(!annihilator.is_zero(), || "b - b^3 = 0".to_string());
    let d1 = all_v_coordinates()
        .into_iter()
        .find(|v| !v.apply(&annihilator).is_zero());
    match d1 {
        Some(d1) => {
            let d_elem = PElement::pure_d([
                d1.clone(),
                FieldVector::zero(4, P),
                FieldVector::zero(4, P),
                FieldVector::zero(4, P),
            ]);
            match PElement::parse(ctx.big.c()) {
                Ok(c_elem) => {
                    let witness = c_elem.mul(&d_elem);
                    let coordinate_order = witness.order();
                    let matrix_order = witness.embed().order(20).unwrap_or(0);
                    c.require(coordinate_order == 9 && matrix_order == 9, || {
                        format!(
                            "witness C D1 has coordinate order {coordinate_order} and matrix order {matrix_order}"
                        )
                    });
                    if !c.failed() {
                        c.witness(format!("order-9 witness C D1 with d1 = {d1}:"));
                        c.witness(witness.to_text());
                    }
                }
                Err(e) => c.require(false, || format!("C does not have the P form: {e}")),
            }
        }
        None => c.require(false, || "no d1 with d1 (b - b^3) != 0 exists".to_string()),
    }
    match PElement::parse(ctx.big.d()) {
        Ok(d_elem) => {
            c.require(d_elem.order() == 3, || "D does not have order 3".to_string());
            c.witness("D alone has order 3, not a witness");
        }
        Err(e) => c.require(false, || format!("D does not have the P form: {e}")),
    }
    Ok(c.finish())
}

/// Coordinate arithmetic against the 17x17 oracle: products, orders with
/// both branches represented, and the embed/parse round trip.
pub fn check_coordinate_consistency(
    ctx: &VerifyContext,
    params: &VerifyParams,
) -> Result<CheckResult> {
    let seed = derive_seed(params.seed, "coordinate-consistency");
    let mut c = Checker::new("coordinate-consistency", seed);
    let mut sampler = PElementSampler::new(&ctx.cgroup, seed, 2);
    let mut low = 0u64;
    let mut high = 0u64;
    for _ in 0..params.lemma_samples {
        let x = sampler.sample();
        let y = sampler.sample();
        let coordinate_product = x.mul(&y);
        match PElement::parse(&x.embed().mul(&y.embed())) {
            Ok(matrix_product) => {
                if coordinate_product != matrix_product {
                    c.require(false, || "p_mul disagrees with the matrix product".to_string());
                    break;
                }
            }
            Err(e) => {
                c.require(false, || format!("matrix product left the P form: {e}"));
                break;
            }
        }
        let coordinate_order = x.order();
        let matrix_order = match x.embed().order(9) {
            Ok(o) => o,
            Err(e) => {
                c.require(false, || format!("matrix order failed: {e}"));
                break;
            }
        };
        if coordinate_order != matrix_order {
            c.require(false, || {
                format!("orders disagree: {coordinate_order} vs {matrix_order}")
            });
            break;
        }
        if coordinate_order == 9 {
            high += 1;
        } else {
            low += 1;
        }
        if PElement::parse(&x.embed()).ok().as_ref() != Some(&x) {
            c.require(false, || "parse(embed(x)) != x".to_string());
            break;
        }
        c.count(1);
    }
    if !c.failed() {
        c.require(low > 0 && high > 0, || {
            format!("insufficient coverage: {low} low-order and {high} order-9 samples")
        });
        c.witness(format!(
            "{} random pairs: products, orders ({low} of order <= 3, {high} of order 9) \
             and round-trips all agree with the matrix oracle",
            params.lemma_samples
        ));
    }
    Ok(c.finish())
}

/// An explicit element of order 12, plus the exhaustive spectrum of the
/// 1620-element affine group on V as corroboration.
pub fn check_order12_witness(ctx: &VerifyContext, master_seed: u64) -> Result<CheckResult> {
    let seed = derive_seed(master_seed, "order12-witness");
    let mut c = Checker::new("order12-witness", seed);
    let vf = crate::construction::enumerate_affine_vf(&ctx.fp)?;
    c.require(vf.order() == 1620, || {
        format!("affine group on V has {} elements, expected 1620", vf.order())
    });
    let spectrum = vf.spectrum_exhaustive();
    let expected_mu: BTreeSet<u64> = [5, 12].into_iter().collect();
    c.require(spectrum.mu() == &expected_mu, || {
        format!("mu of the affine group is {:?}, expected {{5, 12}}", spectrum.mu())
    });
    c.witness("mu(V : F) = {5, 12} by exhausting all 1620 elements");
    // Witness scan: random P elements first, then the deterministic sweep
    // over the tuple group.
    let mut sampler = PElementSampler::new(&ctx.cgroup, seed, 3);
    let mut witness: Option<(String, FieldMatrix)> = None;
    for i in 0..200 {
        let x = sampler.sample();
        let candidate = ctx.big.b().mul(&x.embed());
        if candidate.order(100).ok() == Some(12) {
            witness = Some((format!("B x for a sampled x in P (sample {i})"), candidate));
            break;
        }
    }
    if witness.is_none() {
        for t in ctx.cgroup.elements() {
            let candidate = ctx.big.b().mul(&PElement::from_tuple(t.clone()).embed());
            if candidate.order(100).ok() == Some(12) {
                witness = Some(("B x for x in the tuple group".to_string(), candidate));
                break;
            }
        }
    }
    match witness {
        Some((source, m)) => {
            c.require(m.order(100).ok() == Some(12), || "witness order changed".to_string());
            c.witness(format!("order-12 witness: {source}"));
            c.witness(m.to_text());
        }
        None => c.require(false, || {
            "no element of order 12 among B P samples and B times the tuple group".to_string()
        }),
    }
    c.count(1620 + 200);
    Ok(c.finish())
}

/// Structural order of the full group: 3^24 from the two verified factors
/// of P, times the 20 elements of F.
pub fn check_group_order(ctx: &VerifyContext, master_seed: u64) -> Result<CheckResult> {
    let mut c = Checker::new("group-order", derive_seed(master_seed, "group-order"));
    c.require(ctx.f_group.order() == 20, || {
        format!("F has {} elements, expected 20", ctx.f_group.order())
    });
    match p_group_order(&ctx.cgroup, &ctx.big) {
        Ok(p_order) => {
            c.require(p_order == 282_429_536_481, || {
                format!("|P| = {p_order}, expected 3^24")
            });
            let total = p_order * ctx.f_group.order() as u64;
            c.require(total == 5_648_590_729_620, || {
                format!("|G| = {total}, expected 5648590729620")
            });
            c.witness(format!(
                "|G| = |P| * |F| = 3^24 * 20 = {total} = 2^2 * 3^24 * 5"
            ));
            c.witness("factors: d-space dimension 16, tuple group 3^8, F exhaustive 20");
        }
        Err(e) => c.require(false, || e.to_string()),
    }
    c.count(6561 + 20);
    Ok(c.finish())
}

/// Pure comparison half of the reference check, reusable by callers that
/// already hold the enumerated quotient spectrum.
pub fn reference_comparison(
    spectrum: &crate::group::Spectrum,
    enumeration_size: usize,
    master_seed: u64,
) -> CheckResult {
    let seed = derive_seed(master_seed, "reference-spectrum");
    let mut c = Checker::new("reference-spectrum", seed);
    c.require(enumeration_size == sp43::SP43_ORDER, || {
        format!("Sp(4,3) enumeration has {enumeration_size} elements")
    });
    c.witness(format!(
        "Sp(4,3) enumerated: {enumeration_size} elements, center {{I, -I}}, form preserved"
    ));
    let expected_mu: BTreeSet<u64> = [5, 9, 12].into_iter().collect();
    let expected_omega: BTreeSet<u64> = [1, 2, 3, 4, 5, 6, 9, 12].into_iter().collect();
    c.require(spectrum.mu() == &expected_mu, || {
        format!("mu(S4(3)) = {:?}, expected {{5, 9, 12}}", spectrum.mu())
    });
    c.require(spectrum.omega() == &expected_omega, || {
        format!(
            "omega(S4(3)) = {:?}, expected the divisor closure of {{5, 9, 12}}",
            spectrum.omega()
        )
    });
    c.witness("mu(S4(3)) = {5, 9, 12}; omega = {1, 2, 3, 4, 5, 6, 9, 12}");
    c.count(enumeration_size as u64);
    c.finish()
}

/// The reference oracle: enumerate Sp(4,3), validate the generator choice,
/// and compute the spectrum of the quotient by the center.
pub fn check_reference_spectrum(params: &VerifyParams) -> Result<CheckResult> {
    let sp = sp43::validated_enumeration(params.limit)?;
    let spectrum = sp.enumeration().spectrum_mod_center(sp.center())?;
    Ok(reference_comparison(
        &spectrum,
        sp.enumeration().order(),
        params.seed,
    ))
}

/// The eight expected orders with their explicit witness words.
pub fn explicit_witnesses(ctx: &VerifyContext) -> Vec<(u64, String, FieldMatrix)> {
    let big = &ctx.big;
    let annihilator = ctx.fp.b().sub(&ctx.fp.b().pow(3));
    let d1 = all_v_coordinates()
        .into_iter()
        .find(|v| !v.apply(&annihilator).is_zero())
        .unwrap_or_else(|| FieldVector::zero(4, P));
    let d_elem = PElement::pure_d([
        d1,
        FieldVector::zero(4, P),
        FieldVector::zero(4, P),
        FieldVector::zero(4, P),
    ]);
    vec![
        (1, "identity".into(), FieldMatrix::identity(17, P)),
        (2, "B^2".into(), big.b().pow(2)),
        (3, "D".into(), big.d().clone()),
        (4, "B".into(), big.b().clone()),
        (5, "A".into(), big.a().clone()),
        (6, "B^2 D".into(), big.b().pow(2).mul(big.d())),
        (9, "C D1".into(), big.c().mul(&d_elem.embed())),
        (12, "B C".into(), big.b().mul(big.c())),
    ]
}

/// Sampled containment in the claimed spectrum plus verified witnesses for
/// all eight orders. Also returns the sampled histogram for the certificate
/// summary.
pub fn sampled_spectrum_check(
    ctx: &VerifyContext,
    params: &VerifyParams,
) -> Result<(CheckResult, std::collections::BTreeMap<u64, u64>)> {
    let seed = derive_seed(params.seed, "sampled-spectrum");
    let mut c = Checker::new("sampled-spectrum", seed);
    let allowed: BTreeSet<u64> = [1, 2, 3, 4, 5, 6, 9, 12].into_iter().collect();
    let mut witnessed = BTreeSet::new();
    for (expected, word, matrix) in explicit_witnesses(ctx) {
        match matrix.order(100) {
            Ok(order) => {
                c.require(order == expected, || {
                    format!("witness {word} has order {order}, expected {expected}")
                });
                witnessed.insert(order);
            }
            Err(e) => c.require(false, || format!("witness {word}: {e}")),
        }
    }
    c.require(witnessed == allowed, || {
        format!("explicit witnesses cover only {witnessed:?}")
    });
    c.witness("verified witnesses: 1 = |1|, 2 = |B^2|, 3 = |D|, 4 = |B|, 5 = |A|, 6 = |B^2 D|, 9 = |C D1|, 12 = |B C|");
    let mut histogram = std::collections::BTreeMap::new();
    match ctx.big.generator_set() {
        Ok(gens) => match spectrum_sampled(
            &gens,
            params.spectrum_samples,
            params.word_length,
            seed,
            params.workers,
        ) {
            Ok(counts) => {
                c.count(params.spectrum_samples);
                for (&order, &count) in &counts {
                    c.require(allowed.contains(&order), || {
                        format!("{count} sampled elements have order {order}, outside the claimed spectrum")
                    });
                }
                let observed: BTreeSet<u64> = counts.keys().copied().collect();
                let formatted: Vec<String> = counts
                    .iter()
                    .map(|(order, count)| format!("{order}:{count}"))
                    .collect();
                c.witness(format!(
                    "sampled order histogram ({} words, lengths 1..={}, {} workers): {}",
                    params.spectrum_samples,
                    params.word_length,
                    params.workers,
                    formatted.join(" ")
                ));
                c.witness(format!(
                    "orders observed by sampling: {observed:?}; coverage with witnesses: 8/8"
                ));
                histogram = counts;
            }
            Err(e) => c.require(false, || format!("sampling failed: {e}")),
        },
        Err(e) => c.require(false, || e.to_string()),
    }
    Ok((c.finish(), histogram))
}

pub fn check_sampled_spectrum(ctx: &VerifyContext, params: &VerifyParams) -> Result<CheckResult> {
    sampled_spectrum_check(ctx, params).map(|(result, _)| result)
}

/// Names of all context-based checks, in execution order. The certificate
/// assembler appends the final spectrum verdict after these.
pub const CHECK_NAMES: [&str; 16] = [
    "frobenius",
    "conjugation-identities",
    "big-generators",
    "module-hom",
    "exterior-square",
    "unitriangular",
    "c-group",
    "w-iso-v",
    "psi-order18",
    "fpf-a",
    "exponent-order9",
    "coordinate-consistency",
    "order12-witness",
    "group-order",
    "reference-spectrum",
    "sampled-spectrum",
];

/// Runs the named check. Unknown names are a configuration error.
pub fn run_named_check(
    name: &str,
    ctx: &VerifyContext,
    params: &VerifyParams,
) -> Result<CheckResult> {
    match name {
        "frobenius" => check_frobenius(&ctx.fp, params.seed),
        "conjugation-identities" => check_conjugation_identities(&ctx.fp, params.seed),
        "big-generators" => check_big_generators(ctx, params.seed),
        "module-hom" => check_module_hom(ctx, params.seed),
        "exterior-square" => check_exterior_square(&ctx.fp, params.seed),
        "unitriangular" => check_unitriangular(params.lemma_samples, params.seed),
        "c-group" => check_c_group(ctx, params.seed),
        "w-iso-v" => check_w_iso_v(ctx, params.seed),
        "psi-order18" => check_psi_order18(ctx, params.seed),
        "fpf-a" => check_fpf_a(ctx, params.seed),
        "exponent-order9" => check_exponent_order9(ctx, params),
        "coordinate-consistency" => check_coordinate_consistency(ctx, params),
        "order12-witness" => check_order12_witness(ctx, params.seed),
        "group-order" => check_group_order(ctx, params.seed),
        "reference-spectrum" => check_reference_spectrum(params),
        "sampled-spectrum" => check_sampled_spectrum(ctx, params),
        other => Err(Error::Config(format!("unknown check name: {other}"))),
    }
}

/// Runs every check in order.
pub fn run_all_checks(ctx: &VerifyContext, params: &VerifyParams) -> Result<Vec<CheckResult>> {
    CHECK_NAMES
        .iter()
        .map(|name| run_named_check(name, ctx, params))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn context() -> VerifyContext {
        VerifyContext::build(None).unwrap()
    }

    fn quick_params() -> VerifyParams {
        VerifyParams {
            lemma_samples: 400,
            spectrum_samples: 400,
            word_length: 24,
            workers: 1,
            seed: 7,
            limit: 60_000,
        }
    }

    #[test]
    fn frobenius_check_passes_and_fails_on_perturbation() {
        let fp = FrobeniusPair::build();
        assert!(check_frobenius(&fp, 1).unwrap().passed());
        let mut bad_a = fp.a().clone();
        bad_a.set(3, 0, 0);
        let bad = FrobeniusPair::from_matrices(bad_a, fp.b().clone());
        let result = check_frobenius(&bad, 1).unwrap();
        assert!(!result.passed());
        assert!(result.counterexample.is_some());
    }

    #[test]
    fn conjugation_check_negative_control_names_cell() {
        let fp = FrobeniusPair::build();
        assert!(check_conjugation_identities(&fp, 1).unwrap().passed());
        let mut bad_b = fp.b().clone();
        bad_b.set(0, 1, 1);
        let bad = FrobeniusPair::from_matrices(fp.a().clone(), bad_b);
        let result = check_conjugation_identities(&bad, 1).unwrap();
        assert!(!result.passed());
        assert!(result.counterexample.unwrap().contains("(b^1)^(a^1)"));
    }

    #[test]
    fn big_generator_check_flags_corrupted_entry() {
        let ctx = context();
        assert!(check_big_generators(&ctx, 1).unwrap().passed());
        let mut bad_c = ctx.big.c().clone();
        bad_c.set(1, 5, bad_c.get(1, 5).value() as i64 + 1);
        let bad_big = BigGenerators::from_matrices(vec![
            ctx.big.a().clone(),
            ctx.big.b().clone(),
            bad_c,
            ctx.big.d().clone(),
        ])
        .unwrap();
        let bad_ctx = VerifyContext::from_parts(ctx.fp.clone(), bad_big).unwrap();
        let result = check_big_generators(&bad_ctx, 1).unwrap();
        assert!(!result.passed());
        assert!(result.counterexample.unwrap().contains('C'));
    }

    #[test]
    fn module_hom_check_passes_and_reports_converse() {
        let ctx = context();
        let result = check_module_hom(&ctx, 1).unwrap();
        assert!(result.passed());
        assert!(result
            .witnesses
            .iter()
            .any(|w| w.contains("dimension 3") && w.contains("converse")));
    }

    #[test]
    fn module_hom_conditions_fail_outside_the_span() {
        // m = a violates the first condition (a does not commute with b).
        let fp = FrobeniusPair::build();
        let m = fp.a().clone();
        assert_ne!(m.conjugate_by(fp.b()).unwrap(), m);
    }

    #[test]
    fn exterior_square_check_negative_control() {
        let fp = FrobeniusPair::build();
        assert!(check_exterior_square(&fp, 1).unwrap().passed());
        let mut bad_a = fp.a().clone();
        bad_a.set(0, 1, 2);
        let bad = FrobeniusPair::from_matrices(bad_a, fp.b().clone());
        assert!(!check_exterior_square(&bad, 1).unwrap().passed());
    }

    #[test]
    fn unitriangular_check_covers_both_branches() {
        let result = check_unitriangular(800, 5).unwrap();
        assert!(result.passed(), "{:?}", result.counterexample);
        assert_eq!(result.samples_used, 800);
    }

    #[test]
    fn unitriangular_check_fails_without_coverage() {
        // With no zero blocks the short-order branch is unreachable at
        // this sample count.
        let result = check_unitriangular_with(40, 5, 0).unwrap();
        assert!(!result.passed());
        assert!(result.counterexample.unwrap().contains("insufficient coverage"));
    }

    #[test]
    fn c_group_check_passes() {
        let ctx = context();
        assert!(check_c_group(&ctx, 1).unwrap().passed());
    }

    #[test]
    fn w_iso_v_check_negative_control_via_corrupted_alpha() {
        let ctx = context();
        assert!(check_w_iso_v(&ctx, 1).unwrap().passed());
        let mut bad_rows = ctx.alphas[3].rows().to_vec();
        bad_rows[2] = bad_rows[2].add(&FieldVector::unit(16, 5, P));
        let mut bad_ctx = VerifyContext::from_parts(ctx.fp.clone(), ctx.big.clone()).unwrap();
        bad_ctx.alphas[3] = ModuleHom::from_rows_unchecked(4, bad_rows);
        assert!(!check_w_iso_v(&bad_ctx, 1).unwrap().passed());
    }

    #[test]
    fn psi_order18_check_negative_control_via_corrupted_alpha() {
        let ctx = context();
        let mut bad_rows = ctx.alphas[0].rows().to_vec();
        bad_rows[0] = bad_rows[0].add(&FieldVector::unit(16, 0, P));
        let mut bad_ctx = VerifyContext::from_parts(ctx.fp.clone(), ctx.big.clone()).unwrap();
        bad_ctx.alphas[0] = ModuleHom::from_rows_unchecked(1, bad_rows);
        let result = check_psi_order18(&bad_ctx, 1).unwrap();
        assert!(!result.passed());
    }

    #[test]
    fn fpf_a_check_negative_control() {
        let ctx = context();
        assert!(check_fpf_a(&ctx, 1).unwrap().passed());
        let bad = FrobeniusPair::from_matrices(FieldMatrix::identity(4, P), ctx.fp.b().clone());
        let mut bad_ctx = VerifyContext::from_parts(ctx.fp.clone(), ctx.big.clone()).unwrap();
        bad_ctx.fp = bad;
        assert!(!check_fpf_a(&bad_ctx, 1).unwrap().passed());
    }

    #[test]
    fn exponent_order9_check_negative_control() {
        let ctx = context();
        let params = quick_params();
        let result = check_exponent_order9(&ctx, &params).unwrap();
        assert!(result.passed(), "{:?}", result.counterexample);
        // Replacing C with the identity removes every order-9 witness of
        // the C D1 form.
        let bad_big = BigGenerators::from_matrices(vec![
            ctx.big.a().clone(),
            ctx.big.b().clone(),
            FieldMatrix::identity(17, P),
            ctx.big.d().clone(),
        ])
        .unwrap();
        let bad_ctx = VerifyContext::from_parts(ctx.fp.clone(), bad_big).unwrap();
        assert!(!check_exponent_order9(&bad_ctx, &params).unwrap().passed());
    }

    #[test]
    fn order12_witness_check_passes() {
        let ctx = context();
        let result = check_order12_witness(&ctx, 1).unwrap();
        assert!(result.passed(), "{:?}", result.counterexample);
    }

    #[test]
    fn group_order_check_negative_control() {
        let ctx = context();
        assert!(check_group_order(&ctx, 1).unwrap().passed());
        // A block-diagonal D has no d-row: the span check collapses.
        let bad_big = BigGenerators::from_matrices(vec![
            ctx.big.a().clone(),
            ctx.big.b().clone(),
            ctx.big.c().clone(),
            FieldMatrix::identity(17, P),
        ])
        .unwrap();
        let bad_ctx = VerifyContext::from_parts(ctx.fp.clone(), bad_big).unwrap();
        assert!(!check_group_order(&bad_ctx, 1).unwrap().passed());
    }

    #[test]
    fn sampled_spectrum_check_small_run() {
        let ctx = context();
        let params = quick_params();
        let result = check_sampled_spectrum(&ctx, &params).unwrap();
        assert!(result.passed(), "{:?}", result.counterexample);
        assert_eq!(result.samples_used, params.spectrum_samples);
    }

    #[test]
    fn derive_seed_is_stable_and_label_sensitive() {
        assert_eq!(derive_seed(1, "x"), derive_seed(1, "x"));
        assert_ne!(derive_seed(1, "x"), derive_seed(1, "y"));
        assert_ne!(derive_seed(1, "x"), derive_seed(2, "x"));
    }

    #[test]
    fn unknown_check_name_is_a_config_error() {
        let ctx = context();
        assert!(matches!(
            run_named_check("nope", &ctx, &quick_params()),
            Err(Error::Config(_))
        ));
    }
}
