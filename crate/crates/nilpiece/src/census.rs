//! Exhaustive enumeration and formula verification: nilpotent counts,
//! per-piece counts, S_m and Springer counts, fiber sizes, the X_N identity
//! and polynomial-in-q universality of piece sizes.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::Profile;
use crate::linalg::{enumerate_span, vec_is_zero, Matrix, Subspace, Vector};
use crate::nilcone::{extract_chain, induced_pair, is_nilpotent};
use crate::quadspace::{AlternatingForm, QuadraticSpace};

#[derive(Clone, Debug)]
pub struct FormulaCheck {
    pub name: String,
    pub enumerated: BigInt,
    pub formula: BigInt,
}

impl FormulaCheck {
    pub fn passed(&self) -> bool {
        self.enumerated == self.formula
    }
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub n_rank: usize,
    pub q: u64,
    pub total: u64,
    pub tally: BTreeMap<Profile, u64>,
    pub checks: Vec<FormulaCheck>,
    pub elapsed_ms: u128,
}

impl CensusReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(FormulaCheck::passed)
    }
}

fn guard_census(field: &Field, n_rank: usize) -> Result<()> {
    let q = field.order() as u64;
    let ok = match n_rank {
        1 => q <= 16,
        2 => q <= 4,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Size(format!(
            "census guarded to N=1 q≤16 and N=2 q≤4; got N={n_rank}, q={q}"
        )))
    }
}

/// All alternating forms, as an indexable family (lower-triangle mixed
/// radix) so the enumeration can be partitioned across workers.
fn form_at(space: &QuadraticSpace, index: u64) -> AlternatingForm {
    let q = space.field().order() as u64;
    let dim = space.dim();
    let slots = dim * (dim - 1) / 2;
    let mut entries = Vec::with_capacity(slots);
    let mut rest = index;
    for _ in 0..slots {
        entries.push((rest % q) as u32);
        rest /= q;
    }
    AlternatingForm::from_lower_triangle(space, &entries).expect("decoded triangle is valid")
}

pub fn form_count(space: &QuadraticSpace) -> u64 {
    let q = space.field().order() as u64;
    let dim = space.dim() as u32;
    q.pow(dim * (dim - 1) / 2)
}

/// Enumerate every alternating form, filter nilpotents, classify each and
/// tally per profile. The enumeration streams (forms are reconstructed from
/// their index), splits across workers and merges deterministically.
pub fn nilpotent_census(field: &Field, n_rank: usize) -> Result<CensusReport> {
    nilpotent_census_with(field, n_rank, false)
}

/// `force` lifts the size guard (potentially hours of runtime).
pub fn nilpotent_census_with(field: &Field, n_rank: usize, force: bool) -> Result<CensusReport> {
    if !force {
        guard_census(field, n_rank)?;
    }
    let start = Instant::now();
    let space = QuadraticSpace::standard(field, n_rank)?;
    let q = field.order() as u64;
    let total_forms = form_count(&space);
    let chunk = 1u64 << 10;
    let chunks: Vec<u64> = (0..total_forms.div_ceil(chunk)).collect();
    let tallies: Result<Vec<BTreeMap<Profile, u64>>> = chunks
        .par_iter()
        .map(|&c| {
            let mut tally = BTreeMap::new();
            for idx in c * chunk..((c + 1) * chunk).min(total_forms) {
                let b = form_at(&space, idx);
                if is_nilpotent(&b)? {
                    let r = crate::classifier::classify(&b)?;
                    *tally.entry(r.profile).or_insert(0u64) += 1;
                }
            }
            Ok(tally)
        })
        .collect();
    let mut tally: BTreeMap<Profile, u64> = BTreeMap::new();
    for t in tallies? {
        for (p, c) in t {
            *tally.entry(p).or_insert(0) += c;
        }
    }
    let total: u64 = tally.values().sum();
    let formula = BigInt::from(q).pow(2 * (n_rank as u32).pow(2));
    let checks = vec![FormulaCheck {
        name: format!("nilpotent total = q^(2N^2) at N={n_rank}, q={q}"),
        enumerated: BigInt::from(total),
        formula,
    }];
    Ok(CensusReport {
        n_rank,
        q,
        total,
        tally,
        checks,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn sm_formula(q: u64, n_rank: usize, m: usize) -> BigInt {
    let q = BigInt::from(q);
    let mut acc = q.pow((m * m.saturating_sub(1) / 2) as u32);
    for i in 0..m {
        acc *= q.pow(2 * (n_rank - i) as u32) - BigInt::one();
    }
    acc
}

/// Enumerate sequences of m linearly independent vectors whose span is
/// totally Q-isotropic and compare with the closed formula.
pub fn sm_count(field: &Field, n_rank: usize, m: usize) -> Result<FormulaCheck> {
    let q = field.order() as u64;
    if n_rank > 2 || q > 4 || m > n_rank {
        return Err(Error::Size(format!(
            "S_m enumeration guarded to N≤2, q≤4, m≤N; got N={n_rank}, q={q}, m={m}"
        )));
    }
    let space = QuadraticSpace::standard(field, n_rank)?;
    let f = field;
    let dim = space.dim();
    let all: Vec<Vector> = {
        let full = Subspace::full(f, dim);
        enumerate_span(f, &full.basis_vectors())
    };
    let mut count = 0u64;
    let mut seq: Vec<Vector> = Vec::new();
    fn rec(
        space: &QuadraticSpace,
        all: &[Vector],
        m: usize,
        seq: &mut Vec<Vector>,
        count: &mut u64,
    ) {
        if seq.len() == m {
            *count += 1;
            return;
        }
        let f = space.field();
        for v in all {
            if vec_is_zero(v) {
                continue;
            }
            let span = Subspace::span(f, space.dim(), seq);
            if span.contains_vec(v) {
                continue;
            }
            let mut cand = seq.clone();
            cand.push(v.clone());
            let ok = enumerate_span(f, &cand).iter().all(|x| space.q_eval(x) == 0);
            if !ok {
                continue;
            }
            seq.push(v.clone());
            rec(space, all, m, seq, count);
            seq.pop();
        }
    }
    rec(&space, &all, m, &mut seq, &mut count);
    Ok(FormulaCheck {
        name: format!("|S_{m}| at N={n_rank}, q={q}"),
        enumerated: BigInt::from(count),
        formula: sm_formula(q, n_rank, m),
    })
}

/// First element of S_m in enumeration order; for the standard space the
/// isotropic good vectors e_1, ..., e_m work and are used directly.
fn standard_v_star(space: &QuadraticSpace, m: usize) -> Vec<Vector> {
    (1..=m as i64).map(|i| space.good_vector(i)).collect()
}

/// Count nilpotent elements of o(V') for V' = L^⊥/L (L = span v_* ⊕ R) by
/// direct enumeration, against Springer's formula q^{2(N-m)(N-m-1)}.
pub fn springer_count(field: &Field, n_rank: usize, m: usize) -> Result<FormulaCheck> {
    let q = field.order() as u64;
    if n_rank - m > 2 || q > 2 {
        return Err(Error::Size(format!(
            "Springer enumeration guarded to N-m≤2, q=2; got N={n_rank}, m={m}, q={q}"
        )));
    }
    let space = QuadraticSpace::standard(field, n_rank)?;
    let f = field;
    let dim = space.dim();
    let mut l_vecs = standard_v_star(&space, m);
    l_vecs.extend(space.radical().basis_vectors());
    let l = Subspace::span(f, dim, &l_vecs);
    let l_perp = space.perp(&l);
    let qm = crate::linalg::QuotientMap::new(&l_perp, &l)?;
    let d = qm.quotient_dim();
    let sec = qm.section_basis();
    // β' on the quotient, nondegenerate symplectic-like of rank d = 2(N-m)
    let mut bp = Matrix::zero(f, d, d);
    for i in 0..d {
        for j in 0..d {
            bp.set_code(i, j, space.beta_eval(&sec[i], &sec[j]));
        }
    }
    let bp_inv = bp.inverse().ok_or_else(|| {
        Error::InternalInvariantViolation("β' degenerate on L^⊥/L".into())
    })?;
    // T ∈ o(V') ⟺ β'(Tv, v) = 0 ⟺ the gram B(v,w) = β'(Tv,w) is
    // alternating; enumerate alternating B and test nilpotency of β'⁻ᵀB
    let slots = d * d.saturating_sub(1) / 2;
    let qq = q;
    let total = qq.pow(slots as u32);
    let mut count = 0u64;
    for idx in 0..total {
        let mut b = Matrix::zero(f, d, d);
        let mut rest = idx;
        for i in 0..d {
            for j in 0..i {
                let e = (rest % qq) as u32;
                rest /= qq;
                b.set_code(i, j, e);
                b.set_code(j, i, f.elt(e).neg().code());
            }
        }
        // β'(Tv, w) = B(v, w) row-wise: βᵀ·(T columns) = Bᵀ
        let t = bp_inv.transpose().mul(&b.transpose());
        if t.is_nilpotent_endo() {
            count += 1;
        }
    }
    let nm = (n_rank - m) as u32;
    Ok(FormulaCheck {
        name: format!("|N_v*| at N={n_rank}, m={m}, q={q}"),
        enumerated: BigInt::from(count),
        formula: BigInt::from(q).pow(2 * nm * nm.saturating_sub(1)),
    })
}

/// Group every nilpotent form by its invariant pair (v_*, T'_ξ) and verify
/// all fiber sizes against q^{2m(N-m)+m(m-1)/2}.
pub fn fiber_check(field: &Field, n_rank: usize) -> Result<Vec<FormulaCheck>> {
    let q = field.order() as u64;
    if n_rank > 2 || q > 2 {
        return Err(Error::Size(format!(
            "fiber check guarded to N≤2, q=2; got N={n_rank}, q={q}"
        )));
    }
    let space = QuadraticSpace::standard(field, n_rank)?;
    let total_forms = form_count(&space);
    let mut fibers: BTreeMap<(usize, Vec<Vec<u32>>, Vec<u32>), u64> = BTreeMap::new();
    for idx in 0..total_forms {
        let b = form_at(&space, idx);
        if !is_nilpotent(&b)? {
            continue;
        }
        let chain = extract_chain(&b)?.ok_or(Error::NotNilpotent)?;
        let pair = induced_pair(&chain, &b)?;
        let v_star: Vec<Vec<u32>> = chain.v[..chain.m].to_vec();
        let tkey: Vec<u32> = {
            let t = &pair.t_prime;
            (0..t.rows()).flat_map(|r| t.row(r)).collect()
        };
        *fibers.entry((chain.m, v_star, tkey)).or_insert(0) += 1;
    }
    let mut checks = Vec::new();
    let mut sizes_by_m: BTreeMap<usize, std::collections::BTreeSet<u64>> = BTreeMap::new();
    let mut fiber_counts: BTreeMap<usize, u64> = BTreeMap::new();
    for ((m, _, _), size) in &fibers {
        sizes_by_m.entry(*m).or_default().insert(*size);
        *fiber_counts.entry(*m).or_insert(0) += 1;
    }
    for (m, sizes) in sizes_by_m {
        let expect = BigInt::from(q)
            .pow((2 * m * (n_rank - m) + m * m.saturating_sub(1) / 2) as u32);
        for size in sizes {
            checks.push(FormulaCheck {
                name: format!("fiber size at N={n_rank}, q={q}, m={m}"),
                enumerated: BigInt::from(size),
                formula: expect.clone(),
            });
        }
        // cross-check the fiber count against |S_m| · Springer
        let springer = BigInt::from(q)
            .pow(2 * (n_rank - m) as u32 * (n_rank - m).saturating_sub(1) as u32);
        checks.push(FormulaCheck {
            name: format!("fiber count at N={n_rank}, q={q}, m={m}"),
            enumerated: BigInt::from(fiber_counts[&m]),
            formula: sm_formula(q, n_rank, m) * springer,
        });
    }
    Ok(checks)
}

/// X_N = Σ_m (1-q^N)(1-q^{N-1})···(1-q^{N-m+1}) q^{N-m}: evaluate the sum
/// directly and via X_{N+1} = q^{N+1} + (1-q^{N+1})X_N; both must equal 1.
pub fn xn_identity(n_max: usize, q_list: &[u64]) -> bool {
    for &q in q_list {
        let q = BigInt::from(q);
        let mut by_rec = BigInt::one(); // X_1 = 1
        for n in 1..=n_max {
            let mut by_sum = BigInt::zero();
            for m in 0..=n {
                let mut term = q.pow((n - m) as u32);
                for i in 0..m {
                    term *= BigInt::one() - q.pow((n - i) as u32);
                }
                by_sum += term;
            }
            if by_sum != BigInt::one() || by_rec != BigInt::one() {
                return false;
            }
            by_rec = q.pow((n + 1) as u32) + (BigInt::one() - q.pow((n + 1) as u32)) * by_rec;
        }
    }
    true
}

/// The master identity Σ_m |S_m| q^{2(N-m)(N-m-1)} q^{2m(N-m)+m(m-1)/2}
/// = q^{2N²}, pure integer arithmetic.
pub fn master_identity(n_max: usize, q_list: &[u64]) -> bool {
    for &q in q_list {
        for n in 1..=n_max {
            let mut sum = BigInt::zero();
            for m in 0..=n {
                let nm = (n - m) as u32;
                sum += sm_formula(q, n, m)
                    * BigInt::from(q).pow(2 * nm * nm.saturating_sub(1))
                    * BigInt::from(q).pow((2 * m * (n - m) + m * m.saturating_sub(1) / 2) as u32);
            }
            if sum != BigInt::from(q).pow(2 * (n as u32).pow(2)) {
                return false;
            }
        }
    }
    true
}

/// Per-piece counts at N=1 over mixed characteristics, interpolated as
/// polynomials in q with exact rationals; coefficients must be integers and
/// consistent across every sampled q.
pub struct UniversalityRow {
    pub profile: Profile,
    pub counts: Vec<(u64, u64)>,
    /// Coefficients low-to-high.
    pub polynomial: Vec<BigInt>,
}

pub fn universality_check(q_list: &[u64]) -> Result<Vec<UniversalityRow>> {
    let mut per_piece: BTreeMap<Profile, Vec<(u64, u64)>> = BTreeMap::new();
    for &q in q_list {
        let field = field_of_order(q)?;
        let report = nilpotent_census(&field, 1)?;
        for (p, c) in report.tally {
            per_piece.entry(p).or_default().push((q, c));
        }
    }
    let degree = 2usize; // 2N² at N=1
    let mut rows = Vec::new();
    for (profile, counts) in per_piece {
        if counts.len() != q_list.len() {
            return Err(Error::InternalInvariantViolation(format!(
                "piece {profile:?} missing at some q"
            )));
        }
        let pts: Vec<(BigRational, BigRational)> = counts
            .iter()
            .take(degree + 1)
            .map(|&(q, c)| (BigRational::from(BigInt::from(q)), BigRational::from(BigInt::from(c))))
            .collect();
        let mut poly = lagrange(&pts);
        while poly.len() > 1 && poly.last().map_or(false, BigRational::is_zero) {
            poly.pop();
        }
        // remaining sample points must agree with the interpolant
        for &(q, c) in &counts {
            let x = BigRational::from(BigInt::from(q));
            let mut y = BigRational::zero();
            let mut xp = BigRational::one();
            for coef in &poly {
                y += coef * &xp;
                xp *= &x;
            }
            if y != BigRational::from(BigInt::from(c)) {
                return Err(Error::InternalInvariantViolation(format!(
                    "piece count for {profile:?} is not polynomial in q"
                )));
            }
        }
        let mut int_coeffs = Vec::new();
        for coef in &poly {
            if !coef.is_integer() {
                return Err(Error::InternalInvariantViolation(format!(
                    "non-integer coefficient for piece {profile:?}"
                )));
            }
            int_coeffs.push(coef.to_integer());
        }
        rows.push(UniversalityRow { profile, counts, polynomial: int_coeffs });
    }
    Ok(rows)
}

pub fn field_of_order(q: u64) -> Result<Field> {
    for p in [2u32, 3, 5, 7] {
        let mut k = 0u32;
        let mut pw = 1u64;
        while pw < q {
            pw *= p as u64;
            k += 1;
        }
        if pw == q && k >= 1 {
            return Field::new(p, k, None);
        }
    }
    Err(Error::Construction(format!("{q} is not a prime power with p ≤ 7")))
}

/// Lagrange interpolation through the given points; coefficients low-to-high.
fn lagrange(pts: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let n = pts.len();
    let mut acc = vec![BigRational::zero(); n];
    for i in 0..n {
        // basis polynomial Π_{j≠i} (x - x_j)/(x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            // multiply by (x - x_j)
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &pts[j].0;
            }
            basis = next;
            denom *= &pts[i].0 - &pts[j].0;
        }
        let scale = &pts[i].1 / denom;
        for (d, c) in basis.iter().enumerate() {
            acc[d] += c * &scale;
        }
    }
    acc
}

/// Plain-text table of a census report.
pub fn report_text(r: &CensusReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "census N={} q={}", r.n_rank, r.q).unwrap();
    writeln!(out, "total nilpotent: {}", r.total).unwrap();
    writeln!(out, "{:<24} {:>10}", "profile", "count").unwrap();
    for (p, c) in &r.tally {
        writeln!(out, "{:<24} {:>10}", profile_text(p), c).unwrap();
    }
    for ch in &r.checks {
        writeln!(
            out,
            "check {} ... {}",
            ch.name,
            if ch.passed() { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    out
}

pub fn profile_text(p: &Profile) -> String {
    let pairs: Vec<String> = p
        .nonnegative_pairs()
        .iter()
        .map(|(a, d)| format!("{a}:{d}"))
        .collect();
    format!("[{}]", pairs.join(","))
}

pub fn report_csv(r: &CensusReport) -> String {
    let mut out = String::from("profile,count\n");
    for (p, c) in &r.tally {
        out.push_str(&format!("{},{}\n", profile_text(p), c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, k: u32) -> Field {
        Field::new(p, k, None).unwrap()
    }

    #[test]
    fn census_n1() {
        let r = nilpotent_census(&gf(2, 1), 1).unwrap();
        assert_eq!(r.total, 4);
        assert!(r.all_passed());
        assert_eq!(r.tally[&Profile::trivial(3)], 1);
        assert_eq!(r.tally[&Profile::new([(-2, 1), (0, 1), (2, 1)].into())], 3);

        let r4 = nilpotent_census(&gf(2, 2), 1).unwrap();
        assert_eq!(r4.total, 16);
        let r3 = nilpotent_census(&gf(3, 1), 1).unwrap();
        assert_eq!(r3.total, 9);
        let r9 = nilpotent_census(&gf(3, 2), 1).unwrap();
        assert_eq!(r9.total, 81);
    }

    #[test]
    fn census_n2_q2() {
        let r = nilpotent_census(&gf(2, 1), 2).unwrap();
        assert_eq!(r.total, 256);
        assert!(r.all_passed());
        assert_eq!(r.total, r.tally.values().sum::<u64>());
    }

    #[test]
    fn census_guard() {
        assert!(matches!(nilpotent_census(&gf(2, 1), 3), Err(Error::Size(_))));
    }

    #[test]
    fn sm_counts() {
        let f2 = gf(2, 1);
        let c = sm_count(&f2, 1, 1).unwrap();
        assert!(c.passed());
        assert_eq!(c.enumerated, BigInt::from(3));
        let c = sm_count(&f2, 2, 1).unwrap();
        assert!(c.passed());
        assert_eq!(c.enumerated, BigInt::from(15));
        let c = sm_count(&f2, 2, 2).unwrap();
        assert!(c.passed());
        assert_eq!(c.enumerated, BigInt::from(90));
        // S_0 is the empty sequence
        let c = sm_count(&f2, 2, 0).unwrap();
        assert_eq!(c.enumerated, BigInt::from(1));
        // another field for good measure
        let c = sm_count(&gf(3, 1), 1, 1).unwrap();
        assert!(c.passed());
        assert_eq!(c.enumerated, BigInt::from(8));
    }

    #[test]
    fn springer_counts() {
        let f2 = gf(2, 1);
        let c = springer_count(&f2, 2, 0).unwrap();
        assert!(c.passed());
        assert_eq!(c.enumerated, BigInt::from(16));
        let c = springer_count(&f2, 2, 1).unwrap();
        assert!(c.passed());
        assert_eq!(c.enumerated, BigInt::from(1));
        let c = springer_count(&f2, 1, 0).unwrap();
        assert!(c.passed());
        assert_eq!(c.enumerated, BigInt::from(1));
    }

    #[test]
    fn fibers_n2_q2() {
        let checks = fiber_check(&gf(2, 1), 2).unwrap();
        assert!(checks.iter().all(FormulaCheck::passed));
        // fiber sizes 1, 4, 2 at m = 0, 1, 2
        for (m, size) in [(0u32, 1u64), (1, 4), (2, 2)] {
            assert!(checks.iter().any(|c| {
                c.name.contains(&format!("fiber size at N=2, q=2, m={m}"))
                    && c.enumerated == BigInt::from(size)
            }));
        }
    }

    #[test]
    fn fibers_n1_q2() {
        let checks = fiber_check(&gf(2, 1), 1).unwrap();
        assert!(checks.iter().all(FormulaCheck::passed));
        assert!(checks
            .iter()
            .any(|c| c.name.contains("m=0") && c.enumerated == BigInt::one()));
    }

    #[test]
    fn xn_and_master_identities() {
        assert!(xn_identity(10, &[2, 3, 5]));
        assert!(master_identity(4, &[2, 3, 4, 5, 8]));
    }

    #[test]
    fn universality_n1() {
        let rows = universality_check(&[2, 3, 4, 5]).unwrap();
        assert_eq!(rows.len(), 2);
        for row in &rows {
            if row.profile == Profile::trivial(3) {
                assert_eq!(row.polynomial, vec![BigInt::one()]);
            } else {
                // q² - 1
                assert_eq!(
                    row.polynomial,
                    vec![BigInt::from(-1), BigInt::zero(), BigInt::one()]
                );
            }
        }
    }

    #[test]
    fn census_partition_independent() {
        // tally computed with a different chunking must agree
        let field = gf(2, 1);
        let space = QuadraticSpace::standard(&field, 1).unwrap();
        let mut tally: BTreeMap<Profile, u64> = BTreeMap::new();
        for idx in 0..form_count(&space) {
            let b = form_at(&space, idx);
            if is_nilpotent(&b).unwrap() {
                let r = crate::classifier::classify(&b).unwrap();
                *tally.entry(r.profile).or_insert(0) += 1;
            }
        }
        let r = nilpotent_census(&field, 1).unwrap();
        assert_eq!(tally, r.tally);
    }
}
