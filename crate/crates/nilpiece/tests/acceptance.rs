//! End-to-end acceptance checklist. Each test prints a single pass/fail line
//! for its criterion and asserts it.

use nilpiece::census;
use nilpiece::classifier::{classify, compute_h};
use nilpiece::field::Field;
use nilpiece::grading::{
    admissible_profiles, all_q_filtrations_dim3, bar_decomposition, bar_form, condition_a,
    enumerate_graded_forms, in_eta, in_s2_0, split_filtration, split_filtration_seeded,
    standard_grading,
};
use nilpiece::group::verify_prop2;
use nilpiece::linalg::{enumerate_span, vec_is_zero, Matrix};
use nilpiece::nilcone::{extract_chain, extract_chain_with_u0, is_nilpotent, u0_freedom};
use nilpiece::quadspace::{enumerate_forms, AlternatingForm, QuadraticSpace};

fn gf(p: u32, k: u32) -> Field {
    Field::new(p, k, None).unwrap()
}

fn report(name: &str, ok: bool) {
    println!("acceptance: {name} ... {}", if ok { "pass" } else { "FAIL" });
    assert!(ok, "{name}");
}

#[test]
fn criterion_1_nilpotent_counts() {
    let mut ok = true;
    // |N(V*)| = q^{2N(N-1)} · X_N-free closed count; at N=1 this is the
    // nilcone of a 3-dim space: q^2 elements, and 256 = 2^8 at N=2, q=2.
    for (p, k, n, expect) in [(2u32, 1u32, 1usize, 4u64), (2, 2, 1, 16), (3, 1, 1, 9), (3, 2, 1, 81), (2, 1, 2, 256)] {
        let r = census::nilpotent_census(&gf(p, k), n).unwrap();
        ok = ok && r.total == expect && r.all_passed();
    }
    report("nilpotent counts 4/16/9/81/256", ok);
}

#[test]
fn criterion_2_bijection_dim3() {
    let mut ok = true;
    for p in [2u32, 3] {
        let space = QuadraticSpace::standard(&gf(p, 1), 1).unwrap();
        let filts = all_q_filtrations_dim3(&space);
        for b in enumerate_forms(&space) {
            if !is_nilpotent(&b).unwrap() {
                continue;
            }
            let r = classify(&b).unwrap();
            let mut hits = 0usize;
            let mut matched = false;
            for filt in &filts {
                if in_eta(filt, &b).unwrap() {
                    hits += 1;
                    matched = matched || *filt == r.filtration;
                }
            }
            ok = ok && hits == 1 && matched;
        }
    }
    report("classification is a bijection onto eta sets at dim 3, q=2,3", ok);
}

#[test]
fn criterion_3_centralizer_criterion() {
    let mut ok = true;
    let cases: [(u32, u32, usize); 4] = [(2, 1, 1), (3, 1, 1), (2, 2, 1), (2, 1, 2)];
    for (p, k, n) in cases {
        let space = QuadraticSpace::standard(&gf(p, k), n).unwrap();
        for prof in admissible_profiles(space.dim()) {
            let filt = standard_grading(&space, &prof).unwrap().filtration();
            let r = verify_prop2(&space, &filt).unwrap();
            ok = ok && r.mismatches.is_empty();
        }
    }
    report("centralizer-stabilizer criterion at dim 3 (q=2,3,4) and dim 5 (q=2)", ok);
}

#[test]
fn criterion_4_counting_identities() {
    let f2 = gf(2, 1);
    let mut ok = true;
    for m in 0..=2usize {
        ok = ok && census::sm_count(&f2, 2, m).unwrap().passed();
        ok = ok && census::springer_count(&f2, 2, m).unwrap().passed();
    }
    ok = ok
        && census::fiber_check(&f2, 2)
            .unwrap()
            .iter()
            .all(census::FormulaCheck::passed);
    ok = ok && census::xn_identity(10, &[2, 3, 5]);
    ok = ok && census::master_identity(4, &[2, 3, 4, 5, 8]);
    report("S_m / Springer-fiber / X_N / master counting identities", ok);
}

#[test]
fn criterion_5_universality() {
    let rows = census::universality_check(&[2, 3, 4, 5]).unwrap();
    // at N=1 the piece sizes are 1 and q^2 - 1 with integer coefficients
    let mut ok = rows.len() == 2;
    for row in &rows {
        let poly: Vec<i64> = row
            .polynomial
            .iter()
            .map(|c| i64::try_from(c.clone()).unwrap())
            .collect();
        ok = ok && (poly == vec![1] || poly == vec![-1, 0, 1]);
    }
    report("piece sizes are universal integer polynomials in q at N=1", ok);
}

#[test]
fn criterion_6a_good_basis_conditions() {
    let mut ok = true;
    for (p, k, n) in [(2u32, 1u32, 1usize), (2, 2, 1), (2, 1, 2)] {
        let space = QuadraticSpace::standard(&gf(p, k), n).unwrap();
        for prof in admissible_profiles(space.dim()) {
            let g = standard_grading(&space, &prof).unwrap();
            for b in enumerate_graded_forms(&g) {
                let direct = condition_a(&g, &b).unwrap();
                let bd = bar_decomposition(&g, &b).unwrap();
                ok = ok && direct == bd.conditions_a1_a2(&space);
            }
        }
    }
    report("condition (a) = (a1)+(a2) at dim 3 (q=2,4) and dim 5 (q=2)", ok);
}

#[test]
fn criterion_6b_grading_choice_independence() {
    let mut ok = true;
    let space = QuadraticSpace::standard(&gf(2, 1), 1).unwrap();
    for b in enumerate_forms(&space) {
        if !is_nilpotent(&b).unwrap() {
            continue;
        }
        let r = match classify(&b) {
            Ok(r) => r,
            Err(_) => continue, // zero form has the trivial filtration only
        };
        let g0 = split_filtration(&r.filtration).unwrap();
        let base = in_s2_0(&g0, &bar_form(&r.filtration, &g0, &b).unwrap()).unwrap();
        for seed in 0..4u64 {
            let g = split_filtration_seeded(&r.filtration, Some(seed)).unwrap();
            let v = in_s2_0(&g, &bar_form(&r.filtration, &g, &b).unwrap()).unwrap();
            ok = ok && v == base;
        }
    }
    report("membership test independent of the grading split", ok);
}

#[test]
fn criterion_6c_equivariance() {
    let mut ok = true;
    let space = QuadraticSpace::standard(&gf(2, 1), 1).unwrap();
    let group = nilpiece::group::enumerate_isometries(&space).unwrap();
    for b in enumerate_forms(&space) {
        if !is_nilpotent(&b).unwrap() {
            continue;
        }
        let r = classify(&b).unwrap();
        for g in group.so_elements() {
            let moved = b.pullback(&g.inverse().unwrap());
            let rm = classify(&moved).unwrap();
            ok = ok && rm.filtration == r.filtration.transform(g).unwrap();
        }
    }
    report("classification commutes with the special orthogonal group", ok);
}

#[test]
fn criterion_6d_u0_choice_independence() {
    let f = gf(2, 1);
    let space = QuadraticSpace::standard(&f, 2).unwrap();
    let mut gram = Matrix::zero(&f, 5, 5);
    gram.set_code(0, 1, 1);
    gram.set_code(1, 0, 1);
    gram.set_code(1, 2, 1);
    gram.set_code(2, 1, 1);
    let b = AlternatingForm::new(&space, gram).unwrap();
    let chain = extract_chain(&b).unwrap().unwrap();
    let (h0, _, n0) = compute_h(&chain, &b).unwrap();
    let mut ok = true;
    for pert in enumerate_span(&f, &u0_freedom(&b, &chain).basis_vectors()) {
        if vec_is_zero(&pert) {
            continue;
        }
        let alt = extract_chain_with_u0(&b, Some(&pert)).unwrap().unwrap();
        let (h, _, n) = compute_h(&alt, &b).unwrap();
        ok = ok && n == n0 && h.equals(&h0).unwrap();
    }
    report("characteristic space independent of the u_0 choice", ok);
}
