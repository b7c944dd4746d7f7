//! Nilpotency of alternating forms and canonical chain data (characteristic 2).
//!
//! For a nilpotent form B = β_ξ in characteristic 2 there is a unique chain
//! v_0, ..., v_m with β(v_m, ·) = 0, β_ξ(v_i, ·) = β(v_{i-1}, ·), β_ξ(v_0, ·)
//! = 0, Q(v_i) = 0 for i < m and Q(v_m) = 1. The chain, the dual vectors u_i,
//! the complement W with its induced nilpotent map T, and the invariants
//! (λ₁, f, l₁, ρ) drive the classifier's case analysis.

use crate::error::{Error, Result};
use crate::linalg::{vec_add, vec_is_zero, vec_scale, Matrix, QuotientMap, Subspace, Vector};
use crate::quadspace::AlternatingForm;

#[derive(Clone, Debug)]
pub struct ChainData {
    pub m: usize,
    /// v_0, ..., v_m in that order.
    pub v: Vec<Vector>,
    /// u_0, ..., u_{m-1}; empty when m = 0.
    pub u: Vec<Vector>,
    pub w: Subspace,
    /// Matrix of T on the basis of `w` (square, dim w).
    pub t: Matrix,
    /// Invariants of T; populated only when T is nilpotent.
    pub lambda1: Option<usize>,
    pub f: Option<usize>,
    pub l1: Option<usize>,
    /// Whether ρ: ker T^{λ₁-1} → k, w ↦ Q(T^{l₁-1} w), vanishes identically.
    pub rho_zero: Option<bool>,
}

impl ChainData {
    pub fn t_is_nilpotent(&self) -> bool {
        self.lambda1.is_some()
    }

    /// T^e applied to an ambient vector of W, staying in ambient coordinates.
    pub fn t_power_apply(&self, form: &AlternatingForm, e: usize, v: &[u32]) -> Vector {
        let mut coords = self
            .w
            .coordinates(v)
            .expect("vector must lie in W");
        for _ in 0..e {
            coords = self.t.apply(&coords);
        }
        w_to_ambient(&self.w, &coords, form)
    }
}

fn w_to_ambient(w: &Subspace, coords: &[u32], form: &AlternatingForm) -> Vector {
    let f = form.field();
    let mut out = vec![0u32; w.ambient()];
    for (c, b) in coords.iter().zip(w.basis_vectors()) {
        out = vec_add(f, &out, &vec_scale(f, *c, &b));
    }
    out
}

/// Radical vector scaled so Q = 1 (char 2: c = sqrt(1/Q(r)) works since
/// Q(cr) = c²Q(r)).
fn scaled_radical_vector(form: &AlternatingForm) -> Result<Vector> {
    let space = form.space();
    let f = form.field();
    if f.characteristic() != 2 {
        return Err(Error::Characteristic { expected: 2, found: f.characteristic() });
    }
    let rad = space.radical();
    if rad.dim() != 1 {
        return Err(Error::InternalInvariantViolation(format!(
            "char-2 odd-dimensional radical should be a line, found dim {}",
            rad.dim()
        )));
    }
    let r = rad.basis().row(0);
    let qr = f.elt(space.q_eval(&r));
    let c = qr.inv()?.sqrt_char2()?;
    Ok(vec_scale(f, c.code(), &r))
}

/// The unique v-chain of a nilpotent form, bottom-up from v_m.
/// Returns (m, [v_0..v_m]) or None when the defining system has no solution
/// (which certifies non-nilpotency once T' is also taken into account).
fn v_chain(form: &AlternatingForm) -> Result<Option<(usize, Vec<Vector>)>> {
    let space = form.space();
    let f = form.field();
    let dim = space.dim();
    let v_m = scaled_radical_vector(form)?;
    let mut rev = vec![v_m.clone()]; // v_m, v_{m-1}, ...
    let mut cur = v_m.clone();
    loop {
        // stop: β_ξ(cur, ·) = 0 makes cur = v_0
        if vec_is_zero(&form.gram().transpose().apply(&cur)) {
            break;
        }
        if rev.len() > dim {
            return Ok(None);
        }
        // solve β(x, v) = β_ξ(cur, v) for all v: β x = Bᵀ cur (β symmetric in char 2)
        let rhs = form.gram().transpose().apply(&cur);
        let Some(mut x) = space.beta().solve(&rhs) else {
            return Ok(None);
        };
        // the solution is unique up to the radical; fix Q(x) = 0 by a radical
        // correction (Q(x + c v_m) = Q(x) + c²)
        let qx = f.elt(space.q_eval(&x));
        let c = qx.sqrt_char2()?;
        x = vec_add(f, &x, &vec_scale(f, c.code(), &v_m));
        debug_assert_eq!(space.q_eval(&x), 0);
        // independence from the chain so far
        let span = Subspace::span(f, dim, &rev);
        if span.contains_vec(&x) {
            return Ok(None);
        }
        rev.push(x.clone());
        cur = x;
    }
    let m = rev.len() - 1;
    rev.reverse(); // now v_0, ..., v_m
    Ok(Some((m, rev)))
}

/// u_0 satisfying β(u_0, v_0) = 1, β(u_0, v_i) = 0 for i in [1, m-1],
/// Q(u_0) = 0, chosen by the deterministic solver. `lift` offsets the free
/// solution by an element of the kernel for choice-independence tests.
fn choose_u0(form: &AlternatingForm, v: &[Vector], perturbation: Option<&[u32]>) -> Result<Vector> {
    let space = form.space();
    let f = form.field();
    let m = v.len() - 1;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, vi) in v.iter().enumerate().take(m) {
        rows.push(space.beta().apply(vi));
        rhs.push(if i == 0 { 1 } else { 0 });
    }
    let sys = Matrix::from_rows(f, rows);
    let mut u0 = sys
        .solve(&rhs)
        .ok_or_else(|| Error::InternalInvariantViolation("u_0 system unsolvable".into()))?;
    if let Some(pert) = perturbation {
        debug_assert!(vec_is_zero(&sys.apply(pert)));
        u0 = vec_add(f, &u0, pert);
    }
    // radical correction forces Q(u_0) = 0 without touching the β constraints
    let v_m = &v[m];
    let c = f.elt(space.q_eval(&u0)).sqrt_char2()?;
    Ok(vec_add(f, &u0, &vec_scale(f, c.code(), v_m)))
}

/// Kernel of the u_0 constraint system; perturbations for the retry hook live
/// here (plus the Q-correction applied afterwards).
pub fn u0_freedom(form: &AlternatingForm, chain: &ChainData) -> Subspace {
    let space = form.space();
    let f = form.field();
    let m = chain.m;
    let mut rows = Vec::with_capacity(m);
    for vi in chain.v.iter().take(m) {
        rows.push(space.beta().apply(vi));
    }
    if rows.is_empty() {
        return Subspace::full(f, space.dim());
    }
    Subspace::from_kernel(&Matrix::from_rows(f, rows))
}

/// Canonical chain data for a char-2 form, or None when no v-chain exists.
pub fn extract_chain(form: &AlternatingForm) -> Result<Option<ChainData>> {
    extract_chain_with_u0(form, None)
}

/// Variant taking a perturbation of u_0 inside its admissible freedom, used to
/// exercise the choice-independence statements.
pub fn extract_chain_with_u0(
    form: &AlternatingForm,
    u0_perturbation: Option<&[u32]>,
) -> Result<Option<ChainData>> {
    let space = form.space();
    let f = form.field();
    let dim = space.dim();
    let Some((m, v)) = v_chain(form)? else {
        return Ok(None);
    };

    // u-chain: u_0 from the constraints, then β(u_i, ·) = β_ξ(u_{i-1}, ·),
    // Q(u_i) = 0 (unique: the radical correction is forced).
    let mut u: Vec<Vector> = Vec::new();
    if m > 0 {
        let u0 = choose_u0(form, &v, u0_perturbation)?;
        u.push(u0);
        for i in 1..m {
            let rhs = form.gram().transpose().apply(&u[i - 1]);
            let Some(mut x) = space.beta().solve(&rhs) else {
                return Ok(None);
            };
            let c = f.elt(space.q_eval(&x)).sqrt_char2()?;
            x = vec_add(f, &x, &vec_scale(f, c.code(), &v[m]));
            u.push(x);
        }
    }

    // W: for m = 0 a complement of span{v_m}; for m > 0 the common kernel of
    // β(·, v_i), β(·, u_i) for i in [0, m-1] and β_ξ(·, u_{m-1}).
    let w = if m == 0 {
        Subspace::span(f, dim, &[v[m].clone()])
            .complement(&Subspace::full(f, dim))?
    } else {
        let mut rows = Vec::with_capacity(2 * m + 1);
        for vi in v.iter().take(m) {
            rows.push(space.beta().apply(vi));
        }
        for ui in u.iter().take(m) {
            rows.push(space.beta().apply(ui));
        }
        rows.push(form.gram().apply(&u[m - 1]));
        Subspace::from_kernel(&Matrix::from_rows(f, rows))
    };

    // direct-sum decomposition sanity
    {
        let mut all = v.clone();
        all.extend(u.iter().cloned());
        all.extend(w.basis_vectors());
        if Subspace::span(f, dim, &all).dim() != dim || m + 1 + u.len() + w.dim() != dim {
            return Ok(None);
        }
    }

    // T on W: β(Tw, w') = β_ξ(w, w'); W-Gram is nondegenerate
    let wb = w.basis_vectors();
    let d = w.dim();
    let mut gram_w = Matrix::zero(f, d, d);
    let mut xi_w = Matrix::zero(f, d, d);
    for i in 0..d {
        for j in 0..d {
            gram_w.set_code(i, j, space.beta_eval(&wb[i], &wb[j]));
            xi_w.set_code(i, j, form.eval(&wb[i], &wb[j]));
        }
    }
    if d > 0 && !gram_w.is_invertible() {
        return Ok(None);
    }
    // column j of T: coefficients c with Σ_i c_i β(w_i, w_l) = β_ξ(w_j, w_l)
    let mut t = Matrix::zero(f, d, d);
    let gram_t = gram_w.transpose();
    for j in 0..d {
        let rhs = xi_w.row(j);
        let c = gram_t.solve(&rhs).expect("nondegenerate W-Gram");
        for i in 0..d {
            t.set_code(i, j, c[i]);
        }
    }

    let mut chain = ChainData {
        m,
        v,
        u,
        w,
        t,
        lambda1: None,
        f: None,
        l1: None,
        rho_zero: None,
    };
    fill_invariants(form, &mut chain);
    Ok(Some(chain))
}

/// λ₁, f, l₁ and the ρ-flag; only meaningful when T is nilpotent.
/// The zero form gets λ₁ = f = l₁ = 0 (ξ = 0 iff m = λ₁ = 0).
fn fill_invariants(form: &AlternatingForm, chain: &mut ChainData) {
    let space = form.space();
    let fld = form.field();
    let d = chain.w.dim();
    if form.is_zero() {
        chain.lambda1 = Some(0);
        chain.f = Some(0);
        chain.l1 = Some(0);
        chain.rho_zero = Some(true);
        return;
    }
    if d > 0 && !chain.t.is_nilpotent_endo() {
        return;
    }
    let lambda1 = (0..=d).find(|&e| chain.t.pow(e).rank() == 0).unwrap();
    // f: least e with Q(T^e W) = 0. Q(T^e w) for w over a basis does not
    // suffice in general, so evaluate on the image space via its basis plus
    // cross terms: Q(Σ aᵢxᵢ) = Σ aᵢ²Q(xᵢ) + Σ aᵢaⱼβ(xᵢ,xⱼ); on T^e W the β
    // values need not vanish, so test all vectors of the (small) image.
    let image_q_zero = |e: usize| -> bool {
        let te = chain.t.pow(e);
        let img: Vec<Vector> = (0..d)
            .map(|j| w_to_ambient(&chain.w, &te.col(j), form))
            .collect();
        let img_space = Subspace::span(fld, space.dim(), &img);
        crate::linalg::enumerate_span(fld, &img_space.basis_vectors())
            .iter()
            .all(|x| space.q_eval(x) == 0)
    };
    let f_inv = (0..=lambda1).find(|&e| image_q_zero(e)).unwrap();
    let l1 = f_inv.max(lambda1.saturating_sub(chain.m));
    // ρ on ker T^{λ₁-1}: w ↦ Q(T^{l₁-1} w). Additive there (see the kernel
    // argument in the classifier), so a basis check decides vanishing.
    let rho_zero = if lambda1 == 0 {
        true
    } else {
        let ker = Subspace::from_kernel(&chain.t.pow(lambda1 - 1));
        let tl = chain.t.pow(l1 - 1);
        let mut zero = true;
        for i in 0..ker.dim() {
            let x = w_to_ambient(&chain.w, &tl.apply(&ker.basis().row(i)), form);
            if space.q_eval(&x) != 0 {
                zero = false;
                break;
            }
        }
        if zero {
            // rule out non-additivity surprises on pairs
            for i in 0..ker.dim() {
                for j in 0..i {
                    let s = vec_add(fld, &ker.basis().row(i), &ker.basis().row(j));
                    let x = w_to_ambient(&chain.w, &tl.apply(&s), form);
                    if space.q_eval(&x) != 0 {
                        zero = false;
                    }
                }
            }
        }
        zero
    };
    chain.lambda1 = Some(lambda1);
    chain.f = Some(f_inv);
    chain.l1 = Some(l1);
    chain.rho_zero = Some(rho_zero);
}

#[derive(Clone, Debug)]
pub struct InducedPair {
    /// v_0, ..., v_{m-1} (the S_m part of the pair).
    pub v_star: Vec<Vector>,
    pub quotient: QuotientMap,
    /// Quotient-coordinate Gram of the induced β'.
    pub beta_q: Matrix,
    /// Quotient-coordinate Gram of the induced β'_ξ.
    pub xi_q: Matrix,
    /// T' on quotient coordinates: β'(T'x, y) = β'_ξ(x, y).
    pub t_prime: Matrix,
}

/// The pair (v_*, T'_ξ) on V' = L^⊥ / L with L = span{v_0, ..., v_m}.
pub fn induced_pair(chain: &ChainData, form: &AlternatingForm) -> Result<InducedPair> {
    let space = form.space();
    let f = form.field();
    let dim = space.dim();
    let l = Subspace::span(f, dim, &chain.v);
    let l_perp = space.perp(&l);
    if !l_perp.contains(&l)? {
        return Err(Error::InternalInvariantViolation("L not isotropic for β".into()));
    }
    // β_ξ(L, L^⊥) = 0 makes the induced form well defined
    for x in l.basis_vectors() {
        for y in l_perp.basis_vectors() {
            if form.eval(&x, &y) != 0 {
                return Err(Error::InternalInvariantViolation(
                    "β_ξ(L, L^⊥) ≠ 0: chain data inconsistent".into(),
                ));
            }
        }
    }
    let quotient = QuotientMap::new(&l_perp, &l)?;
    let d = quotient.quotient_dim();
    let sec = quotient.section_basis().to_vec();
    let mut beta_q = Matrix::zero(f, d, d);
    let mut xi_q = Matrix::zero(f, d, d);
    for i in 0..d {
        for j in 0..d {
            beta_q.set_code(i, j, space.beta_eval(&sec[i], &sec[j]));
            xi_q.set_code(i, j, form.eval(&sec[i], &sec[j]));
        }
    }
    if d > 0 && !beta_q.is_invertible() {
        return Err(Error::InternalInvariantViolation("β' degenerate on V'".into()));
    }
    let mut t_prime = Matrix::zero(f, d, d);
    let bt = beta_q.transpose();
    for j in 0..d {
        let c = bt.solve(&xi_q.row(j)).expect("β' nondegenerate");
        for i in 0..d {
            t_prime.set_code(i, j, c[i]);
        }
    }
    Ok(InducedPair {
        v_star: chain.v[..chain.m].to_vec(),
        quotient,
        beta_q,
        xi_q,
        t_prime,
    })
}

/// Exact membership in the nilpotent cone.
///
/// Characteristic 2: a v-chain must exist and the induced T' must be
/// nilpotent. Odd characteristic: the endomorphism A with β(Av, v') =
/// β_ξ(v, v') must be nilpotent.
pub fn is_nilpotent(form: &AlternatingForm) -> Result<bool> {
    if form.field().characteristic() == 2 {
        let Some(chain) = extract_chain(form)? else {
            return Ok(false);
        };
        let pair = induced_pair(&chain, form)?;
        Ok(pair.t_prime.is_nilpotent_endo())
    } else {
        Ok(odd_char_endo(form)?.is_nilpotent_endo())
    }
}

/// Odd characteristic: the unique A with β(Av, v') = β_ξ(v, v').
pub fn odd_char_endo(form: &AlternatingForm) -> Result<Matrix> {
    let space = form.space();
    let f = form.field();
    if f.characteristic() == 2 {
        return Err(Error::Characteristic { expected: f.p(), found: 2 });
    }
    let dim = space.dim();
    // β nondegenerate in odd char; column j of A solves β(A e_j, e_l) = β_ξ(e_j, e_l)
    let bt = space.beta().transpose();
    let mut a = Matrix::zero(f, dim, dim);
    for j in 0..dim {
        let rhs: Vector = (0..dim).map(|l| form.gram().code(j, l)).collect();
        let c = bt.solve(&rhs).ok_or_else(|| {
            Error::InternalInvariantViolation("β degenerate in odd characteristic".into())
        })?;
        for i in 0..dim {
            a.set_code(i, j, c[i]);
        }
    }
    Ok(a)
}

/// Nilpotency via the good-basis criterion: some good basis (e_i) has
/// β_ξ(e_i, e_j) = 0 whenever i + j ≥ 0. Good bases are exactly the isometry
/// images of the standard one, so the isometry list is exhausted.
pub fn good_basis_oracle(form: &AlternatingForm) -> Result<bool> {
    let space = form.space();
    if space.dim() > 5 || space.field().order() > 4 {
        return Err(Error::Size("good-basis oracle is limited to dim ≤ 5, q ≤ 4".into()));
    }
    let group = crate::group::enumerate_isometries(space)?;
    let n_rank = (space.dim() - 1) / 2;
    let nr = n_rank as i64;
    Ok(group.elements.iter().any(|g| {
        for i in -nr..=nr {
            for j in -nr..=nr {
                if i + j >= 0 {
                    let ei = g.apply(&space.good_vector(i));
                    let ej = g.apply(&space.good_vector(j));
                    if form.eval(&ei, &ej) != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::quadspace::{enumerate_forms, QuadraticSpace};

    fn gf(p: u32, k: u32) -> Field {
        Field::new(p, k, None).unwrap()
    }

    fn dim3_gf2() -> QuadraticSpace {
        QuadraticSpace::standard(&gf(2, 1), 1).unwrap()
    }

    fn form_from_pairs(space: &QuadraticSpace, pairs: &[(usize, usize, u32)]) -> AlternatingForm {
        let f = space.field();
        let mut gram = Matrix::zero(f, space.dim(), space.dim());
        for &(i, j, c) in pairs {
            gram.set_code(i, j, c);
            gram.set_code(j, i, f.neg_code(c));
        }
        AlternatingForm::new(space, gram).unwrap()
    }

    // coordinates: index 0,1,2 = e_{-1}, e_0, e_1
    fn regular_dim3(space: &QuadraticSpace) -> AlternatingForm {
        form_from_pairs(space, &[(0, 1, 1)])
    }

    #[test]
    fn zero_form_chain() {
        let v = dim3_gf2();
        let b = AlternatingForm::zero(&v);
        let c = extract_chain(&b).unwrap().unwrap();
        assert_eq!(c.m, 0);
        assert_eq!(c.v[0], v.good_vector(0));
        assert_eq!(c.w.dim(), 2);
        assert!(c.t.is_zero());
        assert_eq!(c.lambda1, Some(0));
        assert_eq!(c.l1, Some(0));
    }

    #[test]
    fn regular_chain() {
        let v = dim3_gf2();
        let b = regular_dim3(&v);
        let c = extract_chain(&b).unwrap().unwrap();
        assert_eq!(c.m, 1);
        assert_eq!(c.v, vec![v.good_vector(1), v.good_vector(0)]);
        assert_eq!(c.u, vec![v.good_vector(-1)]);
        assert!(c.w.is_zero());
        assert_eq!(c.lambda1, Some(0));
        assert_eq!(c.f, Some(0));
        assert_eq!(c.l1, Some(0));
    }

    #[test]
    fn chain_invariants_hold_for_all_nilpotent_dim3() {
        let v = dim3_gf2();
        for b in enumerate_forms(&v) {
            let Some(c) = extract_chain(&b).unwrap() else { continue };
            let dim = v.dim();
            // §2.4(a) relations on the standard basis
            for l in 0..dim {
                let mut el = vec![0u32; dim];
                el[l] = 1;
                assert_eq!(v.beta_eval(&c.v[c.m], &el), 0);
                assert_eq!(b.eval(&c.v[0], &el), 0);
                for i in 1..=c.m {
                    assert_eq!(b.eval(&c.v[i], &el), v.beta_eval(&c.v[i - 1], &el));
                }
            }
            for i in 0..c.m {
                assert_eq!(v.q_eval(&c.v[i]), 0);
            }
            assert_eq!(v.q_eval(&c.v[c.m]), 1);
            // decomposition dims
            assert_eq!(c.m + 1 + c.u.len() + c.w.dim(), dim);
            // T relation on the W basis
            let wb = c.w.basis_vectors();
            for (i, wi) in wb.iter().enumerate() {
                let twi = c.t_power_apply(&b, 1, wi);
                for wj in &wb {
                    assert_eq!(v.beta_eval(&twi, wj), b.eval(wi, wj));
                }
                let _ = i;
            }
            if let (Some(l1), Some(lam)) = (c.l1, c.lambda1) {
                if !b.is_zero() {
                    assert!(l1 >= lam.div_ceil(2));
                    assert!(c.m + l1 >= lam);
                }
            }
        }
    }

    #[test]
    fn induced_pair_examples() {
        let v = dim3_gf2();
        // zero form: V' has dim 2, T' = 0
        let b = AlternatingForm::zero(&v);
        let c = extract_chain(&b).unwrap().unwrap();
        let p = induced_pair(&c, &b).unwrap();
        assert_eq!(p.quotient.quotient_dim(), 2);
        assert!(p.t_prime.is_zero());
        // regular: L = span{e_0, e_1} = L^⊥, V' = 0
        let b = regular_dim3(&v);
        let c = extract_chain(&b).unwrap().unwrap();
        let p = induced_pair(&c, &b).unwrap();
        assert_eq!(p.quotient.quotient_dim(), 0);
        // β_ξ(e_{-1}, e_1) = 1: T' = identity
        let b = form_from_pairs(&v, &[(0, 2, 1)]);
        let c = extract_chain(&b).unwrap().unwrap();
        assert_eq!(c.m, 0);
        let p = induced_pair(&c, &b).unwrap();
        assert_eq!(p.t_prime, Matrix::identity(v.field(), 2));
        assert!(!is_nilpotent(&b).unwrap());
    }

    #[test]
    fn nilpotent_counts_small() {
        let v = dim3_gf2();
        let count = enumerate_forms(&v)
            .filter(|b| is_nilpotent(b).unwrap())
            .count();
        assert_eq!(count, 4);

        let f4 = gf(2, 2);
        let v4 = QuadraticSpace::standard(&f4, 1).unwrap();
        let count4 = enumerate_forms(&v4)
            .filter(|b| is_nilpotent(b).unwrap())
            .count();
        assert_eq!(count4, 16);
    }

    #[test]
    fn odd_char_nilpotent_count() {
        let f3 = gf(3, 1);
        let v = QuadraticSpace::standard(&f3, 1).unwrap();
        let count = enumerate_forms(&v)
            .filter(|b| is_nilpotent(b).unwrap())
            .count();
        assert_eq!(count, 9);
        // A actually satisfies its defining relation
        for b in enumerate_forms(&v) {
            let a = odd_char_endo(&b).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let mut ei = vec![0u32; 3];
                    ei[i] = 1;
                    let mut ej = vec![0u32; 3];
                    ej[j] = 1;
                    assert_eq!(v.beta_eval(&a.apply(&ei), &ej), b.eval(&ei, &ej));
                }
            }
        }
    }

    #[test]
    fn chain_uniqueness_dim3() {
        // brute force: the (m, v_0..v_m) solution of the defining relations is
        // unique for every nilpotent form at dim 3 over GF(2)
        let v = dim3_gf2();
        let dim = v.dim();
        let all: Vec<Vector> = crate::linalg::enumerate_span(
            v.field(),
            &Subspace::full(v.field(), dim).basis_vectors(),
        );
        for b in enumerate_forms(&v) {
            if !is_nilpotent(&b).unwrap() {
                continue;
            }
            let c = extract_chain(&b).unwrap().unwrap();
            let mut solutions = Vec::new();
            for m in 0..=1usize {
                let tuples: Vec<Vec<Vector>> = if m == 0 {
                    all.iter().map(|x| vec![x.clone()]).collect()
                } else {
                    let mut ts = Vec::new();
                    for x in &all {
                        for y in &all {
                            ts.push(vec![x.clone(), y.clone()]);
                        }
                    }
                    ts
                };
                'tuple: for vs in tuples {
                    // linear independence
                    if Subspace::span(v.field(), dim, &vs).dim() != vs.len() {
                        continue;
                    }
                    for l in 0..dim {
                        let mut el = vec![0u32; dim];
                        el[l] = 1;
                        if v.beta_eval(&vs[m], &el) != 0 || b.eval(&vs[0], &el) != 0 {
                            continue 'tuple;
                        }
                        for i in 1..=m {
                            if b.eval(&vs[i], &el) != v.beta_eval(&vs[i - 1], &el) {
                                continue 'tuple;
                            }
                        }
                    }
                    for vi in vs.iter().take(m) {
                        if v.q_eval(vi) != 0 {
                            continue 'tuple;
                        }
                    }
                    if v.q_eval(&vs[m]) != 1 {
                        continue;
                    }
                    solutions.push(vs);
                }
            }
            assert_eq!(solutions.len(), 1, "chain not unique");
            assert_eq!(solutions[0], c.v);
        }
    }

    #[test]
    fn u0_choice_does_not_move_invariants() {
        let f2 = gf(2, 1);
        let v5 = QuadraticSpace::standard(&f2, 2).unwrap();
        for b in enumerate_forms(&v5) {
            let Some(c) = extract_chain(&b).unwrap() else { continue };
            if c.m == 0 || !c.t_is_nilpotent() {
                continue;
            }
            let freedom = u0_freedom(&b, &c);
            for pert in crate::linalg::enumerate_span(&f2, &freedom.basis_vectors()) {
                let c2 = extract_chain_with_u0(&b, Some(&pert)).unwrap().unwrap();
                assert_eq!(c.m, c2.m);
                assert_eq!(c.v, c2.v);
                assert_eq!(c.lambda1, c2.lambda1);
                assert_eq!(c.l1, c2.l1);
                assert_eq!(c.rho_zero, c2.rho_zero);
            }
        }
    }
}
