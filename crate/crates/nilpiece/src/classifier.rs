//! The inverse of the bijection between nilpotent forms and Q-filtrations:
//! compute, for each nilpotent β_ξ, the unique filtration with β_ξ ∈ η(V_*).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grading::{in_eta, Profile, QFiltration};
use crate::linalg::{vec_add, vec_scale, Matrix, QuotientMap, Subspace, Vector};
use crate::nilcone::{extract_chain, is_nilpotent, odd_char_endo, ChainData};
use crate::quadspace::{AlternatingForm, QuadraticSpace};

#[derive(Clone, Debug)]
pub struct LevelTrace {
    pub depth: usize,
    pub dim: usize,
    pub m: usize,
    pub lambda1: usize,
    pub l1: usize,
    pub rho_zero: bool,
    pub case_tag: &'static str,
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub filtration: QFiltration,
    pub profile: Profile,
    /// One record per characteristic-2 recursion level with a nonzero form.
    pub trace: Vec<LevelTrace>,
}

pub fn piece_label(r: &ClassificationResult) -> Profile {
    r.profile.clone()
}

fn w_coords_to_ambient(w: &Subspace, coords: &[u32]) -> Vector {
    let f = w.field();
    let mut out = vec![0u32; w.ambient()];
    for (c, b) in coords.iter().zip(w.basis_vectors()) {
        out = vec_add(f, &out, &vec_scale(f, *c, &b));
    }
    out
}

/// The kernel of w ↦ Q(T^{l₁-1}w) on a subspace of W given by W-coordinate
/// rows; √Q is additive in characteristic 2, so this is the kernel of the
/// semilinear functional, i.e. of the row [√Q(T^{l₁-1}b_i)].
fn q_power_kernel(
    space: &QuadraticSpace,
    chain: &ChainData,
    within: &Matrix, // rows = W-coordinate basis of the domain
    power: usize,
) -> Result<Subspace> {
    let f = space.field();
    let tp = chain.t.pow(power);
    let mut row = Vec::with_capacity(within.rows());
    for i in 0..within.rows() {
        let img = w_coords_to_ambient(&chain.w, &tp.apply(&within.row(i)));
        row.push(f.elt(space.q_eval(&img)).sqrt_char2()?.code());
    }
    let ker = Matrix::from_rows(f, vec![row]).kernel_basis();
    // back to ambient vectors
    let mut vs = Vec::new();
    for r in 0..ker.rows() {
        let mut coords = vec![0u32; chain.w.dim()];
        for (c, i) in ker.row(r).iter().zip(0..within.rows()) {
            coords = vec_add(f, &coords, &vec_scale(f, *c, &within.row(i)));
        }
        vs.push(w_coords_to_ambient(&chain.w, &coords));
    }
    Ok(Subspace::span(f, space.dim(), &vs))
}

/// H_{β_ξ} with its case tag and the n value of the degree-range lemma.
/// Characteristic 2, B nilpotent and nonzero.
pub fn compute_h(
    chain: &ChainData,
    form: &AlternatingForm,
) -> Result<(Subspace, &'static str, usize)> {
    let space = form.space();
    let f = space.field();
    if form.is_zero() {
        return Err(Error::ZeroInput);
    }
    let m = chain.m;
    let lambda1 = chain.lambda1.ok_or(Error::NotNilpotent)?;
    let l1 = chain.l1.ok_or(Error::NotNilpotent)?;
    let rho_zero = chain.rho_zero.ok_or(Error::NotNilpotent)?;

    let n = if m >= l1 || (m == lambda1 - l1 && m + 1 == l1) {
        2 * m
    } else if m == lambda1 - l1 && m + 1 < l1 && rho_zero {
        lambda1 - 1
    } else {
        l1 + m - 1
    };

    let ker_t_top = if lambda1 == 0 {
        Matrix::identity(f, chain.w.dim())
    } else {
        chain.t.pow(lambda1 - 1).kernel_basis()
    };
    // Λ_W per the two printed rules; on m = λ₁-l₁ < l₁ the domain is ker
    // T^{λ₁-1}, otherwise all of W
    let lambda_w = |domain_all_w: bool| -> Result<Subspace> {
        let within = if domain_all_w {
            Matrix::identity(f, chain.w.dim())
        } else {
            ker_t_top.clone()
        };
        q_power_kernel(space, chain, &within, l1.saturating_sub(1))
    };

    let span_v = |hi: usize| -> Vec<Vector> { chain.v[..=hi].to_vec() };
    let u_mid: Vec<Vector> = if m >= 1 { chain.u[1..].to_vec() } else { Vec::new() };

    let (parts, tag): (Vec<Vector>, &'static str) = if m == 0 {
        // Λ_W = ker ρ (l₁ = λ₁ when m = 0)
        let mut vs = vec![chain.v[m].clone()];
        vs.extend(lambda_w(false)?.basis_vectors());
        (vs, "m0")
    } else if m >= l1 {
        let mut vs = span_v(m);
        vs.extend(u_mid.iter().cloned());
        vs.extend(chain.w.basis_vectors());
        (vs, "regular")
    } else if lambda1 - l1 < m || m + 1 == l1 || !rho_zero {
        // λ₁-l₁ < m < l₁, or 0 < m = λ₁-l₁ = l₁-1, or 0 < m = λ₁-l₁ < l₁-1
        // with ρ ≠ 0
        let lw = lambda_w(lambda1 - l1 < m)?;
        let mut vs = span_v(m);
        vs.extend(u_mid.iter().cloned());
        vs.extend(lw.basis_vectors());
        (vs, "middle")
    } else if m == lambda1 - l1 && m + 1 < l1 && rho_zero {
        // w_*: β(w_*, w)² = Q(T^{l₁-1}w) for all w ∈ W
        let wd = chain.w.dim();
        let tp = chain.t.pow(l1 - 1);
        let mut gram = Matrix::zero(f, wd, wd);
        for j in 0..wd {
            for i in 0..wd {
                gram.set_code(
                    j,
                    i,
                    space.beta_eval(&chain.w.basis().row(i), &chain.w.basis().row(j)),
                );
            }
        }
        let rhs: Vector = (0..wd)
            .map(|j| {
                let img = w_coords_to_ambient(&chain.w, &tp.apply(&unit(wd, j)));
                f.elt(space.q_eval(&img)).sqrt_char2().map(|e| e.code())
            })
            .collect::<Result<_>>()?;
        let w_star = gram.solve(&rhs).ok_or_else(|| {
            Error::InternalInvariantViolation("no w_* for ρ = 0 case".into())
        })?;
        let w_star_star = chain.t.pow(lambda1 - 1).solve(&w_star).ok_or_else(|| {
            Error::InternalInvariantViolation("w_* not in the image of T^{λ₁-1}".into())
        })?;
        let w_ss_amb = w_coords_to_ambient(&chain.w, &w_star_star);
        // ρ = 0 means Λ_W = ker ρ = ker T^{λ₁-1}
        let mut vs = span_v(m);
        vs.extend(u_mid.iter().cloned());
        vs.push(vec_add(f, &chain.u[0], &w_ss_amb));
        let mut lw = Vec::new();
        for r in 0..ker_t_top.rows() {
            lw.push(w_coords_to_ambient(&chain.w, &ker_t_top.row(r)));
        }
        vs.extend(lw);
        (vs, "rho-zero")
    } else {
        return Err(Error::InternalInvariantViolation(
            "H case dispatch fell through".into(),
        ));
    };
    Ok((Subspace::span(f, space.dim(), &parts), tag, n))
}

fn unit(n: usize, j: usize) -> Vector {
    let mut v = vec![0u32; n];
    v[j] = 1;
    v
}

/// Subspace {v ∈ U : Q(v) = 0} in characteristic 2, where β vanishes between
/// the radical direction and U (so √Q is semilinear on U).
fn isotropic_kernel(space: &QuadraticSpace, u: &Subspace) -> Result<Subspace> {
    let f = space.field();
    let mut row = Vec::with_capacity(u.dim());
    for b in u.basis_vectors() {
        row.push(f.elt(space.q_eval(&b)).sqrt_char2()?.code());
    }
    // semilinearity check: √Q(x+y) = √Q(x) + √Q(y) needs β(x,y) = 0 on U
    for x in u.basis_vectors() {
        for y in u.basis_vectors() {
            if space.beta_eval(&x, &y) != 0 {
                return Err(Error::InternalInvariantViolation(
                    "Q is not semilinear on H^⊥".into(),
                ));
            }
        }
    }
    let ker = Matrix::from_rows(f, vec![row]).kernel_basis();
    let mut vs = Vec::new();
    for r in 0..ker.rows() {
        let mut v = vec![0u32; space.dim()];
        for (c, b) in ker.row(r).iter().zip(u.basis_vectors()) {
            v = vec_add(f, &v, &vec_scale(f, *c, &b));
        }
        vs.push(v);
    }
    Ok(Subspace::span(f, space.dim(), &vs))
}

fn quotient_space(
    space: &QuadraticSpace,
    form: &AlternatingForm,
    h: &Subspace,
    l: &Subspace,
) -> Result<(QuotientMap, QuadraticSpace, AlternatingForm)> {
    let f = space.field();
    let qm = QuotientMap::new(h, l)?;
    let d = qm.quotient_dim();
    let sec = qm.section_basis();
    let mut gram_upper = Matrix::zero(f, d, d);
    for i in 0..d {
        gram_upper.set_code(i, i, space.q_eval(&sec[i]));
        for j in i + 1..d {
            gram_upper.set_code(i, j, space.beta_eval(&sec[i], &sec[j]));
        }
    }
    let qspace = QuadraticSpace::with_gram(f, gram_upper)?;
    let mut bgram = Matrix::zero(f, d, d);
    for i in 0..d {
        for j in 0..d {
            bgram.set_code(i, j, form.eval(&sec[i], &sec[j]));
        }
    }
    let qform = AlternatingForm::new(&qspace, bgram)?;
    Ok((qm, qspace, qform))
}

/// Levels V^{≥a} on `space`, recorded for every a with a jump, plus the top
/// degree n of this level.
fn classify_char2(
    space: &QuadraticSpace,
    form: &AlternatingForm,
    depth: usize,
    trace: &mut Vec<LevelTrace>,
) -> Result<BTreeMap<i64, Subspace>> {
    let f = space.field();
    let dim = space.dim();
    if form.is_zero() || dim <= 1 {
        let mut out = BTreeMap::new();
        out.insert(0, Subspace::full(f, dim));
        out.insert(1, Subspace::zero(f, dim));
        return Ok(out);
    }
    let chain = extract_chain(form)?.ok_or(Error::NotNilpotent)?;
    if !chain.t_is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let (h, tag, n) = compute_h(&chain, form)?;
    trace.push(LevelTrace {
        depth,
        dim,
        m: chain.m,
        lambda1: chain.lambda1.unwrap(),
        l1: chain.l1.unwrap(),
        rho_zero: chain.rho_zero.unwrap(),
        case_tag: tag,
        n,
    });
    let h_perp = space.perp(&h);
    let l = isotropic_kernel(space, &h_perp)?;
    for x in l.basis_vectors() {
        for j in 0..dim {
            if form.eval(&x, &unit(dim, j)) != 0 {
                return Err(Error::InternalInvariantViolation("β_ξ(L, V) ≠ 0".into()));
            }
        }
    }
    if !h.contains(&l)? {
        return Err(Error::InternalInvariantViolation("L ⊄ H".into()));
    }
    let (qm, qspace, qform) = quotient_space(space, form, &h, &l)?;
    let inner = classify_char2(&qspace, &qform, depth + 1, trace)?;
    let n = n as i64;
    let mut out = BTreeMap::new();
    out.insert(-n + 1, h.clone());
    out.insert(n, l.clone());
    out.insert(n + 1, Subspace::zero(f, dim));
    for a in -n + 2..=n - 1 {
        // lift π^{-1} of the inner level through the section
        let mut lo = None;
        for (&b, s) in inner.iter() {
            if b <= a {
                lo = Some(s.clone());
            }
        }
        let inner_level = lo.unwrap_or_else(|| Subspace::full(qspace.field(), qspace.dim()));
        let mut vs = l.basis_vectors();
        for b in inner_level.basis_vectors() {
            vs.push(qm.lift(&b));
        }
        out.insert(a, Subspace::span(f, dim, &vs));
    }
    Ok(out)
}

/// The weight filtration of a nilpotent A raising degree by 2:
/// V^{≥a} = Σ_i im(A^i) ∩ ker(A^{i+1-a}).
fn weight_filtration(space: &QuadraticSpace, a_endo: &Matrix) -> Result<BTreeMap<i64, Subspace>> {
    let f = space.field();
    let dim = space.dim();
    if !a_endo.is_nilpotent_endo() {
        return Err(Error::NotNilpotent);
    }
    let mut out = BTreeMap::new();
    for a in -(dim as i64)..=dim as i64 + 1 {
        let mut acc = Subspace::zero(f, dim);
        for i in 0..=dim {
            let e = i as i64 + 1 - a;
            if e <= 0 {
                continue;
            }
            let image = {
                let p = a_endo.pow(i);
                let cols: Vec<Vector> = (0..dim).map(|c| p.col(c)).collect();
                Subspace::span(f, dim, &cols)
            };
            let kernel = Subspace::from_kernel(&a_endo.pow((e as usize).min(dim + 1)));
            acc = acc.sum(&image.intersect(&kernel)?)?;
        }
        out.insert(a, acc);
    }
    Ok(out)
}

pub fn classify(form: &AlternatingForm) -> Result<ClassificationResult> {
    let space = form.space();
    if !is_nilpotent(form)? {
        return Err(Error::NotNilpotent);
    }
    let mut trace = Vec::new();
    let levels = if space.field().characteristic() == 2 {
        classify_char2(space, form, 0, &mut trace)?
    } else {
        weight_filtration(space, &odd_char_endo(form)?)?
    };
    let filtration = QFiltration::new(space, levels)
        .map_err(|e| Error::InternalInvariantViolation(format!("bad filtration: {e}")))?;
    if !in_eta(&filtration, form)? {
        return Err(Error::InternalInvariantViolation(
            "classified filtration fails η membership".into(),
        ));
    }
    let profile = filtration.profile();
    Ok(ClassificationResult { filtration, profile, trace })
}
