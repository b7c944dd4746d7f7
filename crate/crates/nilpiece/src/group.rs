//! Brute-force finite orthogonal groups at desk scale (dim ≤ 5, q ≤ 4).
//!
//! Elements are found by backtracking over the images of the standard basis
//! with incremental Gram and Q constraints. In odd dimension and
//! characteristic 2 the orthogonal group is connected, so SO(V) = O(V) there;
//! in odd characteristic SO(V) is the determinant-1 half.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::quadspace::{AlternatingForm, QuadraticSpace};

#[derive(Clone, Debug)]
pub struct IsometryGroup {
    pub space: QuadraticSpace,
    /// All of O(V).
    pub elements: Vec<Matrix>,
    /// Indices into `elements` forming SO(V).
    pub so_indices: Vec<usize>,
}

impl IsometryGroup {
    pub fn so_elements(&self) -> impl Iterator<Item = &Matrix> + '_ {
        self.so_indices.iter().map(|&i| &self.elements[i])
    }

    pub fn so_order(&self) -> usize {
        self.so_indices.len()
    }
}

/// Complete list of Q-isometries, by basis-image backtracking.
pub fn enumerate_isometries(space: &QuadraticSpace) -> Result<IsometryGroup> {
    let dim = space.dim();
    let f = space.field();
    let q = f.order();
    if dim > 5 || q > 4 {
        return Err(Error::Size(format!(
            "isometry enumeration is limited to dim ≤ 5, q ≤ 4 (got dim {dim}, q {q})"
        )));
    }
    // all vectors of V, the candidate pool for each basis image
    let all: Vec<Vector> = crate::linalg::enumerate_span(
        f,
        &Subspace::full(f, dim).basis_vectors(),
    );
    let std_basis: Vec<Vector> = (0..dim)
        .map(|i| {
            let mut e = vec![0u32; dim];
            e[i] = 1;
            e
        })
        .collect();
    let q_vals: Vec<u32> = std_basis.iter().map(|e| space.q_eval(e)).collect();

    let mut elements = Vec::new();
    let mut images: Vec<Vector> = Vec::with_capacity(dim);
    backtrack(space, &all, &std_basis, &q_vals, &mut images, &mut elements);

    let so_indices = if f.characteristic() == 2 {
        (0..elements.len()).collect()
    } else {
        elements
            .iter()
            .enumerate()
            .filter(|(_, g)| g.determinant().is_one())
            .map(|(i, _)| i)
            .collect()
    };
    Ok(IsometryGroup { space: space.clone(), elements, so_indices })
}

fn backtrack(
    space: &QuadraticSpace,
    all: &[Vector],
    std_basis: &[Vector],
    q_vals: &[u32],
    images: &mut Vec<Vector>,
    out: &mut Vec<Matrix>,
) {
    let dim = space.dim();
    let level = images.len();
    if level == dim {
        // columns assembled; invertibility must still be confirmed
        let f = space.field();
        let mut g = Matrix::zero(f, dim, dim);
        for (c, img) in images.iter().enumerate() {
            for r in 0..dim {
                g.set_code(r, c, img[r]);
            }
        }
        if g.is_invertible() {
            out.push(g);
        }
        return;
    }
    for cand in all {
        if space.q_eval(cand) != q_vals[level] {
            continue;
        }
        let mut ok = true;
        for j in 0..level {
            if space.beta_eval(cand, &images[j])
                != space.beta_eval(&std_basis[level], &std_basis[j])
            {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        images.push(cand.clone());
        backtrack(space, all, std_basis, q_vals, images, out);
        images.pop();
    }
}

/// SO(V)-centralizer of an alternating form: g with B(gv, gv') = B(v, v'),
/// i.e. gᵀ B g = B.
pub fn centralizer<'a>(group: &'a IsometryGroup, form: &AlternatingForm) -> Vec<&'a Matrix> {
    group
        .so_elements()
        .filter(|g| g.transpose().mul(form.gram()).mul(g) == *form.gram())
        .collect()
}

/// Does g preserve every level subspace?
pub fn stabilizes_levels(g: &Matrix, levels: &[Subspace]) -> bool {
    levels.iter().all(|lvl| {
        let f = lvl.field();
        let imgs: Vec<Vector> = lvl.basis_vectors().iter().map(|v| g.apply(v)).collect();
        Subspace::span(f, lvl.ambient(), &imgs)
            .equals(lvl)
            .unwrap_or(false)
    })
}

/// Does g preserve every level of the filtration?
pub fn stabilizes_filtration(g: &Matrix, filt: &crate::grading::QFiltration) -> bool {
    let levels: Vec<Subspace> = filt.levels_changed().into_iter().map(|(_, s)| s).collect();
    stabilizes_levels(g, &levels)
}

#[derive(Clone, Debug)]
pub struct Prop2Report {
    pub profile: crate::grading::Profile,
    pub forms_checked: usize,
    /// Graded forms where [Z(B) ⊆ stabilizer] and B ∈ S(V)₂⁰ disagree.
    pub mismatches: Vec<usize>,
}

/// For every form supported on the degree-(-2) graded pairs of a compatible
/// grading, compare "the SO-centralizer stabilizes the filtration" with
/// membership in S(V)₂⁰. The proposition predicts perfect agreement.
pub fn verify_prop2(
    space: &QuadraticSpace,
    filt: &crate::grading::QFiltration,
) -> Result<Prop2Report> {
    let q = space.field().order();
    let odd = space.field().characteristic() != 2;
    if space.dim() > 5 || (odd && q != 3) || (!odd && q > 4) {
        return Err(Error::Size(format!(
            "prop-2 verification is limited to dim ≤ 5 with q ≤ 4 (char 2) or q = 3; got dim {}, q {q}",
            space.dim()
        )));
    }
    let grading = crate::grading::split_filtration(filt)?;
    let group = enumerate_isometries(space)?;
    let forms = crate::grading::enumerate_graded_forms(&grading);
    let mut mismatches = Vec::new();
    for (idx, b) in forms.iter().enumerate() {
        let centralizer_inside = centralizer(&group, b)
            .iter()
            .all(|g| stabilizes_filtration(g, filt));
        let in_s2_0 = crate::grading::in_s2_0(&grading, b)?;
        if centralizer_inside != in_s2_0 {
            mismatches.push(idx);
        }
    }
    Ok(Prop2Report {
        profile: grading.profile(),
        forms_checked: forms.len(),
        mismatches,
    })
}
