//! Quadratic spaces (V, Q, β) and alternating bilinear forms on them.
//!
//! A space carries an upper-triangular Gram matrix U with Q(v) = vᵀUv and
//! polar form β = U + Uᵀ. The standard odd-dimensional space of rank N uses
//! coordinates e_{-N}, ..., e_N (index i stores e_{i-N}); its Gram has
//! U[N][N] = 1 and U[i][2N-i] = 1 for i < N, so β(e_i, e_j) = δ_{i+j,0} +
//! δ_{i,0}·δ_{j,0} and Q(e_i) = δ_{i,0}.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{vec_is_zero, Matrix, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    field: Field,
    dim: usize,
    gram_upper: Matrix,
    beta: Matrix,
    radical: Subspace,
}

impl QuadraticSpace {
    /// Space with an arbitrary upper-triangular Gram matrix. The radical of β
    /// must carry no nonzero vectors with Q = 0 (Q injective on the radical).
    pub fn with_gram(field: &Field, gram_upper: Matrix) -> Result<QuadraticSpace> {
        let dim = gram_upper.rows();
        if gram_upper.cols() != dim {
            return Err(Error::Construction("gram matrix must be square".into()));
        }
        for r in 0..dim {
            for c in 0..r {
                if gram_upper.code(r, c) != 0 {
                    return Err(Error::Construction("gram matrix must be upper-triangular".into()));
                }
            }
        }
        let beta = gram_upper.add(&gram_upper.transpose());
        let radical = Subspace::from_kernel(&beta);
        let space = QuadraticSpace {
            field: field.clone(),
            dim,
            gram_upper,
            beta,
            radical,
        };
        // Q must be injective on Rad(β); radical vectors with Q = 0 would make
        // the quadratic form degenerate in the sense used throughout.
        for r in space.radical.basis_vectors() {
            // In char 2, Q is additive on the radical, so a basis check plus the
            // semilinear-kernel argument in q_nondegenerate_on suffices.
            if space.q_eval(&r) == 0 && !vec_is_zero(&r) {
                return Err(Error::Construction(
                    "quadratic form vanishes on a nonzero radical vector".into(),
                ));
            }
        }
        if !space.q_nondegenerate_on(&space.radical) {
            return Err(Error::Construction(
                "quadratic form degenerate on the radical of the polar form".into(),
            ));
        }
        Ok(space)
    }

    /// Standard nondegenerate space of dimension 2N+1 in a good basis.
    pub fn standard(field: &Field, n_rank: usize) -> Result<QuadraticSpace> {
        if n_rank == 0 {
            return Err(Error::Construction("rank N must be at least 1".into()));
        }
        let dim = 2 * n_rank + 1;
        let mut u = Matrix::zero(field, dim, dim);
        u.set_code(n_rank, n_rank, 1);
        for i in 0..n_rank {
            u.set_code(i, 2 * n_rank - i, 1);
        }
        QuadraticSpace::with_gram(field, u)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn gram_upper(&self) -> &Matrix {
        &self.gram_upper
    }
    pub fn beta(&self) -> &Matrix {
        &self.beta
    }
    pub fn radical(&self) -> &Subspace {
        &self.radical
    }

    /// Standard basis vector for good-basis label i in [-N, N] (dim = 2N+1).
    pub fn good_vector(&self, label: i64) -> Vector {
        let n_rank = (self.dim as i64 - 1) / 2;
        assert!(label.abs() <= n_rank);
        let mut v = vec![0u32; self.dim];
        v[(label + n_rank) as usize] = 1;
        v
    }

    pub fn q_eval(&self, v: &[u32]) -> u32 {
        assert_eq!(v.len(), self.dim);
        let f = &self.field;
        let mut acc = 0;
        for r in 0..self.dim {
            if v[r] == 0 {
                continue;
            }
            for c in r..self.dim {
                let term = f.mul_codes(f.mul_codes(v[r], self.gram_upper.code(r, c)), v[c]);
                acc = f.add_codes(acc, term);
            }
        }
        acc
    }

    pub fn beta_eval(&self, u: &[u32], v: &[u32]) -> u32 {
        let f = &self.field;
        let bv = self.beta.apply(v);
        let mut acc = 0;
        for i in 0..self.dim {
            acc = f.add_codes(acc, f.mul_codes(u[i], bv[i]));
        }
        acc
    }

    /// β-orthogonal complement of U in the whole space.
    pub fn perp(&self, u: &Subspace) -> Subspace {
        u.perp(&self.beta)
    }

    /// Q nondegenerate on U: no nonzero u in U with β(u, U) = 0 and Q(u) = 0.
    pub fn q_nondegenerate_on(&self, u: &Subspace) -> bool {
        let k = match self.perp(u).intersect(u) {
            Ok(k) => k,
            Err(_) => unreachable!("same ambient"),
        };
        if k.is_zero() {
            return true;
        }
        if self.field.characteristic() != 2 {
            // β(v,v) = 2 Q(v), so Q vanishes on the radical of β|U.
            return false;
        }
        // On K = Rad(β|U), Q(Σ aᵢkᵢ) = Σ aᵢ² Q(kᵢ); squaring is injective, so
        // the Q-kernel in K matches the kernel of the row [sqrt Q(kᵢ)].
        let f = &self.field;
        let row: Vector = k
            .basis_vectors()
            .iter()
            .map(|b| {
                f.elt(self.q_eval(b))
                    .sqrt_char2()
                    .expect("char 2 ensured")
                    .code()
            })
            .collect();
        Matrix::from_rows(f, vec![row]).rank() == k.dim()
    }

    /// Vectors annihilating U under the supplied bilinear Gram matrix.
    pub fn perp_under(&self, gram: &Matrix, u: &Subspace) -> Subspace {
        u.perp(gram)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingForm {
    space: QuadraticSpace,
    gram: Matrix,
}

impl AlternatingForm {
    pub fn new(space: &QuadraticSpace, gram: Matrix) -> Result<AlternatingForm> {
        let dim = space.dim();
        if gram.rows() != dim || gram.cols() != dim {
            return Err(Error::Construction("form size does not match the space".into()));
        }
        let f = space.field();
        for i in 0..dim {
            if gram.code(i, i) != 0 {
                return Err(Error::Construction("alternating form needs zero diagonal".into()));
            }
            for j in 0..i {
                if gram.code(i, j) != f.neg_code(gram.code(j, i)) {
                    return Err(Error::Construction("form is not antisymmetric".into()));
                }
            }
        }
        Ok(AlternatingForm { space: space.clone(), gram })
    }

    pub fn zero(space: &QuadraticSpace) -> AlternatingForm {
        AlternatingForm {
            space: space.clone(),
            gram: Matrix::zero(space.field(), space.dim(), space.dim()),
        }
    }

    /// Build from the strict lower triangle (row-major, below the diagonal).
    pub fn from_lower_triangle(space: &QuadraticSpace, entries: &[u32]) -> Result<AlternatingForm> {
        let dim = space.dim();
        if entries.len() != dim * (dim - 1) / 2 {
            return Err(Error::Construction(format!(
                "expected {} lower-triangle entries, got {}",
                dim * (dim - 1) / 2,
                entries.len()
            )));
        }
        let f = space.field();
        let mut gram = Matrix::zero(f, dim, dim);
        let mut it = entries.iter();
        for i in 1..dim {
            for j in 0..i {
                let e = *it.next().unwrap();
                gram.set_code(i, j, e);
                gram.set_code(j, i, f.neg_code(e));
            }
        }
        AlternatingForm::new(space, gram)
    }

    pub fn lower_triangle(&self) -> Vector {
        let dim = self.space.dim();
        let mut out = Vec::with_capacity(dim * (dim - 1) / 2);
        for i in 1..dim {
            for j in 0..i {
                out.push(self.gram.code(i, j));
            }
        }
        out
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }
    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn eval(&self, u: &[u32], v: &[u32]) -> u32 {
        let f = self.field();
        let bv = self.gram.apply(v);
        let mut acc = 0;
        for i in 0..u.len() {
            acc = f.add_codes(acc, f.mul_codes(u[i], bv[i]));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.gram.is_zero()
    }

    /// {v : B(v, u) = 0 for all u in U}.
    pub fn perp(&self, u: &Subspace) -> Subspace {
        u.perp(&self.gram)
    }

    /// Pull back along an invertible change of coordinates g: entries become
    /// B'(u, v) = B(gu, gv), i.e. gᵀ B g.
    pub fn pullback(&self, g: &Matrix) -> AlternatingForm {
        AlternatingForm {
            space: self.space.clone(),
            gram: g.transpose().mul(&self.gram).mul(g),
        }
    }
}

/// β_ξ for the coadjoint element attached to the endomorphism X:
/// B(v, v') = β(Xv, v') − β(v, Xv'), i.e. B = Xᵀβ − βX.
pub fn xi_to_form(space: &QuadraticSpace, x: &Matrix) -> AlternatingForm {
    assert_eq!(x.rows(), space.dim());
    assert_eq!(x.cols(), space.dim());
    let beta = space.beta();
    let gram = x.transpose().mul(beta).sub(&beta.mul(x));
    AlternatingForm::new(space, gram).expect("X^T β − β X is alternating")
}

/// A canonical endomorphism X with xi_to_form(X) = B, via a deterministic
/// solve of the linear system on the dim² matrix entries.
pub fn form_to_xi(b: &AlternatingForm) -> Matrix {
    let space = b.space();
    let f = space.field();
    let dim = space.dim();
    let n2 = dim * dim;
    // column for unknown X[r][c]: vec(E_{rc}ᵀ β − β E_{rc}), row-major vec
    let mut sys = Matrix::zero(f, n2, n2);
    for r in 0..dim {
        for c in 0..dim {
            let mut e = Matrix::zero(f, dim, dim);
            e.set_code(r, c, 1);
            let img = xi_to_form(space, &e);
            let col = r * dim + c;
            for i in 0..dim {
                for j in 0..dim {
                    sys.set_code(i * dim + j, col, img.gram().code(i, j));
                }
            }
        }
    }
    let mut rhs = vec![0u32; n2];
    for i in 0..dim {
        for j in 0..dim {
            rhs[i * dim + j] = b.gram().code(i, j);
        }
    }
    let x = sys.solve(&rhs).expect("xi |-> beta_xi is surjective onto alternating forms");
    let mut out = Matrix::zero(f, dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            out.set_code(r, c, x[r * dim + c]);
        }
    }
    out
}

/// All alternating forms on the space, enumerated by the strict lower
/// triangle in row-major mixed-radix order. Desk-scale only.
pub fn enumerate_forms(space: &QuadraticSpace) -> impl Iterator<Item = AlternatingForm> + '_ {
    let dim = space.dim();
    let q = space.field().order() as u64;
    let slots = dim * (dim - 1) / 2;
    let total = q.checked_pow(slots as u32).expect("form count overflow");
    (0..total).map(move |idx| {
        let mut entries = vec![0u32; slots];
        let mut rest = idx;
        for e in entries.iter_mut() {
            *e = (rest % q) as u32;
            rest /= q;
        }
        AlternatingForm::from_lower_triangle(space, &entries).unwrap()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, k: u32) -> Field {
        Field::new(p, k, None).unwrap()
    }

    #[test]
    fn standard_space_char2() {
        let f2 = gf(2, 1);
        let v = QuadraticSpace::standard(&f2, 1).unwrap();
        assert_eq!(v.dim(), 3);
        let e0 = v.good_vector(0);
        assert_eq!(v.radical().dim(), 1);
        assert!(v.radical().contains_vec(&e0));
        assert_eq!(v.q_eval(&e0), 1);
        assert_eq!(v.q_eval(&v.good_vector(1)), 0);
        assert_eq!(v.beta_eval(&v.good_vector(-1), &v.good_vector(1)), 1);

        let v5 = QuadraticSpace::standard(&f2, 2).unwrap();
        assert_eq!(v5.beta_eval(&v5.good_vector(1), &v5.good_vector(-1)), 1);
        assert_eq!(v5.beta_eval(&v5.good_vector(1), &v5.good_vector(-2)), 0);
        assert_eq!(v5.radical().dim(), 1);
    }

    #[test]
    fn standard_space_odd_char() {
        let f3 = gf(3, 1);
        let v = QuadraticSpace::standard(&f3, 1).unwrap();
        let e0 = v.good_vector(0);
        assert_eq!(v.beta_eval(&e0, &e0), 2);
        assert!(v.radical().is_zero());
    }

    #[test]
    fn polar_identity_on_basis() {
        for field in [gf(2, 2), gf(3, 1), gf(5, 1)] {
            let v = QuadraticSpace::standard(&field, 2).unwrap();
            let f = v.field().clone();
            for i in 0..v.dim() {
                for j in 0..v.dim() {
                    let mut ei = vec![0u32; v.dim()];
                    ei[i] = 1;
                    let mut ej = vec![0u32; v.dim()];
                    ej[j] = 1;
                    let sum = crate::linalg::vec_add(&f, &ei, &ej);
                    let lhs = v.beta_eval(&ei, &ej);
                    let rhs = f.add_codes(
                        v.q_eval(&sum),
                        f.neg_code(f.add_codes(v.q_eval(&ei), v.q_eval(&ej))),
                    );
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn q_nondegeneracy_examples() {
        let f2 = gf(2, 1);
        let v = QuadraticSpace::standard(&f2, 1).unwrap();
        assert!(v.q_nondegenerate_on(&Subspace::zero(&f2, 3)));
        assert!(v.q_nondegenerate_on(&Subspace::span(&f2, 3, &[v.good_vector(0)])));
        assert!(!v.q_nondegenerate_on(&Subspace::span(&f2, 3, &[v.good_vector(1)])));
    }

    #[test]
    fn xi_to_form_alternating_exhaustive_dim3_gf2() {
        let f2 = gf(2, 1);
        let v = QuadraticSpace::standard(&f2, 1).unwrap();
        // all 512 matrices
        for idx in 0..512u32 {
            let mut x = Matrix::zero(&f2, 3, 3);
            for bit in 0..9 {
                x.set_code(bit / 3, bit % 3, (idx >> bit) & 1);
            }
            let b = xi_to_form(&v, &x);
            for i in 0..3 {
                assert_eq!(b.gram().code(i, i), 0);
                for j in 0..3 {
                    assert_eq!(b.gram().code(i, j), f2.neg_code(b.gram().code(j, i)));
                }
            }
        }
        // identity and zero map to the zero form
        assert!(xi_to_form(&v, &Matrix::identity(&f2, 3)).is_zero());
        assert!(xi_to_form(&v, &Matrix::zero(&f2, 3, 3)).is_zero());
    }

    #[test]
    fn xi_image_is_all_alternating_forms() {
        let f2 = gf(2, 1);
        // exhaustive at dim 3
        let v = QuadraticSpace::standard(&f2, 1).unwrap();
        let mut images = std::collections::HashSet::new();
        for idx in 0..512u32 {
            let mut x = Matrix::zero(&f2, 3, 3);
            for bit in 0..9 {
                x.set_code(bit / 3, bit % 3, (idx >> bit) & 1);
            }
            images.insert(xi_to_form(&v, &x).lower_triangle());
        }
        assert_eq!(images.len(), 8);
        // by rank of the linear map at dims 3 and 5: X ↦ lower triangle of β_ξ
        for n_rank in [1usize, 2] {
            let v = QuadraticSpace::standard(&f2, n_rank).unwrap();
            let dim = v.dim();
            let slots = dim * (dim - 1) / 2;
            let mut sys = Matrix::zero(&f2, slots, dim * dim);
            for r in 0..dim {
                for c in 0..dim {
                    let mut e = Matrix::zero(&f2, dim, dim);
                    e.set_code(r, c, 1);
                    let tri = xi_to_form(&v, &e).lower_triangle();
                    for (row, &val) in tri.iter().enumerate() {
                        sys.set_code(row, r * dim + c, val);
                    }
                }
            }
            assert_eq!(sys.rank(), slots);
        }
    }

    #[test]
    fn form_to_xi_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, k) in [(2u32, 1u32), (3, 1), (2, 2)] {
            let field = gf(p, k);
            for n_rank in [1usize, 2] {
                let v = QuadraticSpace::standard(&field, n_rank).unwrap();
                let slots = v.dim() * (v.dim() - 1) / 2;
                for _ in 0..20 {
                    let entries: Vec<u32> =
                        (0..slots).map(|_| rng.gen_range(0..field.order())).collect();
                    let b = AlternatingForm::from_lower_triangle(&v, &entries).unwrap();
                    let x = form_to_xi(&b);
                    assert_eq!(xi_to_form(&v, &x).gram(), b.gram());
                }
            }
        }
    }

    #[test]
    fn form_to_xi_regular_example() {
        let f2 = gf(2, 1);
        let v = QuadraticSpace::standard(&f2, 1).unwrap();
        // regular nilpotent: β_ξ(e_{-1}, e_0) = 1, everything else 0
        let mut gram = Matrix::zero(&f2, 3, 3);
        gram.set_code(0, 1, 1);
        gram.set_code(1, 0, 1);
        let b = AlternatingForm::new(&v, gram).unwrap();
        let x = form_to_xi(&b);
        assert_eq!(xi_to_form(&v, &x).gram(), b.gram());
    }

    #[test]
    fn enumerate_forms_count() {
        let f2 = gf(2, 1);
        let v = QuadraticSpace::standard(&f2, 1).unwrap();
        assert_eq!(enumerate_forms(&v).count(), 8);
        let f3 = gf(3, 1);
        let v3 = QuadraticSpace::standard(&f3, 1).unwrap();
        assert_eq!(enumerate_forms(&v3).count(), 27);
    }

    #[test]
    fn lower_triangle_round_trip() {
        let f3 = gf(3, 1);
        let v = QuadraticSpace::standard(&f3, 1).unwrap();
        for b in enumerate_forms(&v) {
            let tri = b.lower_triangle();
            let back = AlternatingForm::from_lower_triangle(&v, &tri).unwrap();
            assert_eq!(back.gram(), b.gram());
        }
    }
}
