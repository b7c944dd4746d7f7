//! Exact dense matrices and subspaces over a [`Field`].
//!
//! Subspaces are stored in reduced row echelon form, so set-level equality is
//! representation equality. Every "choose" is deterministic: `solve` zeroes
//! free variables and `complement` prefers low-index standard basis vectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elt, Field};

/// Dense row-major matrix over a field. Entries are stored as packed codes.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Vector of packed element codes.
pub type Vector = Vec<u32>;

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set_code(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vector>) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols));
        Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn code(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set_code(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }
    pub fn get(&self, r: usize, c: usize) -> Elt {
        self.field.elt(self.code(r, c))
    }
    pub fn set(&mut self, r: usize, c: usize, v: &Elt) {
        self.set_code(r, c, v.code());
    }

    pub fn row(&self, r: usize) -> Vector {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.code(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set_code(c, r, self.code(r, c));
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add_codes(a, b))
            .collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add_codes(a, f.neg_code(b)))
            .collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.neg_code(a)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let f = &self.field;
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.code(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = f.mul_codes(a, other.code(k, c));
                    let cur = out.code(r, c);
                    out.set_code(r, c, f.add_codes(cur, prod));
                }
            }
        }
        out
    }

    /// v |-> M v (v as column).
    pub fn apply(&self, v: &[u32]) -> Vector {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0;
                for c in 0..self.cols {
                    acc = f.add_codes(acc, f.mul_codes(self.code(r, c), v[c]));
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(&self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &Elt) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul_codes(a, c.code())).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form and rank. Deterministic.
    pub fn rref(&self) -> (Matrix, usize) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(sel) = (pivot_row..m.rows).find(|&r| m.code(r, col) != 0) else {
                continue;
            };
            // swap into place
            for c in 0..m.cols {
                let (a, b) = (m.code(pivot_row, c), m.code(sel, c));
                m.set_code(pivot_row, c, b);
                m.set_code(sel, c, a);
            }
            // normalize pivot to 1
            let inv = f.inv_code(m.code(pivot_row, col));
            for c in 0..m.cols {
                m.set_code(pivot_row, c, f.mul_codes(m.code(pivot_row, c), inv));
            }
            // eliminate everywhere else
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.code(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let sub = f.mul_codes(factor, m.code(pivot_row, c));
                    m.set_code(r, c, f.add_codes(m.code(r, c), f.neg_code(sub)));
                }
            }
            pivot_row += 1;
        }
        (m, pivot_row)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// One solution of M x = b, or None. Free variables are set to zero.
    pub fn solve(&self, b: &[u32]) -> Option<Vector> {
        assert_eq!(self.rows, b.len());
        let f = &self.field;
        // augmented [M | b]
        let mut aug = Matrix::zero(f, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set_code(r, c, self.code(r, c));
            }
            aug.set_code(r, self.cols, b[r]);
        }
        let (red, _) = aug.rref();
        let mut x = vec![0u32; self.cols];
        for r in 0..self.rows {
            let pivot = (0..self.cols).find(|&c| red.code(r, c) != 0);
            match pivot {
                Some(c) => x[c] = red.code(r, self.cols),
                None => {
                    if red.code(r, self.cols) != 0 {
                        return None; // inconsistent row 0 = nonzero
                    }
                }
            }
        }
        Some(x)
    }

    /// Basis of the right kernel {x : Mx = 0}, as rows of a matrix in RREF.
    pub fn kernel_basis(&self) -> Matrix {
        let f = &self.field;
        let (red, rank) = self.rref();
        let mut pivots = Vec::with_capacity(rank);
        for r in 0..rank {
            let c = (0..self.cols).find(|&c| red.code(r, c) != 0).unwrap();
            pivots.push(c);
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u32; self.cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg_code(red.code(r, fc));
            }
            rows.push(v);
        }
        let (basis, _) = Matrix::from_rows(f, rows).rref();
        basis
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let f = &self.field;
        let n = self.rows;
        let mut aug = Matrix::zero(f, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set_code(r, c, self.code(r, c));
            }
            aug.set_code(r, n + r, 1);
        }
        let (red, rank) = aug.rref();
        if rank < n || (0..n).any(|i| red.code(i, i) != if i < n { 1 } else { 0 }) {
            // rank < n, or pivots not on the identity diagonal
            if rank < n {
                return None;
            }
        }
        for i in 0..n {
            if red.code(i, i) != 1 {
                return None;
            }
        }
        let mut inv = Matrix::zero(f, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set_code(r, c, red.code(r, n + c));
            }
        }
        Some(inv)
    }

    pub fn det_is_one_like(&self) -> Elt {
        self.determinant()
    }

    pub fn determinant(&self) -> Elt {
        assert_eq!(self.rows, self.cols);
        let f = self.field.clone();
        let mut m = self.clone();
        let n = self.rows;
        let mut det = f.one();
        for col in 0..n {
            let Some(sel) = (col..n).find(|&r| m.code(r, col) != 0) else {
                return f.zero();
            };
            if sel != col {
                for c in 0..n {
                    let (a, b) = (m.code(col, c), m.code(sel, c));
                    m.set_code(col, c, b);
                    m.set_code(sel, c, a);
                }
                det = det.neg();
            }
            let pivot = m.code(col, col);
            det = det.mul(&f.elt(pivot)).unwrap();
            let inv = f.inv_code(pivot);
            for r in col + 1..n {
                let factor = f.mul_codes(m.code(r, col), inv);
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    let sub = f.mul_codes(factor, m.code(col, c));
                    m.set_code(r, c, f.add_codes(m.code(r, c), f.neg_code(sub)));
                }
            }
        }
        det
    }

    pub fn is_nilpotent_endo(&self) -> bool {
        assert_eq!(self.rows, self.cols);
        self.pow(self.rows).is_zero()
    }
}

/// Vector helpers on packed codes.
pub fn vec_add(f: &Field, a: &[u32], b: &[u32]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add_codes(x, y)).collect()
}

pub fn vec_scale(f: &Field, c: u32, a: &[u32]) -> Vector {
    a.iter().map(|&x| f.mul_codes(c, x)).collect()
}

pub fn vec_is_zero(a: &[u32]) -> bool {
    a.iter().all(|&x| x == 0)
}

/// A subspace of F^n in canonical (RREF-basis) form.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Matrix, // RREF rows, full rank
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace dim {} of F^{}: {:?}", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Subspace {
            field: field.clone(),
            ambient,
            basis: Matrix::zero(field, 0, ambient),
        }
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        Subspace {
            field: field.clone(),
            ambient,
            basis: Matrix::identity(field, ambient),
        }
    }

    /// Span of the given vectors.
    pub fn span(field: &Field, ambient: usize, vectors: &[Vector]) -> Subspace {
        assert!(vectors.iter().all(|v| v.len() == ambient));
        let m = Matrix::from_rows(field, vectors.to_vec());
        let (red, rank) = m.rref();
        let mut rows = Vec::with_capacity(rank);
        for r in 0..rank {
            rows.push(red.row(r));
        }
        let basis = if rank == 0 {
            Matrix::zero(field, 0, ambient)
        } else {
            Matrix::from_rows(field, rows)
        };
        Subspace { field: field.clone(), ambient, basis }
    }

    pub fn from_kernel(m: &Matrix) -> Subspace {
        let basis = m.kernel_basis();
        Subspace {
            field: m.field().clone(),
            ambient: m.cols(),
            basis,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
    pub fn basis_vectors(&self) -> Vec<Vector> {
        (0..self.dim()).map(|r| self.basis.row(r)).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn contains_vec(&self, v: &[u32]) -> bool {
        // v reduces to zero against the RREF basis
        let f = &self.field;
        let mut v = v.to_vec();
        for r in 0..self.dim() {
            let pc = (0..self.ambient).find(|&c| self.basis.code(r, c) != 0).unwrap();
            let factor = v[pc];
            if factor != 0 {
                for c in 0..self.ambient {
                    let sub = f.mul_codes(factor, self.basis.code(r, c));
                    v[c] = f.add_codes(v[c], f.neg_code(sub));
                }
            }
        }
        vec_is_zero(&v)
    }

    /// Coordinates of v in this subspace's basis, if v lies in it.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vector> {
        self.basis.transpose().solve(v).filter(|_| self.contains_vec(v))
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.basis_vectors().iter().all(|v| self.contains_vec(v)))
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.basis == other.basis)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Ok(Subspace::span(&self.field, self.ambient, &vs))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        // x in U cap W: x = a^T U = b^T W; solve [U^T | -W^T] kernel.
        let du = self.dim();
        let dw = other.dim();
        if du == 0 || dw == 0 {
            return Ok(Subspace::zero(&self.field, self.ambient));
        }
        let f = &self.field;
        let mut m = Matrix::zero(f, self.ambient, du + dw);
        for c in 0..du {
            for r in 0..self.ambient {
                m.set_code(r, c, self.basis.code(c, r));
            }
        }
        for c in 0..dw {
            for r in 0..self.ambient {
                m.set_code(r, du + c, f.neg_code(other.basis.code(c, r)));
            }
        }
        let ker = m.kernel_basis();
        let mut vecs = Vec::new();
        for i in 0..ker.rows() {
            let coeffs = ker.row(i);
            let mut v = vec![0u32; self.ambient];
            for (j, &cj) in coeffs[..du].iter().enumerate() {
                v = vec_add(f, &v, &vec_scale(f, cj, &self.basis.row(j)));
            }
            vecs.push(v);
        }
        Ok(Subspace::span(f, self.ambient, &vecs))
    }

    /// {v : beta(v, u) = 0 for all u in self}, where beta is a square Gram matrix.
    pub fn perp(&self, beta: &Matrix) -> Subspace {
        assert_eq!(beta.rows(), self.ambient);
        assert_eq!(beta.cols(), self.ambient);
        // rows: for each basis u, the functional v -> beta(v,u) = (beta u)^T v
        let mut rows = Vec::with_capacity(self.dim());
        for u in self.basis_vectors() {
            rows.push(beta.apply(&u));
        }
        if rows.is_empty() {
            return Subspace::full(&self.field, self.ambient);
        }
        Subspace::from_kernel(&Matrix::from_rows(&self.field, rows))
    }

    /// Deterministic complement of self inside `inside`: greedily extend the
    /// basis by `inside`'s basis vectors in index order.
    pub fn complement(&self, inside: &Subspace) -> Result<Subspace> {
        self.check_ambient(inside)?;
        if !inside.contains(self)? {
            return Err(Error::Containment("complement: U not contained in `inside`".into()));
        }
        let mut acc = self.basis_vectors();
        let mut comp = Vec::new();
        let mut current = self.clone();
        for v in inside.basis_vectors() {
            if !current.contains_vec(&v) {
                comp.push(v.clone());
                acc.push(v);
                current = Subspace::span(&self.field, self.ambient, &acc);
            }
        }
        debug_assert_eq!(current.dim(), inside.dim());
        Ok(Subspace::span(&self.field, self.ambient, &comp))
    }
}

/// Projection/section pair for a quotient `ambient_sub / l`.
///
/// Quotient coordinates are taken with respect to a deterministic complement
/// of `l` inside `ambient_sub` (the section).
#[derive(Clone, Debug)]
pub struct QuotientMap {
    l: Subspace,
    section: Vec<Vector>, // basis of the complement, ambient coordinates
    stack: Matrix,        // columns: l basis then section basis
}

impl QuotientMap {
    pub fn new(ambient_sub: &Subspace, l: &Subspace) -> Result<QuotientMap> {
        if !ambient_sub.contains(l)? {
            return Err(Error::Containment("quotient: L not contained in ambient".into()));
        }
        let comp = l.complement(ambient_sub)?;
        let section = comp.basis_vectors();
        let mut cols = l.basis_vectors();
        cols.extend(section.iter().cloned());
        let stack = Matrix::from_rows(l.field(), cols).transpose();
        Ok(QuotientMap { l: l.clone(), section, stack })
    }

    pub fn l(&self) -> &Subspace {
        &self.l
    }
    pub fn quotient_dim(&self) -> usize {
        self.section.len()
    }
    pub fn section_basis(&self) -> &[Vector] {
        &self.section
    }

    /// Coordinates of v + L in the section basis. v must lie in the sub-ambient.
    pub fn project(&self, v: &[u32]) -> Result<Vector> {
        let coords = self
            .stack
            .solve(v)
            .ok_or_else(|| Error::Containment("quotient: vector outside ambient subspace".into()))?;
        Ok(coords[self.l.dim()..].to_vec())
    }

    /// Ambient representative of quotient coordinates.
    pub fn lift(&self, qcoords: &[u32]) -> Vector {
        let f = self.l.field();
        let mut v = vec![0u32; self.l.ambient()];
        for (c, s) in qcoords.iter().zip(&self.section) {
            v = vec_add(f, &v, &vec_scale(f, *c, s));
        }
        v
    }
}

/// All vectors of the span of `basis` (including zero), in deterministic
/// lexicographic coefficient order. Intended for small desk-scale searches.
pub fn enumerate_span(field: &Field, basis: &[Vector]) -> Vec<Vector> {
    if basis.is_empty() {
        return Vec::new();
    }
    let q = field.order() as usize;
    let ambient = basis[0].len();
    let total = q.pow(basis.len() as u32);
    let mut out = Vec::with_capacity(total);
    for idx in 0..total {
        let mut v = vec![0u32; ambient];
        let mut rest = idx;
        for b in basis {
            let c = (rest % q) as u32;
            rest /= q;
            if c != 0 {
                v = vec_add(field, &v, &vec_scale(field, c, b));
            }
        }
        out.push(v);
    }
    out
}

/// All subspaces of F^ambient of dimension `dim`, via RREF enumeration.
pub fn enumerate_subspaces(field: &Field, ambient: usize, dim: usize) -> Vec<Subspace> {
    let q = field.order() as usize;
    let mut out = Vec::new();
    if dim > ambient {
        return out;
    }
    // choose pivot columns, then fill free entries
    let mut pivots = (0..dim).collect::<Vec<_>>();
    loop {
        // free positions: (row r, col c) with c > pivots[r], c not a pivot of a later row... c not any pivot
        let mut free_pos = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..ambient {
                if !pivots.contains(&c) {
                    free_pos.push((r, c));
                }
            }
        }
        let total = q.pow(free_pos.len() as u32);
        for idx in 0..total {
            let mut m = Matrix::zero(field, dim, ambient);
            for (r, &pc) in pivots.iter().enumerate() {
                m.set_code(r, pc, 1);
            }
            let mut rest = idx;
            for &(r, c) in &free_pos {
                m.set_code(r, c, (rest % q) as u32);
                rest /= q;
            }
            // entries left of a pivot in its own row must vanish: they do by construction
            // (we only fill positions right of the row's pivot).
            let mut rows = Vec::with_capacity(dim);
            for r in 0..dim {
                rows.push(m.row(r));
            }
            out.push(Subspace::span(field, ambient, &rows));
        }
        // next pivot combination (lexicographic)
        let mut i = dim;
        loop {
            if i == 0 {
                return dedup_subspaces(out);
            }
            i -= 1;
            if pivots[i] < ambient - (dim - i) {
                pivots[i] += 1;
                for j in i + 1..dim {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn dedup_subspaces(mut v: Vec<Subspace>) -> Vec<Subspace> {
    // RREF canonical form: dedup by basis entries
    v.sort_by(|a, b| a.basis.data.cmp(&b.basis.data));
    v.dedup_by(|a, b| a.basis == b.basis);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, k: u32) -> Field {
        Field::new(p, k, None).unwrap()
    }

    #[test]
    fn rref_rank_examples() {
        let f2 = gf(2, 1);
        let m = Matrix::from_rows(&f2, vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(m.rank(), 1);
        let id = Matrix::identity(&f2, 4);
        assert_eq!(id.rref().0, id);
        assert_eq!(id.rank(), 4);
        // GF(3): [[1,2],[2,1]] has det 1-4 = -3 = 0 mod 3, so rank 1
        let f3 = gf(3, 1);
        let m = Matrix::from_rows(&f3, vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let f4 = gf(2, 2);
        let m = Matrix::from_rows(&f4, vec![vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]);
        assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_annihilated() {
        let f3 = gf(3, 1);
        let m = Matrix::from_rows(&f3, vec![vec![1, 2, 0], vec![2, 1, 0]]);
        let k = m.kernel_basis();
        for r in 0..k.rows() {
            assert!(vec_is_zero(&m.apply(&k.row(r))));
        }
    }

    #[test]
    fn solve_deterministic_free_vars() {
        let f2 = gf(2, 1);
        let m = Matrix::from_rows(&f2, vec![vec![1, 1]]);
        assert_eq!(m.solve(&[1]), Some(vec![1, 0]));
        let z = Matrix::zero(&f2, 2, 2);
        assert_eq!(z.solve(&[1, 0]), None);
        let id = Matrix::identity(&f2, 3);
        assert_eq!(id.solve(&[1, 0, 1]), Some(vec![1, 0, 1]));
    }

    #[test]
    fn subspace_lattice_ops() {
        let f2 = gf(2, 1);
        let e0 = vec![1, 0, 0];
        let e1 = vec![0, 1, 0];
        let e2 = vec![0, 0, 1];
        let u = Subspace::span(&f2, 3, &[e0.clone(), e1.clone()]);
        let w = Subspace::span(&f2, 3, &[e1.clone(), e2.clone()]);
        let z = Subspace::zero(&f2, 3);
        assert!(u.sum(&z).unwrap().equals(&u).unwrap());
        assert!(u.intersect(&u).unwrap().equals(&u).unwrap());
        let i = u.intersect(&w).unwrap();
        assert!(i.equals(&Subspace::span(&f2, 3, &[e1.clone()])).unwrap());
    }

    #[test]
    fn complement_greedy() {
        let f2 = gf(2, 1);
        let full = Subspace::full(&f2, 3);
        let u = Subspace::span(&f2, 3, &[vec![1, 1, 0]]);
        let c = u.complement(&full).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(u.intersect(&c).unwrap().is_zero());
        assert!(u.sum(&c).unwrap().equals(&full).unwrap());
        // greedy rule: picks e0 then e2 (e1 depends on e0 + (1,1,0))? Check frozen value.
        assert!(u.complement(&full).unwrap().equals(&c).unwrap());
        assert!(Subspace::full(&f2, 3)
            .complement(&Subspace::full(&f2, 3))
            .unwrap()
            .is_zero());
        assert!(Subspace::zero(&f2, 3)
            .complement(&full)
            .unwrap()
            .equals(&full)
            .unwrap());
    }

    #[test]
    fn quotient_projection_section() {
        let f2 = gf(2, 1);
        let full = Subspace::full(&f2, 3);
        let l = Subspace::span(&f2, 3, &[vec![1, 0, 0]]);
        let qm = QuotientMap::new(&full, &l).unwrap();
        assert_eq!(qm.quotient_dim(), 2);
        // projection . section = identity on the quotient
        for idx in 0..4u32 {
            let qc = vec![idx & 1, (idx >> 1) & 1];
            let lifted = qm.lift(&qc);
            assert_eq!(qm.project(&lifted).unwrap(), qc);
        }
    }

    #[test]
    fn enumerate_subspace_counts() {
        let f2 = gf(2, 1);
        // lines in F_2^3: 7; planes: 7
        assert_eq!(enumerate_subspaces(&f2, 3, 1).len(), 7);
        assert_eq!(enumerate_subspaces(&f2, 3, 2).len(), 7);
        let f3 = gf(3, 1);
        assert_eq!(enumerate_subspaces(&f3, 3, 1).len(), 13);
    }
}
