//! Dense matrices and subspaces over an exact field.
//!
//! Vectors are rows and matrices act on the right: a matrix `A` with `r` rows
//! and `c` columns is the linear map `k^r -> k^c`, `v |-> vA`.

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Mat<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { field, rows, cols, data })
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Mat { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_rows(field: F, cols: usize, rows: &[Vec<F::Elem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Mat { field, rows: rows.len(), cols, data })
    }

    /// Integer-literal constructor, handy in tests and fixtures.
    pub fn from_i64(field: F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| field.from_i64(x)).collect::<Vec<_>>()
            })
            .collect();
        Mat { field, rows: rows.len(), cols, data }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_vecs(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.field.clone(), self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                let orow = other.row(k);
                let base = i * other.cols;
                for (j, b) in orow.iter().enumerate() {
                    if !f.is_zero(b) {
                        out.data[base + j] = f.add(&out.data[base + j], &f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F, &F::Elem, &F::Elem) -> F::Elem) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| op(&self.field, a, b))
            .collect();
        Ok(Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `self += c * other`, in place.
    pub fn add_scaled(&mut self, other: &Self, c: &F::Elem) {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if self.field.is_zero(c) {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !self.field.is_zero(b) {
                *a = self.field.add(a, &self.field.mul(b, c));
            }
        }
    }

    pub fn trace(&self) -> F::Elem {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }

    pub fn pow(&self, e: usize) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.field.clone(), self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Columns side by side. All blocks must have the same row count.
    pub fn hstack(field: F, rows: usize, blocks: &[&Self]) -> Result<Self> {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            if b.rows != rows {
                return Err(Error::DimensionMismatch("hstack row counts differ".into()));
            }
            for i in 0..rows {
                for j in 0..b.cols {
                    out.data[i * cols + off + j] = b.get(i, j).clone();
                }
            }
            off += b.cols;
        }
        Ok(out)
    }

    /// Rows stacked. All blocks must have the same column count.
    pub fn vstack(field: F, cols: usize, blocks: &[&Self]) -> Result<Self> {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch("vstack column counts differ".into()));
            }
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Ok(Mat { field, rows, cols, data })
    }

    pub fn block_diag(field: F, blocks: &[&Self]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[(r0 + i) * cols + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Kronecker product; row index `(i, k) -> i * other.rows + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let f = &self.field;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(f.clone(), rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !f.is_zero(b) {
                            out.data[(i * other.rows + k) * cols + j * other.cols + l] = f.mul(a, b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Sub-block `rows r0..r1`, `cols c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut out = Self::zeros(self.field.clone(), r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.data[(i - r0) * (c1 - c0) + (j - c0)] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Reduced row echelon form and the (strictly increasing) pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !f.is_zero(&self.data[i * cols + c])) else {
                continue;
            };
            if p != r {
                for j in c..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(&self.data[r * cols + c]).expect("nonzero pivot");
            for j in c..cols {
                let v = &self.data[r * cols + j];
                if !f.is_zero(v) {
                    self.data[r * cols + j] = f.mul(v, &inv);
                }
            }
            let pivot_row: Vec<(usize, F::Elem)> = (c..cols)
                .filter_map(|j| {
                    let v = &self.data[r * cols + j];
                    (!f.is_zero(v)).then(|| (j, v.clone()))
                })
                .collect();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c].clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for (j, v) in &pivot_row {
                    let idx = i * cols + j;
                    self.data[idx] = f.sub(&self.data[idx], &f.mul(&factor, v));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x^T = 0}`, i.e. the kernel of the column action.
    /// Each returned vector has length `cols`.
    pub fn null_space(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            is_pivot[p] = Some(i);
        }
        let mut out = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                let e = r.get(i, free);
                if !f.is_zero(e) {
                    v[p] = f.neg(e);
                }
            }
            out.push(v);
        }
        out
    }

    /// Basis of `{v : vA = 0}` (row vectors of length `rows`).
    pub fn left_kernel(&self) -> Vec<Vec<F::Elem>> {
        self.transpose().null_space()
    }

    /// Some `x` with `xA = b`, if one exists.
    pub fn solve_left(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.cols, "right-hand side length");
        let f = &self.field;
        // Augment A^T with b as an extra column: A^T x^T = b^T.
        let t = self.transpose();
        let mut aug = Self::zeros(f.clone(), self.cols, self.rows + 1);
        for i in 0..self.cols {
            for j in 0..self.rows {
                aug.data[i * (self.rows + 1) + j] = t.get(i, j).clone();
            }
            aug.data[i * (self.rows + 1) + self.rows] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.rows) {
            return None;
        }
        let mut x = vec![f.zero(); self.rows];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.rows).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let f = &self.field;
        let id = Self::identity(f.clone(), n);
        let aug = Self::hstack(f.clone(), n, &[self, &id]).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, 2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// `v A` for a row vector `v`.
pub fn vec_mat<F: Field>(v: &[F::Elem], a: &Mat<F>) -> Vec<F::Elem> {
    assert_eq!(v.len(), a.rows(), "vector length vs matrix rows");
    let f = a.field();
    let mut out = vec![f.zero(); a.cols()];
    for (i, x) in v.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in a.row(i).iter().enumerate() {
            if !f.is_zero(y) {
                out[j] = f.add(&out[j], &f.mul(x, y));
            }
        }
    }
    out
}

pub fn vec_add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn vec_sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub fn vec_scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    a.iter().map(|x| f.mul(x, c)).collect()
}

/// `acc += c * v`, in place.
pub fn vec_axpy<F: Field>(f: &F, acc: &mut [F::Elem], c: &F::Elem, v: &[F::Elem]) {
    if f.is_zero(c) {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !f.is_zero(x) {
            *a = f.add(a, &f.mul(c, x));
        }
    }
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

pub fn unit_vec<F: Field>(f: &F, n: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

/// Every vector of `k^n` for a finite field, in lexicographic order of element indices.
pub fn all_vectors<F: Field>(f: &F, n: usize) -> Result<Vec<Vec<F::Elem>>> {
    let elems = f
        .elements()
        .ok_or_else(|| Error::InvalidInput("vector enumeration needs a finite field".into()))?;
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(e.clone());
                    w
                })
            })
            .collect();
    }
    Ok(out)
}

/// A linear subspace of `k^ambient`, stored by its reduced echelon basis.
///
/// The echelon basis is unique, so derived equality is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Mat<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: F, ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: F, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn span(field: F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Result<Self> {
        let m = Mat::from_rows(field, ambient, vectors)?;
        Ok(Self::row_space(&m))
    }

    /// Row space of `m`, i.e. the image of `v |-> vM` is NOT this; this is the
    /// span of the rows of `m`.
    pub fn row_space(m: &Mat<F>) -> Self {
        let (r, pivots) = m.rref();
        let basis = r.block(0, pivots.len(), 0, m.cols());
        Subspace { ambient: m.cols(), basis, pivots }
    }

    /// Kernel of the map `v |-> vA`.
    pub fn kernel(a: &Mat<F>) -> Self {
        let vs = a.left_kernel();
        Self::span(a.field().clone(), a.rows(), &vs).expect("kernel vectors have ambient length")
    }

    /// Image of the map `v |-> vA`.
    pub fn image(a: &Mat<F>) -> Self {
        Self::row_space(a)
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn basis(&self) -> &Mat<F> {
        &self.basis
    }
    pub fn basis_vecs(&self) -> Vec<Vec<F::Elem>> {
        self.basis.row_vecs()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, n: usize) -> Result<()> {
        if n != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimension {} vs {n}",
                self.ambient
            )));
        }
        Ok(())
    }

    /// Remainder of `v` after reduction by the echelon basis.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field().clone();
        let mut r = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = r[p].clone();
            if !f.is_zero(&c) {
                vec_axpy(&f, &mut r, &f.neg(&c), self.basis.row(i));
            }
        }
        r
    }

    pub fn contains(&self, v: &[F::Elem]) -> Result<bool> {
        self.check_ambient(v.len())?;
        Ok(is_zero_vec(self.field(), &self.reduce(v)))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if v.len() != self.ambient || !is_zero_vec(self.field(), &self.reduce(v)) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        other.check_ambient(self.ambient)?;
        for i in 0..self.dim() {
            if !other.contains(self.basis.row(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other.ambient)?;
        let m = Mat::vstack(self.field().clone(), self.ambient, &[&self.basis, &other.basis])?;
        Ok(Self::row_space(&m))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other.ambient)?;
        let f = self.field().clone();
        let stacked = Mat::vstack(f.clone(), self.ambient, &[&self.basis, &other.basis])?;
        let k = self.dim();
        let vecs: Vec<Vec<F::Elem>> = stacked
            .left_kernel()
            .into_iter()
            .map(|c| vec_mat(&c[..k], &self.basis))
            .collect();
        Self::span(f, self.ambient, &vecs)
    }

    /// Representatives of a basis of `self / sub`; requires `sub <= self`.
    pub fn quotient_basis(&self, sub: &Self) -> Result<Vec<Vec<F::Elem>>> {
        self.check_ambient(sub.ambient)?;
        if !sub.is_subspace_of(self)? {
            return Err(Error::InvalidInput("quotient_basis needs U inside V".into()));
        }
        let mut acc = sub.clone();
        let mut reps = Vec::new();
        for i in 0..self.dim() {
            let v = self.basis.row(i);
            if !acc.contains(v)? {
                reps.push(v.to_vec());
                acc = acc.sum(&Self::span(self.field().clone(), self.ambient, &[v.to_vec()])?)?;
            }
        }
        Ok(reps)
    }

    /// Image under the coordinate projection onto `range`.
    pub fn project(&self, range: std::ops::Range<usize>) -> Self {
        let len = range.len();
        let vecs: Vec<Vec<F::Elem>> =
            (0..self.dim()).map(|i| self.basis.row(i)[range.clone()].to_vec()).collect();
        Self::span(self.field().clone(), len, &vecs).expect("projected vectors have range length")
    }

    /// Image under `v |-> vA`.
    pub fn map(&self, a: &Mat<F>) -> Result<Self> {
        self.check_ambient(a.rows())?;
        Ok(Self::row_space(&self.basis.mul(a)?))
    }
}

/// Incrementally grown fully reduced row set.
///
/// Every stored row has a leading 1 and zeros at the pivots of all other rows,
/// so reduction of a new vector does not depend on row order.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    ambient: usize,
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, ambient: usize) -> Self {
        Echelon { field, ambient, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut r = v.to_vec();
        for (p, row) in &self.rows {
            let c = r[*p].clone();
            if !f.is_zero(&c) {
                vec_axpy(f, &mut r, &f.neg(&c), row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        is_zero_vec(&self.field, &self.reduce(v))
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let f = self.field.clone();
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]).expect("nonzero");
        let r = vec_scale(&f, &r, &inv);
        for (_, row) in self.rows.iter_mut() {
            let c = row[p].clone();
            if !f.is_zero(&c) {
                vec_axpy(&f, row, &f.neg(&c), &r);
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn into_subspace(mut self) -> Subspace<F> {
        self.rows.sort_by_key(|(p, _)| *p);
        let pivots = self.rows.iter().map(|(p, _)| *p).collect();
        let k = self.rows.len();
        let data = self.rows.into_iter().flat_map(|(_, r)| r).collect::<Vec<_>>();
        let basis = Mat { field: self.field, rows: k, cols: self.ambient, data };
        Subspace { ambient: self.ambient, basis, pivots }
    }
}

/// Coordinates relative to a basis of `V / U` with fixed representatives.
///
/// Built once from a subspace `U` and representatives `q_1..q_r` completing a
/// basis of `U` to one of `V`; `coords(v)` returns the `q`-coordinates of any
/// `v` in `V`.
#[derive(Clone, Debug)]
pub struct QuotientCoords<F: Field> {
    sub_dim: usize,
    reps: Vec<Vec<F::Elem>>,
    combined: Mat<F>,
}

impl<F: Field> QuotientCoords<F> {
    pub fn new(sub: &Subspace<F>, reps: Vec<Vec<F::Elem>>) -> Result<Self> {
        let f = sub.field().clone();
        let r = Mat::from_rows(f.clone(), sub.ambient(), &reps)?;
        let combined = Mat::vstack(f, sub.ambient(), &[sub.basis(), &r])?;
        Ok(QuotientCoords { sub_dim: sub.dim(), reps, combined })
    }

    pub fn reps(&self) -> &[Vec<F::Elem>] {
        &self.reps
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn coords(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        self.combined.solve_left(v).map(|x| x[self.sub_dim..].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn rref_repeated_row_over_f2() {
        let a = Mat::from_i64(f2(), &[&[1, 1], &[1, 1]]);
        let (r, p) = a.rref();
        assert_eq!(r, Mat::from_i64(f2(), &[&[1, 1], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_identity_over_q() {
        let id = Mat::identity(Rationals, 3);
        let (r, p) = id.rref();
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn rref_hand_reduction_over_q() {
        let a = Mat::from_i64(Rationals, &[&[0, 2], &[1, 3]]);
        let (r, p) = a.rref();
        assert_eq!(r, Mat::identity(Rationals, 2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let z = Mat::zeros(Rationals, 2, 2);
        assert_eq!(Subspace::kernel(&z), Subspace::full(Rationals, 2));
    }

    #[test]
    fn complementary_lines_meet_in_zero() {
        let q = Rationals;
        let u = Subspace::span(q, 2, &[vec![q.one(), q.zero()]]).unwrap();
        let v = Subspace::span(q, 2, &[vec![q.zero(), q.one()]]).unwrap();
        let w = u.intersect(&v).unwrap();
        assert_eq!(w.dim(), 0);
        assert_eq!(u.sum(&v).unwrap().dim(), 2);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let q = Rationals;
        let u = Subspace::full(q, 2);
        let v = Subspace::full(q, 3);
        assert!(matches!(u.sum(&v), Err(Error::DimensionMismatch(_))));
        assert!(matches!(u.intersect(&v), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn quotient_basis_completes() {
        let q = Rationals;
        let v = Subspace::full(q, 3);
        let u = Subspace::span(q, 3, &[vec![q.one(), q.one(), q.zero()]]).unwrap();
        let reps = v.quotient_basis(&u).unwrap();
        assert_eq!(reps.len(), 2);
        let all = u.sum(&Subspace::span(q, 3, &reps).unwrap()).unwrap();
        assert_eq!(all.dim(), 3);
        assert!(u.quotient_basis(&v).is_err());
    }

    #[test]
    fn echelon_matches_rref() {
        let q = Rationals;
        let rows = vec![
            vec![q.from_i64(1), q.from_i64(2), q.from_i64(3)],
            vec![q.from_i64(2), q.from_i64(4), q.from_i64(6)],
            vec![q.from_i64(0), q.from_i64(1), q.from_i64(5)],
        ];
        let mut e = Echelon::new(q, 3);
        let grew: Vec<bool> = rows.iter().map(|r| e.insert(r)).collect();
        assert_eq!(grew, vec![true, false, true]);
        assert_eq!(e.into_subspace(), Subspace::span(q, 3, &rows).unwrap());
    }

    #[test]
    fn solve_and_inverse() {
        let q = Rationals;
        let a = Mat::from_i64(q, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        let b = vec![q.from_i64(3), q.from_i64(2)];
        let x = a.solve_left(&b).unwrap();
        assert_eq!(vec_mat(&x, &a), b);
        let sing = Mat::from_i64(q, &[&[1, 1], &[1, 1]]);
        assert!(sing.inverse().is_none());
        assert!(sing.solve_left(&[q.one(), q.zero()]).is_none());
    }
}
