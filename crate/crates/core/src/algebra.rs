//! Finite-dimensional associative unital algebras given by structure constants.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{is_zero_vec, unit_vec, vec_axpy, Mat};

/// Raw algebra tables, before validation.
///
/// `mul[i][j]` is the coefficient vector of `b_i * b_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraData<F: Field> {
    pub field: F,
    pub labels: Vec<String>,
    pub one: Vec<F::Elem>,
    pub mul: Vec<Vec<Vec<F::Elem>>>,
}

/// Why a set of tables fails to be an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraFailure {
    Shape(String),
    /// `1 * b != b` or `b * 1 != b`.
    Unit { basis: usize },
    /// `(b_i b_j) b_k != b_i (b_j b_k)`.
    Associativity { i: usize, j: usize, k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraReport {
    pub dim: usize,
    pub failure: Option<AlgebraFailure>,
}

impl AlgebraReport {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }
}

/// Combinatorial data remembered for algebras built from a quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverInfo {
    pub vertices: usize,
    /// Basis index of the trivial path at each vertex.
    pub idempotents: Vec<usize>,
    /// `(source, target, basis index)` for each arrow.
    pub arrows: Vec<(usize, usize, usize)>,
    /// For each basis element, the arrow sequence of its path (empty for trivial paths).
    pub paths: Vec<Vec<usize>>,
}

#[derive(Debug)]
struct Inner<F: Field> {
    data: AlgebraData<F>,
    quiver: Option<QuiverInfo>,
    unit_index: Option<usize>,
    generators: Vec<usize>,
}

/// A validated algebra. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Algebra<F: Field> {
    inner: Arc<Inner<F>>,
}

impl<F: Field> PartialEq for Algebra<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.data == other.inner.data
    }
}
impl<F: Field> Eq for Algebra<F> {}

fn mul_coeffs<F: Field>(d: &AlgebraData<F>, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let f = &d.field;
    let n = d.labels.len();
    let mut out = vec![f.zero(); n];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if f.is_zero(y) {
                continue;
            }
            vec_axpy(f, &mut out, &f.mul(x, y), &d.mul[i][j]);
        }
    }
    out
}

/// Checks table shapes, the two-sided unit, and associativity on basis triples.
pub fn validate_algebra<F: Field>(d: &AlgebraData<F>) -> AlgebraReport {
    let n = d.labels.len();
    let shape = |msg: String| AlgebraReport { dim: n, failure: Some(AlgebraFailure::Shape(msg)) };
    if n == 0 {
        return shape("an algebra needs at least one basis element".into());
    }
    if d.one.len() != n {
        return shape(format!("unit has {} coefficients, expected {n}", d.one.len()));
    }
    if d.mul.len() != n || d.mul.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
        return shape(format!("multiplication table must be {n}x{n} vectors of length {n}"));
    }
    let f = &d.field;
    for b in 0..n {
        let e = unit_vec(f, n, b);
        if mul_coeffs(d, &d.one, &e) != e || mul_coeffs(d, &e, &d.one) != e {
            return AlgebraReport { dim: n, failure: Some(AlgebraFailure::Unit { basis: b }) };
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let left = mul_coeffs(d, &d.mul[i][j], &unit_vec(f, n, k));
                let right = mul_coeffs(d, &unit_vec(f, n, i), &d.mul[j][k]);
                if left != right {
                    return AlgebraReport {
                        dim: n,
                        failure: Some(AlgebraFailure::Associativity { i, j, k }),
                    };
                }
            }
        }
    }
    AlgebraReport { dim: n, failure: None }
}

impl<F: Field> Algebra<F> {
    pub fn new(data: AlgebraData<F>) -> Result<Self> {
        Self::with_quiver(data, None)
    }

    pub(crate) fn with_quiver(data: AlgebraData<F>, quiver: Option<QuiverInfo>) -> Result<Self> {
        let report = validate_algebra(&data);
        if let Some(fail) = report.failure {
            let msg = match fail {
                AlgebraFailure::Shape(s) => s,
                AlgebraFailure::Unit { basis } => {
                    format!("unit fails on basis element {}", data.labels[basis])
                }
                AlgebraFailure::Associativity { i, j, k } => format!(
                    "associativity fails on ({}, {}, {})",
                    data.labels[i], data.labels[j], data.labels[k]
                ),
            };
            return Err(Error::InvalidAlgebra(msg));
        }
        let n = data.labels.len();
        let unit_index = (0..n).find(|&i| data.one == unit_vec(&data.field, n, i));
        let mut alg = Algebra { inner: Arc::new(Inner { data, quiver, unit_index, generators: vec![] }) };
        let generators = alg.compute_generators();
        Arc::get_mut(&mut alg.inner).expect("fresh").generators = generators;
        Ok(alg)
    }

    pub fn field(&self) -> &F {
        &self.inner.data.field
    }
    pub fn dim(&self) -> usize {
        self.inner.data.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.inner.data.labels
    }
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels().iter().position(|l| l == label)
    }
    /// Renders `a` against the basis labels, e.g. `1 + 2*x`.
    pub fn format_elem(&self, a: &[F::Elem]) -> String {
        let f = self.field();
        let terms: Vec<String> = a
            .iter()
            .zip(self.labels())
            .filter(|(c, _)| !f.is_zero(c))
            .map(|(c, l)| if f.is_one(c) { l.clone() } else { format!("{}*{}", f.format(c), l) })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn one(&self) -> &[F::Elem] {
        &self.inner.data.one
    }
    pub fn data(&self) -> &AlgebraData<F> {
        &self.inner.data
    }
    pub fn quiver(&self) -> Option<&QuiverInfo> {
        self.inner.quiver.as_ref()
    }
    /// Index of the basis element equal to the unit, if there is one.
    pub fn unit_index(&self) -> Option<usize> {
        self.inner.unit_index
    }

    pub fn basis_elem(&self, i: usize) -> Vec<F::Elem> {
        unit_vec(self.field(), self.dim(), i)
    }

    pub fn zero_elem(&self) -> Vec<F::Elem> {
        vec![self.field().zero(); self.dim()]
    }

    pub fn is_zero_elem(&self, a: &[F::Elem]) -> bool {
        is_zero_vec(self.field(), a)
    }

    /// `a * b`.
    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        mul_coeffs(&self.inner.data, a, b)
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[F::Elem] {
        &self.inner.data.mul[i][j]
    }

    /// Matrix of `v |-> v * a` in the basis: row `i` is `b_i * a`.
    pub fn right_mult(&self, a: &[F::Elem]) -> Mat<F> {
        let rows: Vec<Vec<F::Elem>> =
            (0..self.dim()).map(|i| self.mul(&self.basis_elem(i), a)).collect();
        Mat::from_rows(self.field().clone(), self.dim(), &rows).expect("square table")
    }

    /// Matrix of `v |-> a * v`: row `i` is `a * b_i`.
    pub fn left_mult(&self, a: &[F::Elem]) -> Mat<F> {
        let rows: Vec<Vec<F::Elem>> =
            (0..self.dim()).map(|i| self.mul(a, &self.basis_elem(i))).collect();
        Mat::from_rows(self.field().clone(), self.dim(), &rows).expect("square table")
    }

    /// Basis indices whose actions determine a module structure.
    ///
    /// For quiver algebras these are the vertex idempotents and arrows; in
    /// general a greedily chosen set generating the algebra together with 1.
    pub fn generators(&self) -> Vec<usize> {
        self.inner.generators.clone()
    }

    fn compute_generators(&self) -> Vec<usize> {
        if let Some(q) = self.quiver() {
            let mut g: Vec<usize> = q.idempotents.clone();
            g.extend(q.arrows.iter().map(|a| a.2));
            g.sort_unstable();
            return g;
        }
        let n = self.dim();
        let mut chosen = Vec::new();
        let mut span = self.closure(&chosen);
        for b in 0..n {
            if span.dim() == n {
                break;
            }
            if span.contains(&self.basis_elem(b)) {
                continue;
            }
            chosen.push(b);
            span = self.closure(&chosen);
        }
        chosen
    }

    /// Span of all words in the given basis elements, including the empty word 1.
    fn closure(&self, gens: &[usize]) -> crate::linalg::Echelon<F> {
        let mut span = crate::linalg::Echelon::new(self.field().clone(), self.dim());
        span.insert(self.one());
        let mut frontier = vec![self.one().to_vec()];
        while let Some(v) = frontier.pop() {
            for &g in gens {
                let w = self.mul(&v, &self.basis_elem(g));
                if span.insert(&w) {
                    frontier.push(w);
                }
            }
        }
        span
    }

    /// The right regular module.
    pub fn regular_module(&self) -> crate::module::Module<F> {
        let actions = (0..self.dim()).map(|b| self.right_mult(&self.basis_elem(b))).collect();
        crate::module::Module::new_unchecked(self.clone(), self.dim(), actions)
    }

    /// `k[x]/(x^2)`-style truncated polynomial algebra `k[x]/(x^n)`, basis `1, x, .., x^(n-1)`.
    pub fn truncated_polynomial(field: F, n: usize) -> Result<Self> {
        let labels = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        let mul = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i + j < n {
                            unit_vec(&field, n, i + j)
                        } else {
                            vec![field.zero(); n]
                        }
                    })
                    .collect()
            })
            .collect();
        let one = unit_vec(&field, n, 0);
        Self::new(AlgebraData { field, labels, one, mul })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn two_dim(data_xx: [i64; 2]) -> AlgebraData<Rationals> {
        let q = Rationals;
        let e = |v: [i64; 2]| v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        AlgebraData {
            field: q,
            labels: vec!["1".into(), "x".into()],
            one: e([1, 0]),
            mul: vec![vec![e([1, 0]), e([0, 1])], vec![e([0, 1]), e(data_xx)]],
        }
    }

    #[test]
    fn dual_numbers_are_valid() {
        let r = validate_algebra(&two_dim([0, 0]));
        assert!(r.is_valid());
        assert_eq!(r.dim, 2);
    }

    #[test]
    fn x_squared_one_is_valid() {
        assert!(validate_algebra(&two_dim([1, 0])).is_valid());
    }

    #[test]
    fn mangled_table_reports_xxx() {
        // 3-dim basis {1, x, y} with x*x = y, y*x = 0 but x*y = x: (xx)x = 0, x(xx) = x.
        let q = Rationals;
        let e = |v: [i64; 3]| v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        let d = AlgebraData {
            field: q,
            labels: vec!["1".into(), "x".into(), "y".into()],
            one: e([1, 0, 0]),
            mul: vec![
                vec![e([1, 0, 0]), e([0, 1, 0]), e([0, 0, 1])],
                vec![e([0, 1, 0]), e([0, 0, 1]), e([0, 1, 0])],
                vec![e([0, 0, 1]), e([0, 0, 0]), e([0, 0, 0])],
            ],
        };
        let r = validate_algebra(&d);
        assert_eq!(r.failure, Some(AlgebraFailure::Associativity { i: 1, j: 1, k: 1 }));
        assert!(matches!(Algebra::new(d), Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn regular_action_of_x() {
        let f2 = PrimeField::new(2).unwrap();
        let a = Algebra::truncated_polynomial(f2, 2).unwrap();
        let m = a.regular_module();
        assert_eq!(m.action(1), &Mat::from_i64(f2, &[&[0, 1], &[0, 0]]));
        assert!(m.action(0).is_identity());
        assert_eq!(a.unit_index(), Some(0));
        assert_eq!(a.generators(), vec![1]);
    }
}
