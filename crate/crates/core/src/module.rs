//! Finite-dimensional right modules, homomorphisms and basic constructions.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{is_zero_vec, unit_vec, vec_axpy, vec_mat, Echelon, Mat, Subspace};

#[derive(Debug)]
struct Inner<F: Field> {
    algebra: Algebra<F>,
    dim: usize,
    actions: Vec<Mat<F>>,
}

/// A right module: one `dim x dim` action matrix per algebra basis element.
#[derive(Clone, Debug)]
pub struct Module<F: Field> {
    inner: Arc<Inner<F>>,
}

impl<F: Field> PartialEq for Module<F> {
    /// Equality as presented modules (same basis, same matrices), not isomorphism.
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.algebra == other.inner.algebra
                && self.inner.dim == other.inner.dim
                && self.inner.actions == other.inner.actions)
    }
}
impl<F: Field> Eq for Module<F> {}

/// Checks the unit and multiplicativity invariants of a candidate action.
pub fn validate_module<F: Field>(algebra: &Algebra<F>, dim: usize, actions: &[Mat<F>]) -> Result<()> {
    let n = algebra.dim();
    if actions.len() != n {
        return Err(Error::InvalidModule(format!(
            "{} action matrices for an algebra of dimension {n}",
            actions.len()
        )));
    }
    for (b, m) in actions.iter().enumerate() {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::InvalidModule(format!(
                "action of {} is {}x{}, expected {dim}x{dim}",
                algebra.labels()[b],
                m.rows(),
                m.cols()
            )));
        }
    }
    let combo = |c: &[F::Elem]| -> Mat<F> {
        let mut acc = Mat::zeros(algebra.field().clone(), dim, dim);
        for (l, x) in c.iter().enumerate() {
            acc.add_scaled(&actions[l], x);
        }
        acc
    };
    if !combo(algebra.one()).is_identity() {
        return Err(Error::InvalidModule("unit does not act as the identity".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = actions[i].mul(&actions[j])?;
            if lhs != combo(algebra.mul_basis(i, j)) {
                return Err(Error::InvalidModule(format!(
                    "action is not multiplicative on ({}, {})",
                    algebra.labels()[i],
                    algebra.labels()[j]
                )));
            }
        }
    }
    Ok(())
}

impl<F: Field> Module<F> {
    pub fn new(algebra: Algebra<F>, dim: usize, actions: Vec<Mat<F>>) -> Result<Self> {
        validate_module(&algebra, dim, &actions)?;
        Ok(Self::new_unchecked(algebra, dim, actions))
    }

    /// Skips validation; for constructions that are modules by design.
    pub fn new_unchecked(algebra: Algebra<F>, dim: usize, actions: Vec<Mat<F>>) -> Self {
        Module { inner: Arc::new(Inner { algebra, dim, actions }) }
    }

    pub fn zero(algebra: &Algebra<F>) -> Self {
        let actions = (0..algebra.dim()).map(|_| Mat::zeros(algebra.field().clone(), 0, 0)).collect();
        Self::new_unchecked(algebra.clone(), 0, actions)
    }

    pub fn algebra(&self) -> &Algebra<F> {
        &self.inner.algebra
    }
    pub fn field(&self) -> &F {
        self.inner.algebra.field()
    }
    pub fn dim(&self) -> usize {
        self.inner.dim
    }
    pub fn actions(&self) -> &[Mat<F>] {
        &self.inner.actions
    }
    pub fn action(&self, b: usize) -> &Mat<F> {
        &self.inner.actions[b]
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Matrix of the action of an algebra element.
    pub fn action_of(&self, a: &[F::Elem]) -> Mat<F> {
        let mut acc = Mat::zeros(self.field().clone(), self.dim(), self.dim());
        for (l, x) in a.iter().enumerate() {
            acc.add_scaled(self.action(l), x);
        }
        acc
    }

    /// `v * a`.
    pub fn act(&self, v: &[F::Elem], a: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field();
        let mut out = vec![f.zero(); self.dim()];
        for (l, x) in a.iter().enumerate() {
            if !f.is_zero(x) {
                vec_axpy(f, &mut out, x, &vec_mat(v, self.action(l)));
            }
        }
        out
    }

    pub fn check_same_algebra(&self, other: &Self) -> Result<()> {
        if self.algebra() != other.algebra() {
            return Err(Error::AlgebraMismatch("modules over different algebras".into()));
        }
        Ok(())
    }

    /// Rebuilds the module in a new basis: row `i` of `p` is the `i`-th new
    /// basis vector, expressed in the old basis. `p` must be invertible.
    pub fn change_basis(&self, p: &Mat<F>) -> Result<(Self, ModuleMap<F>)> {
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::InvalidInput("change of basis is singular".into()))?;
        let actions = self
            .actions()
            .iter()
            .map(|a| p.mul(a)?.mul(&pinv))
            .collect::<Result<Vec<_>>>()?;
        let new = Self::new_unchecked(self.algebra().clone(), self.dim(), actions);
        let iso = ModuleMap::new_unchecked(new.clone(), self.clone(), p.clone());
        Ok((new, iso))
    }
}

/// A module homomorphism `v |-> v * matrix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap<F: Field> {
    source: Module<F>,
    target: Module<F>,
    matrix: Mat<F>,
}

impl<F: Field> ModuleMap<F> {
    pub fn new(source: Module<F>, target: Module<F>, matrix: Mat<F>) -> Result<Self> {
        source.check_same_algebra(&target)?;
        if matrix.rows() != source.dim() || matrix.cols() != target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        for b in source.algebra().generators() {
            let l = source.action(b).mul(&matrix)?;
            let r = matrix.mul(target.action(b))?;
            if l != r {
                return Err(Error::InvalidInput(format!(
                    "matrix does not intertwine the action of {}",
                    source.algebra().labels()[b]
                )));
            }
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn new_unchecked(source: Module<F>, target: Module<F>, matrix: Mat<F>) -> Self {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (source.dim(), target.dim()));
        ModuleMap { source, target, matrix }
    }

    pub fn identity(m: &Module<F>) -> Self {
        Self::new_unchecked(m.clone(), m.clone(), Mat::identity(m.field().clone(), m.dim()))
    }

    pub fn zero(source: &Module<F>, target: &Module<F>) -> Self {
        Self::new_unchecked(
            source.clone(),
            target.clone(),
            Mat::zeros(source.field().clone(), source.dim(), target.dim()),
        )
    }

    pub fn source(&self) -> &Module<F> {
        &self.source
    }
    pub fn target(&self) -> &Module<F> {
        &self.target
    }
    pub fn matrix(&self) -> &Mat<F> {
        &self.matrix
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        vec_mat(v, &self.matrix)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.target.dim() != next.source.dim() {
            return Err(Error::DimensionMismatch("maps are not composable".into()));
        }
        Ok(Self::new_unchecked(self.source.clone(), next.target.clone(), self.matrix.mul(&next.matrix)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix)?))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Whether the matrix intertwines all generator actions.
    pub fn is_intertwiner(&self) -> bool {
        self.source.algebra().generators().into_iter().all(|b| {
            self.source.action(b).mul(&self.matrix).ok() == self.matrix.mul(self.target.action(b)).ok()
        })
    }

    pub fn image(&self) -> Subspace<F> {
        Subspace::image(&self.matrix)
    }

    pub fn kernel(&self) -> Subspace<F> {
        Subspace::kernel(&self.matrix)
    }
}

/// `M_1 ⊕ ... ⊕ M_r` with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum<F: Field> {
    pub module: Module<F>,
    pub inclusions: Vec<ModuleMap<F>>,
    pub projections: Vec<ModuleMap<F>>,
}

pub fn direct_sum<F: Field>(algebra: &Algebra<F>, parts: &[&Module<F>]) -> Result<DirectSum<F>> {
    for p in parts {
        if p.algebra() != algebra {
            return Err(Error::AlgebraMismatch("summand over a different algebra".into()));
        }
    }
    let f = algebra.field().clone();
    let dim: usize = parts.iter().map(|p| p.dim()).sum();
    let actions = (0..algebra.dim())
        .map(|b| {
            let blocks: Vec<&Mat<F>> = parts.iter().map(|p| p.action(b)).collect();
            Mat::block_diag(f.clone(), &blocks)
        })
        .collect();
    let module = Module::new_unchecked(algebra.clone(), dim, actions);
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    let mut off = 0;
    for p in parts {
        let mut inc = Mat::zeros(f.clone(), p.dim(), dim);
        for i in 0..p.dim() {
            inc.set(i, off + i, f.one());
        }
        projections.push(ModuleMap::new_unchecked(module.clone(), (*p).clone(), inc.transpose()));
        inclusions.push(ModuleMap::new_unchecked((*p).clone(), module.clone(), inc));
        off += p.dim();
    }
    Ok(DirectSum { module, inclusions, projections })
}

/// `M ⊕ N`.
pub fn direct_sum2<F: Field>(m: &Module<F>, n: &Module<F>) -> Result<DirectSum<F>> {
    m.check_same_algebra(n)?;
    direct_sum(m.algebra(), &[m, n])
}

/// Block map `⊕ M_i -> ⊕ N_j` from a matrix of maps.
pub fn block_map<F: Field>(
    source: &Module<F>,
    target: &Module<F>,
    blocks: &[Vec<Mat<F>>],
) -> Result<ModuleMap<F>> {
    let f = source.field().clone();
    let mut rows = Vec::new();
    for row in blocks {
        let r = row.first().map_or(0, |b| b.rows());
        let refs: Vec<&Mat<F>> = row.iter().collect();
        rows.push(Mat::hstack(f.clone(), r, &refs)?);
    }
    let refs: Vec<&Mat<F>> = rows.iter().collect();
    let m = Mat::vstack(f, target.dim(), &refs)?;
    ModuleMap::new(source.clone(), target.clone(), m)
}

/// Quotient `M / U` with the projection and a linear section.
#[derive(Clone, Debug)]
pub struct Quotient<F: Field> {
    pub module: Module<F>,
    pub projection: ModuleMap<F>,
    /// Row `j` is a representative in `M` of the `j`-th quotient basis vector.
    pub section: Mat<F>,
}

fn invariance_violation<F: Field>(m: &Module<F>, u: &Subspace<F>) -> Option<(Vec<F::Elem>, usize)> {
    for b in m.algebra().generators() {
        for i in 0..u.dim() {
            let v = u.basis().row(i);
            let w = vec_mat(v, m.action(b));
            if !is_zero_vec(m.field(), &u.reduce(&w)) {
                return Some((v.to_vec(), b));
            }
        }
    }
    None
}

/// `M / U`; the basis of the quotient is given by the non-pivot coordinates of `U`.
pub fn quotient<F: Field>(m: &Module<F>, u: &Subspace<F>) -> Result<Quotient<F>> {
    if u.ambient() != m.dim() {
        return Err(Error::DimensionMismatch("subspace ambient differs from module dim".into()));
    }
    if let Some((v, b)) = invariance_violation(m, u) {
        let f = m.field();
        return Err(Error::NotInvariant {
            vector: v.iter().map(|x| f.format(x)).collect(),
            basis_element: m.algebra().labels()[b].clone(),
        });
    }
    Ok(quotient_unchecked(m, u))
}

pub(crate) fn quotient_unchecked<F: Field>(m: &Module<F>, u: &Subspace<F>) -> Quotient<F> {
    let f = m.field().clone();
    let d = m.dim();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; d];
        for &p in u.pivots() {
            v[p] = true;
        }
        v
    };
    let free: Vec<usize> = (0..d).filter(|&i| !is_pivot[i]).collect();
    let q = free.len();
    let col_of: Vec<Option<usize>> = (0..d).map(|i| free.iter().position(|&j| j == i)).collect();
    // Projection: reduce by U, then read off the free coordinates.
    let mut proj = Mat::zeros(f.clone(), d, q);
    for i in 0..d {
        if let Some(c) = col_of[i] {
            proj.set(i, c, f.one());
        }
    }
    for (r, &p) in u.pivots().iter().enumerate() {
        let row = u.basis().row(r);
        for (j, x) in row.iter().enumerate() {
            if let Some(c) = col_of[j] {
                if !f.is_zero(x) {
                    proj.set(p, c, f.neg(x));
                }
            }
        }
    }
    let mut section = Mat::zeros(f.clone(), q, d);
    for (c, &i) in free.iter().enumerate() {
        section.set(c, i, f.one());
    }
    let actions = m
        .actions()
        .iter()
        .map(|a| section.mul(a).and_then(|sa| sa.mul(&proj)).expect("shapes agree"))
        .collect();
    let module = Module::new_unchecked(m.algebra().clone(), q, actions);
    let projection = ModuleMap::new_unchecked(m.clone(), module.clone(), proj);
    Quotient { module, projection, section }
}

/// Closure of a set of vectors under the action matrices.
pub fn closure<F: Field>(m: &Module<F>, vectors: &[Vec<F::Elem>]) -> Subspace<F> {
    let gens = m.algebra().generators();
    let mut span = Echelon::new(m.field().clone(), m.dim());
    let mut frontier = Vec::new();
    for v in vectors {
        if span.insert(v) {
            frontier.push(v.clone());
        }
    }
    while let Some(v) = frontier.pop() {
        for &b in &gens {
            let w = vec_mat(&v, m.action(b));
            if span.insert(&w) {
                frontier.push(w);
            }
        }
    }
    span.into_subspace()
}

/// A submodule with its inclusion (basis = echelon basis of the subspace).
#[derive(Clone, Debug)]
pub struct Submodule<F: Field> {
    pub module: Module<F>,
    pub inclusion: ModuleMap<F>,
}

/// Submodule on an invariant subspace.
pub fn submodule_on<F: Field>(m: &Module<F>, u: &Subspace<F>) -> Result<Submodule<F>> {
    if let Some((v, b)) = invariance_violation(m, u) {
        let f = m.field();
        return Err(Error::NotInvariant {
            vector: v.iter().map(|x| f.format(x)).collect(),
            basis_element: m.algebra().labels()[b].clone(),
        });
    }
    let actions = m
        .actions()
        .iter()
        .map(|a| {
            let rows: Vec<Vec<F::Elem>> = (0..u.dim())
                .map(|i| u.coordinates(&vec_mat(u.basis().row(i), a)).expect("invariant"))
                .collect();
            Mat::from_rows(m.field().clone(), u.dim(), &rows).expect("square")
        })
        .collect();
    let module = Module::new_unchecked(m.algebra().clone(), u.dim(), actions);
    let inclusion = ModuleMap::new_unchecked(module.clone(), m.clone(), u.basis().clone());
    Ok(Submodule { module, inclusion })
}

pub fn submodule_generated<F: Field>(m: &Module<F>, vectors: &[Vec<F::Elem>]) -> Result<Submodule<F>> {
    for v in vectors {
        if v.len() != m.dim() {
            return Err(Error::DimensionMismatch("generator length differs from module dim".into()));
        }
    }
    submodule_on(m, &closure(m, vectors))
}

/// `A^r`, coordinates `(i, l) -> i * dim A + l`.
pub fn free_module<F: Field>(algebra: &Algebra<F>, r: usize) -> Module<F> {
    let reg = algebra.regular_module();
    let parts: Vec<&Module<F>> = (0..r).map(|_| &reg).collect();
    direct_sum(algebra, &parts).expect("same algebra").module
}

/// Finitely presented module with the images of its free generators.
#[derive(Clone, Debug)]
pub struct FpModule<F: Field> {
    pub module: Module<F>,
    /// Image of the `i`-th free generator.
    pub generators: Vec<Vec<F::Elem>>,
    /// `A^d -> module`.
    pub projection: ModuleMap<F>,
}

/// The element `Σ_i g_i · h_i` of `A^d` for a column `h` of algebra elements.
pub fn free_element<F: Field>(algebra: &Algebra<F>, column: &[Vec<F::Elem>]) -> Vec<F::Elem> {
    let n = algebra.dim();
    let mut v = vec![algebra.field().zero(); column.len() * n];
    for (i, h) in column.iter().enumerate() {
        v[i * n..(i + 1) * n].clone_from_slice(h);
    }
    v
}

/// `A^d` modulo the submodule generated by the columns of `H` (`d x e`, given by columns).
pub fn fp_module<F: Field>(algebra: &Algebra<F>, d: usize, columns: &[Vec<Vec<F::Elem>>]) -> Result<FpModule<F>> {
    for c in columns {
        if c.len() != d {
            return Err(Error::DimensionMismatch(format!("column of length {} for d = {d}", c.len())));
        }
    }
    let free = free_module(algebra, d);
    let rels: Vec<Vec<F::Elem>> = columns.iter().map(|c| free_element(algebra, c)).collect();
    let sub = closure(&free, &rels);
    let q = quotient_unchecked(&free, &sub);
    let n = algebra.dim();
    let one = free_element(algebra, &[algebra.one().to_vec()]);
    let generators = (0..d)
        .map(|i| {
            let mut g = vec![algebra.field().zero(); d * n];
            g[i * n..(i + 1) * n].clone_from_slice(&one);
            q.projection.apply(&g)
        })
        .collect();
    Ok(FpModule { module: q.module, generators, projection: q.projection })
}

/// The pushout of `f: X -> Y` and `g: X -> Z`.
#[derive(Clone, Debug)]
pub struct Pushout<F: Field> {
    pub module: Module<F>,
    pub from_first: ModuleMap<F>,
    pub from_second: ModuleMap<F>,
}

pub fn pushout<F: Field>(f: &ModuleMap<F>, g: &ModuleMap<F>) -> Result<Pushout<F>> {
    if f.source() != g.source() {
        return Err(Error::InvalidInput("pushout maps must share their source".into()));
    }
    let k = f.source().field().clone();
    let ds = direct_sum2(f.target(), g.target())?;
    let x = f.source().dim();
    let rels: Vec<Vec<F::Elem>> = (0..x)
        .map(|i| {
            let e = unit_vec(&k, x, i);
            let mut v = f.apply(&e);
            v.extend(g.apply(&e).iter().map(|a| k.neg(a)));
            v
        })
        .collect();
    let sub = Subspace::span(k, ds.module.dim(), &rels)?;
    let q = quotient_unchecked(&ds.module, &sub);
    Ok(Pushout {
        from_first: ds.inclusions[0].then(&q.projection)?,
        from_second: ds.inclusions[1].then(&q.projection)?,
        module: q.module,
    })
}

impl<F: Field> Pushout<F> {
    /// The unique map out of the pushout restricting to `u` and `v`, if the cone commutes.
    pub fn mediator(&self, u: &ModuleMap<F>, v: &ModuleMap<F>) -> Option<ModuleMap<F>> {
        let f = self.module.field().clone();
        let d = self.module.dim();
        let w = u.target().dim();
        // Unknown T (d x w) with from_first·T = u and from_second·T = v,
        // solved column by column as t^T · C^T = r^T for C = [from_first; from_second].
        let c = Mat::vstack(f.clone(), d, &[&self.from_first.matrix, &self.from_second.matrix]).ok()?;
        let rhs = Mat::vstack(f.clone(), w, &[u.matrix(), v.matrix()]).ok()?;
        let ct = c.transpose();
        let mut t = Mat::zeros(f.clone(), d, w);
        for col in 0..w {
            let target: Vec<F::Elem> = (0..rhs.rows()).map(|i| rhs.get(i, col).clone()).collect();
            let x = ct.solve_left(&target)?;
            for (i, val) in x.into_iter().enumerate() {
                t.set(i, col, val);
            }
        }
        ModuleMap::new(self.module.clone(), u.target().clone(), t).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn lam() -> Algebra<PrimeField> {
        Algebra::truncated_polynomial(PrimeField::new(2).unwrap(), 2).unwrap()
    }

    fn e(f: &PrimeField, v: &[i64]) -> Vec<u32> {
        v.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn fp_module_of_x_is_simple() {
        let a = lam();
        let fp = fp_module(&a, 1, &[vec![a.basis_elem(1)]]).unwrap();
        assert_eq!(fp.module.dim(), 1);
        assert!(fp.module.action(1).is_zero());
    }

    #[test]
    fn free_module_two_is_double_regular() {
        let a = lam();
        let f2 = free_module(&a, 2);
        let r = a.regular_module();
        assert_eq!(f2, direct_sum2(&r, &r).unwrap().module);
        assert_eq!(f2.dim(), 4);
    }

    #[test]
    fn socle_is_generated_by_x() {
        let a = lam();
        let f = *a.field();
        let s = submodule_generated(&a.regular_module(), &[e(&f, &[0, 1])]).unwrap();
        assert_eq!(s.module.dim(), 1);
    }

    #[test]
    fn quotient_by_non_invariant_line_fails() {
        let a = lam();
        let f = *a.field();
        let u = Subspace::span(f, 2, &[e(&f, &[1, 0])]).unwrap();
        match quotient(&a.regular_module(), &u) {
            Err(Error::NotInvariant { basis_element, .. }) => assert_eq!(basis_element, "x"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pushout_examples() {
        let a = lam();
        let f = *a.field();
        let r = a.regular_module();
        let id = ModuleMap::identity(&r);
        assert_eq!(pushout(&id, &id).unwrap().module.dim(), 2);

        let s1 = fp_module(&a, 1, &[vec![a.basis_elem(1)]]).unwrap().module;
        let inc = ModuleMap::new(s1.clone(), r.clone(), Mat::from_i64(f, &[&[0, 1]])).unwrap();
        let p = pushout(&inc, &inc).unwrap();
        assert_eq!(p.module.dim(), 3);
        assert!(p.from_first.is_intertwiner() && p.from_second.is_intertwiner());

        let z = Module::zero(&a);
        let zr = ModuleMap::zero(&z, &r);
        let zs = ModuleMap::zero(&z, &s1);
        assert_eq!(pushout(&zr, &zs).unwrap().module.dim(), 3);
    }

    #[test]
    fn mediator_exists_for_commuting_cone() {
        let a = lam();
        let f = *a.field();
        let r = a.regular_module();
        let s1 = fp_module(&a, 1, &[vec![a.basis_elem(1)]]).unwrap().module;
        let inc = ModuleMap::new(s1.clone(), r.clone(), Mat::from_i64(f, &[&[0, 1]])).unwrap();
        let p = pushout(&inc, &inc).unwrap();
        let id = ModuleMap::identity(&r);
        let med = p.mediator(&id, &id).unwrap();
        assert_eq!(p.from_first.then(&med).unwrap(), id);
        // A non-commuting cone has no mediator.
        let z = ModuleMap::zero(&r, &r);
        assert!(p.mediator(&id, &z).is_none());
    }
}
