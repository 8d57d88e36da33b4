//! (S, R)-bimodules with a right-generating tuple, and tensor products over S.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{vec_mat, Mat, Subspace};
use crate::module::{closure, quotient_unchecked, Module, ModuleMap};

/// A bimodule `_S B_R`. Left actions use the row convention too: `s · b = b L_s`,
/// so `L_{st} = L_t L_s`.
#[derive(Clone, Debug)]
pub struct Bimodule<F: Field> {
    left: Algebra<F>,
    right: Module<F>,
    left_action: Vec<Mat<F>>,
    generators: Vec<Vec<F::Elem>>,
}

impl<F: Field> Bimodule<F> {
    pub fn new(
        left: Algebra<F>,
        right: Module<F>,
        left_action: Vec<Mat<F>>,
        generators: Vec<Vec<F::Elem>>,
    ) -> Result<Self> {
        let f = right.field().clone();
        if left.field() != &f {
            return Err(Error::AlgebraMismatch("left and right algebras over different fields".into()));
        }
        let d = right.dim();
        if left_action.len() != left.dim() {
            return Err(Error::InvalidModule(format!(
                "{} left action matrices for a left algebra of dimension {}",
                left_action.len(),
                left.dim()
            )));
        }
        if left_action.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::InvalidModule("left action matrices must be dim x dim".into()));
        }
        let combo = |c: &[F::Elem]| {
            let mut acc = Mat::zeros(f.clone(), d, d);
            for (l, x) in c.iter().enumerate() {
                acc.add_scaled(&left_action[l], x);
            }
            acc
        };
        if !combo(left.one()).is_identity() {
            return Err(Error::InvalidModule("left unit does not act as the identity".into()));
        }
        for i in 0..left.dim() {
            for j in 0..left.dim() {
                if left_action[j].mul(&left_action[i])? != combo(left.mul_basis(i, j)) {
                    return Err(Error::InvalidModule(format!(
                        "left action not multiplicative on ({}, {})",
                        left.labels()[i],
                        left.labels()[j]
                    )));
                }
            }
        }
        for (s, l) in left_action.iter().enumerate() {
            for (r, ra) in right.actions().iter().enumerate() {
                if l.mul(ra)? != ra.mul(l)? {
                    return Err(Error::InvalidModule(format!(
                        "left action of {} does not commute with right action of {}",
                        left.labels()[s],
                        right.algebra().labels()[r]
                    )));
                }
            }
        }
        if generators.iter().any(|g| g.len() != d) {
            return Err(Error::DimensionMismatch("generator length differs from bimodule dim".into()));
        }
        if closure(&right, &generators).dim() != d {
            return Err(Error::InvalidInput("tuple does not generate the right module".into()));
        }
        Ok(Bimodule { left, right, left_action, generators })
    }

    pub fn left(&self) -> &Algebra<F> {
        &self.left
    }
    pub fn right_algebra(&self) -> &Algebra<F> {
        self.right.algebra()
    }
    /// `B` as a right module.
    pub fn right(&self) -> &Module<F> {
        &self.right
    }
    pub fn left_action(&self, s: usize) -> &Mat<F> {
        &self.left_action[s]
    }
    pub fn left_actions(&self) -> &[Mat<F>] {
        &self.left_action
    }
    pub fn generators(&self) -> &[Vec<F::Elem>] {
        &self.generators
    }
    pub fn dim(&self) -> usize {
        self.right.dim()
    }
    pub fn field(&self) -> &F {
        self.right.field()
    }

    /// `s · b` for an algebra element `s`.
    pub fn left_act(&self, s: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field();
        let mut out = vec![f.zero(); self.dim()];
        for (l, x) in s.iter().enumerate() {
            if !f.is_zero(x) {
                crate::linalg::vec_axpy(f, &mut out, x, &vec_mat(b, &self.left_action[l]));
            }
        }
        out
    }

    /// `S` as an `(S, S)`-bimodule with tuple `(1)`.
    pub fn identity(algebra: &Algebra<F>) -> Result<Self> {
        let left = (0..algebra.dim()).map(|s| algebra.left_mult(&algebra.basis_elem(s))).collect();
        Self::new(algebra.clone(), algebra.regular_module(), left, vec![algebra.one().to_vec()])
    }
}

/// `M ⊗_S B` with the class map from `M ⊗_k B`.
#[derive(Clone, Debug)]
pub struct TensorProduct<F: Field> {
    pub module: Module<F>,
    /// `M ⊗_k B -> M ⊗_S B`, index `(i, j) -> i * dim B + j`.
    pub projection: Mat<F>,
    /// Representatives in `M ⊗_k B` of the basis of `M ⊗_S B`.
    pub section: Mat<F>,
    b_dim: usize,
}

impl<F: Field> TensorProduct<F> {
    /// Class of `m ⊗ b`.
    pub fn elem(&self, m: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.module.field();
        let mut v = vec![f.zero(); m.len() * self.b_dim];
        for (i, x) in m.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                v[i * self.b_dim + j] = f.mul(x, y);
            }
        }
        vec_mat(&v, &self.projection)
    }
}

/// `M ⊗_S B = (M ⊗_k B) / span{ (m s) ⊗ b − m ⊗ (s b) }` over the generators `s` of `S`.
pub fn tensor_over<F: Field>(m: &Module<F>, b: &Bimodule<F>) -> Result<TensorProduct<F>> {
    if m.algebra() != b.left() {
        return Err(Error::AlgebraMismatch("module is not over the left algebra of the bimodule".into()));
    }
    let f = m.field().clone();
    let (dm, db) = (m.dim(), b.dim());
    let amb = dm * db;
    let r = b.right_algebra();
    let actions = b
        .right()
        .actions()
        .iter()
        .map(|ra| Mat::identity(f.clone(), dm).kron(ra))
        .collect();
    let big = Module::new_unchecked(r.clone(), amb, actions);
    let mut rels = Vec::new();
    for s in m.algebra().generators() {
        let ls = b.left_action(s);
        let ms = m.action(s);
        for i in 0..dm {
            for j in 0..db {
                let mut v = vec![f.zero(); amb];
                for (k, x) in ms.row(i).iter().enumerate() {
                    if !f.is_zero(x) {
                        v[k * db + j] = f.add(&v[k * db + j], x);
                    }
                }
                for (k, y) in ls.row(j).iter().enumerate() {
                    if !f.is_zero(y) {
                        v[i * db + k] = f.sub(&v[i * db + k], y);
                    }
                }
                rels.push(v);
            }
        }
    }
    let sub = Subspace::span(f.clone(), amb, &rels)?;
    let q = quotient_unchecked(&big, &sub);
    Ok(TensorProduct {
        module: q.module,
        projection: q.projection.matrix().clone(),
        section: q.section,
        b_dim: db,
    })
}

/// `g ⊗ 1: M ⊗ B -> M' ⊗ B` for `g: M -> M'`.
pub fn tensor_map<F: Field>(
    g: &ModuleMap<F>,
    src: &TensorProduct<F>,
    tgt: &TensorProduct<F>,
) -> Result<ModuleMap<F>> {
    let f = g.source().field().clone();
    let lift = g.matrix().kron(&Mat::identity(f, src.b_dim));
    let m = src.section.mul(&lift)?.mul(&tgt.projection)?;
    Ok(ModuleMap::new_unchecked(src.module.clone(), tgt.module.clone(), m))
}

/// Convenience: `F(M) = M ⊗_S B`.
pub fn apply_functor<F: Field>(m: &Module<F>, b: &Bimodule<F>) -> Result<Module<F>> {
    Ok(tensor_over(m, b)?.module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::hom::hom_space;
    use crate::module::fp_module;

    #[test]
    fn identity_bimodule_tensor_is_unit() {
        let a = Algebra::truncated_polynomial(Rationals, 2).unwrap();
        let b = Bimodule::identity(&a).unwrap();
        let reg = a.regular_module();
        let t = tensor_over(&reg, &b).unwrap();
        assert_eq!(t.module.dim(), 2);
        let s1 = fp_module(&a, 1, &[vec![a.basis_elem(1)]]).unwrap().module;
        let ts = tensor_over(&s1, &b).unwrap();
        assert_eq!(ts.module.dim(), 1);
        assert!(ts.module.action(1).is_zero());
        assert_eq!(hom_space(&ts.module, &s1).unwrap().dim(), 1);
    }

    #[test]
    fn non_generating_tuple_rejected() {
        let a = Algebra::truncated_polynomial(Rationals, 2).unwrap();
        let left = (0..2).map(|s| a.left_mult(&a.basis_elem(s))).collect();
        let x = a.basis_elem(1);
        assert!(Bimodule::new(a.clone(), a.regular_module(), left, vec![x]).is_err());
    }
}
