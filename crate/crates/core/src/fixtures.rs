//! Standard small examples: the dual numbers `Λ = k[x]/(x²)`, the Kronecker
//! algebra `K`, and the `(Λ, K)`-bimodule realising `N ↦ (N ⇉ N; 1, x)`.

use crate::algebra::Algebra;
use crate::bimodule::{tensor_over, Bimodule};
use crate::error::Result;
use crate::field::Field;
use crate::interp::InterpData;
use crate::linalg::{unit_vec, Mat};
use crate::module::{fp_module, Module};
use crate::pp::{conj, equivalent, pp_type_generator, sum, FormulaBuilder, PpFormula, PpPair};
use crate::quiver::{algebra_from_quiver, representation, QuiverSpec};

/// `k[x]/(x²)` with basis `1, x`.
pub fn dual_numbers<F: Field>(f: F) -> Result<Algebra<F>> {
    Algebra::truncated_polynomial(f, 2)
}

/// The simple `Λ`-module `Λ/xΛ`.
pub fn simple_top<F: Field>(lam: &Algebra<F>) -> Result<Module<F>> {
    Ok(fp_module(lam, 1, &[vec![lam.basis_elem(1)]])?.module)
}

/// Two vertices, arrows `a, b: 1 -> 2`; basis `e1, e2, a, b`.
pub fn kronecker<F: Field>(f: F) -> Result<Algebra<F>> {
    algebra_from_quiver(&QuiverSpec::new(f, 2, &[(0, 1, "a"), (0, 1, "b")], 2))
}

/// The Kronecker representation with maps `A, B: k^{d1} -> k^{d2}`.
pub fn kronecker_rep<F: Field>(k: &Algebra<F>, a: Mat<F>, b: Mat<F>) -> Result<Module<F>> {
    let dims = [a.rows(), a.cols()];
    representation(k, &dims, &[a, b])
}

/// Simple Kronecker module at vertex `v` (0 or 1).
pub fn kronecker_simple<F: Field>(k: &Algebra<F>, v: usize) -> Result<Module<F>> {
    let f = k.field().clone();
    let (d1, d2) = if v == 0 { (1, 0) } else { (0, 1) };
    kronecker_rep(k, Mat::zeros(f.clone(), d1, d2), Mat::zeros(f, d1, d2))
}

/// `B = Λ ⊕ Λ` with `(u, v)a = (0, u)`, `(u, v)b = (0, ux)` and `s(u, v) = (su, sv)`; `t̄ = (w, xw)`.
pub fn lambda_kronecker_bimodule<F: Field>(lam: &Algebra<F>, k: &Algebra<F>) -> Result<Bimodule<F>> {
    let f = lam.field().clone();
    let x = lam.basis_elem(1);
    let right = kronecker_rep(k, Mat::identity(f.clone(), 2), lam.right_mult(&x))?;
    let left = (0..lam.dim())
        .map(|s| {
            let l = lam.left_mult(&lam.basis_elem(s));
            Mat::block_diag(f.clone(), &[&l, &l])
        })
        .collect();
    Bimodule::new(lam.clone(), right, left, vec![unit_vec(&f, 4, 0), unit_vec(&f, 4, 1)])
}

/// `F N = N ⊗_Λ B`.
pub fn embed<F: Field>(n: &Module<F>, b: &Bimodule<F>) -> Result<Module<F>> {
    Ok(tensor_over(n, b)?.module)
}

/// Restriction to the second vertex, with `x` acting through "`a`-preimage then `b`".
///
/// Well defined on the image of the embedding; on the simple at vertex 2 the
/// action of `x` has no preimage to start from.
pub fn vertex_restriction_data<F: Field>(k: &Algebra<F>, lam: &Algebra<F>) -> Result<InterpData<F>> {
    let e1 = k.basis_elem(0);
    let e2 = k.basis_elem(1);
    let a = k.basis_elem(2);
    let b = k.basis_elem(3);
    let one = k.one().to_vec();
    let minus = |v: &[F::Elem]| -> Vec<F::Elem> { v.iter().map(|c| k.field().neg(c)).collect() };
    let phi = PpFormula::new(k.clone(), 1, 0, vec![vec![e1]])?;
    let psi = PpFormula::zero(k, 1);
    let mut fb = FormulaBuilder::new(k, 2);
    fb.equation(vec![(0, one.clone()), (1, minus(&one))]);
    let rho_one = fb.build();
    let mut fb = FormulaBuilder::new(k, 2);
    let u = fb.fresh(1)[0];
    fb.equation(vec![(u, e2)]);
    fb.equation(vec![(u, a), (0, minus(&one))]);
    fb.equation(vec![(u, b), (1, minus(&one))]);
    let rho_x = fb.build();
    InterpData::new(lam.clone(), PpPair::new(phi, psi)?, vec![rho_one, rho_x])
}

/// Pp-types of every element of the given modules, then closed once under `∧` and `+`,
/// with one representative per equivalence class (first occurrence kept).
pub fn pp_sample<F: Field>(alg: &Algebra<F>, modules: &[Module<F>]) -> Result<Vec<PpFormula<F>>> {
    let mut base: Vec<PpFormula<F>> = Vec::new();
    for m in modules {
        for v in crate::linalg::all_vectors(m.field(), m.dim())? {
            push_new(&mut base, pp_type_generator(m, &[v])?)?;
        }
    }
    if base.is_empty() {
        base.push(PpFormula::zero(alg, 1));
    }
    let mut out = base.clone();
    for i in 0..base.len() {
        for j in i + 1..base.len() {
            push_new(&mut out, conj(&base[i], &base[j])?)?;
            push_new(&mut out, sum(&base[i], &base[j])?)?;
        }
    }
    Ok(out)
}

fn push_new<F: Field>(list: &mut Vec<PpFormula<F>>, phi: PpFormula<F>) -> Result<()> {
    for p in list.iter() {
        if equivalent(p, &phi)? {
            return Ok(());
        }
    }
    list.push(phi);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{iso_test, DecompConfig};
    use crate::field::PrimeField;

    #[test]
    fn bimodule_tuple_needs_both_generators() {
        let f = PrimeField::new(2).unwrap();
        let (lam, k) = (dual_numbers(f).unwrap(), kronecker(f).unwrap());
        let b = lambda_kronecker_bimodule(&lam, &k).unwrap();
        assert_eq!(b.dim(), 4);
        assert!(Bimodule::new(lam.clone(), b.right().clone(), b.left_actions().to_vec(), vec![unit_vec(&f, 4, 0)]).is_err());
    }

    #[test]
    fn embedding_of_simple_and_regular() {
        let f = PrimeField::new(2).unwrap();
        let (lam, k) = (dual_numbers(f).unwrap(), kronecker(f).unwrap());
        let b = lambda_kronecker_bimodule(&lam, &k).unwrap();
        let fs1 = embed(&simple_top(&lam).unwrap(), &b).unwrap();
        let expected = kronecker_rep(&k, Mat::identity(f, 1), Mat::zeros(f, 1, 1)).unwrap();
        assert!(iso_test(&fs1, &expected, &DecompConfig::default()).unwrap());
        assert_eq!(embed(&lam.regular_module(), &b).unwrap().dim(), 4);
    }

    #[test]
    fn dual_number_sample_is_a_chain_of_four() {
        let f = PrimeField::new(2).unwrap();
        let lam = dual_numbers(f).unwrap();
        let s1 = simple_top(&lam).unwrap();
        let sample = pp_sample(&lam, &[s1, lam.regular_module()]).unwrap();
        assert_eq!(sample.len(), 4);
    }
}
