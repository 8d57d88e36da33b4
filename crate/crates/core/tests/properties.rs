use proptest::prelude::*;

use ppinterp::algebra::Algebra;
use ppinterp::controlled::hom_through_c;
use ppinterp::fixtures::{dual_numbers, kronecker, kronecker_rep};
use ppinterp::hom::hom_space;
use ppinterp::io::{formula_json, Loader};
use ppinterp::linalg::{Mat, Subspace};
use ppinterp::module::{direct_sum, fp_module, Module};
use ppinterp::pp::{conj, eval, free_realisation, implies, pp_type_generator, sum, PpFormula};
use ppinterp::{Field, PrimeField, Rationals};

fn f3() -> PrimeField {
    PrimeField::new(3).unwrap()
}

fn mat3(rows: usize, cols: usize) -> impl Strategy<Value = Mat<PrimeField>> {
    prop::collection::vec(0u32..3, rows * cols).prop_map(move |d| Mat::new(f3(), rows, cols, d).unwrap())
}

fn mat_q(rows: usize, cols: usize) -> impl Strategy<Value = Mat<Rationals>> {
    prop::collection::vec((-4i64..5, 1i64..4), rows * cols).prop_map(move |d| {
        let q = Rationals;
        let data = d.iter().map(|&(a, b)| q.div(&q.from_i64(a), &q.from_i64(b)).unwrap()).collect();
        Mat::new(q, rows, cols, data).unwrap()
    })
}

/// A finitely presented `Λ`-module on one or two generators.
fn lambda_module() -> impl Strategy<Value = Module<PrimeField>> {
    (1usize..3, prop::collection::vec(prop::collection::vec(0u32..3, 4), 0..3)).prop_map(|(d, rels)| {
        let lam = dual_numbers(f3()).unwrap();
        let cols: Vec<Vec<Vec<u32>>> = rels.iter().map(|r| (0..d).map(|i| r[2 * i..2 * i + 2].to_vec()).collect()).collect();
        fp_module(&lam, d, &cols).unwrap().module
    })
}

fn kronecker_module() -> impl Strategy<Value = Module<PrimeField>> {
    (0usize..3, 0usize..3)
        .prop_flat_map(|(a, b)| (mat3(a, b), mat3(a, b)))
        .prop_map(|(a, b)| kronecker_rep(&kronecker(f3()).unwrap(), a, b).unwrap())
}

/// A formula over `alg` with `n` free variables.
fn formula(alg: Algebra<PrimeField>, n: usize) -> impl Strategy<Value = PpFormula<PrimeField>> {
    let d = alg.dim();
    (0usize..3, 0usize..4).prop_flat_map(move |(c, eqs)| {
        let alg = alg.clone();
        prop::collection::vec(prop::collection::vec(prop::collection::vec(0u32..3, d), eqs), n + c)
            .prop_map(move |rows| PpFormula::new(alg.clone(), n, c, rows).unwrap())
    })
}

fn lambda_formula(n: usize) -> impl Strategy<Value = PpFormula<PrimeField>> {
    formula(dual_numbers(f3()).unwrap(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent(a in mat3(4, 5)) {
        let (r, piv) = a.rref();
        let (r2, piv2) = r.rref();
        prop_assert_eq!(r, r2);
        prop_assert_eq!(piv, piv2);
    }

    #[test]
    fn rank_nullity_over_f3(a in mat3(4, 6)) {
        prop_assert_eq!(a.rank() + a.null_space().len(), a.cols());
        for v in a.null_space() {
            prop_assert!(a.mul(&Mat::new(f3(), 6, 1, v).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn rank_nullity_over_rationals(a in mat_q(3, 4)) {
        prop_assert_eq!(a.rank() + a.null_space().len(), a.cols());
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn inverse_is_two_sided(a in mat_q(3, 3)) {
        if let Some(inv) = a.inverse() {
            prop_assert!(a.mul(&inv).unwrap().is_identity());
            prop_assert!(inv.mul(&a).unwrap().is_identity());
        } else {
            prop_assert!(a.rank() < 3);
        }
    }

    #[test]
    fn grassmann_formula(u in mat3(3, 5), v in mat3(3, 5)) {
        let (u, v) = (Subspace::row_space(&u), Subspace::row_space(&v));
        let s = u.sum(&v).unwrap();
        let i = u.intersect(&v).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(i.is_subspace_of(&u).unwrap() && i.is_subspace_of(&v).unwrap());
        prop_assert!(u.is_subspace_of(&s).unwrap());
    }

    #[test]
    fn eval_is_a_subgroup_of_solutions(phi in lambda_formula(1), m in lambda_module()) {
        let s = eval(&phi, &m).unwrap();
        prop_assert_eq!(s.ambient(), m.dim());
        let fr = free_realisation(&phi).unwrap();
        prop_assert!(eval(&phi, &fr.module).unwrap().contains(&fr.tuple_vec()).unwrap());
    }

    #[test]
    fn implication_is_sound(psi in lambda_formula(1), phi in lambda_formula(1), m in lambda_module()) {
        if implies(&psi, &phi).unwrap() {
            prop_assert!(eval(&psi, &m).unwrap().is_subspace_of(&eval(&phi, &m).unwrap()).unwrap());
        }
    }

    #[test]
    fn implication_is_transitive(a in lambda_formula(1), b in lambda_formula(1), c in lambda_formula(1)) {
        if implies(&a, &b).unwrap() && implies(&b, &c).unwrap() {
            prop_assert!(implies(&a, &c).unwrap());
        }
    }

    #[test]
    fn conjunction_and_sum_evaluate_pointwise(phi in lambda_formula(2), psi in lambda_formula(2), m in lambda_module()) {
        let (a, b) = (eval(&phi, &m).unwrap(), eval(&psi, &m).unwrap());
        prop_assert_eq!(eval(&conj(&phi, &psi).unwrap(), &m).unwrap(), a.intersect(&b).unwrap());
        prop_assert_eq!(eval(&sum(&phi, &psi).unwrap(), &m).unwrap(), a.sum(&b).unwrap());
    }

    #[test]
    fn eval_is_additive_on_direct_sums(phi in lambda_formula(1), m in lambda_module(), n in lambda_module()) {
        let ds = direct_sum(m.algebra(), &[&m, &n]).unwrap().module;
        let lhs = eval(&phi, &ds).unwrap().dim();
        prop_assert_eq!(lhs, eval(&phi, &m).unwrap().dim() + eval(&phi, &n).unwrap().dim());
    }

    #[test]
    fn pp_type_generator_is_the_strongest_formula(m in lambda_module(), phi in lambda_formula(1)) {
        let s = eval(&phi, &m).unwrap();
        for a in s.basis_vecs().into_iter().take(2) {
            let t = pp_type_generator(&m, &[a]).unwrap();
            prop_assert!(implies(&t, &phi).unwrap());
        }
    }

    #[test]
    fn kronecker_eval_is_additive(
        phi in formula(kronecker(f3()).unwrap(), 1),
        m in kronecker_module(),
        n in kronecker_module(),
    ) {
        let ds = direct_sum(m.algebra(), &[&m, &n]).unwrap().module;
        prop_assert_eq!(
            eval(&phi, &ds).unwrap().dim(),
            eval(&phi, &m).unwrap().dim() + eval(&phi, &n).unwrap().dim()
        );
    }

    #[test]
    fn formula_json_roundtrip(phi in formula(kronecker(f3()).unwrap(), 2)) {
        let l = Loader::new(f3(), ".");
        prop_assert_eq!(l.formula(&formula_json(&phi), None).unwrap(), phi);
    }

    #[test]
    fn maps_through_c_form_an_ideal(m in lambda_module(), n in lambda_module(), p in lambda_module(), c in lambda_module()) {
        let hc = hom_through_c(&m, &n, Some(&c)).unwrap();
        let target = hom_through_c(&m, &p, Some(&c)).unwrap();
        let hom_mn = hom_space(&m, &n).unwrap();
        prop_assert!(hc.is_subspace_of(hom_mn.space()).unwrap());
        for g in hc.basis_vecs() {
            let g = hom_mn.map_from_vec(&g);
            for h in hom_space(&n, &p).unwrap().basis() {
                prop_assert!(target.contains(g.then(&h).unwrap().matrix().data()).unwrap());
            }
        }
    }
}
