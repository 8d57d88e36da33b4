use ppinterp::decompose::{iso_test, DecompConfig};
use ppinterp::fixtures::*;
use ppinterp::hom::is_direct_summand;
use ppinterp::interp::*;
use ppinterp::linalg::Mat;
use ppinterp::module::direct_sum2;
use ppinterp::pp::{equivalent, pair_open, FormulaBuilder};
use ppinterp::{Field, PrimeField};

struct Setup {
    f: PrimeField,
    lam: ppinterp::algebra::Algebra<PrimeField>,
    k: ppinterp::algebra::Algebra<PrimeField>,
    b: ppinterp::bimodule::Bimodule<PrimeField>,
}

fn setup() -> Setup {
    let f = PrimeField::new(2).unwrap();
    let lam = dual_numbers(f).unwrap();
    let k = kronecker(f).unwrap();
    let b = lambda_kronecker_bimodule(&lam, &k).unwrap();
    Setup { f, lam, k, b }
}

#[test]
fn hom_data_action_of_x_is_a_shift() {
    let s = setup();
    let data = hom_interp_data(&s.b).unwrap();
    assert_eq!(data.m(), 2);
    assert!(data.rhos().iter().all(|r| r.is_quantifier_free()));
    let one = s.k.one().to_vec();
    let mut fb = FormulaBuilder::new(&s.k, 4);
    fb.equation(vec![(2, one.clone()), (1, one.clone())]);
    fb.equation(vec![(3, one)]);
    // Coefficients are only determined modulo the relations of t̄, so compare on φ(x̄).
    let on_phi = |rho: &ppinterp::pp::PpFormula<PrimeField>| {
        let mut b = FormulaBuilder::new(&s.k, 4);
        b.add(rho, &b.vars(&[0, 1, 2, 3])).unwrap();
        b.add(data.phi(), &b.vars(&[0, 1])).unwrap();
        b.build()
    };
    assert!(equivalent(&on_phi(data.rho(1)), &on_phi(&fb.build())).unwrap());
}

#[test]
fn hom_data_recovers_lambda_modules() {
    let s = setup();
    let cfg = DecompConfig::default();
    let data = hom_interp_data(&s.b).unwrap();
    let s1 = simple_top(&s.lam).unwrap();
    for n in [s.lam.regular_module(), s1.clone()] {
        let fn_ = embed(&n, &s.b).unwrap();
        assert!(check_welldefined(&data, &fn_).unwrap().passed());
        let im = apply(&data, &fn_).unwrap();
        assert!(iso_test(&im.module, &n, &cfg).unwrap());
    }
    let ifb = apply(&data, s.b.right()).unwrap();
    assert_eq!(ifb.module.dim(), 2);
}

#[test]
fn apply_map_on_split_pair_composes_to_identity() {
    let s = setup();
    let data = hom_interp_data(&s.b).unwrap();
    let fs1 = embed(&simple_top(&s.lam).unwrap(), &s.b).unwrap();
    let flam = embed(&s.lam.regular_module(), &s.b).unwrap();
    let sum = direct_sum2(&flam, &fs1).unwrap();
    let w = is_direct_summand(&fs1, &sum.module).unwrap();
    assert!(w.is_summand);
    let (i, p) = w.split.unwrap();
    let ia = apply(&data, &fs1).unwrap();
    let ib = apply(&data, &sum.module).unwrap();
    let ii = apply_map_with(&data, &i, &ia, &ib).unwrap();
    let ip = apply_map_with(&data, &p, &ib, &ia).unwrap();
    assert!(ii.then(&ip).unwrap().matrix().is_identity());
    let comp = i.then(&p).unwrap();
    assert_eq!(apply_map_with(&data, &comp, &ia, &ia).unwrap(), ii.then(&ip).unwrap());
}

#[test]
fn restriction_data_axioms_separate_the_image() {
    let s = setup();
    let data = vertex_restriction_data(&s.k, &s.lam).unwrap();
    let pairs = axiom_pairs(&data).unwrap();
    assert_eq!(pairs.len(), 2 * 2 + 2 * 2);
    for n in [s.lam.regular_module(), simple_top(&s.lam).unwrap()] {
        let fn_ = embed(&n, &s.b).unwrap();
        for ax in &pairs {
            assert!(!pair_open(&ax.pair, &fn_).unwrap(), "{} open on F N", ax.name);
        }
        let im = apply(&data, &fn_).unwrap();
        assert!(iso_test(&im.module, &n, &DecompConfig::default()).unwrap());
    }
    let s2 = kronecker_simple(&s.k, 1).unwrap();
    assert!(pairs.iter().any(|ax| pair_open(&ax.pair, &s2).unwrap()));
    assert!(apply(&data, &s2).is_err());
}

#[test]
fn pullback_of_simple_isolation() {
    let s = setup();
    let cfg = DecompConfig::default();
    let data = hom_interp_data(&s.b).unwrap();
    let s1 = simple_top(&s.lam).unwrap();
    let inv = vec![s1.clone(), s.lam.regular_module()];
    let iso = isolating_pair(&s1, &[s.f.one()], &inv, 2, &cfg).unwrap();
    let (st, report) = pullback_pair(&data, &iso.pair, 1).unwrap();
    assert_eq!(report.n_d, bounds(1, 2, 2, 0, 0, &[0, 0], 4).unwrap().n_d);
    assert!(report.holds(), "{report:?}");
    let fs1 = embed(&s1, &s.b).unwrap();
    let flam = embed(&s.lam.regular_module(), &s.b).unwrap();
    assert!(pair_open(&st, &fs1).unwrap());
    assert!(!pair_open(&st, &flam).unwrap());
    let kr = |a: &[&[i64]], b: &[&[i64]]| kronecker_rep(&s.k, Mat::from_i64(s.f, a), Mat::from_i64(s.f, b)).unwrap();
    let m = kr(&[&[0]], &[&[1]]);
    let im = apply(&data, &m).unwrap();
    assert_eq!(pair_open(&st, &m).unwrap(), is_direct_summand(&s1, &im.module).unwrap().is_summand);
}

#[test]
fn shape_is_enforced() {
    let s = setup();
    let data = hom_interp_data(&s.b).unwrap();
    let s1 = simple_top(&s.lam).unwrap();
    let iso = isolating_pair(&s1, &[s.f.one()], std::slice::from_ref(&s1), 1, &DecompConfig::default()).unwrap();
    assert!(matches!(pullback_pair(&data, &iso.pair, 2), Err(ppinterp::Error::Shape(_))));
}

#[test]
fn apply_respects_direct_sums() {
    let s = setup();
    let cfg = DecompConfig::default();
    let data = hom_interp_data(&s.b).unwrap();
    let kr = |a: &[&[i64]], b: &[&[i64]]| kronecker_rep(&s.k, Mat::from_i64(s.f, a), Mat::from_i64(s.f, b)).unwrap();
    let mods = [kr(&[&[1]], &[&[0]]), kr(&[&[1]], &[&[1]]), kronecker_simple(&s.k, 0).unwrap(), kronecker_simple(&s.k, 1).unwrap()];
    for m in &mods {
        for n in &mods {
            let sum = direct_sum2(m, n).unwrap().module;
            let lhs = apply(&data, &sum).unwrap().module;
            let rhs = direct_sum2(&apply(&data, m).unwrap().module, &apply(&data, n).unwrap().module).unwrap().module;
            assert!(ppinterp::decompose::find_isomorphism(&lhs, &rhs, &cfg).unwrap().is_some());
        }
    }
}
