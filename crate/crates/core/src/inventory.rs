//! Exhaustive lists of indecomposable modules over finite prime fields.
//!
//! Every action tuple of each dimension is enumerated, decomposable modules are
//! discarded and the rest kept up to isomorphism. Completeness is then checked by
//! orbit counting: the number of module structures on `k^d` must equal
//! `Σ |G| / |Aut M|` over the direct sums `M` of members of dimension `d`.

use crate::algebra::Algebra;
use crate::decompose::{indecomposability, iso_between_indecomposables, rad_end, DecompConfig, Indecomposability};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hom::hom_space;
use crate::linalg::{Echelon, Mat};
use crate::module::Module;
use crate::quiver::{as_representation, representation};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InventoryConfig {
    pub cap: usize,
    /// Largest number of action tuples enumerated in total.
    pub budget: u128,
    pub decomp: DecompConfig,
}

impl InventoryConfig {
    pub fn new(cap: usize) -> Self {
        InventoryConfig { cap, budget: 1 << 20, decomp: DecompConfig::default() }
    }
}

#[derive(Clone, Debug)]
pub struct Inventory<F: Field> {
    pub algebra: Algebra<F>,
    pub cap: usize,
    /// Pairwise non-isomorphic, certified indecomposable; ordered by dimension then discovery.
    pub modules: Vec<Module<F>>,
    /// Per dimension (quiver mode: per dimension vector), the count check.
    pub completeness: Report,
}

impl<F: Field> Inventory<F> {
    pub fn up_to(&self, d: usize) -> Vec<Module<F>> {
        self.modules.iter().filter(|m| m.dim() <= d).cloned().collect()
    }
    pub fn is_complete(&self) -> bool {
        self.completeness.passed()
    }
}

/// How module structures on `k^d` are parametrised.
enum Shape {
    /// Vertex dimension vector; one matrix per arrow.
    Quiver(Vec<usize>),
    /// One `d x d` matrix per algebra generator.
    Generic(usize),
}

fn gl_order(q: u128, n: usize) -> Option<u128> {
    let qn = q.checked_pow(n as u32)?;
    (0..n).try_fold(1u128, |acc, k| acc.checked_mul(qn - q.pow(k as u32)))
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Words in the generators whose values span the algebra, and each basis element in terms of them.
struct WordBasis<F: Field> {
    words: Vec<Vec<usize>>,
    coeffs: Vec<Vec<F::Elem>>,
}

fn word_basis<F: Field>(alg: &Algebra<F>) -> Result<WordBasis<F>> {
    let gens = alg.generators();
    let mut span = Echelon::new(alg.field().clone(), alg.dim());
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut values = vec![alg.one().to_vec()];
    span.insert(alg.one());
    let mut i = 0;
    while i < words.len() {
        for &g in &gens {
            let v = alg.mul(&values[i], &alg.basis_elem(g));
            if span.insert(&v) {
                let mut w = words[i].clone();
                w.push(g);
                words.push(w);
                values.push(v);
            }
        }
        i += 1;
    }
    let sys = Mat::from_rows(alg.field().clone(), alg.dim(), &values)?;
    let coeffs = (0..alg.dim())
        .map(|b| {
            sys.solve_left(&alg.basis_elem(b))
                .ok_or_else(|| Error::InvalidAlgebra("generators do not generate the algebra".into()))
        })
        .collect::<Result<_>>()?;
    Ok(WordBasis { words, coeffs })
}

/// Calls `visit` on every tuple of `count` field elements, in odometer order.
fn for_each_tuple<F: Field>(elems: &[F::Elem], count: usize, mut visit: impl FnMut(&[F::Elem]) -> Result<()>) -> Result<()> {
    let q = elems.len();
    let mut idx = vec![0usize; count];
    let mut cur: Vec<F::Elem> = vec![elems[0].clone(); count];
    loop {
        visit(&cur)?;
        let mut pos = 0;
        loop {
            if pos == count {
                return Ok(());
            }
            idx[pos] += 1;
            if idx[pos] < q {
                cur[pos] = elems[idx[pos]].clone();
                break;
            }
            idx[pos] = 0;
            cur[pos] = elems[0].clone();
            pos += 1;
        }
    }
}

fn shapes<F: Field>(alg: &Algebra<F>, d: usize) -> Vec<Shape> {
    match alg.quiver() {
        Some(q) => compositions(d, q.vertices).into_iter().map(Shape::Quiver).collect(),
        None => vec![Shape::Generic(d)],
    }
}

/// Number of field entries describing a module of this shape.
fn entries<F: Field>(alg: &Algebra<F>, shape: &Shape) -> usize {
    match shape {
        Shape::Quiver(dims) => alg.quiver().unwrap().arrows.iter().map(|&(s, t, _)| dims[s] * dims[t]).sum(),
        Shape::Generic(d) => alg.generators().len() * d * d,
    }
}

fn group_order(q: u128, shape: &Shape) -> Option<u128> {
    match shape {
        Shape::Quiver(dims) => dims.iter().try_fold(1u128, |acc, &n| acc.checked_mul(gl_order(q, n)?)),
        Shape::Generic(d) => gl_order(q, *d),
    }
}

/// Dimension vector of a module (its total dimension in generic mode).
fn signature<F: Field>(m: &Module<F>) -> Vec<usize> {
    match as_representation(m) {
        Some((dims, _)) => dims,
        None => vec![m.dim()],
    }
}

fn build<F: Field>(alg: &Algebra<F>, shape: &Shape, wb: Option<&WordBasis<F>>, vals: &[F::Elem]) -> Option<Module<F>> {
    let f = alg.field().clone();
    match shape {
        Shape::Quiver(dims) => {
            let q = alg.quiver().unwrap();
            let mut off = 0;
            let maps: Vec<Mat<F>> = q
                .arrows
                .iter()
                .map(|&(s, t, _)| {
                    let n = dims[s] * dims[t];
                    let m = Mat::new(f.clone(), dims[s], dims[t], vals[off..off + n].to_vec()).unwrap();
                    off += n;
                    m
                })
                .collect();
            representation(alg, dims, &maps).ok()
        }
        Shape::Generic(d) => {
            let wb = wb.unwrap();
            let d = *d;
            let gens = alg.generators();
            let gen_mats: Vec<Mat<F>> = (0..gens.len())
                .map(|i| Mat::new(f.clone(), d, d, vals[i * d * d..(i + 1) * d * d].to_vec()).unwrap())
                .collect();
            let word_mats: Vec<Mat<F>> = wb
                .words
                .iter()
                .map(|w| {
                    w.iter().fold(Mat::identity(f.clone(), d), |acc, g| {
                        let gi = gens.iter().position(|x| x == g).unwrap();
                        acc.mul(&gen_mats[gi]).unwrap()
                    })
                })
                .collect();
            let actions = wb
                .coeffs
                .iter()
                .map(|c| {
                    let mut acc = Mat::zeros(f.clone(), d, d);
                    for (x, wm) in c.iter().zip(&word_mats) {
                        acc.add_scaled(wm, x);
                    }
                    acc
                })
                .collect();
            Module::new(alg.clone(), d, actions).ok()
        }
    }
}

/// All indecomposables of dimension `<= cap`, with the completeness count.
pub fn enumerate_indecomposables<F: Field>(alg: &Algebra<F>, cfg: &InventoryConfig) -> Result<Inventory<F>> {
    let f = alg.field().clone();
    let elems = f
        .elements()
        .ok_or_else(|| Error::InvalidInput("inventories need a finite field".into()))?;
    let q = elems.len() as u128;
    let mut required: u128 = 0;
    for d in 1..=cfg.cap {
        for s in shapes(alg, d) {
            let n = q.checked_pow(entries(alg, &s) as u32).unwrap_or(u128::MAX);
            required = required.saturating_add(n);
        }
    }
    if required > cfg.budget {
        return Err(Error::BudgetExceeded { required, budget: cfg.budget });
    }
    let wb = if alg.quiver().is_none() { Some(word_basis(alg)?) } else { None };
    let mut modules: Vec<Module<F>> = Vec::new();
    let mut structures: Vec<(Vec<usize>, u128)> = Vec::new();
    for d in 1..=cfg.cap {
        for shape in shapes(alg, d) {
            let mut valid: u128 = 0;
            for_each_tuple::<F>(&elems, entries(alg, &shape), |vals| {
                let Some(m) = build(alg, &shape, wb.as_ref(), vals) else {
                    return Ok(());
                };
                valid += 1;
                let sig = signature(&m);
                for x in modules.iter().filter(|x| x.dim() == d && signature(x) == sig) {
                    if iso_between_indecomposables(x, &m)?.is_some() {
                        return Ok(());
                    }
                }
                match indecomposability(&m, &cfg.decomp)? {
                    Indecomposability::Decomposed(_) => Ok(()),
                    Indecomposability::Indecomposable(_) => {
                        modules.push(m);
                        Ok(())
                    }
                    Indecomposability::ProbablyIndecomposable => Err(Error::NotCertified),
                }
            })?;
            let sig = match &shape {
                Shape::Quiver(dims) => dims.clone(),
                Shape::Generic(d) => vec![*d],
            };
            structures.push((sig, valid));
        }
    }
    let completeness = count_check(alg, &modules, &structures, q, cfg)?;
    Ok(Inventory { algebra: alg.clone(), cap: cfg.cap, modules, completeness })
}

/// Compares the number of structures of each shape with the orbit sum over direct sums of members.
fn count_check<F: Field>(
    alg: &Algebra<F>,
    modules: &[Module<F>],
    structures: &[(Vec<usize>, u128)],
    q: u128,
    cfg: &InventoryConfig,
) -> Result<Report> {
    let n = modules.len();
    let mut hom = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            hom[i][j] = hom_space(&modules[i], &modules[j])?.dim();
        }
    }
    let residue: Vec<usize> = modules
        .iter()
        .enumerate()
        .map(|(i, m)| Ok(hom[i][i] - rad_end(m, &cfg.decomp)?.dim()))
        .collect::<Result<_>>()?;
    let sigs: Vec<Vec<usize>> = modules.iter().map(signature).collect();
    let mut report = Report::new("inventory completeness");
    for (sig, valid) in structures {
        let shape = if alg.quiver().is_some() { Shape::Quiver(sig.clone()) } else { Shape::Generic(sig[0]) };
        let g = group_order(q, &shape).ok_or_else(|| Error::InvalidInput("group order overflows".into()))?;
        let mut total: u128 = 0;
        let mut mult = vec![0usize; n];
        orbit_sum(&sigs, sig, 0, &mut mult, &mut |mult| {
            let end: usize = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| mult[i] * mult[j] * hom[i][j])
                .sum();
            let semisimple: usize = (0..n).map(|i| mult[i] * mult[i] * residue[i]).sum();
            let mut aut = q.pow((end - semisimple) as u32);
            for i in 0..n {
                if mult[i] > 0 {
                    aut *= gl_order(q.pow(residue[i] as u32), mult[i]).expect("small orders");
                }
            }
            total += g / aut;
        });
        let label = sig.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        report.push(format!("dimension ({label})"), total == *valid, format!("{valid} structures, orbit sum {total}"));
    }
    Ok(report)
}

/// Visits every multiplicity vector with `Σ mult_i sig_i = target`.
fn orbit_sum(sigs: &[Vec<usize>], target: &[usize], i: usize, mult: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if target.iter().all(|&t| t == 0) {
        visit(mult);
        return;
    }
    if i == sigs.len() {
        return;
    }
    let s = &sigs[i];
    let mut rest = target.to_vec();
    let mut k = 0;
    loop {
        mult[i] = k;
        orbit_sum(sigs, &rest, i + 1, mult, visit);
        if s.iter().zip(&rest).any(|(a, b)| a > b) || s.iter().all(|&a| a == 0) {
            break;
        }
        for (r, a) in rest.iter_mut().zip(s) {
            *r -= a;
        }
        k += 1;
    }
    mult[i] = 0;
}

/// Direct sums of at most `max_parts` members (with repetition) of total dimension at most `max_dim`,
/// labelled by the member indices in non-decreasing order.
pub fn direct_sums<F: Field>(members: &[Module<F>], max_parts: usize, max_dim: usize) -> Result<Vec<(Vec<usize>, Module<F>)>> {
    fn go(n: usize, start: usize, parts: usize, room: usize, dims: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if parts == 0 {
            return;
        }
        for i in start..n {
            if dims[i] <= room {
                cur.push(i);
                go(n, i, parts - 1, room - dims[i], dims, cur, out);
                cur.pop();
            }
        }
    }
    let dims: Vec<usize> = members.iter().map(|m| m.dim()).collect();
    let mut labels = Vec::new();
    go(members.len(), 0, max_parts, max_dim, &dims, &mut Vec::new(), &mut labels);
    labels.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    labels
        .into_iter()
        .map(|l| {
            let parts: Vec<&Module<F>> = l.iter().map(|&i| &members[i]).collect();
            let m = crate::module::direct_sum(parts[0].algebra(), &parts)?.module;
            Ok((l, m))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dual_numbers, kronecker};
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn dual_numbers_over_f2() {
        let lam = dual_numbers(PrimeField::new(2).unwrap()).unwrap();
        let inv = enumerate_indecomposables(&lam, &InventoryConfig::new(3)).unwrap();
        assert_eq!(inv.modules.iter().map(|m| m.dim()).collect::<Vec<_>>(), vec![1, 2]);
        assert!(inv.is_complete(), "{}", inv.completeness);
    }

    #[test]
    fn kronecker_counts() {
        let k = kronecker(PrimeField::new(2).unwrap()).unwrap();
        let inv = enumerate_indecomposables(&k, &InventoryConfig::new(2)).unwrap();
        assert_eq!(inv.modules.len(), 5);
        assert!(inv.is_complete(), "{}", inv.completeness);
        let inv = enumerate_indecomposables(&k, &InventoryConfig::new(4)).unwrap();
        assert_eq!(inv.modules.len(), 11);
        assert!(inv.is_complete(), "{}", inv.completeness);
    }

    #[test]
    fn sums_are_bounded() {
        let lam = dual_numbers(PrimeField::new(2).unwrap()).unwrap();
        let inv = enumerate_indecomposables(&lam, &InventoryConfig::new(2)).unwrap();
        let sums = direct_sums(&inv.modules, 3, 4).unwrap();
        let labels: Vec<Vec<usize>> = sums.iter().map(|s| s.0.clone()).collect();
        assert_eq!(labels, vec![vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 1], vec![0, 0, 0], vec![0, 0, 1]]);
        assert!(sums.iter().all(|(l, m)| m.dim() == l.iter().map(|&i| inv.modules[i].dim()).sum::<usize>()));
    }

    #[test]
    fn limits() {
        let lam = dual_numbers(PrimeField::new(2).unwrap()).unwrap();
        assert!(enumerate_indecomposables(&lam, &InventoryConfig::new(0)).unwrap().modules.is_empty());
        let tight = InventoryConfig { budget: 10, ..InventoryConfig::new(3) };
        assert!(matches!(enumerate_indecomposables(&lam, &tight), Err(Error::BudgetExceeded { .. })));
        let q = dual_numbers(Rationals).unwrap();
        assert!(enumerate_indecomposables(&q, &InventoryConfig::new(1)).is_err());
    }
}
