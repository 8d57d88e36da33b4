//! Homomorphism spaces, factorisation and the direct-summand test.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{vec_mat, Mat, Subspace};
use crate::module::{Module, ModuleMap};

/// `Hom(M, N)` as a subspace of `k^(dim M * dim N)`, matrix entry `(i, j)` at `i * dim N + j`.
#[derive(Clone, Debug)]
pub struct HomSpace<F: Field> {
    source: Module<F>,
    target: Module<F>,
    space: Subspace<F>,
}

impl<F: Field> HomSpace<F> {
    pub fn source(&self) -> &Module<F> {
        &self.source
    }
    pub fn target(&self) -> &Module<F> {
        &self.target
    }
    pub fn space(&self) -> &Subspace<F> {
        &self.space
    }
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn map_from_vec(&self, v: &[F::Elem]) -> ModuleMap<F> {
        let m = Mat::new(self.source.field().clone(), self.source.dim(), self.target.dim(), v.to_vec())
            .expect("hom vector length");
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), m)
    }

    /// Canonical (echelon) basis.
    pub fn basis(&self) -> Vec<ModuleMap<F>> {
        self.space.basis_vecs().iter().map(|v| self.map_from_vec(v)).collect()
    }

    pub fn contains(&self, f: &ModuleMap<F>) -> bool {
        self.space.contains(f.matrix().data()).unwrap_or(false)
    }

    /// Subspace of this hom space spanned by the given maps.
    pub fn span_of(&self, maps: &[ModuleMap<F>]) -> Subspace<F> {
        let vs: Vec<Vec<F::Elem>> = maps.iter().map(|m| m.matrix().data().to_vec()).collect();
        Subspace::span(self.source.field().clone(), self.space.ambient(), &vs).expect("hom vector length")
    }
}

/// Solves the intertwiner equations `ρ_M(g) X = X ρ_N(g)` over the algebra generators.
pub fn hom_space<F: Field>(m: &Module<F>, n: &Module<F>) -> Result<HomSpace<F>> {
    m.check_same_algebra(n)?;
    let f = m.field().clone();
    let (dm, dn) = (m.dim(), n.dim());
    let unknowns = dm * dn;
    if unknowns == 0 {
        return Ok(HomSpace { source: m.clone(), target: n.clone(), space: Subspace::zero(f, 0) });
    }
    let gens = m.algebra().generators();
    let mut eqs = Mat::zeros(f.clone(), gens.len() * unknowns, unknowns);
    let mut row = 0;
    for &g in &gens {
        let a = m.action(g);
        let b = n.action(g);
        for i in 0..dm {
            for j in 0..dn {
                for k in 0..dm {
                    let x = a.get(i, k);
                    if !f.is_zero(x) {
                        let idx = k * dn + j;
                        let cur = eqs.get(row, idx).clone();
                        eqs.set(row, idx, f.add(&cur, x));
                    }
                }
                for k in 0..dn {
                    let y = b.get(k, j);
                    if !f.is_zero(y) {
                        let idx = i * dn + k;
                        let cur = eqs.get(row, idx).clone();
                        eqs.set(row, idx, f.sub(&cur, y));
                    }
                }
                row += 1;
            }
        }
    }
    let sol = eqs.null_space();
    let space = Subspace::span(f, unknowns, &sol)?;
    Ok(HomSpace { source: m.clone(), target: n.clone(), space })
}

/// Composites `f ∘ g` (first `f`, then `g`) over the given families.
fn composites<F: Field>(fs: &[ModuleMap<F>], gs: &[ModuleMap<F>]) -> Result<Vec<(usize, usize, ModuleMap<F>)>> {
    let mut out = Vec::new();
    for (a, f) in fs.iter().enumerate() {
        for (b, g) in gs.iter().enumerate() {
            out.push((a, b, f.then(g)?));
        }
    }
    Ok(out)
}

/// Whether `h` lies in the span of the given maps.
pub fn in_span<F: Field>(h: &ModuleMap<F>, maps: &[ModuleMap<F>]) -> bool {
    let f = h.source().field().clone();
    let len = h.matrix().data().len();
    let vs: Vec<Vec<F::Elem>> = maps.iter().map(|m| m.matrix().data().to_vec()).collect();
    Subspace::span(f, len, &vs)
        .and_then(|s| s.contains(h.matrix().data()))
        .unwrap_or(false)
}

/// Some `t: X -> N` with `via · t = h`, where `via: M -> X` and `h: M -> N`.
pub fn factor_through<F: Field>(h: &ModuleMap<F>, via: &ModuleMap<F>) -> Result<Option<ModuleMap<F>>> {
    if h.source() != via.source() {
        return Err(Error::InvalidInput("maps must share their source".into()));
    }
    let hs = hom_space(via.target(), h.target())?;
    let basis = hs.basis();
    let products: Vec<Vec<F::Elem>> = basis
        .iter()
        .map(|t| via.then(t).map(|c| c.matrix().data().to_vec()))
        .collect::<Result<_>>()?;
    let f = h.source().field().clone();
    if basis.is_empty() {
        return Ok(h.is_zero().then(|| ModuleMap::zero(via.target(), h.target())));
    }
    let sys = Mat::from_rows(f.clone(), h.matrix().data().len(), &products)?;
    let Some(coeffs) = sys.solve_left(h.matrix().data()) else {
        return Ok(None);
    };
    let mut acc = Mat::zeros(f, via.target().dim(), h.target().dim());
    for (c, t) in coeffs.iter().zip(&basis) {
        acc.add_scaled(t.matrix(), c);
    }
    Ok(Some(ModuleMap::new_unchecked(via.target().clone(), h.target().clone(), acc)))
}

/// Outcome of the summand test.
#[derive(Clone, Debug)]
pub struct SummandWitness<F: Field> {
    pub is_summand: bool,
    /// `(f: N -> M, g: M -> N)` with `f` then `g` the identity of `N`.
    pub split: Option<(ModuleMap<F>, ModuleMap<F>)>,
}

/// `N | M`: the identity of `N` lies in the span of composites `N -> M -> N`.
pub fn is_direct_summand<F: Field>(n: &Module<F>, m: &Module<F>) -> Result<SummandWitness<F>> {
    n.check_same_algebra(m)?;
    if n.is_zero() {
        return Ok(SummandWitness {
            is_summand: true,
            split: Some((ModuleMap::zero(n, m), ModuleMap::zero(m, n))),
        });
    }
    if n.dim() > m.dim() {
        return Ok(SummandWitness { is_summand: false, split: None });
    }
    let fs = hom_space(n, m)?.basis();
    let gs = hom_space(m, n)?.basis();
    let comps = composites(&fs, &gs)?;
    let id = ModuleMap::identity(n);
    let maps: Vec<ModuleMap<F>> = comps.iter().map(|c| c.2.clone()).collect();
    if !in_span(&id, &maps) {
        return Ok(SummandWitness { is_summand: false, split: None });
    }
    // With a local endomorphism ring one composite is already invertible.
    for (a, b, u) in &comps {
        if let Some(uinv) = u.matrix().inverse() {
            let g = ModuleMap::new_unchecked(m.clone(), n.clone(), gs[*b].matrix().mul(&uinv)?);
            return Ok(SummandWitness { is_summand: true, split: Some((fs[*a].clone(), g)) });
        }
    }
    // Decomposable N: try two-term sums.
    for (i, (a1, b1, _)) in comps.iter().enumerate() {
        for (a2, b2, _) in comps.iter().skip(i + 1) {
            let f = fs[*a1].add(&fs[*a2])?;
            let g = gs[*b1].add(&gs[*b2])?;
            let u = f.then(&g)?;
            if let Some(uinv) = u.matrix().inverse() {
                let g = ModuleMap::new_unchecked(m.clone(), n.clone(), g.matrix().mul(&uinv)?);
                return Ok(SummandWitness { is_summand: true, split: Some((f, g)) });
            }
        }
    }
    Ok(SummandWitness { is_summand: true, split: None })
}

/// Image of a vector under a list of maps, stacked.
pub fn apply_all<F: Field>(maps: &[ModuleMap<F>], v: &[F::Elem]) -> Vec<Vec<F::Elem>> {
    maps.iter().map(|m| vec_mat(v, m.matrix())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::field::{PrimeField, Rationals};
    use crate::module::{direct_sum2, fp_module};

    fn lam<F: Field>(f: F) -> (Module<F>, Module<F>) {
        let a = Algebra::truncated_polynomial(f, 2).unwrap();
        let s1 = fp_module(&a, 1, &[vec![a.basis_elem(1)]]).unwrap().module;
        (a.regular_module(), s1)
    }

    #[test]
    fn hom_dimensions() {
        let (l, s1) = lam(Rationals);
        assert_eq!(hom_space(&l, &l).unwrap().dim(), 2);
        let h = hom_space(&s1, &l).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.basis()[0].matrix(), &Mat::from_i64(Rationals, &[&[0, 1]]));
        let z = Module::zero(l.algebra());
        assert_eq!(hom_space(&l, &z).unwrap().dim(), 0);
    }

    #[test]
    fn summand_examples() {
        let (l, s1) = lam(PrimeField::new(2).unwrap());
        assert!(!is_direct_summand(&s1, &l).unwrap().is_summand);
        let sum = direct_sum2(&l, &s1).unwrap().module;
        let w = is_direct_summand(&s1, &sum).unwrap();
        assert!(w.is_summand);
        let (f, g) = w.split.unwrap();
        assert!(f.then(&g).unwrap().matrix().is_identity());
        assert!(f.is_intertwiner() && g.is_intertwiner());
        let w = is_direct_summand(&l, &l).unwrap();
        assert!(w.is_summand);
    }

    #[test]
    fn factorisation() {
        let (l, s1) = lam(Rationals);
        let inc = ModuleMap::new(s1.clone(), l.clone(), Mat::from_i64(Rationals, &[&[0, 1]])).unwrap();
        // 1 -> x factors through itself; the identity of S1 does not factor through Λ.
        assert!(factor_through(&inc, &inc).unwrap().is_some());
        assert!(factor_through(&ModuleMap::identity(&s1), &inc).unwrap().is_none());
    }
}
