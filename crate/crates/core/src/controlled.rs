//! Controlled representation embeddings `F = - ⊗_S B` and the inverse
//! interpretation `Hom_R(B, -) / Hom_R(B, -)_C`.

use crate::bimodule::{tensor_map, tensor_over, Bimodule};
use crate::decompose::{find_isomorphism, rad_hom, DecompConfig};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hom::{factor_through, hom_space, is_direct_summand};
use crate::interp::{apply, hom_interp_data, InterpData};
use crate::linalg::{Mat, Subspace};
use crate::module::{direct_sum, Module, ModuleMap};
use crate::pp::{pp_type_generator, PpPair};
use crate::report::Report;

/// `F = - ⊗_S B`, optionally controlled by `add(C)`; `None` stands for `C = 0`.
#[derive(Clone, Debug)]
pub struct EmbeddingData<F: Field> {
    pub bimodule: Bimodule<F>,
    pub control: Option<Module<F>>,
}

impl<F: Field> EmbeddingData<F> {
    pub fn new(bimodule: Bimodule<F>, control: Option<Module<F>>) -> Result<Self> {
        if let Some(c) = &control {
            if c.algebra() != bimodule.right_algebra() {
                return Err(Error::AlgebraMismatch("control module is not over the right algebra".into()));
            }
        }
        Ok(EmbeddingData { bimodule, control })
    }

    /// `F M`.
    pub fn embed(&self, m: &Module<F>) -> Result<Module<F>> {
        Ok(tensor_over(m, &self.bimodule)?.module)
    }
}

/// `Δ: M -> C^n` with coordinates a basis of `Hom(M, C)`.
#[derive(Clone, Debug)]
pub struct PreEnvelope<F: Field> {
    pub source: Module<F>,
    pub target: Module<F>,
    pub map: ModuleMap<F>,
}

fn power<F: Field>(c: &Module<F>, n: usize) -> Result<Module<F>> {
    let parts: Vec<&Module<F>> = vec![c; n];
    Ok(direct_sum(c.algebra(), &parts)?.module)
}

pub fn preenvelope<F: Field>(m: &Module<F>, c: &Module<F>) -> Result<PreEnvelope<F>> {
    let basis = hom_space(m, c)?.basis();
    let target = power(c, basis.len())?;
    let f = m.field().clone();
    let blocks: Vec<&Mat<F>> = basis.iter().map(|g| g.matrix()).collect();
    let mat = if blocks.is_empty() { Mat::zeros(f.clone(), m.dim(), 0) } else { Mat::hstack(f, m.dim(), &blocks)? };
    let map = ModuleMap::new(m.clone(), target.clone(), mat)?;
    Ok(PreEnvelope { source: m.clone(), target, map })
}

/// Every basis map `M -> C^k`, `k <= max_power`, factors through `Δ`.
pub fn verify_preenvelope<F: Field>(pe: &PreEnvelope<F>, c: &Module<F>, max_power: usize) -> Result<Report> {
    let mut report = Report::new("preenvelope factorisation");
    for k in 1..=max_power {
        let ck = power(c, k)?;
        for (i, g) in hom_space(&pe.source, &ck)?.basis().iter().enumerate() {
            let ok = factor_through(g, &pe.map)?.is_some();
            report.push(format!("C^{k} basis map {i}"), ok, "");
        }
    }
    Ok(report)
}

/// Maps `M -> N` factoring through `add(C)`, inside the ambient of `hom_space(M, N)`.
pub fn hom_through_c<F: Field>(m: &Module<F>, n: &Module<F>, c: Option<&Module<F>>) -> Result<Subspace<F>> {
    let ambient = m.dim() * n.dim();
    let f = m.field().clone();
    let Some(c) = c else {
        return Ok(Subspace::zero(f, ambient));
    };
    let pe = preenvelope(m, c)?;
    let vecs = hom_space(&pe.target, n)?
        .basis()
        .iter()
        .map(|h| pe.map.then(h).map(|g| g.matrix().data().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Subspace::span(f, ambient, &vecs)
}

/// `F Hom_S(M, N)` as a subspace of `Hom_R(FM, FN)`'s ambient.
pub fn functor_image<F: Field>(b: &Bimodule<F>, m: &Module<F>, n: &Module<F>) -> Result<Subspace<F>> {
    let tm = tensor_over(m, b)?;
    let tn = tensor_over(n, b)?;
    let vecs = hom_space(m, n)?
        .basis()
        .iter()
        .map(|g| tensor_map(g, &tm, &tn).map(|h| h.matrix().data().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Subspace::span(m.field().clone(), tm.module.dim() * tn.module.dim(), &vecs)
}

/// `Hom_R(FM, FN) = F Hom_S(M, N) ⊕ Hom_R(FM, FN)_C` with `Hom_C` radical, per pair.
pub fn check_controlled<F: Field>(
    e: &EmbeddingData<F>,
    pairs: &[(Module<F>, Module<F>)],
    cfg: &DecompConfig,
) -> Result<Report> {
    let mut report = Report::new("controlled embedding");
    for (idx, (m, n)) in pairs.iter().enumerate() {
        let fm = e.embed(m)?;
        let fnn = e.embed(n)?;
        let full = hom_space(&fm, &fnn)?;
        let image = functor_image(&e.bimodule, m, n)?;
        let hc = hom_through_c(&fm, &fnn, e.control.as_ref())?;
        let meet = image.intersect(&hc)?.dim();
        report.push(format!("pair {idx} intersection"), meet == 0, if meet == 0 { String::new() } else { format!("dim {meet}") });
        let ok = image.dim() + hc.dim() == full.dim();
        report.push(
            format!("pair {idx} dimensions"),
            ok,
            format!("{} + {} vs {}", image.dim(), hc.dim(), full.dim()),
        );
        let radical = hc.dim() == 0 || hc.is_subspace_of(&rad_hom(&fm, &fnn, cfg)?.rad)?;
        report.push(format!("pair {idx} radical"), radical, "");
    }
    Ok(report)
}

/// Data of `Hom_R(B, -) / Hom_R(B, -)_C` over the generating tuple `t̄`.
pub fn inverse_interp<F: Field>(e: &EmbeddingData<F>) -> Result<InterpData<F>> {
    let hd = hom_interp_data(&e.bimodule)?;
    let Some(c) = &e.control else {
        return Ok(hd);
    };
    let pe = preenvelope(e.bimodule.right(), c)?;
    let tuple: Vec<Vec<F::Elem>> = e.bimodule.generators().iter().map(|t| pe.map.apply(t)).collect();
    let phi_c = pp_type_generator(&pe.target, &tuple)?;
    let pair = PpPair::new(hd.phi().clone(), phi_c)?;
    InterpData::new(hd.target().clone(), pair, hd.rhos().to_vec())
}

/// Outcome of `I F N ≅ N`.
#[derive(Clone, Debug)]
pub struct RoundTrip<F: Field> {
    pub report: Report,
    pub ifn: Module<F>,
    pub iso: Option<ModuleMap<F>>,
}

pub fn roundtrip_check<F: Field>(e: &EmbeddingData<F>, data: &InterpData<F>, n: &Module<F>, cfg: &DecompConfig) -> Result<RoundTrip<F>> {
    let ifn = apply(data, &e.embed(n)?)?.module;
    let iso = find_isomorphism(&ifn, n, cfg)?;
    let mut report = Report::new("round trip");
    let detail = format!("dim IFN = {}, dim N = {}", ifn.dim(), n.dim());
    report.push("IFN isomorphic to N", iso.is_some(), detail);
    Ok(RoundTrip { report, ifn, iso })
}

/// `N | G F N` for `G = Hom_R(B, -)`.
pub fn nagase_check<F: Field>(b: &Bimodule<F>, data: &InterpData<F>, n: &Module<F>) -> Result<bool> {
    let gfn = apply(data, &tensor_over(n, b)?.module)?.module;
    Ok(is_direct_summand(n, &gfn)?.is_summand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dual_numbers, simple_top};
    use crate::field::PrimeField;

    #[test]
    fn simple_into_regular() {
        let f = PrimeField::new(2).unwrap();
        let lam = dual_numbers(f).unwrap();
        let s1 = simple_top(&lam).unwrap();
        let reg = lam.regular_module();
        let pe = preenvelope(&s1, &reg).unwrap();
        assert_eq!(pe.target.dim(), 2);
        assert_eq!(pe.map.apply(&[1]), vec![0, 1]);
        assert!(verify_preenvelope(&pe, &reg, 2).unwrap().passed());
        let zero = preenvelope(&reg, &Module::zero(&lam)).unwrap();
        assert_eq!(zero.target.dim(), 0);
    }

    #[test]
    fn through_self_is_everything() {
        let f = PrimeField::new(2).unwrap();
        let lam = dual_numbers(f).unwrap();
        let reg = lam.regular_module();
        let hc = hom_through_c(&reg, &reg, Some(&reg)).unwrap();
        assert_eq!(hc, hom_space(&reg, &reg).unwrap().space().clone());
        assert_eq!(hom_through_c(&reg, &reg, None).unwrap().dim(), 0);
    }

    #[test]
    fn identity_bimodule_is_controlled_by_zero() {
        let f = PrimeField::new(3).unwrap();
        let lam = dual_numbers(f).unwrap();
        let e = EmbeddingData::new(Bimodule::identity(&lam).unwrap(), None).unwrap();
        let s1 = simple_top(&lam).unwrap();
        let reg = lam.regular_module();
        let pairs = vec![(s1.clone(), reg.clone()), (reg.clone(), s1.clone()), (reg.clone(), reg)];
        assert!(check_controlled(&e, &pairs, &DecompConfig::default()).unwrap().passed());
    }
}
