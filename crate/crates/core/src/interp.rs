//! Interpretation functors `Mod-R -> Mod-S` given by `(φ/ψ; ρ_{s_1}, .., ρ_{s_p})`.

use crate::algebra::Algebra;
use crate::bimodule::Bimodule;
use crate::decompose::{indecomposability, rad_hom, DecompConfig};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Mat, QuotientCoords, Subspace};
use crate::module::{Module, ModuleMap};
use crate::pp::{conj, eval, pair_open, pp_type_generator, sum_many, FormulaBuilder, LinComb, PpFormula, PpPair};
use crate::report::Report;

/// Data of an interpretation functor; `ρ_k` is a `2m`-formula `ρ(x̄, ȳ)` for the `k`-th basis element of `S`.
#[derive(Clone, Debug)]
pub struct InterpData<F: Field> {
    source: Algebra<F>,
    target: Algebra<F>,
    pair: PpPair<F>,
    rho: Vec<PpFormula<F>>,
}

impl<F: Field> InterpData<F> {
    pub fn new(target: Algebra<F>, pair: PpPair<F>, rho: Vec<PpFormula<F>>) -> Result<Self> {
        let source = pair.top().algebra().clone();
        let m = pair.arity();
        if rho.len() != target.dim() {
            return Err(Error::InvalidInput(format!(
                "{} action formulas for a target algebra of dimension {}",
                rho.len(),
                target.dim()
            )));
        }
        if pair.bottom().algebra() != &source || rho.iter().any(|r| r.algebra() != &source) {
            return Err(Error::AlgebraMismatch("interpretation formulas over different algebras".into()));
        }
        if pair.bottom().arity() != m {
            return Err(Error::ArityMismatch { expected: m, found: pair.bottom().arity() });
        }
        if let Some(r) = rho.iter().find(|r| r.arity() != 2 * m) {
            return Err(Error::ArityMismatch { expected: 2 * m, found: r.arity() });
        }
        if source.field() != target.field() {
            return Err(Error::AlgebraMismatch("source and target over different fields".into()));
        }
        Ok(InterpData { source, target, pair, rho })
    }

    pub fn source(&self) -> &Algebra<F> {
        &self.source
    }
    pub fn target(&self) -> &Algebra<F> {
        &self.target
    }
    /// Sort arity `m`.
    pub fn m(&self) -> usize {
        self.pair.arity()
    }
    pub fn pair(&self) -> &PpPair<F> {
        &self.pair
    }
    pub fn phi(&self) -> &PpFormula<F> {
        self.pair.top()
    }
    pub fn psi(&self) -> &PpFormula<F> {
        self.pair.bottom()
    }
    pub fn rho(&self, k: usize) -> &PpFormula<F> {
        &self.rho[k]
    }
    pub fn rhos(&self) -> &[PpFormula<F>] {
        &self.rho
    }
}

fn fmt_vec<F: Field>(f: &F, v: &[F::Elem]) -> String {
    let parts: Vec<String> = v.iter().map(|x| f.format(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn scalar<F: Field>(alg: &Algebra<F>, c: &F::Elem) -> Vec<F::Elem> {
    let f = alg.field();
    alg.one().iter().map(|u| f.mul(u, c)).collect()
}

fn concat(blocks: &[&[usize]]) -> Vec<usize> {
    blocks.iter().flat_map(|b| b.iter().copied()).collect()
}

/// Adds `Σ_l c_l · v̄_l = 0` blockwise over tuples of length `m`.
fn block_equation<F: Field>(b: &mut FormulaBuilder<F>, alg: &Algebra<F>, terms: &[(&[usize], F::Elem)]) {
    let f = alg.field();
    let m = terms.first().map_or(0, |t| t.0.len());
    for t in 0..m {
        let eq: LinComb<F> = terms
            .iter()
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(v, c)| (v[t], scalar(alg, c)))
            .collect();
        b.equation(eq);
    }
}

/// `∃ȳ φ(ȳ) ∧ ρ(x̄, ȳ)`, free `x̄`.
fn cond1_formula<F: Field>(data: &InterpData<F>, k: usize) -> Result<PpFormula<F>> {
    let m = data.m();
    let mut b = FormulaBuilder::new(data.source(), m);
    let xs = b.free();
    let ys = b.fresh(m);
    b.add(data.phi(), &b.vars(&ys))?;
    b.add(data.rho(k), &b.vars(&concat(&[&xs, &ys])))?;
    Ok(b.build())
}

/// `∃x̄ ψ(x̄) ∧ ρ(x̄, ȳ)`, free `ȳ`.
fn cond2_formula<F: Field>(data: &InterpData<F>, k: usize) -> Result<PpFormula<F>> {
    let m = data.m();
    let mut b = FormulaBuilder::new(data.source(), m);
    let ys = b.free();
    let xs = b.fresh(m);
    b.add(data.psi(), &b.vars(&xs))?;
    b.add(data.rho(k), &b.vars(&concat(&[&xs, &ys])))?;
    Ok(b.build())
}

/// First basis vector of `a` outside `b`.
fn escape<F: Field>(a: &Subspace<F>, b: &Subspace<F>) -> Result<Option<Vec<F::Elem>>> {
    for v in a.basis_vecs() {
        if !b.contains(&v)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Both well-definedness conditions for every action formula, evaluated on `M`.
pub fn check_welldefined<F: Field>(data: &InterpData<F>, m: &Module<F>) -> Result<Report> {
    let f = m.field().clone();
    let phi = eval(data.phi(), m)?;
    let psi = eval(data.psi(), m)?;
    let mut report = Report::new("well-definedness");
    for (k, label) in data.target().labels().iter().enumerate() {
        let c1 = eval(&cond1_formula(data, k)?, m)?;
        let w = escape(&phi, &c1)?;
        let detail = w.map(|v| format!("no image for {}", fmt_vec(&f, &v))).unwrap_or_default();
        report.push(format!("rho_{label} total on phi"), detail.is_empty(), detail);
        let c2 = eval(&cond2_formula(data, k)?, m)?;
        let w = escape(&c2, &psi)?;
        let detail = w.map(|v| format!("image {} of psi leaves psi", fmt_vec(&f, &v))).unwrap_or_default();
        report.push(format!("rho_{label} preserves psi"), detail.is_empty(), detail);
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct AxiomPair<F: Field> {
    pub name: String,
    pub pair: PpPair<F>,
}

/// The pp-pairs whose closure makes the data an `S`-module structure.
///
/// Two well-definedness pairs per basis element, then one pair per basis pair
/// `(i, j)` expressing `ρ_i` followed by `ρ_j` as `Σ_l α_ij^l ρ_l` modulo `ψ`.
/// When the unit is a basis element `s_u`, the `(u, u)` pair is replaced by the
/// pair forcing `ρ_u` to be the identity; otherwise that unit pair is appended.
pub fn axiom_pairs<F: Field>(data: &InterpData<F>) -> Result<Vec<AxiomPair<F>>> {
    let r = data.source();
    let s = data.target();
    let f = s.field().clone();
    let m = data.m();
    let p = s.dim();
    let labels = s.labels();
    let mut out = Vec::new();
    for k in 0..p {
        let c1 = cond1_formula(data, k)?;
        out.push(AxiomPair {
            name: format!("rho_{} total", labels[k]),
            pair: PpPair::new_unchecked(data.phi().clone(), conj(data.phi(), &c1)?),
        });
        let c2 = cond2_formula(data, k)?;
        out.push(AxiomPair {
            name: format!("rho_{} preserves psi", labels[k]),
            pair: PpPair::new_unchecked(c2.clone(), conj(&c2, data.psi())?),
        });
    }
    let unit_pair = || -> Result<AxiomPair<F>> {
        // φ(x̄) -> ∃ w̄_l ⋀ ρ_l(x̄, w̄_l) ∧ ψ(x̄ - Σ u^l w̄_l), where 1 = Σ u^l s_l.
        let mut b = FormulaBuilder::new(r, m);
        let xs = b.free();
        let one = s.one();
        let mut terms: Vec<(Vec<usize>, F::Elem)> = vec![];
        let z = b.fresh(m);
        terms.push((z.clone(), f.one()));
        terms.push((xs.clone(), f.neg(&f.one())));
        for (l, u) in one.iter().enumerate() {
            if f.is_zero(u) {
                continue;
            }
            let w = b.fresh(m);
            b.add(data.rho(l), &b.vars(&concat(&[&xs, &w])))?;
            terms.push((w, u.clone()));
        }
        let refs: Vec<(&[usize], F::Elem)> = terms.iter().map(|(v, c)| (v.as_slice(), c.clone())).collect();
        block_equation(&mut b, r, &refs);
        b.add(data.psi(), &b.vars(&z))?;
        let theta = b.build();
        Ok(AxiomPair {
            name: "unit acts as identity".into(),
            pair: PpPair::new_unchecked(data.phi().clone(), conj(data.phi(), &theta)?),
        })
    };
    let unit = s.unit_index();
    for i in 0..p {
        for j in 0..p {
            if unit == Some(i) && unit == Some(j) {
                out.push(unit_pair()?);
                continue;
            }
            // φ(x̄) -> ∃ ū v̄ w̄_l ρ_i(x̄,ū) ∧ ρ_j(ū,v̄) ∧ ⋀ ρ_l(x̄,w̄_l) ∧ ψ(v̄ - Σ α_ij^l w̄_l).
            let mut b = FormulaBuilder::new(r, m);
            let xs = b.free();
            let us = b.fresh(m);
            let vs = b.fresh(m);
            b.add(data.rho(i), &b.vars(&concat(&[&xs, &us])))?;
            b.add(data.rho(j), &b.vars(&concat(&[&us, &vs])))?;
            let z = b.fresh(m);
            let mut terms: Vec<(Vec<usize>, F::Elem)> = vec![(z.clone(), f.one()), (vs.clone(), f.neg(&f.one()))];
            let alpha = s.mul_basis(i, j).to_vec();
            for (l, a) in alpha.iter().enumerate() {
                let w = b.fresh(m);
                b.add(data.rho(l), &b.vars(&concat(&[&xs, &w])))?;
                terms.push((w, a.clone()));
            }
            let refs: Vec<(&[usize], F::Elem)> = terms.iter().map(|(v, c)| (v.as_slice(), c.clone())).collect();
            block_equation(&mut b, r, &refs);
            b.add(data.psi(), &b.vars(&z))?;
            let theta = b.build();
            out.push(AxiomPair {
                name: format!("rho_{} then rho_{}", labels[i], labels[j]),
                pair: PpPair::new_unchecked(data.phi().clone(), conj(data.phi(), &theta)?),
            });
        }
    }
    if unit.is_none() {
        out.push(unit_pair()?);
    }
    Ok(out)
}

/// `IM = φ(M)/ψ(M)` with its `S`-action and the coordinates needed for maps.
#[derive(Clone, Debug)]
pub struct Interpretation<F: Field> {
    pub module: Module<F>,
    pub phi: Subspace<F>,
    pub psi: Subspace<F>,
    coords: QuotientCoords<F>,
}

impl<F: Field> Interpretation<F> {
    /// Class of `ā ∈ φ(M)` in the basis of `IM`.
    pub fn class_of(&self, a: &[F::Elem]) -> Option<Vec<F::Elem>> {
        self.coords.coords(a)
    }
    /// Representatives in `φ(M)` of the basis of `IM`.
    pub fn reps(&self) -> &[Vec<F::Elem>] {
        self.coords.reps()
    }
}

/// The `S`-module `IM`; fails if the data is not well-defined on `M` or an axiom pair opens.
pub fn apply<F: Field>(data: &InterpData<F>, m: &Module<F>) -> Result<Interpretation<F>> {
    if m.algebra() != data.source() {
        return Err(Error::AlgebraMismatch("module is not over the source algebra".into()));
    }
    let report = check_welldefined(data, m)?;
    if let Some(c) = report.failures().next() {
        return Err(Error::NotWellDefined(format!("{}: {}", c.name, c.detail)));
    }
    for ax in axiom_pairs(data)?.iter().skip(2 * data.target().dim()) {
        if pair_open(&ax.pair, m)? {
            return Err(Error::NotWellDefined(format!("axiom pair open: {}", ax.name)));
        }
    }
    apply_unchecked(data, m)
}

/// `apply` without the domain checks; the action is computed from one lift per basis class.
pub fn apply_unchecked<F: Field>(data: &InterpData<F>, m: &Module<F>) -> Result<Interpretation<F>> {
    let f = m.field().clone();
    let width = data.m() * m.dim();
    let phi = eval(data.phi(), m)?;
    let psi = eval(data.psi(), m)?;
    let reps = phi.quotient_basis(&psi)?;
    let coords = QuotientCoords::new(&psi, reps.clone())?;
    let r = reps.len();
    let mut actions = Vec::with_capacity(data.target().dim());
    for k in 0..data.target().dim() {
        let graph = eval(data.rho(k), m)?;
        // Pairs (x̄, ȳ) of the graph with ȳ ∈ φ(M).
        let mut gens: Vec<Vec<F::Elem>> = (0..width).map(|i| crate::linalg::unit_vec(&f, 2 * width, i)).collect();
        for v in phi.basis_vecs() {
            let mut w = vec![f.zero(); width];
            w.extend(v);
            gens.push(w);
        }
        let allowed = Subspace::span(f.clone(), 2 * width, &gens)?;
        let w = graph.intersect(&allowed)?;
        let wb = w.basis_vecs();
        let xs: Vec<Vec<F::Elem>> = wb.iter().map(|v| v[..width].to_vec()).collect();
        let mut rows = Vec::with_capacity(r);
        for a in &reps {
            let c = if xs.is_empty() {
                None
            } else {
                Mat::from_rows(f.clone(), width, &xs)?.solve_left(a)
            };
            let c = c.ok_or_else(|| {
                Error::Inconsistent(format!(
                    "no image under rho_{} for {}",
                    data.target().labels()[k],
                    fmt_vec(&f, a)
                ))
            })?;
            let mut b = vec![f.zero(); width];
            for (ci, v) in c.iter().zip(&wb) {
                crate::linalg::vec_axpy(&f, &mut b, ci, &v[width..]);
            }
            rows.push(coords.coords(&b).ok_or_else(|| Error::Inconsistent("image outside phi".into()))?);
        }
        actions.push(Mat::from_rows(f.clone(), r, &rows)?);
    }
    let module = Module::new(data.target().clone(), r, actions)?;
    Ok(Interpretation { module, phi, psi, coords })
}

/// `f^m` on an `m`-tuple stored blockwise.
fn map_tuple<F: Field>(f: &ModuleMap<F>, a: &[F::Elem], m: usize) -> Vec<F::Elem> {
    let d = f.source().dim();
    (0..m).flat_map(|i| f.apply(&a[i * d..(i + 1) * d])).collect()
}

/// `If: IM -> IN` from precomputed interpretations.
pub fn apply_map_with<F: Field>(
    data: &InterpData<F>,
    f: &ModuleMap<F>,
    src: &Interpretation<F>,
    tgt: &Interpretation<F>,
) -> Result<ModuleMap<F>> {
    let k = f.source().field().clone();
    let rows = src
        .reps()
        .iter()
        .map(|a| {
            tgt.class_of(&map_tuple(f, a, data.m()))
                .ok_or_else(|| Error::Inconsistent("map does not preserve phi".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mat = Mat::from_rows(k, tgt.module.dim(), &rows)?;
    ModuleMap::new(src.module.clone(), tgt.module.clone(), mat)
}

pub fn apply_map<F: Field>(data: &InterpData<F>, f: &ModuleMap<F>) -> Result<ModuleMap<F>> {
    let src = apply(data, f.source())?;
    let tgt = apply(data, f.target())?;
    apply_map_with(data, f, &src, &tgt)
}

/// Solves `target = Σ_j t_j r_j` for `r_j ∈ R`.
fn express_in_generators<F: Field>(b: &Bimodule<F>, target: &[F::Elem]) -> Result<Vec<Vec<F::Elem>>> {
    let r = b.right_algebra();
    let f = b.field().clone();
    let rows: Vec<Vec<F::Elem>> = b
        .generators()
        .iter()
        .flat_map(|t| (0..r.dim()).map(move |l| b.right().act(t, &r.basis_elem(l))))
        .collect();
    let sys = Mat::from_rows(f, b.dim(), &rows)?;
    let c = sys
        .solve_left(target)
        .ok_or_else(|| Error::InvalidInput("element outside the span of the generators".into()))?;
    Ok(c.chunks(r.dim()).map(|ch| ch.to_vec()).collect())
}

/// Quantifier-free data for `Hom_R(B, -)`: tuples `x̄ = f(t̄)`, `ρ_s: ȳ = x̄ T_s`.
pub fn hom_interp_data<F: Field>(b: &Bimodule<F>) -> Result<InterpData<F>> {
    let r = b.right_algebra();
    let s = b.left();
    let f = b.field().clone();
    let n = b.generators().len();
    let dr = r.dim();
    let rows: Vec<Vec<F::Elem>> = b
        .generators()
        .iter()
        .flat_map(|t| (0..dr).map(move |l| b.right().act(t, &r.basis_elem(l))))
        .collect();
    let rel_map = Mat::from_rows(f.clone(), b.dim(), &rows)?;
    let mut fb = FormulaBuilder::new(r, n);
    for v in Subspace::kernel(&rel_map).basis_vecs() {
        let terms: LinComb<F> = (0..n)
            .map(|i| (i, v[i * dr..(i + 1) * dr].to_vec()))
            .filter(|(_, e)| !r.is_zero_elem(e))
            .collect();
        fb.equation(terms);
    }
    let phi = fb.build();
    let psi = PpFormula::zero(r, n);
    let mut rho = Vec::with_capacity(s.dim());
    for k in 0..s.dim() {
        let mut fb = FormulaBuilder::new(r, 2 * n);
        for i in 0..n {
            let st = b.left_act(&s.basis_elem(k), &b.generators()[i]);
            let coeffs = express_in_generators(b, &st)?;
            let mut terms: LinComb<F> = vec![(n + i, r.one().to_vec())];
            for (j, c) in coeffs.iter().enumerate() {
                if !r.is_zero_elem(c) {
                    terms.push((j, c.iter().map(|x| f.neg(x)).collect()));
                }
            }
            fb.equation(terms);
        }
        rho.push(fb.build());
    }
    InterpData::new(s.clone(), PpPair::new(phi, psi)?, rho)
}

/// A pair open exactly on modules with `subject` as a summand, within `scope`.
#[derive(Clone, Debug)]
pub struct IsolatingPair<F: Field> {
    pub pair: PpPair<F>,
    pub subject: Module<F>,
    pub element: Vec<F::Elem>,
    /// Modules whose direct sums the isolation guarantee covers.
    pub scope: Vec<Module<F>>,
    pub cap: usize,
}

impl<F: Field> IsolatingPair<F> {
    pub fn c_phi(&self) -> usize {
        self.pair.top().bound()
    }
    pub fn d_phi(&self) -> usize {
        self.pair.top().equations()
    }
    /// `c(φ) = dim M` and `d(φ) <= dim M · dim R + 1`.
    pub fn bounds_hold(&self) -> bool {
        let d = self.subject.dim();
        self.c_phi() == d && self.d_phi() <= d * self.subject.algebra().dim() + 1
    }
}

/// `φ` generates the pp-type of `a` in `M`; `ψ` is the sum of the pp-types of `g(a)`
/// over radical maps `g: M -> X`, `X` in the inventory.
pub fn isolating_pair<F: Field>(
    m: &Module<F>,
    a: &[F::Elem],
    inventory: &[Module<F>],
    cap: usize,
    cfg: &DecompConfig,
) -> Result<IsolatingPair<F>> {
    let f = m.field().clone();
    if a.len() != m.dim() {
        return Err(Error::DimensionMismatch("element outside the module".into()));
    }
    if a.iter().all(|x| f.is_zero(x)) {
        return Err(Error::InvalidInput("isolating element must be nonzero".into()));
    }
    if !indecomposability(m, cfg)?.is_certified() {
        return Err(Error::NotCertified);
    }
    let phi = pp_type_generator(m, &[a.to_vec()])?;
    let mut parts = vec![PpFormula::zero(m.algebra(), 1)];
    for x in inventory {
        for g in rad_hom(m, x, cfg)?.basis() {
            parts.push(pp_type_generator(x, &[g.apply(a)])?);
        }
    }
    let refs: Vec<&PpFormula<F>> = parts.iter().collect();
    let psi = sum_many(m.algebra(), 1, &refs)?;
    let iso = IsolatingPair {
        pair: PpPair::new(phi, psi)?,
        subject: m.clone(),
        element: a.to_vec(),
        scope: inventory.to_vec(),
        cap,
    };
    if !iso.bounds_hold() {
        return Err(Error::Shape(format!(
            "type generator has c = {}, d = {} for a module of dim {}",
            iso.c_phi(),
            iso.d_phi(),
            m.dim()
        )));
    }
    Ok(iso)
}

/// Statistics and the two bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub d: usize,
    pub m: usize,
    pub p: usize,
    pub c_phi: usize,
    pub c_psi: usize,
    pub c_rho: Vec<usize>,
    pub dim_r: usize,
    pub n_d: u64,
    pub b_d: u64,
    /// Bound variables of the constructed `σ`, when there is one.
    pub c_sigma: Option<usize>,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.c_sigma.is_none_or(|c| c as u64 <= self.n_d)
    }
}

/// `n_d = m(d+p+(dp+1)+dp) + (1+p+d+dp)c(φ) + (d+1)Σ c(ρ_k) + (dp+1)c(ψ)`, `b_d = (n_d+m) dim R`.
pub fn bounds(d: usize, m: usize, p: usize, c_phi: usize, c_psi: usize, c_rho: &[usize], dim_r: usize) -> Result<BoundReport> {
    if d == 0 {
        return Err(Error::InvalidInput("bounds need d >= 1".into()));
    }
    let (d64, m64, p64) = (d as u64, m as u64, p as u64);
    let sum_rho: u64 = c_rho.iter().map(|&c| c as u64).sum();
    let n_d = m64 * (d64 + p64 + (d64 * p64 + 1) + d64 * p64)
        + (1 + p64 + d64 + d64 * p64) * c_phi as u64
        + (d64 + 1) * sum_rho
        + (d64 * p64 + 1) * c_psi as u64;
    let b_d = (n_d + m64) * dim_r as u64;
    Ok(BoundReport { d, m, p, c_phi, c_psi, c_rho: c_rho.to_vec(), dim_r, n_d, b_d, c_sigma: None })
}

pub fn bounds_for<F: Field>(data: &InterpData<F>, d: usize) -> Result<BoundReport> {
    let c_rho: Vec<usize> = data.rhos().iter().map(|r| r.bound()).collect();
    bounds(d, data.m(), data.target().dim(), data.phi().bound(), data.psi().bound(), &c_rho, data.source().dim())
}

/// The `m`-formula over `R` defining `{ā : ā + ψ(M) ∈ γ(IM)}`.
///
/// Every variable `v` of `γ` becomes an `m`-block `V̄`; `Z̄_{v,k}` stands for
/// `V̄ · s_k`, and equation `i` becomes `Σ_{v,k} Z̄_{v,k} c_{v,i}^k = W̄_i ∧ ψ(W̄_i)`.
pub fn pull_back_formula<F: Field>(data: &InterpData<F>, gamma: &PpFormula<F>) -> Result<PpFormula<F>> {
    if gamma.algebra() != data.target() {
        return Err(Error::AlgebraMismatch("formula is not over the target algebra".into()));
    }
    let r = data.source();
    let f = r.field().clone();
    let m = data.m();
    let p = data.target().dim();
    let n = gamma.arity();
    let c = gamma.bound();
    let e = gamma.equations();
    let mut b = FormulaBuilder::new(r, n * m);
    let free = b.free();
    let mut blocks: Vec<Vec<usize>> = free.chunks(m).map(|ch| ch.to_vec()).collect();
    for _ in 0..c {
        blocks.push(b.fresh(m));
    }
    let z: Vec<Vec<Vec<usize>>> = (0..n + c).map(|_| (0..p).map(|_| b.fresh(m)).collect()).collect();
    let w: Vec<Vec<usize>> = (0..e).map(|_| b.fresh(m)).collect();
    for (v, blk) in blocks.iter().enumerate() {
        b.add(data.phi(), &b.vars(blk))?;
        for k in 0..p {
            b.add(data.phi(), &b.vars(&z[v][k]))?;
            b.add(data.rho(k), &b.vars(&concat(&[blk, &z[v][k]])))?;
        }
    }
    for (i, wi) in w.iter().enumerate() {
        let mut terms: Vec<(&[usize], F::Elem)> = vec![(wi.as_slice(), f.neg(&f.one()))];
        for (v, zv) in z.iter().enumerate() {
            for (k, zvk) in zv.iter().enumerate() {
                terms.push((zvk.as_slice(), gamma.entry(v, i)[k].clone()));
            }
        }
        block_equation(&mut b, r, &terms);
        b.add(data.psi(), &b.vars(wi))?;
    }
    Ok(b.build())
}

/// `σ/τ` over `R` with `M` opening `σ/τ` iff `IM` opens `γ/δ`.
pub fn pullback_pair<F: Field>(data: &InterpData<F>, gd: &PpPair<F>, d: usize) -> Result<(PpPair<F>, BoundReport)> {
    let gamma = gd.top();
    let p = data.target().dim();
    if gamma.arity() != 1 || gamma.bound() != d || gamma.equations() > d * p + 1 {
        return Err(Error::Shape(format!(
            "need arity 1, {d} bound variables and at most {} equations; got arity {}, c = {}, e = {}",
            d * p + 1,
            gamma.arity(),
            gamma.bound(),
            gamma.equations()
        )));
    }
    let sigma = pull_back_formula(data, gamma)?;
    let tau = conj(&pull_back_formula(data, gd.bottom())?, &sigma)?;
    let mut report = bounds_for(data, d)?;
    report.c_sigma = Some(sigma.bound());
    Ok((PpPair::new_unchecked(sigma, tau), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::module::fp_module;

    fn lam() -> (Algebra<PrimeField>, Module<PrimeField>, Module<PrimeField>) {
        let a = Algebra::truncated_polynomial(PrimeField::new(2).unwrap(), 2).unwrap();
        let s1 = fp_module(&a, 1, &[vec![a.basis_elem(1)]]).unwrap().module;
        (a.clone(), a.regular_module(), s1)
    }

    #[test]
    fn bound_arithmetic() {
        let r = bounds(1, 2, 2, 0, 0, &[0, 0], 4).unwrap();
        assert_eq!((r.n_d, r.b_d), (16, 72));
        assert_eq!(bounds(1, 1, 1, 0, 0, &[0], 1).unwrap().n_d, 5);
        let ns: Vec<u64> = (1..=5).map(|d| bounds(d, 2, 2, 1, 1, &[1, 1], 4).unwrap().n_d).collect();
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
        assert!(bounds(0, 1, 1, 0, 0, &[0], 1).is_err());
    }

    #[test]
    fn identity_functor_data() {
        let (a, reg, s1) = lam();
        let data = hom_interp_data(&Bimodule::identity(&a).unwrap()).unwrap();
        assert!(crate::pp::equivalent(data.phi(), &PpFormula::top(&a, 1)).unwrap());
        assert_eq!(axiom_pairs(&data).unwrap().len(), 4 + 4);
        for m in [&reg, &s1] {
            assert!(check_welldefined(&data, m).unwrap().passed());
            let im = apply(&data, m).unwrap();
            assert_eq!(im.module.dim(), m.dim());
            assert!(crate::decompose::iso_test(&im.module, m, &DecompConfig::default()).unwrap());
        }
        let zero = Module::zero(&a);
        assert_eq!(apply(&data, &zero).unwrap().module.dim(), 0);
        let id = apply_map(&data, &ModuleMap::identity(&reg)).unwrap();
        assert!(id.matrix().is_identity());
        assert!(apply_map(&data, &ModuleMap::zero(&reg, &s1)).unwrap().is_zero());
    }

    #[test]
    fn broken_action_is_reported() {
        let (a, reg, _) = lam();
        let good = hom_interp_data(&Bimodule::identity(&a).unwrap()).unwrap();
        // ρ_x(x, y): y·x = 0 sends 0 to every element of xΛ, so ψ is not preserved.
        let bad = PpFormula::new(a.clone(), 2, 0, vec![vec![a.zero_elem()], vec![a.basis_elem(1)]]).unwrap();
        let data = InterpData::new(a.clone(), good.pair().clone(), vec![good.rho(0).clone(), bad]).unwrap();
        let rep = check_welldefined(&data, &reg).unwrap();
        assert!(!rep.passed());
        assert!(matches!(apply(&data, &reg), Err(Error::NotWellDefined(_))));
    }

    #[test]
    fn isolating_simple_over_dual_numbers() {
        let (a, reg, s1) = lam();
        let cfg = DecompConfig::default();
        let inv = vec![s1.clone(), reg.clone()];
        let iso = isolating_pair(&s1, &[1], &inv, 2, &cfg).unwrap();
        let ann = PpFormula::new(a.clone(), 1, 0, vec![vec![a.basis_elem(1)]]).unwrap();
        assert!(crate::pp::equivalent(iso.pair.top(), &ann).unwrap());
        assert!(pair_open(&iso.pair, &s1).unwrap());
        assert!(!pair_open(&iso.pair, &reg).unwrap());
        assert!(iso.bounds_hold());
        let iso = isolating_pair(&reg, &[1, 0], &inv, 2, &cfg).unwrap();
        assert!(crate::pp::equivalent(iso.pair.top(), &PpFormula::top(&a, 1)).unwrap());
        assert!(!pair_open(&iso.pair, &s1).unwrap());
        assert!(pair_open(&iso.pair, &reg).unwrap());
        assert!(isolating_pair(&s1, &[0], &inv, 2, &cfg).is_err());
    }
}
