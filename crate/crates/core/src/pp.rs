//! Positive primitive formulas `∃ȳ (x̄ ȳ) A = 0` over a finite-dimensional algebra.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Mat, Subspace};
use crate::module::{fp_module, Module};

/// Coefficient vector of an algebra element.
pub type Elem<F> = Vec<<F as Field>::Elem>;

/// `φ(x̄) ≡ ∃ȳ (x̄ȳ)A = 0` with `n` free and `c` bound variables; `A` is `(n+c) x e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpFormula<F: Field> {
    algebra: Algebra<F>,
    n: usize,
    c: usize,
    e: usize,
    /// Row-major entries, `rows[r][col]`.
    rows: Vec<Vec<Elem<F>>>,
}

impl<F: Field> PpFormula<F> {
    pub fn new(algebra: Algebra<F>, n: usize, c: usize, rows: Vec<Vec<Elem<F>>>) -> Result<Self> {
        if rows.len() != n + c {
            return Err(Error::DimensionMismatch(format!(
                "formula matrix has {} rows, expected n + c = {}",
                rows.len(),
                n + c
            )));
        }
        let e = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            if r.len() != e {
                return Err(Error::DimensionMismatch("ragged formula matrix".into()));
            }
            if r.iter().any(|a| a.len() != algebra.dim()) {
                return Err(Error::DimensionMismatch("entry length differs from algebra dim".into()));
            }
        }
        Ok(PpFormula { algebra, n, c, e, rows })
    }

    /// `x̄ = x̄` (no equations).
    pub fn top(algebra: &Algebra<F>, n: usize) -> Self {
        PpFormula { algebra: algebra.clone(), n, c: 0, e: 0, rows: vec![vec![]; n] }
    }

    /// `x̄ = 0`.
    pub fn zero(algebra: &Algebra<F>, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { algebra.one().to_vec() } else { algebra.zero_elem() })
                    .collect()
            })
            .collect();
        PpFormula { algebra: algebra.clone(), n, c: 0, e: n, rows }
    }

    pub fn algebra(&self) -> &Algebra<F> {
        &self.algebra
    }
    /// Number of free variables.
    pub fn arity(&self) -> usize {
        self.n
    }
    /// `c(φ)`: number of bound variables.
    pub fn bound(&self) -> usize {
        self.c
    }
    /// `d(φ)`: number of equations (columns).
    pub fn equations(&self) -> usize {
        self.e
    }
    pub fn entry(&self, r: usize, col: usize) -> &Elem<F> {
        &self.rows[r][col]
    }
    pub fn rows(&self) -> &[Vec<Elem<F>>] {
        &self.rows
    }

    /// Column `col` as a list of `n + c` algebra elements.
    pub fn column(&self, col: usize) -> Vec<Elem<F>> {
        self.rows.iter().map(|r| r[col].clone()).collect()
    }

    /// Drops all-zero columns.
    pub fn simplify(&self) -> Self {
        let keep: Vec<usize> = (0..self.e)
            .filter(|&c| self.rows.iter().any(|r| !self.algebra.is_zero_elem(&r[c])))
            .collect();
        let rows = self.rows.iter().map(|r| keep.iter().map(|&c| r[c].clone()).collect()).collect();
        PpFormula { algebra: self.algebra.clone(), n: self.n, c: self.c, e: keep.len(), rows }
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.c == 0
    }
}

impl<F: Field> std::fmt::Display for PpFormula<F> {
    /// `E y1 y2: x1*(1) + y1*(x) = 0 & ...`, variables `x1..xn`, `y1..yc`.
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = |r: usize| if r < self.n { format!("x{}", r + 1) } else { format!("y{}", r - self.n + 1) };
        if self.c > 0 {
            let ys: Vec<String> = (self.n..self.n + self.c).map(name).collect();
            write!(out, "E {}: ", ys.join(" "))?;
        }
        if self.e == 0 {
            return write!(out, "true");
        }
        let eqs: Vec<String> = (0..self.e)
            .map(|col| {
                let terms: Vec<String> = (0..self.n + self.c)
                    .filter(|&r| !self.algebra.is_zero_elem(&self.rows[r][col]))
                    .map(|r| format!("{}*({})", name(r), self.algebra.format_elem(&self.rows[r][col])))
                    .collect();
                format!("{} = 0", if terms.is_empty() { "0".into() } else { terms.join(" + ") })
            })
            .collect();
        write!(out, "{}", eqs.join(" & "))
    }
}

/// `φ(M) ≤ M^n`, coordinates `(i, a) -> i * dim M + a`.
pub fn eval<F: Field>(phi: &PpFormula<F>, m: &Module<F>) -> Result<Subspace<F>> {
    if phi.algebra() != m.algebra() {
        return Err(Error::AlgebraMismatch("formula and module over different algebras".into()));
    }
    let f = m.field().clone();
    let dm = m.dim();
    let vars = phi.n + phi.c;
    let unknowns = vars * dm;
    if unknowns == 0 {
        return Ok(Subspace::zero(f, 0));
    }
    if phi.e == 0 {
        return Ok(Subspace::full(f, phi.n * dm));
    }
    // Equations: for each column and each output coordinate b,
    // Σ_{r,a} v_{r,a} ρ(A_{r,col})[a][b] = 0.
    let mut eqs = Mat::zeros(f.clone(), phi.e * dm, unknowns);
    for r in 0..vars {
        for col in 0..phi.e {
            let entry = &phi.rows[r][col];
            if phi.algebra.is_zero_elem(entry) {
                continue;
            }
            let act = m.action_of(entry);
            for a in 0..dm {
                for b in 0..dm {
                    let x = act.get(a, b);
                    if !f.is_zero(x) {
                        eqs.set(col * dm + b, r * dm + a, x.clone());
                    }
                }
            }
        }
    }
    let sol = eqs.null_space();
    let space = Subspace::span(f, unknowns, &sol)?;
    Ok(if phi.c == 0 { space } else { space.project(0..phi.n * dm) })
}

/// A linear combination `Σ v_i · u_i` of variables with algebra coefficients on the right.
pub type LinComb<F> = Vec<(usize, Elem<F>)>;

/// Assembles formulas from substituted pieces; variables `0..n` are free.
#[derive(Clone, Debug)]
pub struct FormulaBuilder<F: Field> {
    algebra: Algebra<F>,
    n: usize,
    vars: usize,
    columns: Vec<Vec<(usize, Elem<F>)>>,
}

impl<F: Field> FormulaBuilder<F> {
    pub fn new(algebra: &Algebra<F>, n: usize) -> Self {
        FormulaBuilder { algebra: algebra.clone(), n, vars: n, columns: Vec::new() }
    }

    /// Free variables `0..n`.
    pub fn free(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    /// `k` fresh bound variables.
    pub fn fresh(&mut self, k: usize) -> Vec<usize> {
        let out = (self.vars..self.vars + k).collect();
        self.vars += k;
        out
    }

    /// The plain variable `v`.
    pub fn var(&self, v: usize) -> LinComb<F> {
        vec![(v, self.algebra.one().to_vec())]
    }

    pub fn vars(&self, vs: &[usize]) -> Vec<LinComb<F>> {
        vs.iter().map(|&v| self.var(v)).collect()
    }

    /// Adds the equation `Σ v · a = 0`.
    pub fn equation(&mut self, terms: LinComb<F>) {
        self.columns.push(terms);
    }

    /// Adds `φ(args)`, renaming the bound variables of `φ` apart.
    pub fn add(&mut self, phi: &PpFormula<F>, args: &[LinComb<F>]) -> Result<()> {
        if args.len() != phi.arity() {
            return Err(Error::ArityMismatch { expected: phi.arity(), found: args.len() });
        }
        if phi.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch("formula over a different algebra".into()));
        }
        let ys = self.fresh(phi.bound());
        for col in 0..phi.equations() {
            let mut terms = Vec::new();
            for (r, arg) in args.iter().enumerate() {
                let a = phi.entry(r, col);
                if self.algebra.is_zero_elem(a) {
                    continue;
                }
                for (v, u) in arg {
                    terms.push((*v, self.algebra.mul(u, a)));
                }
            }
            for (k, &y) in ys.iter().enumerate() {
                let a = phi.entry(phi.arity() + k, col);
                if !self.algebra.is_zero_elem(a) {
                    terms.push((y, a.clone()));
                }
            }
            self.columns.push(terms);
        }
        Ok(())
    }

    pub fn build(self) -> PpFormula<F> {
        let alg = &self.algebra;
        let e = self.columns.len();
        let mut rows = vec![vec![alg.zero_elem(); e]; self.vars];
        for (col, terms) in self.columns.iter().enumerate() {
            for (v, a) in terms {
                let cur = &mut rows[*v][col];
                let f = alg.field();
                for (x, y) in cur.iter_mut().zip(a) {
                    *x = f.add(x, y);
                }
            }
        }
        PpFormula { algebra: alg.clone(), n: self.n, c: self.vars - self.n, e, rows }.simplify()
    }
}

fn check_arity<F: Field>(a: &PpFormula<F>, b: &PpFormula<F>) -> Result<()> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch { expected: a.arity(), found: b.arity() });
    }
    if a.algebra() != b.algebra() {
        return Err(Error::AlgebraMismatch("formulas over different algebras".into()));
    }
    Ok(())
}

/// `φ ∧ ψ`.
pub fn conj<F: Field>(phi: &PpFormula<F>, psi: &PpFormula<F>) -> Result<PpFormula<F>> {
    check_arity(phi, psi)?;
    let mut b = FormulaBuilder::new(phi.algebra(), phi.arity());
    let x = b.vars(&b.free());
    b.add(phi, &x)?;
    b.add(psi, &x)?;
    Ok(b.build())
}

/// `φ_1 + ... + φ_r`: `∃ x̄_1..x̄_r (x̄ = Σ x̄_i ∧ ⋀ φ_i(x̄_i))`.
pub fn sum_many<F: Field>(algebra: &Algebra<F>, n: usize, parts: &[&PpFormula<F>]) -> Result<PpFormula<F>> {
    if parts.is_empty() {
        return Ok(PpFormula::zero(algebra, n));
    }
    for p in parts {
        check_arity(parts[0], p)?;
    }
    if parts[0].arity() != n {
        return Err(Error::ArityMismatch { expected: n, found: parts[0].arity() });
    }
    let mut b = FormulaBuilder::new(algebra, n);
    let blocks: Vec<Vec<usize>> = parts.iter().map(|_| b.fresh(n)).collect();
    let f = algebra.field();
    let minus_one: Vec<F::Elem> = algebra.one().iter().map(|x| f.neg(x)).collect();
    for i in 0..n {
        let mut terms = vec![(i, algebra.one().to_vec())];
        for blk in &blocks {
            terms.push((blk[i], minus_one.clone()));
        }
        b.equation(terms);
    }
    for (p, blk) in parts.iter().zip(&blocks) {
        let args = b.vars(blk);
        b.add(p, &args)?;
    }
    Ok(b.build())
}

/// `φ + ψ`.
pub fn sum<F: Field>(phi: &PpFormula<F>, psi: &PpFormula<F>) -> Result<PpFormula<F>> {
    check_arity(phi, psi)?;
    sum_many(phi.algebra(), phi.arity(), &[phi, psi])
}

/// A module with a distinguished tuple, stored as concatenated coordinates.
#[derive(Clone, Debug)]
pub struct FreeRealisation<F: Field> {
    pub module: Module<F>,
    pub tuple: Vec<Vec<F::Elem>>,
}

impl<F: Field> FreeRealisation<F> {
    pub fn tuple_vec(&self) -> Vec<F::Elem> {
        self.tuple.concat()
    }
}

/// `C = A^(n+c) / ⟨columns of A⟩`, tuple = images of the first `n` generators.
pub fn free_realisation<F: Field>(phi: &PpFormula<F>) -> Result<FreeRealisation<F>> {
    let cols: Vec<Vec<Elem<F>>> = (0..phi.equations()).map(|c| phi.column(c)).collect();
    let fp = fp_module(phi.algebra(), phi.arity() + phi.bound(), &cols)?;
    let tuple = fp.generators[..phi.arity()].to_vec();
    let fr = FreeRealisation { module: fp.module, tuple };
    debug_assert!(eval(phi, &fr.module).unwrap().contains(&fr.tuple_vec()).unwrap());
    Ok(fr)
}

/// Generator of the pp-type of `ā` in `M`.
///
/// Bound variables run over the standard basis `ē` of `M`. The equations are
/// `x_i = Σ_j e_j a_ij` followed by a `k`-basis of the relations
/// `{ r̄ ∈ A^dim M : Σ e_j r_j = 0 }`.
pub fn pp_type_generator<F: Field>(m: &Module<F>, tuple: &[Vec<F::Elem>]) -> Result<PpFormula<F>> {
    let alg = m.algebra();
    let f = m.field().clone();
    let dm = m.dim();
    let na = alg.dim();
    for t in tuple {
        if t.len() != dm {
            return Err(Error::DimensionMismatch("tuple entry outside the module".into()));
        }
    }
    let n = tuple.len();
    let scalar = |c: &F::Elem| -> Elem<F> { alg.one().iter().map(|u| f.mul(u, c)).collect() };
    let mut b = FormulaBuilder::new(alg, n);
    let ys = b.fresh(dm);
    for (i, t) in tuple.iter().enumerate() {
        let mut terms = vec![(i, alg.one().to_vec())];
        for (j, c) in t.iter().enumerate() {
            if !f.is_zero(c) {
                terms.push((ys[j], scalar(&f.neg(c))));
            }
        }
        b.equation(terms);
    }
    // (j, l) |-> e_j · b_l, a map k^(dm * na) -> M.
    let rows: Vec<Vec<F::Elem>> = (0..dm)
        .flat_map(|j| (0..na).map(move |l| (j, l)))
        .map(|(j, l)| m.action(l).row(j).to_vec())
        .collect();
    let rel_map = Mat::from_rows(f.clone(), dm, &rows)?;
    for r in Subspace::kernel(&rel_map).basis_vecs() {
        let mut terms = Vec::new();
        for j in 0..dm {
            let elem = r[j * na..(j + 1) * na].to_vec();
            if !alg.is_zero_elem(&elem) {
                terms.push((ys[j], elem));
            }
        }
        b.equation(terms);
    }
    let mut phi = b.build();
    // `build` drops zero columns; the shape keeps `c = dim M` regardless.
    phi.c = dm;
    Ok(phi)
}

/// `ψ ≤ φ`: the tuple of a free realisation of `ψ` satisfies `φ`.
pub fn implies<F: Field>(psi: &PpFormula<F>, phi: &PpFormula<F>) -> Result<bool> {
    check_arity(psi, phi)?;
    let fr = free_realisation(psi)?;
    eval(phi, &fr.module)?.contains(&fr.tuple_vec())
}

pub fn equivalent<F: Field>(a: &PpFormula<F>, b: &PpFormula<F>) -> Result<bool> {
    Ok(implies(a, b)? && implies(b, a)?)
}

/// `φ / ψ` with `ψ ≤ φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpPair<F: Field> {
    top: PpFormula<F>,
    bottom: PpFormula<F>,
}

impl<F: Field> PpPair<F> {
    pub fn new(top: PpFormula<F>, bottom: PpFormula<F>) -> Result<Self> {
        if !implies(&bottom, &top)? {
            return Err(Error::InvalidInput("pair bottom does not imply top".into()));
        }
        Ok(PpPair { top, bottom })
    }

    /// For pairs that hold by construction (bottom is a conjunction with top).
    pub fn new_unchecked(top: PpFormula<F>, bottom: PpFormula<F>) -> Self {
        PpPair { top, bottom }
    }

    pub fn top(&self) -> &PpFormula<F> {
        &self.top
    }
    pub fn bottom(&self) -> &PpFormula<F> {
        &self.bottom
    }
    pub fn arity(&self) -> usize {
        self.top.arity()
    }
}

/// `φ(M) ⊋ ψ(M)`.
pub fn pair_open<F: Field>(p: &PpPair<F>, m: &Module<F>) -> Result<bool> {
    let top = eval(p.top(), m)?;
    let bottom = eval(p.bottom(), m)?;
    Ok(!top.is_subspace_of(&bottom)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::hom::hom_space;
    use crate::module::direct_sum2;

    struct Fx {
        a: Algebra<PrimeField>,
        lam: Module<PrimeField>,
        s1: Module<PrimeField>,
        div: PpFormula<PrimeField>,
        ann: PpFormula<PrimeField>,
    }

    fn fx() -> Fx {
        let f = PrimeField::new(2).unwrap();
        let a = Algebra::truncated_polynomial(f, 2).unwrap();
        let x = a.basis_elem(1);
        let one = a.one().to_vec();
        // ∃y v - y x = 0 (char 2 makes the sign irrelevant, but keep it general).
        let minus_x: Vec<u32> = x.iter().map(|c| f.neg(c)).collect();
        let div = PpFormula::new(a.clone(), 1, 1, vec![vec![one], vec![minus_x]]).unwrap();
        let ann = PpFormula::new(a.clone(), 1, 0, vec![vec![x]]).unwrap();
        let lam = a.regular_module();
        let s1 = fp_module(&a, 1, &[vec![a.basis_elem(1)]]).unwrap().module;
        Fx { a, lam, s1, div, ann }
    }

    #[test]
    fn eval_examples() {
        let t = fx();
        let soc = Subspace::span(*t.a.field(), 2, &[vec![0, 1]]).unwrap();
        assert_eq!(eval(&t.div, &t.lam).unwrap(), soc);
        assert_eq!(eval(&t.ann, &t.lam).unwrap(), soc);
        assert_eq!(eval(&t.ann, &t.s1).unwrap().dim(), 1);
        assert_eq!(eval(&PpFormula::top(&t.a, 1), &t.lam).unwrap().dim(), 2);
        assert_eq!(eval(&PpFormula::zero(&t.a, 1), &t.lam).unwrap().dim(), 0);
    }

    #[test]
    fn lattice_operations() {
        let t = fx();
        let c = conj(&t.div, &t.ann).unwrap();
        assert_eq!(eval(&c, &t.lam).unwrap().dim(), 1);
        let s = sum(&t.div, &PpFormula::zero(&t.a, 1)).unwrap();
        assert!(equivalent(&s, &t.div).unwrap());
        assert_eq!(eval(&sum(&t.div, &t.ann).unwrap(), &t.s1).unwrap().dim(), 1);
    }

    #[test]
    fn free_realisations() {
        let t = fx();
        let fr = free_realisation(&t.div).unwrap();
        assert_eq!(fr.module.dim(), 2);
        assert_eq!(hom_space(&fr.module, &t.lam).unwrap().dim(), 2);
        assert!(fr.module.action(1).mul(fr.module.action(1)).unwrap().is_zero());
        assert_eq!(free_realisation(&PpFormula::zero(&t.a, 1)).unwrap().module.dim(), 0);
        let top = free_realisation(&PpFormula::top(&t.a, 1)).unwrap();
        assert_eq!(top.module.dim(), 2);
    }

    #[test]
    fn type_generators() {
        let t = fx();
        let g = pp_type_generator(&t.s1, &[vec![1]]).unwrap();
        assert!(equivalent(&g, &t.ann).unwrap());
        let g = pp_type_generator(&t.lam, &[vec![0, 1]]).unwrap();
        assert!(equivalent(&g, &t.div).unwrap());
        assert_eq!(g.bound(), 2);
        let g = pp_type_generator(&t.lam, &[vec![0, 0]]).unwrap();
        assert!(equivalent(&g, &PpFormula::zero(&t.a, 1)).unwrap());
    }

    #[test]
    fn implication() {
        let t = fx();
        assert!(implies(&t.div, &t.ann).unwrap());
        assert!(!implies(&t.ann, &t.div).unwrap());
        assert!(implies(&t.div, &t.div).unwrap());
        let two = PpFormula::top(&t.a, 2);
        assert!(matches!(implies(&t.div, &two), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn pairs() {
        let t = fx();
        let p = PpPair::new(t.ann.clone(), t.div.clone()).unwrap();
        assert!(pair_open(&p, &t.s1).unwrap());
        assert!(!pair_open(&p, &t.lam).unwrap());
        let q = PpPair::new(t.div.clone(), t.div.clone()).unwrap();
        assert!(!pair_open(&q, &direct_sum2(&t.lam, &t.s1).unwrap().module).unwrap());
        assert!(PpPair::new(t.div.clone(), t.ann.clone()).is_err());
    }
}
