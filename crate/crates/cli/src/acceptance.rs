//! The acceptance criteria over `F_2`, one result line each.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::{json, Value};

use ppinterp::algebra::Algebra;
use ppinterp::bimodule::Bimodule;
use ppinterp::controlled::{inverse_interp, nagase_check, roundtrip_check, EmbeddingData};
use ppinterp::decompose::DecompConfig;
use ppinterp::fixtures::{
    dual_numbers, embed, kronecker, kronecker_simple, lambda_kronecker_bimodule, pp_sample, simple_top,
    vertex_restriction_data,
};
use ppinterp::hom::is_direct_summand;
use ppinterp::interp::{apply, axiom_pairs, bounds, hom_interp_data, isolating_pair, pullback_pair};
use ppinterp::inventory::{direct_sums, enumerate_indecomposables, Inventory, InventoryConfig};
use ppinterp::lattice::{beta, verify_embedding, verify_lattice_hom, BetaMap};
use ppinterp::linalg::unit_vec;
use ppinterp::module::Module;
use ppinterp::pp::{eval, implies, pair_open, PpFormula};
use ppinterp::{Field, PrimeField, Result};

/// Criteria that cannot hold for the fixed data; reported faithfully as failures.
pub const KNOWN_INFEASIBLE: &[u32] = &[1];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptanceReport {
    pub seed: u64,
    pub criteria: Vec<Criterion>,
}

impl AcceptanceReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "passed": self.passed(),
            "criteria": self.criteria.iter().map(|c| json!({
                "id": c.id, "name": c.name, "passed": c.passed, "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for AcceptanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{status} [{:>2}] {}: {}", c.id, c.name, c.detail)?;
        }
        let failed = self.criteria.iter().filter(|c| !c.passed).count();
        writeln!(f, "{} criteria, {failed} failed", self.criteria.len())
    }
}

/// Everything shared between criteria.
struct Ctx {
    f: PrimeField,
    lam: Algebra<PrimeField>,
    k: Algebra<PrimeField>,
    b: Bimodule<PrimeField>,
    s1: Module<PrimeField>,
    lam_inv: Inventory<PrimeField>,
    kr_inv: Inventory<PrimeField>,
    cfg: DecompConfig,
}

impl Ctx {
    fn new(seed: u64) -> Result<Self> {
        let f = PrimeField::new(2)?;
        let lam = dual_numbers(f)?;
        let k = kronecker(f)?;
        let b = lambda_kronecker_bimodule(&lam, &k)?;
        let s1 = simple_top(&lam)?;
        let cfg = DecompConfig::with_seed(seed);
        let inv_cfg = InventoryConfig { decomp: cfg, ..InventoryConfig::new(4) };
        let lam_inv = enumerate_indecomposables(&lam, &inv_cfg)?;
        let kr_inv = enumerate_indecomposables(&k, &inv_cfg)?;
        Ok(Ctx { f, lam, k, b, s1, lam_inv, kr_inv, cfg })
    }
}

type Outcome = Result<(bool, String)>;

/// pp-types of all elements of all modules of dimension <= 3, closed once.
fn lambda_sample(c: &Ctx) -> Result<Vec<PpFormula<PrimeField>>> {
    let mods: Vec<Module<PrimeField>> =
        direct_sums(&c.lam_inv.up_to(3), 3, 3)?.into_iter().map(|(_, m)| m).collect();
    pp_sample(&c.lam, &mods)
}

fn c1(c: &Ctx) -> Outcome {
    let start = Instant::now();
    let sample = lambda_sample(c)?;
    let bm = BetaMap::new(c.b.clone());
    let report = verify_lattice_hom(&bm, &sample)?;
    let fast = start.elapsed() < Duration::from_secs(60);
    let big = sample.len() >= 10;
    let detail = format!(
        "sample has {} inequivalent formulas (need >= 10), {} meet/join/order checks, {} failures, runtime {} 60 s",
        sample.len(),
        report.checks.len(),
        report.failure_count(),
        if fast { "<" } else { ">=" }
    );
    Ok((big && report.passed() && fast, detail))
}

fn c2(c: &Ctx) -> Outcome {
    let sample = lambda_sample(c)?;
    let report = verify_embedding(&BetaMap::new(c.b.clone()), &sample)?;
    Ok((report.passed(), format!("{} strict pairs, {} failures", report.checks.len(), report.failure_count())))
}

/// Compares `implies` with inclusion of solution sets on every module.
fn oracle_agreement(sample: &[PpFormula<PrimeField>], modules: &[Module<PrimeField>]) -> Result<(usize, usize)> {
    let sets: Vec<Vec<_>> = sample
        .par_iter()
        .map(|p| modules.iter().map(|m| eval(p, m)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..sample.len()).flat_map(|i| (0..sample.len()).map(move |j| (i, j))).collect();
    let bad: Vec<bool> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let syn = implies(&sample[i], &sample[j])?;
            let mut sem = true;
            for (a, b) in sets[i].iter().zip(&sets[j]) {
                sem &= a.is_subspace_of(b)?;
            }
            Ok(syn != sem)
        })
        .collect::<Result<_>>()?;
    Ok((pairs.len(), bad.iter().filter(|&&b| b).count()))
}

fn c3(c: &Ctx) -> Outcome {
    let lam_sample = lambda_sample(c)?;
    let kr_small: Vec<Module<PrimeField>> = c.kr_inv.up_to(2);
    let kr_sample = pp_sample(&c.k, &kr_small)?;
    let bm = BetaMap::new(c.b.clone());
    let betas = lam_sample.iter().map(|p| beta(&bm, p)).collect::<Result<Vec<_>>>()?;
    let (n1, b1) = oracle_agreement(&lam_sample, &c.lam_inv.modules)?;
    let (n2, b2) = oracle_agreement(&kr_sample, &c.kr_inv.modules)?;
    let (n3, b3) = oracle_agreement(&betas, &c.kr_inv.modules)?;
    let complete = c.lam_inv.is_complete() && c.kr_inv.is_complete();
    Ok((
        complete && b1 + b2 + b3 == 0,
        format!(
            "{} ordered pairs over {} + {} inventory modules, {} disagreements, inventories complete: {complete}",
            n1 + n2 + n3,
            c.lam_inv.modules.len(),
            c.kr_inv.modules.len(),
            b1 + b2 + b3
        ),
    ))
}

fn isolation_on(inv: &Inventory<PrimeField>, cfg: &DecompConfig) -> Result<(usize, usize, usize, bool)> {
    let members = inv.up_to(3);
    let sums = direct_sums(&members, 3, 6)?;
    let rows: Vec<(usize, bool)> = members
        .par_iter()
        .map(|m| {
            let a = unit_vec(m.field(), m.dim(), 0);
            let iso = isolating_pair(m, &a, &members, 3, cfg)?;
            let mut bad = 0;
            for (_, l) in &sums {
                if pair_open(&iso.pair, l)? != is_direct_summand(m, l)?.is_summand {
                    bad += 1;
                }
            }
            Ok((bad, iso.bounds_hold()))
        })
        .collect::<Result<_>>()?;
    let bad = rows.iter().map(|r| r.0).sum();
    Ok((members.len(), sums.len(), bad, rows.iter().all(|r| r.1)))
}

fn c4(c: &Ctx) -> Outcome {
    let (m1, l1, b1, ok1) = isolation_on(&c.lam_inv, &c.cfg)?;
    let (m2, l2, b2, ok2) = isolation_on(&c.kr_inv, &c.cfg)?;
    Ok((
        b1 + b2 == 0 && ok1 && ok2,
        format!(
            "{} + {} isolated modules against {} + {} direct sums, {} mismatches, bounds hold: {}",
            m1,
            m2,
            l1,
            l2,
            b1 + b2,
            ok1 && ok2
        ),
    ))
}

fn lambda_modules_up_to_4(c: &Ctx) -> Result<Vec<Module<PrimeField>>> {
    Ok(direct_sums(&c.lam_inv.modules, 4, 4)?.into_iter().map(|(_, m)| m).collect())
}

fn c5(c: &Ctx) -> Outcome {
    let e = EmbeddingData::new(c.b.clone(), None)?;
    let data = inverse_interp(&e)?;
    let mods = lambda_modules_up_to_4(c)?;
    let witnessed = mods
        .par_iter()
        .map(|n| {
            let rt = roundtrip_check(&e, &data, n, &c.cfg)?;
            Ok(rt.iso.is_some_and(|i| i.is_intertwiner() && i.matrix().is_invertible()))
        })
        .collect::<Result<Vec<bool>>>()?;
    let ok = witnessed.iter().filter(|&&w| w).count();
    let d_lam = apply(&data, &embed(&c.lam.regular_module(), &c.b)?)?.module.dim();
    let d_s1 = apply(&data, &embed(&c.s1, &c.b)?)?.module.dim();
    Ok((
        ok == mods.len() && d_lam == 2 && d_s1 == 1,
        format!("{ok}/{} modules with iso witness, dim IF(Lambda) = {d_lam}, dim IF(S1) = {d_s1}", mods.len()),
    ))
}

fn c6(c: &Ctx) -> Outcome {
    let data = hom_interp_data(&c.b)?;
    let mods = lambda_modules_up_to_4(c)?;
    let ok = mods
        .par_iter()
        .map(|n| nagase_check(&c.b, &data, n))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&x| x)
        .count();
    Ok((ok == mods.len(), format!("N | GFN for {ok}/{} modules", mods.len())))
}

fn c7(c: &Ctx) -> Outcome {
    let data = hom_interp_data(&c.b)?;
    let iso = isolating_pair(&c.s1, &[c.f.one()], &c.lam_inv.up_to(3), 3, &c.cfg)?;
    let (st, report) = pullback_pair(&data, &iso.pair, 1)?;
    let mods: Vec<Module<PrimeField>> =
        direct_sums(&c.kr_inv.modules, 4, 4)?.into_iter().map(|(_, m)| m).collect();
    let bad = mods
        .par_iter()
        .map(|m| {
            let im = apply(&data, m)?.module;
            Ok(pair_open(&st, m)? != is_direct_summand(&c.s1, &im)?.is_summand)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    let c_sigma = report.c_sigma.unwrap_or(0);
    Ok((
        report.holds() && bad == 0,
        format!("c(sigma) = {c_sigma} <= n_1 = {}; {} Kronecker modules, {bad} mismatches", report.n_d, mods.len()),
    ))
}

fn c8(_: &Ctx) -> Outcome {
    let r = bounds(1, 2, 2, 0, 0, &[0, 0], 4)?;
    Ok((r.n_d == 16 && r.b_d == 72, format!("n_1 = {}, b_1 = {}", r.n_d, r.b_d)))
}

fn c9(c: &Ctx) -> Outcome {
    let data = vertex_restriction_data(&c.k, &c.lam)?;
    let pairs = axiom_pairs(&data)?;
    let images = lambda_modules_up_to_4(c)?
        .iter()
        .map(|n| embed(n, &c.b))
        .collect::<Result<Vec<_>>>()?;
    let open_on_image = images
        .par_iter()
        .map(|m| {
            let mut n = 0;
            for ax in &pairs {
                n += pair_open(&ax.pair, m)? as usize;
            }
            Ok(n)
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum::<usize>();
    let s2 = kronecker_simple(&c.k, 1)?;
    let mut open_s2 = Vec::new();
    for ax in &pairs {
        if pair_open(&ax.pair, &s2)? {
            open_s2.push(ax.name.clone());
        }
    }
    Ok((
        open_on_image == 0 && !open_s2.is_empty(),
        format!(
            "{} pairs closed on {} image modules ({open_on_image} open); open on S2: {}",
            pairs.len(),
            images.len(),
            if open_s2.is_empty() { "none".to_string() } else { open_s2.join(", ") }
        ),
    ))
}

fn c10_inventory(c: &Ctx) -> Result<(bool, String)> {
    let inv = enumerate_indecomposables(&c.lam, &InventoryConfig { decomp: c.cfg, ..InventoryConfig::new(2) })?;
    let dims: Vec<usize> = inv.modules.iter().map(|m| m.dim()).collect();
    let s1_ok = inv.modules.first().is_some_and(|m| ppinterp::decompose::iso_test(m, &c.s1, &c.cfg).unwrap_or(false));
    let lam_ok = inv
        .modules
        .get(1)
        .is_some_and(|m| ppinterp::decompose::iso_test(m, &c.lam.regular_module(), &c.cfg).unwrap_or(false));
    Ok((dims == [1, 2] && s1_ok && lam_ok && inv.is_complete(), format!("Lambda inventory to dim 2 has dims {dims:?}")))
}

type CriterionFn = fn(&Ctx) -> Outcome;

const CRITERIA: &[(u32, &str, CriterionFn)] = &[
    (1, "lattice homomorphism", c1),
    (2, "lattice embedding", c2),
    (3, "implication oracle", c3),
    (4, "isolation", c4),
    (5, "round trip IFN = N", c5),
    (6, "N summand of GFN", c6),
    (7, "pullback bound", c7),
    (8, "bounds arithmetic", c8),
    (9, "axiom pairs", c9),
];

fn run_criteria(c: &Ctx) -> Vec<Criterion> {
    CRITERIA
        .par_iter()
        .map(|&(id, name, f)| {
            let (passed, detail) = f(c).unwrap_or_else(|e| (false, format!("error: {e}")));
            Criterion { id, name, passed, detail }
        })
        .collect()
}

/// Runs every criterion; the last one repeats the others to check determinism.
pub fn run(seed: u64) -> Result<AcceptanceReport> {
    let start = Instant::now();
    let ctx = Ctx::new(seed)?;
    let mut criteria = run_criteria(&ctx);
    let again = run_criteria(&Ctx::new(seed)?);
    let deterministic = again == criteria;
    let (inv_ok, inv_detail) = c10_inventory(&ctx).unwrap_or_else(|e| (false, format!("error: {e}")));
    let fast = start.elapsed() < Duration::from_secs(600);
    criteria.push(Criterion {
        id: 10,
        name: "infrastructure",
        passed: inv_ok && deterministic && fast,
        detail: format!(
            "{inv_detail}; repeated run identical: {deterministic}; runtime {} 10 min",
            if fast { "<" } else { ">=" }
        ),
    });
    Ok(AcceptanceReport { seed, criteria })
}
