//! Subcommands: each wraps one library operation and renders text or JSON.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use ppinterp::controlled::{check_controlled, inverse_interp, roundtrip_check};
use ppinterp::decompose::DecompConfig;
use ppinterp::interp::{apply, bounds, check_welldefined, isolating_pair, pullback_pair};
use ppinterp::inventory::{direct_sums, enumerate_indecomposables, InventoryConfig};
use ppinterp::io::{self, Loader};
use ppinterp::lattice::{beta, verify_embedding, verify_independence, verify_lattice_hom, BetaMap};
use ppinterp::pp::{eval, free_realisation, implies, pp_type_generator};
use ppinterp::report::Report;
use ppinterp::{Field, FieldSpec, PrimeField, Rationals};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ppinterp::Error),
}

impl CliError {
    /// 1 for a failed check, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(ppinterp::Error::NotWellDefined(_) | ppinterp::Error::Inconsistent(_)) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ppinterp", version, about = "pp formulas, representation embeddings and interpretation functors")]
pub struct Cli {
    /// Base field: `q` or `fp:P`.
    #[arg(long, global = true, default_value = "fp:2")]
    pub field: String,
    /// Seed for the randomised decomposition search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Dimension cap for inventories.
    #[arg(long, global = true, default_value_t = 3)]
    pub cap: usize,
    /// Largest number of action tuples an inventory may enumerate.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    pub budget: u128,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    pub out: OutFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub c_phi: usize,
    #[arg(long, default_value_t = 0)]
    pub c_psi: usize,
    /// Bound-variable counts of the action formulas, comma separated; zeros by default.
    #[arg(long, value_delimiter = ',')]
    pub c_rho: Vec<usize>,
    #[arg(long)]
    pub dim_r: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solution set of a formula in a module.
    Eval {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        module: PathBuf,
    },
    /// Whether psi implies phi.
    Implies {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        phi: PathBuf,
    },
    /// Free realisation of a formula.
    Freereal {
        #[arg(long)]
        formula: PathBuf,
    },
    /// Generator of the pp-type of a tuple given as a JSON array of vectors.
    Pptype {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        tuple: String,
    },
    /// Image of a 1-formula under the bimodule's lattice map.
    Beta {
        #[arg(long)]
        bimodule: PathBuf,
        #[arg(long)]
        formula: PathBuf,
    },
    /// Lattice-homomorphism, embedding and independence checks on a sample of 1-formulas.
    VerifyLattice {
        #[arg(long)]
        bimodule: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        formulas: Vec<PathBuf>,
    },
    /// Apply interpretation data to a module.
    InterpApply {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        module: PathBuf,
    },
    /// Isolating pair of an indecomposable module, relative to its inventory up to --cap.
    Isolate {
        #[arg(long)]
        module: PathBuf,
        /// Nonzero element as a JSON coefficient array.
        #[arg(long)]
        element: String,
    },
    /// Pull a pair over S back along interpretation data.
    Pullback {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// The n_d and b_d bounds.
    Bounds(BoundsArgs),
    /// Controlledness on all pairs of S-modules that are direct sums of inventory members up to --cap.
    CheckControlled {
        #[arg(long)]
        embedding: PathBuf,
    },
    /// I F N is isomorphic to N.
    Roundtrip {
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long)]
        module: PathBuf,
    },
    /// Indecomposables up to --cap.
    Inventory {
        /// Algebra file or built-in name.
        #[arg(long)]
        algebra: String,
    },
    /// Run the acceptance criteria.
    Acceptance,
}

/// Rendered result of a subcommand.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub passed: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, passed: true }
    }
    fn report(r: &Report, json: Value) -> Self {
        Outcome { text: r.to_string(), json, passed: r.passed() }
    }
}

pub fn report_json(r: &Report) -> Value {
    json!({
        "title": r.title,
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
    })
}

fn vectors_json<F: Field>(f: &F, vs: &[Vec<F::Elem>]) -> Value {
    Value::Array(vs.iter().map(|v| Value::Array(v.iter().map(|x| io::scalar_json(f, x)).collect())).collect())
}

fn vectors_text<F: Field>(f: &F, vs: &[Vec<F::Elem>]) -> String {
    vs.iter()
        .map(|v| format!("[{}]", v.iter().map(|x| f.format(x)).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    if let Command::Acceptance = cli.command {
        let r = crate::acceptance::run(cli.seed)?;
        return Ok(Outcome { text: r.to_string(), json: r.to_json(), passed: r.passed() });
    }
    if let Command::Bounds(b) = &cli.command {
        return run_bounds(b);
    }
    match FieldSpec::parse(&cli.field)? {
        FieldSpec::Rationals => run_over(Rationals, cli),
        FieldSpec::Prime(p) => run_over(PrimeField::new(p)?, cli),
    }
}

fn run_bounds(b: &BoundsArgs) -> CliResult<Outcome> {
    let c_rho = if b.c_rho.is_empty() { vec![0; b.p] } else { b.c_rho.clone() };
    if c_rho.len() != b.p {
        return Err(CliError::Usage(format!("--c-rho lists {} values for p = {}", c_rho.len(), b.p)));
    }
    let r = bounds(b.d, b.m, b.p, b.c_phi, b.c_psi, &c_rho, b.dim_r.unwrap_or(0))?;
    let mut text = format!("n_d={}", r.n_d);
    if b.dim_r.is_some() {
        text.push_str(&format!(" b_d={}", r.b_d));
    }
    let json = json!({"n_d": r.n_d, "b_d": b.dim_r.map(|_| r.b_d)});
    Ok(Outcome::ok(text, json))
}

fn load<F: Field>(f: &F) -> Loader<F> {
    Loader::new(f.clone(), ".")
}

fn file<F: Field>(l: &Loader<F>, p: &Path) -> CliResult<(Value, Loader<F>)> {
    Ok(l.read_file(p)?)
}

fn run_over<F: Field>(f: F, cli: &Cli) -> CliResult<Outcome> {
    let l = load(&f);
    let cfg = DecompConfig::with_seed(cli.seed);
    let inv_cfg = InventoryConfig { cap: cli.cap, budget: cli.budget, decomp: cfg };
    match &cli.command {
        Command::Eval { formula, module } => {
            let (v, lf) = file(&l, formula)?;
            let (w, lm) = file(&l, module)?;
            let m = lm.module(&w)?;
            let phi = lf.formula(&v, Some(m.algebra()))?;
            let s = eval(&phi, &m)?;
            let basis = s.basis_vecs();
            let text = format!("dimension {}\n{}", s.dim(), vectors_text(&f, &basis)).trim_end().to_string();
            Ok(Outcome::ok(text, json!({"dim": s.dim(), "basis": vectors_json(&f, &basis)})))
        }
        Command::Implies { psi, phi } => {
            let (v, lp) = file(&l, psi)?;
            let psi = lp.formula(&v, None)?;
            let (w, lq) = file(&l, phi)?;
            let phi = lq.formula(&w, Some(psi.algebra()))?;
            let r = implies(&psi, &phi)?;
            Ok(Outcome::ok(r.to_string(), json!(r)))
        }
        Command::Freereal { formula } => {
            let (v, lf) = file(&l, formula)?;
            let fr = free_realisation(&lf.formula(&v, None)?)?;
            let text = format!("module of dimension {}\ntuple:\n{}", fr.module.dim(), vectors_text(&f, &fr.tuple));
            Ok(Outcome::ok(text, json!({"module": io::module_json(&fr.module), "tuple": vectors_json(&f, &fr.tuple)})))
        }
        Command::Pptype { module, tuple } => {
            let (w, lm) = file(&l, module)?;
            let m = lm.module(&w)?;
            let t = io::parse_json(tuple, "--tuple")?;
            let rows = t.as_array().ok_or_else(|| CliError::Usage("--tuple must be a JSON array of vectors".into()))?;
            let tuple = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| CliError::Usage("--tuple entries must be arrays".into()))?
                        .iter()
                        .map(|x| l.scalar(x).map_err(CliError::from))
                        .collect::<CliResult<Vec<_>>>()
                })
                .collect::<CliResult<Vec<_>>>()?;
            let phi = pp_type_generator(&m, &tuple)?;
            Ok(Outcome::ok(phi.to_string(), io::formula_json(&phi)))
        }
        Command::Beta { bimodule, formula } => {
            let (v, lb) = file(&l, bimodule)?;
            let b = lb.bimodule(&v)?;
            let (w, lf) = file(&l, formula)?;
            let phi = lf.formula(&w, Some(b.left()))?;
            let out = beta(&BetaMap::new(b), &phi)?;
            Ok(Outcome::ok(out.to_string(), io::formula_json(&out)))
        }
        Command::VerifyLattice { bimodule, formulas } => {
            let (v, lb) = file(&l, bimodule)?;
            let b = lb.bimodule(&v)?;
            let sample = formulas
                .iter()
                .map(|p| {
                    let (w, lf) = file(&l, p)?;
                    Ok(lf.formula(&w, Some(b.left()))?)
                })
                .collect::<CliResult<Vec<_>>>()?;
            let bm = BetaMap::new(b);
            let mut r = verify_lattice_hom(&bm, &sample)?;
            r.extend(verify_embedding(&bm, &sample)?);
            r.extend(verify_independence(&bm, &sample)?);
            r.title = "beta lattice checks".into();
            Ok(Outcome::report(&r, report_json(&r)))
        }
        Command::InterpApply { data, module } => {
            let (v, ld) = file(&l, data)?;
            let data = ld.interp_data(&v)?;
            let (w, lm) = file(&l, module)?;
            let m = lm.module(&w)?;
            let wd = check_welldefined(&data, &m)?;
            if !wd.passed() {
                return Ok(Outcome::report(&wd, report_json(&wd)));
            }
            let im = apply(&data, &m)?;
            let text = format!("{wd}module of dimension {}", im.module.dim());
            Ok(Outcome::ok(text, json!({"welldefined": report_json(&wd), "module": io::module_json(&im.module)})))
        }
        Command::Isolate { module, element } => {
            let (w, lm) = file(&l, module)?;
            let m = lm.module(&w)?;
            let a = lm.vector(&io::parse_json(element, "--element")?, m.dim())?;
            let inv = enumerate_indecomposables(m.algebra(), &inv_cfg)?;
            let iso = isolating_pair(&m, &a, &inv.modules, cli.cap, &cfg)?;
            let text = format!(
                "top: {}\nbottom: {}\nc(phi) = {}, d(phi) = {}, scope: {} inventory modules up to dim {}",
                iso.pair.top(),
                iso.pair.bottom(),
                iso.c_phi(),
                iso.d_phi(),
                iso.scope.len(),
                iso.cap
            );
            Ok(Outcome::ok(text, io::pair_json(&iso.pair)))
        }
        Command::Pullback { data, pair, d } => {
            let (v, ld) = file(&l, data)?;
            let data = ld.interp_data(&v)?;
            let (w, lp) = file(&l, pair)?;
            let gd = lp.pair(&w, Some(data.target()))?;
            let (st, r) = pullback_pair(&data, &gd, *d)?;
            let c_sigma = r.c_sigma.unwrap_or(0);
            let text = format!(
                "c(sigma) = {c_sigma}, n_d = {}, b_d = {}, bound holds: {}",
                r.n_d,
                r.b_d,
                r.holds()
            );
            let json = json!({"pair": io::pair_json(&st), "c_sigma": c_sigma, "n_d": r.n_d, "b_d": r.b_d});
            Ok(Outcome { text, json, passed: r.holds() })
        }
        Command::CheckControlled { embedding } => {
            let (v, le) = file(&l, embedding)?;
            let e = le.embedding(&v)?;
            let inv = enumerate_indecomposables(e.bimodule.left(), &inv_cfg)?;
            let mods: Vec<_> = direct_sums(&inv.modules, cli.cap, cli.cap)?.into_iter().map(|(_, m)| m).collect();
            let pairs: Vec<_> = mods.iter().flat_map(|m| mods.iter().map(move |n| (m.clone(), n.clone()))).collect();
            let r = check_controlled(&e, &pairs, &cfg)?;
            Ok(Outcome::report(&r, report_json(&r)))
        }
        Command::Roundtrip { embedding, module } => {
            let (v, le) = file(&l, embedding)?;
            let e = le.embedding(&v)?;
            let (w, lm) = file(&l, module)?;
            let n = lm.module(&w)?;
            let data = inverse_interp(&e)?;
            let rt = roundtrip_check(&e, &data, &n, &cfg)?;
            let mut json = report_json(&rt.report);
            if let Some(iso) = &rt.iso {
                json["iso"] = vectors_json(&f, &iso.matrix().row_vecs());
            }
            Ok(Outcome::report(&rt.report, json))
        }
        Command::Inventory { algebra } => {
            let alg = l.algebra(&Value::String(algebra.clone()))?;
            let inv = enumerate_indecomposables(&alg, &inv_cfg)?;
            let mut text = format!("{} indecomposables up to dimension {}\n", inv.modules.len(), inv.cap);
            for (i, m) in inv.modules.iter().enumerate() {
                text.push_str(&format!("  {i}: dimension {}\n", m.dim()));
            }
            text.push_str(&inv.completeness.to_string());
            let json = json!({
                "cap": inv.cap,
                "modules": inv.modules.iter().map(io::module_json).collect::<Vec<_>>(),
                "completeness": report_json(&inv.completeness),
            });
            Ok(Outcome { text: text.trim_end().to_string(), json, passed: inv.is_complete() })
        }
        Command::Bounds(_) | Command::Acceptance => unreachable!("handled before field dispatch"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bounds_defaults_rho_to_zero() {
        let cli = Cli::parse_from(["ppinterp", "bounds", "--d", "1", "--m", "1", "--p", "1"]);
        let out = run(&cli).unwrap();
        assert!(out.text.starts_with("n_d="));
        assert!(out.json["b_d"].is_null());
    }

    #[test]
    fn unknown_field_is_a_usage_error() {
        let cli = Cli::parse_from(["ppinterp", "--field", "fp:4", "inventory", "--algebra", "lambda"]);
        assert_eq!(run(&cli).err().unwrap().exit_code(), 2);
    }
}
