//! JSON file formats for algebras, modules, bimodules, formulas, pairs and
//! interpretation data.
//!
//! A reference (`<ref>`) is an inline object, a built-in name (`"lambda"`,
//! `"kronecker"`), or a path resolved against the directory of the referring file.
//! Algebra elements are coefficient arrays or expressions such as `"1 + 2*x"`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::algebra::{Algebra, AlgebraData};
use crate::bimodule::Bimodule;
use crate::controlled::EmbeddingData;
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::fixtures;
use crate::interp::InterpData;
use crate::linalg::Mat;
use crate::module::Module;
use crate::pp::{PpFormula, PpPair};
use crate::quiver::{algebra_from_quiver, QuiverSpec};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Reads JSON, reporting syntax errors with line and column.
pub fn parse_json(text: &str, origin: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| perr(format!("{origin}: line {}, column {}: {e}", e.line(), e.column())))
}

/// Field and base directory for resolving references.
#[derive(Clone, Debug)]
pub struct Loader<F: Field> {
    pub field: F,
    pub base: PathBuf,
}

fn get<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| perr(format!("missing key {key:?}")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| perr(format!("{what} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(format!("{what} must be an array")))
}

impl<F: Field> Loader<F> {
    pub fn new(field: F, base: impl Into<PathBuf>) -> Self {
        Loader { field, base: base.into() }
    }

    /// Loader for a file, with references relative to its directory.
    pub fn read_file(&self, path: &Path) -> Result<(Value, Loader<F>)> {
        let full = if path.is_absolute() { path.to_path_buf() } else { self.base.join(path) };
        let text = std::fs::read_to_string(&full).map_err(|e| perr(format!("{}: {e}", full.display())))?;
        let v = parse_json(&text, &full.display().to_string())?;
        let base = full.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((v, Loader::new(self.field.clone(), base)))
    }

    fn check_field(&self, v: &Value) -> Result<()> {
        if let Some(tag) = v.get("field") {
            let tag = tag.as_str().ok_or_else(|| perr("field must be a string"))?;
            let spec = FieldSpec::parse(tag)?;
            if spec != self.field.spec() {
                return Err(perr(format!("file is over {spec}, run uses {}", self.field.spec())));
            }
        }
        Ok(())
    }

    pub fn scalar(&self, v: &Value) -> Result<F::Elem> {
        match v {
            Value::Number(n) => self.field.parse(&n.to_string()),
            Value::String(s) => self.field.parse(s),
            _ => Err(perr(format!("expected a scalar, found {v}"))),
        }
    }

    fn scalars(&self, v: &Value, what: &str) -> Result<Vec<F::Elem>> {
        as_array(v, what)?.iter().map(|x| self.scalar(x)).collect()
    }

    /// A vector of `k^len` as a JSON array of scalars.
    pub fn vector(&self, v: &Value, len: usize) -> Result<Vec<F::Elem>> {
        let c = self.scalars(v, "vector")?;
        if c.len() != len {
            return Err(perr(format!("vector has {} entries, expected {len}", c.len())));
        }
        Ok(c)
    }

    fn matrix(&self, v: &Value, rows: usize, cols: usize, what: &str) -> Result<Mat<F>> {
        let rs = as_array(v, what)?;
        if rs.len() != rows {
            return Err(perr(format!("{what}: expected {rows} rows, found {}", rs.len())));
        }
        let rows_v = rs.iter().map(|r| self.scalars(r, what)).collect::<Result<Vec<_>>>()?;
        if rows_v.iter().any(|r| r.len() != cols) {
            return Err(perr(format!("{what}: expected {cols} columns")));
        }
        Mat::from_rows(self.field.clone(), cols, &rows_v)
    }

    /// An algebra element: a coefficient array or a `+`/`-` separated expression in basis labels.
    pub fn element(&self, alg: &Algebra<F>, v: &Value) -> Result<Vec<F::Elem>> {
        match v {
            Value::Array(_) => {
                let c = self.scalars(v, "element")?;
                if c.len() != alg.dim() {
                    return Err(perr(format!("element has {} coefficients, algebra has dim {}", c.len(), alg.dim())));
                }
                Ok(c)
            }
            Value::String(s) => parse_element(alg, s),
            Value::Number(_) => {
                let c = self.scalar(v)?;
                Ok(alg.one().iter().map(|u| self.field.mul(u, &c)).collect())
            }
            _ => Err(perr(format!("expected an algebra element, found {v}"))),
        }
    }

    pub fn algebra(&self, v: &Value) -> Result<Algebra<F>> {
        match v {
            Value::String(name) => match name.as_str() {
                "lambda" | "dual_numbers" => fixtures::dual_numbers(self.field.clone()),
                "kronecker" => fixtures::kronecker(self.field.clone()),
                path => {
                    let (v, sub) = self.read_file(Path::new(path))?;
                    sub.algebra(&v)
                }
            },
            Value::Object(_) => {
                self.check_field(v)?;
                if v.get("vertices").is_some() {
                    self.quiver_algebra(v)
                } else {
                    self.table_algebra(v)
                }
            }
            _ => Err(perr("algebra reference must be a name, path or object")),
        }
    }

    fn table_algebra(&self, v: &Value) -> Result<Algebra<F>> {
        let labels: Vec<String> = as_array(get(v, "basis")?, "basis")?
            .iter()
            .map(|l| l.as_str().map(str::to_string).ok_or_else(|| perr("basis labels must be strings")))
            .collect::<Result<_>>()?;
        let one = self.scalars(get(v, "one")?, "one")?;
        let mul = as_array(get(v, "mul")?, "mul")?
            .iter()
            .map(|row| as_array(row, "mul row")?.iter().map(|c| self.scalars(c, "mul entry")).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Algebra::new(AlgebraData { field: self.field.clone(), labels, one, mul })
    }

    fn quiver_algebra(&self, v: &Value) -> Result<Algebra<F>> {
        let vertices = as_usize(get(v, "vertices")?, "vertices")?;
        let arrows = as_array(get(v, "arrows")?, "arrows")?
            .iter()
            .map(|a| {
                let a = as_array(a, "arrow")?;
                if a.len() != 3 {
                    return Err(perr("arrow must be [source, target, label]"));
                }
                let label = a[2].as_str().ok_or_else(|| perr("arrow label must be a string"))?;
                Ok((as_usize(&a[0], "arrow source")?, as_usize(&a[1], "arrow target")?, label.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<(usize, usize, &str)> = arrows.iter().map(|(s, t, l)| (*s, *t, l.as_str())).collect();
        let cap = as_usize(get(v, "cap")?, "cap")?;
        let mut spec = QuiverSpec::new(self.field.clone(), vertices, &refs, cap);
        if let Some(rels) = v.get("relations") {
            for rel in as_array(rels, "relations")? {
                let terms = as_array(rel, "relation")?
                    .iter()
                    .map(|t| {
                        let t = as_array(t, "relation term")?;
                        if t.len() != 2 {
                            return Err(perr("relation term must be [coeff, [labels]]"));
                        }
                        let path = as_array(&t[1], "path")?
                            .iter()
                            .map(|l| l.as_str().map(str::to_string).ok_or_else(|| perr("path labels must be strings")))
                            .collect::<Result<Vec<_>>>()?;
                        Ok((self.scalar(&t[0])?, path))
                    })
                    .collect::<Result<Vec<_>>>()?;
                spec = spec.with_relation(terms);
            }
        }
        algebra_from_quiver(&spec)
    }

    fn action_map(&self, alg: &Algebra<F>, v: &Value, dim: usize, what: &str) -> Result<Vec<Mat<F>>> {
        let obj = v.as_object().ok_or_else(|| perr(format!("{what} must be an object keyed by basis label")))?;
        for key in obj.keys() {
            if alg.label_index(key).is_none() {
                return Err(perr(format!("{what}: unknown basis label {key:?}")));
            }
        }
        alg.labels()
            .iter()
            .map(|l| {
                let m = obj.get(l).ok_or_else(|| perr(format!("{what}: missing action of {l:?}")))?;
                self.matrix(m, dim, dim, what)
            })
            .collect()
    }

    pub fn module(&self, v: &Value) -> Result<Module<F>> {
        if let Value::String(path) = v {
            let (v, sub) = self.read_file(Path::new(path))?;
            return sub.module(&v);
        }
        self.check_field(v)?;
        let alg = self.algebra(get(v, "algebra")?)?;
        let dim = as_usize(get(v, "dim")?, "dim")?;
        let actions = self.action_map(&alg, get(v, "action")?, dim, "action")?;
        Module::new(alg, dim, actions)
    }

    pub fn bimodule(&self, v: &Value) -> Result<Bimodule<F>> {
        if let Value::String(path) = v {
            let (v, sub) = self.read_file(Path::new(path))?;
            return sub.bimodule(&v);
        }
        let right = self.module(v)?;
        let left = self.algebra(get(v, "left_algebra")?)?;
        let left_action = self.action_map(&left, get(v, "left_action")?, right.dim(), "left_action")?;
        let generators = as_array(get(v, "generators")?, "generators")?
            .iter()
            .map(|g| self.scalars(g, "generator"))
            .collect::<Result<_>>()?;
        Bimodule::new(left, right, left_action, generators)
    }

    /// A formula; `default` supplies the algebra when the object has none.
    pub fn formula(&self, v: &Value, default: Option<&Algebra<F>>) -> Result<PpFormula<F>> {
        if let Value::String(path) = v {
            let (v, sub) = self.read_file(Path::new(path))?;
            return sub.formula(&v, default);
        }
        let alg = match (v.get("algebra"), default) {
            (Some(a), _) => self.algebra(a)?,
            (None, Some(a)) => a.clone(),
            (None, None) => return Err(perr("formula needs an \"algebra\"")),
        };
        let n = as_usize(get(v, "free")?, "free")?;
        let c = as_usize(get(v, "bound")?, "bound")?;
        let rows = as_array(get(v, "matrix")?, "matrix")?
            .iter()
            .map(|r| as_array(r, "matrix row")?.iter().map(|e| self.element(&alg, e)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        PpFormula::new(alg, n, c, rows)
    }

    pub fn pair(&self, v: &Value, default: Option<&Algebra<F>>) -> Result<PpPair<F>> {
        if let Value::String(path) = v {
            let (v, sub) = self.read_file(Path::new(path))?;
            return sub.pair(&v, default);
        }
        let alg = v.get("algebra").map(|a| self.algebra(a)).transpose()?;
        let d = alg.as_ref().or(default);
        PpPair::new(self.formula(get(v, "top")?, d)?, self.formula(get(v, "bottom")?, d)?)
    }

    pub fn interp_data(&self, v: &Value) -> Result<InterpData<F>> {
        if let Value::String(path) = v {
            let (v, sub) = self.read_file(Path::new(path))?;
            return sub.interp_data(&v);
        }
        let r = self.algebra(get(v, "R")?)?;
        let s = self.algebra(get(v, "S")?)?;
        let m = as_usize(get(v, "m")?, "m")?;
        let phi = self.formula(get(v, "phi")?, Some(&r))?;
        let psi = self.formula(get(v, "psi")?, Some(&r))?;
        if phi.arity() != m {
            return Err(Error::ArityMismatch { expected: m, found: phi.arity() });
        }
        let rho_obj = get(v, "rho")?.as_object().ok_or_else(|| perr("rho must be an object keyed by S-basis label"))?;
        let rho = s
            .labels()
            .iter()
            .map(|l| {
                let f = rho_obj.get(l).ok_or_else(|| perr(format!("rho: missing formula for {l:?}")))?;
                self.formula(f, Some(&r))
            })
            .collect::<Result<Vec<_>>>()?;
        InterpData::new(s, PpPair::new(phi, psi)?, rho)
    }

    pub fn embedding(&self, v: &Value) -> Result<EmbeddingData<F>> {
        if let Value::String(path) = v {
            let (v, sub) = self.read_file(Path::new(path))?;
            return sub.embedding(&v);
        }
        let b = self.bimodule(get(v, "bimodule")?)?;
        let control = match v.get("control") {
            None | Some(Value::Null) => None,
            Some(c) => Some(self.module(c)?),
        };
        EmbeddingData::new(b, control)
    }
}

/// Parses `"2*x + 1 - a*b"`-style expressions; a term is `[coeff *] label` or a bare scalar.
pub fn parse_element<F: Field>(alg: &Algebra<F>, s: &str) -> Result<Vec<F::Elem>> {
    let f = alg.field();
    let mut out = alg.zero_elem();
    let mut terms: Vec<(bool, String, usize)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && !cur.trim().is_empty() && !cur.trim_end().ends_with('*') && !cur.trim_end().ends_with('/') {
            terms.push((neg, std::mem::take(&mut cur), start));
            neg = ch == '-';
            start = i + 1;
        } else if (ch == '+' || ch == '-') && cur.trim().is_empty() {
            if ch == '-' {
                neg = !neg;
            }
            start = i + 1;
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur, start));
    for (neg, t, pos) in terms {
        let t = t.trim();
        if t.is_empty() {
            return Err(perr(format!("empty term at position {pos} in {s:?}")));
        }
        let (coeff, label) = match t.rsplit_once('*') {
            Some((c, l)) => (f.parse(c.trim()).map_err(|_| perr(format!("bad coefficient at position {pos} in {s:?}")))?, l.trim()),
            None => match alg.label_index(t) {
                Some(_) => (f.one(), t),
                None => {
                    let c = f.parse(t).map_err(|_| perr(format!("unknown term {t:?} at position {pos} in {s:?}")))?;
                    (c, "")
                }
            },
        };
        let coeff = if neg { f.neg(&coeff) } else { coeff };
        let basis = if label.is_empty() {
            alg.one().to_vec()
        } else {
            let i = alg
                .label_index(label)
                .ok_or_else(|| perr(format!("unknown basis label {label:?} at position {pos} in {s:?}")))?;
            alg.basis_elem(i)
        };
        for (o, b) in out.iter_mut().zip(&basis) {
            *o = f.add(o, &f.mul(&coeff, b));
        }
    }
    Ok(out)
}

/// Scalars print as JSON integers when they are integers, otherwise as strings.
pub fn scalar_json<F: Field>(f: &F, a: &F::Elem) -> Value {
    let s = f.format(a);
    match s.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(s),
    }
}

fn vec_json<F: Field>(f: &F, v: &[F::Elem]) -> Value {
    Value::Array(v.iter().map(|x| scalar_json(f, x)).collect())
}

fn mat_json<F: Field>(m: &Mat<F>) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| vec_json(m.field(), r)).collect())
}

pub fn algebra_json<F: Field>(a: &Algebra<F>) -> Value {
    let f = a.field();
    let mul: Vec<Value> = (0..a.dim())
        .map(|i| Value::Array((0..a.dim()).map(|j| vec_json(f, a.mul_basis(i, j))).collect()))
        .collect();
    json!({
        "field": f.spec().to_string(),
        "basis": a.labels(),
        "one": vec_json(f, a.one()),
        "mul": mul,
    })
}

fn actions_json<F: Field>(alg: &Algebra<F>, mats: &[Mat<F>]) -> Value {
    let mut obj = Map::new();
    for (l, m) in alg.labels().iter().zip(mats) {
        obj.insert(l.clone(), mat_json(m));
    }
    Value::Object(obj)
}

pub fn module_json<F: Field>(m: &Module<F>) -> Value {
    json!({
        "algebra": algebra_json(m.algebra()),
        "dim": m.dim(),
        "action": actions_json(m.algebra(), m.actions()),
    })
}

pub fn bimodule_json<F: Field>(b: &Bimodule<F>) -> Value {
    let mut v = module_json(b.right());
    let obj = v.as_object_mut().expect("object");
    obj.insert("left_algebra".into(), algebra_json(b.left()));
    obj.insert("left_action".into(), actions_json(b.left(), b.left_actions()));
    obj.insert(
        "generators".into(),
        Value::Array(b.generators().iter().map(|g| vec_json(b.field(), g)).collect()),
    );
    v
}

/// Formula without its algebra, for embedding in larger objects.
pub fn formula_body_json<F: Field>(phi: &PpFormula<F>) -> Value {
    let f = phi.algebra().field();
    let rows: Vec<Value> = phi
        .rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(|e| vec_json(f, e)).collect()))
        .collect();
    json!({ "free": phi.arity(), "bound": phi.bound(), "matrix": rows })
}

pub fn formula_json<F: Field>(phi: &PpFormula<F>) -> Value {
    let mut v = formula_body_json(phi);
    v.as_object_mut().expect("object").insert("algebra".into(), algebra_json(phi.algebra()));
    v
}

pub fn pair_json<F: Field>(p: &PpPair<F>) -> Value {
    json!({
        "algebra": algebra_json(p.top().algebra()),
        "top": formula_body_json(p.top()),
        "bottom": formula_body_json(p.bottom()),
    })
}

pub fn interp_json<F: Field>(d: &InterpData<F>) -> Value {
    let rho: BTreeMap<String, Value> = d
        .target()
        .labels()
        .iter()
        .zip(d.rhos())
        .map(|(l, r)| (l.clone(), formula_body_json(r)))
        .collect();
    json!({
        "R": algebra_json(d.source()),
        "S": algebra_json(d.target()),
        "m": d.m(),
        "phi": formula_body_json(d.phi()),
        "psi": formula_body_json(d.psi()),
        "rho": rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::fixtures::{dual_numbers, kronecker, lambda_kronecker_bimodule, vertex_restriction_data};

    #[test]
    fn element_expressions() {
        let a = dual_numbers(Rationals).unwrap();
        let f = Rationals;
        assert_eq!(parse_element(&a, "1 + 2*x").unwrap(), vec![f.from_i64(1), f.from_i64(2)]);
        assert_eq!(parse_element(&a, "-x").unwrap(), vec![f.zero(), f.from_i64(-1)]);
        assert_eq!(parse_element(&a, "1/2*x - 3").unwrap(), vec![f.from_i64(-3), f.parse("1/2").unwrap()]);
        assert!(parse_element(&a, "y").is_err());
        assert!(parse_element(&a, "1 +").is_err());
    }

    #[test]
    fn builtins_and_inline() {
        let f = PrimeField::new(2).unwrap();
        let l = Loader::new(f, ".");
        let k = l.algebra(&json!("kronecker")).unwrap();
        assert_eq!(k.dim(), 4);
        let q = l
            .algebra(&json!({"field": "fp:2", "vertices": 2, "arrows": [[0, 1, "a"], [0, 1, "b"]], "cap": 2}))
            .unwrap();
        assert_eq!(q, k);
        assert!(l.algebra(&json!({"field": "fp:3", "vertices": 1, "arrows": [], "cap": 1})).is_err());
    }

    #[test]
    fn roundtrips() {
        let f = PrimeField::new(2).unwrap();
        let l = Loader::new(f, ".");
        let (lam, k) = (dual_numbers(f).unwrap(), kronecker(f).unwrap());
        assert_eq!(l.algebra(&algebra_json(&k)).unwrap(), k);
        let b = lambda_kronecker_bimodule(&lam, &k).unwrap();
        let b2 = l.bimodule(&bimodule_json(&b)).unwrap();
        assert_eq!(b2.right(), b.right());
        assert_eq!(b2.left_actions(), b.left_actions());
        let data = vertex_restriction_data(&k, &lam).unwrap();
        let d2 = l.interp_data(&interp_json(&data)).unwrap();
        assert_eq!(d2.rhos(), data.rhos());
        assert_eq!(l.formula(&formula_json(data.phi()), None).unwrap(), *data.phi());
        assert_eq!(l.pair(&pair_json(data.pair()), None).unwrap().bottom(), data.psi());
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_json("{\n \"a\": }", "x.json").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }
}
