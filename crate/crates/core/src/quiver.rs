//! Path algebras of quivers with relations, truncated at a path-length cap.
//!
//! Paths compose left to right: `pq` means `p` then `q`, so a right module
//! assigns to an arrow `i -> j` a map from the vertex-`i` part to the vertex-`j` part.

use crate::algebra::{Algebra, AlgebraData, QuiverInfo};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{unit_vec, Echelon, Mat};
use crate::module::Module;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

/// A relation term: coefficient times a path written as arrow labels.
pub type Term<E> = (E, Vec<String>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverSpec<F: Field> {
    pub field: F,
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Vec<Term<F::Elem>>>,
    pub cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Path {
    source: usize,
    target: usize,
    arrows: Vec<usize>,
}

impl<F: Field> QuiverSpec<F> {
    pub fn new(field: F, vertices: usize, arrows: &[(usize, usize, &str)], cap: usize) -> Self {
        QuiverSpec {
            field,
            vertices,
            arrows: arrows
                .iter()
                .map(|&(s, t, l)| Arrow { source: s, target: t, label: l.to_string() })
                .collect(),
            relations: Vec::new(),
            cap,
        }
    }

    pub fn with_relation(mut self, terms: Vec<Term<F::Elem>>) -> Self {
        self.relations.push(terms);
        self
    }

    fn arrow_index(&self, label: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.label == label)
            .ok_or_else(|| Error::InvalidInput(format!("unknown arrow {label:?}")))
    }

    fn resolve(&self, labels: &[String]) -> Result<Path> {
        if labels.is_empty() {
            return Err(Error::InvalidInput("relation terms must be paths of length >= 2".into()));
        }
        let arrows = labels.iter().map(|l| self.arrow_index(l)).collect::<Result<Vec<_>>>()?;
        for w in arrows.windows(2) {
            if self.arrows[w[0]].target != self.arrows[w[1]].source {
                return Err(Error::InvalidInput(format!("path {labels:?} is not composable")));
            }
        }
        Ok(Path {
            source: self.arrows[arrows[0]].source,
            target: self.arrows[*arrows.last().unwrap()].target,
            arrows,
        })
    }

    fn all_paths(&self) -> Vec<Path> {
        let mut out: Vec<Path> =
            (0..self.vertices).map(|v| Path { source: v, target: v, arrows: vec![] }).collect();
        let mut layer: Vec<Path> = (0..self.arrows.len())
            .map(|a| Path {
                source: self.arrows[a].source,
                target: self.arrows[a].target,
                arrows: vec![a],
            })
            .collect();
        for _ in 1..=self.cap {
            let mut next = Vec::new();
            for p in &layer {
                for (a, arr) in self.arrows.iter().enumerate() {
                    if arr.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(a);
                        next.push(Path { source: p.source, target: arr.target, arrows });
                    }
                }
            }
            out.append(&mut layer);
            layer = next;
        }
        out.retain(|p| p.arrows.len() <= self.cap);
        out
    }
}

fn combine(p: &Path, q: &Path) -> Option<Path> {
    if p.target != q.source {
        return None;
    }
    let mut arrows = p.arrows.clone();
    arrows.extend_from_slice(&q.arrows);
    Some(Path { source: p.source, target: q.target, arrows })
}

/// Builds the path algebra modulo the relations, with path-residue basis.
///
/// The ideal is spanned by `u r w` for paths `u, w` and relations `r`, with
/// terms longer than the cap discarded; every path of length exactly `cap`
/// must lie in it.
pub fn algebra_from_quiver<F: Field>(q: &QuiverSpec<F>) -> Result<Algebra<F>> {
    let f = q.field.clone();
    if q.vertices == 0 {
        return Err(Error::InvalidInput("a quiver needs at least one vertex".into()));
    }
    if q.cap == 0 {
        return Err(Error::InvalidInput("path-length cap must be positive".into()));
    }
    for a in &q.arrows {
        if a.source >= q.vertices || a.target >= q.vertices {
            return Err(Error::InvalidInput(format!("arrow {} has a bad endpoint", a.label)));
        }
    }
    let mut relations = Vec::new();
    for rel in &q.relations {
        let mut terms = Vec::new();
        for (c, labels) in rel {
            let p = q.resolve(labels)?;
            if p.arrows.len() < 2 {
                return Err(Error::InvalidInput(format!(
                    "relation term {labels:?} has length < 2"
                )));
            }
            terms.push((c.clone(), p));
        }
        if let Some((_, first)) = terms.first() {
            if terms.iter().any(|(_, p)| p.source != first.source || p.target != first.target) {
                return Err(Error::InvalidInput("relation terms are not parallel".into()));
            }
        }
        relations.push(terms);
    }

    // Coordinates ordered longest path first so that echelon pivots land on
    // long paths and short paths survive as basis representatives.
    let mut paths = q.all_paths();
    paths.sort_by_key(|p| std::cmp::Reverse(p.arrows.len()));
    let index = |p: &Path| paths.iter().position(|x| x == p);
    let np = paths.len();

    let mut ideal = Echelon::new(f.clone(), np);
    for rel in &relations {
        let Some(first) = rel.first().map(|t| &t.1) else { continue };
        for u in paths.iter().filter(|u| u.target == first.source) {
            for w in paths.iter().filter(|w| w.source == first.target) {
                let mut v = vec![f.zero(); np];
                let mut any = false;
                for (c, p) in rel {
                    let full = combine(&combine(u, p).unwrap(), w).unwrap();
                    if let Some(i) = index(&full) {
                        v[i] = f.add(&v[i], c);
                        any = true;
                    }
                }
                if any {
                    ideal.insert(&v);
                }
            }
        }
    }
    for (i, p) in paths.iter().enumerate() {
        if p.arrows.len() == q.cap && !ideal.contains(&unit_vec(&f, np, i)) {
            let labels: Vec<&str> = p.arrows.iter().map(|&a| q.arrows[a].label.as_str()).collect();
            return Err(Error::NotAdmissible {
                cap: q.cap,
                detail: format!("path {} of cap length is nonzero", labels.join("")),
            });
        }
    }
    let ideal = ideal.into_subspace();
    let pivots: Vec<bool> = (0..np).map(|i| ideal.pivots().contains(&i)).collect();
    let mut basis: Vec<usize> = (0..np).filter(|&i| !pivots[i]).collect();
    basis.sort_by(|&a, &b| {
        let (pa, pb) = (&paths[a], &paths[b]);
        (pa.arrows.len(), pa.source, &pa.arrows).cmp(&(pb.arrows.len(), pb.source, &pb.arrows))
    });
    let n = basis.len();
    let coord_of: Vec<Option<usize>> =
        (0..np).map(|i| basis.iter().position(|&b| b == i)).collect();

    // Normal form of a path coordinate vector in the residue basis.
    let normal_form = |v: &[F::Elem]| -> Vec<F::Elem> {
        let r = ideal.reduce(v);
        let mut out = vec![f.zero(); n];
        for (i, x) in r.iter().enumerate() {
            if !f.is_zero(x) {
                let c = coord_of[i].expect("reduced vectors vanish on pivots");
                out[c] = x.clone();
            }
        }
        out
    };

    let mut mul = vec![vec![vec![f.zero(); n]; n]; n];
    for (i, &bi) in basis.iter().enumerate() {
        for (j, &bj) in basis.iter().enumerate() {
            if let Some(pq) = combine(&paths[bi], &paths[bj]) {
                if let Some(k) = index(&pq) {
                    mul[i][j] = normal_form(&unit_vec(&f, np, k));
                }
            }
        }
    }
    let single = q.arrows.iter().all(|a| a.label.chars().count() == 1);
    let labels: Vec<String> = basis
        .iter()
        .map(|&b| {
            let p = &paths[b];
            if p.arrows.is_empty() {
                format!("e{}", p.source + 1)
            } else {
                let parts: Vec<&str> =
                    p.arrows.iter().map(|&a| q.arrows[a].label.as_str()).collect();
                parts.join(if single { "" } else { "*" })
            }
        })
        .collect();
    let idempotents: Vec<usize> = (0..q.vertices)
        .map(|v| {
            basis
                .iter()
                .position(|&b| paths[b].arrows.is_empty() && paths[b].source == v)
                .expect("trivial paths are never in the ideal")
        })
        .collect();
    let mut one = vec![f.zero(); n];
    for &e in &idempotents {
        one[e] = f.one();
    }
    let mut arrows = Vec::new();
    for (a, arr) in q.arrows.iter().enumerate() {
        let p = Path { source: arr.source, target: arr.target, arrows: vec![a] };
        let k = index(&p).expect("arrows have length 1 <= cap");
        match coord_of[k] {
            Some(c) => arrows.push((arr.source, arr.target, c)),
            None => {
                return Err(Error::InvalidInput(format!(
                    "arrow {} lies in the relation ideal",
                    arr.label
                )))
            }
        }
    }
    let info = QuiverInfo {
        vertices: q.vertices,
        idempotents,
        arrows,
        paths: basis.iter().map(|&b| paths[b].arrows.clone()).collect(),
    };
    Algebra::with_quiver(AlgebraData { field: f, labels, one, mul }, Some(info))
}

fn starts(dims: &[usize]) -> Vec<usize> {
    dims.iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect()
}

/// The module of a representation: `dims[v]` at vertex `v`, `maps[a]` a `dims[src] x dims[tgt]`
/// matrix for arrow `a`. Basis vectors are grouped by vertex in vertex order.
pub fn representation<F: Field>(alg: &Algebra<F>, dims: &[usize], maps: &[Mat<F>]) -> Result<Module<F>> {
    let q = alg
        .quiver()
        .ok_or_else(|| Error::InvalidInput("algebra has no quiver presentation".into()))?;
    let f = alg.field().clone();
    if dims.len() != q.vertices || maps.len() != q.arrows.len() {
        return Err(Error::DimensionMismatch("representation shape differs from the quiver".into()));
    }
    for (m, &(s, t, _)) in maps.iter().zip(&q.arrows) {
        if m.rows() != dims[s] || m.cols() != dims[t] {
            return Err(Error::DimensionMismatch("arrow matrix has the wrong shape".into()));
        }
    }
    let offset = starts(dims);
    let n: usize = dims.iter().sum();
    let mut actions = Vec::with_capacity(alg.dim());
    for (b, path) in q.paths.iter().enumerate() {
        let mut act = Mat::zeros(f.clone(), n, n);
        let (src, tgt, block) = if path.is_empty() {
            let v = q.idempotents.iter().position(|&e| e == b).expect("trivial path is an idempotent");
            (v, v, Mat::identity(f.clone(), dims[v]))
        } else {
            let mut m = maps[path[0]].clone();
            for &a in &path[1..] {
                m = m.mul(&maps[a])?;
            }
            (q.arrows[path[0]].0, q.arrows[*path.last().unwrap()].1, m)
        };
        for i in 0..dims[src] {
            for j in 0..dims[tgt] {
                act.set(offset[src] + i, offset[tgt] + j, block.get(i, j).clone());
            }
        }
        actions.push(act);
    }
    Module::new(alg.clone(), n, actions)
}

/// Vertex dimensions and arrow matrices of a module whose idempotents act diagonally
/// in vertex order, as produced by [`representation`].
pub fn as_representation<F: Field>(m: &Module<F>) -> Option<(Vec<usize>, Vec<Mat<F>>)> {
    let q = m.algebra().quiver()?;
    let dims: Vec<usize> = q.idempotents.iter().map(|&e| m.action(e).rank()).collect();
    let mut offset = 0;
    for (v, &e) in q.idempotents.iter().enumerate() {
        let expect = Mat::block_diag(
            m.field().clone(),
            &[
                &Mat::zeros(m.field().clone(), offset, offset),
                &Mat::identity(m.field().clone(), dims[v]),
                &Mat::zeros(m.field().clone(), m.dim() - offset - dims[v], m.dim() - offset - dims[v]),
            ],
        );
        if m.action(e) != &expect {
            return None;
        }
        offset += dims[v];
    }
    let starts = starts(&dims);
    let maps = q
        .arrows
        .iter()
        .map(|&(s, t, b)| m.action(b).block(starts[s], starts[s] + dims[s], starts[t], starts[t] + dims[t]))
        .collect();
    Some((dims, maps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn kronecker_has_four_basis_elements() {
        let q = QuiverSpec::new(Rationals, 2, &[(0, 1, "a"), (0, 1, "b")], 2);
        let k = algebra_from_quiver(&q).unwrap();
        assert_eq!(k.dim(), 4);
        assert_eq!(k.labels(), &["e1", "e2", "a", "b"]);
        let m = k.regular_module();
        let sum = m.action(0).add(m.action(1)).unwrap();
        assert!(sum.is_identity());
    }

    #[test]
    fn three_kronecker_dim_five() {
        let q = QuiverSpec::new(Rationals, 2, &[(0, 1, "a"), (0, 1, "b"), (0, 1, "c")], 2);
        assert_eq!(algebra_from_quiver(&q).unwrap().dim(), 5);
    }

    #[test]
    fn loop_with_square_zero() {
        let f2 = PrimeField::new(2).unwrap();
        let q = QuiverSpec::new(f2, 1, &[(0, 0, "x")], 2)
            .with_relation(vec![(1, vec!["x".into(), "x".into()])]);
        let a = algebra_from_quiver(&q).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.labels(), &["e1", "x"]);
        assert!(a.is_zero_elem(a.mul_basis(1, 1)));
    }

    #[test]
    fn free_loop_is_not_admissible() {
        let q = QuiverSpec::new(Rationals, 1, &[(0, 0, "x")], 3);
        assert!(matches!(algebra_from_quiver(&q), Err(Error::NotAdmissible { cap: 3, .. })));
    }

    #[test]
    fn commutative_square() {
        // 1 -a-> 2 -c-> 4, 1 -b-> 3 -d-> 4 with ac = bd.
        let q = QuiverSpec::new(
            Rationals,
            4,
            &[(0, 1, "a"), (0, 2, "b"), (1, 3, "c"), (2, 3, "d")],
            3,
        )
        .with_relation(vec![
            (Rationals.one(), vec!["a".into(), "c".into()]),
            (Rationals.from_i64(-1), vec!["b".into(), "d".into()]),
        ]);
        let a = algebra_from_quiver(&q).unwrap();
        assert_eq!(a.dim(), 9);
    }

    #[test]
    fn representation_roundtrip() {
        let f2 = PrimeField::new(2).unwrap();
        let k = algebra_from_quiver(&QuiverSpec::new(f2, 2, &[(0, 1, "a"), (0, 1, "b")], 2)).unwrap();
        let a = Mat::from_i64(f2, &[&[1, 0], &[0, 1]]);
        let b = Mat::from_i64(f2, &[&[0, 1], &[0, 0]]);
        let m = representation(&k, &[2, 2], &[a.clone(), b.clone()]).unwrap();
        assert_eq!(m.dim(), 4);
        let (dims, maps) = as_representation(&m).unwrap();
        assert_eq!(dims, vec![2, 2]);
        assert_eq!(maps, vec![a, b]);
        assert!(representation(&k, &[1, 2], &[Mat::zeros(f2, 2, 2), Mat::zeros(f2, 2, 2)]).is_err());
    }
}
