//! Reduction of paths to combinations of standard paths.
//!
//! A path is read right to left starting from the trivial path at its source.
//! Each arrow is prepended to the current standard combination; a product
//! that is not itself standard is replaced by its expansion in the standard
//! paths of the new vertex pair. Expansions are computed once from the
//! coefficient matrix of the standard paths, cached as rules, and applied
//! only when all coefficients lie in `Z[q]`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::Rng;

use super::standard::{coefficient_matrix, inverse};
use super::{Arrow, HasseQuiver, Path, PathElement, StandardPaths};
use crate::coxeter::Subset;
use crate::error::QuiverError;
use crate::poly::Frac;

/// One rule application, printed as `ext(<arrow>|<standard path>) @ <position>`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TraceStep {
    pub rule: String,
    /// Index of the arrow in the input path, counted from the left.
    pub position: usize,
}

impl std::fmt::Display for TraceStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} @ {}", self.rule, self.position)
    }
}

type Solver = Arc<Option<Vec<Vec<Frac>>>>;

pub struct Rewriter<'a> {
    quiver: &'a HasseQuiver,
    std: StandardPaths,
    solvers: RwLock<HashMap<(Subset, Subset), Solver>>,
    rules: RwLock<HashMap<(Arrow, Path), Arc<PathElement>>>,
}

impl<'a> Rewriter<'a> {
    pub fn new(quiver: &'a HasseQuiver) -> Result<Self, QuiverError> {
        Ok(Rewriter {
            std: StandardPaths::new(quiver)?,
            quiver,
            solvers: RwLock::new(HashMap::new()),
            rules: RwLock::new(HashMap::new()),
        })
    }

    pub fn standard(&self) -> &StandardPaths {
        &self.std
    }

    pub fn rule_count(&self) -> usize {
        self.rules.read().unwrap().len()
    }

    fn solver(&self, j: Subset, i: Subset) -> Solver {
        if let Some(s) = self.solvers.read().unwrap().get(&(j, i)) {
            return s.clone();
        }
        let paths = self.std.get(j, i);
        let m = coefficient_matrix(self.quiver, j, i, paths);
        let square = m.len() == m.first().map_or(0, Vec::len);
        let s = Arc::new(if square { inverse(&m) } else { None });
        self.solvers.write().unwrap().insert((j, i), s.clone());
        s
    }

    /// Expands an arbitrary path in the standard paths of its endpoints.
    pub fn expand(&self, p: &Path) -> Result<PathElement, QuiverError> {
        let stuck = || QuiverError::StuckPath(p.to_string());
        let (j, i) = (p.end, p.start);
        let solver = self.solver(j, i);
        let inv = solver.as_ref().as_ref().ok_or_else(stuck)?;
        let reps = self.quiver.system().double_coset_reps(j, i);
        let value = self.quiver.eval_path(p).value;
        let v: Vec<Frac> = reps
            .iter()
            .map(|&d| Frac::from_poly(value.coeff(d)))
            .collect();
        let mut out = PathElement::zero(i, j);
        for (k, path) in self.std.get(j, i).iter().enumerate() {
            let c = v
                .iter()
                .zip(inv.iter())
                .fold(Frac::zero(), |acc, (x, row)| acc.add(&x.mul(&row[k])));
            let c = c.as_poly().ok_or_else(stuck)?;
            out.add_term(path.clone(), &c);
        }
        Ok(out)
    }

    fn rule(&self, a: Arrow, b: &Path) -> Result<Arc<PathElement>, QuiverError> {
        let key = (a, b.clone());
        if let Some(r) = self.rules.read().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let r = Arc::new(self.expand(&b.then(a)?)?);
        self.rules.write().unwrap().insert(key, r.clone());
        Ok(r)
    }

    pub fn rewrite_path(&self, p: &Path) -> Result<(PathElement, Vec<TraceStep>), QuiverError> {
        let mut cur = PathElement::trivial(p.start);
        let mut trace = Vec::new();
        for (pos, &a) in p.arrows.iter().enumerate().rev() {
            let mut next = PathElement::zero(p.start, a.target());
            for (b, c) in &cur.terms {
                let prod = b.then(a)?;
                if self.std.contains(&prod) {
                    next.add_term(prod, c);
                    continue;
                }
                let r = self.rule(a, b)?;
                trace.push(TraceStep {
                    rule: format!("ext({a}|{b})"),
                    position: pos,
                });
                next = next.add(&r.scale(c))?;
            }
            cur = next;
        }
        Ok((cur, trace))
    }

    /// A combination of standard paths equal to `p` in the quotient by the
    /// relation ideal, with the rule applications used.
    pub fn rewrite_to_standard(
        &self,
        p: &PathElement,
    ) -> Result<(PathElement, Vec<TraceStep>), QuiverError> {
        let mut out = PathElement::zero(p.start, p.end);
        let mut trace = Vec::new();
        for (path, c) in &p.terms {
            let (r, t) = self.rewrite_path(path)?;
            out = out.add(&r.scale(c))?;
            trace.extend(t);
        }
        Ok((out, trace))
    }

    pub fn is_standard(&self, p: &PathElement) -> bool {
        p.terms.keys().all(|path| self.std.contains(path))
    }
}

/// A random walk of length at most `max_len` from a random vertex.
pub fn random_path<R: Rng>(q: &HasseQuiver, max_len: usize, rng: &mut R) -> Path {
    let vertices = q.vertices();
    let start = vertices[rng.gen_range(0..vertices.len())];
    let len = rng.gen_range(0..=max_len);
    let mut p = Path::trivial(start);
    for _ in 0..len {
        let options: Vec<Arrow> = q.arrows_from(p.end).collect();
        let a = options[rng.gen_range(0..options.len())];
        p = p.then(a).expect("arrow starts at the path end");
    }
    p
}
