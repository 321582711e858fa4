//! The Hasse quiver of the parabolic subsets and its evaluation into the
//! endomorphism algebra.

mod path;
pub mod relations;
pub mod rewrite;
pub mod standard;

pub use path::{Arrow, Path, PathElement};
pub use relations::{Family, Relation, RelationSet};
pub use rewrite::{random_path, Rewriter};
pub use standard::{SpanningReport, StandardPaths};

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::coxeter::{CoxeterSystem, Subset};
use crate::endo::{EndoAlgebra, HomElement, RHom};
use crate::error::QuiverError;
use crate::hecke::{HeckeAlgebra, HeckeElement};
use crate::poly::IntPoly;

/// Which torsion relations and standard paths are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorsionKind {
    /// Rank 2 with `m(s,t) = n`.
    Dihedral(usize),
    A3,
    Unsupported,
}

pub struct HasseQuiver {
    endo: EndoAlgebra,
    vertices: Vec<Subset>,
    arrows: Vec<Arrow>,
    h_cache: RwLock<HashMap<(Subset, Subset), Arc<HeckeElement>>>,
}

impl HasseQuiver {
    pub fn new(endo: EndoAlgebra) -> Self {
        let vertices = Subset::all(endo.system().rank());
        let mut arrows = Vec::new();
        for &big in &vertices {
            for s in big.gens() {
                let small = big.without(s);
                arrows.push(Arrow::up(small, big));
                arrows.push(Arrow::down(big, small));
            }
        }
        arrows.sort();
        HasseQuiver {
            endo,
            vertices,
            arrows,
            h_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn from_system(sys: Arc<CoxeterSystem>) -> Self {
        Self::new(EndoAlgebra::new(HeckeAlgebra::new(sys)))
    }

    pub fn endo(&self) -> &EndoAlgebra {
        &self.endo
    }

    pub fn hecke(&self) -> &HeckeAlgebra {
        self.endo.hecke()
    }

    pub fn system(&self) -> &CoxeterSystem {
        self.endo.system()
    }

    pub fn vertices(&self) -> &[Subset] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrows_from(&self, v: Subset) -> impl Iterator<Item = Arrow> + '_ {
        self.arrows.iter().copied().filter(move |a| a.source() == v)
    }

    pub fn kind(&self) -> TorsionKind {
        let sys = self.system();
        match sys.rank() {
            2 => TorsionKind::Dihedral(sys.m(0, 1) as usize),
            3 if sys.m(0, 1) == 3 && sys.m(1, 2) == 3 && sys.m(0, 2) == 2 => TorsionKind::A3,
            _ => TorsionKind::Unsupported,
        }
    }

    fn h_elem(&self, big: Subset, small: Subset) -> Arc<HeckeElement> {
        if let Some(h) = self.h_cache.read().unwrap().get(&(big, small)) {
            return h.clone();
        }
        let h = Arc::new(self.hecke().h_elem(big, small));
        self.h_cache
            .write()
            .unwrap()
            .insert((big, small), h.clone());
        h
    }

    /// Evaluates `υ ↦ u`, `δ ↦ d'`. Inclusions keep the value and each
    /// `δ_{J,I}` multiplies it on the left by `h_{J,I}`.
    pub fn eval_path(&self, p: &Path) -> HomElement {
        let mut value = self.hecke().x_subset(p.start);
        for a in p.arrows.iter().rev() {
            if let Arrow::Down { big, small } = *a {
                value = self.hecke().t_mul(&self.h_elem(big, small), &value);
            }
        }
        HomElement {
            source: p.start,
            target: p.end,
            value,
        }
    }

    /// Reference evaluation composing generator homs one at a time.
    pub fn eval_path_composed(&self, p: &Path) -> Result<HomElement, QuiverError> {
        let mut acc = self.endo.identity(p.start);
        for a in p.arrows.iter().rev() {
            let g = match *a {
                Arrow::Up { small, big } => self.endo.gen_u(small, big)?,
                Arrow::Down { big, small } => self.endo.gen_dprime(big, small)?,
            };
            acc = self.endo.compose(&g, &acc)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, e: &PathElement) -> HomElement {
        let mut value = HeckeElement::zero();
        for (p, c) in &e.terms {
            value = value.add(&self.eval_path(p).value.scale(c));
        }
        HomElement {
            source: e.start,
            target: e.end,
            value,
        }
    }

    /// Evaluation over the localized ring: `δ_{J,I} ↦ d_{J,I} = (π(I)/π(J)) d'_{J,I}`.
    pub fn eval_r_path(&self, p: &Path) -> RHom {
        let (mut num, mut den) = (IntPoly::one(), IntPoly::one());
        for a in &p.arrows {
            if let Arrow::Down { big, small } = *a {
                num = num * self.hecke().poincare_poly(small);
                den = den * self.hecke().poincare_poly(big);
            }
        }
        RHom::from_hom(self.eval_path(p)).scale(&num, &den)
    }

    /// `Σ (num/den)·path` evaluated over the localized ring.
    pub fn eval_r(&self, terms: &[(IntPoly, IntPoly, Path)], start: Subset, end: Subset) -> RHom {
        terms.iter().fold(
            RHom::from_hom(HomElement::zero(start, end)),
            |acc, (num, den, p)| {
                acc.add(&self.eval_r_path(p).scale(num, den))
                    .expect("endpoints agree")
            },
        )
    }

    /// `χ_{I•}` for the ordering `order` of `I`: the generator expansion of
    /// `x_I` with each `x_s` replaced by `χ_s`.
    pub fn chi_chain(&self, order: &[usize]) -> Result<PathElement, QuiverError> {
        let mut chain = Vec::new();
        let mut cur = Subset::EMPTY;
        for &s in order {
            cur = cur.with(s);
            chain.push(cur);
        }
        let exp = self.hecke().kl_generator_expansion(&chain)?;
        let mut out = PathElement::from_path(Path::chi_word(&exp.word));
        for (pos, a) in &exp.corrections {
            out.add_term(Path::chi_word(&exp.subword(pos)), &(IntPoly::q() * a));
        }
        Ok(out)
    }

    /// True when `υ_{∅,J} p δ_{I,∅}` evaluates to zero for `p: I → J`, i.e.
    /// `p` is torsion.
    pub fn torsion_check(&self, p: &PathElement) -> bool {
        let wrapped = PathElement::compose_all(&[
            PathElement::from_path(Path::up_chain(Subset::EMPTY, p.end)),
            p.clone(),
            PathElement::from_path(Path::down_chain(p.start, Subset::EMPTY)),
        ])
        .expect("endpoints agree");
        self.eval(&wrapped).value.is_zero()
    }

    /// Injective maps from the generators of `support` into `S` that preserve
    /// the Coxeter matrix, each as a table indexed by generator.
    pub fn embeddings(&self, support: Subset) -> Vec<Vec<usize>> {
        let sys = self.system();
        let gens: Vec<usize> = support.gens().collect();
        let mut out = Vec::new();
        let mut image = Vec::new();
        fn go(
            sys: &CoxeterSystem,
            gens: &[usize],
            image: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            let k = image.len();
            if k == gens.len() {
                let mut table: Vec<usize> = (0..sys.rank()).collect();
                for (g, i) in gens.iter().zip(image.iter()) {
                    table[*g] = *i;
                }
                out.push(table);
                return;
            }
            for cand in 0..sys.rank() {
                if image.contains(&cand) {
                    continue;
                }
                if (0..k).all(|j| sys.m(gens[j], gens[k]) == sys.m(image[j], cand)) {
                    image.push(cand);
                    go(sys, gens, image, out);
                    image.pop();
                }
            }
        }
        go(sys, &gens, &mut image, &mut out);
        out
    }

    /// Automorphisms of the Coxeter graph.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        self.embeddings(self.system().full_set())
    }
}

/// Applies a generator map to a subset.
pub fn map_subset(table: &[usize], set: Subset) -> Subset {
    Subset::from_gens(set.gens().map(|g| table[g]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiver(ty: &str) -> HasseQuiver {
        HasseQuiver::from_system(Arc::new(CoxeterSystem::from_type(ty).unwrap()))
    }

    #[test]
    fn shape() {
        let q = quiver("A3");
        assert_eq!(q.vertices().len(), 8);
        assert_eq!(q.arrows().len(), 2 * 12);
        assert_eq!(q.kind(), TorsionKind::A3);
        assert_eq!(quiver("I2(5)").kind(), TorsionKind::Dihedral(5));
        assert_eq!(quiver("B3").kind(), TorsionKind::Unsupported);
        assert_eq!(q.automorphisms().len(), 2);
        assert_eq!(q.embeddings(Subset::from_gens([0, 1])).len(), 4);
    }

    #[test]
    fn fast_eval_matches_composition() {
        let q = quiver("A3");
        for text in [
            "d(1,0) x2 u(0,13)",
            "u(1,12) d(12,2) u(2,23) d(23,3)",
            "d(123,12) u(12,123)",
            "x1 x2 x3 x2",
        ] {
            let p = Path::parse(text).unwrap();
            assert_eq!(q.eval_path(&p), q.eval_path_composed(&p).unwrap(), "{text}");
        }
    }

    #[test]
    fn chi_evaluates_to_left_multiplication() {
        let q = quiver("A2");
        let v = q.eval_path(&Path::chi(0)).value;
        assert_eq!(v, q.hecke().x_word(&[0]));
        let v = q.eval_path(&Path::chi_word(&[0, 1])).value;
        assert_eq!(v, q.hecke().x_word(&[0, 1]));
    }

    #[test]
    fn chi_chain_evaluates_to_xi() {
        let q = quiver("A3");
        let c = q.chi_chain(&[1, 0, 2]).unwrap();
        assert_eq!(q.eval(&c).value, q.hecke().x_subset(q.system().full_set()));
    }

    #[test]
    fn torsion_relation_difference() {
        let q = quiver("A3");
        let lhs = PathElement::from_path(Path::parse("d(1,0) x2 u(0,1)").unwrap());
        let rhs = PathElement::from_path(Path::parse("u(1,12) d(12,1)").unwrap())
            .add(&PathElement::trivial(Subset::singleton(0)).scale(&IntPoly::q()))
            .unwrap();
        let diff = lhs.sub(&rhs).unwrap();
        assert!(q.torsion_check(&diff));
        assert!(q.eval(&diff).value.is_zero());
        assert!(!q.torsion_check(&lhs));
    }

    #[test]
    fn r_level_quasi_idempotent() {
        let q = quiver("B2");
        let p = Path::parse("d(1,0) u(0,1)").unwrap();
        let r = q.eval_r_path(&p);
        assert!(r.equals(&RHom::from_hom(q.endo().identity(Subset::singleton(0)))));
    }
}
