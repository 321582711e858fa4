//! Integral relation families of the Hasse quiver.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{map_subset, HasseQuiver, Path, PathElement, TorsionKind};
use crate::coxeter::Subset;
use crate::error::QuiverError;
use crate::hecke::{alternating, b_coeff};
use crate::poly::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    QuasiIdempotent,
    Sandwich,
    ExtendedBraid,
    RefinedBraid,
    /// The `(q+1)`-multiplied dihedral identities, both parities.
    DihedralHook,
    TorsionA3(u8),
}

impl Family {
    pub fn id(self) -> String {
        match self {
            Family::QuasiIdempotent => "j1".into(),
            Family::Sandwich => "j2".into(),
            Family::ExtendedBraid => "j3".into(),
            Family::RefinedBraid => "refined-braid".into(),
            Family::DihedralHook => "dihedral-hook".into(),
            Family::TorsionA3(k) => format!("t{k}"),
        }
    }

    pub fn is_torsion(self) -> bool {
        matches!(
            self,
            Family::RefinedBraid | Family::DihedralHook | Family::TorsionA3(_)
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub family: Family,
    pub lhs: PathElement,
    pub rhs: PathElement,
}

impl Relation {
    fn new(family: Family, lhs: PathElement, rhs: PathElement) -> Self {
        debug_assert!(lhs.start == rhs.start && lhs.end == rhs.end);
        Relation { family, lhs, rhs }
    }

    pub fn difference(&self) -> PathElement {
        self.lhs.sub(&self.rhs).expect("sides share endpoints")
    }

    pub fn tau(&self) -> Relation {
        Relation::new(self.family, self.lhs.tau(), self.rhs.tau())
    }

    pub fn map(&self, table: &[usize]) -> Relation {
        let f = |s: Subset| map_subset(table, s);
        Relation::new(self.family, self.lhs.map(f), self.rhs.map(f))
    }

    /// Order-insensitive identity of the pair, up to sign of the difference.
    fn key(&self) -> (Family, String) {
        let d = self.difference();
        let neg = d.scale(&IntPoly::from(-1));
        let (a, b) = (d.to_string(), neg.to_string());
        (self.family, if a <= b { a } else { b })
    }

    /// Both sides evaluate to the same hom.
    pub fn holds(&self, q: &HasseQuiver) -> bool {
        q.eval(&self.lhs) == q.eval(&self.rhs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.id(),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} = {}", self.family, self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, Default)]
pub struct RelationSet {
    pub relations: Vec<Relation>,
    /// Number of distinct images of each base relation under (sub)graph
    /// automorphisms and `τ`, keyed by family id.
    pub orbit_sizes: BTreeMap<String, usize>,
}

impl RelationSet {
    pub fn of_family(&self, family: Family) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(move |r| r.family == family)
    }

    /// Every `τ`-image of a relation in a family closed under `τ` is again
    /// in the set.
    pub fn tau_closed(&self) -> bool {
        let keys: BTreeSet<_> = self.relations.iter().map(Relation::key).collect();
        self.relations
            .iter()
            .filter(|r| r.family != Family::ExtendedBraid)
            .all(|r| keys.contains(&r.tau().key()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "relations": self.relations.iter().map(Relation::to_json).collect::<Vec<_>>(),
            "orbit_sizes": self.orbit_sizes,
        })
    }
}

/// Relations of a quiver whose torsion families are not available.
#[derive(Debug)]
pub struct PartialRelations {
    pub relations: RelationSet,
    pub error: QuiverError,
}

fn el(text: &str) -> PathElement {
    PathElement::from_path(Path::parse(text).expect("well-formed relation text"))
}

fn p(path: Path) -> PathElement {
    PathElement::from_path(path)
}

fn sum(parts: Vec<PathElement>) -> PathElement {
    let mut iter = parts.into_iter();
    let first = iter.next().expect("non-empty sum");
    iter.fold(first, |acc, x| acc.add(&x).expect("sides share endpoints"))
}

pub fn quasi_idempotent(q: &HasseQuiver) -> Vec<Relation> {
    let mut out = Vec::new();
    for &j in q.vertices() {
        for s in j.gens() {
            let i = j.without(s);
            let coeff = q
                .hecke()
                .poincare_poly(j)
                .exact_div(&q.hecke().poincare_poly(i))
                .expect("Poincaré polynomial of a parabolic subgroup divides");
            let lhs = p(Path::from_arrows(vec![
                super::Arrow::down(j, i),
                super::Arrow::up(i, j),
            ])
            .unwrap());
            out.push(Relation::new(
                Family::QuasiIdempotent,
                lhs,
                PathElement::trivial(j).scale(&coeff),
            ));
        }
    }
    out
}

pub fn sandwich(q: &HasseQuiver) -> Vec<Relation> {
    use super::Arrow;
    let mut out = Vec::new();
    for &k in q.vertices() {
        let gens: Vec<usize> = k.gens().collect();
        for (x, &a) in gens.iter().enumerate() {
            for &b in &gens[x + 1..] {
                let i = k.without(a).without(b);
                let (j1, j2) = (i.with(a), i.with(b));
                let ups = |j: Subset| Path::from_arrows(vec![Arrow::up(i, j), Arrow::up(j, k)]).unwrap();
                let downs = |j: Subset| Path::from_arrows(vec![Arrow::down(k, j), Arrow::down(j, i)]).unwrap();
                out.push(Relation::new(Family::Sandwich, p(ups(j1)), p(ups(j2))));
                out.push(Relation::new(Family::Sandwich, p(downs(j1)), p(downs(j2))));
            }
        }
    }
    out
}

/// `υ_{∅,I_1} ⋯ υ_{I_{m-1},I} δ_{I,I_{m-1}} ⋯ δ_{I_1,∅} = χ_{I•}` for every
/// ordering of every `I` with at least two generators.
pub fn extended_braid(q: &HasseQuiver) -> Result<Vec<Relation>, QuiverError> {
    let mut out = Vec::new();
    for &set in q.vertices().iter().filter(|s| s.len() >= 2) {
        for order in permutations(&set.gens().collect::<Vec<_>>()) {
            let mut downs = Vec::new();
            let mut cur = Subset::EMPTY;
            for &s in &order {
                downs.push(super::Arrow::down(cur.with(s), cur));
                cur = cur.with(s);
            }
            downs.reverse();
            let down = Path::from_arrows(downs).unwrap();
            let lhs = p(down.tau().compose(&down).unwrap());
            out.push(Relation::new(Family::ExtendedBraid, lhs, q.chi_chain(&order)?));
        }
    }
    Ok(out)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (k, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// `δ_{{a},∅} (Σ_j c_j χ_{[j]t}) υ_{∅,{b}}`, summing over `(c_j, j)`.
fn hooked_sum(a: usize, b: usize, s: usize, t: usize, terms: &[(IntPoly, usize)]) -> PathElement {
    let (sa, sb) = (Subset::singleton(a), Subset::singleton(b));
    let mut out = PathElement::zero(sb, sa);
    for (c, j) in terms {
        let path = Path::down_chain(sa, Subset::EMPTY)
            .compose(&Path::chi_word(&alternating(t, s, *j)))
            .unwrap()
            .compose(&Path::up_chain(Subset::EMPTY, sb))
            .unwrap();
        out.add_term(path, c);
    }
    out
}

/// Refined braid relations and their `(q+1)`-multiplied companions for
/// `I_n`, with `(s,t)` ranging over both orderings.
pub fn dihedral(n: usize) -> (Vec<Relation>, Vec<Relation>) {
    let full = Subset::from_gens([0, 1]);
    let mut refined = Vec::new();
    let mut hooks = Vec::new();
    for (s, t) in [(0usize, 1usize), (1, 0)] {
        let (ss, st) = (Subset::singleton(s), Subset::singleton(t));
        let top = |x: Subset| {
            p(Path::up_chain(x, full)
                .compose(&Path::down_chain(full, ss))
                .unwrap())
        };
        if n.is_multiple_of(2) {
            let terms: Vec<_> = (2..=n).map(|j| (b_coeff(n, j), j - 2)).collect();
            refined.push(Relation::new(Family::RefinedBraid, top(st), hooked_sum(t, s, s, t, &terms)));
            let terms: Vec<_> = (1..=n).map(|j| (b_coeff(n, j), j - 1)).collect();
            hooks.push(Relation::new(
                Family::DihedralHook,
                top(ss).scale(&IntPoly::from_coeffs(&[1, 1])),
                hooked_sum(s, s, s, t, &terms),
            ));
        } else {
            let terms: Vec<_> = (3..=n).map(|j| (b_coeff(n, j), j - 2)).collect();
            let sign = if ((n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
            let corr = PathElement::trivial(ss).scale(&IntPoly::monomial(sign, (n - 1) / 2));
            refined.push(Relation::new(
                Family::RefinedBraid,
                top(ss),
                hooked_sum(s, s, s, t, &terms).add(&corr).unwrap(),
            ));
            let terms: Vec<_> = (1..=n).map(|j| (b_coeff(n, j), j - 1)).collect();
            hooks.push(Relation::new(
                Family::DihedralHook,
                top(st).scale(&IntPoly::from_coeffs(&[1, 1])),
                hooked_sum(t, s, s, t, &terms),
            ));
        }
    }
    (refined, hooks)
}

/// The four base torsion relations of `A3`, with 1-based labels.
pub fn a3_base() -> Vec<Relation> {
    let q = IntPoly::q();
    let qq1 = IntPoly::from_coeffs(&[0, 1, 1]);
    vec![
        Relation::new(
            Family::TorsionA3(1),
            el("d(1,0) x2 u(0,1)"),
            sum(vec![el("u(1,12) d(12,1)"), el("e(1)").scale(&q)]),
        ),
        Relation::new(Family::TorsionA3(2), el("d(1,0) u(0,3)"), el("u(1,13) d(13,3)")),
        Relation::new(
            Family::TorsionA3(3),
            el("d(12,1) u(1,13) d(13,1) u(1,12)"),
            sum(vec![el("u(12,123) d(123,12)"), el("e(12)").scale(&qq1)]),
        ),
        Relation::new(
            Family::TorsionA3(4),
            el("d(12,2) u(2,23) d(23,3) u(3,13)"),
            sum(vec![el("u(12,123) d(123,13)"), el("d(12,1) u(1,13)").scale(&q)]),
        ),
    ]
}

/// All images of `base` under embeddings of its support and `τ`.
pub fn orbit(q: &HasseQuiver, base: &Relation) -> Vec<Relation> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for table in q.embeddings(base.lhs.support().union(base.rhs.support())) {
        let image = base.map(&table);
        for r in [image.clone(), image.tau()] {
            if seen.insert(r.key()) {
                out.push(r);
            }
        }
    }
    out
}

/// The full integral relation list. Torsion families exist for dihedral
/// groups and `A3`; elsewhere the quasi-idempotent, sandwich and extended
/// braid relations are returned inside the error.
pub fn relation_set(q: &HasseQuiver) -> Result<RelationSet, Box<PartialRelations>> {
    let mut set = RelationSet::default();
    let push_family = |set: &mut RelationSet, family: Family, rels: Vec<Relation>| {
        set.orbit_sizes.insert(family.id(), rels.len());
        set.relations.extend(rels);
    };
    push_family(&mut set, Family::QuasiIdempotent, quasi_idempotent(q));
    push_family(&mut set, Family::Sandwich, sandwich(q));
    match extended_braid(q) {
        Ok(r) => push_family(&mut set, Family::ExtendedBraid, r),
        Err(error) => return Err(Box::new(PartialRelations { relations: set, error })),
    }
    match q.kind() {
        TorsionKind::Dihedral(n) => {
            let (refined, hooks) = dihedral(n);
            push_family(&mut set, Family::RefinedBraid, refined);
            push_family(&mut set, Family::DihedralHook, hooks);
        }
        TorsionKind::A3 => {
            for base in a3_base() {
                let rels = orbit(q, &base);
                push_family(&mut set, base.family, rels);
            }
        }
        TorsionKind::Unsupported => {
            return Err(Box::new(PartialRelations {
                relations: set,
                error: QuiverError::UnsupportedTorsion,
            }))
        }
    }
    Ok(set)
}
