//! Paths in the Hasse quiver and their `Z[q]`-linear combinations.
//!
//! Paths are written as compositions: the rightmost arrow is traversed first.

use std::collections::BTreeMap;
use std::fmt;

use crate::coxeter::Subset;
use crate::error::QuiverError;
use crate::poly::IntPoly;

/// An arrow of the Hasse quiver for a covering pair `small ⊏ big`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Arrow {
    /// `υ_{small,big}`: from `big` to `small`.
    Up { small: Subset, big: Subset },
    /// `δ_{big,small}`: from `small` to `big`.
    Down { big: Subset, small: Subset },
}

impl Arrow {
    pub fn up(small: Subset, big: Subset) -> Arrow {
        Arrow::Up { small, big }
    }

    pub fn down(big: Subset, small: Subset) -> Arrow {
        Arrow::Down { big, small }
    }

    pub fn source(self) -> Subset {
        match self {
            Arrow::Up { big, .. } => big,
            Arrow::Down { small, .. } => small,
        }
    }

    pub fn target(self) -> Subset {
        match self {
            Arrow::Up { small, .. } => small,
            Arrow::Down { big, .. } => big,
        }
    }

    /// The anti-involution swapping `υ_{I,J}` and `δ_{J,I}`.
    pub fn tau(self) -> Arrow {
        match self {
            Arrow::Up { small, big } => Arrow::Down { big, small },
            Arrow::Down { big, small } => Arrow::Up { small, big },
        }
    }

    pub fn map(self, f: impl Fn(Subset) -> Subset) -> Arrow {
        match self {
            Arrow::Up { small, big } => Arrow::Up {
                small: f(small),
                big: f(big),
            },
            Arrow::Down { big, small } => Arrow::Down {
                big: f(big),
                small: f(small),
            },
        }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arrow::Up { small, big } => write!(f, "u({},{})", small.label(), big.label()),
            Arrow::Down { big, small } => write!(f, "d({},{})", big.label(), small.label()),
        }
    }
}

/// A path with explicit endpoints; `arrows` is empty for a trivial path.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Path {
    pub start: Subset,
    pub end: Subset,
    pub arrows: Vec<Arrow>,
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// ShortLex on arrow sequences, then endpoints.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.arrows.len(), &self.arrows, self.start, self.end).cmp(&(
            other.arrows.len(),
            &other.arrows,
            other.start,
            other.end,
        ))
    }
}

impl Path {
    pub fn trivial(k: Subset) -> Path {
        Path {
            start: k,
            end: k,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(a: Arrow) -> Path {
        Path {
            start: a.source(),
            end: a.target(),
            arrows: vec![a],
        }
    }

    /// Builds a path from arrows written left to right, checking composability.
    pub fn from_arrows(arrows: Vec<Arrow>) -> Result<Path, QuiverError> {
        let (first, last) = match (arrows.first(), arrows.last()) {
            (Some(f), Some(l)) => (*f, *l),
            _ => return Err(QuiverError::NotComposable),
        };
        for w in arrows.windows(2) {
            if w[1].target() != w[0].source() {
                return Err(QuiverError::NotComposable);
            }
        }
        Ok(Path {
            start: last.source(),
            end: first.target(),
            arrows,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self · other`: traverse `other` first.
    pub fn compose(&self, other: &Path) -> Result<Path, QuiverError> {
        if other.end != self.start {
            return Err(QuiverError::NotComposable);
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Ok(Path {
            start: other.start,
            end: self.end,
            arrows,
        })
    }

    /// Prepends an arrow, i.e. traverses it last.
    pub fn then(&self, a: Arrow) -> Result<Path, QuiverError> {
        Path::arrow(a).compose(self)
    }

    pub fn tau(&self) -> Path {
        Path {
            start: self.end,
            end: self.start,
            arrows: self.arrows.iter().rev().map(|a| a.tau()).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Subset) -> Subset + Copy) -> Path {
        Path {
            start: f(self.start),
            end: f(self.end),
            arrows: self.arrows.iter().map(|a| a.map(f)).collect(),
        }
    }

    /// Every vertex visited.
    pub fn vertices(&self) -> Vec<Subset> {
        let mut v = vec![self.start];
        for a in self.arrows.iter().rev() {
            v.push(a.target());
        }
        v
    }

    /// Canonical path from `small` to `big` (`small ⊆ big`), adding generators
    /// in increasing order.
    pub fn down_chain(big: Subset, small: Subset) -> Path {
        let mut arrows = Vec::new();
        let mut cur = small;
        for s in big.difference(small).gens() {
            arrows.push(Arrow::down(cur.with(s), cur));
            cur = cur.with(s);
        }
        arrows.reverse();
        Path {
            start: small,
            end: big,
            arrows,
        }
    }

    /// Canonical path from `big` to `small`: the reverse of [`Path::down_chain`].
    pub fn up_chain(small: Subset, big: Subset) -> Path {
        Path::down_chain(big, small).tau()
    }

    /// `χ_s = υ_{∅,{s}} δ_{{s},∅}`.
    pub fn chi(s: usize) -> Path {
        let t = Subset::singleton(s);
        Path {
            start: Subset::EMPTY,
            end: Subset::EMPTY,
            arrows: vec![Arrow::up(Subset::EMPTY, t), Arrow::down(t, Subset::EMPTY)],
        }
    }

    /// `χ_{s_1} ⋯ χ_{s_k}` at the vertex `∅`.
    pub fn chi_word(word: &[usize]) -> Path {
        Path {
            start: Subset::EMPTY,
            end: Subset::EMPTY,
            arrows: word.iter().flat_map(|&s| Path::chi(s).arrows).collect(),
        }
    }

    /// Parses the notation produced by `Display`: tokens `u(I,J)`, `d(J,I)`,
    /// `e(K)` and `x<s>` separated by spaces, with subsets written as 1-based
    /// digit strings and `0` for the empty set. `u`/`d` with non-covering
    /// subsets expand to canonical chains.
    pub fn parse(text: &str) -> Result<Path, QuiverError> {
        let err = |m: &str| QuiverError::Parse(text.to_string(), m.to_string());
        let mut pieces: Vec<Path> = Vec::new();
        for tok in text.split_whitespace() {
            if let Some(rest) = tok.strip_prefix('x') {
                let s: usize = rest.parse().map_err(|_| err("bad generator"))?;
                if s == 0 {
                    return Err(err("generators are 1-based"));
                }
                pieces.push(Path::chi(s - 1));
                continue;
            }
            let (kind, args) = tok
                .split_once('(')
                .and_then(|(k, a)| a.strip_suffix(')').map(|a| (k, a)))
                .ok_or_else(|| err("expected u(..), d(..), e(..) or x<s>"))?;
            let sets: Vec<Subset> = args
                .split(',')
                .map(|a| Subset::parse_label(a.trim()).ok_or_else(|| err("bad subset")))
                .collect::<Result<_, _>>()?;
            let piece = match (kind, sets.as_slice()) {
                ("e", [k]) => Path::trivial(*k),
                ("u", [i, j]) if i.is_subset(*j) && i != j => Path::up_chain(*i, *j),
                ("d", [j, i]) if i.is_subset(*j) && i != j => Path::down_chain(*j, *i),
                _ => return Err(err("malformed token")),
            };
            pieces.push(piece);
        }
        let mut iter = pieces.into_iter().rev();
        let first = iter.next().ok_or_else(|| err("empty path"))?;
        iter.try_fold(first, |acc, p| p.compose(&acc))
            .map_err(|_| err("arrows are not composable"))
    }
}

impl fmt::Display for Path {
    /// Collapses `υ_{∅,{s}} δ_{{s},∅}` into `x<s>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            return write!(f, "e({})", self.start.label());
        }
        let mut tokens = Vec::new();
        let mut k = 0;
        while k < self.arrows.len() {
            if let (Arrow::Up { small, big }, Some(Arrow::Down { big: b2, small: s2 })) =
                (self.arrows[k], self.arrows.get(k + 1))
            {
                if small.is_empty() && s2.is_empty() && big == *b2 && big.len() == 1 {
                    tokens.push(format!("x{}", big.min_gen().unwrap() + 1));
                    k += 2;
                    continue;
                }
            }
            tokens.push(self.arrows[k].to_string());
            k += 1;
        }
        write!(f, "{}", tokens.join(" "))
    }
}

/// A `Z[q]`-combination of paths sharing start and end vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathElement {
    pub start: Subset,
    pub end: Subset,
    pub terms: BTreeMap<Path, IntPoly>,
}

impl PathElement {
    pub fn zero(start: Subset, end: Subset) -> Self {
        PathElement {
            start,
            end,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_path(p: Path) -> Self {
        Self::term(p, IntPoly::one())
    }

    pub fn term(p: Path, c: IntPoly) -> Self {
        let mut e = Self::zero(p.start, p.end);
        e.add_term(p, &c);
        e
    }

    pub fn trivial(k: Subset) -> Self {
        Self::from_path(Path::trivial(k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, p: Path, c: &IntPoly) {
        debug_assert!(p.start == self.start && p.end == self.end);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert_with(IntPoly::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &PathElement) -> Result<PathElement, QuiverError> {
        if self.start != other.start || self.end != other.end {
            return Err(QuiverError::NotComposable);
        }
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PathElement) -> Result<PathElement, QuiverError> {
        self.add(&other.scale(&IntPoly::from(-1)))
    }

    pub fn scale(&self, c: &IntPoly) -> PathElement {
        let mut out = PathElement::zero(self.start, self.end);
        for (p, a) in &self.terms {
            out.add_term(p.clone(), &(a * c));
        }
        out
    }

    /// `self · other`: paths of `other` are traversed first.
    pub fn compose(&self, other: &PathElement) -> Result<PathElement, QuiverError> {
        if other.end != self.start {
            return Err(QuiverError::NotComposable);
        }
        let mut out = PathElement::zero(other.start, self.end);
        for (p, a) in &self.terms {
            for (r, b) in &other.terms {
                out.add_term(p.compose(r)?, &(a * b));
            }
        }
        Ok(out)
    }

    pub fn compose_all(parts: &[PathElement]) -> Result<PathElement, QuiverError> {
        let (last, rest) = parts.split_last().ok_or(QuiverError::NotComposable)?;
        rest.iter()
            .rev()
            .try_fold(last.clone(), |acc, p| p.compose(&acc))
    }

    pub fn tau(&self) -> PathElement {
        let mut out = PathElement::zero(self.end, self.start);
        for (p, c) in &self.terms {
            out.add_term(p.tau(), c);
        }
        out
    }

    pub fn map(&self, f: impl Fn(Subset) -> Subset + Copy) -> PathElement {
        let mut out = PathElement::zero(f(self.start), f(self.end));
        for (p, c) in &self.terms {
            out.add_term(p.map(f), c);
        }
        out
    }

    /// Union of all generators appearing in any vertex.
    pub fn support(&self) -> Subset {
        let mut s = self.start.union(self.end);
        for p in self.terms.keys() {
            for v in p.vertices() {
                s = s.union(v);
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "source": self.start.label(),
            "target": self.end.label(),
            "terms": self.terms.iter().map(|(p, c)| {
                serde_json::json!({ "path": p.to_string(), "poly": c })
            }).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for PathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| {
                if c.is_one() {
                    p.to_string()
                } else {
                    format!("({c})·{p}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
