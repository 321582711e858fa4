//! The generic Iwahori–Hecke algebra over `Z[q]` in the standard basis `T_w`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSystem, GroupElement, Subset};
use crate::error::HeckeError;
use crate::poly::{binomial, IntPoly};

/// A finitely supported combination `Σ a_w T_w` with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeckeElement {
    terms: BTreeMap<GroupElement, IntPoly>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::t(GroupElement::IDENTITY)
    }

    pub fn t(w: GroupElement) -> Self {
        Self::term(w, IntPoly::one())
    }

    pub fn term(w: GroupElement, c: IntPoly) -> Self {
        let mut e = Self::zero();
        e.add_term(w, &c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GroupElement, IntPoly)>) -> Self {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(w, &c);
        }
        e
    }

    /// Sum of `T_w` over the given elements.
    pub fn sum_of(elements: impl IntoIterator<Item = GroupElement>) -> Self {
        Self::from_terms(elements.into_iter().map(|w| (w, IntPoly::one())))
    }

    fn from_dense(dense: Vec<IntPoly>) -> Self {
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (GroupElement(k as u32), c))
            .collect();
        HeckeElement { terms }
    }

    fn to_dense(&self, order: usize) -> Vec<IntPoly> {
        let mut v = vec![IntPoly::zero(); order];
        for (w, c) in &self.terms {
            v[w.idx()] = c.clone();
        }
        v
    }

    pub fn add_term(&mut self, w: GroupElement, c: &IntPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(IntPoly::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn coeff(&self, w: GroupElement) -> IntPoly {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> &BTreeMap<GroupElement, IntPoly> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (GroupElement, &IntPoly)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (w, c) in other.iter() {
            out.add_term(w, c);
        }
        out
    }

    pub fn sub(&self, other: &HeckeElement) -> HeckeElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HeckeElement {
        HeckeElement {
            terms: self.terms.iter().map(|(w, c)| (*w, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &IntPoly) -> HeckeElement {
        if c.is_zero() {
            return Self::zero();
        }
        HeckeElement {
            terms: self.terms.iter().map(|(w, a)| (*w, a * c)).collect(),
        }
    }

    /// Divides every coefficient exactly by `c`.
    pub fn exact_div(&self, c: &IntPoly) -> Result<HeckeElement, crate::error::PolyError> {
        let mut terms = BTreeMap::new();
        for (w, a) in &self.terms {
            terms.insert(*w, a.exact_div(c)?);
        }
        Ok(HeckeElement { terms })
    }

    /// The image under `q ↦ 0`, with coefficients as constant polynomials.
    pub fn specialize_0(&self) -> HeckeElement {
        HeckeElement::from_terms(
            self.iter()
                .map(|(w, c)| (w, IntPoly::constant(c.specialize_q0()))),
        )
    }

    /// The image under the anti-automorphism `T_w ↦ T_{w⁻¹}`.
    pub fn iota(&self, sys: &CoxeterSystem) -> HeckeElement {
        HeckeElement {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (sys.inverse(*w), c.clone()))
                .collect(),
        }
    }

    /// Element of maximal length in the support, ties broken by largest id.
    pub fn top(&self, sys: &CoxeterSystem) -> Option<GroupElement> {
        self.terms.keys().copied().max_by_key(|&w| (sys.length(w), w))
    }

    pub fn to_json(&self, sys: &CoxeterSystem) -> serde_json::Value {
        serde_json::Value::Array(
            self.iter()
                .map(|(w, c)| {
                    serde_json::json!({ "word": sys.word_string(w), "poly": c })
                })
                .collect(),
        )
    }

    pub fn display(&self, sys: &CoxeterSystem) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.iter()
            .map(|(w, c)| format!("({c})·T[{}]", sys.word_string(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn right_mul_gen_dense(sys: &CoxeterSystem, a: &[IntPoly], s: usize) -> Vec<IntPoly> {
    let q = IntPoly::q();
    let qm1 = &q - &IntPoly::one();
    let mut out = vec![IntPoly::zero(); a.len()];
    for (k, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let w = GroupElement(k as u32);
        let ws = sys.mul_gen(w, s);
        if sys.length(ws) > sys.length(w) {
            out[ws.idx()] += c;
        } else {
            out[k] += &(c * &qm1);
            out[ws.idx()] += &(c * &q);
        }
    }
    out
}

fn left_mul_gen_dense(sys: &CoxeterSystem, s: usize, a: &[IntPoly]) -> Vec<IntPoly> {
    let q = IntPoly::q();
    let qm1 = &q - &IntPoly::one();
    let mut out = vec![IntPoly::zero(); a.len()];
    for (k, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let w = GroupElement(k as u32);
        let sw = sys.gen_mul(s, w);
        if sys.length(sw) > sys.length(w) {
            out[sw.idx()] += c;
        } else {
            out[k] += &(c * &qm1);
            out[sw.idx()] += &(c * &q);
        }
    }
    out
}

/// Persisted form of a [`KLCache`].
#[derive(Serialize, Deserialize)]
struct KLCacheFile {
    fingerprint: String,
    entries: Vec<KLEntry>,
}

#[derive(Serialize, Deserialize)]
struct KLEntry {
    y: u32,
    w: u32,
    poly: IntPoly,
}

/// Memoized `C⁺_w` expansions, from which `P_{y,w}` is read.
#[derive(Debug, Default)]
pub struct KLCache {
    c_plus: RwLock<HashMap<GroupElement, Arc<HeckeElement>>>,
}

impl KLCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.c_plus.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, w: GroupElement) -> Option<Arc<HeckeElement>> {
        self.c_plus.read().unwrap().get(&w).cloned()
    }

    fn insert(&self, w: GroupElement, c: HeckeElement) -> Arc<HeckeElement> {
        self.c_plus
            .write()
            .unwrap()
            .entry(w)
            .or_insert_with(|| Arc::new(c))
            .clone()
    }

    pub fn save(&self, sys: &CoxeterSystem, path: &Path) -> Result<(), HeckeError> {
        let map = self.c_plus.read().unwrap();
        let mut ws: Vec<&GroupElement> = map.keys().collect();
        ws.sort();
        let entries = ws
            .into_iter()
            .flat_map(|w| {
                map[w].iter().map(move |(y, p)| KLEntry {
                    y: y.0,
                    w: w.0,
                    poly: p.clone(),
                })
            })
            .collect();
        let file = KLCacheFile {
            fingerprint: sys.fingerprint(),
            entries,
        };
        let text = serde_json::to_string(&file).map_err(|e| HeckeError::Io(e.to_string()))?;
        fs::write(path, text).map_err(|e| HeckeError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(sys: &CoxeterSystem, path: &Path) -> Result<Self, HeckeError> {
        let text = fs::read_to_string(path)
            .map_err(|e| HeckeError::Io(format!("{}: {e}", path.display())))?;
        let file: KLCacheFile =
            serde_json::from_str(&text).map_err(|e| HeckeError::Io(e.to_string()))?;
        if file.fingerprint != sys.fingerprint() {
            return Err(HeckeError::FingerprintMismatch {
                expected: sys.fingerprint(),
                found: file.fingerprint,
            });
        }
        let mut grouped: HashMap<GroupElement, HeckeElement> = HashMap::new();
        for e in file.entries {
            if e.y as usize >= sys.order() || e.w as usize >= sys.order() {
                return Err(HeckeError::Io(format!("entry ({}, {}) out of range", e.y, e.w)));
            }
            grouped
                .entry(GroupElement(e.w))
                .or_default()
                .add_term(GroupElement(e.y), &e.poly);
        }
        Ok(KLCache {
            c_plus: RwLock::new(grouped.into_iter().map(|(w, c)| (w, Arc::new(c))).collect()),
        })
    }

    /// Loads `path` if it exists, otherwise starts empty.
    pub fn load_or_new(sys: &CoxeterSystem, path: &Path) -> Result<Self, HeckeError> {
        if path.exists() {
            Self::load(sys, path)
        } else {
            Ok(Self::new())
        }
    }
}

/// Result of expressing `x_I` through products of `x_s = 1 + T_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorExpansion {
    /// The reduced word of `w_I` read left to right.
    pub word: Vec<usize>,
    /// `x_I = x_word + q Σ a · x_{word[positions]}`, keyed by positions.
    pub corrections: BTreeMap<Vec<usize>, IntPoly>,
}

impl GeneratorExpansion {
    pub fn subword(&self, positions: &[usize]) -> Vec<usize> {
        positions.iter().map(|&p| self.word[p]).collect()
    }
}

/// The Hecke algebra of a finite Coxeter system with its KL cache.
#[derive(Debug)]
pub struct HeckeAlgebra {
    sys: Arc<CoxeterSystem>,
    cache: KLCache,
}

impl HeckeAlgebra {
    pub fn new(sys: Arc<CoxeterSystem>) -> Self {
        Self::with_cache(sys, KLCache::new())
    }

    pub fn with_cache(sys: Arc<CoxeterSystem>, cache: KLCache) -> Self {
        HeckeAlgebra { sys, cache }
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn system_arc(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn cache(&self) -> &KLCache {
        &self.cache
    }

    pub fn right_mul_gen(&self, a: &HeckeElement, s: usize) -> HeckeElement {
        let n = self.sys.order();
        HeckeElement::from_dense(right_mul_gen_dense(&self.sys, &a.to_dense(n), s))
    }

    pub fn left_mul_gen(&self, s: usize, a: &HeckeElement) -> HeckeElement {
        let n = self.sys.order();
        HeckeElement::from_dense(left_mul_gen_dense(&self.sys, s, &a.to_dense(n)))
    }

    /// Product in `H_q`.
    pub fn t_mul(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let n = self.sys.order();
        let da = a.to_dense(n);
        let mut acc = vec![IntPoly::zero(); n];
        for (w, c) in b.iter() {
            let mut prod = da.clone();
            for &s in self.sys.word(w) {
                prod = right_mul_gen_dense(&self.sys, &prod, s as usize);
            }
            for (k, p) in prod.iter().enumerate() {
                if !p.is_zero() {
                    acc[k] += &(p * c);
                }
            }
        }
        HeckeElement::from_dense(acc)
    }

    pub fn product(&self, factors: &[HeckeElement]) -> HeckeElement {
        factors
            .iter()
            .fold(HeckeElement::one(), |acc, f| self.t_mul(&acc, f))
    }

    /// `T_{s_1} ⋯ T_{s_k}` for an arbitrary word.
    pub fn t_word(&self, word: &[usize]) -> HeckeElement {
        word.iter()
            .fold(HeckeElement::one(), |acc, &s| self.right_mul_gen(&acc, s))
    }

    /// `x_{s_1} ⋯ x_{s_k}` with `x_s = 1 + T_s`.
    pub fn x_word(&self, word: &[usize]) -> HeckeElement {
        word.iter().fold(HeckeElement::one(), |acc, &s| {
            acc.add(&self.right_mul_gen(&acc, s))
        })
    }

    /// `C⁺_w = Σ_{y ≤ w} P_{y,w} T_y`.
    pub fn c_plus(&self, w: GroupElement) -> Arc<HeckeElement> {
        if let Some(c) = self.cache.get(w) {
            return c;
        }
        if w == GroupElement::IDENTITY {
            return self.cache.insert(w, HeckeElement::one());
        }
        let s = self.sys.word(w)[0] as usize;
        let v = self.sys.gen_mul(s, w);
        let cv = self.c_plus(v);
        let mut c = cv.add(&self.left_mul_gen(s, &cv));
        let lv = self.sys.length(v);
        for y in self.sys.elements() {
            let ly = self.sys.length(y);
            if ly >= lv || (lv - ly).is_multiple_of(2) || !self.sys.descents_left(y).contains(s) {
                continue;
            }
            if !self.sys.bruhat_leq(y, v) {
                continue;
            }
            let mu = self.mu(y, v);
            if mu.is_zero() {
                continue;
            }
            let shift = (lv - ly).div_ceil(2);
            let coef = IntPoly::monomial(mu, shift);
            c = c.sub(&self.c_plus(y).scale(&coef));
        }
        self.cache.insert(w, c)
    }

    pub fn kl_poly(&self, y: GroupElement, w: GroupElement) -> IntPoly {
        if !self.sys.bruhat_leq(y, w) {
            return IntPoly::zero();
        }
        self.c_plus(w).coeff(y)
    }

    /// Coefficient of `q^{(ℓ(w)-ℓ(y)-1)/2}` in `P_{y,w}`, zero when that
    /// exponent is not a nonnegative integer.
    pub fn mu(&self, y: GroupElement, w: GroupElement) -> BigInt {
        let (ly, lw) = (self.sys.length(y), self.sys.length(w));
        if lw <= ly || (lw - ly) % 2 == 0 {
            return BigInt::zero();
        }
        self.kl_poly(y, w).coeff((lw - ly - 1) / 2)
    }

    /// Computes `C⁺_w` for every element, optionally in parallel by length layer.
    pub fn fill_cache(&self, exec: crate::exec::Exec) {
        let max_len = self.sys.elements().map(|w| self.sys.length(w)).max().unwrap_or(0);
        for l in 0..=max_len {
            let layer: Vec<GroupElement> =
                self.sys.elements().filter(|&w| self.sys.length(w) == l).collect();
            exec.map(&layer, |&w| {
                self.c_plus(w);
            });
        }
    }

    /// `x_I = Σ_{w ∈ W_I} T_w`.
    pub fn x_subset(&self, set: Subset) -> HeckeElement {
        HeckeElement::sum_of(self.sys.parabolic(set))
    }

    /// `π(I) = Σ_{w ∈ W_I} q^{ℓ(w)}`.
    pub fn poincare_poly(&self, set: Subset) -> IntPoly {
        poincare_poly(&self.sys, set)
    }

    /// `h_{J,I} = Σ T_w` over `w` with `w⁻¹ ∈ D_I ∩ W_J`, so that `x_J = h_{J,I} x_I`.
    pub fn h_elem(&self, j: Subset, i: Subset) -> HeckeElement {
        HeckeElement::sum_of(self.sys.parabolic(j).into_iter().filter(|&w| {
            let winv = self.sys.inverse(w);
            self.sys.descents_left(winv).intersection(i).is_empty()
        }))
    }

    /// `x^{(m)}_{(s,t)} = 1 + Σ_{i<m} (T_{[i]s} + T_{[i]t}) + T_{[m]t}`.
    pub fn dihedral_x_m(&self, s: usize, t: usize, m: usize) -> Result<HeckeElement, HeckeError> {
        let max = self.sys.m(s, t) as usize;
        if s == t || m == 0 || m > max {
            return Err(HeckeError::OutOfRange { m, max });
        }
        let mut e = HeckeElement::one();
        for i in 1..m {
            e.add_term(self.sys.from_word(&alternating(s, t, i)), &IntPoly::one());
            e.add_term(self.sys.from_word(&alternating(t, s, i)), &IntPoly::one());
        }
        e.add_term(self.sys.from_word(&alternating(t, s, m)), &IntPoly::one());
        Ok(e)
    }

    /// Expresses `x_I` through products of `x_s` along the reduced word of
    /// `w_I` determined by the chain `I_1 ⊏ I_2 ⊏ ... ⊏ I`.
    pub fn kl_generator_expansion(&self, chain: &[Subset]) -> Result<GeneratorExpansion, HeckeError> {
        let sys = &self.sys;
        let mut prev = Subset::EMPTY;
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for &set in chain.iter().skip_while(|s| s.is_empty()) {
            if !prev.covered_by(set) || !set.is_subset(sys.full_set()) {
                return Err(HeckeError::BadChain(format!("{prev} does not precede {set}")));
            }
            let u = sys.multiply(sys.longest_element(set), sys.longest_element(prev));
            blocks.push(sys.word(u).iter().map(|&s| s as usize).collect());
            prev = set;
        }
        let word: Vec<usize> = blocks.into_iter().rev().flatten().collect();
        let mut rem = self.x_subset(prev).sub(&self.x_word(&word));
        let mut corrections = BTreeMap::new();
        let q = IntPoly::q();
        while let Some(y) = rem.top(sys) {
            let positions = first_reduced_subword(sys, &word, y).ok_or_else(|| {
                HeckeError::NoExpansion(format!("{} is not a subword", sys.word_string(y)))
            })?;
            let c = rem.coeff(y);
            let a = c.exact_div(&q).map_err(|_| {
                HeckeError::NoExpansion(format!("coefficient {c} at {} not divisible by q", sys.word_string(y)))
            })?;
            let sub: Vec<usize> = positions.iter().map(|&p| word[p]).collect();
            rem = rem.sub(&self.x_word(&sub).scale(&c));
            corrections.insert(positions, a);
        }
        Ok(GeneratorExpansion { word, corrections })
    }

    /// Re-evaluates a generator expansion in `H_q`.
    pub fn eval_expansion(&self, exp: &GeneratorExpansion) -> HeckeElement {
        let q = IntPoly::q();
        exp.corrections
            .iter()
            .fold(self.x_word(&exp.word), |acc, (pos, a)| {
                acc.add(&self.x_word(&exp.subword(pos)).scale(&(&q * a)))
            })
    }

    /// `c_w`: the image of `C⁺_w` at `q = 0`.
    pub fn c0_basis(&self, w: GroupElement) -> HeckeElement {
        self.c_plus(w).specialize_0()
    }

    /// The product `c_x c_y = c_{x*y}` in the 0-Hecke algebra.
    pub fn c0_mul(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        self.sys.demazure_product(x, y)
    }
}

pub fn poincare_poly(sys: &CoxeterSystem, set: Subset) -> IntPoly {
    let mut coeffs: Vec<i64> = Vec::new();
    for w in sys.parabolic(set) {
        let l = sys.length(w);
        if coeffs.len() <= l {
            coeffs.resize(l + 1, 0);
        }
        coeffs[l] += 1;
    }
    IntPoly::from_coeffs(&coeffs)
}

/// Alternating word of length `len` whose rightmost letter is `last`.
pub fn alternating(last: usize, other: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|k| if (len - 1 - k).is_multiple_of(2) { last } else { other })
        .collect()
}

/// `b^m_j = C(j+s-1, j-1) (-q)^s` for `s = (m-j)/2` integral, else 0.
pub fn b_coeff(m: usize, j: usize) -> IntPoly {
    if j == 0 || j > m || (m - j) % 2 == 1 {
        return IntPoly::zero();
    }
    let s = (m - j) / 2;
    let c = binomial((j + s - 1) as u64, (j - 1) as u64);
    let sign = if s.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    IntPoly::monomial(c * sign, s)
}

/// Lexicographically smallest increasing position list whose letters form a
/// reduced word of `y`.
fn first_reduced_subword(sys: &CoxeterSystem, word: &[usize], y: GroupElement) -> Option<Vec<usize>> {
    fn go(
        sys: &CoxeterSystem,
        word: &[usize],
        target: GroupElement,
        start: usize,
        cur: GroupElement,
        picked: &mut Vec<usize>,
    ) -> bool {
        if cur == target {
            return true;
        }
        let remaining = sys.length(target) - sys.length(cur);
        for p in start..word.len() {
            if word.len() - p < remaining {
                break;
            }
            let next = sys.mul_gen(cur, word[p]);
            let rest = sys.multiply(sys.inverse(next), target);
            if sys.length(next) == sys.length(cur) + 1
                && sys.length(rest) + sys.length(next) == sys.length(target)
            {
                picked.push(p);
                if go(sys, word, target, p + 1, next, picked) {
                    return true;
                }
                picked.pop();
            }
        }
        false
    }
    let mut picked = Vec::new();
    go(sys, word, y, 0, GroupElement::IDENTITY, &mut picked).then_some(picked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alg(name: &str) -> HeckeAlgebra {
        HeckeAlgebra::new(Arc::new(CoxeterSystem::from_type(name).unwrap()))
    }

    fn random_element(h: &HeckeAlgebra, rng: &mut ChaCha8Rng) -> HeckeElement {
        let n = h.system().order();
        HeckeElement::from_terms((0..3).map(|_| {
            let w = GroupElement(rng.gen_range(0..n) as u32);
            let c = IntPoly::from_coeffs(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3)]);
            (w, c)
        }))
    }

    #[test]
    fn quadratic_and_braid() {
        let h = alg("A3");
        let sys = h.system();
        let ts = HeckeElement::t(sys.generator(0));
        let q = IntPoly::q();
        let expected = ts.scale(&(&q - &IntPoly::one())).add(&HeckeElement::one().scale(&q));
        assert_eq!(h.t_mul(&ts, &ts), expected);
        assert_eq!(h.t_word(&[0, 1, 0]), h.t_word(&[1, 0, 1]));
        assert_eq!(h.t_word(&[0, 2]), h.t_word(&[2, 0]));
        let a = random_element(&h, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(h.t_mul(&HeckeElement::one(), &a), a);
    }

    #[test]
    fn associativity_fuzz() {
        for name in ["A3", "I2(7)"] {
            let h = alg(name);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..40 {
                let (a, b, c) = (
                    random_element(&h, &mut rng),
                    random_element(&h, &mut rng),
                    random_element(&h, &mut rng),
                );
                assert_eq!(h.t_mul(&h.t_mul(&a, &b), &c), h.t_mul(&a, &h.t_mul(&b, &c)));
            }
        }
    }

    #[test]
    fn t_word_reduced_words_agree() {
        let h = alg("A3");
        let sys = h.system();
        for w in sys.elements() {
            let word: Vec<usize> = sys.word(w).iter().map(|&s| s as usize).collect();
            assert_eq!(h.t_word(&word), HeckeElement::t(w));
        }
    }

    #[test]
    fn kl_basics() {
        let h = alg("A3");
        let sys = h.system();
        assert_eq!(*h.c_plus(sys.identity()), HeckeElement::one());
        let s = sys.generator(0);
        assert_eq!(*h.c_plus(s), HeckeElement::one().add(&HeckeElement::t(s)));
        for w in sys.elements() {
            assert!(h.kl_poly(w, w).is_one());
            for y in sys.elements() {
                let p = h.kl_poly(y, w);
                if !sys.bruhat_leq(y, w) {
                    assert!(p.is_zero());
                } else if y != w {
                    let bound = (sys.length(w) - sys.length(y) - 1) / 2;
                    assert!(p.degree().unwrap() <= bound);
                    assert!(p.coeff(0).is_one());
                }
            }
        }
        // the singular Schubert variety in A3: P_{s2, s2s1s3s2} = 1 + q
        let w = sys.from_word(&[1, 0, 2, 1]);
        assert_eq!(h.kl_poly(sys.generator(1), w), IntPoly::from_coeffs(&[1, 1]));
        assert_eq!(h.kl_poly(sys.identity(), w), IntPoly::from_coeffs(&[1, 1]));
    }

    /// `C⁺_s C⁺_w = (q+1) C⁺_w` when `sw < w`.
    #[test]
    fn left_descent_eigen() {
        for name in ["A3", "I2(5)"] {
            let h = alg(name);
            let sys = h.system();
            let qp1 = IntPoly::from_coeffs(&[1, 1]);
            for w in sys.elements() {
                for s in sys.descents_left(w).gens() {
                    let cs = h.c_plus(sys.generator(s));
                    let cw = h.c_plus(w);
                    assert_eq!(h.t_mul(&cs, &cw), cw.scale(&qp1));
                }
            }
        }
    }

    #[test]
    fn x_subsets() {
        let h = alg("A3");
        let sys = h.system();
        assert_eq!(h.x_subset(Subset::EMPTY), HeckeElement::one());
        let s = sys.generator(0);
        assert_eq!(
            h.x_subset(Subset::singleton(0)),
            HeckeElement::one().add(&HeckeElement::t(s))
        );
        let xs = h.x_subset(sys.full_set());
        assert_eq!(xs.len(), 24);
        assert!(xs.iter().all(|(_, c)| c.is_one()));
        for set in sys.lambda() {
            let x = h.x_subset(set);
            assert_eq!(h.t_mul(&x, &x), x.scale(&h.poincare_poly(set)));
            assert_eq!(*h.c_plus(sys.longest_element(set)), x);
            assert_eq!(x.iota(sys), x);
        }
    }

    #[test]
    fn h_factorization() {
        let h = alg("A3");
        let sys = h.system();
        for j in sys.lambda() {
            for i in sys.lambda().into_iter().filter(|i| i.is_subset(j)) {
                let hji = h.h_elem(j, i);
                let xi = h.x_subset(i);
                let xj = h.x_subset(j);
                assert_eq!(h.t_mul(&hji, &xi), xj);
                assert_eq!(h.t_mul(&xi, &hji.iota(sys)), xj);
            }
        }
    }

    #[test]
    fn iota_is_anti() {
        let h = alg("A3");
        let sys = h.system();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_element(&h, &mut rng);
            let b = random_element(&h, &mut rng);
            assert_eq!(h.t_mul(&a, &b).iota(sys), h.t_mul(&b.iota(sys), &a.iota(sys)));
            assert_eq!(a.iota(sys).iota(sys), a);
        }
        let st = h.t_word(&[0, 1]);
        assert_eq!(st.iota(sys), h.t_word(&[1, 0]));
    }

    #[test]
    fn dihedral_elements() {
        let h = alg("I2(4)");
        assert_eq!(
            h.dihedral_x_m(0, 1, 1).unwrap(),
            HeckeElement::one().add(&h.t_word(&[1]))
        );
        assert_eq!(h.dihedral_x_m(1, 0, 2).unwrap(), h.x_word(&[1, 0]));
        let full = h.x_subset(h.system().full_set());
        assert_eq!(h.dihedral_x_m(0, 1, 4).unwrap(), full);
        assert_eq!(h.dihedral_x_m(1, 0, 4).unwrap(), full);
        assert_eq!(
            h.dihedral_x_m(0, 1, 5).unwrap_err(),
            HeckeError::OutOfRange { m: 5, max: 4 }
        );
    }

    #[test]
    fn b_coefficients() {
        let q = IntPoly::q();
        for m in 1..=12 {
            assert!(b_coeff(m, m).is_one());
            if m >= 3 {
                assert_eq!(b_coeff(m, m - 2), q.scale(&BigInt::from(-(m as i64 - 2))));
            }
        }
        assert_eq!(b_coeff(3, 1), -&q);
        assert!(b_coeff(4, 1).is_zero());
    }

    #[test]
    fn generator_expansion_rank2() {
        let h = alg("A2");
        let chain = [Subset::singleton(0), Subset::full(2)];
        let exp = h.kl_generator_expansion(&chain).unwrap();
        assert_eq!(exp.word, vec![0, 1, 0]);
        let mut expected = BTreeMap::new();
        expected.insert(vec![0], IntPoly::from(-1));
        assert_eq!(exp.corrections, expected);
        assert_eq!(h.eval_expansion(&exp), h.x_subset(Subset::full(2)));
        let single = h.kl_generator_expansion(&[Subset::singleton(1)]).unwrap();
        assert!(single.corrections.is_empty());
        assert!(h
            .kl_generator_expansion(&[Subset::full(2)])
            .is_err());
    }

    #[test]
    fn generator_expansion_all_chains_a3() {
        let h = alg("A3");
        let full = h.system().full_set();
        for a in 0..3 {
            for b in 0..3 {
                if a == b {
                    continue;
                }
                let chain = [Subset::singleton(a), Subset::from_gens([a, b]), full];
                let exp = h.kl_generator_expansion(&chain).unwrap();
                assert_eq!(exp.word.len(), 6);
                assert_eq!(h.eval_expansion(&exp), h.x_subset(full));
            }
        }
    }

    #[test]
    fn zero_hecke_products() {
        let h = alg("A3");
        let sys = h.system();
        for s in 0..3 {
            let cs = h.c0_basis(sys.generator(s));
            assert_eq!(h.t_mul(&cs, &cs).specialize_0(), cs);
        }
        for set in sys.lambda() {
            assert_eq!(h.c0_basis(sys.longest_element(set)), h.x_subset(set));
        }
        for x in sys.elements() {
            for y in sys.elements() {
                let prod = h.t_mul(&h.c0_basis(x), &h.c0_basis(y)).specialize_0();
                assert_eq!(prod, h.c0_basis(h.c0_mul(x, y)));
            }
        }
    }

    #[test]
    fn cache_round_trip() {
        let h = alg("A3");
        h.fill_cache(crate::exec::Exec::default());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kl.json");
        h.cache().save(h.system(), &path).unwrap();
        let loaded = KLCache::load(h.system(), &path).unwrap();
        assert_eq!(loaded.len(), 24);
        let h2 = HeckeAlgebra::with_cache(h.system_arc().clone(), loaded);
        for w in h.system().elements() {
            assert_eq!(h2.c_plus(w), h.c_plus(w));
        }
        let other = CoxeterSystem::from_type("B3").unwrap();
        assert!(matches!(
            KLCache::load(&other, &path),
            Err(HeckeError::FingerprintMismatch { .. })
        ));
    }
}
