//! Finite Coxeter systems enumerated into an element table.
//!
//! Elements are numbered in breadth-first order over right multiplication by
//! generators, processing generators in increasing order. This makes every
//! element's recorded word its ShortLex-minimal reduced expression and makes
//! ids nondecreasing in length, with the identity at id 0.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::CoxeterError;

/// Default cap on the number of enumerated elements.
pub const DEFAULT_CAP: usize = 10_000;

/// A subset of the generating set, stored as a bitmask over generator indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(rank: usize) -> Subset {
        Subset(((1u64 << rank) - 1) as u32)
    }

    pub fn singleton(s: usize) -> Subset {
        Subset(1 << s)
    }

    pub fn from_gens(gens: impl IntoIterator<Item = usize>) -> Subset {
        gens.into_iter().fold(Subset::EMPTY, |acc, s| acc.with(s))
    }

    pub fn contains(self, s: usize) -> bool {
        self.0 >> s & 1 == 1
    }

    pub fn with(self, s: usize) -> Subset {
        Subset(self.0 | 1 << s)
    }

    pub fn without(self, s: usize) -> Subset {
        Subset(self.0 & !(1 << s))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// `self ⊏ other`: proper inclusion with exactly one extra generator.
    pub fn covered_by(self, other: Subset) -> bool {
        self.is_subset(other) && other.len() == self.len() + 1
    }

    pub fn gens(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&s| self.contains(s))
    }

    /// Smallest generator, if any.
    pub fn min_gen(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Generators written 1-based without separators, `0` for the empty set.
    pub fn label(self) -> String {
        if self.is_empty() {
            "0".to_string()
        } else {
            self.gens().map(|s| (s + 1).to_string()).collect()
        }
    }

    /// Inverse of [`Subset::label`] for ranks below 10.
    pub fn parse_label(label: &str) -> Option<Subset> {
        if label == "0" || label.is_empty() {
            return Some(Subset::EMPTY);
        }
        label.chars().try_fold(Subset::EMPTY, |acc, c| {
            let d = c.to_digit(10)? as usize;
            (d >= 1).then(|| acc.with(d - 1))
        })
    }

    /// All subsets of `{0..rank}`, ordered by size and then bitmask.
    pub fn all(rank: usize) -> Vec<Subset> {
        let mut v: Vec<Subset> = (0..1u32 << rank).map(Subset).collect();
        v.sort_by_key(|s| (s.len(), s.0));
        v
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.gens().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", s + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An element of a Coxeter system, identified by its index in the element table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub u32);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);

    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// A finite Coxeter system together with its full element table.
pub struct CoxeterSystem {
    name: String,
    rank: usize,
    matrix: Vec<Vec<u32>>,
    lengths: Vec<u32>,
    words: Vec<Vec<u8>>,
    right: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
    inverse: Vec<u32>,
    right_desc: Vec<Subset>,
    left_desc: Vec<Subset>,
    support: Vec<Subset>,
    bruhat: OnceLock<Vec<Vec<u64>>>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("name", &self.name)
            .field("rank", &self.rank)
            .field("order", &self.order())
            .finish()
    }
}

enum Action {
    /// Rank 2: affine maps `x ↦ e·x + k` on `Z/m`.
    Dihedral { m: i64 },
    /// Integer Cartan matrix acting on simple-root coordinates.
    Cartan { cartan: Vec<Vec<i64>> },
}

impl Action {
    fn identity_key(&self, rank: usize) -> Vec<i64> {
        match self {
            Action::Dihedral { .. } => vec![1, 0],
            Action::Cartan { .. } => {
                let mut k = vec![0; rank * rank];
                for i in 0..rank {
                    k[i * rank + i] = 1;
                }
                k
            }
        }
    }

    /// Key of `w·s` given the key of `w`.
    fn right_mul(&self, rank: usize, key: &[i64], s: usize) -> Vec<i64> {
        match self {
            Action::Dihedral { m } => {
                let (e, k) = (key[0], key[1]);
                let k = if s == 0 { k } else { k + e };
                vec![-e, k.rem_euclid(*m)]
            }
            Action::Cartan { cartan } => {
                // column j of w·s_i is w(α_j) - a_ij w(α_i); key is row-major
                let mut out = key.to_vec();
                for j in 0..rank {
                    let a = cartan[s][j];
                    if a != 0 {
                        for r in 0..rank {
                            out[r * rank + j] -= a * key[r * rank + s];
                        }
                    }
                }
                out
            }
        }
    }
}

fn validate_matrix(matrix: &[Vec<u32>]) -> Result<usize, CoxeterError> {
    let n = matrix.len();
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(CoxeterError::BadMatrix(format!("row {} has length {}", i + 1, row.len())));
        }
        for (j, &m) in row.iter().enumerate() {
            if i == j && m != 1 {
                return Err(CoxeterError::BadMatrix(format!("diagonal entry {} is {m}", i + 1)));
            }
            if i != j && m < 2 {
                return Err(CoxeterError::BadMatrix(format!(
                    "off-diagonal entry ({},{}) is {m}",
                    i + 1,
                    j + 1
                )));
            }
            if matrix[j][i] != m {
                return Err(CoxeterError::BadMatrix("matrix is not symmetric".into()));
            }
        }
    }
    if n > 16 {
        return Err(CoxeterError::BadMatrix(format!("rank {n} exceeds 16")));
    }
    Ok(n)
}

fn choose_action(matrix: &[Vec<u32>]) -> Result<Action, CoxeterError> {
    let n = matrix.len();
    if n == 2 {
        return Ok(Action::Dihedral {
            m: matrix[0][1] as i64,
        });
    }
    let mut cartan = vec![vec![0i64; n]; n];
    let mut edges = 0usize;
    let mut needs_tree = false;
    for i in 0..n {
        cartan[i][i] = 2;
        for j in i + 1..n {
            let (a, b) = match matrix[i][j] {
                2 => (0, 0),
                3 => (-1, -1),
                4 => (-1, -2),
                6 => (-1, -3),
                m => {
                    return Err(CoxeterError::Unsupported(format!(
                        "m = {m} between generators {} and {} in rank {n}",
                        i + 1,
                        j + 1
                    )))
                }
            };
            if matrix[i][j] != 2 {
                edges += 1;
            }
            if matrix[i][j] >= 4 {
                needs_tree = true;
            }
            cartan[i][j] = a;
            cartan[j][i] = b;
        }
    }
    if needs_tree && !is_forest(matrix, edges) {
        return Err(CoxeterError::Unsupported(
            "Coxeter graph with a cycle and an edge label 4 or 6".into(),
        ));
    }
    Ok(Action::Cartan { cartan })
}

fn is_forest(matrix: &[Vec<u32>], edges: usize) -> bool {
    let n = matrix.len();
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if w != v && matrix[v][w] != 2 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    edges + components == n
}

/// Coxeter matrix for a named type: `An`, `Bn`, `I2(m)`.
pub fn matrix_for_type(name: &str) -> Result<Vec<Vec<u32>>, CoxeterError> {
    let unknown = || CoxeterError::UnknownType(name.to_string());
    let name = name.trim();
    if let Some(rest) = name.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
        let m: u32 = rest.trim().parse().map_err(|_| unknown())?;
        if m < 2 {
            return Err(unknown());
        }
        return Ok(vec![vec![1, m], vec![m, 1]]);
    }
    let (kind, n) = name.split_at(1);
    let n: usize = n.parse().map_err(|_| unknown())?;
    let mut mat = vec![vec![2u32; n]; n];
    for (i, row) in mat.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut link = |i: usize, j: usize, m: u32| {
        mat[i][j] = m;
        mat[j][i] = m;
    };
    match kind {
        "A" if n >= 1 => {
            for i in 0..n.saturating_sub(1) {
                link(i, i + 1, 3);
            }
        }
        "B" | "C" if n >= 2 => {
            for i in 0..n - 2 {
                link(i, i + 1, 3);
            }
            link(n - 2, n - 1, 4);
        }
        _ => return Err(unknown()),
    }
    Ok(mat)
}

impl CoxeterSystem {
    /// Enumerates the group with the default element cap.
    pub fn from_matrix(matrix: Vec<Vec<u32>>) -> Result<Self, CoxeterError> {
        Self::from_matrix_with_cap(matrix, DEFAULT_CAP)
    }

    pub fn from_matrix_with_cap(matrix: Vec<Vec<u32>>, cap: usize) -> Result<Self, CoxeterError> {
        let rank = validate_matrix(&matrix)?;
        let name = describe(&matrix);
        Self::enumerate(name, matrix, rank, cap)
    }

    pub fn from_type(name: &str) -> Result<Self, CoxeterError> {
        Self::from_type_with_cap(name, DEFAULT_CAP)
    }

    pub fn from_type_with_cap(name: &str, cap: usize) -> Result<Self, CoxeterError> {
        let matrix = matrix_for_type(name)?;
        let rank = matrix.len();
        Self::enumerate(name.trim().to_string(), matrix, rank, cap)
    }

    /// The dihedral group of order `2m`.
    pub fn dihedral(m: u32) -> Self {
        Self::from_type(&format!("I2({m})")).expect("dihedral groups are always supported")
    }

    fn enumerate(
        name: String,
        matrix: Vec<Vec<u32>>,
        rank: usize,
        cap: usize,
    ) -> Result<Self, CoxeterError> {
        let action = if rank == 0 {
            Action::Cartan { cartan: Vec::new() }
        } else {
            choose_action(&matrix)?
        };
        let mut index: HashMap<Vec<i64>, u32> = HashMap::new();
        let mut keys = vec![action.identity_key(rank)];
        index.insert(keys[0].clone(), 0);
        let mut lengths = vec![0u32];
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut right: Vec<Vec<u32>> = Vec::new();
        let mut cursor = 0;
        while cursor < keys.len() {
            let mut row = Vec::with_capacity(rank);
            for s in 0..rank {
                let key = action.right_mul(rank, &keys[cursor], s);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        if keys.len() >= cap {
                            return Err(CoxeterError::NonFiniteGroup { cap });
                        }
                        let id = keys.len() as u32;
                        index.insert(key.clone(), id);
                        keys.push(key);
                        lengths.push(lengths[cursor] + 1);
                        let mut w = words[cursor].clone();
                        w.push(s as u8);
                        words.push(w);
                        id
                    }
                };
                row.push(id);
            }
            right.push(row);
            cursor += 1;
        }
        let n = keys.len();
        let fold = |start: u32, word: &[u8]| -> u32 {
            word.iter()
                .fold(start, |w, &s| right[w as usize][s as usize])
        };
        let left: Vec<Vec<u32>> = (0..n)
            .map(|w| (0..rank).map(|s| fold(right[0][s], &words[w])).collect())
            .collect();
        let inverse: Vec<u32> = (0..n)
            .map(|w| {
                let rev: Vec<u8> = words[w].iter().rev().copied().collect();
                fold(0, &rev)
            })
            .collect();
        let right_desc = (0..n)
            .map(|w| {
                Subset::from_gens((0..rank).filter(|&s| lengths[right[w][s] as usize] < lengths[w]))
            })
            .collect();
        let left_desc = (0..n)
            .map(|w| {
                Subset::from_gens((0..rank).filter(|&s| lengths[left[w][s] as usize] < lengths[w]))
            })
            .collect();
        let support = words
            .iter()
            .map(|w| Subset::from_gens(w.iter().map(|&s| s as usize)))
            .collect();
        Ok(CoxeterSystem {
            name,
            rank,
            matrix,
            lengths,
            words,
            right,
            left,
            inverse,
            right_desc,
            left_desc,
            support,
            bruhat: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn m(&self, s: usize, t: usize) -> u32 {
        self.matrix[s][t]
    }

    /// Identifies the system for cache invalidation.
    pub fn fingerprint(&self) -> String {
        self.matrix
            .iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn order(&self) -> usize {
        self.lengths.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order() as u32).map(GroupElement)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    pub fn generator(&self, s: usize) -> GroupElement {
        GroupElement(self.right[0][s])
    }

    pub fn full_set(&self) -> Subset {
        Subset::full(self.rank)
    }

    /// All finitary subsets, ordered by size then bitmask.
    pub fn lambda(&self) -> Vec<Subset> {
        Subset::all(self.rank)
    }

    pub fn length(&self, w: GroupElement) -> usize {
        self.lengths[w.idx()] as usize
    }

    /// The fixed (ShortLex-minimal) reduced expression.
    pub fn word(&self, w: GroupElement) -> &[u8] {
        &self.words[w.idx()]
    }

    pub fn word_string(&self, w: GroupElement) -> String {
        if w == GroupElement::IDENTITY {
            return "e".to_string();
        }
        self.word(w)
            .iter()
            .map(|s| format!("s{}", s + 1))
            .collect::<Vec<_>>()
            .join("")
    }

    pub fn mul_gen(&self, w: GroupElement, s: usize) -> GroupElement {
        GroupElement(self.right[w.idx()][s])
    }

    pub fn gen_mul(&self, s: usize, w: GroupElement) -> GroupElement {
        GroupElement(self.left[w.idx()][s])
    }

    pub fn multiply(&self, w: GroupElement, v: GroupElement) -> GroupElement {
        self.word(v)
            .iter()
            .fold(w, |acc, &s| self.mul_gen(acc, s as usize))
    }

    /// Product of a word of generators.
    pub fn from_word(&self, word: &[usize]) -> GroupElement {
        word.iter()
            .fold(GroupElement::IDENTITY, |acc, &s| self.mul_gen(acc, s))
    }

    pub fn inverse(&self, w: GroupElement) -> GroupElement {
        GroupElement(self.inverse[w.idx()])
    }

    pub fn descents_right(&self, w: GroupElement) -> Subset {
        self.right_desc[w.idx()]
    }

    pub fn descents_left(&self, w: GroupElement) -> Subset {
        self.left_desc[w.idx()]
    }

    /// Generators occurring in any reduced expression of `w`.
    pub fn support(&self, w: GroupElement) -> Subset {
        self.support[w.idx()]
    }

    pub fn in_parabolic(&self, w: GroupElement, set: Subset) -> bool {
        self.support(w).is_subset(set)
    }

    fn bruhat_table(&self) -> &Vec<Vec<u64>> {
        self.bruhat.get_or_init(|| {
            let n = self.order();
            let words = n.div_ceil(64);
            let mut table: Vec<Vec<u64>> = Vec::with_capacity(n);
            let mut ideal0 = vec![0u64; words];
            ideal0[0] = 1;
            table.push(ideal0);
            for w in 1..n {
                let s = *self.words[w].last().unwrap() as usize;
                let prev = self.right[w][s] as usize;
                let mut ideal = table[prev].clone();
                for y in 0..n {
                    if table[prev][y / 64] >> (y % 64) & 1 == 1 {
                        let ys = self.right[y][s] as usize;
                        ideal[ys / 64] |= 1 << (ys % 64);
                    }
                }
                table.push(ideal);
            }
            table
        })
    }

    /// Bruhat order `y ≤ w`.
    pub fn bruhat_leq(&self, y: GroupElement, w: GroupElement) -> bool {
        let t = &self.bruhat_table()[w.idx()];
        t[y.idx() / 64] >> (y.idx() % 64) & 1 == 1
    }

    /// Elements of the parabolic subgroup `W_I`, in id order.
    pub fn parabolic(&self, set: Subset) -> Vec<GroupElement> {
        self.elements().filter(|&w| self.in_parabolic(w, set)).collect()
    }

    pub fn longest_element(&self, set: Subset) -> GroupElement {
        self.parabolic(set)
            .into_iter()
            .max_by_key(|&w| self.length(w))
            .expect("parabolic subgroups contain the identity")
    }

    /// `D_I`: minimal representatives of the cosets `W_I w`.
    pub fn min_coset_reps(&self, set: Subset) -> Vec<GroupElement> {
        self.elements()
            .filter(|&w| self.descents_left(w).intersection(set).is_empty())
            .collect()
    }

    /// `D_{IJ}`: minimal representatives of the double cosets `W_I w W_J`,
    /// sorted by (length, id).
    pub fn double_coset_reps(&self, i: Subset, j: Subset) -> Vec<GroupElement> {
        self.elements()
            .filter(|&w| {
                self.descents_left(w).intersection(i).is_empty()
                    && self.descents_right(w).intersection(j).is_empty()
            })
            .collect()
    }

    pub fn is_distinguished(&self, i: Subset, d: GroupElement, j: Subset) -> bool {
        self.descents_left(d).intersection(i).is_empty()
            && self.descents_right(d).intersection(j).is_empty()
    }

    /// `D⁺_{IJ}`: maximal representatives, computed as `w_I * d * w_J`.
    pub fn double_coset_reps_longest(&self, i: Subset, j: Subset) -> Vec<GroupElement> {
        let (wi, wj) = (self.longest_element(i), self.longest_element(j));
        let mut v: Vec<GroupElement> = self
            .double_coset_reps(i, j)
            .into_iter()
            .map(|d| self.demazure_product(self.demazure_product(wi, d), wj))
            .collect();
        v.sort_by_key(|&w| (self.length(w), w));
        v
    }

    /// Minimal element of the double coset `W_I w W_J`.
    pub fn double_coset_min(&self, i: Subset, w: GroupElement, j: Subset) -> GroupElement {
        let mut w = w;
        loop {
            if let Some(s) = self.descents_left(w).intersection(i).min_gen() {
                w = self.gen_mul(s, w);
            } else if let Some(s) = self.descents_right(w).intersection(j).min_gen() {
                w = self.mul_gen(w, s);
            } else {
                return w;
            }
        }
    }

    /// Maximal element of the double coset `W_I w W_J`.
    pub fn double_coset_max(&self, i: Subset, w: GroupElement, j: Subset) -> GroupElement {
        let d = self.double_coset_min(i, w, j);
        let left = self.demazure_product(self.longest_element(i), d);
        self.demazure_product(left, self.longest_element(j))
    }

    /// All elements of `W_I d W_J`, sorted by id.
    pub fn double_coset(&self, i: Subset, d: GroupElement, j: Subset) -> Vec<GroupElement> {
        let wi = self.parabolic(i);
        let wj = self.parabolic(j);
        let mut seen = vec![false; self.order()];
        for &u in &wi {
            let ud = self.multiply(u, d);
            for &v in &wj {
                seen[self.multiply(ud, v).idx()] = true;
            }
        }
        (0..self.order())
            .filter(|&k| seen[k])
            .map(|k| GroupElement(k as u32))
            .collect()
    }

    /// The subset `K ⊆ J` with `W_K = d⁻¹ W_I d ∩ W_J`.
    pub fn intersect_parabolic(
        &self,
        i: Subset,
        d: GroupElement,
        j: Subset,
    ) -> Result<Subset, CoxeterError> {
        if !self.is_distinguished(i, d, j) {
            return Err(CoxeterError::NotDistinguished { d: d.idx() });
        }
        Ok(self.conjugate_meet(i, d, j))
    }

    /// `{s ∈ J : d s d⁻¹ ∈ W_I}` without checking that `d` is distinguished.
    pub fn conjugate_meet(&self, i: Subset, d: GroupElement, j: Subset) -> Subset {
        let dinv = self.inverse(d);
        Subset::from_gens(j.gens().filter(|&s| {
            let conj = self.multiply(self.mul_gen(d, s), dinv);
            self.in_parabolic(conj, i)
        }))
    }

    /// The Hecke monoid product `x * y`.
    pub fn demazure_product(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        self.word(y).iter().fold(x, |w, &s| {
            let ws = self.mul_gen(w, s as usize);
            if self.length(ws) > self.length(w) {
                ws
            } else {
                w
            }
        })
    }
}

fn describe(matrix: &[Vec<u32>]) -> String {
    for candidate in ["A1", "A2", "A3", "A4", "B2", "B3", "B4"] {
        if matrix_for_type(candidate).is_ok_and(|m| m == matrix) {
            return candidate.to_string();
        }
    }
    if matrix.len() == 2 {
        return format!("I2({})", matrix[0][1]);
    }
    format!("matrix[{}]", matrix.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> CoxeterSystem {
        CoxeterSystem::from_type("A3").unwrap()
    }

    /// Brute-force enumeration of S_4 as permutations.
    fn s4_order() -> usize {
        let mut count = 0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let mut v = [a, b, c, d];
                        v.sort();
                        if v == [0, 1, 2, 3] {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn orders() {
        assert_eq!(CoxeterSystem::from_type("A1").unwrap().order(), 2);
        assert_eq!(a3().order(), s4_order());
        assert_eq!(CoxeterSystem::dihedral(5).order(), 10);
        assert_eq!(CoxeterSystem::from_type("B2").unwrap().order(), 8);
        assert_eq!(CoxeterSystem::from_type("B3").unwrap().order(), 48);
        for n in 2..=8 {
            assert_eq!(CoxeterSystem::dihedral(n).order(), 2 * n as usize);
        }
    }

    #[test]
    fn bad_matrices() {
        assert!(matches!(
            CoxeterSystem::from_matrix(vec![vec![1, 3], vec![2, 1]]),
            Err(CoxeterError::BadMatrix(_))
        ));
        assert!(matches!(
            CoxeterSystem::from_matrix(vec![vec![2]]),
            Err(CoxeterError::BadMatrix(_))
        ));
        // affine Ã2 is infinite
        let affine = vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]];
        assert_eq!(
            CoxeterSystem::from_matrix_with_cap(affine, 500).unwrap_err(),
            CoxeterError::NonFiniteGroup { cap: 500 }
        );
        assert!(matches!(
            CoxeterSystem::from_matrix(vec![vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]]),
            Err(CoxeterError::Unsupported(_))
        ));
        assert!(CoxeterSystem::from_type("Z7").is_err());
    }

    #[test]
    fn table_invariants() {
        for sys in [a3(), CoxeterSystem::dihedral(7), CoxeterSystem::from_type("B3").unwrap()] {
            assert_eq!(sys.length(sys.identity()), 0);
            assert!(sys.word(sys.identity()).is_empty());
            for w in sys.elements() {
                for s in 0..sys.rank() {
                    let (a, b) = (sys.length(sys.mul_gen(w, s)), sys.length(w));
                    assert!(a == b + 1 || a + 1 == b);
                }
                let from_word =
                    sys.from_word(&sys.word(w).iter().map(|&s| s as usize).collect::<Vec<_>>());
                assert_eq!(from_word, w);
                assert_eq!(sys.multiply(w, sys.inverse(w)), sys.identity());
                assert_eq!(sys.multiply(sys.identity(), w), w);
            }
        }
    }

    #[test]
    fn exchange_property() {
        let sys = a3();
        for w in sys.elements() {
            for s in sys.descents_right(w).gens() {
                let ws = sys.mul_gen(w, s);
                assert_eq!(sys.mul_gen(ws, s), w);
                assert_eq!(sys.length(ws) + 1, sys.length(w));
            }
        }
    }

    #[test]
    fn bruhat_examples_and_order() {
        let sys = a3();
        let s1 = sys.generator(0);
        let s121 = sys.from_word(&[0, 1, 0]);
        assert!(sys.bruhat_leq(s1, s121));
        assert!(!sys.bruhat_leq(s121, s1));
        let w0 = sys.longest_element(sys.full_set());
        assert_eq!(sys.descents_right(w0), sys.full_set());
        for x in sys.elements() {
            assert!(sys.bruhat_leq(x, x));
            assert!(sys.bruhat_leq(sys.identity(), x));
            assert!(sys.bruhat_leq(x, w0));
            for y in sys.elements() {
                if sys.bruhat_leq(x, y) && x != y {
                    assert!(sys.length(x) < sys.length(y));
                    assert!(!sys.bruhat_leq(y, x));
                }
            }
        }
    }

    /// Subword criterion checked directly against every subword.
    #[test]
    fn bruhat_matches_subwords() {
        let sys = CoxeterSystem::from_type("B3").unwrap();
        for w in sys.elements() {
            let word: Vec<usize> = sys.word(w).iter().map(|&s| s as usize).collect();
            let mut below = vec![false; sys.order()];
            for mask in 0u32..1 << word.len() {
                let sub: Vec<usize> = (0..word.len())
                    .filter(|k| mask >> k & 1 == 1)
                    .map(|k| word[k])
                    .collect();
                let y = sys.from_word(&sub);
                if sys.length(y) == sub.len() {
                    below[y.idx()] = true;
                }
            }
            for y in sys.elements() {
                assert_eq!(sys.bruhat_leq(y, w), below[y.idx()]);
            }
        }
    }

    #[test]
    fn longest_elements() {
        let sys = a3();
        assert_eq!(sys.longest_element(Subset::EMPTY), sys.identity());
        assert_eq!(sys.length(sys.longest_element(sys.full_set())), 6);
        let i5 = CoxeterSystem::dihedral(5);
        assert_eq!(i5.length(i5.longest_element(i5.full_set())), 5);
    }

    #[test]
    fn coset_reps() {
        let sys = a3();
        assert_eq!(sys.double_coset_reps(Subset::EMPTY, Subset::EMPTY).len(), 24);
        let s1 = Subset::singleton(0);
        assert_eq!(sys.double_coset_reps(s1, s1).len(), 7);
        for n in 2..=8 {
            let d = CoxeterSystem::dihedral(n);
            assert_eq!(d.double_coset_reps(d.full_set(), d.full_set()).len(), 1);
        }
        for set in sys.lambda() {
            assert_eq!(sys.min_coset_reps(set).len() * sys.parabolic(set).len(), 24);
        }
    }

    /// The double cosets partition W and each has size |W_I|·|D_{I^d∩J} ∩ W_J|.
    #[test]
    fn double_coset_partition_and_bijection() {
        for sys in [a3(), CoxeterSystem::dihedral(6), CoxeterSystem::from_type("B3").unwrap()] {
            for i in sys.lambda() {
                for j in sys.lambda() {
                    let mut hit = vec![0usize; sys.order()];
                    for d in sys.double_coset_reps(i, j) {
                        let coset = sys.double_coset(i, d, j);
                        for w in &coset {
                            hit[w.idx()] += 1;
                        }
                        let k = sys.intersect_parabolic(i, d, j).unwrap();
                        let in_wj = sys
                            .min_coset_reps(k)
                            .into_iter()
                            .filter(|&y| sys.in_parabolic(y, j))
                            .count();
                        assert_eq!(sys.parabolic(i).len() * in_wj, coset.len());
                        assert_eq!(sys.double_coset_min(i, *coset.last().unwrap(), j), d);
                        let top = sys.double_coset_max(i, d, j);
                        let longest = coset.iter().max_by_key(|&&w| sys.length(w)).unwrap();
                        assert_eq!(sys.length(top), sys.length(*longest));
                    }
                    assert!(hit.iter().all(|&h| h == 1));
                }
            }
        }
    }

    #[test]
    fn intersect_examples() {
        let sys = a3();
        let (s1, s3) = (Subset::singleton(0), Subset::singleton(2));
        assert_eq!(sys.intersect_parabolic(s1, sys.identity(), s1).unwrap(), s1);
        let d = sys.double_coset_min(s1, sys.generator(1), s3);
        assert_eq!(sys.intersect_parabolic(s1, d, s3).unwrap(), Subset::EMPTY);
        let full = sys.full_set();
        assert_eq!(sys.intersect_parabolic(full, sys.identity(), full).unwrap(), full);
        assert!(matches!(
            sys.intersect_parabolic(s1, sys.generator(0), s1),
            Err(CoxeterError::NotDistinguished { .. })
        ));
        // brute-force conjugation check
        for i in sys.lambda() {
            for j in sys.lambda() {
                for d in sys.double_coset_reps(i, j) {
                    let k = sys.intersect_parabolic(i, d, j).unwrap();
                    let dinv = sys.inverse(d);
                    let meet: Vec<GroupElement> = sys
                        .parabolic(j)
                        .into_iter()
                        .filter(|&w| sys.in_parabolic(sys.multiply(sys.multiply(d, w), dinv), i))
                        .collect();
                    assert_eq!(meet, sys.parabolic(k));
                }
            }
        }
    }

    #[test]
    fn demazure_monoid() {
        let sys = CoxeterSystem::from_type("B3").unwrap();
        for s in 0..3 {
            let g = sys.generator(s);
            assert_eq!(sys.demazure_product(g, g), g);
        }
        for set in sys.lambda() {
            let w = sys.longest_element(set);
            assert_eq!(sys.demazure_product(w, w), w);
        }
        for x in sys.elements() {
            for y in sys.elements() {
                let xy = sys.demazure_product(x, y);
                for z in sys.elements() {
                    assert_eq!(
                        sys.demazure_product(xy, z),
                        sys.demazure_product(x, sys.demazure_product(y, z))
                    );
                }
            }
        }
    }

    #[test]
    fn demazure_preserves_longest_reps() {
        for sys in [a3(), CoxeterSystem::dihedral(5)] {
            let lam = sys.lambda();
            for &i in &lam {
                for &j in &lam {
                    for x in sys.double_coset_reps_longest(i, j) {
                        for &k in &lam {
                            let plus = sys.double_coset_reps_longest(i, k);
                            for y in sys.double_coset_reps_longest(j, k) {
                                assert!(plus.contains(&sys.demazure_product(x, y)));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn subset_labels() {
        let s = Subset::from_gens([0, 2]);
        assert_eq!(s.label(), "13");
        assert_eq!(Subset::parse_label("13"), Some(s));
        assert_eq!(Subset::parse_label("0"), Some(Subset::EMPTY));
        assert!(Subset::singleton(0).covered_by(s));
        assert!(!Subset::EMPTY.covered_by(s));
        assert_eq!(format!("{s}"), "{1,3}");
    }
}
