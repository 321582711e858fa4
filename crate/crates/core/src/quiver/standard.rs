//! Standard paths for dihedral groups and `A3`, and the spanning report.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{map_subset, HasseQuiver, Path, TorsionKind};
use crate::coxeter::{GroupElement, Subset};
use crate::error::QuiverError;
use crate::poly::{Frac, IntPoly};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `A3` standard paths, keyed by `(J, I)` for paths `I → J`. The remaining
/// pairs between proper non-empty subsets follow by `σ` and `τ`.
const A3_TABLE: &[(&str, &str, &[&str])] = &[
    ("12", "12", &["e(12)", "u(12,123) d(123,12)"]),
    ("13", "13", &["e(13)", "d(13,0) x2 u(0,13)", "u(13,123) d(123,13)"]),
    ("12", "13", &["d(12,1) u(1,13)", "u(12,123) d(123,13)"]),
    ("12", "23", &["d(12,2) u(2,23)", "u(12,123) d(123,23)"]),
    (
        "1",
        "13",
        &["u(1,13)", "d(1,0) x2 u(0,13)", "d(1,0) x3 x2 u(0,13)", "u(1,123) d(123,13)"],
    ),
    ("1", "12", &["u(1,12)", "u(1,13) d(13,1) u(1,12)", "u(1,123) d(123,12)"]),
    ("1", "23", &["d(1,0) u(0,23)", "u(1,12) d(12,2) u(2,23)", "u(1,123) d(123,23)"]),
    ("2", "12", &["u(2,12)", "d(2,0) x3 u(0,12)", "u(2,123) d(123,12)"]),
    (
        "2",
        "13",
        &[
            "d(2,0) u(0,13)",
            "u(2,12) d(12,1) u(1,13)",
            "u(2,23) d(23,3) u(3,13)",
            "u(2,123) d(123,13)",
        ],
    ),
    (
        "1",
        "1",
        &[
            "e(1)",
            "u(1,12) d(12,1)",
            "u(1,13) d(13,1)",
            "u(1,13) d(13,0) x2 u(0,1)",
            "d(1,0) x2 u(0,13) d(13,1)",
            "u(1,13) d(13,0) x2 u(0,13) d(13,1)",
            "u(1,123) d(123,1)",
        ],
    ),
    (
        "1",
        "2",
        &[
            "d(1,0) u(0,2)",
            "u(1,13) d(13,0) u(0,2)",
            "u(1,12) d(12,2)",
            "d(1,0) u(0,23) d(23,2)",
            "d(1,0) x2 u(0,13) d(13,0) u(0,2)",
            "u(1,13) d(13,1) u(1,12) d(12,2)",
            "u(1,123) d(123,2)",
        ],
    ),
    (
        "1",
        "3",
        &[
            "d(1,0) u(0,3)",
            "d(1,0) x2 u(0,3)",
            "d(1,0) u(0,23) d(23,3)",
            "d(1,0) x2 u(0,13) d(13,3)",
            "u(1,13) d(13,0) x2 u(0,13) d(13,3)",
            "u(1,12) d(12,2) u(2,23) d(23,3)",
            "u(1,123) d(123,3)",
        ],
    ),
    (
        "2",
        "2",
        &[
            "e(2)",
            "u(2,12) d(12,2)",
            "u(2,23) d(23,2)",
            "d(2,0) u(0,13) d(13,0) u(0,2)",
            "d(2,0) x3 u(0,12) d(12,2)",
            "d(2,0) x1 u(0,23) d(23,2)",
            "u(2,123) d(123,2)",
        ],
    ),
];

/// Standard paths `B_{J,I}` for every vertex pair, keyed by `(J, I)`.
#[derive(Clone, Debug)]
pub struct StandardPaths {
    table: BTreeMap<(Subset, Subset), Vec<Path>>,
}

impl StandardPaths {
    pub fn new(q: &HasseQuiver) -> Result<Self, QuiverError> {
        let kind = q.kind();
        if kind == TorsionKind::Unsupported {
            return Err(QuiverError::UnsupportedTorsion);
        }
        let full = q.system().full_set();
        let mut table = BTreeMap::new();
        if kind == TorsionKind::A3 {
            table = a3_middle(q)?;
        }
        for &j in q.vertices() {
            for &i in q.vertices() {
                if table.contains_key(&(j, i)) {
                    continue;
                }
                let paths = if j == full {
                    vec![Path::down_chain(full, i)]
                } else if i == full {
                    vec![Path::up_chain(j, full)]
                } else if i.is_empty() || j.is_empty() || kind != TorsionKind::A3 {
                    generic_pair(q, j, i)
                } else {
                    unreachable!("A3 table covers all middle pairs")
                };
                table.insert((j, i), paths);
            }
        }
        Ok(StandardPaths { table })
    }

    /// `B_{J,I}`: paths from `I` to `J`.
    pub fn get(&self, j: Subset, i: Subset) -> &[Path] {
        self.table.get(&(j, i)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, p: &Path) -> bool {
        self.get(p.end, p.start).contains(p)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(Subset, Subset), &Vec<Path>)> {
        self.table.iter()
    }

    pub fn total(&self) -> usize {
        self.table.values().map(Vec::len).sum()
    }
}

/// `δ_{J,∅} χ_d υ_{∅,I}` along the ShortLex word of `d`.
fn via_empty(q: &HasseQuiver, j: Subset, d: GroupElement, i: Subset) -> Path {
    let word: Vec<usize> = q.system().word(d).iter().map(|&s| s as usize).collect();
    Path::down_chain(j, Subset::EMPTY)
        .compose(&Path::chi_word(&word))
        .unwrap()
        .compose(&Path::up_chain(Subset::EMPTY, i))
        .unwrap()
}

/// Pairs involving `∅`, and all proper pairs of a dihedral group: one path
/// per double coset, through `S` when the coset contains the longest
/// element, trivial for the identity coset of a vertex, and through `∅`
/// otherwise.
fn generic_pair(q: &HasseQuiver, j: Subset, i: Subset) -> Vec<Path> {
    let sys = q.system();
    let full = sys.full_set();
    let w0 = sys.longest_element(full);
    sys.double_coset_reps(j, i)
        .into_iter()
        .map(|d| {
            if i.is_empty() || j.is_empty() {
                via_empty(q, j, d, i)
            } else if sys.double_coset_max(j, d, i) == w0 {
                Path::up_chain(j, full)
                    .compose(&Path::down_chain(full, i))
                    .unwrap()
            } else if d == GroupElement::IDENTITY && i == j {
                Path::trivial(i)
            } else {
                via_empty(q, j, d, i)
            }
        })
        .collect()
}

/// Completes the `A3` table under `σ` and `τ`, first image wins.
fn a3_middle(q: &HasseQuiver) -> Result<BTreeMap<(Subset, Subset), Vec<Path>>, QuiverError> {
    let autos = q.automorphisms();
    let mut table = BTreeMap::new();
    let mut queue = VecDeque::new();
    for (j, i, texts) in A3_TABLE {
        let paths: Vec<Path> = texts.iter().map(|t| Path::parse(t)).collect::<Result<_, _>>()?;
        let key = (Subset::parse_label(j).unwrap(), Subset::parse_label(i).unwrap());
        debug_assert!(paths.iter().all(|p| (p.end, p.start) == key));
        queue.push_back((key, paths));
    }
    while let Some((key, paths)) = queue.pop_front() {
        if table.contains_key(&key) {
            continue;
        }
        for t in &autos {
            let f = |s: Subset| map_subset(t, s);
            queue.push_back(((f(key.0), f(key.1)), paths.iter().map(|p| p.map(f)).collect()));
        }
        queue.push_back(((key.1, key.0), paths.iter().map(Path::tau).collect()));
        table.insert(key, paths);
    }
    Ok(table)
}

/// Coefficients of the evaluated paths in the double coset basis; one row
/// per path, one column per `d ∈ D_{JI}`.
pub fn coefficient_matrix(q: &HasseQuiver, j: Subset, i: Subset, paths: &[Path]) -> Vec<Vec<IntPoly>> {
    let reps = q.system().double_coset_reps(j, i);
    paths
        .iter()
        .map(|p| {
            let v = q.eval_path(p).value;
            reps.iter().map(|&d| v.coeff(d)).collect()
        })
        .collect()
}

trait ExactRing: Clone {
    fn is_zero(&self) -> bool;
    fn one() -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
}

impl ExactRing for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one() -> Self {
        One::one()
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

impl ExactRing for IntPoly {
    fn is_zero(&self) -> bool {
        IntPoly::is_zero(self)
    }
    fn one() -> Self {
        IntPoly::one()
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        self.exact_div(o).expect("Bareiss division is exact")
    }
}

/// Fraction-free elimination. Returns the rank and, for square input, the
/// determinant.
fn bareiss<R: ExactRing>(mut m: Vec<Vec<R>>) -> (usize, Option<R>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let square = rows == cols;
    let mut prev = R::one();
    let mut rank = 0;
    let mut negate = false;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            negate = !negate;
        }
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = m[rank][c].mul(&m[r][k]).sub(&m[r][c].mul(&m[rank][k]));
                m[r][k] = v.div_exact(&prev);
            }
            m[r][c] = R::one().sub(&R::one());
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    let det = square.then(|| {
        if rank < rows {
            R::one().sub(&R::one())
        } else if negate {
            prev.neg()
        } else {
            prev
        }
    });
    (rank, det)
}

/// Rank over `Q(q)`: the maximum over integer specializations, escalating to
/// symbolic elimination when none reaches full rank.
pub fn rank(m: &[Vec<IntPoly>]) -> usize {
    let full = m.len().min(m.first().map_or(0, Vec::len));
    let mut best = 0;
    for x in [2i64, 3, 5] {
        let spec: Vec<Vec<BigInt>> = m
            .iter()
            .map(|row| row.iter().map(|c| c.eval_at_integer(x)).collect())
            .collect();
        best = best.max(bareiss(spec).0);
        if best == full {
            return best;
        }
    }
    bareiss(m.to_vec()).0
}

pub fn determinant(m: &[Vec<IntPoly>]) -> Option<IntPoly> {
    bareiss(m.to_vec()).1
}

/// Inverse of a square matrix over `Q(q)` by Gauss-Jordan elimination.
pub fn inverse(m: &[Vec<IntPoly>]) -> Option<Vec<Vec<Frac>>> {
    let n = m.len();
    let mut a: Vec<Vec<Frac>> = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v: Vec<Frac> = row.iter().cloned().map(Frac::from_poly).collect();
            v.extend((0..n).map(|k| if k == r { Frac::one() } else { Frac::zero() }));
            v
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(pivot, c);
        let inv = a[c][c].inv().ok()?;
        for k in 0..2 * n {
            a[c][k] = a[c][k].mul(&inv);
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let v = a[r][k].sub(&f.mul(&a[c][k]));
                    a[r][k] = v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub target: String,
    pub source: String,
    pub paths: usize,
    pub double_cosets: usize,
    pub rank: usize,
    /// Determinant of the coefficient matrix when it is square.
    pub determinant: Option<String>,
    /// The determinant is `±1`, so the paths form a `Z[q]`-basis.
    pub unimodular: bool,
}

impl PairReport {
    pub fn ok(&self) -> bool {
        self.paths == self.double_cosets && self.rank == self.paths
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanningReport {
    pub system: String,
    pub pairs: Vec<PairReport>,
    pub total_paths: usize,
    pub total_double_cosets: usize,
}

impl SpanningReport {
    pub fn all_ok(&self) -> bool {
        self.pairs.iter().all(PairReport::ok)
    }

    pub fn all_unimodular(&self) -> bool {
        self.pairs.iter().all(|p| p.unimodular)
    }

    pub fn findings(&self) -> Vec<&PairReport> {
        self.pairs.iter().filter(|p| !p.ok() || !p.unimodular).collect()
    }
}

pub fn spanning_report(
    q: &HasseQuiver,
    std: &StandardPaths,
    exec: crate::exec::Exec,
) -> SpanningReport {
    let pairs: Vec<_> = std.pairs().map(|(k, v)| (*k, v.clone())).collect();
    let reports = exec.map(&pairs, |((j, i), paths)| {
        let m = coefficient_matrix(q, *j, *i, paths);
        let det = determinant(&m);
        let unimodular = det
            .as_ref()
            .is_some_and(|d| d.is_one() || (-d.clone()).is_one());
        PairReport {
            target: j.label(),
            source: i.label(),
            paths: paths.len(),
            double_cosets: q.system().double_coset_reps(*j, *i).len(),
            rank: rank(&m),
            determinant: det.map(|d| d.to_string()),
            unimodular,
        }
    });
    SpanningReport {
        system: q.system().name().to_string(),
        total_paths: reports.iter().map(|r| r.paths).sum(),
        total_double_cosets: reports.iter().map(|r| r.double_cosets).sum(),
        pairs: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterSystem;
    use crate::exec::Exec;
    use std::sync::Arc;

    fn s(label: &str) -> Subset {
        Subset::parse_label(label).unwrap()
    }

    #[test]
    fn a3_counts() {
        let q = HasseQuiver::from_system(Arc::new(CoxeterSystem::from_type("A3").unwrap()));
        let std = StandardPaths::new(&q).unwrap();
        assert_eq!(std.get(s("2"), s("13")).len(), 4);
        assert_eq!(std.get(s("3"), s("3")).len(), 7);
        assert_eq!(std.get(s("0"), s("0")).len(), 24);
        let p = Path::parse("u(1,12) d(12,1)").unwrap();
        assert!(std.contains(&p));
        let report = spanning_report(&q, &std, Exec::default());
        assert!(report.all_ok(), "{:?}", report.findings());
        assert!(report.all_unimodular(), "{:?}", report.findings());
        assert_eq!(report.total_paths, report.total_double_cosets);
    }

    #[test]
    fn dihedral_counts() {
        for n in 2..=8u32 {
            let q = HasseQuiver::from_system(Arc::new(CoxeterSystem::dihedral(n)));
            let std = StandardPaths::new(&q).unwrap();
            if n == 6 {
                assert_eq!(std.get(s("1"), s("1")).len(), 4);
            }
            let report = spanning_report(&q, &std, Exec::Sequential);
            assert!(report.all_ok(), "n={n}: {:?}", report.findings());
            assert!(report.all_unimodular(), "n={n}: {:?}", report.findings());
        }
    }

    #[test]
    fn bareiss_basics() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(4), BigInt::from(2)],
        ];
        assert_eq!(bareiss(m), (1, Some(BigInt::from(0))));
        let m = vec![
            vec![IntPoly::zero(), IntPoly::one()],
            vec![IntPoly::one(), IntPoly::q()],
        ];
        assert_eq!(determinant(&m), Some(IntPoly::from(-1)));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv[0][0].as_poly(), Some(-IntPoly::q()));
    }
}
