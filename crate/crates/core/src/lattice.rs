//! Nondegenerate (and, as intermediates, degenerate) integral lattices given
//! by a symmetric Gram matrix.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::is_prime;
use crate::error::{Error, Result};
use crate::matrix::{rational_rank, IntMatrix};

/// Inertia indices `(n_plus, n_minus, n_zero)` of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn new(n_plus: usize, n_minus: usize, n_zero: usize) -> Self {
        Signature { n_plus, n_minus, n_zero }
    }

    pub fn rank(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    /// `n_plus - n_minus`
    pub fn index(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.n_zero == 0
    }
}

impl std::ops::Add for Signature {
    type Output = Signature;
    fn add(self, o: Signature) -> Signature {
        Signature::new(self.n_plus + o.n_plus, self.n_minus + o.n_minus, self.n_zero + o.n_zero)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n_plus, self.n_minus, self.n_zero)
    }
}

/// A free abelian group of finite rank with a symmetric integral pairing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    gram: IntMatrix,
}

/// Named lattices used when assembling resolution lattices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Standard {
    /// The 1x1 lattice `[n]`.
    Rank1(i64),
    A1,
    A2,
    A3,
    /// Hyperbolic plane scaled by `scale`: `[[0, scale], [scale, 0]]`.
    U(i64),
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare {
                row: 0,
                len: gram.cols(),
                expected: gram.rows(),
            });
        }
        if let Some((i, j)) = gram.first_asymmetry() {
            return Err(Error::NotSymmetric {
                row: i,
                col: j,
                a: gram[(i, j)].to_string(),
                b: gram[(j, i)].to_string(),
            });
        }
        Ok(Lattice { gram })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != rows.len() {
                return Err(Error::NotSquare {
                    row: i,
                    len: r.len(),
                    expected: rows.len(),
                });
            }
        }
        Self::new(IntMatrix::from_rows(rows.len(), rows)?)
    }

    pub fn standard(name: Standard) -> Lattice {
        let rows: Vec<Vec<i64>> = match name {
            Standard::Rank1(n) => vec![vec![n]],
            Standard::A1 => root_a(1),
            Standard::A2 => root_a(2),
            Standard::A3 => root_a(3),
            Standard::U(s) => vec![vec![0, s], vec![s, 0]],
        };
        Lattice::from_rows(&rows).expect("standard lattices are symmetric")
    }

    /// Negative definite root lattice `A_n`.
    pub fn a(n: usize) -> Lattice {
        Lattice::from_rows(&root_a(n)).expect("symmetric")
    }

    pub fn rank1(n: i64) -> Lattice {
        Lattice::standard(Standard::Rank1(n))
    }

    /// The zero-rank lattice.
    pub fn empty() -> Lattice {
        Lattice {
            gram: IntMatrix::zeros(0, 0),
        }
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// The same group with the pairing negated.
    pub fn negated(&self) -> Lattice {
        let mut g = self.gram.clone();
        for i in 0..g.rows() {
            g.negate_row(i);
        }
        Lattice { gram: g }
    }

    /// Block-diagonal Gram of `self ⊕ other`.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice {
            gram: self.gram.block_diag(&other.gram),
        }
    }

    /// `copies` orthogonal copies of `self`.
    pub fn repeated(&self, copies: usize) -> Lattice {
        let n = self.rank();
        let mut g = IntMatrix::zeros(n * copies, n * copies);
        for c in 0..copies {
            for i in 0..n {
                for j in 0..n {
                    g[(c * n + i, c * n + j)] = self.gram[(i, j)].clone();
                }
            }
        }
        Lattice { gram: g }
    }

    pub fn direct_sum_all<'a, I: IntoIterator<Item = &'a Lattice>>(parts: I) -> Lattice {
        let parts: Vec<&Lattice> = parts.into_iter().collect();
        let n: usize = parts.iter().map(|l| l.rank()).sum();
        let mut g = IntMatrix::zeros(n, n);
        let mut off = 0;
        for l in parts {
            for i in 0..l.rank() {
                for j in 0..l.rank() {
                    g[(off + i, off + j)] = l.gram[(i, j)].clone();
                }
            }
            off += l.rank();
        }
        Lattice { gram: g }
    }

    /// Index sets of the orthogonal indecomposable blocks of the Gram matrix,
    /// i.e. connected components of the graph with an edge wherever
    /// `gram[i][j] != 0`. Sorted by smallest index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if !seen[j] && !self.gram[(i, j)].is_zero() {
                        seen[j] = true;
                        comp.push(j);
                        stack.push(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn sublattice_on(&self, idx: &[usize]) -> Lattice {
        Lattice {
            gram: self.gram.select(idx, idx),
        }
    }

    pub fn det(&self) -> BigInt {
        if self.rank() > 8 {
            let comps = self.components();
            if comps.len() > 1 {
                return comps
                    .iter()
                    .map(|c| self.gram.select(c, c).det())
                    .product();
            }
        }
        self.gram.det()
    }

    pub fn is_degenerate(&self) -> bool {
        self.det().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// `det` prime to `p`. Rejects non-prime `p`.
    pub fn is_p_unimodular(&self, p: &BigInt) -> Result<bool> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(!(self.det() % p).is_zero())
    }

    /// Inertia indices by congruence diagonalization over the rationals.
    pub fn signature(&self) -> Signature {
        let comps = self.components();
        if comps.len() > 1 {
            return comps
                .iter()
                .map(|c| congruence_signature(&self.gram.select(c, c)))
                .fold(Signature::default(), |a, b| a + b);
        }
        congruence_signature(&self.gram)
    }

    pub fn is_negative_definite(&self) -> bool {
        let s = self.signature();
        s.n_minus == self.rank()
    }

    /// `x · y` for integer coordinate vectors.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    /// Gram matrix of the vectors given as rows of `basis` (in lattice
    /// coordinates).
    pub fn restrict(&self, basis: &IntMatrix) -> Lattice {
        let g = &(basis * &self.gram) * &basis.transpose();
        Lattice { gram: g }
    }

    /// Rank of the orthogonal complement of the span of the rows of `sub`.
    pub fn orthogonal_complement_rank(&self, sub: &IntMatrix) -> usize {
        let pairing = sub * &self.gram;
        self.rank() - pairing.rank()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.rank());
        for i in 0..self.rank() {
            let row: Vec<String> = self.gram.row(i).iter().map(ToString::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the plain text format: the rank on the first line, then that
    /// many lines of whitespace-separated integers.
    pub fn parse_text(text: &str) -> Result<Lattice> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad rank line {header:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {i}")))?;
            let row: Vec<BigInt> = line
                .split_whitespace()
                .map(|t| {
                    BigInt::from_str(t)
                        .map_err(|_| Error::Parse(format!("row {}: bad integer {t:?}", i + 1)))
                })
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            rows.push(row);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing data after {n} rows: {extra:?}")));
        }
        Lattice::new(IntMatrix::from_rows(n, &rows)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&LatticeRecord::from(self)).expect("serializable")
    }

    pub fn parse_json(text: &str) -> Result<Lattice> {
        let rec: LatticeRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        rec.try_into()
    }

    /// Accepts either the text or the structured format.
    pub fn parse_any(text: &str) -> Result<Lattice> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{}", self.gram)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gram)
    }
}

/// Structured exchange form: `{"rank": n, "gram": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeRecord {
    pub rank: usize,
    #[serde(with = "json_int_rows")]
    pub gram: Vec<Vec<BigInt>>,
}

/// Gram entries as plain JSON numbers of any size.
mod json_int_rows {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::ser::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Number;

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Number>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| Number::from_str(&x.to_string()).map_err(S::Error::custom))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let rows: Vec<Vec<Number>> = Vec::deserialize(d)?;
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|n| {
                        BigInt::from_str(&n.to_string())
                            .map_err(|_| D::Error::custom(format!("gram entry {n} is not an integer")))
                    })
                    .collect()
            })
            .collect()
    }
}

impl From<&Lattice> for LatticeRecord {
    fn from(l: &Lattice) -> Self {
        LatticeRecord {
            rank: l.rank(),
            gram: l.gram.to_rows(),
        }
    }
}

impl TryFrom<LatticeRecord> for Lattice {
    type Error = Error;
    fn try_from(rec: LatticeRecord) -> Result<Lattice> {
        if rec.gram.len() != rec.rank {
            return Err(Error::Parse(format!(
                "rank {} but {} rows",
                rec.rank,
                rec.gram.len()
            )));
        }
        for (i, r) in rec.gram.iter().enumerate() {
            if r.len() != rec.rank {
                return Err(Error::NotSquare {
                    row: i,
                    len: r.len(),
                    expected: rec.rank,
                });
            }
        }
        Lattice::new(IntMatrix::from_rows(rec.rank, &rec.gram)?)
    }
}

fn root_a(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => -2,
                    1 => 1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

/// Symmetric congruence reduction. A nonzero diagonal pivot is eliminated as a
/// 1x1 block; when the active block has zero diagonal but a nonzero entry
/// `a_ij`, the hyperbolic 2x2 block `[[0, b], [b, 0]]` is split off via its
/// Schur complement and contributes `(1, 1)`.
fn congruence_signature(gram: &IntMatrix) -> Signature {
    let mut a = gram.to_rational();
    let n = a.len();
    let mut sig = Signature::default();
    let mut t = 0;
    while t < n {
        if let Some(p) = (t..n).find(|&i| !a[i][i].is_zero()) {
            sym_swap(&mut a, p, t);
            let pivot = a[t][t].clone();
            if pivot.is_positive() {
                sig.n_plus += 1;
            } else {
                sig.n_minus += 1;
            }
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let f = &a[i][t] / &pivot;
                for j in t + 1..n {
                    let v = &f * &a[t][j];
                    a[i][j] -= v;
                }
            }
            for i in t + 1..n {
                a[i][t] = BigRational::zero();
                a[t][i] = BigRational::zero();
            }
            t += 1;
            continue;
        }
        let off = (t..n).find_map(|i| (i + 1..n).find(|&j| !a[i][j].is_zero()).map(|j| (i, j)));
        let Some((i, j)) = off else {
            sig.n_zero += n - t;
            break;
        };
        sym_swap(&mut a, i, t);
        // j > i >= t, so j was not displaced unless j == t, impossible.
        sym_swap(&mut a, j, t + 1);
        let b = a[t][t + 1].clone();
        // inverse of [[0,b],[b,0]] is [[0,1/b],[1/b,0]]
        let rest: Vec<usize> = (t + 2..n).collect();
        let upd: Vec<Vec<BigRational>> = rest
            .iter()
            .map(|&r| {
                rest.iter()
                    .map(|&s| (&a[r][t] * &a[t + 1][s] + &a[r][t + 1] * &a[t][s]) / &b)
                    .collect()
            })
            .collect();
        for (x, &r) in rest.iter().enumerate() {
            for (y, &s) in rest.iter().enumerate() {
                a[r][s] -= &upd[x][y];
            }
            a[r][t] = BigRational::zero();
            a[r][t + 1] = BigRational::zero();
            a[t][r] = BigRational::zero();
            a[t + 1][r] = BigRational::zero();
        }
        sig.n_plus += 1;
        sig.n_minus += 1;
        t += 2;
    }
    debug_assert_eq!(sig.n_plus + sig.n_minus, rational_rank(&gram.to_rational()));
    sig
}

fn sym_swap(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(p: usize, m: usize, z: usize) -> Signature {
        Signature::new(p, m, z)
    }

    #[test]
    fn determinants() {
        assert_eq!(Lattice::rank1(4).det(), BigInt::from(4));
        assert_eq!(Lattice::a(2).det(), BigInt::from(3));
        assert_eq!(Lattice::standard(Standard::U(2)).det(), BigInt::from(-4));
        assert_eq!(Lattice::a(2).direct_sum(&Lattice::a(2)).det(), BigInt::from(9));
    }

    #[test]
    fn signatures() {
        assert_eq!(Lattice::rank1(4).signature(), sig(1, 0, 0));
        assert_eq!(Lattice::a(2).signature(), sig(0, 2, 0));
        assert_eq!(Lattice::standard(Standard::U(2)).signature(), sig(1, 1, 0));
        assert_eq!(
            Lattice::a(2).direct_sum(&Lattice::rank1(4)).signature(),
            sig(1, 2, 0)
        );
        let degenerate = Lattice::from_rows(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(degenerate.signature(), sig(0, 0, 2));
        let mixed = Lattice::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(mixed.signature(), sig(1, 1, 1));
    }

    #[test]
    fn unimodularity() {
        assert!(Lattice::rank1(1).is_unimodular());
        let three = BigInt::from(3);
        let five = BigInt::from(5);
        assert!(!Lattice::a(2).is_p_unimodular(&three).unwrap());
        assert!(Lattice::a(2).is_p_unimodular(&five).unwrap());
        assert!(Lattice::rank1(-4).is_p_unimodular(&three).unwrap());
        assert!(matches!(
            Lattice::a(2).is_p_unimodular(&BigInt::from(6)),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn standard_lattices() {
        assert_eq!(Lattice::standard(Standard::A1), Lattice::rank1(-2));
        assert_eq!(
            Lattice::standard(Standard::A2),
            Lattice::from_rows(&[vec![-2, 1], vec![1, -2]]).unwrap()
        );
        assert_eq!(
            Lattice::standard(Standard::U(2)),
            Lattice::from_rows(&[vec![0, 2], vec![2, 0]]).unwrap()
        );
        for n in 1..=3 {
            assert_eq!(Lattice::a(n).signature(), sig(0, n, 0));
        }
        assert_eq!(Lattice::a(3).det(), BigInt::from(-4));
    }

    #[test]
    fn direct_sum_block_layout() {
        let s = Lattice::rank1(4).direct_sum(&Lattice::rank1(-4));
        assert_eq!(s, Lattice::from_rows(&[vec![4, 0], vec![0, -4]]).unwrap());
        assert_eq!(
            Lattice::a(2).repeated(3),
            Lattice::direct_sum_all(&[Lattice::a(2), Lattice::a(2), Lattice::a(2)])
        );
    }

    #[test]
    fn asymmetric_rejected() {
        let err = Lattice::from_rows(&[vec![1, 2], vec![3, 1]]).unwrap_err();
        assert_eq!(
            err,
            Error::NotSymmetric {
                row: 0,
                col: 1,
                a: "2".into(),
                b: "3".into()
            }
        );
    }

    #[test]
    fn text_and_json_formats() {
        let l = Lattice::parse_text("2\n-2 1\n1 -2\n").unwrap();
        assert_eq!(l, Lattice::a(2));
        assert_eq!(Lattice::parse_text(&l.to_text()).unwrap(), l);
        let j = r#"{"rank": 2, "gram": [[0, 2], [2, 0]]}"#;
        assert_eq!(Lattice::parse_any(j).unwrap(), Lattice::standard(Standard::U(2)));
        assert_eq!(Lattice::parse_json(&l.to_json()).unwrap(), l);
        assert!(Lattice::parse_text("2\n1 2\n").is_err());
        assert!(Lattice::parse_text("2\n1 2 3\n2 1\n").is_err());
        assert!(Lattice::parse_text("1\nx\n").is_err());
    }

    #[test]
    fn orthogonal_complement_rank_in_hyperbolic_plane() {
        let u = Lattice::standard(Standard::U(1));
        let sub = IntMatrix::from_i64(&[&[1, 0]]);
        assert_eq!(u.orthogonal_complement_rank(&sub), 1);
        let sub = IntMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(u.orthogonal_complement_rank(&sub), 1);
    }
}
