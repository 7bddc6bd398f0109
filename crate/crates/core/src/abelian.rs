//! Smith normal form and finite abelian groups in invariant-factor form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// `left * m * right == diag`, with `left`, `right` unimodular and the
/// nonzero diagonal entries positive and forming a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub left: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        let k = self.diag.rows().min(self.diag.cols());
        (0..k).map(|i| self.diag[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal_entries().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // Smallest nonzero |entry| in the active block as pivot.
        let Some((pi, pj)) = smallest_nonzero(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row_multiple(i, t, &-&q);
                u.add_row_multiple(i, t, &-&q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col_multiple(j, t, &-&q);
                v.add_col_multiple(j, t, &-&q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                // A remainder survived: move the smallest entry of row/col t
                // into the pivot and repeat.
                let (pi, pj) = smallest_in_cross(&a, t);
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Row and column cleared; enforce divisibility of the rest.
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[(i, j)] % &a[(t, t)]).is_zero());
            match bad {
                Some((i, _)) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult {
        left: u,
        diag: a,
        right: v,
    }
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if a[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn smallest_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let keep = |i: usize, j: usize, best: &mut (usize, usize)| {
        let x = &a[(i, j)];
        if !x.is_zero() && (a[*best].is_zero() || x.abs() < a[*best].abs()) {
            *best = (i, j);
        }
    };
    for i in t..a.rows() {
        keep(i, t, &mut best);
    }
    for j in t..a.cols() {
        keep(t, j, &mut best);
    }
    best
}

/// Basis (as rows) of the integer kernel `{x : m x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let cols = m.cols();
    let mut out = IntMatrix::zeros(cols - r, cols);
    for (k, j) in (r..cols).enumerate() {
        for i in 0..cols {
            out[(k, i)] = snf.right[(i, j)].clone();
        }
    }
    out
}

/// Primality by trial division below 2^32, Miller-Rabin above.
pub fn is_prime(p: &BigInt) -> bool {
    if p < &BigInt::from(2) {
        return false;
    }
    match p.to_u64().filter(|&n| n < 1 << 32) {
        Some(n) => {
            if n < 4 {
                return true;
            }
            if n % 2 == 0 {
                return false;
            }
            let mut d = 3u64;
            while d.saturating_mul(d) <= n {
                if n % d == 0 {
                    return false;
                }
                d += 2;
            }
            true
        }
        None => {
            // Miller-Rabin over the first twelve prime bases; deterministic
            // below 3.3e24.
            let two = BigInt::from(2);
            let one = BigInt::one();
            let n_minus_one = p - &one;
            let mut d = n_minus_one.clone();
            let mut s = 0;
            while d.is_even() {
                d /= 2;
                s += 1;
            }
            [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37].iter().all(|&b| {
                let b = BigInt::from(b);
                if (p % &b).is_zero() {
                    return false;
                }
                let mut x = b.modpow(&d, p);
                if x == one || x == n_minus_one {
                    return true;
                }
                for _ in 1..s {
                    x = x.modpow(&two, p);
                    if x == n_minus_one {
                        return true;
                    }
                }
                false
            })
        }
    }
}

fn require_prime(p: &BigInt) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p.to_string()))
    }
}

/// A finite abelian group `Z_{d1} ⊕ … ⊕ Z_{dm}` with `d1 | d2 | … | dm`,
/// every `di >= 2`. The empty sequence is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Canonical form of `⊕ Z_{o_i}` for arbitrary positive orders.
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigInt>>(orders: I) -> Result<Self> {
        let mut f: Vec<BigInt> = Vec::new();
        for o in orders {
            if !o.is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "cyclic order must be positive, got {o}"
                )));
            }
            if !o.is_one() {
                f.push(o);
            }
        }
        // Pairwise (gcd, lcm) sweeps yield the divisibility chain.
        let mut f = match chain_u64(&f) {
            Some(small) => small.into_iter().map(BigInt::from).collect(),
            None => {
                let mut f = f;
                let n = f.len();
                for i in 0..n {
                    for j in i + 1..n {
                        if (&f[j] % &f[i]).is_zero() {
                            continue;
                        }
                        let g = f[i].gcd(&f[j]);
                        let l = &f[j] / &g * &f[i];
                        f[i] = g;
                        f[j] = l;
                    }
                }
                f
            }
        };
        f.retain(|x| !x.is_one());
        Ok(FiniteAbelianGroup {
            invariant_factors: f,
        })
    }

    pub fn from_invariant_factors(factors: Vec<BigInt>) -> Result<Self> {
        if factors.iter().any(|x| x < &BigInt::from(2)) {
            return Err(Error::InvalidArgument("invariant factors must be >= 2".into()));
        }
        if factors.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
            return Err(Error::InvalidArgument("invariant factors must form a divisibility chain".into()));
        }
        Ok(FiniteAbelianGroup {
            invariant_factors: factors,
        })
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Minimal number of generators.
    pub fn ell(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Minimal number of generators of the `p`-primary part.
    pub fn ell_p(&self, p: &BigInt) -> Result<usize> {
        require_prime(p)?;
        Ok(self
            .invariant_factors
            .iter()
            .filter(|d| (*d % p).is_zero())
            .count())
    }

    pub fn p_primary(&self, p: &BigInt) -> Result<FiniteAbelianGroup> {
        require_prime(p)?;
        let parts = self.invariant_factors.iter().filter_map(|d| {
            let mut d = d.clone();
            let mut pp = BigInt::one();
            while (&d % p).is_zero() {
                d /= p;
                pp *= p;
            }
            (!pp.is_one()).then_some(pp)
        });
        Ok(FiniteAbelianGroup {
            invariant_factors: parts.collect(),
        })
    }

    pub fn direct_sum(&self, other: &FiniteAbelianGroup) -> FiniteAbelianGroup {
        Self::from_cyclic_orders(
            self.invariant_factors
                .iter()
                .chain(&other.invariant_factors)
                .cloned(),
        )
        .expect("factors are positive")
    }
}

/// The same sweep in machine words; `None` if an entry or an lcm overflows.
fn chain_u64(orders: &[BigInt]) -> Option<Vec<u64>> {
    let mut f: Vec<u64> = orders.iter().map(|o| o.to_u64()).collect::<Option<_>>()?;
    let n = f.len();
    for i in 0..n {
        for j in i + 1..n {
            if f[j] % f[i] == 0 {
                continue;
            }
            let g = f[i].gcd(&f[j]);
            let l = (f[j] / g).checked_mul(f[i])?;
            f[i] = g;
            f[j] = l;
        }
    }
    Some(f)
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// `Z^n / M Z^n` for a nonsingular square `m`. Block-diagonal matrices are
/// reduced block by block.
pub fn cokernel(m: &IntMatrix) -> Result<FiniteAbelianGroup> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("cokernel of a non-square matrix".into()));
    }
    let blocks = square_blocks(m);
    let mut orders = Vec::new();
    for b in &blocks {
        let snf = smith_normal_form(&m.select(b, b));
        let diag = snf.diagonal_entries();
        if diag.iter().any(Zero::is_zero) {
            return Err(Error::Singular);
        }
        orders.extend(diag);
    }
    FiniteAbelianGroup::from_cyclic_orders(orders)
}

/// Connected components of a square matrix's support, treating it as a
/// symmetric adjacency pattern (`m[i][j] != 0 || m[j][i] != 0`).
pub(crate) fn square_blocks(m: &IntMatrix) -> Vec<Vec<usize>> {
    let n = m.rows();
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
                if !seen[j] && (!m[(i, j)].is_zero() || !m[(j, i)].is_zero()) {
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
