//! Discriminant forms `L*/L -> Q/Z`, their subgroups, and the overlattice
//! constructions built on them: finite index extensions by an isotropic
//! subgroup, recovery of the kernel of an extension, gluing along an
//! anti-isometry, and primitive hulls.
//!
//! A form is stored as a direct sum of cyclic groups `Z/o_i` with chosen
//! generators `e_i`; an element is an integer coordinate vector `x` read
//! modulo the orders. Each generator carries a rational lift in `L ⊗ Q`
//! (coordinates in the lattice basis), so every element has a lift
//! `Σ x_i lift(e_i)` in the dual lattice.

use std::fmt;
use std::ops::{Add, Neg};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::abelian::{integer_kernel, smith_normal_form, FiniteAbelianGroup};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{
    common_denominator, hermite_rows, rational_inverse, rational_mul, rational_to_integer,
    rational_transpose, IntMatrix,
};

/// An element of `Q/Z`, kept as its representative in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ(BigRational);

impl QmodZ {
    pub fn new(r: BigRational) -> Self {
        let frac = &r - r.floor();
        QmodZ(frac)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        QmodZ(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn scale(&self, k: &BigInt) -> QmodZ {
        QmodZ::new(&self.0 * BigRational::from_integer(k.clone()))
    }
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, o: QmodZ) -> QmodZ {
        QmodZ::new(self.0 + o.0)
    }
}

impl Add<&QmodZ> for &QmodZ {
    type Output = QmodZ;
    fn add(self, o: &QmodZ) -> QmodZ {
        QmodZ::new(&self.0 + &o.0)
    }
}

impl Neg for QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ::new(-self.0)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Finite quadratic module data: a finite abelian group with a symmetric
/// `Q/Z`-valued pairing, realized inside `L ⊗ Q` for a lattice `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantForm {
    group: FiniteAbelianGroup,
    orders: Vec<BigInt>,
    generators: Vec<Vec<BigRational>>,
    bilinear: Vec<Vec<QmodZ>>,
    gram: IntMatrix,
    /// Rows map `G v` (for `v ∈ L*`) to generator coordinates. Present only
    /// for forms computed directly as `discr L`.
    coords: Option<IntMatrix>,
}

/// Discriminant form of a nondegenerate lattice. Orthogonal blocks of the
/// Gram matrix are reduced independently.
pub fn discr(l: &Lattice) -> Result<DiscriminantForm> {
    if l.is_degenerate() {
        return Err(Error::Degenerate);
    }
    let n = l.rank();
    let gram = l.gram().clone();
    let mut orders = Vec::new();
    let mut lifts = Vec::new();
    let mut coord_rows = Vec::new();
    let mut block_of = Vec::new();
    for (b, comp) in l.components().iter().enumerate() {
        let snf = smith_normal_form(&gram.select(comp, comp));
        for (i, d) in snf.diagonal_entries().into_iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let mut lift = vec![BigRational::zero(); n];
            let mut row = vec![BigInt::zero(); n];
            for (a, &idx) in comp.iter().enumerate() {
                lift[idx] = BigRational::new(snf.right[(a, i)].clone(), d.clone());
                row[idx] = snf.left[(i, a)].clone();
            }
            orders.push(d);
            lifts.push(lift);
            coord_rows.push(row);
            block_of.push(b);
        }
    }
    let m = orders.len();
    let mut bilinear = vec![vec![QmodZ::zero(); m]; m];
    for i in 0..m {
        for j in i..m {
            if block_of[i] != block_of[j] {
                continue;
            }
            let v = QmodZ::new(rational_pair(&gram, &lifts[i], &lifts[j]));
            bilinear[j][i] = v.clone();
            bilinear[i][j] = v;
        }
    }
    let coords = IntMatrix::from_rows(n, &coord_rows)?;
    Ok(DiscriminantForm {
        group: FiniteAbelianGroup::from_cyclic_orders(orders.iter().cloned())?,
        orders,
        generators: lifts,
        bilinear,
        gram,
        coords: Some(coords),
    })
}

/// Just the group `L*/L`, without generators or form values.
pub fn discriminant_group(l: &Lattice) -> Result<FiniteAbelianGroup> {
    if l.is_degenerate() {
        return Err(Error::Degenerate);
    }
    crate::abelian::cokernel(l.gram())
}

fn rational_pair(gram: &IntMatrix, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let n = gram.rows();
    let mut acc = BigRational::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y[j].is_zero() || gram[(i, j)].is_zero() {
                continue;
            }
            acc += &x[i] * &y[j] * BigRational::from_integer(gram[(i, j)].clone());
        }
    }
    acc
}

impl DiscriminantForm {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// Orders of the chosen cyclic generators.
    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    /// Rational lifts of the generators in `L ⊗ Q`.
    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    pub fn bilinear(&self) -> &[Vec<QmodZ>] {
        &self.bilinear
    }

    /// Gram matrix of the lattice the lifts live in.
    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> BigInt {
        self.group.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// Reduces a coordinate vector into `0 <= x_i < o_i`.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter().zip(&self.orders).map(|(a, o)| a.mod_floor(o)).collect()
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(Zero::is_zero)
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> QmodZ {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || self.bilinear[i][j].is_zero() {
                    continue;
                }
                acc += self.bilinear[i][j].value() * BigRational::from_integer(xi * yj);
            }
        }
        QmodZ::new(acc)
    }

    /// Rational lift `Σ x_i lift(e_i)` in `L ⊗ Q`.
    pub fn lift(&self, x: &[BigInt]) -> Vec<BigRational> {
        let n = self.gram.rows();
        let mut v = vec![BigRational::zero(); n];
        for (xi, g) in x.iter().zip(&self.generators) {
            if xi.is_zero() {
                continue;
            }
            let xi = BigRational::from_integer(xi.clone());
            for (a, b) in v.iter_mut().zip(g) {
                *a += &xi * b;
            }
        }
        v
    }

    /// Generator coordinates of the class of `v ∈ L*` (given in `L ⊗ Q`
    /// coordinates).
    pub fn class_of(&self, v: &[BigRational]) -> Result<Vec<BigInt>> {
        let coords = self.coords.as_ref().ok_or(Error::NoLatticeCoordinates)?;
        let n = self.gram.rows();
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a rank {n} lattice",
                v.len()
            )));
        }
        let w: Vec<BigInt> = (0..n)
            .map(|i| {
                let s: BigRational = (0..n)
                    .map(|j| BigRational::from_integer(self.gram[(i, j)].clone()) * &v[j])
                    .sum();
                if s.is_integer() {
                    Ok(s.to_integer())
                } else {
                    Err(Error::NonIntegral(format!(
                        "vector pairs non-integrally with basis vector {i}"
                    )))
                }
            })
            .collect::<Result<_>>()?;
        Ok(self.reduce(&coords.mul_vec(&w)))
    }

    /// All elements, in mixed-radix order. Intended for small groups.
    pub fn elements(&self) -> impl Iterator<Item = Vec<BigInt>> + '_ {
        let total = self.order();
        let mut cur = vec![BigInt::zero(); self.orders.len()];
        let mut count = BigInt::zero();
        std::iter::from_fn(move || {
            if count >= total {
                return None;
            }
            let out = cur.clone();
            count += 1;
            for (c, o) in cur.iter_mut().zip(&self.orders) {
                *c += 1;
                if &*c < o {
                    break;
                }
                *c = BigInt::zero();
            }
            Some(out)
        })
    }

    /// Orthogonal direct sum; coordinates concatenate.
    pub fn direct_sum(&self, other: &DiscriminantForm) -> DiscriminantForm {
        let n1 = self.gram.rows();
        let n2 = other.gram.rows();
        let m1 = self.orders.len();
        let m2 = other.orders.len();
        let pad = |v: &Vec<BigRational>, left: usize, right: usize| {
            let mut out = vec![BigRational::zero(); left];
            out.extend(v.iter().cloned());
            out.extend(std::iter::repeat_n(BigRational::zero(), right));
            out
        };
        let generators = self
            .generators
            .iter()
            .map(|g| pad(g, 0, n2))
            .chain(other.generators.iter().map(|g| pad(g, n1, 0)))
            .collect();
        let mut bilinear = vec![vec![QmodZ::zero(); m1 + m2]; m1 + m2];
        for i in 0..m1 {
            for j in 0..m1 {
                bilinear[i][j] = self.bilinear[i][j].clone();
            }
        }
        for i in 0..m2 {
            for j in 0..m2 {
                bilinear[m1 + i][m1 + j] = other.bilinear[i][j].clone();
            }
        }
        let coords = match (&self.coords, &other.coords) {
            (Some(a), Some(b)) => Some(a.block_diag(b)),
            _ => None,
        };
        DiscriminantForm {
            group: self.group.direct_sum(&other.group),
            orders: self.orders.iter().chain(&other.orders).cloned().collect(),
            generators,
            bilinear,
            gram: self.gram.block_diag(&other.gram),
            coords,
        }
    }

    /// Elements orthogonal to everything. Trivial for a nondegenerate form.
    pub fn radical(self: &Arc<Self>) -> DiscSubgroup {
        DiscSubgroup::whole(self).orthogonal_complement()
    }

    pub fn is_nondegenerate(self: &Arc<Self>) -> bool {
        self.radical().is_trivial()
    }

    /// Lcm of the generator orders.
    fn exponent(&self) -> BigInt {
        self.orders.iter().fold(BigInt::one(), |a, o| a.lcm(o))
    }

    fn order_lattice(&self) -> IntMatrix {
        IntMatrix::diagonal(&self.orders)
    }
}

impl fmt::Display for DiscriminantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | [", self.group)?;
        for (i, row) in self.bilinear.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let vals: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", vals.join(","))?;
        }
        write!(f, "]")
    }
}

/// A subgroup of a discriminant form, stored as the Hermite basis of its
/// preimage `Λ ⊂ Z^m` under `Z^m -> ⊕ Z/o_i`.
#[derive(Debug, Clone)]
pub struct DiscSubgroup {
    form: Arc<DiscriminantForm>,
    basis: IntMatrix,
}

impl PartialEq for DiscSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && (Arc::ptr_eq(&self.form, &other.form) || self.form == other.form)
    }
}

impl Eq for DiscSubgroup {}

impl DiscSubgroup {
    pub fn generated(form: &Arc<DiscriminantForm>, gens: &[Vec<BigInt>]) -> Result<Self> {
        let m = form.num_generators();
        if let Some(g) = gens.iter().find(|g| g.len() != m) {
            return Err(Error::DimensionMismatch(format!(
                "subgroup generator has {} coordinates, form has {m} generators",
                g.len()
            )));
        }
        let g = IntMatrix::from_rows(m, gens)?;
        Ok(Self::from_covering(form, &g))
    }

    fn from_covering(form: &Arc<DiscriminantForm>, gens: &IntMatrix) -> Self {
        let stacked = form
            .order_lattice()
            .vstack(gens)
            .expect("covering generators have matching width");
        DiscSubgroup {
            form: Arc::clone(form),
            basis: hermite_rows(&stacked),
        }
    }

    pub fn trivial(form: &Arc<DiscriminantForm>) -> Self {
        Self::from_covering(form, &IntMatrix::zeros(0, form.num_generators()))
    }

    pub fn whole(form: &Arc<DiscriminantForm>) -> Self {
        Self::from_covering(form, &IntMatrix::identity(form.num_generators()))
    }

    pub fn form(&self) -> &Arc<DiscriminantForm> {
        &self.form
    }

    pub fn order(&self) -> BigInt {
        let covering: BigInt = (0..self.basis.rows()).map(|i| self.basis[(i, i)].clone()).product();
        self.form.order() / covering
    }

    pub fn is_trivial(&self) -> bool {
        self.order().is_one()
    }

    /// Nonzero Hermite rows reduced modulo the orders; they generate the
    /// subgroup.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        (0..self.basis.rows())
            .map(|i| self.form.reduce(self.basis.row(i)))
            .filter(|x| x.iter().any(|c| !c.is_zero()))
            .collect()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        let m = self.basis.rows();
        if x.len() != m {
            return false;
        }
        let mut r = x.to_vec();
        for i in 0..m {
            let (q, rem) = r[i].div_mod_floor(&self.basis[(i, i)]);
            if !rem.is_zero() {
                return false;
            }
            for (j, rj) in r.iter_mut().enumerate().skip(i) {
                *rj -= &q * &self.basis[(i, j)];
            }
        }
        true
    }

    pub fn is_subgroup_of(&self, other: &DiscSubgroup) -> bool {
        (0..self.basis.rows()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Elements of the subgroup, by filtering the ambient group. Small groups only.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        self.form.elements().filter(|x| self.contains(x)).collect()
    }

    /// Isomorphism type of the subgroup.
    pub fn structure(&self) -> FiniteAbelianGroup {
        // Express diag(orders) in the Hermite basis; the cokernel is Λ / oZ^m.
        let inv = self
            .basis
            .rational_inverse()
            .expect("covering lattice has full rank");
        let c = rational_mul(&self.form.order_lattice().to_rational(), &inv);
        let c = rational_to_integer(&c).expect("order lattice lies in the covering lattice");
        let diag = smith_normal_form(&c).diagonal_entries();
        FiniteAbelianGroup::from_cyclic_orders(diag).expect("nonsingular")
    }

    /// True iff `b(x, y) = 0` for all `x, y` in the subgroup.
    pub fn is_isotropic(&self) -> bool {
        let gens = self.generators();
        gens.iter().enumerate().all(|(i, x)| {
            gens[i..].iter().all(|y| self.form.pair(x, y).is_zero())
        })
    }

    /// `{x : b(x, k) = 0 for all k in K}`.
    pub fn orthogonal_complement(&self) -> DiscSubgroup {
        let form = &self.form;
        let m = form.num_generators();
        let gens = self.generators();
        let t = gens.len();
        if t == 0 || m == 0 {
            return DiscSubgroup::whole(form);
        }
        let big_n = form.exponent();
        // Row k: N * b(e_i, g_k) for each i; then solve A x ≡ 0 (mod N).
        let mut sys = IntMatrix::zeros(t, m + t);
        for (k, g) in gens.iter().enumerate() {
            for i in 0..m {
                let mut e = vec![BigInt::zero(); m];
                e[i] = BigInt::one();
                let v = form.pair(&e, g).value() * BigRational::from_integer(big_n.clone());
                debug_assert!(v.is_integer());
                sys[(k, i)] = v.to_integer();
            }
            sys[(k, m + k)] = big_n.clone();
        }
        let ker = integer_kernel(&sys);
        let all: Vec<usize> = (0..m).collect();
        let rows: Vec<usize> = (0..ker.rows()).collect();
        let proj = ker.select(&rows, &all);
        Self::from_covering(form, &proj)
    }

    /// The form induced on `K⊥ / K`. Requires `K` isotropic.
    pub fn kernel_quotient(&self) -> Result<DiscriminantForm> {
        if !self.is_isotropic() {
            return Err(Error::NotIsotropic);
        }
        let perp = self.orthogonal_complement();
        let p = &perp.basis;
        let q = &self.basis;
        let p_inv = p.rational_inverse()?;
        let c = rational_to_integer(&rational_mul(&q.to_rational(), &p_inv))
            .ok_or_else(|| Error::NonIntegral("K is not contained in its complement".into()))?;
        let snf = smith_normal_form(&c);
        let v_inv = snf.right.integer_inverse()?;
        let new_basis = &v_inv * p;
        let mut orders = Vec::new();
        let mut coords = Vec::new();
        for (i, d) in snf.diagonal_entries().into_iter().enumerate() {
            if d.is_one() {
                continue;
            }
            orders.push(d);
            coords.push(new_basis.row_vec(i));
        }
        let generators: Vec<Vec<BigRational>> = coords.iter().map(|x| self.form.lift(x)).collect();
        let bilinear = coords
            .iter()
            .map(|x| coords.iter().map(|y| self.form.pair(x, y)).collect())
            .collect();
        Ok(DiscriminantForm {
            group: FiniteAbelianGroup::from_cyclic_orders(orders.iter().cloned())?,
            orders,
            generators,
            bilinear,
            gram: self.form.gram.clone(),
            coords: None,
        })
    }
}

/// An overlattice `M ⊇ S` of finite index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub lattice: Lattice,
    /// Basis of `M` as rows, in `S ⊗ Q` coordinates.
    pub basis: Vec<Vec<BigRational>>,
    /// Basis of `S` as rows, in `M` coordinates.
    pub embedding: IntMatrix,
}

impl Extension {
    /// `[M : S]`, from the embedding determinant.
    pub fn index(&self) -> BigInt {
        self.embedding.det().abs()
    }
}

/// The overlattice of `S` generated by `S` and the lifts of `K`.
pub fn extend_by_kernel(s: &Lattice, k: &DiscSubgroup) -> Result<Extension> {
    if k.form.gram != *s.gram() {
        return Err(Error::DimensionMismatch(
            "subgroup does not live in the discriminant form of this lattice".into(),
        ));
    }
    if !k.is_isotropic() {
        return Err(Error::NotIsotropic);
    }
    let n = s.rank();
    let lifts: Vec<Vec<BigRational>> = k.generators().iter().map(|x| k.form.lift(x)).collect();
    let den = common_denominator(&lifts);
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = den.clone();
            r
        })
        .collect();
    for v in &lifts {
        rows.push(
            v.iter()
                .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
                .collect(),
        );
    }
    let h = hermite_rows(&IntMatrix::from_rows(n, &rows)?);
    let den_q = BigRational::from_integer(den);
    let basis: Vec<Vec<BigRational>> = h
        .to_rational()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x / &den_q).collect())
        .collect();
    let lattice = rational_gram(s, &basis)?;
    let embedding = rational_to_integer(&rational_inverse(&basis)?)
        .ok_or_else(|| Error::NonIntegral("S is not contained in the extension".into()))?;
    Ok(Extension {
        lattice,
        basis,
        embedding,
    })
}

fn rational_gram(s: &Lattice, basis: &[Vec<BigRational>]) -> Result<Lattice> {
    let g = rational_mul(
        &rational_mul(basis, &s.gram().to_rational()),
        &rational_transpose(basis),
    );
    let g = rational_to_integer(&g)
        .ok_or_else(|| Error::NonIntegral("Gram matrix of the extension".into()))?;
    Lattice::new(g)
}

/// The kernel `M/S ⊂ discr S` of a finite index extension, given the basis
/// of `S` in `M` coordinates (rows of `embedding`).
pub fn kernel_of_extension(s: &Lattice, m: &Lattice, embedding: &IntMatrix) -> Result<DiscSubgroup> {
    let n = s.rank();
    if m.rank() != n || embedding.rows() != n || embedding.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "S has rank {n}, M has rank {}, embedding is {}x{}",
            m.rank(),
            embedding.rows(),
            embedding.cols()
        )));
    }
    if embedding.det().is_zero() {
        return Err(Error::InvalidArgument("embedding has infinite index".into()));
    }
    if &(embedding * m.gram()) * &embedding.transpose() != *s.gram() {
        return Err(Error::InvalidArgument("embedding does not preserve the pairing".into()));
    }
    let form = Arc::new(discr(s)?);
    let m_in_s = rational_inverse(&embedding.to_rational())?;
    let gens = m_in_s
        .iter()
        .map(|v| form.class_of(v))
        .collect::<Result<Vec<_>>>()?;
    DiscSubgroup::generated(&form, &gens)
}

/// Checks that `x_i -> y_i` reverses the forms on all generator pairs.
pub fn is_anti_isometry(
    fs: &DiscriminantForm,
    fnn: &DiscriminantForm,
    pairs: &[(Vec<BigInt>, Vec<BigInt>)],
) -> bool {
    pairs.iter().enumerate().all(|(i, (xi, yi))| {
        pairs[i..]
            .iter()
            .all(|(xj, yj)| (fs.pair(xi, xj) + fnn.pair(yi, yj)).is_zero())
    })
}

/// Gluing of `S ⊕ N` along the graph of `κ: x_i ↦ y_i`, where the `x_i` are in
/// `discr S` coordinates and the `y_i` in `discr N` coordinates.
pub fn glue_primitive(
    s: &Lattice,
    n: &Lattice,
    kappa: &[(Vec<BigInt>, Vec<BigInt>)],
) -> Result<Extension> {
    let fs = Arc::new(discr(s)?);
    let fnn = Arc::new(discr(n)?);
    for (x, y) in kappa {
        if x.len() != fs.num_generators() || y.len() != fnn.num_generators() {
            return Err(Error::DimensionMismatch("gluing map coordinates".into()));
        }
    }
    if !is_anti_isometry(&fs, &fnn, kappa) {
        return Err(Error::NotAntiIsometry);
    }
    let xs: Vec<Vec<BigInt>> = kappa.iter().map(|(x, _)| x.clone()).collect();
    let ys: Vec<Vec<BigInt>> = kappa.iter().map(|(_, y)| y.clone()).collect();
    let graph: Vec<Vec<BigInt>> = kappa
        .iter()
        .map(|(x, y)| x.iter().chain(y).cloned().collect())
        .collect();
    let ambient = Arc::new(fs.direct_sum(&fnn));
    let gamma = DiscSubgroup::generated(&ambient, &graph)?;
    let domain = DiscSubgroup::generated(&fs, &xs)?;
    let image = DiscSubgroup::generated(&fnn, &ys)?;
    if gamma.order() != domain.order() {
        return Err(Error::NotWellDefined);
    }
    if gamma.order() != image.order() {
        return Err(Error::NotInjective);
    }
    extend_by_kernel(&s.direct_sum(n), &gamma)
}

/// Primitive hull `(S ⊗ Q) ∩ L` of the sublattice spanned by the rows of `sub`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveHull {
    pub lattice: Lattice,
    /// Basis of the hull as rows, in `L` coordinates.
    pub basis: IntMatrix,
    /// Rows of `sub` in hull coordinates.
    pub embedding: IntMatrix,
}

pub fn primitive_hull(l: &Lattice, sub: &IntMatrix) -> Result<PrimitiveHull> {
    let k = sub.rows();
    if sub.cols() != l.rank() {
        return Err(Error::DimensionMismatch("sublattice vectors".into()));
    }
    let snf = smith_normal_form(sub);
    if snf.rank() != k {
        return Err(Error::InvalidArgument("sublattice generators are linearly dependent".into()));
    }
    let v_inv = snf.right.integer_inverse()?;
    let first: Vec<usize> = (0..k).collect();
    let all: Vec<usize> = (0..l.rank()).collect();
    let basis = v_inv.select(&first, &all);
    let u_inv = snf.left.integer_inverse()?;
    let d = snf.diag.select(&first, &first);
    let embedding = &u_inv * &d;
    debug_assert_eq!(&embedding * &basis, *sub);
    Ok(PrimitiveHull {
        lattice: l.restrict(&basis),
        basis,
        embedding,
    })
}

/// `max(0, ℓ_p(S) - 2 ℓ_p(K))`: lower bound on `rank S⊥` for a sublattice of
/// a `p`-unimodular lattice, where `K` is the kernel of its primitive hull.
pub fn rank_perp_lower_bound(ellp_s: usize, ellp_k: usize) -> usize {
    ellp_s.saturating_sub(2 * ellp_k)
}
