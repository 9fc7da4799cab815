//! Rank norm and rank distance of vectors over GF(q^m), plus counting and
//! uniform sampling of vectors with a prescribed rank.

use std::fmt;
use std::ops::{Deref, DerefMut};

use num_bigint::BigUint;
use rand::Rng;

use crate::bounds::{a_mu, gaussian_binomial};
use crate::error::{Error, Result};
use crate::gfq::{ExtensionField, FieldElement};
use crate::linalg::{binary_rank, BaseMatrix};

/// A length-n word over GF(q^m).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RankVector(pub Vec<FieldElement>);

impl RankVector {
    pub fn zero(n: usize) -> Self {
        RankVector(vec![FieldElement::ZERO; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, field: &ExtensionField, other: &RankVector) -> Result<RankVector> {
        same_len(self, other)?;
        Ok(RankVector(
            self.iter().zip(other.iter()).map(|(&a, &b)| field.add(a, b)).collect(),
        ))
    }

    pub fn sub(&self, field: &ExtensionField, other: &RankVector) -> Result<RankVector> {
        same_len(self, other)?;
        Ok(RankVector(
            self.iter().zip(other.iter()).map(|(&a, &b)| field.sub(a, b)).collect(),
        ))
    }

    pub fn scale(&self, field: &ExtensionField, c: FieldElement) -> RankVector {
        RankVector(self.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn hamming_weight(&self) -> usize {
        self.iter().filter(|x| !x.is_zero()).count()
    }

    /// Space-separated gfq digit strings.
    pub fn format(&self, field: &ExtensionField) -> String {
        self.iter().map(|&x| field.format(x)).collect::<Vec<_>>().join(" ")
    }

    pub fn parse(field: &ExtensionField, s: &str) -> Result<RankVector> {
        s.split_whitespace()
            .map(|tok| field.parse(tok))
            .collect::<Result<Vec<_>>>()
            .map(RankVector)
    }
}

impl Deref for RankVector {
    type Target = Vec<FieldElement>;
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl DerefMut for RankVector {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.0
    }
}

impl From<Vec<FieldElement>> for RankVector {
    fn from(v: Vec<FieldElement>) -> Self {
        RankVector(v)
    }
}

impl fmt::Display for RankVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.iter().map(|x| x.packed().to_string()).collect();
        write!(f, "[{}]", vals.join(", "))
    }
}

fn same_len(a: &RankVector, b: &RankVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

/// The m x n expansion over GF(q): column j holds the coordinates of x_j.
pub fn expand(field: &ExtensionField, x: &RankVector) -> BaseMatrix {
    let m = field.m();
    let mut out = BaseMatrix::zeros(field.q(), m, x.len());
    for (j, &xj) in x.iter().enumerate() {
        for i in 0..m {
            out.set(i, j, field.coord(xj, i));
        }
    }
    out
}

/// Inverse of [`expand`].
pub fn assemble(field: &ExtensionField, mat: &BaseMatrix) -> Result<RankVector> {
    if mat.rows() != field.m() {
        return Err(Error::LengthMismatch {
            expected: field.m(),
            got: mat.rows(),
        });
    }
    (0..mat.cols())
        .map(|j| field.from_coords(&mat.column(j)))
        .collect::<Result<Vec<_>>>()
        .map(RankVector)
}

/// Rank over GF(q) of the expansion of `x`.
pub fn rank_norm(field: &ExtensionField, x: &[FieldElement]) -> usize {
    if field.q() == 2 {
        // columns are already bit vectors
        binary_rank(x.iter().map(|v| v.packed() as u64))
    } else {
        expand(field, &RankVector(x.to_vec())).rank()
    }
}

pub fn rank_distance(field: &ExtensionField, x: &RankVector, y: &RankVector) -> Result<usize> {
    Ok(rank_norm(field, &x.sub(field, y)?))
}

/// N_u: the number of vectors of GF(q^m)^n with rank exactly u.
pub fn count_rank_u(n: usize, m: usize, q: u32, u: usize) -> Result<BigUint> {
    let max = n.min(m);
    if u > max {
        return Err(Error::RankOutOfRange { u, max });
    }
    Ok(gaussian_binomial(n, u, q) * a_mu(m, u, q))
}

/// Draws `count` elements of GF(q^m) that are linearly independent over GF(q),
/// uniformly among all such ordered tuples (rejection).
pub fn sample_independent<R: Rng + ?Sized>(
    field: &ExtensionField,
    count: usize,
    rng: &mut R,
) -> Vec<FieldElement> {
    assert!(count <= field.m());
    loop {
        let v: Vec<FieldElement> = (0..count).map(|_| field.random(rng)).collect();
        if rank_norm(field, &v) == count {
            return v;
        }
    }
}

/// A uniformly random vector of rank exactly `u` in GF(q^m)^n.
///
/// The expansion is drawn as `A * B` with A an m x u matrix of full column
/// rank and B a u x n matrix of full row rank; each rank-u matrix has the
/// same number |GL_u(q)| of such factorisations.
pub fn sample_rank_u<R: Rng + ?Sized>(
    field: &ExtensionField,
    n: usize,
    u: usize,
    rng: &mut R,
) -> Result<RankVector> {
    let max = n.min(field.m());
    if u > max {
        return Err(Error::RankOutOfRange { u, max });
    }
    if u == 0 {
        return Ok(RankVector::zero(n));
    }
    // columns of A, read as field elements
    let a = sample_independent(field, u, rng);
    let q = field.q();
    let b = loop {
        let rows: Vec<Vec<u8>> = (0..u)
            .map(|_| (0..n).map(|_| rng.gen_range(0..q) as u8).collect())
            .collect();
        let m = BaseMatrix::from_rows(q, n, &rows)?;
        if m.rank() == u {
            break m;
        }
    };
    let mut x = RankVector::zero(n);
    for (j, xj) in x.iter_mut().enumerate() {
        for (l, &al) in a.iter().enumerate() {
            let c = b.get(l, j);
            if c != 0 {
                *xj = field.add(*xj, field.scale(al, c));
            }
        }
    }
    Ok(x)
}

/// Packs a vector of GF(q^m)^n into an index in `0..q^(mn)` (entry 0 least significant).
pub fn vector_index(field: &ExtensionField, x: &[FieldElement]) -> u128 {
    x.iter()
        .rev()
        .fold(0u128, |acc, &e| acc * field.order() + e.packed())
}

pub fn vector_from_index(field: &ExtensionField, n: usize, mut idx: u128) -> RankVector {
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        v.push(FieldElement::from_packed(idx % field.order()));
        idx /= field.order();
    }
    RankVector(v)
}

/// Iterates over all of GF(q^m)^n, guarded at `limit` vectors.
pub fn all_vectors(
    field: &ExtensionField,
    n: usize,
    limit: u128,
) -> Result<impl Iterator<Item = RankVector> + '_> {
    let total = field
        .order()
        .checked_pow(n as u32)
        .filter(|&t| t <= limit)
        .ok_or_else(|| Error::GuardExceeded {
            what: "vector space enumeration",
            needed: format!("{}^{}", field.order(), n),
            limit: limit.to_string(),
        })?;
    Ok((0..total).map(move |i| vector_from_index(field, n, i)))
}
