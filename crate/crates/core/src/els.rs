//! Elementary linear subspaces: subspaces of GF(q^m)^n spanned by vectors
//! with entries in GF(q). Each one is the GF(q^m)-span of a GF(q)-subspace
//! of GF(q)^n, so it is stored as a reduced row echelon basis over GF(q).

use itertools::Itertools;
use num_traits::ToPrimitive;

use crate::bounds::gaussian_binomial;
use crate::error::{Error, Result};
use crate::gfq::{ExtensionField, FieldElement};
use crate::linalg::BaseMatrix;
use crate::rank_metric::{expand, rank_norm, RankVector};

/// Enumeration limit for [`enumerate_els`].
pub const ELS_ENUMERATION_LIMIT: u64 = 1_000_000;
/// Largest span size scanned exhaustively by [`subspace_rank`].
pub const SPAN_SCAN_LIMIT: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementaryBasis {
    q: u32,
    n: usize,
    /// RREF rows, pivots increasing.
    rows: Vec<Vec<u8>>,
}

impl ElementaryBasis {
    /// Canonicalizes `rows` (which must be independent over GF(q)).
    pub fn from_rows(q: u32, n: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mat = BaseMatrix::from_rows(q, n, rows)?;
        let basis = mat.row_space_basis();
        if basis.len() != rows.len() {
            return Err(Error::NotIndependent);
        }
        Ok(Self { q, n, rows: basis })
    }

    /// Row space of arbitrary (possibly dependent) vectors.
    pub fn span_of(q: u32, n: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let basis = BaseMatrix::from_rows(q, n, rows)?.row_space_basis();
        Ok(Self { q, n, rows: basis })
    }

    pub fn trivial(q: u32, n: usize) -> Self {
        Self { q, n, rows: Vec::new() }
    }

    pub fn full(q: u32, n: usize) -> Self {
        Self {
            q,
            n,
            rows: BaseMatrix::identity(q, n).to_rows(),
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn matrix(&self) -> BaseMatrix {
        BaseMatrix::from_rows(self.q, self.n, &self.rows).expect("rows have length n")
    }

    /// Pivot column of each row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&c| c != 0).expect("RREF rows are nonzero"))
            .collect()
    }

    fn check_field(&self, field: &ExtensionField) -> Result<()> {
        if field.q() != self.q {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// `sum_i a_i b_i` for coefficients `a` in GF(q^m).
    pub fn combine(&self, field: &ExtensionField, a: &[FieldElement]) -> Result<RankVector> {
        self.check_field(field)?;
        if a.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: a.len(),
            });
        }
        let mut out = vec![FieldElement::ZERO; self.n];
        for (row, &ai) in self.rows.iter().zip(a) {
            for (o, &c) in out.iter_mut().zip(row) {
                *o = field.add(*o, field.scale(ai, c));
            }
        }
        Ok(RankVector(out))
    }

    /// Membership of x in the GF(q^m)-span: every row of the m x n
    /// expansion of x must lie in the GF(q) row space.
    pub fn contains(&self, field: &ExtensionField, x: &[FieldElement]) -> Result<bool> {
        self.check_field(field)?;
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let xm = expand(field, &RankVector(x.to_vec()));
        let stacked = self.matrix().vstack(&xm)?;
        Ok(stacked.rank() == self.dim())
    }

    /// Whether x lies in some ELS complementary to this one, i.e. the
    /// GF(q)-row space of x meets this subspace trivially.
    pub fn vanishes(&self, field: &ExtensionField, x: &[FieldElement]) -> Result<bool> {
        self.check_field(field)?;
        let xm = expand(field, &RankVector(x.to_vec()));
        let stacked = self.matrix().vstack(&xm)?;
        Ok(stacked.rank() == self.dim() + rank_norm(field, x))
    }

    /// Every vector of the GF(q^m)-span, guarded by `limit`.
    pub fn span_vectors<'a>(
        &'a self,
        field: &'a ExtensionField,
        limit: u128,
    ) -> Result<impl Iterator<Item = RankVector> + 'a> {
        let coeffs = crate::rank_metric::all_vectors(field, self.dim(), limit)?;
        Ok(coeffs.map(move |a| self.combine(field, &a).expect("dimension matches")))
    }

    /// Rows as GF(q) digit strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&d| char::from(b'0' + d)).collect())
            .collect()
    }

    pub fn from_strings(q: u32, rows: &[String]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.chars().count());
        let parsed = rows
            .iter()
            .map(|r| {
                r.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .filter(|&d| d < q)
                            .map(|d| d as u8)
                            .ok_or_else(|| Error::Parse(format!("invalid GF({q}) digit {c:?}")))
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(q, n, &parsed)
    }
}

/// All v-dimensional ELS of GF(q^m)^n (independent of m), each once, in
/// canonical form. Refuses when there are more than [`ELS_ENUMERATION_LIMIT`].
pub fn enumerate_els(n: usize, v: usize, q: u32) -> Result<impl Iterator<Item = ElementaryBasis>> {
    if v > n {
        return Err(Error::InvalidParameters(format!("dimension {v} exceeds n = {n}")));
    }
    let count = gaussian_binomial(n, v, q);
    if count.to_u64().is_none_or(|c| c > ELS_ENUMERATION_LIMIT) {
        return Err(Error::GuardExceeded {
            what: "elementary subspaces",
            needed: count.to_string(),
            limit: ELS_ENUMERATION_LIMIT.to_string(),
        });
    }
    let mut out = Vec::new();
    for pivots in (0..n).combinations(v) {
        // free positions: right of a row's pivot, outside every pivot column
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| {
                let pivots = &pivots;
                (p + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let combos = (q as u64).pow(free.len() as u32);
        for mut idx in 0..combos {
            let mut rows = vec![vec![0u8; n]; v];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            for &(i, c) in &free {
                rows[i][c] = (idx % q as u64) as u8;
                idx /= q as u64;
            }
            out.push(ElementaryBasis { q, n, rows });
        }
    }
    debug_assert_eq!(out.len() as u64, count.to_u64().unwrap());
    Ok(out.into_iter())
}

/// `sum_i α^i b_i`: a vector of the span with rank min(v, m).
pub fn rank_witness(field: &ExtensionField, v: &ElementaryBasis) -> Result<RankVector> {
    let coeffs: Vec<FieldElement> = (0..v.dim())
        .map(|i| {
            if i < field.m() {
                field.basis_element(i)
            } else {
                FieldElement::ZERO
            }
        })
        .collect();
    v.combine(field, &coeffs)
}

/// Maximum rank over the span: exhaustive when the span has at most
/// [`SPAN_SCAN_LIMIT`] vectors, otherwise the rank of [`rank_witness`].
pub fn subspace_rank(field: &ExtensionField, v: &ElementaryBasis) -> Result<usize> {
    let size = field.order().checked_pow(v.dim() as u32);
    if size.is_some_and(|s| s <= SPAN_SCAN_LIMIT) {
        Ok(v.span_vectors(field, SPAN_SCAN_LIMIT)?
            .map(|x| rank_norm(field, &x))
            .max()
            .unwrap_or(0))
    } else {
        Ok(rank_norm(field, &rank_witness(field, v)?))
    }
}

/// The smallest ELS containing x: the row space of its expansion.
pub fn containing_els(field: &ExtensionField, x: &[FieldElement]) -> ElementaryBasis {
    let xm = expand(field, &RankVector(x.to_vec()));
    ElementaryBasis {
        q: field.q(),
        n: x.len(),
        rows: xm.row_space_basis(),
    }
}

/// An ELS and a complement, with the change of basis needed to split vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspacePair {
    v: ElementaryBasis,
    v_bar: ElementaryBasis,
    /// Inverse of the n x n matrix stacking the rows of v and v_bar.
    inverse: BaseMatrix,
}

impl SubspacePair {
    pub fn new(v: ElementaryBasis, v_bar: ElementaryBasis) -> Result<Self> {
        if v.q != v_bar.q || v.n != v_bar.n {
            return Err(Error::FieldMismatch);
        }
        if v.dim() + v_bar.dim() != v.n {
            return Err(Error::NotComplementary);
        }
        let stacked = v.matrix().vstack(&v_bar.matrix())?;
        let inverse = stacked.inverse().ok_or(Error::NotComplementary)?;
        Ok(Self { v, v_bar, inverse })
    }

    pub fn v(&self) -> &ElementaryBasis {
        &self.v
    }

    pub fn v_bar(&self) -> &ElementaryBasis {
        &self.v_bar
    }

    /// Coordinates `(a, a_bar)` with `x = sum a_i v_i + sum a_bar_j v_bar_j`.
    pub fn coordinates(
        &self,
        field: &ExtensionField,
        x: &[FieldElement],
    ) -> Result<(Vec<FieldElement>, Vec<FieldElement>)> {
        self.v.check_field(field)?;
        let n = self.v.n;
        if x.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: x.len() });
        }
        // [a | a_bar] = x * M^-1, with M^-1 over GF(q)
        let all: Vec<FieldElement> = (0..n)
            .map(|j| {
                x.iter().enumerate().fold(FieldElement::ZERO, |acc, (i, &xi)| {
                    field.add(acc, field.scale(xi, self.inverse.get(i, j)))
                })
            })
            .collect();
        let (a, a_bar) = all.split_at(self.v.dim());
        Ok((a.to_vec(), a_bar.to_vec()))
    }

    /// The restrictions `(x_V, x_Vbar)`, summing to x.
    pub fn restrict(&self, field: &ExtensionField, x: &[FieldElement]) -> Result<(RankVector, RankVector)> {
        let (a, a_bar) = self.coordinates(field, x)?;
        Ok((self.v.combine(field, &a)?, self.v_bar.combine(field, &a_bar)?))
    }

    /// Whether the restriction of x on V is zero.
    pub fn vanishes_on_v(&self, field: &ExtensionField, x: &[FieldElement]) -> Result<bool> {
        Ok(self.coordinates(field, x)?.0.iter().all(|a| a.is_zero()))
    }
}

/// Pairs V with its standard-vector completion.
pub fn complement(v: &ElementaryBasis) -> SubspacePair {
    let pivots = v.pivots();
    let rows: Vec<Vec<u8>> = (0..v.n)
        .filter(|c| !pivots.contains(c))
        .map(|c| {
            let mut r = vec![0u8; v.n];
            r[c] = 1;
            r
        })
        .collect();
    let v_bar = ElementaryBasis { q: v.q, n: v.n, rows };
    SubspacePair::new(v.clone(), v_bar).expect("standard completion is complementary")
}

/// The restricted code `{ r(c) : c in C }` in GF(q^m)^v, where `r(c)` is the
/// coordinate vector of `c_V`. Needs `dim V >= k`.
pub fn restrict_code(
    field: &ExtensionField,
    codewords: &[RankVector],
    k: usize,
    pair: &SubspacePair,
) -> Result<Vec<RankVector>> {
    let v = pair.v().dim();
    if v < k {
        return Err(Error::InvalidParameters(format!(
            "restriction needs dim V = {v} >= k = {k}"
        )));
    }
    codewords
        .iter()
        .map(|c| pair.coordinates(field, c).map(|(a, _)| RankVector(a)))
        .collect()
}
