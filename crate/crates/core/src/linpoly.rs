//! Linearized polynomials `sum_i c_i x^[i]` over GF(q^m), where `x^[i]`
//! denotes `x^(q^i)`. Multiplication is composition.

use crate::error::{Error, Result};
use crate::gfq::{ExtensionField, FieldElement};
use crate::linalg::BaseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinearizedPoly {
    /// `coeffs[i]` multiplies `x^[i]`; no trailing zeros.
    coeffs: Vec<FieldElement>,
}

impl LinearizedPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// The identity map `x`.
    pub fn identity() -> Self {
        Self {
            coeffs: vec![FieldElement::ONE],
        }
    }

    /// `c * x^[i]`.
    pub fn monomial(c: FieldElement, i: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; i + 1];
        coeffs[i] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    /// Index of the highest nonzero coefficient; `None` for the zero polynomial.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn add(&self, field: &ExtensionField, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..len).map(|i| field.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, field: &ExtensionField, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..len).map(|i| field.sub(self.coeff(i), other.coeff(i))).collect())
    }

    /// `c * p`, i.e. every coefficient multiplied by c.
    pub fn scale(&self, field: &ExtensionField, c: FieldElement) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&a| field.mul(c, a)).collect())
    }

    pub fn eval(&self, field: &ExtensionField, a: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut power = a;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = field.frobenius(power, 1);
            }
            acc = field.add(acc, field.mul(c, power));
        }
        acc
    }

    /// Composition `self ∘ r`, so that `(self ∘ r)(a) = self(r(a))`.
    pub fn compose(&self, field: &ExtensionField, r: &Self) -> Self {
        if self.is_zero() || r.is_zero() {
            return Self::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + r.coeffs.len() - 1];
        for (i, &pi) in self.coeffs.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (j, &rj) in r.coeffs.iter().enumerate() {
                let term = field.mul(pi, field.frobenius(rj, i));
                out[i + j] = field.add(out[i + j], term);
            }
        }
        Self::from_coeffs(out)
    }

    /// `(quot, rem)` with `self = quot ∘ b + rem` and `q_degree(rem) < q_degree(b)`.
    pub fn right_divide(&self, field: &ExtensionField, b: &Self) -> Result<(Self, Self)> {
        let db = b.q_degree().ok_or(Error::DivisionByZero)?;
        let blead = b.leading();
        let mut rem = self.clone();
        let mut quot = vec![FieldElement::ZERO; self.coeffs.len().saturating_sub(db)];
        while let Some(dr) = rem.q_degree() {
            if dr < db {
                break;
            }
            let s = dr - db;
            let c = field.div(rem.leading(), field.frobenius(blead, s))?;
            quot[s] = c;
            let step = Self::monomial(c, s).compose(field, b);
            rem = rem.sub(field, &step);
            debug_assert!(rem.q_degree().is_none_or(|d| d < dr));
        }
        Ok((Self::from_coeffs(quot), rem))
    }

    /// Textual form `c0 + c1·X^[1] + ...`, zero terms omitted.
    pub fn format(&self, field: &ExtensionField) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                if i == 0 {
                    field.format(c)
                } else {
                    format!("{}·X^[{i}]", field.format(c))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// GF(q)-basis of the kernel `{a : p(a) = 0}`.
    pub fn root_space_basis(&self, field: &ExtensionField) -> Vec<FieldElement> {
        let m = field.m();
        let mut mat = BaseMatrix::zeros(field.q(), m, m);
        for j in 0..m {
            let img = self.eval(field, field.basis_element(j));
            for (i, c) in field.coords(img).into_iter().enumerate() {
                mat.set(i, j, c);
            }
        }
        mat.null_space()
            .into_iter()
            .map(|x| field.from_coords(&x).expect("coordinates in range"))
            .collect()
    }

    /// The monic polynomial of least q-degree vanishing on the GF(q)-span of
    /// `roots`. Its q-degree is the dimension of that span.
    pub fn from_roots(field: &ExtensionField, roots: &[FieldElement]) -> Self {
        let q = field.q() as u128;
        let mut p = Self::identity();
        for &b in roots {
            let c = p.eval(field, b);
            if c.is_zero() {
                continue;
            }
            // x^q - c^(q-1) x vanishes exactly on GF(q)·c
            let factor = Self::from_coeffs(vec![field.neg(field.pow(c, q - 1)), FieldElement::ONE]);
            p = factor.compose(field, &p);
        }
        p
    }
}

/// One row of the remainder sequence, with `r = u ∘ a + v ∘ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EeaStep {
    pub u: LinearizedPoly,
    pub v: LinearizedPoly,
    pub r: LinearizedPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EeaOutcome {
    pub u: LinearizedPoly,
    pub v: LinearizedPoly,
    pub r: LinearizedPoly,
    /// Every row of the remainder sequence, starting with `(1, 0, a)`,
    /// `(0, 1, b)`. Empty unless requested.
    pub trace: Vec<EeaStep>,
}

/// Extended Euclid with right division. Runs the remainder sequence until a
/// remainder of q-degree below `stop_degree` appears, and returns it with its
/// cofactors. If the sequence reaches zero first, the last nonzero remainder
/// (a greatest common right divisor of a and b) is returned instead.
pub fn lin_eea(
    field: &ExtensionField,
    a: &LinearizedPoly,
    b: &LinearizedPoly,
    stop_degree: usize,
) -> EeaOutcome {
    eea_impl(field, a, b, stop_degree, false)
}

/// [`lin_eea`] with the full remainder sequence recorded.
pub fn lin_eea_traced(
    field: &ExtensionField,
    a: &LinearizedPoly,
    b: &LinearizedPoly,
    stop_degree: usize,
) -> EeaOutcome {
    eea_impl(field, a, b, stop_degree, true)
}

fn eea_impl(
    field: &ExtensionField,
    a: &LinearizedPoly,
    b: &LinearizedPoly,
    stop_degree: usize,
    traced: bool,
) -> EeaOutcome {
    let mut prev = EeaStep {
        u: LinearizedPoly::identity(),
        v: LinearizedPoly::zero(),
        r: a.clone(),
    };
    let mut cur = EeaStep {
        u: LinearizedPoly::zero(),
        v: LinearizedPoly::identity(),
        r: b.clone(),
    };
    let mut trace = Vec::new();
    if traced {
        trace.push(prev.clone());
        trace.push(cur.clone());
    }
    while cur.r.q_degree().is_some_and(|d| d >= stop_degree) {
        let (quot, rem) = prev.r.right_divide(field, &cur.r).expect("nonzero divisor");
        let next = EeaStep {
            u: prev.u.sub(field, &quot.compose(field, &cur.u)),
            v: prev.v.sub(field, &quot.compose(field, &cur.v)),
            r: rem,
        };
        if traced {
            trace.push(next.clone());
        }
        prev = std::mem::replace(&mut cur, next);
    }
    let last = if cur.r.is_zero() { prev } else { cur };
    EeaOutcome {
        u: last.u,
        v: last.v,
        r: last.r,
        trace,
    }
}
