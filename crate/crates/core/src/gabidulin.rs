//! Gabidulin codes: construction, encoding, syndromes and bounded-distance
//! decoding via the linearized extended Euclidean algorithm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfq::{ExtensionField, FieldDescriptor, FieldElement};
use crate::linalg::{ext_null_space, ext_solve, BaseMatrix, ExtSolution};
use crate::linpoly::{lin_eea, LinearizedPoly};
use crate::rank_metric::{rank_norm, RankVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GabidulinCode {
    field: ExtensionField,
    n: usize,
    k: usize,
    g: Vec<FieldElement>,
    /// `generator[i][j] = g_j^(q^i)`.
    generator: Vec<Vec<FieldElement>>,
    /// Parity-check vector; syndromes are `sum_j y_j h_j^(q^b)`.
    h: Vec<FieldElement>,
    /// m x n expansion of h over GF(q).
    h_expansion: BaseMatrix,
}

/// Why the decoder gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FailureReason {
    /// Nonzero syndromes with t = 0.
    NoCorrectionCapability,
    /// The Euclidean stage did not produce a remainder of small enough degree.
    KeyEquationUnsolved,
    /// The error-span polynomial has q-degree 0 or above t.
    SpanDegreeOutOfRange,
    /// Root-space dimension differs from the q-degree of the error-span polynomial.
    RootSpaceDimension,
    /// The locator system has no (unique) solution.
    InconsistentLocators,
    /// A locator is not in the GF(q)-span of the parity-check vector.
    LocatorOutsideSpan,
    /// The reconstructed error has rank above t.
    ErrorRankExceeded,
    /// The corrected word is not a codeword.
    SyndromeCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded { codeword: RankVector, error: RankVector },
    Failure(FailureReason),
}

impl DecodeOutcome {
    pub fn is_failure(&self) -> bool {
        matches!(self, DecodeOutcome::Failure(_))
    }

    pub fn codeword(&self) -> Option<&RankVector> {
        match self {
            DecodeOutcome::Decoded { codeword, .. } => Some(codeword),
            DecodeOutcome::Failure(_) => None,
        }
    }
}

/// JSON form of a code: field parameters and the evaluation vector g
/// (elements as digit strings).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub modulus: Vec<u8>,
    pub g: Vec<String>,
}

impl GabidulinCode {
    /// Code with g = (1, α, ..., α^(n-1)) over the default field GF(q^m).
    pub fn new(q: u32, m: usize, n: usize, k: usize) -> Result<Self> {
        let field = ExtensionField::new(q, m)?;
        let g = (0..n.min(m)).map(|i| field.basis_element(i)).collect();
        Self::with_evaluation_points(field, n, k, g)
    }

    pub fn with_evaluation_points(
        field: ExtensionField,
        n: usize,
        k: usize,
        g: Vec<FieldElement>,
    ) -> Result<Self> {
        let m = field.m();
        if n == 0 || n > m {
            return Err(Error::InvalidParameters(format!("need 1 <= n <= m, got n={n}, m={m}")));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidParameters(format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        if g.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: g.len(),
            });
        }
        for &x in &g {
            field.check(x)?;
        }
        if rank_norm(&field, &g) != n {
            return Err(Error::NotIndependent);
        }
        let generator = (0..k)
            .map(|i| g.iter().map(|&x| field.frobenius(x, i)).collect())
            .collect();
        let d = n - k + 1;
        // h is orthogonal to g^(q^e) for e = -(d-2) ..= k-1
        let system: Vec<Vec<FieldElement>> = (0..n - 1)
            .map(|row| {
                let e = (row + m * n) as isize - (d as isize - 2);
                let e = e.rem_euclid(m as isize) as usize;
                g.iter().map(|&x| field.frobenius(x, e)).collect()
            })
            .collect();
        let null = ext_null_space(&field, &system, n);
        if null.len() != 1 {
            return Err(Error::InvariantViolation(format!(
                "parity-check space has dimension {}",
                null.len()
            )));
        }
        let h = null.into_iter().next().unwrap();
        let h_expansion = crate::rank_metric::expand(&field, &RankVector(h.clone()));
        debug_assert_eq!(h_expansion.rank(), n);
        Ok(Self {
            field,
            n,
            k,
            g,
            generator,
            h,
            h_expansion,
        })
    }

    pub fn from_descriptor(desc: &CodeDescriptor) -> Result<Self> {
        let field = ExtensionField::from_descriptor(&FieldDescriptor {
            q: desc.q,
            m: desc.m,
            modulus: desc.modulus.clone(),
        })?;
        let g = desc
            .g
            .iter()
            .map(|s| field.parse(s))
            .collect::<Result<Vec<_>>>()?;
        Self::with_evaluation_points(field, desc.n, desc.k, g)
    }

    pub fn descriptor(&self) -> CodeDescriptor {
        CodeDescriptor {
            q: self.field.q(),
            m: self.field.m(),
            n: self.n,
            k: self.k,
            modulus: self.field.modulus().to_vec(),
            g: self.g.iter().map(|&x| self.field.format(x)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.descriptor()).expect("descriptor serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let desc: CodeDescriptor = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_descriptor(&desc)
    }

    pub fn field(&self) -> &ExtensionField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn t(&self) -> usize {
        (self.d() - 1) / 2
    }

    pub fn g(&self) -> &[FieldElement] {
        &self.g
    }

    pub fn generator(&self) -> &[Vec<FieldElement>] {
        &self.generator
    }

    pub fn parity_check_vector(&self) -> &[FieldElement] {
        &self.h
    }

    /// `message × generator`.
    pub fn encode(&self, message: &[FieldElement]) -> Result<RankVector> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: message.len(),
            });
        }
        let f = &self.field;
        let mut c = vec![FieldElement::ZERO; self.n];
        for (row, &mi) in self.generator.iter().zip(message) {
            if mi.is_zero() {
                continue;
            }
            for (cj, &gij) in c.iter_mut().zip(row) {
                *cj = f.add(*cj, f.mul(mi, gij));
            }
        }
        Ok(RankVector(c))
    }

    fn check_length(&self, y: &[FieldElement]) -> Result<()> {
        if y.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        Ok(())
    }

    /// The d-1 syndromes `s_b = sum_j y_j h_j^(q^b)`; all zero iff y is a codeword.
    pub fn syndromes(&self, y: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.check_length(y)?;
        let f = &self.field;
        let mut hp = self.h.clone();
        let mut out = Vec::with_capacity(self.d() - 1);
        for b in 0..self.d() - 1 {
            if b > 0 {
                for x in hp.iter_mut() {
                    *x = f.frobenius(*x, 1);
                }
            }
            let s = y
                .iter()
                .zip(&hp)
                .fold(FieldElement::ZERO, |acc, (&yj, &hj)| f.add(acc, f.mul(yj, hj)));
            out.push(s);
        }
        Ok(out)
    }

    pub fn is_codeword(&self, y: &[FieldElement]) -> Result<bool> {
        Ok(self.syndromes(y)?.iter().all(|s| s.is_zero()))
    }

    /// Bounded-distance decoding up to rank t.
    pub fn decode(&self, y: &[FieldElement]) -> Result<DecodeOutcome> {
        let s = self.syndromes(y)?;
        let outcome = match self.locate_error(&s) {
            Ok(None) => DecodeOutcome::Decoded {
                codeword: RankVector(y.to_vec()),
                error: RankVector::zero(self.n),
            },
            Ok(Some(e)) => {
                let c = RankVector(y.to_vec()).sub(&self.field, &e)?;
                if rank_norm(&self.field, &e) > self.t() {
                    DecodeOutcome::Failure(FailureReason::ErrorRankExceeded)
                } else if !self.is_codeword(&c)? {
                    DecodeOutcome::Failure(FailureReason::SyndromeCheck)
                } else {
                    DecodeOutcome::Decoded { codeword: c, error: e }
                }
            }
            Err(reason) => DecodeOutcome::Failure(reason),
        };
        if let DecodeOutcome::Decoded { codeword, error } = &outcome {
            debug_assert!(self.is_codeword(codeword).unwrap());
            debug_assert!(rank_norm(&self.field, error) <= self.t());
        }
        Ok(outcome)
    }

    /// Error vector consistent with the syndromes, `None` if they vanish.
    fn locate_error(&self, s: &[FieldElement]) -> std::result::Result<Option<RankVector>, FailureReason> {
        if s.iter().all(|x| x.is_zero()) {
            return Ok(None);
        }
        let t = self.t();
        if t == 0 {
            return Err(FailureReason::NoCorrectionCapability);
        }
        let f = &self.field;
        let dm1 = self.d() - 1;
        let a = LinearizedPoly::monomial(FieldElement::ONE, dm1);
        let b = LinearizedPoly::from_coeffs(s.to_vec());
        let out = lin_eea(f, &a, &b, dm1 - t);
        if out.r.q_degree().is_some_and(|d| d >= dm1 - t) {
            return Err(FailureReason::KeyEquationUnsolved);
        }
        let span_poly = out.v;
        let tau = match span_poly.q_degree() {
            Some(tau) if (1..=t).contains(&tau) => tau,
            _ => return Err(FailureReason::SpanDegreeOutOfRange),
        };
        let values = span_poly.root_space_basis(f);
        if values.len() != tau {
            return Err(FailureReason::RootSpaceDimension);
        }

        // s_b^(q^-b) = sum_l E_l^(q^-b) x_l
        let rows: Vec<Vec<FieldElement>> = (0..dm1)
            .map(|b| values.iter().map(|&e| f.frobenius_inv(e, b)).collect())
            .collect();
        let rhs: Vec<FieldElement> = (0..dm1).map(|b| f.frobenius_inv(s[b], b)).collect();
        let locators = match ext_solve(f, &rows, &rhs) {
            ExtSolution::Unique(x) => x,
            _ => return Err(FailureReason::InconsistentLocators),
        };

        let mut e = vec![FieldElement::ZERO; self.n];
        for (&el, &xl) in values.iter().zip(&locators) {
            let coeffs = self
                .h_expansion
                .solve(&f.coords(xl))
                .ok_or(FailureReason::LocatorOutsideSpan)?;
            for (ej, &c) in e.iter_mut().zip(&coeffs) {
                *ej = f.add(*ej, f.scale(el, c));
            }
        }
        Ok(Some(RankVector(e)))
    }
}
