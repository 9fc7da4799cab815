//! Counting formulas and decoder-error-probability bounds for linear MRD codes.
//!
//! Counts (Gaussian binomials, `A(m,u)`, ball volumes, decodable-vector
//! bounds) are exact integers. Probability bounds come back as [`LogProb`],
//! which keeps a base-q logarithm next to the exact rational when one exists,
//! since the values underflow `f64` at realistic code sizes.
//!
//! Formulas that make sense in any numeric type are generic over [`Scalar`];
//! evaluate them in `BigRational` for exact results or in `f64` for speed.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn big_pow(q: u32, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(q), e)
}

/// Number of v-dimensional subspaces of GF(q)^n; zero when `v > n`.
pub fn gaussian_binomial(n: usize, v: usize, q: u32) -> BigUint {
    if v > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..v {
        num *= big_pow(q, n) - big_pow(q, i);
        den *= big_pow(q, v) - big_pow(q, i);
    }
    num / den
}

/// Gaussian binomial with signed arguments; zero outside `0 <= v <= n`.
pub fn gaussian_binomial_signed(n: i64, v: i64, q: u32) -> BigUint {
    if n < 0 || v < 0 || v > n {
        BigUint::zero()
    } else {
        gaussian_binomial(n as usize, v as usize, q)
    }
}

/// `A(m,u) = prod_{i<u} (q^m - q^i)`, the number of ordered u-tuples of
/// linearly independent vectors in GF(q)^m; zero when `u > m`.
pub fn a_mu(m: usize, u: usize, q: u32) -> BigUint {
    if u > m {
        return BigUint::zero();
    }
    (0..u).fold(BigUint::one(), |acc, i| acc * (big_pow(q, m) - big_pow(q, i)))
}

/// Size of a rank-metric ball of radius t in GF(q^m)^n.
pub fn ball_volume(n: usize, m: usize, t: usize, q: u32) -> BigUint {
    (0..=t.min(n).min(m))
        .map(|i| gaussian_binomial(n, i, q) * a_mu(m, i, q))
        .sum()
}

/// Number of terms needed so that the tail estimate of the series for
/// sigma(q) drops below `tol`.
fn sigma_terms(q: u32, tol: f64) -> usize {
    let qf = q as f64;
    let ln_q = qf.ln();
    let mut k = 1usize;
    loop {
        let tail = 1.0 / (k as f64 * (qf.powi(k as i32) - 1.0) * (qf - 1.0)) / ln_q;
        if tail < tol {
            return k;
        }
        k += 1;
    }
}

/// `(1/ln q) * sum_{k=1}^{terms} 1/(k (q^k - 1))`.
pub fn sigma_q_truncated<F: Float + FromPrimitive>(q: u32, terms: usize) -> F {
    let qf = F::from_u32(q).unwrap();
    let mut acc = F::zero();
    for k in 1..=terms {
        let kf = F::from_usize(k).unwrap();
        let denom = kf * (qf.powi(k as i32) - F::one());
        if denom.is_infinite() {
            break;
        }
        acc = acc + F::one() / denom;
    }
    acc / qf.ln()
}

/// The constant sigma(q) bounding the gap between `A(m,u)` and `q^(mu)`.
pub fn sigma_q<F: Float + FromPrimitive>(q: u32) -> F {
    assert!(q >= 2, "sigma(q) needs q >= 2");
    sigma_q_truncated(q, sigma_terms(q, 1e-12))
}

pub(crate) fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// `log_q` of a positive rational, accurate far beyond the `f64` range.
pub fn log_q_rational(q: u32, x: &BigRational) -> f64 {
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    (log2_biguint(num) - log2_biguint(den)) / (q as f64).log2()
}

/// A probability (or count) in base-q logarithmic form, with its exact value
/// attached when it is rational.
#[derive(Debug, Clone, PartialEq)]
pub struct LogProb {
    pub q: u32,
    pub log_q: f64,
    pub exact: Option<BigRational>,
}

impl LogProb {
    pub fn from_exact(q: u32, exact: BigRational) -> Self {
        let log_q = if exact.is_zero() {
            f64::NEG_INFINITY
        } else {
            log_q_rational(q, &exact)
        };
        Self {
            q,
            log_q,
            exact: Some(exact),
        }
    }

    pub fn from_log(q: u32, log_q: f64) -> Self {
        Self {
            q,
            log_q,
            exact: None,
        }
    }

    /// The value as an `f64` (may underflow to zero).
    pub fn value(&self) -> f64 {
        (self.q as f64).powf(self.log_q)
    }

    pub fn log2(&self) -> f64 {
        self.log_q * (self.q as f64).log2()
    }

    /// Scientific notation (`1.234560e-5`), derived from the logarithm when
    /// the value is below the `f64` range.
    pub fn to_scientific(&self) -> String {
        if self.log_q == f64::NEG_INFINITY {
            return format!("{:.6e}", 0.0);
        }
        let l10 = self.log_q * (self.q as f64).log10();
        if l10 > -300.0 {
            return format!("{:.6e}", self.value());
        }
        let mut e = l10.floor();
        let mut mant = 10f64.powf(l10 - e);
        if format!("{mant:.6}").starts_with("10") {
            mant /= 10.0;
            e += 1.0;
        }
        format!("{mant:.6}e{}", e as i64)
    }

    /// Whether the exact and logarithmic forms agree to 1e-9 relative error.
    pub fn is_consistent(&self) -> bool {
        match &self.exact {
            None => true,
            Some(e) if e.is_zero() => self.log_q == f64::NEG_INFINITY,
            Some(e) => {
                let diff_ln = (log_q_rational(self.q, e) - self.log_q) * (self.q as f64).ln();
                diff_ln.abs() < 1e-9
            }
        }
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{:.6}", self.q, self.log_q)
    }
}

/// Parameters of a linear (n, k) MRD code over GF(q^m), n <= m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundParams {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub k: usize,
}

impl BoundParams {
    pub fn new(q: u32, m: usize, n: usize, k: usize) -> Result<Self> {
        crate::gfq::PrimeField::new(q)?;
        if n == 0 || n > m {
            return Err(Error::InvalidParameters(format!("need 1 <= n <= m, got n={n}, m={m}")));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidParameters(format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        Ok(Self { q, m, n, k })
    }

    /// Code with `d = 2t + 1`, i.e. `k = n - 2t`.
    pub fn with_correction_capability(q: u32, m: usize, n: usize, t: usize) -> Result<Self> {
        if 2 * t >= n {
            return Err(Error::InvalidParameters(format!("t = {t} too large for n = {n}")));
        }
        Self::new(q, m, n, n - 2 * t)
    }

    /// Minimum rank distance `n - k + 1`.
    pub fn d(&self) -> usize {
        self.n - self.k + 1
    }

    /// Redundancy `n - k`.
    pub fn r(&self) -> usize {
        self.n - self.k
    }

    /// Error-correction capability `floor((d-1)/2)`.
    pub fn t(&self) -> usize {
        (self.d() - 1) / 2
    }

    fn qm_minus_one(&self) -> BigUint {
        big_pow(self.q, self.m) - 1u32
    }

    fn check_rank(&self, u: usize) -> Result<()> {
        let max = self.n;
        if u > max {
            return Err(Error::RankOutOfRange { u, max });
        }
        Ok(())
    }
}

/// `[n u] (q^m-1)^(u-r)` evaluated for any u (negative exponents allowed).
pub fn rank_dist_formula<T: Scalar>(p: &BoundParams, u: usize) -> T {
    T::from_biguint(&gaussian_binomial(p.n, u, p.q))
        * T::from_biguint(&p.qm_minus_one()).powi(u as i64 - p.r() as i64)
}

/// Upper bound on the number of codewords of rank u, valid for u >= d.
pub fn rank_dist_bound(p: &BoundParams, u: usize) -> Result<BigUint> {
    if u < p.d() {
        return Err(Error::InvalidParameters(format!(
            "codeword rank-distribution bound needs u >= d = {}, got {u}",
            p.d()
        )));
    }
    Ok(gaussian_binomial(p.n, u, p.q) * num_traits::pow(p.qm_minus_one(), u - p.r()))
}

/// Bound on D_u, the number of decodable vectors of rank u.
#[derive(Debug, Clone, PartialEq)]
pub enum DuBound {
    /// u >= d: `[n u](q^m-1)^(u-r) V_t`.
    HighRank { bound: BigUint },
    /// d - t <= u < d: the double sum over restricted-code weights, together
    /// with its closed-form relaxation `q^2/(q^2-1) [n u](q^m-1)^(u-r) V_t`.
    MidRank { bound: BigUint, relaxed: BigRational },
}

impl DuBound {
    /// The tightest exact bound.
    pub fn tightest(&self) -> &BigUint {
        match self {
            DuBound::HighRank { bound } | DuBound::MidRank { bound, .. } => bound,
        }
    }
}

fn q2_factor<T: Scalar>(q: u32) -> T {
    let q2 = T::from_u64(q as u64 * q as u64);
    q2.clone() / (q2 - T::one())
}

/// The mid-rank double sum, exact.
pub fn du_mid_sum(p: &BoundParams, u: usize) -> BigUint {
    let (n, m, q, t, d, r) = (p.n, p.m, p.q, p.t(), p.d(), p.r());
    debug_assert!(u + t >= d && u < d);
    let v = n - u;
    // r' = r - u is the redundancy of the code restricted to a dimension-v ELS
    let r_prime = r - u;
    let qm1 = p.qm_minus_one();
    let mut total = BigUint::zero();
    for w in (d - u)..=t {
        let outer = gaussian_binomial(v, w, q) * num_traits::pow(qm1.clone(), w - r_prime);
        if outer.is_zero() {
            continue;
        }
        let inner: BigUint = (w..=t)
            .map(|s| {
                gaussian_binomial(u, s - w, q)
                    * a_mu(m, s - w, q)
                    * big_pow(q, w * (u + w - s))
            })
            .sum();
        total += outer * inner;
    }
    gaussian_binomial(n, u, q) * total
}

/// `q^2/(q^2-1) [n u] (q^m-1)^(u-r) V_t`, in any scalar type.
pub fn du_relaxed<T: Scalar>(p: &BoundParams, u: usize) -> T {
    q2_factor::<T>(p.q)
        * rank_dist_formula::<T>(p, u)
        * T::from_biguint(&ball_volume(p.n, p.m, p.t(), p.q))
}

pub fn du_bound(p: &BoundParams, u: usize) -> Result<DuBound> {
    p.check_rank(u)?;
    let (d, t) = (p.d(), p.t());
    if u + t < d {
        return Err(Error::InvalidParameters(format!(
            "decodable-vector bound needs u >= d - t = {}, got {u}",
            d - t
        )));
    }
    if u >= d {
        let bound = rank_dist_bound(p, u)? * ball_volume(p.n, p.m, t, p.q);
        Ok(DuBound::HighRank { bound })
    } else {
        Ok(DuBound::MidRank {
            bound: du_mid_sum(p, u),
            relaxed: du_relaxed::<BigRational>(p, u),
        })
    }
}

/// Rank-specific bound on P_E(t;u) in scalar type `T`: the
/// `(q^m-1)^(u-r) V_t / A(m,u)` form, multiplied by `q^2/(q^2-1)` when u < d.
pub fn pe_rank_specific<T: Scalar>(p: &BoundParams, u: usize) -> T {
    let base = T::from_biguint(&p.qm_minus_one()).powi(u as i64 - p.r() as i64)
        * T::from_biguint(&ball_volume(p.n, p.m, p.t(), p.q))
        / T::from_biguint(&a_mu(p.m, u, p.q));
    if u < p.d() {
        q2_factor::<T>(p.q) * base
    } else {
        base
    }
}

/// `log_q` of the rank- and length-independent bound `q^(-t^2 + 2 sigma(q))`.
pub fn pe_universal_log_q(q: u32, t: usize) -> f64 {
    -((t * t) as f64) + 2.0 * sigma_q::<f64>(q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeBound {
    /// Rank-specific bound (exact rational plus log form).
    pub rank_specific: LogProb,
    /// Universal bound depending on q and t only.
    pub universal: LogProb,
}

pub fn pe_bound(p: &BoundParams, u: usize) -> Result<PeBound> {
    p.check_rank(u)?;
    if u + p.t() < p.d() {
        return Err(Error::InvalidParameters(format!(
            "P_E bound needs u >= d - t = {}; below that P_E = 0",
            p.d() - p.t()
        )));
    }
    let rank_specific = LogProb::from_exact(p.q, pe_rank_specific::<BigRational>(p, u));
    let universal = LogProb::from_log(p.q, pe_universal_log_q(p.q, p.t()));
    debug_assert!(
        rank_specific.log_q <= universal.log_q + 1e-9,
        "rank-specific bound exceeds universal bound at {p:?}, u = {u}"
    );
    Ok(PeBound {
        rank_specific,
        universal,
    })
}

/// One line of the bounds table.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub params: BoundParams,
    pub u: usize,
    pub du_bound: BigUint,
    pub pe_rank_specific: LogProb,
    pub pe_universal: LogProb,
}

impl BoundsRow {
    /// The universal bound is at least 1 and says nothing.
    pub fn is_trivial(&self) -> bool {
        self.pe_universal.log_q >= 0.0
    }
}

/// Bounds for each u in `us` with `d - t <= u <= n`; other ranks are skipped.
pub fn bounds_rows(p: &BoundParams, us: impl IntoIterator<Item = usize>) -> Result<Vec<BoundsRow>> {
    us.into_iter()
        .filter(|&u| u + p.t() >= p.d() && u <= p.n)
        .map(|u| {
            let pe = pe_bound(p, u)?;
            Ok(BoundsRow {
                params: *p,
                u,
                du_bound: du_bound(p, u)?.tightest().clone(),
                pe_rank_specific: pe.rank_specific,
                pe_universal: pe.universal,
            })
        })
        .collect()
}

pub const BOUNDS_HEADER: [&str; 11] = [
    "q",
    "m",
    "n",
    "k",
    "t",
    "u",
    "Du_bound",
    "PE_eq6_7",
    "PE_eq8_log_q",
    "PE_eq8",
    "note",
];

pub fn write_bounds_csv<W: std::io::Write>(rows: &[BoundsRow], w: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidParameters(format!("csv output: {e}"));
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(BOUNDS_HEADER).map_err(io)?;
    for r in rows {
        let p = &r.params;
        wr.write_record([
            p.q.to_string(),
            p.m.to_string(),
            p.n.to_string(),
            p.k.to_string(),
            p.t().to_string(),
            r.u.to_string(),
            r.du_bound.to_string(),
            r.pe_rank_specific.to_scientific(),
            format!("{:.6}", r.pe_universal.log_q),
            r.pe_universal.to_scientific(),
            if r.is_trivial() { "trivial (>=1)".to_string() } else { String::new() },
        ])
        .map_err(io)?;
    }
    wr.flush().map_err(|e| Error::InvalidParameters(format!("csv output: {e}")))?;
    Ok(())
}

pub fn bounds_json(rows: &[BoundsRow]) -> serde_json::Value {
    let items: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "q": r.params.q,
                "m": r.params.m,
                "n": r.params.n,
                "k": r.params.k,
                "t": r.params.t(),
                "u": r.u,
                "Du_bound": r.du_bound.to_string(),
                "PE_eq6_7": r.pe_rank_specific.to_scientific(),
                "PE_eq6_7_log_q": r.pe_rank_specific.log_q,
                "PE_eq8_log_q": r.pe_universal.log_q,
                "PE_eq8": r.pe_universal.value(),
                "trivial": r.is_trivial(),
            })
        })
        .collect();
    serde_json::Value::Array(items)
}

/// One family of identity/inequality checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub instances: usize,
    pub violations: Vec<String>,
}

impl IdentityCheck {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            instances: 0,
            violations: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.violations.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct IdentityRanges {
    /// v, u <= this for the q-Vandermonde identity.
    pub vandermonde_max: usize,
    pub vandermonde_qs: Vec<u32>,
    /// m <= this for the power/count inequalities.
    pub max_m: usize,
    pub qs: Vec<u32>,
}

impl Default for IdentityRanges {
    fn default() -> Self {
        Self {
            vandermonde_max: 6,
            vandermonde_qs: vec![2, 3],
            max_m: 16,
            qs: vec![2, 3, 5],
        }
    }
}

/// Verifies the q-Vandermonde identity and the power/count inequalities the
/// probability bounds rest on.
pub fn identity_checks(ranges: &IdentityRanges) -> Vec<IdentityCheck> {
    let mut vandermonde = IdentityCheck::new("q-vandermonde");
    for &q in &ranges.vandermonde_qs {
        for v in 0..=ranges.vandermonde_max {
            for u in 0..=ranges.vandermonde_max {
                for s in 0..=v + u {
                    let lhs: BigUint = (0..=s)
                        .filter(|&w| s - w <= u)
                        .map(|w| {
                            gaussian_binomial(v, w, q)
                                * gaussian_binomial(u, s - w, q)
                                * big_pow(q, w * (u + w - s))
                        })
                        .sum();
                    let rhs = gaussian_binomial(v + u, s, q);
                    vandermonde.record(lhs == rhs, || format!("q={q} v={v} u={u} s={s}"));
                }
            }
        }
    }

    let mut power = IdentityCheck::new("power-vs-full-rank-count");
    let mut full_rank = IdentityCheck::new("full-rank-count-lower-bound");
    let mut ball = IdentityCheck::new("ball-volume-upper-bound");
    for &q in &ranges.qs {
        let sigma = sigma_q::<f64>(q);
        for m in 1..=ranges.max_m {
            // (q^2 - 1) q^(ms) <= q^2 A(m,s), on the range s <= m/2 where it is used
            for s in 0..=m / 2 {
                let lhs = BigUint::from(q * q - 1) * big_pow(q, m * s);
                let rhs = BigUint::from(q * q) * a_mu(m, s, q);
                power.record(lhs <= rhs, || format!("q={q} m={m} s={s}"));
            }
            for u in 0..=m {
                let ratio = BigRational::new(
                    BigInt::from(a_mu(m, u, q)),
                    BigInt::from(big_pow(q, m * u)),
                );
                let lhs = log_q_rational(q, &ratio);
                full_rank.record(lhs >= -sigma - 1e-12, || format!("q={q} m={m} u={u}"));
            }
            for n in 1..=m {
                for t in 0..=(m / 2).min(n) {
                    let vt = ball_volume(n, m, t, q);
                    let excess = (log2_biguint(&vt) / (q as f64).log2()) - (t * (n + m - t)) as f64;
                    ball.record(excess <= sigma + 1e-12, || format!("q={q} m={m} n={n} t={t}"));
                }
            }
        }
    }
    vec![vandermonde, power, full_rank, ball]
}

/// The (q, m, s) with s > m/2 for which `q^(ms) <= q^2/(q^2-1) A(m,s)` fails.
/// The inequality is only claimed on s <= m/2; this lists the complement.
pub fn power_bound_counterexamples(qs: &[u32], max_m: usize) -> Vec<(u32, usize, usize)> {
    let mut out = Vec::new();
    for &q in qs {
        for m in 1..=max_m {
            for s in 0..=m {
                let lhs = BigUint::from(q * q - 1) * big_pow(q, m * s);
                let rhs = BigUint::from(q * q) * a_mu(m, s, q);
                if lhs > rhs {
                    out.push((q, m, s));
                }
            }
        }
    }
    out
}
