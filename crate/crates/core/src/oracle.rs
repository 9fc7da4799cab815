//! Exhaustive ground truth for tiny codes: full codebooks, rank
//! distributions, decodable-vector counts and exact error probabilities.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{a_mu, du_bound, gaussian_binomial, pe_bound, BoundParams, DuBound, LogProb};
use crate::error::{Error, Result};
use crate::gabidulin::GabidulinCode;
use crate::gfq::ExtensionField;
use crate::rank_metric::{all_vectors, rank_norm, vector_from_index, vector_index, RankVector};

/// Largest codebook enumerated by [`ExhaustiveCodebook`].
pub const CODEBOOK_LIMIT: u128 = 1 << 16;
/// Largest ambient space scanned by the censuses.
pub const SPACE_LIMIT: u128 = 1 << 20;

/// The parameter sets small enough for every exhaustive check.
pub const TINY_INSTANCES: [(u32, usize, usize, usize); 4] = [(2, 3, 3, 1), (2, 4, 4, 2), (2, 3, 2, 1), (3, 2, 2, 1)];

fn guard(what: &'static str, needed: Option<u128>, limit: u128) -> Result<u128> {
    needed.filter(|&x| x <= limit).ok_or_else(|| Error::GuardExceeded {
        what,
        needed: needed.map_or_else(|| "> 2^128".to_string(), |x| x.to_string()),
        limit: limit.to_string(),
    })
}

#[derive(Debug, Clone)]
pub struct ExhaustiveCodebook {
    code: GabidulinCode,
    words: Vec<RankVector>,
}

impl ExhaustiveCodebook {
    pub fn new(code: GabidulinCode) -> Result<Self> {
        let f = code.field();
        guard("codebook", f.order().checked_pow(code.k() as u32), CODEBOOK_LIMIT)?;
        let words = all_vectors(f, code.k(), CODEBOOK_LIMIT)?
            .map(|msg| code.encode(&msg))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { code, words })
    }

    pub fn code(&self) -> &GabidulinCode {
        &self.code
    }

    pub fn words(&self) -> &[RankVector] {
        &self.words
    }
}

/// A_u for u = 0..=n.
pub fn exhaustive_rank_distribution(book: &ExhaustiveCodebook) -> Vec<u64> {
    let f = book.code().field();
    let mut counts = vec![0u64; book.code().n() + 1];
    for w in book.words() {
        counts[rank_norm(f, w)] += 1;
    }
    counts
}

/// One rank class of the census.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusRow {
    pub u: usize,
    pub n_u: u64,
    pub d_u: u64,
    /// D_u / N_u, the error probability for u > t; `None` for u <= t.
    pub pe_exact: Option<BigRational>,
    /// Tightest D_u bound and, for mid ranks, its closed-form relaxation.
    pub du_bound: Option<DuBound>,
    /// Rank-specific P_E bound (u >= d - t).
    pub pe_rank_specific: Option<LogProb>,
    /// Universal P_E bound.
    pub pe_universal: LogProb,
}

#[derive(Debug, Clone)]
pub struct DecodableCensus {
    pub params: BoundParams,
    pub rows: Vec<CensusRow>,
    /// Vectors where the ball-covering and decoder-based classifications differ.
    pub disagreements: u64,
    /// |C| * V_t, the number of decodable vectors predicted by unique decomposition.
    pub predicted_total: BigUint,
}

impl DecodableCensus {
    /// Every way in which an exhaustive count exceeds its bound or a
    /// bound chain is out of order.
    pub fn chain_violations(&self) -> Vec<String> {
        let t = self.params.t();
        let d = self.params.d();
        let mut out = Vec::new();
        if self.disagreements > 0 {
            out.push(format!("{} decodability disagreements", self.disagreements));
        }
        let total: u64 = self.rows.iter().map(|r| r.d_u).sum();
        if BigUint::from(total) != self.predicted_total {
            out.push(format!("sum D_u = {total}, expected {}", self.predicted_total));
        }
        for r in &self.rows {
            let u = r.u;
            if u <= t && r.d_u != r.n_u {
                out.push(format!("u={u}: D_u != N_u below t"));
            }
            if u > t && u + t < d && r.d_u != 0 {
                out.push(format!("u={u}: D_u = {} in the zero region", r.d_u));
            }
            if let Some(b) = &r.du_bound {
                if BigUint::from(r.d_u) > *b.tightest() {
                    out.push(format!("u={u}: D_u = {} above bound {}", r.d_u, b.tightest()));
                }
                if let DuBound::MidRank { bound, relaxed } = b {
                    if BigRational::from_integer(BigInt::from(bound.clone())) > *relaxed {
                        out.push(format!("u={u}: mid-rank sum above its relaxation"));
                    }
                }
            }
            if let (Some(pe), Some(spec)) = (&r.pe_exact, &r.pe_rank_specific) {
                if Some(pe) > spec.exact.as_ref() {
                    out.push(format!("u={u}: exact P_E above rank-specific bound"));
                }
                if spec.log_q > r.pe_universal.log_q + 1e-12 {
                    out.push(format!("u={u}: rank-specific bound above universal bound"));
                }
                if !pe.is_zero() && crate::bounds::log_q_rational(self.params.q, pe) > r.pe_universal.log_q {
                    out.push(format!("u={u}: exact P_E above universal bound"));
                }
            }
        }
        out
    }

    /// CSV with columns `u,N_u,D_u,PE_exact,PE_eq6_7,PE_eq8`; probabilities
    /// as decimals, blank where undefined.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidParameters(format!("csv output: {e}"));
        wr.write_record(["u", "N_u", "D_u", "PE_exact", "PE_eq6_7", "PE_eq8"]).map_err(io)?;
        for r in &self.rows {
            let pe = r.pe_exact.as_ref().map(|p| fmt_f64(p.to_f64().unwrap_or(f64::NAN)));
            let spec = r.pe_rank_specific.as_ref().map(|p| fmt_f64(p.value()));
            wr.write_record([
                r.u.to_string(),
                r.n_u.to_string(),
                r.d_u.to_string(),
                pe.unwrap_or_default(),
                spec.unwrap_or_default(),
                fmt_f64(r.pe_universal.value()),
            ])
            .map_err(io)?;
        }
        wr.flush().map_err(|e| Error::InvalidParameters(format!("csv output: {e}")))?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row {
            u: usize,
            n_u: u64,
            d_u: u64,
            pe_exact: Option<String>,
            pe_eq6_7: Option<f64>,
            pe_eq8: f64,
        }
        let rows: Vec<Row> = self
            .rows
            .iter()
            .map(|r| Row {
                u: r.u,
                n_u: r.n_u,
                d_u: r.d_u,
                pe_exact: r.pe_exact.as_ref().map(|p| p.to_string()),
                pe_eq6_7: r.pe_rank_specific.as_ref().map(|p| p.value()),
                pe_eq8: r.pe_universal.value(),
            })
            .collect();
        serde_json::json!({
            "params": self.params,
            "disagreements": self.disagreements,
            "rows": rows,
        })
    }
}

pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.6e}")
}

/// Classifies every vector of GF(q^m)^n by rank and decodability, once by
/// marking the radius-t balls around all codewords and once by running the
/// decoder, and tabulates D_u together with the matching bounds.
pub fn decodable_census(book: &ExhaustiveCodebook) -> Result<DecodableCensus> {
    let code = book.code();
    let f = code.field();
    let (n, t) = (code.n(), code.t());
    let total = guard("vector space census", f.order().checked_pow(n as u32), SPACE_LIMIT)? as usize;
    let params = BoundParams::new(f.q(), f.m(), n, code.k())?;

    let ranks: Vec<u8> = (0..total)
        .into_par_iter()
        .map(|i| rank_norm(f, &vector_from_index(f, n, i as u128)) as u8)
        .collect();

    // (a) union of balls
    let ball: Vec<RankVector> = (0..total)
        .filter(|&i| ranks[i] as usize <= t)
        .map(|i| vector_from_index(f, n, i as u128))
        .collect();
    let mut covered = vec![false; total];
    for c in book.words() {
        for e in &ball {
            let y = c.add(f, e)?;
            covered[vector_index(f, &y) as usize] = true;
        }
    }

    // (b) decoder
    let decoded: Vec<bool> = (0..total)
        .into_par_iter()
        .map(|i| {
            let y = vector_from_index(f, n, i as u128);
            !code.decode(&y).expect("length matches").is_failure()
        })
        .collect();

    let disagreements = covered.iter().zip(&decoded).filter(|(a, b)| a != b).count() as u64;

    let mut n_u = vec![0u64; n + 1];
    let mut d_u = vec![0u64; n + 1];
    for i in 0..total {
        let u = ranks[i] as usize;
        n_u[u] += 1;
        if covered[i] {
            d_u[u] += 1;
        }
    }

    let d = params.d();
    let rows = (0..=n.min(f.m()))
        .map(|u| {
            let in_range = u + t >= d;
            let pe_exact = (u > t).then(|| {
                BigRational::new(BigInt::from(d_u[u]), BigInt::from(n_u[u]))
            });
            let bounds = if in_range { Some(pe_bound(&params, u)?) } else { None };
            Ok(CensusRow {
                u,
                n_u: n_u[u],
                d_u: d_u[u],
                pe_exact,
                du_bound: if in_range { Some(du_bound(&params, u)?) } else { None },
                pe_rank_specific: bounds.as_ref().map(|b| b.rank_specific.clone()),
                pe_universal: LogProb::from_log(f.q(), crate::bounds::pe_universal_log_q(f.q(), t)),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let predicted_total = BigUint::from(book.words().len()) * crate::bounds::ball_volume(n, f.m(), t, f.q());
    Ok(DecodableCensus {
        params,
        rows,
        disagreements,
        predicted_total,
    })
}

/// `[u s-w] A(m, s-w) q^(w(u-s+w))`: bound on the number of z in GF(q^m)^u
/// completing a fixed y of rank w to a vector (y, z) of rank s.
pub fn completion_bound(u: usize, w: usize, s: usize, m: usize, q: u32) -> BigUint {
    if s < w || s - w > u {
        return BigUint::zero();
    }
    gaussian_binomial(u, s - w, q) * a_mu(m, s - w, q) * num_traits::pow(BigUint::from(q), w * (u + w - s))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionRow {
    pub w: usize,
    pub s: usize,
    /// Largest count over all y of rank w.
    pub max_count: u64,
    pub bound: BigUint,
}

impl CompletionRow {
    pub fn holds(&self) -> bool {
        BigUint::from(self.max_count) <= self.bound
    }
}

/// For every y in GF(q^m)^v and every s, counts the z in GF(q^m)^u with
/// rank (y, z) = s, and reports the worst case per (rank y, s) against
/// [`completion_bound`].
pub fn completion_census(field: &ExtensionField, v: usize, u: usize) -> Result<Vec<CompletionRow>> {
    let n = v + u;
    guard("completion census", field.order().checked_pow(n as u32), SPACE_LIMIT)?;
    let zs: Vec<RankVector> = all_vectors(field, u, SPACE_LIMIT)?.collect();
    let max_rank = n.min(field.m());
    let mut worst = vec![vec![0u64; max_rank + 1]; v.min(field.m()) + 1];
    for y in all_vectors(field, v, SPACE_LIMIT)? {
        let w = rank_norm(field, &y);
        let mut counts = vec![0u64; max_rank + 1];
        let mut x = y.0.clone();
        x.resize(n, Default::default());
        for z in &zs {
            x[v..].copy_from_slice(z);
            counts[rank_norm(field, &x)] += 1;
        }
        for (s, &c) in counts.iter().enumerate() {
            worst[w][s] = worst[w][s].max(c);
        }
    }
    let mut rows = Vec::new();
    for (w, per_s) in worst.iter().enumerate() {
        for (s, &max_count) in per_s.iter().enumerate().skip(w) {
            rows.push(CompletionRow {
                w,
                s,
                max_count,
                bound: completion_bound(u, w, s, field.m(), field.q()),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn book(q: u32, m: usize, n: usize, k: usize) -> ExhaustiveCodebook {
        ExhaustiveCodebook::new(GabidulinCode::new(q, m, n, k).unwrap()).unwrap()
    }

    #[test]
    fn rank_distributions() {
        let a = exhaustive_rank_distribution(&book(2, 3, 3, 1));
        assert_eq!(a, vec![1, 0, 0, 7]);
        let a = exhaustive_rank_distribution(&book(2, 4, 4, 2));
        assert_eq!((a[0], a[1], a[2], a[3] + a[4]), (1, 0, 0, 255));
        let full = book(2, 2, 2, 2);
        let a = exhaustive_rank_distribution(&full);
        for u in 0..=2 {
            assert_eq!(BigUint::from(a[u]), crate::rank_metric::count_rank_u(2, 2, 2, u).unwrap());
        }
        assert!(matches!(
            ExhaustiveCodebook::new(GabidulinCode::new(2, 9, 9, 2).unwrap()),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn census_small_code() {
        let census = decodable_census(&book(2, 3, 3, 1)).unwrap();
        assert_eq!(census.disagreements, 0);
        assert!(census.chain_violations().is_empty(), "{:?}", census.chain_violations());
        let total: u64 = census.rows.iter().map(|r| r.n_u).sum();
        assert_eq!(total, 512);
        let row3 = &census.rows[3];
        assert!(row3.pe_exact.as_ref().unwrap() <= row3.pe_rank_specific.as_ref().unwrap().exact.as_ref().unwrap());
        let mut buf = Vec::new();
        census.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("u,N_u,D_u,PE_exact,PE_eq6_7,PE_eq8\n"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn completion_counts_within_bound() {
        let f = ExtensionField::new(2, 3).unwrap();
        let rows = completion_census(&f, 1, 2).unwrap();
        assert!(rows.iter().all(CompletionRow::holds));
        let zero = rows.iter().find(|r| r.w == 0 && r.s == 0).unwrap();
        assert_eq!((zero.max_count, zero.bound.clone()), (1, BigUint::from(1u32)));
    }
}
