//! Exhaustive verification suites for the structural facts about elementary
//! subspaces and MRD codes that the error-probability bounds are built on.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;

use crate::bounds::{gaussian_binomial, identity_checks, rank_dist_bound, BoundParams, IdentityRanges};
use crate::els::{complement, containing_els, enumerate_els, rank_witness, restrict_code, subspace_rank, ElementaryBasis, SubspacePair};
use crate::error::{Error, Result};
use crate::gabidulin::GabidulinCode;
use crate::gfq::ExtensionField;
use crate::oracle::{decodable_census, exhaustive_rank_distribution, completion_census, ExhaustiveCodebook, TINY_INSTANCES};
use crate::rank_metric::{all_vectors, rank_norm, RankVector};

pub const SUITES: [&str; 4] = ["els-lemmas", "mrd-lemmas", "bound-chain", "identities"];

/// Vector spaces up to this size are scanned in full; larger ones through
/// one representative per GF(q) row space.
const FULL_SCAN_LIMIT: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub instances: usize,
    pub violations: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            instances: 0,
            violations: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.violations.len() < 20 {
            self.violations.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "  {status} {} ({} instances, {} violations)", c.name, c.instances, c.violations.len())?;
            for v in &c.violations {
                writeln!(f, "    {v}")?;
            }
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let checks = match name {
        "els-lemmas" => els_suite(&[2, 3], 4, 4)?,
        "mrd-lemmas" => mrd_suite()?,
        "bound-chain" => bound_chain_suite()?,
        "identities" => identity_checks(&IdentityRanges::default())
            .into_iter()
            .map(|c| Check {
                name: c.name.to_string(),
                instances: c.instances,
                violations: c.violations,
            })
            .collect(),
        other => {
            return Err(Error::InvalidParameters(format!(
                "unknown suite {other:?}; available: {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        checks,
    })
}

/// The vectors of GF(q^m)^n that per-vector checks run on: all of them when
/// the space is small, else one vector per row space of the expansion (each
/// subspace of GF(q)^n of dimension at most m). All per-vector statements
/// checked here depend on x only through that row space.
fn test_vectors(field: &ExtensionField, n: usize) -> Result<Vec<RankVector>> {
    if field.order().checked_pow(n as u32).is_some_and(|s| s <= FULL_SCAN_LIMIT) {
        return Ok(all_vectors(field, n, FULL_SCAN_LIMIT)?.collect());
    }
    let mut out = Vec::new();
    for v in 0..=n.min(field.m()) {
        for e in enumerate_els(n, v, field.q())? {
            out.push(rank_witness(field, &e)?);
        }
    }
    Ok(out)
}

/// Brute-force subspaces of GF(q)^n of dimension v, as sorted element lists.
fn brute_force_subspaces(n: usize, v: usize, q: u32) -> Result<HashSet<Vec<Vec<u8>>>> {
    let total = (q as usize).pow(n as u32);
    let vectors: Vec<Vec<u8>> = (0..total)
        .map(|mut i| {
            (0..n)
                .map(|_| {
                    let d = (i % q as usize) as u8;
                    i /= q as usize;
                    d
                })
                .collect()
        })
        .collect();
    let mut layer: HashSet<Vec<Vec<u8>>> = HashSet::from([vec![vec![0u8; n]]]);
    for _ in 0..v {
        let mut next = HashSet::new();
        for space in &layer {
            for x in &vectors {
                if space.contains(x) {
                    continue;
                }
                let mut elems: HashSet<Vec<u8>> = space.iter().cloned().collect();
                for c in 1..q {
                    for s in space {
                        elems.insert((0..n).map(|j| ((s[j] as u32 + c * x[j] as u32) % q) as u8).collect());
                    }
                }
                let mut sorted: Vec<_> = elems.into_iter().collect();
                sorted.sort();
                next.insert(sorted);
            }
        }
        layer = next;
    }
    Ok(layer)
}

/// Complements of `v` among all ELS of the complementary dimension.
fn all_complements(v: &ElementaryBasis) -> Result<Vec<SubspacePair>> {
    Ok(enumerate_els(v.n(), v.n() - v.dim(), v.q())?
        .filter_map(|w| SubspacePair::new(v.clone(), w).ok())
        .collect())
}

pub fn els_suite(qs: &[u32], max_n: usize, max_m: usize) -> Result<Vec<Check>> {
    let mut count = Check::new("els-count-is-gaussian-binomial");
    let mut bijection = Check::new("els-correspond-to-base-field-subspaces");
    let mut rank_dim = Check::new("subspace-rank-equals-dimension");
    let mut containing = Check::new("vector-lies-in-els-of-its-rank");
    let mut minimal = Check::new("no-smaller-els-contains-vector");
    let mut complementary = Check::new("complementary-els-exists");
    let mut vanish_exists = Check::new("vanishing-els-of-codimension-rank");
    let mut vanish_max = Check::new("no-larger-vanishing-els");

    for &q in qs {
        for n in 1..=max_n {
            let spaces: Vec<Vec<ElementaryBasis>> = (0..=n)
                .map(|v| enumerate_els(n, v, q).map(|it| it.collect()))
                .collect::<Result<_>>()?;
            for (v, list) in spaces.iter().enumerate() {
                count.record(BigUint::from(list.len()) == gaussian_binomial(n, v, q), || {
                    format!("q={q} n={n} v={v}: {} enumerated", list.len())
                });
                // distinct ELS give distinct GF(q)-subspaces, and every subspace is hit
                let images: HashSet<Vec<Vec<u8>>> = list
                    .iter()
                    .map(|e| {
                        let mut rows = e.rows().to_vec();
                        rows.sort();
                        rows
                    })
                    .collect();
                let mut ok = images.len() == list.len();
                if (q as usize).pow(n as u32) <= 81 {
                    ok &= brute_force_subspaces(n, v, q)?.len() == list.len();
                }
                bijection.record(ok, || format!("q={q} n={n} v={v}"));
            }

            for m in 1..=max_m {
                let f = ExtensionField::new(q, m)?;
                for list in &spaces {
                    for e in list {
                        let expected = e.dim().min(m);
                        rank_dim.record(subspace_rank(&f, e)? == expected, || {
                            format!("q={q} m={m} n={n} basis {:?}", e.to_strings())
                        });
                        let pair = complement(e);
                        let stacked = pair.v().matrix().vstack(&pair.v_bar().matrix())?;
                        let mut ok = stacked.rank() == n;
                        // trivial intersection over GF(q^m), scanned where small
                        if f.order().checked_pow(e.dim() as u32).is_some_and(|s| s <= 1 << 12) {
                            ok &= e
                                .span_vectors(&f, 1 << 12)?
                                .filter(|x| !x.is_zero())
                                .all(|x| !pair.v_bar().contains(&f, &x).unwrap_or(true));
                        }
                        complementary.record(ok, || format!("q={q} m={m} n={n} basis {:?}", e.to_strings()));
                    }
                }

                let vectors = test_vectors(&f, n)?;
                let full = vectors.len() as u128 == f.order().pow(n as u32);
                let mut seen_rowspaces = HashSet::new();
                for x in &vectors {
                    let u = rank_norm(&f, x);
                    let a = containing_els(&f, x);
                    containing.record(a.dim() == u && a.contains(&f, x)?, || format!("q={q} m={m} x={x}"));
                    if u > 0 {
                        let none = spaces[u - 1].iter().all(|b| !b.contains(&f, x).unwrap_or(true));
                        minimal.record(none, || format!("q={q} m={m} x={x}"));
                    }
                    // x vanishes on the complement of its containing ELS
                    let pair = complement(&a);
                    let swapped = SubspacePair::new(pair.v_bar().clone(), pair.v().clone())?;
                    vanish_exists.record(
                        swapped.v().dim() == n - u && swapped.vanishes_on_v(&f, x)?,
                        || format!("q={q} m={m} x={x}"),
                    );
                    // no ELS of dimension n-u+1 with any complement: once per row space
                    if u > 0 && (!full || seen_rowspaces.insert(a.clone())) {
                        let mut ok = true;
                        for b in &spaces[n - u + 1] {
                            for p in all_complements(b)? {
                                if p.vanishes_on_v(&f, x)? {
                                    ok = false;
                                }
                            }
                        }
                        vanish_max.record(ok, || format!("q={q} m={m} x={x}"));
                    }
                }
            }
        }
    }
    Ok(vec![count, bijection, rank_dim, containing, minimal, complementary, vanish_exists, vanish_max])
}

fn codebooks() -> Result<Vec<ExhaustiveCodebook>> {
    TINY_INSTANCES
        .iter()
        .map(|&(q, m, n, k)| ExhaustiveCodebook::new(GabidulinCode::new(q, m, n, k)?))
        .collect()
}

pub fn mrd_suite() -> Result<Vec<Check>> {
    let mut unique = Check::new("codeword-determined-by-restriction");
    let mut dist = Check::new("rank-distribution-bound");
    let mut restricted = Check::new("restricted-code-is-mrd");
    let mut completion = Check::new("completion-count-bound");

    for book in codebooks()? {
        let code = book.code();
        let f = code.field();
        let (q, m, n, k) = (f.q(), f.m(), code.n(), code.k());
        let label = format!("({q},{m},{n},{k})");

        for kk in enumerate_els(n, k, q)? {
            let pair = complement(&kk);
            let images: HashSet<RankVector> = restrict_code(f, book.words(), k, &pair)?.into_iter().collect();
            // injective with |C| = |K| means bijective onto K
            let size_k = f.order().pow(k as u32);
            unique.record(
                images.len() == book.words().len() && images.len() as u128 == size_k,
                || format!("{label} K={:?}", kk.to_strings()),
            );
        }

        let params = BoundParams::new(q, m, n, k)?;
        let a = exhaustive_rank_distribution(&book);
        for (u, &au) in a.iter().enumerate().skip(params.d()) {
            dist.record(BigUint::from(au) <= rank_dist_bound(&params, u)?, || {
                format!("{label} u={u}: A_u={au}")
            });
        }

        for v in k..=n {
            for e in enumerate_els(n, v, q)? {
                let image = restrict_code(f, book.words(), k, &complement(&e))?;
                let distinct: HashSet<&RankVector> = image.iter().collect();
                let dmin = image.iter().filter(|w| !w.is_zero()).map(|w| rank_norm(f, w)).min();
                let ok = distinct.len() == image.len() && dmin.is_none_or(|d| d == v - k + 1);
                restricted.record(ok, || format!("{label} V={:?} dmin={dmin:?}", e.to_strings()));
            }
        }
    }

    for &(q, m, v, u) in &[(2, 3, 1, 2), (2, 3, 2, 1), (2, 2, 1, 3), (2, 4, 2, 2), (3, 2, 1, 2), (3, 2, 2, 1)] {
        let f = ExtensionField::new(q, m)?;
        for row in completion_census(&f, v, u)? {
            completion.record(row.holds(), || {
                format!("q={q} m={m} v={v} u={u} w={} s={}: {} > {}", row.w, row.s, row.max_count, row.bound)
            });
        }
    }
    Ok(vec![unique, dist, restricted, completion])
}

pub fn bound_chain_suite() -> Result<Vec<Check>> {
    let mut agree = Check::new("ball-cover-matches-decoder");
    let mut chain = Check::new("exhaustive-counts-within-bounds");
    for book in codebooks()? {
        let census = decodable_census(&book)?;
        let label = format!("{:?}", census.params);
        agree.record(census.disagreements == 0, || format!("{label}: {} disagreements", census.disagreements));
        let violations = census.chain_violations();
        chain.record(violations.is_empty(), || format!("{label}: {}", violations.join("; ")));
    }
    Ok(vec![agree, chain])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_lists_available() {
        let err = run_suite("nope").unwrap_err().to_string();
        assert!(err.contains("els-lemmas") && err.contains("identities"));
    }

    #[test]
    fn small_els_suite_passes() {
        let checks = els_suite(&[2], 3, 3).unwrap();
        for c in &checks {
            assert!(c.passed(), "{}: {:?}", c.name, c.violations);
            assert!(c.instances > 0, "{}", c.name);
        }
    }

    #[test]
    fn brute_force_subspace_counts() {
        assert_eq!(brute_force_subspaces(4, 2, 2).unwrap().len(), 35);
        assert_eq!(brute_force_subspaces(3, 1, 3).unwrap().len(), 13);
    }
}
