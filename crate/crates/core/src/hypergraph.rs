//! The rainbow hypergraph on `A x [r]`: one edge per solution set and
//! injective coloring of it. Edges are never stored; every statistic comes
//! from the solution sets and the color algebra, with tiny-size cross-checks
//! against explicit edge lists.

use crate::coloring::Incidence;
use crate::error::{capacity, domain, Result};
use crate::exact::{self, Interval};
use crate::grid::{EquationSpec, PointSet};
use crate::solutions::{count_solutions, CountOptions, SolutionSet};
use crate::template::LOG_BITS;
use crate::Budget;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::HashMap;

pub struct RainbowHypergraph {
    pub spec: EquationSpec,
    pub size_a: usize,
    /// Uniformity: points per solution.
    pub uniformity: usize,
    pub f: u128,
    pub vertices: u128,
    pub edges: u128,
    inc: Incidence,
}

pub fn build_hypergraph(
    a: &PointSet,
    spec: &EquationSpec,
    solutions: Option<&[SolutionSet]>,
    budget: &Budget,
) -> Result<RainbowHypergraph> {
    let total = spec.total();
    if spec.r < total {
        return Err(domain!("the rainbow hypergraph needs r >= {total}, got r = {}", spec.r));
    }
    let owned;
    let sols = match solutions {
        Some(s) => s,
        None => {
            owned = count_solutions(a, spec, &CountOptions::materialized(*budget))?
                .solutions
                .unwrap_or_default();
            &owned
        }
    };
    let inc = Incidence::new(a, sols)?;
    let f = sols.len() as u128;
    let colorings = exact::falling_u128(spec.r as u64, total as u64).unwrap();
    let edges = colorings
        .checked_mul(f)
        .ok_or_else(|| capacity!("edge count overflows u128"))?;
    Ok(RainbowHypergraph {
        spec: spec.clone(),
        size_a: a.len(),
        uniformity: total,
        f,
        vertices: a.len() as u128 * spec.r as u128,
        edges,
        inc,
    })
}

impl RainbowHypergraph {
    /// `d(H) = kh |E| / |V|`.
    pub fn avg_degree(&self) -> BigRational {
        if self.vertices == 0 {
            return BigRational::zero();
        }
        exact::ratio(BigInt::from(self.uniformity as u128) * BigInt::from(self.edges), BigInt::from(self.vertices))
    }

    /// Largest number of solution sets containing one `j`-set of points.
    fn max_point_codegree(&self, j: usize, budget: &Budget) -> Result<u128> {
        let total = self.uniformity;
        let per = exact::binom_u128(total as u64, j as u64).unwrap();
        let work = per.saturating_mul(self.f);
        if work > budget.visit_limit() as u128 {
            return Err(capacity!("co-degree tally over {work} point sets exceeds the visit budget"));
        }
        let tallies: Vec<HashMap<Vec<u32>, u32>> = self
            .inc
            .sols
            .par_chunks(256)
            .map(|chunk| {
                let mut t: HashMap<Vec<u32>, u32> = HashMap::new();
                let mut sub = Vec::with_capacity(j);
                for s in chunk {
                    subsets(s, j, &mut sub, 0, &mut |b| *t.entry(b.to_vec()).or_insert(0) += 1);
                }
                t
            })
            .collect();
        let mut merged: HashMap<Vec<u32>, u32> = HashMap::new();
        for t in tallies {
            for (k, v) in t {
                *merged.entry(k).or_insert(0) += v;
            }
        }
        Ok(merged.values().copied().max().unwrap_or(0) as u128)
    }

    /// `Delta_j`: a `j`-set of vertices with distinct points and distinct
    /// colors lies in (solutions containing its points) x (injective colorings
    /// of the other points avoiding its colors) edges; any other `j`-set lies in none.
    pub fn max_codegree(&self, j: usize, budget: &Budget) -> Result<u128> {
        let total = self.uniformity;
        if j < 2 || j > total {
            return Err(domain!("co-degree order j = {j} must lie in 2..={total}"));
        }
        if self.f == 0 {
            return Ok(0);
        }
        let completions = exact::falling_u128((self.spec.r - j) as u64, (total - j) as u64).unwrap();
        Ok(self.max_point_codegree(j, budget)? * completions)
    }

    /// All `Delta_j`, `j = 2..=kh`.
    pub fn codegrees(&self, budget: &Budget) -> Result<Vec<(usize, u128)>> {
        (2..=self.uniformity).map(|j| Ok((j, self.max_codegree(j, budget)?))).collect()
    }

    /// Edges as vertex bitmasks (`(i, c)` is bit `i r + c`), for tiny sizes.
    pub fn edge_masks(&self) -> Result<Vec<u64>> {
        let r = self.spec.r;
        if self.size_a * r > 64 {
            return Err(capacity!("explicit edges need |A| r <= 64"));
        }
        if self.edges > 1_000_000 {
            return Err(capacity!("{} edges exceed the explicit edge cap", self.edges));
        }
        let total = self.uniformity;
        let mut out = Vec::with_capacity(self.edges as usize);
        for s in &self.inc.sols {
            let mut colors = Vec::with_capacity(total);
            injective(r, total, &mut colors, 0, &mut |cs| {
                out.push(s.iter().zip(cs).fold(0u64, |m, (&i, &c)| m | 1 << (i as usize * r + c)));
            });
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `Delta_j` by tallying the `j`-subsets of every explicit edge.
    pub fn max_codegree_by_edges(&self, j: usize) -> Result<u128> {
        let edges = self.edge_masks()?;
        let mut tally: HashMap<u64, u32> = HashMap::new();
        for e in edges {
            let bits: Vec<u32> = (0..64).filter(|b| e >> b & 1 == 1).collect();
            let mut sub = Vec::with_capacity(j);
            subsets(&bits, j, &mut sub, 0, &mut |u| {
                *tally.entry(u.iter().fold(0u64, |m, &b| m | 1 << b)).or_insert(0) += 1
            });
        }
        Ok(tally.values().copied().max().unwrap_or(0) as u128)
    }
}

fn subsets(items: &[u32], j: usize, cur: &mut Vec<u32>, start: usize, f: &mut dyn FnMut(&[u32])) {
    if cur.len() == j {
        f(cur);
        return;
    }
    for i in start..items.len() {
        if items.len() - i < j - cur.len() {
            break;
        }
        cur.push(items[i]);
        subsets(items, j, cur, i + 1, f);
        cur.pop();
    }
}

fn injective(r: usize, len: usize, cur: &mut Vec<usize>, used: u32, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == len {
        f(cur);
        return;
    }
    for c in 0..r {
        if used >> c & 1 == 0 {
            cur.push(c);
            injective(r, len, cur, used | 1 << c, f);
            cur.pop();
        }
    }
}

/// `Delta(H, tau) = 2^{C(kh,2)-1} sum_{j=2}^{kh} 2^{-C(j-1,2)} Delta_j / (d(H) tau^{j-1})`.
pub fn codegree_function(deltas: &[(usize, u128)], avg_degree: &BigRational, uniformity: usize, tau: &BigRational) -> Result<BigRational> {
    if avg_degree.is_zero() {
        return Err(domain!("the co-degree function needs a positive average degree"));
    }
    if *tau <= BigRational::zero() || *tau >= BigRational::one() {
        return Err(domain!("tau must lie strictly between 0 and 1"));
    }
    let lead = exact::int(BigInt::one() << (binom2(uniformity) - 1));
    let mut sum = BigRational::zero();
    for &(j, dj) in deltas {
        let weight = exact::ratio(1, BigInt::one() << binom2(j - 1));
        sum += weight * exact::big(dj) / (avg_degree * exact::pow_rat(tau, (j - 1) as u32));
    }
    Ok(lead * sum)
}

/// The co-degree function over a `tau` enclosure; it decreases in `tau`.
pub fn codegree_function_interval(deltas: &[(usize, u128)], avg_degree: &BigRational, uniformity: usize, tau: &Interval) -> Result<Interval> {
    let lo = codegree_function(deltas, avg_degree, uniformity, &tau.hi)?;
    let hi = codegree_function(deltas, avg_degree, uniformity, &tau.lo)?;
    Ok(Interval::new(lo, hi))
}

fn binom2(x: usize) -> usize {
    x * x.saturating_sub(1) / 2
}

/// `epsilon = (r-kh)!/r! (log2 n)^{-5kh}` and `tau = n^{-k(h-1)d/(kh-1)} (log2 n)^8`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainerParameters {
    pub epsilon: Interval,
    pub tau: Interval,
    /// `1 / (200 kh ((kh)!)^2)`.
    pub tau_cap: BigRational,
    pub tau_ok: bool,
}

pub fn container_parameters(spec: &EquationSpec) -> Result<ContainerParameters> {
    let h = spec.require_symmetric()? as u64;
    let k = spec.k() as u64;
    if spec.n < 2 {
        return Err(domain!("the parameters need n >= 2"));
    }
    let kh = k * h;
    let r = spec.r as u64;
    if r < kh {
        return Err(domain!("epsilon needs r >= kh = {kh}"));
    }
    let log = exact::log2_interval(spec.n as u64, LOG_BITS);
    let inv_falling = exact::ratio(1, BigInt::from(exact::falling_u128(r, kh).unwrap()));
    let epsilon = log.pow((5 * kh) as u32).recip().scale(&inv_falling);
    let power = exact::neg_frac_power(spec.n as u64, k * (h - 1) * spec.d as u64, kh - 1, LOG_BITS);
    let tau = power.mul(&log.pow(8));
    let fact = BigInt::from(exact::factorial_big(kh));
    let tau_cap = exact::ratio(1, BigInt::from(200 * kh) * &fact * &fact);
    let tau_ok = tau.certainly_lt(&tau_cap);
    Ok(ContainerParameters {
        epsilon,
        tau,
        tau_cap,
        tau_ok,
    })
}

/// The co-degree hypothesis and the `(log2 n)^{-5kh}` comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub params: ContainerParameters,
    pub codegree: Interval,
    /// `epsilon / (12 (kh)!)`.
    pub codegree_cap: Interval,
    pub codegree_ok: bool,
    /// `(log2 n)^{-5kh}`, the target the co-degree function is compared with.
    pub log_target: Interval,
    pub hypothesis_ok: bool,
}

pub fn hypothesis_check(h: &RainbowHypergraph, deltas: &[(usize, u128)]) -> Result<HypothesisReport> {
    let params = container_parameters(&h.spec)?;
    let kh = h.uniformity as u64;
    let tau = &params.tau;
    if !tau.certainly_lt(&BigRational::one()) {
        // the co-degree function is only defined for tau < 1; report an unbounded failure
        return Err(domain!("tau is not below 1 at n = {}; the co-degree function is undefined", h.spec.n));
    }
    let codegree = codegree_function_interval(deltas, &h.avg_degree(), h.uniformity, tau)?;
    let codegree_cap = params
        .epsilon
        .scale(&exact::ratio(1, BigInt::from(12u32) * BigInt::from(exact::factorial_big(kh))));
    let codegree_ok = codegree.hi <= codegree_cap.lo;
    let log_target = exact::log2_interval(h.spec.n as u64, LOG_BITS).pow((5 * kh) as u32).recip();
    let hypothesis_ok = params.tau_ok && codegree_ok;
    Ok(HypothesisReport {
        params,
        codegree,
        codegree_cap,
        codegree_ok,
        log_target,
        hypothesis_ok,
    })
}

/// The exact pre-asymptotic bound on `Delta_j` from the case analysis:
/// `r^{kh-j} |A|^{kh-j-(k-1)}` for `2 <= j <= h-1`,
/// `r^{kh-j} (|A|^{kh-j-(k-1)} + sum_{t=1}^{floor(j/h)} |A|^{kh-j-(k-t)})` for `h <= j <= kh-1`,
/// and `1` for `j = kh`.
pub fn deltaj_bound(j: usize, r: usize, size_a: usize, k: usize, h: usize) -> Result<BigRational> {
    let kh = k * h;
    if j < 2 || j > kh {
        return Err(domain!("j = {j} outside 2..={kh}"));
    }
    if j == kh {
        return Ok(BigRational::one());
    }
    if size_a == 0 {
        return Ok(BigRational::zero());
    }
    let a = exact::int(size_a as i64);
    let apow = |e: i64| -> BigRational {
        if e >= 0 {
            exact::pow_rat(&a, e as u32)
        } else {
            exact::pow_rat(&a, (-e) as u32).recip()
        }
    };
    let base = (kh - j) as i64;
    let mut inner = apow(base - (k as i64 - 1));
    if j >= h {
        for t in 1..=(j / h) as i64 {
            inner += apow(base - (k as i64 - t));
        }
    }
    let rp = BigRational::from_integer(BigUint::from(r).pow((kh - j) as u32).into());
    Ok(rp * inner)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaBoundRow {
    pub j: usize,
    pub delta: u128,
    pub bound: BigRational,
    pub holds: bool,
}

pub fn deltaj_bound_check(h: &RainbowHypergraph, deltas: &[(usize, u128)]) -> Result<Vec<DeltaBoundRow>> {
    let hh = h.spec.require_symmetric()?;
    deltas
        .iter()
        .map(|&(j, delta)| {
            let bound = deltaj_bound(j, h.spec.r, h.size_a, h.spec.k(), hh)?;
            Ok(DeltaBoundRow {
                j,
                delta,
                holds: exact::big(delta) <= bound,
                bound,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Ambient;

    fn hg(n: u32, r: usize) -> (RainbowHypergraph, PointSet, EquationSpec) {
        let s = EquationSpec::symmetric(Ambient::Box, 1, n, 2, 2, r).unwrap();
        let a = PointSet::full(s.grid().unwrap());
        (build_hypergraph(&a, &s, None, &Budget::default()).unwrap(), a, s)
    }

    #[test]
    fn edge_counts() {
        let (h, _, _) = hg(4, 4);
        assert_eq!((h.vertices, h.edges), (16, 24));
        assert_eq!(hg(3, 4).0.edges, 0);
        assert_eq!(hg(5, 4).0.edges, 72);
        assert_eq!(h.avg_degree(), exact::int(6));
    }

    #[test]
    fn codegree_examples() {
        let b = Budget::default();
        let (h, a, s) = hg(4, 4);
        assert_eq!(h.max_codegree(2, &b).unwrap(), 2);
        assert_eq!(h.max_codegree(4, &b).unwrap(), 1);
        let edges = crate::oracle::naive_edges(&a, &s).unwrap();
        assert_eq!(edges, h.edge_masks().unwrap());
        for j in 2..=4 {
            let direct = crate::oracle::naive_max_codegree(&edges, 16, j);
            assert_eq!(h.max_codegree(j, &b).unwrap(), direct);
            assert_eq!(h.max_codegree_by_edges(j).unwrap(), direct);
        }
        assert!(h.max_codegree(1, &b).is_err());
        assert_eq!(hg(3, 4).0.max_codegree(2, &b).unwrap(), 0);
    }

    #[test]
    fn codegree_function_values() {
        let b = Budget::default();
        let (h, _, _) = hg(4, 4);
        let deltas = h.codegrees(&b).unwrap();
        let d = h.avg_degree();
        let tau = exact::ratio(1, 2);
        let v = codegree_function(&deltas, &d, 4, &tau).unwrap();
        // hand sum: 2^5 * (2/(6*1/2) + 2^-1 * 1/(6/4) + 2^-3 * 1/(6/8)) = 2^5 * (2/3 + 1/3 + 1/6)
        assert_eq!(v, exact::int(32) * exact::ratio(7, 6));
        let only_top = [(2, 0), (3, 0), (4, 1)];
        let near_one = exact::ratio(999_999, 1_000_000);
        let v = codegree_function(&only_top, &d, 4, &exact::int(1)).err();
        assert!(v.is_some());
        let w = codegree_function(&only_top, &d, 4, &near_one).unwrap();
        let limit = exact::ratio(32, 8) / &d;
        assert!(w > limit && w < limit * exact::ratio(1_000_010, 1_000_000));
        assert!(codegree_function(&deltas, &BigRational::zero(), 4, &tau).is_err());
    }

    #[test]
    fn parameter_examples() {
        let s = EquationSpec::symmetric(Ambient::Box, 1, 4, 2, 2, 4).unwrap();
        let p = container_parameters(&s).unwrap();
        assert!(p.epsilon.is_exact());
        assert_eq!(p.epsilon.lo, exact::ratio(1, 24u64 << 20));
        // tau = 4^{-2/3} 2^8 is far above the cap
        assert!(!p.tau_ok);
        assert!(p.tau.lo > BigRational::zero() && p.epsilon.lo > BigRational::zero());
    }

    #[test]
    fn bound_examples() {
        let b = Budget::default();
        let (h, _, _) = hg(4, 4);
        let deltas = h.codegrees(&b).unwrap();
        let rows = deltaj_bound_check(&h, &deltas).unwrap();
        assert!(rows.iter().all(|r| r.holds));
        assert_eq!(rows[0].bound, exact::int(128));
        assert_eq!(rows[2].bound, exact::int(1));
        let (e, _, _) = hg(3, 4);
        let rows = deltaj_bound_check(&e, &e.codegrees(&b).unwrap()).unwrap();
        assert!(rows.iter().all(|r| r.holds && r.delta == 0));
    }
}
