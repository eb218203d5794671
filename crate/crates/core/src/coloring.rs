//! Exact counting of r-colorings without rainbow solutions.
//!
//! Points are colored in rank order. Every solution is checked exactly once,
//! right after its largest point receives a color. Unrestricted colorings
//! are enumerated up to renaming of colors: colors inside the designated set
//! `C` and colors outside it are each introduced in order, and a finished
//! pattern using `a` colors of `C` and `b` others stands for
//! `falling(|C|, a) * falling(r - |C|, b)` colorings. Once no solution closes
//! at any later point, the remaining points are counted by a small table
//! instead of being enumerated.

use crate::error::{capacity, domain, Result};
use crate::exact;
use crate::grid::{EquationSpec, PointSet};
use crate::solutions::{count_solutions, CountOptions, SolutionSet};
use crate::Budget;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use std::sync::atomic::{AtomicU64, Ordering};

/// Colors `1..=r` per point of `A`, in rank order.
pub type Coloring = Vec<u8>;

/// Solutions as point indices into `A`'s rank order, grouped by the point at
/// which they become fully colored.
pub(crate) struct Incidence {
    pub(crate) m: usize,
    pub(crate) sols: Vec<Vec<u32>>,
    closing: Vec<Vec<u32>>,
    /// First point after which no solution closes.
    tail_start: usize,
}

impl Incidence {
    pub(crate) fn new(a: &PointSet, solutions: &[SolutionSet]) -> Result<Self> {
        let ranks = a.ranks();
        let m = ranks.len();
        let mut sols = Vec::with_capacity(solutions.len());
        let mut closing = vec![Vec::new(); m];
        let mut tail_start = 0;
        for (si, s) in solutions.iter().enumerate() {
            let idx: Vec<u32> = s
                .points
                .iter()
                .map(|p| {
                    ranks
                        .binary_search(p)
                        .map(|i| i as u32)
                        .map_err(|_| domain!("solution point rank {p} is not in A"))
                })
                .collect::<Result<_>>()?;
            let last = *idx.iter().max().ok_or_else(|| domain!("empty solution set"))? as usize;
            closing[last].push(si as u32);
            tail_start = tail_start.max(last + 1);
            sols.push(idx);
        }
        Ok(Incidence {
            m,
            sols,
            closing,
            tail_start,
        })
    }

    /// Whether a solution closing at `p` is rainbow under `colors` (ids `< 32`).
    #[inline]
    fn rainbow_closes(&self, p: usize, colors: &[u8]) -> bool {
        self.closing[p].iter().any(|&s| {
            let pts = &self.sols[s as usize];
            let mut mask = 0u32;
            for &q in pts {
                let bit = 1u32 << colors[q as usize];
                if mask & bit != 0 {
                    return false;
                }
                mask |= bit;
            }
            true
        })
    }
}

/// Shared node counter; flushed in batches so the total (and therefore the
/// verdict) is the same for every worker count.
struct NodeBudget {
    used: AtomicU64,
    limit: u64,
}

const FLUSH: u64 = 4096;

impl NodeBudget {
    fn charge(&self, local: &mut u64) -> Result<()> {
        *local += 1;
        if *local >= FLUSH {
            self.flush(local)?;
        }
        Ok(())
    }

    fn flush(&self, local: &mut u64) -> Result<()> {
        let total = self.used.fetch_add(*local, Ordering::Relaxed) + *local;
        *local = 0;
        if total > self.limit {
            return Err(capacity!(
                "coloring search expanded more than {} nodes; raise --budget-colorings or shrink A",
                self.limit
            ));
        }
        Ok(())
    }
}

#[derive(Clone)]
struct CanonState {
    colors: Vec<u8>,
    a: usize,
    b: usize,
    dev: usize,
}

struct Canon<'a> {
    inc: &'a Incidence,
    cs: usize,
    outside: usize,
    /// `tail[a][b]`: completions of the tail as `(a', b', extra deviations, count)`.
    tail: TailTable,
    budget: &'a NodeBudget,
}

/// Accumulator over finished patterns, indexed by `(a, b, dev)`.
struct PatternAcc {
    dims: (usize, usize, usize),
    counts: Vec<u128>,
}

impl PatternAcc {
    fn new(cs: usize, outside: usize, m: usize) -> Self {
        PatternAcc {
            dims: (cs + 1, outside + 1, m + 1),
            counts: vec![0; (cs + 1) * (outside + 1) * (m + 1)],
        }
    }

    fn add(&mut self, a: usize, b: usize, dev: usize, c: u128) -> Result<()> {
        let i = (a * self.dims.1 + b) * self.dims.2 + dev;
        self.counts[i] = self.counts[i]
            .checked_add(c)
            .ok_or_else(|| capacity!("coloring count overflows u128"))?;
        Ok(())
    }

    fn merge(&mut self, o: &PatternAcc) -> Result<()> {
        for (x, y) in self.counts.iter_mut().zip(&o.counts) {
            *x = x.checked_add(*y).ok_or_else(|| capacity!("coloring count overflows u128"))?;
        }
        Ok(())
    }

    fn iter(&self) -> impl Iterator<Item = (usize, usize, usize, u128)> + '_ {
        let (_, nb, nd) = self.dims;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(i, &c)| (i / (nb * nd), (i / nd) % nb, i % nd, c))
    }
}

/// Indexed by `(a, b)`; each entry lists `(a', b', extra deviations, count)`.
type TailTable = Vec<Vec<Vec<(usize, usize, usize, u128)>>>;

fn tail_tables(cs: usize, outside: usize, t: usize) -> Result<TailTable> {
    let mut out = vec![vec![Vec::new(); outside + 1]; cs + 1];
    for a0 in 0..=cs {
        for b0 in 0..=outside {
            // state (a, b, extra dev) -> count
            let mut cur: std::collections::BTreeMap<(usize, usize, usize), u128> = Default::default();
            cur.insert((a0, b0, 0), 1);
            for _ in 0..t {
                let mut next: std::collections::BTreeMap<(usize, usize, usize), u128> = Default::default();
                let mut push = |key, c: u128| -> Result<()> {
                    let e = next.entry(key).or_insert(0u128);
                    *e = e.checked_add(c).ok_or_else(|| capacity!("coloring count overflows u128"))?;
                    Ok(())
                };
                for (&(a, b, dv), &c) in &cur {
                    if a > 0 {
                        push((a, b, dv), c.checked_mul(a as u128).ok_or_else(|| capacity!("coloring count overflows u128"))?)?;
                    }
                    if a < cs {
                        push((a + 1, b, dv), c)?;
                    }
                    if b > 0 {
                        push((a, b, dv + 1), c.checked_mul(b as u128).ok_or_else(|| capacity!("coloring count overflows u128"))?)?;
                    }
                    if b < outside {
                        push((a, b + 1, dv + 1), c)?;
                    }
                }
                cur = next;
            }
            out[a0][b0] = cur.into_iter().map(|((a, b, dv), c)| (a, b, dv, c)).collect();
        }
    }
    Ok(out)
}

impl Canon<'_> {
    fn dfs(
        &self,
        p: usize,
        st: &mut CanonState,
        acc: &mut PatternAcc,
        local: &mut u64,
        frontier: &mut Option<(usize, Vec<CanonState>)>,
    ) -> Result<()> {
        if p == self.inc.tail_start.min(self.inc.m) {
            for &(a, b, dv, c) in &self.tail[st.a][st.b] {
                acc.add(a, b, st.dev + dv, c)?;
            }
            return Ok(());
        }
        if let Some((depth, states)) = frontier {
            if p == *depth {
                states.push(st.clone());
                return Ok(());
            }
        }
        let (a, b) = (st.a, st.b);
        let choices = a + (a < self.cs) as usize + b + (b < self.outside) as usize;
        for ch in 0..choices {
            let (color, na, nb, dv) = if ch < a {
                (ch, a, b, 0)
            } else if ch == a && a < self.cs {
                (a, a + 1, b, 0)
            } else {
                let rest = ch - a - (a < self.cs) as usize;
                if rest < b {
                    (self.cs + rest, a, b, 1)
                } else {
                    (self.cs + b, a, b + 1, 1)
                }
            };
            self.budget.charge(local)?;
            st.colors[p] = color as u8;
            if self.inc.rainbow_closes(p, &st.colors) {
                continue;
            }
            let saved = (st.a, st.b, st.dev);
            st.a = na;
            st.b = nb;
            st.dev += dv;
            self.dfs(p + 1, st, acc, local, frontier)?;
            (st.a, st.b, st.dev) = saved;
        }
        Ok(())
    }
}

/// Runs the pattern search, splitting on a prefix of points for parallelism.
fn canonical_patterns(inc: &Incidence, r: usize, cs: usize, budget: &Budget) -> Result<(PatternAcc, u64)> {
    let outside = r - cs;
    let m = inc.m;
    let stop = inc.tail_start.min(m);
    let tail = tail_tables(cs, outside, m - stop)?;
    let nb = NodeBudget {
        used: AtomicU64::new(0),
        limit: budget.coloring_nodes,
    };
    let canon = Canon {
        inc,
        cs,
        outside,
        tail,
        budget: &nb,
    };
    // split depth: enough prefixes to keep workers busy, fixed by the input alone
    let depth = (1..=stop).find(|&d| (r as u64).pow(d as u32) >= 256).unwrap_or(stop);
    let fresh = || CanonState {
        colors: vec![0; m],
        a: 0,
        b: 0,
        dev: 0,
    };
    let mut acc = PatternAcc::new(cs, outside, m);
    let mut local = 0u64;
    let mut frontier = Some((depth, Vec::new()));
    canon.dfs(0, &mut fresh(), &mut acc, &mut local, &mut frontier)?;
    nb.flush(&mut local)?;
    let states = frontier.unwrap().1;
    let parts: Vec<Result<PatternAcc>> = states
        .into_par_iter()
        .map(|mut st| {
            let mut part = PatternAcc::new(cs, outside, m);
            let mut local = 0u64;
            canon.dfs(depth, &mut st, &mut part, &mut local, &mut None)?;
            nb.flush(&mut local)?;
            Ok(part)
        })
        .collect();
    for part in parts {
        acc.merge(&part?)?;
    }
    Ok((acc, nb.used.load(Ordering::Relaxed)))
}

/// Census of rainbow-free colorings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringCensus {
    pub g: u128,
    /// Index `i`: colorings using exactly `i` distinct colors.
    pub by_palette_size: Vec<u128>,
    pub lower_bound: BigInt,
    /// `g / (C(r, kh-1) (kh-1)^|A|)`, absent when the denominator vanishes.
    pub ratio_to_asymptotic: Option<BigRational>,
    pub nodes: u64,
}

/// Rainbow-free colorings with at least one point colored outside `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationCensus {
    pub colors: Vec<u8>,
    pub count: u128,
    /// Rainbow-free colorings using only colors of `C`.
    pub inside: u128,
    /// Index `i`: rainbow-free colorings whose deviation set has `i` points.
    pub by_deviation_size: Vec<u128>,
}

fn finish(acc: &PatternAcc, r: usize, cs: usize, m: usize) -> Result<(u128, Vec<u128>, Vec<u128>)> {
    let mut g = 0u128;
    let mut by_size = vec![0u128; r + 1];
    let mut by_dev = vec![0u128; m + 1];
    let ov = || capacity!("coloring count overflows u128");
    for (a, b, dev, c) in acc.iter() {
        let mult = exact::falling_u128(cs as u64, a as u64)
            .and_then(|x| x.checked_mul(exact::falling_u128((r - cs) as u64, b as u64)?))
            .and_then(|x| x.checked_mul(c))
            .ok_or_else(ov)?;
        g = g.checked_add(mult).ok_or_else(ov)?;
        by_size[a + b] = by_size[a + b].checked_add(mult).ok_or_else(ov)?;
        by_dev[dev] = by_dev[dev].checked_add(mult).ok_or_else(ov)?;
    }
    Ok((g, by_size, by_dev))
}

fn solutions_for(a: &PointSet, spec: &EquationSpec, solutions: Option<&[SolutionSet]>, budget: &Budget) -> Result<Vec<SolutionSet>> {
    if *a.grid() != spec.grid()? {
        return Err(domain!("point set grid {:?} does not match the equation", a.grid()));
    }
    match solutions {
        Some(s) => Ok(s.to_vec()),
        None => Ok(count_solutions(a, spec, &CountOptions::materialized(*budget))?
            .solutions
            .unwrap_or_default()),
    }
}

/// `g_r(A)` with its palette-size histogram. Solutions are computed unless supplied.
pub fn count_rainbow_free(
    a: &PointSet,
    spec: &EquationSpec,
    solutions: Option<&[SolutionSet]>,
    budget: &Budget,
) -> Result<ColoringCensus> {
    let sols = solutions_for(a, spec, solutions, budget)?;
    let inc = Incidence::new(a, &sols)?;
    let r = spec.r;
    let (acc, nodes) = canonical_patterns(&inc, r, 0, budget)?;
    let (g, by_palette_size, _) = finish(&acc, r, 0, inc.m)?;
    let total = spec.total();
    let lower_bound = lower_bound_value(a.len() as u64, total as u64, r as u64);
    let denom = exact::binom_big(r as u64, total as u64 - 1) * BigUint::from(total as u64 - 1).pow(a.len() as u32);
    let ratio_to_asymptotic = (!denom.is_zero()).then(|| BigRational::new(BigInt::from(g), BigInt::from(denom)));
    Ok(ColoringCensus {
        g,
        by_palette_size,
        lower_bound,
        ratio_to_asymptotic,
        nodes,
    })
}

/// The torus count `g_r(A; Z_n^d)`; the spec must be a torus spec.
pub fn count_rainbow_free_torus(
    a: &PointSet,
    spec: &EquationSpec,
    solutions: Option<&[SolutionSet]>,
    budget: &Budget,
) -> Result<ColoringCensus> {
    if spec.ambient != crate::grid::Ambient::Torus {
        return Err(domain!("torus count needs a torus equation"));
    }
    count_rainbow_free(a, spec, solutions, budget)
}

/// Rainbow-free colorings using a color outside `colors` (1-based, `|C| = kh - 1`).
pub fn count_deviating(
    a: &PointSet,
    spec: &EquationSpec,
    colors: &[u8],
    solutions: Option<&[SolutionSet]>,
    budget: &Budget,
) -> Result<DeviationCensus> {
    let r = spec.r;
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    if c.len() != colors.len() || c.iter().any(|&x| x == 0 || x as usize > r) {
        return Err(domain!("color set {colors:?} must hold distinct colors in 1..={r}"));
    }
    if c.len() + 1 != spec.total() {
        return Err(domain!("deviation color set needs {} colors, got {}", spec.total() - 1, c.len()));
    }
    let sols = solutions_for(a, spec, solutions, budget)?;
    let inc = Incidence::new(a, &sols)?;
    let (acc, _) = canonical_patterns(&inc, r, c.len(), budget)?;
    let (g, _, by_dev) = finish(&acc, r, c.len(), inc.m)?;
    let inside = by_dev[0];
    Ok(DeviationCensus {
        colors: c,
        count: g - inside,
        inside,
        by_deviation_size: by_dev,
    })
}

/// `C(r, m) * sum_{i=0}^{m-1} (-1)^i C(m, i) (m - i)^|A|` with `m = kh - 1`:
/// colorings using exactly `kh - 1` colors. The sum omits the `i = m` term
/// `(-1)^m 0^|A|`, which vanishes unless `A` is empty; the empty set gets 0.
pub fn lower_bound_value(size_a: u64, total: u64, r: u64) -> BigInt {
    let m = total - 1;
    if size_a == 0 && m > 0 {
        return BigInt::zero();
    }
    let mut sum = BigInt::zero();
    for i in 0..m {
        let term = BigInt::from(exact::binom_big(m, i)) * BigInt::from(m - i).pow(size_a as u32);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    BigInt::from(exact::binom_big(r, m)) * sum
}

/// Whether no solution receives pairwise distinct colors. Colors are 1-based.
pub fn is_rainbow_free(a: &PointSet, coloring: &[u8], solutions: &[SolutionSet]) -> Result<bool> {
    if coloring.len() != a.len() {
        return Err(domain!("coloring has {} entries but A has {} points", coloring.len(), a.len()));
    }
    if coloring.iter().any(|&c| c == 0 || c > 32) {
        return Err(domain!("colors must lie in 1..=32"));
    }
    let inc = Incidence::new(a, solutions)?;
    let ids: Vec<u8> = coloring.iter().map(|c| c - 1).collect();
    Ok(!(0..inc.m).any(|p| inc.rainbow_closes(p, &ids)))
}

/// Colorings with `c(x) in palettes[x]` (bit `i` = color `i + 1`) and no
/// rainbow solution.
pub(crate) fn count_palette_colorings(inc: &Incidence, palettes: &[u32], budget: &Budget) -> Result<u128> {
    if palettes.contains(&0) {
        return Ok(0);
    }
    let m = inc.m;
    let stop = inc.tail_start.min(m);
    let ov = || capacity!("coloring count overflows u128");
    let mut tail = 1u128;
    for &p in &palettes[stop..] {
        tail = tail.checked_mul(p.count_ones() as u128).ok_or_else(ov)?;
    }
    let nb = NodeBudget {
        used: AtomicU64::new(0),
        limit: budget.coloring_nodes,
    };
    struct Ctx<'a> {
        inc: &'a Incidence,
        palettes: &'a [u32],
        stop: usize,
        tail: u128,
        nb: &'a NodeBudget,
    }
    fn dfs(cx: &Ctx<'_>, p: usize, colors: &mut [u8], local: &mut u64, frontier: &mut Option<(usize, Vec<Vec<u8>>)>) -> Result<u128> {
        if p == cx.stop {
            return Ok(cx.tail);
        }
        if let Some((depth, states)) = frontier {
            if p == *depth {
                states.push(colors.to_vec());
                return Ok(0);
            }
        }
        let mut total = 0u128;
        let mut pal = cx.palettes[p];
        while pal != 0 {
            let c = pal.trailing_zeros();
            pal &= pal - 1;
            cx.nb.charge(local)?;
            colors[p] = c as u8;
            if cx.inc.rainbow_closes(p, colors) {
                continue;
            }
            total = total
                .checked_add(dfs(cx, p + 1, colors, local, frontier)?)
                .ok_or_else(|| capacity!("coloring count overflows u128"))?;
        }
        Ok(total)
    }
    let cx = Ctx {
        inc,
        palettes,
        stop,
        tail,
        nb: &nb,
    };
    let depth = (1..=stop).find(|&d| palettes[..d].iter().map(|p| p.count_ones() as u64).product::<u64>() >= 256).unwrap_or(stop);
    let mut frontier = Some((depth, Vec::new()));
    let mut colors = vec![0u8; m];
    let mut local = 0;
    let mut total = dfs(&cx, 0, &mut colors, &mut local, &mut frontier)?;
    nb.flush(&mut local)?;
    let parts: Vec<Result<u128>> = frontier
        .unwrap()
        .1
        .into_par_iter()
        .map(|mut colors| {
            let mut local = 0;
            let v = dfs(&cx, depth, &mut colors, &mut local, &mut None)?;
            nb.flush(&mut local)?;
            Ok(v)
        })
        .collect();
    for p in parts {
        total = total.checked_add(p?).ok_or_else(ov)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Ambient;

    fn interval(n: u32, r: usize) -> (PointSet, EquationSpec) {
        let s = EquationSpec::symmetric(Ambient::Box, 1, n, 2, 2, r).unwrap();
        (PointSet::full(s.grid().unwrap()), s)
    }

    fn g(n: u32, r: usize) -> u128 {
        let (a, s) = interval(n, r);
        count_rainbow_free(&a, &s, None, &Budget::default()).unwrap().g
    }

    #[test]
    fn coloring_examples() {
        assert_eq!(g(4, 4), 232);
        assert_eq!(g(3, 4), 64);
        assert_eq!(g(4, 3), 81);
    }

    #[test]
    fn census_is_consistent() {
        for n in 3..=7 {
            let (a, s) = interval(n, 4);
            let c = count_rainbow_free(&a, &s, None, &Budget::default()).unwrap();
            assert_eq!(c.by_palette_size.iter().sum::<u128>(), c.g);
            assert!(BigInt::from(c.g) >= c.lower_bound);
            let (ng, hist) = crate::oracle::naive_colorings(&a, &s).unwrap();
            assert_eq!(c.g, ng);
            assert_eq!(c.by_palette_size, hist);
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound_value(0, 4, 4), BigInt::zero());
        assert_eq!(lower_bound_value(2, 4, 4), BigInt::zero());
        assert_eq!(lower_bound_value(3, 4, 4), BigInt::from(24));
        assert_eq!(lower_bound_value(4, 4, 4), BigInt::from(144));
    }

    #[test]
    fn rainbow_free_examples() {
        let (a, s) = interval(4, 4);
        let sols = count_solutions(&a, &s, &CountOptions::materialized(Budget::default()))
            .unwrap()
            .solutions
            .unwrap();
        assert!(is_rainbow_free(&a, &[1, 1, 1, 1], &sols).unwrap());
        assert!(!is_rainbow_free(&a, &[1, 2, 3, 4], &sols).unwrap());
        assert!(is_rainbow_free(&a, &[1, 2, 3, 1], &sols).unwrap());
        assert!(is_rainbow_free(&a, &[1, 2, 3], &sols).is_err());
    }

    #[test]
    fn deviation_examples() {
        let b = Budget::default();
        let (a, s) = interval(3, 4);
        assert_eq!(count_deviating(&a, &s, &[1, 2, 3], None, &b).unwrap().count, 37);
        let (a, s) = interval(4, 4);
        let d = count_deviating(&a, &s, &[1, 2, 3], None, &b).unwrap();
        assert_eq!((d.count, d.inside), (151, 81));
        assert_eq!(d.by_deviation_size.iter().sum::<u128>(), 232);
        assert!(count_deviating(&a, &s, &[1, 2], None, &b).is_err());
        assert!(count_deviating(&a, &s, &[1, 2, 2], None, &b).is_err());
    }

    #[test]
    fn torus_examples() {
        let b = Budget::default();
        let (a, s) = interval(5, 4);
        let t = s.with_ambient(Ambient::Torus);
        let at = a.reinterpret(Ambient::Torus);
        let gt = count_rainbow_free_torus(&at, &t, None, &b).unwrap().g;
        assert!(gt <= count_rainbow_free(&a, &s, None, &b).unwrap().g);
        assert_eq!(gt, crate::oracle::naive_colorings(&at, &t).unwrap().0);

        // {0,1,2} in Z_6 against {1,2,3} in the box
        let t6 = EquationSpec::symmetric(Ambient::Torus, 1, 6, 2, 2, 4).unwrap();
        let a6 = PointSet::from_coords_1d(t6.grid().unwrap(), [0, 1, 2]).unwrap();
        let b6 = t6.with_ambient(Ambient::Box);
        let ab = PointSet::from_coords_1d(b6.grid().unwrap(), [1, 2, 3]).unwrap();
        assert_eq!(
            count_rainbow_free_torus(&a6, &t6, None, &b).unwrap().g,
            count_rainbow_free(&ab, &b6, None, &b).unwrap().g
        );

        let t3 = EquationSpec::symmetric(Ambient::Torus, 1, 3, 2, 2, 4).unwrap();
        let a3 = PointSet::full(t3.grid().unwrap());
        assert_eq!(
            count_rainbow_free_torus(&a3, &t3, None, &b).unwrap().g,
            crate::oracle::naive_colorings(&a3, &t3).unwrap().0
        );
        assert!(count_rainbow_free_torus(&a, &s, None, &b).is_err());
    }

    #[test]
    fn budget_is_a_hard_error() {
        let (a, s) = interval(9, 5);
        let tight = Budget::new(1_000_000, 100);
        assert!(matches!(
            count_rainbow_free(&a, &s, None, &tight),
            Err(crate::Error::Capacity(_))
        ));
    }

    #[test]
    fn worker_count_does_not_change_census() {
        let (a, s) = interval(9, 4);
        let run = |w| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .unwrap()
                .install(|| count_rainbow_free(&a, &s, None, &Budget::default()).unwrap())
        };
        assert_eq!(run(1), run(8));
    }

    #[test]
    fn palette_search_matches_full_count() {
        let (a, s) = interval(6, 4);
        let sols = count_solutions(&a, &s, &CountOptions::materialized(Budget::default()))
            .unwrap()
            .solutions
            .unwrap();
        let inc = Incidence::new(&a, &sols).unwrap();
        let full = count_palette_colorings(&inc, &[0b1111; 6], &Budget::default()).unwrap();
        assert_eq!(full, count_rainbow_free(&a, &s, Some(&sols), &Budget::default()).unwrap().g);
        assert_eq!(count_palette_colorings(&inc, &[0b1; 6], &Budget::default()).unwrap(), 1);
    }
}
