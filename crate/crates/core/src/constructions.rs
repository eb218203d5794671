//! Explicit constructions: the corner sets forcing many solutions through a
//! corner point, the half-size window around an arbitrary point, the two
//! solution-free sets for two-group mixed equations, and an exhaustive scan
//! of `g_r` over all subsets of a tiny grid.

use crate::coloring::count_rainbow_free;
use crate::error::{domain, Error, Result};
use crate::exact::{self, Interval};
use crate::grid::{Ambient, EquationSpec, Grid, Point, PointSet};
use crate::solutions::count_through_point;
use crate::template::LOG_BITS;
use crate::Budget;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Default seed for sampled checks.
pub const DEFAULT_SEED: u64 = 0x5EED_B0C5;

/// An interval window `lo..=hi` of integers, with the exact rational
/// endpoints it was rounded from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
    pub lo_exact: BigRational,
    pub hi_exact: BigRational,
    /// Whether each exact endpoint is included (`<=`) or excluded (`<`).
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Window {
    fn new(lo_exact: BigRational, lo_closed: bool, hi_exact: BigRational, hi_closed: bool, n: u32) -> Self {
        let lo = if lo_closed {
            lo_exact.ceil().to_integer()
        } else {
            lo_exact.floor().to_integer() + 1
        };
        let hi = if hi_closed {
            hi_exact.floor().to_integer()
        } else {
            hi_exact.ceil().to_integer() - 1
        };
        let clamp = |x: BigInt, min: i64, max: i64| -> i64 {
            if x < BigInt::from(min) {
                min
            } else if x > BigInt::from(max) {
                max
            } else {
                i64::try_from(x).unwrap()
            }
        };
        Window {
            lo: clamp(lo, 1, n as i64 + 1),
            hi: clamp(hi, 0, n as i64),
            lo_exact,
            hi_exact,
            lo_closed,
            hi_closed,
        }
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn render(&self) -> String {
        format!(
            "{} x {} {}",
            if self.lo_closed { format!("{} <=", exact::render(&self.lo_exact)) } else { format!("{} <", exact::render(&self.lo_exact)) },
            if self.hi_closed { "<=" } else { "<" },
            exact::render(&self.hi_exact)
        )
    }
}

/// A product of per-coordinate windows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSet {
    pub name: String,
    pub windows: Vec<Window>,
}

impl BoxSet {
    pub fn contains(&self, p: &Point) -> bool {
        p.0.iter().zip(&self.windows).all(|(&x, w)| w.contains(x))
    }

    pub fn size(&self) -> u128 {
        self.windows.iter().map(|w| w.len() as u128).product()
    }

    pub fn to_point_set(&self, grid: Grid) -> Result<PointSet> {
        let mut set = PointSet::empty(grid);
        let mut cur: Vec<i64> = self.windows.iter().map(|w| w.lo).collect();
        if self.size() == 0 {
            return Ok(set);
        }
        loop {
            set.insert(&Point(cur.clone()))?;
            let mut j = cur.len();
            loop {
                if j == 0 {
                    return Ok(set);
                }
                j -= 1;
                if cur[j] < self.windows[j].hi {
                    cur[j] += 1;
                    break;
                }
                cur[j] = self.windows[j].lo;
            }
        }
    }

    fn disjoint(&self, o: &BoxSet) -> bool {
        self.windows.iter().zip(&o.windows).any(|(a, b)| a.hi < b.lo || b.hi < a.lo || a.is_empty() || b.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerConstruction {
    pub spec: EquationSpec,
    pub v: Point,
    /// `a = 1 / (2h(2k-1))`.
    pub a: BigRational,
    /// `A_1, ..., A_k`.
    pub a_sets: Vec<BoxSet>,
    /// `B_2, ..., B_k`.
    pub b_sets: Vec<BoxSet>,
    pub pairwise_disjoint: bool,
}

impl CornerConstruction {
    /// `prod_l C(|A_l|, h-1)`.
    pub fn lower_bound(&self) -> BigInt {
        let h = self.spec.groups[0] as u64;
        self.a_sets
            .iter()
            .map(|s| BigInt::from(exact::binom_big(s.size() as u64, h - 1)))
            .product()
    }
}

/// The `2k - 1` corner sets for a corner `v` (every coordinate 1 or n).
pub fn build_corner_sets(v: &Point, spec: &EquationSpec) -> Result<CornerConstruction> {
    let h = spec.require_symmetric()?;
    if spec.ambient != Ambient::Box {
        return Err(domain!("the corner construction lives in the box [n]^d"));
    }
    let grid = spec.grid()?;
    let n = spec.n;
    if !grid.contains(v) || v.0.iter().any(|&c| c != 1 && c != n as i64) {
        return Err(domain!("{v} is not a corner of [{n}]^{}", spec.d));
    }
    let k = spec.k();
    let a = exact::ratio(1, 2 * h as i64 * (2 * k as i64 - 1));
    let an = &a * exact::int(n);
    if an < exact::int(2) {
        return Err(Error::Construction(format!(
            "a n = {} < 2 at n = {n}; the windows would be empty",
            exact::render(&an)
        )));
    }
    let nn = exact::int(n);
    let hm1 = exact::int(h as i64 - 1);
    let one = exact::int(1);
    let window_a = |l: i64, low_corner: bool| -> Window {
        // low_corner: v(j) = 1, windows anchored at n
        let l2 = exact::int(2 * l - 2);
        let l1 = exact::int(2 * l - 1);
        if low_corner {
            Window::new(&nn - &l1 * &an, false, &nn - &l2 * &an, true, n)
        } else if l == 1 {
            Window::new(one.clone(), true, an.clone(), false, n)
        } else {
            Window::new(&l2 * &an, true, &l1 * &an, false, n)
        }
    };
    let window_b = |l: i64, low_corner: bool| -> Window {
        let l3 = exact::int(2 * l - 3);
        let l1 = exact::int(2 * l - 1);
        if low_corner {
            Window::new(&one + &hm1 * &l3 * &an, false, &one + &hm1 * &l1 * &an, false, n)
        } else {
            Window::new(&nn + &hm1 - &hm1 * &l1 * &an, false, &nn - &hm1 * &l3 * &an, false, n)
        }
    };
    let low: Vec<bool> = v.0.iter().map(|&c| c == 1).collect();
    let a_sets: Vec<BoxSet> = (1..=k as i64)
        .map(|l| BoxSet {
            name: format!("A{l}"),
            windows: low.iter().map(|&lc| window_a(l, lc)).collect(),
        })
        .collect();
    let b_sets: Vec<BoxSet> = (2..=k as i64)
        .map(|l| BoxSet {
            name: format!("B{l}"),
            windows: low.iter().map(|&lc| window_b(l, lc)).collect(),
        })
        .collect();
    let all: Vec<&BoxSet> = a_sets.iter().chain(&b_sets).collect();
    let mut pairwise_disjoint = true;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            pairwise_disjoint &= all[i].disjoint(all[j]);
        }
    }
    if a_sets.iter().any(|s| s.size() == 0) {
        return Err(Error::Construction(format!("an A window is empty at n = {n}")));
    }
    Ok(CornerConstruction {
        spec: spec.clone(),
        v: v.clone(),
        a,
        a_sets,
        b_sets,
        pairwise_disjoint,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingReport {
    pub samples: usize,
    pub passes: usize,
    pub seed: u64,
}

/// Samples `(h-1)`-subsets of every `A_l` and checks `x_{l,1} = s_1 - s_l` lies in `B_l`.
pub fn forcing_property_check(cc: &CornerConstruction, samples: usize, seed: u64) -> Result<ForcingReport> {
    let h = cc.spec.groups[0];
    let grid = cc.spec.grid()?;
    let pools: Vec<Vec<Point>> = cc
        .a_sets
        .iter()
        .map(|s| Ok(s.to_point_set(grid)?.points()))
        .collect::<Result<_>>()?;
    if pools.iter().any(|p| p.len() < h - 1) {
        return Err(Error::Construction("an A set has fewer than h-1 points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = cc.spec.d;
    for s in 0..samples {
        let mut sums = Vec::with_capacity(pools.len());
        let mut chosen_all: Vec<Point> = vec![cc.v.clone()];
        for pool in &pools {
            let mut sum = vec![0i64; d];
            for i in sample(&mut rng, pool.len(), h - 1) {
                for (x, c) in sum.iter_mut().zip(&pool[i].0) {
                    *x += c;
                }
                chosen_all.push(pool[i].clone());
            }
            sums.push(sum);
        }
        for (x, c) in sums[0].iter_mut().zip(&cc.v.0) {
            *x += c;
        }
        for l in 1..pools.len() {
            let x = Point(sums[0].iter().zip(&sums[l]).map(|(a, b)| a - b).collect());
            if !grid.contains(&x) || !cc.b_sets[l - 1].contains(&x) || chosen_all.contains(&x) {
                return Err(Error::Property(format!(
                    "sample {s}: x_{{{},1}} = {x} is not a fresh point of B{}",
                    l + 1,
                    l + 1
                )));
            }
            chosen_all.push(x);
        }
    }
    Ok(ForcingReport {
        samples,
        passes: samples,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerBoundReport {
    pub through_point: u128,
    pub lower_bound: BigInt,
    pub holds: bool,
}

/// Compares `f_{[n]^d}(v)` with `prod_l C(|A_l|, h-1)`.
pub fn corner_lower_bound_check(cc: &CornerConstruction, budget: &Budget) -> Result<CornerBoundReport> {
    let full = PointSet::full(cc.spec.grid()?);
    let through_point = count_through_point(&full, &cc.v, &cc.spec, budget, false)?.count;
    let lower_bound = cc.lower_bound();
    Ok(CornerBoundReport {
        through_point,
        holds: BigInt::from(through_point) >= lower_bound,
        lower_bound,
    })
}

/// The side-`floor(n/2)` window anchored at `v` and its identification with
/// `[floor(n/2)]^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedSubgrid {
    pub window: PointSet,
    /// `window` intersected with `A`.
    pub restricted: PointSet,
    pub side: u32,
    pub v_prime: Point,
    /// `x -> x - offset` maps the window onto `[side]^d`.
    pub offset: Vec<i64>,
}

pub fn shifted_subgrid(a: &PointSet, v: &Point, spec: &EquationSpec) -> Result<ShiftedSubgrid> {
    let grid = spec.grid()?;
    if spec.ambient != Ambient::Box || *a.grid() != grid {
        return Err(domain!("the shifted window lives in the box matching A"));
    }
    if !a.contains(v) {
        return Err(domain!("{v} is not in A"));
    }
    let m = (spec.n / 2) as i64;
    if m == 0 {
        return Err(domain!("n = {} has no half-size window", spec.n));
    }
    let mut windows = Vec::new();
    let mut v_prime = Vec::new();
    let mut offset = Vec::new();
    for &c in &v.0 {
        if c <= m {
            windows.push((c, c + m - 1));
            v_prime.push(1);
            offset.push(c - 1);
        } else {
            windows.push((c - m + 1, c));
            v_prime.push(m);
            offset.push(c - m);
        }
    }
    let boxset = BoxSet {
        name: "F".into(),
        windows: windows
            .iter()
            .map(|&(lo, hi)| Window::new(exact::int(lo), true, exact::int(hi), true, spec.n))
            .collect(),
    };
    let window = boxset.to_point_set(grid)?;
    let restricted = window.intersection(a)?;
    Ok(ShiftedSubgrid {
        window,
        restricted,
        side: m as u32,
        v_prime: Point(v_prime),
        offset,
    })
}

fn two_groups(spec: &EquationSpec) -> Result<(usize, usize)> {
    if spec.groups.len() != 2 {
        return Err(domain!("this construction is for two-group equations, got {:?}", spec.groups));
    }
    Ok((spec.groups[0], spec.groups[1]))
}

/// `{ceil(h1 n / h2) + 1, ..., n}^d` for `h1 < h2`.
pub fn solution_free_ratio_set(spec: &EquationSpec) -> Result<PointSet> {
    let (h1, h2) = two_groups(spec)?;
    if h1 >= h2 {
        return Err(domain!("the ratio set needs h1 < h2, got ({h1}, {h2})"));
    }
    let lo = (h1 as u64 * spec.n as u64).div_ceil(h2 as u64) as i64 + 1;
    if lo > spec.n as i64 {
        return Err(Error::Construction(format!("ratio set is empty at n = {}", spec.n)));
    }
    let bs = BoxSet {
        name: "ratio".into(),
        windows: (0..spec.d)
            .map(|_| Window::new(exact::int(lo), true, exact::int(spec.n), true, spec.n))
            .collect(),
    };
    bs.to_point_set(spec.grid()?)
}

/// Points with every coordinate odd, for `h1` odd and `h2` even.
pub fn odd_coordinate_set(spec: &EquationSpec) -> Result<PointSet> {
    let (h1, h2) = two_groups(spec)?;
    if h1 % 2 == 0 || h2 % 2 == 1 {
        return Err(domain!("the odd set needs h1 odd and h2 even, got ({h1}, {h2})"));
    }
    let grid = spec.grid()?;
    if spec.ambient != Ambient::Box {
        return Err(domain!("the odd set lives in the box [n]^d"));
    }
    let mut set = PointSet::empty(grid);
    for r in 0..grid.size() as u32 {
        let p = grid.unrank(r);
        if p.0.iter().all(|c| c % 2 == 1) {
            set.insert(&p)?;
        }
    }
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalRow {
    /// Membership bits in rank order, `1` for present.
    pub mask: String,
    pub size: usize,
    pub g: u128,
    pub is_full_grid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalScan {
    pub spec: EquationSpec,
    pub rows: Vec<ExtremalRow>,
    pub max_g: u128,
    pub maximizers: Vec<String>,
    pub full_grid_unique_max: bool,
    /// `n^d / log2 n` and `n^d - n^d / log2 n`.
    pub sparse_threshold: Interval,
    pub dense_threshold: Interval,
    /// Distinct subsets actually counted after reflection dedup.
    pub evaluated: usize,
}

fn reflect_mask(mask: u64, grid: &Grid) -> u64 {
    let mut out = 0u64;
    for r in 0..grid.size() as u32 {
        if mask >> r & 1 == 1 {
            let p = grid.unrank(r);
            let q = Point(p.0.iter().map(|c| grid.n as i64 + 1 - c).collect());
            out |= 1 << grid.rank(&q).unwrap();
        }
    }
    out
}

/// `g_r(A)` for every `A` in the box; with `dedup`, only one subset per
/// reflection pair `x -> n + 1 - x` is counted.
pub fn extremal_scan(spec: &EquationSpec, budget: &Budget, dedup: bool) -> Result<ExtremalScan> {
    let grid = spec.grid()?;
    if spec.ambient != Ambient::Box {
        return Err(domain!("the extremal scan runs over subsets of the box"));
    }
    let size = grid.size();
    if size > 20 {
        return Err(crate::error::capacity!("2^{size} subsets exceed the scan cap 2^20"));
    }
    let count = 1u64 << size;
    let canon: Vec<u64> = (0..count)
        .filter(|&m| !dedup || m <= reflect_mask(m, &grid))
        .collect();
    let values: Vec<Result<u128>> = canon
        .par_iter()
        .map(|&m| {
            let a = PointSet::from_ranks(grid, (0..size as u32).filter(|r| m >> r & 1 == 1))?;
            Ok(count_rainbow_free(&a, spec, None, budget)?.g)
        })
        .collect();
    let mut g_of = std::collections::HashMap::new();
    for (m, v) in canon.iter().zip(values) {
        g_of.insert(*m, v?);
    }
    let full = count - 1;
    let rows: Vec<ExtremalRow> = (0..count)
        .map(|m| {
            let key = if dedup { m.min(reflect_mask(m, &grid)) } else { m };
            ExtremalRow {
                mask: (0..size).map(|r| if m >> r & 1 == 1 { '1' } else { '0' }).collect(),
                size: m.count_ones() as usize,
                g: g_of[&key],
                is_full_grid: m == full,
            }
        })
        .collect();
    let max_g = rows.iter().map(|r| r.g).max().unwrap_or(0);
    let maximizers: Vec<String> = rows.iter().filter(|r| r.g == max_g).map(|r| r.mask.clone()).collect();
    let full_grid_unique_max = maximizers.len() == 1 && rows[full as usize].g == max_g;
    let nd = exact::int(size as i64);
    let (sparse_threshold, dense_threshold) = if spec.n >= 2 {
        let s = exact::log2_interval(spec.n as u64, LOG_BITS).recip().scale(&nd);
        let dense = Interval::new(&nd - &s.hi, &nd - &s.lo);
        (s, dense)
    } else {
        (Interval::exact(nd.clone()), Interval::exact(nd))
    };
    Ok(ExtremalScan {
        spec: spec.clone(),
        rows,
        max_g,
        maximizers,
        full_grid_unique_max,
        sparse_threshold,
        dense_threshold,
        evaluated: canon.len(),
    })
}
