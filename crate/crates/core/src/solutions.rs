//! Solution sets of the (possibly mixed) equation inside a point set.
//!
//! The engine groups h-subsets of `A` by the key of their sum and, inside
//! each sum bucket, picks one subset per group by ordered backtracking
//! with pairwise disjointness. A point set admitting several witness
//! partitions is counted once. In the box every witness of a set `X` has the
//! same common group sum (the unique `s` with `k s = sum(X)`), so duplicates
//! only meet inside one bucket. On the torus `k s = sum(X)` can have several
//! solutions mod `n`, so unions are also deduplicated across buckets.

use crate::error::{capacity, domain, Error, Result};
use crate::exact;
use crate::grid::{Ambient, EquationSpec, Grid, Point, PointSet, SumVector};
use crate::Budget;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};

/// Sum vectors packed into integer keys. Box keys use base `h_max * n + 1`
/// so adding up to `h_max` points never carries between digits; torus keys
/// use base `n` with digitwise reduction. Key order is lexicographic order
/// of the sum vectors.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SumCodec {
    d: usize,
    base: u64,
    torus: bool,
}

impl SumCodec {
    pub(crate) fn new(grid: &Grid, max_group: usize) -> Result<Self> {
        let torus = grid.ambient == Ambient::Torus;
        let base = if torus {
            grid.n as u64
        } else {
            max_group as u64 * grid.n as u64 + 1
        };
        let mut space: u64 = 1;
        for _ in 0..grid.d {
            space = space
                .checked_mul(base)
                .filter(|&s| s <= 1 << 62)
                .ok_or_else(|| capacity!("sum key space base^d = {base}^{} exceeds 2^62", grid.d))?;
        }
        Ok(SumCodec {
            d: grid.d,
            base,
            torus,
        })
    }

    pub(crate) fn keyspace(&self) -> u64 {
        self.base.pow(self.d as u32)
    }

    #[inline]
    pub(crate) fn encode(&self, sum: &[i64]) -> u64 {
        let mut key = 0u64;
        for &s in sum {
            let s = if self.torus {
                s.rem_euclid(self.base as i64)
            } else {
                s
            };
            key = key * self.base + s as u64;
        }
        key
    }

    pub(crate) fn decode(&self, mut key: u64) -> SumVector {
        let mut out = vec![0i64; self.d];
        for c in out.iter_mut().rev() {
            *c = (key % self.base) as i64;
            key /= self.base;
        }
        SumVector(out)
    }
}

/// Members of a point set in rank order, with flattened coordinates.
pub(crate) struct Layout {
    pub(crate) grid: Grid,
    pub(crate) ranks: Vec<u32>,
    coords: Vec<i64>,
}

impl Layout {
    pub(crate) fn new(a: &PointSet) -> Self {
        let grid = *a.grid();
        let ranks = a.ranks();
        let mut coords = vec![0i64; ranks.len() * grid.d];
        for (i, &r) in ranks.iter().enumerate() {
            grid.write_coords(r, &mut coords[i * grid.d..(i + 1) * grid.d]);
        }
        Layout {
            grid,
            ranks,
            coords,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.ranks.len()
    }

    #[inline]
    pub(crate) fn coords(&self, i: u32) -> &[i64] {
        let d = self.grid.d;
        &self.coords[i as usize * d..(i as usize + 1) * d]
    }

    pub(crate) fn index_of(&self, rank: u32) -> Option<u32> {
        self.ranks.binary_search(&rank).ok().map(|i| i as u32)
    }
}

/// Visits every `size`-subset of `pool` in lexicographic order together with
/// `base + sum(subset)`. Fails once more than `limit` subsets were visited.
fn for_each_subset(
    layout: &Layout,
    pool: &[u32],
    size: usize,
    base: &[i64],
    limit: u64,
    f: &mut dyn FnMut(&[u32], &[i64]),
) -> Result<u64> {
    let d = layout.grid.d;
    let mut chosen = vec![0u32; size];
    let mut sums = vec![0i64; (size + 1) * d];
    sums[..d].copy_from_slice(base);
    let mut visited = 0u64;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        layout: &Layout,
        pool: &[u32],
        start: usize,
        level: usize,
        size: usize,
        chosen: &mut [u32],
        sums: &mut [i64],
        visited: &mut u64,
        limit: u64,
        f: &mut dyn FnMut(&[u32], &[i64]),
    ) -> Result<()> {
        let d = layout.grid.d;
        if level == size {
            *visited += 1;
            if *visited > limit {
                return Err(capacity!(
                    "subset enumeration exceeded {limit} visits; shrink n or raise --budget-buckets"
                ));
            }
            f(chosen, &sums[level * d..(level + 1) * d]);
            return Ok(());
        }
        let remaining = size - level;
        for pos in start..pool.len() + 1 - remaining.min(pool.len() + 1) {
            let idx = pool[pos];
            chosen[level] = idx;
            let c = layout.coords(idx);
            let (head, tail) = sums.split_at_mut((level + 1) * d);
            for j in 0..d {
                tail[j] = head[level * d + j] + c[j];
            }
            rec(layout, pool, pos + 1, level + 1, size, chosen, sums, visited, limit, f)?;
        }
        Ok(())
    }
    if size > pool.len() {
        return Ok(0);
    }
    rec(layout, pool, 0, 0, size, &mut chosen, &mut sums, &mut visited, limit, f)?;
    Ok(visited)
}

/// Subsets grouped by sum key, stored flat with `size` indices per item.
pub(crate) struct Buckets {
    size: usize,
    map: BTreeMap<u64, Vec<u32>>,
}

impl Buckets {
    fn items(&self, key: u64) -> &[u32] {
        self.map.get(&key).map(|v| v.as_slice()).unwrap_or(&[])
    }

    fn count(&self, key: u64) -> usize {
        if self.size == 0 {
            // the single empty item
            return self.map.contains_key(&key) as usize;
        }
        self.items(key).len() / self.size
    }
}

/// Key -> number of subsets, by enumeration.
fn subset_counts(
    layout: &Layout,
    codec: &SumCodec,
    pool: &[u32],
    size: usize,
    base: &[i64],
    budget: &Budget,
) -> Result<HashMap<u64, u64>> {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    let mut overflow = false;
    for_each_subset(layout, pool, size, base, budget.visit_limit(), &mut |_, s| {
        *counts.entry(codec.encode(s)).or_insert(0) += 1;
        if counts.len() as u64 > budget.bucket_entries {
            overflow = true;
        }
    })?;
    if overflow {
        return Err(capacity!(
            "sum table exceeds {} distinct keys; shrink n or raise --budget-buckets",
            budget.bucket_entries
        ));
    }
    Ok(counts)
}

fn build_buckets(
    layout: &Layout,
    codec: &SumCodec,
    pool: &[u32],
    size: usize,
    base: &[i64],
    keep: &dyn Fn(u64) -> bool,
    budget: &Budget,
    stored: &mut u64,
) -> Result<Buckets> {
    let mut map: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    let mut over = false;
    let cap = budget.bucket_entries;
    for_each_subset(layout, pool, size, base, budget.visit_limit(), &mut |items, s| {
        let key = codec.encode(s);
        if keep(key) {
            map.entry(key).or_default().extend_from_slice(items);
            *stored += 1;
            if *stored > cap {
                over = true;
            }
        }
    })?;
    if over {
        return Err(capacity!(
            "bucket lists exceed {cap} stored subsets; shrink n or raise --budget-buckets"
        ));
    }
    Ok(Buckets { size, map })
}

struct JoinOutcome {
    families: u128,
    distinct: u128,
    found: Vec<(Vec<u32>, Vec<Vec<u32>>)>,
    /// Every distinct union of the bucket; kept only for cross-bucket dedup.
    unions: Vec<Vec<u32>>,
}

/// One bucket join: choose an item from each pool (pairwise disjoint and
/// avoiding `fixed`), counting families and distinct unions. Pools flagged
/// in `share` are the same list as their predecessor and take strictly
/// increasing item positions, so unordered families are counted once.
fn join_key(
    pools: &[&Buckets],
    share: &[bool],
    key: u64,
    members: usize,
    fixed: &[u32],
    materialize: bool,
    keep_unions: bool,
) -> JoinOutcome {
    struct St<'a> {
        lists: Vec<(&'a [u32], usize, usize)>,
        share: &'a [bool],
        used: Vec<bool>,
        chosen: Vec<usize>,
        seen: HashSet<Vec<u32>>,
        families: u128,
        found: Vec<(Vec<u32>, Vec<Vec<u32>>)>,
        materialize: bool,
        scratch: Vec<u32>,
    }
    fn rec(st: &mut St<'_>, level: usize) {
        if level == st.lists.len() {
            st.families += 1;
            st.scratch.clear();
            for (l, &c) in st.chosen.iter().enumerate() {
                let (list, size, _) = st.lists[l];
                st.scratch.extend_from_slice(&list[c * size..(c + 1) * size]);
            }
            st.scratch.sort_unstable();
            if !st.seen.contains(&st.scratch) {
                let union = st.scratch.clone();
                st.seen.insert(union.clone());
                if st.materialize {
                    let witness = st
                        .chosen
                        .iter()
                        .enumerate()
                        .map(|(l, &c)| {
                            let (list, size, _) = st.lists[l];
                            list[c * size..(c + 1) * size].to_vec()
                        })
                        .collect();
                    st.found.push((union, witness));
                }
            }
            return;
        }
        let (list, size, count) = st.lists[level];
        let start = if st.share[level] { st.chosen[level - 1] + 1 } else { 0 };
        for c in start..count {
            let item = &list[c * size..(c + 1) * size];
            if item.iter().any(|&p| st.used[p as usize]) {
                continue;
            }
            for &p in item {
                st.used[p as usize] = true;
            }
            st.chosen[level] = c;
            rec(st, level + 1);
            for &p in item {
                st.used[p as usize] = false;
            }
        }
    }
    let lists: Vec<(&[u32], usize, usize)> = pools
        .iter()
        .map(|b| (b.items(key), b.size, b.count(key)))
        .collect();
    let mut used = vec![false; members];
    for &p in fixed {
        used[p as usize] = true;
    }
    let mut st = St {
        lists,
        share,
        used,
        chosen: vec![0; pools.len()],
        seen: HashSet::new(),
        families: 0,
        found: Vec::new(),
        materialize,
        scratch: Vec::new(),
    };
    rec(&mut st, 0);
    JoinOutcome {
        families: st.families,
        distinct: st.seen.len() as u128,
        found: st.found,
        unions: if keep_unions { st.seen.into_iter().collect() } else { Vec::new() },
    }
}

/// Runs `join_key` over `keys` in parallel and folds the outcomes in key order.
/// With `global`, a union met in several buckets counts once and keeps the
/// witness from its smallest key.
fn join_all(
    pools: &[&Buckets],
    share: &[bool],
    keys: &[u64],
    members: usize,
    fixed: &[u32],
    materialize: bool,
    global: bool,
) -> JoinOutcome {
    let outcomes: Vec<JoinOutcome> = keys
        .par_iter()
        .map(|&key| join_key(pools, share, key, members, fixed, materialize, global))
        .collect();
    let mut total = JoinOutcome {
        families: 0,
        distinct: 0,
        found: Vec::new(),
        unions: Vec::new(),
    };
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for o in outcomes {
        total.families += o.families;
        if global {
            total
                .found
                .extend(o.found.into_iter().filter(|(u, _)| !seen.contains(u)));
            seen.extend(o.unions);
        } else {
            total.distinct += o.distinct;
            total.found.extend(o.found);
        }
    }
    if global {
        total.distinct = seen.len() as u128;
    }
    total
}

/// A solution: sorted distinct point ranks plus one witness partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SolutionSet {
    pub points: Vec<u32>,
    /// Group `l` of the witness (spec group order), as sorted ranks.
    pub witness: Vec<Vec<u32>>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Checks canonical form and that the witness groups have equal sums.
    pub fn validate(&self, spec: &EquationSpec) -> Result<()> {
        let grid = spec.grid()?;
        if self.points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Property(format!("points {:?} not strictly ascending", self.points)));
        }
        if self.points.len() != spec.total() || self.witness.len() != spec.k() {
            return Err(Error::Property("solution has the wrong shape".into()));
        }
        let mut all: Vec<u32> = self.witness.iter().flatten().copied().collect();
        all.sort_unstable();
        if all != self.points {
            return Err(Error::Property("witness does not partition the points".into()));
        }
        let mut sums = Vec::new();
        for (g, &h) in self.witness.iter().zip(&spec.groups) {
            if g.len() != h {
                return Err(Error::Property("witness group size mismatch".into()));
            }
            let pts: Vec<Point> = g.iter().map(|&r| grid.unrank(r)).collect();
            sums.push(crate::grid::point_sum(&pts, &grid)?);
        }
        if sums.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Property(format!("witness sums differ: {sums:?}")));
        }
        Ok(())
    }

    /// For each point in `points` order, its witness group index (1-based).
    pub fn witness_string(&self) -> String {
        let idx: Vec<usize> = self
            .points
            .iter()
            .map(|p| self.witness.iter().position(|g| g.contains(p)).unwrap_or(0) + 1)
            .collect();
        let sep = if self.witness.len() > 9 { "." } else { "" };
        idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(sep)
    }
}

/// `m_A(s)`: number of h-subsets of `A` with sum `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityMap {
    pub h: usize,
    pub grid: Grid,
    pub source_digest: String,
    /// Sorted by sum vector.
    pub entries: Vec<(SumVector, u128)>,
}

impl MultiplicityMap {
    pub fn get(&self, s: &SumVector) -> u128 {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(s))
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn from_keys(h: usize, a: &PointSet, codec: &SumCodec, counts: impl IntoIterator<Item = (u64, u128)>) -> Self {
        let mut entries: Vec<(SumVector, u128)> = counts
            .into_iter()
            .filter(|&(_, c)| c > 0)
            .map(|(k, c)| (codec.decode(k), c))
            .collect();
        entries.sort();
        MultiplicityMap {
            h,
            grid: *a.grid(),
            source_digest: a.digest(),
            entries,
        }
    }
}

/// Multiplicity map, choosing the cheaper of the dense-table and the
/// enumeration route.
pub fn multiplicity_map(a: &PointSet, h: usize, budget: &Budget) -> Result<MultiplicityMap> {
    if h == 0 {
        return Err(domain!("group size h must be positive"));
    }
    let codec = SumCodec::new(a.grid(), h)?;
    let enum_work = exact::binom_u128(a.len() as u64, h as u64).unwrap_or(u128::MAX);
    let dp_cells = codec.keyspace() as u128 * (h as u128 + 1);
    let dp_work = dp_cells * a.len() as u128;
    if dp_cells <= budget.bucket_entries as u128 && dp_work < enum_work {
        multiplicity_map_dp(a, h, budget)
    } else {
        multiplicity_map_enum(a, h, budget)
    }
}

/// Enumerates every h-subset.
pub fn multiplicity_map_enum(a: &PointSet, h: usize, budget: &Budget) -> Result<MultiplicityMap> {
    let layout = Layout::new(a);
    let codec = SumCodec::new(a.grid(), h.max(1))?;
    let pool: Vec<u32> = (0..layout.len() as u32).collect();
    let counts = subset_counts(&layout, &codec, &pool, h, &vec![0; a.grid().d], budget)?;
    Ok(MultiplicityMap::from_keys(h, a, &codec, counts.into_iter().map(|(k, c)| (k, c as u128))))
}

/// Dense table `counts[c][key]` over subset size, built one point at a time.
pub fn multiplicity_map_dp(a: &PointSet, h: usize, budget: &Budget) -> Result<MultiplicityMap> {
    let layout = Layout::new(a);
    let codec = SumCodec::new(a.grid(), h.max(1))?;
    let space = codec.keyspace();
    if space as u128 * (h as u128 + 1) > budget.bucket_entries as u128 {
        return Err(capacity!(
            "dense sum table of {} cells exceeds {}; shrink n or raise --budget-buckets",
            space as u128 * (h as u128 + 1),
            budget.bucket_entries
        ));
    }
    let space = space as usize;
    let mut layers: Vec<Vec<u128>> = vec![vec![0; space]; h + 1];
    layers[0][codec.encode(&vec![0; a.grid().d]) as usize] = 1;
    let torus = codec.torus;
    for i in 0..layout.len() as u32 {
        let c = layout.coords(i);
        let off = codec.encode(c) as usize;
        for size in (1..=h).rev() {
            let (lower, upper) = layers.split_at_mut(size);
            let src = &lower[size - 1];
            let dst = &mut upper[0];
            for key in 0..space {
                let v = src[key];
                if v == 0 {
                    continue;
                }
                let target = if torus {
                    let mut s = codec.decode(key as u64).0;
                    for (x, y) in s.iter_mut().zip(c) {
                        *x += y;
                    }
                    codec.encode(&s) as usize
                } else {
                    key + off
                };
                dst[target] += v;
            }
        }
    }
    let top = std::mem::take(&mut layers[h]);
    Ok(MultiplicityMap::from_keys(
        h,
        a,
        &codec,
        top.into_iter().enumerate().map(|(k, c)| (k as u64, c)),
    ))
}

/// Census of one count: `f`, the symmetric diagnostics `M1`/`M2`, and the
/// number of unordered disjoint families found by the join.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionCensus {
    pub f: u128,
    /// `sum_s C(m_A(s), k)`; symmetric groups only.
    pub m1: Option<u128>,
    /// Ordered `kh`-tuples with equal group sums and a repeated point; symmetric only.
    pub m2: Option<u128>,
    pub families: u128,
    pub solutions: Option<Vec<SolutionSet>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CountOptions<'a> {
    pub budget: Budget,
    pub materialize: bool,
    /// Precomputed (e.g. cached) multiplicity map for the symmetric path.
    pub multiplicities: Option<&'a MultiplicityMap>,
}

impl<'a> CountOptions<'a> {
    pub fn materialized(budget: Budget) -> Self {
        CountOptions {
            budget,
            materialize: true,
            multiplicities: None,
        }
    }
}

fn check_grid(a: &PointSet, spec: &EquationSpec) -> Result<()> {
    let g = spec.grid()?;
    if *a.grid() != g {
        return Err(domain!(
            "point set lives in {:?} but the equation is over {:?}",
            a.grid(),
            g
        ));
    }
    Ok(())
}

fn to_solutions(layout: &Layout, found: Vec<(Vec<u32>, Vec<Vec<u32>>)>, order: &[usize]) -> Vec<SolutionSet> {
    let mut out: Vec<SolutionSet> = found
        .into_iter()
        .map(|(union, witness)| {
            let mut groups = vec![Vec::new(); order.len()];
            for (level, g) in witness.into_iter().enumerate() {
                let mut ranks: Vec<u32> = g.iter().map(|&i| layout.ranks[i as usize]).collect();
                ranks.sort_unstable();
                groups[order[level]] = ranks;
            }
            SolutionSet {
                points: union.iter().map(|&i| layout.ranks[i as usize]).collect(),
                witness: groups,
            }
        })
        .collect();
    out.sort();
    out
}

/// Counts the solution sets of `spec` inside `a`.
pub fn count_solutions(a: &PointSet, spec: &EquationSpec, opts: &CountOptions<'_>) -> Result<SolutionCensus> {
    check_grid(a, spec)?;
    match spec.uniform_h() {
        Some(h) => count_symmetric(a, spec, h, opts),
        None => count_mixed(a, spec, opts),
    }
}

fn count_symmetric(a: &PointSet, spec: &EquationSpec, h: usize, opts: &CountOptions<'_>) -> Result<SolutionCensus> {
    let k = spec.k();
    let budget = &opts.budget;
    let layout = Layout::new(a);
    let codec = SumCodec::new(a.grid(), h)?;
    let computed;
    let mmap = match opts.multiplicities {
        Some(m) => {
            if m.h != h || m.grid != *a.grid() || m.source_digest != a.digest() {
                return Err(domain!("supplied multiplicity map was built for a different set or group size"));
            }
            m
        }
        None => {
            computed = multiplicity_map(a, h, budget)?;
            &computed
        }
    };
    let mut m1: u128 = 0;
    let mut heavy: HashSet<u64> = HashSet::new();
    for (s, m) in &mmap.entries {
        m1 = m1
            .checked_add(exact::binom_u128(*m as u64, k as u64).ok_or_else(|| capacity!("M1 overflows u128"))?)
            .ok_or_else(|| capacity!("M1 overflows u128"))?;
        if *m >= k as u128 {
            heavy.insert(codec.encode(&s.0));
        }
    }
    let pool: Vec<u32> = (0..layout.len() as u32).collect();
    let mut stored = 0u64;
    let buckets = build_buckets(
        &layout,
        &codec,
        &pool,
        h,
        &vec![0; a.grid().d],
        &|key| heavy.contains(&key),
        budget,
        &mut stored,
    )?;
    let keys: Vec<u64> = buckets.map.keys().copied().collect();
    let pools: Vec<&Buckets> = vec![&buckets; k];
    let share: Vec<bool> = (0..k).map(|l| l > 0).collect();
    let joined = join_all(&pools, &share, &keys, layout.len(), &[], opts.materialize, codec.torus);
    let m2 = exact_m2(&layout, &codec, h, k, joined.families, budget)?;
    let order: Vec<usize> = (0..k).collect();
    Ok(SolutionCensus {
        f: joined.distinct,
        m1: Some(m1),
        m2,
        families: joined.families,
        solutions: opts.materialize.then(|| to_solutions(&layout, joined.found, &order)),
    })
}

/// `M2` = (all ordered tuples with equal group sums) - (those with pairwise
/// distinct points). The first term is `sum_s T(s)^k` with `T(s)` the number
/// of ordered h-tuples (repetition allowed) summing to `s`; the second is
/// `k! (h!)^k` times the number of unordered disjoint families.
fn exact_m2(layout: &Layout, codec: &SumCodec, h: usize, k: usize, families: u128, budget: &Budget) -> Result<Option<u128>> {
    let work = codec.keyspace() as u128 * layout.len() as u128 * h as u128;
    if work > budget.visit_limit() as u128 {
        log::warn!("skipping exact M2: {work} table updates exceed the visit budget");
        return Ok(None);
    }
    let d = layout.grid.d;
    let mut t: HashMap<u64, u128> = HashMap::new();
    t.insert(codec.encode(&vec![0; d]), 1);
    for _ in 0..h {
        let mut next: HashMap<u64, u128> = HashMap::with_capacity(t.len() * 2);
        for (&key, &c) in &t {
            let base = codec.decode(key).0;
            for i in 0..layout.len() as u32 {
                let mut s = base.clone();
                for (x, y) in s.iter_mut().zip(layout.coords(i)) {
                    *x += y;
                }
                *next.entry(codec.encode(&s)).or_insert(0) += c;
            }
        }
        t = next;
    }
    let mut all: u128 = 0;
    for c in t.values() {
        let p = c.checked_pow(k as u32).ok_or_else(|| capacity!("M2 tuple count overflows u128"))?;
        all = all.checked_add(p).ok_or_else(|| capacity!("M2 tuple count overflows u128"))?;
    }
    let hf = exact::falling_u128(h as u64, h as u64).unwrap();
    let kf = exact::falling_u128(k as u64, k as u64).unwrap();
    let distinct = families
        .checked_mul(kf)
        .and_then(|x| x.checked_mul(hf.checked_pow(k as u32)?))
        .ok_or_else(|| capacity!("distinct tuple count overflows u128"))?;
    if distinct > all {
        return Err(Error::Property(format!(
            "distinct tuples {distinct} exceed all equal-sum tuples {all}"
        )));
    }
    Ok(Some(all - distinct))
}

/// The role-fixing overcount bound `C(kh, 2) |A|^{k(h-1)}` on `M2`.
pub fn m2_role_bound(size_a: u64, k: u32, h: u32) -> num_bigint::BigUint {
    exact::binom_big((k * h) as u64, 2) * num_bigint::BigUint::from(size_a).pow(k * (h - 1))
}

/// Keys reachable as sums of `size` distinct pool members (box only):
/// shift-or over bit layers indexed by subset size.
fn reachable_keys_box(layout: &Layout, codec: &SumCodec, size: usize, budget: &Budget) -> Result<Vec<u64>> {
    let space = codec.keyspace() as usize;
    let words = space.div_ceil(64);
    if (words as u128) * (size as u128 + 1) > budget.bucket_entries as u128 {
        return Err(capacity!("reachability table of {words} words per layer exceeds the bucket budget"));
    }
    let mut layers = vec![vec![0u64; words]; size + 1];
    layers[0][0] = 1;
    for i in 0..layout.len() as u32 {
        let off = codec.encode(layout.coords(i)) as usize;
        for c in (1..=size).rev() {
            let (lower, upper) = layers.split_at_mut(c);
            or_shifted(&mut upper[0], &lower[c - 1], off);
        }
    }
    Ok(layers.pop().unwrap())
}

fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let ws = shift / 64;
    let bs = shift % 64;
    for i in (ws..dst.len()).rev() {
        let j = i - ws;
        let mut v = src[j] << bs;
        if bs > 0 && j > 0 {
            v |= src[j - 1] >> (64 - bs);
        }
        dst[i] |= v;
    }
}

fn count_mixed(a: &PointSet, spec: &EquationSpec, opts: &CountOptions<'_>) -> Result<SolutionCensus> {
    let budget = &opts.budget;
    let layout = Layout::new(a);
    let hmax = *spec.groups.iter().max().unwrap();
    let codec = SumCodec::new(a.grid(), hmax)?;
    let d = a.grid().d;
    // groups sorted by size so equal sizes are adjacent
    let mut order: Vec<usize> = (0..spec.k()).collect();
    order.sort_by_key(|&l| (spec.groups[l], l));
    let mut sizes: Vec<usize> = spec.groups.clone();
    sizes.sort_unstable();
    sizes.dedup();

    let empty = SolutionCensus {
        f: 0,
        m1: None,
        m2: None,
        families: 0,
        solutions: opts.materialize.then(Vec::new),
    };
    if layout.len() < spec.total() {
        return Ok(empty);
    }

    // Candidate keys: reachable by every group size.
    let mut common: Option<HashSet<u64>> = None;
    for &s in &sizes {
        let keys: HashSet<u64> = if codec.torus {
            let pool: Vec<u32> = (0..layout.len() as u32).collect();
            subset_counts(&layout, &codec, &pool, s, &vec![0; d], budget)?
                .into_keys()
                .collect()
        } else {
            let bits = reachable_keys_box(&layout, &codec, s, budget)?;
            bits.iter()
                .enumerate()
                .flat_map(|(wi, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| (wi * 64 + b) as u64))
                .collect()
        };
        common = Some(match common {
            None => keys,
            Some(c) => c.intersection(&keys).copied().collect(),
        });
    }
    let common = common.unwrap_or_default();
    if common.is_empty() {
        return Ok(empty);
    }
    let pool: Vec<u32> = (0..layout.len() as u32).collect();
    let mut stored = 0u64;
    let mut by_size: BTreeMap<usize, Buckets> = BTreeMap::new();
    for &s in &sizes {
        let b = build_buckets(&layout, &codec, &pool, s, &vec![0; d], &|key| common.contains(&key), budget, &mut stored)?;
        by_size.insert(s, b);
    }
    let pools: Vec<&Buckets> = order.iter().map(|&l| &by_size[&spec.groups[l]]).collect();
    let share: Vec<bool> = (0..order.len())
        .map(|i| i > 0 && spec.groups[order[i]] == spec.groups[order[i - 1]])
        .collect();
    let mut keys: Vec<u64> = common.into_iter().collect();
    keys.sort_unstable();
    let joined = join_all(&pools, &share, &keys, layout.len(), &[], opts.materialize, codec.torus);
    Ok(SolutionCensus {
        f: joined.distinct,
        m1: None,
        m2: None,
        families: joined.families,
        solutions: opts.materialize.then(|| to_solutions(&layout, joined.found, &order)),
    })
}

/// Solution sets whose first `j` columns lie in `a1` and remaining columns in
/// `a2`, counted once per distinct union admitting at least one conforming witness.
pub fn count_cross(a1: &PointSet, a2: &PointSet, j: usize, spec: &EquationSpec, budget: &Budget) -> Result<u128> {
    let h = spec.require_symmetric()?;
    check_grid(a1, spec)?;
    check_grid(a2, spec)?;
    if j == 0 || j >= h {
        return Err(domain!("column split j = {j} must satisfy 1 <= j <= h-1 = {}", h - 1));
    }
    if !a1.is_disjoint(a2) {
        return Err(domain!("A1 and A2 overlap"));
    }
    let k = spec.k();
    let union = a1.union(a2)?;
    let layout = Layout::new(&union);
    let codec = SumCodec::new(a1.grid(), h)?;
    let d = layout.grid.d;
    let (p1, p2): (Vec<u32>, Vec<u32>) =
        (0..layout.len() as u32).partition(|&i| a1.contains_rank(layout.ranks[i as usize]));

    let collect = |pool: &[u32], size: usize| -> Result<Vec<(Vec<u32>, Vec<i64>)>> {
        let mut out = Vec::new();
        for_each_subset(&layout, pool, size, &vec![0; d], budget.visit_limit(), &mut |items, s| {
            out.push((items.to_vec(), s.to_vec()))
        })?;
        Ok(out)
    };
    let left = collect(&p1, j)?;
    let right = collect(&p2, h - j)?;
    let pairs = left.len() as u128 * right.len() as u128;
    if pairs > budget.visit_limit() as u128 {
        return Err(capacity!("{pairs} cross subsets exceed the visit budget"));
    }
    let key_of = |l: &(Vec<u32>, Vec<i64>), r: &(Vec<u32>, Vec<i64>)| {
        let s: Vec<i64> = l.1.iter().zip(&r.1).map(|(x, y)| x + y).collect();
        codec.encode(&s)
    };
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for l in &left {
        for r in &right {
            *counts.entry(key_of(l, r)).or_insert(0) += 1;
        }
    }
    let mut map: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    let mut stored = 0u64;
    for l in &left {
        for r in &right {
            let key = key_of(l, r);
            if counts[&key] >= k as u64 {
                let mut item: Vec<u32> = l.0.iter().chain(&r.0).copied().collect();
                item.sort_unstable();
                map.entry(key).or_default().extend(item);
                stored += 1;
            }
        }
    }
    if stored > budget.bucket_entries {
        return Err(capacity!("cross bucket lists exceed {} entries", budget.bucket_entries));
    }
    let buckets = Buckets { size: h, map };
    let keys: Vec<u64> = buckets.map.keys().copied().collect();
    let pools = vec![&buckets; k];
    let share: Vec<bool> = (0..k).map(|l| l > 0).collect();
    Ok(join_all(&pools, &share, &keys, layout.len(), &[], false, codec.torus).distinct)
}

/// `f_A(v)` and, optionally, the family itself (each member as sorted ranks, without `v`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThroughPoint {
    pub count: u128,
    pub family: Option<Vec<Vec<u32>>>,
}

/// Counts the distinct `(total-1)`-subsets of `A \ {v}` that complete `v` to a
/// solution with `v` in the first group.
pub fn count_through_point(
    a: &PointSet,
    v: &Point,
    spec: &EquationSpec,
    budget: &Budget,
    materialize: bool,
) -> Result<ThroughPoint> {
    check_grid(a, spec)?;
    if !a.contains(v) {
        return Err(domain!("point {v} is not in A"));
    }
    let layout = Layout::new(a);
    let empty = ThroughPoint {
        count: 0,
        family: materialize.then(Vec::new),
    };
    if layout.len() < spec.total() {
        return Ok(empty);
    }
    let hmax = *spec.groups.iter().max().unwrap();
    let codec = SumCodec::new(a.grid(), hmax)?;
    let d = layout.grid.d;
    let vi = layout.index_of(a.grid().rank(v)?).unwrap();
    let pool: Vec<u32> = (0..layout.len() as u32).filter(|&i| i != vi).collect();

    // level 0 is group 1 (holding v); the rest sorted by size
    let mut rest: Vec<usize> = (1..spec.k()).collect();
    rest.sort_by_key(|&l| (spec.groups[l], l));
    let mut sizes: Vec<usize> = rest.iter().map(|&l| spec.groups[l]).collect();
    sizes.dedup();

    let zero = vec![0i64; d];
    let first_counts = subset_counts(&layout, &codec, &pool, spec.groups[0] - 1, &v.0, budget)?;
    let mut need: HashMap<usize, usize> = HashMap::new();
    for &l in &rest {
        *need.entry(spec.groups[l]).or_insert(0) += 1;
    }
    let mut keep: HashSet<u64> = first_counts.keys().copied().collect();
    for &s in &sizes {
        let c = subset_counts(&layout, &codec, &pool, s, &zero, budget)?;
        keep.retain(|key| c.get(key).copied().unwrap_or(0) >= need[&s] as u64);
    }
    if keep.is_empty() {
        return Ok(empty);
    }
    let mut stored = 0u64;
    let first = build_buckets(&layout, &codec, &pool, spec.groups[0] - 1, &v.0, &|key| keep.contains(&key), budget, &mut stored)?;
    let mut by_size: BTreeMap<usize, Buckets> = BTreeMap::new();
    for &s in &sizes {
        by_size.insert(s, build_buckets(&layout, &codec, &pool, s, &zero, &|key| keep.contains(&key), budget, &mut stored)?);
    }
    let mut pools: Vec<&Buckets> = vec![&first];
    pools.extend(rest.iter().map(|&l| &by_size[&spec.groups[l]]));
    let share: Vec<bool> = (0..pools.len())
        .map(|i| i > 1 && spec.groups[rest[i - 1]] == spec.groups[rest[i - 2]])
        .collect();
    let mut keys: Vec<u64> = keep.into_iter().collect();
    keys.sort_unstable();
    let joined = join_all(&pools, &share, &keys, layout.len(), &[vi], materialize, codec.torus);
    let family = materialize.then(|| {
        let mut fam: Vec<Vec<u32>> = joined
            .found
            .iter()
            .map(|(u, _)| u.iter().map(|&i| layout.ranks[i as usize]).collect())
            .collect();
        fam.sort();
        fam
    });
    Ok(ThroughPoint {
        count: joined.distinct,
        family,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyFamily {
    pub kept: Vec<Vec<u32>>,
    /// Largest number of members sharing one point.
    pub max_degree: usize,
    /// `ceil(|F| / (1 + s * max_degree))` with `s` the member size.
    pub guaranteed: usize,
}

/// Greedy pairwise-disjoint subfamily, scanning members in lexicographic order.
pub fn greedy_disjoint_family(family: &[Vec<u32>], v: &Point, grid: &Grid) -> Result<GreedyFamily> {
    let vr = grid.rank(v)?;
    let mut members: Vec<Vec<u32>> = family
        .iter()
        .map(|m| {
            let mut m = m.clone();
            m.sort_unstable();
            m
        })
        .collect();
    if let Some(bad) = members.iter().find(|m| m.binary_search(&vr).is_ok()) {
        return Err(domain!("family member {bad:?} contains v = {v}"));
    }
    members.sort();
    let mut degree: HashMap<u32, usize> = HashMap::new();
    for m in &members {
        for &p in m {
            *degree.entry(p).or_insert(0) += 1;
        }
    }
    let max_degree = degree.values().copied().max().unwrap_or(0);
    let member_size = members.iter().map(|m| m.len()).max().unwrap_or(0);
    let mut used: HashSet<u32> = HashSet::new();
    let mut kept = Vec::new();
    for m in members.iter() {
        if m.iter().all(|p| !used.contains(p)) {
            used.extend(m.iter().copied());
            kept.push(m.clone());
        }
    }
    let guaranteed = if members.is_empty() {
        0
    } else {
        members.len().div_ceil(1 + member_size * max_degree)
    };
    Ok(GreedyFamily {
        kept,
        max_degree,
        guaranteed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parallelogram {
    Degenerate,
    Nondegenerate,
}

fn require_parallelogram_shape(spec: &EquationSpec) -> Result<()> {
    if spec.d < 2 || spec.groups != [2, 2] {
        return Err(domain!(
            "parallelogram classification needs d >= 2 and groups (2,2), got d = {} groups {:?}",
            spec.d,
            spec.groups
        ));
    }
    Ok(())
}

/// Degenerate iff the four points are collinear, decided by exact 2x2 minors
/// of the difference vectors.
pub fn classify_parallelogram(sol: &SolutionSet, spec: &EquationSpec) -> Result<Parallelogram> {
    require_parallelogram_shape(spec)?;
    let grid = spec.grid()?;
    if sol.points.len() != 4 {
        return Err(domain!("a parallelogram has four points, got {}", sol.points.len()));
    }
    let pts: Vec<Point> = sol.points.iter().map(|&r| grid.unrank(r)).collect();
    let diffs: Vec<Vec<i64>> = pts[1..]
        .iter()
        .map(|p| p.0.iter().zip(&pts[0].0).map(|(a, b)| a - b).collect())
        .collect();
    for u in 0..diffs.len() {
        for w in u + 1..diffs.len() {
            for a in 0..grid.d {
                for b in a + 1..grid.d {
                    if diffs[u][a] * diffs[w][b] != diffs[u][b] * diffs[w][a] {
                        return Ok(Parallelogram::Nondegenerate);
                    }
                }
            }
        }
    }
    Ok(Parallelogram::Degenerate)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerateReport {
    pub solutions: u128,
    pub degenerate: u128,
    pub bound: u128,
    pub holds: bool,
}

/// Counts collinear solutions and compares with `|A|^2 n`.
pub fn degenerate_count_bound_check(a: &PointSet, spec: &EquationSpec, budget: &Budget) -> Result<DegenerateReport> {
    require_parallelogram_shape(spec)?;
    let census = count_solutions(a, spec, &CountOptions::materialized(*budget))?;
    let mut degenerate = 0u128;
    for s in census.solutions.as_deref().unwrap_or(&[]) {
        if classify_parallelogram(s, spec)? == Parallelogram::Degenerate {
            degenerate += 1;
        }
    }
    let bound = (a.len() as u128).pow(2) * spec.n as u128;
    Ok(DegenerateReport {
        solutions: census.f,
        degenerate,
        bound,
        holds: degenerate <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Ambient;

    fn spec1(n: u32) -> EquationSpec {
        EquationSpec::symmetric(Ambient::Box, 1, n, 2, 2, 4).unwrap()
    }

    fn set1(n: u32, xs: &[i64]) -> PointSet {
        PointSet::from_coords_1d(spec1(n).grid().unwrap(), xs.iter().copied()).unwrap()
    }

    fn mm(a: &PointSet, h: usize) -> Vec<(i64, u128)> {
        multiplicity_map(a, h, &Budget::default())
            .unwrap()
            .entries
            .iter()
            .map(|(s, c)| (s.0[0], *c))
            .collect()
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(mm(&set1(3, &[1, 2, 3]), 2), vec![(3, 1), (4, 1), (5, 1)]);
        assert!(mm(&set1(3, &[1]), 2).is_empty());
        assert_eq!(mm(&set1(4, &[1, 2, 3, 4]), 2), vec![(3, 1), (4, 1), (5, 2), (6, 1), (7, 1)]);
    }

    #[test]
    fn multiplicity_routes_agree() {
        let g = Grid::new(Ambient::Box, 2, 4).unwrap();
        let t = Grid::new(Ambient::Torus, 2, 4).unwrap();
        for grid in [g, t] {
            let a = PointSet::from_ranks(grid, [0, 1, 3, 6, 7, 9, 12, 15]).unwrap();
            for h in 1..=4 {
                let b = Budget::default();
                let x = multiplicity_map_dp(&a, h, &b).unwrap();
                let y = multiplicity_map_enum(&a, h, &b).unwrap();
                assert_eq!(x, y);
                assert_eq!(x.total(), exact::binom_u128(8, h as u64).unwrap());
            }
        }
    }

    #[test]
    fn dense_table_capacity_error() {
        let a = set1(50, &(1..=50).collect::<Vec<_>>());
        let tight = Budget::new(10, 1000);
        assert!(matches!(multiplicity_map_dp(&a, 2, &tight), Err(Error::Capacity(_))));
    }

    #[test]
    fn count_examples() {
        let o = CountOptions::materialized(Budget::default());
        let c = count_solutions(&set1(4, &[1, 2, 3, 4]), &spec1(4), &o).unwrap();
        assert_eq!(c.f, 1);
        let c5 = count_solutions(&set1(5, &[1, 2, 3, 4, 5]), &spec1(5), &o).unwrap();
        assert_eq!(c5.f, 3);
        let pts: Vec<Vec<u32>> = c5.solutions.unwrap().into_iter().map(|s| s.points).collect();
        // ranks are x - 1
        assert_eq!(pts, vec![vec![0, 1, 2, 3], vec![0, 1, 3, 4], vec![1, 2, 3, 4]]);
        assert_eq!(count_solutions(&set1(4, &[1, 2, 4]), &spec1(4), &o).unwrap().f, 0);
    }

    #[test]
    fn census_values_small() {
        // [5], k=h=2: m = {3:1,4:1,5:2,6:2,7:2,8:1,9:1}; M1 = 3 binomials C(2,2)
        let c = count_solutions(&set1(5, &[1, 2, 3, 4, 5]), &spec1(5), &CountOptions::default()).unwrap();
        assert_eq!(c.m1, Some(3));
        // every disjoint family is one of the three solutions, each with one partition
        assert_eq!(c.families, 3);
        assert_eq!(c.m2, Some(crate::oracle::m2_direct(&set1(5, &[1, 2, 3, 4, 5]), &spec1(5)).unwrap()));
    }

    #[test]
    fn solutions_validate_and_witness_string() {
        let spec = EquationSpec::symmetric(Ambient::Box, 2, 3, 2, 2, 4).unwrap();
        let a = PointSet::full(spec.grid().unwrap());
        let c = count_solutions(&a, &spec, &CountOptions::materialized(Budget::default())).unwrap();
        for s in c.solutions.as_ref().unwrap() {
            s.validate(&spec).unwrap();
            assert_eq!(s.witness_string().len(), 4);
        }
    }

    #[test]
    fn cross_examples() {
        let spec = spec1(4);
        let b = Budget::default();
        assert_eq!(count_cross(&set1(4, &[1, 2]), &set1(4, &[3, 4]), 1, &spec, &b).unwrap(), 1);
        assert_eq!(count_cross(&set1(4, &[1]), &set1(4, &[3, 4]), 1, &spec, &b).unwrap(), 0);
        assert_eq!(count_cross(&set1(4, &[1, 3]), &set1(4, &[2, 4]), 1, &spec, &b).unwrap(), 1);
        assert!(matches!(
            count_cross(&set1(4, &[1, 3]), &set1(4, &[3, 4]), 1, &spec, &b),
            Err(Error::Domain(_))
        ));
        assert!(count_cross(&set1(4, &[1, 2]), &set1(4, &[3, 4]), 2, &spec, &b).is_err());
    }

    #[test]
    fn through_point_examples() {
        let b = Budget::default();
        let r = count_through_point(&set1(5, &[1, 2, 3, 4, 5]), &Point::new([1]), &spec1(5), &b, true).unwrap();
        assert_eq!(r.count, 2);
        // ranks: {2,3,4} -> [1,2,3], {2,4,5} -> [1,3,4]
        assert_eq!(r.family.unwrap(), vec![vec![1, 2, 3], vec![1, 3, 4]]);
        let r = count_through_point(&set1(4, &[1, 2, 3, 4]), &Point::new([2]), &spec1(4), &b, false).unwrap();
        assert_eq!(r.count, 1);
        let r = count_through_point(&set1(4, &[1, 2, 3]), &Point::new([2]), &spec1(4), &b, false).unwrap();
        assert_eq!(r.count, 0);
        assert!(count_through_point(&set1(4, &[1, 2, 3]), &Point::new([4]), &spec1(4), &b, false).is_err());
    }

    #[test]
    fn greedy_examples() {
        let g = spec1(8).grid().unwrap();
        let v = Point::new([1]);
        let r = greedy_disjoint_family(&[vec![1, 2, 3], vec![4, 5, 6]], &v, &g).unwrap();
        assert_eq!(r.kept.len(), 2);
        let r = greedy_disjoint_family(&[vec![1, 2, 3], vec![3, 4, 5]], &v, &g).unwrap();
        assert_eq!(r.kept, vec![vec![1, 2, 3]]);
        assert!(greedy_disjoint_family(&[vec![0, 2, 3]], &v, &g).is_err());

        let a = set1(5, &[1, 2, 3, 4, 5]);
        let fam = count_through_point(&a, &v, &spec1(5), &Budget::default(), true).unwrap().family.unwrap();
        let r = greedy_disjoint_family(&fam, &v, &g).unwrap();
        assert_eq!(r.kept.len(), 1);
        assert!(r.kept.len() >= r.guaranteed);
    }

    #[test]
    fn parallelogram_classification() {
        let spec = EquationSpec::symmetric(Ambient::Box, 2, 4, 2, 2, 4).unwrap();
        let g = spec.grid().unwrap();
        let mk = |pts: &[[i64; 2]], w: [[usize; 2]; 2]| {
            let ranks: Vec<u32> = pts.iter().map(|p| g.rank(&Point::new(*p)).unwrap()).collect();
            let mut points = ranks.clone();
            points.sort_unstable();
            let witness = w.iter().map(|g| {
                let mut v: Vec<u32> = g.iter().map(|&i| ranks[i]).collect();
                v.sort_unstable();
                v
            });
            SolutionSet { points, witness: witness.collect() }
        };
        let diag = mk(&[[1, 1], [2, 2], [3, 3], [4, 4]], [[0, 3], [1, 2]]);
        diag.validate(&spec).unwrap();
        assert_eq!(classify_parallelogram(&diag, &spec).unwrap(), Parallelogram::Degenerate);
        let square = mk(&[[1, 1], [1, 2], [2, 1], [2, 2]], [[0, 3], [1, 2]]);
        assert_eq!(classify_parallelogram(&square, &spec).unwrap(), Parallelogram::Nondegenerate);
        let big = mk(&[[1, 1], [3, 1], [1, 3], [3, 3]], [[0, 3], [1, 2]]);
        assert_eq!(classify_parallelogram(&big, &spec).unwrap(), Parallelogram::Nondegenerate);
        assert!(classify_parallelogram(&diag, &spec1(4)).is_err());
    }

    #[test]
    fn degenerate_counts() {
        let spec = EquationSpec::symmetric(Ambient::Box, 2, 4, 2, 2, 4).unwrap();
        let g = spec.grid().unwrap();
        let b = Budget::default();
        let diag = PointSet::from_points(g, &[Point::new([1, 1]), Point::new([2, 2]), Point::new([3, 3]), Point::new([4, 4])]).unwrap();
        let r = degenerate_count_bound_check(&diag, &spec, &b).unwrap();
        assert_eq!((r.degenerate, r.bound, r.holds), (1, 64, true));
        let sq = PointSet::from_points(g, &[Point::new([1, 1]), Point::new([1, 2]), Point::new([2, 1]), Point::new([2, 2])]).unwrap();
        let r = degenerate_count_bound_check(&sq, &spec, &b).unwrap();
        assert_eq!((r.degenerate, r.holds), (0, true));
        let tiny = PointSet::from_points(g, &[Point::new([1, 1])]).unwrap();
        assert_eq!(degenerate_count_bound_check(&tiny, &spec, &b).unwrap().degenerate, 0);
    }

    #[test]
    fn mixed_examples() {
        let spec = EquationSpec::mixed(Ambient::Box, 1, 6, vec![1, 2], 4).unwrap();
        let a = PointSet::full(spec.grid().unwrap());
        let c = count_solutions(&a, &spec, &CountOptions::materialized(Budget::default())).unwrap();
        // x = y + z with distinct y < z: for x in 3..=6 the pairs below x
        assert_eq!(c.f, crate::oracle::naive_solutions(&a, &spec).unwrap().len() as u128);
        for s in c.solutions.unwrap() {
            s.validate(&spec).unwrap();
            assert_eq!(s.witness[0].len(), 1);
        }
        assert!(c.m1.is_none());
    }

    #[test]
    fn torus_has_more_solutions() {
        let b = spec1(5);
        let t = b.with_ambient(Ambient::Torus);
        let ab = PointSet::full(b.grid().unwrap());
        let at = ab.reinterpret(Ambient::Torus);
        let fb = count_solutions(&ab, &b, &CountOptions::default()).unwrap().f;
        let ft = count_solutions(&at, &t, &CountOptions::default()).unwrap().f;
        assert!(ft >= fb);
        assert_eq!(ft, crate::oracle::naive_solutions(&at, &t).unwrap().len() as u128);
    }

    #[test]
    fn through_point_reflection_symmetry() {
        let spec = EquationSpec::symmetric(Ambient::Box, 2, 4, 2, 2, 4).unwrap();
        let g = spec.grid().unwrap();
        let a = PointSet::from_ranks(g, [0, 1, 2, 5, 6, 7, 9, 10, 13, 15]).unwrap();
        let refl = |p: &Point| Point(p.0.iter().map(|c| 5 - c).collect());
        let ar = PointSet::from_points(g, &a.points().iter().map(refl).collect::<Vec<_>>()).unwrap();
        for v in a.points() {
            let x = count_through_point(&a, &v, &spec, &Budget::default(), false).unwrap().count;
            let y = count_through_point(&ar, &refl(&v), &spec, &Budget::default(), false).unwrap().count;
            assert_eq!(x, y, "v = {v}");
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let spec = EquationSpec::symmetric(Ambient::Box, 2, 4, 2, 2, 4).unwrap();
        let a = PointSet::full(spec.grid().unwrap());
        let run = |w| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .unwrap()
                .install(|| count_solutions(&a, &spec, &CountOptions::materialized(Budget::default())).unwrap())
        };
        assert_eq!(run(1), run(8));
    }
}
