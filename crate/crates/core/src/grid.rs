//! Grid points, point sets and coordinatewise arithmetic in the box `[n]^d`
//! (coordinates `1..=n`) and the torus `Z_n^d` (coordinates `0..n`).
//!
//! Points are ranked lexicographically; that rank order is the canonical
//! order used everywhere else in the crate.

use crate::bitset::BitSet;
use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;

/// Largest number of ranks a grid may have.
pub const MAX_RANKS: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    Box,
    Torus,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Box => f.write_str("box"),
            Ambient::Torus => f.write_str("torus"),
        }
    }
}

impl std::str::FromStr for Ambient {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(Ambient::Box),
            "torus" => Ok(Ambient::Torus),
            other => Err(domain!("unknown ambient {other:?}, expected box or torus")),
        }
    }
}

/// The ambient grid: box or torus, dimension and order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    pub ambient: Ambient,
    pub d: usize,
    pub n: u32,
}

impl Grid {
    pub fn new(ambient: Ambient, d: usize, n: u32) -> Result<Self> {
        if d == 0 {
            return Err(domain!("dimension d must be positive"));
        }
        if n == 0 {
            return Err(domain!("order n must be positive"));
        }
        let mut size: u64 = 1;
        for _ in 0..d {
            size = size.saturating_mul(n as u64);
            if size > MAX_RANKS {
                return Err(Error::Capacity(format!(
                    "n^d = {n}^{d} exceeds the rank capacity 2^31"
                )));
            }
        }
        Ok(Grid { ambient, d, n })
    }

    pub fn size(&self) -> usize {
        (self.n as usize).pow(self.d as u32)
    }

    /// Smallest legal coordinate: 1 in the box, 0 in the torus.
    #[inline]
    pub fn lo(&self) -> i64 {
        match self.ambient {
            Ambient::Box => 1,
            Ambient::Torus => 0,
        }
    }

    #[inline]
    pub fn hi(&self) -> i64 {
        self.lo() + self.n as i64 - 1
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.0.len() == self.d && p.0.iter().all(|&c| c >= self.lo() && c <= self.hi())
    }

    pub fn rank(&self, p: &Point) -> Result<u32> {
        if p.0.len() != self.d {
            return Err(domain!("point {p} has {} coordinates, expected {}", p.0.len(), self.d));
        }
        let mut r: u64 = 0;
        for &c in &p.0 {
            if c < self.lo() || c > self.hi() {
                return Err(domain!("coordinate {c} of {p} outside [{}, {}]", self.lo(), self.hi()));
            }
            r = r * self.n as u64 + (c - self.lo()) as u64;
        }
        Ok(r as u32)
    }

    pub fn unrank(&self, rank: u32) -> Point {
        let mut coords = vec![0i64; self.d];
        self.write_coords(rank, &mut coords);
        Point(coords)
    }

    pub fn write_coords(&self, rank: u32, out: &mut [i64]) {
        let mut r = rank as u64;
        for c in out.iter_mut().rev() {
            *c = (r % self.n as u64) as i64 + self.lo();
            r /= self.n as u64;
        }
    }

    /// Same `d` and `n`, other ambient. Coordinates are never converted implicitly.
    pub fn with_ambient(&self, ambient: Ambient) -> Grid {
        Grid { ambient, ..*self }
    }
}

/// A grid point; the derived order is lexicographic and agrees with rank order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point(pub Vec<i64>);

impl Point {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Point(coords.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl std::str::FromStr for Point {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(t);
        let coords = inner
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad coordinate {c:?} in {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Point(coords))
    }
}

/// Coordinatewise sum of points; reduced modulo `n` in the torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SumVector(pub Vec<i64>);

impl fmt::Display for SumVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Point(self.0.clone()).fmt(f)
    }
}

pub fn point_sum(points: &[Point], grid: &Grid) -> Result<SumVector> {
    let mut acc = vec![0i64; grid.d];
    for p in points {
        if !grid.contains(p) {
            return Err(domain!("point {p} is not legal in the {} grid of order {}", grid.ambient, grid.n));
        }
        for (a, c) in acc.iter_mut().zip(&p.0) {
            *a += c;
        }
    }
    if grid.ambient == Ambient::Torus {
        for a in acc.iter_mut() {
            *a = a.rem_euclid(grid.n as i64);
        }
    }
    Ok(SumVector(acc))
}

/// A subset `A` of the grid, stored as a bit vector over point ranks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    grid: Grid,
    bits: BitSet,
}

impl PointSet {
    pub fn empty(grid: Grid) -> Self {
        PointSet {
            grid,
            bits: BitSet::new(grid.size()),
        }
    }

    pub fn full(grid: Grid) -> Self {
        PointSet {
            grid,
            bits: BitSet::full(grid.size()),
        }
    }

    pub fn from_points<'a>(grid: Grid, points: impl IntoIterator<Item = &'a Point>) -> Result<Self> {
        let mut s = Self::empty(grid);
        for p in points {
            s.insert(p)?;
        }
        Ok(s)
    }

    /// Convenience for one-dimensional sets: `from_coords(grid, [1, 2, 4])`.
    pub fn from_coords_1d(grid: Grid, xs: impl IntoIterator<Item = i64>) -> Result<Self> {
        let pts: Vec<Point> = xs.into_iter().map(|x| Point(vec![x])).collect();
        Self::from_points(grid, &pts)
    }

    pub fn from_ranks(grid: Grid, ranks: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut s = Self::empty(grid);
        for r in ranks {
            if r as usize >= grid.size() {
                return Err(domain!("rank {r} outside [0, {})", grid.size()));
            }
            s.bits.insert(r as usize);
        }
        Ok(s)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn insert(&mut self, p: &Point) -> Result<()> {
        let r = self.grid.rank(p)?;
        self.bits.insert(r as usize);
        Ok(())
    }

    pub fn remove(&mut self, p: &Point) -> Result<()> {
        let r = self.grid.rank(p)?;
        self.bits.remove(r as usize);
        Ok(())
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.grid.rank(p).map(|r| self.bits.contains(r as usize)).unwrap_or(false)
    }

    pub fn contains_rank(&self, r: u32) -> bool {
        self.bits.contains(r as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Member ranks in ascending (canonical) order.
    pub fn ranks(&self) -> Vec<u32> {
        self.bits.iter().map(|r| r as u32).collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.bits.iter().map(|r| self.grid.unrank(r as u32)).collect()
    }

    fn check_same_grid(&self, other: &PointSet) -> Result<()> {
        if self.grid != other.grid {
            return Err(domain!("point sets live in different grids"));
        }
        Ok(())
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.check_same_grid(other)?;
        Ok(PointSet {
            grid: self.grid,
            bits: self.bits.union(&other.bits),
        })
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.check_same_grid(other)?;
        Ok(PointSet {
            grid: self.grid,
            bits: self.bits.intersection(&other.bits),
        })
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        self.check_same_grid(other)?;
        Ok(PointSet {
            grid: self.grid,
            bits: self.bits.difference(&other.bits),
        })
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.grid == other.grid && self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.grid == other.grid && self.bits.is_subset(&other.bits)
    }

    /// Same ranks read in another ambient. Only meaningful for 0/1-based
    /// relabelling `x -> x - 1`, which is what viewing `A ⊆ [n]^d` inside
    /// `Z_n^d` amounts to.
    pub fn reinterpret(&self, ambient: Ambient) -> PointSet {
        PointSet {
            grid: self.grid.with_ambient(ambient),
            bits: self.bits.clone(),
        }
    }

    /// One `(c1,...,cd)` tuple per line.
    pub fn to_tuples(&self) -> String {
        let mut out = String::new();
        for p in self.points() {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the tuple form; blank lines and `#` comments are ignored.
    pub fn from_tuples(grid: Grid, text: &str) -> Result<Self> {
        let mut s = Self::empty(grid);
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let p: Point = line.parse()?;
            s.insert(&p)?;
        }
        Ok(s)
    }

    /// Run-length form `"<len>:<r0>,<r1>,..."`; runs alternate absent/present,
    /// starting with an absent run (possibly zero).
    pub fn to_rle(&self) -> String {
        let mut runs = Vec::new();
        let mut current = false;
        let mut run = 0usize;
        for i in 0..self.grid.size() {
            let b = self.bits.contains(i);
            if b == current {
                run += 1;
            } else {
                runs.push(run);
                current = b;
                run = 1;
            }
        }
        runs.push(run);
        let body: Vec<String> = runs.iter().map(|r| r.to_string()).collect();
        format!("{}:{}", self.grid.size(), body.join(","))
    }

    pub fn from_rle(grid: Grid, text: &str) -> Result<Self> {
        let text = text.trim();
        let (len, body) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("run-length form needs '<len>:<runs>', got {text:?}")))?;
        let len: usize = len
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad length {len:?}: {e}")))?;
        if len != grid.size() {
            return Err(domain!("run-length form covers {len} ranks but the grid has {}", grid.size()));
        }
        let mut s = Self::empty(grid);
        let mut pos = 0usize;
        let mut present = false;
        for tok in body.split(',').filter(|t| !t.trim().is_empty()) {
            let run: usize = tok
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad run {tok:?}: {e}")))?;
            if pos + run > len {
                return Err(Error::Parse(format!("runs overflow length {len}")));
            }
            if present {
                for i in pos..pos + run {
                    s.bits.insert(i);
                }
            }
            pos += run;
            present = !present;
        }
        if pos != len {
            return Err(Error::Parse(format!("runs cover {pos} of {len} ranks")));
        }
        Ok(s)
    }

    /// SHA-256 over the grid description and run-length form.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}:{}:{}|", self.grid.ambient, self.grid.d, self.grid.n));
        h.update(self.to_rle());
        hex::encode(h.finalize())
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points().iter().map(|p| p.to_string())).finish()
    }
}

/// The whole grid as a point set.
pub fn full_grid(spec: &EquationSpec) -> Result<PointSet> {
    Ok(PointSet::full(spec.grid()?))
}

/// The equation `sum of group 1 = ... = sum of group k` over an ambient grid,
/// together with the number of colors used by coloring operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquationSpec {
    pub ambient: Ambient,
    pub d: usize,
    pub n: u32,
    pub groups: Vec<usize>,
    pub r: usize,
}

impl EquationSpec {
    pub fn symmetric(ambient: Ambient, d: usize, n: u32, k: usize, h: usize, r: usize) -> Result<Self> {
        Self::mixed(ambient, d, n, vec![h; k], r)
    }

    pub fn mixed(ambient: Ambient, d: usize, n: u32, groups: Vec<usize>, r: usize) -> Result<Self> {
        let spec = EquationSpec { ambient, d, n, groups, r };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        Grid::new(self.ambient, self.d, self.n)?;
        if self.groups.len() < 2 {
            return Err(domain!("need k >= 2 groups, got {}", self.groups.len()));
        }
        if self.groups.contains(&0) {
            return Err(domain!("every group size must be at least 1"));
        }
        if self.r == 0 {
            return Err(domain!("color count r must be positive"));
        }
        if self.r > 16 {
            return Err(domain!("color count r = {} exceeds the supported maximum 16", self.r));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.ambient, self.d, self.n)
    }

    pub fn k(&self) -> usize {
        self.groups.len()
    }

    /// Number of points in one solution, `h_1 + ... + h_k`.
    pub fn total(&self) -> usize {
        self.groups.iter().sum()
    }

    pub fn uniform_h(&self) -> Option<usize> {
        let h = self.groups[0];
        self.groups.iter().all(|&g| g == h).then_some(h)
    }

    pub fn require_symmetric(&self) -> Result<usize> {
        self.uniform_h()
            .ok_or_else(|| domain!("operation needs equal group sizes, got {:?}", self.groups))
    }

    pub fn with_ambient(&self, ambient: Ambient) -> EquationSpec {
        EquationSpec { ambient, ..self.clone() }
    }

    pub fn with_n(&self, n: u32) -> EquationSpec {
        EquationSpec { n, ..self.clone() }
    }

    pub fn with_r(&self, r: usize) -> EquationSpec {
        EquationSpec { r, ..self.clone() }
    }

    /// Stable text key, used for cache file names and report echoes.
    pub fn key(&self) -> String {
        let groups: Vec<String> = self.groups.iter().map(|g| g.to_string()).collect();
        format!("{}-d{}-n{}-g{}-r{}", self.ambient, self.d, self.n, groups.join("_"), self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bx(d: usize, n: u32) -> Grid {
        Grid::new(Ambient::Box, d, n).unwrap()
    }

    #[test]
    fn rank_examples() {
        let g = bx(2, 3);
        assert_eq!(g.rank(&Point::new([1, 1])).unwrap(), 0);
        assert_eq!(g.rank(&Point::new([1, 3])).unwrap(), 2);
        assert_eq!(g.rank(&Point::new([3, 3])).unwrap(), 8);
        assert!(matches!(g.rank(&Point::new([0, 1])), Err(Error::Domain(_))));
        assert!(matches!(g.rank(&Point::new([1, 4])), Err(Error::Domain(_))));
    }

    #[test]
    fn torus_is_zero_based() {
        let g = Grid::new(Ambient::Torus, 1, 5).unwrap();
        assert_eq!(g.rank(&Point::new([0])).unwrap(), 0);
        assert!(g.rank(&Point::new([5])).is_err());
    }

    #[test]
    fn rank_roundtrip_full_scan() {
        for (d, n) in [(1, 1000), (2, 1000), (3, 12), (4, 6)] {
            let g = bx(d, n);
            for r in 0..g.size() as u32 {
                assert_eq!(g.rank(&g.unrank(r)).unwrap(), r);
            }
        }
    }

    #[test]
    fn lexicographic_order_matches_rank() {
        let g = bx(3, 4);
        let pts: Vec<Point> = (0..g.size() as u32).map(|r| g.unrank(r)).collect();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
    }

    #[test]
    fn point_sum_examples() {
        let g = bx(1, 5);
        assert_eq!(point_sum(&[Point::new([2]), Point::new([3])], &g).unwrap().0, vec![5]);
        let t = Grid::new(Ambient::Torus, 1, 5).unwrap();
        assert_eq!(point_sum(&[Point::new([3]), Point::new([4])], &t).unwrap().0, vec![2]);
        let g2 = bx(2, 3);
        assert_eq!(
            point_sum(&[Point::new([1, 2]), Point::new([3, 1])], &g2).unwrap().0,
            vec![4, 3]
        );
        assert!(point_sum(&[Point::new([0])], &g).is_err());
    }

    #[test]
    fn full_grid_sizes() {
        for (d, n, size) in [(1, 4, 4), (2, 2, 4), (3, 2, 8)] {
            let spec = EquationSpec::symmetric(Ambient::Box, d, n, 2, 2, 4).unwrap();
            assert_eq!(full_grid(&spec).unwrap().len(), size);
        }
        let s = full_grid(&EquationSpec::symmetric(Ambient::Box, 1, 4, 2, 2, 4).unwrap()).unwrap();
        let xs: Vec<i64> = s.points().iter().map(|p| p.0[0]).collect();
        assert_eq!(xs, vec![1, 2, 3, 4]);
    }

    #[test]
    fn capacity_cap() {
        assert!(matches!(Grid::new(Ambient::Box, 2, 50_000), Err(Error::Capacity(_))));
        assert!(Grid::new(Ambient::Box, 1, 1 << 31).is_ok());
        assert!(matches!(Grid::new(Ambient::Box, 32, 2), Err(Error::Capacity(_))));
    }

    #[test]
    fn spec_validation() {
        assert!(EquationSpec::mixed(Ambient::Box, 1, 5, vec![2], 4).is_err());
        assert!(EquationSpec::mixed(Ambient::Box, 1, 5, vec![2, 0], 4).is_err());
        assert!(EquationSpec::symmetric(Ambient::Box, 0, 5, 2, 2, 4).is_err());
        let s = EquationSpec::mixed(Ambient::Box, 1, 5, vec![1, 2], 4).unwrap();
        assert_eq!(s.total(), 3);
        assert_eq!(s.uniform_h(), None);
        assert!(s.require_symmetric().is_err());
    }

    #[test]
    fn serialization_forms() {
        let g = bx(2, 3);
        let s = PointSet::from_points(g, &[Point::new([1, 2]), Point::new([3, 3]), Point::new([2, 1])]).unwrap();
        let text = s.to_tuples();
        assert_eq!(text, "(1,2)\n(2,1)\n(3,3)\n");
        assert_eq!(PointSet::from_tuples(g, &text).unwrap(), s);
        assert_eq!(s.to_rle(), "9:1,1,1,1,4,1");
        assert_eq!(PointSet::from_rle(g, &s.to_rle()).unwrap(), s);
        assert_eq!(PointSet::full(g).to_rle(), "9:0,9");
        assert_eq!(PointSet::empty(g).to_rle(), "9:9");
        assert!(PointSet::from_rle(g, "8:0,8").is_err());
        assert!(PointSet::from_rle(g, "9:0,3").is_err());
    }

    fn set_strategy(size: usize) -> impl Strategy<Value = Vec<bool>> {
        proptest::collection::vec(any::<bool>(), size)
    }

    proptest! {
        #[test]
        fn set_algebra_matches_membership(a in set_strategy(27), b in set_strategy(27)) {
            let g = bx(3, 3);
            let sa = PointSet::from_ranks(g, (0..27u32).filter(|&i| a[i as usize])).unwrap();
            let sb = PointSet::from_ranks(g, (0..27u32).filter(|&i| b[i as usize])).unwrap();
            let u = sa.union(&sb).unwrap();
            let i = sa.intersection(&sb).unwrap();
            let d = sa.difference(&sb).unwrap();
            for r in 0..27u32 {
                let (x, y) = (a[r as usize], b[r as usize]);
                prop_assert_eq!(u.contains_rank(r), x || y);
                prop_assert_eq!(i.contains_rank(r), x && y);
                prop_assert_eq!(d.contains_rank(r), x && !y);
            }
            prop_assert_eq!(PointSet::from_rle(g, &sa.to_rle()).unwrap(), sa.clone());
            prop_assert_eq!(PointSet::from_tuples(g, &sa.to_tuples()).unwrap(), sa);
        }

        #[test]
        fn torus_sum_commutes_and_associates(
            a in proptest::collection::vec(0i64..7, 2),
            b in proptest::collection::vec(0i64..7, 2),
            c in proptest::collection::vec(0i64..7, 2),
        ) {
            let t = Grid::new(Ambient::Torus, 2, 7).unwrap();
            let (pa, pb, pc) = (Point(a), Point(b), Point(c));
            let ab = point_sum(&[pa.clone(), pb.clone()], &t).unwrap();
            let ba = point_sum(&[pb.clone(), pa.clone()], &t).unwrap();
            prop_assert_eq!(&ab, &ba);
            let ab_c = point_sum(&[Point(ab.0.clone()), pc.clone()], &t).unwrap();
            let bc = point_sum(&[pb, pc], &t).unwrap();
            let a_bc = point_sum(&[pa, Point(bc.0)], &t).unwrap();
            prop_assert_eq!(ab_c, a_bc);
        }
    }
}
