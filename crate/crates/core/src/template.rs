//! Templates (a palette of colors per point), subtemplates, rainbow
//! subtemplate counts `R(P)`, constrained coloring counts `g(P, A)`, the
//! `X_i(P)` partition with its good/bad verdict, and checks of the three
//! container conclusions against a supplied template collection.

use crate::coloring::{count_palette_colorings, Coloring, Incidence};
use crate::error::{domain, Error, Result};
use crate::exact::{self, Interval};
use crate::grid::{EquationSpec, PointSet};
use crate::solutions::SolutionSet;
use crate::Budget;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Precision (bits) of every `log2 n` enclosure.
pub const LOG_BITS: u32 = 96;

/// Palettes over the points of `A` in rank order; bit `i` stands for color `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Template {
    pub r: usize,
    pub palettes: Vec<u32>,
}

impl Template {
    pub fn new(r: usize, palettes: Vec<u32>) -> Result<Self> {
        if r == 0 || r > 16 {
            return Err(domain!("color count r = {r} outside 1..=16"));
        }
        let full = (1u32 << r) - 1;
        if palettes.iter().any(|&p| p & !full != 0) {
            return Err(domain!("palette uses a color above r = {r}"));
        }
        Ok(Template { r, palettes })
    }

    /// Every point gets all `r` colors.
    pub fn full(r: usize, points: usize) -> Result<Self> {
        Template::new(r, vec![(1u32 << r) - 1; points])
    }

    /// A coloring as the all-singleton template.
    pub fn from_coloring(r: usize, coloring: &Coloring) -> Result<Self> {
        if coloring.iter().any(|&c| c == 0 || c as usize > r) {
            return Err(domain!("coloring uses a color outside 1..={r}"));
        }
        Template::new(r, coloring.iter().map(|&c| 1u32 << (c - 1)).collect())
    }

    pub fn len(&self) -> usize {
        self.palettes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.palettes.is_empty()
    }

    /// One line per point: `rank: {c1,c2,...}`.
    pub fn to_text(&self, a: &PointSet) -> Result<String> {
        let ranks = a.ranks();
        if ranks.len() != self.palettes.len() {
            return Err(domain!("template has {} palettes, A has {} points", self.palettes.len(), ranks.len()));
        }
        let mut out = String::new();
        for (r, p) in ranks.iter().zip(&self.palettes) {
            let colors: Vec<String> = (0..32).filter(|b| p >> b & 1 == 1).map(|b| (b + 1).to_string()).collect();
            out.push_str(&format!("{r}: {{{}}}\n", colors.join(",")));
        }
        Ok(out)
    }

    pub fn from_text(a: &PointSet, r: usize, text: &str) -> Result<Self> {
        let ranks = a.ranks();
        let mut palettes = vec![0u32; ranks.len()];
        let mut seen = vec![false; ranks.len()];
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let bad = || Error::Parse(format!("bad template line {line:?}"));
            let (rank, rest) = line.split_once(':').ok_or_else(bad)?;
            let rank: u32 = rank.trim().parse().map_err(|_| bad())?;
            let body = rest.trim().strip_prefix('{').and_then(|s| s.strip_suffix('}')).ok_or_else(bad)?;
            let i = ranks.binary_search(&rank).map_err(|_| domain!("rank {rank} is not in A"))?;
            if seen[i] {
                return Err(Error::Parse(format!("rank {rank} listed twice")));
            }
            seen[i] = true;
            for c in body.split(',').map(str::trim).filter(|c| !c.is_empty()) {
                let c: usize = c.parse().map_err(|_| bad())?;
                if c == 0 || c > r {
                    return Err(domain!("color {c} outside 1..={r}"));
                }
                palettes[i] |= 1 << (c - 1);
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::Parse(format!("no palette for rank {}", ranks[i])));
        }
        Template::new(r, palettes)
    }
}

/// Pointwise palette inclusion.
pub fn is_subtemplate(p1: &Template, p2: &Template) -> Result<bool> {
    if p1.len() != p2.len() {
        return Err(domain!("templates cover {} and {} points", p1.len(), p2.len()));
    }
    Ok(p1.palettes.iter().zip(&p2.palettes).all(|(a, b)| a & !b == 0))
}

/// Systems of distinct colors, one per listed palette.
fn injective_assignments(palettes: &[u32]) -> u128 {
    fn rec(palettes: &[u32], i: usize, used: u32) -> u128 {
        if i == palettes.len() {
            return 1;
        }
        let mut free = palettes[i] & !used;
        let mut total = 0;
        while free != 0 {
            let bit = free & free.wrapping_neg();
            free &= free - 1;
            total += rec(palettes, i + 1, used | bit);
        }
        total
    }
    rec(palettes, 0, 0)
}

/// `R(P)`: for every solution set, the rainbow colorings of it that choose
/// each point's color from its palette.
pub fn count_rainbow_subtemplates(p: &Template, a: &PointSet, solutions: &[SolutionSet]) -> Result<u128> {
    let inc = Incidence::new(a, solutions)?;
    if p.len() != inc.m {
        return Err(domain!("template has {} palettes, A has {} points", p.len(), inc.m));
    }
    Ok(inc
        .sols
        .par_iter()
        .map(|s| {
            let pal: Vec<u32> = s.iter().map(|&i| p.palettes[i as usize]).collect();
            injective_assignments(&pal)
        })
        .sum())
}

/// `g(P, A)`: rainbow-free colorings that are subtemplates of `P`.
pub fn count_template_colorings(p: &Template, a: &PointSet, solutions: &[SolutionSet], budget: &Budget) -> Result<u128> {
    let inc = Incidence::new(a, solutions)?;
    if p.len() != inc.m {
        return Err(domain!("template has {} palettes, A has {} points", p.len(), inc.m));
    }
    count_palette_colorings(&inc, &p.palettes, budget)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateClassification {
    /// Index `i`: `|X_i(P)|`.
    pub x_sizes: Vec<usize>,
    pub x_low: usize,
    pub x_high: usize,
    pub good: bool,
    /// `|A| / (log2 n)^3`.
    pub good_threshold: Interval,
    /// The maximizing `(kh-1)`-set (1-based colors) and `|A_{P,C_P}|`.
    pub dominant: (Vec<u8>, usize),
    /// `|A_{P,C_P}| >= |A| - |A| / (log2 n)^2`.
    pub dominant_large: bool,
    /// `x_high <= |A| / (log2 n)^4`.
    pub high_small: bool,
}

/// Colour sets of the given size in lexicographic order, as bitmasks.
fn color_sets(r: usize, size: usize) -> Vec<u32> {
    let mut out = Vec::new();
    fn rec(r: usize, start: usize, left: usize, mask: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for c in start..r {
            if r - c < left {
                break;
            }
            rec(r, c + 1, left - 1, mask | 1 << c, out);
        }
    }
    rec(r, 0, size, 0, &mut out);
    out
}

pub(crate) fn mask_colors(mask: u32) -> Vec<u8> {
    (0..32u8).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// `|A| / L^e` for `L` in the `log2 n` enclosure, as an interval.
fn over_log_power(size_a: usize, n: u32, e: u32) -> Interval {
    exact::log2_interval(n as u64, LOG_BITS)
        .pow(e)
        .recip()
        .scale(&exact::int(size_a as i64))
}

fn certainly_at_most(x: usize, bound: &Interval) -> bool {
    bound.certainly_ge(&exact::int(x as i64))
}

pub fn classify_template(p: &Template, spec: &EquationSpec) -> Result<TemplateClassification> {
    let total = spec.total();
    let r = spec.r;
    if r + 1 < total {
        return Err(domain!("r = {r} is below kh - 1 = {}", total - 1));
    }
    if spec.n < 2 {
        return Err(domain!("classification needs n >= 2 so that log2 n > 0"));
    }
    if p.r != r {
        return Err(domain!("template is over {} colors, equation over {r}", p.r));
    }
    let size_a = p.len();
    let mut x_sizes = vec![0usize; r + 1];
    for &pal in &p.palettes {
        x_sizes[pal.count_ones() as usize] += 1;
    }
    let x_low: usize = x_sizes[..=total - 2].iter().sum();
    let x_high: usize = x_sizes.get(total..).map(|s| s.iter().sum()).unwrap_or(0);
    let good_threshold = over_log_power(size_a, spec.n, 3);
    let good = certainly_at_most(x_low, &good_threshold);

    let mut best = (0u32, 0usize);
    for (i, c) in color_sets(r, total - 1).into_iter().enumerate() {
        let count = p.palettes.iter().filter(|&&x| x == c).count();
        if i == 0 || count > best.1 {
            best = (c, count);
        }
    }
    // |A_{P,C_P}| >= |A| - |A|/L^2  <=>  |A| - |A_{P,C_P}| <= |A|/L^2
    let dominant_large = certainly_at_most(size_a - best.1, &over_log_power(size_a, spec.n, 2));
    let high_small = certainly_at_most(x_high, &over_log_power(size_a, spec.n, 4));
    Ok(TemplateClassification {
        x_sizes,
        x_low,
        x_high,
        good,
        good_threshold,
        dominant: (mask_colors(best.0), best.1),
        dominant_large,
        high_small,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainerReport {
    /// (i): every template to cover lies under some member.
    pub coverage: bool,
    /// Indices of uncovered templates.
    pub uncovered: Vec<usize>,
    /// (ii): `R(P)` per member and the bound `|A|^{k(h-1)+1} / (log2 n)^{5kh}`.
    pub rainbow_counts: Vec<u128>,
    pub rainbow_bound: Interval,
    pub rainbow_ok: bool,
    /// (iii): `|C| <= 2^E` with `E = |A| n^{-k(h-1)d/(kh-1)} (log2 n)^{10}`.
    pub size: usize,
    pub size_exponent: Interval,
    pub size_ok: bool,
}

/// Checks the three container conclusions for a supplied collection.
pub fn container_conclusions_check(
    collection: &[Template],
    to_cover: &[Template],
    a: &PointSet,
    solutions: &[SolutionSet],
    spec: &EquationSpec,
) -> Result<ContainerReport> {
    let h = spec.require_symmetric()? as u32;
    let k = spec.k() as u32;
    if spec.n < 2 {
        return Err(domain!("container bounds need n >= 2"));
    }
    let mut uncovered = Vec::new();
    for (i, t) in to_cover.iter().enumerate() {
        let mut covered = false;
        for c in collection {
            if is_subtemplate(t, c)? {
                covered = true;
                break;
            }
        }
        if !covered {
            uncovered.push(i);
        }
    }
    let size_a = a.len();
    let rainbow_bound = rainbow_threshold(size_a, spec.n, k, h);
    let rainbow_counts = collection
        .iter()
        .map(|t| count_rainbow_subtemplates(t, a, solutions))
        .collect::<Result<Vec<_>>>()?;
    let rainbow_ok = rainbow_counts
        .iter()
        .all(|&c| rainbow_bound.certainly_ge(&exact::big(c)));
    let size_exponent = container_size_exponent(size_a, spec.n, spec.d as u32, k, h);
    let size_ok = match collection.len() {
        0 | 1 => true,
        m => exact::log2_interval(m as u64, LOG_BITS).hi <= size_exponent.lo,
    };
    Ok(ContainerReport {
        coverage: uncovered.is_empty(),
        uncovered,
        rainbow_counts,
        rainbow_bound,
        rainbow_ok,
        size: collection.len(),
        size_exponent,
        size_ok,
    })
}

/// `|A|^{k(h-1)+1} / (log2 n)^{5kh}`.
pub fn rainbow_threshold(size_a: usize, n: u32, k: u32, h: u32) -> Interval {
    let top = BigUint::from(size_a).pow(k * (h - 1) + 1);
    exact::log2_interval(n as u64, LOG_BITS)
        .pow(5 * k * h)
        .recip()
        .scale(&BigRational::from_integer(top.into()))
}

/// `|A| n^{-k(h-1)d/(kh-1)} (log2 n)^{10}`.
pub fn container_size_exponent(size_a: usize, n: u32, d: u32, k: u32, h: u32) -> Interval {
    let p = (k * (h - 1) * d) as u64;
    let q = (k * h - 1) as u64;
    let power = if p == 0 {
        Interval::exact(BigRational::one())
    } else {
        exact::neg_frac_power(n as u64, p, q, LOG_BITS)
    };
    let size = exact::int(size_a as i64);
    let v = power.mul(&exact::log2_interval(n as u64, LOG_BITS).pow(10)).scale(&size);
    if size.is_zero() {
        Interval::exact(BigRational::zero())
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Ambient;
    use crate::solutions::{count_solutions, CountOptions};

    fn interval(n: u32, r: usize) -> (PointSet, EquationSpec, Vec<SolutionSet>) {
        let s = EquationSpec::symmetric(Ambient::Box, 1, n, 2, 2, r).unwrap();
        let a = PointSet::full(s.grid().unwrap());
        let sols = count_solutions(&a, &s, &CountOptions::materialized(Budget::default()))
            .unwrap()
            .solutions
            .unwrap();
        (a, s, sols)
    }

    #[test]
    fn subtemplate_examples() {
        let p = Template::new(4, vec![0b11, 0b1010]).unwrap();
        assert!(is_subtemplate(&p, &p).unwrap());
        assert!(is_subtemplate(&Template::new(4, vec![0, 0]).unwrap(), &p).unwrap());
        let big = Template::new(4, vec![0b11, 0b1]).unwrap();
        let small = Template::new(4, vec![0b1, 0b1]).unwrap();
        assert!(!is_subtemplate(&big, &small).unwrap());
        assert!(is_subtemplate(&p, &Template::new(4, vec![0b1]).unwrap()).is_err());
    }

    #[test]
    fn rainbow_subtemplate_examples() {
        let (a, _, sols) = interval(4, 4);
        assert_eq!(count_rainbow_subtemplates(&Template::full(4, 4).unwrap(), &a, &sols).unwrap(), 24);
        assert_eq!(count_rainbow_subtemplates(&Template::new(4, vec![1; 4]).unwrap(), &a, &sols).unwrap(), 0);
        let distinct = Template::new(4, vec![1, 2, 4, 8]).unwrap();
        assert_eq!(count_rainbow_subtemplates(&distinct, &a, &sols).unwrap(), 1);
    }

    #[test]
    fn template_coloring_examples() {
        let (a, _, sols) = interval(4, 4);
        let b = Budget::default();
        assert_eq!(count_template_colorings(&Template::new(4, vec![1; 4]).unwrap(), &a, &sols, &b).unwrap(), 1);
        assert_eq!(count_template_colorings(&Template::full(4, 4).unwrap(), &a, &sols, &b).unwrap(), 232);
        assert_eq!(count_template_colorings(&Template::new(4, vec![1, 0, 1, 1]).unwrap(), &a, &sols, &b).unwrap(), 0);
    }

    #[test]
    fn classification_examples() {
        let spec = EquationSpec::symmetric(Ambient::Box, 1, 16, 2, 2, 4).unwrap();
        let c = classify_template(&Template::new(4, vec![0b111; 16]).unwrap(), &spec).unwrap();
        assert_eq!(c.x_sizes[3], 16);
        assert!(c.good && c.dominant_large && c.high_small);
        assert_eq!(c.dominant, (vec![1, 2, 3], 16));

        let c = classify_template(&Template::new(4, vec![0b1; 16]).unwrap(), &spec).unwrap();
        assert_eq!((c.x_sizes[1], c.x_low), (16, 16));
        assert!(!c.good);

        let mut pal = vec![0b111u32; 8];
        pal.extend(vec![0b1011u32; 8]);
        let c = classify_template(&Template::new(4, pal).unwrap(), &spec).unwrap();
        assert_eq!(c.dominant, (vec![1, 2, 3], 8));
        assert_eq!(c.x_sizes.iter().sum::<usize>(), 16);
        let tiny = spec.with_r(2);
        assert!(classify_template(&Template::new(2, vec![1; 16]).unwrap(), &tiny).is_err());
    }

    #[test]
    fn container_examples() {
        let (a, s, sols) = interval(4, 4);
        let coloring = Template::from_coloring(4, &vec![1, 2, 3, 1]).unwrap();
        let full = Template::full(4, 4).unwrap();
        let rep = container_conclusions_check(&[full], std::slice::from_ref(&coloring), &a, &sols, &s).unwrap();
        assert!(rep.coverage);
        assert_eq!(rep.rainbow_counts, vec![24]);
        let rep = container_conclusions_check(&[], &[coloring], &a, &sols, &s).unwrap();
        assert!(!rep.coverage);
        assert_eq!(rep.uncovered, vec![0]);

        // d=1, k=h=2, n=256, |A|=256: exponent k(h-1)+1 = 3 over (log2 256)^20
        let t = rainbow_threshold(256, 256, 2, 2);
        assert!(t.is_exact());
        assert_eq!(t.lo, exact::ratio(BigUint::from(256u32).pow(3), BigUint::from(8u32).pow(20)));
    }

    #[test]
    fn text_roundtrip() {
        let (a, _, _) = interval(4, 4);
        let t = Template::new(4, vec![0b1, 0b1010, 0, 0b1111]).unwrap();
        let txt = t.to_text(&a).unwrap();
        assert!(txt.starts_with("0: {1}\n1: {2,4}\n2: {}\n"));
        assert_eq!(Template::from_text(&a, 4, &txt).unwrap(), t);
        assert!(Template::from_text(&a, 4, "0: {1}\n").is_err());
    }

    #[test]
    fn coloring_templates_match_rainbow_test() {
        let (a, _, sols) = interval(4, 4);
        let mut c = vec![1u8; 4];
        loop {
            let r = count_rainbow_subtemplates(&Template::from_coloring(4, &c).unwrap(), &a, &sols).unwrap();
            assert_eq!(r == 0, crate::coloring::is_rainbow_free(&a, &c, &sols).unwrap());
            let mut i = 0;
            while i < 4 {
                c[i] += 1;
                if c[i] <= 4 {
                    break;
                }
                c[i] = 1;
                i += 1;
            }
            if i == 4 {
                break;
            }
        }
    }
}
