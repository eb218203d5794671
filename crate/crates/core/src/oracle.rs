//! Brute-force reference implementations. Each one follows a definition
//! literally (all subsets, all partitions, all colorings) and is only
//! usable at tiny sizes; the fast engines are tested against them.

use crate::error::{capacity, domain, Result};
use crate::grid::{EquationSpec, Grid, Point, PointSet};
use crate::solutions::SolutionSet;

const NAIVE_LIMIT: u128 = 50_000_000;

fn coords_of(grid: &Grid, ranks: &[u32]) -> Vec<Vec<i64>> {
    ranks.iter().map(|&r| grid.unrank(r).0).collect()
}

/// Whether the points admit a partition into groups of the given sizes with
/// equal sums, subject to `allowed(point, group)`.
fn has_witness(grid: &Grid, pts: &[&[i64]], groups: &[usize], allowed: &dyn Fn(usize, usize) -> bool) -> bool {
    let d = grid.d;
    let k = groups.len();
    let mut fill = vec![0usize; k];
    let mut sums = vec![0i64; k * d];
    let modulus = match grid.ambient {
        crate::grid::Ambient::Box => None,
        crate::grid::Ambient::Torus => Some(grid.n as i64),
    };
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        d: usize,
        modulus: Option<i64>,
        pts: &[&[i64]],
        groups: &[usize],
        fill: &mut [usize],
        sums: &mut [i64],
        allowed: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if i == pts.len() {
            let reduce = |x: i64| modulus.map_or(x, |m| x.rem_euclid(m));
            return (1..groups.len()).all(|g| (0..d).all(|c| reduce(sums[g * d + c]) == reduce(sums[c])));
        }
        for g in 0..groups.len() {
            if fill[g] < groups[g] && allowed(i, g) {
                fill[g] += 1;
                for (s, c) in sums[g * d..(g + 1) * d].iter_mut().zip(pts[i]) {
                    *s += c;
                }
                let ok = rec(i + 1, d, modulus, pts, groups, fill, sums, allowed);
                fill[g] -= 1;
                for (s, c) in sums[g * d..(g + 1) * d].iter_mut().zip(pts[i]) {
                    *s -= c;
                }
                if ok {
                    return true;
                }
            }
        }
        false
    }
    rec(0, d, modulus, pts, groups, &mut fill, &mut sums, allowed)
}

fn for_each_combination(items: &[u32], size: usize, f: &mut dyn FnMut(&[u32])) {
    let mut chosen = Vec::with_capacity(size);
    fn rec(items: &[u32], start: usize, size: usize, chosen: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if chosen.len() == size {
            f(chosen);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - chosen.len() {
                break;
            }
            chosen.push(items[i]);
            rec(items, i + 1, size, chosen, f);
            chosen.pop();
        }
    }
    rec(items, 0, size, &mut chosen, f);
}

fn check_work(n: usize, k: usize) -> Result<()> {
    let c = crate::exact::binom_u128(n as u64, k as u64).unwrap_or(u128::MAX);
    if c > NAIVE_LIMIT {
        return Err(capacity!("naive oracle would visit {c} subsets"));
    }
    Ok(())
}

/// All solution sets (sorted rank lists), by testing every subset and every partition.
pub fn naive_solutions(a: &PointSet, spec: &EquationSpec) -> Result<Vec<Vec<u32>>> {
    let grid = *a.grid();
    let ranks = a.ranks();
    check_work(ranks.len(), spec.total())?;
    let coords = coords_of(&grid, &ranks);
    let index: Vec<u32> = (0..ranks.len() as u32).collect();
    let mut out = Vec::new();
    let mut pts: Vec<&[i64]> = Vec::with_capacity(spec.total());
    for_each_combination(&index, spec.total(), &mut |x| {
        pts.clear();
        pts.extend(x.iter().map(|&i| coords[i as usize].as_slice()));
        if has_witness(&grid, &pts, &spec.groups, &|_, _| true) {
            out.push(x.iter().map(|&i| ranks[i as usize]).collect());
        }
    });
    Ok(out)
}

/// Cross count: every group takes its first `j` points from `a1` and the rest from `a2`.
pub fn naive_cross(a1: &PointSet, a2: &PointSet, j: usize, spec: &EquationSpec) -> Result<u128> {
    let h = spec.require_symmetric()?;
    let grid = *a1.grid();
    let union = a1.union(a2)?;
    let ranks = union.ranks();
    check_work(ranks.len(), spec.total())?;
    let mut count = 0u128;
    for_each_combination(&ranks, spec.total(), &mut |x| {
        let in1: Vec<bool> = x.iter().map(|&r| a1.contains_rank(r)).collect();
        if in1.iter().filter(|&&b| b).count() != j * spec.k() {
            return;
        }
        // split each group into a1-part of size j and a2-part of size h-j:
        // model as 2k groups with paired sums
        let pts = coords_of(&grid, x);
        let ok = has_witness_split(&grid, &pts, &in1, spec.k(), j, h - j);
        if ok {
            count += 1;
        }
    });
    Ok(count)
}

fn has_witness_split(grid: &Grid, pts: &[Vec<i64>], in1: &[bool], k: usize, j: usize, rest: usize) -> bool {
    // assign a1 points to k parts of size j, a2 points to k parts of size rest,
    // then require part sums s1[l] + s2[l] equal for all l
    let d = grid.d;
    let mut fill1 = vec![0usize; k];
    let mut fill2 = vec![0usize; k];
    let mut sums = vec![vec![0i64; d]; k];
    let modulus = match grid.ambient {
        crate::grid::Ambient::Box => None,
        crate::grid::Ambient::Torus => Some(grid.n as i64),
    };
    let reduce = move |x: i64| modulus.map_or(x, |m| x.rem_euclid(m));
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        reduce: &dyn Fn(i64) -> i64,
        pts: &[Vec<i64>],
        in1: &[bool],
        j: usize,
        rest: usize,
        fill1: &mut [usize],
        fill2: &mut [usize],
        sums: &mut [Vec<i64>],
    ) -> bool {
        if i == pts.len() {
            return sums.iter().all(|s| s.iter().zip(&sums[0]).all(|(x, y)| reduce(*x) == reduce(*y)));
        }
        for g in 0..fill1.len() {
            let (fill, cap) = if in1[i] { (&mut fill1[g], j) } else { (&mut fill2[g], rest) };
            if *fill < cap {
                *fill += 1;
                for (s, c) in sums[g].iter_mut().zip(&pts[i]) {
                    *s += c;
                }
                let ok = rec(i + 1, reduce, pts, in1, j, rest, fill1, fill2, sums);
                if in1[i] {
                    fill1[g] -= 1;
                } else {
                    fill2[g] -= 1;
                }
                for (s, c) in sums[g].iter_mut().zip(&pts[i]) {
                    *s -= c;
                }
                if ok {
                    return true;
                }
            }
        }
        false
    }
    rec(0, &reduce, pts, in1, j, rest, &mut fill1, &mut fill2, &mut sums)
}

/// `f_A(v)`: completions of `v` to a solution with `v` in the first group.
pub fn naive_through_point(a: &PointSet, v: &Point, spec: &EquationSpec) -> Result<Vec<Vec<u32>>> {
    let grid = *a.grid();
    let vr = grid.rank(v)?;
    if !a.contains_rank(vr) {
        return Err(domain!("point {v} is not in A"));
    }
    let others: Vec<u32> = a.ranks().into_iter().filter(|&r| r != vr).collect();
    check_work(others.len(), spec.total() - 1)?;
    let mut out = Vec::new();
    for_each_combination(&others, spec.total() - 1, &mut |y| {
        let mut all = vec![vr];
        all.extend_from_slice(y);
        let pts = coords_of(&grid, &all);
        let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
        if has_witness(&grid, &refs, &spec.groups, &|i, g| i != 0 || g == 0) {
            out.push(y.to_vec());
        }
    });
    Ok(out)
}

/// Ordered tuples `(x_{l,i})` over all `k h` positions with equal group sums
/// and at least one repeated point, by enumerating every tuple.
pub fn m2_direct(a: &PointSet, spec: &EquationSpec) -> Result<u128> {
    let h = spec.require_symmetric()?;
    let grid = *a.grid();
    let pts = coords_of(&grid, &a.ranks());
    let total = spec.total();
    let work = (pts.len() as u128).checked_pow(total as u32).unwrap_or(u128::MAX);
    if work > NAIVE_LIMIT {
        return Err(capacity!("naive M2 would visit {work} tuples"));
    }
    let mut tuple = vec![0usize; total];
    let mut count = 0u128;
    loop {
        let sum_of = |g: usize| -> Vec<i64> {
            let mut s = vec![0i64; grid.d];
            for &p in &tuple[g * h..(g + 1) * h] {
                for (x, c) in s.iter_mut().zip(&pts[p]) {
                    *x += c;
                }
            }
            if grid.ambient == crate::grid::Ambient::Torus {
                s.iter_mut().for_each(|x| *x = x.rem_euclid(grid.n as i64));
            }
            s
        };
        let s0 = sum_of(0);
        if (1..spec.k()).all(|g| sum_of(g) == s0) {
            let mut sorted = tuple.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                count += 1;
            }
        }
        // odometer
        let mut i = 0;
        while i < total {
            tuple[i] += 1;
            if tuple[i] < pts.len() {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == total {
            break;
        }
    }
    Ok(count)
}

/// Rainbow-free colorings by enumerating all `r^|A|` colorings of `a`.
/// Returns `g` and the histogram by number of distinct colors used.
pub fn naive_colorings(a: &PointSet, spec: &EquationSpec) -> Result<(u128, Vec<u128>)> {
    let sols = naive_solutions(a, spec)?;
    let ranks = a.ranks();
    let r = spec.r;
    let m = ranks.len();
    let work = (r as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if work > NAIVE_LIMIT {
        return Err(capacity!("naive coloring enumeration would visit {work} colorings"));
    }
    let idx: Vec<Vec<usize>> = sols
        .iter()
        .map(|s| s.iter().map(|p| ranks.binary_search(p).unwrap()).collect())
        .collect();
    let mut colors = vec![0usize; m];
    let mut g = 0u128;
    let mut hist = vec![0u128; r + 1];
    loop {
        let rainbow = idx.iter().any(|s| {
            let mut mask = 0u32;
            s.iter().all(|&p| {
                let bit = 1u32 << colors[p];
                let fresh = mask & bit == 0;
                mask |= bit;
                fresh
            })
        });
        if !rainbow {
            g += 1;
            let used = colors.iter().fold(0u32, |acc, &c| acc | 1 << c).count_ones() as usize;
            hist[used] += 1;
        }
        let mut i = 0;
        while i < m {
            colors[i] += 1;
            if colors[i] < r {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
    }
    Ok((g, hist))
}

/// Hyperedges of the rainbow hypergraph on `A x [r]` as vertex bitmasks,
/// vertex `(i, c)` having bit `i * r + c` with `i` the rank-order index.
pub fn naive_edges(a: &PointSet, spec: &EquationSpec) -> Result<Vec<u64>> {
    let ranks = a.ranks();
    let r = spec.r;
    if ranks.len() * r > 64 {
        return Err(capacity!("naive edge masks need |A| r <= 64"));
    }
    let total = spec.total();
    let mut edges = Vec::new();
    for s in naive_solutions(a, spec)? {
        let idx: Vec<usize> = s.iter().map(|p| ranks.binary_search(p).unwrap()).collect();
        let mut colors = vec![0usize; total];
        loop {
            let distinct = colors.iter().fold(0u32, |acc, &c| acc | 1 << c).count_ones() as usize == total;
            if distinct {
                edges.push(idx.iter().zip(&colors).fold(0u64, |acc, (&i, &c)| acc | 1 << (i * r + c)));
            }
            let mut i = 0;
            while i < total {
                colors[i] += 1;
                if colors[i] < r {
                    break;
                }
                colors[i] = 0;
                i += 1;
            }
            if i == total {
                break;
            }
        }
    }
    edges.sort_unstable();
    Ok(edges)
}

/// `Delta_j` by fixing every `j`-set of vertices and counting the edges containing it.
pub fn naive_max_codegree(edges: &[u64], vertices: usize, j: usize) -> u128 {
    let all: Vec<u32> = (0..vertices as u32).collect();
    let mut best = 0u128;
    for_each_combination(&all, j, &mut |u| {
        let mask = u.iter().fold(0u64, |acc, &v| acc | 1 << v);
        let c = edges.iter().filter(|&&e| e & mask == mask).count() as u128;
        best = best.max(c);
    });
    best
}

/// Naive rainbow test of a coloring (values `1..=r`, indexed like `a.ranks()`).
pub fn naive_is_rainbow_free(solutions: &[SolutionSet], ranks: &[u32], colors: &[u8]) -> bool {
    !solutions.iter().any(|s| {
        let mut seen = 0u32;
        s.points.iter().all(|p| {
            let c = colors[ranks.binary_search(p).unwrap()];
            let fresh = seen & 1 << c == 0;
            seen |= 1 << c;
            fresh
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Ambient;

    fn spec1(n: u32, r: usize) -> EquationSpec {
        EquationSpec::symmetric(Ambient::Box, 1, n, 2, 2, r).unwrap()
    }

    fn interval(n: u32, r: usize) -> (PointSet, EquationSpec) {
        let s = spec1(n, r);
        (PointSet::full(s.grid().unwrap()), s)
    }

    #[test]
    fn naive_solution_examples() {
        let (a, s) = interval(5, 4);
        assert_eq!(naive_solutions(&a, &s).unwrap(), vec![vec![0, 1, 2, 3], vec![0, 1, 3, 4], vec![1, 2, 3, 4]]);
        let (a, s) = interval(4, 4);
        assert_eq!(naive_solutions(&a, &s).unwrap().len(), 1);
    }

    #[test]
    fn naive_coloring_examples() {
        let (a, s) = interval(4, 4);
        assert_eq!(naive_colorings(&a, &s).unwrap().0, 232);
        let (a, s) = interval(3, 4);
        assert_eq!(naive_colorings(&a, &s).unwrap().0, 64);
        let (a, s) = interval(4, 3);
        assert_eq!(naive_colorings(&a, &s).unwrap().0, 81);
    }

    #[test]
    fn naive_hypergraph_examples() {
        let (a, s) = interval(4, 4);
        let e = naive_edges(&a, &s).unwrap();
        assert_eq!(e.len(), 24);
        assert_eq!(naive_max_codegree(&e, 16, 2), 2);
        assert_eq!(naive_max_codegree(&e, 16, 4), 1);
    }

    #[test]
    fn naive_cross_and_point() {
        let s = spec1(4, 4);
        let g = s.grid().unwrap();
        let p = |xs: &[i64]| PointSet::from_coords_1d(g, xs.iter().copied()).unwrap();
        assert_eq!(naive_cross(&p(&[1, 2]), &p(&[3, 4]), 1, &s).unwrap(), 1);
        assert_eq!(naive_cross(&p(&[1, 3]), &p(&[2, 4]), 1, &s).unwrap(), 1);
        assert_eq!(naive_cross(&p(&[1]), &p(&[3, 4]), 1, &s).unwrap(), 0);
        let (a, s5) = interval(5, 4);
        assert_eq!(naive_through_point(&a, &Point::new([1]), &s5).unwrap().len(), 2);
    }

    #[test]
    fn m2_direct_small() {
        // A = {1,2}: tuples (a,b,c,d) with a+b = c+d over {1,2}^4 all repeat a point
        let s = spec1(2, 4);
        let a = PointSet::full(s.grid().unwrap());
        // sums: 2 -> 1 tuple, 3 -> 2, 4 -> 1; total 1 + 4 + 1 = 6
        assert_eq!(m2_direct(&a, &s).unwrap(), 6);
    }
}
