//! Integer homology by unit-pivot reduction followed by Smith normal form.
//!
//! Each boundary map is reduced by eliminating unit pivots (a Schur
//! complement step, which preserves homology); pivot columns disappear from
//! the next map's rows. The small remainder goes through a dense Smith normal
//! form over `BigInt`, giving its rank and the torsion coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::complex::CellComplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    /// `b_0, .., b_top`; a single `0` for the empty complex.
    pub betti: Vec<u64>,
    /// Invariant factors `> 1` of `H_d`, per degree.
    pub torsion: Vec<Vec<String>>,
    /// From cell counts.
    pub euler: i64,
}

impl Homology {
    pub fn euler_from_betti(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.iter().any(|t| !t.is_empty())
    }
}

/// Rank of one boundary map plus the invariant factors `> 1` of its cokernel
/// torsion.
struct MapRank {
    rank: usize,
    torsion: Vec<BigInt>,
    /// Columns consumed as pivots; they leave the next map's rows.
    pivot_cols: Vec<bool>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// `∂_1` with every edge of the form `v - w` or `0`: spanning-forest pivots.
fn graph_rank(c: &CellComplex) -> Option<MapRank> {
    let edges = c.cells(1);
    let simple = edges.iter().all(|b| match b.as_slice() {
        [] => true,
        [(v, a), (w, b)] => v != w && a.abs() == 1 && *a == -*b,
        _ => false,
    });
    if !simple {
        return None;
    }
    let mut parent: Vec<usize> = (0..c.count(0)).collect();
    let mut pivot_cols = vec![false; edges.len()];
    let mut rank = 0;
    for (e, b) in edges.iter().enumerate() {
        if let [(v, _), (w, _)] = b.as_slice() {
            let (rv, rw) = (find(&mut parent, *v), find(&mut parent, *w));
            if rv != rw {
                parent[rv] = rw;
                pivot_cols[e] = true;
                rank += 1;
            }
        }
    }
    Some(MapRank {
        rank,
        torsion: Vec::new(),
        pivot_cols,
    })
}

type SparseRow = Vec<(usize, i64)>;

/// `row += k * other`, both sorted by column.
fn axpy(row: &[(usize, i64)], k: i64, other: &[(usize, i64)]) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_row = j >= other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_other = i >= row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_row {
            out.push(row[i]);
            i += 1;
        } else if take_other {
            out.push((other[j].0, k * other[j].1));
            j += 1;
        } else {
            let v = row[i].1 + k * other[j].1;
            if v != 0 {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// General map: rows are the live `(d-1)`-cells, columns the `d`-cells.
fn sparse_rank(c: &CellComplex, dim: usize, dead_rows: &[bool]) -> MapRank {
    let ncols = c.count(dim);
    let nrows = c.count(dim - 1);
    let mut rows: Vec<SparseRow> = vec![Vec::new(); nrows];
    for (col, b) in c.cells(dim).iter().enumerate() {
        for &(r, v) in b {
            if !dead_rows.get(r).copied().unwrap_or(false) {
                rows[r].push((col, v));
            }
        }
    }
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for &(col, _) in row {
            occ[col].push(r);
        }
    }
    let mut row_dead = vec![false; nrows];
    let mut pivot_cols = vec![false; ncols];
    let mut rank = 0;
    loop {
        let mut progress = false;
        for r in 0..nrows {
            if row_dead[r] || rows[r].is_empty() {
                continue;
            }
            let Some(&(sigma, u)) = rows[r]
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .min_by_key(|(col, _)| occ[*col].len())
            else {
                continue;
            };
            let pivot_row = std::mem::take(&mut rows[r]);
            for r2 in std::mem::take(&mut occ[sigma]) {
                if r2 == r || row_dead[r2] {
                    continue;
                }
                let Ok(pos) = rows[r2].binary_search_by_key(&sigma, |e| e.0) else {
                    continue;
                };
                let m = rows[r2][pos].1;
                let updated = axpy(&rows[r2], -m * u, &pivot_row);
                for &(col, _) in &pivot_row {
                    if col != sigma && rows[r2].binary_search_by_key(&col, |e| e.0).is_err() {
                        occ[col].push(r2);
                    }
                }
                rows[r2] = updated;
            }
            row_dead[r] = true;
            pivot_cols[sigma] = true;
            rank += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }

    // dense remainder
    let live_rows: Vec<usize> = (0..nrows)
        .filter(|&r| !row_dead[r] && !rows[r].is_empty())
        .collect();
    let mut live_cols: Vec<usize> = live_rows
        .iter()
        .flat_map(|&r| rows[r].iter().map(|e| e.0))
        .collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (i, &r) in live_rows.iter().enumerate() {
        for &(col, v) in &rows[r] {
            let j = live_cols.binary_search(&col).expect("collected above");
            dense[i][j] = BigInt::from(v);
        }
    }
    let diag = smith_diagonal(dense);
    MapRank {
        rank: rank + diag.len(),
        torsion: diag.into_iter().filter(|d| !d.is_one()).collect(),
        pivot_cols,
    }
}

/// Nonzero invariant factors (in divisibility order) of an integer matrix.
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for i in t..rows {
                        let v = &q * &a[i][t];
                        a[i][j] -= v;
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // move the smallest remainder in row/column t to the pivot
                let mut m = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[m.0][m.1].abs() {
                        m = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[m.0][m.1].abs() {
                        m = (t, j);
                    }
                }
                a.swap(t, m.0);
                for row in a.iter_mut() {
                    row.swap(t, m.1);
                }
                continue;
            }
            // the pivot must divide the whole trailing block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Betti numbers, torsion and Euler characteristic of `c`.
pub fn homology(c: &CellComplex) -> Homology {
    let Some(top) = c.dim() else {
        return Homology {
            betti: vec![0],
            torsion: vec![Vec::new()],
            euler: 0,
        };
    };
    // rank[d] = rank of ∂_d, d = 1..=top
    let mut rank = vec![0usize; top + 2];
    let mut torsion: Vec<Vec<String>> = vec![Vec::new(); top + 1];
    let mut dead_rows: Vec<bool> = Vec::new();
    for d in 1..=top {
        let m = if d == 1 {
            graph_rank(c).unwrap_or_else(|| sparse_rank(c, 1, &[]))
        } else {
            sparse_rank(c, d, &dead_rows)
        };
        rank[d] = m.rank;
        torsion[d - 1] = m.torsion.iter().map(ToString::to_string).collect();
        dead_rows = m.pivot_cols;
    }
    let betti = (0..=top)
        .map(|d| (c.count(d) - rank[d] - rank[d + 1]) as u64)
        .collect();
    Homology {
        betti,
        torsion,
        euler: c.euler(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::complex::SimplicialBuilder;
    use super::*;

    fn b(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    fn ints(v: Vec<BigInt>) -> Vec<i64> {
        v.into_iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn smith_examples() {
        assert_eq!(ints(smith_diagonal(b(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]))), vec![2, 6, 12]);
        assert_eq!(ints(smith_diagonal(b(&[&[2, 0], &[0, 3]]))), vec![1, 6]);
        assert!(smith_diagonal(b(&[&[0, 0]])).is_empty());
    }

    fn cycle(n: usize) -> CellComplex {
        let mut s = SimplicialBuilder::new();
        for _ in 0..n {
            s.add_vertex();
        }
        for i in 0..n {
            s.edge(i, (i + 1) % n).unwrap();
        }
        s.finish()
    }

    #[test]
    fn point_circle_arcs() {
        assert_eq!(homology(&CellComplex::new()).betti, vec![0]);
        assert_eq!(homology(&CellComplex::with_vertices(1)).betti, vec![1]);
        assert_eq!(homology(&cycle(5)).betti, vec![1, 1]);
        let mut s = SimplicialBuilder::new();
        for _ in 0..6 {
            s.add_vertex();
        }
        for (a, b_) in [(0, 1), (1, 2), (3, 4), (4, 5)] {
            s.edge(a, b_).unwrap();
        }
        assert_eq!(homology(&s.finish()).betti, vec![2, 0]);
    }

    /// Boundary of a tetrahedron.
    #[test]
    fn sphere() {
        let mut s = SimplicialBuilder::new();
        for _ in 0..4 {
            s.add_vertex();
        }
        for (a, b_, c) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            s.triangle(a, b_, c).unwrap();
        }
        let h = homology(&s.finish());
        assert_eq!(h.betti, vec![1, 0, 1]);
        assert_eq!(h.euler, 2);
        assert!(!h.has_torsion());
    }

    /// One-vertex CW real projective plane: e with ∂e = 0, f with ∂f = 2e.
    #[test]
    fn projective_plane_has_torsion() {
        let mut c = CellComplex::with_vertices(1);
        c.add_cell(1, &[]).unwrap();
        c.add_cell(2, &[(0, 2)]).unwrap();
        c.validate().unwrap();
        let h = homology(&c);
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion, vec![Vec::<String>::new(), vec!["2".to_string()], vec![]]);
        assert_eq!(h.euler, h.euler_from_betti());
    }

    /// 7-vertex torus: b = (1, 2, 1).
    #[test]
    fn torus() {
        let mut s = SimplicialBuilder::new();
        for _ in 0..7 {
            s.add_vertex();
        }
        for i in 0..7 {
            s.triangle(i, (i + 1) % 7, (i + 3) % 7).unwrap();
            s.triangle(i, (i + 2) % 7, (i + 3) % 7).unwrap();
        }
        let c = s.finish();
        c.validate().unwrap();
        assert_eq!(c.counts(), vec![7, 21, 14]);
        assert_eq!(homology(&c).betti, vec![1, 2, 1]);
    }
}
