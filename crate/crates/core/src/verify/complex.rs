//! Finite cell complexes given by integer boundary incidences.

use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("{dim}-cell {cell} references missing {face_dim}-cell {index}")]
    IndexOutOfRange {
        dim: usize,
        cell: usize,
        face_dim: usize,
        index: usize,
    },
    #[error("boundary of the boundary of {dim}-cell {cell} is nonzero")]
    BoundaryNotCycle { dim: usize, cell: usize },
    #[error("degenerate simplex with repeated vertex {0}")]
    DegenerateSimplex(usize),
}

/// `boundary[d][i]` lists `(face, coefficient)` of the `i`-th `d`-cell, sorted
/// by face with no zero coefficients. Vertices have empty boundary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellComplex {
    boundary: Vec<Vec<Vec<(usize, i64)>>>,
}

impl CellComplex {
    pub fn new() -> Self {
        CellComplex::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut c = CellComplex::new();
        for _ in 0..n {
            c.add_vertex();
        }
        c
    }

    pub fn add_vertex(&mut self) -> usize {
        if self.boundary.is_empty() {
            self.boundary.push(Vec::new());
        }
        self.boundary[0].push(Vec::new());
        self.boundary[0].len() - 1
    }

    /// Adds a `dim`-cell (`dim ≥ 1`); faces must already exist.
    pub fn add_cell(&mut self, dim: usize, faces: &[(usize, i64)]) -> Result<usize, ComplexError> {
        assert!(dim >= 1, "use add_vertex for 0-cells");
        let available = self.count(dim - 1);
        let mut merged: BTreeMap<usize, i64> = BTreeMap::new();
        for &(f, c) in faces {
            if f >= available {
                return Err(ComplexError::IndexOutOfRange {
                    dim,
                    cell: self.count(dim),
                    face_dim: dim - 1,
                    index: f,
                });
            }
            *merged.entry(f).or_insert(0) += c;
        }
        while self.boundary.len() <= dim {
            self.boundary.push(Vec::new());
        }
        self.boundary[dim].push(merged.into_iter().filter(|&(_, c)| c != 0).collect());
        Ok(self.boundary[dim].len() - 1)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.boundary.get(dim).map_or(0, Vec::len)
    }

    /// Cell counts for dimensions `0..=top`.
    pub fn counts(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.boundary.iter().map(Vec::len).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn is_empty(&self) -> bool {
        self.count(0) == 0
    }

    /// Top dimension, `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.counts().len().checked_sub(1)
    }

    pub fn boundary(&self, dim: usize, cell: usize) -> &[(usize, i64)] {
        &self.boundary[dim][cell]
    }

    pub fn cells(&self, dim: usize) -> &[Vec<(usize, i64)>] {
        self.boundary.get(dim).map_or(&[], Vec::as_slice)
    }

    /// Alternating count of cells.
    pub fn euler(&self) -> i64 {
        self.counts()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Index ranges and `∂∂ = 0`.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for dim in 1..self.boundary.len() {
            let below = self.count(dim - 1);
            for (cell, faces) in self.boundary[dim].iter().enumerate() {
                if let Some(&(index, _)) = faces.iter().find(|(f, _)| *f >= below) {
                    return Err(ComplexError::IndexOutOfRange {
                        dim,
                        cell,
                        face_dim: dim - 1,
                        index,
                    });
                }
                if dim < 2 {
                    continue;
                }
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(f, c) in faces {
                    for &(g, d) in &self.boundary[dim - 1][f] {
                        *acc.entry(g).or_insert(0) += c * d;
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return Err(ComplexError::BoundaryNotCycle { dim, cell });
                }
            }
        }
        Ok(())
    }

    /// Degree of each vertex in the 1-skeleton.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.count(0)];
        for e in self.cells(1) {
            for &(v, _) in e {
                deg[v] += 1;
            }
        }
        deg
    }
}

/// Oriented simplicial complexes of dimension ≤ 2 with edge sharing.
#[derive(Clone, Debug, Default)]
pub struct SimplicialBuilder {
    complex: CellComplex,
    edges: HashMap<(usize, usize), usize>,
}

impl SimplicialBuilder {
    pub fn new() -> Self {
        SimplicialBuilder::default()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.complex.add_vertex()
    }

    pub fn vertex_count(&self) -> usize {
        self.complex.count(0)
    }

    /// The edge `{a, b}` oriented from the smaller index; returns its index and
    /// the sign of `[a, b]` relative to that orientation.
    pub fn edge(&mut self, a: usize, b: usize) -> Result<(usize, i64), ComplexError> {
        if a == b {
            return Err(ComplexError::DegenerateSimplex(a));
        }
        let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
        if let Some(&e) = self.edges.get(&(lo, hi)) {
            return Ok((e, sign));
        }
        let e = self.complex.add_cell(1, &[(hi, 1), (lo, -1)])?;
        self.edges.insert((lo, hi), e);
        Ok((e, sign))
    }

    /// Triangle `[a, b, c]` with boundary `[b, c] - [a, c] + [a, b]`.
    pub fn triangle(&mut self, a: usize, b: usize, c: usize) -> Result<usize, ComplexError> {
        if a == b || a == c {
            return Err(ComplexError::DegenerateSimplex(a));
        }
        if b == c {
            return Err(ComplexError::DegenerateSimplex(b));
        }
        let (bc, s1) = self.edge(b, c)?;
        let (ac, s2) = self.edge(a, c)?;
        let (ab, s3) = self.edge(a, b)?;
        self.complex.add_cell(2, &[(bc, s1), (ac, -s2), (ab, s3)])
    }

    pub fn finish(self) -> CellComplex {
        self.complex
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_boundary_is_a_cycle() {
        let mut b = SimplicialBuilder::new();
        let v: Vec<usize> = (0..3).map(|_| b.add_vertex()).collect();
        b.triangle(v[2], v[0], v[1]).unwrap();
        let c = b.finish();
        assert_eq!(c.counts(), vec![3, 3, 1]);
        assert_eq!(c.euler(), 1);
        c.validate().unwrap();
    }

    #[test]
    fn bad_incidence_is_rejected() {
        let mut c = CellComplex::with_vertices(2);
        assert!(matches!(
            c.add_cell(1, &[(5, 1)]),
            Err(ComplexError::IndexOutOfRange { .. })
        ));
        c.add_cell(1, &[(0, 1), (1, -1)]).unwrap();
        // a 2-cell whose boundary is a single open edge
        c.add_cell(2, &[(0, 1)]).unwrap();
        assert_eq!(c.validate(), Err(ComplexError::BoundaryNotCycle { dim: 2, cell: 0 }));
        let mut b = SimplicialBuilder::new();
        b.add_vertex();
        assert!(b.edge(0, 0).is_err());
    }
}
