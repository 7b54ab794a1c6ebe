//! Exact signs of `f - level` on a uniform grid over `[-ε, ε]^dim`.
//!
//! Points are addressed in doubled coordinates: index `X ∈ 0..=2N` sits at
//! `ε (X - N) / N`, so grid vertices have even indices and cell, face and
//! edge centres have odd ones. A floating-point filter decides the sign when
//! the value clears a rounding bound; otherwise the value is computed in
//! rational arithmetic. Zero counts as positive.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::poly::rational::{int, to_f64};
use crate::poly::{F64Poly, MultiPoly, Rational};

/// Packing width per doubled coordinate.
pub(crate) const COORD_BITS: u32 = 21;
pub(crate) const MAX_RESOLUTION: usize = (1 << (COORD_BITS - 1)) - 1;

pub(crate) fn pack(p: &[u32]) -> u64 {
    p.iter()
        .enumerate()
        .fold(0u64, |acc, (i, &c)| acc | (u64::from(c) << (COORD_BITS * i as u32)))
}

pub(crate) struct LevelGrid {
    pub dim: usize,
    /// Cells per axis.
    pub n: usize,
    epsilon: Rational,
    eps_f: f64,
    poly: MultiPoly,
    poly_f: F64Poly,
    level: Rational,
    level_f: f64,
    /// Relative rounding bound on `|value|` per unit of magnitude.
    filter: f64,
    /// Signs at grid vertices, index `Σ (X_i / 2) (N+1)^i`.
    vertex_signs: Vec<i8>,
    exact_evaluations: AtomicUsize,
}

impl LevelGrid {
    /// `poly` must have exactly `dim` variables.
    pub fn new(poly: &MultiPoly, level: &Rational, epsilon: &Rational, n: usize) -> Self {
        let dim = poly.nvars();
        let deg = poly.total_degree() as f64;
        let nterms = poly.nterms() as f64;
        // coordinates carry ≤ 3 roundings, each monomial ≤ 4 per degree plus
        // the variable fold, the sum one per term; doubled for safety
        let filter = 2.0 * (4.0 * deg + dim as f64 + 4.0 + nterms) * f64::EPSILON;
        let mut g = LevelGrid {
            dim,
            n,
            epsilon: epsilon.clone(),
            eps_f: to_f64(epsilon),
            poly: poly.clone(),
            poly_f: poly.to_f64(),
            level: level.clone(),
            level_f: to_f64(level),
            filter,
            vertex_signs: Vec::new(),
            exact_evaluations: AtomicUsize::new(0),
        };
        let side = n + 1;
        let total = side.pow(dim as u32);
        let signs: Vec<i8> = (0..total)
            .into_par_iter()
            .map(|idx| {
                let mut p = [0u32; 3];
                let mut r = idx;
                for c in p.iter_mut().take(dim) {
                    *c = 2 * (r % side) as u32;
                    r /= side;
                }
                g.evaluate_sign(&p[..dim])
            })
            .collect();
        g.vertex_signs = signs;
        g
    }

    pub fn coord_f64(&self, c: u32) -> f64 {
        self.eps_f * (f64::from(c) - self.n as f64) / self.n as f64
    }

    pub fn coord_exact(&self, c: u32) -> Rational {
        &self.epsilon * int(i64::from(c) - self.n as i64) / int(self.n as i64)
    }

    pub fn point_f64(&self, p: &[u32]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (o, &c) in out.iter_mut().zip(p) {
            *o = self.coord_f64(c);
        }
        out
    }

    /// Approximate `f - level`, for interpolation only.
    pub fn value_f64(&self, p: &[u32]) -> f64 {
        let x = self.point_f64(p);
        self.poly_f.eval(&x[..self.dim]) - self.level_f
    }

    fn evaluate_sign(&self, p: &[u32]) -> i8 {
        let x = self.point_f64(p);
        let (v, mag) = self.poly_f.eval_with_magnitude(&x[..self.dim]);
        let g = v - self.level_f;
        let bound = self.filter * (mag + self.level_f.abs());
        if g.abs() > bound {
            return if g > 0.0 { 1 } else { -1 };
        }
        self.exact_evaluations.fetch_add(1, Ordering::Relaxed);
        let pt: Vec<Rational> = p.iter().map(|&c| self.coord_exact(c)).collect();
        let val = self.poly.evaluate(&pt).expect("grid point has one coordinate per variable") - &self.level;
        if val.is_negative() {
            -1
        } else {
            debug_assert!(val.is_zero() || val.is_positive());
            1
        }
    }

    /// Sign at a grid vertex (all indices even).
    pub fn vertex_sign(&self, p: &[u32]) -> i8 {
        let side = self.n + 1;
        let idx = p.iter().rev().fold(0usize, |acc, &c| acc * side + (c / 2) as usize);
        self.vertex_signs[idx]
    }

    /// Exact sign at an arbitrary doubled-grid point.
    pub fn sign_exact(&self, p: &[u32]) -> i8 {
        if p.iter().all(|c| c % 2 == 0) {
            self.vertex_sign(p)
        } else {
            self.evaluate_sign(p)
        }
    }

    /// Number of points whose sign needed rational arithmetic.
    pub fn exact_evaluations(&self) -> usize {
        self.exact_evaluations.load(Ordering::Relaxed)
    }

    pub fn epsilon_f64(&self) -> f64 {
        self.eps_f
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn level_f64(&self) -> f64 {
        self.level_f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::frac;

    fn grid(expr: &str, level: Rational) -> LevelGrid {
        let f = MultiPoly::parse(expr, &["x", "y"]).unwrap();
        LevelGrid::new(&f, &level, &frac(1, 2), 16)
    }

    #[test]
    fn zero_values_count_as_positive() {
        // x + y vanishes exactly on the anti-diagonal
        let g = grid("x + y", int(0));
        for i in 0..=16u32 {
            assert_eq!(g.vertex_sign(&[2 * i, 32 - 2 * i]), 1);
        }
        assert_eq!(g.vertex_sign(&[0, 0]), -1);
        assert!(g.exact_evaluations() >= 17);
    }

    #[test]
    fn off_grid_points_are_exact() {
        // level 1/1024 = f(1/32, 0): the centre X = 17 sits at x = 1/32
        let g = grid("x^2", frac(1, 1024));
        assert_eq!(g.sign_exact(&[17, 16]), 1);
        assert_eq!(g.sign_exact(&[16, 17]), -1);
        assert_eq!(g.coord_exact(17), frac(1, 32));
    }

    proptest::proptest! {
        /// The filtered sign equals the sign of the exact value, also for
        /// levels tuned to vanish at the probed point.
        #[test]
        fn filtered_sign_is_exact(
            coeffs in proptest::collection::vec(-8i64..=8, 4),
            at in (0u32..=64, 0u32..=64),
            hit in proptest::bool::ANY,
            nudge in -2i64..=2,
        ) {
            let f = MultiPoly::parse(
                &format!("{}*x^3 + {}*x*y^2 + {}*y^4 + {}*x*y", coeffs[0], coeffs[1], coeffs[2], coeffs[3]),
                &["x", "y"],
            ).unwrap();
            let eps = frac(1, 2);
            let n = 32;
            let p = [at.0, at.1];
            let point: Vec<Rational> = p.iter().map(|&c| &eps * int(i64::from(c) - 32) / int(32)).collect();
            let exact_f = f.evaluate(&point).unwrap();
            // a level equal to the value, or off by a relative 1e-12
            let level = if hit {
                &exact_f + &exact_f * frac(nudge, 1_000_000_000_000)
            } else {
                frac(nudge, 7)
            };
            let g = LevelGrid::new(&f, &level, &eps, n);
            let v = &exact_f - &level;
            let expected = if v.is_negative() { -1 } else { 1 };
            proptest::prop_assert_eq!(g.sign_exact(&p), expected);
        }
    }
}
