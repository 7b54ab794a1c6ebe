//! Level-set extraction: marching triangles in the plane, marching tetrahedra
//! in space, followed by linear clipping against the ball.
//!
//! Squares are split into four triangles around the centre; cubes into 24
//! tetrahedra spanned by an edge, the centre of a face containing it and the
//! body centre. Centres are evaluated exactly only where the surrounding
//! corners disagree, so every ambiguous cell costs one extra exact sign and
//! neighbours always agree on shared faces. Level-set vertices are keyed by
//! the lattice edge they sit on, clip vertices by the mesh edge they cut, so
//! the same vertex produced by two cells is identified.

use std::collections::HashMap;

use rayon::prelude::*;

use super::complex::{CellComplex, ComplexError, SimplicialBuilder};
use super::signs::{pack, LevelGrid};
use crate::poly::F64Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum VKey {
    /// Packed doubled-grid endpoints, smaller first.
    Level(u64, u64),
    /// The two level vertices of the clipped edge, smaller first.
    Clip(u64, u64, u64, u64),
}

impl VKey {
    fn order(&self) -> (u64, u64) {
        match *self {
            VKey::Level(a, b) => (a, b),
            VKey::Clip(..) => unreachable!("clip vertices are never clipped again"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Vtx {
    key: VKey,
    pos: [f64; 3],
}

/// A segment (`len == 2`) or a triangle (`len == 3`).
#[derive(Clone, Copy, Debug)]
struct Piece {
    v: [Vtx; 3],
    len: usize,
}

/// Output of [`extract`].
#[derive(Clone, Debug)]
pub struct FibreMesh {
    pub complex: CellComplex,
    /// Approximate vertex positions (unused coordinates are 0).
    pub positions: Vec<[f64; 3]>,
    /// Vertex lies on the bounding sphere (created by clipping).
    pub on_sphere: Vec<bool>,
    /// Cells whose level-set position could not be separated from a
    /// critical point of `f` by interval bounds.
    pub flagged_cells: usize,
    /// Cells whose corners have both signs.
    pub mixed_cells: usize,
    pub exact_evaluations: usize,
    pub dim: usize,
}

impl FibreMesh {
    /// In the plane: every vertex off the sphere has exactly two neighbours.
    pub fn is_planar_manifold(&self) -> bool {
        self.complex
            .vertex_degrees()
            .iter()
            .zip(&self.on_sphere)
            .all(|(&d, &s)| s || d == 2)
    }
}

fn lerp(a: &[f64; 3], b: &[f64; 3], t: f64) -> [f64; 3] {
    [
        a[0] + t * (b[0] - a[0]),
        a[1] + t * (b[1] - a[1]),
        a[2] + t * (b[2] - a[2]),
    ]
}

/// Zero of the linear interpolant, clamped to the segment.
fn crossing(ga: f64, gb: f64) -> f64 {
    let t = ga / (ga - gb);
    if t.is_finite() {
        t.clamp(0.0, 1.0)
    } else {
        0.5
    }
}

fn norm2(p: &[f64; 3]) -> f64 {
    p[0] * p[0] + p[1] * p[1] + p[2] * p[2]
}

fn level_vertex(g: &LevelGrid, a: &[u32], b: &[u32]) -> Vtx {
    let (ka, kb) = (pack(a), pack(b));
    // orient by key so both neighbouring cells compute identical positions
    let (lo, hi, klo, khi) = if ka < kb { (a, b, ka, kb) } else { (b, a, kb, ka) };
    let t = crossing(g.value_f64(lo), g.value_f64(hi));
    Vtx {
        key: VKey::Level(klo, khi),
        pos: lerp(&g.point_f64(lo), &g.point_f64(hi), t),
    }
}

fn clip_vertex(a: &Vtx, b: &Vtx, r2: f64) -> Vtx {
    let (lo, hi) = if a.key.order() < b.key.order() { (a, b) } else { (b, a) };
    let t = crossing(norm2(&lo.pos) - r2, norm2(&hi.pos) - r2);
    let (l, h) = (lo.key.order(), hi.key.order());
    Vtx {
        key: VKey::Clip(l.0, l.1, h.0, h.1),
        pos: lerp(&lo.pos, &hi.pos, t),
    }
}

struct Clipper {
    r2: f64,
}

impl Clipper {
    fn inside(&self, v: &Vtx) -> bool {
        norm2(&v.pos) < self.r2
    }

    fn segment(&self, a: Vtx, b: Vtx, out: &mut Vec<Piece>) {
        let v = match (self.inside(&a), self.inside(&b)) {
            (true, true) => [a, b, a],
            (true, false) => [a, clip_vertex(&a, &b, self.r2), a],
            (false, true) => [clip_vertex(&a, &b, self.r2), b, b],
            (false, false) => return,
        };
        out.push(Piece { v, len: 2 });
    }

    fn triangle(&self, t: [Vtx; 3], out: &mut Vec<Piece>) {
        let inside = t.map(|v| self.inside(&v));
        if inside.iter().all(|&i| i) {
            out.push(Piece { v: t, len: 3 });
            return;
        }
        let mut poly: Vec<Vtx> = Vec::with_capacity(4);
        for i in 0..3 {
            let j = (i + 1) % 3;
            if inside[i] {
                poly.push(t[i]);
            }
            if inside[i] != inside[j] {
                poly.push(clip_vertex(&t[i], &t[j], self.r2));
            }
        }
        for k in 1..poly.len().saturating_sub(1) {
            out.push(Piece {
                v: [poly[0], poly[k], poly[k + 1]],
                len: 3,
            });
        }
    }
}

/// Interval range of a polynomial over an axis-aligned box, in floating
/// point with a relative slack; used only to flag cells.
fn range(p: &F64Poly, bx: &[(f64, f64)]) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (e, c) in p.terms() {
        let (mut mlo, mut mhi) = (1.0f64, 1.0f64);
        for (&k, &(a, b)) in e.iter().zip(bx) {
            if k == 0 {
                continue;
            }
            let (pa, pb) = (a.powi(k as i32), b.powi(k as i32));
            let (vlo, vhi) = if k % 2 == 0 && a < 0.0 && b > 0.0 {
                (0.0, pa.max(pb))
            } else {
                (pa.min(pb), pa.max(pb))
            };
            let prods = [mlo * vlo, mlo * vhi, mhi * vlo, mhi * vhi];
            mlo = prods.iter().copied().fold(f64::INFINITY, f64::min);
            mhi = prods.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        }
        let (tlo, thi) = if *c >= 0.0 { (c * mlo, c * mhi) } else { (c * mhi, c * mlo) };
        lo += tlo;
        hi += thi;
    }
    let slack = 1e-12 * (lo.abs() + hi.abs()) + 1e-300;
    (lo - slack, hi + slack)
}

struct Flagger {
    f: F64Poly,
    level: f64,
    grads: Vec<F64Poly>,
}

impl Flagger {
    fn new(g: &LevelGrid) -> Self {
        let f = g.poly();
        let vars = f.variables().to_vec();
        let grads = f
            .jacobian(&vars)
            .expect("own variables")
            .iter()
            .map(|p| p.to_f64())
            .collect();
        Flagger {
            f: f.to_f64(),
            level: g.level_f64(),
            grads,
        }
    }

    fn flagged(&self, bx: &[(f64, f64)]) -> bool {
        let (lo, hi) = range(&self.f, bx);
        if lo > self.level || hi < self.level {
            return false;
        }
        self.grads.iter().all(|d| {
            let (a, b) = range(d, bx);
            a <= 0.0 && b >= 0.0
        })
    }
}

#[derive(Default)]
struct SlabOut {
    pieces: Vec<Piece>,
    flagged: usize,
    mixed: usize,
}

fn cell_box(g: &LevelGrid, lower: &[u32]) -> Vec<(f64, f64)> {
    lower
        .iter()
        .map(|&c| (g.coord_f64(c), g.coord_f64(c + 2)))
        .collect()
}

fn outside_ball(bx: &[(f64, f64)], r2: f64) -> bool {
    let d2: f64 = bx
        .iter()
        .map(|&(a, b)| {
            let c = 0.0f64.clamp(a, b);
            c * c
        })
        .sum();
    d2 > r2 * (1.0 + 1e-12)
}

fn marching_triangle(g: &LevelGrid, p: [[u32; 2]; 3], s: [i8; 3], clip: &Clipper, out: &mut Vec<Piece>) {
    let mut cut: Vec<Vtx> = Vec::with_capacity(2);
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        if s[i] != s[j] {
            cut.push(level_vertex(g, &p[i], &p[j]));
        }
    }
    if let [a, b] = cut[..] {
        clip.segment(a, b, out);
    }
}

fn square(g: &LevelGrid, i: u32, j: u32, clip: &Clipper, flag: &Flagger, out: &mut SlabOut) {
    let bx = cell_box(g, &[i, j]);
    if outside_ball(&bx, clip.r2) {
        return;
    }
    if flag.flagged(&bx) {
        out.flagged += 1;
    }
    let corners = [[i, j], [i + 2, j], [i + 2, j + 2], [i, j + 2]];
    let s = corners.map(|c| g.vertex_sign(&c));
    if s.iter().all(|&v| v == s[0]) {
        return;
    }
    out.mixed += 1;
    let centre = [i + 1, j + 1];
    let sc = g.sign_exact(&centre);
    for k in 0..4 {
        let l = (k + 1) % 4;
        marching_triangle(g, [centre, corners[k], corners[l]], [sc, s[k], s[l]], clip, &mut out.pieces);
    }
}

fn marching_tet(g: &LevelGrid, p: [[u32; 3]; 4], s: [i8; 4], clip: &Clipper, out: &mut Vec<Piece>) {
    let (pos, neg): (Vec<usize>, Vec<usize>) = (0..4).partition(|&i| s[i] > 0);
    let lv = |a: usize, b: usize| level_vertex(g, &p[a], &p[b]);
    match (pos.len(), neg.len()) {
        (1, 3) | (3, 1) => {
            let (lone, rest) = if pos.len() == 1 { (pos[0], neg) } else { (neg[0], pos) };
            clip.triangle([lv(lone, rest[0]), lv(lone, rest[1]), lv(lone, rest[2])], out);
        }
        (2, 2) => {
            let (a, b, c, d) = (pos[0], pos[1], neg[0], neg[1]);
            let (ac, ad, bd, bc) = (lv(a, c), lv(a, d), lv(b, d), lv(b, c));
            clip.triangle([ac, ad, bd], out);
            clip.triangle([ac, bd, bc], out);
        }
        _ => {}
    }
}

fn cube(g: &LevelGrid, lower: [u32; 3], clip: &Clipper, flag: &Flagger, out: &mut SlabOut) {
    let bx = cell_box(g, &lower);
    if outside_ball(&bx, clip.r2) {
        return;
    }
    if flag.flagged(&bx) {
        out.flagged += 1;
    }
    let corner = |bits: [u32; 3]| [lower[0] + 2 * bits[0], lower[1] + 2 * bits[1], lower[2] + 2 * bits[2]];
    let mut signs = [0i8; 8];
    for (m, s) in signs.iter_mut().enumerate() {
        *s = g.vertex_sign(&corner([m as u32 & 1, (m as u32 >> 1) & 1, (m as u32 >> 2) & 1]));
    }
    if signs.iter().all(|&v| v == signs[0]) {
        return;
    }
    out.mixed += 1;
    let sign_of = |bits: [u32; 3]| signs[(bits[0] | (bits[1] << 1) | (bits[2] << 2)) as usize];
    let body = [lower[0] + 1, lower[1] + 1, lower[2] + 1];
    let sb = g.sign_exact(&body);
    for axis in 0..3 {
        let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
        for side in 0..2u32 {
            // face corners in cyclic order
            let ring: [[u32; 3]; 4] = [(0, 0), (1, 0), (1, 1), (0, 1)].map(|(u, v)| {
                let mut bits = [0; 3];
                bits[axis] = side;
                bits[b] = u;
                bits[c] = v;
                bits
            });
            let rs = ring.map(sign_of);
            let mut face = body;
            face[axis] = lower[axis] + 2 * side;
            let sf = if rs.iter().all(|&v| v == rs[0]) { rs[0] } else { g.sign_exact(&face) };
            for k in 0..4 {
                let l = (k + 1) % 4;
                marching_tet(
                    g,
                    [corner(ring[k]), corner(ring[l]), face, body],
                    [rs[k], rs[l], sf, sb],
                    clip,
                    &mut out.pieces,
                );
            }
        }
    }
}

/// Meshes `{f = level} ∩ B̄_ε` for the grid's polynomial and level.
pub(crate) fn extract(g: &LevelGrid) -> Result<FibreMesh, ComplexError> {
    let eps = g.epsilon_f64();
    let clip = Clipper { r2: eps * eps };
    let flag = Flagger::new(g);
    let n = g.n as u32;
    let slabs: Vec<SlabOut> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = SlabOut::default();
            for j in 0..n {
                if g.dim == 2 {
                    square(g, 2 * i, 2 * j, &clip, &flag, &mut out);
                } else {
                    for k in 0..n {
                        cube(g, [2 * i, 2 * j, 2 * k], &clip, &flag, &mut out);
                    }
                }
            }
            out
        })
        .collect();

    let mut builder = SimplicialBuilder::new();
    let mut ids: HashMap<VKey, usize> = HashMap::new();
    let mut positions = Vec::new();
    let mut on_sphere = Vec::new();
    let (mut flagged, mut mixed) = (0, 0);
    for slab in &slabs {
        flagged += slab.flagged;
        mixed += slab.mixed;
        for piece in &slab.pieces {
            let mut v = [0usize; 3];
            for (slot, vtx) in v.iter_mut().zip(&piece.v[..piece.len]) {
                *slot = *ids.entry(vtx.key).or_insert_with(|| {
                    positions.push(vtx.pos);
                    on_sphere.push(matches!(vtx.key, VKey::Clip(..)));
                    builder.add_vertex()
                });
            }
            if piece.len == 2 {
                builder.edge(v[0], v[1])?;
            } else {
                builder.triangle(v[0], v[1], v[2])?;
            }
        }
    }
    Ok(FibreMesh {
        complex: builder.finish(),
        positions,
        on_sphere,
        flagged_cells: flagged,
        mixed_cells: mixed,
        exact_evaluations: g.exact_evaluations(),
        dim: g.dim,
    })
}
