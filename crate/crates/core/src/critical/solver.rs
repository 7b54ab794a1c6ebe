//! Interval solver for `grad f = 0` based on the Krawczyk operator
//! `K(X, c) = c - Y F(c) + (I - Y J(X)) (X - c)`.
//!
//! `K ⊂ int X` proves exactly one zero in `X` (nondegenerate); `K ∩ X = ∅`
//! proves none. `Y` is any matrix, so a floating inverse of `J(c)` costs no
//! rigour: everything after it is exact rational interval arithmetic.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::CriticalError;
use crate::poly::interval::{box_intersects, box_max_width, box_mid, box_subset};
use crate::poly::rational::{fmt_rational, from_f64, to_f64};
use crate::poly::{F64Poly, IBox, Interval, MultiPoly, Rational};

/// Maximum number of boxes processed per call.
pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub budget: usize,
    /// Boxes narrower than `initial_width * 2^-min_width_bits` are left undecided.
    pub min_width_bits: u32,
    /// Below `initial_width * 2^-inflate_bits`, inconclusive boxes are retried
    /// on an inflated box around a Newton iterate (zeros on split lines).
    pub inflate_bits: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            budget: DEFAULT_BUDGET,
            min_width_bits: 48,
            inflate_bits: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    UniqueZero,
    NoZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofMethod {
    /// Some gradient component's interval range excludes 0.
    RangeExclusion,
    /// `K(X) ∩ X = ∅`.
    KrawczykDisjoint,
    /// `K(R) ⊂ int R` for every listed region; all contain the same zero,
    /// which also lies in the certificate box.
    KrawczykContraction { regions: Vec<IBox> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// For a unique zero: a tight enclosure. Otherwise the excluded region.
    pub bx: IBox,
    pub kind: CertificateKind,
    pub method: ProofMethod,
}

impl Certificate {
    pub fn regions(&self) -> Vec<&IBox> {
        match &self.method {
            ProofMethod::KrawczykContraction { regions } => regions.iter().collect(),
            _ => vec![&self.bx],
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let b = |bx: &IBox| {
            bx.iter()
                .map(|iv| [fmt_rational(iv.lo()), fmt_rational(iv.hi())])
                .collect::<Vec<_>>()
        };
        let method = match &self.method {
            ProofMethod::RangeExclusion => "range_exclusion",
            ProofMethod::KrawczykDisjoint => "krawczyk_disjoint",
            ProofMethod::KrawczykContraction { .. } => "krawczyk_contraction",
        };
        serde_json::json!({
            "box": b(&self.bx),
            "kind": self.kind,
            "method": method,
            "regions": self.regions().into_iter().map(b).collect::<Vec<_>>(),
        })
    }
}

/// Outcome of [`certify_points`]: certified regions cover the search box
/// except for the explicitly listed `undecided` boxes.
#[derive(Clone, Debug)]
pub struct Certification {
    pub search_box: IBox,
    pub certificates: Vec<Certificate>,
    pub undecided: Vec<IBox>,
    pub boxes_processed: usize,
}

impl Certification {
    pub fn unique_zeros(&self) -> impl Iterator<Item = &Certificate> {
        self.certificates
            .iter()
            .filter(|c| c.kind == CertificateKind::UniqueZero)
    }

    pub fn unique_count(&self) -> usize {
        self.unique_zeros().count()
    }

    pub fn no_zero_count(&self) -> usize {
        self.certificates.len() - self.unique_count()
    }

    pub fn is_complete(&self) -> bool {
        self.undecided.is_empty()
    }
}

struct Solver {
    dim: usize,
    grad: Vec<MultiPoly>,
    jac: Vec<Vec<MultiPoly>>,
    grad_f: Vec<F64Poly>,
    jac_f: Vec<Vec<F64Poly>>,
}

fn pow2(e: i32) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

fn strictly_inside(inner: &[Interval], outer: &[Interval]) -> bool {
    inner.iter().zip(outer).all(|(a, b)| a.is_interior_of(b))
}

fn intersect_box(a: &[Interval], b: &[Interval]) -> Option<IBox> {
    a.iter().zip(b).map(|(x, y)| x.intersect(y)).collect()
}

impl Solver {
    fn new(f: &MultiPoly) -> Result<Self, CriticalError> {
        let vars = f.variables().to_vec();
        let grad = f.jacobian(&vars)?;
        let jac = grad
            .iter()
            .map(|g| g.jacobian(&vars))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Solver {
            dim: vars.len(),
            grad_f: grad.iter().map(MultiPoly::to_f64).collect(),
            jac_f: jac.iter().map(|r| r.iter().map(MultiPoly::to_f64).collect()).collect(),
            grad,
            jac,
        })
    }

    fn range_excludes_zero(&self, x: &[Interval]) -> bool {
        self.grad
            .iter()
            .any(|g| !g.eval_interval(x).expect("dimension checked").contains_zero())
    }

    fn jac_at(&self, z: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.jac_f[i][j].eval(z))
    }

    fn krawczyk(&self, x: &[Interval], c: &[Rational]) -> Option<IBox> {
        let cf: Vec<f64> = c.iter().map(to_f64).collect();
        let inv = self.jac_at(&cf).try_inverse()?;
        if inv.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let y: Vec<Vec<Rational>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| from_f64(inv[(i, j)])).collect())
            .collect();
        let fc: Vec<Rational> = self
            .grad
            .iter()
            .map(|g| g.evaluate(c).expect("dimension checked"))
            .collect();
        let jx: Vec<Vec<Interval>> = self
            .jac
            .iter()
            .map(|r| r.iter().map(|p| p.eval_interval(x).expect("dimension checked")).collect())
            .collect();
        let dx: Vec<Interval> = x.iter().zip(c).map(|(iv, ci)| iv.shift(&-ci)).collect();
        let k = (0..self.dim)
            .map(|i| {
                let yf: Rational = (0..self.dim).map(|j| &y[i][j] * &fc[j]).sum();
                let mut acc = Interval::point(&c[i] - yf);
                for j in 0..self.dim {
                    let mut m = if i == j { Interval::point(Rational::one()) } else { Interval::zero() };
                    for l in 0..self.dim {
                        m = &m - &jx[l][j].scale(&y[i][l]);
                    }
                    acc = &acc + &(&m * &dx[j]);
                }
                acc
            })
            .collect();
        Some(k)
    }

    fn newton(&self, start: Vec<f64>) -> Option<Vec<f64>> {
        let mut z = start;
        for _ in 0..60 {
            let f = DVector::from_iterator(self.dim, self.grad_f.iter().map(|g| g.eval(&z)));
            let step = self.jac_at(&z).lu().solve(&f)?;
            let scale = 1.0 + z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (zi, si) in z.iter_mut().zip(step.iter()) {
                *zi -= si;
            }
            if z.iter().any(|v| !v.is_finite()) {
                return None;
            }
            if step.amax() <= 1e-15 * scale {
                return Some(z);
            }
        }
        None
    }

    /// A small box around the zero proven to lie in `region`, whose
    /// Krawczyk image was `k`.
    fn tighten(&self, region: &[Interval], k: &[Interval]) -> IBox {
        let mid: Vec<f64> = box_mid(k).iter().map(to_f64).collect();
        if let Some(z) = self.newton(mid) {
            let mag = z.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let e = mag.log2().ceil() as i32;
            for bits in [44, 34, 24] {
                let r = pow2(e - bits);
                let centre: Vec<Rational> = z.iter().map(|v| from_f64(*v)).collect();
                let t: IBox = centre.iter().map(|c| Interval::centered(c, &r)).collect();
                if !box_subset(&t, region) {
                    continue;
                }
                if let Some(kt) = self.krawczyk(&t, &centre) {
                    if strictly_inside(&kt, &t) {
                        return t;
                    }
                }
            }
        }
        // fall back to contracting the region itself
        let mut x = intersect_box(k, region).expect("zero lies in K ∩ R");
        for _ in 0..8 {
            match self.krawczyk(&x, &box_mid(&x)).and_then(|kx| intersect_box(&kx, &x)) {
                Some(nx) => x = nx,
                None => break,
            }
        }
        x
    }
}

/// Result of offering a newly proven region to the certificate list.
enum Added {
    Stored,
    Outside,
    Ambiguous,
}

struct Run<'a> {
    solver: &'a Solver,
    search: IBox,
    unique: Vec<(IBox, Vec<IBox>)>,
    no_zero: Vec<Certificate>,
    /// Regions whose unique zero lies outside the search box.
    exterior: Vec<IBox>,
    undecided: Vec<IBox>,
}

impl Run<'_> {
    fn covered(&self, x: &[Interval]) -> bool {
        self.unique
            .iter()
            .flat_map(|(_, regions)| regions)
            .chain(&self.exterior)
            .any(|r| box_subset(x, r))
    }

    fn add_unique(&mut self, region: IBox, k: &[Interval]) -> Added {
        let tight = self.solver.tighten(&region, k);
        if !box_subset(&tight, &self.search) {
            if box_intersects(&tight, &self.search) {
                return Added::Ambiguous;
            }
            self.exterior.push(region);
            return Added::Outside;
        }
        for (t, regions) in &mut self.unique {
            if !box_intersects(t, &tight) {
                continue;
            }
            let same = regions.iter().any(|r| box_subset(&tight, r)) || box_subset(t, &region);
            if !same {
                return Added::Ambiguous;
            }
            *t = intersect_box(t, &tight).expect("both enclose the same zero");
            regions.push(region);
            return Added::Stored;
        }
        self.unique.push((tight, vec![region]));
        Added::Stored
    }

    /// Inflated retry around a Newton iterate; true if `x` ends up covered.
    fn inflate(&mut self, x: &[Interval]) -> bool {
        let w = box_max_width(x);
        let mid: Vec<f64> = box_mid(x).iter().map(to_f64).collect();
        let Some(z) = self.solver.newton(mid) else {
            return false;
        };
        let wf = to_f64(&w);
        let near = x.iter().zip(&z).all(|(iv, zi)| {
            let (lo, hi) = iv.to_f64();
            *zi >= lo - wf && *zi <= hi + wf
        });
        if !near {
            return false;
        }
        let big: IBox = x
            .iter()
            .map(|iv| Interval::new(iv.lo() - &w, iv.hi() + &w))
            .collect();
        let centre: Vec<Rational> = z.iter().map(|v| from_f64(*v)).collect();
        let Some(k) = self.solver.krawczyk(&big, &centre) else {
            return false;
        };
        if !strictly_inside(&k, &big) {
            return false;
        }
        match self.add_unique(big, &k) {
            Added::Stored | Added::Outside => self.covered(x),
            Added::Ambiguous => false,
        }
    }
}

/// Splits the widest axis near (not exactly at) its midpoint, so that zeros
/// at symmetric positions such as 0 rarely land on a split line.
fn split(x: &[Interval]) -> (IBox, IBox) {
    let (axis, iv) = x
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.width().cmp(&b.1.width()).then(b.0.cmp(&a.0)))
        .expect("nonempty box");
    let target = iv.lo() + iv.width() * Rational::new(63.into(), 128.into());
    let mut p = from_f64(to_f64(&target));
    if !(iv.lo() < &p && &p < iv.hi()) {
        p = iv.mid();
    }
    let mut left = x.to_vec();
    let mut right = x.to_vec();
    left[axis] = Interval::new(iv.lo().clone(), p.clone());
    right[axis] = Interval::new(p, iv.hi().clone());
    (left, right)
}

fn lower_corner_cmp(a: &IBox, b: &IBox) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.lo().cmp(y.lo()).then(x.hi().cmp(y.hi())))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Certifies all critical points of `f` (zeros of its gradient) in `bx`.
pub fn certify_points(f: &MultiPoly, bx: &[Interval]) -> Result<Certification, CriticalError> {
    certify_points_with(f, bx, &SolverOptions::default())
}

pub fn certify_points_with(
    f: &MultiPoly,
    bx: &[Interval],
    opts: &SolverOptions,
) -> Result<Certification, CriticalError> {
    if bx.is_empty() {
        return Err(CriticalError::EmptyBox);
    }
    if bx.len() != f.nvars() {
        return Err(crate::poly::PolyError::DimensionMismatch {
            expected: f.nvars(),
            got: bx.len(),
        }
        .into());
    }
    let solver = Solver::new(f)?;
    let w0 = box_max_width(bx);
    let inflate_below = &w0 * pow2(-(opts.inflate_bits as i32));
    let give_up_below = &w0 * pow2(-(opts.min_width_bits as i32));
    let mut run = Run {
        solver: &solver,
        search: bx.to_vec(),
        unique: Vec::new(),
        no_zero: Vec::new(),
        exterior: Vec::new(),
        undecided: Vec::new(),
    };
    let mut stack = vec![bx.to_vec()];
    let mut processed = 0;
    while let Some(x) = stack.pop() {
        if processed >= opts.budget {
            run.undecided.push(x);
            run.undecided.append(&mut stack);
            break;
        }
        processed += 1;
        if solver.range_excludes_zero(&x) {
            run.no_zero.push(Certificate {
                bx: x,
                kind: CertificateKind::NoZero,
                method: ProofMethod::RangeExclusion,
            });
            continue;
        }
        if run.covered(&x) {
            continue;
        }
        if let Some(k) = solver.krawczyk(&x, &box_mid(&x)) {
            if !box_intersects(&k, &x) {
                run.no_zero.push(Certificate {
                    bx: x,
                    kind: CertificateKind::NoZero,
                    method: ProofMethod::KrawczykDisjoint,
                });
                continue;
            }
            if strictly_inside(&k, &x) {
                match run.add_unique(x.clone(), &k) {
                    Added::Stored | Added::Outside => continue,
                    Added::Ambiguous => {}
                }
            }
        }
        let w = box_max_width(&x);
        if w <= inflate_below && run.inflate(&x) {
            continue;
        }
        if w <= give_up_below {
            run.undecided.push(x);
            continue;
        }
        let (l, r) = split(&x);
        stack.push(r);
        stack.push(l);
    }

    let mut certificates: Vec<Certificate> = run
        .unique
        .into_iter()
        .map(|(bx, regions)| Certificate {
            bx,
            kind: CertificateKind::UniqueZero,
            method: ProofMethod::KrawczykContraction { regions },
        })
        .collect();
    certificates.sort_by(|a, b| lower_corner_cmp(&a.bx, &b.bx));
    let mut no_zero = run.no_zero;
    no_zero.sort_by(|a, b| lower_corner_cmp(&a.bx, &b.bx));
    certificates.extend(no_zero);
    let mut undecided = run.undecided;
    undecided.sort_by(lower_corner_cmp);
    Ok(Certification {
        search_box: bx.to_vec(),
        certificates,
        undecided,
        boxes_processed: processed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morsify::build_family;
    use crate::poly::interval::cube;
    use crate::poly::rational::{frac, int};

    fn fam_at(code: &str, t0: Rational) -> MultiPoly {
        build_family(&code.parse().unwrap())
            .unwrap()
            .family_at(&t0)
            .unwrap()
    }

    #[test]
    fn a2_plus_has_a_single_exclusion_cover() {
        let f = fam_at("A2+s0n1", frac(1, 2));
        let c = certify_points(&f, &cube(2, &int(2))).unwrap();
        assert_eq!(c.certificates.len(), 1);
        assert_eq!(c.certificates[0].kind, CertificateKind::NoZero);
        assert_eq!(c.certificates[0].bx, cube(2, &int(2)));
        assert!(c.is_complete());
    }

    #[test]
    fn d6_minus_two_unique_zeros() {
        let f = fam_at("D6-s0n1", frac(1, 2));
        let c = certify_points(&f, &cube(2, &int(2))).unwrap();
        assert!(c.is_complete());
        assert_eq!(c.unique_count(), 2);
        let u: Vec<_> = c.unique_zeros().collect();
        assert!(!box_intersects(&u[0].bx, &u[1].bx));
        let mut signs: Vec<_> = u.iter().map(|c| c.bx[1].sign()).collect();
        signs.sort();
        assert_eq!(signs, [Some(Ordering::Less), Some(Ordering::Greater)]);
    }

    #[test]
    fn e7_unique_zero() {
        let f = fam_at("E7s0n1", frac(1, 10));
        let c = certify_points(&f, &cube(2, &int(2))).unwrap();
        assert!(c.is_complete());
        assert_eq!(c.unique_count(), 1);
        let u = c.unique_zeros().next().unwrap();
        assert!(u.bx[0].contains(&frac(-1, 10)));
    }

    #[test]
    fn zero_on_split_lines_is_found_once() {
        // the first split of [-2, 2] on either axis lands at -1/32
        let f = MultiPoly::parse("x^2 + y^2 + 1/16*x + 1/16*y", &["x", "y"]).unwrap();
        let c = certify_points(&f, &cube(2, &int(2))).unwrap();
        assert!(c.is_complete());
        assert_eq!(c.unique_count(), 1);
        let u = c.unique_zeros().next().unwrap();
        assert!(u.bx.iter().all(|iv| iv.contains(&frac(-1, 32))));
    }

    #[test]
    fn budget_exhaustion_reports_undecided() {
        // degenerate: the germ itself at t = 0
        let f = fam_at("A3+s0n1", int(0));
        let opts = SolverOptions {
            budget: 50,
            ..SolverOptions::default()
        };
        let c = certify_points_with(&f, &cube(2, &int(2)), &opts).unwrap();
        assert!(!c.is_complete());
        assert_eq!(c.boxes_processed, 50);
        assert_eq!(c.unique_count(), 0);
    }

    #[test]
    fn suspended_zero_has_a_tight_tail() {
        let f = fam_at("D5-s1n3", frac(1, 2));
        let c = certify_points(&f, &cube(4, &int(2))).unwrap();
        assert!(c.is_complete());
        assert_eq!(c.unique_count(), 1);
        let u = c.unique_zeros().next().unwrap();
        for iv in &u.bx[2..] {
            assert!(iv.contains_zero() && iv.width() < frac(1, 1 << 20));
        }
    }
}
