//! Certified eigenvalue sign counts of symmetric interval matrices.

use std::cmp::Ordering;

use super::{CriticalError, Signature};
use crate::poly::rational::int;
use crate::poly::{Interval, MultiPoly, Rational};

/// Signature of the Hessian of `f` over the box `location`.
///
/// Holds for every point of the box, so a certified enclosure of a critical
/// point gives that point's signature.
pub fn hessian_signature_at(f: &MultiPoly, location: &[Interval]) -> Result<Signature, CriticalError> {
    let h = f.hessian(f.variables())?;
    let m = h
        .iter()
        .map(|row| row.iter().map(|p| p.eval_interval(location)).collect())
        .collect::<Result<Vec<Vec<Interval>>, _>>()?;
    interval_matrix_signature(&m)
}

fn is_exact_zero(iv: &Interval) -> bool {
    iv.sign() == Some(Ordering::Equal)
}

/// Splits indices into the connected components of the nonzero pattern.
fn blocks(m: &[Vec<Interval>]) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            for b in 0..n {
                if !seen[b] && !(is_exact_zero(&m[a][b]) && is_exact_zero(&m[b][a])) {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn straddles(what: &str, iv: &Interval) -> CriticalError {
    CriticalError::CannotCertify(format!("{what} enclosure {iv} contains 0"))
}

fn one_by_one(a: &Interval) -> Result<Signature, CriticalError> {
    let (p, n, z) = match a.sign() {
        Some(Ordering::Greater) => (1, 0, 0),
        Some(Ordering::Less) => (0, 1, 0),
        Some(Ordering::Equal) => (0, 0, 1),
        None => return Err(straddles("diagonal entry", a)),
    };
    Ok(Signature { n_pos: p, n_neg: n, n_zero: z })
}

fn two_by_two(a: &Interval, b: &Interval, c: &Interval) -> Result<Signature, CriticalError> {
    let det = &(a * c) - &b.sqr();
    let tr = a + c;
    let sig = |p, n, z| Signature { n_pos: p, n_neg: n, n_zero: z };
    match (det.sign(), tr.sign()) {
        (Some(Ordering::Less), _) => Ok(sig(1, 1, 0)),
        (Some(Ordering::Greater), Some(Ordering::Greater)) => Ok(sig(2, 0, 0)),
        (Some(Ordering::Greater), Some(Ordering::Less)) => Ok(sig(0, 2, 0)),
        (Some(Ordering::Equal), Some(Ordering::Greater)) => Ok(sig(1, 0, 1)),
        (Some(Ordering::Equal), Some(Ordering::Less)) => Ok(sig(0, 1, 1)),
        (Some(Ordering::Equal), Some(Ordering::Equal)) => Ok(sig(0, 0, 2)),
        (None, _) => Err(straddles("determinant", &det)),
        _ => Err(straddles("trace", &tr)),
    }
}

/// Coefficients `c_0 = 1, c_1, .., c_m` of `det(λI - A) = Σ c_i λ^(m-i)`.
fn charpoly(a: &[Vec<Interval>]) -> Vec<Interval> {
    let m = a.len();
    let identity = |i: usize, j: usize| if i == j { Interval::point(int(1)) } else { Interval::zero() };
    let mut coeffs = vec![Interval::point(int(1))];
    let mut mk: Vec<Vec<Interval>> = (0..m).map(|i| (0..m).map(|j| identity(i, j)).collect()).collect();
    for k in 1..=m {
        let am: Vec<Vec<Interval>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| (0..m).fold(Interval::zero(), |acc, l| &acc + &(&a[i][l] * &mk[l][j])))
                    .collect()
            })
            .collect();
        let tr = (0..m).fold(Interval::zero(), |acc, i| &acc + &am[i][i]);
        let ck = (-&tr).scale(&Rational::new(1.into(), (k as i64).into()));
        mk = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { &am[i][j] + &ck } else { am[i][j].clone() })
                    .collect()
            })
            .collect();
        coeffs.push(ck);
    }
    coeffs
}

/// Descartes count on the characteristic polynomial; exact for symmetric
/// matrices because all roots are real.
fn general(a: &[Vec<Interval>]) -> Result<Signature, CriticalError> {
    let m = a.len();
    let coeffs = charpoly(a);
    let n_zero = coeffs.iter().rev().take_while(|c| is_exact_zero(c)).count();
    let mut last: Option<Ordering> = None;
    let mut changes = 0;
    for c in &coeffs[..=m - n_zero] {
        match c.sign() {
            None => return Err(straddles("characteristic coefficient", c)),
            Some(Ordering::Equal) => {}
            Some(s) => {
                if last.is_some_and(|l| l != s) {
                    changes += 1;
                }
                last = Some(s);
            }
        }
    }
    Ok(Signature {
        n_pos: changes,
        n_neg: m - n_zero - changes,
        n_zero,
    })
}

/// Signature of every symmetric matrix in the interval matrix `m`.
pub fn interval_matrix_signature(m: &[Vec<Interval>]) -> Result<Signature, CriticalError> {
    let mut total = Signature { n_pos: 0, n_neg: 0, n_zero: 0 };
    for block in blocks(m) {
        let sub: Vec<Vec<Interval>> = block
            .iter()
            .map(|&i| block.iter().map(|&j| m[i][j].clone()).collect())
            .collect();
        let sig = match sub.len() {
            1 => one_by_one(&sub[0][0])?,
            2 => two_by_two(&sub[0][0], &sub[0][1], &sub[1][1])?,
            _ => general(&sub)?,
        };
        total = total.plus(sig);
    }
    debug_assert!(total.dim() == m.len() || m.is_empty() && total.dim() == 0);
    Ok(total)
}
