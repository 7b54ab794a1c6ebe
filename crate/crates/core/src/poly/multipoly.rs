use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::interval::Interval;
use super::rational::{fmt_rational, int, pow, to_f64, Rational};
use super::PolyError;

/// Exponent vector, one entry per variable of the owning polynomial.
pub type Exponents = Vec<u32>;

/// Sparse multivariate polynomial with exact rational coefficients over an
/// ordered list of named variables.
///
/// Invariants: no stored coefficient is zero and every exponent vector has
/// one entry per variable. Binary arithmetic requires both operands to share
/// the same variable list; use [`MultiPoly::with_variables`] to align them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var<S: AsRef<str>>(vars: &[S], name: &str) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        let i = p.index_of(name)?;
        let mut e = vec![0; p.vars.len()];
        e[i] = 1;
        p.terms.insert(e, Rational::one());
        Ok(p)
    }

    /// Single term `c * prod vars^exps`.
    pub fn monomial<S: AsRef<str>>(vars: &[S], exps: Exponents, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, merging repeats and
    /// dropping zeros.
    pub fn from_terms<S: AsRef<str>, I>(vars: &[S], terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` if the polynomial is the constant `c` (including 0).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> Result<u32, PolyError> {
        let i = self.index_of(name)?;
        Ok(self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(&self.vars, Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable that actually occurs.
    pub fn with_variables<S: AsRef<str>>(&self, vars: &[S]) -> Result<MultiPoly, PolyError> {
        let target: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match target.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None if self.terms.keys().all(|e| e[i] == 0) => map.push(None),
                None => return Err(PolyError::UnknownVariable(v.clone())),
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] += x;
                }
            }
            (ne, c.clone())
        });
        Ok(MultiPoly::from_terms(&target, terms))
    }

    fn check_dim(&self, got: usize) -> Result<(), PolyError> {
        if got != self.vars.len() {
            return Err(PolyError::DimensionMismatch {
                expected: self.vars.len(),
                got,
            });
        }
        Ok(())
    }

    /// Exact value at `point` (one coordinate per variable).
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        self.check_dim(point.len())?;
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= pow(x, k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to `var`.
    pub fn partial(&self, var: &str) -> Result<MultiPoly, PolyError> {
        let i = self.index_of(var)?;
        let terms = self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut ne = e.clone();
            ne[i] -= 1;
            (ne, c * int(e[i] as i64))
        });
        Ok(MultiPoly::from_terms(&self.vars, terms))
    }

    /// Row of partials with respect to `vars` (the spatial variables).
    pub fn jacobian<S: AsRef<str>>(&self, vars: &[S]) -> Result<Vec<MultiPoly>, PolyError> {
        if vars.is_empty() {
            return Err(PolyError::EmptyVariableSet);
        }
        vars.iter().map(|v| self.partial(v.as_ref())).collect()
    }

    /// Symmetric matrix of second partials over `vars`.
    pub fn hessian<S: AsRef<str>>(&self, vars: &[S]) -> Result<Vec<Vec<MultiPoly>>, PolyError> {
        let grad = self.jacobian(vars)?;
        grad.iter().map(|g| g.jacobian(vars)).collect()
    }

    /// Replaces `var` by `value` and drops it from the variable list.
    pub fn substitute(&self, var: &str, value: &Rational) -> Result<MultiPoly, PolyError> {
        let i = self.index_of(var)?;
        let vars: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = e.clone();
            let k = ne.remove(i);
            (ne, c * pow(value, k))
        });
        Ok(MultiPoly::from_terms(&vars, terms))
    }

    /// Naive interval extension: an enclosure of the range over `bx`.
    pub fn eval_interval(&self, bx: &[Interval]) -> Result<Interval, PolyError> {
        self.check_dim(bx.len())?;
        let maxdeg: Vec<u32> = (0..self.vars.len())
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        // powers[i][k] = range of x_i^k
        let powers: Vec<Vec<Interval>> = bx
            .iter()
            .zip(&maxdeg)
            .map(|(iv, &m)| (0..=m).map(|k| iv.powi(k)).collect())
            .collect();
        let mut acc = Interval::zero();
        for (e, c) in &self.terms {
            let mut t = Interval::point(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Interval extension refined by `depth` rounds of bisection of the
    /// widest coordinate; still a sound enclosure, usually tighter.
    pub fn eval_interval_refined(&self, bx: &[Interval], depth: u32) -> Result<Interval, PolyError> {
        if depth == 0 || bx.is_empty() {
            return self.eval_interval(bx);
        }
        let (axis, _) = bx
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.width().cmp(&b.1.width()))
            .unwrap();
        let (l, r) = bx[axis].bisect();
        let mut left = bx.to_vec();
        left[axis] = l;
        let mut right = bx.to_vec();
        right[axis] = r;
        Ok(self
            .eval_interval_refined(&left, depth - 1)?
            .hull(&self.eval_interval_refined(&right, depth - 1)?))
    }

    /// Floating-point copy for fast approximate evaluation.
    pub fn to_f64(&self) -> F64Poly {
        F64Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), to_f64(c)))
                .collect(),
        }
    }
}

/// Approximate evaluation companion of [`MultiPoly`]; never used for
/// decisions that must be exact.
#[derive(Clone, Debug)]
pub struct F64Poly {
    terms: Vec<(Exponents, f64)>,
}

impl F64Poly {
    pub fn terms(&self) -> &[(Exponents, f64)] {
        &self.terms
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }

    /// Value and `sum |c| |x^e|`, the magnitude used for rounding-error bounds.
    pub fn eval_with_magnitude(&self, x: &[f64]) -> (f64, f64) {
        let mut v = 0.0;
        let mut m = 0.0;
        for (e, c) in &self.terms {
            let mono = e
                .iter()
                .zip(x)
                .fold(1.0, |acc, (&k, &xi)| acc * xi.powi(k as i32));
            v += c * mono;
            m += (c * mono).abs();
        }
        (v, m)
    }
}

fn same_vars(a: &MultiPoly, b: &MultiPoly) {
    assert_eq!(
        a.vars, b.vars,
        "polynomial arithmetic requires identical variable lists"
    );
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        same_vars(self, rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        same_vars(self, rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        same_vars(self, rhs);
        let mut out = MultiPoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// Printing order: lexicographically descending exponent vectors, so
/// `x^3 + x*y^3` rather than `x*y^3 + x^3`.
fn display_order(a: &Exponents, b: &Exponents) -> std::cmp::Ordering {
    b.cmp(a)
}

impl fmt::Display for MultiPoly {
    /// Canonical text form, e.g. `x^2*y - y^3 - x1^2`. Parses back to an
    /// identical polynomial with [`MultiPoly::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| display_order(a.0, b.0));
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, v)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", fmt_rational(&abs))?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::frac;

    fn p(s: &str, vars: &[&str]) -> MultiPoly {
        MultiPoly::parse(s, vars).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let xy = ["x", "y"];
        assert_eq!(p("x^4+y^2", &xy).evaluate(&[int(0), int(0)]).unwrap(), int(0));
        assert_eq!(p("x^2*y-y^3", &xy).evaluate(&[int(1), int(1)]).unwrap(), int(0));
        let f = p("x^3+3*t*x+y^5", &["x", "y", "t"]);
        assert_eq!(f.evaluate(&[int(1), int(1), int(1)]).unwrap(), int(5));
        assert!(matches!(
            f.evaluate(&[int(1)]),
            Err(PolyError::DimensionMismatch { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn partial_examples() {
        let v = ["x", "y", "t"];
        // (k+1)x^k + t with k = 2
        assert_eq!(p("x^3+t*x+y^2", &v).partial("x").unwrap(), p("3*x^2+t", &v));
        // x^2 + (k-1)(t - y^{k-2}) with k = 5
        assert_eq!(
            p("x^2*y-y^4+4*t*y", &v).partial("y").unwrap(),
            p("x^2+4*(t-y^3)", &v)
        );
        assert!(p("y^2", &v).partial("x").unwrap().is_zero());
        assert!(matches!(
            p("y^2", &v).partial("z"),
            Err(PolyError::UnknownVariable(_))
        ));
    }

    #[test]
    fn jacobian_examples() {
        let v = ["x", "y", "t"];
        let j = p("x^3+3*t*x+y^4", &v).jacobian(&["x", "y"]).unwrap();
        assert_eq!(j, vec![p("3*x^2+3*t", &v), p("4*y^3", &v)]);
        let j = p("x^3+3*t*x+x*y^3+t*y^3", &v).jacobian(&["x", "y"]).unwrap();
        assert_eq!(j, vec![p("3*(x^2+t)+y^3", &v), p("3*y^2*(x+t)", &v)]);
        let j = p("7", &v).jacobian(&["x", "y"]).unwrap();
        assert!(j.iter().all(MultiPoly::is_zero));
        assert!(matches!(
            p("7", &v).jacobian::<&str>(&[]),
            Err(PolyError::EmptyVariableSet)
        ));
    }

    #[test]
    fn hessian_examples() {
        let v = ["x", "y", "t"];
        let h = p("x^3+3*t*x+x*y^3+t*y^3", &v).hessian(&["x", "y"]).unwrap();
        assert_eq!(h[0][0], p("6*x", &v));
        assert_eq!(h[0][1], p("3*y^2", &v));
        assert_eq!(h[1][0], p("3*y^2", &v));
        assert_eq!(h[1][1], p("6*y*(x+t)", &v));
        let h = p("x^3+t*x+y^2", &v).hessian(&["x", "y"]).unwrap();
        assert_eq!(h, vec![vec![p("6*x", &v), p("0", &v)], vec![p("0", &v), p("2", &v)]]);
        let q = ["a", "b", "c"];
        let h = p("a^2-b^2-c^2", &q).hessian(&q).unwrap();
        for (i, row) in h.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let want = match (i == j, i) {
                    (false, _) => 0,
                    (true, 0) => 2,
                    (true, _) => -2,
                };
                assert_eq!(e.as_constant(), Some(int(want)));
            }
        }
    }

    #[test]
    fn substitute_examples() {
        let v = ["x", "y", "t"];
        let g = p("x^2*y+2*t*x^2+y^3-t*y", &v)
            .substitute("t", &frac(-1, 4))
            .unwrap();
        assert_eq!(g, p("x^2*y-1/2*x^2+y^3+1/4*y", &["x", "y"]));
        let c = p("5", &v).substitute("t", &int(3)).unwrap();
        assert_eq!(c.as_constant(), Some(int(5)));
        assert_eq!(c.variables(), &["x", "y"]);
    }

    #[test]
    fn interval_examples() {
        let x = ["x"];
        let r = p("x^2", &x)
            .eval_interval(&[Interval::new(int(-1), int(1))])
            .unwrap();
        assert!(Interval::new(int(0), int(1)).is_subset_of(&r));
        let f = p("3*x^2+3*t", &["x", "t"]);
        let r = f
            .eval_interval(&[Interval::new(int(1), int(2)), Interval::new(frac(1, 2), int(1))])
            .unwrap();
        assert!(r.is_subset_of(&Interval::new(frac(9, 2), int(15))));
        assert!(!r.contains_zero());
        let c = p("5", &["x", "y"])
            .eval_interval(&[Interval::new(int(-3), int(7)), Interval::zero()])
            .unwrap();
        assert_eq!(c, Interval::point(int(5)));
    }

    #[test]
    fn display_is_canonical() {
        let v = ["x", "y", "x1"];
        assert_eq!(p("-x1^2 - y^3 + y*x^2", &v).to_string(), "x^2*y - y^3 - x1^2");
        assert_eq!(p("1/2*x - 3", &v).to_string(), "1/2*x - 3");
        assert_eq!(p("0*x", &v).to_string(), "0");
    }

    #[test]
    fn with_variables_reorders() {
        let f = p("x*t + y", &["x", "y", "t"]);
        let g = f.with_variables(&["t", "y", "x", "z"]).unwrap();
        assert_eq!(g.to_string(), "t*x + y");
        assert!(f.with_variables(&["x", "y"]).is_err());
    }
}
