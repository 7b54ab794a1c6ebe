//! The ADE germ catalog: descriptors, validation, canonical codes and the
//! polynomial `f` on `R^{n+1}` with coordinates `(x, y, x1, ..., x_{n-1})`.
//!
//! Germ codes look like `A3+s0n1`, `D4-s1n2`, `E6+s0n1`, `E7s2n4`: family and
//! `k` (A, D), sign (A, D, E6), number `s` of negative squares and `n`. The
//! number of positive squares is `n - 1 - s`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use num_traits::Zero;

use crate::poly::{rational::int, MultiPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Curve part of the germ. E7 and E8 carry no sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GermKind {
    A { k: u32, sign: Sign },
    D { k: u32, sign: Sign },
    E6 { sign: Sign },
    E7,
    E8,
}

impl GermKind {
    pub fn family_name(&self) -> &'static str {
        match self {
            GermKind::A { .. } => "A",
            GermKind::D { .. } => "D",
            GermKind::E6 { .. } => "E6",
            GermKind::E7 => "E7",
            GermKind::E8 => "E8",
        }
    }

    pub fn k(&self) -> Option<u32> {
        match *self {
            GermKind::A { k, .. } | GermKind::D { k, .. } => Some(k),
            _ => None,
        }
    }

    pub fn sign(&self) -> Option<Sign> {
        match *self {
            GermKind::A { sign, .. } | GermKind::D { sign, .. } | GermKind::E6 { sign } => Some(sign),
            _ => None,
        }
    }

    /// `x^{k+1} ± y^2`, `x^2 y ± y^{k-1}`, `x^3 ± y^4`, `x^3 + x y^3`, `x^3 + y^5`.
    pub fn curve_polynomial<S: AsRef<str>>(&self, vars: &[S]) -> MultiPoly {
        let n = vars.len();
        let mono = |ex: u32, ey: u32, c: i64| {
            let mut e = vec![0; n];
            e[0] = ex;
            e[1] = ey;
            MultiPoly::monomial(vars, e, int(c))
        };
        match *self {
            GermKind::A { k, sign } => &mono(k + 1, 0, 1) + &mono(0, 2, sign.factor()),
            GermKind::D { k, sign } => &mono(2, 1, 1) + &mono(0, k - 1, sign.factor()),
            GermKind::E6 { sign } => &mono(3, 0, 1) + &mono(0, 4, sign.factor()),
            GermKind::E7 => &mono(3, 0, 1) + &mono(1, 3, 1),
            GermKind::E8 => &mono(3, 0, 1) + &mono(0, 5, 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GermDescriptor {
    pub kind: GermKind,
    /// The germ lives on `R^{n+1}`.
    pub n: u32,
    /// Negative squares in the quadratic tail.
    pub s: u32,
    /// Positive squares in the quadratic tail.
    pub t_pos: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GermError {
    #[error("{family}_k requires k >= {min}, got k = {k}")]
    KTooSmall {
        family: &'static str,
        k: u32,
        min: u32,
    },
    #[error("n must be at least 1")]
    ZeroDimension,
    #[error("tail signature mismatch: t + s = {} but n - 1 = {}", t_pos + s, n.saturating_sub(1))]
    SignatureMismatch { n: u32, s: u32, t_pos: u32 },
    #[error("cannot parse germ code '{code}': {reason}")]
    BadCode { code: String, reason: String },
}

impl GermDescriptor {
    /// Descriptor with `t_pos` derived from `n` and `s`.
    pub fn new(kind: GermKind, n: u32, s: u32) -> Result<Self, GermError> {
        if n == 0 {
            return Err(GermError::ZeroDimension);
        }
        if s > n - 1 {
            return Err(GermError::SignatureMismatch { n, s, t_pos: 0 });
        }
        let d = GermDescriptor {
            kind,
            n,
            s,
            t_pos: n - 1 - s,
        };
        d.validate()?;
        Ok(d)
    }

    /// The plane curve germ (`n = 1`) underlying this descriptor.
    pub fn curve(kind: GermKind) -> Self {
        GermDescriptor {
            kind,
            n: 1,
            s: 0,
            t_pos: 0,
        }
    }

    pub fn curve_part(&self) -> Self {
        Self::curve(self.kind)
    }

    pub fn validate(&self) -> Result<(), GermError> {
        match self.kind {
            GermKind::A { k, .. } if k < 2 => {
                return Err(GermError::KTooSmall { family: "A", k, min: 2 })
            }
            GermKind::D { k, .. } if k < 4 => {
                return Err(GermError::KTooSmall { family: "D", k, min: 4 })
            }
            _ => {}
        }
        if self.n == 0 {
            return Err(GermError::ZeroDimension);
        }
        if self.t_pos + self.s != self.n - 1 {
            return Err(GermError::SignatureMismatch {
                n: self.n,
                s: self.s,
                t_pos: self.t_pos,
            });
        }
        Ok(())
    }

    /// Ambient dimension `n + 1`.
    pub fn dim(&self) -> usize {
        self.n as usize + 1
    }

    /// `x, y, x1, ..., x_{n-1}`
    pub fn variables(&self) -> Vec<String> {
        let mut v = vec!["x".to_string(), "y".to_string()];
        v.extend((1..self.n).map(|i| format!("x{i}")));
        v
    }

    /// `sum_{i <= t} x_i^2 - sum_{t < j <= t+s} x_j^2` over `vars`, whose
    /// first `n + 1` entries must be this descriptor's variables.
    pub fn quadratic_tail<S: AsRef<str>>(&self, vars: &[S]) -> MultiPoly {
        let mut tail = MultiPoly::zero(vars);
        for i in 0..(self.n - 1) as usize {
            let mut e = vec![0; vars.len()];
            e[2 + i] = 2;
            let c = if (i as u32) < self.t_pos { int(1) } else { int(-1) };
            tail = &tail + &MultiPoly::monomial(vars, e, c);
        }
        tail
    }

    /// The germ polynomial `f`.
    pub fn build_germ(&self) -> Result<MultiPoly, GermError> {
        self.validate()?;
        let vars = self.variables();
        Ok(&self.kind.curve_polynomial(&vars) + &self.quadratic_tail(&vars))
    }

    pub fn code(&self) -> String {
        self.to_string()
    }

    /// Total degree of the germ polynomial.
    pub fn degree(&self) -> u32 {
        match self.kind {
            GermKind::A { k, .. } => k + 1,
            GermKind::D { k, .. } => (k - 1).max(3),
            GermKind::E6 { .. } | GermKind::E7 => 4,
            GermKind::E8 => 5,
        }
    }
}

impl fmt::Display for GermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GermKind::A { k, sign } => write!(f, "A{k}{}", sign.symbol()),
            GermKind::D { k, sign } => write!(f, "D{k}{}", sign.symbol()),
            GermKind::E6 { sign } => write!(f, "E6{}", sign.symbol()),
            GermKind::E7 => write!(f, "E7"),
            GermKind::E8 => write!(f, "E8"),
        }
    }
}

impl fmt::Display for GermDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}s{}n{}", self.kind, self.s, self.n)
    }
}

impl FromStr for GermDescriptor {
    type Err = GermError;

    fn from_str(code: &str) -> Result<Self, GermError> {
        let bad = |reason: &str| GermError::BadCode {
            code: code.to_string(),
            reason: reason.to_string(),
        };
        let s = code.trim();
        let digits = |s: &str| -> (String, usize) {
            let d: String = s.chars().take_while(char::is_ascii_digit).collect();
            let len = d.len();
            (d, len)
        };
        let mut rest = s;
        let family = rest.chars().next().ok_or_else(|| bad("empty code"))?;
        rest = &rest[1..];
        let (num, len) = digits(rest);
        if len == 0 {
            return Err(bad("missing index after family letter"));
        }
        rest = &rest[len..];
        let index: u32 = num.parse().map_err(|_| bad("index out of range"))?;
        let take_sign = |rest: &mut &str| -> Result<Sign, GermError> {
            let sign = match rest.chars().next() {
                Some('+') => Sign::Plus,
                Some('-') => Sign::Minus,
                _ => return Err(bad("missing sign (+ or -)")),
            };
            *rest = &rest[1..];
            Ok(sign)
        };
        let kind = match (family, index) {
            ('A', k) => GermKind::A {
                k,
                sign: take_sign(&mut rest)?,
            },
            ('D', k) => GermKind::D {
                k,
                sign: take_sign(&mut rest)?,
            },
            ('E', 6) => GermKind::E6 {
                sign: take_sign(&mut rest)?,
            },
            ('E', 7) => GermKind::E7,
            ('E', 8) => GermKind::E8,
            ('E', _) => return Err(bad("E family must be E6, E7 or E8")),
            _ => return Err(bad("family must be A, D or E")),
        };
        rest = rest.strip_prefix('s').ok_or_else(|| bad("expected 's<count>'"))?;
        let (sd, len) = digits(rest);
        if len == 0 {
            return Err(bad("missing s count"));
        }
        rest = &rest[len..];
        rest = rest.strip_prefix('n').ok_or_else(|| bad("expected 'n<dim>'"))?;
        let (nd, len) = digits(rest);
        if len == 0 || len != rest.len() {
            return Err(bad("expected 'n<dim>' at the end"));
        }
        let s_count: u32 = sd.parse().map_err(|_| bad("s out of range"))?;
        let n: u32 = nd.parse().map_err(|_| bad("n out of range"))?;
        GermDescriptor::new(kind, n, s_count)
    }
}

impl Serialize for GermDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.code())
    }
}

impl<'de> Deserialize<'de> for GermDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All curve kinds with `k <= k_max`, in catalog order.
pub fn curve_kinds(k_max: u32) -> Vec<GermKind> {
    let mut out = Vec::new();
    for k in 2..=k_max {
        for sign in [Sign::Plus, Sign::Minus] {
            out.push(GermKind::A { k, sign });
        }
    }
    for k in 4..=k_max {
        for sign in [Sign::Plus, Sign::Minus] {
            out.push(GermKind::D { k, sign });
        }
    }
    out.push(GermKind::E6 { sign: Sign::Plus });
    out.push(GermKind::E6 { sign: Sign::Minus });
    out.push(GermKind::E7);
    out.push(GermKind::E8);
    out
}

/// Every valid descriptor with `k <= k_max` and `n <= n_max`, ordered by
/// `n`, then `s`, then curve kind.
pub fn enumerate_catalog(k_max: u32, n_max: u32) -> Vec<GermDescriptor> {
    let kinds = curve_kinds(k_max);
    let mut out = Vec::new();
    for n in 1..=n_max {
        for s in 0..n {
            for &kind in &kinds {
                out.push(GermDescriptor {
                    kind,
                    n,
                    s,
                    t_pos: n - 1 - s,
                });
            }
        }
    }
    out
}

/// `true` when the polynomial vanishes at the origin together with all first
/// partials.
pub fn origin_is_singular(f: &MultiPoly) -> bool {
    let zero = vec![Rational::zero(); f.nvars()];
    let vanishes = |g: &MultiPoly| g.evaluate(&zero).map(|v| v.is_zero()).unwrap_or(false);
    vanishes(f)
        && f.variables()
            .iter()
            .all(|v| f.partial(v).map(|g| vanishes(&g)).unwrap_or(false))
}
