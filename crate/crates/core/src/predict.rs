//! Poincaré polynomials of the positive and negative Milnor fibres: the
//! closed-form result table, and the rule turning certified Morse data into
//! Betti numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::critical::MorseReport;
use crate::germ::{curve_kinds, enumerate_catalog, GermDescriptor, GermKind, Sign};

/// `Σ b_i u^i` with all stored `b_i > 0`, or the empty space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PoincarePolynomial {
    /// Poincaré polynomial of the empty fibre; printed as `0`.
    Empty,
    /// Nonempty map from degree to Betti number.
    Poly(BTreeMap<u32, u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PredictError {
    #[error("cannot parse Poincaré polynomial '{0}'")]
    Parse(String),
    #[error("report is for {code}, not n = {n}, s = {s}")]
    DescriptorMismatch { code: String, n: u32, s: u32 },
    #[error("Morse report for {0} is not certified")]
    Uncertified(String),
}

impl PoincarePolynomial {
    pub fn constant(c: u64) -> Self {
        Self::from_terms([(0, c)])
    }

    /// `1 + u^e`; equals the constant 2 when `e = 0`.
    pub fn one_plus_u(e: u32) -> Self {
        Self::from_terms([(0, 1), (e, 1)])
    }

    /// Sums coefficients of repeated degrees; all-zero input gives `Empty`.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u64)>) -> Self {
        let mut m = BTreeMap::new();
        for (e, c) in terms {
            *m.entry(e).or_insert(0) += c;
        }
        m.retain(|_, c| *c > 0);
        if m.is_empty() {
            PoincarePolynomial::Empty
        } else {
            PoincarePolynomial::Poly(m)
        }
    }

    pub fn betti(&self, degree: u32) -> u64 {
        match self {
            PoincarePolynomial::Empty => 0,
            PoincarePolynomial::Poly(m) => m.get(&degree).copied().unwrap_or(0),
        }
    }

    /// Total Betti number; 0 for the empty fibre.
    pub fn eval_at_one(&self) -> u64 {
        match self {
            PoincarePolynomial::Empty => 0,
            PoincarePolynomial::Poly(m) => m.values().sum(),
        }
    }

    pub fn is_empty_fibre(&self) -> bool {
        matches!(self, PoincarePolynomial::Empty)
    }

    /// Betti numbers `b_0, .., b_top` (empty vector for the empty fibre).
    pub fn betti_vector(&self) -> Vec<u64> {
        match self {
            PoincarePolynomial::Empty => Vec::new(),
            PoincarePolynomial::Poly(m) => {
                let top = *m.keys().next_back().expect("nonempty");
                (0..=top).map(|d| self.betti(d)).collect()
            }
        }
    }

    /// Inverse of [`Self::betti_vector`].
    pub fn from_betti(b: &[u64]) -> Self {
        Self::from_terms(b.iter().enumerate().map(|(i, &c)| (i as u32, c)))
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let PoincarePolynomial::Poly(m) = self else {
            return write!(f, "0");
        };
        let parts: Vec<String> = m
            .iter()
            .map(|(&e, &c)| match (e, c) {
                (0, c) => c.to_string(),
                (e, 1) => format!("u^{e}"),
                (e, c) => format!("{c}u^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for PoincarePolynomial {
    type Err = PredictError;

    /// Accepts `0`, `EMPTY`, and sums of `c`, `u`, `u^e`, `cu^e`, `c*u^e`.
    fn from_str(s: &str) -> Result<Self, PredictError> {
        let bad = || PredictError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" || compact.eq_ignore_ascii_case("empty") {
            return Ok(PoincarePolynomial::Empty);
        }
        let mut terms = Vec::new();
        for part in compact.split('+') {
            let (coef, rest) = match part.find('u') {
                Some(i) => (&part[..i], Some(&part[i + 1..])),
                None => (part, None),
            };
            let coef = coef.trim_end_matches('*');
            let c: u64 = match (coef, rest) {
                ("", Some(_)) => 1,
                (c, _) => c.parse().map_err(|_| bad())?,
            };
            let e: u32 = match rest {
                None => 0,
                Some("") => 1,
                Some(r) => r
                    .strip_prefix('^')
                    .ok_or_else(bad)?
                    .trim_matches(|c| c == '{' || c == '}')
                    .parse()
                    .map_err(|_| bad())?,
            };
            if c == 0 {
                return Err(bad());
            }
            terms.push((e, c));
        }
        Ok(Self::from_terms(terms))
    }
}

impl Serialize for PoincarePolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PoincarePolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Resolved,
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Table,
    MorseRule,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Resolved => "resolved",
            Status::Unresolved => "unresolved",
        })
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Table => "table",
            Provenance::MorseRule => "morse_rule",
        })
    }
}

/// Betti data of both fibres; both `None` exactly when unresolved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub beta_plus: Option<PoincarePolynomial>,
    pub beta_minus: Option<PoincarePolynomial>,
    pub status: Status,
    pub provenance: Provenance,
}

impl Prediction {
    fn resolved(plus: PoincarePolynomial, minus: PoincarePolynomial, provenance: Provenance) -> Self {
        Prediction {
            beta_plus: Some(plus),
            beta_minus: Some(minus),
            status: Status::Resolved,
            provenance,
        }
    }

    fn unresolved(provenance: Provenance) -> Self {
        Prediction {
            beta_plus: None,
            beta_minus: None,
            status: Status::Unresolved,
            provenance,
        }
    }

    /// Same Betti data and status, ignoring provenance.
    pub fn same_values(&self, other: &Prediction) -> bool {
        self.status == other.status
            && self.beta_plus == other.beta_plus
            && self.beta_minus == other.beta_minus
    }

    /// `"1+u^1, 1+u^2"` or `"unresolved"`.
    pub fn summary(&self) -> String {
        match (&self.beta_plus, &self.beta_minus) {
            (Some(p), Some(m)) => format!("{p}, {m}"),
            _ => "unresolved".to_string(),
        }
    }
}

/// The published values for `d`.
pub fn predict_table(d: &GermDescriptor) -> Prediction {
    use PoincarePolynomial as P;
    let n = d.n;
    let s = d.s;
    let odd = |k: u32| k % 2 == 1;
    let both = |c| Prediction::resolved(P::constant(c), P::constant(c), Provenance::Table);
    let pair = |p, m| Prediction::resolved(p, m, Provenance::Table);
    if n == 1 {
        return match d.kind {
            GermKind::A { k, sign: Sign::Plus } if odd(k) => pair(P::one_plus_u(1), P::Empty),
            GermKind::A { k, sign: Sign::Minus } if odd(k) => both(2),
            GermKind::D { k, sign: Sign::Plus } if odd(k) => both(2),
            GermKind::D { k, sign: Sign::Minus } => both(if odd(k) { 2 } else { 3 }),
            GermKind::E7 => both(2),
            GermKind::A { .. } | GermKind::D { .. } | GermKind::E6 { .. } | GermKind::E8 => both(1),
        };
    }
    let one_index_shape = || pair(P::one_plus_u(n - s - 1), P::one_plus_u(s));
    match d.kind {
        GermKind::A { k, sign: Sign::Minus } | GermKind::D { k, sign: Sign::Plus } => {
            if odd(k) {
                one_index_shape()
            } else {
                both(1)
            }
        }
        GermKind::E7 => one_index_shape(),
        GermKind::E6 { .. } | GermKind::E8 => both(1),
        GermKind::A { k, sign: Sign::Plus } => {
            if odd(k) {
                let minus = if s == 0 { P::Empty } else { P::one_plus_u(s - 1) };
                pair(P::one_plus_u(n - s), minus)
            } else {
                both(1)
            }
        }
        GermKind::D { k, sign: Sign::Minus } => {
            if odd(k) {
                one_index_shape()
            } else {
                Prediction::unresolved(Provenance::Table)
            }
        }
    }
}

/// Betti data from certified Morse data of a morsification in `R^{n+1}`.
///
/// No critical point: both fibres contractible. One point of index `λ`:
/// `(1+u^{n-λ}, 1+u^{λ-1})`, the minus fibre empty when `λ = 0`. Two points,
/// only for curves with both indices 1: `(3, 3)`. Anything else unresolved.
pub fn betti_from_morse(report: &MorseReport, n: u32, s: u32) -> Result<Prediction, PredictError> {
    use PoincarePolynomial as P;
    if (report.germ.n, report.germ.s) != (n, s) {
        return Err(PredictError::DescriptorMismatch {
            code: report.germ.code(),
            n,
            s,
        });
    }
    if !report.certified() {
        return Err(PredictError::Uncertified(report.germ.code()));
    }
    let rule = |p, m| Ok(Prediction::resolved(p, m, Provenance::MorseRule));
    let idx = report.indices();
    match idx.as_slice() {
        [] => rule(P::constant(1), P::constant(1)),
        &[l] if l as u32 <= n => {
            let l = l as u32;
            let minus = if l == 0 { P::Empty } else { P::one_plus_u(l - 1) };
            rule(P::one_plus_u(n - l), minus)
        }
        &[1, 1] if n == 1 => rule(P::constant(3), P::constant(3)),
        _ => Ok(Prediction::unresolved(Provenance::MorseRule)),
    }
}

/// One row of the rendered result tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub schema_version: u32,
    pub germ_code: String,
    pub n: u32,
    pub s: u32,
    pub beta_plus: String,
    pub beta_minus: String,
    pub status: Status,
    pub provenance: Provenance,
}

impl TableRow {
    pub fn new(d: &GermDescriptor, p: &Prediction) -> Self {
        let show = |b: &Option<PoincarePolynomial>| b.as_ref().map(ToString::to_string).unwrap_or_default();
        TableRow {
            schema_version: crate::SCHEMA_VERSION,
            germ_code: d.code(),
            n: d.n,
            s: d.s,
            beta_plus: show(&p.beta_plus),
            beta_minus: show(&p.beta_minus),
            status: p.status,
            provenance: p.provenance,
        }
    }
}

/// Which published table to render.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    /// Curves (`n = 1`).
    Theorem,
    /// Suspensions (`n ≥ 2`).
    Corollary,
    /// Both.
    All,
}

pub fn table_rows(kind: TableKind, k_max: u32, n_max: u32) -> Vec<TableRow> {
    enumerate_catalog(k_max, n_max)
        .into_iter()
        .filter(|d| match kind {
            TableKind::Theorem => d.n == 1,
            TableKind::Corollary => d.n >= 2,
            TableKind::All => true,
        })
        .map(|d| TableRow::new(&d, &predict_table(&d)))
        .collect()
}

pub fn render_csv(rows: &[TableRow]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn render_json(rows: &[TableRow]) -> serde_json::Value {
    serde_json::json!({
        "schema_version": crate::SCHEMA_VERSION,
        "rows": rows,
    })
}

fn family_label(kind: GermKind) -> String {
    match kind {
        GermKind::A { sign, .. } => format!("A_k^{}", sign.symbol()),
        GermKind::D { sign, .. } => format!("D_k^{}", sign.symbol()),
        GermKind::E6 { sign } => format!("E_6^{}", sign.symbol()),
        GermKind::E7 => "E_7".into(),
        GermKind::E8 => "E_8".into(),
    }
}

/// Curve table grouped as published: one line per family and parity of `k`.
pub fn render_theorem_markdown(k_max: u32) -> String {
    let mut groups: Vec<(String, String, Vec<u32>, String, String)> = Vec::new();
    for kind in curve_kinds(k_max) {
        let d = GermDescriptor::curve(kind);
        let p = predict_table(&d);
        let (cond, k) = match kind.k() {
            Some(k) if k % 2 == 0 => ("k even".to_string(), Some(k)),
            Some(k) => ("k odd".to_string(), Some(k)),
            None => (String::new(), None),
        };
        let label = family_label(kind);
        let plus = p.beta_plus.map(|b| b.to_string()).unwrap_or_default();
        let minus = p.beta_minus.map(|b| b.to_string()).unwrap_or_default();
        match groups.iter_mut().find(|g| g.0 == label && g.1 == cond) {
            Some(g) => g.2.extend(k),
            None => groups.push((label, cond, k.into_iter().collect(), plus, minus)),
        }
    }
    let mut out = String::from("| germ | condition | k | β(F⁺) | β(F⁻) |\n|---|---|---|---|---|\n");
    for (label, cond, ks, plus, minus) in groups {
        let ks: Vec<String> = ks.iter().map(ToString::to_string).collect();
        out.push_str(&format!("| {label} | {cond} | {} | {plus} | {minus} |\n", ks.join(", ")));
    }
    out
}

pub fn render_rows_markdown(rows: &[TableRow]) -> String {
    let mut out = String::from(
        "| germ | n | s | β(F⁺) | β(F⁻) | status |\n|---|---|---|---|---|---|\n",
    );
    for r in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} |\n",
            r.germ_code, r.n, r.s, r.beta_plus, r.beta_minus, r.status
        ));
    }
    out
}
