//! Guess-vector linearizations of the diagonal pencil and the bounds they give
//! on the extreme roots of univariate Eulerian polynomials.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eulerian::univariate_eulerian;
use crate::exact::{floor_log2_abs, format_rational, int, pow2, pow_i, ratio, to_decimal, Enclosure, Rational};
use crate::lform::{lform_from_truncation, univariate_lform, Truncation3};
use crate::pencil::{diagonal_pencil_from_lform, DiagonalPencil, SymmetricRationalMatrix};
use crate::spectra::{check_prec, extreme_roots, psd_interval_left};

/// Family of linearizing vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorKind {
    /// `(y, 1, -1, ..., -1)`.
    Old,
    /// `(y, -2^{m-3}, ..., -2, -1, 0, 1/2, 1, ..., 1)` for `n = 2m`.
    New,
    Custom,
}

impl fmt::Display for VectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VectorKind::Old => "old",
            VectorKind::New => "new",
            VectorKind::Custom => "custom",
        })
    }
}

impl FromStr for VectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "old" => Ok(VectorKind::Old),
            "new" => Ok(VectorKind::New),
            "custom" => Ok(VectorKind::Custom),
            _ => Err(Error::Parse(format!("unknown vector kind {s:?}"))),
        }
    }
}

/// A vector in `R^{n+1}` whose first entry may be the free parameter `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessVector {
    pub kind: VectorKind,
    pub n: usize,
    /// `None` stands for the symbol `y`; only the first entry can be symbolic.
    pub entries: Vec<Option<Rational>>,
}

impl GuessVector {
    pub fn custom(first: Option<Rational>, rest: Vec<Rational>) -> Self {
        let n = rest.len();
        let mut entries = vec![first];
        entries.extend(rest.into_iter().map(Some));
        GuessVector {
            kind: VectorKind::Custom,
            n,
            entries,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        self.entries[0].is_none()
    }

    /// Substitutes `y` into the first entry.
    pub fn at(&self, y: &Rational) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|e| e.clone().unwrap_or_else(|| y.clone()))
            .collect()
    }

    pub fn tail(&self) -> Vec<Rational> {
        self.entries[1..]
            .iter()
            .map(|e| e.clone().expect("only the first entry is symbolic"))
            .collect()
    }
}

/// Builds the Old or New vector; `y = None` keeps the first entry symbolic.
pub fn guess_vector(kind: VectorKind, n: usize, y: Option<Rational>) -> Result<GuessVector> {
    let mut entries = vec![y];
    match kind {
        VectorKind::Old => {
            if n >= 1 {
                entries.push(Some(int(1)));
            }
            entries.extend((2..=n).map(|_| Some(int(-1))));
        }
        VectorKind::New => {
            if n % 2 == 1 || n < 4 {
                return Err(Error::NewVectorParity(n));
            }
            let m = n / 2;
            entries.extend((3..=m).map(|i| Some(-pow_i(2, (m - i) as i64))));
            entries.push(Some(int(0)));
            entries.push(Some(ratio(1, 2)));
            entries.extend((1..=m).map(|_| Some(int(1))));
        }
        VectorKind::Custom => {
            return Err(Error::Parse("custom vectors are built with GuessVector::custom".into()))
        }
    }
    debug_assert_eq!(entries.len(), n + 1);
    Ok(GuessVector { kind, n, entries })
}

/// `c2 y^2 + c1 y + c0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticInY {
    #[serde(with = "crate::exact::serde_rational")]
    pub c2: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub c1: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub c0: Rational,
}

impl QuadraticInY {
    pub fn new(c2: Rational, c1: Rational, c0: Rational) -> Self {
        QuadraticInY { c2, c1, c0 }
    }

    pub fn constant(c0: Rational) -> Self {
        QuadraticInY::new(Rational::zero(), Rational::zero(), c0)
    }

    pub fn eval(&self, y: &Rational) -> Rational {
        (&self.c2 * y + &self.c1) * y + &self.c0
    }

    pub fn eval_enclosure(&self, y: &Enclosure) -> Enclosure {
        y.eval_quadratic(&self.c2, &self.c1, &self.c0)
    }

    pub fn derivative_at(&self, y: &Rational) -> Rational {
        int(2) * &self.c2 * y + &self.c1
    }
}

impl fmt::Display for QuadraticInY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} y^2 + {} y + {}",
            format_rational(&self.c2),
            format_rational(&self.c1),
            format_rational(&self.c0)
        )
    }
}

fn quadratic_form_in_y(m: &SymmetricRationalMatrix, v: &GuessVector) -> QuadraticInY {
    let s = m.size();
    if !v.is_symbolic() {
        return QuadraticInY::constant(m.quadratic_form(&v.at(&Rational::zero())));
    }
    let t = v.tail();
    let c2 = m.get(0, 0).clone();
    let c1 = int(2) * (1..s).map(|j| m.get(0, j) * &t[j - 1]).sum::<Rational>();
    let mut c0 = Rational::zero();
    for i in 1..s {
        if t[i - 1].is_zero() {
            continue;
        }
        let row: Rational = (1..s).map(|j| m.get(i, j) * &t[j - 1]).sum();
        c0 += &t[i - 1] * row;
    }
    QuadraticInY::new(c2, c1, c0)
}

/// `D = v^T A0 v` and `N = v^T ASum v` as quadratics in `y`.
pub fn linearized_dn(p: &DiagonalPencil, v: &GuessVector) -> Result<(QuadraticInY, QuadraticInY)> {
    if v.entries.len() != p.size() {
        return Err(Error::DimensionMismatch {
            expected: p.size(),
            got: v.entries.len(),
        });
    }
    Ok((quadratic_form_in_y(&p.a0, v), quadratic_form_in_y(&p.asum, v)))
}

/// `(a, b, c)` with `N'D - ND' = a y^2 + b y + c`; the cubic terms cancel.
pub fn critical_abc(d: &QuadraticInY, n: &QuadraticInY) -> (Rational, Rational, Rational) {
    let a = &n.c2 * &d.c1 - &n.c1 * &d.c2;
    let b = int(2) * (&n.c2 * &d.c0 - &n.c0 * &d.c2);
    let c = &n.c1 * &d.c0 - &n.c0 * &d.c1;
    (a, b, c)
}

/// Enclosure of `(-b + sign * sqrt(b^2 - 4ac)) / (2a)` with the root computed to `bits`.
fn radical_root(a: &Rational, b: &Rational, disc: &Rational, sign: i8, bits: u32) -> Enclosure {
    let s = Enclosure::sqrt(disc, bits);
    let s = if sign < 0 { s.neg() } else { s };
    Enclosure::exact(-b, bits).add(&s).scale(&(int(1) / (int(2) * a)))
}

fn checked_disc(a: &Rational, b: &Rational, c: &Rational) -> Result<Rational> {
    if a.is_zero() {
        return Err(Error::DegenerateOptimizer);
    }
    let disc = b * b - int(4) * a * c;
    if disc.is_negative() {
        return Err(Error::NegativeDiscriminant {
            a: format_rational(a),
            b: format_rational(b),
            c: format_rational(c),
        });
    }
    Ok(disc)
}

/// Extra bits so that dividing by `2a` still leaves width `2^-prec`.
fn bits_for(a: &Rational, prec: u32) -> u32 {
    let shrink = (-floor_log2_abs(&(int(2) * a))).max(0) as u32;
    prec + shrink + 2
}

/// Optimal `y` from the critical-point quadratic of `(D, N)`.
///
/// `Old` takes `(-b - sqrt(b^2 - 4ac)) / (2a)`. `New` takes `(b + sqrt(b^2 - 4ac)) / (2a)`,
/// and expects `(D, N)` of the Old vector of the same `n`.
pub fn optimal_y(kind: VectorKind, d: &QuadraticInY, n: &QuadraticInY, prec: u32) -> Result<Enclosure> {
    check_prec(prec)?;
    let (a, b, c) = critical_abc(d, n);
    let disc = checked_disc(&a, &b, &c)?;
    let y = radical_root(&a, &b, &disc, -1, bits_for(&a, prec));
    Ok(match kind {
        VectorKind::New => y.neg(),
        _ => y,
    })
}

fn old_quadratics(p: &DiagonalPencil, n: usize) -> Result<(QuadraticInY, QuadraticInY)> {
    linearized_dn(p, &guess_vector(VectorKind::Old, n, None)?)
}

/// Printed closed forms of `D` and `N` at a rational `y`; for `New`, `n = 2m`.
pub fn closed_form_dn(kind: VectorKind, n: usize, y: &Rational) -> Result<(Rational, Rational)> {
    match kind {
        VectorKind::Old => Ok(old_closed_form(n as i64, y)),
        VectorKind::New if n % 2 == 0 && n >= 4 => Ok(new_closed_form((n / 2) as i64, y)),
        VectorKind::New => Err(Error::NewVectorParity(n)),
        VectorKind::Custom => Err(Error::Parse("no closed form for custom vectors".into())),
    }
}

fn old_closed_form(n: i64, y: &Rational) -> (Rational, Rational) {
    let p = pow_i;
    let nn = int(n);
    let y2 = y * y;
    let d = int(10) - p(2, 2 + n) + p(2, 2 + 2 * n) - int(2) * p(3, 1 + n) + &nn + int(4) * y
        - p(2, 1 + n) * y
        + &nn * y
        + y * (int(4) - p(2, 1 + n) + &nn + &nn * y);
    let t = ratio(1, 3);
    let s = ratio(1, 7);
    let nv = int(-10) + p(2, 3 + n) - &t * p(2, 3 + 2 * n) - &t * p(2, 4 + 2 * n)
        + &s * p(2, 4 + 3 * n)
        + &s * p(2, 5 + 3 * n)
        + int(2) * p(3, n)
        - int(4) * p(3, 1 + n)
        + int(2) * p(3, 2 + n)
        - ratio(1, 5) * p(2, 1 + n) * p(3, 3 + n)
        - p(4, 1 + n)
        + p(4, 2 + n)
        - p(6, 2 + n) / int(5)
        + p(8, 1 + n) / int(7)
        - &nn
        - int(8) * y
        - p(2, 2 + n) * y
        + p(2, 3 + n) * y
        - &t * p(2, 3 + 2 * n) * y
        - &t * p(2, 4 + 2 * n) * y
        + int(4) * p(3, 1 + n) * y
        - int(2) * &nn * y
        - int(2) * &y2
        + p(2, 1 + n) * &y2
        - &nn * &y2;
    (d, nv)
}

fn new_closed_form(m: i64, y: &Rational) -> (Rational, Rational) {
    let p = pow_i;
    let mm = int(m);
    let m2 = &mm * &mm;
    let y2 = y * y;
    let d = -ratio(1, 12) + p(2, 3 * m) + p(2, 2 + m) + int(5) * p(2, -3 + 2 * m) - int(7) * p(2, -1 + 2 * m)
        + int(3) * p(2, 1 + 3 * m)
        - p(2, 3 + 3 * m)
        + ratio(1, 3) * p(2, 2 + 4 * m)
        + ratio(1, 3) * p(2, 3 + 4 * m)
        - int(2) * p(3, -1 + m)
        - p(2, 4 + m) * p(3, -1 + m)
        + p(3, m)
        - p(2, 1 + m) * p(3, m)
        - p(3, 1 + m)
        + p(2, 2 + m) * p(3, 1 + m)
        - int(2) * p(3, 1 + 2 * m)
        - int(11) * p(4, -2 + m) / int(3)
        + &mm
        - p(2, 3 * m) * &mm
        - int(5) * p(2, -4 + 2 * m) * &mm
        - p(2, -3 + 2 * m) * &mm
        + p(2, -1 + 2 * m) * &mm
        + p(4, -2 + m) * &mm
        + p(2, -4 + 2 * m) * &m2
        + (int(-3) + p(2, -1 + m) + p(2, 1 + m) - p(2, 2 + m) + p(2, 2 + 2 * m)
            - int(2) * &mm
            - p(2, -1 + m) * &mm)
            * y
        + int(2) * &mm * &y2;
    let nv = ratio(1, 12) + p(2, 2 * m) - p(2, 3 * m) + int(5) * p(2, 4 * m) - p(2, 2 + m)
        + ratio(11, 3) * p(2, -4 + 2 * m)
        - int(5) * p(2, -3 + 2 * m)
        - int(7) * p(2, -1 + 2 * m)
        + int(3) * p(2, 1 + 2 * m)
        + int(9) * p(2, -3 + 3 * m)
        - int(47) * p(2, -2 + 3 * m)
        + int(3) * p(2, -1 + 3 * m)
        - p(2, 2 + 3 * m)
        - ratio(1, 7) * p(2, 3 + 3 * m)
        + ratio(1, 7) * p(2, 4 + 3 * m)
        + ratio(5, 7) * p(2, 5 + 3 * m)
        - ratio(27, 5) * p(2, -3 + 4 * m)
        + int(5) * p(2, -1 + 4 * m)
        - p(2, 1 + 4 * m)
        + p(2, 1 + 5 * m)
        + int(3) * p(2, 2 + 5 * m)
        - p(2, 4 + 5 * m)
        + ratio(1, 7) * p(2, 3 + 6 * m)
        + ratio(1, 3) * p(2, 4 + 6 * m)
        + ratio(1, 21) * p(2, 5 + 6 * m)
        + int(2) * p(3, -1 + m)
        - int(11) * p(2, 2 * m) * p(3, -1 + m)
        - ratio(1, 5) * p(2, 3 + m) * p(3, -1 + m)
        + p(2, 4 + m) * p(3, -1 + m)
        + int(13) * p(2, 2 + 2 * m) * p(3, -1 + m)
        - p(2, 5 + 3 * m) * p(3, -1 + m)
        - p(3, m)
        - p(2, -1 + m) * p(3, m)
        + p(2, 1 + m) * p(3, m)
        + int(7) * p(2, -1 + 2 * m) * p(3, m)
        - p(2, 2 + 3 * m) * p(3, m)
        + p(3, 1 + m)
        - p(2, 2 + m) * p(3, 1 + m)
        - p(2, 3 + 2 * m) * p(3, 1 + m)
        + p(2, 3 + 3 * m) * p(3, 1 + m)
        - p(2, 1 + 2 * m) * p(3, 2 + m)
        + p(2, -2 + 2 * m) * p(3, 3 + m)
        + int(4) * p(3, 1 + 2 * m)
        - p(2, m) * p(3, 1 + 2 * m)
        - p(2, 1 + m) * p(3, 1 + 2 * m)
        + p(2, 2 + m) * p(3, 1 + 2 * m)
        - ratio(1, 5) * p(2, 2 + 2 * m) * p(3, 1 + 2 * m)
        + p(6, m)
        - p(6, 1 + m)
        - ratio(13, 5) * p(6, 1 + 2 * m)
        - &mm
        - p(2, 2 * m) * &mm
        + p(2, 3 * m) * &mm
        + int(5) * p(2, -3 + 2 * m) * &mm
        + p(2, -2 + 2 * m) * &mm
        - int(5) * p(2, -2 + 4 * m) * &mm
        - p(2, -1 + 4 * m) * &mm
        + p(2, 1 + 4 * m) * &mm
        - p(2, 1 + 5 * m) * &mm
        + p(2, 1 + 2 * m) * p(3, -1 + m) * &mm
        + p(2, -2 + 2 * m) * p(3, m) * &mm
        - p(2, -1 + 2 * m) * p(3, 1 + m) * &mm
        + p(2, -1 + m) * p(3, 1 + 2 * m) * &mm
        - p(2, -4 + 2 * m) * &m2
        + p(2, -3 + 4 * m) * &m2
        + y * (int(3) - int(3) * p(2, -1 + m) + p(2, m) + int(5) * p(2, 3 * m) + p(2, 1 + m)
            - p(2, 2 + 2 * m)
            + p(2, 1 + 3 * m)
            - p(2, 3 + 3 * m)
            + p(2, 3 + 4 * m)
            - p(2, 4 + m) * p(3, -1 + m)
            - p(2, 1 + m) * p(3, m)
            + p(2, 2 + m) * p(3, 1 + m)
            - int(4) * p(3, 1 + 2 * m)
            + int(2) * &mm
            + p(2, -1 + m) * &mm
            - p(2, 3 * m) * &mm)
        + &y2 * (int(-2) + p(2, 1 + 2 * m) - int(2) * &mm);
    (d, nv)
}

/// The 2x2 pencil of the univariate relaxation of `A_n`.
pub fn univariate_pencil(n: usize) -> DiagonalPencil {
    let coeffs = univariate_eulerian(n);
    let [l0, l1, l2, l3] = univariate_lform(n, coeffs.coeffs());
    let a0 = SymmetricRationalMatrix::from_fn(2, |r, c| [&l0, &l1, &l2][r + c].clone());
    let a1 = SymmetricRationalMatrix::from_fn(2, |r, c| [&l1, &l2, &l3][r + c].clone());
    DiagonalPencil::new(a0, a1).expect("both 2x2")
}

/// `un(n) = 1 / |x_min|` for the univariate 2x2 pencil of `A_n`.
pub fn univariate_bound(n: usize, prec: u32) -> Result<Enclosure> {
    check_prec(prec)?;
    let p = univariate_pencil(n);
    let (l0, l1) = (p.a0.get(0, 0).clone(), p.a0.get(0, 1).clone());
    let (l2, l3) = (p.a0.get(1, 1).clone(), p.asum.get(1, 1).clone());
    // det(A0 + x A1) = A x^2 + B x + C
    let a = &l1 * &l3 - &l2 * &l2;
    let b = &l0 * &l3 - &l1 * &l2;
    let c = &l0 * &l2 - &l1 * &l1;
    let x_min = if a.is_zero() {
        if b.is_zero() {
            // det vanishes identically
            psd_interval_left(&p, prec + 8)?
        } else {
            Enclosure::exact(-&c / &b, prec)
        }
    } else {
        let disc = checked_disc(&a, &b, &c)?;
        // largest root
        let sign = if a.is_positive() { 1 } else { -1 };
        let mut bits = bits_for(&a, prec);
        loop {
            let x = radical_root(&a, &b, &disc, sign, bits);
            if !x.certainly_negative() {
                return Err(Error::NonNegativeRoot);
            }
            let un = x.neg().recip().expect("negative");
            if un.width_at_most_bits(prec) {
                break x;
            }
            bits += 32;
        }
    };
    if x_min.is_exact() && x_min.lo.is_zero() {
        return Err(Error::NonNegativeRoot);
    }
    let un = x_min.neg().recip().ok_or(Error::NonNegativeRoot)?;
    Ok(Enclosure { prec, ..un })
}

/// How the first vector entry is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum YPolicy {
    /// The closed-form critical point (Old branch reused for New).
    Paper,
    /// Best critical point of the vector's own ratio `N/D`.
    NumericOptimal,
    Given(#[serde(with = "crate::exact::serde_rational")] Rational),
}

impl fmt::Display for YPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YPolicy::Paper => f.write_str("paper"),
            YPolicy::NumericOptimal => f.write_str("numeric-optimal"),
            YPolicy::Given(y) => write!(f, "given:{}", format_rational(y)),
        }
    }
}

/// `D`, `N` and the derived bounds at one choice of `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linearization {
    pub y: Enclosure,
    pub d: Enclosure,
    pub n: Enclosure,
    /// `-D/N`, a lower bound on the left PSD endpoint.
    pub lin_bound: Enclosure,
    /// `N/D`, a lower bound on `|q_left|`.
    pub mult: Enclosure,
}

fn linearize_at(d: &QuadraticInY, n: &QuadraticInY, y: Enclosure) -> Result<Linearization> {
    let de = d.eval_enclosure(&y);
    let ne = n.eval_enclosure(&y);
    if !de.certainly_positive() || !ne.certainly_positive() {
        return Err(Error::NoAdmissibleOptimum(format!(
            "D = {de:?}, N = {ne:?} not both positive at y = {y:?}"
        )));
    }
    let mult = ne.div(&de).expect("positive");
    let lin_bound = de.div(&ne).expect("positive").neg();
    Ok(Linearization {
        y,
        d: de,
        n: ne,
        lin_bound,
        mult,
    })
}

/// Re-evaluates with finer roots until `mult` and `y` have width `2^-prec`.
fn refine(
    d: &QuadraticInY,
    n: &QuadraticInY,
    prec: u32,
    start_bits: u32,
    y_at: impl Fn(u32) -> Enclosure,
) -> Result<Linearization> {
    let mut bits = start_bits;
    loop {
        let lin = linearize_at(d, n, y_at(bits))?;
        if (lin.mult.width_at_most_bits(prec) && lin.y.width_at_most_bits(prec)) || bits > start_bits + 8192 {
            return Ok(lin);
        }
        bits += 64;
    }
}

fn vector_for(kind: VectorKind, n: usize) -> Result<GuessVector> {
    guess_vector(kind, n, None)
}

/// Linearization of `kind` at the closed-form `y`.
pub fn paper_linearization(p: &DiagonalPencil, kind: VectorKind, n: usize, prec: u32) -> Result<Linearization> {
    check_prec(prec)?;
    let (od, on) = old_quadratics(p, n)?;
    let (a, b, c) = critical_abc(&od, &on);
    let disc = checked_disc(&a, &b, &c)?;
    let (d, nq) = linearized_dn(p, &vector_for(kind, n)?)?;
    let flip = kind == VectorKind::New;
    refine(&d, &nq, prec, bits_for(&a, prec), |bits| {
        let y = radical_root(&a, &b, &disc, -1, bits);
        let y = if flip { y.neg() } else { y };
        Enclosure { prec, ..y }
    })
}

/// Maximizes `N/D` over `y` using both critical points of the vector's own ratio.
pub fn optimal_linearization(p: &DiagonalPencil, kind: VectorKind, n: usize, prec: u32) -> Result<Linearization> {
    check_prec(prec)?;
    let (d, nq) = linearized_dn(p, &vector_for(kind, n)?)?;
    let (a, b, c) = critical_abc(&d, &nq);
    let disc = checked_disc(&a, &b, &c)?;
    let mut best: Option<Linearization> = None;
    for sign in [-1i8, 1] {
        let cand = refine(&d, &nq, prec, bits_for(&a, prec), |bits| {
            Enclosure { prec, ..radical_root(&a, &b, &disc, sign, bits) }
        });
        if let Ok(lin) = cand {
            if best.as_ref().is_none_or(|b| b.mult.cmp_mid(&lin.mult).is_lt()) {
                best = Some(lin);
            }
        }
    }
    let best = best.ok_or_else(|| Error::NoAdmissibleOptimum("no critical point with D, N > 0".into()))?;
    // N/D tends to N.c2 / D.c2 as |y| grows
    if d.c2.is_positive() {
        let asymptote = &nq.c2 / &d.c2;
        if asymptote > best.mult.hi {
            return Err(Error::NoAdmissibleOptimum(format!(
                "supremum {} approached only as |y| grows",
                format_rational(&asymptote)
            )));
        }
    }
    Ok(best)
}

/// Linearization at an explicit rational `y`.
pub fn given_linearization(p: &DiagonalPencil, kind: VectorKind, n: usize, y: &Rational, prec: u32) -> Result<Linearization> {
    let (d, nq) = linearized_dn(p, &vector_for(kind, n)?)?;
    linearize_at(&d, &nq, Enclosure::exact(y.clone(), prec))
}

/// `(y*, N/D at y*)` maximizing the linearized bound of `kind`.
pub fn optimize_y_numeric(n: usize, kind: VectorKind, prec: u32) -> Result<(Enclosure, Enclosure)> {
    let p = eulerian_diagonal_pencil(n);
    let lin = optimal_linearization(&p, kind, n, prec)?;
    Ok((lin.y, lin.mult))
}

/// Diagonal pencil of `A_n(x, 1)`.
pub fn eulerian_diagonal_pencil(n: usize) -> DiagonalPencil {
    let l = lform_from_truncation(&Truncation3::eulerian(n));
    diagonal_pencil_from_lform(&l).expect("table is total")
}

/// Everything about `A_n` that does not depend on the vector.
#[derive(Debug, Clone)]
pub struct EulerianInstance {
    pub n: usize,
    pub prec: u32,
    pub pencil: DiagonalPencil,
    pub x_min: Enclosure,
    pub q_left: Enclosure,
    pub q_right: Enclosure,
    pub un: Enclosure,
}

impl EulerianInstance {
    pub fn new(n: usize, prec: u32) -> Result<Self> {
        check_prec(prec)?;
        let pencil = eulerian_diagonal_pencil(n);
        let x_min = psd_interval_left(&pencil, prec)?;
        let (q_left, q_right) = extreme_roots(&univariate_eulerian(n), prec)?;
        let un = univariate_bound(n, prec)?;
        Ok(EulerianInstance {
            n,
            prec,
            pencil,
            x_min,
            q_left,
            q_right,
            un,
        })
    }

    pub fn linearization(&self, kind: VectorKind, policy: &YPolicy) -> Result<Linearization> {
        match policy {
            YPolicy::Paper => paper_linearization(&self.pencil, kind, self.n, self.prec),
            YPolicy::NumericOptimal => optimal_linearization(&self.pencil, kind, self.n, self.prec),
            YPolicy::Given(y) => given_linearization(&self.pencil, kind, self.n, y, self.prec),
        }
    }

    pub fn report(&self, kind: VectorKind, policy: &YPolicy) -> Result<BoundReport> {
        let lin = self.linearization(kind, policy)?;
        Ok(BoundReport {
            n: self.n,
            kind,
            y_policy: policy.clone(),
            diff: lin.mult.sub(&self.un),
            y: lin.y,
            d: lin.d,
            n_value: lin.n,
            lin_bound: lin.lin_bound,
            mult: lin.mult,
            x_min: self.x_min.clone(),
            q_left: self.q_left.clone(),
            q_right: self.q_right.clone(),
            un: self.un.clone(),
        })
    }
}

/// Every bound for one `n` and one vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub kind: VectorKind,
    pub y_policy: YPolicy,
    pub y: Enclosure,
    #[serde(rename = "D")]
    pub d: Enclosure,
    #[serde(rename = "N")]
    pub n_value: Enclosure,
    /// `-D/N`.
    pub lin_bound: Enclosure,
    /// `N/D`.
    pub mult: Enclosure,
    pub x_min: Enclosure,
    pub q_left: Enclosure,
    pub q_right: Enclosure,
    pub un: Enclosure,
    /// `mult - un`.
    pub diff: Enclosure,
}

/// Digits after the decimal point in the `D` and `N` CSV columns.
pub const CSV_DECIMALS: usize = 30;

impl BoundReport {
    pub const CSV_HEADER: [&'static str; 20] = [
        "n", "kind", "y_lo", "y_hi", "D", "N", "lin_bound_lo", "lin_bound_hi", "xmin_lo", "xmin_hi",
        "q_right_lo", "q_right_hi", "q_left_lo", "q_left_hi", "un_lo", "un_hi", "diff_lo", "diff_hi",
        "mult_lo", "mult_hi",
    ];

    /// One CSV row: exact `p/q` endpoints; `D` and `N` are exact when `y` is,
    /// otherwise midpoints with [`CSV_DECIMALS`] decimals.
    pub fn csv_row(&self) -> Vec<String> {
        let mid = |e: &Enclosure| {
            if e.is_exact() {
                format_rational(&e.lo)
            } else {
                to_decimal(&e.mid(), CSV_DECIMALS)
            }
        };
        let f = format_rational;
        vec![
            self.n.to_string(),
            self.kind.to_string(),
            f(&self.y.lo),
            f(&self.y.hi),
            mid(&self.d),
            mid(&self.n_value),
            f(&self.lin_bound.lo),
            f(&self.lin_bound.hi),
            f(&self.x_min.lo),
            f(&self.x_min.hi),
            f(&self.q_right.lo),
            f(&self.q_right.hi),
            f(&self.q_left.lo),
            f(&self.q_left.hi),
            f(&self.un.lo),
            f(&self.un.hi),
            f(&self.diff.lo),
            f(&self.diff.hi),
            f(&self.mult.lo),
            f(&self.mult.hi),
        ]
    }

    /// `-D/N <= x_min <= q_right < 0`, allowing enclosures to overlap.
    pub fn soundness_holds(&self) -> bool {
        self.lin_bound.possibly_le(&self.x_min)
            && self.x_min.possibly_le(&self.q_right)
            && self.q_right.certainly_negative()
    }

    /// `N/D <= |q_left|`, allowing enclosures to overlap.
    pub fn abs_soundness_holds(&self) -> bool {
        self.mult.possibly_le(&self.q_left.neg())
    }
}

/// Fills a [`BoundReport`] for `A_n`.
pub fn bound_report(n: usize, kind: VectorKind, policy: &YPolicy, prec: u32) -> Result<BoundReport> {
    if kind == VectorKind::New && (n % 2 == 1 || n < 4) {
        return Err(Error::NewVectorParity(n));
    }
    EulerianInstance::new(n, prec)?.report(kind, policy)
}

/// `mult - un` at the closed-form `y`, skipping the PSD interval and roots.
pub fn separation(n: usize, kind: VectorKind, prec: u32) -> Result<Enclosure> {
    let p = eulerian_diagonal_pencil(n);
    let lin = paper_linearization(&p, kind, n, prec)?;
    Ok(lin.mult.sub(&univariate_bound(n, prec)?))
}

/// Threshold helper: `2^-bits` as a rational.
pub fn tolerance(bits: u32) -> Rational {
    pow2(-(bits as i64))
}
