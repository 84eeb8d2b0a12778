//! Left endpoint of the diagonal PSD interval, boundary kernel vectors, and
//! certified extreme roots of real-rooted polynomials.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eulerian::UnivariatePolynomial;
use crate::exact::{int, pow2, serde_rational, serde_rational_vec, to_decimal, to_f64, Enclosure, Rational};
use crate::pencil::{is_psd, DiagonalPencil};

/// Smallest accepted precision in bits.
pub const MIN_PREC: u32 = 16;

/// Default precision in bits.
pub const DEFAULT_PREC: u32 = 128;

/// Search range for the PSD interval: `[-2^SEARCH_BITS, 0]`.
pub const SEARCH_BITS: u32 = 64;

pub fn check_prec(prec: u32) -> Result<()> {
    if prec < MIN_PREC {
        Err(Error::PrecisionTooLow(prec))
    } else {
        Ok(())
    }
}

/// Encloses `x_min = inf { x <= 0 : A0 + x ASum is PSD }` by dyadic bisection.
///
/// The starting bracket depends only on the pencil, so enclosures for
/// increasing `prec` are nested.
pub fn psd_interval_left(p: &DiagonalPencil, prec: u32) -> Result<Enclosure> {
    check_prec(prec)?;
    if !is_psd(&p.a0) {
        return Err(Error::ConstantTermNotPsd);
    }
    let mut hi = Rational::zero();
    let mut lo = -Rational::one();
    let mut bits = 0;
    while is_psd(&p.at(&lo)) {
        hi = lo.clone();
        lo *= int(2);
        bits += 1;
        if bits > SEARCH_BITS {
            return Err(Error::UnboundedBelow { bits: SEARCH_BITS });
        }
    }
    let tol = pow2(-(prec as i64));
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / int(2);
        if is_psd(&p.at(&mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Enclosure::new(lo, hi, prec))
}

/// How a kernel vector was scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Final entry equal to 1.
    LastEntry,
    /// Largest magnitude equal to 1, last nonzero entry positive.
    SupNorm,
}

/// Approximate null vector of `A0 + x ASum` at the midpoint of an enclosure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelVector {
    #[serde(with = "serde_rational_vec")]
    pub entries: Vec<Rational>,
    pub normalization: Normalization,
    /// Kernel dimension looked larger than one.
    pub degenerate: bool,
    /// `|(A0 + x ASum) v|_inf / |v|_inf` at the midpoint.
    #[serde(with = "serde_rational")]
    pub residual: Rational,
    #[serde(with = "serde_rational")]
    pub x: Rational,
    pub prec: u32,
}

impl KernelVector {
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(to_f64).collect()
    }

    pub fn decimal_entries(&self, digits: usize) -> Vec<String> {
        self.entries.iter().map(|r| to_decimal(r, digits)).collect()
    }

    pub fn residual_within(&self, bits: u32) -> bool {
        self.residual <= pow2(-(bits as i64))
    }
}

fn sup_norm(v: &[Rational]) -> Rational {
    v.iter().map(|r| r.abs()).max().unwrap_or_else(Rational::zero)
}

/// Null vector of the pencil at `x.mid()` by symmetric elimination with
/// largest-diagonal pivoting; the smallest pivot marks the kernel direction.
pub fn boundary_kernel_vector(p: &DiagonalPencil, x: &Enclosure, prec: u32) -> Result<KernelVector> {
    check_prec(prec)?;
    let xm = x.mid();
    let m = p.at(&xm);
    let s = m.size();
    let scale = sup_norm(&p.a0.rows().concat()).max(sup_norm(&p.asum.rows().concat()) * xm.abs());
    let tol = scale * pow2(-((prec / 2) as i64));
    let mut a = m.rows();
    let mut active: Vec<usize> = (0..s).collect();
    let mut history: Vec<(usize, Vec<(usize, Rational)>)> = Vec::new();
    let mut tiny = 0usize;
    while !active.is_empty() {
        let p_idx = active
            .iter()
            .copied()
            .max_by(|&i, &j| a[i][i].abs().cmp(&a[j][j].abs()))
            .expect("nonempty");
        if a[p_idx][p_idx].abs() <= tol {
            tiny += active.len();
            break;
        }
        active.retain(|&i| i != p_idx);
        let mults: Vec<(usize, Rational)> = active
            .iter()
            .map(|&r| (r, &a[r][p_idx] / &a[p_idx][p_idx]))
            .collect();
        for &(r, ref l) in &mults {
            if l.is_zero() {
                continue;
            }
            for &c in &active {
                let delta = l * &a[p_idx][c];
                a[r][c] -= delta;
            }
        }
        history.push((p_idx, mults));
    }
    let mut v = vec![Rational::zero(); s];
    match active.iter().max() {
        // remaining block is numerically zero: any of its coordinates is a kernel direction
        Some(&last) => v[last] = Rational::one(),
        None => {
            // all pivots accepted: the final (smallest) one spans the kernel
            let (p_last, _) = history.pop().expect("nonempty matrix");
            v[p_last] = Rational::one();
            tiny = 1;
        }
    }
    for (piv, mults) in history.iter().rev() {
        v[*piv] = -mults.iter().map(|(r, l)| l * &v[*r]).sum::<Rational>();
    }

    let norm = sup_norm(&v);
    let last = v[s - 1].clone();
    let (entries, normalization) = if last.abs() >= &norm * pow2(-((prec / 4) as i64)) && !last.is_zero() {
        (v.iter().map(|e| e / &last).collect::<Vec<_>>(), Normalization::LastEntry)
    } else {
        let sign_ref = v.iter().rev().find(|e| !e.is_zero()).cloned().unwrap_or_else(Rational::one);
        let scale = if sign_ref.is_negative() { -&norm } else { norm.clone() };
        (v.iter().map(|e| e / &scale).collect(), Normalization::SupNorm)
    };
    let residual = sup_norm(&m.mul_vec(&entries)) / sup_norm(&entries);
    Ok(KernelVector {
        entries,
        normalization,
        degenerate: tiny > 1,
        residual,
        x: xm,
        prec,
    })
}

type Poly = Vec<Rational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let q = &r[k] / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[k - db + i] -= &q * bc;
        }
        r = trim(r);
    }
    r
}

fn eval(p: &Poly, x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Sturm chain of a polynomial.
struct Sturm {
    chain: Vec<Poly>,
}

impl Sturm {
    fn new(p: &UnivariatePolynomial) -> Self {
        let p0 = trim(p.coeffs().to_vec());
        let p1 = trim(p.derivative().coeffs().to_vec());
        let mut chain = vec![p0, p1];
        while chain.last().is_some_and(|c| c.len() > 1) {
            let k = chain.len();
            let r: Poly = rem(&chain[k - 2], &chain[k - 1]).into_iter().map(|c| -c).collect();
            if r.is_empty() {
                break;
            }
            chain.push(r);
        }
        Sturm { chain }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut count = 0;
        let mut prev = 0;
        for s in signs.filter(|&s| s != 0) {
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }

    fn at(&self, x: &Rational) -> usize {
        Self::variations(self.chain.iter().map(|p| sign(&eval(p, x))))
    }

    fn at_neg_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let s = sign(p.last().expect("nonzero"));
            if (p.len() - 1) % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    fn at_pos_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| sign(p.last().expect("nonzero"))))
    }
}

/// `1 + max |a_k / a_d|`, a bound on every root's magnitude.
fn cauchy_bound(p: &Poly) -> Rational {
    let lead = p.last().expect("nonzero").abs();
    let m = p[..p.len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Enclosure of the `k`-th smallest real root (1-based) of width at most `2^-prec`.
fn kth_root(p: &Poly, sturm: &Sturm, k: usize, bound: &Rational, prec: u32) -> Enclosure {
    let below = |x: &Rational, v_lo: usize| v_lo - sturm.at(x);
    let mut lo = -bound.clone();
    let mut hi = bound.clone();
    let v_lo = sturm.at(&lo);
    // bisect on counts until (lo, hi] holds exactly the k-th root alone
    loop {
        let (n_lo, n_hi) = (below(&lo, v_lo), below(&hi, v_lo));
        if n_lo == k - 1 && n_hi == k {
            break;
        }
        let mid = (&lo + &hi) / int(2);
        if below(&mid, v_lo) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let tol = pow2(-(prec as i64));
    let s_hi = sign(&eval(p, &hi));
    if s_hi == 0 {
        return Enclosure::exact(hi, prec);
    }
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / int(2);
        let s = sign(&eval(p, &mid));
        if s == 0 {
            return Enclosure::exact(mid, prec);
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Enclosure::new(lo, hi, prec)
}

/// Enclosures of the leftmost and rightmost roots of a polynomial whose
/// roots are real, simple and negative.
pub fn extreme_roots(p: &UnivariatePolynomial, prec: u32) -> Result<(Enclosure, Enclosure)> {
    check_prec(prec)?;
    let degree = p.degree().unwrap_or(0);
    if degree == 0 {
        return Err(Error::NotRealRooted { degree, distinct: 0 });
    }
    let sturm = Sturm::new(p);
    let distinct = sturm.at_neg_inf() - sturm.at_pos_inf();
    if distinct < degree {
        return Err(Error::NotRealRooted { degree, distinct });
    }
    let coeffs = trim(p.coeffs().to_vec());
    if coeffs[0].is_zero() || sturm.at_neg_inf() - sturm.at(&Rational::zero()) != degree {
        return Err(Error::NonNegativeRoot);
    }
    let bound = cauchy_bound(&coeffs);
    let left = kth_root(&coeffs, &sturm, 1, &bound, prec);
    let right = kth_root(&coeffs, &sturm, degree, &bound, prec);
    Ok((left, right))
}
