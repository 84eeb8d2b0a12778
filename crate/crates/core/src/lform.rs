//! The linear form `L_p` on monomials of degree at most 3.
//!
//! `L_p(1) = deg p` and, for nonconstant monomials, `L_p` reads off the
//! coefficients of `-log p(-x)` rescaled to power sums.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eulerian::{indices_of, multivariate_eulerian_truncated, MultiAffinePolynomial};
use crate::exact::{int, pow_i, ratio, Rational};

/// A monomial `x_{i_1} ... x_{i_k}` stored as its sorted 1-based index multiset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        Monomial(v)
    }

    /// `x_i`, or `1` for `i = 0` (the mold matrix's constant slot).
    pub fn var_or_one(i: usize) -> Self {
        if i == 0 {
            Monomial::one()
        } else {
            Monomial(vec![i])
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Checks that all indices lie in `1..=n` and the degree is at most 3.
    pub fn check(&self, n: usize) -> Result<()> {
        if self.degree() > 3 || self.0.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::InvalidMonomial {
                n,
                indices: self.0.clone(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut k = 0;
        while k < self.0.len() {
            let i = self.0[k];
            let e = self.0[k..].iter().take_while(|&&j| j == i).count();
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
            k += e;
        }
        Ok(())
    }
}

/// Every monomial of degree at most 3 in `n` variables, in sorted order.
pub fn monomials_up_to_degree3(n: usize) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for i in 1..=n {
        out.push(Monomial(vec![i]));
        for j in i..=n {
            out.push(Monomial(vec![i, j]));
            for k in j..=n {
                out.push(Monomial(vec![i, j, k]));
            }
        }
    }
    out.sort();
    out
}

/// Degree-3 truncation `1 + sum a_i x_i + sum a_ij x_i x_j + sum a_ijk x_i x_j x_k`
/// of a polynomial of total degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation3 {
    n: usize,
    degree: usize,
    coeffs: BTreeMap<Monomial, Rational>,
}

impl Truncation3 {
    /// Coefficients of the nonconstant monomials; missing entries are zero.
    pub fn new(n: usize, degree: usize, coeffs: BTreeMap<Monomial, Rational>) -> Result<Self> {
        for m in coeffs.keys() {
            m.check(n)?;
            if m.degree() == 0 {
                return Err(Error::InvalidMonomial { n, indices: vec![] });
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Truncation3 { n, degree, coeffs })
    }

    /// Truncates a multi-affine polynomial with constant term 1.
    pub fn from_multi_affine(p: &MultiAffinePolynomial, degree: usize) -> Self {
        let coeffs = p
            .terms()
            .filter(|(mask, _)| (1..=3).contains(&mask.count_ones()))
            .map(|(mask, c)| (Monomial::new(indices_of(mask)), Rational::from(c.clone())))
            .collect();
        Truncation3 {
            n: p.n(),
            degree,
            coeffs,
        }
    }

    /// Truncation of `A_n(x, 1)`, which has total degree `n`.
    pub fn eulerian(n: usize) -> Self {
        Truncation3::from_multi_affine(&multivariate_eulerian_truncated(n, 3), n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn a(&self, indices: &[usize]) -> Rational {
        self.coeffs
            .get(&Monomial::new(indices.iter().copied()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

/// Exact values of `L_p` on every monomial of degree at most 3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LFormTable {
    n: usize,
    #[serde(with = "table_serde")]
    values: BTreeMap<Monomial, Rational>,
}

mod table_serde {
    use super::*;
    use crate::exact::{format_rational, parse_rational};
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        monomial: Vec<usize>,
        value: String,
    }

    pub fn serialize<S: Serializer>(
        v: &BTreeMap<Monomial, Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = v
            .iter()
            .map(|(m, r)| Entry {
                monomial: m.0.clone(),
                value: format_rational(r),
            })
            .collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<Monomial, Rational>, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        entries
            .into_iter()
            .map(|e| {
                parse_rational(&e.value)
                    .map(|r| (Monomial::new(e.monomial), r))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl LFormTable {
    /// Builds a table, rejecting anything that is not total over degree-3 monomials.
    pub fn new(n: usize, values: BTreeMap<Monomial, Rational>) -> Result<Self> {
        for m in monomials_up_to_degree3(n) {
            if !values.contains_key(&m) {
                return Err(Error::IncompleteLForm(m.to_string()));
            }
        }
        for m in values.keys() {
            m.check(n)?;
        }
        Ok(LFormTable { n, values })
    }

    /// Builds a possibly partial table; lookups of missing entries fail later.
    pub fn new_partial(n: usize, values: BTreeMap<Monomial, Rational>) -> Self {
        LFormTable { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, m: &Monomial) -> Result<&Rational> {
        self.values
            .get(m)
            .ok_or_else(|| Error::IncompleteLForm(m.to_string()))
    }

    pub fn value(&self, indices: &[usize]) -> Result<&Rational> {
        self.get(&Monomial::new(indices.iter().copied()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Evaluates the degree-3 identities for `L_p` from a truncation.
pub fn lform_from_truncation(t: &Truncation3) -> LFormTable {
    let mut values = BTreeMap::new();
    for m in monomials_up_to_degree3(t.n) {
        let v = lform_value(t, m.indices());
        values.insert(m, v);
    }
    LFormTable { n: t.n, values }
}

fn lform_value(t: &Truncation3, idx: &[usize]) -> Rational {
    let a = |s: &[usize]| t.a(s);
    match *idx {
        [] => int(t.degree as i64),
        [i] => a(&[i]),
        [i, j] if i == j => -int(2) * a(&[i, i]) + a(&[i]) * a(&[i]),
        [i, j] => -a(&[i, j]) + a(&[i]) * a(&[j]),
        [i, j, k] if i == j && j == k => {
            int(3) * a(&[i, i, i]) - int(3) * a(&[i]) * a(&[i, i]) + a(&[i]).pow(3)
        }
        [i, j, k] if i == j => mixed_cubic(&a, i, k),
        [i, j, k] if j == k => mixed_cubic(&a, j, i),
        [i, j, k] => {
            (a(&[i, j, k]) - a(&[i]) * a(&[j, k]) - a(&[j]) * a(&[i, k]) - a(&[k]) * a(&[i, j])
                + int(2) * a(&[i]) * a(&[j]) * a(&[k]))
                / int(2)
        }
        _ => unreachable!("degree above 3"),
    }
}

/// `L(x_s^2 x_o)` for the squared index `s` and the other index `o`.
fn mixed_cubic(a: &impl Fn(&[usize]) -> Rational, s: usize, o: usize) -> Rational {
    a(&[s, s, o]) - a(&[s]) * a(&[s, o]) - a(&[o]) * a(&[s, s]) + a(&[s]) * a(&[s]) * a(&[o])
}

fn p2(e: i64) -> Rational {
    pow_i(2, e)
}

fn p3(e: i64) -> Rational {
    pow_i(3, e)
}

/// Closed forms of `L_p` for `p = A_n(x, 1)`.
pub fn eulerian_lform(n: usize, m: &Monomial) -> Result<Rational> {
    m.check(n)?;
    let idx: Vec<i64> = m.indices().iter().map(|&i| i as i64).collect();
    Ok(match *idx.as_slice() {
        [] => int(n as i64),
        [i] => p2(i) - int(1),
        [i, j] if i == j => (p2(i) - int(1)).pow(2),
        [i, j] => p2(i + j) - p2(j - i) * p3(i),
        [i, j, k] if i == j && j == k => (p2(i) - int(1)).pow(3),
        // squared index below the other one
        [i, j, k] if i == j => square_below(i, k),
        // squared index above the other one
        [i, j, k] if j == k => square_above(j, i),
        [i, j, k] => {
            p2(i + j + k) - p2(j + k - i) * p3(i) - p2(-2 + (i + 1) - (j + 1) + (k + 1)) * p3(j)
                + p2(-3 + 2 * (i + 1) - (j + 1) + (k + 1)) * p3(j - i)
        }
        _ => unreachable!("checked degree"),
    })
}

/// `x_i^2 x_j` with `i < j`.
fn square_below(i: i64, j: i64) -> Rational {
    ratio(1, 3) * p2(-3 + j - i) * (int(-2) + p2(i + 1)) * (int(-4) * p3(i + 1) + int(3) * pow_i(4, i + 1))
}

/// `x_i^2 x_j` with `j < i`.
fn square_above(i: i64, j: i64) -> Rational {
    ratio(1, 3) * p2(-3 + i - j) * (int(-2) + p2(i + 1)) * (int(-4) * p3(j + 1) + int(3) * pow_i(4, j + 1))
}

/// Full table of the Eulerian closed forms.
pub fn eulerian_lform_table(n: usize) -> LFormTable {
    let values = monomials_up_to_degree3(n)
        .into_iter()
        .map(|m| {
            let v = eulerian_lform(n, &m).expect("generated monomials are valid");
            (m, v)
        })
        .collect();
    LFormTable { n, values }
}

/// One monomial where the closed form and the truncation disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LFormDiscrepancy {
    pub monomial: Monomial,
    pub closed_form: Rational,
    pub truncation: Rational,
}

impl LFormDiscrepancy {
    /// `closed_form - truncation`.
    pub fn difference(&self) -> Rational {
        &self.closed_form - &self.truncation
    }
}

/// Compares the closed forms against the truncation-derived values for `A_n`.
/// The truncation value is normative; an empty result means exact agreement.
pub fn lform_discrepancies(n: usize) -> Vec<LFormDiscrepancy> {
    let generic = lform_from_truncation(&Truncation3::eulerian(n));
    let closed = eulerian_lform_table(n);
    generic
        .iter()
        .filter_map(|(m, t)| {
            let c = closed.get(m).expect("same monomial set");
            (c != t).then(|| LFormDiscrepancy {
                monomial: m.clone(),
                closed_form: c.clone(),
                truncation: t.clone(),
            })
        })
        .collect()
}

/// `L_p` on the univariate polynomial `sum a_k x^k` for powers `0..=3`.
pub fn univariate_lform(degree: usize, coeffs: &[Rational]) -> [Rational; 4] {
    let a = |k: usize| coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
    let (a1, a2, a3) = (a(1), a(2), a(3));
    [
        int(degree as i64),
        a1.clone(),
        -int(2) * &a2 + &a1 * &a1,
        int(3) * a3 - int(3) * &a1 * &a2 + a1.pow(3),
    ]
}

/// True when every entry is an integer.
pub fn is_integral(r: &Rational) -> bool {
    r.denom() == &BigInt::one()
}
