//! Linear matrix pencils built from an L-form table, their diagonal
//! restriction, and exact PSD certification.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};
use crate::lform::{LFormTable, Monomial};

/// Dense symmetric matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct SymmetricRationalMatrix {
    size: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for SymmetricRationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows_as_strings()).finish()
    }
}

impl SymmetricRationalMatrix {
    pub fn zeros(size: usize) -> Self {
        SymmetricRationalMatrix {
            size,
            entries: vec![Rational::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, |r, c| if r == c { Rational::one() } else { Rational::zero() })
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        Self::from_fn(values.len(), |r, c| {
            if r == c {
                values[r].clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// Fills the upper triangle from `f` and mirrors it.
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(size);
        for r in 0..size {
            for c in r..size {
                let v = f(r, c);
                m.entries[c * size + r] = v.clone();
                m.entries[r * size + c] = v;
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let size = rows.len();
        for row in &rows {
            if row.len() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    got: row.len(),
                });
            }
        }
        for r in 0..size {
            for c in r + 1..size {
                if rows[r][c] != rows[c][r] {
                    return Err(Error::NotSymmetric { row: r, col: c });
                }
            }
        }
        Ok(SymmetricRationalMatrix {
            size,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.size + c]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.size.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn rows_as_strings(&self) -> Vec<Vec<String>> {
        self.entries
            .chunks(self.size.max(1))
            .map(|r| r.iter().map(format_rational).collect())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|r| (r + 1..self.size).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        SymmetricRationalMatrix {
            size: self.size,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self + x * other`.
    pub fn add_scaled(&self, other: &Self, x: &Rational) -> Self {
        assert_eq!(self.size, other.size);
        SymmetricRationalMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + x * b)
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.size);
        self.entries
            .chunks(self.size.max(1))
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v^T M v`.
    pub fn quadratic_form(&self, v: &[Rational]) -> Rational {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

impl Serialize for SymmetricRationalMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows_as_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymmetricRationalMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        SymmetricRationalMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// `A0 + x_1 A_1 + ... + x_n A_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearMatrixPencil {
    pub n: usize,
    pub a0: SymmetricRationalMatrix,
    pub ai: Vec<SymmetricRationalMatrix>,
}

/// `A0 + x * ASum`, the pencil on the line `x_1 = ... = x_n = x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalPencil {
    pub a0: SymmetricRationalMatrix,
    pub asum: SymmetricRationalMatrix,
}

impl DiagonalPencil {
    pub fn new(a0: SymmetricRationalMatrix, asum: SymmetricRationalMatrix) -> Result<Self> {
        if a0.size() != asum.size() {
            return Err(Error::DimensionMismatch {
                expected: a0.size(),
                got: asum.size(),
            });
        }
        Ok(DiagonalPencil { a0, asum })
    }

    pub fn size(&self) -> usize {
        self.a0.size()
    }

    pub fn at(&self, x: &Rational) -> SymmetricRationalMatrix {
        self.a0.add_scaled(&self.asum, x)
    }
}

fn lvalue(l: &LFormTable, parts: &[usize]) -> Result<Rational> {
    let m = Monomial::new(parts.iter().copied().filter(|&i| i != 0));
    l.get(&m).cloned()
}

/// `A0[r][c] = L(m_r m_c)` and `A_i[r][c] = L(x_i m_r m_c)` with `m_0 = 1`, `m_r = x_r`.
pub fn build_pencil(l: &LFormTable) -> Result<LinearMatrixPencil> {
    let n = l.n();
    let build = |i: usize| -> Result<SymmetricRationalMatrix> {
        let mut rows = vec![vec![Rational::zero(); n + 1]; n + 1];
        for r in 0..=n {
            for c in r..=n {
                let v = lvalue(l, &[i, r, c])?;
                rows[c][r] = v.clone();
                rows[r][c] = v;
            }
        }
        SymmetricRationalMatrix::from_rows(rows)
    };
    Ok(LinearMatrixPencil {
        n,
        a0: build(0)?,
        ai: (1..=n).map(build).collect::<Result<_>>()?,
    })
}

/// Sums every coefficient matrix `A_1, ..., A_n`.
pub fn diagonal_pencil(p: &LinearMatrixPencil) -> DiagonalPencil {
    let mut asum = SymmetricRationalMatrix::zeros(p.a0.size());
    for a in &p.ai {
        asum = asum.add(a);
    }
    DiagonalPencil {
        a0: p.a0.clone(),
        asum,
    }
}

/// Diagonal pencil straight from an L-form table, without storing each `A_i`.
pub fn diagonal_pencil_from_lform(l: &LFormTable) -> Result<DiagonalPencil> {
    let n = l.n();
    let mut a0 = vec![vec![Rational::zero(); n + 1]; n + 1];
    let mut asum = vec![vec![Rational::zero(); n + 1]; n + 1];
    for r in 0..=n {
        for c in r..=n {
            let v = lvalue(l, &[r, c])?;
            let mut s = Rational::zero();
            for i in 1..=n {
                s += lvalue(l, &[i, r, c])?;
            }
            a0[r][c] = v.clone();
            a0[c][r] = v;
            asum[r][c] = s.clone();
            asum[c][r] = s;
        }
    }
    DiagonalPencil::new(
        SymmetricRationalMatrix::from_rows(a0)?,
        SymmetricRationalMatrix::from_rows(asum)?,
    )
}

/// Outcome of the exact PSD test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsdCertificate {
    Psd,
    /// `witness^T M witness = value < 0`.
    NotPsd { witness: Vec<Rational>, value: Rational },
}

impl PsdCertificate {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCertificate::Psd)
    }
}

/// Exact PSD decision by symmetric LDL^T elimination with diagonal pivoting.
pub fn psd_certificate(m: &SymmetricRationalMatrix) -> PsdCertificate {
    let s = m.size();
    let mut a = m.rows();
    let mut active: Vec<usize> = (0..s).collect();
    // (pivot, [(row, multiplier)])
    let mut history: Vec<(usize, Vec<(usize, Rational)>)> = Vec::new();

    let reduced_witness = loop {
        if active.is_empty() {
            return PsdCertificate::Psd;
        }
        if let Some(&i) = active.iter().find(|&&i| a[i][i].is_negative()) {
            let mut w = vec![Rational::zero(); s];
            w[i] = Rational::one();
            break w;
        }
        let pivot = active
            .iter()
            .copied()
            .filter(|&i| a[i][i].is_positive())
            .max_by(|&i, &j| a[i][i].cmp(&a[j][j]));
        let Some(p) = pivot else {
            // all remaining diagonal entries vanish
            let off = active.iter().flat_map(|&r| active.iter().map(move |&c| (r, c)));
            let found = off.clone().find(|&(r, c)| r != c && !a[r][c].is_zero());
            match found {
                None => return PsdCertificate::Psd,
                Some((r, c)) => {
                    let mut w = vec![Rational::zero(); s];
                    w[r] = Rational::one();
                    w[c] = if a[r][c].is_positive() { -Rational::one() } else { Rational::one() };
                    break w;
                }
            }
        };
        active.retain(|&i| i != p);
        let mults: Vec<(usize, Rational)> = active
            .iter()
            .map(|&r| (r, &a[r][p] / &a[p][p]))
            .collect();
        for &(r, ref l) in &mults {
            if l.is_zero() {
                continue;
            }
            for &c in &active {
                let delta = l * &a[p][c];
                a[r][c] -= delta;
            }
        }
        history.push((p, mults));
    };

    let mut v = reduced_witness;
    for (p, mults) in history.iter().rev() {
        v[*p] = -mults.iter().map(|(r, l)| l * &v[*r]).sum::<Rational>();
    }
    let value = m.quadratic_form(&v);
    debug_assert!(value.is_negative());
    PsdCertificate::NotPsd { witness: v, value }
}

/// Integer matrix `scale * M` with `scale > 0`, clearing all denominators.
fn integer_scaled(m: &SymmetricRationalMatrix) -> Vec<Vec<BigInt>> {
    let lcm = m
        .entries
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    m.rows()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect()
        })
        .collect()
}

/// Fast exact PSD decision (fraction-free symmetric elimination), no witness.
pub fn is_psd(m: &SymmetricRationalMatrix) -> bool {
    is_psd_integer(integer_scaled(m))
}

/// Fraction-free variant of [`psd_certificate`] on an integer matrix.
pub fn is_psd_integer(mut a: Vec<Vec<BigInt>>) -> bool {
    let mut active: Vec<usize> = (0..a.len()).collect();
    let mut prev = BigInt::one();
    loop {
        if active.is_empty() {
            return true;
        }
        if active.iter().any(|&i| a[i][i].sign() == Sign::Minus) {
            return false;
        }
        let pivot = active
            .iter()
            .copied()
            .filter(|&i| a[i][i].sign() == Sign::Plus)
            .max_by(|&i, &j| a[i][i].magnitude().bits().cmp(&a[j][j].magnitude().bits()));
        let Some(p) = pivot else {
            return active
                .iter()
                .all(|&r| active.iter().all(|&c| a[r][c].is_zero()));
        };
        active.retain(|&i| i != p);
        let piv = a[p][p].clone();
        for (ri, &r) in active.iter().enumerate() {
            for &c in &active[ri..] {
                let v = (&piv * &a[r][c] - &a[r][p] * &a[p][c]) / &prev;
                a[c][r] = v.clone();
                a[r][c] = v;
            }
        }
        prev = piv;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::lform::{eulerian_lform_table, lform_from_truncation, Truncation3};

    fn mat(rows: &[&[i64]]) -> SymmetricRationalMatrix {
        SymmetricRationalMatrix::from_integers(rows).unwrap()
    }

    #[test]
    fn n1_pencil() {
        let p = build_pencil(&eulerian_lform_table(1)).unwrap();
        assert_eq!(p.a0, mat(&[&[1, 1], &[1, 1]]));
        assert_eq!(p.ai[0], mat(&[&[1, 1], &[1, 1]]));
        assert_eq!(diagonal_pencil(&p).asum, p.ai[0]);
    }

    #[test]
    fn n2_pencil() {
        let p = build_pencil(&eulerian_lform_table(2)).unwrap();
        assert_eq!(p.a0, mat(&[&[2, 1, 3], &[1, 1, 2], &[3, 2, 9]]));
        let d = diagonal_pencil(&p);
        assert_eq!(d.asum, p.ai[0].add(&p.ai[1]));
        assert_eq!(d.asum, mat(&[&[4, 3, 11], &[3, 3, 8], &[11, 8, 33]]));
        assert_eq!(d.at(&Rational::zero()), d.a0);
    }

    #[test]
    fn a0_corner_is_degree() {
        for n in 1..=6 {
            let p = build_pencil(&eulerian_lform_table(n)).unwrap();
            assert_eq!(p.a0.get(0, 0), &int(n as i64));
            assert!(p.a0.is_symmetric());
            assert!(p.ai.iter().all(|a| a.is_symmetric()));
        }
    }

    #[test]
    fn direct_diagonal_matches_sum() {
        for n in 1..=6 {
            let l = lform_from_truncation(&Truncation3::eulerian(n));
            let d = diagonal_pencil(&build_pencil(&l).unwrap());
            assert_eq!(diagonal_pencil_from_lform(&l).unwrap(), d);
        }
    }

    #[test]
    fn incomplete_table_errors() {
        let l = LFormTable::new_partial(2, Default::default());
        assert!(matches!(build_pencil(&l), Err(Error::IncompleteLForm(_))));
    }

    #[test]
    fn asymmetric_rows_rejected() {
        assert_eq!(
            SymmetricRationalMatrix::from_integers(&[&[1, 2], &[3, 1]]),
            Err(Error::NotSymmetric { row: 0, col: 1 })
        );
    }

    #[test]
    fn psd_examples() {
        assert!(psd_certificate(&mat(&[&[1, 0], &[0, 1]])).is_psd());
        match psd_certificate(&mat(&[&[0, 1], &[1, 0]])) {
            PsdCertificate::NotPsd { witness, value } => {
                assert_eq!(witness, vec![int(1), int(-1)]);
                assert_eq!(value, int(-2));
            }
            PsdCertificate::Psd => panic!("indefinite"),
        }
        let a0 = build_pencil(&eulerian_lform_table(4)).unwrap().a0;
        assert!(psd_certificate(&a0).is_psd());
        assert!(is_psd(&a0));
    }

    #[test]
    fn semidefinite_with_zero_rows() {
        let m = mat(&[&[0, 0, 0], &[0, 2, 1], &[0, 1, 1]]);
        assert!(psd_certificate(&m).is_psd());
        let m = mat(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert!(psd_certificate(&m).is_psd());
        assert!(is_psd(&m));
    }

    #[test]
    fn witness_after_elimination() {
        // positive pivot first, then an indefinite 2x2 block
        let m = mat(&[&[4, 2, 2], &[2, 1, 3], &[2, 3, 1]]);
        match psd_certificate(&m) {
            PsdCertificate::NotPsd { witness, value } => {
                assert!(value < Rational::zero());
                assert_eq!(m.quadratic_form(&witness), value);
            }
            PsdCertificate::Psd => panic!("indefinite"),
        }
        assert!(!is_psd(&m));
    }
}
