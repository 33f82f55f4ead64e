//! Laurent polynomials over the rationals in the four local-system
//! variables (`alpha`, `beta`, `alpha'`, `beta'`), plus exact rank
//! computation for matrices over the fraction field.
//!
//! Differentials of the combinatorial Floer complexes live here: their
//! entries are Laurent polynomials whose vanishing loci (e.g. at
//! `beta = beta'`) decide ranks. Everything is exact — coefficients are
//! arbitrary-precision rationals and monomial exponents are signed.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Number of local-system variables.
pub const NVARS: usize = 4;

/// Printable names, in index order.
pub const VAR_NAMES: [&str; NVARS] = ["alpha", "beta", "alpha'", "beta'"];

/// Index of `alpha` (longitude variable of the first Lagrangian).
pub const ALPHA: usize = 0;
/// Index of `beta` (meridian variable of the first Lagrangian).
pub const BETA: usize = 1;
/// Index of `alpha'` (longitude variable of the second Lagrangian).
pub const ALPHA_P: usize = 2;
/// Index of `beta'` (meridian variable of the second Lagrangian).
pub const BETA_P: usize = 3;

/// Exponent vector of one monomial (negative exponents allowed).
pub type Mono = [i64; NVARS];

/// A Laurent polynomial with rational coefficients.
///
/// Terms are kept in a sorted map keyed by exponent vector, with zero
/// coefficients pruned, so equal polynomials have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    terms: BTreeMap<Mono, BigRational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term([0; NVARS], c);
        p
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(n.into()))
    }

    /// The variable with the given index.
    pub fn var(idx: usize) -> Self {
        Self::var_pow(idx, 1)
    }

    /// `variable^exp`, with `exp` possibly negative.
    pub fn var_pow(idx: usize, exp: i64) -> Self {
        assert!(idx < NVARS, "variable index out of range");
        let mut mono = [0; NVARS];
        mono[idx] = exp;
        let mut p = Self::zero();
        p.add_term(mono, BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mono: Mono, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (m, q) in &self.terms {
            out.terms.insert(*m, q * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `variable[idx] := coeff * variable[target]` (or the
    /// constant `coeff` when `target` is `None`).
    ///
    /// `coeff` must be nonzero, because Laurent monomials may carry
    /// negative powers of the substituted variable.
    pub fn substitute(&self, idx: usize, coeff: &BigRational, target: Option<usize>) -> Self {
        assert!(idx < NVARS, "variable index out of range");
        assert!(!coeff.is_zero(), "cannot substitute an invertible variable by zero");
        let mut out = Self::zero();
        for (m, q) in &self.terms {
            let e = m[idx];
            let mut mono = *m;
            mono[idx] = 0;
            if let Some(t) = target {
                assert!(t < NVARS && t != idx, "bad substitution target");
                mono[t] += e;
            }
            out.add_term(mono, q * rational_pow(coeff, e));
        }
        out
    }

    /// Evaluate at a full point with nonzero rational coordinates.
    pub fn evaluate(&self, point: &[BigRational; NVARS]) -> BigRational {
        for v in point {
            assert!(!v.is_zero(), "local-system variables are invertible; zero is not allowed");
        }
        let mut acc = BigRational::zero();
        for (m, q) in &self.terms {
            let mut term = q.clone();
            for (i, &e) in m.iter().enumerate() {
                term *= rational_pow(&point[i], e);
            }
            acc += term;
        }
        acc
    }
}

fn rational_pow(base: &BigRational, e: i64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    let p = base.pow(e.unsigned_abs().try_into().expect("exponent too large"));
    if e > 0 {
        p
    } else {
        p.recip()
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(*m, q.clone());
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(*m, -q.clone());
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        let mut out = Laurent::zero();
        for (m, q) in &self.terms {
            out.terms.insert(*m, -q.clone());
        }
        out
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &rhs.terms {
                let mut m = *ma;
                for (i, e) in mb.iter().enumerate() {
                    m[i] += e;
                }
                out.add_term(m, qa * qb);
            }
        }
        out
    }
}

impl fmt::Display for Laurent {
    /// Canonical string form: terms in exponent-vector order, each as
    /// `(coeff)` or `(coeff)*name^exp*...` with `^1` omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, q) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", q)?;
            for (i, &e) in m.iter().enumerate() {
                if e == 1 {
                    write!(f, "*{}", VAR_NAMES[i])?;
                } else if e != 0 {
                    write!(f, "*{}^{}", VAR_NAMES[i], e)?;
                }
            }
        }
        Ok(())
    }
}

/// A quotient of Laurent polynomials, the field element used during
/// Gaussian elimination. Not reduced to lowest terms (exact multivariate
/// gcd is unnecessary at the matrix sizes that arise here); the unit
/// monomial content is cancelled to keep exponents small.
#[derive(Debug, Clone)]
pub struct LaurentFrac {
    num: Laurent,
    den: Laurent,
}

impl LaurentFrac {
    pub fn from_poly(p: Laurent) -> Self {
        LaurentFrac { num: p, den: Laurent::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Laurent::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(mut self) -> Self {
        assert!(!self.den.is_zero(), "zero denominator");
        if self.num.is_zero() {
            self.den = Laurent::one();
            return self;
        }
        // Cancel the common unit: shift both parts by monomials (units in
        // the Laurent ring) so each has minimal exponent zero per variable,
        // folding the difference into the numerator's monomials.
        let shift_n = min_exponents(&self.num);
        let shift_d = min_exponents(&self.den);
        self.num = shift_by(&self.num, &shift_n.map(|e| -e));
        self.den = shift_by(&self.den, &shift_d.map(|e| -e));
        let mut net = [0i64; NVARS];
        for i in 0..NVARS {
            net[i] = shift_n[i] - shift_d[i];
        }
        self.num = shift_by(&self.num, &net);
        // Scale so the denominator's first coefficient is 1.
        let lead = self.den.terms.values().next().expect("nonzero").clone();
        let inv = lead.recip();
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
        self
    }

    pub fn add(&self, rhs: &Self) -> Self {
        LaurentFrac {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .normalized()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        LaurentFrac {
            num: &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .normalized()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        LaurentFrac { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.normalized()
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero fraction");
        LaurentFrac { num: &self.num * &rhs.den, den: &self.den * &rhs.num }.normalized()
    }
}

fn min_exponents(p: &Laurent) -> Mono {
    let mut m = [i64::MAX; NVARS];
    for (mono, _) in p.terms() {
        for i in 0..NVARS {
            m[i] = m[i].min(mono[i]);
        }
    }
    m
}

fn shift_by(p: &Laurent, shift: &Mono) -> Laurent {
    let mut out = Laurent::zero();
    for (mono, q) in p.terms() {
        let mut m = *mono;
        for i in 0..NVARS {
            m[i] += shift[i];
        }
        out.add_term(m, q.clone());
    }
    out
}

/// Rank of a matrix with Laurent-polynomial entries over the fraction
/// field of the Laurent ring, by exact Gaussian elimination.
pub fn rank_over_fraction_field(matrix: &[Vec<Laurent>]) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    assert!(matrix.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut m: Vec<Vec<LaurentFrac>> = matrix
        .iter()
        .map(|r| r.iter().map(|p| LaurentFrac::from_poly(p.clone())).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let pv = m[rank][col].clone();
        for r in rank + 1..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].div(&pv);
            for c in col..cols {
                let delta = factor.mul(&m[rank][c]);
                m[r][c] = m[r][c].sub(&delta);
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Matrix product of Laurent matrices (for differential-squares-to-zero
/// checks).
pub fn laurent_mat_mul(a: &[Vec<Laurent>], b: &[Vec<Laurent>]) -> Vec<Vec<Laurent>> {
    let n = a.len();
    let k = if n == 0 { 0 } else { a[0].len() };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    assert!(b.len() == k, "inner dimensions disagree");
    let mut out = vec![vec![Laurent::zero(); cols]; n];
    for i in 0..n {
        for j in 0..cols {
            let mut acc = Laurent::zero();
            for t in 0..k {
                acc = &acc + &(&a[i][t] * &b[t][j]);
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Substitute in every entry of a matrix.
pub fn substitute_matrix(
    matrix: &[Vec<Laurent>],
    idx: usize,
    coeff: &BigRational,
    target: Option<usize>,
) -> Vec<Vec<Laurent>> {
    matrix
        .iter()
        .map(|row| row.iter().map(|p| p.substitute(idx, coeff, target)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn ring_identities() {
        let a = Laurent::var(ALPHA);
        let b = Laurent::var(BETA);
        let lhs = &(&a + &b) * &(&a - &b);
        let rhs = &(&a * &a) - &(&b * &b);
        assert_eq!(lhs, rhs);
        // alpha^-1 * alpha = 1
        let inv = Laurent::var_pow(ALPHA, -1);
        assert_eq!(&inv * &a, Laurent::one());
        assert_eq!(format!("{}", &a - &a), "0");
    }

    #[test]
    fn substitution_hits_cancellation_loci() {
        let b = Laurent::var(BETA);
        let bp = Laurent::var(BETA_P);
        let green = &b - &bp;
        let blue = &b + &bp;
        // beta' := beta kills the green weight and doubles the blue one.
        assert!(green.substitute(BETA_P, &q(1), Some(BETA)).is_zero());
        assert_eq!(blue.substitute(BETA_P, &q(1), Some(BETA)), b.scale(&q(2)));
        // beta' := -beta kills the blue weight.
        assert!(blue.substitute(BETA_P, &q(-1), Some(BETA)).is_zero());
        // beta' := 2 beta kills neither.
        assert!(!green.substitute(BETA_P, &q(2), Some(BETA)).is_zero());
        assert!(!blue.substitute(BETA_P, &q(2), Some(BETA)).is_zero());
        // Negative exponents substitute exactly: (beta')^-2 -> (2 beta)^-2.
        let m = Laurent::var_pow(BETA_P, -2);
        let s = m.substitute(BETA_P, &q(2), Some(BETA));
        let expected = Laurent::var_pow(BETA, -2).scale(&BigRational::new(1.into(), 4.into()));
        assert_eq!(s, expected);
    }

    #[test]
    fn fraction_arithmetic_is_exact() {
        let a = LaurentFrac { num: Laurent::one(), den: Laurent::var(ALPHA) }.normalized();
        let b = LaurentFrac { num: Laurent::one(), den: Laurent::var(BETA) }.normalized();
        let s = a.add(&b);
        // 1/alpha + 1/beta = (alpha+beta)/(alpha*beta); check by clearing.
        let cleared = &s.num * &(&Laurent::var(ALPHA) * &Laurent::var(BETA));
        let expect = &(&Laurent::var(ALPHA) + &Laurent::var(BETA)) * &s.den;
        assert_eq!(cleared, expect);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn rank_detects_dependence_and_specialization() {
        let b = Laurent::var(BETA);
        let bp = Laurent::var(BETA_P);
        let green = &b - &bp;
        let blue = &b + &bp;
        let z = Laurent::zero();
        // diag(green, blue): rank 2 generically, rank 1 on either locus.
        let d = vec![vec![green.clone(), z.clone()], vec![z.clone(), blue.clone()]];
        assert_eq!(rank_over_fraction_field(&d), 2);
        let at_equal = substitute_matrix(&d, BETA_P, &q(1), Some(BETA));
        assert_eq!(rank_over_fraction_field(&at_equal), 1);
        let at_opposite = substitute_matrix(&d, BETA_P, &q(-1), Some(BETA));
        assert_eq!(rank_over_fraction_field(&at_opposite), 1);
        let generic = substitute_matrix(&d, BETA_P, &q(2), Some(BETA));
        assert_eq!(rank_over_fraction_field(&generic), 2);

        // Row dependence over the field: [1, alpha; beta, alpha*beta].
        let one = Laurent::one();
        let al = Laurent::var(ALPHA);
        let m = vec![vec![one.clone(), al.clone()], vec![b.clone(), &al * &b]];
        assert_eq!(rank_over_fraction_field(&m), 1);

        // Zero and empty matrices.
        assert_eq!(rank_over_fraction_field(&[vec![z.clone()]]), 0);
        assert_eq!(rank_over_fraction_field(&[]), 0);
    }

    #[test]
    fn matrix_multiply_squares_to_zero() {
        // A two-step complex differential squares to zero.
        let b = Laurent::var(BETA);
        let bp = Laurent::var(BETA_P);
        let w = &b - &bp;
        let z = Laurent::zero();
        let d = vec![vec![z.clone(), w.clone()], vec![z.clone(), z.clone()]];
        let dd = laurent_mat_mul(&d, &d);
        assert!(dd.iter().all(|row| row.iter().all(|p| p.is_zero())));
    }
}
