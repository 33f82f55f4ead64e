//! Dense arbitrary-precision integer matrices and division-free linear algebra.
//!
//! Everything downstream (lattices, monodromy products, characteristic
//! polynomials) works over the integers. This module owns the square matrix
//! type so the rest of the crate never touches floating point, plus the
//! plain-text matrix interchange format shared with external tooling.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// Matrix text input did not parse: bad token, short file, bad header.
    Parse(String),
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::Parse(msg) => write!(f, "matrix parse error: {}", msg),
        }
    }
}

impl std::error::Error for ExactError {}

/// Square integer matrix, row-major storage.
#[derive(Clone, PartialEq, Eq)]
pub struct IMat {
    n: usize,
    a: Vec<BigInt>,
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IMat({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "\n  ")?;
            for j in 0..self.n {
                write!(f, "{} ", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

impl IMat {
    pub fn zero(n: usize) -> IMat {
        IMat {
            n,
            a: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> IMat {
        let mut m = IMat::zero(n);
        for i in 0..n {
            m.a[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> i64>(n: usize, mut f: F) -> IMat {
        let mut m = IMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = BigInt::from(f(i, j));
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.a[i * self.n + j] = v;
    }

    pub fn is_identity(&self) -> bool {
        *self == IMat::identity(self.n)
    }

    pub fn transpose(&self) -> IMat {
        let n = self.n;
        let mut m = IMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.a[j * n + i] = self.a[i * n + j].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.n, other.n, "matrix size mismatch in mul");
        let n = self.n;
        let mut out = IMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let aik = &self.a[i * n + k];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.a[k * n + j];
                    if !b.is_zero() {
                        out.a[i * n + j] += aik * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.n, v.len(), "matrix/vector size mismatch");
        let n = self.n;
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            let mut acc = BigInt::zero();
            for j in 0..n {
                let a = &self.a[i * n + j];
                if !a.is_zero() {
                    acc += a * &v[j];
                }
            }
            out[i] = acc;
        }
        out
    }

    /// In-place right multiplication by the rank-one update `I + w·uᵀ`:
    /// `self <- self · (I + w uᵀ)`, costing O(n²). The workhorse for long
    /// products of transvection-like operators.
    pub fn rank_one_right_update(&mut self, w: &[BigInt], u: &[BigInt]) {
        let n = self.n;
        assert!(w.len() == n && u.len() == n, "rank-one update size mismatch");
        // column vector self·w, then add (self·w)·uᵀ
        let sw = self.mul_vec(w);
        for i in 0..n {
            if sw[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !u[j].is_zero() {
                    self.a[i * n + j] += &sw[i] * &u[j];
                }
            }
        }
    }

    pub fn pow(&self, k: u64) -> IMat {
        let mut result = IMat::identity(self.n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Kronecker product; `self` is the outer (slow-index) factor.
    pub fn kronecker(&self, other: &IMat) -> IMat {
        let n = self.n;
        let p = other.n;
        let mut out = IMat::zero(n * p);
        for i in 0..n {
            for j in 0..n {
                let a = &self.a[i * n + j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..p {
                    for l in 0..p {
                        let b = &other.a[k * p + l];
                        if !b.is_zero() {
                            out.a[(i * p + k) * (n * p) + (j * p + l)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Characteristic polynomial det(tI − M), coefficients in ascending
    /// degree order, monic. Division-free Berkowitz recursion on leading
    /// principal blocks, so it is exact over the integers.
    pub fn charpoly(&self) -> Vec<BigInt> {
        let n = self.n;
        // descending coefficients of the 0x0 block: the constant 1
        let mut p: Vec<BigInt> = vec![BigInt::one()];
        for k in 1..=n {
            // leading k×k block split as [[M, S], [R, a]] with M of size k-1
            let a_kk = &self.a[(k - 1) * n + (k - 1)];
            // Toeplitz column: 1, −a, −R·S, −R·M·S, …, −R·M^{k−2}·S
            let mut t: Vec<BigInt> = Vec::with_capacity(k + 1);
            t.push(BigInt::one());
            t.push(-a_kk);
            let mut w: Vec<BigInt> = (0..k - 1).map(|i| self.a[i * n + (k - 1)].clone()).collect();
            for j in 2..=k {
                let mut rw = BigInt::zero();
                for (jj, wv) in w.iter().enumerate() {
                    let r = &self.a[(k - 1) * n + jj];
                    if !r.is_zero() && !wv.is_zero() {
                        rw += r * wv;
                    }
                }
                t.push(-rw);
                if j < k {
                    // w <- M·w over the leading (k−1)-block
                    let mut nw = vec![BigInt::zero(); k - 1];
                    for i in 0..k - 1 {
                        let mut acc = BigInt::zero();
                        for jj in 0..k - 1 {
                            let m = &self.a[i * n + jj];
                            if !m.is_zero() && !w[jj].is_zero() {
                                acc += m * &w[jj];
                            }
                        }
                        nw[i] = acc;
                    }
                    w = nw;
                }
            }
            // p <- T·p, the lower-triangular Toeplitz convolution
            let mut newp = vec![BigInt::zero(); k + 1];
            for (j, pj) in p.iter().enumerate() {
                if pj.is_zero() {
                    continue;
                }
                for (d, td) in t.iter().enumerate() {
                    if j + d <= k && !td.is_zero() {
                        newp[j + d] += td * pj;
                    }
                }
            }
            p = newp;
        }
        p.reverse();
        p
    }

    /// Plain-text interchange format: first line the rank, then the entries
    /// row-major, one row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(input: &str) -> Result<IMat, ExactError> {
        let mut tokens = input.split_whitespace();
        let head = tokens
            .next()
            .ok_or_else(|| ExactError::Parse("empty input".to_string()))?;
        let n: usize = head
            .parse()
            .map_err(|_| ExactError::Parse(format!("bad rank header {:?}", head)))?;
        if n > 4096 {
            return Err(ExactError::Parse(format!("rank {} too large", n)));
        }
        let mut a = Vec::with_capacity(n * n);
        for idx in 0..n * n {
            let tok = tokens.next().ok_or_else(|| {
                ExactError::Parse(format!("expected {} entries, found {}", n * n, idx))
            })?;
            let v: BigInt = tok
                .parse()
                .map_err(|_| ExactError::Parse(format!("bad integer {:?}", tok)))?;
            a.push(v);
        }
        if let Some(extra) = tokens.next() {
            return Err(ExactError::Parse(format!(
                "trailing data after {} entries: {:?}",
                n * n,
                extra
            )));
        }
        Ok(IMat { n, a })
    }
}

/// Convenience: ascending-coefficient polynomial pretty-printer used in
/// reports and by the CLI (`c0 c1 ... cn`).
pub fn poly_to_string(coeffs: &[BigInt]) -> String {
    coeffs
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IMat {
        let n = rows.len();
        IMat::from_fn(n, |i, j| rows[i][j])
    }

    #[test]
    fn charpoly_small() {
        // det(tI − A) for hand-checkable cases
        assert_eq!(m(&[&[5]]).charpoly(), vec![BigInt::from(-5), BigInt::from(1)]);
        // [[1,2],[3,4]]: t² −5t −2
        assert_eq!(
            m(&[&[1, 2], &[3, 4]]).charpoly(),
            vec![BigInt::from(-2), BigInt::from(-5), BigInt::from(1)]
        );
        // identity 3×3: (t−1)³ = t³ −3t² +3t −1
        assert_eq!(
            IMat::identity(3).charpoly(),
            vec![
                BigInt::from(-1),
                BigInt::from(3),
                BigInt::from(-3),
                BigInt::from(1)
            ]
        );
        // 0×0 matrix: the constant polynomial 1
        assert_eq!(IMat::zero(0).charpoly(), vec![BigInt::from(1)]);
    }

    #[test]
    fn rank_one_update_matches_mul() {
        let a = m(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let w: Vec<BigInt> = vec![1, 0, 2].into_iter().map(BigInt::from).collect();
        let u: Vec<BigInt> = vec![0, 3, 1].into_iter().map(BigInt::from).collect();
        let mut upd = IMat::identity(3);
        for i in 0..3 {
            for j in 0..3 {
                let add = &w[i] * &u[j];
                let cur = upd.get(i, j).clone();
                upd.set(i, j, cur + add);
            }
        }
        let expect = a.mul(&upd);
        let mut got = a.clone();
        got.rank_one_right_update(&w, &u);
        assert_eq!(got, expect);
    }

    #[test]
    fn text_round_trip() {
        let a = m(&[&[0, -1], &[7, 12]]);
        let s = a.to_text();
        assert_eq!(s, "2\n0 -1\n7 12\n");
        assert_eq!(IMat::parse_text(&s).unwrap(), a);
        assert!(IMat::parse_text("2\n1 2 3").is_err());
        assert!(IMat::parse_text("2\n1 2 3 4 5").is_err());
        assert!(IMat::parse_text("x").is_err());
        assert!(IMat::parse_text("").is_err());
    }

    #[test]
    fn pow_and_kron() {
        let a = m(&[&[0, 1], &[1, 0]]);
        assert!(a.pow(2).is_identity());
        assert_eq!(a.pow(5), a);
        let b = m(&[&[2]]);
        let k = a.kronecker(&b);
        assert_eq!(k, m(&[&[0, 2], &[2, 0]]));
    }
}
