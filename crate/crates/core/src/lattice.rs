//! Milnor lattices of Brieskorn-Pham singularities.
//!
//! For exponents (a₀,…,a_m) the lattice has rank ∏(aᵢ−1), with one basis
//! cycle per Pham label (j₀,…,j_m), 1 ≤ jᵢ ≤ aᵢ−1. The intersection form is
//! assembled from the one-variable Seifert form (−1 on the diagonal, +1 on
//! the superdiagonal) by tensoring factors with the LAST exponent outermost,
//! then symmetrizing with the parity sign: G = V + (−1)^m Vᵀ. Basis order is
//! label-colexicographic (j₀ varies fastest), matching the distinguished
//! clockwise ordering of vanishing cycles.
//!
//! The construction is validated against the classical monodromy spectrum
//! (eigenvalues ∏ᵢ ζ_{aᵢ}^{jᵢ} over all labels) rather than trusted: see
//! [`verify_spectrum`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exact::IMat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    /// An exponent below 1 cannot define a singularity.
    InvalidExponent(i64),
    /// No exponents at all.
    EmptyExponents,
    /// Basis index outside 0..rank.
    IndexOutOfRange { index: usize, rank: usize },
    /// Twist sign must be +1 or −1.
    InvalidSign(i8),
    /// The split-off last exponent is not k times the lcm of the others.
    DivisibilityViolated { b: i64, lcm: i64, k: i64 },
    /// Fractional-twist factorizations need at least two exponents.
    TooFewExponents,
    /// Characteristic polynomial of the twist product disagrees with the
    /// classical spectrum; the construction convention would be wrong for
    /// this tuple, so refuse to proceed.
    SpectrumMismatch { exponents: Vec<i64> },
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::InvalidExponent(a) => write!(f, "invalid exponent {}", a),
            LatticeError::EmptyExponents => write!(f, "exponent list is empty"),
            LatticeError::IndexOutOfRange { index, rank } => {
                write!(f, "cycle index {} out of range for rank {}", index, rank)
            }
            LatticeError::InvalidSign(s) => write!(f, "twist sign must be ±1, got {}", s),
            LatticeError::DivisibilityViolated { b, lcm, k } => write!(
                f,
                "last exponent {} is not {} times lcm {} of the others",
                b, k, lcm
            ),
            LatticeError::TooFewExponents => {
                write!(f, "need at least two exponents to split off the last one")
            }
            LatticeError::SpectrumMismatch { exponents } => write!(
                f,
                "monodromy spectrum mismatch for exponents {:?}; lattice convention invalid here",
                exponents
            ),
        }
    }
}

impl std::error::Error for LatticeError {}

/// Exponent tuple (a₀,…,a_m). When the last exponent is split off as `b`,
/// the remaining ones play the role of the base tuple with
/// ϖ = ∏_{i<m}(aᵢ−1) vanishing cycles per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponents {
    a: Vec<i64>,
}

impl Exponents {
    pub fn new(a: Vec<i64>) -> Result<Exponents, LatticeError> {
        if a.is_empty() {
            return Err(LatticeError::EmptyExponents);
        }
        for &ai in &a {
            if ai < 1 {
                return Err(LatticeError::InvalidExponent(ai));
            }
        }
        Ok(Exponents { a })
    }

    pub fn list(&self) -> &[i64] {
        &self.a
    }

    /// Lattice rank ∏(aᵢ−1). Exponent 1 factors contribute 0 (smooth fiber).
    pub fn rank(&self) -> usize {
        self.a.iter().map(|&ai| (ai - 1) as usize).product()
    }

    /// Last exponent, in the split X_{**a**, b}.
    pub fn b(&self) -> i64 {
        *self.a.last().unwrap()
    }

    /// ϖ = ∏ over all but the last exponent of (aᵢ−1).
    pub fn varpi(&self) -> usize {
        self.a[..self.a.len() - 1]
            .iter()
            .map(|&ai| (ai - 1) as usize)
            .product()
    }

    /// lcm of all but the last exponent (1 for a single exponent).
    pub fn lcm_base(&self) -> i64 {
        self.a[..self.a.len() - 1]
            .iter()
            .fold(1i64, |acc, &ai| acc.lcm(&ai))
    }

    /// lcm of the full tuple.
    pub fn lcm_all(&self) -> i64 {
        self.a.iter().fold(1i64, |acc, &ai| acc.lcm(&ai))
    }
}

/// Integer Milnor lattice with its distinguished basis.
#[derive(Debug, Clone)]
pub struct MilnorLattice {
    pub exponents: Exponents,
    pub rank: usize,
    /// Intersection form on the distinguished basis; (−1)^m-symmetric where
    /// m+1 is the number of variables.
    pub gram: IMat,
    /// Pham label (j₀,…,j_m) of each basis cycle, colexicographic order.
    pub basis_labels: Vec<Vec<i64>>,
    /// Parity of the complex fiber dimension m: 0 → symmetric form with −2
    /// diagonal, 1 → antisymmetric form.
    pub dim_parity: u8,
}

/// One Picard-Lefschetz twist as an integer matrix.
#[derive(Debug, Clone)]
pub struct TwistOperator {
    pub matrix: IMat,
    pub cycle_index: usize,
    pub sign: i8,
}

fn one_var_seifert(a: i64) -> IMat {
    let n = (a - 1) as usize;
    IMat::from_fn(n, |i, j| {
        if i == j {
            -1
        } else if j == i + 1 {
            1
        } else {
            0
        }
    })
}

/// Build the lattice for the given exponents. Entries equal to 1 are legal
/// and contribute a rank-0 factor; entries below 1 are rejected.
pub fn build_lattice(e: &Exponents) -> MilnorLattice {
    let m = e.a.len() - 1;
    // tensor the one-variable Seifert forms, last exponent outermost
    let mut v = one_var_seifert(e.a[0]);
    for &ai in &e.a[1..] {
        v = one_var_seifert(ai).kronecker(&v);
    }
    let vt = v.transpose();
    let n = v.n();
    let mut gram = IMat::zero(n);
    let parity_sign = if m % 2 == 0 { 1 } else { -1 };
    for i in 0..n {
        for j in 0..n {
            let val = v.get(i, j) + vt.get(i, j) * BigInt::from(parity_sign);
            gram.set(i, j, val);
        }
    }
    // labels: j₀ fastest, j_m slowest
    let sizes: Vec<usize> = e.a.iter().map(|&ai| (ai - 1) as usize).collect();
    let mut basis_labels = Vec::with_capacity(n);
    for idx in 0..n {
        let mut label = Vec::with_capacity(sizes.len());
        let mut rest = idx;
        for &s in &sizes {
            label.push((rest % s) as i64 + 1);
            rest /= s;
        }
        basis_labels.push(label);
    }
    MilnorLattice {
        exponents: e.clone(),
        rank: n,
        gram,
        basis_labels,
        dim_parity: (m % 2) as u8,
    }
}

impl MilnorLattice {
    /// ⟨x,y⟩ = xᵀ·gram·y.
    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        assert!(x.len() == self.rank && y.len() == self.rank);
        let gy = self.gram.mul_vec(y);
        x.iter().zip(gy.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn basis_vector(&self, index: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank];
        v[index] = BigInt::one();
        v
    }
}

/// Apply the Picard-Lefschetz twist along basis cycle `v_index` to `x`:
/// x ↦ x + ⟨x,v⟩·v. With a symmetric form the twist is an involution, so
/// both signs act identically; with an antisymmetric form sign −1 applies
/// the inverse x ↦ x − ⟨x,v⟩·v.
pub fn twist(
    lat: &MilnorLattice,
    v_index: usize,
    x: &[BigInt],
    sign: i8,
) -> Result<Vec<BigInt>, LatticeError> {
    if v_index >= lat.rank {
        return Err(LatticeError::IndexOutOfRange {
            index: v_index,
            rank: lat.rank,
        });
    }
    if sign != 1 && sign != -1 {
        return Err(LatticeError::InvalidSign(sign));
    }
    let s = if lat.dim_parity == 0 { 1 } else { sign };
    // ⟨x, e_idx⟩ = Σ_i x_i·G[i, idx]
    let mut coef = BigInt::zero();
    for (i, xi) in x.iter().enumerate() {
        if !xi.is_zero() {
            coef += xi * lat.gram.get(i, v_index);
        }
    }
    let mut out = x.to_vec();
    out[v_index] += BigInt::from(s) * coef;
    Ok(out)
}

/// Matrix of the twist along basis cycle `v_index`.
pub fn twist_operator(
    lat: &MilnorLattice,
    v_index: usize,
    sign: i8,
) -> Result<TwistOperator, LatticeError> {
    if v_index >= lat.rank {
        return Err(LatticeError::IndexOutOfRange {
            index: v_index,
            rank: lat.rank,
        });
    }
    if sign != 1 && sign != -1 {
        return Err(LatticeError::InvalidSign(sign));
    }
    let s = if lat.dim_parity == 0 { 1 } else { sign };
    let mut m = IMat::identity(lat.rank);
    for j in 0..lat.rank {
        let add = BigInt::from(s) * lat.gram.get(j, v_index);
        if !add.is_zero() {
            let cur = m.get(v_index, j).clone();
            m.set(v_index, j, cur + add);
        }
    }
    Ok(TwistOperator {
        matrix: m,
        cycle_index: v_index,
        sign,
    })
}

/// Product of positive twists along the listed basis cycles, leftmost factor
/// first (so the LAST listed twist acts first on column vectors).
pub fn twist_product(lat: &MilnorLattice, indices: &[usize]) -> Result<IMat, LatticeError> {
    let n = lat.rank;
    let mut p = IMat::identity(n);
    for &idx in indices {
        if idx >= n {
            return Err(LatticeError::IndexOutOfRange { index: idx, rank: n });
        }
        // right-multiply by I + e_idx · (column idx of G)ᵀ
        let w = lat.basis_vector(idx);
        let u: Vec<BigInt> = (0..n).map(|j| lat.gram.get(j, idx).clone()).collect();
        p.rank_one_right_update(&w, &u);
    }
    Ok(p)
}

/// Total monodromy ν: the ordered product of all distinguished twists.
pub fn total_monodromy(lat: &MilnorLattice) -> IMat {
    let indices: Vec<usize> = (0..lat.rank).collect();
    twist_product(lat, &indices).expect("indices in range by construction")
}

/// Ordered cycle-index list of the fractional boundary-twist factorization:
/// the full distinguished list repeated lcm(a₀,…,a_{m−1}) times. Requires the
/// last exponent to equal k times that lcm. The companion matrix product is
/// available through [`twist_product`].
pub fn phi_factorization(e: &Exponents, k: i64) -> Result<Vec<usize>, LatticeError> {
    if e.a.len() < 2 {
        return Err(LatticeError::TooFewExponents);
    }
    let lcm = e.lcm_base();
    if k < 1 || e.b() != k * lcm {
        return Err(LatticeError::DivisibilityViolated {
            b: e.b(),
            lcm,
            k,
        });
    }
    let rank = e.rank();
    let mut out = Vec::with_capacity(rank * lcm as usize);
    for _ in 0..lcm {
        out.extend(0..rank);
    }
    Ok(out)
}

fn companion_nontrivial_roots(a: i64) -> IMat {
    // companion matrix of (t^a − 1)/(t − 1) = t^{a−1} + … + 1
    let n = (a - 1) as usize;
    IMat::from_fn(n, |i, j| {
        if j + 1 == n {
            -1
        } else if i == j + 1 {
            1
        } else {
            0
        }
    })
}

/// Characteristic polynomial of the classical monodromy, built independently
/// of the twist machinery: the tensor product of companion matrices of
/// (t^{aᵢ}−1)/(t−1) has exactly the eigenvalues ∏ᵢ ζ_{aᵢ}^{jᵢ}.
pub fn classical_monodromy_charpoly(e: &Exponents) -> Vec<BigInt> {
    let mut m = companion_nontrivial_roots(e.a[0]);
    for &ai in &e.a[1..] {
        m = companion_nontrivial_roots(ai).kronecker(&m);
    }
    m.charpoly()
}

/// Compare the twist-product monodromy spectrum against the classical one;
/// errors loudly on mismatch so a bad sign convention can never propagate.
pub fn verify_spectrum(lat: &MilnorLattice) -> Result<Vec<BigInt>, LatticeError> {
    let nu = total_monodromy(lat);
    let got = nu.charpoly();
    let want = classical_monodromy_charpoly(&lat.exponents);
    if got != want {
        return Err(LatticeError::SpectrumMismatch {
            exponents: lat.exponents.list().to_vec(),
        });
    }
    Ok(got)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(Exponents::new(vec![2]).unwrap().rank(), 1);
        assert_eq!(Exponents::new(vec![3, 3]).unwrap().rank(), 4);
        assert_eq!(Exponents::new(vec![2, 4, 18]).unwrap().rank(), 51);
        assert_eq!(Exponents::new(vec![3, 1]).unwrap().rank(), 0);
        assert!(Exponents::new(vec![0]).is_err());
        assert!(Exponents::new(vec![]).is_err());
    }

    #[test]
    fn one_variable_square_monodromy_is_minus_one() {
        let e = Exponents::new(vec![2]).unwrap();
        let lat = build_lattice(&e);
        assert_eq!(lat.rank, 1);
        assert_eq!(*lat.gram.get(0, 0), BigInt::from(-2));
        let nu = total_monodromy(&lat);
        assert_eq!(*nu.get(0, 0), BigInt::from(-1));
    }

    #[test]
    fn twist_fixed_points_and_reflection() {
        // even fiber dimension: three variables
        let e = Exponents::new(vec![2, 2, 2]).unwrap();
        let lat = build_lattice(&e);
        assert_eq!(lat.dim_parity, 0);
        let v = lat.basis_vector(0);
        // v·v = −2 forces τ_v(v) = −v
        assert_eq!(lat.pairing(&v, &v), BigInt::from(-2));
        let tv = twist(&lat, 0, &v, 1).unwrap();
        assert_eq!(tv, big(&[-1]));
        // orthogonal vectors are fixed
        let e = Exponents::new(vec![3, 3]).unwrap();
        let lat = build_lattice(&e);
        // label (1,1) pairs trivially with (2,2) here? find any orthogonal pair
        let mut found = false;
        for i in 0..4 {
            for j in 0..4 {
                let vi = lat.basis_vector(i);
                let vj = lat.basis_vector(j);
                if lat.pairing(&vj, &vi).is_zero() {
                    let t = twist(&lat, i, &vj, 1).unwrap();
                    assert_eq!(t, vj);
                    found = true;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn twist_inverse_round_trip() {
        let e = Exponents::new(vec![3, 3]).unwrap();
        let lat = build_lattice(&e);
        let x = big(&[1, -2, 3, 5]);
        for i in 0..4 {
            let y = twist(&lat, i, &x, 1).unwrap();
            let back = twist(&lat, i, &y, -1).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn twist_operators_preserve_gram() {
        for exps in [vec![3, 3], vec![2, 4], vec![2, 2, 3]] {
            let lat = build_lattice(&Exponents::new(exps).unwrap());
            for i in 0..lat.rank {
                let t = twist_operator(&lat, i, 1).unwrap();
                let lhs = t.matrix.transpose().mul(&lat.gram).mul(&t.matrix);
                assert_eq!(lhs, lat.gram);
            }
        }
    }

    #[test]
    fn spectrum_examples() {
        // (3,3): (t−1)²(t²+t+1) = t⁴ − t³ − t + 1
        let lat = build_lattice(&Exponents::new(vec![3, 3]).unwrap());
        let cp = verify_spectrum(&lat).unwrap();
        assert_eq!(cp, big(&[1, -1, 0, -1, 1]));
        // ν³ is the identity (finite-order monodromy)
        let nu = total_monodromy(&lat);
        assert!(nu.pow(3).is_identity());
        // (2,2): rank 1, eigenvalue +1
        let lat = build_lattice(&Exponents::new(vec![2, 2]).unwrap());
        assert_eq!(verify_spectrum(&lat).unwrap(), big(&[-1, 1]));
        assert!(total_monodromy(&lat).is_identity());
    }

    #[test]
    fn phi_lengths_and_errors() {
        // single exponent split (a₀)=(2), b=2: the tuple (2,2)
        let e = Exponents::new(vec![2, 2]).unwrap();
        assert_eq!(phi_factorization(&e, 1).unwrap().len(), 2);
        // (3,3), b=3: tuple (3,3,3), length 4·2·3 = 24
        let e = Exponents::new(vec![3, 3, 3]).unwrap();
        assert_eq!(phi_factorization(&e, 1).unwrap().len(), 24);
        // divisibility violations
        let e = Exponents::new(vec![3, 3, 4]).unwrap();
        assert!(matches!(
            phi_factorization(&e, 1),
            Err(LatticeError::DivisibilityViolated { .. })
        ));
        let e = Exponents::new(vec![2]).unwrap();
        assert!(matches!(
            phi_factorization(&e, 1),
            Err(LatticeError::TooFewExponents)
        ));
    }

    #[test]
    fn rank_zero_lattice_works() {
        let lat = build_lattice(&Exponents::new(vec![3, 1]).unwrap());
        assert_eq!(lat.rank, 0);
        assert_eq!(total_monodromy(&lat).charpoly(), big(&[1]));
        assert!(verify_spectrum(&lat).is_ok());
    }
}
