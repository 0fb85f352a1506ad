//! Exact scalars: rationals times a square root, with an optional imaginary part.
//!
//! These carry the reference states and parsed matrix files without decimal truncation
//! (`1/81`, `√7/8`). Numerical work always happens on the `f64` image produced by
//! [`ExactMatrix::to_matrix`].

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::fmt::format_rational;
use crate::numerics::{BipartiteDims, Matrix, NumericsError};

/// `coeff · √radicand` with a square-free radicand. Zero is always stored with radicand 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    coeff: BigRational,
    radicand: u64,
}

impl Surd {
    pub fn new(coeff: BigRational, radicand: u64) -> Self {
        assert!(radicand > 0, "radicand must be positive");
        if coeff.is_zero() {
            return Self::zero();
        }
        let (square, free) = split_square(radicand);
        Self {
            coeff: coeff * BigRational::from_integer(BigInt::from(square)),
            radicand: free,
        }
    }

    pub fn rational(coeff: BigRational) -> Self {
        Self { coeff, radicand: 1 }
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::rational(ratio(numer, denom))
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 1
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.coeff)
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        if self.radicand == 1 {
            c
        } else {
            c * libm::sqrt(self.radicand as f64)
        }
    }

    pub fn abs(&self) -> Self {
        Self { coeff: self.coeff.abs(), radicand: self.radicand }
    }

    pub fn neg(&self) -> Self {
        Self { coeff: -self.coeff.clone(), radicand: self.radicand }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // both radicands square-free: a·b = g² · (a/g)(b/g)
        let g = self.radicand.gcd(&other.radicand);
        let free = (self.radicand / g) * (other.radicand / g);
        let coeff = &self.coeff * &other.coeff * BigRational::from_integer(BigInt::from(g));
        Self::new(coeff, free)
    }

    /// Sum of two surds; `None` when the radicands differ and neither side is zero.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        (self.radicand == other.radicand)
            .then(|| Self::new(&self.coeff + &other.coeff, self.radicand))
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 1 {
            return f.write_str(&format_rational(&self.coeff));
        }
        let numer = self.coeff.numer();
        let denom = self.coeff.denom();
        if numer.is_one() {
            write!(f, "sqrt({})", self.radicand)?;
        } else if *numer == -BigInt::one() {
            write!(f, "-sqrt({})", self.radicand)?;
        } else {
            write!(f, "{}*sqrt({})", numer, self.radicand)?;
        }
        if !denom.is_one() {
            write!(f, "/{}", denom)?;
        }
        Ok(())
    }
}

/// A complex number whose parts are [`Surd`]s.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exact {
    re: Surd,
    im: Surd,
}

impl Exact {
    pub fn new(re: Surd, im: Surd) -> Self {
        Self { re, im }
    }

    pub fn real(re: Surd) -> Self {
        Self { re, im: Surd::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Surd::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::real(Surd::rational(r))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::real(Surd::from_ratio(numer, denom))
    }

    pub fn re(&self) -> &Surd {
        &self.re
    }

    pub fn im(&self) -> &Surd {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The value as a rational, when it is real and free of radicals.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.is_real() {
            self.re.as_rational()
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Product of two real values; `None` for complex operands.
    pub fn mul_real(&self, other: &Self) -> Option<Self> {
        (self.is_real() && other.is_real()).then(|| Self::real(self.re.mul(&other.re)))
    }

    /// `|z|` as a surd. Available for real or purely imaginary values, and for complex values
    /// with rational parts (then `|z| = √(p/q) = √(pq)/q`) as long as `pq` fits in `u64`.
    pub fn modulus(&self) -> Option<Surd> {
        if self.im.is_zero() {
            return Some(self.re.abs());
        }
        if self.re.is_zero() {
            return Some(self.im.abs());
        }
        let (a, b) = (self.re.as_rational()?, self.im.as_rational()?);
        let sq = a * a + b * b;
        let radicand = (sq.numer() * sq.denom()).to_u64()?;
        let denom = BigRational::from_integer(sq.denom().clone());
        Some(Surd::new(denom.recip(), radicand))
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.re)?;
        if !self.im.is_zero() {
            write!(f, "+{}i", self.im)?;
        }
        Ok(())
    }
}

impl From<BigRational> for Exact {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

/// Square matrix of exact entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    n: usize,
    entries: Vec<Exact>,
}

impl ExactMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Exact) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Exact>>) -> Result<Self, NumericsError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(NumericsError::DimensionMismatch { expected: n, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Exact {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Exact] {
        &self.entries
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(i, j).to_complex())
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| *self.get(i, j) == self.get(j, i).conj()))
    }

    /// Entry-wise rationals, when every entry is a real rational.
    pub fn rational_entries(&self) -> Option<Vec<BigRational>> {
        self.entries.iter().map(|e| e.as_rational().cloned()).collect()
    }

    /// Exact image of [`crate::numerics::partial_transpose`].
    pub fn partial_transpose(&self, dims: BipartiteDims) -> Result<Self, NumericsError> {
        dims.check_order(self.n)?;
        let d2 = dims.d2();
        Ok(Self::from_fn(self.n, |r, c| {
            let (a, alpha) = (r / d2, r % d2);
            let (b, beta) = (c / d2, c % d2);
            self.get(a * d2 + beta, b * d2 + alpha).clone()
        }))
    }

    /// Multiplies every entry by a rational.
    pub fn scale(&self, factor: &BigRational) -> Self {
        let s = Surd::rational(factor.clone());
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| Exact::new(e.re.mul(&s), e.im.mul(&s)))
                .collect(),
        }
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| alloc::format!("{}", self.get(i, j))).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// `numer/denom` as a reduced big rational.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Exact value of a decimal literal such as `0.25`, `-1e-3` or `3`.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut all = String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let numer: BigInt = all.parse().ok()?;
    let scale = exponent.checked_sub(i32::try_from(frac_part.len()).ok()?)?;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(numer);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, scale.unsigned_abs() as usize));
    }
    Some(if negative { -r } else { r })
}

fn split_square(k: u64) -> (u64, u64) {
    let mut square = 1u64;
    let mut free = k;
    let mut f = 2u64;
    while f * f <= free {
        while free % (f * f) == 0 {
            free /= f * f;
            square *= f;
        }
        f += 1;
    }
    (square, free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    #[test]
    fn surd_simplifies_radicand() {
        let s = Surd::new(ratio(1, 3), 12);
        assert_eq!(s.radicand(), 3);
        assert_eq!(s.coeff(), &ratio(2, 3));
        assert_eq!(format!("{}", s), "2*sqrt(3)/3");
    }

    #[test]
    fn surd_products_collapse_to_rationals() {
        let a = Surd::new(ratio(1, 4), 7);
        let sq = a.mul(&a);
        assert!(sq.is_rational());
        assert_eq!(sq.coeff(), &ratio(7, 16));
        let b = Surd::new(ratio(1, 2), 2).mul(&Surd::new(ratio(1, 1), 6));
        assert_eq!((b.coeff().clone(), b.radicand()), (ratio(1, 1), 3));
    }

    #[test]
    fn display_forms() {
        assert_eq!(format!("{}", Surd::new(ratio(1, 8), 7)), "sqrt(7)/8");
        assert_eq!(format!("{}", Surd::new(ratio(-5, 16), 7)), "-5*sqrt(7)/16");
        assert_eq!(format!("{}", Surd::from_ratio(-1, 81)), "-1/81");
        assert_eq!(format!("{}", Surd::zero()), "0");
        let z = Exact::new(Surd::from_ratio(1, 2), Surd::from_ratio(-1, 3));
        assert_eq!(format!("{}", z), "1/2+-1/3i");
    }

    #[test]
    fn checked_add_requires_matching_radicands() {
        let a = Surd::new(ratio(1, 8), 7);
        assert!(a.checked_add(&Surd::from_ratio(3, 8)).is_none());
        assert_eq!(a.checked_add(&a).unwrap(), Surd::new(ratio(1, 4), 7));
        assert_eq!(a.checked_add(&Surd::zero()).unwrap(), a);
    }

    #[test]
    fn exact_partial_transpose_matches_index_rule() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let m = ExactMatrix::from_fn(4, |i, j| Exact::from_ratio((4 * i + j) as i64, 1));
        let p = m.partial_transpose(dims).unwrap();
        // (a,α),(b,β) <- (a,β),(b,α): entry (0,3) = (0,0),(1,1) <- (0,1),(1,0) = entry (1,2)
        assert_eq!(p.get(0, 3), m.get(1, 2));
        assert_eq!(p.partial_transpose(dims).unwrap(), m);
    }

    #[test]
    fn hermitian_check_uses_conjugate() {
        let z = Exact::new(Surd::from_ratio(1, 4), Surd::from_ratio(1, 8));
        let m = ExactMatrix::from_rows(vec![
            vec![Exact::from_ratio(1, 2), z.clone()],
            vec![z.conj(), Exact::from_ratio(1, 2)],
        ])
        .unwrap();
        assert!(m.is_hermitian());
        assert!(m.rational_entries().is_none());
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_decimal("0.25"), Some(ratio(1, 4)));
        assert_eq!(parse_decimal("-1e-3"), Some(ratio(-1, 1000)));
        assert_eq!(parse_decimal("2.5E2"), Some(ratio(250, 1)));
        assert_eq!(parse_decimal(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_decimal("0.01"), Some(ratio(1, 100)));
        assert_eq!(parse_decimal("1/2"), None);
        assert_eq!(parse_decimal("-"), None);
        assert_eq!(parse_decimal("1e"), None);
    }

    #[test]
    fn modulus_of_complex_rational() {
        // |3/5 + 4/5 i| = 1
        let z = Exact::new(Surd::from_ratio(3, 5), Surd::from_ratio(4, 5));
        assert_eq!(z.modulus(), Some(Surd::from_ratio(1, 1)));
        let w = Exact::new(Surd::from_ratio(1, 2), Surd::from_ratio(1, 2));
        assert_eq!(format!("{}", w.modulus().unwrap()), "sqrt(2)/2");
    }
}
