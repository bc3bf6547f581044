//! Exact scalars and the integer lattice in the plane.
//!
//! All geometry in this crate is carried out over [`Rational`] (arbitrary
//! precision fractions). Lattice directions and normals are small integer
//! vectors, stored as `i64` pairs.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Exact arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("the zero vector has no primitive decomposition")]
    ZeroVector,
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i64),
    #[error("lattice coordinate does not fit in 64 bits")]
    Overflow,
    #[error("invalid rational literal {0:?}")]
    Parse(String),
}

/// Builds `numer / denom`. Panics if `denom` is zero.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` with an optional leading minus sign.
pub fn parse_rational(s: &str) -> Result<Rational, LatticeError> {
    let err = || LatticeError::Parse(s.to_string());
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let digits = |t: &str| -> Result<BigInt, LatticeError> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        t.parse::<BigInt>().map_err(|_| err())
    };
    let value = match body.split_once('/') {
        Some((n, d)) => {
            let d = digits(d)?;
            if d.is_zero() {
                return Err(err());
            }
            Rational::new(digits(n)?, d)
        }
        None => Rational::from_integer(digits(body)?),
    };
    Ok(if negative { -value } else { value })
}

/// Formats as `"p/q"`, or `"p"` when the value is an integer.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Exact ceiling of a rational, as an integer.
pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

fn to_i64(n: &BigInt) -> Result<i64, LatticeError> {
    n.to_i64().ok_or(LatticeError::Overflow)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl LatticeVector {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// `det[self, other]`, positive when `other` is counterclockwise of `self`.
    pub fn det(self, other: Self) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn scale(self, c: i64) -> Self {
        Self::new(c * self.x, c * self.y)
    }

    /// Rotation by +90 degrees.
    pub fn rotate_ccw(self) -> Self {
        Self::new(-self.y, self.x)
    }

    /// Rotation by -90 degrees.
    pub fn rotate_cw(self) -> Self {
        Self::new(self.y, -self.x)
    }

    pub fn is_primitive(self) -> bool {
        self.x.gcd(&self.y) == 1
    }

    /// Compares by polar angle in `[0, 2π)`, measured from the positive x-axis.
    pub(crate) fn angle_cmp(self, other: Self) -> std::cmp::Ordering {
        let half = |v: Self| u8::from(!(v.y > 0 || (v.y == 0 && v.x > 0)));
        half(self).cmp(&half(other)).then_with(|| 0.cmp(&self.det(other)))
    }
}

impl Add for LatticeVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticeVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for LatticeVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePoint {
    pub x: Rational,
    pub y: Rational,
}

impl PlanePoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    /// `self + t * dir`.
    pub fn offset(&self, dir: LatticeVector, t: &Rational) -> Self {
        Self::new(&self.x + t * int(dir.x), &self.y + t * int(dir.y))
    }

    pub fn cross(&self, other: &Self) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }
}

impl Add for &PlanePoint {
    type Output = PlanePoint;
    fn add(self, o: &PlanePoint) -> PlanePoint {
        PlanePoint::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &PlanePoint {
    type Output = PlanePoint;
    fn sub(self, o: &PlanePoint) -> PlanePoint {
        PlanePoint::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Splits a nonzero rational vector into `size * direction` with `direction`
/// a primitive integer vector and `size > 0`.
pub fn primitive_decompose(x: &Rational, y: &Rational) -> Result<(Rational, LatticeVector), LatticeError> {
    if x.is_zero() && y.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    let common = x.denom().lcm(y.denom());
    let xi = x.numer() * (&common / x.denom());
    let yi = y.numer() * (&common / y.denom());
    let g = xi.gcd(&yi);
    let direction = LatticeVector::new(to_i64(&(&xi / &g))?, to_i64(&(&yi / &g))?);
    Ok((Rational::new(g, common), direction))
}

/// An affine map `p ↦ A p + b` with `A` an integer matrix of determinant ±1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineUnimodularMap {
    matrix: [[i64; 2]; 2],
    translation: PlanePoint,
}

impl AffineUnimodularMap {
    pub fn new(matrix: [[i64; 2]; 2], translation: PlanePoint) -> Result<Self, LatticeError> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if det.abs() != 1 {
            return Err(LatticeError::NotUnimodular(det));
        }
        Ok(Self { matrix, translation })
    }

    pub fn identity() -> Self {
        Self { matrix: [[1, 0], [0, 1]], translation: PlanePoint::origin() }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn translation(&self) -> &PlanePoint {
        &self.translation
    }

    pub fn det(&self) -> i64 {
        let m = self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, p: &PlanePoint) -> PlanePoint {
        let m = self.matrix;
        PlanePoint::new(
            int(m[0][0]) * &p.x + int(m[0][1]) * &p.y + &self.translation.x,
            int(m[1][0]) * &p.x + int(m[1][1]) * &p.y + &self.translation.y,
        )
    }

    /// Applies the linear part only.
    pub fn apply_linear(&self, v: LatticeVector) -> LatticeVector {
        let m = self.matrix;
        LatticeVector::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (self.matrix, other.matrix);
        let matrix = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        Self { matrix, translation: self.apply(&other.translation) }
    }

    pub fn inverse(&self) -> Self {
        let m = self.matrix;
        let d = self.det();
        let matrix = [[d * m[1][1], -d * m[0][1]], [-d * m[1][0], d * m[0][0]]];
        let linear = Self { matrix, translation: PlanePoint::origin() };
        let shifted = linear.apply(&self.translation);
        Self { matrix, translation: PlanePoint::new(-shifted.x, -shifted.y) }
    }
}

const GENERATORS: [[[i64; 2]; 2]; 3] = [[[1, 1], [0, 1]], [[0, -1], [1, 0]], [[1, 0], [0, -1]]];

/// Deterministic pseudo-random word of length `word_length` in the generators
/// of GL(2, ℤ), followed by a small rational translation.
pub fn random_unimodular_map(seed: u64, word_length: usize) -> AffineUnimodularMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut map = AffineUnimodularMap::identity();
    for _ in 0..word_length {
        let g = GENERATORS[rng.gen_range(0..GENERATORS.len())];
        let step = AffineUnimodularMap { matrix: g, translation: PlanePoint::origin() };
        map = step.compose(&map);
    }
    let mut coord = || rat(rng.gen_range(-24..=24), rng.gen_range(1..=12));
    map.translation = PlanePoint::new(coord(), coord());
    map
}
