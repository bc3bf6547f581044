//! Blowup vectors `(λ; δ_1, …, δ_k)` and their arithmetic: reducedness,
//! Cremona reduction, the trapezoid parameters, the nonexistence criteria and
//! the upper bound on the number of toric actions.
//!
//! Reduction repeatedly sorts the blowup sizes and applies the Cremona move
//! `(λ; δ1, δ2, δ3, …) ↦ (2λ−δ1−δ2−δ3; λ−δ2−δ3, λ−δ1−δ3, λ−δ1−δ2, …)` while
//! `δ1 + δ2 + δ3 > λ`. A vector is treated as a blowup class exactly when this
//! terminates with all entries positive; nothing stronger is checked.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::lattice::{self, ceil, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("need at least 3 blowups, got {0}")]
    TooFewBlowups(usize),
    #[error("entry at position {position} must be positive, got {value}")]
    NonPositive { position: usize, value: Rational },
    #[error("not a blowup class: reduction produced a non-positive entry ({0})")]
    NotABlowupClass(String),
    #[error("vector is not reduced")]
    NotReduced,
    #[error("malformed vector: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlowupVector {
    lambda: Rational,
    deltas: Vec<Rational>,
}

impl BlowupVector {
    /// Positions in errors: 0 is `λ`, `i` is `δ_i`.
    pub fn new(lambda: Rational, deltas: Vec<Rational>) -> Result<Self, BlowupError> {
        if deltas.len() < 3 {
            return Err(BlowupError::TooFewBlowups(deltas.len()));
        }
        for (position, value) in std::iter::once(&lambda).chain(&deltas).enumerate() {
            if !value.is_positive() {
                return Err(BlowupError::NonPositive { position, value: value.clone() });
            }
        }
        Ok(Self { lambda, deltas })
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn deltas(&self) -> &[Rational] {
        &self.deltas
    }

    /// Number of blowups.
    pub fn k(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_reduced(&self) -> bool {
        let d = &self.deltas;
        d.windows(2).all(|w| w[0] >= w[1]) && &d[0] + &d[1] + &d[2] <= self.lambda
    }

    pub fn reduce(&self) -> Result<Self, BlowupError> {
        let mut lambda = self.lambda.clone();
        let mut deltas = self.deltas.clone();
        loop {
            deltas.sort_by(|a, b| b.cmp(a));
            let excess = &deltas[0] + &deltas[1] + &deltas[2] - &lambda;
            if !excess.is_positive() {
                return Ok(Self { lambda, deltas });
            }
            let (d1, d2, d3) = (deltas[0].clone(), deltas[1].clone(), deltas[2].clone());
            deltas[0] = &lambda - &d2 - &d3;
            deltas[1] = &lambda - &d1 - &d3;
            deltas[2] = &lambda - &d1 - &d2;
            lambda -= excess;
            let bad = std::iter::once(&lambda).chain(&deltas).any(|x| !x.is_positive());
            if bad {
                let partial = Self { lambda, deltas };
                return Err(BlowupError::NotABlowupClass(partial.to_string()));
            }
        }
    }

    /// `δ = λ − δ1 − δ2`, `a = λ − δ2`, `b = λ − δ1`.
    pub fn derived_params(&self) -> Result<DerivedParams, BlowupError> {
        if !self.is_reduced() {
            return Err(BlowupError::NotReduced);
        }
        let (l, d1, d2) = (&self.lambda, &self.deltas[0], &self.deltas[1]);
        let p = DerivedParams { delta: l - d1 - d2, a: l - d2, b: l - d1 };
        assert!(p.delta.is_positive() && p.b.is_positive() && p.a >= p.b, "reduced vector with bad parameters");
        Ok(p)
    }

    pub fn nonexistence_check(&self) -> Result<Verdict, BlowupError> {
        let params = self.derived_params()?;
        let d = &self.deltas;
        let k = d.len();
        if k >= 6 && d[2..6].iter().all(|x| *x == params.delta) {
            return Ok(Verdict::NoneExist(NonexistenceReason::EqualsDelta));
        }
        // δ_i = … = δ_{2i+2}, 1-based
        for i in 1.. {
            let last = 2 * i + 2;
            if last > k {
                break;
            }
            if d[i - 1..last].iter().all(|x| *x == d[i - 1]) {
                return Ok(Verdict::NoneExist(NonexistenceReason::LongRun { start: i }));
            }
        }
        Ok(Verdict::Inconclusive)
    }

    pub fn bound_report(&self) -> Result<BoundReport, BlowupError> {
        let p = self.derived_params()?;
        let (lambda, d) = (&self.lambda, &self.deltas);
        let k = d.len();
        let width_ceil = ceil(&(&p.a / &p.b));
        let skew_ceil = ceil(&((&d[0] - &d[1]) / &p.b));
        let factor = (&width_ceil + &skew_ceil).to_biguint().expect("non-negative");
        let bound = factor * factorial(k + 2) / BigUint::from(24u32);

        let reach = Rational::from_integer(width_ceil) * &p.b;
        let tail_sum = |from: usize| d[from..].iter().sum::<Rational>();
        let tail3 = tail_sum(2);
        let conditions =
            [reach < *lambda, (3..k).all(|j| tail_sum(j) < d[j - 1]), tail3 < p.delta, tail3 < lambda - &reach];
        Ok(BoundReport { bound, conditions, attained: conditions.iter().all(|c| *c) })
    }

    /// The chop sizes `δ, δ3, …, δk` in their written order.
    pub fn chop_sizes(&self) -> Result<Vec<Rational>, BlowupError> {
        let p = self.derived_params()?;
        Ok(std::iter::once(p.delta).chain(self.deltas[2..].iter().cloned()).collect())
    }

    /// `(λ² − Σ δ_i²) / 2`, the area of every polygon in the census.
    pub fn expected_area(&self) -> Rational {
        let sq: Rational = self.deltas.iter().map(|x| x * x).sum();
        (&self.lambda * &self.lambda - sq) / Rational::from_integer(BigInt::from(2))
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

impl fmt::Display for BlowupVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.lambda)?;
        for (i, d) in self.deltas.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { ", " }, d)?;
        }
        Ok(())
    }
}

/// Parses `"λ; δ1, δ2, …, δk"` with `p/q` or integer tokens.
pub fn parse_vector_with(s: &str, token: impl Fn(&str) -> Option<Rational>) -> Result<BlowupVector, BlowupError> {
    let (head, tail) = s.split_once(';').ok_or_else(|| BlowupError::Parse("expected \"λ; δ1, δ2, …\"".into()))?;
    let parse = |position: usize, t: &str| {
        let t = t.trim();
        token(t).ok_or_else(|| BlowupError::Parse(format!("bad token {t:?} at position {position}")))
    };
    let lambda = parse(0, head)?;
    let deltas = tail.split(',').enumerate().map(|(i, t)| parse(i + 1, t)).collect::<Result<Vec<_>, _>>()?;
    BlowupVector::new(lambda, deltas)
}

impl FromStr for BlowupVector {
    type Err = BlowupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_vector_with(s, |t| lattice::parse_rational(t).ok())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivedParams {
    pub delta: Rational,
    pub a: Rational,
    pub b: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NonexistenceReason {
    /// `λ − δ1 − δ2 = δ3 = δ4 = δ5 = δ6`.
    EqualsDelta,
    /// `δ_i = δ_{i+1} = … = δ_{2i+2}` for `i = start`.
    LongRun { start: usize },
}

impl fmt::Display for NonexistenceReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EqualsDelta => write!(f, "lambda - delta1 - delta2 = delta3 = delta4 = delta5 = delta6"),
            Self::LongRun { start } => {
                write!(f, "delta{} = ... = delta{} (i = {})", start, 2 * start + 2, start)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    NoneExist(NonexistenceReason),
    Inconclusive,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Self::NoneExist(_) => "none-exist",
            Self::Inconclusive => "inconclusive",
        }
    }

    pub fn reason(&self) -> Option<NonexistenceReason> {
        match self {
            Self::NoneExist(r) => Some(*r),
            Self::Inconclusive => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundReport {
    pub bound: BigUint,
    pub conditions: [bool; 4],
    pub attained: bool,
}

impl BoundReport {
    pub fn bound_u64(&self) -> Option<u64> {
        self.bound.to_u64()
    }
}
