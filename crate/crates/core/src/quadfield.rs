//! Exact arithmetic in the quadratic field `Q(ρ)`, `ρ² = (N−2)ρ − 1`.
//!
//! `ρ` is the larger root of `x² − (N−2)x + 1`, so `ρ·ρ' = 1` and
//! `ρ + ρ' = N − 2` for its conjugate `ρ' = 1/ρ`. Elements are stored as
//! `a + bρ` with arbitrary-precision rational coordinates.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element `a + bρ` of `Q(ρ)` for a fixed field parameter `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElem {
    a: BigRational,
    b: BigRational,
    n: u64,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl QuadElem {
    /// `a + bρ` in the field with parameter `n` (requires `n ≥ 5`, where
    /// `N(N−4)` is not a perfect square).
    pub fn new(a: BigRational, b: BigRational, n: u64) -> Self {
        debug_assert!(n >= 5, "Q(rho) degenerates for N < 5");
        Self { a, b, n }
    }

    pub fn from_rational(a: BigRational, n: u64) -> Self {
        Self::new(a, BigRational::zero(), n)
    }

    pub fn from_integer(a: i64, n: u64) -> Self {
        Self::from_rational(rat(a), n)
    }

    pub fn rho(n: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), n)
    }

    /// `Δ = ρ − ρ⁻¹ = 2ρ − (N − 2)`, whose square is `N(N−4)`.
    pub fn delta(n: u64) -> Self {
        Self::new(-rat(n as i64 - 2), rat(2), n)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    fn trace_coeff(&self) -> BigRational {
        rat(self.n as i64 - 2)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The rational value when the irrational part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    /// Galois conjugate `a + bρ' = a + b(N−2) − bρ`.
    pub fn conj(&self) -> Self {
        Self::new(
            &self.a + &self.b * self.trace_coeff(),
            -self.b.clone(),
            self.n,
        )
    }

    /// Field norm `(a + bρ)(a + bρ') = a² + (N−2)ab + b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a + self.trace_coeff() * &self.a * &self.b + &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        let norm = self.norm();
        if norm.is_zero() {
            return Err(Error::Domain("division by zero in Q(rho)".into()));
        }
        let c = self.conj();
        Ok(Self::new(c.a / &norm, c.b / norm, self.n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// `self^k` by square-and-multiply.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_integer(1, self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Real embedding via `ρ = (N − 2 + √(N(N−4)))/2`.
    ///
    /// Writes the element as `P + Q√D` and, when `P` and `Q√D` nearly cancel,
    /// divides the exact norm by the conjugate instead of subtracting.
    pub fn to_f64(&self) -> f64 {
        let n = self.n as f64;
        let sqrt_d = (n * (n - 4.0)).sqrt();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let p = (&self.a + &self.b * self.trace_coeff() * &half)
            .to_f64()
            .unwrap_or(f64::NAN);
        let q = (&self.b * &half).to_f64().unwrap_or(f64::NAN) * sqrt_d;
        if p.signum() == q.signum() || p == 0.0 || q == 0.0 {
            p + q
        } else {
            self.norm().to_f64().unwrap_or(f64::NAN) / (p - q)
        }
    }

    pub fn is_positive(&self) -> bool {
        // sign of P + Q√D decided exactly
        let two = rat(2);
        let p = &self.a * &two + &self.b * self.trace_coeff();
        let q = self.b.clone();
        let d = rat(self.n as i64 * (self.n as i64 - 4));
        match (p.is_negative(), q.is_negative()) {
            (false, false) => !(p.is_zero() && q.is_zero()),
            (true, true) => false,
            (false, true) => &p * &p > &q * &q * d,
            (true, false) => &q * &q * d > &p * &p,
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + ({})ρ", self.a, self.b)
        }
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.n, rhs.n);
        QuadElem::new(&self.a + &rhs.a, &self.b + &rhs.b, self.n)
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.n, rhs.n);
        QuadElem::new(&self.a - &rhs.a, &self.b - &rhs.b, self.n)
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    // (a + bρ)(c + dρ) = (ac − bd) + (ad + bc + (N−2)bd)ρ
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.n, rhs.n);
        let bd = &self.b * &rhs.b;
        QuadElem::new(
            &self.a * &rhs.a - &bd,
            &self.a * &rhs.b + &self.b * &rhs.a + self.trace_coeff() * bd,
            self.n,
        )
    }
}

impl Div for &QuadElem {
    type Output = QuadElem;
    /// Panics on division by zero; see [`QuadElem::checked_div`].
    fn div(self, rhs: &QuadElem) -> QuadElem {
        self.checked_div(rhs).expect("division by zero in Q(rho)")
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::new(-self.a.clone(), -self.b.clone(), self.n)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: QuadElem) -> QuadElem {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -&self
    }
}
