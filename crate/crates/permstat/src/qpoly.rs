//! Distribution polynomials with exact non-negative integer coefficients.
//!
//! `coeffs[x]` counts how many members of the underlying set take the value
//! `x`. All arithmetic is checked; an overflow aborts with a message instead
//! of wrapping or saturating.

use std::fmt;
use std::ops::Add;

use serde::Serialize;
use thiserror::Error;

/// A polynomial in `q` with `u64` coefficients, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct QPolynomial {
    coeffs: Vec<u64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QPolyError {
    #[error("q-factorial is defined for n >= 1")]
    ZeroLength,
}

impl QPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    pub fn from_coeffs(coeffs: Vec<u64>) -> Self {
        let mut poly = Self { coeffs };
        poly.trim();
        poly
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Sum of all coefficients: the cardinality of the underlying set.
    pub fn total(&self) -> u64 {
        self.coeffs.iter().fold(0u64, |acc, &c| {
            acc.checked_add(c)
                .expect("coefficient sum overflows u64")
        })
    }

    /// Adds one member with statistic value `exponent`.
    pub fn bump(&mut self, exponent: u64) {
        let idx = usize::try_from(exponent).expect("statistic value exceeds addressable range");
        if idx >= self.coeffs.len() {
            self.coeffs.resize(idx + 1, 0);
        }
        self.coeffs[idx] = self.coeffs[idx]
            .checked_add(1)
            .expect("distribution coefficient overflows u64");
    }

    pub fn checked_mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let prod = a
                    .checked_mul(b)
                    .expect("polynomial coefficient product overflows u64");
                coeffs[i + j] = coeffs[i + j]
                    .checked_add(prod)
                    .expect("polynomial coefficient sum overflows u64");
            }
        }
        Self::from_coeffs(coeffs)
    }
}

impl Add for QPolynomial {
    type Output = QPolynomial;

    fn add(self, rhs: QPolynomial) -> QPolynomial {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        for (i, c) in short.coeffs.into_iter().enumerate() {
            long.coeffs[i] = long.coeffs[i]
                .checked_add(c)
                .expect("polynomial coefficient sum overflows u64");
        }
        long
    }
}

/// Renders in the usual generating-function style, e.g. `1 + 2q + 2q^2 + q^3`.
impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (exp, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (exp, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "{c}q")?,
                (_, 1) => write!(f, "q^{exp}")?,
                (_, _) => write!(f, "{c}q^{exp}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `[k]_q = 1 + q + .. + q^{k-1}`.
pub fn q_integer(k: usize) -> QPolynomial {
    QPolynomial::from_coeffs(vec![1; k])
}

/// `[n]_q! = [n]_q [n-1]_q .. [1]_q`; degree `n(n-1)/2`, coefficient sum `n!`.
pub fn q_factorial(n: usize) -> Result<QPolynomial, QPolyError> {
    if n == 0 {
        return Err(QPolyError::ZeroLength);
    }
    let mut acc = QPolynomial::one();
    for k in 2..=n {
        acc = acc.checked_mul(&q_integer(k));
    }
    Ok(acc)
}

/// Exact coefficient-wise equality (both sides are kept trimmed).
pub fn equidistributed(a: &QPolynomial, b: &QPolynomial) -> bool {
    a == b
}
