//! Seeded random generators for test matrices and sample points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ExactMatrix, Rational};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Numerator uniform in `[-9, 9]`, denominator uniform in `[1, 9]`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=9)))
}

/// Positive rational with numerator and denominator in `[1, 9]`.
pub fn random_conductance<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    BigRational::new(BigInt::from(rng.gen_range(1i64..=9)), BigInt::from(rng.gen_range(1i64..=9)))
}

pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ExactMatrix {
    ExactMatrix::from_fn(rows, cols, |_, _| random_rational(rng))
}

/// A symmetric matrix with zero row sums and random off-diagonal entries.
pub fn random_symmetric_zero_rowsum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = random_rational(rng);
            m.set(i, j, x.clone());
            m.set(j, i, x);
        }
    }
    for i in 0..n {
        let s = (0..n).filter(|&j| j != i).fold(Rational::zero(), |acc, j| acc + m.get(i, j));
        m.set(i, i, -s);
    }
    m
}
